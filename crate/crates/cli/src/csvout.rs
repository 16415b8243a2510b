//! CSV emission: one header row, one row per sweep point, floats with ten
//! significant digits, missing methods as the literal text NA.

/// Format a float with ten significant digits (scientific form keeps the
/// output diff-friendly at any magnitude).
pub fn format_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.fract() == 0.0 && v.abs() < 1e10 {
        // integral sweep values print without an exponent
        return format!("{v}");
    }
    format!("{v:.9e}")
}

/// A rectangular table of optional floats.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Option<f64>]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    /// Column index by name.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell value by (row, column name).
    pub fn value(&self, row: usize, column: &str) -> Option<f64> {
        let ci = self.column_index(column)?;
        self.rows.get(row).and_then(|r| r[ci])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Some(v) => format_sig10(*v),
                    None => "NA".to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(format_sig10(0.0), "0");
        assert_eq!(format_sig10(5.0), "5");
        assert_eq!(format_sig10(-12.0), "-12");
        assert_eq!(format_sig10(0.125), "1.250000000e-1");
        assert_eq!(format_sig10(1.0e-30), "1.000000000e-30");
        assert_eq!(format_sig10(std::f64::consts::PI), "3.141592654e0");
    }

    #[test]
    fn na_cells_render_as_text() {
        let mut t = CsvTable::new(vec!["sweep".into(), "x".into()]);
        t.push_row(vec![Some(1.0), None]);
        assert_eq!(t.to_csv(), "sweep,x\n1,NA\n");
        assert_eq!(t.value(0, "x"), None);
        assert_eq!(t.value(0, "sweep"), Some(1.0));
    }
}
