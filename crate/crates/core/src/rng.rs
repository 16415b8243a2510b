//! Counter-based random streams for reproducible parallel Monte Carlo.
//!
//! Every trial owns an independent stream derived from
//! `(seed, stream_id, trial_index)`, so a draw depends only on those three
//! values and the position within the trial — never on worker count or
//! execution order.

/// Identifies a reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Derive a disjoint substream, e.g. one per experiment curve.
    pub fn substream(&self, index: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: mix64(self.stream_id.wrapping_add(GOLDEN.wrapping_mul(index ^ 0xA5A5_5A5A))),
        }
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer: a bijective 64-bit mix.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial generator: a splitmix64 sequence whose state is a mix of the
/// stream spec and the trial index.
#[derive(Debug, Clone)]
pub struct TrialRng {
    state: u64,
}

impl TrialRng {
    pub fn new(spec: RngSpec, trial: u64) -> Self {
        let mut base = mix64(spec.seed ^ 0x6A09_E667_F3BC_C909);
        base = mix64(base.wrapping_add(spec.stream_id.wrapping_mul(0xD134_2543_DE82_EF95)));
        base = mix64(base.wrapping_add(trial.wrapping_mul(GOLDEN)));
        Self { state: base }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform draw on the half-open interval (0, 1].
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) + 1) as f64 * SCALE
    }

    /// Rayleigh amplitude with scale 1/sqrt(2): mean sqrt(pi)/2, E[r^2] = 1.
    #[inline]
    pub fn rayleigh(&mut self) -> f64 {
        (-self.next_unit().ln()).sqrt()
    }

    /// Exponential with the given mean.
    #[inline]
    pub fn exponential(&mut self, mean: f64) -> f64 {
        -mean * self.next_unit().ln()
    }
}
