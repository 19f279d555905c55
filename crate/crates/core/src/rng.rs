//! Deterministic pseudo-random streams.
//!
//! Every stream is derived from explicit integer keys (seed, step, link id)
//! via a splitmix-style mixer, so any draw can be reproduced without
//! replaying a shared sequential generator. This keeps traces reproducible
//! and independent of evaluation order.
//!
//! Not cryptographically secure; simulation use only.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic stream of pseudo-random values.
#[derive(Clone, Debug)]
pub struct Stream {
    state: u64,
}

impl Stream {
    /// Sequential stream from a single seed.
    pub fn seeded(seed: u64) -> Self {
        Self {
            state: mix64(seed ^ GOLDEN),
        }
    }

    /// Stream keyed by a tuple of values; identical keys yield identical
    /// streams regardless of where or when they are created.
    pub fn keyed(parts: &[u64]) -> Self {
        let mut acc = GOLDEN;
        for (k, &p) in parts.iter().enumerate() {
            acc = mix64(acc ^ p.wrapping_add((k as u64 + 1).wrapping_mul(GOLDEN)));
        }
        Self { state: acc }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Next sample in `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64) / SCALE
    }

    /// Next sample uniform in `[lo, hi)`.
    #[inline]
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Next sample uniform in the half-open interval `(lo, hi]`.
    #[inline]
    pub fn next_in_open_lo(&mut self, lo: f64, hi: f64) -> f64 {
        hi - (hi - lo) * self.next_f64()
    }

    /// Next standard normal sample (Box-Muller).
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1], keeps ln finite
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
