use serde::{Deserialize, Serialize};

/// Mode-space truncation: retained mode indices run n = -K..K, so the
/// mode space has dimension 2K+1 and the full Floquet space 2(2K+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeTruncation {
    pub k: i64,
}

impl ModeTruncation {
    pub fn new(k: i64) -> Self {
        assert!(k >= 0, "mode truncation must be non-negative");
        Self { k }
    }

    /// 2K+1
    pub fn mode_dim(&self) -> usize {
        (2 * self.k + 1) as usize
    }

    /// Full Floquet dimension for a spin-1/2: 2(2K+1).
    pub fn dim(&self) -> usize {
        2 * self.mode_dim()
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        -self.k..=self.k
    }

    pub fn contains(&self, n: i64) -> bool {
        n.abs() <= self.k
    }
}

/// A basis state |p n> of the Floquet space: p is the spin index
/// (0 = |+1/2>, 1 = |-1/2>) and n the mode index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FloquetIndex {
    pub p: u8,
    pub n: i64,
}

impl FloquetIndex {
    pub fn new(p: u8, n: i64) -> Self {
        assert!(p < 2, "spin index must be 0 or 1");
        Self { p, n }
    }

    /// epsilon_p = p - delta_{p,0}: -1 for p=0, +1 for p=1.
    pub fn epsilon(&self) -> i64 {
        if self.p == 0 {
            -1
        } else {
            1
        }
    }

    /// Row index under mode-major, spin-minor ordering.
    pub fn flatten(&self, trunc: ModeTruncation) -> usize {
        assert!(trunc.contains(self.n), "mode index outside truncation");
        ((self.n + trunc.k) * 2) as usize + self.p as usize
    }

    pub fn unflatten(i: usize, trunc: ModeTruncation) -> Self {
        assert!(i < trunc.dim());
        Self {
            p: (i % 2) as u8,
            n: (i / 2) as i64 - trunc.k,
        }
    }
}

/// epsilon_p for a bare spin index.
pub(crate) fn epsilon(p: u8) -> f64 {
    if p == 0 {
        -1.0
    } else {
        1.0
    }
}
