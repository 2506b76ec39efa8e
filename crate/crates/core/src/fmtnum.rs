//! Locale-free, round-trip float formatting for CSV/JSON outputs.

use std::fmt;

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.0;
        let a = x.abs();
        if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
            write!(f, "{x}")
        } else {
            write!(f, "{x:e}")
        }
    }
}
