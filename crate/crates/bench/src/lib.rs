//! Shared fixtures for the benchmarks.

use g2moduli_core::liealg::LieAlgebra;
use g2moduli_core::notation::parse_salamon;

/// n10 = (0,0,0,12,13,23,0), the workhorse example: nontrivial derivation
/// algebra, closed and coclosed reference forms.
pub fn n10() -> LieAlgebra {
    LieAlgebra::from_salamon(&parse_salamon("(0,0,0,12,13,23,0)").unwrap()).unwrap()
}
