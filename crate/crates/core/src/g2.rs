//! G2-specific layer: positivity of 3-forms, induced metric, stabilizers
//! inside the derivation algebra, moduli dimensions, and the perturbation
//! search for principal orbits.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactla::{rat, Definiteness, Rational, RationalMatrix};
use crate::exterior::{basis_tuples, KForm, Vector};
use crate::liealg::{matrix_bracket, DerivationSpace, LieAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuliKind {
    Closed,
    Coclosed,
}

impl fmt::Display for ModuliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuliKind::Closed => "closed",
            ModuliKind::Coclosed => "coclosed",
        })
    }
}

/// Positive 3-form with its cached pairing matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct G2ThreeForm {
    pub form: KForm,
    pub b_matrix: RationalMatrix,
}

impl G2ThreeForm {
    /// Accepts a 3-form whose pairing is definite (either sign; negative
    /// definite means positive for the opposite orientation).
    pub fn new(form: KForm) -> Option<Self> {
        let b = bilinear_b(&form);
        match b.is_definite().ok()? {
            Definiteness::PositiveDefinite | Definiteness::NegativeDefinite => {
                Some(G2ThreeForm { form, b_matrix: b })
            }
            _ => None,
        }
    }
}

/// Where a coclosed 4-form came from.
#[derive(Debug, Clone, PartialEq)]
pub enum FourFormProvenance {
    Direct,
    SU3Data {
        omega: KForm,
        psi_minus: KForm,
        eta: KForm,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct G2FourForm {
    pub form: KForm,
    pub provenance: FourFormProvenance,
}

/// Stabilizer of a form inside Der(g).
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerResult {
    pub dimension: usize,
    pub basis: Vec<RationalMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub epsilon: Rational,
    pub max_coeff: i64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            epsilon: rat(1, 10),
            max_coeff: 1,
            trials: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuliReport {
    pub name: String,
    pub kind: ModuliKind,
    pub dim_v: usize,
    pub dim_aut: usize,
    pub stab_given: usize,
    pub stab_best: usize,
    pub best_perturbation: Option<KForm>,
    pub moduli_dim: usize,
    pub is_upper_bound_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliUnderflow {
    pub dim_v: usize,
    pub dim_aut: usize,
    pub stab: usize,
}

impl fmt::Display for ModuliUnderflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "moduli dimension underflow: {} - {} + {} < 0",
            self.dim_v, self.dim_aut, self.stab
        )
    }
}

impl std::error::Error for ModuliUnderflow {}

/// The pairing b_{ij} = coefficient of e^{1..7} in i_{e_i}phi ^ i_{e_j}phi ^ phi.
pub fn bilinear_b(phi: &KForm) -> RationalMatrix {
    assert_eq!(phi.ambient_dim(), 7, "G2 pairing needs ambient dimension 7");
    assert!(
        phi.degree() == 3 || phi.is_zero(),
        "pairing defined for 3-forms"
    );
    let contractions: Vec<KForm> = (1..=7)
        .map(|i| phi.contract(&Vector::basis(7, i)))
        .collect();
    let top = [1u8, 2, 3, 4, 5, 6, 7];
    RationalMatrix::from_fn(7, 7, |r, c| {
        contractions[r]
            .wedge(&contractions[c])
            .wedge(phi)
            .coefficient(&top)
    })
}

/// True iff the pairing is definite (either orientation).
pub fn is_positive_3form(phi: &KForm) -> bool {
    matches!(
        bilinear_b(phi).is_definite(),
        Ok(Definiteness::PositiveDefinite | Definiteness::NegativeDefinite)
    )
}

/// The induced metric g = b / (6 (det b / 6^7)^{1/9}), with b flipped to the
/// positive orientation first. The only floating-point computation in the
/// crate.
pub fn metric_approx(phi: &KForm) -> Option<[[f64; 7]; 7]> {
    let mut b = bilinear_b(phi);
    match b.is_definite().ok()? {
        Definiteness::PositiveDefinite => {}
        Definiteness::NegativeDefinite => b = b.neg(),
        _ => return None,
    }
    let det = b.determinant().ok()?.to_f64()?;
    let scale = 6.0 * (det / 6f64.powi(7)).powf(1.0 / 9.0);
    let mut g = [[0.0; 7]; 7];
    for (r, row) in g.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            *entry = b.get(r, c).to_f64()? / scale;
        }
    }
    Some(g)
}

/// phi ^ d(phi) = 0, the tau_0 = 0 criterion, checked exactly.
pub fn purely_coclosed_indicator(phi: &KForm, g: &LieAlgebra) -> bool {
    phi.wedge(&g.differential(phi)).is_zero()
}

/// psi = 1/2 omega^2 + psi_minus ^ eta.
pub fn build_psi_su3(omega: &KForm, psi_minus: &KForm, eta: &KForm) -> G2FourForm {
    let half = rat(1, 2);
    let form = omega
        .wedge(omega)
        .scale(&half)
        .add(&psi_minus.wedge(eta));
    G2FourForm {
        form,
        provenance: FourFormProvenance::SU3Data {
            omega: omega.clone(),
            psi_minus: psi_minus.clone(),
            eta: eta.clone(),
        },
    }
}

/// Natural action of gl(7) on k-forms:
/// (D.alpha)(v1,...,vk) = -sum_i alpha(v1,...,D v_i,...,vk).
/// On monomials this is D.e^k = -sum_j D_{kj} e^j extended as a degree-0
/// derivation of the exterior algebra.
pub fn derivation_action(d: &RationalMatrix, alpha: &KForm) -> KForm {
    let n = alpha.ambient_dim();
    assert_eq!(d.rows(), n, "matrix size must match ambient dimension");
    assert_eq!(d.cols(), n);
    let mut out = KForm::zero(n, alpha.degree());
    for (tuple, coeff) in alpha.terms() {
        for (slot, &idx) in tuple.iter().enumerate() {
            // Replace e^{idx} by D.e^{idx} = -sum_j D_{idx,j} e^j.
            for j in 1..=n {
                let entry = d.get(idx as usize - 1, j - 1);
                if entry.is_zero() {
                    continue;
                }
                let mut new_tuple = tuple.to_vec();
                new_tuple[slot] = j as u8;
                let term = KForm::monomial(n, &new_tuple, -(coeff * entry));
                out = out.add(&term);
            }
        }
    }
    out
}

/// Stabilizer of `alpha` inside the given span of derivations: solves
/// derivation_action(sum x_i D_i, alpha) = 0 for the coefficients x.
pub fn stabilizer_in(der: &DerivationSpace, alpha: &KForm) -> StabilizerResult {
    let n = alpha.ambient_dim();
    let k = alpha.degree();
    let eqns = basis_tuples(n, k).len();
    let unknowns = der.dim();
    if unknowns == 0 {
        return StabilizerResult {
            dimension: 0,
            basis: Vec::new(),
        };
    }
    // Column i = coordinates of D_i . alpha.
    let actions: Vec<Vec<Rational>> = der
        .basis
        .iter()
        .map(|d| derivation_action(d, alpha).coordinates())
        .collect();
    let m = RationalMatrix::from_fn(eqns, unknowns, |r, c| actions[c][r].clone());
    let kernel = m.kernel_basis();
    let basis: Vec<RationalMatrix> = kernel
        .iter()
        .map(|x| {
            let mut acc = RationalMatrix::zeros(der.algebra_dim(), der.algebra_dim());
            for (c, d) in x.iter().zip(&der.basis) {
                if !c.is_zero() {
                    acc = acc.add(&d.scale(c)).expect("same size");
                }
            }
            acc
        })
        .collect();
    StabilizerResult {
        dimension: basis.len(),
        basis,
    }
}

/// Stabilizer of `alpha` inside Der(g).
pub fn stabilizer_dimension(g: &LieAlgebra, alpha: &KForm) -> StabilizerResult {
    stabilizer_in(&g.derivation_space(), alpha)
}

/// True iff all pairwise brackets of the basis vanish.
pub fn stabilizer_is_abelian(s: &StabilizerResult) -> bool {
    for (i, a) in s.basis.iter().enumerate() {
        for b in &s.basis[i + 1..] {
            if !matrix_bracket(a, b).expect("same size").is_zero() {
                return false;
            }
        }
    }
    true
}

/// dim V - dim Aut + stab, with explicit underflow reporting.
pub fn moduli_dimension(
    dim_v: usize,
    dim_aut: usize,
    stab: usize,
) -> Result<usize, ModuliUnderflow> {
    (dim_v + stab)
        .checked_sub(dim_aut)
        .ok_or(ModuliUnderflow { dim_v, dim_aut, stab })
}

/// Searches for a closed (and, in degree 3, positive) perturbation
/// alpha + eps*beta with smaller stabilizer. Published perturbations are
/// tried first; then `trials` seeded random integer combinations of the
/// closed-form kernel basis. Deterministic given (seed, trials).
#[allow(clippy::too_many_arguments)]
pub fn principal_orbit_search(
    g: &LieAlgebra,
    name: &str,
    kind: ModuliKind,
    alpha: &KForm,
    published: &[KForm],
    opts: &SearchOptions,
) -> ModuliReport {
    let degree = match kind {
        ModuliKind::Closed => 3,
        ModuliKind::Coclosed => 4,
    };
    assert!(
        alpha.is_zero() || alpha.degree() == degree,
        "form degree does not match kind"
    );
    let der = g.derivation_space();
    let dim_aut = der.dim();
    let dim_v = g.closed_forms_dim(degree);
    let stab_given = stabilizer_in(&der, alpha).dimension;

    let mut stab_best = stab_given;
    let mut best_perturbation: Option<KForm> = None;

    let consider = |beta: &KForm,
                        stab_best: &mut usize,
                        best: &mut Option<KForm>|
     -> bool {
        let candidate = alpha.add(&beta.scale(&opts.epsilon));
        if kind == ModuliKind::Closed && !is_positive_3form(&candidate) {
            return false;
        }
        debug_assert!(g.differential(&candidate).is_zero());
        let s = stabilizer_in(&der, &candidate).dimension;
        if s < *stab_best {
            *stab_best = s;
            *best = Some(beta.clone());
        }
        *stab_best == 0
    };

    'search: {
        if stab_best == 0 {
            break 'search;
        }
        for beta in published {
            if consider(beta, &mut stab_best, &mut best_perturbation) {
                break 'search;
            }
        }
        // Random phase over the kernel of d on degree-k forms.
        let kernel = g.coboundary_matrix(degree).kernel_basis();
        if kernel.is_empty() {
            break 'search;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let ncols = kernel[0].len();
        for _ in 0..opts.trials {
            let mut coords = vec![Rational::zero(); ncols];
            let mut any = false;
            for v in &kernel {
                let c = rng.gen_range(-opts.max_coeff..=opts.max_coeff);
                if c == 0 {
                    continue;
                }
                any = true;
                let cr = rat(c, 1);
                for (acc, x) in coords.iter_mut().zip(v) {
                    if !x.is_zero() {
                        *acc += &cr * x;
                    }
                }
            }
            if !any {
                continue;
            }
            let beta = KForm::from_coordinates(g.dim(), degree, &coords);
            if consider(&beta, &mut stab_best, &mut best_perturbation) {
                break 'search;
            }
        }
    }

    let moduli_dim = moduli_dimension(dim_v, dim_aut, stab_best)
        .expect("catalog moduli dimensions are nonnegative");
    ModuliReport {
        name: name.to_string(),
        kind,
        dim_v,
        dim_aut,
        stab_given,
        stab_best,
        best_perturbation,
        moduli_dim,
        is_upper_bound_only: stab_best > 0,
    }
}

/// Convenience wrapper used by tests: stabilizer of alpha + eps*beta.
pub fn perturbed_stabilizer(
    g: &LieAlgebra,
    alpha: &KForm,
    beta: &KForm,
    epsilon: &Rational,
) -> StabilizerResult {
    stabilizer_dimension(g, &alpha.add(&beta.scale(epsilon)))
}

/// Sign-aware comparison helper for tests on b-matrices.
pub fn b_determinant_positive(phi: &KForm) -> bool {
    bilinear_b(phi)
        .determinant()
        .map(|d| d.is_positive())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_form, parse_salamon};

    fn standard_phi() -> KForm {
        parse_form("e127+e347+e567+e135-e146-e236-e245", 7).unwrap()
    }

    fn algebra(s: &str) -> LieAlgebra {
        LieAlgebra::from_salamon(&parse_salamon(s).unwrap()).unwrap()
    }

    #[test]
    fn standard_phi_pairing_is_six_identity() {
        let b = bilinear_b(&standard_phi());
        assert_eq!(b, RationalMatrix::identity(7).scale(&rat(6, 1)));
        assert_eq!(b.is_definite().unwrap(), Definiteness::PositiveDefinite);
    }

    #[test]
    fn zero_form_has_zero_pairing() {
        assert!(bilinear_b(&KForm::zero(7, 3)).is_zero());
        assert!(!is_positive_3form(&KForm::zero(7, 3)));
    }

    #[test]
    fn single_monomial_is_not_positive() {
        let f = parse_form("e123", 7).unwrap();
        assert!(!is_positive_3form(&f));
        assert!(bilinear_b(&f).rank() < 7);
    }

    #[test]
    fn standard_phi_is_positive() {
        assert!(is_positive_3form(&standard_phi()));
        assert!(G2ThreeForm::new(standard_phi()).is_some());
    }

    #[test]
    fn metric_of_standard_phi_is_identity() {
        let g = metric_approx(&standard_phi()).unwrap();
        for (r, row) in g.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12, "g[{r}][{c}] = {v}");
            }
        }
    }

    #[test]
    fn metric_scales_with_two_thirds_power() {
        let phi = standard_phi();
        let scaled = phi.scale(&rat(8, 1));
        let g1 = metric_approx(&phi).unwrap();
        let g2 = metric_approx(&scaled).unwrap();
        let factor = 8f64.powf(2.0 / 3.0);
        for r in 0..7 {
            for c in 0..7 {
                assert!((g2[r][c] - factor * g1[r][c]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn abelian_forms_are_purely_coclosed() {
        let g = algebra("(0,0,0,0,0,0,0)");
        assert!(purely_coclosed_indicator(&standard_phi(), &g));
    }

    #[test]
    fn wedge_against_differential_can_be_nonzero() {
        // On (0,0,0,0,12,0,0): d(e345+e567) = e1234+e1267 and the wedge
        // against the form itself contributes 2*e1234567.
        let g = algebra("(0,0,0,0,12,0,0)");
        let alpha = parse_form("e345+e567", 7).unwrap();
        assert!(!alpha.wedge(&g.differential(&alpha)).is_zero());
        assert!(!purely_coclosed_indicator(&alpha, &g));
    }

    #[test]
    fn psi_construction_degenerate_inputs() {
        let zero2 = KForm::zero(7, 2);
        let zero1 = KForm::zero(7, 1);
        let psi_minus = parse_form("e126-e145-e235-e345+e346", 7).unwrap();
        let eta = parse_form("e7", 7).unwrap();
        let only_wedge = build_psi_su3(&zero2, &psi_minus, &eta);
        assert_eq!(only_wedge.form, psi_minus.wedge(&eta));
        let omega = parse_form("e13-e24+e56", 7).unwrap();
        let only_sq = build_psi_su3(&omega, &KForm::zero(7, 3), &zero1);
        assert_eq!(only_sq.form, omega.wedge(&omega).scale(&rat(1, 2)));
    }

    #[test]
    fn identity_acts_as_minus_degree() {
        let phi = standard_phi();
        let action = derivation_action(&RationalMatrix::identity(7), &phi);
        assert_eq!(action, phi.scale(&rat(-3, 1)));
        let four = parse_form("e1234", 7).unwrap();
        assert_eq!(
            derivation_action(&RationalMatrix::identity(7), &four),
            four.scale(&rat(-4, 1))
        );
        assert!(derivation_action(&RationalMatrix::zeros(7, 7), &phi).is_zero());
    }

    #[test]
    fn elementary_matrix_action_sign() {
        // D with the single entry D_{21} = 1 acts by D.e^2 = -e^1: on e123
        // the replacement gives -e113 = 0; on e234 it gives -e134.
        let mut d = RationalMatrix::zeros(7, 7);
        d.set(1, 0, rat(1, 1));
        let a = parse_form("e123", 7).unwrap();
        assert!(derivation_action(&d, &a).is_zero());
        let b = parse_form("e234", 7).unwrap();
        assert_eq!(derivation_action(&d, &b), parse_form("-e134", 7).unwrap());
    }

    #[test]
    fn abelian_stabilizer_of_standard_phi_is_g2() {
        let g = algebra("(0,0,0,0,0,0,0)");
        let s = stabilizer_dimension(&g, &standard_phi());
        assert_eq!(s.dimension, 14);
        for d in &s.basis {
            assert!(derivation_action(d, &standard_phi()).is_zero());
        }
    }

    #[test]
    fn stabilizer_scaling_invariance() {
        let g = algebra("(0,0,0,0,12,13,0)");
        let phi = parse_form("e123+e147+e156+e245+e267-e346+e357", 7).unwrap();
        let base = stabilizer_dimension(&g, &phi).dimension;
        for c in [rat(2, 1), rat(-1, 1), rat(1, 3)] {
            assert_eq!(stabilizer_dimension(&g, &phi.scale(&c)).dimension, base);
        }
    }

    #[test]
    fn moduli_dimension_arithmetic() {
        assert_eq!(moduli_dimension(29, 27, 0).unwrap(), 2);
        assert_eq!(moduli_dimension(19, 11, 0).unwrap(), 8);
        assert_eq!(moduli_dimension(24, 14, 0).unwrap(), 10);
        assert!(moduli_dimension(5, 10, 1).is_err());
    }
}
