//! Randomized property tests, checked against independent oracles where one
//! exists (multilinear evaluation by determinants, shuffle-sum wedge,
//! alternating-sum differential).

use num_traits::Zero;
use proptest::prelude::*;

use g2moduli_core::exactla::{rat, Definiteness, Rational, RationalMatrix};
use g2moduli_core::exterior::{basis_tuples, KForm, Vector};
use g2moduli_core::liealg::LieAlgebra;
use g2moduli_core::notation::{parse_form, parse_salamon, render_form};

// ---- independent oracles --------------------------------------------------

/// Evaluates a k-form on k vectors by the determinant formula, using nothing
/// from the wedge/contraction implementation.
fn eval(form: &KForm, vectors: &[Vector]) -> Rational {
    assert_eq!(vectors.len(), form.degree());
    let k = vectors.len();
    let mut total = Rational::zero();
    for (tuple, coeff) in form.terms() {
        let m = RationalMatrix::from_fn(k, k, |a, b| {
            vectors[a].components[tuple[b] as usize - 1].clone()
        });
        total += coeff * m.determinant().expect("square");
    }
    total
}

/// (a ^ b)(v_1,...,v_{p+q}) by the shuffle sum, independent of `wedge`.
fn wedge_eval_oracle(a: &KForm, b: &KForm, vectors: &[Vector]) -> Rational {
    let p = a.degree();
    let q = b.degree();
    assert_eq!(vectors.len(), p + q);
    let mut total = Rational::zero();
    for subset in basis_tuples(p + q, p) {
        // subset holds 1-based positions going to `a`.
        let inversions: usize = subset
            .iter()
            .enumerate()
            .map(|(i, &s)| s as usize - 1 - i)
            .sum();
        let left: Vec<Vector> = subset
            .iter()
            .map(|&s| vectors[s as usize - 1].clone())
            .collect();
        let right: Vec<Vector> = (1..=p + q)
            .filter(|i| !subset.contains(&(*i as u8)))
            .map(|i| vectors[i - 1].clone())
            .collect();
        let term = eval(a, &left) * eval(b, &right);
        total += if inversions % 2 == 1 { -term } else { term };
    }
    total
}

// ---- strategies -------------------------------------------------------------

fn coeff_strategy() -> impl Strategy<Value = Rational> {
    prop_oneof![
        4 => Just(Rational::zero()),
        3 => (-3i64..=3).prop_map(|n| rat(n, 1)),
        1 => ((-3i64..=3), (2i64..=3)).prop_map(|(n, d)| rat(n, d)),
    ]
}

fn form_strategy(degree: usize) -> impl Strategy<Value = KForm> {
    let len = basis_tuples(7, degree).len();
    prop::collection::vec(coeff_strategy(), len)
        .prop_map(move |coords| KForm::from_coordinates(7, degree, &coords))
}

fn vector_strategy() -> impl Strategy<Value = Vector> {
    prop::collection::vec(coeff_strategy(), 7).prop_map(|components| Vector {
        ambient_dim: 7,
        components,
    })
}

fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(coeff_strategy(), rows * cols).prop_map(move |entries| {
        RationalMatrix::from_fn(rows, cols, |r, c| entries[r * cols + c].clone())
    })
}

// ---- exterior algebra laws --------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn graded_anticommutativity(
        a in (1usize..=4).prop_flat_map(form_strategy),
        b in (1usize..=4).prop_flat_map(form_strategy),
    ) {
        let lhs = a.wedge(&b);
        let mut rhs = b.wedge(&a);
        if (a.degree() * b.degree()) % 2 == 1 {
            rhs = rhs.neg();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_matches_shuffle_oracle(
        a in form_strategy(2),
        b in form_strategy(3),
        vs in prop::collection::vec(vector_strategy(), 5),
    ) {
        prop_assert_eq!(eval(&a.wedge(&b), &vs), wedge_eval_oracle(&a, &b, &vs));
    }

    #[test]
    fn contraction_is_evaluation_in_first_slot(
        a in form_strategy(3),
        x in vector_strategy(),
        vs in prop::collection::vec(vector_strategy(), 2),
    ) {
        let mut all = vec![x.clone()];
        all.extend(vs.iter().cloned());
        prop_assert_eq!(eval(&a.contract(&x), &vs), eval(&a, &all));
    }

    #[test]
    fn contraction_anti_derivation(
        a in (1usize..=3).prop_flat_map(form_strategy),
        b in (1usize..=3).prop_flat_map(form_strategy),
        x in vector_strategy(),
    ) {
        // iota_x(a^b) = (iota_x a)^b + (-1)^{|a|} a^(iota_x b)
        let lhs = a.wedge(&b).contract(&x);
        let second = a.wedge(&b.contract(&x));
        let rhs = if a.degree() % 2 == 0 {
            a.contract(&x).wedge(&b).add(&second)
        } else {
            a.contract(&x).wedge(&b).sub(&second)
        };
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn wedge_associativity(
        a in form_strategy(1),
        b in form_strategy(2),
        c in form_strategy(2),
    ) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn double_contraction_vanishes(a in form_strategy(3), x in vector_strategy()) {
        prop_assert!(a.contract(&x).contract(&x).is_zero());
    }

    #[test]
    fn coordinates_roundtrip(a in form_strategy(4)) {
        let coords = a.coordinates();
        prop_assert_eq!(KForm::from_coordinates(7, 4, &coords), a);
    }

    // Degree >= 1 only: the text grammar reads a bare digit run as a
    // monomial, so nonzero constants have no representation.
    #[test]
    fn parse_render_identity(a in (1usize..=4).prop_flat_map(form_strategy)) {
        let text = render_form(&a);
        let back = parse_form(&text, 7).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(render_form(&back), text);
    }

    #[test]
    fn bilinear_pairing_is_symmetric(a in form_strategy(3)) {
        prop_assert!(g2moduli_core::g2::bilinear_b(&a).is_symmetric());
    }

    // ---- exact linear algebra ----

    #[test]
    fn rank_equals_transpose_rank(m in matrix_strategy(4, 6)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_vectors_annihilate(m in matrix_strategy(4, 6)) {
        let basis = m.kernel_basis();
        prop_assert_eq!(basis.len(), 6 - m.rank());
        for v in basis {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn determinant_is_multiplicative(
        a in matrix_strategy(4, 4),
        b in matrix_strategy(4, 4),
    ) {
        let lhs = a.mul(&b).unwrap().determinant().unwrap();
        let rhs = a.determinant().unwrap() * b.determinant().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn definiteness_flips_with_negation(m in matrix_strategy(3, 3)) {
        let s = m.mul(&m.transpose()).unwrap(); // symmetric by construction
        let pos = s.is_definite().unwrap() == Definiteness::PositiveDefinite;
        let neg = s.neg().is_definite().unwrap() == Definiteness::NegativeDefinite;
        prop_assert_eq!(pos, neg);
    }
}

// ---- differential: anti-derivation vs alternating-sum formula ---------------

/// alpha(e_a, v) for a 2-form, with v given in coordinates.
fn eval2_basis(alpha: &KForm, a: usize, v: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (m, vm) in v.iter().enumerate() {
        if vm.is_zero() || m + 1 == a {
            continue;
        }
        let (lo, hi, sign) = if a < m + 1 { (a, m + 1, 1) } else { (m + 1, a, -1) };
        let c = alpha.coefficient(&[lo as u8, hi as u8]);
        if !c.is_zero() {
            total += if sign < 0 { -(vm * c) } else { vm * c };
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn differential_matches_alternating_sum_on_n10(alpha in form_strategy(2)) {
        let g = LieAlgebra::from_salamon(&parse_salamon("(0,0,0,12,13,23,0)").unwrap()).unwrap();
        let d_alpha = g.differential(&alpha);
        for tuple in basis_tuples(7, 3) {
            let (i, j, k) = (tuple[0] as usize, tuple[1] as usize, tuple[2] as usize);
            // (d alpha)(e_i,e_j,e_k) =
            //   -alpha([e_i,e_j],e_k) + alpha([e_i,e_k],e_j) - alpha([e_j,e_k],e_i)
            let want = -eval2_basis(&alpha, k, &g.bracket_basis(i, j))
                + eval2_basis(&alpha, j, &g.bracket_basis(i, k))
                - eval2_basis(&alpha, i, &g.bracket_basis(j, k));
            // eval2_basis computes alpha(e_a, v) = -alpha(v, e_a), so each
            // summand above carries an extra minus sign:
            prop_assert_eq!(d_alpha.coefficient(&tuple), -want);
        }
    }
}
