//! Lie algebras from structure equations: the Chevalley-Eilenberg
//! differential, cohomology, lower central series, derivation algebra.
//!
//! Convention: the k-th tuple entry IS de^k, and the bracket is recovered as
//! e^k([e_i,e_j]) = -(de^k)(e_i,e_j). Every dimension computed downstream is
//! invariant under flipping this sign.

use std::fmt;

use num_traits::Zero;

use crate::exactla::{Rational, RationalMatrix};
use crate::exterior::{basis_forms, basis_tuples, KForm};
use crate::notation::SalamonSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiError {
    /// 1-based generator index k with d(de^k) != 0.
    pub generator: usize,
}

impl fmt::Display for JacobiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Jacobi identity fails: d(de{}) is nonzero",
            self.generator
        )
    }
}

impl std::error::Error for JacobiError {}

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    /// de^1, ..., de^dim as 2-forms.
    d_one_forms: Vec<KForm>,
    /// c[k][i][j] = e^k([e_i, e_j]) = -(de^k)(e_i, e_j), all 0-based here.
    structure: Vec<Vec<Vec<Rational>>>,
}

/// Basis of Der(g) as n-by-n matrices; dim Der(g) = dim Aut(g).
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationSpace {
    pub basis: Vec<RationalMatrix>,
    dim_algebra: usize,
}

impl LieAlgebra {
    /// Builds and validates an algebra from a structure tuple. Fails when
    /// d(d(e^k)) != 0 for some generator, reporting the first offender.
    pub fn from_salamon(spec: &SalamonSpec) -> Result<Self, JacobiError> {
        let dim = spec.dim();
        let mut structure = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for (k, de) in spec.entries.iter().enumerate() {
            for (tuple, coeff) in de.terms() {
                let (i, j) = (tuple[0] as usize - 1, tuple[1] as usize - 1);
                structure[k][i][j] = -coeff.clone();
                structure[k][j][i] = coeff.clone();
            }
        }
        let g = LieAlgebra {
            dim,
            d_one_forms: spec.entries.clone(),
            structure,
        };
        for k in 0..dim {
            if !g.differential(&g.d_one_forms[k]).is_zero() {
                return Err(JacobiError { generator: k + 1 });
            }
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn d_one_form(&self, k: usize) -> &KForm {
        &self.d_one_forms[k - 1]
    }

    /// Structure constant e^k([e_i, e_j]), 1-based indices.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> &Rational {
        &self.structure[k - 1][i - 1][j - 1]
    }

    /// Bracket of basis vectors as coordinates: [e_i, e_j] (1-based).
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim)
            .map(|k| self.structure[k][i - 1][j - 1].clone())
            .collect()
    }

    /// The Chevalley-Eilenberg differential, extended from the generator
    /// values by the anti-derivation rule
    /// d(e^{i1..ik}) = sum_j (-1)^{j-1} de^{ij} ^ e^{i1..^ij..ik}.
    pub fn differential(&self, alpha: &KForm) -> KForm {
        assert_eq!(alpha.ambient_dim(), self.dim, "ambient dim mismatch");
        let k = alpha.degree();
        if k == 0 || k >= self.dim {
            return KForm::zero(self.dim, (k + 1).min(self.dim));
        }
        let mut out = KForm::zero(self.dim, k + 1);
        for (tuple, coeff) in alpha.terms() {
            for (j, &idx) in tuple.iter().enumerate() {
                let rest: Vec<u8> = tuple
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != j)
                    .map(|(_, &i)| i)
                    .collect();
                let rest_form = KForm::basis_monomial(self.dim, &rest);
                let mut piece = self.d_one_forms[idx as usize - 1].wedge(&rest_form);
                piece = piece.scale(coeff);
                if j % 2 == 1 {
                    piece = piece.neg();
                }
                out = out.add(&piece);
            }
        }
        out
    }

    /// Matrix of d: Lambda^k -> Lambda^{k+1} in lexicographic coordinates.
    pub fn coboundary_matrix(&self, k: usize) -> RationalMatrix {
        assert!(k <= self.dim, "degree exceeds dimension");
        let domain = basis_forms(self.dim, k);
        let target = if k < self.dim { k + 1 } else { self.dim };
        let rows = basis_tuples(self.dim, target).len();
        let mut m = RationalMatrix::zeros(rows, domain.len());
        for (col, b) in domain.iter().enumerate() {
            let image = self.differential(b);
            for (row, c) in image.coordinates().into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(row, col, c);
                }
            }
        }
        m
    }

    /// dim Z^k = dim ker(d: Lambda^k -> Lambda^{k+1}).
    pub fn closed_forms_dim(&self, k: usize) -> usize {
        basis_tuples(self.dim, k).len() - self.coboundary_matrix(k).rank()
    }

    /// k-th Betti number of the Chevalley-Eilenberg complex.
    pub fn betti(&self, k: usize) -> usize {
        if k == 0 {
            return 1;
        }
        if k > self.dim {
            return 0;
        }
        self.closed_forms_dim(k) - self.coboundary_matrix(k - 1).rank()
    }

    /// Lower central series g_0 = g, g_i = [g_{i-1}, g], as exact spans.
    /// Returns the smallest m with g_m = 0, or None if the series
    /// stabilizes at a nonzero subspace (not nilpotent).
    pub fn nilpotency_step(&self) -> Option<usize> {
        let n = self.dim;
        // Current term spanned by the columns of `span` (coordinates of
        // vectors); start with the identity (g_0 = g).
        let mut span: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::from_integer(1.into());
                v
            })
            .collect();
        let mut step = 0usize;
        loop {
            let rank = rank_of_vectors(&span, n);
            if rank == 0 {
                return Some(step);
            }
            // Next term: brackets of span vectors with all generators.
            let mut next = Vec::new();
            for v in &span {
                for j in 1..=n {
                    // [v, e_j] = sum_i v_i [e_i, e_j]
                    let mut w = vec![Rational::zero(); n];
                    for (i, vi) in v.iter().enumerate() {
                        if vi.is_zero() {
                            continue;
                        }
                        for k in 0..n {
                            let c = &self.structure[k][i][j - 1];
                            if !c.is_zero() {
                                w[k] += vi * c;
                            }
                        }
                    }
                    if w.iter().any(|x| !x.is_zero()) {
                        next.push(w);
                    }
                }
            }
            let next_rank = rank_of_vectors(&next, n);
            if next_rank == rank {
                return None; // series stabilized at a nonzero subspace
            }
            span = next;
            step += 1;
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_step().is_some()
    }

    /// trace(ad_{e_i}) = 0 for every generator.
    pub fn is_unimodular(&self) -> bool {
        (1..=self.dim).all(|i| {
            let mut tr = Rational::zero();
            for k in 1..=self.dim {
                tr += self.structure_constant(k, i, k);
            }
            tr.is_zero()
        })
    }

    /// Solves D[e_i,e_j] = [De_i,e_j] + [e_i,De_j] for all i<j as a linear
    /// system in the dim^2 matrix entries (row-major unknowns; equations
    /// ordered by (i,j) lexicographic, then component k).
    pub fn derivation_space(&self) -> DerivationSpace {
        let n = self.dim;
        let unknowns = n * n;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    // Coefficient of D_{rs} (unknown index r*n+s) in
                    // e^k(D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]):
                    //   sum_m c^m_{ij} D_{km}  -  sum_p D_{pi} c^k_{pj}
                    //                          -  sum_q D_{qj} c^k_{iq}
                    let mut row = vec![Rational::zero(); unknowns];
                    for m in 0..n {
                        let c = &self.structure[m][i][j];
                        if !c.is_zero() {
                            row[k * n + m] += c;
                        }
                    }
                    for p in 0..n {
                        let c = &self.structure[k][p][j];
                        if !c.is_zero() {
                            row[p * n + i] -= c;
                        }
                    }
                    for q in 0..n {
                        let c = &self.structure[k][i][q];
                        if !c.is_zero() {
                            row[q * n + j] -= c;
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let basis = if rows.is_empty() {
            RationalMatrix::zeros(1, unknowns).kernel_basis()
        } else {
            RationalMatrix::from_rows(rows)
                .expect("rows have uniform length")
                .kernel_basis()
        };
        let basis = basis
            .into_iter()
            .map(|v| RationalMatrix::from_fn(n, n, |r, c| v[r * n + c].clone()))
            .collect();
        DerivationSpace {
            basis,
            dim_algebra: n,
        }
    }
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra_dim(&self) -> usize {
        self.dim_algebra
    }

    /// Verifies D[e_i,e_j] = [De_i,e_j] + [e_i,De_j] directly, independent of
    /// the solver that produced D.
    pub fn is_derivation(g: &LieAlgebra, d: &RationalMatrix) -> bool {
        let n = g.dim();
        for i in 1..=n {
            for j in (i + 1)..=n {
                let br = g.bracket_basis(i, j);
                let lhs = d.mul_vec(&br).expect("size checked");
                // [De_i, e_j] + [e_i, De_j]
                let mut rhs = vec![Rational::zero(); n];
                for p in 1..=n {
                    let dpi = d.get(p - 1, i - 1);
                    if !dpi.is_zero() {
                        for (k, c) in g.bracket_basis(p, j).into_iter().enumerate() {
                            rhs[k] += dpi * c;
                        }
                    }
                    let dpj = d.get(p - 1, j - 1);
                    if !dpj.is_zero() {
                        for (k, c) in g.bracket_basis(i, p).into_iter().enumerate() {
                            rhs[k] += dpj * c;
                        }
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `m` lies in span(basis) — exact rank test.
    pub fn contains(&self, m: &RationalMatrix) -> bool {
        let n = self.dim_algebra;
        let flatten = |mat: &RationalMatrix| -> Vec<Rational> {
            (0..n * n).map(|i| mat.get(i / n, i % n).clone()).collect()
        };
        let mut rows: Vec<Vec<Rational>> = self.basis.iter().map(&flatten).collect();
        let base_rank = rank_of_vectors(&rows, n * n);
        rows.push(flatten(m));
        rank_of_vectors(&rows, n * n) == base_rank
    }
}

/// ab - ba.
pub fn matrix_bracket(
    a: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<RationalMatrix, crate::exactla::LinAlgError> {
    a.mul(b)?.sub(&b.mul(a)?)
}

fn rank_of_vectors(vectors: &[Vec<Rational>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RationalMatrix::from_rows(
        vectors
            .iter()
            .map(|v| {
                debug_assert_eq!(v.len(), len);
                v.clone()
            })
            .collect(),
    )
    .expect("uniform length")
    .rank()
}
