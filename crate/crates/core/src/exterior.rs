//! Exterior algebra of (R^n)* with rational coefficients, n <= 9.
//!
//! Forms are sparse maps from strictly increasing 1-based index tuples to
//! nonzero coefficients. Tuples of a given degree are ordered
//! lexicographically; that ordering is the coordinatization used by every
//! matrix built elsewhere in the crate.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::exactla::Rational;

pub const MAX_AMBIENT_DIM: usize = 9;

/// Alternating k-form. The zero form keeps its nominal degree but compares
/// equal to any other zero form (see `PartialEq`), since "the zero 3-form"
/// and "the zero 4-form" are indistinguishable in every context we use.
#[derive(Debug, Clone, Eq)]
pub struct KForm {
    ambient_dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<u8>, Rational>,
}

/// Vector in R^n, used only as the contraction slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    pub ambient_dim: usize,
    pub components: Vec<Rational>,
}

impl Vector {
    pub fn zero(ambient_dim: usize) -> Self {
        Vector {
            ambient_dim,
            components: vec![Rational::zero(); ambient_dim],
        }
    }

    /// Standard basis vector e_i (1-based).
    pub fn basis(ambient_dim: usize, i: usize) -> Self {
        assert!(1 <= i && i <= ambient_dim, "basis index out of range");
        let mut v = Self::zero(ambient_dim);
        v.components[i - 1] = Rational::from_integer(1.into());
        v
    }
}

/// Sorts `tuple` in place, returning the permutation sign, or `None` when an
/// index repeats (the monomial vanishes).
pub fn sort_sign(tuple: &mut [u8]) -> Option<i8> {
    // Insertion sort with swap counting; tuples have length <= 9.
    let mut sign = 1i8;
    for i in 1..tuple.len() {
        let mut j = i;
        while j > 0 && tuple[j - 1] > tuple[j] {
            tuple.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in tuple.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(sign)
}

impl KForm {
    pub fn zero(ambient_dim: usize, degree: usize) -> Self {
        assert!(ambient_dim <= MAX_AMBIENT_DIM, "ambient dimension too large");
        assert!(degree <= ambient_dim, "degree exceeds ambient dimension");
        KForm {
            ambient_dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Constant 1 viewed as a 0-form.
    pub fn one(ambient_dim: usize) -> Self {
        let mut f = Self::zero(ambient_dim, 0);
        f.terms.insert(Vec::new(), Rational::from_integer(1.into()));
        f
    }

    /// Monomial c * e^{i1...ik}; indices need not be sorted (the sign of the
    /// sorting permutation is absorbed into the coefficient).
    pub fn monomial(ambient_dim: usize, indices: &[u8], coeff: Rational) -> Self {
        let mut tuple = indices.to_vec();
        for &i in &tuple {
            assert!(
                1 <= i && (i as usize) <= ambient_dim,
                "index out of range 1..{ambient_dim}"
            );
        }
        let mut f = Self::zero(ambient_dim, indices.len());
        if coeff.is_zero() {
            return f;
        }
        match sort_sign(&mut tuple) {
            None => f,
            Some(sign) => {
                let c = if sign < 0 { -coeff } else { coeff };
                f.terms.insert(tuple, c);
                f
            }
        }
    }

    /// Unit monomial e^{i1...ik}.
    pub fn basis_monomial(ambient_dim: usize, indices: &[u8]) -> Self {
        Self::monomial(ambient_dim, indices, Rational::from_integer(1.into()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &Rational)> {
        self.terms.iter().map(|(t, c)| (t.as_slice(), c))
    }

    pub fn coefficient(&self, tuple: &[u8]) -> Rational {
        self.terms.get(tuple).cloned().unwrap_or_else(Rational::zero)
    }

    fn insert_term(&mut self, tuple: Vec<u8>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(tuple) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &KForm) -> KForm {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dim mismatch");
        assert!(
            self.is_zero() || other.is_zero() || self.degree == other.degree,
            "degree mismatch in sum: {} vs {}",
            self.degree,
            other.degree
        );
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = KForm::zero(self.ambient_dim, degree);
        out.terms = self.terms.clone();
        for (t, c) in &other.terms {
            out.insert_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn scale(&self, c: &Rational) -> KForm {
        let mut out = KForm::zero(self.ambient_dim, self.degree);
        if c.is_zero() {
            return out;
        }
        for (t, v) in &self.terms {
            out.terms.insert(t.clone(), v * c);
        }
        out
    }

    /// Wedge product. Degrees add; the result is the zero form (of the
    /// nominal summed degree, clamped) when it exceeds the ambient dimension.
    pub fn wedge(&self, other: &KForm) -> KForm {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dim mismatch");
        let deg = self.degree + other.degree;
        if deg > self.ambient_dim {
            return KForm::zero(self.ambient_dim, self.ambient_dim);
        }
        let mut out = KForm::zero(self.ambient_dim, deg);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                let mut tuple: Vec<u8> = ta.iter().chain(tb.iter()).copied().collect();
                if let Some(sign) = sort_sign(&mut tuple) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.insert_term(tuple, c);
                }
            }
        }
        out
    }

    /// Interior product iota_x: (iota_x a)(v2,...,vk) = a(x,v2,...,vk).
    pub fn contract(&self, x: &Vector) -> KForm {
        assert_eq!(self.ambient_dim, x.ambient_dim, "ambient dim mismatch");
        assert!(self.degree >= 1, "cannot contract a 0-form");
        let mut out = KForm::zero(self.ambient_dim, self.degree - 1);
        for (t, c) in &self.terms {
            for (slot, &idx) in t.iter().enumerate() {
                let comp = &x.components[idx as usize - 1];
                if comp.is_zero() {
                    continue;
                }
                let rest: Vec<u8> = t
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != slot)
                    .map(|(_, &i)| i)
                    .collect();
                let mut coeff = c * comp;
                if slot % 2 == 1 {
                    coeff = -coeff;
                }
                out.insert_term(rest, coeff);
            }
        }
        out
    }

    /// Coordinates in the lexicographic monomial basis of this degree.
    pub fn coordinates(&self) -> Vec<Rational> {
        basis_tuples(self.ambient_dim, self.degree)
            .into_iter()
            .map(|t| self.coefficient(&t))
            .collect()
    }

    /// Inverse of `coordinates`.
    pub fn from_coordinates(ambient_dim: usize, degree: usize, coords: &[Rational]) -> KForm {
        let tuples = basis_tuples(ambient_dim, degree);
        assert_eq!(coords.len(), tuples.len(), "coordinate vector length");
        let mut f = KForm::zero(ambient_dim, degree);
        for (t, c) in tuples.into_iter().zip(coords) {
            if !c.is_zero() {
                f.terms.insert(t, c.clone());
            }
        }
        f
    }
}

impl PartialEq for KForm {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.terms == other.terms
            && (self.degree == other.degree || self.terms.is_empty())
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::render_form(self))
    }
}

/// All strictly increasing k-tuples from 1..=n, lexicographically ordered.
pub fn basis_tuples(n: usize, k: usize) -> Vec<Vec<u8>> {
    assert!(k <= n, "degree exceeds ambient dimension");
    let mut out = Vec::new();
    let mut current: Vec<u8> = Vec::with_capacity(k);
    fn rec(n: u8, k: usize, start: u8, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..=n {
            current.push(i);
            rec(n, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(n as u8, k, 1, &mut current, &mut out);
    out
}

/// The monomial basis of Lambda^k, in the order of `basis_tuples`.
pub fn basis_forms(n: usize, k: usize) -> Vec<KForm> {
    basis_tuples(n, k)
        .into_iter()
        .map(|t| KForm::basis_monomial(n, &t))
        .collect()
}
