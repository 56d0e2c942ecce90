//! Based quantum tori `T_Λ`.
//!
//! A [`TorusElement`] is a finite `Z[q^{±1/2}]`-combination of basis monomials
//! `M^α`, `α ∈ Z^N`, multiplied by `M^α · M^β = q^{Λ(α,β)/2} M^{α+β}`. All
//! elements carry a shared [`SkewForm`]; arithmetic between elements over
//! different forms is an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcoeff::{QCoeff, QCoeffError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("exponent vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("elements live in quantum tori with different forms")]
    FormMismatch,
    #[error("division failure: no quotient exists in the quantum torus")]
    DivisionFailure,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient error: {0}")]
    Coeff(#[from] QCoeffError),
    #[error("invalid torus JSON: {0}")]
    Json(String),
}

/// An integer skew-symmetric matrix `Λ`, read as the bilinear form
/// `Λ(α, β) = Σ α_i Λ_ij β_j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct SkewForm {
    rows: Vec<Vec<i64>>,
}

impl SkewForm {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, TorusError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(TorusError::NotSquare);
        }
        for i in 0..n {
            for j in i..n {
                if rows[i][j] != -rows[j][i] {
                    return Err(TorusError::NotSkew(i, j));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            rows: vec![vec![0; n]; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn eval(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.rows[i];
            for (j, &bj) in b.iter().enumerate() {
                s += ai * row[j] * bj;
            }
        }
        s
    }
}

/// A lattice vector in `Z^N`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpVec(pub Vec<i64>);

impl ExpVec {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i64) -> ExpVec {
        ExpVec(self.0.iter().map(|a| a * k).collect())
    }
}

impl From<Vec<i64>> for ExpVec {
    fn from(v: Vec<i64>) -> Self {
        ExpVec(v)
    }
}

impl std::ops::Index<usize> for ExpVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// An element of the based quantum torus of its form.
#[derive(Clone)]
pub struct TorusElement {
    form: Arc<SkewForm>,
    terms: BTreeMap<ExpVec, QCoeff>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        same_form(&self.form, &other.form) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl std::hash::Hash for TorusElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn same_form(a: &Arc<SkewForm>, b: &Arc<SkewForm>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl TorusElement {
    pub fn zero(form: Arc<SkewForm>) -> Self {
        Self {
            form,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(form: Arc<SkewForm>) -> Self {
        let n = form.rank();
        Self::monomial_unchecked(form, ExpVec::zero(n), QCoeff::one())
    }

    /// `c · M^α`.
    pub fn monomial(form: Arc<SkewForm>, alpha: ExpVec, c: QCoeff) -> Result<Self, TorusError> {
        if alpha.len() != form.rank() {
            return Err(TorusError::DimensionMismatch {
                expected: form.rank(),
                got: alpha.len(),
            });
        }
        Ok(Self::monomial_unchecked(form, alpha, c))
    }

    /// `M^{e_i}`.
    pub fn generator(form: Arc<SkewForm>, i: usize) -> Self {
        let n = form.rank();
        Self::monomial_unchecked(form, ExpVec::unit(n, i), QCoeff::one())
    }

    pub(crate) fn monomial_unchecked(form: Arc<SkewForm>, alpha: ExpVec, c: QCoeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        Self { form, terms }
    }

    /// Build from `(α, c)` pairs, collecting like terms.
    pub fn from_terms(
        form: Arc<SkewForm>,
        terms: impl IntoIterator<Item = (ExpVec, QCoeff)>,
    ) -> Result<Self, TorusError> {
        let mut out = Self::zero(form);
        for (a, c) in terms {
            if a.len() != out.form.rank() {
                return Err(TorusError::DimensionMismatch {
                    expected: out.form.rank(),
                    got: a.len(),
                });
            }
            out.add_term(a, &c);
        }
        Ok(out)
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, &QCoeff)> {
        self.terms.iter()
    }

    pub fn terms_map(&self) -> &BTreeMap<ExpVec, QCoeff> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &ExpVec) -> QCoeff {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    /// The lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&ExpVec, &QCoeff)> {
        self.terms.iter().next_back()
    }

    /// `Some((α, c))` when the element is a single term `c·M^α`.
    pub fn as_monomial(&self) -> Option<(&ExpVec, &QCoeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, alpha: ExpVec, c: &QCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_form(&self, other: &Self) -> Result<(), TorusError> {
        if same_form(&self.form, &other.form) {
            Ok(())
        } else {
            Err(TorusError::FormMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_form(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_form(other)?;
        let mut out = Self::zero(self.form.clone());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let k = self.form.eval(&a.0, &b.0);
                out.add_term(a.add(b), &(ca * cb).shift(k));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        let mut out = Self::zero(self.form.clone());
        if c.is_zero() {
            return out;
        }
        for (a, x) in &self.terms {
            out.add_term(a.clone(), &(x * c));
        }
        out
    }

    /// Multiply every coefficient by `v^k = q^{k/2}`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.shift(k)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.form.clone());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Bar involution: coefficients are barred, basis monomials are fixed.
    /// This is an antiautomorphism: `bar(xy) = bar(y) bar(x)`.
    pub fn bar(&self) -> Self {
        Self {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.bar()))
                .collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.values().all(|c| *c == c.bar())
    }

    /// Inverse of a single-term element `±v^k M^α`.
    pub fn monomial_inverse(&self) -> Option<Self> {
        let (alpha, c) = self.as_monomial()?;
        let (sign, k) = c.as_signed_unit()?;
        // (v^k M^α)^{-1} = v^{-k} M^{-α}, since Λ(α, -α) = 0.
        let c = QCoeff::monomial(sign, -k);
        Some(Self::monomial_unchecked(
            self.form.clone(),
            alpha.scaled(-1),
            c,
        ))
    }

    /// Write `x = Σ_k M^{k e_i} · y_k` with every `y_k` free of the `i`-th
    /// variable. Returns the map `k ↦ y_k`.
    pub fn collect_on_index(&self, i: usize) -> BTreeMap<i64, TorusElement> {
        let n = self.rank();
        let mut out: BTreeMap<i64, TorusElement> = BTreeMap::new();
        for (alpha, c) in &self.terms {
            let k = alpha[i];
            let mut beta = alpha.clone();
            beta.0[i] = 0;
            let twist = self.form.eval(&ExpVec::unit(n, i).scaled(k).0, &beta.0);
            out.entry(k)
                .or_insert_with(|| TorusElement::zero(self.form.clone()))
                .add_term(beta, &c.shift(-twist));
        }
        out.retain(|_, y| !y.is_zero());
        out
    }

    /// Per-coordinate minimum and maximum exponents over the support.
    pub fn exponent_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut iter = self.terms.keys();
        let first = iter.next()?;
        let mut lo = first.0.clone();
        let mut hi = first.0.clone();
        for a in iter {
            for (j, &x) in a.0.iter().enumerate() {
                lo[j] = lo[j].min(x);
                hi[j] = hi[j].max(x);
            }
        }
        Some((lo, hi))
    }

    /// Find `w` with `self = divisor · w`.
    ///
    /// Leading-term elimination in the lexicographic order. The search is
    /// confined to the box of exponents a quotient could occupy (Newton
    /// polytopes add under multiplication in a domain), which guarantees
    /// termination; leaving the box means no quotient exists.
    pub fn exact_divide_left(&self, divisor: &Self) -> Result<Self, TorusError> {
        self.check_form(divisor)?;
        if divisor.is_zero() {
            return Err(TorusError::DivisionByZero);
        }
        let mut quot = Self::zero(self.form.clone());
        if self.is_zero() {
            return Ok(quot);
        }
        let (xlo, xhi) = self.exponent_box().unwrap();
        let (dlo, dhi) = divisor.exponent_box().unwrap();
        let lo: Vec<i64> = xlo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = xhi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(TorusError::DivisionFailure);
        }
        let (dlead, dcoeff) = divisor
            .leading_term()
            .map(|(a, c)| (a.clone(), c.clone()))
            .unwrap();
        let mut rem = self.clone();
        while let Some((top, c)) = rem.leading_term() {
            let gamma = top.sub(&dlead);
            if gamma
                .0
                .iter()
                .zip(lo.iter().zip(&hi))
                .any(|(g, (l, h))| g < l || g > h)
            {
                return Err(TorusError::DivisionFailure);
            }
            // lead(divisor · t M^γ) = dcoeff · t · v^{Λ(δ, γ)} M^{top}
            let twist = self.form.eval(&dlead.0, &gamma.0);
            let t = c
                .exact_divide(&dcoeff)
                .map_err(|_| TorusError::DivisionFailure)?
                .shift(-twist);
            let step = Self::monomial_unchecked(self.form.clone(), gamma.clone(), t.clone());
            rem = rem.checked_sub(&divisor.checked_mul(&step)?)?;
            quot.add_term(gamma, &t);
        }
        Ok(quot)
    }

    /// Find `w` with `self = w · divisor`, via the bar antiautomorphism.
    pub fn exact_divide_right(&self, divisor: &Self) -> Result<Self, TorusError> {
        Ok(self.bar().exact_divide_left(&divisor.bar())?.bar())
    }

    /// True iff every term's exponent is nonnegative outside `allowed_negative`.
    pub fn is_laurent_in_sublattice(&self, allowed_negative: &BTreeSet<usize>) -> bool {
        self.terms.keys().all(|a| {
            a.0.iter()
                .enumerate()
                .all(|(j, &x)| x >= 0 || allowed_negative.contains(&j))
        })
    }

    /// The integer `t` with `self · other = v^t · other · self`, if one exists.
    pub fn quasi_commutation_exponent(&self, other: &Self) -> Result<Option<i64>, TorusError> {
        let left = self.checked_mul(other)?;
        let right = other.checked_mul(self)?;
        if left.is_zero() || right.is_zero() {
            return Ok(if left == right { Some(0) } else { None });
        }
        let (la, lc) = left.leading_term().unwrap();
        let (ra, rc) = right.leading_term().unwrap();
        if la != ra {
            return Ok(None);
        }
        let (Some(lk), Some(rk)) = (lc.max_exponent(), rc.max_exponent()) else {
            return Ok(None);
        };
        let t = lk - rk;
        Ok((left == right.shift(t)).then_some(t))
    }

    /// Specialize at `q = 1`: a commutative Laurent polynomial with integer
    /// coefficients.
    pub fn specialize_q1(&self) -> BTreeMap<ExpVec, BigInt> {
        let mut out: BTreeMap<ExpVec, BigInt> = BTreeMap::new();
        for (a, c) in &self.terms {
            let v = c.specialize_q1();
            if v != BigInt::default() {
                out.insert(a.clone(), v);
            }
        }
        out
    }

    /// Degree under a grading that assigns `degrees[i]` to `M^{e_i}`; `None`
    /// if the element is not homogeneous.
    pub fn grading(&self, degrees: &[Vec<i64>]) -> Option<Vec<i64>> {
        let width = degrees.first().map_or(0, |d| d.len());
        let mut found: Option<Vec<i64>> = None;
        for a in self.terms.keys() {
            let mut d = vec![0; width];
            for (i, &ai) in a.0.iter().enumerate() {
                for (k, x) in degrees[i].iter().enumerate() {
                    d[k] += ai * x;
                }
            }
            match &found {
                None => found = Some(d),
                Some(prev) if *prev != d => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or_else(|| vec![0; width]))
    }

    /// Reinterpret the same terms over another form of equal rank.
    pub fn with_form(&self, form: Arc<SkewForm>) -> Result<Self, TorusError> {
        if form.rank() != self.rank() {
            return Err(TorusError::DimensionMismatch {
                expected: form.rank(),
                got: self.rank(),
            });
        }
        Ok(Self {
            form,
            terms: self.terms.clone(),
        })
    }

    pub fn to_json(&self) -> TorusJson {
        TorusJson {
            rank: self.rank(),
            lambda: self.form.rows().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson {
                    exp: a.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TorusJson) -> Result<Self, TorusError> {
        let form = Arc::new(SkewForm::new(j.lambda.clone())?);
        Self::from_json_with_form(j, form)
    }

    /// Parse terms onto an existing form, which must match the JSON's.
    pub fn from_json_with_form(j: &TorusJson, form: Arc<SkewForm>) -> Result<Self, TorusError> {
        if j.rank != form.rank() || j.lambda.as_slice() != form.rows() {
            return Err(TorusError::Json(format!(
                "declared rank {} / lambda disagree with the expected form",
                j.rank
            )));
        }
        Self::from_terms(
            form,
            j.terms
                .iter()
                .map(|t| (ExpVec(t.exp.clone()), t.coeff.clone())),
        )
    }
}

/// Product of two `q = 1` specializations, which commute.
pub fn laurent_mul(
    x: &BTreeMap<ExpVec, BigInt>,
    y: &BTreeMap<ExpVec, BigInt>,
) -> BTreeMap<ExpVec, BigInt> {
    let mut out: BTreeMap<ExpVec, BigInt> = BTreeMap::new();
    for (a, c) in x {
        for (b, d) in y {
            *out.entry(a.add(b)).or_default() += c * d;
        }
    }
    out.retain(|_, v| *v != BigInt::default());
    out
}

/// Sum of two `q = 1` specializations.
pub fn laurent_add(
    x: &BTreeMap<ExpVec, BigInt>,
    y: &BTreeMap<ExpVec, BigInt>,
) -> BTreeMap<ExpVec, BigInt> {
    let mut out = x.clone();
    for (b, d) in y {
        *out.entry(b.clone()).or_default() += d;
    }
    out.retain(|_, v| *v != BigInt::default());
    out
}

/// Wire format: `{"rank": n, "lambda": [[..]], "terms": [{"exp": [..], "coeff": ".."}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusJson {
    pub rank: usize,
    pub lambda: Vec<Vec<i64>>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub coeff: QCoeff,
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (a, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*M{:?}", a.0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({self})")
    }
}

// Operators assume both sides share a form and panic otherwise; use the
// `checked_*` methods when that is not guaranteed by construction.
impl Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.checked_add(rhs).expect("torus forms differ")
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self.checked_sub(rhs).expect("torus forms differ")
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.checked_mul(rhs).expect("torus forms differ")
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        TorusElement {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}

impl Add for TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: TorusElement) -> TorusElement {
        &self + &rhs
    }
}

impl Sub for TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: TorusElement) -> TorusElement {
        &self - &rhs
    }
}

impl Mul for TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: TorusElement) -> TorusElement {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn form2() -> Arc<SkewForm> {
        Arc::new(SkewForm::new(vec![vec![0, 1], vec![-1, 0]]).unwrap())
    }

    fn m(form: &Arc<SkewForm>, a: &[i64]) -> TorusElement {
        TorusElement::monomial(form.clone(), ExpVec(a.to_vec()), QCoeff::one()).unwrap()
    }

    #[test]
    fn rejects_non_skew() {
        assert_eq!(
            SkewForm::new(vec![vec![0, 1], vec![1, 0]]),
            Err(TorusError::NotSkew(0, 1))
        );
        assert_eq!(SkewForm::new(vec![vec![1]]), Err(TorusError::NotSkew(0, 0)));
    }

    #[test]
    fn unit_and_inverse() {
        let f = form2();
        assert_eq!(m(&f, &[0, 0]), TorusElement::one(f.clone()));
        assert_eq!(
            &m(&f, &[1, 0]) * &m(&f, &[-1, 0]),
            TorusElement::one(f.clone())
        );
        assert!(matches!(
            TorusElement::monomial(f, ExpVec(vec![1]), QCoeff::one()),
            Err(TorusError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn product_rule() {
        let f = form2();
        let p = &m(&f, &[1, 0]) * &m(&f, &[0, 1]);
        assert_eq!(
            p,
            TorusElement::monomial(f.clone(), ExpVec(vec![1, 1]), QCoeff::v_pow(1)).unwrap()
        );
        // M^a M^b = q^{Λ(a,b)} M^b M^a
        let q = &m(&f, &[0, 1]) * &m(&f, &[1, 0]);
        assert_eq!(p, q.shift(2));
        assert_eq!(
            m(&f, &[1, 0])
                .quasi_commutation_exponent(&m(&f, &[0, 1]))
                .unwrap(),
            Some(2)
        );
    }

    #[test]
    fn bar_reverses_products() {
        let f = form2();
        let (a, b) = (m(&f, &[1, 0]), m(&f, &[0, 1]));
        assert_eq!((&a * &b).bar(), &b * &a);
        assert_eq!(a.bar(), a);
        assert_eq!(
            a.scale(&QCoeff::q_pow(1)).bar(),
            a.scale(&QCoeff::q_pow(-1))
        );
    }

    #[test]
    fn collect_examples() {
        let f = form2();
        let x = m(&f, &[2, 1]);
        let c = x.collect_on_index(0);
        assert_eq!(c.len(), 1);
        let y = &c[&2];
        assert_eq!(&m(&f, &[2, 0]) * y, x);
        assert_eq!(y.as_monomial().unwrap().0, &ExpVec(vec![0, 1]));

        let x = &TorusElement::one(f.clone()) + &m(&f, &[-1, 0]);
        let c = x.collect_on_index(0);
        assert_eq!(c[&0], TorusElement::one(f.clone()));
        assert_eq!(c[&-1], TorusElement::one(f.clone()));
    }

    #[test]
    fn monomial_divisor() {
        let f = form2();
        let x = &m(&f, &[1, 0]) + &m(&f, &[0, 1]);
        let w = x.exact_divide_left(&m(&f, &[1, 0])).unwrap();
        assert_eq!(&m(&f, &[1, 0]) * &w, x);
        assert_eq!(w.coeff(&ExpVec(vec![0, 0])), QCoeff::one());
        assert_eq!(w.num_terms(), 2);
    }

    #[test]
    fn division_failures() {
        let f = form2();
        let one = TorusElement::one(f.clone());
        let d = &one + &m(&f, &[1, 0]);
        assert_eq!(one.exact_divide_left(&d), Err(TorusError::DivisionFailure));
        let two_term = &m(&f, &[1, 0]) + &m(&f, &[0, 1]);
        assert_eq!(
            m(&f, &[0, -1]).exact_divide_left(&two_term),
            Err(TorusError::DivisionFailure)
        );
        assert_eq!(
            one.exact_divide_left(&TorusElement::zero(f)),
            Err(TorusError::DivisionByZero)
        );
    }

    #[test]
    fn sublattice_membership() {
        let f = form2();
        assert!(m(&f, &[1, -1]).is_laurent_in_sublattice(&BTreeSet::from([1])));
        assert!(!m(&f, &[-1, 0]).is_laurent_in_sublattice(&BTreeSet::new()));
    }

    #[test]
    fn json_round_trip() {
        let f = form2();
        let x = m(&f, &[1, 1]).scale(&QCoeff::q_pow(1));
        let text = serde_json::to_string(&x.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"rank":2,"lambda":[[0,1],[-1,0]],"terms":[{"exp":[1,1],"coeff":"q"}]}"#
        );
        let back = TorusElement::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, x);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }

    fn arb_form(n: usize) -> impl Strategy<Value = Arc<SkewForm>> {
        prop::collection::vec(-3i64..4, n * (n - 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let x = it.next().unwrap();
                    rows[i][j] = x;
                    rows[j][i] = -x;
                }
            }
            Arc::new(SkewForm::new(rows).unwrap())
        })
    }

    fn arb_element(form: Arc<SkewForm>, max_terms: usize) -> impl Strategy<Value = TorusElement> {
        let n = form.rank();
        prop::collection::vec(
            (
                prop::collection::vec(-2i64..3, n),
                -3i64..4,
                prop_oneof![-2i64..0, 1i64..3],
            ),
            1..=max_terms,
        )
        .prop_map(move |ts| {
            TorusElement::from_terms(
                form.clone(),
                ts.into_iter()
                    .map(|(a, k, c)| (ExpVec(a), QCoeff::monomial(c, k))),
            )
            .unwrap()
        })
    }

    fn triple() -> impl Strategy<Value = (TorusElement, TorusElement, TorusElement)> {
        arb_form(3).prop_flat_map(|f| {
            (
                arb_element(f.clone(), 3),
                arb_element(f.clone(), 3),
                arb_element(f, 3),
            )
        })
    }

    proptest! {
        #[test]
        fn monomial_product_rule(f in arb_form(3), a in prop::collection::vec(-3i64..4, 3), b in prop::collection::vec(-3i64..4, 3)) {
            let p = &m(&f, &a) * &m(&f, &b);
            let (key, c) = p.as_monomial().unwrap();
            let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            prop_assert_eq!(&key.0, &sum);
            prop_assert_eq!(c, &QCoeff::v_pow(f.eval(&a, &b)));
        }

        #[test]
        fn ring_laws((x, y, z) in triple()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!((&x * &y).bar(), &y.bar() * &x.bar());
            prop_assert_eq!(x.bar().bar(), x);
        }

        #[test]
        fn division_round_trip((d, w, _) in triple()) {
            prop_assume!(!d.is_zero());
            let x = &d * &w;
            prop_assert_eq!(x.exact_divide_left(&d).unwrap(), w.clone());
            let x = &w * &d;
            prop_assert_eq!(x.exact_divide_right(&d).unwrap(), w);
        }

        #[test]
        fn collect_reconstructs((x, _, _) in triple(), i in 0usize..3) {
            let mut acc = TorusElement::zero(x.form().clone());
            for (k, y) in x.collect_on_index(i) {
                prop_assert!(y.terms().all(|(a, _)| a[i] == 0));
                acc = &acc + &(&m(x.form(), &ExpVec::unit(3, i).scaled(k).0) * &y);
            }
            prop_assert_eq!(acc, x);
        }
    }
}
