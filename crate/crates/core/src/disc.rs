//! The skein algebra of a disc with `n` marked points on its boundary.
//!
//! Simple multicurves in the disc are multisets of pairwise noncrossing
//! chords, and these form a basis. Products are put into this basis with two
//! rules: a chord `c` that crosses nothing in `[X]` merges as
//! `[c][X] = q^{Λ(c,X)/2} [X ∪ c]`, and two crossing chords resolve as
//! `[x_ac][x_bd] = q[x_ab][x_cd] + q^{-1}[x_ad][x_bc]` (labels clockwise).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcoeff::QCoeff;
use crate::qtorus::{ExpVec, SkewForm, TorusElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscError {
    #[error("chord ({0}, {1}) is not valid on a disc with {2} marked points")]
    BadChord(usize, usize, usize),
    #[error("elements live on discs of different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("chords {0} and {1} cross")]
    Crossing(Chord, Chord),
    #[error("element is not homogeneous: degrees {0:?} and {1:?}")]
    Inhomogeneous(Vec<i64>, Vec<i64>),
    #[error("not a triangulation: {0}")]
    NotTriangulation(String),
    #[error("negative weight {weight} on non-boundary chord {chord}")]
    NegativeWeight { chord: Chord, weight: i64 },
    #[error("Laurent expansion failed: {0} is not a monomial in the triangulation")]
    NotPolynomial(String),
    #[error("disc needs at least {0} marked points")]
    TooSmall(usize),
}

/// An unordered chord `{a, b}`, stored with `a < b`, labels `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chord {
    pub a: usize,
    pub b: usize,
}

impl Chord {
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self, DiscError> {
        if a == b || a == 0 || b == 0 || a > n || b > n {
            return Err(DiscError::BadChord(a, b, n));
        }
        Ok(Self {
            a: a.min(b),
            b: a.max(b),
        })
    }

    /// Unchecked constructor for internal use; normalizes the order.
    pub(crate) fn of(a: usize, b: usize) -> Self {
        Self {
            a: a.min(b),
            b: a.max(b),
        }
    }

    pub fn is_boundary(self, n: usize) -> bool {
        self.b - self.a == 1 || (self.a == 1 && self.b == n)
    }

    pub fn shares_endpoint(self, other: Chord) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// 1 if the chords' endpoints strictly interleave, else 0.
pub fn crossing(x: Chord, y: Chord) -> u32 {
    if x.shares_endpoint(y) {
        return 0;
    }
    let inside = |p: usize| x.a < p && p < x.b;
    u32::from(inside(y.a) != inside(y.b))
}

/// Clockwise distance from `from` to `to` on `n` points.
fn cw(from: usize, to: usize, n: usize) -> usize {
    (to + n - from) % n
}

/// The orientation pairing of two chords: `±1` when they share exactly one
/// endpoint `p`, positive when the far ends `u` (of `x`) and `w` (of `y`)
/// satisfy `u, p, w` in clockwise order.
pub fn chord_lambda(x: Chord, y: Chord, n: usize) -> i64 {
    if x == y {
        return 0;
    }
    let p = if x.a == y.a || x.a == y.b {
        x.a
    } else if x.b == y.a || x.b == y.b {
        x.b
    } else {
        return 0;
    };
    let u = if x.a == p { x.b } else { x.a };
    let w = if y.a == p { y.b } else { y.a };
    if cw(u, p, n) < cw(u, w, n) {
        1
    } else {
        -1
    }
}

/// A sorted multiset of chords.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ChordSet(Vec<Chord>);

impl ChordSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_chords(mut chords: Vec<Chord>) -> Self {
        chords.sort();
        Self(chords)
    }

    pub fn chords(&self) -> &[Chord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &x)| self.0[i + 1..].iter().all(|&y| crossing(x, y) == 0))
    }

    pub fn with(&self, c: Chord) -> Self {
        let mut v = self.0.clone();
        let i = v.partition_point(|&x| x <= c);
        v.insert(i, c);
        Self(v)
    }

    pub fn without_one(&self, c: Chord) -> Self {
        let mut v = self.0.clone();
        if let Some(i) = v.iter().position(|&x| x == c) {
            v.remove(i);
        }
        Self(v)
    }

    /// Chord and multiplicity pairs.
    pub fn grouped(&self) -> Vec<(Chord, i64)> {
        let mut out: Vec<(Chord, i64)> = Vec::new();
        for &c in &self.0 {
            match out.last_mut() {
                Some((d, k)) if *d == c => *k += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    pub fn lambda_with(&self, c: Chord, n: usize) -> i64 {
        self.0.iter().map(|&x| chord_lambda(c, x, n)).sum()
    }

    /// `Σ_{i<j} Λ(x_i, x_j)` in the stored order.
    pub fn internal_lambda(&self, n: usize) -> i64 {
        let mut s = 0;
        for (i, &x) in self.0.iter().enumerate() {
            for &y in &self.0[i + 1..] {
                s += chord_lambda(x, y, n);
            }
        }
        s
    }
}

impl fmt::Display for ChordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(""))
    }
}

/// A `Z[q^{±1/2}]`-combination of basis multicurves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscSkeinElement {
    n: usize,
    terms: BTreeMap<ChordSet, QCoeff>,
}

impl DiscSkeinElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::basis(n, ChordSet::empty())
    }

    /// `[X]` for a simple multicurve `X`.
    pub fn basis(n: usize, x: ChordSet) -> Self {
        Self::term(n, x, QCoeff::one())
    }

    pub fn term(n: usize, x: ChordSet, c: QCoeff) -> Self {
        let mut e = Self::zero(n);
        e.add_term(x, &c);
        e
    }

    pub fn chord(n: usize, c: Chord) -> Self {
        Self::basis(n, ChordSet(vec![c]))
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (ChordSet, QCoeff)>,
    ) -> Result<Self, DiscError> {
        let mut e = Self::zero(n);
        for (x, c) in terms {
            for &ch in x.chords() {
                Chord::new(ch.a, ch.b, n)?;
            }
            if let Some((p, q)) = first_crossing(&x) {
                return Err(DiscError::Crossing(p, q));
            }
            e.add_term(x, &c);
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChordSet, &QCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x: &ChordSet) -> QCoeff {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, x: ChordSet, c: &QCoeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&QCoeff::from_int(-1)))
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        let mut out = Self::zero(self.n);
        for (x, d) in &self.terms {
            out.add_term(x.clone(), &(d * c));
        }
        out
    }

    /// Coefficients barred, basis elements fixed.
    pub fn bar(&self) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(x, c)| (x.clone(), c.bar()))
                .collect(),
        }
    }

    /// Endpoint-degree vector, if all terms agree.
    pub fn grading(&self) -> Result<Vec<i64>, DiscError> {
        let mut found: Option<Vec<i64>> = None;
        for x in self.terms.keys() {
            let d = set_degree(x, self.n);
            match &found {
                None => found = Some(d),
                Some(prev) if *prev != d => return Err(DiscError::Inhomogeneous(prev.clone(), d)),
                _ => {}
            }
        }
        Ok(found.unwrap_or_else(|| vec![0; self.n]))
    }

    /// The top layer in `q`: terms carrying the largest power of `q^{1/2}`,
    /// with that power removed.
    pub fn in_q(&self) -> Self {
        let top = self.terms.values().filter_map(|c| c.max_exponent()).max();
        let mut out = Self::zero(self.n);
        if let Some(k) = top {
            for (x, c) in &self.terms {
                if c.max_exponent() == Some(k) {
                    out.add_term(x.clone(), &QCoeff::from_int(c.coeff(k)));
                }
            }
        }
        out
    }

    /// Evaluate at `q = 1`.
    pub fn specialize_q1(&self) -> CommutativeElement {
        let mut out = BTreeMap::new();
        for (x, c) in &self.terms {
            let v = c.specialize_q1();
            if v != BigInt::default() {
                out.insert(x.clone(), v);
            }
        }
        CommutativeElement {
            n: self.n,
            terms: out,
        }
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(x, c)| {
                    let g = x.grouped();
                    ElementTermJson {
                        chords: g.iter().map(|(ch, _)| [ch.a, ch.b]).collect(),
                        weights: g.iter().map(|(_, k)| *k).collect(),
                        coeff: c.clone(),
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(j: &ElementJson) -> Result<Self, DiscError> {
        let mut terms = Vec::new();
        for t in &j.terms {
            let w = weights_of(t);
            let mut chords = Vec::new();
            for (&[a, b], &k) in t.chords.iter().zip(&w) {
                let c = Chord::new(a, b, j.n)?;
                if k <= 0 {
                    return Err(DiscError::NegativeWeight {
                        chord: c,
                        weight: k,
                    });
                }
                chords.extend(std::iter::repeat_n(c, k as usize));
            }
            terms.push((ChordSet::from_chords(chords), t.coeff.clone()));
        }
        Self::from_terms(j.n, terms)
    }
}

fn weights_of(t: &ElementTermJson) -> Vec<i64> {
    if t.weights.is_empty() {
        vec![1; t.chords.len()]
    } else {
        t.weights.clone()
    }
}

fn set_degree(x: &ChordSet, n: usize) -> Vec<i64> {
    let mut d = vec![0; n];
    for c in x.chords() {
        d[c.a - 1] += 1;
        d[c.b - 1] += 1;
    }
    d
}

fn first_crossing(x: &ChordSet) -> Option<(Chord, Chord)> {
    let v = x.chords();
    for (i, &p) in v.iter().enumerate() {
        for &q in &v[i + 1..] {
            if crossing(p, q) == 1 {
                return Some((p, q));
            }
        }
    }
    None
}

impl fmt::Display for DiscSkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(x, c)| format!("({c})[{x}]"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Which crossing to resolve first when a chord meets several.
#[derive(Debug, Clone)]
pub enum Schedule {
    First,
    Last,
    Random(u64),
}

/// Rewrites products into the basis. With the deterministic schedules the
/// results of single-chord products are cached.
pub struct Reducer {
    n: usize,
    rng: Option<ChaCha8Rng>,
    last: bool,
    cache: HashMap<(Chord, ChordSet), DiscSkeinElement>,
}

impl Reducer {
    pub fn new(n: usize) -> Self {
        Self::with_schedule(n, Schedule::First)
    }

    pub fn with_schedule(n: usize, schedule: Schedule) -> Self {
        let (rng, last) = match schedule {
            Schedule::First => (None, false),
            Schedule::Last => (None, true),
            Schedule::Random(s) => (Some(ChaCha8Rng::seed_from_u64(s)), false),
        };
        Self {
            n,
            rng,
            last,
            cache: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `[c] · [X]` for a simple multicurve `X`.
    pub fn mul_chord(&mut self, c: Chord, x: &ChordSet) -> DiscSkeinElement {
        let n = self.n;
        let crossing_chords: Vec<Chord> = x
            .grouped()
            .into_iter()
            .map(|(y, _)| y)
            .filter(|&y| crossing(c, y) == 1)
            .collect();
        if crossing_chords.is_empty() {
            return DiscSkeinElement::term(n, x.with(c), QCoeff::v_pow(x.lambda_with(c, n)));
        }
        let cacheable = self.rng.is_none();
        if cacheable {
            if let Some(hit) = self.cache.get(&(c, x.clone())) {
                return hit.clone();
            }
        }
        let y = match &mut self.rng {
            Some(r) => crossing_chords[r.gen_range(0..crossing_chords.len())],
            None if self.last => *crossing_chords.last().unwrap(),
            None => crossing_chords[0],
        };
        let rest = x.without_one(y);
        // [X] = q^{-Λ(y, X')/2} [y][X'], then [c][y] resolves.
        let twist = -rest.lambda_with(y, n);
        let (s, t) = (c.a, c.b);
        let (b, d) = if cw(s, y.a, n) < cw(s, t, n) {
            (y.a, y.b)
        } else {
            (y.b, y.a)
        };
        let mut out = DiscSkeinElement::zero(n);
        for (first, second, k) in [
            (Chord::of(s, b), Chord::of(t, d), 2),
            (Chord::of(s, d), Chord::of(t, b), -2),
        ] {
            let inner = self.mul_chord(second, &rest);
            let outer = self.mul_element_left(first, &inner);
            out = out.add(&outer.scale(&QCoeff::v_pow(k + twist)));
        }
        if cacheable {
            self.cache.insert((c, x.clone()), out.clone());
        }
        out
    }

    /// `[c] · y`.
    pub fn mul_element_left(&mut self, c: Chord, y: &DiscSkeinElement) -> DiscSkeinElement {
        let mut out = DiscSkeinElement::zero(self.n);
        for (x, coeff) in &y.terms {
            out = out.add(&self.mul_chord(c, x).scale(coeff));
        }
        out
    }

    /// The product of a word, earlier chords lying over later ones.
    pub fn reduce(&mut self, word: &[Chord]) -> DiscSkeinElement {
        let mut acc = DiscSkeinElement::one(self.n);
        for &c in word.iter().rev() {
            acc = self.mul_element_left(c, &acc);
        }
        acc
    }

    pub fn product(
        &mut self,
        x: &DiscSkeinElement,
        y: &DiscSkeinElement,
    ) -> Result<DiscSkeinElement, DiscError> {
        if x.n != self.n || y.n != self.n {
            return Err(DiscError::SizeMismatch(x.n, y.n));
        }
        let mut out = DiscSkeinElement::zero(self.n);
        for (xs, cx) in &x.terms {
            // [X] = q^{-Σ_{i<j} Λ(x_i,x_j)/2} [x_1]…[x_m]
            let mut acc = y.clone();
            for &c in xs.chords().iter().rev() {
                acc = self.mul_element_left(c, &acc);
            }
            let k = -xs.internal_lambda(self.n);
            out = out.add(&acc.scale(&(cx * &QCoeff::v_pow(k))));
        }
        Ok(out)
    }
}

/// Reduce a word with the default schedule.
pub fn reduce(n: usize, word: &[Chord]) -> DiscSkeinElement {
    Reducer::new(n).reduce(word)
}

pub fn product(x: &DiscSkeinElement, y: &DiscSkeinElement) -> Result<DiscSkeinElement, DiscError> {
    if x.n != y.n {
        return Err(DiscError::SizeMismatch(x.n, y.n));
    }
    Reducer::new(x.n).product(x, y)
}

/// Total pairwise crossings between two multisets.
pub fn set_crossings(x: &ChordSet, y: &ChordSet) -> u32 {
    x.chords()
        .iter()
        .map(|&a| y.chords().iter().map(|&b| crossing(a, b)).sum::<u32>())
        .sum()
}

/// `μ(x, y)`: the largest crossing count over pairs of support elements.
pub fn mu(x: &DiscSkeinElement, y: &DiscSkeinElement) -> u32 {
    let mut best = 0;
    for a in x.terms.keys() {
        for b in y.terms.keys() {
            best = best.max(set_crossings(a, b));
        }
    }
    best
}

/// `γ_c(M)`: the multicurve obtained by taking the `q`-smoothing at every
/// crossing of `c` with `M`. Walking along `c = (s, t)` from `s`, the crossed
/// chords `(L_i, R_i)` (with `L_i` clockwise between `s` and `t`) are met in
/// order; the smoothing produces `(s, L_1), (R_1, L_2), …, (R_k, t)`.
pub fn leading_smoothing(c: Chord, m: &ChordSet, n: usize) -> ChordSet {
    let (s, t) = (c.a, c.b);
    let mut crossed: Vec<(usize, usize)> = Vec::new();
    let mut out: Vec<Chord> = Vec::new();
    for &y in m.chords() {
        if crossing(c, y) == 1 {
            let (l, r) = if cw(s, y.a, n) < cw(s, t, n) {
                (y.a, y.b)
            } else {
                (y.b, y.a)
            };
            crossed.push((l, r));
        } else {
            out.push(y);
        }
    }
    crossed.sort_by_key(|&(l, r)| (cw(s, l, n), cw(r, s, n)));
    let mut prev = s;
    for (l, r) in crossed {
        out.push(Chord::of(prev, l));
        prev = r;
    }
    out.push(Chord::of(prev, t));
    ChordSet::from_chords(out)
}

/// All noncrossing multisets of at most `max_size` chords.
pub fn simple_multisets(n: usize, max_size: usize) -> Vec<ChordSet> {
    let chords = all_chords(n);
    let mut out = vec![ChordSet::empty()];
    let mut layer = vec![(ChordSet::empty(), 0usize)];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for (set, from) in &layer {
            for (i, &c) in chords.iter().enumerate().skip(*from) {
                if set.chords().iter().all(|&x| crossing(x, c) == 0) {
                    let s = set.with(c);
                    out.push(s.clone());
                    next.push((s, i));
                }
            }
        }
        layer = next;
    }
    out
}

pub fn all_chords(n: usize) -> Vec<Chord> {
    let mut v = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            v.push(Chord::of(a, b));
        }
    }
    v
}

/// A triangulation of the disc: its diagonals followed by the boundary
/// chords `(1,2), (2,3), …, (n,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    n: usize,
    chords: Vec<Chord>,
}

impl Triangulation {
    pub fn new(n: usize, diagonals: &[Chord]) -> Result<Self, DiscError> {
        if n < 3 {
            return Err(DiscError::TooSmall(3));
        }
        if diagonals.len() != n - 3 {
            return Err(DiscError::NotTriangulation(format!(
                "{} diagonals, a triangulation has {}",
                diagonals.len(),
                n - 3
            )));
        }
        let mut chords = Vec::with_capacity(2 * n - 3);
        for &d in diagonals {
            let d = Chord::new(d.a, d.b, n)?;
            if d.is_boundary(n) || chords.contains(&d) {
                return Err(DiscError::NotTriangulation(format!(
                    "{d} is not a new diagonal"
                )));
            }
            if let Some(&x) = chords.iter().find(|&&x| crossing(x, d) == 1) {
                return Err(DiscError::Crossing(x, d));
            }
            chords.push(d);
        }
        for p in 1..=n {
            chords.push(Chord::of(p, p % n + 1));
        }
        Ok(Self { n, chords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn diagonals(&self) -> &[Chord] {
        &self.chords[..self.n - 3]
    }

    pub fn index_of(&self, c: Chord) -> Option<usize> {
        self.chords.iter().position(|&x| x == c)
    }

    /// `Λ^Δ` on the chords in order.
    pub fn lambda(&self) -> SkewForm {
        let rows = self
            .chords
            .iter()
            .map(|&x| {
                self.chords
                    .iter()
                    .map(|&y| chord_lambda(x, y, self.n))
                    .collect()
            })
            .collect();
        SkewForm::new(rows).expect("chord pairing is skew")
    }

    /// The basis element `[Δ^α]` for `α ≥ 0`.
    pub fn monomial(&self, alpha: &[i64]) -> ChordSet {
        let mut v = Vec::new();
        for (&c, &k) in self.chords.iter().zip(alpha) {
            v.extend(std::iter::repeat_n(c, k.max(0) as usize));
        }
        ChordSet::from_chords(v)
    }

    /// Exponent vector of a multiset of chords of `Δ`.
    pub fn exponents(&self, x: &ChordSet) -> Option<ExpVec> {
        let mut a = vec![0; self.chords.len()];
        for &c in x.chords() {
            a[self.index_of(c)?] += 1;
        }
        Some(ExpVec(a))
    }

    /// The diagonal replacing `j` in the quadrilateral formed by its two
    /// triangles.
    pub fn flipped_chord(&self, j: usize) -> Option<Chord> {
        let d = *self.diagonals().get(j)?;
        let apex = |inside: bool| {
            (1..=self.n).find(|&p| {
                p != d.a
                    && p != d.b
                    && ((d.a < p && p < d.b) == inside)
                    && self.chords.contains(&Chord::of(p, d.a))
                    && self.chords.contains(&Chord::of(p, d.b))
            })
        };
        Some(Chord::of(apex(true)?, apex(false)?))
    }

    pub fn flip(&self, j: usize) -> Option<Self> {
        let c = self.flipped_chord(j)?;
        let mut diags = self.diagonals().to_vec();
        diags[j] = c;
        Self::new(self.n, &diags).ok()
    }

    /// Diagonals sorted, for identity comparisons.
    pub fn key(&self) -> Vec<Chord> {
        let mut v = self.diagonals().to_vec();
        v.sort();
        v
    }
}

/// Every triangulation of the `n`-gon, diagonals sorted within each.
pub fn enumerate_triangulations(n: usize) -> Vec<Triangulation> {
    fn rec(lo: usize, hi: usize) -> Vec<Vec<Chord>> {
        // Triangulations of the polygon lo, lo+1, …, hi.
        if hi - lo < 2 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for k in lo + 1..hi {
            let left = rec(lo, k);
            let right = rec(k, hi);
            for l in &left {
                for r in &right {
                    let mut v = l.clone();
                    v.extend(r);
                    if k - lo > 1 {
                        v.push(Chord::of(lo, k));
                    }
                    if hi - k > 1 {
                        v.push(Chord::of(k, hi));
                    }
                    out.push(v);
                }
            }
        }
        out
    }
    if n < 3 {
        return Vec::new();
    }
    let mut out: Vec<Triangulation> = rec(1, n)
        .into_iter()
        .map(|mut d| {
            d.sort();
            Triangulation::new(n, &d).expect("enumerated diagonals form a triangulation")
        })
        .collect();
    out.sort();
    out
}

/// `μ_Δ(x)`: crossings of each chord of `Δ` with `x`.
pub fn mu_delta(x: &DiscSkeinElement, delta: &Triangulation) -> ExpVec {
    ExpVec(
        delta
            .chords()
            .iter()
            .map(|&c| mu(&DiscSkeinElement::chord(delta.n, c), x) as i64)
            .collect(),
    )
}

/// The Laurent expansion of `x` in the quantum torus of `Δ`: clear the
/// denominator `[Δ^{μ_Δ(x)}]`, read off the resulting polynomial in `Δ`, and
/// divide again inside the torus.
pub fn expand_laurent(
    x: &DiscSkeinElement,
    delta: &Triangulation,
    reducer: &mut Reducer,
    form: &Arc<SkewForm>,
) -> Result<TorusElement, DiscError> {
    if x.n != delta.n {
        return Err(DiscError::SizeMismatch(x.n, delta.n));
    }
    let mu = mu_delta(x, delta);
    let den = DiscSkeinElement::basis(delta.n, delta.monomial(&mu.0));
    let p = reducer.product(&den, x)?;
    let mut terms = Vec::new();
    for (set, c) in p.terms() {
        let a = delta
            .exponents(set)
            .ok_or_else(|| DiscError::NotPolynomial(set.to_string()))?;
        terms.push((a, c.clone()));
    }
    let poly = TorusElement::from_terms(form.clone(), terms).expect("dimensions agree");
    let inv = TorusElement::monomial(form.clone(), mu.scaled(-1), QCoeff::one())
        .expect("dimensions agree");
    Ok(&inv * &poly)
}

/// Weighted multicurves: boundary chords may carry negative weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedSet(BTreeMap<Chord, i64>);

impl WeightedSet {
    pub fn new(
        n: usize,
        weights: impl IntoIterator<Item = (Chord, i64)>,
    ) -> Result<Self, DiscError> {
        let mut m: BTreeMap<Chord, i64> = BTreeMap::new();
        for (c, w) in weights {
            let c = Chord::new(c.a, c.b, n)?;
            *m.entry(c).or_default() += w;
        }
        m.retain(|_, w| *w != 0);
        for (&c, &w) in &m {
            if w < 0 && !c.is_boundary(n) {
                return Err(DiscError::NegativeWeight {
                    chord: c,
                    weight: w,
                });
            }
        }
        let keys: Vec<Chord> = m.keys().copied().collect();
        for (i, &x) in keys.iter().enumerate() {
            for &y in &keys[i + 1..] {
                if crossing(x, y) == 1 {
                    return Err(DiscError::Crossing(x, y));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_set(x: &ChordSet) -> Self {
        Self(x.grouped().into_iter().collect())
    }

    pub fn weights(&self) -> &BTreeMap<Chord, i64> {
        &self.0
    }

    /// Split as `X⁺ - β` with both parts nonnegative.
    pub fn split(&self) -> (ChordSet, ChordSet) {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (&c, &w) in &self.0 {
            let v = if w > 0 { &mut pos } else { &mut neg };
            v.extend(std::iter::repeat_n(c, w.unsigned_abs() as usize));
        }
        (ChordSet::from_chords(pos), ChordSet::from_chords(neg))
    }

    fn shifted(&self, by: &ChordSet, sign: i64) -> Self {
        let mut m = self.0.clone();
        for &c in by.chords() {
            *m.entry(c).or_default() += sign;
        }
        m.retain(|_, w| *w != 0);
        Self(m)
    }
}

fn pair_lambda(x: &ChordSet, y: &ChordSet, n: usize) -> i64 {
    x.chords().iter().map(|&c| y.lambda_with(c, n)).sum()
}

/// An element of the skein algebra localized at the boundary chords. The
/// basis element of `X⁺ - β` is `q^{Λ(β,X⁺)/2} [β]^{-1} [X⁺]`, which is
/// bar-invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedElement {
    n: usize,
    terms: BTreeMap<WeightedSet, QCoeff>,
}

impl LocalizedElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(n: usize, x: WeightedSet) -> Self {
        Self::term(n, x, QCoeff::one())
    }

    pub fn term(n: usize, x: WeightedSet, c: QCoeff) -> Self {
        let mut e = Self::zero(n);
        e.add_term(x, &c);
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeightedSet, &QCoeff)> {
        self.terms.iter()
    }

    fn add_term(&mut self, x: WeightedSet, c: &QCoeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), c);
        }
        out
    }

    /// Embed an element of the unlocalized algebra.
    pub fn from_skein(x: &DiscSkeinElement) -> Self {
        let mut out = Self::zero(x.n);
        for (s, c) in x.terms() {
            out.add_term(WeightedSet::from_set(s), c);
        }
        out
    }

    /// The unlocalized element, if no weight is negative.
    pub fn to_skein(&self) -> Option<DiscSkeinElement> {
        let mut out = DiscSkeinElement::zero(self.n);
        for (w, c) in &self.terms {
            let (pos, neg) = w.split();
            if !neg.is_empty() {
                return None;
            }
            out.add_term(pos, c);
        }
        Some(out)
    }

    pub fn bar(&self) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(x, c)| (x.clone(), c.bar()))
                .collect(),
        }
    }

    /// `[β]^{-1}` for a multiset of boundary chords.
    pub fn boundary_inverse(n: usize, beta: &ChordSet) -> Result<Self, DiscError> {
        let w = WeightedSet::new(n, beta.chords().iter().map(|&c| (c, -1)))?;
        Ok(Self::basis(n, w))
    }

    pub fn product(&self, other: &Self, reducer: &mut Reducer) -> Result<Self, DiscError> {
        let n = self.n;
        if other.n != n || reducer.n() != n {
            return Err(DiscError::SizeMismatch(n, other.n));
        }
        let mut out = Self::zero(n);
        for (x, cx) in &self.terms {
            let (xp, beta) = x.split();
            for (y, cy) in &other.terms {
                let (yp, gamma) = y.split();
                // [X][Y] = q^{(Λ(β,X⁺) + Λ(γ,Y⁺) + 2Λ(γ,X⁺) - Λ(γ,β))/2}
                //          [β+γ]^{-1} [X⁺][Y⁺]
                let k = pair_lambda(&beta, &xp, n)
                    + pair_lambda(&gamma, &yp, n)
                    + 2 * pair_lambda(&gamma, &xp, n)
                    - pair_lambda(&gamma, &beta, n);
                let mut delta = beta.chords().to_vec();
                delta.extend(gamma.chords());
                let delta = ChordSet::from_chords(delta);
                let num = reducer.product(
                    &DiscSkeinElement::basis(n, xp.clone()),
                    &DiscSkeinElement::basis(n, yp),
                )?;
                let c = cx * cy;
                for (z, cz) in num.terms() {
                    // [δ]^{-1}[Z] = q^{-Λ(δ,Z)/2} [Z - δ]
                    let shift = k - pair_lambda(&delta, z, n);
                    let w = WeightedSet::from_set(z).shifted(&delta, -1);
                    out.add_term(w, &(&c * &cz.shift(shift)));
                }
            }
        }
        Ok(out)
    }
}

/// An element of the commutative algebra at `q = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutativeElement {
    pub n: usize,
    pub terms: BTreeMap<ChordSet, BigInt>,
}

impl CommutativeElement {
    /// Expand the union of two multisets by the classical Plücker relation,
    /// one crossing pair at a time, until nothing crosses.
    pub fn resolve(n: usize, chords: Vec<Chord>) -> Self {
        let mut out: BTreeMap<ChordSet, BigInt> = BTreeMap::new();
        let mut stack = vec![(ChordSet::from_chords(chords), BigInt::from(1))];
        while let Some((set, c)) = stack.pop() {
            match first_crossing(&set) {
                None => {
                    let slot = out.entry(set).or_default();
                    *slot += c;
                }
                Some((x, y)) => {
                    let rest = set.without_one(x).without_one(y);
                    let (s, t) = (x.a, x.b);
                    let (b, d) = if s < y.a && y.a < t {
                        (y.a, y.b)
                    } else {
                        (y.b, y.a)
                    };
                    stack.push((rest.with(Chord::of(s, b)).with(Chord::of(t, d)), c.clone()));
                    stack.push((rest.with(Chord::of(s, d)).with(Chord::of(t, b)), c));
                }
            }
        }
        out.retain(|_, v| *v != BigInt::default());
        Self { n, terms: out }
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut out: BTreeMap<ChordSet, BigInt> = BTreeMap::new();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let mut v = x.chords().to_vec();
                v.extend(y.chords());
                for (z, cz) in Self::resolve(self.n, v).terms {
                    *out.entry(z).or_default() += cx * cy * cz;
                }
            }
        }
        out.retain(|_, v| *v != BigInt::default());
        Self {
            n: self.n,
            terms: out,
        }
    }
}

/// Wire format for elements:
/// `{"n": n, "terms": [{"chords": [[a,b],..], "weights": [..], "coeff": ".."}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub n: usize,
    pub terms: Vec<ElementTermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementTermJson {
    pub chords: Vec<[usize; 2]>,
    #[serde(default)]
    pub weights: Vec<i64>,
    pub coeff: QCoeff,
}

impl LocalizedElement {
    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| ElementTermJson {
                    chords: w.0.keys().map(|ch| [ch.a, ch.b]).collect(),
                    weights: w.0.values().copied().collect(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &ElementJson) -> Result<Self, DiscError> {
        let mut out = Self::zero(j.n);
        for t in &j.terms {
            let w = weights_of(t);
            let pairs = t
                .chords
                .iter()
                .zip(&w)
                .map(|(&[a, b], &k)| Chord::new(a, b, j.n).map(|c| (c, k)))
                .collect::<Result<Vec<_>, _>>()?;
            out.add_term(WeightedSet::new(j.n, pairs)?, &t.coeff);
        }
        Ok(out)
    }
}

/// Parse a word `[[a,b],...]` against a disc of size `n`.
pub fn word_from_pairs(n: usize, pairs: &[[usize; 2]]) -> Result<Vec<Chord>, DiscError> {
    pairs.iter().map(|&[a, b]| Chord::new(a, b, n)).collect()
}

/// A uniformly random word of `len` chords.
pub fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> Vec<Chord> {
    let chords = all_chords(n);
    (0..len)
        .map(|_| chords[rng.gen_range(0..chords.len())])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: usize, b: usize) -> Chord {
        Chord::of(a, b)
    }

    fn set(v: &[(usize, usize)]) -> ChordSet {
        ChordSet::from_chords(v.iter().map(|&(a, b)| ch(a, b)).collect())
    }

    #[test]
    fn crossing_examples() {
        assert_eq!(crossing(ch(1, 3), ch(2, 4)), 1);
        assert_eq!(crossing(ch(1, 2), ch(1, 3)), 0);
        assert_eq!(crossing(ch(1, 2), ch(3, 4)), 0);
        assert_eq!(crossing(ch(1, 3), ch(1, 3)), 0);
        assert!(Chord::new(2, 2, 4).is_err());
        assert!(Chord::new(1, 5, 4).is_err());
    }

    #[test]
    fn plucker() {
        let r = reduce(4, &[ch(1, 3), ch(2, 4)]);
        let expected = DiscSkeinElement::term(4, set(&[(1, 2), (3, 4)]), QCoeff::q_pow(1)).add(
            &DiscSkeinElement::term(4, set(&[(1, 4), (2, 3)]), QCoeff::q_pow(-1)),
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn boundary_commutation() {
        let r = reduce(4, &[ch(1, 2), ch(2, 3)]);
        assert_eq!(
            r,
            DiscSkeinElement::term(4, set(&[(1, 2), (2, 3)]), QCoeff::v_pow(1))
        );
        let s = reduce(4, &[ch(2, 3), ch(1, 2)]);
        assert_eq!(r, s.scale(&QCoeff::q_pow(1)));
    }

    #[test]
    fn empty_word_is_unit() {
        assert_eq!(reduce(5, &[]), DiscSkeinElement::one(5));
    }

    #[test]
    fn mu_examples() {
        let a = DiscSkeinElement::chord(4, ch(1, 3));
        let b = DiscSkeinElement::chord(4, ch(2, 4));
        assert_eq!(mu(&a, &b), 1);
        assert_eq!(mu(&a, &DiscSkeinElement::zero(4)), 0);
        let p = product(&a, &b).unwrap();
        assert_eq!(mu(&a, &p), 0);
    }

    #[test]
    fn grading_examples() {
        assert_eq!(
            DiscSkeinElement::chord(4, ch(1, 3)).grading().unwrap(),
            vec![1, 0, 1, 0]
        );
        assert_eq!(DiscSkeinElement::one(4).grading().unwrap(), vec![0; 4]);
        let mixed = DiscSkeinElement::chord(4, ch(1, 3)).add(&DiscSkeinElement::chord(4, ch(2, 4)));
        assert!(matches!(mixed.grading(), Err(DiscError::Inhomogeneous(..))));
    }

    #[test]
    fn gamma_single_crossing() {
        assert_eq!(
            leading_smoothing(ch(1, 3), &set(&[(2, 4)]), 4),
            set(&[(1, 2), (3, 4)])
        );
    }

    #[test]
    fn in_q_top_layer() {
        let m = set(&[(1, 2)]);
        let m2 = set(&[(2, 3)]);
        let x = DiscSkeinElement::term(4, m.clone(), QCoeff::q_pow(2))
            .add(&DiscSkeinElement::basis(4, m2));
        assert_eq!(x.in_q(), DiscSkeinElement::basis(4, m));
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (3..=8).map(|n| enumerate_triangulations(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn mu_delta_of_monomial_is_zero() {
        for t in enumerate_triangulations(6) {
            let x = DiscSkeinElement::basis(6, t.monomial(&[1, 2, 0, 1, 0, 0, 0, 3, 0]));
            assert!(mu_delta(&x, &t).is_zero());
        }
    }

    #[test]
    fn mu_delta_fan_at_two() {
        let t = Triangulation::new(5, &[ch(2, 4), ch(2, 5)]).unwrap();
        let x = DiscSkeinElement::chord(5, ch(1, 3));
        assert_eq!(&mu_delta(&x, &t).0[..2], &[1, 1]);
    }

    #[test]
    fn expand_disc4() {
        let t = Triangulation::new(4, &[ch(1, 3)]).unwrap();
        let form = Arc::new(t.lambda());
        let mut r = Reducer::new(4);
        let x = DiscSkeinElement::chord(4, ch(2, 4));
        let e = expand_laurent(&x, &t, &mut r, &form).unwrap();
        // chords: (1,3), (1,2), (2,3), (3,4), (4,1)
        let expected = TorusElement::from_terms(
            form.clone(),
            [
                (ExpVec(vec![-1, 1, 0, 1, 0]), QCoeff::one()),
                (ExpVec(vec![-1, 0, 1, 0, 1]), QCoeff::one()),
            ],
        )
        .unwrap();
        assert_eq!(e, expected);
        let mono = DiscSkeinElement::basis(4, t.monomial(&[2, 0, 1, 0, 0]));
        let e = expand_laurent(&mono, &t, &mut r, &form).unwrap();
        assert_eq!(e.as_monomial().unwrap().0, &ExpVec(vec![2, 0, 1, 0, 0]));
        assert!(e.as_monomial().unwrap().1.is_one());
    }

    #[test]
    fn flipped_chord_disc5() {
        let t = Triangulation::new(5, &[ch(1, 3), ch(1, 4)]).unwrap();
        assert_eq!(t.flipped_chord(0), Some(ch(2, 4)));
        assert_eq!(t.flipped_chord(1), Some(ch(3, 5)));
    }

    #[test]
    fn localization_round_trip() {
        let n = 5;
        let mut r = Reducer::new(n);
        let x = LocalizedElement::from_skein(&DiscSkeinElement::basis(n, set(&[(1, 3), (3, 4)])));
        let b = set(&[(3, 4)]);
        let inv = LocalizedElement::boundary_inverse(n, &b).unwrap();
        let bb = LocalizedElement::from_skein(&DiscSkeinElement::basis(n, b));
        let y = inv.product(&x, &mut r).unwrap();
        assert_eq!(bb.product(&y, &mut r).unwrap(), x);
        let z = x.product(&inv, &mut r).unwrap();
        assert_eq!(z.product(&bb, &mut r).unwrap(), x);
    }

    #[test]
    fn localized_basis_bar_invariant() {
        let n = 5;
        let w = WeightedSet::new(
            n,
            [(ch(1, 3), 2), (ch(1, 2), -1), (ch(3, 4), -2), (ch(4, 5), 1)],
        )
        .unwrap();
        let x = LocalizedElement::basis(n, w.clone());
        // bar is an antiautomorphism: bar([β]^{-1}[X⁺]) reassembles to the same basis element.
        let (pos, neg) = w.split();
        let mut r = Reducer::new(n);
        let inv = LocalizedElement::boundary_inverse(n, &neg).unwrap();
        let p = LocalizedElement::from_skein(&DiscSkeinElement::basis(n, pos));
        let lhs = inv.product(&p, &mut r).unwrap();
        let rhs = p.product(&inv, &mut r).unwrap();
        // [β]^{-1}[X⁺] and [X⁺][β]^{-1} are bar images of each other
        assert_eq!(lhs.bar(), rhs);
        assert_eq!(x.bar(), x);
        assert!(lhs.terms().count() == 1);
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(matches!(
            WeightedSet::new(5, [(ch(1, 3), -1)]),
            Err(DiscError::NegativeWeight { .. })
        ));
    }

    #[test]
    fn commutative_plucker() {
        let c = CommutativeElement::resolve(4, vec![ch(1, 3), ch(2, 4)]);
        assert_eq!(c.terms.len(), 2);
        assert!(c.terms.values().all(|v| *v == BigInt::from(1)));
        assert_eq!(reduce(4, &[ch(1, 3), ch(2, 4)]).specialize_q1(), c);
    }

    #[test]
    fn json_round_trip() {
        let r = reduce(5, &[ch(1, 3), ch(2, 4), ch(2, 4)]);
        let text = serde_json::to_string(&r.to_json()).unwrap();
        let back = DiscSkeinElement::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
