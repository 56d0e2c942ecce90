//! Quantum seeds `(B, Λ, M)` and their mutation.
//!
//! Every seed records its cluster variables as elements of the torus `T_0`
//! of a fixed initial seed, so seeds obtained from the same initial seed can
//! be compared directly.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::qcoeff::QCoeff;
use crate::qtorus::{ExpVec, SkewForm, TorusElement, TorusError, TorusJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("index {0} is out of range")]
    OutOfRange(usize),
    #[error("index {0} is not exchangeable")]
    Frozen(usize),
    #[error("bad exchange matrix: {0}")]
    Shape(String),
    #[error("compatibility fails at row {row}, column {col}: (ΛB) entry is {value}")]
    Incompatible { row: usize, col: usize, value: i64 },
    #[error("mutation at {0} has no Laurent quotient (internal error)")]
    LaurentFailure(usize),
    #[error("mutated variable {i} does not quasi-commute with variable {j}")]
    QuasiCommutation { i: usize, j: usize },
    #[error("upper membership is defined relative to an initial seed")]
    NotInitial,
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error("invalid seed JSON: {0}")]
    Json(String),
}

/// An `N × ex` integer matrix, column `k` belonging to index `ex[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    n: usize,
    ex: Vec<usize>,
    b: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn new(ex: Vec<usize>, b: Vec<Vec<i64>>) -> Result<Self, SeedError> {
        let n = b.len();
        if ex.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SeedError::Shape("ex must be strictly increasing".into()));
        }
        if let Some(&i) = ex.iter().find(|&&i| i >= n) {
            return Err(SeedError::OutOfRange(i));
        }
        if let Some(r) = b.iter().position(|r| r.len() != ex.len()) {
            return Err(SeedError::Shape(format!(
                "row {r} has {} entries, expected {}",
                b[r].len(),
                ex.len()
            )));
        }
        for (k, &i) in ex.iter().enumerate() {
            for (l, &j) in ex.iter().enumerate() {
                if b[i][l] != -b[j][k] {
                    return Err(SeedError::Shape(format!(
                        "exchangeable part is not skew-symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { n, ex, b })
    }

    /// Build from a full `N × N` matrix by keeping the columns in `ex`.
    pub fn from_square(full: &[Vec<i64>], ex: Vec<usize>) -> Result<Self, SeedError> {
        let b = full
            .iter()
            .map(|row| ex.iter().map(|&k| row[k]).collect())
            .collect();
        Self::new(ex, b)
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn ex(&self) -> &[usize] {
        &self.ex
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn column_of(&self, i: usize) -> Option<usize> {
        self.ex.binary_search(&i).ok()
    }

    /// `B_{j,i}` for exchangeable `i`.
    pub fn get(&self, j: usize, i: usize) -> Option<i64> {
        self.column_of(i).map(|c| self.b[j][c])
    }

    /// The principal part `πB` on `ex × ex`.
    pub fn principal(&self) -> SkewMatrix {
        SkewMatrix {
            a: self.ex.iter().map(|&i| self.b[i].clone()).collect(),
        }
    }

    /// Square `N × N` form with zero columns at frozen indices.
    pub fn to_square(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.n]; self.n];
        for (j, row) in self.b.iter().enumerate() {
            for (c, &i) in self.ex.iter().enumerate() {
                out[j][i] = row[c];
            }
        }
        out
    }

    pub fn mutate(&self, i: usize) -> Result<Self, SeedError> {
        let ci = self.column_of(i).ok_or(SeedError::Frozen(i))?;
        let mut b = self.b.clone();
        for (j, row) in b.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                let k = self.ex[c];
                if j == i || k == i {
                    *entry = -self.b[j][c];
                } else {
                    let bji = self.b[j][ci];
                    let bik = self.b[i][c];
                    *entry = self.b[j][c] + (bji.abs() * bik + bji * bik.abs()) / 2;
                }
            }
        }
        Ok(Self {
            n: self.n,
            ex: self.ex.clone(),
            b,
        })
    }

    pub fn freeze(&self, s: &BTreeSet<usize>) -> Result<Self, SeedError> {
        if let Some(&i) = s.iter().find(|i| self.column_of(**i).is_none()) {
            return Err(SeedError::Frozen(i));
        }
        let keep: Vec<usize> = (0..self.ex.len())
            .filter(|c| !s.contains(&self.ex[*c]))
            .collect();
        Ok(Self {
            n: self.n,
            ex: keep.iter().map(|&c| self.ex[c]).collect(),
            b: self
                .b
                .iter()
                .map(|row| keep.iter().map(|&c| row[c]).collect())
                .collect(),
        })
    }
}

/// A quantum seed whose cluster variables are expressed in `T_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumSeed {
    b: ExchangeMatrix,
    lambda: Arc<SkewForm>,
    frame: Vec<TorusElement>,
    labels: Option<Vec<String>>,
}

impl QuantumSeed {
    /// The initial seed: frame `X_i = M^{e_i}` in `T_Λ` itself.
    pub fn initial(
        b: ExchangeMatrix,
        lambda: SkewForm,
        labels: Option<Vec<String>>,
    ) -> Result<Self, SeedError> {
        let lambda = Arc::new(lambda);
        let frame = (0..lambda.rank())
            .map(|i| TorusElement::generator(lambda.clone(), i))
            .collect();
        Self::new(b, lambda, frame, labels)
    }

    pub fn new(
        b: ExchangeMatrix,
        lambda: Arc<SkewForm>,
        frame: Vec<TorusElement>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, SeedError> {
        let n = lambda.rank();
        if b.rows() != n || frame.len() != n {
            return Err(SeedError::Shape(format!(
                "B has {} rows, frame has {} entries, Λ has rank {n}",
                b.rows(),
                frame.len()
            )));
        }
        if frame.windows(2).any(|w| w[0].form() != w[1].form()) {
            return Err(TorusError::FormMismatch.into());
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(SeedError::Shape(format!(
                    "{} labels for {n} variables",
                    l.len()
                )));
            }
        }
        Ok(Self {
            b,
            lambda,
            frame,
            labels,
        })
    }

    pub fn rank(&self) -> usize {
        self.lambda.rank()
    }

    pub fn ex(&self) -> &[usize] {
        self.b.ex()
    }

    pub fn exchange_matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn lambda(&self) -> &Arc<SkewForm> {
        &self.lambda
    }

    pub fn frame(&self) -> &[TorusElement] {
        &self.frame
    }

    pub fn variable(&self, i: usize) -> &TorusElement {
        &self.frame[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The form of `T_0`, the torus the frame lives in.
    pub fn base_form(&self) -> Option<&Arc<SkewForm>> {
        self.frame.first().map(|x| x.form())
    }

    /// True when the frame is `M^{e_i}` in `T_Λ` for this seed's own `Λ`.
    pub fn is_initial(&self) -> bool {
        self.frame.iter().enumerate().all(|(i, x)| {
            **x.form() == *self.lambda
                && x.as_monomial()
                    .is_some_and(|(a, c)| c.is_one() && *a == ExpVec::unit(self.rank(), i))
        })
    }

    /// The seed monomial `M(β)` for `β ≥ 0`, expanded in `T_0`.
    pub fn seed_monomial(&self, beta: &[i64]) -> TorusElement {
        let form = self.base_form().expect("seed of rank 0").clone();
        let mut acc = TorusElement::one(form);
        let mut twist = 0;
        for (j, &bj) in beta.iter().enumerate() {
            debug_assert!(bj >= 0);
            if bj > 0 {
                acc = &acc * &self.frame[j].pow(bj as u32);
            }
            for (k, &bk) in beta.iter().enumerate().skip(j + 1) {
                twist += self.lambda.entry(j, k) * bj * bk;
            }
        }
        acc.shift(-twist)
    }

    /// The two terms `X_i · X'_i` splits into under the exchange relation,
    /// as elements of `T_0`.
    pub fn exchange_monomials(&self, i: usize) -> Result<(TorusElement, TorusElement), SeedError> {
        let n = self.rank();
        let ci = self.b.column_of(i).ok_or(SeedError::Frozen(i))?;
        let mut plus = vec![0; n];
        let mut minus = vec![0; n];
        for j in 0..n {
            let x = self.b.matrix()[j][ci];
            if x > 0 {
                plus[j] = x;
            } else {
                minus[j] = -x;
            }
        }
        let ei = ExpVec::unit(n, i);
        let tp = self.lambda.eval(&ei.0, &plus);
        let tm = self.lambda.eval(&ei.0, &minus);
        Ok((
            self.seed_monomial(&plus).shift(tp),
            self.seed_monomial(&minus).shift(tm),
        ))
    }

    /// The mutated variable `X'_i`, in `T_0`.
    pub fn mutated_variable(&self, i: usize) -> Result<TorusElement, SeedError> {
        let (p, m) = self.exchange_monomials(i)?;
        (&p + &m)
            .exact_divide_left(&self.frame[i])
            .map_err(|_| SeedError::LaurentFailure(i))
    }

    /// `P_i = X'_i · X_i`, a two-term element free of `X_i`.
    pub fn p_element(&self, i: usize) -> Result<TorusElement, SeedError> {
        Ok(&self.mutated_variable(i)? * &self.frame[i])
    }

    pub fn mutate(&self, i: usize) -> Result<Self, SeedError> {
        if i >= self.rank() {
            return Err(SeedError::OutOfRange(i));
        }
        let b = self.b.mutate(i)?;
        let xi = self.mutated_variable(i)?;
        let mut rows = self.lambda.rows().to_vec();
        for j in 0..self.rank() {
            if j == i {
                continue;
            }
            // X'_i X_j = q^{Λ'_ij} X_j X'_i, i.e. a v-exponent of 2Λ'_ij.
            let t = xi
                .quasi_commutation_exponent(&self.frame[j])?
                .filter(|t| t % 2 == 0)
                .ok_or(SeedError::QuasiCommutation { i, j })?;
            rows[i][j] = t / 2;
            rows[j][i] = -t / 2;
        }
        let mut frame = self.frame.clone();
        frame[i] = xi;
        Ok(Self {
            b,
            lambda: Arc::new(SkewForm::new(rows)?),
            frame,
            labels: self.labels.clone(),
        })
    }

    /// Returns the diagonal `D` with `ΛB = Dι`, or the first offending entry.
    pub fn check_compatibility(&self) -> Result<Vec<i64>, SeedError> {
        let n = self.rank();
        let mut d = Vec::with_capacity(self.ex().len());
        for (c, &k) in self.ex().iter().enumerate() {
            for row in 0..n {
                let value: i64 = (0..n)
                    .map(|j| self.lambda.entry(row, j) * self.b.matrix()[j][c])
                    .sum();
                let ok = if row == k { value > 0 } else { value == 0 };
                if !ok {
                    return Err(SeedError::Incompatible { row, col: k, value });
                }
                if row == k {
                    d.push(value);
                }
            }
        }
        Ok(d)
    }

    /// Check `X_i X_j = q^{Λ_ij} X_j X_i` in `T_0`; returns the first failing pair.
    pub fn check_quasi_commutation(&self) -> Result<(), SeedError> {
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                let t = self.frame[i].quasi_commutation_exponent(&self.frame[j])?;
                if t != Some(2 * self.lambda.entry(i, j)) {
                    return Err(SeedError::QuasiCommutation { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn freeze(&self, s: &BTreeSet<usize>) -> Result<Self, SeedError> {
        Ok(Self {
            b: self.b.freeze(s)?,
            ..self.clone()
        })
    }

    /// Identity of a seed up to reordering indices: the frame as a set,
    /// together with `B` and `Λ` permuted into the sorted frame order.
    pub fn canonical_key(&self) -> SeedKey {
        let n = self.rank();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.frame[a].terms_map().cmp(self.frame[b].terms_map()));
        let sq = self.b.to_square();
        let permute = |m: &dyn Fn(usize, usize) -> i64| -> Vec<Vec<i64>> {
            order
                .iter()
                .map(|&r| order.iter().map(|&c| m(r, c)).collect())
                .collect()
        };
        let exset: BTreeSet<usize> = self.ex().iter().copied().collect();
        SeedKey {
            frame: order
                .iter()
                .map(|&i| self.frame[i].terms_map().clone())
                .collect(),
            ex: order.iter().map(|i| exset.contains(i)).collect(),
            b: permute(&|r, c| sq[r][c]),
            lambda: permute(&|r, c| self.lambda.entry(r, c)),
        }
    }

    pub fn to_json(&self) -> SeedJson {
        SeedJson {
            ex: self.ex().to_vec(),
            b: self.b.matrix().to_vec(),
            lambda: self.lambda.rows().to_vec(),
            frame: self
                .frame
                .iter()
                .enumerate()
                .map(|(i, x)| (i.to_string(), x.to_json()))
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<Self, SeedError> {
        let b = ExchangeMatrix::new(j.ex.clone(), j.b.clone())?;
        let lambda = Arc::new(SkewForm::new(j.lambda.clone())?);
        let n = lambda.rank();
        if j.frame.is_empty() {
            let frame = (0..n)
                .map(|i| TorusElement::generator(lambda.clone(), i))
                .collect();
            return Self::new(b, lambda, frame, j.labels.clone());
        }
        let mut frame: Vec<Option<TorusElement>> = vec![None; n];
        let mut base: Option<Arc<SkewForm>> = None;
        for (k, t) in &j.frame {
            let i: usize = k
                .parse()
                .map_err(|_| SeedError::Json(format!("frame key {k:?} is not an index")))?;
            if i >= n {
                return Err(SeedError::OutOfRange(i));
            }
            let form = match &base {
                Some(f) => f.clone(),
                None => {
                    let f = Arc::new(SkewForm::new(t.lambda.clone())?);
                    base = Some(f.clone());
                    f
                }
            };
            frame[i] = Some(TorusElement::from_json_with_form(t, form)?);
        }
        let frame = frame
            .into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| SeedError::Json(format!("frame entry {i} missing"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(b, lambda, frame, j.labels.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedKey {
    frame: Vec<BTreeMap<ExpVec, QCoeff>>,
    ex: Vec<bool>,
    b: Vec<Vec<i64>>,
    lambda: Vec<Vec<i64>>,
}

/// Wire format: `{"ex": [..], "B": [[..]], "lambda": [[..]], "frame": {"<i>": torus}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedJson {
    pub ex: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    pub lambda: Vec<Vec<i64>>,
    #[serde(default)]
    pub frame: BTreeMap<String, TorusJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl SeedJson {
    /// Frame keys sort as strings; this orders them numerically for output.
    pub fn frame_in_order(&self) -> Vec<(usize, &TorusJson)> {
        let mut v: Vec<(usize, &TorusJson)> = self
            .frame
            .iter()
            .filter_map(|(k, t)| k.parse().ok().map(|i| (i, t)))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }
}

/// Membership in the upper cluster algebra, tested on `T_0` and the `|ex|`
/// tori one mutation away.
///
/// Collect `x = Σ_k X_i^k y_k`. The terms with `k ≥ 0` always lie in the
/// mutated torus; for `k = -m < 0` we need `X_i^{-m} y_{-m} = w X'^m_i` with
/// `w` free of `X_i`, which is an exact right division in `T_0`.
pub fn upper_membership(x: &TorusElement, seed: &QuantumSeed) -> Result<bool, SeedError> {
    if !seed.is_initial() {
        return Err(SeedError::NotInitial);
    }
    if **x.form() != **seed.lambda() {
        return Err(TorusError::FormMismatch.into());
    }
    let n = seed.rank();
    for &i in seed.ex() {
        let xp = seed.mutated_variable(i)?;
        for (k, y) in x.collect_on_index(i) {
            if k >= 0 {
                continue;
            }
            let m = -k;
            let lhs = &TorusElement::monomial(
                x.form().clone(),
                ExpVec::unit(n, i).scaled(k),
                QCoeff::one(),
            )? * &y;
            match lhs.exact_divide_right(&xp.pow(m as u32)) {
                Ok(w) if w.terms().all(|(a, _)| a[i] == 0) => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// A square skew-symmetric integer matrix, representing an exchange type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SkewMatrix {
    a: Vec<Vec<i64>>,
}

impl SkewMatrix {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self, SeedError> {
        SkewForm::new(a.clone())?;
        Ok(Self { a })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            a: vec![vec![0; n]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().flatten().all(|&x| x == 0)
    }

    pub fn mutate(&self, i: usize) -> Self {
        let n = self.n();
        let mut a = self.a.clone();
        for j in 0..n {
            for k in 0..n {
                a[j][k] = if j == i || k == i {
                    -self.a[j][k]
                } else {
                    let (x, y) = (self.a[j][i], self.a[i][k]);
                    self.a[j][k] + (x.abs() * y + x * y.abs()) / 2
                };
            }
        }
        Self { a }
    }

    /// Arrows `j → i` for `A_ij > 0`; acyclic iff Kahn's algorithm drains
    /// every vertex.
    pub fn is_acyclic(&self) -> bool {
        let n = self.n();
        let mut indeg: Vec<usize> = (0..n)
            .map(|i| (0..n).filter(|&j| self.a[i][j] > 0).count())
            .collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(j) = queue.pop_front() {
            seen += 1;
            for i in 0..n {
                if self.a[i][j] > 0 {
                    indeg[i] -= 1;
                    if indeg[i] == 0 {
                        queue.push_back(i);
                    }
                }
            }
        }
        seen == n
    }

    pub fn sinks(&self) -> BTreeSet<usize> {
        (0..self.n())
            .filter(|&i| (0..self.n()).all(|j| self.a[j][i] >= 0))
            .collect()
    }

    pub fn sources(&self) -> BTreeSet<usize> {
        (0..self.n())
            .filter(|&i| (0..self.n()).all(|j| self.a[j][i] <= 0))
            .collect()
    }

    /// A pair `(i, j)` with `A_ij ≠ 0` and `i` a sink or a source.
    pub fn banff_step(&self) -> Option<(usize, usize)> {
        let sinks = self.sinks();
        let sources = self.sources();
        (0..self.n())
            .filter(|i| sinks.contains(i) || sources.contains(i))
            .find_map(|i| (0..self.n()).find(|&j| self.a[i][j] != 0).map(|j| (i, j)))
    }

    pub fn permuted(&self, p: &[usize]) -> Self {
        Self {
            a: p.iter()
                .map(|&r| p.iter().map(|&c| self.a[r][c]).collect())
                .collect(),
        }
    }

    /// Lexicographically least simultaneous permutation. Exhaustive, so
    /// only meant for small matrices.
    pub fn canonical(&self) -> Self {
        let mut p: Vec<usize> = (0..self.n()).collect();
        let mut best = self.clone();
        while next_permutation(&mut p) {
            let c = self.permuted(&p);
            if c < best {
                best = c;
            }
        }
        best
    }

    /// The mutation class up to simultaneous permutation, by breadth-first
    /// search. Stops after `cap` classes and reports truncation.
    pub fn mutation_class(&self, cap: usize) -> (Vec<SkewMatrix>, bool) {
        let start = self.canonical();
        let mut seen: HashSet<SkewMatrix> = HashSet::from([start.clone()]);
        let mut out = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(m) = queue.pop_front() {
            for i in 0..m.n() {
                let c = m.mutate(i).canonical();
                if seen.insert(c.clone()) {
                    if out.len() >= cap {
                        return (out, true);
                    }
                    out.push(c.clone());
                    queue.push_back(c);
                }
            }
        }
        (out, false)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_seeds: usize,
    pub max_depth: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_seeds: 10_000,
            max_depth: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeedEnumeration {
    pub seeds: Vec<QuantumSeed>,
    pub depth: usize,
    pub truncated: bool,
}

impl SeedEnumeration {
    /// Distinct cluster variables over all enumerated seeds.
    pub fn cluster_variables(&self) -> Vec<TorusElement> {
        let mut seen = BTreeMap::new();
        for s in &self.seeds {
            for &i in s.ex() {
                let x = s.variable(i);
                seen.entry(x.terms_map().clone())
                    .or_insert_with(|| x.clone());
            }
        }
        seen.into_values().collect()
    }
}

/// Level-by-level search of the mutation graph. Each level's mutations are
/// computed with `exec`; deduplication then runs in a fixed order, so the
/// result does not depend on scheduling.
pub fn enumerate_seeds(
    start: &QuantumSeed,
    limits: EnumerationLimits,
    exec: Execution,
) -> Result<SeedEnumeration, SeedError> {
    let mut seen: HashSet<SeedKey> = HashSet::from([start.canonical_key()]);
    let mut seeds = vec![start.clone()];
    let mut frontier = vec![start.clone()];
    let mut depth = 0;
    while !frontier.is_empty() {
        if depth >= limits.max_depth {
            return Ok(SeedEnumeration {
                seeds,
                depth,
                truncated: true,
            });
        }
        let jobs: Vec<(&QuantumSeed, usize)> = frontier
            .iter()
            .flat_map(|s| s.ex().iter().map(move |&i| (s, i)))
            .collect();
        let results = exec.map(&jobs, |(s, i)| {
            s.mutate(*i).map(|m| {
                let key = m.canonical_key();
                (m, key)
            })
        });
        let mut next = Vec::new();
        for r in results {
            let (m, key) = r?;
            if seen.insert(key) {
                if seeds.len() >= limits.max_seeds {
                    return Ok(SeedEnumeration {
                        seeds,
                        depth,
                        truncated: true,
                    });
                }
                seeds.push(m.clone());
                next.push(m);
            }
        }
        frontier = next;
        depth += 1;
    }
    Ok(SeedEnumeration {
        seeds,
        depth,
        truncated: false,
    })
}
