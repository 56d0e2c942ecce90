//! The annulus with one marked point on each boundary component.
//!
//! Everything is computed in the quantum torus of the triangulation
//! `{x_0, x_1, a, b}` (indices 0, 1, 2, 3). Arcs `x_i` are indexed so that
//! both ends of `x_{i+1}` lie clockwise of both ends of `x_i`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::qcoeff::QCoeff;
use crate::qseed::{upper_membership, QuantumSeed, SeedError};
use crate::qtorus::{laurent_add, laurent_mul, ExpVec, SkewForm, TorusElement, TorusError};
use crate::surface::{SurfaceError, TriangulatedSurface};

pub const X0: usize = 0;
pub const X1: usize = 1;
pub const A: usize = 2;
pub const B: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnulusError {
    #[error("index {index} is outside the cached range ±{bound}")]
    OutOfRange { index: i64, bound: i64 },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

#[derive(Debug, Clone)]
pub struct AnnulusModel {
    seed: QuantumSeed,
    form: Arc<SkewForm>,
    bound: i64,
    xs: BTreeMap<i64, TorusElement>,
    ell: TorusElement,
}

impl AnnulusModel {
    pub const DEFAULT_BOUND: i64 = 8;

    pub fn new() -> Result<Self, AnnulusError> {
        Self::with_bound(Self::DEFAULT_BOUND)
    }

    /// Cache `x_i` for `|i| ≤ bound` (at least 1).
    pub fn with_bound(bound: i64) -> Result<Self, AnnulusError> {
        let bound = bound.max(1);
        let seed = TriangulatedSurface::build_annulus(1, 1)?.to_seed()?;
        let form = seed.lambda().clone();
        let g = |i| TorusElement::generator(form.clone(), i);
        let (x0, x1, a, b) = (g(X0), g(X1), g(A), g(B));
        let ell = ell_from_pair(&x0, &x1, &a, &b)?;
        let mut xs = BTreeMap::from([(0, x0), (1, x1)]);
        // q x_{i+1} = ℓ x_i - q^{-1} x_{i-1}, run in both directions.
        for i in 1..bound {
            let next = &(&ell * &xs[&i]).shift(-2) - &xs[&(i - 1)].shift(-4);
            xs.insert(i + 1, next);
        }
        for i in (-bound + 1..=0).rev() {
            let prev = &(&ell * &xs[&i]).shift(2) - &xs[&(i + 1)].shift(4);
            xs.insert(i - 1, prev);
        }
        Ok(Self {
            seed,
            form,
            bound,
            xs,
            ell,
        })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn seed(&self) -> &QuantumSeed {
        &self.seed
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn loop_ell(&self) -> &TorusElement {
        &self.ell
    }

    pub fn a(&self) -> TorusElement {
        TorusElement::generator(self.form.clone(), A)
    }

    pub fn b(&self) -> TorusElement {
        TorusElement::generator(self.form.clone(), B)
    }

    pub fn x(&self, i: i64) -> Result<&TorusElement, AnnulusError> {
        self.xs.get(&i).ok_or(AnnulusError::OutOfRange {
            index: i,
            bound: self.bound,
        })
    }

    /// `x_i` by mutating along the flip sequence from `{x_0, x_1}`: the arc
    /// `x_k` always sits at index `k mod 2`.
    pub fn x_by_mutation(&self, i: i64) -> Result<TorusElement, AnnulusError> {
        if i.abs() > self.bound {
            return Err(AnnulusError::OutOfRange {
                index: i,
                bound: self.bound,
            });
        }
        let mut seed = self.seed.clone();
        if i >= 2 {
            for k in 2..=i {
                seed = seed.mutate(k.rem_euclid(2) as usize)?;
            }
        } else if i < 0 {
            for k in (i..0).rev() {
                seed = seed.mutate(k.rem_euclid(2) as usize)?;
            }
        }
        Ok(seed.variable(i.rem_euclid(2) as usize).clone())
    }

    /// Grading by endpoints: `(outer, inner)`.
    pub fn degrees() -> Vec<Vec<i64>> {
        vec![vec![1, 1], vec![1, 1], vec![2, 0], vec![0, 2]]
    }

    /// Check the relations for `|i| ≤ range`.
    pub fn verify_identities(&self, range: i64) -> Result<AnnulusReport, AnnulusError> {
        let mut entries = Vec::new();
        let x = |i: i64| self.x(i);
        let (a, b) = (self.a(), self.b());
        let ab = &a * &b;
        let ell = &self.ell;
        let q = |k: i64| QCoeff::q_pow(k);
        let mut check = |family: &str,
                         i: Option<i64>,
                         lhs: TorusElement,
                         rhs: TorusElement,
                         kind: CheckKind| {
            entries.push(IdentityCheck {
                family: family.to_string(),
                index: i,
                holds: lhs == rhs,
                kind,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        };

        check(
            "ell bar-invariant",
            None,
            ell.bar(),
            ell.clone(),
            CheckKind::Identity,
        );
        check(
            "a central in ell",
            None,
            &a * ell,
            ell * &a,
            CheckKind::Identity,
        );
        check(
            "b central in ell",
            None,
            &b * ell,
            ell * &b,
            CheckKind::Identity,
        );
        let deg = Self::degrees();
        check(
            "ell has degree 0",
            None,
            ell.clone(),
            if ell.grading(&deg) == Some(vec![0, 0]) {
                ell.clone()
            } else {
                TorusElement::zero(self.form.clone())
            },
            CheckKind::Identity,
        );
        let ell_laurent = {
            let m =
                |v: Vec<i64>| TorusElement::monomial(self.form.clone(), ExpVec(v), QCoeff::one());
            &(&m(vec![1, -1, 0, 0])? + &m(vec![-1, -1, 1, 1])?) + &m(vec![-1, 1, 0, 0])?
        };
        check(
            "ell Laurent expansion in x0, x1",
            None,
            ell.clone(),
            ell_laurent,
            CheckKind::Identity,
        );

        for i in -range..=range {
            let (xm, x0, x1, x2, x3) = (x(i - 1)?, x(i)?, x(i + 1)?, x(i + 2)?, x(i + 3)?);
            check(
                "ell x_i = q x_{i+1} + q^-1 x_{i-1}",
                Some(i),
                ell * x0,
                &x1.scale(&q(1)) + &xm.scale(&q(-1)),
                CheckKind::Identity,
            );
            check(
                "x_i x_{i+1} = q^-2 x_{i+1} x_i",
                Some(i),
                x0 * x1,
                (x1 * x0).scale(&q(-2)),
                CheckKind::Identity,
            );
            check(
                "x_i x_{i+1} = q^-1 x_{i+1} x_i (variant)",
                Some(i),
                x0 * x1,
                (x1 * x0).scale(&q(-1)),
                CheckKind::Variant,
            );
            check(
                "x_i x_{i+2} = ab + q^-2 x_{i+1}^2",
                Some(i),
                x0 * x2,
                &ab + &(x1 * x1).scale(&q(-2)),
                CheckKind::Identity,
            );
            check(
                "x_i x_{i+3} = q ell ab + q^-2 x_{i+1} x_{i+2}",
                Some(i),
                x0 * x3,
                &(ell * &ab).scale(&q(1)) + &(x1 * x2).scale(&q(-2)),
                CheckKind::Identity,
            );
            check(
                "x_{i+1} = q^-1 ell x_i - q^-2 x_{i-1}",
                Some(i),
                x1.clone(),
                &(ell * x0).scale(&q(-1)) - &xm.scale(&q(-2)),
                CheckKind::Identity,
            );
            check(
                "x_{i+1} = q ell x_i - q^2 x_{i-1} (variant)",
                Some(i),
                x1.clone(),
                &(ell * x0).scale(&q(1)) - &xm.scale(&q(2)),
                CheckKind::Variant,
            );
            check(
                "x_i x_{i+1} ell = q x_i^2 + q^-1 ab + q^-3 x_{i+1}^2",
                Some(i),
                &(x0 * x1) * ell,
                &(&(x0 * x0).scale(&q(1)) + &ab.scale(&q(-1))) + &(x1 * x1).scale(&q(-3)),
                CheckKind::Identity,
            );
            check(
                "ab ell = q^-1 x_i x_{i+3} - q^-3 x_{i+1} x_{i+2}",
                Some(i),
                &ab * ell,
                &(x0 * x3).scale(&q(-1)) - &(x1 * x2).scale(&q(-3)),
                CheckKind::Identity,
            );
            check(
                "x_i bar-invariant",
                Some(i),
                x0.bar(),
                x0.clone(),
                CheckKind::Identity,
            );
            check(
                "a central in x_i",
                Some(i),
                &a * x0,
                x0 * &a,
                CheckKind::Identity,
            );
            check(
                "b central in x_i",
                Some(i),
                &b * x0,
                x0 * &b,
                CheckKind::Identity,
            );
            check(
                "x_i has degree (1,1)",
                Some(i),
                x0.clone(),
                if x0.grading(&deg) == Some(vec![1, 1]) {
                    x0.clone()
                } else {
                    TorusElement::zero(self.form.clone())
                },
                CheckKind::Identity,
            );
            check(
                "x_i by recurrence = x_i by mutation",
                Some(i),
                x0.clone(),
                self.x_by_mutation(i)?,
                CheckKind::Identity,
            );
        }
        let member = upper_membership(ell, &self.seed)?;
        entries.push(IdentityCheck {
            family: "ell in the upper cluster algebra".into(),
            index: None,
            holds: member,
            kind: CheckKind::Identity,
            lhs: ell.to_string(),
            rhs: "member".into(),
        });
        Ok(AnnulusReport { range, entries })
    }

    /// The relations at `q = 1`, where the torus becomes a commutative
    /// Laurent ring; returns the indices at which any relation fails.
    pub fn classical_failures(&self, range: i64) -> Result<Vec<i64>, AnnulusError> {
        type Laurent = BTreeMap<ExpVec, BigInt>;
        let s = |i: i64| -> Result<Laurent, AnnulusError> { Ok(self.x(i)?.specialize_q1()) };
        let ell = self.ell.specialize_q1();
        let ab = laurent_mul(&self.a().specialize_q1(), &self.b().specialize_q1());
        let mut bad = Vec::new();
        for i in -range..=range {
            let (xm, x0, x1, x2, x3) = (s(i - 1)?, s(i)?, s(i + 1)?, s(i + 2)?, s(i + 3)?);
            let ok = laurent_mul(&ell, &x0) == laurent_add(&x1, &xm)
                && laurent_mul(&x0, &x2) == laurent_add(&ab, &laurent_mul(&x1, &x1))
                && laurent_mul(&x0, &x3)
                    == laurent_add(&laurent_mul(&ell, &ab), &laurent_mul(&x1, &x2))
                && laurent_mul(&x0, &x1) == laurent_mul(&x1, &x0);
            if !ok {
                bad.push(i);
            }
        }
        Ok(bad)
    }
}

/// `ℓ = (x_i x_{i+1})^{-1} (q x_i^2 + q^{-1} ab + q^{-3} x_{i+1}^2)`.
pub fn ell_from_pair(
    xi: &TorusElement,
    xj: &TorusElement,
    a: &TorusElement,
    b: &TorusElement,
) -> Result<TorusElement, TorusError> {
    let num = &(&(xi * xi).scale(&QCoeff::q_pow(1)) + &(a * b).scale(&QCoeff::q_pow(-1)))
        + &(xj * xj).scale(&QCoeff::q_pow(-3));
    num.exact_divide_left(&(xi * xj))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Must hold.
    Identity,
    /// A sign or ordering variant of a relation that is incompatible with
    /// the others. Kept in the report and expected not to hold.
    Variant,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub family: String,
    pub index: Option<i64>,
    pub kind: CheckKind,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

impl IdentityCheck {
    pub fn as_expected(&self) -> bool {
        match self.kind {
            CheckKind::Identity => self.holds,
            CheckKind::Variant => !self.holds,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnulusReport {
    pub range: i64,
    pub entries: Vec<IdentityCheck>,
}

impl AnnulusReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.as_expected())
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.entries.iter().filter(|e| !e.as_expected()).collect()
    }
}
