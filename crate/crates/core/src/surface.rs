//! Triangulated marked surfaces, stored combinatorially.
//!
//! Each marked point keeps the clockwise list of arc ends arriving there,
//! beginning and ending with a boundary arc. Everything else (triangles,
//! genus, the matrices `Λ^Δ` and `Q^Δ`) is derived from these lists.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qseed::{ExchangeMatrix, QuantumSeed, SeedError, SkewMatrix};
use crate::qtorus::{SkewForm, TorusError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("arc {0} is a boundary arc")]
    BoundaryArc(usize),
    #[error("arc index {0} out of range")]
    NoSuchArc(usize),
    #[error("arc {0} has both ends at one marked point; cutting along it is not supported")]
    LoopArc(usize),
    #[error("end list at marked point {point} is malformed: {msg}")]
    EndList { point: usize, msg: String },
    #[error("chords {0:?} and {1:?} cross")]
    Crossing((usize, usize), (usize, usize)),
    #[error("chord {0:?} is invalid")]
    BadChord((usize, usize)),
    #[error("face through arc {arc} has {len} sides")]
    NotTriangle { arc: usize, len: usize },
    #[error("component {component} has {got} arcs, expected {expected}")]
    ArcCount {
        component: usize,
        expected: i64,
        got: usize,
    },
    #[error("component {component} has non-integral genus")]
    Genus { component: usize },
    #[error("quadrilateral around arc {0} is degenerate")]
    Degenerate(usize),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// One end of an arc: `side` 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct End {
    pub arc: usize,
    pub side: u8,
}

impl End {
    pub fn new(arc: usize, side: u8) -> Self {
        Self { arc, side }
    }

    pub fn other(self) -> Self {
        Self {
            arc: self.arc,
            side: 1 - self.side,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub label: String,
    /// Clockwise, first and last entries on boundary arcs.
    pub ends: Vec<End>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcRecord {
    pub label: String,
    /// Marked point of each side.
    pub points: [usize; 2],
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub points: Vec<usize>,
    pub arcs: Vec<usize>,
    pub triangles: usize,
    pub genus: i64,
    pub boundaries: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulatedSurface {
    points: Vec<MarkedPoint>,
    arcs: Vec<ArcRecord>,
    triangles: Vec<[usize; 3]>,
    components: Vec<Component>,
}

impl TriangulatedSurface {
    /// Assemble and validate.
    pub fn new(points: Vec<MarkedPoint>, arcs: Vec<ArcRecord>) -> Result<Self, SurfaceError> {
        let mut s = Self {
            points,
            arcs,
            triangles: Vec::new(),
            components: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    /// The disc with `n` marked points, triangulated as a fan at point 1.
    pub fn build_disc(n: usize) -> Result<Self, SurfaceError> {
        let diagonals: Vec<(usize, usize)> = (3..n).map(|k| (1, k)).collect();
        Self::from_disc_chords(n, &diagonals)
    }

    /// The disc with points labelled `1..=n` clockwise and the given
    /// diagonals. Arc order: diagonals as given, then `(1,2), …, (n,1)`.
    pub fn from_disc_chords(n: usize, diagonals: &[(usize, usize)]) -> Result<Self, SurfaceError> {
        if n < 3 {
            return Err(SurfaceError::InvalidSize(format!(
                "a triangulable disc needs at least 3 marked points, got {n}"
            )));
        }
        let mut chords: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in diagonals {
            let (a, b) = (a.min(b), a.max(b));
            if a < 1 || b > n || a == b || b - a == 1 || (a == 1 && b == n) {
                return Err(SurfaceError::BadChord((a, b)));
            }
            if chords.contains(&(a, b)) {
                return Err(SurfaceError::BadChord((a, b)));
            }
            if let Some(&c) = chords.iter().find(|&&c| chords_cross(c, (a, b))) {
                return Err(SurfaceError::Crossing(c, (a, b)));
            }
            chords.push((a, b));
        }
        let mut arcs: Vec<ArcRecord> = chords
            .iter()
            .map(|&(a, b)| ArcRecord {
                label: format!("{a},{b}"),
                points: [a - 1, b - 1],
                boundary: false,
            })
            .collect();
        for p in 1..=n {
            let q = p % n + 1;
            arcs.push(ArcRecord {
                label: format!("{p},{q}"),
                points: [p - 1, q - 1],
                boundary: true,
            });
        }
        let mut points: Vec<MarkedPoint> = (1..=n)
            .map(|p| MarkedPoint {
                label: p.to_string(),
                ends: Vec::new(),
            })
            .collect();
        for (idx, arc) in arcs.iter().enumerate() {
            for side in 0..2u8 {
                points[arc.points[side as usize]]
                    .ends
                    .push(End::new(idx, side));
            }
        }
        for (p, pt) in points.iter_mut().enumerate() {
            pt.ends.sort_by_key(|e| {
                let other = arcs[e.arc].points[1 - e.side as usize];
                (other + n - p) % n
            });
        }
        Self::new(points, arcs)
    }

    /// The annulus with `p` marked points on the outer boundary and `q` on
    /// the inner one. Arc order: `p + q` bridging arcs, then the outer
    /// boundary arcs, then the inner ones. For `(1, 1)` the labels are
    /// `x0, x1, a, b`.
    pub fn build_annulus(p: usize, q: usize) -> Result<Self, SurfaceError> {
        if p == 0 || q == 0 {
            return Err(SurfaceError::InvalidSize(format!(
                "each boundary of the annulus needs a marked point, got ({p}, {q})"
            )));
        }
        let nb = p + q;
        let top = |t: usize| nb + t;
        let bot = |m: usize| nb + p + m;
        let pt_top = |t: usize| t;
        let pt_bot = |m: usize| p + m;
        let simple = p == 1 && q == 1;
        let mut arcs = Vec::new();
        // Bridges B_k = (P_k, R_0) for k < p and B_{p+m} = (P_0, R_m).
        for k in 0..nb {
            let (a, b) = if k < p { (k, 0) } else { (0, k - p) };
            arcs.push(ArcRecord {
                label: if simple {
                    format!("x{k}")
                } else {
                    format!("B{k}")
                },
                points: [pt_top(a), pt_bot(b)],
                boundary: false,
            });
        }
        for t in 0..p {
            arcs.push(ArcRecord {
                label: if simple { "a".into() } else { format!("T{t}") },
                points: [pt_top(t), pt_top((t + 1) % p)],
                boundary: true,
            });
        }
        for m in 0..q {
            arcs.push(ArcRecord {
                label: if simple { "b".into() } else { format!("U{m}") },
                points: [pt_bot(m), pt_bot((m + 1) % q)],
                boundary: true,
            });
        }
        let bridge_top = |k: usize| End::new(k, 0);
        let bridge_bot = |k: usize| End::new(k, 1);
        let mut points = Vec::new();
        for t in 0..p {
            let mut ends = vec![End::new(top(t), 0)];
            if t == 0 {
                ends.push(bridge_top(0));
                ends.extend((p..nb).rev().map(bridge_top));
            } else {
                ends.push(bridge_top(t));
            }
            ends.push(End::new(top((t + p - 1) % p), 1));
            points.push(MarkedPoint {
                label: format!("P{t}"),
                ends,
            });
        }
        for m in 0..q {
            let mut ends = vec![End::new(bot((m + q - 1) % q), 1)];
            if m == 0 {
                ends.extend((0..=p).map(bridge_bot));
            } else {
                ends.push(bridge_bot(p + m));
            }
            ends.push(End::new(bot(m), 0));
            points.push(MarkedPoint {
                label: format!("R{m}"),
                ends,
            });
        }
        Self::new(points, arcs)
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    pub fn arcs(&self) -> &[ArcRecord] {
        &self.arcs
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Indices of non-boundary arcs, ascending.
    pub fn exchangeable(&self) -> Vec<usize> {
        (0..self.arcs.len())
            .filter(|&i| !self.arcs[i].boundary)
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.arcs.iter().map(|a| a.label.clone()).collect()
    }

    /// Arcs as chords `(a, b)`, `a < b`, when every point label is an integer.
    pub fn disc_chords(&self) -> Option<Vec<(usize, usize)>> {
        let labels: Vec<usize> = self
            .points
            .iter()
            .map(|p| p.label.parse().ok())
            .collect::<Option<_>>()?;
        Some(
            self.arcs
                .iter()
                .map(|a| {
                    let (x, y) = (labels[a.points[0]], labels[a.points[1]]);
                    (x.min(y), x.max(y))
                })
                .collect(),
        )
    }

    fn point_of(&self, e: End) -> usize {
        self.arcs[e.arc].points[e.side as usize]
    }

    fn position(&self, e: End) -> (usize, usize) {
        let p = self.point_of(e);
        let idx = self.points[p]
            .ends
            .iter()
            .position(|&x| x == e)
            .expect("end missing from its point");
        (p, idx)
    }

    fn succ(&self, e: End) -> Option<End> {
        let (p, i) = self.position(e);
        self.points[p].ends.get(i + 1).copied()
    }

    fn pred(&self, e: End) -> Option<End> {
        let (p, i) = self.position(e);
        i.checked_sub(1).map(|j| self.points[p].ends[j])
    }

    fn validate(&mut self) -> Result<(), SurfaceError> {
        let n_arcs = self.arcs.len();
        let mut seen = vec![[false; 2]; n_arcs];
        for (p, pt) in self.points.iter().enumerate() {
            let bad = |msg: String| SurfaceError::EndList { point: p, msg };
            if pt.ends.len() < 2 {
                return Err(bad("fewer than two arc ends".into()));
            }
            for (i, e) in pt.ends.iter().enumerate() {
                if e.arc >= n_arcs || e.side > 1 {
                    return Err(bad(format!("unknown end {e:?}")));
                }
                if self.arcs[e.arc].points[e.side as usize] != p {
                    return Err(bad(format!("end {e:?} belongs elsewhere")));
                }
                let slot = &mut seen[e.arc][e.side as usize];
                if *slot {
                    return Err(bad(format!("end {e:?} listed twice")));
                }
                *slot = true;
                let outer = i == 0 || i + 1 == pt.ends.len();
                if outer != self.arcs[e.arc].boundary {
                    return Err(bad(format!(
                        "arc {} sits at position {i} but boundary flag is {}",
                        e.arc, self.arcs[e.arc].boundary
                    )));
                }
            }
        }
        if let Some(a) = seen.iter().position(|s| !s[0] || !s[1]) {
            return Err(SurfaceError::EndList {
                point: self.arcs[a].points[0],
                msg: format!("arc {a} is missing an end"),
            });
        }
        // A boundary arc runs from the point where its end is first to the
        // point where its other end is last.
        let mut boundary_head = vec![0usize; n_arcs];
        for (a, arc) in self.arcs.iter().enumerate() {
            if arc.boundary {
                let first = |side: usize| {
                    self.points[arc.points[side]].ends.first() == Some(&End::new(a, side as u8))
                };
                let last = |side: usize| {
                    self.points[arc.points[side]].ends.last() == Some(&End::new(a, side as u8))
                };
                if first(0) && last(1) {
                    boundary_head[a] = arc.points[1];
                } else if first(1) && last(0) {
                    boundary_head[a] = arc.points[0];
                } else {
                    return Err(SurfaceError::EndList {
                        point: arc.points[0],
                        msg: format!("boundary arc {a} must start first and end last"),
                    });
                }
            }
        }

        // Faces: corner (e_t, e_{t+1}) at p leads along e_{t+1}'s arc to its
        // other end f, giving corner (f, succ f).
        let corner_index = |pts: &[MarkedPoint]| {
            let mut offs = Vec::with_capacity(pts.len());
            let mut acc = 0;
            for pt in pts {
                offs.push(acc);
                acc += pt.ends.len() - 1;
            }
            (offs, acc)
        };
        let (offs, n_corners) = corner_index(&self.points);
        let mut visited = vec![false; n_corners];
        let mut triangles = Vec::new();
        for p in 0..self.points.len() {
            for t in 0..self.points[p].ends.len() - 1 {
                if visited[offs[p] + t] {
                    continue;
                }
                let mut sides = Vec::new();
                let (mut cp, mut ct) = (p, t);
                loop {
                    visited[offs[cp] + ct] = true;
                    let e = self.points[cp].ends[ct + 1];
                    sides.push(e.arc);
                    let (np, nt) = self.position(e.other());
                    if nt + 1 >= self.points[np].ends.len() {
                        return Err(SurfaceError::NotTriangle { arc: e.arc, len: 0 });
                    }
                    (cp, ct) = (np, nt);
                    if (cp, ct) == (p, t) {
                        break;
                    }
                    if visited[offs[cp] + ct] || sides.len() > 3 {
                        return Err(SurfaceError::NotTriangle {
                            arc: e.arc,
                            len: sides.len(),
                        });
                    }
                }
                if sides.len() != 3 {
                    return Err(SurfaceError::NotTriangle {
                        arc: sides[0],
                        len: sides.len(),
                    });
                }
                triangles.push([sides[0], sides[1], sides[2]]);
            }
        }

        // Components by union-find over marked points.
        let np = self.points.len();
        let mut parent: Vec<usize> = (0..np).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for arc in &self.arcs {
            let (a, b) = (
                find(&mut parent, arc.points[0]),
                find(&mut parent, arc.points[1]),
            );
            parent[a] = b;
        }
        let roots: Vec<usize> = (0..np).map(|p| find(&mut parent, p)).collect();
        let distinct: BTreeSet<usize> = roots.iter().copied().collect();
        let mut components = Vec::new();
        for (ci, &root) in distinct.iter().enumerate() {
            let points: Vec<usize> = (0..np).filter(|&p| roots[p] == root).collect();
            let arcs: Vec<usize> = (0..n_arcs)
                .filter(|&a| roots[self.arcs[a].points[0]] == root)
                .collect();
            let tris = triangles
                .iter()
                .filter(|t| roots[self.arcs[t[0]].points[0]] == root)
                .count();
            // Boundary cycles: a boundary arc ends last at some point whose
            // first end starts the next boundary arc.
            let mut done = BTreeSet::new();
            let mut h = 0;
            for &a in arcs.iter().filter(|&&a| self.arcs[a].boundary) {
                if done.contains(&a) {
                    continue;
                }
                h += 1;
                let mut cur = a;
                while done.insert(cur) {
                    cur = self.points[boundary_head[cur]].ends[0].arc;
                }
            }
            let chi = points.len() as i64 - arcs.len() as i64 + tris as i64;
            let twice_g = 2 - h as i64 - chi;
            if twice_g < 0 || twice_g % 2 != 0 {
                return Err(SurfaceError::Genus { component: ci });
            }
            let g = twice_g / 2;
            let expected = 6 * g + 3 * h as i64 + 2 * points.len() as i64 - 6;
            if expected != arcs.len() as i64 {
                return Err(SurfaceError::ArcCount {
                    component: ci,
                    expected,
                    got: arcs.len(),
                });
            }
            components.push(Component {
                points,
                arcs,
                triangles: tris,
                genus: g,
                boundaries: h,
            });
        }
        self.triangles = triangles;
        self.components = components;
        Ok(())
    }

    /// `Λ^Δ`: for each pair of ends at a common point, `+1` to `(x, y)` when
    /// `x`'s end comes later (clockwise) than `y`'s.
    pub fn lambda_matrix(&self) -> SkewForm {
        let n = self.arcs.len();
        let mut m = vec![vec![0i64; n]; n];
        for pt in &self.points {
            for (s, es) in pt.ends.iter().enumerate() {
                for et in &pt.ends[s + 1..] {
                    let (x, y) = (es.arc, et.arc);
                    if x != y {
                        m[y][x] += 1;
                        m[x][y] -= 1;
                    }
                }
            }
        }
        SkewForm::new(m).expect("orientation matrix is skew by construction")
    }

    /// `Q^Δ`: `-1` to `(x, y)` for each point where `x`'s end immediately
    /// follows `y`'s, `+1` for the reverse.
    pub fn q_matrix(&self) -> SkewMatrix {
        let n = self.arcs.len();
        let mut m = vec![vec![0i64; n]; n];
        for pt in &self.points {
            for w in pt.ends.windows(2) {
                let (x, y) = (w[0].arc, w[1].arc);
                if x != y {
                    m[x][y] += 1;
                    m[y][x] -= 1;
                }
            }
        }
        SkewMatrix::new(m).expect("adjacency matrix is skew by construction")
    }

    /// `B^Δ`: the columns of `Q^Δ` at non-boundary arcs.
    pub fn b_matrix(&self) -> ExchangeMatrix {
        ExchangeMatrix::from_square(self.q_matrix().rows(), self.exchangeable())
            .expect("principal part of a skew matrix is skew")
    }

    pub fn to_seed(&self) -> Result<QuantumSeed, SurfaceError> {
        Ok(QuantumSeed::initial(
            self.b_matrix(),
            self.lambda_matrix(),
            Some(self.labels()),
        )?)
    }

    /// Replace non-boundary arc `j` by the other diagonal of the
    /// quadrilateral formed by its two triangles. The new arc keeps index `j`.
    pub fn flip(&self, j: usize) -> Result<Self, SurfaceError> {
        let arc = self.arcs.get(j).ok_or(SurfaceError::NoSuchArc(j))?;
        if arc.boundary {
            return Err(SurfaceError::BoundaryArc(j));
        }
        let jp = End::new(j, 0);
        let jq = End::new(j, 1);
        let degenerate = || SurfaceError::Degenerate(j);
        let ap = self.succ(jp).ok_or_else(degenerate)?;
        let ar = ap.other();
        let br = self.succ(ar).ok_or_else(degenerate)?;
        if Some(br.other()) != self.pred(jq) {
            return Err(degenerate());
        }
        let cq = self.succ(jq).ok_or_else(degenerate)?;
        let cs = cq.other();
        let ds = self.succ(cs).ok_or_else(degenerate)?;
        if Some(ds.other()) != self.pred(jp) {
            return Err(degenerate());
        }
        if ar.arc == j || cs.arc == j {
            return Err(degenerate());
        }
        let r = self.point_of(ar);
        let s = self.point_of(cs);
        let mut points = self.points.clone();
        for pt in points.iter_mut() {
            pt.ends.retain(|e| e.arc != j);
        }
        let insert_after = |pts: &mut Vec<MarkedPoint>, p: usize, anchor: End, e: End| {
            let i = pts[p].ends.iter().position(|&x| x == anchor).unwrap();
            pts[p].ends.insert(i + 1, e);
        };
        insert_after(&mut points, r, ar, End::new(j, 0));
        insert_after(&mut points, s, cs, End::new(j, 1));
        let mut arcs = self.arcs.clone();
        arcs[j].points = [r, s];
        arcs[j].label = flipped_label(&self.points, &self.arcs[j].label, r, s);
        Self::new(points, arcs)
    }

    /// Cut along non-boundary arc `j`. The arc becomes a boundary arc, its
    /// copy is appended as a new arc, and the split marked points are
    /// appended as new points.
    pub fn cut(&self, j: usize) -> Result<Self, SurfaceError> {
        let arc = self.arcs.get(j).ok_or(SurfaceError::NoSuchArc(j))?;
        if arc.boundary {
            return Err(SurfaceError::BoundaryArc(j));
        }
        let (p, t) = self.position(End::new(j, 0));
        let (pp, tt) = self.position(End::new(j, 1));
        if p == pp {
            return Err(SurfaceError::LoopArc(j));
        }
        let copy = self.arcs.len();
        let p_new = self.points.len();
        let pp_new = p_new + 1;
        let mut points = self.points.clone();
        let mut arcs = self.arcs.clone();

        let after_p: Vec<End> = points[p].ends.split_off(t + 1);
        let after_pp: Vec<End> = points[pp].ends.split_off(tt + 1);
        points[pp].ends.pop();
        points[pp].ends.push(End::new(copy, 1));
        let mut head = vec![End::new(copy, 0)];
        head.extend(&after_p);
        let mut tail = vec![End::new(j, 1)];
        tail.extend(&after_pp);
        points.push(MarkedPoint {
            label: format!("{}'", self.points[p].label),
            ends: head,
        });
        points.push(MarkedPoint {
            label: format!("{}'", self.points[pp].label),
            ends: tail,
        });
        for e in &after_p {
            arcs[e.arc].points[e.side as usize] = p_new;
        }
        for e in &after_pp {
            arcs[e.arc].points[e.side as usize] = pp_new;
        }
        arcs[j].boundary = true;
        arcs[j].points = [p, pp_new];
        arcs.push(ArcRecord {
            label: format!("{}'", self.arcs[j].label),
            points: [p_new, pp],
            boundary: true,
        });
        Self::new(points, arcs)
    }

    /// Side-by-side union; `other`'s indices are shifted past ours.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, SurfaceError> {
        let (np, na) = (self.points.len(), self.arcs.len());
        let mut points = self.points.clone();
        let mut arcs = self.arcs.clone();
        points.extend(other.points.iter().map(|pt| {
            MarkedPoint {
                label: pt.label.clone(),
                ends: pt
                    .ends
                    .iter()
                    .map(|e| End::new(e.arc + na, e.side))
                    .collect(),
            }
        }));
        arcs.extend(other.arcs.iter().map(|a| ArcRecord {
            label: a.label.clone(),
            points: [a.points[0] + np, a.points[1] + np],
            boundary: a.boundary,
        }));
        Self::new(points, arcs)
    }

    pub fn to_json(&self) -> SurfaceJson {
        SurfaceJson {
            points: self.points.clone(),
            arcs: self.arcs.clone(),
            triangles: self.triangles.clone(),
            components: self.components.clone(),
        }
    }

    /// Triangles and components in the input are ignored and recomputed.
    pub fn from_json(j: &SurfaceJson) -> Result<Self, SurfaceError> {
        Self::new(j.points.clone(), j.arcs.clone())
    }
}

fn flipped_label(points: &[MarkedPoint], old: &str, r: usize, s: usize) -> String {
    match (
        points[r].label.parse::<usize>(),
        points[s].label.parse::<usize>(),
    ) {
        (Ok(a), Ok(b)) => format!("{},{}", a.min(b), a.max(b)),
        _ => format!("{old}'"),
    }
}

/// Strict interleaving of two chords on a circle.
pub fn chords_cross(x: (usize, usize), y: (usize, usize)) -> bool {
    let (a, b) = (x.0.min(x.1), x.0.max(x.1));
    let inside = |p: usize| a < p && p < b;
    let shared = [y.0, y.1].iter().any(|&p| p == a || p == b);
    !shared && inside(y.0) != inside(y.1)
}

impl fmt::Display for TriangulatedSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ci, c) in self.components.iter().enumerate() {
            writeln!(
                f,
                "component {ci}: genus {}, {} boundary, {} marked points, {} arcs, {} triangles",
                c.genus,
                c.boundaries,
                c.points.len(),
                c.arcs.len(),
                c.triangles
            )?;
        }
        for (p, pt) in self.points.iter().enumerate() {
            let ends: Vec<String> = pt
                .ends
                .iter()
                .map(|e| self.arcs[e.arc].label.clone())
                .collect();
            writeln!(f, "  point {p} ({}): {}", pt.label, ends.join(" "))?;
        }
        Ok(())
    }
}

/// Wire format for surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub points: Vec<MarkedPoint>,
    pub arcs: Vec<ArcRecord>,
    #[serde(default)]
    pub triangles: Vec<[usize; 3]>,
    #[serde(default)]
    pub components: Vec<Component>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &TriangulatedSurface, chord: (usize, usize)) -> usize {
        s.disc_chords()
            .unwrap()
            .iter()
            .position(|&c| c == chord)
            .unwrap()
    }

    #[test]
    fn disc_sizes() {
        let d5 = TriangulatedSurface::build_disc(5).unwrap();
        assert_eq!(d5.num_arcs(), 7);
        assert_eq!(d5.exchangeable(), vec![0, 1]);
        assert_eq!(d5.triangles().len(), 3);
        let c = &d5.components()[0];
        assert_eq!((c.genus, c.boundaries), (0, 1));
        let d3 = TriangulatedSurface::build_disc(3).unwrap();
        assert_eq!(d3.num_arcs(), 3);
        assert!(d3.exchangeable().is_empty());
        assert!(matches!(
            TriangulatedSurface::build_disc(2),
            Err(SurfaceError::InvalidSize(_))
        ));
    }

    #[test]
    fn annulus_sizes() {
        let a = TriangulatedSurface::build_annulus(1, 1).unwrap();
        assert_eq!(a.labels(), vec!["x0", "x1", "a", "b"]);
        let c = &a.components()[0];
        assert_eq!((c.genus, c.boundaries), (0, 2));
        for (p, q) in [(1, 2), (2, 1), (2, 3), (3, 3)] {
            let s = TriangulatedSurface::build_annulus(p, q).unwrap();
            assert_eq!(s.num_arcs(), 2 * (p + q));
        }
    }

    #[test]
    fn rejects_crossing_and_partial() {
        assert!(matches!(
            TriangulatedSurface::from_disc_chords(4, &[(1, 3), (2, 4)]),
            Err(SurfaceError::Crossing(..))
        ));
        assert!(TriangulatedSurface::from_disc_chords(5, &[(1, 3)]).is_err());
        assert!(matches!(
            TriangulatedSurface::from_disc_chords(5, &[(1, 2), (1, 3)]),
            Err(SurfaceError::BadChord(_))
        ));
    }

    #[test]
    fn disc_lambda_calibration() {
        // Chords (a,b), (b,c) with a, b, c clockwise: Λ = +1.
        let s = TriangulatedSurface::build_disc(5).unwrap();
        let l = s.lambda_matrix();
        assert_eq!(l.entry(idx(&s, (1, 2)), idx(&s, (2, 3))), 1);
        assert_eq!(l.entry(idx(&s, (1, 3)), idx(&s, (3, 4))), 1);
        assert_eq!(l.entry(idx(&s, (1, 2)), idx(&s, (3, 4))), 0);
    }

    #[test]
    fn annulus_lambda() {
        let s = TriangulatedSurface::build_annulus(1, 1).unwrap();
        let l = s.lambda_matrix();
        assert_eq!(l.entry(0, 1), -2);
        for i in 0..4 {
            assert_eq!(l.entry(2, i), 0);
            assert_eq!(l.entry(3, i), 0);
        }
    }

    #[test]
    fn quadrilateral_signs() {
        let s = TriangulatedSurface::build_disc(4).unwrap();
        let q = s.q_matrix();
        let j = idx(&s, (1, 3));
        let around = [(1, 2), (2, 3), (3, 4), (1, 4)];
        let signs: Vec<i64> = around.iter().map(|&c| q.entry(idx(&s, c), j)).collect();
        assert_eq!(signs, vec![1, -1, 1, -1]);
    }

    #[test]
    fn fan_adjacent_diagonals() {
        let s = TriangulatedSurface::build_disc(5).unwrap();
        assert_eq!(
            s.q_matrix().entry(idx(&s, (1, 3)), idx(&s, (1, 4))).abs(),
            1
        );
    }

    #[test]
    fn seeds_are_compatible() {
        for s in [
            TriangulatedSurface::build_disc(3).unwrap(),
            TriangulatedSurface::build_disc(6).unwrap(),
            TriangulatedSurface::build_annulus(1, 1).unwrap(),
            TriangulatedSurface::build_annulus(2, 3).unwrap(),
        ] {
            let d = s.to_seed().unwrap().check_compatibility().unwrap();
            assert!(d.iter().all(|&x| x == 4));
        }
    }

    #[test]
    fn flip_disc4() {
        let s = TriangulatedSurface::build_disc(4).unwrap();
        let f = s.flip(0).unwrap();
        assert_eq!(f.disc_chords().unwrap()[0], (2, 4));
        assert_eq!(f.flip(0).unwrap().disc_chords(), s.disc_chords());
        assert_eq!(s.flip(1), Err(SurfaceError::BoundaryArc(1)));
    }

    #[test]
    fn flip_matches_matrix_mutation() {
        let s = TriangulatedSurface::build_annulus(1, 1).unwrap();
        for j in s.exchangeable() {
            let f = s.flip(j).unwrap();
            assert_eq!(f.b_matrix(), s.b_matrix().mutate(j).unwrap());
        }
    }

    #[test]
    fn annulus_flip_extends_sequence() {
        let s = TriangulatedSurface::build_annulus(1, 1).unwrap();
        let f = s.flip(0).unwrap();
        // the new arc follows x1 at both points
        assert_eq!(f.lambda_matrix().entry(1, 0), -2);
    }

    #[test]
    fn cut_annulus() {
        let s = TriangulatedSurface::build_annulus(1, 1).unwrap();
        let c = s.cut(0).unwrap();
        assert_eq!(c.points().len(), 4);
        assert_eq!(c.num_arcs(), 5);
        assert_eq!(c.components().len(), 1);
        assert_eq!(c.components()[0].boundaries, 1);
        assert_eq!(c.exchangeable(), vec![1]);
        assert!(c.b_matrix().principal().is_zero());
    }

    #[test]
    fn cut_disc_splits() {
        let s = TriangulatedSurface::build_disc(6).unwrap();
        let c = s.cut(idx(&s, (1, 4))).unwrap();
        assert_eq!(c.components().len(), 2);
        let sizes: Vec<usize> = c.components().iter().map(|k| k.points.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 8);
        assert!(c.to_seed().unwrap().check_compatibility().is_ok());
    }

    #[test]
    fn json_round_trip() {
        let s = TriangulatedSurface::build_annulus(2, 1).unwrap();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back = TriangulatedSurface::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
