//! The verification suites: each checks one family of identities
//! exhaustively (or on seeded random samples) and reports pass/fail.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::annulus::AnnulusModel;
use crate::disc::{
    all_chords, enumerate_triangulations, expand_laurent, mu_delta, product, random_word, reduce,
    Chord, ChordSet, CommutativeElement, DiscSkeinElement, Reducer, Schedule, Triangulation,
};
use crate::exec::Execution;
use crate::qcoeff::QCoeff;
use crate::qseed::{enumerate_seeds, upper_membership, EnumerationLimits, QuantumSeed};
use crate::qtorus::{laurent_mul, ExpVec, SkewForm, TorusElement};
use crate::surface::TriangulatedSurface;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 2024,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
    pub budget_ms: u64,
}

impl CriterionReport {
    pub fn within_budget(&self) -> bool {
        self.elapsed_ms <= self.budget_ms as f64
    }
}

type Outcome = Result<String, String>;

struct Suite {
    name: &'static str,
    budget_ms: u64,
    run: fn(&VerifyOptions) -> Outcome,
}

const SUITES: [Suite; 12] = [
    Suite {
        name: "plucker",
        budget_ms: 1_000,
        run: plucker,
    },
    Suite {
        name: "boundary",
        budget_ms: 1_000,
        run: boundary,
    },
    Suite {
        name: "compatibility",
        budget_ms: 5_000,
        run: compatibility,
    },
    Suite {
        name: "flip",
        budget_ms: 30_000,
        run: flip_mutation,
    },
    Suite {
        name: "multiplicativity",
        budget_ms: 60_000,
        run: multiplicativity,
    },
    Suite {
        name: "denominators",
        budget_ms: 10_000,
        run: denominators,
    },
    Suite {
        name: "annulus",
        budget_ms: 10_000,
        run: annulus,
    },
    Suite {
        name: "membership",
        budget_ms: 10_000,
        run: membership,
    },
    Suite {
        name: "catalan",
        budget_ms: 10_000,
        run: catalan,
    },
    Suite {
        name: "rewriting",
        budget_ms: 60_000,
        run: rewriting,
    },
    Suite {
        name: "structural",
        budget_ms: 5_000,
        run: structural,
    },
    Suite {
        name: "specialization",
        budget_ms: 5_000,
        run: specialization,
    },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Run one suite by name or 1-based number.
pub fn run_suite(name: &str, opts: &VerifyOptions) -> Option<CriterionReport> {
    let id = match name.parse::<usize>() {
        Ok(k) if (1..=SUITES.len()).contains(&k) => k,
        _ => SUITES.iter().position(|s| s.name == name)? + 1,
    };
    let s = &SUITES[id - 1];
    let start = Instant::now();
    let outcome = (s.run)(opts);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionReport {
        id,
        suite: s.name,
        passed,
        detail,
        elapsed_ms,
        budget_ms: s.budget_ms,
    })
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s.name, opts).expect("known suite"))
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_err(results: Vec<Result<usize, String>>) -> Result<usize, String> {
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(total)
}

fn ch(a: usize, b: usize) -> Chord {
    Chord {
        a: a.min(b),
        b: a.max(b),
    }
}

fn set(chords: &[Chord]) -> ChordSet {
    ChordSet::from_chords(chords.to_vec())
}

/// `(a, b, c, …)` in clockwise order for each increasing tuple and each
/// cyclic rotation of it.
fn cyclic_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            for r in 0..k {
                let mut t = cur.clone();
                t.rotate_left(r);
                out.push(t);
            }
            return;
        }
        for p in from..=n {
            cur.push(p);
            rec(n, k, p + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 1, &mut Vec::new(), &mut out);
    out
}

fn plucker(_: &VerifyOptions) -> Outcome {
    let mut count = 0;
    for n in 4..=8 {
        for t in cyclic_tuples(n, 4) {
            let (a, b, c, d) = (t[0], t[1], t[2], t[3]);
            let lhs = reduce(n, &[ch(a, c), ch(b, d)]);
            let rhs = DiscSkeinElement::term(n, set(&[ch(a, b), ch(c, d)]), QCoeff::q_pow(1)).add(
                &DiscSkeinElement::term(n, set(&[ch(a, d), ch(b, c)]), QCoeff::q_pow(-1)),
            );
            ensure(lhs == rhs, || {
                format!("n={n} ({a},{b},{c},{d}): {lhs} != {rhs}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} clockwise 4-tuples, n = 4..8"))
}

fn boundary(_: &VerifyOptions) -> Outcome {
    let mut count = 0;
    for n in 3..=8 {
        for t in cyclic_tuples(n, 3) {
            let (a, b, c) = (t[0], t[1], t[2]);
            let lhs = reduce(n, &[ch(a, b), ch(b, c)]);
            let rhs = reduce(n, &[ch(b, c), ch(a, b)]).scale(&QCoeff::q_pow(1));
            ensure(lhs == rhs, || {
                format!("n={n} ({a},{b},{c}): {lhs} != {rhs}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} clockwise triples, n = 3..8"))
}

fn pairs(t: &Triangulation) -> Vec<(usize, usize)> {
    t.diagonals().iter().map(|c| (c.a, c.b)).collect()
}

fn compatible(seed: &QuantumSeed) -> Result<(), String> {
    let d = seed.check_compatibility().map_err(|e| e.to_string())?;
    ensure(d.iter().all(|&x| x == 4), || format!("ΛB diagonal {d:?}"))
}

fn compatibility(opts: &VerifyOptions) -> Outcome {
    let mut jobs: Vec<Triangulation> = Vec::new();
    for n in 3..=7 {
        jobs.extend(enumerate_triangulations(n));
    }
    let results = opts.exec.map(&jobs, |t| {
        let s =
            TriangulatedSurface::from_disc_chords(t.n(), &pairs(t)).map_err(|e| e.to_string())?;
        let seed = s.to_seed().map_err(|e| e.to_string())?;
        compatible(&seed).map_err(|e| format!("disc {:?}: {e}", t.key()))?;
        Ok(1)
    });
    let count = first_err(results)?;
    let ann = TriangulatedSurface::build_annulus(1, 1)
        .and_then(|s| s.to_seed())
        .map_err(|e| e.to_string())?;
    compatible(&ann).map_err(|e| format!("annulus: {e}"))?;
    Ok(format!(
        "{count} disc triangulations (n ≤ 7) and annulus(1,1): ΛB = 4ι"
    ))
}

fn flip_one_triangulation(t: &Triangulation) -> Result<usize, String> {
    let n = t.n();
    let s = TriangulatedSurface::from_disc_chords(n, &pairs(t)).map_err(|e| e.to_string())?;
    let seed = s.to_seed().map_err(|e| e.to_string())?;
    let form = Arc::new(t.lambda());
    ensure(*form == **seed.lambda(), || {
        format!("{:?}: disc and surface forms differ", t.key())
    })?;
    let mut reducer = Reducer::new(n);
    let mut count = 0;
    for j in 0..t.diagonals().len() {
        let f = s.flip(j).map_err(|e| e.to_string())?;
        let mutated = s.b_matrix().mutate(j).map_err(|e| e.to_string())?;
        ensure(f.b_matrix() == mutated, || {
            format!("{:?} flip {j}: B mismatch", t.key())
        })?;
        let c = t.flipped_chord(j).ok_or("no flip")?;
        let skein = expand_laurent(&DiscSkeinElement::chord(n, c), t, &mut reducer, &form)
            .map_err(|e| e.to_string())?;
        let seeded = seed.mutated_variable(j).map_err(|e| e.to_string())?;
        ensure(skein == seeded, || {
            format!(
                "{:?} flip {j} -> {c}: skein {skein} vs seed {seeded}",
                t.key()
            )
        })?;
        let m = seed.mutate(j).map_err(|e| e.to_string())?;
        ensure(**m.lambda() == f.lambda_matrix(), || {
            format!(
                "{:?} flip {j}: mutated Λ differs from the flipped surface",
                t.key()
            )
        })?;
        count += 1;
    }
    Ok(count)
}

fn flip_mutation(opts: &VerifyOptions) -> Outcome {
    let mut jobs = Vec::new();
    for n in 4..=6 {
        jobs.extend(enumerate_triangulations(n));
    }
    let count = first_err(opts.exec.map(&jobs, flip_one_triangulation))?;
    let s = TriangulatedSurface::build_annulus(1, 1).map_err(|e| e.to_string())?;
    let seed = s.to_seed().map_err(|e| e.to_string())?;
    let model = AnnulusModel::with_bound(2).map_err(|e| e.to_string())?;
    for j in s.exchangeable() {
        let f = s.flip(j).map_err(|e| e.to_string())?;
        let mutated = s.b_matrix().mutate(j).map_err(|e| e.to_string())?;
        ensure(f.b_matrix() == mutated, || {
            format!("annulus flip {j}: B mismatch")
        })?;
        let m = seed.mutate(j).map_err(|e| e.to_string())?;
        ensure(**m.lambda() == f.lambda_matrix(), || {
            format!("annulus flip {j}: Λ mismatch")
        })?;
    }
    let x2 = model.x(2).map_err(|e| e.to_string())?;
    let xm1 = model.x(-1).map_err(|e| e.to_string())?;
    ensure(
        *x2 == seed.mutated_variable(0).map_err(|e| e.to_string())?,
        || "annulus: x2 differs from the mutation at x0".into(),
    )?;
    ensure(
        *xm1 == seed.mutated_variable(1).map_err(|e| e.to_string())?,
        || "annulus: x-1 differs from the mutation at x1".into(),
    )?;
    Ok(format!("{count} disc flips (n ≤ 6) and both annulus flips"))
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> DiscSkeinElement {
    let len = rng.gen_range(1..=2);
    reduce(n, &random_word(rng, n, len))
}

fn multiplicativity(opts: &VerifyOptions) -> Outcome {
    let mut jobs: Vec<(Triangulation, u64)> = Vec::new();
    for n in 3..=6 {
        for (k, t) in enumerate_triangulations(n).into_iter().enumerate() {
            jobs.push((t, opts.seed ^ ((n as u64) << 32) ^ k as u64));
        }
    }
    let results = opts.exec.map(&jobs, |(t, s)| {
        let n = t.n();
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let form = Arc::new(t.lambda());
        let mut r = Reducer::new(n);
        for _ in 0..100 {
            let x = random_element(&mut rng, n);
            let y = random_element(&mut rng, n);
            let xy = r.product(&x, &y).map_err(|e| e.to_string())?;
            let ex = expand_laurent(&x, t, &mut r, &form).map_err(|e| e.to_string())?;
            let ey = expand_laurent(&y, t, &mut r, &form).map_err(|e| e.to_string())?;
            let exy = expand_laurent(&xy, t, &mut r, &form).map_err(|e| e.to_string())?;
            ensure(exy == &ex * &ey, || {
                format!(
                    "{:?}: expansion of {x} · {y} is not multiplicative",
                    t.key()
                )
            })?;
        }
        Ok(100)
    });
    let count = first_err(results)?;
    Ok(format!(
        "{count} random pairs over {} triangulations (n ≤ 6)",
        jobs.len()
    ))
}

fn denominators(opts: &VerifyOptions) -> Outcome {
    let mut jobs = Vec::new();
    for n in 3..=7 {
        jobs.extend(enumerate_triangulations(n));
    }
    let results = opts.exec.map(&jobs, |t| {
        let n = t.n();
        let form = Arc::new(t.lambda());
        let mut r = Reducer::new(n);
        let mut count = 0;
        for c in all_chords(n) {
            let x = DiscSkeinElement::chord(n, c);
            let e = expand_laurent(&x, t, &mut r, &form).map_err(|e| e.to_string())?;
            let mu = mu_delta(&x, t);
            let mut neg = vec![0i64; mu.len()];
            for (a, _) in e.terms() {
                for (k, slot) in neg.iter_mut().enumerate() {
                    *slot = (*slot).max(-a[k]);
                }
            }
            ensure(ExpVec(neg.clone()) == mu, || {
                format!(
                    "{:?}, chord {c}: negative support {neg:?} but μ = {:?}",
                    t.key(),
                    mu.0
                )
            })?;
            count += 1;
        }
        Ok(count)
    });
    let count = first_err(results)?;
    Ok(format!("{count} (chord, triangulation) pairs, n ≤ 7"))
}

fn annulus(_: &VerifyOptions) -> Outcome {
    let m = AnnulusModel::with_bound(8).map_err(|e| e.to_string())?;
    let report = m.verify_identities(5).map_err(|e| e.to_string())?;
    let variants = report
        .entries
        .iter()
        .filter(|e| e.kind == crate::annulus::CheckKind::Variant)
        .count();
    if let Some(f) = report.failures().first() {
        return Err(format!(
            "{} at i = {:?}: {} vs {}",
            f.family, f.index, f.lhs, f.rhs
        ));
    }
    Ok(format!(
        "{} checks for |i| ≤ 5; {variants} checks of the q^-1 commutation and reversed \
         recurrence variants fail as expected",
        report.entries.len()
    ))
}

fn membership(opts: &VerifyOptions) -> Outcome {
    let pentagon = TriangulatedSurface::build_disc(5)
        .and_then(|s| s.to_seed())
        .map_err(|e| e.to_string())?;
    let all = enumerate_seeds(&pentagon, EnumerationLimits::default(), opts.exec)
        .map_err(|e| e.to_string())?;
    let vars = all.cluster_variables();
    ensure(vars.len() == 5, || {
        format!("pentagon has {} exchangeable cluster variables", vars.len())
    })?;
    let model = AnnulusModel::with_bound(6).map_err(|e| e.to_string())?;
    let mut annulus_vars: Vec<TorusElement> = Vec::new();
    for i in -5..=6 {
        annulus_vars.push(model.x(i).map_err(|e| e.to_string())?.clone());
    }
    let check = |seed: &QuantumSeed, xs: &[TorusElement], what: &str| -> Result<(), String> {
        let ok = opts.exec.map(xs, |x| upper_membership(x, seed));
        for (x, r) in xs.iter().zip(ok) {
            ensure(r.map_err(|e| e.to_string())?, || {
                format!("{what}: {x} is not in U")
            })?;
        }
        for &i in seed.ex() {
            let inv = TorusElement::monomial(
                seed.lambda().clone(),
                ExpVec::unit(seed.rank(), i).scaled(-1),
                QCoeff::one(),
            )
            .map_err(|e| e.to_string())?;
            let r = upper_membership(&inv, seed).map_err(|e| e.to_string())?;
            ensure(!r, || {
                format!("{what}: M^(-e_{i}) passed the membership test")
            })?;
        }
        Ok(())
    };
    check(&pentagon, &vars, "pentagon")?;
    check(model.seed(), &annulus_vars, "annulus")?;
    ensure(
        upper_membership(model.loop_ell(), model.seed()).map_err(|e| e.to_string())?,
        || "annulus: ℓ is not in U".into(),
    )?;
    Ok(format!(
        "{} pentagon and {} annulus cluster variables (and ℓ) pass; every M^(-e_i) fails",
        vars.len(),
        annulus_vars.len()
    ))
}

/// Triangulations reachable from the fan by surface flips.
fn flip_orbit(n: usize) -> Result<usize, String> {
    let start = TriangulatedSurface::build_disc(n).map_err(|e| e.to_string())?;
    let key = |s: &TriangulatedSurface| -> BTreeSet<(usize, usize)> {
        s.disc_chords().unwrap_or_default().into_iter().collect()
    };
    let mut seen = HashSet::from([key(&start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for j in s.exchangeable() {
            let f = s.flip(j).map_err(|e| e.to_string())?;
            if seen.insert(key(&f)) {
                queue.push_back(f);
            }
        }
    }
    Ok(seen.len())
}

fn catalan(opts: &VerifyOptions) -> Outcome {
    let mut found = Vec::new();
    for (n, expected) in [(5, 5), (6, 14), (7, 42)] {
        let orbit = flip_orbit(n)?;
        let enumerated = enumerate_triangulations(n).len();
        ensure(orbit == expected && enumerated == expected, || {
            format!("n={n}: flip orbit {orbit}, enumeration {enumerated}, expected {expected}")
        })?;
        found.push(orbit);
    }
    let pentagon = TriangulatedSurface::build_disc(5)
        .and_then(|s| s.to_seed())
        .map_err(|e| e.to_string())?;
    let seeds = enumerate_seeds(&pentagon, EnumerationLimits::default(), opts.exec)
        .map_err(|e| e.to_string())?;
    ensure(seeds.seeds.len() == 5 && !seeds.truncated, || {
        format!(
            "pentagon seed enumeration found {} seeds",
            seeds.seeds.len()
        )
    })?;
    Ok(format!(
        "flip orbits {found:?} match enumeration; pentagon has 5 seeds"
    ))
}

fn rewriting(opts: &VerifyOptions) -> Outcome {
    let ns: Vec<usize> = (2..=8).collect();
    let results = opts.exec.map(&ns, |&n| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(n as u64));
        let mut checks = 0;
        for _ in 0..4 {
            let len = rng.gen_range(2..=4);
            let word = random_word(&mut rng, n, len);
            let reference = reduce(n, &word);
            for k in 0..20 {
                let schedule = match k {
                    0 => Schedule::Last,
                    _ => Schedule::Random(rng.gen()),
                };
                let other = Reducer::with_schedule(n, schedule).reduce(&word);
                ensure(other == reference, || {
                    format!("n={n}: word {word:?} is not confluent")
                })?;
                checks += 1;
            }
        }
        for _ in 0..25 {
            let x = random_element(&mut rng, n);
            let y = random_element(&mut rng, n);
            let z = random_element(&mut rng, n);
            let p = |a: &DiscSkeinElement, b: &DiscSkeinElement| {
                product(a, b).map_err(|e| e.to_string())
            };
            let xy = p(&x, &y)?;
            ensure(p(&xy, &z)? == p(&x, &p(&y, &z)?)?, || {
                format!("n={n}: ({x})({y})({z}) not associative")
            })?;
            ensure(xy.bar() == p(&y.bar(), &x.bar())?, || {
                format!("n={n}: bar law fails for {x}, {y}")
            })?;
            let (gx, gy, gxy) = (
                x.grading().map_err(|e| e.to_string())?,
                y.grading().map_err(|e| e.to_string())?,
                xy.grading().map_err(|e| e.to_string())?,
            );
            let sum: Vec<i64> = gx.iter().zip(&gy).map(|(a, b)| a + b).collect();
            ensure(gxy == sum, || {
                format!("n={n}: grading of {x} · {y} is not additive")
            })?;
            checks += 3;
        }
        Ok(checks)
    });
    let count = first_err(results)?;
    Ok(format!(
        "{count} checks: 20 schedules per word, 200 associativity triples, bar and grading laws, n ≤ 8"
    ))
}

fn arc_count_ok(s: &TriangulatedSurface) -> Result<(), String> {
    for c in s.components() {
        let expected = 6 * c.genus + 3 * c.boundaries as i64 + 2 * c.points.len() as i64 - 6;
        ensure(expected == c.arcs.len() as i64, || {
            format!(
                "component with {} points has {} arcs, expected {expected}",
                c.points.len(),
                c.arcs.len()
            )
        })?;
    }
    Ok(())
}

fn cut_is_submatrix(s: &TriangulatedSurface, j: usize) -> Result<(), String> {
    let c = s.cut(j).map_err(|e| e.to_string())?;
    arc_count_ok(&c)?;
    let before = s.b_matrix().principal();
    let after = c.b_matrix().principal();
    let kept: Vec<usize> = s.exchangeable().into_iter().filter(|&i| i != j).collect();
    ensure(c.exchangeable() == kept, || {
        format!("cut at {j}: exchangeable arcs {:?}", c.exchangeable())
    })?;
    let ex = s.exchangeable();
    let pos = |i: usize| ex.iter().position(|&k| k == i).unwrap();
    for (a, &i) in kept.iter().enumerate() {
        for (b, &k) in kept.iter().enumerate() {
            ensure(after.entry(a, b) == before.entry(pos(i), pos(k)), || {
                format!("cut at {j}: πB entry ({i},{k}) changed")
            })?;
        }
    }
    Ok(())
}

fn structural(_: &VerifyOptions) -> Outcome {
    let mut surfaces = Vec::new();
    for n in 3..=9 {
        surfaces.push(TriangulatedSurface::build_disc(n).map_err(|e| e.to_string())?);
    }
    for (p, q) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
        surfaces.push(TriangulatedSurface::build_annulus(p, q).map_err(|e| e.to_string())?);
    }
    let mut checked = 0;
    for s in &surfaces {
        arc_count_ok(s)?;
        for j in s.exchangeable() {
            let f = s.flip(j).map_err(|e| e.to_string())?;
            arc_count_ok(&f)?;
            cut_is_submatrix(s, j)?;
            checked += 2;
        }
    }
    let d3 = TriangulatedSurface::build_disc(3).map_err(|e| e.to_string())?;
    let d4 = TriangulatedSurface::build_disc(4).map_err(|e| e.to_string())?;
    let u = d3
        .disjoint_union(&d4)
        .and_then(|u| u.disjoint_union(&d4))
        .map_err(|e| e.to_string())?;
    arc_count_ok(&u)?;
    for s in [&d3, &d4, &u] {
        ensure(s.b_matrix().principal().is_zero(), || {
            "a disc with 3 or 4 points is not isolated".into()
        })?;
    }
    let d5 = TriangulatedSurface::build_disc(5).map_err(|e| e.to_string())?;
    let a11 = TriangulatedSurface::build_annulus(1, 1).map_err(|e| e.to_string())?;
    for (name, s) in [("pentagon", &d5), ("annulus", &a11)] {
        let pb = s.b_matrix().principal();
        let (i, j) = pb
            .banff_step()
            .ok_or_else(|| format!("{name}: no banff witness"))?;
        ensure(
            pb.entry(i, j) != 0 && (pb.sinks().contains(&i) || pb.sources().contains(&i)),
            || format!("{name}: witness ({i},{j}) is not a sink/source edge"),
        )?;
    }
    Ok(format!(
        "{} surfaces, {checked} flips/cuts; discs 3–4 isolated; banff witnesses found",
        surfaces.len()
    ))
}

fn specialization(opts: &VerifyOptions) -> Outcome {
    let mut count = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for n in 4..=8 {
        for t in cyclic_tuples(n, 4).into_iter().step_by(4) {
            let (a, b, c, d) = (t[0], t[1], t[2], t[3]);
            let lhs = CommutativeElement::resolve(n, vec![ch(a, c), ch(b, d)]);
            let expected = DiscSkeinElement::basis(n, set(&[ch(a, b), ch(c, d)]))
                .add(&DiscSkeinElement::basis(n, set(&[ch(a, d), ch(b, c)])))
                .specialize_q1();
            ensure(lhs == expected, || {
                format!("n={n}: classical Plücker fails at ({a},{b},{c},{d})")
            })?;
            ensure(
                reduce(n, &[ch(a, c), ch(b, d)]).specialize_q1() == expected,
                || format!("n={n}: q=1 image of the Plücker product is wrong"),
            )?;
            count += 1;
        }
        for _ in 0..20 {
            let x = random_element(&mut rng, n);
            let y = random_element(&mut rng, n);
            let xy = product(&x, &y).map_err(|e| e.to_string())?;
            ensure(
                xy.specialize_q1() == x.specialize_q1().product(&y.specialize_q1()),
                || format!("n={n}: specialization not multiplicative on {x}, {y}"),
            )?;
            let sum = x.add(&y).specialize_q1();
            let mut terms = x.specialize_q1().terms;
            for (k, v) in y.specialize_q1().terms {
                *terms.entry(k).or_default() += v;
            }
            terms.retain(|_, v| *v != Default::default());
            ensure(sum.terms == terms, || {
                format!("n={n}: specialization not additive")
            })?;
            count += 2;
        }
    }
    let m = AnnulusModel::with_bound(8).map_err(|e| e.to_string())?;
    let bad = m.classical_failures(5).map_err(|e| e.to_string())?;
    ensure(bad.is_empty(), || {
        format!("annulus relations fail at q=1 for i in {bad:?}")
    })?;
    for i in -5..=5 {
        let (x, y) = (
            m.x(i).map_err(|e| e.to_string())?,
            m.x(i + 1).map_err(|e| e.to_string())?,
        );
        ensure(
            laurent_mul(&x.specialize_q1(), &y.specialize_q1()) == (x * y).specialize_q1(),
            || format!("torus specialization not multiplicative at x_{i} x_(i+1)"),
        )?;
        count += 1;
    }
    Ok(format!(
        "{count} checks; classical Plücker and annulus relations hold at q=1"
    ))
}

/// Used by the bench: the multiplicativity sweep with a given executor and
/// sample size.
pub fn multiplicativity_sweep(exec: Execution, max_n: usize, samples: usize, seed: u64) -> usize {
    let mut jobs = Vec::new();
    for n in 3..=max_n {
        jobs.extend(enumerate_triangulations(n));
    }
    exec.map(&jobs, |t| {
        let n = t.n();
        let form: Arc<SkewForm> = Arc::new(t.lambda());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = Reducer::new(n);
        let mut ok = 0;
        for _ in 0..samples {
            let x = random_element(&mut rng, n);
            let y = random_element(&mut rng, n);
            let xy = r.product(&x, &y).expect("same disc");
            let ex = expand_laurent(&x, t, &mut r, &form).expect("triangulable");
            let ey = expand_laurent(&y, t, &mut r, &form).expect("triangulable");
            if expand_laurent(&xy, t, &mut r, &form).expect("triangulable") == &ex * &ey {
                ok += 1;
            }
        }
        ok
    })
    .into_iter()
    .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples() {
        assert_eq!(cyclic_tuples(4, 4).len(), 4);
        assert_eq!(cyclic_tuples(5, 3).len(), 30);
    }

    #[test]
    fn lookup_by_name_and_number() {
        let o = VerifyOptions::default();
        assert_eq!(run_suite("boundary", &o).unwrap().id, 2);
        assert_eq!(run_suite("1", &o).unwrap().suite, "plucker");
        assert!(run_suite("nope", &o).is_none());
    }
}
