use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use skein_core::annulus::AnnulusModel;
use skein_core::disc::{
    self, expand_laurent, mu, mu_delta, word_from_pairs, Chord, DiscSkeinElement, ElementJson,
    Reducer, Triangulation,
};
use skein_core::qseed::{
    enumerate_seeds, upper_membership, EnumerationLimits, QuantumSeed, SeedJson,
};
use skein_core::qtorus::TorusJson;
use skein_core::surface::{SurfaceJson, TriangulatedSurface};
use skein_core::verify::{self, VerifyOptions};
use skein_core::{Execution, TorusElement};

/// Quantum skein algebras of marked surfaces and their quantum cluster
/// structure.
///
/// JSON arguments may be given inline, as `@path`, or as `-` for stdin.
/// Seeds and surfaces also accept the builtins `disc:N` and `annulus` /
/// `annulus:P,Q`.
#[derive(Parser)]
#[command(name = "qskein", version)]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit human-readable text.
    #[arg(long, global = true)]
    text: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Skein algebra of the disc.
    #[command(subcommand)]
    Skein(SkeinCmd),
    /// Quantum seeds.
    #[command(subcommand)]
    Seed(SeedCmd),
    /// Triangulated surfaces.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// The annulus with one marked point per boundary.
    #[command(subcommand)]
    Annulus(AnnulusCmd),
    /// Run verification suites: `all`, a suite name, or its number.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        /// Run without the thread pool.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct WordArgs {
    /// Number of marked points.
    #[arg(long)]
    n: usize,
    /// Chord word `[[a,b],...]`, earlier chords over later ones.
    #[arg(long)]
    word: String,
}

#[derive(Subcommand)]
enum SkeinCmd {
    /// Reduce a word to the basis of simple multicurves.
    Reduce(WordArgs),
    /// Product of two elements, or of the chords of a word.
    Product {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, conflicts_with_all = ["left", "right"])]
        word: Option<String>,
        /// Element JSON `{"n":..,"terms":[..]}`.
        #[arg(long, requires = "right")]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
    },
    /// Laurent expansion in the torus of a triangulation.
    Expand {
        #[command(flatten)]
        word: WordArgs,
        /// Diagonals `[[a,b],...]`; defaults to the fan at 1.
        #[arg(long)]
        triangulation: Option<String>,
    },
    /// Crossing number of two words, or `μ_Δ` of a word.
    Mu {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, conflicts_with = "triangulation")]
        other: Option<String>,
        #[arg(long)]
        triangulation: Option<String>,
    },
}

#[derive(Args)]
struct SeedInput {
    /// Seed JSON or a builtin (`disc:N`, `annulus`).
    #[arg(long, default_value = "disc:5")]
    input: String,
}

#[derive(Subcommand)]
enum SeedCmd {
    /// Mutate at the given indices in order.
    Mutate {
        #[command(flatten)]
        input: SeedInput,
        #[arg(long, required = true, num_args = 1..)]
        at: Vec<usize>,
    },
    /// Check compatibility and quasi-commutation of the frame.
    Check {
        #[command(flatten)]
        input: SeedInput,
    },
    /// Demote exchangeable indices to frozen.
    Freeze {
        #[command(flatten)]
        input: SeedInput,
        #[arg(long, required = true, num_args = 1..)]
        indices: Vec<usize>,
    },
    /// Breadth-first enumeration of the mutation class.
    Enumerate {
        #[command(flatten)]
        input: SeedInput,
        #[arg(long, default_value_t = 10_000)]
        max_seeds: usize,
        #[arg(long, default_value_t = 64)]
        max_depth: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Test membership of a torus element in the upper cluster algebra.
    Member {
        #[command(flatten)]
        input: SeedInput,
        /// Torus element JSON `{"rank":..,"lambda":..,"terms":[..]}`.
        #[arg(long)]
        element: String,
    },
}

#[derive(Args)]
struct SurfaceInput {
    /// Surface JSON or a builtin (`disc:N`, `annulus:P,Q`).
    #[arg(long, default_value = "disc:5")]
    input: String,
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Build a standard triangulated surface: `disc:N` or `annulus:P,Q`.
    Build { name: String },
    Flip {
        #[command(flatten)]
        input: SurfaceInput,
        #[arg(long)]
        arc: usize,
    },
    Cut {
        #[command(flatten)]
        input: SurfaceInput,
        #[arg(long)]
        arc: usize,
    },
    /// `Λ`, `Q` and `B` of a triangulation.
    Matrices {
        #[command(flatten)]
        input: SurfaceInput,
    },
}

#[derive(Subcommand)]
enum AnnulusCmd {
    /// Check the relations among `x_i`, `a`, `b` and the loop for `|i| ≤ range`.
    Verify {
        #[arg(long, default_value_t = 5)]
        range: i64,
    },
}

/// Anything here means exit 2: the input was wrong.
type InputError = Box<dyn std::error::Error>;

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            ok: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.text {
                out.text.trim_end().to_string()
            } else {
                serde_json::to_string_pretty(&out.json).expect("values serialize")
            };
            // a closed pipe downstream is not our error
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, InputError> {
    match &cli.cmd {
        Cmd::Skein(c) => skein(c),
        Cmd::Seed(c) => seed(c),
        Cmd::Surface(c) => surface(c),
        Cmd::Annulus(AnnulusCmd::Verify { range }) => annulus(*range),
        Cmd::Verify { suite, sequential } => {
            let exec = if *sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            run_verify(
                suite,
                VerifyOptions {
                    seed: cli.seed,
                    exec,
                },
            )
        }
    }
}

/// Inline text, `@path`, or `-` for stdin.
fn read_arg(arg: &str) -> Result<String, InputError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| InputError::from(format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse<T: serde::de::DeserializeOwned>(what: &str, arg: &str) -> Result<T, InputError> {
    let text = read_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| InputError::from(format!("invalid {what}: {e}")))
}

fn parse_word(n: usize, arg: &str) -> Result<Vec<Chord>, InputError> {
    let pairs: Vec<[usize; 2]> = parse("chord word", arg)?;
    Ok(word_from_pairs(n, &pairs)?)
}

fn parse_element(arg: &str) -> Result<DiscSkeinElement, InputError> {
    let j: ElementJson = parse("skein element", arg)?;
    Ok(DiscSkeinElement::from_json(&j)?)
}

fn element_json(x: &DiscSkeinElement) -> Value {
    serde_json::to_value(x.to_json()).expect("values serialize")
}

fn torus_json(x: &TorusElement) -> Value {
    serde_json::to_value(x.to_json()).expect("values serialize")
}

fn triangulation(n: usize, arg: Option<&str>) -> Result<Triangulation, InputError> {
    let diagonals = match arg {
        Some(a) => parse_word(n, a)?,
        None => (3..n)
            .map(|k| Chord::new(1, k, n))
            .collect::<Result<_, _>>()?,
    };
    Ok(Triangulation::new(n, &diagonals)?)
}

fn skein(c: &SkeinCmd) -> Result<Output, InputError> {
    match c {
        SkeinCmd::Reduce(w) => {
            let word = parse_word(w.n, &w.word)?;
            let x = disc::reduce(w.n, &word);
            Ok(Output::ok(element_json(&x), x.to_string()))
        }
        SkeinCmd::Product {
            n,
            word,
            left,
            right,
        } => {
            let x = match (word, left, right) {
                (Some(w), _, _) => {
                    let n = n.ok_or_else(|| InputError::from("--word needs --n"))?;
                    disc::reduce(n, &parse_word(n, w)?)
                }
                (None, Some(l), Some(r)) => disc::product(&parse_element(l)?, &parse_element(r)?)?,
                _ => return Err(InputError::from("give --word or both --left and --right")),
            };
            Ok(Output::ok(element_json(&x), x.to_string()))
        }
        SkeinCmd::Expand {
            word,
            triangulation: tri,
        } => {
            let t = triangulation(word.n, tri.as_deref())?;
            let x = disc::reduce(word.n, &parse_word(word.n, &word.word)?);
            let form = Arc::new(t.lambda());
            let e = expand_laurent(&x, &t, &mut Reducer::new(word.n), &form)?;
            let chords: Vec<[usize; 2]> = t.chords().iter().map(|c| [c.a, c.b]).collect();
            let mu = mu_delta(&x, &t).0;
            Ok(Output::ok(
                json!({ "chords": chords, "denominator": mu, "expansion": torus_json(&e) }),
                format!("chords {chords:?}\ndenominator {mu:?}\n{e}"),
            ))
        }
        SkeinCmd::Mu {
            word,
            other,
            triangulation: tri,
        } => {
            let x = disc::reduce(word.n, &parse_word(word.n, &word.word)?);
            match other {
                Some(o) => {
                    let y = disc::reduce(word.n, &parse_word(word.n, o)?);
                    let m = mu(&x, &y);
                    Ok(Output::ok(json!({ "mu": m }), m.to_string()))
                }
                None => {
                    let t = triangulation(word.n, tri.as_deref())?;
                    let m = mu_delta(&x, &t).0;
                    Ok(Output::ok(json!({ "mu": m }), format!("{m:?}")))
                }
            }
        }
    }
}

fn builtin_surface(name: &str) -> Result<Option<TriangulatedSurface>, InputError> {
    if let Some(n) = name.strip_prefix("disc:") {
        let n: usize = n
            .parse()
            .map_err(|_| InputError::from(format!("bad disc size in {name:?}")))?;
        return Ok(Some(TriangulatedSurface::build_disc(n)?));
    }
    if name == "annulus" {
        return Ok(Some(TriangulatedSurface::build_annulus(1, 1)?));
    }
    if let Some(pq) = name.strip_prefix("annulus:") {
        let bad = || InputError::from(format!("expected annulus:P,Q, got {name:?}"));
        let (p, q) = pq.split_once(',').ok_or_else(bad)?;
        let (p, q) = (
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        );
        return Ok(Some(TriangulatedSurface::build_annulus(p, q)?));
    }
    Ok(None)
}

fn load_surface(arg: &str) -> Result<TriangulatedSurface, InputError> {
    if let Some(s) = builtin_surface(arg)? {
        return Ok(s);
    }
    let j: SurfaceJson = parse("surface", arg)?;
    Ok(TriangulatedSurface::from_json(&j)?)
}

fn load_seed(arg: &str) -> Result<QuantumSeed, InputError> {
    if let Some(s) = builtin_surface(arg)? {
        return Ok(s.to_seed()?);
    }
    let j: SeedJson = parse("seed", arg)?;
    Ok(QuantumSeed::from_json(&j)?)
}

fn seed_json(s: &QuantumSeed) -> Value {
    serde_json::to_value(s.to_json()).expect("values serialize")
}

fn seed_text(s: &QuantumSeed) -> String {
    let mut out = format!(
        "ex {:?}\nB {:?}\nlambda {:?}\n",
        s.ex(),
        s.exchange_matrix().matrix(),
        s.lambda().rows()
    );
    for (i, x) in s.frame().iter().enumerate() {
        out.push_str(&format!("X{i} = {x}\n"));
    }
    out
}

fn seed(c: &SeedCmd) -> Result<Output, InputError> {
    match c {
        SeedCmd::Mutate { input, at } => {
            let mut s = load_seed(&input.input)?;
            for &i in at {
                s = s.mutate(i)?;
            }
            Ok(Output::ok(seed_json(&s), seed_text(&s)))
        }
        SeedCmd::Check { input } => {
            let s = load_seed(&input.input)?;
            let compat = s.check_compatibility();
            let quasi = s.check_quasi_commutation();
            let ok = compat.is_ok() && quasi.is_ok();
            let d = compat
                .as_ref()
                .map(|d| json!(d))
                .unwrap_or_else(|e| json!(e.to_string()));
            let q = quasi
                .as_ref()
                .map(|_| json!(true))
                .unwrap_or_else(|e| json!(e.to_string()));
            Ok(Output {
                text: format!("compatibility: {d}\nquasi-commutation: {q}"),
                json: json!({ "ok": ok, "compatibility": d, "quasi_commutation": q }),
                ok,
            })
        }
        SeedCmd::Freeze { input, indices } => {
            let s = load_seed(&input.input)?
                .freeze(&indices.iter().copied().collect::<BTreeSet<_>>())?;
            Ok(Output::ok(seed_json(&s), seed_text(&s)))
        }
        SeedCmd::Enumerate {
            input,
            max_seeds,
            max_depth,
            sequential,
        } => {
            let s = load_seed(&input.input)?;
            let exec = if *sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let limits = EnumerationLimits {
                max_seeds: *max_seeds,
                max_depth: *max_depth,
            };
            let r = enumerate_seeds(&s, limits, exec)?;
            let vars = r.cluster_variables();
            let text = format!(
                "{} seeds, {} cluster variables, depth {}{}\n{}",
                r.seeds.len(),
                vars.len(),
                r.depth,
                if r.truncated { " (truncated)" } else { "" },
                vars.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            Ok(Output::ok(
                json!({
                    "seeds": r.seeds.len(),
                    "depth": r.depth,
                    "truncated": r.truncated,
                    "cluster_variables": vars.iter().map(torus_json).collect::<Vec<_>>(),
                }),
                text,
            ))
        }
        SeedCmd::Member { input, element } => {
            let s = load_seed(&input.input)?;
            let j: TorusJson = parse("torus element", element)?;
            let x = TorusElement::from_json_with_form(&j, s.lambda().clone())?;
            let member = upper_membership(&x, &s)?;
            Ok(Output {
                json: json!({ "member": member }),
                text: if member { "member" } else { "not a member" }.to_string(),
                ok: member,
            })
        }
    }
}

fn surface_json(s: &TriangulatedSurface) -> Value {
    serde_json::to_value(s.to_json()).expect("values serialize")
}

fn surface(c: &SurfaceCmd) -> Result<Output, InputError> {
    let s = match c {
        SurfaceCmd::Build { name } => builtin_surface(name)?.ok_or_else(|| {
            InputError::from(format!(
                "unknown surface {name:?}; try disc:N or annulus:P,Q"
            ))
        })?,
        SurfaceCmd::Flip { input, arc } => load_surface(&input.input)?.flip(*arc)?,
        SurfaceCmd::Cut { input, arc } => load_surface(&input.input)?.cut(*arc)?,
        SurfaceCmd::Matrices { input } => {
            let s = load_surface(&input.input)?;
            let lambda = s.lambda_matrix().rows().to_vec();
            let q = s.q_matrix().rows().to_vec();
            let b = s.b_matrix();
            let text = format!(
                "arcs {:?}\nexchangeable {:?}\nlambda {lambda:?}\nQ {q:?}\nB {:?}",
                s.labels(),
                s.exchangeable(),
                b.matrix()
            );
            return Ok(Output::ok(
                json!({
                    "labels": s.labels(),
                    "ex": s.exchangeable(),
                    "lambda": lambda,
                    "Q": q,
                    "B": b.matrix(),
                }),
                text,
            ));
        }
    };
    Ok(Output::ok(surface_json(&s), s.to_string()))
}

fn annulus(range: i64) -> Result<Output, InputError> {
    if range < 0 {
        return Err(InputError::from("--range must be non-negative"));
    }
    let m = AnnulusModel::with_bound((range + 3).max(AnnulusModel::DEFAULT_BOUND))?;
    let r = m.verify_identities(range)?;
    let mut text = String::new();
    for e in &r.entries {
        let mark = if e.as_expected() { "ok  " } else { "FAIL" };
        let idx = e.index.map(|i| format!(" i={i}")).unwrap_or_default();
        let held = if e.holds { "holds" } else { "does not hold" };
        text.push_str(&format!("{mark} {}{idx}: {held}\n", e.family));
    }
    Ok(Output {
        json: serde_json::to_value(&r).expect("values serialize"),
        text,
        ok: r.passed(),
    })
}

fn run_verify(suite: &str, opts: VerifyOptions) -> Result<Output, InputError> {
    let reports = if suite == "all" {
        verify::run_all(&opts)
    } else {
        vec![verify::run_suite(suite, &opts).ok_or_else(|| {
            InputError::from(format!(
                "unknown suite {suite:?}; known: all, {}",
                verify::suite_names().join(", ")
            ))
        })?]
    };
    let text = reports
        .iter()
        .map(|r| {
            format!(
                "[{}] {:>2} {:<17} {:>9.1} ms  {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.id,
                r.suite,
                r.elapsed_ms,
                r.detail
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output {
        ok: reports.iter().all(|r| r.passed),
        json: serde_json::to_value(&reports).expect("values serialize"),
        text,
    })
}
