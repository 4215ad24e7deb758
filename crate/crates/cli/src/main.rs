//! `mwglue`: command-line front end.
//!
//! Exit codes: 0 verified, 1 falsified, 2 unknown or bound exhausted,
//! 3 invalid input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mwglue::arith::primes::first_odd_primes;
use mwglue::descent::{iota, membership, IotaImage, MembershipVerdict, NonSquareEvidence};
use mwglue::ellcurve::{search_points, torsion_subgroup, TorsionStructure};
use mwglue::etale::{CubicEtaleAlgebra, SquareEffort, DEFAULT_SQUARE_PRIMES};
use mwglue::family::{self, FamilyParams, DEFAULT_BOUND, DEFAULT_COUNT};
use mwglue::glue::{validate_identification, verify_cover_map, verify_rescaling, GenusTwoCurve, GluingData};
use mwglue::json::format_rational;
use mwglue::{fixtures, Curve, Point, RatPoly, Rational};

const EXIT_OK: u8 = 0;
const EXIT_FALSIFIED: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mwglue", version, about = "Exact 2-descent for glued genus-2 Jacobians")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of odd primes tried when certifying non-squares.
    #[arg(long = "sq-primes", default_value_t = DEFAULT_SQUARE_PRIMES, global = true,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    sq_primes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the cyclic counterexample end to end.
    #[command(name = "verify-section3")]
    VerifyCyclic {
        /// Gluing data {"E", "F", "h"} replacing the built-in curves.
        #[arg(long)]
        gluing: Option<String>,
    },
    /// Generate and verify members of the E_p family.
    Family {
        #[arg(long, default_value_t = 3)]
        l1: u64,
        #[arg(long, default_value_t = 5)]
        l2: u64,
        /// Partner curve F (default y^2 = x^3 - x).
        #[arg(long)]
        f: Option<String>,
        /// JSON list of points that with F's torsion generate F(Q).
        #[arg(long)]
        generators: Option<String>,
        #[arg(long, default_value_t = DEFAULT_COUNT, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        count: usize,
        /// Largest prime tried.
        #[arg(long, default_value_t = DEFAULT_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// Decide whether (P, Q) is in the image of J(Q).
    Membership {
        /// Gluing data (default: the cyclic example).
        #[arg(long)]
        gluing: Option<String>,
        #[arg(long = "p")]
        p: String,
        #[arg(long = "q", default_value = "\"O\"")]
        q: String,
    },
    /// Print iota(P).
    Iota {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        point: String,
    },
    /// Print the j-invariant.
    Jinv {
        #[arg(long)]
        curve: String,
    },
    /// Print the rational torsion subgroup.
    Torsion {
        #[arg(long)]
        curve: String,
    },
    /// List rational points of naive height at most N.
    Points {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        height: u64,
    },
}

struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Invalid>;

struct Output {
    code: u8,
    human: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_OK });
        }
    };
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let text = match cli.global.format {
        Format::Human => out.human,
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INVALID);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(out.code)
}

fn run(cli: &Cli) -> CliResult<Output> {
    let effort = SquareEffort::with_primes(cli.global.sq_primes);
    match &cli.command {
        Command::VerifyCyclic { gluing } => verify_cyclic(gluing.as_deref(), &effort),
        Command::Family {
            l1,
            l2,
            f,
            generators,
            count,
            bound,
        } => {
            let f = match f {
                Some(s) => load_curve(s)?,
                None => fixtures::family_partner(),
            };
            let gens: Vec<Point> = match generators {
                Some(s) => parse_json(s)?,
                None => vec![],
            };
            if let Some(q) = gens.iter().find(|q| !f.contains(q)) {
                return Err(Invalid(format!("generator {} is not on F", show_point(q))));
            }
            let params = FamilyParams::new(*l1, *l2, f, gens, *bound, *count)?;
            run_family(&params, &effort)
        }
        Command::Membership { gluing, p, q } => {
            let g = match gluing {
                Some(s) => parse_json::<GluingData>(s)?,
                None => fixtures::cyclic_gluing(),
            };
            let (p, q): (Point, Point) = (parse_json(p)?, parse_json(q)?);
            if !g.e.contains(&p) {
                return Err(Invalid("P is not on E".into()));
            }
            if !g.f.contains(&q) {
                return Err(Invalid("Q is not on F".into()));
            }
            let verdict = membership(&g, &p, &q, &effort)?;
            let code = match verdict {
                MembershipVerdict::Unknown { .. } => EXIT_UNKNOWN,
                _ => EXIT_OK,
            };
            Ok(Output {
                code,
                human: format!("{}\n", show_verdict(&verdict)),
                json: serde_json::to_value(&verdict)?,
            })
        }
        Command::Iota { curve, point } => {
            let e = load_curve(curve)?;
            let p: Point = parse_json(point)?;
            if !e.contains(&p) {
                return Err(Invalid("point is not on the curve".into()));
            }
            let l = match curve.strip_prefix("ep:").and_then(|p| p.parse::<u64>().ok()) {
                Some(p) => CubicEtaleAlgebra::split(family::e_p_roots(p))?,
                None => CubicEtaleAlgebra::new(&e.cubic())?,
            };
            let img = iota(&e, &l, &p)?;
            let human = match &img {
                IotaImage::Split(t) => {
                    let reps: Vec<String> = t.components().iter().map(|c| c.representative().to_string()).collect();
                    format!("({})\n", reps.join(", "))
                }
                IotaImage::General(c) => format!("class of {:?} in Q[x]/({})\n", c.representative, l.f()),
            };
            Ok(Output {
                code: EXIT_OK,
                human,
                json: json!({
                    "roots": l.components().iter().filter(|&c| c.degree() == Some(1)).map(|c| format_rational(&-c.coeff(0))).collect::<Vec<_>>(),
                    "iota": serde_json::to_value(&img)?,
                }),
            })
        }
        Command::Jinv { curve } => {
            let j = load_curve(curve)?.j_invariant();
            Ok(Output {
                code: EXIT_OK,
                human: format!("{j}\n"),
                json: json!({ "j": format_rational(&j) }),
            })
        }
        Command::Torsion { curve } => {
            let t = torsion_subgroup(&load_curve(curve)?)?;
            let mut human = format!("{} (order {})\n", t.structure, t.order());
            for pt in &t.points {
                let _ = writeln!(human, "  {}", show_point(pt));
            }
            Ok(Output {
                code: EXIT_OK,
                human,
                json: json!({
                    "structure": t.structure.to_string(),
                    "order": t.order(),
                    "generators": serde_json::to_value(&t.generators)?,
                    "points": serde_json::to_value(&t.points)?,
                }),
            })
        }
        Command::Points { curve, height } => {
            let pts = search_points(&load_curve(curve)?, *height);
            let human: String = pts.iter().map(|p| format!("{}\n", show_point(p))).collect();
            Ok(Output {
                code: EXIT_OK,
                human,
                json: serde_json::to_value(&pts)?,
            })
        }
    }
}

/// Reads `arg` as a file if such a path exists, otherwise as inline JSON.
fn read_arg(arg: &str) -> CliResult<String> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Invalid(format!("cannot read {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str) -> CliResult<T> {
    Ok(mwglue::json::from_str(&read_arg(arg)?)?)
}

/// A curve as JSON, a file, or one of the names `cyclic-e`, `cyclic-f`,
/// `partner`, `partner-alt`, `ep:<p>`. For `ep:<p>` the split algebra lists
/// the roots as `0, -p - 1, p - 1`; otherwise rational roots ascend.
fn load_curve(arg: &str) -> CliResult<Curve> {
    match arg {
        "cyclic-e" => return Ok(fixtures::cyclic_e()),
        "cyclic-f" => return Ok(fixtures::cyclic_f()),
        "partner" => return Ok(fixtures::family_partner()),
        "partner-alt" => return Ok(fixtures::family_partner_alt()),
        _ => {}
    }
    if let Some(p) = arg.strip_prefix("ep:") {
        let p: u64 = p.parse().map_err(|_| Invalid(format!("bad prime in {arg}")))?;
        return Ok(family::e_p(p)?);
    }
    parse_json(arg)
}

fn show_point(p: &Point) -> String {
    match p {
        Point::Infinity => "O".into(),
        Point::Affine { x, y } => format!("({x}, {y})"),
    }
}

fn show_verdict(v: &MembershipVerdict) -> String {
    match v {
        MembershipVerdict::InImage => "in_image".into(),
        MembershipVerdict::NotInImage { certificate } => format!("not_in_image ({})", show_evidence(certificate)),
        MembershipVerdict::Unknown { square_primes } => {
            format!("unknown (no certificate among the first {square_primes} odd primes)")
        }
    }
}

fn show_evidence(ev: &NonSquareEvidence) -> String {
    match ev {
        NonSquareEvidence::NonResidue { certificate: c, .. } => format!(
            "non-residue mod {}: component {} at root {} has value {}",
            c.p, c.component, c.root, c.value
        ),
        NonSquareEvidence::Rational {
            component,
            value,
            reason,
        } => format!("component {component} has value {value}, {reason:?}"),
    }
}

struct Report {
    checks: Vec<(String, bool, String)>,
}

impl Report {
    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push((name.into(), ok, detail.into()));
    }

    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    fn human(&self) -> String {
        self.checks
            .iter()
            .map(|(n, ok, d)| format!("[{}] {n}: {d}\n", if *ok { "pass" } else { "FAIL" }))
            .collect()
    }

    fn json(&self) -> Value {
        Value::Array(
            self.checks
                .iter()
                .map(|(n, ok, d)| json!({"name": n, "passed": ok, "detail": d}))
                .collect(),
        )
    }
}

/// Raw gluing input, checked step by step rather than rejected up front.
#[derive(serde::Deserialize)]
struct RawGluing {
    #[serde(rename = "E")]
    e: Curve,
    #[serde(rename = "F")]
    f: Curve,
    h: Vec<String>,
}

fn verify_cyclic(gluing: Option<&str>, effort: &SquareEffort) -> CliResult<Output> {
    let start = Instant::now();
    let (e, f, h) = match gluing {
        None => (fixtures::cyclic_e(), fixtures::cyclic_f(), fixtures::cyclic_h()),
        Some(s) => {
            let raw: RawGluing = parse_json(s)?;
            let coeffs = raw
                .h
                .iter()
                .map(|c| mwglue::json::parse_rational(c))
                .collect::<mwglue::Result<Vec<_>>>()?;
            (raw.e, raw.f, RatPoly::new(coeffs))
        }
    };
    let fx = e.cubic();
    let gx = f.cubic();
    let mut r = Report { checks: vec![] };

    let conj = [RatPoly::from_i64s(&[-4, -4, -1]), RatPoly::from_i64s(&[-1, 3, 1])];
    let conj_ok = conj.iter().all(|a| fx.compose(a).rem(&fx).is_zero());
    r.push(
        "conjugate_roots",
        conj_ok,
        "-r^2 - 4r - 4 and r^2 + 3r - 1 are roots of f",
    );

    let minus_inverse = (&h * &RatPoly::x()).rem(&fx) == RatPoly::constant(-Rational::from_integer(1.into()));
    let beta_ok = minus_inverse && gx.compose(&h).rem(&fx).is_zero();
    r.push("beta_roots", beta_ok, "h(X) = -1/X in Q[x]/(f) and g(h(X)) = 0");

    let violations = validate_identification(&e, &f, &mwglue::glue::TwoTorsionIdentification::new(h.clone())?);
    let g = if violations.is_empty() {
        Some(GluingData::new(e.clone(), f.clone(), h.clone())?)
    } else {
        None
    };
    let vdesc: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    r.push(
        "gluing_valid",
        violations.is_empty(),
        if vdesc.is_empty() {
            "psi is a non-geometric 2-torsion identification".into()
        } else {
            vdesc.join("; ")
        },
    );

    let c = fixtures::cyclic_genus_two();
    let unscaled = GenusTwoCurve::new(
        gx.compose(&RatPoly::from_i64s(&[0, 0, 1]))
            .scale(&Rational::from_integer(7u64.pow(8).into())),
    );
    let resc_ok = unscaled.is_ok_and(|u| verify_rescaling(&u, &c, &fixtures::cyclic_rescaling()));
    r.push(
        "rescaling",
        resc_ok,
        format!("y^2 = 7^8 g(x^2) is y^2 = {} after y -> 7^4 y", c.h6()),
    );
    let (to_e, to_f) = (fixtures::cover_to_e(), fixtures::cover_to_f());
    r.push(
        "cover_to_E",
        verify_cover_map(&c, &e, &to_e.u, &to_e.v),
        "(x, y) -> (-1/x^2, y/x^3) maps C to E",
    );
    r.push(
        "cover_to_F",
        verify_cover_map(&c, &f, &to_f.u, &to_f.v),
        "(x, y) -> (x^2, y) maps C to F",
    );

    let te = torsion_subgroup(&e)?.structure;
    let tf = torsion_subgroup(&f)?.structure;
    let trivial = TorsionStructure::Cyclic(1);
    r.push("torsion_E", te == trivial, format!("E(Q)_tors = {te}"));
    r.push("torsion_F", tf == trivial, format!("F(Q)_tors = {tf}"));

    let p = fixtures::cyclic_point();
    let on_curve = e.contains(&p);
    r.push("point_on_E", on_curve, format!("P = {} on E", show_point(&p)));

    let l = CubicEtaleAlgebra::new(&fx)?;
    let elem = l.c_minus_x(&Rational::from_integer((-2).into()));
    let norm = l.norm(&elem);
    r.push(
        "norm",
        norm == Rational::from_integer(1.into()),
        format!("N(-2 - X) = {norm}"),
    );

    let mut verdict_json = Value::Null;
    let mut unknown = false;
    match (&g, on_curve) {
        (Some(g), true) => {
            let verdict = membership(g, &p, &Point::Infinity, effort)?;
            verdict_json = serde_json::to_value(&verdict)?;
            let (ok, detail) = match &verdict {
                MembershipVerdict::NotInImage { certificate } => {
                    let in_range = match certificate {
                        NonSquareEvidence::NonResidue { certificate: c, .. } => {
                            let first = first_odd_primes(effort.primes);
                            first.contains(&c.p)
                        }
                        NonSquareEvidence::Rational { .. } => true,
                    };
                    (certificate.validate() && in_range, show_verdict(&verdict))
                }
                MembershipVerdict::InImage => (false, "in_image".into()),
                MembershipVerdict::Unknown { .. } => {
                    unknown = true;
                    (true, show_verdict(&verdict))
                }
            };
            r.push("membership", ok, format!("(P, O): {detail}"));
        }
        _ => r.push("membership", false, "skipped: gluing or point invalid"),
    }

    let code = if !r.all_pass() {
        EXIT_FALSIFIED
    } else if unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    };
    let elapsed = start.elapsed().as_secs_f64();
    let mut human = r.human();
    let _ = writeln!(human, "{} in {elapsed:.3} s", status_word(code));
    Ok(Output {
        code,
        human,
        json: json!({
            "status": status_word(code),
            "checks": r.json(),
            "membership": verdict_json,
            "seconds": elapsed,
        }),
    })
}

fn run_family(params: &FamilyParams, effort: &SquareEffort) -> CliResult<Output> {
    let start = Instant::now();
    let run = family::run_family(params, effort)?;
    let code = if run.falsified() {
        EXIT_FALSIFIED
    } else if run.search.bound_exhausted {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    };
    let mut human = String::new();
    let _ = writeln!(
        human,
        "l1 = {}, l2 = {}: p = {} mod {}",
        params.l1,
        params.l2,
        params.residue().0,
        params.residue().1
    );
    for rep in &run.reports {
        let _ = writeln!(human, "p = {} [{}]", rep.p, if rep.passed() { "pass" } else { "FAIL" });
        let names = ["P", "P1", "P2", "P3"];
        for (n, t) in names.iter().zip(&rep.iota_table) {
            let reps: Vec<String> = t.components().iter().map(|c| c.representative().to_string()).collect();
            let _ = writeln!(human, "  iota({n}) = ({})", reps.join(", "));
        }
        for c in &rep.checks {
            let _ = writeln!(
                human,
                "  [{}] {}: {}",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
    }
    let _ = writeln!(
        human,
        "pairwise distinct j-invariants: {}",
        if run.pairwise_distinct { "yes" } else { "NO" }
    );
    if run.search.bound_exhausted {
        let _ = writeln!(
            human,
            "bound exhausted: found {} of {} primes below {}",
            run.search.primes.len(),
            params.count,
            params.bound
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    let _ = writeln!(human, "{} in {elapsed:.3} s", status_word(code));
    let mut json = serde_json::to_value(&run)?;
    json["status"] = json!(status_word(code));
    json["seconds"] = json!(elapsed);
    Ok(Output { code, human, json })
}

fn status_word(code: u8) -> &'static str {
    match code {
        EXIT_OK => "verified",
        EXIT_FALSIFIED => "falsified",
        EXIT_UNKNOWN => "unknown",
        _ => "invalid",
    }
}
