use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use degenerate_series::constituents::{
    enumerate_constituents, label_of, region_for, ConstituentLabel, Region,
};
use degenerate_series::error::Error;
use degenerate_series::howe::{omega_image, possible_embeddings, OmegaShape};
use degenerate_series::ktype::{effective_barriers, neighbors, transition, KType};
use degenerate_series::oracle::{compare, grid, sweep, Lmax, Verdict};
use degenerate_series::parameters::InducedRepParams;
use degenerate_series::rational::Rational;
use degenerate_series::structure::{module_diagram, socle_series, DiagramReport};
use degenerate_series::unitarity::{
    complementary_series, constituent_unitarizable, form_violation,
};

#[derive(Parser)]
#[command(
    name = "degseries",
    version,
    about = "Structure of degenerate principal series of Mp(2n,R)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Point {
    #[arg(long)]
    n: i64,
    #[arg(long, allow_hyphen_values = true)]
    alpha: i64,
    /// Exact rational, e.g. 1/2 or -3.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Rational,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Reducibility case of I^alpha(sigma).
    Classify {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Irreducible constituents and their K-type regions.
    Constituents {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Module diagram.
    Diagram {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Socle series, layer 1 first.
    Socle {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Unitarizability of each constituent, or of the whole module when irreducible.
    Unitary {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Image of the theta lift of the trivial representation of O(p,q).
    Omega {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Signatures (p,q) that embed into I^alpha(sigma).
    Embeddings {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Transition coefficients and constituent of one K-type.
    Ktype {
        #[command(flatten)]
        point: Point,
        /// Weakly decreasing integers, e.g. 1,0,-2.
        #[arg(long, allow_hyphen_values = true)]
        lambda: KType,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare closed forms with the lattice oracle; one JSON line per point.
    Verify {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<Rational>,
        /// Inclusive range of n, e.g. 2..5.
        #[arg(long)]
        n_range: Option<String>,
        /// Comma-separated alpha values.
        #[arg(long)]
        alpha_set: Option<String>,
        /// Inclusive integer range of sigma_tilde, e.g. -6..6.
        #[arg(long, allow_hyphen_values = true)]
        sigma_tilde_range: Option<String>,
        #[arg(long, default_value = "auto")]
        lmax: Lmax,
    },
}

/// An error tied to the flag that caused it.
struct CliError {
    flag: Option<&'static str>,
    message: String,
    /// The reader went away (e.g. `| head`); exit quietly.
    closed: bool,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let flag = match e {
            Error::RankTooSmall(_) => Some("--n"),
            Error::AlphaOutOfRange(_) => Some("--alpha"),
            Error::ParseRational(_) => Some("--sigma"),
            Error::NegativeSignature { .. } => Some("--p/--q"),
            Error::ParseKType(_) | Error::NotDominant(_) | Error::RankMismatch { .. } => {
                Some("--lambda")
            }
            _ => None,
        };
        CliError {
            flag,
            message: e.to_string(),
            closed: false,
        }
    }
}

fn flag_error(flag: &'static str, message: impl Into<String>) -> CliError {
    CliError {
        flag: Some(flag),
        message: message.into(),
        closed: false,
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            flag: None,
            message: format!("cannot write output: {e}"),
            closed: e.kind() == std::io::ErrorKind::BrokenPipe,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn params(p: &Point) -> CliResult<InducedRepParams> {
    Ok(InducedRepParams::new(p.n, p.alpha, p.sigma)?)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn no_dot(format: Format) -> CliResult<()> {
    if format == Format::Dot {
        return Err(flag_error(
            "--format",
            "dot output is only available for `diagram`",
        ));
    }
    Ok(())
}

fn title(p: &InducedRepParams) -> String {
    format!("I^{}({})", p.alpha(), p.sigma())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Regions with at most this many K-types are listed point by point.
const LIST_LIMIT: usize = 8;

fn describe_region(r: &Region, n: usize) -> String {
    match r.points(n) {
        Some(pts) if pts.len() <= LIST_LIMIT => {
            let parts: Vec<String> = pts.iter().map(|l| format!("lambda=({l})")).collect();
            format!("{{{}}}", parts.join(", "))
        }
        _ => r.to_string(),
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    params: InducedRepParams,
    case: String,
    sigma_tilde: Rational,
    rho: Rational,
    n0: i64,
    n1: i64,
    k: Option<i64>,
}

#[derive(Serialize)]
struct ConstituentOut {
    label: ConstituentLabel,
    region: Region,
}

#[derive(Serialize)]
struct UnitaryOut {
    label: Option<ConstituentLabel>,
    unitarizable: bool,
    reason: String,
    witness: Option<String>,
}

#[derive(Serialize)]
struct KtypeMove {
    coordinate: usize,
    direction: String,
    to: KType,
    coefficient: Rational,
}

#[derive(Serialize)]
struct KtypeOut {
    lambda: KType,
    constituent: Option<ConstituentLabel>,
    moves: Vec<KtypeMove>,
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult<u8> {
    match cli.command {
        Command::Classify { point, format } => {
            no_dot(format)?;
            let p = params(&point)?;
            let d = p.derived();
            let case = p.classify();
            match format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json(&ClassifyOut {
                        params: p,
                        case: case.to_string(),
                        sigma_tilde: d.sigma_tilde,
                        rho: d.rho,
                        n0: d.n0,
                        n1: d.n1,
                        k: d.k().ok(),
                    })
                )?,
                _ => writeln!(out, "{case}, sigma_tilde={}", d.sigma_tilde)?,
            }
        }
        Command::Constituents { point, format } => {
            no_dot(format)?;
            let p = params(&point)?;
            let set = enumerate_constituents(&p)?;
            let rows: Vec<ConstituentOut> = set
                .labels
                .iter()
                .map(|l| {
                    Ok(ConstituentOut {
                        label: *l,
                        region: region_for(&p, l)?,
                    })
                })
                .collect::<Result<_, Error>>()?;
            match format {
                Format::Json => writeln!(out, "{}", json(&rows))?,
                _ => {
                    let r = set.range;
                    let bound = r
                        .bound
                        .map(|(name, v)| format!(", {} = {v}", json(&name).trim_matches('"')));
                    writeln!(
                        out,
                        "{}: {} <= {} <= {}{}",
                        title(&p),
                        r.lo,
                        r.statistic,
                        r.hi,
                        bound.unwrap_or_default()
                    )?;
                    for c in &rows {
                        writeln!(out, "{}: {}", c.label, describe_region(&c.region, p.n()))?;
                    }
                }
            }
        }
        Command::Diagram { point, format } => {
            let p = params(&point)?;
            let d = module_diagram(&p)?;
            let s = socle_series(&p)?;
            match format {
                Format::Json => writeln!(out, "{}", json(&DiagramReport::new(&d, &s)))?,
                Format::Dot => write!(
                    out,
                    "{}",
                    d.to_dot(&format!("{} n={}", title(&p), p.n()), &s)
                )?,
                Format::Text => {
                    writeln!(out, "nodes: {}", join(&d.nodes))?;
                    for (u, v) in &d.edges {
                        writeln!(out, "{u} -> {v}")?;
                    }
                }
            }
        }
        Command::Socle { point, format } => {
            no_dot(format)?;
            let p = params(&point)?;
            let s = socle_series(&p)?;
            match format {
                Format::Json => writeln!(out, "{}", json(&s))?,
                _ => {
                    for (i, l) in s.layers.iter().enumerate() {
                        writeln!(out, "Soc^{}: {}", i + 1, join(l))?;
                    }
                }
            }
        }
        Command::Unitary { point, format } => {
            no_dot(format)?;
            let p = params(&point)?;
            let mut rows = Vec::new();
            if p.is_reducible() {
                for l in enumerate_constituents(&p)?.labels {
                    let v = constituent_unitarizable(&p, &l)?;
                    rows.push(UnitaryOut {
                        label: Some(l),
                        unitarizable: v.unitarizable,
                        reason: v.reason,
                        witness: None,
                    });
                }
            } else {
                let ok = complementary_series(&p);
                let witness =
                    (!ok)
                        .then(|| form_violation(&p, 6))
                        .flatten()
                        .map(|(l, j, r)| match r {
                            Some(r) => format!("N(({l}), {j}) = {r}"),
                            None => format!("N(({l}), {j}) degenerates"),
                        });
                rows.push(UnitaryOut {
                    label: None,
                    unitarizable: ok,
                    reason: "complementary-series".to_string(),
                    witness,
                });
            }
            match format {
                Format::Json => writeln!(out, "{}", json(&rows))?,
                _ => {
                    for u in &rows {
                        let who = u.label.map_or_else(|| title(&p), |l| l.to_string());
                        let verdict = if u.unitarizable {
                            "unitarizable"
                        } else {
                            "not unitarizable"
                        };
                        let w = u
                            .witness
                            .as_ref()
                            .map(|w| format!("; witness {w}"))
                            .unwrap_or_default();
                        writeln!(out, "{who}: {verdict} ({}){w}", u.reason)?;
                    }
                }
            }
        }
        Command::Omega { p, q, n, format } => {
            no_dot(format)?;
            let img = omega_image(p, q, n)?;
            match format {
                Format::Json => writeln!(out, "{}", json(&img))?,
                _ => {
                    let t = img.target;
                    let region = region_for(&t, &img.generator())?;
                    let ktypes = describe_region(&region, t.n());
                    let trivial = t.alpha() == 0
                        && region
                            .points(t.n())
                            .is_some_and(|pts| pts == vec![KType::zero(t.n())]);
                    let note = if trivial {
                        " (trivial representation)"
                    } else {
                        ""
                    };
                    match &img.shape {
                        OmegaShape::SingleConstituent { label } => writeln!(
                            out,
                            "target {}; Omega = {label}; K-types: {ktypes}{note}",
                            title(&t)
                        )?,
                        OmegaShape::Generated { generator, members } => {
                            let members = join(members);
                            writeln!(
                                out,
                                "target {}; Omega = <{generator}> = {{{members}}}; generator K-types: {ktypes}{note}",
                                title(&t)
                            )?
                        }
                    }
                }
            }
        }
        Command::Embeddings { point, format } => {
            no_dot(format)?;
            let p = params(&point)?;
            let e = possible_embeddings(&p);
            match format {
                Format::Json => writeln!(out, "{}", json(&e))?,
                _ => {
                    if e.is_empty() {
                        writeln!(out, "none")?;
                    }
                    for s in &e {
                        let img = omega_image(s.p, s.q, p.n() as i64)?;
                        writeln!(out, "{s} -> {}", img.generator())?;
                    }
                }
            }
        }
        Command::Ktype {
            point,
            lambda,
            format,
        } => {
            no_dot(format)?;
            let p = params(&point)?;
            if lambda.rank() != p.n() {
                return Err(Error::RankMismatch {
                    expected: p.n(),
                    got: lambda.rank(),
                }
                .into());
            }
            let mut moves = Vec::new();
            for nb in neighbors(&lambda) {
                moves.push(KtypeMove {
                    coordinate: nb.coordinate,
                    direction: nb.direction.to_string(),
                    coefficient: transition(&p, &lambda, nb.coordinate, nb.direction)?,
                    to: nb.ktype,
                });
            }
            let constituent = if p.is_reducible() {
                Some(label_of(&p, &lambda)?)
            } else {
                None
            };
            let report = KtypeOut {
                lambda,
                constituent,
                moves,
            };
            match format {
                Format::Json => writeln!(out, "{}", json(&report))?,
                _ => {
                    match report.constituent {
                        Some(l) => writeln!(out, "lambda=({}) in {l}", report.lambda)?,
                        None => writeln!(
                            out,
                            "lambda=({}) in {} (irreducible)",
                            report.lambda,
                            title(&p)
                        )?,
                    }
                    for m in &report.moves {
                        let blocked = if m.coefficient.is_zero() {
                            " (blocked)"
                        } else {
                            ""
                        };
                        writeln!(
                            out,
                            "  {} e_{} -> ({}): {}{blocked}",
                            if m.direction == "up" { "+" } else { "-" },
                            m.coordinate,
                            m.to,
                            m.coefficient
                        )?;
                    }
                    let barriers: Vec<String> = effective_barriers(&p)
                        .iter()
                        .map(|b| b.to_string())
                        .collect();
                    writeln!(
                        out,
                        "effective barriers: {}",
                        if barriers.is_empty() {
                            "none".into()
                        } else {
                            barriers.join("; ")
                        }
                    )?;
                }
            }
        }
        Command::Verify {
            n,
            alpha,
            sigma,
            n_range,
            alpha_set,
            sigma_tilde_range,
            lmax,
        } => {
            let verdicts: Vec<Verdict> = match (n, alpha, sigma) {
                (Some(n), Some(a), Some(s)) => {
                    if n_range.is_some() || alpha_set.is_some() || sigma_tilde_range.is_some() {
                        return Err(flag_error(
                            "--n-range",
                            "give either a single point or a grid, not both",
                        ));
                    }
                    vec![compare(&InducedRepParams::new(n, a, s)?, lmax)?]
                }
                (None, None, None) => {
                    let ns = parse_range(n_range.as_deref().unwrap_or("2..5"), "--n-range")?;
                    let alphas = parse_set(alpha_set.as_deref().unwrap_or("0,1,2,3"))?;
                    let sts = parse_range(
                        sigma_tilde_range.as_deref().unwrap_or("-6..6"),
                        "--sigma-tilde-range",
                    )?;
                    let sts: Vec<Rational> = sts.into_iter().map(Rational::integer).collect();
                    let points = grid(ns, &alphas, &sts)?;
                    sweep(&points, lmax)
                        .into_iter()
                        .collect::<Result<_, Error>>()?
                }
                _ => {
                    return Err(flag_error(
                        "--n",
                        "a single point needs all of --n, --alpha and --sigma",
                    ))
                }
            };
            let mut failed = false;
            for v in &verdicts {
                failed |= !v.passed();
                writeln!(out, "{}", serde_json::to_string(v).expect("serializable"))?;
            }
            if failed {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

fn parse_range(s: &str, flag: &'static str) -> CliResult<Vec<i64>> {
    let bad = || flag_error(flag, format!("malformed range {s:?} (expected a..b)"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn parse_set(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| flag_error("--alpha-set", format!("malformed alpha list {s:?}")))
        })
        .collect()
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 success, 1 input error, 2 verification failure.
fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) if e.closed => 0,
        Err(e) => {
            let _ = match e.flag {
                Some(f) => writeln!(err, "error: {f}: {}", e.message),
                None => writeln!(err, "error: {}", e.message),
            };
            1
        }
    }
}

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = execute(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
