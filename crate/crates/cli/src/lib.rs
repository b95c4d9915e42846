//! The `fatpoints` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails (or a random
//! sample stays degenerate), 2 on bad invocations and unparsable input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fatpoints::blowup::{self, DivisorClass, SearchBounds};
use fatpoints::interp::{self, PointSampler};
use fatpoints::pipeline::{self, ConfigOverrides, OutputFormat, RunConfig};
use fatpoints::quadricmap::{self, QuadricSystem};
use fatpoints::{Error, FatPointSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fatpoints", version, about = "Dimension and speciality of fat-point linear systems")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Prime modulus for rank computations (default 2^61 - 1)
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Random point configurations per rank computation
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Seed for point sampling (default: config file, FATPOINTS_SEED, entropy)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// `key = value` file with prime, trials, seed, output
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Virtual dimension of a system such as `L3(9,6,4^8)`
    Vdim { system: String },
    /// Effective dimension at random points
    Edim { system: String },
    /// Whether the effective dimension exceeds the expected one
    Special { system: String },
    /// Restriction of a `P^3` system to the quadric through its points
    Restrict { system: String },
    /// Planar model of a quadric system `(a,b; m0; t1,...)`
    Toplanar { system: String },
    /// Intersection numbers of classes `[d; m1,...]`
    Chow {
        #[command(subcommand)]
        op: ChowOp,
    },
    /// Riemann-Roch Euler characteristic and virtual dimension on the blown-up `P^3`
    Rr { class: String },
    /// Speciality defect `v(F) + F.M.(L-K)/2` for `L = F + M` on the blown-up `P^3`
    Defect { fixed: String, moving: String },
    /// Search for planar (-1)-classes in a box
    Negcurves {
        /// `d_max,m12_max,tail_max`: bounds on the degree, first two multiplicities, remaining ones
        #[arg(long, value_name = "D,M12,TAIL")]
        bounds: String,
        /// Let the remaining multiplicities vary independently instead of all equal
        #[arg(long)]
        full_tail: bool,
        /// Planar class to pair each curve with
        #[arg(long)]
        against: String,
        /// Flag curves whose pairing is at most this
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        threshold: i64,
    },
    /// Arithmetic genus of a planar class
    Genus { class: String },
    /// Cremona reduction of a planar class to standard form
    CremonaReduce { class: String },
    /// Reproduce the L3(9,6,4^8) counterexample and verify every step
    Counterexample,
}

#[derive(Subcommand, Debug)]
enum ChowOp {
    /// `A.B` on the blown-up plane
    Pair { a: String, b: String },
    /// `A.B.C` on the blown-up `P^3`
    Triple { a: String, b: String, c: String },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate(_) | Error::SamplerExhausted { .. } | Error::Invariant(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<fatpoints::ParseError> for Failure {
    fn from(e: fatpoints::ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Output of one command in both renderings.
struct Rendered {
    text: String,
    json: Value,
    ok: bool,
}

impl Rendered {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Self { text: text.into(), json, ok: true }
    }
}

fn system(s: &str) -> Result<FatPointSystem, Failure> {
    Ok(s.parse()?)
}

fn class(n: usize, s: &str) -> Result<DivisorClass, Failure> {
    Ok(DivisorClass::parse(n, s)?)
}

fn parse_bounds(s: &str) -> Result<(i64, i64, i64), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Failure::Usage(format!("--bounds expects three integers `d,m12,tail`, got `{s}`"));
    let [d, m, t] = parts[..] else { return Err(bad()) };
    let num = |x: &str| x.parse::<i64>().map_err(|_| bad());
    Ok((num(d)?, num(m)?, num(t)?))
}

fn execute(cli: &Cli) -> Result<Rendered, Failure> {
    let g = &cli.global;
    let overrides = ConfigOverrides {
        prime: g.prime,
        trials: g.trials,
        seed: g.seed,
        output: g.json.then_some(OutputFormat::Json),
    };
    let cfg = || RunConfig::load(&overrides, g.config.as_deref());
    Ok(match &cli.command {
        Command::Vdim { system: s } => {
            let sys = system(s)?;
            let sum = sys.summary();
            Rendered::new(sum.vdim.to_string(), json!({"system": sys, "vdim": sum.vdim, "edim": sum.edim}))
        }
        Command::Edim { system: s } | Command::Special { system: s } => {
            let sys = system(s)?;
            let r = interp::effective_dim(&sys, &cfg()?.sample_options(PointSampler::General))?;
            let text = if matches!(cli.command, Command::Edim { .. }) {
                r.edim_actual.to_string()
            } else {
                format!("special: {} (vdim {}, edim {})", r.special, r.vdim, r.edim_actual)
            };
            Rendered::new(text, serde_json::to_value(&r).expect("serializable"))
        }
        Command::Restrict { system: s } => {
            let sys = system(s)?;
            let q = quadricmap::restrict_to_quadric(&sys)?;
            Rendered::new(q.to_string(), json!({"system": sys, "restriction": q}))
        }
        Command::Toplanar { system: s } => {
            let q: QuadricSystem = s.parse()?;
            let img = quadricmap::to_planar(&q);
            let text = match img.system() {
                Some(p) => p.to_string(),
                None => format!("{} (negative coefficients: class only)", img.class),
            };
            let planar = img.system().map(|p| p.to_string());
            Rendered::new(text, json!({"quadric": q, "class": img.class.to_string(), "system": planar, "negative": img.negative}))
        }
        Command::Chow { op: ChowOp::Pair { a, b } } => {
            let v = blowup::intersect2(&class(2, a)?, &class(2, b)?)?;
            Rendered::new(v.to_string(), json!({"value": v}))
        }
        Command::Chow { op: ChowOp::Triple { a, b, c } } => {
            let v = blowup::intersect3(&class(3, a)?, &class(3, b)?, &class(3, c)?)?;
            Rendered::new(v.to_string(), json!({"value": v}))
        }
        Command::Rr { class: c } => {
            let d = class(3, c)?;
            let chi = blowup::chi_rr(&d)?;
            Rendered::new(format!("chi {chi}, vdim {}", chi - 1), json!({"class": d.to_string(), "chi": chi, "vdim": chi - 1}))
        }
        Command::Defect { fixed, moving } => {
            let dec = blowup::decompose(&class(3, fixed)?, &class(3, moving)?)?;
            let text = format!(
                "defect {} (v(F) {}, cross {}, v(M) {}, v(F+M) {})",
                dec.defect, dec.v_fixed, dec.cross, dec.v_moving, dec.v_whole
            );
            Rendered::new(text, serde_json::to_value(&dec).expect("serializable"))
        }
        Command::Negcurves { bounds, full_tail, against, threshold } => {
            let (d, m12, tail) = parse_bounds(bounds)?;
            let against = class(2, against)?;
            let b = SearchBounds::box_bounds(against.r(), d, m12, tail, !full_tail);
            let found = blowup::enumerate_neg_curves(&b, &against, *threshold)?;
            let mut text = String::new();
            for c in &found {
                let flag = if c.flagged { "  flagged" } else { "" };
                text.push_str(&format!("{}  pairing {}{flag}\n", c.class, c.pairing));
            }
            text.push_str(&format!("{} class(es), {} flagged", found.len(), found.iter().filter(|c| c.flagged).count()));
            let list: Vec<Value> =
                found.iter().map(|c| json!({"class": c.class.to_string(), "pairing": c.pairing, "flagged": c.flagged})).collect();
            Rendered::new(text, json!({"against": against.to_string(), "threshold": threshold, "curves": list}))
        }
        Command::Genus { class: c } => {
            let d = class(2, c)?;
            let g = blowup::genus_planar(&d)?;
            Rendered::new(g.to_string(), json!({"class": d.to_string(), "genus": g}))
        }
        Command::CremonaReduce { class: c } => {
            let red = blowup::cremona_reduce(&class(2, c)?)?;
            let mut text = format!("{} after {} step(s)", red.reduced, red.steps);
            if red.empty {
                text.push_str(" (negative degree: empty)");
            }
            for s in &red.stripped {
                text.push_str(&format!("\nstripped {}E{} at step {}", s.multiplicity, s.point, s.step));
            }
            Rendered::new(text, serde_json::to_value(&red).expect("serializable"))
        }
        Command::Counterexample => {
            let report = pipeline::run_counterexample(&cfg()?)?;
            let text = report.to_text();
            let text = text.trim_end().to_string();
            Rendered { text, json: serde_json::to_value(&report).expect("serializable"), ok: report.passed() }
        }
    })
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    // the config file may ask for JSON output too
    let json = cli.global.json
        || cli.global.config.as_deref().is_some_and(|p| {
            std::fs::read_to_string(p)
                .ok()
                .and_then(|t| ConfigOverrides::parse_file(&t).ok())
                .is_some_and(|c| c.output == Some(OutputFormat::Json))
        });
    match execute(&cli) {
        Ok(r) => {
            let _ = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("serializable"))
            } else {
                writeln!(out, "{}", r.text)
            };
            if r.ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Verification(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
    }
}
