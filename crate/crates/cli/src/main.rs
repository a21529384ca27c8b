use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use localp2::corpus::{default_fixtures, run_corpus, Fixtures, OutputFormat, RunConfig, DEFAULT_SEED, DEFAULT_SUM_PAIRS};
use localp2::homalg::{dims_i64, euler_form_p2, euler_form_y, ext_report_p2, ext_report_y, ExtReport};
use localp2::oricalc::{
    dims_assignment, eval_char, ori_char, verify_cocycle, verify_square_root, verify_theorem3, verify_theorem4,
    ProofReport, Symbol,
};
use localp2::rep::{direct_sum, p2_restrict, AnyModule, ModuleFile};
use localp2::scalar::parse_fraction;
use localp2::windows::{certified_window, extend_to, twist, window_membership, TwistDirection};
use localp2::{point_module, pushforward_module, simple_module, Error, QuiverModule, Representation, ScalarMode};

#[derive(Parser)]
#[command(name = "localp2", version, about = "Exact Ext groups, orientation characters and window twists for local P²")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// `rational` or `prime P` with 2^30 < P < 2^62.
    #[arg(long, global = true, num_args = 1..=2, value_names = ["MODE", "P"], default_values_t = [String::from("rational")])]
    mode: Vec<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Inclusive heart range, e.g. `--range -8 8`.
    #[arg(long, global = true, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    range: Option<Vec<i64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Y,
    P2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Up,
    Down,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Theorem3,
    Theorem4,
    SquareRoot,
    Cocycle,
}

#[derive(Subcommand)]
enum Command {
    /// Build a representation and write it as JSON.
    Mk {
        #[command(subcommand)]
        what: MkSpec,
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
        /// Forget the c arrows and write a P² representation.
        #[arg(long, global = true)]
        p2: bool,
    },
    /// Ext dimensions between two representation files.
    Ext {
        m: PathBuf,
        n: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Y)]
        side: SideArg,
    },
    /// Closed-form Euler pairing of two dimension vectors or files.
    Euler {
        m: String,
        n: String,
        #[arg(long, value_enum, default_value_t = SideArg::Y)]
        side: SideArg,
    },
    /// Orientation character of a heart, optionally evaluated on a module.
    Orichar {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        heart: i64,
        #[arg(long)]
        module: Option<PathBuf>,
    },
    /// Move a representation to the neighbouring heart.
    Twist {
        file: PathBuf,
        #[arg(value_enum)]
        direction: Dir,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Window vector of a representation over `--range`.
    Window { file: PathBuf },
    /// Symbolic identity check.
    Verify {
        #[arg(value_enum)]
        identity: Identity,
    },
    /// Run the regression corpus.
    Corpus {
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SUM_PAIRS)]
        sums: usize,
    },
}

#[derive(Subcommand)]
enum MkSpec {
    /// `point x:y:z --t T`
    Point {
        coords: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        heart: i64,
    },
    /// `pushforward d`: the zero-section sheaf O(d).
    Pushforward {
        d: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        heart: i64,
    },
    /// `simple v`: the vertex simple S_v.
    Simple {
        vertex: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        heart: i64,
    },
    /// Direct sum of two representation files.
    Sum { left: PathBuf, right: PathBuf },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}

fn parse_mode(words: &[String]) -> Result<ScalarMode, Error> {
    match words {
        [m] if m == "rational" => Ok(ScalarMode::Rational),
        [m, p] if m == "prime" => {
            let p: u64 = p.parse().map_err(|_| Error::InvalidPrime(p.clone()))?;
            ScalarMode::prime(p)
        }
        [m] if m == "prime" => Err(Error::Parse("--mode prime needs a modulus".into())),
        _ => Err(Error::Parse(format!("unknown mode {:?}", words.join(" ")))),
    }
}

fn config(g: &GlobalOpts, default_range: (i64, i64)) -> Result<RunConfig, Error> {
    let range = match g.range.as_deref() {
        Some([a, b]) => (*a, *b),
        _ => default_range,
    };
    Ok(RunConfig {
        mode: parse_mode(&g.mode)?,
        range,
        seed: g.seed,
        format: match g.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
        sum_pairs: DEFAULT_SUM_PAIRS,
    })
}

fn read_module(path: &Path) -> Result<AnyModule, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    ModuleFile::from_json(&text)?.to_module()
}

fn read_y(path: &Path) -> Result<Representation, Error> {
    match read_module(path)? {
        AnyModule::Y(r) => Ok(r),
        AnyModule::P2(_) => Err(Error::Parse(format!("{} is a P² representation; a Y representation is needed", path.display()))),
    }
}

fn write_module<M: QuiverModule>(m: &M, out: Option<&Path>) -> Result<(), Error> {
    let file = ModuleFile::from_module(m);
    let text = file.to_json();
    let back = ModuleFile::from_json(&text)?;
    if back != file {
        return Err(Error::Postcondition("module JSON does not round-trip".into()));
    }
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Dims and relation status go to stderr when the JSON itself is on stdout.
fn status_line<M: QuiverModule>(m: &M, to_stdout: bool) {
    let check = m.check_relations();
    let rel = if check.ok { "ok".to_string() } else { format!("violated: {}", check.violated.join(", ")) };
    let line = format!("heart {} dims {:?} relations {rel}", m.heart(), m.dims());
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn emit_module<M: QuiverModule>(m: &M, out: Option<&Path>) -> Result<(), Error> {
    write_module(m, out)?;
    status_line(m, out.is_some());
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let g = &cli.global;
    match cli.command {
        Command::Mk { what, out, p2 } => cmd_mk(what, out.as_deref(), p2),
        Command::Ext { m, n, side } => cmd_ext(g, &m, &n, side),
        Command::Euler { m, n, side } => cmd_euler(g, &m, &n, side),
        Command::Orichar { heart, module } => cmd_orichar(g, heart, module.as_deref()),
        Command::Twist { file, direction, out } => cmd_twist(g, &file, direction, out.as_deref()),
        Command::Window { file } => cmd_window(g, &file),
        Command::Verify { identity } => cmd_verify(g, identity),
        Command::Corpus { fixtures, sums } => cmd_corpus(g, fixtures.as_deref(), sums),
    }
}

fn cmd_mk(what: MkSpec, out: Option<&Path>, p2: bool) -> Result<Outcome, Error> {
    let rep = match what {
        MkSpec::Point { coords, t, heart } => {
            let parts: Vec<&str> = coords.split(':').collect();
            let [x, y, z] = parts.as_slice() else {
                return Err(Error::Parse(format!("point coordinates must look like x:y:z, got {coords:?}")));
            };
            let p = [parse_fraction(x)?, parse_fraction(y)?, parse_fraction(z)?];
            point_module(p, parse_fraction(&t)?, heart)?
        }
        MkSpec::Pushforward { d, heart } => pushforward_module(d, heart)?,
        MkSpec::Simple { vertex, heart } => simple_module(vertex, heart)?,
        MkSpec::Sum { left, right } => direct_sum(&read_y(&left)?, &read_y(&right)?)?,
    };
    if p2 {
        emit_module(&p2_restrict(&rep), out)?;
    } else {
        emit_module(&rep, out)?;
    }
    Ok(Outcome::Pass)
}

fn print_ext(r: &ExtReport, format: Format) {
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(r).expect("report serialises");
            v["version"] = json!(localp2::VERSION);
            v["conventions"] = json!(localp2::conventions());
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Text => {
            println!("side       {}", r.side);
            println!("dims M     {:?}", r.dims_m);
            println!("dims N     {:?}", r.dims_n);
            println!("term dims  {:?}", r.term_dims);
            println!("ext dims   {:?}", r.ext_dims);
            println!("euler      {}", r.euler);
            if let Some(ok) = r.cy3_ok {
                println!("cy3        {}", if ok { "ok" } else { "FAILED" });
            }
        }
    }
}

fn cmd_ext(g: &GlobalOpts, m: &Path, n: &Path, side: SideArg) -> Result<Outcome, Error> {
    let mode = parse_mode(&g.mode)?;
    let (a, b) = (read_module(m)?, read_module(n)?);
    let report = match (side, a, b) {
        (SideArg::Y, AnyModule::Y(a), AnyModule::Y(b)) => ext_report_y(&a, &b, mode)?,
        (SideArg::Y, _, _) => return Err(Error::Parse("--side y needs two Y representations".into())),
        (SideArg::P2, a, b) => {
            let to_p2 = |x: AnyModule| match x {
                AnyModule::Y(r) => p2_restrict(&r),
                AnyModule::P2(r) => r,
            };
            ext_report_p2(&to_p2(a), &to_p2(b), mode)?
        }
    };
    print_ext(&report, g.format);
    Ok(match report.cy3_ok {
        Some(false) => Outcome::Fail,
        _ => Outcome::Pass,
    })
}

fn dims_arg(s: &str) -> Result<[i64; 3], Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() == 3 {
        if let Ok(v) = parts.iter().map(|p| p.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>() {
            return Ok([v[0], v[1], v[2]]);
        }
    }
    let dims = match read_module(Path::new(s))? {
        AnyModule::Y(r) => r.dims(),
        AnyModule::P2(r) => r.dims(),
    };
    Ok(dims_i64(dims))
}

fn cmd_euler(g: &GlobalOpts, m: &str, n: &str, side: SideArg) -> Result<Outcome, Error> {
    let (a, b) = (dims_arg(m)?, dims_arg(n)?);
    let (name, chi) = match side {
        SideArg::Y => ("y", euler_form_y(a, b)),
        SideArg::P2 => ("p2", euler_form_p2(a, b)),
    };
    match g.format {
        Format::Json => println!("{}", json!({"side": name, "dims_M": a, "dims_N": b, "euler": chi})),
        Format::Text => println!("{chi}"),
    }
    Ok(Outcome::Pass)
}

fn cmd_orichar(g: &GlobalOpts, heart: i64, module: Option<&Path>) -> Result<Outcome, Error> {
    let (heart, dims) = match module {
        Some(p) => {
            let r = read_y(p)?;
            (r.heart(), Some(dims_i64(r.dims())))
        }
        None => (heart, None),
    };
    let c = ori_char(heart);
    let values = dims.map(|d| eval_char(&c, &dims_assignment(0, heart, &d))).transpose()?;
    match g.format {
        Format::Json => {
            let exps: serde_json::Map<String, serde_json::Value> =
                c.iter().map(|(s, e)| (s.to_string(), json!(e.to_string()))).collect();
            let vals = values.as_ref().map(|v| {
                (0..3)
                    .map(|s| {
                        let sym = Symbol::d(heart + s);
                        (sym.to_string(), json!(v.get(&sym).copied().unwrap_or(0)))
                    })
                    .collect::<serde_json::Map<_, _>>()
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({"heart": heart, "exponents": exps, "dims": dims, "values": vals}))
                    .expect("json")
            );
        }
        Format::Text => {
            for s in 0..3 {
                let sym = Symbol::d(heart + s);
                let form = c.exponent(sym);
                match &values {
                    Some(v) => println!("{sym:<6} {form:<18} = {}", v.get(&sym).copied().unwrap_or(0)),
                    None => println!("{sym:<6} {form}"),
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_twist(g: &GlobalOpts, file: &Path, dir: Dir, out: Option<&Path>) -> Result<Outcome, Error> {
    let rep = read_y(file)?;
    let dir = match dir {
        Dir::Up => TwistDirection::Up,
        Dir::Down => TwistDirection::Down,
    };
    let membership = window_membership(&rep, dir)?;
    if !membership.member {
        match g.format {
            Format::Json => eprintln!("{}", serde_json::to_string_pretty(&membership).expect("json")),
            Format::Text => {
                for (name, (got, want)) in &membership.ranks {
                    eprintln!("rank {name}: {got} (needs {want})");
                }
            }
        }
    }
    let twisted = twist(&rep, dir)?;
    emit_module(&twisted, out)?;
    Ok(Outcome::Pass)
}

fn cmd_window(g: &GlobalOpts, file: &Path) -> Result<Outcome, Error> {
    let rep = read_y(file)?;
    let (lo, hi) = config(g, (rep.heart() - 3, rep.heart() + 5))?.range;
    let certified = certified_window(&rep, lo, hi)?;
    let full = extend_to(&certified, lo, hi)?;
    let violations = full.check_recursion();
    match g.format {
        Format::Json => println!("{}", full.to_json()),
        Format::Text => {
            for (k, h) in full.values.range(lo..=hi) {
                let mark = if full.certified.contains(k) { "certified" } else { "extrapolated" };
                println!("h{k:<4} {h:>6}  {mark}");
            }
            if !violations.is_empty() {
                println!("recursion violated at {violations:?}");
            }
        }
    }
    Ok(if violations.is_empty() { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_verify(g: &GlobalOpts, identity: Identity) -> Result<Outcome, Error> {
    let default = match identity {
        Identity::Theorem3 => (-8, 8),
        _ => (0, 0),
    };
    let (lo, hi) = config(g, default)?.range;
    let report: ProofReport = match identity {
        Identity::Theorem3 => verify_theorem3(lo, hi)?,
        Identity::Theorem4 => verify_theorem4(lo, hi)?,
        Identity::SquareRoot => verify_square_root(lo, hi)?,
        Identity::Cocycle => verify_cocycle(lo, hi)?,
    };
    match g.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("json")),
        Format::Text => print!("{}", report.to_table()),
    }
    Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_corpus(g: &GlobalOpts, fixtures: Option<&Path>, sums: usize) -> Result<Outcome, Error> {
    let mut cfg = config(g, (-8, 8))?;
    cfg.sum_pairs = sums;
    let fixtures = match fixtures {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            Fixtures::from_json(&text)?
        }
        None => default_fixtures(),
    };
    let report = run_corpus(&cfg, &fixtures)?;
    match g.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("json")),
        Format::Text => print!("{}", report.to_table()),
    }
    Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
}
