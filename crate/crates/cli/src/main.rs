use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graverkit::ab::{ab_graver_closed_form, ab_relation, ab_ugb_triple, b_matrix, ABInstance};
use graverkit::complexity::{graver_complexity, ppi_verify_bound};
use graverkit::data::{paper_table, transportation};
use graverkit::fiber::{edge_test, fiber_enumerate};
use graverkit::graver::{graver_with, GraverOptions, Strategy};
use graverkit::groebner::{groebner, TermOrder, Tiebreak};
use graverkit::io::{format_layered, format_matrix, format_vectors, parse_layered, parse_matrix, parse_vector};
use graverkit::lawrence::{build_witness, lawrence_lift, relation_minimal, LayeredVector};
use graverkit::verify::{verify_paper, Section, VerifyOptions};
use graverkit::{Error, IntMatrix, LatticeVector, Limits};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Parser)]
#[command(name = "graverkit", version, about = "Exact Graver bases, toric Groebner bases and Lawrence liftings")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Maximum number of stored elements during a completion.
    #[arg(long, global = true)]
    max_elements: Option<usize>,
    /// Maximum 1-norm of any element produced during a completion.
    #[arg(long, global = true)]
    max_norm: Option<u64>,
    /// Maximum number of points in an enumerated fiber.
    #[arg(long, global = true)]
    max_fiber: Option<usize>,
    /// Maximum number of live states in the layer dynamic program.
    #[arg(long, global = true)]
    max_states: Option<usize>,
}

impl Caps {
    fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            max_elements: self.max_elements.unwrap_or(d.max_elements),
            max_norm: self.max_norm.unwrap_or(d.max_norm),
            max_fiber: self.max_fiber.unwrap_or(d.max_fiber),
            max_states: self.max_states.unwrap_or(d.max_states),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Plain,
    ProjectAndLift,
}

#[derive(Clone, Copy, ValueEnum)]
enum TiebreakArg {
    Lex,
    Degrevlex,
}

#[derive(Subcommand)]
enum Command {
    /// Graver basis, one representative per pair.
    Graver {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "plain")]
        strategy: StrategyArg,
    },
    /// Reduced Groebner basis of the toric ideal, rows oriented so that the
    /// positive part is the leading term.
    Groebner {
        matrix: PathBuf,
        /// Cost vector as a `1 n` matrix file; zero costs when omitted.
        #[arg(long)]
        cost: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "degrevlex")]
        tiebreak: TiebreakArg,
    },
    /// Lattice points of a fiber.
    Fiber { matrix: PathBuf, rhs: PathBuf },
    /// Whether `z` is an edge direction of the fiber through `z⁺`.
    EdgeTest { matrix: PathBuf, vector: PathBuf },
    /// Lawrence lifting with `N` copies.
    Lift {
        matrix: PathBuf,
        #[arg(short = 'N', long = "copies")]
        copies: usize,
        /// Layered witness file to check against the lifting.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Closed forms and certificates for `A_{a,b}`.
    Ab {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Graver complexity through the Graver basis of the Graver basis.
    Complexity {
        matrix: PathBuf,
        /// Stable `key=value` lines for scripts.
        #[arg(long)]
        porcelain: bool,
        /// Lift every cap.
        #[arg(long)]
        unbounded: bool,
    },
    /// Primitive partition identities of `A_n`.
    Ppi {
        n: usize,
        /// Stable `key=value` lines for scripts.
        #[arg(long)]
        porcelain: bool,
    },
    /// Rerun every reproduced claim.
    VerifyPaper {
        /// Restrict to sections: 3x3, 3x4, ab, ppi, complexity.
        #[arg(long = "section")]
        sections: Vec<String>,
        /// Largest n for the partition-identity claims.
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        /// Stable `key=value` lines for scripts.
        #[arg(long)]
        porcelain: bool,
        /// Also print wall times, which vary between runs.
        #[arg(long)]
        timings: bool,
    },
    /// Long informational runs: gb-3x3-9 or g-3x4.
    Stress { name: String },
}

/// Failures mapped to exit codes: 1 for verification or resource failures,
/// 2 for usage and input errors.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Dimension(_) | Error::Precondition(_) | Error::NotPointed => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: graverkit::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
        f => f,
    })
}

fn load_matrix(path: &Path) -> Result<IntMatrix, Failure> {
    with_path(path, parse_matrix(&read(path)?))
}

fn load_vector(path: &Path) -> Result<LatticeVector, Failure> {
    with_path(path, parse_vector(&read(path)?))
}

/// Positive integer multiple of a rational vector with coprime entries.
fn integer_functional(c: &[BigRational]) -> Vec<BigInt> {
    let denom = c.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = c.iter().map(|v| (v * BigRational::from_integer(denom.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

fn run(cli: Cli) -> Outcome {
    let limits = cli.caps.limits();
    let opts = GraverOptions { limits, ..Default::default() };
    let mut out = String::new();
    match cli.command {
        Command::Graver { matrix, strategy } => {
            let a = load_matrix(&matrix)?;
            let strategy = match strategy {
                StrategyArg::Plain => Strategy::Plain,
                StrategyArg::ProjectAndLift => Strategy::ProjectAndLift,
            };
            let g = graver_with(&a, &GraverOptions { limits, strategy })?;
            out.push_str(&format_vectors(g.elements(), a.cols()));
        }
        Command::Groebner { matrix, cost, tiebreak } => {
            let a = load_matrix(&matrix)?;
            let n = a.cols();
            let costs = match cost {
                Some(p) => {
                    let c = load_vector(&p)?;
                    c.to_i64().ok_or_else(|| Failure::Usage(format!("{}: cost entries must fit in 64 bits", p.display())))?
                }
                None => vec![0; n],
            };
            let perm: Vec<usize> = (0..n).collect();
            let tb = match tiebreak {
                TiebreakArg::Lex => Tiebreak::Lex(perm),
                TiebreakArg::Degrevlex => Tiebreak::DegRevLex(perm),
            };
            let order = TermOrder::from_costs(&costs, tb)?;
            let gb = groebner(&a, &order, &limits)?;
            out.push_str(&format_vectors(gb.elements(), n));
        }
        Command::Fiber { matrix, rhs } => {
            let a = load_matrix(&matrix)?;
            let b = load_vector(&rhs)?;
            let f = fiber_enumerate(&a, &b, &limits)?;
            out.push_str(&format_vectors(f.points(), a.cols()));
        }
        Command::EdgeTest { matrix, vector } => {
            let a = load_matrix(&matrix)?;
            let z = load_vector(&vector)?;
            if z.len() != a.cols() || !a.annihilates(&z) {
                return Err(Failure::Usage(format!("{}: vector is not in the kernel of the matrix", vector.display())));
            }
            let rhs = LatticeVector::new(a.mul_vec(z.positive_part().coords())?);
            let fiber = fiber_enumerate(&a, &rhs, &limits)?;
            match edge_test(&fiber, &z)? {
                Some(cert) => {
                    let c = LatticeVector::new(integer_functional(&cert.functional));
                    let value = c.dot(z.positive_part().coords());
                    out.push_str("EDGE\n");
                    out.push_str(&format_vectors(&[c], a.cols()));
                    let _ = writeln!(out, "value {value}");
                    let _ = writeln!(out, "fiber {} points", fiber.len());
                }
                None => {
                    out.push_str("NOT-EDGE\n");
                    let _ = writeln!(out, "fiber {} points", fiber.len());
                }
            }
        }
        Command::Lift { matrix, copies, witness } => {
            let a = load_matrix(&matrix)?;
            if copies == 0 {
                return Err(Failure::Usage("-N must be at least 1".into()));
            }
            let lift = lawrence_lift(&a, copies)?;
            match witness {
                None => out.push_str(&format_matrix(lift.matrix())),
                Some(p) => {
                    let layers = with_path(&p, parse_layered(&read(&p)?))?;
                    let x = with_path(&p, LayeredVector::new(a.cols(), layers))?;
                    let x = if x.len() < copies { x.padded(copies) } else { x };
                    if x.len() != copies {
                        return Err(Failure::Usage(format!("{}: {} layers exceed N = {copies}", p.display(), x.len())));
                    }
                    let ok = lift.annihilates(&x);
                    let _ = writeln!(out, "layers {} width {}", x.len(), x.width());
                    let _ = writeln!(out, "type {}", x.type_of());
                    let _ = writeln!(out, "in kernel {ok}");
                    return Ok((out, ok));
                }
            }
        }
        Command::Ab { a, b } => ab_report(a, b, &opts, &mut out)?,
        Command::Complexity { matrix, porcelain, unbounded } => {
            let a = load_matrix(&matrix)?;
            let opts = if unbounded {
                GraverOptions {
                    limits: Limits { max_elements: usize::MAX, max_norm: u64::MAX, max_fiber: usize::MAX, max_states: usize::MAX },
                    ..opts
                }
            } else {
                opts
            };
            let r = graver_complexity(&a, &opts)?;
            let rows = [
                ("g", r.g_value.to_string()),
                ("graver_size", r.graver_size.to_string()),
                ("derived_shape", format!("{}x{}", r.derived_matrix.rows(), r.derived_matrix.cols())),
                ("derived_graver_size", r.derived_graver_size.to_string()),
                ("witness", r.witness.to_string()),
            ];
            for (k, v) in &rows {
                let _ = writeln!(out, "{:<20}  {v}", k.replace('_', " "));
            }
            if porcelain {
                for (k, v) in &rows {
                    let _ = writeln!(out, "{k}={v}");
                }
            }
        }
        Command::Ppi { n, porcelain } => {
            let r = ppi_verify_bound(n, &opts)?;
            for (p, norm) in &r.identities {
                let _ = writeln!(out, "{norm:>4}  {p}");
            }
            let _ = writeln!(out, "identities {}", r.identities.len());
            let _ = writeln!(out, "max norm {} (2(n-1) = {})", r.max_norm, 2 * (n - 1));
            let _ = writeln!(out, "tight witness {} {}", r.tight_witness, if r.tight_present { "present" } else { "absent" });
            for p in &r.delta_exceptions {
                let _ = writeln!(out, "delta bound exception  {p}");
            }
            if porcelain {
                let _ = writeln!(out, "n={n}");
                let _ = writeln!(out, "identities={}", r.identities.len());
                let _ = writeln!(out, "max_norm={}", r.max_norm);
                let _ = writeln!(out, "norm_bound_holds={}", r.norm_bound_holds());
                let _ = writeln!(out, "tight_present={}", r.tight_present);
                let _ = writeln!(out, "delta_exceptions={}", r.delta_exceptions.len());
            }
        }
        Command::VerifyPaper { sections, max_n, porcelain, timings } => {
            let sections = if sections.is_empty() {
                Section::ALL.to_vec()
            } else {
                sections.iter().map(|s| s.parse::<Section>()).collect::<graverkit::Result<Vec<_>>>()?
            };
            let report = verify_paper(&VerifyOptions { sections, max_n, limits, parallel: true });
            out.push_str(&report.table());
            if porcelain {
                out.push_str(&report.porcelain());
            }
            if timings {
                out.push_str(&report.timings());
            }
            let ok = report.all_pass();
            return Ok((out, ok));
        }
        Command::Stress { name } => stress(&name, &opts, &mut out)?,
    }
    Ok((out, true))
}

fn ab_report(a: u64, b: u64, opts: &GraverOptions, out: &mut String) -> Result<(), Failure> {
    let inst = ABInstance::new(a, b)?;
    let _ = writeln!(out, "a {a} b {b} gcd {} normalized a' {} b' {}", inst.gcd, inst.a_norm, inst.b_norm);
    let g = graver_with(&inst.matrix(), opts)?;
    let closed = ab_graver_closed_form(&inst);
    let _ = writeln!(out, "graver basis ({} pairs, closed form {})", g.len(), if g.elements() == closed.elements() { "equal" } else { "differs" });
    out.push_str(&format_vectors(g.elements(), 4));
    let _ = writeln!(out, "universal groebner members");
    for m in ab_ugb_triple(&inst, &opts.limits)? {
        let stated = integer_functional(&m.stated);
        let lp = integer_functional(&m.lp.functional);
        let _ = writeln!(
            out,
            "  {}  stated {} ({})  lp {}  fiber {} points",
            m.vector,
            LatticeVector::new(stated),
            if m.stated_holds { "valid" } else { "invalid" },
            LatticeVector::new(lp),
            m.fiber.len()
        );
    }
    let rel = ab_relation(&inst)?;
    let minimal = relation_minimal(&rel)?.is_minimal();
    let w = build_witness(&rel)?;
    let _ = writeln!(out, "relation lambda {:?} minimal {minimal}", rel.lambda());
    let _ = writeln!(out, "witness type {} (|lambda| = {}, |supp lambda| = {})", w.type_of(), rel.total(), rel.support_size());
    out.push_str(&format_layered(w.layers(), w.width()));
    if inst.gcd > 1 {
        let _ = writeln!(out, "note: raw 2(a+b) = {} differs from normalized 2(a'+b') = {}", 2 * (a + b), 2 * (inst.a_norm + inst.b_norm));
    }
    let r = b_matrix(&inst)?;
    let _ = writeln!(out, "kernel equality with B_{} {}", inst.a_norm + inst.b_norm, r.kernels_equal);
    let _ = writeln!(out, "factorization G = (v h) B {}", r.factorization_holds);
    Ok(())
}

fn stress(name: &str, opts: &GraverOptions, out: &mut String) -> Result<(), Failure> {
    match name {
        "gb-3x3-9" => {
            let table = paper_table("z9")?;
            let x = build_witness(&table.relation()?)?.padded(9);
            let lift = lawrence_lift(&transportation(3, 3), 9)?;
            let cost: Vec<i64> = x.flatten().coords().iter().map(|v| i64::from(v.is_zero())).collect();
            let order = TermOrder::from_costs(&cost, Tiebreak::DegRevLex((0..cost.len()).collect()))?;
            let _ = writeln!(out, "groebner basis of the 9-fold lifting of the 3x3 transportation matrix");
            let _ = writeln!(out, "reference count 218785");
            match groebner(lift.matrix(), &order, &opts.limits) {
                Ok(gb) => {
                    let _ = writeln!(out, "computed count {}", gb.len());
                }
                Err(e @ Error::CapExceeded { .. }) => {
                    let _ = writeln!(out, "stopped: {e}");
                }
                Err(e) => return Err(e.into()),
            }
        }
        "g-3x4" => {
            let _ = writeln!(out, "graver complexity of the 3x4 transportation matrix, conjectured 27");
            match graver_complexity(&transportation(4, 3), opts) {
                Ok(r) => {
                    let _ = writeln!(out, "computed g {} ({} Graver pairs, {} derived)", r.g_value, r.graver_size, r.derived_graver_size);
                }
                Err(e @ Error::CapExceeded { .. }) => {
                    let _ = writeln!(out, "stopped: {e}");
                }
                Err(e) => return Err(e.into()),
            }
        }
        other => return Err(Failure::Usage(format!("unknown stress run `{other}` (expected gb-3x3-9 or g-3x4)"))),
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("GRAVERKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("GRAVERKIT_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure {n} threads: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|_| run(cli));
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
