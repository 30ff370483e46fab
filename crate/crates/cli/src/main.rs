use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use etaforms::forms::Atom;
use etaforms::rational::{self, Rational};
use etaforms::{
    congruence_scan, count_points, count_points_charsum, count_points_naive, expand_expression, ligozat_check,
    run_suite, solve_combination, verify_ap_range, verify_closed_forms, verify_identity, QSeries, Registry,
    SolveOutcome, SuiteOptions, TargetCoefficients, VerificationReport,
};
use serde::Serialize;

mod render;

use render::Format;

#[derive(Parser)]
#[command(
    name = "etaforms",
    version,
    about = "Eta quotient identities and elliptic curve point counts"
)]
struct Cli {
    /// Registry JSON to use instead of the built-in one
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first coefficients of a registry expression
    Expand {
        #[arg(long)]
        label: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        terms: u64,
    },
    /// Holomorphy check for every registry quotient at a level
    Membership {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        level: u64,
    },
    /// Compare an expression with its target up to the Sturm bound
    Verify {
        #[arg(long)]
        label: String,
    },
    /// Solve for a combination of atoms matching a target
    #[command(group(ArgGroup::new("goal").required(true).args(["target", "values"])))]
    Solve {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        level: u64,
        /// Atoms such as `L3` or `eta[3:3,33:3,1:-1,11:-1]`
        #[arg(long, required = true, num_args = 1..)]
        basis: Vec<String>,
        /// Registry target label
        #[arg(long)]
        target: Option<String>,
        /// Literal target coefficients a_0,a_1,...,a_S
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<i64>>,
    },
    /// Count points on a registry curve over F_p
    Count {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// a_p and closed-form checks for an expression:curve pair
    Modularity {
        #[arg(long, value_name = "EXPR:CURVE")]
        pair: String,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(2..))]
        pmax: u64,
    },
    /// Check that point counts are divisible by a modulus
    Congruence {
        #[arg(long)]
        curve: String,
        #[arg(long = "mod", value_parser = clap::value_parser!(u64).range(2..))]
        modulus: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
        pmax: u64,
    },
    /// Run every criterion of the verification suite
    VerifyAll {
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(2..))]
        pmax: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
        congruence_pmax: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Naive,
    Charsum,
}

/// Rendered output and whether every check in it passed.
struct Outcome {
    text: String,
    pass: bool,
}

impl Outcome {
    fn new(text: String, pass: bool) -> Self {
        Outcome { text, pass }
    }
}

fn load_registry(path: Option<&PathBuf>) -> Result<Registry, String> {
    match path {
        None => Ok(Registry::embedded()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            Registry::from_json(&text).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let reg = load_registry(cli.registry.as_ref())?;
    let fmt = cli.format;
    match cli.command {
        Command::Expand { label, terms } => expand(&reg, fmt, &label, terms as usize),
        Command::Membership { level } => membership(&reg, fmt, level),
        Command::Verify { label } => verify(&reg, fmt, &label),
        Command::Solve {
            level,
            basis,
            target,
            values,
        } => solve(&reg, fmt, level, &basis, target, values),
        Command::Count { curve, prime, method } => count(&reg, fmt, &curve, prime, method),
        Command::Modularity { pair, pmax } => modularity(&reg, fmt, &pair, pmax),
        Command::Congruence { curve, modulus, pmax } => {
            let curve = reg.curve(&curve).map_err(|e| e.to_string())?;
            let report = congruence_scan(curve, modulus, pmax).map_err(|e| e.to_string())?;
            Ok(Outcome::new(report_text(fmt, &report), report.pass))
        }
        Command::VerifyAll { pmax, congruence_pmax } => verify_all(&reg, fmt, pmax, congruence_pmax),
    }
}

#[derive(Serialize)]
struct Expansion<'a> {
    label: &'a str,
    series: &'a QSeries,
}

fn expand(reg: &Registry, fmt: Format, label: &str, terms: usize) -> Result<Outcome, String> {
    let expr = reg.expression(label).map_err(|e| e.to_string())?;
    let series = expand_expression(expr, terms).map_err(|e| e.to_string())?;
    if fmt == Format::Json {
        return Ok(Outcome::new(render::json(&Expansion { label, series: &series }), true));
    }
    let rows: Vec<Vec<String>> = (0..terms as i64)
        .map(|n| {
            let c = series.coeff(n).map_err(|e| e.to_string())?;
            Ok(vec![n.to_string(), rational::format(&c)])
        })
        .collect::<Result<_, String>>()?;
    Ok(Outcome::new(
        render::tabular(fmt, &expr.to_string(), &["n", "a_n"], &rows),
        true,
    ))
}

fn membership(reg: &Registry, fmt: Format, level: u64) -> Result<Outcome, String> {
    let mut seen = HashSet::new();
    let quotients: Vec<_> = reg
        .claimed_members
        .iter()
        .cloned()
        .chain(reg.expression_quotients())
        .filter(|q| q.level() == level && seen.insert(q.clone()))
        .collect();
    if quotients.is_empty() {
        return Err(format!("no registry quotients at level {level}"));
    }
    let reports: Vec<_> = quotients.iter().map(|q| ligozat_check(q, 2)).collect();
    let pass = reports.iter().all(|r| r.member);
    if fmt == Format::Json {
        return Ok(Outcome::new(render::json(&reports), pass));
    }
    let yes = |b: bool| if b { "yes" } else { "no" }.to_string();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let orders: Vec<String> = r
                .cusp_orders
                .iter()
                .map(|(d, o)| format!("{d}:{}", rational::format(o)))
                .collect();
            vec![
                r.quotient.to_string(),
                rational::format(&r.weight),
                yes(r.cond24_delta && r.cond24_codelta),
                yes(r.character_trivial),
                orders.join(" "),
                if r.member {
                    "member".into()
                } else {
                    r.failures().join("; ")
                },
            ]
        })
        .collect();
    let title = format!("{} quotients at level {level}", reports.len());
    let header = ["quotient", "weight", "mod 24", "character", "cusp orders", "verdict"];
    Ok(Outcome::new(render::tabular(fmt, &title, &header, &rows), pass))
}

fn verify(reg: &Registry, fmt: Format, label: &str) -> Result<Outcome, String> {
    let expr = reg.expression(label).map_err(|e| e.to_string())?;
    let target = reg
        .target_for(expr)
        .ok_or_else(|| format!("expression {label} names no target"))?;
    let r = verify_identity(expr, target).map_err(|e| e.to_string())?;
    if fmt == Format::Json {
        return Ok(Outcome::new(render::json(&r), r.pass));
    }
    let rows: Vec<Vec<String>> = r
        .computed
        .iter()
        .zip(&target.values)
        .enumerate()
        .map(|(n, (got, want))| {
            let ok = *got == rational::int(*want);
            vec![
                n.to_string(),
                want.to_string(),
                rational::format(got),
                if ok { "ok" } else { "FAIL" }.into(),
            ]
        })
        .collect();
    let title = format!(
        "{} {} vs target {}: {} coefficients compared, S({}) = {}",
        if r.pass { "PASS" } else { "FAIL" },
        r.expression,
        r.target,
        r.compared,
        r.level,
        r.sturm_bound
    );
    let text = render::tabular(fmt, &title, &["n", "target", "computed", ""], &rows);
    Ok(Outcome::new(text, r.pass))
}

fn solve(
    reg: &Registry,
    fmt: Format,
    level: u64,
    basis: &[String],
    target: Option<String>,
    values: Option<Vec<i64>>,
) -> Result<Outcome, String> {
    let atoms: Vec<Atom> = basis.iter().map(|s| Atom::parse(s, level)).collect::<Result<_, _>>()?;
    let target = match (target, values) {
        (Some(label), _) => {
            let t = reg.target(&label).map_err(|e| e.to_string())?.clone();
            if t.level != level {
                return Err(format!("target {label} has level {}, not {level}", t.level));
            }
            t
        }
        (None, Some(values)) => TargetCoefficients {
            label: "literal".into(),
            level,
            values,
        },
        (None, None) => unreachable!("clap requires a goal"),
    };
    let outcome = solve_combination(&atoms, &target).map_err(|e| e.to_string())?;
    let pass = matches!(outcome, SolveOutcome::Unique { .. });
    if fmt == Format::Json {
        return Ok(Outcome::new(render::json(&outcome), pass));
    }
    let indexed = |v: &[Rational], names: &dyn Fn(usize) -> String| -> Vec<Vec<String>> {
        v.iter()
            .enumerate()
            .map(|(i, c)| vec![names(i), rational::format(c)])
            .collect()
    };
    let atom_name = |i: usize| atoms[i].to_string();
    let text = match &outcome {
        SolveOutcome::Unique { coefficients } => render::tabular(
            fmt,
            "unique solution",
            &["atom", "coefficient"],
            &indexed(coefficients, &atom_name),
        ),
        SolveOutcome::Underdetermined {
            free_columns,
            particular,
        } => {
            let free: Vec<String> = free_columns.iter().map(|&c| atoms[c].to_string()).collect();
            let title = format!("underdetermined; free atoms set to 0: {}", free.join(", "));
            render::tabular(fmt, &title, &["atom", "coefficient"], &indexed(particular, &atom_name))
        }
        SolveOutcome::Inconsistent { certificate, residual } => {
            let title = format!(
                "inconsistent; certificate y has y.A = 0 and y.b = {}",
                rational::format(residual)
            );
            let eq = |n: usize| format!("q^{n}");
            render::tabular(fmt, &title, &["equation", "y"], &indexed(certificate, &eq))
        }
    };
    Ok(Outcome::new(text, pass))
}

fn count(reg: &Registry, fmt: Format, label: &str, p: u64, method: Method) -> Result<Outcome, String> {
    let curve = reg.curve(label).map_err(|e| e.to_string())?;
    let pc = match method {
        Method::Auto => count_points(curve, p),
        Method::Naive => count_points_naive(curve, p),
        Method::Charsum => count_points_charsum(curve, p),
    }
    .map_err(|e| e.to_string())?;
    if fmt == Format::Json {
        return Ok(Outcome::new(render::json(&pc), true));
    }
    let rows = vec![vec![pc.p.to_string(), pc.count.to_string(), pc.ap.to_string()]];
    let title = format!("{label}: {}", curve_equation(curve.coefficients()));
    Ok(Outcome::new(
        render::tabular(fmt, &title, &["p", "count", "a_p"], &rows),
        true,
    ))
}

fn curve_equation(a: [i64; 5]) -> String {
    format!(
        "[a1,a2,a3,a4,a6] = [{}]",
        a.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    )
}

fn modularity(reg: &Registry, fmt: Format, pair: &str, pmax: u64) -> Result<Outcome, String> {
    let (e, c) = pair
        .split_once(':')
        .ok_or_else(|| format!("pair {pair:?} is not EXPR:CURVE"))?;
    let expr = reg.expression(e).map_err(|e| e.to_string())?;
    let curve = reg.curve(c).map_err(|e| e.to_string())?;
    let reports = [
        verify_ap_range(expr, curve, pmax).map_err(|e| e.to_string())?,
        verify_closed_forms(expr, curve, pmax).map_err(|e| e.to_string())?,
    ];
    let pass = reports.iter().all(|r| r.pass);
    let text = match fmt {
        Format::Json => render::json(&reports),
        Format::Table => format!("{}\n{}", reports[0].render_table(), reports[1].render_table()),
        Format::Csv => {
            let rows: Vec<Vec<String>> = ["coefficient", "closed_form"]
                .iter()
                .zip(&reports)
                .flat_map(|(kind, r)| {
                    r.checks.iter().map(move |c| {
                        vec![
                            kind.to_string(),
                            c.p.to_string(),
                            rational::format(&c.lhs),
                            rational::format(&c.rhs),
                            c.pass.to_string(),
                        ]
                    })
                })
                .collect();
            render::csv(&["check", "p", "lhs", "rhs", "pass"], &rows)
        }
    };
    Ok(Outcome::new(text, pass))
}

fn report_text(fmt: Format, r: &VerificationReport) -> String {
    match fmt {
        Format::Json => render::json(r),
        Format::Table => r.render_table(),
        Format::Csv => r.to_csv(),
    }
}

fn verify_all(reg: &Registry, fmt: Format, pmax: u64, congruence_pmax: u64) -> Result<Outcome, String> {
    let opts = SuiteOptions {
        p_max: pmax,
        congruence_p_max: congruence_pmax,
        ..SuiteOptions::default()
    };
    let results = run_suite(reg, &opts);
    let pass = results.iter().all(|r| r.pass);
    let text = match fmt {
        Format::Json => render::json(&results),
        Format::Table => {
            let passed = results.iter().filter(|r| r.pass).count();
            let mut out: String = results.iter().map(|r| r.line() + "\n").collect();
            out.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
            out
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.id.to_string(),
                        r.title.clone(),
                        r.pass.to_string(),
                        r.checked.to_string(),
                        r.elapsed_ms.to_string(),
                        r.failures.join("; "),
                    ]
                })
                .collect();
            render::csv(&["id", "title", "pass", "checked", "elapsed_ms", "failures"], &rows)
        }
    };
    Ok(Outcome::new(text, pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
