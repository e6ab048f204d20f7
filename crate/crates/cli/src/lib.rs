//! The `lspk` command-line tool.
//!
//! Exit status: 0 when every requested predicate holds, 1 when one fails or
//! a computation is rejected, 2 on usage, I/O or file-format errors.

pub mod file;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use lspk_core::catalog::{catalog, catalog_entry, catalog_verify, Params};
use lspk_core::construction::{build_corollary1, build_corollary2, build_lspk, build_milnor};
use lspk_core::decomposition::decompose;
use lspk_core::forms::{
    check_associative, check_commutative, check_hessian, check_k_hessian, check_koszul_identity,
    check_left_symmetric, check_novikov, is_positive_definite, koszul_form,
};
use lspk_core::geometry::{
    base_curvature, einstein_check, koszul_one_form, second_koszul_form, tangent_bundle_ricci,
};
use lspk_core::linalg::rows_of;
use lspk_core::search::{builtin_system, newton_search, verify_roots_build};
use lspk_core::{
    AlgebraStructure, BilinearForm, LinearMap, MetricAlgebra, MilnorSpec, PredicateReport,
    Tolerance, Vector,
};
use serde::Serialize;
use serde_json::json;

use file::{
    parse_algebra_file, parse_data_file, parse_matrix_arg, AlgebraFile, DataFile, FileError,
    LoadedAlgebra,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "lspk",
    version,
    about = "Left-symmetric algebras with positive definite Koszul form"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check algebraic identities. Without a flag, `--all` is assumed.
    Check {
        file: PathBuf,
        /// Is the algebra an LSPK; also reports Novikov, commutative, associative
        #[arg(long)]
        all: bool,
        #[arg(long)]
        lsa: bool,
        #[arg(long)]
        novikov: bool,
        /// Hessian for the file's metric, or for the Koszul form if none
        #[arg(long)]
        hessian: bool,
        /// k-Hessian for the file's metric
        #[arg(long, allow_hyphen_values = true, value_name = "K")]
        khessian: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Print the Koszul form and its smallest eigenvalue.
    Koszul {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Split an LSPK into its block data.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Print the block data as a file accepted by `build theo`
        #[arg(long, conflicts_with = "json")]
        data: bool,
    },
    /// Build an LSPK or a Milnor algebra and print it as an algebra file.
    Build {
        #[command(subcommand)]
        what: BuildCommand,
    },
    /// Curvature of the metric `alpha B` (or the file's metric).
    Geometry {
        file: PathBuf,
        #[arg(long, value_name = "ALPHA")]
        scale: Option<f64>,
        /// Ricci curvature of the lifted metric on the tangent bundle
        #[arg(long)]
        tb_ricci: bool,
        /// Einstein constant of the lifted metric
        #[arg(long)]
        einstein: bool,
        #[arg(long)]
        json: bool,
    },
    /// Built-in fixtures.
    Catalog {
        #[command(subcommand)]
        what: CatalogCommand,
    },
    /// Newton search for a built-in constraint system.
    Search {
        /// dim3_case3, dim4 or dim5
        system: String,
        /// Search interval for every coordinate, as `a,b`
        #[arg(
            long = "box",
            value_delimiter = ',',
            allow_hyphen_values = true,
            num_args = 1
        )]
        bounds: Option<Vec<f64>>,
        /// Seeds per axis (default 16 for one unknown, 32 for two)
        #[arg(long)]
        grid: Option<usize>,
        /// Also build and verify the algebra for every root
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BuildCommand {
    /// `R^n + RH` with skew block `D`
    Corollary1 {
        #[arg(long)]
        n: usize,
        /// Skew matrix as JSON rows; zero if omitted
        #[arg(long)]
        d: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// `h + RH` over a Euclidean algebra file (metric defaults to identity)
    Corollary2 {
        file: PathBuf,
        #[arg(long)]
        d: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// General construction from a block-data file
    Theo {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Milnor algebra for the vector `h`
    Milnor {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        h: Vec<f64>,
        /// Metric as JSON rows; Euclidean if omitted
        #[arg(long)]
        metric: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List,
    /// Parameters, expectations and products of an entry
    Show {
        name: String,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
    },
    Verify {
        name: String,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
    },
    VerifyAll,
    /// Write the entry as an algebra file
    Export {
        name: String,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<lspk_core::Error> for Failure {
    fn from(e: lspk_core::Error) -> Self {
        let code = match e {
            lspk_core::Error::UnknownEntry(_)
            | lspk_core::Error::UnknownSystem(_)
            | lspk_core::Error::ParamOutOfRange { .. } => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the tool on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn env_tolerance() -> Result<Tolerance, Failure> {
    match std::env::var("LSPK_EPS") {
        Ok(s) => {
            let eps: f64 = s
                .trim()
                .parse()
                .map_err(|_| usage(format!("LSPK_EPS: cannot parse {s:?}")))?;
            Tolerance::new(eps).map_err(|e| usage(format!("LSPK_EPS: {e}")))
        }
        Err(_) => Ok(Tolerance::default()),
    }
}

fn tolerance_for(loaded: &LoadedAlgebra) -> Result<Tolerance, Failure> {
    match loaded.tolerance {
        Some(t) => Tolerance::new(t).map_err(|e| usage(format!("tolerance: {e}"))),
        None => env_tolerance(),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<LoadedAlgebra, Failure> {
    Ok(parse_algebra_file(&read_text(path)?)?)
}

fn write_output(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("reports serialize")
    );
}

fn fmt_vec(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_num(*x)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix(m: &LinearMap, indent: &str) -> String {
    (0..m.nrows())
        .map(|r| {
            let parts: Vec<String> = (0..m.ncols())
                .map(|c| format!("{:>12}", fmt_num(m[(r, c)])))
                .collect();
            format!("{indent}{}", parts.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Rounds to 12 significant places for display so that, e.g., `-0.5000000000000001`
/// prints as `-0.5`.
fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if (1e-4..1e9).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[derive(Serialize)]
struct NamedReport<'a> {
    name: &'a str,
    #[serde(flatten)]
    report: PredicateReport,
    /// Reported only; does not affect the exit status.
    informational: bool,
}

fn print_reports(reports: &[NamedReport], json_out: bool) -> i32 {
    let ok = reports
        .iter()
        .filter(|r| !r.informational)
        .all(|r| r.report.holds);
    if json_out {
        print_json(&json!({ "predicates": reports, "all_hold": ok }));
    } else {
        for r in reports {
            let verdict = match (r.report.holds, r.informational) {
                (true, _) => "PASS",
                (false, false) => "FAIL",
                (false, true) => "no",
            };
            let witness = r
                .report
                .witness
                .map(|w| format!(" at {w:?}"))
                .unwrap_or_default();
            println!(
                "{:<22} {verdict:<4}  residual {:e}, threshold {:e}{witness}",
                r.name, r.report.max_residual, r.report.threshold
            );
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_check(file: &Path, flags: CheckFlags) -> Outcome {
    let loaded = load(file)?;
    let tol = tolerance_for(&loaded)?;
    let a = &loaded.algebra;
    let all =
        flags.all || !(flags.lsa || flags.novikov || flags.hessian || flags.khessian.is_some());
    let mut reports = Vec::new();
    let mut push = |name: &'static str, report: PredicateReport, informational: bool| {
        reports.push(NamedReport {
            name,
            report,
            informational,
        });
    };
    let b = koszul_form(a);
    if all || flags.lsa {
        push("left-symmetric", check_left_symmetric(a, tol), false);
    }
    if all {
        push("koszul-identity", check_koszul_identity(a, tol), false);
        push("koszul-positive", is_positive_definite(&b, tol), false);
    }
    if all || flags.hessian {
        let g = loaded.metric.clone().unwrap_or_else(|| b.clone());
        push("hessian", check_hessian(a, &g, tol)?, false);
    }
    if flags.novikov {
        push("novikov", check_novikov(a, tol), false);
    }
    if all {
        push("novikov", check_novikov(a, tol), true);
        push("commutative", check_commutative(a, tol), true);
        push("associative", check_associative(a, tol), true);
    }
    if let Some(k) = flags.khessian {
        let g = loaded
            .metric
            .as_ref()
            .ok_or_else(|| usage("--khessian needs a metric in the algebra file"))?;
        push("k-hessian", check_k_hessian(a, g, k, tol)?, false);
    }
    Ok(print_reports(&reports, flags.json))
}

struct CheckFlags {
    all: bool,
    lsa: bool,
    novikov: bool,
    hessian: bool,
    khessian: Option<f64>,
    json: bool,
}

fn cmd_koszul(file: &Path, json_out: bool) -> Outcome {
    let loaded = load(file)?;
    let tol = tolerance_for(&loaded)?;
    let b = koszul_form(&loaded.algebra);
    let pd = is_positive_definite(&b, tol);
    if json_out {
        print_json(&json!({
            "koszul": rows_of(b.matrix()),
            "min_eigenvalue": b.min_eigenvalue(),
            "positive_definite": pd.holds,
        }));
    } else {
        println!("Koszul form:\n{}", fmt_matrix(b.matrix(), "  "));
        println!("smallest eigenvalue: {}", fmt_num(b.min_eigenvalue()));
        println!("positive definite: {}", if pd.holds { "yes" } else { "no" });
    }
    Ok(EXIT_OK)
}

fn cmd_decompose(file: &Path, json_out: bool, data_out: bool) -> Outcome {
    let loaded = load(file)?;
    let tol = tolerance_for(&loaded)?;
    let d = decompose(&loaded.algebra, tol)?;
    if data_out {
        println!("{}", DataFile::from_data(&d.to_lspk_data()).to_json());
        return Ok(EXIT_OK);
    }
    if json_out {
        print_json(&d);
        return Ok(EXIT_OK);
    }
    let (d1, d2, rho) = d.signature();
    println!("dim h1 = {d1}, dim h2 = {d2}, rho = {}", fmt_num(rho));
    println!("H = {}", fmt_vec(&d.h));
    for (label, basis) in [("h1", &d.basis_h1), ("h2", &d.basis_h2)] {
        for (i, v) in basis.iter().enumerate() {
            println!("{label}[{i}] = {}", fmt_vec(v));
        }
    }
    if d1 > 0 {
        println!("B1:\n{}", fmt_matrix(&d.b1, "  "));
    }
    if d2 > 0 {
        println!("B2:\n{}", fmt_matrix(&d.b2, "  "));
    }
    if let Some(c) = &d.circ2 {
        let nz: Vec<String> = (0..d2 * d2)
            .filter_map(|idx| {
                let (i, j) = (idx / d2, idx % d2);
                let v = c.basis_product(i, j);
                (v.amax() > 0.0).then(|| format!("f{i} o f{j} = {}", fmt_vec(&v)))
            })
            .collect();
        if !nz.is_empty() {
            println!("product on h2: {}", nz.join("; "));
        }
    }
    println!(
        "max residual {:e} over {} identities",
        d.max_residual(),
        d.residuals.len()
    );
    Ok(EXIT_OK)
}

fn emit_algebra(
    a: &AlgebraStructure,
    metric: Option<&BilinearForm>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    write_output(&AlgebraFile::from_algebra(a, metric).to_json(), output)
}

fn cmd_build(what: BuildCommand) -> Outcome {
    let tol = env_tolerance()?;
    match what {
        BuildCommand::Corollary1 { n, d, output } => {
            let dm = match d {
                Some(s) => parse_matrix_arg("--d", &s, n)?,
                None => LinearMap::zeros(n, n),
            };
            emit_algebra(&build_corollary1(n, &dm, tol)?, None, output.as_deref())?;
        }
        BuildCommand::Corollary2 { file, d, output } => {
            let loaded = load(&file)?;
            let n = loaded.algebra.dim();
            let g = loaded
                .metric
                .clone()
                .unwrap_or_else(|| BilinearForm::identity(n));
            let m = MetricAlgebra::new(loaded.algebra, g, tol)?;
            let dm = match d {
                Some(s) => parse_matrix_arg("--d", &s, n)?,
                None => LinearMap::zeros(n, n),
            };
            emit_algebra(&build_corollary2(&m, &dm, tol)?, None, output.as_deref())?;
        }
        BuildCommand::Theo { file, output } => {
            let data = parse_data_file(&read_text(&file)?)?;
            emit_algebra(
                &build_lspk(&data, tol)?.with_name("theo"),
                None,
                output.as_deref(),
            )?;
        }
        BuildCommand::Milnor { h, metric, output } => {
            let n = h.len();
            if n == 0 {
                return Err(usage("--h needs at least one coordinate"));
            }
            let h = Vector::from_vec(h);
            let spec = match metric {
                Some(s) => {
                    let g = BilinearForm::new(parse_matrix_arg("--metric", &s, n)?)?;
                    MilnorSpec {
                        dim: n,
                        metric: g,
                        h_vec: h,
                    }
                }
                None => MilnorSpec::euclidean(h),
            };
            let m = build_milnor(&spec, tol)?;
            emit_algebra(
                &m.algebra().clone().with_name("milnor"),
                Some(m.metric()),
                output.as_deref(),
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_geometry(
    file: &Path,
    scale: Option<f64>,
    tb_ricci: bool,
    einstein: bool,
    json_out: bool,
) -> Outcome {
    let loaded = load(file)?;
    let tol = tolerance_for(&loaded)?;
    let a = &loaded.algebra;
    if let Some(s) = scale {
        if !(s > 0.0 && s.is_finite()) {
            return Err(usage("--scale must be positive"));
        }
    }
    let metric = match (scale, &loaded.metric) {
        (None, Some(g)) => g.clone(),
        (s, _) => koszul_form(a).scaled(s.unwrap_or(1.0)),
    };
    let m = MetricAlgebra::new(a.clone(), metric, tol)?;
    let alpha = koszul_one_form(&m, tol)?;
    let beta = second_koszul_form(&m, tol)?;
    let base = base_curvature(&m, tol)?;
    let tb = if tb_ricci {
        Some(tangent_bundle_ricci(&m, tol)?)
    } else {
        None
    };
    let mu = if einstein {
        Some(einstein_check(a, scale.unwrap_or(1.0), tol)?)
    } else {
        None
    };
    if json_out {
        print_json(&json!({
            "metric": rows_of(m.metric().matrix()),
            "koszul_one_form": alpha.as_slice(),
            "second_koszul_form": rows_of(beta.matrix()),
            "base_ricci": rows_of(base.ricci.matrix()),
            "tangent_bundle": tb,
            "mu": mu,
        }));
        return Ok(EXIT_OK);
    }
    println!("Koszul one-form: {}", fmt_vec(&alpha));
    println!("second Koszul form:\n{}", fmt_matrix(beta.matrix(), "  "));
    println!(
        "Ricci form of the metric:\n{}",
        fmt_matrix(base.ricci.matrix(), "  ")
    );
    if let Some(r) = &tb {
        println!(
            "tangent bundle Ricci, horizontal block:\n{}",
            fmt_matrix(r.tb_ricci_hh.matrix(), "  ")
        );
        println!(
            "tangent bundle Ricci, vertical block:\n{}",
            fmt_matrix(r.tb_ricci_vv.matrix(), "  ")
        );
        println!("max |mixed block| = {:e}", r.tb_ricci_hv.amax());
        println!("max deviation from -beta = {:e}", r.oracle_residual);
    }
    if let Some(mu) = mu {
        println!("mu = {}", fmt_num(mu));
    }
    Ok(EXIT_OK)
}

fn to_params(kv: Vec<(String, f64)>) -> Params {
    kv.into_iter().collect()
}

fn cmd_catalog(what: CatalogCommand) -> Outcome {
    let tol = env_tolerance()?;
    match what {
        CatalogCommand::List => {
            for e in catalog() {
                let params: Vec<&str> = e.params.iter().map(|p| p.name).collect();
                println!("{:<22} ({}) {}", e.name, params.join(", "), e.summary);
            }
            Ok(EXIT_OK)
        }
        CatalogCommand::Show { name, params } => {
            let e = catalog_entry(&name)?;
            let p = e.resolve(&to_params(params))?;
            let f = e.build(&p)?;
            print_json(&json!({
                "name": e.name,
                "summary": e.summary,
                "kind": e.kind,
                "param_specs": e.params,
                "params": p,
                "expected": e.expected(&p)?,
                "algebra": AlgebraFile::from_algebra(&f.algebra, f.metric.as_ref()),
            }));
            Ok(EXIT_OK)
        }
        CatalogCommand::Verify { name, params } => {
            let r = catalog_verify(&name, &to_params(params), tol)?;
            println!("{name}: ok, max residual {:e}", r.max_residual);
            Ok(EXIT_OK)
        }
        CatalogCommand::VerifyAll => {
            let mut code = EXIT_OK;
            for e in catalog() {
                match catalog_verify(e.name, &Params::new(), tol) {
                    Ok(r) => println!("{:<22} ok    max residual {:e}", e.name, r.max_residual),
                    Err(err) => {
                        code = EXIT_FAIL;
                        println!("{:<22} FAIL  {err}", e.name);
                    }
                }
            }
            Ok(code)
        }
        CatalogCommand::Export {
            name,
            params,
            output,
        } => {
            let f = catalog_entry(&name)?.build(&to_params(params))?;
            emit_algebra(&f.algebra, f.metric.as_ref(), output.as_deref())?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_search(
    system: &str,
    bounds: Option<Vec<f64>>,
    grid: Option<usize>,
    verify: bool,
) -> Outcome {
    let tol = env_tolerance()?;
    let sys = builtin_system(system)?;
    let (lo, hi) = match bounds.as_deref() {
        None => (-1.0, 1.0),
        Some([a, b]) if a < b => (*a, *b),
        Some(_) => return Err(usage("--box expects a,b with a < b")),
    };
    let grid = grid.unwrap_or(if sys.arity == 1 { 16 } else { 32 });
    let roots = newton_search(&sys, &vec![(lo, hi); sys.arity], grid)?;
    println!(
        "{}",
        serde_json::to_string(&roots.roots).expect("roots serialize")
    );
    if verify {
        for r in &roots.roots {
            verify_roots_build(system, r, 0.0, 1.0, tol)?;
        }
        eprintln!("{} roots verified", roots.len());
    }
    Ok(EXIT_OK)
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Check {
            file,
            all,
            lsa,
            novikov,
            hessian,
            khessian,
            json,
        } => cmd_check(
            &file,
            CheckFlags {
                all,
                lsa,
                novikov,
                hessian,
                khessian,
                json,
            },
        ),
        Command::Koszul { file, json } => cmd_koszul(&file, json),
        Command::Decompose { file, json, data } => cmd_decompose(&file, json, data),
        Command::Build { what } => cmd_build(what),
        Command::Geometry {
            file,
            scale,
            tb_ricci,
            einstein,
            json,
        } => cmd_geometry(&file, scale, tb_ricci, einstein, json),
        Command::Catalog { what } => cmd_catalog(what),
        Command::Search {
            system,
            bounds,
            grid,
            verify,
        } => cmd_search(&system, bounds, grid, verify),
    }
}
