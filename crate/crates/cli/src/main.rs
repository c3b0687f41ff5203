mod files;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use toricfan::divisor::{
    self, cartier_obstruction, chern_growth, class_group, divisor_polytope, is_ample,
    is_projective, picard_group, polytope_degree, Projectivity, ToricDivisor,
};
use toricfan::egyptian::{
    egyptian_report, small_modification, verify_modification, EgyptianReport,
    PyramidalClassification,
};
use toricfan::exactlin::SolveMode;
use toricfan::families::{verify_yu_combinatorics, yu_fan, YuConfig};
use toricfan::fan::{Fan, WallCurveKind};

use files::{emit_fan, load_divisor, load_fan, number};
use report::{CliError, Report};

#[derive(Parser)]
#[command(
    name = "toricfan",
    version,
    about = "Exact computations on rational polyhedral fans"
)]
struct Cli {
    /// print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FanArg {
    #[arg(long)]
    fan: PathBuf,
}

#[derive(Args)]
struct FanDivisorArgs {
    #[arg(long)]
    fan: PathBuf,
    #[arg(long)]
    divisor: PathBuf,
}

#[derive(Args)]
struct FanRayArgs {
    #[arg(long)]
    fan: PathBuf,
    #[arg(long)]
    ray: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a fan file
    Validate(FanArg),
    /// Decide whether the support of the fan is all of N_R
    Complete(FanArg),
    /// Decide whether a divisor is Cartier
    Cartier(FanDivisorArgs),
    /// Cartier index of a Q-Cartier divisor
    Index(FanDivisorArgs),
    /// Picard group of a complete fan
    Picard(FanArg),
    /// Class group
    Classgroup(FanArg),
    /// Search for a strictly convex support function
    Projective(FanArg),
    /// Decide whether a ray is in Egyptian position
    Egyptian(FanRayArgs),
    /// Small modification along a ray in Egyptian position
    Modify {
        #[command(flatten)]
        args: FanRayArgs,
        /// write the modified fan here
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Ehrhart polynomial and degree of a divisor polytope
    Degree(FanDivisorArgs),
    /// Named fan families
    Family {
        #[command(subcommand)]
        family: Family,
    },
    /// Full pipeline: Egyptian position, modification, Q-Cartier divisor,
    /// projective divisor fan, and the growth of the top Chern number
    Report {
        #[arg(long, conflicts_with_all = ["n", "u"], required_unless_present_all = ["n", "u"])]
        fan: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        ray: usize,
        #[arg(long, requires = "u")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        u: Option<u64>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// The fan Δ_u on rays e, f_1..f_n, g_1..g_n, h
    Yu {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn load(path: &Path, r: &mut Report) -> Result<Fan, CliError> {
    let loaded = r.timed("parse", || load_fan(path))?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    r.warnings.extend(loaded.warnings);
    if let Some(labels) = loaded.labels {
        r.put("ray_labels", json!(labels));
    }
    Ok(loaded.fan)
}

fn kind_name(k: WallCurveKind) -> &'static str {
    match k {
        WallCurveKind::Torus => "torus",
        WallCurveKind::Affine => "affine",
        WallCurveKind::Projective => "projective",
    }
}

fn validate(f: &Fan, r: &mut Report) {
    r.line(format!(
        "valid fan: rank {}, {} rays, {} maximal cones, {} walls",
        f.ambient_rank(),
        f.rays().len(),
        f.max_cones().len(),
        f.walls().len()
    ));
    r.put("rank", json!(f.ambient_rank()));
    r.put("rays", json!(f.rays().len()));
    r.put("max_cones", json!(f.max_cones().len()));
    r.put("complete", json!(f.is_complete()));
    r.verdict(true);
}

fn complete(f: &Fan, r: &mut Report) {
    let complete = r.timed("complete", || f.is_complete());
    r.put("complete", json!(complete));
    if complete {
        r.line("complete: every wall is shared by two maximal cones");
    } else {
        let open: Vec<Value> = f
            .walls()
            .iter()
            .filter(|w| w.kind() != WallCurveKind::Projective)
            .map(|w| json!({ "rays": w.rays, "incident": w.incident, "kind": kind_name(w.kind()) }))
            .collect();
        r.line(format!(
            "not complete: {} walls bound the support",
            open.len()
        ));
        r.put("boundary_walls", Value::Array(open));
    }
    r.verdict(complete);
}

fn cartier(f: &Fan, d: &ToricDivisor, r: &mut Report) -> Result<(), CliError> {
    let data = r.timed("solve", || divisor::cartier_data(f, d, SolveMode::Integral))?;
    match data {
        Some(data) => {
            r.line("Cartier");
            r.put("characters", report::cartier_data(&data));
            r.verdict(true);
        }
        None => {
            let cone = cartier_obstruction(f, d, SolveMode::Integral)?;
            let q = divisor::is_q_cartier(f, d)?;
            r.line(format!(
                "not Cartier: no integral character on maximal cone {}{}",
                cone.map_or("?".into(), |c| c.to_string()),
                if q { " (Q-Cartier)" } else { "" }
            ));
            r.put("obstruction_cone", json!(cone));
            r.put("q_cartier", json!(q));
            r.verdict(false);
        }
    }
    Ok(())
}

fn index(f: &Fan, d: &ToricDivisor, r: &mut Report) -> Result<(), CliError> {
    match r.timed("index", || divisor::cartier_index(f, d))? {
        Some(k) => {
            r.line(format!("Cartier index {k}"));
            r.put("index", Value::Number(number(&k)));
            r.verdict(true);
        }
        None => {
            let cone = cartier_obstruction(f, d, SolveMode::Rational)?;
            r.line(format!(
                "not Q-Cartier: no rational character on maximal cone {}",
                cone.map_or("?".into(), |c| c.to_string())
            ));
            r.put("obstruction_cone", json!(cone));
            r.verdict(false);
        }
    }
    Ok(())
}

fn projective(f: &Fan, r: &mut Report) -> Result<(), CliError> {
    match r.timed("projective", || is_projective(f))? {
        Projectivity::Feasible { divisor, data } => {
            r.line(format!(
                "Feasible: ample divisor {:?}",
                divisor
                    .coefficients
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            ));
            r.put(
                "divisor",
                Value::Array(
                    divisor
                        .coefficients
                        .iter()
                        .map(|x| Value::Number(number(x)))
                        .collect(),
                ),
            );
            r.put("characters", report::cartier_data(&data));
            r.verdict(true);
        }
        Projectivity::Infeasible => {
            let pic = r.timed("picard", || picard_group(f))?;
            r.line(format!(
                "Infeasible: no strictly convex support function (Pic = {pic})"
            ));
            r.put("picard", report::group(&pic));
            r.verdict(false);
        }
    }
    Ok(())
}

fn classification(f: &Fan, k: &PyramidalClassification) -> Value {
    let rays = |c: &toricfan::cone::Cone| -> Value {
        match f.global_rays_of(c) {
            Some(rs) => json!(rs),
            None => Value::Array(c.rays().iter().map(report::lattice_vector).collect()),
        }
    };
    match k {
        PyramidalClassification::LowDim { sigma_prime } => {
            json!({ "kind": "low_dim", "sigma_prime": rays(sigma_prime) })
        }
        PyramidalClassification::Pyramidal {
            sigma_prime,
            eta,
            normal,
            sigma_double_prime,
        } => json!({
            "kind": "pyramidal",
            "sigma_prime": rays(sigma_prime),
            "eta": rays(eta),
            "normal": report::lattice_vector(normal),
            "sigma_double_prime": rays(sigma_double_prime),
        }),
        PyramidalClassification::NotPyramidal {
            sigma_prime,
            beyond,
            on_hyperplane,
        } => json!({
            "kind": "not_pyramidal",
            "sigma_prime": rays(sigma_prime),
            "beyond": beyond.iter().map(rays).collect::<Vec<_>>(),
            "on_hyperplane": on_hyperplane.iter().map(rays).collect::<Vec<_>>(),
        }),
    }
}

fn egyptian(f: &Fan, ray: usize, r: &mut Report) -> Result<EgyptianReport, CliError> {
    let rep = r.timed("egyptian", || egyptian_report(f, ray))?;
    let per_cone: Vec<Value> = rep
        .per_cone
        .iter()
        .map(|(c, k)| json!({ "cone": c, "classification": classification(f, k) }))
        .collect();
    let bad: Vec<usize> = rep
        .per_cone
        .iter()
        .filter(|(_, k)| !k.is_pyramidal())
        .map(|(c, _)| *c)
        .collect();
    if rep.verdict {
        r.line(format!(
            "ray {ray} is in Egyptian position ({} star cones)",
            rep.per_cone.len()
        ));
    } else {
        r.line(format!(
            "ray {ray} is not in Egyptian position: cones {bad:?} are not pyramidal extensions"
        ));
    }
    r.put(
        "egyptian",
        json!({ "ray": ray, "verdict": rep.verdict, "per_cone": per_cone }),
    );
    r.verdict(rep.verdict);
    Ok(rep)
}

fn modify(
    f: &Fan,
    ray: usize,
    emit: Option<&Path>,
    r: &mut Report,
) -> Result<Option<Fan>, CliError> {
    if !egyptian(f, ray, r)?.verdict {
        return Ok(None);
    }
    let m = r.timed("modify", || small_modification(f, ray))?;
    let check = r.timed("verify", || verify_modification(&m))?;
    r.line(format!(
        "modified fan: {} maximal cones, {} exceptional walls",
        m.fan.max_cones().len(),
        m.exceptional_walls.len()
    ));
    for w in &check.walls {
        r.line(format!(
            "  wall {:?}: {}, siblings only {}, η + ρ maximal {}",
            w.wall,
            w.kind.map_or("not a wall", kind_name),
            w.siblings_only,
            w.eta_plus_rho_maximal
        ));
    }
    r.line(format!(
        "quotient fan unchanged: {}",
        check.quotient_unchanged
    ));
    for fail in &check.failures {
        r.line(format!("  check failed: {fail}"));
    }
    r.put(
        "modification",
        json!({
            "max_cones": m.fan.max_cones(),
            "split_cones": m.split_cones.iter().map(|s| json!([s.original, s.sigma_prime, s.sigma_double_prime])).collect::<Vec<_>>(),
            "exceptional_walls": m.exceptional_walls,
            "quotient_unchanged": check.quotient_unchanged,
            "failures": check.failures,
        }),
    );
    r.verdict(check.passed());
    if let Some(path) = emit {
        emit_fan(path, &m.fan, None)?;
        r.line(format!("wrote {}", path.display()));
    }
    Ok(Some(m.fan))
}

fn degree(f: &Fan, d: &ToricDivisor, r: &mut Report) -> Result<(), CliError> {
    let p = r.timed("polytope", || divisor_polytope(f, d))?;
    let e = r.timed("ehrhart", || polytope_degree(&p, p.dim()))?;
    r.line(format!(
        "polytope of dimension {} with {} vertices",
        p.dim(),
        p.vertices().len()
    ));
    r.line(format!("Ehrhart polynomial {e}"));
    r.line(format!("degree {}", e.degree));
    r.put("dim", json!(p.dim()));
    r.put(
        "vertices",
        Value::Array(p.vertices().iter().map(report::rational_vector).collect()),
    );
    r.put(
        "ehrhart",
        Value::Array(e.coefficients.iter().map(report::rational).collect()),
    );
    r.put("degree", Value::Number(number(&e.degree)));
    Ok(())
}

fn family_yu(n: usize, u: u64, emit: Option<&Path>, r: &mut Report) -> Result<(), CliError> {
    let cfg = YuConfig::new(n, u)?;
    let y = r.timed("construct", || yu_fan(cfg))?;
    let check = r.timed("combinatorics", || verify_yu_combinatorics(&y));
    r.line(format!(
        "Δ_{u} for n = {n}: {} rays, {} maximal cones",
        y.fan.rays().len(),
        y.fan.max_cones().len()
    ));
    r.line(format!(
        "combinatorics: {} checks, {} failures",
        check.checks,
        check.failures.len()
    ));
    for fail in &check.failures {
        r.line(format!("  {fail}"));
    }
    r.put("ray_labels", json!(cfg.ray_labels()));
    r.put("cone_labels", json!(y.cone_labels()));
    r.put("max_cones", json!(y.fan.max_cones()));
    r.verdict(check.passed());
    if let Some(path) = emit {
        emit_fan(path, &y.fan, Some(cfg.ray_labels()))?;
        r.line(format!("wrote {}", path.display()));
    }
    Ok(())
}

/// An ample divisor on `q` for measuring degree: the first prime divisor if
/// it is ample, otherwise the projectivity witness.
fn ample_divisor(q: &Fan) -> Result<Option<ToricDivisor>, CliError> {
    let first = ToricDivisor::prime(q.rays().len(), 0);
    if is_ample(q, &first).unwrap_or(false) {
        return Ok(Some(first));
    }
    Ok(match is_projective(q)? {
        Projectivity::Feasible { divisor, .. } => Some(divisor),
        Projectivity::Infeasible => None,
    })
}

fn pipeline(f: &Fan, ray: usize, r: &mut Report) -> Result<(), CliError> {
    let n = f.ambient_rank();
    r.line(format!("complete: {}", f.is_complete()));
    let Some(modified) = modify(f, ray, None, r)? else {
        return Ok(());
    };
    let d = ToricDivisor::prime(f.rays().len(), ray);
    let index = r.timed("cartier index", || divisor::cartier_index(&modified, &d))?;
    match &index {
        Some(k) => r.line(format!(
            "D_{ray} is Q-Cartier on the modified fan, Cartier index {k}"
        )),
        None => r.line(format!("D_{ray} is not Q-Cartier on the modified fan")),
    }
    r.put(
        "cartier_index_modified",
        index
            .as_ref()
            .map_or(Value::Null, |k| Value::Number(number(k))),
    );
    r.verdict(index.is_some());

    let q = r.timed("quotient", || f.quotient_fan(ray))?;
    let ample = r.timed("quotient projective", || ample_divisor(&q))?;
    let Some(a) = ample else {
        r.line(format!("the fan of D_{ray} is not projective"));
        r.put("quotient_projective", json!(false));
        r.verdict(false);
        return Ok(());
    };
    r.put("quotient_projective", json!(true));
    let p = divisor_polytope(&q, &a)?;
    let e = r.timed("degree", || polytope_degree(&p, q.ambient_rank()))?;
    let g = chern_growth(n, &e.degree)?;
    r.line(format!(
        "the fan of D_{ray} is projective; ample divisor {:?} has degree {}",
        a.coefficients
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>(),
        e.degree
    ));
    r.line(g.statement.clone());
    r.line(g.lower_order.clone());
    r.put(
        "quotient_ample_divisor",
        Value::Array(
            a.coefficients
                .iter()
                .map(|x| Value::Number(number(x)))
                .collect(),
        ),
    );
    r.put("degree", Value::Number(number(&e.degree)));
    r.put(
        "growth",
        json!({ "statement": g.statement, "lower_order": g.lower_order }),
    );
    r.verdict(true);
    Ok(())
}

fn run(cli: &Cli, r: &mut Report) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate(a) => validate(&load(&a.fan, r)?, r),
        Command::Complete(a) => complete(&load(&a.fan, r)?, r),
        Command::Cartier(a) => {
            let f = load(&a.fan, r)?;
            cartier(&f, &load_divisor(&a.divisor, &f)?, r)?;
        }
        Command::Index(a) => {
            let f = load(&a.fan, r)?;
            index(&f, &load_divisor(&a.divisor, &f)?, r)?;
        }
        Command::Picard(a) => {
            let f = load(&a.fan, r)?;
            let g = r.timed("picard", || picard_group(&f))?;
            r.line(if g.is_trivial() {
                "Pic trivial".to_string()
            } else {
                format!("Pic = {g}")
            });
            r.put("picard", report::group(&g));
        }
        Command::Classgroup(a) => {
            let f = load(&a.fan, r)?;
            let g = r.timed("class group", || class_group(&f))?;
            r.line(format!("Cl = {g}"));
            r.put("class_group", report::group(&g));
        }
        Command::Projective(a) => projective(&load(&a.fan, r)?, r)?,
        Command::Egyptian(a) => {
            egyptian(&load(&a.fan, r)?, a.ray, r)?;
        }
        Command::Modify { args, emit } => {
            modify(&load(&args.fan, r)?, args.ray, emit.as_deref(), r)?;
        }
        Command::Degree(a) => {
            let f = load(&a.fan, r)?;
            degree(&f, &load_divisor(&a.divisor, &f)?, r)?;
        }
        Command::Family {
            family: Family::Yu { n, u, emit },
        } => family_yu(*n, *u, emit.as_deref(), r)?,
        Command::Report { fan, ray, n, u } => {
            let f = match (fan, n, u) {
                (Some(path), _, _) => load(path, r)?,
                (None, Some(n), Some(u)) => yu_fan(YuConfig::new(*n, *u)?)?.fan,
                _ => unreachable!("clap enforces a fan source"),
            };
            pipeline(&f, *ray, r)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = Report::new(std::env::args().skip(1).collect());
    if let Err(e) = run(&cli, &mut report) {
        eprintln!("error: {e}");
        report.fail(&e);
    }
    report.finish();
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}
