//! Batch front end tying the pipeline together: every subcommand reads
//! JSON inputs, writes machine-readable artifacts into the output
//! directory, and exits 0 exactly when all requested checks pass.
//! Identical configuration and seed produce byte-identical artifacts;
//! wall-clock time only ever appears in the run manifest.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use suploc_core::approx::{self, presets, CadlagDensity};
use suploc_core::assembly::{audit_path, build_from_collection, FillMode, PiecewiseLinearPath};
use suploc_core::blocks::{choose_period, feasibility, peel_blocks, recompose};
use suploc_core::density::{
    check_integral_inequality, check_universal_bound, check_window_monotonicity,
    validate_density, StepDensity,
};
use suploc_core::io::{
    self, blocks_to_json, density_from_json, law_to_json, path_from_json, path_to_json,
    report_to_json, DensityJson, PathJson,
};
use suploc_core::oracle::{
    atom_identity_check, exact_law, exact_law_with_diagnostics, grid_law, law_distance,
    max_bin_mean_discrepancy,
};
use suploc_core::rat::{fmt_rat, parse_rat, rat, zero, Rat};
use suploc_core::simulate::{
    atom_proxy, conditional_uniformity, ks_statistic_uniform, simulate_mixing_tau,
    uniformity_band, InnovationLaw, MixingProcessSpec,
};
use suploc_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "suploc",
    version,
    about = "Supremum-location laws of stationary shift processes: validate candidate densities, \
             decompose them into blocks, synthesize realizing paths, compute exact laws, run \
             approximation sweeps, and test asymptotic uniformity by simulation"
)]
struct Cli {
    /// Directory for output artifacts (falls back to $SUPLOC_OUT_DIR, then ".")
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the admissibility conditions of a step density
    Validate(DensityInput),
    /// Decompose an admissible density into a proper block collection
    Decompose(DensityInput),
    /// Build the periodic piecewise-linear path realizing a density
    Build(BuildArgs),
    /// Compute the exact supremum-location law of a path or density
    Law(LawArgs),
    /// Quantize a cadlag density over a list of levels and measure convergence
    Approx(ApproxArgs),
    /// Simulate supremum locations of the strongly mixing moving-average family
    Mix(MixArgs),
    /// Run the full invariant suite on a density and report pass/fail per check
    Verify(BuildArgs),
}

#[derive(Args)]
struct DensityInput {
    /// Density JSON: {"T":"p/q","pieces":[{"until":"p/q","value":"p/q"},...]}
    #[arg(long)]
    density: PathBuf,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    density: PathBuf,
    /// Fill strategy for degenerate components
    #[arg(long, default_value = "repaired")]
    mode: String,
}

#[derive(Args)]
struct LawArgs {
    /// Density JSON input (runs the full pipeline and compares to target)
    #[arg(long)]
    density: Option<PathBuf>,
    /// Path JSON input (oracle-only run)
    #[arg(long)]
    path: Option<PathBuf>,
    /// Window length for path inputs; defaults to period / 2
    #[arg(long)]
    window: Option<String>,
    #[arg(long, default_value = "repaired")]
    mode: String,
    /// Also run the brute-force grid oracle at n_grid,n_shift and report distances
    #[arg(long, value_name = "N_GRID,N_SHIFT")]
    grid_check: Option<String>,
}

#[derive(Args)]
struct ApproxArgs {
    /// Preset target: ramp | parabola | two-level-ramp
    #[arg(long, conflicts_with = "density")]
    preset: Option<String>,
    /// Step-density target from JSON
    #[arg(long)]
    density: Option<PathBuf>,
    /// Comma-separated quantization levels
    #[arg(long, default_value = "2,4,8,16")]
    n_list: String,
    #[arg(long, default_value = "repaired")]
    mode: String,
}

#[derive(Args)]
struct MixArgs {
    /// Window length
    #[arg(long, value_name = "T", default_value_t = 200.0)]
    window: f64,
    /// Kernel width
    #[arg(long, default_value_t = 1.0)]
    w: f64,
    /// Evaluation grid step
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    #[arg(long, default_value_t = 100_000)]
    paths: u64,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    /// Innovation law: uniform | exponential | normal | rademacher
    #[arg(long, default_value = "normal")]
    innovations: String,
    #[arg(long, default_value_t = 20260809)]
    seed: u64,
    /// Band half-trim for the uniformity statistic
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Basename for the CSV/JSON outputs
    #[arg(long, default_value = "mix")]
    out: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("SUPLOC_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match run(cli, &out_dir) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let code = err
                .downcast_ref::<CoreError>()
                .map(|e| e.code())
                .unwrap_or("io_error");
            let doc = json!({
                "schema_version": io::SCHEMA_VERSION,
                "error": { "code": code, "message": format!("{err:#}") },
            });
            eprintln!("{}", serde_json::to_string_pretty(&doc).unwrap());
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, out_dir: &Path) -> anyhow::Result<bool> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    match &cli.command {
        Command::Validate(args) => cmd_validate(args, out_dir),
        Command::Decompose(args) => cmd_decompose(args, out_dir),
        Command::Build(args) => cmd_build(args, out_dir),
        Command::Law(args) => cmd_law(args, out_dir),
        Command::Approx(args) => cmd_approx(args, out_dir),
        Command::Mix(args) => cmd_mix(args, out_dir),
        Command::Verify(args) => cmd_verify(args, out_dir),
    }
}

fn read_density(path: &Path) -> anyhow::Result<StepDensity> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let parsed: DensityJson = serde_json::from_str(&text)
        .map_err(|e| anyhow!(CoreError::Structural(format!("density JSON: {e}"))))?;
    Ok(density_from_json(&parsed)?)
}

fn write_json<T: Serialize>(out_dir: &Path, name: &str, value: &T) -> anyhow::Result<PathBuf> {
    let path = out_dir.join(name);
    let mut doc = serde_json::to_string_pretty(value)?;
    doc.push('\n');
    std::fs::write(&path, doc).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn write_manifest(
    out_dir: &Path,
    subcommand: &str,
    config: serde_json::Value,
    outputs: &[PathBuf],
) -> anyhow::Result<()> {
    let unix_time = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = json!({
        "schema_version": io::SCHEMA_VERSION,
        "tool": "suploc",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "config": config,
        "unix_time": unix_time,
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    write_json(out_dir, "manifest.json", &manifest)?;
    Ok(())
}

fn parse_mode(s: &str) -> anyhow::Result<FillMode> {
    Ok(FillMode::parse(s)?)
}

fn cmd_validate(args: &DensityInput, out_dir: &Path) -> anyhow::Result<bool> {
    let f = read_density(&args.density)?;
    let report = validate_density(&f);
    let out = write_json(out_dir, "density_report.json", &report_to_json(&report))?;
    write_manifest(
        out_dir,
        "validate",
        json!({"density": args.density.display().to_string()}),
        &[out],
    )?;
    println!(
        "admissible: {} (a: {}, b: {}, c: {}, universal bound: {})",
        report.admissible(),
        report.passes_a,
        report.passes_b,
        report.passes_c,
        report.passes_universal_bound
    );
    Ok(report.admissible())
}

fn cmd_decompose(args: &DensityInput, out_dir: &Path) -> anyhow::Result<bool> {
    let f = read_density(&args.density)?;
    let h = choose_period(&f)?;
    let c = peel_blocks(&f, &h)?;
    let feas = feasibility(&c);
    let doc = json!({
        "collection": blocks_to_json(&c),
        "m": c.block_count(),
        "d": fmt_rat(&c.spacing()),
        "feasible": feas.feasible(),
    });
    let out = write_json(out_dir, "blocks.json", &doc)?;
    write_manifest(
        out_dir,
        "decompose",
        json!({"density": args.density.display().to_string()}),
        &[out],
    )?;
    println!(
        "H = {}, m = {}, d = {}, feasible: {}",
        fmt_rat(&h),
        c.block_count(),
        fmt_rat(&c.spacing()),
        feas.feasible()
    );
    Ok(feas.feasible())
}

fn cmd_build(args: &BuildArgs, out_dir: &Path) -> anyhow::Result<bool> {
    let mode = parse_mode(&args.mode)?;
    let f = read_density(&args.density)?;
    let h = choose_period(&f)?;
    let c = peel_blocks(&f, &h)?;
    let (path, layout) = build_from_collection(&c, mode)?;
    let audit = audit_path(&path, &layout, &c.spacing(), c.t_end(), mode)?;
    let audit_doc = json!({
        "schema_version": io::SCHEMA_VERSION,
        "n_local_maxima": audit.n_local_maxima,
        "min_maxima_gap": fmt_rat(&audit.min_maxima_gap),
        "maxima_values": audit.maxima_values.iter().map(fmt_rat).collect::<Vec<_>>(),
        "min_value": fmt_rat(&audit.min_value),
        "max_slope": fmt_rat(&audit.max_slope),
        "rate_k": fmt_rat(&audit.rate_k),
        "fill_mode": audit.fill_mode.as_str(),
        "positive_region_floor_ok": audit.positive_region_floor_ok,
        "nonpositive_region_floor_ok": audit.nonpositive_region_floor_ok,
    });
    let p1 = write_json(out_dir, "path.json", &path_to_json(&path, mode))?;
    let p2 = write_json(out_dir, "path_audit.json", &audit_doc)?;
    write_manifest(
        out_dir,
        "build",
        json!({"density": args.density.display().to_string(), "mode": mode.as_str()}),
        &[p1, p2],
    )?;
    println!(
        "path: period {}, {} knots, {} local maxima",
        fmt_rat(path.period()),
        path.knots().len(),
        audit.n_local_maxima
    );
    Ok(true)
}

fn cmd_law(args: &LawArgs, out_dir: &Path) -> anyhow::Result<bool> {
    let mode = parse_mode(&args.mode)?;
    let mut outputs = Vec::new();
    let mut all_ok = true;

    let (path, window, target): (PiecewiseLinearPath, Rat, Option<(StepDensity, _)>) =
        match (&args.density, &args.path) {
            (Some(dp), None) => {
                let f = read_density(dp)?;
                let report = validate_density(&f);
                if !report.admissible() {
                    return Err(anyhow!(CoreError::Argument(
                        "density fails the admissibility conditions".into()
                    )));
                }
                if report.is_uniform {
                    let path = PiecewiseLinearPath::uniform_preset(f.t_end())?;
                    (path, f.t_end().clone(), Some((f, None)))
                } else {
                    let h = choose_period(&f)?;
                    let c = peel_blocks(&f, &h)?;
                    let (path, _) = build_from_collection(&c, mode)?;
                    (path, f.t_end().clone(), Some((f, Some(c))))
                }
            }
            (None, Some(pp)) => {
                let text = std::fs::read_to_string(pp)
                    .with_context(|| format!("reading {}", pp.display()))?;
                let parsed: PathJson = serde_json::from_str(&text)
                    .map_err(|e| anyhow!(CoreError::Structural(format!("path JSON: {e}"))))?;
                let (path, _) = path_from_json(&parsed)?;
                let window = match &args.window {
                    Some(w) => parse_rat(w)?,
                    None => path.period() / rat(2, 1),
                };
                (path, window, None)
            }
            _ => {
                return Err(anyhow!(CoreError::Argument(
                    "provide exactly one of --density or --path".into()
                )))
            }
        };

    let (law, diagnostics) = exact_law_with_diagnostics(&path, &window)?;
    let mut law_doc = serde_json::to_value(law_to_json(&law))?;
    law_doc["envelope_ties"] = json!(diagnostics
        .tie_intervals
        .iter()
        .map(|(a, b)| vec![fmt_rat(a), fmt_rat(b)])
        .collect::<Vec<_>>());
    outputs.push(write_json(out_dir, "law.json", &law_doc)?);

    if let Some((f, collection)) = &target {
        let interior_matches = law.interior == *f;
        let l1 = law.interior.l1_distance(f)?;
        let atom_identity = collection
            .as_ref()
            .map(|c| atom_identity_check(&law, c));
        let comparison = json!({
            "schema_version": io::SCHEMA_VERSION,
            "interior_matches_target": interior_matches,
            "interior_l1_to_target": fmt_rat(&l1),
            "atom_identity": atom_identity,
            "mode": mode.as_str(),
        });
        outputs.push(write_json(out_dir, "law_comparison.json", &comparison)?);
        all_ok &= interior_matches && atom_identity.unwrap_or(true);
        println!(
            "law: atoms ({}, {}), interior matches target: {}",
            fmt_rat(&law.atom0),
            fmt_rat(&law.atom_t),
            interior_matches
        );
    } else {
        println!(
            "law: atoms ({}, {}), interior pieces: {}",
            fmt_rat(&law.atom0),
            fmt_rat(&law.atom_t),
            law.interior.piece_count()
        );
    }

    if let Some(spec) = &args.grid_check {
        let (ng, ns) = spec
            .split_once(',')
            .ok_or_else(|| anyhow!(CoreError::Argument("--grid-check wants N_GRID,N_SHIFT".into())))?;
        let n_grid: usize = ng.trim().parse().context("parsing n_grid")?;
        let n_shift: usize = ns.trim().parse().context("parsing n_shift")?;
        let grid = grid_law(&path, &window, n_grid, n_shift)?;
        let dist = law_distance(&grid, &law)?;
        let disc = max_bin_mean_discrepancy(&law, &grid)?;
        let doc = json!({
            "schema_version": io::SCHEMA_VERSION,
            "n_grid": n_grid,
            "n_shift": n_shift,
            "atom0_diff": fmt_rat(&dist.atom0_diff),
            "atomT_diff": fmt_rat(&dist.atom_t_diff),
            "interior_l1": fmt_rat(&dist.interior_l1),
            "max_bin_mean_discrepancy": fmt_rat(&disc),
        });
        outputs.push(write_json(out_dir, "grid_check.json", &doc)?);
    }

    write_manifest(
        out_dir,
        "law",
        json!({
            "density": args.density.as_ref().map(|p| p.display().to_string()),
            "path": args.path.as_ref().map(|p| p.display().to_string()),
            "window": fmt_rat(&window),
            "mode": mode.as_str(),
            "grid_check": args.grid_check,
        }),
        &outputs,
    )?;
    Ok(all_ok)
}

fn cmd_approx(args: &ApproxArgs, out_dir: &Path) -> anyhow::Result<bool> {
    let mode = parse_mode(&args.mode)?;
    let target: CadlagDensity = match (&args.preset, &args.density) {
        (Some(name), None) => match name.as_str() {
            "ramp" => presets::ramp(),
            "parabola" => presets::parabola(),
            "two-level-ramp" => presets::two_level_ramp(),
            other => {
                return Err(anyhow!(CoreError::Argument(format!(
                    "unknown preset {other:?}"
                ))))
            }
        },
        (None, Some(path)) => CadlagDensity::Step(read_density(path)?),
        _ => {
            return Err(anyhow!(CoreError::Argument(
                "provide exactly one of --preset or --density".into()
            )))
        }
    };
    let n_list: Vec<u64> = args
        .n_list
        .split(',')
        .map(|s| s.trim().parse::<u64>().context("parsing --n-list"))
        .collect::<anyhow::Result<_>>()?;
    let report = approx::realize_and_compare(&target, &n_list, mode)?;

    let mut csv = String::from(
        "n,H,m,d_n,sup_dist,L1_dist,max_lefts_per_component,max_rights_per_component\n",
    );
    let mut all_ok = true;
    for row in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.n,
            fmt_rat(&row.period_factor),
            row.block_count,
            fmt_rat(&row.spacing),
            fmt_rat(&row.sup_dist),
            fmt_rat(&row.l1_dist),
            row.max_lefts,
            row.max_rights
        ));
        let n = rat(row.n as i64, 1);
        let sup_ok = row.sup_dist <= rat(2, 1) / (&n * target.t_end());
        let l1_ok = row.l1_dist <= rat(2, 1) / &n;
        all_ok &= sup_ok && l1_ok && row.spacing_in_interval && !row.cap_bound;
    }
    let csv_path = out_dir.join("approx.csv");
    std::fs::write(&csv_path, csv).context("writing approx.csv")?;
    write_manifest(
        out_dir,
        "approx",
        json!({
            "preset": args.preset,
            "density": args.density.as_ref().map(|p| p.display().to_string()),
            "n_list": n_list,
            "mode": mode.as_str(),
        }),
        &[csv_path],
    )?;
    println!(
        "approx: {} levels, all bounds hold: {}",
        report.rows.len(),
        all_ok
    );
    Ok(all_ok)
}

/// Floats in Monte Carlo CSVs carry 17 significant digits.
fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_mix(args: &MixArgs, out_dir: &Path) -> anyhow::Result<bool> {
    let spec = MixingProcessSpec {
        kernel_width: args.w,
        innovations: InnovationLaw::parse(&args.innovations)?,
        grid_step: args.h,
        seed: args.seed,
    };
    let run = simulate_mixing_tau(&spec, args.window, args.paths, args.bins)?;

    let mut csv = String::from("bin_lo,bin_hi,mass\n");
    for (j, m) in run.law.bin_masses.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{}\n",
            f17(run.law.bin_edges[j]),
            f17(run.law.bin_edges[j + 1]),
            f17(*m)
        ));
    }
    let csv_path = out_dir.join(format!("{}_bins.csv", args.out));
    std::fs::write(&csv_path, csv).context("writing bins CSV")?;

    let band = uniformity_band(&run.law, args.eps)?;
    let scaled: Vec<f64> = run.taus.clone();
    let ks = ks_statistic_uniform(&scaled, args.window);
    let t = args.window;
    let cond = conditional_uniformity(&run.law, 0.2 * t, 0.3 * t, 0.5 * t, 0.8 * t)?;
    let proxy = atom_proxy(&run.sup_values);
    let summary = json!({
        "schema_version": io::SCHEMA_VERSION,
        "T": t,
        "w": args.w,
        "h": args.h,
        "n_paths": args.paths,
        "n_bins": args.bins,
        "innovations": args.innovations,
        "seed": args.seed,
        "eps": args.eps,
        "band_statistic": band,
        "ks_tau_over_t": ks,
        "conditional": {
            "a": 0.2 * t, "a_inner": 0.3 * t, "b_inner": 0.5 * t, "b": 0.8 * t,
            "p_hat": cond.p_hat,
            "ci_low": cond.ci_low,
            "ci_high": cond.ci_high,
            "reference": (0.5 - 0.3) / (0.8 - 0.2),
        },
        "atom_proxy": proxy,
        "warning": run.warning,
    });
    let summary_path = write_json(out_dir, &format!("{}_summary.json", args.out), &summary)?;
    write_manifest(
        out_dir,
        "mix",
        json!({
            "T": t, "w": args.w, "h": args.h, "paths": args.paths, "bins": args.bins,
            "innovations": args.innovations, "seed": args.seed, "eps": args.eps,
        }),
        &[csv_path, summary_path],
    )?;
    println!("mix: band {band:.4}, KS {ks:.4}, conditional {:.4}", cond.p_hat);
    Ok(true)
}

struct CheckList {
    checks: Vec<(String, bool)>,
}

impl CheckList {
    fn new() -> Self {
        CheckList { checks: Vec::new() }
    }

    fn push(&mut self, name: &str, ok: bool) {
        println!("{}: {}", name, if ok { "PASS" } else { "FAIL" });
        self.checks.push((name.to_string(), ok));
    }

    fn all_ok(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn cmd_verify(args: &BuildArgs, out_dir: &Path) -> anyhow::Result<bool> {
    let mode = parse_mode(&args.mode)?;
    let f = read_density(&args.density)?;
    let t_end = f.t_end().clone();
    let mut checks = CheckList::new();

    let report = validate_density(&f);
    checks.push("density_admissible", report.admissible());
    checks.push("universal_bound_on_target", report.passes_universal_bound);

    let path = if report.is_uniform {
        checks.push("uniform_case_preset", true);
        Some(PiecewiseLinearPath::uniform_preset(&t_end)?)
    } else if report.admissible() {
        let h = choose_period(&f)?;
        let c = peel_blocks(&f, &h)?;
        let feas = feasibility(&c);
        checks.push("block_collection_feasible", feas.feasible());
        checks.push("peel_recompose_round_trip", recompose(&c)? == f);
        let (path, layout) = build_from_collection(&c, mode)?;
        match audit_path(&path, &layout, &c.spacing(), &t_end, mode) {
            Ok(_) => checks.push("path_audit", true),
            Err(_) => checks.push("path_audit", false),
        }
        let law = exact_law(&path, &t_end)?;
        checks.push("law_interior_matches_target", law.interior == f);
        checks.push("atom_identity", atom_identity_check(&law, &c));
        checks.push(
            "universal_bound_on_realized_interior",
            check_universal_bound(&law.interior),
        );
        Some(path)
    } else {
        None
    };

    if let Some(path) = &path {
        let law_long = exact_law(path, &t_end)?;
        let tuples = [
            (zero(), zero()),
            (&t_end / rat(5, 1), &t_end / rat(10, 1)),
            (&t_end / rat(5, 1), &t_end / rat(5, 1)),
            (&t_end * rat(2, 5), &t_end / rat(5, 1)),
        ];
        let mut mono_ok = true;
        let mut integral_ok = true;
        for (dw, ds) in &tuples {
            let law_short = exact_law(path, &(&t_end - dw))?;
            mono_ok &= check_window_monotonicity(
                &law_long.interior,
                &law_short.interior,
                &t_end,
                dw,
                ds,
            )?;
            integral_ok &= check_integral_inequality(
                &law_long.interior,
                &law_short.interior,
                &t_end,
                dw,
                ds,
                &zero(),
                &zero(),
            )?;
            let eps = (&t_end - dw) / rat(20, 1);
            integral_ok &= check_integral_inequality(
                &law_long.interior,
                &law_short.interior,
                &t_end,
                dw,
                ds,
                &eps,
                &eps,
            )?;
        }
        checks.push("window_monotonicity", mono_ok);
        checks.push("window_integral_inequality", integral_ok);
    }

    let doc = json!({
        "schema_version": io::SCHEMA_VERSION,
        "mode": mode.as_str(),
        "checks": checks
            .checks
            .iter()
            .map(|(name, ok)| json!({"name": name, "pass": ok}))
            .collect::<Vec<_>>(),
        "all_pass": checks.all_ok(),
    });
    let out = write_json(out_dir, "verify.json", &doc)?;
    write_manifest(
        out_dir,
        "verify",
        json!({"density": args.density.display().to_string(), "mode": mode.as_str()}),
        &[out],
    )?;
    Ok(checks.all_ok())
}
