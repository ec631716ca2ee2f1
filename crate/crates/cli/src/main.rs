//! Batch front-end over the exact-bounds library.
//!
//! Exit codes: 0 all asserted verdicts pass, 2 a verdict failed, 64 usage
//! or input error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use realbez::bounds::{
    enumerate_admissible, sign_census_bound, structural_bound, subset_degree_bound,
    AdmissibleTuple, Profile,
};
use realbez::components::{count_components, sign_census, CountOptions};
use realbez::deform::{audit_family, InfSchedule};
use realbez::families::{block_grid_family, grid_family, FamilyInstance};
use realbez::formats;
use realbez::polyring::Interval;
use realbez_cli::report::RunReport;
use serde::Serialize;
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_OK: u8 = 0;
const EXIT_VERDICT: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "realbez",
    version,
    about = "Exact component-count bounds for real polynomial systems, \
             extremal family verification, sign censuses, and deformation audits"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a bound formula over a profile
    Bound(BoundArgs),
    /// Generate an extremal family, count its components, and check
    /// domination of the bound
    #[command(alias = "verify-family")]
    Verify(VerifyArgs),
    /// Count components / sign conditions of a system read from files
    Census(CensusArgs),
    /// Build approximating tuples for a profile and audit their structure
    #[command(name = "deform-audit")]
    DeformAudit(DeformAuditArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Write the full JSON report here
    #[arg(long, value_name = "PATH")]
    json: Option<std::path::PathBuf>,
    /// Seed for every pseudorandom construction (echoed in the report)
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct BoundArgs {
    /// Profile JSON file ({"k":..,"degs":[..],"dims":[..]})
    #[arg(long, value_name = "FILE")]
    profile: std::path::PathBuf,
    /// Which bound to evaluate
    #[arg(long, value_enum, default_value_t = BoundFormula::Components)]
    formula: BoundFormula,
    /// Family cardinality s (sign-census bound)
    #[arg(long)]
    s: Option<u64>,
    /// Family max degree d (sign-census bound)
    #[arg(long)]
    d: Option<u64>,
    /// Family degree list for the subset-degree bound, e.g. 2,3,5
    #[arg(long, value_name = "LIST")]
    pdegs: Option<String>,
    /// Rational base c of the asymptotic value c^k * sum
    #[arg(long, value_name = "P/Q", default_value = "1")]
    constant_base: String,
    #[command(flatten)]
    common: CommonArgs,
}

/// The three bound formulas the `bound` subcommand can evaluate.
#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum BoundFormula {
    /// Component count of the variety itself
    Components,
    /// Sign-condition census of a polynomial family on the variety
    Census,
    /// Per-subset degree envelopes of the family
    Subsets,
}

#[derive(Args)]
struct VerifyArgs {
    /// Family id: 11 (planar grid) or 15 (block grid)
    #[arg(long)]
    example: u32,
    /// Grid size d (family 11)
    #[arg(long)]
    d: Option<u64>,
    /// Ambient dimension k (family 15)
    #[arg(long)]
    k: Option<usize>,
    /// Dimension sequence k_0..k_ell, e.g. 2,1,0 (family 15)
    #[arg(long, value_name = "LIST")]
    dims: Option<String>,
    /// Degree sequence d_1..d_ell, e.g. 2,4 (family 15)
    #[arg(long, value_name = "LIST")]
    degs: Option<String>,
    /// Subdivision depth budget
    #[arg(long, default_value_t = 12)]
    depth: u32,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CensusArgs {
    /// System file in the term-per-line text format
    #[arg(long, value_name = "FILE")]
    system: std::path::PathBuf,
    /// Optional sign family file in the same format
    #[arg(long, value_name = "FILE")]
    pfamily: Option<std::path::PathBuf>,
    /// Box spec, one lo:hi range per axis, e.g. "-4:4,-4:4"
    #[arg(long = "box", value_name = "SPEC", allow_hyphen_values = true)]
    box_spec: String,
    /// Subdivision depth budget
    #[arg(long, default_value_t = 12)]
    depth: u32,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DeformAuditArgs {
    /// Profile JSON file
    #[arg(long, value_name = "FILE")]
    profile: std::path::PathBuf,
    /// Full tuple starting at k, e.g. 3,2,2; omit to sweep every
    /// admissible tuple
    #[arg(long, value_name = "LIST")]
    tau: Option<String>,
    /// Geometric ratio between consecutive infinitesimal levels
    #[arg(long, value_name = "P/Q", default_value = "1/1048576")]
    schedule_base: String,
    /// Square every input polynomial first (doubles effective degrees)
    #[arg(long)]
    square: bool,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    let outcome = match cli.cmd {
        Cmd::Bound(a) => cmd_bound(a, started),
        Cmd::Verify(a) => cmd_verify(a, started),
        Cmd::Census(a) => cmd_census(a, started),
        Cmd::DeformAudit(a) => cmd_deform_audit(a, started),
    };
    match outcome {
        Ok(report) => {
            let pass = report.all_pass();
            report.print_human();
            ExitCode::from(if pass { EXIT_OK } else { EXIT_VERDICT })
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load_profile(path: &std::path::Path) -> Result<Profile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    formats::parse_profile_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_base(text: &str) -> Result<BigRational, String> {
    formats::parse_rational(text).ok_or_else(|| format!("bad rational `{text}`"))
}

fn finish(mut report: RunReport, started: Instant, json: &Option<std::path::PathBuf>) -> Result<RunReport, String> {
    report.timing_ms = started.elapsed().as_millis();
    if let Some(path) = json {
        std::fs::write(path, report.to_json()).map_err(|e| format!("{}: {e}", path.display()))?;
        println!("report written to {}", path.display());
    }
    Ok(report)
}

fn cmd_bound(a: BoundArgs, started: Instant) -> Result<RunReport, String> {
    let profile = load_profile(&a.profile)?;
    let base = parse_base(&a.constant_base)?;
    let mut report = RunReport::new("bound", a.common.seed);
    report.profile = Some(profile.clone());
    match a.formula {
        BoundFormula::Components => {
            let r = structural_bound(&profile, &base).map_err(|e| e.to_string())?;
            report.bounds.insert("structural_sum".into(), r.structural_sum.to_string());
            report.bounds.insert("witness_term".into(), r.witness_term.to_string());
            report
                .bounds
                .insert("asymptotic_value".into(), rational_str(&r.asymptotic_value));
            report.flags.insert("hypothesis_violated".into(), r.hypothesis_violated);
            report.flags.insert("degenerate".into(), r.degenerate);
            println!("per-tuple terms (factor doubles as the branch-count bound):");
            for t in &r.per_tau_terms {
                println!(
                    "  tau={:?} factor={} degree_part={} term={}",
                    t.tau, t.factor, t.degree_part, t.term
                );
            }
            report.details = serde_json::to_value(&r).map_err(|e| e.to_string())?;
        }
        BoundFormula::Census => {
            let s = a.s.ok_or("--s is required for the sign-census bound")?;
            let d = a.d.ok_or("--d is required for the sign-census bound")?;
            let r = sign_census_bound(&profile, s, d, &base).map_err(|e| e.to_string())?;
            report.bounds.insert("delta".into(), r.delta.to_string());
            report.bounds.insert("envelope".into(), r.envelope.to_string());
            report.bounds.insert("structural_total".into(), r.structural_total.to_string());
            report
                .bounds
                .insert("asymptotic_value".into(), rational_str(&r.asymptotic_value));
            report.flags.insert("ladder_violated".into(), r.ladder_violated);
            report.flags.insert("degree_gap_violated".into(), r.degree_gap_violated);
            report.details = serde_json::to_value(&r).map_err(|e| e.to_string())?;
        }
        BoundFormula::Subsets => {
            let degs_txt = a.pdegs.ok_or("--pdegs is required for the subset-degree bound")?;
            let pdegs: Vec<u64> = formats::parse_tuple_list(&degs_txt)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|v| v as u64)
                .collect();
            if pdegs.len() > 16 {
                return Err("subset enumeration is limited to 16 polynomials".into());
            }
            let k_ell = *profile.dims.last().unwrap();
            let mut ladder = BigInt::one();
            for i in 1..=profile.ell() {
                ladder *= BigInt::from(profile.degs[i - 1])
                    .pow((profile.dims[i - 1] - profile.dims[i]) as u32);
            }
            let mut per_size: BTreeMap<usize, BigInt> = BTreeMap::new();
            let mut total = BigInt::from(0);
            for mask in 0u32..(1 << pdegs.len()) {
                let subset: Vec<u64> = (0..pdegs.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| pdegs[i])
                    .collect();
                let m = subset.len();
                if m > k_ell {
                    continue;
                }
                // the empty subset contributes its degenerate unit factor
                let b = subset_degree_bound(profile.k, k_ell, &subset);
                let v = b.to_integer();
                *per_size.entry(m).or_default() += &v;
                total += BigInt::from(4u32).pow(m as u32) * &v * &ladder;
            }
            for (m, v) in &per_size {
                report.bounds.insert(format!("subset_degree_sum_card_{m}"), v.to_string());
            }
            report.bounds.insert("structural_total".into(), total.to_string());
        }
    }
    finish(report, started, &a.common.json)
}

fn family_box(f: &FamilyInstance, pad: u64) -> Vec<Interval> {
    // smallest integer box [0, max root + pad] per axis
    let mut hi = 1i64;
    for z in &f.zero_points {
        for c in z {
            let v = c.to_integer();
            let as_i64: i64 = (&v).try_into().unwrap_or(i64::MAX);
            hi = hi.max(as_i64);
        }
    }
    (0..f.profile.k).map(|_| Interval::from_ints(0, hi + pad as i64)).collect()
}

#[derive(Serialize)]
struct OracleRecord {
    provenance: String,
    exact_count: String,
    zero_points: Vec<Vec<String>>,
}

fn cmd_verify(a: VerifyArgs, started: Instant) -> Result<RunReport, String> {
    let family = match a.example {
        11 => {
            let d = a.d.ok_or("--d is required for family 11")?;
            grid_family(d).map_err(|e| e.to_string())?
        }
        15 => {
            let k = a.k.ok_or("--k is required for family 15")?;
            let dims = formats::parse_tuple_list(
                &a.dims.ok_or("--dims is required for family 15")?,
            )
            .map_err(|e| e.to_string())?;
            let degs: Vec<u64> = formats::parse_tuple_list(
                &a.degs.ok_or("--degs is required for family 15")?,
            )
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|v| v as u64)
            .collect();
            block_grid_family(k, &dims, &degs).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown family id {other}: use 11 or 15")),
    };

    println!("# system ({})", family.provenance);
    print!("{}", formats::write_system(&family.system));
    println!();

    let mut report = RunReport::new("verify", a.common.seed);
    report.profile = Some(family.profile.clone());

    let bound = structural_bound(&family.profile, &BigRational::one())
        .map_err(|e| e.to_string())?;
    report.bounds.insert("structural_sum".into(), bound.structural_sum.to_string());
    report.flags.insert("hypothesis_violated".into(), bound.hypothesis_violated);

    let bx = family_box(&family, 1);
    let opts = CountOptions::with_structure(a.depth, family.structure.clone());
    let count = count_components(&family.system, &bx, &opts).map_err(|e| e.to_string())?;
    report.actuals.insert("closed_form_count".into(), family.exact_count.to_string());
    report
        .actuals
        .insert("counted_components".into(), count.exact.map_or_else(
            || format!("inexact:{}..{}", count.lower, count.upper),
            |n| n.to_string(),
        ));
    report.flags.insert("count_exact".into(), count.exact.is_some());

    let counted_ok = count.exact.map(BigInt::from) == Some(family.exact_count.clone());
    report.verdict(
        "counted components equal the closed form",
        counted_ok,
        &family.exact_count,
        count.exact.map_or_else(|| "inexact".to_string(), |n| n.to_string()),
    );
    report.verdict(
        "structural bound dominates the actual count",
        bound.structural_sum >= family.exact_count,
        &bound.structural_sum,
        &family.exact_count,
    );

    let oracle = OracleRecord {
        provenance: family.provenance.clone(),
        exact_count: family.exact_count.to_string(),
        zero_points: family
            .zero_points
            .iter()
            .map(|z| z.iter().map(|c| c.to_string()).collect())
            .collect(),
    };
    report.details = serde_json::to_value(&oracle).map_err(|e| e.to_string())?;
    finish(report, started, &a.common.json)
}

fn cmd_census(a: CensusArgs, started: Instant) -> Result<RunReport, String> {
    let system_text = std::fs::read_to_string(&a.system)
        .map_err(|e| format!("{}: {e}", a.system.display()))?;
    let system = formats::parse_system(&system_text)
        .map_err(|e| format!("{}: {e}", a.system.display()))?;
    let bx = formats::parse_box_spec(&a.box_spec).map_err(|e| e.to_string())?;
    let opts = CountOptions::with_depth(a.depth);
    let mut report = RunReport::new("census", a.common.seed);

    match &a.pfamily {
        None => {
            let r = count_components(&system, &bx, &opts).map_err(|e| e.to_string())?;
            report.actuals.insert("clusters".into(), r.upper.to_string());
            report.actuals.insert("certified".into(), r.lower.to_string());
            report
                .actuals
                .insert("exact".into(), r.exact.map_or("unset".into(), |n| n.to_string()));
            report.flags.insert("max_depth_exhausted".into(), r.max_depth_exhausted);
            println!("{r}");
        }
        Some(pf) => {
            let p_text = std::fs::read_to_string(pf)
                .map_err(|e| format!("{}: {e}", pf.display()))?;
            let p_family =
                formats::parse_system(&p_text).map_err(|e| format!("{}: {e}", pf.display()))?;
            let census =
                sign_census(&p_family, &system, &bx, &opts).map_err(|e| e.to_string())?;
            for (sigma, r) in &census.per_sigma {
                println!("sigma {sigma}: {r}");
                report.actuals.insert(format!("sigma {sigma}"), r.upper.to_string());
            }
            report.actuals.insert("total_upper".into(), census.total_upper.to_string());
            report.actuals.insert("total_lower".into(), census.total_lower.to_string());
            report
                .actuals
                .insert("ambiguous_cells".into(), census.ambiguous_cells.to_string());
            report.flags.insert("all_exact".into(), census.all_exact);
        }
    }
    finish(report, started, &a.common.json)
}

#[derive(Serialize)]
struct TupleRecord {
    index: String,
    equations: Vec<String>,
    inequality: Option<String>,
    rounded_degrees: bool,
    pass: bool,
}

fn cmd_deform_audit(a: DeformAuditArgs, started: Instant) -> Result<RunReport, String> {
    let profile = load_profile(&a.profile)?;
    let base = parse_base(&a.schedule_base)?;
    let sched = InfSchedule::geometric(profile.ell().max(1), &base)
        .map_err(|e| e.to_string())?;
    // squaring the inputs doubles every effective degree, including the
    // audit thresholds, so the audited profile is scaled accordingly
    let system = realbez::deform::synthesize_system(&profile, a.common.seed, a.square)
        .map_err(|e| e.to_string())?;
    let eff_profile = if a.square {
        Profile::new(
            profile.k,
            profile.degs.iter().map(|d| 2 * d).collect(),
            profile.dims.clone(),
        )
        .map_err(|e| e.to_string())?
    } else {
        profile.clone()
    };
    let mut report = RunReport::new("deform-audit", a.common.seed);
    report.profile = Some(profile.clone());
    report.flags.insert("square_inputs".into(), a.square);

    let tuples_to_run: Vec<AdmissibleTuple> = match &a.tau {
        Some(txt) => {
            let full = formats::parse_tuple_list(txt).map_err(|e| e.to_string())?;
            if full.first() != Some(&profile.k) {
                return Err(format!(
                    "tuple must start at k = {} (got {:?})",
                    profile.k, full
                ));
            }
            let tail = full[1..].to_vec();
            let level = tail.len();
            vec![AdmissibleTuple::new(tail, profile.k, &profile.dims[1..=level], false)
                .map_err(|e| e.to_string())?]
        }
        None => enumerate_admissible(
            profile.ell(),
            profile.k,
            profile.inner_dims(),
            false,
        )
        .map_err(|e| e.to_string())?,
    };

    let mut records = Vec::new();
    for tau in &tuples_to_run {
        let tuples = realbez::deform::approximating_tuples_for_system(
            &eff_profile,
            &system,
            tau,
            &sched,
            a.common.seed,
        )
        .map_err(|e| e.to_string())?;
        let fam = audit_family(&eff_profile, tau, &tuples);
        let full = tau.prepend_k(profile.k);
        println!(
            "tau {:?}: {} tuples (bound {}), audit {}",
            full,
            fam.tuples,
            fam.family_bound,
            if fam.pass { "PASS" } else { "FAIL" }
        );
        for (t, audit) in tuples.iter().zip(&fam.per_tuple) {
            println!("  index {}:", t.index);
            for (i, p) in t.p_tuple.iter().enumerate() {
                println!("    P[{i}] deg {} ({} terms)", p.degree(), p.num_terms());
            }
            if let Some(q) = &t.q_tuple {
                println!("    Q deg {} ({} terms)", q.degree(), q.num_terms());
            }
            for b in &audit.blocks {
                let verdict = if b.ok {
                    "ok"
                } else if b.ok_with_rounding && t.rounded_degrees {
                    "ok after even-rounding"
                } else {
                    "VIOLATED"
                };
                println!(
                    "    block {}: max deg {} vs {} [{verdict}]",
                    b.block, b.max_degree, b.threshold
                );
            }
            records.push(TupleRecord {
                index: t.index.to_string(),
                equations: t.p_tuple.iter().map(formats::write_polynomial).collect(),
                inequality: t.q_tuple.as_ref().map(formats::write_polynomial),
                rounded_degrees: t.rounded_degrees,
                pass: audit.pass,
            });
        }
        report.verdict(
            &format!("structure audit for tau {full:?}"),
            fam.pass,
            &fam.family_bound,
            fam.tuples,
        );
        report
            .bounds
            .insert(format!("branch_bound tau {full:?}"), fam.family_bound.to_string());
        report
            .actuals
            .insert(format!("branches tau {full:?}"), fam.tuples.to_string());
    }
    report.details = serde_json::to_value(&records).map_err(|e| e.to_string())?;
    finish(report, started, &a.common.json)
}

fn rational_str(v: &BigRational) -> String {
    if v.denom() == &BigInt::one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
