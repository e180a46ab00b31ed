//! The `gframe` command-line front end.
//!
//! [`run_command`] parses an argument vector, runs one operation per
//! instance and returns the rendered reports with the exit code: 0 when
//! everything verified, 2 when a mathematical hypothesis or check failed,
//! 3 for malformed input or usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde_json::Value;

use crate::controlled::{
    controlled_bound_arithmetic, controlled_bounds, controlled_equivalence, true_ranges, verify_commutation,
    ControlOperator, DerivedBounds,
};
use crate::decompose::{
    coisometry_image, decompose_gonb_plus_griesz, decompose_three_gonb, decompose_two_gonb_combo,
    decompose_two_parseval, GFrameDecomposition,
};
use crate::error::{Error, Result};
use crate::frame::{canonical_dual, classify, duality_defect, frame_bounds, verify_duality};
use crate::generate::{generate, GeneratorKind};
use crate::io::{parse_instance, InstanceFile};
use crate::kernel::{identity, inverse, min_singular_value, op_norm};
use crate::multiplier::{
    invert_bessel_perturb, invert_canonical_dual, invert_dual_mu_perturb, invert_dual_neumann, invert_mu_perturb,
    invert_via_bijection, multiplier, multiplier_norm_bound, multiplier_ordered, weighted_family_lower_bound,
    MultiplierCertificate, Order, Side, WeightSequence,
};
use crate::report::{digest, CertificateReport, Status};
use crate::selftest::run_selftest;
use crate::tol;
use crate::weighted::{
    induced_weighted_frame, weight_from_control, weighted_bounds, weighted_dual, weighted_equivalence_suite,
    weighted_multiplier_as_frame_operator,
};

#[derive(Debug, Parser)]
#[command(
    name = "gframe",
    version,
    about = "Verify, decompose and invert finite-dimensional g-frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Instance file, or a directory whose `*.json` files are processed in parallel
    #[arg(long = "in", global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Write the report (or generated instance) here instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Series tolerance for the Neumann inversions
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Seed for `generate` and `selftest`
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit plain text (default)
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Debug, Clone, Subcommand)]
enum Command {
    /// Optimal bounds and every classification predicate
    Classify,
    /// Canonical dual and its bounds
    Dual,
    /// Decompose into g-orthonormal bases or Parseval g-frames
    Decompose {
        #[arg(value_enum)]
        method: DecomposeMethod,
    },
    /// Build the multiplier `sum m_i L_i^* T_i` (weights default to 1, companion to the frame)
    Multiply,
    /// Invert a multiplier under one of the sufficient conditions
    Invert {
        #[arg(value_enum)]
        method: InvertMethod,
        /// Which family sits on the adjoint side
        #[arg(long, value_enum, default_value_t = OrderArg::FrameFirst)]
        order: OrderArg,
    },
    /// Checks for a g-frame controlled by the instance's `control` operator
    Controlled {
        #[arg(value_enum)]
        op: ControlledOp,
        /// For `arith`: m_CL,M_CL,m,M,m_C,M_C (otherwise read off the instance)
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        values: Option<Vec<f64>>,
    },
    /// Checks for the weighted family `{ w_i L_i }`
    Weighted {
        #[arg(value_enum)]
        op: WeightedOp,
    },
    /// Write a random certified instance
    Generate {
        #[arg(long, value_enum)]
        kind: GeneratorKind,
        #[arg(long)]
        dim: usize,
        /// Block sizes, e.g. `2,2`
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<usize>,
    },
    /// Run the randomized property corpus over all modules
    Selftest {
        /// Trials per property
        #[arg(long, default_value_t = 60)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DecomposeMethod {
    ThreeOnb,
    TwoOnb,
    TwoParseval,
    OnbPlusRiesz,
    Coisometry,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InvertMethod {
    Bijection,
    DualNeumann,
    Canonical,
    BesselPerturb,
    MuPerturb,
    DualMu,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    /// `sum m_i L_i^* T_i`
    FrameFirst,
    /// `sum m_i T_i^* L_i`
    CompanionFirst,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::FrameFirst => Order::LambdaTheta,
            OrderArg::CompanionFirst => Order::ThetaLambda,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ControlledOp {
    Bounds,
    Commute,
    Equiv,
    Arith,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightedOp {
    Bounds,
    Dual,
    Equiv,
    FromControl,
}

/// Everything a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn value_name<V: ValueEnum>(v: V) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

impl Command {
    fn operation(&self) -> String {
        match self {
            Command::Classify => "classify".into(),
            Command::Dual => "dual".into(),
            Command::Decompose { method } => format!("decompose {}", value_name(*method)),
            Command::Multiply => "multiply".into(),
            Command::Invert { method, .. } => format!("invert {}", value_name(*method)),
            Command::Controlled { op, .. } => format!("controlled {}", value_name(*op)),
            Command::Weighted { op } => format!("weighted {}", value_name(*op)),
            Command::Generate { .. } => "generate".into(),
            Command::Selftest { .. } => "selftest".into(),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, S>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandOutput {
                    exit_code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CommandOutput {
                    exit_code: Status::InputError.exit_code(),
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let (exit_code, body) = match &cli.command {
        Command::Generate { kind, dim, partition } => match generate::<f64>(*kind, *dim, partition, cli.seed) {
            Ok(inst) => (0, inst.to_json()),
            Err(e) => {
                let mut r = CertificateReport::new("generate");
                r.input("kind", kind.name())
                    .input("dim", *dim)
                    .input("partition", partition.clone())
                    .input("seed", cli.seed);
                r.record_error(&e);
                (r.exit_code(), render(&cli, &[r]))
            }
        },
        Command::Selftest { trials } => {
            let r = selftest_report(cli.seed, *trials);
            (r.exit_code(), render(&cli, &[r]))
        }
        Command::Controlled {
            op: ControlledOp::Arith,
            values: Some(values),
        } => {
            let r = timed("controlled arith", |r| arith_from_values(values, r));
            (r.exit_code(), render(&cli, &[r]))
        }
        _ => {
            let reports = run_on_input(&cli);
            let code = reports
                .iter()
                .map(|r| r.status)
                .max()
                .unwrap_or(Status::Verified)
                .exit_code();
            (code, render(&cli, &reports))
        }
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => CommandOutput {
                exit_code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => CommandOutput {
                exit_code: Status::InputError.exit_code(),
                stdout: String::new(),
                stderr: format!("cannot write {}: {e}\n", path.display()),
            },
        },
        None => CommandOutput {
            exit_code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

fn render(cli: &Cli, reports: &[CertificateReport]) -> String {
    if cli.json {
        let mut s = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            serde_json::to_string_pretty(reports).expect("plain data serializes")
        };
        s.push('\n');
        s
    } else {
        reports
            .iter()
            .map(CertificateReport::to_text)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn timed(operation: &str, f: impl FnOnce(&mut CertificateReport) -> Result<()>) -> CertificateReport {
    let mut r = CertificateReport::new(operation);
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(&mut r)));
    match outcome {
        Ok(Ok(())) => {}
        Ok(Err(e)) => {
            r.record_error(&e);
        }
        Err(_) => {
            r.status = Status::InputError;
            r.summary = "internal error".into();
            r.error = Some("operation panicked; the input is likely degenerate".into());
        }
    }
    r.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

fn run_on_input(cli: &Cli) -> Vec<CertificateReport> {
    let operation = cli.command.operation();
    let Some(path) = &cli.input else {
        let mut r = CertificateReport::new(operation);
        r.record_error(&Error::schema("--in", "this command needs an instance file"));
        return vec![r];
    };
    if path.is_dir() {
        let mut files: Vec<PathBuf> = match std::fs::read_dir(path) {
            Ok(entries) => entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect(),
            Err(e) => {
                let mut r = CertificateReport::new(operation);
                r.record_error(&Error::schema(path.display().to_string(), e.to_string()));
                return vec![r];
            }
        };
        files.sort();
        std::thread::scope(|scope| {
            let handles: Vec<_> = files.iter().map(|f| scope.spawn(|| run_on_file(cli, f))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("run_on_file catches panics"))
                .collect()
        })
    } else {
        vec![run_on_file(cli, path)]
    }
}

fn run_on_file(cli: &Cli, path: &Path) -> CertificateReport {
    let operation = cli.command.operation();
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            let mut r = CertificateReport::new(operation);
            r.source = Some(path.display().to_string());
            r.record_error(&Error::schema(path.display().to_string(), e.to_string()));
            return r;
        }
    };
    let mut r = timed(&operation, |r| {
        let text = std::str::from_utf8(&bytes).map_err(|e| Error::schema("$", format!("not UTF-8: {e}")))?;
        let inst = parse_instance::<f64>(text)?;
        r.input("h_dim", inst.frame.h_dim())
            .input("partition", inst.frame.partition());
        if let Some(label) = &inst.label {
            r.input("label", label.as_str());
        }
        execute(cli, &inst, r)
    });
    r.source = Some(path.display().to_string());
    r.instance_digest = Some(digest(&bytes));
    r
}

fn execute(cli: &Cli, inst: &InstanceFile<f64>, r: &mut CertificateReport) -> Result<()> {
    match &cli.command {
        Command::Classify => op_classify(inst, r),
        Command::Dual => op_dual(inst, r),
        Command::Decompose { method } => op_decompose(*method, inst, r),
        Command::Multiply => op_multiply(inst, r),
        Command::Invert { method, order } => op_invert(*method, (*order).into(), cli.tol, inst, r),
        Command::Controlled { op, .. } => op_controlled(*op, inst, r),
        Command::Weighted { op } => op_weighted(*op, inst, r),
        Command::Generate { .. } | Command::Selftest { .. } => unreachable!("handled without an instance"),
    }
}

fn required<'a, X>(value: Option<&'a X>, path: &str, op: &str) -> Result<&'a X> {
    value.ok_or_else(|| Error::schema(path, format!("required by {op}")))
}

fn complex_list(values: &[Complex<f64>]) -> Value {
    Value::from(values.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>())
}

fn op_classify(inst: &InstanceFile<f64>, r: &mut CertificateReport) -> Result<()> {
    let c = classify(&inst.frame);
    r.verdict("is_g_bessel", c.is_g_bessel)
        .verdict("is_g_frame", c.is_g_frame)
        .verdict("is_tight", c.is_tight)
        .verdict("is_parseval", c.is_parseval)
        .verdict("is_g_complete", c.is_g_complete)
        .verdict("is_g_riesz", c.is_g_riesz)
        .verdict("is_g_onb", c.is_g_onb)
        .interval("frame", c.bounds.lower, c.bounds.upper)
        .bound("rank", c.rank as f64);
    if let Some((lo, hi)) = c.riesz_bounds {
        r.interval("riesz", lo, hi);
    }
    let basis = if c.is_g_onb {
        ", g-ONB"
    } else if c.is_g_riesz {
        ", g-Riesz basis"
    } else {
        ""
    };
    r.summary = format!("{:?}{basis}", c.bounds.classification);
    Ok(())
}

fn op_dual(inst: &InstanceFile<f64>, r: &mut CertificateReport) -> Result<()> {
    let f = &inst.frame;
    let dual = canonical_dual(f)?;
    let b = frame_bounds(f);
    let db = frame_bounds(&dual);
    let defect = duality_defect(f, &dual)?;
    let is_dual = verify_duality(f, &dual)?;
    let rel = ((db.lower - 1.0 / b.upper).abs() * b.upper).max((db.upper - 1.0 / b.lower).abs() * b.lower);
    r.interval("frame", b.lower, b.upper)
        .interval("dual", db.lower, db.upper)
        .interval("dual_expected", 1.0 / b.upper, 1.0 / b.lower)
        .residual("duality", defect)
        .residual("dual_bounds_relative", rel)
        .verdict("is_dual", is_dual)
        .verdict("dual_bounds_match", rel <= 1e-9);
    r.summary = format!("canonical dual with bounds [{}, {}]", db.lower, db.upper);
    if !is_dual {
        r.fail("|sum D_i^* L_i - I|_F <= tau_dual", format!("defect {defect:e}"));
    }
    Ok(())
}

fn report_decomposition(d: &GFrameDecomposition<f64>, r: &mut CertificateReport) {
    r.input("scalars", complex_list(&d.scalars));
    r.input(
        "components",
        Value::from(d.component_kinds.iter().map(|k| k.name()).collect::<Vec<_>>()),
    );
    r.residual("reconstruction", d.reconstruction_residual);
    for (i, cert) in d.certificates.iter().enumerate() {
        r.interval(&format!("component_{i}"), cert.bounds.lower, cert.bounds.upper);
    }
    let kinds: Vec<_> = d.component_kinds.iter().map(|k| k.name()).collect();
    r.summary = format!("{} components: {}", kinds.len(), kinds.join(", "));
}

fn op_decompose(method: DecomposeMethod, inst: &InstanceFile<f64>, r: &mut CertificateReport) -> Result<()> {
    let f = &inst.frame;
    let d = match method {
        DecomposeMethod::ThreeOnb => decompose_three_gonb(f)?,
        DecomposeMethod::TwoOnb => decompose_two_gonb_combo(f)?,
        DecomposeMethod::TwoParseval => decompose_two_parseval(f)?,
        DecomposeMethod::OnbPlusRiesz => decompose_gonb_plus_griesz(f)?,
        DecomposeMethod::Coisometry => {
            let k = required(
                inst.payloads.coisometry.as_ref(),
                "$.payloads.coisometry",
                "decompose coisometry",
            )?;
            let image = coisometry_image(f, k)?;
            let c = classify(&image);
            r.input("image_h_dim", image.h_dim())
                .verdict("image_is_parseval", c.is_parseval)
                .interval("image", c.bounds.lower, c.bounds.upper)
                .residual("coisometry", (k * k.adjoint() - identity::<f64>(k.nrows())).norm());
            r.summary = format!("Parseval g-frame image on dimension {}", image.h_dim());
            return Ok(());
        }
    };
    report_decomposition(&d, r);
    Ok(())
}

fn weights_or_ones(inst: &InstanceFile<f64>) -> WeightSequence<f64> {
    inst.weights
        .clone()
        .unwrap_or_else(|| WeightSequence::ones(inst.frame.len()))
}

fn op_multiply(inst: &InstanceFile<f64>, r: &mut CertificateReport) -> Result<()> {
    let m = weights_or_ones(inst);
    let l = &inst.frame;
    let t = inst.companion.as_ref().unwrap_or(l);
    let mm = multiplier(&m, l, t)?;
    let norm = op_norm(&mm);
    let bound = multiplier_norm_bound(&m, l, t)?;
    r.input("weights", complex_list(m.values()))
        .input("companion", inst.companion.is_some())
        .bound("norm", norm)
        .bound("norm_bound", bound)
        .verdict("norm_within_bound", norm <= bound * (1.0 + 1e-12));
    let invertible = min_singular_value(&mm) > tol::RANK;
    r.verdict("invertible", invertible);
    if invertible {
        for (side, name, fam) in [
            (Side::WeightedFirst, "weighted_frame", l.weighted(m.values())?),
            (Side::WeightedSecond, "weighted_companion", t.weighted(m.values())?),
        ] {
            let claimed = weighted_family_lower_bound(&m, l, t, side)?;
            let actual = frame_bounds(&fam).lower;
            r.bound(&format!("{name}_lower_claimed"), claimed)
                .bound(&format!("{name}_lower_actual"), actual)
                .verdict(&format!("{name}_lower_bound_holds"), claimed <= actual * (1.0 + 1e-9));
        }
    }
    r.summary = format!("|M| = {norm} <= {bound}");
    if norm > bound * (1.0 + 1e-12) {
        r.fail("|M| <= sqrt(B_L B_T) |m|_inf", format!("|M| = {norm}, bound {bound}"));
    }
    Ok(())
}

fn op_invert(
    method: InvertMethod,
    order: Order,
    series_tol: f64,
    inst: &InstanceFile<f64>,
    r: &mut CertificateReport,
) -> Result<()> {
    let name = format!("invert {}", value_name(method));
    let op = name.as_str();
    let l = &inst.frame;
    let m = required(inst.weights.as_ref(), "$.weights", op)?;
    let companion = || required(inst.companion.as_ref(), "$.companion", op);
    r.input(
        "order",
        if order == Order::LambdaTheta {
            "frame-first"
        } else {
            "companion-first"
        },
    )
    .input("tol", series_tol)
    .input("weights", complex_list(m.values()));
    let (inv, cert, mm): (_, MultiplierCertificate<f64>, _) = match method {
        InvertMethod::Bijection => {
            let g = required(inst.payloads.bijection.as_ref(), "$.payloads.bijection", op)?;
            let (inv, cert) = invert_via_bijection(m, l, g)?;
            let t = l.map_blocks(|_, b| b * g)?;
            (inv, cert, multiplier(m, l, &t)?)
        }
        InvertMethod::DualNeumann => {
            let d = inst
                .payloads
                .dual
                .as_ref()
                .or(inst.companion.as_ref())
                .ok_or_else(|| Error::schema("$.payloads.dual", format!("required by {op}")))?;
            let (inv, cert) = invert_dual_neumann(m, l, d, order, series_tol)?;
            (inv, cert, multiplier_ordered(m, l, d, order)?)
        }
        InvertMethod::Canonical => {
            let (inv, cert) = invert_canonical_dual(m, l, order, series_tol)?;
            (inv, cert, multiplier_ordered(m, l, &canonical_dual(l)?, order)?)
        }
        InvertMethod::BesselPerturb => {
            let t = companion()?;
            let (inv, cert) = invert_bessel_perturb(m, l, t, order, series_tol)?;
            (inv, cert, multiplier_ordered(m, l, t, order)?)
        }
        InvertMethod::MuPerturb => {
            let t = companion()?;
            let (inv, cert) = invert_mu_perturb(m, l, t, order, series_tol, inst.payloads.mu)?;
            (inv, cert, multiplier_ordered(m, l, t, order)?)
        }
        InvertMethod::DualMu => {
            let d = required(inst.payloads.dual.as_ref(), "$.payloads.dual", op)?;
            let t = companion()?;
            let (inv, cert) = invert_dual_mu_perturb(m, l, d, t, order, series_tol, inst.payloads.mu)?;
            (inv, cert, multiplier_ordered(m, l, t, order)?)
        }
    };
    for (k, v) in &cert.hypothesis_values {
        r.hypothesis_value(k, *v);
    }
    let direct = inverse(&mm)?;
    let norm = op_norm(&direct);
    let contains = cert.bracket_contains(norm, 1e-9 * norm);
    r.input("construction", format!("{:?}", cert.construction))
        .input("series_terms", cert.series_terms_for_tol)
        .interval("inverse_norm_bracket", cert.inverse_norm_lower, cert.inverse_norm_upper)
        .bound("inverse_norm", norm)
        .residual("inversion", cert.residual)
        .residual("vs_direct", (&inv - &direct).norm())
        .verdict("bracket_contains_inverse_norm", contains);
    if let Some(q) = cert.contraction {
        r.hypothesis_value("contraction", q);
    }
    r.summary = format!(
        "inverse certified: |M^-1| = {norm} in [{}, {}], K = {}",
        cert.inverse_norm_lower, cert.inverse_norm_upper, cert.series_terms_for_tol
    );
    if !contains {
        r.fail(
            "inverse_norm_lower <= |M^-1| <= inverse_norm_upper",
            format!("|M^-1| = {norm}"),
        );
    }
    Ok(())
}

fn report_derived(d: &DerivedBounds<f64>, r: &mut CertificateReport) {
    r.interval("derived_frame_operator", d.frame_operator.0, d.frame_operator.1)
        .interval("derived_control", d.control.0, d.control.1)
        .interval(
            "derived_controlled_operator",
            d.controlled_operator.0,
            d.controlled_operator.1,
        );
}

fn arith_from_values(values: &[f64], r: &mut CertificateReport) -> Result<()> {
    let [m_cl, big_m_cl, m, big_m, m_c, big_m_c] = values else {
        return Err(Error::ShapeMismatch(format!(
            "--values needs six numbers m_CL,M_CL,m,M,m_C,M_C, got {}",
            values.len()
        )));
    };
    r.input("values", values.to_vec());
    let d = controlled_bound_arithmetic(*m_cl, *big_m_cl, *m, *big_m, *m_c, *big_m_c)?;
    report_derived(&d, r);
    r.summary = "derived bound intervals".into();
    Ok(())
}

fn op_controlled(op: ControlledOp, inst: &InstanceFile<f64>, r: &mut CertificateReport) -> Result<()> {
    let f = &inst.frame;
    let c_mat = required(inst.control.as_ref(), "$.control", "controlled")?;
    let c = ControlOperator::new(c_mat.clone())?;
    r.verdict("control_self_adjoint", c.is_self_adjoint)
        .verdict("control_positive", c.is_positive);
    match op {
        ControlledOp::Bounds => {
            let cb = controlled_bounds(f, &c)?;
            r.verdict("is_controlled_frame", cb.is_controlled_frame)
                .verdict("self_adjoint_form", !cb.non_self_adjoint_form);
            if cb.non_self_adjoint_form {
                r.summary = "form is not self-adjoint (C does not commute with S)".into();
                r.fail("S C^* = (S C^*)^*", "the controlled form takes non-real values");
            } else {
                r.interval("controlled", cb.m_cl, cb.big_m_cl);
                r.summary = format!("controlled bounds [{}, {}]", cb.m_cl, cb.big_m_cl);
                if !cb.is_controlled_frame {
                    r.fail("m_CL > 0", format!("m_CL = {}", cb.m_cl));
                }
            }
        }
        ControlledOp::Commute => {
            let (holds, defect) = verify_commutation(f, &c)?;
            r.verdict("commutes", holds).residual("commutation", defect);
            r.summary = format!("|S C^* - C S|_F = {defect:e}");
            if !holds {
                r.fail(
                    "|S C^* - C S|_F <= tau_comm (1 + |S| |C|)",
                    format!("defect {defect:e}"),
                );
            }
        }
        ControlledOp::Equiv => {
            let (lhs, rhs) = controlled_equivalence(f, &c)?;
            r.verdict("controlled", lhs)
                .verdict("g_frame_positive_commuting", rhs)
                .verdict("agree", lhs == rhs);
            r.summary = format!("controlled = {lhs}, g-frame with positive commuting C = {rhs}");
            if lhs != rhs {
                r.fail(
                    "controlled <=> g-frame with positive commuting C",
                    format!("{lhs} vs {rhs}"),
                );
            }
        }
        ControlledOp::Arith => {
            let cb = controlled_bounds(f, &c)?;
            if !cb.is_controlled_frame {
                r.fail("family is C-controlled", "no controlled bounds to derive from");
                return Ok(());
            }
            let b = frame_bounds(f);
            let (mc, big_mc) = c.bounds.ok_or(Error::NotSelfAdjoint)?;
            let d = controlled_bound_arithmetic(cb.m_cl, cb.big_m_cl, b.lower, b.upper, mc, big_mc)?;
            report_derived(&d, r);
            let [s, cr, scr] = true_ranges(f, &c)?;
            let inside =
                |(lo, hi): (f64, f64), (dlo, dhi): (f64, f64)| lo >= dlo * (1.0 - 1e-9) && hi <= dhi * (1.0 + 1e-9);
            let checks = [
                ("frame_operator_contained", inside(s, d.frame_operator)),
                ("control_contained", inside(cr, d.control)),
                ("controlled_operator_contained", inside(scr, d.controlled_operator)),
            ];
            for (k, v) in checks {
                r.verdict(k, v);
            }
            r.interval("frame_operator", s.0, s.1)
                .interval("control", cr.0, cr.1)
                .interval("controlled_operator", scr.0, scr.1);
            r.summary = "derived intervals contain the true spectra".into();
            if checks.iter().any(|(_, v)| !v) {
                r.summary = "containment failed".into();
                r.fail("true spectra inside derived intervals", "see verdicts");
            }
        }
    }
    Ok(())
}

fn op_weighted(op: WeightedOp, inst: &InstanceFile<f64>, r: &mut CertificateReport) -> Result<()> {
    let f = &inst.frame;
    if let WeightedOp::FromControl = op {
        let c_mat = required(inst.control.as_ref(), "$.control", "weighted from-control")?;
        let c = ControlOperator::new(c_mat.clone())?;
        let (w, is_mult) = weight_from_control(f, &c)?;
        r.input("recovered_weights", complex_list(w.values()))
            .verdict("control_is_multiplier", is_mult);
        r.summary = format!("recovered {} positive weights", w.len());
        if !is_mult {
            r.fail("C = M_(w, L, canonical dual)", "recovered weights do not reproduce C");
        }
        return Ok(());
    }
    let w = required(inst.weights.as_ref(), "$.weights", "weighted")?;
    r.input("weights", complex_list(w.values()));
    match op {
        WeightedOp::Bounds => {
            let wb = weighted_bounds(f, w)?;
            let vb = induced_weighted_frame(f, w)?.bounds()?;
            let gap = (wb.lower - vb.lower).abs().max((wb.upper - vb.upper).abs());
            let agree = gap <= 1e-12 * (1.0 + wb.upper);
            r.interval("weighted", wb.lower, wb.upper)
                .interval("induced_weighted", vb.lower, vb.upper)
                .residual("induced_gap", gap)
                .verdict("is_weighted_g_frame", wb.is_frame())
                .verdict("induced_bounds_agree", agree);
            if w.is_real() && w.values().iter().all(|z| z.re > 0.0) {
                let (_, checks) = weighted_multiplier_as_frame_operator(f, w)?;
                r.verdict("multiplier_is_frame_operator", checks.matches_frame_operator)
                    .verdict("multiplier_hermitian", checks.hermitian)
                    .verdict("multiplier_positive_definite", checks.positive_definite)
                    .residual("multiplier_vs_frame_operator", checks.defect);
            }
            r.summary = format!("weighted bounds [{}, {}]", wb.lower, wb.upper);
            if !agree {
                r.fail("induced weighted bounds = weighted bounds", format!("gap {gap:e}"));
            }
        }
        WeightedOp::Dual => {
            let dual = weighted_dual(f, w)?;
            let wf = f.weighted(w.values())?;
            let defect = duality_defect(&wf, &dual)?;
            let (a, b) = w.semi_norm_bounds().ok_or(Error::ZeroWeight { index: 0 })?;
            let fb = frame_bounds(f);
            let wfb = frame_bounds(&wf);
            let contained =
                wfb.lower >= a * a * fb.lower * (1.0 - 1e-9) && wfb.upper <= b * b * fb.upper * (1.0 + 1e-9);
            r.residual("duality", defect)
                .interval("weighted", wfb.lower, wfb.upper)
                .interval("predicted", a * a * fb.lower, b * b * fb.upper)
                .verdict("is_dual", defect <= 1e-10)
                .verdict("bounds_contained", contained);
            r.summary = format!("dual of the weighted family, duality residual {defect:e}");
            if defect > 1e-10 || !contained {
                r.fail(
                    "weighted dual reconstructs and bounds lie in [a^2 A, b^2 B]",
                    "see verdicts",
                );
            }
        }
        WeightedOp::Equiv => {
            let w_alt = inst
                .payloads
                .w_alt
                .clone()
                .unwrap_or_else(|| WeightSequence::ones(f.len()));
            let v = weighted_equivalence_suite(f, w, &w_alt)?;
            let names = [
                "is_g_frame",
                "multiplier_positive_invertible",
                "weighted_form_bounded_below",
                "sqrt_weighted_is_g_frame",
                "alt_multiplier_positive_invertible",
                "weighted_is_g_frame",
            ];
            for (n, b) in names.iter().zip(v.as_array()) {
                r.verdict(n, b);
            }
            r.verdict("unanimous", v.unanimous());
            r.summary = format!("six characterizations unanimous: {}", v.as_array()[0]);
            if !v.unanimous() {
                r.summary = "characterizations disagree".into();
                r.fail("all six characterizations agree", format!("{:?}", v.as_array()));
            }
        }
        WeightedOp::FromControl => unreachable!("handled above"),
    }
    Ok(())
}

fn selftest_report(seed: u64, trials: usize) -> CertificateReport {
    timed("selftest", |r| {
        let report = run_selftest(seed, trials);
        r.input("seed", seed)
            .input("trials_per_property", trials)
            .input("max_dim", report.max_dim);
        let mut failed = Vec::new();
        for p in &report.properties {
            r.verdict(p.name, p.failures == 0);
            if let Some(msg) = &p.first_failure {
                failed.push(format!("{}: {} failures, first {msg}", p.name, p.failures));
            }
        }
        let passed = report.properties.len() - failed.len();
        r.summary = format!("{passed}/{} properties passed", report.properties.len());
        if !failed.is_empty() {
            r.fail("every property holds on every trial", failed.join("; "));
        }
        Ok(())
    })
}
