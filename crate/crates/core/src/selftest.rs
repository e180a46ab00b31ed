//! A randomized property corpus over every module at small dimension.
//!
//! Each property draws its own deterministic stream from the run seed, so
//! properties run in parallel and a failure is reproducible from
//! `(seed, property, trial)`.

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use crate::controlled::{
    controlled_bound_arithmetic, controlled_bounds, controlled_equivalence, true_ranges, verify_commutation,
    ControlOperator,
};
use crate::corpus::{self, InversionCase};
use crate::decompose::{
    coisometry_image, combination_is_g_riesz, decompose_gonb_plus_griesz, decompose_three_gonb,
    decompose_two_gonb_combo, decompose_two_parseval,
};
use crate::frame::{
    canonical_dual, classify, frame_bounds, frame_operator, gframe_from_vector_frame, induced_frame, GFrame,
};
use crate::generate::{generate, GeneratorKind};
use crate::io::parse_instance;
use crate::kernel::{
    identity, inverse, isometry_defect, op_norm, polar_decompose, psd_sqrt, spectral_range, unitarity_defect,
    unitary_pair_from_contraction, unitary_triple_from_small_norm,
};
use crate::multiplier::{
    invert_bessel_perturb, invert_canonical_dual, invert_dual_mu_perturb, invert_dual_neumann, invert_mu_perturb,
    invert_via_bijection, multiplier, multiplier_norm_bound, weighted_family_lower_bound, MultiplierCertificate, Side,
    WeightSequence,
};
use crate::random::{random_cmatrix, random_isometry, random_unitary, seeded, uniform, DetRng};
use crate::scalar::CMatrix;
use crate::weighted::{
    induced_weighted_frame, weight_from_control, weighted_bounds, weighted_dual, weighted_equivalence_suite,
    weighted_multiplier_as_frame_operator,
};

type Check = std::result::Result<(), String>;
type Property = fn(&mut DetRng, usize) -> Check;

#[derive(Debug, Clone, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub max_dim: usize,
    pub properties: Vec<PropertyOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.failures == 0)
    }
}

pub const MAX_DIM: usize = 6;

const PROPERTIES: [(&str, Property); 13] = [
    ("kernel.unitary_pair_triple", unitary_pair_triple),
    ("kernel.polar_and_sqrt", polar_and_sqrt),
    ("frame.induced_bridge", induced_bridge),
    ("frame.canonical_dual_bounds", canonical_dual_bounds),
    ("decompose.five_decompositions", five_decompositions),
    ("decompose.riesz_combinations", riesz_combinations),
    ("multiplier.flattening_and_norm", flattening_and_norm),
    ("multiplier.inversions", inversions),
    ("multiplier.invertible_lower_bound", invertible_lower_bound),
    ("controlled.equivalence", controlled_props),
    ("weighted.identities", weighted_props),
    ("io.round_trip", round_trip),
    ("io.generator_certification", generator_certification),
];

pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|(n, _)| *n).collect()
}

/// Runs every property `trials` times with dimensions cycling through `1..=6`.
pub fn run_selftest(seed: u64, trials: usize) -> SelftestReport {
    let properties = std::thread::scope(|scope| {
        let handles: Vec<_> = PROPERTIES
            .iter()
            .enumerate()
            .map(|(index, &(name, prop))| {
                scope.spawn(move || {
                    let mut rng = seeded(seed.wrapping_mul(1_000_003).wrapping_add(index as u64));
                    let mut failures = 0;
                    let mut first_failure = None;
                    for trial in 0..trials {
                        let d = 1 + trial % MAX_DIM;
                        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| prop(&mut rng, d)))
                            .unwrap_or_else(|_| Err("panicked".into()));
                        if let Err(msg) = outcome {
                            failures += 1;
                            first_failure.get_or_insert(format!("trial {trial} (d = {d}): {msg}"));
                        }
                    }
                    PropertyOutcome {
                        name,
                        trials,
                        failures,
                        first_failure,
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("property threads catch their panics"))
            .collect()
    });
    SelftestReport {
        seed,
        max_dim: MAX_DIM,
        properties,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_frame(rng: &mut DetRng, d: usize) -> GFrame<f64> {
    let p = corpus::random_partition(rng, d);
    corpus::conditioned_gframe(rng, d, &p, 0.5, 2.0)
}

fn square_frame(rng: &mut DetRng, d: usize) -> GFrame<f64> {
    let p = corpus::exact_partition(rng, d);
    corpus::conditioned_gframe(rng, d, &p, 0.5, 2.0)
}

fn unitary_pair_triple(rng: &mut DetRng, d: usize) -> Check {
    let n = d + rng.random_range(0..=1);
    let a = random_cmatrix::<f64, _>(rng, n, n);
    let a = a.unscale(op_norm(&a)).scale(uniform(rng, 0.0, 1.0));
    let (u1, u2) = ok(unitary_pair_from_contraction(&a))?;
    let recon = ((&u1 + &u2).scale(0.5) - &a).norm();
    let unit = unitarity_defect(&u1).max(unitarity_defect(&u2));
    ensure(recon <= 1e-9 && unit <= 1e-9, || {
        format!("pair: recon {recon:e}, unitarity {unit:e}")
    })?;
    let small = a.scale(uniform::<f64, _>(rng, 0.0, 0.999) / 3.0);
    let (v1, v2, v3) = ok(unitary_triple_from_small_norm(&small))?;
    let recon = ((&v1 + &v2 + &v3).unscale(3.0) - &small).norm();
    let unit = unitarity_defect(&v1)
        .max(unitarity_defect(&v2))
        .max(unitarity_defect(&v3));
    ensure(recon <= 1e-9 && unit <= 1e-9, || {
        format!("triple: recon {recon:e}, unitarity {unit:e}")
    })
}

fn polar_and_sqrt(rng: &mut DetRng, d: usize) -> Check {
    let rows = d + rng.random_range(0..=2);
    let a = random_cmatrix::<f64, _>(rng, rows, d);
    let p = ok(polar_decompose(&a))?;
    let recon = (&p.isometry * &p.positive - &a).norm();
    let iso = isometry_defect(&p.isometry);
    ensure(recon <= 1e-10 * (1.0 + a.norm()) && iso <= 1e-10, || {
        format!("polar: recon {recon:e}, isometry {iso:e}")
    })?;
    let m = a.adjoint() * &a;
    let r = ok(psd_sqrt(&m))?;
    let err = (&r * &r - &m).norm();
    ensure(err <= 1e-9 * (1.0 + m.norm()), || format!("sqrt residual {err:e}"))
}

fn induced_bridge(rng: &mut DetRng, d: usize) -> Check {
    let f = if rng.random_bool(0.8) {
        random_frame(rng, d)
    } else {
        // rank deficient: every block kills the last coordinate
        let p = corpus::random_partition(rng, d);
        let mut t = random_cmatrix::<f64, _>(rng, p.iter().sum(), d);
        t.column_mut(d - 1).fill(Complex::new(0.0, 0.0));
        ok(GFrame::from_analysis(&t, &p))?
    };
    let vf = induced_frame(&f);
    let diff = (frame_operator(&f) - vf.frame_operator()).camax();
    ensure(diff <= 1e-12, || format!("frame operators differ by {diff:e}"))?;
    let ones = vec![1; vf.vectors.len()];
    let g = classify(&f);
    let v = classify(&ok(gframe_from_vector_frame(&vf, &ones))?);
    let a = [g.is_g_bessel, g.is_g_frame, g.is_tight, g.is_parseval, g.is_g_complete];
    let b = [v.is_g_bessel, v.is_g_frame, v.is_tight, v.is_parseval, v.is_g_complete];
    ensure(a == b, || format!("predicates {a:?} vs {b:?}"))
}

fn canonical_dual_bounds(rng: &mut DetRng, d: usize) -> Check {
    let f = random_frame(rng, d);
    let b = frame_bounds(&f);
    let db = frame_bounds(&ok(canonical_dual(&f))?);
    let e1 = (db.lower - 1.0 / b.upper).abs() * b.upper;
    let e2 = (db.upper - 1.0 / b.lower).abs() * b.lower;
    ensure(e1 <= 1e-9 && e2 <= 1e-9, || format!("relative errors {e1:e}, {e2:e}"))
}

fn five_decompositions(rng: &mut DetRng, d: usize) -> Check {
    let label = |name: &'static str| move |e: crate::Error| format!("{name}: {e}");
    let sq = square_frame(rng, d);
    decompose_three_gonb(&sq).map_err(label("three g-ONB"))?;
    decompose_two_gonb_combo(&sq).map_err(label("two g-ONB"))?;
    decompose_gonb_plus_griesz(&sq).map_err(label("g-ONB plus g-Riesz"))?;
    decompose_two_parseval(&random_frame(rng, d)).map_err(label("two Parseval"))?;
    let p = corpus::exact_partition(rng, d);
    let theta = ok(GFrame::from_analysis(&random_unitary::<f64, _>(rng, d), &p))?;
    let d0 = rng.random_range(1..=d);
    let k = random_isometry::<f64, _>(rng, d, d0).adjoint();
    let image = coisometry_image(&theta, &k).map_err(label("co-isometry"))?;
    ensure(classify(&image).is_parseval, || {
        "co-isometry image is not Parseval".into()
    })
}

fn riesz_combinations(rng: &mut DetRng, d: usize) -> Check {
    let p = corpus::exact_partition(rng, d);
    let u = ok(GFrame::from_analysis(&random_unitary::<f64, _>(rng, d), &p))?;
    let g = ok(GFrame::from_analysis(&random_unitary::<f64, _>(rng, d), &p))?;
    let b_mod: f64 = uniform(rng, 0.5, 2.0);
    let a_mod = b_mod * uniform::<f64, _>(rng, 0.05, 0.9);
    let a = Complex::from_polar(a_mod, uniform(rng, 0.0, std::f64::consts::TAU));
    let b = Complex::from_polar(b_mod, uniform(rng, 0.0, std::f64::consts::TAU));
    ensure(ok(combination_is_g_riesz(a, &u, b, &g))?, || {
        format!("|a| = {a_mod}, |b| = {b_mod}")
    })
}

fn flattening_and_norm(rng: &mut DetRng, d: usize) -> Check {
    let l = random_frame(rng, d);
    let t = ok(GFrame::from_analysis(
        &random_cmatrix(rng, l.total_dim(), d),
        &l.partition(),
    ))?;
    let m = corpus::complex_weights(rng, l.len(), 0.1, 2.0);
    let mm = ok(multiplier(&m, &l, &t))?;
    let (vl, vt) = (induced_frame(&l), induced_frame(&t));
    let mut flat = CMatrix::<f64>::zeros(d, d);
    for ((a, b), (i, _)) in vl.vectors.iter().zip(&vt.vectors).zip(&vl.indices) {
        flat += (a * b.adjoint()).map(|z| z * m.values()[*i]);
    }
    let diff = (&mm - flat).camax();
    ensure(diff <= 1e-12, || format!("flattened multiplier differs by {diff:e}"))?;
    let bound = ok(multiplier_norm_bound(&m, &l, &t))?;
    let norm = op_norm(&mm);
    ensure(norm <= bound * (1.0 + 1e-12), || {
        format!("norm {norm} above bound {bound}")
    })
}

fn check_inverse(
    name: &str,
    case: &InversionCase<f64>,
    order_applied: bool,
    result: crate::Result<(CMatrix<f64>, MultiplierCertificate<f64>)>,
) -> Check {
    let (inv, cert) = result.map_err(|e| format!("{name}: {e}"))?;
    let mm = if order_applied {
        ok(crate::multiplier::multiplier_ordered(
            &case.m,
            &case.l,
            &case.other,
            case.order,
        ))?
    } else {
        ok(multiplier(&case.m, &case.l, &case.other))?
    };
    let residual = (&mm * &inv - identity::<f64>(mm.nrows())).norm();
    ensure(residual <= 1e-8, || format!("{name}: residual {residual:e}"))?;
    let norm = op_norm(&ok(inverse(&mm))?);
    ensure(cert.bracket_contains(norm, 1e-9 * norm), || {
        format!(
            "{name}: |M^-1| = {norm} outside [{}, {}]",
            cert.inverse_norm_lower, cert.inverse_norm_upper
        )
    })
}

fn inversions(rng: &mut DetRng, d: usize) -> Check {
    let tol = 1e-13;
    let c = corpus::bijection_case(rng, d);
    check_inverse(
        "bijection",
        &c,
        false,
        invert_via_bijection(&c.m, &c.l, c.g.as_ref().expect("set")),
    )?;
    let c = corpus::dual_neumann_case(rng, d);
    check_inverse(
        "dual-neumann",
        &c,
        true,
        invert_dual_neumann(&c.m, &c.l, &c.other, c.order, tol),
    )?;
    let c = corpus::canonical_case(rng, d);
    check_inverse("canonical", &c, true, invert_canonical_dual(&c.m, &c.l, c.order, tol))?;
    let c = corpus::bessel_perturb_case(rng, d);
    check_inverse(
        "bessel-perturb",
        &c,
        true,
        invert_bessel_perturb(&c.m, &c.l, &c.other, c.order, tol),
    )?;
    let c = corpus::mu_perturb_case(rng, d);
    check_inverse(
        "mu-perturb",
        &c,
        true,
        invert_mu_perturb(&c.m, &c.l, &c.other, c.order, tol, None),
    )?;
    let c = corpus::dual_mu_case(rng, d);
    let dual = c.dual.as_ref().expect("set");
    check_inverse(
        "dual-mu",
        &c,
        true,
        invert_dual_mu_perturb(&c.m, &c.l, dual, &c.other, c.order, tol, None),
    )
}

fn invertible_lower_bound(rng: &mut DetRng, d: usize) -> Check {
    let c = corpus::bessel_perturb_case::<f64, _>(rng, d);
    for (side, fam) in [
        (Side::WeightedFirst, c.l.weighted(c.m.values())),
        (Side::WeightedSecond, c.other.weighted(c.m.values())),
    ] {
        let claimed = ok(weighted_family_lower_bound(&c.m, &c.l, &c.other, side))?;
        let actual = frame_bounds(&ok(fam)?).lower;
        ensure(claimed <= actual * (1.0 + 1e-9), || {
            format!("{side:?}: claimed {claimed} > actual {actual}")
        })?;
    }
    Ok(())
}

fn controlled_props(rng: &mut DetRng, d: usize) -> Check {
    let f = random_frame(rng, d);
    let c = ok(ControlOperator::new(corpus::commuting_control(rng, &f)))?;
    let cb = ok(controlled_bounds(&f, &c))?;
    ensure(cb.is_controlled_frame, || "commuting control not certified".into())?;
    let (holds, defect) = ok(verify_commutation(&f, &c))?;
    ensure(holds && defect <= 1e-8, || format!("commutation defect {defect:e}"))?;
    let (lhs, rhs) = ok(controlled_equivalence(&f, &c))?;
    ensure(lhs && rhs, || format!("commuting instance verdicts ({lhs}, {rhs})"))?;

    let b = frame_bounds(&f);
    let (mc, big_mc) = c.bounds.expect("self-adjoint");
    let derived = ok(controlled_bound_arithmetic(
        cb.m_cl,
        cb.big_m_cl,
        b.lower,
        b.upper,
        mc,
        big_mc,
    ))?;
    let [s, cr, scr] = ok(true_ranges(&f, &c))?;
    let inside = |(lo, hi): (f64, f64), (dlo, dhi): (f64, f64)| lo >= dlo * (1.0 - 1e-9) && hi <= dhi * (1.0 + 1e-9);
    ensure(
        inside(s, derived.frame_operator) && inside(cr, derived.control) && inside(scr, derived.controlled_operator),
        || "derived bound intervals do not contain the spectra".into(),
    )?;

    let other = ok(ControlOperator::new(corpus::generic_positive_control(rng, d)))?;
    let (lhs, rhs) = ok(controlled_equivalence(&f, &other))?;
    ensure(lhs == rhs, || format!("generic control verdicts ({lhs}, {rhs})"))
}

fn weighted_props(rng: &mut DetRng, d: usize) -> Check {
    let f = random_frame(rng, d);
    let w = corpus::sign_definite_weights::<f64, _>(rng, f.len(), 0.5, 2.0, false);
    let wb = ok(weighted_bounds(&f, &w))?;
    let vb = ok(ok(induced_weighted_frame(&f, &w))?.bounds())?;
    let gap = (wb.lower - vb.lower).abs().max((wb.upper - vb.upper).abs());
    ensure(gap <= 1e-12 * (1.0 + wb.upper), || {
        format!("weighted bound gap {gap:e}")
    })?;

    let (ef, ec, expected) = corpus::eigen_controlled_case::<f64, _>(rng, d);
    let (got, is_mult) = ok(weight_from_control(&ef, &ec))?;
    let werr = got
        .values()
        .iter()
        .zip(&expected)
        .map(|(g, e)| (g.re - e).abs())
        .fold(0.0, f64::max);
    ensure(is_mult && werr <= 1e-10, || {
        format!("recovery: is_multiplier {is_mult}, weight error {werr:e}")
    })?;

    let dual = ok(weighted_dual(&f, &w))?;
    let wf = ok(f.weighted(w.values()))?;
    let defect = ok(crate::frame::duality_defect(&wf, &dual))?;
    let (a, b) = w.semi_norm_bounds().expect("positive");
    let fb = frame_bounds(&f);
    let wfb = frame_bounds(&wf);
    ensure(
        defect <= 1e-10 && wfb.lower >= a * a * fb.lower * (1.0 - 1e-9) && wfb.upper <= b * b * fb.upper * (1.0 + 1e-9),
        || format!("weighted dual: defect {defect:e}"),
    )?;

    let (_, checks) = ok(weighted_multiplier_as_frame_operator(&f, &w))?;
    ensure(checks.all(), || format!("frame operator checks {checks:?}"))?;

    let g = if rng.random_bool(0.5) {
        f
    } else {
        let p = corpus::random_partition(rng, d);
        let mut t = random_cmatrix::<f64, _>(rng, p.iter().sum(), d);
        t.column_mut(0).fill(Complex::new(0.0, 0.0));
        ok(GFrame::from_analysis(&t, &p))?
    };
    let w = corpus::sign_definite_weights(rng, g.len(), 0.2, 5.0, false);
    let w_alt = corpus::sign_definite_weights(rng, g.len(), 0.2, 5.0, false);
    let v = ok(weighted_equivalence_suite(&g, &w, &w_alt))?;
    ensure(v.unanimous(), || format!("verdicts {:?}", v.as_array()))
}

fn round_trip(rng: &mut DetRng, d: usize) -> Check {
    let f = random_frame(rng, d);
    let mut inst = crate::io::InstanceFile::new(f.clone());
    if rng.random_bool(0.5) {
        inst.weights = Some(corpus::complex_weights(rng, f.len(), 0.1, 3.0));
    }
    if rng.random_bool(0.5) {
        inst.control = Some(random_cmatrix(rng, d, d));
    }
    if rng.random_bool(0.5) {
        inst.companion = Some(random_frame_like(rng, &f));
    }
    if rng.random_bool(0.5) {
        inst.payloads.mu = Some(uniform(rng, 0.0, 1.0));
        inst.payloads.w_alt = Some(WeightSequence::ones(f.len()));
    }
    let text = inst.to_json();
    let back = ok(parse_instance::<f64>(&text))?;
    ensure(back == inst, || "parse(serialize(x)) != x".into())
}

fn random_frame_like(rng: &mut DetRng, f: &GFrame<f64>) -> GFrame<f64> {
    GFrame::from_analysis(&random_cmatrix(rng, f.total_dim(), f.h_dim()), &f.partition()).expect("same shape")
}

fn generator_certification(rng: &mut DetRng, d: usize) -> Check {
    let kind = GeneratorKind::ALL[rng.random_range(0..GeneratorKind::ALL.len())];
    let partition = match kind {
        GeneratorKind::GOnb | GeneratorKind::GRiesz => corpus::exact_partition(rng, d),
        _ => corpus::random_partition(rng, d),
    };
    let seed = rng.random();
    let a = ok(generate::<f64>(kind, d, &partition, seed))?;
    let b = ok(generate::<f64>(kind, d, &partition, seed))?;
    ensure(a.to_json() == b.to_json(), || format!("{kind} not deterministic"))?;
    let r = classify(&a.frame);
    let _ = spectral_range(&frame_operator(&a.frame)).map_err(|e| e.to_string())?;
    ensure(r.is_g_frame, || format!("{kind} output is not a g-frame"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_passes() {
        let report = run_selftest(1, 12);
        for p in &report.properties {
            assert_eq!(p.failures, 0, "{}: {:?}", p.name, p.first_failure);
        }
        assert!(report.passed());
    }
}
