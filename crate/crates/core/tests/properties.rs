mod common;

use common::{adjoint, eye, frob, gauss_inverse, matmul, M};
use gframe::controlled::{controlled_frame_operator, ControlOperator};
use gframe::corpus;
use gframe::decompose::{coisometry_image, decompose_three_gonb, decompose_two_gonb_combo};
use gframe::frame::{canonical_dual, classify, frame_bounds, frame_operator, induced_frame};
use gframe::io::{parse_instance, InstanceFile};
use gframe::kernel::{polar_decompose, spectral_range};
use gframe::multiplier::{
    invert_bessel_perturb, invert_dual_neumann, invert_mu_perturb, multiplier, multiplier_ordered, WeightSequence,
};
use gframe::random::{random_cmatrix, random_cvector, random_isometry, random_unit_vector, random_unitary, seeded};
use gframe::weighted::{weight_from_control, weighted_equivalence_suite};
use gframe::{CMatrix, CVector, GFrame, GFrame32};
use num_complex::{Complex32, Complex64};
use proptest::prelude::*;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e3..1e3f64,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(f64::MAX),
        Just(1.0 / 3.0),
        Just(5e-324),
    ]
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn polar_reconstructs(seed in any::<u64>(), rows in 1usize..=8, extra_rank_loss in 0usize..3) {
        let mut rng = seeded(seed);
        let cols = rng.random_range(1..=rows);
        let rank = cols.saturating_sub(extra_rank_loss).max(1);
        let a = matmul(&random_cmatrix(&mut rng, rows, rank), &random_cmatrix(&mut rng, rank, cols));
        let p = polar_decompose(&a).unwrap();
        let err = frob(&(matmul(&p.isometry, &p.positive) - &a));
        prop_assert!(err <= 1e-9 * (1.0 + frob(&a)), "residual {err:e}");
        prop_assert!(frob(&(matmul(&adjoint(&p.isometry), &p.isometry) - eye(cols))) <= 1e-9);
    }

    #[test]
    fn spectral_range_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = seeded(seed);
        let x = random_cmatrix::<f64, _>(&mut rng, n, n);
        let h = (&x + adjoint(&x)).scale(0.5);
        let u = random_unitary::<f64, _>(&mut rng, n);
        let (a, b) = spectral_range(&h).unwrap();
        let (c, d) = spectral_range(&matmul(&matmul(&adjoint(&u), &h), &u)).unwrap();
        prop_assert!((a - c).abs() <= 1e-9 && (b - d).abs() <= 1e-9);
    }

    #[test]
    fn g_onb_iff_unitary_stacking(seed in any::<u64>(), d in 1usize..=8, perturb in any::<bool>()) {
        let mut rng = seeded(seed);
        let p = if perturb { corpus::random_partition(&mut rng, d) } else { corpus::exact_partition(&mut rng, d) };
        let n: usize = p.iter().sum();
        let t = if n == d && !perturb {
            random_unitary::<f64, _>(&mut rng, d)
        } else {
            random_isometry::<f64, _>(&mut rng, n, d)
        };
        let f = GFrame::from_analysis(&t, &p).unwrap();
        let unitary = n == d && frob(&(matmul(&adjoint(&t), &t) - eye(d))) <= 1e-8;
        let report = classify(&f);
        prop_assert_eq!(report.is_g_onb, unitary);
        if report.is_g_onb {
            // <L_i^* g_i, L_j^* g_j> = delta_ij <g_i, g_j>
            let gs: Vec<_> = p.iter().map(|&k| random_cvector::<f64, _>(&mut rng, k)).collect();
            for (i, (bi, gi)) in f.blocks().iter().zip(&gs).enumerate() {
                for (j, (bj, gj)) in f.blocks().iter().zip(&gs).enumerate() {
                    let lhs = (adjoint(bi) * gi).dotc(&(adjoint(bj) * gj));
                    let rhs = if i == j { gi.dotc(gj) } else { Complex64::new(0.0, 0.0) };
                    prop_assert!((lhs - rhs).norm() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn canonical_dual_is_an_involution(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let p = corpus::random_partition(&mut rng, d);
        let f = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.3, 3.0);
        let back = canonical_dual(&canonical_dual(&f).unwrap()).unwrap();
        for (a, b) in f.blocks().iter().zip(back.blocks()) {
            prop_assert!(frob(&(a - b)) <= 1e-9);
        }
    }

    #[test]
    fn completeness_matches_sampled_minimum(seed in any::<u64>(), d in 1usize..=6, deficient in any::<bool>()) {
        let mut rng = seeded(seed);
        let p = corpus::random_partition(&mut rng, d);
        let mut t = random_cmatrix::<f64, _>(&mut rng, p.iter().sum(), d);
        if deficient {
            let v = random_unit_vector::<f64, _>(&mut rng, d);
            t = &t - &t * &v * v.adjoint();
        }
        let f = GFrame::from_analysis(&t, &p).unwrap();
        let s = common::frame_operator(&f);
        let mut best = f64::INFINITY;
        for _ in 0..2000 {
            let v = random_unit_vector::<f64, _>(&mut rng, d);
            best = best.min(v.dotc(&(&s * &v)).re);
        }
        let witness = common::lambda_min(&s);
        let complete = classify(&f).is_g_complete;
        prop_assert_eq!(complete, witness.min(best) > 1e-10);
        prop_assert_eq!(complete, !deficient);
    }

    #[test]
    fn two_onb_combination_rejects_non_riesz(seed in any::<u64>(), d in 1usize..=6) {
        let mut rng = seeded(seed);
        let mut t = random_cmatrix::<f64, _>(&mut rng, d, d);
        t.column_mut(0).fill(Complex64::new(0.0, 0.0));
        let f = GFrame::from_analysis(&t, &corpus::exact_partition(&mut rng, d)).unwrap();
        prop_assert!(decompose_two_gonb_combo(&f).is_err());
        let p = corpus::random_partition(&mut rng, d);
        if p.iter().sum::<usize>() > d {
            let wide = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.5, 2.0);
            prop_assert!(decompose_two_gonb_combo(&wide).is_err());
        }
    }

    #[test]
    fn coisometry_image_is_parseval(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let p = corpus::exact_partition(&mut rng, d);
        let theta = GFrame::from_analysis(&random_unitary::<f64, _>(&mut rng, d), &p).unwrap();
        let d0 = rng.random_range(1..=d);
        let k = random_isometry::<f64, _>(&mut rng, d, d0).adjoint();
        let b = frame_bounds(&coisometry_image(&theta, &k).unwrap());
        prop_assert!((b.lower - 1.0).abs() <= 1e-9 && (b.upper - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn three_onb_scales_with_the_frame(seed in any::<u64>(), d in 1usize..=8, c in 0.01f64..100.0) {
        let mut rng = seeded(seed);
        let p = corpus::exact_partition(&mut rng, d);
        let f = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.3, 3.0);
        let a = decompose_three_gonb(&f).unwrap();
        let b = decompose_three_gonb(&f.scaled(c)).unwrap();
        prop_assert!((b.scalars[0].re - c * a.scalars[0].re).abs() <= 1e-10 * c * a.scalars[0].re);
        prop_assert!(b.reconstruction_residual <= 1e-9 * (1.0 + c * f.analysis_matrix().norm()));
    }

    #[test]
    fn inversions_agree_with_dense_solve(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let tol = 1e-12;
        let c = corpus::dual_neumann_case::<f64, _>(&mut rng, d);
        let (inv1, _) = invert_dual_neumann(&c.m, &c.l, &c.other, c.order, tol).unwrap();
        let m1 = multiplier_ordered(&c.m, &c.l, &c.other, c.order).unwrap();
        let c2 = corpus::bessel_perturb_case::<f64, _>(&mut rng, d);
        let (inv2, _) = invert_bessel_perturb(&c2.m, &c2.l, &c2.other, c2.order, tol).unwrap();
        let m2 = multiplier_ordered(&c2.m, &c2.l, &c2.other, c2.order).unwrap();
        let c3 = corpus::mu_perturb_case::<f64, _>(&mut rng, d);
        let (inv3, _) = invert_mu_perturb(&c3.m, &c3.l, &c3.other, c3.order, tol, None).unwrap();
        let m3 = multiplier_ordered(&c3.m, &c3.l, &c3.other, c3.order).unwrap();
        for (inv, mm) in [(inv1, m1), (inv2, m2), (inv3, m3)] {
            let direct = gauss_inverse(&mm).unwrap();
            prop_assert!(frob(&(inv - direct)) <= 1e-8);
        }
    }

    #[test]
    fn reversed_order_is_adjoint_with_conjugate_weights(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let p = corpus::random_partition(&mut rng, d);
        let l = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.5, 2.0);
        let t = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.5, 2.0);
        let m = corpus::complex_weights::<f64, _>(&mut rng, l.len(), 0.1, 2.0);
        let forward = multiplier(&m.conjugate(), &l, &t).unwrap();
        let reversed = multiplier(&m, &t, &l).unwrap();
        prop_assert!(frob(&(adjoint(&forward) - reversed)) <= 1e-12);
    }

    #[test]
    fn invertible_multiplier_makes_weighted_families_frames(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let p = corpus::random_partition(&mut rng, d);
        let l = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.5, 2.0);
        let t = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.5, 2.0);
        let m = corpus::complex_weights::<f64, _>(&mut rng, l.len(), 0.1, 2.0);
        let mm = multiplier(&m, &l, &t).unwrap();
        prop_assume!(gframe::kernel::min_singular_value(&mm) > 1e-6);
        prop_assert!(classify(&l.weighted(m.values()).unwrap()).is_g_frame);
        prop_assert!(classify(&t.weighted(m.values()).unwrap()).is_g_frame);
    }

    #[test]
    fn controlled_form_equals_operator_form(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let p = corpus::random_partition(&mut rng, d);
        let f = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.5, 2.0);
        let c = ControlOperator::new(corpus::conditioned_matrix(&mut rng, d, d, 0.5, 2.0)).unwrap();
        let sc = controlled_frame_operator(&f, &c).unwrap();
        let x = random_cvector::<f64, _>(&mut rng, d);
        let c_adj = adjoint(&c.matrix);
        let form: Complex64 = f.blocks().iter().map(|b| (b * &x).dotc(&(b * (&c_adj * &x)))).sum();
        prop_assert!((form - x.dotc(&(&sc * &x))).norm() <= 1e-10 * (1.0 + x.norm_squared() * sc.norm()));
    }

    #[test]
    fn extracted_weights_are_positive_and_semi_normalized(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let (f, c, expected) = corpus::eigen_controlled_case::<f64, _>(&mut rng, d);
        let (w, is_multiplier) = weight_from_control(&f, &c).unwrap();
        prop_assert!(is_multiplier && w.is_real());
        let (lo, hi) = w.semi_norm_bounds().unwrap();
        prop_assert!(lo > 0.0 && hi.is_finite());
        for (g, e) in w.values().iter().zip(&expected) {
            prop_assert!(g.re > 0.0 && (g.re - e).abs() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn induced_statements_ignore_the_block_basis(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let f = assorted(&mut rng, d);
        let rebased = f.map_blocks(|_, b| matmul(&random_unitary::<f64, _>(&mut rng, b.nrows()), b)).unwrap();
        let induced = induced_frame(&f).frame_operator() - induced_frame(&rebased).frame_operator();
        let direct = frame_operator(&f) - frame_operator(&rebased);
        prop_assert!(common::max_abs(&induced) <= 1e-12 && common::max_abs(&direct) <= 1e-12);
        let (a, b) = (classify(&f), classify(&rebased));
        prop_assert_eq!(
            [a.is_g_frame, a.is_tight, a.is_parseval, a.is_g_complete, a.is_g_riesz, a.is_g_onb],
            [b.is_g_frame, b.is_tight, b.is_parseval, b.is_g_complete, b.is_g_riesz, b.is_g_onb]
        );
    }

    #[test]
    fn riesz_inequality_on_finite_subsets(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = seeded(seed);
        let p = corpus::exact_partition(&mut rng, d);
        let f = corpus::conditioned_gframe::<f64, _>(&mut rng, d, &p, 0.3, 3.0);
        let (lo, hi) = classify(&f).riesz_bounds.expect("square frame is g-Riesz");
        for _ in 0..10 {
            let mut synth = CVector::<f64>::zeros(d);
            let mut energy = 0.0;
            for b in f.blocks() {
                if rng.random_bool(0.5) {
                    let g = random_cvector::<f64, _>(&mut rng, b.nrows());
                    synth += adjoint(b) * &g;
                    energy += g.norm_squared();
                }
            }
            let s = synth.norm_squared();
            prop_assert!(lo * energy * (1.0 - 1e-9) <= s && s <= hi * energy * (1.0 + 1e-9) + 1e-14);
        }
    }

    #[test]
    fn equivalence_holds_for_sampled_alternative_weights(seed in any::<u64>(), d in 1usize..=6, deficient in any::<bool>()) {
        let mut rng = seeded(seed);
        let mut f = assorted(&mut rng, d);
        if deficient {
            f = f.map_blocks(|_, b| {
                let mut b = b.clone();
                b.column_mut(0).fill(Complex64::new(0.0, 0.0));
                b
            }).unwrap();
        }
        let w = corpus::sign_definite_weights(&mut rng, f.len(), 0.1, 10.0, false);
        let truth = classify(&f).is_g_frame;
        for _ in 0..10 {
            let w_alt = corpus::sign_definite_weights(&mut rng, f.len(), 0.1, 10.0, false);
            let v = weighted_equivalence_suite(&f, &w, &w_alt).unwrap();
            prop_assert!(v.unanimous() && v.as_array()[0] == truth, "{:?}", v.as_array());
        }
    }
}

fn assorted(rng: &mut gframe::random::DetRng, d: usize) -> GFrame<f64> {
    let p = corpus::random_partition(rng, d);
    let n: usize = p.iter().sum();
    let t = if rng.random_bool(0.5) {
        random_cmatrix(rng, n, d)
    } else {
        random_isometry(rng, n, d)
    };
    GFrame::from_analysis(&t, &p).unwrap()
}

fn instance_from(values: &[f64], d: usize, blocks: &[usize], with_weights: bool) -> InstanceFile<f64> {
    let mut it = values.iter().copied().cycle();
    let mut next = || Complex64::new(it.next().unwrap(), it.next().unwrap());
    let frame = GFrame::new(
        d,
        blocks.iter().map(|&k| CMatrix::from_fn(k, d, |_, _| next())).collect(),
    )
    .unwrap();
    let mut inst = InstanceFile::new(frame);
    if with_weights {
        inst.weights = Some(WeightSequence::new((0..blocks.len()).map(|_| next()).collect()).unwrap());
        inst.control = Some(M::from_fn(d, d, |_, _| next()));
    }
    inst
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn json_round_trip_is_exact(
        values in prop::collection::vec(finite(), 2..40),
        d in 1usize..=4,
        blocks in prop::collection::vec(1usize..=3, 1..=4),
        with_weights in any::<bool>(),
    ) {
        let inst = instance_from(&values, d, &blocks, with_weights);
        let text = inst.to_json();
        let back = parse_instance::<f64>(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn arbitrary_text_never_panics(text in ".{0,200}") {
        let _ = parse_instance::<f64>(&text);
    }
}

#[test]
fn single_precision_classification() {
    let mut rng = seeded(5);
    let t = random_isometry::<f32, _>(&mut rng, 5, 3);
    let f = GFrame32::from_analysis(&t, &[2, 3]).unwrap();
    let r = classify(&f);
    assert!(r.is_parseval && r.is_g_frame && !r.is_g_onb);
    let dual = canonical_dual(&f).unwrap();
    let diff = dual
        .blocks()
        .iter()
        .zip(f.blocks())
        .map(|(a, b)| (a - b).iter().map(|z: &Complex32| z.norm()).fold(0.0f32, f32::max))
        .fold(0.0f32, f32::max);
    assert!(diff < 1e-4, "Parseval frames are self-dual, diff {diff}");
}
