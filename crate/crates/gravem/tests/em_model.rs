mod common;

use common::*;
use gravem::em_model::*;
use gravem::tensor_core::*;
use proptest::prelude::*;
use rand::Rng;

const MBI: EmModel = EmModel::BornInfeld { beta: 1.0 };

fn lagrangian_loop(model: &EmModel, g: &Mat4, f: &TwoForm) -> f64 {
    let (f1, f2) = invariants_loop(g, &f.to_matrix());
    model.lagrangian(f1, f2).unwrap()
}

fn bump(f: &TwoForm, slot: usize, by: f64) -> TwoForm {
    let mut e = *f.entries();
    e[slot] += by;
    TwoForm::from_entries(e)
}

/// Worst `|N^# + ½∂²ℒ/∂F∂F − ½ℒ₂ε^#|` over pair slots with a central-difference Hessian.
fn hessian_residual(model: &EmModel, g: &MetricState, f: &TwoForm, step: f64) -> f64 {
    let n = big_n(model, g, f).unwrap().n_sharp;
    let gm = g.g_mat();
    let (f1, f2) = invariants(g, f);
    let l2 = model.jet(f1, f2).unwrap().l2;
    let mut worst: f64 = 0.0;
    for (a, &(mu, nu)) in FORM_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in FORM_PAIRS.iter().enumerate() {
            let lag = |sa: f64, sb: f64| lagrangian_loop(model, &gm, &bump(&bump(f, a, sa), b, sb));
            let hess = (lag(step, step) - lag(step, -step) - lag(-step, step) + lag(-step, -step))
                / (4.0 * step * step);
            let r = n[mu][nu][k][l] + 0.5 * hess - 0.5 * l2 * eps_up(&gm, [mu, nu, k, l]);
            worst = worst.max(r.abs());
        }
    }
    worst
}

#[test]
fn material_tensor_symmetries_hold_exactly() {
    let mut rng = rng(21);
    for _ in 0..500 {
        let g = random_metric(&mut rng, 0.3);
        let f = random_form(&mut rng, 0.4);
        for model in [EmModel::Maxwell, MBI] {
            let t = big_n(&model, &g, &f).unwrap();
            for r in symmetry_residuals(&t.n_sharp).into_iter().chain(symmetry_residuals(&t.n_triangle)) {
                assert!(r <= 1e-13, "{r}");
            }
        }
    }
}

#[test]
fn n_sharp_is_minus_half_hessian_modulo_volume_form() {
    let mut rng = rng(22);
    let g = random_metric(&mut rng, 0.2);
    let f = random_form(&mut rng, 0.4);
    let steps = [2e-2, 1e-2, 5e-3, 2.5e-3];
    let errs: Vec<f64> = steps.iter().map(|&h| hessian_residual(&MBI, &g, &f, h)).collect();
    let slope = loglog_slope(&steps, &errs);
    assert!((slope - 2.0).abs() <= 0.3, "slope {slope} {errs:?}");
    // Maxwell is quadratic in F, so the difference quotient is exact up to rounding.
    assert!(hessian_residual(&EmModel::Maxwell, &g, &f, 1e-2) < 1e-9);
}

#[test]
fn born_infeld_maxwell_tensor_deviates_cubically() {
    let mut rng = rng(23);
    let f0 = random_form(&mut rng, 1.0);
    let g = MetricState::minkowski();
    let amps: Vec<f64> = (0..6).map(|i| 0.2 * 0.5f64.powi(i)).collect();
    let errs: Vec<f64> = amps
        .iter()
        .map(|&a| {
            let f = f0.scale(a);
            maxwell_tensor(&MBI, &g, &f)
                .unwrap()
                .sub(&hodge_dual(&g, &f, Hodge::Curved))
                .max_abs()
        })
        .collect();
    let slope = loglog_slope(&amps, &errs);
    assert!((slope - 3.0).abs() <= 0.1, "slope {slope}");
}

#[test]
fn n_triangle_is_quadratic_in_metric_and_field() {
    let mut rng = rng(24);
    let h0 = random_sym(&mut rng, 1.0);
    let f0 = random_form(&mut rng, 1.0);
    let amps: Vec<f64> = (0..6).map(|i| 0.02 * 0.5f64.powi(i)).collect();
    let errs: Vec<f64> = amps
        .iter()
        .map(|&a| {
            let g = assemble_metric(&SymTensor4::zero(), &h0.scale(a)).unwrap();
            let t = big_n(&MBI, &g, &f0.scale(a)).unwrap();
            t.n_triangle.iter().flatten().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .collect();
    let slope = loglog_slope(&amps, &errs);
    assert!((slope - 2.0).abs() <= 0.1, "slope {slope}");
}

#[test]
fn stress_energy_matches_loop_oracle_and_maxwell_is_traceless() {
    let mut rng = rng(25);
    for _ in 0..1000 {
        let g = random_metric(&mut rng, 0.3);
        let f = random_form(&mut rng, 0.3);
        let gm = g.g_mat();
        let gi = inverse_gauss(&gm);
        let fm = f.to_matrix();
        let (f1, f2) = invariants_loop(&gm, &fm);
        for model in [EmModel::Maxwell, MBI] {
            let j = model.jet(f1, f2).unwrap();
            let t = stress_energy(&model, &g, &f).unwrap();
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut s = 0.0;
                    for k in 0..4 {
                        for l in 0..4 {
                            s += gi[k][l] * fm[mu][k] * fm[nu][l];
                        }
                    }
                    let oracle = -2.0 * j.l1 * s - f2 * j.l2 * gm[mu][nu] + gm[mu][nu] * j.l;
                    assert!((t.get(mu, nu) - oracle).abs() < 1e-12);
                }
            }
            if model.is_maxwell() {
                assert!(trace(&g, &t).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn dominant_energy_condition_holds_for_maxwell_and_born_infeld() {
    let mut rng = rng(26);
    for model in [EmModel::Maxwell, MBI] {
        let mut samples = 0;
        while samples < 10_000 {
            let g = random_metric(&mut rng, 0.1);
            let mut f = random_form(&mut rng, 1.0);
            f = f.scale(rng.gen_range(0.0..0.5) / f.max_abs());
            let r = dec_check(&model, &g, &f, 100, &mut rng).unwrap();
            assert!(r.min_t_xy >= -1e-12 && r.l1 < 0.0 && r.trace_condition <= 1e-14);
            samples += r.samples;
        }
    }
}

#[test]
fn constitutive_inversion_round_trips() {
    let mut rng = rng(27);
    for _ in 0..500 {
        let g = random_metric(&mut rng, 0.1);
        let b: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.2..0.2) / 3f64.sqrt());
        let d: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.2..0.2) / 3f64.sqrt());
        for model in [EmModel::Maxwell, MBI] {
            let inv = constitutive_invert(&model, &g, &b, &d).unwrap();
            assert!(inv.iterations <= INVERT_MAX_ITERATIONS);
            let f = TwoForm::from_electric_magnetic(&inv.e, &b);
            let m = maxwell_tensor(&model, &g, &f).unwrap();
            let s = field_split(&f, &m);
            for j in 0..3 {
                assert!((s.d[j] - d[j]).abs() <= 1e-12);
                assert!((s.h[j] - inv.h[j]).abs() <= 1e-12);
                assert_eq!(s.b[j], b[j]);
            }
        }
    }
}

#[test]
fn inversion_outside_born_infeld_domain_fails() {
    let r = constitutive_invert(&MBI, &MetricState::minkowski(), &[0.0; 3], &[5.0, 0.0, 0.0]);
    assert!(matches!(r, Err(EmError::NoConvergence { .. })), "{r:?}");
}

#[test]
fn maxwell_tensor_flat_equals_dual_for_random_fields() {
    let mut rng = rng(28);
    let g = MetricState::minkowski();
    for _ in 0..200 {
        let f = random_form(&mut rng, 1.0);
        let m = maxwell_tensor(&EmModel::Maxwell, &g, &f).unwrap();
        assert!(m.sub(&hodge_dual(&g, &f, Hodge::Minkowski)).max_abs() <= 1e-13);
    }
}

proptest! {
    #[test]
    fn split_recompose_round_trips(f in prop::array::uniform6(-1.0f64..1.0), m in prop::array::uniform6(-1.0f64..1.0)) {
        let (f, m) = (TwoForm::from_entries(f), TwoForm::from_entries(m));
        prop_assert_eq!(recompose(&field_split(&f, &m)), (f, m));
    }

    #[test]
    fn born_infeld_null_fields_act_like_maxwell(
        e in prop::array::uniform3(-0.5f64..0.5),
        axis in prop::array::uniform3(-1.0f64..1.0),
    ) {
        // B = n̂ × E with n̂ ⊥ E makes both invariants vanish.
        let en = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        prop_assume!(en > 1e-3);
        let dot = (axis[0] * e[0] + axis[1] * e[1] + axis[2] * e[2]) / (en * en);
        let n = [axis[0] - dot * e[0], axis[1] - dot * e[1], axis[2] - dot * e[2]];
        let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        prop_assume!(nn > 1e-3);
        let n = [n[0] / nn, n[1] / nn, n[2] / nn];
        let b = [n[1] * e[2] - n[2] * e[1], n[2] * e[0] - n[0] * e[2], n[0] * e[1] - n[1] * e[0]];
        let g = MetricState::minkowski();
        let f = TwoForm::from_electric_magnetic(&e, &b);
        let (f1, f2) = invariants(&g, &f);
        prop_assert!(f1.abs() < 1e-14 && f2.abs() < 1e-14);
        let mbi = maxwell_tensor(&MBI, &g, &f).unwrap();
        let max = maxwell_tensor(&EmModel::Maxwell, &g, &f).unwrap();
        prop_assert!(mbi.sub(&max).max_abs() <= 1e-12);
    }
}
