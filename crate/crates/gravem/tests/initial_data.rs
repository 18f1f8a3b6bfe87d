mod common;

use common::loglog_slope;
use gravem::em_model::EmModel;
use gravem::grid::Grid;
use gravem::initial_data::*;
use gravem::tensor_core::{SymTensor4, TwoForm};

fn bump() -> DataFamily {
    DataFamily::MetricBump { amplitude: 0.05, width: 1.0 }
}

fn pulse(amplitude: f64) -> DataFamily {
    DataFamily::EmPulse { amplitude, width: 1.0, center: [0.0; 3] }
}

#[test]
fn trivial_family_is_flat_vacuum() {
    let grid = Grid::new(16, 4.0).unwrap();
    let rd = build_reduced(&DataFamily::Trivial.abstract_data(&grid), &EmModel::Maxwell).unwrap();
    assert!(rd.g0.iter().all(|g| *g == SymTensor4::minkowski()));
    assert!(rd.dtg0.iter().all(|g| *g == SymTensor4::zero()));
    assert!(rd.f0.iter().all(|f| *f == TwoForm::zero()));
    let gauge = gauge_residual_t0(&rd).unwrap();
    assert_eq!((gauge.sup, gauge.l2), (0.0, 0.0));
    let (db, dd) = em_constraints_t0(&rd);
    assert_eq!((db.sup, dd.sup), (0.0, 0.0));
}

#[test]
fn tail_only_lapse_at_radius_two() {
    // n = 16 on [−4, 4) puts (2, 0, 0) on the grid.
    let grid = Grid::new(16, 4.0).unwrap();
    let rd = build_reduced(&DataFamily::TailOnly { mass: 0.01 }.abstract_data(&grid), &EmModel::Maxwell).unwrap();
    let idx = grid.index(12, 8, 8);
    assert_eq!(grid.point(idx), [2.0, 0.0, 0.0]);
    assert!((rd.g0[idx].get(0, 0) + 0.99).abs() < 1e-15);
    assert!((rd.g0[idx].get(1, 1) - 1.01).abs() < 1e-15);
    // Only ∂_t g_{0j} can be nonzero, through the stencil derivatives of ḡ and A.
    assert_eq!(rd.dtg0[idx].get(0, 0), 0.0);
    for j in 1..4 {
        for k in j..4 {
            assert_eq!(rd.dtg0[idx].get(j, k), 0.0);
        }
    }
}

#[test]
fn lapse_collapse_is_reported() {
    let grid = Grid::new(16, 4.0).unwrap();
    let r = build_reduced(&DataFamily::TailOnly { mass: 2.0 }.abstract_data(&grid), &EmModel::Maxwell);
    assert!(matches!(r, Err(DataError::LapseCollapse { .. })), "{r:?}");
}

#[test]
fn isotropic_extrinsic_curvature_block() {
    let grid = Grid::new(16, 4.0).unwrap();
    let a = 0.03;
    let mut data = AbstractData::zero(grid);
    for s in [0, 3, 5] {
        data.k[s] = vec![a; grid.len()];
    }
    let rd = build_reduced(&data, &EmModel::Maxwell).unwrap();
    for dt in &rd.dtg0 {
        for j in 1..4 {
            assert!((dt.get(j, j) - 2.0 * a).abs() < 1e-16);
        }
        // A = 1 and tr K = 3a.
        assert!((dt.get(0, 0) + 6.0 * a).abs() < 1e-16);
    }
}

fn gauge_sup(family: DataFamily, n: usize, l: f64) -> f64 {
    let grid = Grid::new(n, l).unwrap();
    let rd = build_reduced(&family.abstract_data(&grid), &EmModel::Maxwell).unwrap();
    gauge_residual_t0(&rd).unwrap().sup
}

#[test]
fn metric_bump_gauge_converges_at_fourth_order() {
    let ns = [32usize, 48, 64];
    let l = 4.0;
    let sups: Vec<f64> = ns.iter().map(|&n| gauge_sup(bump(), n, l)).collect();
    let dxs: Vec<f64> = ns.iter().map(|&n| 2.0 * l / n as f64).collect();
    let order = loglog_slope(&dxs, &sups);
    assert!((order - 4.0).abs() <= 0.5, "order {order} {sups:?}");
}

#[test]
fn tail_only_gauge_is_at_truncation_level_where_cutoff_is_one() {
    // Outside r = 3/4 plus the stencil reach the tail is smooth and Γ converges at fourth order.
    let sup_outside = |n: usize| {
        let grid = Grid::new(n, 6.0).unwrap();
        let rd = build_reduced(&DataFamily::TailOnly { mass: 1e-3 }.abstract_data(&grid), &EmModel::Maxwell).unwrap();
        let gauge = gauge_residual_t0(&rd).unwrap();
        (0..grid.len())
            .filter(|&i| {
                let x = grid.point(i);
                (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt() >= 1.5
            })
            .fold(0.0f64, |m, i| (0..4).fold(m, |m, mu| m.max(gauge.values[mu][i].abs())))
    };
    let ns = [32usize, 48, 64];
    let sups: Vec<f64> = ns.iter().map(|&n| sup_outside(n)).collect();
    let dxs: Vec<f64> = ns.iter().map(|&n| 12.0 / n as f64).collect();
    let order = loglog_slope(&dxs, &sups);
    assert!(sups[2] < 1e-5 && order > 3.0, "order {order} {sups:?}");
}

#[test]
fn em_pulse_divergences_converge_at_fourth_order() {
    let l = 4.0;
    let ns = [32usize, 48, 64];
    let mut db = Vec::new();
    let mut dd = Vec::new();
    for &n in &ns {
        let grid = Grid::new(n, l).unwrap();
        let rd = build_reduced(&pulse(1e-3).abstract_data(&grid), &EmModel::Maxwell).unwrap();
        let (b, d) = em_constraints_t0(&rd);
        db.push(b.l2);
        dd.push(d.l2);
    }
    let dxs: Vec<f64> = ns.iter().map(|&n| 2.0 * l / n as f64).collect();
    for errs in [&db, &dd] {
        let order = loglog_slope(&dxs, errs);
        assert!((order - 4.0).abs() <= 0.5, "order {order} {errs:?}");
    }
}

#[test]
fn planted_linear_magnetic_field_has_unit_divergence() {
    let grid = Grid::new(16, 4.0).unwrap();
    let b = [grid.sample(|x| x[0]), grid.zeros(), grid.zeros()];
    let div = divergence(&grid, &b);
    for idx in 0..grid.len() {
        let ix = grid.ijk(idx)[0];
        if (2..grid.n - 2).contains(&ix) {
            assert!((div.values[0][idx] - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn born_infeld_pulse_inverts_and_stays_close_to_maxwell() {
    let grid = Grid::new(16, 4.0).unwrap();
    let data = pulse(0.05).abstract_data(&grid);
    let max = build_reduced(&data, &EmModel::Maxwell).unwrap();
    let bi = build_reduced(&data, &EmModel::BornInfeld { beta: 1.0 }).unwrap();
    let worst = max
        .f0
        .iter()
        .zip(&bi.f0)
        .fold(0.0f64, |m, (a, b)| m.max(a.sub(b).max_abs()));
    // The constitutive difference is cubic in the field.
    assert!(worst > 0.0 && worst < 1e-3, "{worst}");
}

#[test]
fn falloff_envelope_is_checked() {
    let grid = Grid::new(16, 4.0).unwrap();
    assert!(pulse(1e-3).abstract_data(&grid).check_falloff(1.0, 0.1).is_ok());
    let mut data = AbstractData::zero(grid);
    data.k[0] = vec![1.0; grid.len()];
    assert!(matches!(
        data.check_falloff(1.0, 0.1),
        Err(DataError::FalloffViolation { field: "K", .. })
    ));
}

#[test]
fn build_is_deterministic() {
    let grid = Grid::new(16, 4.0).unwrap();
    let data = bump().abstract_data(&grid);
    assert_eq!(
        build_reduced(&data, &EmModel::Maxwell).unwrap(),
        build_reduced(&data, &EmModel::Maxwell).unwrap()
    );
}

