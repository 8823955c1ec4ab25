mod common;

use tubercle_core::postproc::{
    blt_along_chord, blt_extract, chord_weighted_average, parse_field_slice, percent_change, vorticity_slice, BltMode,
    BltSettings, FieldSlice, Plane, VortexSettings,
};

/// Blasius field on a section plane: u(x, y) = U f'(y √(U/νx)).
fn blasius_field(u_inf: f64, nu: f64, nx: usize, ny: usize, y_max: f64) -> FieldSlice {
    let prof = common::blasius_profile();
    let fp = |eta: f64| -> f64 {
        if eta >= prof.last().unwrap().0 {
            return 1.0;
        }
        let k = prof.partition_point(|p| p.0 <= eta).max(1) - 1;
        let (a, b) = (prof[k], prof[k + 1]);
        a.1 + (eta - a.0) / (b.0 - a.0) * (b.1 - a.1)
    };
    let xs: Vec<f64> = (1..=nx).map(|i| i as f64 / nx as f64).collect();
    let ys: Vec<f64> = (0..ny).map(|j| y_max * j as f64 / (ny - 1) as f64).collect();
    FieldSlice::from_fn(Plane::SectionZ(0.0), xs, ys, u_inf, |x, y| {
        [u_inf * fp(y * (u_inf / (nu * x)).sqrt()), 0.0, 0.0]
    })
    .unwrap()
}

#[test]
fn blasius_thickness_matches_similarity_law() {
    let (u, nu) = (1.0, 2e-5);
    let field = blasius_field(u, nu, 50, 1201, 0.12);
    let settings = BltSettings {
        mode: BltMode::Pointwise,
        ..Default::default()
    };
    let rep = blt_along_chord(&[field], 0.0, 1.0, &|_| 0.0, &settings).unwrap();
    assert_eq!(rep.rows.len(), 10);
    let mut last = 0.0;
    for row in &rep.rows {
        let x = row.x_c;
        let expected = 5.0 * x / (u * x / nu).sqrt();
        let d = row.outcome.delta().unwrap();
        assert!(common::rel(d, expected) <= 0.05, "x {x}: {d} vs {expected}");
        assert!(d > last, "thickness must grow downstream");
        last = d;
    }
}

#[test]
fn separated_flow_shows_a_thickness_jump() {
    // attached thin layer up to mid chord, reversed near-wall flow after it
    let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let ys: Vec<f64> = (0..=400).map(|j| 0.2 * j as f64 / 400.0).collect();
    let field = FieldSlice::from_fn(Plane::SectionZ(0.0), xs, ys, 1.0, |x, y| {
        let u = if x < 0.55 {
            (y / (0.005 + 0.01 * x)).tanh()
        } else {
            let h = 0.06;
            -0.2 * (1.0 - y / h).max(0.0) + (y / h).powi(2).min(1.0) * 1.2 * (y / (0.5 * h)).tanh().min(1.0)
        };
        [u.min(1.0), 0.0, 0.0]
    })
    .unwrap();
    let settings = BltSettings {
        mode: BltMode::Pointwise,
        ..Default::default()
    };
    let rep = blt_along_chord(&[field], 0.0, 1.0, &|_| 0.0, &settings).unwrap();
    let d: Vec<f64> = rep.rows.iter().map(|r| r.outcome.delta().unwrap()).collect();
    let jumps: Vec<f64> = d.windows(2).map(|w| w[1] / w[0]).collect();
    let (k, max) = jumps
        .iter()
        .enumerate()
        .fold((0, 0.0), |m, (i, &j)| if j > m.1 { (i, j) } else { m });
    assert!((rep.rows[k + 1].x_c - 0.6).abs() < 1e-9, "{d:?}");
    assert!(max > 2.0, "{d:?}");
}

#[test]
fn mass_weighting_uses_density_when_present() {
    let ys: Vec<f64> = (0..=40).map(|j| 0.05 * j as f64).collect();
    let zs: Vec<f64> = (0..=8).map(|k| -0.1 + 0.025 * k as f64).collect();
    let slice_at = |x: f64| {
        let mut s = String::from("x_m,y_m,z_m,u_mps,v_mps,w_mps,p_pa\n");
        for &y in &ys {
            for &z in &zs {
                s.push_str(&format!("{x},{y},{z},{},0,0,0\n", (y / 0.4f64).min(1.0)));
            }
        }
        parse_field_slice(&s, "t", 1.0).unwrap()
    };
    let slices = vec![slice_at(0.5), slice_at(0.6)];
    let area = blt_along_chord(&slices, 0.0, 1.0, &|_| 0.0, &BltSettings::default()).unwrap();
    assert_eq!(area.mode, BltMode::AreaWeighted);
    assert_eq!(area.rows.len(), 2);
    let dense: Vec<FieldSlice> = slices.into_iter().map(|s| FieldSlice { rho: Some(1.2), ..s }).collect();
    let mass = blt_along_chord(&dense, 0.0, 1.0, &|_| 0.0, &BltSettings::default()).unwrap();
    assert_eq!(mass.mode, BltMode::MassWeighted);
    assert!(mass.to_csv().contains("mass"));
}

#[test]
fn linear_profile_crossing() {
    let y: Vec<f64> = (0..=10).map(|i| 0.01 * i as f64).collect();
    let u: Vec<f64> = y.iter().map(|y| 5.0 * y / 0.1).collect();
    let d = blt_extract(&y, &u, 5.0, 0.99, 1.0).unwrap().delta().unwrap();
    assert!((d - 0.099).abs() < 1e-12);
}

#[test]
fn lamb_oseen_pair_is_found() {
    let g0 = 0.04;
    let slice = common::lamb_oseen_pair_slice(g0, 0.008, 0.05, 0.12, 241);
    let rep = vorticity_slice(&slice, &VortexSettings::for_pitch(0.25)).unwrap();
    assert_eq!(rep.cores.len(), 2);
    assert_eq!(rep.pair_count(), 1);
    for c in &rep.cores {
        assert!(common::rel(c.circulation.abs(), g0) <= 0.05, "{c:?}");
        assert_eq!(c.circulation.signum(), c.peak_omega.signum());
    }
    let total: f64 = rep.cores.iter().map(|c| c.circulation).sum();
    assert!(total.abs() <= 0.02 * g0);
    assert!(rep.pair_count() <= rep.cores.len() / 2);
}

#[test]
fn large_slice_ingests() {
    let mut s = String::from("x_m,y_m,z_m,u_mps,v_mps,w_mps\n");
    for i in 0..100 {
        for j in 0..100 {
            s.push_str(&format!("0.25,{},{},1,0,0\n", i as f64 * 0.01, j as f64 * 0.01));
        }
    }
    let slice = parse_field_slice(&s, "big", 1.0).unwrap();
    assert_eq!(slice.n_nodes(), 10_000);
}

#[test]
fn quoted_percent_changes() {
    assert!((percent_change(1.27 * 0.7, 0.7).unwrap() - 27.0).abs() < 1e-9);
    assert!((percent_change(0.833 * 0.7, 0.7).unwrap() + 16.7).abs() < 1e-9);
}

#[test]
fn chord_weighted_hand_example() {
    let v = chord_weighted_average(&[1.0, 2.0, 3.0], &[1.02, 1.0, 0.98]).unwrap();
    // (1.02 + 2.00 + 2.94) / 3.00
    assert!((v - 5.96 / 3.0).abs() < 1e-12);
    assert_eq!(chord_weighted_average(&[4.2], &[0.7]).unwrap(), 4.2);
}
