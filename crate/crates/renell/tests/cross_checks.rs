//! Cross-representation and cross-module identities: independent evaluation
//! routes for the same quantity must agree far more tightly than either
//! route's truncation tolerance.

mod common;

use common::*;
use renell::contour::{
    enclosed_residue_sum, integrate_h, residue_identity_check, wpt_boundary_integral,
    QuadratureSpec,
};
use renell::eval::Representation;
use renell::jacobi::{jacobi_fourier, jacobi_residue_identity, Direction};
use renell::qfactor::{
    dedekind_eta, euler_product_identity, modular_discriminant, q_product, verify_eta_quotient,
    wp_special_values, wpa, DiscriminantRoute,
};
use renell::weierstrass::{wp_from_wp_tilde, wp_lattice_sum};
use renell::{FunctionId, Lattice};

const STRIP_POINTS: [(f64, f64); 5] = [
    (0.17, 0.23),
    (-0.31, 0.11),
    (0.42, -0.37),
    (0.05, 0.44),
    (-0.08, -0.19),
];

#[test]
fn q_product_matches_series_for_quotient_functions() {
    for tau in [c64(0.0, 1.0), c64(0.3, 1.1)] {
        for (alpha, beta) in STRIP_POINTS {
            let z = c64(alpha, 0.0) + beta * tau;
            for fn_id in [FunctionId::Sd, FunctionId::Cd, FunctionId::Nd] {
                let series = jacobi_fourier(fn_id, z, tau, Direction::Dir1, 1e-13).unwrap();
                let product = q_product(fn_id, z, tau, 2000).unwrap();
                assert_close(
                    &format!("{} product vs series tau={tau} z={z}", fn_id.name()),
                    product.value,
                    series.value,
                    1e-10,
                );
            }
        }
    }
}

#[test]
fn q_product_matches_wpa_series() {
    for tau in [c64(0.0, 1.0), c64(0.3, 1.1)] {
        for (alpha, beta) in STRIP_POINTS {
            let z = c64(alpha, 0.0) + beta * tau;
            let series = wpa(z, tau, None, 1e-13).unwrap();
            let product = wpa(z, tau, Some(Representation::QProduct), 1e-13).unwrap();
            assert_close(
                &format!("wpa product vs series tau={tau} z={z}"),
                product.value,
                series.value,
                1e-10,
            );
        }
    }
}

#[test]
fn half_period_products_match_lattice_sums() {
    for o in oracles() {
        let (v1, v2, v3) = wp_special_values(o.tau, 1e-12).unwrap();
        assert_close("product route wpt(1/2)", v1, o.wpt_half, 1e-9);
        assert_close("product route wpt(tau/2)", v2, o.wpt_tauhalf, 1e-9);
        assert_close("product route wpt_{tau+1}((tau+1)/2)", v3, o.wpt_mixed, 1e-9);
    }
}

#[test]
fn eta_quotient_four_routes_agree() {
    for o in oracles() {
        let report = verify_eta_quotient(o.tau, 40).unwrap();
        assert!(
            report.abs_residual < 1e-10,
            "eta quotient routes spread {:.3e} at tau={}",
            report.abs_residual,
            o.tau
        );
    }
}

#[test]
fn discriminant_routes_cross_check() {
    for tau in [c64(0.0, 1.0), c64(0.0, 1.2), c64(0.3, 1.1)] {
        let a = modular_discriminant(tau, DiscriminantRoute::EtaPower, 1e-13).unwrap();
        let b = modular_discriminant(tau, DiscriminantRoute::WpTripleProduct, 1e-12).unwrap();
        assert_close("delta routes", a.value, b.value, 1e-9);
    }
}

#[test]
fn delta_equals_eta_to_the_24th() {
    for o in oracles() {
        let eta = dedekind_eta(o.tau, 1e-14).unwrap().value;
        let delta = modular_discriminant(o.tau, DiscriminantRoute::EtaPower, 1e-14)
            .unwrap()
            .value;
        assert_close("eta^24 vs delta", eta.powu(24), delta, 1e-11);
    }
}

#[test]
fn contour_integral_equals_residue_sum() {
    let quad = QuadratureSpec::default();
    for tau in [c64(0.0, 1.0), c64(0.5, 1.0)] {
        let lat = Lattice::from_tau(tau).unwrap();
        let z = c64(0.13, 0.0) + 0.07 * tau;
        for n in [2usize, 3] {
            let integral = integrate_h(n, z, &lat, &quad).unwrap();
            let residues = enclosed_residue_sum(&lat, z, n);
            assert_close(
                &format!("contour C_{n} vs residues, tau={tau}"),
                integral.value,
                residues,
                1e-8,
            );
        }
    }
}

#[test]
fn master_identity_spot_checks() {
    for tau in [c64(0.0, 1.0), c64(0.5, 1.0), c64(0.3, 1.1)] {
        for (alpha, beta) in [(0.0, 0.0), (0.21, 0.13), (-0.3, 0.25)] {
            let z = c64(alpha, 0.0) + beta * tau;
            let lat = Lattice::from_tau(tau).unwrap();
            let report = residue_identity_check(z, &lat, 60).unwrap();
            assert!(
                report.abs_residual < 1e-11,
                "master identity residual {:.3e} at z={z}, tau={tau}",
                report.abs_residual
            );
        }
    }
}

#[test]
fn wpt_cell_boundary_integral_vanishes() {
    for tau in [c64(0.0, 1.0), c64(0.3, 1.1)] {
        let lat = Lattice::from_tau(tau).unwrap();
        let base = -0.25 * lat.omega1() - 0.25 * lat.omega2();
        let ev = wpt_boundary_integral(&lat, base, 1e-11).unwrap();
        assert!(
            ev.value.norm() < 1e-7,
            "cell integral {} at tau={tau}",
            ev.value
        );
    }
}

#[test]
fn wp_recovered_from_wpt_at_random_points() {
    let mut r = rng(71);
    for tau in [c64(0.0, 1.0), c64(0.5, 1.0), c64(0.3, 1.1)] {
        let lat = Lattice::from_tau(tau).unwrap();
        let mut done = 0;
        while done < 12 {
            let alpha = uniform(&mut r, -0.45, 0.45);
            let beta = uniform(&mut r, -0.45, 0.45);
            let z = lat.from_frame(alpha, beta);
            if lat.lattice_distance(z) < 0.05 * lat.min_scale()
                || lat.star_distance(z) < 0.05 * lat.min_scale()
            {
                continue;
            }
            let direct = wp_lattice_sum(z, &lat, 1e-12).unwrap();
            let shifted = wp_from_wp_tilde(z, &lat, 1e-12).unwrap();
            assert_close("wp vs shifted wpt", shifted.value, direct.value, 1e-9);
            done += 1;
        }
    }
}

#[test]
fn sd_squared_equals_wpa_spot_checks() {
    for tau in [c64(0.0, 1.0), c64(0.5, 1.0), c64(0.3, 1.1)] {
        for (alpha, beta) in [(0.2, 0.1), (-0.15, 0.3), (0.4, -0.25)] {
            let z = c64(alpha, 0.0) + beta * tau;
            let sd = jacobi_fourier(FunctionId::Sd, z, tau, Direction::Dir1, 1e-13).unwrap();
            let pa = wpa(z, tau, None, 1e-13).unwrap();
            assert_close(
                &format!("SD^2 vs wpa at z={z}, tau={tau}"),
                sd.value * sd.value,
                pa.value,
                1e-10,
            );
        }
    }
}

#[test]
fn jacobi_directional_series_agree_at_probe() {
    for tau in [c64(0.0, 1.0), c64(0.5, 1.0)] {
        let z = c64(0.13, 0.0) + 0.21 * tau;
        for fn_id in ALL_JACOBI {
            let report = jacobi_residue_identity(fn_id, z, tau, 50).unwrap();
            assert!(
                report.rel_residual < 1e-9,
                "{}: dir1 vs dir2 residual {:.3e} at tau={tau}",
                fn_id.name(),
                report.rel_residual
            );
        }
    }
}

#[test]
fn euler_product_identity_small_q() {
    for theta in [0.0f64, 1.0, 2.5, 4.2] {
        let q = 0.3 * c64(theta.cos(), theta.sin());
        let report = euler_product_identity(q, 200);
        assert!(
            report.abs_residual < 1e-12,
            "Euler identity residual {:.3e} at q={q}",
            report.abs_residual
        );
    }
}
