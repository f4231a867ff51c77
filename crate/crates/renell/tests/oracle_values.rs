//! Frozen-value checks: every number here was computed independently with
//! multi-precision arithmetic from the defining series and products, then
//! truncated to f64. The library must reproduce each value through every
//! representation that covers the point.

mod common;

use common::*;
use renell::eval::Representation;
use renell::jacobi::{jacobi_fourier, Direction};
use renell::qfactor::{
    dedekind_eta, eta_quotient, modular_discriminant, wpa, DiscriminantRoute,
};
use renell::weierstrass::{
    wp, wp_from_wp_tilde, wp_lattice_sum, wp_tilde, wp_tilde_prime_rep,
};
use renell::{modular, Lattice};

const WPT_REPS: [Representation; 4] = [
    Representation::LatticeSum,
    Representation::FourierDir1,
    Representation::FourierDir2,
    Representation::SinInverseSquare,
];

#[test]
fn wpt_probe_all_representations() {
    for o in oracles() {
        let lat = Lattice::from_tau(o.tau).unwrap();
        let z = c64(0.2, 0.0) + 0.1 * o.tau;
        for rep in WPT_REPS {
            let ev = wp_tilde(z, &lat, Some(rep), 1e-12).unwrap();
            assert_close(
                &format!("wpt({z}) tau={} rep={}", o.tau, rep.name()),
                ev.value,
                o.wpt_probe,
                1e-10,
            );
        }
    }
}

#[test]
fn wpt_prime_probe_all_representations() {
    for o in oracles() {
        let lat = Lattice::from_tau(o.tau).unwrap();
        let z = c64(0.2, 0.0) + 0.1 * o.tau;
        for rep in WPT_REPS {
            let ev = wp_tilde_prime_rep(z, &lat, rep, 1e-12).unwrap();
            assert_close(
                &format!("wpt'({z}) tau={} rep={}", o.tau, rep.name()),
                ev.value,
                o.wpt_prime_probe,
                1e-10,
            );
        }
    }
}

#[test]
fn wpt_half_period_values() {
    for o in oracles() {
        let lat = Lattice::from_tau(o.tau).unwrap();
        let v1 = wp_tilde(c64(0.5, 0.0), &lat, None, 1e-12).unwrap().value;
        let v2 = wp_tilde(0.5 * o.tau, &lat, None, 1e-12).unwrap().value;
        assert_close("wpt(1/2)", v1, o.wpt_half, 1e-10);
        assert_close("wpt(tau/2)", v2, o.wpt_tauhalf, 1e-10);

        let shifted = Lattice::from_tau(o.tau + 1.0).unwrap();
        let v3 = wp_tilde(0.5 * (o.tau + 1.0), &shifted, None, 1e-12)
            .unwrap()
            .value;
        assert_close("wpt_{tau+1}((tau+1)/2)", v3, o.wpt_mixed, 1e-10);
    }
}

#[test]
fn wpt_quarter_point_square_is_imaginary() {
    let lat = Lattice::square();
    let want = c64(0.0, -6.875185818020372827490096);
    for rep in WPT_REPS {
        let ev = wp_tilde(c64(0.25, 0.25), &lat, Some(rep), 1e-12).unwrap();
        assert_close(
            &format!("wpt(1/4 + i/4) rep={}", rep.name()),
            ev.value,
            want,
            1e-10,
        );
    }
}

#[test]
fn wp_square_frozen_values() {
    let lat = Lattice::square();
    let e1 = c64(6.875185818020372827490096, 0.0);
    let probe = c64(-3.372103673735820125351285, -5.991418600455642395674668);

    let half = c64(0.5, 0.0);
    let zp = c64(0.2, 0.3);
    assert_close(
        "wp(1/2) lattice",
        wp_lattice_sum(half, &lat, 1e-12).unwrap().value,
        e1,
        1e-10,
    );
    assert_close(
        "wp(0.2+0.3i) lattice",
        wp_lattice_sum(zp, &lat, 1e-12).unwrap().value,
        probe,
        1e-10,
    );
    for rep in [Representation::FourierDir1, Representation::FourierDir2] {
        let ev = wp(zp, &lat, Some(rep), 1e-12).unwrap();
        assert_close(
            &format!("wp(0.2+0.3i) rep={}", rep.name()),
            ev.value,
            probe,
            1e-9,
        );
    }
    assert_close(
        "wp via wpt shift",
        wp_from_wp_tilde(zp, &lat, 1e-12).unwrap().value,
        probe,
        1e-9,
    );
}

#[test]
fn jacobi_probe_both_directions() {
    for o in oracles() {
        let z = c64(0.13, 0.0) + 0.21 * o.tau;
        for (k, fn_id) in ALL_JACOBI.iter().enumerate() {
            for dir in [Direction::Dir1, Direction::Dir2] {
                let ev = jacobi_fourier(*fn_id, z, o.tau, dir, 1e-13).unwrap();
                assert_close(
                    &format!("{} tau={} dir={:?}", fn_id.name(), o.tau, dir),
                    ev.value,
                    o.jacobi[k],
                    1e-10,
                );
            }
        }
    }
}

#[test]
fn jacobi_special_values_square() {
    use renell::FunctionId::{Cd, Dn, Nd, Sd, Sn};
    let tau = c64(0.0, 1.0);
    let half = c64(0.5, 0.0);
    let zero = c64(0.0, 0.0);
    let tol = 1e-10;

    let sd_half = jacobi_fourier(Sd, half, tau, Direction::Dir1, 1e-13).unwrap();
    let sn_half = jacobi_fourier(Sn, half, tau, Direction::Dir1, 1e-13).unwrap();
    let cd_zero = jacobi_fourier(Cd, zero, tau, Direction::Dir1, 1e-13).unwrap();
    assert_close("SD(1/2, i)", sd_half.value, c64(SD_HALF_SQUARE, 0.0), tol);
    assert_close("SN(1/2, i)", sn_half.value, c64(SD_HALF_SQUARE, 0.0), tol);
    assert_close("CD(0, i)", cd_zero.value, c64(SD_HALF_SQUARE, 0.0), tol);

    let dn_half = jacobi_fourier(Dn, half, tau, Direction::Dir1, 1e-13).unwrap();
    let nd_zero = jacobi_fourier(Nd, zero, tau, Direction::Dir1, 1e-13).unwrap();
    assert_close("DN(1/2, i)", dn_half.value, c64(DN_HALF_SQUARE, 0.0), tol);
    assert_close("ND(0, i)", nd_zero.value, c64(DN_HALF_SQUARE, 0.0), tol);

    let sd_tau_half = jacobi_fourier(Sd, 0.5 * tau, tau, Direction::Dir2, 1e-13).unwrap();
    assert_close(
        "SD(tau/2, i)",
        sd_tau_half.value,
        c64(0.0, SD_HALF_SQUARE),
        tol,
    );

    let sd_off = jacobi_fourier(Sd, c64(0.5, 0.3), tau, Direction::Dir1, 1e-13).unwrap();
    assert_close(
        "SD(1/2 + 0.3i, i)",
        sd_off.value,
        c64(SD_HALF_PLUS_03I_SQUARE, 0.0),
        tol,
    );

    let nd_tau_half = jacobi_fourier(Nd, 0.5 * tau, tau, Direction::Dir2, 1e-13).unwrap();
    assert!(
        nd_tau_half.value.norm() < 1e-10,
        "ND(tau/2, i) should vanish, got {}",
        nd_tau_half.value
    );
}

#[test]
fn eta_and_discriminant_values() {
    for o in oracles() {
        assert_close(
            "eta",
            dedekind_eta(o.tau, 1e-14).unwrap().value,
            o.eta,
            1e-12,
        );
        assert_close(
            "eta quotient",
            eta_quotient(o.tau, 1e-14).unwrap().value,
            o.eta_quotient,
            1e-11,
        );
        assert_close(
            "delta (eta power route)",
            modular_discriminant(o.tau, DiscriminantRoute::EtaPower, 1e-14)
                .unwrap()
                .value,
            o.delta,
            1e-11,
        );
    }
    assert_close(
        "eta(2i)",
        dedekind_eta(c64(0.0, 2.0), 1e-14).unwrap().value,
        c64(0.5923827813324158852903634, 0.0),
        1e-12,
    );
}

#[test]
fn wpa_half_square_three_routes() {
    let tau = c64(0.0, 1.0);
    let want = c64(0.04353762280267740184950770, 0.0);
    let series = wpa(c64(0.5, 0.0), tau, None, 1e-12).unwrap();
    let product = wpa(c64(0.5, 0.0), tau, Some(Representation::QProduct), 1e-12).unwrap();
    assert_close("wpa(1/2, i) series", series.value, want, 1e-10);
    assert_close("wpa(1/2, i) product", product.value, want, 1e-10);
    assert_close(
        "wpa(1/2, i) quotient",
        eta_quotient(tau, 1e-14).unwrap().value,
        want,
        1e-11,
    );
}

#[test]
fn modular_coefficient_table() {
    for o in oracles() {
        let lat = Lattice::from_tau(o.tau).unwrap();
        let c = modular::nu_coefficients(&lat, 1e-10).unwrap();
        assert_close("nu0", c.nu0, o.nu0, 1e-9);
        assert_close("nu2", c.nu2, o.nu2, 1e-9);
        assert_close("nu4", c.nu4, o.nu4, 1e-9);
        assert_close("a", c.a, o.a, 1e-9);
        assert_close("b", c.b, o.b, 1e-9);

        let d = modular::discriminant_tilde(&lat, 1e-10).unwrap();
        assert_close("delta_tilde", d.delta_tilde, o.delta_tilde, 1e-8);
        assert_close(
            "delta_tilde half-period route",
            d.half_period_route(),
            o.delta_tilde,
            1e-8,
        );

        let inv = modular::inversion_constant(&lat, 1e-11).unwrap();
        assert_close("C = b/4", inv.rhs, o.inv_c, 1e-9);
        assert!(
            inv.rel_residual < 1e-8,
            "inversion constant routes disagree: {:.3e}",
            inv.rel_residual
        );
    }
}

#[test]
fn sinh_constant_partial_sums() {
    let v = renell::contour::sinh_constant_partial(40);
    assert_close("sum (-1)^n n / sinh(pi n)", v, c64(MINUS_INV_4PI, 0.0), 1e-15);
}
