//! Identity suites behind `renell check`. Each row measures one identity and
//! compares the residual against a named threshold from the versioned
//! defaults table; `--threshold NAME=VALUE` overrides individual entries.

use std::collections::BTreeMap;

use num_complex::Complex64;
use renell::contour::{
    decay_table, enclosed_residue_sum, integrate_h, residue_identity_check,
    wpt_boundary_integral, QuadratureSpec,
};
use renell::eval::Representation;
use renell::jacobi::{jacobi_fourier, jacobi_residue_identity, Direction};
use renell::qfactor::{
    euler_product_identity, modular_discriminant, q_product, verify_eta_quotient, wpa,
    DiscriminantRoute,
};
use renell::weierstrass::{wp, wp_lattice_sum, wp_tilde, wp_tilde_prime_rep};
use renell::{modular, FunctionId, Lattice};

pub const THRESHOLDS_VERSION: &str = "1";

pub const DEFAULT_THRESHOLDS: &[(&str, f64)] = &[
    ("fourier.wpt-cross", 1e-8),
    ("fourier.wpt-prime-cross", 1e-8),
    ("fourier.wp-cross", 1e-8),
    ("fourier.jacobi-pairs", 1e-8),
    ("products.sd2-wpa", 1e-9),
    ("products.q-series", 1e-9),
    ("products.eta-quotient", 1e-9),
    ("products.euler", 1e-12),
    ("products.delta-routes", 1e-8),
    ("ode.relation", 1e-8),
    ("ode.residual", 1e-7),
    ("ode.factored", 1e-8),
    ("modular.discriminant-routes", 1e-8),
    ("modular.transformations", 1e-8),
    ("modular.inversion-constant", 1e-8),
    ("contour.master-identity", 1e-10),
    ("contour.residue-match", 1e-8),
    ("contour.decay-contraction", 1.0),
    ("contour.cell-integral", 1e-7),
];

pub const SUITES: &[&str] = &["fourier", "products", "ode", "modular", "contour", "all"];

#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: &'static str,
    pub tau: Complex64,
    pub residual: f64,
    pub threshold: f64,
}

impl CheckRow {
    pub fn pass(&self) -> bool {
        self.residual < self.threshold
    }
}

pub struct CheckConfig {
    pub tol: f64,
    pub n_terms: usize,
    pub thresholds: BTreeMap<String, f64>,
}

pub fn effective_thresholds(
    overrides: &[(String, f64)],
) -> Result<BTreeMap<String, f64>, String> {
    let mut map: BTreeMap<String, f64> = DEFAULT_THRESHOLDS
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    for (name, value) in overrides {
        if !map.contains_key(name) {
            return Err(format!(
                "unknown threshold '{name}'; see --list-thresholds for the table"
            ));
        }
        map.insert(name.clone(), *value);
    }
    Ok(map)
}

fn threshold(cfg: &CheckConfig, name: &str) -> f64 {
    *cfg.thresholds
        .get(name)
        .expect("every row name appears in the defaults table")
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn row(cfg: &CheckConfig, name: &'static str, tau: Complex64, residual: f64) -> CheckRow {
    CheckRow {
        name,
        tau,
        residual,
        threshold: threshold(cfg, name),
    }
}

const WPT_POINTS: [(f64, f64); 3] = [(0.2, 0.1), (-0.31, 0.17), (0.05, 0.33)];

fn fourier_suite(tau: Complex64, cfg: &CheckConfig) -> renell::Result<Vec<CheckRow>> {
    let lat = Lattice::from_tau(tau)?;
    let reps = [
        Representation::FourierDir1,
        Representation::FourierDir2,
        Representation::SinInverseSquare,
    ];

    let mut worst_wpt = 0.0f64;
    let mut worst_prime = 0.0f64;
    for (alpha, beta) in WPT_POINTS {
        let z = lat.from_frame(alpha, beta);
        let base = wp_tilde(z, &lat, Some(Representation::LatticeSum), cfg.tol)?.value;
        let base_p = wp_tilde_prime_rep(z, &lat, Representation::LatticeSum, cfg.tol)?.value;
        for rep in reps {
            worst_wpt = worst_wpt.max(rel(wp_tilde(z, &lat, Some(rep), cfg.tol)?.value, base));
            worst_prime =
                worst_prime.max(rel(wp_tilde_prime_rep(z, &lat, rep, cfg.tol)?.value, base_p));
        }
    }

    let mut worst_wp = 0.0f64;
    for (alpha, beta) in [(0.2, 0.3), (0.37, 0.12)] {
        let z = lat.from_frame(alpha, beta);
        let base = wp_lattice_sum(z, &lat, cfg.tol)?.value;
        for rep in [Representation::FourierDir1, Representation::FourierDir2] {
            worst_wp = worst_wp.max(rel(wp(z, &lat, Some(rep), cfg.tol)?.value, base));
        }
    }

    let mut worst_jac = 0.0f64;
    for fn_id in [
        FunctionId::Dn,
        FunctionId::Sn,
        FunctionId::Cn,
        FunctionId::Nd,
        FunctionId::Cd,
        FunctionId::Sd,
    ] {
        for (alpha, beta) in [(0.13, 0.21), (0.41, 0.07), (-0.23, 0.29)] {
            let z = c64(alpha, 0.0) + beta * tau;
            let report = jacobi_residue_identity(fn_id, z, tau, cfg.n_terms)?;
            worst_jac = worst_jac.max(report.rel_residual);
        }
    }

    Ok(vec![
        row(cfg, "fourier.wpt-cross", tau, worst_wpt),
        row(cfg, "fourier.wpt-prime-cross", tau, worst_prime),
        row(cfg, "fourier.wp-cross", tau, worst_wp),
        row(cfg, "fourier.jacobi-pairs", tau, worst_jac),
    ])
}

fn products_suite(tau: Complex64, cfg: &CheckConfig) -> renell::Result<Vec<CheckRow>> {
    let mut worst_sd = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let alpha = -0.35 + 0.175 * i as f64;
            let beta = -0.35 + 0.175 * j as f64;
            let z = c64(alpha, 0.0) + beta * tau;
            let sd = jacobi_fourier(FunctionId::Sd, z, tau, Direction::Dir1, cfg.tol)?.value;
            let pa = wpa(z, tau, None, cfg.tol)?.value;
            worst_sd = worst_sd.max(rel(sd * sd, pa));
        }
    }

    let mut worst_q = 0.0f64;
    for fn_id in [FunctionId::Wpa, FunctionId::Sd, FunctionId::Cd, FunctionId::Nd] {
        for (alpha, beta) in [(0.17, 0.23), (-0.31, 0.11), (0.42, -0.37)] {
            let z = c64(alpha, 0.0) + beta * tau;
            let series = if fn_id == FunctionId::Wpa {
                wpa(z, tau, None, cfg.tol)?.value
            } else {
                jacobi_fourier(fn_id, z, tau, Direction::Dir1, cfg.tol)?.value
            };
            let product = q_product(fn_id, z, tau, 2000)?.value;
            worst_q = worst_q.max(rel(product, series));
        }
    }

    let eta_report = verify_eta_quotient(tau, cfg.n_terms.max(40))?;

    let q = (c64(0.0, 2.0 * std::f64::consts::PI) * tau).exp();
    let euler = euler_product_identity(q, 2000);

    let d1 = modular_discriminant(tau, DiscriminantRoute::EtaPower, cfg.tol.min(1e-12))?.value;
    let d2 =
        modular_discriminant(tau, DiscriminantRoute::WpTripleProduct, cfg.tol.min(1e-11))?.value;

    Ok(vec![
        row(cfg, "products.sd2-wpa", tau, worst_sd),
        row(cfg, "products.q-series", tau, worst_q),
        row(cfg, "products.eta-quotient", tau, eta_report.abs_residual),
        row(cfg, "products.euler", tau, euler.abs_residual),
        row(cfg, "products.delta-routes", tau, rel(d1, d2)),
    ])
}

const ODE_POINTS: [(f64, f64); 4] = [(0.2, 0.1), (0.31, -0.22), (-0.17, 0.29), (0.05, 0.41)];

fn ode_suite(tau: Complex64, cfg: &CheckConfig) -> renell::Result<Vec<CheckRow>> {
    let lat = Lattice::from_tau(tau)?;
    let relation = modular::modular_relation_check(&lat, cfg.tol)?;

    let mut worst_ode = 0.0f64;
    let mut worst_fac = 0.0f64;
    for (alpha, beta) in ODE_POINTS {
        let z = lat.from_frame(alpha, beta);
        worst_ode = worst_ode.max(modular::ode_residual(z, &lat, cfg.tol)?.rel_residual);
        worst_fac = worst_fac.max(modular::ode_factored_residual(z, &lat, cfg.tol)?.rel_residual);
    }

    Ok(vec![
        row(cfg, "ode.relation", tau, relation.rel_residual),
        row(cfg, "ode.residual", tau, worst_ode),
        row(cfg, "ode.factored", tau, worst_fac),
    ])
}

fn modular_suite(tau: Complex64, cfg: &CheckConfig) -> renell::Result<Vec<CheckRow>> {
    let lat = Lattice::from_tau(tau)?;
    let d = modular::discriminant_tilde(&lat, cfg.tol)?;
    let routes = rel(d.delta_tilde, d.half_period_route());

    let mut worst_tr = 0.0f64;
    for report in modular::transformation_checks(tau, cfg.tol)? {
        worst_tr = worst_tr.max(report.rel_residual);
    }

    let inv = modular::inversion_constant(&lat, cfg.tol)?;

    Ok(vec![
        row(cfg, "modular.discriminant-routes", tau, routes),
        row(cfg, "modular.transformations", tau, worst_tr),
        row(cfg, "modular.inversion-constant", tau, inv.rel_residual),
    ])
}

fn contour_suite(tau: Complex64, cfg: &CheckConfig) -> renell::Result<Vec<CheckRow>> {
    let lat = Lattice::from_tau(tau)?;

    let mut worst_master = 0.0f64;
    for (alpha, beta) in [(0.0, 0.0), (0.21, 0.13), (-0.3, 0.25)] {
        let z = lat.from_frame(alpha, beta);
        let report = residue_identity_check(z, &lat, cfg.n_terms)?;
        worst_master = worst_master.max(report.abs_residual);
    }

    let quad = QuadratureSpec::default();
    let mut worst_res = 0.0f64;
    let zq = lat.from_frame(0.13, 0.07);
    for n in [2usize, 3] {
        let integral = integrate_h(n, zq, &lat, &quad)?;
        let residues = enclosed_residue_sum(&lat, zq, n);
        worst_res = worst_res.max(rel(integral.value, residues));
    }

    // contraction of the |I_n| table at z = 0; any ratio >= 1 breaks monotone decay
    let rows = decay_table(c64(0.0, 0.0), &lat, 0, 8, &quad)?;
    let mut contraction = 0.0f64;
    for w in rows.windows(2) {
        contraction = contraction.max(w[1].1 / w[0].1);
    }

    let base = -0.25 * lat.omega1() - 0.25 * lat.omega2();
    let cell = wpt_boundary_integral(&lat, base, cfg.tol)?;

    Ok(vec![
        row(cfg, "contour.master-identity", tau, worst_master),
        row(cfg, "contour.residue-match", tau, worst_res),
        row(cfg, "contour.decay-contraction", tau, contraction),
        row(cfg, "contour.cell-integral", tau, cell.value.norm()),
    ])
}

pub fn run_suite(
    suite: &str,
    taus: &[Complex64],
    cfg: &CheckConfig,
) -> renell::Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for &tau in taus {
        match suite {
            "fourier" => rows.extend(fourier_suite(tau, cfg)?),
            "products" => rows.extend(products_suite(tau, cfg)?),
            "ode" => rows.extend(ode_suite(tau, cfg)?),
            "modular" => rows.extend(modular_suite(tau, cfg)?),
            "contour" => rows.extend(contour_suite(tau, cfg)?),
            "all" => {
                rows.extend(fourier_suite(tau, cfg)?);
                rows.extend(products_suite(tau, cfg)?);
                rows.extend(ode_suite(tau, cfg)?);
                rows.extend(modular_suite(tau, cfg)?);
                rows.extend(contour_suite(tau, cfg)?);
            }
            _ => unreachable!("suite validated at the CLI boundary"),
        }
    }
    Ok(rows)
}
