//! Rendering: every float printed in machine formats carries 17 significant
//! digits, so re-parsing reproduces the exact binary double.

use num_complex::Complex64;
use renell::Evaluation;

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn json_number(x: f64) -> String {
    if x.is_finite() {
        fmt_f64(x)
    } else {
        "null".to_string()
    }
}

pub fn eval_human(ev: &Evaluation) -> String {
    format!(
        "value = {} + {} i\nrep   = {}\nterms = {}\ntail  = {:.3e}\n",
        fmt_f64(ev.value.re),
        fmt_f64(ev.value.im),
        ev.representation.name(),
        ev.terms_used,
        ev.tail_estimate,
    )
}

pub fn eval_json(ev: &Evaluation) -> String {
    format!(
        "{{\"value\":{{\"re\":{},\"im\":{}}},\"terms\":{},\"tail\":{},\"rep\":\"{}\"}}\n",
        json_number(ev.value.re),
        json_number(ev.value.im),
        ev.terms_used,
        json_number(ev.tail_estimate),
        ev.representation.name(),
    )
}

pub fn eval_csv(ev: &Evaluation) -> String {
    format!(
        "re,im,terms,tail,rep\n{},{},{},{},{}\n",
        fmt_f64(ev.value.re),
        fmt_f64(ev.value.im),
        ev.terms_used,
        fmt_f64(ev.tail_estimate),
        ev.representation.name(),
    )
}

pub fn fmt_complex_brief(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use renell::eval::Representation;

    #[test]
    fn floats_round_trip_exactly() {
        for x in [
            -6.875185818020373,
            0.1,
            1e-300,
            -0.07957747154594767,
            3025.163522067742,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn json_schema_shape() {
        let ev = Evaluation::new(
            Complex64::new(1.5, -2.0),
            7,
            1e-12,
            Representation::LatticeSum,
        );
        let s = eval_json(&ev);
        assert!(s.starts_with("{\"value\":{\"re\":"));
        assert!(s.contains("\"terms\":7"));
        assert!(s.contains("\"rep\":\"lattice-sum\""));
    }
}
