//! Argument parsing helpers: complex literals "a+bi" (exponents allowed),
//! function and representation names, grid sizes, threshold overrides.

use num_complex::Complex64;
use renell::eval::Representation;
use renell::FunctionId;

pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if !s.ends_with(['i', 'I']) {
        return match s.parse::<f64>() {
            Ok(re) => Ok(Complex64::new(re, 0.0)),
            Err(_) => Err(format!("cannot parse '{input}' as a real number")),
        };
    }

    let body = &s[..s.len() - 1];
    // split at the last sign that separates the two components; a sign right
    // after e/E belongs to an exponent, one at position 0 to the real part
    let mut split = None;
    for (idx, ch) in body.char_indices().skip(1) {
        if (ch == '+' || ch == '-') && !matches!(&body[idx - 1..idx], "e" | "E") {
            split = Some(idx);
        }
    }
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };

    let re = if re_str.is_empty() {
        0.0
    } else {
        re_str
            .parse::<f64>()
            .map_err(|_| format!("cannot parse real part of '{input}'"))?
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t
            .parse::<f64>()
            .map_err(|_| format!("cannot parse imaginary part of '{input}'"))?,
    };
    Ok(Complex64::new(re, im))
}

pub fn parse_function(name: &str) -> Result<FunctionId, String> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "wpt" => FunctionId::Wpt,
        "wp" => FunctionId::Wp,
        "wpa" => FunctionId::Wpa,
        "dn" => FunctionId::Dn,
        "sn" => FunctionId::Sn,
        "cn" => FunctionId::Cn,
        "nd" => FunctionId::Nd,
        "cd" => FunctionId::Cd,
        "sd" => FunctionId::Sd,
        _ => {
            return Err(format!(
                "unknown function '{name}' (expected wpt, wp, wpa, dn, sn, cn, nd, cd or sd)"
            ))
        }
    })
}

/// `None` means automatic representation selection.
pub fn parse_representation(name: &str) -> Result<Option<Representation>, String> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "auto" => None,
        "lattice-sum" | "lattice" => Some(Representation::LatticeSum),
        "fourier-dir1" | "fourier" => Some(Representation::FourierDir1),
        "fourier-dir2" => Some(Representation::FourierDir2),
        "sin2" => Some(Representation::SinInverseSquare),
        "q-product" | "product" => Some(Representation::QProduct),
        _ => {
            return Err(format!(
                "unknown representation '{name}' (expected auto, lattice-sum, fourier-dir1, \
                 fourier-dir2, sin2 or q-product)"
            ))
        }
    })
}

pub fn parse_grid(spec: &str) -> Result<(usize, usize), String> {
    let lower = spec.to_ascii_lowercase();
    let (n, m) = lower
        .split_once('x')
        .ok_or_else(|| format!("grid '{spec}' is not of the form NxM"))?;
    let n: usize = n.parse().map_err(|_| format!("bad grid dimension '{n}'"))?;
    let m: usize = m.parse().map_err(|_| format!("bad grid dimension '{m}'"))?;
    if n == 0 || m == 0 {
        return Err("grid dimensions must be positive".into());
    }
    if n.saturating_mul(m) > 1_000_000 {
        return Err(format!("grid {n}x{m} exceeds the 10^6 point limit"));
    }
    Ok((n, m))
}

pub fn parse_threshold_override(spec: &str) -> Result<(String, f64), String> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| format!("threshold override '{spec}' is not of the form NAME=VALUE"))?;
    let v: f64 = value
        .parse()
        .map_err(|_| format!("bad threshold value '{value}'"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("threshold value {value} must be positive and finite"));
    }
    Ok((name.to_string(), v))
}
