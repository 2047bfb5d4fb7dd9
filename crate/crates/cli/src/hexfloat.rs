//! C99-style hexadecimal float text (`-0x1.8p+1`), exact in both directions.

use std::fmt::Write;

const MANT_BITS: u32 = 52;
const EXP_BIAS: i32 = 1023;

/// Formats `x` so that [`parse`] returns the same bits. NaN payloads are
/// not preserved.
pub fn format(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let mut out = String::new();
    if x.is_sign_negative() {
        out.push('-');
    }
    if x.is_infinite() {
        out.push_str("inf");
        return out;
    }
    let bits = x.to_bits();
    let exp_field = ((bits >> MANT_BITS) & 0x7ff) as i32;
    let mant = bits & ((1u64 << MANT_BITS) - 1);
    if exp_field == 0 && mant == 0 {
        out.push_str("0x0p+0");
        return out;
    }
    let (lead, exp) = if exp_field == 0 {
        (0, 1 - EXP_BIAS)
    } else {
        (1, exp_field - EXP_BIAS)
    };
    let mut digits = format!("{mant:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    write!(out, "0x{lead}").unwrap();
    if !digits.is_empty() {
        write!(out, ".{digits}").unwrap();
    }
    write!(out, "p{exp:+}").unwrap();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid hex float {0:?}")]
pub struct ParseError(pub String);

/// Parses the output of [`format`]. Only the canonical normalized
/// (`0x1.…`) and subnormal (`0x0.…p-1022`) shapes are accepted.
pub fn parse(s: &str) -> Result<f64, ParseError> {
    let err = || ParseError(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let sign = if neg { 1u64 << 63 } else { 0 };
    match body {
        "nan" if !neg => return Ok(f64::NAN),
        "inf" => return Ok(f64::from_bits(sign | 0x7ff0_0000_0000_0000)),
        _ => {}
    }
    let body = body.strip_prefix("0x").ok_or_else(err)?;
    let (mantissa, exp) = body.split_once('p').ok_or_else(err)?;
    let exp: i32 = exp.parse().map_err(|_| err())?;
    let (lead, frac) = match mantissa.split_once('.') {
        Some((l, f)) if !f.is_empty() => (l, f),
        Some(_) => return Err(err()),
        None => (mantissa, ""),
    };
    if frac.len() > 13 || !frac.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(err());
    }
    let mut frac_bits = 0u64;
    if !frac.is_empty() {
        frac_bits = u64::from_str_radix(frac, 16).map_err(|_| err())?;
        frac_bits <<= 4 * (13 - frac.len());
    }
    let exp_field = match lead {
        "0" if frac_bits == 0 && exp == 0 => 0,
        "0" if exp == 1 - EXP_BIAS && frac_bits != 0 => 0,
        "1" if (1 - EXP_BIAS..=EXP_BIAS).contains(&exp) => (exp + EXP_BIAS) as u64,
        _ => return Err(err()),
    };
    Ok(f64::from_bits(sign | (exp_field << MANT_BITS) | frac_bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(format(1.0), "0x1p+0");
        assert_eq!(format(3.0), "0x1.8p+1");
        assert_eq!(format(-0.5), "-0x1p-1");
        assert_eq!(format(0.1), "0x1.999999999999ap-4");
        assert_eq!(format(0.0), "0x0p+0");
        assert_eq!(format(-0.0), "-0x0p+0");
        assert_eq!(format(f64::MIN_POSITIVE / 4.0), "0x0.4p-1022");
        assert_eq!(format(f64::INFINITY), "inf");
        assert_eq!(parse("0x1.8p+1").unwrap(), 3.0);
        assert!(parse("nan").unwrap().is_nan());
    }

    #[test]
    fn rejects_malformed_text() {
        for s in ["", "1.0", "0x", "0x1.p+0", "0x2p+0", "0x1.gp+0", "0x1p", "0x1.00000000000000p+0", "0x1p+1024"] {
            assert!(parse(s).is_err(), "{s}");
        }
    }

    proptest! {
        #[test]
        fn round_trips_every_bit_pattern(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            let back = parse(&format(x)).unwrap();
            if x.is_nan() {
                prop_assert!(back.is_nan());
            } else {
                prop_assert_eq!(back.to_bits(), bits);
            }
        }
    }
}
