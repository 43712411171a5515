//! Byte-stable JSON: keys sorted (the default `serde_json::Map` is ordered)
//! and floats printed with 17 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

struct Fixed17;

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value.into())
    }
}

/// `%.17g` without the trailing zeros; non-finite values become `null`.
pub fn format_f64(v: f64) -> String {
    if !v.is_finite() {
        return "null".into();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let fixed = format!("{v:.decimals$}");
        if fixed.contains('.') {
            let t = fixed.trim_end_matches('0');
            if t.ends_with('.') {
                format!("{t}0")
            } else {
                t.to_string()
            }
        } else {
            format!("{fixed}.0")
        }
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

pub fn to_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // round trip through Value so struct fields come out sorted too
    let v = serde_json::to_value(value)?;
    let mut buf = Vec::new();
    v.serialize(&mut serde_json::Serializer::with_formatter(&mut buf, Fixed17))?;
    Ok(String::from_utf8(buf).expect("json is utf-8"))
}

pub fn emit<T: Serialize>(value: &T) -> serde_json::Result<()> {
    println!("{}", to_string(value)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(1.0), "1.0");
        assert_eq!(format_f64(-2.5), "-2.5");
        assert_eq!(format_f64(1e-10), "1e-10");
        assert_eq!(format_f64(6.02214076e23), "6.0221407599999999e23");
        assert_eq!(format_f64(f64::NAN), "null");
    }

    #[test]
    fn printed_floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-7, 123456.789, -1e300, 5e-324] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn keys_are_sorted() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: f64,
        }
        assert_eq!(to_string(&S { zeta: 1, alpha: 0.5 }).unwrap(), r#"{"alpha":0.5,"zeta":1}"#);
    }
}
