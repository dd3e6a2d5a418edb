//! Fixed-precision number formatting for reports.

use num_integer::Integer;
use serde::Serializer;

/// Significant digits in every printed float.
pub const SIG_DIGITS: usize = 12;

/// `%.{digits}g` with trailing zeros removed.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}{:02}", trim(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sig(x: f64) -> String {
    fmt_sig(x, SIG_DIGITS)
}

/// `x` rounded to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    sig(x).parse().unwrap_or(x)
}

/// Serializes an `f64` as a JSON number carrying [`SIG_DIGITS`] digits.
pub fn serialize_sig<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

/// `"num/den"` in lowest terms, `"num"` for integers.
pub fn ratio_string(num: u128, den: u128) -> String {
    let g = num.gcd(&den).max(1);
    let (n, d) = (num / g, den / g);
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_sig(0.75, 12), "0.75");
        assert_eq!(fmt_sig(0.853_553_390_593_273_8, 12), "0.853553390593");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(-2.5, 12), "-2.5");
        assert_eq!(fmt_sig(1.0 / 3.0, 4), "0.3333");
        assert_eq!(fmt_sig(123456.0, 3), "1.23e+05");
        assert_eq!(fmt_sig(1.5e-7, 12), "1.5e-07");
        assert_eq!(fmt_sig(0.0001, 12), "0.0001");
        assert_eq!(fmt_sig(9.9999999999999, 12), "10");
    }

    #[test]
    fn ratios() {
        assert_eq!(ratio_string(6, 8), "3/4");
        assert_eq!(ratio_string(9, 9), "1");
        assert_eq!(ratio_string(0, 7), "0");
    }
}
