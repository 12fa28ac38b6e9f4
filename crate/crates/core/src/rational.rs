//! Exact rational scalars and their textual forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`; panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or an integer, with an optional leading sign.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || den.is_some_and(|d| !valid(d)) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// `p/q`, or `p` when the denominator is 1.
pub fn format_exact(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with `digits` significant digits, rounded half away from
/// zero. Computed exactly, so output is identical on every platform.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return format!("0.{}", "0".repeat(digits - 1));
    }
    let negative = r.is_negative();
    let a = r.abs();
    let mut exp = decimal_exponent(&a);
    let ten = BigInt::from(10);
    let mut mantissa = round_scaled(&a, digits as i64 - 1 - exp, &ten);
    if mantissa == ten.pow(digits as u32) {
        mantissa /= &ten;
        exp += 1;
    }
    let body = mantissa.to_string();
    debug_assert_eq!(body.len(), digits);
    let text = if !(-6..=20).contains(&exp) {
        let (head, tail) = body.split_at(1);
        format!("{head}.{tail}e{exp}")
    } else if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), body)
    } else if (exp as usize) < digits - 1 {
        let (head, tail) = body.split_at(exp as usize + 1);
        format!("{head}.{tail}")
    } else {
        format!("{}{}", body, "0".repeat(exp as usize + 1 - digits))
    };
    if negative {
        format!("-{text}")
    } else {
        text
    }
}

/// floor(log10(a)) for a > 0.
fn decimal_exponent(a: &Rational) -> i64 {
    let ten = Rational::from_integer(BigInt::from(10));
    let mut exp = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    loop {
        let p = pow10(exp, &ten);
        if &p > a {
            exp -= 1;
        } else if &(p * &ten) <= a {
            exp += 1;
        } else {
            return exp;
        }
    }
}

fn pow10(exp: i64, ten: &Rational) -> Rational {
    if exp >= 0 {
        num_traits::pow(ten.clone(), exp as usize)
    } else {
        num_traits::pow(ten.clone(), (-exp) as usize).recip()
    }
}

/// round(a * 10^shift), halves away from zero, for a > 0.
fn round_scaled(a: &Rational, shift: i64, ten: &BigInt) -> BigInt {
    let scale = ten.pow(shift.unsigned_abs() as u32);
    let (n, d) = if shift >= 0 {
        (a.numer() * &scale, a.denom().clone())
    } else {
        (a.numer().clone(), a.denom() * &scale)
    };
    let (q, r) = n.div_rem(&d);
    if r * 2 >= d {
        q + 1
    } else {
        q
    }
}

/// Decimal approximation of the square root of a non-negative rational.
pub fn sqrt_decimal(r: &Rational, digits: usize) -> String {
    let x = to_f64(r).max(0.0).sqrt();
    // f64 carries ~15.9 significant digits, enough for 12 after rounding.
    let approx = Rational::from_float(x).unwrap_or_else(Rational::zero);
    format_decimal(&approx, digits)
}
