//! Exact rational scalars and small vector helpers.
//!
//! All geometric predicates in this crate run on `BigRational` (or on
//! integer-cleared forms of it). Floating point never enters a comparison;
//! decimal input is converted to an exact rational at the boundary and kept
//! exact from then on.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

use crate::error::Error;

/// Exact scalar used throughout the crate.
pub type Rat = BigRational;

/// Parse a decimal literal (`-3.25`, `10`, `1.5e-3`) into an exact rational.
///
/// The string is interpreted exactly: `0.1` becomes 1/10, not the nearest
/// binary float.
pub fn parse_decimal(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::BadNumber(s.to_string()));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::BadNumber(s.to_string()))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::BadNumber(s.to_string()));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(Error::BadNumber(s.to_string()));
    }
    let mut num: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| Error::BadNumber(s.to_string()))?;
    if sign < 0 {
        num = -num;
    }
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let rat = if shift >= 0 {
        Rat::from(num * ten.pow(shift as u32))
    } else {
        Rat::new(num, ten.pow((-shift) as u32))
    };
    Ok(rat)
}

/// Render a rational as a `num/den` string with a positive denominator.
pub fn to_fraction_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Render a rational as a decimal string with `sig` significant digits
/// (round half away from zero). Exact values that terminate earlier are
/// printed in full without padding.
pub fn to_decimal_string(r: &Rat, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();

    // Position of the leading digit: largest e with 10^e <= num/den.
    let mut e: i64 = 0;
    let ten = BigInt::from(10);
    let mut lo = num.clone();
    let mut hi = den.clone();
    while lo >= hi {
        hi *= &ten;
        e += 1;
    }
    // now num/den < 10^e; check 10^(e-1) <= num/den
    loop {
        let mut hi2 = den.clone();
        let shift = e - 1;
        if shift >= 0 {
            hi2 *= ten.pow(shift as u32);
        } else {
            lo = &num * ten.pow((-shift) as u32);
            hi2 = den.clone();
        }
        if shift >= 0 {
            lo = num.clone();
        }
        if lo >= hi2 {
            break;
        }
        e -= 1;
    }

    // We want `sig` digits starting at position e-1 downwards, i.e. the
    // integer round(num/den * 10^(sig - e)).
    let shift = sig as i64 - e;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (&num * ten.pow(shift as u32), den.clone())
    } else {
        (num.clone(), &den * ten.pow((-shift) as u32))
    };
    let (q, rem) = scaled_num.div_rem(&scaled_den);
    let mut digits = (if &rem * 2 >= scaled_den { q + 1 } else { q }).to_string();
    // Rounding may add a digit (e.g. 999.95 -> 1000): renormalize.
    let mut e = e;
    if digits.len() > sig {
        e += digits.len() as i64 - sig as i64;
        digits.truncate(sig);
    }
    // Strip trailing zeros; they carry no information for an exact source.
    let trimmed = digits.trim_end_matches('0');
    let digits = if trimmed.is_empty() { "0" } else { trimmed };

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e <= 0 {
        out.push_str("0.");
        for _ in 0..(-e) {
            out.push('0');
        }
        out.push_str(digits);
    } else if (e as usize) >= digits.len() {
        out.push_str(digits);
        for _ in 0..(e as usize - digits.len()) {
            out.push('0');
        }
    } else {
        let (a, b) = digits.split_at(e as usize);
        let _ = write!(out, "{a}.{b}");
    }
    out
}

/// Dot product of two equal-length rational vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Componentwise `a - b`.
pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Componentwise `a + b`.
pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a + s * b`.
pub fn add_scaled(a: &[Rat], s: &Rat, b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn scale(s: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| s * x).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Clear denominators and divide by the gcd, preserving orientation.
/// Returns the unique primitive integer vector pointing the same way.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<BigInt> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}

/// Lexicographic comparison of the primitive integer forms of two vectors.
/// Used as a deterministic tie-break between direction candidates.
pub fn lex_cmp_directions(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    primitive_integer_vector(a).cmp(&primitive_integer_vector(b))
}

/// Sign of a big integer as -1/0/+1.
pub fn int_sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_plain_and_fractional() {
        assert_eq!(parse_decimal("10").unwrap(), Rat::from(BigInt::from(10)));
        assert_eq!(
            parse_decimal("-3.25").unwrap(),
            Rat::new(BigInt::from(-13), BigInt::from(4))
        );
        assert_eq!(
            parse_decimal("0.1").unwrap(),
            Rat::new(BigInt::from(1), BigInt::from(10))
        );
        assert_eq!(
            parse_decimal("1.5e-3").unwrap(),
            Rat::new(BigInt::from(3), BigInt::from(2000))
        );
        assert_eq!(parse_decimal("2E2").unwrap(), Rat::from(BigInt::from(200)));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "abc", "1.2.3", "--4", "1e", "."] {
            assert!(parse_decimal(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn decimal_rendering() {
        let half = Rat::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(to_decimal_string(&half, 20), "0.5");
        let third = Rat::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(to_decimal_string(&third, 5), "0.33333");
        let big = Rat::from(BigInt::from(12345));
        assert_eq!(to_decimal_string(&big, 3), "12300");
        let tiny = Rat::new(BigInt::from(-1), BigInt::from(400));
        assert_eq!(to_decimal_string(&tiny, 4), "-0.0025");
        assert_eq!(to_decimal_string(&Rat::zero(), 20), "0");
        let carry = parse_decimal("999.95").unwrap();
        assert_eq!(to_decimal_string(&carry, 4), "1000");
    }

    #[test]
    fn primitive_vector_keeps_orientation() {
        let v = vec![
            Rat::new(BigInt::from(-1), BigInt::from(2)),
            Rat::new(BigInt::from(3), BigInt::from(4)),
        ];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![BigInt::from(-2), BigInt::from(3)]
        );
    }
}
