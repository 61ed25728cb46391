//! Exact rational payoffs.
//!
//! Payoffs are arbitrary-precision rationals kept in lowest terms with a
//! positive denominator; `num_rational::BigRational` maintains both
//! invariants on every operation, so the crate uses it directly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// Exact rational number used for all payoff arithmetic.
pub type Rational = num_rational::BigRational;

/// Builds `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `"n"` when the denominator is one, else `"n/d"`
/// in lowest terms with the sign on the numerator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, a plain integer, or a finite decimal such as `"-0.25"`.
/// Every accepted form converts exactly; binary floating point is never
/// involved.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational literal".to_string());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {t:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_part = if whole == "-" || whole == "+" || whole.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|e| format!("bad decimal {t:?}: {e}"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal fraction in {t:?}"));
        }
        let frac_part = BigInt::from_str(frac).map_err(|e| format!("bad decimal {t:?}: {e}"))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let magnitude = whole_part.abs() * &scale + frac_part;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(signed, scale));
    }
    let n = BigInt::from_str(t).map_err(|e| format!("bad integer {t:?}: {e}"))?;
    Ok(Rational::from_integer(n))
}
