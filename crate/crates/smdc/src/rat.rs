//! Small helpers around exact rational arithmetic. Region computations are
//! tolerance-free, so every quantity there is a `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_u64(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}

pub fn is_nonnegative(r: &BigRational) -> bool {
    !r.is_negative()
}

/// Render as `n` or `n/d`, the form `parse_rational` accepts.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `n`, `n/d`, or a plain decimal like `0.25`.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let numer: BigInt = n
            .trim()
            .parse()
            .map_err(|e| format!("bad numerator: {e}"))?;
        let denom: BigInt = d
            .trim()
            .parse()
            .map_err(|e| format!("bad denominator: {e}"))?;
        if denom.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(numer, denom));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole
                .parse()
                .map_err(|e| format!("bad integer part: {e}"))?
        };
        let frac: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse()
                .map_err(|e| format!("bad fraction part: {e}"))?
        };
        let magnitude = whole.abs() * &scale + frac;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(signed, scale));
    }
    let numer: BigInt = text.parse().map_err(|e| format!("bad rational: {e}"))?;
    Ok(BigRational::from_integer(numer))
}

pub fn to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/7").unwrap(), ratio(3, 7));
        assert_eq!(parse_rational("-2").unwrap(), rat(-2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&rat(5)), "5");
        assert!(parse_rational("1/0").is_err());
    }
}
