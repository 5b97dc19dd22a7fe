//! Small helpers over `num` big integers and rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// Binomial coefficient, zero when `k > n` or either argument is negative.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// `"p/q"` in lowest terms, denominator always present.
pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Option<Rational> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().ok()?;
    let q: BigInt = q.trim().parse().ok()?;
    (!q.is_zero()).then(|| Rational::new(p, q))
}

pub fn to_f64(r: &Rational) -> f64 {
    // numer/denom can both overflow f64 while the ratio does not
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(p), Some(q)) if p.is_finite() && q.is_finite() => p / q,
        _ => {
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000) as usize;
            let p = (r.numer().abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
            let q = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            let v = p / q;
            if r.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), int(35));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(5, -1), int(0));
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(63, 3), int(39711));
    }

    #[test]
    fn string_forms() {
        assert_eq!(to_string(&ratio(48, 98)), "24/49");
        assert_eq!(to_string(&ratio(3, 1)), "3/1");
        assert_eq!(parse("24/49"), Some(ratio(24, 49)));
        assert_eq!(parse("-3"), Some(ratio(-3, 1)));
        assert_eq!(parse("1/0"), None);
    }

    #[test]
    fn large_to_f64() {
        let big = Rational::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400));
        assert!((to_f64(&big) - 3.0).abs() < 1e-12);
        assert_eq!(to_f64(&ratio(-1, 4)), -0.25);
    }
}
