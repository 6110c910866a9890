//! Exact values of the form `m * 2^(p/q)` with `m` a nonnegative rational
//! and `p/q` a rational exponent.
//!
//! The family is closed under multiplication, division, and integer powers,
//! which is all an envy-ratio computation needs. Addition is partial: two
//! values can be added exactly iff their exponents differ by an integer
//! (see [`ExactValue::checked_add`]). Sums that leave the family are still
//! comparable through [`compare_sums`], which decides the sign of a
//! difference of power sums with integer arithmetic only.
//!
//! No operation in this module touches floating point.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics if `d == 0`.
pub fn ratq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Error parsing a [`Rational`] or [`ExactValue`] from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid value `{input}`: {reason}")]
pub struct ParseValueError {
    pub input: String,
    pub reason: String,
}

fn parse_err(input: &str, reason: impl Into<String>) -> ParseValueError {
    ParseValueError {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Parses `a` or `a/b` (optionally signed) into a rational.
///
/// Rejects a zero denominator instead of panicking like `Rational::new`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseValueError> {
    let body = s.trim();
    if body.is_empty() {
        return Err(parse_err(s, "empty string"));
    }
    let (num_str, den_str) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let numer = BigInt::from_str(num_str)
        .map_err(|_| parse_err(s, format!("`{num_str}` is not an integer")))?;
    let denom = match den_str {
        Some(d) => {
            BigInt::from_str(d).map_err(|_| parse_err(s, format!("`{d}` is not an integer")))?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(parse_err(s, "zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// A nonnegative real of the form `mantissa * 2^exponent`.
///
/// Canonical form: the zero value is stored as `0 * 2^0`; any other value
/// stores its mantissa with odd numerator and odd denominator, every factor
/// of two folded into the exponent. Distinct canonical forms denote
/// distinct reals (`2^(p/q)` is irrational whenever `q > 1`), so the
/// derived structural equality is exactly equality of values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactValue {
    mantissa: Rational,
    exponent: Rational,
}

impl ExactValue {
    /// Builds `m * 2^e` in canonical form. Panics if `m < 0`.
    pub fn new(mantissa: Rational, exponent: Rational) -> Self {
        assert!(
            !mantissa.is_negative(),
            "exact values are nonnegative, got mantissa {mantissa}"
        );
        if mantissa.is_zero() {
            return Self::zero();
        }
        // A reduced fraction cannot have both parts even, so exactly one of
        // the two shifts below can be nonzero.
        let tz_n = mantissa.numer().trailing_zeros().unwrap_or(0);
        let tz_d = mantissa.denom().trailing_zeros().unwrap_or(0);
        let mantissa = Rational::new_raw(
            mantissa.numer() >> tz_n,
            mantissa.denom() >> tz_d,
        );
        let shift = BigInt::from(tz_n) - BigInt::from(tz_d);
        ExactValue {
            mantissa,
            exponent: exponent + Rational::from_integer(shift),
        }
    }

    pub fn zero() -> Self {
        ExactValue {
            mantissa: Rational::zero(),
            exponent: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        ExactValue {
            mantissa: Rational::one(),
            exponent: Rational::zero(),
        }
    }

    /// The rational `m` itself, i.e. `m * 2^0`.
    pub fn from_rational(m: Rational) -> Self {
        Self::new(m, Rational::zero())
    }

    pub fn from_int(n: u64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `2^e`.
    pub fn pow2(e: Rational) -> Self {
        Self::new(Rational::one(), e)
    }

    pub fn mantissa(&self) -> &Rational {
        &self.mantissa
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    /// True iff the value is rational, i.e. the exponent is an integer.
    pub fn is_rational(&self) -> bool {
        self.is_zero() || self.exponent.is_integer()
    }

    /// The value as a rational when [`Self::is_rational`], else `None`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if !self.exponent.is_integer() {
            return None;
        }
        Some(&self.mantissa * pow2_rational(self.exponent.numer()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(&self.mantissa * &other.mantissa, &self.exponent + &other.exponent)
    }

    /// `self^k`, with `0^0 = 1` (the empty product).
    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return Self::one();
        }
        if self.is_zero() {
            return Self::zero();
        }
        let k32 = u32::try_from(k).expect("power too large");
        Self::new(
            num_traits::pow::Pow::pow(&self.mantissa, k32),
            &self.exponent * rat(k as i64),
        )
    }

    /// Exact sum, defined only when the two exponents differ by an integer
    /// (equivalently, when the sum stays inside the `m * 2^(p/q)` family).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        let diff = &other.exponent - &self.exponent;
        if !diff.is_integer() {
            return None;
        }
        let scaled = &other.mantissa * pow2_rational(diff.numer());
        Some(Self::new(&self.mantissa + scaled, self.exponent.clone()))
    }

    /// Decimal rendering with `sig` significant digits, suitable only for
    /// annotation; computed by integer root extraction, no floating point.
    pub fn to_decimal(&self, sig: usize) -> String {
        decimal_string(self, sig)
    }
}

/// `2^k` as a rational, for integer `k` of either sign.
fn pow2_rational(k: &BigInt) -> Rational {
    let mag = k.magnitude().to_usize().expect("exponent shift too large");
    if k.is_negative() {
        Rational::new_raw(BigInt::one(), BigInt::one() << mag)
    } else {
        Rational::from_integer(BigInt::one() << mag)
    }
}

impl Ord for ExactValue {
    /// Compares `a * 2^x` with `b * 2^y` exactly.
    ///
    /// For positive values the question reduces to `(a/b)^q` versus `2^p`
    /// where `y - x = p/q` in lowest terms, which is settled by integer
    /// powering and shifting alone.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (false, false) => {}
        }
        let diff = &other.exponent - &self.exponent;
        let q = diff
            .denom()
            .to_u32()
            .expect("exponent denominator too large");
        let r = &self.mantissa / &other.mantissa;
        let mut lhs = r.numer().magnitude().pow(q);
        let mut rhs = r.denom().magnitude().pow(q);
        let p = diff.numer();
        let shift = p.magnitude().to_usize().expect("exponent gap too large");
        if p.is_negative() {
            lhs <<= shift;
        } else {
            rhs <<= shift;
        }
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for ExactValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Mul for &ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: &ExactValue) -> ExactValue {
        ExactValue::mul(self, rhs)
    }
}

impl From<u64> for ExactValue {
    fn from(n: u64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for ExactValue {
    /// Canonical text form, one string per value:
    /// `"0"`, a plain rational `a` / `a/b` when the value is rational, and
    /// `"m*2^(p/q)"` with odd/odd `m` and `q > 1` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(
                f,
                "{}*2^({}/{})",
                self.mantissa,
                self.exponent.numer(),
                self.exponent.denom()
            ),
        }
    }
}

impl fmt::Debug for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactValue({self})")
    }
}

impl FromStr for ExactValue {
    type Err = ParseValueError;

    /// Accepts `0`, `a`, `a/b`, `m*2^(p/q)`, `m*2^p`, `2^(p/q)`, `2^p`.
    /// The mantissa must be nonnegative; the exponent may carry a sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        if body.is_empty() {
            return Err(parse_err(s, "empty string"));
        }
        let (mantissa, exponent) = match body.find("2^") {
            None => (parse_rational(body)?, Rational::zero()),
            Some(pos) => {
                let m = match &body[..pos] {
                    "" => Rational::one(),
                    prefix => {
                        let prefix = prefix
                            .strip_suffix('*')
                            .ok_or_else(|| parse_err(s, "expected `*` before `2^`"))?;
                        parse_rational(prefix)?
                    }
                };
                let exp_str = &body[pos + 2..];
                let exp_str = if let Some(inner) = exp_str.strip_prefix('(') {
                    inner
                        .strip_suffix(')')
                        .ok_or_else(|| parse_err(s, "unbalanced parentheses in exponent"))?
                } else {
                    exp_str
                };
                (m, parse_rational(exp_str).map_err(|e| {
                    parse_err(s, format!("bad exponent: {}", e.reason))
                })?)
            }
        };
        if mantissa.is_negative() {
            return Err(parse_err(s, "negative mantissa"));
        }
        Ok(ExactValue::new(mantissa, exponent))
    }
}

/// A value extended with a single point at positive infinity, the natural
/// codomain of an envy ratio with a zero denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtendedValue {
    Finite(ExactValue),
    PositiveInfinity,
}

impl ExtendedValue {
    pub fn one() -> Self {
        ExtendedValue::Finite(ExactValue::one())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&ExactValue> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            ExtendedValue::PositiveInfinity => None,
        }
    }

    pub fn pow(&self, k: u64) -> Self {
        match self {
            ExtendedValue::Finite(v) => ExtendedValue::Finite(v.pow(k)),
            ExtendedValue::PositiveInfinity => ExtendedValue::PositiveInfinity,
        }
    }

    pub fn to_decimal(&self, sig: usize) -> String {
        match self {
            ExtendedValue::Finite(v) => v.to_decimal(sig),
            ExtendedValue::PositiveInfinity => "inf".to_string(),
        }
    }
}

impl Ord for ExtendedValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedValue::*;
        match (self, other) {
            (PositiveInfinity, PositiveInfinity) => Ordering::Equal,
            (PositiveInfinity, Finite(_)) => Ordering::Greater,
            (Finite(_), PositiveInfinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(v) => write!(f, "{v}"),
            ExtendedValue::PositiveInfinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtendedValue {
    type Err = ParseValueError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "inf" {
            return Ok(ExtendedValue::PositiveInfinity);
        }
        Ok(ExtendedValue::Finite(s.parse()?))
    }
}

/// Exact quotient `num / den` of two nonnegative values.
///
/// Conventions: `x/0 = +inf` for `x > 0`, and `0/0 = 1`, so that the ratio
/// attached to a vacuous envy constraint never reads as a violation.
pub fn ratio(num: &ExactValue, den: &ExactValue) -> ExtendedValue {
    if den.is_zero() {
        if num.is_zero() {
            return ExtendedValue::one();
        }
        return ExtendedValue::PositiveInfinity;
    }
    ExtendedValue::Finite(ExactValue::new(
        num.mantissa() / den.mantissa(),
        num.exponent() - den.exponent(),
    ))
}

/// Decides `sum(lhs) <=> sum(rhs)` exactly, even when the sums leave the
/// `m * 2^(p/q)` family.
///
/// The difference is grouped into `sum_j c_j * 2^(j/q)` with rational
/// coefficients and `0 <= j < q`. Those powers are linearly independent
/// over the rationals (`x^q - 2` is irreducible), so the difference is zero
/// iff every coefficient is zero; a mixed-sign difference is bracketed by
/// integer-root bounds on `2^(j/q)` refined until its sign is pinned down.
pub fn compare_sums(lhs: &[ExactValue], rhs: &[ExactValue]) -> Ordering {
    // fast path: sides that fold exactly within the family compare directly
    let fold = |values: &[ExactValue]| {
        values
            .iter()
            .try_fold(ExactValue::zero(), |acc, v| acc.checked_add(v))
    };
    if let (Some(l), Some(r)) = (fold(lhs), fold(rhs)) {
        return l.cmp(&r);
    }

    use std::collections::BTreeMap;
    // coefficient of 2^f per fractional exponent f in [0, 1)
    let mut coeffs: BTreeMap<Rational, Rational> = BTreeMap::new();
    let mut accumulate = |v: &ExactValue, negate: bool| {
        if v.is_zero() {
            return;
        }
        let fl = v.exponent().floor();
        let frac = v.exponent() - &fl;
        let mut c = v.mantissa() * pow2_rational(fl.numer());
        if negate {
            c = -c;
        }
        let slot = coeffs.entry(frac).or_insert_with(Rational::zero);
        *slot += c;
    };
    for v in lhs {
        accumulate(v, false);
    }
    for v in rhs {
        accumulate(v, true);
    }
    coeffs.retain(|_, c| !c.is_zero());

    if coeffs.is_empty() {
        return Ordering::Equal;
    }
    if coeffs.values().all(|c| c.is_positive()) {
        return Ordering::Greater;
    }
    if coeffs.values().all(|c| c.is_negative()) {
        return Ordering::Less;
    }

    // Mixed signs: bracket sum_j c_j * 2^(j/q) between rationals.
    let q = coeffs
        .keys()
        .fold(BigInt::one(), |acc, f| acc.lcm(f.denom()));
    let q_u32 = q.to_u32().expect("exponent denominator too large");
    let terms: Vec<(BigUint, Rational)> = coeffs
        .into_iter()
        .map(|(f, c)| {
            let j = (f.numer() * &q / f.denom()).magnitude().clone();
            (j, c)
        })
        .collect();

    let mut bits: usize = 16;
    for _ in 0..20 {
        let mut lo_sum = Rational::zero();
        let mut hi_sum = Rational::zero();
        let scale = Rational::new_raw(BigInt::one(), BigInt::one() << bits);
        for (j, c) in &terms {
            // root <= 2^(j/q + bits) < root + 1
            let j_usize = j.to_usize().expect("fractional exponent too large");
            let root = (BigUint::one() << (j_usize + q_u32 as usize * bits)).nth_root(q_u32);
            let lo = Rational::from_integer(BigInt::from(root.clone())) * &scale;
            let hi = Rational::from_integer(BigInt::from(root + BigUint::one())) * &scale;
            if c.is_positive() {
                lo_sum += c * &lo;
                hi_sum += c * &hi;
            } else {
                lo_sum += c * &hi;
                hi_sum += c * &lo;
            }
        }
        if lo_sum.is_positive() {
            return Ordering::Greater;
        }
        if hi_sum.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
    unreachable!("sign of a nonzero power sum stayed undecided");
}

/// Comparison of two values through a fixed-point approximation with `frac`
/// fractional bits (so resolution `2^-frac`), computed via integer roots.
///
/// Independent of [`ExactValue::cmp`]; used to cross-check it in tests.
/// Returns `None` when the approximations land within two units of each
/// other, i.e. when the gap is below the resolution of the approximation.
pub fn approx_cmp(a: &ExactValue, b: &ExactValue, frac: usize) -> Option<Ordering> {
    let fa = fixed_point(a, frac);
    let fb = fixed_point(b, frac);
    let gap = (&fa - &fb).magnitude().clone();
    if gap <= BigUint::from(2u32) {
        None
    } else {
        Some(fa.cmp(&fb))
    }
}

/// `floor(v * 2^frac)` up to one unit: the result `N` satisfies
/// `N <= v * 2^frac < N + mantissa_numerator + 1`.
fn fixed_point(v: &ExactValue, frac: usize) -> BigInt {
    if v.is_zero() {
        return BigInt::zero();
    }
    // v * 2^frac = (a/b) * 2^(e + frac); make the exponent nonnegative by
    // borrowing extra bits, then divide them back out.
    let e = v.exponent() + rat(frac as i64);
    let extra = if e.is_negative() {
        (-e.floor()).numer().to_usize().expect("exponent too small")
    } else {
        0
    };
    let shifted = &e + rat(extra as i64);
    let p = shifted.numer().to_usize().expect("exponent too large");
    let q = shifted.denom().to_u32().expect("exponent denominator too large");
    let root = (BigUint::one() << p).nth_root(q); // root <= 2^shifted < root+1
    let num = v.mantissa().numer().magnitude() * root;
    let den = v.mantissa().denom().magnitude() << extra;
    BigInt::from(num / den)
}

/// Exact `floor(v * 10^k)` for `v > 0`, by one integer `q`-th root.
fn floor_scaled_pow10(v: &ExactValue, k: i64) -> BigUint {
    let q = v
        .exponent()
        .denom()
        .to_u32()
        .expect("exponent denominator too large");
    let p = v.exponent().numer();
    // (v * 10^k)^q = (a^q * 10^(k*q) * 2^p) / b^q, floored then rooted.
    let mut num = v.mantissa().numer().magnitude().pow(q);
    let mut den = v.mantissa().denom().magnitude().pow(q);
    let kq = (k as i128) * (q as i128);
    if kq >= 0 {
        num *= BigUint::from(10u32).pow(kq as u32);
    } else {
        den *= BigUint::from(10u32).pow((-kq) as u32);
    }
    let shift = p.magnitude().to_usize().expect("exponent too large");
    if p.is_negative() {
        den <<= shift;
    } else {
        num <<= shift;
    }
    (num / den).nth_root(q)
}

fn decimal_string(v: &ExactValue, sig: usize) -> String {
    assert!(sig > 0);
    if v.is_zero() {
        return "0".to_string();
    }
    // Find k with sig+1 leading digits of v * 10^k, starting from a
    // bit-length estimate of log10(v).
    let approx_log2 = {
        let m = v.mantissa();
        let bits = m.numer().bits() as i64 - m.denom().bits() as i64;
        let e = v.exponent();
        bits + (e.numer() / e.denom()).to_i64().unwrap_or(0)
    };
    let mut k = sig as i64 + 1 - approx_log2 * 30103 / 100000;
    let lo = BigUint::from(10u32).pow(sig as u32); // sig+1 digits means >= 10^sig
    let hi = &lo * BigUint::from(10u32);
    let mut x = floor_scaled_pow10(v, k);
    for _ in 0..200 {
        if x < lo {
            k += 1;
        } else if x >= hi {
            k -= 1;
        } else {
            break;
        }
        x = floor_scaled_pow10(v, k);
    }
    debug_assert!(x >= lo && x < hi);
    // Round the sig+1 digit string to sig digits, half away from zero.
    let mut digits = ((x + BigUint::from(5u32)) / BigUint::from(10u32)).to_string();
    let mut exp10 = digits.len() as i64 - 1 - (k - 1); // digits . 10^exp10 scale
    if digits.len() > sig {
        // rounding carried into an extra digit (all nines); drop the zero
        digits.truncate(sig);
    }
    // decimal point after the first digit, value = d.ddd * 10^exp10
    let mut frac: String = digits.split_off(1);
    let int_part = digits;
    // trim trailing zeros of the fraction
    while frac.ends_with('0') {
        frac.pop();
    }
    if (-4..=(sig as i64 + 3)).contains(&exp10) {
        // positional rendering
        let mut all: Vec<char> = int_part.chars().chain(frac.chars()).collect();
        let point = exp10 + 1; // digits before the point
        while (all.len() as i64) < point {
            all.push('0');
        }
        let s: String = all.iter().collect();
        if point <= 0 {
            let zeros = "0".repeat((-point) as usize);
            format!("0.{zeros}{s}")
        } else if (point as usize) < s.len() {
            format!("{}.{}", &s[..point as usize], &s[point as usize..])
        } else {
            s
        }
    } else {
        let _ = &mut exp10;
        if frac.is_empty() {
            format!("{int_part}e{exp10}")
        } else {
            format!("{int_part}.{frac}e{exp10}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> ExactValue {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form_is_unique() {
        let half_a = ExactValue::new(rat(1), rat(-1));
        let half_b = ExactValue::new(ratq(1, 2), rat(0));
        let half_c = ExactValue::new(rat(2), rat(-2));
        assert_eq!(half_a, half_b);
        assert_eq!(half_b, half_c);
        assert_eq!(half_a.to_string(), "1/2");

        let twenty = ExactValue::new(rat(20), rat(0));
        assert_eq!(twenty.mantissa(), &rat(5));
        assert_eq!(twenty.exponent(), &rat(2));
        assert_eq!(twenty.to_string(), "20");
    }

    #[test]
    fn compare_reduces_to_integer_arithmetic() {
        // (5/4)^3 = 125/64 < 2, so 5/4 < 2^(1/3)
        assert!(ev("5/4") < ev("2^(1/3)"));
        assert!(ev("2^(1/3)") < ev("13/10"));
        assert_eq!(ExactValue::new(rat(1), rat(-1)), ev("1/2"));
        assert!(ev("20/19") > ExactValue::one());
        assert!(ExactValue::zero() < ev("1/1000000"));
        // same fractional exponent, different mantissas
        assert!(ev("1*2^(1/6)") < ev("3*2^(1/6)"));
        // cross-class: 2^(1/2) vs 2^(1/3)
        assert!(ev("2^(1/3)") < ev("2^(1/2)"));
    }

    #[test]
    fn ratio_conventions() {
        let r = ratio(&ev("2^(-1/3)"), &ev("2^(-2/3)"));
        assert_eq!(r, ExtendedValue::Finite(ev("2^(1/3)")));
        assert_eq!(
            ratio(&ExactValue::one(), &ExactValue::zero()),
            ExtendedValue::PositiveInfinity
        );
        assert_eq!(ratio(&ExactValue::zero(), &ExactValue::zero()), ExtendedValue::one());
        assert_eq!(
            ratio(&ExactValue::zero(), &ev("7")),
            ExtendedValue::Finite(ExactValue::zero())
        );
        assert_eq!(ratio(&ev("20"), &ev("19")), ExtendedValue::Finite(ev("20/19")));
    }

    #[test]
    fn products_and_powers() {
        assert_eq!(ev("2^(1/3)").pow(3), ev("2"));
        let a = ExactValue::new(ratq(3, 2), ratq(1, 2));
        let b = ExactValue::new(rat(2), ratq(1, 2));
        assert_eq!(&a * &b, ev("6"));
        assert_eq!(ExactValue::zero().pow(5), ExactValue::zero());
        assert_eq!(ExactValue::zero().pow(0), ExactValue::one());
        assert_eq!(ev("20/19").pow(1), ev("20/19"));
        assert_eq!(&ev("0") * &ev("2^(5/6)"), ExactValue::zero());
    }

    #[test]
    fn partial_addition() {
        assert_eq!(ev("1/2").checked_add(&ev("1/2")), Some(ExactValue::one()));
        assert_eq!(
            ev("2^(1/3)").checked_add(&ev("2^(4/3)")),
            Some(ExactValue::new(rat(3), ratq(1, 3)))
        );
        assert_eq!(ev("1").checked_add(&ev("2^(1/3)")), None);
        assert_eq!(ev("1/2").checked_add(&ev("2^(-2/3)")), None);
        assert_eq!(ev("0").checked_add(&ev("2^(1/3)")), Some(ev("2^(1/3)")));
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "0",
            "1",
            "1/2",
            "20/19",
            "6",
            "1*2^(1/3)",
            "1*2^(-5/6)",
            "3*2^(1/3)",
            "5/19*2^(1/6)",
        ] {
            let v = ev(s);
            assert_eq!(v.to_string(), s, "canonical form should round-trip");
            assert_eq!(ev(&v.to_string()), v);
        }
        // non-canonical spellings normalize
        assert_eq!(ev("1/2*2^(0/1)").to_string(), "1/2");
        assert_eq!(ev("2^(2/2)").to_string(), "2");
        assert_eq!(ev("2^3"), ev("8"));
        assert_eq!(ev("4*2^(1/3)").to_string(), "1*2^(7/3)");
        assert_eq!(ev(" 20/19 "), ev("20/19"));
    }

    #[test]
    fn parse_rejections() {
        for s in ["", "-1", "1/0", "2^(1/0)", "x", "1.5", "1*2^", "2^(1/3", "--2"] {
            assert!(s.parse::<ExactValue>().is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn extended_ordering() {
        let inf = ExtendedValue::PositiveInfinity;
        let one = ExtendedValue::one();
        assert!(inf > one);
        assert_eq!(inf.cmp(&inf), Ordering::Equal);
        assert!(ExtendedValue::Finite(ev("20/19")) > one);
        assert_eq!("inf".parse::<ExtendedValue>().unwrap(), inf);
        assert_eq!(
            "20/19".parse::<ExtendedValue>().unwrap(),
            ExtendedValue::Finite(ev("20/19"))
        );
    }

    #[test]
    fn sum_comparison_across_classes() {
        // 1/2 + 2^(-2/3) > 1  (subadditivity-style comparison)
        assert_eq!(
            compare_sums(&[ev("1/2"), ev("2^(-2/3)")], &[ev("1")]),
            Ordering::Greater
        );
        assert_eq!(
            compare_sums(&[ev("1/2"), ev("1/2")], &[ev("1")]),
            Ordering::Equal
        );
        assert_eq!(compare_sums(&[ev("5/4")], &[ev("2^(1/3)")]), Ordering::Less);
        assert_eq!(compare_sums(&[], &[]), Ordering::Equal);
        assert_eq!(compare_sums(&[ev("0")], &[]), Ordering::Equal);
        // tight mixed-sign case that needs interval refinement:
        // 2^(1/2) + 2^(1/3) vs 2 + 3/4:  1.4142 + 1.2599 = 2.6741 < 2.75
        assert_eq!(
            compare_sums(&[ev("2^(1/2)"), ev("2^(1/3)")], &[ev("11/4")]),
            Ordering::Less
        );
        assert_eq!(
            compare_sums(&[ev("2^(1/2)"), ev("2^(1/3)")], &[ev("267/100")]),
            Ordering::Greater
        );
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(ev("2^(1/3)").to_decimal(12), "1.25992104989");
        assert_eq!(ev("20/19").to_decimal(12), "1.05263157895");
        assert_eq!(ev("1/3").to_decimal(12), "0.333333333333");
        assert_eq!(ev("20").to_decimal(12), "20");
        assert_eq!(ev("1/2").to_decimal(12), "0.5");
        assert_eq!(ev("0").to_decimal(12), "0");
        assert_eq!(ev("2^(1/6)").to_decimal(12), "1.12246204831");
        assert_eq!(ev("1000000000000000").to_decimal(12), "1000000000000000");
        assert_eq!(ev("2^100").to_decimal(12), "1.26765060023e30");
        assert_eq!(ev("2^(-100)").to_decimal(12), "7.88860905221e-31");
        assert_eq!(ev("2^(1/2)").to_decimal(5), "1.4142");
        assert_eq!(ExtendedValue::PositiveInfinity.to_decimal(12), "inf");
    }

    #[test]
    fn high_precision_cross_check_on_seeded_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_cafe);
        let mut checked = 0u32;
        for _ in 0..1000 {
            let mut draw = || {
                let num = rng.random_range(0..=1_000_000u64);
                let den = rng.random_range(1..=1_000_000u64);
                let p = rng.random_range(-12i64..=12);
                let q = rng.random_range(1i64..=12);
                ExactValue::new(
                    Rational::new(BigInt::from(num), BigInt::from(den)),
                    Rational::new(BigInt::from(p), BigInt::from(q)),
                )
            };
            let a = draw();
            let b = draw();
            // 300 fractional bits: certain whenever the true gap > 2^-128
            if let Some(expected) = approx_cmp(&a, &b, 300) {
                assert_eq!(a.cmp(&b), expected, "disagrees on {a} vs {b}");
                checked += 1;
            } else {
                assert_eq!(a.cmp(&b), Ordering::Equal);
            }
        }
        assert!(checked > 900, "oracle resolved only {checked} of 1000 pairs");
    }
}
