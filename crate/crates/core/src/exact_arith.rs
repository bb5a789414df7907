//! Exact rational arithmetic and graded π-numbers.
//!
//! Every quantity in the volume pipeline is a finite sum `Σ q_e · π^e` with
//! rational `q_e` and even integer `e`. [`PiValue`] stores such sums exactly;
//! [`frak_z`] produces the normalized even zeta values that seed them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

pub use num_rational::BigRational;

/// π to 100 decimal places.
pub const PI_100: &str = "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

/// Largest number of decimal digits [`PiValue`] rendering will produce.
pub const MAX_DECIMAL_DIGITS: usize = 90;

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(2k - 1)!!` style double factorial for odd arguments; `(-1)!! = 1`.
pub fn odd_double_factorial(n: i64) -> BigInt {
    assert!(n >= -1 && n % 2 != 0, "odd double factorial of {n}");
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Bernoulli number `B_n` with the `B_1 = -1/2` convention.
pub fn bernoulli(n: usize) -> BigRational {
    if let Some(b) = BERNOULLI.read().unwrap().get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().unwrap();
    // Another writer may have extended the table in the meantime; the values
    // are deterministic so resuming from whatever length we find is sound.
    while table.len() <= n {
        let m = table.len();
        if m == 0 {
            table.push(BigRational::one());
            continue;
        }
        let mut sum = BigRational::zero();
        for (k, b) in table.iter().enumerate() {
            sum += b * rat_int(binomial(m as u32 + 1, k as u32));
        }
        table.push(-sum / rat_int(m as u64 + 1));
    }
    table[n].clone()
}

/// `ζ(k)` for even `k ≥ 2`, as the exact monomial `q · π^k`.
pub fn zeta_even(k: i64) -> Result<PiValue, Error> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Domain(format!(
            "zeta_even needs a positive even argument, got {k}"
        )));
    }
    let b = bernoulli(k as usize);
    let sign = if (k / 2 + 1) % 2 == 0 { 1 } else { -1 };
    let q = b * rat_int(sign) * rat_int(BigInt::one() << (k - 1) as usize)
        / rat_int(factorial(k as u32));
    Ok(PiValue::monomial(q, k))
}

/// Rational coefficient of `𝔷(k)`; the π-exponent is always `k`.
pub fn frak_z_coeff(k: i64) -> BigRational {
    if k < 0 || k % 2 != 0 {
        return BigRational::zero();
    }
    if k == 0 {
        // (2 - 4) · ζ(0) with ζ(0) = -1/2
        return BigRational::one();
    }
    let zeta = zeta_even(k).expect("even k >= 2");
    let factor = rat_int(2) - BigRational::new(BigInt::one(), BigInt::one() << (k - 2) as usize);
    factor * zeta.coeff(k)
}

/// `𝔷(k) = (2 - 2^{2-k}) ζ(k)` for even `k ≥ 0`, zero otherwise.
pub fn frak_z(k: i64) -> PiValue {
    PiValue::monomial(frak_z_coeff(k), k)
}

/// A finite sum `Σ q_e · π^e` over even exponents `e` with exact rational `q_e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiValue {
    terms: BTreeMap<i64, BigRational>,
}

impl PiValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        Self::monomial(q, 0)
    }

    /// `q · π^exp`. Panics on an odd exponent with a nonzero coefficient.
    pub fn monomial(q: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            assert!(exp % 2 == 0, "π-exponent must be even, got {exp}");
            terms.insert(exp, q);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `π^exp` (zero when absent).
    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.terms.iter().map(|(e, q)| (*e, q))
    }

    /// `(q, e)` when the value is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(&BigRational, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(e, q)| (q, *e))
    }

    /// True when the value is zero or every term sits at exponent `exp`.
    pub fn is_homogeneous_of(&self, exp: i64) -> bool {
        self.terms.keys().all(|&e| e == exp)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    /// Exact division by a nonzero monomial.
    pub fn div_monomial(&self, divisor: &PiValue) -> Result<PiValue, Error> {
        let (q, e) = divisor
            .as_monomial()
            .ok_or_else(|| Error::Domain("division by a non-monomial π-value".into()))?;
        Ok(Self {
            terms: self.terms.iter().map(|(k, c)| (k - e, c / q)).collect(),
        })
    }

    fn add_term(&mut self, exp: i64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// `q_e · P^e` summed with `P` the 100-digit rational approximation of π.
    fn approximate(&self) -> BigRational {
        let (pi_num, pi_den) = pi_fraction();
        let mut acc = BigRational::zero();
        for (&e, q) in &self.terms {
            let p = e.unsigned_abs() as usize;
            let (num, den) = (
                num_traits::pow(pi_num.clone(), p),
                num_traits::pow(pi_den.clone(), p),
            );
            let power = if e >= 0 {
                BigRational::new(num, den)
            } else {
                BigRational::new(den, num)
            };
            acc += q * power;
        }
        acc
    }

    /// Fixed-point rendering with `frac_digits` digits after the point (rounded).
    pub fn to_decimal(&self, frac_digits: usize) -> String {
        let digits = frac_digits.min(MAX_DECIMAL_DIGITS);
        let scaled = self.approximate() * rat_int(BigInt::from(10u32).pow(digits as u32));
        let n = round_half_away(&scaled);
        let negative = n.is_negative();
        let s = n.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Plain-notation rendering rounded to `sig` significant digits.
    pub fn to_significant(&self, sig: usize) -> String {
        let sig = sig.clamp(1, MAX_DECIMAL_DIGITS);
        let v = self.approximate();
        if v.is_zero() {
            return "0".into();
        }
        let negative = v.is_negative();
        let v = v.abs();
        // decimal exponent: 10^e10 <= v < 10^(e10+1)
        let mut e10: i64 = (v.numer().bits() as i64 - v.denom().bits() as i64) * 30103 / 100000;
        while pow10(e10) > v {
            e10 -= 1;
        }
        while pow10(e10 + 1) <= v {
            e10 += 1;
        }
        let shift = sig as i64 - 1 - e10;
        let mut n = round_half_away(&(v * pow10(shift)));
        if n.to_string().len() > sig {
            // rounding carried into a new leading digit
            n /= 10;
            e10 += 1;
        }
        let d = n.to_string();
        let body = if e10 < 0 {
            format!(
                "0.{}{}",
                "0".repeat((-e10 - 1) as usize),
                d.trim_end_matches('0')
            )
        } else if (e10 + 1) as usize >= d.len() {
            format!("{}{}", d, "0".repeat((e10 + 1) as usize - d.len()))
        } else {
            let (a, b) = d.split_at((e10 + 1) as usize);
            let b = b.trim_end_matches('0');
            if b.is_empty() {
                a.to_string()
            } else {
                format!("{a}.{b}")
            }
        };
        let body = if body == "0." { "0".to_string() } else { body };
        if negative {
            format!("-{body}")
        } else {
            body
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_significant(20).parse().unwrap_or(f64::NAN)
    }
}

fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        rat_int(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn round_half_away(x: &BigRational) -> BigInt {
    let (q, r) = x.numer().div_rem(x.denom());
    let twice = BigInt::from(2) * r.abs();
    if twice >= *x.denom() {
        if x.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

fn pi_fraction() -> (BigInt, BigInt) {
    let digits: String = PI_100.chars().filter(|c| c.is_ascii_digit()).collect();
    let num: BigInt = digits.parse().expect("pi digits");
    let den = BigInt::from(BigUint::from(10u32).pow((digits.len() - 1) as u32));
    (num, den)
}

impl From<BigRational> for PiValue {
    fn from(q: BigRational) -> Self {
        Self::rational(q)
    }
}

impl Add for &PiValue {
    type Output = PiValue;
    fn add(self, rhs: &PiValue) -> PiValue {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PiValue {
    type Output = PiValue;
    fn add(mut self, rhs: PiValue) -> PiValue {
        self += &rhs;
        self
    }
}

impl AddAssign<&PiValue> for PiValue {
    fn add_assign(&mut self, rhs: &PiValue) {
        for (e, q) in &rhs.terms {
            self.add_term(*e, q.clone());
        }
    }
}

impl Neg for &PiValue {
    type Output = PiValue;
    fn neg(self) -> PiValue {
        PiValue {
            terms: self.terms.iter().map(|(e, q)| (*e, -q)).collect(),
        }
    }
}

impl Neg for PiValue {
    type Output = PiValue;
    fn neg(self) -> PiValue {
        -&self
    }
}

impl Sub for &PiValue {
    type Output = PiValue;
    fn sub(self, rhs: &PiValue) -> PiValue {
        self + &(-rhs)
    }
}

impl Sub for PiValue {
    type Output = PiValue;
    fn sub(self, rhs: PiValue) -> PiValue {
        &self - &rhs
    }
}

impl Mul for &PiValue {
    type Output = PiValue;
    fn mul(self, rhs: &PiValue) -> PiValue {
        let mut out = PiValue::zero();
        for (ea, qa) in &self.terms {
            for (eb, qb) in &rhs.terms {
                out.add_term(ea + eb, qa * qb);
            }
        }
        out
    }
}

impl Mul for PiValue {
    type Output = PiValue;
    fn mul(self, rhs: PiValue) -> PiValue {
        &self * &rhs
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_abs_term(q: &BigRational, e: i64) -> String {
    let q = fmt_rational(&q.abs());
    if e == 0 {
        q
    } else {
        format!("{q} * pi^{e}")
    }
}

impl fmt::Display for PiValue {
    /// `num/den * pi^e`, terms in increasing exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, q)) in self.terms.iter().enumerate() {
            let body = fmt_abs_term(q, e);
            match (i, q.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Numeric value of a rational as `f64`, saturating for huge magnitudes.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
