//! Masur–Veech volumes of strata of Abelian differentials.
//!
//! `c(m) = ⟨𝓕_{m_1}|…|𝓕_{m_n}⟩ / (|m|!·∏ m_i)` and `ν₁(H₁(m)) = 2·c(m+1)`.
//! The principal stratum also has a closed-form sum over even partitions,
//! which serves as an independent route for `m = 1^{2g-2}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use crate::bracket::PartMultiset;
use crate::combinatorics::{partitions_of_size, Partition};
use crate::exact_arith::{
    factorial, frak_z, odd_double_factorial, rat, rat_int, BigRational, PiValue,
};
use crate::f_expansion::capital_f;
use crate::wick::multi_bracket_counted;
use crate::Error;

/// Default cap on `Σ (m_i + 1)` over the positive degrees.
pub const DEFAULT_MAX_WEIGHT: u32 = 14;

/// A stratum `H(m)`; zero entries are marked points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stratum {
    degrees: Vec<u32>,
}

impl Stratum {
    pub fn new(degrees: Vec<u32>) -> Result<Self, Error> {
        let total: u64 = degrees.iter().map(|&d| d as u64).sum();
        if !total.is_multiple_of(2) {
            return Err(Error::InvalidStratum(format!(
                "degrees sum to {total}, which is odd"
            )));
        }
        Ok(Self { degrees })
    }

    /// The principal stratum `H(1^{2g-2})`.
    pub fn principal(g: u32) -> Result<Self, Error> {
        if g == 0 {
            return Err(Error::InvalidStratum("genus must be positive".into()));
        }
        Self::new(vec![1; 2 * g as usize - 2])
    }

    /// The minimal stratum `H(2g-2)`.
    pub fn minimal(g: u32) -> Result<Self, Error> {
        match g {
            0 => Err(Error::InvalidStratum("genus must be positive".into())),
            1 => Self::new(vec![]),
            _ => Self::new(vec![2 * g - 2]),
        }
    }

    /// Degrees as given, including marked points.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Positive degrees, sorted in decreasing order.
    pub fn stripped(&self) -> Vec<u32> {
        let mut m: Vec<u32> = self.degrees.iter().copied().filter(|&d| d > 0).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    pub fn genus(&self) -> u32 {
        (self.degrees.iter().sum::<u32>() + 2) / 2
    }

    /// Number of true zeros.
    pub fn zero_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d > 0).count()
    }

    /// `2g + n - 1` with `n` the number of true zeros.
    pub fn dim_complex(&self) -> u32 {
        2 * self.genus() + self.zero_count() as u32 - 1
    }

    /// `Σ (m_i + 1)` over true zeros; the feasibility measure.
    pub fn weight(&self) -> u32 {
        self.stripped().iter().map(|d| d + 1).sum()
    }

    /// Canonical key `"m1,m2,…"`, positive degrees in decreasing order.
    pub fn key(&self) -> String {
        key_of(&self.stripped())
    }

    pub fn is_principal(&self) -> bool {
        let s = self.stripped();
        !s.is_empty() && s.iter().all(|&d| d == 1)
    }

    /// True for the strata known to split into several connected components:
    /// genus at least 3 with all degrees even, or `H(g-1, g-1)`.
    pub fn may_be_disconnected(&self) -> bool {
        let g = self.genus();
        let s = self.stripped();
        g >= 3 && (s.iter().all(|d| d % 2 == 0) || s == [g - 1, g - 1])
    }
}

pub fn key_of(stripped: &[u32]) -> String {
    stripped
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl FromStr for Stratum {
    type Err = Error;

    /// Accepts `"1,1"`, `"H(1,1)"`, `"H()"` and whitespace around tokens.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let inner = match t.strip_prefix('H').or_else(|| t.strip_prefix('h')) {
            Some(rest) => rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::InvalidStratum(format!("malformed stratum `{s}`")))?,
            None => t,
        };
        let inner = inner.trim();
        if inner.is_empty() {
            return Self::new(vec![]);
        }
        let degrees = inner
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidStratum(format!("bad degree `{}`", tok.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(degrees)
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({})", key_of(&self.degrees))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VolumeOptions {
    pub max_weight: u32,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        Self {
            max_weight: DEFAULT_MAX_WEIGHT,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Distinct argument tuples after multilinear expansion.
    pub expansion_terms: u64,
    /// Complementary partitions visited across all Wick sums.
    pub wick_terms: u64,
    /// Served from the volume table without recomputation.
    pub cached: bool,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeResult {
    pub stratum: Stratum,
    pub volume: PiValue,
    /// `4 / ∏ (m_i + 1)`.
    pub prediction: BigRational,
    /// `ε` with `volume = prediction · (1 + ε)`, 15 significant digits.
    pub relative_error: String,
    pub diagnostics: Diagnostics,
}

impl VolumeResult {
    pub fn relative_error_f64(&self) -> f64 {
        self.relative_error.parse().unwrap_or(f64::NAN)
    }
}

type CMemo = RwLock<HashMap<Vec<u32>, (PiValue, u64, u64)>>;

fn c_memo() -> &'static CMemo {
    static MEMO: OnceLock<CMemo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn volume_table() -> &'static RwLock<BTreeMap<Vec<u32>, PiValue>> {
    static TABLE: OnceLock<RwLock<BTreeMap<Vec<u32>, PiValue>>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

/// `c(m) = ⟨𝓕_{m_1}|…|𝓕_{m_n}⟩ / (|m|!·∏ m_i)`.
pub fn c_value(m: &PartMultiset) -> Result<PiValue, Error> {
    c_value_counted(m).map(|(v, _, _)| v)
}

fn c_value_counted(m: &PartMultiset) -> Result<(PiValue, u64, u64), Error> {
    if m.is_empty() {
        return Err(Error::Domain("c(m) of an empty sequence".into()));
    }
    if let Some(v) = c_memo().read().unwrap().get(m.values()) {
        return Ok(v.clone());
    }

    // Expand argument by argument, merging tuples that agree up to order.
    let mut tuples: BTreeMap<Vec<Partition>, BigRational> = BTreeMap::new();
    tuples.insert(Vec::new(), BigRational::one());
    for &k in m.values() {
        let f = capital_f(k)?;
        let mut next: BTreeMap<Vec<Partition>, BigRational> = BTreeMap::new();
        for (tuple, c) in &tuples {
            for (lambda, cl) in f.terms() {
                let mut t = tuple.clone();
                let pos = t.partition_point(|x| x <= lambda);
                t.insert(pos, lambda.clone());
                *next.entry(t).or_insert_with(BigRational::zero) += c * cl;
            }
        }
        next.retain(|_, c| !c.is_zero());
        tuples = next;
    }

    let mut sum = PiValue::zero();
    let mut wick_terms = 0;
    for (tuple, c) in &tuples {
        let w = multi_bracket_counted(tuple)?;
        wick_terms += w.complements;
        sum += &w.value.scale(c);
    }
    let norm = m
        .values()
        .iter()
        .fold(rat_int(factorial(m.total())), |acc, &x| acc * rat_int(x));
    let value = sum.scale(&(BigRational::one() / norm));
    let entry = (value, tuples.len() as u64, wick_terms);
    c_memo()
        .write()
        .unwrap()
        .entry(m.values().to_vec())
        .or_insert_with(|| entry.clone());
    Ok(entry)
}

/// `4 / ∏ (m_i + 1)` over true zeros.
pub fn prediction(s: &Stratum) -> BigRational {
    let prod: u64 = s.stripped().iter().map(|&d| d as u64 + 1).product();
    rat(4, prod as i64)
}

/// Seeds the volume table, e.g. from a persisted cache. The value must be a
/// positive monomial of exponent `2g`.
pub fn preload_volume(stripped: &[u32], value: PiValue) -> Result<(), Error> {
    let s = Stratum::new(stripped.to_vec())?;
    let expected = 2 * s.genus() as i64;
    match value.as_monomial() {
        Some((q, e)) if e == expected && q > &BigRational::zero() => {}
        _ => {
            return Err(Error::Domain(format!(
                "cached volume for {s} is not a positive multiple of pi^{expected}"
            )))
        }
    }
    volume_table().write().unwrap().insert(s.stripped(), value);
    Ok(())
}

/// Every volume computed or preloaded so far, keyed by stripped degrees.
pub fn volume_table_snapshot() -> Vec<(Vec<u32>, PiValue)> {
    volume_table()
        .read()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

/// `ν₁(H₁(m))` with the prediction and relative error.
pub fn volume(s: &Stratum, opts: VolumeOptions) -> Result<VolumeResult, Error> {
    let start = Instant::now();
    let weight = s.weight();
    if weight > opts.max_weight {
        return Err(Error::Infeasible {
            weight,
            limit: opts.max_weight,
        });
    }
    let stripped = s.stripped();
    let cached = volume_table().read().unwrap().get(&stripped).cloned();
    let mut diagnostics = Diagnostics::default();
    let vol = match cached {
        Some(v) => {
            diagnostics.cached = true;
            v
        }
        None => {
            // H() and H(0) are the torus: c((1)) with 𝓕_1 = p_1.
            let shifted: Vec<u32> = if stripped.is_empty() {
                vec![1]
            } else {
                stripped.iter().map(|d| d + 1).collect()
            };
            let (c, terms, wick) = c_value_counted(&PartMultiset::new(shifted)?)?;
            diagnostics.expansion_terms = terms;
            diagnostics.wick_terms = wick;
            let v = c.scale(&rat(2, 1));
            volume_table()
                .write()
                .unwrap()
                .entry(stripped)
                .or_insert_with(|| v.clone());
            v
        }
    };
    let pred = prediction(s);
    let ratio = vol.scale(&(BigRational::one() / &pred));
    let eps = &ratio - &PiValue::one();
    diagnostics.elapsed = start.elapsed();
    Ok(VolumeResult {
        stratum: s.clone(),
        volume: vol,
        prediction: pred,
        relative_error: eps.to_significant(15),
        diagnostics,
    })
}

/// Volume with the default feasibility guard, value only.
pub fn volume_value(s: &Stratum) -> Result<PiValue, Error> {
    volume(s, VolumeOptions::default()).map(|r| r.volume)
}

/// Volume of the principal stratum from the closed-form sum over even partitions.
pub fn principal_volume(g: u32) -> Result<PiValue, Error> {
    if g < 2 {
        return Err(Error::Domain(format!(
            "principal_volume needs g >= 2, got {g}"
        )));
    }
    let n = 2 * g - 2;
    let mut sum = PiValue::zero();
    for half in partitions_of_size(n / 2 + 1) {
        // μ = 2·half runs over the even partitions of n + 2
        let mu: Vec<u32> = half.parts().iter().map(|x| 2 * x).collect();
        let ell = mu.len() as u32;
        let mut coeff = rat_int(if ell % 2 == 1 { 1 } else { -1 });
        coeff /= rat_int(factorial(2 * n - ell + 2));
        for (_, mult) in half.multiplicities() {
            coeff /= rat_int(factorial(mult as u32));
        }
        let mut term = PiValue::rational(coeff);
        for &part in &mu {
            term = &term.scale(&rat_int(odd_double_factorial(2 * part as i64 - 3)))
                * &frak_z(part as i64);
        }
        sum += &term;
    }
    Ok(sum.scale(&rat_int(factorial(n) * 2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> Stratum {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(st("1,1").degrees(), &[1, 1]);
        assert_eq!(st(" H( 2 ) ").degrees(), &[2]);
        assert_eq!(st("H()").degrees(), &[] as &[u32]);
        assert_eq!(st("H(0,1,1)").stripped(), vec![1, 1]);
        assert!(matches!(
            "3".parse::<Stratum>(),
            Err(Error::InvalidStratum(_))
        ));
        assert!(matches!(
            "1,x".parse::<Stratum>(),
            Err(Error::InvalidStratum(_))
        ));
        assert!(matches!(
            "H(1,1".parse::<Stratum>(),
            Err(Error::InvalidStratum(_))
        ));
        assert!("-2".parse::<Stratum>().is_err());
    }

    #[test]
    fn derived_quantities() {
        let s = st("3,1,0");
        assert_eq!(s.genus(), 3);
        assert_eq!(s.zero_count(), 2);
        assert_eq!(s.dim_complex(), 7);
        assert_eq!(s.weight(), 6);
        assert_eq!(s.key(), "3,1");
        assert_eq!(s.to_string(), "H(3,1,0)");
        assert_eq!(st("1,1").dim_complex(), 5);
    }

    #[test]
    fn connectivity_flag() {
        assert!(!st("2").may_be_disconnected());
        assert!(!st("1,1").may_be_disconnected());
        assert!(st("4").may_be_disconnected());
        assert!(st("2,2").may_be_disconnected());
        assert!(!st("3,1").may_be_disconnected());
        assert!(st("3,3").may_be_disconnected());
        assert!(!st("1,1,1,1").may_be_disconnected());
    }

    #[test]
    fn c_value_examples() {
        let c = |v: &[u32]| c_value(&PartMultiset::new(v.to_vec()).unwrap()).unwrap();
        assert_eq!(c(&[3]), PiValue::monomial(rat(1, 240), 4));
        assert_eq!(c(&[2, 2]), PiValue::monomial(rat(1, 270), 4));
        assert_eq!(c(&[1]), PiValue::monomial(rat(1, 6), 2));
        assert!(c_value(&PartMultiset::new(vec![]).unwrap()).is_err());
    }

    #[test]
    fn volume_examples() {
        assert_eq!(
            volume_value(&st("2")).unwrap(),
            PiValue::monomial(rat(1, 120), 4)
        );
        assert_eq!(
            volume_value(&st("1,1")).unwrap(),
            PiValue::monomial(rat(1, 135), 4)
        );
        assert_eq!(
            volume_value(&st("0,1,1")).unwrap(),
            PiValue::monomial(rat(1, 135), 4)
        );
        assert_eq!(
            volume_value(&st("H()")).unwrap(),
            PiValue::monomial(rat(1, 3), 2)
        );
        assert_eq!(
            volume_value(&st("0")).unwrap(),
            PiValue::monomial(rat(1, 3), 2)
        );
    }

    #[test]
    fn feasibility_guard() {
        let s = st("1,1,1,1,1,1,1,1");
        assert_eq!(s.weight(), 16);
        assert!(matches!(
            volume(&s, VolumeOptions::default()),
            Err(Error::Infeasible {
                weight: 16,
                limit: 14
            })
        ));
    }

    #[test]
    fn predictions() {
        assert_eq!(prediction(&st("2")), rat(4, 3));
        assert_eq!(prediction(&st("1,1")), rat(1, 1));
        for g in 2..6 {
            assert_eq!(
                prediction(&Stratum::minimal(g).unwrap()),
                rat(4, 2 * g as i64 - 1)
            );
        }
    }

    #[test]
    fn principal_closed_form() {
        assert_eq!(
            principal_volume(2).unwrap(),
            PiValue::monomial(rat(1, 135), 4)
        );
        assert!(principal_volume(1).is_err());
    }

    #[test]
    fn relative_error_reported() {
        let r = volume(&st("1,1"), VolumeOptions::default()).unwrap();
        // π⁴/135 - 1
        assert!(
            r.relative_error.starts_with("-0.27845117752590"),
            "{}",
            r.relative_error
        );
        assert_eq!(r.prediction, rat(1, 1));
    }

    #[test]
    fn preload_validates_exponent() {
        assert!(preload_volume(&[2], PiValue::monomial(rat(1, 120), 6)).is_err());
        assert!(preload_volume(&[2], PiValue::monomial(rat(-1, 120), 4)).is_err());
        assert!(preload_volume(&[2], PiValue::monomial(rat(1, 120), 4)).is_ok());
    }
}
