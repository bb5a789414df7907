//! Siegel–Veech constants of multiplicity-one configurations, as exact
//! rational multiples of volume ratios.
//!
//! Constants counting saddle connections between distinct zeros compare two
//! strata of the same genus and come out rational. Constants counting loops,
//! cylinders and handles compare genus `g - 1` with genus `g` and come out as a
//! rational multiple of `π^{-2}`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::exact_arith::{factorial, rat, rat_int, BigRational, PiValue};
use crate::volumes::{volume, Stratum, VolumeOptions};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SvKind {
    /// Saddle connections joining two distinct zeros.
    Sc,
    /// Pairs of homologous saddle connections, principal stratum.
    Sc2,
    /// Saddle connections from a zero to itself, all return angles.
    Loop,
    /// Saddle connections from a zero to itself, one return angle.
    LoopPerAngle,
    /// Cylinders with two distinct zeros on their boundaries.
    Cyl,
    /// Cylinders with the same zero on both boundaries.
    Handle,
    /// All cylinders of multiplicity one.
    Cyl1,
    /// Area-weighted count of cylinders of multiplicity one.
    Area1,
}

impl SvKind {
    pub const ALL: [SvKind; 8] = [
        SvKind::Sc,
        SvKind::Sc2,
        SvKind::Loop,
        SvKind::LoopPerAngle,
        SvKind::Cyl,
        SvKind::Handle,
        SvKind::Cyl1,
        SvKind::Area1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SvKind::Sc => "sc",
            SvKind::Sc2 => "sc2",
            SvKind::Loop => "loop",
            SvKind::LoopPerAngle => "loop_per_angle",
            SvKind::Cyl => "cyl",
            SvKind::Handle => "handle",
            SvKind::Cyl1 => "cyl1",
            SvKind::Area1 => "area1",
        }
    }

    /// π-exponent every nonzero value of this kind carries.
    pub fn pi_exponent(self) -> i64 {
        match self {
            SvKind::Sc | SvKind::Sc2 => 0,
            _ => -2,
        }
    }
}

impl fmt::Display for SvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SvKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown Siegel-Veech kind `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvResult {
    pub kind: SvKind,
    pub value: PiValue,
    /// Leading large-genus term (for `sc2`, the bound on its rational prefactor sum).
    pub predictor: BigRational,
    pub stratum: Stratum,
    /// Zero-based indices into `stratum.degrees()`.
    pub zeros: Vec<usize>,
    pub angle: Option<u32>,
    pub warnings: Vec<String>,
}

impl SvResult {
    /// `value / predictor - 1` as a decimal, `None` when the predictor is zero.
    pub fn relative_deviation(&self, sig: usize) -> Option<String> {
        if self.predictor.is_zero() {
            return None;
        }
        let ratio = self
            .value
            .scale(&(BigRational::from_integer(1.into()) / &self.predictor));
        Some((&ratio - &PiValue::one()).to_significant(sig))
    }
}

/// Shared context: volume options used for every lookup.
#[derive(Clone, Copy, Debug, Default)]
pub struct SvContext {
    pub volume_opts: VolumeOptions,
}

impl SvContext {
    fn vol(&self, degrees: Vec<u32>) -> Result<PiValue, Error> {
        volume(&Stratum::new(degrees)?, self.volume_opts).map(|r| r.volume)
    }

    fn ratio(&self, numer: Vec<u32>, s: &Stratum) -> Result<PiValue, Error> {
        self.vol(numer)?
            .div_monomial(&self.vol(s.degrees().to_vec())?)
    }

    fn result(
        &self,
        kind: SvKind,
        value: PiValue,
        predictor: BigRational,
        s: &Stratum,
        zeros: Vec<usize>,
        angle: Option<u32>,
    ) -> SvResult {
        let mut warnings = Vec::new();
        if s.may_be_disconnected() {
            warnings.push(format!(
                "{s} has several connected components; the formula assumes a connected stratum"
            ));
        }
        if kind == SvKind::Sc2 && s.genus() >= 2 {
            warnings.push("genus-1 factors use the torus volume pi^2/3".into());
        }
        SvResult {
            kind,
            value,
            predictor,
            stratum: s.clone(),
            zeros,
            angle,
            warnings,
        }
    }

    /// `c^{sc}_{m_i,m_j} = (m_i + m_j + 1)·ν(m')/ν(m)`, `m'` merging `m_i` and `m_j`.
    pub fn sc_constant(&self, s: &Stratum, i: usize, j: usize) -> Result<SvResult, Error> {
        let d = s.degrees();
        check_pair(d, i, j)?;
        let (a, b) = (d[i], d[j]);
        let mut merged: Vec<u32> = without(d, &[i, j]);
        merged.push(a + b);
        let value = self.ratio(merged, s)?.scale(&rat_int(a + b + 1));
        let predictor = rat_int((a as u64 + 1) * (b as u64 + 1));
        Ok(self.result(SvKind::Sc, value, predictor, s, vec![i, j], None))
    }

    /// `c^{sc;2}_{1,1}(H(1^{2g-2}))`.
    pub fn sc2_principal(&self, g: u32) -> Result<SvResult, Error> {
        if g < 2 {
            return Err(Error::Domain(format!("sc2 needs g >= 2, got {g}")));
        }
        let s = Stratum::principal(g)?;
        let whole = self.vol(s.degrees().to_vec())?;
        let mut sum = PiValue::zero();
        for g1 in 1..g {
            let g2 = g - g1;
            let a = sc2_prefactor(g, g1);
            let v1 = self.vol(vec![1; 2 * g1 as usize - 2])?;
            let v2 = self.vol(vec![1; 2 * g2 as usize - 2])?;
            sum += &(&v1 * &v2).div_monomial(&whole)?.scale(&a);
        }
        let value = sum.scale(&rat(1, 4));
        let predictor = rat(g as i64 - 1, (4 * g as i64 - 5) * (4 * g as i64 - 6));
        Ok(self.result(SvKind::Sc2, value, predictor, &s, vec![], None))
    }

    /// Loops at zero `i` returning at angle `(2j+1)π`, `1 ≤ j ≤ m_i - 1`.
    pub fn loop_per_angle(&self, s: &Stratum, i: usize, j: u32) -> Result<SvResult, Error> {
        let d = s.degrees();
        check_index(d, i)?;
        let mi = d[i];
        if mi < 2 {
            // a closed saddle connection at a simple zero always bounds a cylinder
            return Ok(self.result(
                SvKind::LoopPerAngle,
                PiValue::zero(),
                BigRational::zero(),
                s,
                vec![i],
                Some(j),
            ));
        }
        if j == 0 || j >= mi {
            return Err(Error::Domain(format!(
                "angle index {j} outside 1..={} for a zero of degree {mi}",
                mi - 1
            )));
        }
        let (b1, b2) = (j - 1, mi - j - 1);
        let value = self.loop_term(s, i, b1, b2)?;
        let predictor = if b1 == b2 {
            rat(mi as i64 + 1, 2)
        } else {
            rat_int(mi + 1)
        };
        Ok(self.result(SvKind::LoopPerAngle, value, predictor, s, vec![i], Some(j)))
    }

    fn loop_term(&self, s: &Stratum, i: usize, b1: u32, b2: u32) -> Result<PiValue, Error> {
        let mut m2 = without(s.degrees(), &[i]);
        m2.extend([b1, b2]);
        let symmetry = if b1 == b2 { 2 } else { 1 };
        let factor = rat((b1 as i64 + 1) * (b2 as i64 + 1), symmetry);
        Ok(self.ratio(m2, s)?.scale(&factor))
    }

    /// Loops at zero `i` over all return angles, each unordered angle pair once.
    pub fn loop_constant(&self, s: &Stratum, i: usize) -> Result<SvResult, Error> {
        let d = s.degrees();
        check_index(d, i)?;
        let mi = d[i];
        let mut value = PiValue::zero();
        if mi >= 2 {
            for b1 in 0..=(mi - 2) / 2 {
                value += &self.loop_term(s, i, b1, mi - 2 - b1)?;
            }
        }
        let predictor = rat((mi as i64 + 1) * (mi as i64 - 1), 2);
        Ok(self.result(SvKind::Loop, value, predictor, s, vec![i], None))
    }

    /// `m_i·m_j/(dim - 2)·ν(m')/ν(m)` with `m'` lowering both degrees by one.
    pub fn cyl_constant(&self, s: &Stratum, i: usize, j: usize) -> Result<SvResult, Error> {
        let d = s.degrees();
        check_pair(d, i, j)?;
        let (a, b) = (d[i], d[j]);
        if a == 0 || b == 0 {
            return Err(Error::Domain("cylinder constants need true zeros".into()));
        }
        let dim = s.dim_complex() as i64;
        let mut m2 = without(d, &[i, j]);
        m2.extend([a - 1, b - 1]);
        let value = self.ratio(m2, s)?.scale(&rat(a as i64 * b as i64, dim - 2));
        let predictor = rat((a as i64 + 1) * (b as i64 + 1), dim - 2);
        Ok(self.result(SvKind::Cyl, value, predictor, s, vec![i, j], None))
    }

    /// `(m_i - 1)²/(2(dim - 2))·ν(m')/ν(m)` with `m'` lowering `m_i` by two.
    pub fn handle_constant(&self, s: &Stratum, i: usize) -> Result<SvResult, Error> {
        let d = s.degrees();
        check_index(d, i)?;
        let mi = d[i];
        if mi == 0 {
            return Err(Error::Domain("handle constants need a true zero".into()));
        }
        let dim = s.dim_complex() as i64;
        let predictor = rat((mi as i64 + 1) * (mi as i64 - 1), 2 * (dim - 2));
        if mi == 1 {
            return Ok(self.result(SvKind::Handle, PiValue::zero(), predictor, s, vec![i], None));
        }
        let mut m2 = without(d, &[i]);
        m2.push(mi - 2);
        let k = mi as i64 - 1;
        let value = self.ratio(m2, s)?.scale(&rat(k * k, 2 * (dim - 2)));
        Ok(self.result(SvKind::Handle, value, predictor, s, vec![i], None))
    }

    /// Constituents of [`Self::cyl1_total`]: every pair of true zeros, then every true zero.
    pub fn cyl1_constituents(&self, s: &Stratum) -> Result<Vec<SvResult>, Error> {
        let zeros: Vec<usize> = (0..s.degrees().len())
            .filter(|&i| s.degrees()[i] > 0)
            .collect();
        let mut out = Vec::new();
        for (a, &i) in zeros.iter().enumerate() {
            for &j in &zeros[a + 1..] {
                out.push(self.cyl_constant(s, i, j)?);
            }
        }
        for &i in &zeros {
            out.push(self.handle_constant(s, i)?);
        }
        Ok(out)
    }

    /// All cylinders of multiplicity one.
    pub fn cyl1_total(&self, s: &Stratum) -> Result<SvResult, Error> {
        if s.genus() < 2 {
            return Err(Error::Domain("cylinder counts need genus >= 2".into()));
        }
        let mut value = PiValue::zero();
        for part in self.cyl1_constituents(s)? {
            value += &part.value;
        }
        let dim = s.dim_complex() as i64;
        let predictor = rat((dim - 2) * (dim - 2) - 1, 2 * (dim - 2));
        Ok(self.result(SvKind::Cyl1, value, predictor, s, vec![], None))
    }

    /// Area-weighted cylinders of multiplicity one: `cyl1_total / (dim - 1)`.
    pub fn area1_constant(&self, s: &Stratum) -> Result<SvResult, Error> {
        let total = self.cyl1_total(s)?;
        let dim = s.dim_complex() as i64;
        let value = total.value.scale(&rat(1, dim - 1));
        Ok(self.result(SvKind::Area1, value, rat(1, 2), s, vec![], None))
    }
}

/// `(2g-4)!(4g₁-3)!(4g₂-3)! / ((2g₁-2)!(2g₂-2)!(4g-5)!)` with `g₂ = g - g₁`.
pub fn sc2_prefactor(g: u32, g1: u32) -> BigRational {
    let g2 = g - g1;
    let num = factorial(2 * g - 4) * factorial(4 * g1 - 3) * factorial(4 * g2 - 3);
    let den = factorial(2 * g1 - 2) * factorial(2 * g2 - 2) * factorial(4 * g - 5);
    BigRational::new(num, den)
}

fn check_index(d: &[u32], i: usize) -> Result<(), Error> {
    if i >= d.len() {
        return Err(Error::Domain(format!(
            "zero index {} out of range for {} entries",
            i + 1,
            d.len()
        )));
    }
    Ok(())
}

fn check_pair(d: &[u32], i: usize, j: usize) -> Result<(), Error> {
    check_index(d, i)?;
    check_index(d, j)?;
    if i == j {
        return Err(Error::Domain("the two zero indices must differ".into()));
    }
    Ok(())
}

fn without(d: &[u32], skip: &[usize]) -> Vec<u32> {
    d.iter()
        .enumerate()
        .filter(|(k, _)| !skip.contains(k))
        .map(|(_, &x)| x)
        .collect()
}
