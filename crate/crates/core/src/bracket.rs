//! The single bracket `⟨m_1|…|m_n⟩ = |m|!·𝔷(|m|-n+2) + ℰ(m)`.
//!
//! `ℰ(m)` sums over reduced set partitions `α` of the `n` slots with at least
//! two blocks. A summand depends on `α` only through the multiset of
//! `(block sum, block size)` pairs, so partitions are first bucketed by that
//! signature and each signature is evaluated once.
//!
//! For a fixed signature the inner sum over `d ∈ Δ(α)` is the coefficient of
//! `x^{ℓ-2}` in `∏_i P_i(x)` where `P_i(x) = Σ_d s_i!·𝔷(s_i - a_i - d + 1)·x^d/d!`.
//! Every product of `𝔷` values reaching that coefficient carries the same
//! π-exponent `|m| - n + 2`, so the evaluation runs on rational coefficients.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::set_partitions;
use crate::exact_arith::{factorial, frak_z_coeff, rat_int, BigRational, PiValue};
use crate::Error;

/// A multiset of positive integers, stored sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartMultiset(Vec<u32>);

impl PartMultiset {
    pub fn new(mut values: Vec<u32>) -> Result<Self, Error> {
        if values.contains(&0) {
            return Err(Error::Domain("bracket arguments must be positive".into()));
        }
        values.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(values))
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// π-exponent `|m| - n + 2` of a nonzero bracket.
    pub fn degree(&self) -> i64 {
        self.total() as i64 - self.len() as i64 + 2
    }
}

impl fmt::Display for PartMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "<{}>", parts.join("|"))
    }
}

type Memo = RwLock<HashMap<Vec<u32>, PiValue>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `ℰ(m)`.
pub fn error_term(m: &PartMultiset) -> Result<PiValue, Error> {
    if m.is_empty() {
        return Err(Error::Domain("bracket of an empty sequence".into()));
    }
    let values = m.values();
    let mut signatures: HashMap<Vec<(u32, u32)>, u64> = HashMap::new();
    for alpha in set_partitions(values.len()).filter(|a| a.len() >= 2) {
        let mut sig: Vec<(u32, u32)> = alpha
            .blocks()
            .iter()
            .map(|b| (b.iter().map(|&i| values[i]).sum(), b.len() as u32))
            .collect();
        sig.sort_unstable();
        *signatures.entry(sig).or_insert(0) += 1;
    }

    let mut total = BigRational::zero();
    for (sig, count) in signatures {
        let ell = sig.len();
        let inner = delta_sum(&sig);
        if inner.is_zero() {
            continue;
        }
        let sign = if ell % 2 == 0 { -1 } else { 1 };
        total += inner * rat_int(factorial(ell as u32 - 2) * sign * BigInt::from(count));
    }
    Ok(PiValue::monomial(total, m.degree()))
}

/// `Σ_{d ∈ Δ} ∏_i s_i!·𝔷(s_i - a_i - d_i + 1)/d_i!` via truncated polynomial products.
fn delta_sum(sig: &[(u32, u32)]) -> BigRational {
    let top = sig.len() - 2;
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); top + 1];
    acc[0] = rat_int(1);
    for &(s, a) in sig {
        let sf = rat_int(factorial(s));
        let base = s as i64 - a as i64 + 1;
        // 𝔷 vanishes for odd or negative arguments, so most d drop out here
        let poly: Vec<BigRational> = (0..=top)
            .map(|d| {
                let z = frak_z_coeff(base - d as i64);
                if z.is_zero() {
                    z
                } else {
                    &sf * z / rat_int(factorial(d as u32))
                }
            })
            .collect();
        let mut next = vec![BigRational::zero(); top + 1];
        for (i, x) in acc.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in poly.iter().enumerate().take(top + 1 - i) {
                if !y.is_zero() {
                    next[i + j] += x * y;
                }
            }
        }
        acc = next;
        if acc.iter().all(Zero::is_zero) {
            return BigRational::zero();
        }
    }
    acc.pop().unwrap_or_else(BigRational::zero)
}

/// `⟨m⟩`, memoized on the sorted multiset.
pub fn single_bracket(m: &PartMultiset) -> Result<PiValue, Error> {
    if m.is_empty() {
        return Err(Error::Domain("bracket of an empty sequence".into()));
    }
    if let Some(v) = memo().read().unwrap().get(m.values()) {
        return Ok(v.clone());
    }
    let main = PiValue::monomial(
        rat_int(factorial(m.total())) * frak_z_coeff(m.degree()),
        m.degree(),
    );
    let value = &main + &error_term(m)?;
    memo()
        .write()
        .unwrap()
        .entry(m.values().to_vec())
        .or_insert_with(|| value.clone());
    Ok(value)
}

/// Convenience wrapper over [`single_bracket`] for raw values.
pub fn bracket_of(values: &[u32]) -> Result<PiValue, Error> {
    single_bracket(&PartMultiset::new(values.to_vec())?)
}
