//! `𝓕_k = k·𝔣_k` expanded in the `p_λ` basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::combinatorics::{partitions_of_weight, Partition};
use crate::exact_arith::{factorial, rat_int, BigRational};
use crate::Error;

/// Finite linear combination `Σ c_λ p_λ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PLinearCombo {
    terms: BTreeMap<Partition, BigRational>,
}

impl PLinearCombo {
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: &Partition) -> BigRational {
        self.terms
            .get(lambda)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, lambda: Partition, c: BigRational) {
        if !c.is_zero() {
            self.terms.insert(lambda, c);
        }
    }
}

impl fmt::Display for PLinearCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, c)| format!("{c}*p{l}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `𝓕_k = Σ_{wt(λ)=k+1} (-k)^{ℓ(λ)-1} / ∏_i M_i(λ)! · p_λ`.
///
/// The same formula is used at `k = 1`, where it gives `𝓕_1 = p_1`.
pub fn capital_f(k: u32) -> Result<PLinearCombo, Error> {
    if k == 0 {
        return Err(Error::Domain("F_k needs k >= 1".into()));
    }
    let mut out = PLinearCombo::default();
    for lambda in partitions_of_weight(k + 1) {
        let ell = lambda.len() as u32;
        let mut c = num_traits::pow(rat_int(-(k as i64)), (ell - 1) as usize);
        for (_, mult) in lambda.multiplicities() {
            c /= rat_int(factorial(mult as u32));
        }
        out.insert(lambda, c);
    }
    debug_assert!(out.coeff(&Partition::new(vec![k]).unwrap()).is_one());
    Ok(out)
}
