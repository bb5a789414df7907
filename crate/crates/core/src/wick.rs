//! Multi-fold inner products `⟨p_{λ⁽¹⁾}|…|p_{λ⁽ⁿ⁾}⟩` via the Wick-type sum.
//!
//! The parts of all arguments are laid out on consecutive global slots; `rho`
//! groups the slots of each argument into an interval. Every set partition
//! complementary to `rho` contributes the product of single brackets over its
//! blocks, each block reading the part values sitting on its slots.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rayon::prelude::*;

use crate::bracket::{single_bracket, PartMultiset};
use crate::combinatorics::{complementary_partitions, Partition, SetPartition};
use crate::exact_arith::PiValue;
use crate::Error;

/// Slot layout of an argument list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSlotMap {
    args: Vec<Partition>,
    slot_values: Vec<u32>,
    rho: SetPartition,
}

impl LabeledSlotMap {
    pub fn new(args: &[Partition]) -> Result<Self, Error> {
        if args.is_empty() {
            return Err(Error::Domain(
                "inner product of an empty argument list".into(),
            ));
        }
        if args.iter().any(Partition::is_empty) {
            return Err(Error::Domain("inner product argument with no parts".into()));
        }
        let slot_values = args
            .iter()
            .flat_map(|p| p.parts().iter().copied())
            .collect();
        let lengths: Vec<usize> = args.iter().map(Partition::len).collect();
        Ok(Self {
            args: args.to_vec(),
            slot_values,
            rho: SetPartition::intervals(&lengths),
        })
    }

    pub fn args(&self) -> &[Partition] {
        &self.args
    }

    pub fn slot_values(&self) -> &[u32] {
        &self.slot_values
    }

    pub fn rho(&self) -> &SetPartition {
        &self.rho
    }

    /// Part values on the slots of one block of a complementary partition.
    pub fn block_values(&self, block: &[usize]) -> Vec<u32> {
        block.iter().map(|&u| self.slot_values[u]).collect()
    }

    /// Total size `S` and total length `T`.
    pub fn size_and_length(&self) -> (u32, usize) {
        (self.slot_values.iter().sum(), self.slot_values.len())
    }

    /// π-exponent `S + T - 2n + 2` of a nonzero result.
    pub fn degree(&self) -> i64 {
        let (s, t) = self.size_and_length();
        s as i64 + t as i64 - 2 * self.args.len() as i64 + 2
    }

    /// Product of single brackets over the blocks of `alpha`; zero as soon as a factor vanishes.
    pub fn term(&self, alpha: &SetPartition) -> Result<PiValue, Error> {
        let mut acc = PiValue::one();
        for block in alpha.blocks() {
            let factor = single_bracket(&PartMultiset::new(self.block_values(block))?)?;
            if factor.is_zero() {
                return Ok(PiValue::zero());
            }
            acc = &acc * &factor;
        }
        Ok(acc)
    }
}

/// Result of one Wick evaluation with its term count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WickValue {
    pub value: PiValue,
    pub complements: u64,
}

type Memo = RwLock<HashMap<Vec<Partition>, WickValue>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Argument order does not change the value, so the memo key is the sorted list.
fn canonical_key(args: &[Partition]) -> Vec<Partition> {
    let mut key = args.to_vec();
    key.sort_unstable();
    key
}

/// `⟨p_{λ⁽¹⁾}|…|p_{λ⁽ⁿ⁾}⟩` with diagnostics.
pub fn multi_bracket_counted(args: &[Partition]) -> Result<WickValue, Error> {
    let key = canonical_key(args);
    if let Some(v) = memo().read().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let slots = LabeledSlotMap::new(&key)?;
    let (value, complements) = complementary_partitions(slots.rho())
        .par_bridge()
        .map(|alpha| slots.term(&alpha).map(|t| (t, 1u64)))
        .try_reduce(
            || (PiValue::zero(), 0),
            |(a, n), (b, m)| Ok((&a + &b, n + m)),
        )?;
    let result = WickValue { value, complements };
    memo()
        .write()
        .unwrap()
        .entry(key)
        .or_insert_with(|| result.clone());
    Ok(result)
}

/// `⟨p_{λ⁽¹⁾}|…|p_{λ⁽ⁿ⁾}⟩`.
pub fn multi_bracket(args: &[Partition]) -> Result<PiValue, Error> {
    multi_bracket_counted(args).map(|w| w.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::bracket_of;
    use crate::exact_arith::rat;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            multi_bracket(&[p(&[1, 1])]).unwrap(),
            PiValue::monomial(rat(1, 36), 4)
        );
        assert_eq!(
            multi_bracket(&[p(&[3])]).unwrap(),
            PiValue::monomial(rat(7, 60), 4)
        );
        assert_eq!(
            multi_bracket(&[p(&[2]), p(&[2])]).unwrap(),
            PiValue::monomial(rat(16, 45), 4)
        );
        assert_eq!(
            multi_bracket(&[p(&[2]), p(&[2]), p(&[2]), p(&[2])]).unwrap(),
            bracket_of(&[2, 2, 2, 2]).unwrap()
        );
    }

    #[test]
    fn empty_arguments_rejected() {
        assert!(multi_bracket(&[]).is_err());
        assert!(multi_bracket(&[p(&[1]), Partition::default()]).is_err());
    }

    #[test]
    fn slot_rule_matches_worked_example() {
        // three arguments of lengths 3, 1, 2 and α = ({1,4},{2,6},{3},{5}) one-based
        let args = [p(&[30, 20, 10]), p(&[7]), p(&[5, 3])];
        let slots = LabeledSlotMap::new(&args).unwrap();
        assert_eq!(slots.rho(), &SetPartition::intervals(&[3, 1, 2]));
        let alpha =
            SetPartition::from_blocks(6, vec![vec![0, 3], vec![1, 5], vec![2], vec![4]]).unwrap();
        let blocks: Vec<Vec<u32>> = alpha
            .blocks()
            .iter()
            .map(|b| slots.block_values(b))
            .collect();
        // λ¹₁,λ²₁ | λ¹₂,λ³₂ | λ¹₃ | λ³₁
        assert_eq!(blocks, vec![vec![30, 7], vec![20, 3], vec![10], vec![5]]);
    }

    #[test]
    fn degree_formula() {
        let slots = LabeledSlotMap::new(&[p(&[3, 1]), p(&[2])]).unwrap();
        assert_eq!(slots.size_and_length(), (6, 3));
        assert_eq!(slots.degree(), 6 + 3 - 4 + 2);
    }
}
