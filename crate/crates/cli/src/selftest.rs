//! Built-in oracle suite, one line per check.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use strata_core::bracket::{bracket_of, error_term, PartMultiset};
use strata_core::combinatorics::{
    complementary_partitions, partitions_of_size, set_partitions, Partition, SetPartition,
};
use strata_core::exact_arith::{binomial, factorial, rat, rational_to_f64, PiValue};
use strata_core::siegel_veech::{SvContext, SvKind};
use strata_core::volumes::{principal_volume, volume, VolumeOptions};
use strata_core::wick::{multi_bracket, LabeledSlotMap};
use strata_core::Stratum;

pub struct Check {
    pub id: u32,
    pub title: &'static str,
    pub run: fn(VolumeOptions) -> Result<(), String>,
}

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            id: 1,
            title: "H(2) has volume pi^4/120",
            run: h2,
        },
        Check {
            id: 2,
            title: "H(1,1) has volume pi^4/135 by both routes",
            run: h11,
        },
        Check {
            id: 3,
            title: "principal closed form matches the general pipeline for g = 3, 4",
            run: principal,
        },
        Check {
            id: 4,
            title: "volumes are positive monomials in pi^(2g) for 2g-2 <= 6",
            run: grading,
        },
        Check {
            id: 5,
            title: "genus 3 error is smaller at H(1,1,1,1) than at H(4)",
            run: error_ordering,
        },
        Check {
            id: 6,
            title: "minimal-stratum ratio lies in (0.55, 1) and increases for g = 2..4",
            run: minimal_trend,
        },
        Check {
            id: 7,
            title: "sc of H(1,1) is 27/8 and constants fall in their pi-exponent classes",
            run: sv_exact,
        },
        Check {
            id: 8,
            title: "cyl1 equals the sum of its cyl and handle parts for 2g-2 <= 4",
            run: decomposition,
        },
        Check {
            id: 9,
            title: "single-part Wick sums and complement enumeration agree with oracles",
            run: cross_consistency,
        },
        Check {
            id: 10,
            title: "weighted composition identity and Bell counts",
            run: identities,
        },
        Check {
            id: 11,
            title: "error sums respect the 2^40 (|m|-1)! tripwire for parts >= 2",
            run: error_bound,
        },
        Check {
            id: 12,
            title: "Wick sums agree across 1, 4 and 16 workers",
            run: determinism,
        },
    ]
}

/// Runs every check; returns the report and whether all passed.
pub fn run_all(opts: VolumeOptions) -> (String, bool) {
    let mut out = String::new();
    let mut passed = 0;
    let all = checks();
    for c in &all {
        match (c.run)(opts) {
            Ok(()) => {
                passed += 1;
                writeln!(out, "PASS {:>2}  {}", c.id, c.title).unwrap();
            }
            Err(why) => writeln!(out, "FAIL {:>2}  {}: {why}", c.id, c.title).unwrap(),
        }
    }
    writeln!(out, "{passed}/{} checks passed", all.len()).unwrap();
    (out, passed == all.len())
}

fn st(degrees: &[u32]) -> Stratum {
    Stratum::new(degrees.to_vec()).expect("valid stratum")
}

fn vol(degrees: &[u32], opts: VolumeOptions) -> Result<PiValue, String> {
    volume(&st(degrees), opts)
        .map(|r| r.volume)
        .map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn h2(opts: VolumeOptions) -> Result<(), String> {
    let v = vol(&[2], opts)?;
    ensure(v == PiValue::monomial(rat(1, 120), 4), || {
        format!("got {v}")
    })
}

fn h11(opts: VolumeOptions) -> Result<(), String> {
    let general = vol(&[1, 1], opts)?;
    let closed = principal_volume(2).map_err(|e| e.to_string())?;
    ensure(general == closed, || format!("{general} vs {closed}"))?;
    ensure(general == PiValue::monomial(rat(1, 135), 4), || {
        format!("got {general}")
    })
}

fn principal(opts: VolumeOptions) -> Result<(), String> {
    for g in [3, 4] {
        let general = vol(&vec![1; 2 * g as usize - 2], opts)?;
        let closed = principal_volume(g).map_err(|e| e.to_string())?;
        ensure(general == closed, || {
            format!("g = {g}: {general} vs {closed}")
        })?;
    }
    Ok(())
}

fn grading(opts: VolumeOptions) -> Result<(), String> {
    for size in [2, 4, 6] {
        for p in partitions_of_size(size) {
            let s = st(p.parts());
            let v = vol(p.parts(), opts)?;
            let ok = v
                .as_monomial()
                .is_some_and(|(q, e)| e == 2 * s.genus() as i64 && q > &rat(0, 1));
            ensure(ok, || format!("{s}: {v}"))?;
        }
    }
    Ok(())
}

fn error_ordering(opts: VolumeOptions) -> Result<(), String> {
    let eps = |d: &[u32]| -> Result<f64, String> {
        Ok(volume(&st(d), opts)
            .map_err(|e| e.to_string())?
            .relative_error_f64()
            .abs())
    };
    let (p, m) = (eps(&[1, 1, 1, 1])?, eps(&[4])?);
    ensure(p < m, || format!("|eps(1^4)| = {p}, |eps(4)| = {m}"))
}

/// `ν(H(2g-2))·(2g-1)/4` for `g = 2, 3, 4`.
pub fn minimal_ratios(opts: VolumeOptions) -> Result<Vec<f64>, String> {
    (2..=4u32)
        .map(|g| Ok(vol(&[2 * g - 2], opts)?.to_f64() * (2 * g - 1) as f64 / 4.0))
        .collect()
}

fn minimal_trend(opts: VolumeOptions) -> Result<(), String> {
    let r = minimal_ratios(opts)?;
    let g2 = vol(&[2], opts)?.scale(&rat(3, 4));
    ensure(g2 == PiValue::monomial(rat(1, 160), 4), || {
        format!("g = 2 ratio {g2}")
    })?;
    ensure((r[0] - 0.6089).abs() < 1e-4, || {
        format!("g = 2 ratio {}", r[0])
    })?;
    ensure(r.iter().all(|x| 0.55 < *x && *x < 1.0), || {
        format!("ratios {r:?}")
    })?;
    ensure(r.windows(2).all(|w| w[0] < w[1]), || {
        format!("not increasing: {r:?}")
    })
}

/// Every stratum with `2g - 2 <= 4`.
fn small_strata() -> Vec<Stratum> {
    [2, 4]
        .into_iter()
        .flat_map(partitions_of_size)
        .map(|p| st(p.parts()))
        .collect()
}

fn sv_exact(opts: VolumeOptions) -> Result<(), String> {
    let ctx = SvContext { volume_opts: opts };
    let e = |x: strata_core::Error| x.to_string();
    let r = ctx.sc_constant(&st(&[1, 1]), 0, 1).map_err(e)?;
    ensure(r.value == PiValue::rational(rat(27, 8)), || {
        format!("sc(1,1) = {}", r.value)
    })?;
    let mut results = Vec::new();
    for s in small_strata() {
        let n = s.degrees().len();
        for i in 0..n {
            for j in i + 1..n {
                results.push(ctx.sc_constant(&s, i, j).map_err(e)?);
                results.push(ctx.cyl_constant(&s, i, j).map_err(e)?);
            }
            results.push(ctx.loop_constant(&s, i).map_err(e)?);
            results.push(ctx.handle_constant(&s, i).map_err(e)?);
        }
        results.push(ctx.cyl1_total(&s).map_err(e)?);
        results.push(ctx.area1_constant(&s).map_err(e)?);
    }
    for g in 2..=4 {
        results.push(ctx.sc2_principal(g).map_err(e)?);
    }
    for r in results.iter().filter(|r| !r.value.is_zero()) {
        let expected = r.kind.pi_exponent();
        ensure(r.value.is_homogeneous_of(expected), || {
            format!("{} on {}: {}", r.kind, r.stratum, r.value)
        })?;
        let class_ok = match r.kind {
            SvKind::Sc | SvKind::Sc2 => expected == 0,
            _ => expected == -2,
        };
        ensure(class_ok, || {
            format!("{} has exponent class {expected}", r.kind)
        })?;
    }
    Ok(())
}

fn decomposition(opts: VolumeOptions) -> Result<(), String> {
    let ctx = SvContext { volume_opts: opts };
    let e = |x: strata_core::Error| x.to_string();
    for s in small_strata() {
        let total = ctx.cyl1_total(&s).map_err(e)?.value;
        let n = s.degrees().len();
        let mut sum = PiValue::zero();
        for i in 0..n {
            for j in i + 1..n {
                sum += &ctx.cyl_constant(&s, i, j).map_err(e)?.value;
            }
            sum += &ctx.handle_constant(&s, i).map_err(e)?.value;
        }
        ensure(total == sum, || format!("{s}: {total} vs {sum}"))?;
    }
    Ok(())
}

/// Brute-force complement test on label vectors of length at most 16: right block
/// count and a connected join.
fn is_complement(alpha: &[usize], alpha_len: usize, rho: &[usize], rho_len: usize) -> bool {
    if alpha_len + rho_len != rho.len() + 1 {
        return false;
    }
    fn root(parent: &[usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    // union-find over rho's blocks; each alpha block links the rho-blocks it meets
    let mut parent = [0usize; 16];
    for (i, p) in parent.iter_mut().enumerate() {
        *p = i;
    }
    let mut first = [usize::MAX; 16];
    let mut components = rho_len;
    for (x, &a) in alpha.iter().enumerate() {
        if first[a] == usize::MAX {
            first[a] = rho[x];
            continue;
        }
        let (ra, rb) = (root(&parent, first[a]), root(&parent, rho[x]));
        if ra != rb {
            parent[rb] = ra;
            components -= 1;
        }
    }
    components == 1
}

fn cross_consistency(_: VolumeOptions) -> Result<(), String> {
    let e = |x: strata_core::Error| x.to_string();
    for total in 1..=8 {
        for p in partitions_of_size(total) {
            let args: Vec<Partition> = p
                .parts()
                .iter()
                .map(|&x| Partition::new(vec![x]).unwrap())
                .collect();
            let a = multi_bracket(&args).map_err(e)?;
            let b = bracket_of(p.parts()).map_err(e)?;
            ensure(a == b, || format!("{p}: {a} vs {b}"))?;
        }
    }
    for n in 1..=8 {
        let mut by_len: Vec<Vec<SetPartition>> = vec![Vec::new(); n + 1];
        for a in set_partitions(n) {
            by_len[a.len()].push(a);
        }
        let labels: Vec<Vec<Vec<usize>>> = by_len
            .iter()
            .map(|v| v.iter().map(SetPartition::labels).collect())
            .collect();
        for rho in by_len.iter().flatten() {
            let mut fast: Vec<SetPartition> = complementary_partitions(rho).collect();
            fast.sort();
            let rho_labels = rho.labels();
            let mut slow: Vec<SetPartition> = by_len[n + 1 - rho.len()]
                .iter()
                .zip(&labels[n + 1 - rho.len()])
                .filter(|(a, l)| is_complement(l, a.len(), &rho_labels, rho.len()))
                .map(|(a, _)| a.clone())
                .collect();
            slow.sort();
            ensure(fast == slow, || format!("complements of {rho} differ"))?;
        }
    }
    Ok(())
}

fn identities(_: VolumeOptions) -> Result<(), String> {
    for n in 1..=9u32 {
        for k in 1..=n {
            let mut total = BigInt::from(0);
            for lambda in partitions_of_size(n)
                .into_iter()
                .filter(|l| l.len() == k as usize)
            {
                let mut denom = BigInt::one();
                for (_, m) in lambda.multiplicities() {
                    denom *= factorial(m as u32);
                }
                total += factorial(k) / denom;
            }
            let expected = binomial(n - 1, k - 1);
            ensure(total == expected, || {
                format!("n = {n}, k = {k}: {total} vs {expected}")
            })?;
        }
    }
    let bell: Vec<usize> = (1..=6).map(|n| set_partitions(n).count()).collect();
    ensure(bell == [1, 2, 5, 15, 52, 203], || {
        format!("Bell counts {bell:?}")
    })
}

fn error_bound(_: VolumeOptions) -> Result<(), String> {
    let cap = 2f64.powi(40);
    for total in 2..=10 {
        for p in partitions_of_size(total) {
            if p.parts().iter().any(|&x| x < 2) {
                continue;
            }
            let m = PartMultiset::new(p.parts().to_vec()).map_err(|e| e.to_string())?;
            let e = error_term(&m).map_err(|e| e.to_string())?.to_f64().abs();
            let f = rational_to_f64(&strata_core::exact_arith::rat_int(factorial(total - 1)));
            ensure(e <= cap * f, || format!("{p}: |E| = {e}"))?;
        }
    }
    Ok(())
}

/// Evaluates one Wick sum directly, bypassing the memo, inside a pool of `threads` workers.
fn wick_in_pool(args: &[Partition], threads: usize) -> Result<PiValue, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    let slots = LabeledSlotMap::new(args).map_err(|e| e.to_string())?;
    pool.install(|| {
        complementary_partitions(slots.rho())
            .par_bridge()
            .map(|alpha| slots.term(&alpha).map_err(|e| e.to_string()))
            .try_reduce(PiValue::zero, |a, b| Ok(&a + &b))
    })
}

fn determinism(_: VolumeOptions) -> Result<(), String> {
    let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
    let args = [p(&[3, 1]), p(&[2, 1]), p(&[2]), p(&[1, 1])];
    let serial = wick_in_pool(&args, 1)?;
    for threads in [4, 16] {
        let v = wick_in_pool(&args, threads)?;
        ensure(v == serial, || {
            format!("{threads} workers: {v} vs {serial}")
        })?;
    }
    let memo = multi_bracket(&args).map_err(|e| e.to_string())?;
    ensure(memo == serial, || {
        format!("memoized {memo} vs direct {serial}")
    })
}
