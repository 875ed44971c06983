//! Brute-force ground truth over small finite abelian groups.
//!
//! Everything here enumerates elements explicitly and computes quotients by
//! Smith normal form, independently of the closed-form criteria in
//! [`crate::group`].

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::FgAbGroup;
use crate::linalg::{cokernel, IntMatrix};

pub const DEFAULT_BOUND: u64 = 256;
/// Abort threshold on the number of element pairs a single search may try.
pub const PAIR_GUARD: u64 = 1_000_000;

/// Elements of a finite abelian group as residue tuples, one coordinate per
/// invariant factor.
#[derive(Clone, Debug)]
pub struct FiniteGroupElems {
    group: FgAbGroup,
    moduli: Vec<u64>,
    count: u64,
}

impl FiniteGroupElems {
    pub fn new(group: &FgAbGroup, bound: u64) -> Result<Self> {
        if group.rank() > 0 {
            return Err(Error::OracleNeedsTorsion);
        }
        let order = group.torsion_order();
        let count = order
            .to_u64()
            .filter(|&c| c <= bound)
            .ok_or_else(|| Error::OracleBound(format!("group of order {order} exceeds bound {bound}")))?;
        let moduli = group.factors().iter().map(|f| f.to_u64().unwrap()).collect();
        Ok(FiniteGroupElems {
            group: group.clone(),
            moduli,
            count,
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Mixed-radix decoding of an element index.
    pub fn element(&self, mut k: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let r = k % m;
                k /= m;
                r
            })
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.count).map(move |k| self.element(k))
    }

    /// Additive order of an element.
    pub fn order_of(&self, x: &[u64]) -> u64 {
        self.moduli
            .iter()
            .zip(x)
            .map(|(&m, &r)| m / num_integer::gcd(m, r))
            .fold(1, num_integer::lcm)
    }
}

fn presentation(g: &FgAbGroup, extra: &[&[u64]]) -> IntMatrix {
    let k = g.factors().len();
    let mut m = IntMatrix::zeros(k, k + extra.len());
    for (i, f) in g.factors().iter().enumerate() {
        m[(i, i)] = BigInt::from(f.clone());
    }
    for (j, x) in extra.iter().enumerate() {
        assert_eq!(x.len(), k, "element has wrong number of coordinates");
        for (i, &r) in x.iter().enumerate() {
            m[(i, k + j)] = BigInt::from(r);
        }
    }
    m
}

/// `g / ⟨x⟩` for a finite group `g`.
pub fn quotient_by_element(g: &FgAbGroup, x: &[u64]) -> FgAbGroup {
    cokernel(&presentation(g, &[x]))
}

/// `g / ⟨x, y⟩`.
pub fn quotient_by_pair(g: &FgAbGroup, x: &[u64], y: &[u64]) -> FgAbGroup {
    cokernel(&presentation(g, &[x, y]))
}

fn torsion_only(groups: &[&FgAbGroup]) -> Result<()> {
    if groups.iter().any(|g| g.rank() > 0) {
        Err(Error::OracleNeedsTorsion)
    } else {
        Ok(())
    }
}

/// Whether some `x ∈ src` has `src/⟨x⟩ ≅ dst`.
pub fn surjection_oracle(src: &FgAbGroup, dst: &FgAbGroup) -> Result<bool> {
    surjection_oracle_bounded(src, dst, DEFAULT_BOUND)
}

pub fn surjection_oracle_bounded(src: &FgAbGroup, dst: &FgAbGroup, bound: u64) -> Result<bool> {
    torsion_only(&[src, dst])?;
    let elems = FiniteGroupElems::new(src, bound)?;
    Ok((0..elems.len())
        .into_par_iter()
        .any(|k| quotient_by_element(src, &elems.element(k)) == *dst))
}

/// All quotients of `src` by a single element.
pub fn cyclic_quotients(src: &FgAbGroup, bound: u64) -> Result<HashSet<FgAbGroup>> {
    let elems = FiniteGroupElems::new(src, bound)?;
    Ok((0..elems.len())
        .into_par_iter()
        .map(|k| quotient_by_element(src, &elems.element(k)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// A pair `(x, y)` realizing the square `n0 → n1, n2 → n12`, if one exists.
pub fn pushout_witness(
    n0: &FgAbGroup,
    n1: &FgAbGroup,
    n2: &FgAbGroup,
    n12: &FgAbGroup,
    bound: u64,
) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
    torsion_only(&[n0, n1, n2, n12])?;
    let elems = FiniteGroupElems::new(n0, bound)?;
    let all: Vec<Vec<u64>> = elems.iter().collect();
    let quotients: Vec<FgAbGroup> = all.par_iter().map(|x| quotient_by_element(n0, x)).collect();
    let xs: Vec<&Vec<u64>> = all.iter().zip(&quotients).filter(|(_, q)| *q == n1).map(|(x, _)| x).collect();
    let ys: Vec<&Vec<u64>> = all.iter().zip(&quotients).filter(|(_, q)| *q == n2).map(|(y, _)| y).collect();
    let trials = xs.len() as u64 * ys.len() as u64;
    if trials > PAIR_GUARD {
        return Err(Error::OracleBound(format!("{trials} element pairs exceed guard {PAIR_GUARD}")));
    }
    Ok(xs
        .par_iter()
        .find_map_first(|x| {
            ys.iter()
                .find(|y| quotient_by_pair(n0, x, y) == *n12)
                .map(|y| ((*x).clone(), (*y).clone()))
        }))
}

/// Whether `x, y ∈ n0` exist with `n0/⟨x⟩ ≅ n1`, `n0/⟨y⟩ ≅ n2`, `n0/⟨x,y⟩ ≅ n12`.
pub fn pushout_oracle(n0: &FgAbGroup, n1: &FgAbGroup, n2: &FgAbGroup, n12: &FgAbGroup) -> Result<bool> {
    Ok(pushout_witness(n0, n1, n2, n12, DEFAULT_BOUND)?.is_some())
}

/// Every triple `(n0/⟨x⟩, n0/⟨y⟩, n0/⟨x,y⟩)` over all element pairs.
pub fn achievable_squares(n0: &FgAbGroup, bound: u64) -> Result<HashSet<(FgAbGroup, FgAbGroup, FgAbGroup)>> {
    let elems = FiniteGroupElems::new(n0, bound)?;
    let trials = elems.len() * elems.len();
    if trials > PAIR_GUARD {
        return Err(Error::OracleBound(format!("{trials} element pairs exceed guard {PAIR_GUARD}")));
    }
    let all: Vec<Vec<u64>> = elems.iter().collect();
    let quotients: Vec<FgAbGroup> = all.par_iter().map(|x| quotient_by_element(n0, x)).collect();
    let per_x: Vec<Vec<(FgAbGroup, FgAbGroup, FgAbGroup)>> = (0..all.len())
        .into_par_iter()
        .map(|i| {
            (0..all.len())
                .map(|j| {
                    (
                        quotients[i].clone(),
                        quotients[j].clone(),
                        quotient_by_pair(n0, &all[i], &all[j]),
                    )
                })
                .collect()
        })
        .collect();
    Ok(per_x.into_iter().flatten().collect())
}

/// Partitions of `k` into positive parts, parts nonincreasing.
pub fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=k.min(max)).rev() {
            cur.push(part);
            go(k - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// All abelian `p`-groups of order at most `max_order`, trivial group included.
pub fn p_groups(p: u64, max_order: u64) -> Vec<FgAbGroup> {
    let mut out = Vec::new();
    let mut k = 0;
    let mut order = 1u64;
    while order <= max_order {
        for lambda in partitions(k) {
            let orders: Vec<u64> = lambda.iter().map(|&e| p.pow(e)).collect();
            out.push(FgAbGroup::new(0, &orders));
        }
        k += 1;
        order = match order.checked_mul(p) {
            Some(o) => o,
            None => break,
        };
    }
    out
}

/// All finite abelian groups of order at most `max_order`.
pub fn abelian_groups(max_order: u64) -> Vec<FgAbGroup> {
    let mut out = Vec::new();
    for order in 1..=max_order {
        let mut groups = vec![FgAbGroup::trivial()];
        let mut rest = order;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                let mut pk = 1;
                while rest % p == 0 {
                    rest /= p;
                    pk *= p;
                }
                let local: Vec<FgAbGroup> = p_groups(p, pk)
                    .into_iter()
                    .filter(|g| g.torsion_order() == pk.into())
                    .collect();
                groups = groups
                    .iter()
                    .flat_map(|g| local.iter().map(move |h| g.direct_sum(h)))
                    .collect();
            }
            p += 1;
        }
        out.extend(groups);
    }
    out
}
