//! Tropical Plücker certificates for matroids over a DVR.
//!
//! Heights are `p_A = d_{≤n}(M(A))`. A tropical relation holds when the
//! minimum of its term values is attained at least twice; a relation whose
//! terms are all `INF` holds vacuously.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::ExtNat;
use crate::matroid::{members, size, DvrMatroid, GroundSet, Subset};

/// Cap on the ground set for [`flag_pluecker_scan`].
pub const FLAG_SCAN_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightFunction {
    pub ground: GroundSet,
    pub n: ExtNat,
    pub values: Vec<ExtNat>,
}

impl HeightFunction {
    pub fn get(&self, a: Subset) -> ExtNat {
        self.values[a as usize]
    }

    /// Replaces `p_A`; used to build corrupted instances.
    pub fn set(&mut self, a: Subset, v: ExtNat) {
        self.values[a as usize] = v;
    }
}

/// A failed relation: its descriptor, the term values, and the position of
/// the unique minimizing term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalViolation {
    pub relation: String,
    pub terms: Vec<ExtNat>,
    pub minimizer: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TropicalVerdict {
    pub violations: Vec<TropicalViolation>,
    /// Number of relations examined.
    pub relations: usize,
}

impl TropicalVerdict {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: TropicalVerdict) -> TropicalVerdict {
        self.violations.extend(other.violations);
        self.relations += other.relations;
        self
    }
}

pub fn heights(m: &DvrMatroid, n: ExtNat) -> Result<HeightFunction> {
    if n == ExtNat::Fin(0) {
        return Err(Error::InvalidArgument("height level n must be at least 1".into()));
    }
    Ok(HeightFunction {
        ground: m.ground().clone(),
        n,
        values: m.table().iter().map(|d| d.d_leq(n)).collect(),
    })
}

/// Position of the unique minimal term, if the minimum is finite and attained once.
pub fn unique_minimizer(terms: &[ExtNat]) -> Option<usize> {
    let min = *terms.iter().min()?;
    if !min.is_finite() {
        return None;
    }
    let mut hits = terms.iter().enumerate().filter(|(_, &t)| t == min);
    let (first, _) = hits.next()?;
    if hits.next().is_some() {
        None
    } else {
        Some(first)
    }
}

fn check(relation: impl FnOnce() -> String, terms: Vec<ExtNat>) -> TropicalVerdict {
    let violations = match unique_minimizer(&terms) {
        None => Vec::new(),
        Some(i) => vec![TropicalViolation {
            relation: relation(),
            terms,
            minimizer: Some(i),
        }],
    };
    TropicalVerdict {
        violations,
        relations: 1,
    }
}

fn par_subsets(n: usize) -> impl ParallelIterator<Item = Subset> {
    (0..1u32 << n).into_par_iter()
}

fn collect(verdicts: impl ParallelIterator<Item = TropicalVerdict>) -> TropicalVerdict {
    // Collected in index order so violation lists are deterministic.
    verdicts
        .collect::<Vec<_>>()
        .into_iter()
        .fold(TropicalVerdict::default(), TropicalVerdict::merge)
}

/// `min(p_Ab + p_Acd, p_Ac + p_Abd, p_Ad + p_Abc)` attained twice, for all
/// `A` and distinct `b < c < d` outside `A`.
pub fn three_term_check(h: &HeightFunction) -> TropicalVerdict {
    let g = &h.ground;
    let n = g.len();
    collect(par_subsets(n).map(|a| {
        let mut v = TropicalVerdict::default();
        let out: Vec<usize> = (0..n).filter(|&i| a >> i & 1 == 0).collect();
        for (x, &b) in out.iter().enumerate() {
            for (y, &c) in out.iter().enumerate().skip(x + 1) {
                for &d in &out[y + 1..] {
                    let (b, c, d) = (1 << b, 1 << c, 1 << d);
                    let terms = vec![
                        h.get(a | b) + h.get(a | c | d),
                        h.get(a | c) + h.get(a | b | d),
                        h.get(a | d) + h.get(a | b | c),
                    ];
                    v = v.merge(check(
                        || format!("THREE-TERM A={} bcd={}", g.show(a), g.show(b | c | d)),
                        terms,
                    ));
                }
            }
        }
        v
    }))
}

fn exchange_terms(h: &HeightFunction, a_set: Subset, b_set: Subset, a: usize) -> Vec<ExtNat> {
    let bit = 1 << a;
    std::iter::once(a)
        .chain(members(b_set & !a_set))
        .map(|b| {
            let bb = 1 << b;
            h.get((a_set & !bit) | bb) + h.get((b_set | bit) & !bb)
        })
        .collect()
}

fn single_exchange(h: &HeightFunction, filter: impl Fn(Subset, Subset) -> bool + Sync) -> TropicalVerdict {
    let g = &h.ground;
    let n = g.len();
    collect(par_subsets(n).map(|a_set| {
        let mut v = TropicalVerdict::default();
        for b_set in 0..1u32 << n {
            if size(a_set) > size(b_set) || size(b_set & !a_set) <= 1 || !filter(a_set, b_set) {
                continue;
            }
            for a in members(a_set & !b_set) {
                v = v.merge(check(
                    || {
                        format!(
                            "EXCHANGE A={} B={} a={}",
                            g.show(a_set),
                            g.show(b_set),
                            g.labels()[a]
                        )
                    },
                    exchange_terms(h, a_set, b_set, a),
                ));
            }
        }
        v
    }))
}

/// Plücker relations with a single exchanged element of `A`: for `|A| ≤ |B|`
/// and `a ∈ A∖B`, the terms `p_{A-a+b} + p_{B+a-b}` over `b ∈ (B∖A) ∪ {a}`.
/// Instances with `|B∖A| ≤ 1` are trivially satisfied and skipped.
pub fn single_exchange_check(h: &HeightFunction) -> TropicalVerdict {
    single_exchange(h, |_, _| true)
}

/// The Dressian relations: single exchanges with `|A| = |B| = r`. With
/// `r = None`, every `0 < r < |E|`.
pub fn dressian_check(h: &HeightFunction, r: Option<usize>) -> TropicalVerdict {
    let n = h.ground.len();
    single_exchange(h, |a, b| {
        let k = size(a);
        k == size(b) && r.map_or(0 < k && k < n, |r| r == k)
    })
}

/// `k`-element subsets of `s`.
fn subsets_of_size(s: Subset, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    let mut t = 0u32;
    loop {
        if size(t) == k {
            out.push(t);
        }
        if t == s {
            break;
        }
        t = t.wrapping_sub(s) & s;
    }
    out
}

/// Every tropical Plücker relation of the full flag variety.
///
/// For `|A| ≤ |B|`, `A = A_f ⊔ A_e`, `B = B_f ⊔ B_e` with `A ∩ B` inside both
/// fixed parts and `|A_e| + |B_e| = |B∖A| + 1`, the terms are
/// `p_{A_f ∪ A'} + p_{B_f ∪ B'}` where `A' ⊔ B' = A_e ∪ B_e` and
/// `|A'| = |A_e|`. When `log` is given, one line per relation is written:
/// `RELATION <A_f>|<A_e>|<B_f>|<B_e> MIN <value> COUNT <k>`.
pub fn flag_pluecker_scan(h: &HeightFunction, log: Option<&mut dyn Write>) -> Result<TropicalVerdict> {
    let g = &h.ground;
    let n = g.len();
    if n > FLAG_SCAN_MAX {
        return Err(Error::InvalidArgument(format!(
            "flag scan supports at most {FLAG_SCAN_MAX} elements, got {n}"
        )));
    }
    let per_a: Vec<(TropicalVerdict, Vec<String>)> = par_subsets(n)
        .map(|a_set| {
            let mut v = TropicalVerdict::default();
            let mut lines = Vec::new();
            for b_set in 0..1u32 << n {
                if size(a_set) > size(b_set) {
                    continue;
                }
                let a_only = a_set & !b_set;
                let b_only = b_set & !a_set;
                let need = size(b_only) + 1;
                for ka in 1..=size(a_only).min(need) {
                    let kb = need - ka;
                    if kb > size(b_only) {
                        continue;
                    }
                    for ae in subsets_of_size(a_only, ka) {
                        for be in subsets_of_size(b_only, kb) {
                            let (af, bf) = (a_set & !ae, b_set & !be);
                            let c = ae | be;
                            let terms: Vec<ExtNat> = subsets_of_size(c, ka)
                                .into_iter()
                                .map(|a2| h.get(af | a2) + h.get(bf | (c & !a2)))
                                .collect();
                            let min = terms.iter().min().copied().unwrap_or(ExtNat::Inf);
                            let count = terms.iter().filter(|&&t| t == min).count();
                            let key = format!(
                                "{}|{}|{}|{}",
                                g.key(af),
                                g.key(ae),
                                g.key(bf),
                                g.key(be)
                            );
                            lines.push(format!("RELATION {key} MIN {min} COUNT {count}"));
                            v = v.merge(check(|| format!("FLAG {key}"), terms));
                        }
                    }
                }
            }
            (v, lines)
        })
        .collect();
    let mut verdict = TropicalVerdict::default();
    let mut log = log;
    for (v, lines) in per_a {
        if let Some(w) = log.as_mut() {
            for l in lines {
                writeln!(w, "{l}").map_err(|e| Error::InvalidArgument(format!("evidence log: {e}")))?;
            }
        }
        verdict = verdict.merge(v);
    }
    Ok(verdict)
}

/// Dress-Wenzel exchange for `v(A) = |λ(M(A))|` on the bases of the generic
/// matroid, i.e. `|A| = rank M(∅)` and `M(A)` torsion.
pub fn valuated_matroid_check(m: &DvrMatroid) -> Result<TropicalVerdict> {
    let r_full = m.get(m.full()).rank();
    if r_full != 0 {
        return Err(Error::NotEssential(r_full));
    }
    let g = m.ground();
    let n = g.len();
    let r = m.get(0).rank();
    let bases: Vec<Subset> = (0..1u32 << n)
        .filter(|&a| size(a) == r && m.get(a).rank() == 0)
        .collect();
    let is_basis = |a: Subset| size(a) == r && m.get(a).rank() == 0;
    let v = |a: Subset| m.get(a).torsion_length();
    let per_a: Vec<TropicalVerdict> = bases
        .par_iter()
        .map(|&a_set| {
            let mut out = TropicalVerdict::default();
            for &b_set in &bases {
                for a in members(a_set & !b_set) {
                    out.relations += 1;
                    let bit = 1 << a;
                    let ok = members(b_set & !a_set).any(|b| {
                        let bb = 1 << b;
                        let (a2, b2) = ((a_set & !bit) | bb, (b_set | bit) & !bb);
                        is_basis(a2) && is_basis(b2) && v(a_set) + v(b_set) >= v(a2) + v(b2)
                    });
                    if !ok {
                        out.violations.push(TropicalViolation {
                            relation: format!(
                                "VALUATED A={} B={} a={}",
                                g.show(a_set),
                                g.show(b_set),
                                g.labels()[a]
                            ),
                            terms: vec![ExtNat::Fin(v(a_set)), ExtNat::Fin(v(b_set))],
                            minimizer: None,
                        });
                    }
                }
            }
            out
        })
        .collect();
    Ok(per_a.into_iter().fold(TropicalVerdict::default(), TropicalVerdict::merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::matroid::{Realization, ZMatroid};
    use num_bigint::BigUint;

    fn localized(gens: &[Vec<i64>], n: usize, p: u32) -> DvrMatroid {
        let r = Realization::new(IntMatrix::zeros(n, 0), IntMatrix::from_columns(n, gens).unwrap()).unwrap();
        ZMatroid::from_realization(&r)
            .unwrap()
            .localize_matroid(&BigUint::from(p))
            .unwrap()
    }

    fn one_two_four() -> DvrMatroid {
        localized(&[vec![1], vec![2], vec![4]], 1, 2)
    }

    fn fin(v: &[u64]) -> Vec<ExtNat> {
        v.iter().map(|&x| ExtNat::Fin(x)).collect()
    }

    #[test]
    fn heights_example() {
        let h = heights(&one_two_four(), ExtNat::Fin(2)).unwrap();
        assert_eq!(h.values, fin(&[2, 0, 1, 0, 2, 0, 1, 0]));
        assert!(heights(&one_two_four(), ExtNat::Fin(0)).is_err());
        let hi = heights(&one_two_four(), ExtNat::Inf).unwrap();
        assert_eq!(hi.get(0), ExtNat::Inf);
        assert_eq!(hi.get(0b100), ExtNat::Fin(2));
    }

    #[test]
    fn checks_pass_on_example() {
        for n in [ExtNat::Fin(1), ExtNat::Fin(2), ExtNat::Fin(5), ExtNat::Inf] {
            let h = heights(&one_two_four(), n).unwrap();
            assert!(three_term_check(&h).ok());
            assert!(single_exchange_check(&h).ok());
            assert!(flag_pluecker_scan(&h, None).unwrap().ok());
        }
        let h = heights(&one_two_four(), ExtNat::Fin(2)).unwrap();
        assert_eq!(three_term_check(&h).relations, 1);
        let e = exchange_terms(&h, 0b100, 0b011, 2);
        assert_eq!(e, fin(&[2, 1, 1]));
    }

    #[test]
    fn corrupted_heights_fail() {
        let mut h = heights(&one_two_four(), ExtNat::Fin(2)).unwrap();
        h.set(0b100, ExtNat::Fin(0));
        let t = three_term_check(&h);
        assert!(!t.ok());
        assert_eq!(t.violations[0].terms, fin(&[1, 1, 0]));
        assert!(!single_exchange_check(&h).ok());
        assert!(!flag_pluecker_scan(&h, None).unwrap().ok());
    }

    #[test]
    fn free_matroid_heights() {
        let m = localized(&[vec![1, 0], vec![0, 1], vec![1, 1]], 2, 3);
        let h = heights(&m, ExtNat::Fin(4)).unwrap();
        for (a, d) in m.table().iter().enumerate() {
            assert_eq!(h.values[a], ExtNat::Fin(4 * d.rank() as u64));
        }
        assert!(three_term_check(&h).ok());
        assert!(dressian_check(&h, None).ok());
    }

    #[test]
    fn valuated_examples() {
        let v = valuated_matroid_check(&one_two_four()).unwrap();
        assert!(v.ok());
        let unimodular = localized(&[vec![1, 0], vec![0, 1], vec![1, 1]], 2, 2);
        assert!(valuated_matroid_check(&unimodular).unwrap().ok());
        let rank0 = DvrMatroid::new(
            GroundSet::numbered(1).unwrap(),
            vec![crate::group::DMod::new(0, vec![1]), crate::group::DMod::free(0)],
        )
        .unwrap();
        let v = valuated_matroid_check(&rank0).unwrap();
        assert!(v.ok() && v.relations == 0);
        let not_essential = localized(&[vec![0], vec![0]], 1, 2);
        assert!(valuated_matroid_check(&not_essential).is_err());
    }

    #[test]
    fn flag_log_format() {
        let h = heights(&one_two_four(), ExtNat::Fin(2)).unwrap();
        let mut buf = Vec::new();
        let v = flag_pluecker_scan(&h, Some(&mut buf)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), v.relations);
        assert!(text.lines().all(|l| l.starts_with("RELATION ") && l.contains(" MIN ") && l.contains(" COUNT ")));
    }

    #[test]
    fn unique_minimizer_cases() {
        assert_eq!(unique_minimizer(&fin(&[1, 1, 2])), None);
        assert_eq!(unique_minimizer(&fin(&[3, 1, 2])), Some(1));
        assert_eq!(unique_minimizer(&[ExtNat::Inf, ExtNat::Inf]), None);
        assert_eq!(unique_minimizer(&[ExtNat::Inf, ExtNat::Fin(0)]), Some(1));
    }
}
