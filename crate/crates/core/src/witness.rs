//! Explicit pushout squares over `Z_(p)`.
//!
//! The closed-form square criterion is necessary over every DVR, and it is
//! sufficient when the residue field has more than two elements. Over `Z_(2)`
//! it is not: `Z/2 + Z/8` has no pair `x, y` giving quotients `Z/4, Z/4` and
//! joint quotient `Z/2`, because any two admissible `x, y` agree modulo a
//! multiple of `x`. This module decides such squares exactly by searching for
//! `x, y` in a finite truncation of the modules.

use rayon::prelude::*;

use crate::group::{surjection_dseq, DMod, DSeq};

/// Upper bound on `|candidates for x| * |N|` for one search.
pub const SEARCH_LIMIT: u64 = 1 << 24;

/// Positions `i` with `d_i = 1, d_{i+1} = 0`; `None` stands for the infinite end
/// of a sequence whose tail is 1.
fn block_ends(s: &DSeq, horizon: usize) -> Vec<Option<usize>> {
    let mut out: Vec<Option<usize>> = (1..=horizon)
        .filter(|&i| s.get(i) == 1 && s.get(i + 1) == 0)
        .map(Some)
        .collect();
    if s.tail() == 1 {
        out.push(None);
    }
    out
}

/// Whether `N = m[0]` has enough cyclic summands for the standard
/// construction: one of length `i` for each block end of `N → m[1]` or
/// `N → m[2]`, and another for each common block end of `m[1] → m[3]` and
/// `m[2] → m[3]`. Assumes all four edges are cyclic-kernel surjections.
pub fn summands_available(m: [&DMod; 4]) -> bool {
    let seq = |s: usize, t: usize| surjection_dseq(m[s], m[t]);
    let (Some(phi), Some(psi), Some(phi2), Some(psi2)) = (seq(0, 1), seq(0, 2), seq(2, 3), seq(1, 3))
    else {
        return false;
    };
    let horizon = m.iter().map(|x| x.max_exponent()).max().unwrap_or(0) as usize + 1;
    let (a, b) = (block_ends(&phi, horizon), block_ends(&psi, horizon));
    let (c, d) = (block_ends(&phi2, horizon), block_ends(&psi2, horizon));
    let mut need: Vec<(Option<usize>, usize)> = Vec::new();
    let mut bump = |i: Option<usize>| match need.iter_mut().find(|(j, _)| *j == i) {
        Some((_, k)) => *k += 1,
        None => need.push((i, 1)),
    };
    for i in a.iter().chain(b.iter().filter(|i| !a.contains(i))) {
        bump(*i);
    }
    for i in c.iter().filter(|i| d.contains(i)) {
        bump(*i);
    }
    need.iter().all(|&(i, k)| {
        let have = match i {
            None => m[0].rank(),
            Some(i) => m[0].lambda().iter().filter(|&&l| l as usize == i).count(),
        };
        have >= k
    })
}

/// Arithmetic in `Z/p^e`.
#[derive(Clone, Copy, Debug)]
struct Ring {
    p: u64,
    modulus: u64,
}

impl Ring {
    fn new(p: u64, e: u32) -> Option<Self> {
        p.checked_pow(e).map(|modulus| Ring { p, modulus })
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        (u128::from(a) * u128::from(b) % u128::from(self.modulus)) as u64
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.modulus - (b - a)
        }
    }

    /// `(v, u)` with `a = p^v u`, `u` a unit; `a` nonzero.
    fn split(self, mut a: u64) -> (u32, u64) {
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        (v, a)
    }

    fn inverse(self, u: u64) -> u64 {
        let (mut r0, mut r1) = (i128::from(self.modulus), i128::from(u));
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        s0.rem_euclid(i128::from(self.modulus)) as u64
    }
}

/// A finite module `⊕ Z/p^{parts_j}`.
#[derive(Clone, Debug)]
struct Finite {
    ring: Ring,
    parts: Vec<u32>,
    moduli: Vec<u64>,
    count: u64,
}

impl Finite {
    fn new(p: u64, parts: Vec<u32>) -> Option<Self> {
        let top = parts.iter().copied().max().unwrap_or(1);
        let ring = Ring::new(p, top)?;
        let moduli: Vec<u64> = parts.iter().map(|&l| p.pow(l)).collect();
        let count = moduli.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m))?;
        Some(Finite {
            ring,
            parts,
            moduli,
            count,
        })
    }

    fn element(&self, mut k: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let r = k % m;
                k /= m;
                r
            })
            .collect()
    }

    /// Exponents of the cyclic summands of the quotient by `gens`, nonincreasing.
    fn quotient(&self, gens: &[&[u64]]) -> Vec<u32> {
        let ring = self.ring;
        let k = self.parts.len();
        let top = self.parts.iter().copied().max().unwrap_or(0);
        let width = k + gens.len();
        let mut a = vec![0u64; k * width];
        for (i, &m) in self.moduli.iter().enumerate() {
            a[i * width + i] = m % ring.modulus;
        }
        for (j, g) in gens.iter().enumerate() {
            for (i, &x) in g.iter().enumerate() {
                a[i * width + k + j] = x % ring.modulus;
            }
        }
        let mut rows: Vec<usize> = (0..k).collect();
        let mut cols: Vec<usize> = (0..width).collect();
        let mut out = Vec::new();
        loop {
            let pivot = rows
                .iter()
                .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
                .filter(|&(i, j)| a[i * width + j] != 0)
                .map(|(i, j)| (ring.split(a[i * width + j]).0, i, j))
                .min();
            let Some((v, pi, pj)) = pivot else { break };
            let inv = ring.inverse(ring.split(a[pi * width + pj]).1);
            for &r in rows.iter().filter(|&&r| r != pi) {
                let entry = a[r * width + pj];
                if entry == 0 {
                    continue;
                }
                let factor = ring.mul(entry / self.ring.p.pow(v), inv);
                for &c in &cols {
                    let sub = ring.mul(factor, a[pi * width + c]);
                    a[r * width + c] = ring.sub(a[r * width + c], sub);
                }
            }
            rows.retain(|&r| r != pi);
            cols.retain(|&c| c != pj);
            if v > 0 {
                out.push(v);
            }
        }
        out.extend(rows.iter().map(|_| top));
        out.sort_unstable_by(|x, y| y.cmp(x));
        out
    }

    /// One element from each `Aut`-orbit: `Σ p^{v_ℓ} e_ℓ` over distinct part
    /// sizes `ℓ`, with `v` and `ℓ - v` strictly increasing in `ℓ`.
    fn orbit_representatives(&self) -> Vec<Vec<u64>> {
        let mut sizes: Vec<(u32, usize)> = Vec::new();
        for (j, &l) in self.parts.iter().enumerate() {
            if !sizes.iter().any(|&(s, _)| s == l) {
                sizes.push((l, j));
            }
        }
        sizes.sort_unstable();
        let mut out = Vec::new();
        let mut cur = vec![0u64; self.parts.len()];
        self.reps_from(&sizes, 0, None, &mut cur, &mut out);
        out
    }

    fn reps_from(
        &self,
        sizes: &[(u32, usize)],
        at: usize,
        last: Option<(u32, u32)>,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if at == sizes.len() {
            out.push(cur.clone());
            return;
        }
        self.reps_from(sizes, at + 1, last, cur, out);
        let (l, j) = sizes[at];
        for v in 0..l {
            if let Some((lv, lo)) = last {
                if v <= lv || l - v <= lo {
                    continue;
                }
            }
            cur[j] = self.ring.p.pow(v);
            self.reps_from(sizes, at + 1, Some((v, l - v)), cur, out);
            cur[j] = 0;
        }
    }
}

/// `m ⊗ Z/p^k` as a list of exponents, for `k` at least the largest exponent.
fn truncate(m: &DMod, k: u32) -> Vec<u32> {
    let mut parts: Vec<u32> = m.lambda().to_vec();
    parts.extend(std::iter::repeat_n(k, m.rank()));
    parts.sort_unstable_by(|x, y| y.cmp(x));
    parts
}

/// Searches `x, y ∈ m[0]` with quotients `m[1]`, `m[2]` and joint quotient
/// `m[3]`. Free summands are truncated to `Z/p^k`, `k` two past the largest
/// exponent. `None` when the search would exceed `limit`.
pub fn square_search(m: [&DMod; 4], p: u64, limit: u64) -> Option<bool> {
    let k = m.iter().map(|x| x.max_exponent()).max().unwrap_or(0) + 2;
    let n = Finite::new(p, truncate(m[0], k))?;
    let targets = [1, 2, 3].map(|i| truncate(m[i], k));
    let xs: Vec<Vec<u64>> = n
        .orbit_representatives()
        .into_iter()
        .filter(|x| n.quotient(&[x]) == targets[0])
        .collect();
    if (xs.len() as u64).checked_mul(n.count)? > limit {
        return None;
    }
    if xs.is_empty() {
        return Some(false);
    }
    let ys: Vec<Vec<u64>> = (0..n.count)
        .into_par_iter()
        .map(|i| n.element(i))
        .filter(|y| n.quotient(&[y]) == targets[1])
        .collect();
    Some(
        xs.par_iter()
            .any(|x| ys.iter().any(|y| n.quotient(&[x, y]) == targets[2])),
    )
}

/// Exact square test at the prime `p`, given that the closed form holds.
/// Searches that would exceed [`SEARCH_LIMIT`] defer to the closed form.
pub fn square_exists_at(m: [&DMod; 4], p: u64) -> bool {
    p > 2 || summands_available(m) || square_search(m, p, SEARCH_LIMIT).unwrap_or(true)
}
