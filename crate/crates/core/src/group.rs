//! Finitely generated abelian groups, modules over a DVR, and the local
//! criteria deciding when cyclic-kernel surjections and pushout squares exist.
//!
//! Over a DVR with maximal ideal `m`, a module is `R^rank ⊕ ⊕_j R/m^{λ_j}` and is
//! determined by its d-sequence `d_i = dim m^{i-1}N / m^i N = rank + #{j : λ_j ≥ i}`.
//! A surjection with cyclic kernel `N → N'` exists iff `d_i(N) - d_i(N')` is 0 or
//! 1 for all `i`. Four modules fit in a pushout square of such surjections iff
//! every edge passes that test and the alternating sums of `d_{≤n}` are
//! nonnegative, vanishing whenever `d_n` differs on the two middle corners.
//!
//! Over the integers the same questions are answered prime by prime. The
//! Picard group of `Z` is trivial, so the global determinant conditions that
//! accompany the local ones over a general Dedekind domain always hold and
//! reduce to the free-rank drop being 0 or 1.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_integer::Integer;
use num_prime::nt_funcs::{factorize, is_prime};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A natural number or infinity, with `n + INF = INF` and `min(n, INF) = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub const INF: ExtNat = ExtNat::Inf;

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Inf,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "INF"),
        }
    }
}

impl std::str::FromStr for ExtNat {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "INF" | "Inf" | "infinity" => Ok(ExtNat::Inf),
            t => t.parse().map(ExtNat::Fin),
        }
    }
}

/// A finitely generated abelian group in invariant-factor form:
/// `Z^rank ⊕ Z/n_1 ⊕ ... ⊕ Z/n_t` with `n_1 | n_2 | ... | n_t` and every `n_i ≥ 2`.
///
/// Values are canonical, so `==` is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    rank: usize,
    factors: Vec<BigUint>,
}

impl FgAbGroup {
    /// `Z^rank` plus cyclic summands of the given orders; an order 0 adds a free
    /// summand, an order 1 is dropped.
    pub fn new<T: Into<BigUint> + Clone>(rank: usize, orders: &[T]) -> Self {
        Self::from_parts(rank, orders.iter().cloned().map(Into::into))
    }

    pub fn from_parts(rank: usize, orders: impl IntoIterator<Item = BigUint>) -> Self {
        let mut rank = rank;
        let mut torsion = Vec::new();
        for n in orders {
            if n.is_zero() {
                rank += 1;
            } else if !n.is_one() {
                torsion.push(n);
            }
        }
        FgAbGroup {
            rank,
            factors: invariant_chain(torsion),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            factors: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn cyclic(order: u64) -> Self {
        Self::new(0, &[order])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Invariant factors of the torsion part, ascending along the divisibility chain.
    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.factors.is_empty()
    }

    pub fn torsion(&self) -> FgAbGroup {
        FgAbGroup {
            rank: 0,
            factors: self.factors.clone(),
        }
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.factors.iter().product()
    }

    pub fn with_rank(&self, rank: usize) -> FgAbGroup {
        FgAbGroup {
            rank,
            factors: self.factors.clone(),
        }
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        Self::from_parts(
            self.rank + other.rank,
            self.factors.iter().chain(&other.factors).cloned(),
        )
    }

    /// `G ⊗ Z/k`: each `Z` becomes `Z/k`, each `Z/n` becomes `Z/gcd(n, k)`.
    pub fn tensor_mod(&self, k: &BigUint) -> FgAbGroup {
        let orders = std::iter::repeat_n(k.clone(), self.rank)
            .chain(self.factors.iter().map(|n| n.gcd(k)));
        Self::from_parts(0, orders)
    }

    /// Primes dividing the torsion order.
    pub fn support(&self) -> BTreeSet<BigUint> {
        self.factors
            .last()
            .map(prime_divisors)
            .unwrap_or_default()
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.factors.iter().map(|n| format!("Z/{n}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Canonical invariant-factor form of `Z^rank ⊕ ⊕ Z/orders_i` (0 encodes `Z`).
pub fn canonicalize<T: Into<BigUint> + Clone>(cyclic_orders: &[T], rank: usize) -> FgAbGroup {
    FgAbGroup::new(rank, cyclic_orders)
}

/// Replaces pairs by (gcd, lcm) until the list is a divisibility chain. The
/// isomorphism type is preserved since `Z/a ⊕ Z/b ≅ Z/gcd ⊕ Z/lcm`.
fn invariant_chain(mut v: Vec<BigUint>) -> Vec<BigUint> {
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let g = v[i].gcd(&v[j]);
            let l = &v[i] / &g * &v[j];
            v[i] = g;
            v[j] = l;
        }
    }
    v.retain(|n| !n.is_one());
    v
}

pub fn check_prime(p: &BigUint) -> Result<()> {
    if p < &BigUint::from(2u32) || !is_prime(p, None).probably() {
        return Err(Error::NotPrime(p.clone()));
    }
    Ok(())
}

pub fn prime_divisors(n: &BigUint) -> BTreeSet<BigUint> {
    if n <= &BigUint::one() {
        return BTreeSet::new();
    }
    factorize(n.clone()).into_keys().collect()
}

/// Exponent of `p` in `n` (`n` nonzero).
pub fn valuation(n: &BigUint, p: &BigUint) -> u32 {
    debug_assert!(!n.is_zero());
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

/// Primes dividing some torsion order of the given groups.
pub fn support_primes<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> BTreeSet<BigUint> {
    let mut tops: BTreeSet<&BigUint> = BTreeSet::new();
    for g in groups {
        if let Some(top) = g.factors.last() {
            tops.insert(top);
        }
    }
    // The lcm of the top factors carries every prime exactly once worth factoring.
    let lcm = tops
        .into_iter()
        .fold(BigUint::one(), |acc, n| acc.lcm(n));
    prime_divisors(&lcm)
}

/// Smallest prime outside `support`. Localizing there sees only free ranks.
pub fn generic_prime(support: &BTreeSet<BigUint>) -> BigUint {
    let mut p = BigUint::from(2u32);
    loop {
        if !support.contains(&p) && is_prime(&p, None).probably() {
            return p;
        }
        p += 1u32;
    }
}

/// Support primes followed by one prime outside the support, in ascending order.
pub fn check_primes(support: &BTreeSet<BigUint>) -> Vec<BigUint> {
    let mut primes: Vec<BigUint> = support.iter().cloned().collect();
    primes.push(generic_prime(support));
    primes.sort();
    primes
}

/// A f.g. module over a DVR: `R^rank ⊕ ⊕_j R/m^{λ_j}` with `λ` nonincreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DMod {
    rank: usize,
    lambda: Vec<u32>,
}

impl DMod {
    pub fn new(rank: usize, mut lambda: Vec<u32>) -> Self {
        lambda.retain(|&l| l > 0);
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        DMod { rank, lambda }
    }

    pub fn free(rank: usize) -> Self {
        DMod {
            rank,
            lambda: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    pub fn max_exponent(&self) -> u32 {
        self.lambda.first().copied().unwrap_or(0)
    }

    /// Length of the torsion part.
    pub fn torsion_length(&self) -> u64 {
        self.lambda.iter().map(|&l| u64::from(l)).sum()
    }

    /// `d_i`; zero for `i = 0`.
    pub fn d(&self, i: u64) -> u64 {
        if i == 0 {
            return 0;
        }
        self.rank as u64 + self.lambda.iter().filter(|&&l| u64::from(l) >= i).count() as u64
    }

    /// `d_{≤n} = dim N / m^n N`.
    pub fn d_leq(&self, n: ExtNat) -> ExtNat {
        match n {
            ExtNat::Fin(n) => ExtNat::Fin(
                n * self.rank as u64 + self.lambda.iter().map(|&l| u64::from(l).min(n)).sum::<u64>(),
            ),
            ExtNat::Inf if self.rank > 0 => ExtNat::Inf,
            ExtNat::Inf => ExtNat::Fin(self.torsion_length()),
        }
    }

    /// `d_1`, the minimal number of generators.
    pub fn residue_dim(&self) -> u64 {
        self.d(1)
    }

    pub fn with_rank(&self, rank: usize) -> DMod {
        DMod {
            rank,
            lambda: self.lambda.clone(),
        }
    }

    pub fn direct_sum(&self, other: &DMod) -> DMod {
        let mut lambda = self.lambda.clone();
        lambda.extend_from_slice(&other.lambda);
        DMod::new(self.rank + other.rank, lambda)
    }

    /// Inverse of the d-sequence map: the module with `d_i = seq[i-1]` for
    /// `i ≤ seq.len()` and `d_i = tail` afterwards. `None` unless the sequence
    /// is nonincreasing and ends no lower than `tail`.
    pub fn from_d_sequence(seq: &[u64], tail: u64) -> Option<DMod> {
        let mut prev = u64::MAX;
        for &x in seq.iter().chain(std::iter::once(&tail)) {
            if x > prev {
                return None;
            }
            prev = x;
        }
        let mut lambda = Vec::new();
        let mut extended: Vec<u64> = seq.to_vec();
        extended.push(tail);
        for (i, w) in extended.windows(2).enumerate() {
            for _ in 0..(w[0] - w[1]) {
                lambda.push(i as u32 + 1);
            }
        }
        Some(DMod::new(tail as usize, lambda))
    }
}

impl fmt::Display for DMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.lambda.iter().map(u32::to_string).collect();
        write!(f, "({}, ({}))", self.rank, l.join(","))
    }
}

/// `g ⊗ Z_(p)`: rank kept, `λ` the positive `p`-adic valuations of the factors.
pub fn localize(g: &FgAbGroup, p: &BigUint) -> DMod {
    let lambda = g
        .factors
        .iter()
        .map(|n| valuation(n, p))
        .filter(|&v| v > 0)
        .collect();
    DMod::new(g.rank, lambda)
}

/// `d_{≤n}` of a DVR module.
pub fn d_leq(m: &DMod, n: ExtNat) -> ExtNat {
    m.d_leq(n)
}

/// A 0/1 sequence `d_1, d_2, ...` stored as a finite prefix plus a constant tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DSeq {
    entries: Vec<u8>,
    tail: u8,
}

impl DSeq {
    pub fn new(mut entries: Vec<u8>, tail: u8) -> Self {
        assert!(tail <= 1 && entries.iter().all(|&e| e <= 1), "d-sequence entries must be 0 or 1");
        while entries.last() == Some(&tail) {
            entries.pop();
        }
        DSeq { entries, tail }
    }

    /// Entry `d_i` for `i ≥ 1`.
    pub fn get(&self, i: usize) -> u8 {
        assert!(i >= 1, "d-sequences are indexed from 1");
        self.entries.get(i - 1).copied().unwrap_or(self.tail)
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn tail(&self) -> u8 {
        self.tail
    }

    /// First `len` entries.
    pub fn prefix(&self, len: usize) -> Vec<u8> {
        (1..=len).map(|i| self.get(i)).collect()
    }
}

/// First index `i` where `d_i(src) - d_i(dst)` leaves {0, 1}.
///
/// Past the largest exponent both sequences are constant at their ranks, so
/// checking one index beyond it also covers the free-rank drop.
pub fn local_surjection_failure(src: &DMod, dst: &DMod) -> Option<u64> {
    let horizon = u64::from(src.max_exponent().max(dst.max_exponent())) + 1;
    (1..=horizon).find(|&i| {
        let diff = src.d(i) as i64 - dst.d(i) as i64;
        !(0..=1).contains(&diff)
    })
}

/// The d-sequence `d(src) - d(dst)` of a cyclic-kernel surjection, if one exists.
pub fn surjection_dseq(src: &DMod, dst: &DMod) -> Option<DSeq> {
    if local_surjection_failure(src, dst).is_some() {
        return None;
    }
    let horizon = u64::from(src.max_exponent().max(dst.max_exponent()));
    let entries = (1..=horizon).map(|i| (src.d(i) - dst.d(i)) as u8).collect();
    Some(DSeq::new(entries, (src.rank - dst.rank) as u8))
}

/// Edges of the square `M(∅) → M(1), M(∅) → M(2), M(1) → M(12), M(2) → M(12)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareEdge {
    BottomToFirst,
    BottomToSecond,
    FirstToTop,
    SecondToTop,
}

impl SquareEdge {
    pub const ALL: [SquareEdge; 4] = [
        SquareEdge::BottomToFirst,
        SquareEdge::BottomToSecond,
        SquareEdge::FirstToTop,
        SquareEdge::SecondToTop,
    ];

    /// (source, target) corner indices into `[M(∅), M(1), M(2), M(12)]`.
    pub fn corners(self) -> (usize, usize) {
        match self {
            SquareEdge::BottomToFirst => (0, 1),
            SquareEdge::BottomToSecond => (0, 2),
            SquareEdge::FirstToTop => (1, 3),
            SquareEdge::SecondToTop => (2, 3),
        }
    }
}

/// Why four DVR modules do not form a pushout square of cyclic-kernel surjections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalSquareFailure {
    /// An edge fails the single-surjection test at index `i`.
    Edge { edge: SquareEdge, i: u64 },
    /// The alternating sum of `d_{≤n}` is negative.
    L2a { n: u64 },
    /// `d_n` differs on the middle corners but the alternating sum is nonzero.
    L2b { n: u64 },
}

/// Local test for a pushout square `[M(∅), M(1), M(2), M(12)]` over a DVR.
pub fn local_square_failure(m: [&DMod; 4]) -> Option<LocalSquareFailure> {
    for edge in SquareEdge::ALL {
        let (s, t) = edge.corners();
        if let Some(i) = local_surjection_failure(m[s], m[t]) {
            return Some(LocalSquareFailure::Edge { edge, i });
        }
    }
    let top = m.iter().map(|x| x.max_exponent()).max().unwrap_or(0);
    // Beyond `top` every d_n is the rank; two extra steps pin down the tail.
    let horizon = u64::from(top) + 2;
    let mut s: i64 = 0;
    for n in 1..=horizon {
        s += m[0].d(n) as i64 - m[1].d(n) as i64 - m[2].d(n) as i64 + m[3].d(n) as i64;
        if s < 0 {
            return Some(LocalSquareFailure::L2a { n });
        }
        if m[1].d(n) != m[2].d(n) && s != 0 {
            return Some(LocalSquareFailure::L2b { n });
        }
    }
    let step = m[0].rank as i64 - m[1].rank as i64 - m[2].rank as i64 + m[3].rank as i64;
    if step < 0 {
        // s decreases linearly from here on.
        let n = horizon + (s / -step) as u64 + 1;
        return Some(LocalSquareFailure::L2a { n });
    }
    None
}

/// Why no surjection with cyclic kernel exists between two groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SurjectionFailure {
    /// Free rank drops by something other than 0 or 1.
    RankDrop,
    /// Local test fails at prime `p`, index `i`.
    Local { p: BigUint, i: u64 },
}

/// Why four groups do not form a pushout square of cyclic-kernel surjections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SquareFailure {
    Edge {
        edge: SquareEdge,
        failure: SurjectionFailure,
    },
    L2a {
        p: BigUint,
        n: u64,
    },
    L2b {
        p: BigUint,
        n: u64,
    },
    /// The local conditions hold at `p = 2` but no pair of elements realizes
    /// the square.
    NoWitness {
        p: BigUint,
    },
}

pub fn surjection_failure(src: &FgAbGroup, dst: &FgAbGroup) -> Option<SurjectionFailure> {
    let primes: Vec<BigUint> = support_primes([src, dst]).into_iter().collect();
    surjection_failure_at(src, dst, &primes, localize)
}

fn surjection_failure_at(
    src: &FgAbGroup,
    dst: &FgAbGroup,
    primes: &[BigUint],
    local: impl Fn(&FgAbGroup, &BigUint) -> DMod,
) -> Option<SurjectionFailure> {
    if !(dst.rank <= src.rank && src.rank <= dst.rank + 1) {
        return Some(SurjectionFailure::RankDrop);
    }
    primes.iter().find_map(|p| {
        local_surjection_failure(&local(src, p), &local(dst, p))
            .map(|i| SurjectionFailure::Local { p: p.clone(), i })
    })
}

/// Does a surjection `src → dst` with cyclic kernel exist?
pub fn cyclic_surjection_exists(src: &FgAbGroup, dst: &FgAbGroup) -> bool {
    surjection_failure(src, dst).is_none()
}

pub fn square_failure(
    n0: &FgAbGroup,
    n1: &FgAbGroup,
    n2: &FgAbGroup,
    n12: &FgAbGroup,
) -> Option<SquareFailure> {
    let corners = [n0, n1, n2, n12];
    let primes = check_primes(&support_primes(corners));
    for edge in SquareEdge::ALL {
        let (s, t) = edge.corners();
        if let Some(failure) = surjection_failure_at(corners[s], corners[t], &[], localize) {
            return Some(SquareFailure::Edge { edge, failure });
        }
    }
    for p in &primes {
        let l: Vec<DMod> = corners.iter().map(|g| localize(g, p)).collect();
        let local = [&l[0], &l[1], &l[2], &l[3]];
        if let Some(f) = local_square_failure(local) {
            return Some(globalize_square_failure(f, p));
        }
        if !witness_exists(local, p) {
            return Some(SquareFailure::NoWitness { p: p.clone() });
        }
    }
    None
}

/// Exact test at `p`, for modules that already pass [`local_square_failure`].
pub(crate) fn witness_exists(m: [&DMod; 4], p: &BigUint) -> bool {
    p.to_u64().is_none_or(|p| crate::witness::square_exists_at(m, p))
}

pub(crate) fn globalize_square_failure(f: LocalSquareFailure, p: &BigUint) -> SquareFailure {
    match f {
        LocalSquareFailure::Edge { edge, i } => SquareFailure::Edge {
            edge,
            failure: SurjectionFailure::Local { p: p.clone(), i },
        },
        LocalSquareFailure::L2a { n } => SquareFailure::L2a { p: p.clone(), n },
        LocalSquareFailure::L2b { n } => SquareFailure::L2b { p: p.clone(), n },
    }
}

/// Do four cyclic-kernel surjections forming a pushout square
/// `n0 → n1, n0 → n2, n1 → n12, n2 → n12` exist?
pub fn square_exists(n0: &FgAbGroup, n1: &FgAbGroup, n2: &FgAbGroup, n12: &FgAbGroup) -> bool {
    square_failure(n0, n1, n2, n12).is_none()
}

/// d-sequence of the quotient map `N → N/<x>`.
///
/// `N` has a minimal generating set `e_α` with `<e_α> ≅ R/m^{ℓ_α}` (`ℓ_α` may be
/// infinite) and `x = Σ x_α e_α` with `v(x_α)` given by `coord_valuations`
/// (infinite for a zero coordinate). The answer is the lexicographically least
/// 0/1 sequence in which, for every `α`, at most `min(ℓ_α, v(x_α))` zeros occur
/// among the first `ℓ_α` positions.
pub fn quotient_dseq(gen_lengths: &[ExtNat], coord_valuations: &[ExtNat]) -> Result<DSeq> {
    if gen_lengths.len() != coord_valuations.len() {
        return Err(Error::LengthMismatch {
            left: gen_lengths.len(),
            right: coord_valuations.len(),
        });
    }
    if gen_lengths.contains(&ExtNat::Fin(0)) {
        return Err(Error::ZeroLength);
    }
    // (window length, zero budget) per generator.
    let limits: Vec<(ExtNat, ExtNat)> = gen_lengths
        .iter()
        .zip(coord_valuations)
        .map(|(&l, &v)| (l, l.min(v)))
        .collect();
    let last_window = limits
        .iter()
        .filter_map(|(l, _)| l.finite())
        .max()
        .unwrap_or(0);
    // Infinite windows with a finite budget cap the total number of zeros.
    let zero_cap = limits
        .iter()
        .filter(|(l, _)| !l.is_finite())
        .filter_map(|(_, nu)| nu.finite())
        .min();

    let mut entries = Vec::new();
    let mut zeros: u64 = 0;
    let mut i: u64 = 1;
    loop {
        if i > last_window && zero_cap.is_none_or(|cap| zeros >= cap) {
            break;
        }
        let zero_ok = limits.iter().all(|&(l, nu)| {
            ExtNat::Fin(i) > l || ExtNat::Fin(zeros + 1) <= nu
        });
        if zero_ok {
            zeros += 1;
            entries.push(0);
        } else {
            entries.push(1);
        }
        i += 1;
    }
    let tail = u8::from(zero_cap.is_some());
    Ok(DSeq::new(entries, tail))
}
