//! Matroids over `Z` and over a DVR, stored as dense subset-indexed tables.
//!
//! A matroid over a ring assigns a module `M(A)` to every subset `A` of the
//! ground set such that for all `A, b, c` the three modules `M(Ab), M(Ac),
//! M(Abc)` arise as quotients `M(A)/(x), M(A)/(y), M(A)/(x, y)`. Subsets are
//! bitmasks over label positions; the table has `2^|E|` entries.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{
    check_prime, check_primes, local_square_failure, local_surjection_failure, localize, witness_exists,
    support_primes, DMod, FgAbGroup, LocalSquareFailure, SquareEdge,
};
use crate::linalg::{cokernel, IntMatrix};

pub const MAX_GROUND: usize = 16;

/// A subset of the ground set, bit `i` standing for label `i`.
pub type Subset = u32;

/// Labels of the ground set, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_GROUND {
            return Err(Error::GroundTooLarge(labels.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels })
    }

    /// Labels "1", "2", ..., "n".
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn full(&self) -> Subset {
        full_mask(self.len())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn subset_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        labels
            .iter()
            .try_fold(0, |acc, l| Ok(acc | (1 << self.index_of(l.as_ref())?)))
    }

    pub fn subset_labels(&self, a: Subset) -> Vec<&str> {
        members(a).map(|i| self.labels[i].as_str()).collect()
    }

    /// Comma-joined labels in ground-set order; the empty string for ∅.
    pub fn key(&self, a: Subset) -> String {
        self.subset_labels(a).join(",")
    }

    /// `∅` or `{a,b}`.
    pub fn show(&self, a: Subset) -> String {
        if a == 0 {
            "∅".to_string()
        } else {
            format!("{{{}}}", self.key(a))
        }
    }

    fn without(&self, i: usize) -> GroundSet {
        let mut labels = self.labels.clone();
        labels.remove(i);
        GroundSet { labels }
    }
}

pub(crate) fn full_mask(n: usize) -> Subset {
    if n == 0 {
        0
    } else {
        Subset::MAX >> (32 - n)
    }
}

/// Positions of set bits, ascending.
pub fn members(a: Subset) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| a >> i & 1 == 1)
}

pub fn size(a: Subset) -> usize {
    a.count_ones() as usize
}

/// Inserts `bit` at position `i`, shifting higher positions up.
fn expand(a: Subset, i: usize, bit: bool) -> Subset {
    let low = a & ((1 << i) - 1);
    let high = (a >> i) << (i + 1);
    low | high | (Subset::from(bit) << i)
}

/// Operations the table constructions need from a module type.
pub trait Module: Clone + Eq + fmt::Display + Send + Sync {
    fn free_rank(&self) -> usize;
    fn with_free_rank(&self, rank: usize) -> Self;
    fn sum(&self, other: &Self) -> Self;
}

impl Module for FgAbGroup {
    fn free_rank(&self) -> usize {
        self.rank()
    }
    fn with_free_rank(&self, rank: usize) -> Self {
        self.with_rank(rank)
    }
    fn sum(&self, other: &Self) -> Self {
        self.direct_sum(other)
    }
}

impl Module for DMod {
    fn free_rank(&self) -> usize {
        self.rank()
    }
    fn with_free_rank(&self, rank: usize) -> Self {
        self.with_rank(rank)
    }
    fn sum(&self, other: &Self) -> Self {
        self.direct_sum(other)
    }
}

/// A subset-indexed table of modules, optionally known to satisfy the axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid<M> {
    ground: GroundSet,
    table: Vec<M>,
    verified: bool,
}

/// Matroid over the integers.
pub type ZMatroid = Matroid<FgAbGroup>;
/// Matroid over a DVR, modules recorded as (rank, exponent partition).
pub type DvrMatroid = Matroid<DMod>;

impl<M: Module> Matroid<M> {
    /// An unverified table. Call [`Matroid::verify`] before relying on the axioms.
    pub fn new(ground: GroundSet, table: Vec<M>) -> Result<Self> {
        let expected = 1usize << ground.len();
        if table.len() != expected {
            return Err(Error::TableSize {
                expected,
                found: table.len(),
            });
        }
        Ok(Matroid {
            ground,
            table,
            verified: false,
        })
    }

    /// Builds the table from a function of subsets.
    pub fn from_fn(ground: GroundSet, f: impl Fn(Subset) -> M + Sync + Send) -> Self {
        let table = (0..1u32 << ground.len()).into_par_iter().map(f).collect();
        Matroid {
            ground,
            table,
            verified: false,
        }
    }

    pub(crate) fn assume_verified(mut self, verified: bool) -> Self {
        self.verified = verified;
        self
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn table(&self) -> &[M] {
        &self.table
    }

    pub fn get(&self, a: Subset) -> &M {
        &self.table[a as usize]
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn full(&self) -> Subset {
        self.ground.full()
    }

    /// `M(E)` has no free summand.
    pub fn is_essential(&self) -> bool {
        self.get(self.full()).free_rank() == 0
    }

    /// `(M \ a)(A) = M(A)`.
    pub fn delete(&self, label: &str) -> Result<Self> {
        let i = self.ground.index_of(label)?;
        Ok(self.minor_at(i, false))
    }

    /// `(M / a)(A) = M(A ∪ a)`.
    pub fn contract(&self, label: &str) -> Result<Self> {
        let i = self.ground.index_of(label)?;
        Ok(self.minor_at(i, true))
    }

    pub(crate) fn minor_at(&self, i: usize, contract: bool) -> Self {
        let ground = self.ground.without(i);
        let table = (0..1u32 << ground.len())
            .map(|a| self.get(expand(a, i, contract)).clone())
            .collect();
        Matroid {
            ground,
            table,
            verified: self.verified,
        }
    }

    /// `(M ⊕ M')(A ⊔ A') = M(A) ⊕ M'(A')`; labels must be disjoint.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let ground = GroundSet::new(self.ground.labels.iter().chain(&other.ground.labels).cloned())?;
        let n = self.len();
        let low = full_mask(n);
        let m = Self::from_fn(ground, |a| self.get(a & low).sum(other.get(a >> n)));
        Ok(m.assume_verified(self.verified && other.verified))
    }

    /// Splits off the free part of `M(E)`, which is a summand of every `M(A)`.
    /// Returns the essential matroid and the split rank.
    pub fn essentialize(&self) -> (Self, usize) {
        let split = self.get(self.full()).free_rank();
        let table = self
            .table
            .iter()
            .map(|m| m.with_free_rank(m.free_rank() - split))
            .collect();
        let m = Matroid {
            ground: self.ground.clone(),
            table,
            verified: self.verified,
        };
        (m, split)
    }

    /// Rank function of the generic matroid: `rk(A) = rank M(∅) - rank M(A)`.
    pub fn generic_rank(&self) -> Vec<usize> {
        let base = self.get(0).free_rank();
        self.table.iter().map(|m| base - m.free_rank()).collect()
    }

    /// Loops and coloops of the generic matroid, as subsets.
    pub fn generic_loops_coloops(&self) -> (Subset, Subset) {
        let full = self.full();
        let mut loops = 0;
        let mut coloops = 0;
        for i in 0..self.len() {
            if self.get(1 << i).free_rank() == self.get(0).free_rank() {
                loops |= 1 << i;
            }
            if self.get(full & !(1 << i)).free_rank() > self.get(full).free_rank() {
                coloops |= 1 << i;
            }
        }
        (loops, coloops)
    }

    /// Same table under new labels (positions unchanged).
    pub fn relabel(&self, ground: GroundSet) -> Result<Self> {
        if ground.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "relabel with {} labels for {} elements",
                ground.len(),
                self.len()
            )));
        }
        Ok(Matroid {
            ground,
            table: self.table.clone(),
            verified: self.verified,
        })
    }

    /// Reorders the ground set: new position `k` holds old element `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::DimensionMismatch("not a permutation".into()));
        }
        let ground = GroundSet {
            labels: order.iter().map(|&i| self.ground.labels[i].clone()).collect(),
        };
        let table = (0..1u32 << n)
            .map(|a| {
                let old = members(a).fold(0, |acc, k| acc | (1 << order[k]));
                self.get(old).clone()
            })
            .collect();
        Ok(Matroid {
            ground,
            table,
            verified: self.verified,
        })
    }

    /// Applies `f` entrywise, keeping the ground set.
    pub fn map<N: Module>(&self, f: impl Fn(&M) -> N + Sync + Send) -> Matroid<N> {
        Matroid {
            ground: self.ground.clone(),
            table: self.table.par_iter().map(f).collect(),
            verified: false,
        }
    }
}

impl<M: Module> fmt::Display for Matroid<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, m) in self.table.iter().enumerate() {
            writeln!(f, "{}: {}", self.ground.show(a as Subset), m)?;
        }
        Ok(())
    }
}

/// Which condition of the local criteria failed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Free rank drops by something other than 0 or 1 along a cover.
    RankDrop,
    /// `d_i(M(A)) - d_i(M(Ab))` leaves {0, 1}. `p` is `None` over a DVR.
    M1Local { p: Option<BigUint>, i: u64 },
    /// Negative alternating sum of `d_{≤n}`.
    L2a { p: Option<BigUint>, n: u64 },
    /// Nonzero alternating sum of `d_{≤n}` where `d_n(M(Ab)) ≠ d_n(M(Ac))`.
    L2b { p: Option<BigUint>, n: u64 },
    /// The local conditions hold at `p = 2`, yet no pair of elements of
    /// `M(A)` realizes the square.
    NoWitness { p: BigUint },
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = |p: &Option<BigUint>| match p {
            Some(p) => format!(" p={p}"),
            None => String::new(),
        };
        match self {
            Condition::RankDrop => write!(f, "rank-drop"),
            Condition::M1Local { p, i } => write!(f, "M1-local{} i={i}", prime(p)),
            Condition::L2a { p, n } => write!(f, "L2a{} n={n}", prime(p)),
            Condition::L2b { p, n } => write!(f, "L2b{} n={n}", prime(p)),
            Condition::NoWitness { p } => write!(f, "no-witness p={p}"),
        }
    }
}

/// First failing instance `(A, b, c)` of the axiom; `b == c` is the single
/// cover `A ⊂ Ab`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub a: Subset,
    pub b: usize,
    pub c: usize,
    pub condition: Condition,
    /// `(A,b,c)` rendered with labels.
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.witness, self.condition)
    }
}

pub type Verdict = std::result::Result<(), Violation>;

/// Enumerates `(A, b, c)` with `b ≤ c` outside `A`, in bitmask-then-label
/// order, and returns the first failure reported by `check`.
fn first_violation(
    ground: &GroundSet,
    check: impl Fn(Subset, usize, usize) -> Option<Condition> + Sync,
) -> Verdict {
    let n = ground.len();
    let found = (0..1u32 << n).into_par_iter().find_map_first(|a| {
        for b in (0..n).filter(|&b| a >> b & 1 == 0) {
            for c in (b..n).filter(|&c| a >> c & 1 == 0) {
                if let Some(cond) = check(a, b, c) {
                    return Some((a, b, c, cond));
                }
            }
        }
        None
    });
    match found {
        None => Ok(()),
        Some((a, b, c, condition)) => Err(Violation {
            a,
            b,
            c,
            witness: format!(
                "({},{},{})",
                ground.show(a),
                ground.labels[b],
                ground.labels[c]
            ),
            condition,
        }),
    }
}

fn rank_drop_ok(src: usize, dst: usize) -> bool {
    dst <= src && src <= dst + 1
}

fn local_condition(
    p: Option<&BigUint>,
    tables: [&DMod; 4],
    single: bool,
) -> Option<Condition> {
    let p = p.cloned();
    if single {
        return local_surjection_failure(tables[0], tables[1]).map(|i| Condition::M1Local { p, i });
    }
    if let Some(f) = local_square_failure(tables) {
        return Some(match f {
            LocalSquareFailure::Edge { i, .. } => Condition::M1Local { p, i },
            LocalSquareFailure::L2a { n } => Condition::L2a { p, n },
            LocalSquareFailure::L2b { n } => Condition::L2b { p, n },
        });
    }
    match p {
        Some(p) if !witness_exists(tables, &p) => Some(Condition::NoWitness { p }),
        _ => None,
    }
}

fn square_ranks_ok(r: [usize; 4]) -> bool {
    SquareEdge::ALL.iter().all(|e| {
        let (s, t) = e.corners();
        rank_drop_ok(r[s], r[t])
    })
}

/// Runs `check` once per distinct quadruple of corner modules, then scans
/// `(A, b, c)` in the usual order. Equal table entries share an id.
fn first_violation_memo<M: Module + std::hash::Hash>(
    m: &Matroid<M>,
    check: impl Fn([&M; 4], bool) -> Option<Condition> + Sync,
) -> Verdict {
    let mut index: HashMap<&M, u32> = HashMap::new();
    let mut modules: Vec<&M> = Vec::new();
    let ids: Vec<u32> = m
        .table
        .iter()
        .map(|x| {
            *index.entry(x).or_insert_with(|| {
                modules.push(x);
                modules.len() as u32 - 1
            })
        })
        .collect();
    let n = m.len();
    let key = |a: Subset, b: usize, c: usize| {
        let id = |s: Subset| ids[s as usize];
        ([id(a), id(a | 1 << b), id(a | 1 << c), id(a | 1 << b | 1 << c)], b == c)
    };
    let keys = (0..1u32 << n)
        .into_par_iter()
        .fold(HashSet::new, |mut acc, a| {
            for b in (0..n).filter(|&b| a >> b & 1 == 0) {
                for c in (b..n).filter(|&c| a >> c & 1 == 0) {
                    acc.insert(key(a, b, c));
                }
            }
            acc
        })
        .reduce(HashSet::new, |mut x, y| {
            x.extend(y);
            x
        });
    let verdicts: HashMap<([u32; 4], bool), Option<Condition>> = keys
        .into_par_iter()
        .map(|(k, single)| ((k, single), check(k.map(|i| modules[i as usize]), single)))
        .collect();
    first_violation(&m.ground, |a, b, c| verdicts[&key(a, b, c)].clone())
}

impl ZMatroid {
    /// Checks the axiom through its local form at every prime dividing some
    /// torsion order, plus one prime outside that set for the free ranks.
    pub fn is_matroid(&self) -> Verdict {
        let primes = check_primes(&support_primes(&self.table));
        first_violation_memo(self, |corners, single| {
            let ranks = corners.map(FgAbGroup::rank);
            if single {
                if !rank_drop_ok(ranks[0], ranks[1]) {
                    return Some(Condition::RankDrop);
                }
            } else if !square_ranks_ok(ranks) {
                return Some(Condition::RankDrop);
            }
            primes.iter().find_map(|p| {
                let local = corners.map(|g| localize(g, p));
                local_condition(Some(p), [&local[0], &local[1], &local[2], &local[3]], single)
            })
        })
    }

    /// Runs [`ZMatroid::is_matroid`] and records the result.
    pub fn verify(self) -> Result<Self> {
        if self.verified {
            return Ok(self);
        }
        self.is_matroid().map_err(Error::NotAMatroid)?;
        Ok(self.assume_verified(true))
    }

    /// The matroid of a vector configuration: `M(A) = N / (Σ_{a∈A} Z x_a)`.
    /// Labels are "1".."k".
    pub fn from_realization(r: &Realization) -> Result<Self> {
        Self::from_realization_labeled(r, GroundSet::numbered(r.len())?)
    }

    pub fn from_realization_labeled(r: &Realization, ground: GroundSet) -> Result<Self> {
        if ground.len() != r.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} generators",
                ground.len(),
                r.len()
            )));
        }
        let m = Self::from_fn(ground, |a| cokernel(&r.presentation(a)));
        Ok(m.assume_verified(true))
    }

    /// Corank function of `M ⊗ F_p`: `A ↦ d_1(M(A)_(p))`.
    pub fn residue_matroid(&self, p: &BigUint) -> Result<Vec<u64>> {
        check_prime(p)?;
        Ok(self.table.iter().map(|g| localize(g, p).residue_dim()).collect())
    }

    /// `M ⊗ Z_(p)`.
    pub fn localize_matroid(&self, p: &BigUint) -> Result<DvrMatroid> {
        check_prime(p)?;
        let verified = self.verified;
        Ok(self.map(|g| localize(g, p)).assume_verified(verified))
    }

    /// `M ⊗ Z/k`, viewed again as a table of abelian groups.
    pub fn tensor_mod(&self, k: &BigUint) -> Result<ZMatroid> {
        if k < &BigUint::from(2u32) {
            return Err(Error::InvalidModulus(k.clone()));
        }
        let verified = self.verified;
        Ok(self.map(|g| g.tensor_mod(k)).assume_verified(verified))
    }

    /// `|tors M(A)|` for every subset.
    pub fn multiplicities(&self) -> Vec<BigUint> {
        self.table.iter().map(FgAbGroup::torsion_order).collect()
    }
}

impl DvrMatroid {
    /// The DVR form of the axiom check; conditions carry no prime.
    pub fn is_matroid(&self) -> Verdict {
        first_violation_memo(self, |corners, single| local_condition(None, corners, single))
    }

    pub fn verify(self) -> Result<Self> {
        if self.verified {
            return Ok(self);
        }
        self.is_matroid().map_err(Error::NotAMatroid)?;
        Ok(self.assume_verified(true))
    }
}

/// A vector configuration in `N = Z^n / (columns of ambient_relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    ambient_relations: IntMatrix,
    generators: IntMatrix,
}

impl Realization {
    pub fn new(ambient_relations: IntMatrix, generators: IntMatrix) -> Result<Self> {
        if ambient_relations.rows() != generators.rows() {
            return Err(Error::DimensionMismatch(format!(
                "relations have {} rows, generators {}",
                ambient_relations.rows(),
                generators.rows()
            )));
        }
        if generators.cols() > MAX_GROUND {
            return Err(Error::GroundTooLarge(generators.cols()));
        }
        Ok(Realization {
            ambient_relations,
            generators,
        })
    }

    pub fn ambient_relations(&self) -> &IntMatrix {
        &self.ambient_relations
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.generators.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.cols() == 0
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.generators.rows()
    }

    /// `[relations | x_a for a ∈ A]`.
    pub fn presentation(&self, a: Subset) -> IntMatrix {
        let cols: Vec<usize> = members(a).collect();
        self.ambient_relations
            .hcat(&self.generators.select_columns(&cols))
            .expect("row counts checked at construction")
    }

    /// Same configuration with the generators reordered.
    pub fn permute(&self, order: &[usize]) -> Self {
        Realization {
            ambient_relations: self.ambient_relations.clone(),
            generators: self.generators.select_columns(order),
        }
    }
}

/// Groups table entries by value; handy for reporting.
pub fn distinct_modules<M: Module + std::hash::Hash>(m: &Matroid<M>) -> HashMap<M, Vec<Subset>> {
    let mut out: HashMap<M, Vec<Subset>> = HashMap::new();
    for (a, x) in m.table().iter().enumerate() {
        out.entry(x.clone()).or_default().push(a as Subset);
    }
    out
}
