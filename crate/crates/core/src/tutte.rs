//! The Tutte-Grothendieck class of an essential matroid over `Z` and its
//! specializations.
//!
//! Each subset contributes the monomial `X^{M(A)} Y^{M*(E∖A)}`. Over `Z` a
//! module is its rank plus torsion, and `M(A)`, `M*(E∖A)` share torsion, so a
//! monomial is recorded as `(rank M(A), rank M*(E∖A), tors M(A))`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::FgAbGroup;
use crate::matroid::{size, Subset, ZMatroid};
use crate::poly::Poly2;

/// Torsion part of a module, as its invariant factor chain.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionTag {
    factors: Vec<BigUint>,
}

impl TorsionTag {
    pub fn of(g: &FgAbGroup) -> Self {
        TorsionTag {
            factors: g.factors().to_vec(),
        }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().product()
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::from_parts(0, self.factors.iter().cloned())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::of(&self.group().direct_sum(&other.group()))
    }
}

impl fmt::Display for TorsionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TutteMonomial {
    /// Exponent of `X^Z`: rank of `M(A)`.
    pub cork: usize,
    /// Exponent of `Y^Z`: rank of `M*(E∖A)`.
    pub nullity: usize,
    pub tag: TorsionTag,
}

impl TutteMonomial {
    pub fn new(cork: usize, nullity: usize, tag: TorsionTag) -> Self {
        TutteMonomial { cork, nullity, tag }
    }
}

impl fmt::Display for TutteMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.cork, self.nullity, self.tag)
    }
}

/// A formal integer combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TutteClass {
    terms: BTreeMap<TutteMonomial, BigInt>,
}

impl TutteClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The class of the empty matroid with `M(∅) = tag`.
    pub fn unit(tag: TorsionTag) -> Self {
        let mut t = Self::zero();
        t.add_term(TutteMonomial::new(0, 0, tag), BigInt::one());
        t
    }

    pub fn add_term(&mut self, mono: TutteMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mono.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TutteMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &TutteMonomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// Sum of coefficients; `2^|E|` for a class built from a matroid.
    pub fn mass(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Specialize with `tag -> weight(tag)`, `X -> (x-1)`, `Y -> (y-1)`.
    fn specialize(&self, weight: impl Fn(&TorsionTag) -> BigInt) -> Poly2 {
        let mut shifted = Poly2::zero();
        for (m, c) in &self.terms {
            shifted.add_term(m.cork as u32, m.nullity as u32, c * weight(&m.tag));
        }
        shifted.shift(-1, -1)
    }
}

impl Add for &TutteClass {
    type Output = TutteClass;
    fn add(self, rhs: &TutteClass) -> TutteClass {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Mul for &TutteClass {
    type Output = TutteClass;
    fn mul(self, rhs: &TutteClass) -> TutteClass {
        let mut out = TutteClass::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                let mono = TutteMonomial::new(m.cork + n.cork, m.nullity + n.nullity, m.tag.direct_sum(&n.tag));
                out.add_term(mono, c * d);
            }
        }
        out
    }
}

impl fmt::Display for TutteClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{m}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn require_essential(m: &ZMatroid) -> Result<ZMatroid> {
    let m = m.clone().verify()?;
    let r = m.get(m.full()).rank();
    if r != 0 {
        return Err(Error::NotEssential(r));
    }
    Ok(m)
}

fn monomial(m: &ZMatroid, a: Subset) -> TutteMonomial {
    let g = m.get(a);
    let base = m.get(0).rank();
    TutteMonomial::new(g.rank(), g.rank() + size(a) - base, TorsionTag::of(g))
}

/// The class `Σ_A X^{M(A)} Y^{M*(E∖A)}` of a verified essential matroid.
pub fn tutte_class(m: &ZMatroid) -> Result<TutteClass> {
    let m = require_essential(m)?;
    let counts = (0..1u32 << m.len())
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<TutteMonomial, u64>, a| {
            *acc.entry(monomial(&m, a)).or_default() += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let mut t = TutteClass::zero();
    for (mono, c) in counts {
        t.add_term(mono, c.into());
    }
    Ok(t)
}

/// Tutte polynomial of the generic matroid.
pub fn classical_tutte(t: &TutteClass) -> Poly2 {
    t.specialize(|_| BigInt::one())
}

/// Arithmetic Tutte polynomial: tags weighted by their order.
pub fn arithmetic_tutte(t: &TutteClass) -> Poly2 {
    t.specialize(|tag| tag.order().into())
}

/// Tutte polynomial `Σ (x-1)^{r(E)-r(A)} (y-1)^{|A|-r(A)}` of a rank function
/// given as a subset-indexed table.
pub fn tutte_of_rank(n: usize, rk: &[usize]) -> Poly2 {
    let full = rk[(1usize << n) - 1];
    let mut shifted = Poly2::zero();
    for (a, &r) in rk.iter().enumerate() {
        let k = (a as Subset).count_ones() as usize;
        shifted.add_term((full - r) as u32, (k - r) as u32, BigInt::one());
    }
    shifted.shift(-1, -1)
}

/// `|T / qT| = Π gcd(n_i, q)`, which is `|T|` when `q = 0`.
fn quasi_weight(tag: &TorsionTag, q: &BigUint) -> BigInt {
    tag.factors()
        .iter()
        .map(|n| n.gcd(q))
        .product::<BigUint>()
        .into()
}

/// Evaluates the Tutte quasi-polynomial at an integer point.
pub fn quasi_tutte_eval(m: &ZMatroid, x: &BigInt, y: &BigInt) -> Result<BigInt> {
    let t = tutte_class(m)?;
    Ok(quasi_from_class(&t, x, y))
}

/// The same evaluation from a precomputed class.
pub fn quasi_from_class(t: &TutteClass, x: &BigInt, y: &BigInt) -> BigInt {
    let xm: BigInt = x - 1;
    let ym: BigInt = y - 1;
    let q: BigUint = (&xm * &ym).magnitude().clone();
    t.terms()
        .map(|(mono, c)| {
            c * quasi_weight(&mono.tag, &q) * xm.pow(mono.cork as u32) * ym.pow(mono.nullity as u32)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::matroid::{GroundSet, Realization};

    fn realize(rel: &[Vec<i64>], gens: &[Vec<i64>], n: usize) -> ZMatroid {
        let r = Realization::new(
            IntMatrix::from_columns(n, rel).unwrap(),
            IntMatrix::from_columns(n, gens).unwrap(),
        )
        .unwrap();
        ZMatroid::from_realization(&r).unwrap()
    }

    fn mono(c: usize, n: usize, f: &[u64]) -> TutteMonomial {
        TutteMonomial::new(c, n, TorsionTag::of(&FgAbGroup::new(0, f)))
    }

    fn good() -> ZMatroid {
        realize(&[vec![4, 0], vec![0, 2]], &[vec![1, 0], vec![1, 1]], 2)
    }

    #[test]
    fn u12_class() {
        let t = tutte_class(&realize(&[], &[vec![1], vec![1]], 1)).unwrap();
        assert_eq!(t.coeff(&mono(1, 0, &[])), 1.into());
        assert_eq!(t.coeff(&mono(0, 0, &[])), 2.into());
        assert_eq!(t.coeff(&mono(0, 1, &[])), 1.into());
        assert_eq!(t.len(), 3);
        assert_eq!(classical_tutte(&t).to_string(), "x + y");
    }

    #[test]
    fn good_example_class() {
        let t = tutte_class(&good()).unwrap();
        assert_eq!(t.coeff(&mono(0, 0, &[2, 4])), 1.into());
        assert_eq!(t.coeff(&mono(0, 1, &[2])), 2.into());
        assert_eq!(t.coeff(&mono(0, 2, &[])), 1.into());
        assert_eq!(t.mass(), 4.into());
        assert_eq!(classical_tutte(&t).to_string(), "y^2");
        let ar = arithmetic_tutte(&t);
        assert_eq!(ar.to_string(), "y^2 + 2*y + 5");
        assert_eq!(ar.display_shifted(), "(y-1)^2 + 4*(y-1) + 8");
    }

    #[test]
    fn empty_ground_set() {
        let m = ZMatroid::new(GroundSet::numbered(0).unwrap(), vec![FgAbGroup::new(0, &[6u64])]).unwrap();
        let t = tutte_class(&m).unwrap();
        assert_eq!(t, TutteClass::unit(TorsionTag::of(&FgAbGroup::new(0, &[6u64]))));
    }

    #[test]
    fn coloop_and_vector_two() {
        let t = tutte_class(&realize(&[], &[vec![1]], 1)).unwrap();
        assert_eq!(classical_tutte(&t).to_string(), "x");
        let m = realize(&[], &[vec![2]], 1);
        let t = tutte_class(&m).unwrap();
        assert_eq!(arithmetic_tutte(&t).to_string(), "x + 1");
        assert_eq!(quasi_tutte_eval(&m, &2.into(), &2.into()).unwrap(), 2.into());
        assert_eq!(quasi_tutte_eval(&m, &3.into(), &3.into()).unwrap(), 4.into());
    }

    #[test]
    fn rejects_non_essential() {
        let m = realize(&[], &[vec![1, 0]], 2);
        assert!(matches!(tutte_class(&m), Err(Error::NotEssential(1))));
    }

    #[test]
    fn rank_polynomial() {
        // U_{1,2}
        assert_eq!(tutte_of_rank(2, &[0, 1, 1, 1]).to_string(), "x + y");
    }
}
