//! The quasi-arithmetic matroid `(E, rk, m)` underlying a matroid over `Z`,
//! with `m(A) = |tors M(A)|`, and an exhaustive axiom checker.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::matroid::{full_mask, size, GroundSet, Subset, ZMatroid};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QamData {
    pub ground: GroundSet,
    /// Rank of the generic matroid, subset-indexed.
    pub rk: Vec<usize>,
    /// Multiplicity, subset-indexed.
    pub m: Vec<BigUint>,
}

pub fn to_qam(mat: &ZMatroid) -> QamData {
    QamData {
        ground: mat.ground().clone(),
        rk: mat.generic_rank(),
        m: mat.multiplicities(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QamViolation {
    A1 { a: Subset, b: usize },
    A2b { a: Subset, b: Subset, f: Subset, t: Subset },
    A2a { a: Subset, b: Subset },
}

impl QamViolation {
    pub fn describe(&self, ground: &GroundSet) -> String {
        match *self {
            QamViolation::A1 { a, b } => {
                format!("A1 at (A={}, b={})", ground.show(a), ground.labels()[b])
            }
            QamViolation::A2b { a, b, f, t } => format!(
                "A2b at (A={}, B={}, F={}, T={})",
                ground.show(a),
                ground.show(b),
                ground.show(f),
                ground.show(t)
            ),
            QamViolation::A2a { a, b } => {
                format!("A2a at (A={}, B={})", ground.show(a), ground.show(b))
            }
        }
    }
}

impl fmt::Display for QamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QamViolation::A1 { a, b } => write!(f, "A1 a={a:#b} b={b}"),
            QamViolation::A2b { a, b, f: ff, t } => {
                write!(f, "A2b A={a:#b} B={b:#b} F={ff:#b} T={t:#b}")
            }
            QamViolation::A2a { a, b } => write!(f, "A2a A={a:#b} B={b:#b}"),
        }
    }
}

fn divides(d: &BigUint, n: &BigUint) -> bool {
    if d.is_zero() {
        n.is_zero()
    } else {
        (n % d).is_zero()
    }
}

/// Subsets of `s`, ascending.
fn subsets_of(s: Subset) -> impl Iterator<Item = Subset> {
    let mut next = Some(0);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == s { None } else { Some((cur.wrapping_sub(s)) & s) };
        Some(cur)
    })
}

/// Checks (A1), then (A2b), then (A2a), returning the first failure.
pub fn check_axioms(q: &QamData) -> Result<(), QamViolation> {
    let n = q.ground.len();
    let full = full_mask(n);
    let rk = |a: Subset| q.rk[a as usize];
    let m = |a: Subset| &q.m[a as usize];

    for a in 0..=full {
        for b in (0..n).filter(|&b| a >> b & 1 == 0) {
            let ab = a | 1 << b;
            let ok = if rk(ab) == rk(a) {
                divides(m(ab), m(a))
            } else {
                divides(m(a), m(ab))
            };
            if !ok {
                return Err(QamViolation::A1 { a, b });
            }
        }
    }

    for b in 0..=full {
        for a in subsets_of(b) {
            let rest = b & !a;
            for f in subsets_of(rest) {
                let t = rest & !f;
                let molecule = subsets_of(rest).all(|c| rk(a | c) == rk(a) + size(c & f));
                if molecule && m(a) * m(b) != m(a | f) * m(a | t) {
                    return Err(QamViolation::A2b { a, b, f, t });
                }
            }
        }
    }

    for a in 0..=full {
        for b in 0..=full {
            if rk(a | b) + rk(a & b) == rk(a) + rk(b)
                && !divides(&(m(a) * m(b)), &(m(a | b) * m(a & b)))
            {
                return Err(QamViolation::A2a { a, b });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::matroid::Realization;

    fn realize(rel: &[Vec<i64>], gens: &[Vec<i64>], n: usize) -> ZMatroid {
        let r = Realization::new(
            IntMatrix::from_columns(n, rel).unwrap(),
            IntMatrix::from_columns(n, gens).unwrap(),
        )
        .unwrap();
        ZMatroid::from_realization(&r).unwrap()
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets_of(0b101).collect::<Vec<_>>(), vec![0, 1, 4, 5]);
        assert_eq!(subsets_of(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn good_example() {
        let q = to_qam(&realize(&[vec![4, 0], vec![0, 2]], &[vec![1, 0], vec![1, 1]], 2));
        assert_eq!(q.rk, vec![0; 4]);
        assert_eq!(q.m, big(&[8, 2, 2, 1]));
        assert_eq!(check_axioms(&q), Ok(()));
    }

    #[test]
    fn small_realizations() {
        let q = to_qam(&realize(&[], &[vec![1], vec![1]], 1));
        assert_eq!((q.rk.clone(), q.m.clone()), (vec![0, 1, 1, 1], big(&[1; 4])));
        let q = to_qam(&realize(&[], &[vec![2]], 1));
        assert_eq!((q.rk.clone(), q.m.clone()), (vec![0, 1], big(&[1, 2])));
        assert_eq!(check_axioms(&q), Ok(()));
    }

    #[test]
    fn hand_built_violation() {
        let q = QamData {
            ground: GroundSet::numbered(2).unwrap(),
            rk: vec![0; 4],
            m: big(&[8, 2, 2, 3]),
        };
        assert_eq!(check_axioms(&q), Err(QamViolation::A1 { a: 0b01, b: 1 }));
        assert_eq!(
            check_axioms(&q).unwrap_err().describe(&q.ground),
            "A1 at (A={1}, b=2)"
        );
    }

    #[test]
    fn dual_multiplicities() {
        let m = realize(&[vec![6, 0]], &[vec![1, 2], vec![3, 3], vec![0, 5]], 2);
        let d = crate::duality::dual(&m).unwrap();
        let full = m.full();
        for a in 0..=full {
            assert_eq!(m.get(a).torsion_order(), d.get(full & !a).torsion_order());
        }
        assert_eq!(check_axioms(&to_qam(&d)), Ok(()));
    }
}
