//! Duality of matroids over `Z` and over a DVR, and Gale duality of
//! realizations.
//!
//! Over a Dedekind domain the dual is determined by
//! `tors M*(E∖A) ≅ tors M(A)` together with a class in `K_0`. For `Z` the
//! Picard group is trivial, so the class reduces to the rank
//! `rank M(A) + |A| - rank M(∅)`. A Dedekind domain with nontrivial class
//! group would need an ideal class carried alongside the rank here.

use crate::error::Result;
use crate::group::{DMod, FgAbGroup};
use crate::linalg::{column_basis, IntMatrix};
use crate::matroid::{size, DvrMatroid, Matroid, Module, Realization, ZMatroid};

/// Shared table construction for both rings.
fn dual_table<M: Module>(m: &Matroid<M>, entry: impl Fn(&M, usize) -> M + Sync) -> Matroid<M> {
    let full = m.full();
    let base = m.get(0).free_rank();
    Matroid::from_fn(m.ground().clone(), |b| {
        let a = full & !b;
        let ma = m.get(a);
        entry(ma, ma.free_rank() + size(a) - base)
    })
    .assume_verified(true)
}

/// The dual matroid. Unverified input is checked first and rejected if it
/// fails the axiom.
pub fn dual(m: &ZMatroid) -> Result<ZMatroid> {
    let m = m.clone().verify()?;
    Ok(dual_table(&m, |g, r| g.with_rank(r)))
}

/// The dual over a DVR; the torsion partition is carried over unchanged.
pub fn dual_dvr(m: &DvrMatroid) -> Result<DvrMatroid> {
    let m = m.clone().verify()?;
    Ok(dual_table(&m, |d, r| d.with_rank(r)))
}

/// A realization of the dual matroid.
///
/// With `N = Z^n / im(R)` and generators `X`, the dual ambient module is the
/// cokernel of `[R | X]^T`, and the element `a` maps to the basis vector `e^a`
/// of the `X` block. `R` is first replaced by a basis of its column span,
/// since dependent relations would otherwise add a spurious free summand.
pub fn gale_dual(r: &Realization) -> Realization {
    let rel = column_basis(r.ambient_relations());
    let m = rel.cols();
    let k = r.len();
    let ambient = rel
        .hcat(r.generators())
        .expect("row counts agree")
        .transpose();
    let mut gens = IntMatrix::zeros(m + k, k);
    for j in 0..k {
        gens[(m + j, j)] = 1.into();
    }
    Realization::new(ambient, gens).expect("dimensions agree by construction")
}

/// Rank/torsion of `M*(E∖A)` for a single subset; used by callers that do
/// not need the full table.
pub fn dual_entry(m: &ZMatroid, a: crate::matroid::Subset) -> FgAbGroup {
    let base = m.get(0).rank();
    let g = m.get(a);
    g.with_rank(g.rank() + size(a) - base)
}

/// `dual_entry` for a DVR table.
pub fn dual_entry_dvr(m: &DvrMatroid, a: crate::matroid::Subset) -> DMod {
    let base = m.get(0).rank();
    let d = m.get(a);
    d.with_rank(d.rank() + size(a) - base)
}
