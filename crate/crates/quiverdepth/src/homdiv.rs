//! Hom spaces between bimodules, endomorphism algebras, and divisibility
//! into multiples (`M ∈ add(N)`, i.e. `M | qN` for some q).
//!
//! Divisibility is decided by the trace-ideal criterion: `M ∈ add(N)` iff
//! `id_M` is a sum of compositions `M → N → M`. The set of all such finite
//! sums equals the linear span of the pairwise compositions `g ∘ f` over
//! Hom-space bases (bilinearity), so the test is pure span membership and
//! no Krull-Schmidt decomposition is ever computed.

use std::sync::Arc;

use crate::algebra::{Algebra, ArcAlgebra};
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::exactlin::{sv_collect, sv_get, Mat, RowSpan, SparseVec};
use crate::field::Field;

/// A basis of the space of bimodule maps `source → target`, as
/// `dim(target) × dim(source)` matrices intertwining both actions.
pub struct HomSpace<F: Field> {
    pub source_dim: usize,
    pub target_dim: usize,
    pub basis: Vec<Mat<F>>,
    /// Flattened (row-major) coordinate at which basis element k has value
    /// 1 while all other basis elements vanish; coordinates of a hom in
    /// this basis are read off these positions.
    free_coords: Vec<usize>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a matrix known to lie in the span.
    pub fn coords(&self, f: &F, m: &Mat<F>) -> SparseVec<F::Elem> {
        let flat = m.flatten();
        sv_collect(
            f,
            self.free_coords
                .iter()
                .enumerate()
                .filter_map(|(k, &pos)| sv_get(&flat, pos).map(|c| (k, c.clone()))),
        )
    }
}

/// Solves the intertwiner system for bimodule maps `m → n`, using the
/// acting algebras' generating sets (or their full bases on request; both
/// give the same space because actions are multiplicative).
pub fn hom_space_with<F: Field>(
    m: &Bimodule<F>,
    n: &Bimodule<F>,
    use_full_basis: bool,
) -> Result<HomSpace<F>> {
    if m.left_algebra().as_ref() != n.left_algebra().as_ref()
        || m.right_algebra().as_ref() != n.right_algebra().as_ref()
    {
        return Err(Error::algebra("hom requires the same algebra pair"));
    }
    let f = m.left_algebra().field().clone();
    let (dm, dn) = (m.dim(), n.dim());
    let unknowns = dn * dm;
    let idx = |r: usize, c: usize| r * dm + c;

    let gens_of = |a: &ArcAlgebra<F>| -> Vec<SparseVec<F::Elem>> {
        if use_full_basis {
            (0..a.dim())
                .map(|k| crate::exactlin::sv_unit(&f, k))
                .collect()
        } else {
            a.generating_set()
        }
    };

    let mut rows: Vec<SparseVec<F::Elem>> = Vec::new();
    // F · L_m(g) - L_n(g) · F = 0
    for g in gens_of(m.left_algebra()) {
        let lm_cols = m.left_action_of(&g).transpose();
        let ln = n.left_action_of(&g);
        for i in 0..dn {
            for j in 0..dm {
                let mut eq: Vec<(usize, F::Elem)> = Vec::new();
                for (c, v) in lm_cols.row(j) {
                    eq.push((idx(i, *c), v.clone()));
                }
                for (r, v) in ln.row(i) {
                    eq.push((idx(*r, j), f.neg(v)));
                }
                let eq = sv_collect(&f, eq);
                if !eq.is_empty() {
                    rows.push(eq);
                }
            }
        }
    }
    // F · R_m(g) - R_n(g) · F = 0
    for g in gens_of(m.right_algebra()) {
        let rm_cols = m.right_action_of(&g).transpose();
        let rn = n.right_action_of(&g);
        for i in 0..dn {
            for j in 0..dm {
                let mut eq: Vec<(usize, F::Elem)> = Vec::new();
                for (c, v) in rm_cols.row(j) {
                    eq.push((idx(i, *c), v.clone()));
                }
                for (r, v) in rn.row(i) {
                    eq.push((idx(*r, j), f.neg(v)));
                }
                let eq = sv_collect(&f, eq);
                if !eq.is_empty() {
                    rows.push(eq);
                }
            }
        }
    }
    let system = Mat::from_rows(f.clone(), unknowns, rows)?;
    let (kernel, free_coords) = system.kernel_basis_with_free();
    let basis = kernel
        .into_iter()
        .map(|v| {
            let mut mat = Mat::zero(f.clone(), dn, dm);
            for (k, c) in v {
                mat.set(k / dm, k % dm, c);
            }
            mat
        })
        .collect();
    Ok(HomSpace {
        source_dim: dm,
        target_dim: dn,
        basis,
        free_coords,
    })
}

pub fn hom_space<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>) -> Result<HomSpace<F>> {
    hom_space_with(m, n, false)
}

/// The endomorphism algebra of a bimodule, with multiplication given by
/// composition. Feed the result to `is_local` to test indecomposability.
pub fn end_algebra<F: Field>(m: &Bimodule<F>) -> Result<ArcAlgebra<F>> {
    let f = m.left_algebra().field().clone();
    let h = hom_space(m, m)?;
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::algebra(
            "endomorphism algebra of the zero module is not unital",
        ));
    }
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let composed = h.basis[i].matmul(&h.basis[j])?;
            let coords = h.coords(&f, &composed);
            // sanity: the composition really lies in the hom space
            let mut rebuilt = Mat::zero(f.clone(), m.dim(), m.dim());
            for (k, c) in &coords {
                rebuilt = rebuilt.add(&h.basis[*k].scale(c))?;
            }
            if rebuilt != composed {
                return Err(Error::algebra("hom space is not closed under composition"));
            }
            mult[i][j] = coords;
        }
    }
    let unit = h.coords(&f, &Mat::identity(f.clone(), m.dim()));
    let labels = (1..=dim).map(|k| format!("F_{k}")).collect();
    Ok(Arc::new(Algebra::new(f, labels, mult, unit, None, None)?))
}

/// `m ∈ add(n)`: true iff `id_m` lies in the span of all compositions
/// `g ∘ f` with `f: m → n`, `g: n → m`. Exact boolean.
pub fn in_add<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>) -> Result<bool> {
    if m.left_algebra().as_ref() != n.left_algebra().as_ref()
        || m.right_algebra().as_ref() != n.right_algebra().as_ref()
    {
        return Err(Error::algebra("in_add requires the same algebra pair"));
    }
    if m.dim() == 0 {
        return Ok(true); // the zero module divides everything
    }
    if n.dim() == 0 {
        return Ok(false);
    }
    let f = m.left_algebra().field().clone();
    let forward = hom_space(m, n)?;
    let backward = hom_space(n, m)?;
    if forward.dim() == 0 || backward.dim() == 0 {
        return Ok(false);
    }
    let id = Mat::identity(f.clone(), m.dim()).flatten();
    let mut span = RowSpan::new(f.clone(), m.dim() * m.dim());
    for g in &backward.basis {
        let mut grew = false;
        for fw in &forward.basis {
            let comp = g.matmul(fw)?;
            grew |= span.insert(&comp.flatten());
        }
        if grew && span.contains(&id) {
            return Ok(true);
        }
    }
    Ok(span.contains(&id))
}

/// H-equivalence: `m | q·n` and `n | r·m`.
pub fn h_equivalent<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>) -> Result<bool> {
    Ok(in_add(m, n)? && in_add(n, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{Side, TensorChain};
    use crate::families::{
        arrow_subalgebra, local_augmentation, simple_bimodule, simple_bimodule_from, t_n,
        top_subalgebra,
    };
    use crate::field::Rationals;

    fn q() -> Rationals {
        Rationals
    }

    #[test]
    fn hom_of_simple_with_itself_is_scalars() {
        let t2 = t_n(2, q()).unwrap();
        let arrow = arrow_subalgebra(&t2).unwrap();
        let eps = local_augmentation(&arrow).unwrap();
        let keps = simple_bimodule_from(arrow.sub(), &eps, arrow.sub(), &eps).unwrap();
        assert_eq!(hom_space(&keps, &keps).unwrap().dim(), 1);
    }

    #[test]
    fn hom_between_distinct_simples_vanishes() {
        let t2 = t_n(2, q()).unwrap();
        let top = top_subalgebra(&t2).unwrap();
        let k12 = simple_bimodule(&t2, 0, 1)
            .unwrap()
            .restrict(Side::Both, &top)
            .unwrap();
        let k21 = simple_bimodule(&t2, 1, 0)
            .unwrap()
            .restrict(Side::Both, &top)
            .unwrap();
        assert_eq!(hom_space(&k12, &k21).unwrap().dim(), 0);
    }

    #[test]
    fn hom_generating_set_agrees_with_full_basis() {
        let t3 = t_n(3, q()).unwrap();
        let top = top_subalgebra(&t3).unwrap();
        let mut chain = TensorChain::new(top).unwrap();
        for (a, b) in [(1usize, 2usize), (2, 1)] {
            for pair in [
                crate::bimodule::Pair::AA,
                crate::bimodule::Pair::AB,
                crate::bimodule::Pair::BB,
            ] {
                let x = chain.c_n_as(a, pair).unwrap();
                let y = chain.c_n_as(b, pair).unwrap();
                let fast = hom_space_with(&x, &y, false).unwrap();
                let slow = hom_space_with(&x, &y, true).unwrap();
                assert_eq!(fast.dim(), slow.dim(), "{a}->{b} {pair:?}");
            }
        }
    }

    #[test]
    fn end_of_arrow_restriction_is_local() {
        // _B A _B for B = U_3 in T_3 is indecomposable
        let t3 = t_n(3, q()).unwrap();
        let arrow = arrow_subalgebra(&t3).unwrap();
        let a_bb = crate::bimodule::Bimodule::regular(&t3)
            .restrict(Side::Both, &arrow)
            .unwrap();
        let end = end_algebra(&a_bb).unwrap();
        assert!(crate::algebra::is_local(&end).unwrap());
    }

    #[test]
    fn end_of_top_restriction_splits() {
        // _B A _B for B = D_2 splits into three simples, so End = K^3
        let t2 = t_n(2, q()).unwrap();
        let top = top_subalgebra(&t2).unwrap();
        let a_bb = crate::bimodule::Bimodule::regular(&t2)
            .restrict(Side::Both, &top)
            .unwrap();
        let end = end_algebra(&a_bb).unwrap();
        assert_eq!(end.dim(), 3);
        assert!(!crate::algebra::is_local(&end).unwrap());
    }

    #[test]
    fn in_add_is_reflexive_and_respects_sums() {
        let t2 = t_n(2, q()).unwrap();
        let m = crate::bimodule::Bimodule::regular(&t2);
        assert!(in_add(&m, &m).unwrap());
        let k12 = simple_bimodule(&t2, 0, 1).unwrap();
        let sum = crate::bimodule::Bimodule::direct_sum(&[m.clone(), k12]).unwrap();
        assert!(in_add(&m, &sum).unwrap());
        assert!(!in_add(&sum, &m).unwrap()); // K_12 does not divide a multiple of A
    }

    #[test]
    fn multiples_are_h_equivalent() {
        let t2 = t_n(2, q()).unwrap();
        let m = crate::bimodule::Bimodule::regular(&t2);
        assert!(h_equivalent(&m, &m).unwrap());
        let triple = m.multiple(3).unwrap();
        assert!(h_equivalent(&m, &triple).unwrap());
    }

    #[test]
    fn tensor_square_of_top_is_h_equivalent_to_a() {
        // A ⊗_B A ~ A as B-B-bimodules for the diagonal of T_2
        let t2 = t_n(2, q()).unwrap();
        let top = top_subalgebra(&t2).unwrap();
        let mut chain = TensorChain::new(top).unwrap();
        let c2 = chain.c_n_as(2, crate::bimodule::Pair::BB).unwrap();
        let c1 = chain.c_n_as(1, crate::bimodule::Pair::BB).unwrap();
        assert!(h_equivalent(&c2, &c1).unwrap());
    }

    #[test]
    fn h_equivalence_is_an_equivalence_relation_on_the_chain() {
        // reflexive, symmetric by definition; transitive across the
        // H-equivalent levels of the diagonal pair (C_1 ~ C_2 ~ C_3 as B-B)
        let t2 = t_n(2, q()).unwrap();
        let top = top_subalgebra(&t2).unwrap();
        let mut chain = TensorChain::new(top).unwrap();
        let c1 = chain.c_n_as(1, crate::bimodule::Pair::BB).unwrap();
        let c2 = chain.c_n_as(2, crate::bimodule::Pair::BB).unwrap();
        let c3 = chain.c_n_as(3, crate::bimodule::Pair::BB).unwrap();
        for m in [&c1, &c2, &c3] {
            assert!(h_equivalent(m, m).unwrap());
        }
        assert!(h_equivalent(&c1, &c2).unwrap());
        assert!(h_equivalent(&c2, &c1).unwrap());
        assert!(h_equivalent(&c2, &c3).unwrap());
        // transitivity instance
        assert!(h_equivalent(&c1, &c3).unwrap());
        // and a negative: C_0 = B is not H-equivalent to C_1 = A here
        let c0 = chain.c_n_as(0, crate::bimodule::Pair::BB).unwrap();
        assert!(!h_equivalent(&c0, &c1).unwrap());
    }

    #[test]
    fn tensor_square_of_arrow_is_not_in_add_of_a() {
        // the extra K_eps summand obstructs divisibility for B = U_2
        let t2 = t_n(2, q()).unwrap();
        let arrow = arrow_subalgebra(&t2).unwrap();
        let mut chain = TensorChain::new(arrow).unwrap();
        let c2 = chain.c_n_as(2, crate::bimodule::Pair::BB).unwrap();
        let c1 = chain.c_n_as(1, crate::bimodule::Pair::BB).unwrap();
        assert!(!in_add(&c2, &c1).unwrap());
        // the universal splitting direction always holds
        assert!(in_add(&c1, &c2).unwrap());
    }
}
