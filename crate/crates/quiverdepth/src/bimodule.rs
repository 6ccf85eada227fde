//! Bimodules with explicit action matrices, restriction along subalgebra
//! inclusions, direct sums, corners under idempotents, and the relative
//! tensor powers `C_n(A,B) = A ⊗_B … ⊗_B A` with level caching.
//!
//! Action conventions: `left_action(x)` and `right_action(y)` act on column
//! vectors, so `left_action(xy) = left_action(x)·left_action(y)` while
//! `right_action(yz) = right_action(z)·right_action(y)`.

use std::collections::BTreeMap;

use crate::algebra::{ArcAlgebra, SubalgebraEmbedding};
use crate::error::{Error, Result};
use crate::exactlin::{sv_add_scaled, sv_get, sv_unit, Mat, RowSpan, SparseVec};
use crate::field::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

/// Which bimodule structure a tensor power is viewed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pair {
    AA,
    AB,
    BA,
    BB,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bimodule<F: Field> {
    left: ArcAlgebra<F>,
    right: ArcAlgebra<F>,
    dim: usize,
    left_action: Vec<Mat<F>>,
    right_action: Vec<Mat<F>>,
}

impl<F: Field> Bimodule<F> {
    /// Builds a bimodule and verifies all action axioms exhaustively on
    /// basis pairs (unitality, multiplicativity on both sides, and
    /// commutation of the two actions).
    pub fn new(
        left: ArcAlgebra<F>,
        right: ArcAlgebra<F>,
        dim: usize,
        left_action: Vec<Mat<F>>,
        right_action: Vec<Mat<F>>,
    ) -> Result<Self> {
        if left_action.len() != left.dim() || right_action.len() != right.dim() {
            return Err(Error::dim("one action matrix per algebra basis element"));
        }
        for m in left_action.iter().chain(right_action.iter()) {
            if m.n_rows() != dim || m.n_cols() != dim {
                return Err(Error::dim("action matrix has wrong shape"));
            }
        }
        let bm = Bimodule {
            left,
            right,
            dim,
            left_action,
            right_action,
        };
        bm.check_axioms()?;
        Ok(bm)
    }

    fn check_axioms(&self) -> Result<()> {
        let id = Mat::identity(self.left.field().clone(), self.dim);
        if self.left_action_of(self.left.unit()) != id {
            return Err(Error::algebra("left unit does not act as identity"));
        }
        if self.right_action_of(self.right.unit()) != id {
            return Err(Error::algebra("right unit does not act as identity"));
        }
        let ldim = self.left.dim();
        let rdim = self.right.dim();
        for i in 0..ldim {
            for j in 0..ldim {
                let composed = self.left_action[i].matmul(&self.left_action[j])?;
                if composed != self.left_action_of(self.left.basis_product(i, j)) {
                    return Err(Error::algebra(format!(
                        "left action not multiplicative at ({i},{j})"
                    )));
                }
            }
        }
        for i in 0..rdim {
            for j in 0..rdim {
                // (v·e_i)·e_j = v·(e_i e_j): action of the product composes reversed
                let composed = self.right_action[j].matmul(&self.right_action[i])?;
                if composed != self.right_action_of(self.right.basis_product(i, j)) {
                    return Err(Error::algebra(format!(
                        "right action not multiplicative at ({i},{j})"
                    )));
                }
            }
        }
        for i in 0..ldim {
            for j in 0..rdim {
                let lr = self.left_action[i].matmul(&self.right_action[j])?;
                let rl = self.right_action[j].matmul(&self.left_action[i])?;
                if lr != rl {
                    return Err(Error::algebra(format!(
                        "left and right actions do not commute at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn left_algebra(&self) -> &ArcAlgebra<F> {
        &self.left
    }

    pub fn right_algebra(&self) -> &ArcAlgebra<F> {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self, i: usize) -> &Mat<F> {
        &self.left_action[i]
    }

    pub fn right_action(&self, i: usize) -> &Mat<F> {
        &self.right_action[i]
    }

    /// Action matrix of an arbitrary element of the left algebra.
    pub fn left_action_of(&self, x: &[(usize, F::Elem)]) -> Mat<F> {
        let f = self.left.field();
        let mut acc = Mat::zero(f.clone(), self.dim, self.dim);
        for (i, c) in x {
            acc = acc
                .add(&self.left_action[*i].scale(c))
                .expect("shapes agree");
        }
        acc
    }

    pub fn right_action_of(&self, y: &[(usize, F::Elem)]) -> Mat<F> {
        let f = self.right.field();
        let mut acc = Mat::zero(f.clone(), self.dim, self.dim);
        for (i, c) in y {
            acc = acc
                .add(&self.right_action[*i].scale(c))
                .expect("shapes agree");
        }
        acc
    }

    /// The regular bimodule: `A` acting on itself by multiplication.
    pub fn regular(a: &ArcAlgebra<F>) -> Self {
        let f = a.field();
        let left_action = (0..a.dim())
            .map(|i| a.left_mult_mat(&sv_unit(f, i)))
            .collect();
        let right_action = (0..a.dim())
            .map(|i| a.right_mult_mat(&sv_unit(f, i)))
            .collect();
        Bimodule::new(a.clone(), a.clone(), a.dim(), left_action, right_action)
            .expect("regular bimodule satisfies the axioms")
    }

    /// Restricts the action on the chosen side(s) along a subalgebra
    /// embedding. The underlying space is unchanged.
    pub fn restrict(&self, side: Side, e: &SubalgebraEmbedding<F>) -> Result<Bimodule<F>> {
        let restrict_left = matches!(side, Side::Left | Side::Both);
        let restrict_right = matches!(side, Side::Right | Side::Both);
        if restrict_left && e.ambient().as_ref() != self.left.as_ref() {
            return Err(Error::algebra(
                "embedding ambient does not match the left algebra",
            ));
        }
        if restrict_right && e.ambient().as_ref() != self.right.as_ref() {
            return Err(Error::algebra(
                "embedding ambient does not match the right algebra",
            ));
        }
        let sub = e.sub();
        let f = sub.field();
        let (left, left_action) = if restrict_left {
            let acts = (0..sub.dim())
                .map(|c| self.left_action_of(&e.include(&sv_unit(f, c))))
                .collect();
            (sub.clone(), acts)
        } else {
            (self.left.clone(), self.left_action.clone())
        };
        let (right, right_action) = if restrict_right {
            let acts = (0..sub.dim())
                .map(|c| self.right_action_of(&e.include(&sv_unit(f, c))))
                .collect();
            (sub.clone(), acts)
        } else {
            (self.right.clone(), self.right_action.clone())
        };
        Bimodule::new(left, right, self.dim, left_action, right_action)
    }

    /// Block-diagonal direct sum. All summands must share the algebra pair.
    pub fn direct_sum(summands: &[Bimodule<F>]) -> Result<Bimodule<F>> {
        let first = summands
            .first()
            .ok_or_else(|| Error::invalid("direct sum of no summands"))?;
        for m in summands {
            if m.left.as_ref() != first.left.as_ref() || m.right.as_ref() != first.right.as_ref() {
                return Err(Error::algebra("direct sum algebra pair mismatch"));
            }
        }
        let f = first.left.field().clone();
        let dim: usize = summands.iter().map(|m| m.dim).sum();
        let block = |pick: &dyn Fn(&Bimodule<F>, usize) -> Mat<F>, i: usize| -> Mat<F> {
            let mut out = Mat::zero(f.clone(), dim, dim);
            let mut off = 0;
            for m in summands {
                let a = pick(m, i);
                for r in 0..m.dim {
                    for (c, v) in a.row(r) {
                        out.set(off + r, off + c, v.clone());
                    }
                }
                off += m.dim;
            }
            out
        };
        let left_action = (0..first.left.dim())
            .map(|i| block(&|m, i| m.left_action[i].clone(), i))
            .collect();
        let right_action = (0..first.right.dim())
            .map(|i| block(&|m, i| m.right_action[i].clone(), i))
            .collect();
        Bimodule::new(
            first.left.clone(),
            first.right.clone(),
            dim,
            left_action,
            right_action,
        )
    }

    /// `n` copies of this bimodule.
    pub fn multiple(&self, n: usize) -> Result<Bimodule<F>> {
        Bimodule::direct_sum(&vec![self.clone(); n])
    }

    /// Image of the commuting projectors `left_action(ei)·right_action(ej)`
    /// for idempotents `ei`, `ej` of the acting algebras.
    pub fn corner(
        &self,
        ei: &[(usize, F::Elem)],
        ej: &[(usize, F::Elem)],
    ) -> Result<CornerSpace<F>> {
        if !self.left.is_idempotent(ei) {
            return Err(Error::NotIdempotent("left corner element".into()));
        }
        if !self.right.is_idempotent(ej) {
            return Err(Error::NotIdempotent("right corner element".into()));
        }
        let p = self.left_action_of(ei).matmul(&self.right_action_of(ej))?;
        let f = self.left.field().clone();
        let mut span = RowSpan::new(f, self.dim);
        for row in p.transpose().rows() {
            span.insert(row);
        }
        Ok(CornerSpace {
            basis: span.basis().to_vec(),
        })
    }
}

/// A subspace of a bimodule (canonical basis), as returned by corners.
#[derive(Clone, Debug)]
pub struct CornerSpace<F: Field> {
    pub basis: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> CornerSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `m ⊗_B n` together with the projection from `m ⊗_K n` and a section.
pub struct TensorProduct<F: Field> {
    pub module: Bimodule<F>,
    /// `dim(module) × dim(m)·dim(n)`
    pub projection: Mat<F>,
    /// `dim(m)·dim(n) × dim(module)`, with `projection ∘ section = id`.
    pub section: Mat<F>,
}

/// Relative tensor product over the shared algebra `B`: quotients
/// `m ⊗_K n` by the middle-linearity relations `(x·b)⊗y − x⊗(b·y)` and
/// descends the outer actions.
pub fn tensor_over<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>) -> Result<TensorProduct<F>> {
    if m.right.as_ref() != n.left.as_ref() {
        return Err(Error::algebra(
            "tensor factors do not share the middle algebra",
        ));
    }
    let b = &m.right;
    let f = b.field().clone();
    let (dm, dn) = (m.dim, n.dim);
    let kron = dm * dn;
    let idx = |u: usize, v: usize| u * dn + v;

    // relation span: for every b-basis element and kron basis vector
    let mut relations: Vec<SparseVec<F::Elem>> = Vec::with_capacity(b.dim() * kron);
    for bi in 0..b.dim() {
        let right_cols = m.right_action[bi].transpose(); // row u = coords of e_u · b
        let left_cols = n.left_action[bi].transpose(); // row v = coords of b · e_v
        for u in 0..dm {
            let xu = right_cols.row(u);
            for v in 0..dn {
                let bv = left_cols.row(v);
                let mut rel: Vec<(usize, F::Elem)> = Vec::new();
                for (w, c) in xu {
                    rel.push((idx(*w, v), c.clone()));
                }
                for (w, c) in bv {
                    rel.push((idx(u, *w), f.neg(c)));
                }
                let rel = crate::exactlin::sv_collect(&f, rel);
                if !rel.is_empty() {
                    relations.push(rel);
                }
            }
        }
    }
    let rel_mat = Mat::from_rows(f.clone(), kron, relations)?;
    let rref = rel_mat.rref();
    let mut is_pivot = vec![false; kron];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..kron).filter(|&k| !is_pivot[k]).collect();
    let free_pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(c, &k)| (k, c)).collect();
    let dim_c = free.len();

    // project: reduce modulo the relation RREF, then reindex free coords
    let project = |v: &SparseVec<F::Elem>| -> SparseVec<F::Elem> {
        let mut cur = v.clone();
        for (k, &p) in rref.pivots.iter().enumerate() {
            if let Some(c) = sv_get(&cur, p) {
                let c = f.neg(&c.clone());
                cur = sv_add_scaled(&f, &cur, rref.mat.row(k), &c);
            }
        }
        cur.into_iter().map(|(k, c)| (free_pos[&k], c)).collect()
    };

    let mut projection = Mat::zero(f.clone(), dim_c, kron);
    for k in 0..kron {
        for (r, c) in project(&sv_unit(&f, k)) {
            projection.set(r, k, c);
        }
    }
    let mut section = Mat::zero(f.clone(), kron, dim_c);
    for (c, &k) in free.iter().enumerate() {
        section.set(k, c, f.one());
    }

    // outer actions descend because they commute with the middle action
    let mut left_action = Vec::with_capacity(m.left.dim());
    for i in 0..m.left.dim() {
        let lm = &m.left_action[i];
        let mut act = Mat::zero(f.clone(), dim_c, dim_c);
        for (c, &k) in free.iter().enumerate() {
            let (u0, v0) = (k / dn, k % dn);
            let mut img: Vec<(usize, F::Elem)> = Vec::new();
            for (w, coeff) in lm.transpose().row(u0) {
                img.push((idx(*w, v0), coeff.clone()));
            }
            img.sort_by_key(|(i, _)| *i);
            for (r, v) in project(&img) {
                act.set(r, c, v);
            }
        }
        left_action.push(act);
    }
    let mut right_action = Vec::with_capacity(n.right.dim());
    for j in 0..n.right.dim() {
        let rn = &n.right_action[j];
        let mut act = Mat::zero(f.clone(), dim_c, dim_c);
        for (c, &k) in free.iter().enumerate() {
            let (u0, v0) = (k / dn, k % dn);
            let mut img: Vec<(usize, F::Elem)> = Vec::new();
            for (w, coeff) in rn.transpose().row(v0) {
                img.push((idx(u0, *w), coeff.clone()));
            }
            img.sort_by_key(|(i, _)| *i);
            for (r, v) in project(&img) {
                act.set(r, c, v);
            }
        }
        right_action.push(act);
    }
    let module = Bimodule::new(
        m.left.clone(),
        n.right.clone(),
        dim_c,
        left_action,
        right_action,
    )?;
    let check = projection.matmul(&section)?;
    if check != Mat::identity(f.clone(), dim_c) {
        return Err(Error::algebra("projection/section are not a retraction"));
    }
    Ok(TensorProduct {
        module,
        projection,
        section,
    })
}

struct Level<F: Field> {
    /// `C_{k+1}` as an (A,A)-bimodule.
    module: Bimodule<F>,
    projection: Mat<F>,
    section: Mat<F>,
}

/// The chain of relative tensor powers of one subalgebra pair, with level
/// caching. Levels are computed once and then immutable; concurrent use
/// follows the usual single-writer / many-readers discipline that `&mut`
/// enforces.
pub struct TensorChain<F: Field> {
    emb: SubalgebraEmbedding<F>,
    c0: Bimodule<F>,
    regular_a: Bimodule<F>,
    /// A as a (B,A)-bimodule: the recurring right tensor factor.
    a_left_restricted: Bimodule<F>,
    levels: Vec<Level<F>>,
    restricted: BTreeMap<(usize, Pair), Bimodule<F>>,
}

impl<F: Field> TensorChain<F> {
    pub fn new(emb: SubalgebraEmbedding<F>) -> Result<Self> {
        let c0 = Bimodule::regular(emb.sub());
        let regular_a = Bimodule::regular(emb.ambient());
        let a_left_restricted = regular_a.restrict(Side::Left, &emb)?;
        Ok(TensorChain {
            emb,
            c0,
            regular_a,
            a_left_restricted,
            levels: Vec::new(),
            restricted: BTreeMap::new(),
        })
    }

    pub fn embedding(&self) -> &SubalgebraEmbedding<F> {
        &self.emb
    }

    /// `C_0 = B` as a B-B-bimodule (it carries no A-structure).
    pub fn c0(&self) -> &Bimodule<F> {
        &self.c0
    }

    fn ensure_level(&mut self, n: usize) -> Result<()> {
        assert!(n >= 1);
        while self.levels.len() < n {
            let next = if self.levels.is_empty() {
                let id = Mat::identity(self.emb.ambient().field().clone(), self.regular_a.dim());
                Level {
                    module: self.regular_a.clone(),
                    projection: id.clone(),
                    section: id,
                }
            } else {
                let prev = &self.levels.last().unwrap().module;
                let prev_ab = prev.restrict(Side::Right, &self.emb)?;
                let t = tensor_over(&prev_ab, &self.a_left_restricted)?;
                // dim C_{n+1} <= dim C_n * dim A
                debug_assert!(t.module.dim() <= prev.dim() * self.regular_a.dim());
                Level {
                    module: t.module,
                    projection: t.projection,
                    section: t.section,
                }
            };
            self.levels.push(next);
        }
        Ok(())
    }

    /// `C_n` as an (A,A)-bimodule, `n >= 1`.
    pub fn c_n(&mut self, n: usize) -> Result<&Bimodule<F>> {
        if n == 0 {
            return Err(Error::invalid(
                "C_0 = B carries no A-A structure; use c0() for the B-B-bimodule",
            ));
        }
        self.ensure_level(n)?;
        Ok(&self.levels[n - 1].module)
    }

    /// `C_n` in the requested bimodule structure. For `n = 0` only the B-B
    /// structure exists.
    pub fn c_n_as(&mut self, n: usize, pair: Pair) -> Result<Bimodule<F>> {
        if n == 0 {
            return match pair {
                Pair::BB => Ok(self.c0.clone()),
                _ => Err(Error::invalid("C_0 = B exists only as a B-B-bimodule")),
            };
        }
        if let Some(cached) = self.restricted.get(&(n, pair)) {
            return Ok(cached.clone());
        }
        self.ensure_level(n)?;
        let base = self.levels[n - 1].module.clone();
        let out = match pair {
            Pair::AA => base,
            Pair::AB => base.restrict(Side::Right, &self.emb)?,
            Pair::BA => base.restrict(Side::Left, &self.emb)?,
            Pair::BB => base.restrict(Side::Both, &self.emb)?,
        };
        self.restricted.insert((n, pair), out.clone());
        Ok(out)
    }

    pub fn dim_c_n(&mut self, n: usize) -> Result<usize> {
        if n == 0 {
            return Ok(self.c0.dim());
        }
        self.ensure_level(n)?;
        Ok(self.levels[n - 1].module.dim())
    }

    pub fn projection(&mut self, n: usize) -> Result<&Mat<F>> {
        self.ensure_level(n)?;
        Ok(&self.levels[n - 1].projection)
    }

    pub fn section(&mut self, n: usize) -> Result<&Mat<F>> {
        self.ensure_level(n)?;
        Ok(&self.levels[n - 1].section)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::one_dim;
    use crate::families::{arrow_subalgebra, t_n, top_subalgebra};
    use crate::field::{Field, Rationals};

    fn q() -> Rationals {
        Rationals
    }

    #[test]
    fn regular_bimodule_of_the_field() {
        let k = one_dim(q());
        let m = Bimodule::regular(&k);
        assert_eq!(m.dim(), 1);
        assert_eq!(m.left_action(0), &Mat::identity(q(), 1));
        assert_eq!(m.right_action(0), &Mat::identity(q(), 1));
    }

    #[test]
    fn restrict_along_identity_is_identity() {
        let a = t_n(2, q()).unwrap();
        let m = Bimodule::regular(&a);
        let e = SubalgebraEmbedding::identity(&a);
        let r = m.restrict(Side::Both, &e).unwrap();
        assert_eq!(r, m);
    }

    #[test]
    fn restricted_right_action_of_top_is_corner_projection() {
        // A_B for the diagonal of T_2: right action by eps_i projects onto
        // the paths ending at vertex i
        let a = t_n(2, q()).unwrap();
        let top = top_subalgebra(&a).unwrap();
        let m = Bimodule::regular(&a).restrict(Side::Right, &top).unwrap();
        for c in 0..top.sub().dim() {
            let act = m.right_action(c);
            // projection: squares to itself
            assert_eq!(&act.matmul(act).unwrap(), act);
        }
    }

    #[test]
    fn tensor_of_field_with_itself() {
        let k = one_dim(q());
        let m = Bimodule::regular(&k);
        let t = tensor_over(&m, &m).unwrap();
        assert_eq!(t.module.dim(), 1);
    }

    #[test]
    fn tensor_square_dims_for_named_subalgebras() {
        // top of T_2: m_ij = sum_k n_ik n_kj with n_11 = n_22 = n_21 = 1
        // gives dim = 1 + 2 + 1 = 4
        let a = t_n(2, q()).unwrap();
        let top = top_subalgebra(&a).unwrap();
        let mut chain = TensorChain::new(top).unwrap();
        assert_eq!(chain.dim_c_n(2).unwrap(), 4);

        // arrow subalgebra of T_n: dim(A (x)_B A) = dim A + n(n-1)
        for n in 2..=3 {
            let a = t_n(n, q()).unwrap();
            let arrow = arrow_subalgebra(&a).unwrap();
            let mut chain = TensorChain::new(arrow).unwrap();
            assert_eq!(
                chain.dim_c_n(2).unwrap(),
                a.dim() + n * (n - 1),
                "arrow in T_{n}"
            );
        }
    }

    #[test]
    fn chain_level_one_is_the_regular_bimodule() {
        let a = t_n(3, q()).unwrap();
        let top = top_subalgebra(&a).unwrap();
        let mut chain = TensorChain::new(top).unwrap();
        assert_eq!(chain.c_n(1).unwrap(), &Bimodule::regular(&a));
        assert_eq!(chain.dim_c_n(0).unwrap(), 3);
    }

    #[test]
    fn c2_of_top_t3_matches_mij_recursion() {
        // oracle: m_ij = sum over i >= k >= j of n_ik n_kj, all n_ij = 1
        let quiver = crate::quiver::linear_quiver(3).unwrap();
        let n = quiver.path_counts().unwrap();
        let mut expected = 0usize;
        for i in 0..3 {
            for j in 0..3 {
                let mut m = 0;
                for k in 0..3 {
                    m += n[i][k] * n[k][j];
                }
                expected += m;
            }
        }
        assert_eq!(expected, 10);
        let a = t_n(3, q()).unwrap();
        let top = top_subalgebra(&a).unwrap();
        let mut chain = TensorChain::new(top).unwrap();
        assert_eq!(chain.dim_c_n(2).unwrap(), expected);
    }

    #[test]
    fn c3_of_arrow_matches_closed_form() {
        // C_3 for the arrow subalgebra of T_n has dim = dim A + n(n^2 - 1)
        for n in 2..=3 {
            let a = t_n(n, q()).unwrap();
            let arrow = arrow_subalgebra(&a).unwrap();
            let mut chain = TensorChain::new(arrow).unwrap();
            assert_eq!(chain.dim_c_n(3).unwrap(), a.dim() + n * (n * n - 1));
        }
    }

    #[test]
    fn c0_requires_bb_structure() {
        let a = t_n(2, q()).unwrap();
        let top = top_subalgebra(&a).unwrap();
        let mut chain = TensorChain::new(top).unwrap();
        assert!(chain.c_n(0).is_err());
        assert!(chain.c_n_as(0, Pair::AA).is_err());
        assert_eq!(chain.c_n_as(0, Pair::BB).unwrap().dim(), 2);
    }

    #[test]
    fn direct_sum_blocks() {
        let a = t_n(2, q()).unwrap();
        let m = Bimodule::regular(&a);
        let single = Bimodule::direct_sum(std::slice::from_ref(&m)).unwrap();
        assert_eq!(single, m);
        let double = m.multiple(2).unwrap();
        assert_eq!(double.dim(), 6);
        let k12 = crate::families::simple_bimodule(&a, 0, 1).unwrap();
        let k21 = crate::families::simple_bimodule(&a, 1, 0).unwrap();
        let s = Bimodule::direct_sum(&[k12, k21]).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn corner_with_units_is_everything() {
        let a = t_n(2, q()).unwrap();
        let m = Bimodule::regular(&a);
        let c = m.corner(a.unit(), a.unit()).unwrap();
        assert_eq!(c.dim(), m.dim());
    }

    #[test]
    fn sink_corner_of_tensor_powers_vanishes() {
        // eps_1 C_n eps_2 = 0 in a triangular algebra (no paths 1 -> 2)
        let a = t_n(2, q()).unwrap();
        let idems: Vec<_> = a.vertex_idempotents().unwrap().to_vec();
        let top = top_subalgebra(&a).unwrap();
        let mut chain = TensorChain::new(top).unwrap();
        for n in 1..=3 {
            let c = chain.c_n(n).unwrap();
            assert_eq!(c.corner(&idems[0], &idems[1]).unwrap().dim(), 0, "n={n}");
            assert_eq!(
                c.corner(&idems[0], &idems[0]).unwrap().dim(),
                1,
                "sink diagonal corner, n={n}"
            );
        }
    }

    #[test]
    fn corner_rejects_non_idempotents() {
        let a = t_n(2, q()).unwrap();
        let m = Bimodule::regular(&a);
        let f = q();
        let arrow = crate::exactlin::sv_unit(&f, a.label_index("a_2_1").unwrap());
        assert!(m.corner(&arrow, a.unit()).is_err());
    }

    #[test]
    fn tensor_dims_are_bounded_by_products() {
        let a = t_n(3, q()).unwrap();
        let arrow = arrow_subalgebra(&a).unwrap();
        let mut chain = TensorChain::new(arrow).unwrap();
        let mut prev = chain.dim_c_n(1).unwrap();
        assert_eq!(prev, a.dim());
        for n in 2..=4 {
            let d = chain.dim_c_n(n).unwrap();
            assert!(d <= prev * a.dim());
            prev = d;
        }
    }

    #[test]
    fn product_tensor_powers_split_along_central_idempotents() {
        // for A = R x S with B = R' x S', the tensor powers decompose as
        // C_n(A,B) = C_n(R,R') (+) C_n(S,S'); the central block idempotents
        // cut out exactly the component chains and the cross corners vanish
        use crate::algebra::product_embedding;
        use crate::families::{arrow_subalgebra, t_n, top_subalgebra};
        let t2 = t_n(2, q()).unwrap();
        let t3 = t_n(3, q()).unwrap();
        let r = top_subalgebra(&t2).unwrap();
        let s = arrow_subalgebra(&t3).unwrap();
        let (emb, ambient, _sub) = product_embedding(&r, &s).unwrap();
        let mut chain = TensorChain::new(emb).unwrap();
        let mut chain_r = TensorChain::new(r).unwrap();
        let mut chain_s = TensorChain::new(s).unwrap();
        for n in 1..=3 {
            let c = chain.c_n(n).unwrap().clone();
            let dim_r = chain_r.dim_c_n(n).unwrap();
            let dim_s = chain_s.dim_c_n(n).unwrap();
            assert_eq!(c.dim(), dim_r + dim_s, "n={n}");
            let c11 = c.corner(&ambient.left_unit, &ambient.left_unit).unwrap();
            let c22 = c.corner(&ambient.right_unit, &ambient.right_unit).unwrap();
            let c12 = c.corner(&ambient.left_unit, &ambient.right_unit).unwrap();
            let c21 = c.corner(&ambient.right_unit, &ambient.left_unit).unwrap();
            assert_eq!(c11.dim(), dim_r, "n={n}");
            assert_eq!(c22.dim(), dim_s, "n={n}");
            assert_eq!(c12.dim(), 0, "n={n}");
            assert_eq!(c21.dim(), 0, "n={n}");
        }
    }

    #[test]
    fn projection_section_retraction() {
        let a = t_n(3, q()).unwrap();
        let arrow = arrow_subalgebra(&a).unwrap();
        let mut chain = TensorChain::new(arrow).unwrap();
        for n in 2..=3 {
            let dim = chain.dim_c_n(n).unwrap();
            let p = chain.projection(n).unwrap().clone();
            let s = chain.section(n).unwrap().clone();
            assert_eq!(p.matmul(&s).unwrap(), Mat::identity(q(), dim));
        }
    }
}
