//! The named algebras and subalgebras: T_n, its diagonal D_n, the
//! constant-diagonal U_n, the Jordan subalgebra J_n, top and arrow
//! subalgebras of arbitrary acyclic quiver algebras, augmentations and the
//! one-dimensional simple bimodules they define.

use crate::algebra::{path_algebra, subalgebra_closure, ArcAlgebra, SubalgebraEmbedding};
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::exactlin::{sv_add_scaled, sv_collect, sv_get, sv_unit, Mat, SparseVec};
use crate::field::Field;
use crate::quiver::linear_quiver;

/// Path algebra of the linear quiver `n -> n-1 -> … -> 1`, isomorphic to
/// the lower triangular matrix algebra T_n(K). Basis paths correspond to
/// matrix units e_ij with i >= j.
pub fn t_n<F: Field>(n: usize, field: F) -> Result<ArcAlgebra<F>> {
    path_algebra(&linear_quiver(n)?, field)
}

/// Span of the vertex idempotents: the top subalgebra `B ≅ A / rad A`.
/// For T_n this is the diagonal subalgebra D_n.
pub fn top_subalgebra<F: Field>(a: &ArcAlgebra<F>) -> Result<SubalgebraEmbedding<F>> {
    let idems = a
        .vertex_idempotents()
        .ok_or_else(|| Error::algebra("top subalgebra needs vertex idempotents"))?;
    subalgebra_closure(a, idems)
}

/// `K·1 + rad A`: the primary arrow subalgebra, a local algebra. For T_n
/// this is the constant-diagonal algebra U_n.
pub fn arrow_subalgebra<F: Field>(a: &ArcAlgebra<F>) -> Result<SubalgebraEmbedding<F>> {
    let grading = a
        .grading()
        .ok_or_else(|| Error::algebra("arrow subalgebra needs the path grading"))?;
    let f = a.field();
    let mut gens: Vec<SparseVec<F::Elem>> = vec![a.unit().clone()];
    gens.extend(
        (0..a.dim())
            .filter(|&k| grading[k] >= 1)
            .map(|k| sv_unit(f, k)),
    );
    subalgebra_closure(a, &gens)
}

/// The Jordan subalgebra J_n of T_n: the unital closure of the full lower
/// shift (the sum of all arrows), isomorphic to K[x]/(x^n).
pub fn jordan_subalgebra<F: Field>(n: usize, field: F) -> Result<SubalgebraEmbedding<F>> {
    let a = t_n(n, field)?;
    let f = a.field();
    let grading = a.grading().expect("path algebra is graded");
    let shift = sv_collect(
        f,
        (0..a.dim())
            .filter(|&k| grading[k] == 1)
            .map(|k| (k, f.one())),
    );
    subalgebra_closure(&a, &[shift])
}

/// An algebra map to the ground field. For quiver algebras, `rho_i` reads
/// the diagonal coordinate at vertex i.
#[derive(Clone, Debug, PartialEq)]
pub struct Augmentation<F: Field> {
    /// Originating vertex (0-based) when the augmentation comes from a
    /// vertex idempotent.
    pub vertex: Option<usize>,
    /// Dense covector: value on each basis element.
    pub functional: Vec<F::Elem>,
}

impl<F: Field> Augmentation<F> {
    pub fn apply(&self, field: &F, v: &[(usize, F::Elem)]) -> F::Elem {
        let mut acc = field.zero();
        for (k, c) in v {
            acc = field.add(&acc, &field.mul(&self.functional[*k], c));
        }
        acc
    }

    /// Verifies multiplicativity and unitality on all basis pairs.
    pub fn validate(&self, a: &ArcAlgebra<F>) -> Result<()> {
        let f = a.field();
        if self.functional.len() != a.dim() {
            return Err(Error::dim("augmentation covector length mismatch"));
        }
        if self.apply(f, a.unit()) != f.one() {
            return Err(Error::algebra("augmentation is not unital"));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.apply(f, a.basis_product(i, j));
                let rhs = f.mul(&self.functional[i], &self.functional[j]);
                if lhs != rhs {
                    return Err(Error::algebra(format!(
                        "augmentation not multiplicative at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One augmentation per vertex idempotent: `rho_i(x)` is the scalar with
/// `eps_i · x · eps_i = rho_i(x) · eps_i`. Requires every corner
/// `eps_i A eps_i` to be one-dimensional, which holds for acyclic quiver
/// algebras, their quotients and products.
pub fn augmentations<F: Field>(a: &ArcAlgebra<F>) -> Result<Vec<Augmentation<F>>> {
    let idems = a
        .vertex_idempotents()
        .ok_or_else(|| Error::algebra("augmentations need vertex idempotents"))?;
    let f = a.field();
    let mut out = Vec::with_capacity(idems.len());
    for (i, eps) in idems.iter().enumerate() {
        let mut functional = Vec::with_capacity(a.dim());
        for k in 0..a.dim() {
            let corner = a.mul_vec(&a.mul_vec(eps, &sv_unit(f, k)), eps);
            if corner.is_empty() {
                functional.push(f.zero());
                continue;
            }
            // corner must be a scalar multiple of eps itself
            let (lead_idx, lead_val) = &corner[0];
            let eps_lead = sv_get(eps, *lead_idx).ok_or_else(|| {
                Error::algebra(format!("corner at vertex {i} is not one-dimensional"))
            })?;
            let lambda = f
                .div(lead_val, eps_lead)
                .expect("idempotent entries are nonzero");
            let expected: SparseVec<F::Elem> =
                eps.iter().map(|(k2, c)| (*k2, f.mul(c, &lambda))).collect();
            if expected != corner {
                return Err(Error::algebra(format!(
                    "corner at vertex {i} is not one-dimensional"
                )));
            }
            functional.push(lambda);
        }
        let aug = Augmentation {
            vertex: Some(i),
            functional,
        };
        aug.validate(a)?;
        out.push(aug);
    }
    Ok(out)
}

/// Pulls an ambient augmentation back along a subalgebra embedding.
pub fn pullback_augmentation<F: Field>(
    e: &SubalgebraEmbedding<F>,
    rho: &Augmentation<F>,
) -> Result<Augmentation<F>> {
    let f = e.sub().field();
    let functional = (0..e.sub().dim())
        .map(|c| rho.apply(f, &e.include(&sv_unit(f, c))))
        .collect();
    let aug = Augmentation {
        vertex: rho.vertex,
        functional,
    };
    aug.validate(e.sub())?;
    Ok(aug)
}

/// Basis of `B_i^+ = {b in B : rho(b) = 0}` as ambient vectors.
pub fn augmentation_ideal<F: Field>(
    e: &SubalgebraEmbedding<F>,
    rho: &Augmentation<F>,
) -> Result<Vec<SparseVec<F::Elem>>> {
    let f = e.sub().field();
    if rho.functional.len() != e.ambient().dim() {
        return Err(Error::dim(
            "augmentation belongs to a different algebra than the ambient",
        ));
    }
    // kernel of the 1 x dim_B covector rho ∘ inclusion
    let row: SparseVec<F::Elem> = sv_collect(
        f,
        (0..e.sub().dim()).map(|c| (c, rho.apply(f, &e.include(&sv_unit(f, c))))),
    );
    let m = Mat::from_rows(f.clone(), e.sub().dim(), vec![row])?;
    Ok(m.kernel_basis().iter().map(|v| e.include(v)).collect())
}

/// One-dimensional bimodule where the left algebra acts through `lrho` and
/// the right algebra through `rrho`.
pub fn simple_bimodule_from<F: Field>(
    left: &ArcAlgebra<F>,
    lrho: &Augmentation<F>,
    right: &ArcAlgebra<F>,
    rrho: &Augmentation<F>,
) -> Result<Bimodule<F>> {
    lrho.validate(left)?;
    rrho.validate(right)?;
    let f = left.field().clone();
    let scalar_mat = |c: &F::Elem| -> Mat<F> {
        let mut m = Mat::zero(f.clone(), 1, 1);
        m.set(0, 0, c.clone());
        m
    };
    let left_action = lrho.functional.iter().map(&scalar_mat).collect();
    let right_action = rrho.functional.iter().map(&scalar_mat).collect();
    Bimodule::new(left.clone(), right.clone(), 1, left_action, right_action)
}

/// The A-A-simple `K_ij`: `a · 1 · b = rho_i(a) rho_j(b) · 1`.
pub fn simple_bimodule<F: Field>(a: &ArcAlgebra<F>, i: usize, j: usize) -> Result<Bimodule<F>> {
    let augs = augmentations(a)?;
    if i >= augs.len() || j >= augs.len() {
        return Err(Error::invalid("vertex index out of range"));
    }
    simple_bimodule_from(a, &augs[i], a, &augs[j])
}

/// The unique augmentation of a local subalgebra such as the arrow
/// subalgebra: the pullback of any ambient augmentation (they all agree on
/// `K·1 + rad A`).
pub fn local_augmentation<F: Field>(e: &SubalgebraEmbedding<F>) -> Result<Augmentation<F>> {
    let ambient_augs = augmentations(e.ambient())?;
    let first = ambient_augs
        .first()
        .ok_or_else(|| Error::algebra("ambient algebra has no augmentations"))?;
    let mut pulled = pullback_augmentation(e, first)?;
    for other in &ambient_augs[1..] {
        let p = pullback_augmentation(e, other)?;
        if p.functional != pulled.functional {
            return Err(Error::algebra(
                "ambient augmentations do not agree on the subalgebra",
            ));
        }
    }
    pulled.vertex = None;
    Ok(pulled)
}

/// Sum of two sparse vectors; convenience for building generator lists.
pub fn add_vecs<F: Field>(
    f: &F,
    a: &[(usize, F::Elem)],
    b: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    sv_add_scaled(f, a, b, &f.one())
}

/// The diagonal embedding label set used by the CLI: `top` and `diagonal`
/// are synonyms (the top subalgebra of T_n is D_n).
pub fn diagonal_subalgebra<F: Field>(a: &ArcAlgebra<F>) -> Result<SubalgebraEmbedding<F>> {
    top_subalgebra(a)
}

pub use crate::algebra::one_dim;

/// Path algebra of the Kronecker quiver (two parallel arrows).
pub fn kronecker_algebra<F: Field>(field: F) -> Result<ArcAlgebra<F>> {
    path_algebra(&crate::quiver::kronecker_quiver(), field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_local;
    use crate::exactlin::{in_span, RowSpan};
    use crate::field::Rationals;

    fn q() -> Rationals {
        Rationals
    }

    #[test]
    fn t_n_dimensions() {
        assert_eq!(t_n(1, q()).unwrap().dim(), 1);
        assert_eq!(t_n(2, q()).unwrap().dim(), 3);
        assert_eq!(t_n(3, q()).unwrap().dim(), 6);
    }

    #[test]
    fn top_subalgebra_dims() {
        let one = t_n(1, q()).unwrap();
        assert_eq!(top_subalgebra(&one).unwrap().sub().dim(), 1);
        for n in 2..=4 {
            let a = t_n(n, q()).unwrap();
            assert_eq!(top_subalgebra(&a).unwrap().sub().dim(), n);
        }
        let kr = kronecker_algebra(q()).unwrap();
        assert_eq!(top_subalgebra(&kr).unwrap().sub().dim(), 2);
    }

    #[test]
    fn arrow_subalgebra_dims() {
        // dim U_n = n(n-1)/2 + 1
        for n in 1..=4 {
            let a = t_n(n, q()).unwrap();
            let e = arrow_subalgebra(&a).unwrap();
            assert_eq!(e.sub().dim(), n * (n - 1) / 2 + 1, "U_{n}");
            assert_eq!(e.sub().dim(), a.dim() - n + 1);
        }
        let kr = kronecker_algebra(q()).unwrap();
        assert_eq!(arrow_subalgebra(&kr).unwrap().sub().dim(), 3); // 1, al, be
    }

    #[test]
    fn arrow_subalgebras_are_local() {
        for n in 2..=4 {
            let a = t_n(n, q()).unwrap();
            let e = arrow_subalgebra(&a).unwrap();
            assert!(is_local(e.sub()).unwrap(), "U_{n}");
        }
    }

    #[test]
    fn jordan_equals_arrow_for_n_two() {
        // U_2(K) = J_2(K): same image inside T_2
        let a = t_n(2, q()).unwrap();
        let arrow = arrow_subalgebra(&a).unwrap();
        let jordan = jordan_subalgebra(2, q()).unwrap();
        let mut s1 = RowSpan::new(q(), a.dim());
        for v in arrow.image_basis() {
            s1.insert(&v);
        }
        let mut s2 = RowSpan::new(q(), a.dim());
        for v in jordan.image_basis() {
            s2.insert(&v);
        }
        assert!(s1.same_span(&s2));
    }

    #[test]
    fn jordan_subalgebra_shape() {
        let e = jordan_subalgebra(1, q()).unwrap();
        assert_eq!(e.sub().dim(), 1);
        for n in 2..=4 {
            let e = jordan_subalgebra(n, q()).unwrap();
            assert_eq!(e.sub().dim(), n, "J_{n}");
            assert!(is_local(e.sub()).unwrap());
            // the shift generates: shift^(n-1) != 0, shift^n = 0
            let f = q();
            let a = e.ambient();
            let grading = a.grading().unwrap();
            let shift = sv_collect(
                &f,
                (0..a.dim())
                    .filter(|&k| grading[k] == 1)
                    .map(|k| (k, f.one())),
            );
            let mut power = a.unit().clone();
            for _ in 0..(n - 1) {
                power = a.mul_vec(&power, &shift);
            }
            assert!(!power.is_empty(), "shift^(n-1) vanished for J_{n}");
            assert!(a.mul_vec(&power, &shift).is_empty(), "shift^n nonzero");
        }
    }

    #[test]
    fn augmentations_read_the_diagonal() {
        let f = q();
        let k = one_dim(f);
        let augs = augmentations(&k).unwrap();
        assert_eq!(augs.len(), 1);
        assert_eq!(augs[0].functional, vec![f.one()]);

        let t2 = t_n(2, q()).unwrap();
        let augs = augmentations(&t2).unwrap();
        assert_eq!(augs.len(), 2);
        for (i, aug) in augs.iter().enumerate() {
            for (j, idem) in t2.vertex_idempotents().unwrap().iter().enumerate() {
                let val = aug.apply(&f, idem);
                assert_eq!(val == f.one(), i == j);
            }
            let arrow = sv_unit(&f, t2.label_index("a_2_1").unwrap());
            assert!(f.is_zero(&aug.apply(&f, &arrow)));
        }

        let kr = kronecker_algebra(q()).unwrap();
        for aug in augmentations(&kr).unwrap() {
            for lbl in ["al", "be"] {
                let v = sv_unit(&f, kr.label_index(lbl).unwrap());
                assert!(f.is_zero(&aug.apply(&f, &v)));
            }
        }
    }

    #[test]
    fn augmentation_ideals() {
        let f = q();
        // B = K inside K: the ideal is zero
        let k = one_dim(q());
        let e = SubalgebraEmbedding::identity(&k);
        let augs = augmentations(&k).unwrap();
        assert!(augmentation_ideal(&e, &augs[0]).unwrap().is_empty());

        // B = D_2 in T_2 with rho_1: kernel is spanned by eps_2
        let t2 = t_n(2, q()).unwrap();
        let top = top_subalgebra(&t2).unwrap();
        let augs = augmentations(&t2).unwrap();
        let ideal = augmentation_ideal(&top, &augs[0]).unwrap();
        assert_eq!(ideal.len(), 1);
        let eps2 = sv_unit(&f, t2.label_index("e_2").unwrap());
        assert!(in_span(&f, t2.dim(), &eps2, &ideal));

        // B = U_2: the pullback augmentation kills exactly the arrow span
        let arrow_emb = arrow_subalgebra(&t2).unwrap();
        let eps = local_augmentation(&arrow_emb).unwrap();
        let lifted = Augmentation {
            vertex: None,
            functional: {
                // express as an ambient functional by extending along the
                // embedding: rho_1 restricted to B equals eps
                augs[0].functional.clone()
            },
        };
        let ideal = augmentation_ideal(&arrow_emb, &lifted).unwrap();
        assert_eq!(ideal.len(), 1);
        let arrow = sv_unit(&f, t2.label_index("a_2_1").unwrap());
        assert!(in_span(&f, t2.dim(), &arrow, &ideal));
        // and the local augmentation itself is the same functional on B
        for c in 0..arrow_emb.sub().dim() {
            let v = sv_unit(&f, c);
            assert_eq!(eps.apply(&f, &v), lifted.apply(&f, &arrow_emb.include(&v)));
        }
    }

    #[test]
    fn simple_bimodules() {
        let f = q();
        let k = one_dim(q());
        let reg = Bimodule::regular(&k);
        let s = simple_bimodule(&k, 0, 0).unwrap();
        assert_eq!(s, reg);

        let t2 = t_n(2, q()).unwrap();
        let k12 = simple_bimodule(&t2, 0, 1).unwrap();
        assert_eq!(k12.dim(), 1);
        let e1 = t2.label_index("e_1").unwrap();
        let e2 = t2.label_index("e_2").unwrap();
        assert_eq!(k12.left_action(e1).get(0, 0), f.one());
        assert!(f.is_zero(&k12.left_action(e2).get(0, 0)));
        assert_eq!(k12.right_action(e2).get(0, 0), f.one());

        // K_eps over U_2
        let arrow_emb = arrow_subalgebra(&t2).unwrap();
        let eps = local_augmentation(&arrow_emb).unwrap();
        let keps = simple_bimodule_from(arrow_emb.sub(), &eps, arrow_emb.sub(), &eps).unwrap();
        assert_eq!(keps.dim(), 1);
    }

    #[test]
    fn jordan_needs_linear_family_dimension() {
        // jordan_subalgebra always targets T_n; its ambient has the
        // triangular dimension
        let e = jordan_subalgebra(3, q()).unwrap();
        assert_eq!(e.ambient().dim(), 6);
    }
}
