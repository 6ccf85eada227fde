//! Finite-dimensional associative unital algebras given by structure
//! constants, together with the constructions the depth engine needs:
//! path algebras, subalgebra closures, quotients by ideals, direct
//! products, generalized triangular matrix rings, radicals and the
//! locality test.
//!
//! Every constructor validates the full algebra axioms (associativity on
//! all basis triples, two-sided unit, idempotent axioms when vertex
//! idempotents are present), so a value of type [`Algebra`] is always a
//! genuine algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::exactlin::{
    in_span, sv_add_scaled, sv_collect, sv_get, sv_unit, Mat, RowSpan, SparseVec,
};
use crate::field::Field;
use crate::quiver::Quiver;

pub type ArcAlgebra<F> = Arc<Algebra<F>>;

#[derive(Clone, Debug, PartialEq)]
pub struct Algebra<F: Field> {
    field: F,
    dim: usize,
    labels: Vec<String>,
    /// `mult[i][j]` = coordinates of the product `e_i * e_j`.
    mult: Vec<Vec<SparseVec<F::Elem>>>,
    unit: SparseVec<F::Elem>,
    /// Complete set of primitive orthogonal idempotents, when the algebra
    /// comes from a quiver (or a quotient/product of such).
    vertex_idempotents: Option<Vec<SparseVec<F::Elem>>>,
    /// Path length of each basis element, when the basis is (the image of)
    /// a path basis.
    grading: Option<Vec<usize>>,
}

impl<F: Field> Algebra<F> {
    /// Builds and fully validates an algebra.
    pub fn new(
        field: F,
        labels: Vec<String>,
        mult: Vec<Vec<SparseVec<F::Elem>>>,
        unit: SparseVec<F::Elem>,
        vertex_idempotents: Option<Vec<SparseVec<F::Elem>>>,
        grading: Option<Vec<usize>>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::algebra("unital algebras have dimension >= 1"));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != dim {
                return Err(Error::algebra("duplicate basis labels"));
            }
        }
        if mult.len() != dim || mult.iter().any(|r| r.len() != dim) {
            return Err(Error::algebra("structure constant table has wrong shape"));
        }
        let check_vec = |v: &SparseVec<F::Elem>, what: &str| -> Result<()> {
            let mut last = None;
            for (k, c) in v {
                if *k >= dim {
                    return Err(Error::algebra(format!("{what}: index out of range")));
                }
                if Some(*k) <= last {
                    return Err(Error::algebra(format!("{what}: unsorted sparse vector")));
                }
                if field.is_zero(c) {
                    return Err(Error::algebra(format!("{what}: stored zero")));
                }
                last = Some(*k);
            }
            Ok(())
        };
        for (i, row) in mult.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                check_vec(v, &format!("product {i}*{j}"))?;
            }
        }
        check_vec(&unit, "unit")?;
        if let Some(g) = &grading {
            if g.len() != dim {
                return Err(Error::algebra("grading has wrong length"));
            }
        }
        let alg = Algebra {
            field,
            dim,
            labels,
            mult,
            unit,
            vertex_idempotents: None,
            grading,
        };
        alg.check_associativity()?;
        alg.check_unit()?;
        match vertex_idempotents {
            Some(idems) => alg.with_vertex_idempotents(idems),
            None => Ok(alg),
        }
    }

    /// Attaches a complete set of orthogonal idempotents after validating
    /// the idempotent axioms against this algebra's multiplication.
    pub fn with_vertex_idempotents(mut self, idems: Vec<SparseVec<F::Elem>>) -> Result<Self> {
        let f = &self.field;
        if idems.is_empty() {
            return Err(Error::algebra("empty idempotent list"));
        }
        let mut sum: SparseVec<F::Elem> = Vec::new();
        for (a, va) in idems.iter().enumerate() {
            if va.is_empty() {
                return Err(Error::algebra(format!("idempotent {a} is zero")));
            }
            if self.mul_vec(va, va) != *va {
                return Err(Error::NotIdempotent(format!("vertex idempotent {a}")));
            }
            for (b, vb) in idems.iter().enumerate() {
                if a != b && !self.mul_vec(va, vb).is_empty() {
                    return Err(Error::algebra(format!(
                        "idempotents {a} and {b} are not orthogonal"
                    )));
                }
            }
            sum = sv_add_scaled(f, &sum, va, &f.one());
        }
        if sum != self.unit {
            return Err(Error::algebra("idempotents do not sum to the unit"));
        }
        self.vertex_idempotents = Some(idems);
        Ok(self)
    }

    fn check_associativity(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = &self.mult[i][j];
                for k in 0..self.dim {
                    let left = self.mul_vec(ij, &sv_unit(&self.field, k));
                    let right = self.mul_vec(&sv_unit(&self.field, i), &self.mult[j][k]);
                    if left != right {
                        return Err(Error::algebra(format!(
                            "associativity fails on basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        for k in 0..self.dim {
            let e = sv_unit(&self.field, k);
            if self.mul_vec(&self.unit, &e) != e || self.mul_vec(&e, &self.unit) != e {
                return Err(Error::algebra(format!("unit fails on basis element {k}")));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> &SparseVec<F::Elem> {
        &self.unit
    }

    pub fn vertex_idempotents(&self) -> Option<&[SparseVec<F::Elem>]> {
        self.vertex_idempotents.as_deref()
    }

    pub fn grading(&self) -> Option<&[usize]> {
        self.grading.as_deref()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec<F::Elem> {
        &self.mult[i][j]
    }

    /// Product of two elements in basis coordinates.
    pub fn mul_vec(&self, x: &[(usize, F::Elem)], y: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut acc: SparseVec<F::Elem> = Vec::new();
        for (i, xi) in x {
            for (j, yj) in y {
                let c = f.mul(xi, yj);
                acc = sv_add_scaled(f, &acc, &self.mult[*i][*j], &c);
            }
        }
        acc
    }

    pub fn is_idempotent(&self, v: &[(usize, F::Elem)]) -> bool {
        self.mul_vec(v, v) == v.to_vec()
    }

    /// Matrix of left multiplication by `x` (columns are `x * e_j`).
    pub fn left_mult_mat(&self, x: &[(usize, F::Elem)]) -> Mat<F> {
        let f = &self.field;
        let mut rows: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.dim];
        for j in 0..self.dim {
            let col = self.mul_vec(x, &sv_unit(f, j));
            for (k, c) in col {
                rows[k].push((j, c));
            }
        }
        Mat::from_rows(f.clone(), self.dim, rows).expect("constructed in bounds")
    }

    /// Matrix of right multiplication by `x` (columns are `e_j * x`).
    pub fn right_mult_mat(&self, x: &[(usize, F::Elem)]) -> Mat<F> {
        let f = &self.field;
        let mut rows: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.dim];
        for j in 0..self.dim {
            let col = self.mul_vec(&sv_unit(f, j), x);
            for (k, c) in col {
                rows[k].push((j, c));
            }
        }
        Mat::from_rows(f.clone(), self.dim, rows).expect("constructed in bounds")
    }

    /// A generating set for intertwiner systems: vertex idempotents plus
    /// arrows when the path grading is available, the full basis otherwise.
    /// Correct because bimodule actions are multiplicative, so constraints
    /// from a generating set imply constraints from the whole algebra.
    pub fn generating_set(&self) -> Vec<SparseVec<F::Elem>> {
        match (&self.vertex_idempotents, &self.grading) {
            (Some(idems), Some(grading)) => {
                let mut gens = idems.clone();
                gens.extend(
                    (0..self.dim)
                        .filter(|&k| grading[k] == 1)
                        .map(|k| sv_unit(&self.field, k)),
                );
                gens
            }
            _ => (0..self.dim).map(|k| sv_unit(&self.field, k)).collect(),
        }
    }

    /// Versioned JSON form (exact scalars rendered as strings).
    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let sv = |v: &SparseVec<F::Elem>| -> Value {
            Value::Array(v.iter().map(|(k, c)| json!([k, f.render(c)])).collect())
        };
        let mut mult = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in &self.mult[i][j] {
                    mult.push(json!([i, j, k, f.render(c)]));
                }
            }
        }
        json!({
            "version": 1,
            "field": f.spec().to_string(),
            "dim": self.dim,
            "labels": self.labels,
            "mult": mult,
            "unit": sv(&self.unit),
            "vertex_idempotents": self
                .vertex_idempotents
                .as_ref()
                .map(|idems| Value::Array(idems.iter().map(&sv).collect()))
                .unwrap_or(Value::Null),
            "grading": self.grading.clone().map(Value::from).unwrap_or(Value::Null),
        })
    }

    pub fn from_json(field: F, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::invalid("algebra json: not an object"))?;
        let version = obj.get("version").and_then(Value::as_u64);
        if version != Some(1) {
            return Err(Error::invalid("algebra json: unsupported version"));
        }
        let spec = obj
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::invalid("algebra json: missing field"))?;
        if spec != field.spec().to_string() {
            return Err(Error::field(format!(
                "algebra was serialized over '{spec}', not '{}'",
                field.spec()
            )));
        }
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invalid("algebra json: missing dim"))? as usize;
        let labels: Vec<String> = obj
            .get("labels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("algebra json: missing labels"))?
            .iter()
            .map(|l| l.as_str().map(str::to_string))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::invalid("algebra json: bad labels"))?;
        let parse_sv = |v: &Value| -> Result<SparseVec<F::Elem>> {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::invalid("algebra json: bad sparse vector"))?;
            let mut out = Vec::new();
            for pair in arr {
                let p = pair
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::invalid("algebra json: bad sparse entry"))?;
                let k = p[0]
                    .as_u64()
                    .ok_or_else(|| Error::invalid("algebra json: bad index"))?
                    as usize;
                let c = field.parse(
                    p[1].as_str()
                        .ok_or_else(|| Error::invalid("algebra json: bad scalar"))?,
                )?;
                out.push((k, c));
            }
            Ok(sv_collect(&field, out))
        };
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        {
            let entries = obj
                .get("mult")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::invalid("algebra json: missing mult"))?;
            let mut acc: BTreeMap<(usize, usize), Vec<(usize, F::Elem)>> = BTreeMap::new();
            for e in entries {
                let q = e
                    .as_array()
                    .filter(|q| q.len() == 4)
                    .ok_or_else(|| Error::invalid("algebra json: bad mult entry"))?;
                let idx = |n: usize| -> Result<usize> {
                    q[n].as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::invalid("algebra json: bad mult index"))
                };
                let (i, j, k) = (idx(0)?, idx(1)?, idx(2)?);
                let c = field.parse(
                    q[3].as_str()
                        .ok_or_else(|| Error::invalid("algebra json: bad mult scalar"))?,
                )?;
                acc.entry((i, j)).or_default().push((k, c));
            }
            for ((i, j), entries) in acc {
                if i >= dim || j >= dim {
                    return Err(Error::invalid("algebra json: mult index out of range"));
                }
                mult[i][j] = sv_collect(&field, entries);
            }
        }
        let unit = parse_sv(
            obj.get("unit")
                .ok_or_else(|| Error::invalid("algebra json: missing unit"))?,
        )?;
        let vertex_idempotents = match obj.get("vertex_idempotents") {
            None | Some(Value::Null) => None,
            Some(Value::Array(arr)) => Some(arr.iter().map(parse_sv).collect::<Result<Vec<_>>>()?),
            Some(_) => return Err(Error::invalid("algebra json: bad idempotents")),
        };
        let grading = match obj.get("grading") {
            None | Some(Value::Null) => None,
            Some(Value::Array(arr)) => Some(
                arr.iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|g| g as usize)
                            .ok_or_else(|| Error::invalid("algebra json: bad grading"))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            Some(_) => return Err(Error::invalid("algebra json: bad grading")),
        };
        Algebra::new(field, labels, mult, unit, vertex_idempotents, grading)
    }
}

/// The ground field viewed as a one-dimensional algebra (the path algebra
/// of a single vertex).
pub fn one_dim<F: Field>(field: F) -> ArcAlgebra<F> {
    let unit = sv_unit(&field, 0);
    Arc::new(
        Algebra::new(
            field,
            vec!["e_1".into()],
            vec![vec![unit.clone()]],
            unit.clone(),
            Some(vec![unit]),
            Some(vec![0]),
        )
        .expect("one-dimensional algebra is valid"),
    )
}

/// Path algebra of an acyclic quiver: basis all paths, product given by
/// concatenation (zero when endpoints do not match).
pub fn path_algebra<F: Field>(q: &Quiver, field: F) -> Result<ArcAlgebra<F>> {
    let paths = q.paths()?; // rejects cyclic quivers
    let dim = paths.len();
    let labels: Vec<String> = paths.iter().map(|p| p.label(q)).collect();
    let mut index: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for (k, p) in paths.iter().enumerate() {
        index.insert((p.source, p.arrows.clone()), k);
    }
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for (i, p) in paths.iter().enumerate() {
        for (j, r) in paths.iter().enumerate() {
            if p.target == r.source {
                let mut arrows = p.arrows.clone();
                arrows.extend_from_slice(&r.arrows);
                let k = *index
                    .get(&(p.source, arrows))
                    .expect("concatenation of paths is a path");
                mult[i][j] = sv_unit(&field, k);
            }
        }
    }
    let stationary: Vec<usize> = (0..dim).filter(|&k| paths[k].is_empty()).collect();
    let unit = sv_collect(&field, stationary.iter().map(|&k| (k, field.one())));
    let idems = stationary.iter().map(|&k| sv_unit(&field, k)).collect();
    let grading = paths.iter().map(|p| p.len()).collect();
    Ok(Arc::new(Algebra::new(
        field,
        labels,
        mult,
        unit,
        Some(idems),
        Some(grading),
    )?))
}

/// A subalgebra `B ⊆ A` presented by an inclusion matrix with closure
/// certificates (full column rank, unit preserved, image closed under
/// multiplication), all validated on construction.
#[derive(Clone, Debug)]
pub struct SubalgebraEmbedding<F: Field> {
    ambient: ArcAlgebra<F>,
    sub: ArcAlgebra<F>,
    /// ambient.dim × sub.dim; column c is the ambient vector of sub basis c.
    inclusion: Mat<F>,
}

impl<F: Field> SubalgebraEmbedding<F> {
    pub fn new(ambient: ArcAlgebra<F>, sub: ArcAlgebra<F>, inclusion: Mat<F>) -> Result<Self> {
        if inclusion.n_rows() != ambient.dim() || inclusion.n_cols() != sub.dim() {
            return Err(Error::dim("inclusion matrix has wrong shape"));
        }
        if inclusion.rank() != sub.dim() {
            return Err(Error::algebra("inclusion does not have full column rank"));
        }
        let emb = SubalgebraEmbedding {
            ambient,
            sub,
            inclusion,
        };
        if emb.include(emb.sub.unit()) != *emb.ambient.unit() {
            return Err(Error::algebra("inclusion does not preserve the unit"));
        }
        let f = emb.sub.field();
        for i in 0..emb.sub.dim() {
            for j in 0..emb.sub.dim() {
                let prod_in_sub = emb.include(emb.sub.basis_product(i, j));
                let prod_in_ambient = emb
                    .ambient
                    .mul_vec(&emb.include(&sv_unit(f, i)), &emb.include(&sv_unit(f, j)));
                if prod_in_sub != prod_in_ambient {
                    return Err(Error::algebra(format!(
                        "inclusion does not intertwine multiplication at ({i},{j})"
                    )));
                }
            }
        }
        Ok(emb)
    }

    pub fn ambient(&self) -> &ArcAlgebra<F> {
        &self.ambient
    }

    pub fn sub(&self) -> &ArcAlgebra<F> {
        &self.sub
    }

    pub fn inclusion(&self) -> &Mat<F> {
        &self.inclusion
    }

    /// Maps sub coordinates to ambient coordinates.
    pub fn include(&self, v: &[(usize, <F as Field>::Elem)]) -> SparseVec<F::Elem> {
        self.inclusion.apply(v)
    }

    /// The identity embedding `A ⊆ A`.
    pub fn identity(a: &ArcAlgebra<F>) -> Self {
        SubalgebraEmbedding {
            ambient: a.clone(),
            sub: a.clone(),
            inclusion: Mat::identity(a.field().clone(), a.dim()),
        }
    }

    /// Image of the sub basis as ambient vectors.
    pub fn image_basis(&self) -> Vec<SparseVec<F::Elem>> {
        (0..self.sub.dim())
            .map(|c| self.include(&sv_unit(self.sub.field(), c)))
            .collect()
    }
}

/// Smallest unital subalgebra of `ambient` containing `generators`, with a
/// canonical (RREF) basis.
pub fn subalgebra_closure<F: Field>(
    ambient: &ArcAlgebra<F>,
    generators: &[SparseVec<F::Elem>],
) -> Result<SubalgebraEmbedding<F>> {
    let f = ambient.field().clone();
    let mut span = RowSpan::new(f.clone(), ambient.dim());
    span.insert(ambient.unit());
    for g in generators {
        for (k, _) in g {
            if *k >= ambient.dim() {
                return Err(Error::dim("generator index out of range"));
            }
        }
        span.insert(g);
    }
    // close under products
    loop {
        let basis = span.basis().to_vec();
        let mut grew = false;
        for x in &basis {
            for y in &basis {
                let p = ambient.mul_vec(x, y);
                if span.insert(&p) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let basis = span.basis().to_vec();
    let pivots = span.pivots().to_vec();
    let sub_dim = basis.len();
    // Coordinates in the canonical basis are read off the pivot columns:
    // each basis row has 1 at its own pivot and 0 at the others.
    let coords = |v: &SparseVec<F::Elem>| -> Result<SparseVec<F::Elem>> {
        if !span.contains(v) {
            return Err(Error::algebra("closure is not multiplicatively closed"));
        }
        Ok(sv_collect(
            &f,
            pivots
                .iter()
                .enumerate()
                .filter_map(|(c, &p)| sv_get(v, p).map(|x| (c, x.clone()))),
        ))
    };
    let mut mult = vec![vec![Vec::new(); sub_dim]; sub_dim];
    for i in 0..sub_dim {
        for j in 0..sub_dim {
            mult[i][j] = coords(&ambient.mul_vec(&basis[i], &basis[j]))?;
        }
    }
    let unit = coords(ambient.unit())?;
    let labels = (1..=sub_dim).map(|k| format!("b_{k}")).collect();
    let sub = Arc::new(Algebra::new(f.clone(), labels, mult, unit, None, None)?);
    let mut inclusion = Mat::zero(f.clone(), ambient.dim(), sub_dim);
    for (c, b) in basis.iter().enumerate() {
        for (r, v) in b {
            inclusion.set(*r, c, v.clone());
        }
    }
    SubalgebraEmbedding::new(ambient.clone(), sub, inclusion)
}

/// A two-sided ideal of `ambient`, kept as a canonical (RREF) basis and
/// validated to be closed under multiplication by the ambient algebra.
#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    ambient: ArcAlgebra<F>,
    basis: Vec<SparseVec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Ideal<F> {
    pub fn new(ambient: ArcAlgebra<F>, vectors: &[SparseVec<F::Elem>]) -> Result<Self> {
        let f = ambient.field().clone();
        let mut span = RowSpan::new(f.clone(), ambient.dim());
        for v in vectors {
            span.insert(v);
        }
        for v in span.basis().to_vec() {
            for k in 0..ambient.dim() {
                let e = sv_unit(&f, k);
                if !span.contains(&ambient.mul_vec(&e, &v)) {
                    return Err(Error::NotAnIdeal(format!(
                        "not closed under left multiplication by basis element {k}"
                    )));
                }
                if !span.contains(&ambient.mul_vec(&v, &e)) {
                    return Err(Error::NotAnIdeal(format!(
                        "not closed under right multiplication by basis element {k}"
                    )));
                }
            }
        }
        Ok(Ideal {
            ambient,
            basis: span.basis().to_vec(),
            pivots: span.pivots().to_vec(),
        })
    }

    pub fn zero(ambient: ArcAlgebra<F>) -> Self {
        Ideal {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient(&self) -> &ArcAlgebra<F> {
        &self.ambient
    }

    pub fn basis(&self) -> &[SparseVec<F::Elem>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        let f = self.ambient.field();
        let mut cur = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            if let Some(c) = sv_get(&cur, p) {
                let c = f.neg(&c.clone());
                cur = sv_add_scaled(f, &cur, &self.basis[k], &c);
            }
        }
        cur.is_empty()
    }

    /// Nilpotency degree, or an error if the span does not vanish within
    /// `ambient.dim()` powers.
    pub fn nilpotency_degree(&self) -> Result<usize> {
        let f = self.ambient.field().clone();
        let mut current = self.basis.clone();
        let mut degree = 1usize;
        while !current.is_empty() {
            if degree > self.ambient.dim() {
                return Err(Error::algebra("ideal is not nilpotent"));
            }
            let mut next = RowSpan::new(f.clone(), self.ambient.dim());
            for x in &current {
                for y in &self.basis {
                    next.insert(&self.ambient.mul_vec(x, y));
                }
            }
            current = next.basis().to_vec();
            degree += 1;
        }
        Ok(degree)
    }
}

/// Quotient of an algebra by a two-sided ideal. The quotient basis is the
/// set of non-pivot coordinates of the ideal's RREF, so it consists of
/// images of original basis elements; grading and vertex idempotents are
/// carried along when they survive.
pub fn quotient<F: Field>(
    ambient: &ArcAlgebra<F>,
    ideal: &Ideal<F>,
) -> Result<(ArcAlgebra<F>, Mat<F>)> {
    if ideal.ambient().as_ref() != ambient.as_ref() {
        return Err(Error::algebra("ideal belongs to a different algebra"));
    }
    let f = ambient.field().clone();
    let dim = ambient.dim();
    let is_pivot = {
        let mut v = vec![false; dim];
        for &p in &ideal.pivots {
            v[p] = true;
        }
        v
    };
    let reps: Vec<usize> = (0..dim).filter(|&k| !is_pivot[k]).collect();
    let qdim = reps.len();
    if qdim == 0 {
        return Err(Error::algebra(
            "quotient by the whole algebra is not unital",
        ));
    }
    let rep_pos: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(c, &k)| (k, c)).collect();
    // reduce mod the ideal, then reindex the surviving coordinates
    let project = |v: &SparseVec<F::Elem>| -> SparseVec<F::Elem> {
        let mut cur = v.clone();
        for (k, &p) in ideal.pivots.iter().enumerate() {
            if let Some(c) = sv_get(&cur, p) {
                let c = f.neg(&c.clone());
                cur = sv_add_scaled(&f, &cur, &ideal.basis[k], &c);
            }
        }
        cur.into_iter().map(|(k, c)| (rep_pos[&k], c)).collect()
    };
    let mut mult = vec![vec![Vec::new(); qdim]; qdim];
    for (ci, &ri) in reps.iter().enumerate() {
        for (cj, &rj) in reps.iter().enumerate() {
            mult[ci][cj] = project(ambient.basis_product(ri, rj));
        }
    }
    let unit = project(ambient.unit());
    let labels: Vec<String> = reps
        .iter()
        .map(|&k| format!("{}~", ambient.labels()[k]))
        .collect();
    let grading = ambient
        .grading()
        .map(|g| reps.iter().map(|&k| g[k]).collect::<Vec<_>>());
    let alg = Algebra::new(f.clone(), labels, mult, unit, None, grading)?;
    // idempotents survive when their images still satisfy the axioms
    let alg = match ambient.vertex_idempotents() {
        Some(idems) => {
            let images: Vec<_> = idems.iter().map(&project).collect();
            match alg.clone().with_vertex_idempotents(images) {
                Ok(with) => with,
                Err(_) => alg,
            }
        }
        None => alg,
    };
    let alg = Arc::new(alg);
    let mut projection = Mat::zero(f.clone(), qdim, dim);
    for k in 0..dim {
        for (r, c) in project(&sv_unit(&f, k)) {
            projection.set(r, k, c);
        }
    }
    // surjective algebra map: multiplicative on all basis pairs
    for i in 0..dim {
        for j in 0..dim {
            let lhs = project(ambient.basis_product(i, j));
            let rhs = alg.mul_vec(
                &projection.apply(&sv_unit(&f, i)),
                &projection.apply(&sv_unit(&f, j)),
            );
            if lhs != rhs {
                return Err(Error::algebra(format!(
                    "projection is not multiplicative at ({i},{j})"
                )));
            }
        }
    }
    Ok((alg, projection))
}

/// Componentwise direct product, with the two central block idempotents.
pub struct DirectProduct<F: Field> {
    pub algebra: ArcAlgebra<F>,
    /// (1, 0)
    pub left_unit: SparseVec<F::Elem>,
    /// (0, 1)
    pub right_unit: SparseVec<F::Elem>,
}

pub fn direct_product<F: Field>(
    a1: &ArcAlgebra<F>,
    a2: &ArcAlgebra<F>,
) -> Result<DirectProduct<F>> {
    if a1.field() != a2.field() {
        return Err(Error::field(
            "direct product requires the same field".to_string(),
        ));
    }
    let f = a1.field().clone();
    let (d1, d2) = (a1.dim(), a2.dim());
    let dim = d1 + d2;
    let shift = |v: &SparseVec<F::Elem>, by: usize| -> SparseVec<F::Elem> {
        v.iter().map(|(k, c)| (k + by, c.clone())).collect()
    };
    let mut labels: Vec<String> = a1.labels().iter().map(|l| format!("1:{l}")).collect();
    labels.extend(a2.labels().iter().map(|l| format!("2:{l}")));
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for i in 0..d1 {
        for j in 0..d1 {
            mult[i][j] = a1.basis_product(i, j).clone();
        }
    }
    for i in 0..d2 {
        for j in 0..d2 {
            mult[d1 + i][d1 + j] = shift(a2.basis_product(i, j), d1);
        }
    }
    let left_unit = a1.unit().clone();
    let right_unit = shift(a2.unit(), d1);
    let unit = sv_add_scaled(&f, &left_unit, &right_unit, &f.one());
    let idems = match (a1.vertex_idempotents(), a2.vertex_idempotents()) {
        (Some(i1), Some(i2)) => {
            let mut v: Vec<SparseVec<F::Elem>> = i1.to_vec();
            v.extend(i2.iter().map(|e| shift(e, d1)));
            Some(v)
        }
        _ => None,
    };
    let grading = match (a1.grading(), a2.grading()) {
        (Some(g1), Some(g2)) => {
            let mut g = g1.to_vec();
            g.extend_from_slice(g2);
            Some(g)
        }
        _ => None,
    };
    let algebra = Arc::new(Algebra::new(f, labels, mult, unit, idems, grading)?);
    Ok(DirectProduct {
        algebra,
        left_unit,
        right_unit,
    })
}

/// Block-diagonal embedding `R' × S' ⊆ R × S` from two embeddings.
pub fn product_embedding<F: Field>(
    e1: &SubalgebraEmbedding<F>,
    e2: &SubalgebraEmbedding<F>,
) -> Result<(SubalgebraEmbedding<F>, DirectProduct<F>, DirectProduct<F>)> {
    let ambient = direct_product(e1.ambient(), e2.ambient())?;
    let sub = direct_product(e1.sub(), e2.sub())?;
    let f = ambient.algebra.field().clone();
    let (ar, sc) = (ambient.algebra.dim(), sub.algebra.dim());
    let mut inclusion = Mat::zero(f, ar, sc);
    let (d1a, d1s) = (e1.ambient().dim(), e1.sub().dim());
    for c in 0..d1s {
        for (r, v) in e1.inclusion().row_col(c) {
            inclusion.set(r, c, v);
        }
    }
    for c in 0..e2.sub().dim() {
        for (r, v) in e2.inclusion().row_col(c) {
            inclusion.set(r + d1a, c + d1s, v);
        }
    }
    let emb = SubalgebraEmbedding::new(ambient.algebra.clone(), sub.algebra.clone(), inclusion)?;
    Ok((emb, ambient, sub))
}

/// The generalized triangular matrix ring `(R 0 / M S)` built from rings
/// `R`, `S` and an (S,R)-bimodule `M`, together with the corner
/// idempotents `e1 = (1_R, 0)` and `e2 = (0, 1_S)`.
pub struct TriangularRing<F: Field> {
    pub algebra: ArcAlgebra<F>,
    pub e1: SparseVec<F::Elem>,
    pub e2: SparseVec<F::Elem>,
}

pub fn triangular_ring<F: Field>(
    r: &ArcAlgebra<F>,
    s: &ArcAlgebra<F>,
    m: &Bimodule<F>,
) -> Result<TriangularRing<F>> {
    if m.left_algebra().as_ref() != s.as_ref() || m.right_algebra().as_ref() != r.as_ref() {
        return Err(Error::algebra(
            "triangular ring needs an (S,R)-bimodule for its corner",
        ));
    }
    let f = r.field().clone();
    let (dr, dm, ds) = (r.dim(), m.dim(), s.dim());
    let dim = dr + dm + ds;
    let mut labels: Vec<String> = r.labels().iter().map(|l| format!("r:{l}")).collect();
    labels.extend((0..dm).map(|k| format!("m:{k}")));
    labels.extend(s.labels().iter().map(|l| format!("s:{l}")));
    let shift = |v: &SparseVec<F::Elem>, by: usize| -> SparseVec<F::Elem> {
        v.iter().map(|(k, c)| (k + by, c.clone())).collect()
    };
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dr {
        for j in 0..dr {
            mult[i][j] = r.basis_product(i, j).clone();
        }
    }
    for i in 0..ds {
        for j in 0..ds {
            mult[dr + dm + i][dr + dm + j] = shift(s.basis_product(i, j), dr + dm);
        }
    }
    // m_i * r_j: right action of R on M; s_i * m_j: left action of S on M
    for i in 0..dm {
        for j in 0..dr {
            let col = m.right_action(j).apply(&sv_unit(&f, i));
            mult[dr + i][j] = shift(&col, dr);
        }
    }
    for i in 0..ds {
        for j in 0..dm {
            let col = m.left_action(i).apply(&sv_unit(&f, j));
            mult[dr + dm + i][dr + j] = shift(&col, dr);
        }
    }
    let e1 = r.unit().clone();
    let e2 = shift(s.unit(), dr + dm);
    let unit = sv_add_scaled(&f, &e1, &e2, &f.one());
    let idems = match (r.vertex_idempotents(), s.vertex_idempotents()) {
        (Some(i1), Some(i2)) => {
            let mut v: Vec<SparseVec<F::Elem>> = i1.to_vec();
            v.extend(i2.iter().map(|e| shift(e, dr + dm)));
            Some(v)
        }
        _ => None,
    };
    let algebra = Arc::new(Algebra::new(f, labels, mult, unit, idems, None)?);
    Ok(TriangularRing { algebra, e1, e2 })
}

/// The arrow ideal `rad A = A_1 ⊕ A_2 ⊕ …`, read off the path grading.
pub fn graded_radical<F: Field>(a: &ArcAlgebra<F>) -> Result<Ideal<F>> {
    let grading = a
        .grading()
        .ok_or_else(|| Error::algebra("no path grading metadata; use dickson_radical instead"))?;
    let f = a.field();
    let vectors: Vec<SparseVec<F::Elem>> = (0..a.dim())
        .filter(|&k| grading[k] >= 1)
        .map(|k| sv_unit(f, k))
        .collect();
    Ideal::new(a.clone(), &vectors)
}

/// Jacobson radical over a characteristic-zero field, by the trace
/// criterion: `x ∈ rad A` iff `trace(L_{xy}) = 0` for all basis `y`.
pub fn dickson_radical<F: Field>(a: &ArcAlgebra<F>) -> Result<Ideal<F>> {
    if a.field().characteristic() != 0 {
        return Err(Error::CharZeroRequired(
            "the trace criterion for the radical is only valid in characteristic zero".into(),
        ));
    }
    let f = a.field().clone();
    let dim = a.dim();
    // traces[m] = trace of left multiplication by e_m
    let traces: Vec<F::Elem> = (0..dim)
        .map(|m| {
            let mut t = f.zero();
            for l in 0..dim {
                if let Some(c) = sv_get(a.basis_product(m, l), l) {
                    t = f.add(&t, c);
                }
            }
            t
        })
        .collect();
    // T[j][i] = trace(L_{e_i e_j}); radical = kernel of T
    let mut rows: Vec<SparseVec<F::Elem>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut row = Vec::new();
        for i in 0..dim {
            let mut t = f.zero();
            for (m, c) in a.basis_product(i, j) {
                t = f.add(&t, &f.mul(c, &traces[*m]));
            }
            if !f.is_zero(&t) {
                row.push((i, t));
            }
        }
        rows.push(row);
    }
    let t = Mat::from_rows(f, dim, rows)?;
    let ideal = Ideal::new(a.clone(), &t.kernel_basis())?;
    ideal.nilpotency_degree()?; // sanity: the radical is nilpotent
    Ok(ideal)
}

/// True iff `A / rad A` is one-dimensional (characteristic zero only).
pub fn is_local<F: Field>(a: &ArcAlgebra<F>) -> Result<bool> {
    let rad = dickson_radical(a)?;
    Ok(a.dim() - rad.dim() == 1)
}

impl<F: Field> Mat<F> {
    /// `(row, value)` pairs of one column. Helper for embedding assembly.
    pub fn row_col(&self, c: usize) -> Vec<(usize, F::Elem)> {
        let mut out = Vec::new();
        for i in 0..self.n_rows() {
            let v = self.get(i, c);
            if !self.field().is_zero(&v) {
                out.push((i, v));
            }
        }
        out
    }
}

/// Span of `{a*b : a in ambient basis, b in vectors}` (used by the
/// depth-two obstruction, which compares `A B_i^+` with `B_i^+ A`).
pub fn left_multiples_span<F: Field>(
    a: &ArcAlgebra<F>,
    vectors: &[SparseVec<F::Elem>],
) -> RowSpan<F> {
    let f = a.field().clone();
    let mut span = RowSpan::new(f.clone(), a.dim());
    for k in 0..a.dim() {
        let e = sv_unit(&f, k);
        for v in vectors {
            span.insert(&a.mul_vec(&e, v));
        }
    }
    span
}

pub fn right_multiples_span<F: Field>(
    a: &ArcAlgebra<F>,
    vectors: &[SparseVec<F::Elem>],
) -> RowSpan<F> {
    let f = a.field().clone();
    let mut span = RowSpan::new(f.clone(), a.dim());
    for k in 0..a.dim() {
        let e = sv_unit(&f, k);
        for v in vectors {
            span.insert(&a.mul_vec(v, &e));
        }
    }
    span
}

/// Membership of an ambient vector in the image of an embedding.
pub fn in_image<F: Field>(e: &SubalgebraEmbedding<F>, v: &[(usize, F::Elem)]) -> bool {
    in_span(e.ambient().field(), e.ambient().dim(), v, &e.image_basis())
}
