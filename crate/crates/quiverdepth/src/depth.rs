//! The depth engine: evaluates the divisibility conditions
//! `C_{n+1} ∈ add(C_n)` in the four bimodule structures, derives minimum
//! depth, odd depth and H-depth, runs the augmentation-ideal depth-2
//! obstruction as a pre-filter, and checks quotient monotonicity.
//!
//! Depth bookkeeping: depth 1 is `C_1 ∈ add(C_0)` as B-B; depth 2n is the
//! A-B (right) or B-A (left) condition at level n; depth 2n+1 the B-B
//! condition; H-depth 2n-1 the A-A condition (checked in both directions,
//! since the universal splitting `C_n | C_{n+1}` is only exhibited as a
//! B-A-split). For the one-sided conditions only `C_{n+1} ∈ add(C_n)` is
//! tested; the other direction always holds.

use serde_json::{json, Value};

use crate::algebra::{
    left_multiples_span, quotient, right_multiples_span, subalgebra_closure, Ideal,
    SubalgebraEmbedding,
};
use crate::bimodule::{Pair, TensorChain};
use crate::error::{Error, Result};
use crate::exactlin::{sv_unit, SparseVec};
use crate::families::{augmentation_ideal, augmentations};
use crate::field::Field;
use crate::homdiv::{h_equivalent, in_add};
use std::collections::BTreeMap;

/// A resolved depth, or a certified lower bound when the cutoff was
/// reached without resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthValue {
    Resolved(u32),
    AtLeast(u32),
}

impl DepthValue {
    pub fn resolved(&self) -> Option<u32> {
        match self {
            DepthValue::Resolved(v) => Some(*v),
            DepthValue::AtLeast(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DepthValue::Resolved(v) => json!(v),
            DepthValue::AtLeast(v) => json!({ "at_least": v }),
        }
    }

    pub fn render(&self) -> String {
        match self {
            DepthValue::Resolved(v) => v.to_string(),
            DepthValue::AtLeast(v) => format!("at_least {v}"),
        }
    }
}

impl std::fmt::Display for DepthValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// The smallest odd number >= the depth: equal to it when odd, one more
/// when even; lower bounds round up to the next odd candidate.
pub fn odd_depth(min_depth: &DepthValue) -> DepthValue {
    match *min_depth {
        DepthValue::Resolved(v) => DepthValue::Resolved(if v % 2 == 1 { v } else { v + 1 }),
        DepthValue::AtLeast(k) => DepthValue::AtLeast(if k % 2 == 1 { k } else { k + 1 }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructionSide {
    /// `A B_i^+ ⊆ B_i^+ A` failed: no right depth 2 (A-B flag is false).
    Right,
    /// `B_i^+ A ⊆ A B_i^+` failed: no left depth 2 (B-A flag is false).
    Left,
}

#[derive(Clone, Debug)]
pub struct ObstructionWitness<F: Field> {
    /// 0-based vertex of the augmentation.
    pub vertex: usize,
    pub side: ObstructionSide,
    /// A vector in one span that is missing from the other.
    pub vector: SparseVec<F::Elem>,
}

/// Result of comparing `A B_i^+` with `B_i^+ A` for every augmentation.
/// Failure on a side disproves the corresponding depth-2 flag without any
/// tensor computation; success proves nothing.
#[derive(Clone, Debug)]
pub struct Depth2Obstruction<F: Field> {
    pub right_ok: bool,
    pub left_ok: bool,
    pub witnesses: Vec<ObstructionWitness<F>>,
}

pub fn depth2_obstruction<F: Field>(e: &SubalgebraEmbedding<F>) -> Result<Depth2Obstruction<F>> {
    let ambient = e.ambient();
    let augs = augmentations(ambient)?;
    let mut right_ok = true;
    let mut left_ok = true;
    let mut witnesses = Vec::new();
    for (i, rho) in augs.iter().enumerate() {
        let bplus = augmentation_ideal(e, rho)?;
        let ab = left_multiples_span(ambient, &bplus); // A B_i^+
        let ba = right_multiples_span(ambient, &bplus); // B_i^+ A
        if let Some(v) = ab.basis().iter().find(|v| !ba.contains(v)) {
            right_ok = false;
            witnesses.push(ObstructionWitness {
                vertex: i,
                side: ObstructionSide::Right,
                vector: v.clone(),
            });
        }
        if let Some(v) = ba.basis().iter().find(|v| !ab.contains(v)) {
            left_ok = false;
            witnesses.push(ObstructionWitness {
                vertex: i,
                side: ObstructionSide::Left,
                vector: v.clone(),
            });
        }
    }
    Ok(Depth2Obstruction {
        right_ok,
        left_ok,
        witnesses,
    })
}

/// Per-level divisibility flags; `None` means not computed (the engine
/// stops as soon as the questions asked of it are resolved).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LevelFlags {
    pub n: u32,
    pub aa: Option<bool>,
    pub ab: Option<bool>,
    pub ba: Option<bool>,
    pub bb: Option<bool>,
}

/// Full outcome of a depth computation, serializable to JSON/CSV/text.
#[derive(Clone, Debug)]
pub struct DepthReport {
    pub cutoff: u32,
    pub field: String,
    /// `C_1 ∈ add(C_0)` as B-B, the condition minimum depth 1 uses.
    pub depth1: bool,
    /// `C_0 ∈ add(C_1)`, computed only when `depth1` holds; if the two ever
    /// disagree the report flags it (no such example is known).
    pub depth1_reverse: Option<bool>,
    pub flags: Vec<LevelFlags>,
    pub min_depth: DepthValue,
    pub odd_depth: DepthValue,
    pub h_depth: DepthValue,
}

impl DepthReport {
    pub fn to_json(&self) -> Value {
        let flags: Vec<Value> = self
            .flags
            .iter()
            .map(|lf| {
                let opt = |b: Option<bool>| b.map(Value::Bool).unwrap_or(Value::Null);
                json!({
                    "n": lf.n,
                    "AA": opt(lf.aa),
                    "AB": opt(lf.ab),
                    "BA": opt(lf.ba),
                    "BB": opt(lf.bb),
                })
            })
            .collect();
        let mut obj = json!({
            "min_depth": self.min_depth.to_json(),
            "odd_depth": self.odd_depth.to_json(),
            "h_depth": self.h_depth.to_json(),
            "flags": flags,
            "depth1": self.depth1,
            "cutoff": self.cutoff,
            "field": self.field,
        });
        if let Some(rev) = self.depth1_reverse {
            obj["depth1_reverse"] = Value::Bool(rev);
            if self.depth1 && !rev {
                obj["depth1_one_sided"] = Value::Bool(true);
            }
        }
        obj
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        out.push_str(&format!("min_depth,{}\n", self.min_depth.render()));
        out.push_str(&format!("odd_depth,{}\n", self.odd_depth.render()));
        out.push_str(&format!("h_depth,{}\n", self.h_depth.render()));
        out.push_str(&format!("depth1,{}\n", self.depth1));
        out.push_str(&format!("cutoff,{}\n", self.cutoff));
        out.push_str(&format!("field,{}\n", self.field));
        for lf in &self.flags {
            let opt = |b: Option<bool>| b.map(|x| x.to_string()).unwrap_or_else(|| "-".to_string());
            out.push_str(&format!("flag_AA_{},{}\n", lf.n, opt(lf.aa)));
            out.push_str(&format!("flag_AB_{},{}\n", lf.n, opt(lf.ab)));
            out.push_str(&format!("flag_BA_{},{}\n", lf.n, opt(lf.ba)));
            out.push_str(&format!("flag_BB_{},{}\n", lf.n, opt(lf.bb)));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("minimum depth: {}\n", self.min_depth.render()));
        out.push_str(&format!("odd depth:     {}\n", self.odd_depth.render()));
        out.push_str(&format!("H-depth:       {}\n", self.h_depth.render()));
        out.push_str(&format!("depth 1 (A | qB as B-B): {}\n", self.depth1));
        out.push_str(&format!(
            "cutoff: {}   field: {}\n",
            self.cutoff, self.field
        ));
        out.push_str("level flags (C_{n+1} vs C_n divisibility):\n");
        let opt = |b: Option<bool>| match b {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        for lf in &self.flags {
            out.push_str(&format!(
                "  n={}: AA={} AB={} BA={} BB={}\n",
                lf.n,
                opt(lf.aa),
                opt(lf.ab),
                opt(lf.ba),
                opt(lf.bb)
            ));
        }
        out
    }
}

/// Evaluates and caches depth flags for one subalgebra pair. Flags are
/// computed lazily; the four flag computations at a fixed level are
/// independent, and every computed table is checked against the
/// restriction and monotonicity laws (a violation is an engine bug, not a
/// finding, hence the assertions).
pub struct DepthEngine<F: Field> {
    chain: TensorChain<F>,
    flags: BTreeMap<(u32, Pair), bool>,
    depth1: Option<bool>,
    depth1_reverse: Option<bool>,
    obstruction: Option<Depth2Obstruction<F>>,
    obstruction_available: Option<bool>,
    /// Use the augmentation-ideal obstruction to falsify level-1 one-sided
    /// flags without tensor computations.
    pub use_prefilter: bool,
}

impl<F: Field> DepthEngine<F> {
    pub fn new(e: SubalgebraEmbedding<F>) -> Result<Self> {
        Ok(DepthEngine {
            chain: TensorChain::new(e)?,
            flags: BTreeMap::new(),
            depth1: None,
            depth1_reverse: None,
            obstruction: None,
            obstruction_available: None,
            use_prefilter: true,
        })
    }

    pub fn embedding(&self) -> &SubalgebraEmbedding<F> {
        self.chain.embedding()
    }

    pub fn chain_mut(&mut self) -> &mut TensorChain<F> {
        &mut self.chain
    }

    /// `C_1 ∈ add(C_0)` as B-B-bimodules (i.e. `A | qB`).
    pub fn depth1(&mut self) -> Result<bool> {
        if let Some(d) = self.depth1 {
            return Ok(d);
        }
        let c1 = self.chain.c_n_as(1, Pair::BB)?;
        let c0 = self.chain.c_n_as(0, Pair::BB)?;
        let d = in_add(&c1, &c0)?;
        self.depth1 = Some(d);
        Ok(d)
    }

    /// The reverse divisibility `B | rA`, reported alongside depth 1.
    pub fn depth1_reverse(&mut self) -> Result<bool> {
        if let Some(d) = self.depth1_reverse {
            return Ok(d);
        }
        let c1 = self.chain.c_n_as(1, Pair::BB)?;
        let c0 = self.chain.c_n_as(0, Pair::BB)?;
        let d = in_add(&c0, &c1)?;
        self.depth1_reverse = Some(d);
        Ok(d)
    }

    /// The depth-2 obstruction, when the ambient algebra carries
    /// augmentations; `None` otherwise.
    pub fn obstruction(&mut self) -> Result<Option<&Depth2Obstruction<F>>> {
        if self.obstruction_available.is_none() {
            if self.embedding().ambient().vertex_idempotents().is_some() {
                let obs = depth2_obstruction(&self.embedding().clone())?;
                self.obstruction = Some(obs);
                self.obstruction_available = Some(true);
            } else {
                self.obstruction_available = Some(false);
            }
        }
        Ok(self.obstruction.as_ref())
    }

    /// Divisibility flag at level n: `C_{n+1} ∈ add(C_n)` in the given
    /// bimodule structure (both directions for A-A).
    pub fn flag(&mut self, n: u32, pair: Pair) -> Result<bool> {
        assert!(n >= 1, "flags are defined for n >= 1");
        if let Some(&b) = self.flags.get(&(n, pair)) {
            return Ok(b);
        }
        // the lemma on augmentation ideals falsifies level-1 one-sided
        // flags cheaply: a failed inclusion rules the flag out
        if self.use_prefilter && n == 1 && matches!(pair, Pair::AB | Pair::BA) {
            if let Some(obs) = self.obstruction()? {
                let falsified = match pair {
                    Pair::AB => !obs.right_ok,
                    Pair::BA => !obs.left_ok,
                    _ => false,
                };
                if falsified {
                    self.flags.insert((n, pair), false);
                    return Ok(false);
                }
            }
        }
        let b = self.flag_by_tensor(n, pair)?;
        self.flags.insert((n, pair), b);
        self.assert_consistency();
        Ok(b)
    }

    /// All four flags at one level.
    pub fn depth_flags(&mut self, n: u32) -> Result<LevelFlags> {
        Ok(LevelFlags {
            n,
            bb: Some(self.flag(n, Pair::BB)?),
            ab: Some(self.flag(n, Pair::AB)?),
            ba: Some(self.flag(n, Pair::BA)?),
            aa: Some(self.flag(n, Pair::AA)?),
        })
    }

    /// The flag computed from the tensor powers, bypassing the pre-filter.
    pub fn flag_by_tensor(&mut self, n: u32, pair: Pair) -> Result<bool> {
        let next = self.chain.c_n_as(n as usize + 1, pair)?;
        let cur = self.chain.c_n_as(n as usize, pair)?;
        match pair {
            Pair::AA => h_equivalent(&next, &cur),
            _ => in_add(&next, &cur),
        }
    }

    /// Internal-law check over everything computed so far.
    fn assert_consistency(&self) {
        let get = |n: u32, p: Pair| self.flags.get(&(n, p)).copied();
        let max_n = self.flags.keys().map(|&(n, _)| n).max().unwrap_or(0);
        for n in 1..=max_n {
            if let (Some(true), Some(ab)) = (get(n, Pair::AA), get(n, Pair::AB)) {
                assert!(ab, "AA({n}) holds but AB({n}) fails: engine bug");
            }
            if let (Some(true), Some(ba)) = (get(n, Pair::AA), get(n, Pair::BA)) {
                assert!(ba, "AA({n}) holds but BA({n}) fails: engine bug");
            }
            let one_sided =
                matches!(get(n, Pair::AB), Some(true)) || matches!(get(n, Pair::BA), Some(true));
            if one_sided {
                if let Some(bb) = get(n, Pair::BB) {
                    assert!(bb, "AB/BA({n}) holds but BB({n}) fails: engine bug");
                }
            }
            // monotonicity in n, per structure
            for p in [Pair::AA, Pair::AB, Pair::BA, Pair::BB] {
                if let (Some(true), Some(later)) = (get(n, p), get(n + 1, p)) {
                    assert!(later, "{p:?}({}) regressed after holding at {n}", n + 1);
                }
            }
            // an odd condition forces both even conditions one level up
            if matches!(get(n, Pair::BB), Some(true)) {
                for p in [Pair::AB, Pair::BA] {
                    if let Some(later) = get(n + 1, p) {
                        assert!(later, "BB({n}) holds but {p:?}({}) fails", n + 1);
                    }
                }
            }
        }
        if self.depth1 == Some(true) {
            for p in [Pair::AB, Pair::BA] {
                if let Some(&b) = self.flags.get(&(1, p)) {
                    assert!(b, "depth 1 holds but {p:?}(1) fails: engine bug");
                }
            }
        }
    }

    /// Walks the depth conditions in increasing depth order (1, 2, 3, …)
    /// up to `cutoff`, stopping at the first satisfied condition.
    pub fn min_depth(&mut self, cutoff: u32) -> Result<DepthValue> {
        assert!(cutoff >= 1, "cutoff must be at least 1");
        if self.depth1()? {
            return Ok(DepthValue::Resolved(1));
        }
        let mut n = 1u32;
        loop {
            let even = 2 * n;
            if even > cutoff {
                break;
            }
            let ab = self.flag(n, Pair::AB)?;
            let ba = self.flag(n, Pair::BA)?;
            if ab || ba {
                return Ok(DepthValue::Resolved(even));
            }
            let odd = 2 * n + 1;
            if odd > cutoff {
                break;
            }
            if self.flag(n, Pair::BB)? {
                return Ok(DepthValue::Resolved(odd));
            }
            n += 1;
        }
        Ok(DepthValue::AtLeast(cutoff + 1))
    }

    /// Least H-depth `2n-1 <= cutoff` with the A-A condition true.
    pub fn h_depth(&mut self, cutoff: u32) -> Result<DepthValue> {
        assert!(cutoff >= 1);
        let mut n = 1u32;
        while 2 * n - 1 <= cutoff {
            if self.flag(n, Pair::AA)? {
                return Ok(DepthValue::Resolved(2 * n - 1));
            }
            n += 1;
        }
        Ok(DepthValue::AtLeast(2 * n - 1))
    }

    /// Runs the full report: minimum, odd and H-depth plus the computed
    /// flag table.
    pub fn report(&mut self, cutoff: u32) -> Result<DepthReport> {
        let min_depth = self.min_depth(cutoff)?;
        let h_depth = self.h_depth(cutoff)?;
        // H-depth 2n-1 forces depth <= 2n
        if let (Some(h), Some(d)) = (h_depth.resolved(), min_depth.resolved()) {
            assert!(d <= h + 1, "H-depth {h} incompatible with depth {d}");
        }
        let depth1 = self.depth1()?;
        let depth1_reverse = if depth1 {
            Some(self.depth1_reverse()?)
        } else {
            None
        };
        let max_n = self.flags.keys().map(|&(n, _)| n).max().unwrap_or(0);
        let flags = (1..=max_n)
            .map(|n| LevelFlags {
                n,
                aa: self.flags.get(&(n, Pair::AA)).copied(),
                ab: self.flags.get(&(n, Pair::AB)).copied(),
                ba: self.flags.get(&(n, Pair::BA)).copied(),
                bb: self.flags.get(&(n, Pair::BB)).copied(),
            })
            .collect();
        Ok(DepthReport {
            cutoff,
            field: self.embedding().ambient().field().spec().to_string(),
            depth1,
            depth1_reverse,
            flags,
            min_depth,
            odd_depth: odd_depth(&min_depth),
            h_depth,
        })
    }
}

/// Outcome of the quotient-monotonicity check `d(B_I, A_I) <= d(B, A)`.
#[derive(Clone, Debug)]
pub struct QuotientDepthCheck {
    pub original: DepthValue,
    pub quotient: DepthValue,
    /// False only if the inequality is provably violated (which would be a
    /// bug, not a finding).
    pub monotone: bool,
}

/// Builds the quotient extension `B/I ⊆ A/I` for an A-ideal `I` contained
/// in (the image of) `B` and compares depths.
pub fn quotient_depth_check<F: Field>(
    e: &SubalgebraEmbedding<F>,
    ideal: &Ideal<F>,
    cutoff: u32,
) -> Result<QuotientDepthCheck> {
    if ideal.ambient().as_ref() != e.ambient().as_ref() {
        return Err(Error::algebra("ideal belongs to a different algebra"));
    }
    let f = e.ambient().field();
    for v in ideal.basis() {
        if !crate::algebra::in_image(e, v) {
            return Err(Error::NotAnIdeal(
                "ideal is not contained in the subalgebra".into(),
            ));
        }
    }
    let (aq, proj) = quotient(e.ambient(), ideal)?;
    let gens: Vec<SparseVec<F::Elem>> = (0..e.sub().dim())
        .map(|c| proj.apply(&e.include(&sv_unit(f, c))))
        .collect();
    let eq = subalgebra_closure(&aq, &gens)?;
    let mut original_engine = DepthEngine::new(e.clone())?;
    let original = original_engine.min_depth(cutoff)?;
    let mut quotient_engine = DepthEngine::new(eq)?;
    let quotient_depth = quotient_engine.min_depth(cutoff)?;
    let violated = match (original, quotient_depth) {
        (DepthValue::Resolved(a), DepthValue::Resolved(b)) => b > a,
        (DepthValue::Resolved(a), DepthValue::AtLeast(kb)) => kb > a,
        (DepthValue::AtLeast(_), _) => false,
    };
    Ok(QuotientDepthCheck {
        original,
        quotient: quotient_depth,
        monotone: !violated,
    })
}
