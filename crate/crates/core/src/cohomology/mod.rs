//! Spencer δ-cohomology, the partial differential δ′ along a subspace,
//! involutivity and the dimension identities built on top of them.

mod aux;
mod cartan;
mod frame;
mod spectral;
mod theorem;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::basis::{binom, delta_apply, tensor_with_forms, GradedSlot};
use crate::error::{Error, Result};
use crate::linalg::{rank_of_rows, Field, Subspace};
use crate::system::SymbolicSystem;

pub use aux::AuxSpaces;
pub use cartan::{
    acyclicity, acyclicity_against, cartan_test, is_involutive, property_i1, property_i2, property_i3, AcyclicityVerdict, CartanReport,
    CartanVerdict, I3Verdict, InvolutivityReport, OrderCheck, PropertyVerdict, Splitting, RETRIES,
};
pub use frame::{Frame, Split};
pub use theorem::{
    acyclicity_transfer, corollary_euler_check, AcyclicityTransfer, lemma5_check, verify_thm1, CorollaryCheck, Lemma5Cell, Thm1Cell,
    Thm1Hypotheses, Thm1Report,
};

/// Which complex a table was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Complex {
    /// The Spencer complex with all `n` form directions.
    Full,
    /// `δ′`, differentiating along the first `dim_w` adapted coordinates.
    AlongW { dim_w: usize },
    /// The Spencer complex of `g^{|k⟩}`.
    Derived { k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub source: Complex,
    pub i_max: usize,
    pub j_max: usize,
    #[serde(skip)]
    dims: BTreeMap<(usize, usize), usize>,
}

impl CohomologyTable {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.dims.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero cells `(i, j, dim)` in lexicographic order.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize)> {
        self.dims.iter().filter(|e| *e.1 > 0).map(|(&(i, j), &d)| (i, j, d)).collect()
    }

    pub fn is_zero_except_origin(&self) -> bool {
        self.nonzero().iter().all(|&(i, j, _)| i == 0 && j == 0)
    }
}

/// Ranks of `δ` on `g_i⊗Λ^j` for a fixed number of form directions.
/// Entries for `i > cap` are left out.
pub(crate) struct DeltaRanks {
    ranks: Vec<Vec<usize>>,
    dims: Vec<usize>,
    forms: usize,
}

impl DeltaRanks {
    pub(crate) fn new<F: Field>(g: &SymbolicSystem<F>, forms: usize, top: usize) -> Result<Self> {
        let mut ranks = Vec::with_capacity(top + 1);
        let mut dims = Vec::with_capacity(top + 1);
        for i in 0..=top {
            let level = g.level(i)?;
            dims.push(level.dim());
            ranks.push((0..=forms).map(|j| delta_rank(level, &GradedSlot::with_forms(g.n(), forms, g.nu(), i, j))).collect());
        }
        Ok(DeltaRanks { ranks, dims, forms })
    }

    fn rank(&self, i: usize, j: usize) -> usize {
        self.ranks.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }

    /// Requires `i + 1` to be within the computed range.
    pub(crate) fn h(&self, i: usize, j: usize) -> usize {
        if j > self.forms {
            return 0;
        }
        assert!(i + 1 < self.ranks.len() || j == 0 && i < self.ranks.len(), "level {} not computed", i + 1);
        let total = self.dims[i] * binom(self.forms, j);
        let incoming = if j == 0 { 0 } else { self.rank(i + 1, j - 1) };
        total - self.rank(i, j) - incoming
    }
}

/// `rank δ` restricted to `h⊗Λ^j` in the given slot.
pub(crate) fn delta_rank<F: Field>(h: &Subspace<F>, slot: &GradedSlot) -> usize {
    let Some(target) = slot.delta_target() else {
        return 0;
    };
    if h.is_zero() {
        return 0;
    }
    let images = delta_apply(slot, &tensor_with_forms(h, slot));
    rank_of_rows(images, target.dim())
}

/// `δ(h⊗Λ^j)` as a subspace of the target slot.
pub(crate) fn delta_image<F: Field>(h: &Subspace<F>, slot: &GradedSlot) -> Subspace<F> {
    match slot.delta_target() {
        None => Subspace::zero(0),
        Some(target) => Subspace::from_rows(target.dim(), delta_apply(slot, &tensor_with_forms(h, slot))),
    }
}

/// Copy of `g` whose levels reach `top`, or a cap error.
pub(crate) fn reaching<F: Field>(g: &SymbolicSystem<F>, top: usize) -> Result<SymbolicSystem<F>> {
    if g.cap() >= top {
        Ok(g.clone())
    } else if g.is_closed() {
        g.extended(top)
    } else {
        Err(Error::CapExceeded { needed: top, cap: g.cap() })
    }
}

/// `dim H^{i,j}(g)`.
pub fn cohomology_dim<F: Field>(g: &SymbolicSystem<F>, i: usize, j: usize) -> Result<usize> {
    if j > g.n() {
        return Ok(0);
    }
    let g = reaching(g, i + 1)?;
    let n = g.n();
    let here = GradedSlot::new(n, g.nu(), i, j);
    let total = g.level(i)?.dim() * binom(n, j);
    let out = delta_rank(g.level(i)?, &here);
    let inc = if j == 0 { 0 } else { delta_rank(g.level(i + 1)?, &GradedSlot::new(n, g.nu(), i + 1, j - 1)) };
    Ok(total - out - inc)
}

/// All `H^{i,j}(g)` with `i ≤ i_max`.
pub fn cohomology_table<F: Field>(g: &SymbolicSystem<F>, i_max: usize) -> Result<CohomologyTable> {
    table_with_forms(g, g.n(), i_max, Complex::Full)
}

pub(crate) fn table_with_forms<F: Field>(
    g: &SymbolicSystem<F>,
    forms: usize,
    i_max: usize,
    source: Complex,
) -> Result<CohomologyTable> {
    let g = reaching(g, i_max + 1)?;
    let ranks = DeltaRanks::new(&g, forms, i_max + 1)?;
    let mut dims = BTreeMap::new();
    for i in 0..=i_max {
        for j in 0..=forms {
            dims.insert((i, j), ranks.h(i, j));
        }
    }
    Ok(CohomologyTable { source, i_max, j_max: forms, dims })
}

/// The largest `i_max` for which a table of `g` can be computed.
pub fn default_i_max<F: Field>(g: &SymbolicSystem<F>) -> usize {
    if g.is_closed() {
        g.cap()
    } else {
        g.cap().saturating_sub(1)
    }
}

/// `dim H^{i,j}(g, δ′)` for `V* = span(vstar)`, using the frame's complement.
pub fn dprime_cohomology<F: Field>(g: &SymbolicSystem<F>, frame: &Frame<F>, i: usize, j: usize) -> Result<usize> {
    let split = Split::new(g, frame, i + 1)?;
    Ok(split.dprime_table(i)?.get(i, j))
}
