use crate::basis::GradedSlot;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};
use crate::system::SymbolicSystem;

use super::{reaching, table_with_forms, CohomologyTable, Complex};

/// Adapted coordinates for a subspace `V* ⊂ T*` of dimension `t`: new
/// coordinates `y` in which `W = ann V*` is spanned by `∂_{y_0},…,∂_{y_{m−1}}`
/// and `V*` by `dy_m,…,dy_{n−1}`. The first `m` rows of `P` are the chosen
/// complement, which fixes how `W*` sits inside `T*`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<F: Field> {
    n: usize,
    m: usize,
    vstar: Subspace<F>,
    u: Matrix<F>,
}

impl<F: Field> Frame<F> {
    /// Complement spanned by the coordinate covectors off the pivots of `V*`.
    pub fn new(vstar: &Subspace<F>) -> Result<Self> {
        let n = vstar.ambient();
        let complement = (0..n)
            .filter(|c| !vstar.pivots().contains(c))
            .map(|c| {
                let mut e = vec![F::zero(); n];
                e[c] = F::one();
                e
            })
            .collect::<Vec<_>>();
        Self::with_complement(vstar, &complement)
    }

    pub fn with_complement(vstar: &Subspace<F>, complement: &[Vec<F>]) -> Result<Self> {
        let n = vstar.ambient();
        let m = n - vstar.dim();
        if complement.len() != m || complement.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidArgument(format!("complement needs {m} covectors of length {n}")));
        }
        let mut rows = complement.to_vec();
        rows.extend(vstar.basis_vectors());
        let p = Matrix::from_rows(rows, n);
        let u = p.inverse().ok_or(Error::DependentBasis)?;
        Ok(Frame { n, m, vstar: vstar.clone(), u })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `dim W`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `dim V*`.
    pub fn t(&self) -> usize {
        self.n - self.m
    }

    pub fn vstar(&self) -> &Subspace<F> {
        &self.vstar
    }

    /// Coordinate change `x = U·y`.
    pub fn change(&self) -> &Matrix<F> {
        &self.u
    }

    /// Basis of `W` in the original coordinates.
    pub fn w_basis(&self) -> Vec<Vec<F>> {
        (0..self.m).map(|b| self.u.column(b)).collect()
    }
}

/// A system seen through a frame: `g` in adapted coordinates together with
/// its restriction `g̃` to `W`.
#[derive(Clone, Debug)]
pub struct Split<F: Field> {
    pub frame: Frame<F>,
    pub adapted: SymbolicSystem<F>,
    pub restricted: SymbolicSystem<F>,
}

impl<F: Field> Split<F> {
    /// Levels are made available through `top` where possible.
    pub fn new(g: &SymbolicSystem<F>, frame: &Frame<F>, top: usize) -> Result<Self> {
        if frame.n() != g.n() {
            return Err(Error::AmbientMismatch { left: frame.n(), right: g.n() });
        }
        let g = reaching(g, top)?;
        let adapted = g.transform(frame.change())?;
        let first: Vec<Vec<F>> = (0..frame.m())
            .map(|b| {
                let mut e = vec![F::zero(); g.n()];
                e[b] = F::one();
                e
            })
            .collect();
        let restricted = adapted.restrict(&first)?;
        Ok(Split { frame: frame.clone(), adapted, restricted })
    }

    pub fn n(&self) -> usize {
        self.adapted.n()
    }

    pub fn nu(&self) -> usize {
        self.adapted.nu()
    }

    pub fn m(&self) -> usize {
        self.frame.m()
    }

    pub fn t(&self) -> usize {
        self.frame.t()
    }

    /// Largest `i` for which `H^{i,·}` of both systems is available.
    pub fn i_max(&self) -> usize {
        self.adapted.cap().saturating_sub(1)
    }

    /// Slot of `S^kT*⊗N⊗Λ^jW*` in adapted coordinates.
    pub fn w_slot(&self, k: usize, j: usize) -> GradedSlot {
        GradedSlot::with_forms(self.n(), self.m(), self.nu(), k, j)
    }

    /// `H^{i,j}(g, δ′)` for `i ≤ i_max`.
    pub fn dprime_table(&self, i_max: usize) -> Result<CohomologyTable> {
        table_with_forms(&self.adapted, self.m(), i_max, Complex::AlongW { dim_w: self.m() })
    }

    /// `H^{i,j}(g̃)` for `i ≤ i_max`.
    pub fn restricted_table(&self, i_max: usize) -> Result<CohomologyTable> {
        table_with_forms(&self.restricted, self.m(), i_max, Complex::Full)
    }

    /// `H^{i,j}(g)` computed in adapted coordinates.
    pub fn full_table(&self, i_max: usize) -> Result<CohomologyTable> {
        table_with_forms(&self.adapted, self.n(), i_max, Complex::Full)
    }
}
