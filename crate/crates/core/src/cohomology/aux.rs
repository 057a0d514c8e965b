use serde::Serialize;

use crate::basis::{binom, comultiplication, delta_apply, monomials, multiply_slot, sym_dim, GradedSlot};
use crate::error::Result;
use crate::linalg::{Field, Subspace};

use super::{delta_image, delta_rank, Split};

/// Dimensions of the auxiliary spaces at `(i, j)` for a split system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuxSpaces {
    pub i: usize,
    pub j: usize,
    /// `⊕_{r>0} S^rV*⊗δ(S^{i+1−r}W*⊗Λ^{j−1}W*)⊗N`.
    pub upsilon_intro: usize,
    /// `V*·δ′(S^iT*⊗N⊗Λ^{j−1}W*)`.
    pub upsilon: usize,
    /// `⊕_{q>0} Υ^{i,q}⊗Λ^{j−q}V*`.
    pub theta: usize,
    /// `δ(S^{i+1}V*⊗N⊗Λ^{j−1}V*)`.
    pub pi: usize,
    /// `δ′(g_{i+1}⊗Λ^{j−1}W*) ∩ Υ^{i,j}`.
    pub xi: usize,
    /// Image of `S^{i+j}V* → S^iV*⊗S^jV*`.
    pub s: usize,
}

fn unit<F: Field>(n: usize, c: usize) -> Vec<F> {
    let mut e = vec![F::zero(); n];
    e[c] = F::one();
    e
}

impl<F: Field> Split<F> {
    /// `Υ^{i,j} = V*·δ′(S^iT*⊗N⊗Λ^{j−1}W*)` inside the slot `(i, j)` along `W`.
    pub fn upsilon(&self, i: usize, j: usize) -> Subspace<F> {
        let target = self.w_slot(i, j);
        if i == 0 || j == 0 || j > self.m() {
            return Subspace::zero(target.dim());
        }
        let src = self.w_slot(i, j - 1);
        let d = delta_image(&Subspace::full(src.poly().dim()), &src);
        let mid = self.w_slot(i - 1, j);
        let mut rows = Vec::new();
        for a in self.m()..self.n() {
            let lin = unit::<F>(self.n(), a);
            rows.extend(d.basis_vectors().iter().map(|v| multiply_slot(v, &mid, &lin)));
        }
        Subspace::from_rows(target.dim(), rows)
    }

    /// The introduction's form of `Υ^{i,j}`, built from `δ` on polynomials in
    /// the `W` coordinates multiplied by monomials in the `V` coordinates.
    pub fn upsilon_intro(&self, i: usize, j: usize) -> Subspace<F> {
        let target = self.w_slot(i, j);
        if i == 0 || j == 0 || j > self.m() {
            return Subspace::zero(target.dim());
        }
        let (n, m, nu) = (self.n(), self.m(), self.nu());
        let mut rows = Vec::new();
        for r in 1..=i {
            let src = self.w_slot(i + 1 - r, j - 1);
            let w_mons: Vec<usize> = monomials(n, i + 1 - r)
                .iter()
                .enumerate()
                .filter(|(_, a)| a[m..].iter().all(|&e| e == 0))
                .map(|(idx, _)| idx)
                .collect();
            let mut gens = Vec::new();
            for mu in 0..nu {
                for &a in &w_mons {
                    for s in 0..src.ext_dim() {
                        let mut v = vec![F::zero(); src.dim()];
                        v[src.flat(mu, a, s)] = F::one();
                        gens.push(v);
                    }
                }
            }
            let mut layer = delta_apply(&src, &gens);
            let mut slot = self.w_slot(i - r, j);
            for _ in 0..r {
                let mut next = Vec::new();
                for v in &layer {
                    for a in m..n {
                        next.push(multiply_slot(v, &slot, &unit::<F>(n, a)));
                    }
                }
                layer = next;
                slot = GradedSlot { k: slot.k + 1, ..slot };
            }
            rows.extend(layer);
        }
        Subspace::from_rows(target.dim(), rows)
    }

    /// `Ξ^{i,j} = δ′(g_{i+1}⊗Λ^{j−1}W*) ∩ Υ^{i,j}`.
    pub fn xi(&self, i: usize, j: usize) -> Result<Subspace<F>> {
        let target = self.w_slot(i, j);
        if j == 0 || j > self.m() {
            return Ok(Subspace::zero(target.dim()));
        }
        let src = self.w_slot(i + 1, j - 1);
        let d = delta_image(self.adapted.level(i + 1)?, &src);
        d.intersect(&self.upsilon(i, j))
    }

    /// `dim Π^{i,j}`: `δ` on `S^{i+1}V*⊗N⊗Λ^{j−1}V*`, a Spencer complex in
    /// `t` variables.
    pub fn pi_dim(&self, i: usize, j: usize) -> usize {
        let t = self.t();
        if j == 0 || j > t {
            return 0;
        }
        let slot = GradedSlot::new(t, self.nu(), i + 1, j - 1);
        delta_rank(&Subspace::<F>::full(slot.poly().dim()), &slot)
    }

    pub fn aux_spaces(&self, i: usize, j: usize) -> Result<AuxSpaces> {
        let t = self.t();
        let upsilon = self.upsilon(i, j).dim();
        let theta = (1..=j).map(|q| self.upsilon(i, q).dim() * binom(t, j - q)).sum();
        let s = if t == 0 { usize::from(i + j == 0) } else { comultiplication::<F>(t, i, j).rank() };
        Ok(AuxSpaces {
            i,
            j,
            upsilon_intro: self.upsilon_intro(i, j).dim(),
            upsilon,
            theta,
            pi: self.pi_dim(i, j),
            xi: self.xi(i, j)?.dim(),
            s,
        })
    }
}

/// `dim S^iV*⊗N`.
pub(crate) fn sym_v_dim(t: usize, nu: usize, i: usize) -> usize {
    if t == 0 {
        nu * usize::from(i == 0)
    } else {
        nu * sym_dim(t, i)
    }
}
