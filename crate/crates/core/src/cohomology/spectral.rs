use crate::basis::{delta_apply, tensor_with_some_forms, GradedSlot};
use crate::error::{Error, Result};
use crate::linalg::{kernel, Field, Matrix, Subspace};

use super::Split;

impl<F: Field> Split<F> {
    fn l_slot(&self, l: usize, j: usize) -> GradedSlot {
        GradedSlot::new(self.n(), self.nu(), l - j, j)
    }

    /// `F^{p,q} = g_{l−p−q}⊗Λ^pV*∧Λ^qT*` in the slot `(l−p−q, p+q)`, or
    /// `None` when that slot does not exist.
    fn filtration(&self, l: usize, p: i64, q: i64) -> Result<Option<(GradedSlot, Subspace<F>)>> {
        let j = p + q;
        if j < 0 || j as usize > self.n() || j as usize > l {
            return Ok(None);
        }
        let j = j as usize;
        let slot = self.l_slot(l, j);
        let need = p.max(0) as usize;
        let m = self.m();
        let rows = tensor_with_some_forms(self.adapted.level(l - j)?, &slot, |set| {
            set.iter().filter(|&&c| c >= m).count() >= need
        });
        Ok(Some((slot, Subspace::from_rows(slot.dim(), rows))))
    }

    fn filtration_or_zero(&self, l: usize, p: i64, q: i64, slot: &GradedSlot) -> Result<Subspace<F>> {
        Ok(self.filtration(l, p, q)?.map_or_else(|| Subspace::zero(slot.dim()), |f| f.1))
    }

    /// `Z_r^{p,q} = {ω ∈ F^{p,q} : δω ∈ F^{p+r,q−r+1}}`, `Z_{−1} = F`.
    fn cocycles(&self, l: usize, r: i64, p: i64, q: i64) -> Result<Option<(GradedSlot, Subspace<F>)>> {
        let Some((slot, f)) = self.filtration(l, p, q)? else {
            return Ok(None);
        };
        if r < 0 {
            return Ok(Some((slot, f)));
        }
        let Some(target) = slot.delta_target() else {
            return Ok(Some((slot, f)));
        };
        let basis = f.basis_vectors();
        if basis.is_empty() {
            return Ok(Some((slot, f)));
        }
        let images = delta_apply(&slot, &basis);
        let allowed = self.filtration_or_zero(l, p + r, q - r + 1, &target)?;
        let ann = allowed.annihilator();
        let coupling = ann.mul(&Matrix::from_columns(&images, target.dim()));
        let coeffs = kernel(&coupling);
        let rows = coeffs
            .basis_vectors()
            .iter()
            .map(|c| {
                let mut v = vec![F::zero(); slot.dim()];
                for (x, b) in c.iter().zip(&basis) {
                    if x.is_zero() {
                        continue;
                    }
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = vi.plus(&x.times(bi));
                    }
                }
                v
            })
            .collect();
        Ok(Some((slot, Subspace::from_rows(slot.dim(), rows))))
    }

    /// `B_r^{p,q} = δ(F^{p−r,q+r−1}) ∩ F^{p,q}`.
    fn boundaries(&self, l: usize, r: i64, p: i64, q: i64, slot: &GradedSlot) -> Result<Subspace<F>> {
        let here = self.filtration_or_zero(l, p, q, slot)?;
        let Some((src, f)) = self.filtration(l, p - r, q + r - 1)? else {
            return Ok(Subspace::zero(slot.dim()));
        };
        if src.delta_target() != Some(*slot) {
            return Ok(Subspace::zero(slot.dim()));
        }
        let img = Subspace::from_rows(slot.dim(), delta_apply(&src, &f.basis_vectors()));
        img.intersect(&here)
    }

    /// `dim E_r^{p,q}` of the spectral sequence of the `l`-th Spencer
    /// complex, `E_r = Z_r / (Z_{r−1}^{p+1,q−1} + B_{r−1}^{p,q})`.
    pub fn spectral_term(&self, l: usize, r: usize, p: i64, q: i64) -> Result<usize> {
        if r > 2 {
            return Err(Error::Unsupported(format!("E_{r} terms")));
        }
        if l > self.adapted.cap() {
            return Err(Error::CapExceeded { needed: l, cap: self.adapted.cap() });
        }
        let r = r as i64;
        let Some((slot, z)) = self.cocycles(l, r, p, q)? else {
            return Ok(0);
        };
        let lower = match self.cocycles(l, r - 1, p + 1, q - 1)? {
            Some((s, zz)) if s == slot => zz,
            _ => Subspace::zero(slot.dim()),
        };
        let b = self.boundaries(l, r - 1, p, q, &slot)?;
        let denom = lower.sum(&b)?;
        Ok(z.dim() - z.intersect(&denom)?.dim())
    }

    /// `E_r^{p,q}` for all `p + q = j`, `0 ≤ j ≤ n`, as rows `(p, q, dim)`.
    pub fn spectral_page(&self, l: usize, r: usize) -> Result<Vec<(i64, i64, usize)>> {
        let mut out = Vec::new();
        for j in 0..=self.n().min(l) as i64 {
            for p in 0..=j.min(self.t() as i64) {
                out.push((p, j - p, self.spectral_term(l, r, p, j - p)?));
            }
        }
        Ok(out)
    }
}
