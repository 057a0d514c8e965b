//! Symbolic systems `g = {g_k ⊂ S^kT*⊗N}` and the constructions on them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::basis::{monomial_rank, monomials, partial, restriction_matrix, sym_dim, GradedSlot};
use crate::dsl::EquationSet;
use crate::error::{Error, Result};
use crate::linalg::{kernel, Field, Matrix, Subspace, Q};

/// `h^{(1)} = {p ∈ S^{k+1}T*⊗N : ∂_i p ∈ h for all i}` for `h ⊂ S^kT*⊗N`.
pub fn prolong<F: Field>(h: &Subspace<F>, n: usize, nu: usize, k: usize) -> Subspace<F> {
    let target = nu * sym_dim(n, k + 1);
    if h.is_full() {
        return Subspace::full(target);
    }
    if h.is_zero() && n > 0 {
        return Subspace::zero(target);
    }
    let ann = h.annihilator();
    let slot = GradedSlot::new(n, nu, k + 1, 0);
    let mut stacked = Matrix::zeros(0, target);
    for i in 0..n {
        stacked = stacked.vstack(&ann.mul(&partial(i, &slot)));
    }
    kernel(&stacked)
}

/// `h^{(l)}`.
pub fn prolong_iterated<F: Field>(h: &Subspace<F>, n: usize, nu: usize, k: usize, l: usize) -> Subspace<F> {
    let mut cur = h.clone();
    for d in 0..l {
        cur = prolong(&cur, n, nu, k + d);
    }
    cur
}

/// `∂h = ⟨∂_v p⟩ ⊂ S^{k−1}T*⊗N` for `h ⊂ S^kT*⊗N`, `k ≥ 1`.
pub fn descend_level<F: Field>(h: &Subspace<F>, n: usize, nu: usize, k: usize) -> Subspace<F> {
    let slot = GradedSlot::new(n, nu, k, 0);
    let mut rows = Vec::new();
    for i in 0..n {
        let d = partial::<F>(i, &slot);
        rows.extend(h.basis_vectors().iter().map(|p| d.apply(p)));
    }
    Subspace::from_rows(nu * sym_dim(n, k - 1), rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderProfile {
    pub orders: Vec<usize>,
    pub multiplicities: BTreeMap<usize, usize>,
    pub r_min: Option<usize>,
    pub r_max: Option<usize>,
    pub codim: usize,
    /// No further orders can appear above the cap.
    pub certified: bool,
}

/// A graded family `k ↦ g_k` computed for `0 ≤ k ≤ cap`. When `closed`,
/// levels above the cap are prolongations of the top level and can be
/// produced on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicSystem<F: Field = Q> {
    n: usize,
    nu: usize,
    levels: Vec<Subspace<F>>,
    closed: bool,
    generators: Vec<(usize, Vec<F>)>,
}

impl<F: Field> SymbolicSystem<F> {
    pub fn free(n: usize, nu: usize, cap: usize) -> Self {
        let levels = (0..=cap).map(|k| Subspace::full(nu * sym_dim(n, k))).collect();
        SymbolicSystem { n, nu, levels, closed: true, generators: Vec::new() }
    }

    /// The system generated by functionals `(order, f)` on `S^order T*⊗N`.
    pub fn from_functionals(n: usize, nu: usize, eqs: Vec<(usize, Vec<F>)>, cap: usize) -> Result<Self> {
        if n == 0 || nu == 0 {
            return Err(Error::InvalidArgument("need at least one variable and one unknown".into()));
        }
        for (k, f) in &eqs {
            if f.len() != nu * sym_dim(n, *k) {
                return Err(Error::InvalidArgument(format!("functional of order {k} has wrong length {}", f.len())));
            }
        }
        let top = eqs.iter().map(|e| e.0).max().unwrap_or(0);
        if top > cap {
            return Err(Error::CapExceeded { needed: top, cap });
        }
        let mut levels: Vec<Subspace<F>> = Vec::with_capacity(cap + 1);
        for k in 0..=cap {
            let base = if k == 0 { Subspace::full(nu) } else { prolong(&levels[k - 1], n, nu, k - 1) };
            let rows: Vec<Vec<F>> = eqs.iter().filter(|e| e.0 == k).map(|e| e.1.clone()).collect();
            let level = if rows.is_empty() {
                base
            } else {
                let dim = nu * sym_dim(n, k);
                base.intersect(&kernel(&Matrix::from_rows(rows, dim)))?
            };
            levels.push(level);
        }
        Ok(SymbolicSystem { n, nu, levels, closed: true, generators: eqs })
    }

    pub fn from_equations(set: &EquationSet, cap: usize) -> Result<Self> {
        Self::from_functionals(set.n(), set.nu(), set.functionals(), cap)
    }

    /// Explicit levels; the symbolic-system axiom is checked.
    pub fn from_levels(n: usize, nu: usize, levels: Vec<Subspace<F>>, closed: bool) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument("no levels".into()));
        }
        for (k, l) in levels.iter().enumerate() {
            if l.ambient() != nu * sym_dim(n, k) {
                return Err(Error::InvalidArgument(format!("level {k} lives in the wrong space")));
            }
        }
        let s = SymbolicSystem { n, nu, levels, closed, generators: Vec::new() };
        if let Some(k) = s.axiom_violation() {
            return Err(Error::InvalidArgument(format!("g_{k} is not inside the prolongation of g_{}", k - 1)));
        }
        Ok(s)
    }

    /// First `k` with `g_k ⊄ g_{k−1}^{(1)}`.
    pub fn axiom_violation(&self) -> Option<usize> {
        (1..self.levels.len()).find(|&k| !self.prolongation_of(k - 1).contains(&self.levels[k]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn cap(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn generators(&self) -> &[(usize, Vec<F>)] {
        &self.generators
    }

    pub fn levels(&self) -> &[Subspace<F>] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> Result<&Subspace<F>> {
        self.levels.get(k).ok_or(Error::CapExceeded { needed: k, cap: self.cap() })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }

    pub fn slot(&self, k: usize, j: usize) -> GradedSlot {
        GradedSlot::new(self.n, self.nu, k, j)
    }

    /// `g_k^{(1)}`.
    pub fn prolongation_of(&self, k: usize) -> Subspace<F> {
        prolong(&self.levels[k], self.n, self.nu, k)
    }

    /// A copy whose levels reach at least `cap`.
    pub fn extended(&self, cap: usize) -> Result<Self> {
        if cap <= self.cap() {
            return Ok(self.clone());
        }
        if !self.closed {
            return Err(Error::CapExceeded { needed: cap, cap: self.cap() });
        }
        let mut out = self.clone();
        while out.cap() < cap {
            let next = out.prolongation_of(out.cap());
            out.levels.push(next);
        }
        Ok(out)
    }

    pub fn truncated(&self, cap: usize) -> Self {
        let mut out = self.clone();
        out.levels.truncate(cap + 1);
        out
    }

    pub fn order_profile(&self) -> OrderProfile {
        let mut multiplicities = BTreeMap::new();
        if !self.levels[0].is_full() {
            multiplicities.insert(0, self.levels[0].codim());
        }
        for k in 1..=self.cap() {
            let pro = self.prolongation_of(k - 1);
            let m = pro.dim() - self.levels[k].dim();
            if m > 0 {
                multiplicities.insert(k, m);
            }
        }
        let orders: Vec<usize> = multiplicities.keys().copied().collect();
        OrderProfile {
            r_min: orders.first().copied(),
            r_max: orders.last().copied(),
            codim: multiplicities.values().sum(),
            orders,
            multiplicities,
            certified: self.closed,
        }
    }

    /// `g^{|k⟩}`: full below `k`, `g_k^{(i−k)}` from `k` on.
    pub fn derived(&self, k: usize) -> Result<Self> {
        let gk = self.level(k)?.clone();
        let mut levels: Vec<Subspace<F>> = (0..k).map(|i| Subspace::full(self.nu * sym_dim(self.n, i))).collect();
        levels.push(gk);
        let mut out = SymbolicSystem { n: self.n, nu: self.nu, levels, closed: true, generators: Vec::new() };
        out = out.extended(self.cap())?;
        Ok(out)
    }

    /// Level-wise image under restriction to `W = span(w_basis)`. Never
    /// re-prolongs; the result is closed only when `W = T`.
    pub fn restrict(&self, w_basis: &[Vec<F>]) -> Result<Self> {
        let m = w_basis.len();
        let mut levels = Vec::with_capacity(self.levels.len());
        for (k, g) in self.levels.iter().enumerate() {
            let r = restriction_matrix(w_basis, self.n, self.nu, k)?;
            levels.push(g.image(&r));
        }
        Ok(SymbolicSystem { n: m, nu: self.nu, levels, closed: self.closed && m == self.n, generators: Vec::new() })
    }

    /// The same system in coordinates `y` with `x_i = Σ_b sub[i][b]·y_b`.
    pub fn transform(&self, sub: &Matrix<F>) -> Result<Self> {
        if sub.rows() != self.n || sub.cols() != self.n {
            return Err(Error::InvalidArgument("coordinate change must be square".into()));
        }
        let cols: Vec<Vec<F>> = (0..self.n).map(|c| sub.column(c)).collect();
        self.restrict(&cols)
    }

    /// `ĝ = er_k(g)`, a first-order system with values in `S^{k−1}T*⊗N`
    /// (the `N` index outermost, then the monomial).
    pub fn equivalence_reduce(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("reduction order must be positive".into()));
        }
        let r_min = self.levels.iter().position(|l| !l.is_full()).unwrap_or(usize::MAX);
        if r_min < k {
            return Err(Error::OrderTooLow { r_min, k });
        }
        if self.cap() < k {
            return Err(Error::CapExceeded { needed: k, cap: self.cap() });
        }
        let nu2 = self.nu * sym_dim(self.n, k - 1);
        let mut levels = vec![Subspace::full(nu2)];
        for l in k..=self.cap() {
            let m = er_matrix::<F>(self.n, self.nu, k, l);
            levels.push(self.levels[l].image(&m));
        }
        Ok(SymbolicSystem { n: self.n, nu: nu2, levels, closed: self.closed, generators: Vec::new() })
    }

    /// `(∂g)_k = ∂g_{k+1}`. A closed system is first extended by one level
    /// so the cap is kept; otherwise the cap drops by one.
    pub fn descend(&self) -> Result<Self> {
        let src = if self.closed { self.extended(self.cap() + 1)? } else { self.clone() };
        if src.cap() == 0 {
            return Err(Error::CapExceeded { needed: 1, cap: 0 });
        }
        let levels = (0..src.cap()).map(|k| descend_level(&src.levels[k + 1], self.n, self.nu, k + 1)).collect();
        Ok(SymbolicSystem { n: self.n, nu: self.nu, levels, closed: false, generators: Vec::new() })
    }

    /// Iterates `∂` until the levels stop changing. Returns the fixpoint
    /// and the number of strict steps taken.
    pub fn descend_fixpoint(&self) -> Result<(Self, usize)> {
        let mut cur = self.clone();
        let mut steps = 0;
        loop {
            let next = cur.descend()?;
            let common = next.cap().min(cur.cap());
            if (0..=common).all(|k| next.levels[k] == cur.levels[k]) {
                return Ok((cur.truncated(common), steps));
            }
            steps += 1;
            cur = next;
        }
    }

    /// Changes the scalar field (e.g. ℚ to ℚ(i)).
    pub fn lift<G: Field>(&self, f: impl Fn(&F) -> G) -> SymbolicSystem<G> {
        SymbolicSystem {
            n: self.n,
            nu: self.nu,
            levels: self.levels.iter().map(|l| l.map_field(&f)).collect(),
            closed: self.closed,
            generators: self.generators.iter().map(|(k, v)| (*k, v.iter().map(&f).collect())).collect(),
        }
    }
}

/// Matrix of `er_k : S^lT*⊗N → S^{l−k+1}T*⊗(S^{k−1}T*⊗N)`,
/// `p ↦ Σ_{|β|=k−1} ((k−1)!/β!) ∂^β p ⊗ x^β`.
pub fn er_matrix<F: Field>(n: usize, nu: usize, k: usize, l: usize) -> Matrix<F> {
    assert!(k >= 1 && l >= k - 1);
    let (dl, db, dt) = (sym_dim(n, l), sym_dim(n, k - 1), sym_dim(n, l + 1 - k));
    let fact = |a: u32| (1..=a as i64).product::<i64>();
    let mut m = Matrix::zeros(nu * db * dt, nu * dl);
    let betas = monomials(n, k - 1);
    for (a, alpha) in monomials(n, l).iter().enumerate() {
        for beta in &betas {
            if beta.iter().zip(alpha).any(|(b, a)| b > a) {
                continue;
            }
            let rest: Vec<u32> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
            let mut c = Q::from(fact(k as u32 - 1));
            for (x, b) in alpha.iter().zip(beta) {
                c = c.times(&Q::new(fact(*x), fact(*b) * fact(x - b)));
            }
            let c = F::from_q(&c);
            for mu in 0..nu {
                let r = (mu * db + monomial_rank(beta)) * dt + monomial_rank(&rest);
                m.set(r, mu * dl + a, c.clone());
            }
        }
    }
    m
}
