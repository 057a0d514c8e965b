//! Coordinates on `S^kT*⊗N⊗Λ^jT*` and the matrices acting on them.
//!
//! Polynomials use the plain monomial basis `x^α` (no divided powers), so
//! `δ(x^α ⊗ e ⊗ dx_I) = Σ_i α_i x^{α−e_i} ⊗ e ⊗ dx_i∧dx_I`. Monomials are
//! ordered colexicographically, exterior index sets lexicographically, and
//! the `N` index is outermost.

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Number of monomials of degree `k` in `n` variables.
pub fn sym_dim(n: usize, k: usize) -> usize {
    if n == 0 {
        return usize::from(k == 0);
    }
    binom(n + k - 1, k)
}

/// All exponent vectors of degree `k` in `n` variables, colex order
/// (the last exponent is the most significant, ascending).
pub fn monomials(n: usize, k: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, k: u32, tail: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if k == 0 {
                let mut a = tail.clone();
                a.reverse();
                out.push(a);
            }
            return;
        }
        if n == 1 {
            tail.push(k);
            rec(0, 0, tail, out);
            tail.pop();
            return;
        }
        for last in 0..=k {
            tail.push(last);
            rec(n - 1, k - last, tail, out);
            tail.pop();
        }
    }
    let mut out = Vec::with_capacity(sym_dim(n, k));
    rec(n, k as u32, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn monomial_rank(alpha: &[u32]) -> usize {
    let n = alpha.len();
    let mut remaining: usize = alpha.iter().map(|&a| a as usize).sum();
    let mut rank = 0;
    for i in (1..n).rev() {
        let a = alpha[i] as usize;
        for v in 0..a {
            rank += sym_dim(i, remaining - v);
        }
        remaining -= a;
    }
    rank
}

/// Sorted `j`-subsets of `0..f` in lexicographic order.
pub fn subsets(f: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, f: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for s in start..f {
            if f - s < j - cur.len() {
                break;
            }
            cur.push(s);
            rec(s + 1, f, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if j <= f {
        rec(0, f, j, &mut Vec::new(), &mut out);
    }
    out
}

pub fn subset_rank(set: &[usize], f: usize) -> usize {
    let j = set.len();
    let mut rank = 0;
    let mut prev = 0;
    for (pos, &s) in set.iter().enumerate() {
        for skipped in prev..s {
            rank += binom(f - skipped - 1, j - pos - 1);
        }
        prev = s + 1;
    }
    rank
}

/// The space `S^kT*⊗N⊗Λ^jU*`, where `U*` is spanned by the first `forms`
/// coordinate covectors (`forms = n` gives the ordinary Spencer slot).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GradedSlot {
    pub n: usize,
    pub forms: usize,
    pub nu: usize,
    pub k: usize,
    pub j: usize,
}

impl GradedSlot {
    pub fn new(n: usize, nu: usize, k: usize, j: usize) -> Self {
        GradedSlot { n, forms: n, nu, k, j }
    }

    pub fn with_forms(n: usize, forms: usize, nu: usize, k: usize, j: usize) -> Self {
        assert!(forms <= n);
        GradedSlot { n, forms, nu, k, j }
    }

    pub fn sym_dim(&self) -> usize {
        sym_dim(self.n, self.k)
    }

    pub fn ext_dim(&self) -> usize {
        binom(self.forms, self.j)
    }

    pub fn dim(&self) -> usize {
        self.nu * self.sym_dim() * self.ext_dim()
    }

    /// Slot of the polynomial part alone, `S^kT*⊗N`.
    pub fn poly(&self) -> GradedSlot {
        GradedSlot { j: 0, ..*self }
    }

    /// Target of `δ`; `None` when it is the zero space.
    pub fn delta_target(&self) -> Option<GradedSlot> {
        if self.k == 0 || self.j >= self.forms {
            None
        } else {
            Some(GradedSlot { k: self.k - 1, j: self.j + 1, ..*self })
        }
    }

    pub fn index(&self, mu: usize, alpha: &[u32], forms: &[usize]) -> usize {
        let ext = self.ext_dim();
        mu * self.sym_dim() * ext + monomial_rank(alpha) * ext + subset_rank(forms, self.forms)
    }

    pub fn decode(&self, idx: usize) -> (usize, Vec<u32>, Vec<usize>) {
        let ext = self.ext_dim();
        let block = self.sym_dim() * ext;
        let mu = idx / block;
        let rest = idx % block;
        let alpha = monomials(self.n, self.k).swap_remove(rest / ext);
        let set = subsets(self.forms, self.j).swap_remove(rest % ext);
        (mu, alpha, set)
    }

    /// Flat index of `(mu, monomial #a, subset #s)`.
    pub fn flat(&self, mu: usize, a: usize, s: usize) -> usize {
        let ext = self.ext_dim();
        (mu * self.sym_dim() + a) * ext + s
    }
}

/// Sign and position of `dx_i ∧ dx_I`, or `None` when `i ∈ I`.
pub fn wedge_front(i: usize, set: &[usize]) -> Option<(bool, Vec<usize>)> {
    if set.contains(&i) {
        return None;
    }
    let before = set.iter().filter(|&&l| l < i).count();
    let mut merged = set.to_vec();
    merged.insert(before, i);
    Some((before % 2 == 1, merged))
}

/// Sparse entries `(row, col, value)` of `δ` on the slot.
fn delta_entries(s: &GradedSlot) -> Vec<(usize, usize, i64)> {
    let Some(t) = s.delta_target() else {
        return Vec::new();
    };
    let mons = monomials(s.n, s.k);
    let sets = subsets(s.forms, s.j);
    let mut out = Vec::new();
    for mu in 0..s.nu {
        for (a, alpha) in mons.iter().enumerate() {
            for (si, set) in sets.iter().enumerate() {
                let col = s.flat(mu, a, si);
                for i in 0..s.forms {
                    if alpha[i] == 0 {
                        continue;
                    }
                    let Some((neg, merged)) = wedge_front(i, set) else {
                        continue;
                    };
                    let mut beta = alpha.clone();
                    beta[i] -= 1;
                    let row = t.index(mu, &beta, &merged);
                    let c = alpha[i] as i64;
                    out.push((row, col, if neg { -c } else { c }));
                }
            }
        }
    }
    out
}

/// Matrix of `δ` from slot `(k, j)` to slot `(k−1, j+1)`. When the target
/// is zero the matrix has no rows.
pub fn delta_matrix<F: Field>(s: &GradedSlot) -> Matrix<F> {
    let rows = s.delta_target().map_or(0, |t| t.dim());
    let mut m = Matrix::zeros(rows, s.dim());
    for (r, c, v) in delta_entries(s) {
        m.set(r, c, F::from_i64(v));
    }
    m
}

/// `δ` applied to each vector of `vs`, exploiting sparsity.
pub fn delta_apply<F: Field>(s: &GradedSlot, vs: &[Vec<F>]) -> Vec<Vec<F>> {
    let rows = s.delta_target().map_or(0, |t| t.dim());
    let entries = delta_entries(s);
    let mut by_col: Vec<Vec<(usize, i64)>> = vec![Vec::new(); s.dim()];
    for (r, c, v) in entries {
        by_col[c].push((r, v));
    }
    vs.iter()
        .map(|v| {
            let mut out = vec![F::zero(); rows];
            for (c, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for &(r, e) in &by_col[c] {
                    out[r] = out[r].plus(&x.times(&F::from_i64(e)));
                }
            }
            out
        })
        .collect()
}

/// Matrix of `p ↦ Σ_i v_i ∂_i p`, slot `(k, j)` to `(k−1, j)`.
pub fn directional_derivative<F: Field>(v: &[F], s: &GradedSlot) -> Matrix<F> {
    assert_eq!(v.len(), s.n);
    if s.k == 0 {
        return Matrix::zeros(0, s.dim());
    }
    let t = GradedSlot { k: s.k - 1, ..*s };
    let ext = s.ext_dim();
    let mut m: Matrix<F> = Matrix::zeros(t.dim(), s.dim());
    for mu in 0..s.nu {
        for (a, alpha) in monomials(s.n, s.k).iter().enumerate() {
            for i in 0..s.n {
                if alpha[i] == 0 || v[i].is_zero() {
                    continue;
                }
                let mut beta = alpha.clone();
                beta[i] -= 1;
                let b = monomial_rank(&beta);
                let c = v[i].times(&F::from_i64(alpha[i] as i64));
                for e in 0..ext {
                    let (r, col) = (t.flat(mu, b, e), s.flat(mu, a, e));
                    let old = m.get(r, col).clone();
                    m.set(r, col, old.plus(&c));
                }
            }
        }
    }
    m
}

/// Partial derivative along the `i`-th coordinate vector.
pub fn partial<F: Field>(i: usize, s: &GradedSlot) -> Matrix<F> {
    let mut v = vec![F::zero(); s.n];
    v[i] = F::one();
    directional_derivative(&v, s)
}

/// Product of polynomials of degrees `p` and `q` in `n` variables.
pub fn sym_multiply<F: Field>(n: usize, a: &[F], p: usize, b: &[F], q: usize) -> Vec<F> {
    let ma = monomials(n, p);
    let mb = monomials(n, q);
    assert_eq!(a.len(), ma.len());
    assert_eq!(b.len(), mb.len());
    let mut out = vec![F::zero(); sym_dim(n, p + q)];
    for (x, alpha) in a.iter().zip(&ma) {
        if x.is_zero() {
            continue;
        }
        for (y, beta) in b.iter().zip(&mb) {
            if y.is_zero() {
                continue;
            }
            let gamma: Vec<u32> = alpha.iter().zip(beta).map(|(s, t)| s + t).collect();
            let r = monomial_rank(&gamma);
            out[r] = out[r].plus(&x.times(y));
        }
    }
    out
}

/// Multiplies an element of `S^pT*⊗N` (ν blocks) by a polynomial of degree `q`.
pub fn multiply_tensor<F: Field>(n: usize, nu: usize, poly: &[F], q: usize, elem: &[F], p: usize) -> Vec<F> {
    let dp = sym_dim(n, p);
    let mut out = Vec::with_capacity(nu * sym_dim(n, p + q));
    for mu in 0..nu {
        out.extend(sym_multiply(n, &elem[mu * dp..(mu + 1) * dp], p, poly, q));
    }
    out
}

/// `v^k` for a covector `v` given in the `dx_i` basis.
pub fn covector_power<F: Field>(v: &[F], k: usize) -> Vec<F> {
    let n = v.len();
    let mut acc = vec![F::one()];
    for d in 0..k {
        acc = sym_multiply(n, &acc, d, v, 1);
    }
    acc
}

/// Matrix of polynomial substitution `x_i = Σ_b sub[i][b]·y_b` on
/// `S^kT*⊗N`, from `n = sub.rows()` variables to `sub.cols()` variables.
pub fn substitution_matrix<F: Field>(sub: &Matrix<F>, nu: usize, k: usize) -> Matrix<F> {
    let (n, m) = (sub.rows(), sub.cols());
    let src = monomials(n, k);
    let (ds, dt) = (src.len(), sym_dim(m, k));
    // images of the linear forms x_i as degree-1 polynomials in y
    let lin: Vec<Vec<F>> = (0..n).map(|i| sub.row(i).to_vec()).collect();
    let mut columns = Vec::with_capacity(ds);
    for alpha in &src {
        let mut acc = vec![F::one()];
        let mut deg = 0;
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                acc = sym_multiply(m, &acc, deg, &lin[i], 1);
                deg += 1;
            }
        }
        columns.push(acc);
    }
    let mut out = Matrix::zeros(nu * dt, nu * ds);
    for mu in 0..nu {
        for (c, col) in columns.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    out.set(mu * dt + r, mu * ds + c, x.clone());
                }
            }
        }
    }
    out
}

/// Matrix of `dx_I ↦ Σ_J det(sub[I, J]) dy_J` on `Λ^j`.
pub fn form_substitution_matrix<F: Field>(sub: &Matrix<F>, j: usize) -> Matrix<F> {
    let (n, m) = (sub.rows(), sub.cols());
    let src = subsets(n, j);
    let dst = subsets(m, j);
    Matrix::from_fn(dst.len(), src.len(), |r, c| {
        Matrix::from_fn(j, j, |a, b| sub.get(src[c][a], dst[r][b]).clone()).determinant()
    })
}

/// Substitution on the whole slot `S^kT*⊗N⊗Λ^jT*` (forms over all variables).
pub fn slot_substitution_matrix<F: Field>(sub: &Matrix<F>, nu: usize, k: usize, j: usize) -> Matrix<F> {
    let poly = substitution_matrix(sub, 1, k);
    let forms = form_substitution_matrix(sub, j);
    let (pr, pc) = (poly.rows(), poly.cols());
    let (fr, fc) = (forms.rows(), forms.cols());
    let mut out = Matrix::zeros(nu * pr * fr, nu * pc * fc);
    for mu in 0..nu {
        for a in 0..pr {
            for b in 0..pc {
                let x = poly.get(a, b);
                if x.is_zero() {
                    continue;
                }
                for e in 0..fr {
                    for f in 0..fc {
                        let y = forms.get(e, f);
                        if !y.is_zero() {
                            out.set((mu * pr + a) * fr + e, (mu * pc + b) * fc + f, x.times(y));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Restriction `S^kT*⊗N → S^kW*⊗N` where `W` is spanned by `w_basis`
/// (vectors of `T` in the `∂_i` basis).
pub fn restriction_matrix<F: Field>(w_basis: &[Vec<F>], n: usize, nu: usize, k: usize) -> Result<Matrix<F>> {
    let sub = basis_columns(w_basis, n)?;
    Ok(substitution_matrix(&sub, nu, k))
}

/// Restriction on `S^kT*⊗N⊗Λ^jT*`, pulling forms back to `W` too.
pub fn restriction_matrix_forms<F: Field>(w_basis: &[Vec<F>], n: usize, nu: usize, k: usize, j: usize) -> Result<Matrix<F>> {
    let sub = basis_columns(w_basis, n)?;
    Ok(slot_substitution_matrix(&sub, nu, k, j))
}

fn basis_columns<F: Field>(w_basis: &[Vec<F>], n: usize) -> Result<Matrix<F>> {
    if w_basis.iter().any(|w| w.len() != n) {
        return Err(Error::InvalidArgument(format!("vectors must have {n} components")));
    }
    let m = Matrix::from_columns(w_basis, n);
    if m.rank() < w_basis.len() {
        return Err(Error::DependentBasis);
    }
    Ok(m)
}

/// `V*·h`: the span of products of covectors in `vstar` with elements of
/// `h ⊂ S^{k−1}T*⊗N`.
pub fn subspace_product<F: Field>(vstar: &Subspace<F>, h: &Subspace<F>, n: usize, nu: usize, k: usize) -> Subspace<F> {
    assert!(k >= 1);
    assert_eq!(vstar.ambient(), n);
    assert_eq!(h.ambient(), nu * sym_dim(n, k - 1));
    let mut rows = Vec::new();
    for v in vstar.basis_vectors() {
        for p in h.basis_vectors() {
            rows.push(multiply_tensor(n, nu, &v, 1, &p, k - 1));
        }
    }
    Subspace::from_rows(nu * sym_dim(n, k), rows)
}

/// `S^kV*⊗N` for `V* ⊂ T*`.
pub fn sym_power_subspace<F: Field>(vstar: &Subspace<F>, nu: usize, k: usize) -> Subspace<F> {
    let n = vstar.ambient();
    let mut cur = Subspace::full(nu);
    for d in 1..=k {
        cur = subspace_product(vstar, &cur, n, nu, d);
    }
    cur
}

/// Vectors `p ⊗ dx_I` for every basis vector `p` of `h ⊂ S^kT*⊗N` and
/// every `I` of the slot; the tensor product `h⊗Λ^j`.
pub fn tensor_with_forms<F: Field>(h: &Subspace<F>, s: &GradedSlot) -> Vec<Vec<F>> {
    tensor_with_some_forms(h, s, |_| true)
}

/// As [`tensor_with_forms`], keeping only the index sets accepted by `keep`.
pub fn tensor_with_some_forms<F: Field>(h: &Subspace<F>, s: &GradedSlot, keep: impl Fn(&[usize]) -> bool) -> Vec<Vec<F>> {
    assert_eq!(h.ambient(), s.poly().dim());
    let sets = subsets(s.forms, s.j);
    let chosen: Vec<usize> = (0..sets.len()).filter(|&e| keep(&sets[e])).collect();
    let sd = s.sym_dim();
    let mut out = Vec::with_capacity(h.dim() * chosen.len());
    for p in h.basis_vectors() {
        for &e in &chosen {
            let mut v = vec![F::zero(); s.dim()];
            for mu in 0..s.nu {
                for a in 0..sd {
                    let x = &p[mu * sd + a];
                    if !x.is_zero() {
                        v[s.flat(mu, a, e)] = x.clone();
                    }
                }
            }
            out.push(v);
        }
    }
    out
}

/// Multiplies the polynomial part of an element of the slot by a linear
/// form, landing in the slot of degree `k + 1`.
pub fn multiply_slot<F: Field>(v: &[F], s: &GradedSlot, lin: &[F]) -> Vec<F> {
    assert_eq!(lin.len(), s.n);
    let t = GradedSlot { k: s.k + 1, ..*s };
    let ext = s.ext_dim();
    let mons = monomials(s.n, s.k);
    let mut out = vec![F::zero(); t.dim()];
    for (idx, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = idx % ext;
        let a = (idx / ext) % s.sym_dim();
        let mu = idx / (ext * s.sym_dim());
        for (i, l) in lin.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            let mut beta = mons[a].clone();
            beta[i] += 1;
            let r = t.flat(mu, monomial_rank(&beta), e);
            out[r] = out[r].plus(&c.times(l));
        }
    }
    out
}

/// Comultiplication `S^{a+b} → S^a ⊗ S^b`, `x^γ ↦ Σ C(γ, α) x^α ⊗ x^β`,
/// output flattened with the `S^a` index outermost.
pub fn comultiplication<F: Field>(n: usize, a: usize, b: usize) -> Matrix<F> {
    let src = monomials(n, a + b);
    let (da, db) = (sym_dim(n, a), sym_dim(n, b));
    let mut m = Matrix::zeros(da * db, src.len());
    for (c, gamma) in src.iter().enumerate() {
        for alpha in monomials(n, a) {
            if alpha.iter().zip(gamma).any(|(x, y)| x > y) {
                continue;
            }
            let beta: Vec<u32> = gamma.iter().zip(&alpha).map(|(g, x)| g - x).collect();
            let coef: usize = gamma.iter().zip(&alpha).map(|(&g, &x)| binom(g as usize, x as usize)).product();
            let r = monomial_rank(&alpha) * db + monomial_rank(&beta);
            m.set(r, c, F::from_i64(coef as i64));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kernel, Q};
    use proptest::prelude::*;

    fn q(v: i64) -> Q {
        Q::from(v)
    }

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn slot_dims() {
        assert_eq!(GradedSlot::new(2, 1, 2, 0).dim(), 3);
        assert_eq!(GradedSlot::new(3, 1, 2, 0).dim(), 6);
        assert_eq!(GradedSlot::new(2, 2, 1, 1).dim(), 8);
        assert_eq!(GradedSlot::new(3, 1, 0, 3).dim(), 1);
    }

    #[test]
    fn monomial_order_and_rank() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        for n in 1..=4 {
            for k in 0..=5 {
                let ms = monomials(n, k);
                assert_eq!(ms.len(), sym_dim(n, k));
                for (r, m) in ms.iter().enumerate() {
                    assert_eq!(monomial_rank(m), r);
                }
            }
        }
    }

    #[test]
    fn subset_order_and_rank() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        for f in 0..=5 {
            for j in 0..=f {
                let ss = subsets(f, j);
                assert_eq!(ss.len(), binom(f, j));
                for (r, s) in ss.iter().enumerate() {
                    assert_eq!(subset_rank(s, f), r);
                }
            }
        }
    }

    #[test]
    fn index_round_trip() {
        let s = GradedSlot::new(3, 2, 2, 2);
        for idx in 0..s.dim() {
            let (mu, a, set) = s.decode(idx);
            assert_eq!(s.index(mu, &a, &set), idx);
        }
    }

    #[test]
    fn delta_first_order() {
        let m: Matrix<Q> = delta_matrix(&GradedSlot::new(2, 1, 1, 0));
        assert_eq!(m, Matrix::identity(2));
    }

    #[test]
    fn delta_second_order() {
        // columns x², xy, y²; rows x⊗dx, x⊗dy, y⊗dx, y⊗dy
        let m: Matrix<Q> = delta_matrix(&GradedSlot::new(2, 1, 2, 0));
        let want = Matrix::from_rows(
            vec![qv(&[2, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 2])],
            3,
        );
        assert_eq!(m, want);
    }

    #[test]
    fn delta_sign_on_forms() {
        // δ(y ⊗ dx) = dy∧dx = −dx∧dy
        let s = GradedSlot::new(2, 1, 1, 1);
        let m: Matrix<Q> = delta_matrix(&s);
        let col = s.index(0, &[0, 1], &[0]);
        assert_eq!(m.column(col), qv(&[-1]));
        let col = s.index(0, &[1, 0], &[1]);
        assert_eq!(m.column(col), qv(&[1]));
    }

    #[test]
    fn delta_squared_vanishes() {
        for n in 1usize..=4 {
            for k in 2..=5 {
                for j in 0..n.saturating_sub(1) {
                    let s = GradedSlot::new(n, 2, k, j);
                    let t = s.delta_target().unwrap();
                    let a: Matrix<Q> = delta_matrix(&s);
                    let b: Matrix<Q> = delta_matrix(&t);
                    assert!(b.mul(&a).is_zero(), "n={n} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn delta_apply_matches_matrix() {
        let s = GradedSlot::with_forms(3, 2, 2, 3, 1);
        let m: Matrix<Q> = delta_matrix(&s);
        let v: Vec<Q> = (0..s.dim()).map(|i| q(i as i64 % 5 - 2)).collect();
        assert_eq!(delta_apply(&s, &[v.clone()])[0], m.apply(&v));
    }

    #[test]
    fn poincare_lemma() {
        // the free complex is exact except in degree (0, 0)
        for n in 1..=3 {
            for k in 1..=5 {
                for j in 0..=n {
                    let s = GradedSlot::new(n, 1, k, j);
                    let out: Matrix<Q> = delta_matrix(&s);
                    let rank_out = out.rank();
                    let rank_in = if j == 0 {
                        0
                    } else {
                        delta_matrix::<Q>(&GradedSlot::new(n, 1, k + 1, j - 1)).rank()
                    };
                    assert_eq!(s.dim() - rank_out, rank_in, "n={n} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let s = GradedSlot::new(2, 1, 2, 0);
        let dx: Matrix<Q> = partial(0, &s);
        let dy: Matrix<Q> = partial(1, &s);
        assert_eq!(dx.apply(&qv(&[1, 0, 0])), qv(&[2, 0]));
        assert_eq!(dy.apply(&qv(&[1, 0, 0])), qv(&[0, 0]));
    }

    #[test]
    fn products() {
        assert_eq!(sym_multiply(2, &qv(&[1, 0]), 1, &qv(&[0, 1]), 1), qv(&[0, 1, 0]));
        assert_eq!(sym_multiply(2, &qv(&[1, 1]), 1, &qv(&[1, -1]), 1), qv(&[1, 0, -1]));
        assert_eq!(sym_multiply(2, &qv(&[1, 0]), 1, &qv(&[1, 0]), 1), qv(&[1, 0, 0]));
        assert_eq!(covector_power(&qv(&[1, 1]), 2), qv(&[1, 2, 1]));
    }

    #[test]
    fn restriction_examples() {
        let m: Matrix<Q> = restriction_matrix(&[qv(&[1, 0])], 2, 1, 2).unwrap();
        assert_eq!(m, Matrix::from_rows(vec![qv(&[1, 0, 0])], 3));
        let m: Matrix<Q> = restriction_matrix(&[qv(&[1, 1])], 2, 1, 2).unwrap();
        assert_eq!(m, Matrix::from_rows(vec![qv(&[1, 1, 1])], 3));
        let id: Matrix<Q> = restriction_matrix(&[qv(&[1, 0]), qv(&[0, 1])], 2, 1, 3).unwrap();
        assert_eq!(id, Matrix::identity(4));
        assert_eq!(
            restriction_matrix::<Q>(&[qv(&[1, 2]), qv(&[2, 4])], 2, 1, 1).unwrap_err(),
            Error::DependentBasis
        );
    }

    #[test]
    fn restriction_with_forms() {
        // u-component y⊗dx − x⊗dy style element restricted to W = ⟨∂y⟩:
        // the dx part dies, −x⊗dy keeps its x-coefficient at y = t, x = 0.
        let s = GradedSlot::new(2, 2, 0, 1);
        // ∂_y⊗dx − ∂_x⊗dy with N = ⟨∂_x, ∂_y⟩, as an element of N⊗T*
        let mut v = vec![q(0); s.dim()];
        v[s.index(1, &[0, 0], &[0])] = q(1);
        v[s.index(0, &[0, 0], &[1])] = q(-1);
        let r: Matrix<Q> = restriction_matrix_forms(&[qv(&[0, 1])], 2, 2, 0, 1).unwrap();
        // target N⊗W*: index (mu, dt)
        assert_eq!(r.apply(&v), qv(&[-1, 0]));
    }

    #[test]
    fn restriction_naturality() {
        let w = vec![qv(&[1, 2, 0]), qv(&[0, -1, 3])];
        for k in 1..=4 {
            for j in 0..2 {
                let top: Matrix<Q> = restriction_matrix_forms(&w, 3, 1, k, j).unwrap();
                let bottom: Matrix<Q> = restriction_matrix_forms(&w, 3, 1, k - 1, j + 1).unwrap();
                let d: Matrix<Q> = delta_matrix(&GradedSlot::new(3, 1, k, j));
                let dw: Matrix<Q> = delta_matrix(&GradedSlot::new(2, 1, k, j));
                assert_eq!(bottom.mul(&d), dw.mul(&top), "k={k} j={j}");
            }
        }
    }

    #[test]
    fn product_subspace_examples() {
        let dx = Subspace::from_rows(2, vec![qv(&[1, 0])]);
        let p = subspace_product(&dx, &Subspace::full(2), 2, 1, 2);
        assert_eq!(p, Subspace::from_rows(3, vec![qv(&[1, 0, 0]), qv(&[0, 1, 0])]));
        let all = subspace_product(&Subspace::<Q>::full(3), &Subspace::full(6), 3, 1, 3);
        assert!(all.is_full());
        assert!(subspace_product(&Subspace::zero(2), &Subspace::<Q>::full(2), 2, 1, 2).is_zero());
    }

    #[test]
    fn comultiplication_is_injective() {
        for n in 1..=3 {
            for a in 0..=3 {
                for b in 0..=3 {
                    let m: Matrix<Q> = comultiplication(n, a, b);
                    assert!(kernel(&m).is_zero());
                }
            }
        }
    }

    fn small() -> impl Strategy<Value = i64> {
        -5i64..=5
    }

    proptest! {
        #[test]
        fn rescaling_keeps_delta_rank(scales in proptest::collection::vec(1i64..7, 10), k in 1usize..4) {
            let s = GradedSlot::new(3, 1, k, 0);
            let d: Matrix<Q> = delta_matrix(&s);
            let dim = s.dim();
            let scaled = Matrix::from_fn(d.rows(), dim, |r, c| d.get(r, c).times(&q(scales[c % scales.len()])));
            prop_assert_eq!(scaled.rank(), d.rank());
        }

        #[test]
        fn mixed_derivatives_commute(v in proptest::collection::vec(small(), 2), w in proptest::collection::vec(small(), 2)) {
            let (v, w) = (qv(&v), qv(&w));
            let s3 = GradedSlot::new(2, 1, 3, 0);
            let s2 = GradedSlot::new(2, 1, 2, 0);
            let a = directional_derivative(&v, &s2).mul(&directional_derivative(&w, &s3));
            let b = directional_derivative(&w, &s2).mul(&directional_derivative(&v, &s3));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn derivative_is_contraction_of_delta(v in proptest::collection::vec(small(), 3), k in 1usize..4) {
            let v = qv(&v);
            let s = GradedSlot::new(3, 1, k, 0);
            let d: Matrix<Q> = delta_matrix(&s);
            // contracting the dx_i slot with v
            let t = s.delta_target().unwrap();
            let contract = Matrix::from_fn(t.sym_dim(), t.dim(), |r, c| if c / 3 == r { v[c % 3].clone() } else { q(0) });
            prop_assert_eq!(contract.mul(&d), directional_derivative(&v, &s));
        }
    }
}
