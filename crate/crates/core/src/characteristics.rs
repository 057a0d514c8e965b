//! Characteristic covectors and (non-)characteristic subspaces of `T*`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{covector_power, subspace_product, sym_dim, sym_power_subspace};
use crate::cohomology::is_involutive;
use crate::error::{Error, Result};
use crate::linalg::{kernel, Field, Gaussian, Matrix, Subspace, Q};
use crate::poly::{charpoly, gaussian_roots, Poly};
use crate::system::SymbolicSystem;

/// `v^k ⊗ e_μ` for each `μ`, as columns of an `(ν·dim S^k) × ν` matrix.
fn power_columns<F: Field>(v: &[F], nu: usize, k: usize) -> Vec<Vec<F>> {
    let pk = covector_power(v, k);
    let sd = pk.len();
    (0..nu)
        .map(|mu| {
            let mut c = vec![F::zero(); nu * sd];
            c[mu * sd..(mu + 1) * sd].clone_from_slice(&pk);
            c
        })
        .collect()
}

/// Nonzero `w ∈ N` with `v^k⊗w ∈ h`, for `h ⊂ S^kT*⊗N`.
pub fn power_witness<F: Field>(h: &Subspace<F>, v: &[F], nu: usize, k: usize) -> Option<Vec<F>> {
    let cols = power_columns(v, nu, k);
    let m = h.annihilator().mul(&Matrix::from_columns(&cols, h.ambient()));
    kernel(&m).basis_vectors().into_iter().next()
}

/// The degree used for characteristic tests: `r_max`, or `1` for a system
/// without orders (every covector is then characteristic).
fn char_degree<F: Field>(g: &SymbolicSystem<F>) -> usize {
    g.order_profile().r_max.unwrap_or(1)
}

/// Whether `v` is characteristic: `v^k⊗w ∈ g_k` for some `w ≠ 0`, with
/// `k = r_max`. Returns the witness `w`.
pub fn is_char_covector<F: Field>(g: &SymbolicSystem<F>, v: &[F]) -> Result<Option<Vec<F>>> {
    if v.len() != g.n() {
        return Err(Error::InvalidArgument(format!("covector needs {} entries", g.n())));
    }
    if v.iter().all(Field::is_zero) {
        return Err(Error::ZeroCovector);
    }
    let k = char_degree(g);
    let g = if g.cap() < k { g.extended(k)? } else { g.clone() };
    Ok(power_witness(g.level(k)?, v, g.nu(), k))
}

/// `g_k ∩ V*·S^{k−1}T*⊗N`.
pub fn weak_part<F: Field>(g: &SymbolicSystem<F>, vstar: &Subspace<F>, k: usize) -> Result<Subspace<F>> {
    let level = g.level(k)?;
    if k == 0 {
        return Ok(Subspace::zero(level.ambient()));
    }
    let full = Subspace::full(g.nu() * sym_dim(g.n(), k - 1));
    level.intersect(&subspace_product(vstar, &full, g.n(), g.nu(), k))
}

/// `g_k ∩ S^kV*⊗N`.
pub fn strong_part<F: Field>(g: &SymbolicSystem<F>, vstar: &Subspace<F>, k: usize) -> Result<Subspace<F>> {
    g.level(k)?.intersect(&sym_power_subspace(vstar, g.nu(), k))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharReport {
    pub weakly_char: bool,
    pub strongly_char: bool,
    pub weakly_nonchar: bool,
    pub strongly_nonchar: bool,
    /// Degrees at which the char and non-char tests were made.
    pub char_degree: Option<usize>,
    pub nonchar_degree: Option<usize>,
    /// Elements of `g_k` exhibiting each positive characteristic flag.
    pub weak_witness: Option<Vec<String>>,
    pub strong_witness: Option<Vec<String>>,
    /// `g_{r_min} → g̃_{r_min}` is injective.
    pub restriction_injective: bool,
}

fn strings<F: Field>(v: &[F]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn first<F: Field>(s: &Subspace<F>) -> Option<Vec<F>> {
    s.basis_vectors().into_iter().next()
}

/// The four predicates of `V*` for `g`: characteristicity at `r_max`,
/// non-characteristicity at `r_min`. For a system without orders the
/// characteristic flags hold for every nonzero `V*` (tested at degree 1)
/// and the non-characteristic flags hold vacuously.
pub fn char_report<F: Field>(g: &SymbolicSystem<F>, vstar: &Subspace<F>) -> Result<CharReport> {
    if vstar.ambient() != g.n() {
        return Err(Error::AmbientMismatch { left: vstar.ambient(), right: g.n() });
    }
    let p = g.order_profile();
    let kc = p.r_max.unwrap_or(1);
    let g = if g.cap() < kc { g.extended(kc)? } else { g.clone() };
    let weak = weak_part(&g, vstar, kc)?;
    let strong = strong_part(&g, vstar, kc)?;
    let (weakly_nonchar, strongly_nonchar, restriction_injective) = match p.r_min {
        None => (true, true, true),
        Some(kn) => {
            let sn = weak_part(&g, vstar, kn)?.is_zero();
            let wn = strong_part(&g, vstar, kn)?.is_zero();
            (wn, sn, restriction_injective(&g, vstar, kn)?)
        }
    };
    Ok(CharReport {
        weakly_char: !weak.is_zero(),
        strongly_char: !strong.is_zero(),
        weakly_nonchar,
        strongly_nonchar,
        char_degree: p.r_max,
        nonchar_degree: p.r_min,
        weak_witness: first(&weak).map(|w| strings(&w)),
        strong_witness: first(&strong).map(|w| strings(&w)),
        restriction_injective,
    })
}

/// Whether restriction to `W = ann V*` is injective on `g_k`.
pub fn restriction_injective<F: Field>(g: &SymbolicSystem<F>, vstar: &Subspace<F>, k: usize) -> Result<bool> {
    let w = kernel(vstar.basis()).basis_vectors();
    let level = g.level(k)?;
    if w.is_empty() {
        return Ok(k == 0 || level.is_zero());
    }
    let r = crate::basis::restriction_matrix(&w, g.n(), g.nu(), k)?;
    Ok(level.image(&r).dim() == level.dim())
}

/// `V*` strongly non-characteristic: `g_{r_min} ∩ V*·S^{r_min−1}T*⊗N = 0`.
pub fn strongly_noncharacteristic<F: Field>(g: &SymbolicSystem<F>, vstar: &Subspace<F>) -> Result<bool> {
    match g.order_profile().r_min {
        None => Ok(true),
        Some(k) => Ok(weak_part(g, vstar, k)?.is_zero()),
    }
}

/// A strongly non-characteristic subspace of the requested dimension:
/// coordinate subspaces first, then `tries` seeded random ones.
pub fn find_strongly_noncharacteristic<F: Field>(
    g: &SymbolicSystem<F>,
    dim: usize,
    tries: usize,
    seed: u64,
) -> Result<Option<Subspace<F>>> {
    let n = g.n();
    if dim > n {
        return Err(Error::InvalidArgument(format!("dimension {dim} exceeds {n}")));
    }
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != dim {
            continue;
        }
        let rows = (0..n).filter(|c| mask >> c & 1 == 1).map(|c| unit(n, c)).collect();
        let v = Subspace::from_rows(n, rows);
        if strongly_noncharacteristic(g, &v)? {
            return Ok(Some(v));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let rows = (0..dim).map(|_| (0..n).map(|_| F::from_i64(rng.gen_range(-10..=10))).collect()).collect();
        let v = Subspace::from_rows(n, rows);
        if v.dim() == dim && strongly_noncharacteristic(g, &v)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn unit<F: Field>(n: usize, c: usize) -> Vec<F> {
    let mut e = vec![F::zero(); n];
    e[c] = F::one();
    e
}

/// Renders a covector as `a*dx + b*dy`.
pub fn format_covector<F: Field>(v: &[F], vars: &[String]) -> String {
    format_entries(&strings(v), vars)
}

/// As [`format_covector`], from already rendered coefficients.
pub fn format_entries(entries: &[String], vars: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (s, name) in entries.iter().zip(vars) {
        if s == "0" {
            continue;
        }
        let term = if s == "1" {
            format!("d{name}")
        } else if s == "-1" {
            format!("-d{name}")
        } else if s == "i" || s == "-i" {
            format!("{s}*d{name}")
        } else if s[1..].contains(['+', '-']) {
            format!("({s})*d{name}")
        } else {
            format!("{s}*d{name}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilResult {
    /// Some covector of the pencil is characteristic over ℂ.
    pub exists: bool,
    /// Every covector of the pencil is characteristic.
    pub all: bool,
    /// Degree of the gcd of the maximal minors (as a binary form).
    pub gcd_degree: usize,
    pub gcd: String,
    /// A characteristic covector with entries in the working field, with its witness.
    #[serde(skip)]
    pub covector: Option<(Vec<Gaussian>, Vec<Gaussian>)>,
    pub covector_text: Option<Vec<String>>,
}

/// All `ν×ν` minors of a matrix of polynomials.
fn maximal_minors(rows: &[Vec<Poly<Gaussian>>], nu: usize) -> Vec<Poly<Gaussian>> {
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(nu);
    fn rec(rows: &[Vec<Poly<Gaussian>>], nu: usize, start: usize, pick: &mut Vec<usize>, out: &mut Vec<Poly<Gaussian>>) {
        if pick.len() == nu {
            let m: Vec<Vec<Poly<Gaussian>>> = pick.iter().map(|&r| rows[r].clone()).collect();
            out.push(det(&m));
            return;
        }
        for r in start..rows.len() {
            pick.push(r);
            rec(rows, nu, r + 1, pick, out);
            pick.pop();
        }
    }
    rec(rows, nu, 0, &mut pick, &mut out);
    out
}

/// Determinant of a small square polynomial matrix by cofactor expansion.
fn det(m: &[Vec<Poly<Gaussian>>]) -> Poly<Gaussian> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly<Gaussian>>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect()).collect();
        let term = m[0][c].mul(&det(&minor));
        acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Coefficients of `(a + τ b)^k` as polynomials in `τ`, one per monomial
/// of `S^kT*`.
fn pencil_power(a: &[Gaussian], b: &[Gaussian], k: usize) -> Vec<Poly<Gaussian>> {
    let fact = |x: u32| (1..=x as i64).product::<i64>();
    crate::basis::monomials(a.len(), k)
        .iter()
        .map(|alpha| {
            let mult = fact(k as u32) / alpha.iter().map(|&e| fact(e)).product::<i64>();
            let mut p = Poly::constant(Gaussian::from_i64(mult));
            for (i, &e) in alpha.iter().enumerate() {
                let lin = Poly::new(vec![a[i].clone(), b[i].clone()]);
                for _ in 0..e {
                    p = p.mul(&lin);
                }
            }
            p
        })
        .collect()
}

/// Searches the pencil `a + τ b` (plus `b` itself) for characteristic
/// covectors of `g` at degree `r_max`. Existence over ℂ is decided by the
/// degree of the gcd of the maximal minors; explicit covectors are reported
/// when a root lies in ℚ(i) (or in ℚ when `complex` is false).
pub fn pencil_char_search(g: &SymbolicSystem<Q>, a: &[Q], b: &[Q], complex: bool) -> Result<PencilResult> {
    let n = g.n();
    if a.len() != n || b.len() != n {
        return Err(Error::InvalidArgument("pencil covectors have the wrong length".into()));
    }
    let gg: SymbolicSystem<Gaussian> = g.lift(|q| Gaussian::from(q.clone()));
    let k = char_degree(g);
    let gg = if gg.cap() < k { gg.extended(k)? } else { gg };
    let level = gg.level(k)?;
    let nu = g.nu();
    let ga: Vec<Gaussian> = a.iter().map(|q| Gaussian::from(q.clone())).collect();
    let gb: Vec<Gaussian> = b.iter().map(|q| Gaussian::from(q.clone())).collect();
    let ann = level.annihilator();
    let pk = pencil_power(&ga, &gb, k);
    let sd = pk.len();
    // A(τ): rows of ann(g_k) against v^k⊗e_μ
    let rows: Vec<Vec<Poly<Gaussian>>> = (0..ann.rows())
        .map(|r| {
            (0..nu)
                .map(|mu| {
                    let mut acc = Poly::zero();
                    for s in 0..sd {
                        let c = ann.get(r, mu * sd + s);
                        if !c.is_zero() {
                            acc = acc.add(&pk[s].scale(c));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let total = k * nu;
    let check = |v: &[Gaussian]| -> Option<(Vec<Gaussian>, Vec<Gaussian>)> {
        if v.iter().all(Field::is_zero) {
            return None;
        }
        power_witness(level, v, nu, k).map(|w| (v.to_vec(), w))
    };
    let text = |c: &Option<(Vec<Gaussian>, Vec<Gaussian>)>| c.as_ref().map(|(v, _)| strings(v));
    if rows.len() < nu {
        let covector = check(&ga);
        return Ok(PencilResult {
            exists: true,
            all: true,
            gcd_degree: total,
            gcd: "0".into(),
            covector_text: text(&covector),
            covector,
        });
    }
    let minors: Vec<Poly<Gaussian>> = maximal_minors(&rows, nu).into_iter().filter(|p| !p.is_zero()).collect();
    if minors.is_empty() {
        let covector = check(&ga);
        return Ok(PencilResult {
            exists: true,
            all: true,
            gcd_degree: total,
            gcd: "0".into(),
            covector_text: text(&covector),
            covector,
        });
    }
    // homogeneous degree is k·ν; a drop in τ-degree is a factor of s
    let s_power = minors.iter().map(|p| total - p.degree().unwrap()).min().unwrap();
    let mut gcd = Poly::zero();
    for p in &minors {
        gcd = gcd.gcd(p);
    }
    let tau_degree = gcd.degree().unwrap_or(0);
    let mut covector = None;
    let mut candidates: Vec<Vec<Gaussian>> = gaussian_roots(&gcd)
        .into_iter()
        .filter(|r| complex || r.is_real())
        .map(|r| ga.iter().zip(&gb).map(|(x, y)| x.plus(&r.times(y))).collect())
        .collect();
    if s_power > 0 {
        candidates.push(gb.clone());
    }
    for c in candidates {
        if let Some(found) = check(&c) {
            covector = Some(found);
            break;
        }
    }
    let mut gcd_text = gcd.display("t");
    if s_power > 0 {
        gcd_text = format!("s^{s_power}*({gcd_text})");
    }
    Ok(PencilResult {
        exists: tau_degree + s_power >= 1,
        all: false,
        gcd_degree: tau_degree + s_power,
        gcd: gcd_text,
        covector_text: text(&covector),
        covector,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm2Report {
    pub involutive: bool,
    pub strongly_char: bool,
    pub exists_char_covector: bool,
    pub covector: Option<Vec<String>>,
    pub equivalence_holds: bool,
    /// Only sampled two-dimensional sub-pencils were examined.
    pub partial: bool,
    pub pencils_tried: usize,
    pub seed: u64,
}

/// Compares strong characteristicity of `V*` with the existence of a
/// characteristic covector in `V*`. Exact for `dim V* ≤ 2`; sampled
/// sub-pencils otherwise.
pub fn verify_thm2(g: &SymbolicSystem<Q>, vstar: &Subspace<Q>, complex: bool, seed: u64) -> Result<Thm2Report> {
    let involutive = is_involutive(g, seed)?.involutive;
    let strongly_char = char_report(g, vstar)?.strongly_char;
    let basis = vstar.basis_vectors();
    let n = g.n();
    let (mut exists, mut covector, mut partial, mut tried) = (false, None, false, 0);
    match basis.len() {
        0 => {}
        1 => {
            tried = 1;
            let gl: SymbolicSystem<Gaussian> = g.lift(|q| Gaussian::from(q.clone()));
            let v: Vec<Gaussian> = basis[0].iter().map(|q| Gaussian::from(q.clone())).collect();
            if is_char_covector(&gl, &v)?.is_some() {
                exists = true;
                covector = Some(strings(&basis[0]));
            }
        }
        2 => {
            tried = 1;
            let r = pencil_char_search(g, &basis[0], &basis[1], complex)?;
            exists = r.exists;
            covector = r.covector_text;
        }
        d => {
            partial = true;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20 {
                let comb = |rng: &mut ChaCha8Rng| -> Vec<Q> {
                    let cs: Vec<i64> = (0..d).map(|_| rng.gen_range(-10..=10)).collect();
                    (0..n).map(|i| basis.iter().zip(&cs).fold(Q::zero(), |acc, (b, &c)| acc.plus(&b[i].times(&Q::from(c))))).collect()
                };
                let (a, b) = (comb(&mut rng), comb(&mut rng));
                if Subspace::from_rows(n, vec![a.clone(), b.clone()]).dim() < 2 {
                    continue;
                }
                tried += 1;
                let r = pencil_char_search(g, &a, &b, complex)?;
                if r.exists {
                    exists = true;
                    covector = r.covector_text;
                    break;
                }
            }
        }
    }
    Ok(Thm2Report {
        involutive,
        strongly_char,
        exists_char_covector: exists,
        covector,
        equivalence_holds: strongly_char == exists,
        partial,
        pencils_tried: tried,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum BSearch {
    Found {
        covector: Vec<String>,
        witness: Vec<String>,
        /// `ω` was itself characteristic.
        immediate: bool,
        v0_dim: usize,
        n_prime_dim: usize,
        #[serde(skip)]
        exact: Vec<Gaussian>,
    },
    Failure {
        reason: String,
        minimal_polynomial: Option<String>,
        v0_dim: usize,
        n_prime_dim: usize,
    },
}

/// Coordinates of `v` in the RREF basis of `s` (read off at the pivots).
fn coords<F: Field>(s: &Subspace<F>, v: &[F]) -> Vec<F> {
    s.pivots().iter().map(|&p| v[p].clone()).collect()
}

/// Constructive search for a characteristic covector in a strongly
/// characteristic `V*` of a first-order system: a maximal
/// non-characteristic `V₀*`, a covector `ω ∈ V* ∖ V₀*`, the space
/// `N′ = {ξ : ω⊗ξ ∈ V₀*⊗N + g_1}`, the operators `λ` on it, and a common
/// eigenvector giving the characteristic covector `ω − p`.
pub fn guillemin_b_search(g: &SymbolicSystem<Q>, vstar: &Subspace<Q>, seed: u64) -> Result<BSearch> {
    let p = g.order_profile();
    if p.orders != vec![1] {
        return Err(Error::InvalidArgument("the search needs a pure first-order system".into()));
    }
    let (n, nu) = (g.n(), g.nu());
    let gl: SymbolicSystem<Gaussian> = g.lift(|q| Gaussian::from(q.clone()));
    let g1 = gl.level(1)?.clone();
    let vs: Subspace<Gaussian> = vstar.map_field(|q| Gaussian::from(q.clone()));
    let tensor_n = |v: &Subspace<Gaussian>| subspace_product(v, &Subspace::full(nu), n, nu, 1);
    if g1.intersect(&tensor_n(&vs))?.is_zero() {
        return Err(Error::InvalidArgument("V* is not strongly characteristic".into()));
    }
    // greedy maximal V₀*: basis vectors of V*, then seeded combinations
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = vs.basis_vectors();
    let mut pool: Vec<Vec<Gaussian>> = basis.clone();
    for _ in 0..4 * basis.len() {
        let cs: Vec<i64> = basis.iter().map(|_| rng.gen_range(-10..=10)).collect();
        pool.push((0..n).map(|i| basis.iter().zip(&cs).fold(Gaussian::zero(), |a, (b, &c)| a.plus(&b[i].times(&Gaussian::from_i64(c))))).collect());
    }
    let mut v0 = Subspace::<Gaussian>::zero(n);
    for c in &pool {
        if v0.contains_vector(c) {
            continue;
        }
        let cand = v0.sum(&Subspace::from_rows(n, vec![c.clone()]))?;
        if g1.intersect(&tensor_n(&cand))?.is_zero() {
            v0 = cand;
        }
    }
    let omega = basis.iter().find(|b| !v0.contains_vector(b)).cloned().expect("V₀* is a proper subspace");
    let v0_dim = v0.dim();
    if let Some(w) = power_witness(&g1, &omega, nu, 1) {
        return Ok(BSearch::Found {
            covector: strings(&omega),
            witness: strings(&w),
            immediate: true,
            v0_dim,
            n_prime_dim: 0,
            exact: omega,
        });
    }
    // ω⊗ξ as a map N → T*⊗N
    let omega_map = Matrix::from_columns(&power_columns(&omega, nu, 1), n * nu);
    let v0n = tensor_n(&v0);
    let target = v0n.sum(&g1)?;
    let nprime = target.preimage(&omega_map);
    let n_prime_dim = nprime.dim();
    let fail = |reason: &str, mp: Option<String>| BSearch::Failure { reason: reason.into(), minimal_polynomial: mp, v0_dim, n_prime_dim };
    if n_prime_dim == 0 {
        return Ok(fail("N' is zero", None));
    }
    // split ω⊗ξ = λ(ξ) + γ with λ(ξ) ∈ V₀*⊗N, γ ∈ g_1
    let v0b = v0.basis_vectors();
    let gb = g1.basis_vectors();
    let mut cols: Vec<Vec<Gaussian>> = Vec::new();
    for p in &v0b {
        cols.extend(power_columns(p, nu, 1));
    }
    cols.extend(gb.iter().cloned());
    let big = Matrix::from_columns(&cols, n * nu);
    let d = v0b.len();
    // operators L_a on N′, one per basis covector of V₀*
    let mut ops: Vec<Matrix<Gaussian>> = vec![Matrix::zeros(n_prime_dim, n_prime_dim); d];
    for (col, xi) in nprime.basis_vectors().iter().enumerate() {
        let rhs = omega_map.apply(xi);
        let sol = solve(&big, &rhs).ok_or_else(|| Error::InvalidArgument("inconsistent decomposition".into()))?;
        for a in 0..d {
            let la: Vec<Gaussian> = sol[a * nu..(a + 1) * nu].to_vec();
            if !nprime.contains_vector(&la) {
                return Ok(fail("λ does not map N' into V₀*⊗N'", None));
            }
            for (r, c) in coords(&nprime, &la).into_iter().enumerate() {
                ops[a].set(r, col, c);
            }
        }
    }
    // common eigenvector: successive eigenspaces inside invariant subspaces
    let mut space = Subspace::<Gaussian>::full(n_prime_dim);
    for op in &ops {
        let b = space.basis_vectors();
        let restricted = Matrix::from_fn(b.len(), b.len(), |r, c| coords(&space, &op.apply(&b[c]))[r].clone());
        let cp = charpoly(&restricted);
        let roots = gaussian_roots(&cp);
        let Some(theta) = roots.first() else {
            return Ok(fail("no eigenvalue in Q(i)", Some(cp.squarefree().display("x"))));
        };
        let shifted = Matrix::from_fn(n_prime_dim, n_prime_dim, |r, c| {
            let base = op.get(r, c).clone();
            if r == c {
                base.minus(theta)
            } else {
                base
            }
        });
        space = space.intersect(&kernel(&shifted))?;
        if space.is_zero() {
            return Ok(fail("operators have no common eigenvector", None));
        }
    }
    let coeff = space.basis_vectors().remove(0);
    let xi0_coords = coeff;
    let mut pcov = vec![Gaussian::zero(); n];
    for (a, op) in ops.iter().enumerate() {
        let image = op.apply(&xi0_coords);
        let lambda = ratio(&image, &xi0_coords).expect("common eigenvector");
        for i in 0..n {
            pcov[i] = pcov[i].plus(&lambda.times(&v0b[a][i]));
        }
    }
    let cov: Vec<Gaussian> = omega.iter().zip(&pcov).map(|(o, p)| o.minus(p)).collect();
    match power_witness(&g1, &cov, nu, 1) {
        Some(w) => Ok(BSearch::Found { covector: strings(&cov), witness: strings(&w), immediate: false, v0_dim, n_prime_dim, exact: cov }),
        None => Ok(fail("candidate failed the exact membership check", None)),
    }
}

/// `c` with `a = c·b`, for `b ≠ 0`.
fn ratio(a: &[Gaussian], b: &[Gaussian]) -> Option<Gaussian> {
    let i = b.iter().position(|x| !x.is_zero())?;
    Some(a[i].over(&b[i]))
}

/// One solution of `m·x = rhs`.
fn solve<F: Field>(m: &Matrix<F>, rhs: &[F]) -> Option<Vec<F>> {
    let cols = m.cols();
    let aug = Matrix::from_fn(m.rows(), cols + 1, |r, c| if c < cols { m.get(r, c).clone() } else { rhs[r].clone() });
    let rr = aug.rref();
    let mut x = vec![F::zero(); cols];
    for (row, &p) in rr.pivots.iter().enumerate() {
        if p == cols {
            return None;
        }
        x[p] = rr.basis.get(row, cols).clone();
    }
    Some(x)
}
