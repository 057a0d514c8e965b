use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{monomials, partial, substitution_matrix, GradedSlot};
use crate::error::Result;
use crate::linalg::{Field, Matrix, Subspace};
use crate::system::{prolong, SymbolicSystem};

use super::{cohomology_table, default_i_max, reaching, DeltaRanks};

/// Random bases tried before a failing Cartan test is attributed to the
/// basis rather than the system.
pub const RETRIES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CartanVerdict {
    InvolutiveAtK,
    NotInvolutiveAtK,
    BasisDegenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CartanReport {
    pub k: usize,
    pub verdict: CartanVerdict,
    pub seed: u64,
    pub attempts: usize,
    /// First `i` (0-based) whose map failed on the last basis tried.
    pub failing_index: Option<usize>,
    /// Columns `v_1,…,v_n` of the last basis tried, as strings.
    pub basis: Vec<Vec<String>>,
}

/// Seeded random invertible integer matrix, entries in `[−10, 10]`.
pub(crate) fn random_basis<F: Field>(n: usize, rng: &mut ChaCha8Rng) -> Matrix<F> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| F::from_i64(rng.gen_range(-10..=10)));
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// Elements of `h ⊂ S^kT*⊗N` involving only `x_from, …, x_{n−1}`.
fn tail_part<F: Field>(h: &Subspace<F>, n: usize, nu: usize, k: usize, from: usize) -> Subspace<F> {
    if from == 0 {
        return h.clone();
    }
    let keep_mon: Vec<bool> = monomials(n, k).iter().map(|a| a[..from].iter().all(|&e| e == 0)).collect();
    let keep: Vec<bool> = (0..nu).flat_map(|_| keep_mon.iter().copied()).collect();
    h.restrict_to_coordinates(&keep)
}

/// First `i` at which `∂_i : upper ∩ S^{k+1}⟨x_i..⟩ → lower ∩ S^k⟨x_i..⟩` is
/// not onto, skipping indices for which `skip(i)` holds.
pub(crate) fn first_non_surjective<F: Field>(
    upper: &Subspace<F>,
    lower: &Subspace<F>,
    n: usize,
    nu: usize,
    k: usize,
    skip: impl Fn(usize) -> bool,
) -> Option<usize> {
    let slot = GradedSlot::new(n, nu, k + 1, 0);
    (0..n).filter(|&i| !skip(i)).find(|&i| {
        let a = tail_part(upper, n, nu, k + 1, i);
        let b = tail_part(lower, n, nu, k, i);
        let img = a.image(&partial(i, &slot));
        img.dim() != b.dim()
    })
}

fn level_in<F: Field>(h: &Subspace<F>, sub: &Matrix<F>, nu: usize, k: usize) -> Subspace<F> {
    h.image(&substitution_matrix(sub, nu, k))
}

fn basis_strings<F: Field>(m: &Matrix<F>) -> Vec<Vec<String>> {
    (0..m.cols()).map(|c| m.column(c).iter().map(|x| x.to_string()).collect()).collect()
}

/// Cartan's test for `g_k`: surjectivity of `δ_{v_i}` from
/// `g_k^{(1)} ∩ S^{k+1}ann⟨v_1..v_{i−1}⟩⊗N` onto `g_k ∩ S^k ann⟨v_1..v_{i−1}⟩⊗N`.
/// With no basis given, seeded random bases are tried.
pub fn cartan_test<F: Field>(g: &SymbolicSystem<F>, k: usize, basis: Option<&Matrix<F>>, seed: u64) -> Result<CartanReport> {
    let (n, nu) = (g.n(), g.nu());
    let gk = g.level(k)?.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tries = if basis.is_some() { 1 } else { RETRIES };
    let mut last = None;
    for attempt in 1..=tries {
        let v = basis.cloned().unwrap_or_else(|| random_basis(n, &mut rng));
        let lower = level_in(&gk, &v, nu, k);
        let upper = prolong(&lower, n, nu, k);
        let fail = first_non_surjective(&upper, &lower, n, nu, k, |_| false);
        if fail.is_none() {
            return Ok(CartanReport {
                k,
                verdict: CartanVerdict::InvolutiveAtK,
                seed,
                attempts: attempt,
                failing_index: None,
                basis: basis_strings(&v),
            });
        }
        last = Some((v, fail));
    }
    let (v, fail) = last.expect("at least one attempt");
    // Every basis failed: a nonzero group of g^{|k⟩} in a window above k
    // certifies non-involutivity, otherwise the bases are blamed.
    let derived = g.truncated(k).derived(k)?;
    let table = cohomology_table(&derived, k + n + 1)?;
    let nonzero = table.nonzero().iter().any(|&(i, j, _)| i >= k && (i, j) != (0, 0));
    let verdict = if nonzero { CartanVerdict::NotInvolutiveAtK } else { CartanVerdict::BasisDegenerate };
    Ok(CartanReport { k, verdict, seed, attempts: tries, failing_index: fail, basis: basis_strings(&v) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderCheck {
    pub k: usize,
    pub cartan: CartanReport,
    /// `H^{i,j}(g^{|k⟩}) = 0` for `k ≤ i ≤ window_top`.
    pub cohomology_vanishes: bool,
    pub window_top: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvolutivityReport {
    pub involutive: bool,
    /// The order profile is known to be complete.
    pub certified: bool,
    /// Cartan verdicts agree with the cohomology cross-check.
    pub consistent: bool,
    pub seed: u64,
    pub checks: Vec<OrderCheck>,
}

/// Involutivity of every `g_k`, `k ∈ ord(g)`, via Cartan's test, with the
/// vanishing of `H^{i,j}(g^{|k⟩})` for `k ≤ i ≤ cap` as a cross-check.
pub fn is_involutive<F: Field>(g: &SymbolicSystem<F>, seed: u64) -> Result<InvolutivityReport> {
    let profile = g.order_profile();
    let mut checks = Vec::new();
    for (idx, &k) in profile.orders.iter().enumerate() {
        let cartan = cartan_test(g, k, None, seed.wrapping_add(idx as u64))?;
        let top = g.cap().max(k);
        let derived = g.truncated(k).derived(k)?;
        let table = cohomology_table(&derived, top)?;
        let vanishes = table.nonzero().iter().all(|&(i, j, _)| i < k || (i, j) == (0, 0));
        checks.push(OrderCheck { k, cartan, cohomology_vanishes: vanishes, window_top: top });
    }
    let involutive = checks.iter().all(|c| c.cartan.verdict == CartanVerdict::InvolutiveAtK);
    let consistent = checks.iter().all(|c| (c.cartan.verdict == CartanVerdict::InvolutiveAtK) == c.cohomology_vanishes);
    Ok(InvolutivityReport { involutive, certified: profile.certified, consistent, seed, checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    /// Cells or levels where the property failed.
    pub failures: Vec<(usize, usize)>,
    /// Largest level examined.
    pub checked_to: usize,
}

/// `I₁`: `H^{i,1}(g) = 0 ⇒ H^{i,j}(g) = 0` for all `j > 1`, within the cap.
pub fn property_i1<F: Field>(g: &SymbolicSystem<F>) -> Result<PropertyVerdict> {
    let i_max = default_i_max(g);
    let table = cohomology_table(g, i_max)?;
    let t = &table;
    let failures: Vec<(usize, usize)> = (0..=i_max)
        .filter(|&i| t.get(i, 1) == 0)
        .flat_map(|i| (2..=g.n()).filter(move |&j| t.get(i, j) != 0).map(move |j| (i, j)))
        .collect();
    Ok(PropertyVerdict { holds: failures.is_empty(), failures, checked_to: i_max })
}

/// Levels `k ≥ 1` whose maps `g_k ∩ … → g_{k−1} ∩ …` fail in basis `v`;
/// `exempt(k, i)` lists the allowed failures. Returns `(k, i)` pairs.
fn descending_failures<F: Field>(
    g: &SymbolicSystem<F>,
    v: &Matrix<F>,
    levels: &[usize],
    exempt: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    let (n, nu) = (g.n(), g.nu());
    let mut out = Vec::new();
    for &k in levels {
        let lower = level_in(&g.levels()[k - 1], v, nu, k - 1);
        let upper = level_in(&g.levels()[k], v, nu, k);
        let slot = GradedSlot::new(n, nu, k, 0);
        for i in 0..n {
            if exempt(k, i) {
                continue;
            }
            let a = tail_part(&upper, n, nu, k, i);
            let b = tail_part(&lower, n, nu, k - 1, i);
            if a.image(&partial(i, &slot)).dim() != b.dim() {
                out.push((k, i));
            }
        }
    }
    out
}

/// `I₂`: for `k ∉ ord(g)` and a generic basis, `δ_{v_i}` maps
/// `g_k ∩ S^k ann⟨v_1..v_{i−1}⟩⊗N` onto the same construction one level down.
pub fn property_i2<F: Field>(g: &SymbolicSystem<F>, seed: u64) -> Result<PropertyVerdict> {
    let ord = g.order_profile().orders;
    let levels: Vec<usize> = (1..=g.cap()).filter(|k| !ord.contains(k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..RETRIES {
        let v = random_basis(g.n(), &mut rng);
        failures = descending_failures(g, &v, &levels, |_, _| false);
        if failures.is_empty() {
            break;
        }
    }
    Ok(PropertyVerdict { holds: failures.is_empty(), failures, checked_to: g.cap() })
}

/// A splitting `T = ⊕ U_m` indexed by the orders, given by a basis and the
/// part each basis vector belongs to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Splitting<F: Field> {
    #[serde(skip)]
    pub basis: Matrix<F>,
    pub part: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum I3Verdict {
    Found { part: Vec<usize>, basis: Vec<Vec<String>> },
    NotFoundWithinBudget { tried: usize },
}

fn i3_holds_for<F: Field>(g: &SymbolicSystem<F>, ord: &[usize], s: &Splitting<F>) -> bool {
    let levels: Vec<usize> = (1..=g.cap()).collect();
    descending_failures(g, &s.basis, &levels, |k, i| ord.get(s.part[i]) == Some(&k)).is_empty()
}

/// `I₃`: checks a supplied splitting, or searches coordinate splittings
/// (every assignment of coordinates to orders, every ordering) and then
/// `budget` seeded random ones.
pub fn property_i3<F: Field>(
    g: &SymbolicSystem<F>,
    splitting: Option<&Splitting<F>>,
    budget: usize,
    seed: u64,
) -> Result<I3Verdict> {
    let ord = g.order_profile().orders;
    let n = g.n();
    let found = |s: &Splitting<F>| I3Verdict::Found { part: s.part.clone(), basis: basis_strings(&s.basis) };
    if let Some(s) = splitting {
        return Ok(if i3_holds_for(g, &ord, s) { found(s) } else { I3Verdict::NotFoundWithinBudget { tried: 1 } });
    }
    let parts = ord.len().max(1);
    let mut tried = 0;
    let assignments = (0..parts.pow(n as u32)).map(|mut code| {
        (0..n)
            .map(|_| {
                let p = code % parts;
                code /= parts;
                p
            })
            .collect::<Vec<usize>>()
    });
    let perms = permutations(n);
    for assign in assignments {
        for perm in &perms {
            let basis = Matrix::from_fn(n, n, |r, c| if r == perm[c] { F::one() } else { F::zero() });
            let part = perm.iter().map(|&c| assign[c]).collect();
            let s = Splitting { basis, part };
            tried += 1;
            if i3_holds_for(g, &ord, &s) {
                return Ok(found(&s));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let basis = random_basis(n, &mut rng);
        let part = (0..n).map(|_| rng.gen_range(0..parts)).collect();
        let s = Splitting { basis, part };
        tried += 1;
        if i3_holds_for(g, &ord, &s) {
            return Ok(found(&s));
        }
    }
    Ok(I3Verdict::NotFoundWithinBudget { tried })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityVerdict {
    pub m: usize,
    pub co: bool,
    pub holds: bool,
    pub failures: Vec<(usize, usize)>,
    pub checked_to: usize,
}

/// `m`-acyclicity: `H^{i,j}(g) = 0` for `i ∉ ord(g) − 1`, `0 ≤ j ≤ m`,
/// `(i, j) ≠ (0, 0)`. With `co`, the range is `n − m ≤ j ≤ n` instead.
pub fn acyclicity<F: Field>(g: &SymbolicSystem<F>, m: usize, co: bool) -> Result<AcyclicityVerdict> {
    acyclicity_against(g, &g.order_profile().orders, m, co)
}

/// As [`acyclicity`], with the exempt rows `i ∈ ord − 1` taken from `ord`
/// instead of from `g`.
pub fn acyclicity_against<F: Field>(g: &SymbolicSystem<F>, ord: &[usize], m: usize, co: bool) -> Result<AcyclicityVerdict> {
    let i_max = default_i_max(g);
    let g = reaching(g, i_max + 1)?;
    let n = g.n();
    let ranks = DeltaRanks::new(&g, n, i_max + 1)?;
    let js: Vec<usize> = if co { (n.saturating_sub(m)..=n).collect() } else { (0..=m.min(n)).collect() };
    let mut failures = Vec::new();
    for i in 0..=i_max {
        if ord.contains(&(i + 1)) {
            continue;
        }
        for &j in &js {
            if (i, j) != (0, 0) && ranks.h(i, j) != 0 {
                failures.push((i, j));
            }
        }
    }
    Ok(AcyclicityVerdict { m, co, holds: failures.is_empty(), failures, checked_to: i_max })
}
