use std::cell::Cell;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spencer::basis::{binom, delta_matrix, partial, subspace_product, sym_dim, sym_power_subspace, tensor_with_forms, GradedSlot};
use spencer::characteristics::{
    char_report, find_strongly_noncharacteristic, is_char_covector, strongly_noncharacteristic, verify_thm2,
};
use spencer::cohomology::{
    acyclicity_transfer, cohomology_dim, cohomology_table, corollary_euler_check, is_involutive, lemma5_check, property_i1,
    property_i2, property_i3, verify_thm1, Frame, I3Verdict, Lemma5Cell, Split,
};
use spencer::dsl::parse;
use spencer::linalg::{kernel, Field, Gaussian, Matrix, Subspace, Q};
use spencer::system::{descend_level, prolong, prolong_iterated, SymbolicSystem};

const EX1: &str = "vars x y\nunknowns u v\neq u_xx = 0\neq u_yy = 0\neq v_yyy = 0\n";
const EX2: &str = "vars x y z\nunknowns u\neq u_xx = 0\neq u_xy = 0\neq u_yyz = 0\n";
const SO2: &str = "vars x y\nunknowns u v\neq u_x = 0\neq v_y = 0\neq u_y + v_x = 0\n";
const EX6: &str = "vars x y z\nunknowns u\neq u_xx = 0\neq u_yy = 0\neq u_zz = 0\n";
const TRANSPORT: &str = "vars x y z\nunknowns u\neq u_z = 0\n";
const CODIM1: &str = "vars x y z\nunknowns u\neq u_xx + 2*u_yz - u_zz = 0\n";
const UXY: &str = "vars x y\nunknowns u\neq u_xy = 0\n";
const PQ: &str = "vars x y\nunknowns p q\neq p_y = 0\neq q_x = 0\n";
const FROBENIUS: &str = "vars x y\nunknowns u\neq u_xx = 0\neq u_xy = 0\neq u_yy = 0\n";

/// Sub-checks that fail on purpose; see the decisions ledger.
const KNOWN_DEVIATIONS: &[(usize, &str)] = &[
    (1, "H^{0,0} = 1"),
    (6, "thm1 on u_z=0 with <dx>"),
    (6, "corollary on u_z=0 with <dx>"),
    (9, "m-acyclicity transfer, restriction to g"),
];

fn sys(text: &str, cap: usize) -> SymbolicSystem {
    SymbolicSystem::from_equations(&parse(text).unwrap(), cap).unwrap()
}

fn q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from(x)).collect()
}

fn span(n: usize, rows: &[&[i64]]) -> Subspace<Q> {
    Subspace::from_rows(n, rows.iter().map(|r| q(r)).collect())
}

fn golden() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems");
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "spd"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[derive(Default)]
struct Criterion {
    checks: Vec<(String, bool, String)>,
}

impl Criterion {
    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push((name.to_string(), ok, detail.into()));
    }

    fn timed(&mut self, name: &str, start: Instant, limit: Duration) {
        let e = start.elapsed();
        self.check(name, e < limit, format!("{e:.2?}"));
    }
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let g = sys(EX1, 6);
    let t = cohomology_table(&g, 4).unwrap();
    c.check("H^{0,0} = 1", t.get(0, 0) == 1, format!("dim H^{{0,0}} = {} (= dim N)", t.get(0, 0)));
    let rest: Vec<_> = t.nonzero().into_iter().filter(|&(i, j, _)| (i, j) != (0, 0)).collect();
    c.check("H^{1,1}=2, H^{2,1}=1, H^{2,2}=1 and nothing else", rest == [(1, 1, 2), (2, 1, 1), (2, 2, 1)], format!("{rest:?}"));
    c.check("I1", property_i1(&g).unwrap().holds, "");
    c.check("I2", property_i2(&g, 0).unwrap().holds, "");
    let d = cohomology_table(&g.derived(2).unwrap(), 4).unwrap();
    c.check("dim H^{2,2}(g^{|2>}) = 1", d.get(2, 2) == 1, format!("{}", d.get(2, 2)));
    c.check("not involutive", !is_involutive(&g, 0).unwrap().involutive, "");
    c.timed("< 1 s", start, Duration::from_secs(1));
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let g = sys(EX2, 6);
    c.check("involutive", is_involutive(&g, 0).unwrap().involutive, "");
    let v = property_i3(&g, None, 0, 0).unwrap();
    c.check("I3 not found over coordinate splittings", matches!(v, I3Verdict::NotFoundWithinBudget { .. }), format!("{v:?}"));
    c.timed("< 5 s", start, Duration::from_secs(5));
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::default();
    let g = sys(SO2, 5);
    let t = cohomology_table(&g, 4).unwrap().nonzero();
    c.check("H(g)", t == [(0, 0, 2), (0, 1, 3), (1, 2, 1)], format!("{t:?}"));
    let frame = Frame::new(&span(2, &[&[1, 0]])).unwrap();
    c.check("W = <d/dy>", frame.w_basis() == vec![q(&[0, 1])], format!("{:?}", frame.w_basis()));
    let split = Split::new(&g, &frame, 5).unwrap();
    let dims = split.restricted.dims();
    c.check("dims of restriction", dims[..3] == [2, 1, 0] && dims[3..].iter().all(|&d| d == 0), format!("{dims:?}"));
    let ord = split.restricted.order_profile().orders;
    c.check("ord = {1,2}", ord == [1, 2], format!("{ord:?}"));
    let h = split.restricted_table(split.i_max()).unwrap().nonzero();
    c.check("H(restriction)", h == [(0, 0, 2), (0, 1, 1), (1, 1, 1)], format!("{h:?}"));
    let r = verify_thm1(&g, &frame, 0).unwrap();
    c.check("formula mismatch at (1,1)", r.mismatches.contains(&(1, 1)), format!("{:?}", r.mismatches));
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::default();
    let g = sys(EX6, 7);
    let dims = g.dims();
    c.check("dim g_i = C(3,i)", (0..=7).all(|i| dims[i] == binom(3, i)), format!("{dims:?}"));
    let frame = Frame::new(&span(3, &[&[1, 2, 3]])).unwrap();
    let split = Split::new(&g, &frame, 7).unwrap();
    let dp = split.dprime_table(5).unwrap().nonzero();
    let want = [(0, 0, 1), (1, 0, 1), (1, 1, 2), (2, 1, 2), (2, 2, 1), (3, 2, 1)];
    c.check("delta' cohomology", dp == want, format!("{dp:?}"));
    let nonzero = |page: Vec<(i64, i64, usize)>| page.into_iter().filter(|e| e.2 > 0).collect::<Vec<_>>();
    for (l, want) in [(1, [(0, 0, 1), (1, 0, 1)]), (3, [(0, 1, 2), (1, 1, 2)]), (5, [(0, 2, 1), (1, 2, 1)])] {
        let e1 = nonzero(split.spectral_page(l, 1).unwrap());
        let e2 = nonzero(split.spectral_page(l, 2).unwrap());
        c.check(&format!("E1 at l={l}"), e1 == want, format!("{e1:?}"));
        c.check(&format!("E2 = 0 at l={l}"), e2.is_empty(), format!("{e2:?}"));
    }
    let full = cohomology_table(&g, 6).unwrap();
    for l in [2usize, 4, 6] {
        let e1 = split.spectral_page(l, 1).unwrap();
        let e2 = split.spectral_page(l, 2).unwrap();
        let sums_ok = (0..=3.min(l) as i64).all(|j| {
            let s: usize = e2.iter().filter(|e| e.0 + e.1 == j).map(|e| e.2).sum();
            s == full.get(l - j as usize, j as usize)
        });
        c.check(&format!("E2 = E1 and converges at l={l}"), e1 == e2 && sums_ok, "");
    }
    let codims: Vec<usize> =
        (0..3).map(|i| sym_dim(2, i + 2) - split.restricted.level(i + 2).unwrap().dim()).collect();
    let want: Vec<usize> = (0..3).map(|i| binom(3 + i, i + 2) - binom(3, i + 2)).collect();
    c.check("restriction codims", codims == want, format!("{codims:?}"));
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::default();
    let g = sys(EX6, 6);
    let t = cohomology_table(&g, 5).unwrap().nonzero();
    c.check("H^{i,i} = (1,3,3,1), nothing else", t == [(0, 0, 1), (1, 1, 3), (2, 2, 3), (3, 3, 1)], format!("{t:?}"));
    let r = verify_thm2(&g, &span(3, &[&[1, 0, 0], &[0, 1, 0]]), true, 0).unwrap();
    c.check("strongly characteristic", r.strongly_char, "");
    c.check("no characteristic covector", !r.exists_char_covector && r.covector.is_none(), "");
    c.check("involutivity hypothesis violated", !r.involutive, "");
    c
}

fn thm1_and_corollary(c: &mut Criterion, label: &str, g: &SymbolicSystem, vstar: &Subspace<Q>) {
    let frame = Frame::new(vstar).unwrap();
    let r = verify_thm1(g, &frame, 0).unwrap();
    let detail = format!("hypotheses {:?}, mismatches {:?}", r.failing_hypothesis, r.mismatches);
    c.check(&format!("thm1 on {label}"), r.mismatches.is_empty(), detail);
    let split = Split::new(g, &frame, g.cap()).unwrap();
    let r_min = g.order_profile().r_min;
    let mut bad = Vec::new();
    for i in 0..split.i_max() {
        for j in 1..=g.n() {
            let k = corollary_euler_check(&split, r_min, i, j).unwrap();
            if !k.holds() {
                bad.push((i, j, k.euler_sum));
            }
        }
    }
    c.check(&format!("corollary on {label}"), bad.is_empty(), format!("{bad:?}"));
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::default();
    let t = sys(TRANSPORT, 5);
    thm1_and_corollary(&mut c, "u_z=0 with <dx>", &t, &span(3, &[&[1, 0, 0]]));
    thm1_and_corollary(&mut c, "u_z=0 with <dz>", &t, &span(3, &[&[0, 0, 1]]));
    let g = sys(CODIM1, 5);
    c.check("codim-1 system involutive", is_involutive(&g, 0).unwrap().involutive, "");
    let found = (0..=3).rev().find_map(|d| find_strongly_noncharacteristic(&g, d, 50, 0).unwrap()).unwrap();
    c.check("codim-1 searched V*", true, format!("largest strongly non-characteristic dim {}", found.dim()));
    thm1_and_corollary(&mut c, "codim-1 system with searched V*", &g, &found);
    let hat = sys(UXY, 6).equivalence_reduce(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let vstar = loop {
        let v = Subspace::from_rows(2, vec![q(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9)])]);
        if v.dim() == 1 && strongly_noncharacteristic(&hat, &v).unwrap() {
            break v;
        }
    };
    thm1_and_corollary(&mut c, "er_2(u_xy=0) with generic V*", &hat, &vstar);
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::default();
    let g = sys(UXY, 6);
    let hat = g.equivalence_reduce(2).unwrap();
    let pq = sys(PQ, hat.cap());
    c.check("levels equal {p_y=0, q_x=0}", hat.levels() == pq.levels(), format!("{:?} vs {:?}", hat.dims(), pq.dims()));
    let hg = cohomology_table(&g, 5).unwrap();
    let hh = cohomology_table(&hat, 4).unwrap();
    let shifted = (2..=5).all(|i| (0..=2).all(|j| hg.get(i, j) == hh.get(i - 1, j)));
    c.check("H^{i,j}(g) = H^{i-1,j}(er g), i >= 2", shifted, "");

    let gl: SymbolicSystem<Gaussian> = g.lift(|x| Gaussian::from(x.clone()));
    let hl: SymbolicSystem<Gaussian> = hat.lift(|x| Gaussian::from(x.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut agree, mut chars) = (0, 0);
    for s in 0..100 {
        let v: Vec<Gaussian> = loop {
            let v: Vec<Gaussian> = (0..2)
                .map(|_| {
                    let im = if s % 2 == 0 { 0 } else { rng.gen_range(-2..=2) };
                    Gaussian::new(Q::from(rng.gen_range(-2..=2)), Q::from(im))
                })
                .collect();
            if v.iter().any(|x| !x.is_zero()) {
                break v;
            }
        };
        let a = is_char_covector(&gl, &v).unwrap().is_some();
        let b = is_char_covector(&hl, &v).unwrap().is_some();
        agree += usize::from(a == b);
        chars += usize::from(a);
    }
    c.check("char covectors agree (100 seeded)", agree == 100, format!("{agree}/100 agree, {chars} characteristic"));

    let mut agree = 0;
    let mut strong = 0;
    for _ in 0..20 {
        let d = rng.gen_range(1..=2);
        let v = loop {
            let rows = (0..d).map(|_| q(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)])).collect();
            let v = Subspace::from_rows(2, rows);
            if v.dim() == d {
                break v;
            }
        };
        let a = char_report(&g, &v).unwrap().strongly_char;
        let b = char_report(&hat, &v).unwrap().strongly_char;
        agree += usize::from(a == b);
        strong += usize::from(a);
    }
    c.check("strong characteristicity agrees (20 seeded)", agree == 20, format!("{agree}/20 agree, {strong} strongly char"));

    let diag = span(2, &[&[1, 1]]);
    let (a, b) = (char_report(&g, &diag).unwrap().weakly_char, char_report(&hat, &diag).unwrap().weakly_char);
    c.check("diagonal weakly char for g only", a && !b, format!("g {a}, er g {b}"));
    c
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::default();
    for (name, text) in golden() {
        let g = sys(&text, 5);
        let n = g.n();
        if is_involutive(&g, 0).unwrap().involutive {
            let d = g.descend().unwrap();
            let ok = is_involutive(&d, 0).unwrap().involutive;
            c.check(&format!("descended {name} involutive"), ok, format!("{:?}", d.dims()));
        }
        let mut bad = Vec::new();
        for i in 0..g.cap() {
            let vanishes = cohomology_dim(&g, i, n).unwrap() == 0;
            let equal = *g.level(i).unwrap() == descend_level(g.level(i + 1).unwrap(), n, g.nu(), i + 1);
            if vanishes != equal {
                bad.push(i);
            }
        }
        c.check(&format!("H^{{i,n}} = 0 iff g_i = dg_{{i+1}} on {name}"), bad.is_empty(), format!("{bad:?}"));
        let start = Instant::now();
        let (fix, steps) = g.descend_fixpoint().unwrap();
        c.check(&format!("descend fixpoint of {name}"), steps <= g.cap(), format!("{steps} steps, {:?}, {:.2?}", fix.dims(), start.elapsed()));
    }
    let g = sys(FROBENIUS, 4);
    let d = g.descend().unwrap();
    let contained = (0..=d.cap()).all(|k| g.level(k).unwrap().contains(d.level(k).unwrap()));
    let strict = (0..=d.cap()).any(|k| g.level(k).unwrap().dim() > d.level(k).unwrap().dim());
    c.check("Frobenius: dg strictly inside g", contained && strict, format!("{:?} vs {:?}", d.dims(), g.dims()));
    c
}

/// `(n, ν, equations)` with orders in `1..=3` and small integer coefficients.
fn random_system(max_cap: usize) -> impl Strategy<Value = SymbolicSystem> {
    (1usize..=3, 1usize..=2, 1usize..=3)
        .prop_flat_map(|(n, nu, count)| {
            let eq = (1usize..=3).prop_flat_map(move |k| {
                let len = nu * sym_dim(n, k);
                (Just(k), prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], len))
            });
            (Just(n), Just(nu), prop::collection::vec(eq, count))
        })
        .prop_map(move |(n, nu, eqs)| {
            let cap = if n == 3 { max_cap - 1 } else { max_cap };
            let eqs = eqs.into_iter().map(|(k, f)| (k, q(&f))).collect();
            SymbolicSystem::from_functionals(n, nu, eqs, cap).unwrap()
        })
}

fn random_subspace(ambient: usize, max_dim: usize) -> impl Strategy<Value = Subspace<Q>> {
    (0..=max_dim).prop_flat_map(move |d| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, ambient), d)
            .prop_map(move |rows| Subspace::from_rows(ambient, rows.iter().map(|r| q(r)).collect()))
    })
}

fn runner() -> TestRunner {
    let config = Config { cases: 200, max_global_rejects: 20_000, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn suite<S: Strategy>(
    c: &mut Criterion,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<bool, TestCaseError>,
) where
    S::Value: std::fmt::Debug,
{
    let vacuous = Cell::new(0);
    let start = Instant::now();
    let outcome = runner().run(&strategy, |v| {
        if !test(v)? {
            vacuous.set(vacuous.get() + 1);
        }
        Ok(())
    });
    let detail = match &outcome {
        Ok(()) => format!("200 cases, 0 violations, {} skipped, {:.2?}", vacuous.get(), start.elapsed()),
        Err(e) => {
            let e = e.to_string();
            format!("violation: {}", e.split("minimal failing input").next().unwrap_or("").trim())
        }
    };
    c.check(name, outcome.is_ok(), detail);
}

/// `h^{(l)}` straight from the definition: all `l`-th derivatives land in `h`.
fn prolong_direct(h: &Subspace<Q>, n: usize, nu: usize, k: usize, l: usize) -> Subspace<Q> {
    let ann = h.annihilator();
    let mut maps = vec![Matrix::identity(nu * sym_dim(n, k + l))];
    for d in 0..l {
        let slot = GradedSlot::new(n, nu, k + l - d, 0);
        maps = maps.iter().flat_map(|m| (0..n).map(move |i| partial::<Q>(i, &slot).mul(m))).collect();
    }
    let mut stacked = Matrix::zeros(0, nu * sym_dim(n, k + l));
    for m in &maps {
        stacked = stacked.vstack(&ann.mul(m));
    }
    kernel(&stacked)
}

fn random_level() -> impl Strategy<Value = (usize, usize, usize, Subspace<Q>)> {
    (1usize..=3, 1usize..=2, 0usize..=3).prop_flat_map(|(n, nu, k)| {
        let amb = nu * sym_dim(n, k);
        (Just(n), Just(nu), Just(k), random_subspace(amb, amb))
    })
}

fn criterion_9() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();

    let slots = (2usize..=3, 1usize..=2, 2usize..=5).prop_flat_map(|(n, nu, k)| (Just(n), Just(nu), Just(k), 0..=n - 2));
    suite(&mut c, "delta^2 = 0", slots, |(n, nu, k, j)| {
        let s = GradedSlot::new(n, nu, k, j);
        let Some(t) = s.delta_target() else { return Ok(false) };
        if t.delta_target().is_none() {
            return Ok(false);
        }
        prop_assert!(delta_matrix::<Q>(&t).mul(&delta_matrix::<Q>(&s)).is_zero());
        Ok(true)
    });

    suite(&mut c, "prolongation composition", (random_level(), 0usize..=2, 0usize..=2), |((n, nu, k, h), a, b)| {
        if k + a + b > 5 {
            return Ok(false);
        }
        let two = prolong_iterated(&prolong_iterated(&h, n, nu, k, a), n, nu, k + a, b);
        prop_assert_eq!(two, prolong_direct(&h, n, nu, k, a + b));
        Ok(true)
    });

    suite(&mut c, "prolongation characterizations agree", random_level(), |(n, nu, k, h)| {
        let top = GradedSlot::new(n, nu, k + 1, 0);
        let inside = Subspace::from_rows(GradedSlot::new(n, nu, k, 1).dim(), tensor_with_forms(&h, &GradedSlot::new(n, nu, k, 1)));
        let by_delta = inside.preimage(&delta_matrix::<Q>(&top));
        prop_assert_eq!(by_delta, prolong(&h, n, nu, k));
        Ok(true)
    });

    suite(&mut c, "Poincare lemma for free systems", (1usize..=3, 1usize..=2), |(n, nu)| {
        let cap = if n == 3 { 4 } else { 5 };
        let t = cohomology_table(&SymbolicSystem::<Q>::free(n, nu, cap), cap - 1).unwrap();
        prop_assert!(t.is_zero_except_origin());
        prop_assert_eq!(t.get(0, 0), nu);
        Ok(true)
    });

    let pair = (1usize..=12).prop_flat_map(|a| (random_subspace(a, a), random_subspace(a, a)));
    suite(&mut c, "Grassmann identity", pair, |(a, b)| {
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(s.contains(&a) && s.contains(&b) && a.contains(&i) && b.contains(&i));
        Ok(true)
    });

    let with_change = random_system(4).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
    });
    suite(&mut c, "basis-change invariance", with_change, |(g, rows)| {
        let m = Matrix::from_rows(rows.iter().map(|r| q(r)).collect(), g.n());
        if m.determinant().is_zero() {
            return Ok(false);
        }
        let i_max = g.cap() - 1;
        let moved = g.transform(&m).unwrap();
        prop_assert_eq!(cohomology_table(&g, i_max).unwrap().nonzero(), cohomology_table(&moved, i_max).unwrap().nonzero());
        Ok(true)
    });

    let heredity = (1usize..=3, 1usize..=2, 1usize..=3, any::<u64>()).prop_flat_map(|(n, nu, k, seed)| {
        let amb = nu * sym_dim(n, k);
        (Just(n), Just(nu), Just(k), random_subspace(amb, 2), random_subspace(n, n), Just(seed))
    });
    suite(&mut c, "heredity of non-characteristicity", heredity, |(n, nu, k, h, vstar, seed)| {
        let weak_of = |s: &Subspace<Q>, d: usize| s.intersect(&sym_power_subspace(&vstar, nu, d)).unwrap().is_zero();
        let strong_of = |s: &Subspace<Q>, d: usize| {
            let full = Subspace::full(nu * sym_dim(n, d - 1));
            s.intersect(&subspace_product(&vstar, &full, n, nu, d)).unwrap().is_zero()
        };
        let up = prolong(&h, n, nu, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = up.basis_vectors();
        let pick = rng.gen_range(0..=basis.len());
        let rows = (0..pick)
            .map(|_| {
                let mut v = vec![Q::from(0); up.ambient()];
                for b in &basis {
                    let x = Q::from(rng.gen_range(-3..=3));
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = vi.plus(&x.times(bi));
                    }
                }
                v
            })
            .collect();
        let sub = Subspace::from_rows(up.ambient(), rows);
        let (w, s) = (weak_of(&h, k), strong_of(&h, k));
        if w {
            prop_assert!(weak_of(&sub, k + 1));
        }
        if s {
            prop_assert!(strong_of(&sub, k + 1));
        }
        Ok(w || s)
    });

    let lemma5 = (random_system(4), any::<u64>()).prop_filter_map("no strongly non-characteristic V*", |(g, seed)| {
        let d = 1 + (seed as usize) % g.n();
        find_strongly_noncharacteristic(&g, d, 20, seed).unwrap().map(|v| (g, v))
    });
    suite(&mut c, "Lemma 5 case table", lemma5, |(g, v)| {
        let split = Split::new(&g, &Frame::new(&v).unwrap(), g.cap()).unwrap();
        let bad: Vec<Lemma5Cell> = lemma5_check(&split, g.order_profile().r_min).unwrap().into_iter().filter(|c| !c.holds()).collect();
        prop_assert!(bad.is_empty(), "{:?}", bad);
        Ok(true)
    });

    let pure = (1usize..=3, 1usize..=2, 1usize..=2, 1usize..=3)
        .prop_flat_map(|(n, nu, k, count)| {
            let len = nu * sym_dim(n, k);
            let eq = prop::collection::vec(prop_oneof![2 => Just(0i64), 1 => -2i64..=2], len);
            (Just(n), Just(nu), Just(k), prop::collection::vec(eq, count), any::<u64>())
        })
        .prop_filter_map("not pure order, or no strongly non-characteristic V*", |(n, nu, k, eqs, seed)| {
            let cap = if n == 3 { 4 } else { 5 };
            let eqs = eqs.into_iter().map(|f| (k, q(&f))).collect();
            let g: SymbolicSystem = SymbolicSystem::from_functionals(n, nu, eqs, cap).unwrap();
            if g.order_profile().orders != [k] {
                return None;
            }
            let d = 1 + (seed as usize) % n;
            find_strongly_noncharacteristic(&g, d, 20, seed).unwrap().map(|v| (g, v))
        });
    let transfer = |forward: bool| {
        move |(g, v): (SymbolicSystem, Subspace<Q>)| -> Result<bool, TestCaseError> {
            let frame = Frame::new(&v).unwrap();
            for m in 0..=g.n() {
                let r = acyclicity_transfer(&g, &frame, m).unwrap();
                let (from, to) = if forward { (&r.g, &r.restricted) } else { (&r.restricted, &r.g) };
                prop_assert!(
                    !from.holds || to.holds,
                    "m={} dims {:?} V* {:?}: g failures {:?}, restriction failures {:?}",
                    m,
                    g.dims(),
                    v.basis_vectors(),
                    r.g.failures,
                    r.restricted.failures
                );
            }
            Ok(true)
        }
    };
    suite(&mut c, "m-acyclicity transfer, g to restriction", pure.clone(), transfer(true));
    suite(&mut c, "m-acyclicity transfer, restriction to g", pure, transfer(false));

    c.timed("suite < 2 min", start, Duration::from_secs(120));
    c
}

#[test]
fn acceptance() {
    let criteria: [(usize, fn() -> Criterion); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (id, run) in criteria {
        let start = Instant::now();
        let c = run();
        let ok = c.checks.iter().all(|x| x.1);
        println!("criterion {id} {} ({:.2?})", if ok { "PASS" } else { "FAIL" }, start.elapsed());
        for (name, pass, detail) in &c.checks {
            println!("    [{}] {name}: {detail}", if *pass { "ok" } else { "FAIL" });
            if !pass {
                failed.push((id, name.clone()));
            }
        }
    }
    let known: Vec<(usize, String)> = KNOWN_DEVIATIONS.iter().map(|&(i, s)| (i, s.to_string())).collect();
    assert_eq!(failed, known, "failures differ from the documented deviations");
}
