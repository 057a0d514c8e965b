use serde::Serialize;
use serde_json::{json, Map, Value};

use spencer::characteristics::{
    char_report, find_strongly_noncharacteristic, format_covector, format_entries, is_char_covector,
    pencil_char_search, verify_thm2,
};
use spencer::cohomology::{
    acyclicity, acyclicity_transfer, cohomology_table, corollary_euler_check, default_i_max, is_involutive,
    lemma5_check, property_i1, property_i2, property_i3, verify_thm1, CohomologyTable, Frame, I3Verdict, Split,
};
use spencer::dsl::{parse, parse_subspace, EquationSet, ParseError, SubspaceMode};
use spencer::linalg::{kernel, Gaussian, Subspace, Q};
use spencer::system::SymbolicSystem;
use spencer::Error;

use crate::render::{list, table, yes};
use crate::{Cli, Command, Field, Format, Opts, Verify};

/// Budget of random splittings tried by the I₃ search.
const I3_BUDGET: usize = 50;

pub struct Output {
    json: Map<String, Value>,
    text: String,
}

impl Output {
    fn new() -> Self {
        Output { json: Map::new(), text: String::new() }
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.json.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
            Format::Text => self.text.clone(),
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
    pub position: Option<(usize, usize)>,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: 3, kind: "invalid_argument", message: message.into(), position: None }
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({ "kind": self.kind, "message": self.message, "exit_code": self.code });
        if let Some((line, column)) = self.position {
            e["line"] = json!(line);
            e["column"] = json!(column);
        }
        json!({ "error": e })
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure { code: 1, kind: "parse", message: e.to_string(), position: Some((e.line, e.column)) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => p.into(),
            Error::CapExceeded { .. } => Failure { code: 2, kind: "cap_exceeded", message: e.to_string(), position: None },
            other => Failure::invalid(other.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Input {
    set: EquationSet,
    g: SymbolicSystem,
}

fn load(cli: &Cli) -> Res<Input> {
    let path = match &cli.command {
        Command::Analyze { file }
        | Command::Cohomology { file }
        | Command::Involutive { file }
        | Command::Restrict { file }
        | Command::Reduce { file }
        | Command::Descend { file }
        | Command::Char { file }
        | Command::E1table { file }
        | Command::Verify { file, .. } => file,
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let set = parse(&text)?;
    let g = SymbolicSystem::from_equations(&set, cli.opts.max_degree)?;
    Ok(Input { set, g })
}

fn subspace(text: &str, input: &Input, mode: SubspaceMode) -> Res<Subspace<Q>> {
    let rows = parse_subspace(text, &input.set.vars, mode)?;
    let count = rows.len();
    let s = Subspace::from_rows(input.set.n(), rows);
    if count == 0 {
        return Err(Failure::invalid("empty subspace"));
    }
    if s.dim() != count {
        return Err(Error::DependentBasis.into());
    }
    Ok(s)
}

fn vstar(opts: &Opts, input: &Input) -> Res<Option<Subspace<Q>>> {
    opts.vstar.as_deref().map(|t| subspace(t, input, SubspaceMode::Covectors)).transpose()
}

fn need_vstar(opts: &Opts, input: &Input) -> Res<Subspace<Q>> {
    vstar(opts, input)?.ok_or_else(|| Failure::invalid("this command needs --vstar"))
}

fn covectors(s: &Subspace<Q>, vars: &[String]) -> Vec<String> {
    s.basis_vectors().iter().map(|v| format_covector(v, vars)).collect()
}

fn cells(t: &CohomologyTable) -> Value {
    Value::Array(t.nonzero().into_iter().map(|(i, j, dim)| json!({ "i": i, "j": j, "dim": dim })).collect())
}

fn multiplicities(g: &SymbolicSystem) -> Value {
    Value::Array(g.order_profile().multiplicities.iter().map(|(r, m)| json!({ "order": r, "multiplicity": m })).collect())
}

fn describe_orders(out: &mut Output, g: &SymbolicSystem) {
    let p = g.order_profile();
    out.put("dims", g.dims());
    out.put("orders", &p.orders);
    out.json.insert("multiplicities".into(), multiplicities(g));
    out.put("codim", p.codim);
    out.put("certified", p.certified);
    out.line(format!("dims g_0..g_{}: {}", g.cap(), list(&g.dims())));
    let mult: Vec<String> = p.multiplicities.iter().map(|(r, m)| format!("{r}(x{m})")).collect();
    out.line(format!(
        "orders: {}   codim: {}{}",
        if mult.is_empty() { "none".to_string() } else { mult.join(" ") },
        p.codim,
        if p.certified { "" } else { "   (within cap only)" }
    ));
}

fn echo(out: &mut Output, input: &Input) {
    let eqs: Vec<String> = input.set.to_string().lines().filter(|l| l.starts_with("eq")).map(|l| l[2..].trim().to_string()).collect();
    out.put("input", json!({ "vars": input.set.vars, "unknowns": input.set.unknowns, "equations": eqs }));
    out.line(format!(
        "system: {} in {} ({})",
        list(&input.set.unknowns),
        list(&input.set.vars),
        if eqs.is_empty() { "free".to_string() } else { eqs.join(", ") }
    ));
}

pub fn run(cli: &Cli) -> Res<Output> {
    let input = load(cli)?;
    let opts = &cli.opts;
    let mut out = Output::new();
    out.put("seed", opts.seed);
    out.put("cap", opts.max_degree);
    echo(&mut out, &input);
    match &cli.command {
        Command::Analyze { .. } => analyze(&mut out, &input, opts)?,
        Command::Cohomology { .. } => cohomology(&mut out, &input, opts)?,
        Command::Involutive { .. } => involutive(&mut out, &input, opts)?,
        Command::Restrict { .. } => restrict(&mut out, &input, opts)?,
        Command::Reduce { .. } => reduce(&mut out, &input, opts)?,
        Command::Descend { .. } => descend(&mut out, &input)?,
        Command::Char { .. } => characteristics(&mut out, &input, opts)?,
        Command::E1table { .. } => e1table(&mut out, &input, opts)?,
        Command::Verify { what: Verify::Thm1, .. } => thm1(&mut out, &input, opts)?,
        Command::Verify { what: Verify::Thm2, .. } => thm2(&mut out, &input, opts)?,
        Command::Verify { what: Verify::Corollary, .. } => corollary(&mut out, &input, opts)?,
    }
    Ok(out)
}

fn analyze(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let g = &input.g;
    describe_orders(out, g);
    let t = cohomology_table(g, default_i_max(g))?;
    out.json.insert("cohomology".into(), cells(&t));
    out.text.push_str(&table("H^{i,j}(g)", &t));
    let inv = is_involutive(g, opts.seed)?;
    let i1 = property_i1(g)?;
    let i2 = property_i2(g, opts.seed)?;
    out.put("involutive", inv.involutive);
    out.put("involutivity", &inv);
    out.put("i1", &i1);
    out.put("i2", &i2);
    out.line(format!("involutive: {}   I1: {}   I2: {}", yes(inv.involutive), yes(i1.holds), yes(i2.holds)));
    for c in &inv.checks {
        out.line(format!("  order {}: cartan {:?} after {} basis(es)", c.k, c.cartan.verdict, c.cartan.attempts));
    }
    let (mut ch, mut t1, mut t2, mut e1) = (Value::Null, Value::Null, Value::Null, Value::Null);
    if let Some(v) = vstar(opts, input)? {
        let frame = Frame::new(&v)?;
        let r = char_report(g, &v)?;
        out.line(format!(
            "V* = <{}>: weakly char {}, strongly char {}, weakly nonchar {}, strongly nonchar {}",
            covectors(&v, &input.set.vars).join(", "),
            yes(r.weakly_char),
            yes(r.strongly_char),
            yes(r.weakly_nonchar),
            yes(r.strongly_nonchar)
        ));
        ch = serde_json::to_value(&r).expect("serializable");
        let r1 = verify_thm1(g, &frame, opts.seed)?;
        out.line(format!("theorem 1: hypotheses met {}, mismatches {:?}", yes(r1.hypotheses_met), r1.mismatches));
        t1 = serde_json::to_value(&r1).expect("serializable");
        let r2 = verify_thm2(g, &v, opts.field == Field::Qi, opts.seed)?;
        out.line(format!("theorem 2: equivalence {}", yes(r2.equivalence_holds)));
        t2 = serde_json::to_value(&r2).expect("serializable");
        let split = Split::new(g, &frame, g.cap())?;
        e1 = Value::Array(spectral_cells(&split)?);
    }
    out.json.insert("char".into(), ch);
    out.json.insert("thm1".into(), t1);
    out.json.insert("thm2".into(), t2);
    out.json.insert("e1".into(), e1);
    Ok(())
}

fn cohomology(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let g = &input.g;
    let t = cohomology_table(g, default_i_max(g))?;
    out.json.insert("cohomology".into(), cells(&t));
    out.text.push_str(&table("H^{i,j}(g)", &t));
    if let Some(v) = vstar(opts, input)? {
        let split = Split::new(g, &Frame::new(&v)?, g.cap())?;
        let i_max = split.i_max();
        let dp = split.dprime_table(i_max)?;
        let rt = split.restricted_table(i_max)?;
        out.json.insert("dprime".into(), cells(&dp));
        out.json.insert("restricted".into(), cells(&rt));
        out.text.push_str(&table("H^{i,j}(g, d') along W", &dp));
        out.text.push_str(&table("H^{i,j}(g restricted to W)", &rt));
    }
    Ok(())
}

fn involutive(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let g = &input.g;
    describe_orders(out, g);
    let inv = is_involutive(g, opts.seed)?;
    out.put("involutive", inv.involutive);
    out.put("involutivity", &inv);
    out.line(format!("involutive: {}   (cohomology cross-check consistent: {})", yes(inv.involutive), yes(inv.consistent)));
    for c in &inv.checks {
        out.line(format!(
            "  order {}: {:?}, attempts {}, failing index {:?}, H(g^|k>) vanishes to {}: {}",
            c.k,
            c.cartan.verdict,
            c.cartan.attempts,
            c.cartan.failing_index,
            c.window_top,
            yes(c.cohomology_vanishes)
        ));
    }
    let i1 = property_i1(g)?;
    let i2 = property_i2(g, opts.seed)?;
    let i3 = property_i3(g, None, I3_BUDGET, opts.seed)?;
    out.put("i1", &i1);
    out.put("i2", &i2);
    out.put("i3", &i3);
    out.line(format!("I1: {}   I2: {}", yes(i1.holds), yes(i2.holds)));
    match &i3 {
        I3Verdict::Found { part, .. } => out.line(format!("I3: splitting found, parts {part:?}")),
        I3Verdict::NotFoundWithinBudget { tried } => out.line(format!("I3: not found within budget ({tried} splittings tried)")),
    }
    if let Some(m) = opts.m {
        let a = acyclicity(g, m, false)?;
        let c = acyclicity(g, m, true)?;
        out.line(format!("{m}-acyclic: {} {:?}   {m}-coacyclic: {} {:?}", yes(a.holds), a.failures, yes(c.holds), c.failures));
        out.put("acyclic", &a);
        out.put("coacyclic", &c);
    }
    Ok(())
}

fn restrict(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let w: Vec<Vec<Q>> = match (&opts.w, vstar(opts, input)?) {
        (Some(t), _) => subspace(t, input, SubspaceMode::Vectors)?.basis_vectors(),
        (None, Some(v)) => kernel(v.basis()).basis_vectors(),
        (None, None) => return Err(Failure::invalid("restrict needs --w or --vstar")),
    };
    if w.is_empty() {
        return Err(Failure::invalid("W is zero"));
    }
    let gt = input.g.restrict(&w)?;
    let wtext: Vec<String> = w
        .iter()
        .map(|v| format_covector(v, &input.set.vars).replace('d', "@"))
        .collect();
    out.put("w", &wtext);
    out.line(format!("W = <{}>", wtext.join(", ")));
    describe_orders(out, &gt);
    let t = cohomology_table(&gt, default_i_max(&gt))?;
    out.json.insert("cohomology".into(), cells(&t));
    out.text.push_str(&table("H^{i,j}(restricted)", &t));
    Ok(())
}

fn reduce(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let g = &input.g;
    let k = match opts.order {
        Some(k) => k,
        None => g.order_profile().r_min.ok_or_else(|| Failure::invalid("a free system has no reduction order"))?,
    };
    let h = g.equivalence_reduce(k)?;
    out.put("order", k);
    out.put("nu", h.nu());
    out.line(format!("er_{k}: first-order system with {} unknowns", h.nu()));
    describe_orders(out, &h);
    let t = cohomology_table(&h, default_i_max(&h))?;
    out.json.insert("cohomology".into(), cells(&t));
    out.text.push_str(&table("H^{i,j}(reduced)", &t));
    let inv = is_involutive(&h, opts.seed)?;
    out.put("involutive", inv.involutive);
    out.line(format!("involutive: {}", yes(inv.involutive)));
    Ok(())
}

fn descend(out: &mut Output, input: &Input) -> Res<()> {
    let g = &input.g;
    let d = g.descend()?;
    let (fix, steps) = g.descend_fixpoint()?;
    let common = d.cap().min(g.cap());
    let equal = (0..=common).all(|k| d.levels()[k] == g.levels()[k]);
    out.put("dims", g.dims());
    out.put("descended_dims", d.dims());
    out.put("descended_orders", d.order_profile().orders);
    out.put("strict", !equal);
    out.put("fixpoint_dims", fix.dims());
    out.put("fixpoint_steps", steps);
    out.line(format!("g:          {}", list(&g.dims())));
    out.line(format!("descended:  {}{}", list(&d.dims()), if equal { "   (equal to g)" } else { "" }));
    out.line(format!("least descender after {steps} step(s): {}", list(&fix.dims())));
    Ok(())
}

fn characteristics(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let g = &input.g;
    let vars = &input.set.vars;
    let complex = opts.field == Field::Qi;
    let Some(v) = vstar(opts, input)? else {
        let mut found = Vec::new();
        for d in 1..g.n() {
            let s = find_strongly_noncharacteristic(g, d, 50, opts.seed)?;
            let text = s.as_ref().map(|s| covectors(s, vars));
            out.line(match &text {
                Some(c) => format!("strongly non-characteristic of dim {d}: <{}>", c.join(", ")),
                None => format!("strongly non-characteristic of dim {d}: none found"),
            });
            found.push(json!({ "dim": d, "vstar": text }));
        }
        out.put("noncharacteristic", found);
        out.json.insert("char".into(), Value::Null);
        return Ok(());
    };
    let r = char_report(g, &v)?;
    out.line(format!("V* = <{}>", covectors(&v, vars).join(", ")));
    out.line(format!("  weakly characteristic:       {} (degree {:?})", yes(r.weakly_char), r.char_degree));
    out.line(format!("  strongly characteristic:     {}", yes(r.strongly_char)));
    out.line(format!("  weakly non-characteristic:   {} (degree {:?})", yes(r.weakly_nonchar), r.nonchar_degree));
    out.line(format!("  strongly non-characteristic: {}", yes(r.strongly_nonchar)));
    out.put("char", &r);
    let basis = v.basis_vectors();
    match basis.len() {
        1 => {
            let hit = if complex {
                let gl: SymbolicSystem<Gaussian> = g.lift(|c| Gaussian::from(c.clone()));
                let cv: Vec<Gaussian> = basis[0].iter().map(|c| Gaussian::from(c.clone())).collect();
                is_char_covector(&gl, &cv)?.is_some()
            } else {
                is_char_covector(g, &basis[0])?.is_some()
            };
            out.line(format!("  {} is characteristic: {}", format_covector(&basis[0], vars), yes(hit)));
            out.put("covector_characteristic", hit);
        }
        2 => {
            let p = pencil_char_search(g, &basis[0], &basis[1], complex)?;
            let cov = p.covector_text.as_ref().map(|c| format_entries(c, vars));
            out.line(format!(
                "  pencil: characteristic covector exists {}, every member {}, gcd {} (degree {}){}",
                yes(p.exists),
                yes(p.all),
                p.gcd,
                p.gcd_degree,
                cov.as_ref().map(|c| format!(", e.g. {c}")).unwrap_or_default()
            ));
            let mut pv = serde_json::to_value(&p).expect("serializable");
            pv["covector"] = json!(cov);
            out.json.insert("pencil".into(), pv);
        }
        _ => {}
    }
    Ok(())
}

fn spectral_cells(split: &Split<Q>) -> Res<Vec<Value>> {
    let mut rows = Vec::new();
    for l in 0..=split.adapted.cap() {
        for j in 0..=split.n().min(l) as i64 {
            for p in 0..=j {
                let q = j - p;
                let e: Vec<usize> = (0..=2).map(|r| split.spectral_term(l, r, p, q)).collect::<Result<_, _>>()?;
                if e.iter().any(|&d| d > 0) {
                    rows.push(json!({ "l": l, "p": p, "q": q, "e0": e[0], "e1": e[1], "e2": e[2] }));
                }
            }
        }
    }
    Ok(rows)
}

fn e1table(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let g = &input.g;
    let v = need_vstar(opts, input)?;
    let split = Split::new(g, &Frame::new(&v)?, g.cap())?;
    let rows = spectral_cells(&split)?;
    out.line(format!("V* = <{}>, t = {}, m = {}", covectors(&v, &input.set.vars).join(", "), split.t(), split.m()));
    let mut current = None;
    for r in &rows {
        let l = r["l"].as_u64().expect("l");
        if current != Some(l) {
            out.line(format!("l = {l}:   (p, q): E0 E1 E2"));
            current = Some(l);
        }
        out.line(format!("  ({}, {}): {} {} {}", r["p"], r["q"], r["e0"], r["e1"], r["e2"]));
    }
    out.json.insert("e1".into(), Value::Array(rows));
    let dp = split.dprime_table(split.i_max())?;
    out.json.insert("dprime".into(), cells(&dp));
    out.text.push_str(&table("H^{i,j}(g, d')", &dp));
    Ok(())
}

fn thm1(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let g = &input.g;
    let v = need_vstar(opts, input)?;
    let r = verify_thm1(g, &Frame::new(&v)?, opts.seed)?;
    out.line(format!("V* = <{}>", covectors(&v, &input.set.vars).join(", ")));
    match &r.failing_hypothesis {
        None => out.line("hypotheses met (strongly non-characteristic, involutive)"),
        Some(h) => out.line(format!("hypotheses not met: {h}")),
    }
    out.line(format!("restriction involutive: {}", yes(r.hypotheses.restriction_involutive)));
    for c in &r.cells {
        if c.lhs != 0 || c.rhs != 0 {
            out.line(format!("  ({}, {}): H = {}, formula = {}{}", c.i, c.j, c.lhs, c.rhs, if c.lhs == c.rhs { "" } else { "   MISMATCH" }));
        }
    }
    out.line(format!("mismatches: {}", r.mismatches.len()));
    out.put("thm1", &r);
    Ok(())
}

fn thm2(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let v = need_vstar(opts, input)?;
    let r = verify_thm2(&input.g, &v, opts.field == Field::Qi, opts.seed)?;
    let cov = r.covector.as_ref().map(|c| format_entries(c, &input.set.vars));
    out.line(format!("V* = <{}>", covectors(&v, &input.set.vars).join(", ")));
    out.line(format!("involutive: {}", yes(r.involutive)));
    out.line(format!("strongly characteristic: {}", yes(r.strongly_char)));
    out.line(format!(
        "contains a characteristic covector: {}{}",
        yes(r.exists_char_covector),
        cov.as_ref().map(|c| format!(" ({c})")).unwrap_or_default()
    ));
    out.line(format!("equivalence holds: {}{}", yes(r.equivalence_holds), if r.partial { " (sampled sub-pencils only)" } else { "" }));
    if !r.involutive && !r.equivalence_holds {
        out.line("note: the involutivity hypothesis fails");
    }
    let mut v2 = serde_json::to_value(&r).expect("serializable");
    v2["covector"] = json!(cov);
    out.json.insert("thm2".into(), v2);
    Ok(())
}

fn corollary(out: &mut Output, input: &Input, opts: &Opts) -> Res<()> {
    let g = &input.g;
    let v = need_vstar(opts, input)?;
    let frame = Frame::new(&v)?;
    let split = Split::new(g, &frame, g.cap())?;
    let r_min = g.order_profile().r_min;
    let mut checks = Vec::new();
    let mut bad = 0;
    for i in 0..=split.i_max() {
        for j in 1..=split.n() {
            let c = corollary_euler_check(&split, r_min, i, j)?;
            if !c.holds() {
                bad += 1;
                out.line(format!("  ({i}, {j}): terms {:?}, Euler sum {}", c.terms, c.euler_sum));
            }
            checks.push(c);
        }
    }
    let applicable = checks.iter().filter(|c| c.applicable).count();
    out.line(format!("exact sequences: {applicable} applicable, {bad} with nonzero Euler sum"));
    let lemma = lemma5_check(&split, r_min)?;
    let lemma_bad: Vec<(usize, usize)> = lemma.iter().filter(|c| !c.holds()).map(|c| (c.i, c.j)).collect();
    out.line(format!("d' case table: {} cells, failures {:?}", lemma.len(), lemma_bad));
    out.put("corollary", &checks);
    out.put("lemma5", &lemma);
    if let Some(m) = opts.m {
        let r = acyclicity_transfer(g, &frame, m)?;
        out.line(format!(
            "{m}-acyclic: g {}, restriction {} (against ord(g): {})",
            yes(r.g.holds),
            yes(r.restricted.holds),
            yes(r.restricted_against_g.holds)
        ));
        out.put("acyclicity", &r);
    }
    Ok(())
}
