//! Subcommand bodies. Each returns text, a JSON result and an exit status.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mlie::freelie::{graded_dim_witt, true_gencounts};
use mlie::gl2groups::{
    adjoint_identity_check, standard_relation_suite, symbol_factor, Gl2Span, Gl2Symbol, ImagAdjoint, RealAdjoint,
    RealRoute, Ref2x2, SuiteReport,
};
use mlie::jfun::j_coefficients;
use mlie::monster::oracle::verify_identities;
use mlie::monster::sample::small_rational;
use mlie::monster::{AlgebraCtx, LieElem};
use mlie::operators::{
    commutator_factor, layer_decompose, recompose, Factor, FactorWord, GradedOp, GradedOpJson, Grading, Truncation,
};
use mlie::presentation::{verify_all, PresentationConfig, Verdict};
use mlie::roots::{
    is_positive_imaginary_root, is_root, positive_system, positive_system_containing, q_form, root_mult_spec,
    root_span, specialize, window_spec_roots, GeneratorSubset, PositiveSystemDesc, RootVec,
};
use mlie::scalar::{fmt_q, parse_q, Q};

use crate::config::RunConfig;
use crate::{Command, Gl2ModelArg, Outcome, PossysArgs, RootsCmd, SpanArgs, VerifyCmd};

fn ok(text: String, json: Value) -> Result<Outcome> {
    Ok(Outcome { text, json, status: 0 })
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Jcoef { max } => jcoef(*max),
        Command::Dims { m, n, true_counts } => dims(cfg, *m, *n, *true_counts),
        Command::Roots { cmd } => match cmd {
            RootsCmd::Test { expr } => roots_test(expr),
            RootsCmd::Span(a) => span(cfg, a),
            RootsCmd::Possys(a) => possys(cfg, a),
        },
        Command::Span(a) => span(cfg, a),
        Command::Possys(a) => possys(cfg, a),
        Command::Bracket { x, y } => bracket(cfg, x, y),
        Command::Verify { cmd } => match cmd {
            VerifyCmd::Identities => verify_identities_cmd(cfg),
            VerifyCmd::Gl2 { model } => verify_gl2(cfg, *model),
            VerifyCmd::Presentation {
                relations,
                json,
                negate_c,
            } => verify_presentation(cfg, relations.clone(), json.as_deref(), *negate_c),
            VerifyCmd::Adjoint => verify_adjoint(cfg),
        },
        Command::Exp { x, apply, save } => exp(cfg, x, apply.as_deref(), save.as_deref()),
        Command::Decompose { input, n0 } => decompose(input, *n0),
        Command::Commutator { alpha, beta, u, v } => commutator(cfg, alpha, beta, u, v),
    }
}

fn jcoef(max: i64) -> Result<Outcome> {
    let t = j_coefficients(max)?;
    let mut text = String::new();
    for (j, c) in t.iter() {
        writeln!(text, "{j}\t{c}")?;
    }
    ok(text, serde_json::to_value(t.to_json())?)
}

fn dims(cfg: &RunConfig, m: i64, n: i64, true_counts: bool) -> Result<Outcome> {
    if m < 1 || n < 1 {
        bail!("bidegree ({m},{n}) must be positive");
    }
    if true_counts || !cfg.subset_given {
        let table = j_coefficients((m + n - 1).max(m * n))?;
        let witt = graded_dim_witt(m, n, &true_gencounts(&table));
        let c = table.get(m * n)?.clone();
        let verdict = if witt == c { "EQUAL" } else { "DIFFERENT" };
        let text = format!("Witt={witt}, c({})={c}, verdict {verdict}\n", m * n);
        let json = json!({"m": m.to_string(), "n": n.to_string(), "witt": witt.to_string(),
                          "c_mn": c.to_string(), "verdict": verdict});
        let mut out = Outcome { text, json, status: 0 };
        if witt != c {
            out.status = 1;
            writeln!(out.text, "repro: {}", cfg.repro())?;
        }
        return Ok(out);
    }
    // Letters e_{ℓ,jk} sit at (ℓ+1, j-ℓ), so bidegree (a,b) holds one letter per k of family a+b-1.
    let subset = cfg.subset.clone();
    let counts = move |a: i64, b: i64| -> BigInt {
        let j = a + b - 1;
        if a < 1 || b < 1 {
            return BigInt::from(0);
        }
        let k = subset.entries().iter().find(|(jj, _)| *jj == j).map_or(0, |(_, k)| *k);
        BigInt::from(k)
    };
    let witt = graded_dim_witt(m, n, &counts);
    ok(
        format!("Witt={witt} (subset {})\n", cfg.subset),
        json!({"m": m.to_string(), "n": n.to_string(), "subset": cfg.subset.to_string(), "witt": witt.to_string()}),
    )
}

fn parse_root(s: &str) -> Result<RootVec> {
    s.parse::<RootVec>().map_err(|e| anyhow!("{s}: {e}"))
}

fn roots_test(expr: &str) -> Result<Outcome> {
    let r = parse_root(expr)?;
    let sp = specialize(&r);
    let member = is_root(&r);
    let pos_im = is_positive_imaginary_root(&r);
    let neg_im = is_positive_imaginary_root(&r.neg());
    let kind = match (member, pos_im || neg_im) {
        (false, _) => "not a root",
        (true, true) => "imaginary",
        (true, false) => "real",
    };
    let mult = if sp.is_root() {
        let table = j_coefficients((sp.a * sp.b).abs().max(1))?;
        Some(root_mult_spec(sp, &table)?)
    } else {
        None
    };
    let mut text = String::new();
    writeln!(text, "root {r}")?;
    writeln!(text, "member {member} ({kind})")?;
    writeln!(text, "specialization ({},{}) lambda {}", sp.a, sp.b, r.lambda())?;
    writeln!(text, "norm {}", q_form(&r, &r))?;
    if let Some(m) = &mult {
        writeln!(text, "specialized multiplicity {m}")?;
    }
    ok(
        text,
        json!({
            "root": r.to_string(), "member": member, "kind": kind,
            "specialization": [sp.a.to_string(), sp.b.to_string()],
            "lambda": r.lambda().to_string(), "norm": q_form(&r, &r).to_string(),
            "specialized_multiplicity": mult.map(|m| m.to_string()),
        }),
    )
}

fn span(cfg: &RunConfig, a: &SpanArgs) -> Result<Outcome> {
    let (alpha, beta) = (parse_root(&a.alpha)?, parse_root(&a.beta)?);
    let s = root_span(&alpha, &beta, cfg.window, a.compare_s)?;
    let list = |set: &std::collections::BTreeSet<RootVec>| set.iter().map(RootVec::to_string).collect::<Vec<_>>();
    let mut text = format!("Sigma({alpha}, {beta}) within |lambda| <= {}: {} roots\n", cfg.window, s.sigma.len());
    for r in &s.sigma {
        writeln!(text, "  {r}")?;
    }
    let mut json = json!({"alpha": alpha.to_string(), "beta": beta.to_string(), "sigma": list(&s.sigma)});
    if let Some(sset) = &s.s_set {
        writeln!(text, "S({alpha}, {beta}): {} roots", sset.len())?;
        for r in sset {
            let mark = if s.sigma.contains(r) { "" } else { "  (not in Sigma)" };
            writeln!(text, "  {r}{mark}")?;
        }
        json["s"] = json!(list(sset));
    }
    ok(text, json)
}

fn possys(cfg: &RunConfig, a: &PossysArgs) -> Result<Outcome> {
    let desc = match (&a.containing, a.a, a.b) {
        (Some(pair), _, _) => positive_system_containing(&parse_root(&pair[0])?, &parse_root(&pair[1])?, cfg.window)?,
        (None, Some(x), Some(y)) => PositiveSystemDesc::integer(x, y),
        _ => bail!("give --a and --b, or --containing ALPHA BETA"),
    };
    let sys = positive_system(desc.clone(), cfg.window)?;
    let positive: Vec<(i64, i64)> = window_spec_roots(cfg.window)
        .into_iter()
        .filter(|r| sys.contains_spec(*r))
        .map(|r| (r.a, r.b))
        .collect();
    let mut text = format!("positive system {desc}, {} specialized roots with |lambda| <= {}\n", positive.len(), cfg.window);
    for (x, y) in &positive {
        writeln!(text, "  ({x},{y})")?;
    }
    ok(
        text,
        json!({"desc": desc.to_string(),
               "positive": positive.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect::<Vec<_>>()}),
    )
}

fn algebra(cfg: &RunConfig) -> Result<AlgebraCtx> {
    Ok(AlgebraCtx::with_subset(cfg.subset.clone(), cfg.window)?)
}

fn lambda_window(cfg: &RunConfig) -> Result<Truncation> {
    Ok(Truncation::for_subset(cfg.subset.clone(), Grading::lambda(), cfg.window, cfg.window)?)
}

fn bracket(cfg: &RunConfig, x: &str, y: &str) -> Result<Outcome> {
    let c = algebra(cfg)?;
    let (a, b) = (c.parse(x)?, c.parse(y)?);
    let r = c.bracket_checked(&a, &b)?;
    ok(format!("{r}\n"), json!({"x": a.to_string(), "y": b.to_string(), "bracket": r.to_json()}))
}

fn verify_identities_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let c = algebra(cfg)?;
    let r = verify_identities(&c)?;
    let mut text = String::new();
    for (id, n) in r.counts() {
        let bad = r.failures().filter(|f| f.id == id).count();
        writeln!(text, "{id}\t{}/{n}", n - bad)?;
    }
    let failures: Vec<Value> = r
        .failures()
        .map(|f| json!({"id": f.id, "left": f.left, "right": f.right,
                        "oracle": f.oracle.to_string(), "formula": f.formula.to_string()}))
        .collect();
    for f in r.failures() {
        writeln!(text, "FAIL {} [{}, {}]: oracle {} formula {}", f.id, f.left, f.right, f.oracle, f.formula)?;
    }
    let status = u8::from(!r.all_pass());
    if status != 0 {
        writeln!(text, "repro: {}", cfg.repro())?;
    }
    let json = json!({"checks": r.checks.len().to_string(), "distinct_k_pair": r.has_distinct_k_pair(),
                      "all_pass": r.all_pass(), "failures": failures});
    Ok(Outcome { text, json, status })
}

fn suite_lines(r: &SuiteReport, text: &mut String) -> Result<Value> {
    writeln!(text, "model {}", r.model)?;
    let mut per: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for c in &r.checks {
        let e = per.entry(c.id.as_str()).or_default();
        e.1 += 1;
        if c.holds {
            e.0 += 1;
        }
    }
    for (id, (good, n)) in &per {
        writeln!(text, "  {id}\t{good}/{n}")?;
    }
    for f in r.failures() {
        writeln!(text, "  FAIL {} at {}", f.id, f.params)?;
    }
    if let Some(k) = r.kernel_is_center {
        writeln!(text, "  kernel is the scalar center: {k}")?;
    }
    writeln!(text, "  scalar center acts trivially: {}", r.center_trivial)?;
    Ok(json!({
        "model": r.model, "all_pass": r.all_pass(),
        "kernel_is_center": r.kernel_is_center, "center_trivial": r.center_trivial,
        "failures": r.failures().map(|f| json!({"id": f.id, "params": f.params})).collect::<Vec<_>>(),
    }))
}

fn verify_gl2(cfg: &RunConfig, model: Gl2ModelArg) -> Result<Outcome> {
    let mut reports = Vec::new();
    match model {
        Gl2ModelArg::Ref2x2 => reports.push(standard_relation_suite(&Ref2x2, cfg.samples, cfg.seed)?),
        Gl2ModelArg::AdjointM => {
            let t = lambda_window(cfg)?;
            for route in [RealRoute::ClosedForm, RealRoute::Series] {
                reports.push(standard_relation_suite(&RealAdjoint { t: &t, route }, cfg.samples, cfg.seed)?);
            }
        }
        Gl2ModelArg::AdjointLjk => {
            for i in cfg.subset.ext_indices() {
                let subset = GeneratorSubset::new(vec![(i.j, i.k)])?;
                let ctx = Arc::new(AlgebraCtx::with_subset(subset, i.j + 1)?);
                let m = ImagAdjoint::new(Gl2Span::new(ctx, i)?);
                reports.push(standard_relation_suite(&m, cfg.samples, cfg.seed)?);
            }
        }
    }
    let mut text = String::new();
    let mut json = Vec::new();
    for r in &reports {
        json.push(suite_lines(r, &mut text)?);
    }
    let status = u8::from(reports.iter().any(|r| !r.all_pass()));
    if status != 0 {
        writeln!(text, "repro: {}", cfg.repro())?;
    }
    Ok(Outcome {
        text,
        json: Value::Array(json),
        status,
    })
}

fn verify_presentation(
    cfg: &RunConfig,
    relations: Option<Vec<String>>,
    json_out: Option<&std::path::Path>,
    negate_c: bool,
) -> Result<Outcome> {
    let pc = PresentationConfig {
        relations,
        subset: cfg.subset.clone(),
        height: cfg.window,
        samples: cfg.samples,
        seed: cfg.seed,
        negate_c,
        fallback_window: 3 * cfg.window,
        threads: cfg.threads,
    };
    let report = verify_all(&pc);
    let mut text = String::new();
    for (id, (good, bad, conf)) in report.tally() {
        let mut line = format!("{id}\t{good}/{}", good + bad + conf);
        if conf > 0 {
            write!(line, "\t({conf} configuration errors)")?;
        }
        writeln!(text, "{line}")?;
    }
    for r in &report.instances {
        match &r.verdict {
            Verdict::Holds => {}
            Verdict::Fails { witness } => {
                writeln!(text, "FAIL {}#{} in {}: {} = {}\n  {witness}\n  repro: {}", r.id, r.index, r.host, r.lhs, r.rhs, r.repro)?
            }
            Verdict::ConfigError { message } => {
                writeln!(text, "CONFIG {}#{}: {message}\n  repro: {}", r.id, r.index, r.repro)?
            }
        }
    }
    let json = serde_json::to_value(&report)?;
    if let Some(p) = json_out {
        let doc = json!({"schema": crate::config::OUTPUT_SCHEMA, "config": cfg, "result": json});
        std::fs::write(p, format!("{}\n", serde_json::to_string_pretty(&doc)?))
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(Outcome {
        text,
        json,
        status: report.exit_code() as u8,
    })
}

/// A seeded element of P̂⁺ as a product of torus, X₋₁, w̃₋₁ and exponentials of
/// positive letters, with a readable description.
fn random_parabolic(t: &Truncation, rng: &mut ChaCha8Rng) -> Result<(FactorWord, String)> {
    let letters = t.ctx().subset().ext_indices();
    let mut w = FactorWord::default();
    let mut desc = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        match rng.gen_range(0..4) {
            0 => {
                let (s1, s2) = (small_rational(rng, 3), small_rational(rng, 3));
                desc.push(format!("T({},{})", fmt_q(&s1), fmt_q(&s2)));
                w.factors.push(Factor::Torus(s1, s2));
            }
            1 => {
                let sym = Gl2Symbol::Xm1(small_rational(rng, 4));
                desc.push(sym.to_string());
                w.factors.push(symbol_factor(&sym, t)?);
            }
            2 => {
                desc.push(Gl2Symbol::Wm1.to_string());
                w.factors.push(symbol_factor(&Gl2Symbol::Wm1, t)?);
            }
            _ => {
                let i = letters[rng.gen_range(0..letters.len())];
                let x = t.ctx().make_e(i.l, i.j, i.k)?.scaled(&small_rational(rng, 4));
                desc.push(format!("exp({x})"));
                w.factors.push(Factor::Exp(x));
            }
        }
    }
    Ok((w, desc.join(" ")))
}

fn verify_adjoint(cfg: &RunConfig) -> Result<Outcome> {
    let t = lambda_window(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let letters = cfg.subset.ext_indices();
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut status = 0;
    for n in 0..cfg.samples {
        let (g, desc) = random_parabolic(&t, &mut rng)?;
        let mut x = t.ctx().zero();
        for _ in 0..2 {
            let i = letters[rng.gen_range(0..letters.len())];
            x.add_scaled(&t.ctx().make_e(i.l, i.j, i.k)?, &small_rational(&mut rng, 4));
        }
        let r = adjoint_identity_check(&t, &g, &x)?;
        writeln!(text, "{n}\t{}\tg = {desc}; x = {x}; gx = {}", if r.holds { "ok" } else { "FAIL" }, r.gx)?;
        if !r.holds {
            status = 1;
        }
        rows.push(json!({"g": desc, "x": x.to_string(), "gx": r.gx.to_string(), "holds": r.holds}));
    }
    if status != 0 {
        writeln!(text, "repro: {}", cfg.repro())?;
    }
    Ok(Outcome {
        text,
        json: Value::Array(rows),
        status,
    })
}

fn exp(cfg: &RunConfig, x: &str, apply: Option<&str>, save: Option<&std::path::Path>) -> Result<Outcome> {
    let t = lambda_window(cfg)?;
    let xe = t.ctx().parse(x)?;
    let op = t.exp_ad(&xe)?;
    if let Some(p) = save {
        std::fs::write(p, serde_json::to_string_pretty(&op.to_json())?).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(v) = apply {
        let ve = t.ctx().parse(v)?;
        let img = op.apply(&ve)?;
        return ok(format!("{img}\n"), json!({"x": xe.to_string(), "v": ve.to_string(), "image": img.to_json()}));
    }
    let mut text = String::new();
    let basis = op.basis().clone();
    for i in 0..basis.len() {
        let v = basis.vector(i);
        let img = op.apply(&v)?;
        if img != v {
            writeln!(text, "{v} -> {img}")?;
        }
    }
    ok(text, serde_json::to_value(op.to_json())?)
}

fn decompose(input: &std::path::Path, n0: i64) -> Result<Outcome> {
    let raw = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let j: GradedOpJson = serde_json::from_str(&raw).with_context(|| format!("parsing {}", input.display()))?;
    let subset: GeneratorSubset = j.subset.parse()?;
    let mut grading = Grading::spec(j.grading[0], j.grading[1]);
    for [jj, k, tw] in &j.twist {
        grading.twist.insert((*jj, *k), *tw);
    }
    let t = Truncation::for_subset(subset, grading, j.height, j.window)?;
    let op = GradedOp::from_json(&j, t.basis()?)?;
    let layers = layer_decompose(&t, &op, n0)?;
    let back = t.compile(&recompose(&layers))?;
    let agrees = back.equal_up_to(&op, t.height())?;
    let mut text = String::new();
    for (g, x) in &layers.layers {
        writeln!(text, "layer {g}: {x}")?;
    }
    writeln!(text, "recomposition agrees: {agrees}")?;
    let json = json!({
        "n0": n0.to_string(),
        "layers": layers.layers.iter().map(|(g, x)| json!({"grade": g.to_string(), "x": x.to_json()})).collect::<Vec<_>>(),
        "recomposition_agrees": agrees,
    });
    Ok(Outcome {
        text,
        json,
        status: u8::from(!agrees),
    })
}

/// The root vector of a letter root ±α₋₁ or ±(ℓα₋₁ + α_{jk}).
fn root_vector(ctx: &AlgebraCtx, r: &RootVec) -> Result<LieElem> {
    let (pos, sgn) = if r.imag.values().all(|&c| c >= 0) && r.coeff_neg1 >= 0 {
        (r.clone(), true)
    } else {
        (r.neg(), false)
    };
    if pos == RootVec::alpha_neg1() {
        return Ok(if sgn { ctx.em1() } else { ctx.fm1() });
    }
    match pos.imag.iter().collect::<Vec<_>>().as_slice() {
        [(&(j, k), &1)] if (0..j).contains(&pos.coeff_neg1) => {
            let l = pos.coeff_neg1;
            Ok(if sgn { ctx.make_e(l, j, k)? } else { ctx.make_f(l, j, k)? })
        }
        _ => bail!("{r} is not ±α₋₁ or ±α_(l,jk); its root space has no single letter"),
    }
}

fn commutator(cfg: &RunConfig, alpha: &str, beta: &str, u: &str, v: &str) -> Result<Outcome> {
    let (a, b) = (parse_root(alpha)?, parse_root(beta)?);
    let parse = |s: &str| parse_q(s).ok_or_else(|| anyhow!("not a rational: {s}"));
    let (u, v): (Q, Q) = (parse(u)?, parse(v)?);
    let mut families: BTreeMap<i64, i64> = BTreeMap::new();
    for (j, k) in a.imag.keys().chain(b.imag.keys()) {
        let e = families.entry(*j).or_insert(0);
        *e = (*e).max(*k);
    }
    if families.is_empty() {
        bail!("at least one root must involve an imaginary simple root");
    }
    let subset = GeneratorSubset::new(families.into_iter().collect())?;
    let lam = Grading::lambda();
    let grading = if lam.root(&a) > 0 && lam.root(&b) > 0 {
        lam
    } else {
        let desc = positive_system_containing(&a, &b, cfg.window)?;
        Grading::from_desc(&desc).ok_or_else(|| anyhow!("{desc} has irrational coefficients"))?
    };
    let t = Truncation::for_subset(subset, grading.clone(), cfg.window, 3 * cfg.window)?;
    let (x, y) = (root_vector(t.ctx(), &a)?, root_vector(t.ctx(), &b)?);
    let r = commutator_factor(&t, &x, &y, &u, &v)?;
    let mut text = format!("host grading {grading}, height {}\n", cfg.window);
    for f in &r.factors {
        writeln!(text, "  z[{}] (grade {}, u^{} v^{}) = {}", f.root, f.grade, f.i, f.j, f.z)?;
    }
    if r.factors.is_empty() {
        writeln!(text, "  commutator is trivial")?;
    }
    writeln!(
        text,
        "leading {} recomposition {} polynomial {} span {}",
        r.leading_ok, r.recomposition_ok, r.polynomial_ok, r.span_ok
    )?;
    if !r.beyond_height.is_empty() {
        let rest: Vec<String> = r.beyond_height.iter().map(RootVec::to_string).collect();
        writeln!(text, "span roots above the height: {}", rest.join(", "))?;
    }
    let status = u8::from(!r.all_ok());
    if status != 0 {
        writeln!(text, "repro: {}", cfg.repro())?;
    }
    let json = json!({
        "grading": grading.to_string(),
        "factors": r.factors.iter().map(|f| json!({
            "root": f.root.to_string(), "grade": f.grade.to_string(),
            "i": f.i.to_string(), "j": f.j.to_string(), "z": f.z.to_json(),
        })).collect::<Vec<_>>(),
        "leading_ok": r.leading_ok, "recomposition_ok": r.recomposition_ok,
        "polynomial_ok": r.polynomial_ok, "span_ok": r.span_ok,
    });
    Ok(Outcome { text, json, status })
}
