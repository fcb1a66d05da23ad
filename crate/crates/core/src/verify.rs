//! Oracle-backed checks of the structure theory at small sizes.
//!
//! Each suite returns a list of named checks. Reports are plain JSON values
//! with sorted keys so equal seeds give byte-identical output.

use rand::Rng;
use serde_json::{json, Value};

use crate::codes::{
    self, classify_principal, constacyclic_shift, describe, dual_torsion_exponent, generators, sample_boundary_spec,
    sample_spec, CodeKind, CodeSpec, DualOptions, DualStatus, FLAGGED_BRANCHES,
};
use crate::error::{Error, Result};
use crate::json::spec_to_json;
use crate::oracle::{Oracle, Subspace};
use crate::poly::{crt_factorization, Ring};
use crate::quotient::{Case, Nilpotency, QElem, QuotientCtx};
use crate::ring_r::RElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Nilpotency,
    Counts,
    Duals,
    Distinctness,
    PrincipalCompleteness,
    Crt,
    Nonchain,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Nilpotency,
        Suite::Counts,
        Suite::Duals,
        Suite::Distinctness,
        Suite::PrincipalCompleteness,
        Suite::Crt,
        Suite::Nonchain,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Nilpotency => "nilpotency",
            Suite::Counts => "counts",
            Suite::Duals => "duals",
            Suite::Distinctness => "distinctness",
            Suite::PrincipalCompleteness => "principal-completeness",
            Suite::Crt => "crt",
            Suite::Nonchain => "nonchain",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Sampled C/D specs, pairs, or random elements per suite.
    pub samples: usize,
    /// Largest ambient F_p-dimension the oracle may use.
    pub max_dim: usize,
    /// Maximum number of z-digits in sampled specs.
    pub z_bound: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            samples: 40,
            max_dim: 128,
            z_bound: 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    /// Set when the suite does not apply to the context.
    pub skipped: Option<String>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "skipped": self.skipped,
            "passed": self.passed(),
            "total": self.checks.len(),
            "failed": self.failures(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

fn skipped(suite: Suite, why: String) -> SuiteReport {
    SuiteReport {
        suite,
        skipped: Some(why),
        checks: Vec::new(),
    }
}

fn subspace_json(o: &Oracle, s: &Subspace) -> Value {
    json!(o.export(s))
}

fn require_oracle(ctx: &QuotientCtx, budget: &Budget) -> Result<()> {
    if ctx.fp_dim() > budget.max_dim {
        return Err(Error::RangeViolation(format!(
            "ambient dimension {} exceeds the oracle cap {}",
            ctx.fp_dim(),
            budget.max_dim
        )));
    }
    Ok(())
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run<R: Rng + ?Sized>(ctx: &QuotientCtx, suite: Suite, budget: &Budget, rng: &mut R) -> Result<Vec<SuiteReport>> {
    match suite {
        Suite::All => Suite::EACH.iter().map(|&s| run_one(ctx, s, budget, rng)).collect(),
        s => Ok(vec![run_one(ctx, s, budget, rng)?]),
    }
}

fn run_one<R: Rng + ?Sized>(ctx: &QuotientCtx, suite: Suite, budget: &Budget, rng: &mut R) -> Result<SuiteReport> {
    let local = matches!(ctx.case(), Case::NcV | Case::NcFull | Case::NcU);
    let classified_only = || skipped(suite, format!("no classification for case {}", ctx.case()));
    match suite {
        Suite::Nilpotency => Ok(nilpotency(ctx, suite)),
        Suite::Counts | Suite::Duals if !local => Ok(classified_only()),
        Suite::Distinctness | Suite::PrincipalCompleteness if !local => Ok(classified_only()),
        Suite::Counts => {
            require_oracle(ctx, budget)?;
            counts(ctx, suite, budget, rng)
        }
        Suite::Duals => {
            require_oracle(ctx, budget)?;
            duals(ctx, suite, budget, rng)
        }
        Suite::Distinctness => {
            require_oracle(ctx, budget)?;
            distinctness(ctx, suite, budget, rng)
        }
        Suite::PrincipalCompleteness => {
            require_oracle(ctx, budget)?;
            principal(ctx, suite, budget, rng)
        }
        Suite::Crt => crt(ctx, suite, budget, rng),
        Suite::Nonchain => {
            require_oracle(ctx, budget)?;
            nonchain(ctx, suite)
        }
        Suite::All => unreachable!("expanded by run"),
    }
}

fn nilpotency(ctx: &QuotientCtx, suite: Suite) -> SuiteReport {
    let measured = ctx.nilpotency_index(&ctx.y());
    let predicted = ctx.predicted_nilpotency();
    let got = match measured {
        Nilpotency::Index(k) => json!(k),
        Nilpotency::Infinite => json!(null),
    };
    SuiteReport {
        suite,
        skipped: None,
        checks: vec![Check::new(
            "nilpotency-index",
            measured == Nilpotency::Index(predicted),
            json!({"case": ctx.case().tag(), "measured": got, "predicted": predicted}),
        )],
    }
}

/// Code specs shared by the counts and duals suites: A0, A1, every B,
/// sampled C and D, and boundary specs l = p^s + t.
pub fn sample_suite_specs<R: Rng + ?Sized>(ctx: &QuotientCtx, budget: &Budget, rng: &mut R) -> Result<Vec<CodeSpec>> {
    let mut specs = vec![CodeSpec::a0(), CodeSpec::a1()];
    specs.extend((0..2 * ctx.ps()).map(CodeSpec::b));
    for i in 0..budget.samples {
        let kind = if i % 2 == 0 { CodeKind::C } else { CodeKind::D };
        specs.push(sample_spec(ctx, kind, budget.z_bound, rng)?);
    }
    if ctx.ps() >= 2 {
        let modes: &[bool] = if ctx.twisted() { &[false, true] } else { &[false] };
        for &degenerate in modes {
            for kind in [CodeKind::C, CodeKind::D] {
                // boundary D needs t + 1 < p^s
                if kind == CodeKind::D && ctx.ps() < 3 {
                    continue;
                }
                for _ in 0..(budget.samples / 10).max(1) {
                    specs.push(sample_boundary_spec(ctx, kind, degenerate, rng)?);
                }
            }
        }
    }
    Ok(specs)
}

fn counts<R: Rng + ?Sized>(ctx: &QuotientCtx, suite: Suite, budget: &Budget, rng: &mut R) -> Result<SuiteReport> {
    let o = Oracle::new(ctx);
    let opts = DualOptions { verify_max_dim: 0 };
    let mut checks = Vec::new();
    for spec in sample_suite_specs(ctx, budget, rng)? {
        let d = describe(ctx, &spec, opts)?;
        let code = o.span_closure(&generators(ctx, &spec)?);
        let mut detail = json!({
            "spec": spec_to_json(ctx.field(), &spec),
            "dim_fp": d.dim_fp,
            "oracle_dim": code.dim(),
        });
        let ok = code.dim() == d.dim_fp;
        if !ok {
            detail["counterexample"] = subspace_json(&o, &code);
        }
        checks.push(Check::new(format!("count {spec}"), ok, detail));
    }
    Ok(SuiteReport {
        suite,
        skipped: None,
        checks,
    })
}

/// Closed under the alpha-constacyclic shift, checked on a basis.
pub fn shift_invariant(o: &Oracle, s: &Subspace) -> bool {
    let ctx = o.ctx();
    s.rows().iter().all(|row| {
        let word = o.unflatten(row);
        let shifted = constacyclic_shift(ctx.ring(), word.coeffs(), ctx.alpha());
        let e = ctx.from_coeffs(shifted).expect("length n");
        s.contains_vec(&o.flatten(&e))
    })
}

fn duals<R: Rng + ?Sized>(ctx: &QuotientCtx, suite: Suite, budget: &Budget, rng: &mut R) -> Result<SuiteReport> {
    let o = Oracle::new(ctx);
    let dual_ctx = ctx.dual()?;
    let od = Oracle::new(&dual_ctx);
    let opts = DualOptions {
        verify_max_dim: budget.max_dim,
    };
    let full = 12 * ctx.field().m() * ctx.ps();
    let mut checks = Vec::new();
    for spec in sample_suite_specs(ctx, budget, rng)? {
        let d = describe(ctx, &spec, opts)?;
        let code = o.span_closure(&generators(ctx, &spec)?);
        let truth = o.inner_dual(&code, &od)?;
        let via_ann = o.reciprocal_ideal(&o.ideal_generators(&o.annihilator(&code)), &od)?;
        let synth = od.span_closure(&d.dual.generators.iter().map(|g| dual_ctx.reduce(g)).collect::<Vec<QElem>>());
        let eps = dual_torsion_exponent(&o, &code);
        let sum_ok = code.dim() + truth.dim() == full;
        let eq_ok = synth.equal(&truth)? && via_ann.equal(&truth)?;
        let eps_ok = eps == Some(2 * ctx.ps() - d.res_exp);
        let shift_ok = shift_invariant(&o, &code) && shift_invariant(&od, &truth);
        let localized = match d.dual.status {
            DualStatus::Verified => true,
            DualStatus::Resolved => FLAGGED_BRANCHES.contains(&d.dual.branch.as_str()),
            DualStatus::Unverified => false,
        };
        let ok = sum_ok && eq_ok && eps_ok && shift_ok && localized;
        let mut detail = json!({
            "spec": spec_to_json(ctx.field(), &spec),
            "branch": d.dual.branch,
            "status": d.dual.status.tag(),
            "dim": code.dim(),
            "dual_dim": truth.dim(),
            "dual_torsion": eps,
            "dims_sum": sum_ok,
            "spans_equal": eq_ok,
            "shift_closed": shift_ok,
            "discrepancy_localized": localized,
            "diagnostics": d.diagnostics.iter().map(crate::json::diagnostic_to_json).collect::<Vec<_>>(),
        });
        if !ok {
            detail["counterexample"] = json!({
                "code": subspace_json(&o, &code),
                "synthesized_dual": subspace_json(&od, &synth),
                "oracle_dual": subspace_json(&od, &truth),
            });
        }
        checks.push(Check::new(format!("dual {spec}"), ok, detail));
    }
    Ok(SuiteReport {
        suite,
        skipped: None,
        checks,
    })
}

fn random_kind<R: Rng + ?Sized>(rng: &mut R) -> CodeKind {
    match rng.gen_range(0..10) {
        0 => CodeKind::B,
        1..=5 => CodeKind::C,
        _ => CodeKind::D,
    }
}

fn distinctness<R: Rng + ?Sized>(ctx: &QuotientCtx, suite: Suite, budget: &Budget, rng: &mut R) -> Result<SuiteReport> {
    let o = Oracle::new(ctx);
    let pool_size = (budget.samples / 4).clamp(8, 64);
    let mut pool: Vec<(CodeSpec, Subspace)> = Vec::new();
    while pool.len() < pool_size {
        let spec = sample_spec(ctx, random_kind(rng), budget.z_bound, rng)?;
        if pool.iter().all(|(s, _)| *s != spec) {
            let sub = o.span_closure(&generators(ctx, &spec)?);
            pool.push((spec, sub));
        }
    }
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    let pairs = budget.samples.max(1);
    for _ in 0..pairs {
        let i = rng.gen_range(0..pool.len());
        let mut j = rng.gen_range(0..pool.len() - 1);
        if j >= i {
            j += 1;
        }
        if pool[i].1.equal(&pool[j].1)? {
            failures.push(json!({
                "first": spec_to_json(ctx.field(), &pool[i].0),
                "second": spec_to_json(ctx.field(), &pool[j].0),
                "subspace": subspace_json(&o, &pool[i].1),
            }));
        }
    }
    checks.push(Check::new(
        "distinct specs give distinct ideals",
        failures.is_empty(),
        json!({"pairs": pairs, "pool": pool.len(), "collisions": failures}),
    ));
    Ok(SuiteReport {
        suite,
        skipped: None,
        checks,
    })
}

// Random element biased toward small ideals: a random element times y^k and maybe u.
fn random_nonunit<R: Rng + ?Sized>(ctx: &QuotientCtx, rng: &mut R) -> QElem {
    let mut f = ctx.random(rng);
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(0..=2 * ctx.ps());
        f = ctx.mul(&f, &ctx.pow(&ctx.y(), k as u128));
    }
    if rng.gen_bool(0.3) {
        f = ctx.mul(&f, &ctx.u());
    }
    f
}

fn principal<R: Rng + ?Sized>(ctx: &QuotientCtx, suite: Suite, budget: &Budget, rng: &mut R) -> Result<SuiteReport> {
    let o = Oracle::new(ctx);
    let mut checks = Vec::new();
    for i in 0..budget.samples {
        // half uniform, half biased toward proper ideals
        let f = if i % 2 == 0 { ctx.random(rng) } else { random_nonunit(ctx, rng) };
        let spec = classify_principal(ctx, &f)?;
        let canonical = codes::validate_spec(ctx, &spec)? == spec;
        let want = o.span_closure(&[f.clone()]);
        let got = o.span_closure(&generators(ctx, &spec)?);
        let ok = canonical && got.equal(&want)?;
        let mut detail = json!({"spec": spec_to_json(ctx.field(), &spec), "dim": want.dim(), "uniform": i % 2 == 0});
        if !ok {
            detail["counterexample"] = json!({
                "element": crate::json::qelem_to_json(ctx, &f),
                "ideal": subspace_json(&o, &want),
                "spec_span": subspace_json(&o, &got),
            });
        }
        checks.push(Check::new(format!("principal #{i}"), ok, detail));
    }
    Ok(SuiteReport {
        suite,
        skipped: None,
        checks,
    })
}

fn random_cube<R: Rng + ?Sized>(ctx: &QuotientCtx, rng: &mut R) -> RElem {
    let f = ctx.field();
    let c = f.random_nonzero(rng);
    RElem::new(f.mul(&f.mul(&c, &c), &c), f.random(rng), f.random(rng), f.random(rng))
}

fn crt<R: Rng + ?Sized>(ctx: &QuotientCtx, suite: Suite, budget: &Budget, rng: &mut R) -> Result<SuiteReport> {
    let ring = ctx.ring();
    let rr = ctx.rpoly_ring();
    let target = |a: &RElem| rr.sub(&rr.monomial(ring.one(), ctx.n()), &rr.constant(a.clone()));
    let mut checks = Vec::new();
    let mut alphas = Vec::new();
    if ctx.case() == Case::Cube {
        alphas.push(ctx.alpha().clone());
    }
    for _ in 0..10 {
        alphas.push(random_cube(ctx, rng));
    }
    let expect = if ctx.field().q() % 3 == 1 { 3 } else { 2 };
    for a in &alphas {
        let factors = crt_factorization(ring, a, ctx.s())?;
        let prod = factors.iter().fold(rr.one(), |acc, g| rr.mul(&acc, g));
        let ok = prod == target(a) && factors.len() == expect;
        checks.push(Check::new(
            "factor product",
            ok,
            json!({"alpha": crate::json::relem_to_json(ctx.field(), a), "factors": factors.len()}),
        ));
    }
    if ctx.case() == Case::Cube && ctx.fp_dim() <= budget.max_dim {
        // Direct sums of ideals in the components: dimensions add up.
        let o = Oracle::new(ctx);
        let factors = crt_factorization(ring, ctx.alpha(), ctx.s())?;
        for _ in 0..budget.samples.clamp(1, 10) {
            let parts: Vec<QElem> = (0..factors.len())
                .map(|k| {
                    let cof = factors
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .fold(rr.one(), |acc, (_, g)| rr.mul(&acc, g));
                    ctx.mul(&ctx.reduce(&cof), &random_nonunit(ctx, rng))
                })
                .collect();
            let sum = parts.iter().fold(ctx.zero(), |acc, e| ctx.add(&acc, e));
            let whole = o.span_closure(&[sum]).dim();
            let pieces: Vec<usize> = parts.iter().map(|e| o.span_closure(&[e.clone()]).dim()).collect();
            checks.push(Check::new(
                "direct sum dimension",
                whole == pieces.iter().sum::<usize>(),
                json!({"whole": whole, "components": pieces}),
            ));
        }
    }
    Ok(SuiteReport {
        suite,
        skipped: None,
        checks,
    })
}

fn nonchain(ctx: &QuotientCtx, suite: Suite) -> Result<SuiteReport> {
    let o = Oracle::new(ctx);
    let y = ctx.y();
    let (u, v) = (ctx.u(), ctx.v());
    let cases: Vec<(&str, QElem, Vec<QElem>)> = match ctx.case() {
        Case::NcV | Case::NcFull => vec![("u not in <y>", u.clone(), vec![y.clone()]), ("y not in <u>", y, vec![u])],
        Case::NcU => vec![("v not in <y>", v.clone(), vec![y.clone()]), ("y not in <v>", y, vec![v])],
        Case::NcUv => vec![
            ("u not in <y, v>", u.clone(), vec![y.clone(), v.clone()]),
            ("y not in <u, v>", y, vec![u, v]),
        ],
        c => return Ok(skipped(suite, format!("no non-chain witnesses for case {c}"))),
    };
    let mut checks = Vec::new();
    for (name, elem, gens) in cases {
        let ideal = o.span_closure(&gens);
        let outside = !o.member(&elem, &ideal)?;
        checks.push(Check::new(name, outside, json!({"ideal_dim": ideal.dim()})));
    }
    Ok(SuiteReport {
        suite,
        skipped: None,
        checks,
    })
}
