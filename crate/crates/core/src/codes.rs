//! Symbolic descriptors for the ideals of R_alpha in the local non-chain
//! cases, their invariants, counts and duals.
//!
//! Notation: y = x^3 - alpha_0. Every ideal is one of
//!
//! * A0 = 0, A1 = R_alpha,
//! * B = <u y^l>,
//! * C = <y^l + u y^t z>,
//! * D = <y^l + u y^t z, u y^mu>,
//!
//! with z = sum_k (z0 x^2 + z1 x + z2) y^k either zero or a unit.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::oracle::{Oracle, Subspace};
use crate::poly::{adic_expand, digits_to_fpoly, PolyRing, RPoly, Ring};
use crate::quotient::{Case, QElem, QuotientCtx};
use crate::ring_r::{RElem, RingR};

/// One z-digit (z0, z1, z2), meaning z0 x^2 + z1 x + z2.
pub type ZDigit = [FieldElem; 3];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZSeries {
    pub digits: Vec<ZDigit>,
}

impl ZSeries {
    pub fn zero() -> Self {
        ZSeries { digits: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeKind {
    A0,
    A1,
    B,
    C,
    D,
}

impl CodeKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CodeKind::A0 => "A0",
            CodeKind::A1 => "A1",
            CodeKind::B => "B",
            CodeKind::C => "C",
            CodeKind::D => "D",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "A0" => CodeKind::A0,
            "A1" => CodeKind::A1,
            "B" => CodeKind::B,
            "C" => CodeKind::C,
            "D" => CodeKind::D,
            _ => return Err(Error::Parse(format!("unknown code kind {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub ell: usize,
    pub t: usize,
    pub mu: Option<usize>,
    pub z: ZSeries,
}

impl CodeSpec {
    pub fn a0() -> Self {
        CodeSpec {
            kind: CodeKind::A0,
            ell: 0,
            t: 0,
            mu: None,
            z: ZSeries::zero(),
        }
    }

    pub fn a1() -> Self {
        CodeSpec {
            kind: CodeKind::A1,
            ..CodeSpec::a0()
        }
    }

    pub fn b(ell: usize) -> Self {
        CodeSpec {
            kind: CodeKind::B,
            ell,
            ..CodeSpec::a0()
        }
    }

    pub fn c(ell: usize, t: usize, z: ZSeries) -> Self {
        CodeSpec {
            kind: CodeKind::C,
            ell,
            t,
            mu: None,
            z,
        }
    }

    pub fn d(ell: usize, t: usize, mu: usize, z: ZSeries) -> Self {
        CodeSpec {
            kind: CodeKind::D,
            ell,
            t,
            mu: Some(mu),
            z,
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CodeKind::A0 | CodeKind::A1 => write!(f, "{}", self.kind.tag()),
            CodeKind::B => write!(f, "B(l={})", self.ell),
            CodeKind::C => write!(f, "C(l={}, t={}, z={:?})", self.ell, self.t, self.z.digits),
            CodeKind::D => write!(
                f,
                "D(l={}, t={}, mu={}, z={:?})",
                self.ell,
                self.t,
                self.mu.unwrap_or(0),
                self.z.digits
            ),
        }
    }
}

/// Structured warning attached to descriptors and command output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: String,
    pub branch: Option<String>,
    pub message: String,
}

impl Diagnostic {
    fn new(kind: &str, branch: Option<&str>, message: String) -> Self {
        Diagnostic {
            kind: kind.into(),
            branch: branch.map(Into::into),
            message,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualStatus {
    /// Synthesized generators match the oracle dual.
    Verified,
    /// The transcribed formula disagreed with the oracle; the returned
    /// generators are the oracle-confirmed replacement.
    Resolved,
    /// Above the verification threshold; not checked.
    Unverified,
}

impl DualStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            DualStatus::Verified => "verified",
            DualStatus::Resolved => "resolved",
            DualStatus::Unverified => "unverified",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DualSpec {
    pub branch: String,
    pub generators: Vec<RPoly>,
    pub ambient: QuotientCtx,
    pub status: DualStatus,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug)]
pub struct CodeDescriptor {
    pub spec: CodeSpec,
    pub im: usize,
    pub res_exp: usize,
    pub tor_exp: usize,
    pub dim_fp: usize,
    pub eta: BigUint,
    pub dual: DualSpec,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Copy, Debug)]
pub struct DualOptions {
    /// Oracle verification runs when the ambient F_p-dimension is at most this.
    pub verify_max_dim: usize,
}

impl Default for DualOptions {
    fn default() -> Self {
        DualOptions { verify_max_dim: 96 }
    }
}

/// Branches whose transcribed dual formulas are known to be unreliable.
pub const FLAGGED_BRANCHES: [&str; 2] = ["C.z0.low", "C.phi6"];

// The context in which the tables apply, with u and v exchanged for NcU.
struct Work {
    ctx: QuotientCtx,
    swapped: bool,
}

fn work(ctx: &QuotientCtx) -> Result<Work> {
    match ctx.case() {
        Case::NcV | Case::NcFull => Ok(Work {
            ctx: ctx.clone(),
            swapped: false,
        }),
        Case::NcU => Ok(Work {
            ctx: ctx.swapped()?,
            swapped: true,
        }),
        c => Err(Error::UnsupportedCase(c.tag().into())),
    }
}

// Polynomial helpers in R[x] over a work context.
struct Tables<'a> {
    ctx: &'a QuotientCtx,
    rr: PolyRing<RingR>,
}

impl<'a> Tables<'a> {
    fn new(ctx: &'a QuotientCtx) -> Self {
        Tables {
            ctx,
            rr: ctx.rpoly_ring(),
        }
    }

    fn ring(&self) -> &RingR {
        self.ctx.ring()
    }

    fn y(&self, k: usize) -> RPoly {
        let y = self.ring().lift(&self.ring().one(), &self.ctx.y_field());
        self.rr.pow(&y, k as u128)
    }

    fn u(&self, f: &RPoly) -> RPoly {
        self.rr.scale(&self.ring().u(), f)
    }

    fn scalar(&self, c: &FieldElem, f: &RPoly) -> RPoly {
        self.rr.scale(&self.ring().from_field(c), f)
    }

    fn z(&self, z: &ZSeries) -> RPoly {
        let fr = self.ctx.fpoly_ring();
        let y = self.ctx.y_field();
        let mut acc = fr.zero();
        for d in z.digits.iter().rev() {
            let digit = fr.from_coeffs(vec![d[2].clone(), d[1].clone(), d[0].clone()]);
            acc = fr.add(&fr.mul(&acc, &y), &digit);
        }
        self.ring().lift(&self.ring().one(), &acc)
    }

    // 2 alpha_2 in the twisted case, else zero
    fn kappa(&self) -> FieldElem {
        let f = self.ctx.field();
        if self.ctx.twisted() {
            f.add(&self.ctx.alpha().a2, &self.ctx.alpha().a2)
        } else {
            f.zero()
        }
    }
}

fn trim(z: &ZSeries, f: &crate::gf::FieldCtx) -> ZSeries {
    let mut digits = z.digits.clone();
    while digits.last().is_some_and(|d| d.iter().all(|c| f.is_zero(c))) {
        digits.pop();
    }
    ZSeries { digits }
}

fn digit_is_zero(d: &ZDigit, f: &crate::gf::FieldCtx) -> bool {
    d.iter().all(|c| f.is_zero(c))
}

// kappa + z as a digit series (kappa added to the constant of digit 0).
fn kappa_plus_z(ctx: &QuotientCtx, z: &ZSeries) -> ZSeries {
    let f = ctx.field();
    let kappa = Tables::new(ctx).kappa();
    let mut digits = z.digits.clone();
    if digits.is_empty() {
        digits.push([f.zero(), f.zero(), f.zero()]);
    }
    digits[0][2] = f.add(&digits[0][2], &kappa);
    trim(&ZSeries { digits }, f)
}

fn valuation(z: &ZSeries, f: &crate::gf::FieldCtx) -> Option<usize> {
    z.digits.iter().position(|d| !digit_is_zero(d, f))
}

/// Smallest i with u y^i in <y^l + u y^t z>, and whether the boundary
/// l = p^s + t needed the refined value.
fn torsion_exponent(ctx: &QuotientCtx, ell: usize, t: usize, z: &ZSeries) -> (usize, bool) {
    let ps = ctx.ps();
    if z.is_zero() {
        return (if ctx.twisted() { ell.min(ps) } else { ell }, false);
    }
    if !ctx.twisted() {
        return (ell.min(2 * ps + t - ell), false);
    }
    if ell != ps + t {
        return (ell.min(ps).min(2 * ps + t - ell), false);
    }
    let v = valuation(&kappa_plus_z(ctx, z), ctx.field()).unwrap_or(usize::MAX);
    let im = ps + t.min(v);
    (im, im != ps)
}

/// Checks ranges and returns the canonical form of a spec.
pub fn validate_spec(ctx: &QuotientCtx, spec: &CodeSpec) -> Result<CodeSpec> {
    let w = work(ctx)?;
    let ctx = &w.ctx;
    let f = ctx.field();
    let top = 2 * ctx.ps() - 1;
    let range = |msg: String| Err(Error::RangeViolation(msg));
    match spec.kind {
        CodeKind::A0 => Ok(CodeSpec::a0()),
        CodeKind::A1 => Ok(CodeSpec::a1()),
        CodeKind::B => {
            if spec.ell > top {
                return range(format!("B requires 0 <= l <= {top}, got {}", spec.ell));
            }
            Ok(CodeSpec::b(spec.ell))
        }
        CodeKind::C | CodeKind::D => {
            if spec.ell < 1 || spec.ell > top {
                return range(format!("l must lie in 1..={top}, got {}", spec.ell));
            }
            if spec.t >= spec.ell {
                return range(format!("t = {} must be below l = {}", spec.t, spec.ell));
            }
            let mut z = trim(&spec.z, f);
            if !z.is_zero() && digit_is_zero(&z.digits[0], f) {
                return Err(Error::ZNotInvertible);
            }
            let mut t = spec.t;
            if z.is_zero() {
                t = 0;
            }
            let (im, _) = torsion_exponent(ctx, spec.ell, t, &z);
            // u y^t z is already in <u y^im> once im <= t
            z.digits.truncate(im.saturating_sub(t));
            z = trim(&z, f);
            if z.is_zero() {
                t = 0;
            }
            if spec.kind == CodeKind::C {
                return Ok(CodeSpec::c(spec.ell, t, z));
            }
            let mu = spec
                .mu
                .ok_or_else(|| Error::RangeViolation("type D requires mu".into()))?;
            if mu >= im {
                return Err(Error::MuNotBelowIm { mu, im });
            }
            z.digits.truncate(mu.saturating_sub(t));
            let z = trim(&z, f);
            if z.is_zero() {
                t = 0;
            }
            Ok(CodeSpec::d(spec.ell, t, mu, z))
        }
    }
}

/// The torsion exponent of the principal part of a C or D spec.
pub fn smallest_torsion_exponent(ctx: &QuotientCtx, spec: &CodeSpec) -> Result<usize> {
    let w = work(ctx)?;
    match spec.kind {
        CodeKind::C | CodeKind::D => Ok(torsion_exponent(&w.ctx, spec.ell, spec.t, &trim(&spec.z, w.ctx.field())).0),
        k => Err(Error::UnsupportedCase(format!("torsion exponent of type {}", k.tag()))),
    }
}

fn unswap(w: &Work, gens: Vec<QElem>) -> Vec<QElem> {
    if w.swapped {
        gens.iter().map(|g| w.ctx.swap_elem(g)).collect()
    } else {
        gens
    }
}

fn raw_generators(ctx: &QuotientCtx, spec: &CodeSpec) -> Vec<QElem> {
    let tb = Tables::new(ctx);
    let rr = &tb.rr;
    match spec.kind {
        CodeKind::A0 => vec![ctx.zero()],
        CodeKind::A1 => vec![ctx.one()],
        CodeKind::B => vec![ctx.reduce(&tb.u(&tb.y(spec.ell)))],
        CodeKind::C | CodeKind::D => {
            let g = rr.add(&tb.y(spec.ell), &tb.u(&rr.mul(&tb.y(spec.t), &tb.z(&spec.z))));
            let mut out = vec![ctx.reduce(&g)];
            if let Some(mu) = spec.mu {
                out.push(ctx.reduce(&tb.u(&tb.y(mu))));
            }
            out
        }
    }
}

/// Concrete reduced generators of the ideal described by a spec.
pub fn generators(ctx: &QuotientCtx, spec: &CodeSpec) -> Result<Vec<QElem>> {
    let spec = validate_spec(ctx, spec)?;
    let w = work(ctx)?;
    Ok(unswap(&w, raw_generators(&w.ctx, &spec)))
}

fn table_dim(ctx: &QuotientCtx, spec: &CodeSpec) -> usize {
    let m = ctx.field().m();
    let ps = ctx.ps();
    let (l, t) = (spec.ell, spec.t);
    match spec.kind {
        CodeKind::A0 => 0,
        CodeKind::A1 => 12 * m * ps,
        CodeKind::B => 3 * m * (2 * ps - l),
        CodeKind::D => 3 * m * (4 * ps - l - spec.mu.unwrap_or(0)),
        CodeKind::C if !ctx.twisted() => {
            if spec.z.is_zero() || 2 * l <= 2 * ps + t {
                6 * m * (2 * ps - l)
            } else {
                3 * m * (2 * ps - t)
            }
        }
        CodeKind::C => {
            if l <= ps {
                6 * m * (2 * ps - l)
            } else if spec.z.is_zero() || l < ps + t {
                3 * m * (3 * ps - l)
            } else {
                3 * m * (2 * ps - t)
            }
        }
    }
}

/// Invariants of a validated spec: torsion exponent, residue and torsion
/// exponents, size and dual.
pub fn describe(ctx: &QuotientCtx, spec: &CodeSpec, opts: DualOptions) -> Result<CodeDescriptor> {
    let spec = validate_spec(ctx, spec)?;
    let w = work(ctx)?;
    let wc = &w.ctx;
    let ps = wc.ps();
    let m = wc.field().m();
    let mut diagnostics = Vec::new();
    let (im, res_exp, tor_exp) = match spec.kind {
        CodeKind::A0 => (2 * ps, 2 * ps, 2 * ps),
        CodeKind::A1 => (0, 0, 0),
        CodeKind::B => (spec.ell, 2 * ps, spec.ell),
        CodeKind::C | CodeKind::D => {
            let (im, refined) = torsion_exponent(wc, spec.ell, spec.t, &spec.z);
            if refined {
                diagnostics.push(Diagnostic::new(
                    "BoundaryTorsion",
                    Some("C.phi6"),
                    format!(
                        "l = p^s + t with z = -2 alpha_2 mod y: torsion exponent is {im}, not p^s = {ps}"
                    ),
                ));
            }
            let tor = spec.mu.unwrap_or(im);
            (im, spec.ell, tor)
        }
    };
    let generic = match spec.kind {
        CodeKind::A0 => 0,
        CodeKind::A1 => 12 * m * ps,
        _ => 3 * m * (4 * ps - res_exp - tor_exp),
    };
    let table = table_dim(wc, &spec);
    let dim_fp = if diagnostics.is_empty() {
        if table != generic {
            return Err(Error::Invariant(format!(
                "count table gives {table}, residue/torsion give {generic} for {spec}"
            )));
        }
        table
    } else {
        generic
    };
    let eta = BigUint::from(wc.field().p()).pow(dim_fp as u32);
    let dual = dual_spec(ctx, &spec, opts)?;
    diagnostics.extend(dual.diagnostics.iter().cloned());
    Ok(CodeDescriptor {
        spec,
        im,
        res_exp,
        tor_exp,
        dim_fp,
        eta,
        dual,
        diagnostics,
    })
}

// Candidate dual generator sets, as unreduced polynomials in the dual ring.
struct DualPlan {
    branch: &'static str,
    literal: Vec<Vec<RPoly>>,
    annihilator: Vec<RPoly>,
}

// y^k * s, allowing negative k when s is divisible by y^{-k}.
fn shift_series(s: &ZSeries, k: isize, f: &crate::gf::FieldCtx) -> ZSeries {
    let mut digits = s.digits.clone();
    if k >= 0 {
        let zero = [f.zero(), f.zero(), f.zero()];
        digits.splice(0..0, std::iter::repeat(zero).take(k as usize));
    } else {
        digits.drain(..(-k) as usize);
    }
    ZSeries { digits }
}

fn plan_dual(ctx: &QuotientCtx, spec: &CodeSpec) -> Result<DualPlan> {
    let tb = Tables::new(ctx);
    let rr = &tb.rr;
    let ps = ctx.ps();
    let (l, t) = (spec.ell, spec.t);
    let kappa = tb.kappa();
    let y = |k: usize| tb.y(k);
    let u = |g: &RPoly| tb.u(g);
    let zp = tb.z(&spec.z);
    // a - kappa u y^k
    let twist = |a: RPoly, k: usize| rr.sub(&a, &tb.scalar(&kappa, &u(&y(k))));
    Ok(match spec.kind {
        CodeKind::A0 => DualPlan {
            branch: "A0",
            literal: vec![],
            annihilator: vec![rr.one()],
        },
        CodeKind::A1 => DualPlan {
            branch: "A1",
            literal: vec![],
            annihilator: vec![],
        },
        CodeKind::B => DualPlan {
            branch: "B",
            literal: vec![],
            annihilator: vec![y(2 * ps - l), u(&rr.one())],
        },
        CodeKind::C if !ctx.twisted() => {
            if spec.z.is_zero() {
                if l <= ps {
                    // transcribed: <x^3 - alpha_0^{-1}> with no dependence on l
                    let d = ctx.dual()?;
                    let lit = d.ring().lift(&d.ring().one(), &d.y_field());
                    DualPlan {
                        branch: "C.z0.low",
                        literal: vec![vec![lit]],
                        annihilator: vec![y(2 * ps - l)],
                    }
                } else {
                    DualPlan {
                        branch: "C.z0.high",
                        literal: vec![],
                        annihilator: vec![y(2 * ps - l)],
                    }
                }
            } else if 2 * l <= 2 * ps + t {
                DualPlan {
                    branch: "C.chi1",
                    literal: vec![],
                    annihilator: vec![rr.sub(&y(2 * ps - l), &u(&rr.mul(&y(2 * ps + t - 2 * l), &zp)))],
                }
            } else {
                DualPlan {
                    branch: "C.chi2",
                    literal: vec![],
                    annihilator: vec![rr.sub(&y(l - t), &u(&zp)), u(&y(2 * ps - l))],
                }
            }
        }
        CodeKind::C => {
            if spec.z.is_zero() {
                if l <= ps {
                    DualPlan {
                        branch: "C.phi1",
                        literal: vec![],
                        annihilator: vec![twist(y(2 * ps - l), ps - l)],
                    }
                } else {
                    DualPlan {
                        branch: "C.phi2",
                        literal: vec![],
                        annihilator: vec![twist(y(ps), 0), u(&y(2 * ps - l))],
                    }
                }
            } else if l <= ps {
                DualPlan {
                    branch: "C.phi3",
                    literal: vec![],
                    annihilator: vec![rr.sub(
                        &twist(y(2 * ps - l), ps - l),
                        &u(&rr.mul(&y(2 * ps + t - 2 * l), &zp)),
                    )],
                }
            } else if l < ps + t {
                DualPlan {
                    branch: "C.phi4",
                    literal: vec![],
                    annihilator: vec![
                        rr.sub(&twist(y(ps), 0), &u(&rr.mul(&y(ps + t - l), &zp))),
                        u(&y(2 * ps - l)),
                    ],
                }
            } else if l > ps + t {
                DualPlan {
                    branch: "C.phi5",
                    literal: vec![],
                    annihilator: vec![
                        rr.sub(&twist(y(l - t), l - ps - t), &u(&zp)),
                        u(&y(2 * ps - l)),
                    ],
                }
            } else {
                let (im, _) = torsion_exponent(ctx, l, t, &spec.z);
                DualPlan {
                    branch: "C.phi6",
                    literal: phi6_literals(ctx, spec)?,
                    annihilator: vec![boundary_generator(ctx, spec, im), u(&y(2 * ps - l))],
                }
            }
        }
        CodeKind::D => {
            let mu = spec.mu.expect("validated D spec has mu");
            if !ctx.twisted() {
                let first = if spec.z.is_zero() {
                    y(2 * ps - mu)
                } else {
                    rr.sub(&y(2 * ps - mu), &u(&rr.mul(&y(2 * ps + t - l - mu), &zp)))
                };
                DualPlan {
                    branch: if spec.z.is_zero() { "D.z0" } else { "D.z" },
                    literal: vec![],
                    annihilator: vec![first, u(&y(2 * ps - l))],
                }
            } else if spec.z.is_zero() {
                DualPlan {
                    branch: "D.psi1",
                    literal: vec![],
                    annihilator: vec![twist(y(2 * ps - mu), ps - mu), u(&y(2 * ps - l))],
                }
            } else if l != ps + t {
                DualPlan {
                    branch: "D.psi2",
                    literal: vec![],
                    annihilator: vec![
                        rr.sub(
                            &twist(y(2 * ps - mu), ps - mu),
                            &u(&rr.mul(&y(2 * ps + t - l - mu), &zp)),
                        ),
                        u(&y(2 * ps - l)),
                    ],
                }
            } else {
                DualPlan {
                    branch: "D.psi4",
                    literal: vec![],
                    annihilator: vec![boundary_generator(ctx, spec, mu), u(&y(2 * ps - l))],
                }
            }
        }
    })
}

// y^{2p^s - e} - u y^{p^s - e} (kappa + z) at l = p^s + t, written so that it
// stays a polynomial when e exceeds p^s (then kappa + z is divisible by y^{e - p^s}).
fn boundary_generator(ctx: &QuotientCtx, spec: &CodeSpec, e: usize) -> RPoly {
    let tb = Tables::new(ctx);
    let rr = &tb.rr;
    let ps = ctx.ps();
    let kz = kappa_plus_z(ctx, &spec.z);
    let head = tb.y(2 * ps - e);
    if kz.is_zero() {
        return head;
    }
    let tail = shift_series(&kz, ps as isize - e as isize, ctx.field());
    rr.sub(&head, &tb.u(&tb.z(&tail)))
}

// The two transcriptions of the boundary dual generator that differ in the
// trailing monomial exponent: x^{p^s - 2k - 1} and x^{3p^s - 2k - 1}.
fn phi6_literals(ctx: &QuotientCtx, spec: &CodeSpec) -> Result<Vec<Vec<RPoly>>> {
    let d = ctx.dual()?;
    let ring = d.ring();
    let f = d.field();
    let rr = d.rpoly_ring();
    let fr = d.fpoly_ring();
    let ps = ctx.ps();
    let a0 = ctx.alpha0();
    let neg_a0 = f.neg(a0);
    let kappa = Tables::new(ctx).kappa();
    let yd = ring.lift(&ring.one(), &d.y_field());
    let ydk = |k: usize| rr.pow(&yd, k as u128);
    let head = rr.sub(
        &rr.scale(&ring.from_field(&f.pow(&neg_a0, ps as u128)), &ydk(ps)),
        &rr.monomial(ring.scale(&kappa, &ring.u()), 3 * ps),
    );
    let second = rr.scale(&ring.u(), &ydk(2 * ps - spec.ell));
    let mut out = Vec::new();
    for top in [ps, 3 * ps] {
        let mut sum = rr.zero();
        for (k, dg) in spec.z.digits.iter().enumerate().take(ps - spec.t) {
            // reversed digit z2 x^2 + z1 x + z0
            let rev = fr.from_coeffs(vec![dg[0].clone(), dg[1].clone(), dg[2].clone()]);
            let term = rr.mul(
                &ring.lift(&ring.from_field(&f.pow(&neg_a0, k as u128)), &rev),
                &ydk(k),
            );
            let exp = top as isize - 2 * k as isize - 1;
            if exp < 0 {
                continue;
            }
            sum = rr.add(&sum, &rr.shift(&term, exp as usize));
        }
        out.push(vec![rr.sub(&head, &rr.scale(&ring.u(), &sum)), second.clone()]);
    }
    Ok(out)
}

/// Dual code generators in the x^{3p^s} - alpha^{-1} ring, checked against
/// the oracle when the ambient is small enough.
pub fn dual_spec(ctx: &QuotientCtx, spec: &CodeSpec, opts: DualOptions) -> Result<DualSpec> {
    let spec = validate_spec(ctx, spec)?;
    let w = work(ctx)?;
    let wc = &w.ctx;
    let dual = wc.dual()?;
    let plan = plan_dual(wc, &spec)?;
    let rr = wc.rpoly_ring();
    let mechanical: Vec<QElem> = plan
        .annihilator
        .iter()
        .map(|g| Ok(dual.reduce(&rr.reciprocal(g)?)))
        .collect::<Result<_>>()?;
    let mut diagnostics = Vec::new();
    let mut chosen = mechanical.clone();
    let mut status = DualStatus::Unverified;
    if wc.fp_dim() <= opts.verify_max_dim {
        let o = Oracle::new(wc);
        let od = Oracle::new(&dual);
        let code = o.span_closure(&raw_generators(wc, &spec));
        let truth = o.inner_dual(&code, &od)?;
        let via_ann = o.reciprocal_ideal(&o.ideal_generators(&o.annihilator(&code)), &od)?;
        if !via_ann.equal(&truth)? {
            return Err(Error::Invariant(format!(
                "inner-product dual and reciprocal annihilator differ for {spec}"
            )));
        }
        let matches = |gens: &[QElem]| -> Result<(bool, usize)> {
            let s = od.span_closure(gens);
            Ok((s.equal(&truth)?, s.dim()))
        };
        let ann_ok = {
            let ann = o.span_closure(&plan.annihilator.iter().map(|g| wc.reduce(g)).collect::<Vec<_>>());
            ann.equal(&o.annihilator(&code))?
        };
        if plan.literal.is_empty() {
            let (ok, dim) = matches(&mechanical)?;
            if !ok || !ann_ok {
                return Err(Error::FormulaDiscrepancy {
                    branch: plan.branch.into(),
                    formula_dim: dim,
                    oracle_dim: truth.dim(),
                });
            }
            status = DualStatus::Verified;
        } else {
            let mut literal_hit = None;
            for (i, lit) in plan.literal.iter().enumerate() {
                let gens: Vec<QElem> = lit.iter().map(|g| dual.reduce(g)).collect();
                let (ok, dim) = matches(&gens)?;
                if ok {
                    literal_hit = Some(gens);
                    break;
                }
                diagnostics.push(Diagnostic::new(
                    "FormulaDiscrepancy",
                    Some(plan.branch),
                    format!(
                        "transcribed generator set {} spans a different subspace (dimension {dim}, oracle dual {})",
                        i + 1,
                        truth.dim()
                    ),
                ));
            }
            if let Some(gens) = literal_hit {
                chosen = gens;
                status = DualStatus::Verified;
            } else if matches(&mechanical)?.0 {
                status = DualStatus::Resolved;
            } else {
                chosen = od.ideal_generators(&truth);
                status = DualStatus::Resolved;
                diagnostics.push(Diagnostic::new(
                    "OracleFallback",
                    Some(plan.branch),
                    "dual generators taken from the oracle basis".into(),
                ));
            }
        }
    }
    let ambient = ctx.dual()?;
    let generators = chosen
        .iter()
        .map(|g| {
            let g = if w.swapped { dual.swap_elem(g) } else { g.clone() };
            ambient.to_rpoly(&g)
        })
        .collect();
    Ok(DualSpec {
        branch: plan.branch.into(),
        generators,
        ambient,
        status,
        diagnostics,
    })
}

/// The canonical spec of the principal ideal <f>.
pub fn classify_principal(ctx: &QuotientCtx, f: &QElem) -> Result<CodeSpec> {
    let w = work(ctx)?;
    let wc = &w.ctx;
    let f = if w.swapped { ctx.swap_elem(f) } else { f.clone() };
    let fld = wc.field();
    let nonzero = |d: &crate::poly::Digit| d.iter().any(|c| !fld.is_zero(c));
    let a = adic_expand(&wc.to_rpoly(&f), wc)?;
    let Some(ell) = a.f_digits.iter().position(nonzero) else {
        return Ok(match a.u_digits.iter().position(nonzero) {
            None => CodeSpec::a0(),
            Some(k) => CodeSpec::b(k),
        });
    };
    if ell == 0 {
        return Ok(CodeSpec::a1());
    }
    let eps = wc.from_fpoly(&digits_to_fpoly(wc, &a.f_digits[ell..]));
    let g = wc.mul(&f, &wc.invert(&eps)?);
    let b = adic_expand(&wc.to_rpoly(&g), wc)?;
    let spec = match b.u_digits.iter().position(nonzero) {
        Some(t) if t < ell => {
            let digits = b.u_digits[t..].iter().map(|d| [d[2].clone(), d[1].clone(), d[0].clone()]).collect();
            CodeSpec::c(ell, t, ZSeries { digits })
        }
        _ => CodeSpec::c(ell, 0, ZSeries::zero()),
    };
    validate_spec(ctx, &spec)
}

/// One summand of the cube-case decomposition.
#[derive(Clone, Debug)]
pub struct CrtComponent {
    pub modulus: RPoly,
    /// Constacyclic unit when the modulus is x^{p^s} - unit.
    pub unit: Option<RElem>,
    pub length: usize,
}

pub fn crt_decompose(ctx: &QuotientCtx) -> Result<Vec<CrtComponent>> {
    if ctx.case() != Case::Cube {
        return Err(Error::NotCube);
    }
    let factors = crate::poly::crt_factorization(ctx.ring(), ctx.alpha(), ctx.s())?;
    let ring = ctx.ring();
    let ps = ctx.ps();
    Ok(factors
        .into_iter()
        .map(|g| {
            let length = g.degree().unwrap_or(0);
            let unit = (length == ps).then(|| ring.neg(&g.coeffs()[0]));
            CrtComponent {
                modulus: g,
                unit,
                length,
            }
        })
        .collect())
}

/// The alpha-constacyclic shift (c_0, ..., c_{n-1}) -> (alpha c_{n-1}, c_0, ..., c_{n-2}).
pub fn constacyclic_shift(ring: &RingR, word: &[RElem], alpha: &RElem) -> Vec<RElem> {
    let Some(last) = word.last() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(word.len());
    out.push(ring.mul(alpha, last));
    out.extend_from_slice(&word[..word.len() - 1]);
    out
}

pub fn shift(ctx: &QuotientCtx, word: &[RElem]) -> Result<Vec<RElem>> {
    if word.len() != ctx.n() {
        return Err(Error::LengthMismatch {
            got: word.len(),
            want: ctx.n(),
        });
    }
    Ok(constacyclic_shift(ctx.ring(), word, ctx.alpha()))
}

/// All z-series with `len` digits whose first and last digits are nonzero,
/// in lexicographic order of digit encodings.
fn z_series_of_len(ctx: &QuotientCtx, len: usize) -> impl Iterator<Item = ZSeries> + '_ {
    let f = ctx.field();
    let q = f.q();
    let per = q * q * q;
    let total = per.checked_pow(len as u32).unwrap_or(u64::MAX);
    let decode = move |mut k: u64| -> ZDigit {
        // encoding order (z0, z1, z2) with z0 most significant
        let z2 = f.decode(k % q);
        k /= q;
        let z1 = f.decode(k % q);
        k /= q;
        [f.decode(k % q), z1, z2]
    };
    (0..total).filter_map(move |mut k| {
        let mut digits = vec![decode(0); len];
        for i in (0..len).rev() {
            digits[i] = decode(k % per);
            k /= per;
        }
        let ok = len == 0
            || (!digit_is_zero(&digits[0], f) && !digit_is_zero(&digits[len - 1], f));
        ok.then_some(ZSeries { digits })
    })
}

/// Deterministic enumeration: A0, A1, B by l, C by (l, t, z), D by (l, t, mu, z),
/// with z limited to `z_digit_bound` digits.
pub fn enumerate_specs(
    ctx: &QuotientCtx,
    z_digit_bound: usize,
    limit: usize,
) -> Result<Box<dyn Iterator<Item = CodeSpec> + '_>> {
    let w = work(ctx)?;
    let top = 2 * w.ctx.ps() - 1;
    let wc = std::rc::Rc::new(w.ctx);
    let basic = [CodeSpec::a0(), CodeSpec::a1()]
        .into_iter()
        .chain((0..=top).map(CodeSpec::b));
    let wc1 = wc.clone();
    let c_specs = (1..=top).flat_map(move |l| {
        let wc = wc1.clone();
        (0..l).flat_map(move |t| {
            let wc = wc.clone();
            let zero = (t == 0).then(|| CodeSpec::c(l, 0, ZSeries::zero()));
            let wc2 = wc.clone();
            let nonzero = (1..=z_digit_bound).flat_map(move |len| {
                let wc = wc2.clone();
                let wc3 = wc.clone();
                z_series_of_len_owned(wc, len)
                    .map(move |z| CodeSpec::c(l, t, z))
                    .filter(move |s| validate_spec(&wc3, s).as_ref() == Ok(s))
            });
            zero.into_iter().chain(nonzero)
        })
    });
    let wc1 = wc.clone();
    let d_specs = (1..=top).flat_map(move |l| {
        let wc = wc1.clone();
        (0..l).flat_map(move |t| {
            let wc = wc.clone();
            (0..l).flat_map(move |mu| {
                let wc = wc.clone();
                let zero = (t == 0)
                    .then(|| CodeSpec::d(l, 0, mu, ZSeries::zero()))
                    .filter(|s| validate_spec(&wc, s).as_ref() == Ok(s));
                let wc2 = wc.clone();
                let nonzero = (1..=z_digit_bound.min(mu.saturating_sub(t))).flat_map(move |len| {
                    let wc = wc2.clone();
                    let wc3 = wc.clone();
                    z_series_of_len_owned(wc, len)
                        .map(move |z| CodeSpec::d(l, t, mu, z))
                        .filter(move |s| validate_spec(&wc3, s).as_ref() == Ok(s))
                });
                zero.into_iter().chain(nonzero)
            })
        })
    });
    Ok(Box::new(basic.chain(c_specs).chain(d_specs).take(limit)))
}

fn z_series_of_len_owned(ctx: std::rc::Rc<QuotientCtx>, len: usize) -> impl Iterator<Item = ZSeries> {
    let v: Vec<ZSeries> = z_series_of_len(&ctx, len).collect();
    v.into_iter()
}

/// Random validated spec of the given kind; `z_bound` caps the number of z-digits.
pub fn sample_spec<R: rand::Rng + ?Sized>(
    ctx: &QuotientCtx,
    kind: CodeKind,
    z_bound: usize,
    rng: &mut R,
) -> Result<CodeSpec> {
    let w = work(ctx)?;
    let wc = &w.ctx;
    let f = wc.field();
    let top = 2 * wc.ps() - 1;
    let random_z = |rng: &mut R, len: usize| -> ZSeries {
        let digits = (0..len)
            .map(|i| loop {
                let d = [f.random(rng), f.random(rng), f.random(rng)];
                if i > 0 || !digit_is_zero(&d, f) {
                    break d;
                }
            })
            .collect();
        ZSeries { digits }
    };
    for _ in 0..1000 {
        let spec = match kind {
            CodeKind::A0 => CodeSpec::a0(),
            CodeKind::A1 => CodeSpec::a1(),
            CodeKind::B => CodeSpec::b(rng.gen_range(0..=top)),
            CodeKind::C => {
                let l = rng.gen_range(1..=top);
                if z_bound == 0 || rng.gen_bool(0.2) {
                    CodeSpec::c(l, 0, ZSeries::zero())
                } else {
                    let t = rng.gen_range(0..l);
                    let len = rng.gen_range(1..=z_bound);
                    CodeSpec::c(l, t, random_z(rng, len))
                }
            }
            CodeKind::D => {
                let l = rng.gen_range(1..=top);
                if z_bound == 0 || rng.gen_bool(0.2) {
                    let im = torsion_exponent(wc, l, 0, &ZSeries::zero()).0;
                    CodeSpec::d(l, 0, rng.gen_range(0..im), ZSeries::zero())
                } else {
                    let t = rng.gen_range(0..l);
                    let len = rng.gen_range(1..=z_bound);
                    let z = random_z(rng, len);
                    let im = torsion_exponent(wc, l, t, &z).0;
                    if t + 1 >= im {
                        continue;
                    }
                    CodeSpec::d(l, t, rng.gen_range(t + 1..im), z)
                }
            }
        };
        if let Ok(v) = validate_spec(ctx, &spec) {
            return Ok(v);
        }
    }
    Err(Error::Invariant(format!("could not sample a {} spec", kind.tag())))
}

/// Random C or D spec on the boundary l = p^s + t (t >= 1), optionally with z = -2 alpha_2 mod y.
pub fn sample_boundary_spec<R: rand::Rng + ?Sized>(
    ctx: &QuotientCtx,
    kind: CodeKind,
    degenerate: bool,
    rng: &mut R,
) -> Result<CodeSpec> {
    let w = work(ctx)?;
    let wc = &w.ctx;
    let f = wc.field();
    let ps = wc.ps();
    if ps < 2 {
        return Err(Error::RangeViolation("boundary needs p^s >= 2".into()));
    }
    let kappa = Tables::new(wc).kappa();
    for _ in 0..1000 {
        let t = rng.gen_range(1..ps);
        let l = ps + t;
        let len = rng.gen_range(1..=2);
        let mut digits: Vec<ZDigit> = (0..len).map(|_| [f.random(rng), f.random(rng), f.random(rng)]).collect();
        if degenerate {
            digits[0] = [f.zero(), f.zero(), f.neg(&kappa)];
        }
        let z = ZSeries { digits };
        if z.digits.iter().all(|d| digit_is_zero(d, f)) {
            continue;
        }
        let spec = if kind == CodeKind::C {
            CodeSpec::c(l, t, z)
        } else {
            let im = torsion_exponent(wc, l, t, &trim(&z, f)).0;
            if t + 1 >= im {
                continue;
            }
            CodeSpec::d(l, t, rng.gen_range(t + 1..im), z)
        };
        if let Ok(v) = validate_spec(ctx, &spec) {
            return Ok(v);
        }
    }
    Err(Error::Invariant("could not sample a boundary spec".into()))
}

/// Smallest e with u y^e in the annihilator of the code, measured by the oracle.
pub fn dual_torsion_exponent(o: &Oracle, code: &Subspace) -> Option<usize> {
    let ctx = o.ctx();
    let ann = o.annihilator(code);
    let uy = |e: usize| ctx.mul(&ctx.u(), &ctx.pow(&ctx.y(), e as u128));
    (0..=ctx.n()).find(|&e| o.member(&uy(e), &ann).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use rand::{Rng as _, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx7(a: [i64; 4]) -> QuotientCtx {
        let f = FieldCtx::new(7, 1, None).unwrap();
        let alpha = RingR::new(f.clone()).elem_ints(&a);
        QuotientCtx::new(f, 1, alpha).unwrap()
    }

    fn one_digit(ctx: &QuotientCtx, c: i64) -> ZSeries {
        let f = ctx.field();
        ZSeries {
            digits: vec![[f.zero(), f.zero(), f.from_int(c)]],
        }
    }

    #[test]
    fn validate_examples() {
        let c = ctx7([2, 0, 3, 5]);
        assert!(matches!(validate_spec(&c, &CodeSpec::b(14)), Err(Error::RangeViolation(_))));
        assert_eq!(
            validate_spec(&c, &CodeSpec::d(5, 1, 5, ZSeries::zero())),
            Err(Error::MuNotBelowIm { mu: 5, im: 5 })
        );
        let s = CodeSpec::c(5, 1, one_digit(&c, 1));
        assert_eq!(validate_spec(&c, &s).unwrap(), s);
        let bad = ZSeries {
            digits: vec![[c.field().zero(), c.field().zero(), c.field().zero()], one_digit(&c, 1).digits[0].clone()],
        };
        assert_eq!(validate_spec(&c, &CodeSpec::c(5, 1, bad)), Err(Error::ZNotInvertible));
        let full = ctx7([2, 1, 3, 5]);
        let wide = CodeSpec::c(12, 9, one_digit(&full, 1));
        assert_eq!(validate_spec(&full, &wide).unwrap(), CodeSpec::c(12, 0, ZSeries::zero()));
        let uv = ctx7([2, 0, 0, 5]);
        assert!(matches!(validate_spec(&uv, &CodeSpec::b(1)), Err(Error::UnsupportedCase(_))));
        let cube = ctx7([1, 0, 0, 0]);
        assert!(matches!(validate_spec(&cube, &CodeSpec::b(1)), Err(Error::UnsupportedCase(_))));
    }

    #[test]
    fn torsion_examples() {
        let c = ctx7([2, 0, 3, 5]);
        assert_eq!(smallest_torsion_exponent(&c, &CodeSpec::c(5, 0, ZSeries::zero())).unwrap(), 5);
        assert_eq!(smallest_torsion_exponent(&c, &CodeSpec::c(10, 1, one_digit(&c, 1))).unwrap(), 5);
        let full = ctx7([2, 1, 3, 5]);
        assert_eq!(smallest_torsion_exponent(&full, &CodeSpec::c(8, 1, one_digit(&full, 1))).unwrap(), 7);
        // z = -2 alpha_2 = 5 makes the boundary torsion exponent exceed p^s
        assert_eq!(smallest_torsion_exponent(&full, &CodeSpec::c(8, 1, one_digit(&full, 5))).unwrap(), 8);
    }

    #[test]
    fn describe_examples() {
        let c = ctx7([2, 0, 3, 5]);
        let d = describe(&c, &CodeSpec::b(3), DualOptions::default()).unwrap();
        assert_eq!(d.dim_fp, 33);
        assert_eq!(d.eta, BigUint::from(7u32).pow(33));
        assert_eq!((d.res_exp, d.tor_exp), (14, 3));
        let d = describe(&c, &CodeSpec::c(10, 1, one_digit(&c, 1)), DualOptions::default()).unwrap();
        assert_eq!(d.dim_fp, 39);
        let full = ctx7([2, 1, 3, 5]);
        let d = describe(&full, &CodeSpec::d(5, 0, 2, ZSeries::zero()), DualOptions::default()).unwrap();
        assert_eq!(d.dim_fp, 63);
    }

    #[test]
    fn generator_examples() {
        let c = ctx7([2, 0, 3, 5]);
        assert_eq!(generators(&c, &CodeSpec::b(0)).unwrap(), vec![c.u()]);
        assert_eq!(
            generators(&c, &CodeSpec::c(1, 0, one_digit(&c, 1))).unwrap(),
            vec![c.add(&c.y(), &c.u())]
        );
        assert_eq!(
            generators(&c, &CodeSpec::d(2, 0, 1, ZSeries::zero())).unwrap(),
            vec![c.pow(&c.y(), 2), c.mul(&c.u(), &c.y())]
        );
    }

    #[test]
    fn dual_examples() {
        let c = ctx7([2, 0, 3, 5]);
        let ds = dual_spec(&c, &CodeSpec::b(3), DualOptions::default()).unwrap();
        assert_eq!(ds.status, DualStatus::Verified);
        let d = &ds.ambient;
        let od = Oracle::new(d);
        let got = od.span_closure(&ds.generators.iter().map(|g| d.reduce(g)).collect::<Vec<_>>());
        let want = od.span_closure(&[d.pow(&d.y(), 11), d.u()]);
        assert!(got.equal(&want).unwrap());

        let ds = dual_spec(&c, &CodeSpec::c(2, 0, ZSeries::zero()), DualOptions::default()).unwrap();
        assert_eq!(ds.branch, "C.z0.low");
        assert_eq!(ds.status, DualStatus::Resolved);
        assert!(ds.diagnostics.iter().any(|x| x.kind == "FormulaDiscrepancy"));

        let full = ctx7([2, 1, 3, 5]);
        let ds = dual_spec(&full, &CodeSpec::c(10, 0, ZSeries::zero()), DualOptions::default()).unwrap();
        assert_eq!(ds.branch, "C.phi2");
        assert_eq!(ds.status, DualStatus::Verified);
    }

    #[test]
    fn enumerate_examples() {
        let c = ctx7([2, 0, 3, 5]);
        let all: Vec<_> = enumerate_specs(&c, 0, 1000).unwrap().collect();
        assert_eq!(all.len(), 2 + 14 + 13 + 91);
        assert_eq!(enumerate_specs(&c, 0, 1).unwrap().collect::<Vec<_>>(), vec![CodeSpec::a0()]);
        assert_eq!(enumerate_specs(&c, 0, 100).unwrap().count(), 100);
        for s in enumerate_specs(&c, 1, 3000).unwrap() {
            assert_eq!(validate_spec(&c, &s).unwrap(), s);
        }
    }

    #[test]
    fn crt_examples() {
        let c = ctx7([1, 0, 0, 0]);
        let comps = crt_decompose(&c).unwrap();
        let units: Vec<_> = comps.iter().map(|k| c.field().encode(&k.unit.as_ref().unwrap().a1)).collect();
        assert_eq!(units, vec![1, 2, 4]);
        assert!(comps.iter().all(|k| k.length == 7));
        let f2 = FieldCtx::new(2, 1, None).unwrap();
        let c2 = QuotientCtx::new(f2.clone(), 1, RingR::new(f2).one()).unwrap();
        let comps = crt_decompose(&c2).unwrap();
        assert_eq!(comps.iter().map(|k| k.length).collect::<Vec<_>>(), vec![2, 4]);
        assert!(matches!(crt_decompose(&ctx7([2, 0, 0, 0])), Err(Error::NotCube)));
    }

    #[test]
    fn shift_examples() {
        let f = FieldCtx::new(7, 1, None).unwrap();
        let r = RingR::new(f.clone());
        let one = r.one();
        let z = r.zero();
        let w = vec![one.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()];
        assert_eq!(constacyclic_shift(&r, &w, &one), vec![z.clone(), one.clone(), z.clone(), z.clone(), z.clone(), z.clone()]);
        let c = ctx7([2, 0, 3, 5]);
        let two = r.from_field(&f.from_int(2));
        let mut last = vec![z.clone(); 21];
        last[20] = one.clone();
        let c2 = QuotientCtx::new(f.clone(), 1, two.clone()).unwrap();
        assert_eq!(shift(&c2, &last).unwrap()[0], two);
        assert!(matches!(shift(&c, &w), Err(Error::LengthMismatch { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let word: Vec<RElem> = (0..21).map(|_| r.random(&mut rng)).collect();
        let mut cur = word.clone();
        for _ in 0..21 {
            cur = shift(&c, &cur).unwrap();
        }
        let scaled: Vec<RElem> = word.iter().map(|x| r.mul(c.alpha(), x)).collect();
        assert_eq!(cur, scaled);
    }

    #[test]
    fn nc_u_mirrors_nc_v() {
        let c = ctx7([2, 3, 0, 5]);
        assert_eq!(c.case(), Case::NcU);
        let o = Oracle::new(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in [CodeKind::B, CodeKind::C, CodeKind::D] {
            for _ in 0..4 {
                let s = sample_spec(&c, kind, 2, &mut rng).unwrap();
                let d = describe(&c, &s, DualOptions::default()).unwrap();
                let code = o.span_closure(&generators(&c, &s).unwrap());
                assert_eq!(code.dim(), d.dim_fp);
                assert_ne!(d.dual.status, DualStatus::Unverified);
            }
        }
    }

    #[test]
    fn principal_ideals_are_classified() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for c in [ctx7([2, 0, 3, 5]), ctx7([2, 1, 3, 5]), ctx7([2, 3, 0, 5])] {
            let o = Oracle::new(&c);
            for _ in 0..25 {
                let mut f = c.random(&mut rng);
                // push toward non-units
                f = c.mul(&f, &c.pow(&c.y(), rng.gen_range(0..6)));
                if rng.gen_bool(0.3) {
                    f = c.mul(&f, &c.u());
                }
                let spec = classify_principal(&c, &f).unwrap();
                let want = o.span_closure(&[f]);
                let got = o.span_closure(&generators(&c, &spec).unwrap());
                assert!(got.equal(&want).unwrap(), "{spec}");
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn validation_is_idempotent(seed in proptest::prelude::any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for c in [ctx7([2, 0, 3, 5]), ctx7([2, 1, 3, 5])] {
                let f = c.field();
                let kind = [CodeKind::B, CodeKind::C, CodeKind::D][rng.gen_range(0..3)];
                let len = rng.gen_range(0..4);
                let z = ZSeries { digits: (0..len).map(|_| [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)]).collect() };
                let raw = CodeSpec { kind, ell: rng.gen_range(0..16), t: rng.gen_range(0..16), mu: Some(rng.gen_range(0..16)), z };
                match validate_spec(&c, &raw) {
                    Ok(v) => proptest::prop_assert_eq!(validate_spec(&c, &v).unwrap(), v),
                    Err(e) => {
                        let expected = matches!(e, Error::RangeViolation(_) | Error::ZNotInvertible | Error::MuNotBelowIm { .. });
                        proptest::prop_assert!(expected, "unexpected error {}", e);
                    }
                }
            }
        }
    }
}
