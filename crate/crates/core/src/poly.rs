//! Dense univariate polynomials over a coefficient ring, the (x^3 - alpha_0)-adic
//! digit system of the quotient rings, and the cube-case factorizations.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::quotient::{Case, QuotientCtx};
use crate::ring_r::{RElem, RingR};

/// A commutative ring whose elements are plain values and whose operations
/// live on the context object.
pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Polynomial with constant-first coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T> Poly<T> {
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Polynomial ring over a base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<R> {
    base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn monomial(&self, c: R::Elem, k: usize) -> Poly<R::Elem> {
        let mut v = vec![self.base.zero(); k];
        v.push(c);
        self.from_coeffs(v)
    }

    pub fn x(&self) -> Poly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn coeff(&self, f: &Poly<R::Elem>, k: usize) -> R::Elem {
        f.coeffs.get(k).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn scale(&self, c: &R::Elem, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|a| self.base.mul(c, a)).collect())
    }

    /// f * x^k.
    pub fn shift(&self, f: &Poly<R::Elem>, k: usize) -> Poly<R::Elem> {
        if f.is_zero() {
            return f.clone();
        }
        let mut v = vec![self.base.zero(); k];
        v.extend(f.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Remainder and quotient modulo a polynomial with leading coefficient one.
    pub fn divrem_monic(
        &self,
        a: &Poly<R::Elem>,
        b: &Poly<R::Elem>,
    ) -> (Poly<R::Elem>, Poly<R::Elem>) {
        let db = b.degree().expect("division by zero polynomial");
        debug_assert!(b.coeffs[db] == self.base.one());
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return (self.zero(), a.clone());
        }
        let mut q = vec![self.base.zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            let c = r[k].clone();
            if self.base.is_zero(&c) {
                continue;
            }
            q[k - db] = c.clone();
            for j in 0..=db {
                let t = self.base.mul(&c, &b.coeffs[j]);
                r[k - db + j] = self.base.sub(&r[k - db + j], &t);
            }
        }
        r.truncate(db);
        (self.from_coeffs(q), self.from_coeffs(r))
    }

    /// x^{deg f} f(1/x): coefficient reversal about the formal degree.
    pub fn reciprocal(&self, f: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.from_coeffs(f.coeffs.iter().rev().cloned().collect()))
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly { coeffs: Vec::new() }
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.coeffs.len().max(b.coeffs.len());
        self.from_coeffs(
            (0..n)
                .map(|k| self.base.add(&self.coeff(a, k), &self.coeff(b, k)))
                .collect(),
        )
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.coeffs.len().max(b.coeffs.len());
        self.from_coeffs(
            (0..n)
                .map(|k| self.base.sub(&self.coeff(a, k), &self.coeff(b, k)))
                .collect(),
        )
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut v = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = self.base.add(&v[i + j], &self.base.mul(x, y));
            }
        }
        self.from_coeffs(v)
    }
}

impl PolyRing<FieldCtx> {
    pub fn monic(&self, f: &Poly<FieldElem>) -> Result<Poly<FieldElem>> {
        let lead = f.coeffs.last().ok_or(Error::ZeroPolynomial)?;
        let inv = self.base.inv(lead)?;
        Ok(self.scale(&inv, f))
    }

    pub fn divrem(
        &self,
        a: &Poly<FieldElem>,
        b: &Poly<FieldElem>,
    ) -> Result<(Poly<FieldElem>, Poly<FieldElem>)> {
        let lead = b.coeffs.last().ok_or(Error::DivisionByZero)?;
        let inv = self.base.inv(lead)?;
        let (q, r) = self.divrem_monic(a, &self.scale(&inv, b));
        Ok((self.scale(&inv, &q), r))
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Poly<FieldElem>, b: &Poly<FieldElem>) -> Poly<FieldElem> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.divrem(&a, &b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            self.monic(&a).expect("nonzero")
        }
    }

    /// Inverse of a modulo m, if gcd(a, m) = 1.
    pub fn inverse_mod(&self, a: &Poly<FieldElem>, m: &Poly<FieldElem>) -> Result<Poly<FieldElem>> {
        let (mut r0, mut r1) = (m.clone(), self.divrem(a, m)?.1);
        let (mut s0, mut s1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1)?;
            let s = self.sub(&s0, &self.mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != Some(0) {
            return Err(Error::NotAUnit);
        }
        let c = self.base.inv(&r0.coeffs[0])?;
        Ok(self.divrem(&self.scale(&c, &s0), m)?.1)
    }
}

pub type FPoly = Poly<FieldElem>;
pub type RPoly = Poly<RElem>;

/// Quadratic digit a x^2 + b x + c stored constant-first as [c, b, a].
pub type Digit = [FieldElem; 3];

/// (x^3 - alpha_0)-adic normal form of an element of R_alpha.
///
/// Digit-list lengths depend on the case: for `NcV`/`NcFull` the v-part is
/// eliminated and `f_digits`, `u_digits` have 2p^s entries; for `NcUv` the
/// uv-part is folded into `f_digits` (2p^s) and `u_digits`, `v_digits` have
/// p^s; otherwise all four lists are the raw p^s-digit expansions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdicForm {
    pub f_digits: Vec<Digit>,
    pub u_digits: Vec<Digit>,
    pub v_digits: Vec<Digit>,
    pub uv_digits: Vec<Digit>,
}

fn digit_lengths(ctx: &QuotientCtx) -> [usize; 4] {
    let ps = ctx.ps();
    match ctx.case() {
        Case::NcV | Case::NcFull => [2 * ps, 2 * ps, 0, 0],
        Case::NcUv => [2 * ps, ps, ps, 0],
        _ => [ps; 4],
    }
}

fn digit_of(field: &FieldCtx, f: &FPoly) -> Digit {
    let fr = PolyRing::new(field.clone());
    [fr.coeff(f, 0), fr.coeff(f, 1), fr.coeff(f, 2)]
}

fn raw_digits(ctx: &QuotientCtx, f: &FPoly) -> Vec<Digit> {
    let fr = ctx.fpoly_ring();
    let y = ctx.y_field();
    let mut out = Vec::with_capacity(ctx.ps());
    let mut cur = f.clone();
    for _ in 0..ctx.ps() {
        let (q, r) = fr.divrem_monic(&cur, &y);
        out.push(digit_of(ctx.field(), &r));
        cur = q;
    }
    debug_assert!(cur.is_zero());
    out
}

fn axpy(field: &FieldCtx, acc: &mut Digit, c: &FieldElem, d: &Digit) {
    for k in 0..3 {
        acc[k] = field.add(&acc[k], &field.mul(c, &d[k]));
    }
}

/// Expands f into (x^3 - alpha_0)-adic digits, eliminating v (or uv) where
/// the case allows it.
pub fn adic_expand(f: &RPoly, ctx: &QuotientCtx) -> Result<AdicForm> {
    let n = ctx.n();
    if let Some(d) = f.degree() {
        if d >= n {
            return Err(Error::DegreeTooLarge { deg: d, bound: n });
        }
    }
    let field = ctx.field();
    let comps = ctx.ring().components(f);
    let raw: Vec<Vec<Digit>> = comps.iter().map(|c| raw_digits(ctx, c)).collect();
    let ps = ctx.ps();
    let zero_digit = || -> Digit { [field.zero(), field.zero(), field.zero()] };
    let alpha = ctx.alpha();
    let pad = |v: &Vec<Digit>| {
        let mut v = v.clone();
        v.resize(2 * ps, zero_digit());
        v
    };
    match ctx.case() {
        Case::NcV | Case::NcFull => {
            let mut fd = pad(&raw[0]);
            let mut ud = pad(&raw[1]);
            let i3 = field.inv(&alpha.a3)?;
            let c_u_high = field.neg(&field.mul(&field.mul(&i3, &i3), &alpha.a4));
            let c_u_low = field.neg(&field.mul(&i3, &alpha.a2));
            for k in 0..ps {
                axpy(field, &mut fd[ps + k], &i3, &raw[2][k]);
                axpy(field, &mut ud[ps + k], &c_u_high, &raw[2][k]);
                axpy(field, &mut ud[k], &c_u_low, &raw[2][k]);
                axpy(field, &mut ud[ps + k], &i3, &raw[3][k]);
            }
            Ok(AdicForm {
                f_digits: fd,
                u_digits: ud,
                v_digits: Vec::new(),
                uv_digits: Vec::new(),
            })
        }
        Case::NcUv => {
            let mut fd = pad(&raw[0]);
            let i4 = field.inv(&alpha.a4)?;
            for k in 0..ps {
                axpy(field, &mut fd[ps + k], &i4, &raw[3][k]);
            }
            Ok(AdicForm {
                f_digits: fd,
                u_digits: raw[1].clone(),
                v_digits: raw[2].clone(),
                uv_digits: Vec::new(),
            })
        }
        _ => Ok(AdicForm {
            f_digits: raw[0].clone(),
            u_digits: raw[1].clone(),
            v_digits: raw[2].clone(),
            uv_digits: raw[3].clone(),
        }),
    }
}

/// Field polynomial sum_k d_k (x^3 - alpha_0)^k.
pub fn digits_to_fpoly(ctx: &QuotientCtx, digits: &[Digit]) -> FPoly {
    let fr = ctx.fpoly_ring();
    let y = ctx.y_field();
    let mut acc = fr.zero();
    for d in digits.iter().rev() {
        acc = fr.add(&fr.mul(&acc, &y), &fr.from_coeffs(d.to_vec()));
    }
    acc
}

/// Inverse of [`adic_expand`]: evaluates the digit sums and reduces.
pub fn adic_assemble(a: &AdicForm, ctx: &QuotientCtx) -> Result<RPoly> {
    let want = digit_lengths(ctx);
    let got = [
        a.f_digits.len(),
        a.u_digits.len(),
        a.v_digits.len(),
        a.uv_digits.len(),
    ];
    if want != got {
        return Err(Error::ShapeMismatch(format!(
            "expected digit lengths {want:?}, got {got:?}"
        )));
    }
    let comps = [
        digits_to_fpoly(ctx, &a.f_digits),
        digits_to_fpoly(ctx, &a.u_digits),
        digits_to_fpoly(ctx, &a.v_digits),
        digits_to_fpoly(ctx, &a.uv_digits),
    ];
    let f = ctx.ring().from_components(&comps);
    Ok(ctx.to_rpoly(&ctx.reduce(&f)))
}

/// Factors of x^{3p^s} - alpha for a cube alpha: three linear-in-x^{p^s}
/// factors when p^m = 1 mod 3, a linear and a quadratic one otherwise.
pub fn crt_factorization(ring: &RingR, alpha: &RElem, s: u32) -> Result<Vec<RPoly>> {
    if !ring.is_cube(alpha)? {
        return Err(Error::NotACube);
    }
    let field = ring.field();
    let beta = ring.cube_witness(alpha)?;
    let pr = PolyRing::new(ring.clone());
    let ps = (field.p() as usize).pow(s);
    let xps = pr.monomial(ring.one(), ps);
    let factors = if field.q() % 3 == 1 {
        let (d, g) = field.find_delta_gamma()?;
        [ring.one(), ring.from_field(&d), ring.from_field(&g)]
            .iter()
            .map(|c| pr.sub(&xps, &pr.constant(ring.mul(c, &beta))))
            .collect::<Vec<_>>()
    } else {
        let lin = pr.sub(&xps, &pr.constant(beta.clone()));
        let quad = pr.from_coeffs({
            let mut v = vec![ring.zero(); 2 * ps + 1];
            v[0] = ring.mul(&beta, &beta);
            v[ps] = beta.clone();
            v[2 * ps] = ring.one();
            v
        });
        vec![lin, quad]
    };
    let prod = factors.iter().fold(pr.one(), |acc, f| pr.mul(&acc, f));
    let target = pr.sub(&pr.monomial(ring.one(), 3 * ps), &pr.constant(alpha.clone()));
    if prod != target {
        return Err(Error::ProductMismatch);
    }
    Ok(factors)
}
