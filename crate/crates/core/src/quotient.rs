//! The ambient ring R_alpha = R[x]/(x^{3p^s} - alpha).

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::poly::{crt_factorization, FPoly, PolyRing, RPoly, Ring};
use crate::ring_r::{RElem, RingR};

/// Which structure theory applies to x^{3p^s} - alpha.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// alpha is a cube; R_alpha splits by the Chinese remainder theorem.
    Cube,
    /// alpha = a1 + a3 v + a4 uv with a3, a4 nonzero.
    NcV,
    /// alpha = a1 + a2 u + a3 v + a4 uv with a2, a3 nonzero.
    NcFull,
    /// alpha = a1 + a4 uv with a4 nonzero.
    NcUv,
    /// alpha = a1 + a2 u + a4 uv with a2, a4 nonzero: NcV after exchanging u and v.
    NcU,
    /// Remaining non-cube shapes.
    NcOther,
}

impl Case {
    pub fn tag(&self) -> &'static str {
        match self {
            Case::Cube => "CUBE",
            Case::NcV => "NC_V",
            Case::NcFull => "NC_FULL",
            Case::NcUv => "NC_UV",
            Case::NcU => "NC_U",
            Case::NcOther => "NC_OTHER",
        }
    }

    pub fn is_local(&self) -> bool {
        !matches!(self, Case::Cube)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Reduced element of R_alpha: exactly n coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QElem {
    coeffs: Vec<RElem>,
}

impl QElem {
    pub fn coeffs(&self) -> &[RElem] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Index(usize),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCtx {
    ring: RingR,
    s: u32,
    ps: usize,
    n: usize,
    alpha: RElem,
    alpha0: FieldElem,
    case: Case,
}

impl QuotientCtx {
    pub fn new(field: FieldCtx, s: u32, alpha: RElem) -> Result<Self> {
        let ring = RingR::new(field.clone());
        if !ring.is_unit(&alpha) {
            return Err(Error::NotAUnit);
        }
        let ps = (field.p() as usize)
            .checked_pow(s)
            .filter(|&ps| ps <= 1 << 20)
            .ok_or_else(|| Error::RangeViolation("p^s too large".into()))?;
        let alpha0 = field.alpha0(&alpha.a1, s)?;
        let nz = |a: &FieldElem| !field.is_zero(a);
        let case = if ring.is_cube(&alpha)? {
            Case::Cube
        } else {
            match (nz(&alpha.a2), nz(&alpha.a3), nz(&alpha.a4)) {
                (false, true, true) => Case::NcV,
                (true, true, _) => Case::NcFull,
                (false, false, true) => Case::NcUv,
                (true, false, true) => Case::NcU,
                _ => Case::NcOther,
            }
        };
        Ok(QuotientCtx {
            ring,
            s,
            ps,
            n: 3 * ps,
            alpha,
            alpha0,
            case,
        })
    }

    pub fn field(&self) -> &FieldCtx {
        self.ring.field()
    }

    pub fn ring(&self) -> &RingR {
        &self.ring
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// p^s.
    pub fn ps(&self) -> usize {
        self.ps
    }

    /// Code length 3p^s.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &RElem {
        &self.alpha
    }

    pub fn alpha0(&self) -> &FieldElem {
        &self.alpha0
    }

    pub fn case(&self) -> Case {
        self.case
    }

    /// Dimension of R_alpha over F_p.
    pub fn fp_dim(&self) -> usize {
        4 * self.field().m() * self.n
    }

    /// True when x^3 - alpha_0 has nilpotency index 3p^s (odd characteristic, a2 != 0).
    pub fn twisted(&self) -> bool {
        self.case == Case::NcFull && self.field().p() != 2
    }

    /// Nilpotency index of x^3 - alpha_0 from (x^3 - alpha_0)^{p^s} = alpha - alpha_1.
    pub fn predicted_nilpotency(&self) -> usize {
        let f = self.field();
        let a = &self.alpha;
        if f.is_zero(&a.a2) && f.is_zero(&a.a3) && f.is_zero(&a.a4) {
            self.ps
        } else if f.is_zero(&f.mul(&f.add(&a.a2, &a.a2), &a.a3)) {
            2 * self.ps
        } else {
            3 * self.ps
        }
    }

    pub fn fpoly_ring(&self) -> PolyRing<FieldCtx> {
        PolyRing::new(self.field().clone())
    }

    pub fn rpoly_ring(&self) -> PolyRing<RingR> {
        PolyRing::new(self.ring.clone())
    }

    /// The ambient ring for the dual code, x^{3p^s} - alpha^{-1}.
    pub fn dual(&self) -> Result<QuotientCtx> {
        QuotientCtx::new(self.field().clone(), self.s, self.ring.inv(&self.alpha)?)
    }

    /// Same ring with u and v exchanged.
    pub fn swapped(&self) -> Result<QuotientCtx> {
        QuotientCtx::new(self.field().clone(), self.s, self.ring.swap_uv(&self.alpha))
    }

    pub fn swap_elem(&self, a: &QElem) -> QElem {
        QElem {
            coeffs: a.coeffs.iter().map(|c| self.ring.swap_uv(c)).collect(),
        }
    }

    /// x^3 - alpha_0 as a field polynomial.
    pub fn y_field(&self) -> FPoly {
        let f = self.field();
        self.fpoly_ring()
            .from_coeffs(vec![f.neg(&self.alpha0), f.zero(), f.zero(), f.one()])
    }

    pub fn y(&self) -> QElem {
        self.from_fpoly(&self.y_field())
    }

    pub fn x(&self) -> QElem {
        self.monomial(self.ring.one(), 1)
    }

    pub fn u(&self) -> QElem {
        self.constant(self.ring.u())
    }

    pub fn v(&self) -> QElem {
        self.constant(self.ring.v())
    }

    pub fn constant(&self, c: RElem) -> QElem {
        self.monomial(c, 0)
    }

    pub fn monomial(&self, c: RElem, k: usize) -> QElem {
        self.reduce(&self.rpoly_ring().monomial(c, k))
    }

    pub fn from_fpoly(&self, f: &FPoly) -> QElem {
        self.reduce(&self.ring.lift(&self.ring.one(), f))
    }

    /// Canonical representative: x^n is replaced by alpha until the degree is below n.
    pub fn reduce(&self, f: &RPoly) -> QElem {
        let n = self.n;
        let mut c: Vec<RElem> = f.coeffs().to_vec();
        for k in (n..c.len()).rev() {
            let t = self.ring.mul(&self.alpha, &c[k]);
            c[k - n] = self.ring.add(&c[k - n], &t);
        }
        c.resize(n, self.ring.zero());
        QElem { coeffs: c }
    }

    /// Coefficient vector of length n as an element.
    pub fn from_coeffs(&self, coeffs: Vec<RElem>) -> Result<QElem> {
        if coeffs.len() != self.n {
            return Err(Error::ContextMismatch);
        }
        Ok(QElem { coeffs })
    }

    pub fn to_rpoly(&self, a: &QElem) -> RPoly {
        self.rpoly_ring().from_coeffs(a.coeffs.clone())
    }

    pub fn q_mul(&self, a: &QElem, b: &QElem) -> Result<QElem> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::ContextMismatch);
        }
        Ok(self.mul(a, b))
    }

    pub fn scale(&self, c: &RElem, a: &QElem) -> QElem {
        QElem {
            coeffs: a.coeffs.iter().map(|x| self.ring.mul(c, x)).collect(),
        }
    }

    /// a * x^k.
    pub fn shift_x(&self, a: &QElem, k: usize) -> QElem {
        let n = self.n;
        let mut out = vec![self.ring.zero(); n];
        for (i, c) in a.coeffs.iter().enumerate() {
            let mut j = i + k;
            let mut v = c.clone();
            while j >= n {
                v = self.ring.mul(&self.alpha, &v);
                j -= n;
            }
            out[j] = v;
        }
        QElem { coeffs: out }
    }

    /// Residue of a modulo u and v, as a field polynomial.
    pub fn field_part(&self, a: &QElem) -> FPoly {
        self.fpoly_ring()
            .from_coeffs(a.coeffs.iter().map(|c| c.a1.clone()).collect())
    }

    pub fn nilpotency_index(&self, a: &QElem) -> Nilpotency {
        let cap = 3 * self.ps + 1;
        let mut pw = a.clone();
        for k in 1..=cap {
            if self.is_zero(&pw) {
                return Nilpotency::Index(k);
            }
            if k == cap {
                break;
            }
            pw = self.mul(&pw, a);
        }
        Nilpotency::Infinite
    }

    pub fn is_unit(&self, a: &QElem) -> Result<bool> {
        let fr = self.fpoly_ring();
        let abar = self.field_part(a);
        if self.case == Case::Cube {
            for g in crt_factorization(&self.ring, &self.alpha, self.s)? {
                let gbar = fr.from_coeffs(g.coeffs().iter().map(|c| c.a1.clone()).collect());
                if fr.gcd(&abar, &gbar).degree() != Some(0) {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        Ok(!fr.divrem_monic(&abar, &self.y_field()).1.is_zero())
    }

    /// Inverse through the residue field followed by a nilpotent correction.
    pub fn invert(&self, a: &QElem) -> Result<QElem> {
        if !self.is_unit(a)? {
            return Err(Error::NotAUnit);
        }
        let fr = self.fpoly_ring();
        let modulus = if self.case == Case::Cube {
            let f = self.field();
            let mut c = vec![f.zero(); self.n + 1];
            c[0] = f.neg(&self.alpha.a1);
            c[self.n] = f.one();
            fr.from_coeffs(c)
        } else {
            self.y_field()
        };
        let e = self.from_fpoly(&fr.inverse_mod(&self.field_part(a), &modulus)?);
        let nil = self.sub(&self.one(), &self.mul(a, &e));
        let mut inv = e;
        let mut pw = nil;
        let mut rounds = 0;
        while !self.is_zero(&pw) {
            inv = self.mul(&inv, &self.add(&self.one(), &pw));
            pw = self.mul(&pw, &pw);
            rounds += 1;
            if rounds > 64 {
                return Err(Error::Invariant("correction term is not nilpotent".into()));
            }
        }
        if self.mul(a, &inv) != self.one() {
            return Err(Error::Invariant("a * a^{-1} != 1".into()));
        }
        Ok(inv)
    }

    /// Inverse of a field polynomial of degree at most 2 through its norm
    /// g(x) g(zeta x) g(zeta^2 x) = P(x^3), using P(x^3)^{p^s} = P^{(p^s)}(alpha).
    pub fn invert_by_norm(&self, g: &FPoly) -> Result<QElem> {
        if g.degree().is_none_or(|d| d > 2) {
            return Err(Error::DegreeTooLarge {
                deg: g.degree().unwrap_or(0),
                bound: 3,
            });
        }
        let f = self.field();
        let fr = self.fpoly_ring();
        let (zeta, _) = f.find_delta_gamma()?;
        let twist = |g: &FPoly, z: &FieldElem| {
            fr.from_coeffs(
                g.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| f.mul(c, &f.pow(z, k as u128)))
                    .collect(),
            )
        };
        let g1 = twist(g, &zeta);
        let g2 = twist(g, &f.mul(&zeta, &zeta));
        let norm = fr.mul(g, &fr.mul(&g1, &g2));
        let pcoef: Vec<FieldElem> = (0..=norm.degree().unwrap_or(0) / 3)
            .map(|k| fr.coeff(&norm, 3 * k))
            .collect();
        if (0..=norm.degree().unwrap_or(0)).any(|k| k % 3 != 0 && !f.is_zero(&fr.coeff(&norm, k))) {
            return Err(Error::Invariant("norm is not a polynomial in x^3".into()));
        }
        let mut c = self.ring.zero();
        for (k, pk) in pcoef.iter().enumerate() {
            let t = self.ring.scale(&f.frobenius(pk, self.s as u64), &self.ring.pow(&self.alpha, k as u128));
            c = self.ring.add(&c, &t);
        }
        let cinv = self.ring.inv(&c)?;
        let p_x3 = self.from_fpoly(&fr.from_coeffs(
            (0..=3 * (pcoef.len() - 1))
                .map(|k| if k % 3 == 0 { pcoef[k / 3].clone() } else { f.zero() })
                .collect(),
        ));
        let rest = self.pow(&p_x3, (self.ps - 1) as u128);
        let out = self.scale(&cinv, &self.mul(&self.from_fpoly(&fr.mul(&g1, &g2)), &rest));
        if self.mul(&self.from_fpoly(g), &out) != self.one() {
            return Err(Error::Invariant("norm inverse fails".into()));
        }
        Ok(out)
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> QElem {
        QElem {
            coeffs: (0..self.n).map(|_| self.ring.random(rng)).collect(),
        }
    }

    /// Generators of the maximal ideal (local cases only).
    pub fn maximal_ideal_generators(&self) -> Result<Vec<(&'static str, QElem)>> {
        let y = ("x^3-alpha0", self.y());
        let u = ("u", self.u());
        let v = ("v", self.v());
        Ok(match self.case {
            Case::Cube => return Err(Error::UnsupportedCase(self.case.tag().into())),
            Case::NcV | Case::NcFull => vec![y, u],
            Case::NcU => vec![y, v],
            Case::NcUv | Case::NcOther => vec![y, u, v],
        })
    }
}

impl Ring for QuotientCtx {
    type Elem = QElem;

    fn zero(&self) -> QElem {
        QElem {
            coeffs: vec![self.ring.zero(); self.n],
        }
    }

    fn one(&self) -> QElem {
        self.constant(self.ring.one())
    }

    fn is_zero(&self, a: &QElem) -> bool {
        a.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    fn add(&self, a: &QElem, b: &QElem) -> QElem {
        QElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.ring.add(x, y)).collect(),
        }
    }

    fn sub(&self, a: &QElem, b: &QElem) -> QElem {
        QElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.ring.sub(x, y)).collect(),
        }
    }

    fn neg(&self, a: &QElem) -> QElem {
        QElem {
            coeffs: a.coeffs.iter().map(|x| self.ring.neg(x)).collect(),
        }
    }

    fn mul(&self, a: &QElem, b: &QElem) -> QElem {
        let n = self.n;
        let mut lo = vec![self.ring.zero(); n];
        let mut hi = vec![self.ring.zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.ring.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = self.ring.mul(x, y);
                let k = i + j;
                if k < n {
                    lo[k] = self.ring.add(&lo[k], &t);
                } else {
                    hi[k - n] = self.ring.add(&hi[k - n], &t);
                }
            }
        }
        for k in 0..n {
            let t = self.ring.mul(&self.alpha, &hi[k]);
            lo[k] = self.ring.add(&lo[k], &t);
        }
        QElem { coeffs: lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx7(a: [i64; 4]) -> QuotientCtx {
        let f = FieldCtx::new(7, 1, None).unwrap();
        let alpha = RingR::new(f.clone()).elem_ints(&a);
        QuotientCtx::new(f, 1, alpha).unwrap()
    }

    fn ctx4() -> QuotientCtx {
        let f = FieldCtx::new(2, 2, None).unwrap();
        let alpha = RElem::new(f.gen(), f.one(), f.one(), f.zero());
        QuotientCtx::new(f, 1, alpha).unwrap()
    }

    #[test]
    fn case_tags() {
        assert_eq!(ctx7([2, 0, 3, 5]).case(), Case::NcV);
        assert_eq!(ctx7([2, 1, 3, 5]).case(), Case::NcFull);
        assert_eq!(ctx7([2, 0, 0, 5]).case(), Case::NcUv);
        assert_eq!(ctx7([2, 1, 0, 5]).case(), Case::NcU);
        assert_eq!(ctx7([2, 0, 3, 0]).case(), Case::NcOther);
        assert_eq!(ctx7([1, 0, 0, 0]).case(), Case::Cube);
        assert_eq!(ctx7([6, 3, 2, 1]).case(), Case::Cube);
        assert_eq!(ctx4().case(), Case::NcFull);
        let f = FieldCtx::new(7, 1, None).unwrap();
        let u = RingR::new(f.clone()).u();
        assert_eq!(QuotientCtx::new(f, 1, u), Err(Error::NotAUnit));
    }

    #[test]
    fn reduce_examples() {
        let c = ctx7([2, 0, 3, 5]);
        let rr = c.rpoly_ring();
        let r = c.ring();
        assert_eq!(c.reduce(&rr.monomial(r.one(), 21)), c.constant(c.alpha().clone()));
        assert_eq!(c.reduce(&rr.monomial(r.one(), 22)), c.monomial(c.alpha().clone(), 1));
        assert_eq!(c.pow(&c.y(), 7), c.constant(r.elem_ints(&[0, 0, 3, 5])));
    }

    #[test]
    fn mul_examples() {
        let c = ctx7([2, 0, 3, 5]);
        let y7 = c.pow(&c.y(), 7);
        assert!(c.is_zero(&c.mul(&y7, &y7)));
        let c = ctx7([2, 1, 3, 5]);
        let y7 = c.pow(&c.y(), 7);
        let lhs = c.mul(&y7, &y7);
        let two_a2_u = c.ring().elem_ints(&[0, 2, 0, 0]);
        assert_eq!(lhs, c.scale(&two_a2_u, &y7));
        let f = c.random(&mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(c.mul(&c.one(), &f), f);
        assert_eq!(c.q_mul(&f, &c.zero()).unwrap(), c.zero());
        let short = ctx7([2, 0, 0, 5]);
        let other = QuotientCtx::new(short.field().clone(), 0, short.alpha().clone()).unwrap();
        assert_eq!(c.q_mul(&f, &other.one()), Err(Error::ContextMismatch));
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(ctx7([2, 0, 3, 5]).nilpotency_index(&ctx7([2, 0, 3, 5]).y()), Nilpotency::Index(14));
        let c = ctx7([2, 1, 3, 5]);
        assert_eq!(c.nilpotency_index(&c.y()), Nilpotency::Index(21));
        let c = ctx4();
        assert_eq!(c.nilpotency_index(&c.y()), Nilpotency::Index(4));
        let c = ctx7([2, 0, 0, 5]);
        assert_eq!(c.nilpotency_index(&c.y()), Nilpotency::Index(14));
        assert_eq!(c.nilpotency_index(&c.one()), Nilpotency::Infinite);
        assert_eq!(c.nilpotency_index(&c.u()), Nilpotency::Index(2));
        for c in [ctx7([2, 0, 3, 5]), ctx7([2, 1, 3, 5]), ctx7([2, 0, 0, 5]), ctx7([3, 0, 0, 0]), ctx7([1, 2, 0, 0]), ctx4()] {
            assert_eq!(c.nilpotency_index(&c.y()), Nilpotency::Index(c.predicted_nilpotency()));
        }
    }

    #[test]
    fn structure_identities() {
        let c = ctx7([2, 1, 3, 5]);
        let mut tail = c.alpha().clone();
        tail.a1 = c.field().zero();
        assert_eq!(c.pow(&c.y(), 7), c.constant(tail));
        let c = ctx7([2, 0, 0, 5]);
        assert_eq!(c.pow(&c.y(), 7), c.constant(c.ring().elem_ints(&[0, 0, 0, 5])));
    }

    #[test]
    fn unit_examples() {
        let c = ctx7([2, 0, 3, 5]);
        let fr = c.fpoly_ring();
        let f = c.field();
        let q = fr.from_coeffs(vec![f.one(), f.one(), f.one()]);
        assert!(c.is_unit(&c.from_fpoly(&q)).unwrap());
        assert!(!c.is_unit(&c.y()).unwrap());
        assert!(!c.is_unit(&c.u()).unwrap());
        assert_eq!(c.invert(&c.one()).unwrap(), c.one());
        assert_eq!(c.invert(&c.u()), Err(Error::NotAUnit));
        let xm3 = fr.from_coeffs(vec![f.from_int(-3), f.one()]);
        let r = c.invert(&c.from_fpoly(&xm3)).unwrap();
        assert_eq!(c.mul(&r, &c.from_fpoly(&xm3)), c.one());
        assert_eq!(c.invert_by_norm(&xm3).unwrap(), r);
        let c = ctx7([2, 1, 3, 5]);
        let inv = c.invert(&c.from_fpoly(&q)).unwrap();
        assert_eq!(c.invert_by_norm(&q).unwrap(), inv);
    }

    #[test]
    fn cube_case_units() {
        let c = ctx7([1, 0, 0, 0]);
        let fr = c.fpoly_ring();
        let f = c.field();
        // x - 1 divides x^21 - 1
        let xm1 = c.from_fpoly(&fr.from_coeffs(vec![f.from_int(-1), f.one()]));
        assert!(!c.is_unit(&xm1).unwrap());
        let xm3 = c.from_fpoly(&fr.from_coeffs(vec![f.from_int(-3), f.one()]));
        assert!(c.is_unit(&xm3).unwrap());
        let inv = c.invert(&xm3).unwrap();
        assert_eq!(c.mul(&inv, &xm3), c.one());
    }

    fn contexts() -> Vec<QuotientCtx> {
        vec![ctx7([2, 0, 3, 5]), ctx7([2, 1, 3, 5]), ctx7([2, 0, 0, 5]), ctx7([3, 1, 0, 0]), ctx7([1, 2, 3, 4]), ctx4()]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn inversion_and_local_dichotomy(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for c in contexts() {
                let a = c.random(&mut rng);
                if c.is_unit(&a).unwrap() {
                    let b = c.invert(&a).unwrap();
                    prop_assert_eq!(c.mul(&a, &b), c.one());
                } else if c.case().is_local() {
                    prop_assert!(matches!(c.nilpotency_index(&a), Nilpotency::Index(_)));
                }
                prop_assert_eq!(c.mul(&a, &c.x()), c.shift_x(&a, 1));
                if c.field().q() % 3 == 1 && c.case().is_local() {
                    let g = c.fpoly_ring().from_coeffs((0..3).map(|_| c.field().random(&mut rng)).collect());
                    if !g.is_zero() && c.is_unit(&c.from_fpoly(&g)).unwrap() {
                        prop_assert_eq!(c.invert_by_norm(&g).unwrap(), c.invert(&c.from_fpoly(&g)).unwrap());
                    }
                }
            }
        }
    }
}
