//! Finite fields F_{p^m} as coefficient vectors modulo a monic irreducible polynomial.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::Ring;

/// Element of F_{p^m}: coordinates in the basis 1, w, ..., w^{m-1}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(SmallVec<[u32; 4]>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", self.0.as_slice())
        }
    }
}

/// Arithmetic context for F_{p^m}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    m: usize,
    modulus: Vec<u32>,
    q: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Inv,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Remainder of `a` modulo the monic polynomial `b` over F_p (constant-first).
fn fp_poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = r.pop().unwrap() % p64;
        if lead == 0 {
            continue;
        }
        let off = r.len() - db;
        for j in 0..db {
            r[off + j] = (r[off + j] + (p64 - b[j] as u64) * lead) % p64;
        }
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut k = k;
            for _ in 0..d {
                g.push((k % p as u64) as u32);
                k /= p as u64;
            }
            g.push(1);
            if fp_poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Builds F_{p^m}. Without a modulus the smallest monic irreducible
    /// polynomial of degree m (by canonical encoding of its lower coefficients) is used.
    pub fn new(p: u32, m: usize, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 3 {
            return Err(Error::PEqualsThree);
        }
        if m == 0 {
            return Err(Error::BadModulus("degree must be positive".into()));
        }
        let q = (p as u64)
            .checked_pow(m as u32)
            .filter(|q| *q < (1u64 << 40))
            .ok_or_else(|| Error::BadModulus("field too large".into()))?;
        let modulus = match modulus {
            Some(f) => {
                if f.len() != m + 1 || f[m] != 1 {
                    return Err(Error::BadModulus(format!(
                        "expected monic polynomial of degree {m}"
                    )));
                }
                if f.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(format!("coefficient out of range mod {p}")));
                }
                if !fp_is_irreducible(&f, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                f
            }
            None => {
                let count = (p as u64).pow(m as u32);
                (0..count)
                    .map(|k| {
                        let mut f = Vec::with_capacity(m + 1);
                        let mut k = k;
                        for _ in 0..m {
                            f.push((k % p as u64) as u32);
                            k /= p as u64;
                        }
                        f.push(1);
                        f
                    })
                    .find(|f| fp_is_irreducible(f, p))
                    .expect("irreducible polynomials exist in every degree")
            }
        };
        Ok(FieldCtx { p, m, modulus, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Field size p^m.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element from raw coordinates; shorter vectors are zero-padded.
    pub fn elem(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.m {
            return Err(Error::Parse(format!(
                "field element has {} coordinates, expected {}",
                coeffs.len(),
                self.m
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::Parse(format!("coordinate {c} out of range mod {}", self.p)));
        }
        let mut v: SmallVec<[u32; 4]> = coeffs.iter().copied().collect();
        v.resize(self.m, 0);
        Ok(FieldElem(v))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> FieldElem {
        let mut v: SmallVec<[u32; 4]> = SmallVec::from_elem(0, self.m);
        v[0] = k.rem_euclid(self.p as i64) as u32;
        FieldElem(v)
    }

    /// The generator w (class of x modulo the modulus).
    pub fn gen(&self) -> FieldElem {
        let mut v: SmallVec<[u32; 4]> = SmallVec::from_elem(0, self.m);
        if self.m == 1 {
            v[0] = (self.p - self.modulus[0]) % self.p;
        } else {
            v[1] = 1;
        }
        FieldElem(v)
    }

    /// Canonical encoding sum c_i p^i, used for all tie-breaks.
    pub fn encode(&self, a: &FieldElem) -> u64 {
        a.0.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn decode(&self, mut k: u64) -> FieldElem {
        let mut v: SmallVec<[u32; 4]> = SmallVec::with_capacity(self.m);
        for _ in 0..self.m {
            v.push((k % self.p as u64) as u32);
            k /= self.p as u64;
        }
        FieldElem(v)
    }

    /// All elements in canonical-encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |k| self.decode(k))
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, (self.q - 2) as u128))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Dispatch for the binary operations; `Pow` reads the exponent from
    /// the canonical encoding of `b` and `Inv` ignores `b`.
    pub fn arith(&self, a: &FieldElem, b: &FieldElem, op: FieldOp) -> Result<FieldElem> {
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
            FieldOp::Pow => self.pow(a, self.encode(b) as u128),
            FieldOp::Inv => self.inv(a)?,
        })
    }

    /// a^{p^k}.
    pub fn frobenius(&self, a: &FieldElem, k: u64) -> FieldElem {
        let mut r = a.clone();
        for _ in 0..(k % self.m as u64) {
            r = self.pow(&r, self.p as u128);
        }
        r
    }

    pub fn is_cube(&self, a: &FieldElem) -> bool {
        if self.q % 3 == 2 {
            return true;
        }
        self.is_zero(a) || self.pow(a, ((self.q - 1) / 3) as u128) == self.one()
    }

    pub fn cube_root(&self, a: &FieldElem) -> Result<FieldElem> {
        if !self.is_cube(a) {
            return Err(Error::NotACube);
        }
        if self.q % 3 == 2 {
            // 3e = 1 mod (q-1) for e = (2q-1)/3
            return Ok(self.pow(a, ((2 * self.q - 1) / 3) as u128));
        }
        self.elements()
            .find(|x| self.pow(x, 3) == *a)
            .ok_or(Error::NotACube)
    }

    /// alpha_0 = a1^{p^{m-r0}} with s = q0 m + r0, so that alpha_0^{p^s} = a1.
    pub fn alpha0(&self, a1: &FieldElem, s: u32) -> Result<FieldElem> {
        if self.is_zero(a1) {
            return Err(Error::ZeroInput);
        }
        let r0 = s as u64 % self.m as u64;
        let a0 = self.frobenius(a1, self.m as u64 - r0);
        if self.frobenius(&a0, s as u64) != *a1 {
            return Err(Error::Invariant("alpha0^{p^s} != alpha1".into()));
        }
        Ok(a0)
    }

    /// The two roots (delta, gamma) of x^2+x+1, delta having the smaller encoding.
    pub fn find_delta_gamma(&self) -> Result<(FieldElem, FieldElem)> {
        if self.q % 3 != 1 {
            return Err(Error::WrongResidueClass);
        }
        let one = self.one();
        let mut roots = self.elements().filter(|x| {
            let v = self.add(&self.add(&self.mul(x, x), x), &one);
            self.is_zero(&v)
        });
        let d = roots.next().ok_or(Error::Invariant("no cube root of unity".into()))?;
        let g = roots.next().ok_or(Error::Invariant("one cube root of unity".into()))?;
        if self.mul(&d, &g) != one || self.add(&d, &g) != self.neg(&one) {
            return Err(Error::Invariant("delta/gamma equations fail".into()));
        }
        Ok((d, g))
    }

    /// Whether x^2 + c x + c^2 has no root in the field.
    pub fn is_irreducible_quadratic(&self, c: &FieldElem) -> Result<bool> {
        if self.is_zero(c) {
            return Err(Error::ZeroInput);
        }
        let c2 = self.mul(c, c);
        Ok(!self.elements().any(|x| {
            let v = self.add(&self.add(&self.mul(&x, &x), &self.mul(c, &x)), &c2);
            self.is_zero(&v)
        }))
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem((0..self.m).map(|_| rng.gen_range(0..self.p)).collect())
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        loop {
            let a = self.random(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }
}

impl Ring for FieldCtx {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldElem(SmallVec::from_elem(0, self.m))
    }

    fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    fn is_zero(&self, a: &FieldElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % p).collect())
    }

    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + p - y) % p).collect())
    }

    fn neg(&self, a: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem(a.0.iter().map(|&x| (p - x) % p).collect())
    }

    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p as u64;
        let m = self.m;
        if m == 1 {
            return FieldElem(SmallVec::from_elem(
                ((a.0[0] as u64 * b.0[0] as u64) % p) as u32,
                1,
            ));
        }
        let mut buf: SmallVec<[u64; 8]> = SmallVec::from_elem(0, 2 * m - 1);
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                buf[i + j] = (buf[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = buf[k];
            if c == 0 {
                continue;
            }
            for j in 0..m {
                buf[k - m + j] = (buf[k - m + j] + (p - self.modulus[j] as u64) * c) % p;
            }
        }
        FieldElem(buf[..m].iter().map(|&c| c as u32).collect())
    }
}
