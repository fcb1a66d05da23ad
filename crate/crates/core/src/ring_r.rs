//! The ring R = F_q + uF_q + vF_q + uvF_q with u^2 = v^2 = 0 and uv = vu.

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::poly::{FPoly, PolyRing, RPoly, Ring};

/// a1 + a2 u + a3 v + a4 uv.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RElem {
    pub a1: FieldElem,
    pub a2: FieldElem,
    pub a3: FieldElem,
    pub a4: FieldElem,
}

impl RElem {
    pub fn new(a1: FieldElem, a2: FieldElem, a3: FieldElem, a4: FieldElem) -> Self {
        RElem { a1, a2, a3, a4 }
    }

    /// Component by index: 0 -> 1, 1 -> u, 2 -> v, 3 -> uv.
    pub fn comp(&self, i: usize) -> &FieldElem {
        match i {
            0 => &self.a1,
            1 => &self.a2,
            2 => &self.a3,
            3 => &self.a4,
            _ => panic!("component index {i} out of range"),
        }
    }

    pub fn comps(&self) -> [&FieldElem; 4] {
        [&self.a1, &self.a2, &self.a3, &self.a4]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingR {
    field: FieldCtx,
}

impl RingR {
    pub fn new(field: FieldCtx) -> Self {
        RingR { field }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn from_field(&self, a: &FieldElem) -> RElem {
        let z = self.field.zero();
        RElem::new(a.clone(), z.clone(), z.clone(), z)
    }

    /// Element with prime-field integer components.
    pub fn elem_ints(&self, c: &[i64; 4]) -> RElem {
        let f = &self.field;
        RElem::new(f.from_int(c[0]), f.from_int(c[1]), f.from_int(c[2]), f.from_int(c[3]))
    }

    fn basis(&self, i: usize) -> RElem {
        let mut c = [0i64; 4];
        c[i] = 1;
        self.elem_ints(&c)
    }

    pub fn u(&self) -> RElem {
        self.basis(1)
    }

    pub fn v(&self) -> RElem {
        self.basis(2)
    }

    pub fn uv(&self) -> RElem {
        self.basis(3)
    }

    /// c * x for a field scalar c.
    pub fn scale(&self, c: &FieldElem, x: &RElem) -> RElem {
        let f = &self.field;
        RElem::new(f.mul(c, &x.a1), f.mul(c, &x.a2), f.mul(c, &x.a3), f.mul(c, &x.a4))
    }

    pub fn is_unit(&self, x: &RElem) -> bool {
        !self.field.is_zero(&x.a1)
    }

    /// Inverse via x = x1 (1 + n), n^3 = 0.
    pub fn inv(&self, x: &RElem) -> Result<RElem> {
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        let i1 = self.field.inv(&x.a1)?;
        let mut n = self.scale(&i1, x);
        n.a1 = self.field.zero();
        let n2 = self.mul(&n, &n);
        let s = self.add(&self.sub(&self.one(), &n), &n2);
        Ok(self.scale(&i1, &s))
    }

    pub fn is_cube(&self, x: &RElem) -> Result<bool> {
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        Ok(self.field.is_cube(&x.a1))
    }

    /// beta with beta^3 = x, built coordinate-wise and checked by multiplication.
    pub fn cube_witness(&self, x: &RElem) -> Result<RElem> {
        if !self.is_cube(x)? {
            return Err(Error::NotACube);
        }
        let f = &self.field;
        let b1 = f.cube_root(&x.a1)?;
        let k = f.mul(&f.inv(&f.from_int(3))?, &f.inv(&f.mul(&b1, &b1))?);
        let b2 = f.mul(&k, &x.a2);
        let b3 = f.mul(&k, &x.a3);
        let six = f.mul(&f.from_int(6), &f.mul(&b1, &f.mul(&b2, &b3)));
        let b4 = f.mul(&k, &f.sub(&x.a4, &six));
        let beta = RElem::new(b1, b2, b3, b4);
        if self.pow(&beta, 3) != *x {
            return Err(Error::Invariant("cube witness fails beta^3 = x".into()));
        }
        Ok(beta)
    }

    /// The automorphism exchanging u and v.
    pub fn swap_uv(&self, x: &RElem) -> RElem {
        RElem::new(x.a1.clone(), x.a3.clone(), x.a2.clone(), x.a4.clone())
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> RElem {
        let f = &self.field;
        RElem::new(f.random(rng), f.random(rng), f.random(rng), f.random(rng))
    }

    pub fn random_unit<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> RElem {
        let mut x = self.random(rng);
        x.a1 = self.field.random_nonzero(rng);
        x
    }

    /// Splits an R-polynomial into its four field-polynomial components.
    pub fn components(&self, f: &RPoly) -> [FPoly; 4] {
        let fr = PolyRing::new(self.field.clone());
        std::array::from_fn(|i| fr.from_coeffs(f.coeffs().iter().map(|c| c.comp(i).clone()).collect()))
    }

    /// f1 + u f2 + v f3 + uv f4.
    pub fn from_components(&self, c: &[FPoly; 4]) -> RPoly {
        let fr = PolyRing::new(self.field.clone());
        let len = c.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
        let coeffs = (0..len)
            .map(|k| {
                RElem::new(
                    fr.coeff(&c[0], k),
                    fr.coeff(&c[1], k),
                    fr.coeff(&c[2], k),
                    fr.coeff(&c[3], k),
                )
            })
            .collect();
        PolyRing::new(self.clone()).from_coeffs(coeffs)
    }

    /// Embeds a field polynomial times a fixed ring element.
    pub fn lift(&self, c: &RElem, f: &FPoly) -> RPoly {
        PolyRing::new(self.clone()).from_coeffs(f.coeffs().iter().map(|a| self.scale(a, c)).collect())
    }
}

impl Ring for RingR {
    type Elem = RElem;

    fn zero(&self) -> RElem {
        self.from_field(&self.field.zero())
    }

    fn one(&self) -> RElem {
        self.from_field(&self.field.one())
    }

    fn is_zero(&self, x: &RElem) -> bool {
        x.comps().iter().all(|c| self.field.is_zero(c))
    }

    fn add(&self, x: &RElem, y: &RElem) -> RElem {
        let f = &self.field;
        RElem::new(f.add(&x.a1, &y.a1), f.add(&x.a2, &y.a2), f.add(&x.a3, &y.a3), f.add(&x.a4, &y.a4))
    }

    fn sub(&self, x: &RElem, y: &RElem) -> RElem {
        let f = &self.field;
        RElem::new(f.sub(&x.a1, &y.a1), f.sub(&x.a2, &y.a2), f.sub(&x.a3, &y.a3), f.sub(&x.a4, &y.a4))
    }

    fn neg(&self, x: &RElem) -> RElem {
        let f = &self.field;
        RElem::new(f.neg(&x.a1), f.neg(&x.a2), f.neg(&x.a3), f.neg(&x.a4))
    }

    fn mul(&self, x: &RElem, y: &RElem) -> RElem {
        let f = &self.field;
        let m = |a: &FieldElem, b: &FieldElem| f.mul(a, b);
        RElem::new(
            m(&x.a1, &y.a1),
            f.add(&m(&x.a1, &y.a2), &m(&x.a2, &y.a1)),
            f.add(&m(&x.a1, &y.a3), &m(&x.a3, &y.a1)),
            f.add(
                &f.add(&m(&x.a1, &y.a4), &m(&x.a4, &y.a1)),
                &f.add(&m(&x.a2, &y.a3), &m(&x.a3, &y.a2)),
            ),
        )
    }
}
