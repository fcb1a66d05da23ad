//! Brute-force linear algebra over F_p: ideals of R_alpha as subspaces.
//!
//! An element of R_alpha is flattened to p-ary coordinates with index
//! `(d * 4 + c) * m + j` for x-degree `d`, component `c` (1, u, v, uv) and
//! field coordinate `j`. Nothing here relies on the classification theory.

use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::poly::Ring;
use crate::quotient::{QElem, QuotientCtx};
use crate::ring_r::RElem;

/// Row-reduced echelon basis of an F_p-subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r, mut e, mut b) = (1u64, p as u64 - 2, a as u64 % p as u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn axpy_row(dst: &mut [u32], c: u32, src: &[u32], p: u32) {
    // dst -= c * src
    let p64 = p as u64;
    let nc = (p64 - c as u64 % p64) % p64;
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = ((*d as u64 + nc * s as u64) % p64) as u32;
        }
    }
}

impl Subspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        let mut s = Subspace::zero(p, ambient);
        for i in 0..ambient {
            let mut v = vec![0; ambient];
            v[i] = 1;
            s.rows.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn from_vectors(p: u32, ambient: usize, vs: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut s = Subspace::zero(p, ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    fn reduce(&self, v: &mut [u32]) {
        for (row, &pv) in self.rows.iter().zip(&self.pivots) {
            let c = v[pv];
            if c != 0 {
                axpy_row(v, c, row, self.p);
            }
        }
    }

    pub fn contains_vec(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&c| c == 0)
    }

    /// Adds a vector; returns false if it was already in the span.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length differs from ambient dimension");
        self.reduce(&mut v);
        let Some(pv) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = inv_mod(v[pv], self.p);
        for c in v.iter_mut() {
            *c = ((*c as u64 * inv as u64) % self.p as u64) as u32;
        }
        for row in self.rows.iter_mut() {
            let c = row[pv];
            if c != 0 {
                axpy_row(row, c, &v, self.p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < pv);
        self.pivots.insert(at, pv);
        self.rows.insert(at, v);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.rows.iter().all(|r| other.contains_vec(r)))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient || self.p != other.p {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// Echelon-form equality.
    pub fn equal(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.rows == other.rows)
    }
}

/// Left kernel {a : a A = 0} of a matrix given by rows.
pub fn left_kernel(p: u32, rows: &[Vec<u32>]) -> Subspace {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.resize(c + r, 0);
            v[c + i] = 1;
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..c {
        let Some(piv) = (rank..r).find(|&i| aug[i][col] != 0) else {
            continue;
        };
        aug.swap(rank, piv);
        let inv = inv_mod(aug[rank][col], p);
        for x in aug[rank].iter_mut() {
            *x = ((*x as u64 * inv as u64) % p as u64) as u32;
        }
        let pivot_row = aug[rank].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let k = row[col];
                axpy_row(row, k, &pivot_row, p);
            }
        }
        rank += 1;
    }
    Subspace::from_vectors(p, r, aug[rank..].iter().map(|row| row[c..].to_vec()))
}

/// Oracle for one ambient ring: multiplication matrices by x, u, v and the
/// field generator w, used for ideal closure.
#[derive(Clone, Debug)]
pub struct Oracle {
    ctx: QuotientCtx,
    dim: usize,
    gens: [Vec<Vec<u32>>; 4],
}

impl Oracle {
    pub fn new(ctx: &QuotientCtx) -> Self {
        let dim = ctx.fp_dim();
        let mut o = Oracle {
            ctx: ctx.clone(),
            dim,
            gens: Default::default(),
        };
        let w = ctx.constant(ctx.ring().from_field(&ctx.field().gen()));
        let mults = [ctx.x(), ctx.u(), ctx.v(), w];
        o.gens = std::array::from_fn(|k| o.mult_matrix(&mults[k]));
        o
    }

    pub fn ctx(&self) -> &QuotientCtx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.ctx.field().p()
    }

    pub fn flatten(&self, a: &QElem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.dim);
        for c in a.coeffs() {
            for comp in c.comps() {
                out.extend_from_slice(comp.coeffs());
            }
        }
        out
    }

    pub fn unflatten(&self, v: &[u32]) -> QElem {
        let f = self.ctx.field();
        let m = f.m();
        let coeffs: Vec<RElem> = v
            .chunks(4 * m)
            .map(|ch| {
                let e = |i: usize| -> FieldElem { f.elem(&ch[i * m..(i + 1) * m]).expect("valid coordinates") };
                RElem::new(e(0), e(1), e(2), e(3))
            })
            .collect();
        self.ctx.from_coeffs(coeffs).expect("length n")
    }

    fn basis_elem(&self, i: usize) -> QElem {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        self.unflatten(&v)
    }

    /// Rows flatten(e_i * g) for the unit vectors e_i.
    pub fn mult_matrix(&self, g: &QElem) -> Vec<Vec<u32>> {
        (0..self.dim)
            .map(|i| self.flatten(&self.ctx.mul(&self.basis_elem(i), g)))
            .collect()
    }

    fn apply(&self, v: &[u32], m: &[Vec<u32>]) -> Vec<u32> {
        let p = self.p() as u64;
        let every = (u64::MAX / ((p - 1) * (p - 1)).max(1) - 1).clamp(1, 1024) as usize;
        let mut acc = vec![0u64; self.dim];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, &x) in acc.iter_mut().zip(&m[i]) {
                *a += c as u64 * x as u64;
            }
            if i % every == every - 1 {
                acc.iter_mut().for_each(|a| *a %= p);
            }
        }
        acc.into_iter().map(|a| (a % p) as u32).collect()
    }

    fn close(&self, s: &mut Subspace, mut work: Vec<Vec<u32>>) {
        while let Some(v) = work.pop() {
            if s.contains_vec(&v) {
                continue;
            }
            for g in &self.gens {
                work.push(self.apply(&v, g));
            }
            s.insert(v);
        }
    }

    /// The ideal generated by `gens`.
    pub fn span_closure(&self, gens: &[QElem]) -> Subspace {
        let mut s = Subspace::zero(self.p(), self.dim);
        self.close(&mut s, gens.iter().map(|g| self.flatten(g)).collect());
        s
    }

    /// Whether a subspace is closed under multiplication by x, u, v and w.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        s.rows()
            .iter()
            .all(|r| self.gens.iter().all(|g| s.contains_vec(&self.apply(r, g))))
    }

    pub fn member(&self, f: &QElem, s: &Subspace) -> Result<bool> {
        if s.ambient() != self.dim {
            return Err(Error::AmbientMismatch);
        }
        Ok(s.contains_vec(&self.flatten(f)))
    }

    /// A small generating set of an ideal, picked greedily from its echelon rows.
    pub fn ideal_generators(&self, s: &Subspace) -> Vec<QElem> {
        let mut t = Subspace::zero(self.p(), self.dim);
        let mut out = Vec::new();
        for r in s.rows() {
            if !t.contains_vec(r) {
                out.push(self.unflatten(r));
                self.close(&mut t, vec![r.clone()]);
            }
        }
        out
    }

    /// {a : a b = 0 for all b in S}, for an ideal S.
    pub fn annihilator(&self, s: &Subspace) -> Subspace {
        let gens = self.ideal_generators(s);
        if gens.is_empty() {
            return Subspace::full(self.p(), self.dim);
        }
        let mats: Vec<_> = gens.iter().map(|g| self.mult_matrix(g)).collect();
        let stacked: Vec<Vec<u32>> = (0..self.dim)
            .map(|i| mats.iter().flat_map(|m| m[i].iter().copied()).collect())
            .collect();
        left_kernel(self.p(), &stacked)
    }

    /// Euclidean dual {d : sum_i c_i d_i = 0 in R for all c in S}, read in
    /// the ambient of `dual`.
    pub fn inner_dual(&self, s: &Subspace, dual: &Oracle) -> Result<Subspace> {
        if dual.dim != self.dim || dual.p() != self.p() {
            return Err(Error::AmbientMismatch);
        }
        let ring = self.ctx.ring();
        let m = self.ctx.field().m();
        if s.dim() == 0 {
            return Ok(Subspace::full(self.p(), self.dim));
        }
        let words: Vec<QElem> = s.rows().iter().map(|r| self.unflatten(r)).collect();
        // unit e_comp * w^j in R, indexed like the flattened coordinates
        let units: Vec<RElem> = (0..4 * m)
            .map(|k| {
                let mut v = vec![0u32; 4 * m];
                v[k] = 1;
                let f = self.ctx.field();
                let e = |i: usize| f.elem(&v[i * m..(i + 1) * m]).expect("unit");
                RElem::new(e(0), e(1), e(2), e(3))
            })
            .collect();
        let flat_r = |x: &RElem| -> Vec<u32> { x.comps().iter().flat_map(|c| c.coeffs().to_vec()).collect() };
        let rows: Vec<Vec<u32>> = (0..self.dim)
            .map(|idx| {
                let (i, k) = (idx / (4 * m), idx % (4 * m));
                words
                    .iter()
                    .flat_map(|c| flat_r(&ring.mul(&c.coeffs()[i], &units[k])))
                    .collect()
            })
            .collect();
        Ok(left_kernel(self.p(), &rows))
    }

    /// Ideal generated by the reciprocals of `gens`, in the ambient of `dual`.
    pub fn reciprocal_ideal(&self, gens: &[QElem], dual: &Oracle) -> Result<Subspace> {
        let rr = self.ctx.rpoly_ring();
        let mut out = Vec::new();
        for g in gens {
            let f = self.ctx.to_rpoly(g);
            if f.is_zero() {
                continue;
            }
            out.push(dual.ctx.reduce(&rr.reciprocal(&f)?));
        }
        Ok(dual.span_closure(&out))
    }

    /// Text export: header "p m s n dim", then one row per basis vector.
    pub fn export(&self, s: &Subspace) -> String {
        let mut out = format!(
            "{} {} {} {} {}\n",
            self.p(),
            self.ctx.field().m(),
            self.ctx.s(),
            self.ctx.n(),
            s.dim()
        );
        for r in s.rows() {
            let line: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::ring_r::RingR;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ncv() -> Oracle {
        let f = FieldCtx::new(7, 1, None).unwrap();
        let alpha = RingR::new(f.clone()).elem_ints(&[2, 0, 3, 5]);
        Oracle::new(&QuotientCtx::new(f, 1, alpha).unwrap())
    }

    #[test]
    fn closure_examples() {
        let o = ncv();
        let c = o.ctx().clone();
        assert_eq!(o.span_closure(&[c.zero()]).dim(), 0);
        assert_eq!(o.span_closure(&[c.one()]).dim(), 84);
        assert_eq!(o.span_closure(&[c.u()]).dim(), 42);
    }

    #[test]
    fn membership_examples() {
        let o = ncv();
        let c = o.ctx().clone();
        let sy = o.span_closure(&[c.y()]);
        let su = o.span_closure(&[c.u()]);
        assert!(o.member(&c.zero(), &sy).unwrap());
        assert!(!o.member(&c.u(), &sy).unwrap());
        assert!(!o.member(&c.y(), &su).unwrap());
        let sv = o.span_closure(&[c.v()]);
        assert!(sv.equal(&o.span_closure(&[c.pow(&c.y(), 7)])).unwrap());
        assert!(!su.equal(&sv).unwrap());
        assert_eq!(sy.equal(&Subspace::zero(7, 10)), Err(Error::AmbientMismatch));
    }

    #[test]
    fn annihilator_examples() {
        let o = ncv();
        let c = o.ctx().clone();
        assert_eq!(o.annihilator(&o.span_closure(&[c.zero()])).dim(), 84);
        assert_eq!(o.annihilator(&o.span_closure(&[c.one()])).dim(), 0);
        for g in [c.u(), c.y(), c.add(&c.pow(&c.y(), 3), &c.u())] {
            let s = o.span_closure(&[g]);
            let a = o.annihilator(&s);
            assert_eq!(a.dim() + s.dim(), 84);
            assert!(o.is_ideal(&a));
            assert!(s.is_subspace_of(&o.annihilator(&a)).unwrap());
        }
    }

    #[test]
    fn dual_examples() {
        let o = ncv();
        let c = o.ctx().clone();
        let d = Oracle::new(&c.dual().unwrap());
        assert_eq!(o.inner_dual(&Subspace::zero(7, 84), &d).unwrap().dim(), 84);
        let su = o.span_closure(&[c.u()]);
        let dual = o.inner_dual(&su, &d).unwrap();
        assert_eq!(dual.dim(), 42);
        assert!(dual.equal(&d.span_closure(&[d.ctx().u()])).unwrap());
        let recip = o.reciprocal_ideal(&o.ideal_generators(&o.annihilator(&su)), &d).unwrap();
        assert!(recip.equal(&dual).unwrap());
        assert_eq!(o.reciprocal_ideal(&[c.one()], &d).unwrap().dim(), 84);
        let back = d.inner_dual(&dual, &o).unwrap();
        assert!(back.equal(&su).unwrap());
    }

    #[test]
    fn kernel_small() {
        // [1 1; 2 2] over F_5: left kernel spanned by (3, 1)
        let k = left_kernel(5, &[vec![1, 1], vec![2, 2]]);
        assert_eq!(k.rows(), &[vec![1, 2]]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn closure_order_independent(seed in any::<u64>()) {
            let o = ncv();
            let c = o.ctx().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.gen_range(1..4);
            let gens: Vec<QElem> = (0..k).map(|_| {
                let a = c.random(&mut rng);
                // push generators into the maximal ideal so closures are proper
                c.mul(&a, &c.pow(&c.y(), rng.gen_range(1..10)))
            }).collect();
            let s = o.span_closure(&gens);
            let mut rev = gens.clone();
            rev.reverse();
            prop_assert!(s.equal(&o.span_closure(&rev)).unwrap());
            prop_assert!(s.equal(&o.span_closure(&o.ideal_generators(&s))).unwrap());
            prop_assert!(o.is_ideal(&s));
            let d = Oracle::new(&c.dual().unwrap());
            let dd = d.inner_dual(&o.inner_dual(&s, &d).unwrap(), &o).unwrap();
            prop_assert!(dd.equal(&s).unwrap());
        }
    }
}
