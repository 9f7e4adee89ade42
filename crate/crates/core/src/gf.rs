//! Exact arithmetic in small finite fields F_{p^n}.
//!
//! Elements are integer handles into precomputed exp/log tables: handle 0 is
//! the zero element and handle k (k >= 1) is generator^(k-1). Multiplication
//! and inversion are index arithmetic mod q-1; addition goes through the
//! polynomial (vector) representation. All tables are built once per
//! [`FieldCtx`], which is immutable afterwards and safe to share across
//! threads.

use crate::error::{Error, Result};
use std::fmt;

/// Largest supported field order. Big enough for the extension fields the
/// smoothness search over F_4 needs (up to F_{4^6} = F_4096) while keeping
/// every table trivially small.
pub const MAX_ORDER: u64 = 4096;

/// A field element handle: 0 is zero, k >= 1 is generator^(k-1).
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "0")
        } else if self.0 == 1 {
            write!(f, "1")
        } else {
            write!(f, "g^{}", self.0 - 1)
        }
    }
}

/// Immutable arithmetic context for F_{p^n}, q = p^n <= [`MAX_ORDER`].
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    /// Monic irreducible modulus over F_p, ascending coefficients, length n+1.
    modulus: Vec<u32>,
    /// exp[k] = vector representation of generator^k, k in 0..q-1.
    exp: Vec<u16>,
    /// log[v] = k such that generator^k has vector representation v (v != 0).
    log: Vec<u16>,
    /// Minimal polynomial of the generator over F_p (== modulus when the
    /// modulus is primitive, which is the normal case).
    gen_minpoly: Vec<u32>,
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decompose q = p^n with p prime, or fail.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrime(q));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut m = q;
            let mut n = 0;
            while m.is_multiple_of(p) {
                m /= p;
                n += 1;
            }
            if m != 1 {
                return Err(Error::NotPrime(q));
            }
            return Ok((p, n));
        }
        p += 1;
    }
    Ok((q, 1))
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

// -- dense polynomial helpers over F_p (ascending coefficients) --

fn ptrim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pmul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    out.into_iter().map(|c| c as u32).collect()
}

/// Remainder of a by the monic polynomial m.
fn pmod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    ptrim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            let idx = i + shift;
            let sub = (lead as u64 * mi as u64) % p as u64;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        ptrim(&mut r);
    }
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut divisor = decode_poly(v, p, d);
            divisor.push(1); // monic
            if pmod(m, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Digits of v base p, lowest first, padded to len.
fn decode_poly(v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut v = v;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

fn encode_poly(digits: &[u32], p: u32) -> u32 {
    let mut v: u64 = 0;
    for &d in digits.iter().rev() {
        v = v * p as u64 + d as u64;
    }
    v as u32
}

impl FieldCtx {
    /// Build the context for F_{p^n}.
    ///
    /// The modulus is deterministic: the lexicographically least monic
    /// irreducible polynomial of degree n over F_p whose root generates the
    /// multiplicative group (falling back to the least irreducible plus a
    /// separately found generator if no primitive one exists).
    pub fn new(p: u32, n: u32) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::FieldTooLarge {
                p: p as u64,
                n,
                max: MAX_ORDER,
            });
        }
        let q = (p as u64).checked_pow(n).filter(|&q| q <= MAX_ORDER).ok_or(
            Error::FieldTooLarge {
                p: p as u64,
                n,
                max: MAX_ORDER,
            },
        )? as u32;

        let radicals = prime_factors(q as u64 - 1);
        let mut first_irreducible: Option<Vec<u32>> = None;
        let mut chosen: Option<(Vec<u32>, u32)> = None; // (modulus, generator vecrep)
        for v in 0..(q as u64) {
            let mut m = decode_poly(v, p, n as usize);
            m.push(1);
            if m[0] == 0 || !is_irreducible(&m, p) {
                // Zero constant term means x divides m; skip early.
                continue;
            }
            if first_irreducible.is_none() {
                first_irreducible = Some(m.clone());
            }
            // Primitive iff the residue class of x has order q-1.
            if poly_order_is_maximal(&m, p, q, &radicals) {
                chosen = Some((m, if n == 1 { (p - v as u32) % p } else { p }));
                break;
            }
        }
        let (modulus, gen_vec) = match chosen {
            Some((m, g)) => (m, g),
            None => {
                // No primitive modulus of this degree: take the least
                // irreducible and search for a generator element-wise.
                let m = first_irreducible.ok_or_else(|| {
                    Error::Inconsistency(format!("no irreducible of degree {n} over F_{p}"))
                })?;
                let g = find_generator(&m, p, q, &radicals)?;
                (m, g)
            }
        };

        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            exp: Vec::new(),
            log: vec![0; q as usize],
            gen_minpoly: Vec::new(),
        };
        ctx.build_tables(gen_vec)?;
        ctx.gen_minpoly = ctx.generator_min_poly();
        Ok(ctx)
    }

    fn build_tables(&mut self, gen_vec: u32) -> Result<()> {
        let q = self.q as usize;
        self.exp = Vec::with_capacity(q - 1);
        let mut cur: u32 = 1; // vector representation of 1
        for k in 0..q - 1 {
            self.exp.push(cur as u16);
            if self.log[cur as usize] != 0 || (k > 0 && cur == 1) {
                return Err(Error::Inconsistency(format!(
                    "generator of F_{q} has order less than {}",
                    q - 1
                )));
            }
            self.log[cur as usize] = k as u16;
            cur = self.vmul(cur, gen_vec);
        }
        if cur != 1 {
            return Err(Error::Inconsistency(format!(
                "generator of F_{q} does not have order {}",
                q - 1
            )));
        }
        Ok(())
    }

    /// Multiply two vector representations (polynomial product mod modulus).
    fn vmul(&self, a: u32, b: u32) -> u32 {
        let pa = decode_poly(a as u64, self.p, self.n as usize);
        let pb = decode_poly(b as u64, self.p, self.n as usize);
        let prod = pmul(&pa, &pb, self.p);
        let rem = pmod(&prod, &self.modulus, self.p);
        encode_poly(&rem, self.p)
    }

    fn generator_min_poly(&self) -> Vec<u32> {
        // Product of (X - g^{p^i}) over the n conjugates, computed with field
        // coefficients; the result must have prime-subfield coefficients.
        let g = self.generator();
        let mut conj = g;
        let mut poly: Vec<Fe> = vec![Fe::ONE]; // constant 1, ascending in X
        for _ in 0..self.n {
            // multiply poly by (X - conj)
            let neg_c = self.neg(conj);
            let mut next = vec![Fe::ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.add(next[i], self.mul(c, neg_c));
            }
            poly = next;
            conj = self.pow_u(conj, self.p as u64);
        }
        poly.iter()
            .map(|&c| {
                let v = self.vec_of(c);
                debug_assert!(v < self.p, "minimal polynomial coefficient not in F_p");
                v
            })
            .collect()
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Extension degree n over the prime field.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Chosen modulus, ascending coefficients over F_p.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A fixed generator of the multiplicative group.
    #[inline]
    pub fn generator(&self) -> Fe {
        if self.q == 2 {
            Fe::ONE
        } else {
            Fe(2)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q as u16).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> {
        (1..self.q as u16).map(Fe)
    }

    #[inline]
    fn vec_of(&self, a: Fe) -> u32 {
        if a.0 == 0 {
            0
        } else {
            self.exp[(a.0 - 1) as usize] as u32
        }
    }

    #[inline]
    fn elem_of(&self, v: u32) -> Fe {
        if v == 0 {
            Fe::ZERO
        } else {
            Fe(self.log[v as usize] + 1)
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let va = self.vec_of(a);
        let vb = self.vec_of(b);
        if self.p == 2 {
            return self.elem_of(va ^ vb);
        }
        let mut out = 0u32;
        let mut mult = 1u32;
        let (mut va, mut vb) = (va, vb);
        for _ in 0..self.n {
            let s = (va % self.p + vb % self.p) % self.p;
            out += s * mult;
            mult *= self.p;
            va /= self.p;
            vb /= self.p;
        }
        self.elem_of(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        // -1 = g^((q-1)/2), so negation is an index shift.
        let half = (self.q - 1) / 2;
        Fe((((a.0 as u32 - 1) + half) % (self.q - 1) + 1) as u16)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let k = (a.0 as u32 - 1 + b.0 as u32 - 1) % (self.q - 1);
        Fe((k + 1) as u16)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = (self.q - 1 - (a.0 as u32 - 1)) % (self.q - 1);
        Ok(Fe((k + 1) as u16))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e for a nonnegative exponent; 0^0 = 1 by convention.
    #[inline]
    pub fn pow_u(&self, a: Fe, e: u64) -> Fe {
        if a.is_zero() {
            return if e == 0 { Fe::ONE } else { Fe::ZERO };
        }
        let k = (a.0 as u64 - 1) * (e % (self.q as u64 - 1)) % (self.q as u64 - 1);
        Fe((k + 1) as u16)
    }

    /// a^e with a signed exponent; negative exponents invert first.
    pub fn pow(&self, a: Fe, e: i64) -> Result<Fe> {
        if e >= 0 {
            Ok(self.pow_u(a, e as u64))
        } else {
            Ok(self.pow_u(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// generator^k.
    #[inline]
    pub fn generator_pow(&self, k: u64) -> Fe {
        Fe((k % (self.q as u64 - 1) + 1) as u16)
    }

    /// Discrete logarithm base the generator; None for zero.
    #[inline]
    pub fn discrete_log(&self, a: Fe) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(a.0 as u32 - 1)
        }
    }

    /// Image of the integer m under Z -> F_q (lands in the prime subfield).
    pub fn elem_from_int(&self, m: u64) -> Fe {
        self.elem_of((m % self.p as u64) as u32)
    }

    /// The q0-power Frobenius a -> a^{q0}, for F_{q0} a subfield of this
    /// field. Fixes exactly the elements of F_{q0}.
    pub fn frobenius(&self, a: Fe, subfield_order: u32) -> Result<Fe> {
        if !is_subfield_order(subfield_order, self.p, self.q) {
            return Err(Error::NotExtension {
                src: subfield_order as u64,
                dst: self.q as u64,
            });
        }
        Ok(self.pow_u(a, subfield_order as u64))
    }

    /// Element text: "0", "1", "g^k"; at q=4, "w" and "w2" are accepted
    /// aliases for g^1 and g^2.
    pub fn parse_elem(&self, s: &str) -> Result<Fe> {
        let t = s.trim();
        match t {
            "0" => return Ok(Fe::ZERO),
            "1" => return Ok(Fe::ONE),
            "g" => return Ok(self.generator()),
            "w" if self.q == 4 => return Ok(Fe(2)),
            "w2" if self.q == 4 => return Ok(Fe(3)),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("g^") {
            let k: u64 = rest.parse().map_err(|_| Error::Parse {
                pos: 2,
                msg: format!("invalid generator exponent '{rest}'"),
            })?;
            return Ok(self.generator_pow(k));
        }
        Err(Error::Parse {
            pos: 0,
            msg: format!("unrecognized field element '{t}'"),
        })
    }

    pub fn format_elem(&self, a: Fe) -> String {
        match a.0 {
            0 => "0".to_string(),
            1 => "1".to_string(),
            k => format!("g^{}", k - 1),
        }
    }
}

fn is_subfield_order(q0: u32, p: u32, q: u32) -> bool {
    if q0 < 2 {
        return false;
    }
    let mut t = q0 as u64;
    // q0 must itself be a power of p ...
    while t.is_multiple_of(p as u64) {
        t /= p as u64;
    }
    if t != 1 {
        return false;
    }
    // ... and q a power of q0.
    let mut s = q0 as u64;
    while s < q as u64 {
        s = s.saturating_mul(q0 as u64);
    }
    s == q as u64
}

fn poly_order_is_maximal(m: &[u32], p: u32, q: u32, radicals: &[u64]) -> bool {
    // Order of the class of x in F_p[x]/(m): maximal iff x^((q-1)/r) != 1
    // for every prime r dividing q-1.
    if q == 2 {
        return true;
    }
    let x = vec![0, 1];
    for &r in radicals {
        let e = (q as u64 - 1) / r;
        if poly_pow_mod(&x, e, m, p) == vec![1] {
            return false;
        }
    }
    true
}

fn poly_pow_mod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = pmod(a, m, p);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = pmod(&pmul(&acc, &base, p), m, p);
        }
        base = pmod(&pmul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}

fn find_generator(m: &[u32], p: u32, q: u32, radicals: &[u64]) -> Result<u32> {
    'outer: for v in 2..q as u64 {
        let cand = decode_poly(v, p, m.len() - 1);
        for &r in radicals {
            let e = (q as u64 - 1) / r;
            if poly_pow_mod(&cand, e, m, p) == vec![1] {
                continue 'outer;
            }
        }
        return Ok(v as u32);
    }
    Err(Error::Inconsistency(format!(
        "no generator found for F_{q}"
    )))
}

/// A fixed field embedding F_{src} -> F_{dst}.
///
/// The image of the source generator is generator_dst^((dst.q-1)/(src.q-1))
/// whenever that element is a root of the source generator's minimal
/// polynomial (always the case for prime fields and for F_4, whose minimal
/// polynomial is the third cyclotomic polynomial); otherwise the root with
/// the least handle is taken. Either way the map is a ring homomorphism.
pub struct Embedding {
    src_q: u32,
    dst_q: u32,
    /// Discrete log (in dst) of the image of the source generator.
    img_gen_dlog: u64,
}

impl Embedding {
    pub fn new(src: &FieldCtx, dst: &FieldCtx) -> Result<Embedding> {
        if src.p != dst.p || !dst.n.is_multiple_of(src.n) {
            return Err(Error::NotExtension {
                src: src.q as u64,
                dst: dst.q as u64,
            });
        }
        if src.q == 2 {
            // Unique embedding: 0 -> 0, 1 -> 1.
            return Ok(Embedding {
                src_q: 2,
                dst_q: dst.q,
                img_gen_dlog: 0,
            });
        }
        let e = ((dst.q as u64) - 1) / ((src.q as u64) - 1);
        let minpoly = &src.gen_minpoly;
        let evaluate = |dlog: u64| -> Fe {
            let x = dst.generator_pow(dlog);
            let mut acc = Fe::ZERO;
            for &c in minpoly.iter().rev() {
                acc = dst.add(dst.mul(acc, x), dst.elem_from_int(c as u64));
            }
            acc
        };
        // Candidate images all lie in the subfield of order src.q, i.e. are
        // powers of generator_dst^e.
        let mut best: Option<u64> = None;
        for t in 0..(src.q as u64 - 1) {
            let dlog = e * t % (dst.q as u64 - 1);
            if evaluate(dlog).is_zero() {
                if t == 1 {
                    // generator_dst^e itself is a root; preferred choice.
                    best = Some(dlog);
                    break;
                }
                best = Some(match best {
                    Some(b) => b.min(dlog),
                    None => dlog,
                });
            }
        }
        let img_gen_dlog = best.ok_or_else(|| {
            Error::Inconsistency(format!(
                "no root of the F_{} minimal polynomial found in F_{}",
                src.q, dst.q
            ))
        })?;
        Ok(Embedding {
            src_q: src.q,
            dst_q: dst.q,
            img_gen_dlog,
        })
    }

    #[inline]
    pub fn apply(&self, a: Fe) -> Fe {
        if a.is_zero() {
            return Fe::ZERO;
        }
        let k = (a.0 as u64 - 1) * self.img_gen_dlog % (self.dst_q as u64 - 1);
        Fe((k + 1) as u16)
    }

    /// Lookup table for all src.q handles.
    pub fn table(&self) -> Vec<Fe> {
        (0..self.src_q as u16).map(|h| self.apply(Fe(h))).collect()
    }
}

/// One-shot embedding of a single element.
pub fn embed(a: Fe, src: &FieldCtx, dst: &FieldCtx) -> Result<Fe> {
    Ok(Embedding::new(src, dst)?.apply(a))
}

/// Roots in F_q of a univariate polynomial (ascending coefficients), with
/// multiplicities found by repeated synthetic division.
pub fn roots_with_multiplicity(ctx: &FieldCtx, coeffs: &[Fe]) -> Result<Vec<(Fe, usize)>> {
    let mut poly: Vec<Fe> = coeffs.to_vec();
    while poly.last() == Some(&Fe::ZERO) {
        poly.pop();
    }
    if poly.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for r in ctx.elements() {
        let mut work = poly.clone();
        let mut mult = 0;
        while work.len() > 1 && eval_univariate(ctx, &work, r).is_zero() {
            work = synthetic_quotient(ctx, &work, r);
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    Ok(out)
}

pub fn eval_univariate(ctx: &FieldCtx, coeffs: &[Fe], x: Fe) -> Fe {
    let mut acc = Fe::ZERO;
    for &c in coeffs.iter().rev() {
        acc = ctx.add(ctx.mul(acc, x), c);
    }
    acc
}

/// Quotient of poly by (x - r), assuming r is a root.
fn synthetic_quotient(ctx: &FieldCtx, poly: &[Fe], r: Fe) -> Vec<Fe> {
    let d = poly.len() - 1;
    let mut out = vec![Fe::ZERO; d];
    let mut carry = Fe::ZERO;
    for i in (0..d).rev() {
        carry = ctx.add(poly[i + 1], ctx.mul(carry, r));
        out[i] = carry;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 2).unwrap()
    }

    #[test]
    fn f4_has_the_unique_quadratic_modulus() {
        let ctx = f4();
        assert_eq!(ctx.q(), 4);
        assert_eq!(ctx.modulus(), &[1, 1, 1]); // x^2 + x + 1
        let w = ctx.generator();
        // w^2 + w + 1 = 0
        let lhs = ctx.add(ctx.add(ctx.mul(w, w), w), Fe::ONE);
        assert!(lhs.is_zero());
    }

    #[test]
    fn f4_arithmetic() {
        let ctx = f4();
        let w = ctx.generator();
        let w2 = ctx.mul(w, w);
        assert_eq!(w2, Fe(3));
        assert_eq!(ctx.add(w, w), Fe::ZERO);
        assert_eq!(ctx.add(w2, w), Fe::ONE);
        assert_eq!(ctx.pow_u(w, 3), Fe::ONE);
    }

    #[test]
    fn f2_generator_is_one() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        assert_eq!(ctx.generator(), Fe::ONE);
        assert_eq!(ctx.add(Fe::ONE, Fe::ONE), Fe::ZERO);
    }

    #[test]
    fn f9_generator_has_order_eight() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        assert_eq!(ctx.q(), 9);
        let g = ctx.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = Fe::ONE;
        for _ in 0..8 {
            assert!(seen.insert(x));
            x = ctx.mul(x, g);
        }
        assert_eq!(x, Fe::ONE);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FieldCtx::new(2, 13).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (2, 4), (3, 3), (2, 6)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let q = ctx.q();
            let elems: Vec<Fe> = ctx.elements().collect();
            for &a in &elems {
                for &b in &elems {
                    assert_eq!(ctx.add(a, b), ctx.add(b, a));
                    assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                    for &c in &elems {
                        assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(
                            ctx.mul(a, ctx.add(b, c)),
                            ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                        );
                    }
                }
            }
            for &a in &elems {
                assert_eq!(ctx.add(a, ctx.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Fe::ONE);
                    assert_eq!(ctx.pow_u(a, q as u64 - 1), Fe::ONE);
                }
            }
            assert_eq!(ctx.inv(Fe::ZERO).unwrap_err(), Error::DivisionByZero);
        }
    }

    #[test]
    fn exp_log_round_trip() {
        for (p, n) in [(2, 2), (3, 2), (2, 4), (5, 2)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            for a in ctx.nonzero_elements() {
                let k = ctx.discrete_log(a).unwrap();
                assert_eq!(ctx.generator_pow(k as u64), a);
            }
            assert_eq!(ctx.discrete_log(Fe::ZERO), None);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_subfield() {
        let f16 = FieldCtx::new(2, 4).unwrap();
        let f4 = f4();
        let emb = Embedding::new(&f4, &f16).unwrap();
        // Embedded F_4 elements are fixed by a -> a^4 ...
        for a in f4.elements() {
            let img = emb.apply(a);
            assert_eq!(f16.frobenius(img, 4).unwrap(), img);
        }
        // ... and they are the only fixed points.
        let fixed = f16
            .elements()
            .filter(|&a| f16.frobenius(a, 4).unwrap() == a)
            .count();
        assert_eq!(fixed, 4);
        // Applying it twice is the identity on F_16.
        for a in f16.elements() {
            let once = f16.frobenius(a, 4).unwrap();
            assert_eq!(f16.frobenius(once, 4).unwrap(), a);
        }
        assert!(f16.frobenius(Fe::ONE, 8).is_err());
    }

    #[test]
    fn embedding_examples() {
        let f4 = f4();
        let f16 = FieldCtx::new(2, 4).unwrap();
        let emb = Embedding::new(&f4, &f16).unwrap();
        assert_eq!(emb.apply(Fe::ZERO), Fe::ZERO);
        assert_eq!(emb.apply(Fe::ONE), Fe::ONE);
        // omega -> g^5 where g generates F_16*: (16-1)/(4-1) = 5.
        assert_eq!(emb.apply(f4.generator()), f16.generator_pow(5));
    }

    #[test]
    fn embedding_is_a_ring_homomorphism_f4_to_f64() {
        let f4 = f4();
        let f64 = FieldCtx::new(2, 6).unwrap();
        let emb = Embedding::new(&f4, &f64).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(
                    emb.apply(f4.add(a, b)),
                    f64.add(emb.apply(a), emb.apply(b))
                );
                assert_eq!(
                    emb.apply(f4.mul(a, b)),
                    f64.mul(emb.apply(a), emb.apply(b))
                );
            }
        }
    }

    #[test]
    fn embedding_towers_compose() {
        // F_2 -> F_4 -> F_16 agrees with F_2 -> F_16, and similarly for the
        // F_4 -> F_16 -> F_256 tower.
        let f2 = FieldCtx::new(2, 1).unwrap();
        let f4 = f4();
        let f16 = FieldCtx::new(2, 4).unwrap();
        let f256 = FieldCtx::new(2, 8).unwrap();

        let a2 = Embedding::new(&f2, &f4).unwrap();
        let b2 = Embedding::new(&f4, &f16).unwrap();
        let d2 = Embedding::new(&f2, &f16).unwrap();
        for x in f2.elements() {
            assert_eq!(b2.apply(a2.apply(x)), d2.apply(x));
        }

        let a4 = Embedding::new(&f4, &f16).unwrap();
        let b4 = Embedding::new(&f16, &f256).unwrap();
        let d4 = Embedding::new(&f4, &f256).unwrap();
        for x in f4.elements() {
            assert_eq!(b4.apply(a4.apply(x)), d4.apply(x));
        }
    }

    #[test]
    fn embedding_rejects_non_extensions() {
        let f4 = f4();
        let f8 = FieldCtx::new(2, 3).unwrap();
        assert!(Embedding::new(&f4, &f8).is_err());
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert!(Embedding::new(&f4, &f9).is_err());
    }

    #[test]
    fn root_multiplicities() {
        let ctx = f4();
        let w = ctx.generator();
        let w2 = ctx.mul(w, w);
        // s^3: triple root at zero.
        let cubed = [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE];
        assert_eq!(
            roots_with_multiplicity(&ctx, &cubed).unwrap(),
            vec![(Fe::ZERO, 3)]
        );
        // x^3 - 1 = x^3 + 1 over F_4: the three cube roots of unity.
        let cubes_of_one = [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE];
        assert_eq!(
            roots_with_multiplicity(&ctx, &cubes_of_one).unwrap(),
            vec![(Fe::ONE, 1), (w, 1), (w2, 1)]
        );
        // x^2 + x + 1 is irreducible over F_2.
        let f2 = FieldCtx::new(2, 1).unwrap();
        let irr = [Fe::ONE, Fe::ONE, Fe::ONE];
        assert!(roots_with_multiplicity(&f2, &irr).unwrap().is_empty());
        // Zero polynomial is rejected.
        assert_eq!(
            roots_with_multiplicity(&ctx, &[Fe::ZERO]).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn element_text_round_trip() {
        let ctx = f4();
        assert_eq!(ctx.parse_elem("0").unwrap(), Fe::ZERO);
        assert_eq!(ctx.parse_elem("1").unwrap(), Fe::ONE);
        assert_eq!(ctx.parse_elem("w").unwrap(), Fe(2));
        assert_eq!(ctx.parse_elem("w2").unwrap(), Fe(3));
        assert_eq!(ctx.parse_elem("g^2").unwrap(), Fe(3));
        for a in ctx.elements() {
            assert_eq!(ctx.parse_elem(&ctx.format_elem(a)).unwrap(), a);
        }
        assert!(ctx.parse_elem("q").is_err());
        let f8 = FieldCtx::new(2, 3).unwrap();
        assert!(f8.parse_elem("w").is_err());
    }

    #[test]
    fn deterministic_moduli() {
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]); // x^3+x+1
        assert_eq!(FieldCtx::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]); // x^4+x+1
        assert_eq!(FieldCtx::new(2, 6).unwrap().modulus(), &[1, 1, 0, 0, 0, 0, 1]); // x^6+x+1
    }
}
