//! Finite fields GF(p^m) with full exp/log tables.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! where `c_i` is the coefficient of `x^i` in the polynomial representative
//! modulo the field's irreducible modulus. The encoding `0..p` coincides with
//! the prime subfield.

use crate::error::{Error, Result};
use crate::numtheory::{factorize, is_prime};

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The integer encoding of the element.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    primitive: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    /// Builds GF(p^m).
    ///
    /// The modulus is the first monic irreducible polynomial of degree `m` in
    /// the order of its coefficient encoding, and the primitive element is
    /// the smallest encoding whose multiplicative order is `p^m - 1`.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::FieldTooLarge { p, m })?;
        let modulus = first_irreducible(p, m as usize);
        let mut field = FiniteField {
            p,
            m,
            q,
            modulus,
            primitive: FieldElement::ONE,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let group_order = q - 1;
        let prime_divisors: Vec<u64> = factorize(group_order).into_iter().map(|(r, _)| r).collect();
        let primitive = (1..q)
            .map(|c| FieldElement(c as u32))
            .find(|&g| {
                field.pow_slow(g, group_order) == FieldElement::ONE
                    && prime_divisors
                        .iter()
                        .all(|r| field.pow_slow(g, group_order / r) != FieldElement::ONE)
            })
            .expect("the multiplicative group of a finite field is cyclic");
        field.primitive = primitive;

        let mut exp = Vec::with_capacity(group_order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = FieldElement::ONE;
        for i in 0..group_order {
            exp.push(x.0);
            log[x.0 as usize] = i as u32;
            x = field.mul_slow(x, primitive);
        }
        debug_assert_eq!(x, FieldElement::ONE);
        field.exp = exp;
        field.log = log;
        Ok(field)
    }

    /// GF(q) for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, m) = crate::numtheory::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, m)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Coefficients of the monic modulus polynomial, constant term first.
    pub fn modulus_polynomial(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive_element(&self) -> FieldElement {
        self.primitive
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::InvalidParameter(format!(
                "{index} is not an element encoding of GF({})",
                self.q
            )));
        }
        Ok(FieldElement(index as u32))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u32).map(FieldElement)
    }

    /// Coefficient vector of length m, constant term first.
    pub fn coefficients(&self, x: FieldElement) -> Vec<u64> {
        let mut v = x.0 as u64;
        (0..self.m)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    fn encode(&self, coeffs: &[u64]) -> FieldElement {
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = acc * self.p + c;
        }
        FieldElement(acc as u32)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.m == 1 {
            return FieldElement(((a.0 as u64 + b.0 as u64) % self.p) as u32);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut acc = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            acc += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(acc as u32)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let c: Vec<u64> = self
            .coefficients(a)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        self.encode(&c)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let e = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % (self.q - 1);
        FieldElement(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::InvalidParameter("zero has no inverse".into()));
        }
        let l = self.log[a.0 as usize] as u64;
        Ok(FieldElement(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as u128 * e as u128 % (self.q - 1) as u128;
        FieldElement(self.exp[l as usize])
    }

    /// α^e for the primitive element α.
    pub fn exp(&self, e: u64) -> FieldElement {
        FieldElement(self.exp[(e % (self.q - 1)) as usize])
    }

    /// The exponent l in [0, q-2] with α^l = x.
    pub fn discrete_log(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(self.log[x.0 as usize] as u64)
    }

    /// Horner evaluation of `coeffs[0] + coeffs[1] x + ...` at `point`.
    pub fn polynomial_eval(&self, coeffs: &[FieldElement], point: FieldElement) -> FieldElement {
        coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.add(self.mul(acc, point), c))
    }

    /// Elements of the subfield GF(p^s), s | m, in increasing encoding order.
    pub fn subfield(&self, s: u32) -> Result<Vec<FieldElement>> {
        if s == 0 || !self.m.is_multiple_of(s) {
            return Err(Error::InvalidParameter(format!(
                "GF({}^{s}) is not a subfield of GF({}^{})",
                self.p, self.p, self.m
            )));
        }
        let sub_order = self.p.pow(s);
        let step = (self.q - 1) / (sub_order - 1);
        let mut out: Vec<FieldElement> = std::iter::once(FieldElement::ZERO)
            .chain((0..sub_order - 1).map(|j| self.exp(j * step)))
            .collect();
        out.sort();
        Ok(out)
    }

    // Table-free arithmetic used while the tables are being built.

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = poly_mul(&self.coefficients(a), &self.coefficients(b), self.p);
        let r = poly_rem(&prod, &self.modulus, self.p);
        let mut c = r;
        c.resize(self.m as usize, 0);
        self.encode(&c)
    }

    fn pow_slow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm && r.len() > 1 {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * lead) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `t`.
fn monic_from_index(t: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(deg + 1);
    let mut t = t;
    for _ in 0..deg {
        v.push(t % p);
        t /= p;
    }
    v.push(1);
    v
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for t in 0..p.pow(d as u32) {
            let g = monic_from_index(t, d, p);
            let r = poly_rem(f, &g, p);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, m: usize) -> Vec<u64> {
    (0..p.pow(m as u32))
        .map(|t| monic_from_index(t, m, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
