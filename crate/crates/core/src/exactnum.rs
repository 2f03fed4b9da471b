//! Exact arithmetic over `Q` and cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(N)-1)` with a
//! common denominator. Products are folded with `x^N = 1` first and then reduced
//! through a table of `x^e mod Phi_N` for `phi(N) <= e < N`, so products of roots
//! of unity never touch the full reduction.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rat = BigRational;

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Smallest conductor `N' >= N`, `N | N'`, whose field contains a primitive
/// `m`-th root of unity.
pub fn conductor_containing(n: u32, m: u32) -> u32 {
    let l2 = if n.is_multiple_of(2) { n } else { 2 * n };
    if l2 % m == 0 {
        return n;
    }
    let l = n.lcm(&m);
    if n % 2 == 1 && l % 4 == 2 {
        l / 2
    } else {
        l
    }
}

// Dense integer polynomial helpers, lowest degree first.

fn poly_divide_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let lead = &den[dn];
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = &rem[i + dn] / lead;
        if !c.is_zero() {
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// `Phi_N` by dividing `x^N - 1` by `Phi_d` for every proper divisor `d`.
fn cyclotomic_coefficients(n: u32) -> Vec<BigInt> {
    let divs = divisors(n);
    let mut known: Vec<(u32, Vec<BigInt>)> = Vec::with_capacity(divs.len());
    for &d in &divs {
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = -BigInt::one();
        p[d as usize] = BigInt::one();
        for (e, phi_e) in &known {
            if d % e == 0 {
                p = poly_divide_exact(&p, phi_e);
            }
        }
        known.push((d, p));
    }
    known.pop().expect("n has itself as a divisor").1
}

struct FieldData {
    conductor: u32,
    degree: usize,
    phi: Vec<BigInt>,
    // x^e mod Phi_N for degree <= e < conductor, sparse.
    powers: OnceLock<Vec<Vec<(u32, BigInt)>>>,
}

/// The cyclotomic field `Q(zeta_N)`.
#[derive(Clone)]
pub struct CycloField {
    inner: Arc<FieldData>,
}

impl CycloField {
    pub fn new(conductor: u32) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::Precondition("conductor must be positive".into()));
        }
        let phi = cyclotomic_coefficients(conductor);
        let degree = phi.len() - 1;
        assert_eq!(degree as u32, totient(conductor));
        assert!(phi[degree].is_one());
        Ok(CycloField {
            inner: Arc::new(FieldData {
                conductor,
                degree,
                phi,
                powers: OnceLock::new(),
            }),
        })
    }

    /// The field of rationals, `Q(zeta_1)`.
    pub fn rationals() -> Self {
        Self::new(1).expect("conductor 1")
    }

    pub fn conductor(&self) -> u32 {
        self.inner.conductor
    }

    /// `phi(N)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    /// Coefficients of `Phi_N`, constant term first.
    pub fn cyclotomic_polynomial(&self) -> &[BigInt] {
        &self.inner.phi
    }

    pub fn same_as(&self, other: &CycloField) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.conductor() == other.conductor()
    }

    fn check_same(&self, other: &CycloField) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.conductor(), other.conductor()))
        }
    }

    fn powers(&self) -> &[Vec<(u32, BigInt)>] {
        self.inner.powers.get_or_init(|| {
            let deg = self.inner.degree;
            let n = self.inner.conductor as usize;
            let phi = &self.inner.phi;
            let mut out = Vec::with_capacity(n.saturating_sub(deg));
            let mut cur = vec![BigInt::zero(); deg + 1];
            // x^(deg-1) when deg >= 1
            if deg == 0 {
                return out;
            }
            cur[deg - 1] = BigInt::one();
            for _ in deg..n {
                cur.rotate_right(1);
                let top = std::mem::take(&mut cur[deg]);
                if !top.is_zero() {
                    for i in 0..deg {
                        cur[i] -= &top * &phi[i];
                    }
                }
                out.push(
                    cur[..deg]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (i as u32, c.clone()))
                        .collect(),
                );
            }
            out
        })
    }

    /// Smallest field containing this one and a primitive `m`-th root of unity.
    pub fn enlarged_for(&self, m: u32) -> Result<CycloField> {
        let target = conductor_containing(self.conductor(), m);
        if target == self.conductor() {
            Ok(self.clone())
        } else {
            CycloField::new(target)
        }
    }

    pub fn zero(&self) -> CycloNum {
        CycloNum {
            field: self.clone(),
            terms: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> CycloNum {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> CycloNum {
        self.from_rat(&Rat::from_integer(BigInt::from(v)))
    }

    pub fn from_rat(&self, r: &Rat) -> CycloNum {
        CycloNum::from_monomial(self, 0, r.numer().clone(), r.denom().clone())
    }

    /// `zeta_M^j`, requiring `M | N`.
    pub fn root_of_unity(&self, m: u32, j: i64) -> Result<CycloNum> {
        if m == 0 || !self.conductor().is_multiple_of(m) {
            return Err(Error::ConductorMismatch(format!(
                "zeta_{m} does not lie in Q(zeta_{})",
                self.conductor()
            )));
        }
        let e = (j.rem_euclid(m as i64) as u64) * (self.conductor() / m) as u64;
        Ok(CycloNum::from_monomial(
            self,
            e as usize,
            BigInt::one(),
            BigInt::one(),
        ))
    }

    /// `zeta_M^j` for any `M` dividing `lcm(2, N)`; for odd `N` the primitive
    /// `2N`-th root is `-zeta_N^((N+1)/2)`.
    pub fn signed_root_of_unity(&self, m: u32, j: i64) -> Result<CycloNum> {
        let n = self.conductor();
        if m != 0 && n.is_multiple_of(m) {
            return self.root_of_unity(m, j);
        }
        if m == 0 || n.is_multiple_of(2) || !(2 * n).is_multiple_of(m) {
            return Err(Error::ConductorMismatch(format!(
                "zeta_{m} does not lie in Q(zeta_{n})"
            )));
        }
        let k = j.rem_euclid(m as i64) * (2 * n / m) as i64;
        let base = self.root_of_unity(n, k * ((n as i64 + 1) / 2))?;
        Ok(if k % 2 == 0 { base } else { -base })
    }

    /// The generator `zeta_N`.
    pub fn zeta(&self) -> CycloNum {
        self.root_of_unity(self.conductor(), 1).expect("N | N")
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}
impl Eq for CycloField {}

impl Hash for CycloField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
    }
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor())
    }
}

/// An element of `Q(zeta_N)`: `(sum_k c_k zeta^k) / den` with `gcd(den, c_k) = 1`.
#[derive(Clone)]
pub struct CycloNum {
    field: CycloField,
    terms: Vec<(u32, BigInt)>,
    den: BigInt,
}

impl CycloNum {
    fn from_monomial(field: &CycloField, e: usize, c: BigInt, den: BigInt) -> CycloNum {
        let n = field.conductor() as usize;
        let deg = field.degree();
        let e = e % n;
        if c.is_zero() {
            return field.zero();
        }
        let terms = if e < deg {
            vec![(e as u32, c)]
        } else {
            field.powers()[e - deg]
                .iter()
                .map(|(i, r)| (*i, r * &c))
                .collect()
        };
        CycloNum::normalized(field.clone(), terms, den)
    }

    fn normalized(field: CycloField, mut terms: Vec<(u32, BigInt)>, mut den: BigInt) -> CycloNum {
        terms.retain(|(_, c)| !c.is_zero());
        if terms.is_empty() {
            return field.zero();
        }
        if den.is_negative() {
            den = -den;
            for (_, c) in terms.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for (_, c) in &terms {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
            if !g.is_one() {
                den /= &g;
                for (_, c) in terms.iter_mut() {
                    *c /= &g;
                }
            }
        }
        CycloNum { field, terms, den }
    }

    /// Folds a buffer indexed by exponents `0..N` into the power basis.
    fn from_buffer(field: &CycloField, mut acc: Vec<BigInt>, den: BigInt) -> CycloNum {
        let deg = field.degree();
        let n = acc.len();
        if n > deg {
            let powers = field.powers();
            for e in deg..n {
                if acc[e].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut acc[e]);
                for (i, r) in &powers[e - deg] {
                    acc[*i as usize] += &c * r;
                }
            }
            acc.truncate(deg);
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c))
            .collect();
        CycloNum::normalized(field.clone(), terms, den)
    }

    /// Builds an element from power-basis coordinates (any length; folded mod `Phi_N`).
    pub fn from_coeffs(field: &CycloField, coeffs: &[Rat]) -> CycloNum {
        let n = field.conductor() as usize;
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut acc = vec![BigInt::zero(); n];
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc[k % n] += c.numer() * (&den / c.denom());
            }
        }
        CycloNum::from_buffer(field, acc, den)
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one()
            && self.terms.len() == 1
            && self.terms[0].0 == 0
            && self.terms[0].1.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e == 0)
    }

    pub fn to_rational(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(0, c)] => Some(Rat::new(c.clone(), self.den.clone())),
            _ => None,
        }
    }

    /// Power-basis coordinates, length `phi(N)`.
    pub fn coeffs(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.field.degree()];
        for (e, c) in &self.terms {
            out[*e as usize] = Rat::new(c.clone(), self.den.clone());
        }
        out
    }

    /// Nonzero power-basis coordinates as `(exponent, coefficient)`.
    pub fn sparse_coeffs(&self) -> Vec<(u32, Rat)> {
        self.terms
            .iter()
            .map(|(e, c)| (*e, Rat::new(c.clone(), self.den.clone())))
            .collect()
    }

    pub fn checked_add(&self, other: &CycloNum) -> Result<CycloNum> {
        self.field.check_same(&other.field)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &CycloNum) -> Result<CycloNum> {
        self.field.check_same(&other.field)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &CycloNum) -> Result<CycloNum> {
        self.field.check_same(&other.field)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &CycloNum) -> Result<CycloNum> {
        self.field.check_same(&other.field)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    fn add_unchecked(&self, other: &CycloNum, negate: bool) -> CycloNum {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate {
                -other.clone()
            } else {
                other.clone()
            };
        }
        let (sa, sb, den) = if self.den == other.den {
            (BigInt::one(), BigInt::one(), self.den.clone())
        } else {
            (other.den.clone(), self.den.clone(), &self.den * &other.den)
        };
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let scale = |c: &BigInt, s: &BigInt| if s.is_one() { c.clone() } else { c * s };
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push((self.terms[i].0, scale(&self.terms[i].1, &sa)));
                i += 1;
            } else if take_right {
                let c = scale(&other.terms[j].1, &sb);
                out.push((other.terms[j].0, if negate { -c } else { c }));
                j += 1;
            } else {
                let a = scale(&self.terms[i].1, &sa);
                let b = scale(&other.terms[j].1, &sb);
                out.push((self.terms[i].0, if negate { a - b } else { a + b }));
                i += 1;
                j += 1;
            }
        }
        CycloNum::normalized(self.field.clone(), out, den)
    }

    fn mul_unchecked(&self, other: &CycloNum) -> CycloNum {
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        let den = &self.den * &other.den;
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (e1, c1) = &self.terms[0];
            let (e2, c2) = &other.terms[0];
            return CycloNum::from_monomial(&self.field, (*e1 + *e2) as usize, c1 * c2, den);
        }
        let n = self.field.conductor() as usize;
        let mut acc = vec![BigInt::zero(); n];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                acc[(*e1 + *e2) as usize % n] += c1 * c2;
            }
        }
        CycloNum::from_buffer(&self.field, acc, den)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo `Phi_N`.
    pub fn inverse(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.conductor() as usize;
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return Ok(CycloNum::from_monomial(
                &self.field,
                (n - *e as usize) % n,
                self.den.clone(),
                c.clone(),
            ));
        }
        let deg = self.field.degree();
        let mut a = vec![Rat::zero(); deg];
        for (e, c) in &self.terms {
            a[*e as usize] = Rat::from_integer(c.clone());
        }
        let m: Vec<Rat> = self
            .field
            .cyclotomic_polynomial()
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let s = rat_poly_inverse_mod(&a, &m).ok_or(Error::DivisionByZero)?;
        let scaled: Vec<Rat> = s
            .iter()
            .map(|c| c * Rat::from_integer(self.den.clone()))
            .collect();
        Ok(CycloNum::from_coeffs(&self.field, &scaled))
    }

    pub fn pow(&self, mut e: u64) -> CycloNum {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn pow_signed(&self, e: i64) -> Result<CycloNum> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Image under `zeta_N -> zeta_{N'}^{N'/N}`.
    pub fn embed_lift(&self, target: &CycloField) -> Result<CycloNum> {
        let n = self.field.conductor();
        let t = target.conductor();
        if !t.is_multiple_of(n) {
            return Err(Error::ConductorMismatch(format!(
                "cannot embed Q(zeta_{n}) into Q(zeta_{t})"
            )));
        }
        if t == n {
            return Ok(CycloNum {
                field: target.clone(),
                terms: self.terms.clone(),
                den: self.den.clone(),
            });
        }
        let s = (t / n) as usize;
        let mut acc = vec![BigInt::zero(); t as usize];
        for (e, c) in &self.terms {
            acc[*e as usize * s % t as usize] += c;
        }
        Ok(CycloNum::from_buffer(target, acc, self.den.clone()))
    }

    /// If this element is a root of unity, returns `(m, j)` with `m` its exact
    /// order and `self = zeta_m^j`, `gcd(j, m) = 1`.
    ///
    /// Every root of unity in `Q(zeta_N)` is `+-zeta_N^k`, so it suffices to
    /// compare against the `2N` signed powers.
    pub fn recognize_root_of_unity(&self) -> Option<(u32, u32)> {
        if !self.den.is_one() {
            return None;
        }
        let n = self.field.conductor();
        let deg = self.field.degree();
        let mut found: Option<(u32, bool)> = None;
        if self.terms.len() == 1 && self.terms[0].1.abs().is_one() {
            found = Some((self.terms[0].0, self.terms[0].1.is_negative()));
        } else {
            for (i, row) in self.field.powers().iter().enumerate() {
                if row.len() != self.terms.len() {
                    continue;
                }
                let same = row.iter().zip(&self.terms).all(|(a, b)| a == b);
                if same {
                    found = Some(((deg + i) as u32, false));
                    break;
                }
                let opposite = row
                    .iter()
                    .zip(&self.terms)
                    .all(|(a, b)| a.0 == b.0 && a.1 == -b.1.clone());
                if opposite {
                    found = Some(((deg + i) as u32, true));
                    break;
                }
            }
        }
        let (k, negative) = found?;
        let (modulus, e) = if n.is_multiple_of(2) {
            (n, if negative { (k + n / 2) % n } else { k })
        } else {
            (
                2 * n,
                if negative {
                    (2 * k + n) % (2 * n)
                } else {
                    2 * k
                },
            )
        };
        if e == 0 {
            return Some((1, 0));
        }
        let g = e.gcd(&modulus);
        Some((modulus / g, e / g))
    }
}

/// Inverse of `a` modulo `m` in `Q[x]`, or `None` if they share a factor.
fn rat_poly_inverse_mod(a: &[Rat], m: &[Rat]) -> Option<Vec<Rat>> {
    fn trim(p: &mut Vec<Rat>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }
    fn sub_scaled_shift(p: &mut Vec<Rat>, q: &[Rat], c: &Rat, shift: usize) {
        if p.len() < q.len() + shift {
            p.resize(q.len() + shift, Rat::zero());
        }
        for (i, qc) in q.iter().enumerate() {
            if !qc.is_zero() {
                p[i + shift] -= c * qc;
            }
        }
    }
    let mut r0: Vec<Rat> = m.to_vec();
    let mut r1: Vec<Rat> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<Rat> = Vec::new();
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while !r1.is_empty() {
        // r0 = q r1 + r, s = s0 - q s1
        let mut r = r0.clone();
        let mut s = s0.clone();
        let lead = r1.last().unwrap().clone();
        while r.len() >= r1.len() && !r.is_empty() {
            let shift = r.len() - r1.len();
            let c = r.last().unwrap() / &lead;
            sub_scaled_shift(&mut r, &r1, &c, shift);
            sub_scaled_shift(&mut s, &s1, &c, shift);
            trim(&mut r);
        }
        trim(&mut s);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is the gcd; unit iff constant
    if r0.len() != 1 {
        return None;
    }
    let inv = Rat::one() / &r0[0];
    Some(s0.into_iter().map(|c| c * &inv).collect())
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.den == other.den && self.terms == other.terms
    }
}
impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor().hash(state);
        self.terms.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.field)
    }
}

/// Text form: `p/q`, `z(N)`, `z(N)^k`, joined by `+`/`-`, lowest power first.
impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_scalar(f, self)
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(mut self) -> CycloNum {
        for (_, c) in self.terms.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands live in different fields; use the
        /// `checked_*` variants to get an error instead.
        impl $trait<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                (&self).$method(rhs)
            }
        }
        impl $trait<CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Phi_N as prod_{d | N} (x^d - 1)^{mu(N/d)}, an independent route.
    fn mobius_cyclotomic(n: u32) -> Vec<BigInt> {
        fn mobius(mut n: u32) -> i32 {
            let mut result = 1;
            let mut p = 2;
            while p * p <= n {
                if n.is_multiple_of(p) {
                    n /= p;
                    if n.is_multiple_of(p) {
                        return 0;
                    }
                    result = -result;
                }
                p += 1;
            }
            if n > 1 {
                -result
            } else {
                result
            }
        }
        let mut num = vec![BigInt::one()];
        let mut dens = Vec::new();
        for d in divisors(n) {
            let mut f = vec![BigInt::zero(); d as usize + 1];
            f[0] = -BigInt::one();
            f[d as usize] = BigInt::one();
            match mobius(n / d) {
                1 => {
                    let mut out = vec![BigInt::zero(); num.len() + d as usize];
                    for (i, c) in num.iter().enumerate() {
                        for (j, e) in f.iter().enumerate() {
                            out[i + j] += c * e;
                        }
                    }
                    num = out;
                }
                -1 => dens.push(f),
                _ => {}
            }
        }
        for f in dens {
            num = poly_divide_exact(&num, &f);
        }
        num
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(
            CycloField::new(1).unwrap().cyclotomic_polynomial(),
            &ints(&[-1, 1])[..]
        );
        assert_eq!(
            CycloField::new(4).unwrap().cyclotomic_polynomial(),
            &ints(&[1, 0, 1])[..]
        );
        assert_eq!(
            CycloField::new(6).unwrap().cyclotomic_polynomial(),
            &ints(&[1, -1, 1])[..]
        );
    }

    #[test]
    fn cyclotomic_matches_mobius_route() {
        for n in 1..=120 {
            let f = CycloField::new(n).unwrap();
            assert_eq!(
                f.cyclotomic_polynomial(),
                &mobius_cyclotomic(n)[..],
                "N = {n}"
            );
            assert_eq!(f.degree() as u32, totient(n));
        }
        for n in [105, 210, 330, 495, 990] {
            let f = CycloField::new(n).unwrap();
            assert_eq!(
                f.cyclotomic_polynomial(),
                &mobius_cyclotomic(n)[..],
                "N = {n}"
            );
        }
    }

    #[test]
    fn phi_vanishes_at_zeta() {
        for n in [1, 2, 3, 5, 8, 12, 15, 30, 55] {
            let f = CycloField::new(n).unwrap();
            let z = f.zeta();
            let mut acc = f.zero();
            for (i, c) in f.cyclotomic_polynomial().iter().enumerate() {
                acc = acc + f.from_rat(&Rat::from_integer(c.clone())) * z.pow(i as u64);
            }
            assert!(acc.is_zero(), "N = {n}");
            assert!(z.pow(n as u64).is_one());
        }
    }

    #[test]
    fn root_of_unity_examples() {
        let f5 = CycloField::new(5).unwrap();
        let a = f5.root_of_unity(5, 3).unwrap();
        let b = f5.root_of_unity(5, 4).unwrap();
        assert_eq!(&a * &b, f5.root_of_unity(5, 2).unwrap());
        let f4 = CycloField::new(4).unwrap();
        assert_eq!(f4.root_of_unity(2, 1).unwrap(), f4.from_int(-1));
        assert!(matches!(
            f5.root_of_unity(4, 1),
            Err(Error::ConductorMismatch(_))
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = CycloField::new(5).unwrap();
        let z = f5.zeta();
        assert!((&z * &z.pow(4)).is_one());
        assert_eq!(f5.one() / &z, z.pow(4));
        let f4 = CycloField::new(4).unwrap();
        let i = f4.zeta();
        let lhs = (f4.one() + &i) * (f4.one() - &i);
        assert_eq!(lhs, f4.from_int(2));
    }

    #[test]
    fn arithmetic_errors() {
        let f5 = CycloField::new(5).unwrap();
        let f4 = CycloField::new(4).unwrap();
        assert_eq!(f5.one().checked_div(&f5.zero()), Err(Error::DivisionByZero));
        assert_eq!(
            f5.one().checked_add(&f4.one()),
            Err(Error::FieldMismatch(5, 4))
        );
    }

    #[test]
    fn inverse_of_dense_element() {
        let f = CycloField::new(15).unwrap();
        let z = f.zeta();
        let x = f.from_int(3) + &z * f.from_int(-2) + z.pow(5) + z.pow(11);
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
    }

    #[test]
    fn embed_lift_examples() {
        let f2 = CycloField::new(2).unwrap();
        let f4 = CycloField::new(4).unwrap();
        assert_eq!(f2.from_int(-1).embed_lift(&f4).unwrap(), f4.from_int(-1));
        let f5 = CycloField::new(5).unwrap();
        let f10 = CycloField::new(10).unwrap();
        assert_eq!(
            f5.zeta().embed_lift(&f10).unwrap(),
            f10.root_of_unity(10, 2).unwrap()
        );
        let f3 = CycloField::new(3).unwrap();
        assert!(f3.zeta().embed_lift(&f5).is_err());
    }

    #[test]
    fn recognize_examples() {
        let f5 = CycloField::new(5).unwrap();
        assert_eq!(f5.from_int(-1).recognize_root_of_unity(), Some((2, 1)));
        let f6 = CycloField::new(6).unwrap();
        assert_eq!(f6.zeta().pow(2).recognize_root_of_unity(), Some((3, 1)));
        let f4 = CycloField::new(4).unwrap();
        assert_eq!(f4.from_int(2).recognize_root_of_unity(), None);
        assert_eq!(f4.one().recognize_root_of_unity(), Some((1, 0)));
        let x = f4.one() + f4.zeta();
        assert_eq!(x.recognize_root_of_unity(), None);
    }

    #[test]
    fn recognize_inverts_root_of_unity_with_power_oracle() {
        for n in [1u32, 2, 3, 4, 5, 6, 8, 9, 12, 15, 20] {
            let f = CycloField::new(n).unwrap();
            let l = if n % 2 == 0 { n } else { 2 * n };
            for m in divisors(l) {
                for j in 0..m as i64 {
                    let x = f.signed_root_of_unity(m, j).unwrap();
                    let (order, jj) = x.recognize_root_of_unity().unwrap();
                    let g = (j as u32).gcd(&m);
                    assert_eq!(order, m / g, "N={n} m={m} j={j}");
                    // oracle: minimal power returning to one
                    let brute = (1..=l).find(|k| x.pow(*k as u64).is_one()).unwrap();
                    assert_eq!(brute, order);
                    assert_eq!(f.signed_root_of_unity(order, jj as i64).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn signed_root_squares_to_zeta() {
        for n in [3u32, 5, 15, 55] {
            let f = CycloField::new(n).unwrap();
            let w = f.signed_root_of_unity(2 * n, 1).unwrap();
            assert_eq!(w.pow(2), f.zeta());
        }
    }

    #[test]
    fn conductor_containing_cases() {
        assert_eq!(conductor_containing(5, 2), 5);
        assert_eq!(conductor_containing(5, 10), 5);
        assert_eq!(conductor_containing(5, 6), 15);
        assert_eq!(conductor_containing(4, 3), 12);
        assert_eq!(conductor_containing(55, 10), 55);
        assert_eq!(conductor_containing(495, 11), 495);
        assert_eq!(conductor_containing(1, 4), 4);
        assert_eq!(conductor_containing(1, 2), 1);
    }

    #[test]
    fn display_forms() {
        let f = CycloField::new(5).unwrap();
        let z = f.zeta();
        let x = f.from_rat(&Rat::new(3.into(), 2.into())) - z.pow(2) + &z * f.from_int(4);
        assert_eq!(x.to_string(), "3/2 + 4*z(5) - z(5)^2");
        assert_eq!(f.zero().to_string(), "0");
        assert_eq!((-z).to_string(), "-z(5)");
    }
}
