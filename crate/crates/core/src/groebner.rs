//! Buchberger's algorithm for homogeneous ideals, grevlex order.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::CycloNum;
use crate::polyring::{HomogPoly, Monomial, TermMap};

/// Outcome of a basis computation.
#[derive(Clone, Debug)]
pub enum GroebnerOutcome {
    /// Every variable has a pure power among the leading monomials of ideal
    /// elements; the computation stopped as soon as this was seen.
    ZeroDimensionalCone { elements: usize },
    /// A complete reduced-leading basis that does not contain pure powers of
    /// every variable.
    Complete { basis: Vec<HomogPoly> },
}

/// Field operations the basis computation needs.
trait Coefficient: Clone {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn inv(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Coefficient for CycloNum {
    fn is_zero(&self) -> bool {
        CycloNum::is_zero(self)
    }
    fn is_one(&self) -> bool {
        CycloNum::is_one(self)
    }
    fn inv(&self) -> Self {
        self.inverse().expect("nonzero")
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Element of the prime field `F_p`, `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    fn pow(self, mut e: u64) -> Fp {
        let (mut base, mut acc) = (self.v, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Fp { v: acc, p: self.p }
    }
}

impl Coefficient for Fp {
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_one(&self) -> bool {
        self.v == 1
    }
    fn inv(&self) -> Self {
        self.pow(self.p - 2)
    }
    fn times(&self, other: &Self) -> Self {
        Fp {
            v: self.v * other.v % self.p,
            p: self.p,
        }
    }
    fn plus(&self, other: &Self) -> Self {
        Fp {
            v: (self.v + other.v) % self.p,
            p: self.p,
        }
    }
    fn negated(&self) -> Self {
        Fp {
            v: (self.p - self.v) % self.p,
            p: self.p,
        }
    }
}

type Terms<C> = BTreeMap<Monomial, C>;

fn add_to<C: Coefficient>(map: &mut Terms<C>, m: Monomial, c: C) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get().plus(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

struct Basis<C> {
    polys: Vec<Terms<C>>,
    pure: Vec<bool>,
}

impl<C> Basis<C> {
    fn lead(&self, i: usize) -> &Monomial {
        self.polys[i].keys().next_back().expect("nonzero")
    }

    fn all_pure(&self) -> bool {
        self.pure.iter().all(|&b| b)
    }

    fn note_pure(&mut self, m: &Monomial) {
        if let Some(i) = m.pure_power_var() {
            self.pure[i] = true;
        }
    }
}

fn make_monic<C: Coefficient>(mut p: Terms<C>) -> Terms<C> {
    let lc = p.values().next_back().expect("nonzero").clone();
    if lc.is_one() {
        return p;
    }
    let inv = lc.inv();
    for v in p.values_mut() {
        *v = v.times(&inv);
    }
    p
}

fn check_deadline(deadline: Option<Instant>) -> Result<()> {
    match deadline {
        Some(t) if Instant::now() >= t => Err(Error::Timeout),
        _ => Ok(()),
    }
}

/// Full normal form of `f` modulo monic `basis`.
fn normal_form<C: Coefficient>(
    mut p: Terms<C>,
    basis: &[Terms<C>],
    deadline: Option<Instant>,
) -> Result<Terms<C>> {
    let mut r = Terms::new();
    let mut steps = 0u32;
    while let Some((m, c)) = p.pop_last() {
        steps += 1;
        if steps.is_multiple_of(64) {
            check_deadline(deadline)?;
        }
        let div = basis
            .iter()
            .find(|g| g.keys().next_back().expect("nonzero").divides(&m));
        match div {
            Some(g) => {
                let lm = g.keys().next_back().expect("nonzero");
                let q = lm.quotient_of(&m);
                for (gm, gc) in g.iter().rev().skip(1) {
                    add_to(&mut p, gm.mul(&q), c.times(gc).negated());
                }
            }
            None => {
                r.insert(m, c);
            }
        }
    }
    Ok(r)
}

fn s_polynomial<C: Coefficient>(f: &Terms<C>, g: &Terms<C>) -> Terms<C> {
    let lf = f.keys().next_back().expect("nonzero");
    let lg = g.keys().next_back().expect("nonzero");
    let l = lf.lcm(lg);
    let qf = lf.quotient_of(&l);
    let qg = lg.quotient_of(&l);
    let mut out = Terms::new();
    for (m, c) in f.iter().rev().skip(1) {
        add_to(&mut out, m.mul(&qf), c.clone());
    }
    for (m, c) in g.iter().rev().skip(1) {
        add_to(&mut out, m.mul(&qg), c.negated());
    }
    out
}

enum Run<C> {
    ZeroDimensional(usize),
    Complete(Vec<Terms<C>>),
}

fn buchberger<C: Coefficient>(
    mut pending: Vec<Terms<C>>,
    nvars: usize,
    deadline: Option<Instant>,
) -> Result<Run<C>> {
    let mut basis = Basis {
        polys: Vec::new(),
        pure: vec![false; nvars],
    };
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    pending.retain(|g| !g.is_empty());
    pending.sort_by(|a, b| a.keys().next_back().cmp(&b.keys().next_back()));

    let add = |basis: &mut Basis<C>, pairs: &mut Vec<(usize, usize)>, p: Terms<C>| {
        let p = make_monic(p);
        let lm = p.keys().next_back().expect("nonzero").clone();
        basis.note_pure(&lm);
        let idx = basis.polys.len();
        basis.polys.push(p);
        for j in 0..idx {
            pairs.push((j, idx));
        }
    };

    for g in pending.drain(..) {
        check_deadline(deadline)?;
        let r = normal_form(g, &basis.polys, deadline)?;
        if !r.is_empty() {
            add(&mut basis, &mut pairs, r);
            if basis.all_pure() {
                return Ok(Run::ZeroDimensional(basis.polys.len()));
            }
        }
    }

    while !pairs.is_empty() {
        check_deadline(deadline)?;
        // lowest lcm degree first
        let (pos, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(i, j))| (basis.lead(i).lcm(basis.lead(j)).degree(), j, i))
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(pos);
        done.insert((i, j));
        let li = basis.lead(i).clone();
        let lj = basis.lead(j).clone();
        if li.coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let chain = (0..basis.polys.len()).any(|k| {
            k != i
                && k != j
                && basis.lead(k).divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis.polys[i], &basis.polys[j]);
        let r = normal_form(s, &basis.polys, deadline)?;
        if !r.is_empty() {
            add(&mut basis, &mut pairs, r);
            if basis.all_pure() {
                return Ok(Run::ZeroDimensional(basis.polys.len()));
            }
        }
    }
    Ok(Run::Complete(basis.polys))
}

/// Computes a Groebner basis of the ideal generated by `gens`, stopping early
/// once every variable has a pure power among leading monomials.
pub fn groebner(gens: &[HomogPoly], deadline: Option<Instant>) -> Result<GroebnerOutcome> {
    let Some(first) = gens.first() else {
        return Ok(GroebnerOutcome::Complete { basis: vec![] });
    };
    let field = first.field().clone();
    let nvars = first.nvars();
    let pending = gens.iter().map(|g| g.term_map().clone()).collect();
    match buchberger(pending, nvars, deadline)? {
        Run::ZeroDimensional(elements) => Ok(GroebnerOutcome::ZeroDimensionalCone { elements }),
        Run::Complete(polys) => {
            let basis = polys
                .into_iter()
                .map(|t| {
                    let deg = t.keys().next_back().expect("nonzero").degree();
                    HomogPoly::from_terms(
                        &field,
                        nvars,
                        Some(deg),
                        t.into_iter().map(|(m, c)| (m.exponents().to_vec(), c)),
                    )
                    .expect("homogeneous")
                })
                .collect();
            Ok(GroebnerOutcome::Complete { basis })
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes `p = 1 mod N` below `2^31`, largest first, with a primitive
/// `N`-th root of unity in `F_p`.
fn split_primes(conductor: u32) -> impl Iterator<Item = (u64, u64)> {
    let n = conductor.max(1) as u64;
    let factors = prime_factors(n);
    let top = ((1u64 << 31) - 2) / n;
    (1..=top).rev().filter_map(move |k| {
        let p = k * n + 1;
        if !is_prime(p) {
            return None;
        }
        (2..p).find_map(|a| {
            let r = Fp { v: a, p }.pow((p - 1) / n);
            factors
                .iter()
                .all(|q| r.pow(n / q).v != 1)
                .then_some((p, r.v))
        })
    })
}

fn reduce_mod(c: &CycloNum, p: u64, root: u64) -> Option<Fp> {
    let mut acc = Fp { v: 0, p };
    let mut power = Fp { v: 1, p };
    let z = Fp { v: root, p };
    let bp = BigInt::from(p);
    for a in c.coeffs() {
        if !a.is_zero() {
            let den = (a.denom() % &bp).to_u64().expect("reduced");
            if den == 0 {
                return None;
            }
            let num = a.numer().mod_floor(&bp).to_u64().expect("reduced");
            let q = Fp { v: num, p }.times(&Fp { v: den, p }.inv());
            acc = acc.plus(&q.times(&power));
        }
        power = power.times(&z);
    }
    Some(acc)
}

/// Tries to show that the homogeneous `gens` have no common zero in
/// projective space by reducing modulo primes that split in the coefficient
/// field. If the reductions modulo a prime ideal have only the trivial common
/// zero, so do the generators: the zero scheme is proper over the localization
/// at that prime, and its special fibre is empty. Returns the prime used.
pub fn modular_empty_cone(
    gens: &[HomogPoly],
    primes: usize,
    deadline: Option<Instant>,
) -> Result<Option<u64>> {
    let Some(first) = gens.first() else {
        return Ok(None);
    };
    let nvars = first.nvars();
    for (p, root) in split_primes(first.field().conductor()).take(primes) {
        check_deadline(deadline)?;
        let reduced: Option<Vec<Terms<Fp>>> = gens
            .iter()
            .map(|g| {
                let mut t = Terms::new();
                for (m, c) in g.terms() {
                    add_to(&mut t, m.clone(), reduce_mod(c, p, root)?);
                }
                Some(t)
            })
            .collect();
        let Some(reduced) = reduced else {
            continue;
        };
        if let Run::ZeroDimensional(_) = buchberger(reduced, nvars, deadline)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Reduces `f` modulo a basis returned by [`groebner`].
pub fn reduce(f: &HomogPoly, basis: &[HomogPoly]) -> Result<Vec<(Vec<u32>, CycloNum)>> {
    let maps: Vec<TermMap> = basis.iter().map(|b| b.term_map().clone()).collect();
    let r = normal_form(f.term_map().clone(), &maps, None)?;
    Ok(r.into_iter()
        .map(|(m, c)| (m.exponents().to_vec(), c))
        .collect())
}
