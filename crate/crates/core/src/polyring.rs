//! Homogeneous polynomials over a cyclotomic field.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{CycloField, CycloNum};
use crate::projlin::{rank_of_rows, ProjMatrix};

/// Exponent vector of a monomial. Ordered by graded reverse lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// `Some(i)` if this is a pure power `X_i^k`, `k >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, e) in self.0.iter().enumerate() {
            if *e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) type TermMap = BTreeMap<Monomial, CycloNum>;

pub(crate) fn add_term(map: &mut TermMap, m: Monomial, c: CycloNum) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn mul_maps(a: &TermMap, b: &TermMap) -> TermMap {
    let mut acc: HashMap<Monomial, CycloNum> = HashMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.mul(mb);
            let p = ca * cb;
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &p,
                None => {
                    acc.insert(m, p);
                }
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A homogeneous polynomial in `nvars` variables. The zero polynomial keeps
/// its nominal degree.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    field: CycloField,
    nvars: usize,
    degree: u32,
    terms: TermMap,
}

impl HomogPoly {
    pub fn zero(field: &CycloField, nvars: usize, degree: u32) -> Self {
        HomogPoly {
            field: field.clone(),
            nvars,
            degree,
            terms: TermMap::new(),
        }
    }

    pub fn constant(field: &CycloField, nvars: usize, c: CycloNum) -> Self {
        let mut p = Self::zero(field, nvars, 0);
        add_term(&mut p.terms, Monomial::one(nvars), c);
        p
    }

    pub fn monomial(field: &CycloField, exponents: Vec<u32>, c: CycloNum) -> Self {
        let nvars = exponents.len();
        let m = Monomial(exponents);
        let mut p = Self::zero(field, nvars, m.degree());
        add_term(&mut p.terms, m, c);
        p
    }

    pub fn variable(field: &CycloField, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, i, 1).0, field.one())
    }

    /// `sum_i coeffs[i] X_i`.
    pub fn linear_form(field: &CycloField, coeffs: &[CycloNum]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(field, n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            add_term(&mut p.terms, Monomial::var(n, i, 1), c.clone());
        }
        p
    }

    /// Builds a polynomial from terms, checking homogeneity. The degree is
    /// taken from the first term, or `degree` when given.
    pub fn from_terms<I>(
        field: &CycloField,
        nvars: usize,
        degree: Option<u32>,
        terms: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, CycloNum)>,
    {
        let mut map = TermMap::new();
        let mut deg = degree;
        for (idx, (exps, c)) in terms.into_iter().enumerate() {
            if exps.len() != nvars {
                return Err(Error::VariableCountMismatch(exps.len(), nvars));
            }
            if !c.field().same_as(field) {
                return Err(Error::FieldMismatch(
                    c.field().conductor(),
                    field.conductor(),
                ));
            }
            let m = Monomial(exps);
            let md = m.degree();
            match deg {
                None => deg = Some(md),
                Some(d) if d != md => {
                    return Err(Error::Inhomogeneous {
                        term: idx + 1,
                        degree: md,
                        expected: d,
                    })
                }
                _ => {}
            }
            add_term(&mut map, m, c);
        }
        Ok(HomogPoly {
            field: field.clone(),
            nvars,
            degree: deg.unwrap_or(0),
            terms: map,
        })
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycloNum)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> CycloNum {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &CycloNum)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn term_map(&self) -> &TermMap {
        &self.terms
    }

    fn check_compatible(&self, other: &HomogPoly) -> Result<()> {
        if !self.field.same_as(&other.field) {
            return Err(Error::FieldMismatch(
                self.field.conductor(),
                other.field.conductor(),
            ));
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_term(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_compatible(other)?;
        Ok(HomogPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            degree: self.degree + other.degree,
            terms: mul_maps(&self.terms, &other.terms),
        })
    }

    pub fn neg(&self) -> HomogPoly {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, c: &CycloNum) -> HomogPoly {
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> HomogPoly {
        let mut acc = HomogPoly::constant(&self.field, self.nvars, self.field.one());
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same ring");
        }
        acc
    }

    /// Embeds the coefficients into a larger cyclotomic field.
    pub fn lift(&self, target: &CycloField) -> Result<HomogPoly> {
        if self.field.same_as(target) {
            return Ok(self.clone());
        }
        let mut out = HomogPoly::zero(target, self.nvars, self.degree);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.embed_lift(target)?);
        }
        Ok(out)
    }

    /// The same polynomial over `Q` when every coefficient is rational.
    pub fn descend_to_rationals(&self) -> Option<HomogPoly> {
        let q = CycloField::rationals();
        let mut out = HomogPoly::zero(&q, self.nvars, self.degree);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), q.from_rat(&c.to_rational()?));
        }
        Some(out)
    }

    /// Substitutes `X_i -> images[i]` where every image is a linear form in
    /// `target_nvars` variables.
    pub fn substitute_linear(&self, images: &[HomogPoly]) -> Result<HomogPoly> {
        if images.len() != self.nvars {
            return Err(Error::VariableCountMismatch(images.len(), self.nvars));
        }
        let target_nvars = images.first().map(|p| p.nvars).unwrap_or(0);
        for img in images {
            if img.degree != 1 || img.nvars != target_nvars {
                return Err(Error::DimensionMismatch(
                    "images must be linear forms".into(),
                ));
            }
            if !img.field.same_as(&self.field) {
                return Err(Error::FieldMismatch(
                    img.field.conductor(),
                    self.field.conductor(),
                ));
            }
        }
        let mut cache: Vec<Vec<TermMap>> = images
            .iter()
            .map(|img| {
                let mut one = TermMap::new();
                one.insert(Monomial::one(target_nvars), self.field.one());
                vec![one, img.terms.clone()]
            })
            .collect();
        let mut out = HomogPoly::zero(&self.field, target_nvars, self.degree);
        for (m, c) in &self.terms {
            let mut prod = TermMap::new();
            prod.insert(Monomial::one(target_nvars), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = mul_maps(cache[i].last().unwrap(), &cache[i][1]);
                    cache[i].push(next);
                }
                prod = mul_maps(&prod, &cache[i][e as usize]);
                if prod.is_empty() {
                    break;
                }
            }
            for (pm, pc) in prod {
                add_term(&mut out.terms, pm, pc);
            }
        }
        Ok(out)
    }

    /// `f(M X)`: substitutes `X_i -> sum_j M_ij X_j`.
    pub fn apply_linear_change(&self, m: &ProjMatrix) -> Result<HomogPoly> {
        if m.size() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "matrix of size {} acting on {} variables",
                m.size(),
                self.nvars
            )));
        }
        let field = m.field().clone();
        let f = self.lift(&field)?;
        let images: Vec<HomogPoly> = (0..f.nvars)
            .map(|i| HomogPoly::linear_form(&field, m.row(i)))
            .collect();
        f.substitute_linear(&images)
    }

    /// Restriction to the span of `basis`: `X = sum_k Y_k basis[k]`.
    pub fn restrict_to_subspace(&self, basis: &[Vec<CycloNum>]) -> Result<HomogPoly> {
        if basis.is_empty() {
            return Err(Error::DependentBasis);
        }
        if basis.iter().any(|v| v.len() != self.nvars) {
            return Err(Error::DimensionMismatch("basis vector length".into()));
        }
        if rank_of_rows(basis) != basis.len() {
            return Err(Error::DependentBasis);
        }
        let k = basis.len();
        let images: Vec<HomogPoly> = (0..self.nvars)
            .map(|i| {
                let coeffs: Vec<CycloNum> = basis.iter().map(|v| v[i].clone()).collect();
                HomogPoly::linear_form(&self.field, &coeffs)
            })
            .collect();
        let mut out = self.substitute_linear(&images)?;
        out.nvars = k;
        Ok(out)
    }

    pub fn partial_derivative(&self, i: usize) -> HomogPoly {
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            add_term(
                &mut out.terms,
                Monomial(exps),
                c * &self.field.from_int(e as i64),
            );
        }
        out
    }

    /// `f = sum_k X_i^k G_k`; returns the nonzero `(k, G_k)` with `G_k` in the
    /// remaining variables, highest `k` first.
    pub fn expand_in_variable(&self, i: usize) -> Vec<(u32, HomogPoly)> {
        let mut parts: BTreeMap<u32, HomogPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[i];
            let mut rest = m.0.clone();
            rest.remove(i);
            let entry = parts
                .entry(k)
                .or_insert_with(|| HomogPoly::zero(&self.field, self.nvars - 1, self.degree - k));
            add_term(&mut entry.terms, Monomial(rest), c.clone());
        }
        parts.into_iter().rev().collect()
    }

    /// Coefficient of `X_i^k` kept as a polynomial in all variables (with
    /// `X_i` absent).
    pub fn coefficient_of_power(&self, i: usize, k: u32) -> HomogPoly {
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree.saturating_sub(k));
        for (m, c) in &self.terms {
            if m.0[i] == k {
                let mut exps = m.0.clone();
                exps[i] = 0;
                out.terms.insert(Monomial(exps), c.clone());
            }
        }
        out
    }

    /// Inserts a new variable with exponent zero at position `i`.
    pub fn insert_variable(&self, i: usize) -> HomogPoly {
        let mut out = HomogPoly::zero(&self.field, self.nvars + 1, self.degree);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps.insert(i, 0);
            out.terms.insert(Monomial(exps), c.clone());
        }
        out
    }

    /// Exact quotient by a nonzero linear form, or `None` if it does not divide.
    pub fn divide_by_linear(&self, l: &HomogPoly) -> Option<HomogPoly> {
        if l.degree != 1 || l.is_zero() || l.nvars != self.nvars || !l.field.same_as(&self.field) {
            return None;
        }
        if self.is_zero() {
            return Some(HomogPoly::zero(
                &self.field,
                self.nvars,
                self.degree.saturating_sub(1),
            ));
        }
        if self.degree == 0 {
            return None;
        }
        // pivot: the last variable present in L
        let (pm, pc) = l.terms.iter().next_back().expect("nonzero");
        let pivot = pm.pure_power_var().expect("linear monomial");
        let pc_inv = pc.inverse().ok()?;
        let mut rem = self.terms.clone();
        let mut quotient = HomogPoly::zero(&self.field, self.nvars, self.degree - 1);
        loop {
            let top = rem
                .iter()
                .max_by(|a, b| a.0 .0[pivot].cmp(&b.0 .0[pivot]).then(a.0.cmp(b.0)))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = top else { break };
            if m.0[pivot] == 0 {
                return None;
            }
            let mut qexp = m.0.clone();
            qexp[pivot] -= 1;
            let qm = Monomial(qexp);
            let qc = &c * &pc_inv;
            for (lm, lc) in &l.terms {
                add_term(&mut rem, qm.mul(lm), -(&qc * lc));
            }
            add_term(&mut quotient.terms, qm, qc);
        }
        Some(quotient)
    }

    pub fn evaluate(&self, point: &[CycloNum]) -> Result<CycloNum> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        if point.iter().all(CycloNum::is_zero) {
            return Err(Error::ZeroVector);
        }
        let mut pows: Vec<Vec<CycloNum>> = point
            .iter()
            .map(|x| vec![x.field().one(), x.clone()])
            .collect();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap() * &point[i];
                    pows[i].push(next);
                }
                t = &t * &pows[i][e as usize];
                if t.is_zero() {
                    break;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Number of distinct projective roots of a nonzero binary form.
    pub fn distinct_root_count(&self) -> Result<u32> {
        if self.nvars != 2 {
            return Err(Error::DimensionMismatch("binary form expected".into()));
        }
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (at_infinity, affine) = self.dehomogenize_binary();
        let sq = upoly::squarefree_degree(&affine);
        Ok(sq as u32 + u32::from(at_infinity))
    }

    /// Splits a binary form into (has the root `[1:0]`, `f(t, 1)` with the
    /// `Y` power removed).
    fn dehomogenize_binary(&self) -> (bool, Vec<CycloNum>) {
        let min_y = self.terms.keys().map(|m| m.0[1]).min().unwrap_or(0);
        let top = self.degree - min_y;
        let mut coeffs = vec![self.field.zero(); top as usize + 1];
        for (m, c) in &self.terms {
            coeffs[m.0[0] as usize] = c.clone();
        }
        (min_y > 0, coeffs)
    }

    /// Projective roots of a binary form when they all lie in the coefficient
    /// field and are found among `0`, `[1:0]` and the roots of unity (scaled by
    /// `1`, `2`, `1/2`). `None` when some root was not found.
    pub fn binary_roots_in_field(&self) -> Result<Option<Vec<[CycloNum; 2]>>> {
        let total = self.distinct_root_count()? as usize;
        let field = self.field.clone();
        let (at_infinity, affine) = self.dehomogenize_binary();
        let mut roots: Vec<[CycloNum; 2]> = Vec::new();
        if at_infinity {
            roots.push([field.one(), field.zero()]);
        }
        let n = field.conductor();
        let l = if n.is_multiple_of(2) { n } else { 2 * n };
        let mut candidates = vec![field.zero()];
        let scales = [field.one(), field.from_int(2), field.from_int(2).inverse()?];
        for s in &scales {
            for k in 0..l as i64 {
                candidates.push(s * &field.signed_root_of_unity(l, k)?);
            }
        }
        for t in candidates {
            if roots.len() == total {
                break;
            }
            if upoly::eval(&affine, &t).is_zero()
                && !roots.iter().any(|r| r[1].is_one() && r[0] == t)
            {
                roots.push([t, field.one()]);
            }
        }
        Ok(if roots.len() == total {
            Some(roots)
        } else {
            None
        })
    }
}

/// Dense univariate helpers over a cyclotomic field, lowest degree first.
pub(crate) mod upoly {
    use crate::exactnum::CycloNum;

    pub fn trim(p: &mut Vec<CycloNum>) {
        while p.last().is_some_and(CycloNum::is_zero) {
            p.pop();
        }
    }

    pub fn eval(p: &[CycloNum], t: &CycloNum) -> CycloNum {
        let mut acc = t.field().zero();
        for c in p.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    pub fn derivative(p: &[CycloNum]) -> Vec<CycloNum> {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &c.field().from_int(i as i64))
            .collect()
    }

    pub fn rem(a: &[CycloNum], b: &[CycloNum]) -> Vec<CycloNum> {
        let mut r = a.to_vec();
        trim(&mut r);
        let lead_inv = b
            .last()
            .expect("nonzero divisor")
            .inverse()
            .expect("nonzero");
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() * &lead_inv;
            for (i, bc) in b.iter().enumerate() {
                r[i + shift] = &r[i + shift] - &(&c * bc);
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[CycloNum], b: &[CycloNum]) -> Vec<CycloNum> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y);
            x = std::mem::replace(&mut y, r);
        }
        x
    }

    pub fn squarefree_degree(p: &[CycloNum]) -> usize {
        let mut p = p.to_vec();
        trim(&mut p);
        if p.len() <= 1 {
            return 0;
        }
        let d = derivative(&p);
        let g = gcd(&p, &d);
        (p.len() - 1) - (g.len() - 1)
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{self} (deg {}, {} vars, {:?})",
            self.degree, self.nvars, self.field
        )
    }
}

/// Canonical text: leading grevlex term first; a coefficient with several
/// power-basis components is split into one term per component.
impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_poly(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_polynomial;

    fn q(n: u32) -> CycloField {
        CycloField::new(n).unwrap()
    }

    fn p(s: &str, nvars: usize, f: &CycloField) -> HomogPoly {
        parse_polynomial(s, nvars, f).unwrap()
    }

    #[test]
    fn grevlex_order() {
        let a = Monomial::new(vec![4, 0, 0]);
        let b = Monomial::new(vec![0, 4, 0]);
        let c = Monomial::new(vec![0, 0, 4]);
        assert!(a > b && b > c);
        let d = Monomial::new(vec![1, 0, 1]);
        let e = Monomial::new(vec![0, 2, 0]);
        assert!(e > d);
        assert!(Monomial::new(vec![0, 0, 5]) > Monomial::new(vec![4, 0, 0]));
    }

    #[test]
    fn arithmetic_examples() {
        let f = q(1);
        let a = p("x0^2 + x1^2", 3, &f);
        let b = p("-x1^2", 3, &f);
        assert_eq!(a.checked_add(&b).unwrap(), p("x0^2", 3, &f));
        let prod = p("x0", 3, &f).checked_mul(&p("x1", 3, &f)).unwrap();
        assert_eq!(prod, p("x0*x1", 3, &f));
        assert_eq!(prod.degree(), 2);
        assert_eq!(
            a.checked_add(&p("x2^3", 3, &f)),
            Err(Error::DegreeMismatch(2, 3))
        );
    }

    #[test]
    fn linear_change_examples() {
        let f4 = q(4);
        let fermat = p("x0^4 + x1^4 + x2^4", 3, &f4);
        let swap = ProjMatrix::permutation(&f4, &[1, 0, 2]).unwrap();
        assert_eq!(fermat.apply_linear_change(&swap).unwrap(), fermat);
        let d = ProjMatrix::diagonal(&[f4.zeta(), f4.one(), f4.one()]).unwrap();
        assert_eq!(fermat.apply_linear_change(&d).unwrap(), fermat);
        let shifted = p(
            "x0^4 + 4*x0^3*x1 + 6*x0^2*x1^2 + 4*x0*x1^3 + 2*x1^4 + x2^4",
            3,
            &f4,
        );
        let m = ProjMatrix::from_rows(vec![
            vec![f4.one(), f4.from_int(-1), f4.zero()],
            vec![f4.zero(), f4.one(), f4.zero()],
            vec![f4.zero(), f4.zero(), f4.one()],
        ])
        .unwrap();
        assert_eq!(shifted.apply_linear_change(&m).unwrap(), fermat);
    }

    /// Term-by-term binomial expansion of (X0 + X1)^4, independent of the
    /// substitution machinery.
    fn binomial_oracle(f: &CycloField) -> HomogPoly {
        let binom = [1, 4, 6, 4, 1];
        let terms = (0..=4u32).map(|k| (vec![4 - k, k, 0], f.from_int(binom[k as usize])));
        HomogPoly::from_terms(f, 3, Some(4), terms).unwrap()
    }

    #[test]
    fn binomial_expansion_matches_oracle() {
        let f = q(1);
        let x0_plus_x1 = p("x0 + x1", 3, &f);
        assert_eq!(x0_plus_x1.pow(4), binomial_oracle(&f));
        let full = binomial_oracle(&f)
            .checked_add(&p("x1^4 + x2^4", 3, &f))
            .unwrap();
        let parts = full.expand_in_variable(0);
        let g3 = parts.iter().find(|(k, _)| *k == 3).unwrap();
        assert_eq!(g3.1, p("4*x0", 2, &f));
    }

    #[test]
    fn partial_derivative_examples() {
        let f = q(1);
        assert_eq!(p("x0^4", 3, &f).partial_derivative(0), p("4*x0^3", 3, &f));
        assert!(p("x1^4", 3, &f).partial_derivative(0).is_zero());
        assert_eq!(p("x0^3*x2", 3, &f).partial_derivative(2), p("x0^3", 3, &f));
    }

    #[test]
    fn expand_examples() {
        let f = q(1);
        let parts = p("x0^4 + x1^4 + x2^4", 3, &f).expand_in_variable(0);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 4);
        assert_eq!(parts[0].1, HomogPoly::constant(&f, 2, f.one()));
        assert_eq!(parts[1].0, 0);
        assert_eq!(parts[1].1, p("x0^4 + x1^4", 2, &f));
        let parts = p("x1*x0^3 + x1^4", 3, &f).expand_in_variable(0);
        assert_eq!(parts[0].0, 3);
        assert_eq!(parts[0].1, p("x0", 2, &f));
        assert_eq!(parts[1].0, 0);
        assert_eq!(parts[1].1, p("x0^4", 2, &f));
    }

    #[test]
    fn divide_by_linear_examples() {
        let f = q(1);
        let x1 = p("x1", 3, &f);
        assert_eq!(
            p("x1^2 + x1*x2", 3, &f).divide_by_linear(&x1),
            Some(p("x1 + x2", 3, &f))
        );
        assert_eq!(p("x1^2 + x2^2", 3, &f).divide_by_linear(&x1), None);
        let l = p("x1 + x2", 3, &f);
        assert_eq!(l.pow(2).divide_by_linear(&l), Some(l.clone()));
    }

    #[test]
    fn restrict_examples() {
        let f = q(1);
        let e = |i: usize| -> Vec<CycloNum> {
            (0..4)
                .map(|j| if i == j { f.one() } else { f.zero() })
                .collect()
        };
        let g = p("x2^4 + x3^4", 4, &f);
        assert_eq!(
            g.restrict_to_subspace(&[e(2), e(3)]).unwrap(),
            p("x0^4 + x1^4", 2, &f)
        );
        let h = p("x0^3*x2 + x1^3*x3 + x2^4 + x3^4", 4, &f);
        assert_eq!(
            h.restrict_to_subspace(&[e(2), e(3)]).unwrap(),
            p("x0^4 + x1^4", 2, &f)
        );
        let z = p("x0^4", 4, &f)
            .restrict_to_subspace(&[e(1), e(2)])
            .unwrap();
        assert!(z.is_zero());
        assert_eq!(
            g.restrict_to_subspace(&[e(2), e(2)]),
            Err(Error::DependentBasis)
        );
    }

    #[test]
    fn distinct_roots_examples() {
        let f = q(8);
        let b = p("x0^4 + x1^4", 2, &f);
        assert_eq!(b.distinct_root_count().unwrap(), 4);
        // oracle: the roots enumerated explicitly in Q(zeta_8)
        let roots = b.binary_roots_in_field().unwrap().unwrap();
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert!(b.evaluate(&r[..]).unwrap().is_zero());
        }
        assert_eq!(p("x0^2*x1^2", 2, &f).distinct_root_count().unwrap(), 2);
        assert_eq!(p("x0^4", 2, &f).distinct_root_count().unwrap(), 1);
        assert_eq!(p("x1^4", 2, &f).distinct_root_count().unwrap(), 1);
        assert_eq!(
            HomogPoly::zero(&f, 2, 3).distinct_root_count(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn evaluate_examples() {
        let f = q(1);
        let pt = |v: &[i64]| -> Vec<CycloNum> { v.iter().map(|&x| f.from_int(x)).collect() };
        assert!(p("x0^4 + x1^4 + x2^4", 3, &f)
            .evaluate(&pt(&[1, 0, 0]))
            .unwrap()
            .is_one());
        let exa1 = p("x2^6 + x0^5*x2 + x1^5*x2 + x0^3*x1^3", 3, &f);
        assert!(exa1.evaluate(&pt(&[1, 0, 0])).unwrap().is_zero());
        let exa4 = p("x0^3*x2 + x1^3*x3 + x2^4 + x3^4", 4, &f);
        assert!(exa4.evaluate(&pt(&[1, 0, 0, 0])).unwrap().is_zero());
        assert_eq!(exa1.evaluate(&pt(&[0, 0, 0])), Err(Error::ZeroVector));
    }
}
