//! Hypersurfaces `{F = 0}` in projective space: smoothness, automorphisms,
//! multiplicity at a point.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::exactnum::{CycloField, CycloNum};
use crate::groebner::{groebner, modular_empty_cone, GroebnerOutcome};
use crate::polyring::HomogPoly;
use crate::projlin::{lift_vector, normalize_point, ProjMatrix};

/// Projective orders are searched up to this bound unless told otherwise.
pub const DEFAULT_ORDER_BOUND: u64 = 10_000;

/// Degrees above this are refused by the smoothness check without an override.
pub const GROEBNER_DEGREE_GUARD: u32 = 40;

/// Primes tried by the modular smoothness check before the exact computation.
const MODULAR_PRIMES: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothStatus {
    Unchecked,
    CertifiedSmooth,
    /// All partials vanish at `witness` when one was found; otherwise the
    /// complete basis showed a nonempty singular locus without a located point.
    CertifiedSingular {
        witness: Option<Vec<CycloNum>>,
    },
    Timeout,
}

impl SmoothStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SmoothStatus::Unchecked => "unchecked",
            SmoothStatus::CertifiedSmooth => "certified_smooth",
            SmoothStatus::CertifiedSingular { witness: Some(_) } => "certified_singular",
            SmoothStatus::CertifiedSingular { witness: None } => "singular_no_point",
            SmoothStatus::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SmoothOptions {
    pub deadline: Option<Duration>,
    pub allow_high_degree: bool,
}

/// A linear automorphism `A` with `F(A X) = lambda F(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutWitness {
    pub matrix: ProjMatrix,
    pub lambda: CycloNum,
    pub order: u64,
}

#[derive(Clone, Debug)]
pub struct Hypersurface {
    n: usize,
    f: HomogPoly,
    smooth_status: SmoothStatus,
}

impl Hypersurface {
    /// `X = {F = 0}` in `P^{n+1}`; `F` must have `n + 2` variables.
    pub fn new(n: usize, f: HomogPoly) -> Result<Self> {
        if f.nvars() != n + 2 {
            return Err(Error::VariableCountMismatch(f.nvars(), n + 2));
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Hypersurface {
            n,
            f,
            smooth_status: SmoothStatus::Unchecked,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    pub fn nvars(&self) -> usize {
        self.n + 2
    }

    pub fn polynomial(&self) -> &HomogPoly {
        &self.f
    }

    pub fn field(&self) -> &CycloField {
        self.f.field()
    }

    pub fn smooth_status(&self) -> &SmoothStatus {
        &self.smooth_status
    }

    pub fn lift(&self, target: &CycloField) -> Result<Hypersurface> {
        Ok(Hypersurface {
            n: self.n,
            f: self.f.lift(target)?,
            smooth_status: self.smooth_status.clone(),
        })
    }

    /// `X` and `p` in a common field.
    fn with_point(&self, p: &[CycloNum]) -> Result<(HomogPoly, Vec<CycloNum>)> {
        if p.len() != self.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in P^{}",
                p.len(),
                self.n + 1
            )));
        }
        let pf = p.first().map(|x| x.field().conductor()).unwrap_or(1);
        let field = self.field().enlarged_for(pf)?;
        Ok((self.f.lift(&field)?, lift_vector(p, &field)?))
    }

    pub fn contains_point(&self, p: &[CycloNum]) -> Result<bool> {
        let (f, p) = self.with_point(p)?;
        Ok(f.evaluate(&p)?.is_zero())
    }

    pub fn partials(&self) -> Vec<HomogPoly> {
        (0..self.nvars())
            .map(|i| self.f.partial_derivative(i))
            .collect()
    }

    /// Jacobian criterion via a Groebner basis of the partial derivatives.
    pub fn is_smooth(&self, opts: &SmoothOptions) -> Result<SmoothStatus> {
        if self.degree() > GROEBNER_DEGREE_GUARD && !opts.allow_high_degree {
            return Err(Error::DegreeGuard(self.degree()));
        }
        let deadline = opts.deadline.map(|d| Instant::now() + d);
        let partials = self.partials();
        match modular_empty_cone(&partials, MODULAR_PRIMES, deadline) {
            Ok(Some(_)) => return Ok(SmoothStatus::CertifiedSmooth),
            Ok(None) => {}
            Err(Error::Timeout) => return Ok(SmoothStatus::Timeout),
            Err(e) => return Err(e),
        }
        // rational coefficients keep the basis computation over Q
        let gens: Vec<HomogPoly> = match partials
            .iter()
            .map(HomogPoly::descend_to_rationals)
            .collect::<Option<Vec<_>>>()
        {
            Some(r) => r,
            None => partials.clone(),
        };
        match groebner(&gens, deadline) {
            Ok(GroebnerOutcome::ZeroDimensionalCone { .. }) => Ok(SmoothStatus::CertifiedSmooth),
            Ok(GroebnerOutcome::Complete { .. }) => Ok(SmoothStatus::CertifiedSingular {
                witness: self.find_singular_point(&partials),
            }),
            Err(Error::Timeout) => Ok(SmoothStatus::Timeout),
            Err(e) => Err(e),
        }
    }

    /// Runs [`is_smooth`](Self::is_smooth) and stores the result.
    pub fn certify_smoothness(&mut self, opts: &SmoothOptions) -> Result<&SmoothStatus> {
        self.smooth_status = self.is_smooth(opts)?;
        Ok(&self.smooth_status)
    }

    /// Probes points with coordinates in `{0, 1, -1}` and then in `{0}` plus the
    /// roots of unity of the field for a common zero of the partials.
    fn find_singular_point(&self, partials: &[HomogPoly]) -> Option<Vec<CycloNum>> {
        let field = self.field().clone();
        let vanishes = |pt: &[CycloNum]| {
            partials
                .iter()
                .all(|g| g.evaluate(pt).map(|v| v.is_zero()).unwrap_or(false))
        };
        let mut values = vec![field.zero(), field.one(), -field.one()];
        if let Some(p) = probe(&values, self.nvars(), &vanishes) {
            return Some(p);
        }
        let n = field.conductor();
        let l = if n.is_multiple_of(2) { n } else { 2 * n };
        values = vec![field.zero()];
        for k in 0..l {
            values.push(field.signed_root_of_unity(l, k as i64).ok()?);
        }
        let budget = (values.len() as f64).powi(self.nvars() as i32 - 1);
        if budget <= 50_000.0 {
            return probe(&values, self.nvars(), &vanishes);
        }
        None
    }

    /// `Some(witness)` when `F(A X) = lambda F(X)`; the witness lives in the
    /// smallest field containing both coefficient fields.
    pub fn verify_automorphism(&self, a: &ProjMatrix) -> Result<Option<AutWitness>> {
        self.verify_automorphism_with_bound(a, DEFAULT_ORDER_BOUND)
    }

    pub fn verify_automorphism_with_bound(
        &self,
        a: &ProjMatrix,
        k_max: u64,
    ) -> Result<Option<AutWitness>> {
        if a.size() != self.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "matrix of size {} on P^{}",
                a.size(),
                self.n + 1
            )));
        }
        let field = self.field().enlarged_for(a.field().conductor())?;
        let a = a.lift(&field)?;
        let f = self.f.lift(&field)?;
        let g = f.apply_linear_change(&a)?;
        let (m, c) = f.leading_term().expect("nonzero");
        let lambda = g.coefficient(m.exponents()).checked_div(c)?;
        if lambda.is_zero() || g != f.scale(&lambda) {
            return Ok(None);
        }
        let order = a.projective_order(k_max)?;
        Ok(Some(AutWitness {
            matrix: a,
            lambda,
            order,
        }))
    }

    /// `F(M X)` expanded in `X_0`, where `M` has first column `p`.
    pub fn local_expansion(
        &self,
        p: &[CycloNum],
        pivot: Option<usize>,
    ) -> Result<(ProjMatrix, Vec<(u32, HomogPoly)>)> {
        let (f, p) = self.with_point(p)?;
        let p = normalize_point(&p)?;
        let m = match pivot {
            None => ProjMatrix::completing_basis(&p)?,
            Some(i) => ProjMatrix::completing_basis_with_pivot(&p, i)?,
        };
        let g = f.apply_linear_change(&m)?;
        Ok((m, g.expand_in_variable(0)))
    }

    /// Least `k` such that the coefficient of `X_0^{d-k}` is nonzero after
    /// moving `p` to `[1:0:...:0]`; 0 means `p` is off `X`, 1 a smooth point.
    pub fn multiplicity_at_point(&self, p: &[CycloNum]) -> Result<u32> {
        self.multiplicity_with_pivot(p, None)
    }

    pub fn multiplicity_with_pivot(&self, p: &[CycloNum], pivot: Option<usize>) -> Result<u32> {
        let (_, parts) = self.local_expansion(p, pivot)?;
        let d = self.degree();
        Ok(parts
            .iter()
            .map(|(k, _)| d - k)
            .min()
            .expect("nonzero polynomial"))
    }
}

/// Searches vectors with entries from `values`, first nonzero entry 1.
fn probe(
    values: &[CycloNum],
    nvars: usize,
    pred: &dyn Fn(&[CycloNum]) -> bool,
) -> Option<Vec<CycloNum>> {
    let field = values[0].field().clone();
    for lead in 0..nvars {
        let free = nvars - lead - 1;
        let mut idx = vec![0usize; free];
        loop {
            let mut pt = vec![field.zero(); nvars];
            pt[lead] = field.one();
            for (k, &i) in idx.iter().enumerate() {
                pt[lead + 1 + k] = values[i].clone();
            }
            if pred(&pt) {
                return Some(pt);
            }
            // odometer
            let mut k = 0;
            loop {
                if k == free {
                    break;
                }
                idx[k] += 1;
                if idx[k] < values.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == free {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projlin::unit_vector;
    use crate::text::parse_polynomial;

    fn surface(s: &str, n: usize, conductor: u32) -> Hypersurface {
        let f = CycloField::new(conductor).unwrap();
        Hypersurface::new(n, parse_polynomial(s, n + 2, &f).unwrap()).unwrap()
    }

    fn status(x: &Hypersurface) -> SmoothStatus {
        x.is_smooth(&SmoothOptions {
            deadline: Some(Duration::from_secs(60)),
            allow_high_degree: false,
        })
        .unwrap()
    }

    #[test]
    fn smoothness_examples() {
        assert_eq!(
            status(&surface("x0^4 + x1^4 + x2^4", 1, 1)),
            SmoothStatus::CertifiedSmooth
        );
        let sing = status(&surface("x0^4 + x1^4", 1, 1));
        let f = CycloField::rationals();
        assert_eq!(
            sing,
            SmoothStatus::CertifiedSingular {
                witness: Some(unit_vector(&f, 3, 2))
            }
        );
        assert_eq!(
            status(&surface("x1*x0^4 + x1^4*x2 + x2^5 + x3^5", 2, 1)),
            SmoothStatus::CertifiedSmooth
        );
        assert_eq!(
            status(&surface("x2^6 + x0^5*x2 + x1^5*x2 + x0^3*x1^3", 1, 5)),
            SmoothStatus::CertifiedSmooth
        );
        assert_eq!(
            status(&surface("x0^3*x2 + x1^3*x3 + x2^4 + x3^4", 2, 3)),
            SmoothStatus::CertifiedSmooth
        );
    }

    #[test]
    fn singular_witness_kills_partials() {
        // a nodal cubic-times-line style quartic: singular at [0:0:1]
        let x = surface("x0^2*x2^2 - x1^2*x2^2 + x0^4 + x1^4", 1, 1);
        match status(&x) {
            SmoothStatus::CertifiedSingular { witness: Some(w) } => {
                for g in x.partials() {
                    assert!(g.evaluate(&w).unwrap().is_zero());
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degree_guard() {
        let f = CycloField::rationals();
        let big = parse_polynomial("x0^41 + x1^41 + x2^41", 3, &f).unwrap();
        let x = Hypersurface::new(1, big).unwrap();
        assert_eq!(
            x.is_smooth(&SmoothOptions::default()),
            Err(Error::DegreeGuard(41))
        );
    }

    #[test]
    fn automorphism_examples() {
        let x = surface("x2^6 + x0^5*x2 + x1^5*x2 + x0^3*x1^3", 1, 5);
        let f = x.field().clone();
        let g = ProjMatrix::diagonal(&[
            f.root_of_unity(5, 3).unwrap(),
            f.root_of_unity(5, 2).unwrap(),
            f.one(),
        ])
        .unwrap();
        let w = x.verify_automorphism(&g).unwrap().unwrap();
        assert!(w.lambda.is_one());
        assert_eq!(w.order, 5);

        let fermat = surface("x0^4 + x1^4 + x2^4", 1, 1);
        let f1 = fermat.field().clone();
        let bad = ProjMatrix::diagonal(&[f1.from_int(2), f1.one(), f1.one()]).unwrap();
        assert!(fermat.verify_automorphism(&bad).unwrap().is_none());
    }

    #[test]
    fn composition_multiplies_lambdas() {
        let x = surface("x0^4 + x1^4 + x2^4", 1, 8);
        let f = x.field().clone();
        let z8 = |j| f.root_of_unity(8, j).unwrap();
        let a = ProjMatrix::diagonal(&[z8(3), z8(1), z8(1)]).unwrap();
        let b = ProjMatrix::permutation(&f, &[1, 2, 0]).unwrap();
        let wa = x.verify_automorphism(&a).unwrap().unwrap();
        let wb = x.verify_automorphism(&b).unwrap().unwrap();
        let wab = x.verify_automorphism(&a.mul(&b).unwrap()).unwrap().unwrap();
        assert_eq!(wab.lambda, &wa.lambda * &wb.lambda);
        assert_eq!(wa.lambda, -f.one());
    }

    #[test]
    fn multiplicity_examples() {
        let f = CycloField::rationals();
        let e0 = unit_vector(&f, 3, 0);
        assert_eq!(
            surface("x0^4 + x1^4 + x2^4", 1, 1)
                .multiplicity_at_point(&e0)
                .unwrap(),
            0
        );
        assert_eq!(
            surface("x1*x0^3 + x1^4 + x2^4", 1, 1)
                .multiplicity_at_point(&e0)
                .unwrap(),
            1
        );
        assert_eq!(
            surface("x0^2*x1^2 + x1^4 + x2^4", 1, 1)
                .multiplicity_at_point(&e0)
                .unwrap(),
            2
        );
        let zero = vec![f.zero(); 3];
        assert_eq!(
            surface("x0^4 + x1^4 + x2^4", 1, 1).multiplicity_at_point(&zero),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn multiplicity_independent_of_completion() {
        let x = surface("x0^4 + x1^4 + x2^4 - 2*x0^2*x1^2", 1, 1);
        let f = x.field().clone();
        // [1:1:0] lies on X; compare completions pivoting on either coordinate
        let p = vec![f.one(), f.one(), f.zero()];
        let a = x.multiplicity_with_pivot(&p, Some(0)).unwrap();
        let b = x.multiplicity_with_pivot(&p, Some(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, 2);
    }
}
