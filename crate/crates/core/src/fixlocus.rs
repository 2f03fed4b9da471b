//! Fixed loci `Fix(g)` of linear automorphisms and the fixed-locus criteria
//! for Galois points.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::exactnum::{CycloField, CycloNum};
use crate::galois::{certificate_from_automorphism, GaloisCertificate};
use crate::hypersurface::{AutWitness, Hypersurface, SmoothOptions, SmoothStatus};
use crate::projlin::{EigenStructure, PointKind, ProjMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Empty,
    /// `points` is filled when every point could be written down in the field.
    FinitePoints {
        count: u32,
        points: Option<Vec<Vec<CycloNum>>>,
    },
    /// `P(E) ∩ X`, a hypersurface of the given dimension inside `P(E)`.
    HypersurfaceInSubspace {
        dim: usize,
    },
    /// `P(E)` lies entirely on `X`.
    WholeSubspace {
        dim: usize,
    },
}

impl ComponentKind {
    pub fn dimension(&self) -> i32 {
        match self {
            ComponentKind::Empty => -1,
            ComponentKind::FinitePoints { .. } => 0,
            ComponentKind::HypersurfaceInSubspace { dim }
            | ComponentKind::WholeSubspace { dim } => *dim as i32,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ComponentKind::Empty => "empty",
            ComponentKind::FinitePoints { .. } => "finite_points",
            ComponentKind::HypersurfaceInSubspace { .. } => "hypersurface_in_subspace",
            ComponentKind::WholeSubspace { .. } => "whole_subspace",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FixedComponent {
    pub eigenvalue: CycloNum,
    pub basis: Vec<Vec<CycloNum>>,
    pub ambient_proj_dim: usize,
    pub kind: ComponentKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u32),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct FixedLocusReport {
    pub field: CycloField,
    pub components: Vec<FixedComponent>,
    /// Number of fixed points when the locus is finite.
    pub total_finite_count: Option<u32>,
    pub max_component_dim: i32,
}

impl FixedLocusReport {
    pub fn cardinality(&self) -> Cardinality {
        match self.total_finite_count {
            Some(k) => Cardinality::Finite(k),
            None => Cardinality::Infinite,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.max_component_dim < 0
    }

    /// Isolated points, ignoring positive-dimensional components.
    pub fn isolated_point_count(&self) -> u32 {
        self.components
            .iter()
            .map(|c| match c.kind {
                ComponentKind::FinitePoints { count, .. } => count,
                _ => 0,
            })
            .sum()
    }

    /// Explicit fixed points when the locus is finite and every point is known.
    pub fn points(&self) -> Option<Vec<Vec<CycloNum>>> {
        self.total_finite_count?;
        let mut out = Vec::new();
        for c in &self.components {
            match &c.kind {
                ComponentKind::Empty => {}
                ComponentKind::FinitePoints { points, .. } => out.extend(points.clone()?),
                _ => return None,
            }
        }
        Some(out)
    }
}

fn combine(basis: &[Vec<CycloNum>], coeffs: &[CycloNum]) -> Vec<CycloNum> {
    let n = basis[0].len();
    let field = basis[0][0].field().clone();
    let mut out = vec![field.zero(); n];
    for (v, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = &*o + &(x * c);
            }
        }
    }
    out
}

/// `Fix(g) ∩ X` eigenspace by eigenspace.
pub fn fixed_locus(x: &Hypersurface, w: &AutWitness) -> Result<FixedLocusReport> {
    let es = w.matrix.eigen_structure()?;
    fixed_locus_from_eigenstructure(x, &es)
}

/// As [`fixed_locus`] for a matrix diagonalized by the columns of `witness`.
pub fn fixed_locus_with_witness(
    x: &Hypersurface,
    w: &AutWitness,
    witness: &ProjMatrix,
) -> Result<FixedLocusReport> {
    let es = w.matrix.eigen_structure_with_witness(witness)?;
    fixed_locus_from_eigenstructure(x, &es)
}

pub fn fixed_locus_from_eigenstructure(
    x: &Hypersurface,
    es: &EigenStructure,
) -> Result<FixedLocusReport> {
    let field = x.field().enlarged_for(es.field.conductor())?;
    let f = x.polynomial().lift(&field)?;
    let mut components = Vec::new();
    for pair in &es.pairs {
        let basis: Vec<Vec<CycloNum>> = pair
            .basis
            .iter()
            .map(|v| {
                v.iter()
                    .map(|c| c.embed_lift(&field))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let dim = basis.len();
        let r = f.restrict_to_subspace(&basis)?;
        let kind = match dim {
            1 => {
                if r.is_zero() {
                    ComponentKind::FinitePoints {
                        count: 1,
                        points: Some(vec![basis[0].clone()]),
                    }
                } else {
                    ComponentKind::Empty
                }
            }
            2 => {
                if r.is_zero() {
                    ComponentKind::WholeSubspace { dim: 1 }
                } else {
                    let count = r.distinct_root_count()?;
                    let points = r
                        .binary_roots_in_field()?
                        .map(|roots| roots.iter().map(|t| combine(&basis, t)).collect());
                    ComponentKind::FinitePoints { count, points }
                }
            }
            _ => {
                if r.is_zero() {
                    ComponentKind::WholeSubspace { dim: dim - 1 }
                } else {
                    ComponentKind::HypersurfaceInSubspace { dim: dim - 2 }
                }
            }
        };
        components.push(FixedComponent {
            eigenvalue: pair.value.embed_lift(&field)?,
            basis,
            ambient_proj_dim: dim - 1,
            kind,
        });
    }
    let max_component_dim = components
        .iter()
        .map(|c| c.kind.dimension())
        .max()
        .unwrap_or(-1);
    let total_finite_count = if max_component_dim <= 0 {
        Some(
            components
                .iter()
                .map(|c| match c.kind {
                    ComponentKind::FinitePoints { count, .. } => count,
                    _ => 0,
                })
                .sum(),
        )
    } else {
        None
    };
    Ok(FixedLocusReport {
        field,
        components,
        total_finite_count,
        max_component_dim,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

/// A fixed-locus predicate together with the certificate search it predicts.
#[derive(Clone, Debug)]
pub struct PredicateOutcome {
    pub verdict: Verdict,
    pub certificate: Option<GaloisCertificate>,
    pub locus: FixedLocusReport,
    pub detail: String,
}

impl PredicateOutcome {
    /// Verdict and certificate agree (ignoring indeterminate verdicts).
    pub fn agrees(&self) -> bool {
        match self.verdict {
            Verdict::Holds => self.certificate.is_some(),
            Verdict::Fails => self.certificate.is_none(),
            Verdict::Indeterminate => true,
        }
    }
}

fn finish(
    verdict: Verdict,
    certificate: Option<GaloisCertificate>,
    locus: FixedLocusReport,
    detail: String,
    kind: Option<PointKind>,
) -> Result<PredicateOutcome> {
    if verdict == Verdict::Holds {
        match (&certificate, kind) {
            (None, _) => {
                return Err(Error::TheoremViolation(format!(
                    "fixed-locus criterion holds ({detail}) but no certificate exists"
                )))
            }
            (Some(c), Some(k)) if c.kind != k => {
                return Err(Error::TheoremViolation(format!(
                    "criterion predicts a {k} point, certificate is {}",
                    c.kind
                )))
            }
            _ => {}
        }
    }
    Ok(PredicateOutcome {
        verdict,
        certificate,
        locus,
        detail,
    })
}

/// Plane curves: for `ord(g) = d-1` the criterion is `|Fix(g)| != 2`, for
/// `ord(g) = d` it is `Fix(g) != ∅`.
pub fn predicate_theorem9(x: &Hypersurface, w: &AutWitness) -> Result<PredicateOutcome> {
    if x.n() != 1 {
        return Err(Error::Precondition(format!(
            "plane curve expected, n = {}",
            x.n()
        )));
    }
    let d = x.degree() as u64;
    let locus = fixed_locus(x, w)?;
    let cert = certificate_from_automorphism(x, w)?;
    let (verdict, detail, kind) = if w.order == d - 1 {
        let card = locus.cardinality();
        let holds = card != Cardinality::Finite(2);
        (
            holds,
            format!("ord = d-1, |Fix| = {}", card_text(card)),
            PointKind::Inner,
        )
    } else if w.order == d {
        (
            !locus.is_empty(),
            format!("ord = d, Fix empty: {}", locus.is_empty()),
            PointKind::Outer,
        )
    } else {
        return Err(Error::Precondition(format!(
            "order {} is neither d-1 nor d",
            w.order
        )));
    };
    let verdict = if verdict {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    finish(verdict, cert, locus, detail, Some(kind))
}

fn card_text(c: Cardinality) -> String {
    match c {
        Cardinality::Finite(k) => k.to_string(),
        Cardinality::Infinite => "infinite".into(),
    }
}

/// Hypersurfaces with `n >= 2`: a codimension-one component decides, except
/// for surfaces with `ord(g) = d-1`, where a fixed curve must be non-rational.
/// A smooth plane section of degree `>= 3` is non-rational and a line is
/// rational; singular plane sections leave the verdict indeterminate.
pub fn predicate_theorem10(
    x: &Hypersurface,
    w: &AutWitness,
    deadline: Option<Duration>,
) -> Result<PredicateOutcome> {
    let n = x.n();
    if n < 2 {
        return Err(Error::Precondition(format!("n >= 2 expected, n = {n}")));
    }
    let d = x.degree() as u64;
    let kind = if w.order == d - 1 {
        PointKind::Inner
    } else if w.order == d {
        PointKind::Outer
    } else {
        return Err(Error::Precondition(format!(
            "order {} is neither d-1 nor d",
            w.order
        )));
    };
    let locus = fixed_locus(x, w)?;
    let cert = certificate_from_automorphism(x, w)?;
    if kind == PointKind::Outer || n >= 3 {
        let holds = locus.max_component_dim == n as i32 - 1;
        let detail = format!("max component dimension {}", locus.max_component_dim);
        let v = if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        return finish(v, cert, locus, detail, Some(kind));
    }
    // surfaces, inner branch
    let mut verdict = Verdict::Fails;
    let mut detail = String::from("no fixed curve");
    for c in &locus.components {
        match c.kind {
            ComponentKind::HypersurfaceInSubspace { dim: 1 } => {
                let section = x
                    .polynomial()
                    .lift(&locus.field)?
                    .restrict_to_subspace(&c.basis)?;
                let curve = Hypersurface::new(1, section)?;
                let status = curve.is_smooth(&SmoothOptions {
                    deadline,
                    allow_high_degree: false,
                })?;
                match status {
                    SmoothStatus::CertifiedSmooth => {
                        verdict = Verdict::Holds;
                        detail = "smooth plane section in Fix(g)".into();
                        break;
                    }
                    _ => {
                        verdict = Verdict::Indeterminate;
                        detail = format!("plane section in Fix(g) is {}", status.label());
                    }
                }
            }
            ComponentKind::WholeSubspace { dim: 1 } if verdict == Verdict::Fails => {
                detail = "only lines in Fix(g)".into();
            }
            _ => {}
        }
    }
    finish(verdict, cert, locus, detail, Some(kind))
}

/// Automorphisms of order `k(d-1)`, `k >= 2`: `|Fix(g)| >= 5` on surfaces,
/// codimension 1 or 2 for `n >= 3`; then `g^k` should certify an inner point.
pub fn predicate_theorem11(x: &Hypersurface, w: &AutWitness) -> Result<PredicateOutcome> {
    let n = x.n();
    if n < 2 {
        return Err(Error::Precondition(format!("n >= 2 expected, n = {n}")));
    }
    let d1 = x.degree() as u64 - 1;
    if !w.order.is_multiple_of(d1) || w.order / d1 < 2 {
        return Err(Error::Precondition(format!(
            "order {} is not k(d-1) with k >= 2",
            w.order
        )));
    }
    let k = w.order / d1;
    let locus = fixed_locus(x, w)?;
    let (holds, detail) = if n == 2 {
        let card = locus.cardinality();
        let holds = match card {
            Cardinality::Finite(c) => c >= 5,
            Cardinality::Infinite => true,
        };
        (holds, format!("|Fix| = {}", card_text(card)))
    } else {
        let m = locus.max_component_dim;
        (
            m == n as i32 - 1 || m == n as i32 - 2,
            format!("max component dimension {m}"),
        )
    };
    let power = w.matrix.pow(k);
    let pw = x
        .verify_automorphism(&power)?
        .ok_or_else(|| Error::Inconsistency("power of an automorphism is not invariant".into()))?;
    let cert = certificate_from_automorphism(x, &pw)?;
    let v = if holds {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    finish(
        v,
        cert,
        locus,
        format!("{detail}, k = {k}"),
        Some(PointKind::Inner),
    )
}
