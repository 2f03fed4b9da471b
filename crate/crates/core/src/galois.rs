//! Galois points: the matrix-shape detector, the point-side normal-form
//! test, transport by automorphisms and the counting bounds.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{CycloField, CycloNum};
use crate::hypersurface::{AutWitness, Hypersurface};
use crate::polyring::HomogPoly;
use crate::projlin::{
    lift_vector, normalize_point, points_proj_eq, theorem8_shape_test, Matrix, PointKind,
    ProjMatrix,
};

/// A Galois point `point` whose Galois group is generated by `generator`,
/// conjugate to `diag(a, b, ..., b)` with `a/b = ratio`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisCertificate {
    pub point: Vec<CycloNum>,
    pub kind: PointKind,
    pub generator: ProjMatrix,
    pub group_order: u64,
    pub ratio: CycloNum,
}

fn require_degree(x: &Hypersurface) -> Result<u32> {
    let d = x.degree();
    if d < 4 {
        return Err(Error::Precondition(format!("degree {d} < 4")));
    }
    Ok(d)
}

fn kind_from_multiplicity(mult: u32) -> Result<PointKind> {
    match mult {
        0 => Ok(PointKind::Outer),
        1 => Ok(PointKind::Inner),
        m => Err(Error::SingularPoint(m)),
    }
}

/// Runs the shape test on `w` and checks the produced point against `X`.
pub fn certificate_from_automorphism(
    x: &Hypersurface,
    w: &AutWitness,
) -> Result<Option<GaloisCertificate>> {
    let d = require_degree(x)?;
    let Some(shape) = theorem8_shape_test(&w.matrix, d, x.n())? else {
        return Ok(None);
    };
    let mult = x.multiplicity_at_point(&shape.point)?;
    let kind = match kind_from_multiplicity(mult) {
        Ok(k) => k,
        Err(_) => {
            return Err(Error::Inconsistency(format!(
                "eigenpoint of the automorphism has multiplicity {mult}"
            )))
        }
    };
    if kind != shape.kind {
        return Err(Error::Inconsistency(format!(
            "shape test says {} but the point is {}",
            shape.kind, kind
        )));
    }
    let expected = match kind {
        PointKind::Inner => d as u64 - 1,
        PointKind::Outer => d as u64,
    };
    if w.order != expected {
        return Err(Error::Inconsistency(format!(
            "generator has projective order {} instead of {expected}",
            w.order
        )));
    }
    let field = shape.ratio.field().clone();
    Ok(Some(GaloisCertificate {
        point: shape.point,
        kind,
        generator: w.matrix.lift(&field)?,
        group_order: w.order,
        ratio: shape.ratio,
    }))
}

/// `X_0 -> X_0 + sum_j l_j X_j` as a matrix.
fn shift_matrix(field: &CycloField, nvars: usize, l: &HomogPoly) -> ProjMatrix {
    let mut m = Matrix::identity(field, nvars);
    for (mono, c) in l.terms() {
        let j = mono.pure_power_var().expect("linear form");
        m.set(0, j, c.clone());
    }
    ProjMatrix::new(m).expect("unipotent")
}

/// Change of the variables `X_1..` taking the linear form `g` (free of `X_0`)
/// to `X_1`.
fn straighten_linear(field: &CycloField, nvars: usize, g: &HomogPoly) -> Result<ProjMatrix> {
    let mut coeffs = vec![field.zero(); nvars];
    for (mono, c) in g.terms() {
        coeffs[mono.pure_power_var().expect("linear form")] = c.clone();
    }
    let pivot = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroPolynomial)?;
    let mut s = Matrix::zeros(field, nvars, nvars);
    s.set(0, 0, field.one());
    for (j, c) in coeffs.iter().enumerate() {
        s.set(1, j, c.clone());
    }
    let mut row = 2;
    for k in 1..nvars {
        if k != pivot {
            s.set(row, k, field.one());
            row += 1;
        }
    }
    ProjMatrix::new(s)?.inverse()
}

/// Decides whether `p` is a Galois point by bringing `F` to normal form at `p`.
///
/// After moving `p` to `[1:0:...:0]`, write `F = sum_k X_0^{d-k} G_k`. The
/// shift `X_0 -> X_0 + L` is forced by the vanishing of the first middle
/// coefficient, and the remaining freedom (linear changes in `X_1..`, scaling
/// `X_0`) multiplies each `G_k` by a unit or composes it with an invertible
/// map, so it cannot make a nonzero middle coefficient vanish. The test is
/// therefore complete.
///
/// Returns the kind and the composite change `C` with `F(C X)` in normal form.
pub fn galois_at_point(
    x: &Hypersurface,
    p: &[CycloNum],
) -> Result<Option<(PointKind, ProjMatrix)>> {
    let d = require_degree(x)?;
    let (m, parts) = x.local_expansion(p, None)?;
    let mult = parts
        .iter()
        .map(|(k, _)| d - k)
        .min()
        .expect("nonzero polynomial");
    let kind = kind_from_multiplicity(mult)?;
    let field = m.field().clone();
    let nvars = x.nvars();
    let f = x.polynomial().lift(&field)?.apply_linear_change(&m)?;
    let coeff = |k: u32| f.coefficient_of_power(0, d - k);
    let first_middle = match kind {
        PointKind::Outer => 1,
        PointKind::Inner => 2,
    };
    let shift = match kind {
        PointKind::Outer => {
            let g0 = coeff(0).coefficient(&vec![0; nvars]);
            let g1 = coeff(1);
            g1.scale(&(-(&g0 * &field.from_int(d as i64)).inverse()?))
        }
        PointKind::Inner => {
            let g1 = coeff(1);
            let g2 = coeff(2);
            let Some(q) = g2.divide_by_linear(&g1) else {
                return Ok(None);
            };
            q.scale(&(-field.from_int(d as i64 - 1).inverse()?))
        }
    };
    let t = shift_matrix(&field, nvars, &shift);
    let shifted = f.apply_linear_change(&t)?;
    for k in first_middle..d {
        if !shifted.coefficient_of_power(0, d - k).is_zero() {
            return Ok(None);
        }
    }
    let mut change = m.mul(&t)?;
    if kind == PointKind::Inner {
        let g1 = shifted.coefficient_of_power(0, d - 1);
        change = change.mul(&straighten_linear(&field, nvars, &g1)?)?;
    }
    Ok(Some((kind, change)))
}

/// True when the certificate produced from `w` sits at `p`.
pub fn belongs_to(x: &Hypersurface, w: &AutWitness, p: &[CycloNum]) -> Result<bool> {
    let Some(c) = certificate_from_automorphism(x, w)? else {
        return Ok(false);
    };
    same_point(&c.point, p)
}

/// Projective equality of points over possibly different fields.
pub fn same_point(p: &[CycloNum], q: &[CycloNum]) -> Result<bool> {
    if p.len() != q.len() || p.is_empty() {
        return Ok(false);
    }
    let field = p[0].field().enlarged_for(q[0].field().conductor())?;
    Ok(points_proj_eq(
        &lift_vector(p, &field)?,
        &lift_vector(q, &field)?,
    ))
}

/// The certificate at `h(p)` with generator `h g h^{-1}`.
pub fn transport_certificate(c: &GaloisCertificate, h: &AutWitness) -> Result<GaloisCertificate> {
    let field = c
        .generator
        .field()
        .enlarged_for(h.matrix.field().conductor())?;
    let hm = h.matrix.lift(&field)?;
    let g = c.generator.lift(&field)?;
    let p = lift_vector(&c.point, &field)?;
    Ok(GaloisCertificate {
        point: normalize_point(&hm.mul_vec(&p)?)?,
        kind: c.kind,
        generator: g.conjugate_by(&hm)?,
        group_order: c.group_order,
        ratio: c.ratio.embed_lift(&field)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommuteVerdict {
    Commutes,
    DoesNotCommute,
    /// `k` moves the Galois point, so nothing is claimed.
    NotApplicable,
}

impl CommuteVerdict {
    /// Vacuous truth for the not-applicable case.
    pub fn holds(self) -> bool {
        !matches!(self, CommuteVerdict::DoesNotCommute)
    }
}

/// An automorphism fixing a Galois point commutes with its generator.
pub fn commute_check(c: &GaloisCertificate, k: &AutWitness) -> Result<CommuteVerdict> {
    let field = c
        .generator
        .field()
        .enlarged_for(k.matrix.field().conductor())?;
    let km = k.matrix.lift(&field)?;
    let g = c.generator.lift(&field)?;
    if !km.fixes_point(&lift_vector(&c.point, &field)?)? {
        return Ok(CommuteVerdict::NotApplicable);
    }
    Ok(if km.mul(&g)?.proj_eq(&g.mul(&km)?) {
        CommuteVerdict::Commutes
    } else {
        CommuteVerdict::DoesNotCommute
    })
}

/// Upper bounds on the numbers of inner and outer Galois points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisBounds {
    pub inner_max: u32,
    pub outer_max: u32,
    /// Exact value sets where they are known.
    pub inner_values: Option<Vec<u32>>,
    pub outer_values: Option<Vec<u32>>,
}

pub fn galois_point_bounds(n: usize, d: u32) -> GaloisBounds {
    let half = (n / 2) as u32 + 1;
    match (n, d) {
        (1, 4) => GaloisBounds {
            inner_max: 4,
            outer_max: 3,
            inner_values: Some(vec![0, 1, 4]),
            outer_values: Some(vec![0, 1, 3]),
        },
        (1, _) => GaloisBounds {
            inner_max: 1,
            outer_max: 3,
            inner_values: Some(vec![0, 1]),
            outer_values: Some(vec![0, 1, 3]),
        },
        (2, 4) => GaloisBounds {
            inner_max: 8,
            outer_max: 4,
            inner_values: Some(vec![0, 1, 2, 4, 8]),
            outer_values: None,
        },
        (_, 4) => GaloisBounds {
            inner_max: 4 * half,
            outer_max: n as u32 + 2,
            inner_values: None,
            outer_values: None,
        },
        _ => GaloisBounds {
            inner_max: half,
            outer_max: n as u32 + 2,
            inner_values: None,
            outer_values: None,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointVerdict {
    Galois(PointKind),
    NotGalois,
    Singular(u32),
}

impl fmt::Display for PointVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointVerdict::Galois(k) => write!(f, "{k}"),
            PointVerdict::NotGalois => write!(f, "none"),
            PointVerdict::Singular(m) => write!(f, "singular (multiplicity {m})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PointCount {
    pub inner: u32,
    pub outer: u32,
    pub per_point: Vec<(Vec<CycloNum>, PointVerdict)>,
    pub bounds: GaloisBounds,
}

/// Runs the point test on every distinct candidate and checks the counts
/// against the bounds, which are theorems: exceeding one is an error.
pub fn count_certified_points(
    x: &Hypersurface,
    candidates: &[Vec<CycloNum>],
) -> Result<PointCount> {
    let d = require_degree(x)?;
    let mut distinct: Vec<Vec<CycloNum>> = Vec::new();
    for c in candidates {
        let c = normalize_point(c)?;
        let mut dup = false;
        for e in &distinct {
            if same_point(e, &c)? {
                dup = true;
                break;
            }
        }
        if !dup {
            distinct.push(c);
        }
    }
    let mut per_point = Vec::with_capacity(distinct.len());
    let (mut inner, mut outer) = (0, 0);
    for p in distinct {
        let verdict = match galois_at_point(x, &p) {
            Ok(Some((PointKind::Inner, _))) => {
                inner += 1;
                PointVerdict::Galois(PointKind::Inner)
            }
            Ok(Some((PointKind::Outer, _))) => {
                outer += 1;
                PointVerdict::Galois(PointKind::Outer)
            }
            Ok(None) => PointVerdict::NotGalois,
            Err(Error::SingularPoint(m)) => PointVerdict::Singular(m),
            Err(e) => return Err(e),
        };
        per_point.push((p, verdict));
    }
    let bounds = galois_point_bounds(x.n(), d);
    if inner > bounds.inner_max {
        return Err(Error::BoundViolation(format!(
            "{inner} inner Galois points, bound {}",
            bounds.inner_max
        )));
    }
    if outer > bounds.outer_max {
        return Err(Error::BoundViolation(format!(
            "{outer} outer Galois points, bound {}",
            bounds.outer_max
        )));
    }
    Ok(PointCount {
        inner,
        outer,
        per_point,
        bounds,
    })
}
