//! JSON fragments shared by the single commands and the corpus runner, so
//! that a command re-run reproduces the matching part of a corpus report.

use std::time::Duration;

use galois_core::exactnum::CycloNum;
use galois_core::fixlocus::{
    fixed_locus, predicate_theorem10, predicate_theorem11, predicate_theorem9, ComponentKind,
    FixedLocusReport, PredicateOutcome,
};
use galois_core::galois::{
    certificate_from_automorphism, count_certified_points, galois_at_point, galois_point_bounds,
    same_point, GaloisBounds, GaloisCertificate, PointCount, PointVerdict,
};
use galois_core::hypersurface::{AutWitness, Hypersurface, SmoothOptions, SmoothStatus};
use galois_core::planecurves::{
    classify_table1, group_closure, n_of_g, rh_quotient_genus, theorem21_consequence, AbelianCheck,
    GroupClosure,
};
use galois_core::projlin::{unit_vector, ProjMatrix};
use galois_core::Error;
use serde_json::{json, Value};

use crate::instance::Instance;
use crate::CliError;

pub const CLOSURE_BOUND: usize = 10_000;

pub fn scalar(c: &CycloNum) -> Value {
    Value::String(c.to_string())
}

pub fn point(p: &[CycloNum]) -> Value {
    Value::Array(p.iter().map(scalar).collect())
}

pub fn matrix(m: &ProjMatrix) -> Value {
    Value::Array(m.row_vectors().iter().map(|r| point(r)).collect())
}

pub fn smoothness(
    x: &Hypersurface,
    deadline: Option<Duration>,
) -> Result<(SmoothStatus, Value), CliError> {
    let status = x.is_smooth(&SmoothOptions {
        deadline,
        allow_high_degree: false,
    })?;
    let witness = match &status {
        SmoothStatus::CertifiedSingular { witness: Some(w) } => point(w),
        _ => Value::Null,
    };
    let v = json!({ "status": status.label(), "witness": witness });
    Ok((status, v))
}

pub fn certificate(c: &GaloisCertificate) -> Value {
    json!({
        "point": point(&c.point),
        "kind": c.kind.as_str(),
        "group_order": c.group_order,
        "ratio": scalar(&c.ratio),
        "generator": matrix(&c.generator),
    })
}

pub fn witness_or_none(x: &Hypersurface, a: &ProjMatrix) -> Result<Option<AutWitness>, CliError> {
    Ok(x.verify_automorphism(a)?)
}

pub fn verification(w: Option<&AutWitness>) -> Value {
    match w {
        Some(w) => json!({ "invariant": true, "lambda": scalar(&w.lambda), "order": w.order }),
        None => json!({ "invariant": false, "lambda": Value::Null, "order": Value::Null }),
    }
}

pub fn fixed_locus_json(r: &FixedLocusReport) -> Value {
    let comps: Vec<Value> = r
        .components
        .iter()
        .map(|c| {
            let mut v = json!({
                "eigenvalue": scalar(&c.eigenvalue),
                "eigenspace_dim": c.basis.len(),
                "kind": c.kind.label(),
                "dimension": c.kind.dimension(),
            });
            if let ComponentKind::FinitePoints { count, points } = &c.kind {
                v["count"] = json!(count);
                v["points"] = match points {
                    Some(ps) => Value::Array(ps.iter().map(|p| point(p)).collect()),
                    None => Value::Null,
                };
            }
            v
        })
        .collect();
    json!({
        "field": r.field.conductor(),
        "cardinality": match r.total_finite_count { Some(k) => json!(k), None => json!("infinite") },
        "max_component_dim": r.max_component_dim,
        "components": comps,
    })
}

pub fn predicate_json(p: &PredicateOutcome, which: &str) -> Value {
    json!({
        "criterion": which,
        "verdict": p.verdict.label(),
        "detail": p.detail,
        "certificate_found": p.certificate.is_some(),
        "agrees": p.agrees(),
    })
}

/// The fixed-locus criterion that applies to `w`, if any.
pub fn predicate(
    x: &Hypersurface,
    w: &AutWitness,
    deadline: Option<Duration>,
) -> Result<Option<Value>, CliError> {
    let d = x.degree() as u64;
    if d < 4 {
        return Ok(None);
    }
    let out = if x.n() == 1 {
        if w.order == d || w.order == d - 1 {
            Some((predicate_theorem9(x, w)?, "plane_curve"))
        } else {
            None
        }
    } else if w.order == d || w.order == d - 1 {
        Some((predicate_theorem10(x, w, deadline)?, "codimension_one"))
    } else if w.order.is_multiple_of(d - 1) && w.order / (d - 1) >= 2 {
        Some((predicate_theorem11(x, w)?, "multiple_of_d_minus_1"))
    } else {
        None
    };
    Ok(out.map(|(p, which)| predicate_json(&p, which)))
}

pub fn table1(x: &Hypersurface, a: &ProjMatrix) -> Result<Value, CliError> {
    if x.n() != 1 || !a.is_diagonal() {
        return Ok(Value::Null);
    }
    let ng = n_of_g(x, a)?;
    let rows = classify_table1(x, a)?;
    Ok(json!({
        "n_of_g": ng,
        "rows": rows.iter().map(|r| json!({
            "row": r.row,
            "n_g": r.n_g,
            "divisor": r.divisor_constraint,
            "pattern": r.exponent_pattern,
        })).collect::<Vec<_>>(),
    }))
}

/// Everything computed for one automorphism.
pub fn automorphism_entry(
    inst: &Instance,
    name: &str,
    a: &ProjMatrix,
    deadline: Option<Duration>,
) -> Result<Value, CliError> {
    let x = &inst.x;
    let w = witness_or_none(x, a)?;
    let mut v = json!({ "name": name, "matrix": matrix(a) });
    let ver = verification(w.as_ref());
    for (k, val) in ver.as_object().expect("object") {
        v[k] = val.clone();
    }
    let Some(w) = w else {
        return Ok(v);
    };
    v["certificate"] = detect(x, &w)?;
    v["fixed_locus"] = fixed_locus_json(&fixed_locus(x, &w)?);
    v["table1"] = table1(x, a)?;
    v["predicate"] = predicate(x, &w, deadline)?.unwrap_or(Value::Null);
    Ok(v)
}

pub fn detect(x: &Hypersurface, w: &AutWitness) -> Result<Value, CliError> {
    if x.degree() < 4 {
        return Ok(Value::Null);
    }
    Ok(certificate_from_automorphism(x, w)?
        .as_ref()
        .map(certificate)
        .unwrap_or(Value::Null))
}

/// Powers `g^k`, `1 <= k < ord(g)`, that pass the shape test.
pub fn certified_powers(x: &Hypersurface, w: &AutWitness) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    let mut power = w.matrix.clone();
    for k in 1..w.order {
        let pw = AutWitness {
            matrix: power.clone(),
            lambda: w.lambda.pow(k),
            order: w.order / num_gcd(w.order, k),
        };
        if certificate_from_automorphism(x, &pw)?.is_some() {
            out.push(k);
        }
        power = power.mul(&w.matrix)?.normalized();
    }
    Ok(out)
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

pub fn point_verdict(x: &Hypersurface, p: &[CycloNum]) -> Result<PointVerdict, CliError> {
    match galois_at_point(x, p) {
        Ok(Some((k, _))) => Ok(PointVerdict::Galois(k)),
        Ok(None) => Ok(PointVerdict::NotGalois),
        Err(Error::SingularPoint(m)) => Ok(PointVerdict::Singular(m)),
        Err(e) => Err(e.into()),
    }
}

pub fn verdict_label(v: &PointVerdict) -> String {
    match v {
        PointVerdict::Galois(k) => k.as_str().to_string(),
        PointVerdict::NotGalois => "none".into(),
        PointVerdict::Singular(m) => format!("singular_{m}"),
    }
}

pub fn point_entry(x: &Hypersurface, name: &str, p: &[CycloNum]) -> Result<Value, CliError> {
    let on_x = x.contains_point(p)?;
    let v = point_verdict(x, p)?;
    let change = match galois_at_point(x, p) {
        Ok(Some((_, m))) => matrix(&m),
        _ => Value::Null,
    };
    Ok(json!({
        "name": name,
        "point": point(p),
        "on_x": on_x,
        "verdict": verdict_label(&v),
        "normalizing_change": change,
    }))
}

/// Named candidates, the coordinate points and the isolated eigenpoints of
/// every automorphism.
pub fn candidate_set(
    inst: &Instance,
    extra: &[Vec<CycloNum>],
) -> Result<Vec<Vec<CycloNum>>, CliError> {
    let nv = inst.x.nvars();
    let mut out: Vec<Vec<CycloNum>> = inst.candidates.iter().map(|(_, p)| p.clone()).collect();
    out.extend(extra.iter().cloned());
    for i in 0..nv {
        out.push(unit_vector(&inst.field, nv, i));
    }
    for (_, a) in &inst.automorphisms {
        if a.monomial_permutation().is_none() {
            continue;
        }
        for pair in a.eigen_structure()?.pairs {
            if pair.multiplicity() == 1 {
                out.push(pair.basis[0].clone());
            }
        }
    }
    let mut distinct: Vec<Vec<CycloNum>> = Vec::new();
    for p in out {
        let mut dup = false;
        for q in &distinct {
            if same_point(q, &p)? {
                dup = true;
                break;
            }
        }
        if !dup {
            distinct.push(p);
        }
    }
    Ok(distinct)
}

pub fn bounds_json(b: &GaloisBounds) -> Value {
    json!({
        "inner_max": b.inner_max,
        "outer_max": b.outer_max,
        "inner_values": b.inner_values,
        "outer_values": b.outer_values,
    })
}

pub fn counts(
    x: &Hypersurface,
    candidates: &[Vec<CycloNum>],
) -> Result<(PointCount, Value), CliError> {
    let c = count_certified_points(x, candidates)?;
    let per_point: Vec<Value> = c
        .per_point
        .iter()
        .map(|(p, v)| json!({ "point": point(p), "verdict": verdict_label(v) }))
        .collect();
    let v = json!({
        "candidates": c.per_point.len(),
        "inner": c.inner,
        "outer": c.outer,
        "bounds": bounds_json(&c.bounds),
        "within_bounds": bound_audit(&c).is_ok(),
        "per_point": per_point,
    });
    Ok((c, v))
}

/// Checks certified counts against the bounds: maxima always, exact value
/// sets where they are known.
pub fn bound_audit(c: &PointCount) -> Result<(), String> {
    let b = &c.bounds;
    if c.inner > b.inner_max {
        return Err(format!("{} inner points exceed {}", c.inner, b.inner_max));
    }
    if c.outer > b.outer_max {
        return Err(format!("{} outer points exceed {}", c.outer, b.outer_max));
    }
    if let Some(vals) = &b.inner_values {
        if !vals.contains(&c.inner) {
            return Err(format!("{} inner points, allowed {:?}", c.inner, vals));
        }
    }
    if let Some(vals) = &b.outer_values {
        if !vals.contains(&c.outer) {
            return Err(format!("{} outer points, allowed {:?}", c.outer, vals));
        }
    }
    Ok(())
}

pub fn bounds_for(x: &Hypersurface) -> Value {
    bounds_json(&galois_point_bounds(x.n(), x.degree()))
}

pub fn closure(inst: &Instance, gens: &[String]) -> Result<GroupClosure, CliError> {
    let ms = gens
        .iter()
        .map(|g| inst.automorphism(g).cloned())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(group_closure(&ms, CLOSURE_BOUND)?)
}

pub fn closure_json(g: &GroupClosure) -> Value {
    json!({
        "order": g.order(),
        "abelian": g.abelian,
        "cyclic": g.cyclic,
        "element_orders": g.element_orders,
    })
}

pub fn rh_json(x: &Hypersurface, g: &GroupClosure) -> Result<Value, CliError> {
    let rh = rh_quotient_genus(x, g)?;
    Ok(json!({
        "genus": rh.genus,
        "euler_term": rh.euler_term,
        "fixed_counts": rh.fixed_counts,
        "stabilizer_sum": rh.stabilizer_sum,
        "stabilizer_sum_by_points": rh.stabilizer_sum_by_points,
        "group_order": rh.group_order,
        "lhs": rh.lhs,
        "quotient_genus": rh.quotient_genus,
    }))
}

pub fn abelian_json(x: &Hypersurface, g: &GroupClosure) -> Result<Value, CliError> {
    if !g.abelian || x.n() != 1 {
        return Ok(Value::Null);
    }
    Ok(match theorem21_consequence(x, g)? {
        AbelianCheck::Pass {
            elementary_divisors,
        } => {
            json!({ "verdict": "pass", "elementary_divisors": elementary_divisors })
        }
        AbelianCheck::Fail { reason, element } => json!({
            "verdict": "fail",
            "reason": reason,
            "element": element.as_ref().map(matrix),
        }),
        AbelianCheck::NotApplicable => json!({ "verdict": "not_applicable" }),
    })
}

pub fn group_entry(inst: &Instance, name: &str, gens: &[String]) -> Result<Value, CliError> {
    let g = closure(inst, gens)?;
    let mut v = json!({ "name": name, "generators": gens });
    for (k, val) in closure_json(&g).as_object().expect("object") {
        v[k] = val.clone();
    }
    if inst.x.n() == 1 {
        v["riemann_hurwitz"] = rh_json(&inst.x, &g)?;
        v["abelian_check"] = abelian_json(&inst.x, &g)?;
    }
    Ok(v)
}
