//! Seeded random instances: hypersurfaces in normal form for a Galois point,
//! moved by a random coordinate change, and plane curves with a diagonal
//! automorphism of order `d-1` or `d`.

use std::time::Duration;

use galois_core::exactnum::{CycloField, CycloNum};
use galois_core::hypersurface::{Hypersurface, SmoothOptions, SmoothStatus};
use galois_core::polyring::HomogPoly;
use galois_core::projlin::{PointKind, ProjMatrix};
use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::{AutExpect, Expectations, InstanceFile, SCHEMA};
use crate::CliError;

/// All exponent vectors of degree `d` in `nvars` variables, lexicographic.
pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

fn nonzero_coeff<R: Rng>(rng: &mut R, max: i64) -> i64 {
    let c = rng.gen_range(1..=max);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

/// Random invertible matrix with entries in `-2..=2`.
pub fn random_change<R: Rng>(rng: &mut R, field: &CycloField, size: usize) -> ProjMatrix {
    loop {
        let rows = (0..size)
            .map(|_| {
                (0..size)
                    .map(|_| field.from_int(rng.gen_range(-2..=2)))
                    .collect()
            })
            .collect();
        if let Ok(m) = ProjMatrix::from_rows(rows) {
            return m;
        }
    }
}

/// A hypersurface with a known Galois point and the automorphism belonging to it.
#[derive(Clone, Debug)]
pub struct NormalFormInstance {
    pub n: usize,
    pub d: u32,
    pub kind: PointKind,
    pub normal_form: HomogPoly,
    pub change: ProjMatrix,
    pub x: Hypersurface,
    pub generator: ProjMatrix,
    pub point: Vec<CycloNum>,
}

/// `X_1 X_0^{d-1} + F` (inner) or `X_0^d + F` (outer) with
/// `F = sum c_i X_i^d + (a few random terms)` in `X_1..X_{n+1}`, moved by a
/// random change `h`: the new equation is `G(h^{-1} X)`, the point `h e_0`.
pub fn normal_form_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    d: u32,
    kind: PointKind,
) -> Result<NormalFormInstance, CliError> {
    let root = match kind {
        PointKind::Inner => d - 1,
        PointKind::Outer => d,
    };
    let field = CycloField::new(root)?;
    let nv = n + 2;
    let mut terms: Vec<(Vec<u32>, CycloNum)> = Vec::new();
    let mut lead = vec![0u32; nv];
    match kind {
        PointKind::Inner => {
            lead[0] = d - 1;
            lead[1] = 1;
        }
        PointKind::Outer => lead[0] = d,
    }
    terms.push((lead, field.one()));
    for i in 1..nv {
        let mut e = vec![0u32; nv];
        e[i] = d;
        terms.push((e, field.from_int(rng.gen_range(1..=3))));
    }
    let rest: Vec<Vec<u32>> = monomials(nv - 1, d)
        .into_iter()
        .filter(|m| m.iter().all(|&e| e < d))
        .map(|m| {
            let mut e = vec![0u32];
            e.extend(m);
            e
        })
        .collect();
    let extra = rng.gen_range(0..=3usize).min(rest.len());
    for m in rest.choose_multiple(rng, extra) {
        terms.push((m.clone(), field.from_int(nonzero_coeff(rng, 3))));
    }
    let normal_form = HomogPoly::from_terms(&field, nv, Some(d), terms)?;
    let change = random_change(rng, &field, nv);
    let f = normal_form.apply_linear_change(&change.inverse()?)?;
    let x = Hypersurface::new(n, f)?;
    let mut diag = vec![field.one(); nv];
    diag[0] = field.root_of_unity(root, 1)?;
    let generator = ProjMatrix::diagonal(&diag)?.conjugate_by(&change)?;
    let point = change.column(0);
    Ok(NormalFormInstance {
        n,
        d,
        kind,
        normal_form,
        change,
        x,
        generator,
        point,
    })
}

/// A smooth plane curve invariant under `diag(z^a, z^b, 1)`, `z` a
/// primitive `order`-th root of unity, optionally moved by a random change.
#[derive(Clone, Debug)]
pub struct CyclicCurveInstance {
    pub d: u32,
    pub order: u32,
    pub exponents: (u32, u32),
    pub x: Hypersurface,
    pub generator: ProjMatrix,
}

/// One attempt; `None` when the sampled curve is not certified smooth.
pub fn cyclic_curve_instance<R: Rng>(
    rng: &mut R,
    d: u32,
    order: u32,
    move_coordinates: bool,
) -> Result<Option<CyclicCurveInstance>, CliError> {
    let field = CycloField::new(order)?;
    let (a, b) = loop {
        let a = rng.gen_range(0..order);
        let b = rng.gen_range(0..order);
        if num_gcd(num_gcd(a, b), order) == 1 {
            break (a, b);
        }
    };
    let weight = |m: &[u32]| (a as u64 * m[0] as u64 + b as u64 * m[1] as u64) % order as u64;
    let all = monomials(3, d);
    let chars: Vec<u64> = all.iter().map(|m| weight(m)).collect();
    let c = *chars.choose(rng).expect("nonempty");
    let invariant: Vec<&Vec<u32>> = all.iter().filter(|m| weight(m) == c).collect();
    // each variable needs X_i^d or X_i^{d-1} X_j for smoothness
    for i in 0..3 {
        if !invariant.iter().any(|m| m[i] >= d - 1) {
            return Ok(None);
        }
    }
    let mut terms = Vec::new();
    for m in &invariant {
        let keep = m.iter().any(|&e| e >= d - 1) || rng.gen_bool(0.4);
        if keep {
            terms.push(((*m).clone(), field.from_int(nonzero_coeff(rng, 3))));
        }
    }
    let f = HomogPoly::from_terms(&field, 3, Some(d), terms)?;
    let x = Hypersurface::new(1, f.clone())?;
    let status = x.is_smooth(&SmoothOptions {
        deadline: Some(Duration::from_secs(10)),
        allow_high_degree: false,
    })?;
    if status != SmoothStatus::CertifiedSmooth {
        return Ok(None);
    }
    let diag = ProjMatrix::diagonal(&[
        field.root_of_unity(order, a as i64)?,
        field.root_of_unity(order, b as i64)?,
        field.one(),
    ])?;
    let (x, generator) = if move_coordinates {
        let h = random_change(rng, &field, 3);
        let moved = Hypersurface::new(1, f.apply_linear_change(&h.inverse()?)?)?;
        (moved, diag.conjugate_by(&h)?)
    } else {
        (x, diag)
    };
    Ok(Some(CyclicCurveInstance {
        d,
        order,
        exponents: (a, b),
        x,
        generator,
    }))
}

fn num_gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn render_matrix(m: &ProjMatrix) -> Vec<Vec<String>> {
    m.row_vectors()
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect())
        .collect()
}

/// Instance file for a normal-form instance, expecting a certificate of the
/// right kind at the transported point.
pub fn normal_form_file(name: &str, inst: &NormalFormInstance) -> InstanceFile {
    let mut automorphisms = IndexMap::new();
    automorphisms.insert("g".to_string(), render_matrix(&inst.generator));
    let mut candidates = IndexMap::new();
    candidates.insert(
        "p".to_string(),
        inst.point.iter().map(|c| c.to_string()).collect(),
    );
    let mut aut = IndexMap::new();
    aut.insert(
        "g".to_string(),
        AutExpect {
            invariant: Some(true),
            order: Some(match inst.kind {
                PointKind::Inner => inst.d as u64 - 1,
                PointKind::Outer => inst.d as u64,
            }),
            certificate: Some(inst.kind.as_str().to_string()),
            certificate_point: Some(inst.point.iter().map(|c| c.to_string()).collect()),
            ..AutExpect::default()
        },
    );
    let mut points = IndexMap::new();
    points.insert("p".to_string(), inst.kind.as_str().to_string());
    InstanceFile {
        schema: SCHEMA.to_string(),
        name: name.to_string(),
        description: Some(format!(
            "random {} normal form, n = {}, d = {}, moved by a random coordinate change",
            inst.kind, inst.n, inst.d
        )),
        n: inst.n,
        d: inst.d,
        field: inst.x.field().conductor(),
        polynomial: inst.x.polynomial().to_string(),
        smooth_deadline: None,
        automorphisms,
        candidates,
        groups: IndexMap::new(),
        expect: Some(Expectations {
            automorphisms: aut,
            points,
            ..Expectations::default()
        }),
    }
}

/// Deterministic list of `count` normal-form instance files from `seed`,
/// cycling through both kinds, `n` in 1..=3 and `d` in 4..=7.
pub fn normal_form_family(
    seed: u64,
    count: usize,
) -> Result<Vec<(InstanceFile, NormalFormInstance)>, CliError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let kind = if i % 2 == 0 {
            PointKind::Inner
        } else {
            PointKind::Outer
        };
        let n = 1 + (i / 2) % 3;
        let d = 4 + ((i / 6) % 4) as u32;
        let inst = normal_form_instance(&mut rng, n, d, kind)?;
        let file = normal_form_file(&format!("random-{seed}-{i}"), &inst);
        out.push((file, inst));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(3, 4).len(), 15);
        assert_eq!(monomials(4, 2).len(), 10);
        assert!(monomials(3, 2).iter().all(|m| m.iter().sum::<u32>() == 2));
    }

    #[test]
    fn normal_form_instance_is_consistent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let inst = normal_form_instance(&mut rng, 2, 5, PointKind::Inner).unwrap();
        let w = inst
            .x
            .verify_automorphism(&inst.generator)
            .unwrap()
            .unwrap();
        assert_eq!(w.order, 4);
        assert!(inst.x.contains_point(&inst.point).unwrap());
    }

    #[test]
    fn family_is_deterministic() {
        let a = normal_form_family(3, 6).unwrap();
        let b = normal_form_family(3, 6).unwrap();
        for ((fa, _), (fb, _)) in a.iter().zip(&b) {
            assert_eq!(fa.polynomial, fb.polynomial);
        }
    }
}
