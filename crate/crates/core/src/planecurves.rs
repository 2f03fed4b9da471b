//! Smooth plane curves: cyclic automorphism types, genus and quotient
//! genus, finite groups generated by automorphisms.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::exactnum::{conductor_containing, CycloField, CycloNum};
use crate::fixlocus::{fixed_locus, Cardinality};
use crate::hypersurface::Hypersurface;
use crate::projlin::{lift_vector, normalize_point, unit_vector, ProjMatrix};

fn require_curve(x: &Hypersurface) -> Result<()> {
    if x.n() != 1 {
        return Err(Error::Precondition(format!(
            "plane curve expected, n = {}",
            x.n()
        )));
    }
    Ok(())
}

/// Number of coordinate points on `X`; for a diagonal automorphism these
/// are exactly its fixed coordinate points.
pub fn n_of_g(x: &Hypersurface, a: &ProjMatrix) -> Result<u32> {
    require_curve(x)?;
    if !a.is_diagonal() {
        return Err(Error::UnsupportedShape("diagonal matrix expected".into()));
    }
    let f = x.field().clone();
    let mut count = 0;
    for i in 0..3 {
        if x.contains_point(&unit_vector(&f, 3, i))? {
            count += 1;
        }
    }
    Ok(count)
}

/// One row of the classification of cyclic automorphisms of smooth plane
/// curves by `n(g)`, the order `l`, and the diagonal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub row: u8,
    pub n_g: u32,
    pub divisor_constraint: &'static str,
    pub exponent_pattern: &'static str,
}

#[derive(Clone, Copy)]
enum Pattern {
    Any,
    /// `(s, t) = (u a, u b)` for a unit `u` mod `l`, with `a`, `b` given as
    /// functions of `d`.
    Scaled(fn(i64) -> (i64, i64)),
}

struct RowSpec {
    row: u8,
    n_g: u32,
    divisor: fn(u64) -> u64,
    divisor_text: &'static str,
    pattern: Pattern,
    pattern_text: &'static str,
}

const ROWS: [RowSpec; 8] = [
    RowSpec {
        row: 1,
        n_g: 0,
        divisor: |d| d,
        divisor_text: "d",
        pattern: Pattern::Any,
        pattern_text: "(s, t)",
    },
    RowSpec {
        row: 2,
        n_g: 1,
        divisor: |d| d - 1,
        divisor_text: "d-1",
        pattern: Pattern::Scaled(|_| (1, 0)),
        pattern_text: "(1, 0)",
    },
    RowSpec {
        row: 3,
        n_g: 1,
        divisor: |d| (d - 1) * d,
        divisor_text: "(d-1)d",
        pattern: Pattern::Scaled(|d| (1, 1 - d)),
        pattern_text: "(1, 1-d)",
    },
    RowSpec {
        row: 4,
        n_g: 2,
        divisor: |d| d - 1,
        divisor_text: "d-1",
        pattern: Pattern::Any,
        pattern_text: "(s, t)",
    },
    RowSpec {
        row: 5,
        n_g: 2,
        divisor: |d| (d - 1) * (d - 1),
        divisor_text: "(d-1)^2",
        pattern: Pattern::Scaled(|d| (1 - d, 1)),
        pattern_text: "(1-d, 1)",
    },
    RowSpec {
        row: 6,
        n_g: 2,
        divisor: |d| (d - 2) * d,
        divisor_text: "(d-2)d",
        pattern: Pattern::Scaled(|d| (1, 1 - d)),
        pattern_text: "(1, 1-d)",
    },
    RowSpec {
        row: 7,
        n_g: 3,
        divisor: |d| d - 1,
        divisor_text: "d-1",
        pattern: Pattern::Scaled(|_| (1, 0)),
        pattern_text: "(1, 0)",
    },
    RowSpec {
        row: 8,
        n_g: 3,
        divisor: |d| d * d - 3 * d + 3,
        divisor_text: "d^2-3d+3",
        pattern: Pattern::Scaled(|d| (1, d - 1)),
        pattern_text: "(1, d-1)",
    },
];

/// Exponent of `x` as a power of `zeta_l`, if `x` is an `l`-th root of unity.
fn exponent_mod(x: &CycloNum, l: u64) -> Option<u64> {
    let (m, j) = x.recognize_root_of_unity()?;
    let m = m as u64;
    if !l.is_multiple_of(m) {
        return None;
    }
    Some(j as u64 * (l / m) % l)
}

fn pattern_matches(s: u64, t: u64, l: u64, a: i64, b: i64) -> bool {
    let li = l as i64;
    let (a, b) = (a.rem_euclid(li) as u64, b.rem_euclid(li) as u64);
    (1..l.max(2))
        .chain(std::iter::once(0).filter(|_| l == 1))
        .any(|u| num_integer::gcd(u, l) == 1 && (u * a) % l == s && (u * b) % l == t)
}

/// All rows of the classification satisfied by the diagonal automorphism
/// `a`, over all orderings of the coordinates.
pub fn classify_table1(x: &Hypersurface, a: &ProjMatrix) -> Result<Vec<Table1Row>> {
    require_curve(x)?;
    let d = x.degree() as u64;
    if d < 4 {
        return Err(Error::Precondition(format!("degree {d} < 4")));
    }
    let ng = n_of_g(x, a)?;
    let l = a.projective_order(crate::hypersurface::DEFAULT_ORDER_BOUND)?;
    let diag = a.diagonal_entries();
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut exps: Vec<(u64, u64)> = Vec::new();
    for p in perms {
        let inv = diag[p[2]].inverse()?;
        let s = exponent_mod(&(&diag[p[0]] * &inv), l);
        let t = exponent_mod(&(&diag[p[1]] * &inv), l);
        match (s, t) {
            (Some(s), Some(t)) => exps.push((s, t)),
            _ => {
                return Err(Error::Inconsistency(
                    "diagonal ratios are not roots of unity of the projective order".into(),
                ))
            }
        }
    }
    let mut rows = Vec::new();
    for spec in &ROWS {
        if spec.n_g != ng || (spec.divisor)(d) % l != 0 {
            continue;
        }
        let ok = match spec.pattern {
            Pattern::Any => true,
            Pattern::Scaled(f) => {
                let (pa, pb) = f(d as i64);
                exps.iter().any(|&(s, t)| pattern_matches(s, t, l, pa, pb))
            }
        };
        if ok {
            rows.push(Table1Row {
                row: spec.row,
                n_g: spec.n_g,
                divisor_constraint: spec.divisor_text,
                exponent_pattern: spec.pattern_text,
            });
        }
    }
    if rows.is_empty() {
        return Err(Error::TheoremViolation(format!(
            "no classification row fits n(g) = {ng}, order {l}, d = {d}"
        )));
    }
    Ok(rows)
}

/// Genus of a smooth plane curve of degree `d`.
pub fn genus_smooth_plane_curve(d: u32) -> i64 {
    let d = d as i64;
    (d - 1) * (d - 2) / 2
}

/// A finite group of projective transformations given by its elements.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    pub field: CycloField,
    /// Normalized elements, identity first.
    pub elements: Vec<ProjMatrix>,
    pub generators: Vec<ProjMatrix>,
    pub element_orders: Vec<u64>,
    pub abelian: bool,
    pub cyclic: bool,
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Breadth-first closure of the generators under multiplication, modulo scalars.
pub fn group_closure(generators: &[ProjMatrix], bound: usize) -> Result<GroupClosure> {
    let first = generators
        .first()
        .ok_or_else(|| Error::Precondition("at least one generator required".into()))?;
    let size = first.size();
    let mut conductor = 1;
    for g in generators {
        if g.size() != size {
            return Err(Error::DimensionMismatch(
                "generators of different sizes".into(),
            ));
        }
        conductor = conductor_containing(conductor, g.field().conductor());
    }
    let field = CycloField::new(conductor)?;
    let gens: Vec<ProjMatrix> = generators
        .iter()
        .map(|g| g.lift(&field).map(|m| m.normalized()))
        .collect::<Result<_>>()?;
    let identity = ProjMatrix::identity(&field, size);
    let mut index: HashMap<ProjMatrix, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let prod = elements[i].mul(g)?.normalized();
            if index.contains_key(&prod) {
                continue;
            }
            if elements.len() >= bound {
                return Err(Error::ClosureExceedsBound(bound));
            }
            index.insert(prod.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(prod);
        }
    }
    let order = elements.len() as u64;
    let element_orders = elements
        .iter()
        .map(|e| e.projective_order(order))
        .collect::<Result<Vec<_>>>()?;
    if let Some(o) = element_orders.iter().find(|&&o| !order.is_multiple_of(o)) {
        return Err(Error::Inconsistency(format!(
            "element order {o} does not divide {order}"
        )));
    }
    let abelian = gens.iter().all(|a| {
        gens.iter()
            .all(|b| a.mul(b).unwrap().proj_eq(&b.mul(a).unwrap()))
    });
    let cyclic = element_orders.contains(&order);
    Ok(GroupClosure {
        field,
        elements,
        generators: gens,
        element_orders,
        abelian,
        cyclic,
    })
}

/// Terms of the Riemann–Hurwitz relation for `X -> X/G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannHurwitz {
    pub genus: i64,
    pub euler_term: i64,
    /// `sum_x (|G_x| - 1)`, from the fixed loci of the non-identity elements.
    pub stabilizer_sum: u64,
    /// The same sum from explicit point stabilizers, when all fixed points
    /// could be written down.
    pub stabilizer_sum_by_points: Option<u64>,
    pub fixed_counts: Vec<u32>,
    pub group_order: u64,
    pub lhs: i64,
    pub quotient_genus: i64,
}

/// Solves `2 - 2g(X) + sum_x (|G_x| - 1) = |G| (2 - 2g(X/G))` for `g(X/G)`.
pub fn rh_quotient_genus(x: &Hypersurface, group: &GroupClosure) -> Result<RiemannHurwitz> {
    require_curve(x)?;
    let genus = genus_smooth_plane_curve(x.degree());
    let mut fixed_counts = Vec::new();
    let mut sum: u64 = 0;
    let mut all_points: Vec<Vec<Vec<CycloNum>>> = Vec::new();
    let mut points_known = true;
    for e in group.elements.iter().skip(1) {
        let w = x.verify_automorphism(e)?.ok_or_else(|| {
            Error::Precondition("group element is not an automorphism of X".into())
        })?;
        let locus = fixed_locus(x, &w)?;
        let count = match locus.cardinality() {
            Cardinality::Finite(k) => k,
            Cardinality::Infinite => {
                return Err(Error::Inconsistency(
                    "a non-identity automorphism fixes a curve component".into(),
                ))
            }
        };
        fixed_counts.push(count);
        sum += count as u64;
        match locus.points() {
            Some(p) => all_points.push(p),
            None => points_known = false,
        }
    }
    let by_points = if points_known {
        Some(stabilizer_sum_from_points(&all_points)?)
    } else {
        None
    };
    if let Some(b) = by_points {
        if b != sum {
            return Err(Error::Inconsistency(format!(
                "stabilizer sum {sum} from fixed loci, {b} from points"
            )));
        }
    }
    let euler_term = 2 - 2 * genus;
    let lhs = euler_term + sum as i64;
    let order = group.order() as i64;
    if lhs % order != 0 || (2 - lhs / order) % 2 != 0 || 2 - lhs / order < 0 {
        return Err(Error::NonIntegralGenus(format!("{lhs} = {order} (2 - 2g)")));
    }
    Ok(RiemannHurwitz {
        genus,
        euler_term,
        stabilizer_sum: sum,
        stabilizer_sum_by_points: by_points,
        fixed_counts,
        group_order: order as u64,
        lhs,
        quotient_genus: (2 - lhs / order) / 2,
    })
}

/// `sum_x (|G_x| - 1)` where each list holds the fixed points of one
/// non-identity element.
fn stabilizer_sum_from_points(lists: &[Vec<Vec<CycloNum>>]) -> Result<u64> {
    let mut conductor = 1;
    for p in lists.iter().flatten() {
        if let Some(c) = p.first() {
            conductor = conductor_containing(conductor, c.field().conductor());
        }
    }
    let field = CycloField::new(conductor)?;
    let mut stabilizers: HashMap<Vec<CycloNum>, u64> = HashMap::new();
    for list in lists {
        for p in list {
            let q = normalize_point(&lift_vector(p, &field)?)?;
            *stabilizers.entry(q).or_default() += 1;
        }
    }
    Ok(stabilizers.values().sum())
}

/// Outcome of the abelian-group check for plane curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbelianCheck {
    /// Exponent divides `d` and every Sylow subgroup has rank at most 2.
    Pass { elementary_divisors: Vec<u64> },
    Fail {
        reason: String,
        element: Option<ProjMatrix>,
    },
    /// Cyclic groups are outside the statement.
    NotApplicable,
}

/// For a non-cyclic abelian group of automorphisms of a smooth plane curve of
/// degree `d`, checks that it embeds in `(Z/d)^2`: element orders divide `d`
/// and the elementary-divisor decomposition has rank at most 2.
pub fn theorem21_consequence(x: &Hypersurface, group: &GroupClosure) -> Result<AbelianCheck> {
    require_curve(x)?;
    if !group.abelian {
        return Err(Error::Precondition("abelian group required".into()));
    }
    if group.cyclic {
        return Ok(AbelianCheck::NotApplicable);
    }
    let d = x.degree() as u64;
    for (e, &o) in group.elements.iter().zip(&group.element_orders) {
        if !d.is_multiple_of(o) {
            return Ok(AbelianCheck::Fail {
                reason: format!("element of order {o} does not divide d = {d}"),
                element: Some(e.clone()),
            });
        }
    }
    let divisors = elementary_divisors(&group.element_orders);
    let mut by_prime: HashMap<u64, usize> = HashMap::new();
    for q in &divisors {
        *by_prime.entry(smallest_prime_factor(*q)).or_default() += 1;
    }
    if let Some((p, r)) = by_prime.iter().find(|(_, &r)| r > 2) {
        return Ok(AbelianCheck::Fail {
            reason: format!("{p}-rank {r} exceeds 2"),
            element: None,
        });
    }
    Ok(AbelianCheck::Pass {
        elementary_divisors: divisors,
    })
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|p| n.is_multiple_of(*p)).unwrap_or(n)
}

/// Elementary divisors (prime powers) of a finite abelian group from the
/// multiset of its element orders.
pub fn elementary_divisors(orders: &[u64]) -> Vec<u64> {
    let n = orders.len() as u64;
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if !m.is_multiple_of(p) {
            p += 1;
            continue;
        }
        while m.is_multiple_of(p) {
            m /= p;
        }
        // c_k = log_p |G[p^k]|, and #factors of exponent >= k is c_k - c_{k-1}
        let mut prev = 0u32;
        let mut counts = Vec::new();
        let mut pk = p;
        loop {
            let size = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let c = log_exact(size, p);
            if c == prev {
                break;
            }
            counts.push(c - prev);
            prev = c;
            pk *= p;
        }
        // counts[k-1] = number of cyclic factors of exponent >= k
        for k in 0..counts.len() {
            let at_least = counts[k];
            let more = counts.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(at_least - more) {
                out.push(p.pow(k as u32 + 1));
            }
        }
        p += 1;
    }
    out.sort_unstable();
    out
}

fn log_exact(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x > 1 && x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_polynomial;

    fn curve(s: &str, conductor: u32) -> Hypersurface {
        let f = CycloField::new(conductor).unwrap();
        Hypersurface::new(1, parse_polynomial(s, 3, &f).unwrap()).unwrap()
    }

    fn diag(f: &CycloField, m: u32, exps: &[i64]) -> ProjMatrix {
        ProjMatrix::diagonal(
            &exps
                .iter()
                .map(|&j| f.root_of_unity(m, j).unwrap())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn rows(v: &[Table1Row]) -> Vec<u8> {
        v.iter().map(|r| r.row).collect()
    }

    #[test]
    fn n_of_g_examples() {
        let x = curve("x0^4 + x1^4 + x2^4", 4);
        let f = x.field().clone();
        assert_eq!(n_of_g(&x, &diag(&f, 4, &[1, 0, 0])).unwrap(), 0);
        let y = curve("x2^6 + x0^5*x2 + x1^5*x2 + x0^3*x1^3", 5);
        assert_eq!(n_of_g(&y, &diag(y.field(), 5, &[3, 2, 0])).unwrap(), 2);
        let z = curve("x1*x0^3 + x1^4 + x2^4", 3);
        assert_eq!(n_of_g(&z, &diag(z.field(), 3, &[1, 0, 0])).unwrap(), 1);
        let swap = ProjMatrix::permutation(&f, &[1, 0, 2]).unwrap();
        assert!(matches!(n_of_g(&x, &swap), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn classification_examples() {
        let x = curve("x0^4 + x1^4 + x2^4", 4);
        assert_eq!(
            rows(&classify_table1(&x, &diag(x.field(), 4, &[1, 0, 0])).unwrap()),
            vec![1]
        );
        let y = curve("x2^6 + x0^5*x2 + x1^5*x2 + x0^3*x1^3", 5);
        assert_eq!(
            rows(&classify_table1(&y, &diag(y.field(), 5, &[3, 2, 0])).unwrap()),
            vec![4]
        );
        let z = curve("x1*x0^3 + x1^4 + x2^4", 3);
        assert!(rows(&classify_table1(&z, &diag(z.field(), 3, &[1, 0, 0])).unwrap()).contains(&2));
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus_smooth_plane_curve(4), 3);
        assert_eq!(genus_smooth_plane_curve(3), 1);
        assert_eq!(genus_smooth_plane_curve(1), 0);
    }

    #[test]
    fn klein_four_on_the_fermat_quartic() {
        let x = curve("x0^4 + x1^4 + x2^4", 8);
        let f = x.field().clone();
        let g = group_closure(&[diag(&f, 2, &[1, 0, 0]), diag(&f, 2, &[0, 1, 0])], 1000).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.abelian);
        assert!(!g.cyclic);
        let rh = rh_quotient_genus(&x, &g).unwrap();
        assert_eq!(rh.fixed_counts, vec![4, 4, 4]);
        assert_eq!(rh.euler_term, -4);
        assert_eq!(rh.stabilizer_sum, 12);
        assert_eq!(rh.stabilizer_sum_by_points, Some(12));
        assert_eq!(rh.lhs, 8);
        assert_eq!(rh.quotient_genus, 0);
        assert_eq!(
            theorem21_consequence(&x, &g).unwrap(),
            AbelianCheck::Pass {
                elementary_divisors: vec![2, 2]
            }
        );
    }

    #[test]
    fn cyclic_group_on_the_fermat_quartic() {
        let x = curve("x0^4 + x1^4 + x2^4", 8);
        let g = group_closure(&[diag(x.field(), 4, &[1, 0, 0])], 1000).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.cyclic);
        let rh = rh_quotient_genus(&x, &g).unwrap();
        assert_eq!(rh.fixed_counts, vec![4, 4, 4]);
        assert_eq!(rh.quotient_genus, 0);
        assert_eq!(
            theorem21_consequence(&x, &g).unwrap(),
            AbelianCheck::NotApplicable
        );
    }

    #[test]
    fn diagonal_product_group() {
        let x = curve("x0^4 + x1^4 + x2^4", 4);
        let f = x.field().clone();
        let g = group_closure(&[diag(&f, 4, &[1, 0, 0]), diag(&f, 4, &[0, 1, 0])], 1000).unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(
            theorem21_consequence(&x, &g).unwrap(),
            AbelianCheck::Pass {
                elementary_divisors: vec![4, 4]
            }
        );
    }

    #[test]
    fn order_nine_closure() {
        let f = CycloField::new(3).unwrap();
        let z = |j| f.root_of_unity(3, j).unwrap();
        let g = ProjMatrix::diagonal(&[z(2), z(1), f.one()]).unwrap();
        let h = ProjMatrix::monomial(
            &[1, 2, 0],
            &[
                f.from_int(2),
                f.from_int(3),
                f.from_int(6).inverse().unwrap(),
            ],
        )
        .unwrap();
        let c = group_closure(&[g, h], 1000).unwrap();
        assert_eq!(c.order(), 9);
        assert!(c.abelian);
        assert!(!c.cyclic);
        for o in &c.element_orders {
            assert_eq!(9 % o, 0);
        }
        assert_eq!(elementary_divisors(&c.element_orders), vec![3, 3]);
    }

    #[test]
    fn cyclic_closure_of_order_five() {
        let f = CycloField::new(5).unwrap();
        let c = group_closure(&[diag(&f, 5, &[3, 2, 0])], 1000).unwrap();
        assert_eq!(c.order(), 5);
        assert!(c.abelian && c.cyclic);
    }

    #[test]
    fn closure_bound() {
        let f = CycloField::new(5).unwrap();
        let g = diag(&f, 5, &[1, 0, 0]);
        assert_eq!(
            group_closure(&[g], 3).unwrap_err(),
            Error::ClosureExceedsBound(3)
        );
    }

    #[test]
    fn elementary_divisor_examples() {
        // Z/4 x Z/2: orders 1,2,2,2,4,4,4,4
        assert_eq!(elementary_divisors(&[1, 2, 2, 2, 4, 4, 4, 4]), vec![2, 4]);
        // Z/6
        assert_eq!(elementary_divisors(&[1, 2, 3, 3, 6, 6]), vec![2, 3]);
    }
}
