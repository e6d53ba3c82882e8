//! Bringing a plane maximal curve of degree `n = (sqrt(q)+1)/2` to the Fermat
//! equation over GF(q).
//!
//! The rational inflexions lie `n` to a side on a triangle whose vertices each
//! carry `n` inflexional tangents. Moving that triangle to the coordinate
//! triangle makes the equation diagonal, `a X0^n + b X1^n + c X2^n`, and
//! rescaling by `n`-th roots of `a/c` and `b/c` gives the Fermat form. The
//! result is a [`NormalizationWitness`] that [`verify_witness`] rechecks from
//! scratch.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::fermat_curve;
use crate::curve::{tangent_line, HomogPoly, LineOrConic, ProjPoint};
use crate::field::{FieldElement, FieldSpec};
use crate::invariants::{census, InvariantError};
use crate::linalg::{self, Mat3, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("degree {degree} is not (sqrt(q)+1)/2 = {expected}")]
    WrongDegree { degree: u32, expected: u32 },
    #[error("found {found} rational inflexions, expected {expected}")]
    WrongInflexionCount { found: usize, expected: usize },
    #[error("no inflexion triangle: {0}")]
    NoTriangle(String),
    #[error("the equation is not diagonal in the triangle's coordinates; the input is probably not maximal")]
    NotDiagonal,
    #[error("a diagonal coefficient ratio is not an n-th power in GF(q); the input is probably not maximal")]
    NoScaling,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflexionConfig {
    pub inflexions: Vec<ProjPoint>,
    pub tangents: Vec<LineOrConic>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub vertices: [ProjPoint; 3],
    /// Coefficient vectors of the sides, normalized like points.
    pub sides: [ProjPoint; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationWitness {
    /// `C(map * X)` is diagonal.
    pub map: Mat3,
    pub diag: [FieldElement; 3],
    /// `s^n = a/c`, `t^n = b/c`.
    pub scaling: (FieldElement, FieldElement),
    /// Which side went to `X_i = 0`.
    pub permutation: [usize; 3],
}

pub fn inflexion_config(curve: &HomogPoly, root_q: u64) -> Result<InflexionConfig, NormalizeError> {
    let expected = root_q.div_ceil(2) as u32;
    if curve.degree() != expected {
        return Err(NormalizeError::WrongDegree { degree: curve.degree(), expected });
    }
    let c = census(curve, root_q)?;
    if c.m_q_prime != 3 * expected as usize {
        return Err(NormalizeError::WrongInflexionCount { found: c.m_q_prime, expected: 3 * expected as usize });
    }
    let tangents = c
        .inflexions
        .iter()
        .map(|p| tangent_line(curve, p).map_err(|e| NormalizeError::Invariant(InvariantError::Local(e.into()))))
        .collect::<Result<_, _>>()?;
    Ok(InflexionConfig { inflexions: c.inflexions, tangents })
}

fn on(line: &ProjPoint, p: &ProjPoint, f: &FieldSpec) -> bool {
    linalg::dot(f, line.coords(), p.coords()).is_zero()
}

/// Locates the triangle and checks every incidence it must satisfy.
pub fn find_triangle(f: &FieldSpec, cfg: &InflexionConfig) -> Result<Triangle, NormalizeError> {
    let pts = &cfg.inflexions;
    let n = pts.len() / 3;
    // A line other than a side meets each side once, so it holds at most three
    // inflexions; for odd n such lines do occur.
    let mut lines: Vec<ProjPoint> = Vec::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let l = ProjPoint::new(f, linalg::cross(f, a.coords(), b.coords())).expect("distinct points span a line");
            if !lines.contains(&l) && pts.iter().filter(|p| on(&l, p, f)).count() >= n.max(3) {
                lines.push(l);
            }
        }
    }
    lines.sort();
    if lines.len() != 3 {
        return Err(NormalizeError::NoTriangle(format!("{} lines carry {} or more inflexions", lines.len(), n.max(3))));
    }
    let sides = [lines[0], lines[1], lines[2]];
    for s in &sides {
        let k = pts.iter().filter(|p| on(s, p, f)).count();
        if k != n {
            return Err(NormalizeError::NoTriangle(format!("a side carries {k} inflexions, not {n}")));
        }
    }
    let meet = |i: usize, j: usize| ProjPoint::new(f, linalg::cross(f, sides[i].coords(), sides[j].coords()));
    let vertices = match (meet(1, 2), meet(0, 2), meet(0, 1)) {
        (Ok(a), Ok(b), Ok(c)) => [a, b, c],
        _ => return Err(NormalizeError::NoTriangle("two sides coincide".into())),
    };
    let m: Mat3 = [*vertices[0].coords(), *vertices[1].coords(), *vertices[2].coords()];
    if linalg::det(f, &m).is_zero() {
        return Err(NormalizeError::NoTriangle("vertices are collinear".into()));
    }
    if vertices.iter().any(|v| pts.contains(v)) {
        return Err(NormalizeError::NoTriangle("an inflexion is a vertex".into()));
    }
    let tangent_vecs: Vec<ProjPoint> = cfg
        .tangents
        .iter()
        .map(|t| ProjPoint::new(f, t.form().linear_coeffs()).expect("nonzero line"))
        .collect();
    for v in &vertices {
        let k = tangent_vecs.iter().filter(|t| on(t, v, f)).count();
        if k != n {
            return Err(NormalizeError::NoTriangle(format!("a vertex lies on {k} inflexional tangents, not {n}")));
        }
    }
    if sides.iter().any(|s| tangent_vecs.contains(s)) {
        return Err(NormalizeError::NoTriangle("a side is an inflexional tangent".into()));
    }
    Ok(Triangle { vertices, sides })
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

pub fn normalize(curve: &HomogPoly, root_q: u64) -> Result<NormalizationWitness, NormalizeError> {
    let f = curve.field();
    let cfg = inflexion_config(curve, root_q)?;
    let tri = find_triangle(f, &cfg)?;
    let mut sides = tri.sides;
    sides.sort_by(|a, b| b.cmp(a));
    let mut first_err = None;
    for perm in PERMUTATIONS {
        let rows: Mat3 = perm.map(|i| *sides[i].coords());
        let map = linalg::inverse(f, &rows).expect("sides of a triangle are independent");
        match diagonalize(curve, &map) {
            Ok((diag, scaling)) => return Ok(NormalizationWitness { map, diag, scaling, permutation: perm }),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("six permutations tried"))
}

fn diagonalize(curve: &HomogPoly, map: &Mat3) -> Result<([FieldElement; 3], (FieldElement, FieldElement)), NormalizeError> {
    let f = curve.field();
    let n = curve.degree();
    let g = curve.transform(map);
    let pure = [[n, 0, 0], [0, n, 0], [0, 0, n]];
    if g.terms().any(|(e, _)| !pure.contains(e)) {
        return Err(NormalizeError::NotDiagonal);
    }
    let diag = pure.map(|e| g.coeff(e));
    if diag.iter().any(|c| c.is_zero()) {
        return Err(NormalizeError::NotDiagonal);
    }
    let root = |x: FieldElement| {
        let target = f.div(x, diag[2]).expect("nonzero");
        f.elements().skip(1).find(|&s| f.pow(s, n as u64) == target).ok_or(NormalizeError::NoScaling)
    };
    Ok((diag, (root(diag[0])?, root(diag[1])?)))
}

/// The full map `map * diag(1/s, 1/t, 1)`.
pub fn full_map(f: &FieldSpec, w: &NormalizationWitness) -> Option<Mat3> {
    let si = f.inv(w.scaling.0).ok()?;
    let ti = f.inv(w.scaling.1).ok()?;
    Some(linalg::mul(f, &w.map, &linalg::diag(f, [si, ti, f.one()])))
}

/// Recomputes everything the witness claims from the curve alone.
pub fn verify_witness(curve: &HomogPoly, w: &NormalizationWitness) -> bool {
    let f = curve.field();
    let entries = w.map.iter().flatten().chain(&w.diag).chain([&w.scaling.0, &w.scaling.1]);
    if entries.into_iter().any(|&x| !f.contains(x)) || linalg::det(f, &w.map).is_zero() {
        return false;
    }
    let n = curve.degree() as u64;
    let g = curve.transform(&w.map);
    let diagonal = g.terms().all(|(e, _)| e.iter().filter(|&&k| k != 0).count() == 1)
        && (0..3).all(|i| {
            let mut e = [0u32; 3];
            e[i] = n as u32;
            g.coeff(e) == w.diag[i]
        });
    let c = w.diag[2];
    let scaled = f.mul(f.pow(w.scaling.0, n), c) == w.diag[0] && f.mul(f.pow(w.scaling.1, n), c) == w.diag[1];
    let Some(m) = full_map(f, w) else { return false };
    diagonal && scaled && curve.transform(&m).scalar_multiple_of(&fermat_curve(f, n as u32)).is_some()
}

/// A uniformly random invertible matrix, from a seeded stream.
pub fn random_invertible(f: &FieldSpec, seed: u64) -> Mat3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut m = [[f.zero(); 3]; 3];
        for x in m.iter_mut().flatten() {
            *x = f.element(rng.gen_range(0..f.q())).expect("in range");
        }
        if !linalg::det(f, &m).is_zero() {
            return m;
        }
    }
}

/// Canonical text for a witness, used for determinism checks and reports.
pub fn witness_text(f: &FieldSpec, w: &NormalizationWitness) -> String {
    let fmt = |v: &Vec3| v.iter().map(|&x| f.format(x)).collect::<Vec<_>>().join(",");
    format!(
        "map=[{}];[{}];[{}] diag={} scaling={},{} permutation={:?}",
        fmt(&w.map[0]),
        fmt(&w.map[1]),
        fmt(&w.map[2]),
        fmt(&w.diag),
        f.format(w.scaling.0),
        f.format(w.scaling.1),
        w.permutation
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{field_for, make_catalog, CurveId};

    fn fermat11() -> (FieldSpec, HomogPoly) {
        let f = field_for(11).unwrap();
        let c = fermat_curve(&f, 6);
        (f, c)
    }

    #[test]
    fn fermat_triangle_is_the_coordinate_triangle() {
        let (f, c) = fermat11();
        let cfg = inflexion_config(&c, 11).unwrap();
        assert_eq!(cfg.inflexions.len(), 18);
        let lam = f.nth_roots(f.from_int(-1), 6);
        for &l in &lam {
            for p in [[l, f.zero(), f.one()], [f.zero(), l, f.one()], [f.one(), l, f.zero()]] {
                assert!(cfg.inflexions.contains(&ProjPoint::new(&f, p).unwrap()));
            }
        }
        let t = find_triangle(&f, &cfg).unwrap();
        let mut v = t.vertices.to_vec();
        v.sort();
        let e = |a, b, c| ProjPoint::from_ints(&f, [a, b, c]).unwrap();
        assert_eq!(v, vec![e(0, 0, 1), e(0, 1, 0), e(1, 0, 0)]);
    }

    #[test]
    fn fermat_normalizes_to_identity() {
        let (f, c) = fermat11();
        let w = normalize(&c, 11).unwrap();
        assert_eq!(w.map, linalg::identity(&f));
        assert_eq!(w.diag, [f.one(); 3]);
        assert_eq!(w.scaling, (f.one(), f.one()));
        assert!(verify_witness(&c, &w));
    }

    #[test]
    fn scalar_multiple() {
        let (f, c) = fermat11();
        let c2 = c.scale(f.from_int(2));
        let w = normalize(&c2, 11).unwrap();
        assert_eq!(w.diag, [f.from_int(2); 3]);
        assert_eq!(w.scaling, (f.one(), f.one()));
        assert!(verify_witness(&c2, &w));
    }

    #[test]
    fn random_round_trips_and_equivariance() {
        let (f, c) = fermat11();
        let base = find_triangle(&f, &inflexion_config(&c, 11).unwrap()).unwrap();
        for seed in 0..20 {
            let a = random_invertible(&f, seed);
            let g = c.transform(&a);
            let w = normalize(&g, 11).unwrap();
            assert!(verify_witness(&g, &w), "seed {seed}");
            let a_inv = linalg::inverse(&f, &a).unwrap();
            let tri = find_triangle(&f, &inflexion_config(&g, 11).unwrap()).unwrap();
            let mut expected: Vec<ProjPoint> = base.vertices.iter().map(|v| v.transform(&f, &a_inv).unwrap()).collect();
            let mut got = tri.vertices.to_vec();
            expected.sort();
            got.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn deterministic_witness() {
        let (f, c) = fermat11();
        let g = c.transform(&random_invertible(&f, 7));
        let a = witness_text(&f, &normalize(&g, 11).unwrap());
        let b = witness_text(&f, &normalize(&g.clone(), 11).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn side_inflexions_in_diagonal_form() {
        let (f, c) = fermat11();
        let g = c.transform(&random_invertible(&f, 3));
        let w = normalize(&g, 11).unwrap();
        let d = g.transform(&w.map);
        let cfg = inflexion_config(&d, 11).unwrap();
        let [a, _, cc] = w.diag;
        let on_side: Vec<_> = cfg.inflexions.iter().filter(|p| p.coords()[1].is_zero()).collect();
        assert_eq!(on_side.len(), 6);
        for p in on_side {
            let xi = f.div(p.coords()[0], p.coords()[2]).unwrap();
            assert!(f.add(f.mul(a, f.pow(xi, 6)), cc).is_zero());
        }
    }

    #[test]
    fn tampered_witnesses_fail() {
        let (f, c) = fermat11();
        let g = c.transform(&random_invertible(&f, 11));
        let w = normalize(&g, 11).unwrap();
        let mut bad = w.clone();
        bad.map[0][1] = f.add(bad.map[0][1], f.one());
        assert!(!verify_witness(&g, &bad));
        let other = c.transform(&random_invertible(&f, 12));
        assert!(!verify_witness(&other, &w));
    }

    #[test]
    fn guards() {
        let h = make_catalog(CurveId::Hermitian { root_q: 11 }).unwrap();
        assert!(matches!(inflexion_config(&h.curve, 11), Err(NormalizeError::WrongDegree { .. })));
        let f = field_for(5).unwrap();
        let c = fermat_curve(&f, 3);
        let cfg = inflexion_config(&c, 5).unwrap();
        assert_eq!(cfg.inflexions.len(), 9);
        assert!(matches!(find_triangle(&f, &cfg), Err(NormalizeError::NoTriangle(_))));
        // drop collinearity: replace one inflexion of the Fermat sextic by a regular point
        let (f, c) = fermat11();
        let mut cfg = inflexion_config(&c, 11).unwrap();
        let regular = crate::curve::points(&c).into_iter().find(|p| !cfg.inflexions.contains(p)).unwrap();
        cfg.inflexions[0] = regular;
        assert!(matches!(find_triangle(&f, &cfg), Err(NormalizeError::NoTriangle(_))));
    }

    #[test]
    fn odd_degree_with_extra_collinear_triples() {
        // n = 7: 49 lines through one inflexion of each side, besides the sides
        let f = field_for(13).unwrap();
        let c = fermat_curve(&f, 7);
        let g = c.transform(&random_invertible(&f, 2));
        let w = normalize(&g, 13).unwrap();
        assert!(verify_witness(&g, &w));
    }
}
