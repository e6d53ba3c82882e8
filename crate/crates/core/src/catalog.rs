//! Named curves over GF(q), `q = sqrt(q)^2` odd: the Fermat curve of degree
//! `(sqrt(q)+1)/2`, the Hermitian curve, the Artin-Schreier family
//! `y^sqrt(q) + y = x^m`, and the model `X^n = F(Y)` isomorphic to the Fermat
//! curve. Also the squaring cover from the Hermitian curve onto the Fermat curve.

use std::collections::BTreeMap;

use crate::curve::{points, CurveError, HomogPoly, ProjPoint};
use crate::field::{is_prime, FieldElement, FieldError, FieldSpec};
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("lambda index {index} out of range (there are {count} roots of T^n = -1)")]
    BadLambda { index: usize, count: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveId {
    Fermat { root_q: u64 },
    Hermitian { root_q: u64 },
    ArtinSchreier { root_q: u64, m: u64 },
    Prop41Model { root_q: u64, lambda_index: usize },
}

impl CurveId {
    pub fn root_q(&self) -> u64 {
        match *self {
            CurveId::Fermat { root_q }
            | CurveId::Hermitian { root_q }
            | CurveId::ArtinSchreier { root_q, .. }
            | CurveId::Prop41Model { root_q, .. } => root_q,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            CurveId::Fermat { root_q } => format!("fermat(rootq={root_q})"),
            CurveId::Hermitian { root_q } => format!("hermitian(rootq={root_q})"),
            CurveId::ArtinSchreier { root_q, m } => format!("artin-schreier(rootq={root_q},m={m})"),
            CurveId::Prop41Model { root_q, lambda_index } => format!("prop41(rootq={root_q},lambda={lambda_index})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogCurve {
    pub id: CurveId,
    pub curve: HomogPoly,
    pub genus: u64,
    /// Rational points of the plane model equal rational places. True for all
    /// catalog curves: the Artin-Schreier model has a single, unibranch point
    /// at infinity.
    pub points_are_places: bool,
    pub claimed_maximal: bool,
    pub note: &'static str,
}

/// Splits `sqrt(q)` as `p^e` with `p` an odd prime.
pub fn prime_power(root_q: u64) -> Result<(u64, usize), CatalogError> {
    if root_q < 3 {
        return Err(CatalogError::BadParameters(format!("sqrt(q) = {root_q} is not an odd prime power")));
    }
    let p = (2..=root_q).find(|d| root_q.is_multiple_of(*d)).expect("root_q >= 2");
    let (mut r, mut e) = (root_q, 0usize);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r != 1 || p == 2 || !is_prime(p) {
        return Err(CatalogError::BadParameters(format!("sqrt(q) = {root_q} is not an odd prime power")));
    }
    Ok((p, e))
}

/// GF(q) with `q = root_q^2` and the default modulus.
pub fn field_for(root_q: u64) -> Result<FieldSpec, CatalogError> {
    let (p, e) = prime_power(root_q)?;
    Ok(FieldSpec::new(p, 2 * e, None)?)
}

pub fn fermat_curve(f: &FieldSpec, n: u32) -> HomogPoly {
    HomogPoly::from_ints(f, n, &[(1, [n, 0, 0]), (1, [0, n, 0]), (1, [0, 0, n])]).expect("homogeneous")
}

/// `n = (sqrt(q)+1)/2`.
pub fn fermat_degree(root_q: u64) -> u32 {
    root_q.div_ceil(2) as u32
}

/// `(sqrt(q)-1)(sqrt(q)-3)/8`.
pub fn fermat_genus(root_q: u64) -> u64 {
    (root_q - 1) * (root_q - 3) / 8
}

pub fn make_catalog(id: CurveId) -> Result<CatalogCurve, CatalogError> {
    let root_q = id.root_q();
    let f = field_for(root_q)?;
    if root_q < 5 {
        return Err(CatalogError::BadParameters(format!("sqrt(q) = {root_q} is below 5")));
    }
    let out = match id {
        CurveId::Fermat { .. } => {
            let n = fermat_degree(root_q);
            CatalogCurve {
                id,
                curve: fermat_curve(&f, n),
                genus: fermat_genus(root_q),
                points_are_places: true,
                claimed_maximal: true,
                note: "covered by the Hermitian curve via squaring",
            }
        }
        CurveId::Hermitian { .. } => {
            let d = (root_q + 1) as u32;
            CatalogCurve {
                id,
                curve: fermat_curve(&f, d),
                genus: root_q * (root_q - 1) / 2,
                points_are_places: true,
                claimed_maximal: true,
                note: "maximal of the largest possible genus",
            }
        }
        CurveId::ArtinSchreier { m, .. } => {
            if m == 0 || !(root_q + 1).is_multiple_of(m) {
                return Err(CatalogError::BadParameters(format!("m = {m} does not divide sqrt(q)+1 = {}", root_q + 1)));
            }
            let (d, m32) = (root_q as u32, m as u32);
            let curve = HomogPoly::from_ints(&f, d, &[(1, [0, d, 0]), (1, [0, 1, d - 1]), (-1, [m32, 0, d - m32])])?;
            CatalogCurve {
                id,
                curve,
                genus: (root_q - 1) * (m - 1) / 2,
                points_are_places: true,
                claimed_maximal: true,
                note: "quotient of the Hermitian curve",
            }
        }
        CurveId::Prop41Model { lambda_index, .. } => {
            let data = prop41_build(root_q, lambda_index)?;
            CatalogCurve {
                id,
                curve: data.plane_model(),
                genus: fermat_genus(root_q),
                points_are_places: true,
                claimed_maximal: true,
                note: "isomorphic to the Fermat curve",
            }
        }
    };
    Ok(out)
}

/// `q + 1 + 2 g sqrt(q)`.
pub fn maximal_count(root_q: u64, genus: u64) -> u64 {
    root_q * root_q + 1 + 2 * genus * root_q
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub root_q: u64,
    pub identity_holds: bool,
    pub hermitian_points: usize,
    pub fermat_points: usize,
    /// All images lie on the Fermat curve.
    pub into: bool,
    pub surjective: bool,
    /// Fiber size -> number of Fermat points with that many preimages.
    pub fiber_histogram: BTreeMap<usize, usize>,
}

/// Checks the squaring morphism `(u, v, w) -> (u^2, v^2, w^2)` from the
/// Hermitian curve to the Fermat curve: symbolically, then on rational points.
pub fn hermitian_cover_check(root_q: u64) -> Result<CoverReport, CatalogError> {
    let f = field_for(root_q)?;
    let n = fermat_degree(root_q);
    let fermat = fermat_curve(&f, n);
    let hermitian = fermat_curve(&f, 2 * n);
    let sq = |i: usize| {
        let mut e = [0u32; 3];
        e[i] = 2;
        HomogPoly::monomial(&f, e, f.one())
    };
    let identity_holds = fermat.substitute(&[sq(0), sq(1), sq(2)]) == hermitian;
    let h_points = points(&hermitian);
    let f_points = points(&fermat);
    let mut fibers: BTreeMap<ProjPoint, usize> = f_points.iter().map(|p| (*p, 0)).collect();
    let mut into = true;
    for p in &h_points {
        let img = p.map(&f, |c| f.mul(c, c));
        match fibers.get_mut(&img) {
            Some(k) => *k += 1,
            None => into = false,
        }
    }
    let mut fiber_histogram = BTreeMap::new();
    for k in fibers.values() {
        *fiber_histogram.entry(*k).or_insert(0) += 1;
    }
    let surjective = !fiber_histogram.contains_key(&0);
    Ok(CoverReport {
        root_q,
        identity_holds,
        hermitian_points: h_points.len(),
        fermat_points: f_points.len(),
        into,
        surjective,
        fiber_histogram,
    })
}

/// The data of the model `X^n = F(Y)` attached to a root `lambda` of `T^n = -1`.
#[derive(Debug, Clone)]
pub struct Prop41Data {
    pub root_q: u64,
    pub lambda_index: usize,
    pub lambda: FieldElement,
    /// All roots of `T^n = -1`, sorted.
    pub lambdas: Vec<FieldElement>,
    pub f_poly: UPoly,
    /// `(lambda_j - lambda)^-1` over the other roots, sorted.
    pub c_roots: Vec<FieldElement>,
    /// Taylor coefficients `A_j` of `U^n` at `lambda`, via Hasse derivatives.
    pub a_coeffs: Vec<FieldElement>,
}

/// Builds `F(Y) = -((1 + lambda Y)^n + Y^n)` for the `lambda_index`-th root
/// of `T^n = -1` in canonical order.
pub fn prop41_build(root_q: u64, lambda_index: usize) -> Result<Prop41Data, CatalogError> {
    let f = field_for(root_q)?;
    let n = fermat_degree(root_q) as u64;
    let lambdas = f.nth_roots(f.from_int(-1), n);
    let lambda = *lambdas.get(lambda_index).ok_or(CatalogError::BadLambda { index: lambda_index, count: lambdas.len() })?;
    let one_plus = UPoly::new(&f, vec![f.one(), lambda]);
    let mut pw = UPoly::constant(&f, f.one());
    for _ in 0..n {
        pw = pw.mul(&one_plus);
    }
    let mut yn = vec![f.zero(); n as usize + 1];
    yn[n as usize] = f.one();
    let f_poly = pw.add(&UPoly::new(&f, yn)).scale(f.from_int(-1));
    let a_coeffs: Vec<FieldElement> = (0..=n)
        .map(|j| f.mul(f.from_int(crate::field::binom_mod_p(n, j, f.p()) as i64), f.pow(lambda, n - j)))
        .collect();
    let mut c_roots: Vec<FieldElement> = lambdas
        .iter()
        .filter(|&&l| l != lambda)
        .map(|&l| f.inv(f.sub(l, lambda)).expect("distinct roots"))
        .collect();
    c_roots.sort();
    Ok(Prop41Data { root_q, lambda_index, lambda, lambdas, f_poly, c_roots, a_coeffs })
}

impl Prop41Data {
    pub fn field(&self) -> &FieldSpec {
        self.f_poly.field()
    }

    pub fn n(&self) -> u32 {
        fermat_degree(self.root_q)
    }

    /// `deg F = (sqrt(q)-1)/2`.
    pub fn degree_ok(&self) -> bool {
        self.f_poly.degree() == Some(((self.root_q - 1) / 2) as usize)
    }

    /// `F(0)^(sqrt(q)-1)` is `1` or `-1`.
    pub fn constant_term_ok(&self) -> bool {
        let f = self.field();
        let v = f.pow(self.f_poly.coeff(0), self.root_q - 1);
        v == f.one() || v == f.from_int(-1)
    }

    /// The roots of `F` are exactly the `c_j`.
    pub fn roots_ok(&self) -> bool {
        self.f_poly.roots() == self.c_roots
    }

    /// The closed form agrees with `F(Y) = sum_{j>=1} -A_j Y^(n-j)`.
    pub fn hasse_expansion_ok(&self) -> bool {
        let f = self.field();
        let n = self.n() as usize;
        let mut c = vec![f.zero(); n];
        for j in 1..=n {
            c[n - j] = f.neg(self.a_coeffs[j]);
        }
        self.a_coeffs[0] == f.from_int(-1) && self.a_coeffs[n] == f.one() && UPoly::new(f, c) == self.f_poly
    }

    pub fn conditions_hold(&self) -> bool {
        self.degree_ok() && self.constant_term_ok() && self.roots_ok() && self.hasse_expansion_ok()
    }

    /// The homogenized model `X^n - sum_k F_k Y^k Z^(n-k)`. It is nonsingular,
    /// with the single point `(0:1:0)` at infinity.
    pub fn plane_model(&self) -> HomogPoly {
        let f = self.field();
        let n = self.n();
        let mut terms = vec![([n, 0, 0], f.one())];
        for (k, &c) in self.f_poly.coeffs().iter().enumerate() {
            terms.push(([0, k as u32, n - k as u32], f.neg(c)));
        }
        HomogPoly::new(f, n, terms).expect("homogeneous")
    }
}

/// Substituting `X = V/(U - lambda)`, `Y = 1/(U - lambda)` into `X^n - F(Y)`
/// and clearing denominators gives `V^n - G(U)` with
/// `G(U) = sum_k F_k (U - lambda)^(n-k)`. This reduces to zero modulo
/// `U^n + V^n + 1` exactly when `G(U) + U^n + 1 = 0`.
pub fn prop41_identity(lambda: FieldElement, n: u32, f_poly: &UPoly) -> bool {
    let f = f_poly.field();
    if f_poly.degree().is_some_and(|d| d > n as usize) {
        return false;
    }
    let shift = UPoly::new(f, vec![f.neg(lambda), f.one()]);
    let mut g = UPoly::zero(f);
    for k in 0..=n as usize {
        let mut t = UPoly::constant(f, f_poly.coeff(k));
        for _ in 0..n as usize - k {
            t = t.mul(&shift);
        }
        g = g.add(&t);
    }
    let mut un1 = vec![f.zero(); n as usize + 1];
    un1[0] = f.one();
    un1[n as usize] = f.one();
    g.add(&UPoly::new(f, un1)).is_zero()
}

pub fn prop41_verify(root_q: u64, lambda_index: usize) -> Result<bool, CatalogError> {
    let d = prop41_build(root_q, lambda_index)?;
    Ok(d.conditions_hold() && prop41_identity(d.lambda, d.n(), &d.f_poly))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{is_nonsingular, Nonsingularity};

    #[test]
    fn genera_and_degrees() {
        let c = make_catalog(CurveId::Fermat { root_q: 11 }).unwrap();
        assert_eq!((c.curve.degree(), c.genus), (6, 10));
        let h = make_catalog(CurveId::Hermitian { root_q: 11 }).unwrap();
        assert_eq!((h.curve.degree(), h.genus), (12, 55));
        let a = make_catalog(CurveId::ArtinSchreier { root_q: 11, m: 3 }).unwrap();
        assert_eq!(a.genus, 10);
        for r in [5u64, 7, 11, 13] {
            let n = fermat_degree(r) as u64;
            assert_eq!((n - 1) * (n - 2) / 2, fermat_genus(r));
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(make_catalog(CurveId::ArtinSchreier { root_q: 11, m: 5 }), Err(CatalogError::BadParameters(_))));
        assert!(matches!(field_for(15), Err(CatalogError::BadParameters(_))));
        assert!(matches!(field_for(8), Err(CatalogError::BadParameters(_))));
        assert!(matches!(make_catalog(CurveId::Fermat { root_q: 3 }), Err(CatalogError::BadParameters(_))));
        assert!(matches!(prop41_build(11, 6), Err(CatalogError::BadLambda { index: 6, count: 6 })));
        assert_eq!(prime_power(9).unwrap(), (3, 2));
    }

    #[test]
    fn catalog_counts_are_maximal() {
        for id in [
            CurveId::Fermat { root_q: 5 },
            CurveId::Fermat { root_q: 7 },
            CurveId::Hermitian { root_q: 5 },
            CurveId::ArtinSchreier { root_q: 5, m: 3 },
            CurveId::ArtinSchreier { root_q: 7, m: 2 },
            CurveId::ArtinSchreier { root_q: 11, m: 3 },
            CurveId::Prop41Model { root_q: 7, lambda_index: 1 },
        ] {
            let c = make_catalog(id).unwrap();
            assert_eq!(points(&c.curve).len() as u64, maximal_count(id.root_q(), c.genus), "{}", id.name());
        }
    }

    #[test]
    fn explicit_model_data() {
        let d = prop41_build(11, 0).unwrap();
        assert_eq!(d.f_poly.degree(), Some(5));
        let f = d.field();
        assert_eq!(d.f_poly.coeff(0), f.from_int(-1));
        assert_eq!(f.pow(d.f_poly.coeff(0), 10), f.one());
        assert!(d.conditions_hold());
        for &c in &d.c_roots {
            assert!(d.f_poly.eval(c).is_zero());
        }
        assert_eq!(prop41_build(7, 2).unwrap().f_poly.degree(), Some(3));
    }

    #[test]
    fn explicit_model_holds_for_every_lambda() {
        for (r, k) in [(11u64, 6usize), (7, 4), (5, 3)] {
            for i in 0..k {
                assert!(prop41_verify(r, i).unwrap(), "rootq {r} lambda {i}");
            }
        }
    }

    #[test]
    fn explicit_model_mutation_fails() {
        let d = prop41_build(11, 2).unwrap();
        let f = d.field();
        let mut c = d.f_poly.coeffs().to_vec();
        c[2] = f.add(c[2], f.one());
        assert!(!prop41_identity(d.lambda, d.n(), &UPoly::new(f, c)));
        assert!(prop41_identity(d.lambda, d.n(), &d.f_poly));
    }

    #[test]
    fn explicit_model_is_nonsingular_with_fermat_count() {
        let d = prop41_build(11, 3).unwrap();
        let model = d.plane_model();
        assert!(matches!(is_nonsingular(&model, 1).unwrap(), Nonsingularity::Nonsingular { .. }));
        assert_eq!(points(&model).len(), 342);
    }

    #[test]
    fn squaring_cover() {
        let r = hermitian_cover_check(5).unwrap();
        assert!(r.identity_holds && r.into);
        assert_eq!((r.hermitian_points, r.fermat_points), (126, 36));
        let total: usize = r.fiber_histogram.iter().map(|(k, v)| k * v).sum();
        assert_eq!(total, 126);
    }
}
