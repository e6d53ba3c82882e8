//! Curve-level arithmetic: maximality verdicts, the census of rational points
//! by tangent contact, numerical semigroups, and Weierstrass semigroups at
//! distinguished points of the Fermat and Artin-Schreier curves.

use rayon::prelude::*;

use crate::catalog::{fermat_degree, fermat_genus, make_catalog, CatalogError, CurveId};
use crate::curve::{points, HomogPoly, ProjPoint};
use crate::field::FieldElement;
use crate::local::{branch_at, classify_point, default_precision, imult, LocalError, Multiplicity, PointKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("|N - (q+1)| = {deviation} exceeds 2 g sqrt(q) = {bound}: genus or count is wrong")]
    BoundViolated { deviation: i64, bound: i64 },
    #[error("q = {0} is not a square")]
    NotSquareField(u64),
    #[error("generators {0:?} are not coprime")]
    NotCoprime(Vec<u64>),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("not an inflexion of the Fermat curve")]
    NotAnInflexion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Maximal,
    NonMaximal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityReport {
    pub n: u64,
    pub g: u64,
    pub q: u64,
    pub hasse_weil_gap: i64,
    /// `|N - (q+1)| <= (d-1)(d-2) sqrt(q)`.
    pub plane_bound_ok: bool,
    pub verdict: Verdict,
}

pub fn maximality_report(curve: &HomogPoly, g: u64) -> Result<MaximalityReport, InvariantError> {
    let f = curve.field();
    let q = f.q();
    let r = f.sqrt_q().ok_or(InvariantError::NotSquareField(q))? as i64;
    let n = points(curve).len() as u64;
    let deviation = (n as i64 - (q as i64 + 1)).abs();
    let bound = 2 * g as i64 * r;
    if deviation > bound {
        return Err(InvariantError::BoundViolated { deviation, bound });
    }
    let d = curve.degree() as i64;
    let plane_bound_ok = deviation <= (d - 1) * (d - 2) * r;
    let hasse_weil_gap = q as i64 + 1 + bound - n as i64;
    let verdict = if hasse_weil_gap == 0 { Verdict::Maximal } else { Verdict::NonMaximal };
    Ok(MaximalityReport { n, g, q, hasse_weil_gap, plane_bound_ok, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    /// Rational points whose tangent has contact 2.
    pub m_q: usize,
    /// Rational inflexions.
    pub m_q_prime: usize,
    pub inflexions: Vec<ProjPoint>,
}

impl Census {
    pub fn total(&self) -> usize {
        self.m_q + self.m_q_prime
    }
}

/// Classifies every rational point of a plane maximal curve of degree
/// `(root_q+1)/2`.
pub fn census(curve: &HomogPoly, root_q: u64) -> Result<Census, InvariantError> {
    let pts = points(curve);
    let kinds: Vec<PointKind> = pts.par_iter().map(|p| classify_point(curve, p, root_q)).collect::<Result<_, _>>()?;
    let inflexions: Vec<ProjPoint> =
        pts.iter().zip(&kinds).filter(|(_, k)| **k == PointKind::Inflexion).map(|(p, _)| *p).collect();
    Ok(Census { m_q: pts.len() - inflexions.len(), m_q_prime: inflexions.len(), inflexions })
}

/// `(m_q(sqrt(q)), m_q'(sqrt(q)))` from the closed formulas
/// `(sqrt(q)+1)(q - sqrt(q) - 2)/4` and `3(sqrt(q)+1)/2`.
pub fn census_formula(root_q: u64) -> (u64, u64) {
    ((root_q + 1) * (root_q * root_q - root_q - 2) / 4, 3 * (root_q + 1) / 2)
}

/// Both sides of `((sqrt(q)-3)/2) M_q' = 3(2g-2) + 3(sqrt(q)+1)/2`.
pub fn ramification_identity(root_q: u64, m_q_prime: u64) -> (i64, i64) {
    let r = root_q as i64;
    let g = fermat_genus(root_q) as i64;
    ((r - 3) / 2 * m_q_prime as i64, 3 * (2 * g - 2) + 3 * (r + 1) / 2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    pub generators: Vec<u64>,
    pub gaps: Vec<u64>,
}

impl NumericalSemigroup {
    pub fn from_generators(gens: &[u64]) -> Result<Self, InvariantError> {
        let mut generators: Vec<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
        generators.sort_unstable();
        generators.dedup();
        let g = generators.iter().fold(0, |a, &b| gcd(a, b));
        if g != 1 {
            return Err(InvariantError::NotCoprime(gens.to_vec()));
        }
        let a = generators[0] as usize;
        // Extend the membership sieve until `a` consecutive members appear;
        // from there on everything is reachable by adding `a`.
        let mut member = vec![true];
        let mut run = 0usize;
        while run < a {
            let k = member.len();
            let m = generators.iter().any(|&g| g as usize <= k && member[k - g as usize]);
            member.push(m);
            run = if m { run + 1 } else { 0 };
        }
        let gaps = member.iter().enumerate().filter(|(_, &m)| !m).map(|(i, _)| i as u64).collect();
        Ok(NumericalSemigroup { generators, gaps })
    }

    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.gaps.binary_search(&n).is_err()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Two functions with poles only at an inflexion `P` of the Fermat curve,
/// with their pole orders measured on a branch at `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleEvidence {
    pub point: ProjPoint,
    /// Pole orders of `V/(U - lambda W)` and `(U - lambda' W)/(U - lambda W)`
    /// after permuting coordinates so that `P = (lambda, 0, 1)`.
    pub pole_orders: (usize, usize),
    /// Contact of `U - lambda W` at `P`. When it equals the curve degree, the
    /// denominator has no other zero on the curve, so both functions are
    /// regular away from `P`.
    pub denominator_contact: usize,
    pub curve_degree: u32,
    /// Points with `W = 0` on which the denominator was checked nonzero.
    pub infinity_checked: usize,
    pub semigroup: NumericalSemigroup,
}

impl PoleEvidence {
    pub fn regular_elsewhere(&self) -> bool {
        self.denominator_contact == self.curve_degree as usize
    }
}

/// The points over `U = lambda` are inflexions: the line `U = lambda W` meets
/// the curve there with multiplicity `n`. A description of them as the
/// non-inflexion points would contradict this; the computation is what is
/// implemented and what the tests check.
pub fn fermat_pole_numbers(root_q: u64, p: &ProjPoint) -> Result<PoleEvidence, InvariantError> {
    let cat = make_catalog(CurveId::Fermat { root_q })?;
    let (c, f) = (&cat.curve, cat.curve.field().clone());
    if classify_point(c, p, root_q).map_err(|_| InvariantError::NotAnInflexion)? != PointKind::Inflexion {
        return Err(InvariantError::NotAnInflexion);
    }
    let x = p.coords();
    let v = (0..3).find(|&i| x[i].is_zero()).ok_or(InvariantError::NotAnInflexion)?;
    let (u, w) = match v {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let n = fermat_degree(root_q);
    let lambda = f.div(x[u], x[w]).expect("w coordinate is nonzero");
    let other = *f.nth_roots(f.from_int(-1), n as u64).iter().find(|&&l| l != lambda).expect("n >= 2");
    let line = |terms: &[(usize, FieldElement)]| {
        let mut c3 = [f.zero(); 3];
        for &(i, k) in terms {
            c3[i] = k;
        }
        HomogPoly::linear(&f, c3)
    };
    let den = line(&[(u, f.one()), (w, f.neg(lambda))]);
    let num1 = line(&[(v, f.one())]);
    let num2 = line(&[(u, f.one()), (w, f.neg(other))]);
    let b = branch_at(c, p, default_precision(n))?;
    let ord = |form: &HomogPoly| match imult(form, &b) {
        Multiplicity::Finite(k) => Ok(k),
        Multiplicity::AtLeast(k) => Err(LocalError::PrecisionExhausted(k)),
    };
    let (od, o1, o2) = (ord(&den)?, ord(&num1)?, ord(&num2)?);
    let at_infinity: Vec<ProjPoint> = points(c).into_iter().filter(|q| q.coords()[w].is_zero()).collect();
    for q in &at_infinity {
        if den.evaluate(q.coords()).is_zero() {
            return Err(InvariantError::NotAnInflexion);
        }
    }
    let pole_orders = (od - o1, od - o2);
    let semigroup = NumericalSemigroup::from_generators(&[pole_orders.0 as u64, pole_orders.1 as u64])?;
    Ok(PoleEvidence {
        point: *p,
        pole_orders,
        denominator_contact: od,
        curve_degree: n,
        infinity_checked: at_infinity.len(),
        semigroup,
    })
}

/// Semigroup at the point at infinity of `y^sqrt(q) + y = x^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinitySemigroup {
    pub semigroup: NumericalSemigroup,
    /// With `v(x) = -sqrt(q)` and `v(y) = -m`, the terms `y^sqrt(q)` and `x^m`
    /// share the valuation `-m sqrt(q)` and `y` is strictly smaller in pole order.
    pub valuations_balance: bool,
    pub genus: u64,
}

pub fn as_semigroup_at_infinity(root_q: u64, m: u64) -> Result<InfinitySemigroup, InvariantError> {
    if m < 2 || !(root_q + 1).is_multiple_of(m) {
        return Err(InvariantError::BadParameters(format!("m = {m} must be at least 2 and divide {}", root_q + 1)));
    }
    let (vx, vy) = (-(root_q as i64), -(m as i64));
    let valuations_balance = vy * root_q as i64 == vx * m as i64 && vy > vy * root_q as i64;
    let semigroup = NumericalSemigroup::from_generators(&[m, root_q])?;
    Ok(InfinitySemigroup { semigroup, valuations_balance, genus: (root_q - 1) * (m - 1) / 2 })
}

/// Checked facts consistent with the Fermat curve and the curve
/// `y^sqrt(q) + y = x^((sqrt(q)+1)/4)` not being isomorphic. This is evidence,
/// not a proof: it compares the semigroups at two distinguished points only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonIsomorphismEvidence {
    pub root_q: u64,
    pub genus_fermat: u64,
    pub genus_artin_schreier: u64,
    pub points_fermat: usize,
    pub points_artin_schreier: usize,
    pub fermat_semigroup: NumericalSemigroup,
    pub artin_schreier_semigroup: NumericalSemigroup,
}

impl NonIsomorphismEvidence {
    pub fn semigroups_differ(&self) -> bool {
        self.fermat_semigroup.gaps != self.artin_schreier_semigroup.gaps
    }

    pub fn consistent(&self) -> bool {
        self.genus_fermat == self.genus_artin_schreier
            && self.points_fermat == self.points_artin_schreier
            && self.semigroups_differ()
    }
}

pub fn non_isomorphism_evidence(root_q: u64) -> Result<NonIsomorphismEvidence, InvariantError> {
    if root_q % 4 != 3 {
        return Err(InvariantError::BadParameters(format!("sqrt(q) = {root_q} is not 3 mod 4")));
    }
    let m = (root_q + 1) / 4;
    let fermat = make_catalog(CurveId::Fermat { root_q })?;
    let asc = make_catalog(CurveId::ArtinSchreier { root_q, m })?;
    let n = fermat_degree(root_q) as u64;
    Ok(NonIsomorphismEvidence {
        root_q,
        genus_fermat: fermat.genus,
        genus_artin_schreier: asc.genus,
        points_fermat: points(&fermat.curve).len(),
        points_artin_schreier: points(&asc.curve).len(),
        fermat_semigroup: NumericalSemigroup::from_generators(&[n - 1, n])?,
        artin_schreier_semigroup: as_semigroup_at_infinity(root_q, m)?.semigroup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use proptest::prelude::*;

    #[test]
    fn maximality_verdicts() {
        let c = make_catalog(CurveId::Fermat { root_q: 5 }).unwrap();
        let r = maximality_report(&c.curve, 1).unwrap();
        assert_eq!((r.n, r.verdict, r.hasse_weil_gap), (36, Verdict::Maximal, 0));
        assert!(r.plane_bound_ok);
        let f = FieldSpec::new(11, 2, None).unwrap();
        let cubic = HomogPoly::from_ints(&f, 3, &[(1, [0, 2, 1]), (-1, [3, 0, 0]), (-1, [1, 0, 2]), (-1, [0, 0, 3])]).unwrap();
        let r = maximality_report(&cubic, 1).unwrap();
        assert_eq!((r.verdict, r.hasse_weil_gap), (Verdict::NonMaximal, 4));
        // a wrong genus is caught
        let h = make_catalog(CurveId::Hermitian { root_q: 5 }).unwrap();
        assert!(matches!(maximality_report(&h.curve, 1), Err(InvariantError::BoundViolated { .. })));
    }

    #[test]
    fn small_census() {
        let c = make_catalog(CurveId::Fermat { root_q: 5 }).unwrap();
        let s = census(&c.curve, 5).unwrap();
        assert_eq!((s.m_q, s.m_q_prime), (27, 9));
        assert_eq!(census_formula(5), (27, 9));
        assert_eq!(census_formula(11), (324, 18));
        assert_eq!(census_formula(13), (539, 21));
    }

    #[test]
    fn identities() {
        assert_eq!(ramification_identity(11, 18), (72, 72));
        assert_eq!(ramification_identity(13, 21), (105, 105));
        for r in [5u64, 7, 11, 13] {
            let g = fermat_genus(r) as i64;
            let r = r as i64;
            assert_eq!(2 * g - 2, (r - 5) * (r + 1) / 4);
        }
    }

    #[test]
    fn semigroup_examples() {
        let s = NumericalSemigroup::from_generators(&[5, 6]).unwrap();
        assert_eq!(s.gaps, vec![1, 2, 3, 4, 7, 8, 9, 13, 14, 19]);
        let s = NumericalSemigroup::from_generators(&[3, 11]).unwrap();
        assert_eq!(s.gaps, vec![1, 2, 4, 5, 7, 8, 10, 13, 16, 19]);
        assert_eq!(NumericalSemigroup::from_generators(&[1]).unwrap().genus(), 0);
        assert!(matches!(NumericalSemigroup::from_generators(&[4, 6]), Err(InvariantError::NotCoprime(_))));
    }

    fn brute_gaps(a: u64, b: u64) -> Vec<u64> {
        let limit = a * b;
        (1..limit).filter(|&n| !(0..=n / a).any(|i| (n - i * a).is_multiple_of(b))).collect()
    }

    proptest! {
        #[test]
        fn two_generator_gap_count(a in 2u64..30, b in 2u64..30) {
            prop_assume!(gcd(a, b) == 1);
            let s = NumericalSemigroup::from_generators(&[a, b]).unwrap();
            prop_assert_eq!(s.genus() as u64, (a - 1) * (b - 1) / 2);
            prop_assert_eq!(s.gaps, brute_gaps(a, b));
        }
    }

    #[test]
    fn pole_numbers_small() {
        let c = make_catalog(CurveId::Fermat { root_q: 5 }).unwrap();
        let s = census(&c.curve, 5).unwrap();
        for p in &s.inflexions {
            let e = fermat_pole_numbers(5, p).unwrap();
            assert_eq!(e.pole_orders, (2, 3));
            assert!(e.regular_elsewhere());
            assert_eq!(e.semigroup.genus(), 1);
        }
        let regular = points(&c.curve).into_iter().find(|p| !s.inflexions.contains(p)).unwrap();
        assert_eq!(fermat_pole_numbers(5, &regular), Err(InvariantError::NotAnInflexion));
    }

    #[test]
    fn artin_schreier_semigroups() {
        let s = as_semigroup_at_infinity(11, 3).unwrap();
        assert!(s.valuations_balance);
        assert_eq!(s.semigroup.genus(), 10);
        assert_eq!(as_semigroup_at_infinity(11, 4).unwrap().semigroup.genus(), 15);
        assert!(matches!(as_semigroup_at_infinity(11, 5), Err(InvariantError::BadParameters(_))));
    }

    #[test]
    fn non_isomorphism_seven() {
        let e = non_isomorphism_evidence(7).unwrap();
        assert_eq!((e.genus_fermat, e.genus_artin_schreier), (3, 3));
        assert_eq!((e.points_fermat, e.points_artin_schreier), (92, 92));
        assert_eq!(e.fermat_semigroup.generators, vec![3, 4]);
        assert_eq!(e.artin_schreier_semigroup.generators, vec![2, 7]);
        assert!(e.consistent());
        assert!(matches!(non_isomorphism_evidence(13), Err(InvariantError::BadParameters(_))));
    }

    #[test]
    fn hessian_zeros_are_the_inflexions() {
        for rq in [11, 13] {
            let c = make_catalog(CurveId::Fermat { root_q: rq }).unwrap().curve;
            let h = crate::curve::hessian(&c);
            let mut zeros: Vec<_> = crate::curve::points(&c).into_iter().filter(|p| h.is_on(p)).collect();
            zeros.sort();
            let mut infl = census(&c, rq).unwrap().inflexions;
            infl.sort();
            assert_eq!(zeros, infl);
        }
    }
}
