//! Local analysis at nonsingular points: branch parametrizations, intersection
//! multiplicities, order sequences of the series cut by lines and conics,
//! osculating conics, point classification and the Wronskian valuation.
//!
//! Everything is driven by a [`Branch`]: the curve is parametrized near `P`
//! as `(X0(t), X1(t), X2(t))` with one chart coordinate fixed to 1, one
//! coordinate equal to `a + t`, and the remaining coordinate lifted by Newton
//! iteration on truncated power series. Orders of a linear series are then
//! read off by Gaussian elimination on the coefficient matrix of the
//! branch-composed monomials.
//!
//! Derivatives along the branch are always Hasse derivatives; classical
//! derivatives lose information in characteristic `p`.

use crate::curve::{tangent_line, CurveError, Exps, HomogPoly, LineOrConic, ProjPoint};
use crate::field::{binom_mod_p, FieldElement, FieldSpec};
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("precision {0} is too small (need at least 2)")]
    PrecisionTooSmall(usize),
    #[error("orders not resolved within precision {0}")]
    PrecisionExhausted(usize),
    #[error("osculating conic is not unique at this point")]
    NotUnique,
    #[error("tangent order {j2} is neither 2 nor {expected}: not a plane maximal curve of the target degree")]
    ContractViolation { j2: usize, expected: usize },
    #[error("degree {degree} is 1 mod p = {p}; classicality for lines is not guaranteed")]
    ClassicalityGuardFailed { degree: u32, p: u64 },
    #[error("Wronskian order {v} is inconsistent with the lower bound {bound} (binomial determinant {det} mod p)")]
    WronskianInconsistent { v: usize, bound: usize, det: u64 },
}

/// Intersection multiplicity, or a lower bound when the composed series
/// vanishes to the working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(usize),
    AtLeast(usize),
}

impl Multiplicity {
    pub fn finite(self) -> Option<usize> {
        match self {
            Multiplicity::Finite(k) => Some(k),
            Multiplicity::AtLeast(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointKind {
    Regular,
    Inflexion,
}

/// Truncated parametrization of a curve at a nonsingular point.
#[derive(Debug, Clone)]
pub struct Branch {
    center: ProjPoint,
    chart: usize,
    parameter: usize,
    dependent: usize,
    coords: [Series; 3],
}

impl Branch {
    pub fn center(&self) -> &ProjPoint {
        &self.center
    }

    /// Index of the coordinate fixed to 1.
    pub fn chart(&self) -> usize {
        self.chart
    }

    /// Index of the coordinate equal to `a + t`.
    pub fn parameter(&self) -> usize {
        self.parameter
    }

    /// Index of the coordinate given by the lifted series.
    pub fn dependent(&self) -> usize {
        self.dependent
    }

    /// The lifted series of the dependent coordinate.
    pub fn series(&self) -> &Series {
        &self.coords[self.dependent]
    }

    pub fn coords(&self) -> &[Series; 3] {
        &self.coords
    }

    pub fn precision(&self) -> usize {
        self.coords[0].precision()
    }

    pub fn field(&self) -> &FieldSpec {
        self.coords[0].field()
    }
}

/// Working precision `4d + 2`, which is `2 sqrt(q) + 4` for `d = (sqrt(q)+1)/2`.
/// By Bezout no conic order exceeds `2d`, so this leaves ample headroom.
pub fn default_precision(degree: u32) -> usize {
    4 * degree as usize + 2
}

/// Newton lifting of the curve at `p` to `precision` coefficients.
pub fn branch_at(curve: &HomogPoly, p: &ProjPoint, precision: usize) -> Result<Branch, LocalError> {
    if precision < 2 {
        return Err(LocalError::PrecisionTooSmall(precision));
    }
    let f = curve.field();
    if !curve.evaluate_at(p)?.is_zero() {
        return Err(CurveError::NotOnCurve.into());
    }
    let x = p.coords();
    let grad = curve.gradient(x);
    if grad.iter().all(|c| c.is_zero()) {
        return Err(CurveError::SingularPoint.into());
    }
    let chart = [2, 1, 0].into_iter().find(|&i| !x[i].is_zero()).expect("nonzero point");
    let scale = f.inv(x[chart]).expect("chart coordinate is nonzero");
    let affine: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
    // Euler's relation: at a nonsingular point some affine partial is nonzero.
    let (parameter, dependent) = if !grad[affine[1]].is_zero() {
        (affine[0], affine[1])
    } else {
        (affine[1], affine[0])
    };
    let mut coords: [Series; 3] = std::array::from_fn(|i| {
        let v = f.mul(x[i], scale);
        if i == parameter {
            Series::shifted_parameter(f, v, precision)
        } else {
            Series::constant(f, v, precision)
        }
    });
    let d_dep = curve.partial(dependent);
    let mut converged = false;
    for _ in 0..64 {
        let g = curve.eval_series(&coords);
        if g.is_zero() {
            converged = true;
            break;
        }
        let h = d_dep.eval_series(&coords).inverse().ok_or(CurveError::SingularPoint)?;
        coords[dependent] = coords[dependent].sub(&g.mul(&h));
    }
    assert!(converged, "Newton lifting at a nonsingular point converges quadratically");
    Ok(Branch { center: *p, chart, parameter, dependent, coords })
}

/// Order in `t` of `form` composed with the branch.
pub fn imult(form: &HomogPoly, branch: &Branch) -> Multiplicity {
    let s = form.eval_series(branch.coords());
    match s.order() {
        Some(k) => Multiplicity::Finite(k),
        None => Multiplicity::AtLeast(s.precision()),
    }
}

/// Monomials of degree `k` in lexicographic exponent order.
pub fn monomials(k: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    for i in 0..=k {
        for j in 0..=k - i {
            out.push([i, j, k - i - j]);
        }
    }
    out.sort();
    out
}

/// Row echelon data of the series spanned by all degree-`k` forms along a branch.
struct Span {
    /// Distinct orders found, ascending, each with a form attaining it.
    pivots: Vec<(usize, Vec<FieldElement>)>,
    /// Combinations vanishing to full precision.
    kernel: Vec<Vec<FieldElement>>,
    basis: Vec<Exps>,
}

fn span(branch: &Branch, k: u32) -> Span {
    let f = branch.field();
    let basis = monomials(k);
    let n = basis.len();
    let mut rows: Vec<Vec<FieldElement>> = basis
        .iter()
        .map(|&e| HomogPoly::monomial(f, e, f.one()).eval_series(branch.coords()).coeffs().to_vec())
        .collect();
    let mut combos: Vec<Vec<FieldElement>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
    let mut open: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    for col in 0..branch.precision() {
        let Some(pos) = open.iter().position(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        let r = open.remove(pos);
        let inv = f.inv(rows[r][col]).expect("pivot is nonzero");
        for &o in &open {
            let factor = f.mul(rows[o][col], inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..rows[o].len() {
                rows[o][c] = f.sub(rows[o][c], f.mul(factor, rows[r][c]));
            }
            for c in 0..n {
                combos[o][c] = f.sub(combos[o][c], f.mul(factor, combos[r][c]));
            }
        }
        pivots.push((col, combos[r].clone()));
    }
    let kernel = open.iter().map(|&r| combos[r].clone()).collect();
    Span { pivots, kernel, basis }
}

fn form_from(f: &FieldSpec, k: u32, basis: &[Exps], coeffs: &[FieldElement]) -> HomogPoly {
    HomogPoly::new(f, k, basis.iter().copied().zip(coeffs.iter().copied())).expect("basis monomials are homogeneous")
}

/// Orders of the series cut by forms of degree `k` (1: lines, 2: conics) at `p`.
pub fn sigma_orders(curve: &HomogPoly, p: &ProjPoint, k: u32, precision: usize) -> Result<Vec<usize>, LocalError> {
    let b = branch_at(curve, p, precision)?;
    orders_on_branch(&b, k)
}

pub fn orders_on_branch(b: &Branch, k: u32) -> Result<Vec<usize>, LocalError> {
    let s = span(b, k);
    if !s.kernel.is_empty() {
        return Err(LocalError::PrecisionExhausted(b.precision()));
    }
    Ok(s.pivots.iter().map(|(o, _)| *o).collect())
}

/// The conic of maximal contact at `p`, with its intersection multiplicity.
pub fn osculating_conic(curve: &HomogPoly, p: &ProjPoint) -> Result<(LineOrConic, Multiplicity), LocalError> {
    let b = branch_at(curve, p, default_precision(curve.degree()))?;
    osculating_conic_on(&b)
}

pub fn osculating_conic_on(b: &Branch) -> Result<(LineOrConic, Multiplicity), LocalError> {
    osculating_form_on(b, 2)
}

/// The line (`k = 1`) or conic (`k = 2`) of maximal contact along the branch.
pub fn osculating_form_on(b: &Branch, k: u32) -> Result<(LineOrConic, Multiplicity), LocalError> {
    let f = b.field();
    let s = span(b, k);
    let (coeffs, mult) = match s.kernel.len() {
        0 => {
            let (o, c) = s.pivots.last().expect("at least one pivot");
            (c.clone(), Multiplicity::Finite(*o))
        }
        1 => (s.kernel[0].clone(), Multiplicity::AtLeast(b.precision())),
        _ => return Err(LocalError::NotUnique),
    };
    let form = LineOrConic::new(form_from(f, k, &s.basis, &coeffs))?;
    Ok((form, mult))
}

/// `j_2` for the series of lines: the contact order of the tangent.
pub fn tangent_order(curve: &HomogPoly, p: &ProjPoint) -> Result<Multiplicity, LocalError> {
    let t = tangent_line(curve, p)?;
    let b = branch_at(curve, p, curve.degree() as usize + 2)?;
    Ok(imult(t.form(), &b))
}

/// Classifies a rational point of a plane maximal curve of degree
/// `(root_q + 1)/2` by the contact order of its tangent.
pub fn classify_point(curve: &HomogPoly, p: &ProjPoint, root_q: u64) -> Result<PointKind, LocalError> {
    let expected = root_q.div_ceil(2) as usize;
    match tangent_order(curve, p)? {
        Multiplicity::Finite(2) => Ok(PointKind::Regular),
        Multiplicity::Finite(j) if j == expected => Ok(PointKind::Inflexion),
        Multiplicity::Finite(j2) | Multiplicity::AtLeast(j2) => Err(LocalError::ContractViolation { j2, expected }),
    }
}

/// `det(C(j_i, e_k)) mod p`.
pub fn binom_det_mod_p(js: &[usize], eps: &[usize], p: u64) -> u64 {
    let n = js.len();
    assert_eq!(n, eps.len());
    let mut m: Vec<Vec<i64>> = js
        .iter()
        .map(|&j| eps.iter().map(|&e| binom_mod_p(j as u64, e as u64, p) as i64).collect())
        .collect();
    let p = p as i64;
    let mut det = 1i64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| m[r][c] % p != 0) else {
            return 0;
        };
        if r != c {
            m.swap(r, c);
            det = (p - det) % p;
        }
        det = det * m[c][c] % p;
        let inv = (1..p).find(|&x| x * m[c][c] % p == 1).expect("prime modulus");
        for r in c + 1..n {
            let factor = m[r][c] * inv % p;
            for k in c..n {
                m[r][k] = (m[r][k] - factor * m[c][k]).rem_euclid(p);
            }
        }
    }
    det.rem_euclid(p) as u64
}

/// Order of the Hasse-Wronskian of the coordinates along the branch, i.e. the
/// valuation at `p` of the ramification divisor of the series of lines.
///
/// Checked against the lower bound `j_2 - 2`, with equality required when the
/// binomial determinant is nonzero mod `p`.
pub fn v_r1(curve: &HomogPoly, p: &ProjPoint) -> Result<usize, LocalError> {
    let f = curve.field();
    if curve.degree() as u64 % f.p() == 1 % f.p() {
        return Err(LocalError::ClassicalityGuardFailed { degree: curve.degree(), p: f.p() });
    }
    let b = branch_at(curve, p, default_precision(curve.degree()))?;
    v_r1_on(&b)
}

pub fn v_r1_on(b: &Branch) -> Result<usize, LocalError> {
    let f = b.field();
    let rows: Vec<Vec<Series>> =
        (0..3).map(|k| b.coords().iter().map(|s| s.hasse(k).truncate(b.precision() - 2)).collect()).collect();
    let minor = |a: usize, c: usize| rows[1][a].mul(&rows[2][c]).sub(&rows[1][c].mul(&rows[2][a]));
    let w = rows[0][0]
        .mul(&minor(1, 2))
        .sub(&rows[0][1].mul(&minor(0, 2)))
        .add(&rows[0][2].mul(&minor(0, 1)));
    let v = w.order().ok_or(LocalError::PrecisionExhausted(w.precision()))?;
    let j = orders_on_branch(b, 1)?;
    let bound = j[2] - 2;
    let det = binom_det_mod_p(&j, &[0, 1, 2], f.p());
    if v < bound || (det != 0 && v != bound) {
        return Err(LocalError::WronskianInconsistent { v, bound, det });
    }
    Ok(v)
}

/// Per-point order data.
#[derive(Debug, Clone)]
pub struct OrderData {
    pub point: ProjPoint,
    pub sigma1_orders: Vec<usize>,
    pub sigma2_orders: Vec<usize>,
    /// Present when a target `sqrt(q)` was supplied and the point is rational.
    pub kind: Option<PointKind>,
    pub osculating_conic: LineOrConic,
    pub conic_multiplicity: Multiplicity,
    pub v_r1: usize,
}

/// Everything local at `p` from a single branch.
pub fn order_data(curve: &HomogPoly, p: &ProjPoint, root_q: Option<u64>) -> Result<OrderData, LocalError> {
    let f = curve.field();
    if curve.degree() as u64 % f.p() == 1 % f.p() {
        return Err(LocalError::ClassicalityGuardFailed { degree: curve.degree(), p: f.p() });
    }
    let b = branch_at(curve, p, default_precision(curve.degree()))?;
    let sigma1_orders = orders_on_branch(&b, 1)?;
    let sigma2_orders = orders_on_branch(&b, 2)?;
    let (osculating_conic, conic_multiplicity) = osculating_conic_on(&b)?;
    let v_r1 = v_r1_on(&b)?;
    let kind = match root_q {
        Some(r) => {
            let expected = r.div_ceil(2) as usize;
            match sigma1_orders[2] {
                2 => Some(PointKind::Regular),
                j if j == expected => Some(PointKind::Inflexion),
                j2 => return Err(LocalError::ContractViolation { j2, expected }),
            }
        }
        None => None,
    };
    Ok(OrderData { point: *p, sigma1_orders, sigma2_orders, kind, osculating_conic, conic_multiplicity, v_r1 })
}

/// `{j1, j2, 2 j1, j1 + j2, 2 j2}` is contained in the conic orders.
pub fn conic_orders_contain_line_sums(sigma1: &[usize], sigma2: &[usize]) -> bool {
    let (j1, j2) = (sigma1[1], sigma1[2]);
    [j1, j2, 2 * j1, j1 + j2, 2 * j2].iter().all(|o| sigma2.contains(o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::points;

    fn gf(p: u64, m: usize) -> FieldSpec {
        FieldSpec::new(p, m, None).unwrap()
    }

    fn fermat(f: &FieldSpec, n: u32) -> HomogPoly {
        HomogPoly::from_ints(f, n, &[(1, [n, 0, 0]), (1, [0, n, 0]), (1, [0, 0, n])]).unwrap()
    }

    fn inflexion(f: &FieldSpec) -> ProjPoint {
        let lam = f.nth_roots(f.from_int(-1), 6)[0];
        ProjPoint::new(f, [lam, f.zero(), f.one()]).unwrap()
    }

    #[test]
    fn branch_kills_the_curve() {
        let f = gf(5, 2);
        let c = fermat(&f, 3);
        for p in points(&c) {
            let b = branch_at(&c, &p, 10).unwrap();
            assert!(c.eval_series(b.coords()).is_zero());
            assert_eq!(b.series().precision(), 10);
            assert!(b.coords().iter().zip(p.coords()).all(|(s, _)| s.precision() == 10));
        }
    }

    #[test]
    fn precision_one_is_rejected() {
        let f = gf(5, 2);
        let c = fermat(&f, 3);
        let p = ProjPoint::from_ints(&f, [1, -1, 0]).unwrap();
        assert!(matches!(branch_at(&c, &p, 1), Err(LocalError::PrecisionTooSmall(1))));
    }

    #[test]
    fn tangent_meets_flex_of_cubic_three_times() {
        let f = gf(5, 2);
        let c = fermat(&f, 3);
        let p = ProjPoint::from_ints(&f, [1, -1, 0]).unwrap();
        let b = branch_at(&c, &p, 10).unwrap();
        let t = HomogPoly::from_ints(&f, 1, &[(1, [1, 0, 0]), (1, [0, 1, 0])]).unwrap();
        assert_eq!(imult(&t, &b), Multiplicity::Finite(3));
        // a non-tangent line through P
        let l = HomogPoly::from_ints(&f, 1, &[(1, [1, 0, 0]), (1, [0, 1, 0]), (1, [0, 0, 1])]).unwrap();
        assert_eq!(imult(&l, &b), Multiplicity::Finite(1));
    }

    #[test]
    fn fermat_six_inflexion() {
        let f = gf(11, 2);
        let c = fermat(&f, 6);
        let p = inflexion(&f);
        let b = branch_at(&c, &p, 14).unwrap();
        // U - lam W has a single zero of order 6 at P
        let t = tangent_line(&c, &p).unwrap();
        assert_eq!(imult(t.form(), &b), Multiplicity::Finite(6));
        assert_eq!(orders_on_branch(&b, 1).unwrap(), vec![0, 1, 6]);
        assert_eq!(classify_point(&c, &p, 11).unwrap(), PointKind::Inflexion);
        assert_eq!(v_r1(&c, &p).unwrap(), 4);
        let (conic, mult) = osculating_conic(&c, &p).unwrap();
        assert_eq!(mult, Multiplicity::Finite(12));
        // at an inflexion the osculating conic is the doubled tangent
        assert!(conic.form().scalar_multiple_of(&t.form().mul(t.form())).is_some());
    }

    #[test]
    fn fermat_six_regular_point() {
        let f = gf(11, 2);
        let c = fermat(&f, 6);
        let p = points(&c).into_iter().find(|p| p.coords().iter().all(|x| !x.is_zero())).unwrap();
        assert_eq!(sigma_orders(&c, &p, 1, 14).unwrap(), vec![0, 1, 2]);
        assert_eq!(sigma_orders(&c, &p, 2, 14).unwrap(), vec![0, 1, 2, 3, 4, 12]);
        assert_eq!(classify_point(&c, &p, 11).unwrap(), PointKind::Regular);
        assert_eq!(v_r1(&c, &p).unwrap(), 0);
    }

    #[test]
    fn contract_violation_for_a_cubic_flex() {
        let f = gf(7, 1);
        let c = fermat(&f, 3);
        let p = ProjPoint::from_ints(&f, [1, -1, 0]).unwrap();
        assert_eq!(classify_point(&c, &p, 7), Err(LocalError::ContractViolation { j2: 3, expected: 4 }));
    }

    #[test]
    fn classicality_guard() {
        // degree 12 over GF(11) is 1 mod 11
        let f = gf(11, 2);
        let c = fermat(&f, 12);
        let p = points(&c)[0];
        assert!(matches!(v_r1(&c, &p), Err(LocalError::ClassicalityGuardFailed { .. })));
    }

    #[test]
    fn conic_curve_has_its_own_osculating_conic() {
        let f = gf(7, 1);
        let c = HomogPoly::from_ints(&f, 2, &[(1, [2, 0, 0]), (1, [0, 1, 1])]).unwrap();
        let p = ProjPoint::from_ints(&f, [0, 0, 1]).unwrap();
        let (conic, mult) = osculating_conic(&c, &p).unwrap();
        assert_eq!(mult, Multiplicity::AtLeast(10));
        assert!(conic.form().scalar_multiple_of(&c).is_some());
        assert!(matches!(sigma_orders(&c, &p, 2, 6), Err(LocalError::PrecisionExhausted(6))));
    }

    #[test]
    fn binomial_determinants() {
        assert_eq!(binom_det_mod_p(&[0, 1, 2], &[0, 1, 2], 11), 1);
        // C(6,2) = 15 = 4 mod 11
        assert_eq!(binom_det_mod_p(&[0, 1, 6], &[0, 1, 2], 11), 4);
        assert_eq!(binom_det_mod_p(&[0, 1, 11], &[0, 1, 2], 11), 0);
    }

    #[test]
    fn monomial_basis() {
        assert_eq!(monomials(1), vec![[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        assert_eq!(monomials(2).len(), 6);
    }
}
