//! Homogeneous trivariate polynomials, projective points, and the plane-curve
//! operations built on them: evaluation, tangents, Hessian, singularity search
//! and rational-point enumeration.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::field::{Extension, FieldElement, FieldError, FieldSpec, FIELD_CAP};
use crate::linalg::{self, Mat3, Vec3};
use crate::series::Series;
use crate::upoly::UPoly;

/// Exponent triple `(i, j, k)` of `X0^i X1^j X2^k`.
pub type Exps = [u32; 3];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("term {exps:?} does not have total degree {degree}")]
    NotHomogeneous { exps: Exps, degree: u32 },
    #[error("(0, 0, 0) is not a projective point")]
    ZeroPoint,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is singular")]
    SingularPoint,
    #[error("enumeration over a field of size {size} exceeds the 2^24 cap")]
    CapExceeded { size: u128 },
    #[error("expected a nonzero form of degree 1 or 2, got degree {0}")]
    NotLineOrConic(u32),
}

/// A homogeneous polynomial in `X0, X1, X2`. Terms are kept in lexicographic
/// order of exponents with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    field: FieldSpec,
    degree: u32,
    terms: BTreeMap<Exps, FieldElement>,
}

impl HomogPoly {
    pub fn new(
        field: &FieldSpec,
        degree: u32,
        terms: impl IntoIterator<Item = (Exps, FieldElement)>,
    ) -> Result<Self, CurveError> {
        let mut out = HomogPoly::zero(field, degree);
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(CurveError::NotHomogeneous { exps: e, degree });
            }
            if !field.contains(c) {
                return Err(CurveError::SpecMismatch);
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(field: &FieldSpec, degree: u32, terms: &[(i64, Exps)]) -> Result<Self, CurveError> {
        Self::new(field, degree, terms.iter().map(|&(c, e)| (e, field.from_int(c))))
    }

    pub fn zero(field: &FieldSpec, degree: u32) -> Self {
        HomogPoly { field: field.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn monomial(field: &FieldSpec, exps: Exps, c: FieldElement) -> Self {
        let mut out = Self::zero(field, exps.iter().sum());
        out.add_term(exps, c);
        out
    }

    /// The linear form `a0 X0 + a1 X1 + a2 X2`.
    pub fn linear(field: &FieldSpec, a: Vec3) -> Self {
        let mut out = Self::zero(field, 1);
        out.add_term([1, 0, 0], a[0]);
        out.add_term([0, 1, 0], a[1]);
        out.add_term([0, 0, 1], a[2]);
        out
    }

    fn add_term(&mut self, e: Exps, c: FieldElement) {
        let f = &self.field;
        let v = f.add(self.terms.get(&e).copied().unwrap_or_else(|| f.zero()), c);
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exps) -> FieldElement {
        self.terms.get(&e).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficients of a linear form as `(a0, a1, a2)`.
    pub fn linear_coeffs(&self) -> Vec3 {
        [self.coeff([1, 0, 0]), self.coeff([0, 1, 0]), self.coeff([0, 0, 1])]
    }

    pub fn add(&self, o: &HomogPoly) -> HomogPoly {
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (&e, &c) in &o.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn neg(&self) -> HomogPoly {
        self.scale(self.field.from_int(-1))
    }

    pub fn sub(&self, o: &HomogPoly) -> HomogPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: FieldElement) -> HomogPoly {
        let f = &self.field;
        let mut out = HomogPoly::zero(f, self.degree);
        for (&e, &a) in &self.terms {
            out.add_term(e, f.mul(a, c));
        }
        out
    }

    pub fn mul(&self, o: &HomogPoly) -> HomogPoly {
        let f = &self.field;
        let mut out = HomogPoly::zero(f, self.degree + o.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &o.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> HomogPoly {
        let f = &self.field;
        let mut acc = HomogPoly::monomial(f, [0, 0, 0], f.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to `X_i`.
    pub fn partial(&self, i: usize) -> HomogPoly {
        let f = &self.field;
        let mut out = HomogPoly::zero(f, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[i] -= 1;
            out.add_term(ne, f.mul(c, f.from_int(e[i] as i64)));
        }
        out
    }

    pub fn evaluate(&self, x: &Vec3) -> FieldElement {
        let f = &self.field;
        let d = self.degree as usize;
        let pows: Vec<Vec<FieldElement>> = x
            .iter()
            .map(|&xi| {
                let mut v = Vec::with_capacity(d + 1);
                let mut acc = f.one();
                for _ in 0..=d {
                    v.push(acc);
                    acc = f.mul(acc, xi);
                }
                v
            })
            .collect();
        self.terms.iter().fold(f.zero(), |acc, (e, &c)| {
            let m = f.mul(f.mul(pows[0][e[0] as usize], pows[1][e[1] as usize]), pows[2][e[2] as usize]);
            f.add(acc, f.mul(c, m))
        })
    }

    /// Value at a projective point (normalized coordinates).
    pub fn evaluate_at(&self, p: &ProjPoint) -> Result<FieldElement, CurveError> {
        self.check_point(p)?;
        Ok(self.evaluate(&p.coords))
    }

    pub fn check_point(&self, p: &ProjPoint) -> Result<(), CurveError> {
        if p.coords.iter().all(|&c| self.field.contains(c)) {
            Ok(())
        } else {
            Err(CurveError::SpecMismatch)
        }
    }

    pub fn gradient(&self, x: &Vec3) -> Vec3 {
        [self.partial(0).evaluate(x), self.partial(1).evaluate(x), self.partial(2).evaluate(x)]
    }

    /// Composition with a parametrized point `(X0(t), X1(t), X2(t))`.
    pub fn eval_series(&self, x: &[Series; 3]) -> Series {
        let f = &self.field;
        let n = x.iter().map(Series::precision).min().unwrap_or(0);
        let d = self.degree as usize;
        let mut used = [vec![false; d + 1], vec![false; d + 1], vec![false; d + 1]];
        for e in self.terms.keys() {
            for i in 0..3 {
                used[i][e[i] as usize] = true;
            }
        }
        let pows: Vec<Vec<Series>> = (0..3)
            .map(|i| {
                let top = used[i].iter().rposition(|&u| u).unwrap_or(0);
                let mut v = Vec::with_capacity(top + 1);
                v.push(Series::constant(f, f.one(), n));
                for k in 1..=top {
                    let next = v[k - 1].mul(&x[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Series::zero(f, n);
        for (e, &c) in &self.terms {
            let m = pows[0][e[0] as usize].mul(&pows[1][e[1] as usize]).mul(&pows[2][e[2] as usize]);
            acc = acc.add(&m.scale(c));
        }
        acc
    }

    /// `G(X) = C(A X)`. Points of `G` are `A^-1` applied to points of `C`.
    pub fn transform(&self, a: &Mat3) -> HomogPoly {
        let f = &self.field;
        let d = self.degree;
        let forms: Vec<HomogPoly> = (0..3).map(|i| HomogPoly::linear(f, a[i])).collect();
        let pows: Vec<Vec<HomogPoly>> = forms
            .iter()
            .map(|l| {
                let mut v = vec![HomogPoly::monomial(f, [0, 0, 0], f.one())];
                for k in 1..=d as usize {
                    let next = v[k - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = HomogPoly::zero(f, d);
        for (e, &c) in &self.terms {
            let m = pows[0][e[0] as usize].mul(&pows[1][e[1] as usize]).mul(&pows[2][e[2] as usize]);
            out = out.add(&m.scale(c));
        }
        out
    }

    /// Substitutes `X_i -> forms[i]` (all of equal degree).
    pub fn substitute(&self, forms: &[HomogPoly; 3]) -> HomogPoly {
        let f = &self.field;
        let dd = forms[0].degree();
        let mut out = HomogPoly::zero(f, self.degree * dd);
        for (e, &c) in &self.terms {
            let m = forms[0].pow(e[0]).mul(&forms[1].pow(e[1])).mul(&forms[2].pow(e[2]));
            out = out.add(&m.scale(c));
        }
        out
    }

    /// The same form with coefficients pushed into an extension field.
    pub fn embed(&self, ext: &Extension) -> HomogPoly {
        assert!(*ext.base() == self.field, "embedding a curve through a foreign extension");
        HomogPoly {
            field: ext.big().clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(&e, &c)| (e, ext.embed(c))).collect(),
        }
    }

    /// Scaled so the coefficient of the lexicographically largest exponent is 1.
    pub fn normalized(&self) -> HomogPoly {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, &c)) => self.scale(self.field.inv(c).expect("stored coefficients are nonzero")),
        }
    }

    /// `Some(s)` with `self = s * other`, `s != 0`.
    pub fn scalar_multiple_of(&self, other: &HomogPoly) -> Option<FieldElement> {
        if self.field != other.field || self.degree != other.degree || self.terms.len() != other.terms.len() {
            return None;
        }
        let (e, &c) = other.terms.iter().next()?;
        let s = self.field.div(self.coeff(*e), c).ok()?;
        (!s.is_zero() && other.scale(s) == *self).then_some(s)
    }

    pub fn is_on(&self, p: &ProjPoint) -> bool {
        self.evaluate(&p.coords).is_zero()
    }
}

/// A projective point, normalized so its first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec3,
}

impl ProjPoint {
    pub fn new(field: &FieldSpec, coords: Vec3) -> Result<Self, CurveError> {
        for &c in &coords {
            field.check(c)?;
        }
        let lead = coords.iter().copied().find(|c| !c.is_zero()).ok_or(CurveError::ZeroPoint)?;
        let s = field.inv(lead)?;
        Ok(ProjPoint { coords: coords.map(|c| field.mul(c, s)) })
    }

    pub fn from_ints(field: &FieldSpec, c: [i64; 3]) -> Result<Self, CurveError> {
        Self::new(field, c.map(|x| field.from_int(x)))
    }

    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    pub fn field_id(&self) -> u64 {
        self.coords[0].field_id()
    }

    /// Applies a coordinatewise field map (embedding, Frobenius) and renormalizes.
    pub fn map(&self, target: &FieldSpec, g: impl Fn(FieldElement) -> FieldElement) -> ProjPoint {
        ProjPoint::new(target, self.coords.map(g)).expect("field maps preserve nonzero vectors")
    }

    /// `A * P`.
    pub fn transform(&self, field: &FieldSpec, a: &Mat3) -> Result<ProjPoint, CurveError> {
        ProjPoint::new(field, linalg::apply(field, a, &self.coords))
    }
}

/// A nonzero form of degree 1 or 2: a member of the series cut by lines or conics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineOrConic(HomogPoly);

impl LineOrConic {
    /// Normalizes so the lexicographically leading coefficient is 1.
    pub fn new(form: HomogPoly) -> Result<Self, CurveError> {
        if !(1..=2).contains(&form.degree()) || form.is_zero() {
            return Err(CurveError::NotLineOrConic(form.degree()));
        }
        Ok(LineOrConic(form.normalized()))
    }

    pub fn form(&self) -> &HomogPoly {
        &self.0
    }

    pub fn into_form(self) -> HomogPoly {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.degree()
    }
}

/// Outcome of the bounded singular-point search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nonsingularity {
    /// No singular point over GF(q^k) for `k <= checked_up_to`.
    Nonsingular { checked_up_to: usize },
    /// A singular point over GF(q^extension_degree).
    Singular { point: ProjPoint, extension_degree: usize },
}

/// Searches for common zeros of `C` and its partials over GF(q^k), k = 1..=k_max,
/// stopping early at the field-size cap. A bounded search, not a proof.
pub fn is_nonsingular(curve: &HomogPoly, k_max: usize) -> Result<Nonsingularity, CurveError> {
    let base = curve.field();
    let mut checked = 0;
    for k in 1..=k_max {
        let size = (base.q() as u128).pow(k as u32);
        if size > FIELD_CAP as u128 {
            break;
        }
        let (field, c) = if k == 1 {
            (base.clone(), curve.clone())
        } else {
            let ext = base.extension(k)?;
            (ext.big().clone(), curve.embed(&ext))
        };
        if let Some(point) = find_singular(&field, &c)? {
            return Ok(Nonsingularity::Singular { point, extension_degree: k });
        }
        checked = k;
    }
    Ok(Nonsingularity::Nonsingular { checked_up_to: checked })
}

fn find_singular(field: &FieldSpec, c: &HomogPoly) -> Result<Option<ProjPoint>, CurveError> {
    let polys = [c.clone(), c.partial(0), c.partial(1), c.partial(2)];
    let common = |slice: &dyn Fn(&HomogPoly) -> UPoly| -> Vec<FieldElement> {
        let g = polys.iter().fold(UPoly::zero(field), |acc, p| acc.gcd(&slice(p)));
        if g.is_zero() {
            field.elements().collect()
        } else {
            g.roots()
        }
    };
    // (0, 1, 0)
    let top = [field.zero(), field.one(), field.zero()];
    if polys.iter().all(|p| p.evaluate(&top).is_zero()) {
        return Ok(Some(ProjPoint::new(field, top)?));
    }
    // (1, y, 0)
    let ys = common(&|p: &HomogPoly| slice_at_infinity(p));
    if let Some(&y) = ys.first() {
        return Ok(Some(ProjPoint::new(field, [field.one(), y, field.zero()])?));
    }
    // (x, y, 1)
    let hit = field.elements().collect::<Vec<_>>().into_par_iter().find_map_first(|x| {
        let ys = common(&|p: &HomogPoly| slice_affine(p, x));
        ys.first().map(|&y| [x, y, field.one()])
    });
    Ok(match hit {
        Some(c) => Some(ProjPoint::new(field, c)?),
        None => None,
    })
}

// C(x, Y, 1) as a polynomial in Y.
fn slice_affine(c: &HomogPoly, x: FieldElement) -> UPoly {
    let f = c.field();
    let d = c.degree() as usize;
    let mut xp = Vec::with_capacity(d + 1);
    let mut acc = f.one();
    for _ in 0..=d {
        xp.push(acc);
        acc = f.mul(acc, x);
    }
    let mut coeffs = vec![f.zero(); d + 1];
    for (e, &a) in c.terms() {
        let j = e[1] as usize;
        coeffs[j] = f.add(coeffs[j], f.mul(a, xp[e[0] as usize]));
    }
    UPoly::new(f, coeffs)
}

// C(1, Y, 0) as a polynomial in Y.
fn slice_at_infinity(c: &HomogPoly) -> UPoly {
    let f = c.field();
    let mut coeffs = vec![f.zero(); c.degree() as usize + 1];
    for (e, &a) in c.terms() {
        if e[2] == 0 {
            coeffs[e[1] as usize] = f.add(coeffs[e[1] as usize], a);
        }
    }
    UPoly::new(f, coeffs)
}

/// All points of `C` over its own coefficient field, sorted canonically.
///
/// The chart `X2 = 1` is handled by extracting, for each `x`, the roots of
/// `C(x, Y, 1)` that lie in the field; the line `X2 = 0` is scanned directly.
pub fn points(curve: &HomogPoly) -> Vec<ProjPoint> {
    let f = curve.field();
    let roots_or_all = |g: UPoly| if g.is_zero() { f.elements().collect() } else { g.roots() };
    let mut out: Vec<ProjPoint> = (0..f.q())
        .into_par_iter()
        .flat_map_iter(|v| {
            let x = f.element(v).expect("in range");
            roots_or_all(slice_affine(curve, x))
                .into_iter()
                .map(move |y| ProjPoint::new(f, [x, y, f.one()]).expect("nonzero"))
        })
        .collect();
    for y in roots_or_all(slice_at_infinity(curve)) {
        out.push(ProjPoint::new(f, [f.one(), y, f.zero()]).expect("nonzero"));
    }
    if curve.coeff([0, curve.degree(), 0]).is_zero() {
        out.push(ProjPoint::new(f, [f.zero(), f.one(), f.zero()]).expect("nonzero"));
    }
    out.sort();
    out
}

/// Points of `C` over GF(q^k). For `k > 1` the points live in the flattened
/// extension field returned by `curve.field().extension(k)`.
pub fn rational_points(curve: &HomogPoly, k: usize) -> Result<Vec<ProjPoint>, CurveError> {
    let size = (curve.field().q() as u128).pow(k.max(1) as u32);
    if k == 0 || size > FIELD_CAP as u128 {
        return Err(CurveError::CapExceeded { size });
    }
    if k == 1 {
        return Ok(points(curve));
    }
    let ext = curve.field().extension(k)?;
    Ok(points(&curve.embed(&ext)))
}

/// The tangent line at a nonsingular point, normalized.
pub fn tangent_line(curve: &HomogPoly, p: &ProjPoint) -> Result<LineOrConic, CurveError> {
    if !curve.evaluate_at(p)?.is_zero() {
        return Err(CurveError::NotOnCurve);
    }
    let g = curve.gradient(p.coords());
    if g.iter().all(|c| c.is_zero()) {
        return Err(CurveError::SingularPoint);
    }
    LineOrConic::new(HomogPoly::linear(curve.field(), g))
}

/// Determinant of the matrix of second partials, a form of degree `3(d - 2)`.
pub fn hessian(curve: &HomogPoly) -> HomogPoly {
    let f = curve.field();
    if curve.degree() < 2 {
        return HomogPoly::zero(f, 0);
    }
    let first: Vec<HomogPoly> = (0..3).map(|i| curve.partial(i)).collect();
    let h: Vec<Vec<HomogPoly>> = (0..3).map(|i| (0..3).map(|j| first[i].partial(j)).collect()).collect();
    let minor = |a: usize, b: usize| h[1][a].mul(&h[2][b]).sub(&h[1][b].mul(&h[2][a]));
    h[0][0]
        .mul(&minor(1, 2))
        .sub(&h[0][1].mul(&minor(0, 2)))
        .add(&h[0][2].mul(&minor(0, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fermat(f: &FieldSpec, n: u32) -> HomogPoly {
        HomogPoly::from_ints(f, n, &[(1, [n, 0, 0]), (1, [0, n, 0]), (1, [0, 0, n])]).unwrap()
    }

    fn gf(p: u64, m: usize) -> FieldSpec {
        FieldSpec::new(p, m, None).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f121 = gf(11, 2);
        let c6 = fermat(&f121, 6);
        for lam in f121.nth_roots(f121.from_int(-1), 6) {
            let p = ProjPoint::new(&f121, [f121.one(), lam, f121.zero()]).unwrap();
            assert!(c6.evaluate_at(&p).unwrap().is_zero());
        }
        let f25 = gf(5, 2);
        let c3 = fermat(&f25, 3);
        assert!(c3.evaluate_at(&ProjPoint::from_ints(&f25, [1, -1, 0]).unwrap()).unwrap().is_zero());
        assert_eq!(c3.evaluate_at(&ProjPoint::from_ints(&f25, [1, 1, 1]).unwrap()).unwrap(), f25.from_int(3));
        let other = ProjPoint::from_ints(&f121, [1, 1, 1]).unwrap();
        assert_eq!(c3.evaluate_at(&other), Err(CurveError::SpecMismatch));
    }

    #[test]
    fn homogeneity_is_enforced() {
        let f = gf(11, 1);
        let r = HomogPoly::from_ints(&f, 3, &[(1, [3, 0, 0]), (1, [1, 1, 0])]);
        assert!(matches!(r, Err(CurveError::NotHomogeneous { .. })));
    }

    #[test]
    fn point_normalization() {
        let f = gf(11, 1);
        let p = ProjPoint::from_ints(&f, [0, 3, 6]).unwrap();
        assert_eq!(p.coords(), &[f.zero(), f.one(), f.from_int(2)]);
        assert_eq!(ProjPoint::from_ints(&f, [0, 0, 0]), Err(CurveError::ZeroPoint));
    }

    #[test]
    fn fermat_counts() {
        assert_eq!(points(&fermat(&gf(5, 2), 3)).len(), 36);
        assert_eq!(points(&fermat(&gf(11, 2), 6)).len(), 342);
    }

    #[test]
    fn hermitian_count() {
        let f = gf(11, 2);
        assert_eq!(points(&fermat(&f, 12)).len(), 11 * 11 * 11 + 1);
    }

    #[test]
    fn points_match_brute_force() {
        let f = gf(7, 2);
        let c = HomogPoly::from_ints(&f, 3, &[(1, [0, 2, 1]), (-1, [3, 0, 0]), (-1, [1, 0, 2]), (3, [0, 0, 3])])
            .unwrap();
        let mut brute = Vec::new();
        for a in f.elements() {
            for b in f.elements() {
                for z in f.elements() {
                    if let Ok(p) = ProjPoint::new(&f, [a, b, z]) {
                        if c.is_on(&p) {
                            brute.push(p);
                        }
                    }
                }
            }
        }
        brute.sort();
        brute.dedup();
        assert_eq!(points(&c), brute);
    }

    #[test]
    fn artin_schreier_plane_model_is_singular_at_infinity() {
        let f = gf(11, 2);
        let c = HomogPoly::from_ints(&f, 11, &[(1, [0, 11, 0]), (1, [0, 1, 10]), (-1, [3, 0, 8])]).unwrap();
        match is_nonsingular(&c, 1).unwrap() {
            Nonsingularity::Singular { point, extension_degree } => {
                assert_eq!(point, ProjPoint::from_ints(&f, [1, 0, 0]).unwrap());
                assert_eq!(extension_degree, 1);
            }
            other => panic!("expected a singular point, got {other:?}"),
        }
    }

    #[test]
    fn fermat_is_nonsingular_over_small_extensions() {
        let c = fermat(&gf(5, 2), 3);
        assert_eq!(is_nonsingular(&c, 2).unwrap(), Nonsingularity::Nonsingular { checked_up_to: 2 });
    }

    #[test]
    fn tangent_examples() {
        let f25 = gf(5, 2);
        let c3 = fermat(&f25, 3);
        let t = tangent_line(&c3, &ProjPoint::from_ints(&f25, [1, -1, 0]).unwrap()).unwrap();
        assert_eq!(t.form(), &HomogPoly::from_ints(&f25, 1, &[(1, [1, 0, 0]), (1, [0, 1, 0])]).unwrap());

        let f = gf(11, 2);
        let c6 = fermat(&f, 6);
        let lam = f.nth_roots(f.from_int(-1), 6)[0];
        let p = ProjPoint::new(&f, [lam, f.zero(), f.one()]).unwrap();
        let t = tangent_line(&c6, &p).unwrap();
        let expect = HomogPoly::linear(&f, [f.one(), f.zero(), f.neg(lam)]);
        assert_eq!(t.form(), &expect);

        let off = ProjPoint::from_ints(&f, [1, 1, 1]).unwrap();
        assert_eq!(tangent_line(&c6, &off), Err(CurveError::NotOnCurve));
        // the cusp y^2 z = x^3 at the origin
        let cusp = HomogPoly::from_ints(&f, 3, &[(1, [0, 2, 1]), (-1, [3, 0, 0])]).unwrap();
        let o = ProjPoint::from_ints(&f, [0, 0, 1]).unwrap();
        assert_eq!(tangent_line(&cusp, &o), Err(CurveError::SingularPoint));
    }

    #[test]
    fn hessian_examples() {
        let f = gf(11, 1);
        let conic = HomogPoly::from_ints(&f, 2, &[(1, [2, 0, 0]), (1, [0, 1, 1])]).unwrap();
        let h = hessian(&conic);
        assert_eq!(h.degree(), 0);
        assert_eq!(h.coeff([0, 0, 0]), f.from_int(-2));

        let f25 = gf(5, 2);
        let h3 = hessian(&fermat(&f25, 3));
        assert_eq!(h3.degree(), 3);
        assert!(h3.is_on(&ProjPoint::from_ints(&f25, [1, -1, 0]).unwrap()));
    }

    #[test]
    fn transform_moves_points_by_inverse() {
        let f = gf(7, 2);
        let c = fermat(&f, 4);
        let a: Mat3 = [
            [f.from_int(1), f.from_int(2), f.zero()],
            [f.zero(), f.generator(), f.from_int(3)],
            [f.from_int(5), f.zero(), f.one()],
        ];
        let inv = linalg::inverse(&f, &a).unwrap();
        let g = c.transform(&a);
        let mut moved: Vec<_> = points(&c).iter().map(|p| p.transform(&f, &inv).unwrap()).collect();
        moved.sort();
        assert_eq!(points(&g), moved);
    }
}
