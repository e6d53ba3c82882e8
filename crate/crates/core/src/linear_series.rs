//! Global quantities of the series cut by lines and by conics: generic order
//! sequences, Frobenius orders checked pointwise, the degrees of the
//! ramification and Frobenius divisors, and the bounds they imply.

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::curve::{rational_points, CurveError, HomogPoly, ProjPoint};
use crate::field::Extension;
use crate::local::{binom_det_mod_p, branch_at, default_precision, orders_on_branch, osculating_form_on, LocalError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("empty sample")]
    EmptySample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    /// Cut by lines.
    Sigma1,
    /// Cut by conics.
    Sigma2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesDescriptor {
    pub which: Which,
    pub r: usize,
    pub d_series: u32,
}

impl SeriesDescriptor {
    pub fn new(which: Which, curve_degree: u32) -> Self {
        match which {
            Which::Sigma1 => SeriesDescriptor { which, r: 2, d_series: curve_degree },
            Which::Sigma2 => SeriesDescriptor { which, r: 5, d_series: 2 * curve_degree },
        }
    }

    /// Degree of the forms cutting the series.
    pub fn form_degree(&self) -> u32 {
        match self.which {
            Which::Sigma1 => 1,
            Which::Sigma2 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSequences {
    pub epsilon: Vec<usize>,
    pub nu: Vec<usize>,
    /// Every sampled Frobenius image lay on the osculating form.
    pub verified: bool,
    /// Number of samples that passed the membership check.
    pub evidence: usize,
    pub samples: usize,
}

/// A curve together with sample points over GF(q^k).
#[derive(Debug, Clone)]
pub struct Sample {
    pub ext: Option<Extension>,
    /// The curve over the field the points live in.
    pub curve: HomogPoly,
    pub points: Vec<ProjPoint>,
}

/// Deterministically draws up to `count` points of `curve` over GF(q^k). For
/// `k > 1` only points not defined over GF(q) are eligible. The draw is
/// seeded and taken from the canonically sorted point list.
pub fn sample_points(curve: &HomogPoly, k: usize, count: usize, seed: u64) -> Result<Sample, SeriesError> {
    let all = rational_points(curve, k)?;
    let (ext, big, eligible) = if k > 1 {
        let ext = curve.field().extension(k).map_err(CurveError::from)?;
        let big = curve.embed(&ext);
        let eligible: Vec<ProjPoint> =
            all.into_iter().filter(|p| p.coords().iter().any(|&c| ext.restrict(c).is_none())).collect();
        (Some(ext), big, eligible)
    } else {
        (None, curve.clone(), all)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amount = count.min(eligible.len());
    let mut idx = sample(&mut rng, eligible.len(), amount).into_vec();
    idx.sort_unstable();
    Ok(Sample { ext, curve: big, points: idx.into_iter().map(|i| eligible[i]).collect() })
}

/// Per-point order lists of the series at each sample point.
pub fn order_lists(curve: &HomogPoly, desc: &SeriesDescriptor, points: &[ProjPoint]) -> Result<Vec<Vec<usize>>, SeriesError> {
    let prec = default_precision(curve.degree());
    points
        .par_iter()
        .map(|p| {
            let b = branch_at(curve, p, prec)?;
            Ok(orders_on_branch(&b, desc.form_degree())?)
        })
        .collect()
}

/// Coordinatewise minimum of the order lists over the sample.
pub fn generic_orders(curve: &HomogPoly, desc: &SeriesDescriptor, points: &[ProjPoint]) -> Result<Vec<usize>, SeriesError> {
    let lists = order_lists(curve, desc, points)?;
    minimum(&lists).ok_or(SeriesError::EmptySample)
}

pub fn minimum(lists: &[Vec<usize>]) -> Option<Vec<usize>> {
    let first = lists.first()?.clone();
    Some(lists.iter().skip(1).fold(first, |acc, l| acc.iter().zip(l).map(|(a, b)| *a.min(b)).collect()))
}

/// Does the q-Frobenius image of `p` lie on the osculating line or conic at
/// `p`? `ext` is the extension `p` lives in, or `None` for a rational point.
pub fn frobenius_osculation_check(
    curve: &HomogPoly,
    p: &ProjPoint,
    ext: Option<&Extension>,
    which: Which,
) -> Result<bool, SeriesError> {
    let b = branch_at(curve, p, default_precision(curve.degree()))?;
    let k = SeriesDescriptor::new(which, curve.degree()).form_degree();
    let (form, _) = osculating_form_on(&b, k)?;
    let image = match ext {
        Some(e) => p.map(e.big(), |c| e.frobenius_q(c)),
        None => *p,
    };
    Ok(form.form().is_on(&image))
}

/// Generic orders and Frobenius orders from one sample.
pub fn order_sequences(sample: &Sample, desc: &SeriesDescriptor) -> Result<OrderSequences, SeriesError> {
    if sample.points.is_empty() {
        return Err(SeriesError::EmptySample);
    }
    let epsilon = generic_orders(&sample.curve, desc, &sample.points)?;
    let checks: Vec<bool> = sample
        .points
        .par_iter()
        .map(|p| frobenius_osculation_check(&sample.curve, p, sample.ext.as_ref(), desc.which))
        .collect::<Result<_, _>>()?;
    let evidence = checks.iter().filter(|&&c| c).count();
    let verified = evidence == checks.len();
    let nu = frobenius_orders(&epsilon, desc.r, verified);
    Ok(OrderSequences { epsilon, nu, verified, evidence, samples: checks.len() })
}

/// The Frobenius orders implied by the membership checks: drop `e_{r-1}` when
/// the Frobenius image lies on the osculating form, otherwise drop `e_r`.
pub fn frobenius_orders(epsilon: &[usize], r: usize, verified: bool) -> Vec<usize> {
    if verified {
        epsilon[..r - 1].iter().chain(std::iter::once(&epsilon[r])).copied().collect()
    } else {
        epsilon[..r].to_vec()
    }
}

/// `deg R = (2g - 2) * sum(e_i) + (r + 1) d`.
pub fn ramification_degree(g: i64, epsilon: &[usize], r: usize, d_series: i64) -> i64 {
    let s: i64 = epsilon.iter().map(|&e| e as i64).sum();
    (2 * g - 2) * s + (r as i64 + 1) * d_series
}

/// `deg S = (2g - 2) * sum(nu_i) + (q + r) d`.
pub fn frobenius_degree(g: i64, nu: &[usize], r: usize, d_series: i64, q: i64) -> i64 {
    let s: i64 = nu.iter().map(|&e| e as i64).sum();
    (2 * g - 2) * s + (q + r as i64) * d_series
}

/// `N <= deg S / r`.
pub fn sv_bound(deg_s: i64, r: usize) -> Ratio<i64> {
    assert!(r >= 1);
    Ratio::new(deg_s, r as i64)
}

/// Castelnuovo's bound on `2g` for a curve in `P^n` of degree `2 sqrt(q)`:
/// `(2 sqrt(q) - n)^2 / (4n)` for even `n`, `((2 sqrt(q) - n)^2 - 1) / (4n)`
/// for odd `n`, rounded down.
pub fn castelnuovo_bound(n_dim: i64, sqrt_q: i64) -> i64 {
    assert!(n_dim >= 1);
    let a = (2 * sqrt_q - n_dim).pow(2);
    let num = if n_dim % 2 == 0 { a } else { a - 1 };
    num.div_euclid(4 * n_dim)
}

/// `e_i <= j_i(P)` for every `i`.
pub fn orders_dominate(epsilon: &[usize], j: &[usize]) -> bool {
    epsilon.len() == j.len() && epsilon.iter().zip(j).all(|(e, j)| e <= j)
}

/// `nu_i <= j_{i+1}(P) - j_1(P)` for every `i`, at a rational point.
pub fn frobenius_orders_bounded(nu: &[usize], j: &[usize]) -> bool {
    nu.len() + 1 == j.len() && nu.iter().enumerate().all(|(i, &n)| n + j[1] <= j[i + 1])
}

/// `det(C(j_{i+1}(P), nu_k)) mod p`. Advisory: nonzero means the Frobenius
/// divisor has the minimal valuation at `P`.
pub fn frobenius_binomial_det(nu: &[usize], j: &[usize], p: u64) -> u64 {
    binom_det_mod_p(&j[1..], nu, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn fermat(f: &FieldSpec, n: u32) -> HomogPoly {
        HomogPoly::from_ints(f, n, &[(1, [n, 0, 0]), (1, [0, n, 0]), (1, [0, 0, n])]).unwrap()
    }

    #[test]
    fn degree_formulas() {
        assert_eq!(ramification_degree(10, &[0, 1, 2], 2, 6), 72);
        assert_eq!(ramification_degree(10, &[0, 1, 2, 3, 4, 11], 5, 12), 450);
        assert_eq!(ramification_degree(1, &[0, 1, 2], 2, 3), 9);
        assert_eq!(frobenius_degree(10, &[0, 1, 2, 3, 11], 5, 12, 121), 1818);
        assert_eq!(frobenius_degree(10, &[0, 1], 2, 6, 121), 756);
        assert_eq!(frobenius_degree(0, &[0, 1], 2, 1, 4), -2 + 6);
    }

    #[test]
    fn bounds() {
        assert_eq!(sv_bound(1818, 5), Ratio::new(1818, 5));
        assert!(sv_bound(1818, 5) >= Ratio::from_integer(342));
        assert_eq!(sv_bound(0, 3), Ratio::from_integer(0));
        assert_eq!(castelnuovo_bound(5, 11), 14);
        assert_eq!(castelnuovo_bound(2, 11), 50);
        assert_eq!(castelnuovo_bound(1, 11), 110);
    }

    #[test]
    fn cubic_generic_orders() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        let c = fermat(&f, 3);
        let s = sample_points(&c, 1, 36, 1).unwrap();
        let d = SeriesDescriptor::new(Which::Sigma1, 3);
        assert_eq!(generic_orders(&s.curve, &d, &s.points).unwrap(), vec![0, 1, 2]);
        assert_eq!(generic_orders(&s.curve, &d, &[]), Err(SeriesError::EmptySample));
    }

    #[test]
    fn sample_is_deterministic_and_nonrational() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        let c = fermat(&f, 3);
        let a = sample_points(&c, 2, 10, 3).unwrap();
        let b = sample_points(&c, 2, 10, 3).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.points.len(), 10);
        let ext = a.ext.as_ref().unwrap();
        for p in &a.points {
            assert!(p.coords().iter().any(|&c| ext.restrict(c).is_none()));
            assert!(a.curve.is_on(p));
        }
    }

    #[test]
    fn rational_points_pass_frobenius_check_trivially() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        let c = fermat(&f, 3);
        let s = sample_points(&c, 1, 5, 0).unwrap();
        for p in &s.points {
            assert!(frobenius_osculation_check(&c, p, None, Which::Sigma2).unwrap());
        }
    }

    #[test]
    fn inequality_helpers() {
        assert!(orders_dominate(&[0, 1, 2], &[0, 1, 6]));
        assert!(!orders_dominate(&[0, 1, 3], &[0, 1, 2]));
        assert!(frobenius_orders_bounded(&[0, 1, 2, 3, 11], &[0, 1, 2, 3, 4, 12]));
        assert!(!frobenius_orders_bounded(&[0, 1, 2, 3, 11], &[0, 1, 2, 3, 4, 11]));
    }

    #[test]
    fn fermat_six_conic_series_over_quadratic_extension() {
        let f = FieldSpec::new(11, 2, None).unwrap();
        let c = fermat(&f, 6);
        let s = sample_points(&c, 2, 30, 7).unwrap();
        assert_eq!(s.points.len(), 30);
        let d2 = SeriesDescriptor::new(Which::Sigma2, 6);
        let seq = order_sequences(&s, &d2).unwrap();
        assert_eq!(seq.epsilon, vec![0, 1, 2, 3, 4, 11]);
        assert!(seq.verified);
        assert_eq!(seq.evidence, 30);
        assert_eq!(seq.nu, vec![0, 1, 2, 3, 11]);
        let d1 = SeriesDescriptor::new(Which::Sigma1, 6);
        let seq1 = order_sequences(&s, &d1).unwrap();
        assert_eq!(seq1.epsilon, vec![0, 1, 2]);
        assert_eq!(seq1.nu, vec![0, 1]);
    }

    #[test]
    fn frobenius_check_fails_on_a_non_maximal_cubic() {
        let f = FieldSpec::new(11, 2, None).unwrap();
        // Y^2 Z = X^3 + X Z^2 + Z^3 has 140 points over GF(121), not 144
        let c = HomogPoly::from_ints(&f, 3, &[(1, [0, 2, 1]), (-1, [3, 0, 0]), (-1, [1, 0, 2]), (-1, [0, 0, 3])]).unwrap();
        assert_eq!(rational_points(&c, 1).unwrap().len(), 140);
        let s = sample_points(&c, 2, 30, 7).unwrap();
        let fails = s
            .points
            .iter()
            .filter(|p| !frobenius_osculation_check(&s.curve, p, s.ext.as_ref(), Which::Sigma2).unwrap())
            .count();
        assert!(fails > 0);
    }
}
