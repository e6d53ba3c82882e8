//! Dense univariate polynomials over a [`FieldSpec`], with the gcd and
//! equal-degree splitting needed for root extraction.

use crate::field::{FieldElement, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UPoly {
    /// Coefficients low-to-high; trailing zeros are trimmed.
    pub fn new(field: &FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        UPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &FieldSpec, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    pub fn x(field: &FieldSpec) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: FieldElement) -> UPoly {
        let f = &self.field;
        UPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UPoly::new(f, out)
    }

    pub fn monic(&self) -> UPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&l) => self.scale(self.field.inv(l).expect("leading coefficient is nonzero")),
        }
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(d.coeffs[dd]).expect("leading coefficient is nonzero");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(f), self.clone());
        }
        let mut quot = vec![f.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = f.sub(r[idx], f.mul(c, di));
            }
        }
        r.truncate(dd);
        (UPoly::new(f, quot), UPoly::new(f, r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, mut e: u64, modulus: &UPoly) -> UPoly {
        let f = &self.field;
        let mut base = self.rem(modulus);
        let mut acc = UPoly::constant(f, f.one()).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Distinct roots in the coefficient field, sorted canonically.
    ///
    /// Panics on the zero polynomial, whose root set is the whole field.
    pub fn roots(&self) -> Vec<FieldElement> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let f = &self.field;
        if self.degree() == Some(0) {
            return Vec::new();
        }
        let g = self.monic();
        let x = UPoly::x(f);
        let xq = x.powmod(f.q(), &g);
        let split = g.gcd(&xq.sub(&x));
        let mut out = Vec::new();
        split_linear(&split, &mut out);
        out.sort();
        out
    }
}

// Cantor-Zassenhaus for a squarefree product of distinct linear factors. The
// shifts are tried in canonical order so the recursion is deterministic.
fn split_linear(g: &UPoly, out: &mut Vec<FieldElement>) {
    let f = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let r = f.div(f.neg(g.coeff(0)), g.coeff(1)).expect("degree one");
            out.push(r);
        }
        Some(deg) => {
            let half = (f.q() - 1) / 2;
            let one = UPoly::constant(f, f.one());
            for a in f.elements() {
                let shifted = UPoly::new(f, vec![a, f.one()]);
                let h = g.gcd(&shifted.powmod(half, g).sub(&one));
                let hd = h.degree().unwrap_or(0);
                if hd > 0 && hd < deg {
                    let (rest, _) = g.divrem(&h);
                    split_linear(&h, out);
                    split_linear(&rest, out);
                    return;
                }
            }
            unreachable!("some shift separates two distinct roots");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &FieldSpec, c: &[i64]) -> UPoly {
        UPoly::new(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let f = FieldSpec::prime(7).unwrap();
        let a = poly(&f, &[1, 2, 3, 4, 5]);
        let b = poly(&f, &[3, 0, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = FieldSpec::prime(11).unwrap();
        let common = poly(&f, &[2, 1]);
        let a = common.mul(&poly(&f, &[5, 0, 1]));
        let b = common.mul(&poly(&f, &[1, 1, 1]));
        assert_eq!(a.gcd(&b), common);
    }

    #[test]
    fn roots_match_scan() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        let g = poly(&f, &[1, 0, 0, 1]).mul(&poly(&f, &[3, 1, 0, 0, 1]));
        let scan: Vec<_> = f.elements().filter(|&x| g.eval(x).is_zero()).collect();
        assert_eq!(g.roots(), scan);
        assert_eq!(poly(&f, &[4]).roots(), vec![]);
    }

    #[test]
    fn repeated_roots_reported_once() {
        let f = FieldSpec::prime(13).unwrap();
        let g = poly(&f, &[1, 1]).mul(&poly(&f, &[1, 1])).mul(&poly(&f, &[-3, 1]));
        assert_eq!(g.roots(), vec![f.from_int(3), f.from_int(12)]);
    }
}
