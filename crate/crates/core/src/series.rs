//! Truncated power series `a_0 + a_1 t + ... + a_{N-1} t^{N-1}` over a field.

use crate::field::{binom_mod_p, FieldElement, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl Series {
    pub fn zero(field: &FieldSpec, precision: usize) -> Self {
        Series { field: field.clone(), coeffs: vec![field.zero(); precision] }
    }

    pub fn constant(field: &FieldSpec, c: FieldElement, precision: usize) -> Self {
        let mut s = Self::zero(field, precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c + t`.
    pub fn shifted_parameter(field: &FieldSpec, c: FieldElement, precision: usize) -> Self {
        let mut s = Self::constant(field, c, precision);
        if precision > 1 {
            s.coeffs[1] = field.one();
        }
        s
    }

    pub fn from_coeffs(field: &FieldSpec, coeffs: Vec<FieldElement>) -> Self {
        Series { field: field.clone(), coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Index of the first nonzero coefficient; `None` if zero to precision.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    pub fn add(&self, o: &Series) -> Series {
        let f = &self.field;
        let n = self.precision().min(o.precision());
        Series::from_coeffs(f, (0..n).map(|i| f.add(self.coeffs[i], o.coeffs[i])).collect())
    }

    pub fn sub(&self, o: &Series) -> Series {
        let f = &self.field;
        let n = self.precision().min(o.precision());
        Series::from_coeffs(f, (0..n).map(|i| f.sub(self.coeffs[i], o.coeffs[i])).collect())
    }

    pub fn scale(&self, c: FieldElement) -> Series {
        let f = &self.field;
        Series::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &Series) -> Series {
        let f = &self.field;
        let n = self.precision().min(o.precision());
        let mut out = vec![f.zero(); n];
        for (i, &a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Series::from_coeffs(f, out)
    }

    /// Multiplicative inverse of a unit series (nonzero constant term).
    pub fn inverse(&self) -> Option<Series> {
        let f = &self.field;
        let n = self.precision();
        let c0 = *self.coeffs.first()?;
        let c0_inv = f.inv(c0).ok()?;
        let mut out = vec![f.zero(); n];
        out[0] = c0_inv;
        for k in 1..n {
            let mut acc = f.zero();
            for j in 1..=k {
                acc = f.add(acc, f.mul(self.coeffs[j], out[k - j]));
            }
            out[k] = f.neg(f.mul(acc, c0_inv));
        }
        Some(Series::from_coeffs(f, out))
    }

    /// Hasse derivative `D^k`, with `D^k t^i = C(i, k) t^(i-k)`. The result
    /// has precision `N - k`.
    pub fn hasse(&self, k: usize) -> Series {
        let f = &self.field;
        let p = f.p();
        let n = self.precision().saturating_sub(k);
        Series::from_coeffs(
            f,
            (0..n)
                .map(|i| {
                    let b = binom_mod_p((i + k) as u64, k as u64, p);
                    f.mul(self.coeffs[i + k], f.from_int(b as i64))
                })
                .collect(),
        )
    }

    pub fn truncate(&self, precision: usize) -> Series {
        Series::from_coeffs(&self.field, self.coeffs[..precision.min(self.precision())].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_times_self_is_one() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        let s = Series::from_coeffs(&f, (1..9).map(|i| f.from_coeffs(&[i, 2 * i])).collect());
        let prod = s.mul(&s.inverse().unwrap());
        assert_eq!(prod, Series::constant(&f, f.one(), 8));
    }

    #[test]
    fn hasse_derivative_of_power() {
        // D^2 t^13 over GF(11) = C(13,2) t^11 = 78 t^11 = t^11
        let f = FieldSpec::prime(11).unwrap();
        let mut c = vec![f.zero(); 16];
        c[13] = f.one();
        let d = Series::from_coeffs(&f, c).hasse(2);
        assert_eq!(d.precision(), 14);
        assert_eq!(d.order(), Some(11));
        assert_eq!(d.coeffs()[11], f.one());
        // D^1 t^11 vanishes in characteristic 11 while D^11 t^11 = 1.
        let mut c = vec![f.zero(); 16];
        c[11] = f.one();
        let s = Series::from_coeffs(&f, c);
        assert!(s.hasse(1).is_zero());
        assert_eq!(s.hasse(11).order(), Some(0));
    }
}
