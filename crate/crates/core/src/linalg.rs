//! 3x3 matrices and 3-vectors over a field: projective maps, joins and meets.

use crate::field::{FieldElement, FieldSpec};

pub type Vec3 = [FieldElement; 3];
pub type Mat3 = [[FieldElement; 3]; 3];

pub fn identity(f: &FieldSpec) -> Mat3 {
    let (o, z) = (f.one(), f.zero());
    [[o, z, z], [z, o, z], [z, z, o]]
}

pub fn diag(f: &FieldSpec, d: [FieldElement; 3]) -> Mat3 {
    let z = f.zero();
    [[d[0], z, z], [z, d[1], z], [z, z, d[2]]]
}

pub fn det(f: &FieldSpec, m: &Mat3) -> FieldElement {
    let minor = |a: usize, b: usize| f.sub(f.mul(m[1][a], m[2][b]), f.mul(m[1][b], m[2][a]));
    let t0 = f.mul(m[0][0], minor(1, 2));
    let t1 = f.mul(m[0][1], minor(0, 2));
    let t2 = f.mul(m[0][2], minor(0, 1));
    f.add(f.sub(t0, t1), t2)
}

pub fn mul(f: &FieldSpec, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[f.zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = (0..3).fold(f.zero(), |acc, k| f.add(acc, f.mul(a[i][k], b[k][j])));
        }
    }
    out
}

pub fn apply(f: &FieldSpec, m: &Mat3, v: &Vec3) -> Vec3 {
    let row = |i: usize| (0..3).fold(f.zero(), |acc, k| f.add(acc, f.mul(m[i][k], v[k])));
    [row(0), row(1), row(2)]
}

pub fn inverse(f: &FieldSpec, m: &Mat3) -> Option<Mat3> {
    let d = det(f, m);
    let d_inv = f.inv(d).ok()?;
    let mut out = [[f.zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            // adjugate entry (i, j) is the (j, i) cofactor
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            let cof = f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
            *slot = f.mul(cof, d_inv);
        }
    }
    Some(out)
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut out = *m;
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = m[j][i];
        }
    }
    out
}

/// Cross product: the line through two points, or the meet of two lines.
pub fn cross(f: &FieldSpec, a: &Vec3, b: &Vec3) -> Vec3 {
    let c = |i: usize, j: usize| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
    [c(1, 2), c(2, 0), c(0, 1)]
}

pub fn dot(f: &FieldSpec, a: &Vec3, b: &Vec3) -> FieldElement {
    (0..3).fold(f.zero(), |acc, k| f.add(acc, f.mul(a[k], b[k])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let f = FieldSpec::new(7, 2, None).unwrap();
        let m: Mat3 = [
            [f.from_coeffs(&[1, 2]), f.from_int(3), f.zero()],
            [f.from_int(5), f.generator(), f.from_int(1)],
            [f.zero(), f.from_coeffs(&[4, 4]), f.from_int(6)],
        ];
        let inv = inverse(&f, &m).expect("invertible");
        assert_eq!(mul(&f, &m, &inv), identity(&f));
        assert_eq!(mul(&f, &inv, &m), identity(&f));
    }

    #[test]
    fn cross_is_orthogonal() {
        let f = FieldSpec::prime(11).unwrap();
        let a = [f.from_int(1), f.from_int(2), f.from_int(3)];
        let b = [f.from_int(4), f.from_int(0), f.from_int(9)];
        let c = cross(&f, &a, &b);
        assert!(dot(&f, &a, &c).is_zero());
        assert!(dot(&f, &b, &c).is_zero());
    }
}
