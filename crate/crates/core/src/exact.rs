//! Exact sign predicates on floating-point input.
//!
//! Every finite `f64` is a dyadic rational, so the sign of a polynomial in
//! the inputs is decided exactly by evaluating in `BigRational` whenever a
//! floating-point filter cannot certify it.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Vec3 = [f64; 3];

fn det3_f64(a: Vec3, b: Vec3, c: Vec3) -> (f64, f64) {
    let m1 = b[1] * c[2] - b[2] * c[1];
    let m2 = b[2] * c[0] - b[0] * c[2];
    let m3 = b[0] * c[1] - b[1] * c[0];
    let det = a[0] * m1 + a[1] * m2 + a[2] * m3;
    let p1 = (b[1] * c[2]).abs() + (b[2] * c[1]).abs();
    let p2 = (b[2] * c[0]).abs() + (b[0] * c[2]).abs();
    let p3 = (b[0] * c[1]).abs() + (b[1] * c[0]).abs();
    let permanent = a[0].abs() * p1 + a[1].abs() * p2 + a[2].abs() * p3;
    (det, permanent)
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

/// Exact `det[a; b; c]` as a rational.
pub fn det3_exact(a: Vec3, b: Vec3, c: Vec3) -> BigRational {
    let [a0, a1, a2] = a.map(rational);
    let [b0, b1, b2] = b.map(rational);
    let [c0, c1, c2] = c.map(rational);
    a0 * (&b1 * &c2 - &b2 * &c1) + a1 * (&b2 * &c0 - &b0 * &c2) + a2 * (b0 * c1 - b1 * c0)
}

/// Exact sign of `det[a; b; c] = a · (b × c)`.
pub fn orient3(a: Vec3, b: Vec3, c: Vec3) -> i8 {
    if a == b || b == c || a == c {
        return 0;
    }
    let (det, permanent) = det3_f64(a, b, c);
    // forward error bound of the expansion above
    let bound = 8.0 * f64::EPSILON * permanent;
    if det > bound {
        return 1;
    }
    if det < -bound {
        return -1;
    }
    let exact = det3_exact(a, b, c);
    if exact.is_zero() {
        0
    } else if exact.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs_of_basis() {
        let (x, y, z) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
        assert_eq!(orient3(x, y, z), 1);
        assert_eq!(orient3(y, x, z), -1);
        assert_eq!(orient3(x, y, [1.0, 1.0, 0.0]), 0);
    }

    #[test]
    fn near_degenerate_is_exact() {
        let a = [0.1, 0.2, 0.3];
        let b = [0.4, 0.5, 0.6];
        let c = [0.7, 0.8, 0.9];
        let expected = det3_exact(a, b, c);
        let s = orient3(a, b, c);
        assert_eq!(s as i32, if expected.is_zero() { 0 } else if expected.is_positive() { 1 } else { -1 });
        // a perturbation of one ulp decides the sign consistently with the rational value
        let c2 = [0.7, 0.8, f64::from_bits(0.9f64.to_bits() + 1)];
        let e2 = det3_exact(a, b, c2);
        assert_eq!(orient3(a, b, c2) as i32, if e2.is_positive() { 1 } else if e2.is_zero() { 0 } else { -1 });
    }
}
