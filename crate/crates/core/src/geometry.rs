//! Plane geometry on phase-space points stored as complex numbers.

use num_complex::Complex64;

use crate::error::{QubusError, Result};

/// Relative tolerance for parallel bisectors and collinear triples.
pub const DEGENERACY_TOL: f64 = 1e-9;

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

/// Circumcenter of the triangle `a, b, c`.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN counts as degenerate
pub fn circumcenter(a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * cross(ab, ac);
    let diameter = ab.norm().max(ac.norm()).max((c - b).norm());
    if !(d.abs() > DEGENERACY_TOL * diameter * diameter) {
        return Err(QubusError::DegenerateGeometry(format!(
            "points {a}, {b}, {c} are collinear"
        )));
    }
    let ab2 = ab.norm_sqr();
    let ac2 = ac.norm_sqr();
    let ux = (ac.im * ab2 - ab.im * ac2) / d;
    let uy = (ab.re * ac2 - ac.re * ab2) / d;
    Ok(a + Complex64::new(ux, uy))
}

/// Intersection of the perpendicular bisectors of segments `(p1, p2)` and `(q1, q2)`,
/// i.e. the unique point equidistant from `p1, p2` and from `q1, q2`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn bisector_intersection(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> Result<Complex64> {
    let u = p2 - p1;
    let v = q2 - q1;
    let det = cross(u, v);
    if !(det.abs() > DEGENERACY_TOL * u.norm() * v.norm()) {
        return Err(QubusError::DegenerateGeometry("perpendicular bisectors are parallel".into()));
    }
    // x·u = (|p2|²−|p1|²)/2 and x·v = (|q2|²−|q1|²)/2
    let r1 = 0.5 * (p2.norm_sqr() - p1.norm_sqr());
    let r2 = 0.5 * (q2.norm_sqr() - q1.norm_sqr());
    let x = (r1 * v.im - r2 * u.im) / det;
    let y = (u.re * r2 - v.re * r1) / det;
    Ok(Complex64::new(x, y))
}

/// Signed angle of the rotation about `center` carrying `from` onto the ray through `to`.
pub fn signed_angle(center: Complex64, from: Complex64, to: Complex64) -> f64 {
    ((to - center) / (from - center)).arg()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn circumcenter_right_triangle_any_order() {
        let (a, b, c) = (p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0));
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b), (a, c, b)] {
            let o = circumcenter(x, y, z).unwrap();
            assert!((o - p(0.5, 0.5)).norm() < 1e-15);
        }
    }

    #[test]
    fn circumcenter_equilateral() {
        let o = circumcenter(p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)).unwrap();
        assert!((o - p(0.5, 3f64.sqrt() / 6.0)).norm() < 1e-15);
    }

    #[test]
    fn circumcenter_is_equidistant_far_from_origin() {
        let (a, b, c) = (p(100.3, -7.0), p(101.0, -6.2), p(99.1, -5.5));
        let o = circumcenter(a, b, c).unwrap();
        let r = (a - o).norm();
        assert!(((b - o).norm() - r).abs() < 1e-12);
        assert!(((c - o).norm() - r).abs() < 1e-12);
    }

    #[test]
    fn collinear_triple_rejected() {
        assert!(circumcenter(p(0.0, 0.0), p(1.0, 1.0), p(3.0, 3.0)).is_err());
        assert!(circumcenter(p(1.0, 1.0), p(1.0, 1.0), p(2.0, 0.0)).is_err());
    }

    #[test]
    fn bisectors_of_a_square() {
        // diagonals of the unit square cross at its centre
        let x = bisector_intersection(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 0.0), p(0.0, 1.0)).unwrap();
        assert!((x - p(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn parallel_segments_rejected() {
        assert!(bisector_intersection(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 2.0), p(3.0, 2.0)).is_err());
    }

    #[test]
    fn signed_angle_direction() {
        let a = signed_angle(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 2.0));
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((signed_angle(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)) + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
