//! Hyperboloid (Lorentz) model of the hyperbolic plane.
//!
//! Points are vectors `p` in R^{2,1} with `<p,p> = -1` and `p[0] > 0`, where
//! `<u,v> = -u0 v0 + u1 v1 + u2 v2`. Geodesics are intersections of the
//! hyperboloid with planes through the origin; they are represented by their
//! unit spacelike normal.

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(u: &Vec3, v: &Vec3) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

#[inline]
pub fn add(u: &Vec3, v: &Vec3) -> Vec3 {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

#[inline]
pub fn sub(u: &Vec3, v: &Vec3) -> Vec3 {
    [u[0] - v[0], u[1] - v[1], u[2] - v[2]]
}

#[inline]
pub fn scale(s: f64, u: &Vec3) -> Vec3 {
    [s * u[0], s * u[1], s * u[2]]
}

/// Lorentzian cross product: the result is `<,>`-orthogonal to both inputs.
pub fn cross(u: &Vec3, v: &Vec3) -> Vec3 {
    // Euclidean cross product followed by J = diag(-1, 1, 1).
    let c = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    [-c[0], c[1], c[2]]
}

pub const ORIGIN: Vec3 = [1.0, 0.0, 0.0];

/// Point at geodesic polar coordinates `(r, theta)` around the origin.
pub fn polar(r: f64, theta: f64) -> Vec3 {
    [r.cosh(), r.sinh() * theta.cos(), r.sinh() * theta.sin()]
}

/// Hyperbolic distance, stable for nearby points.
pub fn distance(p: &Vec3, q: &Vec3) -> f64 {
    let d = sub(p, q);
    let chord = dot(&d, &d).max(0.0).sqrt();
    2.0 * (chord / 2.0).asinh()
}

/// Geodesic midpoint of two points.
pub fn midpoint(p: &Vec3, q: &Vec3) -> Vec3 {
    let s = add(p, q);
    let n = (-dot(&s, &s)).sqrt();
    scale(1.0 / n, &s)
}

/// Rescale a timelike vector onto the upper sheet.
pub fn normalize_point(p: &Vec3) -> Vec3 {
    let n = (-dot(p, p)).sqrt();
    let s = if p[0] < 0.0 { -1.0 / n } else { 1.0 / n };
    scale(s, p)
}

/// Rescale a spacelike vector to unit length.
pub fn normalize_spacelike(v: &Vec3) -> Vec3 {
    let n = dot(v, v).sqrt();
    scale(1.0 / n, v)
}

/// Signed distance from `p` to the geodesic with unit normal `n`.
pub fn distance_to_line(p: &Vec3, n: &Vec3) -> f64 {
    dot(p, n).asinh()
}

/// Polar angle of a point around the origin.
pub fn angle(p: &Vec3) -> f64 {
    p[2].atan2(p[1])
}

/// Distance of a point from the origin.
pub fn radius(p: &Vec3) -> f64 {
    distance(&ORIGIN, p)
}

/// An orthonormal moving frame: base point, unit tangent, and the unit
/// normal obtained by rotating the tangent a quarter turn to the left.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub point: Vec3,
    pub tangent: Vec3,
    pub normal: Vec3,
}

impl Frame {
    pub fn origin() -> Self {
        Frame {
            point: ORIGIN,
            tangent: [0.0, 1.0, 0.0],
            normal: [0.0, 0.0, 1.0],
        }
    }

    /// Move along the geodesic in the tangent direction.
    pub fn advance(&self, s: f64) -> Self {
        let (c, sh) = (s.cosh(), s.sinh());
        Frame {
            point: add(&scale(c, &self.point), &scale(sh, &self.tangent)),
            tangent: add(&scale(sh, &self.point), &scale(c, &self.tangent)),
            normal: self.normal,
        }
    }

    pub fn turn_left(&self) -> Self {
        Frame {
            point: self.point,
            tangent: self.normal,
            normal: scale(-1.0, &self.tangent),
        }
    }

    /// Unit normal of the geodesic through the frame in the tangent
    /// direction.
    pub fn line(&self) -> Vec3 {
        self.normal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advance_moves_by_distance() {
        let f = Frame::origin().advance(1.3);
        assert!((distance(&ORIGIN, &f.point) - 1.3).abs() < 1e-14);
        assert!((dot(&f.point, &f.point) + 1.0).abs() < 1e-12);
        assert!(dot(&f.point, &f.tangent).abs() < 1e-12);
    }

    #[test]
    fn midpoint_is_equidistant() {
        let p = polar(0.7, 0.3);
        let q = polar(2.1, -1.9);
        let m = midpoint(&p, &q);
        let d = distance(&p, &q);
        assert!((distance(&p, &m) - d / 2.0).abs() < 1e-12);
        assert!((distance(&q, &m) - d / 2.0).abs() < 1e-12);
    }

    #[test]
    fn cross_is_orthogonal() {
        let u = polar(0.4, 1.0);
        let v = [0.2, 1.0, -0.3];
        let c = cross(&u, &v);
        assert!(dot(&c, &u).abs() < 1e-12);
        assert!(dot(&c, &v).abs() < 1e-12);
    }

    #[test]
    fn small_distances_are_accurate() {
        let p = polar(3.0, 0.0);
        let f = Frame { point: p, tangent: [3.0f64.sinh(), 3.0f64.cosh(), 0.0], normal: [0.0, 0.0, 1.0] };
        let q = f.advance(1e-9).point;
        assert!((distance(&p, &q) / 1e-9 - 1.0).abs() < 1e-5);
    }
}
