//! Floating-point convex geometry for numeric cross-checks in the plane.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::kinematics::{kf_chi, so_coefficient};
use crate::model::ModelId;

const EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConvexBody2D {
    Polygon { vertices: Vec<[f64; 2]> },
    Disc { center: [f64; 2], radius: f64 },
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Drops repeated and collinear vertices, then checks strict convexity and CCW order.
fn normalize_polygon(vertices: &[[f64; 2]]) -> Result<Vec<[f64; 2]>> {
    let scale = vertices.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = EPS * scale * scale;
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(vertices.len());
    for &v in vertices {
        if pts.last().is_none_or(|&p| dist(p, v) > EPS * scale) {
            pts.push(v);
        }
    }
    while pts.len() > 1 && dist(pts[0], *pts.last().unwrap()) <= EPS * scale {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return domain("polygon needs at least 3 non-collinear vertices");
        }
        let flat = (0..n).find(|&i| cross(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]).abs() <= tol);
        match flat {
            Some(i) => {
                pts.remove(i);
            }
            None => break,
        }
    }
    let n = pts.len();
    if (0..n).any(|i| cross(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) < 0.0) {
        return domain("polygon must be convex with counter-clockwise vertices");
    }
    // a CCW star polygon still has positive turns; its winding shows in the angle sum
    let turning: f64 = (0..n)
        .map(|i| {
            let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
            let u = [b[0] - a[0], b[1] - a[1]];
            let v = [c[0] - b[0], c[1] - b[1]];
            (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1])
        })
        .sum();
    if (turning - 2.0 * PI).abs() > 1e-6 {
        return domain("polygon is not simple");
    }
    Ok(pts)
}

impl ConvexBody2D {
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Ok(ConvexBody2D::Polygon {
            vertices: normalize_polygon(&vertices)?,
        })
    }

    pub fn disc(center: [f64; 2], radius: f64) -> Result<Self> {
        if radius.is_nan() || radius <= 0.0 {
            return domain(format!("disc radius must be positive, got {radius}"));
        }
        Ok(ConvexBody2D::Disc { center, radius })
    }

    pub fn unit_square() -> Self {
        ConvexBody2D::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        }
    }

    /// Re-checks invariants; needed after deserialization.
    pub fn validated(self) -> Result<Self> {
        match self {
            ConvexBody2D::Polygon { vertices } => ConvexBody2D::polygon(vertices),
            ConvexBody2D::Disc { center, radius } => ConvexBody2D::disc(center, radius),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            ConvexBody2D::Polygon { vertices } => polygon_area(vertices),
            ConvexBody2D::Disc { radius, .. } => PI * radius * radius,
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            ConvexBody2D::Polygon { vertices } => polygon_perimeter(vertices),
            ConvexBody2D::Disc { radius, .. } => 2.0 * PI * radius,
        }
    }

    /// `−R_θ K`.
    pub fn rotate_reflect(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let f = |p: [f64; 2]| [-(c * p[0] - s * p[1]), -(s * p[0] + c * p[1])];
        match self {
            ConvexBody2D::Polygon { vertices } => ConvexBody2D::Polygon {
                vertices: vertices.iter().map(|&p| f(p)).collect(),
            },
            ConvexBody2D::Disc { center, radius } => ConvexBody2D::Disc {
                center: f(*center),
                radius: *radius,
            },
        }
    }
}

fn polygon_area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1])
        .sum::<f64>()
}

fn polygon_perimeter(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    (0..n).map(|i| dist(v[i], v[(i + 1) % n])).sum()
}

/// `(μ_0, μ_1, μ_2) = (1, perimeter/2, area)`.
pub fn intrinsic_volumes_2d(k: &ConvexBody2D) -> Result<[f64; 3]> {
    let k = k.clone().validated()?;
    Ok([1.0, k.perimeter() / 2.0, k.area()])
}

fn lowest_vertex(v: &[[f64; 2]]) -> usize {
    (0..v.len())
        .min_by(|&a, &b| v[a][1].total_cmp(&v[b][1]).then(v[a][0].total_cmp(&v[b][0])))
        .expect("nonempty")
}

/// Edge merge of two convex polygons by slope. A single point acts as the identity.
pub fn minkowski_sum(p: &[[f64; 2]], q: &[[f64; 2]]) -> Result<Vec<[f64; 2]>> {
    let norm = |v: &[[f64; 2]]| -> Result<Vec<[f64; 2]>> {
        if v.len() == 1 {
            Ok(v.to_vec())
        } else {
            normalize_polygon(v)
        }
    };
    let (p, q) = (norm(p)?, norm(q)?);
    if p.len() == 1 || q.len() == 1 {
        let (poly, pt) = if p.len() == 1 { (&q, p[0]) } else { (&p, q[0]) };
        return Ok(poly.iter().map(|v| [v[0] + pt[0], v[1] + pt[1]]).collect());
    }
    let (i0, j0) = (lowest_vertex(&p), lowest_vertex(&q));
    let (n, m) = (p.len(), q.len());
    let at = |v: &[[f64; 2]], i: usize| v[i % v.len()];
    let mut out = Vec::with_capacity(n + m);
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let a = at(&p, i0 + i);
        let b = at(&q, j0 + j);
        out.push([a[0] + b[0], a[1] + b[1]]);
        let ea = [at(&p, i0 + i + 1)[0] - a[0], at(&p, i0 + i + 1)[1] - a[1]];
        let eb = [at(&q, j0 + j + 1)[0] - b[0], at(&q, j0 + j + 1)[1] - b[1]];
        let c = ea[0] * eb[1] - ea[1] * eb[0];
        if j == m || (i < n && c > 0.0) {
            i += 1;
        } else if i == n || c < 0.0 {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    normalize_polygon(&out)
}

/// Area of `K ⊕ L` using `area(K ⊕ rB) = area K + r·perimeter K + πr²` when a disc is involved.
pub fn minkowski_area(k: &ConvexBody2D, l: &ConvexBody2D) -> Result<f64> {
    match (k, l) {
        (ConvexBody2D::Polygon { vertices: p }, ConvexBody2D::Polygon { vertices: q }) => {
            Ok(polygon_area(&minkowski_sum(p, q)?))
        }
        (ConvexBody2D::Disc { radius, .. }, other) | (other, ConvexBody2D::Disc { radius, .. }) => {
            Ok(other.area() + radius * other.perimeter() + PI * radius * radius)
        }
    }
}

/// `ω_k` in floating point.
pub fn omega_f64(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / k as f64 * omega_f64(k - 2),
    }
}

/// `vol(K + tB) = Σ_k μ_{n−k}(K) ω_k t^k`.
pub fn steiner_volume(mu: &[f64], n: usize, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return domain(format!("Steiner parameter must be non-negative, got {t}"));
    }
    if mu.len() != n + 1 {
        return domain(format!("expected {} intrinsic volumes, got {}", n + 1, mu.len()));
    }
    Ok((0..=n).map(|k| mu[n - k] * omega_f64(k) * t.powi(k as i32)).sum())
}

/// `μ_k(rB)` in dimension `n`.
pub fn ball_intrinsic_volumes(n: usize, r: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let binom = (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
            binom * omega_f64(n) / omega_f64(n - k) * r.powi(k as i32)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxN {
    pub sides: Vec<f64>,
}

impl BoxN {
    pub fn new(sides: Vec<f64>) -> Result<Self> {
        if sides.iter().any(|s| s.is_nan() || *s < 0.0) {
            return domain("box sides must be non-negative");
        }
        Ok(BoxN { sides })
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    /// `μ_k` of a box is the k-th elementary symmetric function of its sides.
    pub fn intrinsic_volumes(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.dim() + 1];
        e[0] = 1.0;
        for (i, &s) in self.sides.iter().enumerate() {
            for k in (1..=i + 1).rev() {
                e[k] += s * e[k - 1];
            }
        }
        e
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PkfCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// Uniform rotation quadrature of `∫ χ(K ∩ ḡL) dḡ` against the principal formula in the plane.
pub fn check_pkf_2d(k: &ConvexBody2D, l: &ConvexBody2D, nodes: usize) -> Result<PkfCheck> {
    if nodes < 16 {
        return domain(format!("need at least 16 quadrature nodes, got {nodes}"));
    }
    let (k, l) = (k.clone().validated()?, l.clone().validated()?);
    let lhs = (0..nodes)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / nodes as f64;
            minkowski_area(&k, &l.rotate_reflect(theta))
        })
        .sum::<Result<f64>>()?
        / nodes as f64;
    let (mk, ml) = (intrinsic_volumes_2d(&k)?, intrinsic_volumes_2d(&l)?);
    let table = kf_chi(ModelId::So(2))?;
    let rhs: f64 = (0..=2)
        .map(|a| so_coefficient(&table, a, 2 - a).eval_approx() * mk[a] * ml[2 - a])
        .sum();
    Ok(PkfCheck {
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / rhs.abs(),
    })
}

/// Convex polygon with vertices at sorted random angles on a circle of the given radius.
pub fn random_polygon(rng: &mut impl Rng, vertices: usize, radius: f64) -> Result<ConvexBody2D> {
    if vertices < 3 {
        return domain("a random polygon needs at least 3 vertices");
    }
    loop {
        let mut angles: Vec<f64> = (0..vertices).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let center = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let pts = angles
            .iter()
            .map(|a| [center[0] + radius * a.cos(), center[1] + radius * a.sin()])
            .collect();
        // three clustered angles can leave a sliver; resample rather than return it
        if let Ok(p) = ConvexBody2D::polygon(pts) {
            if p.area() > 1e-3 * radius * radius {
                return Ok(p);
            }
        }
    }
}

/// Deterministic sequence of random polygon pairs.
pub fn seeded_polygon_pairs(seed: u64, count: usize) -> Result<Vec<(ConvexBody2D, ConvexBody2D)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let nk = rng.gen_range(3..=10);
            let nl = rng.gen_range(3..=10);
            let rk = rng.gen_range(0.5..2.0);
            let rl = rng.gen_range(0.5..2.0);
            Ok((random_polygon(&mut rng, nk, rk)?, random_polygon(&mut rng, nl, rl)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn intrinsic_volume_examples() {
        assert_eq!(
            intrinsic_volumes_2d(&ConvexBody2D::unit_square()).unwrap(),
            [1.0, 2.0, 1.0]
        );
        let d = intrinsic_volumes_2d(&ConvexBody2D::disc([0.0, 0.0], 1.0).unwrap()).unwrap();
        assert!(close(d[1], PI, 1e-12) && close(d[2], PI, 1e-12));
        let seg = ConvexBody2D::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
        };
        assert!(intrinsic_volumes_2d(&seg).is_err());
        assert!(ConvexBody2D::polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn collinear_vertices_are_removed() {
        let p = ConvexBody2D::polygon(vec![[0.0, 0.0], [0.5, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(
            p,
            ConvexBody2D::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
        );
    }

    #[test]
    fn minkowski_examples() {
        let sq = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let s = minkowski_sum(&sq, &sq).unwrap();
        assert_eq!(s.len(), 4);
        assert!(close(polygon_area(&s), 4.0, 1e-12));
        assert!(close(polygon_perimeter(&s), 8.0, 1e-12));
        let shifted = minkowski_sum(&sq, &[[2.0, 3.0]]).unwrap();
        assert!(shifted.contains(&[2.0, 3.0]) && shifted.contains(&[3.0, 4.0]));
        let tri = vec![[0.0, 0.0], [2.0, 0.0], [0.5, 1.5]];
        assert!(close(
            polygon_area(&minkowski_sum(&tri, &tri).unwrap()),
            4.0 * polygon_area(&tri),
            1e-12
        ));
        assert!(minkowski_sum(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]], &sq).is_err());
    }

    #[test]
    fn steiner_examples() {
        let sq = BoxN::new(vec![1.0, 1.0]).unwrap();
        assert!(close(
            steiner_volume(&sq.intrinsic_volumes(), 2, 1.0).unwrap(),
            5.0 + PI,
            1e-14
        ));
        assert_eq!(steiner_volume(&sq.intrinsic_volumes(), 2, 0.0).unwrap(), 1.0);
        for n in 1..=4 {
            for t in [0.0, 0.5, 1.0, 2.0] {
                let v = steiner_volume(&ball_intrinsic_volumes(n, 1.0), n, t).unwrap();
                assert!(close(v, omega_f64(n) * (1.0 + t).powi(n as i32), 1e-9));
            }
        }
        assert!(steiner_volume(&[1.0, 2.0, 1.0], 2, -1.0).is_err());
    }

    #[test]
    fn pkf_examples() {
        let disc = ConvexBody2D::disc([0.0, 0.0], 1.0).unwrap();
        let r = check_pkf_2d(&disc, &disc, 16).unwrap();
        assert!(close(r.lhs, 4.0 * PI, 1e-12));
        assert!(r.rel_err < 1e-12);
        let sq = ConvexBody2D::unit_square();
        assert!(check_pkf_2d(&sq, &sq, 4096).unwrap().rel_err < 1e-3);
        let (a, b) = &seeded_polygon_pairs(7, 1).unwrap()[0];
        let ab = check_pkf_2d(a, b, 64).unwrap();
        let ba = check_pkf_2d(b, a, 64).unwrap();
        assert!(close(ab.rhs, ba.rhs, 1e-14));
        assert!(check_pkf_2d(&sq, &sq, 8).is_err());
    }

    #[test]
    fn seeded_pairs_are_reproducible() {
        assert_eq!(seeded_polygon_pairs(3, 5).unwrap(), seeded_polygon_pairs(3, 5).unwrap());
    }
}
