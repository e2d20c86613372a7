use crate::Vec3;

/// Measure of a k-simplex embedded in 3-space (length, area or volume), from the Gram determinant.
pub fn simplex_measure(points: &[Vec3]) -> f64 {
    match points.len() {
        1 => 1.0,
        2 => (points[1] - points[0]).norm(),
        3 => 0.5 * (points[1] - points[0]).cross(&(points[2] - points[0])).norm(),
        4 => signed_tet_volume(points).abs(),
        n => panic!("simplex with {n} vertices"),
    }
}

pub fn signed_triangle_area(points: &[Vec3]) -> f64 {
    let a = points[1] - points[0];
    let b = points[2] - points[0];
    0.5 * (a.x * b.y - a.y * b.x)
}

pub fn signed_tet_volume(points: &[Vec3]) -> f64 {
    let a = points[1] - points[0];
    let b = points[2] - points[0];
    let c = points[3] - points[0];
    a.dot(&b.cross(&c)) / 6.0
}

/// Signed volume of a full-dimensional simplex (triangle in 2D, tetrahedron in 3D).
pub fn signed_volume(dim: usize, points: &[Vec3]) -> f64 {
    match dim {
        2 => signed_triangle_area(points),
        3 => signed_tet_volume(points),
        _ => unreachable!("dimension {dim}"),
    }
}

pub fn centroid(points: &[Vec3]) -> Vec3 {
    let mut c = Vec3::zeros();
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

/// Gradients of the barycentric (P1 hat) functions on a full-dimensional simplex, and its volume.
///
/// Returns `None` for a degenerate element.
pub fn p1_gradients(dim: usize, points: &[Vec3]) -> Option<(f64, Vec<Vec3>)> {
    match dim {
        2 => {
            let area = signed_triangle_area(points);
            if area.abs() <= f64::MIN_POSITIVE {
                return None;
            }
            let inv = 1.0 / (2.0 * area);
            let mut grads = Vec::with_capacity(3);
            for a in 0..3 {
                let p = points[(a + 1) % 3];
                let q = points[(a + 2) % 3];
                grads.push(Vec3::new((p.y - q.y) * inv, (q.x - p.x) * inv, 0.0));
            }
            Some((area.abs(), grads))
        }
        3 => {
            let vol = signed_tet_volume(points);
            if vol.abs() <= f64::MIN_POSITIVE {
                return None;
            }
            let e1 = points[1] - points[0];
            let e2 = points[2] - points[0];
            let e3 = points[3] - points[0];
            let jac = nalgebra::Matrix3::from_columns(&[e1, e2, e3]);
            let inv_t = jac.try_inverse()?.transpose();
            let g1 = inv_t.column(0).into_owned();
            let g2 = inv_t.column(1).into_owned();
            let g3 = inv_t.column(2).into_owned();
            let g0 = -(g1 + g2 + g3);
            Some((vol.abs(), vec![g0, g1, g2, g3]))
        }
        _ => None,
    }
}

/// Tangential gradients of the P1 hat functions on a (d-1)-simplex embedded in 3-space.
///
/// For vertices `p_0..p_k` and edge matrix `J = [p_1 - p_0, ..., p_k - p_0]` the tangential
/// gradient of a linear function with vertex values `g` is `J (J^T J)^{-1} (g_i - g_0)`.
pub fn facet_tangential_gradients(points: &[Vec3]) -> Option<Vec<Vec3>> {
    match points.len() {
        2 => {
            let e = points[1] - points[0];
            let l2 = e.norm_squared();
            if l2 <= f64::MIN_POSITIVE {
                return None;
            }
            let g1 = e / l2;
            Some(vec![-g1, g1])
        }
        3 => {
            let e1 = points[1] - points[0];
            let e2 = points[2] - points[0];
            let g11 = e1.dot(&e1);
            let g12 = e1.dot(&e2);
            let g22 = e2.dot(&e2);
            let det = g11 * g22 - g12 * g12;
            if det <= f64::MIN_POSITIVE * (g11 * g22).max(1.0) {
                return None;
            }
            // Rows of (J^T J)^{-1} applied to unit vertex values.
            let grad1 = (e1 * g22 - e2 * g12) / det;
            let grad2 = (e2 * g11 - e1 * g12) / det;
            Some(vec![-(grad1 + grad2), grad1, grad2])
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_triangle_gradients() {
        let pts = [Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
        let (area, g) = p1_gradients(2, &pts).unwrap();
        assert!((area - 0.5).abs() < 1e-15);
        assert_eq!(g[0], Vec3::new(-1.0, -1.0, 0.0));
        assert_eq!(g[1], Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(g[2], Vec3::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn reference_tet_gradients_sum_to_zero() {
        let pts = [
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ];
        let (vol, g) = p1_gradients(3, &pts).unwrap();
        assert!((vol - 1.0 / 6.0).abs() < 1e-15);
        let s: Vec3 = g.iter().sum();
        assert!(s.norm() < 1e-15);
        assert!((g[3] - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_triangle_has_no_gradients() {
        let pts = [Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0)];
        assert!(p1_gradients(2, &pts).is_none());
    }
}
