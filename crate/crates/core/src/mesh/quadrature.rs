//! Quadrature on simplices, expressed in barycentric coordinates.

use super::geometry::simplex_measure;
use crate::error::{Error, Result};
use crate::Vec3;

/// A quadrature node: barycentric coordinates and a weight relative to the simplex measure
/// (weights of a rule sum to one).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadPoint {
    pub bary: Vec<f64>,
    pub weight: f64,
}

fn qp(bary: &[f64], weight: f64) -> QuadPoint {
    QuadPoint {
        bary: bary.to_vec(),
        weight,
    }
}

fn gauss_segment(order: usize) -> Vec<QuadPoint> {
    if order <= 1 {
        vec![qp(&[0.5, 0.5], 1.0)]
    } else {
        // Two-point Gauss-Legendre, exact through cubics.
        let s = 0.5 / 3f64.sqrt();
        vec![qp(&[0.5 + s, 0.5 - s], 0.5), qp(&[0.5 - s, 0.5 + s], 0.5)]
    }
}

fn triangle_rule(order: usize) -> Vec<QuadPoint> {
    match order {
        1 => vec![qp(&[1.0 / 3.0; 3], 1.0)],
        2 => {
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            vec![
                qp(&[a, b, b], 1.0 / 3.0),
                qp(&[b, a, b], 1.0 / 3.0),
                qp(&[b, b, a], 1.0 / 3.0),
            ]
        }
        _ => {
            // Six-point rule with positive weights, exact through degree 4.
            let (a1, w1) = (0.445_948_490_915_964_9, 0.223_381_589_678_011_47);
            let (a2, w2) = (0.091_576_213_509_770_74, 0.109_951_743_655_321_87);
            let mut pts = Vec::with_capacity(6);
            for (a, w) in [(a1, w1), (a2, w2)] {
                let c = 1.0 - 2.0 * a;
                pts.push(qp(&[c, a, a], w));
                pts.push(qp(&[a, c, a], w));
                pts.push(qp(&[a, a, c], w));
            }
            pts
        }
    }
}

fn tet_rule(order: usize) -> Vec<QuadPoint> {
    if order <= 1 {
        return vec![qp(&[0.25; 4], 1.0)];
    }
    let a = 0.585_410_196_624_968_5;
    let b = 0.138_196_601_125_010_5;
    (0..4)
        .map(|i| {
            let mut bary = [b; 4];
            bary[i] = a;
            qp(&bary, 0.25)
        })
        .collect()
}

/// Rule on a simplex with `n_vertices` vertices, exact for polynomials of degree `order`.
pub fn simplex_rule(n_vertices: usize, order: usize) -> Result<Vec<QuadPoint>> {
    if !(1..=3).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    Ok(match n_vertices {
        2 => gauss_segment(order),
        3 => triangle_rule(order),
        // Tetrahedra only need degree 2 here (P1 x P1 mass and load products).
        4 if order <= 2 => tet_rule(order),
        _ => return Err(Error::UnsupportedOrder(order)),
    })
}

/// Rule on a boundary facet (segment or triangle).
pub fn facet_rule(n_vertices: usize, order: usize) -> Result<Vec<QuadPoint>> {
    if n_vertices != 2 && n_vertices != 3 {
        return Err(Error::InvalidInput(format!("facet with {n_vertices} vertices")));
    }
    simplex_rule(n_vertices, order)
}

/// Physical quadrature points and weights on a facet; the weights sum to the facet measure.
pub fn facet_quadrature(points: &[Vec3], order: usize) -> Result<Vec<(Vec3, f64)>> {
    let rule = facet_rule(points.len(), order)?;
    let measure = simplex_measure(points);
    Ok(rule
        .into_iter()
        .map(|q| {
            let x = q
                .bary
                .iter()
                .zip(points)
                .fold(Vec3::zeros(), |acc, (&l, p)| acc + p * l);
            (x, q.weight * measure)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate_monomial_on_reference_triangle(order: usize, px: i32, py: i32) -> f64 {
        let pts = [Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
        facet_quadrature(&pts, order)
            .unwrap()
            .iter()
            .map(|(x, w)| w * x.x.powi(px) * x.y.powi(py))
            .sum()
    }

    fn factorial(n: i32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn unit_segment_midpoint() {
        let q = facet_quadrature(&[Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)], 1).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].0, Vec3::new(0.5, 0.0, 0.0));
        assert_eq!(q[0].1, 1.0);
    }

    #[test]
    fn unit_triangle_centroid() {
        let pts = [Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
        let q = facet_quadrature(&pts, 1).unwrap();
        assert_eq!(q.len(), 1);
        assert!((q[0].0 - Vec3::new(1.0 / 3.0, 1.0 / 3.0, 0.0)).norm() < 1e-16);
        assert_eq!(q[0].1, 0.5);
    }

    #[test]
    fn segment_of_length_two_gauss() {
        let q = facet_quadrature(&[Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0)], 2).unwrap();
        assert_eq!(q.len(), 2);
        let s: f64 = q.iter().map(|(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unsupported_order() {
        let seg = [Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)];
        assert!(matches!(facet_quadrature(&seg, 0), Err(Error::UnsupportedOrder(0))));
        assert!(matches!(facet_quadrature(&seg, 4), Err(Error::UnsupportedOrder(4))));
    }

    #[test]
    fn triangle_rules_are_exact_to_their_order() {
        // Integral of x^a y^b over the reference triangle is a! b! / (a + b + 2)!.
        for order in 1..=3 {
            for px in 0..=order as i32 {
                for py in 0..=(order as i32 - px) {
                    let exact = factorial(px) * factorial(py) / factorial(px + py + 2);
                    let got = integrate_monomial_on_reference_triangle(order, px, py);
                    assert!(
                        (got - exact).abs() < 1e-14,
                        "order {order} x^{px} y^{py}: {got} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn segment_rules_are_exact_to_their_order() {
        let seg = [Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)];
        for order in 1..=3 {
            for p in 0..=order as i32 {
                let got: f64 = facet_quadrature(&seg, order)
                    .unwrap()
                    .iter()
                    .map(|(x, w)| w * x.x.powi(p))
                    .sum();
                assert!((got - 1.0 / f64::from(p + 1)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn tet_rule_integrates_quadratics() {
        // Integral of x^2 over the reference tetrahedron is 2!/5! = 1/60.
        let rule = simplex_rule(4, 2).unwrap();
        let got: f64 = rule.iter().map(|q| q.weight / 6.0 * q.bary[1] * q.bary[1]).sum();
        assert!((got - 1.0 / 60.0).abs() < 1e-15);
    }
}
