//! Newton polygons of polynomials in y over Laurent (or Puiseux) series in z.

use crate::error::{Error, Result};
use crate::exact::localize::laurent_coeffs;
use crate::exact::{BiPoly, Field, Point, Rat, UPoly};

/// Edge of the lower hull. `slope` is the slope of the segment in the
/// (i, v) plane; roots on the edge have z-order `-slope`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge<F: Field> {
    pub slope: Rat,
    pub length: usize,
    /// Left endpoint index.
    pub start: usize,
    /// sum_k e_k u^k over the points on the edge, normalized to start at u^0.
    pub residual: UPoly<F>,
}

impl<F: Field> Edge<F> {
    pub fn root_order(&self) -> Rat {
        -self.slope.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPolygon<F: Field> {
    /// (i, v_i) for the nonzero coefficients.
    pub support: Vec<(usize, Rat)>,
    /// Edges sorted by increasing slope.
    pub edges: Vec<Edge<F>>,
}

impl<F: Field> NewtonPolygon<F> {
    /// y-valuation: the index of the first support point.
    pub fn y_valuation(&self) -> usize {
        self.support.first().map_or(0, |p| p.0)
    }
}

/// Indices of the lower convex hull vertices of points sorted by i.
pub fn lower_hull(pts: &[(usize, Rat)]) -> Vec<usize> {
    let mut hull: Vec<usize> = vec![];
    for (k, (i, v)) in pts.iter().enumerate() {
        while hull.len() >= 2 {
            let (i1, v1) = &pts[hull[hull.len() - 2]];
            let (i2, v2) = &pts[hull[hull.len() - 1]];
            // drop the middle point when it lies on or above the chord
            let lhs = (v2 - v1) * Rat::from((*i - *i1) as i64);
            let rhs = (v - v1) * Rat::from((*i2 - *i1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

/// Builds the polygon from support points and a lookup for the coefficient of
/// z^e in the i-th coefficient.
pub fn polygon_from<F: Field>(
    support: Vec<(usize, Rat)>,
    ctx: &F,
    coeff_at: impl Fn(usize, &Rat) -> F,
) -> NewtonPolygon<F> {
    let hull = lower_hull(&support);
    let mut edges = vec![];
    for w in hull.windows(2) {
        let (ia, va) = &support[w[0]];
        let (ib, vb) = &support[w[1]];
        let len = ib - ia;
        let slope = (vb - va) / Rat::from(len as i64);
        let mut res = vec![ctx.zero_like(); len + 1];
        for (i, _) in &support[w[0]..=w[1]] {
            let e = va + &(&slope * &Rat::from((*i - *ia) as i64));
            res[i - ia] = coeff_at(*i, &e);
        }
        edges.push(Edge {
            slope,
            length: len,
            start: *ia,
            residual: UPoly::new(res, ctx),
        });
    }
    NewtonPolygon { support, edges }
}

/// Newton polygon of F(z, y) with coefficients in Q(z), at z = 0.
pub fn newton_polygon(f: &BiPoly) -> Result<NewtonPolygon<Rat>> {
    if f.is_zero() {
        return Err(Error::DegreeZero);
    }
    let origin = Point::Finite(Rat::zero());
    let support: Vec<(usize, Rat)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.valuation(&origin).map(|v| (i, Rat::from(v))))
        .collect();
    let coeffs = f.coeffs();
    Ok(polygon_from(support, &Rat::zero(), |i, e| {
        let v = e.to_i64().expect("integral exponent");
        laurent_coeffs(&coeffs[i], v, 1).remove(0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatFn;

    fn bi(c: Vec<RatFn>) -> BiPoly {
        UPoly::new(c, &RatFn::zero())
    }

    #[test]
    fn airy_cleared() {
        // z^6 y^2 - z
        let f = bi(vec![
            RatFn::monomial(Rat::from(-1), 1),
            RatFn::zero(),
            RatFn::monomial(Rat::one(), 6),
        ]);
        let np = newton_polygon(&f).unwrap();
        assert_eq!(np.edges.len(), 1);
        let e = &np.edges[0];
        assert_eq!(e.slope, Rat::new(5, 2));
        assert_eq!(e.root_order(), Rat::new(-5, 2));
        assert_eq!(e.length, 2);
        assert_eq!(e.residual, UPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn two_simple_poles() {
        // y^2 - (3/z) y + 2/z^2
        let f = bi(vec![
            RatFn::monomial(Rat::from(2), -2),
            RatFn::monomial(Rat::from(-3), -1),
            RatFn::one(),
        ]);
        let np = newton_polygon(&f).unwrap();
        assert_eq!(np.edges.len(), 1);
        assert_eq!(np.edges[0].slope, Rat::one());
        assert_eq!(np.edges[0].residual, UPoly::from_ints(&[2, -3, 1]));
        assert_eq!(crate::exact::factor::rational_roots(&np.edges[0].residual).len(), 2);
    }

    #[test]
    fn hull_skips_points_above() {
        let pts = vec![
            (0, Rat::from(0)),
            (1, Rat::from(5)),
            (2, Rat::from(1)),
            (3, Rat::from(1)),
            (4, Rat::from(3)),
        ];
        assert_eq!(lower_hull(&pts), vec![0, 3, 4]);
    }
}
