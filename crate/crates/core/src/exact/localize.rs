//! Localization of the connection matrix at a point of the projective line.

use super::factor::factor_rat;
use super::field::Field;
use super::matrix::{Mat, MatRF};
use super::poly::UPoly;
use super::rat::Rat;
use super::ratfn::{Point, RatFn};
use crate::error::{Error, Result};

/// The connection matrix written in a local coordinate t at a point
/// (t = z - a, or t = w = 1/z at infinity, including the 1-form Jacobian).
#[derive(Clone, Debug)]
pub struct LocalMatrix {
    pub point: Point,
    /// Exact local matrix as rational functions of t.
    pub exact: MatRF,
    /// Pole order nu = max(0, -min entry valuation).
    pub pole_order: i64,
    /// G = t^{-nu} (C_0 + C_1 t + ... + C_N t^N) + O(t^{N+1-nu}).
    pub coeffs: Vec<Mat<Rat>>,
}

impl LocalMatrix {
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.exact.rows()
    }
}

/// The matrix in the local coordinate at `a`.
pub fn local_exact(a_mat: &MatRF, a: &Point) -> MatRF {
    match a {
        Point::Finite(c) => a_mat.map(|f| f.shift(c)),
        Point::Infinity => {
            let jac = RatFn::monomial(Rat::from(-1), -2);
            a_mat.map(|f| f.invert_variable().times(&jac))
        }
    }
}

/// Minimum valuation at t = 0 over the entries (None if all zero).
pub fn min_valuation(m: &MatRF) -> Option<i64> {
    m.entries()
        .iter()
        .filter_map(|f| f.valuation(&Point::Finite(Rat::zero())))
        .min()
}

/// Laurent coefficients of f at t = 0 for exponents start, start+1, ..., start+count-1.
pub fn laurent_coeffs(f: &RatFn, start: i64, count: usize) -> Vec<Rat> {
    if f.is_zero() {
        return vec![Rat::zero(); count];
    }
    let den = f.den();
    let k = den.low_degree().unwrap() as i64;
    // f = num / (t^k * d), d(0) != 0
    let d: Vec<Rat> = den.coeffs()[k as usize..].to_vec();
    let num = f.num();
    // power series of num/d up to exponent start + count - 1 + k
    let top = start + count as i64 + k;
    let mut out = vec![];
    if top > 0 {
        let len = top as usize;
        let inv0 = d[0].recip();
        let mut s: Vec<Rat> = Vec::with_capacity(len);
        for i in 0..len {
            let mut acc = num.coeff(i);
            for j in 1..=i.min(d.len() - 1) {
                acc = acc - &d[j] * &s[i - j];
            }
            s.push(acc * &inv0);
        }
        out = s;
    }
    (0..count)
        .map(|i| {
            let e = start + i as i64 + k;
            if e < 0 || e as usize >= out.len() {
                Rat::zero()
            } else {
                out[e as usize].clone()
            }
        })
        .collect()
}

/// Localize A at `a` to truncation order N.
pub fn localize(a_mat: &MatRF, a: &Point, n_trunc: usize) -> LocalMatrix {
    let exact = local_exact(a_mat, a);
    let nu = (-min_valuation(&exact).unwrap_or(0)).max(0);
    let n = exact.rows();
    let series: Vec<Vec<Rat>> = exact
        .entries()
        .iter()
        .map(|f| laurent_coeffs(f, -nu, n_trunc + 1))
        .collect();
    let coeffs = (0..=n_trunc)
        .map(|k| Mat::from_fn(n, n, |i, j| series[i * n + j][k].clone()))
        .collect();
    LocalMatrix {
        point: a.clone(),
        exact,
        pole_order: nu,
        coeffs,
    }
}

/// Default truncation order 2 (n nu_max + n^2 + 4).
pub fn default_truncation(n: usize, nu_max: i64) -> usize {
    2 * (n * nu_max.max(0) as usize + n * n + 4)
}

/// Poles of A: rational denominator roots and possibly infinity.
pub fn poles(a_mat: &MatRF) -> Result<Vec<Point>> {
    let mut out: Vec<Point> = vec![];
    for f in a_mat.entries() {
        for (g, _) in factor_rat(f.den()) {
            if g.deg() > 1 {
                return Err(Error::UnsupportedPoleLocation(g.display_in("z")));
            }
            let p = Point::Finite(-g.coeff(0));
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    let at_inf = local_exact(a_mat, &Point::Infinity);
    if min_valuation(&at_inf).is_some_and(|v| v < 0) {
        out.push(Point::Infinity);
    }
    out.sort();
    Ok(out)
}

/// Checks the declared pole set against A. Returns warnings for declared
/// points that are not poles.
pub fn pole_set_validate(a_mat: &MatRF, declared: &[Point]) -> Result<Vec<String>> {
    let actual = poles(a_mat)?;
    if let Some(p) = actual.iter().find(|p| !declared.contains(p)) {
        return Err(Error::UndeclaredPole(p.to_string()));
    }
    Ok(declared
        .iter()
        .filter(|p| !actual.contains(p))
        .map(|p| format!("declared pole {p} is not a pole of the connection"))
        .collect())
}

/// Helper: the rational polynomial with given integer coefficients as a RatFn.
pub fn poly_fn(c: &[i64]) -> RatFn {
    RatFn::from_poly(UPoly::from_ints(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RatFn {
        RatFn::var()
    }

    fn mat(rows: Vec<Vec<RatFn>>) -> MatRF {
        Mat::from_rows(rows)
    }

    #[test]
    fn localize_examples() {
        let a = mat(vec![vec![z()]]);
        let l = localize(&a, &Point::Infinity, 4);
        assert_eq!(l.pole_order, 3);
        assert_eq!(l.exact.get(0, 0), &RatFn::monomial(Rat::from(-1), -3));
        assert_eq!(l.coeffs[0].get(0, 0), &Rat::from(-1));

        let airy = mat(vec![vec![RatFn::zero(), RatFn::one()], vec![z(), RatFn::zero()]]);
        let l = localize(&airy, &Point::Infinity, 3);
        assert_eq!(l.pole_order, 3);
        assert_eq!(l.exact.get(0, 1), &RatFn::monomial(Rat::from(-1), -2));
        assert_eq!(l.exact.get(1, 0), &RatFn::monomial(Rat::from(-1), -3));

        let r1 = mat(vec![vec![RatFn::monomial(Rat::one(), -2)]]);
        let l = localize(&r1, &Point::Finite(Rat::zero()), 3);
        assert_eq!(l.pole_order, 2);
    }

    #[test]
    fn laurent_matches_series_oracle() {
        // 1/(z (1 - z)) = z^-1 + 1 + z + z^2 + ...
        let f = RatFn::one().over(&z().times(&poly_fn(&[1, -1])));
        let c = laurent_coeffs(&f, -2, 5);
        let one = Rat::one();
        assert_eq!(c, vec![Rat::zero(), one.clone(), one.clone(), one.clone(), one]);
    }

    #[test]
    fn pole_validation() {
        let a = mat(vec![vec![RatFn::one().over(&z())]]);
        assert_eq!(
            pole_set_validate(&a, &[Point::Finite(Rat::zero())]),
            Err(Error::UndeclaredPole("inf".into()))
        );
        let b = mat(vec![vec![RatFn::one().over(&poly_fn(&[1, 0, 1]))]]);
        assert!(matches!(
            pole_set_validate(&b, &[Point::Finite(Rat::zero())]),
            Err(Error::UnsupportedPoleLocation(_))
        ));
        let c = mat(vec![vec![z()]]);
        assert_eq!(pole_set_validate(&c, &[Point::Infinity]), Ok(vec![]));
        let w = pole_set_validate(&c, &[Point::Infinity, Point::Finite(Rat::one())]).unwrap();
        assert_eq!(w.len(), 1);
    }
}
