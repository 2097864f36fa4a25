//! Sylvester resultants and discriminants over any coefficient field.

use super::field::Field;
use super::matrix::Mat;
use super::poly::UPoly;
use crate::error::Error;

/// Sylvester matrix of f (degree m) and g (degree n), size m + n.
pub fn sylvester_matrix<F: Field>(f: &UPoly<F>, g: &UPoly<F>) -> Mat<F> {
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    let size = m + n;
    let ctx = f.ctx().clone();
    Mat::from_fn(size, size, |i, j| {
        if i < n {
            // row i holds f shifted by i, highest coefficient first
            if j >= i && j - i <= m {
                f.coeff(m - (j - i))
            } else {
                ctx.clone()
            }
        } else {
            let s = i - n;
            if j >= s && j - s <= n {
                g.coeff(n - (j - s))
            } else {
                ctx.clone()
            }
        }
    })
}

/// Res(f, g) = lc(f)^deg g * prod g(roots of f).
pub fn resultant<F: Field>(f: &UPoly<F>, g: &UPoly<F>) -> Result<F, Error> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroResultant);
    }
    let ctx = f.ctx().clone();
    if f.is_zero() || g.is_zero() {
        let other = if f.is_zero() { g } else { f };
        return Ok(if other.deg() == 0 { ctx.one_like() } else { ctx });
    }
    let (m, n) = (f.deg() as u64, g.deg() as u64);
    if m == 0 {
        return Ok(f.lc().powi(n));
    }
    if n == 0 {
        return Ok(g.lc().powi(m));
    }
    Ok(sylvester_matrix(f, g).det())
}

/// disc(F) = (-1)^{n(n-1)/2} Res(F, F') / lc(F).
pub fn discriminant<F: Field>(f: &UPoly<F>) -> Result<F, Error> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::DegreeZero),
    };
    if n == 1 {
        return Ok(f.ctx().one_like());
    }
    let r = resultant(f, &f.derivative())?;
    let d = r.over(&f.lc());
    Ok(if (n * (n - 1) / 2) % 2 == 1 { d.negate() } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{RatFn, Rat};

    fn z() -> RatFn {
        RatFn::var()
    }

    fn ypoly(c: Vec<RatFn>) -> UPoly<RatFn> {
        UPoly::new(c, &RatFn::zero())
    }

    #[test]
    fn resultant_examples() {
        let f = ypoly(vec![z().negate(), RatFn::zero(), RatFn::one()]);
        let g = ypoly(vec![RatFn::zero(), RatFn::constant(Rat::from(2))]);
        assert_eq!(resultant(&f, &g).unwrap(), z().times(&RatFn::constant(Rat::from(-4))));
        let a = RatFn::constant(Rat::new(3, 2));
        let b = RatFn::constant(Rat::from(-5));
        let la = UPoly::linear_root(&a);
        let lb = UPoly::linear_root(&b);
        assert_eq!(resultant(&la, &lb).unwrap(), a.minus(&b));
        assert_eq!(resultant(&f, &UPoly::one(&RatFn::zero())).unwrap(), RatFn::one());
        assert!(resultant(&UPoly::<Rat>::zero(&Rat::zero()), &UPoly::zero(&Rat::zero())).is_err());
    }

    #[test]
    fn discriminant_examples() {
        let f = ypoly(vec![z().negate(), RatFn::zero(), RatFn::one()]);
        assert_eq!(discriminant(&f).unwrap(), z().times(&RatFn::constant(Rat::from(4))));
        let sq = UPoly::from_ints(&[0, 0, 1]);
        assert_eq!(discriminant(&sq).unwrap(), Rat::zero());
        let f = UPoly::from_ints(&[2, -3, 1]);
        assert_eq!(discriminant(&f).unwrap(), Rat::one());
        assert!(discriminant(&UPoly::from_ints(&[3])).is_err());
    }
}
