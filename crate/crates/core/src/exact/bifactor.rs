//! Factorization of polynomials monic in y over Q(z): specialize z, factor
//! over Q, Hensel-lift in z - z0, recombine and check by division.

use super::factor::factor_rat;
use super::matrix::BiPoly;
use super::poly::UPoly;
use super::rat::Rat;
use super::ratfn::RatFn;
use super::Field;

#[derive(Clone, Debug, PartialEq)]
pub enum BiFactorization {
    /// Irreducible over Q(z) (possibly reducible over an extension).
    Irreducible,
    /// Monic factors over Q(z), at least two.
    Factors(Vec<BiPoly>),
    /// No usable specialization point was found.
    Unknown,
}

type Series = Vec<UPoly<Rat>>;

fn series_times(a: &Series, b: &Series, len: usize) -> Series {
    let zero = UPoly::zero(&Rat::zero());
    let mut out = vec![zero; len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].plus(&x.times(y));
        }
    }
    out
}

/// Lifts H = prod f_i (mod t) to `len` coefficients in t; H[k] is the
/// coefficient of t^k, a polynomial in w.
fn hensel_lift(h: &Series, fs: &[UPoly<Rat>], len: usize) -> Vec<Series> {
    let zero = UPoly::zero(&Rat::zero());
    let inverses: Vec<UPoly<Rat>> = (0..fs.len())
        .map(|i| {
            let co = fs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(UPoly::one(&Rat::zero()), |acc, (_, f)| acc.times(f));
            let (_, s, _) = co.ext_gcd(&fs[i]);
            s
        })
        .collect();
    let mut lifted: Vec<Series> = fs.iter().map(|f| vec![f.clone()]).collect();
    for k in 1..len {
        for l in lifted.iter_mut() {
            l.push(zero.clone());
        }
        let prod = lifted
            .iter()
            .skip(1)
            .fold(lifted[0].clone(), |acc, l| series_times(&acc, l, k + 1));
        let e = h.get(k).cloned().unwrap_or_else(|| zero.clone()).minus(&prod[k]);
        if e.is_zero() {
            continue;
        }
        for (i, l) in lifted.iter_mut().enumerate() {
            l[k] = e.times(&inverses[i]).rem(&fs[i]);
        }
    }
    lifted
}

/// Polynomial in z, w from t-series coefficients, undoing z = t + z0.
fn to_bivariate(s: &Series, z0: &Rat) -> Vec<UPoly<Rat>> {
    let ctx = Rat::zero();
    let deg = s.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
    (0..deg)
        .map(|j| {
            let t_poly = UPoly::new(s.iter().map(|c| c.coeff(j)).collect(), &ctx);
            t_poly.taylor_shift(&(-z0.clone()))
        })
        .collect()
}

fn as_bipoly(c: &[UPoly<Rat>]) -> BiPoly {
    UPoly::new(c.iter().map(|p| RatFn::from_poly(p.clone())).collect(), &RatFn::zero())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.sort();
    out
}

pub fn factor_bipoly(f: &BiPoly) -> BiFactorization {
    let f = f.monic();
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return BiFactorization::Irreducible,
    };
    let ctx = Rat::zero();
    let d = f.coeffs().iter().fold(UPoly::one(&ctx), |acc, c| {
        let g = acc.gcd(c.den());
        acc.times(c.den()).exact_div(&g).unwrap()
    });
    // G(z, w) = D^n f(z, w / D) is monic in w with polynomial coefficients
    let g: Vec<UPoly<Rat>> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let num = c.num().times(&d.pow((n - i) as u32));
            num.exact_div(c.den()).unwrap()
        })
        .collect();
    let Some(z0) = (0..60i64)
        .map(|k| Rat::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }))
        .find(|z0| UPoly::new(g.iter().map(|c| c.eval(z0)).collect(), &ctx).is_squarefree())
    else {
        return BiFactorization::Unknown;
    };
    let g0 = UPoly::new(g.iter().map(|c| c.eval(&z0)).collect(), &ctx);
    let fs: Vec<UPoly<Rat>> = factor_rat(&g0).into_iter().map(|(p, _)| p).collect();
    if fs.len() == 1 {
        return BiFactorization::Irreducible;
    }
    // root degrees in z are at most rho = max deg(g_i) / (n - i)
    let rho = (0..n)
        .filter(|&i| !g[i].is_zero())
        .map(|i| Rat::new(g[i].deg() as i64, (n - i) as i64))
        .max()
        .unwrap_or_else(Rat::zero);
    let len = i64::try_from((rho * Rat::from(n as i64)).ceil()).unwrap_or(0) as usize + 1;
    let shifted: Vec<UPoly<Rat>> = g.iter().map(|c| c.taylor_shift(&z0)).collect();
    let h: Series = (0..len)
        .map(|k| UPoly::new(shifted.iter().map(|c| c.coeff(k)).collect(), &ctx))
        .collect();
    let lifted = hensel_lift(&h, &fs, len);

    let mut rest: Vec<usize> = (0..fs.len()).collect();
    let mut remaining = as_bipoly(&g);
    let mut found: Vec<BiPoly> = vec![];
    let mut size = 1;
    while 2 * size <= rest.len() {
        let mut hit = None;
        for s in subsets(rest.len(), size) {
            let idx: Vec<usize> = s.iter().map(|&k| rest[k]).collect();
            let prod = idx
                .iter()
                .skip(1)
                .fold(lifted[idx[0]].clone(), |acc, &i| series_times(&acc, &lifted[i], len));
            let cand = as_bipoly(&to_bivariate(&prod, &z0));
            let (q, r) = remaining.div_rem(&cand);
            if r.is_zero() {
                hit = Some((s, cand, q));
                break;
            }
        }
        match hit {
            Some((s, cand, q)) => {
                found.push(cand);
                remaining = q;
                rest = rest
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !s.contains(k))
                    .map(|(_, &i)| i)
                    .collect();
            }
            None => size += 1,
        }
    }
    if found.is_empty() {
        return BiFactorization::Irreducible;
    }
    found.push(remaining);
    // back from w = D y
    let dr = RatFn::from_poly(d);
    let factors = found
        .into_iter()
        .map(|c| {
            let k = c.deg() as usize;
            let co = c
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, x)| x.over(&dr.powi((k - i) as u64)))
                .collect();
            UPoly::new(co, &RatFn::zero())
        })
        .collect();
    BiFactorization::Factors(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(c: Vec<RatFn>) -> BiPoly {
        UPoly::new(c, &RatFn::zero())
    }

    fn lin(a: RatFn) -> BiPoly {
        bi(vec![a.negate(), RatFn::one()])
    }

    #[test]
    fn splits_fuchsian() {
        let a = RatFn::monomial(Rat::new(1, 3), -1);
        let b = RatFn::monomial(Rat::new(-2, 5), -1);
        let f = lin(a.clone()).times(&lin(b.clone()));
        match factor_bipoly(&f) {
            BiFactorization::Factors(fs) => {
                assert_eq!(fs.len(), 2);
                let prod = fs[0].times(&fs[1]);
                assert_eq!(prod, f);
                assert!(fs.contains(&lin(a)) && fs.contains(&lin(b)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn irreducible_over_qz() {
        // y^2 - z
        let f = bi(vec![RatFn::var().negate(), RatFn::zero(), RatFn::one()]);
        assert_eq!(factor_bipoly(&f), BiFactorization::Irreducible);
    }

    #[test]
    fn fake_factorization_at_the_special_point() {
        // y^2 - (z^2 + 1) z: at z0 = 0 the specialization is y^2, skipped;
        // at z0 = 1 it is y^2 - 2, irreducible.
        let z = RatFn::var();
        let c = z.times(&z).plus(&RatFn::one()).times(&z);
        let f = bi(vec![c.negate(), RatFn::zero(), RatFn::one()]);
        assert_eq!(factor_bipoly(&f), BiFactorization::Irreducible);
        // y^2 - z^2 (z+1)^2 / 4 factors although y^2 - 1 at z0 = 1 also factors
        let s = z.times(&z.plus(&RatFn::one())).times(&RatFn::constant(Rat::new(1, 2)));
        let g = lin(s.clone()).times(&lin(s.negate()));
        assert!(matches!(factor_bipoly(&g), BiFactorization::Factors(v) if v.len() == 2));
    }

    #[test]
    fn three_factors_with_a_quadratic() {
        // (y^2 - z)(y - 1/z)
        let z = RatFn::var();
        let q = bi(vec![z.negate(), RatFn::zero(), RatFn::one()]);
        let f = q.times(&lin(RatFn::monomial(Rat::one(), -1)));
        match factor_bipoly(&f) {
            BiFactorization::Factors(fs) => {
                assert_eq!(fs.len(), 2);
                assert!(fs.contains(&q));
            }
            other => panic!("{other:?}"),
        }
    }
}
