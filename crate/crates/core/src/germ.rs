//! Plane-curve germs of the spectral curve at the points over a pole where it
//! meets the infinity section: branch data, Milnor and delta invariants, and
//! an independent Milnor number from the Weierstrass polynomial of the germ.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Point, Rat, UPoly};
use crate::local::LocalModule;

/// One branch through infinity: an HTL cell whose eigenvalue root is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    /// Index into `LocalModule::cells`.
    pub cell: usize,
    pub p: i64,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermData {
    pub pole: Point,
    pub n: usize,
    pub branches: Vec<Branch>,
    /// Cell count of the local module.
    pub m: usize,
    pub irr_end: i64,
    pub delta_end: i64,
    /// Irr(Hom) between branches, indexed like `branches`.
    pub irr_hom: Vec<Vec<i64>>,
    pub inf_intersection: i64,
    /// Milnor number by the cell formula.
    pub milnor: i64,
    pub delta: i64,
}

impl GermData {
    pub fn r_c(&self) -> usize {
        self.branches.len()
    }
}

/// Cells whose eigenvalue root has negative order.
pub fn unbounded_branches(l: &LocalModule) -> Vec<Branch> {
    l.cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.root_order.as_ref().is_some_and(|o| o.is_negative()))
        .map(|(i, c)| Branch {
            cell: i,
            p: c.p,
            r: c.r,
        })
        .collect()
}

/// (C, zeta) = sum of p + r over the branches.
pub fn local_inf_intersection(g: &GermData) -> i64 {
    g.branches.iter().map(|b| b.p + b.r as i64).sum()
}

pub fn branch_intersection(i: usize, j: usize, g: &GermData) -> i64 {
    assert_ne!(i, j, "intersection of a branch with itself");
    let (a, b) = (&g.branches[i], &g.branches[j]);
    let (ri, rj) = (a.r as i64, b.r as i64);
    a.p * rj + b.p * ri + ri * rj - g.irr_hom[i][j]
}

pub fn branch_milnor(i: usize, g: &GermData) -> i64 {
    let b = &g.branches[i];
    let r = b.r as i64;
    (2 * b.p + r - 1) * (r - 1) - g.irr_hom[i][i]
}

pub fn germ_milnor(g: &GermData) -> i64 {
    let n = g.n as i64;
    -n * n - g.irr_end + 2 * (n - 1) * local_inf_intersection(g) + (g.m - g.r_c()) as i64 + 1
}

/// Sum over branches of their Milnor numbers plus twice the pairwise
/// intersections, minus r_C - 1.
pub fn germ_milnor_from_branches(g: &GermData) -> i64 {
    let k = g.r_c();
    let mut s: i64 = (0..k).map(|i| branch_milnor(i, g)).sum();
    for i in 0..k {
        for j in i + 1..k {
            s += 2 * branch_intersection(i, j, g);
        }
    }
    s - k as i64 + 1
}

pub fn delta_invariant(mu: i64, r_c: usize) -> Result<i64> {
    let twice = mu + r_c as i64 - 1;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Inconsistency(format!(
            "delta = ({mu} + {r_c} - 1)/2 is not a nonnegative integer"
        )));
    }
    Ok(twice / 2)
}

/// Germ data of a certified local module; None when no branch reaches infinity.
pub fn germ_data(l: &LocalModule) -> Result<Option<GermData>> {
    if l.mode.is_none() {
        return Err(Error::GermUndefined(format!("assumption not checked at {}", l.pole)));
    }
    let branches = unbounded_branches(l);
    if branches.is_empty() {
        return Ok(None);
    }
    if l.pole_order < 1 {
        return Err(Error::GermUndefined(format!("no singularity at {}", l.pole)));
    }
    let minus_one = Rat::from(-1);
    for b in &branches {
        let c = &l.cells[b.cell];
        if c.p == 0 && c.root_order.as_ref().is_some_and(|o| *o > minus_one) {
            return Err(Error::AssumptionViolation(format!(
                "at {}: regular cell with root order {} escapes to infinity",
                l.pole,
                c.root_order.as_ref().unwrap()
            )));
        }
    }
    let m = l.m();
    if branches.len() + 1 < m {
        return Err(Error::Inconsistency(format!(
            "{} bounded cells at {}",
            m - branches.len(),
            l.pole
        )));
    }
    let irr_hom = branches
        .iter()
        .map(|a| branches.iter().map(|b| l.irr_hom(a.cell, b.cell)).collect())
        .collect();
    let mut g = GermData {
        pole: l.pole.clone(),
        n: l.rank,
        branches,
        m,
        irr_end: l.irr_end(),
        delta_end: l.delta_end(),
        irr_hom,
        inf_intersection: 0,
        milnor: 0,
        delta: 0,
    };
    g.inf_intersection = local_inf_intersection(&g);
    g.milnor = germ_milnor(&g);
    let alt = germ_milnor_from_branches(&g);
    if alt != g.milnor {
        return Err(Error::Inconsistency(format!(
            "Milnor number {} from cells, {} from branches",
            g.milnor, alt
        )));
    }
    if g.milnor < 0 {
        return Err(Error::Inconsistency(format!("negative Milnor number {}", g.milnor)));
    }
    g.delta = delta_invariant(g.milnor, g.r_c())?;
    Ok(Some(g))
}

/// Invariants of the germ computed from its equation alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleGerm {
    pub milnor: i64,
    /// (F, z): number of roots zeta -> 0.
    pub branch_degree: usize,
    /// ord_z g(0, z) for the Weierstrass polynomial g.
    pub inf_intersection: i64,
}

/// Truncated power series in z with a fixed number of coefficients.
#[derive(Clone, Debug)]
struct Trunc(Vec<Rat>);

impl Trunc {
    fn zero(p: usize) -> Trunc {
        Trunc(vec![Rat::zero(); p])
    }

    fn constant(c: Rat, p: usize) -> Trunc {
        let mut t = Trunc::zero(p);
        t.0[0] = c;
        t
    }

    fn plus(&self, o: &Trunc) -> Trunc {
        Trunc(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn negate(&self) -> Trunc {
        Trunc(self.0.iter().map(|a| -a.clone()).collect())
    }

    fn times(&self, o: &Trunc) -> Trunc {
        let p = self.0.len();
        let mut out = vec![Rat::zero(); p];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0[..p - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Trunc(out)
    }

    fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }
}

/// Division-free determinant (Berkowitz).
fn berkowitz_det(a: &[Vec<Trunc>], p: usize) -> Trunc {
    let n = a.len();
    if n == 0 {
        return Trunc::constant(Rat::one(), p);
    }
    let one = Trunc::constant(Rat::one(), p);
    let mut transforms: Vec<Vec<Vec<Trunc>>> = vec![];
    for size in (2..=n).rev() {
        let k = size - 1;
        let row: Vec<Trunc> = (0..k).map(|j| a[k][j].negate()).collect();
        let mut col: Vec<Trunc> = (0..k).map(|i| a[i][k].clone()).collect();
        let mut items = vec![one.clone(), a[k][k].negate()];
        for step in 0..size - 1 {
            if step > 0 {
                col = (0..k)
                    .map(|i| {
                        (0..k).fold(Trunc::zero(p), |acc, j| acc.plus(&a[i][j].times(&col[j])))
                    })
                    .collect();
            }
            items.push(
                row.iter()
                    .zip(&col)
                    .fold(Trunc::zero(p), |acc, (x, y)| acc.plus(&x.times(y))),
            );
        }
        // Toeplitz matrix with size + 1 rows and size columns
        let mut t = vec![vec![Trunc::zero(p); size]; size + 1];
        for j in 0..size {
            for i in j..=size {
                t[i][j] = items[i - j].clone();
            }
        }
        transforms.push(t);
    }
    let mut poly = vec![one, a[0][0].negate()];
    for t in transforms.iter().rev() {
        poly = t
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&poly)
                    .fold(Trunc::zero(p), |acc, (x, y)| acc.plus(&x.times(y)))
            })
            .collect();
    }
    let last = poly.pop().unwrap();
    if n % 2 == 1 {
        last.negate()
    } else {
        last
    }
}

fn sylvester_trunc(f: &[Trunc], g: &[Trunc], p: usize) -> Vec<Vec<Trunc>> {
    // coefficient lists from degree 0 upwards
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let size = df + dg;
    let mut m = vec![vec![Trunc::zero(p); size]; size];
    for i in 0..dg {
        for (k, c) in f.iter().rev().enumerate() {
            m[i][i + k] = c.clone();
        }
    }
    for i in 0..df {
        for (k, c) in g.iter().rev().enumerate() {
            m[dg + i][i + k] = c.clone();
        }
    }
    m
}

/// Weierstrass polynomial in zeta of Phi to z-precision `p`, as its
/// coefficients of zeta^0..zeta^d.
fn weierstrass(e: &[UPoly<Rat>], d: usize, p: usize) -> Vec<Trunc> {
    let ctx = Rat::zero();
    let zd = UPoly::monomial(Rat::one(), d);
    let u0 = UPoly::new(e[0].coeffs()[d..].to_vec(), &ctx);
    let (_, _, tau) = zd.ext_gcd(&u0);
    let zero = UPoly::zero(&ctx);
    let mut gs: Vec<UPoly<Rat>> = vec![zd.clone()];
    let mut hs: Vec<UPoly<Rat>> = vec![u0.clone()];
    for k in 1..p {
        let mut c = e.get(k).cloned().unwrap_or_else(|| zero.clone());
        for i in 1..k {
            c = c.minus(&gs[i].times(&hs[k - i]));
        }
        let gk = c.times(&tau).rem(&zd);
        let hk = c
            .minus(&gk.times(&u0))
            .exact_div(&zd)
            .expect("Hensel step divides exactly");
        gs.push(gk);
        hs.push(hk);
    }
    let mut out = vec![Trunc::zero(p); d + 1];
    out[d] = Trunc::constant(Rat::one(), p);
    for (k, gk) in gs.iter().enumerate().skip(1) {
        for (j, c) in gk.coeffs().iter().enumerate() {
            out[j].0[k] = c.clone();
        }
    }
    out
}

/// Milnor number of the germ at (zeta, z) = (0, 0) of
/// Phi(zeta, z) = zeta^n F(z, 1/zeta), where `f` lists the coefficients of
/// y^0..y^n of the cleared local characteristic polynomial. Uses
/// mu = (g, dg/dzeta) + 1 - (g, z) with g the Weierstrass polynomial of Phi;
/// the first intersection number is ord_z Res_zeta(g, dg/dzeta).
pub fn germ_milnor_oracle(f: &[UPoly<Rat>]) -> Result<Option<OracleGerm>> {
    let n = f.len().checked_sub(1).ok_or(Error::DegreeZero)?;
    let ctx = Rat::zero();
    let top = f.iter().map(|c| c.degree().unwrap_or(0)).max().unwrap_or(0);
    // e[k] = coefficient of z^k of Phi, a polynomial in zeta
    let e: Vec<UPoly<Rat>> = (0..=top)
        .map(|k| UPoly::new((0..=n).map(|j| f[n - j].coeff(k)).collect(), &ctx))
        .collect();
    let d = e[0]
        .low_degree()
        .ok_or_else(|| Error::Inconsistency("fibre over the pole is a component".into()))?;
    if d == 0 {
        return Ok(None);
    }
    let mut p = 32;
    for _ in 0..6 {
        let g = weierstrass(&e, d, p);
        let dg: Vec<Trunc> = (1..=d)
            .map(|j| {
                let s = Trunc::constant(Rat::from(j as i64), p);
                g[j].times(&s)
            })
            .collect();
        let res = berkowitz_det(&sylvester_trunc(&g, &dg, p), p);
        if let (Some(v), Some(c)) = (res.order(), g[0].order()) {
            let mu = v as i64 + 1 - d as i64;
            return Ok(Some(OracleGerm {
                milnor: mu,
                branch_degree: d,
                inf_intersection: c as i64,
            }));
        }
        p *= 2;
    }
    Err(Error::NonReducedGerm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Mat, MatRF, RatFn};
    use crate::local::{build_local, LocalConfig};

    fn certified(a: &MatRF, pole: Point) -> LocalModule {
        build_local(a, &pole, &LocalConfig::default()).unwrap().certify().unwrap()
    }

    fn polys(c: &[&[i64]]) -> Vec<UPoly<Rat>> {
        c.iter().map(|x| UPoly::from_ints(x)).collect()
    }

    #[test]
    fn cusp_oracle() {
        // 1 - z^5 y^2, i.e. zeta^2 - z^5
        let f = polys(&[&[1], &[0], &[0, 0, 0, 0, 0, -1]]);
        let o = germ_milnor_oracle(&f).unwrap().unwrap();
        assert_eq!((o.milnor, o.branch_degree, o.inf_intersection), (4, 2, 5));
    }

    #[test]
    fn node_and_smooth_oracle() {
        // zeta^2 - z^2 (1 + z)
        let node = polys(&[&[1], &[0], &[0, 0, -1, -1]]);
        assert_eq!(germ_milnor_oracle(&node).unwrap().unwrap().milnor, 1);
        // z y - 1: zeta = z
        let smooth = polys(&[&[-1], &[0, 1]]);
        let o = germ_milnor_oracle(&smooth).unwrap().unwrap();
        assert_eq!((o.milnor, o.inf_intersection), (0, 1));
        // bounded roots only
        let none = polys(&[&[-1], &[1]]);
        assert!(germ_milnor_oracle(&none).unwrap().is_none());
    }

    #[test]
    fn tacnode_oracle() {
        // (zeta - z^2)(zeta + z^2) with a unit: zeta^2 - z^4, mu = 3
        let f = polys(&[&[1, 1], &[0], &[0, 0, 0, 0, -1]]);
        assert_eq!(germ_milnor_oracle(&f).unwrap().unwrap().milnor, 3);
    }

    #[test]
    fn non_reduced_is_rejected() {
        // zeta^2
        let f = polys(&[&[1], &[0], &[0]]);
        assert_eq!(germ_milnor_oracle(&f), Err(Error::NonReducedGerm));
    }

    #[test]
    fn berkowitz_matches_cofactor() {
        let p = 4;
        let m: Vec<Vec<Trunc>> = [[2, -1, 0], [1, 3, 4], [0, 5, -2]]
            .iter()
            .map(|r| r.iter().map(|&x| Trunc::constant(Rat::from(x), p)).collect())
            .collect();
        // 2(-6 - 20) + (-2) = -54
        assert_eq!(berkowitz_det(&m, p).0[0], Rat::from(-54));
    }

    #[test]
    fn airy_germ() {
        let a = Mat::from_rows(vec![
            vec![RatFn::zero(), RatFn::one()],
            vec![RatFn::var(), RatFn::zero()],
        ]);
        let l = certified(&a, Point::Infinity);
        let g = germ_data(&l).unwrap().unwrap();
        assert_eq!(g.branches, vec![Branch { cell: 0, p: 3, r: 2 }]);
        assert_eq!(g.inf_intersection, 5);
        assert_eq!(branch_milnor(0, &g), 4);
        assert_eq!((g.milnor, g.delta, g.r_c()), (4, 2, 1));
        let o = germ_milnor_oracle(&l.cleared_charpoly()).unwrap().unwrap();
        assert_eq!((o.milnor, o.inf_intersection), (4, 5));
    }

    #[test]
    fn fuchsian_node() {
        let a = Mat::diagonal(&[
            RatFn::monomial(Rat::new(1, 3), -1),
            RatFn::monomial(Rat::new(-2, 5), -1),
        ]);
        for pole in [Point::Finite(Rat::zero()), Point::Infinity] {
            let l = certified(&a, pole);
            let g = germ_data(&l).unwrap().unwrap();
            assert_eq!(g.r_c(), 2);
            assert_eq!(branch_intersection(0, 1, &g), 1);
            assert_eq!((g.milnor, g.delta, g.inf_intersection), (1, 1, 2));
            let o = germ_milnor_oracle(&l.cleared_charpoly()).unwrap().unwrap();
            assert_eq!(o.milnor, 1);
        }
    }

    #[test]
    fn two_ramified_branches() {
        // eigenvalues of z^{-1/2} and 2 z^{-1/2} type at 0: y^2 = 1/z^3, y^2 = 4/z^3
        let z3 = RatFn::monomial(Rat::one(), -3);
        let a = Mat::from_rows(vec![
            vec![RatFn::zero(), RatFn::one(), RatFn::zero(), RatFn::zero()],
            vec![z3.clone(), RatFn::zero(), RatFn::zero(), RatFn::zero()],
            vec![RatFn::zero(), RatFn::zero(), RatFn::zero(), RatFn::one()],
            vec![RatFn::zero(), RatFn::zero(), RatFn::monomial(Rat::from(4), -3), RatFn::zero()],
        ]);
        let l = certified(&a, Point::Finite(Rat::zero()));
        let g = germ_data(&l).unwrap().unwrap();
        assert!(g.branches.iter().all(|b| (b.p, b.r) == (1, 2)));
        assert_eq!(g.irr_hom[0][1], 2);
        assert_eq!(branch_intersection(0, 1, &g), 6);
        let o = germ_milnor_oracle(&l.cleared_charpoly()).unwrap().unwrap();
        assert_eq!(o.milnor, g.milnor);
        assert_eq!(o.inf_intersection, g.inf_intersection);
    }

    #[test]
    fn bounded_cell_is_not_a_branch() {
        let a = Mat::diagonal(&[RatFn::monomial(Rat::one(), -2), RatFn::zero()]);
        let l = certified(&a, Point::Finite(Rat::zero()));
        let g = germ_data(&l).unwrap().unwrap();
        assert_eq!((g.m, g.r_c()), (2, 1));
        assert_eq!((g.milnor, g.delta), (0, 0));
        let o = germ_milnor_oracle(&l.cleared_charpoly()).unwrap().unwrap();
        assert_eq!(o.milnor, 0);
    }

    #[test]
    fn delta_rejects_odd() {
        assert!(delta_invariant(1, 1).is_err());
        assert_eq!(delta_invariant(4, 1), Ok(2));
    }
}
