//! Block splitting of truncated series matrices (T A = B T with T unipotent
//! and B block diagonal), full diagonalization to scalar blocks, ramified
//! pullback, and extraction of HTL cells from the diagonal blocks.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::{resultant, Field, LocalMatrix, Mat, Rat, UPoly};
use crate::puiseux::series::PSeries;
use crate::puiseux::tfactor::split_completely;
use crate::puiseux::tower::{FieldTower, TElem};

/// t^r (A_0 + A_1 t + ... + A_N t^N) + O(t^{r+N+1}).
/// A_0 is nonzero unless every coefficient is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeriesMat<F: Field> {
    pub r: i64,
    pub coeffs: Vec<Mat<F>>,
}

impl<F: Field> TruncSeriesMat<F> {
    pub fn new(r: i64, coeffs: Vec<Mat<F>>) -> Self {
        assert!(!coeffs.is_empty());
        let mut m = TruncSeriesMat { r, coeffs };
        m.normalize();
        m
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        if let Some(k) = lead {
            if k > 0 {
                self.coeffs.drain(..k);
                self.r += k as i64;
            }
        }
    }

    pub fn size(&self) -> usize {
        self.coeffs[0].rows()
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exponent up to which (exclusive) the matrix is known.
    pub fn precision(&self) -> i64 {
        self.r + self.coeffs.len() as i64
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn leading(&self) -> &Mat<F> {
        &self.coeffs[0]
    }

    fn ctx(&self) -> F {
        self.coeffs[0].get(0, 0).zero_like()
    }

    /// Coefficient of t^e (zero below r).
    pub fn coeff_at(&self, e: i64) -> Mat<F> {
        let k = e - self.r;
        let n = self.size();
        if k < 0 || k as usize >= self.coeffs.len() {
            Mat::zero(n, n, &self.ctx())
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> TruncSeriesMat<G> {
        TruncSeriesMat {
            r: self.r,
            coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect(),
        }
    }

    /// P^{-1} A P with a constant invertible P.
    pub fn conjugate(&self, p: &Mat<F>) -> Result<Self> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::Inconsistency("singular conjugating matrix".into()))?;
        Ok(TruncSeriesMat::new(
            self.r,
            self.coeffs.iter().map(|c| pinv.times(c).times(p)).collect(),
        ))
    }

    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        TruncSeriesMat {
            r: self.r,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.block(rows.clone(), cols.clone()))
                .collect(),
        }
    }

    /// A - c t^e I.
    pub fn minus_scalar(&self, c: &F, e: i64) -> Self {
        let n = self.size();
        let k = e - self.r;
        assert!(k >= 0 && (k as usize) < self.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs[k as usize] = coeffs[k as usize].minus(&Mat::identity(n, &self.ctx()).scale(c));
        TruncSeriesMat::new(self.r, coeffs)
    }

    /// Entry (i, j) as a scalar series.
    pub fn entry(&self, i: usize, j: usize) -> PSeries<F> {
        PSeries::from_laurent(
            &self.ctx(),
            self.r,
            self.coeffs.iter().map(|c| c.get(i, j).clone()).collect(),
            Some(self.precision()),
        )
    }

    /// Assembles a matrix from entry series; the precision is the minimum over entries.
    pub fn from_entries(n: usize, entries: &[PSeries<F>], ctx: &F) -> Self {
        let prec = entries
            .iter()
            .map(|s| {
                assert_eq!(s.den(), 1);
                s.prec().expect("truncated entry").to_i64().unwrap()
            })
            .min()
            .unwrap();
        let low = entries
            .iter()
            .filter_map(|s| s.val())
            .map(|v| v.to_i64().unwrap())
            .min()
            .unwrap_or(prec - 1)
            .min(prec - 1);
        let coeffs = (low..prec)
            .map(|e| {
                Mat::from_fn(n, n, |i, j| {
                    entries[i * n + j]
                        .coeff(&Rat::from(e))
                        .unwrap_or_else(|| ctx.clone())
                })
            })
            .collect();
        TruncSeriesMat::new(low, coeffs)
    }

    /// S A S^{-1} with S = diag(t^{k_i}).
    pub fn shear(&self, k: &[i64]) -> Self {
        let n = self.size();
        let mut entries = vec![];
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entry(i, j).shift(&Rat::from(k[i] - k[j])));
            }
        }
        TruncSeriesMat::from_entries(n, &entries, &self.ctx())
    }

    /// s t^{s-1} A(t^s): the system d/dz - A under z = t^s.
    pub fn ramified_pullback(&self, s: usize) -> Self {
        if s == 1 {
            return self.clone();
        }
        let n = self.size();
        let ctx = self.ctx();
        let sc = ctx.from_int_like(s as i64);
        let len = s * self.coeffs.len();
        let coeffs = (0..len)
            .map(|i| {
                if i % s == 0 {
                    self.coeffs[i / s].scale(&sc)
                } else {
                    Mat::zero(n, n, &ctx)
                }
            })
            .collect();
        TruncSeriesMat::new(s as i64 * self.r + s as i64 - 1, coeffs)
    }
}

impl TruncSeriesMat<Rat> {
    pub fn from_local(l: &LocalMatrix) -> Self {
        TruncSeriesMat::new(-l.pole_order, l.coeffs.clone())
    }
}

/// Solves T Q - P T = C, requiring disjoint spectra of P and Q.
pub fn sylvester_solve<F: Field>(p: &Mat<F>, q: &Mat<F>, c: &Mat<F>) -> Result<Mat<F>> {
    let (k1, k2) = (p.rows(), q.rows());
    let ctx = c.get(0, 0).zero_like();
    let res = resultant(&p.charpoly(), &q.charpoly())?;
    if res.is_zero() {
        return Err(Error::SpectraOverlap);
    }
    let m = k1 * k2;
    let mut sys = Mat::zero(m, m, &ctx);
    for a in 0..k1 {
        for b in 0..k2 {
            let row = a * k2 + b;
            for x in 0..k2 {
                let v = sys.get(row, a * k2 + x).plus(q.get(x, b));
                sys.set(row, a * k2 + x, v);
            }
            for x in 0..k1 {
                let v = sys.get(row, x * k2 + b).minus(p.get(a, x));
                sys.set(row, x * k2 + b, v);
            }
        }
    }
    let rhs: Vec<F> = (0..m).map(|i| c.get(i / k2, i % k2).clone()).collect();
    let sol = sys.solve(&rhs).ok_or(Error::SpectraOverlap)?;
    Ok(Mat::from_fn(k1, k2, |a, b| sol[a * k2 + b].clone()))
}

/// Result of one splitting step: T = [[I, T12], [T21, I]] with
/// T12 = sum_{n>=1} t12[n-1] t^n (likewise T21), and B = diag(b11, b22).
#[derive(Clone, Debug)]
pub struct SplitCertificate<F: Field> {
    pub k1: usize,
    pub t12: Vec<Mat<F>>,
    pub t21: Vec<Mat<F>>,
    pub b11: TruncSeriesMat<F>,
    pub b22: TruncSeriesMat<F>,
    pub order: usize,
}

impl<F: Field> SplitCertificate<F> {
    /// Coefficients T_0..T_N of the full transformation.
    pub fn transformation(&self, n: usize, ctx: &F) -> Vec<Mat<F>> {
        let k1 = self.k1;
        (0..=self.order)
            .map(|e| {
                Mat::from_fn(n, n, |i, j| {
                    if e == 0 {
                        if i == j {
                            ctx.one_like()
                        } else {
                            ctx.clone()
                        }
                    } else if i < k1 && j >= k1 {
                        self.t12[e - 1].get(i, j - k1).clone()
                    } else if i >= k1 && j < k1 {
                        self.t21[e - 1].get(i - k1, j).clone()
                    } else {
                        ctx.clone()
                    }
                })
            })
            .collect()
    }

    /// Coefficients of T A - B T at t^{r+e}, e = 0..=N.
    pub fn residual(&self, a: &TruncSeriesMat<F>) -> Vec<Mat<F>> {
        let n = a.size();
        let ctx = a.ctx();
        let t = self.transformation(n, &ctx);
        let b: Vec<Mat<F>> = (0..=self.order)
            .map(|e| {
                let e = a.r + e as i64;
                let b1 = self.b11.coeff_at(e);
                let b2 = self.b22.coeff_at(e);
                Mat::from_fn(n, n, |i, j| {
                    if i < self.k1 && j < self.k1 {
                        b1.get(i, j).clone()
                    } else if i >= self.k1 && j >= self.k1 {
                        b2.get(i - self.k1, j - self.k1).clone()
                    } else {
                        ctx.clone()
                    }
                })
            })
            .collect();
        (0..=self.order)
            .map(|e| {
                let mut acc = Mat::zero(n, n, &ctx);
                for m in 0..=e {
                    let ae = a.coeff_at(a.r + (e - m) as i64);
                    acc = acc.plus(&t[m].times(&ae)).minus(&b[e - m].times(&t[m]));
                }
                acc
            })
            .collect()
    }

    /// Whether T A - B T vanishes through the certified order.
    pub fn verify(&self, a: &TruncSeriesMat<F>) -> bool {
        self.residual(a).iter().all(|m| m.is_zero())
    }
}

/// One splitting step for the partition (k1, n - k1); the leading matrix must
/// be block diagonal with disjoint block spectra.
pub fn split_once<F: Field>(g: &TruncSeriesMat<F>, k1: usize) -> Result<SplitCertificate<F>> {
    let n = g.size();
    assert!(0 < k1 && k1 < n);
    let big = g.order();
    let blk = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| -> Vec<Mat<F>> {
        g.coeffs.iter().map(|c| c.block(rows.clone(), cols.clone())).collect()
    };
    let (a11, a12) = (blk(0..k1, 0..k1), blk(0..k1, k1..n));
    let (a21, a22) = (blk(k1..n, 0..k1), blk(k1..n, k1..n));
    if !a12[0].is_zero() || !a21[0].is_zero() {
        return Err(Error::Inconsistency(
            "leading matrix is not block diagonal".into(),
        ));
    }
    // T_jk A^kk_0 - A^jj_0 T_jk = -A^jk_n - sum (T_mu A^kk_{n-mu} - A^jj_{n-mu} T_mu)
    //                             + sum T_mu A^kj_lambda T_nu
    let solve = |ajj: &[Mat<F>], akk: &[Mat<F>], ajk: &[Mat<F>], akj: &[Mat<F>]| {
        let mut t: Vec<Mat<F>> = vec![];
        for e in 1..=big {
            let mut c = ajk[e].negate_mat();
            for mu in 1..e {
                let tm = &t[mu - 1];
                c = c.minus(&tm.times(&akk[e - mu])).plus(&ajj[e - mu].times(tm));
            }
            for mu in 1..e {
                for nu in 1..e {
                    if mu + nu <= e {
                        let l = e - mu - nu;
                        c = c.plus(&t[mu - 1].times(&akj[l]).times(&t[nu - 1]));
                    }
                }
            }
            t.push(sylvester_solve(&ajj[0], &akk[0], &c)?);
        }
        Ok::<_, Error>(t)
    };
    let t12 = solve(&a11, &a22, &a12, &a21)?;
    let t21 = solve(&a22, &a11, &a21, &a12)?;
    // B_jj = A_jj + T_jk A_kj
    let block_b = |ajj: &[Mat<F>], t: &[Mat<F>], akj: &[Mat<F>]| -> TruncSeriesMat<F> {
        let coeffs = (0..=big)
            .map(|e| {
                let mut acc = ajj[e].clone();
                for mu in 1..=e {
                    acc = acc.plus(&t[mu - 1].times(&akj[e - mu]));
                }
                acc
            })
            .collect();
        TruncSeriesMat { r: g.r, coeffs }
    };
    let b11 = block_b(&a11, &t12, &a21);
    let b22 = block_b(&a22, &t21, &a12);
    Ok(SplitCertificate {
        k1,
        t12,
        t21,
        b11,
        b22,
        order: big,
    })
}

trait NegMat {
    fn negate_mat(&self) -> Self;
}

impl<F: Field> NegMat for Mat<F> {
    fn negate_mat(&self) -> Self {
        self.map(|x| x.negate())
    }
}

#[derive(Clone, Debug)]
pub struct SplitConfig {
    pub degree_bound: usize,
    /// Allow diagonal shearings diag(t^k) for nilpotent leading parts.
    pub shear: bool,
    /// Largest |k| tried in a shearing.
    pub shear_bound: i64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            degree_bound: 4,
            shear: false,
            shear_bound: 8,
        }
    }
}

/// Scalar blocks (the eigenvalues as truncated Laurent series) over a common tower.
#[derive(Clone, Debug)]
pub struct FullSplit {
    pub tower: Arc<FieldTower>,
    pub blocks: Vec<PSeries<TElem>>,
}

struct Splitter<'a> {
    cfg: &'a SplitConfig,
    tower: Arc<FieldTower>,
}

fn embed_mat(g: &TruncSeriesMat<TElem>, k: &Arc<FieldTower>) -> TruncSeriesMat<TElem> {
    g.map(|c| c.embed(k))
}

fn has_distinct_eigenvalues(m: &Mat<TElem>) -> bool {
    // charpoly is (x - c)^n exactly when it equals the n-th power of its
    // linear Taylor part around -coeff_{n-1}/n
    let chi = m.charpoly();
    let n = m.rows();
    let c = chi.coeff(n - 1).over(&chi.ctx().from_int_like(n as i64)).negate();
    let shifted = chi.taylor_shift(&c);
    (0..n).any(|i| !shifted.coeff(i).is_zero())
}

fn mat_poly_eval(p: &UPoly<TElem>, m: &Mat<TElem>) -> Mat<TElem> {
    let n = m.rows();
    let ctx = m.get(0, 0).zero_like();
    let mut acc = Mat::zero(n, n, &ctx);
    for c in p.coeffs().iter().rev() {
        acc = acc.times(m).plus(&Mat::identity(n, &ctx).scale(c));
    }
    acc
}

impl Splitter<'_> {
    fn split_rec(&mut self, g: TruncSeriesMat<TElem>) -> Result<Vec<PSeries<TElem>>> {
        let g = embed_mat(&g, &self.tower);
        let n = g.size();
        if n == 1 {
            return Ok(vec![g.entry(0, 0)]);
        }
        if g.is_zero() {
            return Err(Error::InsufficientTruncation(
                "eigenvalues agree to the available order".into(),
            ));
        }
        let a0 = g.leading().clone();
        let chi = a0.charpoly();
        let (k, roots) = split_completely(&chi, self.cfg.degree_bound).map_err(|e| match e {
            Error::UnsupportedExtension(m) => Error::ReductionUnavailable(m),
            e => e,
        })?;
        if !k.same_as(&self.tower) {
            self.tower = k;
            return self.split_rec(g);
        }
        if roots.len() >= 2 {
            let (lam, m1) = roots[0].clone();
            let ctx = self.tower.zero();
            let shifted = a0.minus(&Mat::identity(n, &ctx).scale(&lam));
            let mut pw = Mat::identity(n, &ctx);
            for _ in 0..m1 {
                pw = pw.times(&shifted);
            }
            let v1 = pw.nullspace();
            let mut rest = UPoly::one(&ctx);
            for (mu, m) in &roots[1..] {
                rest = rest.times(&UPoly::linear_root(mu).pow(*m as u32));
            }
            let v2 = mat_poly_eval(&rest, &a0).nullspace();
            if v1.len() != m1 || v1.len() + v2.len() != n {
                return Err(Error::Inconsistency("generalized eigenspaces".into()));
            }
            let cols: Vec<Vec<TElem>> = v1.into_iter().chain(v2).collect();
            let p = Mat::from_fn(n, n, |i, j| cols[j][i].clone());
            let gc = g.conjugate(&p)?;
            let cert = split_once(&gc, m1)?;
            let mut out = self.split_rec(cert.b11)?;
            out.extend(self.split_rec(cert.b22)?);
            return Ok(out);
        }
        let lam = roots[0].0.clone();
        let ctx = self.tower.zero();
        if a0 == Mat::identity(n, &ctx).scale(&lam) {
            let rest = g.minus_scalar(&lam, g.r);
            let term = PSeries::monomial(lam, &Rat::from(g.r));
            let blocks = self.split_rec(rest)?;
            let k = self.tower.clone();
            let term = term.map(&k.zero(), |c| c.embed(&k));
            return Ok(blocks
                .iter()
                .map(|b| b.map(&k.zero(), |c| c.embed(&k)).plus(&term))
                .collect());
        }
        if !self.cfg.shear {
            return Err(Error::NotRss(
                "leading matrix has a nilpotent part".into(),
            ));
        }
        let k = self.find_shear(&g).ok_or_else(|| {
            Error::ReductionUnavailable("no diagonal shearing separates the leading eigenvalues".into())
        })?;
        self.split_rec(g.shear(&k))
    }

    /// Smallest diagonal shearing (by max |k|, then lexicographic) whose
    /// leading matrix has two distinct eigenvalues.
    fn find_shear(&self, g: &TruncSeriesMat<TElem>) -> Option<Vec<i64>> {
        let n = g.size();
        let entries: Vec<PSeries<TElem>> = (0..n * n).map(|e| g.entry(e / n, e % n)).collect();
        let val: Vec<Option<i64>> = entries
            .iter()
            .map(|s| s.val().map(|v| v.to_i64().unwrap()))
            .collect();
        let ctx = self.tower.zero();
        for bound in 1..=self.cfg.shear_bound {
            let width = (2 * bound + 1) as usize;
            let total = width.pow((n - 1) as u32);
            for idx in 0..total {
                let mut k = vec![0i64];
                let mut x = idx;
                for _ in 1..n {
                    k.push((x % width) as i64 - bound);
                    x /= width;
                }
                if k.iter().map(|v| v.abs()).max() != Some(bound) {
                    continue;
                }
                let lead = (0..n * n)
                    .filter_map(|e| val[e].map(|v| v + k[e / n] - k[e % n]))
                    .min()?;
                // the leading coefficient must be known for every entry
                if (0..n * n).any(|e| {
                    val[e].is_none()
                        && entries[e].prec().unwrap().to_i64().unwrap() + k[e / n] - k[e % n]
                            <= lead
                }) {
                    continue;
                }
                let m = Mat::from_fn(n, n, |i, j| match val[i * n + j] {
                    Some(v) if v + k[i] - k[j] == lead => entries[i * n + j].lead().unwrap().clone(),
                    _ => ctx.clone(),
                });
                if has_distinct_eigenvalues(&m) {
                    return Some(k);
                }
            }
        }
        None
    }
}

/// Splits G into scalar blocks (its eigenvalues as truncated Laurent series).
pub fn full_split(g: &TruncSeriesMat<TElem>, cfg: &SplitConfig) -> Result<FullSplit> {
    let tower = g.coeffs[0].get(0, 0).tower().clone();
    let mut sp = Splitter { cfg, tower };
    let blocks = sp.split_rec(g.clone())?;
    let k = sp.tower.clone();
    let blocks = blocks
        .iter()
        .map(|b| b.map(&k.zero(), |c| c.embed(&k)))
        .collect();
    Ok(FullSplit { tower: k, blocks })
}

/// A cell read off from the reduction: principal part q (exponents < 0, in z),
/// ramification r, p = -r ord q, and the z^0 coefficient of q~.
#[derive(Clone, Debug)]
pub struct ReducedCell {
    pub q: PSeries<TElem>,
    pub r: usize,
    pub p: i64,
    pub residue: TElem,
    /// q~ = z * eigenvalue through exponent 0, as a series in z.
    pub q_tilde: PSeries<TElem>,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn pow_signed(x: &TElem, e: i64) -> TElem {
    if e >= 0 {
        x.powi(e as u64)
    } else {
        x.recip().powi((-e) as u64)
    }
}

/// Whether v(t) = u(zeta t) for some s-th root of unity zeta.
pub fn same_orbit(u: &PSeries<TElem>, v: &PSeries<TElem>, s: i64) -> bool {
    let tu = u.terms();
    let tv = v.terms();
    if tu.len() != tv.len() || tu.iter().zip(&tv).any(|(a, b)| a.0 != b.0) {
        return false;
    }
    if tu.is_empty() {
        return true;
    }
    let ks: Vec<i64> = tu.iter().map(|(e, _)| e.to_i64().unwrap()).collect();
    let g = ks.iter().fold(s, |acc, k| acc.gcd(k));
    let r = s / g;
    let es: Vec<i64> = ks.iter().map(|k| k / g).collect();
    let rho: Vec<TElem> = tu.iter().zip(&tv).map(|(a, b)| b.1.over(&a.1)).collect();
    // Bezout: sum a_i e_i + b r = 1
    let mut d = r;
    let mut coef = vec![0i64; es.len()];
    for (i, e) in es.iter().enumerate() {
        let (d2, x, y) = ext_gcd(d, *e);
        for c in coef.iter_mut() {
            *c *= x;
        }
        coef[i] += y;
        d = d2;
    }
    if d != 1 {
        return false;
    }
    let one = rho[0].one_like();
    let eta = rho
        .iter()
        .zip(&coef)
        .fold(one.clone(), |acc, (x, a)| acc.times(&pow_signed(x, *a)));
    if eta.powi(r as u64) != one {
        return false;
    }
    rho.iter().zip(&es).all(|(x, e)| *x == pow_signed(&eta, *e))
}

/// Reduction route: pull back by s, split into scalar blocks, and group the
/// blocks into orbits under t -> zeta t.
pub fn htl_from_reduction(
    local: &LocalMatrix,
    s_hint: usize,
    cfg: &SplitConfig,
) -> Result<(FullSplit, Vec<ReducedCell>)> {
    let q = FieldTower::rationals();
    let g = TruncSeriesMat::from_local(local).map(|c| q.from_rat(c));
    let g = g.ramified_pullback(s_hint);
    let mut cfg = cfg.clone();
    cfg.shear = cfg.shear || s_hint > 1;
    let split = full_split(&g, &cfg).map_err(|e| match e {
        Error::NotRss(m) | Error::InsufficientTruncation(m) => Error::ReductionUnavailable(m),
        Error::SpectraOverlap => Error::ReductionUnavailable("leading spectra overlap".into()),
        e => e,
    })?;
    let s = s_hint as i64;
    let zero = split.tower.zero();
    let sc = zero.from_int_like(s);
    let mut tilde = vec![];
    for b in &split.blocks {
        // q~(t) = t b(t) / s, needed through t^0
        let qt = b.shift(&Rat::one()).scale(&sc.recip());
        if qt.prec().is_some_and(|p| p <= Rat::zero()) {
            return Err(Error::ReductionUnavailable(
                "truncation too low for the residue term".into(),
            ));
        }
        tilde.push(qt.filter_terms(|e| *e <= Rat::zero()));
    }
    let mut used = vec![false; tilde.len()];
    let mut cells = vec![];
    for i in 0..tilde.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut size = 1;
        for j in i + 1..tilde.len() {
            if !used[j] && same_orbit(&tilde[i], &tilde[j], s) {
                used[j] = true;
                size += 1;
            }
        }
        let u = &tilde[i];
        let g = u
            .terms()
            .iter()
            .fold(s, |acc, (e, _)| acc.gcd(&e.to_i64().unwrap()));
        let r = (s / g) as usize;
        if size != r {
            return Err(Error::ReductionUnavailable(format!(
                "orbit of size {size} for a block of ramification {r}"
            )));
        }
        // back to z = t^s
        let mut zq = PSeries::zero(&zero);
        for (e, c) in u.terms() {
            zq = zq.plus(&PSeries::monomial(c, &(e / Rat::from(s))));
        }
        let principal = zq.filter_terms(|e| e.is_negative());
        let residue = zq.coeff(&Rat::zero()).unwrap();
        let p = match principal.val() {
            Some(v) => -(v * Rat::from(r as i64)).to_i64().unwrap(),
            None => 0,
        };
        cells.push(ReducedCell {
            q: principal,
            r,
            p,
            residue,
            q_tilde: zq,
        });
    }
    Ok((split, cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> Mat<Rat> {
        Mat::from_rows(rows.into_iter().map(|r| r.into_iter().map(Rat::from).collect()).collect())
    }

    #[test]
    fn sylvester_examples() {
        let t = sylvester_solve(&m(vec![vec![0]]), &m(vec![vec![1]]), &m(vec![vec![5]])).unwrap();
        assert_eq!(t, m(vec![vec![5]]));
        let t = sylvester_solve(&m(vec![vec![1]]), &m(vec![vec![3]]), &m(vec![vec![4]])).unwrap();
        assert_eq!(t, m(vec![vec![2]]));
        let t = sylvester_solve(
            &m(vec![vec![0, 0], vec![0, 1]]),
            &m(vec![vec![2]]),
            &m(vec![vec![2], vec![2]]),
        )
        .unwrap();
        assert_eq!(t, m(vec![vec![1], vec![2]]));
        assert_eq!(
            sylvester_solve(&m(vec![vec![1]]), &m(vec![vec![1]]), &m(vec![vec![1]])),
            Err(Error::SpectraOverlap)
        );
    }

    #[test]
    fn split_two_by_two() {
        // [[0, t], [t, 1]]: eigenvalues -t^2 + ..., 1 + t^2 + ...
        let g = TruncSeriesMat::new(
            0,
            vec![m(vec![vec![0, 0], vec![0, 1]]), m(vec![vec![0, 1], vec![1, 0]]), m(vec![vec![0, 0], vec![0, 0]])],
        );
        let c = split_once(&g, 1).unwrap();
        assert!(c.verify(&g));
        assert_eq!(c.t12[0], m(vec![vec![-1]]));
        assert_eq!(c.t21[0], m(vec![vec![1]]));
        assert_eq!(c.b11.coeff_at(2), m(vec![vec![-1]]));
        assert_eq!(c.b22.coeff_at(2), m(vec![vec![1]]));

        let g = TruncSeriesMat::new(
            0,
            vec![m(vec![vec![0, 0], vec![0, 1]]), m(vec![vec![0, 0], vec![1, 0]]), m(vec![vec![0, 0], vec![0, 0]])],
        );
        let c = split_once(&g, 1).unwrap();
        assert!(c.verify(&g));
        assert!(c.t12.iter().all(|t| t.is_zero()));
        assert_eq!(c.t21[0], m(vec![vec![1]]));
        assert!(c.b11.is_zero());
    }

    #[test]
    fn pullback_scales() {
        let g = TruncSeriesMat::new(-2, vec![m(vec![vec![1]])]);
        let p = g.ramified_pullback(2);
        assert_eq!(p.r, -3);
        assert_eq!(p.leading(), &m(vec![vec![2]]));
    }

    #[test]
    fn airy_needs_shear() {
        let q = FieldTower::rationals();
        // Airy at infinity: [[0, -t^-2], [-t^-3, 0]] pulled back by 2
        let g = TruncSeriesMat::new(
            -3,
            vec![m(vec![vec![0, 0], vec![-1, 0]]), m(vec![vec![0, -1], vec![0, 0]]), m(vec![vec![0, 0], vec![0, 0]]), m(vec![vec![0, 0], vec![0, 0]])],
        )
        .map(|c| q.from_rat(c))
        .ramified_pullback(2);
        assert!(!has_distinct_eigenvalues(g.leading()));
        let plain = full_split(&g, &SplitConfig::default());
        assert!(matches!(plain, Err(Error::NotRss(_))));
        let cfg = SplitConfig {
            shear: true,
            ..SplitConfig::default()
        };
        let fs = full_split(&g, &cfg).unwrap();
        let leads: Vec<String> = fs.blocks.iter().map(|b| b.lead().unwrap().to_string()).collect();
        assert_eq!(fs.blocks[0].val(), Some(Rat::from(-4)));
        assert_eq!(leads.len(), 2);
    }

    #[test]
    fn orbit_test() {
        let q = FieldTower::rationals();
        let z = q.zero();
        let u = PSeries::from_laurent(&z, -3, vec![q.one()], None);
        let v = PSeries::from_laurent(&z, -3, vec![q.from_rat(&Rat::from(-1))], None);
        assert!(same_orbit(&u, &v, 2));
        let w = PSeries::from_laurent(&z, -2, vec![q.from_rat(&Rat::from(-1))], None);
        assert!(!same_orbit(&w, &w.negate(), 2));
    }
}
