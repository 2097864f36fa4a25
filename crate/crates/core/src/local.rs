//! Local differential module at a pole: HTL cells from the Puiseux roots of
//! the characteristic polynomial, the multiplicity-free / regular-semisimple
//! gate, irregularities of M, Hom and End, and delta(End).

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::localize::{default_truncation, local_exact, localize, min_valuation};
use crate::exact::{charpoly, BiPoly, Field, LocalMatrix, MatRF, Point, Rat, UPoly};
use crate::puiseux::clusters::{puiseux_clusters_with, ClusterSet, ExpansionConfig};
use crate::puiseux::newton::newton_polygon;
use crate::puiseux::series::PSeries;
use crate::puiseux::tower::TElem;
use crate::splitting::{htl_from_reduction, ReducedCell, SplitConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    MultiplicityFree,
    RegularSemisimple,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::MultiplicityFree => "multiplicity-free",
            Mode::RegularSemisimple => "regular-semisimple",
        })
    }
}

/// One Galois orbit of formal exponential factors.
#[derive(Clone, Debug)]
pub struct HTLCell {
    /// Principal part of q~ = z * (root): terms c z^{-k/r}, k >= 1.
    pub q: PSeries<TElem>,
    pub r: usize,
    /// -r ord q (0 when q = 0).
    pub p: i64,
    /// z^0 coefficient of q~, filled by the reduction route when it matches.
    pub exponent_residue: Option<TElem>,
    /// Index of the underlying Puiseux cluster.
    pub cluster: usize,
    /// Valuation of the eigenvalue root (None for the zero root).
    pub root_order: Option<Rat>,
}

impl HTLCell {
    pub fn is_regular(&self) -> bool {
        self.p == 0
    }

    /// Slope p / r.
    pub fn slope(&self) -> Rat {
        Rat::new(self.p, self.r as i64)
    }
}

#[derive(Clone, Debug)]
pub struct LocalConfig {
    /// Truncation order of the localized matrix (None: automatic).
    pub truncation: Option<usize>,
    pub degree_bound: usize,
}

impl Default for LocalConfig {
    fn default() -> Self {
        LocalConfig {
            truncation: None,
            degree_bound: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LocalModule {
    pub pole: Point,
    pub rank: usize,
    pub pole_order: i64,
    pub local: LocalMatrix,
    /// det(y I - G(t)) in the local coordinate t.
    pub charpoly: BiPoly,
    pub clusters: ClusterSet,
    pub cells: Vec<HTLCell>,
    pub mode: Option<Mode>,
    /// Cells read off from the splitting reduction, when it ran.
    pub reduction: Option<Vec<ReducedCell>>,
    pub warnings: Vec<String>,
}

fn cell_cmp(a: &HTLCell, b: &HTLCell) -> Ordering {
    b.slope().cmp(&a.slope()).then_with(|| match (a.q.lead(), b.q.lead()) {
        (Some(x), Some(y)) => x.lex_cmp(y),
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (None, None) => Ordering::Equal,
    })
}

/// Localizes A at the pole, expands the eigenvalues, and reads off one cell per cluster.
pub fn build_local(a: &MatRF, pole: &Point, cfg: &LocalConfig) -> Result<LocalModule> {
    let n = a.rows();
    let exact = local_exact(a, pole);
    let nu = (-min_valuation(&exact).unwrap_or(0)).max(0);
    let trunc = cfg.truncation.unwrap_or_else(|| default_truncation(n, nu));
    let local = localize(a, pole, trunc);
    let f = charpoly(&local.exact);
    let ecfg = ExpansionConfig {
        degree_bound: cfg.degree_bound,
        ..ExpansionConfig::default()
    };
    let clusters = puiseux_clusters_with(&f, &Rat::zero(), &ecfg)?;
    let mut cells = vec![];
    for (i, c) in clusters.clusters.iter().enumerate() {
        let qt = c.expansion.shift(&Rat::one());
        let q = qt.filter_terms(|e| e.is_negative());
        let p = match q.val() {
            Some(v) => -(v * Rat::from(c.r as i64))
                .to_i64()
                .ok_or_else(|| Error::Inconsistency("non-integral p".into()))?,
            None => 0,
        };
        cells.push(HTLCell {
            q,
            r: c.r,
            p,
            exponent_residue: None,
            cluster: i,
            root_order: c.order.clone(),
        });
    }
    cells.sort_by(cell_cmp);
    Ok(LocalModule {
        pole: pole.clone(),
        rank: n,
        pole_order: nu,
        local,
        charpoly: f,
        clusters,
        cells,
        mode: None,
        reduction: None,
        warnings: vec![],
    })
}

/// Outcome of the assumption gate.
#[derive(Clone, Debug)]
pub struct AssumptionCheck {
    pub mode: Option<Mode>,
    pub reason: String,
    pub reduction: Option<Vec<ReducedCell>>,
}

impl AssumptionCheck {
    pub fn ok(&self) -> bool {
        self.mode.is_some()
    }
}

fn q_display(c: &HTLCell) -> String {
    if c.q.is_exact_zero() {
        "0".into()
    } else {
        c.q.display_in("z")
    }
}

/// Multiplicity-free iff every pair of distinct conjugate roots differs in
/// the principal part, i.e. every contact is below -1.
fn multiplicity_free_reason(l: &LocalModule) -> Option<String> {
    let minus_one = Rat::from(-1);
    for a in &l.cells {
        if l.clusters.contacts(a.cluster, a.cluster).iter().any(|c| *c >= minus_one) {
            return Some(format!(
                "cell with q = {} and ramification {} has multiplicity > 1",
                q_display(a),
                a.r
            ));
        }
    }
    for (x, a) in l.cells.iter().enumerate() {
        for b in &l.cells[x + 1..] {
            if l.clusters.contacts(a.cluster, b.cluster).iter().any(|c| *c >= minus_one) {
                return Some(format!(
                    "cells with q = {} and q = {} have equal principal parts",
                    q_display(a),
                    q_display(b)
                ));
            }
        }
    }
    None
}

/// The assumption gate: multiplicity free, or (all cells unramified)
/// regular semisimple by the splitting certificate.
pub fn check_assumption(l: &LocalModule) -> AssumptionCheck {
    let Some(mf_fail) = multiplicity_free_reason(l) else {
        return AssumptionCheck {
            mode: Some(Mode::MultiplicityFree),
            reason: "all cells have multiplicity 1".into(),
            reduction: None,
        };
    };
    if l.cells.iter().any(|c| c.r > 1) {
        return AssumptionCheck {
            mode: None,
            reason: format!("{mf_fail}; ramified cells exclude the regular-semisimple route"),
            reduction: None,
        };
    }
    let scfg = SplitConfig { shear: true, ..SplitConfig::default() };
    match htl_from_reduction(&l.local, 1, &scfg) {
        Err(e) => AssumptionCheck {
            mode: None,
            reason: format!("{mf_fail}; splitting reduction failed: {e}"),
            reduction: None,
        },
        Ok((_, cells)) => {
            for (i, a) in cells.iter().enumerate() {
                for b in &cells[i + 1..] {
                    if a.q_tilde == b.q_tilde {
                        return AssumptionCheck {
                            mode: None,
                            reason: format!(
                                "{mf_fail}; diagonal normal form has the repeated entry {}",
                                a.q_tilde.display_in("z")
                            ),
                            reduction: Some(cells),
                        };
                    }
                }
            }
            AssumptionCheck {
                mode: Some(Mode::RegularSemisimple),
                reason: "splitting certificate with distinct diagonal entries".into(),
                reduction: Some(cells),
            }
        }
    }
}

/// Two rss cells with equal principal part whose residues differ by a nonzero integer.
pub fn resonance_warnings(reduced: &[ReducedCell]) -> Vec<String> {
    let mut out = vec![];
    for (i, a) in reduced.iter().enumerate() {
        for b in &reduced[i + 1..] {
            if a.q != b.q {
                continue;
            }
            if let Some(d) = a.residue.minus(&b.residue).as_rat() {
                if d.is_integer() && !d.is_zero() {
                    out.push(format!(
                        "resonant exponents {} and {} (integer difference); horizontal dimension unverified",
                        a.residue, b.residue
                    ));
                }
            }
        }
    }
    out
}

impl LocalModule {
    /// Runs the gate; records the mode, residues and resonance warnings, or
    /// returns the violation.
    pub fn certify(mut self) -> Result<LocalModule> {
        let chk = check_assumption(&self);
        let Some(mode) = chk.mode else {
            return Err(Error::AssumptionViolation(format!(
                "at {}: {}",
                self.pole, chk.reason
            )));
        };
        self.mode = Some(mode);
        if let Some(red) = &chk.reduction {
            self.warnings.extend(resonance_warnings(red));
            self.attach_residues(red);
        }
        self.reduction = chk.reduction;
        Ok(self)
    }

    fn attach_residues(&mut self, red: &[ReducedCell]) {
        for cell in &mut self.cells {
            let c = &self.clusters.clusters[cell.cluster];
            let qt = c.expansion.shift(&Rat::one()).filter_terms(|e| *e <= Rat::zero());
            for rc in red {
                let k = rc.q_tilde.ctx().tower();
                if !(c.tower.is_subtower_of(k) || k.is_subtower_of(&c.tower)) {
                    continue;
                }
                let big = if c.tower.is_subtower_of(k) { k.clone() } else { c.tower.clone() };
                let a = qt.map(&big.zero(), |x| x.embed(&big));
                let b = rc.q_tilde.map(&big.zero(), |x| x.embed(&big));
                if a == b {
                    cell.exponent_residue = Some(rc.residue.clone());
                }
            }
        }
    }

    pub fn m(&self) -> usize {
        self.cells.len()
    }

    pub fn irregularity(&self) -> i64 {
        self.cells.iter().map(|c| c.p).sum()
    }

    /// Irr(Hom(M_i, M_j)) = -sum over conjugate pairs of min(0, ord(q_i - q_j)).
    pub fn irr_hom(&self, i: usize, j: usize) -> i64 {
        let (a, b) = (&self.cells[i], &self.cells[j]);
        let s: Rat = self
            .clusters
            .contacts(a.cluster, b.cluster)
            .iter()
            .map(|c| (c + &Rat::one()).min(Rat::zero()))
            .fold(Rat::zero(), |x, y| x + y);
        let v = -(s * Rat::from(a.r as i64));
        v.to_i64().expect("integral Irr(Hom)")
    }

    pub fn irr_end(&self) -> i64 {
        let m = self.m();
        (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| self.irr_hom(i, j)).sum()
    }

    /// dim of horizontal sections of End (Schur): m.
    pub fn hor_dim(&self) -> i64 {
        self.m() as i64
    }

    pub fn delta_end(&self) -> i64 {
        (self.rank * self.rank) as i64 + self.irr_end() - self.hor_dim()
    }

    /// The local characteristic polynomial cleared of denominators and made
    /// primitive in t.
    pub fn cleared_charpoly(&self) -> Vec<UPoly<Rat>> {
        clear_bipoly(&self.charpoly)
    }
}

/// Conjugation-invariant description of a cell: exponents of q with c^r
/// for each coefficient c (rational ones only), and the residue term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellSignature {
    pub r: usize,
    pub p: i64,
    pub terms: Vec<(Rat, Option<Rat>)>,
    pub residue: Option<Rat>,
}

fn signature(q: &PSeries<TElem>, r: usize, p: i64, residue: Option<&TElem>) -> CellSignature {
    CellSignature {
        r,
        p,
        terms: q
            .terms()
            .into_iter()
            .map(|(e, c)| (e, c.powi(r as u64).as_rat()))
            .collect(),
        residue: residue.and_then(|x| x.as_rat()),
    }
}

impl LocalModule {
    /// Signatures of the cells read off the Puiseux roots.
    pub fn cell_signatures(&self) -> Vec<CellSignature> {
        let mut v: Vec<CellSignature> = self
            .cells
            .iter()
            .map(|c| {
                let res = self.clusters.clusters[c.cluster]
                    .expansion
                    .shift(&Rat::one())
                    .coeff(&Rat::zero());
                signature(&c.q, c.r, c.p, res.as_ref())
            })
            .collect();
        v.sort();
        v
    }

    /// Compares the Puiseux cells with the cells of the splitting reduction
    /// (pulled back by the lcm of the ramifications). None when the
    /// reduction is unavailable.
    pub fn reduction_agrees(&self) -> Result<Option<bool>> {
        let s = self.cells.iter().fold(1usize, |acc, c| {
            let g = num_integer::gcd(acc, c.r);
            acc / g * c.r
        });
        let reduced = match (&self.reduction, s) {
            (Some(red), 1) => red.clone(),
            _ => match htl_from_reduction(&self.local, s, &SplitConfig { shear: true, ..SplitConfig::default() }) {
                Ok((_, red)) => red,
                Err(Error::ReductionUnavailable(_)) | Err(Error::UnsupportedExtension(_)) => {
                    return Ok(None)
                }
                Err(e) => return Err(e),
            },
        };
        let mut other: Vec<CellSignature> = reduced
            .iter()
            .map(|c| signature(&c.q, c.r, c.p, Some(&c.residue)))
            .collect();
        other.sort();
        Ok(Some(other == self.cell_signatures()))
    }
}

/// Multiplies by the common denominator and removes the polynomial content;
/// returns the coefficients of y^0..y^n as polynomials in the variable.
pub fn clear_bipoly(f: &BiPoly) -> Vec<UPoly<Rat>> {
    let one = UPoly::one(&Rat::zero());
    let den = f.coeffs().iter().fold(one.clone(), |acc, c| {
        let g = acc.gcd(c.den());
        acc.times(c.den()).exact_div(&g).unwrap()
    });
    let polys: Vec<UPoly<Rat>> = f
        .coeffs()
        .iter()
        .map(|c| c.num().times(&den.exact_div(c.den()).unwrap()))
        .collect();
    let content = polys
        .iter()
        .filter(|p| !p.is_zero())
        .fold(UPoly::zero(&Rat::zero()), |acc, p| if acc.is_zero() { p.monic() } else { acc.gcd(p) });
    polys
        .iter()
        .map(|p| p.exact_div(&content).unwrap())
        .collect()
}

/// Power sums p_0..p_k of the roots of the monic `f` (Newton's identities).
fn power_sums<F: Field>(f: &UPoly<F>, k: usize) -> Vec<F> {
    let n = f.deg() as usize;
    let ctx = f.ctx().clone();
    let c = |i: usize| if i <= n { f.coeff(n - i) } else { ctx.zero_like() };
    let mut p = vec![ctx.from_int_like(n as i64)];
    for m in 1..=k {
        let mut s = c(m).times(&ctx.from_int_like(m as i64));
        for i in 1..m {
            s = s.plus(&c(i).times(&p[m - i]));
        }
        p.push(s.negate());
    }
    p
}

/// prod over ordered pairs i != j of (X - (y_i - y_j)) for the roots y_i of
/// the monic `f`, from the power sums of the differences.
pub fn difference_poly<F: Field>(f: &UPoly<F>) -> UPoly<F> {
    let n = f.deg() as usize;
    let big = n * n - n;
    let ctx = f.ctx().clone();
    let p = power_sums(f, big);
    // sum_{i,j} (y_i - y_j)^k; the diagonal adds nothing for k >= 1
    let mut binom = vec![1i64];
    let mut q = vec![ctx.zero_like()];
    for k in 1..=big {
        binom = (0..=k)
            .map(|m| if m == 0 || m == k { 1 } else { binom[m - 1] + binom[m] })
            .collect();
        let mut s = ctx.zero_like();
        for m in 0..=k {
            let sign = if (k - m) % 2 == 0 { 1 } else { -1 };
            let t = p[m].times(&p[k - m]).times(&ctx.from_int_like(sign * binom[m]));
            s = s.plus(&t);
        }
        q.push(s);
    }
    // elementary symmetric functions from power sums
    let mut e = vec![ctx.one_like()];
    for k in 1..=big {
        let mut s = ctx.zero_like();
        for i in 1..=k {
            let t = e[k - i].times(&q[i]);
            s = if i % 2 == 1 { s.plus(&t) } else { s.minus(&t) };
        }
        e.push(s.over(&ctx.from_int_like(k as i64)));
    }
    let coeffs = (0..=big)
        .map(|d| {
            let k = big - d;
            if k.is_multiple_of(2) {
                e[k].clone()
            } else {
                e[k].negate()
            }
        })
        .collect();
    UPoly::new(coeffs, &ctx)
}

/// Independent value of Irr(End): read the orders of the root differences
/// off the Newton polygon of their polynomial.
pub fn irr_end_from_differences(f: &BiPoly) -> Result<i64> {
    let f = f.monic();
    let n = f.degree().ok_or(Error::DegreeZero)?;
    if n == 1 {
        return Ok(0);
    }
    let diff = difference_poly(&f);
    let np = newton_polygon(&diff)?;
    if np.y_valuation() != 0 {
        return Err(Error::NotSquarefree);
    }
    let mut s = Rat::zero();
    for e in &np.edges {
        let g = e.root_order() + Rat::one();
        s = s + g.min(Rat::zero()) * Rat::from(e.length as i64);
    }
    (-s).to_i64()
        .ok_or_else(|| Error::Inconsistency("non-integral Irr(End)".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{resultant, Mat, RatFn};

    fn z() -> RatFn {
        RatFn::var()
    }

    fn airy() -> MatRF {
        Mat::from_rows(vec![vec![RatFn::zero(), RatFn::one()], vec![z(), RatFn::zero()]])
    }

    #[test]
    fn airy_at_infinity() {
        let l = build_local(&airy(), &Point::Infinity, &LocalConfig::default())
            .unwrap()
            .certify()
            .unwrap();
        assert_eq!(l.mode, Some(Mode::MultiplicityFree));
        assert_eq!(l.m(), 1);
        assert_eq!((l.cells[0].p, l.cells[0].r), (3, 2));
        assert_eq!(l.cells[0].q.val(), Some(Rat::new(-3, 2)));
        assert_eq!(l.pole_order, 3);
        assert_eq!(l.irregularity(), 3);
        assert_eq!(l.irr_end(), 3);
        assert_eq!(l.delta_end(), 6);
        assert_eq!(irr_end_from_differences(&l.charpoly).unwrap(), 3);
        assert_eq!(l.reduction_agrees().unwrap(), Some(true));
    }

    #[test]
    fn fuchsian_is_regular_semisimple() {
        let a = Mat::diagonal(&[
            RatFn::monomial(Rat::new(1, 3), -1),
            RatFn::monomial(Rat::new(1, 2), -1),
        ]);
        for pole in [Point::Finite(Rat::zero()), Point::Infinity] {
            let l = build_local(&a, &pole, &LocalConfig::default()).unwrap().certify().unwrap();
            assert_eq!(l.mode, Some(Mode::RegularSemisimple));
            assert_eq!(l.m(), 2);
            assert!(l.cells.iter().all(|c| c.p == 0 && c.r == 1));
            assert!(l.cells.iter().all(|c| c.exponent_residue.is_some()));
            assert_eq!(l.irr_end(), 0);
            assert_eq!(l.delta_end(), 2);
            assert!(l.warnings.is_empty());
            assert_eq!(l.reduction_agrees().unwrap(), Some(true));
        }
    }

    #[test]
    fn rank_one_irregular() {
        let a = Mat::from_rows(vec![vec![RatFn::monomial(Rat::one(), -2)]]);
        let l = build_local(&a, &Point::Finite(Rat::zero()), &LocalConfig::default())
            .unwrap()
            .certify()
            .unwrap();
        assert_eq!((l.cells[0].p, l.cells[0].r), (1, 1));
        assert_eq!(l.irregularity(), 1);
        assert_eq!(l.delta_end(), 0);
    }

    #[test]
    fn bessel_violates() {
        let a = Mat::from_rows(vec![
            vec![RatFn::zero(), RatFn::one()],
            vec![RatFn::monomial(Rat::one(), -1), RatFn::zero()],
        ]);
        let err = build_local(&a, &Point::Finite(Rat::zero()), &LocalConfig::default())
            .unwrap()
            .certify()
            .unwrap_err();
        assert!(matches!(err, Error::AssumptionViolation(_)));
    }

    #[test]
    fn resonance_is_flagged() {
        let a = Mat::diagonal(&[
            RatFn::monomial(Rat::new(1, 2), -1),
            RatFn::monomial(Rat::new(3, 2), -1),
        ]);
        let l = build_local(&a, &Point::Finite(Rat::zero()), &LocalConfig::default())
            .unwrap()
            .certify()
            .unwrap();
        assert_eq!(l.warnings.len(), 1);
    }

    #[test]
    fn difference_poly_matches_resultant() {
        // Res_y(F(y), F(y + X)) = X^n * prod_{i != j} (X - (y_i - y_j)) up to sign
        let f = UPoly::from_ints(&[2, -1, 0, 1]);
        let d = difference_poly(&f);
        assert_eq!(d.degree(), Some(6));
        for x in [-3i64, 1, 2, 5] {
            let xr = Rat::from(x);
            let r = resultant(&f, &f.taylor_shift(&xr)).unwrap();
            let lhs = xr.pow(3) * d.eval(&xr);
            assert_eq!(r.abs(), lhs.abs());
        }
    }
}
