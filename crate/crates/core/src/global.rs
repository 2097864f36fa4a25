//! Global invariants of the spectral curve and of the connection: the class
//! n X_0 + b f, arithmetic genus, Euler characteristic of the normalization,
//! index of rigidity, and the verdicts comparing them.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::bifactor::{factor_bipoly, BiFactorization};
use crate::exact::factor::factor_rat;
use crate::exact::localize::{local_exact, pole_set_validate};
use crate::exact::{charpoly, discriminant, resultant, BiPoly, Field, MatRF, Point, Rat, RatFn, UPoly};
use crate::germ::{germ_data, germ_milnor_oracle, GermData, OracleGerm};
use crate::local::{build_local, clear_bipoly, irr_end_from_differences, LocalConfig, LocalModule};
use crate::puiseux::clusters::disc_valuation;
use crate::puiseux::tfactor::adjoin_bounded;
use crate::puiseux::tower::{FieldTower, TElem};

/// C = n X_0 + b f on the compactified cotangent bundle of a genus-g curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    pub n: usize,
    pub b: i64,
    pub genus: i64,
}

pub fn total_inf_intersection<'a>(germs: impl IntoIterator<Item = &'a GermData>) -> i64 {
    germs.into_iter().map(|g| g.inf_intersection).sum()
}

/// g_a = (n^2 (2g - 2) + (2n - 2) b) / 2 + 1.
pub fn arithmetic_genus(c: &CurveClass) -> Rat {
    let n = c.n as i64;
    Rat::new(n * n * (2 * c.genus - 2) + (2 * n - 2) * c.b, 2) + Rat::one()
}

pub fn euler_char_normalization(g_a: i64, deltas: impl IntoIterator<Item = i64>) -> i64 {
    2 - 2 * g_a + 2 * deltas.into_iter().sum::<i64>()
}

/// rig = (2 - 2g) n^2 - sum of delta(End) over the poles.
pub fn rigidity_index(n: usize, genus: i64, delta_ends: impl IntoIterator<Item = i64>) -> i64 {
    (2 - 2 * genus) * (n * n) as i64 - delta_ends.into_iter().sum::<i64>()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    Singular(Vec<String>),
    /// A candidate fibre lies over a point of too high degree.
    Indeterminate(String),
}

impl Smoothness {
    pub fn label(&self) -> &'static str {
        match self {
            Smoothness::Smooth => "smooth",
            Smoothness::Singular(_) => "singular",
            Smoothness::Indeterminate(_) => "indeterminate",
        }
    }
}

fn eval_at(p: &UPoly<Rat>, a: &TElem) -> TElem {
    p.coeffs()
        .iter()
        .rev()
        .fold(a.zero_like(), |acc, c| acc.times(a).plus(&a.from_rat_like(c)))
}

/// Common zeros of F, F_y and F_z over the roots of the irreducible `s`.
/// `f` lists the coefficients of y^0..y^n as polynomials in z.
fn fibre_singularities(f: &[UPoly<Rat>], s: &UPoly<Rat>, bound: usize, var: &str) -> Result<Option<String>> {
    let q = FieldTower::rationals();
    let (k, alpha): (Arc<FieldTower>, TElem) = if s.deg() == 1 {
        (q.clone(), q.from_rat(&(-s.coeff(0) / s.coeff(1))))
    } else {
        let k = adjoin_bounded(&q, &s.map(&q.zero(), |c| q.from_rat(c)), bound)?;
        let g = k.generator();
        (k, g)
    };
    let zero = k.zero();
    let fy = UPoly::new(f.iter().map(|c| eval_at(c, &alpha)).collect(), &zero);
    let fz = UPoly::new(f.iter().map(|c| eval_at(&c.derivative(), &alpha)).collect(), &zero);
    if fy.is_zero() {
        return Err(Error::Inconsistency(format!(
            "fibre over {} is a component",
            s.display_in(var)
        )));
    }
    let g = fy.gcd(&fy.derivative()).gcd(&fz);
    if g.deg() < 1 {
        return Ok(None);
    }
    let at = if s.deg() == 1 {
        format!("{var} = {alpha}")
    } else {
        format!("{var} a root of {}", s.display_in(var))
    };
    Ok(Some(format!("singular point over {at}, y a root of {}", g.display_in("y"))))
}

/// Singular points of F = 0 with z outside `excluded`, F given by its
/// coefficients in y as polynomials in z.
pub fn singular_points(f: &[UPoly<Rat>], excluded: &[Rat], bound: usize, var: &str) -> Result<Smoothness> {
    let big = UPoly::new(f.iter().map(|c| RatFn::from_poly(c.clone())).collect(), &RatFn::zero());
    let s = resultant(&big, &big.derivative())?;
    if s.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let mut singular = vec![];
    let mut undecided = vec![];
    for (fac, _) in factor_rat(s.num()) {
        if fac.deg() == 1 && excluded.contains(&(-fac.coeff(0))) {
            continue;
        }
        match fibre_singularities(f, &fac, bound, var) {
            Ok(Some(d)) => singular.push(d),
            Ok(None) => {}
            Err(Error::UnsupportedExtension(m)) => undecided.push(m),
            Err(e) => return Err(e),
        }
    }
    Ok(if !singular.is_empty() {
        Smoothness::Singular(singular)
    } else if !undecided.is_empty() {
        Smoothness::Indeterminate(undecided.join("; "))
    } else {
        Smoothness::Smooth
    })
}

/// Smoothness of the spectral curve over the complement of the poles,
/// including the fibre over infinity when infinity is not a pole.
pub fn smoothness_check_finite_part(a: &MatRF, poles: &[Point], bound: usize) -> Result<Smoothness> {
    let excluded: Vec<Rat> = poles
        .iter()
        .filter_map(|p| match p {
            Point::Finite(c) => Some(c.clone()),
            Point::Infinity => None,
        })
        .collect();
    let f = clear_bipoly(&charpoly(a));
    let mut out = singular_points(&f, &excluded, bound, "z")?;
    if !poles.contains(&Point::Infinity) {
        let g = clear_bipoly(&charpoly(&local_exact(a, &Point::Infinity)));
        let w = UPoly::x(&Rat::zero());
        if let Some(d) = fibre_singularities(&g, &w, bound, "1/z")? {
            out = match out {
                Smoothness::Singular(mut v) => {
                    v.push(d);
                    Smoothness::Singular(v)
                }
                _ => Smoothness::Singular(vec![d]),
            };
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Certified by a pole with a single totally ramified cluster.
    Irreducible(Point),
    /// Number of factors over Q(z).
    Reducible(usize),
    Unknown,
}

impl Irreducibility {
    pub fn label(&self) -> &'static str {
        match self {
            Irreducibility::Irreducible(_) => "irreducible",
            Irreducibility::Reducible(_) => "reducible",
            Irreducibility::Unknown => "unknown",
        }
    }
}

pub fn irreducibility_status(f: &BiPoly, locals: &[&LocalModule]) -> Irreducibility {
    let n = f.deg() as usize;
    for l in locals {
        if l.clusters.len() == 1 && l.clusters.clusters[0].r == n {
            return Irreducibility::Irreducible(l.pole.clone());
        }
    }
    match factor_bipoly(f) {
        BiFactorization::Factors(v) => Irreducibility::Reducible(v.len()),
        _ => Irreducibility::Unknown,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremStatus {
    #[serde(rename = "true")]
    True,
    #[serde(rename = "false")]
    False,
    #[serde(rename = "not-applicable")]
    NotApplicable,
    #[serde(rename = "conditional-true")]
    ConditionalTrue,
    #[serde(rename = "conditional-false")]
    ConditionalFalse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainTheorem {
    pub status: TheoremStatus,
    /// Failed or assumed hypotheses.
    pub reasons: Vec<String>,
}

pub fn cohomology_dims(rig: i64, irreducible_connection: bool) -> Option<(i64, i64, i64)> {
    irreducible_connection.then_some((1, 2 - rig, 1))
}

#[derive(Clone, Debug, Default)]
pub struct AnalysisOptions {
    pub assume_irreducible_curve: bool,
    pub assert_irreducible_connection: bool,
    pub truncation: Option<usize>,
    /// Also run the splitting reduction on multiplicity-free poles and
    /// compare its cells with the Puiseux cells.
    pub check_reduction: bool,
}

pub const DEGREE_BOUND: usize = 4;

/// Two-route and identity checks at one pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleChecks {
    /// mu (oracle) == -delta(End) - r_C + 2(n-1)(C, X_inf)_a + 1.
    pub milnor_ok: Option<bool>,
    /// 2 delta - 2(n-1)(C, X_inf)_a == -delta(End).
    pub delta_identity_ok: bool,
    /// Cell formula and Weierstrass oracle agree on mu, (C, zeta) and (F, z).
    pub oracle_agrees: Option<bool>,
    /// Sum of contacts over ordered pairs == ord disc.
    pub disc_identity_ok: bool,
    /// Irr(End) from cells == Irr(End) from root differences.
    pub irr_end_agrees: bool,
    /// Puiseux cells == splitting cells (None: not run or unavailable).
    pub reduction_agrees: Option<bool>,
}

impl PoleChecks {
    pub fn all_ok(&self) -> bool {
        [self.milnor_ok, self.oracle_agrees, self.reduction_agrees]
            .iter()
            .all(|c| c.unwrap_or(true))
            && self.delta_identity_ok
            && self.disc_identity_ok
            && self.irr_end_agrees
    }
}

#[derive(Clone, Debug)]
pub struct PoleAnalysis {
    pub local: LocalModule,
    pub germ: Option<GermData>,
    pub oracle: Option<OracleGerm>,
    pub checks: PoleChecks,
}

impl PoleAnalysis {
    pub fn milnor(&self) -> i64 {
        self.germ.as_ref().map_or(0, |g| g.milnor)
    }

    pub fn delta(&self) -> i64 {
        self.germ.as_ref().map_or(0, |g| g.delta)
    }

    pub fn r_c(&self) -> usize {
        self.germ.as_ref().map_or(0, |g| g.r_c())
    }

    pub fn inf_intersection(&self) -> i64 {
        self.germ.as_ref().map_or(0, |g| g.inf_intersection)
    }
}

pub fn analyze_pole(a: &MatRF, pole: &Point, opts: &AnalysisOptions) -> Result<PoleAnalysis> {
    let cfg = LocalConfig {
        truncation: opts.truncation,
        degree_bound: DEGREE_BOUND,
    };
    let local = build_local(a, pole, &cfg)?.certify()?;
    let n = local.rank as i64;
    let germ = germ_data(&local)?;
    let oracle = germ_milnor_oracle(&local.cleared_charpoly())?;
    let (delta, r_c, c) = germ
        .as_ref()
        .map_or((0, 0, 0), |g| (g.delta, g.r_c() as i64, g.inf_intersection));
    let delta_end = local.delta_end();
    let milnor_ok = oracle
        .as_ref()
        .map(|o| o.milnor == -delta_end - r_c + 2 * (n - 1) * c + 1);
    let oracle_agrees = match (&germ, &oracle) {
        (None, None) => None,
        (Some(g), Some(o)) => Some(
            o.milnor == g.milnor
                && o.inf_intersection == g.inf_intersection
                && o.branch_degree == g.branches.iter().map(|b| b.r).sum::<usize>(),
        ),
        _ => Some(false),
    };
    let disc = disc_valuation(&local.charpoly)?;
    let reduction_agrees = if opts.check_reduction || local.reduction.is_some() {
        local.reduction_agrees()?
    } else {
        None
    };
    let checks = PoleChecks {
        milnor_ok,
        delta_identity_ok: 2 * delta - 2 * (n - 1) * c == -delta_end,
        oracle_agrees,
        disc_identity_ok: local.clusters.pair_contact_sum() == Rat::from(disc),
        irr_end_agrees: irr_end_from_differences(&local.charpoly)? == local.irr_end(),
        reduction_agrees,
    };
    Ok(PoleAnalysis {
        local,
        germ,
        oracle,
        checks,
    })
}

#[derive(Clone, Debug)]
pub struct GlobalInvariants {
    pub class: CurveClass,
    pub arithmetic_genus: i64,
    pub delta_sum: i64,
    /// 2 - 2 g_a + 2 sum delta over the germs at infinity.
    pub euler_char: i64,
    pub rigidity: i64,
    pub smoothness: Smoothness,
    pub irreducibility: Irreducibility,
    pub main_theorem: MainTheorem,
    pub cohomology: Option<(i64, i64, i64)>,
}

#[derive(Clone, Debug)]
pub struct GlobalReport {
    pub rank: usize,
    pub genus: i64,
    pub poles: Vec<(Point, Result<PoleAnalysis>)>,
    pub global: Option<GlobalInvariants>,
    pub warnings: Vec<String>,
}

impl GlobalReport {
    /// 0: every applicable verdict holds; 1: some verdict fails; 2: analysis error.
    pub fn exit_code(&self) -> i32 {
        if self.poles.iter().any(|(_, r)| r.is_err()) || self.global.is_none() {
            return 2;
        }
        let local_ok = self
            .poles
            .iter()
            .all(|(_, r)| r.as_ref().is_ok_and(|p| p.checks.all_ok()));
        let main_ok = self.global.as_ref().is_none_or(|g| {
            !matches!(
                g.main_theorem.status,
                TheoremStatus::False | TheoremStatus::ConditionalFalse
            )
        });
        if local_ok && main_ok {
            0
        } else {
            1
        }
    }
}

fn main_theorem(
    rig: i64,
    chi: i64,
    irr: &Irreducibility,
    smooth: &Smoothness,
    resonant: bool,
    opts: &AnalysisOptions,
) -> MainTheorem {
    let mut blocking = vec![];
    let mut assumed = vec![];
    match irr {
        Irreducibility::Irreducible(_) => {}
        Irreducibility::Reducible(k) => blocking.push(format!("spectral curve is reducible ({k} components)")),
        Irreducibility::Unknown if opts.assume_irreducible_curve => {
            assumed.push("curve irreducibility assumed by flag".to_string())
        }
        Irreducibility::Unknown => blocking.push("curve irreducibility unknown".to_string()),
    }
    match smooth {
        Smoothness::Smooth => {}
        Smoothness::Singular(v) => blocking.push(format!("spectral curve is singular: {}", v.join("; "))),
        Smoothness::Indeterminate(m) => assumed.push(format!("smoothness undecided: {m}")),
    }
    if resonant {
        blocking.push("resonant exponents".to_string());
    }
    let holds = rig == chi;
    let status = if !blocking.is_empty() {
        TheoremStatus::NotApplicable
    } else if !assumed.is_empty() {
        if holds {
            TheoremStatus::ConditionalTrue
        } else {
            TheoremStatus::ConditionalFalse
        }
    } else if holds {
        TheoremStatus::True
    } else {
        TheoremStatus::False
    };
    blocking.extend(assumed);
    MainTheorem {
        status,
        reasons: blocking,
    }
}

/// Full analysis of A dz on P^1 with the declared poles.
pub fn analyze(a: &MatRF, declared: &[Point], opts: &AnalysisOptions) -> Result<GlobalReport> {
    let n = a.rows();
    if n == 0 || !a.is_square() {
        return Err(Error::InvalidProblem("matrix must be square and nonempty".into()));
    }
    if declared.is_empty() {
        return Err(Error::InvalidProblem("no poles declared".into()));
    }
    let mut warnings = pole_set_validate(a, declared)?;
    let f = charpoly(a);
    if n > 1 && discriminant(&f)?.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let mut poles: Vec<Point> = declared.to_vec();
    poles.sort();
    let results: Vec<Result<PoleAnalysis>> = std::thread::scope(|s| {
        let handles: Vec<_> = poles
            .iter()
            .map(|p| s.spawn(move || analyze_pole(a, p, opts)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("pole analysis panicked")).collect()
    });
    let poles: Vec<(Point, Result<PoleAnalysis>)> = poles.into_iter().zip(results).collect();
    for (p, r) in &poles {
        if let Ok(pa) = r {
            warnings.extend(pa.local.warnings.iter().map(|w| format!("at {p}: {w}")));
        }
    }
    let ok: Vec<&PoleAnalysis> = poles.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
    if ok.len() < poles.len() {
        return Ok(GlobalReport {
            rank: n,
            genus: 0,
            poles,
            global: None,
            warnings,
        });
    }
    let class = CurveClass {
        n,
        b: ok.iter().map(|p| p.inf_intersection()).sum(),
        genus: 0,
    };
    let ga = arithmetic_genus(&class);
    let ga = ga
        .to_i64()
        .filter(|_| ga.is_integer())
        .ok_or_else(|| Error::Inconsistency(format!("arithmetic genus {ga} is not an integer")))?;
    let delta_sum: i64 = ok.iter().map(|p| p.delta()).sum();
    let chi = euler_char_normalization(ga, ok.iter().map(|p| p.delta()));
    let rig = rigidity_index(n, 0, ok.iter().map(|p| p.local.delta_end()));
    let smoothness = smoothness_check_finite_part(a, declared, DEGREE_BOUND)?;
    let locals: Vec<&LocalModule> = ok.iter().map(|p| &p.local).collect();
    let irreducibility = irreducibility_status(&f, &locals);
    let resonant = ok.iter().any(|p| !p.local.warnings.is_empty());
    if let Smoothness::Singular(_) = smoothness {
        warnings.push(
            "finite singular points: chi counts delta at infinity only and is not the Euler characteristic of the normalization".into(),
        );
    }
    if resonant {
        warnings.push("rigidity index unverified (resonance)".into());
    }
    if opts.assume_irreducible_curve {
        if let Irreducibility::Reducible(_) = irreducibility {
            warnings.push("irreducibility flag contradicts a factorization of the curve".into());
        }
    }
    let mt = main_theorem(rig, chi, &irreducibility, &smoothness, resonant, opts);
    let cohomology = cohomology_dims(rig, opts.assert_irreducible_connection);
    if cohomology.is_some_and(|(_, h1, _)| h1 < 0) {
        warnings.push("h1 = 2 - rig is negative; the connection is likely reducible".into());
    }
    Ok(GlobalReport {
        rank: n,
        genus: 0,
        poles,
        global: Some(GlobalInvariants {
            class,
            arithmetic_genus: ga,
            delta_sum,
            euler_char: chi,
            rigidity: rig,
            smoothness,
            irreducibility,
            main_theorem: mt,
            cohomology,
        }),
        warnings,
    })
}
