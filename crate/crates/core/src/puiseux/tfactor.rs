//! Factorization of univariate polynomials over a field tower by Trager's
//! norm method with respect to a primitive element.

use std::cmp::Ordering;
use std::sync::Arc;

use super::tower::{FieldTower, TElem};
use crate::exact::factor::factor_rat;
use crate::exact::{Field, Rat, UPoly};

/// Canonical order on polynomials over a tower: degree, then coefficients
/// from the top compared lexicographically by coordinates.
pub fn canonical_cmp(a: &UPoly<TElem>, b: &UPoly<TElem>) -> Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for (x, y) in a.coeffs().iter().rev().zip(b.coeffs().iter().rev()) {
            let o = x.lex_cmp(y);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// Interpolating polynomial through (i, values[i]), i = 0..len.
pub fn interpolate(values: &[Rat]) -> UPoly<Rat> {
    let n = values.len();
    let mut dd: Vec<Rat> = values.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / Rat::from(k as i64);
        }
    }
    // Newton form with nodes 0, 1, 2, ...
    let mut p = UPoly::constant(dd[n - 1].clone());
    for k in (0..n - 1).rev() {
        let node = UPoly::from_rats(vec![Rat::from(-(k as i64)), Rat::one()]);
        p = p.times(&node).plus(&UPoly::constant(dd[k].clone()));
    }
    p
}

/// Norm over Q of a polynomial with coefficients in the tower.
pub fn norm_poly(g: &UPoly<TElem>, tower: &Arc<FieldTower>) -> UPoly<Rat> {
    let deg = tower.dim() * g.degree().unwrap_or(0);
    let vals: Vec<Rat> = (0..=deg)
        .map(|j| g.eval(&tower.from_rat(&Rat::from(j as i64))).norm())
        .collect();
    interpolate(&vals)
}

fn to_tower(p: &UPoly<Rat>, tower: &Arc<FieldTower>) -> UPoly<TElem> {
    p.map(&tower.zero(), |c| tower.from_rat(c))
}

/// Monic irreducible factors over the polynomial's tower with multiplicities,
/// in canonical order.
pub fn factor_over(f: &UPoly<TElem>) -> Vec<(UPoly<TElem>, usize)> {
    let tower = f.ctx().tower().clone();
    let mut out = vec![];
    if tower.is_rationals() {
        let fr = f.map(&Rat::zero(), |c| c.as_rat().unwrap());
        for (g, m) in factor_rat(&fr) {
            out.push((to_tower(&g, &tower), m));
        }
    } else {
        for (part, m) in f.squarefree_decomposition() {
            for g in trager(&part, &tower) {
                out.push((g, m));
            }
        }
    }
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
    out
}

/// Roots in the tower (each once).
pub fn roots_over(f: &UPoly<TElem>) -> Vec<TElem> {
    factor_over(f)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| g.coeff(0).negate())
        .collect()
}

/// Adjoins roots of irreducible factors (degree at most `bound`) until `p`
/// splits into linear factors. Returns the splitting tower and the roots with
/// multiplicities in canonical order.
pub fn split_completely(
    p: &UPoly<TElem>,
    bound: usize,
) -> crate::Result<(Arc<FieldTower>, Vec<(TElem, usize)>)> {
    let mut k = p.ctx().tower().clone();
    let mut p = p.clone();
    loop {
        let fs = factor_over(&p);
        match fs.iter().find(|(g, _)| g.deg() > 1) {
            None => {
                let roots = fs.iter().map(|(g, m)| (g.coeff(0).negate(), *m)).collect();
                return Ok((k, roots));
            }
            Some((g, _)) => {
                k = adjoin_bounded(&k, g, bound)?;
                p = p.map(&k.zero(), |c| c.embed(&k));
            }
        }
    }
}

/// Adjoins a root of the irreducible `g`, named after the tower height.
pub fn adjoin_bounded(
    k: &Arc<FieldTower>,
    g: &UPoly<TElem>,
    bound: usize,
) -> crate::Result<Arc<FieldTower>> {
    let d = g.deg() as usize;
    if d > bound {
        return Err(crate::Error::UnsupportedExtension(format!(
            "irreducible factor {} of degree {d} over {}",
            g.display_in("x"),
            k.describe()
        )));
    }
    let name = format!("a{}", k.height() + 1);
    Ok(k.adjoin_unchecked(g, &name))
}

fn trager(f: &UPoly<TElem>, tower: &Arc<FieldTower>) -> Vec<UPoly<TElem>> {
    let f = f.monic();
    if f.deg() <= 1 {
        return vec![f];
    }
    let (theta, _) = tower.primitive_element();
    let mut s = 0i64;
    let (g, n, shift) = loop {
        let shift = theta.times(&tower.from_rat(&Rat::from(s)));
        let g = f.taylor_shift(&shift.negate());
        let n = norm_poly(&g, tower);
        if n.is_squarefree() {
            break (g, n, shift);
        }
        s = if s > 0 { -s } else { 1 - s };
    };
    let parts = factor_rat(&n);
    if parts.len() == 1 {
        return vec![f];
    }
    let mut out = vec![];
    for (ni, _) in parts {
        let h = g.gcd(&to_tower(&ni, tower));
        if h.deg() >= 1 {
            out.push(h.taylor_shift(&shift).monic());
        }
    }
    out
}
