//! Newton–Puiseux expansion into Galois clusters (branches) and root contacts.
//!
//! Roots are organized in a tree. A node stands for the roots whose expansion
//! starts with a fixed partial sum S; a child adds one term c z^g. The
//! monodromy fixing S multiplies c by q-th roots of unity, so only one
//! representative c per orbit is kept. Leaves carry exactly one root; the
//! cluster of a leaf is the monodromy orbit of that root, of size r = the
//! product of the q's along its path. Contacts between arbitrary conjugates
//! are read off the tree.

use std::sync::Arc;

use num_integer::Integer;

use super::newton::{lower_hull, polygon_from};
use super::series::{shift_poly, PSeries};
use super::tfactor::{adjoin_bounded, factor_over, split_completely};
use super::tower::{FieldTower, TElem};
use crate::error::{Error, Result};
use crate::exact::localize::laurent_coeffs;
use crate::exact::{discriminant, BiPoly, Field, Point, Rat, RatFn, UPoly};

#[derive(Clone, Debug)]
pub struct ExpansionConfig {
    /// Largest degree of a single adjoined extension.
    pub degree_bound: usize,
    /// Initial relative precision of the coefficient series (0 = automatic).
    pub precision: usize,
    /// Number of precision doublings before giving up.
    pub retries: usize,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig {
            degree_bound: 4,
            precision: 0,
            retries: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeNode {
    pub parent: Option<usize>,
    /// Order of the term added at this node (None: +infinity, i.e. the
    /// root is fixed beyond every sibling).
    pub gamma: Option<Rat>,
    /// Orbit size of the added term under the monodromy fixing the parent.
    pub q: i64,
    /// Ramification of the partial sum up to this node.
    pub ram: i64,
}

#[derive(Clone, Debug)]
pub struct PuiseuxCluster {
    pub r: usize,
    /// Valuation of the roots (None for the zero root).
    pub order: Option<Rat>,
    /// Representative root, known modulo z^prec (exact when prec is None).
    pub expansion: PSeries<TElem>,
    pub tower: Arc<FieldTower>,
    /// Tree nodes from the first level down to the leaf.
    pub path: Vec<usize>,
}

impl PuiseuxCluster {
    pub fn galois_size(&self) -> usize {
        self.r
    }
}

#[derive(Clone, Debug)]
pub struct ClusterSet {
    pub degree: usize,
    pub nodes: Vec<TreeNode>,
    pub clusters: Vec<PuiseuxCluster>,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// ord(rep_i - xi^k rep_j), where xi acts by z^{1/r_j} -> e^{2 pi i/r_j} z^{1/r_j}.
    /// None when the two roots coincide (i = j, k = 0 mod r_j).
    pub fn contact(&self, i: usize, j: usize, k: usize) -> Option<Rat> {
        let pi = &self.clusters[i].path;
        let pj = &self.clusters[j].path;
        let k = (k % self.clusters[j].r) as i64;
        let common = pi.iter().zip(pj).take_while(|(a, b)| a == b).count();
        if let Some(pos) = pj.iter().position(|&n| k % self.nodes[n].ram != 0) {
            if pos < common {
                return self.nodes[pj[pos]].gamma.clone();
            }
        }
        if i == j {
            return None;
        }
        let a = &self.nodes[pi[common]].gamma;
        let b = &self.nodes[pj[common]].gamma;
        match (a, b) {
            (Some(x), Some(y)) => Some(x.clone().min(y.clone())),
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => unreachable!("two roots fixed at the same node"),
        }
    }

    /// Contacts of rep_i with every conjugate of rep_j (excluding rep_i itself).
    pub fn contacts(&self, i: usize, j: usize) -> Vec<Rat> {
        (0..self.clusters[j].r)
            .filter_map(|k| self.contact(i, j, k))
            .collect()
    }

    /// Sum over ordered pairs of distinct roots of ord(alpha - beta).
    pub fn pair_contact_sum(&self) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.len() {
            let ri = Rat::from(self.clusters[i].r as i64);
            for j in 0..self.len() {
                for c in self.contacts(i, j) {
                    s = s + &ri * &c;
                }
            }
        }
        s
    }

    /// Sum over unordered pairs of distinct roots of ord(alpha - beta).
    pub fn unordered_contact_sum(&self) -> Rat {
        self.pair_contact_sum() / Rat::from(2)
    }
}

/// Valuation at z = 0 of disc_y(F / lc(F)).
pub fn disc_valuation(f: &BiPoly) -> Result<i64> {
    let d = discriminant(&f.monic())?;
    d.valuation(&Point::Finite(Rat::zero()))
        .ok_or(Error::NotSquarefree)
}

enum Pt {
    Det(Rat),
    Bound(Rat),
    Zero,
}

fn classify(s: &PSeries<TElem>) -> Pt {
    if let Some(v) = s.val() {
        Pt::Det(v)
    } else if let Some(p) = s.prec() {
        Pt::Bound(p)
    } else {
        Pt::Zero
    }
}

fn insufficient(what: &str) -> Error {
    Error::InsufficientTruncation(what.to_string())
}

/// Laurent series at 0 of a rational function with `prec` known terms.
fn to_series(f: &RatFn, q: &Arc<FieldTower>, prec: usize) -> PSeries<TElem> {
    let zero = q.zero();
    let Some(v) = f.valuation(&Point::Finite(Rat::zero())) else {
        return PSeries::zero(&zero);
    };
    let den = f.den();
    let low = den.low_degree().unwrap();
    let monomial_den = den.deg() as usize == low;
    if monomial_den {
        let top = f.num().deg() as i64 - low as i64;
        let c = laurent_coeffs(f, v, (top - v + 1) as usize);
        let c = c.iter().map(|x| q.from_rat(x)).collect();
        PSeries::from_laurent(&zero, v, c, None)
    } else {
        let c = laurent_coeffs(f, v, prec);
        let c = c.iter().map(|x| q.from_rat(x)).collect();
        PSeries::from_laurent(&zero, v, c, Some(v + prec as i64))
    }
}

fn embed_all(h: &[PSeries<TElem>], k: &Arc<FieldTower>) -> Vec<PSeries<TElem>> {
    let z = k.zero();
    h.iter().map(|s| s.map(&z, |c| c.embed(k))).collect()
}

struct Engine<'a> {
    cfg: &'a ExpansionConfig,
    target: Rat,
    nodes: Vec<TreeNode>,
    clusters: Vec<PuiseuxCluster>,
}

impl Engine<'_> {
    fn new_node(&mut self, parent: usize, gamma: Option<Rat>, q: i64) -> usize {
        let ram = self.nodes[parent].ram * q;
        self.nodes.push(TreeNode {
            parent: Some(parent),
            gamma,
            q,
            ram,
        });
        self.nodes.len() - 1
    }

    fn path(&self, mut n: usize) -> Vec<usize> {
        let mut p = vec![];
        while let Some(par) = self.nodes[n].parent {
            p.push(n);
            n = par;
        }
        p.reverse();
        p
    }

    fn push_cluster(&mut self, leaf: usize, tower: Arc<FieldTower>, expansion: PSeries<TElem>) {
        let path = self.path(leaf);
        let order = self.nodes[path[0]].gamma.clone();
        self.clusters.push(PuiseuxCluster {
            r: self.nodes[leaf].ram as usize,
            order,
            expansion,
            tower,
            path,
        });
    }

    fn adjoin(&self, k: &Arc<FieldTower>, g: &UPoly<TElem>) -> Result<Arc<FieldTower>> {
        adjoin_bounded(k, g, self.cfg.degree_bound)
    }

    /// Expansion below `node`, whose partial sum is `s` and whose roots are
    /// the `mu` roots of small order of H(Y) = F(s + Y).
    fn expand(
        &mut self,
        node: usize,
        k: Arc<FieldTower>,
        s: PSeries<TElem>,
        h: Vec<PSeries<TElem>>,
        mu: usize,
    ) -> Result<()> {
        if mu == 1 && node != 0 {
            return self.leaf(node, k, s, h);
        }
        let mut base = 0;
        if matches!(classify(&h[0]), Pt::Zero) {
            // s is an exact root
            let n = self.new_node(node, None, 1);
            self.push_cluster(n, k.clone(), s.clone());
            base = 1;
            if mu == 1 {
                return Ok(());
            }
        }
        let pts: Vec<Pt> = h[base..=mu].iter().map(classify).collect();
        let m = mu - base;
        let Pt::Det(_) = pts[m] else {
            return Err(insufficient("leading coefficient of a Newton polygon segment"));
        };
        let j0 = pts.iter().position(|p| matches!(p, Pt::Det(_))).unwrap();
        if j0 >= 2 {
            return Err(insufficient("several roots beyond the expansion precision"));
        }
        if j0 == 1 && matches!(pts[0], Pt::Zero) {
            return Err(Error::NotSquarefree);
        }
        let support: Vec<(usize, Rat)> = pts
            .iter()
            .enumerate()
            .filter_map(|(i, p)| match p {
                Pt::Det(v) => Some((i, v.clone())),
                _ => None,
            })
            .collect();
        let hull = lower_hull(&support);
        let hull_at = |i: usize| -> Rat {
            let w = hull
                .windows(2)
                .find(|w| support[w[0]].0 <= i && i <= support[w[1]].0)
                .expect("index inside hull span");
            let (ia, va) = &support[w[0]];
            let (ib, vb) = &support[w[1]];
            va + &((vb - va) * Rat::new((i - ia) as i64, (ib - ia) as i64))
        };
        for (i, p) in pts.iter().enumerate().skip(j0 + 1) {
            if let Pt::Bound(b) = p {
                if *b <= hull_at(i) {
                    return Err(insufficient("coefficient near the Newton polygon"));
                }
            }
        }
        let g = &h[base..=mu];
        let poly = polygon_from(support.clone(), &k.zero(), |i, e| {
            g[i].coeff(e).unwrap_or_else(|| k.zero())
        });
        if j0 == 1 {
            // one simple root of order beyond the precision
            let Pt::Bound(b0) = &pts[0] else { unreachable!() };
            let v1 = &support[0].1;
            let g0 = b0 - v1;
            if let Some(e) = poly.edges.first() {
                if g0 <= e.root_order() {
                    return Err(insufficient("root order beyond the expansion precision"));
                }
            }
            let prec = s.prec().map_or(g0.clone(), |p| p.min(g0.clone()));
            if prec <= self.target {
                return Err(insufficient("expansion depth"));
            }
            let n = self.new_node(node, None, 1);
            self.push_cluster(n, k.clone(), s.truncate(&prec));
        }
        let ram = self.nodes[node].ram;
        for edge in &poly.edges {
            let gamma = edge.root_order();
            let b: i64 = gamma.denom().try_into().unwrap();
            let q = b / b.gcd(&ram);
            let phi = edge.residual.coeffs();
            let mut psi = vec![];
            for (i, c) in phi.iter().enumerate() {
                if i as i64 % q == 0 {
                    psi.push(c.clone());
                } else if !c.is_zero() {
                    return Err(Error::Inconsistency(
                        "residual polynomial is not a polynomial in u^q".into(),
                    ));
                }
            }
            let psi = UPoly::new(psi, &k.zero());
            let (ks, roots) = split_completely(&psi, self.cfg.degree_bound)?;
            for (d, mult) in roots {
                // a representative c with c^q = d
                let mut xq = vec![ks.zero(); q as usize + 1];
                xq[0] = d.negate();
                xq[q as usize] = ks.one();
                let xq = UPoly::new(xq, &ks.zero());
                let first = factor_over(&xq).remove(0).0;
                let (kc, c) = if first.deg() == 1 {
                    (ks.clone(), first.coeff(0).negate())
                } else {
                    let kc = self.adjoin(&ks, &first)?;
                    let c = kc.generator();
                    (kc, c)
                };
                let term = PSeries::monomial(c, &gamma);
                let sc = s.map(&kc.zero(), |x| x.embed(&kc)).plus(&term);
                let hc = shift_poly(&embed_all(&h, &kc), &term);
                let child = self.new_node(node, Some(gamma.clone()), q);
                self.expand(child, kc, sc, hc, mult)?;
            }
        }
        Ok(())
    }

    /// Continues a simple root until it is known beyond the target depth.
    fn leaf(
        &mut self,
        node: usize,
        k: Arc<FieldTower>,
        mut s: PSeries<TElem>,
        mut h: Vec<PSeries<TElem>>,
    ) -> Result<()> {
        let ram = self.nodes[node].ram;
        loop {
            let Pt::Det(v1) = classify(&h[1]) else {
                return Err(insufficient("linear coefficient at a simple root"));
            };
            let prec = match classify(&h[0]) {
                Pt::Zero => None,
                Pt::Bound(b0) => Some(b0 - v1),
                Pt::Det(v0) => {
                    let gamma = &v0 - &v1;
                    if gamma <= self.target {
                        let den: i64 = gamma.denom().try_into().unwrap();
                        if ram % den != 0 {
                            return Err(Error::Inconsistency(
                                "ramification grew at a simple root".into(),
                            ));
                        }
                        let c = h[0].lead().unwrap().over(h[1].lead().unwrap()).negate();
                        let term = PSeries::monomial(c, &gamma);
                        s = s.plus(&term);
                        h = shift_poly(&h, &term);
                        continue;
                    }
                    Some(gamma)
                }
            };
            if let Some(p) = &prec {
                if *p <= self.target {
                    return Err(insufficient("expansion depth"));
                }
            }
            let s = match &prec {
                Some(p) => s.truncate(p),
                None => s,
            };
            self.push_cluster(node, k, s);
            return Ok(());
        }
    }
}

/// Galois clusters of the roots of F in y over the Puiseux field at z = 0,
/// each expanded beyond `target_depth`.
pub fn puiseux_clusters(f: &BiPoly, target_depth: &Rat) -> Result<ClusterSet> {
    puiseux_clusters_with(f, target_depth, &ExpansionConfig::default())
}

pub fn puiseux_clusters_with(
    f: &BiPoly,
    target_depth: &Rat,
    cfg: &ExpansionConfig,
) -> Result<ClusterSet> {
    let n = f.degree().ok_or(Error::DegreeZero)?;
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    let dv = disc_valuation(f)?;
    let f = f.monic();
    let vmin = f
        .coeffs()
        .iter()
        .filter_map(|c| c.valuation(&Point::Finite(Rat::zero())))
        .min()
        .unwrap_or(0);
    let target_gap = (i64::try_from(target_depth.ceil()).unwrap_or(0) - vmin).max(0) as usize;
    let mut prec = if cfg.precision > 0 {
        cfg.precision
    } else {
        (2 * dv.unsigned_abs() as usize + 2 * n * target_gap + 8).max(16)
    };
    let q = FieldTower::rationals();
    let mut attempt = 0;
    loop {
        let h: Vec<PSeries<TElem>> = f.coeffs().iter().map(|c| to_series(c, &q, prec)).collect();
        let mut eng = Engine {
            cfg,
            target: target_depth.clone(),
            nodes: vec![TreeNode {
                parent: None,
                gamma: None,
                q: 1,
                ram: 1,
            }],
            clusters: vec![],
        };
        match eng.expand(0, q.clone(), PSeries::zero(&q.zero()), h, n) {
            Ok(()) => {
                let total: usize = eng.clusters.iter().map(|c| c.r).sum();
                if total != n {
                    return Err(Error::Inconsistency(format!(
                        "clusters account for {total} of {n} roots"
                    )));
                }
                return Ok(ClusterSet {
                    degree: n,
                    nodes: eng.nodes,
                    clusters: eng.clusters,
                });
            }
            Err(Error::InsufficientTruncation(msg)) => {
                attempt += 1;
                if attempt > cfg.retries {
                    return Err(Error::InsufficientTruncation(format!(
                        "{msg} (relative precision {prec})"
                    )));
                }
                prec *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Number of clusters (branches over the punctured disc).
pub fn branch_count(f: &BiPoly) -> Result<usize> {
    Ok(puiseux_clusters(f, &Rat::zero())?.len())
}
