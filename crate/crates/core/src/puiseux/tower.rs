//! Towers of simple algebraic extensions of Q.
//!
//! An element of Q(a1, ..., aL) is stored as its coordinate vector in the
//! monomial basis a1^e1 ... aL^eL (0 <= ek < dk), with the exponent of a1
//! varying fastest. The coordinates of an element of a sub-tower are a prefix
//! of its coordinates in any extension, so embedding is zero padding.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::exact::{Field, Mat, Rat, UPoly};

pub struct FieldTower {
    parent: Option<Arc<FieldTower>>,
    /// Name of the top generator.
    name: String,
    /// Coefficients m_0..m_{d-1} of the monic minimal polynomial of the top
    /// generator over the parent (leading 1 omitted), as parent coordinates.
    min_coeffs: Vec<Vec<Rat>>,
    degree: usize,
    dim: usize,
    primitive: OnceLock<(Vec<Rat>, UPoly<Rat>)>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower({})", self.describe())
    }
}

fn rational_tower() -> &'static Arc<FieldTower> {
    static Q: OnceLock<Arc<FieldTower>> = OnceLock::new();
    Q.get_or_init(|| {
        Arc::new(FieldTower {
            parent: None,
            name: String::new(),
            min_coeffs: vec![],
            degree: 1,
            dim: 1,
            primitive: OnceLock::new(),
        })
    })
}

impl FieldTower {
    /// The base field Q.
    pub fn rationals() -> Arc<FieldTower> {
        rational_tower().clone()
    }

    pub fn is_rationals(&self) -> bool {
        self.parent.is_none()
    }

    /// Dimension over Q.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Degree of the top extension over its parent.
    pub fn top_degree(&self) -> usize {
        self.degree
    }

    pub fn parent(&self) -> Option<&Arc<FieldTower>> {
        self.parent.as_ref()
    }

    /// Number of generators.
    pub fn height(&self) -> usize {
        match &self.parent {
            None => 0,
            Some(p) => p.height() + 1,
        }
    }

    /// Generator names from bottom to top.
    pub fn names(&self) -> Vec<String> {
        match &self.parent {
            None => vec![],
            Some(p) => {
                let mut v = p.names();
                v.push(self.name.clone());
                v
            }
        }
    }

    /// Per-level degrees from bottom to top.
    pub fn degrees(&self) -> Vec<usize> {
        match &self.parent {
            None => vec![],
            Some(p) => {
                let mut v = p.degrees();
                v.push(self.degree);
                v
            }
        }
    }

    /// Structural equality (same generators with the same minimal polynomials).
    pub fn same_as(self: &Arc<Self>, o: &Arc<FieldTower>) -> bool {
        if Arc::ptr_eq(self, o) {
            return true;
        }
        match (&self.parent, &o.parent) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                self.name == o.name && self.min_coeffs == o.min_coeffs && a.same_as(b)
            }
            _ => false,
        }
    }

    /// Whether `self` is `o` or one of its sub-towers.
    pub fn is_subtower_of(self: &Arc<Self>, o: &Arc<FieldTower>) -> bool {
        if self.same_as(o) {
            return true;
        }
        match &o.parent {
            None => false,
            Some(p) => self.is_subtower_of(p),
        }
    }

    /// Adjoin a root of `minpoly` (monic, irreducible over this tower).
    /// Irreducibility is verified.
    pub fn adjoin(
        self: &Arc<Self>,
        minpoly: &UPoly<TElem>,
        name: &str,
    ) -> crate::Result<Arc<FieldTower>> {
        let fs = super::tfactor::factor_over(minpoly);
        if fs.len() != 1 || fs[0].1 != 1 || fs[0].0.deg() != minpoly.deg() {
            return Err(crate::Error::Inconsistency(format!(
                "{} is not irreducible over {}",
                minpoly.display_in("x"),
                self.describe()
            )));
        }
        Ok(self.adjoin_unchecked(minpoly, name))
    }

    pub(crate) fn adjoin_unchecked(self: &Arc<Self>, minpoly: &UPoly<TElem>, name: &str) -> Arc<FieldTower> {
        let d = minpoly.degree().expect("nonzero minimal polynomial");
        assert!(d >= 1);
        let m = minpoly.monic();
        let min_coeffs = (0..d).map(|i| m.coeff(i).embed(self).c).collect();
        Arc::new(FieldTower {
            parent: Some(self.clone()),
            name: name.to_string(),
            min_coeffs,
            degree: d,
            dim: d * self.dim,
            primitive: OnceLock::new(),
        })
    }

    pub fn zero(self: &Arc<Self>) -> TElem {
        TElem {
            tower: self.clone(),
            c: vec![Rat::zero(); self.dim],
        }
    }

    pub fn one(self: &Arc<Self>) -> TElem {
        self.from_rat(&Rat::one())
    }

    pub fn from_rat(self: &Arc<Self>, r: &Rat) -> TElem {
        let mut c = vec![Rat::zero(); self.dim];
        c[0] = r.clone();
        TElem {
            tower: self.clone(),
            c,
        }
    }

    /// The top generator.
    pub fn generator(self: &Arc<Self>) -> TElem {
        assert!(self.parent.is_some(), "Q has no generator");
        let mut c = vec![Rat::zero(); self.dim];
        c[self.dim / self.degree] = Rat::one();
        TElem {
            tower: self.clone(),
            c,
        }
    }

    /// All generators from bottom to top, as elements of this tower.
    pub fn generators(self: &Arc<Self>) -> Vec<TElem> {
        let mut out = vec![];
        let mut t = self.clone();
        while t.parent.is_some() {
            out.push(t.generator().embed(self));
            t = t.parent.clone().unwrap();
        }
        out.reverse();
        out
    }

    /// Human-readable description, e.g. "Q(a1, a2) with a1^2 - 2 = 0, ...".
    pub fn describe(&self) -> String {
        if self.parent.is_none() {
            return "Q".into();
        }
        let mut rel = vec![];
        self.relations(&mut rel);
        format!("Q({}) with {}", self.names().join(", "), rel.join(", "))
    }

    fn relations(&self, out: &mut Vec<String>) {
        if let Some(p) = &self.parent {
            p.relations(out);
            let mut coeffs: Vec<TElem> = self
                .min_coeffs
                .iter()
                .map(|c| TElem {
                    tower: p.clone(),
                    c: c.clone(),
                })
                .collect();
            coeffs.push(p.one());
            let poly = UPoly::from_coeffs(coeffs);
            out.push(format!("{} = 0", poly.display_in(&self.name)));
        }
    }

    /// Minimal polynomial of the top generator over the parent.
    pub fn minpoly(&self) -> Option<UPoly<TElem>> {
        let p = self.parent.as_ref()?;
        let mut coeffs: Vec<TElem> = self
            .min_coeffs
            .iter()
            .map(|c| TElem {
                tower: p.clone(),
                c: c.clone(),
            })
            .collect();
        coeffs.push(p.one());
        Some(UPoly::from_coeffs(coeffs))
    }

    fn mul_coords(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let Some(parent) = &self.parent else {
            return vec![&a[0] * &b[0]];
        };
        let d = self.degree;
        let pd = parent.dim;
        let zero_chunk = vec![Rat::zero(); pd];
        let mut prod: Vec<Vec<Rat>> = vec![zero_chunk.clone(); 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * pd..(i + 1) * pd];
            if ai.iter().all(|x| x.is_zero()) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * pd..(j + 1) * pd];
                if bj.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let p = parent.mul_coords(ai, bj);
                for (t, v) in prod[i + j].iter_mut().zip(p) {
                    *t = &*t + &v;
                }
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::replace(&mut prod[k], zero_chunk.clone());
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            for j in 0..d {
                let mj = &self.min_coeffs[j];
                if mj.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let p = parent.mul_coords(&c, mj);
                for (t, v) in prod[k - d + j].iter_mut().zip(p) {
                    *t = &*t - &v;
                }
            }
        }
        prod.truncate(d);
        prod.into_iter().flatten().collect()
    }

    /// Matrix of multiplication by `a` on the Q-basis (columns are images).
    pub fn mult_matrix(&self, a: &[Rat]) -> Mat<Rat> {
        let n = self.dim;
        let cols: Vec<Vec<Rat>> = (0..n)
            .map(|u| {
                let mut e = vec![Rat::zero(); n];
                e[u] = Rat::one();
                self.mul_coords(a, &e)
            })
            .collect();
        Mat::from_fn(n, n, |i, j| cols[j][i].clone())
    }

    /// A primitive element of the tower over Q and its minimal polynomial.
    pub fn primitive_element(self: &Arc<Self>) -> (TElem, UPoly<Rat>) {
        let (c, m) = self
            .primitive
            .get_or_init(|| {
                if self.parent.is_none() {
                    return (vec![Rat::zero()], UPoly::from_ints(&[0, 1]));
                }
                let gens = self.generators();
                for k in 1i64.. {
                    let mut theta = self.zero();
                    let mut w = Rat::one();
                    for g in &gens {
                        theta = theta.plus(&g.times(&self.from_rat(&w)));
                        w = w * Rat::from(k);
                    }
                    let cp = self.mult_matrix(&theta.c).charpoly();
                    if cp.is_squarefree() {
                        return (theta.c, cp);
                    }
                }
                unreachable!()
            })
            .clone();
        (
            TElem {
                tower: self.clone(),
                c,
            },
            m,
        )
    }
}

/// An element of a field tower.
#[derive(Clone)]
pub struct TElem {
    tower: Arc<FieldTower>,
    c: Vec<Rat>,
}

impl TElem {
    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn coords(&self) -> &[Rat] {
        &self.c
    }

    pub fn from_coords(tower: &Arc<FieldTower>, c: Vec<Rat>) -> TElem {
        assert_eq!(c.len(), tower.dim);
        TElem {
            tower: tower.clone(),
            c,
        }
    }

    /// The same element viewed in an extension of its tower.
    pub fn embed(&self, target: &Arc<FieldTower>) -> TElem {
        debug_assert!(self.tower.is_subtower_of(target), "embedding into a non-extension");
        let mut c = self.c.clone();
        c.resize(target.dim, Rat::zero());
        TElem {
            tower: target.clone(),
            c,
        }
    }

    /// Norm down to Q.
    pub fn norm(&self) -> Rat {
        if self.tower.dim == 1 {
            return self.c[0].clone();
        }
        self.tower.mult_matrix(&self.c).det()
    }

    fn check(&self, o: &TElem) {
        debug_assert!(
            self.c.len() == o.c.len(),
            "tower mismatch: {} vs {}",
            self.tower.describe(),
            o.tower.describe()
        );
    }

    /// Lexicographic comparison of coordinates (for canonical ordering).
    pub fn lex_cmp(&self, o: &TElem) -> std::cmp::Ordering {
        self.c.iter().cmp(o.c.iter())
    }
}

impl PartialEq for TElem {
    fn eq(&self, o: &TElem) -> bool {
        self.c == o.c && (self.c.len() == 1 || self.tower.same_as(&o.tower))
    }
}

impl fmt::Debug for TElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.tower.names();
        let degs = self.tower.degrees();
        let mut terms: Vec<(bool, String)> = vec![];
        for (u, coef) in self.c.iter().enumerate().rev() {
            if coef.is_zero() {
                continue;
            }
            let mut rest = u;
            let mut mono = vec![];
            for (name, &d) in names.iter().zip(&degs) {
                let e = rest % d;
                rest /= d;
                match e {
                    0 => {}
                    1 => mono.push(name.clone()),
                    _ => mono.push(format!("{name}^{e}")),
                }
            }
            let neg = coef.is_negative();
            let a = coef.abs();
            let s = if mono.is_empty() {
                a.to_string()
            } else if a.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", a, mono.join("*"))
            };
            terms.push((neg, s));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (neg, s)) in terms.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
            } else {
                out.push_str(if *neg { " - " } else { " + " });
            }
            out.push_str(s);
        }
        f.write_str(&out)
    }
}

impl Field for TElem {
    fn zero_like(&self) -> TElem {
        self.tower.zero()
    }
    fn one_like(&self) -> TElem {
        self.tower.one()
    }
    fn from_rat_like(&self, r: &Rat) -> TElem {
        self.tower.from_rat(r)
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn plus(&self, o: &TElem) -> TElem {
        self.check(o);
        TElem {
            tower: self.tower.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
    fn minus(&self, o: &TElem) -> TElem {
        self.check(o);
        TElem {
            tower: self.tower.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }
    fn times(&self, o: &TElem) -> TElem {
        self.check(o);
        let tower = if self.tower.dim >= o.tower.dim {
            &self.tower
        } else {
            &o.tower
        };
        TElem {
            tower: tower.clone(),
            c: tower.mul_coords(&self.c, &o.c),
        }
    }
    fn negate(&self) -> TElem {
        TElem {
            tower: self.tower.clone(),
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
    fn recip(&self) -> TElem {
        assert!(!self.is_zero(), "inverse of zero field element");
        if self.tower.dim == 1 {
            return self.tower.from_rat(&self.c[0].recip());
        }
        let m = self.tower.mult_matrix(&self.c);
        let mut e = vec![Rat::zero(); self.tower.dim];
        e[0] = Rat::one();
        let x = m.solve(&e).expect("nonzero element of a field is invertible");
        TElem {
            tower: self.tower.clone(),
            c: x,
        }
    }
    fn as_rat(&self) -> Option<Rat> {
        self.c[1..]
            .iter()
            .all(|x| x.is_zero())
            .then(|| self.c[0].clone())
    }
}
