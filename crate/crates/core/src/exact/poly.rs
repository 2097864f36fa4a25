use std::fmt;

use super::field::Field;
use super::rat::Rat;

/// Dense univariate polynomial, coefficients stored from low to high degree.
/// Trailing zeros are never stored, so the zero polynomial has no coefficients.
/// `ctx` is a zero element carrying the coefficient field's context.
#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<F: Field> {
    coeffs: Vec<F>,
    ctx: F,
}

impl<F: Field> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>, ctx: &F) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly {
            coeffs,
            ctx: ctx.zero_like(),
        }
    }

    /// Builds from a non-empty coefficient list.
    pub fn from_coeffs(coeffs: Vec<F>) -> Self {
        let ctx = coeffs
            .first()
            .expect("from_coeffs needs at least one coefficient")
            .zero_like();
        UPoly::new(coeffs, &ctx)
    }

    pub fn zero(ctx: &F) -> Self {
        UPoly::new(vec![], ctx)
    }

    pub fn one(ctx: &F) -> Self {
        UPoly::new(vec![ctx.one_like()], ctx)
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.zero_like();
        UPoly::new(vec![c], &ctx)
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let ctx = c.zero_like();
        let mut v = vec![ctx.clone(); k];
        v.push(c);
        UPoly::new(v, &ctx)
    }

    pub fn x(ctx: &F) -> Self {
        UPoly::monomial(ctx.one_like(), 1)
    }

    /// x - a
    pub fn linear_root(a: &F) -> Self {
        UPoly::new(vec![a.negate(), a.one_like()], a)
    }

    pub fn ctx(&self) -> &F {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.ctx.clone())
    }

    pub fn lc(&self) -> F {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.ctx.clone())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Lowest power of x with nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn plus(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect();
        UPoly::new(v, &self.ctx)
    }

    pub fn minus(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect();
        UPoly::new(v, &self.ctx)
    }

    pub fn negate(&self) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.negate()).collect(), &self.ctx)
    }

    pub fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(&self.ctx);
        }
        let mut v = vec![self.ctx.clone(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].plus(&a.times(b));
            }
        }
        UPoly::new(v, &self.ctx)
    }

    pub fn scale(&self, c: &F) -> Self {
        UPoly::new(self.coeffs.iter().map(|a| a.times(c)).collect(), &self.ctx)
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.ctx.clone(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly::new(v, &self.ctx)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UPoly::one(&self.ctx);
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return (UPoly::zero(&self.ctx), self.clone());
        }
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![self.ctx.clone(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].times(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].minus(&c.times(dj));
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q, &self.ctx), UPoly::new(r, &self.ctx))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*o = g, g monic gcd.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let zero = UPoly::zero(&self.ctx);
        let one = UPoly::one(&self.ctx);
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.minus(&q.times(&s1));
            let t2 = t0.minus(&q.times(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.times(&c.from_int_like(i as i64)))
            .collect();
        UPoly::new(v, &self.ctx)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = self.ctx.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    /// self(q(x))
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = UPoly::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(q).plus(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// self(x + a)
    pub fn taylor_shift(&self, a: &F) -> Self {
        let mut v = self.coeffs.clone();
        let n = v.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = v[j + 1].times(a);
                v[j] = v[j].plus(&t);
            }
        }
        UPoly::new(v, &self.ctx)
    }

    /// x^deg * self(1/x)
    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        UPoly::new(v, &self.ctx)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() <= 0
    }

    /// Yun's algorithm: monic squarefree factors paired with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = vec![];
        if self.deg() <= 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut d = c.minus(&b.derivative());
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.deg() > 0 {
                out.push((g.clone(), i));
            }
            b = b.div_rem(&g).0;
            if b.deg() <= 0 {
                break;
            }
            c = d.div_rem(&g).0;
            d = c.minus(&b.derivative());
            i += 1;
        }
        let _ = &mut a;
        out
    }

    pub fn map<G: Field>(&self, ctx: &G, f: impl Fn(&F) -> G) -> UPoly<G> {
        UPoly::new(self.coeffs.iter().map(f).collect(), ctx)
    }

    /// Pretty form in the given variable name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_string();
            let compound = s[1..].contains(['+', '-']) || s.contains(' ');
            let neg = !compound && s.starts_with('-');
            if neg {
                s.remove(0);
            }
            if compound {
                s = format!("({s})");
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if i == 0 {
                s
            } else if s == "1" {
                mono
            } else {
                format!("{s}*{mono}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl<F: Field> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl UPoly<Rat> {
    /// Integer-indexed convenience constructor for rational polynomials.
    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&v| Rat::from(v)).collect(), &Rat::zero())
    }

    pub fn from_rats(c: Vec<Rat>) -> Self {
        UPoly::new(c, &Rat::zero())
    }

    /// Canonical comparison key: degree first, then coefficients from the top.
    pub fn canonical_cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.deg()
            .cmp(&o.deg())
            .then_with(|| self.coeffs.iter().rev().cmp(o.coeffs.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly<Rat> {
        UPoly::from_ints(c)
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[1, 2, 3, 4, 5]);
        let b = p(&[-1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.times(&b).plus(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_and_bezout() {
        let f = p(&[-1, 1]).times(&p(&[2, 1])).times(&p(&[1, 0, 1]));
        let g = p(&[-1, 1]).times(&p(&[1, 0, 1])).times(&p(&[5, 1]));
        let (d, s, t) = f.ext_gcd(&g);
        assert_eq!(d, p(&[-1, 1]).times(&p(&[1, 0, 1])));
        assert_eq!(s.times(&f).plus(&t.times(&g)), d);
    }

    #[test]
    fn yun_decomposition() {
        let f = p(&[-1, 1]).pow(3).times(&p(&[2, 1]).pow(2)).times(&p(&[0, 1]));
        let sq = f.squarefree_decomposition();
        assert_eq!(
            sq,
            vec![(p(&[0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]
        );
    }

    #[test]
    fn taylor_shift_matches_compose() {
        let f = p(&[3, -1, 0, 2]);
        let a = Rat::new(1, 3);
        let lin = UPoly::from_rats(vec![a.clone(), Rat::one()]);
        assert_eq!(f.taylor_shift(&a), f.compose(&lin));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -3]).display_in("z"), "-3*z^2 + 1");
        assert_eq!(p(&[0, -1]).display_in("z"), "-z");
        assert_eq!(p(&[]).display_in("z"), "0");
    }
}
