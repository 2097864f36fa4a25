//! Truncated Puiseux series with exact precision bookkeeping.

use std::fmt;

use num_integer::Integer;

use crate::exact::{Field, Rat};

/// sum_k c_k z^{(start + k)/den}, known modulo z^{prec/den} (prec = None: exact).
#[derive(Clone, Debug, PartialEq)]
pub struct PSeries<F: Field> {
    den: i64,
    start: i64,
    coeffs: Vec<F>,
    prec: Option<i64>,
    ctx: F,
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

impl<F: Field> PSeries<F> {
    pub fn new(ctx: &F, den: i64, start: i64, coeffs: Vec<F>, prec: Option<i64>) -> Self {
        assert!(den >= 1);
        let mut s = PSeries {
            den,
            start,
            coeffs,
            prec,
            ctx: ctx.zero_like(),
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.start).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) if k > 0 => {
                self.coeffs.drain(..k);
                self.start += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.start = 0;
            }
            _ => {}
        }
    }

    pub fn zero(ctx: &F) -> Self {
        PSeries::new(ctx, 1, 0, vec![], None)
    }

    /// c z^e, exact.
    pub fn monomial(c: F, e: &Rat) -> Self {
        let den = e.denom().try_into().expect("small exponent denominator");
        let num: i64 = e.numer().try_into().expect("small exponent numerator");
        let ctx = c.zero_like();
        PSeries::new(&ctx, den, num, vec![c], None)
    }

    /// Exact series from integer-exponent coefficients starting at z^start.
    pub fn from_laurent(ctx: &F, start: i64, coeffs: Vec<F>, prec: Option<i64>) -> Self {
        PSeries::new(ctx, 1, start, coeffs, prec)
    }

    pub fn ctx(&self) -> &F {
        &self.ctx
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Known nonzero coefficients exist.
    pub fn is_determined(&self) -> bool {
        !self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// Valuation, when some coefficient is known to be nonzero.
    pub fn val(&self) -> Option<Rat> {
        (!self.coeffs.is_empty()).then(|| rat(self.start, self.den))
    }

    /// Lower bound for the valuation (None = +infinity, i.e. exact zero).
    pub fn val_lower(&self) -> Option<Rat> {
        if !self.coeffs.is_empty() {
            return Some(rat(self.start, self.den));
        }
        self.prec.map(|p| rat(p, self.den))
    }

    pub fn prec(&self) -> Option<Rat> {
        self.prec.map(|p| rat(p, self.den))
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.first()
    }

    /// Nonzero terms as (exponent, coefficient).
    pub fn terms(&self) -> Vec<(Rat, F)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (rat(self.start + i as i64, self.den), c.clone()))
            .collect()
    }

    /// Coefficient of z^e (zero if absent); None if e is at or beyond the precision.
    pub fn coeff(&self, e: &Rat) -> Option<F> {
        if let Some(p) = self.prec() {
            if *e >= p {
                return None;
            }
        }
        let scaled = e * &Rat::from(self.den);
        if !scaled.is_integer() {
            return Some(self.ctx.clone());
        }
        let k = scaled.to_i64().unwrap() - self.start;
        if k < 0 || k as usize >= self.coeffs.len() {
            Some(self.ctx.clone())
        } else {
            Some(self.coeffs[k as usize].clone())
        }
    }

    /// Rewrites with exponent denominator `den` (a multiple of the current one).
    pub fn with_den(&self, den: i64) -> Self {
        if den == self.den {
            return self.clone();
        }
        assert!(den % self.den == 0, "denominator must be refined");
        let k = den / self.den;
        let mut coeffs = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.extend(std::iter::repeat_n(self.ctx.clone(), (k - 1) as usize));
            }
            coeffs.push(c.clone());
        }
        PSeries {
            den,
            start: self.start * k,
            coeffs,
            prec: self.prec.map(|p| p * k),
            ctx: self.ctx.clone(),
        }
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        let d = self.den.lcm(&o.den);
        (self.with_den(d), o.with_den(d))
    }

    pub fn truncate(&self, prec: &Rat) -> Self {
        let d = self.den.lcm(&prec.denom().try_into().unwrap());
        let mut s = self.with_den(d);
        let p = (prec * &Rat::from(d)).to_i64().unwrap();
        s.prec = Some(s.prec.map_or(p, |q| q.min(p)));
        s.normalize();
        s
    }

    pub fn plus(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let prec = match (a.prec, b.prec) {
            (None, p) | (p, None) => p,
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        if a.coeffs.is_empty() {
            return PSeries::new(&a.ctx, a.den, b.start, b.coeffs, prec);
        }
        if b.coeffs.is_empty() {
            return PSeries::new(&a.ctx, a.den, a.start, a.coeffs, prec);
        }
        let start = a.start.min(b.start);
        let end = (a.start + a.coeffs.len() as i64).max(b.start + b.coeffs.len() as i64);
        let get = |s: &Self, e: i64| -> F {
            let k = e - s.start;
            if k < 0 || k as usize >= s.coeffs.len() {
                s.ctx.clone()
            } else {
                s.coeffs[k as usize].clone()
            }
        };
        let coeffs = (start..end).map(|e| get(&a, e).plus(&get(&b, e))).collect();
        PSeries::new(&a.ctx, a.den, start, coeffs, prec)
    }

    pub fn negate(&self) -> Self {
        PSeries {
            coeffs: self.coeffs.iter().map(|c| c.negate()).collect(),
            ..self.clone()
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }

    pub fn scale(&self, c: &F) -> Self {
        PSeries::new(
            &self.ctx,
            self.den,
            self.start,
            self.coeffs.iter().map(|x| x.times(c)).collect(),
            self.prec,
        )
    }

    /// Multiply by z^e.
    pub fn shift(&self, e: &Rat) -> Self {
        let d = self.den.lcm(&e.denom().try_into().unwrap());
        let mut s = self.with_den(d);
        let k = (e * &Rat::from(d)).to_i64().unwrap();
        s.start += k;
        s.prec = s.prec.map(|p| p + k);
        s
    }

    pub fn times(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        // precision: min(prec_a + val_b, prec_b + val_a), using lower bounds
        let low = |s: &Self| -> Option<i64> {
            if !s.coeffs.is_empty() {
                Some(s.start)
            } else {
                s.prec
            }
        };
        let pa = a.prec.and_then(|p| low(&b).map(|v| p + v));
        let pb = b.prec.and_then(|p| low(&a).map(|v| p + v));
        let prec = match (pa, pb) {
            (None, p) | (p, None) => p,
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        if a.is_exact_zero() || b.is_exact_zero() {
            return PSeries::new(&a.ctx, a.den, 0, vec![], None);
        }
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return PSeries::new(&a.ctx, a.den, 0, vec![], prec);
        }
        let start = a.start + b.start;
        // coefficients beyond the precision are dropped anyway
        let mut len = a.coeffs.len() + b.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - start).max(0) as usize);
        }
        let mut coeffs = vec![a.ctx.clone(); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if i >= len || x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].plus(&x.times(y));
            }
        }
        PSeries::new(&a.ctx, a.den, start, coeffs, prec)
    }

    /// Multiplicative inverse; None when the valuation is undetermined.
    pub fn inverse(&self) -> Option<Self> {
        if self.coeffs.is_empty() {
            return None;
        }
        let v = self.start;
        // relative precision
        let rel = self.prec.map(|p| p - v);
        let n = match rel {
            Some(r) => r as usize,
            None => {
                if self.coeffs.len() == 1 {
                    let c = self.coeffs[0].recip();
                    return Some(PSeries::new(&self.ctx, self.den, -v, vec![c], None));
                }
                return None;
            }
        };
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<F> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 {
                self.ctx.one_like()
            } else {
                self.ctx.clone()
            };
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = acc.minus(&self.coeffs[j].times(&out[k - j]));
            }
            out.push(acc.times(&inv0));
        }
        Some(PSeries::new(&self.ctx, self.den, -v, out, Some(n as i64 - v)))
    }

    /// The series with the given exponent predicate applied (exact part only).
    pub fn filter_terms(&self, keep: impl Fn(&Rat) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if keep(&rat(self.start + i as i64, self.den)) {
                    c.clone()
                } else {
                    self.ctx.clone()
                }
            })
            .collect();
        PSeries::new(&self.ctx, self.den, self.start, coeffs, None)
    }

    pub fn map<G: Field>(&self, ctx: &G, f: impl Fn(&F) -> G) -> PSeries<G> {
        PSeries::new(
            ctx,
            self.den,
            self.start,
            self.coeffs.iter().map(f).collect(),
            self.prec,
        )
    }

    /// Smallest denominator needed for the exponents of the nonzero terms.
    pub fn ramification(&self) -> i64 {
        self.terms()
            .iter()
            .fold(1i64, |acc, (e, _)| acc.lcm(&e.denom().try_into().unwrap()))
    }

    pub fn display_in(&self, var: &str) -> String {
        let mut parts: Vec<String> = vec![];
        for (e, c) in self.terms() {
            let cs = c.to_string();
            let compound = cs[1..].contains(['+', '-']);
            let mono = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                var.to_string()
            } else if e.is_integer() && e.is_positive() {
                format!("{var}^{e}")
            } else {
                format!("{var}^({e})")
            };
            let term = if mono.is_empty() {
                if compound {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else if compound {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (i, t) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        if let Some(p) = self.prec() {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("O({var}^({p}))"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<F: Field> fmt::Display for PSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

/// Polynomial in Y with series coefficients, low degree first.
pub type SeriesPoly<F> = Vec<PSeries<F>>;

/// H(Y + s) for a polynomial H with series coefficients.
pub fn shift_poly<F: Field>(h: &[PSeries<F>], s: &PSeries<F>) -> SeriesPoly<F> {
    let n = h.len();
    let mut out = h.to_vec();
    // repeated synthetic division (Horner-style Taylor shift)
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = out[j + 1].times(s);
            out[j] = out[j].plus(&t);
        }
    }
    out
}
