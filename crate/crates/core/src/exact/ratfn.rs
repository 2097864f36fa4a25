use std::fmt;

use super::field::Field;
use super::matrix::Mat;
use super::poly::UPoly;
use super::rat::Rat;

/// A point of the projective line over Q.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Point {
    Finite(Rat),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(a) => write!(f, "{a}"),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Point {
    type Err = String;
    fn from_str(s: &str) -> Result<Point, String> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            Ok(Point::Infinity)
        } else {
            t.parse().map(Point::Finite)
        }
    }
}

/// Order of vanishing; `None` stands for +infinity (the zero function).
pub type Valuation = Option<i64>;

/// Rational function over Q in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFn {
    num: UPoly<Rat>,
    den: UPoly<Rat>,
}

impl RatFn {
    pub fn new(num: UPoly<Rat>, den: UPoly<Rat>) -> RatFn {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let lc = d.lc();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFn { num: n, den: d }
    }

    pub fn from_poly(p: UPoly<Rat>) -> RatFn {
        RatFn {
            num: p,
            den: UPoly::one(&Rat::zero()),
        }
    }

    pub fn constant(c: Rat) -> RatFn {
        RatFn::from_poly(UPoly::constant(c))
    }

    pub fn zero() -> RatFn {
        RatFn::from_poly(UPoly::zero(&Rat::zero()))
    }

    pub fn one() -> RatFn {
        RatFn::constant(Rat::one())
    }

    /// The coordinate function z.
    pub fn var() -> RatFn {
        RatFn::from_poly(UPoly::x(&Rat::zero()))
    }

    /// z^k for any integer k.
    pub fn monomial(c: Rat, k: i64) -> RatFn {
        if k >= 0 {
            RatFn::from_poly(UPoly::monomial(c, k as usize))
        } else {
            RatFn::new(
                UPoly::constant(c),
                UPoly::monomial(Rat::one(), (-k) as usize),
            )
        }
    }

    pub fn num(&self) -> &UPoly<Rat> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<Rat> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg() == 0
    }

    /// Order of vanishing at a point (negative at poles).
    pub fn valuation(&self, a: &Point) -> Valuation {
        if self.num.is_zero() {
            return None;
        }
        match a {
            Point::Infinity => Some(self.den.deg() as i64 - self.num.deg() as i64),
            Point::Finite(a) => Some(
                poly_order_at(&self.num, a) as i64 - poly_order_at(&self.den, a) as i64,
            ),
        }
    }

    /// f(z + a)
    pub fn shift(&self, a: &Rat) -> RatFn {
        RatFn::new(self.num.taylor_shift(a), self.den.taylor_shift(a))
    }

    /// f(1/w) as a function of w.
    pub fn invert_variable(&self) -> RatFn {
        let dn = self.num.deg().max(0) as usize;
        let dd = self.den.deg() as usize;
        let n = self.num.reversed();
        let d = self.den.reversed();
        if dn >= dd {
            RatFn::new(n, d.shift_up(dn - dd))
        } else {
            RatFn::new(n.shift_up(dd - dn), d)
        }
    }

    /// Value at a finite rational point, or None at a pole.
    pub fn eval(&self, a: &Rat) -> Option<Rat> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(a) / d)
    }

    pub fn derivative(&self) -> RatFn {
        let n = self
            .num
            .derivative()
            .times(&self.den)
            .minus(&self.num.times(&self.den.derivative()));
        RatFn::new(n, self.den.times(&self.den))
    }

    /// Pretty form using `var` as the variable name; reparses to the same function.
    pub fn display_in(&self, var: &str) -> String {
        let n = self.num.display_in(var);
        if self.is_polynomial() {
            return n;
        }
        let d = self.den.display_in(var);
        format!("({n})/({d})")
    }
}

/// Multiplicity of the root `a` in `p` (0 if p(a) != 0).
pub fn poly_order_at(p: &UPoly<Rat>, a: &Rat) -> usize {
    if p.is_zero() {
        return usize::MAX;
    }
    let lin = UPoly::linear_root(a);
    let mut q = p.clone();
    let mut k = 0;
    loop {
        let (quo, r) = q.div_rem(&lin);
        if !r.is_zero() {
            return k;
        }
        q = quo;
        k += 1;
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

/// Determinant over Q(z): rows are scaled into Q[z], then Bareiss
/// elimination keeps every intermediate entry a polynomial.
fn det_fraction_free(m: &Mat<RatFn>) -> RatFn {
    let n = m.rows();
    let one = UPoly::one(&Rat::zero());
    let mut scale = one.clone();
    let mut a: Vec<Vec<UPoly<Rat>>> = (0..n)
        .map(|i| {
            let l = m.row(i).iter().fold(one.clone(), |acc, x| {
                let g = acc.gcd(&x.den);
                acc.times(&x.den).exact_div(&g).unwrap()
            });
            scale = scale.times(&l);
            m.row(i)
                .iter()
                .map(|x| x.num.times(&l.exact_div(&x.den).unwrap()))
                .collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = one;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return RatFn::zero();
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].times(&a[k][k]).minus(&a[i][k].times(&a[k][j]));
                a[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = RatFn::new(prev, scale);
    if negate {
        d.negate()
    } else {
        d
    }
}

impl Field for RatFn {
    fn det(m: &Mat<RatFn>) -> RatFn {
        if m.rows() == 0 {
            return RatFn::one();
        }
        det_fraction_free(m)
    }

    fn zero_like(&self) -> RatFn {
        RatFn::zero()
    }
    fn one_like(&self) -> RatFn {
        RatFn::one()
    }
    fn from_rat_like(&self, r: &Rat) -> RatFn {
        RatFn::constant(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::new(self.num.plus(&o.num), self.den.clone());
        }
        RatFn::new(
            self.num.times(&o.den).plus(&o.num.times(&self.den)),
            self.den.times(&o.den),
        )
    }
    fn minus(&self, o: &RatFn) -> RatFn {
        self.plus(&o.negate())
    }
    fn times(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        RatFn::new(self.num.times(&o.num), self.den.times(&o.den))
    }
    fn negate(&self) -> RatFn {
        RatFn {
            num: self.num.negate(),
            den: self.den.clone(),
        }
    }
    fn recip(&self) -> RatFn {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFn::new(self.den.clone(), self.num.clone())
    }
    fn as_rat(&self) -> Option<Rat> {
        if self.is_polynomial() && self.num.deg() <= 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }
}
