use std::fmt;

use super::matrix::Mat;
use super::rat::Rat;

/// A characteristic-zero field whose elements may carry context (e.g. the
/// extension tower they live in). Constants are created from an existing
/// element so that the context travels along.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rat_like(&self, r: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Inverse; panics on zero.
    fn recip(&self) -> Self;

    fn over(&self, o: &Self) -> Self {
        self.times(&o.recip())
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn from_int_like(&self, n: i64) -> Self {
        self.from_rat_like(&Rat::from(n))
    }

    fn powi(&self, e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }

    /// The element as a rational number, when it is one.
    fn as_rat(&self) -> Option<Rat>;

    fn det(m: &Mat<Self>) -> Self {
        m.det_gauss()
    }
}

impl Field for Rat {
    fn zero_like(&self) -> Rat {
        Rat::zero()
    }
    fn one_like(&self) -> Rat {
        Rat::one()
    }
    fn from_rat_like(&self, r: &Rat) -> Rat {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn plus(&self, o: &Rat) -> Rat {
        self + o
    }
    fn minus(&self, o: &Rat) -> Rat {
        self - o
    }
    fn times(&self, o: &Rat) -> Rat {
        self * o
    }
    fn negate(&self) -> Rat {
        -self
    }
    fn recip(&self) -> Rat {
        Rat::recip(self)
    }
    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}
