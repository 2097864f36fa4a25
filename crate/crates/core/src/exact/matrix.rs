use std::fmt;

use super::field::Field;
use super::poly::UPoly;
use super::ratfn::RatFn;

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Square matrix of rational functions (the connection matrix A).
pub type MatRF = Mat<RatFn>;

/// Polynomial in y over Q(z).
pub type BiPoly = UPoly<RatFn>;

impl<F: Field> Mat<F> {
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize, ctx: &F) -> Self {
        Mat::from_fn(rows, cols, |_, _| ctx.zero_like())
    }

    pub fn identity(n: usize, ctx: &F) -> Self {
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                ctx.one_like()
            } else {
                ctx.zero_like()
            }
        })
    }

    pub fn diagonal(d: &[F]) -> Self {
        let n = d.len();
        Mat::from_fn(n, n, |i, j| {
            if i == j {
                d[i].clone()
            } else {
                d[0].zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.times(c))
    }

    pub fn times(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let ctx = self.data.first().or(o.data.first()).cloned();
        let Some(ctx) = ctx else {
            return Mat {
                rows: self.rows,
                cols: o.cols,
                data: vec![],
            };
        };
        let mut out = Mat::zero(self.rows, o.cols, &ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).plus(&a.times(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> F {
        let mut t = self.data[0].zero_like();
        for i in 0..self.rows.min(self.cols) {
            t = t.plus(self.get(i, i));
        }
        t
    }

    /// Sub-block with the given row and column ranges.
    pub fn block(&self, r: std::ops::Range<usize>, c: std::ops::Range<usize>) -> Self {
        Mat::from_fn(r.len(), c.len(), |i, j| self.get(r.start + i, c.start + j).clone())
    }

    pub fn det(&self) -> F {
        F::det(self)
    }

    /// Determinant by Gaussian elimination with first-nonzero pivoting.
    pub fn det_gauss(&self) -> F {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            panic!("determinant of empty matrix needs a context element");
        }
        let mut m = self.clone();
        let mut det = self.data[0].one_like();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return det.zero_like();
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = det.negate();
            }
            let p = m.get(col, col).clone();
            det = det.times(&p);
            let pinv = p.recip();
            for r in col + 1..n {
                let f = m.get(r, col).times(&pinv);
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c).minus(&f.times(m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(piv, row);
            let inv = self.get(row, col).recip();
            for c in 0..self.cols {
                let v = self.get(row, c).times(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let v = self.get(r, c).minus(&f.times(self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let ctx = self.data[0].zero_like();
        let mut basis = vec![];
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![ctx.clone(); self.cols];
            v[free] = ctx.one_like();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.get(r, free).negate();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves self * x = b for square nonsingular self.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert!(self.is_square() && b.len() == self.rows);
        let n = self.rows;
        let mut aug = Mat::from_fn(n, n + 1, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some((0..n).map(|i| aug.get(i, n).clone()).collect())
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let ctx = self.data[0].zero_like();
        let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                ctx.one_like()
            } else {
                ctx.clone()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(aug.block(0..n, n..2 * n))
    }

    /// Characteristic polynomial det(yI - M) by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> UPoly<F> {
        assert!(self.is_square());
        let n = self.rows;
        let ctx = self.data[0].zero_like();
        let mut coeffs = vec![ctx.clone(); n + 1];
        coeffs[n] = ctx.one_like();
        let id = Mat::identity(n, &ctx);
        let mut mk = Mat::zero(n, n, &ctx);
        for k in 1..=n {
            let prev = coeffs[n - k + 1].clone();
            mk = self.times(&mk).plus(&id.scale(&prev));
            let am = self.times(&mk);
            let c = am.trace().times(&ctx.from_rat_like(&(-crate::exact::Rat::new(1, k as i64))));
            coeffs[n - k] = c;
        }
        UPoly::new(coeffs, &ctx)
    }
}

impl<F: Field> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// det(yI - M) for a matrix of rational functions.
pub fn charpoly(m: &MatRF) -> BiPoly {
    m.charpoly()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rat;

    fn r(n: i64) -> Rat {
        Rat::from(n)
    }

    fn m(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(rows.iter().map(|x| x.iter().map(|&v| r(v)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), r(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.times(&inv), Mat::identity(3, &r(0)));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn charpoly_by_cofactor_oracle() {
        // det(yI - A) for a 3x3 integer matrix, coefficients from the
        // closed form y^3 - tr y^2 + (sum of principal 2-minors) y - det.
        let a = m(&[&[1, 2, 3], &[0, 4, 5], &[1, 0, 6]]);
        let tr = r(11);
        let minors = r(4) + r(6 - 3) + r(24);
        let det = a.det();
        let expected = UPoly::from_rats(vec![-det, minors, -tr, r(1)]);
        assert_eq!(a.charpoly(), expected);
    }

    #[test]
    fn charpoly_examples() {
        let z = RatFn::var();
        let a = Mat::from_rows(vec![vec![RatFn::zero(), RatFn::one()], vec![z.clone(), RatFn::zero()]]);
        let cp = charpoly(&a);
        assert_eq!(cp.coeffs(), &[z.negate(), RatFn::zero(), RatFn::one()]);
        let c = Mat::from_rows(vec![vec![RatFn::constant(r(7))]]);
        assert_eq!(charpoly(&c).coeffs(), &[RatFn::constant(r(-7)), RatFn::one()]);
    }

    #[test]
    fn nullspace_dimension() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = Mat::from_rows(v.into_iter().map(|x| vec![x]).collect());
            assert!(a.times(&col).is_zero());
        }
    }
}
