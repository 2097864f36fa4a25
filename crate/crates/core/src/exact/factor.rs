//! Factorization of univariate polynomials over Q (Zassenhaus: modular
//! factorization, Hensel lifting, subset recombination).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::UPoly;
use super::rat::Rat;

/// Monic irreducible factors over Q with multiplicities, in canonical order
/// (degree, then coefficients from the top).
pub fn factor_rat(f: &UPoly<Rat>) -> Vec<(UPoly<Rat>, usize)> {
    let mut out = vec![];
    for (part, mult) in f.squarefree_decomposition() {
        for g in factor_squarefree(&part) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// Rational roots (each listed once).
pub fn rational_roots(f: &UPoly<Rat>) -> Vec<Rat> {
    factor_rat(f)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| -g.coeff(0))
        .collect()
}

/// Whether a nonconstant polynomial is irreducible over Q.
pub fn is_irreducible(f: &UPoly<Rat>) -> bool {
    let fs = factor_rat(f);
    fs.len() == 1 && fs[0].1 == 1
}

/// Monic irreducible factors of a squarefree polynomial.
pub fn factor_squarefree(f: &UPoly<Rat>) -> Vec<UPoly<Rat>> {
    if f.deg() <= 0 {
        return vec![];
    }
    let zf = primitive_integer(f);
    let mut out: Vec<UPoly<Rat>> = zassenhaus(&zf)
        .into_iter()
        .map(|g| UPoly::from_rats(g.into_iter().map(Rat::from).collect()).monic())
        .collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

/// Primitive integer polynomial with positive leading coefficient, proportional to f.
pub fn primitive_integer(f: &UPoly<Rat>) -> Vec<BigInt> {
    let l = Rat::lcm_den(f.coeffs());
    let mut v: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    let g = v.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    if v.last().is_some_and(|c| c.is_negative()) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

// ---------- arithmetic in F_p[x], coefficients low to high ----------

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    trim(v)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let b = trim(b.clone());
    assert!(!b.is_empty());
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + b.len() - 1] * inv % p;
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bj % p) % p;
        }
    }
    r.truncate(b.len() - 1);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => vec![],
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// (g, s, t) with s a + t b = g monic.
fn fp_ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (trim(a.clone()), trim(b.clone()));
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &Fp| trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

fn fp_powmod(base: &Fp, mut e: BigInt, m: &Fp, p: u64) -> Fp {
    let mut acc = vec![1u64];
    let mut b = fp_divrem(base, m, p).1;
    let two = BigInt::from(2);
    while e.is_positive() {
        if (&e % &two).is_one() {
            acc = fp_divrem(&fp_mul(&acc, &b, p), m, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        e /= &two;
    }
    acc
}

fn to_fp(f: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(
        f.iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = vec![];
    let mut rest = f.clone();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            out.push((rest.clone(), rest.len() - 1));
            break;
        }
        h = fp_powmod(&h, BigInt::from(p), &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
            out.push((g, d));
        }
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus), p odd.
fn edf(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e: BigInt = (BigInt::from(p).pow(d as u32) - 1) / 2;
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let g = fp_gcd(&a, f, p);
        let g = if g.len() > 1 {
            g
        } else {
            let b = fp_powmod(&a, e.clone(), f, p);
            fp_gcd(&fp_sub(&b, &vec![1], p), f, p)
        };
        if g.len() > 1 && g.len() < f.len() {
            let q = fp_monic(&fp_divrem(f, &g, p).0, p);
            let mut out = edf(&g, d, p, rng);
            out.extend(edf(&q, d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &Fp, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let mut out = vec![];
    for (g, d) in ddf(f, p) {
        out.extend(edf(&g, d, p, rng));
    }
    out
}

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn candidate_primes() -> impl Iterator<Item = u64> {
    PRIMES
        .iter()
        .copied()
        .chain((181u64..).filter(|&n| is_prime(n)))
}

// ---------- arithmetic in (Z/m)[x] with BigInt coefficients ----------

type Zp = Vec<BigInt>;

fn zt(mut a: Zp) -> Zp {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zmod(a: &[BigInt], m: &BigInt) -> Zp {
    zt(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zt((0..n)
        .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
        .collect())
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zt((0..n)
        .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
        .collect())
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    zmod(&v, m)
}

/// Division by a monic polynomial modulo m.
fn zdivrem(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Zp, Zp) {
    let mut r = zmod(a, m);
    let b = zt(b.to_vec());
    debug_assert!(b.last().is_some_and(|c| c.is_one()));
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + b.len() - 1].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * bj).mod_floor(m);
        }
        q[k] = c;
    }
    r.truncate(b.len() - 1);
    (zt(q), zt(r))
}

/// One quadratic Hensel step (f = g h mod m, s g + t h = 1 mod m, h monic)
/// producing the same relations modulo m^2.
fn hensel_step(m: &BigInt, f: &[BigInt], g: &Zp, h: &Zp, s: &Zp, t: &Zp) -> (Zp, Zp, Zp, Zp) {
    let m2 = m * m;
    let e = zsub(f, &zmul(g, h, &m2), &m2);
    let (q, r) = zdivrem(&zmul(s, &e, &m2), h, &m2);
    let g1 = zadd(&zadd(g, &zmul(t, &e, &m2), &m2), &zmul(&q, g, &m2), &m2);
    let h1 = zadd(h, &r, &m2);
    let b = zsub(
        &zadd(&zmul(s, &g1, &m2), &zmul(t, &h1, &m2), &m2),
        &[BigInt::one()],
        &m2,
    );
    let (c, d) = zdivrem(&zmul(s, &b, &m2), &h1, &m2);
    let s1 = zsub(s, &d, &m2);
    let t1 = zsub(&zsub(t, &zmul(t, &b, &m2), &m2), &zmul(&c, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}

fn fp_to_z(a: &Fp) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts f = lc * prod(factors) mod p to monic factors mod p^a.
fn multi_lift(f: &[BigInt], factors: &[Fp], p: u64, pa: &BigInt) -> Vec<Zp> {
    let lc = f.last().unwrap().clone();
    if factors.len() == 1 {
        let inv = lc.modinv(pa).expect("leading coefficient invertible");
        return vec![zmod(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), pa)];
    }
    let k = factors.len() / 2;
    let pb = BigInt::from(p);
    let lcp = lc.mod_floor(&pb).to_u64().unwrap();
    let mut g0: Fp = vec![lcp];
    for u in &factors[..k] {
        g0 = fp_mul(&g0, u, p);
    }
    let mut h0: Fp = vec![1];
    for u in &factors[k..] {
        h0 = fp_mul(&h0, u, p);
    }
    let (_, s0, t0) = fp_ext_gcd(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (fp_to_z(&g0), fp_to_z(&h0), fp_to_z(&s0), fp_to_z(&t0));
    let mut m = pb.clone();
    while &m < pa {
        let (g1, h1, s1, t1) = hensel_step(&m, f, &g, &h, &s, &t);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    let g = zmod(&g, pa);
    let h = zmod(&h, pa);
    let mut out = multi_lift(&g, &factors[..k], p, pa);
    out.extend(multi_lift(&h, &factors[k..], p, pa));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Zp {
    let half = m / 2;
    zt(a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect())
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn primitive_part(a: &[BigInt]) -> Zp {
    let c = content(a);
    let mut v: Zp = a.iter().map(|x| x / &c).collect();
    if v.last().is_some_and(|x| x.sign() == Sign::Minus) {
        v = v.into_iter().map(|x| -x).collect();
    }
    v
}

/// Exact division in Z[x]; None if not divisible.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<Zp> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    if r.len() < b.len() {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = &r[k + b.len() - 1];
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &c * bj;
        }
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then(|| zt(q))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}

/// Irreducible factors of a primitive squarefree integer polynomial.
fn zassenhaus(f: &[BigInt]) -> Vec<Zp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in candidate_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = to_fp(f, p);
        if fp.len() != f.len() {
            continue;
        }
        let fpm = fp_monic(&fp, p);
        if fp_gcd(&fpm, &fp_derivative(&fpm, p), p).len() > 1 {
            continue;
        }
        let facs = factor_mod_p(&fpm, p, &mut rng);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, mut facs) = best.expect("a good prime exists");
    facs.sort();
    // coefficient bound for factors times the leading coefficient
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (norm2.sqrt() + 1u32) * (BigInt::one() << n) * lc.abs() * 2u32;
    let pb = BigInt::from(p);
    let mut pa = pb.clone();
    while pa <= bound {
        pa *= &pb;
    }
    let lifted = multi_lift(f, &facs, p, &pa);

    let mut remaining: Vec<Zp> = lifted;
    let mut f_cur = f.to_vec();
    let mut found = vec![];
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        let lc_cur = f_cur.last().unwrap().clone();
        for sub in subsets(remaining.len(), size) {
            let mut g: Zp = vec![lc_cur.clone()];
            for &i in &sub {
                g = zmul(&g, &remaining[i], &pa);
            }
            let g = primitive_part(&symmetric(&g, &pa));
            if let Some(q) = zdiv_exact(&f_cur, &g) {
                hit = Some((sub, g, q));
                break;
            }
        }
        match hit {
            Some((sub, g, q)) => {
                found.push(g);
                f_cur = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !sub.contains(i))
                    .map(|(_, v)| v)
                    .collect();
            }
            None => size += 1,
        }
    }
    if f_cur.len() > 1 {
        found.push(primitive_part(&f_cur));
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly<Rat> {
        UPoly::from_ints(c)
    }

    fn product(fs: &[(UPoly<Rat>, usize)]) -> UPoly<Rat> {
        fs.iter().fold(p(&[1]), |acc, (g, m)| acc.times(&g.pow(*m as u32)))
    }

    #[test]
    fn swinnerton_dyer_like_quartic_is_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime, so recombination must reject all pairs
        let f = p(&[1, 0, -10, 0, 1]);
        assert!(is_irreducible(&f));
    }

    #[test]
    fn mixed_factorization() {
        let f = p(&[-2, 0, 1]).times(&p(&[1, 3])).times(&p(&[1, 1, 1])).times(&p(&[-1, 1]).pow(2));
        let fs = factor_rat(&f);
        assert_eq!(fs.len(), 4);
        assert_eq!(product(&fs), f.monic());
        assert_eq!(rational_roots(&f), vec![Rat::one(), Rat::new(-1, 3)]);
    }

    #[test]
    fn cyclotomic_12() {
        let f = p(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fs = factor_rat(&f);
        let degs: Vec<isize> = fs.iter().map(|(g, _)| g.deg()).collect();
        assert_eq!(degs, vec![1, 1, 2, 2, 2, 4]);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn non_monic_leading_coefficient() {
        let f = p(&[3, 0, 2]).times(&p(&[-5, 7])).times(&p(&[1, 0, 0, 6]));
        let fs = factor_rat(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f.monic());
    }
}
