//! Dense exact linear algebra over Q, plus the p-adic valuation helpers that
//! the lattice code needs.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type Mat = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Q::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Mat, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).filter(|(x, y)| !x.is_zero() && !y.is_zero()).fold(Q::zero(), |s, (x, y)| s + x * y)
        })
        .collect()
}

pub fn transpose(a: &Mat, cols: usize) -> Mat {
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn axpy(y: &mut [Q], c: &Q, x: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += c * xi;
        }
    }
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Q>], ncols: usize) -> (Mat, Vec<usize>) {
    let mut m: Mat = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// A basis of `{x : M x = 0}` for an `m × ncols` matrix.
pub fn nullspace(m: &Mat, ncols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `M x = b`, if any.
pub fn solve(m: &Mat, b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let aug: Mat = m.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (row, &pc) in r.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Characteristic polynomial `det(xI − A)` as coefficients `c₀ … c_d`
/// (Faddeev–LeVerrier).
pub fn char_poly(a: &Mat) -> Vec<Q> {
    let d = a.len();
    let mut c = vec![Q::zero(); d + 1];
    c[d] = Q::one();
    let mut m = zeros(d, d);
    for k in 1..=d {
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[d + 1 - k];
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr = (0..d).fold(Q::zero(), |s, i| s + &am[i][i]);
        c[d - k] = -tr / q(k as i64);
    }
    c
}

/// `f(A)` by Horner's rule.
pub fn poly_at_matrix(coeffs: &[Q], a: &Mat) -> Mat {
    let d = a.len();
    let mut acc = zeros(d, d);
    for c in coeffs.iter().rev() {
        acc = mat_mul(&acc, a);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

/// Divide by `(x − r)`; returns the quotient when `r` is a root.
pub fn deflate(coeffs: &[Q], r: &Q) -> Option<Vec<Q>> {
    let n = coeffs.len() - 1;
    let mut quot = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for i in (0..=n).rev() {
        let v = &coeffs[i] + &carry * r;
        if i == 0 {
            return v.is_zero().then_some(quot);
        }
        quot[i - 1] = v.clone();
        carry = v;
    }
    None
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

const DIVISOR_SEARCH_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    Some(out)
}

/// All rational roots with multiplicity, and the cofactor with no rational
/// roots. `None` when the coefficients are too large to search.
pub fn rational_roots(coeffs: &[Q]) -> Option<(Vec<(Q, usize)>, Vec<Q>)> {
    let mut f: Vec<Q> = coeffs.to_vec();
    let mut roots: Vec<(Q, usize)> = Vec::new();
    let mut zero_mult = 0;
    while f.len() > 1 && f[0].is_zero() {
        f.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Q::zero(), zero_mult));
    }
    if f.len() <= 1 {
        return Some((roots, f));
    }
    let lcm = f.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = f.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let nums = divisors(&ints[0])?;
    let dens = divisors(ints.last().unwrap())?;
    let mut candidates: Vec<Q> = Vec::new();
    for a in &nums {
        for b in &dens {
            for s in [1i64, -1] {
                let r = Q::new(BigInt::from(*a) * s, BigInt::from(*b));
                if !candidates.contains(&r) {
                    candidates.push(r);
                }
            }
        }
    }
    candidates.sort();
    for r in candidates {
        let mut m = 0;
        while f.len() > 1 {
            match deflate(&f, &r) {
                Some(next) => {
                    f = next;
                    m += 1;
                }
                None => break,
            }
        }
        if m > 0 {
            roots.push((r, m));
        }
    }
    Some((roots, f))
}

/// The p-adic valuation of a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// The p-adic valuation of a rational; `None` for zero.
pub fn vp(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(vp_int(x.numer(), p) - vp_int(x.denom(), p))
    }
}

pub fn p_power(p: u64, e: i64) -> Q {
    let base = Q::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn big_p_power(p: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(p), e as usize)
}

/// The canonical representative of `x` modulo `p^v · Z_(p)`: a rational with
/// p-power denominator in `[0, p^v)`.
pub fn reduce_mod_pv(x: &Q, p: u64, v: i64) -> Q {
    let Some(w) = vp(x, p) else { return Q::zero() };
    if w >= v {
        return Q::zero();
    }
    let t = (-w).max(0);
    let pb = BigInt::from(p);
    let modulus = num_traits::pow(pb.clone(), (t + v) as usize);
    let pt = num_traits::pow(pb.clone(), t as usize);
    // x = a / (p^t · b') with b' prime to p
    let a = x.numer().clone();
    let b_prime = x.denom() / &pt;
    let b_inv = b_prime.mod_floor(&modulus).modinv(&modulus).expect("denominator prime to p");
    let num = (a * b_inv).mod_floor(&modulus);
    Q::new(num, pt)
}
