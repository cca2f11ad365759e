//! Linear endomorphisms of `Q_p^d`.
//!
//! Closed subgroups that occur are modules `S + L` where `S` is a rational
//! subspace and `L` a finitely generated `Z_(p)`-module. Only the prime `p`
//! matters for indices, so all other rational content is carried exactly.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::{self, axpy, is_zero_vec, mat_vec, p_power, q, rref, vp, Mat, Q};
use crate::error::{Result, TdlcError};
use crate::kernel::IndexValue;

/// A module `S + L` in `Q_p^d`, kept in canonical form: `S` in reduced row
/// echelon form, `L` reduced modulo `S` and in Hermite form over `Z_(p)` with
/// pivots exactly `p^v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicModule {
    p: u64,
    dim: usize,
    subspace: Mat,
    s_pivots: Vec<usize>,
    lattice: Mat,
    pivots: Vec<(usize, i64)>,
}

impl PadicModule {
    pub fn new(p: u64, dim: usize, subspace: &[Vec<Q>], lattice: &[Vec<Q>]) -> Self {
        let (s, s_pivots) = rref(subspace, dim);
        let reduced: Mat = lattice.iter().map(|v| reduce_mod_subspace(v, &s, &s_pivots)).collect();
        let (lattice, pivots) = hermite(p, dim, reduced);
        PadicModule { p, dim, subspace: s, s_pivots, lattice, pivots }
    }

    pub fn zero(p: u64, dim: usize) -> Self {
        Self::new(p, dim, &[], &[])
    }

    /// `p^k · Z_p^d`.
    pub fn standard(p: u64, dim: usize, k: i64) -> Self {
        let gens: Mat = linalg::identity(dim)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x * p_power(p, k)).collect())
            .collect();
        Self::new(p, dim, &[], &gens)
    }

    pub fn whole(p: u64, dim: usize) -> Self {
        Self::new(p, dim, &linalg::identity(dim), &[])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subspace(&self) -> &Mat {
        &self.subspace
    }

    pub fn lattice(&self) -> &Mat {
        &self.lattice
    }

    pub fn subspace_dim(&self) -> usize {
        self.subspace.len()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_compact(&self) -> bool {
        self.subspace.is_empty()
    }

    pub fn is_open(&self) -> bool {
        self.subspace.len() + self.lattice.len() == self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.subspace.is_empty() && self.lattice.is_empty()
    }

    /// The rational span `S + QL`.
    pub fn span(&self) -> Mat {
        let all: Mat = self.subspace.iter().chain(&self.lattice).cloned().collect();
        rref(&all, self.dim).0
    }

    fn valuation_sum(&self) -> i64 {
        self.pivots.iter().map(|&(_, v)| v).sum()
    }

    pub fn contains_vec(&self, v: &[Q]) -> bool {
        let mut w = reduce_mod_subspace(v, &self.subspace, &self.s_pivots);
        for (row, &(c, pv)) in self.lattice.iter().zip(&self.pivots) {
            if w[c].is_zero() {
                continue;
            }
            let coeff = &w[c] / p_power(self.p, pv);
            if vp(&coeff, self.p).is_some_and(|e| e < 0) {
                return false;
            }
            axpy(&mut w, &-coeff, row);
        }
        is_zero_vec(&w)
    }

    pub fn in_subspace(&self, v: &[Q]) -> bool {
        is_zero_vec(&reduce_mod_subspace(v, &self.subspace, &self.s_pivots))
    }

    /// Whether `other ≤ self`.
    pub fn contains(&self, other: &PadicModule) -> bool {
        other.subspace.iter().all(|v| self.in_subspace(v)) && other.lattice.iter().all(|v| self.contains_vec(v))
    }

    pub fn sum(&self, other: &PadicModule) -> PadicModule {
        let s: Mat = self.subspace.iter().chain(&other.subspace).cloned().collect();
        let l: Mat = self.lattice.iter().chain(&other.lattice).cloned().collect();
        Self::new(self.p, self.dim, &s, &l)
    }

    /// The image under a `d' × d` matrix.
    pub fn image(&self, a: &Mat) -> PadicModule {
        let out_dim = a.len();
        let s: Mat = self.subspace.iter().map(|v| mat_vec(a, v)).collect();
        let l: Mat = self.lattice.iter().map(|v| mat_vec(a, v)).collect();
        Self::new(self.p, out_dim, &s, &l)
    }

    pub fn scale(&self, k: i64) -> PadicModule {
        let f = p_power(self.p, k);
        let l: Mat = self.lattice.iter().map(|v| v.iter().map(|x| x * &f).collect()).collect();
        Self::new(self.p, self.dim, &self.subspace, &l)
    }

    pub fn intersect(&self, other: &PadicModule) -> PadicModule {
        // Cz = 0 with z = (a, b, c, e): S1ᵀa + L1ᵀb = S2ᵀc + L2ᵀe.
        let blocks = [&self.subspace, &self.lattice, &other.subspace, &other.lattice];
        let signs = [1, 1, -1, -1];
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut c = linalg::zeros(self.dim, n);
        let mut o = linalg::zeros(self.dim, n);
        let mut integral = Vec::with_capacity(n);
        let mut col = 0;
        for (bi, (block, sign)) in blocks.iter().zip(signs).enumerate() {
            for v in block.iter() {
                for r in 0..self.dim {
                    c[r][col] = &v[r] * q(sign);
                    if bi < 2 {
                        o[r][col] = v[r].clone();
                    }
                }
                integral.push(bi % 2 == 1);
                col += 1;
            }
        }
        solve_module(self.p, &c, &integral, &o, self.dim)
    }

    /// `{x : Ax ∈ self}` for a `d × d'` matrix `A`.
    pub fn preimage(&self, a: &Mat, in_dim: usize) -> PadicModule {
        let ns = self.subspace.len();
        let nl = self.lattice.len();
        let n = in_dim + ns + nl;
        let mut c = linalg::zeros(self.dim, n);
        let mut o = linalg::zeros(in_dim, n);
        for r in 0..self.dim {
            for j in 0..in_dim {
                c[r][j] = a[r][j].clone();
            }
            for (k, v) in self.subspace.iter().enumerate() {
                c[r][in_dim + k] = -v[r].clone();
            }
            for (k, v) in self.lattice.iter().enumerate() {
                c[r][in_dim + ns + k] = -v[r].clone();
            }
        }
        for (j, row) in o.iter_mut().enumerate() {
            row[j] = Q::one();
        }
        let integral: Vec<bool> = (0..n).map(|j| j >= in_dim + ns).collect();
        solve_module(self.p, &c, &integral, &o, in_dim)
    }

    /// `[self : sub]` for `sub ≤ self`.
    pub fn index_of(&self, sub: &PadicModule) -> Result<IndexValue> {
        if !self.contains(sub) {
            return Err(TdlcError::NotContained("module is not a submodule".into()));
        }
        if sub.subspace.len() != self.subspace.len() || sub.lattice.len() != self.lattice.len() {
            return Ok(IndexValue::Infinite);
        }
        let e = sub.valuation_sum() - self.valuation_sum();
        debug_assert!(e >= 0);
        Ok(IndexValue::power(self.p, e as u64))
    }

    /// Coordinates of `S + L` relative to a basis, for display.
    pub fn describe(&self) -> String {
        let fmt_vec = |v: &Vec<Q>| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        let s: Vec<String> = self.subspace.iter().map(fmt_vec).collect();
        let l: Vec<String> = self.lattice.iter().map(fmt_vec).collect();
        match (s.is_empty(), l.is_empty()) {
            (true, true) => "0".into(),
            (true, false) => format!("Z_{}<{}>", self.p, l.join(" ")),
            (false, true) => format!("Q_{}<{}>", self.p, s.join(" ")),
            (false, false) => format!("Q_{}<{}> + Z_{}<{}>", self.p, s.join(" "), self.p, l.join(" ")),
        }
    }
}

fn reduce_mod_subspace(v: &[Q], s: &Mat, s_pivots: &[usize]) -> Vec<Q> {
    let mut w = v.to_vec();
    for (row, &c) in s.iter().zip(s_pivots) {
        if !w[c].is_zero() {
            let f = -w[c].clone();
            axpy(&mut w, &f, row);
        }
    }
    w
}

/// Canonical Hermite basis of the `Z_(p)`-span of `gens`.
fn hermite(p: u64, dim: usize, gens: Mat) -> (Mat, Vec<(usize, i64)>) {
    let mut rest: Mat = gens.into_iter().filter(|v| !is_zero_vec(v)).collect();
    let mut basis: Mat = Vec::new();
    let mut pivots: Vec<(usize, i64)> = Vec::new();
    for c in 0..dim {
        let best = rest
            .iter()
            .enumerate()
            .filter_map(|(i, v)| vp(&v[c], p).map(|e| (e, i)))
            .min();
        let Some((e, i)) = best else { continue };
        let mut row = rest.swap_remove(i);
        let unit = &row[c] / p_power(p, e);
        let inv = unit.recip();
        for x in row.iter_mut() {
            *x *= &inv;
        }
        for v in rest.iter_mut() {
            if !v[c].is_zero() {
                let f = -(&v[c] / p_power(p, e));
                axpy(v, &f, &row);
            }
        }
        rest.retain(|v| !is_zero_vec(v));
        // Reduce entries above the pivot to canonical residues mod p^e.
        for prev in basis.iter_mut() {
            if prev[c].is_zero() {
                continue;
            }
            let r = linalg::reduce_mod_pv(&prev[c], p, e);
            let f = -((&prev[c] - &r) / p_power(p, e));
            axpy(prev, &f, &row);
        }
        basis.push(row);
        pivots.push((c, e));
    }
    debug_assert!(rest.is_empty());
    (basis, pivots)
}

/// `{O z : C z = 0, z_j ∈ Z_(p) for integral j}` as a canonical module.
fn solve_module(p: u64, c: &Mat, integral: &[bool], o: &Mat, out_dim: usize) -> PadicModule {
    let n = integral.len();
    let k = linalg::nullspace(c, n);
    if k.is_empty() {
        return PadicModule::zero(p, out_dim);
    }
    let kdim = k.len();
    let idx: Vec<usize> = (0..n).filter(|&j| integral[j]).collect();
    // P y = (K y)_I, K has the nullspace vectors as columns.
    let pmat: Mat = idx.iter().map(|&j| k.iter().map(|v| v[j].clone()).collect()).collect();
    let lift = |y: &[Q]| -> Vec<Q> {
        let mut z = vec![Q::zero(); n];
        for (v, yi) in k.iter().zip(y) {
            axpy(&mut z, yi, v);
        }
        mat_vec(o, &z)
    };
    let sub: Mat = linalg::nullspace(&pmat, kdim).iter().map(|y| lift(y)).collect();
    let mut lat: Mat = Vec::new();
    if !idx.is_empty() {
        let colspace = rref(&linalg::transpose(&pmat, kdim), idx.len()).0;
        for w in saturate(p, &colspace, idx.len()) {
            let y = linalg::solve(&pmat, &w, kdim).expect("vector lies in the column space");
            lat.push(lift(&y));
        }
    }
    PadicModule::new(p, out_dim, &sub, &lat)
}

/// A `Z_(p)`-basis of `V ∩ Z_(p)^m` for the row span `V` of `basis`.
fn saturate(p: u64, basis: &Mat, m: usize) -> Mat {
    let r = basis.len();
    // X = Bᵀ (m × r); track E with original = E · X.
    let mut x: Mat = linalg::transpose(basis, m);
    let mut e = linalg::identity(m);
    for t in 0..r {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in x.iter().enumerate().skip(t) {
            for (j, val) in row.iter().enumerate().skip(t) {
                if let Some(v) = vp(val, p) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (_, bi, bj) = best.expect("full column rank");
        x.swap(t, bi);
        for row in e.iter_mut() {
            row.swap(t, bi);
        }
        for row in x.iter_mut() {
            row.swap(t, bj);
        }
        for i in t + 1..m {
            if x[i][t].is_zero() {
                continue;
            }
            let cf = &x[i][t] / &x[t][t];
            let pivot = x[t].clone();
            axpy(&mut x[i], &-cf.clone(), &pivot);
            for row in e.iter_mut() {
                let add = &cf * &row[i];
                row[t] += add;
            }
        }
    }
    (0..r).map(|j| e.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Newton polygon of the characteristic polynomial: eigenvalue valuations
/// with multiplicities, zero eigenvalues counted separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub slopes: Vec<(BigRational, usize)>,
    pub zero_roots: usize,
}

impl NewtonPolygon {
    /// `e = Σ mult · max(0, −slope)`.
    pub fn entropy_exponent(&self) -> u64 {
        let mut e = BigRational::zero();
        for (s, m) in &self.slopes {
            if s.is_negative() {
                e += -s * BigRational::from_integer((*m).into());
            }
        }
        debug_assert!(e.is_integer());
        e.to_integer().try_into().expect("exponent fits u64")
    }
}

pub fn newton_polygon(p: u64, a: &Mat) -> NewtonPolygon {
    let c = linalg::char_poly(a);
    let pts: Vec<(i64, i64)> = c
        .iter()
        .enumerate()
        .filter_map(|(i, x)| vp(x, p).map(|v| (i as i64, v)))
        .collect();
    let zero_roots = pts[0].0 as usize;
    let mut slopes = Vec::new();
    let mut cur = 0;
    while cur + 1 < pts.len() {
        let (x0, y0) = pts[cur];
        // next hull vertex: minimal slope, farthest on ties
        let mut best = cur + 1;
        for j in cur + 1..pts.len() {
            let (xb, yb) = pts[best];
            let (xj, yj) = pts[j];
            // (yj−y0)/(xj−x0) <= (yb−y0)/(xb−x0)
            if (yj - y0) * (xb - x0) <= (yb - y0) * (xj - x0) {
                best = j;
            }
        }
        let (x1, y1) = pts[best];
        let seg = BigRational::new((y1 - y0).into(), (x1 - x0).into());
        slopes.push((-seg, (x1 - x0) as usize));
        cur = best;
    }
    slopes.sort();
    NewtonPolygon { slopes, zero_roots }
}

/// The system `(Q_p^d, A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicSystem {
    pub p: u64,
    pub dim: usize,
    pub matrix: Mat,
}

impl PadicSystem {
    pub fn new(p: u64, matrix: Mat) -> Result<Self> {
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(TdlcError::Invalid(format!("{p} is not prime")));
        }
        let dim = matrix.len();
        if matrix.iter().any(|r| r.len() != dim) {
            return Err(TdlcError::Invalid("matrix must be square".into()));
        }
        Ok(PadicSystem { p, dim, matrix })
    }

    pub fn image(&self, m: &PadicModule) -> PadicModule {
        m.image(&self.matrix)
    }

    pub fn preimage(&self, m: &PadicModule) -> PadicModule {
        m.preimage(&self.matrix, self.dim)
    }

    pub fn kernel(&self) -> PadicModule {
        PadicModule::new(self.p, self.dim, &linalg::nullspace(&self.matrix, self.dim), &[])
    }

    pub fn is_injective(&self) -> bool {
        linalg::rank(&self.matrix, self.dim) == self.dim
    }

    pub fn base(&self, k: usize) -> PadicModule {
        PadicModule::standard(self.p, self.dim, k as i64)
    }

    pub fn newton(&self) -> NewtonPolygon {
        newton_polygon(self.p, &self.matrix)
    }

    /// Predicted `p^e` for the entropy and scale.
    pub fn oracle_index(&self) -> IndexValue {
        IndexValue::power(self.p, self.newton().entropy_exponent())
    }

    /// Kernel of `g(A)`, where `g` is the characteristic polynomial with the
    /// rational roots selected by `drop` removed. The remaining roots must all
    /// satisfy `keep`, else the subspace is not rational and `None` is returned.
    fn spectral_subspace(
        &self,
        drop: impl Fn(Option<i64>) -> bool,
        keep: impl Fn(&BigRational) -> bool,
    ) -> Option<Mat> {
        let c = linalg::char_poly(&self.matrix);
        let (roots, rest) = linalg::rational_roots(&c)?;
        let rest_poly = newton_polygon_of_coeffs(self.p, &rest);
        if !rest_poly.slopes.iter().all(|(s, _)| keep(s)) {
            return None;
        }
        let mut g = rest;
        for (r, m) in &roots {
            if !drop(vp(r, self.p)) {
                for _ in 0..*m {
                    g = linalg::poly_mul(&g, &[-r.clone(), q(1)]);
                }
            }
        }
        let ga = linalg::poly_at_matrix(&g, &self.matrix);
        Some(linalg::nullspace(&ga, self.dim))
    }

    /// Generalized eigenspaces for nonzero eigenvalues of valuation `≤ 0`.
    pub fn plus_space(&self) -> Option<Mat> {
        self.spectral_subspace(|v| v.is_none_or(|v| v > 0), |s| !s.is_positive())
    }

    /// Generalized eigenspaces for eigenvalues of valuation `≥ 0`, zero included.
    pub fn minus_space(&self) -> Option<Mat> {
        self.spectral_subspace(|v| v.is_some_and(|v| v < 0), |s| !s.is_negative())
    }

    /// Generalized eigenspaces for eigenvalues of valuation `< 0`.
    pub fn expanding_space(&self) -> Option<Mat> {
        self.spectral_subspace(|v| v.is_none_or(|v| v >= 0), |s| s.is_negative())
    }

    /// Generalized eigenspaces for eigenvalues of valuation `> 0`, zero included.
    pub fn contracting_space(&self) -> Option<Mat> {
        self.spectral_subspace(|v| v.is_some_and(|v| v <= 0), |s| s.is_positive())
    }

    fn subspace_module(&self, basis: &Mat) -> PadicModule {
        PadicModule::new(self.p, self.dim, basis, &[])
    }

    /// `U₊`: by fixpoint when the iteration stabilizes, otherwise as
    /// `U_n ∩ V₊` once that module is contained in its image.
    pub fn plus_group(&self, u: &PadicModule, max_steps: usize) -> Result<(PadicModule, String)> {
        let mut cur = u.clone();
        for n in 0..max_steps.min(8) {
            let next = u.intersect(&self.image(&cur));
            if next == cur {
                return Ok((cur, format!("fixpoint U_{n} = U_{}", n + 1)));
            }
            cur = next;
        }
        let v = self
            .plus_space()
            .ok_or_else(|| TdlcError::Unresolved("non-expanding spectrum is not split over Q".into()))?;
        let vmod = self.subspace_module(&v);
        let mut un = u.clone();
        for n in 0..max_steps {
            let w = un.intersect(&vmod);
            if self.image(&w).contains(&w) {
                return Ok((w, format!("U_{n} meet V+ (dim {}) is contained in its image", v.len())));
            }
            un = u.intersect(&self.image(&un));
        }
        Err(TdlcError::Unresolved(format!("U+ not certified within {max_steps} steps")))
    }

    /// `U₋`: by fixpoint, otherwise as `U₋ₙ ∩ V₋` once it is `A`-invariant.
    pub fn minus_group(&self, u: &PadicModule, max_steps: usize) -> Result<(PadicModule, String)> {
        let mut cur = u.clone();
        for n in 0..max_steps.min(8) {
            let next = u.intersect(&self.preimage(&cur));
            if next == cur {
                return Ok((cur, format!("fixpoint U_-{n} = U_-{}", n + 1)));
            }
            cur = next;
        }
        let v = self
            .minus_space()
            .ok_or_else(|| TdlcError::Unresolved("non-contracting spectrum is not split over Q".into()))?;
        let vmod = self.subspace_module(&v);
        let mut un = u.clone();
        for n in 0..max_steps {
            let w = un.intersect(&vmod);
            if w.contains(&self.image(&w)) {
                return Ok((w, format!("U_-{n} meet V- (dim {}) is invariant", v.len())));
            }
            un = u.intersect(&self.preimage(&un));
        }
        Err(TdlcError::Unresolved(format!("U- not certified within {max_steps} steps")))
    }

    /// Closedness of `⋃ AⁿU₊`: it is `E + AᴺU₊` for the expanding space `E`
    /// once `AⁿU₊ + E` stops growing and `U₊ ∩ E` spans `E`.
    pub fn tidy_below_tails(&self, uplus: &PadicModule, max_steps: usize) -> super::shift::TailVerdict {
        use super::shift::TailVerdict;
        let Some(e) = self.expanding_space() else {
            return TailVerdict::Unknown("expanding spectrum is not split over Q".into());
        };
        let emod = self.subspace_module(&e);
        if uplus.intersect(&emod).lattice_rank() != e.len() {
            return TailVerdict::Unknown("U+ does not span the expanding space".into());
        }
        let mut cur = uplus.sum(&emod);
        for n in 0..max_steps {
            let next = self.image(&cur).sum(&emod);
            if next == cur {
                return TailVerdict::Closed(format!("A^n U+ + E stabilizes at n={n}"));
            }
            cur = next;
        }
        TailVerdict::Unknown(format!("A^n U+ + E still growing after {max_steps} steps"))
    }

    /// Lattices adapted to the splitting `V₊ ⊕ V_c`, scaled by `p^k`.
    pub fn adapted_lattices(&self, count: usize) -> Vec<PadicModule> {
        let (Some(plus), Some(rest)) = (self.plus_space(), self.contracting_space()) else { return Vec::new() };
        let z = PadicModule::standard(self.p, self.dim, 0);
        let l = z.intersect(&self.subspace_module(&plus)).sum(&z.intersect(&self.subspace_module(&rest)));
        (0..count as i64).map(|k| l.scale(k)).collect()
    }
}

fn newton_polygon_of_coeffs(p: u64, c: &[Q]) -> NewtonPolygon {
    let d = c.len() - 1;
    if d == 0 {
        return NewtonPolygon { slopes: Vec::new(), zero_roots: 0 };
    }
    let lead = c[d].clone();
    let monic: Vec<Q> = c.iter().map(|x| x / &lead).collect();
    // Companion matrix has this characteristic polynomial.
    let mut comp = linalg::zeros(d, d);
    for i in 1..d {
        comp[i][i - 1] = Q::one();
    }
    for i in 0..d {
        comp[i][d - 1] = -monic[i].clone();
    }
    newton_polygon(p, &comp)
}

pub fn index_p_power(idx: &IndexValue, p: u64) -> Option<u64> {
    let n = idx.as_finite()?;
    let mut e = 0;
    let mut m = n.clone();
    let pb = BigUint::from(p);
    while m > BigUint::one() {
        if (&m % &pb) != BigUint::zero() {
            return None;
        }
        m /= &pb;
        e += 1;
    }
    Some(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn qr(a: i64, b: i64) -> Q {
        Q::new(BigInt::from(a), BigInt::from(b))
    }

    fn z2(k: i64) -> PadicModule {
        PadicModule::standard(2, 1, k)
    }

    #[test]
    fn intersection_and_index_in_dimension_one() {
        assert_eq!(z2(0).intersect(&z2(2)), z2(2));
        assert_eq!(z2(0).index_of(&z2(2)).unwrap(), IndexValue::power(2, 2));
        assert_eq!(z2(0).index_of(&z2(0)).unwrap(), IndexValue::one());
        assert!(z2(2).index_of(&z2(0)).is_err());
    }

    #[test]
    fn image_and_preimage_of_halving() {
        let sys = PadicSystem::new(2, vec![vec![qr(1, 2)]]).unwrap();
        assert_eq!(sys.image(&z2(0)), z2(-1));
        assert_eq!(sys.preimage(&z2(0)), z2(1));
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = PadicModule::new(2, 2, &[], &[vec![q(1), q(1)], vec![q(0), q(2)]]);
        let b = PadicModule::new(2, 2, &[], &[vec![q(3), q(1)], vec![q(2), q(4)], vec![q(1), qr(5, 3)]]);
        assert_eq!(a, b);
        assert_eq!(PadicModule::standard(2, 2, 0).index_of(&a).unwrap(), IndexValue::power(2, 1));
    }

    #[test]
    fn singular_preimage_contains_kernel() {
        let sys = PadicSystem::new(2, vec![vec![qr(1, 2), q(0)], vec![q(0), q(0)]]).unwrap();
        let pre = sys.preimage(&PadicModule::standard(2, 2, 0));
        assert_eq!(pre.subspace_dim(), 1);
        assert!(pre.contains(&sys.kernel()));
        let u = PadicModule::standard(2, 2, 0);
        let m1 = u.intersect(&pre);
        assert_eq!(u.index_of(&m1).unwrap(), IndexValue::power(2, 1));
    }

    #[test]
    fn newton_polygon_examples() {
        let half = newton_polygon(2, &vec![vec![qr(1, 2)]]);
        assert_eq!(half.slopes, vec![(BigRational::from_integer((-1).into()), 1)]);
        assert_eq!(half.entropy_exponent(), 1);
        let mixed = newton_polygon(2, &vec![vec![q(2), q(0)], vec![q(0), qr(1, 2)]]);
        assert_eq!(mixed.slopes.len(), 2);
        assert_eq!(mixed.entropy_exponent(), 1);
        let id = newton_polygon(2, &linalg::identity(3));
        assert_eq!(id.slopes, vec![(BigRational::zero(), 3)]);
        assert_eq!(id.entropy_exponent(), 0);
        let sing = newton_polygon(2, &vec![vec![qr(1, 2), q(0)], vec![q(0), q(0)]]);
        assert_eq!(sing.zero_roots, 1);
        assert_eq!(sing.entropy_exponent(), 1);
    }

    #[test]
    fn spectral_subspaces_of_mixed_diagonal() {
        let sys = PadicSystem::new(2, vec![vec![q(2), q(0)], vec![q(0), qr(1, 2)]]).unwrap();
        let plus = sys.plus_space().unwrap();
        assert_eq!(rref(&plus, 2).0, vec![vec![q(0), q(1)]]);
        let minus = sys.minus_space().unwrap();
        assert_eq!(rref(&minus, 2).0, vec![vec![q(1), q(0)]]);
    }
}
