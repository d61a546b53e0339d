//! Eigenspaces of `ad_X` and Jordan chains of nilpotent matrices.

use super::algebra::{to_f64, Element, LieAlgebra};
use super::linalg::{q, QMatrix, SparseVec, Subspace, Q};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Dense polynomial over `Q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    fn trim(mut v: Vec<Q>) -> Poly {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        Poly(v)
    }

    pub fn one() -> Poly {
        Poly(vec![Q::one()])
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn monic(&self) -> Poly {
        match self.0.last() {
            Some(l) => {
                let inv = l.recip();
                Poly(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::trim(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut v = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::trim(v)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::trim(
            (0..n)
                .map(|i| self.0.get(i).cloned().unwrap_or_else(Q::zero) - o.0.get(i).cloned().unwrap_or_else(Q::zero))
                .collect(),
        )
    }

    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dl = d.0.last().unwrap().clone();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly(vec![]), self.clone());
        }
        let mut quo = vec![Q::zero(); self.degree() - dd + 1];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (Poly::trim(quo), Poly::trim(r))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divmod(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_matrix(&self, a: &QMatrix) -> QMatrix {
        let mut acc = QMatrix::zeros(a.rows, a.cols);
        for c in self.0.iter().rev() {
            acc = acc.mul(a).add(&QMatrix::identity(a.rows).scale(c));
        }
        acc
    }

    /// Square-free decomposition (Yun): `(multiplicity, factor)` pairs.
    pub fn squarefree_decomposition(&self) -> Vec<(usize, Poly)> {
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divmod(&a0).0;
        let c = df.divmod(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            let nb = b.divmod(&a).0;
            let nc = d.divmod(&a).0;
            d = nc.sub(&nb.derivative());
            if a.degree() > 0 {
                out.push((i, a));
            }
            b = nb;
            i += 1;
        }
        out
    }
}

/// Minimal polynomial of `a` by Krylov sequences of the standard basis.
pub fn minimal_polynomial(a: &QMatrix) -> Poly {
    let n = a.rows;
    let mut m = Poly::one();
    for j in 0..n {
        let pj = local_minpoly(a, SparseVec::unit(j).to_dense(n));
        let g = m.gcd(&pj);
        m = m.mul(&pj).divmod(&g).0.monic();
    }
    m
}

fn local_minpoly(a: &QMatrix, v: Vec<Q>) -> Poly {
    let n = a.rows;
    let width = 2 * n + 1;
    let mut krylov = Subspace::zero(width);
    let mut cur = v;
    for k in 0..=n {
        let mut pairs: Vec<(usize, Q)> =
            cur.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        pairs.push((n + k, Q::one()));
        let row = SparseVec::from_pairs(pairs);
        let red = krylov.reduce(&row);
        if red.leading().is_none_or(|(p, _)| p >= n) {
            let coeffs: Vec<Q> = (0..=k).map(|i| red.get(n + i).cloned().unwrap_or_else(Q::zero)).collect();
            return Poly::trim(coeffs).monic();
        }
        krylov.insert(row);
        cur = a.mul_vec(&cur);
    }
    unreachable!("Krylov sequence exceeded dimension")
}

fn durand_kerner(monic: &[f64]) -> Vec<Complex64> {
    let deg = monic.len() - 1;
    let mut z: Vec<Complex64> = (0..deg).map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1)).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

/// Best rational approximation with denominator ≤ `max_den` (continued fractions).
pub fn rationalize(x: f64, max_den: i64) -> Q {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.saturating_mul(h1).saturating_add(h0), a.saturating_mul(k1).saturating_add(k0));
        if k2 > max_den || k2 <= 0 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    Q::new(BigInt::from(h1), BigInt::from(k1.max(1)))
}

/// Exact rational roots of a square-free polynomial, if all roots are rational.
pub fn rational_roots(p: &Poly) -> Result<Vec<Q>> {
    let m = p.monic();
    let deg = m.degree();
    if deg == 0 {
        return Ok(vec![]);
    }
    let f: Vec<f64> = m.0.iter().map(to_f64).collect();
    let mut found: Vec<Q> = Vec::new();
    for z in durand_kerner(&f) {
        if z.im.abs() > 1e-6 {
            return Err(Error::IrrationalSpectrum);
        }
        let r = rationalize(z.re, 1_000_000);
        if m.eval(&r).is_zero() && !found.contains(&r) {
            found.push(r);
        }
    }
    if found.len() != deg {
        return Err(Error::IrrationalSpectrum);
    }
    found.sort();
    Ok(found)
}

/// Eigenspace decomposition of `ad_X`.
pub fn eigenspace_decomposition(alg: &LieAlgebra, x: &Element) -> Result<BTreeMap<Q, Subspace>> {
    alg.check(x)?;
    let dim = alg.dim();
    if alg.is_cartan(x) {
        let mut groups: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
        for i in 0..alg.num_roots() {
            groups.entry(alg.cartan_eigenvalue(x, i)).or_default().push(i);
        }
        groups.entry(Q::zero()).or_default().extend(alg.num_roots()..dim);
        return Ok(groups.into_iter().map(|(k, v)| (k, alg.span_of_basis(&v))).collect());
    }
    let a = alg.ad_matrix(x);
    eigenspaces_of_matrix(&a)
}

pub fn eigenspaces_of_matrix(a: &QMatrix) -> Result<BTreeMap<Q, Subspace>> {
    let m = minimal_polynomial(a);
    debug_assert!(m.eval_matrix(a).is_zero());
    let parts = m.squarefree_decomposition();
    if let Some(&(k, _)) = parts.iter().max_by_key(|(k, _)| *k) {
        if k > 1 {
            return Err(Error::NotSemisimple(k));
        }
    }
    let mut out = BTreeMap::new();
    for r in rational_roots(&m)? {
        let shifted = a.sub(&QMatrix::identity(a.rows).scale(&r));
        out.insert(r, shifted.kernel());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct JordanChains {
    /// Block sizes, descending.
    pub blocks: Vec<usize>,
    /// Per chain, `e_1..e_m` with `N e_1 = 0` and `N e_i = e_{i−1}`.
    pub chains: Vec<Vec<Vec<Q>>>,
    /// Columns are the chain vectors, chain by chain.
    pub p: QMatrix,
}

impl JordanChains {
    /// Start offset of each chain inside the columns of `p`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut s = 0;
        for &b in &self.blocks {
            off.push(s);
            s += b;
        }
        off
    }

    /// The Jordan form `J` in the chain basis (ones on the superdiagonal of each block).
    pub fn jordan_matrix(&self) -> QMatrix {
        let n = self.p.rows;
        let mut j = QMatrix::zeros(n, n);
        for (o, &b) in self.offsets().iter().zip(&self.blocks) {
            for i in 1..b {
                j[(o + i - 1, o + i)] = Q::one();
            }
        }
        j
    }
}

pub fn jordan_chains(n_mat: &QMatrix) -> Result<JordanChains> {
    if !n_mat.is_square() {
        return Err(Error::Shape("square matrix expected".into()));
    }
    let n = n_mat.rows;
    let mut powers = vec![QMatrix::identity(n)];
    while !powers.last().unwrap().is_zero() {
        if powers.len() > n {
            return Err(Error::NotNilpotent);
        }
        let next = powers.last().unwrap().mul(n_mat);
        powers.push(next);
    }
    let m = powers.len() - 1;
    let kernels: Vec<Subspace> = powers.iter().map(QMatrix::kernel).collect();

    let mut tops: Vec<(Vec<Q>, usize)> = Vec::new();
    for k in (1..=m).rev() {
        let mut s = kernels[k - 1].clone();
        for (top, len) in &tops {
            if *len > k {
                let v = powers[len - k].mul_vec(top);
                s.insert(SparseVec::from_dense(&v));
            }
        }
        for row in kernels[k].rows() {
            if s.insert(row.clone()) {
                tops.push((row.to_dense(n), k));
            }
        }
    }

    let mut chains = Vec::new();
    let mut blocks = Vec::new();
    let mut cols: Vec<SparseVec> = Vec::new();
    for (top, len) in tops {
        let mut chain = vec![top];
        for _ in 1..len {
            let next = n_mat.mul_vec(chain.last().unwrap());
            chain.push(next);
        }
        chain.reverse();
        cols.extend(chain.iter().map(|v| SparseVec::from_dense(v)));
        blocks.push(len);
        chains.push(chain);
    }
    let p = QMatrix::from_columns(n, &cols);
    Ok(JordanChains { blocks, chains, p })
}

/// Block sizes from the rank sequence of powers (oracle for `jordan_chains`).
pub fn block_sizes_from_ranks(n_mat: &QMatrix) -> Vec<usize> {
    let n = n_mat.rows;
    let mut ranks = vec![n];
    let mut pw = QMatrix::identity(n);
    loop {
        pw = pw.mul(n_mat);
        let r = pw.rank();
        ranks.push(r);
        if r == 0 || ranks.len() > n + 1 {
            break;
        }
    }
    // number of blocks of size ≥ k is rank(N^{k-1}) − rank(N^k)
    let ge: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=ge.len()).rev() {
        let exactly = ge[k - 1] - ge.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exactly));
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_block() {
        let n = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let jc = jordan_chains(&n).unwrap();
        assert_eq!(jc.blocks, vec![2]);
        assert_eq!(n.mul(&jc.p), jc.p.mul(&jc.jordan_matrix()));
    }

    #[test]
    fn zero_matrix() {
        let jc = jordan_chains(&QMatrix::zeros(3, 3)).unwrap();
        assert_eq!(jc.blocks, vec![1, 1, 1]);
    }

    #[test]
    fn not_nilpotent() {
        assert_eq!(jordan_chains(&QMatrix::identity(2)).unwrap_err(), Error::NotNilpotent);
    }

    #[test]
    fn yun_multiplicities() {
        // (x-1)^2 (x+2)
        let p = Poly(vec![q(2), q(-3), q(0), q(1)]);
        let d = p.squarefree_decomposition();
        assert_eq!(d.iter().map(|(k, f)| (*k, f.degree())).collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn rational_root_recovery() {
        // (x - 1/2)(x + 3)
        let p = Poly(vec![crate::lie_core::linalg::qf(-3, 2), crate::lie_core::linalg::qf(5, 2), q(1)]);
        assert_eq!(rational_roots(&p).unwrap(), vec![q(-3), crate::lie_core::linalg::qf(1, 2)]);
        // x^2 - 2
        assert!(rational_roots(&Poly(vec![q(-2), q(0), q(1)])).is_err());
    }
}
