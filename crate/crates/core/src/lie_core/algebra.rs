//! Chevalley basis, brackets and derived subspaces.
//!
//! Basis order: `e_α` for the positive roots (in root-system order), then
//! `e_{−α}` in the same order, then the simple coroots `h_1..h_r`.
//!
//! Sign convention: for every positive non-simple root `ξ` the extraspecial
//! pair `(γ, δ)` takes `γ` minimal (in root order) with `ξ − γ` positive and
//! `N_{γ,δ} = +(p+1)`. All other constants follow from Carter's relations,
//! together with `N_{−α,−β} = −N_{α,β}` and `[e_α, e_{−α}] = h_α`.

use super::linalg::{q, QMatrix, SparseVec, Subspace, Q};
use super::roots::{build_root_system, LieType, Root, RootSystem};
use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AlgebraId {
    pub lie_type: LieType,
    pub rank: usize,
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.lie_type, self.rank)
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub root_system: RootSystem,
    dim: usize,
    /// Nonzero brackets of basis vectors, `table[i*dim + j]`.
    table: Vec<Vec<(u32, i64)>>,
    /// `N_{α,β}` for all ordered pairs of roots with `α+β` a root.
    consts: HashMap<(u32, u32), i64>,
}

/// An exact element of a Chevalley-basis Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub alg: AlgebraId,
    pub coeffs: SparseVec,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn scale(&self, c: &Q) -> Element {
        Element { alg: self.alg, coeffs: self.coeffs.scale(c) }
    }

    pub fn add(&self, o: &Element) -> Result<Element> {
        same(self, o)?;
        Ok(Element { alg: self.alg, coeffs: self.coeffs.add(&o.coeffs) })
    }

    pub fn sub(&self, o: &Element) -> Result<Element> {
        same(self, o)?;
        Ok(Element { alg: self.alg, coeffs: self.coeffs.sub(&o.coeffs) })
    }
}

fn same(a: &Element, b: &Element) -> Result<()> {
    if a.alg != b.alg {
        return Err(Error::AlgebraMismatch(a.alg.to_string(), b.alg.to_string()));
    }
    Ok(())
}

pub fn chevalley_basis(rs: RootSystem) -> LieAlgebra {
    let n = rs.num_positive();
    let r = rs.rank;
    let nroots = rs.len();
    let dim = nroots + r;
    let consts = structure_constants(&rs);

    let mut table = vec![Vec::new(); dim * dim];
    for i in 0..nroots {
        for j in 0..nroots {
            let s = rs.root(i).add(rs.root(j));
            let entry = if s.is_zero() {
                coroot_coeffs(&rs, i)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| *c != 0)
                    .map(|(k, c)| ((nroots + k) as u32, c))
                    .collect()
            } else if let Some(k) = rs.index_of(&s) {
                vec![(k as u32, consts[&(i as u32, j as u32)])]
            } else {
                Vec::new()
            };
            table[i * dim + j] = entry;
        }
        for k in 0..r {
            let c = rs.root(i).pairing(&rs.simple_roots[k]);
            if c != 0 {
                table[(nroots + k) * dim + i] = vec![(i as u32, c)];
                table[i * dim + nroots + k] = vec![(i as u32, -c)];
            }
        }
    }
    debug_assert!(n * 2 == nroots);
    LieAlgebra { root_system: rs, dim, table, consts }
}

/// Coefficients of `h_α` in the simple coroots:
/// `α^∨ = Σ (α_i,α_i)/(α,α) · k_i α_i^∨` where `α = Σ k_i α_i`.
fn coroot_coeffs(rs: &RootSystem, i: usize) -> Vec<i64> {
    let a = rs.root(i);
    let na = a.norm2x4();
    rs.coefficients(i)
        .iter()
        .zip(&rs.simple_roots)
        .map(|(&k, s)| {
            let num = s.norm2x4() * k as i64;
            debug_assert!(num % na == 0);
            num / na
        })
        .collect()
}

fn structure_constants(rs: &RootSystem) -> HashMap<(u32, u32), i64> {
    let npos = rs.num_positive();
    let norm = |i: usize| rs.root(i).norm2x4();
    // positive pairs, filled in order of increasing height of the sum
    let mut pos: HashMap<(usize, usize), i64> = HashMap::new();

    let mut by_sum: Vec<Vec<(usize, usize)>> = vec![Vec::new(); npos];
    for a in 0..npos {
        for b in 0..npos {
            if let Some(s) = rs.index_of(&rs.root(a).add(rs.root(b))) {
                by_sum[s].push((a, b));
            }
        }
    }

    // N for arbitrary roots, valid once every positive pair with smaller
    // sum height is known.
    fn general(rs: &RootSystem, pos: &HashMap<(usize, usize), i64>, a: usize, b: usize) -> Ratio<i64> {
        let npos = rs.num_positive();
        let norm = |i: usize| rs.root(i).norm2x4();
        let pa = a < npos;
        let pb = b < npos;
        match (pa, pb) {
            (true, true) => Ratio::from_integer(pos[&(a, b)]),
            (false, false) => -Ratio::from_integer(pos[&(rs.neg_index(a), rs.neg_index(b))]),
            (false, true) => -general(rs, pos, b, a),
            (true, false) => {
                let c = rs.index_of(&rs.root(a).add(rs.root(b)).neg()).expect("a+b must be a root");
                if c < npos {
                    // N_{a,b}/|c|² = N_{c,a}/|b|²
                    Ratio::new(norm(c), norm(b)) * Ratio::from_integer(pos[&(c, a)])
                } else {
                    // N_{a,b}/|c|² = N_{b,c}/|a|²
                    Ratio::new(norm(c), norm(a)) * general(rs, pos, b, c)
                }
            }
        }
    }

    for xi in 0..npos {
        let pairs = &by_sum[xi];
        if pairs.is_empty() {
            continue;
        }
        let &(g, d) = pairs.iter().min_by_key(|(a, _)| *a).unwrap();
        let (gr, dr) = (rs.root(g), rs.root(d));
        let mut p = 0;
        while rs.contains(&dr.sub(&gr.scaled(p + 1))) {
            p += 1;
        }
        let ngd = (p + 1) as i64;
        pos.insert((g, d), ngd);
        pos.insert((d, g), -ngd);
        for &(a, b) in pairs {
            if a > b || a == g {
                continue;
            }
            let (ar, br) = (rs.root(a), rs.root(b));
            let mut total = Ratio::from_integer(0i64);
            if let Some(bg) = rs.index_of(&br.sub(gr)) {
                let t = general(rs, &pos, b, rs.neg_index(g)) * general(rs, &pos, a, rs.neg_index(d));
                total += t / Ratio::from_integer(norm(bg));
            }
            if let Some(ag) = rs.index_of(&ar.sub(gr)) {
                let t = general(rs, &pos, rs.neg_index(g), a) * general(rs, &pos, b, rs.neg_index(d));
                total += t / Ratio::from_integer(norm(ag));
            }
            let v = total * Ratio::from_integer(norm(xi)) / Ratio::from_integer(ngd);
            assert!(v.is_integer(), "non-integral structure constant");
            let v = v.to_integer();
            pos.insert((a, b), v);
            pos.insert((b, a), -v);
        }
    }

    let mut out = HashMap::new();
    let nroots = rs.len();
    for a in 0..nroots {
        for b in 0..nroots {
            let s = rs.root(a).add(rs.root(b));
            if !s.is_zero() && rs.contains(&s) {
                let v = general(rs, &pos, a, b);
                assert!(v.is_integer());
                out.insert((a as u32, b as u32), v.to_integer());
            }
        }
    }
    out
}

impl LieAlgebra {
    pub fn new(lie_type: LieType, rank: usize) -> Result<LieAlgebra> {
        Ok(chevalley_basis(build_root_system(lie_type, rank)?))
    }

    pub fn id(&self) -> AlgebraId {
        AlgebraId { lie_type: self.root_system.lie_type, rank: self.root_system.rank }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank
    }

    pub fn num_roots(&self) -> usize {
        self.root_system.len()
    }

    pub fn is_cartan_index(&self, i: usize) -> bool {
        i >= self.num_roots()
    }

    /// `N_{α,β}` for root indices with `α+β` a root.
    pub fn structure_constant(&self, a: usize, b: usize) -> Option<i64> {
        self.consts.get(&(a as u32, b as u32)).copied()
    }

    /// All `(α, β, N_{α,β})` with `α < β` in root order.
    pub fn structure_triples(&self) -> Vec<(usize, usize, usize, i64)> {
        let rs = &self.root_system;
        let mut v: Vec<(usize, usize, usize, i64)> = self
            .consts
            .iter()
            .filter(|((a, b), _)| a < b)
            .map(|(&(a, b), &n)| {
                let s = rs.index_of(&rs.root(a as usize).add(rs.root(b as usize))).unwrap();
                (a as usize, b as usize, s, n)
            })
            .collect();
        v.sort();
        v
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(u32, i64)] {
        &self.table[i * self.dim + j]
    }

    pub fn basis(&self, i: usize) -> Element {
        Element { alg: self.id(), coeffs: SparseVec::unit(i) }
    }

    pub fn zero(&self) -> Element {
        Element { alg: self.id(), coeffs: SparseVec::zero() }
    }

    pub fn element(&self, coeffs: SparseVec) -> Element {
        Element { alg: self.id(), coeffs }
    }

    /// Root vector `u_φ`.
    pub fn root_vector(&self, r: &Root) -> Option<Element> {
        self.root_system.index_of(r).map(|i| self.basis(i))
    }

    /// Cartan element `h_φ = [u_φ, u_{−φ}]`.
    pub fn coroot(&self, r: &Root) -> Option<Element> {
        let i = self.root_system.index_of(r)?;
        let nroots = self.num_roots();
        Some(self.element(SparseVec::from_pairs(
            coroot_coeffs(&self.root_system, i).into_iter().enumerate().map(|(k, c)| (nroots + k, q(c))),
        )))
    }

    pub fn basis_label(&self, i: usize) -> String {
        if i < self.num_roots() {
            format!("u[{}]", self.root_system.root(i))
        } else {
            format!("h{}", i - self.num_roots() + 1)
        }
    }

    pub fn format_element(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (i, c)) in x.coeffs.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            if c.is_one() {
                s.push_str(&self.basis_label(i));
            } else {
                s.push_str(&format!("({c})*{}", self.basis_label(i)));
            }
        }
        s
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if x.alg != self.id() {
            return Err(Error::AlgebraMismatch(x.alg.to_string(), self.id().to_string()));
        }
        Ok(())
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        same(x, y)?;
        self.check(x)?;
        Ok(self.element(self.bracket_vec(&x.coeffs, &y.coeffs)))
    }

    pub fn bracket_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let entries = self.basis_bracket(i, j);
                if entries.is_empty() {
                    continue;
                }
                let ab = a * b;
                for &(k, n) in entries {
                    *acc.entry(k as usize).or_insert_with(Q::zero) += &ab * q(n);
                }
            }
        }
        SparseVec::from_pairs(acc)
    }

    /// `ad_x` applied to the basis vector `e_j`.
    pub fn ad_column(&self, x: &SparseVec, j: usize) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, a) in x.iter() {
            for &(k, n) in self.basis_bracket(i, j) {
                *acc.entry(k as usize).or_insert_with(Q::zero) += a * q(n);
            }
        }
        SparseVec::from_pairs(acc)
    }

    /// Columns of `ad_x` (sparse).
    pub fn ad_columns(&self, x: &Element) -> Vec<SparseVec> {
        (0..self.dim).map(|j| self.ad_column(&x.coeffs, j)).collect()
    }

    /// Rows of `ad_x` (sparse), i.e. the functionals `y ↦ [x,y]_i`.
    pub fn ad_rows(&self, x: &Element) -> Vec<SparseVec> {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.dim];
        for (j, col) in self.ad_columns(x).into_iter().enumerate() {
            for (i, v) in col.iter() {
                rows[i].push((j, v.clone()));
            }
        }
        rows.into_iter().map(SparseVec::from_pairs).collect()
    }

    pub fn ad_matrix(&self, x: &Element) -> QMatrix {
        QMatrix::from_columns(self.dim, &self.ad_columns(x))
    }

    pub fn image_of_ad(&self, u: &Element) -> Subspace {
        Subspace::span(self.dim, &self.ad_columns(u))
    }

    pub fn centralizer(&self, gens: &[Element]) -> Result<Subspace> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let mut rows = Vec::new();
        for g in gens {
            self.check(g)?;
            rows.extend(self.ad_rows(g));
        }
        Ok(Subspace::kernel_of_rows(self.dim, &rows))
    }

    /// `(X, U, V)` with `U = u_φ`, `V = u_{−φ}`, `X = [U, V]`.
    pub fn sl2_triple_for_root(&self, phi: &Root) -> Option<(Element, Element, Element)> {
        let u = self.root_vector(phi)?;
        let v = self.root_vector(&phi.neg())?;
        let x = self.bracket(&u, &v).ok()?;
        Some((x, u, v))
    }

    /// Smallest `k ≥ 1` with `ad_x^k = 0`, if any.
    pub fn nilpotency_index(&self, x: &Element) -> Option<usize> {
        let cols = self.ad_columns(x);
        let mut cur: Vec<SparseVec> = cols.clone();
        for k in 1..=self.dim {
            if cur.iter().all(SparseVec::is_zero) {
                return Some(k);
            }
            cur = cur.iter().map(|c| self.bracket_vec(&x.coeffs, c)).collect();
        }
        None
    }

    pub fn is_ad_nilpotent(&self, x: &Element) -> bool {
        self.nilpotency_index(x).is_some()
    }

    /// Cartan part of `x` as a linear functional value on each root: the
    /// eigenvalue of `ad_x` on `e_α` when `x` lies in the Cartan.
    pub fn cartan_eigenvalue(&self, x: &Element, root_index: usize) -> Q {
        let nroots = self.num_roots();
        let r = self.root_system.root(root_index);
        let mut s = Q::zero();
        for (i, c) in x.coeffs.iter() {
            debug_assert!(i >= nroots);
            s += c * q(r.pairing(&self.root_system.simple_roots[i - nroots]));
        }
        s
    }

    pub fn is_cartan(&self, x: &Element) -> bool {
        x.coeffs.iter().all(|(i, _)| i >= self.num_roots())
    }

    /// Cartan subalgebra as a subspace.
    pub fn cartan(&self) -> Subspace {
        let n = self.num_roots();
        Subspace::span(self.dim, &(n..self.dim).map(SparseVec::unit).collect::<Vec<_>>())
    }

    /// Subspace spanned by a set of basis indices.
    pub fn span_of_basis(&self, idx: &[usize]) -> Subspace {
        Subspace::span(self.dim, &idx.iter().map(|&i| SparseVec::unit(i)).collect::<Vec<_>>())
    }

    pub fn span_of(&self, xs: &[Element]) -> Subspace {
        Subspace::span(self.dim, xs.iter().map(|x| &x.coeffs))
    }
}

/// Integer Jacobiator of three basis vectors (zero iff Jacobi holds).
pub fn basis_jacobiator(alg: &LieAlgebra, i: usize, j: usize, k: usize) -> BTreeMap<usize, i64> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    let mut nest = |a: usize, b: usize, c: usize| {
        for &(m, n1) in alg.basis_bracket(b, c) {
            for &(t, n2) in alg.basis_bracket(a, m as usize) {
                *acc.entry(t as usize).or_insert(0) += n1 * n2;
            }
        }
    };
    nest(i, j, k);
    nest(j, k, i);
    nest(k, i, j);
    acc.retain(|_, v| *v != 0);
    acc
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations() {
        let g = LieAlgebra::new(LieType::A, 1).unwrap();
        let u = g.basis(0);
        let v = g.basis(1);
        let x = g.basis(2);
        assert_eq!(g.bracket(&x, &u).unwrap(), u.scale(&q(2)));
        assert_eq!(g.bracket(&x, &v).unwrap(), v.scale(&q(-2)));
        assert_eq!(g.bracket(&u, &v).unwrap(), x);
    }

    #[test]
    fn jacobi_small() {
        for (t, n) in [(LieType::A, 3), (LieType::B, 3), (LieType::C, 3), (LieType::G, 2)] {
            let g = LieAlgebra::new(t, n).unwrap();
            for i in 0..g.dim() {
                for j in 0..g.dim() {
                    for k in 0..g.dim() {
                        assert!(basis_jacobiator(&g, i, j, k).is_empty(), "{t}{n} {i} {j} {k}");
                    }
                }
            }
        }
    }
}
