//! Root systems in L-coordinates.
//!
//! Coordinates are stored doubled (`2·c_i`) so that the half-integral roots of
//! E- and F-types stay integral. The exposed coordinates are `c_i/2`.
//!
//! Presentations (Bourbaki):
//! - `A_n`: `L_i − L_j` on `n+1` coordinates.
//! - `B_n`: `±L_i ± L_j`, `±L_i`.  `C_n`: `±L_i ± L_j`, `±2L_i`.  `D_n`: `±L_i ± L_j`.
//! - `E_8`: `±L_i ± L_j` and `½Σ ±L_i` with an even number of minus signs.
//!   `E_7`/`E_6` are spanned by the first 7/6 E8 simple roots; they live in the
//!   same 8 coordinates (`E_7 ⟂ L_7+L_8`, `E_6 ⟂ L_7+L_8, L_6+L_8`).
//! - `F_4`: `±L_i`, `±L_i ± L_j`, `½(±L_1 ± L_2 ± L_3 ± L_4)`.
//! - `G_2`: three coordinates summing to zero, short roots `L_i − L_j`.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl LieType {
    pub fn letter(self) -> char {
        match self {
            LieType::A => 'A',
            LieType::B => 'B',
            LieType::C => 'C',
            LieType::D => 'D',
            LieType::E => 'E',
            LieType::F => 'F',
            LieType::G => 'G',
        }
    }

    pub fn parse(s: &str) -> Option<LieType> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Some(LieType::A),
            "B" => Some(LieType::B),
            "C" => Some(LieType::C),
            "D" => Some(LieType::D),
            "E" => Some(LieType::E),
            "F" => Some(LieType::F),
            "G" => Some(LieType::G),
            _ => None,
        }
    }

    pub fn rank_range(self) -> (usize, usize) {
        match self {
            LieType::A => (1, 8),
            LieType::B | LieType::C | LieType::D => (2, 8),
            LieType::E => (6, 8),
            LieType::F => (4, 4),
            LieType::G => (2, 2),
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A root, stored as doubled L-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub(crate) c2: Vec<i32>,
}

impl Root {
    pub fn from_doubled(c2: Vec<i32>) -> Self {
        Self { c2 }
    }

    /// `Σ coef·L_i` from `(i, coef)` pairs (1-based `i`); coefficients are
    /// given doubled, so `(1, 2)` is `L_1` and `(1, 1)` is `½L_1`.
    pub fn from_terms2(dim: usize, terms: &[(usize, i32)]) -> Self {
        let mut c2 = vec![0; dim];
        for &(i, c) in terms {
            c2[i - 1] += c;
        }
        Self { c2 }
    }

    /// `Σ coef·L_i` with integer coefficients.
    pub fn from_terms(dim: usize, terms: &[(usize, i32)]) -> Self {
        let t: Vec<(usize, i32)> = terms.iter().map(|&(i, c)| (i, 2 * c)).collect();
        Self::from_terms2(dim, &t)
    }

    pub fn doubled(&self) -> &[i32] {
        &self.c2
    }

    pub fn coords(&self) -> Vec<Ratio<i64>> {
        self.c2.iter().map(|&c| Ratio::new(c as i64, 2)).collect()
    }

    /// Coefficient of `L_i` (1-based), doubled.
    pub fn coef2(&self, i: usize) -> i32 {
        self.c2.get(i - 1).copied().unwrap_or(0)
    }

    pub fn ambient_dim(&self) -> usize {
        self.c2.len()
    }

    /// `4·(self, self)`.
    pub fn norm2x4(&self) -> i64 {
        self.c2.iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    /// `4·(self, other)`.
    pub fn inner4(&self, other: &Root) -> i64 {
        self.c2.iter().zip(&other.c2).map(|(&a, &b)| a as i64 * b as i64).sum()
    }

    /// `(self, self)` as a rational.
    pub fn norm2(&self) -> Ratio<i64> {
        Ratio::new(self.norm2x4(), 4)
    }

    /// Cartan integer `⟨self, alpha^∨⟩ = 2(self, alpha)/(alpha, alpha)`.
    pub fn pairing(&self, alpha: &Root) -> i64 {
        let num = 2 * self.inner4(alpha);
        let den = alpha.norm2x4();
        debug_assert!(num % den == 0, "non-integral Cartan pairing");
        num / den
    }

    pub fn neg(&self) -> Root {
        Root { c2: self.c2.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, o: &Root) -> Root {
        Root { c2: self.c2.iter().zip(&o.c2).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Root) -> Root {
        Root { c2: self.c2.iter().zip(&o.c2).map(|(a, b)| a - b).collect() }
    }

    pub fn scaled(&self, k: i32) -> Root {
        Root { c2: self.c2.iter().map(|c| c * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.c2.iter().all(|&c| c == 0)
    }

    /// Reflection `s_alpha(self)`.
    pub fn reflect(&self, alpha: &Root) -> Root {
        let k = self.pairing(alpha) as i32;
        self.sub(&alpha.scaled(k))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz: Vec<(usize, i32)> =
            self.c2.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i + 1, c)).collect();
        if nz.is_empty() {
            return write!(f, "0");
        }
        let half = nz.iter().all(|(_, c)| c.abs() == 1);
        if half {
            write!(f, "1/2(")?;
            for (k, (i, c)) in nz.iter().enumerate() {
                let sign = if *c < 0 {
                    "-"
                } else if k > 0 {
                    "+"
                } else {
                    ""
                };
                write!(f, "{sign}L{i}")?;
            }
            return write!(f, ")");
        }
        for (k, (i, c)) in nz.iter().enumerate() {
            let sign = if *c < 0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            let mag = c.abs();
            if mag % 2 != 0 {
                write!(f, "{sign}{mag}/2L{i}")?;
            } else if mag == 2 {
                write!(f, "{sign}L{i}")?;
            } else {
                write!(f, "{sign}{}L{i}", mag / 2)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthClass {
    Long,
    Short,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub lie_type: LieType,
    pub rank: usize,
    pub ambient_dim: usize,
    pub simple_roots: Vec<Root>,
    /// Positive roots first (ordered by height, then coefficient vector),
    /// then their negatives in the same order.
    roots: Vec<Root>,
    /// Simple-root coefficients, parallel to `roots`.
    coeffs: Vec<Vec<i32>>,
    index: HashMap<Root, usize>,
}

impl RootSystem {
    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn coefficients(&self, i: usize) -> &[i32] {
        &self.coeffs[i]
    }

    pub fn height(&self, i: usize) -> i32 {
        self.coeffs[i].iter().sum()
    }

    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive()
    }

    pub fn neg_index(&self, i: usize) -> usize {
        let n = self.num_positive();
        if i < n {
            i + n
        } else {
            i - n
        }
    }

    pub fn max_norm2x4(&self) -> i64 {
        self.roots.iter().map(Root::norm2x4).max().unwrap_or(0)
    }

    pub fn length_class(&self, i: usize) -> LengthClass {
        if self.roots[i].norm2x4() == self.max_norm2x4() {
            LengthClass::Long
        } else {
            LengthClass::Short
        }
    }

    /// Builds a root from integer `L`-coefficients and checks membership.
    pub fn root_from_terms(&self, terms: &[(usize, i32)]) -> Option<Root> {
        if terms.iter().any(|&(i, _)| i == 0 || i > self.ambient_dim) {
            return None;
        }
        let r = Root::from_terms(self.ambient_dim, terms);
        self.contains(&r).then_some(r)
    }

    pub fn tag(&self) -> String {
        format!("{}{}", self.lie_type, self.rank)
    }
}

fn simple_roots(t: LieType, n: usize) -> (usize, Vec<Root>) {
    let l = |dim: usize, terms: &[(usize, i32)]| Root::from_terms(dim, terms);
    match t {
        LieType::A => {
            let d = n + 1;
            (d, (1..=n).map(|i| l(d, &[(i, 1), (i + 1, -1)])).collect())
        }
        LieType::B | LieType::C | LieType::D => {
            let mut s: Vec<Root> = (1..n).map(|i| l(n, &[(i, 1), (i + 1, -1)])).collect();
            s.push(match t {
                LieType::B => l(n, &[(n, 1)]),
                LieType::C => l(n, &[(n, 2)]),
                _ => l(n, &[(n - 1, 1), (n, 1)]),
            });
            (n, s)
        }
        LieType::E => {
            let mut s = vec![
                Root::from_terms2(8, &[(1, 1), (2, -1), (3, -1), (4, -1), (5, -1), (6, -1), (7, -1), (8, 1)]),
                l(8, &[(1, 1), (2, 1)]),
            ];
            for i in 1..=6 {
                s.push(l(8, &[(i + 1, 1), (i, -1)]));
            }
            s.truncate(n);
            (8, s)
        }
        LieType::F => (
            4,
            vec![
                l(4, &[(2, 1), (3, -1)]),
                l(4, &[(3, 1), (4, -1)]),
                l(4, &[(4, 1)]),
                Root::from_terms2(4, &[(1, 1), (2, -1), (3, -1), (4, -1)]),
            ],
        ),
        LieType::G => (3, vec![l(3, &[(1, 1), (2, -1)]), l(3, &[(1, -2), (2, 1), (3, 1)])]),
    }
}

/// Builds the root system of `(lie_type, rank)` by closing the simple roots
/// under root strings.
pub fn build_root_system(lie_type: LieType, rank: usize) -> Result<RootSystem> {
    let (lo, hi) = lie_type.rank_range();
    if rank < lo || rank > hi {
        return Err(Error::Unsupported(lie_type.letter(), rank, format!("supported ranks are {lo}..={hi}")));
    }
    let (ambient_dim, simple) = simple_roots(lie_type, rank);
    let r = simple.len();

    let mut pos: Vec<(Root, Vec<i32>)> = Vec::new();
    let mut seen: HashSet<Root> = HashSet::new();
    let mut layer: Vec<(Root, Vec<i32>)> = Vec::new();
    for (i, a) in simple.iter().enumerate() {
        let mut c = vec![0; r];
        c[i] = 1;
        seen.insert(a.clone());
        layer.push((a.clone(), c));
    }
    while !layer.is_empty() {
        layer.sort_by(|a, b| a.1.cmp(&b.1));
        let mut next: Vec<(Root, Vec<i32>)> = Vec::new();
        for (beta, c) in &layer {
            for (i, a) in simple.iter().enumerate() {
                let mut p = 0;
                let mut down = beta.sub(a);
                while seen.contains(&down) {
                    p += 1;
                    down = down.sub(a);
                }
                let q = p - beta.pairing(a);
                if q > 0 {
                    let up = beta.add(a);
                    if seen.insert(up.clone()) {
                        let mut c2 = c.clone();
                        c2[i] += 1;
                        next.push((up, c2));
                    }
                }
            }
        }
        pos.append(&mut layer);
        layer = next;
    }
    pos.sort_by(|a, b| {
        let ha: i32 = a.1.iter().sum();
        let hb: i32 = b.1.iter().sum();
        ha.cmp(&hb).then_with(|| a.1.cmp(&b.1))
    });

    let mut roots: Vec<Root> = pos.iter().map(|(x, _)| x.clone()).collect();
    let mut coeffs: Vec<Vec<i32>> = pos.iter().map(|(_, c)| c.clone()).collect();
    for (x, c) in &pos {
        roots.push(x.neg());
        coeffs.push(c.iter().map(|v| -v).collect());
    }
    let index = roots.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    Ok(RootSystem { lie_type, rank, ambient_dim, simple_roots: simple, roots, coeffs, index })
}
