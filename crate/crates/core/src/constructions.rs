//! Named objects built on top of a Chevalley basis: the 𝔘/𝔙 families, the
//! split families, the abelian bases 𝒟, the base sl₂ data and the subgroup
//! chains fed to the smoothing lemma.

use crate::error::{Error, Result};
use crate::lie_core::{Element, LieAlgebra, LieType, Root, RootSystem, SparseVec, Subspace};
use serde::Serialize;

/// Number of 𝔘/𝔙 slots.
pub const Q0: usize = 9;

/// How to read the index conditions of the B-type sets 𝔘⁴, 𝔘⁵, 𝔙⁴, 𝔙⁵.
///
/// `Literal` keeps the printed conditions (`j≠3` for 𝔘⁴/𝔘⁵, `j≠2` for
/// 𝔙⁴/𝔙⁵); this lets `L_1+L_2`-type roots with `ad_X`-eigenvalue 0 slip in.
/// `Normalized` uses `j≥3` for all four, which is what the eigenvalue claim
/// needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Transcription {
    Literal,
    Normalized,
}

#[derive(Clone, Debug)]
pub struct UVFamily {
    pub lie_type: LieType,
    pub rank: usize,
    pub mode: Transcription,
    /// Root indices per slot (index 0 is 𝔘¹).
    pub u_sets: Vec<Vec<usize>>,
    pub v_sets: Vec<Vec<usize>>,
}

impl UVFamily {
    pub fn u(&self, eps: usize) -> &[usize] {
        &self.u_sets[eps - 1]
    }

    pub fn v(&self, eps: usize) -> &[usize] {
        &self.v_sets[eps - 1]
    }

    pub fn nonempty_slots(&self) -> Vec<usize> {
        (1..=Q0).filter(|&e| !self.u(e).is_empty() || !self.v(e).is_empty()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SplitUVFamily {
    pub base: UVFamily,
    /// `[slot][0|1]` for 𝔘₁^ε / 𝔘₂^ε.
    pub u_split: Vec<[Vec<usize>; 2]>,
    pub v_split: Vec<[Vec<usize>; 2]>,
}

#[derive(Clone, Debug)]
pub struct AbelianBasis {
    pub lie_type: LieType,
    pub rank: usize,
    pub roots: Vec<usize>,
    pub elements: Vec<Element>,
    pub claimed_cardinality: usize,
    pub formula: &'static str,
}

#[derive(Clone, Debug)]
pub struct BaseSL2Data {
    pub base_root: Root,
    pub x: Element,
    pub u: Element,
    pub v: Element,
    pub theta: Element,
    pub g1_perp: Subspace,
    /// Roots of `E₀ = {u_{L3−L4}, u_{L5−L6}}`; empty when the rank is too small.
    pub e0_roots: Vec<usize>,
    pub e0: Vec<Element>,
}

impl BaseSL2Data {
    pub fn require_e0(&self) -> Result<&[Element]> {
        if self.e0.is_empty() {
            return Err(Error::MissingCoordinate(6));
        }
        Ok(&self.e0)
    }
}

fn index_range(rs: &RootSystem) -> std::ops::RangeInclusive<usize> {
    1..=rs.ambient_dim
}

/// Collects the roots described by integer-coefficient term lists, keeping
/// only those that are roots of `rs`; result sorted by root index.
fn collect(rs: &RootSystem, candidates: impl IntoIterator<Item = Vec<(usize, i32)>>) -> Vec<usize> {
    let mut out: Vec<usize> =
        candidates.into_iter().filter_map(|t| rs.root_from_terms(&t).and_then(|r| rs.index_of(&r))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Same as [`collect`] for doubled coefficients (half-integral roots).
fn collect2(rs: &RootSystem, candidates: impl IntoIterator<Item = Vec<(usize, i32)>>) -> Vec<usize> {
    let mut out: Vec<usize> =
        candidates.into_iter().filter_map(|t| rs.index_of(&Root::from_terms2(rs.ambient_dim, &t))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `{ a·L_i + b·L_j : j in js, j ≠ i }`
fn pair_set(rs: &RootSystem, i: usize, a: i32, b: i32, js: impl Fn(usize) -> bool) -> Vec<usize> {
    collect(rs, index_range(rs).filter(|&j| j != i && js(j)).map(|j| vec![(i, a), (j, b)]))
}

/// All sign patterns over `idx`, as doubled half-coefficients.
fn sign_patterns(idx: &[usize]) -> Vec<Vec<(usize, i32)>> {
    (0..1u32 << idx.len())
        .map(|mask| idx.iter().enumerate().map(|(k, &i)| (i, if mask >> k & 1 == 1 { -1 } else { 1 })).collect())
        .collect()
}

pub fn uv_sets(alg: &LieAlgebra, mode: Transcription) -> Result<UVFamily> {
    let rs = &alg.root_system;
    let t = rs.lie_type;
    if t == LieType::G {
        return Err(Error::Unavailable("no 𝔘/𝔙 sets are defined for G2".into()));
    }
    if rs.ambient_dim < 2 {
        return Err(Error::MissingCoordinate(2));
    }
    let mut u = vec![Vec::new(); Q0];
    let mut v = vec![Vec::new(); Q0];

    if t == LieType::C {
        u[0] = pair_set(rs, 1, 1, -1, |j| j >= 2);
        u[1] = pair_set(rs, 1, 1, 1, |j| j != 2);
        u[2] = collect(rs, [vec![(1, 2)]]);
        v[0] = pair_set(rs, 1, -1, 1, |j| j != 2);
        v[1] = pair_set(rs, 1, -1, -1, |j| j != 2);
        v[2] = collect(rs, [vec![(1, -2)]]);
    } else {
        u[0] = pair_set(rs, 1, 1, -1, |j| j >= 3);
        u[1] = pair_set(rs, 2, -1, 1, |j| j >= 3);
        u[2] = collect(rs, [vec![(1, 1), (2, -1)]]);
        v[0] = pair_set(rs, 1, -1, 1, |j| j >= 3);
        v[1] = pair_set(rs, 2, 1, -1, |j| j >= 3);
        v[2] = collect(rs, [vec![(1, -1), (2, 1)]]);
    }

    if matches!(t, LieType::B | LieType::D | LieType::E | LieType::F) {
        match mode {
            Transcription::Literal => {
                u[3] = pair_set(rs, 1, 1, 1, |j| j != 3);
                u[4] = pair_set(rs, 2, -1, -1, |j| j != 3);
                v[3] = pair_set(rs, 1, -1, -1, |j| j != 2);
                v[4] = pair_set(rs, 2, 1, 1, |j| j != 2);
            }
            Transcription::Normalized => {
                u[3] = pair_set(rs, 1, 1, 1, |j| j >= 3);
                u[4] = pair_set(rs, 2, -1, -1, |j| j >= 3);
                v[3] = pair_set(rs, 1, -1, -1, |j| j >= 3);
                v[4] = pair_set(rs, 2, 1, 1, |j| j >= 3);
            }
        }
    }
    if matches!(t, LieType::B | LieType::F) {
        u[5] = collect(rs, [vec![(1, 1)]]);
        u[6] = collect(rs, [vec![(2, -1)]]);
        v[5] = collect(rs, [vec![(1, -1)]]);
        v[6] = collect(rs, [vec![(2, 1)]]);
    }
    if t == LieType::F {
        let half = |s1: i32, s4: i32| {
            [1, -1].into_iter().map(move |s3| vec![(1, s1), (2, -s1), (3, s3), (4, s4)]).collect::<Vec<_>>()
        };
        u[7] = collect2(rs, half(1, 1));
        u[8] = collect2(rs, half(1, -1));
        v[7] = collect2(rs, half(-1, 1));
        v[8] = collect2(rs, half(-1, -1));
    }
    if t == LieType::E {
        let half = |s8: i32, s1: i32| {
            sign_patterns(&[3, 4, 5, 6, 7])
                .into_iter()
                .map(|mut p| {
                    p.extend([(8, s8), (2, -s1), (1, s1)]);
                    p
                })
                .collect::<Vec<_>>()
        };
        u[5] = collect2(rs, half(1, 1));
        u[6] = collect2(rs, half(-1, 1));
        v[5] = collect2(rs, half(1, -1));
        v[6] = collect2(rs, half(-1, -1));
    }
    Ok(UVFamily { lie_type: t, rank: rs.rank, mode, u_sets: u, v_sets: v })
}

/// Roots `L3−L4` and `L5−L6`, when both exist.
pub fn e0_roots(rs: &RootSystem) -> Option<[usize; 2]> {
    let a = rs.root_from_terms(&[(3, 1), (4, -1)])?;
    let b = rs.root_from_terms(&[(5, 1), (6, -1)])?;
    Some([rs.index_of(&a)?, rs.index_of(&b)?])
}

fn commutes_with_pm(alg: &LieAlgebra, r: usize, s: usize) -> bool {
    let rs = &alg.root_system;
    [s, rs.neg_index(s)]
        .iter()
        .all(|&t| alg.bracket(&alg.basis(r), &alg.basis(t)).map(|b| b.is_zero()).unwrap_or(false))
}

pub fn split_uv_sets(alg: &LieAlgebra, base: &UVFamily) -> Result<SplitUVFamily> {
    let [s1, s2] = e0_roots(&alg.root_system).ok_or(Error::MissingCoordinate(6))?;
    let split = |sets: &Vec<Vec<usize>>| -> Vec<[Vec<usize>; 2]> {
        sets.iter()
            .map(|set| {
                [
                    set.iter().copied().filter(|&r| commutes_with_pm(alg, r, s1)).collect(),
                    set.iter().copied().filter(|&r| commutes_with_pm(alg, r, s2)).collect(),
                ]
            })
            .collect()
    };
    Ok(SplitUVFamily { u_split: split(&base.u_sets), v_split: split(&base.v_sets), base: base.clone() })
}

fn odd(i: usize) -> bool {
    i % 2 == 1
}

fn even(i: usize) -> bool {
    i.is_multiple_of(2)
}

pub fn abelian_basis(alg: &LieAlgebra) -> Result<AbelianBasis> {
    let rs = &alg.root_system;
    let (t, n) = (rs.lie_type, rs.rank);
    let idx: Vec<usize> = index_range(rs).collect();
    let pairs = |a: i32, pi: fn(usize) -> bool, b: i32, pj: fn(usize) -> bool| -> Vec<Vec<(usize, i32)>> {
        let mut v = Vec::new();
        for &i in &idx {
            for &j in &idx {
                if i != j && pi(i) && pj(j) {
                    v.push(vec![(i, a), (j, b)]);
                }
            }
        }
        v
    };
    let mixed = || {
        let mut c = pairs(1, odd, -1, even);
        c.extend(pairs(-1, even, -1, even));
        c.extend(pairs(1, odd, 1, odd));
        c
    };
    let unavailable = |need: &str| Err(Error::Unavailable(format!("𝒟 is listed only for {need}; got {t}{n}")));
    let (roots, claimed, formula) = match t {
        LieType::A if n >= 4 => (collect(rs, pairs(1, odd, -1, even)), (n + 1) * (n + 1) / 4, "floor((n+1)^2/4)"),
        LieType::A => return unavailable("A_n, n≥4"),
        LieType::B if n >= 5 => {
            let mut c = mixed();
            c.push(vec![(1, 1)]);
            (collect(rs, c), n * (n - 1) / 2 + 1, "n(n-1)/2+1")
        }
        LieType::B if n == 3 => (
            collect(
                rs,
                vec![
                    vec![(1, 1)],
                    vec![(1, 1), (2, -1)],
                    vec![(1, 1), (3, -1)],
                    vec![(1, 1), (2, 1)],
                    vec![(1, 1), (3, 1)],
                ],
            ),
            5,
            "5",
        ),
        LieType::B => return unavailable("B_n, n≥5, and B_3"),
        LieType::C if n >= 3 => {
            let mut c = mixed();
            c.extend(idx.iter().filter(|&&i| odd(i)).map(|&i| vec![(i, 2)]));
            c.extend(idx.iter().filter(|&&i| even(i)).map(|&i| vec![(i, -2)]));
            (collect(rs, c), n * (n + 1) / 2, "n(n+1)/2")
        }
        LieType::C => return unavailable("C_n, n≥3"),
        LieType::D if n >= 5 => (collect(rs, mixed()), n * (n - 1) / 2, "n(n-1)/2"),
        LieType::D => return unavailable("D_n, n≥5"),
        LieType::E => {
            let mut c2: Vec<Vec<(usize, i32)>> = Vec::new();
            let (free, fixed, parity, claimed): (Vec<usize>, Vec<(usize, i32)>, fn(usize) -> bool, usize) = match n {
                6 => (vec![2, 3, 4, 5], vec![(8, 1), (7, -1), (6, -1), (1, 1)], |m| m % 2 == 0, 16),
                7 => (vec![2, 3, 4, 5, 6], vec![(8, 1), (7, -1), (1, 1)], |m| m % 2 == 1, 27),
                _ => (vec![2, 3, 4, 5, 6, 7, 8], vec![(1, 1)], |m| m == 0 || m == 2, 36),
            };
            for mut p in sign_patterns(&free) {
                let minus = p.iter().filter(|(_, s)| *s < 0).count();
                if parity(minus) {
                    p.extend(fixed.iter().copied());
                    c2.push(p);
                }
            }
            let mut roots = collect2(rs, c2);
            let last = match n {
                6 => 5,
                7 => 6,
                _ => 8,
            };
            let mut c: Vec<Vec<(usize, i32)>> = Vec::new();
            for j in 2..=last {
                c.push(vec![(1, 1), (j, 1)]);
                c.push(vec![(1, 1), (j, -1)]);
            }
            if n == 7 {
                c.push(vec![(8, 1), (7, -1)]);
            }
            roots.extend(collect(rs, c));
            roots.sort_unstable();
            roots.dedup();
            let f = match n {
                6 => "16",
                7 => "27",
                _ => "36",
            };
            (roots, claimed, f)
        }
        LieType::F => {
            let mut c = mixed();
            c.push(vec![(1, 1)]);
            let mut roots = collect(rs, c);
            roots.extend(collect2(
                rs,
                vec![vec![(1, 1), (2, -1), (3, 1), (4, -1)], vec![(1, 1), (2, 1), (3, 1), (4, -1)]],
            ));
            roots.sort_unstable();
            roots.dedup();
            (roots, 9, "9")
        }
        LieType::G => return unavailable("the types of the classification list (not G2)"),
    };
    let elements = roots.iter().map(|&i| alg.basis(i)).collect();
    Ok(AbelianBasis { lie_type: t, rank: n, roots, elements, claimed_cardinality: claimed, formula })
}

/// Base root of the distinguished sl₂: `2L₁` for type C, `L₁−L₂` otherwise.
pub fn base_root(rs: &RootSystem) -> Root {
    if rs.lie_type == LieType::C {
        Root::from_terms(rs.ambient_dim, &[(1, 2)])
    } else {
        Root::from_terms(rs.ambient_dim, &[(1, 1), (2, -1)])
    }
}

pub fn base_sl2(alg: &LieAlgebra) -> Result<BaseSL2Data> {
    let rs = &alg.root_system;
    let br = base_root(rs);
    let (x, u, v) = alg
        .sl2_triple_for_root(&br)
        .ok_or_else(|| Error::Unavailable(format!("{br} is not a root of {}", rs.tag())))?;
    let g1_perp = alg.centralizer(&[u.clone(), v.clone()])?;
    let theta = u.sub(&v)?;
    let e0_roots: Vec<usize> = e0_roots(rs).map(|a| a.to_vec()).unwrap_or_default();
    let e0 = e0_roots.iter().map(|&i| alg.basis(i)).collect();
    Ok(BaseSL2Data { base_root: br, x, u, v, theta, g1_perp, e0_roots, e0 })
}

/// Which chain of subgroups to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStage {
    /// `Q₁ = S₁`, then the 𝔙 sets (target `𝒮`).
    NegativeSets,
    /// `Q₁ = 𝒮`, then the 𝔘 sets (target `𝔾`).
    PositiveSets,
    /// `Q₁ = S₁`, then 𝔙₁^ε, 𝔙₂^ε interleaved.
    SplitNegativeSets,
    /// `Q₁ = 𝒮`, then 𝔘₁^ε, 𝔘₂^ε interleaved.
    SplitPositiveSets,
}

impl ChainStage {
    pub const ALL: [ChainStage; 4] = [
        ChainStage::NegativeSets,
        ChainStage::PositiveSets,
        ChainStage::SplitNegativeSets,
        ChainStage::SplitPositiveSets,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChainStage::NegativeSets => "negative_sets",
            ChainStage::PositiveSets => "positive_sets",
            ChainStage::SplitNegativeSets => "split_negative_sets",
            ChainStage::SplitPositiveSets => "split_positive_sets",
        }
    }

    pub fn is_split(self) -> bool {
        matches!(self, ChainStage::SplitNegativeSets | ChainStage::SplitPositiveSets)
    }
}

#[derive(Clone, Debug)]
pub struct ChainFactor {
    pub label: String,
    pub gens: Vec<Element>,
}

/// `S₁ = ⟨X, U, 𝔤₁^⊥⟩` as generators.
fn s1_gens(alg: &LieAlgebra, sl2: &BaseSL2Data) -> Vec<Element> {
    let mut g = vec![sl2.x.clone(), sl2.u.clone()];
    g.extend(sl2.g1_perp.rows().iter().map(|r| alg.element(r.clone())));
    g
}

pub fn chain_config(alg: &LieAlgebra, stage: ChainStage, mode: Transcription) -> Result<Vec<ChainFactor>> {
    chain_config_ordered(alg, stage, mode, &(1..=Q0).collect::<Vec<_>>())
}

/// As [`chain_config`] with the slot order `ε₁..ε_{q₀}` given explicitly.
pub fn chain_config_ordered(
    alg: &LieAlgebra,
    stage: ChainStage,
    mode: Transcription,
    order: &[usize],
) -> Result<Vec<ChainFactor>> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=Q0).collect::<Vec<_>>() {
        return Err(Error::Invalid(format!("slot order must be a permutation of 1..={Q0}")));
    }
    let fam = uv_sets(alg, mode)?;
    let sl2 = base_sl2(alg)?;
    let els = |set: &[usize]| set.iter().map(|&i| alg.basis(i)).collect::<Vec<_>>();
    let positive = matches!(stage, ChainStage::PositiveSets | ChainStage::SplitPositiveSets);

    let mut q1 = s1_gens(alg, &sl2);
    let mut head = "S1".to_string();
    if positive {
        for e in 1..=Q0 {
            q1.extend(els(fam.v(e)));
        }
        head = "Lie(S)".into();
    }
    let mut chain = vec![ChainFactor { label: head, gens: q1 }];
    let letter = if positive { "U" } else { "V" };
    if stage.is_split() {
        let split = split_uv_sets(alg, &fam)?;
        for &e in order {
            let pair = if positive { &split.u_split[e - 1] } else { &split.v_split[e - 1] };
            for (k, set) in pair.iter().enumerate() {
                if !set.is_empty() {
                    chain.push(ChainFactor { label: format!("{letter}_{}^{e}", k + 1), gens: els(set) });
                }
            }
        }
    } else {
        for &e in order {
            let set = if positive { fam.u(e) } else { fam.v(e) };
            if !set.is_empty() {
                chain.push(ChainFactor { label: format!("{letter}^{e}"), gens: els(set) });
            }
        }
    }
    Ok(chain)
}

/// Canonical JSON of the named constructions of one algebra.
pub fn constructions_json(alg: &LieAlgebra) -> serde_json::Value {
    let rs = &alg.root_system;
    let names = |set: &[usize]| set.iter().map(|&i| rs.root(i).to_string()).collect::<Vec<_>>();
    let mut out = serde_json::Map::new();
    match abelian_basis(alg) {
        Ok(b) => {
            out.insert(
                "abelian_basis".into(),
                serde_json::json!({
                    "claimed_cardinality": b.claimed_cardinality,
                    "formula": b.formula,
                    "roots": names(&b.roots),
                }),
            );
        }
        Err(e) => {
            out.insert("abelian_basis".into(), serde_json::json!({ "unavailable": e.to_string() }));
        }
    }
    for mode in [Transcription::Normalized, Transcription::Literal] {
        if let Ok(f) = uv_sets(alg, mode) {
            let key = match mode {
                Transcription::Normalized => "uv_sets",
                Transcription::Literal => "uv_sets_literal",
            };
            let slots: Vec<serde_json::Value> =
                (1..=Q0).map(|e| serde_json::json!({ "slot": e, "U": names(f.u(e)), "V": names(f.v(e)) })).collect();
            out.insert(key.into(), serde_json::Value::Array(slots));
            if mode == Transcription::Normalized {
                if let Ok(s) = split_uv_sets(alg, &f) {
                    let slots: Vec<serde_json::Value> = (1..=Q0)
                        .map(|e| {
                            serde_json::json!({
                                "slot": e,
                                "U1": names(&s.u_split[e - 1][0]), "U2": names(&s.u_split[e - 1][1]),
                                "V1": names(&s.v_split[e - 1][0]), "V2": names(&s.v_split[e - 1][1]),
                            })
                        })
                        .collect();
                    out.insert("split_uv_sets".into(), serde_json::Value::Array(slots));
                }
            }
        }
    }
    if let Ok(s) = base_sl2(alg) {
        out.insert(
            "base_sl2".into(),
            serde_json::json!({
                "root": s.base_root.to_string(),
                "X": alg.format_element(&s.x),
                "U": alg.format_element(&s.u),
                "V": alg.format_element(&s.v),
                "g1_perp_dim": s.g1_perp.rank(),
                "E0": s.e0_roots.iter().map(|&i| rs.root(i).to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    serde_json::Value::Object(out)
}

/// Span of a generator list.
pub fn span(alg: &LieAlgebra, gens: &[Element]) -> Subspace {
    Subspace::span(alg.dim(), gens.iter().map(|g| &g.coeffs))
}

pub fn element_of_root(alg: &LieAlgebra, terms: &[(usize, i32)]) -> Option<Element> {
    let r = alg.root_system.root_from_terms(terms)?;
    alg.root_vector(&r)
}

pub fn vec_of(e: &Element) -> &SparseVec {
    &e.coeffs
}
