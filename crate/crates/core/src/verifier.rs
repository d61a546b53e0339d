//! Machine checks of the finite claims: cardinalities, abelianness,
//! maximality, eigenvalue memberships, chain hypotheses and the exhaustive
//! bracket-escape witness search. Results are collected into a [`Report`].

use crate::constructions::{
    abelian_basis, base_sl2, chain_config_ordered, uv_sets, AbelianBasis, BaseSL2Data, ChainFactor, ChainStage,
    Transcription, UVFamily, Q0,
};
use crate::error::{Error, Result};
use crate::lie_core::{
    basis_jacobiator, eigenspace_decomposition, Element, LieAlgebra, LieType, Root, RootSystem, SparseVec, Subspace, Q,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Flagged,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub claim_ref: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub details: String,
    pub elapsed_ms: u64,
}

impl CheckResult {
    fn new(id: &str, claim: &str, status: Status, details: impl Into<String>) -> Self {
        CheckResult {
            check_id: id.into(),
            claim_ref: claim.into(),
            status,
            witness: None,
            details: details.into(),
            elapsed_ms: 0,
        }
    }

    fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    #[serde(rename = "type")]
    pub type_tag: String,
    pub rank: usize,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn new(type_tag: String, rank: usize, mut results: Vec<CheckResult>) -> Self {
        results.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        let mut summary = Summary::default();
        for r in &results {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Flagged => summary.flagged += 1,
            }
        }
        Report { type_tag, rank, results, summary }
    }

    /// 0 all pass, 1 any fail, 2 flagged without failures.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if self.summary.flagged > 0 {
            2
        } else {
            0
        }
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.check_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}{}\n", self.type_tag, self.rank);
        for r in &self.results {
            let st = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Flagged => "FLAG",
            };
            s.push_str(&format!("  {st:4}  {:32} {}\n", r.check_id, r.details));
        }
        s.push_str(&format!(
            "summary: {} pass, {} fail, {} flagged\n",
            self.summary.pass, self.summary.fail, self.summary.flagged
        ));
        s
    }
}

fn root_names(rs: &RootSystem, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| rs.root(i).to_string()).collect()
}

// ---------------------------------------------------------------- 𝒟 checks

pub fn check_cardinalities(basis: &AbelianBasis) -> CheckResult {
    let distinct: BTreeSet<usize> = basis.roots.iter().copied().collect();
    let n = basis.roots.len();
    let ok = distinct.len() == n && n == basis.claimed_cardinality;
    CheckResult::new(
        "cardinality",
        "cardinality formula for the abelian basis",
        if ok { Status::Pass } else { Status::Fail },
        format!("|D| = {n} ({} distinct), formula {} = {}", distinct.len(), basis.formula, basis.claimed_cardinality),
    )
}

/// Pairwise brackets among root vectors indexed by `roots`.
pub fn check_abelian_roots(alg: &LieAlgebra, roots: &[usize]) -> CheckResult {
    let rs = &alg.root_system;
    for (a, &i) in roots.iter().enumerate() {
        for &j in &roots[a + 1..] {
            if !alg.basis_bracket(i, j).is_empty() {
                return CheckResult::new(
                    "abelian",
                    "the listed basis spans an abelian subalgebra",
                    Status::Fail,
                    format!("[u[{}], u[{}]] != 0", rs.root(i), rs.root(j)),
                )
                .with_witness(json!([rs.root(i).to_string(), rs.root(j).to_string()]));
            }
        }
    }
    CheckResult::new(
        "abelian",
        "the listed basis spans an abelian subalgebra",
        Status::Pass,
        format!("{} pairwise brackets vanish", roots.len() * roots.len().saturating_sub(1) / 2),
    )
}

pub fn check_abelian(alg: &LieAlgebra, basis: &AbelianBasis) -> CheckResult {
    check_abelian_roots(alg, &basis.roots)
}

pub fn check_nilpotent(alg: &LieAlgebra, basis: &AbelianBasis) -> CheckResult {
    let mut worst = 0;
    for (&i, e) in basis.roots.iter().zip(&basis.elements) {
        match alg.nilpotency_index(e) {
            Some(k) => worst = worst.max(k),
            None => {
                return CheckResult::new(
                    "nilpotent",
                    "the abelian basis consists of ad-nilpotent elements",
                    Status::Fail,
                    format!("ad u[{}] is not nilpotent", alg.root_system.root(i)),
                )
            }
        }
    }
    CheckResult::new(
        "nilpotent",
        "the abelian basis consists of ad-nilpotent elements",
        Status::Pass,
        format!("all {} elements ad-nilpotent, max index {worst}", basis.roots.len()),
    )
}

/// Maximality surrogate: no root vector outside the set centralizes it and
/// the centralizer meets the Cartan trivially. Since the centralizer of a
/// set of root vectors is Cartan-stable, this is the same as
/// `Z(span 𝒟) = span 𝒟`.
pub fn check_maximal_roots(alg: &LieAlgebra, roots: &[usize]) -> CheckResult {
    let id = "maximal";
    let claim = "the abelian basis is maximal (centralizer surrogate)";
    let rs = &alg.root_system;
    if roots.is_empty() {
        return CheckResult::new(id, claim, Status::Fail, "empty basis");
    }
    let gens: Vec<Element> = roots.iter().map(|&i| alg.basis(i)).collect();
    let z = match alg.centralizer(&gens) {
        Ok(z) => z,
        Err(e) => return CheckResult::new(id, claim, Status::Fail, e.to_string()),
    };
    let inside: BTreeSet<usize> = roots.iter().copied().collect();
    let extra: Vec<usize> =
        (0..alg.num_roots()).filter(|i| !inside.contains(i) && z.contains(&SparseVec::unit(*i))).collect();
    let cartan_part = z.intersection(&alg.cartan()).rank();
    let span = alg.span_of_basis(roots);
    let equal = z == span;
    if extra.is_empty() && cartan_part == 0 {
        CheckResult::new(id, claim, Status::Pass, format!("dim Z = {} = |D|; Z == span(D): {equal}", z.rank()))
    } else {
        CheckResult::new(
            id,
            claim,
            Status::Fail,
            format!(
                "{} root vectors outside D centralize D; dim(Z ∩ Cartan) = {cartan_part}; Z == span(D): {equal}",
                extra.len()
            ),
        )
        .with_witness(json!({ "omitted": root_names(rs, &extra), "cartan_dim": cartan_part }))
    }
}

pub fn check_maximal(alg: &LieAlgebra, basis: &AbelianBasis) -> CheckResult {
    check_maximal_roots(alg, &basis.roots)
}

// ---------------------------------------------------- ad_X eigenvalue claims

fn root_eigenvalue(alg: &LieAlgebra, x: &Element, i: usize) -> Q {
    alg.cartan_eigenvalue(x, i)
}

pub fn check_eigenvalue_membership(alg: &LieAlgebra, fam: &UVFamily, x: &Element) -> CheckResult {
    let rs = &alg.root_system;
    let id = match fam.mode {
        Transcription::Normalized => "eigenvalue_membership",
        Transcription::Literal => "eigenvalue_membership.literal",
    };
    let claim = "each U set lies in one ad_X eigenspace (1 or 2), each V set in one (-1 or -2)";
    let mut bad = Vec::new();
    let mut table = BTreeMap::new();
    for e in 1..=Q0 {
        for (name, set, allowed) in [("U", fam.u(e), [1i64, 2]), ("V", fam.v(e), [-1, -2])] {
            if set.is_empty() {
                continue;
            }
            let vals: BTreeSet<Q> = set.iter().map(|&i| root_eigenvalue(alg, x, i)).collect();
            let ok = vals.len() == 1 && vals.iter().all(|v| allowed.iter().any(|a| *v == Q::from_integer((*a).into())));
            table.insert(format!("{name}{e}"), vals.iter().map(|v| v.to_string()).collect::<Vec<_>>());
            if !ok {
                let offenders: Vec<String> = set
                    .iter()
                    .filter(|&&i| {
                        let v = root_eigenvalue(alg, x, i);
                        !allowed.iter().any(|a| v == Q::from_integer((*a).into()))
                    })
                    .map(|&i| format!("{} (eigenvalue {})", rs.root(i), root_eigenvalue(alg, x, i)))
                    .collect();
                bad.push(json!({ "set": format!("{name}{e}"), "eigenvalues": table[&format!("{name}{e}")], "offenders": offenders }));
            }
        }
    }
    if bad.is_empty() {
        CheckResult::new(id, claim, Status::Pass, format!("{} nonempty sets checked", table.len()))
            .with_witness(json!(table))
    } else {
        let status = match fam.mode {
            Transcription::Normalized => Status::Fail,
            Transcription::Literal => Status::Flagged,
        };
        let names: Vec<String> = bad.iter().map(|b| b["set"].as_str().unwrap_or("").to_string()).collect();
        CheckResult::new(id, claim, status, format!("sets with a stray eigenvalue: {}", names.join(", ")))
            .with_witness(Value::Array(bad))
    }
}

pub fn check_eigenspace_spectrum(alg: &LieAlgebra, x: &Element) -> CheckResult {
    let id = "eigenspace_spectrum";
    let claim = "ad_X has eigenvalues in {0, ±1, ±2} and the eigenspaces recompose";
    match eigenspace_decomposition(alg, x) {
        Ok(spaces) => {
            let dims: BTreeMap<String, usize> = spaces.iter().map(|(k, v)| (k.to_string(), v.rank())).collect();
            let total: usize = spaces.values().map(Subspace::rank).sum();
            let ok_vals = spaces.keys().all(|k| k.is_integer() && k.to_integer().magnitude() <= &2u32.into());
            let status = if ok_vals && total == alg.dim() {
                Status::Pass
            } else if alg.root_system.lie_type == LieType::G {
                Status::Flagged
            } else {
                Status::Fail
            };
            CheckResult::new(id, claim, status, format!("dims {dims:?}, total {total} of {}", alg.dim()))
                .with_witness(json!(dims))
        }
        Err(e) => CheckResult::new(id, claim, Status::Fail, e.to_string()),
    }
}

/// The Cartan is not literally inside 𝔤₁^⊥ (X itself acts by 2 on U); the
/// checkable form is `𝒞 = (𝒞 ∩ 𝔤₁^⊥) ⊕ ℚX`.
pub fn check_cartan_split(alg: &LieAlgebra, sl2: &BaseSL2Data) -> CheckResult {
    let id = "cartan_split";
    let claim = "Cartan is the centralizer part of the base sl2 plus the line through X";
    let cartan = alg.cartan();
    let inter = cartan.intersection(&sl2.g1_perp);
    let mut sum = inter.clone();
    let x_new = sum.insert(sl2.x.coeffs.clone());
    let ok = x_new && sum == cartan;
    let x_in = sl2.g1_perp.contains(&sl2.x.coeffs);
    CheckResult::new(
        id,
        claim,
        if ok { Status::Pass } else { Status::Fail },
        format!(
            "dim(C ∩ g1_perp) = {}, rank = {}; X in g1_perp: {x_in} (so C ⊄ g1_perp as written)",
            inter.rank(),
            alg.rank()
        ),
    )
}

pub fn check_zero_eigenspace(alg: &LieAlgebra, sl2: &BaseSL2Data) -> CheckResult {
    let id = "zero_eigenspace_in_g1_perp";
    let claim = "root vectors with ad_X eigenvalue 0 lie in the centralizer of U and V";
    let rs = &alg.root_system;
    let zero: Vec<usize> = (0..alg.num_roots()).filter(|&i| root_eigenvalue(alg, &sl2.x, i).is_zero()).collect();
    let missing: Vec<usize> = zero.iter().copied().filter(|&i| !sl2.g1_perp.contains(&SparseVec::unit(i))).collect();
    if missing.is_empty() {
        CheckResult::new(
            id,
            claim,
            Status::Pass,
            format!("{} zero-eigenvalue root vectors, all in g1_perp", zero.len()),
        )
    } else {
        CheckResult::new(id, claim, Status::Fail, format!("{} root vectors escape g1_perp", missing.len()))
            .with_witness(json!(root_names(rs, &missing)))
    }
}

// ---------------------------------------------------------- witness search

/// Outcome of one exhaustive witness scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessOutcome {
    pub phi: usize,
    pub psi: usize,
    /// All ω in 𝒟 with `[u_ω,u_ψ] ∉ Im(ad u_φ)`, sorted by root order.
    pub witnesses: Vec<usize>,
    pub examined: usize,
}

impl WitnessOutcome {
    /// Lexicographically smallest witness (by L-coordinate string).
    pub fn smallest(&self, rs: &RootSystem) -> Option<usize> {
        self.witnesses.iter().copied().min_by_key(|&i| rs.root(i).to_string())
    }
}

pub struct WitnessContext<'a> {
    alg: &'a LieAlgebra,
    d_roots: Vec<usize>,
    d_set: BTreeSet<usize>,
    images: BTreeMap<usize, Subspace>,
}

impl<'a> WitnessContext<'a> {
    pub fn new(alg: &'a LieAlgebra, d_roots: &[usize]) -> Self {
        WitnessContext {
            alg,
            d_roots: d_roots.to_vec(),
            d_set: d_roots.iter().copied().collect(),
            images: BTreeMap::new(),
        }
    }

    fn image(&mut self, phi: usize) -> &Subspace {
        let alg = self.alg;
        self.images.entry(phi).or_insert_with(|| alg.image_of_ad(&alg.basis(phi)))
    }

    /// Whether `(φ, ψ)` satisfies the lemma's hypotheses.
    pub fn is_valid_pair(&mut self, phi: usize, psi: usize) -> bool {
        self.d_set.contains(&phi) && !self.d_set.contains(&psi) && !self.image(phi).contains(&SparseVec::unit(psi))
    }

    pub fn escapes(&mut self, phi: usize, psi: usize, omega: usize) -> bool {
        let br = self.alg.bracket_vec(&SparseVec::unit(omega), &SparseVec::unit(psi));
        !br.is_zero() && !self.image(phi).contains(&br)
    }

    pub fn search(&mut self, phi: usize, psi: usize) -> Result<WitnessOutcome> {
        if !self.d_set.contains(&phi) {
            return Err(Error::Precondition("phi is not a root of D".into()));
        }
        if self.d_set.contains(&psi) {
            return Err(Error::Precondition("psi is a root of D".into()));
        }
        if self.image(phi).contains(&SparseVec::unit(psi)) {
            return Err(Error::Precondition("u_psi lies in Im(ad u_phi)".into()));
        }
        let ds = self.d_roots.clone();
        let witnesses = ds.iter().copied().filter(|&w| self.escapes(phi, psi, w)).collect();
        Ok(WitnessOutcome { phi, psi, witnesses, examined: ds.len() })
    }
}

pub fn witness_search(alg: &LieAlgebra, basis: &AbelianBasis, phi: &Root, psi: &Root) -> Result<WitnessOutcome> {
    let rs = &alg.root_system;
    let p = rs.index_of(phi).ok_or_else(|| Error::Invalid(format!("{phi} is not a root")))?;
    let s = rs.index_of(psi).ok_or_else(|| Error::Invalid(format!("{psi} is not a root")))?;
    WitnessContext::new(alg, &basis.roots).search(p, s)
}

/// Integer L-coordinates of a C_n root as a sparse list `(index, coef)`.
fn int_terms(r: &Root) -> Vec<(usize, i32)> {
    r.doubled().iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i + 1, c / 2)).collect()
}

/// The witness named in the case analysis for `C_n`, when `(φ, ψ)` falls
/// under one of its cases.
pub fn named_witness_c(rs: &RootSystem, phi: &Root, psi: &Root) -> Option<Root> {
    if rs.lie_type != LieType::C {
        return None;
    }
    let n = rs.ambient_dim;
    let odd = |i: usize| i % 2 == 1;
    let mk = |t: &[(usize, i32)]| Root::from_terms(n, t);
    let f = int_terms(phi);
    let p = int_terms(psi);
    // ψ = a·L_x + b·L_y (x≠y) or 2a·L_x
    let coef = |i: usize| p.iter().find(|(k, _)| *k == i).map(|(_, c)| *c).unwrap_or(0);
    let other = |i: usize| -> Option<(usize, i32)> {
        if p.len() == 1 && p[0].0 == i && p[0].1.abs() == 2 {
            Some((i, p[0].1 / 2))
        } else if p.len() == 2 {
            p.iter().copied().find(|(k, _)| *k != i)
        } else {
            None
        }
    };
    let smallest_odd_except = |i: usize| (1..=n).find(|&q| odd(q) && q != i);
    let smallest_even = || (1..=n).find(|&q| !odd(q));

    match *f.as_slice() {
        // case 1: L_i − L_j, i odd, j even
        [(a, ca), (b, cb)]
            if ca * cb == -1 && odd(if ca == 1 { a } else { b }) && !odd(if ca == 1 { b } else { a }) =>
        {
            let (i, j) = if ca == 1 { (a, b) } else { (b, a) };
            if coef(i) < 0 {
                let (k, s) = other(i)?;
                if s > 0 {
                    // ψ = −L_i + L_k
                    if k == j {
                        return Some(mk(&[(i, 1), (smallest_odd_except(i)?, 1)]));
                    }
                    return Some(if odd(k) { mk(&[(i, 1), (k, 1)]) } else { mk(&[(i, 1), (k, -1)]) });
                }
                // ψ = −L_i − L_m, m ≠ j
                if k == j {
                    return None;
                }
                return Some(if odd(k) { mk(&[(k, 2)]) } else { mk(&[(i, 1), (k, -1)]) });
            }
            if coef(j) > 0 {
                let (l, s) = other(j)?;
                if s > 0 {
                    // ψ = L_j + L_p, p ≠ i
                    if l == i {
                        return None;
                    }
                    return Some(if odd(l) { mk(&[(l, 1), (j, -1)]) } else { mk(&[(j, -1), (l, -1)]) });
                }
                // ψ = L_j − L_l
                if l == i {
                    return Some(mk(&[(i, 1), (smallest_odd_except(i)?, 1)]));
                }
                return Some(if odd(l) { mk(&[(l, 1), (j, -1)]) } else { mk(&[(l, -1), (j, -1)]) });
            }
            None
        }
        // case 2: L_i + L_j, i, j odd
        [(a, 1), (b, 1)] if odd(a) && odd(b) => {
            for (i, j) in [(a, b), (b, a)] {
                if coef(i) >= 0 {
                    continue;
                }
                let (k, s) = other(i)?;
                if s > 0 {
                    if k == j {
                        continue;
                    }
                    return Some(if odd(k) { mk(&[(i, 1), (k, 1)]) } else { mk(&[(i, 1), (k, -1)]) });
                }
                if k == i {
                    return Some(mk(&[(i, 2)]));
                }
                if k == j {
                    return Some(mk(&[(i, 1), (smallest_even()?, -1)]));
                }
                return Some(if odd(k) { mk(&[(i, 1), (k, 1)]) } else { mk(&[(i, 1), (k, -1)]) });
            }
            None
        }
        // case 3: 2L_i (i odd) or −2L_j (j even)
        [(i, 2)] if odd(i) => {
            let (k, _) = other(i)?;
            (coef(i) == -1 && k != i).then(|| mk(&[(i, 1), (2, -1)]))
        }
        [(j, -2)] if !odd(j) => {
            let (k, _) = other(j)?;
            (coef(j) == 1 && k != j).then(|| mk(&[(1, 1), (j, -1)]))
        }
        // case 4: −L_i − L_j, i, j even
        [(a, -1), (b, -1)] if !odd(a) && !odd(b) => {
            for (i, j) in [(a, b), (b, a)] {
                if coef(i) <= 0 {
                    continue;
                }
                let (k, s) = other(i)?;
                if s < 0 {
                    // ψ = L_i − L_m, m ≠ j
                    if k == j {
                        continue;
                    }
                    return Some(if odd(k) { mk(&[(k, 1), (i, -1)]) } else { mk(&[(i, -1), (k, -1)]) });
                }
                if k == i {
                    return Some(mk(&[(i, -2)]));
                }
                if k == j {
                    return Some(mk(&[(1, 1), (i, -1)]));
                }
                return Some(if odd(k) { mk(&[(k, 1), (i, -1)]) } else { mk(&[(i, -1), (k, -1)]) });
            }
            None
        }
        _ => None,
    }
}

/// Exhaustive search over every valid `(φ, ψ)`.
pub fn check_witnesses(alg: &LieAlgebra, basis: &AbelianBasis) -> CheckResult {
    let id = "witness_search";
    let claim = "bracket-escape witness exists in D for every valid (phi, psi)";
    let rs = &alg.root_system;
    let mut ctx = WitnessContext::new(alg, &basis.roots);
    let mut pairs = 0usize;
    let mut missing = Vec::new();
    let mut named = 0usize;
    let mut named_bad = Vec::new();
    let mut sample = Vec::new();
    for &phi in &basis.roots {
        for psi in 0..alg.num_roots() {
            if !ctx.is_valid_pair(phi, psi) {
                continue;
            }
            pairs += 1;
            let out = ctx.search(phi, psi).expect("pair validated");
            if out.witnesses.is_empty() {
                missing.push(json!([rs.root(phi).to_string(), rs.root(psi).to_string()]));
                continue;
            }
            if sample.len() < 8 {
                let w = out.smallest(rs).expect("nonempty");
                sample.push(json!({
                    "phi": rs.root(phi).to_string(),
                    "psi": rs.root(psi).to_string(),
                    "omega": rs.root(w).to_string(),
                }));
            }
            if let Some(w) = named_witness_c(rs, rs.root(phi), rs.root(psi)) {
                named += 1;
                let ok = rs.index_of(&w).is_some_and(|wi| out.witnesses.contains(&wi));
                if !ok {
                    named_bad.push(json!([rs.root(phi).to_string(), rs.root(psi).to_string(), w.to_string()]));
                }
            }
        }
    }
    let details = format!(
        "{pairs} valid pairs, {} without witness, {named} matched a named case ({} named witnesses rejected); {} candidates per pair",
        missing.len(),
        named_bad.len(),
        basis.roots.len()
    );
    let status = if missing.is_empty() && named_bad.is_empty() {
        Status::Pass
    } else if rs.lie_type == LieType::C {
        Status::Fail
    } else {
        Status::Flagged
    };
    let witness = json!({
        "pairs": pairs,
        "named_cases": named,
        "missing": missing,
        "named_rejected": named_bad,
        "examples": sample,
    });
    CheckResult::new(id, claim, status, details).with_witness(witness)
}

// ------------------------------------------------------- chain hypotheses

/// Checks (∗) and (∗∗) on a chain `Q₁, …, Q_n`.
///
/// (∗) is read as a linear-space sum: each `Q_i`, `i ≥ 2`, has independent
/// generators spanning an abelian subalgebra of ad-nilpotent elements.
/// Whether the sum is direct, and whether it is closed under the bracket
/// (i.e. whether it is the Lie algebra of the generated group), are recorded
/// in the witness but do not decide the status.
/// (∗∗): for `i, j ≥ 2`, `[Q_i, Q_j]` is zero or lies in one `Q_m`, `m ≥ 2`,
/// that commutes with every `Q_k`, `k ≥ 2`.
pub fn check_chain_hypotheses(alg: &LieAlgebra, id: &str, chain: &[ChainFactor]) -> CheckResult {
    let claim = "chain hypotheses: factors span Lie(Q) and brackets land in a central factor";
    let dim = alg.dim();
    if chain.is_empty() {
        return CheckResult::new(id, claim, Status::Fail, "empty chain");
    }
    let tail = &chain[1..];
    let spans: Vec<Subspace> = chain.iter().map(|f| alg.span_of(&f.gens)).collect();
    let mut problems = Vec::new();

    for (k, f) in tail.iter().enumerate() {
        let s = &spans[k + 1];
        if s.rank() != f.gens.len() {
            problems.push(format!("{}: generators dependent", f.label));
        }
        let abelian = f
            .gens
            .iter()
            .enumerate()
            .all(|(a, x)| f.gens[a + 1..].iter().all(|y| alg.bracket_vec(&x.coeffs, &y.coeffs).is_zero()));
        if !abelian {
            problems.push(format!("{}: not abelian", f.label));
        }
        if !f.gens.iter().all(|g| alg.is_ad_nilpotent(g)) {
            problems.push(format!("{}: not ad-nilpotent", f.label));
        }
    }
    let mut total = Subspace::zero(dim);
    for s in &spans {
        total = total.sum(s);
    }
    let all_gens: Vec<&Element> = chain.iter().flat_map(|f| f.gens.iter()).collect();
    let mut escape = None;
    'outer: for (a, x) in all_gens.iter().enumerate() {
        for y in &all_gens[a + 1..] {
            let b = alg.bracket_vec(&x.coeffs, &y.coeffs);
            if !total.contains(&b) {
                escape = Some(alg.format_element(&alg.element(b)));
                break 'outer;
            }
        }
    }
    let closed = escape.is_none();
    let mut tail_sum = Subspace::zero(dim);
    for s in &spans[1..] {
        tail_sum = tail_sum.sum(s);
    }
    let tail_ranks: usize = spans.iter().skip(1).map(Subspace::rank).sum();
    let direct = tail_sum.rank() == tail_ranks && spans[0].intersection(&tail_sum).rank() == 0;
    let overlap = spans[0].intersection(&tail_sum).rank();

    // commuting table among Q_i, i ≥ 2
    let m = tail.len();
    let commute = |a: usize, b: usize| {
        tail[a].gens.iter().all(|x| tail[b].gens.iter().all(|y| alg.bracket_vec(&x.coeffs, &y.coeffs).is_zero()))
    };
    let mut comm = vec![vec![false; m]; m];
    for a in 0..m {
        for b in a..m {
            let c = commute(a, b);
            comm[a][b] = c;
            comm[b][a] = c;
        }
    }
    let central: Vec<bool> = (0..m).map(|a| (0..m).all(|b| comm[a][b])).collect();
    let mut map = BTreeMap::new();
    for a in 0..m {
        for b in a + 1..m {
            if comm[a][b] {
                continue;
            }
            let br = Subspace::span(
                dim,
                &tail[a]
                    .gens
                    .iter()
                    .flat_map(|x| tail[b].gens.iter().map(move |y| (x, y)))
                    .map(|(x, y)| alg.bracket_vec(&x.coeffs, &y.coeffs))
                    .collect::<Vec<_>>(),
            );
            match (0..m).find(|&c| central[c] && spans[c + 1].contains_subspace(&br)) {
                Some(c) => {
                    map.insert(format!("[{},{}]", tail[a].label, tail[b].label), tail[c].label.clone());
                }
                None => problems.push(format!("[{},{}] not inside a central factor", tail[a].label, tail[b].label)),
            }
        }
    }
    let labels: Vec<&str> = chain.iter().map(|f| f.label.as_str()).collect();
    let details = if problems.is_empty() {
        format!(
            "{} factors; {} nonzero bracket pairs placed; span dim {}; direct: {direct}; closed: {closed}",
            chain.len(),
            map.len(),
            total.rank()
        )
    } else {
        problems.join("; ")
    };
    CheckResult::new(id, claim, if problems.is_empty() { Status::Pass } else { Status::Fail }, details).with_witness(
        json!({
            "factors": labels,
            "bracket_map": map,
            "span_dim": total.rank(),
            "closed": closed,
            "closure_escape": escape,
            "direct": direct,
            "q1_overlap_dim": overlap,
            "tail_overlap_dim": tail_ranks - tail_sum.rank(),
        }),
    )
}

// ------------------------------------------------------- structural checks

pub fn check_root_axioms(rs: &RootSystem) -> CheckResult {
    let id = "root_axioms";
    let claim = "root system axioms (integral pairings, reflection closure, negation)";
    let roots = rs.roots();
    for a in roots {
        if !rs.contains(&a.neg()) {
            return CheckResult::new(id, claim, Status::Fail, format!("-({a}) missing"));
        }
        for b in roots {
            if (2 * b.inner4(a)) % a.norm2x4() != 0 {
                return CheckResult::new(id, claim, Status::Fail, format!("<{b},{a}^v> not integral"));
            }
            if !rs.contains(&b.reflect(a)) {
                return CheckResult::new(id, claim, Status::Fail, format!("s_{a}({b}) not a root"));
            }
        }
    }
    CheckResult::new(id, claim, Status::Pass, format!("{} roots, {} pairs", roots.len(), roots.len() * roots.len()))
}

/// Full scan of basis triples for rank ≤ 4, otherwise 10⁴ seeded triples.
pub fn check_jacobi(alg: &LieAlgebra, seed: u64) -> CheckResult {
    let id = "jacobi";
    let claim = "Jacobi identity on basis triples";
    let d = alg.dim();
    let mut count = 0usize;
    let mut fail = None;
    let mut test = |i: usize, j: usize, k: usize| {
        count += 1;
        if fail.is_none() && !basis_jacobiator(alg, i, j, k).is_empty() {
            fail = Some((i, j, k));
        }
    };
    let mode = if alg.rank() <= 4 {
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    test(i, j, k);
                }
            }
        }
        "full scan"
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let (i, j, k) = (rng.random_range(0..d), rng.random_range(0..d), rng.random_range(0..d));
            test(i, j, k);
        }
        "random triples"
    };
    match fail {
        None => CheckResult::new(id, claim, Status::Pass, format!("{count} triples ({mode}, seed {seed})")),
        Some((i, j, k)) => CheckResult::new(id, claim, Status::Fail, "nonzero Jacobiator").with_witness(json!([
            alg.basis_label(i),
            alg.basis_label(j),
            alg.basis_label(k)
        ])),
    }
}

// ----------------------------------------------------------------- report

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub seed: u64,
    /// Check families or ids to run; `None` runs all.
    pub checks: Option<Vec<String>>,
    pub timings: bool,
    pub order: Vec<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { seed: 0, checks: None, timings: false, order: (1..=Q0).collect() }
    }
}

/// Check families accepted by [`ReportOptions::checks`].
pub const FAMILIES: &[&str] = &[
    "abelian",
    "cardinality",
    "chain",
    "eigenvalue",
    "jacobi",
    "maximal",
    "nilpotent",
    "observation",
    "roots",
    "witness",
];

impl ReportOptions {
    fn wants(&self, family: &str) -> bool {
        self.checks.as_ref().is_none_or(|c| c.iter().any(|x| x == family))
    }
}

fn flagged(id: &str, claim: &str, e: &Error) -> CheckResult {
    CheckResult::new(id, claim, Status::Flagged, e.to_string())
}

fn timed(opts: &ReportOptions, f: impl FnOnce() -> CheckResult) -> CheckResult {
    let t = Instant::now();
    let mut r = f();
    if opts.timings {
        r.elapsed_ms = t.elapsed().as_millis() as u64;
    }
    r
}

pub fn full_report(lie_type: LieType, rank: usize, opts: &ReportOptions) -> Result<Report> {
    let alg = LieAlgebra::new(lie_type, rank)?;
    Ok(report_for(&alg, opts))
}

pub fn report_for(alg: &LieAlgebra, opts: &ReportOptions) -> Report {
    let rs = &alg.root_system;
    let mut out = Vec::new();

    if opts.wants("roots") {
        out.push(timed(opts, || check_root_axioms(rs)));
    }
    if opts.wants("jacobi") {
        out.push(timed(opts, || check_jacobi(alg, opts.seed)));
    }

    let d_claim = "abelian basis defined for this type and rank";
    match abelian_basis(alg) {
        Ok(basis) => {
            if opts.wants("cardinality") {
                out.push(timed(opts, || check_cardinalities(&basis)));
            }
            if opts.wants("abelian") {
                out.push(timed(opts, || check_abelian(alg, &basis)));
            }
            if opts.wants("nilpotent") {
                out.push(timed(opts, || check_nilpotent(alg, &basis)));
            }
            if opts.wants("maximal") {
                out.push(timed(opts, || check_maximal(alg, &basis)));
            }
            if opts.wants("witness") {
                out.push(timed(opts, || check_witnesses(alg, &basis)));
            }
        }
        Err(e) => {
            for fam in ["cardinality", "abelian", "nilpotent", "maximal"] {
                if opts.wants(fam) {
                    out.push(flagged(fam, d_claim, &e));
                }
            }
            if opts.wants("witness") {
                out.push(flagged("witness_search", d_claim, &e));
            }
        }
    }

    let sl2 = base_sl2(alg);
    if opts.wants("eigenvalue") {
        for mode in [Transcription::Normalized, Transcription::Literal] {
            let id = match mode {
                Transcription::Normalized => "eigenvalue_membership",
                Transcription::Literal => "eigenvalue_membership.literal",
            };
            let r = match (uv_sets(alg, mode), &sl2) {
                (Ok(f), Ok(s)) => timed(opts, || check_eigenvalue_membership(alg, &f, &s.x)),
                (Err(e), _) => flagged(id, "U/V families defined for this type", &e),
                (_, Err(e)) => flagged(id, "U/V families defined for this type", e),
            };
            out.push(r);
        }
    }
    if opts.wants("observation") {
        match &sl2 {
            Ok(s) => {
                out.push(timed(opts, || check_eigenspace_spectrum(alg, &s.x)));
                out.push(timed(opts, || check_cartan_split(alg, s)));
                out.push(timed(opts, || check_zero_eigenspace(alg, s)));
            }
            Err(e) => {
                for id in ["eigenspace_spectrum", "cartan_split", "zero_eigenspace_in_g1_perp"] {
                    out.push(flagged(id, "base sl2 defined", e));
                }
            }
        }
    }
    if opts.wants("chain") {
        for stage in ChainStage::ALL {
            let id = format!("chain.{}", stage.name());
            let r = match chain_config_ordered(alg, stage, Transcription::Normalized, &opts.order) {
                Ok(chain) => timed(opts, || check_chain_hypotheses(alg, &id, &chain)),
                Err(e) => flagged(&id, "chain configuration defined for this type and rank", &e),
            };
            out.push(r);
        }
    }
    Report::new(rs.lie_type.letter().to_string(), rs.rank, out)
}

/// Image-of-ad oracle: `span{u_γ : γ − φ ∈ Φ ∪ {0}} + ℚ·h_φ`, computed from
/// root arithmetic only.
pub fn image_of_ad_from_roots(alg: &LieAlgebra, phi: usize) -> Subspace {
    let rs = &alg.root_system;
    let p = rs.root(phi);
    let mut gens: Vec<SparseVec> = (0..alg.num_roots())
        .filter(|&g| {
            let d = rs.root(g).sub(p);
            d.is_zero() || rs.contains(&d)
        })
        .map(SparseVec::unit)
        .collect();
    if let Some(h) = alg.coroot(p) {
        gens.push(h.coeffs);
    }
    Subspace::span(alg.dim(), &gens)
}
