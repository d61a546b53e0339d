//! Tame-estimate bookkeeping: the constant chain `σ → σ₀ → σ₁ → σ₂ → ϱ`,
//! a replay of derivative losses through the splitting proofs, an exact
//! audit of the iteration schedule, a log-space simulator of the worst-case
//! recurrences, and a Fourier-cutoff smoothing demo on the 2-torus.

use crate::error::{Error, Result};
use crate::lie_core::{q, qf, Q};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Number of eigenvalue slots in the 𝔘/𝔙 families.
pub const Q0: i64 = 9;

fn qs(x: &Q) -> String {
    x.to_string()
}

fn qmax(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

// ---------------------------------------------------------------------------
// Tame operators

/// An estimate step `‖out‖_t ≤ C ‖in‖_{t+loss}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TameOp {
    pub name: String,
    pub loss: Q,
    /// Parameters the constant depends on.
    pub const_class: Vec<String>,
}

impl TameOp {
    pub fn new(name: impl Into<String>, loss: Q, const_class: &[&str]) -> Result<TameOp> {
        if loss.is_negative() {
            return Err(Error::Precondition("derivative loss must be nonnegative".into()));
        }
        let mut cc: Vec<String> = const_class.iter().map(|s| s.to_string()).collect();
        cc.sort();
        cc.dedup();
        Ok(TameOp { name: name.into(), loss, const_class: cc })
    }

    fn merged_class(&self, other: &TameOp) -> Vec<String> {
        let mut cc = self.const_class.clone();
        cc.extend(other.const_class.iter().cloned());
        cc.sort();
        cc.dedup();
        cc
    }

    /// Apply `self` after `other`: losses add.
    pub fn then(&self, other: &TameOp) -> TameOp {
        TameOp {
            name: format!("{} ∘ {}", other.name, self.name),
            loss: &self.loss + &other.loss,
            const_class: self.merged_class(other),
        }
    }

    /// Estimate both at once: the worse loss wins.
    pub fn parallel(&self, other: &TameOp) -> TameOp {
        TameOp {
            name: format!("{} ∥ {}", self.name, other.name),
            loss: qmax(&self.loss, &other.loss),
            const_class: self.merged_class(other),
        }
    }
}

/// Standard losses of the cohomological lemmas.
pub mod losses {
    use super::*;

    /// Coboundary for a single unipotent flow: `t + 3/2`.
    pub fn unipotent_coboundary() -> TameOp {
        TameOp::new("unipotent coboundary", qf(3, 2), &["t"]).unwrap()
    }
    /// Twisted equation on the `𝒟_l` part: `t + 2 + l/2`.
    pub fn twisted_small(l: &Q) -> TameOp {
        TameOp::new("twisted equation, small part", q(2) + l / q(2), &["t", "l"]).unwrap()
    }
    /// Twisted equation on the `𝒟^l` part: `t + 5/2`.
    pub fn twisted_large() -> TameOp {
        TameOp::new("twisted equation, large part", qf(5, 2), &["t"]).unwrap()
    }
    /// Iterated twisted equation on a full flag: `t + (5/2) dim 𝔤`.
    pub fn twisted_iterated(dim_g: &Q) -> TameOp {
        TameOp::new("iterated twisted equation", qf(5, 2) * dim_g, &["t", "dim_g"]).unwrap()
    }
    /// Single Jordan-chain step of the cocycle splitting: `t + 6 + l/2`.
    pub fn jordan_step(l: &Q) -> TameOp {
        TameOp::new("Jordan chain step", q(6) + l / q(2), &["t", "l"]).unwrap()
    }
    /// Whole-block cocycle splitting: `t + (6 + l/2) σ`.
    pub fn jordan_block(l: &Q, sigma: &Q) -> TameOp {
        TameOp::new("Jordan block splitting", (q(6) + l / q(2)) * sigma, &["t", "l", "dim_g"]).unwrap()
    }
    /// Cocycle equation on the `𝒟^l` part: `t + σ + 3/2`.
    pub fn large_cocycle(sigma: &Q) -> TameOp {
        TameOp::new("large-part cocycle", sigma + qf(3, 2), &["t", "dim_g"]).unwrap()
    }
}

// ---------------------------------------------------------------------------
// Constant chain

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantChain {
    pub dim_g: Q,
    pub beta: Q,
    pub lambda: Q,
    pub lambda1: Q,
    pub q0: Q,
    pub sigma: Q,
    pub sigma0: Q,
    pub sigma1: Q,
    pub sigma2: Q,
    pub varrho: Q,
}

/// Evaluate the chain exactly. `dim_g` must be positive, the rest
/// nonnegative.
pub fn constant_chain(dim_g: Q, beta: Q, lambda: Q, lambda1: Q) -> Result<ConstantChain> {
    if !dim_g.is_positive() {
        return Err(Error::Precondition("dim_g must be positive".into()));
    }
    if beta.is_negative() || lambda.is_negative() || lambda1.is_negative() {
        return Err(Error::Precondition("beta, lambda, lambda1 must be nonnegative".into()));
    }
    let q0 = q(Q0);
    let sigma = qf(3, 2) * &dim_g;
    let sigma0 = (q(7) + &sigma) * &sigma;
    let sigma1 = (&q0 + q(1)) * &sigma0;
    let sigma2 = &sigma1 + &q0 * &sigma0;
    let first = (q(2) * &q0 + q(1)) * &sigma0 + q(1) + q(2) * &beta;
    let second = &lambda * &beta + &lambda1 + q(1) + q(2) * &beta;
    let varrho = qmax(&first, &second);
    Ok(ConstantChain { dim_g, beta, lambda, lambda1, q0, sigma, sigma0, sigma1, sigma2, varrho })
}

impl ConstantChain {
    /// Chain with only `ϱ` known (audits driven by a raw `ϱ`).
    pub fn from_varrho(varrho: Q) -> ConstantChain {
        let z = Q::zero();
        ConstantChain {
            dim_g: z.clone(),
            beta: z.clone(),
            lambda: z.clone(),
            lambda1: z.clone(),
            q0: q(Q0),
            sigma: z.clone(),
            sigma0: z.clone(),
            sigma1: z.clone(),
            sigma2: z,
            varrho,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim_g": qs(&self.dim_g),
            "beta": qs(&self.beta),
            "lambda": qs(&self.lambda),
            "lambda1": qs(&self.lambda1),
            "q0": qs(&self.q0),
            "sigma": qs(&self.sigma),
            "sigma0": qs(&self.sigma0),
            "sigma1": qs(&self.sigma1),
            "sigma2": qs(&self.sigma2),
            "varrho": qs(&self.varrho),
        })
    }
}

// ---------------------------------------------------------------------------
// Loss ledger

/// Proofs whose loss bookkeeping can be replayed.
#[derive(Clone, Debug, PartialEq)]
pub enum LedgerProof {
    /// Main splitting theorem when the ambient group has more than one
    /// simple factor.
    SplittingReducible,
    /// Main splitting theorem for a simple ambient group.
    SplittingSimple,
    /// Almost-cocycle splitting for the base `sl₂` pair, with `l = 2σ+2`.
    AlmostCocycle,
    /// Jordan-block cocycle splitting with the given `l`.
    JordanBlockCocycle { l: Q },
}

impl LedgerProof {
    pub fn name(&self) -> &'static str {
        match self {
            LedgerProof::SplittingReducible => "splitting_reducible",
            LedgerProof::SplittingSimple => "splitting_simple",
            LedgerProof::AlmostCocycle => "almost_cocycle",
            LedgerProof::JordanBlockCocycle { .. } => "jordan_block_cocycle",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerStep {
    pub step: String,
    /// Which estimated quantity this line tracks.
    pub track: String,
    pub op_loss: String,
    pub cumulative: String,
    pub claimed: String,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerReport {
    pub proof: String,
    pub steps: Vec<LedgerStep>,
    pub final_loss: String,
    pub budget: String,
    pub slack: String,
    /// Amount by which some track exceeds its budget; `None` when every
    /// track fits.
    pub overdraft: Option<String>,
    pub notes: Vec<String>,
    pub pass: bool,
}

struct Ledger {
    steps: Vec<LedgerStep>,
    tracks: BTreeMap<String, Q>,
}

impl Ledger {
    fn new() -> Ledger {
        Ledger { steps: vec![], tracks: BTreeMap::new() }
    }

    /// Compose `op` onto `track` (starting from `from`'s current loss, or
    /// zero) and compare with the claimed index.
    fn push(&mut self, track: &str, from: Option<&str>, op: &TameOp, claimed: Q) -> Q {
        let base = from
            .and_then(|f| self.tracks.get(f).cloned())
            .or_else(|| self.tracks.get(track).cloned())
            .unwrap_or_else(Q::zero);
        let cum = &base + &op.loss;
        self.steps.push(LedgerStep {
            step: op.name.clone(),
            track: track.to_string(),
            op_loss: qs(&op.loss),
            cumulative: qs(&cum),
            claimed: qs(&claimed),
            matches: cum == claimed,
        });
        self.tracks.insert(track.to_string(), cum.clone());
        cum
    }

    fn all_match(&self) -> bool {
        self.steps.iter().all(|s| s.matches)
    }
}

fn op(name: String, loss: Q, cc: &[&str]) -> TameOp {
    TameOp::new(name, loss, cc).expect("nonnegative loss")
}

/// Replay the derivative losses of `proof` against the chain's budget.
pub fn ledger_replay(proof: &LedgerProof, chain: &ConstantChain) -> LedgerReport {
    let s0 = &chain.sigma0;
    let two_beta = q(2) * &chain.beta;
    let mut lg = Ledger::new();
    let mut notes = vec![];
    let (final_loss, budget) = match proof {
        LedgerProof::SplittingReducible | LedgerProof::SplittingSimple => {
            let simple = matches!(proof, LedgerProof::SplittingSimple);
            lg.push("p", None, &op("smoothing to small vectors".into(), q(1), &["t"]), q(1));
            lg.push("p", None, &op("splitting along S1".into(), s0.clone(), &["t", "dim_g"]), s0 + q(1));
            if simple {
                // Top slot first, then one extra σ₀ per lower slot.
                let mut cur = lg.push(
                    "p",
                    None,
                    &op(format!("splitting along Lie(S), slot {}", 2 * Q0), s0.clone(), &["t", "dim_g"]),
                    q(2) * s0 + q(1),
                );
                for j in 1..Q0 {
                    cur = lg.push(
                        "p",
                        None,
                        &op(format!("splitting along Lie(S), slot {}", 2 * Q0 - j), s0.clone(), &["t", "dim_g"]),
                        (q(2) + q(j)) * s0 + q(1),
                    );
                }
                debug_assert_eq!(cur, &chain.sigma1 + q(1));
                for j in 0..Q0 {
                    lg.push(
                        "p",
                        None,
                        &op(format!("global splitting, slot {}", Q0 - j), s0.clone(), &["t", "dim_g"]),
                        &chain.sigma1 + (q(j) + q(1)) * s0 + q(1),
                    );
                }
            } else {
                lg.push("p", None, &op("splitting along Lie(S)".into(), Q::zero(), &["t"]), s0 + q(1));
                lg.push("p", None, &op("global splitting".into(), Q::zero(), &["t"]), s0 + q(1));
            }
            let reached = lg.tracks["p"].clone();
            let claimed_remainder = if simple { &chain.sigma2 + q(1) } else { s0 + q(1) };
            lg.push("remainder", Some("p"), &op("remainders on B".into(), Q::zero(), &["t"]), claimed_remainder);
            // Remaining generators go through the conjugation estimate with
            // loss λβ+λ₁ measured from the smoothed data.
            let conj = &chain.lambda * &chain.beta + &chain.lambda1 + q(1);
            lg.push(
                "conjugation",
                None,
                &op("remainders off B".into(), conj.clone(), &["beta", "lambda"]),
                conj.clone(),
            );
            let worst = qmax(&reached, &conj);
            let fin = &worst + &two_beta;
            let emb = op("Sobolev embedding, both sides".into(), two_beta.clone(), &["beta"]);
            lg.tracks.insert("final".into(), worst.clone());
            lg.push("final", None, &emb, fin.clone());
            notes.push(format!(
                "budget ϱ = max((2q₀+1)σ₀+1+2β, λβ+λ₁+1+2β); reached {} on the splitting track",
                qs(&reached)
            ));
            (fin, chain.varrho.clone())
        }
        LedgerProof::AlmostCocycle => {
            let sigma = &chain.sigma;
            let l = q(2) * sigma + q(2);
            lg.push("eta", None, &op("split into 𝒟^l and 𝒟_l parts".into(), q(1), &["t"]), q(1));
            lg.tracks.insert("remainder".into(), q(1));
            // Large part: one cocycle solve.
            let large = losses::large_cocycle(sigma);
            let eta_large = lg.push("eta_large", Some("eta"), &large, sigma + qf(5, 2));
            let r_large = lg.push("remainder_large", Some("remainder"), &large, sigma + qf(5, 2));
            // Small part: Jordan block splitting. The remainder estimate is
            // cited without the projection loss.
            let block = losses::jordan_block(&l, sigma);
            let eta_small = lg.push("eta_small", Some("eta"), &block, (q(6) + &l / q(2)) * sigma + q(1));
            lg.tracks.insert("remainder_small".into(), Q::zero());
            let r_small = lg.push("remainder_small", None, &block, (q(6) + &l / q(2)) * sigma);
            let eta = qmax(&eta_large, &eta_small);
            let rem = qmax(&r_large, &r_small);
            notes.push(format!("remainder track total {} (σ₀ = (7+σ)σ = {})", qs(&rem), qs(s0)));
            notes.push(format!(
                "η track total {}: the 𝒟^l/𝒟_l projection costs one derivative before the block solve",
                qs(&eta)
            ));
            (qmax(&eta, &rem), s0.clone())
        }
        LedgerProof::JordanBlockCocycle { l } => {
            let per = q(6) + l / q(2);
            let m = chain.dim_g.to_integer() - BigInt::from(1);
            let m = m.to_i64().unwrap_or(1).max(1);
            for k in (1..=m).rev() {
                let step = losses::jordan_step(l);
                let name = format!("chain position {k} of block size {m}");
                lg.push("eta", None, &TameOp { name, ..step }, &per * q(m - k + 1));
            }
            notes.push(format!(
                "largest block has size {m} < dim 𝔤; per-block budget (6+l/2)σ = {}",
                qs(&(&per * &chain.sigma))
            ));
            (&per * q(m), &per * &chain.sigma)
        }
    };
    let slack = &budget - &final_loss;
    let overdraft = if slack.is_negative() { Some(qs(&-slack.clone())) } else { None };
    let pass = overdraft.is_none() && lg.all_match();
    LedgerReport {
        proof: proof.name().to_string(),
        steps: lg.steps,
        final_loss: qs(&final_loss),
        budget: qs(&budget),
        slack: qs(&slack),
        overdraft,
        notes,
        pass,
    }
}

// ---------------------------------------------------------------------------
// Schedule audit

#[derive(Clone, Debug, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    /// `rhs − lhs` for `<`, `lhs − rhs` for `>`; positive iff it holds.
    pub margin: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub varrho: String,
    pub l0: String,
    pub a: String,
    pub b: String,
    pub inequalities: Vec<Inequality>,
    /// The stated admissibility `ℓ₀ > 120(ϱ+1)`.
    pub stated_threshold: String,
    /// Smallest threshold making `b < a` true: `ℓ₀ > ϱ(ϱ+1)`.
    pub repaired_threshold: String,
    /// `ℓ₀ > max(120(ϱ+1), ϱ(ϱ+1))`.
    pub admissible: bool,
    pub failures: Vec<String>,
    pub pass: bool,
}

fn less(name: &str, lhs: Q, rhs: Q) -> Inequality {
    let m = &rhs - &lhs;
    Inequality { name: name.into(), lhs: qs(&lhs), rhs: qs(&rhs), holds: m.is_positive(), margin: qs(&m) }
}

fn greater(name: &str, lhs: Q, rhs: Q) -> Inequality {
    let m = &lhs - &rhs;
    Inequality { name: name.into(), lhs: qs(&lhs), rhs: qs(&rhs), holds: m.is_positive(), margin: qs(&m) }
}

/// Audit the iteration schedule for a given `ϱ` and `ℓ₀`, in exact
/// arithmetic.
pub fn audit_varrho(varrho: &Q, l0: &BigInt) -> Result<AuditReport> {
    let l0q = Q::from_integer(l0.clone());
    if l0q <= *varrho {
        return Err(Error::Precondition(format!("l0 = {} must exceed varrho = {}", l0, qs(varrho))));
    }
    let a = (varrho + q(1)) / &l0q;
    let b = varrho / (&l0q - varrho);
    let one = q(1);
    let two = q(2);
    let four = q(4);
    let ineqs = vec![
        less("a < 1/120", a.clone(), qf(1, 120)),
        less("b < a", b.clone(), a.clone()),
        greater("1 - 6a > 5/6", &one - q(6) * &a, qf(5, 6)),
        greater("1 - 4a > 5/6", &one - &four * &a, qf(5, 6)),
        greater("2 - 20a > 11/6", &two - q(20) * &a, qf(11, 6)),
        greater("3 - 6a > 2 - 20a", q(3) - q(6) * &a, &two - q(20) * &a),
        greater("3 - 6a > 2 - 4a", q(3) - q(6) * &a, &two - &four * &a),
        greater("(2-4a)(1-b) - 5b > 2 - 11a", (&two - &four * &a) * (&one - &b) - q(5) * &b, &two - q(11) * &a),
        greater("2 - 11a > 11/6", &two - q(11) * &a, qf(11, 6)),
        greater("(2-4a)(1-b) - 5b > 11/6", (&two - &four * &a) * (&one - &b) - q(5) * &b, qf(11, 6)),
        greater("-5 - 6a > -11/2", -q(5) - q(6) * &a, -qf(11, 2)),
    ];
    let stated = q(120) * (varrho + q(1));
    let repaired = varrho * (varrho + q(1));
    let admissible = l0q > stated && l0q > repaired;
    let failures: Vec<String> = ineqs.iter().filter(|i| !i.holds).map(|i| i.name.clone()).collect();
    let pass = failures.is_empty() && admissible;
    Ok(AuditReport {
        varrho: qs(varrho),
        l0: l0.to_string(),
        a: qs(&a),
        b: qs(&b),
        inequalities: ineqs,
        stated_threshold: qs(&stated),
        repaired_threshold: qs(&repaired),
        admissible,
        failures,
        pass,
    })
}

pub fn audit_schedule(chain: &ConstantChain, l0: &BigInt) -> Result<AuditReport> {
    audit_varrho(&chain.varrho, l0)
}

// ---------------------------------------------------------------------------
// Iteration simulator

/// State after step `n`. Norms are natural logarithms; `-inf` encodes an
/// exact zero.
#[derive(Clone, Debug, Serialize)]
pub struct KamState {
    pub n: usize,
    pub ln_eps: f64,
    pub ln_t: f64,
    pub ln_c0: f64,
    pub ln_cl: f64,
    pub c0_ok: bool,
    pub cl_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub varrho: f64,
    pub l0: f64,
    pub a: f64,
    pub b: f64,
    pub c_assumed: f64,
    pub states: Vec<KamState>,
    pub first_violation: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub eps0: f64,
    pub c_assumed: f64,
    pub n_steps: usize,
    /// Smallness threshold for `ε₀`.
    pub c_bar: f64,
}

fn lse(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Simulate the worst-case recurrences of the iterative step with all
/// constants equal to `c_assumed`. The schedule must pass the audit.
pub fn simulate_iteration(chain: &ConstantChain, l0: &BigInt, cfg: &SimConfig) -> Result<Trajectory> {
    let audit = audit_schedule(chain, l0)?;
    if !audit.pass {
        return Err(Error::Precondition(format!("schedule audit failed: {}", audit.failures.join(", "))));
    }
    if !(cfg.eps0 >= 0.0 && cfg.eps0 < cfg.c_bar) {
        return Err(Error::Precondition(format!("eps0 must lie in [0, {})", cfg.c_bar)));
    }
    if !(cfg.c_assumed > 0.0) {
        return Err(Error::Precondition("c_assumed must be positive".into()));
    }
    let rho = chain.varrho.to_f64().unwrap_or(f64::INFINITY);
    let l = l0.to_f64().unwrap_or(f64::INFINITY);
    let a = (rho + 1.0) / l;
    let b = rho / (l - rho);
    let lnc = cfg.c_assumed.ln();
    let mut states = vec![];
    let mut first_violation = None;

    if cfg.eps0 == 0.0 {
        for n in 0..=cfg.n_steps {
            states.push(KamState {
                n,
                ln_eps: f64::NEG_INFINITY,
                ln_t: f64::INFINITY,
                ln_c0: f64::NEG_INFINITY,
                ln_cl: f64::NEG_INFINITY,
                c0_ok: true,
                cl_ok: true,
            });
        }
        return Ok(Trajectory { varrho: rho, l0: l, a, b, c_assumed: cfg.c_assumed, states, first_violation });
    }

    let mut ln_eps = cfg.eps0.ln();
    // Start saturated at both induction bounds.
    let mut c0 = ln_eps;
    let mut cl = -3.0 * ln_eps;
    let tol = 1e-9;
    for n in 0..=cfg.n_steps {
        let ln_t = -6.0 / l * ln_eps;
        let c0_ok = c0 <= ln_eps + tol * ln_eps.abs();
        let cl_ok = cl <= -3.0 * ln_eps + tol * ln_eps.abs();
        if first_violation.is_none() && !(c0_ok && cl_ok) {
            first_violation = Some(n);
        }
        states.push(KamState { n, ln_eps, ln_t, ln_c0: c0, ln_cl: cl, c0_ok, cl_ok });
        if n == cfg.n_steps {
            break;
        }
        // Interpolated C^r norm.
        let nr = |r: f64| lnc + (l - r) / l * c0 + r / l * cl;
        // max over k of t^k ‖p‖_{C^{l-k}}: linear in k, so an endpoint.
        let kmax = l - rho + 1.0;
        let m1 = f64::max(nr(l), kmax * ln_t + nr(l - kmax));
        let inner = lse(&[c0 + nr(rho + 1.0), (rho + 1.0 - l) * ln_t + cl]);
        let term_a = lnc + b * m1 + (1.0 - b) * inner;
        let term_b = lnc + 2.0 * (1.0 + rho) * ln_t + 2.0 * nr(1.0 + rho);
        let term_c = lnc + (rho + 1.0 - l) * ln_t + cl;
        let next_c0 = lse(&[term_a, term_b, term_c]);
        // C^{ℓ₀} growth: endpoints k = ϱ and k = ℓ₀+ϱ.
        let m2 = f64::max(rho * ln_t + nr(l), (l + rho) * ln_t + nr(0.0));
        let next_cl = lse(&[lnc + rho * ln_t + cl, lnc, lnc + m2]);
        c0 = next_c0;
        cl = next_cl;
        ln_eps *= 11.0 / 6.0;
    }
    Ok(Trajectory { varrho: rho, l0: l, a, b, c_assumed: cfg.c_assumed, states, first_violation })
}

// ---------------------------------------------------------------------------
// Torus smoothing

/// Real trigonometric polynomial on `𝕋^d`, stored by its Fourier
/// coefficients `c_k` (with `c_{-k} = conj(c_k)`).
#[derive(Clone, Debug, PartialEq)]
pub struct TorusField {
    pub d: usize,
    pub cutoff: i64,
    pub coeffs: BTreeMap<Vec<i64>, (f64, f64)>,
}

fn neg(k: &[i64]) -> Vec<i64> {
    k.iter().map(|x| -x).collect()
}

fn norm2(k: &[i64]) -> f64 {
    k.iter().map(|x| (x * x) as f64).sum()
}

impl TorusField {
    pub fn zero(d: usize, cutoff: i64) -> TorusField {
        TorusField { d, cutoff, coeffs: BTreeMap::new() }
    }

    /// Set `c_k` and its conjugate partner.
    pub fn set(&mut self, k: &[i64], re: f64, im: f64) {
        assert_eq!(k.len(), self.d);
        if k.iter().all(|&x| x == 0) {
            self.coeffs.insert(k.to_vec(), (re, 0.0));
            return;
        }
        self.coeffs.insert(k.to_vec(), (re, im));
        self.coeffs.insert(neg(k), (re, -im));
    }

    pub fn single_mode(d: usize, k: &[i64], amp: f64) -> TorusField {
        let cutoff = k.iter().map(|x| x.abs()).max().unwrap_or(0);
        let mut f = TorusField::zero(d, cutoff);
        f.set(k, amp, 0.0);
        f
    }

    /// Random field with all modes `|k_i| ≤ cutoff`.
    pub fn random(d: usize, cutoff: i64, seed: u64) -> TorusField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = TorusField::zero(d, cutoff);
        let side = (2 * cutoff + 1) as usize;
        let total = side.pow(d as u32);
        for idx in 0..total {
            let mut k = Vec::with_capacity(d);
            let mut r = idx;
            for _ in 0..d {
                k.push((r % side) as i64 - cutoff);
                r /= side;
            }
            // Only fill one of each ±k pair.
            if k > neg(&k) || k.iter().all(|&x| x == 0) {
                f.set(&k, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        f
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|(k, &(re, im))| match self.coeffs.get(&neg(k)) {
            Some(&(r2, i2)) => r2 == re && i2 == -im,
            None => re == 0.0 && im == 0.0,
        })
    }

    /// Surrogate `C^s` norm: `Σ (1+|k|²)^{s/2} |c_k|`.
    pub fn cs_norm(&self, s: f64) -> f64 {
        self.coeffs.iter().map(|(k, &(re, im))| (1.0 + norm2(k)).powf(s / 2.0) * re.hypot(im)).sum()
    }

    /// Weighted `ℓ²` (Sobolev) norm: `(Σ (1+|k|²)^s |c_k|²)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.coeffs.iter().map(|(k, &(re, im))| (1.0 + norm2(k)).powf(s) * (re * re + im * im)).sum::<f64>().sqrt()
    }

    /// Sharp cutoff `𝔰_t`: keep `|k| ≤ t`.
    pub fn smooth(&self, t: f64) -> TorusField {
        let coeffs = self.coeffs.iter().filter(|(k, _)| norm2(k) <= t * t).map(|(k, v)| (k.clone(), *v)).collect();
        TorusField { d: self.d, cutoff: self.cutoff, coeffs }
    }

    /// `(I − 𝔰_t)`: keep `|k| > t`.
    pub fn tail(&self, t: f64) -> TorusField {
        let coeffs = self.coeffs.iter().filter(|(k, _)| norm2(k) > t * t).map(|(k, v)| (k.clone(), *v)).collect();
        TorusField { d: self.d, cutoff: self.cutoff, coeffs }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothingBounds {
    pub t: f64,
    pub s: f64,
    pub s_prime: f64,
    /// `‖𝔰_t Y‖_{s+s'}` and `t^{s'} ‖Y‖_s`.
    pub smooth_lhs: f64,
    pub smooth_rhs: f64,
    /// `‖(I−𝔰_t) Y‖_{s−s'}` and `t^{−s'} ‖Y‖_s`.
    pub tail_lhs: f64,
    pub tail_rhs: f64,
    /// Empirical constants `lhs / rhs` (0 when both vanish).
    pub smooth_const: f64,
    pub tail_const: f64,
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a / b
    }
}

pub fn torus_smoothing(t: f64, y: &TorusField, s: f64, s_prime: f64) -> Result<(TorusField, SmoothingBounds)> {
    if !(t > 1.0) {
        return Err(Error::Precondition("t must exceed 1".into()));
    }
    if !(s >= s_prime && s_prime >= 0.0) {
        return Err(Error::Precondition("need s >= s' >= 0".into()));
    }
    let smoothed = y.smooth(t);
    let tail = y.tail(t);
    let ys = y.cs_norm(s);
    let smooth_lhs = smoothed.cs_norm(s + s_prime);
    let smooth_rhs = t.powf(s_prime) * ys;
    let tail_lhs = tail.cs_norm(s - s_prime);
    let tail_rhs = t.powf(-s_prime) * ys;
    let b = SmoothingBounds {
        t,
        s,
        s_prime,
        smooth_lhs,
        smooth_rhs,
        tail_lhs,
        tail_rhs,
        smooth_const: ratio(smooth_lhs, smooth_rhs),
        tail_const: ratio(tail_lhs, tail_rhs),
    };
    Ok((smoothed, b))
}

#[derive(Clone, Debug, Serialize)]
pub struct GridReport {
    pub s_max: u32,
    pub ts: Vec<f64>,
    pub cases: Vec<SmoothingBounds>,
    pub max_constant: f64,
    pub allowed: f64,
    pub pass: bool,
}

/// Sweep `s ∈ 0..=s_max`, `s' ∈ 0..=s`, `t ∈ ts` on random 2-torus
/// fields and record the worst empirical constant.
pub fn smoothing_grid(s_max: u32, ts: &[f64], cutoff: i64, fields: usize, seed: u64) -> Result<GridReport> {
    let ys: Vec<TorusField> = (0..fields).map(|i| TorusField::random(2, cutoff, seed.wrapping_add(i as u64))).collect();
    let mut cases = vec![];
    let mut max_constant: f64 = 0.0;
    for s in 0..=s_max {
        for sp in 0..=s {
            for &t in ts {
                for y in &ys {
                    let (_, b) = torus_smoothing(t, y, s as f64, sp as f64)?;
                    max_constant = max_constant.max(b.smooth_const).max(b.tail_const);
                    cases.push(b);
                }
            }
        }
    }
    let allowed = 2f64.powi(s_max as i32);
    Ok(GridReport { s_max, ts: ts.to_vec(), cases, max_constant, allowed, pass: max_constant <= allowed })
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationResult {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
}

/// Check `‖v‖_t ≤ ‖v‖₀^{1−t/s} ‖v‖_s^{t/s}` given the three norms.
pub fn interpolation_check(norms: (f64, f64, f64), t: f64, s: f64) -> Result<InterpolationResult> {
    if !(0.0 <= t && t <= s) {
        return Err(Error::Precondition("need 0 <= t <= s".into()));
    }
    let (n0, nt, ns) = norms;
    let rhs = if s == 0.0 { n0 } else { n0.powf(1.0 - t / s) * ns.powf(t / s) };
    let r = ratio(nt, rhs);
    Ok(InterpolationResult { lhs: nt, rhs, ratio: r, pass: nt <= rhs * (1.0 + 1e-12) })
}
