use lieverify_core::lie_core::{q, qf, Q};
use lieverify_core::tame_kam::*;
use num_bigint::BigInt;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type R = Ratio<i128>;

fn r(n: i128, d: i128) -> R {
    R::new(n, d)
}

fn rs(x: R) -> String {
    x.to_string()
}

/// Independent evaluation of the constant chain on machine rationals.
fn oracle_chain(dim_g: R, beta: R, lambda: R, lambda1: R) -> [R; 5] {
    let sigma = r(3, 2) * dim_g;
    let sigma0 = (r(7, 1) + sigma) * sigma;
    let sigma1 = r(10, 1) * sigma0;
    let sigma2 = sigma1 + r(9, 1) * sigma0;
    let one = r(19, 1) * sigma0 + r(1, 1) + r(2, 1) * beta;
    let two = lambda * beta + lambda1 + r(1, 1) + r(2, 1) * beta;
    [sigma, sigma0, sigma1, sigma2, one.max(two)]
}

fn chain(d: i64, b: i64, l: i64, l1: i64) -> ConstantChain {
    constant_chain(q(d), q(b), q(l), q(l1)).unwrap()
}

fn qstr(x: &Q) -> String {
    x.to_string()
}

#[test]
fn chain_small_dimension_example() {
    let c = chain(2, 1, 2, 3);
    assert_eq!([&c.sigma, &c.sigma0, &c.sigma1, &c.sigma2, &c.varrho], [&q(3), &q(30), &q(300), &q(570), &q(573)]);
    assert_eq!(c.q0, q(9));
}

#[test]
fn chain_c3_dimension() {
    let c = chain(21, 1, 0, 0);
    assert_eq!(c.sigma, qf(63, 2));
    assert_eq!(c.sigma0, qf(4851, 4));
    let o = oracle_chain(r(21, 1), r(1, 1), r(0, 1), r(0, 1));
    let got = [&c.sigma, &c.sigma0, &c.sigma1, &c.sigma2, &c.varrho].map(qstr);
    assert_eq!(got, o.map(rs));
}

#[test]
fn chain_second_branch_collapses() {
    for d in [3, 8, 14, 21, 52, 78, 133, 248] {
        let c = chain(d, 0, 0, 0);
        assert_eq!(c.varrho, q(19) * &c.sigma0 + q(1));
    }
    // second branch dominates when λβ is large
    let c = chain(3, 2, 10_000, 5);
    assert_eq!(c.varrho, q(2 * 10_000 + 5 + 1 + 4));
}

#[test]
fn chain_matches_oracle_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let d = rng.random_range(1..300i64);
        let b = rng.random_range(0..20i64);
        let l = rng.random_range(0..5000i64);
        let l1 = rng.random_range(0..5000i64);
        let c = chain(d, b, l, l1);
        let o = oracle_chain(r(d as i128, 1), r(b as i128, 1), r(l as i128, 1), r(l1 as i128, 1));
        assert_eq!([&c.sigma, &c.sigma0, &c.sigma1, &c.sigma2, &c.varrho].map(qstr), o.map(rs));
    }
}

#[test]
fn chain_rejects_bad_inputs() {
    assert!(constant_chain(q(0), q(1), q(1), q(1)).is_err());
    assert!(constant_chain(q(3), q(-1), q(1), q(1)).is_err());
    assert!(constant_chain(q(3), q(1), q(-1), q(1)).is_err());
}

#[test]
fn tame_op_composition() {
    let a = TameOp::new("a", qf(3, 2), &["t"]).unwrap();
    let b = TameOp::new("b", q(4), &["l", "t"]).unwrap();
    let ab = a.then(&b);
    assert_eq!(ab.loss, qf(11, 2));
    assert_eq!(ab.const_class, ["l", "t"]);
    assert_eq!(a.parallel(&b).loss, q(4));
    assert!(TameOp::new("neg", q(-1), &[]).is_err());
    // the Jordan block is σ chain steps
    let sigma = q(6);
    let l = q(4);
    let step = losses::jordan_step(&l);
    let mut acc = TameOp::new("id", q(0), &[]).unwrap();
    for _ in 0..6 {
        acc = acc.then(&step);
    }
    assert_eq!(acc.loss, losses::jordan_block(&l, &sigma).loss);
}

#[test]
fn ledger_splitting_reducible() {
    let c = chain(2, 1, 2, 3);
    let rep = ledger_replay(&LedgerProof::SplittingReducible, &c);
    // σ₀ + 1 on the splitting track, λβ+λ₁+1 = 6 on conjugation, +2β
    assert_eq!(rep.final_loss, "33");
    assert_eq!(rep.budget, "573");
    assert_eq!(rep.slack, "540");
    assert!(rep.pass && rep.overdraft.is_none());
    assert!(rep.steps.iter().all(|s| s.matches));
}

#[test]
fn ledger_splitting_simple_is_tight() {
    for (d, b) in [(2, 1), (21, 1), (8, 0), (248, 3)] {
        let c = chain(d, b, 0, 0);
        let rep = ledger_replay(&LedgerProof::SplittingSimple, &c);
        assert_eq!(rep.final_loss, qstr(&(&c.sigma2 + q(1) + q(2 * b))));
        assert_eq!(rep.slack, "0");
        assert!(rep.pass);
        // σ₁ + 1 after the Lie(S) slots
        let last_local = rep.steps.iter().filter(|s| s.step.contains("Lie(S)")).next_back().unwrap();
        assert_eq!(last_local.cumulative, qstr(&(&c.sigma1 + q(1))));
    }
    // when the conjugation branch dominates it sets the budget exactly
    let c = chain(2, 2, 10_000, 5);
    let rep = ledger_replay(&LedgerProof::SplittingSimple, &c);
    assert_eq!(rep.final_loss, qstr(&c.varrho));
    assert!(rep.pass);
}

#[test]
fn ledger_almost_cocycle_overdraft() {
    for d in [2, 3, 8, 21] {
        let c = chain(d, 0, 0, 0);
        let rep = ledger_replay(&LedgerProof::AlmostCocycle, &c);
        let rem = rep.steps.iter().filter(|s| s.track.starts_with("remainder")).map(|s| s.cumulative.clone());
        let worst = rem.map(|s| s.parse::<num_rational::BigRational>().unwrap()).max().unwrap();
        assert_eq!(worst, c.sigma0, "remainder track totals (7+σ)σ");
        assert_eq!(rep.final_loss, qstr(&(&c.sigma0 + q(1))));
        assert_eq!(rep.overdraft.as_deref(), Some("1"));
        assert!(!rep.pass);
    }
}

#[test]
fn ledger_jordan_block() {
    let c = chain(2, 0, 0, 0);
    let rep = ledger_replay(&LedgerProof::JordanBlockCocycle { l: q(0) }, &c);
    assert_eq!(rep.budget, "18"); // 6σ
    assert_eq!(rep.final_loss, "6");
    assert!(rep.pass);
    for d in [3, 8, 21] {
        let c = chain(d, 0, 0, 0);
        let l = q(2) * &c.sigma + q(2);
        let rep = ledger_replay(&LedgerProof::JordanBlockCocycle { l: l.clone() }, &c);
        assert_eq!(rep.steps.len() as i64, d - 1);
        assert_eq!(rep.final_loss, qstr(&((q(6) + &l / q(2)) * q(d - 1))));
        assert!(rep.pass);
    }
}

/// Recompute every schedule inequality on machine rationals.
fn oracle_audit(varrho: i128, l0: i128) -> (R, R, Vec<bool>) {
    let a = r(varrho + 1, l0);
    let b = r(varrho, l0 - varrho);
    let n = |x: i128| r(x, 1);
    let lhs8 = (n(2) - n(4) * a) * (n(1) - b) - n(5) * b;
    let holds = vec![
        a < r(1, 120),
        b < a,
        n(1) - n(6) * a > r(5, 6),
        n(1) - n(4) * a > r(5, 6),
        n(2) - n(20) * a > r(11, 6),
        n(3) - n(6) * a > n(2) - n(20) * a,
        n(3) - n(6) * a > n(2) - n(4) * a,
        lhs8 > n(2) - n(11) * a,
        n(2) - n(11) * a > r(11, 6),
        lhs8 > r(11, 6),
        -n(5) - n(6) * a > -r(11, 2),
    ];
    (a, b, holds)
}

#[test]
fn audit_matches_oracle() {
    let cases =
        [(573, 68880), (573, 328903), (100, 12120), (100, 12121), (100, 1_000_000), (5, 720), (5, 721), (40, 5000)];
    for (rho, l0) in cases {
        let rep = audit_varrho(&q(rho as i64), &BigInt::from(l0)).unwrap();
        let (a, b, holds) = oracle_audit(rho, l0);
        assert_eq!(rep.a, rs(a));
        assert_eq!(rep.b, rs(b));
        let got: Vec<bool> = rep.inequalities.iter().map(|i| i.holds).collect();
        assert_eq!(got, holds, "varrho {rho} l0 {l0}");
        let admissible = l0 > 120 * (rho + 1) && l0 > rho * (rho + 1);
        assert_eq!(rep.admissible, admissible);
        assert_eq!(rep.pass, admissible && holds.iter().all(|&h| h));
    }
}

#[test]
fn audit_named_examples() {
    let rep = audit_varrho(&q(573), &BigInt::from(68880)).unwrap();
    assert_eq!(rep.a, "1/120");
    assert!(rep.failures.contains(&"b < a".to_string()));
    assert_eq!(rep.repaired_threshold, "328902");
    assert_eq!(rep.stated_threshold, "68880");

    let rep = audit_varrho(&q(573), &BigInt::from(328903)).unwrap();
    assert!(rep.pass);
    assert!(rep.inequalities.iter().all(|i| i.margin.parse::<num_rational::BigRational>().unwrap() > q(0)));

    // at ℓ₀ = 120(ϱ+1), a = 1/120 exactly: the strict inequality has zero margin
    let rep = audit_varrho(&q(100), &BigInt::from(12120)).unwrap();
    assert_eq!(rep.a, "1/120");
    let first = &rep.inequalities[0];
    assert_eq!((first.holds, first.margin.as_str()), (false, "0"));
    assert!(rep.inequalities[1].holds, "b < a holds since 100·101 < 12120");
    assert!(!rep.pass);
    assert!(audit_varrho(&q(100), &BigInt::from(12121)).unwrap().pass);

    assert!(audit_varrho(&q(100), &BigInt::from(100)).is_err());
    assert!(audit_schedule(&chain(2, 1, 2, 3), &BigInt::from(328903)).unwrap().pass);
}

fn sim(rho: i64, l0: i64, eps0: f64, c: f64, n: usize) -> lieverify_core::Result<Trajectory> {
    let cfg = SimConfig { eps0, c_assumed: c, n_steps: n, c_bar: 0.5 };
    simulate_iteration(&ConstantChain::from_varrho(q(rho)), &BigInt::from(l0), &cfg)
}

#[test]
fn simulate_nominal_run() {
    let t = sim(100, 1_000_000, 1e-4, 1.0, 50).unwrap();
    assert_eq!(t.states.len(), 51);
    assert!(t.first_violation.is_none());
    let e0 = 1e-4f64.ln();
    for s in &t.states {
        let want = (11.0f64 / 6.0).powi(s.n as i32) * e0;
        assert!((s.ln_eps - want).abs() <= 1e-9 * want.abs());
        assert!((s.ln_t - (-6.0 / 1e6) * s.ln_eps).abs() <= 1e-9 * s.ln_t.abs().max(1.0));
    }
    // ε₅₀ underflows in floating point; the log stays finite
    assert_eq!(t.states[50].ln_eps.exp(), 0.0);
    assert!(t.states[50].ln_eps.is_finite());
}

#[test]
fn simulate_degenerate_and_errors() {
    let t = sim(100, 12121, 0.0, 1.0, 5).unwrap();
    assert!(t.states.iter().all(|s| s.ln_eps == f64::NEG_INFINITY && s.ln_c0 == f64::NEG_INFINITY));
    assert!(t.first_violation.is_none());
    assert!(sim(100, 12120, 1e-4, 1.0, 5).is_err(), "audit failure rejects");
    assert!(sim(573, 68880, 1e-4, 1.0, 5).is_err());
    assert!(sim(100, 1_000_000, 0.6, 1.0, 5).is_err());
    assert!(sim(100, 1_000_000, -1e-3, 1.0, 5).is_err());
}

#[test]
fn simulate_stress_constant() {
    let t = sim(100, 1_000_000, 1e-4, 1e6, 50).unwrap();
    let v = t.first_violation.expect("large constant must break the invariant");
    assert!((1..=50).contains(&v));
    // tight schedule with C = 1 also breaks (see decisions)
    assert!(sim(100, 12121, 1e-4, 1.0, 10).unwrap().first_violation.is_some());
}

#[test]
fn torus_single_mode_below_cutoff() {
    for t in [2.0, 4.0, 8.0] {
        let y = TorusField::single_mode(2, &[1, 1], 0.7);
        let (sm, b) = torus_smoothing(t, &y, 3.0, 2.0).unwrap();
        assert_eq!(sm, y);
        assert_eq!(b.tail_lhs, 0.0);
        // ((1+|k|²)^{1/2}/t)^{s'}
        let want = (3.0f64.sqrt() / t).powi(2);
        assert!((b.smooth_const - want).abs() <= 1e-12);
    }
}

#[test]
fn torus_single_mode_at_twice_cutoff() {
    for t in [2.0f64, 4.0, 8.0, 16.0] {
        let k = 2 * t as i64;
        let y = TorusField::single_mode(2, &[k, 0], 1.3);
        for s in 0..=4 {
            for sp in 0..=s {
                let (sm, b) = torus_smoothing(t, &y, s as f64, sp as f64).unwrap();
                assert!(sm.coeffs.is_empty());
                let w = 1.0 + 4.0 * t * t;
                let want = w.powf(-(sp as f64) / 2.0) * t.powi(sp);
                assert!((b.tail_const - want).abs() <= 1e-12 * want.max(1.0));
                assert!(b.tail_lhs <= 2f64.powi(s) * b.tail_rhs);
            }
        }
    }
}

#[test]
fn torus_fields_are_real() {
    let y = TorusField::random(2, 6, 9);
    assert!(y.is_real());
    assert_eq!(y.coeffs.len(), 13 * 13);
    assert!(y.smooth(3.0).is_real() && y.tail(3.0).is_real());
    let total = y.smooth(3.0).cs_norm(2.0) + y.tail(3.0).cs_norm(2.0);
    assert!((total - y.cs_norm(2.0)).abs() <= 1e-9 * total);
    assert!(torus_smoothing(1.0, &y, 1.0, 0.0).is_err());
    assert!(torus_smoothing(2.0, &y, 1.0, 2.0).is_err());
}

#[test]
fn torus_grid_constants_bounded() {
    let g = smoothing_grid(4, &[2.0, 4.0, 8.0, 16.0], 24, 3, 1).unwrap();
    assert_eq!(g.cases.len(), 15 * 4 * 3);
    assert_eq!(g.allowed, 16.0);
    assert!(g.pass, "max constant {}", g.max_constant);
    // analytic bound 2^{s'/2}
    for c in &g.cases {
        let bound = 2f64.powf(c.s_prime / 2.0) * (1.0 + 1e-12);
        assert!(c.smooth_const <= bound && c.tail_const <= bound);
    }
}

#[test]
fn interpolation_examples() {
    let y = TorusField::random(2, 4, 2);
    let n = |s: f64| y.sobolev_norm(s);
    let r0 = interpolation_check((n(0.0), n(0.0), n(3.0)), 0.0, 3.0).unwrap();
    assert!(r0.pass && (r0.ratio - 1.0).abs() <= 1e-12);
    let rs_ = interpolation_check((n(0.0), n(3.0), n(3.0)), 3.0, 3.0).unwrap();
    assert!(rs_.pass && (rs_.ratio - 1.0).abs() <= 1e-12);

    let m = TorusField::single_mode(2, &[3, 4], 0.25);
    let nm = |s: f64| m.sobolev_norm(s);
    let res = interpolation_check((nm(0.0), nm(1.5), nm(4.0)), 1.5, 4.0).unwrap();
    assert!((res.ratio - 1.0).abs() <= 1e-12, "single mode is tight: {}", res.ratio);

    // 100 modes: 50 conjugate pairs
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut f = TorusField::zero(2, 40);
    while f.coeffs.len() < 100 {
        let k = [rng.random_range(1..40), rng.random_range(-40..40)];
        f.set(&k, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    assert_eq!(f.coeffs.len(), 100);
    let nf = |s: f64| f.sobolev_norm(s);
    for s in [1.0, 2.0, 5.0, 8.0] {
        let res = interpolation_check((nf(0.0), nf(s / 2.0), nf(s)), s / 2.0, s).unwrap();
        assert!(res.pass && res.ratio <= 1.0 + 1e-12);
    }
    assert!(interpolation_check((1.0, 1.0, 1.0), 3.0, 2.0).is_err());
}
