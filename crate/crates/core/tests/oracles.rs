//! Independent oracles: explicit root lists, image of ad from root
//! arithmetic, Jordan block sizes from rank sequences, and a dense solver
//! for the back-substitution.

use lieverify_core::lie_core::{jordan_chains, q, QMatrix};
use lieverify_core::model_rep::{gauss, jordan_backsub_solve, relative_residual, ExtendedVector};
use lieverify_core::{LieAlgebra, LieType, Root, SparseVec, Subspace, Q};
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

// ------------------------------------------------------------- root lists

fn pm_pairs(n: usize, dim: usize) -> Vec<Vec<i32>> {
    let mut out = vec![];
    for i in 0..n {
        for j in i + 1..n {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0; dim];
                v[i] = 2 * a;
                v[j] = 2 * b;
                out.push(v);
            }
        }
    }
    out
}

fn singles(n: usize, c: i32) -> Vec<Vec<i32>> {
    let mut out = vec![];
    for i in 0..n {
        for s in [1, -1] {
            let mut v = vec![0; n];
            v[i] = 2 * c * s;
            out.push(v);
        }
    }
    out
}

/// Doubled L-coordinates of every root, written out by hand.
fn expected_roots(t: LieType, n: usize) -> Vec<Vec<i32>> {
    match t {
        LieType::A => {
            let mut out = vec![];
            for i in 0..=n {
                for j in 0..=n {
                    if i != j {
                        let mut v = vec![0; n + 1];
                        v[i] = 2;
                        v[j] = -2;
                        out.push(v);
                    }
                }
            }
            out
        }
        LieType::B => [pm_pairs(n, n), singles(n, 1)].concat(),
        LieType::C => [pm_pairs(n, n), singles(n, 2)].concat(),
        LieType::D => pm_pairs(n, n),
        LieType::E if n == 8 => {
            let mut out = pm_pairs(8, 8);
            for mask in 0u32..256 {
                if mask.count_ones() % 2 == 0 {
                    out.push((0..8).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
                }
            }
            out
        }
        _ => unreachable!(),
    }
}

fn root_set(alg: &LieAlgebra) -> BTreeSet<Vec<i32>> {
    alg.root_system.roots().iter().map(|r| r.doubled().to_vec()).collect()
}

#[test]
fn classical_roots_match_explicit_lists() {
    for (t, ranks) in [(LieType::A, 1..=8), (LieType::B, 2..=8), (LieType::C, 2..=8), (LieType::D, 3..=8)] {
        for n in ranks {
            let alg = LieAlgebra::new(t, n).unwrap();
            let want: BTreeSet<Vec<i32>> = expected_roots(t, n).into_iter().collect();
            assert_eq!(root_set(&alg), want, "{t}{n}");
            assert_eq!(alg.root_system.len(), want.len());
        }
    }
}

#[test]
fn e8_roots_split_into_integral_and_half_integral() {
    let alg = LieAlgebra::new(LieType::E, 8).unwrap();
    let want: BTreeSet<Vec<i32>> = expected_roots(LieType::E, 8).into_iter().collect();
    assert_eq!(want.len(), 240);
    assert_eq!(root_set(&alg), want);
    let half = alg.root_system.roots().iter().filter(|r| r.doubled().iter().all(|c| c.abs() == 1)).count();
    assert_eq!(half, 128);
}

#[test]
fn exceptional_root_counts() {
    for (t, n, count) in [(LieType::G, 2, 12), (LieType::F, 4, 48), (LieType::E, 6, 72), (LieType::E, 7, 126)] {
        let alg = LieAlgebra::new(t, n).unwrap();
        assert_eq!(alg.root_system.len(), count, "{t}{n}");
        assert_eq!(alg.dim(), count + n);
    }
}

#[test]
fn small_named_roots() {
    let c3 = LieAlgebra::new(LieType::C, 3).unwrap();
    let rs = &c3.root_system;
    assert_eq!(rs.len(), 18);
    for terms in [[(1, 2)].as_slice(), &[(1, -2)], &[(1, 1), (2, -1)], &[(1, -1), (2, 1)]] {
        assert!(rs.root_from_terms(terms).is_some(), "{terms:?}");
    }
    let a1 = LieAlgebra::new(LieType::A, 1).unwrap();
    let names: BTreeSet<String> = a1.root_system.roots().iter().map(|r| r.to_string()).collect();
    assert_eq!(names, ["L1-L2".to_string(), "-L1+L2".to_string()].into_iter().collect());
}

// ------------------------------------------------------- image of ad u_φ

/// `Im ad u_φ` predicted from root arithmetic only: `[u_φ, u_β] ≠ 0` exactly
/// when `φ+β` is a root, `[u_φ, u_{−φ}]` is the coroot, and `[u_φ, h]` is a
/// multiple of `u_φ` that is nonzero for some `h`.
fn image_oracle(alg: &LieAlgebra, phi: &Root) -> Subspace {
    let rs = &alg.root_system;
    let mut vecs: Vec<SparseVec> = vec![alg.root_vector(phi).unwrap().coeffs, alg.coroot(phi).unwrap().coeffs];
    for beta in rs.roots() {
        let s = phi.add(beta);
        if rs.contains(&s) {
            vecs.push(alg.root_vector(&s).unwrap().coeffs);
        }
    }
    Subspace::span(alg.dim(), vecs.iter())
}

#[test]
fn image_of_ad_matches_root_arithmetic() {
    for (t, n) in [(LieType::A, 3), (LieType::B, 3), (LieType::C, 3), (LieType::D, 4), (LieType::G, 2), (LieType::F, 4)]
    {
        let alg = LieAlgebra::new(t, n).unwrap();
        for phi in alg.root_system.roots() {
            let u = alg.root_vector(phi).unwrap();
            assert_eq!(alg.image_of_ad(&u), image_oracle(&alg, phi), "{t}{n} {phi}");
        }
    }
}

#[test]
fn image_of_long_root_in_c3() {
    let alg = LieAlgebra::new(LieType::C, 3).unwrap();
    let phi = alg.root_system.root_from_terms(&[(1, 2)]).unwrap();
    let im = alg.image_of_ad(&alg.root_vector(&phi).unwrap());
    // u_{L1±L2}, u_{L1±L3}, the coroot, and u_{2L1} itself (from [u, h]).
    assert_eq!(im.rank(), 6);
    assert!(im.contains(&alg.coroot(&phi).unwrap().coeffs));
    assert!(im.contains(&alg.root_vector(&phi).unwrap().coeffs));
    for terms in [[(1, 1), (2, 1)], [(1, 1), (2, -1)], [(1, 1), (3, 1)], [(1, 1), (3, -1)]] {
        let r = alg.root_system.root_from_terms(&terms).unwrap();
        assert!(im.contains(&alg.root_vector(&r).unwrap().coeffs));
    }
    assert_eq!(alg.image_of_ad(&alg.zero()).rank(), 0);
}

// ------------------------------------------------------------ Jordan form

fn rank_oracle_blocks(n: &QMatrix) -> Vec<usize> {
    let d = n.rows;
    let mut ranks = vec![d];
    let mut p = QMatrix::identity(d);
    while *ranks.last().unwrap() > 0 {
        p = p.mul(n);
        ranks.push(p.rank());
    }
    // blocks of size ≥ k: r_{k−1} − r_k
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut out = vec![];
    for k in (1..=at_least.len()).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        out.extend(std::iter::repeat_n(k, exact));
    }
    out
}

#[test]
fn jordan_blocks_agree_with_rank_sequence() {
    for (t, n) in [(LieType::A, 2), (LieType::A, 3), (LieType::B, 3), (LieType::C, 3), (LieType::G, 2)] {
        let alg = LieAlgebra::new(t, n).unwrap();
        for phi in alg.root_system.roots() {
            let m = alg.ad_matrix(&alg.root_vector(phi).unwrap());
            let jc = jordan_chains(&m).unwrap();
            assert_eq!(jc.blocks, rank_oracle_blocks(&m), "{t}{n} {phi}");
            // N P = P J
            assert_eq!(m.mul(&jc.p), jc.p.mul(&jc.jordan_matrix()));
            assert!(jc.p.inverse().is_some());
        }
    }
}

#[test]
fn a2_simple_root_blocks() {
    let alg = LieAlgebra::new(LieType::A, 2).unwrap();
    let phi = alg.root_system.root_from_terms(&[(1, 1), (2, -1)]).unwrap();
    let m = alg.ad_matrix(&alg.root_vector(&phi).unwrap());
    // ad of a root vector in sl₃: one block of size 3 (the sl₂ adjoint), two
    // of size 2 and one of size 1.
    let blocks = jordan_chains(&m).unwrap().blocks;
    assert_eq!(blocks, rank_oracle_blocks(&m));
    assert_eq!(blocks.iter().sum::<usize>(), 8);
    assert_eq!(blocks, vec![3, 2, 2, 1]);
}

#[test]
fn trivial_jordan_cases() {
    let z = QMatrix::zeros(4, 4);
    assert_eq!(jordan_chains(&z).unwrap().blocks, vec![1, 1, 1, 1]);
    let n = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
    assert_eq!(jordan_chains(&n).unwrap().blocks, vec![2]);
}

// ------------------------------------------------------- dense solve oracle

type CQ = Complex<BigRational>;

/// Solve `(b·I + A) x = w` by Gaussian elimination over ℚ(i).
fn dense_solve_exact(b: &CQ, a: &QMatrix, w: &[CQ]) -> Vec<CQ> {
    let d = a.rows;
    let mut m: Vec<Vec<CQ>> = (0..d)
        .map(|i| {
            let mut row: Vec<CQ> = (0..d)
                .map(|j| {
                    let mut e = CQ::new(a[(i, j)].clone(), BigRational::zero());
                    if i == j {
                        e += b.clone();
                    }
                    e
                })
                .collect();
            row.push(w[i].clone());
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !m[r][col].is_zero()).expect("nonsingular");
        m.swap(col, piv);
        let inv = CQ::one() / m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=d {
                    let t = m[col][c].clone() * f.clone();
                    m[r][c] = m[r][c].clone() - t;
                }
            }
        }
    }
    m.into_iter().map(|row| row[d].clone()).collect()
}

fn dense_solve_f64(b: Complex64, a: &QMatrix, w: &[Complex64]) -> Vec<Complex64> {
    use num_traits::ToPrimitive;
    let d = a.rows;
    let mut m: Vec<Vec<Complex64>> = (0..d)
        .map(|i| {
            let mut row: Vec<Complex64> = (0..d)
                .map(|j| Complex64::new(a[(i, j)].to_f64().unwrap(), 0.0) + if i == j { b } else { Complex64::zero() })
                .collect();
            row.push(w[i]);
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm())).unwrap();
        m.swap(col, piv);
        let inv = 1.0 / m[col][col];
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..d {
            if r != col {
                let f = m[r][col];
                for c in col..=d {
                    let t = m[col][c] * f;
                    m[r][c] -= t;
                }
            }
        }
    }
    m.into_iter().map(|row| row[d]).collect()
}

/// Random nilpotent matrix: strictly upper triangular, conjugated by a unit
/// lower-triangular integer matrix.
fn random_nilpotent(d: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    let mut n = QMatrix::zeros(d, d);
    let mut l = QMatrix::identity(d);
    let mut linv = QMatrix::identity(d);
    for i in 0..d {
        for j in 0..d {
            if j > i && rng.random_bool(0.4) {
                n[(i, j)] = q(rng.random_range(-2..=2));
            }
        }
    }
    if d > 1 {
        let i = rng.random_range(1..d);
        let j = rng.random_range(0..i);
        let c = q(rng.random_range(-2..=2));
        l[(i, j)] = c.clone();
        linv[(i, j)] = -c;
    }
    l.mul(&n).mul(&linv)
}

fn root_ad(t: LieType, n: usize, terms: &[(usize, i32)]) -> QMatrix {
    let alg = LieAlgebra::new(t, n).unwrap();
    let r = alg.root_system.root_from_terms(terms).unwrap();
    alg.ad_matrix(&alg.root_vector(&r).unwrap())
}

fn instances(rng: &mut ChaCha8Rng) -> Vec<(QMatrix, usize)> {
    let mut out = vec![
        (root_ad(LieType::A, 2, &[(1, 1), (2, -1)]), 6),
        (root_ad(LieType::A, 2, &[(1, 1), (3, -1)]), 8),
        (root_ad(LieType::C, 3, &[(1, 2)]), 3),
        (root_ad(LieType::C, 3, &[(1, 1), (2, -1)]), 2),
    ];
    for _ in 0..40 {
        let d = rng.random_range(1..=12);
        let k = rng.random_range(1..=64 / d);
        out.push((random_nilpotent(d, rng), k));
    }
    out
}

#[test]
fn backsub_matches_dense_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (a, k) in instances(&mut rng) {
        let d = a.rows;
        assert!(d * k <= 64);
        let base: Vec<CQ> = (0..k)
            .map(|_| loop {
                let g = gauss(rng.random_range(-3..=3), rng.random_range(-3..=3));
                if !g.is_zero() {
                    break g;
                }
            })
            .collect();
        let omega = ExtendedVector {
            coords: (0..d)
                .map(|_| (0..k).map(|_| gauss(rng.random_range(-5..=5), rng.random_range(-5..=5))).collect())
                .collect(),
        };
        let sol = jordan_backsub_solve(&base, &a, &omega).unwrap();
        for (c, b) in base.iter().enumerate() {
            let w: Vec<CQ> = (0..d).map(|i| omega.coords[i][c].clone()).collect();
            let x = dense_solve_exact(b, &a, &w);
            for i in 0..d {
                assert_eq!(sol.coords[i][c], x[i]);
            }
        }
        assert_eq!(relative_residual(&base, &a, &sol, &omega), 0.0);
    }
}

#[test]
fn backsub_matches_dense_float() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (a, k) in instances(&mut rng) {
        let d = a.rows;
        let base: Vec<Complex64> = (0..k)
            .map(|_| Complex64::from_polar(rng.random_range(0.5..3.0), rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        let omega = ExtendedVector {
            coords: (0..d)
                .map(|_| {
                    (0..k).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
                })
                .collect(),
        };
        let sol = jordan_backsub_solve(&base, &a, &omega).unwrap();
        assert!(relative_residual(&base, &a, &sol, &omega) <= 1e-10);
        for (c, b) in base.iter().enumerate() {
            let w: Vec<Complex64> = (0..d).map(|i| omega.coords[i][c]).collect();
            let x = dense_solve_f64(*b, &a, &w);
            let scale = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for i in 0..d {
                assert!((sol.coords[i][c] - x[i]).norm() <= 1e-10 * scale);
            }
        }
    }
}

#[test]
fn backsub_hand_cases() {
    // ad_u = 0: plain division
    let a = QMatrix::zeros(2, 2);
    let base = vec![gauss(0, 1)];
    let omega = ExtendedVector { coords: vec![vec![gauss(2, 0)], vec![gauss(0, 4)]] };
    let sol = jordan_backsub_solve(&base, &a, &omega).unwrap();
    assert_eq!(sol.coords, vec![vec![gauss(0, -2)], vec![gauss(4, 0)]]);
    // single 2×2 block with u = i: v₂ = ω₂/i, v₁ = (ω₁ − v₂)/i
    let a = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
    let sol = jordan_backsub_solve(&base, &a, &omega).unwrap();
    let v2 = gauss(0, 4) / gauss(0, 1);
    let v1 = (gauss(2, 0) - v2.clone()) / gauss(0, 1);
    assert_eq!(sol.coords, vec![vec![v1], vec![v2]]);
    // zero base is rejected
    assert!(jordan_backsub_solve(&[gauss(0, 0)], &a, &ExtendedVector { coords: vec![vec![gauss(1, 0)]; 2] }).is_err());
    let _: Q = q(0);
}
