//! Independent checks of the interpolation rank.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fatpoints::blowup::{self, DivisorClass};
use fatpoints::interp::{self, monomial_exponents, trial_rng, PointSampler, SampleOptions, SamplePoint};
use fatpoints::par::Execution;
use fatpoints::syscore::binomial;
use fatpoints::{FatPointSystem, PrimeField, PrimeFieldMatrix};

fn sys(s: &str) -> FatPointSystem {
    s.parse().unwrap()
}

/// Conditions written as "the Taylor coefficients of `f(p + y)` of degree
/// below `m` vanish": the coefficient of `y^a` is
/// `sum_e c_e prod_k C(e_k, a_k) p_k^(e_k - a_k)`.
fn taylor_h0(field: &PrimeField, s: &FatPointSystem, points: &[SamplePoint]) -> i128 {
    let n = s.ambient_dim();
    let exps = monomial_exponents(n, s.degree());
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (&m, p) in s.mults().iter().zip(points) {
        if m == 0 {
            continue;
        }
        for a in monomial_exponents(n, m - 1) {
            rows.push(
                exps.iter()
                    .map(|e| {
                        e.iter().zip(&a).zip(&p.coords).fold(1, |acc, ((&ek, &ak), &x)| {
                            if ek < ak {
                                return 0;
                            }
                            let c = field.from_u64(binomial(ek as i128, ak) as u64);
                            field.mul(acc, field.mul(c, field.pow(x, (ek - ak) as u64)))
                        })
                    })
                    .collect(),
            );
        }
    }
    if rows.is_empty() {
        return exps.len() as i128;
    }
    let (_, pivots) = PrimeFieldMatrix::from_rows(*field, &rows).rref();
    exps.len() as i128 - pivots.len() as i128
}

#[test]
fn taylor_rows_agree_with_derivative_rows() {
    let field = PrimeField::new(1_000_003).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..60 {
        let n = rng.random_range(1..=3usize);
        let d = rng.random_range(0..=8u32);
        let r = rng.random_range(0..=6usize);
        let s = FatPointSystem::new(n, d, (0..r).map(|_| rng.random_range(0..=4u32)).collect()).unwrap();
        let points: Vec<SamplePoint> = (0..r).map(|_| SamplePoint::random(&field, n, &mut rng)).collect();
        let m = interp::condition_matrix(&field, &s, &points).unwrap();
        let engine = s.monomial_count() - m.rank() as i128;
        assert_eq!(engine, taylor_h0(&field, &s, &points), "{s}");
    }
}

#[test]
fn blocked_rank_matches_plain_elimination_on_condition_matrices() {
    for p in [101u64, 536_870_909, (1 << 61) - 1] {
        let field = PrimeField::new(p).unwrap();
        let s = sys("L3(9,6,4^8)");
        let mut rng = trial_rng(3, 0);
        let points: Vec<SamplePoint> = (0..9).map(|_| SamplePoint::random(&field, 3, &mut rng)).collect();
        let m = interp::condition_matrix(&field, &s, &points).unwrap();
        let (_, pivots) = m.rref();
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(m.rank_with(exec), pivots.len(), "p = {p}");
        }
    }
}

#[test]
fn classical_special_planar_systems() {
    // (system, h0): multiples of the line through two points and of the
    // conic through five, then two non-special controls; the reduction must
    // predict each of them
    let cases = [
        ("L2(2,2^2)", 1),
        ("L2(4,3,3)", 4),
        ("L2(6,4,4)", 9),
        ("L2(4,2^5)", 1),
        ("L2(6,3^5)", 1),
        ("L2(8,4^5)", 1),
        ("L2(6,2^8)", 4),
        ("L2(7,4^3)", 6),
    ];
    let opts = SampleOptions::with_seed(5);
    for (s, h0) in cases {
        let s = sys(s);
        let r = interp::effective_dim(&s, &opts).unwrap();
        assert_eq!(r.h0, h0, "{s}");
        let pred = blowup::hh_predict_special(&DivisorClass::from_system(&s).unwrap(), None).unwrap();
        assert_eq!(pred.predicted_dim as i128, r.edim_actual, "{s}");
        assert_eq!(pred.special, r.special, "{s}");
    }
}

#[test]
fn reduction_prediction_matches_rank_on_a_wider_sample() {
    let opts = SampleOptions::with_seed(21);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut special = 0;
    for _ in 0..1500 {
        let r = rng.random_range(1..=9usize);
        let mults: Vec<u32> = (0..r).map(|_| rng.random_range(0..=4u32)).collect();
        let conditions: u32 = mults.iter().map(|m| m * (m + 1) / 2).sum();
        let fit = (0..=15u32).find(|d| (d + 1) * (d + 2) / 2 >= conditions).unwrap_or(15);
        let d = (fit as i64 + rng.random_range(-3..=1i64)).clamp(0, 15) as u32;
        let s = FatPointSystem::new(2, d, mults).unwrap();
        let rank = interp::effective_dim(&s, &opts).unwrap();
        let pred = blowup::hh_predict_special(&DivisorClass::from_system(&s).unwrap(), None).unwrap();
        assert_eq!((pred.special, pred.predicted_dim as i128), (rank.special, rank.edim_actual), "{s}");
        special += usize::from(rank.special);
    }
    assert!(special >= 20, "sample too tame: {special} special systems");
}

#[test]
fn extra_points_never_add_sections() {
    let opts = SampleOptions::with_seed(8);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..40 {
        let n = rng.random_range(2..=3usize);
        let d = rng.random_range(1..=7u32);
        let r = rng.random_range(0..=6usize);
        let s = FatPointSystem::new(n, d, (0..r).map(|_| rng.random_range(0..=3u32)).collect()).unwrap();
        let more = s.with_point(rng.random_range(1..=3u32));
        let (a, b) = (interp::effective_dim(&s, &opts).unwrap(), interp::effective_dim(&more, &opts).unwrap());
        assert!(b.h0 <= a.h0, "{s} -> {more}");
        assert!(a.h0 >= (a.vdim + 1).max(0));
    }
}

#[test]
fn point_order_does_not_matter() {
    let opts = SampleOptions::with_seed(13);
    for (s, t) in [("L3(9,6,4^8)", "L3(9,4^4,6,4^4)"), ("L2(9,2^2,3^8)", "L2(9,3^8,2^2)")] {
        let (a, b) = (interp::effective_dim(&sys(s), &opts).unwrap(), interp::effective_dim(&sys(t), &opts).unwrap());
        assert_eq!((a.h0, a.special), (b.h0, b.special));
    }
}

#[test]
fn sequential_and_parallel_runs_agree() {
    let s = sys("L3(7,5,3^8)");
    let seq = SampleOptions { exec: Execution::Sequential, ..SampleOptions::with_seed(4) };
    let par = SampleOptions { exec: Execution::Parallel, ..seq };
    assert_eq!(interp::effective_dim(&s, &seq).unwrap(), interp::effective_dim(&s, &par).unwrap());
    let on_q = PointSampler::QuadricExtras { base: 9 };
    let a = interp::draw_configurations(3, 11, &SampleOptions { sampler: on_q, ..seq }).unwrap();
    let b = interp::draw_configurations(3, 11, &SampleOptions { sampler: on_q, ..par }).unwrap();
    assert_eq!(a, b);
}
