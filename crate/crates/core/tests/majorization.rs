use ordstat::{
    default_step, majorizes, random_majorization_pair, schur_ostrowski_check, t_transform,
    Family, GeometricMaxCdf, PoissonMaxCdf, PoissonMinSurvival, SymmetricFunction,
    DEFAULT_MAJORIZATION_TOL,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = DEFAULT_MAJORIZATION_TOL;

#[test]
fn majorizes_examples() {
    assert!(majorizes(&[8.0, 0.8, 0.1], &[7.0, 1.0, 0.9], TOL).unwrap());
    assert!(majorizes(&[1.0, 1.0], &[1.0, 1.0], TOL).unwrap());
    assert!(!majorizes(&[1.5, 1.5], &[2.0, 1.0], TOL).unwrap());
    // unequal totals fail even with dominating partial sums
    assert!(!majorizes(&[3.0, 1.0], &[2.0, 1.0], TOL).unwrap());
    assert!(majorizes(&[1.0], &[1.0, 2.0], TOL).is_err());
}

#[test]
fn majorizes_is_permutation_invariant() {
    let x = [5.0, 2.0, 1.0, 0.5];
    let y = [4.0, 2.5, 1.5, 0.5];
    let perms_x = [[5.0, 2.0, 1.0, 0.5], [0.5, 1.0, 2.0, 5.0], [2.0, 5.0, 0.5, 1.0]];
    let perms_y = [[4.0, 2.5, 1.5, 0.5], [1.5, 0.5, 4.0, 2.5]];
    let expect = majorizes(&x, &y, TOL).unwrap();
    assert!(expect);
    for px in &perms_x {
        for py in &perms_y {
            assert_eq!(majorizes(px, py, TOL).unwrap(), expect);
        }
    }
}

#[test]
fn t_transform_identity_swap_and_average() {
    let x = [2.0, 1.0];
    assert_eq!(t_transform(&x, 0, 1, 1.0).unwrap(), vec![2.0, 1.0]);
    let swapped = t_transform(&x, 0, 1, 0.0).unwrap();
    assert_eq!(swapped, vec![1.0, 2.0]);
    assert!(majorizes(&x, &swapped, TOL).unwrap());
    assert!(majorizes(&swapped, &x, TOL).unwrap());
    let avg = t_transform(&x, 0, 1, 0.5).unwrap();
    assert_eq!(avg, vec![1.5, 1.5]);
    assert!(majorizes(&x, &avg, TOL).unwrap());
    assert!(!majorizes(&avg, &x, TOL).unwrap());
}

#[test]
fn t_transform_rejects_bad_arguments() {
    let x = [2.0, 1.0];
    assert!(t_transform(&x, 0, 0, 0.5).is_err());
    assert!(t_transform(&x, 0, 2, 0.5).is_err());
    assert!(t_transform(&x, 0, 1, 1.5).is_err());
}

#[test]
fn random_pairs_always_satisfy_the_predicate() {
    for seed in 0..1000 {
        let pair = random_majorization_pair(3, Family::Poisson, 2, seed).unwrap();
        assert!(pair.certified);
        assert!(
            majorizes(&pair.x, &pair.y, TOL).unwrap(),
            "seed={seed} x={:?} y={:?}",
            pair.x,
            pair.y
        );
    }
}

#[test]
fn random_geometric_pairs_stay_inside_the_unit_interval() {
    for seed in 0..200 {
        let pair = random_majorization_pair(4, Family::Geometric, 3, seed).unwrap();
        for &v in pair.x.iter().chain(pair.y.iter()) {
            assert!(v > 0.0 && v < 1.0);
        }
        assert!(majorizes(&pair.x, &pair.y, TOL).unwrap());
    }
}

#[test]
fn chained_transforms_are_transitive() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..30.0)).collect();
        let i = rng.gen_range(0..4);
        let j = (i + rng.gen_range(1..4)) % 4;
        let y = t_transform(&x, i, j, rng.gen_range(0.0..=1.0)).unwrap();
        let i2 = rng.gen_range(0..4);
        let j2 = (i2 + rng.gen_range(1..4)) % 4;
        let z = t_transform(&y, i2, j2, rng.gen_range(0.0..=1.0)).unwrap();
        assert!(majorizes(&x, &y, TOL).unwrap());
        assert!(majorizes(&y, &z, TOL).unwrap());
        assert!(majorizes(&x, &z, TOL).unwrap());
    }
}

struct LinearSum;

impl SymmetricFunction for LinearSum {
    fn eval(&self, z: &[f64]) -> f64 {
        z.iter().sum()
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

#[test]
fn schur_ostrowski_vanishes_for_linear_symmetric_functions() {
    let z = [3.0, 1.0, 0.2];
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let v = schur_ostrowski_check(&LinearSum, &z, i, j, 1e-5).unwrap();
            assert!(v.abs() < 1e-9);
        }
    }
}

#[test]
fn schur_ostrowski_is_negative_for_geometric_max_cdf() {
    let f = GeometricMaxCdf { u: 1 };
    let z = [0.9, 0.5];
    let v = schur_ostrowski_check(&f, &z, 0, 1, 1e-6).unwrap();
    assert!(v < 0.0, "{v}");
    // analytic oracle, worked out symbolically:
    // d/dq_i prod (1 - q^2) = -2 q_i * (1 - q_j^2)
    let di = -2.0 * 0.9 * (1.0 - 0.25);
    let dj = -2.0 * 0.5 * (1.0 - 0.81);
    let oracle = (0.9 - 0.5) * (di - dj);
    assert!((v - oracle).abs() < 1e-6 * oracle.abs());
}

#[test]
fn schur_ostrowski_nonpositive_for_poisson_max_cdf_at_reference_point() {
    let f = PoissonMaxCdf { r: 3 };
    let z = [8.0, 0.8, 0.1];
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let h = default_step(z[i]).min(default_step(z[j])).min(0.05);
            let v = schur_ostrowski_check(&f, &z, i, j, h).unwrap();
            assert!(v <= 1e-8, "i={i} j={j}: {v}");
        }
    }
}

#[test]
fn schur_ostrowski_step_must_fit_the_domain() {
    let f = GeometricMaxCdf { u: 0 };
    let err = schur_ostrowski_check(&f, &[0.99, 0.5], 0, 1, 0.02);
    assert!(err.is_err());
    assert!(schur_ostrowski_check(&f, &[0.99, 0.5], 0, 1, 0.005).is_ok());
}

fn sweep<F: SymmetricFunction>(f: &F, lo: f64, hi: f64, points: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..points {
        let n = rng.gen_range(2..=3);
        let z: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let h = z
            .iter()
            .map(|&v| (v - lo).min(hi - v))
            .fold(f64::INFINITY, f64::min)
            * 0.5;
        let h = h.min(default_step(z[i]).min(default_step(z[j])));
        let v = schur_ostrowski_check(f, &z, i, j, h).unwrap();
        worst = worst.max(v);
    }
    worst
}

#[test]
fn schur_concavity_sweeps() {
    for &r in &[0u32, 1, 3, 10] {
        assert!(sweep(&PoissonMaxCdf { r }, 0.05, 30.0, 500, 21) <= 1e-8, "max r={r}");
        assert!(
            sweep(&PoissonMinSurvival { r }, 0.05, 30.0, 500, 22) <= 1e-8,
            "min r={r}"
        );
    }
    for &u in &[0u32, 1, 4] {
        assert!(
            sweep(&GeometricMaxCdf { u }, 0.05, 0.995, 500, 23) <= 1e-8,
            "geom u={u}"
        );
    }
}

fn central(f: &impl SymmetricFunction, z: &[f64], i: usize, h: f64) -> f64 {
    let mut hi = z.to_vec();
    let mut lo = z.to_vec();
    hi[i] += h;
    lo[i] -= h;
    (f.eval(&hi) - f.eval(&lo)) / (2.0 * h)
}

fn check_partials<F: SymmetricFunction>(f: &F, closed: impl Fn(&[f64], usize) -> f64, z: &[f64]) {
    for i in 0..z.len() {
        // Richardson-extrapolated central differences: a large base step keeps
        // rounding noise out of the tiny-partial regime while the O(h^4)
        // combination removes the truncation term the large step would cost.
        let margin = (z[i] - f.domain().0).min(f.domain().1 - z[i]);
        let h = (0.02 * z[i].abs().max(1.0)).min(margin / 3.0);
        let d1 = central(f, z, i, h);
        let d2 = central(f, z, i, h / 2.0);
        let d3 = central(f, z, i, h / 4.0);
        let r1 = (4.0 * d2 - d1) / 3.0;
        let r2 = (4.0 * d3 - d2) / 3.0;
        let fd = (16.0 * r2 - r1) / 15.0;
        let cf = closed(z, i);
        assert!(
            (fd - cf).abs() <= 1e-6 * cf.abs().max(1e-300),
            "i={i} fd={fd} cf={cf}"
        );
    }
}

#[test]
fn closed_form_partials_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let zp: Vec<f64> = (0..3).map(|_| rng.gen_range(0.3..20.0)).collect();
        let f = PoissonMaxCdf { r: rng.gen_range(0..8) };
        check_partials(&f, |z, i| f.partial(z, i), &zp);
        let g = PoissonMinSurvival { r: rng.gen_range(0..8) };
        check_partials(&g, |z, i| g.partial(z, i), &zp);
        let zq: Vec<f64> = (0..3).map(|_| rng.gen_range(0.1..0.95)).collect();
        let h = GeometricMaxCdf { u: rng.gen_range(0..5) };
        check_partials(&h, |z, i| h.partial(z, i), &zq);
    }
}

#[test]
fn symmetric_functions_are_permutation_invariant() {
    let f = PoissonMaxCdf { r: 4 };
    let a = f.eval(&[8.0, 0.8, 0.1]);
    let b = f.eval(&[0.1, 8.0, 0.8]);
    assert!((a - b).abs() < 1e-12);
    let g = GeometricMaxCdf { u: 2 };
    let a = g.eval(&[0.9, 0.2, 0.5]);
    let b = g.eval(&[0.5, 0.9, 0.2]);
    assert!((a - b).abs() < 1e-12);
}
