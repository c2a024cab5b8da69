//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cfp_core::distribution::DEFAULT_SUPPORT_CAP;
use cfp_core::lattice::{clt_frame_potential, exact_frame_potential, frame_report, lattice_volume};
use cfp_core::oracle::{
    amplitudes_squared, basis_vector, brute_pmf_k, dense_conjugation_check, dense_state_from_circuit, fidelity,
    mc_frame_potential, random_commuting_set,
};
use cfp_core::{Analysis, LatticeVolume, PauliString};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ops(list: &[&str]) -> Vec<PauliString> {
    list.iter().map(|s| s.parse().expect("valid Pauli string")).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(analysis: &[&str]) -> Result<Analysis, String> {
    Analysis::run(&ops(analysis)).map_err(|e| e.to_string())
}

fn covolume(a: &Analysis) -> Result<LatticeVolume, String> {
    let points = a.distribution.support_points(DEFAULT_SUPPORT_CAP).map_err(|e| e.to_string())?;
    lattice_volume(&points).map_err(|e| e.to_string())
}

fn clt_coefficient(a: &Analysis) -> Result<f64, String> {
    let report = frame_report(&a.distribution, &[], false).map_err(|e| e.to_string())?;
    report.clt_coefficient.ok_or_else(|| "degenerate report".to_string())
}

const FIRST_EXAMPLE: [&str; 5] = ["-XXYYY", "IYIIX", "-IZXXZ", "XYIZI", "-XZXYY"];
const SECOND_EXAMPLE: [&str; 5] = ["YZZIX", "YYXII", "-ZIYIX", "ZXXXY", "ZIYZI"];

fn first_example() -> Check {
    let a = run(&FIRST_EXAMPLE)?;
    let d = &a.distribution;
    ensure(d.state_rank() == 4, || format!("r = {}", d.state_rank()))?;
    ensure(d.support_size() == BigInt::from(16), || format!("support size {}", d.support_size()))?;
    ensure(d.pmf_value() == BigRational::new(1.into(), 16.into()), || format!("pmf {}", d.pmf_value()))?;
    for i in 0..5 {
        ensure(a.moments.mean[i].is_zero(), || format!("mean[{i}] = {}", a.moments.mean[i]))?;
        for j in 0..5 {
            let want = if i == j { BigRational::one() } else { BigRational::zero() };
            ensure(a.moments.covariance[i][j] == want, || format!("cov[{i}][{j}] = {}", a.moments.covariance[i][j]))?;
        }
    }
    let volume = covolume(&a)?;
    ensure(volume == LatticeVolume::Covolume(BigInt::from(64)), || format!("V = {volume}"))?;
    for t in [1.0, 2.5, 10.0, 100.0] {
        let f = clt_frame_potential(&volume, &a.moments.det_cov, 5, t).map_err(|e| e.to_string())?;
        let want = 2.0 * (PI * t).powf(-2.5);
        ensure(((f - want) / want).abs() < 1e-12, || format!("F~({t}) = {f}, expected {want}"))?;
    }
    Ok("r = 4, |supp K| = 16, p = 1/16, Cov = I, V = 64, F~ = 2(pi t)^-5/2".into())
}

fn second_example() -> Check {
    let a = run(&SECOND_EXAMPLE)?;
    ensure(a.distribution.state_rank() == 5, || format!("r = {}", a.distribution.state_rank()))?;
    let volume = covolume(&a)?;
    ensure(volume == LatticeVolume::Covolume(BigInt::from(32)), || format!("V = {volume}"))?;
    let c1 = clt_coefficient(&run(&FIRST_EXAMPLE)?)?;
    let c2 = clt_coefficient(&a)?;
    ensure(((c2 / c1) - 0.5).abs() < 1e-12, || format!("coefficient ratio {}", c2 / c1))?;
    Ok(format!("r = 5, V = 32, coefficient {c2:.6e} = half of {c1:.6e}"))
}

fn binomial_over_power(t: u32) -> f64 {
    // C(2t, t) / 4^t as a running product.
    (1..=t).map(|k| (2 * k - 1) as f64 / (2 * k) as f64).product()
}

fn single_qubit() -> Check {
    let a = run(&["X"])?;
    let volume = covolume(&a)?;
    ensure(volume == LatticeVolume::Covolume(BigInt::from(2)), || format!("V = {volume}"))?;
    for t in 1..=8u32 {
        let exact = exact_frame_potential(&a.distribution, t).map_err(|e| e.to_string())?;
        let want = binomial_over_power(t);
        ensure((exact - want).abs() < 1e-12, || format!("t = {t}: {exact} vs {want}"))?;
        let clt = clt_frame_potential(&volume, &a.moments.det_cov, 1, t as f64).map_err(|e| e.to_string())?;
        let closed = (PI * t as f64).powf(-0.5);
        ensure(((clt - closed) / closed).abs() < 1e-12, || format!("F~({t}) = {clt}, expected {closed}"))?;
        if t >= 4 {
            let ratio = exact / clt;
            let band = 2.0 / t as f64;
            ensure((ratio - 1.0).abs() <= band, || format!("t = {t}: ratio {ratio} outside 1 ± {band}"))?;
        }
    }
    Ok("exact = C(2t,t)/4^t for t = 1..8, F~ = (pi t)^-1/2, ratio within 1 ± 2/t".into())
}

fn oracle_sweep() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let n = rng.random_range(1..=5);
        let count = rng.random_range(1..=6);
        let set = random_commuting_set(&mut rng, n, count);
        let a = Analysis::run(&set).map_err(|e| format!("case {case}: {e}"))?;
        let circuit = &a.diagonalized.circuit;
        for (j, op) in set.iter().enumerate() {
            let dense = dense_conjugation_check(op, circuit).map_err(|e| e.to_string())?;
            ensure(dense.real_diagonal().is_some(), || format!("case {case}: operator {j} not diagonal"))?;
        }
        let state = dense_state_from_circuit(circuit).map_err(|e| e.to_string())?;
        let dense_support: BTreeSet<String> = amplitudes_squared(&state)
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 1e-9)
            .map(|(x, _)| basis_vector(n, x).to_string())
            .collect();
        let tableau_support: BTreeSet<String> = a.support.points().iter().map(|u| u.to_string()).collect();
        ensure(dense_support == tableau_support, || format!("case {case}: support mismatch"))?;

        let brute = brute_pmf_k(&set, &a.diagonalized, &state).map_err(|e| e.to_string())?;
        let d = &a.distribution;
        let symbolic = d
            .support_points(DEFAULT_SUPPORT_CAP)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|k| (k, d.pmf_value()))
            .collect();
        ensure(brute == symbolic, || format!("case {case}: pmf mismatch"))?;
    }
    Ok("200 random sets: pmf, support and diagonality agree with dense oracle".into())
}

fn clt_convergence() -> Check {
    let a = run(&FIRST_EXAMPLE)?;
    let volume = covolume(&a)?;
    let mut ratios = Vec::new();
    for t in [5u32, 10, 20] {
        let exact = exact_frame_potential(&a.distribution, t).map_err(|e| e.to_string())?;
        let clt = clt_frame_potential(&volume, &a.moments.det_cov, 5, t as f64).map_err(|e| e.to_string())?;
        ratios.push(exact / clt);
    }
    let gaps: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
    ensure(gaps[0] > gaps[1] && gaps[1] > gaps[2], || format!("ratios {ratios:?} not monotone toward 1"))?;
    ensure(gaps[1] < 0.25, || format!("t = 10 ratio {}", ratios[1]))?;
    ensure(gaps[2] < 0.15, || format!("t = 20 ratio {}", ratios[2]))?;
    Ok(format!("ratios at t = 5, 10, 20: {:.4}, {:.4}, {:.4}", ratios[0], ratios[1], ratios[2]))
}

fn monte_carlo() -> Check {
    let pairs: [[&str; 2]; 4] = [["XX", "ZZ"], ["XI", "IX"], ["XY", "YX"], ["XX", "-YY"]];
    let mut worst: f64 = 0.0;
    for pair in pairs {
        let a = run(&pair)?;
        for t in 1..=3u32 {
            let exact = exact_frame_potential(&a.distribution, t).map_err(|e| e.to_string())?;
            let (est, se) = mc_frame_potential(&a.ops, t, 1_000_000, 17).map_err(|e| e.to_string())?;
            let diff = (est - exact).abs();
            let z = if se > 0.0 { diff / se } else { 0.0 };
            ensure(diff <= 3.0 * se + 1e-12, || format!("{pair:?} t = {t}: {est} ± {se} vs {exact}"))?;
            worst = worst.max(z);
        }
    }
    Ok(format!("4 pairs x t = 1..3 within 3 SE (max {worst:.2} SE)"))
}

fn degenerate() -> Check {
    let a = run(&["Z"])?;
    let report = frame_report(&a.distribution, &[1, 2], true).map_err(|e| e.to_string())?;
    ensure(report.degenerate(), || "single Z report is not degenerate".into())?;
    ensure(report.values.iter().all(|v| v.clt.is_none()), || "CLT value reported".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let theta = [rng.random_range(-PI..PI)];
        let theta_prime = [rng.random_range(-PI..PI)];
        let f = fidelity(&a.ops, &theta, &theta_prime).map_err(|e| e.to_string())?;
        ensure((f - 1.0).abs() < 1e-12, || format!("fidelity {f} at {theta:?}, {theta_prime:?}"))?;
    }
    Ok("single Z is degenerate, fidelity = 1 on 100 random pairs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("first worked example", first_example, Duration::from_secs(1)),
        ("second worked example", second_example, Duration::from_secs(1)),
        ("single-qubit closed form", single_qubit, Duration::from_secs(60)),
        ("oracle equivalence sweep", oracle_sweep, Duration::from_secs(60)),
        ("CLT convergence", clt_convergence, Duration::from_secs(600)),
        ("Monte-Carlo consistency", monte_carlo, Duration::from_secs(600)),
        ("degenerate input", degenerate, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(msg) => println!("PASS {}. {name}: {msg} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name}: {msg} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
