//! Acceptance suite: every guarantee the tool ships with, one test per
//! criterion, at the stated tolerances and runtime budgets.
//!
//! The heavy end-to-end solves (criteria 7 and 8) measure their own wall
//! time, so run this target on an otherwise idle machine when checking the
//! budgets.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vqls_cli::labels::{parse_family, parse_label};
use vqls_cli::solve::{solve_with_restarts, SolveSettings};
use vqls_cli::sweeps::{
    default_precision_points, default_shot_points, run_scaling_sweep, run_shots_sweep,
    SweepConfig, SweepKind,
};
use vqls_core::ansatz::{ansatz_state, AnsatzSpec};
use vqls_core::cost::{
    cost, global_cost, local_cost, u_coefficient_analytic, u_coefficient_hadamard, CostKind,
    CostMode,
};
use vqls_core::dense::Matrix;
use vqls_core::optimizer::gradient;
use vqls_core::pauli::{Pauli, PauliDecomposition, PauliString};
use vqls_core::problems::{build_test_instance, laplacian_1d, laplacian_2d, BoundarySpec};
use vqls_core::statevector::{Circuit, Gate, Statevector};
use vqls_core::{Complex, LinearProblem64};

const TAU: f64 = std::f64::consts::TAU;

fn random_params(spec: &AnsatzSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..spec.param_count()).map(|_| rng.random_range(0.0..TAU)).collect()
}

/// Random small instance drawn from the three problem families.
fn random_problem(rng: &mut ChaCha8Rng) -> LinearProblem64 {
    match rng.random_range(0..3u32) {
        0 => {
            let c0 = rng.random_range(0.5..2.0);
            let n = rng.random_range(2..=4usize);
            build_test_instance(c0, n).unwrap()
        }
        1 => {
            let n = rng.random_range(2..=4usize);
            laplacian_1d(n, BoundarySpec::new(0.0, 1.0).unwrap()).unwrap()
        }
        _ => laplacian_2d(2, BoundarySpec::new(0.0, 1.0).unwrap()).unwrap(),
    }
}

#[test]
fn criterion_01_golden_1d_decomposition_exact_to_1e12() {
    let start = Instant::now();
    let problem = parse_label("heat1d:n=3").unwrap();
    let decomposition = problem.decomposition();
    // The published 8-term expansion of the 8-point tridiagonal system.
    let expected = [
        ("III", 2.0),
        ("IIX", -1.0),
        ("IXX", -0.5),
        ("IYY", -0.5),
        ("XXX", -0.25),
        ("XYY", 0.25),
        ("YXY", -0.25),
        ("YYX", -0.25),
    ];
    assert_eq!(decomposition.len(), 8);
    for (letters, coefficient) in expected {
        let term = decomposition
            .terms()
            .iter()
            .find(|t| t.string.to_string() == letters)
            .unwrap_or_else(|| panic!("missing term {letters}"));
        assert!(
            (term.coefficient.re - coefficient).abs() < 1e-12,
            "{letters}: {} vs {coefficient}",
            term.coefficient.re
        );
        assert!(term.coefficient.im.abs() < 1e-12);
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "budget 1 s");
}

#[test]
fn criterion_02_2d_term_counts_15_and_31() {
    let start = Instant::now();
    let small = laplacian_2d(2, BoundarySpec::new(0.0, 1.0).unwrap()).unwrap();
    assert_eq!(small.decomposition().len(), 15, "8x8 plate");
    let large = laplacian_2d(3, BoundarySpec::new(0.0, 1.0).unwrap()).unwrap();
    assert_eq!(large.decomposition().len(), 31, "16x16 plate");
    assert!(start.elapsed().as_secs_f64() < 10.0, "budget 10 s");
}

#[test]
fn criterion_03_condition_number_table_to_4_decimals() {
    let start = Instant::now();
    let table: [(f64, f64); 5] = [
        (0.03, 14.3333),
        (0.05, 9.0),
        (0.1, 5.0),
        (1.0, 2.3333),
        (2.0, 1.5),
    ];
    for (c0, expected) in table {
        let problem = build_test_instance(c0, 4).unwrap();
        let kappa = problem.condition_number().unwrap();
        assert!(
            (kappa - expected).abs() < 5e-5,
            "c0={c0}: kappa {kappa} vs {expected}"
        );
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "budget 1 s");
}

/// Dense unitary of one gate on an `n`-qubit register, qubit 0 most
/// significant. Pure index arithmetic, so it shares nothing with the
/// statevector gate kernels it cross-checks.
fn dense_gate(n: usize, gate: &Gate<f64>) -> Matrix<Complex<f64>> {
    let dim = 1usize << n;
    let bit = |qubit: usize| 1usize << (n - 1 - qubit);
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let mut rows = vec![vec![zero; dim]; dim];
    match gate {
        Gate::H(q) => {
            let s = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            for j in 0..dim {
                rows[j][j] = if j & bit(*q) != 0 { -s } else { s };
                rows[j ^ bit(*q)][j] = s;
            }
        }
        Gate::X(q) => {
            for j in 0..dim {
                rows[j ^ bit(*q)][j] = one;
            }
        }
        Gate::Ry { target, angle } => {
            let (sin, cos) = (angle / 2.0).sin_cos();
            for j in 0..dim {
                rows[j][j] = Complex::new(cos, 0.0);
                let off = if j & bit(*target) == 0 { sin } else { -sin };
                rows[j ^ bit(*target)][j] = Complex::new(off, 0.0);
            }
        }
        Gate::Cz { a, b } => {
            for j in 0..dim {
                let both = j & bit(*a) != 0 && j & bit(*b) != 0;
                rows[j][j] = if both { -one } else { one };
            }
        }
        Gate::Cnot { control, target } => {
            for j in 0..dim {
                let out = if j & bit(*control) != 0 { j ^ bit(*target) } else { j };
                rows[out][j] = one;
            }
        }
        other => panic!("no dense form for {other:?}"),
    }
    Matrix::from_rows(rows).unwrap()
}

fn dense_circuit(n: usize, circuit: &Circuit<f64>) -> Matrix<Complex<f64>> {
    let mut unitary = Matrix::<Complex<f64>>::identity(1 << n);
    for gate in circuit.gates() {
        unitary = dense_gate(n, gate).matmul(&unitary).unwrap();
    }
    unitary
}

#[test]
fn criterion_04_analytic_costs_match_dense_oracle_on_200_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for trial in 0..200 {
        let problem = random_problem(&mut rng);
        let n = problem.n_qubits();
        let spec = AnsatzSpec::new(n, rng.random_range(1..=3usize)).unwrap();
        let params = random_params(&spec, &mut rng);

        // Oracle route: dense ansatz unitary, dense operator, explicit sums.
        let dim = 1usize << n;
        let v = dense_circuit(n, &spec.circuit(&params).unwrap());
        let mut e0 = vec![Complex::new(0.0, 0.0); dim];
        e0[0] = Complex::new(1.0, 0.0);
        let psi = v.matvec(&e0).unwrap();
        let a = problem.dense().to_complex();
        let phi = a.matvec(&psi).unwrap();
        let d: f64 = phi.iter().map(|z| z.norm_sqr()).sum();

        let u_b = dense_circuit(n, problem.b_prep());
        let b_hat = u_b.matvec(&e0).unwrap();
        let overlap: Complex<f64> = b_hat.iter().zip(&phi).map(|(b, p)| b.conj() * p).sum();
        let dense_global = 1.0 - overlap.norm_sqr() / d;

        let w = u_b.adjoint().matvec(&phi).unwrap();
        let mut z_sum = 0.0;
        for l in 0..n {
            let mask = 1usize << (n - 1 - l);
            for (j, amp) in w.iter().enumerate() {
                let sign = if j & mask != 0 { -1.0 } else { 1.0 };
                z_sum += sign * amp.norm_sqr();
            }
        }
        let dense_local = 0.5 - z_sum / (2.0 * n as f64 * d);

        let got_local = local_cost(&problem, &spec, &params, &CostMode::Analytic)
            .unwrap()
            .value;
        let got_global = global_cost(&problem, &spec, &params, &CostMode::Analytic)
            .unwrap()
            .value;
        assert!(
            (got_local - dense_local).abs() < 1e-9,
            "trial {trial} local: {got_local} vs {dense_local}"
        );
        assert!(
            (got_global - dense_global).abs() < 1e-9,
            "trial {trial} global: {got_global} vs {dense_global}"
        );
    }
}

#[test]
fn criterion_05_hadamard_estimates_within_four_standard_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let shots = 10_000u64;
    let mut within = 0usize;
    let total = 50usize;
    for trial in 0..total {
        let problem = random_problem(&mut rng);
        let n = problem.n_qubits();
        let spec = AnsatzSpec::new(n, rng.random_range(1..=2usize)).unwrap();
        let params = random_params(&spec, &mut rng);
        let terms = problem.decomposition().len();
        let m = rng.random_range(0..terms);
        let mp = rng.random_range(0..terms);
        let z = if rng.random_range(0..2u32) == 0 {
            None
        } else {
            Some(rng.random_range(0..n))
        };
        let exact = u_coefficient_analytic(&problem, &spec, &params, m, mp, z).unwrap();
        let estimate =
            u_coefficient_hadamard(&problem, &spec, &params, m, mp, z, shots, trial as u64)
                .unwrap();
        // Ancilla outcomes are +-1 with mean u, so the standard error of the
        // empirical mean is sqrt((1 - u^2) / shots).
        let se = ((1.0 - exact.re * exact.re).max(0.0) / shots as f64).sqrt();
        if (estimate.re - exact.re).abs() <= 4.0 * se + 1e-12 {
            within += 1;
        }
    }
    assert!(
        within as f64 >= 0.95 * total as f64,
        "{within}/{total} inside four standard errors"
    );
}

#[test]
fn criterion_06_parameter_shift_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let h = 1e-5;
    for trial in 0..50 {
        let problem = random_problem(&mut rng);
        let spec = AnsatzSpec::new(problem.n_qubits(), rng.random_range(1..=3usize)).unwrap();
        let params = random_params(&spec, &mut rng);
        let kind = if rng.random_range(0..2u32) == 0 {
            CostKind::Local
        } else {
            CostKind::Global
        };
        let grad = gradient(&problem, &spec, &params, kind, &CostMode::Analytic).unwrap();
        for k in 0..params.len() {
            let mut plus = params.clone();
            plus[k] += h;
            let mut minus = params.clone();
            minus[k] -= h;
            let cp = cost(&problem, &spec, &plus, kind, &CostMode::Analytic)
                .unwrap()
                .value;
            let cm = cost(&problem, &spec, &minus, kind, &CostMode::Analytic)
                .unwrap()
                .value;
            let fd = (cp - cm) / (2.0 * h);
            assert!(
                (grad[k] - fd).abs() <= 1e-5,
                "trial {trial} {kind:?} component {k}: {} vs {fd}",
                grad[k]
            );
        }
    }
}

fn end_to_end(label: &str, budget_secs: f64) {
    let start = Instant::now();
    let (family, size) = parse_family(label).unwrap();
    let problem = family.instantiate(size.unwrap()).unwrap();
    let settings = SolveSettings {
        precision: 0.05,
        restarts: 5,
        seed: 0,
        ..SolveSettings::default()
    };
    let outcome = solve_with_restarts(&problem, &family, &settings).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        outcome.result.converged,
        "{label}: cost {} above {} after {} restarts",
        outcome.result.final_cost, outcome.cost_threshold, outcome.restarts_used
    );
    assert!(
        outcome.fidelity >= 0.99,
        "{label}: fidelity {}",
        outcome.fidelity
    );
    assert!(
        elapsed < budget_secs,
        "{label}: {elapsed:.1} s over the {budget_secs} s budget"
    );
}

#[test]
fn criterion_07_heat1d_solves_n3_n4_n5_at_precision_005() {
    end_to_end("heat1d:n=3", 60.0);
    end_to_end("heat1d:n=4", 600.0);
    end_to_end("heat1d:n=5", 600.0);
}

#[test]
fn criterion_08_heat2d_solves_6_qubit_plate_at_precision_005() {
    end_to_end("heat2d:npd=3", 1800.0);
}

#[test]
fn criterion_09_shot_noise_scaling_over_ten_doublings() {
    let config = SweepConfig {
        kind: SweepKind::Shots,
        points: default_shot_points(),
        repetitions: 10,
        label: "test:c0=1,n=3".into(),
        settings: SolveSettings {
            precision: 0.001,
            seed: 0,
            ..SolveSettings::default()
        },
    };
    let report = run_shots_sweep(&config).unwrap();
    let fit = report.fit.expect("log-log fit");
    assert!((-0.65..=-0.35).contains(&fit.slope), "slope {}", fit.slope);
    assert!(fit.r_squared >= 0.9, "r^2 {}", fit.r_squared);
}

#[test]
fn criterion_10_evaluations_grow_linearly_in_log_inverse_precision() {
    for label in ["test:c0=1,n=3", "heat1d:n=3"] {
        let (family, _) = parse_family(label).unwrap();
        let config = SweepConfig {
            kind: SweepKind::Epsilon,
            points: default_precision_points(&family),
            repetitions: 10,
            label: label.into(),
            settings: SolveSettings {
                seed: 0,
                ..SolveSettings::default()
            },
        };
        let report = run_scaling_sweep(&config).unwrap();
        for record in &report.records {
            assert_eq!(record.converged_count, 10, "{label} point {}", record.point);
        }
        let fit = report.fit.expect("linear fit");
        assert!(fit.r_squared >= 0.9, "{label}: r^2 {}", fit.r_squared);
        assert!(fit.slope > 0.0, "{label}: slope {}", fit.slope);
    }
}

#[test]
fn criterion_11_commands_rerun_byte_identical_minus_timestamp() {
    let strip = |path: &std::path::Path| {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("\"timestamp\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let run = |dir: &std::path::Path, args: &[&str]| {
        let output = std::process::Command::new(env!("CARGO_BIN_EXE_vqls-heat"))
            .arg("--output-dir")
            .arg(dir)
            .args(args)
            .output()
            .unwrap();
        assert!(output.status.success(), "{args:?}");
    };
    let solve_args = ["--seed", "7", "solve", "heat1d:n=3", "--epsilon", "0.05"];
    let sweep_args = [
        "--seed",
        "3",
        "sweep-epsilon",
        "test:c0=1,n=2",
        "--points",
        "0.3,0.1",
        "--repetitions",
        "2",
    ];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        run(dir.path(), &solve_args);
        run(dir.path(), &sweep_args);
    }
    for name in [
        "solve_heat1d_n_3.json",
        "solution_heat1d_n_3.csv",
        "sweep_epsilon_test_c0_1_n_2.json",
        "sweep_epsilon_test_c0_1_n_2.csv",
    ] {
        assert_eq!(
            strip(&a.path().join(name)),
            strip(&b.path().join(name)),
            "{name} differs between reruns"
        );
    }
}

#[test]
fn criterion_12_invariant_suites_hold() {
    // Norm preservation: parameterized circuits keep unit norm to 1e-10.
    let mut rng = ChaCha8Rng::seed_from_u64(120);
    for _ in 0..100 {
        let n = rng.random_range(2..=5usize);
        let spec = AnsatzSpec::new(n, rng.random_range(1..=4usize)).unwrap();
        let params = random_params(&spec, &mut rng);
        let state = ansatz_state(&spec, &params).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-10);
    }
    for label in ["heat1d:n=3", "heat2d:npd=2", "test:c0=1,n=3"] {
        let problem = parse_label(label).unwrap();
        let state = problem.b_state().unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-10, "{label}");
    }

    // Cost bounds and the local/global sandwich C_G/n <= C_L <= C_G, which
    // forces the two costs to vanish together.
    let mut rng = ChaCha8Rng::seed_from_u64(121);
    for _ in 0..50 {
        let problem = random_problem(&mut rng);
        let n = problem.n_qubits() as f64;
        let spec = AnsatzSpec::new(problem.n_qubits(), rng.random_range(1..=3usize)).unwrap();
        let params = random_params(&spec, &mut rng);
        let local = local_cost(&problem, &spec, &params, &CostMode::Analytic)
            .unwrap()
            .value;
        let global = global_cost(&problem, &spec, &params, &CostMode::Analytic)
            .unwrap()
            .value;
        assert!((-1e-12..=1.0 + 1e-12).contains(&local), "local {local}");
        assert!((-1e-12..=1.0 + 1e-12).contains(&global), "global {global}");
        assert!(local <= global + 1e-10, "sandwich upper: {local} vs {global}");
        assert!(global / n <= local + 1e-10, "sandwich lower: {global} vs {local}");
    }

    // Zero coincidence at an actual solution.
    let (family, size) = parse_family("test:c0=1,n=2").unwrap();
    let problem = family.instantiate(size.unwrap()).unwrap();
    let settings = SolveSettings {
        precision: 0.01,
        seed: 0,
        ..SolveSettings::default()
    };
    let outcome = solve_with_restarts(&problem, &family, &settings).unwrap();
    assert!(outcome.result.converged);
    let spec = settings.ansatz_for(&family, problem.n_qubits()).unwrap();
    let local = local_cost(&problem, &spec, &outcome.result.params, &CostMode::Analytic)
        .unwrap()
        .value;
    let global = global_cost(&problem, &spec, &outcome.result.params, &CostMode::Analytic)
        .unwrap()
        .value;
    assert!(local < 1e-4 && global < 1e-3, "local {local} global {global}");

    // Parseval: the squared Frobenius norm equals 2^n times the squared
    // coefficient norm, and the expansion reconstructs the matrix.
    let mut rng = ChaCha8Rng::seed_from_u64(122);
    for _ in 0..100 {
        let n = rng.random_range(1..=3usize);
        let dim = 1usize << n;
        let mut rows = vec![vec![0.0f64; dim]; dim];
        for i in 0..dim {
            for j in 0..=i {
                let v = rng.random_range(-1.0..1.0);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let matrix = Matrix::from_rows(rows).unwrap().to_complex();
        let decomposition = PauliDecomposition::decompose(&matrix, 1e-12).unwrap();
        let coeff_power: f64 = decomposition
            .terms()
            .iter()
            .map(|t| t.coefficient.norm_sqr())
            .sum();
        let frobenius: f64 = matrix.data().iter().map(|z| z.norm_sqr()).sum();
        assert!(
            (frobenius - dim as f64 * coeff_power).abs() < 1e-9,
            "parseval: {frobenius} vs {}",
            dim as f64 * coeff_power
        );
        let rebuilt = decomposition.reconstruct().unwrap();
        assert!(rebuilt.max_abs_diff_complex(&matrix) < 1e-10);
    }

    // A pure-Z string on a computational basis state has a definite sign.
    let state = Statevector::<f64>::basis(3, 5).unwrap();
    let z = PauliString::new(vec![Pauli::Z, Pauli::Z, Pauli::Z]).unwrap();
    let expectation = state.expectation_pauli_string(&z).unwrap();
    assert!((expectation.re - (-1.0)).abs() < 1e-12);
}
