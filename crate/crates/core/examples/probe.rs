use vqls_core::ansatz::AnsatzSpec;
use vqls_core::cost::{CostKind, CostMode};
use vqls_core::optimizer::{minimize, OptimizerConfig, OptimizerMethod};
use vqls_core::problems::{fidelity, laplacian_1d, laplacian_2d, BoundarySpec};
use vqls_core::seeding;
use vqls_core::statevector::Statevector;
use vqls_core::Complex;

fn problem_for(family: &str, n: usize) -> vqls_core::LinearProblem64 {
    let b = BoundarySpec::new(0.0, 1.0).unwrap();
    match family {
        "heat1d" => laplacian_1d(n, b).unwrap(),
        "heat2d" => laplacian_2d(n, b).unwrap(),
        _ => panic!("unknown family {family}"),
    }
}

fn trial(problem: &vqls_core::LinearProblem64, layers: usize, method: OptimizerMethod,
         kind: CostKind, lr: f64, beta: f64, max_iter: usize, master: u64, restarts: u64,
         thr_override: Option<f64>) {
    let kappa = problem.condition_number().unwrap();
    let threshold = thr_override.unwrap_or((0.05f64 / kappa).powi(2));
    let spec = AnsatzSpec::new(problem.n_qubits(), layers).unwrap();
    let reference = problem.classical_solve().unwrap();
    for restart in 0..restarts {
        let config = OptimizerConfig::<f64> {
            method,
            learning_rate: lr,
            momentum_beta: beta,
            epsilon: threshold,
            max_iterations: max_iter,
            seed: seeding::derive2(master, 0x11, restart),
            cost_kind: kind,
            cost_mode: CostMode::Analytic,
            ..OptimizerConfig::default()
        };
        let t0 = std::time::Instant::now();
        let result = minimize(problem, &spec, &config).unwrap();
        let f = fidelity(&result.state, &reference).unwrap();
        println!(
            "{} layers={layers} {method:?} {kind:?} lr={lr} beta={beta} thr={threshold:.2e} r={restart} conv={} iters={} final={:.2e} fid={:.6} ({:.2?})",
            problem.label(), result.converged, result.iterations, result.final_cost, f, t0.elapsed()
        );
        if result.converged { break; }
    }
}

// Pure expressibility probe: fit V(a)|0> to the classical solution state by
// minimizing 1 - |<r|V(a)|0>|^2 with Adam and parameter-shift gradients.
fn fit(problem: &vqls_core::LinearProblem64, layers: usize, seeds: u64, max_iter: usize) {
    let n = problem.n_qubits();
    let spec = AnsatzSpec::new(n, layers).unwrap();
    let reference = problem.classical_solve().unwrap();
    let norm: f64 = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target: Vec<f64> = reference.iter().map(|v| v / norm).collect();
    let infid = |params: &[f64]| -> f64 {
        let circuit = spec.circuit(params).unwrap();
        let mut state = Statevector::<f64>::zero(n).unwrap();
        state.apply_circuit(&circuit).unwrap();
        let mut overlap = Complex::new(0.0, 0.0);
        for (amp, t) in state.amplitudes().iter().zip(&target) {
            overlap += amp.conj() * Complex::new(*t, 0.0);
        }
        1.0 - overlap.norm_sqr()
    };
    for seed in 0..seeds {
        let mut params = vqls_core::optimizer::initial_parameters::<f64>(&spec, seed);
        let (mut m, mut v) = (vec![0.0; params.len()], vec![0.0; params.len()]);
        let (b1, b2, eps, lr) = (0.9, 0.999, 1e-8, 0.05);
        let t0 = std::time::Instant::now();
        let mut best = infid(&params);
        for t in 1..=max_iter {
            for k in 0..params.len() {
                let mut plus = params.clone();
                plus[k] += std::f64::consts::FRAC_PI_2;
                let mut minus = params.clone();
                minus[k] -= std::f64::consts::FRAC_PI_2;
                let g = (infid(&plus) - infid(&minus)) / 2.0;
                m[k] = b1 * m[k] + (1.0 - b1) * g;
                v[k] = b2 * v[k] + (1.0 - b2) * g * g;
                let mh = m[k] / (1.0 - b1.powi(t as i32));
                let vh = v[k] / (1.0 - b2.powi(t as i32));
                params[k] -= lr * mh / (vh.sqrt() + eps);
            }
            let c = infid(&params);
            if c < best { best = c; }
            if c < 1e-12 { break; }
        }
        println!("fit {} layers={layers} seed={seed} best_infid={:.3e} ({:.2?})",
                 problem.label(), best, t0.elapsed());
    }
}

// Two-phase momentum: phase 1 hyperparameters until thr1, then phase 2 until
// thr2. Separates plateau wandering from final-valley grinding.
fn polish(problem: &vqls_core::LinearProblem64, layers: usize, seed: u64,
          p1: (f64, f64, f64, usize), p2: (f64, f64, f64, usize)) {
    use vqls_core::cost::cost;
    use vqls_core::optimizer::gradient;
    let spec = AnsatzSpec::new(problem.n_qubits(), layers).unwrap();
    let reference = problem.classical_solve().unwrap();
    let mut params = vqls_core::optimizer::initial_parameters::<f64>(&spec, seed);
    let mut velocity = vec![0.0; params.len()];
    let t0 = std::time::Instant::now();
    for (phase, (lr, beta, thr, max_iter)) in [p1, p2].into_iter().enumerate() {
        let mut reached = false;
        for it in 0..max_iter {
            let c = cost(problem, &spec, &params, CostKind::Local, &CostMode::Analytic).unwrap().value;
            if c <= thr {
                println!("  phase{} hit {thr:.1e} at iter {it} cost {c:.3e} ({:.1?})", phase + 1, t0.elapsed());
                reached = true;
                break;
            }
            if it % 20000 == 0 {
                println!("  phase{} iter {it} cost {c:.3e} ({:.1?})", phase + 1, t0.elapsed());
            }
            let g = gradient(problem, &spec, &params, CostKind::Local, &CostMode::Analytic).unwrap();
            for k in 0..params.len() {
                velocity[k] = beta * velocity[k] + g[k];
                params[k] -= lr * velocity[k];
            }
        }
        if !reached {
            let c = cost(problem, &spec, &params, CostKind::Local, &CostMode::Analytic).unwrap().value;
            println!("  phase{} exhausted at cost {c:.3e} ({:.1?})", phase + 1, t0.elapsed());
        }
    }
    let circuit = spec.circuit(&params).unwrap();
    let mut state = Statevector::<f64>::zero(problem.n_qubits()).unwrap();
    state.apply_circuit(&circuit).unwrap();
    let f = fidelity(&state, &reference).unwrap();
    println!("polish {} layers={layers} seed={seed} fid={f:.6} ({:.1?})", problem.label(), t0.elapsed());
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let get = |i: usize| args.get(i).map(|s| s.as_str()).unwrap_or("");
    match get(1) {
        "solve" => {
            // probe solve <family> <n> <layers> <method> <lr> <max_iter> <restarts> [beta]
            let problem = problem_for(get(2), get(3).parse().unwrap());
            let layers: usize = get(4).parse().unwrap();
            let method = match get(5) {
                "adam" => OptimizerMethod::Adam,
                _ => OptimizerMethod::Momentum,
            };
            let lr: f64 = get(6).parse().unwrap();
            let max_iter: usize = get(7).parse().unwrap();
            let restarts: u64 = get(8).parse().unwrap_or(1);
            let beta: f64 = get(9).parse().unwrap_or(0.9);
            let thr: Option<f64> = get(10).parse().ok();
            trial(&problem, layers, method, CostKind::Local, lr, beta, max_iter, 500, restarts, thr);
        }
        "fit" => {
            // probe fit <family> <n> <layers> <seeds> <max_iter>
            let problem = problem_for(get(2), get(3).parse().unwrap());
            let layers: usize = get(4).parse().unwrap();
            let seeds: u64 = get(5).parse().unwrap_or(3);
            let max_iter: usize = get(6).parse().unwrap_or(20000);
            fit(&problem, layers, seeds, max_iter);
        }
        "polish" => {
            // probe polish <family> <n> <layers> <seed> <lr1> <b1> <thr1> <max1> <lr2> <b2> <thr2> <max2>
            let problem = problem_for(get(2), get(3).parse().unwrap());
            let layers: usize = get(4).parse().unwrap();
            let seed: u64 = get(5).parse().unwrap();
            let p1 = (get(6).parse().unwrap(), get(7).parse().unwrap(),
                      get(8).parse().unwrap(), get(9).parse().unwrap());
            let p2 = (get(10).parse().unwrap(), get(11).parse().unwrap(),
                      get(12).parse().unwrap(), get(13).parse().unwrap());
            polish(&problem, layers, seed, p1, p2);
        }
        "initcost" => {
            // probe initcost <c0> <n> <layers> <seed_max>
            let c0: f64 = get(2).parse().unwrap();
            let n: usize = get(3).parse().unwrap();
            let layers: usize = get(4).parse().unwrap();
            let seed_max: u64 = get(5).parse().unwrap_or(20);
            let problem = vqls_core::problems::build_test_instance(c0, n).unwrap();
            let spec = AnsatzSpec::new(n, layers).unwrap();
            for seed in 0..seed_max {
                let config = OptimizerConfig::<f64> {
                    max_iterations: 1,
                    epsilon: 1e-12,
                    seed,
                    ..OptimizerConfig::default()
                };
                let result = minimize(&problem, &spec, &config).unwrap();
                println!("seed={seed} initial_cost={:.6}", result.cost_trace[0]);
            }
        }
        other => panic!("unknown probe {other}"),
    }
}
