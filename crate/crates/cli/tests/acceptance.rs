//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use greedy_core::bounds::{e_m_clean, hl1_bound, hl1_worst_sequence, noisy_bound, oga_clean_bound, NoisyBoundParams};
use greedy_core::experiments::{
    add_noise, coherent_dictionary, gen_a1_signal, instability_demo, oga_stability_experiment, random_unit_dictionary,
    stability_experiment, NoiseMode, StabilitySetup,
};
use greedy_core::{
    inner, run_oga, run_paired, run_wga, Dictionary, GreedyConfig, SelectionPolicy, Termination, Vector, WeakSchedule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

const BOUND_SLACK: f64 = 1e-9;
const DICT_SEED: u64 = 0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, Option<u64>, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_greedy")
}

fn greedy(args: &[&str]) -> std::process::Output {
    Command::new(bin())
        .args(args)
        .env_remove("GREEDY_LOG")
        .output()
        .expect("spawn greedy")
}

fn large_dictionary() -> Dictionary {
    random_unit_dictionary(64, 256, DICT_SEED).unwrap()
}

fn clean_rate() -> Outcome {
    let dicts = [Dictionary::orthonormal(64), large_dictionary()];
    let params = [
        (1.0, 1.0, SelectionPolicy::Max),
        (0.5, 1.0, SelectionPolicy::ThresholdFirst),
        (1.0, 0.5, SelectionPolicy::Max),
    ];
    let mut cases = Vec::new();
    for d in 0..dicts.len() {
        for p in params {
            for seed in 0..100u64 {
                cases.push((d, p, seed));
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(|&(d, (t, b, policy), seed)| {
            let dict = &dicts[d];
            let (f, _) = gen_a1_signal(dict, 1.0, 8, seed).unwrap();
            let config = GreedyConfig::wga(t, b, 2000).with_policy(policy);
            let trace = run_wga(&f, dict, &config).unwrap();
            let schedule = WeakSchedule::Constant { t };
            let mut worst = f64::NEG_INFINITY;
            for m in 0..=trace.iterations() {
                let excess = trace.residual_norm_at(m) - e_m_clean(&schedule, b, m).unwrap();
                if excess > BOUND_SLACK {
                    return Err(format!(
                        "{} t={t} b={b} seed {seed} m {m}: excess {excess:e}",
                        dict.label()
                    ));
                }
                worst = worst.max(excess);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(format!("{} runs, max(residual - bound) = {worst:.3e}", cases.len()))
}

fn pga_rate() -> Outcome {
    let s = WeakSchedule::Constant { t: 1.0 };
    for m in 0..=5000usize {
        let v = e_m_clean(&s, 1.0, m).unwrap();
        let exact = (1.0 + m as f64).powf(-1.0 / 6.0);
        check((v - exact).abs() <= 4.0 * f64::EPSILON * exact, || {
            format!("m {m}: {v} vs {exact}")
        })?;
    }
    let v63 = e_m_clean(&s, 1.0, 63).unwrap();
    check((v63 - 0.5).abs() <= 1e-15, || format!("m=63 gives {v63}"))?;
    Ok(format!("(1+m)^(-1/6) for m <= 5000, e_63 = {v63}"))
}

const EPS_GRID: [f64; 3] = [0.2, 0.1, 0.05];
const H_GRID: [f64; 2] = [0.5, 0.9];

fn stability_grid() -> Outcome {
    let dict = large_dictionary();
    let mut cases = Vec::new();
    for eps in EPS_GRID {
        for h in H_GRID {
            for seed in 0..20u64 {
                cases.push((eps, h, seed));
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(|&(eps, h, seed)| {
            let setup = StabilitySetup {
                scale: 1.0,
                sparsity: 8,
                epsilon: eps,
                h,
                noise: NoiseMode::Exact,
                seed: DICT_SEED + seed,
            };
            let report = stability_experiment(&dict, &setup, &GreedyConfig::pga(usize::MAX)).unwrap();
            let f_norm = report.summary.noisy_norm;
            let params = NoisyBoundParams {
                epsilon: eps,
                scale: 1.0,
                h,
                f_norm,
                b: 1.0,
                schedule: WeakSchedule::Constant { t: 1.0 },
            };
            let mut worst = f64::NEG_INFINITY;
            for row in &report.rows {
                let bound = noisy_bound(&params, row.m).unwrap();
                let excess = row.residual - bound;
                if excess > BOUND_SLACK {
                    return Err(format!("eps {eps} h {h} seed {seed} m {}: excess {excess:e}", row.m));
                }
                worst = worst.max(excess);
            }
            if !report.passed() {
                return Err(format!("eps {eps} h {h} seed {seed}: report not passed"));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);

    let dir = tempfile::tempdir().unwrap();
    for eps in EPS_GRID {
        for h in H_GRID {
            let out = dir.path().join(format!("stab-{eps}-{h}.csv"));
            let o = greedy(&[
                "stability",
                "--gen",
                "random:256:64",
                "--B",
                "1",
                "--sparsity",
                "8",
                "--eps",
                &eps.to_string(),
                "--h",
                &h.to_string(),
                "--seed",
                &DICT_SEED.to_string(),
                "--trials",
                "20",
                "--jobs",
                "4",
                "--format",
                "csv",
                "--out",
                out.to_str().unwrap(),
            ]);
            check(o.status.code() == Some(0), || {
                format!(
                    "cli eps {eps} h {h}: {:?} {}",
                    o.status,
                    String::from_utf8_lossy(&o.stderr)
                )
            })?;
        }
    }
    Ok(format!(
        "{} library trials, max(residual - bound) = {worst:.3e}; 6 cli runs x 20 trials exit 0",
        cases.len()
    ))
}

fn random_problem(rng: &mut ChaCha8Rng, trial: u64) -> (Dictionary, GreedyConfig) {
    let dim = rng.random_range(2..=32);
    let count = rng.random_range(dim..=4 * dim);
    let dict = if rng.random_bool(0.5) {
        random_unit_dictionary(dim, count, trial).unwrap()
    } else {
        coherent_dictionary(dim, count, trial).unwrap()
    };
    let t = rng.random_range(0.2..=1.0);
    let b = rng.random_range(0.05..=1.0);
    let policy = if rng.random_bool(0.5) {
        SelectionPolicy::Max
    } else {
        SelectionPolicy::ThresholdFirst
    };
    let max_iter = rng.random_range(1..=200);
    (dict, GreedyConfig::wga(t, b, max_iter).with_policy(policy))
}

fn proof_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut steps = 0usize;
    for trial in 0..1000u64 {
        let (dict, config) = random_problem(&mut rng, trial);
        let scale = rng.random_range(0.25..=2.0);
        let eps = rng.random_range(1e-3..=1.0);
        let (f, _) = gen_a1_signal(&dict, scale, dict.len().min(8), trial).unwrap();
        let f_eps = add_noise(&f, eps, &NoiseMode::Exact, trial).unwrap();
        let noise = f_eps.sub(&f).unwrap();
        let paired = run_paired(&f, &noise, &dict, &config).map_err(|e| format!("trial {trial}: {e}"))?;

        let b = config.b;
        let energy = b * (2.0 - b);
        let d0_sq = noise.norm_sq();
        let mut noisy = f_eps.clone();
        let mut clean = f.clone();
        let mut delta_prev = noise.clone();
        let mut sum = 0.0;
        for r in &paired.noisy.records {
            let phi = dict.atom_vector(r.atom_index).scaled(r.sign as f64);
            let y = inner(&noisy, &phi).unwrap();
            let y_clean = inner(&clean, &phi).unwrap();
            noisy.axpy(-b * y, phi.as_slice());
            clean.axpy(-b * y_clean, phi.as_slice());
            let delta = noisy.sub(&clean).unwrap();
            let proj = inner(&delta_prev, &phi).unwrap();
            let lhs = delta.norm_sq();
            let rhs = delta_prev.norm_sq() - energy * proj * proj;
            check((lhs - rhs).abs() <= 1e-10 * d0_sq, || {
                format!("trial {trial} k {}: |delta|^2 = {lhs:e}, recursion gives {rhs:e}", r.m)
            })?;
            check(delta.norm() <= delta_prev.norm(), || {
                format!("trial {trial} k {}: |delta| increased", r.m)
            })?;
            sum += energy * proj * proj;
            check(sum <= eps * eps + 1e-10, || {
                format!("trial {trial} k {}: energy sum {sum:e} > eps^2", r.m)
            })?;
            check((paired.delta_norms[r.m] - delta.norm()).abs() <= 1e-12, || {
                format!("trial {trial} k {}: library delta disagrees", r.m)
            })?;
            delta_prev = delta;
            steps += 1;
        }
    }
    Ok(format!("1000 paired runs, {steps} steps"))
}

fn oga_suite() -> Outcome {
    let big = large_dictionary();
    let coherent = coherent_dictionary(32, 64, DICT_SEED).unwrap();
    let ortho = Dictionary::orthonormal(64);

    // (a) orthogonality at several stopping points
    let mut checked = 0usize;
    for (dict, seeds) in [(&big, 0..50u64), (&coherent, 50..100u64)] {
        for seed in seeds {
            let (f, _) = gen_a1_signal(dict, 1.0, 8, seed).unwrap();
            let f_eps = add_noise(&f, 0.1, &NoiseMode::Exact, seed).unwrap();
            for max_iter in [1, 2, 4, 8, 16, 32, 2000] {
                let trace = run_oga(&f_eps, dict, &GreedyConfig::pga(max_iter)).unwrap();
                for r in &trace.records {
                    let ip = inner(&trace.residual, &dict.atom_vector(r.atom_index)).unwrap().abs();
                    check(ip <= 1e-8 * f_eps.norm(), || {
                        format!(
                            "(a) {} seed {seed} stop {max_iter}: <r, g_{}> = {ip:e}",
                            dict.label(),
                            r.atom_index
                        )
                    })?;
                }
                checked += 1;
            }
        }
    }

    // (b) clean rate
    let mut worst_b = f64::NEG_INFINITY;
    for (dict, seeds) in [(&ortho, 0..50u64), (&big, 50..100u64)] {
        for seed in seeds {
            let (f, _) = gen_a1_signal(dict, 1.0, 8, seed).unwrap();
            let trace = run_oga(&f, dict, &GreedyConfig::pga(2000)).unwrap();
            check(
                trace.termination != Termination::DependentAtom || trace.residual.norm() < 1e-8,
                || format!("(b) {} seed {seed}: dependent atom", dict.label()),
            )?;
            for m in 1..=trace.iterations() {
                let excess = trace.residual_norm_at(m) - oga_clean_bound(m).unwrap();
                check(excess <= BOUND_SLACK, || {
                    format!("(b) {} seed {seed} m {m}: excess {excess:e}", dict.label())
                })?;
                worst_b = worst_b.max(excess);
            }
        }
    }

    // (c) noisy bound on the stability grid
    let mut rows_c = 0usize;
    for eps in EPS_GRID {
        for h in H_GRID {
            for seed in 0..20u64 {
                let setup = StabilitySetup {
                    scale: 1.0,
                    sparsity: 8,
                    epsilon: eps,
                    h,
                    noise: NoiseMode::Exact,
                    seed,
                };
                let report = oga_stability_experiment(&big, &setup, &GreedyConfig::pga(2000)).unwrap();
                check(report.all_satisfied, || {
                    format!("(c) eps {eps} h {h} seed {seed} violated")
                })?;
                rows_c += report.rows.len();
            }
        }
    }

    // (d) OGA never trails PGA
    for seed in 0..100u64 {
        let (f, _) = gen_a1_signal(&big, 1.0, 8, seed).unwrap();
        let pga = run_wga(&f, &big, &GreedyConfig::pga(2000)).unwrap();
        let oga = run_oga(&f, &big, &GreedyConfig::pga(2000)).unwrap();
        for m in 1..=pga.iterations().max(oga.iterations()) {
            let (o, p) = (oga.residual_norm_at(m), pga.residual_norm_at(m));
            check(o <= p + 1e-12, || {
                format!("(d) seed {seed} m {m}: oga {o:e} > pga {p:e}")
            })?;
        }
    }
    Ok(format!(
        "(a) {checked} stopped runs; (b) max excess {worst_b:.3e}; (c) {rows_c} rows; (d) 100 trials"
    ))
}

fn instability() -> Outcome {
    for eps in [0.1, 0.01, 0.001] {
        let r = instability_demo(eps).unwrap();
        let sqrt2 = std::f64::consts::SQRT_2;
        check((r.d1 - sqrt2).abs() <= 1e-12, || format!("eps {eps}: d1 = {}", r.d1))?;
        check((r.d2 - eps * sqrt2).abs() <= 1e-12, || {
            format!("eps {eps}: d2 = {}", r.d2)
        })?;
        check((r.ratio - 1.0 / eps).abs() <= 1e-12 / eps.powi(2), || {
            format!("eps {eps}: ratio = {}", r.ratio)
        })?;
    }
    let o = greedy(&["demo", "instability", "--eps", "0.01"]);
    let text = String::from_utf8_lossy(&o.stdout);
    check(o.status.success() && text.contains("d1=1.41421356"), || {
        format!("cli output: {text}")
    })?;
    Ok("d1 = sqrt2, d2 = eps sqrt2, ratio = 1/eps for eps in {0.1, 0.01, 0.001}".into())
}

fn hl1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..10_000 {
        let c = rng.random_range(0.01..=4.0);
        let m = rng.random_range(0..=200);
        let v: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..=1.0)).collect();
        let extremal = hl1_worst_sequence(c, &v);
        let mut sub = c;
        for k in 0..=m {
            if k > 0 {
                let factor = rng.random_range(1.0..=4.0);
                sub = (sub - factor * sub * sub * v[k - 1]).max(0.0);
            }
            let bound = hl1_bound(c, &v, k).unwrap();
            check(extremal[k] <= bound + 1e-12, || {
                format!("case {case} k {k}: extremal {} > {bound}", extremal[k])
            })?;
            check(sub <= bound + 1e-12, || {
                format!("case {case} k {k}: sub-extremal {sub} > {bound}")
            })?;
        }
    }
    Ok("10000 cases, extremal and sub-extremal".into())
}

fn orthonormal_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut count = 0;
    while count < 500 {
        let dim = rng.random_range(1..=48);
        let coords: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| coords[b].abs().total_cmp(&coords[a].abs()));
        if order.windows(2).any(|w| coords[w[0]].abs() - coords[w[1]].abs() < 1e-9) {
            continue;
        }
        let f = Vector::new(coords.clone()).unwrap();
        let trace = run_wga(&f, &Dictionary::orthonormal(dim), &GreedyConfig::pga(dim)).unwrap();
        for (k, r) in trace.records.iter().enumerate() {
            check(r.atom_index == order[k], || {
                format!("signal {count} step {}: atom {}", k + 1, r.atom_index)
            })?;
            let expected = order[k + 1..]
                .iter()
                .map(|&i| coords[i] * coords[i])
                .sum::<f64>()
                .sqrt();
            check((r.residual_norm - expected).abs() <= 1e-12, || {
                format!(
                    "signal {count} step {}: residual {} vs {expected}",
                    k + 1,
                    r.residual_norm
                )
            })?;
        }
        let nonzero = coords.iter().filter(|c| **c != 0.0).count();
        check(trace.iterations() == nonzero, || {
            format!("signal {count}: {} iterations", trace.iterations())
        })?;
        count += 1;
    }
    Ok("500 signals match the sort-by-magnitude oracle".into())
}

fn digest(path: &Path) -> Vec<u8> {
    Sha256::digest(std::fs::read(path).unwrap()).to_vec()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let dict = p("dict.csv");
    let signal = p("signal.csv");
    std::fs::write(&signal, "0.3,-0.2,0.5,0.1,0.05,-0.4\n").unwrap();
    let o = greedy(&[
        "gen-dict",
        "--kind",
        "random-unit",
        "--dim",
        "6",
        "--count",
        "12",
        "--seed",
        "3",
        "--out",
        &dict,
    ]);
    check(o.status.success(), || "gen-dict for inputs failed".into())?;

    let variants: Vec<Vec<&str>> = vec![
        vec![
            "run", "--algo", "wga", "--dict", &dict, "--signal", &signal, "--t", "0.7", "--b", "0.6",
        ],
        vec![
            "run", "--algo", "oga", "--dict", &dict, "--signal", &signal, "--format", "json",
        ],
        vec![
            "bounds", "--which", "clean", "--t", "0.5", "--b", "0.8", "--m-max", "200",
        ],
        vec![
            "bounds", "--which", "noisy", "--eps", "0.1", "--h", "0.5", "--m-max", "100",
        ],
        vec!["bounds", "--which", "hl1", "--c", "2", "--v", "0.3", "--m-max", "50"],
        vec!["stability", "--gen", "random:64:16", "--eps", "0.5", "--seed", "7"],
        vec![
            "stability",
            "--gen",
            "coherent:64:16",
            "--eps",
            "0.1",
            "--trials",
            "6",
            "--jobs",
            "3",
            "--format",
            "csv",
        ],
        vec!["demo", "instability", "--eps", "0.001"],
        vec!["demo", "linear", "--k", "3", "--dim", "10", "--seed", "5"],
        vec![
            "gen-dict", "--kind", "coherent", "--dim", "8", "--count", "16", "--seed", "9",
        ],
    ];
    for (i, args) in variants.iter().enumerate() {
        let mut hashes = Vec::new();
        for rep in 0..2 {
            let out = p(&format!("v{i}-{rep}"));
            let mut full = args.clone();
            full.extend(["--out", out.as_str()]);
            let o = greedy(&full);
            check(o.status.success(), || {
                format!(
                    "variant {i} {args:?}: {:?} {}",
                    o.status,
                    String::from_utf8_lossy(&o.stderr)
                )
            })?;
            hashes.push(digest(Path::new(&out)));
        }
        check(hashes[0] == hashes[1], || {
            format!("variant {i} {args:?}: outputs differ")
        })?;
    }

    let serial = p("serial.json");
    let parallel = p("parallel.json");
    for (jobs, out) in [("1", &serial), ("4", &parallel)] {
        let o = greedy(&[
            "stability",
            "--gen",
            "random:64:16",
            "--trials",
            "8",
            "--jobs",
            jobs,
            "--out",
            out,
        ]);
        check(o.status.success(), || format!("jobs {jobs}: {:?}", o.status))?;
    }
    check(digest(Path::new(&serial)) == digest(Path::new(&parallel)), || {
        "--jobs 1 and --jobs 4 differ".into()
    })?;
    Ok(format!(
        "{} command variants hash-identical; --jobs does not change output",
        variants.len()
    ))
}

fn run(id: &str, name: &str, target: Option<Duration>, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let timing = match target {
        Some(t) => format!("{:.1}s, target < {}s", elapsed.as_secs_f64(), t.as_secs()),
        None => format!("{:.1}s", elapsed.as_secs_f64()),
    };
    let ok = result.is_ok();
    match result {
        Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({timing})"),
        Err(detail) => println!("FAIL {id:>2} {name}: {detail} ({timing})"),
    }
    ok
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 9] = [
        ("1", "clean-rate bound", Some(60), clean_rate),
        ("2", "PGA rate instance", None, pga_rate),
        ("3", "noisy stability bound", Some(120), stability_grid),
        ("4", "paired-run identities", None, proof_identities),
        ("5", "OGA orthogonality and bounds", None, oga_suite),
        ("6", "instability demo", None, instability),
        ("7", "HL1 recursion bound", None, hl1),
        ("8", "orthonormal oracle", None, orthonormal_oracle),
        ("9", "determinism", None, determinism),
    ];
    let mut failures = 0;
    for (id, name, target, f) in criteria {
        if !run(id, name, target.map(Duration::from_secs), f) {
            failures += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
