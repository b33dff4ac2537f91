use std::fmt::Write as _;
use std::path::Path;

use greedy_core::bounds::{
    e_m_clean_series, hl1_bound, noisy_bound_const, noisy_bound_series, noisy_regime_max, oga_clean_bound,
    oga_noisy_bound, NoisyBoundParams,
};
use greedy_core::dictionary::read_csv_rows;
use greedy_core::dictionary::read_signal_csv;
use greedy_core::experiments::{
    add_noise, coherent_dictionary, gen_a1_signal, instability_demo, linear_baseline_demo, random_unit_dictionary,
    stability_experiment, NoiseMode, StabilityReport, StabilitySetup, STABILITY_CSV_HEADER,
};
use greedy_core::{
    run_oga, run_wga, Dictionary, DictionaryFormat, GreedyConfig, SelectionPolicy, Termination, WeakSchedule,
};
use rayon::prelude::*;

use crate::args::{
    Algo, BoundsArgs, DemoCommand, DictKind, Format, GenDictArgs, Noise, Policy, RunArgs, ScheduleArgs, StabilityArgs,
    Which,
};
use crate::error::{CliError, CliResult};
use crate::output::{emit, open};

impl From<Policy> for SelectionPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Max => SelectionPolicy::Max,
            Policy::ThresholdFirst => SelectionPolicy::ThresholdFirst,
        }
    }
}

fn read_numbers(path: &Path) -> CliResult<Vec<f64>> {
    let rows = read_csv_rows(open(path)?)?;
    let values: Vec<f64> = rows.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(CliError::config(format!("{}: no values", path.display())));
    }
    Ok(values)
}

fn schedule(args: &ScheduleArgs) -> CliResult<WeakSchedule> {
    match (&args.tau, args.t) {
        (Some(path), _) => Ok(WeakSchedule::explicit(read_numbers(path)?)?),
        (None, t) => Ok(WeakSchedule::constant(t.unwrap_or(1.0))?),
    }
}

fn load_dictionary(path: &Path) -> CliResult<Dictionary> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let format = if is_json {
        DictionaryFormat::Json
    } else {
        DictionaryFormat::Csv
    };
    let dict = Dictionary::load(open(path)?, format, path.display().to_string())?;
    log::info!(
        "loaded {} atoms of dimension {} from {}",
        dict.len(),
        dict.dim(),
        path.display()
    );
    Ok(dict)
}

fn parse_count(field: &str, desc: &str) -> CliResult<usize> {
    field
        .parse()
        .map_err(|_| CliError::config(format!("--gen {desc}: `{field}` is not a count")))
}

fn generate_dictionary(desc: &str, seed: u64) -> CliResult<Dictionary> {
    let parts: Vec<&str> = desc.split(':').collect();
    let dict = match parts.as_slice() {
        ["orthonormal", dim] => {
            let dim = parse_count(dim, desc)?;
            if dim == 0 {
                return Err(CliError::config("--gen orthonormal:N needs N >= 1"));
            }
            Dictionary::orthonormal(dim)
        }
        ["random", n, dim] => random_unit_dictionary(parse_count(dim, desc)?, parse_count(n, desc)?, seed)?,
        ["coherent", n, dim] => coherent_dictionary(parse_count(dim, desc)?, parse_count(n, desc)?, seed)?,
        _ => {
            return Err(CliError::config(format!(
                "--gen {desc}: expected orthonormal:DIM, random:N:DIM or coherent:N:DIM"
            )))
        }
    };
    Ok(dict)
}

pub fn run(args: &RunArgs) -> CliResult<()> {
    let mut config = GreedyConfig::wga(1.0, args.b, args.max_iter)
        .with_schedule(schedule(&args.schedule)?)
        .with_policy(args.policy.into());
    config.residual_atol = args.atol;
    config.validate()?;
    let dict = load_dictionary(&args.dict)?;
    let signal = read_signal_csv(open(&args.signal)?)?;
    let trace = match args.algo {
        Algo::Wga => run_wga(&signal, &dict, &config)?,
        Algo::Oga => run_oga(&signal, &dict, &config)?,
    };
    log::info!("{} iterations, termination {:?}", trace.iterations(), trace.termination);
    let contents = match args.format {
        Format::Csv => trace.to_csv(),
        Format::Json => trace.to_json() + "\n",
    };
    emit(args.out.as_deref(), &contents)?;
    if trace.termination == Termination::DependentAtom {
        return Err(CliError::Numerical(format!(
            "selected atom is linearly dependent on the current basis after {} iterations",
            trace.iterations()
        )));
    }
    Ok(())
}

pub fn bounds(args: &BoundsArgs) -> CliResult<()> {
    let m_max = args.m_max;
    let rows: Vec<(usize, f64)> = match args.which {
        Which::Clean => {
            let values = e_m_clean_series(&schedule(&args.schedule)?, args.b, m_max)?;
            values.into_iter().enumerate().collect()
        }
        Which::Noisy => {
            let params = NoisyBoundParams {
                epsilon: args.eps,
                scale: args.scale,
                h: args.h,
                f_norm: args.f_norm,
                b: args.b,
                schedule: schedule(&args.schedule)?,
            };
            let values = noisy_bound_series(&params, m_max)?;
            (1..).zip(values).collect()
        }
        Which::NoisyConst => {
            if args.schedule.tau.is_some() {
                return Err(CliError::config("--which noisy-const takes a constant --t, not --tau"));
            }
            let t = args.schedule.t.unwrap_or(1.0);
            (1..=m_max)
                .map(|m| Ok((m, noisy_bound_const(t, args.b, args.h, args.eps, args.scale, m)?)))
                .collect::<CliResult<_>>()?
        }
        Which::OgaNoisy => (0..=m_max)
            .map(|m| Ok((m, oga_noisy_bound(args.eps, args.scale, m)?)))
            .collect::<CliResult<_>>()?,
        Which::OgaClean => (1..=m_max)
            .map(|m| Ok((m, oga_clean_bound(m)?)))
            .collect::<CliResult<_>>()?,
        Which::Hl1 => {
            let v = match (&args.v_file, args.v) {
                (Some(path), _) => read_numbers(path)?,
                (None, Some(v)) => vec![v; m_max],
                (None, None) => return Err(CliError::config("--which hl1 needs --v or --v-file")),
            };
            (0..=m_max)
                .map(|m| Ok((m, hl1_bound(args.c, &v, m)?)))
                .collect::<CliResult<_>>()?
        }
    };
    let mut out = String::from("m,value\n");
    for (m, value) in rows {
        writeln!(out, "{m},{value}").unwrap();
    }
    emit(args.out.as_deref(), &out)
}

pub fn stability(args: &StabilityArgs) -> CliResult<()> {
    if args.trials == 0 {
        return Err(CliError::config("--trials must be at least 1"));
    }
    if args.jobs == 0 {
        return Err(CliError::config("--jobs must be at least 1"));
    }
    if args.seed.checked_add(args.trials as u64 - 1).is_none() {
        return Err(CliError::config("--seed + --trials overflows a 64-bit seed"));
    }
    let noise = match args.noise {
        Noise::Exact => NoiseMode::Exact,
        Noise::AtMost => NoiseMode::AtMost,
    };
    let setup = StabilitySetup {
        scale: args.scale,
        sparsity: args.sparsity,
        epsilon: args.eps,
        h: args.h,
        noise,
        seed: args.seed,
    };
    setup.validate()?;
    let max_iter = args.max_iter.unwrap_or_else(|| noisy_regime_max(args.eps));
    let config = GreedyConfig::wga(1.0, args.b, max_iter)
        .with_schedule(schedule(&args.schedule)?)
        .with_policy(args.policy.into());
    config.validate()?;
    let dict = match (&args.dict, &args.gen) {
        (Some(path), _) => load_dictionary(path)?,
        (None, Some(desc)) => generate_dictionary(desc, args.seed)?,
        (None, None) => return Err(CliError::config("one of --dict or --gen is required")),
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::config(format!("--jobs {}: {e}", args.jobs)))?;
    let reports: Vec<StabilityReport> = pool.install(|| {
        (0..args.trials)
            .into_par_iter()
            .map(|i| {
                let setup = StabilitySetup {
                    seed: args.seed + i as u64,
                    ..setup.clone()
                };
                stability_experiment(&dict, &setup, &config)
            })
            .collect::<Result<_, _>>()
    })?;

    let contents = match (args.format, reports.as_slice()) {
        (Format::Json, [single]) => single.to_json() + "\n",
        (Format::Csv, [single]) => single.to_csv(),
        (Format::Json, many) => serde_json::to_string_pretty(many).expect("reports serialize") + "\n",
        (Format::Csv, many) => {
            let mut out = format!("trial,{STABILITY_CSV_HEADER}\n");
            for (i, report) in many.iter().enumerate() {
                report.write_csv_rows(&mut out, Some(i));
            }
            out
        }
    };
    emit(args.out.as_deref(), &contents)?;

    let failed: Vec<usize> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.passed())
        .map(|(i, _)| i)
        .collect();
    for (i, r) in reports.iter().enumerate() {
        log::info!(
            "trial {i} (seed {}): {} iterations, passed {}",
            args.seed + i as u64,
            r.summary.iterations,
            r.passed()
        );
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::BoundViolation(format!(
            "{} of {} trials exceeded the bound (trials {:?})",
            failed.len(),
            reports.len(),
            failed
        )))
    }
}

pub fn demo(cmd: &DemoCommand) -> CliResult<()> {
    match cmd {
        DemoCommand::Instability { eps, out } => {
            let r = instability_demo(*eps)?;
            let text = format!("eps={}\nd1={}\nd2={}\nratio={}\n", r.epsilon, r.d1, r.d2, r.ratio);
            emit(out.as_deref(), &text)
        }
        DemoCommand::Linear { k, dim, seed, eps, out } => {
            if *dim == 0 {
                return Err(CliError::config("--dim must be at least 1"));
            }
            let basis = Dictionary::orthonormal(*dim);
            let (f, _) = gen_a1_signal(&basis, 1.0, (*dim).min(8), *seed)?;
            let f_eps = add_noise(&f, *eps, &NoiseMode::Exact, *seed)?;
            let r = linear_baseline_demo(1.0, *k, &f, &f_eps)?;
            let mut text = String::new();
            writeln!(text, "k={} dim={dim} K={}", r.k, r.operator_bound).unwrap();
            writeln!(
                text,
                "|S_k f - S_k f_eps| = {} <= K*|f - f_eps| = {} : {}",
                r.projected_diff,
                r.operator_bound * r.diff,
                r.contraction_holds
            )
            .unwrap();
            writeln!(
                text,
                "|f - S_k f| = {} <= |f_eps - S_k f_eps| + (K+1)*|f - f_eps| = {} : {}",
                r.noisy_error,
                r.clean_error + (r.operator_bound + 1.0) * r.diff,
                r.error_transfer_holds
            )
            .unwrap();
            emit(out.as_deref(), &text)?;
            if r.contraction_holds && r.error_transfer_holds {
                Ok(())
            } else {
                Err(CliError::BoundViolation("linear stability inequality failed".into()))
            }
        }
    }
}

pub fn gen_dict(args: &GenDictArgs) -> CliResult<()> {
    let count = args.count.unwrap_or(args.dim);
    if args.dim == 0 {
        return Err(CliError::config("--dim must be at least 1"));
    }
    if count == 0 {
        return Err(CliError::config("--count must be at least 1"));
    }
    let dict = match args.kind {
        DictKind::Orthonormal => {
            if count > args.dim {
                return Err(CliError::config(format!(
                    "--count {count} exceeds --dim {} for an orthonormal dictionary",
                    args.dim
                )));
            }
            let full = Dictionary::orthonormal(args.dim);
            let rows: Vec<&[f64]> = full.atoms().take(count).collect();
            Dictionary::from_rows(&rows, full.label())?
        }
        DictKind::RandomUnit => random_unit_dictionary(args.dim, count, args.seed)?,
        DictKind::Coherent => coherent_dictionary(args.dim, count, args.seed)?,
    };
    emit(args.out.as_deref(), &dict.to_csv())
}
