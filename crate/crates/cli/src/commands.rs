use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use anyhow::anyhow;
use gradchain_core::export::{fmt12, matrix_csv, ChainJson, CouplingJson};
use gradchain_core::program::{interpret, parse, RunError, RunRecord};
use gradchain_core::spectrum::sideband_spectrum;
use gradchain_core::{ChainSolution, CouplingReport, TrapConfig};
use serde_json::Value;

use crate::failure::{CmdResult, Failure};
use crate::output::{plot_columns, sibling, write_json, write_text, OutputOptions};

pub fn read_config_value(path: &Path) -> CmdResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(anyhow!("{}: invalid JSON: {e}", path.display())))
}

pub fn config_from_value(raw: &Value, origin: &Path) -> CmdResult<TrapConfig> {
    gradchain_core::config::validate_config(raw).map_err(|e| Failure::input(anyhow!("{}: {e}", origin.display())))
}

pub fn solve(config: &TrapConfig) -> CmdResult<ChainSolution> {
    ChainSolution::solve(config).map_err(Failure::numeric)
}

pub fn couplings_for(config: &TrapConfig, chain: &ChainSolution) -> CmdResult<CouplingReport> {
    // The only failure here is a sampled profile that does not cover the chain.
    CouplingReport::compute(config, chain).map_err(Failure::input)
}

fn load(path: &Path) -> CmdResult<(TrapConfig, ChainSolution)> {
    let config = config_from_value(&read_config_value(path)?, path)?;
    let chain = solve(&config)?;
    Ok((config, chain))
}

pub fn chain(config_path: &Path, out: &Path, opts: OutputOptions) -> CmdResult {
    let (_, chain) = load(config_path)?;
    write_json(out, &ChainJson::from(&chain), opts)?;

    let positions_um: Vec<f64> = chain.positions().iter().map(|z| z * 1e6).collect();
    let modes_khz: Vec<f64> = chain.mode_frequencies.iter().map(|w| w / TAU / 1e3).collect();
    println!("{:>4}  {:>14}", "ion", "z (um)");
    for (i, z) in positions_um.iter().enumerate() {
        println!("{:>4}  {:>14.6}", i + 1, z);
    }
    println!();
    println!("{:>4}  {:>14}  {:>10}", "mode", "freq (kHz)", "nu/nu1");
    for (j, f) in modes_khz.iter().enumerate() {
        println!("{:>4}  {:>14.6}  {:>10.6}", j + 1, f, chain.mode_eigenvalues[j].sqrt());
    }
    if let Some(d) = chain.min_spacing() {
        println!("\nmin spacing: {:.4} um", d * 1e6);
    }
    for w in &chain.warnings {
        eprintln!("warning: {w}");
    }

    if opts.plot_data {
        let idx = |v: &[f64]| v.iter().enumerate().map(|(i, x)| ((i + 1) as f64, *x)).collect::<Vec<_>>();
        write_text(&sibling(out, "positions.dat"), &plot_columns(&[("ion z_um".into(), idx(&positions_um))]))?;
        write_text(&sibling(out, "modes.dat"), &plot_columns(&[("mode freq_kHz".into(), idx(&modes_khz))]))?;
    }
    Ok(())
}

pub fn couplings(config_path: &Path, out_dir: &Path, opts: OutputOptions) -> CmdResult {
    let (config, chain) = load(config_path)?;
    let report = couplings_for(&config, &chain)?;
    fs::create_dir_all(out_dir).map_err(|e| Failure::input(anyhow!("{}: {e}", out_dir.display())))?;

    write_text(&out_dir.join("j_matrix.csv"), &matrix_csv(&report.j_matrix, "ion", 1.0 / TAU))?;
    write_text(&out_dir.join("epsilon.csv"), &matrix_csv(&report.epsilon_matrix, "mode/ion", 1.0))?;
    write_json(&out_dir.join("couplings.json"), &CouplingJson::from(&report), opts)?;

    let verdict = if report.harmonic_approximation_valid { "valid" } else { "NOT valid" };
    println!(
        "max J/2pi = {} Hz; epsilon = {} (threshold {}, {verdict})",
        fmt12(report.max_j() / TAU),
        fmt12(report.validity),
        report.validity_threshold
    );

    if opts.plot_data {
        let n = config.ion_count;
        let nn = (0..n.saturating_sub(1)).map(|i| ((i + 1) as f64, report.j_matrix[(i, i + 1)] / TAU)).collect();
        let shifts = report.shifts.iter().enumerate().map(|(i, s)| ((i + 1) as f64, s / TAU)).collect();
        write_text(&out_dir.join("j_nearest_neighbour.dat"), &plot_columns(&[("n J_n,n+1_Hz".into(), nn)]))?;
        write_text(&out_dir.join("shifts.dat"), &plot_columns(&[("ion shift_Hz".into(), shifts)]))?;
    }
    Ok(())
}

pub fn spectrum(config_path: &Path, ion: usize, out: &Path, opts: OutputOptions) -> CmdResult {
    let (config, chain) = load(config_path)?;
    if ion == 0 || ion > config.ion_count {
        return Err(Failure::input(anyhow!("--ion {ion} outside [1, {}]", config.ion_count)));
    }
    let report = couplings_for(&config, &chain)?;
    let lines = sideband_spectrum(&chain, &report, ion - 1);

    let mut csv = String::from("offset_hz,amplitude,label\n");
    for l in &lines {
        csv.push_str(&format!("{},{},{}\n", fmt12(l.offset / TAU), fmt12(l.amplitude), l.label));
    }
    write_text(out, &csv)?;

    if opts.plot_data {
        let rows = lines.iter().map(|l| (l.offset / TAU, l.amplitude)).collect();
        write_text(&sibling(out, "dat"), &plot_columns(&[(format!("ion {ion} offset_Hz amplitude"), rows)]))?;
    }
    Ok(())
}

pub struct SimulateArgs<'a> {
    pub config: &'a Path,
    pub program: &'a Path,
    pub initial: Option<&'a str>,
    pub seed: u64,
    pub shots: usize,
    pub out: &'a Path,
}

/// The offending source line with a caret under the error position.
fn excerpt(source: &str, line: usize, column: usize, len: usize) -> String {
    let text = source.lines().nth(line.saturating_sub(1)).unwrap_or("");
    let pad = " ".repeat(column.saturating_sub(1));
    format!("  {text}\n  {pad}{}", "^".repeat(len.max(1)))
}

pub fn simulate(args: SimulateArgs<'_>, opts: OutputOptions) -> CmdResult {
    let (config, chain) = load(args.config)?;
    let source = fs::read_to_string(args.program)
        .map_err(|e| Failure::input(anyhow!("{}: {e}", args.program.display())))?;
    let program = parse(&source).map_err(|e| {
        Failure::Program(anyhow!(
            "{}:{e}\n{}",
            args.program.display(),
            excerpt(&source, e.span.line, e.span.column, e.span.len)
        ))
    })?;
    let report = couplings_for(&config, &chain)?;
    let zeros = "0".repeat(config.ion_count);
    let initial = args.initial.unwrap_or(&zeros);

    let record = interpret(&program, &report, initial, args.seed, args.shots).map_err(|e| match e {
        RunError::Instruction { .. } => Failure::numeric(anyhow!("{}:{e}", args.program.display())),
        other => Failure::input(other),
    })?;
    let record = if opts.timestamp { record } else { record.without_timing() };

    write_json(args.out, &record, opts)?;
    write_text(&sibling(args.out, "histogram.csv"), &histogram_csv(&record))?;
    write_text(&sibling(args.out, "log.csv"), &log_csv(&record))?;

    for (k, m) in record.measurements.iter().enumerate() {
        let summary: Vec<String> = m.histogram.iter().map(|(o, c)| format!("{o}:{c}")).collect();
        println!("measurement {} (t = {} s): {}", k + 1, fmt12(m.time), summary.join(" "));
    }

    if opts.plot_data {
        let mut blocks: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
        for entry in &record.logs {
            let title = format!("{:?} ion {} t_s value", entry.observable, entry.ion).to_lowercase();
            match blocks.iter_mut().find(|(t, _)| *t == title) {
                Some((_, rows)) => rows.push((entry.time, entry.value)),
                None => blocks.push((title, vec![(entry.time, entry.value)])),
            }
        }
        write_text(&sibling(args.out, "log.dat"), &plot_columns(&blocks))?;
    }
    Ok(())
}

fn histogram_csv(record: &RunRecord) -> String {
    let mut csv = String::from("measurement,ions,outcome,count,fraction\n");
    for (k, m) in record.measurements.iter().enumerate() {
        let ions: Vec<String> = m.ions.iter().map(|i| i.to_string()).collect();
        for (outcome, count) in &m.histogram {
            let fraction = *count as f64 / m.shots.len().max(1) as f64;
            csv.push_str(&format!("{},{},{outcome},{count},{}\n", k + 1, ions.join(" "), fmt12(fraction)));
        }
    }
    csv
}

fn log_csv(record: &RunRecord) -> String {
    let mut csv = String::from("instruction,t_s,observable,ion,value\n");
    for e in &record.logs {
        let obs = format!("{:?}", e.observable).to_lowercase();
        csv.push_str(&format!("{},{},s{obs},{},{}\n", e.instruction + 1, fmt12(e.time), e.ion, fmt12(e.value)));
    }
    csv
}
