use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::{integrals_from_glass, FermionIntegrals};
use crate::ising::{apply_gadget, ising_energy, GadgetInstance, SpinConfig, SpinGlass};
use crate::scf::{
    density_from_spins, haar_random_density, hf_energy, scf_run, DensityMatrix, ScfConfig,
    ScfResult,
};
use crate::{Error, Result};

pub const THREADS_ENV: &str = "GLASS2FOCK_THREADS";

/// A run counts as having found the ground state within this distance.
const GROUND_TOL: f64 = 1e-6;

/// Whether the glass is doubled by the pairing gadget before embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    #[default]
    Gadget,
    Direct,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub instance: PathBuf,
    pub runs: usize,
    pub max_cycles: usize,
    pub tolerance: f64,
    pub base_seed: u64,
    /// Defaults to half filling of the embedded modes.
    pub num_particles: Option<usize>,
    pub output_dir: PathBuf,
    pub pipeline: Pipeline,
}

impl ExperimentConfig {
    pub fn new(instance: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            instance: instance.into(),
            runs: 1000,
            max_cycles: 128,
            tolerance: 1e-8,
            base_seed: 0,
            num_particles: None,
            output_dir: output_dir.into(),
            pipeline: Pipeline::Gadget,
        }
    }

    pub fn scf_config(&self, seed: u64) -> ScfConfig {
        ScfConfig {
            max_cycles: self.max_cycles,
            delta_p_tolerance: self.tolerance,
            damping: 0.0,
            seed,
        }
    }
}

/// Lowest plane-wave Hartree-Fock energy, found by enumerating every spin
/// configuration with the right particle number.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundReference {
    pub energy: f64,
    pub spins: SpinConfig,
    /// `H_I` of `spins` on the embedded glass.
    pub ising_energy: i64,
}

#[derive(Debug, Clone)]
pub struct PreparedInstance {
    pub source: SpinGlass,
    pub pipeline: Pipeline,
    pub gadget: Option<GadgetInstance>,
    /// The glass whose couplings were embedded.
    pub embedded: SpinGlass,
    pub integrals: FermionIntegrals,
    pub num_particles: usize,
    pub ground: GroundReference,
}

impl PreparedInstance {
    pub fn num_modes(&self) -> usize {
        self.integrals.num_modes()
    }
}

pub fn prepare_instance(
    glass: &SpinGlass,
    pipeline: Pipeline,
    num_particles: Option<usize>,
) -> Result<PreparedInstance> {
    let (gadget, embedded) = match pipeline {
        Pipeline::Gadget => {
            let gi = apply_gadget(glass)?;
            let doubled = gi.doubled.clone();
            (Some(gi), doubled)
        }
        Pipeline::Direct => (None, glass.clone()),
    };
    let integrals = integrals_from_glass(&embedded)?;
    let m = embedded.num_spins();
    let n = num_particles.unwrap_or(m / 2);
    if n > m {
        return Err(Error::InvalidArgument(format!(
            "particle number {n} exceeds mode count {m}"
        )));
    }
    let ground = ground_reference(&embedded, &integrals, n)?;
    Ok(PreparedInstance {
        source: glass.clone(),
        pipeline,
        gadget,
        embedded,
        integrals,
        num_particles: n,
        ground,
    })
}

fn ground_reference(g: &SpinGlass, fi: &FermionIntegrals, n: usize) -> Result<GroundReference> {
    let m = g.num_spins();
    let masks: Vec<u64> = (0..1u64 << m)
        .filter(|s| s.count_ones() as usize == n)
        .collect();
    let energies: Vec<(f64, u64)> = masks
        .par_iter()
        .map(|&mask| {
            let s = SpinConfig::from_mask(mask, m);
            hf_energy(&density_from_spins(&s)?, fi).map(|e| (e, mask))
        })
        .collect::<Result<_>>()?;
    let &(energy, mask) = energies
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .ok_or_else(|| Error::InvalidArgument("no configuration at this filling".into()))?;
    let spins = SpinConfig::from_mask(mask, m);
    Ok(GroundReference {
        energy,
        ising_energy: ising_energy(g, &spins)?,
        spins,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub converged: bool,
    pub cycles: usize,
    pub final_energy: f64,
    pub excitation_energy: f64,
    pub found_ground: bool,
}

pub fn run_from_density(
    prep: &PreparedInstance,
    p0: &DensityMatrix,
    cfg: &ScfConfig,
) -> Result<(RunRecord, ScfResult)> {
    let result = scf_run(&prep.integrals, prep.num_particles, p0, cfg)?;
    let excitation = result.final_energy - prep.ground.energy;
    let record = RunRecord {
        seed: cfg.seed,
        converged: result.converged,
        cycles: result.cycles_used,
        final_energy: result.final_energy,
        excitation_energy: excitation,
        found_ground: excitation.abs() < GROUND_TOL,
    };
    Ok((record, result))
}

/// One SCF run from the Haar-random density drawn with `cfg.seed`.
pub fn run_seed(prep: &PreparedInstance, cfg: &ScfConfig) -> Result<(RunRecord, ScfResult)> {
    let p0 = haar_random_density(prep.num_modes(), prep.num_particles, cfg.seed)?;
    run_from_density(prep, &p0, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub runs: usize,
    pub converged: usize,
    pub found_ground_total: usize,
    /// Runs at the ground energy that hit the cycle cap.
    pub found_ground_unconverged: usize,
    pub converged_and_ground: usize,
    pub ground_energy_reference: f64,
    pub pipeline: Pipeline,
    pub num_modes: usize,
    pub num_particles: usize,
}

impl Summary {
    pub fn from_records(records: &[RunRecord], prep: &PreparedInstance) -> Self {
        let count = |f: &dyn Fn(&RunRecord) -> bool| records.iter().filter(|r| f(r)).count();
        Self {
            runs: records.len(),
            converged: count(&|r| r.converged),
            found_ground_total: count(&|r| r.found_ground),
            found_ground_unconverged: count(&|r| r.found_ground && !r.converged),
            converged_and_ground: count(&|r| r.found_ground && r.converged),
            ground_energy_reference: prep.ground.energy,
            pipeline: prep.pipeline,
            num_modes: prep.num_modes(),
            num_particles: prep.num_particles,
        }
    }

    pub fn convergence_fraction(&self) -> f64 {
        self.converged as f64 / self.runs as f64
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub prepared: PreparedInstance,
    pub records: Vec<RunRecord>,
    pub summary: Summary,
    pub histogram_csv: PathBuf,
    pub summary_json: PathBuf,
}

/// `GLASS2FOCK_THREADS` if set to a positive integer, else the available
/// parallelism.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

fn write_histogram_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(fs::File::create(path)?));
    w.write_record([
        "seed",
        "converged",
        "cycles",
        "final_energy",
        "excitation_energy",
        "found_ground",
    ])?;
    for r in records {
        w.write_record([
            r.seed.to_string(),
            r.converged.to_string(),
            r.cycles.to_string(),
            crate::scf::full_precision(r.final_energy),
            crate::scf::full_precision(r.excitation_energy),
            r.found_ground.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs seeds `base_seed .. base_seed + runs`, writing `histogram.csv` and
/// `summary.json` into the output directory. Records are ordered by seed.
pub fn run_histogram_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    if cfg.runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let glass = SpinGlass::load(&cfg.instance)?;
    let prepared = prepare_instance(&glass, cfg.pipeline, cfg.num_particles)?;
    cfg.scf_config(0).validate()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let records: Vec<RunRecord> = pool.install(|| {
        (0..cfg.runs as u64)
            .into_par_iter()
            .map(|k| run_seed(&prepared, &cfg.scf_config(cfg.base_seed + k)).map(|(r, _)| r))
            .collect::<Result<_>>()
    })?;

    fs::create_dir_all(&cfg.output_dir)?;
    let histogram_csv = cfg.output_dir.join("histogram.csv");
    let summary_json = cfg.output_dir.join("summary.json");
    write_histogram_csv(&histogram_csv, &records)?;
    let summary = Summary::from_records(&records, &prepared);
    fs::write(
        &summary_json,
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;

    Ok(ExperimentOutcome {
        prepared,
        records,
        summary,
        histogram_csv,
        summary_json,
    })
}

/// Single run with its full trace written to `trace_<seed>.csv`.
pub fn run_trace_experiment(cfg: &ExperimentConfig, seed: u64) -> Result<(ScfResult, PathBuf)> {
    let glass = SpinGlass::load(&cfg.instance)?;
    let prepared = prepare_instance(&glass, cfg.pipeline, cfg.num_particles)?;
    let (_, result) = run_seed(&prepared, &cfg.scf_config(seed))?;
    fs::create_dir_all(&cfg.output_dir)?;
    let path = cfg.output_dir.join(format!("trace_{seed}.csv"));
    result
        .trace
        .write_csv(BufWriter::new(fs::File::create(&path)?))?;
    Ok((result, path))
}
