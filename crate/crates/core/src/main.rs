use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use glass2fock::embedding::{
    build_construction1_with, integrals_from_glass, FermionIntegrals, ModePairing,
};
use glass2fock::harness::{
    prepare_instance, run_histogram_experiment, run_seed, run_trace_experiment,
    verify_construction1, verify_construction2, ExperimentConfig, Pipeline,
};
use glass2fock::ising::{
    apply_gadget, brute_force_ground, generate_lattice_glass, spectrum, SpinGlass,
};
use glass2fock::scf::ScfConfig;
use glass2fock::{Error, Result};

#[derive(Parser)]
#[command(
    name = "glass2fock",
    version,
    about = "Spin-glass to Hartree-Fock embeddings, SCF experiments and exact checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    #[value(name = "1")]
    MomentumPair,
    #[value(name = "2")]
    PlaneWave,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    HalfShift,
    Reflection,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Site,
    Momentum,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Instance JSON
    instance: PathBuf,
    /// Embed the glass without the zero-magnetization gadget
    #[arg(long)]
    direct: bool,
    #[arg(long, default_value_t = 128)]
    max_cycles: usize,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    /// Defaults to half filling
    #[arg(long)]
    particles: Option<usize>,
}

impl RunArgs {
    fn pipeline(&self) -> Pipeline {
        if self.direct {
            Pipeline::Direct
        } else {
            Pipeline::Gadget
        }
    }

    fn experiment(&self, output_dir: &Path) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(&self.instance, output_dir);
        cfg.max_cycles = self.max_cycles;
        cfg.tolerance = self.tolerance;
        cfg.num_particles = self.particles;
        cfg.pipeline = self.pipeline();
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Random L×L×2 lattice glass
    Gen {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Doubled zero-magnetization instance
    Gadget {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fermionic integrals for an instance
    Embed {
        instance: PathBuf,
        #[arg(long, value_enum)]
        construction: Construction,
        /// Apply the gadget first
        #[arg(long)]
        gadget: bool,
        #[arg(long, value_enum, default_value = "half-shift")]
        pairing: PairingArg,
        /// Mode basis of the emitted integrals (construction 1 only)
        #[arg(long, value_enum, default_value = "site")]
        basis: Basis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One SCF run from a Haar-random start
    Scf {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Many SCF runs; writes histogram.csv and summary.json
    Histogram {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        base_seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// One SCF run with its per-iteration trace
    Trace {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Oracle cross-checks as a JSON report
    Verify {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "1")]
        construction: Construction,
        /// Apply the gadget first (construction 2 only)
        #[arg(long)]
        gadget: bool,
        /// Random densities per check
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Sorted distinct Ising energies
    Spectrum { instance: PathBuf },
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text.to_string() + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn warn_if_magnetized(g: &SpinGlass) -> Result<()> {
    let ground = brute_force_ground(g)?;
    if ground.minimizers.iter().any(|s| s.magnetization() != 0) {
        eprintln!(
            "warning: ground states have nonzero magnetization; \
             the half-filling plane-wave embedding may miss them (use --gadget)"
        );
    }
    Ok(())
}

fn embed(
    g: &SpinGlass,
    construction: Construction,
    pairing: PairingArg,
    basis: Basis,
) -> Result<FermionIntegrals> {
    match construction {
        Construction::MomentumPair => {
            let pairing = match pairing {
                PairingArg::HalfShift => ModePairing::HalfShift,
                PairingArg::Reflection => ModePairing::Reflection,
            };
            let h = build_construction1_with(g, pairing);
            Ok(match basis {
                Basis::Site => h.site_integrals(),
                Basis::Momentum => h.momentum_integrals(),
            })
        }
        Construction::PlaneWave => integrals_from_glass(g),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { size, seed, out } => emit(
            &generate_lattice_glass(size, seed)?.to_json(),
            out.as_deref(),
        ),
        Command::Gadget { instance, out } => {
            let gi = apply_gadget(&SpinGlass::load(instance)?)?;
            eprintln!(
                "pair coupling {}, energy map E' = {}·E + {}",
                gi.pair_coupling, gi.energy_scale, gi.energy_offset
            );
            emit(&gi.doubled.to_json(), out.as_deref())
        }
        Command::Embed {
            instance,
            construction,
            gadget,
            pairing,
            basis,
            out,
        } => {
            let mut g = SpinGlass::load(instance)?;
            if gadget {
                g = apply_gadget(&g)?.doubled;
            } else if matches!(construction, Construction::PlaneWave) {
                warn_if_magnetized(&g)?;
            }
            emit(
                &embed(&g, construction, pairing, basis)?.to_json(),
                out.as_deref(),
            )
        }
        Command::Scf { run, seed } => {
            let prep = prepare_instance(
                &SpinGlass::load(&run.instance)?,
                run.pipeline(),
                run.particles,
            )?;
            let cfg = ScfConfig {
                max_cycles: run.max_cycles,
                delta_p_tolerance: run.tolerance,
                seed,
                ..ScfConfig::default()
            };
            let (record, _) = run_seed(&prep, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&record)?);
            Ok(())
        }
        Command::Histogram {
            run,
            runs,
            base_seed,
            out_dir,
        } => {
            let mut cfg = run.experiment(&out_dir);
            cfg.runs = runs;
            cfg.base_seed = base_seed;
            let outcome = run_histogram_experiment(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&outcome.summary)?);
            Ok(())
        }
        Command::Trace { run, seed, out_dir } => {
            let (result, path) = run_trace_experiment(&run.experiment(&out_dir), seed)?;
            eprintln!(
                "seed {seed}: converged={} cycles={} energy={}",
                result.converged, result.cycles_used, result.final_energy
            );
            println!("{}", path.display());
            Ok(())
        }
        Command::Verify {
            instance,
            construction,
            gadget,
            samples,
        } => {
            let g = SpinGlass::load(instance)?;
            let report = match construction {
                Construction::MomentumPair => {
                    let g = if gadget { apply_gadget(&g)?.doubled } else { g };
                    verify_construction1(&g, samples)?
                }
                Construction::PlaneWave => verify_construction2(&g, gadget, samples)?,
            };
            println!("{}", report.to_json());
            if report.all_pass() {
                Ok(())
            } else {
                Err(Error::InvalidArgument("verification failed".into()))
            }
        }
        Command::Spectrum { instance } => {
            let levels: Vec<String> = spectrum(&SpinGlass::load(instance)?)?
                .iter()
                .map(i64::to_string)
                .collect();
            println!("{}", levels.join(" "));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let user_input = e.is_validation()
                || matches!(&e, Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound);
            ExitCode::from(if user_input { 1 } else { 2 })
        }
    }
}
