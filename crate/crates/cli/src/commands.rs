use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use serde::Serialize;
use unravel::engine::{run_trajectory, Sampling};
use unravel::ensemble::{observable_excited, run_ensemble, trajectory_rng, EnsembleStats};
use unravel::lindblad::{rate_rhs_model, rate_rhs_model_no_diffusion, rk4_solve_strided, OdeSolution};
use unravel::output::{self, Comparison};
use unravel::{DensityPair, TwoBandModel};

use crate::config::RunConfig;

/// Band used by `compare`, in standard errors.
pub const COMPARE_SIGMAS: f64 = 3.0;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Simulation(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Simulation(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Simulation(m) | Failure::Io(m) => m,
        }
    }
}

pub enum Outcome {
    Done,
    /// `compare` finished but some point left the band.
    Deviates,
}

type CmdResult<T> = Result<T, Failure>;

fn io_err(path: &Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn sim_err(e: unravel::Error) -> Failure {
    Failure::Simulation(e.to_string())
}

struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    fn new(dir: &Path) -> CmdResult<Self> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, f: impl FnOnce(BufWriter<File>) -> io::Result<()>) -> CmdResult<()> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(io_err(&path))?;
        f(BufWriter::new(file)).map_err(io_err(&path))?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CmdResult<()> {
        let text = serde_json::to_string_pretty(value).expect("plain data serializes") + "\n";
        self.write(name, |mut w| io::Write::write_all(&mut w, text.as_bytes()))
    }

    /// Records everything needed to rerun the command.
    fn manifest(mut self, command: &str, cfg: &RunConfig) -> CmdResult<()> {
        #[derive(Serialize)]
        struct Manifest<'a> {
            command: &'a str,
            version: &'a str,
            master_seed: u64,
            outputs: &'a [String],
            config: &'a RunConfig,
        }
        let outputs = self.written.clone();
        self.json(
            "manifest.json",
            &Manifest {
                command,
                version: env!("CARGO_PKG_VERSION"),
                master_seed: cfg.ensemble.master_seed,
                outputs: &outputs,
                config: cfg,
            },
        )
    }
}

fn model(cfg: &RunConfig) -> CmdResult<TwoBandModel> {
    TwoBandModel::with_options(cfg.params(), cfg.model.jump_convention, cfg.diffusion_enabled)
        .map_err(|e| Failure::Config(e.to_string()))
}

fn ensemble(cfg: &RunConfig) -> CmdResult<EnsembleStats<DensityPair>> {
    run_ensemble(&model(cfg)?, &cfg.initial(), &cfg.ensemble(), &observable_excited).map_err(sim_err)
}

fn ode(cfg: &RunConfig) -> CmdResult<OdeSolution<DensityPair>> {
    let p = cfg.params();
    let eta0 = cfg.initial().density();
    let (dt, t_final, stride) = (cfg.integrator.dt, cfg.integrator.t_final, cfg.ensemble.output_stride);
    let solved = if cfg.diffusion_enabled {
        rk4_solve_strided(|e: &DensityPair| rate_rhs_model(&p, e), &eta0, dt, t_final, stride)
    } else {
        rk4_solve_strided(|e: &DensityPair| rate_rhs_model_no_diffusion(&p, e), &eta0, dt, t_final, stride)
    };
    solved.map_err(sim_err)
}

pub fn simulate(cfg: &RunConfig) -> CmdResult<Outcome> {
    let stats = ensemble(cfg)?;
    let mut out = Outputs::new(&cfg.output_dir)?;
    out.write("ensemble.csv", |w| output::write_ensemble_csv(w, &stats))?;
    if !stats.snapshots.is_empty() {
        out.write("density.csv", |w| output::write_density_csv(w, &stats.snapshots))?;
    }
    out.manifest("simulate", cfg)?;
    Ok(Outcome::Done)
}

pub fn solve(cfg: &RunConfig) -> CmdResult<Outcome> {
    let sol = ode(cfg)?;
    let mut out = Outputs::new(&cfg.output_dir)?;
    out.write("ode.csv", |w| output::write_ode_csv(w, &sol))?;
    out.manifest("solve", cfg)?;
    Ok(Outcome::Done)
}

/// A single realization, sampled at every step, on stream 0 of the seed.
pub fn trajectory(cfg: &RunConfig) -> CmdResult<Outcome> {
    let model = model(cfg)?;
    let mut rng = trajectory_rng(cfg.ensemble.master_seed, 0);
    let rec = run_trajectory(
        &model,
        &cfg.initial(),
        &cfg.integrator(),
        &Sampling::every_step(&observable_excited),
        &mut rng,
    )
    .map_err(sim_err)?;
    if let unravel::engine::TerminationStatus::Discarded { time, norm2 } = rec.status {
        return Err(Failure::Simulation(format!(
            "trajectory discarded by the norm guard at t = {time} (norm² = {norm2})"
        )));
    }
    let mut out = Outputs::new(&cfg.output_dir)?;
    out.write("trajectory.csv", |w| output::write_trajectory_csv(w, &rec))?;
    out.write("jumps.csv", |w| output::write_jumps_csv(w, &model, &rec))?;
    out.manifest("trajectory", cfg)?;
    Ok(Outcome::Done)
}

#[derive(Serialize)]
struct Summary {
    max_normalized_deviation: f64,
    worst_t: Option<f64>,
    sigmas: f64,
    points: usize,
    n_samples: usize,
    n_discarded: usize,
    pass: bool,
}

pub fn compare(cfg: &RunConfig) -> CmdResult<Outcome> {
    let stats = ensemble(cfg)?;
    let sol = ode(cfg)?;
    let reference: Vec<f64> = sol.states.iter().map(DensityPair::excited_population).collect();
    let cmp = Comparison::new(&stats, &reference, COMPARE_SIGMAS);

    let mut out = Outputs::new(&cfg.output_dir)?;
    out.write("ensemble.csv", |w| output::write_ensemble_csv(w, &stats))?;
    out.write("ode.csv", |w| output::write_ode_csv(w, &sol))?;
    out.write("compare.csv", |w| output::write_compare_csv(w, &cmp))?;
    let summary = Summary {
        max_normalized_deviation: cmp.max_normalized(),
        worst_t: cmp.worst().map(|i| cmp.times[i]),
        sigmas: COMPARE_SIGMAS,
        points: cmp.times.len(),
        n_samples: stats.n_samples,
        n_discarded: stats.n_discarded,
        pass: cmp.within,
    };
    out.json("summary.json", &summary)?;
    out.manifest("compare", cfg)?;
    Ok(if cmp.within { Outcome::Done } else { Outcome::Deviates })
}
