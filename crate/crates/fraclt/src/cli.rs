//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fraclt_core::bgk::{bgk_sum, blaschke, envelope_estimate, SampleSpec};
use fraclt_core::conformal::{
    dist_to_ray, disc_samples, distortion_disc, distortion_ray, g_dist_bound, inverse_moduli, phi, phi_inv,
    slit_samples, MapParam,
};
use fraclt_core::determinant::GammaP;
use fraclt_core::discretize::{Grid, OmegaData, PotentialKind, PotentialSpec};
use fraclt_core::eigen::SpectralClass;
use fraclt_core::lieb_thirring::{
    classified_spectrum, constants_bundle, summary_line, verify, ConstantsBundle, SpectralParams, Theorem,
    VerifyOptions,
};
use fraclt_core::resolvent::{bound_auto, bound_left_half_plane, resolvent_lp_direct};
use fraclt_core::Complex64;

use crate::complex::parse_complex;
use crate::config::{RunConfig, DEFAULT_TAU};
use crate::error::{CliError, Result};
use crate::report::{status_of, JobStatus};
use crate::runner::{output_dir, run_config};

#[derive(Debug, Parser)]
#[command(name = "fraclt", version, about = "Eigenvalue-sum bounds for fractional Schrödinger operators with complex potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every job of a JSON configuration and write reports plus a manifest.
    Run {
        config: PathBuf,
        /// Output directory (default: the configuration's, then $FRACLT_OUTPUT_DIR, then ./fraclt-out).
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Override the configuration's worker cap.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print every constant of a bound.
    Constants {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// `η = ‖V(-ω-H₀)^{-1}‖`, giving `C_ω = 1/(1-η)`.
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long)]
        gamma_p: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Free-resolvent L^p norm, by quadrature and by the closed-form bound.
    Resolvent {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        /// Spectral parameter, e.g. -1, 2i, 0.5-0.5i or re,im.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        lambda: Complex64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Check the disc/slit-plane distortion estimates on quasi-random samples.
    Distortion {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Zero sum of a normalized Blaschke product against its estimated envelope.
    Bgk {
        /// Modulus of every zero.
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
    },
    /// Classified eigenvalues of the discretized operator as CSV.
    Spectrum {
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = fraclt_core::eigen::DEFAULT_EIG_TOL)]
        eig_tol: f64,
        /// Classification threshold (default: from the residuals).
        #[arg(long)]
        eps: Option<f64>,
        /// Write the table here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a single verification job given by flags.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 0.5)]
        eta_target: f64,
        /// Also write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, value_parser = parse_theorem)]
    pub theorem: Theorem,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
}

impl ParamArgs {
    fn params(&self) -> SpectralParams {
        SpectralParams::new(self.d, self.s, self.p, self.tau)
    }
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// Grid points per axis (a power of two).
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Box side length.
    #[arg(long, default_value_t = 60.0)]
    pub l: f64,
    #[arg(long, value_parser = parse_kind, default_value = "gaussian")]
    pub kind: PotentialKind,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "-0.35,0.35")]
    pub amplitude: Complex64,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl OperatorArgs {
    fn potential(&self) -> Result<PotentialSpec> {
        let seed = match (self.kind, self.seed) {
            (PotentialKind::RandomBandlimited, None) => {
                return Err(CliError::usage("random potentials need --seed"));
            }
            (_, s) => s.unwrap_or(0),
        };
        Ok(PotentialSpec {
            kind: self.kind,
            amplitude: self.amplitude,
            width: self.width,
            center: Vec::new(),
            seed,
        })
    }
}

fn parse_theorem(s: &str) -> std::result::Result<Theorem, String> {
    s.parse().map_err(|e: fraclt_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<PotentialKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown potential kind {s:?}; expected gaussian, box, random-bandlimited or constant"))
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        // a closed downstream pipe (`| head`) is not a failure
        Err(CliError::Io { ref source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_out(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<u8> {
    match cmd {
        Command::Run {
            config,
            output_dir: flag,
            workers,
        } => {
            let cfg = RunConfig::load(&config)?;
            let dir = output_dir(flag.as_deref(), &cfg);
            let outcome = run_config(&cfg, &dir, workers)?;
            for r in &outcome.reports {
                match &r.report {
                    Some(rep) => writeln!(out, "[{:?}] {}: {}", r.status, r.job.name, summary_line(rep)),
                    None => writeln!(out, "[{:?}] {}: {}", r.status, r.job.name, r.error.as_deref().unwrap_or("")),
                }
                .map_err(io_out)?;
            }
            writeln!(
                out,
                "wrote {} report(s) and {} to {}",
                outcome.reports.len(),
                crate::runner::MANIFEST_FILE,
                outcome.dir.display()
            )
            .map_err(io_out)?;
            Ok(outcome.manifest.exit_code)
        }
        Command::Constants {
            params,
            omega,
            eta,
            gamma_p,
            json,
        } => {
            let sp = params.params();
            let om = OmegaData::new(omega, eta)?;
            let gamma = gamma_p.map(|g| GammaP::custom(sp.p, g)).transpose()?;
            let b = constants_bundle(params.theorem, &sp, &om, gamma)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&b).expect("bundle serializes")).map_err(io_out)?;
            } else {
                print_bundle(out, &b).map_err(io_out)?;
            }
            Ok(0)
        }
        Command::Resolvent { d, s, p, lambda, tol } => {
            let direct = resolvent_lp_direct(d, s, p, lambda, tol)?;
            let bound = bound_auto(d, s, p, lambda)?;
            writeln!(out, "direct = {direct:.12}").map_err(io_out)?;
            writeln!(out, "bound = {bound:.12}").map_err(io_out)?;
            if lambda.re < 0.0 {
                let refined = bound_left_half_plane(d, s, p, lambda)?;
                writeln!(out, "bound_left_half_plane = {refined:.12}").map_err(io_out)?;
            }
            Ok(u8::from(direct > bound))
        }
        Command::Distortion { a, samples } => distortion(out, a, samples),
        Command::Bgk { radius, count, tau } => {
            if !(radius > 0.0 && radius < 1.0) || count == 0 {
                return Err(CliError::usage("need 0 < radius < 1 and count >= 1"));
            }
            let zeros: Vec<Complex64> = (0..count)
                .map(|j| Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / count as f64 + 0.1))
                .collect();
            let h = |z: Complex64| blaschke(&zeros, z);
            let k = envelope_estimate(&h, 0.0, &[], &SampleSpec::default())?;
            let sum = bgk_sum(&zeros, 0.0, tau, &[])?;
            writeln!(out, "bgk_sum = {sum:.12e}").map_err(io_out)?;
            writeln!(out, "k_est = {k:.12e}").map_err(io_out)?;
            writeln!(out, "ratio = {:.6e}", sum / k).map_err(io_out)?;
            Ok(0)
        }
        Command::Spectrum {
            d,
            s,
            op,
            eig_tol,
            eps,
            output,
        } => {
            let grid = Grid::new(d, op.n, op.l)?;
            let v = op.potential()?.sample(&grid)?;
            let opts = VerifyOptions {
                eig_tol,
                classification_eps: eps,
                ..VerifyOptions::default()
            };
            let spec = classified_spectrum(&grid, s, &v, &opts)?;
            let sink: Box<dyn Write + '_> = match &output {
                Some(path) => Box::new(std::fs::File::create(path).map_err(|e| CliError::io(path, e))?),
                None => Box::new(&mut *out),
            };
            let mut w = csv::Writer::from_writer(sink);
            let csv_err = |e: csv::Error| CliError::io(output.clone().unwrap_or_else(|| "<stdout>".into()), e.into());
            w.write_record(["index", "re", "im", "residual", "dist_to_ray", "class"]).map_err(csv_err)?;
            let classes = spec.classes.clone().unwrap_or_default();
            for (i, (l, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
                let class = match classes.get(i) {
                    Some(SpectralClass::DiscreteCandidate) => "discrete-candidate",
                    _ => "essential-like",
                };
                w.write_record([
                    i.to_string(),
                    format!("{:e}", l.re),
                    format!("{:e}", l.im),
                    format!("{r:e}"),
                    format!("{:e}", dist_to_ray(*l)),
                    class.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(|e| CliError::io("<csv>", e))?;
            Ok(0)
        }
        Command::Verify {
            params,
            op,
            eta_target,
            report,
        } => {
            let sp = params.params();
            let grid = Grid::new(sp.d, op.n, op.l)?;
            let v = op.potential()?.sample(&grid)?;
            let opts = VerifyOptions {
                eta_target,
                ..VerifyOptions::default()
            };
            let r = verify(params.theorem, &grid, &sp, &v, &opts)?;
            writeln!(out, "{}", summary_line(&r)).map_err(io_out)?;
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&r).expect("report serializes");
                std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            }
            Ok(u8::from(status_of(&r) != JobStatus::Passed))
        }
    }
}

fn print_bundle(out: &mut dyn Write, b: &ConstantsBundle) -> std::io::Result<()> {
    let (k_name, env_name) = match b.theorem {
        Theorem::T1 => ("K1", "K2"),
        Theorem::T1b => ("K4", "K5"),
        Theorem::T2 => ("K1", ""),
    };
    writeln!(out, "theorem = {}", b.theorem)?;
    writeln!(out, "case = {:?}", b.case)?;
    let label = if b.integral_index == 0 { "I".to_string() } else { format!("I_{}", b.integral_index) };
    writeln!(out, "{label} = {:.12}", b.integral)?;
    writeln!(out, "{label}_exponents = ({}, {})", b.integral_exponents.0, b.integral_exponents.1)?;
    if let Some(d) = b.delta {
        writeln!(out, "delta_{} = {d:.12}", b.integral_index)?;
    }
    let factor_name = match b.theorem {
        Theorem::T1 => "M1",
        Theorem::T1b => "N1",
        Theorem::T2 => "W",
    };
    writeln!(out, "{factor_name} = {:.12}", b.resolvent_factor)?;
    writeln!(out, "{k_name} = {:.12}", b.k)?;
    if let Some(k) = b.k_envelope {
        writeln!(out, "{env_name} = {k:.12}")?;
    }
    if let Some(g) = b.gamma_p {
        writeln!(out, "Gamma_p = {g:.12}")?;
    }
    writeln!(out, "omega = {}", b.omega)?;
    writeln!(out, "C_omega = {:.12}", b.c_omega)?;
    writeln!(out, "explicit_factor = {:.12}", b.explicit_factor)
}

fn distortion(out: &mut dyn Write, a: f64, samples: usize) -> Result<u8> {
    let m = MapParam::new(a)?;
    // (name, violations, largest relative violation)
    let mut suites: Vec<(&str, usize, f64)> = Vec::new();
    let mut disc = (0, 0.0f64);
    let mut ray = (0, 0.0f64);
    let mut moduli = (0, 0.0f64);
    let mut resolvent = (0, 0.0f64);
    let record = |slot: &mut (usize, f64), excess: f64| {
        if excess > 0.0 {
            slot.0 += 1;
            slot.1 = slot.1.max(excess);
        }
    };
    for z in disc_samples(samples) {
        let w = distortion_disc(m, z)?;
        let x = dist_to_ray(phi(m, z)?);
        record(&mut disc, ((w.lower - x).max(x - w.upper)) / x.max(f64::MIN_POSITIVE));
    }
    for l in slit_samples(samples) {
        let w = distortion_ray(m, l)?;
        let x = 1.0 - phi_inv(m, l)?.norm();
        record(&mut ray, ((w.lower - x).max(x - w.upper)) / x);
        let z = phi_inv(m, l)?;
        let (plus, minus) = inverse_moduli(m, l)?;
        let e = (((z + 1.0).norm() - plus).abs() / plus).max(((z - 1.0).norm() - minus).abs() / minus);
        record(&mut moduli, e - 1e-12);
        let g = g_dist_bound(m, l)?;
        record(&mut resolvent, (g.lower - g.actual) / g.lower);
    }
    suites.push(("disc sandwich", disc.0, disc.1));
    suites.push(("ray sandwich", ray.0, ray.1));
    suites.push(("inverse moduli", moduli.0, moduli.1));
    suites.push(("resolvent image", resolvent.0, resolvent.1));
    let mut worst: Option<(&str, f64)> = None;
    for (name, count, excess) in &suites {
        writeln!(out, "{name}: {count} violation(s) in {samples} samples").map_err(io_out)?;
        if *count > 0 && worst.is_none_or(|(_, w)| *excess > w) {
            worst = Some((name, *excess));
        }
    }
    match worst {
        None => writeln!(out, "max violation = none").map_err(io_out)?,
        Some((name, e)) => writeln!(out, "max violation = {e:.3e} ({name})").map_err(io_out)?,
    }
    Ok(u8::from(worst.is_some()))
}
