use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qcontrol::analysis::{analyze, orbit_equality, OcFlavor};
use qcontrol::error::Error;
use qcontrol::io::{BasisFile, DensityFile, ReportFile, StateFile, SystemFile};
use qcontrol::lie::lie_closure;
use qcontrol::matcore::StateVector;
use qcontrol::models::{example_orbit_pair, example_sp2_basis, single_spin, two_spin, Coupling};
use qcontrol::sim::{equivalent_state_check, propagate_state, PulseSequence};

#[derive(Parser)]
#[command(name = "qcontrol", version, about = "Controllability analysis for bilinear quantum control systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    SingleSpin,
    TwoSpin,
    ExampleSp2,
    ExampleOrbit,
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Ising,
    Isotropic,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a system file: dimensions, the four verdicts, classification.
    Analyze {
        path: PathBuf,
        /// Write a machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also evaluate orbit equality for this density matrix.
        #[arg(long)]
        density: Option<PathBuf>,
    },
    /// Write a builtin model as a system file.
    Model {
        family: Family,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long = "J")]
        j: Option<f64>,
        #[arg(long)]
        gamma1: Option<f64>,
        #[arg(long)]
        gamma2: Option<f64>,
        #[arg(long)]
        coupling: Option<CouplingArg>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the generated Lie algebra dimensions for a system file.
    Closure {
        path: PathBuf,
        /// Restrict the dumped basis to the control-only algebra.
        #[arg(long)]
        controls_only: bool,
        /// Dump the orthonormal basis matrices here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Propagate a state through a pulse sequence.
    Simulate {
        system: PathBuf,
        pulses: PathBuf,
        #[arg(long)]
        initial: Option<PathBuf>,
        #[arg(long)]
        target: Option<PathBuf>,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Conditioning(_) => 3,
        _ => 2,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    match cli.command {
        Command::Analyze { path, json, density } => {
            let file: SystemFile = read_json(&path).map_err(|m| (2, m))?;
            let model = file.to_model().map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let report = analyze(&model).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let orbit = match density {
                Some(dpath) => {
                    let dfile: DensityFile = read_json(&dpath).map_err(|m| (2, m))?;
                    let d = dfile.to_density().map_err(|e| (exit_code_for(&e), e.to_string()))?;
                    let l = lie_closure(&model.generators())
                        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
                    Some(orbit_equality(&l, &d).map_err(|e| (exit_code_for(&e), e.to_string()))?)
                }
                None => None,
            };
            println!("label: {}", model.label());
            println!("n: {}", model.n());
            println!("dim_L: {}", report.dim_l);
            println!("dim_B: {}", report.dim_b);
            let flavor = match report.oc_flavor {
                OcFlavor::SpecialUnitary => " (special-unitary)",
                OcFlavor::Unitary => " (unitary)",
                OcFlavor::None => "",
            };
            println!("OC: {}{}", report.oc, flavor);
            println!("PSC: {}", report.psc);
            println!("ESC: {}", report.esc);
            println!("DMC: {}", report.dmc);
            println!(
                "classification: {}",
                serde_json::to_value(report.classification).unwrap().as_str().unwrap()
            );
            println!(
                "small-time obstruction: {}",
                serde_json::to_value(report.small_time_obstruction).unwrap().as_str().unwrap()
            );
            if let Some(eq) = orbit {
                println!("orbit equality: {eq}");
            }
            for note in &report.diagnostics {
                println!("note: {note}");
            }
            if let Some(out) = json {
                let rf = ReportFile {
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    input_digest: file.digest(),
                    report,
                    orbit_equality: orbit,
                };
                write_json(&out, &rf).map_err(|m| (2, m))?;
            }
            Ok(())
        }
        Command::Model { family, omega, j, gamma1, gamma2, coupling, n, seed, output } => {
            let missing = |what: &str| (2u8, format!("missing parameter for this family: {what}"));
            match family {
                Family::SingleSpin => {
                    let omega = omega.ok_or_else(|| missing("--omega"))?;
                    write_json(&output, &SystemFile::from_model(&single_spin(omega)))
                        .map_err(|m| (2, m))?;
                }
                Family::TwoSpin => {
                    let j = j.ok_or_else(|| missing("--J"))?;
                    let g1 = gamma1.ok_or_else(|| missing("--gamma1"))?;
                    let g2 = gamma2.ok_or_else(|| missing("--gamma2"))?;
                    let c = match coupling.unwrap_or(CouplingArg::Ising) {
                        CouplingArg::Ising => Coupling::Ising,
                        CouplingArg::Isotropic => Coupling::Isotropic,
                    };
                    let model =
                        two_spin(j, g1, g2, c).map_err(|e| (exit_code_for(&e), e.to_string()))?;
                    write_json(&output, &SystemFile::from_model(&model)).map_err(|m| (2, m))?;
                }
                Family::ExampleSp2 => {
                    let basis = example_sp2_basis();
                    let model = qcontrol::analysis::SystemModel::new(
                        qcontrol::matcore::CMat::zeros(4, 4),
                        basis.elements().to_vec(),
                        "example-sp2",
                    )
                    .map_err(|e| (exit_code_for(&e), e.to_string()))?;
                    write_json(&output, &SystemFile::from_model(&model)).map_err(|m| (2, m))?;
                }
                Family::ExampleOrbit => {
                    let n = n.unwrap_or(4);
                    let mut v = vec![0.0; n];
                    if n > 0 {
                        v[0] = 1.0;
                    }
                    let (d, dp, jm) = example_orbit_pair(n, &v, seed)
                        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
                    let file = DensityFile {
                        n,
                        matrix: qcontrol::io::matrix_to_json(d.matrix()),
                        d_prime: Some(qcontrol::io::matrix_to_json(dp.matrix())),
                        j: Some(qcontrol::io::matrix_to_json(&jm)),
                    };
                    write_json(&output, &file).map_err(|m| (2, m))?;
                }
            }
            Ok(())
        }
        Command::Closure { path, controls_only, dump } => {
            let file: SystemFile = read_json(&path).map_err(|m| (2, m))?;
            let model = file.to_model().map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let l = lie_closure(&model.generators())
                .map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let b = lie_closure(model.controls())
                .map_err(|e| (exit_code_for(&e), e.to_string()))?;
            println!("dim_L: {}", l.dim());
            println!("dim_B: {}", b.dim());
            if let Some(out) = dump {
                let basis = if controls_only { &b } else { &l };
                write_json(&out, &BasisFile::from_basis(basis)).map_err(|m| (2, m))?;
            }
            Ok(())
        }
        Command::Simulate { system, pulses, initial, target } => {
            let file: SystemFile = read_json(&system).map_err(|m| (2, m))?;
            let model = file.to_model().map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let seq: PulseSequence = read_json(&pulses).map_err(|m| (2, m))?;
            let psi0 = match initial {
                Some(p) => {
                    let sf: StateFile = read_json(&p).map_err(|m| (2, m))?;
                    sf.to_state().map_err(|e| (exit_code_for(&e), e.to_string()))?
                }
                None => StateVector::basis(model.n(), 0),
            };
            let out = propagate_state(&model, &seq, &psi0)
                .map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let amps: Vec<String> = out
                .amplitudes()
                .iter()
                .map(|a| format!("[{:.12}, {:.12}]", a.re, a.im))
                .collect();
            println!("final state: [{}]", amps.join(", "));
            println!("norm: {:.12}", out.amplitudes().norm());
            if let Some(tpath) = target {
                let tf: StateFile = read_json(&tpath).map_err(|m| (2, m))?;
                let t = tf.to_state().map_err(|e| (exit_code_for(&e), e.to_string()))?;
                let (matched, phase) = equivalent_state_check(&out, &t)
                    .map_err(|e| (exit_code_for(&e), e.to_string()))?;
                println!("fidelity: {:.12}", out.fidelity(&t));
                println!("esc match: {matched}");
                println!("esc phase: {phase:.12}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
