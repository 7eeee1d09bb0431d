use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use invspec::chardet::{find_det_eigenvalues, BoundaryPolynomialProblem, SearchBox};
use invspec::neumann::{neumann_eigenvalues, Potential};
use invspec::reconstruct::{reconstruct_from_candidates, NodePolicy};
use invspec::workbench::io::{
    emit, parse_coeff_list, parse_real_list, read_document, write_document, write_reports_csv,
    ComparisonFile, ReconstructionFile, ReportFile, SpectrumFile, UniquenessFile,
};
use invspec::workbench::{
    compare_neumann, default_box, roundtrip, roundtrip_suite, uniqueness_probe, ExperimentConfig,
    WorkbenchError,
};
use invspec::Tolerances;

#[derive(Parser)]
#[command(
    name = "invspec",
    version,
    about = "Forward and inverse spectral experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Neumann eigenvalues of a potential.
    Eigen {
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Zeros of the characteristic determinant inside a box.
    DetRoots {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[command(flatten)]
        search: BoxArg,
        #[arg(long, default_value_t = 256)]
        max_roots: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Boundary polynomial coefficients from a spectrum file.
    Reconstruct {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        eigs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coefficients to eigenvalues and back.
    Roundtrip {
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["seed", "degree", "trials"])]
        coeffs: Option<String>,
        #[arg(long, requires = "degree")]
        seed: Option<u64>,
        #[arg(long, requires = "seed")]
        degree: Option<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 2.0)]
        coeff_bound: f64,
        #[command(flatten)]
        search: BoxArg,
        #[arg(long)]
        out: PathBuf,
        /// Also write one CSV row per trial.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Checks that two boundary polynomials are separated by their spectra.
    Uniqueness {
        #[arg(long, allow_hyphen_values = true)]
        coeffs_a: String,
        #[arg(long, allow_hyphen_values = true)]
        coeffs_b: String,
        #[command(flatten)]
        search: BoxArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compares the Neumann spectra of two potentials; prints JSON.
    Compare {
        #[arg(long)]
        potential_a: PathBuf,
        #[arg(long)]
        potential_b: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args)]
struct BoxArg {
    /// Search rectangle `re0,re1,im0,im1`.
    #[arg(long = "box", allow_hyphen_values = true)]
    search_box: Option<String>,
}

impl BoxArg {
    fn resolve(&self) -> Result<SearchBox, WorkbenchError> {
        let Some(text) = &self.search_box else {
            return Ok(default_box());
        };
        let v = parse_real_list("box", text)?;
        if v.len() != 4 {
            return Err(WorkbenchError::Invalid(format!(
                "box: expected 4 numbers, got {}",
                v.len()
            )));
        }
        Ok(SearchBox::new(v[0], v[1], v[2], v[3])?)
    }
}

fn run(command: Command) -> Result<(), WorkbenchError> {
    match command {
        Command::Eigen {
            potential,
            count,
            tol,
            out,
        } => {
            let q: Potential = read_document(&potential)?;
            let tolerances = Tolerances {
                eig_tol: tol,
                ..Tolerances::default()
            };
            tolerances.validate()?;
            let spectrum = neumann_eigenvalues(&q, count, &tolerances)?;
            write_document(&out, &SpectrumFile::from(&spectrum))
        }
        Command::DetRoots {
            coeffs,
            search,
            max_roots,
            out,
        } => {
            let a = parse_coeff_list(&coeffs)?;
            let bx = search.resolve()?;
            let spectrum = find_det_eigenvalues(
                &BoundaryPolynomialProblem::new(a),
                &bx,
                max_roots,
                &Tolerances::default(),
            )?;
            if spectrum.roots.is_empty() {
                eprintln!("no roots in the box");
            }
            write_document(&out, &SpectrumFile::from(&spectrum))
        }
        Command::Reconstruct { degree, eigs, out } => {
            let file: SpectrumFile = read_document(&eigs)?;
            let (nodes, result) = reconstruct_from_candidates(
                &file.values(),
                degree,
                NodePolicy::default(),
                &Tolerances::default(),
            )?;
            write_document(&out, &ReconstructionFile::new(&nodes, &result))
        }
        Command::Roundtrip {
            coeffs,
            seed,
            degree,
            trials,
            coeff_bound,
            search,
            out,
            csv,
        } => {
            let mut cfg = ExperimentConfig {
                search_box: search.resolve()?,
                coeff_bound,
                trials,
                ..ExperimentConfig::default()
            };
            let reports = match (coeffs, seed, degree) {
                (Some(c), _, _) => {
                    let a = parse_coeff_list(&c)?;
                    cfg.min_degree = a.degree();
                    cfg.max_degree = a.degree();
                    vec![roundtrip(&a, &cfg)?]
                }
                (None, Some(seed), Some(s)) => {
                    cfg.seed = seed;
                    cfg.min_degree = s;
                    cfg.max_degree = s;
                    roundtrip_suite(&cfg)?
                }
                _ => {
                    return Err(WorkbenchError::Invalid(
                        "give --coeffs, or --seed with --degree".into(),
                    ))
                }
            };
            let files: Vec<ReportFile> = reports.iter().map(ReportFile::from).collect();
            if let [single] = files.as_slice() {
                write_document(&out, single)?;
            } else {
                write_document(&out, &files)?;
            }
            if let Some(path) = csv {
                let file = std::fs::File::create(&path).map_err(|e| io_error(&path, e))?;
                write_reports_csv(&reports, file)?;
            }
            match reports.iter().position(|r| !r.within_bound()) {
                Some(t) => Err(WorkbenchError::Numerical(format!(
                    "trial {t}: coefficient error {:e} exceeds 1e-6 × condition {:e}",
                    reports[t].max_coeff_error, reports[t].condition
                ))),
                None => Ok(()),
            }
        }
        Command::Uniqueness {
            coeffs_a,
            coeffs_b,
            search,
            out,
        } => {
            let a = parse_coeff_list(&coeffs_a)?;
            let b = parse_coeff_list(&coeffs_b)?;
            let cfg = ExperimentConfig {
                search_box: search.resolve()?,
                min_degree: a.degree().min(b.degree()),
                max_degree: a.degree().max(b.degree()),
                ..ExperimentConfig::default()
            };
            let report = uniqueness_probe(&a, &b, &cfg)?;
            write_document(&out, &UniquenessFile::from(&report))?;
            if report.passed {
                Ok(())
            } else {
                Err(WorkbenchError::Numerical(
                    "spectra agree but reconstruction missed a generator".into(),
                ))
            }
        }
        Command::Compare {
            potential_a,
            potential_b,
            count,
            tol,
        } => {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(WorkbenchError::Invalid("tol: must be positive".into()));
            }
            let qa: Potential = read_document(&potential_a)?;
            let qb: Potential = read_document(&potential_b)?;
            let verdict = compare_neumann(&qa, &qb, count, tol, &Tolerances::default())?;
            print!("{}", emit(&ComparisonFile::from(&verdict)));
            Ok(())
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> WorkbenchError {
    WorkbenchError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
