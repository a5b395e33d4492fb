//! Command-line front end for the `g2forms` library.

pub mod doc;
pub mod selftest;

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use g2forms::cayley::random_g2;
use g2forms::divalg::{
    are_isomorphic_with, build_algebra, check_division, check_flexible, morphism_defect,
    DissidentMapSpec,
};
use g2forms::normalform::{is_conjugate_with, normal_form_with, NormalFormResult, Tolerances};
use g2forms::orthoparam::{
    compose, factorize_with, in_k, in_k_i, in_k_prime, orthogonality_defect, parametrize_sym,
    reduce_to_cross_section, sym_from_tau, DiagSpec, TauTuple,
};
use g2forms::sample::{to_dmatrix, to_mat7};
use g2forms::symeig::{eigen_decompose, jacobi};
use g2forms::{Error, Mat7};

use doc::{angle, num, write_matrix, write_rows, Labelled};

#[derive(Debug, Parser)]
#[command(name = "g2forms", version, about = "Normal forms of symmetric 7x7 matrices under G2")]
pub struct Cli {
    /// Eigenvalues closer than this (relative) are merged.
    #[arg(long, global = true, env = "G2FORMS_CLUSTER_TOL", default_value_t = 1e-7)]
    pub cluster_tol: f64,
    /// Angles closer than this to 0, pi/2 or pi are snapped.
    #[arg(long, global = true, env = "G2FORMS_SNAP_TOL", default_value_t = 1e-9)]
    pub snap_tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type, parameters, canonical matrix and witness of every matrix in a file.
    NormalForm { file: PathBuf },
    /// Whether two matrices lie in the same G2 orbit.
    Conjugate { a: PathBuf, b: PathBuf },
    /// Random elements of the orbits of the matrices in a file.
    OrbitSample {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Polar-coordinate parameters of an orthogonal or symmetric matrix.
    Param {
        file: PathBuf,
        /// Eigenspace dimensions of the diagonal model, e.g. `1,2`.
        #[arg(long)]
        diag: Option<String>,
        /// Expected size of the matrix.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Structure constants and verdicts for the algebra of a positive definite matrix.
    Algebra {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Whether the algebras of two positive definite matrices are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Run the built-in invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input; exit code 2.
    Usage(String),
    /// Input read fine but the computation is not defined for it; exit code 1.
    Domain(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

pub fn execute(cli: &Cli) -> Outcome {
    let tol = Tolerances {
        cluster_tol: cli.cluster_tol,
        snap_tol: cli.snap_tol,
    };
    if !(tol.cluster_tol > 0.0 && tol.snap_tol >= 0.0) {
        return Err(Failure::Usage("tolerances must be positive".into()));
    }
    match &cli.command {
        Command::NormalForm { file } => normal_form_cmd(file, &tol),
        Command::Conjugate { a, b } => conjugate_cmd(a, b, &tol),
        Command::OrbitSample { file, count, seed } => orbit_sample_cmd(file, *count, *seed),
        Command::Param { file, diag, n } => param_cmd(file, diag.as_deref(), *n, &tol),
        Command::Algebra {
            file,
            samples,
            seed,
        } => algebra_cmd(file, *samples, *seed),
        Command::Iso { a, b } => iso_cmd(a, b, &tol),
        Command::Selftest { seed } => {
            let (report, ok) = selftest::run(*seed);
            if ok {
                Ok(report)
            } else {
                print!("{report}");
                Err(Failure::Domain("selftest failed".into()))
            }
        }
    }
}

fn read(path: &Path) -> Result<Vec<Labelled>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    doc::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read7(path: &Path) -> Result<Vec<(String, Mat7)>, Failure> {
    read(path)?
        .into_iter()
        .map(|m| {
            if m.matrix.nrows() != 7 {
                return Err(Failure::Usage(format!(
                    "{}: matrix {} is {}x{}, expected 7x7",
                    path.display(),
                    m.label,
                    m.matrix.nrows(),
                    m.matrix.ncols()
                )));
            }
            Ok((m.label, to_mat7(&m.matrix)))
        })
        .collect()
}

fn first7(path: &Path) -> Result<(String, Mat7), Failure> {
    Ok(read7(path)?.remove(0))
}

fn tau_line(t: &TauTuple) -> String {
    t.blocks
        .iter()
        .map(|b| b.iter().map(|&a| angle(a)).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" | ")
}

fn write_result(out: &mut String, label: &str, delta: &Mat7, r: &NormalFormResult, tol: &Tolerances) {
    let _ = writeln!(out, "matrix {label}");
    let _ = writeln!(out, "type {}", r.params.type_tag);
    if let Ok(es) = eigen_decompose(delta, tol.cluster_tol) {
        for p in &es.pairs {
            let _ = writeln!(out, "eigenpair {} {}", num(p.value), p.multiplicity);
        }
    }
    let labels: Vec<String> = r.params.eigenvalues.iter().map(|&v| num(v)).collect();
    let _ = writeln!(out, "labels {}", labels.join(" "));
    let _ = writeln!(out, "case {}", r.params.case);
    for (name, a) in &r.params.angles {
        let _ = writeln!(out, "angle {name} {}", angle(*a));
    }
    if let Some(t) = &r.params.tau_block {
        let _ = writeln!(out, "tau {}", tau_line(t));
    }
    let _ = writeln!(out, "near_boundary {}", r.near_boundary);
    let _ = writeln!(out, "residual {:.3e}", r.residual);
    let _ = writeln!(out, "canonical");
    write_rows(out, &to_dmatrix(&r.canonical));
    let _ = writeln!(out, "witness");
    write_rows(out, &to_dmatrix(&r.witness.matrix));
}

fn normal_form_cmd(file: &Path, tol: &Tolerances) -> Outcome {
    let mut out = String::new();
    for (k, (label, m)) in read7(file)?.into_iter().enumerate() {
        let r = normal_form_with(&m, tol)
            .map_err(|e| Failure::Domain(format!("matrix {label}: {e}")))?;
        if k > 0 {
            out.push('\n');
        }
        write_result(&mut out, &label, &m, &r, tol);
    }
    Ok(out)
}

fn conjugate_cmd(a: &Path, b: &Path, tol: &Tolerances) -> Outcome {
    let (la, ma) = first7(a)?;
    let (lb, mb) = first7(b)?;
    let na = normal_form_with(&ma, tol)?;
    let nb = normal_form_with(&mb, tol)?;
    let mut out = String::new();
    let verdict = is_conjugate_with(&ma, &mb, tol)?;
    let _ = writeln!(
        out,
        "{}",
        if verdict.is_some() { "CONJUGATE" } else { "NOT_CONJUGATE" }
    );
    let _ = writeln!(out, "type {la} {}", na.params.type_tag);
    let _ = writeln!(out, "type {lb} {}", nb.params.type_tag);
    for (name, x) in &na.params.angles {
        let y = nb.params.angle(name);
        let _ = writeln!(
            out,
            "invariant {name} {} vs {}",
            angle(*x),
            y.map(angle).unwrap_or_else(|| "-".into())
        );
    }
    if let Some(g) = verdict {
        let _ = writeln!(out, "witness");
        write_rows(&mut out, &to_dmatrix(&g.matrix));
    }
    Ok(out)
}

fn orbit_sample_cmd(file: &Path, count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for (label, m) in read7(file)? {
        for k in 0..count {
            let g = random_g2(&mut rng).matrix;
            let s = g.transpose() * m * g;
            let s = (s + s.transpose()) * 0.5;
            write_matrix(&mut out, &format!("{label}.{}", k + 1), &to_dmatrix(&s));
        }
    }
    Ok(out)
}

fn parse_pattern(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|p| match p.trim().parse::<usize>() {
            Ok(m) if m > 0 => Ok(m),
            _ => Err(Failure::Usage(format!("bad multiplicity list {s:?}"))),
        })
        .collect()
}

fn param_cmd(file: &Path, diag: Option<&str>, n: Option<usize>, tol: &Tolerances) -> Outcome {
    let mut out = String::new();
    for (k, Labelled { label, matrix: t }) in read(file)?.into_iter().enumerate() {
        let size = t.nrows();
        if n.is_some_and(|n| n != size) {
            return Err(Failure::Usage(format!(
                "matrix {label} is {size}x{size}, expected {}",
                n.unwrap_or(0)
            )));
        }
        if k > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "matrix {label}");
        let _ = writeln!(out, "n {size}");
        if orthogonality_defect(&t) <= 1e-9 {
            let mults = match diag {
                Some(s) => parse_pattern(s)?,
                None => vec![1; size],
            };
            if mults.iter().sum::<usize>() != size {
                return Err(Failure::Usage(format!(
                    "multiplicities {mults:?} do not add up to {size}"
                )));
            }
            let d = DiagSpec::pattern(&mults);
            let tau = factorize_with(&t, tol.snap_tol)?;
            let _ = writeln!(out, "kind orthogonal");
            let _ = writeln!(out, "tau {}", tau_line(&tau));
            let _ = writeln!(out, "compose_error {:.3e}", (compose(&tau) - &t).amax());
            let (red, _) = reduce_to_cross_section(&t, &d)?;
            let _ = writeln!(out, "pattern {}", join(&mults));
            let _ = writeln!(out, "reduced {}", tau_line(&red));
            membership_lines(&mut out, &tau, &d);
        } else {
            let asym = (&t - t.transpose()).amax();
            if asym > 1e-10 * t.amax().max(1.0) {
                return Err(Failure::Domain(format!(
                    "matrix {label} is neither orthogonal nor symmetric"
                )));
            }
            let d = spectrum_model(&t, tol.cluster_tol)?;
            if let Some(s) = diag {
                if parse_pattern(s)? != d.mults {
                    return Err(Failure::Domain(format!(
                        "matrix {label} has multiplicities {}, not {s}",
                        join(&d.mults)
                    )));
                }
            }
            let tau = parametrize_sym(&t, &d, tol.cluster_tol)?;
            let _ = writeln!(out, "kind symmetric");
            let vals: Vec<String> = d.values.iter().map(|&v| num(v)).collect();
            let _ = writeln!(out, "values {}", vals.join(" "));
            let _ = writeln!(out, "pattern {}", join(&d.mults));
            let _ = writeln!(out, "tau {}", tau_line(&tau));
            let _ = writeln!(
                out,
                "rebuild_error {:.3e}",
                (sym_from_tau(&tau, &d) - &t).amax()
            );
            membership_lines(&mut out, &tau, &d);
        }
    }
    Ok(out)
}

fn join(v: &[usize]) -> String {
    v.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
}

fn membership_lines(out: &mut String, tau: &TauTuple, d: &DiagSpec) {
    let _ = writeln!(out, "in_k {}", in_k(tau, d));
    let _ = writeln!(out, "in_k_prime {}", in_k_prime(tau, d));
    for i in 1..=tau.n() {
        let _ = writeln!(out, "in_k_{i} {}", in_k_i(tau, d, i));
    }
}

/// Diagonal model with the clustered eigenvalues of `a` in ascending order.
fn spectrum_model(a: &DMatrix<f64>, cluster_tol: f64) -> Result<DiagSpec, Failure> {
    let (vals, _) = jacobi(a)?;
    let scale = a.norm().max(1.0);
    let mut values: Vec<f64> = Vec::new();
    let mut mults: Vec<usize> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &v in vals.iter() {
        if v - last <= cluster_tol * scale {
            *mults.last_mut().unwrap() += 1;
        } else {
            values.push(v);
            mults.push(1);
        }
        last = v;
    }
    Ok(DiagSpec::new(values, mults)?)
}

fn algebra_cmd(file: &Path, samples: usize, seed: u64) -> Outcome {
    let (label, m) = first7(file)?;
    let spec = DissidentMapSpec::new(m)?;
    let alg = build_algebra(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flexible = check_flexible(&alg, &mut rng, samples, 1e-8);
    let division = check_division(&alg, &mut rng, samples, 1e-8);
    let mut out = String::new();
    let _ = writeln!(out, "matrix {label}");
    let _ = writeln!(out, "flexible {flexible}");
    let _ = writeln!(out, "division {division}");
    for (k, c) in alg.c.iter().enumerate() {
        let _ = writeln!(out, "structure {k}");
        write_rows(&mut out, &DMatrix::from_fn(8, 8, |r, s| c[(r, s)]));
    }
    Ok(out)
}

fn iso_cmd(a: &Path, b: &Path, tol: &Tolerances) -> Outcome {
    let (_, ma) = first7(a)?;
    let (_, mb) = first7(b)?;
    let sa = DissidentMapSpec::new(ma)?;
    let sb = DissidentMapSpec::new(mb)?;
    let mut out = String::new();
    match are_isomorphic_with(&sa, &sb, tol)? {
        Some(sigma) => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let defect = morphism_defect(
                &build_algebra(&sa),
                &build_algebra(&sb),
                &sigma.matrix,
                &mut rng,
                200,
            );
            let _ = writeln!(out, "ISOMORPHIC");
            let _ = writeln!(out, "morphism_defect {defect:.3e}");
            let _ = writeln!(out, "sigma");
            write_rows(&mut out, &to_dmatrix(&sigma.matrix));
        }
        None => {
            let _ = writeln!(out, "NOT_ISOMORPHIC");
        }
    }
    Ok(out)
}
