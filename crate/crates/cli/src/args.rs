use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use rational_ortho::chainsolver::{DEFAULT_PRECISION, MIN_PRECISION};
use rational_ortho::exact::{parse_rational, Mat3Q, Rational};
use rational_ortho::ortho::RegularSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Rational orthogonal matrices and pyramid problems with exact answers.
#[derive(Debug, Clone, Parser)]
#[command(name = "rortho", version)]
pub struct CommandRequest {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List primitive Pythagorean triads by hypotenuse.
    Triads {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_d: u64,
    },
    /// Sample regular-algorithm specs and print their matrices.
    MatrixGen {
        #[arg(long, required_unless_present = "spec")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Bound on |m|, |n| for the sampled triads.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..=10_000))]
        param_bound: i64,
        #[arg(long, default_value_t = 6)]
        max_factors: usize,
        /// Fix the inversion bit instead of sampling it.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        epsilon: Option<u8>,
        /// Compose this spec instead of sampling (JSON text or @file).
        #[arg(long, value_parser = json_arg::<RegularSpec>, conflicts_with = "seed")]
        spec: Option<RegularSpec>,
    },
    /// Check the orthogonality relations of a matrix one by one.
    MatrixVerify {
        /// 3×3 matrix as JSON text or @file.
        #[arg(long, value_parser = json_arg::<Mat3Q>, required_unless_present = "instance", conflicts_with = "instance")]
        matrix: Option<Mat3Q>,
        /// A problem file; its matrix and stored data are re-checked.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Which problem of a multi-problem file.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Generate pyramid problems with exact answers and worked solutions.
    ProblemGen {
        #[arg(long)]
        seed: u64,
        /// Keep only instances the closed-form chain handles as stated.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..=10_000))]
        param_bound: i64,
        #[arg(long, default_value_t = 6)]
        max_factors: usize,
        /// Try every ω, σ in 1..=grid.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=100))]
        grid: u32,
        #[arg(long, value_parser = rational_arg, requires = "sigma")]
        omega: Option<Rational>,
        #[arg(long, value_parser = rational_arg, requires = "omega")]
        sigma: Option<Rational>,
        /// Use this spec instead of sampling (JSON text or @file).
        #[arg(long, value_parser = json_arg::<RegularSpec>)]
        spec: Option<RegularSpec>,
        /// Skip problems whose scaled a, b, f or g exceed this.
        #[arg(long)]
        max_value: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        max_attempts: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION, value_parser = precision_arg)]
        precision: u32,
    },
    /// Solve a pyramid problem by the closed-form chain.
    Solve {
        /// A problem file written by problem-gen, or a bare instance.
        #[arg(long, conflicts_with_all = ["a", "b", "c", "c_squared", "f", "g"])]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(short, value_parser = rational_arg)]
        a: Option<Rational>,
        #[arg(short, value_parser = rational_arg)]
        b: Option<Rational>,
        #[arg(short, value_parser = rational_arg, conflicts_with = "c_squared")]
        c: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        c_squared: Option<Rational>,
        #[arg(short, value_parser = rational_arg)]
        f: Option<Rational>,
        #[arg(short, value_parser = rational_arg)]
        g: Option<Rational>,
        #[arg(long, default_value_t = DEFAULT_PRECISION, value_parser = precision_arg)]
        precision: u32,
        /// Let the projections of F, G fall beyond the orthocenter.
        #[arg(long)]
        allow_outside: bool,
    },
    /// Enumerate entire orthogonal matrices with small entries.
    EulerSearch {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
    },
    /// Search for a regular-algorithm expansion of a matrix.
    Factorize {
        #[arg(long, value_parser = json_arg::<Mat3Q>, required_unless_present = "spec", conflicts_with = "spec")]
        matrix: Option<Mat3Q>,
        /// Factorize the matrix this spec composes to.
        #[arg(long, value_parser = json_arg::<RegularSpec>)]
        spec: Option<RegularSpec>,
        /// Pool: every primitive triad with d up to this, all leg signs and orders.
        #[arg(long, default_value_t = 5)]
        pool_max_d: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn precision_arg(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("{s:?} is not a digit count"))?;
    if p < MIN_PRECISION {
        return Err(format!("{p} is below the minimum of {MIN_PRECISION} digits"));
    }
    Ok(p)
}

/// JSON given inline, or read from a file when prefixed with `@`.
fn json_arg<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

/// Parses and validates a command line (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CommandRequest, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let req = CommandRequest::try_parse_from(argv)?;
    if let Command::Solve { instance: None, a, b, c, c_squared, f, g, .. } = &req.command {
        let missing: Vec<&str> = [("-a", a.is_none()), ("-b", b.is_none()), ("-f", f.is_none()), ("-g", g.is_none())]
            .into_iter()
            .chain([("-c or --c-squared", c.is_none() && c_squared.is_none())])
            .filter_map(|(name, absent)| absent.then_some(name))
            .collect();
        if !missing.is_empty() {
            let msg = format!("solve needs --instance or all of the data; missing {}", missing.join(", "));
            return Err(CommandRequest::command().error(ErrorKind::MissingRequiredArgument, msg));
        }
    }
    Ok(req)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<CommandRequest, clap::Error> {
        parse_args(std::iter::once("rortho").chain(args.iter().copied()))
    }

    #[test]
    fn accepted_forms() {
        let r = parse(&["triads", "--max-d", "100"]).unwrap();
        assert!(matches!(r.command, Command::Triads { max_d: 100 }));
        let r = parse(&["problem-gen", "--seed", "7", "--strict"]).unwrap();
        assert!(matches!(r.command, Command::ProblemGen { seed: 7, strict: true, precision: 50, .. }));
        let r = parse(&["--format", "text", "solve", "-a", "125", "-b", "125", "--c-squared", "20000", "-f", "44", "-g", "100"]);
        assert_eq!(r.unwrap().format, Format::Text);
        let r = parse(&["matrix-verify", "--matrix", "[[1,0,0],[0,1,0],[0,0,1]]"]).unwrap();
        assert!(matches!(r.command, Command::MatrixVerify { matrix: Some(_), .. }));
    }

    #[test]
    fn usage_errors() {
        let err = parse(&["solve", "--precision", "10"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("--precision"), "{err}");
        for bad in [
            &["frobnicate"][..],
            &["triads"],
            &["triads", "--max-d", "0"],
            &["problem-gen", "--strict"],
            &["problem-gen", "--seed", "1", "--omega", "3"],
            &["solve", "-a", "3", "-b", "4"],
            &["solve", "--instance", "x.json", "-a", "3"],
            &["matrix-verify", "--matrix", "[1,2]"],
            &["euler-search", "--bound", "0"],
            &["matrix-gen", "--seed", "1", "--epsilon", "2"],
        ] {
            let err = parse(bad).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{bad:?}");
        }
        let err = parse(&["solve", "-a", "3", "-b", "4", "-f", "1"]).unwrap_err();
        assert!(err.to_string().contains("-g"));
    }
}
