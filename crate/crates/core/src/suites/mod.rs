//! Verification suites: each reproduces one module's source-anchored
//! values and emits a report.

pub mod classes;
pub mod cubic;
pub mod fano;
pub mod quartic;
pub mod theta;

use crate::error::{Error, Result};
use crate::report::{ReportBuilder, VerificationReport};

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: usize,
    /// Base prime for the finite-field suites; None picks the suite's
    /// default (7 for the cubic series, 17 for the quartic counts).
    pub prime: Option<u64>,
    /// Largest extension degree for the finite-field suites.
    pub ext: Option<u32>,
    pub genus: u32,
    pub curve: Option<std::path::PathBuf>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            samples: 100,
            prime: None,
            ext: None,
            genus: 4,
            curve: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Classes,
    Fano,
    Theta,
    Cubic,
    Quartic,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "classes" => Ok(Suite::Classes),
            "fano" => Ok(Suite::Fano),
            "theta" => Ok(Suite::Theta),
            "cubic" => Ok(Suite::Cubic),
            "quartic" => Ok(Suite::Quartic),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidInput(format!("unknown suite {other:?}"))),
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<VerificationReport> {
    validate(suite, opts)?;
    let mut builder = ReportBuilder::new(opts.seed);
    match suite {
        Suite::Classes => classes::run(&mut builder)?,
        Suite::Fano => fano::run(&mut builder)?,
        Suite::Theta => theta::run(&mut builder, opts)?,
        Suite::Cubic => cubic::run(&mut builder, opts)?,
        Suite::Quartic => quartic::run(&mut builder, opts)?,
        Suite::All => {
            classes::run(&mut builder)?;
            fano::run(&mut builder)?;
            theta::run(&mut builder, opts)?;
            cubic::run(&mut builder, opts)?;
            quartic::run(&mut builder, opts)?;
        }
    }
    Ok(builder.finish())
}

fn validate(suite: Suite, opts: &SuiteOptions) -> Result<()> {
    if matches!(suite, Suite::Theta | Suite::All) && !(1..=4).contains(&opts.genus) {
        return Err(Error::InvalidInput(format!(
            "exhaustive theta suites need genus in 1..=4, got {}",
            opts.genus
        )));
    }
    if let Some(p) = opts.prime {
        if matches!(suite, Suite::Cubic | Suite::Quartic | Suite::All) && p < 5 {
            return Err(Error::InvalidInput(format!(
                "finite-field suites need a prime >= 5, got {p}"
            )));
        }
    }
    if opts.ext == Some(0) {
        return Err(Error::InvalidInput("extension degree must be >= 1".into()));
    }
    Ok(())
}
