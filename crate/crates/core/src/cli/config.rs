//! Command-line flags and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::combinatorics::{RingParams, DEFAULT_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, DEFAULT_DENSE_GUARD};
use crate::homology::{EngineOptions, DEFAULT_ZGEN_MAX_T};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Diagram,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "kosz", version, about = "Homology of Koszul complexes of powers of the maximal ideal")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Number of variables.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Veronese degree.
    #[arg(long, global = true)]
    pub c: Option<u32>,
    /// Characteristic: 0 or a prime.
    #[arg(long = "char", global = true, default_value_t = 0)]
    pub characteristic: u64,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, env = "KOSZ_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Diagram)]
    pub format: Format,
    /// Certified rational ranks by fraction-free elimination.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Number of primes for multi-prime rational ranks.
    #[arg(long, global = true, default_value_t = 2)]
    pub primes: usize,
    /// Compute every multidegree block instead of one per orbit.
    #[arg(long, global = true)]
    pub no_orbit: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_DENSE_GUARD)]
    pub dense_guard: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    pub max_degree: u32,
    #[arg(long, global = true, default_value_t = DEFAULT_ZGEN_MAX_T)]
    pub zgen_max_t: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// dim H_t(m^c)_d.
    Homology {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        deg: u32,
    },
    /// Table of dim H_t(m^c)_{tc+j}.
    Table {
        /// Largest homological degree [default: N - n].
        #[arg(long)]
        tmax: Option<usize>,
        /// Largest offset j [default: n(c-1) + 1].
        #[arg(long)]
        offset: Option<u32>,
    },
    /// Betti table of the Veronese module V(c, k).
    Betti {
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// [default: N - n]
        #[arg(long)]
        imax: Option<usize>,
    },
    /// Green-Lazarsfeld index of the Veronese ring.
    Index {
        /// [default: N - n]
        #[arg(long)]
        imax: Option<usize>,
    },
    /// Check structural properties against computed data.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Primes where some block rank drops.
    Chardep {
        #[arg(long, default_value_t = 2)]
        tmax: usize,
        #[arg(long, default_value_t = 0)]
        dmin: u32,
        #[arg(long)]
        dmax: u32,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum VerifyCommand {
    /// dim H_i,d = dim H_{N-n-i, Nc-n-d} on a table.
    Duality {
        #[arg(long)]
        tmax: Option<usize>,
        #[arg(long)]
        offset: Option<u32>,
    },
    /// H_t,tc+j = 0 for j >= t + c, and for j = t + c - 1 when t >= c in good characteristic.
    Vanishing {
        #[arg(long)]
        tmax: Option<usize>,
    },
    /// (c+1)! m^{c-1} Z_1^c consists of boundaries.
    Factorial {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Check every generator of this multidegree, e.g. 1,1,1,1,1,1,1.
        #[arg(long, value_delimiter = ',')]
        stratum: Option<Vec<u32>>,
    },
    /// Coefficient spaces of nonzero cycles in K_t have dimension >= t + 1.
    Coeffdim {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_t: usize,
    },
    /// Green's bound on t_i for V(c, k).
    Greenbound {
        /// Single shift; all k < c when omitted.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        imax: Option<usize>,
    },
    /// Minimal generators of Z_t(m^c) by degree.
    Zgen {
        #[arg(long)]
        t: usize,
    },
}

/// Validated global settings.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub c: u32,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub threads: Option<usize>,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub exact: bool,
    pub primes: usize,
    pub orbit_reduction: bool,
    pub dense_guard: u64,
    pub max_degree: u32,
    pub zgen_max_t: usize,
    #[serde(skip)]
    pub params: RingParams,
    #[serde(skip)]
    pub field: FieldSpec,
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidParams(format!("{flag}: {msg}"))
}

fn flag_error(flag: &str, e: Error) -> Error {
    match e {
        Error::InvalidParams(msg) => usage(flag, msg),
        other => usage(flag, other),
    }
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self> {
        let n = g.n.ok_or_else(|| usage("--n", "required"))?;
        let c = g.c.ok_or_else(|| usage("--c", "required"))?;
        if n == 0 {
            return Err(usage("--n", "must be at least 1"));
        }
        if c == 0 {
            return Err(usage("--c", "must be at least 1"));
        }
        if g.threads == Some(0) {
            return Err(usage("--threads", "must be at least 1"));
        }
        if g.primes == 0 {
            return Err(usage("--primes", "must be at least 1"));
        }
        let params = RingParams::with_max_degree(n, c, g.max_degree).map_err(|e| flag_error("--n", e))?;
        let field = if g.characteristic == 0 {
            if g.exact {
                FieldSpec::exact()
            } else {
                FieldSpec::multi_prime(g.primes, g.seed)
            }
        } else {
            FieldSpec::prime(g.characteristic).map_err(|e| flag_error("--char", e))?
        };
        Ok(RunConfig {
            n,
            c,
            characteristic: g.characteristic,
            threads: g.threads,
            seed: g.seed,
            cache_dir: g.cache_dir.clone(),
            format: g.format,
            exact: g.exact,
            primes: g.primes,
            orbit_reduction: !g.no_orbit,
            dense_guard: g.dense_guard,
            max_degree: g.max_degree,
            zgen_max_t: g.zgen_max_t,
            params,
            field,
        })
    }

    pub fn engine_options(&self) -> EngineOptions {
        EngineOptions {
            orbit_reduction: self.orbit_reduction,
            threads: self.threads,
            keep_orbits: false,
            dense_guard: self.dense_guard,
            zgen_max_t: self.zgen_max_t,
        }
    }
}
