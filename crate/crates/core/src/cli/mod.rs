//! The `kosz` command line: flag parsing, dispatch and rendering.
//!
//! Exit status is 0 on success, 1 when a verification finds a violation and
//! 2 on usage or engine errors.

pub mod cache;
pub mod config;
pub mod render;

use std::fmt::Write;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::combinatorics::ExponentVec;
use crate::cycles::{random_nonzero_cycle, verify_factorial_theorem, FactorialSampling, RandomCycleKind};
use crate::error::Result;
use crate::homology::{on_vanishing_frontier, GlIndex, HomologyEngine};

use cache::RankCache;
pub use config::{Cli, Command, Format, GlobalArgs, RunConfig, VerifyCommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Rendered output and exit status of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, status: EXIT_OK }
    }

    fn verdict(output: String, passed: bool) -> Self {
        Outcome {
            output,
            status: if passed { EXIT_OK } else { EXIT_VIOLATION },
        }
    }
}

/// Build the engine for a configuration, opening the rank cache if one is set.
pub fn build_engine(config: &RunConfig) -> Result<HomologyEngine> {
    let engine = HomologyEngine::with_options(config.params, config.field.clone(), config.engine_options());
    Ok(match &config.cache_dir {
        Some(dir) => {
            let cache = RankCache::open(dir)?;
            if cache.skipped_lines() > 0 {
                log::warn!("rank cache: skipped {} unreadable lines", cache.skipped_lines());
            }
            engine.with_cache(Arc::new(cache))
        }
        None => engine,
    })
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let config = RunConfig::from_args(&cli.global)?;
    let engine = build_engine(&config)?;
    let start = Instant::now();
    let (outcome, query, result) = dispatch(&config, &engine, &cli.command)?;
    log::info!(
        "eliminations: {}, multi-prime disagreements: {}",
        engine.eliminations(),
        engine.disagreements()
    );
    let output = match config.format {
        Format::Json => render::envelope(&config, query, result, start.elapsed().as_millis()),
        _ => outcome.output,
    };
    Ok(Outcome {
        output,
        status: outcome.status,
    })
}

fn default_top(config: &RunConfig, value: Option<usize>) -> usize {
    value.unwrap_or(config.params.top_degree())
}

fn default_offset(config: &RunConfig, value: Option<u32>) -> u32 {
    value.unwrap_or(config.n as u32 * (config.c - 1) + 1)
}

fn dispatch(config: &RunConfig, engine: &HomologyEngine, command: &Command) -> Result<(Outcome, Value, Value)> {
    let c = config.c;
    match command {
        Command::Homology { t, deg } => {
            let h = engine.homology_dim(*t, *deg)?;
            let text = match config.format {
                Format::Csv => format!("t,d,dim\n{},{},{}\n", h.t, h.d, h.dim),
                _ => render::homology_dim_text(&h, c),
            };
            Ok((
                Outcome::ok(text),
                json!({ "command": "homology", "t": t, "deg": deg }),
                render::homology_dim_json(&h),
            ))
        }
        Command::Table { tmax, offset } => {
            let tmax = default_top(config, *tmax);
            let offset = default_offset(config, *offset);
            let table = engine.homology_window(tmax, offset)?;
            let text = match config.format {
                Format::Csv => render::homology_csv(&table),
                _ => render::homology_diagram(&table),
            };
            Ok((
                Outcome::ok(text),
                json!({ "command": "table", "tmax": tmax, "offset": offset }),
                render::homology_records(&table),
            ))
        }
        Command::Betti { k, imax } => {
            let imax = default_top(config, *imax);
            let table = engine.betti_table(*k, imax)?;
            let text = match config.format {
                Format::Csv => render::betti_csv(&table),
                _ => render::betti_diagram(&table),
            };
            Ok((
                Outcome::ok(text),
                json!({ "command": "betti", "k": k, "imax": imax }),
                render::betti_records(&table),
            ))
        }
        Command::Index { imax } => {
            let imax = default_top(config, *imax);
            let index = engine.gl_index(imax)?;
            let (text, result) = match &index {
                GlIndex::Exact { value, witness, i_max } => (
                    format!(
                        "ind = {value} (certified up to i_max = {i_max})\nwitness: beta_{{{},{}}} = {}\n",
                        witness.0, witness.1, witness.2
                    ),
                    json!({ "index": value, "exact": true, "i_max": i_max,
                            "witness": { "i": witness.0, "j": witness.1, "beta": witness.2 } }),
                ),
                GlIndex::AtLeast { i_max } => (
                    format!("ind >= {i_max} (certified up to i_max = {i_max})\n"),
                    json!({ "index": i_max, "exact": false, "i_max": i_max }),
                ),
            };
            Ok((Outcome::ok(text), json!({ "command": "index", "imax": imax }), result))
        }
        Command::Verify(v) => verify(config, engine, v),
        Command::Chardep { tmax, dmin, dmax } => {
            let report = engine.chardep_scan(*tmax, *dmin, *dmax)?;
            let primes: Vec<String> = report.primes.iter().map(|p| p.to_string()).collect();
            let mut text = format!(
                "primes: {}\nblocks scanned: {}, skipped by guard: {}\n",
                if primes.is_empty() { "none".to_string() } else { primes.join(", ") },
                report.blocks_scanned,
                report.blocks_skipped
            );
            for u in &report.unfactored {
                let _ = writeln!(text, "unfactored cofactor: {u}");
            }
            Ok((
                Outcome::ok(text),
                json!({ "command": "chardep", "tmax": tmax, "dmin": dmin, "dmax": dmax }),
                serde_json::to_value(&report).expect("report serializes"),
            ))
        }
    }
}

fn verify(config: &RunConfig, engine: &HomologyEngine, command: &VerifyCommand) -> Result<(Outcome, Value, Value)> {
    let params = config.params;
    let c = config.c;
    match command {
        VerifyCommand::Duality { tmax, offset } => {
            let tmax = default_top(config, *tmax);
            let offset = default_offset(config, *offset);
            let table = engine.homology_window(tmax, offset)?;
            let report = engine.check_duality(&table)?;
            let mut text = if report.ok() {
                format!("OK ({} entries checked)\n", report.checked)
            } else {
                format!("FAIL ({} of {} entries)\n", report.mismatches.len(), report.checked)
            };
            for m in &report.mismatches {
                let _ = writeln!(
                    text,
                    "  H at (t={}, d={}) = {} but partner {:?} = {}",
                    m.entry.0, m.entry.1, m.dim, m.partner, m.partner_dim
                );
            }
            Ok((
                Outcome::verdict(text, report.ok()),
                json!({ "command": "verify duality", "tmax": tmax, "offset": offset }),
                serde_json::to_value(&report).expect("report serializes"),
            ))
        }
        VerifyCommand::Vanishing { tmax } => {
            let tmax = default_top(config, *tmax);
            let p = config.field.characteristic();
            let reach = config.n as u32 * (c - 1) + 1;
            let mut cells = Vec::new();
            for t in 0..=tmax {
                let t32 = t as u32;
                let lo = if on_vanishing_frontier(&params, p, t, t32 + c - 1) { t32 + c - 1 } else { t32 + c };
                for j in lo..=reach.max(t32 + c + 1) {
                    cells.push((t, t32 * c + j));
                }
            }
            let mut violations = Vec::new();
            for &(t, d) in &cells {
                let dim = engine.homology_dim(t, d)?.dim;
                if dim != 0 {
                    violations.push(json!({ "t": t, "d": d, "dim": dim }));
                }
            }
            let ok = violations.is_empty();
            let mut text = if ok {
                format!("OK ({} entries checked)\n", cells.len())
            } else {
                format!("FAIL ({} nonzero of {} entries)\n", violations.len(), cells.len())
            };
            for v in &violations {
                let _ = writeln!(text, "  {v}");
            }
            Ok((
                Outcome::verdict(text, ok),
                json!({ "command": "verify vanishing", "tmax": tmax }),
                json!({ "checked": cells.len(), "violations": violations }),
            ))
        }
        VerifyCommand::Factorial { samples, stratum } => {
            let sampling = match stratum {
                Some(alpha) => FactorialSampling::Stratum {
                    alpha: ExponentVec::new(alpha.clone()),
                },
                None => FactorialSampling::Random { samples: *samples },
            };
            let report = verify_factorial_theorem(engine.complex(), &sampling, config.seed, &config.field)?;
            let mut text = if report.is_violation() {
                format!("FAIL ({} of {} generators)\n", report.failures.len(), report.checked)
            } else {
                format!("OK ({} generators checked)\n", report.checked)
            };
            if report.small_characteristic {
                let _ = writeln!(
                    text,
                    "findings: characteristic {} <= c + 1; {} generators f with f not a boundary",
                    config.field.characteristic(),
                    report.non_boundary.len()
                );
                for w in report.non_boundary.iter().take(5) {
                    let _ = writeln!(
                        text,
                        "  b = {:?}, relations {:?}",
                        w.b_last,
                        w.factors.iter().map(|f| (f.b.coords().to_vec(), f.i, f.j)).collect::<Vec<_>>()
                    );
                }
            }
            for w in &report.failures {
                let _ = writeln!(text, "  witness multidegree {:?}, {} terms", w.multidegree, w.terms.len());
            }
            Ok((
                Outcome::verdict(text, !report.is_violation()),
                json!({ "command": "verify factorial", "samples": samples, "stratum": stratum }),
                serde_json::to_value(&report).expect("report serializes"),
            ))
        }
        VerifyCommand::Coeffdim { samples, max_t } => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let kinds = [RandomCycleKind::Z1, RandomCycleKind::Special, RandomCycleKind::Wedge];
            let mut failures = Vec::new();
            for s in 0..*samples {
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let z = random_nonzero_cycle(params, kind, *max_t, &mut rng)?;
                let dim = z.coefficient_space_dim()?;
                if dim < z.degree() + 1 {
                    failures.push(json!({ "sample": s, "t": z.degree(), "dim": dim, "terms": z.term_records() }));
                }
            }
            let ok = failures.is_empty();
            let text = if ok {
                format!("OK ({samples} cycles checked)\n")
            } else {
                format!("FAIL ({} of {samples} cycles)\n", failures.len())
            };
            Ok((
                Outcome::verdict(text, ok),
                json!({ "command": "verify coeffdim", "samples": samples, "max_t": max_t }),
                json!({ "checked": samples, "failures": failures }),
            ))
        }
        VerifyCommand::Greenbound { k, imax } => {
            let imax = default_top(config, *imax);
            let ks: Vec<u32> = match k {
                Some(k) => vec![*k],
                None => (0..c).collect(),
            };
            let mut text = String::new();
            let mut reports = Vec::new();
            let mut ok = true;
            for k in ks {
                let table = engine.betti_table(k, imax)?;
                let report = engine.check_green_bound(&table);
                ok &= report.ok();
                let _ = writeln!(
                    text,
                    "k = {k}: {} ({} rows checked)",
                    if report.ok() { "OK" } else { "FAIL" },
                    report.lines.len()
                );
                for l in report.violations() {
                    let _ = writeln!(text, "  i = {}: t_i = {} violates c t_i < {}", l.i, l.t_i, l.bound_numerator);
                }
                reports.push(report);
            }
            Ok((
                Outcome::verdict(text, ok),
                json!({ "command": "verify greenbound", "k": k, "imax": imax }),
                serde_json::to_value(&reports).expect("report serializes"),
            ))
        }
        VerifyCommand::Zgen { t } => {
            let profile = engine.z_generator_profile(*t)?;
            let above = profile.generators_above_top();
            let ok = above == 0 && profile.top_layer_spanned_by_z1_power;
            let mut text = format!("{} (t = {}, top degree {})\n", if ok { "OK" } else { "FAIL" }, t, profile.top_degree);
            for (d, g) in profile.generators.iter().filter(|(_, &g)| g > 0) {
                let _ = writeln!(text, "  degree {d}: {g} generators");
            }
            let _ = writeln!(
                text,
                "generators above top degree (checked through {}): {above}",
                profile.checked_through
            );
            let _ = writeln!(
                text,
                "top layer spanned by Z_1^t: {}",
                if profile.top_layer_spanned_by_z1_power { "yes" } else { "no" }
            );
            let generators: Vec<Value> = profile
                .generators
                .iter()
                .map(|(d, g)| json!({ "d": d, "generators": g }))
                .collect();
            Ok((
                Outcome::verdict(text, ok),
                json!({ "command": "verify zgen", "t": t }),
                json!({ "t": t, "top_degree": profile.top_degree, "checked_through": profile.checked_through,
                        "generators": generators, "top_layer_spanned": profile.top_layer_spanned_by_z1_power }),
            ))
        }
    }
}
