//! Runs one prepared experiment config and assembles its report.

use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::json;

use super::config::{BackendKind, Experiment, ExperimentConfig, NRange, SourceRef};
use super::report::{Assertion, RateRow, RunReport};
use super::HarnessError;
use crate::classical::{brudno_experiment, ks_rate, typical_set, Backend, SourceModel};
use crate::complexity::{
    dovetail, landauer_cost, m_lower, monotonicity_violations, CacheIndex, Dyadic, EnumerationCache, Mode, Round,
    SemiMeasureEstimate, UniversalMachine,
};
use crate::quantum::io::{EnsembleSpec, MatrixFile};
use crate::quantum::{
    af_entropy_estimate, af_purification_check, build_mu_hat, composite_experiment, gacs_lower, opu_refine,
    quantum_brudno_experiment, typical_projection, vn_entropy, CompositeConfig, Component, DensityMatrix, Extra,
    Inputs, Opu, QuantumBrudnoConfig, SpectralEnsemble, GACS_TOL, MAX_UPPER_DIM,
};

/// Settings that do not change results and so stay out of the config.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub jobs: usize,
    /// Where caches without an explicit path live.
    pub cache_dir: PathBuf,
}

/// Tolerance of the AF identity for matrix-unit OPUs.
const AF_TOL: f64 = 1e-7;
/// Largest `c` for which the counting bound is listed.
const COUNTING_MAX_C: usize = 16;

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| HarnessError::Io { path: path.display().to_string(), source: err })?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|err| HarnessError::Config {
        field: format!("{}: {}", path.display(), err.path()),
        message: err.into_inner().to_string(),
    })
}

fn load_state(path: &Path) -> Result<DensityMatrix, HarnessError> {
    let f: MatrixFile = read_json(path)?;
    Ok(DensityMatrix::new(f.to_cmatrix()?)?)
}

fn load_source(r: &SourceRef) -> Result<SourceModel, HarnessError> {
    let s = match r {
        SourceRef::Inline(s) => s.clone(),
        SourceRef::Path(p) => read_json(p)?,
    };
    s.validate()?;
    Ok(s)
}

/// An OPU file: `{"ops": [matrix, ...]}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OpuFile {
    ops: Vec<MatrixFile>,
}

fn load_opu(spec: &str, d: usize) -> Result<Opu, HarnessError> {
    let opu = match spec {
        "matrix-units" => Opu::matrix_units(d),
        "identity" => Opu::identity(d),
        path => {
            let f: OpuFile = read_json(Path::new(path))?;
            let ops = f.ops.iter().map(MatrixFile::to_cmatrix).collect::<Result<Vec<_>, _>>()?;
            Opu::new(ops)?
        }
    };
    if opu.site_dim() != d {
        return Err(HarnessError::Usage(format!("OPU acts on dimension {}, the site has {d}", opu.site_dim())));
    }
    Ok(opu)
}

/// File name of the default cache for a mode and schedule.
pub fn cache_file_name(mode: Mode, schedule: &[Round]) -> String {
    let rounds: Vec<String> = schedule.iter().map(|r| format!("L{}-S{}", r.max_len, r.max_steps)).collect();
    format!("{mode}-{}.cache", rounds.join("_"))
}

fn save_cache(cache: &EnumerationCache, path: &Path) -> Result<(), HarnessError> {
    // write then rename, so a reader never sees half a cache
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    cache.save(&tmp)?;
    std::fs::rename(&tmp, path).map_err(|err| HarnessError::Io { path: path.display().to_string(), source: err })
}

/// The config's cache: loaded from its path, or from the cache directory,
/// or computed and stored there.
fn obtain_cache(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<EnumerationCache, HarnessError> {
    let mode = cfg.mode.unwrap_or(Mode::Prefix);
    let cache = if let Some(p) = &cfg.cache {
        EnumerationCache::load(p)?
    } else {
        let schedule = cfg.schedule.clone().unwrap_or_default();
        let path = ctx.cache_dir.join(cache_file_name(mode, &schedule));
        if path.is_file() {
            EnumerationCache::load(&path)?
        } else {
            let c = dovetail(&UniversalMachine::new(mode), &schedule, None, ctx.jobs)?;
            save_cache(&c, &path)?;
            c
        }
    };
    if cache.mode != mode {
        return Err(HarnessError::Usage(format!("cache is {} mode, {} needs {mode}", cache.mode, cfg.experiment.name())));
    }
    Ok(cache)
}

fn cache_summary(c: &EnumerationCache) -> serde_json::Value {
    json!({
        "mode": c.mode,
        "schedule": c.schedule,
        "records": c.records.len(),
        "content_hash": c.content_hash(),
    })
}

fn kraft_sum(c: &EnumerationCache) -> Dyadic {
    c.records.iter().fold(Dyadic::zero(), |acc, r| acc.add(&Dyadic::pow2_neg(r.program.len() as u64)))
}

/// `#{x : best program length < c}` for `c = 0..=max_c`, against `2^c`.
fn counting_table(c: &EnumerationCache, max_c: usize) -> (Vec<serde_json::Value>, bool) {
    let idx = CacheIndex::new(c);
    let lengths: Vec<usize> = idx.lengths().map(|(_, l)| l).collect();
    let mut ok = true;
    let rows = (0..=max_c)
        .map(|c| {
            let count = lengths.iter().filter(|l| **l < c).count() as u64;
            ok &= count < (1u64 << c);
            json!({"c": c, "count": count, "bound": 1u64 << c})
        })
        .collect();
    (rows, ok)
}

fn kx_search(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunReport, HarnessError> {
    let mode = cfg.mode.unwrap_or(Mode::Prefix);
    let schedule = cfg.schedule.clone().unwrap_or_default();
    let machine = UniversalMachine::new(mode);
    let mut cache = EnumerationCache::empty(mode);
    let mut rounds = Vec::new();
    let mut monotone = true;
    for (i, round) in schedule.iter().enumerate() {
        let next = dovetail(&machine, &[*round], Some(cache.clone()), ctx.jobs)?;
        let bad = monotonicity_violations(&cache, &next)?;
        monotone &= bad.is_empty();
        rounds.push(json!({
            "round": i,
            "max_len": round.max_len,
            "max_steps": round.max_steps,
            "records": next.records.len(),
            "violations": bad,
        }));
        cache = next;
    }
    let path = cfg.cache.clone().unwrap_or_else(|| ctx.cache_dir.join(cache_file_name(mode, &schedule)));
    save_cache(&cache, &path)?;

    let max_c = COUNTING_MAX_C.max(cache.budget().max_len);
    let (counting, counting_ok) = counting_table(&cache, max_c);
    let kraft = kraft_sum(&cache);
    let prefix_free = mode == Mode::Prefix && cache.is_prefix_free();
    let outputs = CacheIndex::new(&cache).lengths().count();
    let mut assertions = vec![
        Assertion::new("counting", counting_ok, format!("#{{x : best length < c}} < 2^c for c <= {max_c}")),
        Assertion::new("monotone", monotone, "no estimate grows and no mass shrinks from round to round"),
    ];
    if mode == Mode::Prefix {
        assertions.push(Assertion::new("kraft", kraft.at_most_one(), format!("sum of 2^-|p| = {kraft}")));
        assertions.push(Assertion::new("prefix-free", prefix_free, "no halting program extends another"));
    }
    let mut records = json!({
        "cache": cache_summary(&cache),
        "rounds": rounds,
        "distinct_outputs": outputs,
        "counting": counting,
    });
    if mode == Mode::Prefix {
        records["kraft_sum"] = json!(kraft.to_string());
        records["kraft_sum_f64"] = json!(kraft.to_f64());
        records["prefix_free"] = json!(prefix_free);
    }
    Ok(RunReport::new(cfg.clone(), records, assertions))
}

fn kx_kraft(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunReport, HarnessError> {
    let cache = obtain_cache(cfg, ctx)?;
    if cache.mode != Mode::Prefix {
        return Err(HarnessError::Usage("the Kraft sum needs a prefix-mode cache".into()));
    }
    let kraft = kraft_sum(&cache);
    let snapshot = m_lower(&cache)?;
    let masses: Vec<_> = snapshot
        .mass
        .iter()
        .map(|(x, m)| json!({"output": x, "mass": m.to_string(), "log2_mass": m.log2()}))
        .collect();
    let prefix_free = cache.is_prefix_free();
    let records = json!({
        "cache": cache_summary(&cache),
        "kraft_sum": kraft.to_string(),
        "kraft_sum_f64": kraft.to_f64(),
        "prefix_free": prefix_free,
        "masses": masses,
    });
    let assertions = vec![
        Assertion::new("kraft", kraft.at_most_one(), format!("sum of 2^-|p| = {kraft}")),
        Assertion::new("prefix-free", prefix_free, "no halting program extends another"),
    ];
    Ok(RunReport::new(cfg.clone(), records, assertions))
}

fn kx_estimate(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunReport, HarnessError> {
    let cache = obtain_cache(cfg, ctx)?;
    let target = cfg.target.clone().unwrap_or_default();
    let est = CacheIndex::new(&cache).estimate(&target);
    let c_lit = cfg.c_lit.unwrap_or(8);
    let l = target.len();
    let literal = l + 2 * (l.max(1) as f64).log2().ceil() as usize + c_lit as usize;
    let mut records = json!({
        "cache": cache_summary(&cache),
        "estimate": est,
        "literal_bound": literal,
    });
    if cache.mode == Mode::Prefix {
        let snap = m_lower(&cache)?;
        records["mass"] = json!(snap.mass.get(&target).map(|m| m.to_string()).unwrap_or_else(|| "0".into()));
        records["mass_or_floor"] = json!(snap.mass_or_floor(&target, c_lit));
    }
    Ok(RunReport::new(cfg.clone(), records, vec![]))
}

fn kx_landauer(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let bits = cfg.bits.unwrap_or(0.0);
    let temp = cfg.temp.unwrap_or(300.0);
    let joules = landauer_cost(bits, temp)?;
    Ok(RunReport::new(cfg.clone(), json!({"bits": bits, "kelvin": temp, "joules": joules}), vec![]))
}

fn cls_entropy(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let source = load_source(cfg.source.as_ref().expect("prepared"))?;
    let n = cfg.n.map_or(12, |r| r.max);
    let rep = ks_rate(&source, n)?;
    let non_increasing = rep.rows.windows(2).all(|w| w[1].rate <= w[0].rate + 1e-12);
    let mut assertions = vec![Assertion::new("rate-non-increasing", non_increasing, "H_n / n never grows with n")];
    if let SourceModel::Bernoulli { .. } = source {
        let gap = rep.rows.iter().map(|r| (r.rate - rep.analytic).abs()).fold(0.0, f64::max);
        assertions.push(Assertion::new("bernoulli-rate", gap <= 1e-9, format!("max |H_n/n - h| = {gap:e}")));
    }
    let table = rep
        .rows
        .iter()
        .map(|r| RateRow { n: r.n, trial: None, rate: r.rate, h: rep.analytic, backend: "exact".into() })
        .collect();
    let mut report = RunReport::new(cfg.clone(), serde_json::to_value(&rep)?, assertions);
    report.table = Some(table);
    Ok(report)
}

fn cls_typical(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let source = load_source(cfg.source.as_ref().expect("prepared"))?;
    let n = cfg.n.map_or(12, |r| r.max);
    let rep = typical_set(&source, n, cfg.eps.unwrap_or(0.1))?;
    // the lower bound is only owed once the set carries 1 - eps of the mass
    let upper = rep.log2_count <= rep.log2_count_upper;
    let lower = !rep.measure_at_least_1_minus_eps || rep.log2_count >= rep.log2_count_lower;
    let assertions = vec![
        Assertion::new("count-upper", upper, format!("log2 count {:.6} <= {:.6}", rep.log2_count, rep.log2_count_upper)),
        Assertion::new(
            "count-lower",
            lower,
            if rep.measure_at_least_1_minus_eps {
                format!("log2 count {:.6} >= {:.6}", rep.log2_count, rep.log2_count_lower)
            } else {
                format!("not owed: measure {:.6} < 1 - eps", rep.measure)
            },
        ),
    ];
    Ok(RunReport::new(cfg.clone(), serde_json::to_value(&rep)?, assertions))
}

fn cls_brudno(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunReport, HarnessError> {
    let source = load_source(cfg.source.as_ref().expect("prepared"))?;
    let n = cfg.n.map_or(10_000, |r| r.max);
    let tol = cfg.tol.unwrap_or(0.05);
    let cache;
    let backend = match cfg.backend.unwrap_or(BackendKind::Compressor) {
        BackendKind::Compressor => Backend::Compressor,
        BackendKind::SearchCache => {
            cache = obtain_cache(cfg, ctx)?;
            Backend::SearchCache { cache: &cache, c_lit: cfg.c_lit.unwrap_or(8) }
        }
    };
    let rep = brudno_experiment(&source, n, cfg.trials.unwrap_or(20), backend, cfg.seed.unwrap_or(0))?;
    let gap = (rep.mean - rep.h).abs();
    let assertions =
        vec![Assertion::new("mean-rate", gap <= tol, format!("|mean {:.6} - h {:.6}| = {gap:.6} <= {tol}", rep.mean, rep.h))];
    let table = rep
        .rows
        .iter()
        .map(|r| RateRow { n: r.n, trial: Some(r.trial), rate: r.rate, h: r.h, backend: r.backend.clone() })
        .collect();
    let mut report = RunReport::new(cfg.clone(), serde_json::to_value(&rep)?, assertions);
    report.table = Some(table);
    Ok(report)
}

fn site_state(cfg: &ExperimentConfig) -> Result<DensityMatrix, HarnessError> {
    load_state(cfg.state.as_deref().expect("prepared"))
}

fn qc_af(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let rho = site_state(cfg)?;
    let spec = cfg.opu.as_deref().unwrap_or("matrix-units");
    let opu = load_opu(spec, rho.dim())?;
    let NRange { min, max } = cfg.n.unwrap_or(NRange { min: 1, max: 6 });
    let rows: Vec<_> = af_entropy_estimate(&rho, &opu, max)?.into_iter().filter(|r| r.n >= min).collect();
    let s = vn_entropy(&rho);
    let log_d = (rho.dim() as f64).log2();
    let mut assertions = Vec::new();
    if spec == "matrix-units" {
        let gap = rows.iter().map(|r| (r.entropy - r.state_entropy - r.n as f64 * log_d).abs()).fold(0.0, f64::max);
        assertions.push(Assertion::new(
            "af-identity",
            gap <= AF_TOL,
            format!("max |S(rho[U^(n)]) - S(rho^(n)) - n log2 d| = {gap:e}"),
        ));
    }
    let h = if spec == "matrix-units" { s + log_d } else { s };
    let table = rows.iter().map(|r| RateRow { n: r.n, trial: None, rate: r.rate, h, backend: "opu".into() }).collect();
    let records = json!({"site_entropy": s, "opu": spec, "opu_size": opu.len(), "rows": rows});
    let mut report = RunReport::new(cfg.clone(), records, assertions);
    report.table = Some(table);
    Ok(report)
}

fn qc_purify(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let rho = site_state(cfg)?;
    let opu = load_opu(cfg.opu.as_deref().unwrap_or("matrix-units"), rho.dim())?;
    let NRange { min, max } = cfg.n.unwrap_or(NRange { min: 1, max: 3 });
    let rows = (min..=max)
        .map(|n| af_purification_check(&rho.tensor_power(n), &opu_refine(&opu, n)))
        .collect::<Result<Vec<_>, _>>()?;
    let gap = rows.iter().map(|r| r.spectrum_gap).fold(0.0, f64::max);
    let agree = rows.iter().all(|r| r.spectra_agree);
    let assertions = vec![Assertion::new("same-spectrum", agree, format!("largest spectrum gap {gap:e}"))];
    Ok(RunReport::new(cfg.clone(), json!({"rows": rows}), assertions))
}

fn qc_typical(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let rho = site_state(cfg)?;
    let n = cfg.n.map_or(12, |r| r.max);
    let rep = typical_projection(&rho, n, cfg.eps.unwrap_or(0.1), cfg.horizon.unwrap_or(256))?;
    let onset = &rep.onset;
    let mut assertions =
        vec![Assertion::new("onset-found", onset.n_eps.is_some(), format!("scanned n = {}..={}", onset.from, onset.horizon))];
    if let Some(n_eps) = onset.n_eps {
        assertions.push(Assertion::new(
            "items-from-onset",
            onset.items_hold_after,
            format!("items 1-3 at every scanned n >= {n_eps}"),
        ));
    }
    if rep.required {
        assertions.push(Assertion::new("items-at-n", rep.items.all(), format!("n = {n} >= N_eps")));
    }
    Ok(RunReport::new(cfg.clone(), serde_json::to_value(&rep)?, assertions))
}

fn load_ensemble(path: &Path) -> Result<(EnsembleSpec, Option<EnumerationCache>, Vec<Extra>), HarnessError> {
    let spec: EnsembleSpec = read_json(path)?;
    let cache = match &spec.cache {
        Some(p) => {
            let p = if p.is_absolute() { p.clone() } else { path.parent().unwrap_or(Path::new(".")).join(p) };
            Some(EnumerationCache::load(&p)?)
        }
        None => None,
    };
    let mut extras = Vec::new();
    for e in &spec.extra {
        let m = e.matrix.to_cmatrix()?;
        let scale = e.scale.to_rational()?.to_f64().unwrap_or(f64::NAN);
        let component = match m.nrows() {
            d if d == spec.dim => Component::Dense(m),
            d if d < spec.dim => Component::Embedded(m),
            d => {
                return Err(HarnessError::Usage(format!(
                    "extra {:?} has dimension {d}, larger than the ensemble's {}",
                    e.name, spec.dim
                )))
            }
        };
        extras.push(Extra { name: e.name.clone(), component, scale });
    }
    Ok((spec, cache, extras))
}

fn qc_gacs(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let rho = site_state(cfg)?;
    let (spec, cache, extras) = load_ensemble(cfg.ensemble.as_deref().expect("prepared"))?;
    if rho.dim() != spec.dim {
        return Err(HarnessError::Usage(format!("state has dimension {}, ensemble {}", rho.dim(), spec.dim)));
    }
    let ens = build_mu_hat(spec.dim, cache.as_ref(), extras)?;
    let lower = gacs_lower(&rho, &ens)?;
    let upper = if spec.dim <= MAX_UPPER_DIM { Some(SpectralEnsemble::new(&ens)?.upper(&rho)) } else { None };
    let margins = ens.domination_margins()?;
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let components: Vec<_> = ens
        .components
        .iter()
        .map(|c| json!({"k": c.k, "scale": c.scale, "trace": c.component.trace(spec.dim), "provenance": c.provenance}))
        .collect();
    let mut assertions = vec![Assertion::new(
        "domination",
        min_margin >= -1e-10,
        format!("smallest eigenvalue of M - 2^-k mu_k is {min_margin:e}"),
    )];
    if let Some(u) = upper {
        assertions.push(Assertion::new("lower-le-upper", lower <= u + GACS_TOL, format!("{lower} <= {u}")));
    }
    let records = json!({
        "dim": spec.dim,
        "cache": cache.as_ref().map(cache_summary),
        "components": components,
        "trace": ens.trace(),
        "lower": lower,
        "upper": upper,
        "state_entropy": vn_entropy(&rho),
        "domination_margins": margins,
    });
    Ok(RunReport::new(cfg.clone(), records, assertions))
}

fn snapshot(cache: &EnumerationCache) -> Result<SemiMeasureEstimate, HarnessError> {
    Ok(m_lower(cache)?)
}

fn qc_brudno(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunReport, HarnessError> {
    let rho = site_state(cfg)?;
    let cache = obtain_cache(cfg, ctx)?;
    let snap = snapshot(&cache)?;
    let NRange { min, max } = cfg.n.unwrap_or(NRange { min: 4, max: 12 });
    let eps = cfg.eps.unwrap_or(0.15);
    let qcfg = QuantumBrudnoConfig {
        n_min: min,
        n_max: max,
        eps,
        seed: cfg.seed.unwrap_or(0),
        samples: cfg.samples.unwrap_or(16),
        c_lit: cfg.c_lit.unwrap_or(8),
        horizon: cfg.horizon.unwrap_or(256),
    };
    let rep = quantum_brudno_experiment(&rho, &Inputs { snapshot: &snap, cache: Some(&cache) }, &qcfg)?;
    let window = 2.0 * eps + cfg.tol.unwrap_or(0.2);
    let mut assertions = vec![Assertion::new(
        "items-from-onset",
        rep.n_eps.is_some() && rep.scan_items_hold && rep.rows_pass,
        match rep.n_eps {
            Some(n) => format!("N_eps = {n}; items 1-3 at every n >= N_eps up to the horizon"),
            None => format!("no N_eps up to n = {}", qcfg.horizon),
        },
    )];
    if let Some(last) = rep.rows.last() {
        let ok = last.rate_min >= rep.s - window && last.rate_max <= rep.s + window;
        assertions.push(Assertion::new(
            "rate-window",
            ok,
            format!(
                "rates at n = {} in [{:.6}, {:.6}], s = {:.6} +- {window:.3}",
                last.n, last.rate_min, last.rate_max, rep.s
            ),
        ));
    }
    let mut table = Vec::new();
    for row in &rep.rows {
        for (t, rate) in row.rates.iter().enumerate() {
            table.push(RateRow { n: row.n, trial: Some(t), rate: *rate, h: rep.s, backend: "mu-hat".into() });
        }
    }
    let records = json!({"cache": cache_summary(&cache), "experiment": rep});
    let mut report = RunReport::new(cfg.clone(), records, assertions);
    report.table = Some(table);
    Ok(report)
}

fn qc_composite(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunReport, HarnessError> {
    let rho = site_state(cfg)?;
    let cache = obtain_cache(cfg, ctx)?;
    let snap = snapshot(&cache)?;
    let ccfg = CompositeConfig {
        n: cfg.n.map_or(3, |r| r.max),
        eps: cfg.eps.unwrap_or(0.15),
        seed: cfg.seed.unwrap_or(0),
        samples: cfg.samples.unwrap_or(4),
        c_lit: cfg.c_lit.unwrap_or(8),
    };
    let rep = composite_experiment(&rho, &Inputs { snapshot: &snap, cache: Some(&cache) }, &ccfg)?;
    let gap = rep.samples.iter().filter_map(|s| s.factor_gap).fold(0.0, f64::max);
    let mut assertions =
        vec![Assertion::new("product-factorizes", gap <= 1e-12, format!("largest product-vector gap {gap:e}"))];
    if let Some(ok) = rep.partial_trace_ok {
        assertions.push(Assertion::new("partial-trace", ok, "Tr_Y (M_X (x) M_Y) = M_X Tr M_Y"));
    }
    let records = json!({"cache": cache_summary(&cache), "experiment": rep});
    Ok(RunReport::new(cfg.clone(), records, assertions))
}

/// Runs a prepared config.
pub fn run_experiment(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunReport, HarnessError> {
    let start = std::time::Instant::now();
    let mut report = match cfg.experiment {
        Experiment::KxSearch => kx_search(cfg, ctx),
        Experiment::KxEstimate => kx_estimate(cfg, ctx),
        Experiment::KxKraft => kx_kraft(cfg, ctx),
        Experiment::KxLandauer => kx_landauer(cfg),
        Experiment::ClsEntropy => cls_entropy(cfg),
        Experiment::ClsTypical => cls_typical(cfg),
        Experiment::ClsBrudno => cls_brudno(cfg, ctx),
        Experiment::QcAf => qc_af(cfg),
        Experiment::QcPurify => qc_purify(cfg),
        Experiment::QcTypical => qc_typical(cfg),
        Experiment::QcGacs => qc_gacs(cfg),
        Experiment::QcBrudno => qc_brudno(cfg, ctx),
        Experiment::QcComposite => qc_composite(cfg, ctx),
    }?;
    if cfg.wall_time {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}
