use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::ensemble::{apply_each_site, build_mu_hat, Component, Ensemble, Extra};
use super::linalg::CVector;
use super::state::{gaussian_c, DensityMatrix};
use super::typical::{eigen_classes, log2_big, typical_indices, SiteSpectrum};
use super::QuantumError;
use crate::classical::{delta, delta_normalizer, in_typical_window, word_bits};
use crate::codec::BitString;
use crate::complexity::{EnumerationCache, SemiMeasureEstimate};
use crate::rng;

/// Site eigenvalues at or below this count as zero when testing faithfulness.
pub const FAITHFUL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumBrudnoConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub eps: f64,
    pub seed: u64,
    /// Haar-random minimal projections drawn per `n`, on top of the two
    /// extreme eigenvectors.
    pub samples: usize,
    /// Constant of the literal-program floor used for strings the
    /// semi-measure snapshot does not cover.
    pub c_lit: u32,
    /// Last `n` of the onset scan.
    pub horizon: usize,
}

/// Where the chain's semi-measure on eigen-index strings comes from.
pub struct Inputs<'a> {
    pub snapshot: &'a SemiMeasureEstimate,
    /// Cache whose decoded outputs join the ensemble.
    pub cache: Option<&'a EnumerationCache>,
}

/// The items of the quantum Brudno theorem at one `n`, with the proof's
/// explicit constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrudnoItems {
    /// `omega(p_n(eps)) >= 1 - 3 eps / 2`.
    pub item1: bool,
    /// `omega(p_n(eps)) > 1 - eps`, as stated.
    pub item1_stated: bool,
    /// `2^{-n(s+eps)} <= omega(p) <= 2^{-n(s-eps)}` for every checked minimal
    /// projection.
    pub item2: bool,
    /// The same with the factor `(1 - eps)` on the lower end.
    pub item2_qaep: bool,
    /// `(1 - 2^{-n eps}) 2^{n(s-eps) + alpha_n} < Tr p_n(eps) < 2^{n(s+eps)}`.
    pub item3: bool,
}

impl BrudnoItems {
    pub fn all(&self) -> bool {
        self.item1 && self.item2_qaep && self.item3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrudnoQuantumRow {
    pub n: usize,
    /// `#A_eps`.
    pub typical: usize,
    /// `#(A_eps \ B_eps)`.
    pub excluded: usize,
    /// `Tr p_n(eps) = #(A_eps & B_eps)`.
    pub rank: usize,
    pub weight: f64,
    /// `max(0, log2 #B^c - n(s - 2 eps))`.
    pub alpha: f64,
    pub items: BrudnoItems,
    /// `n >= N_eps`.
    pub required: bool,
    /// `omega(p)` for the largest-eigenvalue eigenvector, the smallest, then
    /// the random draws.
    pub sample_weights: Vec<f64>,
    /// `-(1/n) log2 Tr(M p)` for the same projections.
    pub rates: Vec<f64>,
    pub rate_min: f64,
    pub rate_max: f64,
    pub rate_mean: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrudnoOnsetRow {
    pub n: usize,
    pub weight: f64,
    pub log2_rank: f64,
    pub alpha: f64,
    pub items: BrudnoItems,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumBrudnoReport {
    pub config: QuantumBrudnoConfig,
    pub site_eigenvalues: Vec<f64>,
    pub s: f64,
    /// First `n` (from `n_min`) where item 1 holds through the horizon.
    pub n_eps: Option<usize>,
    /// Items 1-3 at every scanned `n >= N_eps`.
    pub scan_items_hold: bool,
    /// Scan rows up to and including `N_eps`.
    pub scan: Vec<BrudnoOnsetRow>,
    pub rows: Vec<BrudnoQuantumRow>,
    /// Every required row passes items 1-3.
    pub rows_pass: bool,
}

fn bits_per_symbol(d: usize) -> usize {
    (usize::BITS - (d.max(2) - 1).leading_zeros()) as usize
}

/// Decodes a snapshot string as an eigen-index string of length `n`.
fn as_index_string(x: &BitString, d: usize, n: usize) -> Option<Vec<usize>> {
    let w = bits_per_symbol(d);
    if x.len() != n * w {
        return None;
    }
    x.bits()
        .chunks(w)
        .map(|c| {
            let v = c.iter().fold(0usize, |a, b| 2 * a + *b as usize);
            (v < d).then_some(v)
        })
        .collect()
}

/// The index strings of length `n` outside `B_eps`: snapshot strings whose
/// mass reaches `2^{-n(s - 2 eps)}`. Errors if the literal floor itself reaches it, which would
/// put every uncovered string outside `B`.
fn complement_b(
    site: &SiteSpectrum,
    snapshot: &SemiMeasureEstimate,
    c_lit: u32,
    n: usize,
    eps: f64,
) -> Result<Vec<Vec<usize>>, QuantumError> {
    let d = site.d();
    let log2_threshold = -(n as f64) * (site.s - 2.0 * eps);
    let floor = SemiMeasureEstimate::literal_floor(n * bits_per_symbol(d), c_lit);
    if floor.log2() >= log2_threshold {
        return Err(QuantumError::Argument(format!(
            "literal floor reaches the B threshold at n = {n}; raise c_lit"
        )));
    }
    Ok(snapshot
        .mass
        .iter()
        .filter(|(_, m)| m.log2() >= log2_threshold)
        .filter_map(|(x, _)| as_index_string(x, d, n))
        .collect())
}

fn alpha(count: usize, n: usize, s: f64, eps: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        ((count as f64).log2() - n as f64 * (s - 2.0 * eps)).max(0.0)
    }
}

fn items(n: usize, s: f64, eps: f64, weight: f64, log2_rank: f64, alpha: f64, lo: f64, hi: f64) -> BrudnoItems {
    let nf = n as f64;
    let low = -nf * (s + eps);
    let high = -nf * (s - eps);
    let empty = log2_rank == f64::NEG_INFINITY;
    let lower3 = (1.0 - (-nf * eps).exp2()).log2() + nf * (s - eps) + alpha;
    BrudnoItems {
        item1: weight >= 1.0 - 1.5 * eps,
        item1_stated: weight > 1.0 - eps,
        item2: empty || (low <= lo && hi <= high),
        item2_qaep: empty || ((1.0 - eps).log2() + low <= lo && hi <= high),
        item3: lower3 < log2_rank && log2_rank < nf * (s + eps),
    }
}

fn onset_scan(
    site: &SiteSpectrum,
    inputs: &Inputs<'_>,
    cfg: &QuantumBrudnoConfig,
) -> Result<(Option<usize>, bool, Vec<BrudnoOnsetRow>), QuantumError> {
    let eps = cfg.eps;
    let rows: Vec<BrudnoOnsetRow> = (cfg.n_min..=cfg.horizon)
        .into_par_iter()
        .map(|n| {
            let mut weight = 0.0;
            let mut rank = BigUint::zero();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            eigen_classes(site, n, |c| {
                if in_typical_window(c.log2_value, n, site.s, eps) {
                    weight += c.ln_weight.exp();
                    rank += &c.size;
                    lo = lo.min(c.log2_value);
                    hi = hi.max(c.log2_value);
                }
            });
            let bc = complement_b(site, inputs.snapshot, cfg.c_lit, n, eps)?;
            for idx in &bc {
                let l = site.log2_eigenvalue(idx);
                if in_typical_window(l, n, site.s, eps) {
                    weight -= l.exp2();
                    rank -= 1u32;
                }
            }
            let a = alpha(bc.len(), n, site.s, eps);
            let log2_rank = log2_big(&rank);
            Ok(BrudnoOnsetRow { n, weight, log2_rank, alpha: a, items: items(n, site.s, eps, weight, log2_rank, a, lo, hi) })
        })
        .collect::<Result<_, QuantumError>>()?;
    let start = rows.iter().rposition(|r| !r.items.item1).map_or(0, |k| k + 1);
    let n_eps = rows.get(start).map(|r| r.n);
    let hold = n_eps.is_some() && rows[start..].iter().all(|r| r.items.all());
    let keep = (start + 1).min(rows.len());
    Ok((n_eps, hold, rows[..keep].to_vec()))
}

/// The ensemble used for item 4 at length `n`: `1/D`, the cache's decoded
/// matrices, and the chain's own `delta(n) rho^(n) / sum delta`.
pub fn brudno_ensemble(
    rho_site: &DensityMatrix,
    n: usize,
    cache: Option<&EnumerationCache>,
) -> Result<Ensemble, QuantumError> {
    let dim = rho_site.dim().pow(n as u32);
    let mut extra = Vec::new();
    if n >= 2 {
        extra.push(Extra {
            name: format!("eta-{n}"),
            component: Component::Product { site: rho_site.matrix().clone(), n },
            scale: delta(n) / delta_normalizer(),
        });
    }
    build_mu_hat(dim, cache, extra)
}

fn row(
    rho_site: &DensityMatrix,
    site: &SiteSpectrum,
    inputs: &Inputs<'_>,
    cfg: &QuantumBrudnoConfig,
    n: usize,
    n_eps: Option<usize>,
) -> Result<BrudnoQuantumRow, QuantumError> {
    let d = site.d();
    let eps = cfg.eps;
    let a = typical_indices(site, n, eps)?;
    let threshold = -(n as f64) * (site.s - 2.0 * eps);
    let bc = complement_b(site, inputs.snapshot, cfg.c_lit, n, eps)?;
    let (kept, excluded): (Vec<u64>, Vec<u64>) = a.iter().partition(|i| {
        let idx = site.digits(**i, n);
        inputs.snapshot.mass_or_floor(&word_bits(&idx, d), cfg.c_lit).log2() < threshold
    });
    let logs: Vec<f64> = kept.iter().map(|i| site.log2_eigenvalue(&site.digits(*i, n))).collect();
    let weight: f64 = logs.iter().map(|l| l.exp2()).sum();
    let alpha_n = alpha(bc.len(), n, site.s, eps);

    let m = brudno_ensemble(rho_site, n, inputs.cache)?;
    let dim = d.pow(n as u32);
    let to_site_basis = |coeffs: &CVector| apply_each_site(&site.vectors, coeffs, n);

    // minimal projections: the two extreme eigenvectors, then Haar draws in
    // the range of p_n(eps)
    let mut vectors: Vec<(CVector, f64)> = Vec::new();
    if !kept.is_empty() {
        let (imax, imin) = extreme_positions(&logs);
        for k in [imax, imin] {
            let mut v = CVector::zeros(dim);
            v[kept[k] as usize] = 1.0.into();
            vectors.push((v, logs[k].exp2()));
        }
        let mut r = rng::stream(cfg.seed, n as u64);
        for _ in 0..cfg.samples {
            let mut v = CVector::zeros(dim);
            for i in &kept {
                v[*i as usize] = gaussian_c(&mut r);
            }
            let norm = v.norm();
            v.unscale_mut(norm);
            let w: f64 = kept.iter().zip(&logs).map(|(i, l)| v[*i as usize].norm_sqr() * l.exp2()).sum();
            vectors.push((v, w));
        }
    }
    let sample_weights: Vec<f64> = vectors.iter().map(|(_, w)| *w).collect();
    let rates: Vec<f64> =
        vectors.iter().map(|(v, _)| -m.expectation(&to_site_basis(v)).log2() / n as f64).collect();
    let log2_w: Vec<f64> = sample_weights.iter().map(|w| w.log2()).collect();
    let lo = log2_w.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = log2_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log2_rank = (kept.len() as f64).log2();
    let its = items(n, site.s, eps, weight, log2_rank, alpha_n, lo, hi);
    let rate_min = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let rate_max = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rate_mean = if rates.is_empty() { f64::NAN } else { rates.iter().sum::<f64>() / rates.len() as f64 };
    Ok(BrudnoQuantumRow {
        n,
        typical: a.len(),
        excluded: excluded.len(),
        rank: kept.len(),
        weight,
        alpha: alpha_n,
        items: its,
        required: n_eps.is_some_and(|e| n >= e),
        sample_weights,
        rates,
        rate_min,
        rate_max,
        rate_mean,
        s: site.s,
    })
}

fn extreme_positions(logs: &[f64]) -> (usize, usize) {
    let mut imax = 0;
    let mut imin = 0;
    for (k, l) in logs.iter().enumerate() {
        if *l > logs[imax] {
            imax = k;
        }
        if *l < logs[imin] {
            imin = k;
        }
    }
    (imax, imin)
}

/// Builds `p_n(eps)` from `A_eps & B_eps` for every `n` in range, checks the
/// theorem's items, and reports `-(1/n) log2 Tr(M p)` over minimal
/// projections `p <= p_n(eps)`.
pub fn quantum_brudno_experiment(
    rho_site: &DensityMatrix,
    inputs: &Inputs<'_>,
    cfg: &QuantumBrudnoConfig,
) -> Result<QuantumBrudnoReport, QuantumError> {
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(QuantumError::Argument("need 1 <= n_min <= n_max".into()));
    }
    if !(cfg.eps > 0.0) {
        return Err(QuantumError::Argument(format!("eps must be positive, got {}", cfg.eps)));
    }
    let site = SiteSpectrum::of(rho_site);
    if site.values.iter().any(|v| *v <= FAITHFUL_TOL) {
        return Err(QuantumError::NotFaithful);
    }
    let horizon = cfg.horizon.max(cfg.n_max);
    let scan_cfg = QuantumBrudnoConfig { horizon, ..cfg.clone() };
    let (n_eps, scan_items_hold, scan) = onset_scan(&site, inputs, &scan_cfg)?;
    let rows: Vec<BrudnoQuantumRow> = (cfg.n_min..=cfg.n_max)
        .into_par_iter()
        .map(|n| row(rho_site, &site, inputs, cfg, n, n_eps))
        .collect::<Result<_, _>>()?;
    let rows_pass = rows.iter().all(|r| !r.required || r.items.all());
    Ok(QuantumBrudnoReport {
        config: cfg.clone(),
        site_eigenvalues: site.values.clone(),
        s: site.s,
        n_eps,
        scan_items_hold,
        scan,
        rows,
        rows_pass,
    })
}

/// Members of `A_eps & B_eps` as base-`d` integers.
pub(crate) fn kept_indices(
    site: &SiteSpectrum,
    snapshot: &SemiMeasureEstimate,
    c_lit: u32,
    n: usize,
    eps: f64,
) -> Result<Vec<u64>, QuantumError> {
    let threshold = -(n as f64) * (site.s - 2.0 * eps);
    Ok(typical_indices(site, n, eps)?
        .into_iter()
        .filter(|i| snapshot.mass_or_floor(&word_bits(&site.digits(*i, n), site.d()), c_lit).log2() < threshold)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::{Dyadic, Round};
    use std::collections::BTreeMap;

    fn empty_snapshot() -> SemiMeasureEstimate {
        SemiMeasureEstimate { mass: BTreeMap::new(), total: Dyadic::zero(), budget: Round::new(0, 0) }
    }

    fn cfg(n_min: usize, n_max: usize, eps: f64) -> QuantumBrudnoConfig {
        QuantumBrudnoConfig { n_min, n_max, eps, seed: 7, samples: 4, c_lit: 8, horizon: 64 }
    }

    #[test]
    fn flat_site_minimal_projections() {
        let snap = empty_snapshot();
        let inputs = Inputs { snapshot: &snap, cache: None };
        let r = quantum_brudno_experiment(&DensityMatrix::maximally_mixed(2), &inputs, &cfg(2, 6, 0.1)).unwrap();
        for row in &r.rows {
            for w in &row.sample_weights {
                assert!((w - (-(row.n as f64)).exp2()).abs() < 1e-15);
            }
            assert!(row.items.item2);
        }
    }

    #[test]
    fn rejects_non_faithful() {
        let snap = empty_snapshot();
        let inputs = Inputs { snapshot: &snap, cache: None };
        let rho = DensityMatrix::from_diag(&[1.0, 0.0]).unwrap();
        assert!(matches!(quantum_brudno_experiment(&rho, &inputs, &cfg(2, 3, 0.1)), Err(QuantumError::NotFaithful)));
    }
}
