use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::linalg::{hermitian_eig, tensor_vec, CMatrix, CVector};
use super::state::{entropy_of_spectrum, DensityMatrix};
use super::QuantumError;
use crate::classical::in_typical_window;

/// Largest `n log2 d` for enumerated projections.
pub const MAX_TYPICAL_BITS: f64 = 22.0;

/// Spectral data of the site state. Eigenvalues of `rho^{(x) n}` are indexed
/// by strings over `0..d` (first site most significant), eigenvalue index 0
/// being the largest site eigenvalue.
#[derive(Debug, Clone)]
pub struct SiteSpectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
    /// `S(rho_site)`, the mean entropy of the product chain.
    pub s: f64,
}

impl SiteSpectrum {
    pub fn of(rho: &DensityMatrix) -> Self {
        let e = hermitian_eig(rho.matrix()).expect("density matrices are Hermitian");
        let values: Vec<f64> = e.values.into_iter().map(|x| x.max(0.0)).collect();
        SiteSpectrum { s: entropy_of_spectrum(&values), values, vectors: e.vectors }
    }

    pub fn d(&self) -> usize {
        self.values.len()
    }

    pub fn digits(&self, mut idx: u64, n: usize) -> Vec<usize> {
        let d = self.d() as u64;
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = (idx % d) as usize;
            idx /= d;
        }
        out
    }

    /// `log2` of the eigenvalue for an index string, summed site by site.
    pub fn log2_eigenvalue(&self, idx: &[usize]) -> f64 {
        idx.iter().map(|k| self.values[*k].log2()).sum()
    }

    /// `|r_{i_0}> (x) ... (x) |r_{i_{n-1}}>`.
    pub fn eigenvector(&self, idx: &[usize]) -> CVector {
        idx.iter()
            .fold(CVector::from_element(1, 1.0.into()), |acc, k| tensor_vec(&acc, &self.vectors.column(*k).into_owned()))
    }
}

fn check_size(d: usize, n: usize) -> Result<(), QuantumError> {
    if n as f64 * (d as f64).log2() > MAX_TYPICAL_BITS + 1e-9 {
        return Err(QuantumError::TooLarge(format!("{d}^{n} eigenvalues exceeds 2^22")));
    }
    Ok(())
}

/// Index strings (as base-`d` integers) with eigenvalue in the window
/// `2^{-n(s+eps)} <= lambda <= 2^{-n(s-eps)}`.
pub fn typical_indices(site: &SiteSpectrum, n: usize, eps: f64) -> Result<Vec<u64>, QuantumError> {
    check_size(site.d(), n)?;
    let total = (site.d() as u64).pow(n as u32);
    Ok((0..total)
        .filter(|i| in_typical_window(site.log2_eigenvalue(&site.digits(*i, n)), n, site.s, eps))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypicalProjectionReport {
    pub n: usize,
    pub eps: f64,
    pub s: f64,
    /// Site eigenvalues, descending; index strings refer to this order.
    pub site_eigenvalues: Vec<f64>,
    /// `Tr p_n(eps)`.
    pub rank: usize,
    /// `omega(p_n(eps)) = Tr(rho^(n) p_n(eps))`.
    pub weight: f64,
    /// The index set `A_eps` as base-`d` integers.
    pub members: Vec<u64>,
    /// Eigenvalue of each member, same order.
    pub eigenvalues: Vec<f64>,
    pub items: QaepItems,
    /// First `n` from which item 1 holds up to the scan horizon.
    pub onset: Onset,
    /// Whether `n >= N_eps`, so that items 1-3 are required to hold.
    pub required: bool,
}

/// The three finite-`n` statements of the quantum Shannon-McMillan theorem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QaepItems {
    /// `omega(p) >= 1 - eps`.
    pub item1: bool,
    /// `(1 - eps) 2^{-n(s+eps)} < lambda < 2^{-n(s-eps)}` for every member.
    pub item2: bool,
    /// `2^{n(s-eps)} < Tr p < 2^{n(s+eps)}`.
    pub item3: bool,
    pub log2_rank: f64,
    pub log2_min_eigenvalue: f64,
    pub log2_max_eigenvalue: f64,
}

impl QaepItems {
    pub fn all(&self) -> bool {
        self.item1 && self.item2 && self.item3
    }
}

fn qaep_items(n: usize, eps: f64, s: f64, weight: f64, log2_rank: f64, lo: f64, hi: f64) -> QaepItems {
    let nf = n as f64;
    QaepItems {
        item1: weight >= 1.0 - eps,
        item2: log2_rank == f64::NEG_INFINITY
            || ((1.0 - eps).log2() - nf * (s + eps) < lo && hi < -nf * (s - eps)),
        item3: nf * (s - eps) < log2_rank && log2_rank < nf * (s + eps),
        log2_rank,
        log2_min_eigenvalue: lo,
        log2_max_eigenvalue: hi,
    }
}

/// The projection onto the eigenvectors of `rho_site^{(x) n}` whose
/// eigenvalues lie in the typical window, with the theorem's items checked.
/// `N_eps` comes from a type-class scan up to `horizon`.
pub fn typical_projection(
    rho_site: &DensityMatrix,
    n: usize,
    eps: f64,
    horizon: usize,
) -> Result<TypicalProjectionReport, QuantumError> {
    if !(eps > 0.0) {
        return Err(QuantumError::Argument(format!("eps must be positive, got {eps}")));
    }
    let site = SiteSpectrum::of(rho_site);
    let members = typical_indices(&site, n, eps)?;
    let logs: Vec<f64> = members.iter().map(|i| site.log2_eigenvalue(&site.digits(*i, n))).collect();
    let eigenvalues: Vec<f64> = logs.iter().map(|l| l.exp2()).collect();
    let weight = eigenvalues.iter().sum();
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let items = qaep_items(n, eps, site.s, weight, (members.len() as f64).log2(), lo, hi);
    let onset = typical_onset(&site, eps, n.max(1), horizon.max(n));
    let required = onset.n_eps.is_some_and(|m| n >= m);
    Ok(TypicalProjectionReport {
        n,
        eps,
        s: site.s,
        site_eigenvalues: site.values.clone(),
        rank: members.len(),
        weight,
        members,
        eigenvalues,
        items,
        onset,
        required,
    })
}

/// Groups of equal site eigenvalues with their multiplicities.
fn distinct_values(site: &SiteSpectrum) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for v in &site.values {
        match out.last_mut() {
            Some((w, m)) if w == v => *m += 1,
            _ => out.push((*v, 1)),
        }
    }
    out
}

/// One eigenvalue class of `rho^{(x) n}`: every string whose count of each
/// distinct site eigenvalue is `counts`.
pub(crate) struct EigenClass {
    pub log2_value: f64,
    pub size: BigUint,
    /// `ln` of the class weight `size * value`.
    pub ln_weight: f64,
}

pub(crate) fn eigen_classes(site: &SiteSpectrum, n: usize, mut f: impl FnMut(&EigenClass)) {
    let distinct = distinct_values(site);
    let mut lf = vec![0.0f64; n + 1];
    for k in 1..=n {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    let parts = distinct.len();
    let mut counts = vec![0usize; parts];
    fn rec(
        left: usize,
        k: usize,
        counts: &mut Vec<usize>,
        distinct: &[(f64, usize)],
        n: usize,
        lf: &[f64],
        f: &mut dyn FnMut(&EigenClass),
    ) {
        if k + 1 == counts.len() {
            counts[k] = left;
            let log2_value: f64 = counts
                .iter()
                .zip(distinct)
                .map(|(c, (v, _))| if *c == 0 { 0.0 } else { *c as f64 * v.log2() })
                .sum();
            let mut size = crate::classical::multinomial(n, counts);
            let mut ln_size = lf[n];
            for (c, (_, m)) in counts.iter().zip(distinct) {
                size *= BigUint::from(*m).pow(*c as u32);
                ln_size += *c as f64 * (*m as f64).ln() - lf[*c];
            }
            f(&EigenClass { log2_value, size, ln_weight: ln_size + log2_value * std::f64::consts::LN_2 });
            return;
        }
        for c in 0..=left {
            counts[k] = c;
            rec(left - c, k + 1, counts, distinct, n, lf, f);
        }
    }
    rec(n, 0, &mut counts, &distinct, n, &lf, &mut f);
}

pub(crate) fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let shift = x.bits().saturating_sub(60);
    (x >> shift).to_f64().expect("fits").log2() + shift as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OnsetRow {
    pub n: usize,
    pub weight: f64,
    pub items: QaepItems,
}

/// `N_eps` found by scanning `n` in `from..=horizon` over eigenvalue classes:
/// the least `n` such that item 1 holds at every scanned `m >= n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Onset {
    pub from: usize,
    pub horizon: usize,
    pub n_eps: Option<usize>,
    /// Whether items 2 and 3 also held at every scanned `n >= N_eps`.
    pub items_hold_after: bool,
    /// Rows from `N_eps` (or the horizon) on are elided; only those up to
    /// and including `N_eps` are kept.
    pub rows: Vec<OnsetRow>,
}

pub fn typical_onset(site: &SiteSpectrum, eps: f64, from: usize, horizon: usize) -> Onset {
    let rows: Vec<OnsetRow> = (from..=horizon)
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
            OnsetRow { n, weight, items: qaep_items(n, eps, site.s, weight, log2_big(&rank), lo, hi) }
        })
        .collect();
    let start = rows.iter().rposition(|r| !r.items.item1).map_or(0, |k| k + 1);
    let n_eps = rows.get(start).map(|r| r.n);
    let items_hold_after = n_eps.is_some() && rows[start..].iter().all(|r| r.items.item2 && r.items.item3);
    let keep = (start + 1).min(rows.len());
    Onset { from, horizon, n_eps, items_hold_after, rows: rows[..keep].to_vec() }
}

/// Dense projection onto the span of the given member eigenvectors.
pub fn projection_matrix(site: &SiteSpectrum, n: usize, members: &[u64]) -> CMatrix {
    let dim = site.d().pow(n as u32);
    let mut p = CMatrix::zeros(dim, dim);
    for i in members {
        let v = site.eigenvector(&site.digits(*i, n));
        p += &v * v.adjoint();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_site_takes_everything() {
        let r = typical_projection(&DensityMatrix::maximally_mixed(2), 6, 0.1, 40).unwrap();
        assert_eq!(r.rank, 64);
        assert!((r.weight - 1.0).abs() < 1e-12);
        assert_eq!(r.onset.n_eps, Some(6));
    }

    #[test]
    fn pure_site_single_eigenvalue() {
        let r = typical_projection(&DensityMatrix::from_diag(&[1.0, 0.0]).unwrap(), 5, 0.1, 20).unwrap();
        assert_eq!(r.s, 0.0);
        assert_eq!(r.rank, 1);
        assert_eq!(r.weight, 1.0);
    }

    #[test]
    fn classes_cover_the_spectrum() {
        let site = SiteSpectrum::of(&DensityMatrix::from_diag(&[0.5, 0.25, 0.25]).unwrap());
        let mut total = 0.0;
        let mut count = BigUint::zero();
        eigen_classes(&site, 7, |c| {
            total += c.ln_weight.exp();
            count += &c.size;
        });
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(count, BigUint::from(3u32.pow(7)));
    }
}
