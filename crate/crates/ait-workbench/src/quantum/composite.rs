use serde::Serialize;

use super::brudno::{brudno_ensemble, kept_indices, Inputs, FAITHFUL_TOL};
use super::ensemble::apply_each_site;
use super::linalg::{partial_trace, tensor, trace, CMatrix, CVector, C64};
use super::opu::is_close;
use super::state::{gaussian_c, DensityMatrix};
use super::typical::SiteSpectrum;
use super::QuantumError;
use crate::rng;

/// Largest single-factor dimension for the composite experiment.
pub const MAX_FACTOR_DIM: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositeConfig {
    /// Sites per factor.
    pub n: usize,
    pub eps: f64,
    pub seed: u64,
    /// Random draws of each kind.
    pub samples: usize,
    pub c_lit: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeSample {
    pub kind: String,
    /// `Tr((M_X (x) M_Y) sigma)`.
    pub value: f64,
    /// `omega(sigma)` under `rho^(n) (x) rho^(n)`.
    pub weight: f64,
    /// `-(1/(2n)) log2 value`.
    pub rate: f64,
    /// Which candidate the rate is nearer: `"s"` or `"2s"`.
    pub nearer: String,
    pub within_2eps: bool,
    /// For product vectors, `|value - <a|M_X|a><b|M_Y|b>|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeReport {
    pub n: usize,
    pub eps: f64,
    pub s: f64,
    pub rank: usize,
    pub samples: Vec<CompositeSample>,
    /// `Tr M_X Tr M_Y`, which is `Tr(M_X (x) M_Y)`.
    pub trace_product: f64,
    /// `Tr_Y (M_X (x) M_Y) = M_X Tr M_Y`, checked when the product is small.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial_trace_ok: Option<bool>,
    /// `|H(rho (x) rho) - 2 H(rho)|` for the lower complexity of the chain
    /// state against the product ensemble, computed densely when small.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub additivity_gap: Option<f64>,
}

/// `Tr(Psi^dagger A Psi B^T)`: `<Psi| A (x) B |Psi>` with `Psi` as a `D x D`
/// coefficient matrix.
fn bilinear(psi: &CMatrix, a: &CMatrix, b: &CMatrix) -> f64 {
    trace(&(psi.adjoint() * a * psi * b.transpose())).re
}

/// Runs the Brudno construction on two independent copies of the chain and
/// evaluates the product ensemble on product and entangled vectors in the
/// range of `p_n (x) p_n`.
pub fn composite_experiment(
    rho_site: &DensityMatrix,
    inputs: &Inputs<'_>,
    cfg: &CompositeConfig,
) -> Result<CompositeReport, QuantumError> {
    let CompositeConfig { n, eps, seed, samples, c_lit } = *cfg;
    let site = SiteSpectrum::of(rho_site);
    if site.values.iter().any(|v| *v <= FAITHFUL_TOL) {
        return Err(QuantumError::NotFaithful);
    }
    let dim = site.d().pow(n as u32);
    if dim > MAX_FACTOR_DIM {
        return Err(QuantumError::TooLarge(format!("factor dimension {dim} exceeds {MAX_FACTOR_DIM}")));
    }
    let kept = kept_indices(&site, inputs.snapshot, c_lit, n, eps)?;
    if kept.is_empty() {
        return Err(QuantumError::Argument("p_n(eps) is empty".into()));
    }
    let mx_ens = brudno_ensemble(rho_site, n, inputs.cache)?;
    let my_ens = brudno_ensemble(rho_site, n, inputs.cache)?;
    let (mx, my) = (mx_ens.to_dense()?, my_ens.to_dense()?);
    let rho_n = rho_site.tensor_power(n).into_matrix();

    // eigenvectors of rho^(n) for the kept indices, as columns
    let k = kept.len();
    let mut w = CMatrix::zeros(dim, k);
    for (col, i) in kept.iter().enumerate() {
        let mut e = CVector::zeros(dim);
        e[*i as usize] = 1.0.into();
        w.set_column(col, &apply_each_site(&site.vectors, &e, n));
    }
    let logs: Vec<f64> = kept.iter().map(|i| site.log2_eigenvalue(&site.digits(*i, n))).collect();
    let top = (0..k).max_by(|a, b| logs[*a].total_cmp(&logs[*b])).expect("nonempty");

    let mut r = rng::stream(seed, 0);
    let unit = |v: CVector| {
        let norm = v.norm();
        v.unscale(norm)
    };
    let mut coeffs: Vec<(String, CMatrix, Option<(CVector, CVector)>)> = Vec::new();
    let e_top = CVector::from_fn(k, |i, _| if i == top { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    coeffs.push(("product-top".into(), &e_top * e_top.transpose(), Some((e_top.clone(), e_top.clone()))));
    for _ in 0..samples {
        let a = unit(CVector::from_fn(k, |_, _| gaussian_c(&mut r)));
        let b = unit(CVector::from_fn(k, |_, _| gaussian_c(&mut r)));
        coeffs.push(("product-random".into(), &a * b.transpose(), Some((a, b))));
    }
    for _ in 0..samples {
        let c = CMatrix::from_fn(k, k, |_, _| gaussian_c(&mut r));
        let norm = c.norm();
        coeffs.push(("entangled-random".into(), c.unscale(norm), None));
    }
    coeffs.push(("maximally-entangled".into(), CMatrix::identity(k, k).unscale((k as f64).sqrt()), None));

    let s = site.s;
    let two_n = 2.0 * n as f64;
    let out: Vec<CompositeSample> = coeffs
        .into_iter()
        .map(|(kind, c, factors)| {
            let psi = &w * c * w.transpose();
            let value = bilinear(&psi, &mx, &my);
            let rate = -value.log2() / two_n;
            let factor_gap = factors.map(|(a, b)| {
                let (va, vb) = (&w * a, &w * b);
                let fx = va.dotc(&(&mx * &va)).re;
                let fy = vb.dotc(&(&my * &vb)).re;
                (value - fx * fy).abs()
            });
            CompositeSample {
                kind,
                value,
                weight: bilinear(&psi, &rho_n, &rho_n),
                rate,
                nearer: if (rate - s).abs() <= (rate - 2.0 * s).abs() { "s" } else { "2s" }.into(),
                within_2eps: (rate - s).abs() <= 2.0 * eps,
                factor_gap,
            }
        })
        .collect();

    let trace_product = trace(&mx).re * trace(&my).re;
    let small = dim * dim <= 1024;
    let joint = small.then(|| tensor(&mx, &my));
    let partial_trace_ok = joint.as_ref().map(|j| {
        let reduced = partial_trace(j, &[dim, dim], &[0]).expect("dimensions match");
        is_close(&reduced, &mx.scale(trace(&my).re), 1e-12)
    });
    let additivity_gap = joint.as_ref().map(|j| {
        let both = -trace(&(tensor(&rho_n, &rho_n) * j)).re.log2();
        let x = -mx_ens.trace_with(&rho_n).log2();
        let y = -my_ens.trace_with(&rho_n).log2();
        (both - x - y).abs()
    });
    Ok(CompositeReport {
        n,
        eps,
        s,
        rank: k,
        samples: out,
        trace_product,
        partial_trace_ok,
        additivity_gap,
    })
}
