use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::charpoly::is_positive_exact;
use super::linalg::{hermitian_eig, tensor_power, trace, CMatrix, CVector, C64};
use super::state::SemiDensityMatrix;
use super::QuantumError;
use crate::codec::{matrix_decode, matrix_encode, str_encode, BitString, ElementaryMatrix, Nat, Rational};
use crate::complexity::{EnumerationCache, SemiMeasureEstimate};

/// Largest dimension for which the ensemble is materialized densely.
pub const MAX_DENSE_DIM: usize = 4096;

/// A semi-density matrix in a form cheap to evaluate against vectors.
#[derive(Debug, Clone)]
pub enum Component {
    /// `1 / D`.
    MaximallyMixed,
    /// A `d x d` block in the top-left corner, zero elsewhere.
    Embedded(CMatrix),
    /// `site^{(x) n}`.
    Product { site: CMatrix, n: usize },
    /// `sum_x m_x |x><x|`, sparse.
    Diagonal(Vec<(usize, f64)>),
    Dense(CMatrix),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum Provenance {
    BuiltIn { name: String },
    /// Decoded from the output of this cached program.
    Enumerated { program: BitString },
    Extra { name: String },
}

#[derive(Debug, Clone)]
pub struct WeightedComponent {
    /// Weight `2^{-k}`.
    pub k: u32,
    /// The component is `scale * component`; `scale <= 1` keeps it a
    /// semi-density matrix.
    pub scale: f64,
    pub component: Component,
    pub provenance: Provenance,
}

impl WeightedComponent {
    pub fn weight(&self) -> f64 {
        (-(self.k as f64)).exp2()
    }
}

/// `M = sum_k 2^{-k} mu_k`, a desk-scale stand-in for the universal
/// semi-density matrix on a `D`-dimensional space.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub dim: usize,
    pub components: Vec<WeightedComponent>,
}

fn quad(m: &CMatrix, v: &[C64]) -> C64 {
    let d = m.nrows();
    let mut acc = C64::zero();
    for i in 0..d {
        let mut row = C64::zero();
        for j in 0..d {
            row += m[(i, j)] * v[j];
        }
        acc += v[i].conj() * row;
    }
    acc
}

/// Applies `a` to every tensor factor of a vector on `(C^d)^{(x) n}`.
pub fn apply_each_site(a: &CMatrix, v: &CVector, n: usize) -> CVector {
    let d = a.nrows();
    let mut cur = v.clone();
    for s in 0..n {
        let inner = d.pow((n - 1 - s) as u32);
        let outer = d.pow(s as u32);
        let mut next = CVector::zeros(cur.len());
        for o in 0..outer {
            for i in 0..inner {
                for r in 0..d {
                    let mut acc = C64::zero();
                    for c in 0..d {
                        acc += a[(r, c)] * cur[(o * d + c) * inner + i];
                    }
                    next[(o * d + r) * inner + i] = acc;
                }
            }
        }
        cur = next;
    }
    cur
}

impl Component {
    pub fn to_dense(&self, dim: usize) -> CMatrix {
        match self {
            Component::MaximallyMixed => CMatrix::identity(dim, dim).unscale(dim as f64),
            Component::Embedded(m) => {
                let mut out = CMatrix::zeros(dim, dim);
                out.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
                out
            }
            Component::Product { site, n } => tensor_power(site, *n),
            Component::Diagonal(entries) => {
                let mut out = CMatrix::zeros(dim, dim);
                for (x, m) in entries {
                    out[(*x, *x)] = C64::new(*m, 0.0);
                }
                out
            }
            Component::Dense(m) => m.clone(),
        }
    }

    /// `<psi| C |psi>` for a unit vector.
    pub fn expectation(&self, psi: &CVector) -> f64 {
        match self {
            Component::MaximallyMixed => psi.norm_squared() / psi.len() as f64,
            Component::Embedded(m) => quad(m, &psi.as_slice()[..m.nrows()]).re,
            Component::Product { site, n } => psi.dotc(&apply_each_site(site, psi, *n)).re,
            Component::Diagonal(entries) => entries.iter().map(|(x, m)| m * psi[*x].norm_sqr()).sum(),
            Component::Dense(m) => psi.dotc(&(m * psi)).re,
        }
    }

    /// `Tr(rho C)`.
    pub fn trace_with(&self, rho: &CMatrix) -> f64 {
        let dim = rho.nrows();
        match self {
            Component::MaximallyMixed => trace(rho).re / dim as f64,
            Component::Embedded(m) => {
                let d = m.nrows();
                let mut acc = C64::zero();
                for i in 0..d {
                    for j in 0..d {
                        acc += rho[(i, j)] * m[(j, i)];
                    }
                }
                acc.re
            }
            Component::Diagonal(entries) => entries.iter().map(|(x, m)| m * rho[(*x, *x)].re).sum(),
            Component::Product { .. } | Component::Dense(_) => {
                let c = self.to_dense(dim);
                rho.iter().zip(c.transpose().iter()).map(|(a, b)| a * b).sum::<C64>().re
            }
        }
    }

    pub fn trace(&self, dim: usize) -> f64 {
        match self {
            Component::MaximallyMixed => 1.0,
            Component::Embedded(m) | Component::Dense(m) => trace(m).re,
            Component::Product { site, n } => trace(site).re.powi(*n as i32),
            Component::Diagonal(entries) => entries.iter().filter(|(x, _)| *x < dim).map(|(_, m)| m).sum(),
        }
    }

    /// The diagonal `sum_x m(x) |x><x|` of a semi-measure snapshot, basis
    /// state `x` being `str_encode(x)`; strings past the dimension are dropped.
    pub fn from_semi_measure(snapshot: &SemiMeasureEstimate, dim: usize) -> Component {
        let entries = snapshot
            .mass
            .iter()
            .filter_map(|(x, m)| {
                let idx = str_encode(x).to_usize()?;
                (idx < dim && !m.is_zero()).then(|| (idx, m.to_f64()))
            })
            .collect();
        Component::Diagonal(entries)
    }
}

impl Ensemble {
    pub fn trace(&self) -> f64 {
        self.components.iter().map(|c| c.weight() * c.scale * c.component.trace(self.dim)).sum()
    }

    /// `<psi| M |psi>`.
    pub fn expectation(&self, psi: &CVector) -> f64 {
        self.components.iter().map(|c| c.weight() * c.scale * c.component.expectation(psi)).sum()
    }

    /// `Tr(rho M)`.
    pub fn trace_with(&self, rho: &CMatrix) -> f64 {
        self.components.iter().map(|c| c.weight() * c.scale * c.component.trace_with(rho)).sum()
    }

    /// `2^{-k} mu_k` as a dense matrix.
    pub fn weighted_dense(&self, idx: usize) -> CMatrix {
        let c = &self.components[idx];
        c.component.to_dense(self.dim).scale(c.weight() * c.scale)
    }

    pub fn to_dense(&self) -> Result<CMatrix, QuantumError> {
        if self.dim > MAX_DENSE_DIM {
            return Err(QuantumError::TooLarge(format!("dense ensemble of dimension {}", self.dim)));
        }
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for k in 0..self.components.len() {
            m += self.weighted_dense(k);
        }
        Ok(m)
    }

    /// Every component conjugated by `u`: `mu_k -> U mu_k U^dagger`.
    pub fn conjugate(&self, u: &CMatrix) -> Ensemble {
        let components = self
            .components
            .iter()
            .map(|c| WeightedComponent {
                component: Component::Dense(u * c.component.to_dense(self.dim) * u.adjoint()),
                ..c.clone()
            })
            .collect();
        Ensemble { dim: self.dim, components }
    }

    /// Smallest eigenvalue of `M - 2^{-k} mu_k` for each component.
    pub fn domination_margins(&self) -> Result<Vec<f64>, QuantumError> {
        let m = self.to_dense()?;
        (0..self.components.len())
            .map(|k| {
                let diff = &m - self.weighted_dense(k);
                Ok(hermitian_eig(&diff)?.values.last().copied().unwrap_or(0.0))
            })
            .collect()
    }

    /// Trace of each partial sum `M_j = sum_{k <= j} 2^{-k} mu_k`.
    pub fn partial_traces(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.components
            .iter()
            .map(|c| {
                acc += c.weight() * c.scale * c.component.trace(self.dim);
                acc
            })
            .collect()
    }

    /// Appends a component with the next weight.
    pub fn push(&mut self, component: Component, scale: f64, provenance: Provenance) {
        let k = self.components.last().map_or(1, |c| c.k + 1);
        self.components.push(WeightedComponent { k, scale, component, provenance });
    }
}

/// An extra component: `scale * matrix` must be a semi-density matrix.
#[derive(Debug, Clone)]
pub struct Extra {
    pub name: String,
    pub component: Component,
    pub scale: f64,
}

impl Extra {
    pub fn dense(name: &str, m: SemiDensityMatrix) -> Self {
        Extra { name: name.into(), component: Component::Dense(m.matrix().clone()), scale: 1.0 }
    }
}

/// Whether an elementary matrix is a usable component in dimension `dim`:
/// Hermitian, positive, nonzero, trace at most 1 (all exact) and `d <= dim`.
pub fn admissible(m: &ElementaryMatrix, dim: usize) -> bool {
    if m.dim > dim || m.entries.iter().all(|c| c.is_zero()) || !m.is_hermitian() {
        return false;
    }
    let t = m.trace().re;
    let one = Rational::from_integer(1.into());
    !t.is_negative() && t <= one && is_positive_exact(m)
}

/// Builds `M` on dimension `dim`: first `1/D` with weight 1/2, then every
/// admissible matrix decoded from the cache outputs in enumeration order
/// (duplicates once), then the extras.
pub fn build_mu_hat(dim: usize, cache: Option<&EnumerationCache>, extra: Vec<Extra>) -> Result<Ensemble, QuantumError> {
    if dim == 0 {
        return Err(QuantumError::Dimension("dimension must be positive".into()));
    }
    let mut ens = Ensemble { dim, components: Vec::new() };
    ens.push(Component::MaximallyMixed, 1.0, Provenance::BuiltIn { name: "maximally-mixed".into() });
    if let Some(cache) = cache {
        let mut seen: BTreeSet<Nat> = BTreeSet::new();
        for r in &cache.records {
            let Some(m) = matrix_decode(&str_encode(&r.output)) else { continue };
            if !admissible(&m, dim) || !seen.insert(matrix_encode(&m)) {
                continue;
            }
            let block = CMatrix::from_row_slice(m.dim, m.dim, &m.to_f64());
            ens.push(Component::Embedded(block), 1.0, Provenance::Enumerated { program: r.program.clone() });
        }
    }
    for e in extra {
        let t = e.scale * e.component.trace(dim);
        if !(0.0..=1.0 + 1e-10).contains(&t) {
            return Err(QuantumError::Trace(t));
        }
        if let Component::Dense(m) | Component::Embedded(m) = &e.component {
            SemiDensityMatrix::new(m.scale(e.scale))?;
        }
        ens.push(e.component, e.scale, Provenance::Extra { name: e.name });
    }
    Ok(ens)
}
