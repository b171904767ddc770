use serde::Serialize;

use super::linalg::{frobenius, hermitian_eig, tensor, trace, CMatrix, C64};
use super::state::{entropy_of_spectrum, vn_entropy, DensityMatrix, EIG_TOL};
use super::QuantumError;

pub const OPU_TOL: f64 = 1e-10;

/// Largest refined-state block the dense routines will build.
pub const MAX_BLOCK: usize = 4096;

/// `n log2 |Z|` limit for the AF sequence; 4-element OPUs stop at `n = 9`.
pub const MAX_AF_BITS: f64 = 18.0;

/// An operational partition of unity: `sum Z_i^dagger Z_i = 1`.
#[derive(Debug, Clone)]
pub struct Opu {
    ops: Vec<CMatrix>,
}

/// Operator-norm distance of `sum Z^dagger Z` from the identity.
fn opu_defect(ops: &[CMatrix]) -> Result<f64, QuantumError> {
    let d = ops.first().ok_or_else(|| QuantumError::Opu("empty family".into()))?.nrows();
    if ops.iter().any(|z| z.nrows() != d || z.ncols() != d) {
        return Err(QuantumError::Opu("operators must all be square of one size".into()));
    }
    let mut s = CMatrix::zeros(d, d);
    for z in ops {
        s += z.adjoint() * z;
    }
    s -= CMatrix::identity(d, d);
    let e = hermitian_eig(&((&s + s.adjoint()).scale(0.5)))?;
    Ok(e.values.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

/// Checks the partition-of-unity identity to [`OPU_TOL`].
pub fn opu_validate(ops: &[CMatrix]) -> bool {
    opu_defect(ops).is_ok_and(|e| e <= OPU_TOL)
}

impl Opu {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let e = opu_defect(&ops)?;
        if e > OPU_TOL {
            return Err(QuantumError::Opu(format!("sum Z^dagger Z differs from 1 by {e:.3e}")));
        }
        Ok(Opu { ops })
    }

    /// `{U_ij / sqrt(d)}`, the `d^2` scaled matrix units, index `i d + j`.
    pub fn matrix_units(d: usize) -> Self {
        let s = 1.0 / (d as f64).sqrt();
        let ops = (0..d * d)
            .map(|k| {
                let mut m = CMatrix::zeros(d, d);
                m[(k / d, k % d)] = C64::new(s, 0.0);
                m
            })
            .collect();
        Opu { ops }
    }

    pub fn identity(d: usize) -> Self {
        Opu { ops: vec![CMatrix::identity(d, d)] }
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn site_dim(&self) -> usize {
        self.ops[0].nrows()
    }
}

/// The `n`-step refinement `Z_{i_0} (x) ... (x) Z_{i_{n-1}}`: the shift puts
/// the `k`-th factor on site `k`, and operators on distinct sites commute, so
/// the product of shifted operators is this tensor product. Elements are
/// indexed by `i_0 ... i_{n-1}` in base `|Z|`, first site most significant.
#[derive(Debug, Clone)]
pub struct RefinedOpu {
    site: Opu,
    n: usize,
}

pub fn opu_refine(z: &Opu, n: usize) -> RefinedOpu {
    RefinedOpu { site: z.clone(), n }
}

impl RefinedOpu {
    pub fn site(&self) -> &Opu {
        &self.site
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.site.len().pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let k = self.site.len();
        let mut out = vec![0; self.n];
        for slot in out.iter_mut().rev() {
            *slot = idx % k;
            idx /= k;
        }
        out
    }

    pub fn element(&self, idx: usize) -> CMatrix {
        self.digits(idx)
            .iter()
            .fold(CMatrix::identity(1, 1), |acc, i| tensor(&acc, &self.site.ops[*i]))
    }

    /// Dense elements; for checks at small `n`.
    pub fn to_opu(&self) -> Result<Opu, QuantumError> {
        Opu::new((0..self.len()).map(|i| self.element(i)).collect())
    }
}

/// `rho[Z]` stored as the blocks of its block-diagonal form.
///
/// `Tr(rho Z_j^dagger Z_i)` factorizes over sites for a refined OPU, and it
/// vanishes whenever some site pair has `Z_{j_k}^dagger Z_{i_k} = 0`. Grouping
/// site indices into connected classes of that relation splits the matrix
/// into blocks, one per class string; the matrix-unit OPU has `d^n` blocks of
/// size `d^n`.
#[derive(Debug, Clone)]
pub struct OpuState {
    pub n: usize,
    pub size: usize,
    pub blocks: Vec<OpuBlock>,
}

#[derive(Debug, Clone)]
pub struct OpuBlock {
    /// Refined indices covered by this block, ascending.
    pub indices: Vec<usize>,
    pub matrix: CMatrix,
}

impl OpuState {
    pub fn eigenvalues(&self) -> Result<Vec<f64>, QuantumError> {
        let mut out = Vec::with_capacity(self.size);
        for b in &self.blocks {
            out.extend(hermitian_eig(&b.matrix)?.values);
        }
        out.sort_by(|a, b| b.total_cmp(a));
        if let Some(min) = out.last() {
            if *min < -EIG_TOL {
                return Err(QuantumError::NotPositive(*min));
            }
        }
        Ok(out.into_iter().map(|x| x.max(0.0)).collect())
    }

    pub fn entropy(&self) -> Result<f64, QuantumError> {
        Ok(entropy_of_spectrum(&self.eigenvalues()?))
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(|b| trace(&b.matrix).re).sum()
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.size, self.size);
        for b in &self.blocks {
            for (a, i) in b.indices.iter().enumerate() {
                for (c, j) in b.indices.iter().enumerate() {
                    m[(*i, *j)] = b.matrix[(a, c)];
                }
            }
        }
        m
    }
}

struct SiteProducts {
    /// `nz[j][i]`: nonzero entries `(r, c, v)` of `Z_j^dagger Z_i`.
    nz: Vec<Vec<Vec<(usize, usize, C64)>>>,
    /// Connected class of each site index.
    class: Vec<usize>,
    classes: usize,
}

fn site_products(z: &Opu) -> SiteProducts {
    let k = z.len();
    let mut nz = vec![vec![Vec::new(); k]; k];
    for j in 0..k {
        for i in 0..k {
            let p = z.ops[j].adjoint() * &z.ops[i];
            for r in 0..p.nrows() {
                for c in 0..p.ncols() {
                    if p[(r, c)] != C64::new(0.0, 0.0) {
                        nz[j][i].push((r, c, p[(r, c)]));
                    }
                }
            }
        }
    }
    // union-find over i ~ j when Z_j^dagger Z_i != 0
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for j in 0..k {
        for i in 0..k {
            if !nz[j][i].is_empty() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; k];
    let mut classes = 0;
    let mut class = vec![0; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = classes;
            classes += 1;
        }
        class[i] = label[r];
    }
    SiteProducts { nz, class, classes }
}

/// `rho[Z^(n)]_{i,j} = Tr(rho^(n) Z_j^dagger Z_i)` for a refined OPU.
pub fn opu_state(z: &RefinedOpu, rho_n: &DensityMatrix) -> Result<OpuState, QuantumError> {
    let d = z.site.site_dim();
    let n = z.n;
    let want = d.checked_pow(n as u32).ok_or_else(|| QuantumError::TooLarge("site dimension power".into()))?;
    if rho_n.dim() != want {
        return Err(QuantumError::Dimension(format!("state has dimension {}, expected {d}^{n}", rho_n.dim())));
    }
    let k = z.site.len();
    let size = k.checked_pow(n as u32).ok_or_else(|| QuantumError::TooLarge("refined OPU size".into()))?;
    let sp = site_products(&z.site);

    // group refined indices by their class string
    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for idx in 0..size {
        let key: Vec<usize> = z.digits(idx).iter().map(|i| sp.class[*i]).collect();
        groups.entry(key).or_default().push(idx);
    }
    debug_assert!(groups.len() <= sp.classes.pow(n as u32));
    if let Some(big) = groups.values().map(Vec::len).max() {
        if big > MAX_BLOCK {
            return Err(QuantumError::TooLarge(format!("refined state block of size {big} exceeds {MAX_BLOCK}")));
        }
    }

    let rho = rho_n.matrix();
    let place: Vec<usize> = (0..n).map(|s| d.pow((n - 1 - s) as u32)).collect();
    let mut blocks = Vec::with_capacity(groups.len());
    for (_, indices) in groups {
        let digits: Vec<Vec<usize>> = indices.iter().map(|i| z.digits(*i)).collect();
        let m = indices.len();
        let mut mat = CMatrix::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                // Tr(rho (x)_s P_s) with P_s = Z_{j_s}^dagger Z_{i_s}, i = a, j = b
                let factors: Vec<&Vec<(usize, usize, C64)>> =
                    (0..n).map(|s| &sp.nz[digits[b][s]][digits[a][s]]).collect();
                mat[(a, b)] = contract(rho, &factors, &place);
            }
        }
        blocks.push(OpuBlock { indices, matrix: mat });
    }
    let out = OpuState { n, size, blocks };
    let t = out.trace();
    if (t - 1.0).abs() > 1e-8 {
        return Err(QuantumError::Trace(t));
    }
    Ok(out)
}

/// `Tr(rho A)` for `A` the tensor product of sparse site factors:
/// `sum rho[a][b] A[b][a]` where entry `(r, c)` of factor `s` fixes digit `s`
/// of `b` to `r` and of `a` to `c`.
fn contract(rho: &CMatrix, factors: &[&Vec<(usize, usize, C64)>], place: &[usize]) -> C64 {
    fn rec(
        rho: &CMatrix,
        factors: &[&Vec<(usize, usize, C64)>],
        place: &[usize],
        s: usize,
        a: usize,
        b: usize,
        w: C64,
    ) -> C64 {
        if s == factors.len() {
            return rho[(a, b)] * w;
        }
        let mut acc = C64::new(0.0, 0.0);
        for (r, c, v) in factors[s] {
            acc += rec(rho, factors, place, s + 1, a + c * place[s], b + r * place[s], w * v);
        }
        acc
    }
    if factors.iter().any(|f| f.is_empty()) {
        return C64::new(0.0, 0.0);
    }
    rec(rho, factors, place, 0, 0, 0, C64::new(1.0, 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AfRow {
    pub n: usize,
    /// `S(rho[Z^(n)])`.
    pub entropy: f64,
    /// `S(rho[Z^(n)]) / n`.
    pub rate: f64,
    /// `S(rho^(n))` of the chain state itself.
    pub state_entropy: f64,
}

/// Finite-`n` AF entropy rates of the product state `rho_site^{(x) n}` with
/// respect to `z`. No limit is taken.
pub fn af_entropy_estimate(rho_site: &DensityMatrix, z: &Opu, n_max: usize) -> Result<Vec<AfRow>, QuantumError> {
    if z.site_dim() != rho_site.dim() {
        return Err(QuantumError::Dimension("OPU and site state dimensions differ".into()));
    }
    let bits = (z.len() as f64).log2() * n_max as f64;
    if bits > MAX_AF_BITS + 1e-9 {
        return Err(QuantumError::TooLarge(format!("|Z|^{n_max} exceeds 2^{MAX_AF_BITS}")));
    }
    let s_site = vn_entropy(rho_site);
    let mut rows = Vec::with_capacity(n_max);
    let mut rho_n = DensityMatrix::maximally_mixed(1);
    for n in 1..=n_max {
        rho_n = rho_n.tensor(rho_site);
        let st = opu_state(&opu_refine(z, n), &rho_n)?;
        let entropy = st.entropy()?;
        rows.push(AfRow { n, entropy, rate: entropy / n as f64, state_entropy: n as f64 * s_site });
    }
    Ok(rows)
}

/// Dense `rho[Z]` straight from the definition, for cross-checks.
pub fn opu_state_dense(z: &Opu, rho: &DensityMatrix) -> CMatrix {
    let k = z.len();
    CMatrix::from_fn(k, k, |i, j| trace(&(rho.matrix() * z.ops[j].adjoint() * &z.ops[i])))
}

pub(crate) fn is_close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && frobenius(&(a - b)) <= tol
}
