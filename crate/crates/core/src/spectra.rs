//! Spectra of the colored adjacency matrices and the Ramanujan bound check.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use nalgebra::linalg::{Schur, SymmetricEigen};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{adjacency_matrix, AdjacencyMatrix, CayleyError, CayleyHypergraph};

pub const DEFAULT_DENSE_CUTOFF: usize = 5000;
/// Absolute slack on |λ| ≤ c_k.
pub const BOUND_TOL: f64 = 1e-8;
/// Relative tolerance (times n_k) when matching character eigenvalues.
pub const MATCH_TOL: f64 = 1e-6;
/// Relative residual target (times n_k) for iterative pairs.
pub const RESIDUAL_TOL: f64 = 1e-9;

pub const BOUND_NOTE: &str = "c_k = C(d,k) q^(k(d-k)/2); the alternative form C(d,k) q^((d-1)/2) agrees with it only at d = 2";

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error("{n} vertices exceed the dense cutoff {cutoff}; use the extremal solver")]
    DenseCutoff { n: usize, cutoff: usize },
    #[error("Schur iteration did not converge on a {0}x{0} matrix")]
    DenseFailed(usize),
    #[error("Lanczos did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error(
        "color {color}: character eigenvalue {value} has no computed eigenvalue within tolerance"
    )]
    UnmatchedCharacter { color: usize, value: String },
    #[error("color {color}: character vector is not an exact eigenvector at vertex {vertex}")]
    CharacterNotExact { color: usize, vertex: usize },
}

/// c_k = C(d,k)·q^{k(d−k)/2}.
pub fn ramanujan_bound(q: u64, d: usize, k: usize) -> f64 {
    assert!(1 <= k && k < d, "color {k} outside 1..{d}");
    let binom = (0..k).fold(1u64, |acc, i| acc * (d - i) as u64 / (i + 1) as u64);
    binom as f64 * (q as f64).powf((k * (d - k)) as f64 / 2.0)
}

/// Eigenvalue with optional residual ‖Av − λv‖.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
    pub residual: Option<f64>,
}

impl Eigenvalue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.value().norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DenseSymmetric,
    DenseGeneral,
    /// Lanczos on A (symmetric colors).
    Lanczos,
    /// Lanczos on A·Aᵀ; values are moduli only.
    LanczosNormal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub method: Method,
    pub values: Vec<Eigenvalue>,
}

/// All eigenvalues of a matrix with at most `cutoff` rows.
pub fn eigen_dense(a: &AdjacencyMatrix, cutoff: usize) -> Result<Spectrum, SpectraError> {
    let n = a.dim();
    if n > cutoff {
        return Err(SpectraError::DenseCutoff { n, cutoff });
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (i, r) in a.rows.iter().enumerate() {
        for &j in r {
            m[(i, j)] += 1.0;
        }
    }
    if a.is_symmetric() {
        let eig = SymmetricEigen::new(m);
        let mut values: Vec<Eigenvalue> = (0..n)
            .into_par_iter()
            .map(|i| {
                let v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
                let lambda = eig.eigenvalues[i];
                let av = a.matvec(&v);
                let res = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - lambda * y).powi(2))
                    .sum::<f64>()
                    .sqrt();
                Eigenvalue {
                    re: lambda,
                    im: 0.0,
                    residual: Some(res),
                }
            })
            .collect();
        values.sort_by(|x, y| y.re.total_cmp(&x.re));
        return Ok(Spectrum {
            method: Method::DenseSymmetric,
            values,
        });
    }
    let schur = match Schur::try_new(m.clone(), f64::EPSILON, 100 * n.max(10)) {
        Some(s) => s,
        None => {
            // QR stalls on permutation-like matrices; a well-conditioned
            // similarity breaks the symmetry
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let s = DMatrix::<f64>::identity(n, n)
                + DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.1..0.1) / n as f64);
            let s_inv = s
                .clone()
                .try_inverse()
                .ok_or(SpectraError::DenseFailed(n))?;
            Schur::try_new(&s * m * s_inv, f64::EPSILON, 100 * n.max(10))
                .ok_or(SpectraError::DenseFailed(n))?
        }
    };
    let mut values: Vec<Eigenvalue> = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| Eigenvalue {
            re: z.re,
            im: z.im,
            residual: None,
        })
        .collect();
    values.sort_by(|x, y| {
        y.modulus()
            .total_cmp(&x.modulus())
            .then(y.re.total_cmp(&x.re))
            .then(y.im.total_cmp(&x.im))
    });
    Ok(Spectrum {
        method: Method::DenseGeneral,
        values,
    })
}

/// Character vectors of the det-class subgroup actually met by the graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterSpace {
    /// Order h of the subgroup generated by the class of 1 − θ.
    pub order: usize,
    /// `eigenvalues[k-1][a]` = n_k·ω^{a·k} for character a, ω = e^{2πi/h}.
    pub eigenvalues: Vec<Vec<(f64, f64)>>,
    /// Largest floating residual ‖A v_χ − λ v_χ‖ over all colors and characters.
    pub max_residual: f64,
    /// Per vertex, position in the cyclic subgroup (label = position · step).
    #[serde(skip)]
    pub positions: Vec<usize>,
}

impl CharacterSpace {
    pub fn vector(&self, a: usize) -> Vec<Complex64> {
        self.positions
            .iter()
            .map(|&m| root_of_unity((a * m) % self.order, self.order))
            .collect()
    }

    /// Orthonormal real basis of the span of the character vectors.
    pub fn real_basis(&self) -> Vec<Vec<f64>> {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for a in 0..self.order {
            let v = self.vector(a);
            for part in [
                v.iter().map(|z| z.re).collect::<Vec<_>>(),
                v.iter().map(|z| z.im).collect(),
            ] {
                let mut w = part;
                for b in &basis {
                    let c = dot(b, &w);
                    axpy(-c, b, &mut w);
                }
                let nrm = dot(&w, &w).sqrt();
                if nrm > 1e-8 * (w.len() as f64).sqrt() {
                    w.iter_mut().for_each(|x| *x /= nrm);
                    basis.push(w);
                }
            }
        }
        basis
    }
}

/// Character vectors v_χ(x) = χ(label(x)) with their eigenvalues. Exactness
/// is checked in integer arithmetic: every color-k edge shifts the label by
/// k·label(1 − θ), which makes each v_χ an exact common eigenvector.
pub fn character_space(
    mats: &[AdjacencyMatrix],
    regularity: &[u64],
    labels: &[u64],
    class_order: u64,
    shift: u64,
) -> Result<CharacterSpace, SpectraError> {
    let g = class_order.max(1);
    let step = gcd(shift % g, g);
    let h = (g / step) as usize;
    let unit = (shift % g) / step;
    let positions: Vec<usize> = labels.iter().map(|&l| ((l % g) / step) as usize).collect();
    for a in mats {
        let k = a.color;
        for (x, r) in a.rows.iter().enumerate() {
            let want = (labels[x] + k as u64 * shift) % g;
            if r.iter().any(|&y| labels[y] % g != want) {
                return Err(SpectraError::CharacterNotExact {
                    color: k,
                    vertex: x,
                });
            }
        }
    }
    let mut space = CharacterSpace {
        order: h,
        eigenvalues: Vec::new(),
        max_residual: 0.0,
        positions,
    };
    for a in mats {
        let k = a.color;
        let nk = regularity[k - 1] as f64;
        let mut row = Vec::with_capacity(h);
        for chi in 0..h {
            let z = root_of_unity((chi * k * unit as usize) % h, h) * nk;
            let v = space.vector(chi);
            let re: Vec<f64> = v.iter().map(|c| c.re).collect();
            let im: Vec<f64> = v.iter().map(|c| c.im).collect();
            let (are, aim) = (a.matvec(&re), a.matvec(&im));
            let res = (0..v.len())
                .map(|i| (Complex64::new(are[i], aim[i]) - z * v[i]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            space.max_residual = space.max_residual.max(res);
            row.push((z.re, z.im));
        }
        space.eigenvalues.push(row);
    }
    Ok(space)
}

pub fn graph_character_space(g: &CayleyHypergraph) -> Result<CharacterSpace, SpectraError> {
    let mats = (1..g.d())
        .map(|k| adjacency_matrix(g, k))
        .collect::<Result<Vec<_>, _>>()?;
    character_space(
        &mats,
        &g.params.regularity,
        &g.det_labels,
        g.params.det_class_order,
        g.params.one_minus_theta_label,
    )
}

/// e^{2πi j/h}, exact at quarter turns.
fn root_of_unity(j: usize, h: usize) -> Complex64 {
    match (4 * j % (4 * h), 4 * j / h) {
        (0, 0) => Complex64::new(1.0, 0.0),
        (r, 1) if r % h == 0 => Complex64::new(0.0, 1.0),
        (r, 2) if r % h == 0 => Complex64::new(-1.0, 0.0),
        (r, 3) if r % h == 0 => Complex64::new(0.0, -1.0),
        _ => Complex64::from_polar(1.0, TAU * j as f64 / h as f64),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(b, a)| *b += c * a);
}

fn project_out(basis: &[Vec<f64>], w: &mut [f64]) {
    for b in basis {
        let c = dot(b, w);
        axpy(-c, b, w);
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalOptions {
    pub seed: u64,
    pub max_iter: usize,
    pub dense_cutoff: usize,
}

impl Default for ExtremalOptions {
    fn default() -> Self {
        ExtremalOptions {
            seed: 0,
            max_iter: 600,
            dense_cutoff: DEFAULT_DENSE_CUTOFF,
        }
    }
}

/// The `how_many` eigenvalues of largest modulus on the complement of
/// `deflate` (an orthonormal basis of an invariant subspace), by Lanczos with
/// full reorthogonalization. Symmetric matrices are handled directly;
/// otherwise A·Aᵀ is used and the moduli are returned. Requests for the whole
/// spectrum go to [`eigen_dense`].
pub fn eigen_extremal(
    a: &AdjacencyMatrix,
    how_many: usize,
    deflate: &[Vec<f64>],
    opts: &ExtremalOptions,
) -> Result<Spectrum, SpectraError> {
    let n = a.dim();
    if how_many >= n {
        return eigen_dense(a, opts.dense_cutoff);
    }
    let symmetric = a.is_symmetric();
    let at = if symmetric { None } else { Some(a.transpose()) };
    let op = |x: &[f64]| -> Vec<f64> {
        match &at {
            None => par_matvec(a, x),
            Some(t) => par_matvec(a, &par_matvec(t, x)),
        }
    };
    let scale = a.rows.first().map_or(1, Vec::len).max(1) as f64;
    let tol = RESIDUAL_TOL * if symmetric { scale } else { scale * scale };
    let dim = n.saturating_sub(deflate.len());
    let want = how_many.min(dim);
    if want == 0 {
        return Ok(Spectrum {
            method: if symmetric {
                Method::Lanczos
            } else {
                Method::LanczosNormal
            },
            values: Vec::new(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v0: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    project_out(deflate, &mut v0);
    let nrm = dot(&v0, &v0).sqrt();
    v0.iter_mut().for_each(|x| *x /= nrm);

    let mut basis: Vec<Vec<f64>> = vec![v0];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let limit = opts.max_iter.min(dim);
    loop {
        let j = basis.len() - 1;
        let mut w = op(&basis[j]);
        project_out(deflate, &mut w);
        let aj = dot(&w, &basis[j]);
        alpha.push(aj);
        // two passes of full reorthogonalization
        for _ in 0..2 {
            project_out(&basis, &mut w);
            project_out(deflate, &mut w);
        }
        let b = dot(&w, &w).sqrt();
        let m = alpha.len();
        let exhausted = b <= 1e-10 * scale || m >= dim;
        if exhausted || m >= limit || (m >= 2 * want + 10 && m.is_multiple_of(10)) {
            let t = tridiagonal(&alpha, &beta);
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&x, &y| {
                eig.eigenvalues[y]
                    .abs()
                    .total_cmp(&eig.eigenvalues[x].abs())
            });
            let top = &order[..want.min(m)];
            let converged = exhausted
                || top
                    .iter()
                    .all(|&i| (b * eig.eigenvectors[(m - 1, i)]).abs() <= tol);
            if converged {
                let values = top
                    .iter()
                    .map(|&i| {
                        let s = eig.eigenvectors.column(i);
                        let mut y = vec![0.0; n];
                        for (l, v) in basis.iter().enumerate().take(m) {
                            axpy(s[l], v, &mut y);
                        }
                        let theta = eig.eigenvalues[i];
                        let oy = op(&y);
                        let res = oy
                            .iter()
                            .zip(&y)
                            .map(|(p, q)| (p - theta * q).powi(2))
                            .sum::<f64>()
                            .sqrt();
                        let re = if symmetric {
                            theta
                        } else {
                            theta.max(0.0).sqrt()
                        };
                        Eigenvalue {
                            re,
                            im: 0.0,
                            residual: Some(res),
                        }
                    })
                    .collect();
                let method = if symmetric {
                    Method::Lanczos
                } else {
                    Method::LanczosNormal
                };
                return Ok(Spectrum { method, values });
            }
            if m >= limit {
                return Err(SpectraError::NonConvergence(limit));
            }
        }
        w.iter_mut().for_each(|x| *x /= b);
        beta.push(b);
        basis.push(w);
    }
}

fn par_matvec(a: &AdjacencyMatrix, x: &[f64]) -> Vec<f64> {
    a.rows
        .par_iter()
        .map(|r| r.iter().map(|&j| x[j]).sum())
        .collect()
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let m = alpha.len();
    let mut t = DMatrix::from_diagonal(&DVector::from_column_slice(alpha));
    for i in 0..m - 1 {
        t[(i, i + 1)] = beta[i];
        t[(i + 1, i)] = beta[i];
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenClass {
    Trivial,
    Nontrivial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedEigenvalue {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub residual: Option<f64>,
    pub class: EigenClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorReport {
    pub color: usize,
    pub n_k: u64,
    pub bound: f64,
    pub method: Method,
    /// Character eigenvalues n_k·χ((1 − θ)^k).
    pub character_eigenvalues: Vec<(f64, f64)>,
    pub eigenvalues: Vec<ClassifiedEigenvalue>,
    pub max_nontrivial_modulus: f64,
    pub margin: f64,
    /// Bound holds on the complement of the character space.
    pub pass: bool,
    /// Every eigenvalue is n_k or within the bound, with no deflation.
    pub strict_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub q: u64,
    pub d: usize,
    pub vertices: usize,
    pub character_order: usize,
    pub character_residual: f64,
    pub colors: Vec<ColorReport>,
    pub pass: bool,
    pub strict_pass: bool,
    pub bound_note: String,
    /// Wall time; not serialized so reports are reproducible byte for byte.
    #[serde(skip)]
    pub runtime: Duration,
}

impl SpectralReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("color,index,re,im,modulus,class\n");
        for c in &self.colors {
            for (i, e) in c.eigenvalues.iter().enumerate() {
                let class = match e.class {
                    EigenClass::Trivial => "trivial",
                    EigenClass::Nontrivial => "nontrivial",
                };
                writeln!(
                    s,
                    "{},{},{:.12},{:.12},{:.12},{}",
                    c.color, i, e.re, e.im, e.modulus, class
                )
                .unwrap();
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub dense_cutoff: usize,
    /// Eigenvalues requested per color above the dense cutoff.
    pub extremal_count: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            dense_cutoff: DEFAULT_DENSE_CUTOFF,
            extremal_count: 6,
            seed: 0,
        }
    }
}

/// Inputs of the spectral check, detached from the graph.
#[derive(Clone, Debug)]
pub struct SpectralProblem {
    pub q: u64,
    pub d: usize,
    pub regularity: Vec<u64>,
    pub matrices: Vec<AdjacencyMatrix>,
    pub labels: Vec<u64>,
    pub class_order: u64,
    pub shift: u64,
}

impl SpectralProblem {
    pub fn from_graph(g: &CayleyHypergraph) -> Result<Self, SpectraError> {
        Ok(SpectralProblem {
            q: g.params.q,
            d: g.d(),
            regularity: g.params.regularity.clone(),
            matrices: (1..g.d())
                .map(|k| adjacency_matrix(g, k))
                .collect::<Result<_, _>>()?,
            labels: g.det_labels.clone(),
            class_order: g.params.det_class_order,
            shift: g.params.one_minus_theta_label,
        })
    }
}

pub fn ramanujan_check(
    g: &CayleyHypergraph,
    opts: &CheckOptions,
) -> Result<SpectralReport, SpectraError> {
    check_problem(&SpectralProblem::from_graph(g)?, opts)
}

/// Per color: spectrum, removal of the character eigenvalues (greedy nearest
/// match within MATCH_TOL·n_k), and the bound on what remains.
pub fn check_problem(
    p: &SpectralProblem,
    opts: &CheckOptions,
) -> Result<SpectralReport, SpectraError> {
    let start = Instant::now();
    let chars = character_space(
        &p.matrices,
        &p.regularity,
        &p.labels,
        p.class_order,
        p.shift,
    )?;
    let n = p.labels.len();
    let deflate = if n > opts.dense_cutoff {
        chars.real_basis()
    } else {
        Vec::new()
    };
    let mut colors = Vec::new();
    for a in &p.matrices {
        let k = a.color;
        let nk = p.regularity[k - 1];
        let bound = ramanujan_bound(p.q, p.d, k);
        let expected = &chars.eigenvalues[k - 1];
        let (spectrum, mut classes) = if n <= opts.dense_cutoff {
            let spectrum = eigen_dense(a, opts.dense_cutoff)?;
            let mut classes = vec![EigenClass::Nontrivial; spectrum.values.len()];
            for &(re, im) in expected {
                let z = Complex64::new(re, im);
                let best = spectrum
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| classes[*i] == EigenClass::Nontrivial)
                    .map(|(i, e)| (i, (e.value() - z).norm()))
                    .min_by(|x, y| x.1.total_cmp(&y.1));
                match best {
                    Some((i, dist)) if dist <= MATCH_TOL * nk.max(1) as f64 => {
                        classes[i] = EigenClass::Trivial
                    }
                    _ => {
                        return Err(SpectraError::UnmatchedCharacter {
                            color: k,
                            value: format!("{z}"),
                        })
                    }
                }
            }
            (spectrum, classes)
        } else {
            let ex = ExtremalOptions {
                seed: opts.seed,
                dense_cutoff: opts.dense_cutoff,
                ..Default::default()
            };
            let spectrum = eigen_extremal(a, opts.extremal_count, &deflate, &ex)?;
            let classes = vec![EigenClass::Nontrivial; spectrum.values.len()];
            (spectrum, classes)
        };
        let mut eigenvalues: Vec<ClassifiedEigenvalue> = spectrum
            .values
            .iter()
            .zip(classes.drain(..))
            .map(|(e, class)| ClassifiedEigenvalue {
                re: e.re,
                im: e.im,
                modulus: e.modulus(),
                residual: e.residual,
                class,
            })
            .collect();
        if n > opts.dense_cutoff {
            // character eigenvalues are known exactly; list them first
            let mut all: Vec<ClassifiedEigenvalue> = expected
                .iter()
                .map(|&(re, im)| ClassifiedEigenvalue {
                    re,
                    im,
                    modulus: nk as f64,
                    residual: Some(chars.max_residual),
                    class: EigenClass::Trivial,
                })
                .collect();
            all.append(&mut eigenvalues);
            eigenvalues = all;
        }
        let max_nontrivial = eigenvalues
            .iter()
            .filter(|e| e.class == EigenClass::Nontrivial)
            .map(|e| e.modulus)
            .fold(0.0, f64::max);
        let pass = max_nontrivial <= bound + BOUND_TOL;
        let trivial_ok = eigenvalues
            .iter()
            .filter(|e| e.class == EigenClass::Trivial)
            .all(|e| {
                (Complex64::new(e.re, e.im) - nk as f64).norm() <= MATCH_TOL * nk.max(1) as f64
                    || e.modulus <= bound + BOUND_TOL
            });
        colors.push(ColorReport {
            color: k,
            n_k: nk,
            bound,
            method: spectrum.method,
            character_eigenvalues: expected.clone(),
            eigenvalues,
            max_nontrivial_modulus: max_nontrivial,
            margin: bound - max_nontrivial,
            pass,
            strict_pass: pass && trivial_ok,
        });
    }
    Ok(SpectralReport {
        q: p.q,
        d: p.d,
        vertices: n,
        character_order: chars.order,
        character_residual: chars.max_residual,
        pass: colors.iter().all(|c| c.pass),
        strict_pass: colors.iter().all(|c| c.strict_pass),
        colors,
        bound_note: BOUND_NOTE.to_string(),
        runtime: start.elapsed(),
    })
}
