//! Sampling of finite `N d x N d` block matrices.
//!
//! A sample stores only its edges `(i, j, a)` with `i < j`; the block at
//! `(i, j)` is the projector `a a^T`. Moments are exact normalized traces
//! computed with sparse block mat-vecs; dense matrices are built only for
//! eigenvalues.

use std::io::Write;
use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::averager;
use crate::error::{Error, Result};
use crate::model::Model;

/// Highest moment order compared by default; finite-`N` bias grows with order.
pub const DEFAULT_ORDER_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    /// Number of block rows.
    pub n: usize,
    /// Block dimension.
    pub d: usize,
    /// Mean connectivity.
    pub z: f64,
    pub samples: usize,
    pub seed: u64,
}

impl EnsembleParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.d < 1 || self.samples < 1 {
            return Err(Error::Parameter(format!("need N >= 2, d >= 1, samples >= 1 (got {self:?})")));
        }
        if !(self.z > 0.0 && self.z < self.n as f64) {
            return Err(Error::Parameter(format!("need 0 < Z < N, got Z = {} and N = {}", self.z, self.n)));
        }
        Ok(())
    }

    /// `t = Z / d`.
    pub fn t(&self) -> f64 {
        self.z / self.d as f64
    }

    /// The generator of one sample; samples are independent streams of the
    /// same seed, so results do not depend on scheduling.
    pub fn rng(&self, sample: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample as u64);
        rng
    }
}

/// Uniform random unit vector in `R^d` (normalized Gaussian).
pub fn sample_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// One sampled graph with a projector on each edge.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGraph {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<(usize, usize, Vec<f64>)>,
}

impl BlockGraph {
    /// Each pair `i < j` is an edge with probability `Z/N`.
    pub fn sample(params: &EnsembleParams, sample: usize) -> Result<Self> {
        params.validate()?;
        let mut rng = params.rng(sample);
        let p = params.z / params.n as f64;
        let mut edges = Vec::new();
        for i in 0..params.n {
            for j in i + 1..params.n {
                if rng.random::<f64>() < p {
                    edges.push((i, j, sample_unit_vector(params.d, &mut rng)));
                }
            }
        }
        Ok(BlockGraph { n: params.n, d: params.d, edges })
    }

    pub fn dim(&self) -> usize {
        self.n * self.d
    }

    /// `out = M v`.
    pub fn apply(&self, model: Model, v: &[f64], out: &mut [f64]) {
        let d = self.d;
        out.iter_mut().for_each(|x| *x = 0.0);
        for (i, j, a) in &self.edges {
            let (vi, vj) = (&v[i * d..(i + 1) * d], &v[j * d..(j + 1) * d]);
            let dot = |w: &[f64]| a.iter().zip(w).map(|(x, y)| x * y).sum::<f64>();
            let (pi, pj) = (dot(vi), dot(vj));
            let (ci, cj) = match model {
                Model::Adjacency => (pj, pi),
                Model::Laplacian => (pi - pj, pj - pi),
            };
            for (k, ak) in a.iter().enumerate() {
                out[i * d + k] += ak * ci;
                out[j * d + k] += ak * cj;
            }
        }
    }

    pub fn dense(&self, model: Model) -> DMatrix<f64> {
        let d = self.d;
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (i, j, a) in &self.edges {
            for r in 0..d {
                for c in 0..d {
                    let x = a[r] * a[c];
                    match model {
                        Model::Adjacency => {
                            m[(i * d + r, j * d + c)] += x;
                            m[(j * d + r, i * d + c)] += x;
                        }
                        Model::Laplacian => {
                            m[(i * d + r, j * d + c)] -= x;
                            m[(j * d + r, i * d + c)] -= x;
                            m[(i * d + r, i * d + c)] += x;
                            m[(j * d + r, j * d + c)] += x;
                        }
                    }
                }
            }
        }
        m
    }

    /// `Tr M^k / (N d)` for `k = 1..=kmax`, as `sum_e <M^p e, M^q e>` over
    /// basis vectors with `p + q = k`.
    pub fn moments(&self, model: Model, kmax: usize) -> Vec<f64> {
        let dim = self.dim();
        let half = kmax.div_ceil(2);
        let mut traces = vec![0.0; kmax];
        let mut powers = vec![vec![0.0; dim]; half + 1];
        for e in 0..dim {
            powers[0].iter_mut().for_each(|x| *x = 0.0);
            powers[0][e] = 1.0;
            for p in 1..=half {
                let (done, rest) = powers.split_at_mut(p);
                self.apply(model, &done[p - 1], &mut rest[0]);
            }
            for (k, tr) in traces.iter_mut().enumerate().map(|(i, t)| (i + 1, t)) {
                let p = k / 2;
                let q = k - p;
                *tr += powers[p].iter().zip(&powers[q]).map(|(x, y)| x * y).sum::<f64>();
            }
        }
        traces.into_iter().map(|t| t / dim as f64).collect()
    }

    /// Writes the dense matrix in a little-endian binary layout:
    /// `b"SBRM"`, `u32` version (1), `u32` model (0 adjacency, 1 Laplacian),
    /// `u64` N, `u64` d, then `(N d)^2` `f64` entries in row-major order.
    pub fn dump<W: Write>(&self, model: Model, w: &mut W) -> std::io::Result<()> {
        w.write_all(b"SBRM")?;
        w.write_all(&1u32.to_le_bytes())?;
        w.write_all(&(if model == Model::Adjacency { 0u32 } else { 1u32 }).to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&(self.d as u64).to_le_bytes())?;
        let m = self.dense(model);
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                w.write_all(&m[(r, c)].to_le_bytes())?;
            }
        }
        Ok(())
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Running mean and variance.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderRecord {
    pub order: usize,
    pub mean: f64,
    pub std_error: f64,
    pub exact: f64,
    /// `(mean - exact) / std_error`; `0` when both the error and the
    /// deviation vanish.
    pub z_score: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    pub schema_version: u32,
    pub model: Model,
    pub params: EnsembleParams,
    pub records: Vec<OrderRecord>,
    /// Samples without any edge.
    pub empty_samples: usize,
    pub wall_time_secs: f64,
}

impl SimReport {
    pub fn max_abs_z(&self) -> f64 {
        self.records.iter().map(|r| r.z_score.abs()).fold(0.0, f64::max)
    }
}

/// Per-sample moments `1..=kmax`, in sample order.
pub fn sample_moments(params: &EnsembleParams, model: Model, kmax: usize) -> Result<Vec<(Vec<f64>, bool)>> {
    params.validate()?;
    (0..params.samples)
        .into_par_iter()
        .map(|s| {
            let g = BlockGraph::sample(params, s)?;
            Ok((g.moments(model, kmax), g.edges.is_empty()))
        })
        .collect()
}

/// Compares sampled moments with the exact `N -> infinity` moments at
/// `t = Z/d` and the sampled `d`.
pub fn run_comparison(params: &EnsembleParams, model: Model, orders: &[usize], cap: usize) -> Result<SimReport> {
    let start = Instant::now();
    let kmax = orders.iter().copied().max().unwrap_or(0);
    if kmax > cap || orders.contains(&0) {
        return Err(Error::Parameter(format!("orders must lie in 1..={cap}, got {orders:?}")));
    }
    let per_sample = sample_moments(params, model, kmax)?;
    let empty_samples = per_sample.iter().filter(|s| s.1).count();
    let mut records = Vec::new();
    for &k in orders {
        let mut w = Welford::default();
        for (m, _) in &per_sample {
            w.push(m[k - 1]);
        }
        let exact = averager::moment(model, k)?.eval_f64(params.t(), params.d as f64);
        let se = w.std_error();
        let dev = w.mean - exact;
        let z_score = if se > 0.0 {
            dev / se
        } else if dev.abs() <= 1e-12 * exact.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY.copysign(dev)
        };
        records.push(OrderRecord { order: k, mean: w.mean, std_error: se, exact, z_score });
    }
    Ok(SimReport {
        schema_version: 1,
        model,
        params: *params,
        records,
        empty_samples,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Eigenvalue histogram pooled over samples.
#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub centers: Vec<f64>,
    pub density: Vec<f64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

impl Histogram {
    /// Same layout as a density curve: `lambda,rho`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,rho\n");
        for (x, y) in self.centers.iter().zip(&self.density) {
            out.push_str(&format!("{x:.12e},{y:.12e}\n"));
        }
        out
    }

    /// `k`-th moment of the binned distribution.
    pub fn moment(&self, k: i32) -> f64 {
        let w = if self.centers.len() > 1 { self.centers[1] - self.centers[0] } else { 1.0 };
        self.centers.iter().zip(&self.density).map(|(x, p)| x.powi(k) * p * w).sum()
    }
}

/// Pooled eigenvalues of all samples.
pub fn sample_eigenvalues(params: &EnsembleParams, model: Model) -> Result<Vec<f64>> {
    params.validate()?;
    let per: Vec<Vec<f64>> = (0..params.samples)
        .into_par_iter()
        .map(|s| BlockGraph::sample(params, s).map(|g| eigenvalues(g.dense(model))))
        .collect::<Result<_>>()?;
    Ok(per.concat())
}

/// Histogram of the pooled spectrum with `bins` equal bins over its range.
pub fn empirical_density(params: &EnsembleParams, model: Model, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::Parameter("need at least one bin".into()));
    }
    let ev = sample_eigenvalues(params, model)?;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &x in &ev {
        counts[(((x - lo) / width) as usize).min(bins - 1)] += 1;
    }
    Ok(Histogram {
        centers: (0..bins).map(|b| lo + (b as f64 + 0.5) * width).collect(),
        density: counts.iter().map(|&c| c as f64 / (ev.len() as f64 * width)).collect(),
        min_eigenvalue: lo,
        max_eigenvalue: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: usize, d: usize, z: f64, samples: usize) -> EnsembleParams {
        EnsembleParams { n, d, z, samples, seed: 7 }
    }

    fn mean_se(xs: &[f64]) -> (f64, f64) {
        let mut w = Welford::default();
        xs.iter().for_each(|&x| w.push(x));
        (w.mean, w.std_error())
    }

    #[test]
    fn unit_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..6 {
            let v = sample_unit_vector(d, &mut rng);
            assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let ones: Vec<f64> = (0..1000).map(|_| sample_unit_vector(1, &mut rng)[0]).collect();
        assert!(ones.iter().all(|x| x.abs() == 1.0));
        let (m, se) = mean_se(&ones);
        assert!(m.abs() < 4.0 * se);
    }

    #[test]
    fn coordinate_moments_of_unit_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sq: Vec<f64> = (0..100_000).map(|_| sample_unit_vector(4, &mut rng)[0].powi(2)).collect();
        let (m, se) = mean_se(&sq);
        assert!((m - 0.25).abs() < 4.0 * se, "{m} {se}");
        let q: Vec<f64> = (0..100_000).map(|_| sample_unit_vector(2, &mut rng)[0].powi(4)).collect();
        let (m, se) = mean_se(&q);
        assert!((m - 3.0 / 8.0).abs() < 4.0 * se, "{m} {se}");
    }

    #[test]
    fn matrix_structure() {
        let p = params(40, 3, 5.0, 1);
        let g = BlockGraph::sample(&p, 0).unwrap();
        let a = g.dense(Model::Adjacency);
        assert_eq!(a, a.transpose());
        for i in 0..p.n {
            assert_eq!(a.view((3 * i, 3 * i), (3, 3)).norm(), 0.0);
        }
        for (_, _, v) in &g.edges {
            let x = DMatrix::from_fn(3, 3, |r, c| v[r] * v[c]);
            assert!((&x * &x - &x).norm() < 1e-10);
            assert!((x.trace() - 1.0).abs() < 1e-10);
        }
        let l = g.dense(Model::Laplacian);
        for i in 0..p.n {
            let mut row = DMatrix::<f64>::zeros(3, 3);
            for j in 0..p.n {
                row += l.view((3 * i, 3 * j), (3, 3));
            }
            assert!(row.norm() < 1e-12);
        }
    }

    #[test]
    fn erdos_renyi_at_unit_dimension() {
        let g = BlockGraph::sample(&params(50, 1, 4.0, 1), 3).unwrap();
        let a = g.dense(Model::Adjacency);
        assert!(a.iter().all(|&x| x == 0.0 || x == 1.0));
    }

    #[test]
    fn laplacian_is_positive_semidefinite() {
        let g = BlockGraph::sample(&params(100, 2, 3.0, 1), 0).unwrap();
        let l = g.dense(Model::Laplacian);
        let norm = l.norm();
        assert!(eigenvalues(l)[0] >= -1e-8 * norm);
    }

    #[test]
    fn sparse_traces_match_dense_powers() {
        let g = BlockGraph::sample(&params(30, 2, 4.0, 1), 1).unwrap();
        for model in [Model::Adjacency, Model::Laplacian] {
            let m = g.dense(model);
            let sparse = g.moments(model, 5);
            let mut p = DMatrix::identity(g.dim(), g.dim());
            for (k, s) in sparse.iter().enumerate() {
                p = &p * &m;
                assert!((p.trace() / g.dim() as f64 - s).abs() < 1e-10, "k={}", k + 1);
            }
        }
        assert_eq!(g.moments(Model::Adjacency, 1)[0], 0.0);
        // Tr A^2 = 2 sum_edges ||X||_F^2
        let frob = 2.0 * g.edges.len() as f64 / g.dim() as f64;
        assert!((g.moments(Model::Adjacency, 2)[1] - frob).abs() < 1e-12);
    }

    #[test]
    fn reproducible() {
        let p = params(60, 2, 3.0, 4);
        assert_eq!(BlockGraph::sample(&p, 2).unwrap(), BlockGraph::sample(&p, 2).unwrap());
        assert_ne!(BlockGraph::sample(&p, 2).unwrap(), BlockGraph::sample(&p, 3).unwrap());
        let a = run_comparison(&p, Model::Laplacian, &[1, 2], 8).unwrap();
        let b = run_comparison(&p, Model::Laplacian, &[1, 2], 8).unwrap();
        assert_eq!(a.records.iter().map(|r| r.mean.to_bits()).collect::<Vec<_>>(), b.records.iter().map(|r| r.mean.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn second_moment_and_odd_moment() {
        let p = params(200, 3, 6.0, 50);
        let r = run_comparison(&p, Model::Adjacency, &[2], 8).unwrap();
        assert!(r.records[0].z_score.abs() <= 4.0, "{:?}", r.records[0]);
        // triangles bias the third moment by O(Z^3 / (N d^3)); keep Z small
        let r = run_comparison(&params(200, 3, 0.5, 50), Model::Adjacency, &[3], 8).unwrap();
        assert!(r.records[0].z_score.abs() <= 4.0, "{:?}", r.records[0]);
        let r = run_comparison(&params(300, 3, 6.0, 30), Model::Laplacian, &[1], 8).unwrap();
        assert!(r.records[0].z_score.abs() <= 4.0, "{:?}", r.records[0]);
    }

    #[test]
    fn parameter_errors() {
        assert!(params(10, 1, 10.0, 1).validate().is_err());
        assert!(params(10, 0, 1.0, 1).validate().is_err());
        assert!(run_comparison(&params(10, 1, 1.0, 2), Model::Adjacency, &[9], 8).is_err());
        assert!(empirical_density(&params(10, 1, 1.0, 2), Model::Adjacency, 0).is_err());
    }

    #[test]
    fn histogram_is_normalized() {
        let h = empirical_density(&params(40, 2, 3.0, 3), Model::Laplacian, 20).unwrap();
        assert!((h.moment(0) - 1.0).abs() < 1e-12);
        assert!(h.to_csv().starts_with("lambda,rho\n"));
    }

    #[test]
    fn dump_layout() {
        let g = BlockGraph::sample(&params(5, 2, 2.0, 1), 0).unwrap();
        let mut buf = Vec::new();
        g.dump(Model::Laplacian, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"SBRM");
        assert_eq!(buf.len(), 4 + 4 + 4 + 8 + 8 + 100 * 8);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn samples_depend_only_on_seed_and_index(seed in any::<u64>(), s in 0usize..50, n in 5usize..40, d in 1usize..4) {
            let p = EnsembleParams { n, d, z: 2.0, samples: 1, seed };
            let a = BlockGraph::sample(&p, s).unwrap();
            // drawing another sample in between must not disturb this one
            let _ = BlockGraph::sample(&p, s + 1).unwrap();
            prop_assert_eq!(a, BlockGraph::sample(&p, s).unwrap());
        }

        #[test]
        fn unit_vectors_have_unit_norm(seed in any::<u64>(), d in 1usize..30) {
            let mut rng = EnsembleParams { n: 2, d, z: 1.0, samples: 1, seed }.rng(0);
            let v = sample_unit_vector(d, &mut rng);
            let norm: f64 = v.iter().map(|x| x * x).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
