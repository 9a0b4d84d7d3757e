//! Adjacency spectra, the exact vertex-expansion constant of small graphs,
//! and the per-graph expansion report.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_DENSE_BOUND: usize = 4096;
pub const EXACT_EXPANSION_BOUND: usize = 24;

/// All adjacency eigenvalues, descending.
pub fn spectrum_dense(g: &Graph, bound: usize) -> Result<Vec<f64>> {
    let (vals, _) = dense_eigen(g, bound)?;
    Ok(vals)
}

/// Eigenvalues (descending) and matching unit eigenvectors as columns.
fn dense_eigen(g: &Graph, bound: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = g.n();
    if n > bound {
        return Err(Error::GraphTooLarge { n, bound });
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for u in 0..n {
        for &v in g.neighbors(u) {
            a[(u, v as usize)] = 1.0;
        }
    }
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((vals, vecs))
}

/// An extreme eigenvalue of the adjacency operator on the complement of the all-ones vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// `‖Av - μv‖ / ‖v‖` for the returned Ritz vector.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Extreme {
    Largest,
    Smallest,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn apply(g: &Graph, x: &[f64], y: &mut [f64]) {
    y.par_chunks_mut(4096).enumerate().for_each(|(c, chunk)| {
        let base = c * 4096;
        for (i, out) in chunk.iter_mut().enumerate() {
            *out = g.neighbors(base + i).iter().map(|&v| x[v as usize]).sum();
        }
    });
}

/// Removes the component along the all-ones vector.
fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

/// Restarted Lanczos with full reorthogonalization on the deflated operator.
/// Each restart begins from the current Ritz vector of the wanted extreme.
fn lanczos_extreme(
    g: &Graph,
    which: Extreme,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<Estimate> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidConfig("need at least two vertices".into()));
    }
    let krylov = (n - 1).min(160);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut iterations = 0usize;
    let mut best = Estimate {
        value: f64::NAN,
        residual: f64::INFINITY,
        iterations: 0,
    };
    let mut w = vec![0.0; n];

    loop {
        deflate(&mut start);
        let nrm = norm(&start);
        if nrm == 0.0 {
            return Err(Error::InternalIdentity(
                "Lanczos start vector vanished".into(),
            ));
        }
        let mut basis: Vec<Vec<f64>> = vec![start.iter().map(|x| x / nrm).collect()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        loop {
            let v = basis.last().unwrap();
            apply(g, v, &mut w);
            iterations += 1;
            let a = dot(&w, v);
            alpha.push(a);
            deflate(&mut w);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&w, b);
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = norm(&w);
            if basis.len() >= krylov || b <= 1e-10 * (1.0 + a.abs()) || iterations >= max_iter {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }

        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let pick = (0..m)
            .reduce(|i, j| {
                let (x, y) = (eig.eigenvalues[i], eig.eigenvalues[j]);
                let better = match which {
                    Extreme::Largest => y > x,
                    Extreme::Smallest => y < x,
                };
                if better {
                    j
                } else {
                    i
                }
            })
            .unwrap();
        let mut ritz = vec![0.0; n];
        for (j, b) in basis.iter().enumerate() {
            let z = eig.eigenvectors[(j, pick)];
            ritz.iter_mut().zip(b).for_each(|(r, x)| *r += z * x);
        }
        deflate(&mut ritz);
        let rn = norm(&ritz);
        ritz.iter_mut().for_each(|x| *x /= rn);
        apply(g, &ritz, &mut w);
        let mu = dot(&ritz, &w);
        let residual = w
            .iter()
            .zip(&ritz)
            .map(|(a, r)| (a - mu * r).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual < best.residual {
            best = Estimate {
                value: mu,
                residual,
                iterations,
            };
        }
        if residual <= tol {
            return Ok(best);
        }
        if iterations >= max_iter {
            return Err(Error::NoConvergence {
                estimate: best.value,
                residual: best.residual,
                iterations,
            });
        }
        start = ritz;
    }
}

/// Largest eigenvalue on the complement of the all-ones vector (`λ₂` of a regular graph).
pub fn lambda2_iterative(g: &Graph, tol: f64, max_iter: usize, seed: u64) -> Result<Estimate> {
    g.regular_degree().ok_or(Error::NotRegular)?;
    lanczos_extreme(g, Extreme::Largest, tol, max_iter, seed)
}

/// Smallest adjacency eigenvalue of a regular graph.
pub fn lambda_min_iterative(g: &Graph, tol: f64, max_iter: usize, seed: u64) -> Result<Estimate> {
    g.regular_degree().ok_or(Error::NotRegular)?;
    lanczos_extreme(g, Extreme::Smallest, tol, max_iter, seed.wrapping_add(1))
}

/// `min_A N |∂A| / ((N - |A|) |A|)` over nonempty proper vertex subsets `A`,
/// `∂A` being the vertices outside `A` adjacent to it.
pub fn vertex_expansion_exact(g: &Graph) -> Result<Ratio<u64>> {
    let n = g.n();
    if n > EXACT_EXPANSION_BOUND {
        return Err(Error::GraphTooLarge {
            n,
            bound: EXACT_EXPANSION_BOUND,
        });
    }
    if n < 2 {
        return Err(Error::InvalidConfig("need at least two vertices".into()));
    }
    let adj: Vec<u32> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let best = (1..full)
        .into_par_iter()
        .map(|a| {
            let mut nb = 0u32;
            let mut rest = a;
            while rest != 0 {
                nb |= adj[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            let boundary = (nb & !a).count_ones() as u64;
            let size = a.count_ones() as u64;
            (n as u64 * boundary, (n as u64 - size) * size)
        })
        .reduce_with(|x, y| if x.0 * y.1 <= y.0 * x.1 { x } else { y })
        .expect("at least one subset");
    Ok(Ratio::new(best.0, best.1))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub lambda2: f64,
    pub lambda_min: f64,
    pub method: Method,
    pub residual: f64,
    pub iterations: usize,
    pub seed: u64,
    pub gap: f64,
    pub two_sided_gap: f64,
    pub bipartite: bool,
    pub edge_expansion_bound: f64,
    pub c_exact: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SpectralConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub dense_bound: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            tol: 1e-8,
            max_iter: 20_000,
            seed: 0,
            dense_bound: DEFAULT_DENSE_BOUND,
        }
    }
}

fn residual_of(g: &Graph, vecs: &DMatrix<f64>, col: usize, value: f64) -> f64 {
    let n = g.n();
    let v: Vec<f64> = (0..n).map(|r| vecs[(r, col)]).collect();
    let mut w = vec![0.0; n];
    g.apply(&v, &mut w);
    w.iter()
        .zip(&v)
        .map(|(a, x)| (a - value * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// λ₂, λ_min, gaps and (for tiny graphs) the exact expansion constant.
pub fn expansion_report(g: &Graph, cfg: &SpectralConfig) -> Result<SpectralReport> {
    let k = g.regular_degree().ok_or(Error::NotRegular)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidConfig("need at least two vertices".into()));
    }
    let (lambda2, lambda_min, residual, iterations, method) = if n <= cfg.dense_bound {
        let (vals, vecs) = dense_eigen(g, cfg.dense_bound)?;
        let r = residual_of(g, &vecs, 1, vals[1]).max(residual_of(g, &vecs, n - 1, vals[n - 1]));
        (vals[1], vals[n - 1], r, 0, Method::Dense)
    } else {
        let hi = lambda2_iterative(g, cfg.tol, cfg.max_iter, cfg.seed)?;
        let lo = lambda_min_iterative(g, cfg.tol, cfg.max_iter, cfg.seed)?;
        (
            hi.value,
            lo.value,
            hi.residual.max(lo.residual),
            hi.iterations + lo.iterations,
            Method::Iterative,
        )
    };
    let kf = k as f64;
    let gap = kf - lambda2;
    let c_exact = if n <= EXACT_EXPANSION_BOUND {
        Some(vertex_expansion_exact(g)?.to_string())
    } else {
        None
    };
    Ok(SpectralReport {
        n,
        k,
        lambda2,
        lambda_min,
        method,
        residual,
        iterations,
        seed: cfg.seed,
        gap,
        two_sided_gap: kf - lambda2.max(lambda_min.abs()),
        bipartite: (lambda_min + kf).abs() <= 1e-6,
        edge_expansion_bound: gap / 2.0,
        c_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn dense_small_spectra() {
        let k6 = spectrum_dense(&Graph::complete(6), 100).unwrap();
        assert!(close(&k6, &[5.0, -1.0, -1.0, -1.0, -1.0, -1.0], 1e-9));
        let c6 = spectrum_dense(&Graph::cycle(6), 100).unwrap();
        assert!(close(&c6, &[2.0, 1.0, 1.0, -1.0, -1.0, -2.0], 1e-9));
        assert!(matches!(
            spectrum_dense(&Graph::complete(6), 5),
            Err(Error::GraphTooLarge { .. })
        ));
    }

    #[test]
    fn iterative_on_complete_graphs() {
        for n in [4, 6, 8] {
            let e = lambda2_iterative(&Graph::complete(n), 1e-8, 1000, 3).unwrap();
            assert!((e.value + 1.0).abs() <= 1e-8, "K{n}: {}", e.value);
            let m = lambda_min_iterative(&Graph::complete(n), 1e-8, 1000, 3).unwrap();
            assert!((m.value + 1.0).abs() <= 1e-8);
        }
        let c6 = lambda2_iterative(&Graph::cycle(6), 1e-10, 1000, 1).unwrap();
        assert!((c6.value - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn iterative_is_deterministic() {
        let g = Graph::petersen();
        let a = lambda2_iterative(&g, 1e-9, 1000, 42).unwrap();
        let b = lambda2_iterative(&g, 1e-9, 1000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_regular_is_rejected() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            lambda2_iterative(&g, 1e-6, 10, 0),
            Err(Error::NotRegular)
        ));
    }

    #[test]
    fn exact_expansion() {
        assert_eq!(
            vertex_expansion_exact(&Graph::complete(6)).unwrap(),
            Ratio::new(6, 5)
        );
        assert_eq!(
            vertex_expansion_exact(&Graph::complete(2)).unwrap(),
            Ratio::from_integer(2)
        );
        let two_k2 = Graph::complete(2).disjoint_union(&Graph::complete(2));
        assert_eq!(
            vertex_expansion_exact(&two_k2).unwrap(),
            Ratio::from_integer(0)
        );
        assert!(vertex_expansion_exact(&Graph::cycle(25)).is_err());
    }

    #[test]
    fn reports() {
        let cfg = SpectralConfig::default();
        let k6 = expansion_report(&Graph::complete(6), &cfg).unwrap();
        assert!((k6.gap - 6.0).abs() < 1e-9);
        assert!((k6.edge_expansion_bound - 3.0).abs() < 1e-9);
        assert_eq!(k6.c_exact.as_deref(), Some("6/5"));
        assert!(!k6.bipartite);
        let c6 = expansion_report(&Graph::cycle(6), &cfg).unwrap();
        assert!((c6.gap - 1.0).abs() < 1e-9);
        assert!(c6.bipartite);
        let split = Graph::cycle(6).disjoint_union(&Graph::cycle(6));
        let r = expansion_report(&split, &cfg).unwrap();
        assert!((r.lambda2 - 2.0).abs() < 1e-9);
        assert_eq!(r.c_exact.as_deref(), Some("0"));
    }
}
