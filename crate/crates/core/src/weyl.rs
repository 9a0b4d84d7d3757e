//! Growth of the affine symmetric group (type `Ã_{m-1}`) and the covolume series.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// A bijection `u: Z → Z` with `u(i + m) = u(i) + m`, stored as its window `u(1..=m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePerm {
    window: Vec<i64>,
}

impl AffinePerm {
    pub fn identity(m: usize) -> Self {
        AffinePerm {
            window: (1..=m as i64).collect(),
        }
    }

    pub fn from_window(window: Vec<i64>) -> Result<Self> {
        let m = window.len() as i64;
        if m < 1 {
            return Err(Error::InvalidWindow("empty window".into()));
        }
        let mut seen = vec![false; m as usize];
        for &x in &window {
            let r = x.rem_euclid(m) as usize;
            if seen[r] {
                return Err(Error::InvalidWindow(format!(
                    "{window:?} repeats a residue mod {m}"
                )));
            }
            seen[r] = true;
        }
        if window.iter().sum::<i64>() != m * (m + 1) / 2 {
            return Err(Error::InvalidWindow(format!(
                "{window:?} does not sum to {}",
                m * (m + 1) / 2
            )));
        }
        Ok(AffinePerm { window })
    }

    pub fn m(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// Right multiplication by the Coxeter generator `s_i`, `0 ≤ i < m`.
    /// `s_i` (`i ≥ 1`) swaps window positions `i` and `i + 1`; `s_0` sets
    /// `u(1) := u(m) - m` and `u(m) := u(1) + m`.
    pub fn times_generator(&self, i: usize) -> Self {
        let m = self.m();
        assert!(i < m, "generator index out of range");
        let mut w = self.window.clone();
        if i == 0 {
            let (first, last) = (w[0], w[m - 1]);
            w[0] = last - m as i64;
            w[m - 1] = first + m as i64;
        } else {
            w.swap(i - 1, i);
        }
        AffinePerm { window: w }
    }
}

/// Coxeter length `Σ_{1≤i<j≤m} |⌊(u(j) - u(i)) / m⌋|`.
pub fn length_by_inversions(u: &AffinePerm) -> u64 {
    let w = u.window();
    let m = w.len() as i64;
    let mut len = 0u64;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            len += (w[j] - w[i]).div_euclid(m).unsigned_abs();
        }
    }
    len
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Bfs,
    Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCoeffs {
    pub coeffs: Vec<BigUint>,
    pub provenance: Provenance,
}

/// All elements of length `≤ l` with their BFS depth, in BFS order.
pub fn coxeter_ball(m: usize, l: usize, cap: usize) -> Result<Vec<(AffinePerm, u64)>> {
    if m < 2 {
        return Err(Error::InvalidConfig(format!(
            "affine period must be at least 2, got {m}"
        )));
    }
    let id = AffinePerm::identity(m);
    let mut seen: HashSet<AffinePerm> = HashSet::from([id.clone()]);
    let mut out = vec![(id, 0u64)];
    let mut frontier_start = 0;
    for d in 1..=l as u64 {
        let frontier_end = out.len();
        let mut next: Vec<AffinePerm> = Vec::new();
        for (u, _) in &out[frontier_start..frontier_end] {
            for i in 0..m {
                let v = u.times_generator(i);
                if !seen.contains(&v) {
                    seen.insert(v.clone());
                    next.push(v);
                }
            }
        }
        if out.len() + next.len() > cap {
            return Err(Error::CapExceeded {
                limit: cap,
                partial: out.len() + next.len(),
            });
        }
        next.sort();
        out.extend(next.into_iter().map(|v| (v, d)));
        frontier_start = frontier_end;
    }
    Ok(out)
}

/// Number of elements at each length `0..=l`, by breadth-first search.
pub fn coxeter_growth_bfs(m: usize, l: usize) -> Result<SeriesCoeffs> {
    let ball = coxeter_ball(m, l, DEFAULT_ELEMENT_CAP)?;
    let mut coeffs = vec![BigUint::zero(); l + 1];
    for (_, d) in &ball {
        coeffs[*d as usize] += 1u32;
    }
    Ok(SeriesCoeffs {
        coeffs,
        provenance: Provenance::Bfs,
    })
}

/// Coefficients of `(1 - x^{n+1}) / (1 - x)^{n+1}` up to `x^l`:
/// `C(d + n, n) - C(d - 1, n)`.
pub fn poincare_formula(n: usize, l: usize) -> Result<SeriesCoeffs> {
    if n < 1 {
        return Err(Error::InvalidConfig("rank must be at least 1".into()));
    }
    let nb = BigUint::from(n);
    let coeffs = (0..=l)
        .map(|d| {
            let head = binomial(BigUint::from(d + n), nb.clone());
            if d > n {
                head - binomial(BigUint::from(d - 1), nb.clone())
            } else {
                head
            }
        })
        .collect();
    Ok(SeriesCoeffs {
        coeffs,
        provenance: Provenance::Formula,
    })
}

/// `W(1/q) = (1 - q^{-(n+1)}) / (1 - q^{-1})^{n+1}`.
pub fn covolume_closed_form(n: usize, q: u64) -> Result<BigRational> {
    if q < 2 || n < 1 {
        return Err(Error::InvalidConfig(format!(
            "need n >= 1 and q >= 2, got n = {n}, q = {q}"
        )));
    }
    let x = BigRational::new(BigInt::one(), BigInt::from(q));
    let one = BigRational::one();
    let e = (n + 1) as i32;
    Ok((&one - x.pow(e)) / (&one - &x).pow(e))
}

/// Partial sums `Σ_{d ≤ D} coeff_d q^{-d}` for `D = 0..=l`.
pub fn covolume_partial_sums(n: usize, q: u64, l: usize) -> Result<Vec<BigRational>> {
    if q < 2 {
        return Err(Error::InvalidConfig(format!(
            "q must be at least 2, got {q}"
        )));
    }
    let series = poincare_formula(n, l)?;
    let qinv = BigRational::new(BigInt::one(), BigInt::from(q));
    let mut weight = BigRational::one();
    let mut acc = BigRational::zero();
    let mut out = Vec::with_capacity(l + 1);
    for c in series.coeffs {
        acc += BigRational::from_integer(BigInt::from(c)) * &weight;
        out.push(acc.clone());
        weight *= &qinv;
    }
    Ok(out)
}

/// `order`-th forward differences of an integer sequence.
pub fn finite_difference(seq: &[BigUint], order: usize) -> Vec<BigInt> {
    let mut cur: Vec<BigInt> = seq.iter().map(|c| BigInt::from(c.clone())).collect();
    for _ in 0..order {
        cur = cur.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    cur
}
