use crate::error::{Error, Result};
use crate::laurent::{LPoly, LaurentRing};

/// Square matrix over the Laurent ring, row-major.
///
/// Columns are images of basis vectors: column `j` holds the coordinates of
/// `g(b_j)` in the basis `(e_1..e_n, f_1..f_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LMat {
    dim: usize,
    entries: Vec<LPoly>,
}

impl LMat {
    pub fn zero(dim: usize) -> Self {
        LMat {
            dim,
            entries: vec![LPoly::zero(); dim * dim],
        }
    }

    pub fn identity(ring: &LaurentRing, dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LPoly>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(LMat { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &LPoly {
        &self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LPoly) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn entries(&self) -> &[LPoly] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Entrywise `σ`.
    pub fn sigma(&self) -> Self {
        LMat {
            dim: self.dim,
            entries: self.entries.iter().map(LPoly::sigma).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|r| {
            (0..self.dim).all(|c| {
                let e = self.get(r, c);
                if r == c {
                    e.as_constant().is_some_and(|x| x.packed() == 1)
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, other: &LMat, ring: &LaurentRing) -> LMat {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = Self::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = ring.mul(a, b);
                    let cur = ring.add(out.get(r, c), &prod);
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination; every division is exact.
    pub fn det(&self, ring: &LaurentRing) -> LPoly {
        let n = self.dim;
        if n == 0 {
            return ring.one();
        }
        let mut m: Vec<Vec<LPoly>> = (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = ring.one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return LPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num =
                        ring.sub(&ring.mul(&m[k][k], &m[i][j]), &ring.mul(&m[i][k], &m[k][j]));
                    m[i][j] = ring
                        .divide_exact(&num, &prev)
                        .expect("Bareiss division is exact");
                }
                m[i][k] = LPoly::zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            ring.neg(&d)
        } else {
            d
        }
    }

    /// Text form: one row per line, entries in Laurent text form separated by `; `.
    pub fn format(&self, ring: &LaurentRing) -> String {
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| ring.format(self.get(r, c)))
                    .collect::<Vec<_>>()
                    .join("; ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}
