use std::fmt;
use std::str::FromStr;

use super::lmat::LMat;
use crate::error::{Error, Result};
use crate::laurent::{LPoly, LaurentRing};

/// One of the basis vectors `e_1..e_n, f_1..f_n` (1-based index in text form).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisVec {
    E(usize),
    F(usize),
}

impl BasisVec {
    /// Position in the fixed basis order `(e_1..e_n, f_1..f_n)`.
    pub fn index(self, n: usize) -> usize {
        match self {
            BasisVec::E(i) => i - 1,
            BasisVec::F(i) => n + i - 1,
        }
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        if idx < n {
            BasisVec::E(idx + 1)
        } else {
            BasisVec::F(idx - n + 1)
        }
    }

    /// All `2n` basis vectors in basis order.
    pub fn all(n: usize) -> impl Iterator<Item = BasisVec> {
        (0..2 * n).map(move |i| BasisVec::from_index(i, n))
    }

    fn check(self, n: usize) -> Result<()> {
        let i = match self {
            BasisVec::E(i) | BasisVec::F(i) => i,
        };
        if i == 0 || i > n {
            return Err(Error::InvalidConfig(format!(
                "basis vector {self} out of range for n = {n}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for BasisVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisVec::E(i) => write!(f, "e{i}"),
            BasisVec::F(i) => write!(f, "f{i}"),
        }
    }
}

impl FromStr for BasisVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("`{s}` is not a basis vector like e1 or f2"));
        let (head, tail) = s.split_at(s.len().min(1));
        let i: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "e" => Ok(BasisVec::E(i)),
            "f" => Ok(BasisVec::F(i)),
            _ => Err(bad()),
        }
    }
}

/// The σ-sesquilinear form with `β(e_i, f_j) = t δ_ij`, `β(f_i, e_j) = δ_ij`
/// and all other basis pairings zero.
#[derive(Clone, Debug)]
pub struct Form {
    n: usize,
    ring: LaurentRing,
    gram: LMat,
}

/// Outcome of the `G^τ` membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub form_preserving: bool,
    pub det_one: bool,
    pub det: LPoly,
}

impl MembershipReport {
    /// Literal membership: form preserving with determinant 1.
    pub fn is_member(&self) -> bool {
        self.form_preserving && self.det_one
    }
}

impl Form {
    pub fn new(n: usize, ring: LaurentRing) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidHalfRank(n));
        }
        let mut gram = LMat::zero(2 * n);
        for i in 0..n {
            gram.set(i, n + i, ring.t());
            gram.set(n + i, i, ring.one());
        }
        Ok(Form { n, ring, gram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn ring(&self) -> &LaurentRing {
        &self.ring
    }

    pub fn gram(&self) -> &LMat {
        &self.gram
    }

    pub fn basis_vector(&self, v: BasisVec) -> Result<Vec<LPoly>> {
        v.check(self.n)?;
        let mut x = vec![LPoly::zero(); self.dim()];
        x[v.index(self.n)] = self.ring.one();
        Ok(x)
    }

    /// `β(x, y) = xᵀ B σ(y)`.
    pub fn value(&self, x: &[LPoly], y: &[LPoly]) -> Result<LPoly> {
        let d = self.dim();
        for v in [x, y] {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
        }
        let r = &self.ring;
        let mut acc = LPoly::zero();
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                let b = self.gram.get(i, j);
                if b.is_zero() || y[j].is_zero() {
                    continue;
                }
                acc = r.add(&acc, &r.mul(&r.mul(&x[i], b), &y[j].sigma()));
            }
        }
        Ok(acc)
    }

    fn check_dim(&self, g: &LMat) -> Result<()> {
        if g.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: g.dim(),
            });
        }
        Ok(())
    }

    /// `gᵀ B σ(g) = B`.
    pub fn is_form_preserving(&self, g: &LMat) -> bool {
        if g.dim() != self.dim() {
            return false;
        }
        let r = &self.ring;
        g.transpose().mul(&self.gram, r).mul(&g.sigma(), r) == self.gram
    }

    pub fn membership(&self, g: &LMat) -> MembershipReport {
        let form_preserving = self.is_form_preserving(g);
        let det = g.det(&self.ring);
        let det_one = det == self.ring.one();
        MembershipReport {
            form_preserving,
            det_one,
            det,
        }
    }

    /// Inverse of a form-preserving matrix: `g^{-1} = σ(B)^{-1} σ(g)ᵀ σ(B)`.
    pub fn inverse(&self, g: &LMat) -> Result<LMat> {
        self.check_dim(g)?;
        if !self.is_form_preserving(g) {
            return Err(Error::NotFormPreserving);
        }
        let r = &self.ring;
        let n = self.n;
        let mut sb_inv = LMat::zero(2 * n);
        for i in 0..n {
            sb_inv.set(i, n + i, r.one());
            sb_inv.set(n + i, i, r.t());
        }
        let inv = sb_inv
            .mul(&g.sigma().transpose(), r)
            .mul(&self.gram.sigma(), r);
        debug_assert!(inv.mul(g, r).is_identity());
        Ok(inv)
    }
}
