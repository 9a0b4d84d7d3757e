//! Evaluation `ε_a` of Laurent matrices at the specialization point, the
//! evaluated form `B̃`, finite transvections and classical group orders.

use num_bigint::BigUint;
use num_traits::One;

use crate::ct::{BasisVec, Form, LMat};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx, FieldTower, RootKind};

/// Square matrix over the extension field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FMat {
    dim: usize,
    entries: Vec<Fe>,
}

impl FMat {
    pub fn zero(dim: usize) -> Self {
        FMat {
            dim,
            entries: vec![Fe::ZERO; dim * dim],
        }
    }

    pub fn identity(field: &FieldCtx, dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Fe>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(FMat { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn entries(&self) -> &[Fe] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> Self {
        FMat {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, field: &FieldCtx, c: Fe) -> Self {
        self.map(|x| field.mul(c, x))
    }

    pub fn is_identity(&self, field: &FieldCtx) -> bool {
        *self == Self::identity(field, self.dim)
    }

    pub fn mul(&self, other: &FMat, field: &FieldCtx) -> FMat {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = Self::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                for (c, &b) in row.iter().enumerate() {
                    if !b.is_zero() {
                        let cur = out.entries[r * n + c];
                        out.entries[r * n + c] = field.add(cur, field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Row-reduces a copy; returns the determinant and, if invertible, the inverse.
    fn eliminate(&self, field: &FieldCtx, want_inverse: bool) -> (Fe, Option<FMat>) {
        let n = self.dim;
        let mut m = self.clone();
        let mut inv = Self::identity(field, n);
        let mut det = field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return (field.zero(), None);
            };
            if piv != col {
                for c in 0..n {
                    m.entries.swap(piv * n + c, col * n + c);
                    inv.entries.swap(piv * n + c, col * n + c);
                }
                det = field.neg(det);
            }
            let pv = m.get(col, col);
            det = field.mul(det, pv);
            let pinv = field.inv(pv).expect("pivot is nonzero");
            for c in 0..n {
                m.set(col, c, field.mul(m.get(col, c), pinv));
                inv.set(col, c, field.mul(inv.get(col, c), pinv));
            }
            for r in 0..n {
                let factor = m.get(r, col);
                if r == col || factor.is_zero() {
                    continue;
                }
                for c in 0..n {
                    m.set(
                        r,
                        c,
                        field.sub(m.get(r, c), field.mul(factor, m.get(col, c))),
                    );
                    if want_inverse {
                        inv.set(
                            r,
                            c,
                            field.sub(inv.get(r, c), field.mul(factor, inv.get(col, c))),
                        );
                    }
                }
            }
        }
        (det, want_inverse.then_some(inv))
    }

    pub fn det(&self, field: &FieldCtx) -> Fe {
        self.eliminate(field, false).0
    }

    pub fn inverse(&self, field: &FieldCtx) -> Result<FMat> {
        self.eliminate(field, true).1.ok_or(Error::Singular)
    }

    /// Rows joined by newlines, entries in digit-vector form separated by spaces.
    pub fn format(&self, field: &FieldCtx) -> String {
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| field.format(self.get(r, c)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Everything needed to interpret a specialized matrix: the tower, `n`, and `B̃`.
#[derive(Clone, Debug)]
pub struct SpecContext {
    n: usize,
    tower: FieldTower,
    gram: FMat,
}

impl SpecContext {
    pub fn new(n: usize, tower: FieldTower) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidHalfRank(n));
        }
        let ext = tower.ext();
        let mut gram = FMat::zero(2 * n);
        for i in 0..n {
            gram.set(i, n + i, tower.a());
            gram.set(n + i, i, ext.one());
        }
        Ok(SpecContext { n, tower, gram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn field(&self) -> &FieldCtx {
        self.tower.ext()
    }

    /// The evaluated Gram matrix `B̃`.
    pub fn gram(&self) -> &FMat {
        &self.gram
    }

    pub fn identity(&self) -> FMat {
        FMat::identity(self.field(), self.dim())
    }

    /// Canonical header: little-endian u32 fields
    /// `n, q, s, p, k, |modulus|, modulus…, a, kind, B̃ entries…`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let ext = self.field();
        let mut words: Vec<u32> = vec![
            self.n as u32,
            self.tower.q(),
            self.tower.s(),
            ext.p(),
            ext.k(),
        ];
        words.push(ext.modulus().len() as u32);
        words.extend_from_slice(ext.modulus());
        words.push(self.tower.a().packed());
        words.push(match self.tower.kind() {
            RootKind::Unitary => 0,
            RootKind::PlusOne => 1,
            RootKind::MinusOne => 2,
        });
        words.extend(self.gram.entries().iter().map(|x| x.packed()));
        words.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    /// `m ↦ conj(m)` entrywise.
    pub fn conj(&self, m: &FMat) -> FMat {
        m.map(|x| self.tower.conj(x))
    }

    fn check_dim(&self, m: &FMat) -> Result<()> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: m.dim(),
            });
        }
        Ok(())
    }

    /// `mᵀ B̃ conj(m) = B̃`. For `a = ±1` conjugation is trivial and this is the bilinear check.
    pub fn is_unitary(&self, m: &FMat) -> Result<bool> {
        self.check_dim(m)?;
        let f = self.field();
        Ok(m.transpose().mul(&self.gram, f).mul(&self.conj(m), f) == self.gram)
    }

    pub fn det(&self, m: &FMat) -> Fe {
        m.det(self.field())
    }

    /// `T_v(λ)`: row `v` of column `j` gains `λ β̃(b_j, v)`.
    pub fn finite_transvection(&self, v: BasisVec, lambda: Fe) -> Result<FMat> {
        if !self.tower.is_admissible(lambda) {
            return Err(Error::InadmissibleLambda);
        }
        let n = self.n;
        if !BasisVec::all(n).any(|b| b == v) {
            return Err(Error::InvalidConfig(format!(
                "basis vector {v} out of range for n = {n}"
            )));
        }
        let f = self.field();
        let vi = v.index(n);
        let mut m = self.identity();
        for j in 0..2 * n {
            let b = self.gram.get(j, vi);
            if !b.is_zero() {
                m.set(vi, j, f.add(m.get(vi, j), f.mul(lambda, b)));
            }
        }
        Ok(m)
    }

    /// A scalar `c` with `c^{q^s - 1} = a` making `c B̃` hermitian (`(cB̃)ᵀ = conj(cB̃)`).
    pub fn hermitian_rescaling(&self) -> Option<Fe> {
        let f = self.field();
        let e = self.tower.qs() - 1;
        f.elements().filter(|c| !c.is_zero()).find(|&c| {
            if f.pow(c, e) != self.tower.a() {
                return false;
            }
            let h = self.gram.scale(f, c);
            h.transpose() == self.conj(&h)
        })
    }
}

/// `ε_a(g)`, entrywise.
pub fn specialize(g: &LMat, ctx: &SpecContext) -> Result<FMat> {
    if g.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            got: g.dim(),
        });
    }
    let ring = crate::laurent::LaurentRing::new(ctx.tower.base().clone());
    let tower = ctx.tower();
    let entries = g
        .entries()
        .iter()
        .map(|e| ring.eval(e, tower, tower.a()))
        .collect::<Result<Vec<_>>>()?;
    FMat::from_entries(g.dim(), entries)
}

/// Specializes a whole form's worth of generators, checking the form matches.
pub fn specialize_all<'a>(
    gens: impl IntoIterator<Item = &'a LMat>,
    form: &Form,
    ctx: &SpecContext,
) -> Result<Vec<FMat>> {
    if form.n() != ctx.n() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            got: form.dim(),
        });
    }
    gens.into_iter().map(|g| specialize(g, ctx)).collect()
}

/// The form obtained at `a = ±1` and whether a matrix preserves it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearReport {
    pub kind: RootKind,
    pub alternating: bool,
    pub symmetric: bool,
    pub preserved: bool,
}

/// At `a = -1` the evaluated form is alternating, at `a = 1` symmetric; checks `mᵀ B̃ m = B̃`.
pub fn bilinear_specialize_check(g: &LMat, ctx: &SpecContext) -> Result<BilinearReport> {
    let kind = ctx.tower().kind();
    if kind == RootKind::Unitary {
        return Err(Error::InvalidConfig(
            "bilinear check needs a = +1 or a = -1".into(),
        ));
    }
    let f = ctx.field();
    let b = ctx.gram();
    let d = ctx.dim();
    let mut alternating = true;
    let mut symmetric = true;
    for r in 0..d {
        if !b.get(r, r).is_zero() {
            alternating = false;
        }
        for c in 0..d {
            if b.get(r, c) != f.neg(b.get(c, r)) {
                alternating = false;
            }
            if b.get(r, c) != b.get(c, r) {
                symmetric = false;
            }
        }
    }
    let m = specialize(g, ctx)?;
    let preserved = m.transpose().mul(b, f).mul(&m, f) == *b;
    Ok(BilinearReport {
        kind,
        alternating,
        symmetric,
        preserved,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Family {
    SU,
    GU,
    Sp,
}

/// Order of `SU_m(q̂)`, `GU_m(q̂)` or `Sp_m(q̂)`.
pub fn classical_order(family: Family, m: u32, qh: u64) -> Result<BigUint> {
    if m < 1 || qh < 2 {
        return Err(Error::InvalidConfig(format!(
            "classical order needs m >= 1 and q >= 2, got m = {m}, q = {qh}"
        )));
    }
    let q = BigUint::from(qh);
    let pow = |e: u32| q.pow(e);
    match family {
        Family::SU | Family::GU => {
            let mut order = pow(m * (m - 1) / 2);
            for i in 2..=m {
                // q^i - (-1)^i
                order *= if i % 2 == 0 {
                    pow(i) - 1u32
                } else {
                    pow(i) + 1u32
                };
            }
            if family == Family::GU {
                order *= qh + 1;
            }
            Ok(order)
        }
        Family::Sp => {
            if !m.is_multiple_of(2) {
                return Err(Error::InvalidConfig(format!(
                    "symplectic groups need even dimension, got {m}"
                )));
            }
            let h = m / 2;
            let mut order = pow(h * h);
            for i in 1..=h {
                order *= pow(2 * i) - BigUint::one();
            }
            Ok(order)
        }
    }
}
