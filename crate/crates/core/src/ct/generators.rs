//! The shift element `s`, the block subgroup `L_0 ≅ SL_2(F_q)`, and the
//! symmetric generating set built from them.

use std::collections::HashSet;

use super::form::Form;
use super::lmat::LMat;
use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::laurent::LPoly;

/// A 2×2 matrix over `F_q`, row-major.
pub type Mat2 = [[Fe; 2]; 2];

fn mat2_mul(f: &FieldCtx, a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[f.zero(); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = f.add(f.mul(a[r][0], b[0][c]), f.mul(a[r][1], b[1][c]));
        }
    }
    out
}

fn mat2_det(f: &FieldCtx, a: &Mat2) -> Fe {
    f.sub(f.mul(a[0][0], a[1][1]), f.mul(a[0][1], a[1][0]))
}

fn mat2_identity(f: &FieldCtx) -> Mat2 {
    [[f.one(), f.zero()], [f.zero(), f.one()]]
}

/// Inverse of a determinant-1 matrix.
pub fn mat2_inverse(f: &FieldCtx, a: &Mat2) -> Mat2 {
    [[a[1][1], f.neg(a[0][1])], [f.neg(a[1][0]), a[0][0]]]
}

/// `SL_2(F_q)` in lexicographic order of `(a, b, c, d)` with packed entries.
pub fn sl2_elements(f: &FieldCtx) -> Vec<Mat2> {
    let els: Vec<Fe> = f.elements().collect();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    let m = [[a, b], [c, d]];
                    if mat2_det(f, &m) == f.one() {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Order of the subgroup of `SL_2(F_q)` generated by `gens`, stopping early once `cap` is reached.
pub fn sl2_subgroup_order(f: &FieldCtx, gens: &[Mat2], cap: usize) -> usize {
    let id = mat2_identity(f);
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut frontier = vec![id];
    while let Some(m) = frontier.pop() {
        for g in gens {
            let next = mat2_mul(f, &m, g);
            if seen.insert(next) {
                if seen.len() >= cap {
                    return seen.len();
                }
                frontier.push(next);
            }
        }
    }
    seen.len()
}

/// The shift `s`: `e_i ↦ e_{i+1}`, `f_i ↦ f_{i+1}` for `i < n`, `e_n ↦ f_1`, `f_n ↦ t^{-1} e_1`.
pub fn shift_generator(form: &Form) -> Result<LMat> {
    let n = form.n();
    if n < 2 {
        return Err(Error::InvalidHalfRank(n));
    }
    let r = form.ring();
    let mut s = LMat::zero(2 * n);
    for i in 0..n - 1 {
        s.set(i + 1, i, r.one());
        s.set(n + i + 1, n + i, r.one());
    }
    s.set(n, n - 1, r.one());
    s.set(0, 2 * n - 1, LPoly::monomial(r.field().one(), -1));
    Ok(s)
}

/// `diag(A, I_{n-2}, ᵗA^{-1}, I_{n-2})` for `A ∈ SL_2(F_q)`.
pub fn l0_embed(form: &Form, a: &Mat2) -> Result<LMat> {
    let f = form.ring().field();
    if mat2_det(f, a) != f.one() {
        return Err(Error::DeterminantNotOne);
    }
    let n = form.n();
    if n < 2 {
        return Err(Error::InvalidHalfRank(n));
    }
    let r = form.ring();
    let inv = mat2_inverse(f, a);
    let mut g = LMat::identity(r, 2 * n);
    for i in 0..2 {
        for j in 0..2 {
            g.set(i, j, r.constant(a[i][j]));
            // inverse transpose on span(f_1, f_2)
            g.set(n + i, n + j, r.constant(inv[j][i]));
        }
    }
    Ok(g)
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub mat: LMat,
}

/// A symmetric generating set for `G^τ`.
#[derive(Clone, Debug)]
pub struct GenSet {
    pub gens: Vec<Generator>,
    /// The `SL_2` pair `(x, y)` generating `L_0`.
    pub x: Mat2,
    pub y: Mat2,
    /// `x` is an involution; otherwise the six-element fallback was used.
    pub involution: bool,
    pub provenance: String,
}

impl GenSet {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.gens.iter().map(|g| g.label.as_str()).collect()
    }
}

/// First pair `(x, y)` in lexicographic order generating `SL_2(F_q)`, with `x`
/// a non-identity involution when one exists.
pub fn find_sl2_pair(f: &FieldCtx) -> Result<(Mat2, Mat2, bool)> {
    let q = f.size() as usize;
    let order = q * (q * q - 1);
    let all = sl2_elements(f);
    debug_assert_eq!(all.len(), order);
    let id = mat2_identity(f);
    let generates = |x: &Mat2, y: &Mat2| sl2_subgroup_order(f, &[*x, *y], order) == order;

    let involutions: Vec<&Mat2> = all
        .iter()
        .filter(|m| **m != id && mat2_mul(f, m, m) == id)
        .collect();
    for x in &involutions {
        if let Some(y) = all.iter().find(|y| **y != id && generates(x, y)) {
            return Ok((**x, *y, true));
        }
    }
    for x in all.iter().filter(|m| **m != id) {
        if let Some(y) = all.iter().find(|y| **y != id && generates(x, y)) {
            return Ok((*x, *y, false));
        }
    }
    Err(Error::SearchExhausted(format!(
        "no generating pair for SL_2({q})"
    )))
}

/// `S = {x, y, y^{-1}, s, s^{-1}}`, or `{x, x^{-1}, y, y^{-1}, s, s^{-1}}` when
/// `SL_2(F_q)` has no non-identity involution that 2-generates it.
pub fn build_generating_set(form: &Form) -> Result<GenSet> {
    let n = form.n();
    if n < 2 {
        return Err(Error::InvalidHalfRank(n));
    }
    let f = form.ring().field();
    let (x, y, involution) = find_sl2_pair(f)?;
    let s = shift_generator(form)?;
    let s_inv = form.inverse(&s)?;
    let mut cands: Vec<(String, LMat)> = vec![("x".into(), l0_embed(form, &x)?)];
    if !involution {
        cands.push(("x^-1".into(), l0_embed(form, &mat2_inverse(f, &x))?));
    }
    cands.push(("y".into(), l0_embed(form, &y)?));
    cands.push(("y^-1".into(), l0_embed(form, &mat2_inverse(f, &y))?));
    cands.push(("s".into(), s));
    cands.push(("s^-1".into(), s_inv));

    let mut gens: Vec<Generator> = Vec::new();
    for (label, mat) in cands {
        if mat.is_identity() {
            return Err(Error::InternalIdentity(format!(
                "generator {label} is the identity"
            )));
        }
        if !gens.iter().any(|g| g.mat == mat) {
            gens.push(Generator { label, mat });
        }
    }
    let provenance =
        format!(
        "lexicographic search over SL_2({}): {} x with {} y; L_0 embedded in rows/cols e1,e2,f1,f2",
        f.size(),
        if involution { "first involution" } else { "first element (no involution generates)" },
        "first generating"
    );
    Ok(GenSet {
        gens,
        x,
        y,
        involution,
        provenance,
    })
}
