use super::lmat::LMat;
use crate::error::{Error, Result};
use crate::field::FieldTower;
use crate::laurent::{LPoly, LaurentRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triviality {
    /// The `s ≤ s_max` at which `g` evaluates to the identity.
    pub trivial: Vec<u32>,
    /// Upper bound on the number of nonzero `a` with `ε_a(g) = I`.
    pub root_bound: usize,
}

/// Nonzero entries of `g - I`.
fn defect_entries(g: &LMat, ring: &LaurentRing) -> Vec<LPoly> {
    let d = g.dim();
    let mut out = Vec::new();
    for r in 0..d {
        for c in 0..d {
            let e = if r == c {
                ring.sub(g.get(r, c), &ring.one())
            } else {
                g.get(r, c).clone()
            };
            if !e.is_zero() {
                out.push(e);
            }
        }
    }
    out
}

/// Evaluates `g` at the root of order `q^s + 1` for `s = 1..=s_max`.
pub fn trivial_specializations(
    g: &LMat,
    ring: &LaurentRing,
    q: u64,
    s_max: u32,
) -> Result<Triviality> {
    let defects = defect_entries(g, ring);
    if defects.is_empty() {
        return Err(Error::IdentityElement);
    }
    let root_bound = defects.iter().map(LPoly::support_width).min().unwrap_or(0);
    let mut trivial = Vec::new();
    for s in 1..=s_max {
        let tower = FieldTower::unitary(q, s)?;
        let mut all_vanish = true;
        for e in &defects {
            if !ring.eval(e, &tower, tower.a())?.is_zero() {
                all_vanish = false;
                break;
            }
        }
        if all_vanish {
            trivial.push(s);
        }
    }
    Ok(Triviality {
        trivial,
        root_bound,
    })
}
