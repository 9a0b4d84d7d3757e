//! Lifting unitary transvections `T_v(λ)` to `G^τ`.
//!
//! `Φ_v(x) = x + F β(x, v) v` preserves the form exactly when
//! `σ(F) + tF = 0`; it specializes to `T_v(λ)` when `F(a) = λ`. Two
//! independent routes produce such an `F`: the constructive
//! `P → G → H → F` chain, and a bounded-window linear solve.

use super::form::{BasisVec, Form};
use super::lmat::LMat;
use crate::error::{Error, Result};
use crate::field::{linalg, Fe, FieldTower, RootKind};
use crate::laurent::{LPoly, LaurentRing};

/// How an `F` was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftRoute {
    Chain,
    /// The chain failed one of its internal identities; the linear solver was used.
    SolverFallback(String),
}

#[derive(Clone, Debug)]
pub struct FSolution {
    pub f: LPoly,
    pub route: LiftRoute,
}

#[derive(Clone, Debug)]
pub struct Lift {
    pub phi: LMat,
    pub f: LPoly,
    pub route: LiftRoute,
}

fn require_unitary(tower: &FieldTower) -> Result<()> {
    if tower.kind() != RootKind::Unitary {
        return Err(Error::InvalidConfig(
            "transvection lifts need a unitary root a".into(),
        ));
    }
    Ok(())
}

fn ring_of(tower: &FieldTower) -> LaurentRing {
    LaurentRing::new(tower.base().clone())
}

/// `σ(F) + tF`.
pub fn twisted_trace(ring: &LaurentRing, f: &LPoly) -> LPoly {
    ring.add(&f.sigma(), &ring.mul(&ring.t(), f))
}

/// Both defining conditions: `F(a) = λ` and `σ(F) + tF = 0`.
pub fn satisfies_lift_conditions(tower: &FieldTower, f: &LPoly, lambda: Fe) -> bool {
    let ring = ring_of(tower);
    twisted_trace(&ring, f).is_zero() && ring.eval(f, tower, tower.a()).ok() == Some(lambda)
}

/// The minimal polynomial of `a` over `F_q` as a Laurent polynomial.
pub fn min_poly_of_root(tower: &FieldTower) -> LPoly {
    LaurentRing::new(tower.base().clone()).from_poly(&tower.min_poly(tower.a()))
}

/// The `P → G → H → F` construction.
///
/// `P` has `P(a) = λ` with degree below `2s`; `G = (σ(P) + tP) / f_a` obeys
/// `σ(G) = t^{2s-1} G`; with `G = Σ_{i=-r}^{l} g_i t^i`,
/// `H = t^{-l-2s} + … + t^{-s-1} + (g_{-s+1} - 1) t^{-s} + … + (g_l - 1) t^{l-1}`
/// solves `σ(H) t^{-2s} + tH = G`, and `F = P - f_a H`.
pub fn solve_f_chain(tower: &FieldTower, lambda: Fe) -> Result<LPoly> {
    require_unitary(tower)?;
    if !tower.is_admissible(lambda) {
        return Err(Error::InadmissibleLambda);
    }
    let ring = ring_of(tower);
    let fld = ring.field();
    let s = tower.s() as i32;
    let broken = |what: &str| Error::InternalIdentity(what.to_string());

    let p = ring.from_poly(&tower.coordinates_in_root_powers(lambda)?);
    let fa = min_poly_of_root(tower);
    let g = ring
        .divide_exact(&twisted_trace(&ring, &p), &fa)
        .map_err(|_| broken("f_a does not divide σ(P) + tP"))?;
    if g.sigma() != g.shift(2 * s - 1) {
        return Err(broken("σ(G) != t^(2s-1) G"));
    }

    let h = if g.is_zero() {
        LPoly::zero()
    } else {
        let l = g.hi();
        let r = -g.lo();
        if r != 2 * s - 1 + l || l < -s + 1 {
            return Err(broken("G window does not match r = 2s - 1 + l"));
        }
        let lo = -l - 2 * s;
        let mut coeffs = Vec::with_capacity((2 * l + 2 * s) as usize);
        for _ in lo..=-s - 1 {
            coeffs.push(fld.one());
        }
        for m in -s + 1..=l {
            coeffs.push(fld.sub(g.coeff(m), fld.one()));
        }
        LPoly::from_coeffs(lo, coeffs)?
    };
    let lhs = ring.add(&h.sigma().shift(-2 * s), &h.shift(1));
    if lhs != g {
        return Err(broken("σ(H) t^(-2s) + tH != G"));
    }

    let f = ring.sub(&p, &ring.mul(&fa, &h));
    if !satisfies_lift_conditions(tower, &f, lambda) {
        return Err(broken("F fails F(a) = λ or σ(F) + tF = 0"));
    }
    Ok(f)
}

/// Independent route: solve for the coefficients of `F` on the window
/// `[-2s - L, L]`, `L = deg P`, as a linear system over `F_p`.
pub fn solve_f_linear(tower: &FieldTower, lambda: Fe) -> Result<LPoly> {
    require_unitary(tower)?;
    if !tower.is_admissible(lambda) {
        return Err(Error::InadmissibleLambda);
    }
    let base = tower.base();
    let ext = tower.ext();
    let p = ext.p();
    let e = base.k() as usize;
    let s = tower.s() as i32;
    let coords = tower.coordinates_in_root_powers(lambda)?;
    let deg_p = coords.iter().rposition(|c| !c.is_zero()).unwrap_or(0) as i32;
    let (lo, hi) = (-2 * s - deg_p, deg_p);
    let width = (hi - lo + 1) as usize;
    let unknowns = width * e;
    let var = |j: i32, d: usize| (j - lo) as usize * e + d;

    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();

    // F(a) = λ, one equation per F_p digit of the extension
    let kext = ext.k() as usize;
    let mut eval_rows = vec![vec![0u32; unknowns]; kext];
    for j in lo..=hi {
        let aj = ext.pow_i(tower.a(), j as i64);
        for d in 0..e {
            let mut unit = vec![0u32; e];
            unit[d] = 1;
            let col = ext.digits(ext.mul(aj, tower.embed(base.from_digits(&unit))));
            for (r, &c) in col.iter().enumerate() {
                eval_rows[r][var(j, d)] = c;
            }
        }
    }
    rows.extend(eval_rows);
    rhs.extend(ext.digits(lambda));

    // σ(F) + tF = 0: coefficient of t^m is c_{-m} + c_{m-1}
    for m in (-hi).min(lo + 1)..=(-lo).max(hi + 1) {
        for d in 0..e {
            let mut row = vec![0u32; unknowns];
            for j in [-m, m - 1] {
                if (lo..=hi).contains(&j) {
                    row[var(j, d)] = (row[var(j, d)] + 1) % p;
                }
            }
            if row.iter().any(|&c| c != 0) {
                rows.push(row);
                rhs.push(0);
            }
        }
    }

    let sol = linalg::solve_mod_p(&rows, &rhs, unknowns, p)
        .ok_or_else(|| Error::InternalIdentity("no F on the bounded window".into()))?;
    let coeffs = (0..width)
        .map(|i| base.from_digits(&sol[i * e..(i + 1) * e]))
        .collect();
    let f = LPoly::from_coeffs(lo, coeffs)?;
    debug_assert!(satisfies_lift_conditions(tower, &f, lambda));
    Ok(f)
}

/// The chain when it succeeds, otherwise the linear solver (flagged).
pub fn solve_f(tower: &FieldTower, lambda: Fe) -> Result<FSolution> {
    match solve_f_chain(tower, lambda) {
        Ok(f) => Ok(FSolution {
            f,
            route: LiftRoute::Chain,
        }),
        Err(Error::InternalIdentity(why)) => {
            let f = solve_f_linear(tower, lambda)?;
            Ok(FSolution {
                f,
                route: LiftRoute::SolverFallback(why),
            })
        }
        Err(e) => Err(e),
    }
}

/// `I + F · v β(·, v)` as a matrix: column `j` gains `F β(b_j, v)` in row `v`.
pub fn transvection_matrix(form: &Form, v: BasisVec, f: &LPoly) -> Result<LMat> {
    let ring = form.ring();
    let n = form.n();
    form.basis_vector(v)?;
    let vi = v.index(n);
    let mut phi = LMat::identity(ring, 2 * n);
    for j in 0..2 * n {
        let b = form.gram().get(j, vi);
        if b.is_zero() {
            continue;
        }
        let entry = ring.add(phi.get(vi, j), &ring.mul(f, b));
        phi.set(vi, j, entry);
    }
    Ok(phi)
}

/// `Φ_v` lifting `T_v(λ)`.
pub fn lift_transvection(form: &Form, v: BasisVec, lambda: Fe, tower: &FieldTower) -> Result<Lift> {
    if form.ring().field() != tower.base() {
        return Err(Error::InvalidConfig(
            "form and tower use different base fields".into(),
        ));
    }
    let FSolution { f, route } = solve_f(tower, lambda)?;
    let phi = transvection_matrix(form, v, &f)?;
    Ok(Lift { phi, f, route })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{base_field, unit_root};

    #[test]
    fn hand_solution_for_q2_s1() {
        let tw = unit_root(2, 1).unwrap();
        let a = tw.a();
        // F = 1 + t^{-1}
        let f = LPoly::from_coeffs(-1, vec![Fe::from_packed(1), Fe::from_packed(1)]).unwrap();
        assert!(satisfies_lift_conditions(&tw, &f, a));
        let chain = solve_f_chain(&tw, a).unwrap();
        assert!(satisfies_lift_conditions(&tw, &chain, a));
        let lin = solve_f_linear(&tw, a).unwrap();
        assert!(satisfies_lift_conditions(&tw, &lin, a));
    }

    #[test]
    fn zero_lambda_gives_identity_lift() {
        let tw = unit_root(3, 1).unwrap();
        let form = Form::new(2, LaurentRing::new(tw.base().clone())).unwrap();
        let lift = lift_transvection(&form, BasisVec::E(1), Fe::ZERO, &tw).unwrap();
        assert!(lift.f.is_zero());
        assert!(lift.phi.is_identity());
    }

    #[test]
    fn inadmissible_lambda_is_rejected() {
        let tw = unit_root(2, 1).unwrap();
        let bad = tw.ext().elements().find(|&l| !tw.is_admissible(l)).unwrap();
        assert!(matches!(solve_f(&tw, bad), Err(Error::InadmissibleLambda)));
        assert!(matches!(
            solve_f_linear(&tw, bad),
            Err(Error::InadmissibleLambda)
        ));
    }

    #[test]
    fn e1_lift_only_moves_f1() {
        let tw = unit_root(2, 1).unwrap();
        let form = Form::new(2, LaurentRing::new(tw.base().clone())).unwrap();
        let lift = lift_transvection(&form, BasisVec::E(1), tw.a(), &tw).unwrap();
        let (e1, f1) = (0, 2);
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c {
                    form.ring().one()
                } else if (r, c) == (e1, f1) {
                    lift.f.clone()
                } else {
                    LPoly::zero()
                };
                assert_eq!(lift.phi.get(r, c), &want, "({r},{c})");
            }
        }
    }

    #[test]
    fn chain_and_solver_agree_on_conditions_exhaustively() {
        for &(q, s) in &[(2u64, 1u32), (2, 2), (3, 1), (5, 1), (4, 1), (2, 3), (3, 2)] {
            let tw = unit_root(q, s).unwrap();
            for lambda in tw.admissible_params() {
                let chain = solve_f_chain(&tw, lambda).unwrap();
                let lin = solve_f_linear(&tw, lambda).unwrap();
                assert!(
                    satisfies_lift_conditions(&tw, &chain, lambda),
                    "chain q={q} s={s}"
                );
                assert!(
                    satisfies_lift_conditions(&tw, &lin, lambda),
                    "solver q={q} s={s}"
                );
            }
        }
    }

    #[test]
    fn lifts_are_in_gtau() {
        for &(q, s) in &[(2u64, 1u32), (3, 1), (2, 2)] {
            let tw = unit_root(q, s).unwrap();
            for n in 2..=3 {
                let form = Form::new(n, LaurentRing::new(tw.base().clone())).unwrap();
                for v in BasisVec::all(n) {
                    for lambda in tw.admissible_params() {
                        let lift = lift_transvection(&form, v, lambda, &tw).unwrap();
                        let rep = form.membership(&lift.phi);
                        assert!(rep.is_member(), "q={q} s={s} v={v}");
                    }
                }
            }
        }
    }

    #[test]
    fn form_defect_identity_for_arbitrary_f() {
        // β(x,y) - β(Φx,Φy) = -(σ(F) + tF) β(x,v) σ(β(y,v)); the sign is immaterial in char 2
        let base = base_field(3).unwrap();
        let ring = LaurentRing::new(base.clone());
        let form = Form::new(2, ring.clone()).unwrap();
        let f = LPoly::from_coeffs(
            -1,
            vec![Fe::from_packed(2), Fe::from_packed(1), Fe::from_packed(1)],
        )
        .unwrap();
        for v in BasisVec::all(2) {
            let phi = transvection_matrix(&form, v, &f).unwrap();
            let vv = form.basis_vector(v).unwrap();
            for bx in BasisVec::all(2) {
                for by in BasisVec::all(2) {
                    let x = form.basis_vector(bx).unwrap();
                    let y = form.basis_vector(by).unwrap();
                    let apply = |w: &[LPoly]| -> Vec<LPoly> {
                        (0..4)
                            .map(|r| {
                                (0..4).fold(LPoly::zero(), |acc, c| {
                                    ring.add(&acc, &ring.mul(phi.get(r, c), &w[c]))
                                })
                            })
                            .collect()
                    };
                    let defect = ring.sub(
                        &form.value(&x, &y).unwrap(),
                        &form.value(&apply(&x), &apply(&y)).unwrap(),
                    );
                    let expect = ring.neg(&ring.mul(
                        &twisted_trace(&ring, &f),
                        &ring.mul(
                            &form.value(&x, &vv).unwrap(),
                            &form.value(&y, &vv).unwrap().sigma(),
                        ),
                    ));
                    assert_eq!(defect, expect, "v={v} x={bx} y={by}");
                }
            }
        }
    }

    #[test]
    fn lifts_commute_when_vectors_are_orthogonal() {
        let tw = unit_root(3, 1).unwrap();
        let form = Form::new(2, LaurentRing::new(tw.base().clone())).unwrap();
        let r = form.ring();
        let lambda = tw.admissible_params()[1];
        let pairs = [
            (BasisVec::E(1), BasisVec::E(2)),
            (BasisVec::F(1), BasisVec::F(2)),
            (BasisVec::E(1), BasisVec::F(2)),
        ];
        for (u, v) in pairs {
            let a = lift_transvection(&form, u, lambda, &tw).unwrap().phi;
            let b = lift_transvection(&form, v, lambda, &tw).unwrap().phi;
            assert_eq!(a.mul(&b, r), b.mul(&a, r), "{u} {v}");
        }
    }

    #[test]
    fn split_towers_are_rejected() {
        let tw = crate::field::FieldTower::split(3, RootKind::MinusOne).unwrap();
        assert!(solve_f(&tw, Fe::ZERO).is_err());
    }
}
