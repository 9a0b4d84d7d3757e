//! Laurent polynomials `F_q[t, t^{-1}]` with the involution `σ: t ↦ t^{-1}`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx, FieldTower};

/// Largest absolute exponent a polynomial may carry.
pub const MAX_EXPONENT: i64 = 1_000_000;

/// A Laurent polynomial stored densely over its support window.
///
/// The zero polynomial has an empty coefficient vector and `lo = 0`; every
/// other value has nonzero coefficients at both ends of the window.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LPoly {
    lo: i32,
    coeffs: Vec<Fe>,
}

fn check_window(lo: i64, hi: i64) -> Result<()> {
    if lo < -MAX_EXPONENT || hi > MAX_EXPONENT {
        return Err(Error::WindowOverflow { lo, hi });
    }
    Ok(())
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly::default()
    }

    /// `c · t^e`.
    pub fn monomial(c: Fe, e: i32) -> Self {
        Self::from_coeffs(e, vec![c]).expect("single exponent within range")
    }

    /// Builds `Σ coeffs[i] t^{lo+i}` and normalizes the window.
    pub fn from_coeffs(lo: i32, coeffs: Vec<Fe>) -> Result<Self> {
        let mut f = LPoly { lo, coeffs };
        f.normalize();
        if !f.is_zero() {
            check_window(f.lo as i64, f.hi() as i64)?;
        }
        Ok(f)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn hi(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.lo + self.coeffs.len() as i32 - 1
        }
    }

    /// `hi - lo`; bounds the number of nonzero roots of a nonzero polynomial.
    pub fn support_width(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, e: i32) -> Fe {
        let idx = e as i64 - self.lo as i64;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Fe::ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Fe)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.lo + i as i32, c))
    }

    /// `σ(f)`: the coefficient at `t^i` moves to `t^{-i}`.
    pub fn sigma(&self) -> Self {
        if self.is_zero() {
            return LPoly::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LPoly {
            lo: -self.hi(),
            coeffs,
        }
    }

    /// `t^e · f`.
    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return LPoly::zero();
        }
        let lo = self.lo as i64 + e as i64;
        let hi = self.hi() as i64 + e as i64;
        check_window(lo, hi).expect("Laurent exponent window overflow");
        LPoly {
            lo: lo as i32,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Whether this is a nonzero constant.
    pub fn as_constant(&self) -> Option<Fe> {
        match (self.lo, self.coeffs.as_slice()) {
            (_, []) => Some(Fe::ZERO),
            (0, [c]) => Some(*c),
            _ => None,
        }
    }
}

/// Arithmetic in `F_q[t, t^{-1}]` for a fixed coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentRing {
    field: FieldCtx,
}

impl LaurentRing {
    pub fn new(field: FieldCtx) -> Self {
        LaurentRing { field }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn one(&self) -> LPoly {
        LPoly::monomial(self.field.one(), 0)
    }

    /// The variable `t`.
    pub fn t(&self) -> LPoly {
        LPoly::monomial(self.field.one(), 1)
    }

    pub fn constant(&self, c: Fe) -> LPoly {
        LPoly::monomial(c, 0)
    }

    /// Ordinary polynomial `Σ coeffs[i] t^i`.
    pub fn from_poly(&self, coeffs: &[Fe]) -> LPoly {
        LPoly::from_coeffs(0, coeffs.to_vec()).expect("polynomial degree within range")
    }

    pub fn add(&self, f: &LPoly, g: &LPoly) -> LPoly {
        if f.is_zero() {
            return g.clone();
        }
        if g.is_zero() {
            return f.clone();
        }
        let lo = f.lo.min(g.lo);
        let hi = f.hi().max(g.hi());
        let coeffs = (lo..=hi)
            .map(|e| self.field.add(f.coeff(e), g.coeff(e)))
            .collect();
        LPoly::from_coeffs(lo, coeffs).expect("sum stays within operand windows")
    }

    pub fn neg(&self, f: &LPoly) -> LPoly {
        LPoly {
            lo: f.lo,
            coeffs: f.coeffs.iter().map(|&c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, f: &LPoly, g: &LPoly) -> LPoly {
        self.add(f, &self.neg(g))
    }

    pub fn scale(&self, c: Fe, f: &LPoly) -> LPoly {
        let coeffs = f.coeffs.iter().map(|&x| self.field.mul(c, x)).collect();
        LPoly::from_coeffs(f.lo, coeffs).expect("scaling keeps the window")
    }

    pub fn mul(&self, f: &LPoly, g: &LPoly) -> LPoly {
        if f.is_zero() || g.is_zero() {
            return LPoly::zero();
        }
        let lo = f.lo as i64 + g.lo as i64;
        let hi = f.hi() as i64 + g.hi() as i64;
        check_window(lo, hi).expect("Laurent exponent window overflow");
        let mut coeffs = vec![Fe::ZERO; f.coeffs.len() + g.coeffs.len() - 1];
        for (i, &a) in f.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                coeffs[i + j] = self.field.add(coeffs[i + j], self.field.mul(a, b));
            }
        }
        LPoly::from_coeffs(lo as i32, coeffs).expect("window checked above")
    }

    /// Exact quotient `f / g` in the Laurent ring.
    ///
    /// Units are the monomials `c t^e`, so after stripping powers of `t` this
    /// reduces to polynomial long division with zero remainder.
    pub fn divide_exact(&self, f: &LPoly, g: &LPoly) -> Result<LPoly> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if f.is_zero() {
            return Ok(LPoly::zero());
        }
        let fld = &self.field;
        let mut rem: Vec<Fe> = f.coeffs.clone();
        let dg = g.coeffs.len() - 1;
        if rem.len() < dg + 1 {
            return Err(Error::NotDivisible);
        }
        let lead_inv = fld
            .inv(g.coeffs[dg])
            .expect("normalized leading coefficient");
        let mut quot = vec![Fe::ZERO; rem.len() - dg];
        for d in (dg..rem.len()).rev() {
            let c = rem[d];
            if c.is_zero() {
                continue;
            }
            let factor = fld.mul(c, lead_inv);
            quot[d - dg] = factor;
            for (j, &gc) in g.coeffs.iter().enumerate() {
                rem[d - dg + j] = fld.sub(rem[d - dg + j], fld.mul(factor, gc));
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        LPoly::from_coeffs(f.lo - g.lo, quot)
    }

    /// `ε_a(f) = f(a)` for `a` in the tower's extension field.
    pub fn eval(&self, f: &LPoly, tower: &FieldTower, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::ZeroEvaluationPoint);
        }
        debug_assert_eq!(tower.base(), &self.field);
        let ext = tower.ext();
        let mut acc = ext.zero();
        for &c in f.coeffs.iter().rev() {
            acc = ext.add(ext.mul(acc, a), tower.embed(c));
        }
        Ok(ext.mul(acc, ext.pow_i(a, f.lo as i64)))
    }

    /// Text form: `c*t^e` terms in increasing exponent order joined by ` + `.
    pub fn format(&self, f: &LPoly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in f.terms().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let coeff = if self.field.k() == 1 {
                c.packed().to_string()
            } else {
                self.field.format(c)
            };
            write!(out, "{coeff}*t^{e}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::unit_root;
    use proptest::prelude::*;

    fn ring(q: u64) -> LaurentRing {
        LaurentRing::new(crate::field::base_field(q).unwrap())
    }

    fn lp(lo: i32, c: &[u32]) -> LPoly {
        LPoly::from_coeffs(lo, c.iter().map(|&x| Fe::from_packed(x)).collect()).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let r = ring(2);
        assert_eq!(r.t().sigma(), LPoly::monomial(Fe::from_packed(1), -1));
        assert_eq!(r.one().sigma(), r.one());
        let fa = lp(0, &[1, 1, 1]);
        assert_eq!(fa.sigma(), fa.shift(-2));
    }

    #[test]
    fn eval_examples() {
        let r = ring(2);
        let tw = unit_root(2, 1).unwrap();
        let a = tw.a();
        let ext = tw.ext();
        assert_eq!(r.eval(&r.t(), &tw, a).unwrap(), a);
        assert_eq!(r.eval(&lp(0, &[1, 1, 1]), &tw, a).unwrap(), ext.zero());
        // 1 + t^{-1} at a: 1 + a^2 = a
        assert_eq!(r.eval(&lp(-1, &[1, 1]), &tw, a).unwrap(), a);
        assert!(matches!(
            r.eval(&r.t(), &tw, Fe::ZERO),
            Err(Error::ZeroEvaluationPoint)
        ));
    }

    #[test]
    fn divide_exact_examples() {
        let r = ring(3);
        // t^2 - 1 = t^2 + 2 over F_3, divided by t - 1 = t + 2
        assert_eq!(
            r.divide_exact(&lp(0, &[2, 0, 1]), &lp(0, &[2, 1])).unwrap(),
            lp(0, &[1, 1])
        );
        assert_eq!(
            r.divide_exact(&LPoly::zero(), &lp(0, &[2, 1])).unwrap(),
            LPoly::zero()
        );
        let r2 = ring(2);
        let fa = lp(0, &[1, 1, 1]);
        assert_eq!(r2.divide_exact(&fa.shift(-1), &fa).unwrap(), lp(-1, &[1]));
        assert!(matches!(
            r2.divide_exact(&r2.one(), &fa),
            Err(Error::NotDivisible)
        ));
        assert!(matches!(
            r2.divide_exact(&fa, &lp(0, &[1, 0, 1])),
            Err(Error::NotDivisible)
        ));
        assert!(matches!(
            r2.divide_exact(&fa, &LPoly::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn zero_is_canonical() {
        let r = ring(5);
        let f = lp(3, &[1, 2]);
        let z = r.sub(&f, &f);
        assert!(z.is_zero());
        assert_eq!(z, LPoly::zero());
        assert_eq!((z.lo(), z.hi()), (0, 0));
        assert_eq!(r.format(&z), "0");
    }

    #[test]
    fn text_form() {
        let r = ring(2);
        assert_eq!(r.format(&lp(-1, &[1, 1])), "1*t^-1 + 1*t^0");
        let r4 = ring(4);
        assert_eq!(r4.format(&lp(0, &[3])), "[1,1]*t^0");
    }

    #[test]
    fn window_overflow_is_rejected() {
        assert!(matches!(
            LPoly::from_coeffs(1_000_000, vec![Fe::from_packed(1), Fe::from_packed(1)]),
            Err(Error::WindowOverflow { .. })
        ));
    }

    fn arb_poly(p: u32) -> impl Strategy<Value = LPoly> {
        (-6i32..6, proptest::collection::vec(0..p, 0..7)).prop_map(|(lo, c)| {
            LPoly::from_coeffs(lo, c.into_iter().map(Fe::from_packed).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws_and_sigma_hold(f in arb_poly(5), g in arb_poly(5), h in arb_poly(5)) {
            let r = ring(5);
            prop_assert_eq!(r.mul(&f, &g), r.mul(&g, &f));
            prop_assert_eq!(r.mul(&r.mul(&f, &g), &h), r.mul(&f, &r.mul(&g, &h)));
            prop_assert_eq!(r.mul(&f, &r.add(&g, &h)), r.add(&r.mul(&f, &g), &r.mul(&f, &h)));
            prop_assert_eq!(f.sigma().sigma(), f.clone());
            prop_assert_eq!(r.mul(&f, &g).sigma(), r.mul(&f.sigma(), &g.sigma()));
            prop_assert_eq!(r.add(&f, &g).sigma(), r.add(&f.sigma(), &g.sigma()));
            for x in [&f, &g, &r.mul(&f, &g)] {
                if !x.is_zero() {
                    prop_assert!(!x.coeff(x.lo()).is_zero() && !x.coeff(x.hi()).is_zero());
                }
            }
        }

        #[test]
        fn divide_exact_inverts_mul(f in arb_poly(3), g in arb_poly(3)) {
            prop_assume!(!g.is_zero());
            let r = ring(3);
            prop_assert_eq!(r.divide_exact(&r.mul(&f, &g), &g).unwrap(), f);
        }

        #[test]
        fn eval_is_a_homomorphism_twisted_by_sigma(f in arb_poly(2), g in arb_poly(2)) {
            let r = ring(2);
            for s in 1..=3 {
                let tw = unit_root(2, s).unwrap();
                let (ext, a) = (tw.ext(), tw.a());
                let ev = |x: &LPoly| r.eval(x, &tw, a).unwrap();
                prop_assert_eq!(ev(&r.add(&f, &g)), ext.add(ev(&f), ev(&g)));
                prop_assert_eq!(ev(&r.mul(&f, &g)), ext.mul(ev(&f), ev(&g)));
                prop_assert_eq!(ev(&f.sigma()), tw.conj(ev(&f)));
            }
        }
    }
}
