//! Exact arithmetic in `F_{p^k}` and the two-level tower `F_q ⊂ F_{q^{2s}}`
//! carrying the distinguished root of unity `a` and the conjugation
//! `λ ↦ λ^{q^s}`.
//!
//! Elements are dense coefficient vectors over `F_p` in the polynomial basis
//! `1, x, …, x^{k-1}`, packed into a `u32` as little-endian base-`p` digits.
//! The packed value doubles as the canonical enumeration order of the field.

pub mod linalg;
pub mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on `p^k`.
pub const DEFAULT_SIZE_BOUND: u64 = 1 << 20;

/// Fields at most this large get precomputed addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

/// A field element, packed as base-`p` digits (coefficient of `x^0` least significant).
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);

    pub fn packed(self) -> u32 {
        self.0
    }

    pub fn from_packed(v: u32) -> Fe {
        Fe(v)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite field `F_{p^k}` with a fixed irreducible modulus.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    size: u32,
    /// Monic modulus, low degree first, length `k + 1`.
    modulus: Vec<u32>,
    place: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_size(p: u32, k: u32, bound: u64) -> Result<u32> {
    let mut size: u64 = 1;
    for _ in 0..k {
        size = size.saturating_mul(p as u64);
        if size > bound {
            return Err(Error::FieldTooLarge { size, bound });
        }
    }
    Ok(size as u32)
}

impl FieldCtx {
    /// Builds `F_{p^k}` with the default size bound.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        Self::with_bound(p, k, DEFAULT_SIZE_BOUND)
    }

    /// Builds `F_{p^k}`. The modulus is the first monic irreducible of degree
    /// `k` when the lower coefficients are read as a packed base-`p` integer.
    pub fn with_bound(p: u32, k: u32, bound: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let size = checked_size(p, k, bound)?;
        let modulus = (0..size)
            .map(|idx| {
                let mut f = digits_of(idx, p, k as usize);
                f.push(1);
                f
            })
            .find(|f| poly::is_irreducible(f, p))
            .ok_or_else(|| {
                Error::SearchExhausted(format!("no irreducible of degree {k} over F_{p}"))
            })?;
        Ok(Self::from_parts(p, k, size, modulus))
    }

    /// Builds a field from an explicit modulus, checking irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let k = poly::degree(&modulus).ok_or(Error::ZeroDegree)? as u32;
        if k == 0 || modulus[k as usize] != 1 || modulus.len() != k as usize + 1 {
            return Err(Error::Format(
                "modulus must be monic of positive degree".into(),
            ));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::Format("modulus is reducible".into()));
        }
        let size = checked_size(p, k, DEFAULT_SIZE_BOUND)?;
        Ok(Self::from_parts(p, k, size, modulus))
    }

    fn from_parts(p: u32, k: u32, size: u32, modulus: Vec<u32>) -> Self {
        let place = (0..k).map(|i| p.pow(i)).collect();
        let mut ctx = FieldCtx {
            p,
            k,
            size,
            modulus,
            place,
            tables: None,
        };
        if size <= TABLE_LIMIT {
            let n = size as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..size {
                for b in 0..size {
                    add[(a * size + b) as usize] = ctx.add_slow(a, b);
                    mul[(a * size + b) as usize] = ctx.mul_slow(a, b);
                }
            }
            let mut inv = vec![0; n];
            for a in 1..size {
                inv[a as usize] = (1..size)
                    .find(|&b| mul[(a * size + b) as usize] == 1)
                    .unwrap();
            }
            ctx.tables = Some(Arc::new(Tables { add, mul, inv }));
        }
        ctx
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, x: Fe) -> Vec<u32> {
        digits_of(x.0, self.p, self.k as usize)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Fe {
        debug_assert!(digits.len() <= self.k as usize);
        Fe(digits
            .iter()
            .zip(&self.place)
            .map(|(&d, &w)| (d % self.p) * w)
            .sum())
    }

    /// Every element, in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &w in &self.place {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * w;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let k = self.k as usize;
        let p = self.p as u64;
        let mut da = [0u64; 32];
        let mut db = [0u64; 32];
        let (mut ra, mut rb) = (a, b);
        for i in 0..k {
            da[i] = (ra % self.p) as u64;
            db[i] = (rb % self.p) as u64;
            ra /= self.p;
            rb /= self.p;
        }
        let mut prod = [0u64; 64];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for d in (k..2 * k.max(1) - 1).rev() {
            let c = prod[d] % p;
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for j in 0..k {
                let m = self.modulus[j] as u64;
                prod[d - k + j] = (prod[d - k + j] + (p - m) % p * c) % p;
            }
        }
        let mut out = 0u32;
        for i in 0..k {
            out += (prod[i] % p) as u32 * self.place[i];
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.tables {
            Some(t) => Fe(t.add[(a.0 * self.size + b.0) as usize]),
            None => Fe(self.add_slow(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let mut r = a.0;
        let mut out = 0;
        for &w in &self.place {
            let d = r % self.p;
            out += ((self.p - d) % self.p) * w;
            r /= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.tables {
            Some(t) => Fe(t.mul[(a.0 * self.size + b.0) as usize]),
            None => Fe(self.mul_slow(a.0, b.0)),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        match &self.tables {
            Some(t) => Some(Fe(t.inv[a.0 as usize])),
            None => Some(self.pow(a, self.size as u64 - 2)),
        }
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Signed power; negative exponents invert first. Panics on `0^(-e)`.
    pub fn pow_i(&self, a: Fe, e: i64) -> Fe {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            let inv = self.inv(a).expect("negative power of zero");
            self.pow(inv, e.unsigned_abs())
        }
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        assert!(!a.is_zero(), "zero has no multiplicative order");
        let n = self.size as u64 - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        ord
    }

    /// First element in packed order that generates the multiplicative group.
    pub fn primitive_element(&self) -> Fe {
        let n = self.size as u64 - 1;
        self.elements()
            .skip(1)
            .find(|&g| self.order(g) == n)
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Text form: coefficient vector, most significant last, e.g. `[1,1]`.
    pub fn format(&self, a: Fe) -> String {
        let d: Vec<String> = self.digits(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", d.join(","))
    }

    /// Parses the `[c0,c1,…]` form. Missing high digits are zero.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "field element `{s}` is not of the form [c0,c1,...]"
                ))
            })?;
        let digits = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&d| d < self.p)
                    .ok_or_else(|| Error::InvalidConfig(format!("bad digit `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if digits.len() > self.k as usize {
            return Err(Error::InvalidConfig(format!(
                "field element `{s}` has too many digits"
            )));
        }
        Ok(self.from_digits(&digits))
    }
}

fn digits_of(mut v: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

/// Which specialization point a tower carries.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RootKind {
    /// Primitive `(q^s + 1)`-st root of unity in `F_{q^{2s}}`.
    Unitary,
    PlusOne,
    MinusOne,
}

/// `F_q` embedded in an extension together with the specialization point.
///
/// For the unitary kind the extension is `F_{q^{2s}}` and conjugation is
/// `λ ↦ λ^{q^s}`; for `a = ±1` the extension is `F_q` itself and `s = 0`, so
/// conjugation is the identity.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: FieldCtx,
    ext: FieldCtx,
    q: u32,
    s: u32,
    kind: RootKind,
    a: Fe,
    embed: Vec<Fe>,
    restrict: HashMap<Fe, Fe>,
    /// Number of `x ↦ x^p` steps making up conjugation.
    frob_steps: u32,
}

/// `F_q` for a prime power `q`.
pub fn base_field(q: u64) -> Result<FieldCtx> {
    let (p, e) = prime_power(q)?;
    FieldCtx::new(p, e)
}

/// The extension `F_{q^{2s}}` and its distinguished root `a` of order `q^s + 1`.
pub fn unit_root(q: u64, s: u32) -> Result<FieldTower> {
    FieldTower::unitary(q, s)
}

impl FieldTower {
    pub fn unitary(q: u64, s: u32) -> Result<Self> {
        Self::unitary_with_bound(q, s, DEFAULT_SIZE_BOUND)
    }

    pub fn unitary_with_bound(q: u64, s: u32, bound: u64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidConfig("s must be positive".into()));
        }
        let (p, e) = prime_power(q)?;
        let base = FieldCtx::with_bound(p, e, bound)?;
        let ext = FieldCtx::with_bound(p, e * 2 * s, bound)?;
        let g = ext.primitive_element();
        let qs = q.pow(s);
        let total = ext.size() as u64 - 1;
        let a = ext.pow(g, total / (qs + 1));
        debug_assert_eq!(ext.order(a), qs + 1);
        let embed = embedding(&base, &ext);
        Ok(Self::assemble(
            base,
            ext,
            q as u32,
            s,
            RootKind::Unitary,
            a,
            embed,
        ))
    }

    /// Tower for the specializations `a = +1` or `a = -1` over `F_q` itself.
    pub fn split(q: u64, kind: RootKind) -> Result<Self> {
        let base = base_field(q)?;
        let a = match kind {
            RootKind::PlusOne => base.one(),
            RootKind::MinusOne => base.neg(base.one()),
            RootKind::Unitary => {
                return Err(Error::InvalidConfig(
                    "split tower needs a = +1 or a = -1".into(),
                ))
            }
        };
        let embed: Vec<Fe> = base.elements().collect();
        Ok(Self::assemble(
            base.clone(),
            base,
            q as u32,
            0,
            kind,
            a,
            embed,
        ))
    }

    fn assemble(
        base: FieldCtx,
        ext: FieldCtx,
        q: u32,
        s: u32,
        kind: RootKind,
        a: Fe,
        embed: Vec<Fe>,
    ) -> Self {
        let restrict = embed
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, Fe(i as u32)))
            .collect();
        let frob_steps = base.k() * s;
        FieldTower {
            base,
            ext,
            q,
            s,
            kind,
            a,
            embed,
            restrict,
            frob_steps,
        }
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn ext(&self) -> &FieldCtx {
        &self.ext
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    /// The specialization point.
    pub fn a(&self) -> Fe {
        self.a
    }

    /// `q^s`, the size of the conjugation-fixed subfield.
    pub fn qs(&self) -> u64 {
        (self.q as u64).pow(self.s)
    }

    pub fn embed(&self, x: Fe) -> Fe {
        self.embed[x.0 as usize]
    }

    /// Preimage in `F_q` of an extension element, if it lies in the base.
    pub fn restrict(&self, x: Fe) -> Option<Fe> {
        self.restrict.get(&x).copied()
    }

    /// `λ ↦ λ^{q^s}`: the Galois map sending `a` to `a^{-1}`.
    pub fn conj(&self, x: Fe) -> Fe {
        let mut y = x;
        for _ in 0..self.frob_steps {
            y = self.ext.frobenius(y);
        }
        y
    }

    /// Whether `λ` is a valid transvection parameter: `conj(λ) + aλ = 0`.
    pub fn is_admissible(&self, lambda: Fe) -> bool {
        let ext = &self.ext;
        ext.add(self.conj(lambda), ext.mul(self.a, lambda))
            .is_zero()
    }

    /// All admissible parameters in packed order (including 0).
    pub fn admissible_params(&self) -> Vec<Fe> {
        self.ext
            .elements()
            .filter(|&l| self.is_admissible(l))
            .collect()
    }

    /// Minimal polynomial over `F_q` of an extension element, monic, low degree first.
    pub fn min_poly(&self, alpha: Fe) -> Vec<Fe> {
        let ext = &self.ext;
        let mut conjugates = vec![alpha];
        loop {
            let next = ext.pow(*conjugates.last().unwrap(), self.q as u64);
            if next == alpha {
                break;
            }
            conjugates.push(next);
        }
        let mut coeffs = vec![ext.one()];
        for &r in &conjugates {
            // multiply by (t - r)
            let mut next = vec![ext.zero(); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = ext.add(next[i + 1], c);
                next[i] = ext.sub(next[i], ext.mul(c, r));
            }
            coeffs = next;
        }
        coeffs
            .into_iter()
            .map(|c| {
                self.restrict(c)
                    .expect("minimal polynomial has coefficients in the base field")
            })
            .collect()
    }

    /// Coordinates of `λ` over `F_q` in the basis `1, a, …, a^{d-1}`, `d = deg min_poly(a)`.
    pub fn coordinates_in_root_powers(&self, lambda: Fe) -> Result<Vec<Fe>> {
        let d = self.min_poly(self.a).len() - 1;
        let base = &self.base;
        let ext = &self.ext;
        let e = base.k() as usize;
        let p = ext.p();
        // unknown (i, j): coefficient of ω^j in the i-th base coordinate
        let omega_powers: Vec<Fe> = (0..e)
            .map(|j| self.embed(base.from_digits(&unit_digits(j, e))))
            .collect();
        let kext = ext.k() as usize;
        let mut rows = vec![vec![0u32; d * e]; kext];
        for i in 0..d {
            let ai = ext.pow(self.a, i as u64);
            for (j, &w) in omega_powers.iter().enumerate() {
                let col = ext.digits(ext.mul(ai, w));
                for (r, &c) in col.iter().enumerate() {
                    rows[r][i * e + j] = c;
                }
            }
        }
        let rhs = ext.digits(lambda);
        let sol = linalg::solve_mod_p(&rows, &rhs, d * e, p)
            .ok_or_else(|| Error::InternalIdentity("lambda outside F_q(a)".into()))?;
        Ok((0..d)
            .map(|i| base.from_digits(&sol[i * e..(i + 1) * e]))
            .collect())
    }
}

fn unit_digits(j: usize, e: usize) -> Vec<u32> {
    let mut d = vec![0; e];
    d[j] = 1;
    d
}

/// Embedding of `base` into `ext`: the generator `x` of the base goes to the
/// first root (packed order) of the base modulus in `ext`.
fn embedding(base: &FieldCtx, ext: &FieldCtx) -> Vec<Fe> {
    let lift = |c: u32| ext.from_int(c as i64);
    let root = ext
        .elements()
        .find(|&r| {
            let mut acc = ext.zero();
            for &c in base.modulus().iter().rev() {
                acc = ext.add(ext.mul(acc, r), lift(c));
            }
            acc.is_zero()
        })
        .expect("extension contains the base field");
    base.elements()
        .map(|x| {
            let mut acc = ext.zero();
            for &d in base.digits(x).iter().rev() {
                acc = ext.add(ext.mul(acc, root), lift(d));
            }
            acc
        })
        .collect()
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_uses_the_unique_irreducible_quadratic() {
        let f = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f9_modulus_is_first_irreducible_in_scan() {
        // oracle: scan monic quadratics x^2 + c1 x + c0 in packed order (c0 + 3 c1)
        let mut first = None;
        'outer: for idx in 0..9u32 {
            let (c0, c1) = (idx % 3, idx / 3);
            for r in 0..3u32 {
                if (r * r + c1 * r + c0) % 3 == 0 {
                    continue 'outer;
                }
            }
            first = Some(vec![c0, c1, 1]);
            break;
        }
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(Some(f.modulus().to_vec()), first);
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn prime_field_has_modulus_x() {
        let f = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 2);
        assert_eq!(f.mul(Fe(1), Fe(1)), Fe(1));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldCtx::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FieldCtx::new(2, 0), Err(Error::ZeroDegree)));
        assert!(matches!(
            FieldCtx::new(2, 21),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(prime_power(12), Err(Error::NotPrimePower(12))));
        assert_eq!(prime_power(9).unwrap(), (3, 2));
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for &(p, k) in &[(2, 4), (3, 2), (5, 2), (2, 9), (7, 3)] {
            let f = FieldCtx::new(p, k).unwrap();
            for x in f.elements().skip(1) {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one(), "{f} x={x:?}");
            }
            assert_eq!(f.inv(f.zero()), None);
        }
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = FieldCtx::new(2, 4).unwrap();
        assert!(f.tables.is_some());
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(f.mul(Fe(a), Fe(b)).0, f.mul_slow(a, b));
                assert_eq!(f.add(Fe(a), Fe(b)).0, f.add_slow(a, b));
            }
        }
    }

    #[test]
    fn field_axioms_on_f25() {
        let f = FieldCtx::new(5, 2).unwrap();
        let els: Vec<Fe> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            for &b in &els {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(a, b), f.add(b, a));
                for &c in els.iter().step_by(3) {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn primitive_element_has_full_order() {
        let f = FieldCtx::new(3, 4).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.order(g), 80);
        // nothing earlier in packed order is primitive
        assert!(f
            .elements()
            .skip(1)
            .take_while(|&x| x != g)
            .all(|x| f.order(x) < 80));
    }

    #[test]
    fn unit_root_orders_match_exhaustive_scan() {
        for &(q, s) in &[(2u64, 1u32), (3, 1), (2, 2), (5, 1), (4, 1), (3, 2)] {
            let t = unit_root(q, s).unwrap();
            let qs = q.pow(s);
            // exhaustive order computation
            let ext = t.ext();
            let mut x = t.a();
            let mut ord = 1;
            while x != ext.one() {
                x = ext.mul(x, t.a());
                ord += 1;
            }
            assert_eq!(ord, qs + 1, "q={q} s={s}");
            assert_eq!(ext.size() as u64, qs * qs);
        }
    }

    #[test]
    fn conj_is_squaring_on_f4() {
        let t = unit_root(2, 1).unwrap();
        let ext = t.ext();
        for x in ext.elements() {
            assert_eq!(t.conj(x), ext.mul(x, x));
        }
        let a = t.a();
        assert_eq!(t.conj(a), ext.mul(a, a));
        assert_eq!(ext.mul(t.conj(a), a), ext.one());
    }

    #[test]
    fn conj_fixes_base_and_is_an_involutive_automorphism() {
        for &(q, s) in &[(2u64, 1u32), (2, 2), (3, 1), (5, 1), (4, 1), (2, 3), (3, 2)] {
            let t = unit_root(q, s).unwrap();
            let ext = t.ext();
            for x in t.base().elements() {
                let e = t.embed(x);
                assert_eq!(t.conj(e), e);
            }
            assert_eq!(t.conj(t.a()), ext.inv(t.a()).unwrap());
            let els: Vec<Fe> = ext.elements().collect();
            for &x in &els {
                assert_eq!(t.conj(t.conj(x)), x);
                for &y in els.iter().step_by(7) {
                    assert_eq!(t.conj(ext.mul(x, y)), ext.mul(t.conj(x), t.conj(y)));
                    assert_eq!(t.conj(ext.add(x, y)), ext.add(t.conj(x), t.conj(y)));
                }
            }
        }
    }

    #[test]
    fn admissible_set_has_qs_elements() {
        for &(q, s) in &[(2u64, 1u32), (2, 2), (3, 1), (5, 1), (4, 1), (2, 3), (3, 2)] {
            let t = unit_root(q, s).unwrap();
            assert_eq!(t.admissible_params().len() as u64, q.pow(s), "q={q} s={s}");
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let t = unit_root(4, 1).unwrap();
        let (b, e) = (t.base(), t.ext());
        for x in b.elements() {
            for y in b.elements() {
                assert_eq!(t.embed(b.mul(x, y)), e.mul(t.embed(x), t.embed(y)));
                assert_eq!(t.embed(b.add(x, y)), e.add(t.embed(x), t.embed(y)));
            }
        }
    }

    #[test]
    fn min_poly_examples() {
        let t = unit_root(2, 1).unwrap();
        let f = t.min_poly(t.a());
        assert_eq!(f, vec![Fe(1), Fe(1), Fe(1)]); // t^2 + t + 1
        let one = t.min_poly(t.ext().one());
        assert_eq!(one, vec![t.base().neg(t.base().one()), t.base().one()]); // t - 1

        let t3 = unit_root(3, 1).unwrap();
        assert_eq!(t3.min_poly(t3.a()), vec![Fe(1), Fe(0), Fe(1)]); // t^2 + 1
    }

    #[test]
    fn min_poly_of_root_is_palindromic_and_divides_cyclotomic_binomial() {
        for &(q, s) in &[
            (2u64, 1u32),
            (2, 2),
            (3, 1),
            (5, 1),
            (4, 1),
            (2, 3),
            (3, 2),
            (2, 4),
        ] {
            let t = unit_root(q, s).unwrap();
            let f = t.min_poly(t.a());
            assert_eq!(f.len() - 1, 2 * s as usize);
            let rev: Vec<Fe> = f.iter().rev().copied().collect();
            assert_eq!(f, rev, "q={q} s={s}");
            assert_eq!(f[0], t.base().one());
            // every root is a (q^s+1)-st root of unity: evaluate at all conjugates
            let ext = t.ext();
            let mut r = t.a();
            for _ in 0..f.len() - 1 {
                let mut acc = ext.zero();
                for &c in f.iter().rev() {
                    acc = ext.add(ext.mul(acc, r), t.embed(c));
                }
                assert!(acc.is_zero());
                assert_eq!(ext.pow(r, q.pow(s) + 1), ext.one());
                r = ext.pow(r, q);
            }
        }
    }

    #[test]
    fn coordinates_reconstruct_lambda() {
        for &(q, s) in &[(2u64, 2u32), (3, 1), (4, 1), (5, 1)] {
            let t = unit_root(q, s).unwrap();
            let ext = t.ext();
            for lambda in ext.elements() {
                let c = t.coordinates_in_root_powers(lambda).unwrap();
                let mut acc = ext.zero();
                for (i, &ci) in c.iter().enumerate() {
                    acc = ext.add(acc, ext.mul(t.embed(ci), ext.pow(t.a(), i as u64)));
                }
                assert_eq!(acc, lambda);
            }
        }
    }

    #[test]
    fn text_format_round_trips() {
        let f = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f.format(Fe(3)), "[1,1]");
        assert_eq!(f.parse("[1,1]").unwrap(), Fe(3));
        assert_eq!(f.parse("[0,1]").unwrap(), Fe(2));
        assert!(f.parse("[2]").is_err());
        assert!(f.parse("1,1").is_err());
    }

    #[test]
    fn split_towers_have_trivial_conjugation() {
        let t = FieldTower::split(3, RootKind::MinusOne).unwrap();
        assert_eq!(t.a(), Fe(2));
        assert_eq!(t.s(), 0);
        for x in t.ext().elements() {
            assert_eq!(t.conj(x), x);
        }
    }
}
