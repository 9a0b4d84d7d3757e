//! Dense univariate polynomials over a prime field `F_p`, coefficients stored
//! low degree first. Only what the field constructor needs: reduction, gcd and
//! the distinct-degree irreducibility test.

fn trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn inv_mod(x: u32, p: u32) -> u32 {
    debug_assert!(!x.is_multiple_of(p));
    pow_mod(x, p - 2, p)
}

pub fn pow_mod(base: u32, mut e: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut b = base as u64 % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc as u32
}

pub fn mul(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a as u64 * b as u64) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `f` modulo a nonzero `g`.
pub fn rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let dg = degree(g).expect("division by zero polynomial");
    let mut r: Vec<u32> = f.to_vec();
    trim(&mut r);
    let lead_inv = inv_mod(g[dg], p) as u64;
    let p64 = p as u64;
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let factor = r[dr] as u64 * lead_inv % p64;
        let shift = dr - dg;
        for (j, &gc) in g[..=dg].iter().enumerate() {
            let sub = factor * gc as u64 % p64;
            r[shift + j] = ((r[shift + j] as u64 + p64 - sub) % p64) as u32;
        }
        trim(&mut r);
    }
    r
}

pub fn gcd(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod_poly(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Distinct-degree test: a degree-k polynomial is irreducible iff it shares no
/// factor with `x^(p^i) - x` for any `i <= k/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = match degree(f) {
        Some(0) | None => return false,
        Some(k) => k,
    };
    let x = vec![0u32, 1];
    let mut h = x.clone();
    for _ in 1..=k / 2 {
        h = pow_mod_poly(&h, p as u64, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = gcd(&diff, f, p);
        if degree(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}
