//! Linear systems over a prime field.

use super::poly::inv_mod;

/// Solves `rows · x = rhs` over `F_p`. Each row has `unknowns` entries.
/// Free variables are set to zero, so the returned solution is deterministic.
/// Returns `None` when the system is inconsistent.
pub fn solve_mod_p(rows: &[Vec<u32>], rhs: &[u32], unknowns: usize, p: u32) -> Option<Vec<u32>> {
    assert_eq!(rows.len(), rhs.len());
    let p64 = p as u64;
    let mut aug: Vec<Vec<u64>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            debug_assert_eq!(r.len(), unknowns);
            let mut row: Vec<u64> = r.iter().map(|&c| c as u64 % p64).collect();
            row.push(b as u64 % p64);
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(sel) = (rank..aug.len()).find(|&r| aug[r][col] != 0) else {
            continue;
        };
        aug.swap(rank, sel);
        let inv = inv_mod(aug[rank][col] as u32, p) as u64;
        for c in col..=unknowns {
            aug[rank][c] = aug[rank][c] * inv % p64;
        }
        for r in 0..aug.len() {
            if r != rank && aug[r][col] != 0 {
                let factor = aug[r][col];
                for c in col..=unknowns {
                    let sub = factor * aug[rank][c] % p64;
                    aug[r][c] = (aug[r][c] + p64 - sub) % p64;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == aug.len() {
            break;
        }
    }
    if aug[rank..].iter().any(|row| row[unknowns] != 0) {
        return None;
    }
    let mut x = vec![0u32; unknowns];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = aug[r][unknowns] as u32;
    }
    Some(x)
}
