//! Independent oracles for the integration tests. Nothing here calls into the
//! library's linear algebra.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use itertools::Itertools;

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Reduced row echelon form of `m`; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// Unique solution of a square-or-tall system, or `None` if singular or
/// inconsistent.
pub fn unique_solution(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first()?.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect())
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    if m.iter().skip(n).any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

pub fn nullspace(a: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); n];
            v[free] = Q::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Decide `E·x = 0, S·x > 0` by vertex enumeration of the pointed polyhedron
/// `{E·x = 0, L·x = 0, S·x ≥ 1}` where `L` spans the common null space of
/// `E` and `S`. A nonempty pointed polyhedron has a vertex, and every vertex
/// is cut out by `n` independent tight rows.
pub fn strict_feasible_by_vertices(eq: &[Vec<i64>], strict: &[Vec<i64>], n: usize) -> bool {
    let to_q = |rows: &[Vec<i64>]| -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect()
    };
    let e = to_q(eq);
    let s = to_q(strict);
    let all: Vec<Vec<Q>> = e.iter().chain(&s).cloned().collect();
    let lineality = nullspace(&all, n);
    let fixed: Vec<Vec<Q>> = e.iter().cloned().chain(lineality).collect();
    for k in 0..=s.len().min(n) {
        for subset in (0..s.len()).combinations(k) {
            let mut a = fixed.clone();
            let mut b = vec![Q::zero(); fixed.len()];
            for &i in &subset {
                a.push(s[i].clone());
                b.push(Q::one());
            }
            if a.is_empty() {
                continue;
            }
            if let Some(x) = unique_solution(&a, &b) {
                if s.iter().all(|row| dot(row, &x) >= Q::one()) {
                    return true;
                }
            }
        }
    }
    // n = 0 or every row vanishes: feasible iff there are no strict rows
    n == 0 && s.is_empty()
}

/// All integer solutions of `A·x = b` in the box `[−r, r]^cols`.
pub fn box_solutions(a: &[Vec<i64>], b: &[i64], cols: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![-r; cols];
    loop {
        if a.iter()
            .zip(b)
            .all(|(row, &bi)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() == bi)
        {
            out.push(x.clone());
        }
        let mut j = 0;
        loop {
            if j == cols {
                return out;
            }
            if x[j] < r {
                x[j] += 1;
                break;
            }
            x[j] = -r;
            j += 1;
        }
    }
}

/// Whether `x − p` is an integer combination of the independent vectors `basis`.
pub fn in_coset(x: &[i64], p: &[BigInt], basis: &[Vec<BigInt>]) -> bool {
    let diff: Vec<Q> = x
        .iter()
        .zip(p)
        .map(|(&a, b)| q(a) - Q::from_integer(b.clone()))
        .collect();
    if basis.is_empty() {
        return diff.iter().all(Zero::is_zero);
    }
    // columns of the system are the basis vectors
    let a: Vec<Vec<Q>> = (0..x.len())
        .map(|i| {
            basis
                .iter()
                .map(|v| Q::from_integer(v[i].clone()))
                .collect()
        })
        .collect();
    match unique_solution(&a, &diff) {
        Some(c) => c.iter().all(|v| v.is_integer()),
        None => false,
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * det(&minor)
        })
        .sum()
}

/// gcd of all `k × k` minors (0 if they all vanish).
pub fn gcd_of_minors(m: &[Vec<i64>], k: usize) -> BigInt {
    let rows = m.len();
    let cols = m[0].len();
    let mut g = BigInt::zero();
    for rs in (0..rows).combinations(k) {
        for cs in (0..cols).combinations(k) {
            let sub: Vec<Vec<i128>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect())
                .collect();
            g = g.gcd(&BigInt::from(det(&sub)));
        }
    }
    g.abs()
}
