use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FGAbelianGroup, IntegerMatrix};

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Replace columns `(p, q)` of `m` by `(a·p + b·q, c·p + d·q)`.
fn combine_cols(
    m: &mut IntegerMatrix,
    p: usize,
    q: usize,
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    d: &BigInt,
) {
    for r in 0..m.rows() {
        let x = m.get(r, p).clone();
        let y = m.get(r, q).clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m.set(r, p, a * &x + b * &y);
        m.set(r, q, c * &x + d * &y);
    }
}

fn combine_rows(
    m: &mut IntegerMatrix,
    p: usize,
    q: usize,
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    d: &BigInt,
) {
    for col in 0..m.cols() {
        let x = m.get(p, col).clone();
        let y = m.get(q, col).clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m.set(p, col, a * &x + b * &y);
        m.set(q, col, c * &x + d * &y);
    }
}

/// `col[target] -= k · col[source]`
fn col_axpy(m: &mut IntegerMatrix, target: usize, source: usize, k: &BigInt) {
    for r in 0..m.rows() {
        let s = m.get(r, source);
        if s.is_zero() {
            continue;
        }
        let v = k * s;
        *m.get_mut(r, target) -= v;
    }
}

fn row_axpy(m: &mut IntegerMatrix, target: usize, source: usize, k: &BigInt) {
    for c in 0..m.cols() {
        let s = m.get(source, c);
        if s.is_zero() {
            continue;
        }
        let v = k * s;
        *m.get_mut(target, c) -= v;
    }
}

fn negate_col(m: &mut IntegerMatrix, c: usize) {
    for r in 0..m.rows() {
        let v = -m.get(r, c);
        m.set(r, c, v);
    }
}

fn negate_row(m: &mut IntegerMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = -m.get(r, c);
        m.set(r, c, v);
    }
}

fn swap_cols(m: &mut IntegerMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.rows() {
        let x = m.get(r, a).clone();
        let y = m.get(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

fn swap_rows(m: &mut IntegerMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols() {
        let x = m.get(a, c).clone();
        let y = m.get(b, c).clone();
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

/// Column-style Hermite normal form: returns `(H, U)` with `H = M·U`, `U`
/// unimodular, `H` lower-triangular echelon with positive pivots, zeros to the
/// right of each pivot and the entries left of a pivot reduced into
/// `[0, pivot)`. Zero columns of `H` come last, so the matching columns of `U`
/// form a lattice basis of the integer kernel.
pub fn hermite_normal_form(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.cols());
    let mut pc = 0;
    for row in 0..m.rows() {
        if pc == m.cols() {
            break;
        }
        for j in pc + 1..m.cols() {
            if h.get(row, j).is_zero() {
                continue;
            }
            let a = h.get(row, pc).clone();
            let b = h.get(row, j).clone();
            let (g, s, t) = ext_gcd(&a, &b);
            let c = -(&b / &g);
            let d = &a / &g;
            combine_cols(&mut h, pc, j, &s, &t, &c, &d);
            combine_cols(&mut u, pc, j, &s, &t, &c, &d);
        }
        if h.get(row, pc).is_zero() {
            continue;
        }
        if h.get(row, pc).is_negative() {
            negate_col(&mut h, pc);
            negate_col(&mut u, pc);
        }
        let p = h.get(row, pc).clone();
        for k in 0..pc {
            let q = h.get(row, k).div_floor(&p);
            if !q.is_zero() {
                col_axpy(&mut h, k, pc, &q);
                col_axpy(&mut u, k, pc, &q);
            }
        }
        pc += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(S, U, V)` with `S = U·M·V` diagonal,
/// nonnegative, `S[i][i] | S[i+1][i+1]`, and `U`, `V` unimodular.
pub fn smith_normal_form(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = s.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (s, u, v);
            };
            swap_rows(&mut s, t, bi);
            swap_rows(&mut u, t, bi);
            swap_cols(&mut s, t, bj);
            swap_cols(&mut v, t, bj);

            let mut clean = true;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t).div_floor(s.get(t, t));
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j).div_floor(s.get(t, t));
                col_axpy(&mut s, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let p = s.get(t, t).clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    // pull a non-multiple into the pivot row; the next round shrinks the pivot
                    let one = BigInt::one();
                    let zero = BigInt::zero();
                    combine_rows(&mut s, t, i, &one, &one, &zero, &one);
                    combine_rows(&mut u, t, i, &one, &one, &zero, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
    }
    (s, u, v)
}

/// Cokernel `Z^rows / M·Z^cols` of the map given by `m`.
pub fn cokernel(m: &IntegerMatrix) -> FGAbelianGroup {
    let (s, _, _) = smith_normal_form(m);
    let diag: Vec<BigInt> = (0..m.rows().min(m.cols()))
        .map(|i| s.get(i, i).clone())
        .filter(|d| !d.is_zero())
        .collect();
    FGAbelianGroup {
        rank: m.rows() - diag.len(),
        invariant_factors: diag.into_iter().filter(|d| *d > BigInt::one()).collect(),
    }
}
