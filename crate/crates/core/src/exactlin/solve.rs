use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::normal_form::hermite_normal_form;
use super::{rat, IntegerMatrix, LatticeVector, RationalMatrix, RationalVector};
use crate::error::{Error, Result};

/// Fraction-free reduced row echelon form over Z. Each row is divided by its
/// content, pivots are positive, and every pivot column is zero outside its
/// pivot row. Returns the nonzero rows and their pivot columns.
pub(crate) fn int_rref(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(i, r);
        if rows[r][c].is_negative() {
            rows[r].iter_mut().for_each(|x| *x = -&*x);
        }
        normalize(&mut rows[r]);
        for k in 0..rows.len() {
            if k == r || rows[k][c].is_zero() {
                continue;
            }
            let a = rows[r][c].clone();
            let b = rows[k][c].clone();
            let g = a.gcd(&b);
            let (fa, fb) = (&a / &g, &b / &g);
            let pivot_row = rows[r].clone();
            for (x, p) in rows[k].iter_mut().zip(&pivot_row) {
                *x = &fa * &*x - &fb * p;
            }
            normalize(&mut rows[k]);
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        row.iter_mut().for_each(|x| *x = &*x / &g);
    }
}

/// Primitive integer vectors spanning the rational kernel of an integer
/// system in reduced echelon form.
fn int_kernel_from_rref(
    rows: &[Vec<BigInt>],
    pivots: &[usize],
    ncols: usize,
) -> Vec<LatticeVector> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let l = rows
                .iter()
                .zip(pivots)
                .filter(|(row, _)| !row[f].is_zero())
                .fold(BigInt::one(), |l, (row, &p)| l.lcm(&row[p]));
            let mut v = vec![BigInt::zero(); ncols];
            v[f] = l.clone();
            for (row, &p) in rows.iter().zip(pivots) {
                if !row[f].is_zero() {
                    v[p] = -(&row[f] * &l) / &row[p];
                }
            }
            LatticeVector::new(v)
                .primitive()
                .expect("kernel vector is nonzero")
        })
        .collect()
}

/// Rank of a list of integer vectors of length `n`.
pub fn rank<'a, I>(rows: I, n: usize) -> usize
where
    I: IntoIterator<Item = &'a LatticeVector>,
{
    let data: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.coords().to_vec()).collect();
    int_rref(data, n).1.len()
}

/// The primitive integer vector spanning a one-dimensional kernel, or `None`
/// when the kernel has any other dimension. The sign is unspecified.
pub fn primitive_kernel_vector<'a, I>(rows: I, n: usize) -> Option<LatticeVector>
where
    I: IntoIterator<Item = &'a LatticeVector>,
{
    let data: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.coords().to_vec()).collect();
    let (rows, pivots) = int_rref(data, n);
    if pivots.len() + 1 != n {
        return None;
    }
    int_kernel_from_rref(&rows, &pivots, n).pop()
}

/// A basis of the rational kernel, scaled to primitive integer vectors.
pub fn rational_kernel(rows: &[LatticeVector], n: usize) -> Vec<LatticeVector> {
    let data: Vec<Vec<BigInt>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let (rows, pivots) = int_rref(data, n);
    int_kernel_from_rref(&rows, &pivots, n)
}

/// A lattice basis of `{x ∈ Z^cols : M·x = 0}`.
pub fn integer_kernel(m: &IntegerMatrix) -> Vec<LatticeVector> {
    let (h, u) = hermite_normal_form(m);
    (0..m.cols())
        .filter(|&c| (0..m.rows()).all(|r| h.get(r, c).is_zero()))
        .map(|c| u.col(c))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Rational,
    Integral,
}

/// Solution set `particular + span(kernel)` of a linear system. In integral
/// mode every vector is integral and the kernel is a lattice basis of the
/// integer solutions of the homogeneous system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: RationalVector,
    pub kernel: Vec<RationalVector>,
}

/// Solve `A·x = b` exactly.
pub fn solve_linear(
    a: &RationalMatrix,
    b: &RationalVector,
    mode: SolveMode,
) -> Result<Option<LinearSolution>> {
    if a.rows() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.dim(),
        });
    }
    match mode {
        SolveMode::Rational => Ok(solve_rational(a, b)),
        SolveMode::Integral => {
            // clear denominators row by row; the integer solution set is unchanged
            let mut rows = Vec::with_capacity(a.rows());
            let mut rhs = Vec::with_capacity(a.rows());
            for r in 0..a.rows() {
                let row = a.row(r);
                let l = row.denominator_lcm().lcm(b[r].denom());
                let scale = rat(l.clone());
                rows.push(
                    row.scale(&scale)
                        .to_lattice()
                        .expect("denominators cleared"),
                );
                rhs.push((&b[r] * &scale).to_integer());
            }
            let m = IntegerMatrix::from_rows(&rows, a.cols())?;
            Ok(
                solve_integral(&m, &LatticeVector::new(rhs))?.map(|(p, k)| LinearSolution {
                    particular: p.to_rational(),
                    kernel: k.iter().map(LatticeVector::to_rational).collect(),
                }),
            )
        }
    }
}

/// Rational solve by Gauss–Jordan elimination.
pub fn solve_rational(a: &RationalMatrix, b: &RationalVector) -> Option<LinearSolution> {
    let n = a.cols();
    let mut m: Vec<Vec<BigRational>> = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r).coords().to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let pivots = rref_rational(&mut m, n);
    if m.iter().skip(pivots.len()).any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut particular = vec![BigRational::zero(); n];
    for (row, &p) in m.iter().zip(&pivots) {
        particular[p] = row[n].clone();
    }
    let kernel = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            RationalVector::new(v)
        })
        .collect();
    Some(LinearSolution {
        particular: RationalVector::new(particular),
        kernel,
    })
}

/// In-place reduced row echelon form; only columns `< limit` are pivoted on.
/// Nonzero rows are moved to the top in pivot order.
pub(crate) fn rref_rational(m: &mut [Vec<BigRational>], limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == m.len() {
            break;
        }
        let Some(i) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(i, r);
        let inv = m[r][c].recip();
        m[r].iter_mut().for_each(|x| *x = &*x * &inv);
        for k in 0..m.len() {
            if k == r || m[k][c].is_zero() {
                continue;
            }
            let f = m[k][c].clone();
            let pivot_row = m[r].clone();
            for (x, p) in m[k].iter_mut().zip(&pivot_row) {
                *x = &*x - &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Integer solve through the column Hermite form: `H = A·U`, solve the
/// echelon system `H·y = b` by forward substitution, then `x = U·y`.
/// Returns the particular solution and a lattice basis of the integer kernel.
pub fn solve_integral(
    a: &IntegerMatrix,
    b: &LatticeVector,
) -> Result<Option<(LatticeVector, Vec<LatticeVector>)>> {
    if a.rows() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.dim(),
        });
    }
    let (h, u) = hermite_normal_form(a);
    let mut y = vec![BigInt::zero(); a.cols()];
    let mut pc = 0;
    for r in 0..a.rows() {
        let partial: BigInt = (0..pc).map(|k| h.get(r, k) * &y[k]).sum();
        let rest = &b[r] - partial;
        if pc < a.cols() && !h.get(r, pc).is_zero() {
            let (q, rem) = rest.div_rem(h.get(r, pc));
            if !rem.is_zero() {
                return Ok(None);
            }
            y[pc] = q;
            pc += 1;
        } else if !rest.is_zero() {
            return Ok(None);
        }
    }
    let x = u.mul_vec(&LatticeVector::new(y));
    let kernel = (pc..a.cols()).map(|c| u.col(c)).collect();
    Ok(Some((x, kernel)))
}
