use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::solve::{int_rref, rational_kernel};
use super::{rat, LatticeVector, RationalVector};
use crate::error::{Error, Result};

/// Homogeneous system `E·x = 0, S·x > 0` over `Q^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictSystem {
    dim: usize,
    equalities: Vec<RationalVector>,
    strict_inequalities: Vec<RationalVector>,
}

impl StrictSystem {
    pub fn new(
        dim: usize,
        equalities: Vec<RationalVector>,
        strict_inequalities: Vec<RationalVector>,
    ) -> Result<Self> {
        for row in equalities.iter().chain(&strict_inequalities) {
            if row.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.dim(),
                });
            }
        }
        Ok(StrictSystem {
            dim,
            equalities,
            strict_inequalities,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equalities(&self) -> &[RationalVector] {
        &self.equalities
    }

    pub fn strict_inequalities(&self) -> &[RationalVector] {
        &self.strict_inequalities
    }

    /// True iff `x` satisfies every constraint exactly.
    pub fn is_satisfied_by(&self, x: &RationalVector) -> bool {
        x.dim() == self.dim
            && self.equalities.iter().all(|e| e.dot(x).is_zero())
            && self
                .strict_inequalities
                .iter()
                .all(|s| s.dot(x).is_positive())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(RationalVector),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

fn clear_denominators(row: &RationalVector) -> LatticeVector {
    let l = rat(row.denominator_lcm());
    row.scale(&l).to_lattice().expect("denominators cleared")
}

/// Decide `E·x = 0, S·x > 0` and return a verified witness.
///
/// The equalities are removed by parametrising their kernel, the strict rows
/// are then expressed in a basis of their own row space (dropping the common
/// lineality), and since the system is homogeneous every `s·z > 0` can be
/// replaced by `s·z ≥ 1`. The remaining system is decided by Fourier–Motzkin
/// elimination with back-substitution.
pub fn strict_feasible(sys: &StrictSystem) -> Result<Feasibility> {
    let n = sys.dim;
    let eq: Vec<LatticeVector> = sys.equalities.iter().map(clear_denominators).collect();
    let strict: Vec<LatticeVector> = sys
        .strict_inequalities
        .iter()
        .map(clear_denominators)
        .collect();
    if strict.is_empty() {
        return Ok(Feasibility::Feasible(RationalVector::zero(n)));
    }
    let kernel = rational_kernel(&eq, n);
    let p = kernel.len();
    let reduced: Vec<Vec<BigInt>> = strict
        .iter()
        .map(|s| kernel.iter().map(|k| s.dot(k)).collect())
        .collect();
    if reduced.iter().any(|r| r.iter().all(Zero::is_zero)) {
        return Ok(Feasibility::Infeasible);
    }
    let (basis, pivots) = int_rref(reduced.clone(), p);
    // coordinates of each reduced row in the echelon basis of the row space
    let coeffs: Vec<Vec<BigRational>> = reduced
        .iter()
        .map(|row| {
            basis
                .iter()
                .zip(&pivots)
                .map(|(b, &pc)| BigRational::new(row[pc].clone(), b[pc].clone()))
                .collect()
        })
        .collect();
    let Some(z) = fourier_motzkin(&coeffs, pivots.len()) else {
        return Ok(Feasibility::Infeasible);
    };
    let mut y = vec![BigRational::zero(); p];
    for ((b, &pc), zj) in basis.iter().zip(&pivots).zip(&z) {
        y[pc] = zj / rat(b[pc].clone());
    }
    let mut x = RationalVector::zero(n);
    for (yj, k) in y.iter().zip(&kernel) {
        if !yj.is_zero() {
            x = x.add(&k.to_rational().scale(yj));
        }
    }
    if !sys.is_satisfied_by(&x) {
        return Err(Error::Invariant(format!(
            "strict feasibility witness {x} fails verification"
        )));
    }
    Ok(Feasibility::Feasible(x))
}

/// `a·z ≥ b`
#[derive(Clone, Debug)]
struct Constraint {
    a: Vec<BigInt>,
    b: BigRational,
}

impl Constraint {
    /// Scale to a primitive integer normal; `None` for a vacuous constraint.
    fn normalized(a: Vec<BigRational>, b: BigRational) -> Option<std::result::Result<Self, ()>> {
        let l = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = a
            .iter()
            .map(|c| (c * rat(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            // 0 ≥ b
            return if b.is_positive() { Some(Err(())) } else { None };
        }
        let scale = BigRational::new(l, g.clone());
        Some(Ok(Constraint {
            a: ints.into_iter().map(|c| c / &g).collect(),
            b: b * scale,
        }))
    }
}

/// Keep the tightest bound per normal direction.
fn dedup(cs: Vec<Constraint>) -> Vec<Constraint> {
    let mut best: BTreeMap<Vec<BigInt>, BigRational> = BTreeMap::new();
    for c in cs {
        best.entry(c.a)
            .and_modify(|b| {
                if c.b > *b {
                    *b = c.b.clone();
                }
            })
            .or_insert(c.b);
    }
    best.into_iter().map(|(a, b)| Constraint { a, b }).collect()
}

/// Find `z ∈ Q^vars` with `row·z ≥ 1` for every row, or `None`.
fn fourier_motzkin(rows: &[Vec<BigRational>], vars: usize) -> Option<Vec<BigRational>> {
    let mut current = Vec::new();
    for r in rows {
        match Constraint::normalized(r.clone(), BigRational::one()) {
            Some(Ok(c)) => current.push(c),
            Some(Err(())) => return None,
            None => {}
        }
    }
    let mut current = dedup(current);
    let mut remaining: Vec<usize> = (0..vars).collect();
    let mut stages: Vec<(usize, Vec<Constraint>)> = Vec::new();

    while !remaining.is_empty() {
        // eliminate the variable producing the fewest new constraints
        let (pos_in_remaining, &k) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &k)| {
                let pos = current.iter().filter(|c| c.a[k].is_positive()).count();
                let neg = current.iter().filter(|c| c.a[k].is_negative()).count();
                (pos * neg) as i64 - (pos + neg) as i64
            })
            .expect("nonempty");
        remaining.remove(pos_in_remaining);
        let (pos, rest): (Vec<_>, Vec<_>) = current.iter().partition(|c| c.a[k].is_positive());
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|c| c.a[k].is_negative());
        let mut next: Vec<Constraint> = zero.into_iter().cloned().collect();
        for p in &pos {
            for q in &neg {
                let fp = -&q.a[k];
                let fq = p.a[k].clone();
                let a: Vec<BigRational> =
                    p.a.iter()
                        .zip(&q.a)
                        .map(|(x, y)| rat(&fp * x + &fq * y))
                        .collect();
                let b = &p.b * rat(fp.clone()) + &q.b * rat(fq.clone());
                match Constraint::normalized(a, b) {
                    Some(Ok(c)) => next.push(c),
                    Some(Err(())) => return None,
                    None => {}
                }
            }
        }
        stages.push((k, std::mem::replace(&mut current, dedup(next))));
    }
    if current.iter().any(|c| c.b.is_positive()) {
        return None;
    }

    let mut z = vec![BigRational::zero(); vars];
    for (k, cs) in stages.iter().rev() {
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for c in cs {
            if c.a[*k].is_zero() {
                continue;
            }
            let others: BigRational =
                c.a.iter()
                    .enumerate()
                    .filter(|(j, _)| j != k)
                    .fold(BigRational::zero(), |acc, (j, aj)| {
                        acc + &z[j] * rat(aj.clone())
                    });
            let bound = (&c.b - others) / rat(c.a[*k].clone());
            if c.a[*k].is_positive() {
                if lower.as_ref().is_none_or(|l| bound > *l) {
                    lower = Some(bound);
                }
            } else if upper.as_ref().is_none_or(|u| bound < *u) {
                upper = Some(bound);
            }
        }
        z[*k] = match (lower, upper) {
            (Some(l), u) => {
                let c = l.ceil();
                if u.as_ref().is_none_or(|u| c <= *u) {
                    c
                } else {
                    l
                }
            }
            (None, Some(u)) => u.floor(),
            (None, None) => BigRational::zero(),
        };
    }
    Some(z)
}
