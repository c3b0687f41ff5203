//! Divisor polytopes `P_D = {m : m(l_ρ) ≥ −a_ρ}`, lattice-point counts and
//! the Ehrhart degree.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ToricDivisor;
use crate::cone::dd::hrep_to_vrep;
use crate::error::{Error, Result};
use crate::exactlin::{rank, solve_rational, LatticeVector, RationalMatrix, RationalVector};
use crate::fan::Fan;

/// `{m : ⟨normal_i, m⟩ ≥ −offset_i}` with its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    ambient_rank: usize,
    inequalities: Vec<(LatticeVector, BigInt)>,
    vertices: Vec<RationalVector>,
}

impl Polytope {
    /// Build from inequalities; fails if the region is unbounded or empty.
    /// Vertices are the feasible points where `n` independent inequalities
    /// are tight.
    pub fn new(ambient_rank: usize, inequalities: Vec<(LatticeVector, BigInt)>) -> Result<Self> {
        let n = ambient_rank;
        for (l, _) in &inequalities {
            if l.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: l.dim(),
                });
            }
        }
        let normals: Vec<LatticeVector> = inequalities.iter().map(|(l, _)| l.clone()).collect();
        let recession = hrep_to_vrep(n, &[], &normals);
        if !recession.lineality.is_empty() || !recession.rays.is_empty() {
            return Err(Error::UnboundedPolytope);
        }
        let mut p = Polytope {
            ambient_rank,
            inequalities,
            vertices: Vec::new(),
        };
        let mut vertices: Vec<RationalVector> = Vec::new();
        for subset in (0..p.inequalities.len()).combinations(n) {
            if rank(subset.iter().map(|&i| &p.inequalities[i].0), n) < n {
                continue;
            }
            let rows: Vec<RationalVector> = subset
                .iter()
                .map(|&i| p.inequalities[i].0.to_rational())
                .collect();
            let rhs: Vec<BigRational> = subset
                .iter()
                .map(|&i| BigRational::from_integer(-&p.inequalities[i].1))
                .collect();
            let a = RationalMatrix::from_rows(&rows, n)?;
            let Some(sol) = solve_rational(&a, &RationalVector::new(rhs)) else {
                continue;
            };
            let v = sol.particular;
            if p.contains_rational(&v) && !vertices.contains(&v) {
                vertices.push(v);
            }
        }
        if vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        vertices.sort_by(|a, b| a.coords().cmp(b.coords()));
        p.vertices = vertices;
        Ok(p)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn inequalities(&self) -> &[(LatticeVector, BigInt)] {
        &self.inequalities
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn contains_rational(&self, m: &RationalVector) -> bool {
        self.inequalities
            .iter()
            .all(|(l, c)| l.dot_rational(m) >= BigRational::from_integer(-c))
    }

    /// Dimension of the affine span of the vertices.
    pub fn dim(&self) -> usize {
        let v0 = &self.vertices[0];
        let diffs: Vec<LatticeVector> = self.vertices[1..]
            .iter()
            .map(|v| {
                let d = RationalVector::new(
                    v.coords()
                        .iter()
                        .zip(v0.coords())
                        .map(|(a, b)| a - b)
                        .collect(),
                );
                let d = d.scale(&BigRational::from_integer(d.denominator_lcm()));
                d.to_lattice().expect("denominators cleared")
            })
            .collect();
        rank(diffs.iter(), self.ambient_rank)
    }

    pub fn has_integral_vertices(&self) -> bool {
        self.vertices.iter().all(RationalVector::is_integral)
    }
}

/// The polytope of `D` on `f`.
pub fn divisor_polytope(f: &Fan, d: &ToricDivisor) -> Result<Polytope> {
    d.check(f)?;
    let ineqs = f
        .rays()
        .iter()
        .cloned()
        .zip(d.coefficients.iter().cloned())
        .collect();
    Polytope::new(f.ambient_rank(), ineqs)
}

fn count_points(p: &Polytope, t: u64, strict: bool) -> BigInt {
    let n = p.ambient_rank;
    let tq = BigRational::from_integer(BigInt::from(t));
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for j in 0..n {
        let vals = p.vertices.iter().map(|v| &v[j] * &tq);
        let min = vals.clone().min().expect("nonempty");
        let max = vals.max().expect("nonempty");
        lo.push(min.ceil().to_integer().to_i64().expect("box fits in i64"));
        hi.push(max.floor().to_integer().to_i64().expect("box fits in i64"));
    }
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return BigInt::zero();
    }
    let bounds: Vec<BigInt> = p
        .inequalities
        .iter()
        .map(|(_, c)| -c * BigInt::from(t))
        .collect();
    let mut count = BigInt::zero();
    let mut point = lo.clone();
    loop {
        let m = LatticeVector::from_i64(&point);
        let inside = p.inequalities.iter().zip(&bounds).all(|((l, _), b)| {
            let v = l.dot(&m);
            if strict {
                v > *b
            } else {
                v >= *b
            }
        });
        if inside {
            count += 1;
        }
        // odometer step
        let mut j = 0;
        loop {
            if j == n {
                return count;
            }
            if point[j] < hi[j] {
                point[j] += 1;
                break;
            }
            point[j] = lo[j];
            j += 1;
        }
    }
}

/// Lattice points of `t·P`, by enumeration of the bounding box.
pub fn count_lattice_points(p: &Polytope, t: u64) -> BigInt {
    count_points(p, t, false)
}

/// Lattice points satisfying every inequality of `t·P` strictly, i.e. the
/// interior points when `P` is full-dimensional.
pub fn count_interior_points(p: &Polytope, t: u64) -> BigInt {
    count_points(p, t, true)
}

/// Ehrhart polynomial, coefficients in increasing degree, and the normalized
/// volume `d! · (leading coefficient)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ehrhart {
    pub coefficients: Vec<BigRational>,
    pub degree: BigInt,
}

impl Ehrhart {
    pub fn eval(&self, t: i64) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(t));
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &t + c)
    }
}

impl fmt::Display for Ehrhart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let coef = if c.is_one() && k > 0 {
                String::new()
            } else {
                format!("{c}")
            };
            let sep = if coef.is_empty() || mono.is_empty() {
                ""
            } else {
                " "
            };
            terms.push(format!("{coef}{sep}{mono}"));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
    }
}

/// Interpolate the Ehrhart polynomial of `p` from the counts at
/// `t = 0, …, d` and read off the degree.
pub fn polytope_degree(p: &Polytope, d: usize) -> Result<Ehrhart> {
    if !p.has_integral_vertices() {
        return Err(Error::NonIntegralVertices);
    }
    if d != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: d,
        });
    }
    let rows: Vec<RationalVector> = (0..=d)
        .map(|t| {
            let t = BigRational::from_integer(BigInt::from(t));
            let mut pow = BigRational::one();
            RationalVector::new(
                (0..=d)
                    .map(|_| {
                        let x = pow.clone();
                        pow = &pow * &t;
                        x
                    })
                    .collect(),
            )
        })
        .collect();
    let counts: Vec<BigRational> = (0..=d as u64)
        .map(|t| BigRational::from_integer(count_lattice_points(p, t)))
        .collect();
    let sol = solve_rational(
        &RationalMatrix::from_rows(&rows, d + 1)?,
        &RationalVector::new(counts),
    )
    .ok_or_else(|| Error::Invariant("Vandermonde system is singular".into()))?;
    let coefficients = sol.particular.coords().to_vec();
    let factorial: BigInt = (1..=d).map(BigInt::from).product();
    let volume = &coefficients[d] * BigRational::from_integer(factorial);
    if !volume.is_integer() || volume.is_negative() {
        return Err(Error::Invariant(format!(
            "normalized volume {volume} is not a natural number"
        )));
    }
    Ok(Ehrhart {
        coefficients,
        degree: volume.to_integer(),
    })
}

/// Predicted leading term of the top Chern number of the bundle family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub n: usize,
    pub degree: BigInt,
    pub statement: String,
    pub lower_order: String,
}

fn subscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c as usize - '0' as usize])
        .collect()
}

fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c as usize - '0' as usize])
        .collect()
}

fn power_of_t(k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => "t".to_string(),
        _ => format!("t{}", superscript(k)),
    }
}

/// `c_n(E_t) = degree · t^{n−1} + O(t^{n−2})`. Only the leading coefficient
/// is determined.
pub fn chern_growth(n: usize, degree: &BigInt) -> Result<GrowthReport> {
    if degree < &BigInt::one() {
        return Err(Error::DegreeTooSmall(degree.to_string()));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let coef = if degree.is_one() {
        String::new()
    } else {
        degree.to_string()
    };
    let statement = format!(
        "c{}(E_t) = {coef}{} + O({})",
        subscript(n),
        power_of_t(n - 1),
        power_of_t(n - 2)
    );
    Ok(GrowthReport {
        n,
        degree: degree.clone(),
        statement,
        lower_order: format!(
            "coefficients below t{} are not determined",
            superscript(n - 1)
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn o1_on_p2_is_a_unit_triangle() {
        let p2 = fixtures::projective_space(2);
        let p = divisor_polytope(&p2, &ToricDivisor::prime(3, 2)).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.dim(), 2);
        let e = polytope_degree(&p, 2).unwrap();
        assert_eq!(e.coefficients, vec![q(1, 1), q(3, 2), q(1, 2)]);
        assert_eq!(e.degree, BigInt::one());
        for t in 0..6 {
            assert_eq!(
                BigRational::from_integer(count_lattice_points(&p, t as u64)),
                e.eval(t)
            );
            let interior = BigInt::from((t - 1) * (t - 2) / 2);
            if t >= 1 {
                assert_eq!(count_interior_points(&p, t as u64), interior);
            }
        }
    }

    #[test]
    fn segment_and_point() {
        let p1 = fixtures::projective_space(1);
        let p = divisor_polytope(&p1, &ToricDivisor::from_i64(&[2, 0])).unwrap();
        assert_eq!(p.vertices().len(), 2);
        let e = polytope_degree(&p, 1).unwrap();
        assert_eq!(e.coefficients, vec![q(1, 1), q(2, 1)]);
        assert_eq!(e.degree, BigInt::from(2));
        assert_eq!(e.to_string(), "2 t + 1");

        let z = divisor_polytope(&fixtures::projective_space(2), &ToricDivisor::zero(3)).unwrap();
        assert_eq!(z.vertices(), &[RationalVector::zero(2)]);
        assert_eq!(z.dim(), 0);
    }

    #[test]
    fn unit_three_simplex() {
        let p3 = fixtures::projective_space(3);
        let p = divisor_polytope(&p3, &ToricDivisor::prime(4, 0)).unwrap();
        let e = polytope_degree(&p, 3).unwrap();
        assert_eq!(e.coefficients, vec![q(1, 1), q(11, 6), q(1, 1), q(1, 6)]);
        assert_eq!(e.degree, BigInt::one());
    }

    #[test]
    fn degree_errors() {
        let f = Fan::from_i64(
            2,
            &[&[1, 0], &[1, 2], &[-1, -1]],
            &[&[0, 1], &[1, 2], &[2, 0]],
        )
        .unwrap();
        let p = divisor_polytope(&f, &ToricDivisor::from_i64(&[0, 1, 0])).unwrap();
        assert_eq!(polytope_degree(&p, 2), Err(Error::NonIntegralVertices));
        let p2 = fixtures::projective_space(2);
        let tri = divisor_polytope(&p2, &ToricDivisor::prime(3, 0)).unwrap();
        assert!(matches!(
            polytope_degree(&tri, 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unbounded_and_empty() {
        let quadrant = Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        assert_eq!(
            divisor_polytope(&quadrant, &ToricDivisor::zero(2)),
            Err(Error::UnboundedPolytope)
        );
        let p1 = fixtures::projective_space(1);
        assert_eq!(
            divisor_polytope(&p1, &ToricDivisor::from_i64(&[-1, 0])),
            Err(Error::EmptyPolytope)
        );
    }

    #[test]
    fn growth_statements() {
        assert_eq!(
            chern_growth(3, &BigInt::one()).unwrap().statement,
            "c₃(E_t) = t² + O(t)"
        );
        assert_eq!(
            chern_growth(4, &BigInt::from(5)).unwrap().statement,
            "c₄(E_t) = 5t³ + O(t²)"
        );
        assert_eq!(
            chern_growth(2, &BigInt::one()).unwrap().statement,
            "c₂(E_t) = t + O(1)"
        );
        assert_eq!(
            chern_growth(3, &BigInt::zero()),
            Err(Error::DegreeTooSmall("0".into()))
        );
        assert_eq!(
            chern_growth(1, &BigInt::one()),
            Err(Error::DimensionTooSmall(1))
        );
    }
}
