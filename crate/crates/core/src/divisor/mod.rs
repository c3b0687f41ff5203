//! Torus-invariant Weil divisors `D = Σ a_ρ D_ρ` on a fan.
//!
//! Sign convention, fixed once: Cartier data for `D` is a family of
//! characters `m_σ` with `m_σ(l_κ) = −a_κ` for every ray `κ` of `σ`, and `D`
//! is ample iff `m_σ(l_κ) > −a_κ` for every maximal `σ` and every ray `κ`
//! outside it (strict convexity of the support function).

mod polytope;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    cokernel, hermite_normal_form, integer_kernel, rank, solve_integral, solve_linear,
    strict_feasible, FGAbelianGroup, Feasibility, IntegerMatrix, LatticeVector, RationalMatrix,
    RationalVector, SolveMode, StrictSystem,
};
use crate::fan::Fan;
use crate::par::Exec;

pub use polytope::{
    chern_growth, count_interior_points, count_lattice_points, divisor_polytope, polytope_degree,
    Ehrhart, GrowthReport, Polytope,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToricDivisor {
    pub coefficients: Vec<BigInt>,
}

impl ToricDivisor {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        ToricDivisor { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        ToricDivisor::new(coefficients.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn zero(rays: usize) -> Self {
        ToricDivisor::new(vec![BigInt::zero(); rays])
    }

    /// The prime divisor `D_ρ`.
    pub fn prime(rays: usize, rho: usize) -> Self {
        let mut d = ToricDivisor::zero(rays);
        d.coefficients[rho] = BigInt::one();
        d
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        ToricDivisor::new(self.coefficients.iter().map(|a| a * c).collect())
    }

    fn check(&self, f: &Fan) -> Result<()> {
        if self.len() != f.rays().len() {
            return Err(Error::DivisorLength {
                expected: f.rays().len(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// One character `m_σ` per maximal cone, in the fan's cone order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    pub characters: Vec<RationalVector>,
}

impl CartierData {
    pub fn is_integral(&self) -> bool {
        self.characters.iter().all(RationalVector::is_integral)
    }
}

fn cone_matrix(f: &Fan, cone: usize) -> IntegerMatrix {
    let rows: Vec<LatticeVector> = f.max_cones()[cone]
        .iter()
        .map(|&r| f.rays()[r].clone())
        .collect();
    IntegerMatrix::from_rows(&rows, f.ambient_rank()).expect("rays have the ambient rank")
}

fn cone_rhs(f: &Fan, d: &ToricDivisor, cone: usize) -> LatticeVector {
    LatticeVector::new(
        f.max_cones()[cone]
            .iter()
            .map(|&r| -&d.coefficients[r])
            .collect(),
    )
}

/// Per-cone solutions of `m_σ(l_κ) = −a_κ`. `None` if some cone has no
/// solution in the requested mode. On cones that are not full-dimensional the
/// character is only defined up to the span's annihilator; the particular
/// solution of the solver is returned.
pub fn cartier_data(f: &Fan, d: &ToricDivisor, mode: SolveMode) -> Result<Option<CartierData>> {
    cartier_data_with(Exec::default(), f, d, mode)
}

pub fn cartier_data_with(
    exec: Exec,
    f: &Fan,
    d: &ToricDivisor,
    mode: SolveMode,
) -> Result<Option<CartierData>> {
    d.check(f)?;
    let per_cone = exec.map_range(f.max_cones().len(), |c| {
        let a = RationalMatrix::from_integer(&cone_matrix(f, c));
        let b = cone_rhs(f, d, c).to_rational();
        solve_linear(&a, &b, mode).map(|s| s.map(|s| s.particular))
    });
    let mut characters = Vec::with_capacity(per_cone.len());
    for m in per_cone {
        match m? {
            Some(m) => characters.push(m),
            None => return Ok(None),
        }
    }
    Ok(Some(CartierData { characters }))
}

/// First maximal cone whose system `m_σ(l_κ) = −a_κ` has no solution in
/// the requested mode, or `None` if every cone is solvable.
pub fn cartier_obstruction(f: &Fan, d: &ToricDivisor, mode: SolveMode) -> Result<Option<usize>> {
    d.check(f)?;
    for c in 0..f.max_cones().len() {
        let a = RationalMatrix::from_integer(&cone_matrix(f, c));
        let b = cone_rhs(f, d, c).to_rational();
        if solve_linear(&a, &b, mode)?.is_none() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

pub fn is_q_cartier(f: &Fan, d: &ToricDivisor) -> Result<bool> {
    Ok(cartier_data(f, d, SolveMode::Rational)?.is_some())
}

pub fn is_cartier(f: &Fan, d: &ToricDivisor) -> Result<bool> {
    Ok(cartier_data(f, d, SolveMode::Integral)?.is_some())
}

fn divisors_ascending(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= *n {
        if (n % &k).is_zero() {
            small.push(k.clone());
            let q = n / &k;
            if q != k {
                large.push(q);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Least `c ≥ 1` with `c·D` Cartier, or `None` if `D` is not Q-Cartier.
///
/// On each cone the admissible multipliers form a subgroup of `Z`; its
/// generator divides the denominator lcm `L` of the rational solution, so
/// the divisors of `L` are tried in increasing order. The overall index is
/// the lcm over cones.
pub fn cartier_index(f: &Fan, d: &ToricDivisor) -> Result<Option<BigInt>> {
    cartier_index_with(Exec::default(), f, d)
}

pub fn cartier_index_with(exec: Exec, f: &Fan, d: &ToricDivisor) -> Result<Option<BigInt>> {
    let Some(data) = cartier_data_with(exec, f, d, SolveMode::Rational)? else {
        return Ok(None);
    };
    let per_cone = exec.map_range(f.max_cones().len(), |c| -> Result<BigInt> {
        let l = data.characters[c].denominator_lcm();
        if l.is_one() {
            return Ok(l);
        }
        let a = cone_matrix(f, c);
        let b = cone_rhs(f, d, c);
        for k in divisors_ascending(&l) {
            if solve_integral(&a, &b.scale(&k))?.is_some() {
                return Ok(k);
            }
        }
        Err(Error::Invariant(
            "denominator lcm does not clear the cone system".into(),
        ))
    });
    let mut index = BigInt::one();
    for k in per_cone {
        index = index.lcm(&k?);
    }
    Ok(Some(index))
}

fn ray_matrix(f: &Fan) -> IntegerMatrix {
    IntegerMatrix::from_rows(f.rays(), f.ambient_rank()).expect("rays have the ambient rank")
}

/// `Z^{Δ(1)} / M`, the cokernel of `m ↦ (m(l_ρ))_ρ`.
pub fn class_group(f: &Fan) -> Result<FGAbelianGroup> {
    if rank(f.rays().iter(), f.ambient_rank()) < f.ambient_rank() {
        return Err(Error::RaysDoNotSpan);
    }
    Ok(cokernel(&ray_matrix(f)))
}

/// Cartier divisors modulo principal ones.
///
/// The integer solutions of `m_σ(l_κ) + a_κ = 0` (all `σ ∋ κ`) in the
/// unknowns `(m_σ)_σ, (a_κ)_κ` project onto the lattice of Cartier
/// divisors; principal divisors are written in a basis of that lattice and
/// the quotient is read off a Smith form.
pub fn picard_group(f: &Fan) -> Result<FGAbelianGroup> {
    if !f.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = f.ambient_rank();
    let k = f.max_cones().len();
    let m = f.rays().len();
    let unknowns = k * n + m;
    let mut rows = Vec::new();
    for (c, cone) in f.max_cones().iter().enumerate() {
        for &r in cone {
            let mut row = vec![BigInt::zero(); unknowns];
            for (j, x) in f.rays()[r].coords().iter().enumerate() {
                row[c * n + j] = x.clone();
            }
            row[k * n + r] = BigInt::one();
            rows.push(LatticeVector::new(row));
        }
    }
    let system = IntegerMatrix::from_rows(&rows, unknowns)?;
    let projected: Vec<LatticeVector> = integer_kernel(&system)
        .into_iter()
        .map(|v| LatticeVector::new(v.coords()[k * n..].to_vec()))
        .collect();
    if projected.is_empty() {
        return Ok(FGAbelianGroup::trivial());
    }
    // Hermite form of the generators (as columns) gives a basis of the lattice
    let gens = IntegerMatrix::from_rows(&projected, m)?.transpose();
    let (h, _) = hermite_normal_form(&gens);
    let basis: Vec<LatticeVector> = (0..h.cols())
        .map(|c| h.col(c))
        .filter(|c| !c.is_zero())
        .collect();
    if basis.is_empty() {
        return Ok(FGAbelianGroup::trivial());
    }
    let b = IntegerMatrix::from_rows(&basis, m)?.transpose();
    let principal = ray_matrix(f);
    let mut coords = IntegerMatrix::zeros(basis.len(), n);
    for j in 0..n {
        let (x, kernel) = solve_integral(&b, &principal.col(j))?
            .ok_or_else(|| Error::Invariant("principal divisor is not Cartier".into()))?;
        if !kernel.is_empty() {
            return Err(Error::Invariant("Cartier basis is not independent".into()));
        }
        for i in 0..basis.len() {
            coords.set(i, j, x[i].clone());
        }
    }
    Ok(cokernel(&coords))
}

/// Strict convexity of the support function of a Cartier divisor.
pub fn is_ample(f: &Fan, d: &ToricDivisor) -> Result<bool> {
    d.check(f)?;
    if !f.is_complete() {
        return Err(Error::NotComplete);
    }
    let data = cartier_data(f, d, SolveMode::Integral)?.ok_or(Error::NotCartier)?;
    Ok(is_strictly_convex(f, d, &data))
}

fn is_strictly_convex(f: &Fan, d: &ToricDivisor, data: &CartierData) -> bool {
    f.max_cones().iter().enumerate().all(|(c, cone)| {
        (0..f.rays().len())
            .filter(|r| cone.binary_search(r).is_err())
            .all(|r| {
                let lhs = f.rays()[r].dot_rational(&data.characters[c]);
                lhs > BigRational::from_integer(-&d.coefficients[r])
            })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projectivity {
    /// an ample Cartier divisor together with its characters
    Feasible {
        divisor: ToricDivisor,
        data: CartierData,
    },
    Infeasible,
}

impl Projectivity {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Projectivity::Feasible { .. })
    }
}

/// Decide whether the fan carries a strictly convex piecewise linear
/// function, and if so return an integral ample divisor.
///
/// Unknowns are the characters `m_σ`. Cones containing a common ray must
/// agree on it; for a ray `κ` outside `σ`, `m_σ(l_κ)` must exceed the agreed
/// value at `κ`, taken from the first cone containing `κ`.
pub fn is_projective(f: &Fan) -> Result<Projectivity> {
    if !f.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = f.ambient_rank();
    let k = f.max_cones().len();
    let dim = k * n;
    let mut containing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (c, cone) in f.max_cones().iter().enumerate() {
        for &r in cone {
            containing.entry(r).or_default().push(c);
        }
    }
    let row = |plus: usize, minus: usize, ray: usize| {
        let mut v = vec![BigRational::zero(); dim];
        for (j, x) in f.rays()[ray].coords().iter().enumerate() {
            v[plus * n + j] += BigRational::from_integer(x.clone());
            v[minus * n + j] -= BigRational::from_integer(x.clone());
        }
        RationalVector::new(v)
    };
    let mut equalities = Vec::new();
    for (&r, cones) in &containing {
        for w in cones.windows(2) {
            equalities.push(row(w[0], w[1], r));
        }
    }
    let mut strict = Vec::new();
    for (c, cone) in f.max_cones().iter().enumerate() {
        for r in 0..f.rays().len() {
            if cone.binary_search(&r).is_err() {
                strict.push(row(c, containing[&r][0], r));
            }
        }
    }
    let sys = StrictSystem::new(dim, equalities, strict)?;
    let Feasibility::Feasible(x) = strict_feasible(&sys)? else {
        return Ok(Projectivity::Infeasible);
    };
    let x = x.scale(&BigRational::from_integer(x.denominator_lcm()));
    let x = x.to_lattice().expect("denominators cleared");
    let g = x.content();
    let x = if g.is_zero() {
        x
    } else {
        LatticeVector::new(x.coords().iter().map(|v| v / &g).collect())
    };
    let characters: Vec<RationalVector> = (0..k)
        .map(|c| LatticeVector::new(x.coords()[c * n..(c + 1) * n].to_vec()).to_rational())
        .collect();
    let coefficients = (0..f.rays().len())
        .map(|r| {
            let m = &characters[containing[&r][0]];
            -f.rays()[r].dot_rational(m).to_integer()
        })
        .collect();
    let divisor = ToricDivisor::new(coefficients);
    let data = CartierData { characters };
    if !is_strictly_convex(f, &divisor, &data) {
        return Err(Error::Invariant(
            "projectivity witness is not strictly convex".into(),
        ));
    }
    Ok(Projectivity::Feasible { divisor, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn zero_divisor_has_zero_characters() {
        let p2 = fixtures::projective_space(2);
        let data = cartier_data(&p2, &ToricDivisor::zero(3), SolveMode::Integral)
            .unwrap()
            .unwrap();
        assert!(data
            .characters
            .iter()
            .all(|m| *m == RationalVector::zero(2)));
    }

    #[test]
    fn prime_divisors_on_smooth_fans() {
        let p2 = fixtures::projective_space(2);
        for r in 0..3 {
            let d = ToricDivisor::prime(3, r);
            let data = cartier_data(&p2, &d, SolveMode::Integral).unwrap().unwrap();
            for (c, cone) in p2.max_cones().iter().enumerate() {
                for &k in cone {
                    assert_eq!(
                        p2.rays()[k].dot_rational(&data.characters[c]),
                        BigRational::from_integer(-&d.coefficients[k])
                    );
                }
            }
            assert_eq!(cartier_index(&p2, &d).unwrap(), Some(BigInt::one()));
        }
    }

    #[test]
    fn length_mismatch() {
        let p2 = fixtures::projective_space(2);
        assert_eq!(
            cartier_data(&p2, &ToricDivisor::zero(2), SolveMode::Rational),
            Err(Error::DivisorLength {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn half_integral_index() {
        // the cone <(1,0),(1,2)> is not unimodular; D = D_(1,2) needs m = (0,-1/2)
        let f = Fan::from_i64(2, &[&[1, 0], &[1, 2]], &[&[0, 1]]).unwrap();
        let d = ToricDivisor::from_i64(&[0, 1]);
        assert!(!is_cartier(&f, &d).unwrap());
        assert_eq!(cartier_index(&f, &d).unwrap(), Some(BigInt::from(2)));
        assert_eq!(
            cartier_index(&f, &d.scale(&BigInt::from(2))).unwrap(),
            Some(BigInt::one())
        );
        assert_eq!(
            cartier_index(&f, &d.scale(&BigInt::from(3))).unwrap(),
            Some(BigInt::from(2))
        );
    }

    #[test]
    fn square_cone_prime_divisor_is_not_q_cartier() {
        let f = fixtures::square_pyramid_fan();
        let d = ToricDivisor::prime(5, 0);
        assert!(!is_q_cartier(&f, &d).unwrap());
        assert_eq!(cartier_index(&f, &d).unwrap(), None);
        // the square cone is listed first
        assert_eq!(
            cartier_obstruction(&f, &d, SolveMode::Rational).unwrap(),
            Some(0)
        );
        assert_eq!(
            cartier_obstruction(&f, &ToricDivisor::zero(5), SolveMode::Integral).unwrap(),
            None
        );
    }

    #[test]
    fn class_groups() {
        assert_eq!(
            class_group(&fixtures::projective_space(2)).unwrap(),
            FGAbelianGroup::free(1)
        );
        assert_eq!(
            class_group(&fixtures::p1_times_p1()).unwrap(),
            FGAbelianGroup::free(2)
        );
        let ray = Fan::from_i64(2, &[&[1, 0]], &[&[0]]).unwrap();
        assert_eq!(class_group(&ray), Err(Error::RaysDoNotSpan));
    }

    #[test]
    fn picard_of_smooth_fans_equals_class_group() {
        for f in [
            fixtures::projective_space(1),
            fixtures::projective_space(2),
            fixtures::projective_space(3),
            fixtures::p1_times_p1(),
        ] {
            assert_eq!(picard_group(&f).unwrap(), class_group(&f).unwrap());
        }
    }

    #[test]
    fn picard_needs_completeness() {
        let f = Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        assert_eq!(picard_group(&f), Err(Error::NotComplete));
    }

    #[test]
    fn ampleness() {
        let p1 = fixtures::projective_space(1);
        // rays are (1) and (-1); degree one on the first
        assert!(is_ample(&p1, &ToricDivisor::from_i64(&[1, 0])).unwrap());
        let p2 = fixtures::projective_space(2);
        assert!(!is_ample(&p2, &ToricDivisor::from_i64(&[-1, 0, 0])).unwrap());
        assert!(is_ample(
            &fixtures::p1_times_p1(),
            &ToricDivisor::from_i64(&[1, 1, 0, 0])
        )
        .unwrap());
        let sq = fixtures::square_pyramid_fan();
        assert_eq!(
            is_ample(&sq, &ToricDivisor::prime(5, 0)),
            Err(Error::NotCartier)
        );
    }

    #[test]
    fn projective_fixtures() {
        for f in [
            fixtures::projective_space(2),
            fixtures::p1_times_p1(),
            fixtures::square_pyramid_fan(),
        ] {
            let Projectivity::Feasible { divisor, .. } = is_projective(&f).unwrap() else {
                panic!("fixture should be projective");
            };
            assert!(is_ample(&f, &divisor).unwrap());
        }
    }
}
