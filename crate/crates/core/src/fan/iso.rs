//! Fan isomorphism by backtracking over images of a ray basis.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::Zero;

use super::Fan;
use crate::error::{Error, Result};
use crate::exactlin::{
    rank, solve_rational, IntegerMatrix, LatticeVector, RationalMatrix, RationalVector,
};

/// A unimodular `A` with `A·l_i = l'_{ray_map[i]}` carrying cones to cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanIsomorphism {
    pub matrix: IntegerMatrix,
    pub ray_map: Vec<usize>,
}

impl FanIsomorphism {
    pub fn inverse(&self) -> FanIsomorphism {
        let n = self.matrix.rows();
        let mut ray_map = vec![0; self.ray_map.len()];
        for (i, &j) in self.ray_map.iter().enumerate() {
            ray_map[j] = i;
        }
        let rows: Vec<RationalVector> = (0..n).map(|r| self.matrix.row(r).to_rational()).collect();
        let a = RationalMatrix::from_rows(&rows, n).expect("square");
        let mut inv = IntegerMatrix::zeros(n, n);
        for c in 0..n {
            let e = LatticeVector::unit(n, c).to_rational();
            let x = solve_rational(&a, &e).expect("unimodular matrix is invertible");
            let col = x
                .particular
                .to_lattice()
                .expect("unimodular inverse is integral");
            for r in 0..n {
                inv.set(r, c, col[r].clone());
            }
        }
        FanIsomorphism {
            matrix: inv,
            ray_map,
        }
    }
}

struct Search<'a> {
    f1: &'a Fan,
    f2: &'a Fan,
    basis: Vec<usize>,
    /// columns of `(Bᵀ)⁻¹` where `B` has the basis rays as columns
    binv_t: Vec<RationalVector>,
    valence1: Vec<usize>,
    valence2: Vec<usize>,
    cooc1: Vec<Vec<usize>>,
    cooc2: Vec<Vec<usize>>,
    targets: HashSet<Vec<usize>>,
}

fn valences(f: &Fan) -> (Vec<usize>, Vec<Vec<usize>>) {
    let m = f.rays().len();
    let mut val = vec![0; m];
    let mut cooc = vec![vec![0; m]; m];
    for c in f.max_cones() {
        for &a in c {
            val[a] += 1;
            for &b in c {
                cooc[a][b] += 1;
            }
        }
    }
    (val, cooc)
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut s = v.to_vec();
    s.sort();
    s
}

/// Find a lattice automorphism carrying `f1` onto `f2`, or `None`.
///
/// The rays of `f1` must span; a lattice map is only pinned down by its
/// values on a spanning set.
pub fn fans_isomorphic(f1: &Fan, f2: &Fan) -> Result<Option<FanIsomorphism>> {
    let n = f1.ambient_rank();
    if n != f2.ambient_rank()
        || f1.rays().len() != f2.rays().len()
        || f1.max_cones().len() != f2.max_cones().len()
    {
        return Ok(None);
    }
    let sizes = |f: &Fan| sorted(&f.max_cones().iter().map(Vec::len).collect::<Vec<_>>());
    if sizes(f1) != sizes(f2) {
        return Ok(None);
    }
    let (valence1, cooc1) = valences(f1);
    let (valence2, cooc2) = valences(f2);
    if sorted(&valence1) != sorted(&valence2) {
        return Ok(None);
    }

    let mut basis: Vec<usize> = Vec::with_capacity(n);
    for i in 0..f1.rays().len() {
        let trial: Vec<&LatticeVector> = basis
            .iter()
            .map(|&b| &f1.rays()[b])
            .chain([&f1.rays()[i]])
            .collect();
        if rank(trial, n) == basis.len() + 1 {
            basis.push(i);
        }
        if basis.len() == n {
            break;
        }
    }
    if basis.len() < n {
        return Err(Error::RaysDoNotSpan);
    }

    let bt_rows: Vec<RationalVector> = basis.iter().map(|&b| f1.rays()[b].to_rational()).collect();
    let bt = RationalMatrix::from_rows(&bt_rows, n)?;
    let binv_t = (0..n)
        .map(|j| {
            solve_rational(&bt, &LatticeVector::unit(n, j).to_rational())
                .map(|s| s.particular)
                .ok_or_else(|| Error::Invariant("basis matrix is singular".into()))
        })
        .collect::<Result<Vec<_>>>()?;

    let search = Search {
        f1,
        f2,
        basis,
        binv_t,
        valence1,
        valence2,
        cooc1,
        cooc2,
        targets: f2.max_cones().iter().cloned().collect(),
    };
    let mut chosen = Vec::with_capacity(n);
    Ok(search.extend(&mut chosen))
}

impl Search<'_> {
    fn extend(&self, chosen: &mut Vec<usize>) -> Option<FanIsomorphism> {
        let k = chosen.len();
        if k == self.basis.len() {
            return self.try_leaf(chosen);
        }
        let src = self.basis[k];
        for cand in 0..self.f2.rays().len() {
            if chosen.contains(&cand) || self.valence2[cand] != self.valence1[src] {
                continue;
            }
            let consistent =
                (0..k).all(|p| self.cooc1[self.basis[p]][src] == self.cooc2[chosen[p]][cand]);
            if !consistent {
                continue;
            }
            chosen.push(cand);
            if let Some(found) = self.extend(chosen) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    fn try_leaf(&self, chosen: &[usize]) -> Option<FanIsomorphism> {
        let n = self.f1.ambient_rank();
        let mut a = IntegerMatrix::zeros(n, n);
        for r in 0..n {
            // row r of A is (Bᵀ)⁻¹ applied to the r-th coordinates of the images
            let mut row = vec![BigRational::zero(); n];
            for (j, &img) in chosen.iter().enumerate() {
                let s = BigRational::from_integer(self.f2.rays()[img][r].clone());
                if s.is_zero() {
                    continue;
                }
                for (c, x) in row.iter_mut().enumerate() {
                    *x += &s * &self.binv_t[j][c];
                }
            }
            for (c, x) in row.into_iter().enumerate() {
                if !x.is_integer() {
                    return None;
                }
                a.set(r, c, x.to_integer());
            }
        }
        if !a.is_unimodular() {
            return None;
        }
        let mut ray_map = Vec::with_capacity(self.f1.rays().len());
        for r in self.f1.rays() {
            ray_map.push(self.f2.ray_index(&a.mul_vec(r))?);
        }
        for c in self.f1.max_cones() {
            let mut img: Vec<usize> = c.iter().map(|&r| ray_map[r]).collect();
            img.sort_unstable();
            if !self.targets.contains(&img) {
                return None;
            }
        }
        Some(FanIsomorphism { matrix: a, ray_map })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn permuted_p2() {
        let p2 = fixtures::projective_space(2);
        let rays: Vec<LatticeVector> = p2.rays().iter().rev().cloned().collect();
        let cones: Vec<Vec<usize>> = p2
            .max_cones()
            .iter()
            .map(|c| c.iter().map(|&r| 2 - r).collect())
            .collect();
        let q = Fan::new(2, rays, cones).unwrap();
        let iso = fans_isomorphic(&p2, &q).unwrap().unwrap();
        assert!(iso.matrix.is_unimodular());
        for (i, &j) in iso.ray_map.iter().enumerate() {
            assert_eq!(iso.matrix.mul_vec(&p2.rays()[i]), q.rays()[j]);
        }
    }

    #[test]
    fn different_ray_counts() {
        let p2 = fixtures::projective_space(2);
        let p1p1 = fixtures::p1_times_p1();
        assert_eq!(fans_isomorphic(&p1p1, &p2).unwrap(), None);
    }

    #[test]
    fn same_counts_not_isomorphic() {
        // Hirzebruch surface F_1 against P¹×P¹: same ray and cone counts
        let f1 = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .unwrap();
        assert_eq!(
            fans_isomorphic(&f1, &fixtures::p1_times_p1()).unwrap(),
            None
        );
    }

    #[test]
    fn inverse_and_recoordinatization() {
        let p3 = fixtures::projective_space(3);
        let a = IntegerMatrix::from_i64_rows(&[vec![1, 2, 0], vec![0, 1, 0], vec![3, 5, 1]]);
        let moved = p3.transform(&a).unwrap();
        let iso = fans_isomorphic(&p3, &moved).unwrap().unwrap();
        let back = iso.inverse();
        assert_eq!(
            iso.matrix.mul(&back.matrix).unwrap(),
            IntegerMatrix::identity(3)
        );
        let again = fans_isomorphic(&moved, &p3).unwrap();
        assert!(again.is_some());
    }

    #[test]
    fn non_spanning_is_an_error() {
        let ray = Fan::from_i64(2, &[&[1, 0]], &[&[0]]).unwrap();
        assert_eq!(fans_isomorphic(&ray, &ray), Err(Error::RaysDoNotSpan));
    }
}
