//! Strictly convex rational polyhedral cones.
//!
//! A [`Cone`] is built from generators and keeps both descriptions: its
//! primitive extreme rays (sorted lexicographically) and its inequality
//! description, i.e. a lattice basis of the equations of its linear span plus
//! one primitive inward normal per facet. For a cone that is not
//! full-dimensional the facet normals are taken inside the linear span, which
//! makes them canonical.
//!
//! Facets are enumerated from `(dim − 1)`-subsets of the generators, so the
//! cost grows like `C(rays, dim − 1)`. That is fine for the cones handled
//! here (a dozen rays at most) and is the scaling limit of this module.

pub(crate) mod dd;

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    integer_kernel, primitive_kernel_vector, rank, strict_feasible, IntegerMatrix, LatticeVector,
    RationalVector, StrictSystem,
};

/// Where a point sits relative to a facet hyperplane with inward normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    /// strictly on the side of the cone's relative interior
    Beneath,
    /// strictly on the opposite side
    Beyond,
    OnHyperplane,
}

/// Classify `x` against the hyperplane `normal⊥`, with `normal` oriented
/// towards the cone.
pub fn classify_position(normal: &LatticeVector, x: &LatticeVector) -> Position {
    let v = normal.dot(x);
    if v.is_positive() {
        Position::Beneath
    } else if v.is_negative() {
        Position::Beyond
    } else {
        Position::OnHyperplane
    }
}

/// A face given by the indices of the parent cone's rays it contains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub ray_indices: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    dim: usize,
    equations: Vec<LatticeVector>,
    facet_normals: Vec<LatticeVector>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl std::hash::Hash for Cone {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient_rank.hash(state);
        self.rays.hash(state);
    }
}

impl Cone {
    /// The cone generated by `generators`. Generators are primitivized,
    /// deduplicated and pruned to the extreme rays.
    pub fn from_rays(ambient_rank: usize, generators: &[LatticeVector]) -> Result<Cone> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.dim() != ambient_rank {
                return Err(Error::DimensionMismatch {
                    expected: ambient_rank,
                    found: g.dim(),
                });
            }
            gens.push(g.primitive()?);
        }
        gens.sort();
        gens.dedup();

        // pointed iff some functional is positive on every generator
        let pointed = StrictSystem::new(
            ambient_rank,
            Vec::new(),
            gens.iter().map(LatticeVector::to_rational).collect(),
        )?;
        if !strict_feasible(&pointed)?.is_feasible() {
            return Err(Error::NotStrictlyConvex);
        }

        let gen_matrix = IntegerMatrix::from_rows(&gens, ambient_rank)?;
        let equations = integer_kernel(&gen_matrix);
        let dim = ambient_rank - equations.len();

        let mut normals = BTreeSet::new();
        for subset in (0..gens.len()).combinations(dim - 1) {
            let rows = subset.iter().map(|&i| &gens[i]).chain(equations.iter());
            let Some(w) = primitive_kernel_vector(rows, ambient_rank) else {
                continue;
            };
            let values: Vec<_> = gens.iter().map(|g| w.dot(g)).collect();
            if values.iter().all(|v| !v.is_negative()) {
                normals.insert(w);
            } else if values.iter().all(|v| !v.is_positive()) {
                normals.insert(w.neg());
            }
        }
        let facet_normals: Vec<LatticeVector> = normals.into_iter().collect();

        // a generator is extreme iff the facets through it cut out a line
        let rays: Vec<LatticeVector> = gens
            .into_iter()
            .filter(|g| {
                let through = facet_normals.iter().filter(|w| w.dot(g).is_zero());
                rank(through.chain(equations.iter()), ambient_rank) == ambient_rank - 1
            })
            .collect();

        Ok(Cone {
            ambient_rank,
            rays,
            dim,
            equations,
            facet_normals,
        })
    }

    pub fn from_i64_rays(ambient_rank: usize, rays: &[&[i64]]) -> Result<Cone> {
        let gens: Vec<LatticeVector> = rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        Cone::from_rays(ambient_rank, &gens)
    }

    /// The cone `{0}`.
    pub fn zero(ambient_rank: usize) -> Cone {
        Cone {
            ambient_rank,
            rays: Vec::new(),
            dim: 0,
            equations: (0..ambient_rank)
                .map(|i| LatticeVector::unit(ambient_rank, i))
                .collect(),
            facet_normals: Vec::new(),
        }
    }

    /// The cone `{x : E·x = 0, A·x ≥ 0}`, which must be pointed.
    pub fn from_inequalities(
        ambient_rank: usize,
        equations: &[LatticeVector],
        inequalities: &[LatticeVector],
    ) -> Result<Cone> {
        for v in equations.iter().chain(inequalities) {
            if v.dim() != ambient_rank {
                return Err(Error::DimensionMismatch {
                    expected: ambient_rank,
                    found: v.dim(),
                });
            }
        }
        let vrep = dd::hrep_to_vrep(ambient_rank, equations, inequalities);
        if !vrep.lineality.is_empty() {
            return Err(Error::NotStrictlyConvex);
        }
        if vrep.rays.is_empty() {
            return Ok(Cone::zero(ambient_rank));
        }
        Cone::from_rays(ambient_rank, &vrep.rays)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_rank
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// Lattice basis of the linear forms vanishing on the span.
    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    /// Primitive inward facet normals, sorted.
    pub fn facet_normals(&self) -> &[LatticeVector] {
        &self.facet_normals
    }

    pub fn ray_index(&self, v: &LatticeVector) -> Option<usize> {
        self.rays.binary_search(v).ok()
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        x.dim() == self.ambient_rank
            && self.equations.iter().all(|e| e.dot(x).is_zero())
            && self.facet_normals.iter().all(|w| !w.dot(x).is_negative())
    }

    pub fn contains_rational(&self, x: &RationalVector) -> bool {
        x.dim() == self.ambient_rank
            && self.equations.iter().all(|e| e.dot_rational(x).is_zero())
            && self
                .facet_normals
                .iter()
                .all(|w| !w.dot_rational(x).is_negative())
    }

    /// Every ray of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.ambient_rank == other.ambient_rank && self.rays.iter().all(|r| other.contains(r))
    }

    /// Indices of the rays on the hyperplane `normal⊥`.
    pub fn rays_on(&self, normal: &LatticeVector) -> Vec<usize> {
        (0..self.rays.len())
            .filter(|&i| normal.dot(&self.rays[i]).is_zero())
            .collect()
    }

    /// Facets, in the order of `facet_normals`.
    pub fn facets(&self) -> Vec<Face> {
        let d = self.dim.saturating_sub(1);
        self.facet_normals
            .iter()
            .map(|w| Face {
                ray_indices: self.rays_on(w),
                dim: d,
            })
            .collect()
    }

    /// The sub-cone spanned by the given rays of `self`.
    pub fn face_cone(&self, ray_indices: &[usize]) -> Cone {
        if ray_indices.is_empty() {
            return Cone::zero(self.ambient_rank);
        }
        let gens: Vec<LatticeVector> = ray_indices.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::from_rays(self.ambient_rank, &gens).expect("subcone of a pointed cone is pointed")
    }

    /// All faces of every dimension, closed under intersection.
    pub fn face_lattice(&self) -> Vec<Face> {
        let all: Vec<usize> = (0..self.rays.len()).collect();
        let facets: Vec<Vec<usize>> = self.facet_normals.iter().map(|w| self.rays_on(w)).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(all);
        let mut queue: Vec<Vec<usize>> = Vec::new();
        for f in &facets {
            if seen.insert(f.clone()) {
                queue.push(f.clone());
            }
        }
        while let Some(s) = queue.pop() {
            for f in &facets {
                let meet: Vec<usize> = s.iter().filter(|i| f.contains(i)).copied().collect();
                if seen.insert(meet.clone()) {
                    queue.push(meet);
                }
            }
        }
        seen.into_iter()
            .map(|ray_indices| {
                let dim = rank(
                    ray_indices.iter().map(|&i| &self.rays[i]),
                    self.ambient_rank,
                );
                Face { ray_indices, dim }
            })
            .collect()
    }

    /// All `k`-dimensional faces.
    pub fn faces(&self, k: usize) -> Result<Vec<Face>> {
        if k > self.dim {
            return Err(Error::FaceDimOutOfRange { k, dim: self.dim });
        }
        Ok(self
            .face_lattice()
            .into_iter()
            .filter(|f| f.dim == k)
            .collect())
    }

    /// Intersection, computed from the union of both inequality descriptions.
    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_rank,
                found: other.ambient_rank,
            });
        }
        let eqs: Vec<LatticeVector> = self
            .equations
            .iter()
            .chain(&other.equations)
            .cloned()
            .collect();
        let ineqs: Vec<LatticeVector> = self
            .facet_normals
            .iter()
            .chain(&other.facet_normals)
            .cloned()
            .collect();
        Cone::from_inequalities(self.ambient_rank, &eqs, &ineqs)
    }

    /// True iff `self` is a face of `other`: contained in it, and some
    /// functional vanishes on `self` while being strictly positive on every
    /// ray of `other` outside `self`.
    pub fn is_face_of(&self, other: &Cone) -> Result<bool> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: other.ambient_rank,
                found: self.ambient_rank,
            });
        }
        if !self.is_subset_of(other) {
            return Ok(false);
        }
        let outside: Vec<RationalVector> = other
            .rays
            .iter()
            .filter(|r| !self.contains(r))
            .map(LatticeVector::to_rational)
            .collect();
        let sys = StrictSystem::new(
            self.ambient_rank,
            self.rays.iter().map(LatticeVector::to_rational).collect(),
            outside,
        )?;
        Ok(strict_feasible(&sys)?.is_feasible())
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ">")
    }
}
