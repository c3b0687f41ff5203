//! Validated polyhedral fans.
//!
//! A [`Fan`] is a global list of primitive rays plus maximal cones given as
//! ray-index sets. Construction checks the fan axioms pairwise: the
//! intersection of any two maximal cones must be a face of both, and no
//! maximal cone may sit inside another. The `(n − 1)`-dimensional cones
//! (walls) and their incident `n`-cones are tabulated once at construction.
//!
//! Completeness is decided by the wall criterion: every maximal cone is
//! `n`-dimensional, every wall lies in exactly two of them, and the
//! adjacency graph through walls is connected. This is the argument used for
//! fans given by explicit cone lists; fans whose support is disconnected in
//! some other way are outside its scope.

mod iso;

use std::collections::{BTreeMap, HashMap, VecDeque};

use itertools::Itertools;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::exactlin::{hermite_normal_form, IntegerMatrix, LatticeVector};
use crate::par::Exec;

pub use iso::{fans_isomorphic, FanIsomorphism};

/// The orbit closure `V(τ)` of a wall `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallCurveKind {
    /// `A¹ ∖ {0}`: no incident `n`-cone
    Torus,
    /// `A¹`: one incident `n`-cone
    Affine,
    /// `P¹`: two incident `n`-cones
    Projective,
}

/// An `(n − 1)`-dimensional cone of a fan with the `n`-dimensional maximal
/// cones containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub rays: Vec<usize>,
    pub incident: Vec<usize>,
}

impl Wall {
    pub fn kind(&self) -> WallCurveKind {
        match self.incident.len() {
            0 => WallCurveKind::Torus,
            1 => WallCurveKind::Affine,
            _ => WallCurveKind::Projective,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
    cones: Vec<Cone>,
    walls: Vec<Wall>,
    ray_lookup: HashMap<LatticeVector, usize>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.rays == other.rays
            && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl Fan {
    pub fn new(
        ambient_rank: usize,
        rays: Vec<LatticeVector>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan> {
        Fan::new_with(Exec::default(), ambient_rank, rays, max_cones)
    }

    pub fn from_i64(ambient_rank: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Fan> {
        Fan::new(
            ambient_rank,
            rays.iter().map(|r| LatticeVector::from_i64(r)).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    /// Validate and build. The pairwise checks run under `exec`; the verdict
    /// and the reported offending pair do not depend on the strategy.
    pub fn new_with(
        exec: Exec,
        ambient_rank: usize,
        rays: Vec<LatticeVector>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan> {
        let mut prim = Vec::with_capacity(rays.len());
        let mut ray_lookup = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != ambient_rank {
                return Err(Error::DimensionMismatch {
                    expected: ambient_rank,
                    found: r.dim(),
                });
            }
            let p = r.primitive()?;
            if let Some(&j) = ray_lookup.get(&p) {
                return Err(Error::DuplicateRay(j, i));
            }
            ray_lookup.insert(p.clone(), i);
            prim.push(p);
        }

        let mut index_sets = Vec::with_capacity(max_cones.len());
        let mut cones = Vec::with_capacity(max_cones.len());
        let mut used = vec![false; prim.len()];
        for (ci, idx) in max_cones.into_iter().enumerate() {
            let mut idx: Vec<usize> = idx;
            idx.sort_unstable();
            idx.dedup();
            if idx.is_empty() {
                return Err(Error::BadConeIndex { cone: ci, ray: 0 });
            }
            if let Some(&bad) = idx.iter().find(|&&r| r >= prim.len()) {
                return Err(Error::BadConeIndex { cone: ci, ray: bad });
            }
            let gens: Vec<LatticeVector> = idx.iter().map(|&r| prim[r].clone()).collect();
            let cone = Cone::from_rays(ambient_rank, &gens)?;
            if let Some(&bad) = idx.iter().find(|&&r| cone.ray_index(&prim[r]).is_none()) {
                return Err(Error::NonExtremeRay { cone: ci, ray: bad });
            }
            for &r in &idx {
                used[r] = true;
            }
            index_sets.push(idx);
            cones.push(cone);
        }
        if let Some(unused) = used.iter().position(|u| !u) {
            return Err(Error::UnusedRay(unused));
        }

        let pairs: Vec<(usize, usize)> = (0..cones.len()).tuple_combinations().collect();
        let verdicts = exec.map(&pairs, |&(i, j)| check_pair(&cones, i, j));
        for v in verdicts {
            v?;
        }

        let mut fan = Fan {
            ambient_rank,
            rays: prim,
            max_cones: index_sets,
            cones,
            walls: Vec::new(),
            ray_lookup,
        };
        fan.walls = fan.compute_walls();
        Ok(fan)
    }

    fn compute_walls(&self) -> Vec<Wall> {
        let n = self.ambient_rank;
        let mut table: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, cone) in self.cones.iter().enumerate() {
            if cone.dim() == n {
                for facet in cone.facets() {
                    let global = self.globalize(ci, &facet.ray_indices);
                    table.entry(global).or_default().push(ci);
                }
            } else if n > 0 && cone.dim() == n - 1 {
                table.entry(self.max_cones[ci].clone()).or_default();
            }
        }
        table
            .into_iter()
            .map(|(rays, incident)| Wall { rays, incident })
            .collect()
    }

    /// Map indices into `cone(ci).rays()` to global ray indices (sorted).
    fn globalize(&self, ci: usize, local: &[usize]) -> Vec<usize> {
        let rays = self.cones[ci].rays();
        let mut g: Vec<usize> = local.iter().map(|&l| self.ray_lookup[&rays[l]]).collect();
        g.sort_unstable();
        g
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> Result<&LatticeVector> {
        self.rays.get(i).ok_or(Error::UnknownRay(i))
    }

    pub fn ray_index(&self, v: &LatticeVector) -> Option<usize> {
        self.ray_lookup.get(v).copied()
    }

    /// Maximal cones as sorted global ray-index sets.
    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    /// Index of the maximal cone with exactly these rays.
    pub fn find_cone(&self, rays: &[usize]) -> Option<usize> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.max_cones.iter().position(|c| *c == key)
    }

    /// Global ray indices of a sub-cone of `cone(ci)`, or `None` when one of
    /// its rays is not a fan ray.
    pub fn global_rays_of(&self, cone: &Cone) -> Option<Vec<usize>> {
        let mut g = cone
            .rays()
            .iter()
            .map(|r| self.ray_index(r))
            .collect::<Option<Vec<usize>>>()?;
        g.sort_unstable();
        Some(g)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.ambient_rank;
        if self.cones.is_empty() || self.cones.iter().any(|c| c.dim() != n) {
            return false;
        }
        if self.walls.iter().any(|w| w.incident.len() != 2) {
            return false;
        }
        let mut seen = vec![false; self.cones.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for w in self.walls.iter().filter(|w| w.incident.contains(&c)) {
                for &d in &w.incident {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Maximal cones containing ray `rho`.
    pub fn star(&self, rho: usize) -> Result<Vec<usize>> {
        self.ray(rho)?;
        Ok((0..self.max_cones.len())
            .filter(|&c| self.max_cones[c].binary_search(&rho).is_ok())
            .collect())
    }

    pub fn classify_wall_curve(&self, rays: &[usize]) -> Result<WallCurveKind> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(w) = self.walls.iter().find(|w| w.rays == key) {
            return Ok(w.kind());
        }
        for &r in &key {
            self.ray(r)?;
        }
        let cone = if key.is_empty() {
            Cone::zero(self.ambient_rank)
        } else {
            let gens: Vec<LatticeVector> = key.iter().map(|&r| self.rays[r].clone()).collect();
            Cone::from_rays(self.ambient_rank, &gens)?
        };
        if cone.dim() + 1 != self.ambient_rank {
            return Err(Error::NotAWall(format!(
                "cone {cone} has dimension {}, expected {}",
                cone.dim(),
                self.ambient_rank.saturating_sub(1)
            )));
        }
        Err(Error::NotAWall(format!(
            "cone {cone} is not a cone of the fan"
        )))
    }

    /// Integer projection `Z^n → Z^n / Z·l_rho ≅ Z^(n−1)`, as the rows of a
    /// `(n − 1) × n` matrix. Obtained by completing `l_rho` to a lattice basis
    /// through the Hermite form of the row vector `l_rho`.
    pub fn quotient_projection(&self, rho: usize) -> Result<IntegerMatrix> {
        let n = self.ambient_rank;
        if n < 2 {
            return Err(Error::QuotientRank);
        }
        let l = self.ray(rho)?;
        let (_, u) = hermite_normal_form(&IntegerMatrix::from_rows(std::slice::from_ref(l), n)?);
        let rows: Vec<LatticeVector> = (1..n).map(|c| u.col(c)).collect();
        IntegerMatrix::from_rows(&rows, n)
    }

    /// The fan of the orbit closure `V(rho)`: star cones projected along
    /// `rho`. Quotient cone `k` is the image of `star(rho)[k]`.
    pub fn quotient_fan(&self, rho: usize) -> Result<Fan> {
        let proj = self.quotient_projection(rho)?;
        let star = self.star(rho)?;
        let mut rays: Vec<LatticeVector> = Vec::new();
        let mut lookup: HashMap<LatticeVector, usize> = HashMap::new();
        let mut cones = Vec::with_capacity(star.len());
        for &ci in &star {
            let images: Vec<LatticeVector> = self.max_cones[ci]
                .iter()
                .filter(|&&r| r != rho)
                .map(|&r| proj.mul_vec(&self.rays[r]))
                .collect();
            if images.is_empty() {
                return Err(Error::DegenerateQuotient(ci));
            }
            let image = Cone::from_rays(self.ambient_rank - 1, &images)?;
            let idx: Vec<usize> = image
                .rays()
                .iter()
                .map(|v| {
                    *lookup.entry(v.clone()).or_insert_with(|| {
                        rays.push(v.clone());
                        rays.len() - 1
                    })
                })
                .collect();
            cones.push(idx);
        }
        let q = Fan::new(self.ambient_rank - 1, rays, cones)?;
        if q.max_cones.len() != star.len() {
            return Err(Error::Invariant(
                "quotient cones not in bijection with the star".into(),
            ));
        }
        Ok(q)
    }

    /// The same fan in new coordinates `x ↦ A·x`.
    pub fn transform(&self, a: &IntegerMatrix) -> Result<Fan> {
        let rays = self.rays.iter().map(|r| a.mul_vec(r)).collect();
        Fan::new(self.ambient_rank, rays, self.max_cones.clone())
    }
}

fn check_pair(cones: &[Cone], i: usize, j: usize) -> Result<()> {
    let (a, b) = (&cones[i], &cones[j]);
    let meet = a.intersect(b)?;
    if meet == *a {
        return Err(Error::RedundantCone { inner: i, outer: j });
    }
    if meet == *b {
        return Err(Error::RedundantCone { inner: j, outer: i });
    }
    if !meet.is_face_of(a)? || !meet.is_face_of(b)? {
        return Err(Error::NotAFan {
            i,
            j,
            intersection: meet.rays().iter().map(|r| r.to_string()).collect(),
        });
    }
    Ok(())
}
