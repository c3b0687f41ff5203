//! Pyramidal extensions, Egyptian position and the small modification.
//!
//! For a ray `ρ` of an `n`-cone `σ`, `σ′` is the cone on the other rays.
//! Either `σ′` is a facet of `σ` (`LowDim`), or `σ′` is `n`-dimensional and
//! `l_ρ` must be beyond exactly one facet `η` of `σ′` and strictly beneath all
//! others (`Pyramidal`, with `σ″ = η + ρ`). A point on a facet hyperplane of
//! `σ′` is neither, and makes the pair `NotPyramidal`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{classify_position, Cone, Position};
use crate::error::{Error, Result};
use crate::exactlin::LatticeVector;
use crate::fan::{fans_isomorphic, Fan, WallCurveKind};
use crate::par::Exec;

/// Seed of the membership sampling in [`small_modification`].
pub const SAMPLING_SEED: u64 = 0x5EED;
const SAMPLES_PER_CONE: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PyramidalClassification {
    /// `dim σ′ = n − 1`; here `σ″ = σ`
    LowDim { sigma_prime: Cone },
    Pyramidal {
        sigma_prime: Cone,
        /// the facet of `σ′` that `ρ` is beyond, with its inward normal
        eta: Cone,
        normal: LatticeVector,
        sigma_double_prime: Cone,
    },
    NotPyramidal {
        sigma_prime: Cone,
        beyond: Vec<Cone>,
        on_hyperplane: Vec<Cone>,
    },
}

impl PyramidalClassification {
    pub fn is_pyramidal(&self) -> bool {
        !matches!(self, PyramidalClassification::NotPyramidal { .. })
    }

    pub fn sigma_prime(&self) -> &Cone {
        match self {
            PyramidalClassification::LowDim { sigma_prime }
            | PyramidalClassification::Pyramidal { sigma_prime, .. }
            | PyramidalClassification::NotPyramidal { sigma_prime, .. } => sigma_prime,
        }
    }
}

/// The cone on the rays of `sigma` other than `rho`.
pub fn sigma_prime(sigma: &Cone, rho: &LatticeVector) -> Result<Cone> {
    let rho = rho.primitive()?;
    if sigma.ray_index(&rho).is_none() {
        return Err(Error::NotARayOfCone);
    }
    let rest: Vec<LatticeVector> = sigma
        .rays()
        .iter()
        .filter(|r| **r != rho)
        .cloned()
        .collect();
    if rest.is_empty() {
        return Ok(Cone::zero(sigma.ambient_rank()));
    }
    Cone::from_rays(sigma.ambient_rank(), &rest)
}

type RaySet = BTreeSet<LatticeVector>;

fn proper_faces(c: &Cone) -> BTreeSet<RaySet> {
    c.face_lattice()
        .into_iter()
        .filter(|f| f.ray_indices.len() < c.rays().len())
        .map(|f| f.ray_indices.iter().map(|&i| c.rays()[i].clone()).collect())
        .collect()
}

/// Check that the proper faces of `sigma` are the proper faces of `σ′` other
/// than `η`, together with `τ + ρ` for the proper faces `τ` of `η`.
fn check_face_prediction(sigma: &Cone, sp: &Cone, eta: &Cone, rho: &LatticeVector) -> Result<()> {
    let eta_rays: RaySet = eta.rays().iter().cloned().collect();
    let mut predicted: BTreeSet<RaySet> = proper_faces(sp);
    predicted.remove(&eta_rays);
    for mut tau in proper_faces(eta) {
        tau.insert(rho.clone());
        predicted.insert(tau);
    }
    if predicted != proper_faces(sigma) {
        return Err(Error::Invariant(format!(
            "face lattice of {sigma} differs from the pyramidal prediction"
        )));
    }
    Ok(())
}

/// Classify `sigma` as an extension of `σ′` by `rho`.
pub fn classify_pyramidal(sigma: &Cone, rho: &LatticeVector) -> Result<PyramidalClassification> {
    let n = sigma.ambient_rank();
    if !sigma.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: sigma.dim(),
            ambient: n,
        });
    }
    let sp = sigma_prime(sigma, rho)?;
    let rho = rho.primitive()?;
    if sp.dim() + 1 == n {
        return Ok(PyramidalClassification::LowDim { sigma_prime: sp });
    }
    let mut beyond = Vec::new();
    let mut on = Vec::new();
    for (w, facet) in sp.facet_normals().iter().zip(sp.facets()) {
        match classify_position(w, &rho) {
            Position::Beneath => {}
            Position::Beyond => beyond.push((w.clone(), sp.face_cone(&facet.ray_indices))),
            Position::OnHyperplane => on.push(sp.face_cone(&facet.ray_indices)),
        }
    }
    if beyond.len() != 1 || !on.is_empty() {
        return Ok(PyramidalClassification::NotPyramidal {
            sigma_prime: sp,
            beyond: beyond.into_iter().map(|(_, c)| c).collect(),
            on_hyperplane: on,
        });
    }
    let (normal, eta) = beyond.pop().expect("one beyond facet");
    let mut gens = eta.rays().to_vec();
    gens.push(rho.clone());
    let sdp = Cone::from_rays(n, &gens)?;
    check_face_prediction(sigma, &sp, &eta, &rho)?;
    Ok(PyramidalClassification::Pyramidal {
        sigma_prime: sp,
        eta,
        normal,
        sigma_double_prime: sdp,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgyptianReport {
    pub ray: usize,
    /// `(maximal cone index, classification)` for every `n`-cone of the star
    pub per_cone: Vec<(usize, PyramidalClassification)>,
    pub verdict: bool,
}

/// Classify every `n`-dimensional cone of `Star(ρ)`. Fans that are not
/// complete are accepted; only their `n`-dimensional star cones count.
pub fn egyptian_report(f: &Fan, rho: usize) -> Result<EgyptianReport> {
    egyptian_report_with(Exec::default(), f, rho)
}

pub fn egyptian_report_with(exec: Exec, f: &Fan, rho: usize) -> Result<EgyptianReport> {
    let l = f.ray(rho)?.clone();
    let star: Vec<usize> = f
        .star(rho)?
        .into_iter()
        .filter(|&c| f.cone(c).is_full_dimensional())
        .collect();
    let classes = exec.map(&star, |&c| classify_pyramidal(f.cone(c), &l));
    let mut per_cone = Vec::with_capacity(star.len());
    for (c, k) in star.into_iter().zip(classes) {
        per_cone.push((c, k?));
    }
    let verdict = per_cone.iter().all(|(_, k)| k.is_pyramidal());
    Ok(EgyptianReport {
        ray: rho,
        per_cone,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCone {
    pub original: usize,
    pub sigma_prime: usize,
    pub sigma_double_prime: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModificationResult {
    pub original: Fan,
    pub fan: Fan,
    /// index of `ρ`; rays are unchanged by the modification
    pub ray: usize,
    pub split_cones: Vec<SplitCone>,
    /// `η = σ′ ∩ σ″` as sorted global ray indices, one per split cone
    pub exceptional_walls: Vec<Vec<usize>>,
}

fn random_point(rng: &mut ChaCha8Rng, sigma: &Cone) -> LatticeVector {
    let mut p = LatticeVector::zero(sigma.ambient_rank());
    for r in sigma.rays() {
        let c: i64 = rng.gen_range(1..=1000);
        p = p.add(&r.scale(&c.into()));
    }
    p
}

fn check_split(sigma: &Cone, sp: &Cone, sdp: &Cone, eta: &Cone) -> Result<()> {
    if sp.intersect(sdp)? != *eta {
        return Err(Error::Invariant(format!(
            "{sp} and {sdp} do not meet in {eta}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
    for _ in 0..SAMPLES_PER_CONE {
        let p = random_point(&mut rng, sigma);
        if !sp.contains(&p) && !sdp.contains(&p) {
            return Err(Error::Invariant(format!(
                "sample {p} of {sigma} lies in neither half"
            )));
        }
    }
    Ok(())
}

/// Replace every star cone with `n`-dimensional `σ′` by `σ′` and `σ″`, in
/// place and in that order.
pub fn small_modification(f: &Fan, rho: usize) -> Result<ModificationResult> {
    small_modification_with(Exec::default(), f, rho)
}

pub fn small_modification_with(exec: Exec, f: &Fan, rho: usize) -> Result<ModificationResult> {
    let report = egyptian_report_with(exec, f, rho)?;
    if !report.verdict {
        return Err(Error::NotEgyptian);
    }
    let pyramids: Vec<(usize, &Cone, &Cone, &Cone)> = report
        .per_cone
        .iter()
        .filter_map(|(c, k)| match k {
            PyramidalClassification::Pyramidal {
                sigma_prime,
                eta,
                sigma_double_prime,
                ..
            } => Some((*c, sigma_prime, eta, sigma_double_prime)),
            _ => None,
        })
        .collect();
    for r in exec.map(&pyramids, |&(c, sp, eta, sdp)| {
        check_split(f.cone(c), sp, sdp, eta)
    }) {
        r?;
    }

    let global = |c: &Cone| {
        f.global_rays_of(c)
            .ok_or_else(|| Error::Invariant(format!("{c} has a ray outside the fan")))
    };
    let mut cones = Vec::with_capacity(f.max_cones().len() + pyramids.len());
    let mut split_cones = Vec::new();
    let mut exceptional_walls = Vec::new();
    let mut next = pyramids.iter().peekable();
    for (c, rays) in f.max_cones().iter().enumerate() {
        match next.peek() {
            Some(&&(pc, sp, eta, sdp)) if pc == c => {
                next.next();
                split_cones.push(SplitCone {
                    original: c,
                    sigma_prime: cones.len(),
                    sigma_double_prime: cones.len() + 1,
                });
                cones.push(global(sp)?);
                cones.push(global(sdp)?);
                exceptional_walls.push(global(eta)?);
            }
            _ => cones.push(rays.clone()),
        }
    }
    let fan = Fan::new_with(exec, f.ambient_rank(), f.rays().to_vec(), cones)?;
    if f.is_complete() && !fan.is_complete() {
        return Err(Error::Invariant(
            "modification of a complete fan is not complete".into(),
        ));
    }
    Ok(ModificationResult {
        original: f.clone(),
        fan,
        ray: rho,
        split_cones,
        exceptional_walls,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCheck {
    pub wall: Vec<usize>,
    pub kind: Option<WallCurveKind>,
    /// incident to exactly its two siblings
    pub siblings_only: bool,
    /// `η + ρ` is a maximal cone of the modified fan
    pub eta_plus_rho_maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModificationReport {
    pub walls: Vec<WallCheck>,
    pub quotient_unchanged: bool,
    pub failures: Vec<String>,
}

impl ModificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-derive the geometry of the exceptional locus from the modified fan:
/// every exceptional wall is a projective line meeting the strict transform
/// once, and the fan of `D_ρ` is unchanged.
pub fn verify_modification(m: &ModificationResult) -> Result<ModificationReport> {
    let mut failures = Vec::new();
    let mut walls = Vec::new();
    for (eta, split) in m.exceptional_walls.iter().zip(&m.split_cones) {
        let wall = m.fan.walls().iter().find(|w| w.rays == *eta);
        let kind = wall.map(|w| w.kind());
        let mut siblings = vec![split.sigma_prime, split.sigma_double_prime];
        siblings.sort_unstable();
        let siblings_only = wall.is_some_and(|w| w.incident == siblings);
        if !siblings_only || kind != Some(WallCurveKind::Projective) {
            failures.push(format!(
                "wall {eta:?}: expected a projective line between cones {siblings:?}"
            ));
        }
        let mut cone = eta.clone();
        cone.push(m.ray);
        cone.sort_unstable();
        let eta_plus_rho_maximal = m.fan.find_cone(&cone).is_some();
        if !eta_plus_rho_maximal {
            failures.push(format!("wall {eta:?}: {cone:?} is not a maximal cone"));
        }
        walls.push(WallCheck {
            wall: eta.clone(),
            kind,
            siblings_only,
            eta_plus_rho_maximal,
        });
    }
    let quotient_unchanged = quotients_agree(&m.original, &m.fan, m.ray)?;
    if !quotient_unchanged {
        failures.push("quotient fan changed".into());
    }
    Ok(ModificationReport {
        walls,
        quotient_unchanged,
        failures,
    })
}

fn quotients_agree(a: &Fan, b: &Fan, rho: usize) -> Result<bool> {
    if a.ambient_rank() < 2 {
        return Ok(a.star(rho)? == b.star(rho)?);
    }
    let qa = a.quotient_fan(rho)?;
    let qb = b.quotient_fan(rho)?;
    if qa == qb {
        return Ok(true);
    }
    match fans_isomorphic(&qa, &qb) {
        Ok(iso) => Ok(iso.is_some()),
        Err(Error::RaysDoNotSpan) => Ok(false),
        Err(e) => Err(e),
    }
}
