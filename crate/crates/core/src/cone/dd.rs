//! Double description conversion from an inequality description
//! `{x : E·x = 0, A·x ≥ 0}` to lineality and extreme rays.

use num_traits::{Signed, Zero};

use crate::exactlin::{rational_kernel, LatticeVector};

pub(crate) struct VRep {
    pub lineality: Vec<LatticeVector>,
    pub rays: Vec<LatticeVector>,
}

struct Ray {
    v: LatticeVector,
    /// sorted indices of the processed inequalities tight at `v`
    tight: Vec<usize>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.by_ref().any(|y| y == x))
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter()
        .filter(|x| b.binary_search(x).is_ok())
        .copied()
        .collect()
}

/// Incremental (Motzkin) double description. Lineality directions are
/// eliminated first when an inequality cuts them; otherwise rays are split
/// by sign and adjacent pairs are combined, adjacency decided by the
/// combinatorial test on tight sets.
pub(crate) fn hrep_to_vrep(
    n: usize,
    equations: &[LatticeVector],
    inequalities: &[LatticeVector],
) -> VRep {
    let mut lineality = rational_kernel(equations, n);
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, a) in inequalities.iter().enumerate() {
        if let Some(pos) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            let mut l0 = lineality.remove(pos);
            let mut al0 = a.dot(&l0);
            if al0.is_negative() {
                l0 = l0.neg();
                al0 = -al0;
            }
            let project = |v: &LatticeVector| {
                let av = a.dot(v);
                v.scale(&al0)
                    .sub(&l0.scale(&av))
                    .primitive()
                    .expect("independent of the cut direction")
            };
            lineality = lineality.iter().map(project).collect();
            for r in rays.iter_mut() {
                r.v = project(&r.v);
                r.tight.push(idx);
            }
            rays.push(Ray {
                v: l0,
                tight: (0..idx).collect(),
            });
            continue;
        }

        let values: Vec<_> = rays.iter().map(|r| a.dot(&r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (i, p) in rays.iter().enumerate() {
            if !values[i].is_positive() {
                continue;
            }
            for (j, q) in rays.iter().enumerate() {
                if !values[j].is_negative() {
                    continue;
                }
                let common = intersection(&p.tight, &q.tight);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == i || k == j || !is_subset(&common, &r.tight));
                if !adjacent {
                    continue;
                }
                let v =
                    q.v.scale(&values[i])
                        .sub(&p.v.scale(&values[j]))
                        .primitive()
                        .expect("positive combination of independent rays");
                let mut tight = common;
                tight.push(idx);
                next.push(Ray { v, tight });
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.tight.push(idx);
            }
            next.push(r);
        }
        rays = next;
    }

    let mut out: Vec<LatticeVector> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    VRep {
        lineality,
        rays: out,
    }
}
