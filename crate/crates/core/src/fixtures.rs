//! Small named fans and seeded cone pools shared by tests, benches and the CLI.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::Cone;
use crate::exactlin::LatticeVector;
use crate::fan::Fan;

/// Rays `e_1, …, e_n, −Σ e_i`; maximal cones are all `n`-subsets.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    rays.push(LatticeVector::from_i64(&vec![-1; n]));
    let cones = (0..=n).combinations(n).collect();
    Fan::new(n, rays, cones).expect("projective space fan")
}

pub fn p1_times_p1() -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
    .expect("P1 x P1 fan")
}

/// Face fan of the square pyramid: the cone over the square
/// `{(±1,0,1), (0,±1,1)}` and four simplicial cones through `(0,0,−1)`.
pub fn square_pyramid_fan() -> Fan {
    Fan::from_i64(
        3,
        &[
            &[1, 0, 1],
            &[0, 1, 1],
            &[-1, 0, 1],
            &[0, -1, 1],
            &[0, 0, -1],
        ],
        &[
            &[0, 1, 2, 3],
            &[0, 1, 4],
            &[1, 2, 4],
            &[2, 3, 4],
            &[3, 0, 4],
        ],
    )
    .expect("square pyramid fan")
}

/// The non-complete fan of a single rank-4 cone whose last ray is beyond two
/// facets of the cone on the others.
pub fn non_pyramidal_fan() -> Fan {
    Fan::from_i64(
        4,
        &[
            &[1, 1, 0, 1],
            &[1, -1, 0, 1],
            &[-1, -1, 0, 1],
            &[-1, 1, 0, 1],
            &[0, 0, 1, 1],
            &[0, 3, -1, 1],
        ],
        &[&[0, 1, 2, 3, 4, 5]],
    )
    .expect("single cone fan")
}

/// `count` full-dimensional strictly convex 3-cones with 4 to 8 extreme rays,
/// generated by rays with positive last coordinate. Deterministic in `seed`.
pub fn random_three_cones(count: usize, seed: u64) -> Vec<Cone> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let want = rng.gen_range(4..=8);
        let gens: Vec<LatticeVector> = (0..want + 3)
            .map(|_| {
                LatticeVector::from_i64(&[
                    rng.gen_range(-6..=6),
                    rng.gen_range(-6..=6),
                    rng.gen_range(1..=4),
                ])
            })
            .collect();
        let Ok(cone) = Cone::from_rays(3, &gens) else {
            continue;
        };
        if cone.dim() == 3 && (4..=8).contains(&cone.rays().len()) {
            out.push(cone);
        }
    }
    out
}
