//! The fans `Δ_u` of the varieties `Y_u` and the end-to-end report.
//!
//! Rays, in this fixed order (`e_1, …, e_n` the standard basis):
//!
//! | index      | ray |
//! |------------|-----|
//! | 0          | `e = e_n` |
//! | 1..=n      | `f_i = e_i` for `i < n`, `f_n = −(e_1 + … + e_{n−1})` |
//! | n+1..=2n   | `g_i = h − f_i` for `i < n`, `g_n = u·h − f_n` |
//! | 2n+1       | `h = −e` |
//!
//! Maximal cones: `σ_i = ⟨e, g_i, f_k : k ≠ i⟩` for `i = 1..n`, then
//! `σ_ij = ⟨h, g_i, g_j, f_k : k ≠ i, j⟩` for `i < j` in lexicographic order.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;

use crate::divisor::{
    cartier_index, chern_growth, divisor_polytope, is_ample, is_projective, picard_group,
    polytope_degree, Ehrhart, GrowthReport, Projectivity, ToricDivisor,
};
use crate::egyptian::{
    egyptian_report, small_modification, verify_modification, EgyptianReport, ModificationReport,
};
use crate::error::{Error, Result};
use crate::exactlin::{rank, FGAbelianGroup, LatticeVector};
use crate::fan::{fans_isomorphic, Fan, FanIsomorphism};
use crate::fixtures;
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct YuConfig {
    n: usize,
    u: u64,
}

impl YuConfig {
    pub fn new(n: usize, u: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidConfig(format!(
                "n must be at least 3, got {n}"
            )));
        }
        if u < 1 {
            return Err(Error::InvalidConfig(format!(
                "u must be at least 1, got {u}"
            )));
        }
        Ok(YuConfig { n, u })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn e(&self) -> usize {
        0
    }

    /// `f_i`, `1 ≤ i ≤ n`
    pub fn f(&self, i: usize) -> usize {
        i
    }

    /// `g_i`, `1 ≤ i ≤ n`
    pub fn g(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn h(&self) -> usize {
        2 * self.n + 1
    }

    pub fn ray_labels(&self) -> Vec<String> {
        let mut labels = vec!["e".to_string()];
        labels.extend((1..=self.n).map(|i| format!("f{i}")));
        labels.extend((1..=self.n).map(|i| format!("g{i}")));
        labels.push("h".into());
        labels
    }

    fn sigma(&self, i: usize) -> Vec<usize> {
        let mut c = vec![self.e(), self.g(i)];
        c.extend((1..=self.n).filter(|&k| k != i).map(|k| self.f(k)));
        c.sort_unstable();
        c
    }

    fn sigma_pair(&self, i: usize, j: usize) -> Vec<usize> {
        let mut c = vec![self.h(), self.g(i), self.g(j)];
        c.extend(
            (1..=self.n)
                .filter(|&k| k != i && k != j)
                .map(|k| self.f(k)),
        );
        c.sort_unstable();
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum YuCone {
    Sigma(usize),
    SigmaPair(usize, usize),
}

impl std::fmt::Display for YuCone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            YuCone::Sigma(i) => write!(f, "σ_{i}"),
            YuCone::SigmaPair(i, j) => write!(f, "σ_{i},{j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YuFan {
    pub config: YuConfig,
    pub fan: Fan,
    /// one label per maximal cone, in the fan's cone order
    pub cones: Vec<YuCone>,
}

impl YuFan {
    pub fn cone_labels(&self) -> Vec<String> {
        self.cones.iter().map(ToString::to_string).collect()
    }
}

pub fn yu_rays(cfg: &YuConfig) -> Vec<LatticeVector> {
    let n = cfg.n;
    let u = BigInt::from(cfg.u);
    let e = LatticeVector::unit(n, n - 1);
    let h = e.neg();
    let mut f: Vec<LatticeVector> = (0..n - 1).map(|i| LatticeVector::unit(n, i)).collect();
    let mut fn_ = vec![-1i64; n];
    fn_[n - 1] = 0;
    f.push(LatticeVector::from_i64(&fn_));
    let mut g: Vec<LatticeVector> = f[..n - 1].iter().map(|fi| h.sub(fi)).collect();
    g.push(h.scale(&u).sub(&f[n - 1]));
    let mut rays = vec![e];
    rays.extend(f);
    rays.extend(g);
    rays.push(h);
    rays
}

pub fn yu_fan(cfg: YuConfig) -> Result<YuFan> {
    yu_fan_with(Exec::default(), cfg)
}

pub fn yu_fan_with(exec: Exec, cfg: YuConfig) -> Result<YuFan> {
    let mut labels: Vec<YuCone> = (1..=cfg.n).map(YuCone::Sigma).collect();
    labels.extend(
        (1..=cfg.n)
            .tuple_combinations()
            .map(|(i, j)| YuCone::SigmaPair(i, j)),
    );
    let cones = labels
        .iter()
        .map(|l| match *l {
            YuCone::Sigma(i) => cfg.sigma(i),
            YuCone::SigmaPair(i, j) => cfg.sigma_pair(i, j),
        })
        .collect();
    let fan = Fan::new_with(exec, cfg.n, yu_rays(&cfg), cones)?;
    Ok(YuFan {
        config: cfg,
        fan,
        cones: labels,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CombinatoricsReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CombinatoricsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn sum(rays: &[LatticeVector], idx: impl IntoIterator<Item = usize>, n: usize) -> LatticeVector {
    idx.into_iter()
        .fold(LatticeVector::zero(n), |acc, i| acc.add(&rays[i]))
}

fn is_circuit(vs: &[&LatticeVector], n: usize) -> bool {
    rank(vs.iter().copied(), n) == vs.len() - 1
        && (0..vs.len()).all(|skip| {
            let rest: Vec<&LatticeVector> = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, v)| *v)
                .collect();
            rank(rest, n) == vs.len() - 1
        })
}

/// Check the circuit relations, the facet lists and the table of pairwise
/// intersections against the fan as built. Ray roles are read from the
/// documented index order.
pub fn verify_yu_combinatorics(y: &YuFan) -> CombinatoricsReport {
    let cfg = y.config;
    let n = cfg.n;
    let f = &y.fan;
    let rays = f.rays();
    let mut report = CombinatoricsReport::default();
    if rays.len() != 2 * n + 2 || f.max_cones().len() != n * (n + 1) / 2 {
        report.check(false, || "ray or cone count".into());
        return report;
    }
    let u = BigInt::from(cfg.u);
    let fs = |skip: &[usize]| -> Vec<usize> {
        (1..=n)
            .filter(|k| !skip.contains(k))
            .map(|k| cfg.f(k))
            .collect()
    };

    // circuit relations
    for i in 1..n {
        let lhs = rays[cfg.e()].add(&rays[cfg.g(i)]);
        report.check(lhs == sum(rays, fs(&[i]), n), || {
            format!("e + g{i} = Σ_(j≠{i}) f_j")
        });
    }
    let lhs = rays[cfg.e()].scale(&u).add(&rays[cfg.g(n)]);
    report.check(lhs == sum(rays, fs(&[n]), n), || {
        "u·e + g_n = Σ_(j<n) f_j".into()
    });
    for (i, j) in (1..=n).tuple_combinations() {
        let c = if i != n && j != n {
            BigInt::from(2)
        } else {
            &u + 1
        };
        let lhs = rays[cfg.g(i)].add(&rays[cfg.g(j)]);
        let rhs = rays[cfg.h()].scale(&c).add(&sum(rays, fs(&[i, j]), n));
        report.check(lhs == rhs, || format!("g{i} + g{j} = {c}h + Σ f_k"));
    }
    for (c, rs) in f.max_cones().iter().enumerate() {
        let vs: Vec<&LatticeVector> = rs.iter().map(|&r| &rays[r]).collect();
        report.check(is_circuit(&vs, n), || {
            format!("generators of {} form a circuit", y.cones[c])
        });
    }

    // facet lists
    let set = |v: Vec<usize>| v.into_iter().collect::<BTreeSet<usize>>();
    for (c, label) in y.cones.iter().enumerate() {
        let mut expected: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        match *label {
            YuCone::Sigma(i) => {
                for k in (1..=n).filter(|&k| k != i) {
                    expected.insert(set(std::iter::once(cfg.e()).chain(fs(&[i, k])).collect()));
                    expected.insert(set(std::iter::once(cfg.g(i)).chain(fs(&[i, k])).collect()));
                }
            }
            YuCone::SigmaPair(i, j) => {
                for k in (1..=n).filter(|&k| k != i && k != j) {
                    for g in [cfg.g(i), cfg.g(j)] {
                        expected.insert(set([cfg.h(), g]
                            .into_iter()
                            .chain(fs(&[i, j, k]))
                            .collect()));
                    }
                }
                for g in [cfg.g(i), cfg.g(j)] {
                    expected.insert(set(std::iter::once(g).chain(fs(&[i, j])).collect()));
                }
            }
        }
        let cone = f.cone(c);
        let actual: BTreeSet<BTreeSet<usize>> = cone
            .facets()
            .iter()
            .map(|face| {
                face.ray_indices
                    .iter()
                    .map(|&l| f.ray_index(&cone.rays()[l]).expect("fan ray"))
                    .collect()
            })
            .collect();
        report.check(actual.len() == 2 * n - 2, || {
            format!("{label} has {} facets", actual.len())
        });
        report.check(actual == expected, || format!("facets of {label}"));
    }

    // pairwise intersections
    for (a, b) in (0..y.cones.len()).tuple_combinations() {
        let (la, lb) = (y.cones[a], y.cones[b]);
        let (expected, codim): (Vec<usize>, usize) = match (la, lb) {
            (YuCone::Sigma(i), YuCone::Sigma(j)) => {
                (std::iter::once(cfg.e()).chain(fs(&[i, j])).collect(), 1)
            }
            (YuCone::Sigma(i), YuCone::SigmaPair(j, k))
            | (YuCone::SigmaPair(j, k), YuCone::Sigma(i)) => {
                if i == j || i == k {
                    let other = if i == j { k } else { j };
                    (
                        std::iter::once(cfg.g(i)).chain(fs(&[i, other])).collect(),
                        1,
                    )
                } else {
                    (fs(&[i, j, k]), 3)
                }
            }
            (YuCone::SigmaPair(i, j), YuCone::SigmaPair(p, q)) => {
                let shared: Vec<usize> =
                    [i, j].into_iter().filter(|x| *x == p || *x == q).collect();
                match shared.as_slice() {
                    [k] => {
                        let others = [i, j, p, q];
                        (
                            [cfg.h(), cfg.g(*k)]
                                .into_iter()
                                .chain(fs(&others))
                                .collect(),
                            1,
                        )
                    }
                    _ => (
                        std::iter::once(cfg.h()).chain(fs(&[i, j, p, q])).collect(),
                        3,
                    ),
                }
            }
        };
        let meet = f.cone(a).intersect(f.cone(b));
        let ok = meet.as_ref().is_ok_and(|m| {
            f.global_rays_of(m).map(set) == Some(set(expected.clone())) && m.dim() + codim == n
        });
        report.check(ok, || format!("{la} ∩ {lb}"));
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineReport {
    pub config: YuConfig,
    pub complete: bool,
    pub picard: FGAbelianGroup,
    pub projective: Projectivity,
    pub egyptian: EgyptianReport,
    pub modified_cones: usize,
    pub modification: ModificationReport,
    /// Cartier index of `D_e` on the modified fan
    pub cartier_index_modified: Option<BigInt>,
    pub divisor_fan_iso: Option<FanIsomorphism>,
    pub quotient_projective: bool,
    pub degree: Option<Ehrhart>,
    pub growth: Option<GrowthReport>,
}

/// The degree of `O(1)` on the fan of `D_ρ`: the prime divisor of its first
/// ray, when that divisor is ample.
fn quotient_degree(q: &Fan) -> Result<Option<Ehrhart>> {
    let d = ToricDivisor::prime(q.rays().len(), 0);
    if !is_ample(q, &d)? {
        return Ok(None);
    }
    let p = divisor_polytope(q, &d)?;
    Ok(Some(polytope_degree(&p, q.ambient_rank())?))
}

/// Every verdict about `Y_u` in one place.
pub fn yu_report(cfg: YuConfig) -> Result<PipelineReport> {
    let y = yu_fan(cfg)?;
    let f = &y.fan;
    let e = cfg.e();
    let picard = picard_group(f)?;
    let projective = is_projective(f)?;
    let egyptian = egyptian_report(f, e)?;
    let m = small_modification(f, e)?;
    let modification = verify_modification(&m)?;
    let cartier_index_modified = cartier_index(&m.fan, &ToricDivisor::prime(f.rays().len(), e))?;
    let q = f.quotient_fan(e)?;
    let divisor_fan_iso = fans_isomorphic(&q, &fixtures::projective_space(cfg.n - 1))?;
    let quotient_projective = matches!(is_projective(&q)?, Projectivity::Feasible { .. });
    let (degree, growth) = if egyptian.verdict && quotient_projective {
        let degree = quotient_degree(&q)?;
        let growth = match &degree {
            Some(d) => Some(chern_growth(cfg.n, &d.degree)?),
            None => None,
        };
        (degree, growth)
    } else {
        (None, None)
    };
    Ok(PipelineReport {
        config: cfg,
        complete: f.is_complete(),
        picard,
        projective,
        egyptian,
        modified_cones: m.fan.max_cones().len(),
        modification,
        cartier_index_modified,
        divisor_fan_iso,
        quotient_projective,
        degree,
        growth,
    })
}

/// Reports for several configurations, computed under `exec`.
pub fn yu_reports(exec: Exec, configs: &[YuConfig]) -> Vec<Result<PipelineReport>> {
    exec.map(configs, |&c| yu_report(c))
}

/// `(n, u)` for `n ∈ 3..=5`, `u ∈ 1..=3`.
pub fn standard_grid() -> Vec<YuConfig> {
    (3..=5)
        .cartesian_product(1..=3)
        .map(|(n, u)| YuConfig::new(n, u).expect("valid grid point"))
        .collect()
}
