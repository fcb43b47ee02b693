//! The identity sweep behind `planelab verify`.
//!
//! For each permutation alpha the sweep builds the hypergraph of maximal
//! collinear subsets and the Kakeya family of alpha, then checks every
//! identity that ties them together. Sampled runs additionally check the
//! moment identities and Faber's formula on random line families.

use std::sync::Arc;

use planelab_core::incidence::choose2;
use planelab_core::kakeya::{correspondence_holds, half_plane_count, FaberReport};
use planelab_core::rng::Xoshiro256;
use planelab_core::search::{psi_bound, random_permutation};
use planelab_core::{
    maximal_hypergraph, multiplicity_map, psi_brute, psi_fast, FieldSpec, LineFamily, Permutation,
};

use crate::formats::{CaseKind, CheckTally, VerifyMode, VerifyReport, Violation};

pub const PERMUTATION_CHECKS: &[&str] = &[
    "first_moment",
    "second_moment",
    "faber_formula",
    "kakeya_size",
    "excess_norm",
    "correspondence",
    "pair_partition",
    "chain",
    "psi_oracle",
    "psi_bound",
];

pub const FAMILY_CHECKS: &[&str] = &[
    "family_first_moment",
    "family_second_moment",
    "family_faber_formula",
];

pub struct Verifier {
    q: u32,
    tallies: Vec<CheckTally>,
    first_violation: Option<Violation>,
    /// Name of a check whose outcome is inverted, to exercise the failure path.
    fault: Option<String>,
    permutations: u64,
    families: u64,
}

impl Verifier {
    pub fn new(q: u32, fault: Option<String>) -> Self {
        let tallies = PERMUTATION_CHECKS
            .iter()
            .chain(FAMILY_CHECKS)
            .map(|n| CheckTally {
                name: n.to_string(),
                passed: 0,
                failed: 0,
            })
            .collect();
        Verifier {
            q,
            tallies,
            first_violation: None,
            fault,
            permutations: 0,
            families: 0,
        }
    }

    fn record(&mut self, name: &str, holds: bool, kind: CaseKind, data: impl FnOnce() -> Vec<u32>) {
        let holds = holds != (self.fault.as_deref() == Some(name));
        let tally = self
            .tallies
            .iter_mut()
            .find(|t| t.name == name)
            .expect("registered check");
        if holds {
            tally.passed += 1;
        } else {
            tally.failed += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(Violation {
                    check: name.to_string(),
                    kind,
                    data: data(),
                });
            }
        }
    }

    pub fn check_permutation(&mut self, alpha: &Permutation) {
        self.permutations += 1;
        let q = self.q;
        let hyper = maximal_hypergraph(alpha);
        let map = multiplicity_map(&LineFamily::from_permutation(alpha));
        let faber = FaberReport::from_map(&map);
        let psi = psi_fast(alpha);
        let chain_equality = hyper.edges.iter().all(|e| e.len() <= 3);

        let results = [
            ("first_moment", faber.first_moment_holds()),
            ("second_moment", faber.second_moment_holds()),
            ("faber_formula", faber.formula_holds),
            (
                "kakeya_size",
                faber.size == half_plane_count(q) + hyper.norm,
            ),
            ("excess_norm", faber.excess == hyper.norm),
            ("correspondence", correspondence_holds(&hyper, &map)),
            ("pair_partition", hyper.pair_total() == choose2(q as u64)),
            (
                "chain",
                hyper.psi >= hyper.norm && (hyper.psi == hyper.norm) == chain_equality,
            ),
            ("psi_oracle", psi == hyper.psi && psi == psi_brute(alpha)),
            ("psi_bound", psi >= psi_bound(q)),
        ];
        for (name, holds) in results {
            self.record(name, holds, CaseKind::Permutation, || alpha.image_indices());
        }
    }

    pub fn check_family(&mut self, family: &LineFamily) {
        self.families += 1;
        let faber = FaberReport::from_map(&multiplicity_map(family));
        let results = [
            ("family_first_moment", faber.first_moment_holds()),
            ("family_second_moment", faber.second_moment_holds()),
            ("family_faber_formula", faber.formula_holds),
        ];
        for (name, holds) in results {
            self.record(name, holds, CaseKind::Family, || family.offsets());
        }
    }

    pub fn finish(self, mode: VerifyMode) -> VerifyReport {
        VerifyReport {
            q: self.q,
            mode,
            permutations: self.permutations,
            families: self.families,
            all_hold: self.first_violation.is_none(),
            checks: self.tallies,
            first_violation: self.first_violation,
        }
    }
}

/// A uniformly random line family: one offset per direction.
pub fn random_family(field: &Arc<FieldSpec>, rng: &mut Xoshiro256) -> LineFamily {
    let q = field.order();
    let offsets: Vec<u32> = (0..=q).map(|_| rng.below(q as u64) as u32).collect();
    LineFamily::from_offsets(field.clone(), &offsets).expect("offsets are in range")
}

/// Every permutation of the field.
pub fn verify_all(field: &Arc<FieldSpec>, fault: Option<String>) -> VerifyReport {
    let mut v = Verifier::new(field.order(), fault);
    for alpha in Permutation::all(field.clone()) {
        v.check_permutation(&alpha);
    }
    v.finish(VerifyMode::All)
}

/// `samples` random permutations, then `samples` random line families, from one seeded stream.
pub fn verify_samples(
    field: &Arc<FieldSpec>,
    samples: u64,
    seed: u64,
    fault: Option<String>,
) -> VerifyReport {
    let mut v = Verifier::new(field.order(), fault);
    let mut rng = Xoshiro256::seed_from_u64(seed);
    for _ in 0..samples {
        v.check_permutation(&random_permutation(field, &mut rng));
    }
    for _ in 0..samples {
        v.check_family(&random_family(field, &mut rng));
    }
    v.finish(VerifyMode::Samples { samples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf3_sweep_holds() {
        let f = Arc::new(FieldSpec::prime(3).unwrap());
        let r = verify_all(&f, None);
        assert!(r.all_hold);
        assert_eq!(r.permutations, 6);
        assert!(r
            .checks
            .iter()
            .take(PERMUTATION_CHECKS.len())
            .all(|c| c.passed == 6));
    }

    #[test]
    fn injected_fault_is_reported() {
        let f = Arc::new(FieldSpec::prime(5).unwrap());
        let r = verify_samples(&f, 3, 1, Some("family_second_moment".into()));
        assert!(!r.all_hold);
        let v = r.first_violation.unwrap();
        assert_eq!(
            (v.check.as_str(), v.kind),
            ("family_second_moment", CaseKind::Family)
        );
        assert_eq!(v.data.len(), 6);
    }
}
