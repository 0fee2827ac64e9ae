//! Feasible super-arm families.
//!
//! A family is enumerated once, ordered canonically and then treated as
//! immutable. Canonical order is lexicographic on the ascending list of
//! member arm indices, so `{0} < {0, 2} < {1} < {2}`. The position of a
//! super arm in that order is its index, and every "smallest index wins"
//! tie-break in the crate refers to it.
//!
//! The empty set is never a member. It only appears as the comparison
//! placeholder used before the first selection.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of enumerated members.
pub const DEFAULT_FAMILY_CAP: usize = 1_000_000;

/// Largest supported number of base arms (per-round service is kept as a
/// 64-bit mask).
pub const MAX_ARMS: usize = 64;

/// How a family is generated. This is the `family` object of the
/// experiment config; arm indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FamilySpec {
    Singletons,
    KSubsets {
        k: usize,
    },
    IndependentSets {
        edges: Vec<[usize; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_size: Option<usize>,
    },
    Explicit {
        members: Vec<Vec<u8>>,
    },
}

/// A feasible subset of arms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperArm {
    index: usize,
    arms: Vec<usize>,
    membership: Vec<bool>,
}

impl SuperArm {
    const PLACEHOLDER: usize = usize::MAX;

    fn new(index: usize, arms: Vec<usize>, num_arms: usize) -> Self {
        let mut membership = vec![false; num_arms];
        for &a in &arms {
            membership[a] = true;
        }
        Self {
            index,
            arms,
            membership,
        }
    }

    /// The empty comparison placeholder. It has no arms and weight zero.
    pub fn placeholder(num_arms: usize) -> Self {
        Self {
            index: Self::PLACEHOLDER,
            arms: Vec::new(),
            membership: vec![false; num_arms],
        }
    }

    pub fn is_placeholder(&self) -> bool {
        self.index == Self::PLACEHOLDER
    }

    /// Canonical position within the family.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Member arms in ascending order.
    pub fn arms(&self) -> &[usize] {
        &self.arms
    }

    pub fn membership(&self) -> &[bool] {
        &self.membership
    }

    pub fn contains(&self, arm: usize) -> bool {
        self.membership.get(arm).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    /// `sum_n weights[n] * S_n`, accumulated over member arms in ascending
    /// order. Every weight comparison in the crate goes through here so that
    /// equal sums compare equal bit for bit.
    pub fn weight(&self, weights: &[f64]) -> f64 {
        self.arms.iter().map(|&a| weights[a]).sum()
    }

    /// Bit mask with bit `n` set for each member arm.
    pub fn mask(&self) -> u64 {
        self.arms.iter().fold(0u64, |m, &a| m | (1u64 << a))
    }
}

/// The canonically ordered collection of feasible super arms.
#[derive(Debug, Clone)]
pub struct FeasibleFamily {
    num_arms: usize,
    members: Vec<SuperArm>,
    spec: FamilySpec,
    s_max: usize,
}

impl FeasibleFamily {
    pub fn enumerate(spec: &FamilySpec, num_arms: usize) -> Result<Self> {
        Self::enumerate_with_cap(spec, num_arms, DEFAULT_FAMILY_CAP)
    }

    pub fn enumerate_with_cap(spec: &FamilySpec, num_arms: usize, cap: usize) -> Result<Self> {
        if num_arms == 0 {
            return Err(Error::Config("family needs at least one arm".into()));
        }
        if num_arms > MAX_ARMS {
            return Err(Error::Config(format!(
                "{num_arms} arms exceeds the supported maximum of {MAX_ARMS}"
            )));
        }
        let lists = match spec {
            FamilySpec::Singletons => subsets(num_arms, 1, 1, |_, _| true, cap)?,
            FamilySpec::KSubsets { k } => {
                if *k == 0 || *k > num_arms {
                    return Err(Error::Config(format!(
                        "k-subsets needs 1 <= k <= {num_arms}, got k = {k}"
                    )));
                }
                subsets(num_arms, *k, *k, |_, _| true, cap)?
            }
            FamilySpec::IndependentSets { edges, max_size } => {
                let max_size = max_size.unwrap_or(num_arms);
                if max_size == 0 {
                    return Err(Error::Config("independent sets need max_size >= 1".into()));
                }
                let mut adjacent = vec![0u64; num_arms];
                for &[a, b] in edges {
                    if a >= num_arms || b >= num_arms {
                        return Err(Error::Config(format!(
                            "edge [{a}, {b}] references an arm outside 0..{num_arms}"
                        )));
                    }
                    if a == b {
                        return Err(Error::Config(format!("self-loop on arm {a}")));
                    }
                    adjacent[a] |= 1 << b;
                    adjacent[b] |= 1 << a;
                }
                subsets(
                    num_arms,
                    1,
                    max_size.min(num_arms),
                    |current, next| current & adjacent[next] == 0,
                    cap,
                )?
            }
            FamilySpec::Explicit { members } => explicit(members, num_arms, cap)?,
        };

        let mut covered = vec![false; num_arms];
        for list in &lists {
            for &a in list {
                covered[a] = true;
            }
        }
        if let Some(arm) = covered.iter().position(|c| !c) {
            return Err(Error::Config(format!(
                "arm {arm} belongs to no feasible super arm"
            )));
        }

        let s_max = lists.iter().map(Vec::len).max().unwrap_or(0);
        let members = lists
            .into_iter()
            .enumerate()
            .map(|(i, arms)| SuperArm::new(i, arms, num_arms))
            .collect();
        Ok(Self {
            num_arms,
            members,
            spec: spec.clone(),
            s_max,
        })
    }

    pub fn num_arms(&self) -> usize {
        self.num_arms
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SuperArm] {
        &self.members
    }

    pub fn get(&self, index: usize) -> Option<&SuperArm> {
        self.members.get(index)
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// Largest member cardinality.
    pub fn s_max(&self) -> usize {
        self.s_max
    }

    /// True when `arm` is exactly the member stored at its index.
    pub fn contains(&self, arm: &SuperArm) -> bool {
        self.members.get(arm.index) == Some(arm)
    }

    /// Uniformly random `m`-combination of member indices, without
    /// replacement. Every fixed member is included with probability
    /// `m / |S|`.
    pub fn sample_distinct<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Result<Vec<usize>> {
        if m == 0 || m > self.len() {
            return Err(Error::Argument(format!(
                "cannot pick {m} distinct members from a family of {}",
                self.len()
            )));
        }
        Ok(rand::seq::index::sample(rng, self.len(), m).into_vec())
    }
}

/// Depth-first enumeration of ascending index lists with sizes in
/// `min_size..=max_size`. Pre-order traversal with ascending children
/// yields lexicographic order directly.
fn subsets<F>(n: usize, min_size: usize, max_size: usize, admit: F, cap: usize) -> Result<Vec<Vec<usize>>>
where
    F: Fn(u64, usize) -> bool,
{
    fn visit<F: Fn(u64, usize) -> bool>(
        n: usize,
        start: usize,
        current: &mut Vec<usize>,
        mask: u64,
        bounds: (usize, usize),
        admit: &F,
        cap: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let (min_size, max_size) = bounds;
        for next in start..n {
            // Not enough arms left to reach the minimum size.
            if current.len() + 1 + (n - next - 1) < min_size {
                break;
            }
            if !admit(mask, next) {
                continue;
            }
            current.push(next);
            if current.len() >= min_size {
                if out.len() == cap {
                    return Err(Error::Resource { cap });
                }
                out.push(current.clone());
            }
            if current.len() < max_size {
                visit(n, next + 1, current, mask | (1 << next), bounds, admit, cap, out)?;
            }
            current.pop();
        }
        Ok(())
    }

    let mut out = Vec::new();
    visit(n, 0, &mut Vec::new(), 0, (min_size, max_size), &admit, cap, &mut out)?;
    Ok(out)
}

fn explicit(members: &[Vec<u8>], num_arms: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    if members.len() > cap {
        return Err(Error::Resource { cap });
    }
    let mut seen = HashSet::new();
    let mut lists = Vec::with_capacity(members.len());
    for (i, bits) in members.iter().enumerate() {
        if bits.len() != num_arms {
            return Err(Error::Config(format!(
                "explicit member {i} has {} bits, expected {num_arms}",
                bits.len()
            )));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Config(format!(
                "explicit member {i} contains non-binary entry {b}"
            )));
        }
        let arms: Vec<usize> = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(a, _)| a)
            .collect();
        if arms.is_empty() {
            return Err(Error::Config(format!("explicit member {i} is the empty set")));
        }
        if !seen.insert(arms.clone()) {
            return Err(Error::Config(format!("explicit member {i} is a duplicate")));
        }
        lists.push(arms);
    }
    lists.sort();
    Ok(lists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lists(f: &FeasibleFamily) -> Vec<Vec<usize>> {
        f.members().iter().map(|s| s.arms().to_vec()).collect()
    }

    #[test]
    fn singletons_of_three() {
        let f = FeasibleFamily::enumerate(&FamilySpec::Singletons, 3).unwrap();
        assert_eq!(lists(&f), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(f.s_max(), 1);
    }

    #[test]
    fn two_subsets_of_three() {
        let f = FeasibleFamily::enumerate(&FamilySpec::KSubsets { k: 2 }, 3).unwrap();
        assert_eq!(lists(&f), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn independent_sets_of_a_path() {
        // Brute force over the 7 nonempty subsets of {0,1,2}, dropping those
        // containing edge {0,1} or {1,2}, leaves {0}, {0,2}, {1}, {2}.
        let spec = FamilySpec::IndependentSets {
            edges: vec![[0, 1], [1, 2]],
            max_size: Some(2),
        };
        let f = FeasibleFamily::enumerate(&spec, 3).unwrap();
        assert_eq!(lists(&f), vec![vec![0], vec![0, 2], vec![1], vec![2]]);
        for (i, m) in f.members().iter().enumerate() {
            assert_eq!(m.index(), i);
        }
    }

    #[test]
    fn explicit_members_are_sorted() {
        let spec = FamilySpec::Explicit {
            members: vec![vec![0, 0, 1], vec![1, 1, 0], vec![1, 0, 0]],
        };
        let f = FeasibleFamily::enumerate(&spec, 3).unwrap();
        assert_eq!(lists(&f), vec![vec![0], vec![0, 1], vec![2]]);
    }

    #[test]
    fn uncovered_arm_is_rejected() {
        let spec = FamilySpec::Explicit {
            members: vec![vec![1, 0, 0], vec![0, 1, 0]],
        };
        assert!(matches!(
            FeasibleFamily::enumerate(&spec, 3),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn explicit_rejects_empty_and_duplicates() {
        let empty = FamilySpec::Explicit {
            members: vec![vec![0, 0], vec![1, 1]],
        };
        assert!(FeasibleFamily::enumerate(&empty, 2).is_err());
        let dup = FamilySpec::Explicit {
            members: vec![vec![1, 1], vec![1, 1]],
        };
        assert!(FeasibleFamily::enumerate(&dup, 2).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let spec = FamilySpec::KSubsets { k: 5 };
        assert!(matches!(
            FeasibleFamily::enumerate_with_cap(&spec, 12, 100),
            Err(Error::Resource { cap: 100 })
        ));
        assert_eq!(FeasibleFamily::enumerate(&spec, 12).unwrap().len(), 792);
    }

    #[test]
    fn sample_distinct_bounds() {
        let f = FeasibleFamily::enumerate(&FamilySpec::Singletons, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(f.sample_distinct(0, &mut rng).is_err());
        assert!(f.sample_distinct(11, &mut rng).is_err());
        let mut all = f.sample_distinct(10, &mut rng).unwrap();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn placeholder_is_not_a_member() {
        let f = FeasibleFamily::enumerate(&FamilySpec::Singletons, 2).unwrap();
        let p = SuperArm::placeholder(2);
        assert!(p.is_placeholder());
        assert!(!f.contains(&p));
        assert_eq!(p.weight(&[5.0, 7.0]), 0.0);
    }
}
