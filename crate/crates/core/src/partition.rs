//! Group partitions and Frobenius structure.
//!
//! A partition is a set of non-trivial subgroups such that every non-trivial
//! element lies in exactly one of them. The centralizer partition of a group
//! `G` is built on `G/Z(G)` from the images of the centralizers of
//! non-central elements.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{gcd, Elem, FiniteGroup, GroupId};
use crate::structure::{hughes_subgroup, is_abelian, is_p_group, PrimeFactorization};
use crate::subgroup::{
    center, centralizer, conjugate_subgroup, generated_subgroup, is_normal, normal_closure,
    normal_subgroups, quotient, subgroup_intersection, QuotientMap, Subgroup,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parent: GroupId,
    components: Vec<Subgroup>,
}

impl Partition {
    /// Collects components, deduplicated and sorted by size then members.
    /// Does not check the partition property; see [`is_partition`].
    pub fn new(group: &FiniteGroup, components: impl IntoIterator<Item = Subgroup>) -> Self {
        let mut components: Vec<Subgroup> = components.into_iter().collect();
        components.sort();
        components.dedup();
        Partition {
            parent: group.id(),
            components,
        }
    }

    pub fn parent(&self) -> GroupId {
        self.parent
    }

    pub fn components(&self) -> &[Subgroup] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// A single component.
    pub fn is_trivial(&self) -> bool {
        self.components.len() == 1
    }

    fn component_set(&self) -> HashSet<&FixedBitSet> {
        self.components.iter().map(Subgroup::bits).collect()
    }

    /// Index of the component containing `x`, if any.
    fn component_of(&self, x: Elem) -> Option<usize> {
        self.components.iter().position(|c| c.contains(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusStructure {
    pub kernel: Subgroup,
    pub complement: Subgroup,
}

/// Builds `G/Z(G)` and the images `C(x)/Z(G)` for non-central `x`; returns
/// the maximal ones as a partition when they form one. Centralizers nested
/// inside a larger one (`C(s) ⊆ C(a)` for `s ∈ C(a)`) are absorbed by it.
pub fn centralizer_partition(group: &FiniteGroup) -> Result<Option<(QuotientMap, Partition)>> {
    if is_abelian(group) {
        return Err(Error::AbelianGroup);
    }
    let z = center(group);
    let map = quotient(group, &z)?;
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut distinct = Vec::new();
    for x in group.elements().filter(|&x| !z.contains(x)) {
        let c = centralizer(group, x);
        if seen.insert(c.bits().clone()) {
            distinct.push(c);
        }
    }
    let partition = partition_from_centralizers(&map, &distinct);
    Ok(partition.map(|p| (map, p)))
}

/// Centralizer partition from precomputed distinct proper centralizers.
pub(crate) fn partition_from_centralizers(
    map: &QuotientMap,
    proper_centralizers: &[Subgroup],
) -> Option<Partition> {
    let q = map.quotient();
    let maximal = proper_centralizers.iter().filter(|c| {
        !proper_centralizers
            .iter()
            .any(|d| d.size() > c.size() && c.is_subset_of(d))
    });
    let partition = Partition::new(q, maximal.map(|c| map.image(c)));
    is_partition(q, partition.components()).then_some(partition)
}

/// Every non-trivial element lies in exactly one component, and every
/// component is non-trivial.
pub fn is_partition(group: &FiniteGroup, components: &[Subgroup]) -> bool {
    if components
        .iter()
        .any(|c| c.is_trivial() || c.parent() != group.id())
    {
        return false;
    }
    let mut count = vec![0u32; group.order()];
    for c in components {
        for x in c.members() {
            count[x] += 1;
        }
    }
    count.iter().skip(1).all(|&k| k == 1)
}

/// Conjugation permutes the components.
pub fn is_normal_partition(group: &FiniteGroup, partition: &Partition) -> bool {
    let set = partition.component_set();
    partition.components.iter().all(|x| {
        group
            .generators()
            .iter()
            .all(|&g| set.contains(conjugate_subgroup(group, x, g).bits()))
    })
}

fn meets_cleanly(components: &[Subgroup], n: &Subgroup) -> bool {
    components
        .iter()
        .all(|x| x.is_subset_of(n) || subgroup_intersection(x, n).is_ok_and(|i| i.is_trivial()))
}

/// Candidate normal subgroups: every normal subgroup when the group is small
/// enough to enumerate them, plus the normal closures of the components.
fn normal_candidates(group: &FiniteGroup, partition: &Partition) -> Vec<Subgroup> {
    let mut candidates: Vec<Subgroup> = partition
        .components
        .iter()
        .map(|c| normal_closure(group, &c.generators(group)))
        .collect();
    if let Some(all) = normal_subgroups(group) {
        candidates.extend(all);
    }
    candidates.sort();
    candidates.dedup();
    candidates
}

/// A proper non-trivial normal `N` such that each component is inside `N`
/// or meets it trivially.
pub fn is_nonsimple_partition(group: &FiniteGroup, partition: &Partition) -> Option<Subgroup> {
    normal_candidates(group, partition)
        .into_iter()
        .filter(|n| !n.is_trivial() && !n.is_whole())
        .find(|n| meets_cleanly(&partition.components, n))
}

/// `(K, p)` with `K` normal of index `p` such that every `x ∉ K` has order
/// `p` and `⟨x⟩` is a component.
pub fn is_elementary_partition(
    group: &FiniteGroup,
    partition: &Partition,
) -> Option<(Subgroup, usize)> {
    if partition.len() < 2 {
        return None;
    }
    let set = partition.component_set();
    let enumerated = normal_subgroups(group);
    for p in PrimeFactorization::of(group.order()).primes() {
        let candidates: Vec<Subgroup> = match &enumerated {
            Some(all) => all.iter().filter(|k| k.index() == p).cloned().collect(),
            None => {
                let mut c: Vec<Subgroup> = partition
                    .components
                    .iter()
                    .filter(|k| k.index() == p && is_normal(group, k))
                    .cloned()
                    .collect();
                let hughes = hughes_subgroup(group, p);
                if hughes.index() == p {
                    c.push(hughes);
                }
                c
            }
        };
        for k in candidates {
            let elementary = group.elements().filter(|&x| !k.contains(x)).all(|x| {
                group.element_order(x) == p && set.contains(generated_subgroup(group, &[x]).bits())
            });
            if elementary {
                return Some((k, p));
            }
        }
    }
    None
}

/// In a non-abelian `p`-group with a non-trivial partition, all elements of
/// order greater than `p` share one component.
pub fn miller_check(group: &FiniteGroup, partition: &Partition) -> Result<bool> {
    let Some(p) = is_p_group(group) else {
        return Err(Error::NotApplicable("not a p-group".into()));
    };
    if is_abelian(group) {
        return Err(Error::NotApplicable("abelian group".into()));
    }
    if partition.len() < 2 {
        return Err(Error::NotApplicable("trivial partition".into()));
    }
    let mut homes = group
        .elements()
        .filter(|&x| group.element_order(x) > p)
        .map(|x| partition.component_of(x));
    Ok(match homes.next() {
        None => true,
        Some(first) => first.is_some() && homes.all(|h| h == first),
    })
}

/// Searches proper non-trivial normal subgroups for a Frobenius kernel.
/// Needs normal-subgroup enumeration, so returns `None` above the
/// enumeration cap.
pub fn find_frobenius_structure(group: &FiniteGroup) -> Option<FrobeniusStructure> {
    if group.order() <= 1 {
        return None;
    }
    normal_subgroups(group)?
        .into_iter()
        .filter(|k| !k.is_trivial() && !k.is_whole())
        .filter(|k| gcd(k.size(), k.index()) == 1)
        .filter(|k| {
            k.members()
                .skip(1)
                .all(|x| centralizer(group, x).is_subset_of(k))
        })
        .find_map(|k| frobenius_with_kernel(group, &k))
}

/// Looks for a complement to `kernel` generated by at most two elements of
/// order dividing the index, then validates the Frobenius property. By
/// Schur–Zassenhaus all complements of a normal Hall subgroup are
/// conjugate, so the first complement found decides.
pub fn frobenius_with_kernel(group: &FiniteGroup, kernel: &Subgroup) -> Option<FrobeniusStructure> {
    let m = kernel.index();
    if kernel.is_trivial() || m == 1 || gcd(kernel.size(), m) != 1 || !is_normal(group, kernel) {
        return None;
    }
    let candidates: Vec<Elem> = group
        .elements()
        .filter(|&x| !kernel.contains(x) && m.is_multiple_of(group.element_order(x)))
        .collect();
    let complement = candidates
        .iter()
        .find(|&&x| group.element_order(x) == m)
        .map(|&x| generated_subgroup(group, &[x]))
        .or_else(|| {
            candidates.iter().enumerate().find_map(|(i, &x)| {
                candidates[i + 1..].iter().find_map(|&y| {
                    let bits = group.closure_capped(&[x, y], m)?;
                    (bits.count_ones(..) == m).then(|| Subgroup::from_bits(group, bits))
                })
            })
        })?;
    validate_frobenius(group, kernel, &complement).then(|| FrobeniusStructure {
        kernel: kernel.clone(),
        complement,
    })
}

/// Definitional check: `K` normal, `|K||H| = |G|`, `H ∩ H^g = 1` for all
/// `g ∉ H`, and `K` is exactly the identity plus the elements lying in no
/// conjugate of `H`.
pub fn validate_frobenius(group: &FiniteGroup, kernel: &Subgroup, complement: &Subgroup) -> bool {
    if complement.is_trivial()
        || complement.is_whole()
        || kernel.size() * complement.size() != group.order()
        || !is_normal(group, kernel)
        || !subgroup_intersection(kernel, complement).is_ok_and(|i| i.is_trivial())
    {
        return false;
    }
    let mut covered = FixedBitSet::with_capacity(group.order());
    for g in group.elements() {
        let conj = conjugate_subgroup(group, complement, g);
        if !complement.contains(g)
            && !subgroup_intersection(complement, &conj).is_ok_and(|i| i.is_trivial())
        {
            return false;
        }
        covered.union_with(conj.bits());
    }
    group
        .elements()
        .skip(1)
        .all(|x| covered.contains(x) != kernel.contains(x))
}

/// The kernel of some Frobenius structure is a component and the remaining
/// components are exactly the conjugates of the complement.
pub fn is_frobenius_partition(group: &FiniteGroup, partition: &Partition) -> bool {
    if partition.len() < 2 {
        return false;
    }
    partition.components.iter().any(|k| {
        let Some(fs) = frobenius_with_kernel(group, k) else {
            return false;
        };
        let rest: HashSet<&FixedBitSet> = partition
            .components
            .iter()
            .filter(|c| *c != k)
            .map(Subgroup::bits)
            .collect();
        let conjugates: HashSet<FixedBitSet> = group
            .elements()
            .map(|g| conjugate_subgroup(group, &fs.complement, g).bits().clone())
            .collect();
        rest.len() == conjugates.len() && conjugates.iter().all(|c| rest.contains(c))
    })
}
