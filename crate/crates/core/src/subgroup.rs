//! Subgroup algebra over a fixed parent group.
//!
//! Subgroups are membership bitsets over the parent's element indices, so
//! equality, containment and intersection are word-wise operations.

use std::cmp::Ordering;
use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{greedy_generators, Elem, FiniteGroup, GroupId};

/// Largest group order for which normal subgroups are enumerated.
pub const NORMAL_SUBGROUP_ORDER_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: GroupId,
    members: FixedBitSet,
    size: usize,
}

impl Subgroup {
    pub(crate) fn from_bits(group: &FiniteGroup, members: FixedBitSet) -> Self {
        debug_assert_eq!(members.len(), group.order());
        let size = members.count_ones(..);
        Subgroup {
            parent: group.id(),
            members,
            size,
        }
    }

    /// Wraps an arbitrary element set, returning `None` unless it is closed
    /// under multiplication and contains the identity.
    pub fn from_elements(group: &FiniteGroup, elements: &[Elem]) -> Option<Self> {
        let mut members = FixedBitSet::with_capacity(group.order());
        for &e in elements {
            if e >= group.order() {
                return None;
            }
            members.insert(e);
        }
        if !members.contains(0) {
            return None;
        }
        let list: Vec<Elem> = members.ones().collect();
        for &a in &list {
            for &b in &list {
                if !members.contains(group.mul(a, b)) {
                    return None;
                }
            }
        }
        Some(Self::from_bits(group, members))
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        let mut members = FixedBitSet::with_capacity(group.order());
        members.insert(0);
        Self::from_bits(group, members)
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        let mut members = FixedBitSet::with_capacity(group.order());
        members.insert_range(..);
        Self::from_bits(group, members)
    }

    pub fn parent(&self) -> GroupId {
        self.parent
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn is_whole(&self) -> bool {
        self.size == self.members.len()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn members(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.ones()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.members.is_subset(&other.members)
    }

    /// `|parent : self|`
    pub fn index(&self) -> usize {
        self.members.len() / self.size
    }

    /// Greedy generating set, in ascending index order.
    pub fn generators(&self, group: &FiniteGroup) -> Vec<Elem> {
        greedy_generators(group, self.members())
    }

    /// Re-tables the subgroup as a standalone group. Member `k` (in ascending
    /// parent index order) becomes element `k`; the returned vector maps new
    /// indices back to parent indices.
    pub fn to_group(&self, group: &FiniteGroup) -> (FiniteGroup, Vec<Elem>) {
        let embedding: Vec<Elem> = self.members().collect();
        let mut position = vec![usize::MAX; group.order()];
        for (k, &e) in embedding.iter().enumerate() {
            position[e] = k;
        }
        let standalone = FiniteGroup::from_associative_fn(embedding.len(), |i, j| {
            position[group.mul(embedding[i], embedding[j])]
        })
        .expect("a subgroup is a group");
        (standalone, embedding)
    }

    /// Lifts a subgroup of a standalone copy (see [`Subgroup::to_group`])
    /// back into the parent.
    pub fn lift(group: &FiniteGroup, embedding: &[Elem], inner: &Subgroup) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(group.order());
        for k in inner.members() {
            members.insert(embedding[k]);
        }
        Subgroup::from_bits(group, members)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by size, then lexicographically by ascending member lists.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| self.members.ones().cmp(other.members.ones()))
    }
}

/// `C(x) = { g : gx = xg }`
pub fn centralizer(group: &FiniteGroup, x: Elem) -> Subgroup {
    let mut members = FixedBitSet::with_capacity(group.order());
    for g in group.elements() {
        if group.commutes(g, x) {
            members.insert(g);
        }
    }
    Subgroup::from_bits(group, members)
}

/// Elements commuting with every generator.
pub fn center(group: &FiniteGroup) -> Subgroup {
    let gens = group.generators();
    let mut members = FixedBitSet::with_capacity(group.order());
    for z in group.elements() {
        if gens.iter().all(|&s| group.commutes(z, s)) {
            members.insert(z);
        }
    }
    Subgroup::from_bits(group, members)
}

/// Smallest subgroup containing `seed`.
pub fn generated_subgroup(group: &FiniteGroup, seed: &[Elem]) -> Subgroup {
    let gens = greedy_generators(group, seed.iter().copied());
    Subgroup::from_bits(group, group.closure(&gens))
}

/// Smallest subgroup containing all the given subgroups.
pub fn join(group: &FiniteGroup, parts: &[&Subgroup]) -> Subgroup {
    let mut seed = Vec::new();
    for part in parts {
        seed.extend(part.generators(group));
    }
    generated_subgroup(group, &seed)
}

/// Smallest normal subgroup of `group` containing `seed`.
pub fn normal_closure(group: &FiniteGroup, seed: &[Elem]) -> Subgroup {
    normal_closure_under(group, seed, group.generators())
}

/// Smallest subgroup containing `seed` that is closed under conjugation by
/// each element of `conjugators`.
fn normal_closure_under(group: &FiniteGroup, seed: &[Elem], conjugators: &[Elem]) -> Subgroup {
    let mut gens = greedy_generators(group, seed.iter().copied());
    let mut members = group.closure(&gens);
    let mut cursor = 0;
    while cursor < gens.len() {
        let h = gens[cursor];
        for &s in conjugators {
            let c = group.conj(h, s);
            if !members.contains(c) {
                gens.push(c);
                members = group.closure(&gens);
            }
        }
        cursor += 1;
    }
    Subgroup::from_bits(group, members)
}

/// `g⁻¹ H g = H` for every `g`, tested on generators of both sides.
pub fn is_normal(group: &FiniteGroup, sub: &Subgroup) -> bool {
    let hgens = sub.generators(group);
    let fast = group
        .generators()
        .iter()
        .all(|&s| hgens.iter().all(|&h| sub.contains(group.conj(h, s))));
    debug_assert_eq!(fast, is_normal_definitional(group, sub));
    fast
}

/// Conjugates every member by every element.
pub fn is_normal_definitional(group: &FiniteGroup, sub: &Subgroup) -> bool {
    group
        .elements()
        .all(|g| sub.members().all(|h| sub.contains(group.conj(h, g))))
}

/// `G' = ⟨ x⁻¹y⁻¹xy ⟩`
pub fn commutator_subgroup(group: &FiniteGroup) -> Subgroup {
    let whole = Subgroup::whole(group);
    commutator_of(group, &whole, &whole)
}

/// `[A, B]`: the normal closure in `⟨A, B⟩` of the commutators of their
/// generators.
pub fn commutator_of(group: &FiniteGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let agens = a.generators(group);
    let bgens = b.generators(group);
    let seed: Vec<Elem> = agens
        .iter()
        .flat_map(|&x| bgens.iter().map(move |&y| (x, y)))
        .map(|(x, y)| group.commutator(x, y))
        .collect();
    let mut ambient = agens;
    ambient.extend(bgens);
    normal_closure_under(group, &seed, &ambient)
}

/// `g⁻¹ H g`
pub fn conjugate_subgroup(group: &FiniteGroup, sub: &Subgroup, g: Elem) -> Subgroup {
    let mut members = FixedBitSet::with_capacity(group.order());
    for h in sub.members() {
        members.insert(group.conj(h, g));
    }
    Subgroup::from_bits(group, members)
}

/// `N_G(H) = { g : g⁻¹Hg = H }`
pub fn normalizer(group: &FiniteGroup, sub: &Subgroup) -> Subgroup {
    let hgens = sub.generators(group);
    let mut members = FixedBitSet::with_capacity(group.order());
    for g in group.elements() {
        if hgens.iter().all(|&h| sub.contains(group.conj(h, g))) {
            members.insert(g);
        }
    }
    Subgroup::from_bits(group, members)
}

pub fn subgroup_intersection(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    if a.parent != b.parent {
        return Err(Error::ParentMismatch);
    }
    let mut members = a.members.clone();
    members.intersect_with(&b.members);
    let size = members.count_ones(..);
    Ok(Subgroup {
        parent: a.parent,
        members,
        size,
    })
}

pub fn subgroup_equal(a: &Subgroup, b: &Subgroup) -> Result<bool> {
    if a.parent != b.parent {
        return Err(Error::ParentMismatch);
    }
    Ok(a.members == b.members)
}

/// Conjugacy classes, each sorted, listed by least member.
pub fn conjugacy_classes(group: &FiniteGroup) -> Vec<Vec<Elem>> {
    let mut seen = FixedBitSet::with_capacity(group.order());
    let mut classes = Vec::new();
    for x in group.elements() {
        if seen.contains(x) {
            continue;
        }
        seen.insert(x);
        let mut class = vec![x];
        let mut cursor = 0;
        while cursor < class.len() {
            let y = class[cursor];
            for &s in group.generators() {
                let c = group.conj(y, s);
                if !seen.contains(c) {
                    seen.insert(c);
                    class.push(c);
                }
            }
            cursor += 1;
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Every normal subgroup, sorted by size then members. Normal closures of
/// conjugacy classes are joined pairwise until no new subgroup appears.
/// Returns `None` above [`NORMAL_SUBGROUP_ORDER_CAP`].
pub fn normal_subgroups(group: &FiniteGroup) -> Option<Vec<Subgroup>> {
    if group.order() > NORMAL_SUBGROUP_ORDER_CAP {
        return None;
    }
    let mut found: Vec<Subgroup> = vec![Subgroup::trivial(group)];
    let mut seen: HashSet<FixedBitSet> = found.iter().map(|s| s.members.clone()).collect();
    for class in conjugacy_classes(group).iter().skip(1) {
        let closure = generated_subgroup(group, class);
        if seen.insert(closure.members.clone()) {
            found.push(closure);
        }
    }
    let mut gens: Vec<Vec<Elem>> = found.iter().map(|s| s.generators(group)).collect();
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            if found[i].is_subset_of(&found[j]) || found[j].is_subset_of(&found[i]) {
                continue;
            }
            let seed: Vec<Elem> = gens[i].iter().chain(&gens[j]).copied().collect();
            let joined = generated_subgroup(group, &seed);
            if seen.insert(joined.members.clone()) {
                gens.push(joined.generators(group));
                found.push(joined);
            }
        }
        i += 1;
    }
    found.sort();
    Some(found)
}

/// A normal subgroup together with the quotient it defines.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    parent: GroupId,
    kernel: Subgroup,
    quotient: FiniteGroup,
    projection: Vec<Elem>,
    representatives: Vec<Elem>,
}

impl QuotientMap {
    pub fn parent(&self) -> GroupId {
        self.parent
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn quotient(&self) -> &FiniteGroup {
        &self.quotient
    }

    /// Coset index of `g`.
    #[inline]
    pub fn project(&self, g: Elem) -> Elem {
        self.projection[g]
    }

    pub fn projection(&self) -> &[Elem] {
        &self.projection
    }

    /// Least member of each coset, indexed by coset.
    pub fn representatives(&self) -> &[Elem] {
        &self.representatives
    }

    /// `HN/N` as a subgroup of the quotient.
    pub fn image(&self, sub: &Subgroup) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.quotient.order());
        for h in sub.members() {
            members.insert(self.projection[h]);
        }
        Subgroup::from_bits(&self.quotient, members)
    }
}

/// Quotient by a normal subgroup; cosets are numbered by their least member.
pub fn quotient(group: &FiniteGroup, normal: &Subgroup) -> Result<QuotientMap> {
    if normal.parent != group.id() {
        return Err(Error::ParentMismatch);
    }
    if !is_normal(group, normal) {
        return Err(Error::NotNormal);
    }
    let kernel_members: Vec<Elem> = normal.members().collect();
    let mut projection = vec![usize::MAX; group.order()];
    let mut representatives = Vec::with_capacity(normal.index());
    for g in group.elements() {
        if projection[g] != usize::MAX {
            continue;
        }
        let coset = representatives.len();
        representatives.push(g);
        for &k in &kernel_members {
            projection[group.mul(g, k)] = coset;
        }
    }
    let quotient = FiniteGroup::from_associative_fn(representatives.len(), |a, b| {
        projection[group.mul(representatives[a], representatives[b])]
    })?;
    Ok(QuotientMap {
        parent: group.id(),
        kernel: normal.clone(),
        quotient,
        projection,
        representatives,
    })
}

/// `{ g : gN ∈ S }`
pub fn preimage(map: &QuotientMap, sub: &Subgroup) -> Subgroup {
    let mut members = FixedBitSet::with_capacity(map.projection.len());
    for (g, &c) in map.projection.iter().enumerate() {
        if sub.contains(c) {
            members.insert(g);
        }
    }
    let size = members.count_ones(..);
    Subgroup {
        parent: map.parent,
        members,
        size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // S3 on three points; index order is breadth-first from the identity:
    // 0 = e, 1 = (0 1), 2 = (0 1 2) as [1,2,0], ...
    fn s3() -> (FiniteGroup, Vec<Vec<usize>>) {
        FiniteGroup::from_permutations_with_elements(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 100)
            .unwrap()
    }

    fn find(perms: &[Vec<usize>], p: &[usize]) -> Elem {
        perms.iter().position(|q| q == p).unwrap()
    }

    fn q8() -> FiniteGroup {
        // i = 1, j = 2 as 2x2 complex matrices is awkward; use the regular
        // representation of the dicyclic presentation instead.
        // Elements a^k x^e, k in 0..4, e in 0..2, index k + 4e.
        FiniteGroup::from_fn(8, |l, r| {
            let (i, a) = (l % 4, l / 4);
            let (j, b) = (r % 4, r / 4);
            match (a, b) {
                (0, 0) => (i + j) % 4,
                (0, 1) => (i + j) % 4 + 4,
                (1, 0) => (i + 4 - j) % 4 + 4,
                _ => (i + 4 - j + 2) % 4,
            }
        })
        .unwrap()
    }

    fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::from_fn(n, |a, b| (a + b) % n).unwrap()
    }

    #[test]
    fn centralizers_in_s3() {
        let (g, perms) = s3();
        assert!(centralizer(&g, 0).is_whole());
        let t = find(&perms, &[1, 0, 2]);
        let c = centralizer(&g, t);
        assert_eq!(c.size(), 2);
        assert!(c.contains(t));
        let abelian = cyclic(6);
        assert!(centralizer(&abelian, 4).is_whole());
    }

    #[test]
    fn centers() {
        assert!(center(&cyclic(6)).is_whole());
        assert!(center(&s3().0).is_trivial());
        assert_eq!(center(&q8()).size(), 2);
    }

    #[test]
    fn generated() {
        let (g, perms) = s3();
        assert!(generated_subgroup(&g, &[]).is_trivial());
        assert!(generated_subgroup(&g, &[0]).is_trivial());
        let r = find(&perms, &[1, 2, 0]);
        let t = find(&perms, &[0, 2, 1]);
        assert!(generated_subgroup(&g, &[r, t]).is_whole());
        assert_eq!(generated_subgroup(&g, &[r]).size(), 3);
    }

    #[test]
    fn normality_in_s3() {
        let (g, perms) = s3();
        assert!(is_normal(&g, &Subgroup::trivial(&g)));
        let r = find(&perms, &[1, 2, 0]);
        let t = find(&perms, &[1, 0, 2]);
        assert!(is_normal(&g, &generated_subgroup(&g, &[r])));
        assert!(!is_normal(&g, &generated_subgroup(&g, &[t])));
    }

    #[test]
    fn commutator_subgroups() {
        assert!(commutator_subgroup(&cyclic(12)).is_trivial());
        let (g, perms) = s3();
        let r = find(&perms, &[1, 2, 0]);
        assert_eq!(commutator_subgroup(&g), generated_subgroup(&g, &[r]));
        let q = q8();
        assert_eq!(commutator_subgroup(&q), center(&q));
    }

    #[test]
    fn conjugates_in_s3() {
        let (g, perms) = s3();
        let t = find(&perms, &[1, 0, 2]);
        let r = find(&perms, &[1, 2, 0]);
        let h = generated_subgroup(&g, &[t]);
        assert_eq!(conjugate_subgroup(&g, &h, 0), h);
        let moved = conjugate_subgroup(&g, &h, r);
        assert_eq!(moved.size(), 2);
        assert_ne!(moved, h);
        let n = generated_subgroup(&g, &[r]);
        assert_eq!(conjugate_subgroup(&g, &n, t), n);
    }

    #[test]
    fn quotients() {
        let q = q8();
        let map = quotient(&q, &Subgroup::trivial(&q)).unwrap();
        assert_eq!(map.quotient().order(), 8);
        let map = quotient(&q, &Subgroup::whole(&q)).unwrap();
        assert_eq!(map.quotient().order(), 1);
        let map = quotient(&q, &center(&q)).unwrap();
        let v4 = map.quotient();
        assert_eq!(v4.order(), 4);
        assert!(v4.elements().skip(1).all(|x| v4.element_order(x) == 2));
        for a in q.elements() {
            for b in q.elements() {
                assert_eq!(
                    map.project(q.mul(a, b)),
                    v4.mul(map.project(a), map.project(b))
                );
            }
        }
    }

    #[test]
    fn quotient_requires_normality() {
        let (g, perms) = s3();
        let t = find(&perms, &[1, 0, 2]);
        let err = quotient(&g, &generated_subgroup(&g, &[t])).unwrap_err();
        assert!(matches!(err, Error::NotNormal));
    }

    #[test]
    fn preimages() {
        let q = q8();
        let map = quotient(&q, &center(&q)).unwrap();
        let v4 = map.quotient();
        assert_eq!(preimage(&map, &Subgroup::trivial(v4)), center(&q));
        assert!(preimage(&map, &Subgroup::whole(v4)).is_whole());
        for x in 1..4 {
            let s = generated_subgroup(v4, &[x]);
            let lifted = preimage(&map, &s);
            assert_eq!(lifted.size(), 4);
            assert!(lifted.members().any(|y| q.element_order(y) == 4));
        }
    }

    #[test]
    fn intersections() {
        let (g, perms) = s3();
        let a = generated_subgroup(&g, &[find(&perms, &[1, 0, 2])]);
        let b = generated_subgroup(&g, &[find(&perms, &[2, 1, 0])]);
        assert_eq!(subgroup_intersection(&a, &a).unwrap(), a);
        assert!(subgroup_intersection(&a, &Subgroup::trivial(&g))
            .unwrap()
            .is_trivial());
        assert!(subgroup_intersection(&a, &b).unwrap().is_trivial());
        assert!(!subgroup_equal(&a, &b).unwrap());
        let other = cyclic(6);
        assert!(matches!(
            subgroup_intersection(&a, &Subgroup::whole(&other)),
            Err(Error::ParentMismatch)
        ));
    }

    #[test]
    fn normal_subgroups_of_small_groups() {
        let (g, _) = s3();
        let sizes: Vec<_> = normal_subgroups(&g)
            .unwrap()
            .iter()
            .map(|s| s.size())
            .collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        let sizes: Vec<_> = normal_subgroups(&q8())
            .unwrap()
            .iter()
            .map(|s| s.size())
            .collect();
        // Q8: every subgroup is normal.
        assert_eq!(sizes, vec![1, 2, 4, 4, 4, 8]);
        assert_eq!(normal_subgroups(&cyclic(12)).unwrap().len(), 6);
    }

    #[test]
    fn conjugacy_classes_of_s3() {
        let (g, _) = s3();
        let mut sizes: Vec<_> = conjugacy_classes(&g).iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn extraction_round_trip() {
        let q = q8();
        let z = center(&q);
        let c = centralizer(&q, 1);
        let (standalone, embedding) = c.to_group(&q);
        assert_eq!(standalone.order(), 4);
        let inner_center = center(&standalone);
        assert!(inner_center.is_whole());
        assert_eq!(Subgroup::lift(&q, &embedding, &inner_center), c);
        assert!(z.is_subset_of(&c));
    }
}
