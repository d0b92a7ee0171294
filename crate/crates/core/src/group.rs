//! Finite groups stored as explicit multiplication tables.
//!
//! Every [`FiniteGroup`] is validated on construction: identity, Latin-square,
//! inverse and associativity laws are checked before the value is handed out,
//! and the identity always sits at index 0.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Index of an element inside one particular [`FiniteGroup`].
pub type Elem = usize;

/// Default upper bound on group orders accepted by the builders.
pub const DEFAULT_MAX_ORDER: usize = 5000;

/// Tables up to this order get the full cubic associativity check.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 512;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

/// Opaque identity of a constructed group, used to reject mixing subgroups
/// of different parents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupId(u64);

impl GroupId {
    fn fresh() -> Self {
        GroupId(NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed))
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    id: GroupId,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
    generators: Vec<Elem>,
}

impl FiniteGroup {
    /// Validates a square table of element indices and returns the group it
    /// describes, relabelled so that the identity is element 0.
    pub fn from_cayley_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::not_a_group("non-empty", vec![]));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup {
                    law: "square",
                    witness: vec![i],
                    detail: format!("row {i} has {} entries, expected {n}", row.len()),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::NotAGroup {
                        law: "closure",
                        witness: vec![i, j],
                        detail: format!("entry {v} out of range 0..{n}"),
                    });
                }
                table.push(v as u32);
            }
        }
        Self::from_flat(n, table, true)
    }

    /// Builds the table of an `n`-element operation given as a closure on
    /// indices, then validates it.
    pub fn from_fn(n: usize, mul: impl FnMut(Elem, Elem) -> Elem) -> Result<Self> {
        Self::from_fn_checked(n, mul, true)
    }

    /// For operations that are associative by construction (products,
    /// cosets, restrictions); the remaining laws are still checked.
    pub(crate) fn from_associative_fn(
        n: usize,
        mul: impl FnMut(Elem, Elem) -> Elem,
    ) -> Result<Self> {
        Self::from_fn_checked(n, mul, false)
    }

    fn from_fn_checked(
        n: usize,
        mut mul: impl FnMut(Elem, Elem) -> Elem,
        check_associative: bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::not_a_group("non-empty", vec![]));
        }
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = mul(i, j);
                if v >= n {
                    return Err(Error::NotAGroup {
                        law: "closure",
                        witness: vec![i, j],
                        detail: format!("entry {v} out of range 0..{n}"),
                    });
                }
                table.push(v as u32);
            }
        }
        Self::from_flat(n, table, check_associative)
    }

    fn from_flat(n: usize, mut table: Vec<u32>, check_associative: bool) -> Result<Self> {
        let identity = find_identity(n, &table)?;
        if identity != 0 {
            let swap = |x: usize| -> usize {
                if x == identity {
                    0
                } else if x == 0 {
                    identity
                } else {
                    x
                }
            };
            let mut relabelled = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    relabelled[swap(i) * n + swap(j)] = swap(table[i * n + j] as usize) as u32;
                }
            }
            table = relabelled;
        }
        check_latin_square(n, &table)?;
        let inverses = compute_inverses(n, &table)?;
        if check_associative {
            check_associativity(n, &table)?;
        }
        let orders = compute_orders(n, &table);

        let mut group = FiniteGroup {
            id: GroupId::fresh(),
            order: n,
            table,
            inverses,
            orders,
            generators: Vec::new(),
        };
        group.generators = greedy_generators(&group, 0..n);
        Ok(group)
    }

    /// Closure of a list of permutations of `0..degree` under composition.
    /// The product `x * y` applies `x` first, then `y`.
    pub fn from_permutations(
        generators: &[Vec<usize>],
        degree: usize,
        max_order: usize,
    ) -> Result<Self> {
        Self::from_permutations_with_elements(generators, degree, max_order).map(|(g, _)| g)
    }

    /// Same as [`FiniteGroup::from_permutations`], also returning the
    /// permutation behind each element index. Elements are enumerated
    /// breadth-first from the identity, applying generators in the given order.
    pub fn from_permutations_with_elements(
        generators: &[Vec<usize>],
        degree: usize,
        max_order: usize,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        for (k, g) in generators.iter().enumerate() {
            validate_permutation(g, degree)
                .map_err(|msg| Error::InvalidPermutation(format!("generator {k}: {msg}")))?;
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(identity, 0);

        let mut cursor = 0;
        while cursor < elements.len() {
            for g in generators {
                let next = compose(&elements[cursor], g);
                if !index.contains_key(&next) {
                    if elements.len() >= max_order {
                        return Err(Error::OrderLimitExceeded { limit: max_order });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            cursor += 1;
        }

        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&compose(a, b)] as u32);
            }
        }
        Ok((Self::from_flat(n, table, false)?, elements))
    }

    /// Returns the isomorphic group in which old element `i` carries index
    /// `relabel[i]`. `relabel` must be a permutation of `0..n`.
    pub fn relabelled(&self, relabel: &[usize]) -> Result<Self> {
        let n = self.order;
        validate_permutation(relabel, n).map_err(Error::InvalidPermutation)?;
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                table[relabel[i] * n + relabel[j]] = relabel[self.mul(i, j)] as u32;
            }
        }
        Self::from_flat(n, table, false)
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a] as usize
    }

    /// `g⁻¹ x g`
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `x⁻¹ y⁻¹ x y`
    #[inline]
    pub fn commutator(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    #[inline]
    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, x: Elem, k: usize) -> Elem {
        let k = k % self.element_order(x);
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Least `m ≥ 1` with `x^m = 1`; cached at construction.
    #[inline]
    pub fn element_order(&self, x: Elem) -> usize {
        self.orders[x] as usize
    }

    pub fn element_orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.orders.iter().map(|&o| o as usize)
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        self.orders
            .iter()
            .fold(1usize, |acc, &o| lcm(acc, o as usize))
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn inverses(&self) -> impl Iterator<Item = Elem> + '_ {
        self.inverses.iter().map(|&i| i as usize)
    }

    pub fn row(&self, a: Elem) -> impl Iterator<Item = Elem> + '_ {
        self.table[a * self.order..(a + 1) * self.order]
            .iter()
            .map(|&v| v as usize)
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|i| self.row(i).collect()).collect()
    }

    /// Subgroup generated by `seed`, as a membership bitset, computed by
    /// breadth-first right multiplication from the identity.
    pub(crate) fn closure(&self, seed: &[Elem]) -> FixedBitSet {
        let mut members = FixedBitSet::with_capacity(self.order);
        members.insert(0);
        let mut queue = vec![0];
        let mut cursor = 0;
        while cursor < queue.len() {
            let m = queue[cursor];
            cursor += 1;
            for &s in seed {
                let p = self.mul(m, s);
                if !members.contains(p) {
                    members.insert(p);
                    queue.push(p);
                }
            }
        }
        members
    }

    /// Like [`FiniteGroup::closure`] but gives up once more than `cap`
    /// members are found.
    pub(crate) fn closure_capped(&self, seed: &[Elem], cap: usize) -> Option<FixedBitSet> {
        let mut members = FixedBitSet::with_capacity(self.order);
        members.insert(0);
        let mut queue = vec![0];
        let mut cursor = 0;
        while cursor < queue.len() {
            let m = queue[cursor];
            cursor += 1;
            for &s in seed {
                let p = self.mul(m, s);
                if !members.contains(p) {
                    if queue.len() == cap {
                        return None;
                    }
                    members.insert(p);
                    queue.push(p);
                }
            }
        }
        Some(members)
    }
}

/// Greedy generating set for the subgroup spanned by `candidates`: walk them
/// in order and keep each one not already generated.
pub(crate) fn greedy_generators(
    group: &FiniteGroup,
    candidates: impl IntoIterator<Item = Elem>,
) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut members = FixedBitSet::with_capacity(group.order());
    members.insert(0);
    for x in candidates {
        if !members.contains(x) {
            gens.push(x);
            members = group.closure(&gens);
        }
    }
    gens
}

fn find_identity(n: usize, table: &[u32]) -> Result<usize> {
    let is_left_identity = |e: usize| (0..n).all(|j| table[e * n + j] as usize == j);
    let is_right_identity = |e: usize| (0..n).all(|i| table[i * n + e] as usize == i);
    (0..n)
        .find(|&e| is_left_identity(e) && is_right_identity(e))
        .ok_or_else(|| Error::NotAGroup {
            law: "identity",
            witness: vec![],
            detail: "no element acts as a two-sided identity".into(),
        })
}

fn check_latin_square(n: usize, table: &[u32]) -> Result<()> {
    let mut seen = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..n {
            let v = table[i * n + j] as usize;
            if seen[v] != usize::MAX && seen[v] >= i * n {
                let prev = seen[v] - i * n;
                return Err(Error::NotAGroup {
                    law: "latin-square",
                    witness: vec![i, prev, j],
                    detail: format!("row {i} repeats {v} in columns {prev} and {j}"),
                });
            }
            seen[v] = i * n + j;
        }
    }
    seen.iter_mut().for_each(|s| *s = usize::MAX);
    for j in 0..n {
        for i in 0..n {
            let v = table[i * n + j] as usize;
            if seen[v] != usize::MAX && seen[v] >= j * n {
                let prev = seen[v] - j * n;
                return Err(Error::NotAGroup {
                    law: "latin-square",
                    witness: vec![prev, i, j],
                    detail: format!("column {j} repeats {v} in rows {prev} and {i}"),
                });
            }
            seen[v] = j * n + i;
        }
    }
    Ok(())
}

fn compute_inverses(n: usize, table: &[u32]) -> Result<Vec<u32>> {
    let mut inverses = vec![0u32; n];
    for i in 0..n {
        let j = (0..n)
            .find(|&j| table[i * n + j] == 0)
            .expect("latin square rows contain the identity");
        if table[j * n + i] != 0 {
            return Err(Error::not_a_group("inverse", vec![i, j]));
        }
        inverses[i] = j as u32;
    }
    Ok(inverses)
}

fn check_associativity(n: usize, table: &[u32]) -> Result<()> {
    let m = |a: usize, b: usize| table[a * n + b] as usize;
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        for i in 0..n {
            for j in 0..n {
                let ij = m(i, j);
                for k in 0..n {
                    if m(ij, k) != m(i, m(j, k)) {
                        return Err(Error::not_a_group("associativity", vec![i, j, k]));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xa550_c1a7 ^ n as u64);
        for _ in 0..10 * n * n {
            let (i, j, k) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            if m(m(i, j), k) != m(i, m(j, k)) {
                return Err(Error::not_a_group("associativity", vec![i, j, k]));
            }
        }
    }
    Ok(())
}

fn compute_orders(n: usize, table: &[u32]) -> Vec<u32> {
    (0..n)
        .map(|x| {
            let mut y = x;
            let mut m = 1u32;
            while y != 0 {
                y = table[y * n + x] as usize;
                m += 1;
            }
            m
        })
        .collect()
}

fn validate_permutation(p: &[usize], degree: usize) -> std::result::Result<(), String> {
    if p.len() != degree {
        return Err(format!("length {} does not match degree {degree}", p.len()));
    }
    let mut seen = vec![false; degree];
    for &v in p {
        if v >= degree {
            return Err(format!("image {v} out of range 0..{degree}"));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(format!("image {v} repeated"));
        }
    }
    Ok(())
}

/// `first` then `second`.
fn compose(first: &[usize], second: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| second[i]).collect()
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_rows() -> Vec<Vec<usize>> {
        let (g, _) = FiniteGroup::from_permutations_with_elements(
            &[vec![1, 0, 2], vec![1, 2, 0]],
            3,
            DEFAULT_MAX_ORDER,
        )
        .unwrap();
        g.table_rows()
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_cayley_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.exponent(), 1);
        assert_eq!(g.element_order(0), 1);
        assert!(g.generators().is_empty());
    }

    #[test]
    fn z2_table() {
        let g = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inverses().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn identity_is_relocated_to_zero() {
        // Z3 written with the identity labelled 2.
        let rows = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_cayley_table(&rows).unwrap();
        assert_eq!(g.row(0).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(g.element_order(1), 3);
    }

    #[test]
    fn s3_element_orders() {
        let g = FiniteGroup::from_cayley_table(&s3_rows()).unwrap();
        let mut orders: Vec<_> = g.element_orders().collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
        assert_eq!(g.exponent(), 6);
        for x in g.elements() {
            if g.element_order(x) == 3 {
                assert_eq!(g.mul(x, g.mul(x, x)), 0);
            }
        }
    }

    #[test]
    fn permutation_closure_s3() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 100).unwrap();
        assert_eq!(g.order(), 6);
        let central: Vec<_> = g
            .elements()
            .filter(|&z| g.elements().all(|x| g.commutes(x, z)))
            .collect();
        assert_eq!(central, vec![0]);
    }

    #[test]
    fn empty_generator_list_is_trivial() {
        let g = FiniteGroup::from_permutations(&[], 4, 100).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn single_transposition() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0]], 2, 100).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn order_limit() {
        let err = FiniteGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4, 10)
            .unwrap_err();
        assert!(matches!(err, Error::OrderLimitExceeded { limit: 10 }));
    }

    #[test]
    fn invalid_permutation() {
        let err = FiniteGroup::from_permutations(&[vec![0, 0, 1]], 3, 10).unwrap_err();
        assert!(matches!(err, Error::InvalidPermutation(_)));
        let err = FiniteGroup::from_permutations(&[vec![0, 1]], 3, 10).unwrap_err();
        assert!(matches!(err, Error::InvalidPermutation(_)));
    }

    #[test]
    fn rejects_missing_identity() {
        let rows = vec![vec![1, 0], vec![1, 0]];
        let err = FiniteGroup::from_cayley_table(&rows).unwrap_err();
        assert!(matches!(
            err,
            Error::NotAGroup {
                law: "identity",
                ..
            }
        ));
    }

    #[test]
    fn rejects_repeated_row_entry() {
        let mut rows = s3_rows();
        rows[3][4] = rows[3][5];
        let err = FiniteGroup::from_cayley_table(&rows).unwrap_err();
        assert!(matches!(
            err,
            Error::NotAGroup {
                law: "latin-square",
                ..
            }
        ));
    }

    #[test]
    fn rejects_non_associative_quasigroup() {
        // Latin square with identity 0 that is not associative (order 5 loop).
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_cayley_table(&rows).unwrap_err();
        assert!(matches!(
            err,
            Error::NotAGroup {
                law: "associativity",
                ..
            }
        ));
    }

    #[test]
    fn rejects_non_square() {
        let err = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1]]).unwrap_err();
        assert!(matches!(err, Error::NotAGroup { law: "square", .. }));
        let err = FiniteGroup::from_cayley_table(&[vec![0, 2], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, Error::NotAGroup { law: "closure", .. }));
    }

    #[test]
    fn sampled_associativity_on_large_cyclic() {
        let g = FiniteGroup::from_fn(600, |a, b| (a + b) % 600).unwrap();
        assert_eq!(g.exponent(), 600);
        assert_eq!(g.generators(), &[1]);
    }

    #[test]
    fn pow_and_commutator() {
        let g = FiniteGroup::from_fn(8, |a, b| (a + b) % 8).unwrap();
        assert_eq!(g.pow(3, 3), 1);
        assert_eq!(g.pow(3, 8), 0);
        assert_eq!(g.commutator(3, 5), 0);
    }
}
