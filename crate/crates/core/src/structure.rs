//! Structural predicates and distinguished subgroups: abelian, cyclic,
//! nilpotent and p-group tests, Sylow subgroups and p-cores, the Fitting and
//! Hughes subgroups, and the CA test.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::subgroup::{
    centralizer, commutator_of, conjugate_subgroup, generated_subgroup, join, normalizer,
    subgroup_intersection, Subgroup,
};

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Order of `a` in the multiplicative group mod `m`, if `a` is a unit.
pub fn multiplicative_order(a: usize, m: usize) -> Option<usize> {
    if m < 2 || crate::group::gcd(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    Some(k)
}

/// `(prime, multiplicity)` pairs with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeFactorization(pub Vec<(usize, u32)>);

impl PrimeFactorization {
    pub fn of(mut n: usize) -> Self {
        let mut factors = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                let mut k = 0;
                while n.is_multiple_of(d) {
                    n /= d;
                    k += 1;
                }
                factors.push((d, k));
            }
            d += 1;
        }
        if n > 1 {
            factors.push((n, 1));
        }
        PrimeFactorization(factors)
    }

    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn product(&self) -> usize {
        self.0.iter().map(|&(p, k)| p.pow(k)).product()
    }

    /// Largest power of `p` dividing the factored number.
    pub fn part(&self, p: usize) -> usize {
        self.0
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(1, |&(q, k)| q.pow(k))
    }
}

/// The prime `p` with `n = p^k`, `k ≥ 1`.
pub fn prime_of_power(n: usize) -> Option<usize> {
    match PrimeFactorization::of(n).0.as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

fn is_power_of(n: usize, p: usize) -> bool {
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

pub fn is_abelian(group: &FiniteGroup) -> bool {
    let gens = group.generators();
    gens.iter()
        .enumerate()
        .all(|(i, &a)| gens[i + 1..].iter().all(|&b| group.commutes(a, b)))
}

pub fn is_abelian_subgroup(group: &FiniteGroup, sub: &Subgroup) -> bool {
    let gens = sub.generators(group);
    gens.iter()
        .enumerate()
        .all(|(i, &a)| gens[i + 1..].iter().all(|&b| group.commutes(a, b)))
}

pub fn is_cyclic(group: &FiniteGroup) -> bool {
    group.element_orders().any(|o| o == group.order())
}

pub fn is_cyclic_subgroup(group: &FiniteGroup, sub: &Subgroup) -> bool {
    sub.members().any(|x| group.element_order(x) == sub.size())
}

/// `Some(p)` when the order is a positive power of the prime `p`. The trivial
/// group determines no prime and yields `None`.
pub fn is_p_group(group: &FiniteGroup) -> Option<usize> {
    prime_of_power(group.order())
}

pub fn is_p_subgroup(sub: &Subgroup) -> Option<usize> {
    prime_of_power(sub.size())
}

/// A Sylow `p`-subgroup, grown from a cyclic `p`-subgroup by repeatedly
/// adjoining an element of its normalizer whose coset has `p`-power order.
pub fn sylow_subgroup(group: &FiniteGroup, p: usize) -> Result<Subgroup> {
    let n = group.order();
    if !is_prime(p) || !n.is_multiple_of(p) {
        return Err(Error::PrimeDoesNotDivide { prime: p, order: n });
    }
    let full = PrimeFactorization::of(n).part(p);
    let start = group
        .elements()
        .find(|&x| x != 0 && is_power_of(group.element_order(x), p))
        .expect("Cauchy: an element of order p exists");
    let mut sylow = generated_subgroup(group, &[start]);
    while sylow.size() < full {
        let norm = normalizer(group, &sylow);
        let extension = norm
            .members()
            .filter(|&y| !sylow.contains(y))
            .find(|&y| is_power_of(coset_order(group, &sylow, y), p))
            .expect("a non-Sylow p-subgroup has p dividing |N(P) : P|");
        let mut seed = sylow.generators(group);
        seed.push(extension);
        sylow = generated_subgroup(group, &seed);
    }
    debug_assert_eq!(sylow.size(), full);
    Ok(sylow)
}

/// Least `m ≥ 1` with `y^m ∈ sub`.
fn coset_order(group: &FiniteGroup, sub: &Subgroup, y: Elem) -> usize {
    let mut z = y;
    let mut m = 1;
    while !sub.contains(z) {
        z = group.mul(z, y);
        m += 1;
    }
    m
}

/// `O_p(G)`: the intersection of a Sylow `p`-subgroup with all its
/// conjugates. Trivial when `p` does not divide the order.
pub fn p_core(group: &FiniteGroup, p: usize) -> Subgroup {
    let Ok(sylow) = sylow_subgroup(group, p) else {
        return Subgroup::trivial(group);
    };
    let mut core = sylow.clone();
    for g in group.elements() {
        if core.is_trivial() {
            break;
        }
        let conj = conjugate_subgroup(group, &sylow, g);
        core = subgroup_intersection(&core, &conj).expect("same parent");
    }
    core
}

/// `γ₁ = H, γ_{k+1} = [γ_k, H]`, stopping once a term repeats.
pub fn lower_central_series(group: &FiniteGroup, sub: &Subgroup) -> Vec<Subgroup> {
    let mut series = vec![sub.clone()];
    loop {
        let last = series.last().expect("non-empty");
        let next = commutator_of(group, last, sub);
        if next == *last {
            return series;
        }
        let done = next.is_trivial();
        series.push(next);
        if done {
            return series;
        }
    }
}

pub fn is_nilpotent(group: &FiniteGroup) -> bool {
    is_nilpotent_subgroup(group, &Subgroup::whole(group))
}

pub fn is_nilpotent_subgroup(group: &FiniteGroup, sub: &Subgroup) -> bool {
    lower_central_series(group, sub)
        .last()
        .is_some_and(Subgroup::is_trivial)
}

/// `F(G)`: the join of the `p`-cores over primes dividing `|G|`.
pub fn fitting_subgroup(group: &FiniteGroup) -> Subgroup {
    let cores: Vec<Subgroup> = PrimeFactorization::of(group.order())
        .primes()
        .map(|p| p_core(group, p))
        .collect();
    let refs: Vec<&Subgroup> = cores.iter().collect();
    join(group, &refs)
}

/// `H_p(G)`: generated by every element whose order is not `p`.
pub fn hughes_subgroup(group: &FiniteGroup, p: usize) -> Subgroup {
    let seed: Vec<Elem> = group
        .elements()
        .filter(|&x| group.element_order(x) != p)
        .collect();
    generated_subgroup(group, &seed)
}

/// The least prime `p` for which the group is not a `p`-group and
/// `H_p(G) ≠ G`.
pub fn is_hughes_thompson_type(group: &FiniteGroup) -> Option<usize> {
    if group.order() == 1 || is_p_group(group).is_some() {
        return None;
    }
    PrimeFactorization::of(group.order())
        .primes()
        .find(|&p| !hughes_subgroup(group, p).is_whole())
}

/// Every centralizer of a non-central element is abelian.
pub fn is_ca_group(group: &FiniteGroup) -> bool {
    let mut checked: HashSet<FixedBitSet> = HashSet::new();
    for x in group.elements() {
        let c = centralizer(group, x);
        if c.is_whole() || !checked.insert(c.bits().clone()) {
            continue;
        }
        if !is_abelian_subgroup(group, &c) {
            return false;
        }
    }
    true
}

pub fn is_ca_subgroup(group: &FiniteGroup, sub: &Subgroup) -> bool {
    is_ca_group(&sub.to_group(group).0)
}

/// `H = P × A` with `P` a CA-group of prime-power order and `A` abelian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PTimesA {
    pub p_part: Subgroup,
    pub abelian_part: Subgroup,
    /// The prime of `P`; `None` only when `H` is trivial.
    pub prime: Option<usize>,
}

/// Splits a nilpotent `H` into its Sylow factors. With at most one
/// non-abelian Sylow factor, `P` is that factor (or, for abelian `H`, the
/// Sylow subgroup of the largest prime) and `A` the product of the rest.
/// Returns `Ok(None)` when two Sylow factors are non-abelian or `P` is not a
/// CA-group.
pub fn decompose_p_times_abelian(group: &FiniteGroup, sub: &Subgroup) -> Result<Option<PTimesA>> {
    if !is_nilpotent_subgroup(group, sub) {
        return Err(Error::NotNilpotent);
    }
    let primes: Vec<usize> = PrimeFactorization::of(sub.size()).primes().collect();
    let sylows: Vec<Subgroup> = primes
        .iter()
        .map(|&p| {
            let mut bits = FixedBitSet::with_capacity(group.order());
            for x in sub.members() {
                if is_power_of(group.element_order(x), p) {
                    bits.insert(x);
                }
            }
            Subgroup::from_bits(group, bits)
        })
        .collect();

    let non_abelian: Vec<usize> = (0..sylows.len())
        .filter(|&i| !is_abelian_subgroup(group, &sylows[i]))
        .collect();
    let chosen = match non_abelian.as_slice() {
        [] if sylows.is_empty() => {
            return Ok(Some(PTimesA {
                p_part: Subgroup::trivial(group),
                abelian_part: Subgroup::trivial(group),
                prime: None,
            }))
        }
        [] => sylows.len() - 1,
        [i] => *i,
        _ => return Ok(None),
    };
    let p_part = sylows[chosen].clone();
    let rest: Vec<&Subgroup> = sylows
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != chosen)
        .map(|(_, s)| s)
        .collect();
    let abelian_part = if rest.is_empty() {
        Subgroup::trivial(group)
    } else {
        join(group, &rest)
    };

    let pgens = p_part.generators(group);
    let agens = abelian_part.generators(group);
    let commute = pgens
        .iter()
        .all(|&x| agens.iter().all(|&y| group.commutes(x, y)));
    let valid = commute
        && subgroup_intersection(&p_part, &abelian_part)?.is_trivial()
        && p_part.size() * abelian_part.size() == sub.size()
        && is_abelian_subgroup(group, &abelian_part)
        && is_ca_subgroup(group, &p_part);
    Ok(valid.then(|| PTimesA {
        p_part,
        abelian_part,
        prime: Some(primes[chosen]),
    }))
}
