//! Centralizer statistics and the classification of groups with exactly two
//! non-abelian centralizers.
//!
//! For `nacent(G) = {G, C(a)}` with `a` non-central, one of three shapes
//! holds for `Q = G/Z(G)`:
//!
//! * **A**: `Q` is a non-abelian `p`-group of exponent `> p`, `H_p(Q) =
//!   C(a)/Z(G)` has index `p`, and `|C(x)/Z(G)| = p` for every `x ∉ C(a)`;
//! * **B**: `Q` is of Hughes-Thompson type with `H_p(Q) = C(a)/Z(G)` and
//!   `|C(x)/Z(G)| = p` for every `x ∉ C(a)`;
//! * **C**: `Q` is Frobenius with kernel `C(a)/Z(G)` and cyclic complement
//!   `C(x)/Z(G)` for some `x ∉ C(a)`;
//!
//! and in every case `C(a)` is a CA-group. Conversely each shape forces
//! `|nacent(G)| = 2`. This module evaluates both directions and the
//! structural consequences that follow.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::partition::{
    is_elementary_partition, is_frobenius_partition, is_nonsimple_partition, is_normal_partition,
    miller_check, partition_from_centralizers, validate_frobenius,
};
use crate::structure::{
    decompose_p_times_abelian, fitting_subgroup, hughes_subgroup, is_abelian, is_abelian_subgroup,
    is_ca_subgroup, is_cyclic, is_cyclic_subgroup, is_p_group, PrimeFactorization,
};
use crate::subgroup::{
    center, centralizer, commutator_subgroup, is_normal, quotient, subgroup_intersection,
    QuotientMap, Subgroup,
};

/// The distinct centralizers of a group.
#[derive(Clone, Debug)]
pub struct CentStats {
    /// Distinct centralizers, in order of their least witness; `cent[0]` is
    /// the whole group.
    pub cent: Vec<Subgroup>,
    /// Least element whose centralizer is `cent[i]`.
    pub witnesses: Vec<Elem>,
    pub abelian: Vec<bool>,
    /// Indices into `cent` of the non-abelian centralizers.
    pub nacent: Vec<usize>,
    /// For each element, the index of its centralizer in `cent`.
    pub centralizer_index: Vec<usize>,
}

impl CentStats {
    pub fn cent_count(&self) -> usize {
        self.cent.len()
    }

    pub fn nacent_count(&self) -> usize {
        self.nacent.len()
    }

    pub fn centralizer_of(&self, x: Elem) -> &Subgroup {
        &self.cent[self.centralizer_index[x]]
    }

    /// Indices of the proper non-abelian centralizers.
    pub fn proper_nacent(&self) -> impl Iterator<Item = usize> + '_ {
        self.nacent.iter().copied().filter(|&i| i != 0)
    }
}

/// Computes `Cent(G)` and `nacent(G)`. Central elements map straight to `G`,
/// and elements generating the same cyclic subgroup share one centralizer,
/// so only one generator per cyclic subgroup is scanned.
pub fn cent_stats(group: &FiniteGroup) -> CentStats {
    let n = group.order();
    let z = center(group);
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    let whole = Subgroup::whole(group);
    index.insert(whole.bits().clone(), 0);
    let mut stats = CentStats {
        cent: vec![whole],
        witnesses: vec![0],
        abelian: vec![is_abelian(group)],
        nacent: Vec::new(),
        centralizer_index: vec![usize::MAX; n],
    };
    for x in z.members() {
        stats.centralizer_index[x] = 0;
    }
    for x in group.elements() {
        if stats.centralizer_index[x] != usize::MAX {
            continue;
        }
        let c = centralizer(group, x);
        let slot = *index.entry(c.bits().clone()).or_insert_with(|| {
            stats.witnesses.push(x);
            stats.abelian.push(is_abelian_subgroup(group, &c));
            stats.cent.push(c);
            stats.cent.len() - 1
        });
        // ⟨x^k⟩ = ⟨x⟩ for k coprime to the order of x.
        let order = group.element_order(x);
        let mut y = x;
        for k in 1..order {
            if crate::group::gcd(k, order) == 1 {
                stats.centralizer_index[y] = slot;
            }
            y = group.mul(y, x);
        }
    }
    stats.nacent = (0..stats.cent.len())
        .filter(|&i| !stats.abelian[i])
        .collect();
    stats
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Category {
    Abelian,
    CA,
    TwoNacent,
    ManyNacent,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Abelian => "Abelian",
            Category::CA => "CA",
            Category::TwoNacent => "TwoNacent",
            Category::ManyNacent => "ManyNacent",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    A,
    B,
    C,
}

impl Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Case::A => "A",
            Case::B => "B",
            Case::C => "C",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseData {
    /// The prime `p` of cases A and B.
    pub prime: Option<usize>,
    /// `|H_p(G/Z(G))|`, cases A and B.
    pub hughes_order: Option<usize>,
    /// Frobenius kernel and complement orders in `G/Z(G)`, case C.
    pub kernel_order: Option<usize>,
    pub complement_order: Option<usize>,
    /// The `x ∉ C(a)` whose centralizer image is the complement, case C.
    pub witness_x: Option<Elem>,
    /// Every case whose full hypothesis set held.
    pub matched_cases: Vec<Case>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub category: Category,
    pub case: Option<Case>,
    pub nacent_count: usize,
    /// The least `a` with `C(a)` the proper non-abelian centralizer.
    pub witness_a: Option<Elem>,
    pub case_data: Option<CaseData>,
}

/// Outcome of one direction of the characterization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    /// The hypothesis of this direction never applied.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IffReport {
    /// `|nacent| = 2` implies one of the cases.
    pub forward: Verdict,
    /// A case holding for a candidate `a` implies `|nacent| = 2`.
    pub converse: Verdict,
    /// Number of candidates `a` (one per proper non-abelian centralizer).
    pub candidates: usize,
}

/// Per-consequence outcomes; `None` means not applicable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Consequences {
    /// Centralizer count formula.
    pub a: Option<bool>,
    /// `G' ⊆ C(a)`.
    pub b: Option<bool>,
    /// `F(G/Z(G)) = C(a)/Z(G)`.
    pub c: Option<bool>,
    /// `F(G) = C(a)`.
    pub d: Option<bool>,
    /// `C(a) = P × A`.
    pub e: Option<bool>,
    /// `G/C(a)` cyclic.
    pub f: Option<bool>,
    pub normal_ca: Option<bool>,
    pub ca_group: Option<bool>,
}

impl Consequences {
    pub fn all_hold(&self) -> bool {
        self.iter().all(|(_, v)| v != Some(false))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, Option<bool>)> {
        [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("e", self.e),
            ("f", self.f),
            ("normal_ca", self.normal_ca),
            ("ca_group", self.ca_group),
        ]
        .into_iter()
    }
}

/// Quantities computed while checking the consequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsequenceDetail {
    pub cent_count: usize,
    /// `|Cent(C(a))|`, centralizers taken inside `C(a)`.
    pub cent_of_ca: usize,
    /// `|C(a)/Z(G)|`
    pub ca_over_center: usize,
    /// `|Cent(C(a))| + |G|/p + 1`
    pub formula_order_over_p: Option<usize>,
    /// `|Cent(C(a))| + |G/Z(G)|/p + 1`
    pub formula_quotient_over_p: Option<usize>,
    /// `|Cent(C(a))| + |C(a)/Z(G)| + 1`
    pub formula_kernel: usize,
    pub matching_formulas: Vec<&'static str>,
    pub commutator_order: usize,
    pub fitting_order: usize,
    pub quotient_fitting_order: usize,
    /// `|G : C(a)|`
    pub ca_index: usize,
    pub p_part_order: Option<usize>,
    pub abelian_part_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsequenceReport {
    pub consequences: Consequences,
    pub detail: Option<ConsequenceDetail>,
    pub failures: Vec<String>,
}

/// Diagnostics on the centralizer partition of `G/Z(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionDiagnostics {
    pub exists: bool,
    pub components: Option<usize>,
    pub normal: Option<bool>,
    /// Order of the non-simplicity witness `N`.
    pub nonsimple_witness_order: Option<usize>,
    pub elementary_prime: Option<usize>,
    pub frobenius: Option<bool>,
    /// All elements of order `> p` share a component (non-abelian `p`-group
    /// quotients only).
    pub miller: Option<bool>,
    /// A normal, non-simple, non-Frobenius partition is elementary with a
    /// normal subgroup of prime index.
    pub dichotomy: Option<bool>,
    /// A normal non-trivial partition of a `p`-group of exponent `> p` is
    /// elementary.
    pub p_group_elementary: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub group_id: String,
    pub order: usize,
    pub center_order: usize,
    pub cent_count: usize,
    pub nacent_count: usize,
    pub category: Category,
    pub case: Option<Case>,
    pub case_data: Option<CaseData>,
    pub consequences: Consequences,
    pub consequence_detail: Option<ConsequenceDetail>,
    pub iff: IffReport,
    pub partition: Option<PartitionDiagnostics>,
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn failed(&self) -> bool {
        !self.violations.is_empty()
    }
}

/// Which cases hold for one candidate `a`.
#[derive(Clone, Debug, Default)]
struct CaseMatch {
    a: Option<usize>,
    b: Option<usize>,
    c: Option<(Elem, Subgroup, Subgroup)>,
}

impl CaseMatch {
    fn matched(&self) -> Vec<Case> {
        let mut cases = Vec::new();
        if self.a.is_some() {
            cases.push(Case::A);
        }
        if self.b.is_some() {
            cases.push(Case::B);
        }
        if self.c.is_some() {
            cases.push(Case::C);
        }
        cases
    }

    fn any(&self) -> bool {
        self.a.is_some() || self.b.is_some() || self.c.is_some()
    }
}

/// Shared intermediate results for one group.
struct Analysis<'g> {
    group: &'g FiniteGroup,
    center: Subgroup,
    stats: CentStats,
    map: QuotientMap,
    /// `(p, H_p(G/Z(G)))` for each prime dividing `|G/Z(G)|`.
    quotient_hughes: Vec<(usize, Subgroup)>,
}

impl<'g> Analysis<'g> {
    fn new(group: &'g FiniteGroup) -> Self {
        let center = center(group);
        let stats = cent_stats(group);
        let map = quotient(group, &center).expect("the center is normal");
        let q = map.quotient();
        let quotient_hughes = if stats.nacent_count() >= 2 {
            PrimeFactorization::of(q.order())
                .primes()
                .map(|p| (p, hughes_subgroup(q, p)))
                .collect()
        } else {
            Vec::new()
        };
        Analysis {
            group,
            center,
            stats,
            map,
            quotient_hughes,
        }
    }

    fn candidates(&self) -> Vec<Elem> {
        self.stats
            .proper_nacent()
            .map(|i| self.stats.witnesses[i])
            .collect()
    }

    /// `|C(x)/Z(G)| = p` for every `x ∉ C(a)`.
    fn outside_quotients_have_order(&self, ca: &Subgroup, p: usize) -> bool {
        let z = self.center.size();
        self.group
            .elements()
            .filter(|&x| !ca.contains(x))
            .all(|x| self.stats.centralizer_of(x).size() == p * z)
    }

    fn evaluate(&self, a: Elem) -> CaseMatch {
        let ca = self.stats.centralizer_of(a);
        let mut result = CaseMatch::default();
        if ca.is_whole() || self.stats.abelian[self.stats.centralizer_index[a]] {
            return result;
        }
        if !is_ca_subgroup(self.group, ca) {
            return result;
        }
        let q = self.map.quotient();
        let ca_q = self.map.image(ca);

        if let Some(p) = is_p_group(q) {
            let matches = !is_abelian(q)
                && q.exponent() > p
                && self.hughes(p).is_some_and(|h| h.index() == p && *h == ca_q)
                && self.outside_quotients_have_order(ca, p);
            if matches {
                result.a = Some(p);
            }
        } else if q.order() > 1 {
            result.b = self.quotient_hughes.iter().find_map(|(p, h)| {
                (!h.is_whole() && *h == ca_q && self.outside_quotients_have_order(ca, *p))
                    .then_some(*p)
            });
        }

        if let Some(x) = self.group.elements().find(|&x| !ca.contains(x)) {
            let complement = self.map.image(self.stats.centralizer_of(x));
            if is_cyclic_subgroup(q, &complement) && validate_frobenius(q, &ca_q, &complement) {
                result.c = Some((x, ca_q, complement));
            }
        }
        result
    }

    fn hughes(&self, p: usize) -> Option<&Subgroup> {
        self.quotient_hughes
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, h)| h)
    }

    fn classification(&self) -> (Classification, IffReport, Vec<String>) {
        let nacent = self.stats.nacent_count();
        let candidates = self.candidates();
        let mut violations = Vec::new();

        let evaluations: Vec<(Elem, CaseMatch)> =
            candidates.iter().map(|&a| (a, self.evaluate(a))).collect();

        let converse = if evaluations.iter().any(|(_, m)| m.any()) {
            if nacent == 2 {
                Verdict::Holds
            } else {
                for (a, m) in evaluations.iter().filter(|(_, m)| m.any()) {
                    violations.push(format!(
                        "converse: cases {:?} hold for a = {a} but |nacent| = {nacent}",
                        m.matched()
                    ));
                }
                Verdict::Violated
            }
        } else {
            Verdict::Vacuous
        };

        let category = match nacent {
            0 => Category::Abelian,
            1 => Category::CA,
            2 => Category::TwoNacent,
            _ => Category::ManyNacent,
        };
        let mut classification = Classification {
            category,
            case: None,
            nacent_count: nacent,
            witness_a: None,
            case_data: None,
        };

        let forward = if nacent == 2 {
            let (a, m) = &evaluations[0];
            classification.witness_a = Some(*a);
            let matched = m.matched();
            if matched.is_empty() {
                violations.push(format!(
                    "forward: |nacent| = 2 with a = {a} but no case holds"
                ));
                Verdict::Violated
            } else {
                // The Frobenius branch is decided before the Hughes-Thompson
                // one: a Frobenius quotient with complement of prime order is
                // also of Hughes-Thompson type.
                let case = if matched.contains(&Case::A) {
                    Case::A
                } else if matched.contains(&Case::C) {
                    Case::C
                } else {
                    Case::B
                };
                classification.case = Some(case);
                let mut data = CaseData {
                    prime: None,
                    hughes_order: None,
                    kernel_order: None,
                    complement_order: None,
                    witness_x: None,
                    matched_cases: matched,
                };
                if let Some(p) = m.a.or(m.b) {
                    data.prime = Some(p);
                    data.hughes_order = self.hughes(p).map(Subgroup::size);
                }
                if let Some((x, kernel, complement)) = &m.c {
                    data.kernel_order = Some(kernel.size());
                    data.complement_order = Some(complement.size());
                    data.witness_x = Some(*x);
                }
                classification.case_data = Some(data);
                Verdict::Holds
            }
        } else {
            Verdict::Vacuous
        };

        (
            classification,
            IffReport {
                forward,
                converse,
                candidates: candidates.len(),
            },
            violations,
        )
    }

    fn consequences(&self, classification: &Classification) -> ConsequenceReport {
        let (Some(a), Some(case)) = (classification.witness_a, classification.case) else {
            return ConsequenceReport {
                consequences: Consequences::default(),
                detail: None,
                failures: Vec::new(),
            };
        };
        let g = self.group;
        let ca = self.stats.centralizer_of(a).clone();
        let z = &self.center;
        let mut failures = Vec::new();

        let (ca_group, ca_embedding) = ca.to_group(g);
        let cent_of_ca = cent_stats(&ca_group).cent_count();
        let ca_over_center = ca.size() / z.size();
        let prime = classification.case_data.as_ref().and_then(|d| d.prime);
        let formula_order_over_p = prime.map(|p| cent_of_ca + g.order() / p + 1);
        let formula_quotient_over_p = prime.map(|p| cent_of_ca + z.index() / p + 1);
        let formula_kernel = cent_of_ca + ca_over_center + 1;
        let cent_count = self.stats.cent_count();
        let mut matching_formulas = Vec::new();
        if formula_order_over_p == Some(cent_count) {
            matching_formulas.push("order_over_p");
        }
        if formula_quotient_over_p == Some(cent_count) {
            matching_formulas.push("quotient_over_p");
        }
        if formula_kernel == cent_count {
            matching_formulas.push("kernel");
        }
        let count_holds = match case {
            Case::A | Case::B => formula_quotient_over_p == Some(cent_count),
            Case::C => formula_kernel == cent_count,
        };

        let derived = commutator_subgroup(g);
        let commutator_inside = derived.is_subset_of(&ca);

        let q = self.map.quotient();
        let quotient_fitting = fitting_subgroup(q);
        let ca_q = self.map.image(&ca);
        let quotient_fitting_holds = quotient_fitting == ca_q;

        let fitting = fitting_subgroup(g);
        let fitting_holds = fitting == ca;

        let split = decompose_p_times_abelian(&ca_group, &Subgroup::whole(&ca_group))
            .ok()
            .flatten();
        let (p_part_order, abelian_part_order) = match &split {
            Some(s) => {
                let p_part = Subgroup::lift(g, &ca_embedding, &s.p_part);
                let a_part = Subgroup::lift(g, &ca_embedding, &s.abelian_part);
                (Some(p_part.size()), Some(a_part.size()))
            }
            None => (None, None),
        };

        let normal_ca = is_normal(g, &ca);
        let cyclic_top = normal_ca && quotient(g, &ca).is_ok_and(|m| is_cyclic(m.quotient()));
        let ca_is_ca = crate::structure::is_ca_group(&ca_group);

        let consequences = Consequences {
            a: Some(count_holds),
            b: Some(commutator_inside),
            c: Some(quotient_fitting_holds),
            d: Some(fitting_holds),
            e: Some(split.is_some()),
            f: Some(cyclic_top),
            normal_ca: Some(normal_ca),
            ca_group: Some(ca_is_ca),
        };
        for (name, value) in consequences.iter() {
            if value == Some(false) {
                failures.push(format!("consequence ({name}) fails for a = {a}"));
            }
        }
        failures.extend(self.proof_invariants(&ca));

        ConsequenceReport {
            consequences,
            detail: Some(ConsequenceDetail {
                cent_count,
                cent_of_ca,
                ca_over_center,
                formula_order_over_p,
                formula_quotient_over_p,
                formula_kernel,
                matching_formulas,
                commutator_order: derived.size(),
                fitting_order: fitting.size(),
                quotient_fitting_order: quotient_fitting.size(),
                ca_index: ca.index(),
                p_part_order,
                abelian_part_order,
            }),
            failures,
        }
    }

    /// Intersection facts about the centralizers when `nacent = {G, C(a)}`.
    fn proof_invariants(&self, ca: &Subgroup) -> Vec<String> {
        let z = &self.center;
        let mut failures = Vec::new();
        for (i, c) in self.stats.cent.iter().enumerate().skip(1) {
            let w = self.stats.witnesses[i];
            if ca.contains(w) {
                if !c.is_subset_of(ca) {
                    failures.push(format!("C({w}) is not contained in C(a)"));
                }
            } else if subgroup_intersection(c, ca).ok().as_ref() != Some(z) {
                failures.push(format!("C({w}) ∩ C(a) ≠ Z(G)"));
            }
        }
        let outer: Vec<&Subgroup> = self
            .stats
            .cent
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(i, _)| !ca.contains(self.stats.witnesses[*i]))
            .map(|(_, c)| c)
            .collect();
        for (i, x) in outer.iter().enumerate() {
            for y in &outer[i + 1..] {
                if subgroup_intersection(x, y).ok().as_ref() != Some(z) {
                    failures.push("two distinct outer centralizers meet outside Z(G)".into());
                    return failures;
                }
            }
        }
        failures
    }

    fn partition_diagnostics(&self) -> Option<PartitionDiagnostics> {
        if self.stats.abelian[0] {
            return None;
        }
        let q = self.map.quotient();
        let proper: Vec<Subgroup> = self.stats.cent[1..].to_vec();
        let Some(partition) = partition_from_centralizers(&self.map, &proper) else {
            return Some(PartitionDiagnostics {
                exists: false,
                components: None,
                normal: None,
                nonsimple_witness_order: None,
                elementary_prime: None,
                frobenius: None,
                miller: None,
                dichotomy: None,
                p_group_elementary: None,
            });
        };
        let normal = is_normal_partition(q, &partition);
        let nonsimple = is_nonsimple_partition(q, &partition);
        let elementary = is_elementary_partition(q, &partition);
        let frobenius = is_frobenius_partition(q, &partition);
        let miller = miller_check(q, &partition).ok();
        let nontrivial = partition.len() >= 2;
        let dichotomy = (normal && nonsimple.is_some() && !frobenius).then(|| {
            elementary
                .as_ref()
                .is_some_and(|(k, p)| k.index() == *p && is_normal(q, k))
        });
        let p_group_elementary = is_p_group(q)
            .filter(|&p| q.exponent() > p && normal && nontrivial)
            .map(|_| elementary.is_some());
        Some(PartitionDiagnostics {
            exists: true,
            components: Some(partition.len()),
            normal: Some(normal),
            nonsimple_witness_order: nonsimple.map(|n| n.size()),
            elementary_prime: elementary.map(|(_, p)| p),
            frobenius: Some(frobenius),
            miller,
            dichotomy,
            p_group_elementary,
        })
    }
}

/// Classifies a group by its non-abelian centralizers. Fails with
/// `TheoremViolation` when `|nacent| = 2` yet no case holds, or when a case
/// holds for some candidate while `|nacent| ≠ 2`.
pub fn classify(group: &FiniteGroup) -> Result<Classification> {
    let analysis = Analysis::new(group);
    let (classification, _, violations) = analysis.classification();
    if violations.is_empty() {
        Ok(classification)
    } else {
        Err(Error::TheoremViolation(violations.join("; ")))
    }
}

/// Evaluates both directions of the characterization.
pub fn verify_iff(group: &FiniteGroup) -> IffReport {
    Analysis::new(group).classification().1
}

/// Checks the structural consequences for a group with two non-abelian
/// centralizers; everything is `None` for other groups.
pub fn verify_consequences(group: &FiniteGroup) -> ConsequenceReport {
    let analysis = Analysis::new(group);
    let (classification, _, _) = analysis.classification();
    analysis.consequences(&classification)
}

/// Full pipeline: statistics, classification, both directions of the
/// characterization, consequences and partition diagnostics.
pub fn analyze(group_id: &str, group: &FiniteGroup) -> VerificationReport {
    let analysis = Analysis::new(group);
    let (classification, iff, mut violations) = analysis.classification();
    let consequences = analysis.consequences(&classification);
    violations.extend(consequences.failures);
    let partition = analysis.partition_diagnostics();
    if classification.category == Category::TwoNacent {
        let sound = partition.as_ref().is_some_and(|p| {
            p.exists && p.normal == Some(true) && p.nonsimple_witness_order.is_some()
        });
        if !sound {
            violations.push("centralizer images do not form a normal non-simple partition".into());
        }
    }
    VerificationReport {
        group_id: group_id.to_string(),
        order: group.order(),
        center_order: analysis.center.size(),
        cent_count: analysis.stats.cent_count(),
        nacent_count: analysis.stats.nacent_count(),
        category: classification.category,
        case: classification.case,
        case_data: classification.case_data,
        consequences: consequences.consequences,
        consequence_detail: consequences.detail,
        iff,
        partition,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Construction::{self, *};
    use crate::DEFAULT_MAX_ORDER;

    fn build(c: Construction) -> FiniteGroup {
        c.build(DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn abelian_stats() {
        let g = build(Cyclic(6));
        let s = cent_stats(&g);
        assert_eq!(s.cent_count(), 1);
        assert_eq!(s.nacent_count(), 0);
        assert_eq!(classify(&g).unwrap().category, Category::Abelian);
    }

    #[test]
    fn s3_stats() {
        let g = build(Symmetric(3));
        let s = cent_stats(&g);
        assert_eq!(s.cent_count(), 5);
        assert_eq!(s.nacent, vec![0]);
        assert_eq!(classify(&g).unwrap().category, Category::CA);
        let iff = verify_iff(&g);
        assert_eq!(
            (iff.forward, iff.converse),
            (Verdict::Vacuous, Verdict::Vacuous)
        );
    }

    #[test]
    fn q8_is_ca() {
        let g = build(Dicyclic(2));
        assert_eq!(classify(&g).unwrap().category, Category::CA);
        let s = cent_stats(&g);
        assert!(s.cent[1..].iter().all(|c| c.size() == 4));
    }

    #[test]
    fn heisenberg_is_ca_without_case() {
        let g = build(Heisenberg(7));
        let c = classify(&g).unwrap();
        assert_eq!(c.category, Category::CA);
        assert!(c.case.is_none());
        let r = verify_consequences(&g);
        assert!(r.consequences.iter().all(|(_, v)| v.is_none()));
    }

    #[test]
    fn s4_has_several_non_abelian_centralizers() {
        let g = build(Symmetric(4));
        let c = classify(&g).unwrap();
        assert_eq!(c.category, Category::ManyNacent);
        assert_eq!(c.nacent_count, 4);
    }

    #[test]
    fn frobenius_flagship_classifies_as_case_c() {
        let g = build(HeisenbergFrobenius(7, 3));
        let c = classify(&g).unwrap();
        assert_eq!(c.category, Category::TwoNacent);
        assert_eq!(c.case, Some(Case::C));
        let data = c.case_data.unwrap();
        assert_eq!(data.kernel_order, Some(343));
        assert_eq!(data.complement_order, Some(3));
        assert_eq!(data.matched_cases, vec![Case::B, Case::C]);
    }

    #[test]
    fn report_is_deterministic() {
        let g = build(Construction::direct_product(Symmetric(3), Cyclic(2)));
        let a = serde_json::to_string(&analyze("x", &g)).unwrap();
        let b = serde_json::to_string(&analyze("x", &g)).unwrap();
        assert_eq!(a, b);
    }
}
