//! Built-in group constructions, the catalog of test groups, and the JSON
//! group file format.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{gcd, Elem, FiniteGroup, DEFAULT_MAX_ORDER};
use crate::structure::{is_prime, multiplicative_order};

/// Environment variable overriding [`DEFAULT_MAX_ORDER`].
pub const ORDER_GUARD_ENV: &str = "NACENT_MAX_ORDER";

/// Largest symmetric/alternating degree the builders accept.
const MAX_PERMUTATION_DEGREE: usize = 6;

/// SL(2,3) acting on the eight non-zero vectors of F₃², generated by
/// [[1,1],[0,1]] and [[0,2],[1,0]].
const SL23_GENERATORS: [[usize; 8]; 2] = [[3, 7, 2, 6, 1, 5, 0, 4], [5, 2, 0, 6, 3, 1, 7, 4]];

/// The global order guard: `NACENT_MAX_ORDER` if set and valid, otherwise
/// [`DEFAULT_MAX_ORDER`].
pub fn global_order_guard() -> usize {
    std::env::var(ORDER_GUARD_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &usize| v > 0)
        .unwrap_or(DEFAULT_MAX_ORDER)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Cyclic(usize),
    /// Symmetries of the `n`-gon, order `2n`.
    Dihedral(usize),
    /// `⟨a, x | a^{2n}, x² = aⁿ, x⁻¹ax = a⁻¹⟩`, order `4n`.
    Dicyclic(usize),
    Symmetric(usize),
    Alternating(usize),
    DirectProduct(Box<Construction>, Box<Construction>),
    /// `K ⋊ H`. `action[t]` is the image of `H`'s `t`-th generator as a
    /// permutation of `K`'s element indices.
    SemidirectProduct {
        kernel: Box<Construction>,
        acting: Box<Construction>,
        action: Vec<Vec<usize>>,
    },
    /// Triples mod `p` with `(x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')`.
    Heisenberg(usize),
    /// `heisenberg(p) ⋊ cyclic(q)` acting by `(x,y,z) ↦ (λx, λy, λ²z)`.
    HeisenbergFrobenius(usize, usize),
    /// `cyclic(q) ⋊ cyclic(q-1)`, the affine group of the line over F_q.
    Agl1(usize),
    Sl23,
}

impl Construction {
    pub fn cyclic(n: usize) -> Self {
        Construction::Cyclic(n)
    }

    pub fn direct_product(a: Construction, b: Construction) -> Self {
        Construction::DirectProduct(Box::new(a), Box::new(b))
    }

    /// Order of the group this construction builds, without building it.
    pub fn expected_order(&self) -> Result<usize> {
        use Construction::*;
        let order = match self {
            Cyclic(n) => positive(*n, "cyclic")?,
            Dihedral(n) => 2 * positive(*n, "dihedral")?,
            Dicyclic(n) => 4 * positive(*n, "dicyclic")?,
            Symmetric(n) => (1..=degree(*n, "symmetric")?).product(),
            Alternating(n) => {
                let n = degree(*n, "alternating")?;
                ((1..=n).product::<usize>() / 2).max(1)
            }
            DirectProduct(a, b) => a.expected_order()? * b.expected_order()?,
            SemidirectProduct { kernel, acting, .. } => {
                kernel.expected_order()? * acting.expected_order()?
            }
            Heisenberg(p) => prime(*p, "heisenberg")?.pow(3),
            HeisenbergFrobenius(p, q) => {
                frobenius_multiplier(*p, *q)?;
                p.pow(3) * q
            }
            Agl1(q) => {
                let q = prime(*q, "agl1")?;
                q * (q - 1)
            }
            Sl23 => 24,
        };
        Ok(order)
    }

    /// Builds the group. Fails with `OrderLimitExceeded` before any table
    /// is allocated when the order exceeds `max_order`.
    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        use Construction::*;
        let order = self.expected_order()?;
        if order > max_order {
            return Err(Error::OrderLimitExceeded { limit: max_order });
        }
        match self {
            Cyclic(n) => {
                let n = *n;
                FiniteGroup::from_associative_fn(n, |a, b| (a + b) % n)
            }
            Dihedral(n) => {
                let n = *n;
                // r^i s^e at index i + n e
                FiniteGroup::from_associative_fn(2 * n, |l, r| {
                    let (i, a) = (l % n, l / n);
                    let (j, b) = (r % n, r / n);
                    let rot = if a == 0 { (i + j) % n } else { (i + n - j) % n };
                    rot + n * ((a + b) % 2)
                })
            }
            Dicyclic(n) => {
                let m = 2 * n;
                let n = *n;
                // a^i x^e at index i + 2n e
                FiniteGroup::from_associative_fn(2 * m, |l, r| {
                    let (i, a) = (l % m, l / m);
                    let (j, b) = (r % m, r / m);
                    match (a, b) {
                        (0, 0) => (i + j) % m,
                        (0, _) => (i + j) % m + m,
                        (_, 0) => (i + m - j) % m + m,
                        _ => (i + m - j + n) % m,
                    }
                })
            }
            Symmetric(n) => {
                let n = *n;
                let mut gens = Vec::new();
                if n >= 2 {
                    let mut t: Vec<usize> = (0..n).collect();
                    t.swap(0, 1);
                    gens.push(t);
                    gens.push((0..n).map(|i| (i + 1) % n).collect());
                }
                FiniteGroup::from_permutations(&gens, n, max_order)
            }
            Alternating(n) => {
                let n = *n;
                let gens: Vec<Vec<usize>> = (2..n)
                    .map(|k| {
                        let mut c: Vec<usize> = (0..n).collect();
                        c[0] = 1;
                        c[1] = k;
                        c[k] = 0;
                        c
                    })
                    .collect();
                FiniteGroup::from_permutations(&gens, n, max_order)
            }
            DirectProduct(a, b) => {
                let ga = a.build(max_order)?;
                let gb = b.build(max_order)?;
                direct_product(&ga, &gb)
            }
            SemidirectProduct {
                kernel,
                acting,
                action,
            } => {
                let k = kernel.build(max_order)?;
                let h = acting.build(max_order)?;
                semidirect_product(&k, &h, action).map(|(g, _)| g)
            }
            Heisenberg(p) => heisenberg(*p),
            HeisenbergFrobenius(p, q) => heisenberg_frobenius(*p, *q),
            Agl1(q) => {
                let q = *q;
                let k = Cyclic(q).build(max_order)?;
                let h = Cyclic(q - 1).build(max_order)?;
                let action = if q == 2 {
                    vec![]
                } else {
                    let root = least_element_of_order(q, q - 1).expect("F_q* is cyclic");
                    vec![(0..q).map(|x| x * root % q).collect()]
                };
                semidirect_product(&k, &h, &action).map(|(g, _)| g)
            }
            Sl23 => {
                let gens: Vec<Vec<usize>> = SL23_GENERATORS.iter().map(|g| g.to_vec()).collect();
                FiniteGroup::from_permutations(&gens, 8, max_order)
            }
        }
    }

    /// Reads the `name(args)` form produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = ExprParser { src: text, pos: 0 };
        let expr = parser.expr()?;
        parser.skip_ws();
        if parser.pos != text.len() {
            return Err(parser.error("trailing input"));
        }
        Self::from_expr(&expr)
    }

    fn from_expr(expr: &Expr) -> Result<Self> {
        let Expr::Call(name, args) = expr else {
            return Err(Error::InvalidParams(format!(
                "expected a constructor, found {expr:?}"
            )));
        };
        let int = |i: usize| -> Result<usize> {
            match args.get(i) {
                Some(Expr::Int(v)) => Ok(*v),
                _ => Err(Error::InvalidParams(format!(
                    "{name}: argument {i} must be an integer"
                ))),
            }
        };
        let sub = |i: usize| -> Result<Box<Construction>> {
            match args.get(i) {
                Some(e @ Expr::Call(..)) => Ok(Box::new(Self::from_expr(e)?)),
                _ => Err(Error::InvalidParams(format!(
                    "{name}: argument {i} must be a group"
                ))),
            }
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!(
                    "{name} takes {n} argument(s), got {}",
                    args.len()
                )))
            }
        };
        let c = match name.as_str() {
            "cyclic" => {
                arity(1)?;
                Construction::Cyclic(int(0)?)
            }
            "dihedral" => {
                arity(1)?;
                Construction::Dihedral(int(0)?)
            }
            "dicyclic" => {
                arity(1)?;
                Construction::Dicyclic(int(0)?)
            }
            "symmetric" => {
                arity(1)?;
                Construction::Symmetric(int(0)?)
            }
            "alternating" => {
                arity(1)?;
                Construction::Alternating(int(0)?)
            }
            "heisenberg" => {
                arity(1)?;
                Construction::Heisenberg(int(0)?)
            }
            "heisenberg_frobenius" => {
                arity(2)?;
                Construction::HeisenbergFrobenius(int(0)?, int(1)?)
            }
            "agl1" => {
                arity(1)?;
                Construction::Agl1(int(0)?)
            }
            "sl23" => {
                arity(0)?;
                Construction::Sl23
            }
            "direct_product" => {
                arity(2)?;
                Construction::DirectProduct(sub(0)?, sub(1)?)
            }
            "semidirect_product" => {
                arity(3)?;
                let action = match &args[2] {
                    Expr::List(rows) => rows
                        .iter()
                        .map(|row| match row {
                            Expr::List(items) => items
                                .iter()
                                .map(|v| match v {
                                    Expr::Int(v) => Ok(*v),
                                    _ => Err(Error::InvalidParams(
                                        "action entries must be integers".into(),
                                    )),
                                })
                                .collect(),
                            _ => Err(Error::InvalidParams(
                                "action must be a list of permutations".into(),
                            )),
                        })
                        .collect::<Result<Vec<Vec<usize>>>>()?,
                    _ => {
                        return Err(Error::InvalidParams(
                            "semidirect_product: third argument must be an action list".into(),
                        ))
                    }
                };
                Construction::SemidirectProduct {
                    kernel: sub(0)?,
                    acting: sub(1)?,
                    action,
                }
            }
            other => {
                return Err(Error::InvalidParams(format!(
                    "unknown constructor '{other}'"
                )));
            }
        };
        Ok(c)
    }

    /// Constructor name plus a parameter object, as used in group files.
    pub fn from_params(name: &str, params: &Map<String, Value>) -> Result<Self> {
        if params.is_empty() && name.contains('(') {
            return Self::parse(name);
        }
        let int = |key: &str| -> Result<usize> {
            params
                .get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| {
                    Error::InvalidParams(format!("{name}: missing integer parameter '{key}'"))
                })
        };
        let sub = |key: &str| -> Result<Box<Construction>> {
            params
                .get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| {
                    Error::InvalidParams(format!("{name}: missing group parameter '{key}'"))
                })
                .and_then(Self::parse)
                .map(Box::new)
        };
        let c = match name {
            "cyclic" => Construction::Cyclic(int("n")?),
            "dihedral" => Construction::Dihedral(int("n")?),
            "dicyclic" => Construction::Dicyclic(int("n")?),
            "symmetric" => Construction::Symmetric(int("n")?),
            "alternating" => Construction::Alternating(int("n")?),
            "heisenberg" => Construction::Heisenberg(int("p")?),
            "heisenberg_frobenius" => Construction::HeisenbergFrobenius(int("p")?, int("q")?),
            "agl1" => Construction::Agl1(int("q")?),
            "sl23" => Construction::Sl23,
            "direct_product" => Construction::DirectProduct(sub("left")?, sub("right")?),
            "semidirect_product" => {
                let action = params
                    .get("action")
                    .cloned()
                    .ok_or_else(|| {
                        Error::InvalidParams("semidirect_product: missing 'action'".into())
                    })
                    .and_then(|v| {
                        serde_json::from_value::<Vec<Vec<usize>>>(v).map_err(|e| {
                            Error::InvalidParams(format!("semidirect_product: action: {e}"))
                        })
                    })?;
                Construction::SemidirectProduct {
                    kernel: sub("kernel")?,
                    acting: sub("acting")?,
                    action,
                }
            }
            other => {
                return Err(Error::InvalidParams(format!(
                    "unknown constructor '{other}'"
                )))
            }
        };
        Ok(c)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Construction::*;
        match self {
            Cyclic(n) => write!(f, "cyclic({n})"),
            Dihedral(n) => write!(f, "dihedral({n})"),
            Dicyclic(n) => write!(f, "dicyclic({n})"),
            Symmetric(n) => write!(f, "symmetric({n})"),
            Alternating(n) => write!(f, "alternating({n})"),
            DirectProduct(a, b) => write!(f, "direct_product({a},{b})"),
            SemidirectProduct {
                kernel,
                acting,
                action,
            } => {
                write!(f, "semidirect_product({kernel},{acting},[")?;
                for (t, perm) in action.iter().enumerate() {
                    if t > 0 {
                        f.write_str(",")?;
                    }
                    let items: Vec<String> = perm.iter().map(|v| v.to_string()).collect();
                    write!(f, "[{}]", items.join(","))?;
                }
                f.write_str("])")
            }
            Heisenberg(p) => write!(f, "heisenberg({p})"),
            HeisenbergFrobenius(p, q) => write!(f, "heisenberg_frobenius({p},{q})"),
            Agl1(q) => write!(f, "agl1({q})"),
            Sl23 => f.write_str("sl23"),
        }
    }
}

fn positive(n: usize, what: &str) -> Result<usize> {
    if n == 0 {
        Err(Error::InvalidParams(format!(
            "{what}: parameter must be positive"
        )))
    } else {
        Ok(n)
    }
}

fn degree(n: usize, what: &str) -> Result<usize> {
    if (1..=MAX_PERMUTATION_DEGREE).contains(&n) {
        Ok(n)
    } else {
        Err(Error::InvalidParams(format!(
            "{what}: degree must be in 1..={MAX_PERMUTATION_DEGREE}"
        )))
    }
}

fn prime(p: usize, what: &str) -> Result<usize> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::InvalidParams(format!("{what}: {p} is not prime")))
    }
}

/// Least λ of multiplicative order exactly `order` mod prime `p`.
fn least_element_of_order(p: usize, order: usize) -> Option<usize> {
    (2..p).find(|&l| multiplicative_order(l, p) == Some(order))
}

fn frobenius_multiplier(p: usize, q: usize) -> Result<usize> {
    prime(p, "heisenberg_frobenius")?;
    prime(q, "heisenberg_frobenius")?;
    if q == 2 {
        return Err(Error::InvalidParams(
            "heisenberg_frobenius: q must be an odd prime".into(),
        ));
    }
    if !(p - 1).is_multiple_of(q) {
        return Err(Error::InvalidParams(format!(
            "heisenberg_frobenius: {q} does not divide {p} - 1"
        )));
    }
    Ok(least_element_of_order(p, q).expect("F_p* is cyclic"))
}

/// `(a, b)` at index `a |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let nb = b.order();
    FiniteGroup::from_associative_fn(a.order() * nb, |l, r| {
        a.mul(l / nb, r / nb) * nb + b.mul(l % nb, r % nb)
    })
}

/// `K ⋊ H` with `(k₁,h₁)(k₂,h₂) = (k₁·φ_{h₁}(k₂), h₁h₂)`, element `(k,h)` at
/// index `k + |K| h`. `generator_action[t]` gives `φ` on `H`'s `t`-th
/// generator (see [`FiniteGroup::generators`]). Also returns `φ_h` for every
/// `h`.
pub fn semidirect_product(
    kernel: &FiniteGroup,
    acting: &FiniteGroup,
    generator_action: &[Vec<usize>],
) -> Result<(FiniteGroup, Vec<Vec<Elem>>)> {
    let nk = kernel.order();
    let hgens = acting.generators();
    if generator_action.len() != hgens.len() {
        return Err(Error::InvalidAction(format!(
            "acting group has {} generators but {} actions were given",
            hgens.len(),
            generator_action.len()
        )));
    }
    for (t, perm) in generator_action.iter().enumerate() {
        check_automorphism(kernel, perm)
            .map_err(|msg| Error::InvalidAction(format!("generator {t}: {msg}")))?;
    }

    let identity: Vec<Elem> = (0..nk).collect();
    let mut phi: Vec<Option<Vec<Elem>>> = vec![None; acting.order()];
    phi[0] = Some(identity);
    let mut queue = vec![0];
    let mut cursor = 0;
    while cursor < queue.len() {
        let h = queue[cursor];
        cursor += 1;
        for (t, &g) in hgens.iter().enumerate() {
            let hg = acting.mul(h, g);
            let current = phi[h].as_ref().expect("visited");
            let composed: Vec<Elem> = (0..nk).map(|k| current[generator_action[t][k]]).collect();
            match &phi[hg] {
                None => {
                    phi[hg] = Some(composed);
                    queue.push(hg);
                }
                Some(existing) if *existing != composed => {
                    return Err(Error::InvalidAction(format!(
                        "action does not respect the relations of the acting group at element {hg}"
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let phi: Vec<Vec<Elem>> = phi
        .into_iter()
        .map(|p| p.expect("H is generated"))
        .collect();

    let group = FiniteGroup::from_associative_fn(nk * acting.order(), |l, r| {
        let (k1, h1) = (l % nk, l / nk);
        let (k2, h2) = (r % nk, r / nk);
        kernel.mul(k1, phi[h1][k2]) + nk * acting.mul(h1, h2)
    })?;
    Ok((group, phi))
}

fn check_automorphism(group: &FiniteGroup, perm: &[usize]) -> std::result::Result<(), String> {
    let n = group.order();
    if perm.len() != n {
        return Err(format!("expected {n} images, got {}", perm.len()));
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err("not a permutation of the kernel".into());
        }
    }
    for a in 0..n {
        for b in 0..n {
            if perm[group.mul(a, b)] != group.mul(perm[a], perm[b]) {
                return Err(format!("not a homomorphism at ({a}, {b})"));
            }
        }
    }
    Ok(())
}

fn heisenberg(p: usize) -> Result<FiniteGroup> {
    prime(p, "heisenberg")?;
    let c = HeisenbergCoords(p);
    FiniteGroup::from_associative_fn(p * p * p, |l, r| {
        let (x, y, z) = c.split(l);
        let (u, v, w) = c.split(r);
        c.join(x + u, y + v, z + w + x * v)
    })
}

/// Coordinates `(x, y, z)` of a Heisenberg element, index `x p² + y p + z`.
#[derive(Clone, Copy)]
struct HeisenbergCoords(usize);

impl HeisenbergCoords {
    fn split(self, i: usize) -> (usize, usize, usize) {
        let p = self.0;
        (i / (p * p), (i / p) % p, i % p)
    }

    fn join(self, x: usize, y: usize, z: usize) -> usize {
        let p = self.0;
        (x % p) * p * p + (y % p) * p + z % p
    }
}

fn heisenberg_frobenius(p: usize, q: usize) -> Result<FiniteGroup> {
    let lambda = frobenius_multiplier(p, q)?;
    let kernel = heisenberg(p)?;
    let acting = Construction::Cyclic(q).build(usize::MAX)?;
    let c = HeisenbergCoords(p);
    let action: Vec<usize> = (0..kernel.order())
        .map(|i| {
            let (x, y, z) = c.split(i);
            c.join(lambda * x, lambda * y, lambda * lambda % p * z)
        })
        .collect();
    let (group, phi) = semidirect_product(&kernel, &acting, &[action])?;
    for (h, map) in phi.iter().enumerate().skip(1) {
        if let Some(k) = (1..kernel.order()).find(|&k| map[k] == k) {
            return Err(Error::InvalidAction(format!(
                "complement element {h} fixes kernel element {k}"
            )));
        }
    }
    Ok(group)
}

/// Where a group comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSource {
    Construction(Construction),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub source: GroupSource,
}

impl GroupSpec {
    pub fn construction(c: Construction) -> Self {
        GroupSpec {
            name: c.to_string(),
            source: GroupSource::Construction(c),
        }
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        GroupSpec {
            name: path.display().to_string(),
            source: GroupSource::File(path),
        }
    }

    /// A spec string for an existing path is a file, anything else is parsed
    /// as a construction.
    pub fn resolve(text: &str) -> Result<Self> {
        let path = Path::new(text);
        if path.is_file() {
            Ok(Self::file(path))
        } else {
            Construction::parse(text).map(Self::construction)
        }
    }
}

/// Builds the group named by `spec`, returning its stable id alongside:
/// the constructor string for constructions, `path#hash` for files.
pub fn build(spec: &GroupSpec, max_order: usize) -> Result<(String, FiniteGroup)> {
    match &spec.source {
        GroupSource::Construction(c) => Ok((c.to_string(), c.build(max_order)?)),
        GroupSource::File(path) => {
            let bytes = read(path)?;
            let digest = Sha256::digest(&bytes);
            let hash: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
            let (_, group) = parse_group_file(&bytes, &path.display().to_string(), max_order)?;
            Ok((format!("{}#{hash}", path.display()), group))
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Deterministic list of test groups with order at most `max_order`.
pub fn builtin_catalog(max_order: usize) -> Result<Vec<GroupSpec>> {
    use Construction::*;
    if max_order == 0 {
        return Err(Error::InvalidParams("max order must be at least 1".into()));
    }
    let mut list: Vec<Construction> = Vec::new();
    list.extend((1..=max_order).map(Cyclic));
    list.extend((3..).take_while(|n| 2 * n <= max_order).map(Dihedral));
    list.extend((2..).take_while(|n| 4 * n <= max_order).map(Dicyclic));
    list.extend([Symmetric(3), Symmetric(4), Alternating(4), Alternating(5)]);

    let prod = |parts: &[usize]| -> Construction {
        let mut it = parts.iter().rev();
        let mut acc = Cyclic(*it.next().expect("non-empty"));
        for &n in it {
            acc = Construction::direct_product(Cyclic(n), acc);
        }
        acc
    };
    for parts in [
        &[2, 2][..],
        &[2, 4],
        &[2, 8],
        &[4, 4],
        &[2, 2, 2],
        &[2, 2, 4],
        &[2, 4, 4],
        &[2, 2, 2, 2],
        &[3, 3],
        &[3, 9],
        &[3, 3, 3],
        &[5, 5],
        &[7, 7],
        &[2, 3, 4],
    ] {
        list.push(prod(parts));
    }

    let dp = |a: Construction, b: Construction| Construction::direct_product(a, b);
    list.extend([
        dp(Symmetric(3), Cyclic(2)),
        dp(Symmetric(3), Cyclic(3)),
        dp(Symmetric(3), Cyclic(4)),
        dp(Dihedral(4), Cyclic(2)),
        dp(Dihedral(4), Cyclic(3)),
        dp(Dicyclic(2), Cyclic(2)),
        dp(Dicyclic(2), Cyclic(3)),
        dp(Dicyclic(2), Cyclic(5)),
        dp(Alternating(4), Cyclic(2)),
        dp(Alternating(4), Cyclic(3)),
        dp(Symmetric(3), Symmetric(3)),
        dp(Dihedral(4), Symmetric(3)),
        dp(Heisenberg(3), Cyclic(2)),
        dp(Agl1(5), Cyclic(2)),
        dp(Agl1(7), Cyclic(3)),
        dp(Sl23, Cyclic(2)),
    ]);
    list.extend([Heisenberg(3), Heisenberg(5), Heisenberg(7)]);
    list.extend([HeisenbergFrobenius(7, 3), HeisenbergFrobenius(13, 3)]);
    list.extend([2, 3, 5, 7, 11, 13].map(Agl1));
    list.push(Sl23);

    for p in [3usize, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        for k in 2..p - 1 {
            if (p - 1) % k != 0 {
                continue;
            }
            let lambda = least_element_of_order(p, k).expect("F_p* is cyclic");
            list.push(Construction::SemidirectProduct {
                kernel: Box::new(Cyclic(p)),
                acting: Box::new(Cyclic(k)),
                action: vec![(0..p).map(|x| x * lambda % p).collect()],
            });
        }
    }
    // Metacyclic groups Z_m ⋊ Z_k acting by a unit of order k mod m.
    for (m, k, unit) in [
        (9usize, 3usize, 4usize),
        (9, 6, 2),
        (8, 2, 3),
        (8, 2, 5),
        (16, 2, 7),
        (15, 2, 4),
        (21, 3, 4),
    ] {
        debug_assert_eq!(gcd(m, unit), 1);
        list.push(Construction::SemidirectProduct {
            kernel: Box::new(Cyclic(m)),
            acting: Box::new(Cyclic(k)),
            action: vec![(0..m).map(|x| x * unit % m).collect()],
        });
    }

    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for c in list {
        if c.expected_order()? <= max_order && seen.insert(c.to_string()) {
            out.push(GroupSpec::construction(c));
        }
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    name: String,
    kind: String,
    table: Option<Vec<Vec<usize>>>,
    degree: Option<usize>,
    generators: Option<Vec<Vec<usize>>>,
    constructor: Option<String>,
    params: Option<Map<String, Value>>,
}

fn parse_group_file(
    bytes: &[u8],
    source_name: &str,
    max_order: usize,
) -> Result<(String, FiniteGroup)> {
    let file: GroupFile = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8_lossy(bytes);
    let missing = |field: &str| {
        let (line, column) = locate_key(&text, "kind");
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            column,
            message: format!("kind '{}' requires field `{field}`", file.kind),
        }
    };
    match file.kind.as_str() {
        "cayley" => {
            let table = file.table.as_ref().ok_or_else(|| missing("table"))?;
            if table.len() > max_order {
                return Err(Error::OrderLimitExceeded { limit: max_order });
            }
            Ok((file.name.clone(), FiniteGroup::from_cayley_table(table)?))
        }
        "permutations" => {
            let degree = file.degree.ok_or_else(|| missing("degree"))?;
            let generators = file
                .generators
                .as_ref()
                .ok_or_else(|| missing("generators"))?;
            Ok((
                file.name.clone(),
                FiniteGroup::from_permutations(generators, degree, max_order)?,
            ))
        }
        "construction" => {
            let constructor = file
                .constructor
                .as_ref()
                .ok_or_else(|| missing("constructor"))?;
            let params = file.params.clone().unwrap_or_default();
            Ok((
                file.name.clone(),
                Construction::from_params(constructor, &params)?.build(max_order)?,
            ))
        }
        other => {
            let (line, column) = locate_key(&text, "kind");
            Err(Error::Parse {
                source_name: source_name.to_string(),
                line,
                column,
                message: format!(
                    "field `kind`: unknown kind '{other}', expected cayley, permutations or construction"
                ),
            })
        }
    }
}

/// 1-based line and column of the first `"key"` in `text`, or (1, 1).
fn locate_key(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    text.lines()
        .enumerate()
        .find_map(|(i, line)| line.find(&needle).map(|c| (i + 1, c + 1)))
        .unwrap_or((1, 1))
}

/// Reads a group file, returning its declared name and the validated group.
pub fn load_named_group(path: &Path, max_order: usize) -> Result<(String, FiniteGroup)> {
    let bytes = read(path)?;
    parse_group_file(&bytes, &path.display().to_string(), max_order)
}

/// Reads a group file under the global order guard.
pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    load_named_group(path, global_order_guard()).map(|(_, g)| g)
}

/// Canonical Cayley-table rendering: two-space indentation, one table row
/// per line, single spaces after commas, trailing newline.
pub fn render_cayley(name: &str, group: &FiniteGroup) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!(
        "  \"name\": {},\n",
        serde_json::to_string(name).expect("strings serialize")
    ));
    out.push_str("  \"kind\": \"cayley\",\n");
    out.push_str("  \"table\": [\n");
    for i in group.elements() {
        let row: Vec<String> = group.row(i).map(|v| v.to_string()).collect();
        out.push_str("    [");
        out.push_str(&row.join(", "));
        out.push(']');
        if i + 1 < group.order() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn save_group(group: &FiniteGroup, name: &str, path: &Path) -> Result<()> {
    fs::write(path, render_cayley(name, group)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug)]
enum Expr {
    Int(usize),
    Call(String, Vec<Expr>),
    List(Vec<Expr>),
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            source_name: "group expression".into(),
            line: 1,
            column: self.pos + 1,
            message: format!("{message} in '{}'", self.src),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                digits
                    .parse()
                    .map(Expr::Int)
                    .map_err(|_| self.error("integer out of range"))
            }
            Some('[') => {
                self.pos += 1;
                let items = self.sequence(']')?;
                Ok(Expr::List(items))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self
                    .take_while(|c| c.is_ascii_alphanumeric() || c == '_')
                    .to_string();
                let args = if self.eat('(') {
                    self.sequence(')')?
                } else {
                    Vec::new()
                };
                Ok(Expr::Call(name, args))
            }
            _ => Err(self.error("expected a constructor, integer or list")),
        }
    }

    fn sequence(&mut self, close: char) -> Result<Vec<Expr>> {
        let mut items = Vec::new();
        if self.eat(close) {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.eat(close) {
                return Ok(items);
            }
            if !self.eat(',') {
                return Err(self.error(&format!("expected ',' or '{close}'")));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::{center, centralizer, commutator_subgroup};

    fn build(c: Construction) -> FiniteGroup {
        c.build(DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn orders_match_expectations() {
        use Construction::*;
        for c in [
            Cyclic(1),
            Cyclic(12),
            Dihedral(5),
            Dicyclic(2),
            Dicyclic(3),
            Symmetric(4),
            Alternating(5),
            Heisenberg(3),
            Agl1(7),
            Sl23,
            Construction::direct_product(Symmetric(3), Cyclic(2)),
        ] {
            let g = build(c.clone());
            assert_eq!(g.order(), c.expected_order().unwrap(), "{c}");
        }
    }

    #[test]
    fn constructions_pass_full_validation() {
        use Construction::*;
        for c in [
            Dihedral(6),
            Dicyclic(3),
            Heisenberg(3),
            Agl1(5),
            Construction::parse("semidirect_product(cyclic(7),cyclic(3),[[0,2,4,6,1,3,5]])")
                .unwrap(),
            Construction::direct_product(Dicyclic(2), Cyclic(3)),
        ] {
            let g = build(c.clone());
            assert!(
                FiniteGroup::from_cayley_table(&g.table_rows()).is_ok(),
                "{c}"
            );
        }
    }

    #[test]
    fn cyclic_one_is_trivial() {
        assert_eq!(build(Construction::Cyclic(1)).order(), 1);
    }

    #[test]
    fn dicyclic_two_is_quaternion() {
        let q8 = build(Construction::Dicyclic(2));
        let mut orders: Vec<_> = q8.element_orders().collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn heisenberg_structure() {
        for p in [3, 5, 7] {
            let g = build(Construction::Heisenberg(p));
            assert_eq!(g.order(), p * p * p);
            assert_eq!(g.exponent(), p);
            let z = center(&g);
            assert_eq!(z.size(), p);
            assert_eq!(commutator_subgroup(&g), z);
            for x in g.elements().filter(|&x| !z.contains(x)) {
                let c = centralizer(&g, x);
                assert_eq!(c.size(), p * p);
            }
        }
    }

    #[test]
    fn heisenberg_frobenius_flagship_shape() {
        let g = build(Construction::HeisenbergFrobenius(7, 3));
        assert_eq!(g.order(), 1029);
        assert!(center(&g).is_trivial());
    }

    #[test]
    fn heisenberg_frobenius_rejects_bad_params() {
        use Construction::HeisenbergFrobenius as HF;
        for c in [HF(7, 2), HF(7, 5), HF(8, 3), HF(11, 3)] {
            assert!(
                matches!(c.build(DEFAULT_MAX_ORDER), Err(Error::InvalidParams(_))),
                "{c}"
            );
        }
    }

    #[test]
    fn semidirect_rejects_non_automorphism() {
        let k = build(Construction::Cyclic(4));
        let h = build(Construction::Cyclic(2));
        // Swapping 1 and 2 is a bijection but not a homomorphism of Z4.
        let err = semidirect_product(&k, &h, &[vec![0, 2, 1, 3]]).unwrap_err();
        assert!(matches!(err, Error::InvalidAction(_)));
    }

    #[test]
    fn semidirect_rejects_non_homomorphism() {
        // Multiplication by 2 on Z7 has order 3, which cannot be the image of
        // a generator of Z2.
        let k = build(Construction::Cyclic(7));
        let h = build(Construction::Cyclic(2));
        let action: Vec<usize> = (0..7).map(|x| 2 * x % 7).collect();
        let err = semidirect_product(&k, &h, &[action]).unwrap_err();
        assert!(matches!(err, Error::InvalidAction(_)));
    }

    #[test]
    fn order_guard_precedes_allocation() {
        let err = Construction::Symmetric(5).build(100).unwrap_err();
        assert!(matches!(err, Error::OrderLimitExceeded { limit: 100 }));
    }

    #[test]
    fn display_parse_round_trip() {
        for spec in builtin_catalog(200).unwrap() {
            let GroupSource::Construction(c) = &spec.source else {
                unreachable!()
            };
            assert_eq!(&Construction::parse(&spec.name).unwrap(), c);
        }
        assert_eq!(Construction::parse("sl23()").unwrap(), Construction::Sl23);
        assert!(Construction::parse("cyclic(3").is_err());
        assert!(Construction::parse("frobnicate(3)").is_err());
        assert!(Construction::parse("cyclic(3) x").is_err());
    }

    #[test]
    fn catalog_contract() {
        let names: Vec<String> = builtin_catalog(6)
            .unwrap()
            .into_iter()
            .map(|s| s.name)
            .collect();
        for n in 1..=6 {
            assert!(names.contains(&format!("cyclic({n})")));
        }
        assert!(names.contains(&"dihedral(3)".to_string()));
        assert!(names.contains(&"symmetric(3)".to_string()));
        let big: Vec<String> = builtin_catalog(1100)
            .unwrap()
            .into_iter()
            .map(|s| s.name)
            .collect();
        assert!(big.contains(&"heisenberg_frobenius(7,3)".to_string()));
        assert!(!big.contains(&"heisenberg_frobenius(13,3)".to_string()));
        assert!(matches!(builtin_catalog(0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn params_object() {
        let params: Map<String, Value> = serde_json::from_str(r#"{"p": 7, "q": 3}"#).unwrap();
        assert_eq!(
            Construction::from_params("heisenberg_frobenius", &params).unwrap(),
            Construction::HeisenbergFrobenius(7, 3)
        );
        let params: Map<String, Value> =
            serde_json::from_str(r#"{"left": "cyclic(2)", "right": "symmetric(3)"}"#).unwrap();
        assert_eq!(
            Construction::from_params("direct_product", &params)
                .unwrap()
                .to_string(),
            "direct_product(cyclic(2),symmetric(3))"
        );
        assert!(Construction::from_params("cyclic", &Map::new()).is_err());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_group_file(
            b"{\n  \"name\": \"x\",\n  \"kind\": \"cayley\"\n}",
            "mem",
            10,
        )
        .unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert!(line >= 1);
                assert!(message.contains("table"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn render_is_canonical() {
        let g = build(Construction::Cyclic(2));
        assert_eq!(
            render_cayley("Z2", &g),
            "{\n  \"name\": \"Z2\",\n  \"kind\": \"cayley\",\n  \"table\": [\n    [0, 1],\n    [1, 0]\n  ]\n}\n"
        );
    }
}
