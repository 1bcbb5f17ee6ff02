//! Inner, outer and generalized inverses of finite maps, projection
//! operators, and closure of regularity under composition.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{mismatch, Error, Result};
use crate::finmap::{compose, identity, FinMap};
use crate::space::{space_size, table_at};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InverseKind {
    /// `f.g.f = f`
    Inner,
    /// `g.f.g = g`
    Outer,
    /// inner and outer at once
    Generalized,
}

impl std::str::FromStr for InverseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inner" => Ok(InverseKind::Inner),
            "outer" => Ok(InverseKind::Outer),
            "generalized" => Ok(InverseKind::Generalized),
            other => Err(Error::InvalidArgument(format!("unknown inverse kind `{other}`"))),
        }
    }
}

fn check_reverse_type(f: &FinMap, g: &FinMap) -> Result<()> {
    if g.dom() != f.cod() {
        return Err(mismatch(f.cod().id(), g.dom().id()));
    }
    if g.cod() != f.dom() {
        return Err(mismatch(f.dom().id(), g.cod().id()));
    }
    Ok(())
}

fn inner_holds(f: &[usize], g: &[usize]) -> bool {
    f.iter().all(|&y| f[g[y]] == y)
}

fn outer_holds(f: &[usize], g: &[usize]) -> bool {
    g.iter().all(|&x| g[f[x]] == x)
}

fn holds(f: &[usize], g: &[usize], kind: InverseKind) -> bool {
    match kind {
        InverseKind::Inner => inner_holds(f, g),
        InverseKind::Outer => outer_holds(f, g),
        InverseKind::Generalized => inner_holds(f, g) && outer_holds(f, g),
    }
}

/// Pointwise check of the defining equation(s) of `kind` for `g: cod(f) -> dom(f)`.
pub fn is_inverse(f: &FinMap, g: &FinMap, kind: InverseKind) -> Result<bool> {
    check_reverse_type(f, g)?;
    Ok(holds(f.table(), g.table(), kind))
}

/// The canonical inner inverse: least preimage on the image, index 0
/// elsewhere.
pub fn section_inner_inverse(f: &FinMap) -> Result<FinMap> {
    if f.dom().is_empty() && !f.cod().is_empty() {
        return Err(Error::NoInverseExists {
            dom: f.dom().id().to_owned(),
            cod: f.cod().id().to_owned(),
        });
    }
    let mut table = vec![None; f.cod().cardinality()];
    for (x, &y) in f.table().iter().enumerate() {
        table[y].get_or_insert(x);
    }
    let table = table.into_iter().map(|v| v.unwrap_or(0)).collect();
    Ok(FinMap::from_parts(
        format!("{}^+", f.name()),
        f.cod().clone(),
        f.dom().clone(),
        table,
    ))
}

/// Number of inner inverses: the product of fibre sizes over the image,
/// times `|dom|` for every point outside it.
pub fn inner_inverse_count(f: &FinMap) -> u128 {
    fibres(f)
        .iter()
        .map(|c| c.len() as u128)
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

// Admissible values of an inner inverse at each codomain point.
fn fibres(f: &FinMap) -> Vec<Vec<usize>> {
    let mut fib = vec![Vec::new(); f.cod().cardinality()];
    for (x, &y) in f.table().iter().enumerate() {
        fib[y].push(x);
    }
    let all: Vec<usize> = (0..f.dom().cardinality()).collect();
    for choices in fib.iter_mut() {
        if choices.is_empty() {
            *choices = all.clone();
        }
    }
    fib
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseEnumeration {
    /// Inverses in lexicographic table order, truncated at the limit.
    pub inverses: Vec<FinMap>,
    /// Total number of inverses when `exhaustive`, otherwise the number found.
    pub count: u128,
    pub exhaustive: bool,
}

const CHUNK: u128 = 1 << 12;

/// Enumerates every `g: cod(f) -> dom(f)` of the given kind.
///
/// Inner inverses are generated directly from the fibres of `f`; outer
/// inverses by a partitioned scan of the candidate space, merged in rank
/// order so the result does not depend on the number of workers.
pub fn enumerate_inverses(
    f: &FinMap,
    kind: InverseKind,
    limit: Option<usize>,
    bound: u128,
) -> Result<InverseEnumeration> {
    let len = f.cod().cardinality();
    let base = f.dom().cardinality();
    let space = space_size(len, base);
    let within_bound = space <= bound;
    let wrap = |table: Vec<usize>| {
        FinMap::from_parts(format!("{}^*", f.name()), f.cod().clone(), f.dom().clone(), table)
    };
    match kind {
        InverseKind::Inner => {
            let count = inner_inverse_count(f);
            if count > bound && limit.is_none() {
                return Err(Error::SearchSpaceTooLarge { size: count, bound });
            }
            let take = limit.map_or(count, |l| count.min(l as u128));
            let tables = product_tables(&fibres(f), take as usize);
            Ok(InverseEnumeration {
                inverses: tables.into_iter().map(wrap).collect(),
                count,
                exhaustive: true,
            })
        }
        InverseKind::Generalized => {
            // Generalized inverses are the inner inverses that are also outer.
            let count = inner_inverse_count(f);
            if count > bound && limit.is_none() {
                return Err(Error::SearchSpaceTooLarge { size: count, bound });
            }
            let exhaustive = count <= bound;
            let keep = limit.unwrap_or(usize::MAX);
            let mut found = Vec::new();
            let mut total: u128 = 0;
            for_each_product(&fibres(f), |t| {
                if outer_holds(f.table(), t) {
                    total += 1;
                    if found.len() < keep {
                        found.push(t.to_vec());
                    }
                }
                exhaustive || found.len() < keep
            });
            Ok(InverseEnumeration {
                inverses: found.into_iter().map(wrap).collect(),
                count: total,
                exhaustive,
            })
        }
        InverseKind::Outer => {
            if !within_bound && limit.is_none() {
                return Err(Error::SearchSpaceTooLarge { size: space, bound });
            }
            if within_bound {
                let chunks = space.div_ceil(CHUNK);
                let tables: Vec<Vec<usize>> = (0..chunks)
                    .into_par_iter()
                    .flat_map_iter(|c| {
                        let lo = c * CHUNK;
                        let hi = (lo + CHUNK).min(space);
                        (lo..hi)
                            .map(|r| table_at(r, len, base))
                            .filter(|t| outer_holds(f.table(), t))
                            .collect::<Vec<_>>()
                    })
                    .collect();
                let count = tables.len() as u128;
                let keep = limit.unwrap_or(tables.len());
                Ok(InverseEnumeration {
                    inverses: tables.into_iter().take(keep).map(wrap).collect(),
                    count,
                    exhaustive: true,
                })
            } else {
                let l = limit.expect("checked above");
                let mut found = Vec::new();
                for t in crate::space::Tables::new(len, base) {
                    if found.len() >= l {
                        break;
                    }
                    if outer_holds(f.table(), &t) {
                        found.push(t);
                    }
                }
                Ok(InverseEnumeration {
                    count: found.len() as u128,
                    inverses: found.into_iter().map(wrap).collect(),
                    exhaustive: false,
                })
            }
        }
    }
}

// Lexicographic cartesian product, first `take` tuples.
fn product_tables(choices: &[Vec<usize>], take: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if take == 0 {
        return out;
    }
    for_each_product(choices, |t| {
        out.push(t.to_vec());
        out.len() < take
    });
    out
}

fn for_each_product(choices: &[Vec<usize>], mut visit: impl FnMut(&[usize]) -> bool) {
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut cursor = vec![0usize; choices.len()];
    let mut current: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    loop {
        if !visit(&current) {
            return;
        }
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < choices[pos].len() {
                current[pos] = choices[pos][cursor[pos]];
                break;
            }
            cursor[pos] = 0;
            current[pos] = choices[pos][0];
        }
    }
}

/// `g_in.f.g_in`, which is both an inner and an outer inverse of `f`.
pub fn generalized_from_inner(f: &FinMap, g_in: &FinMap) -> Result<FinMap> {
    if !is_inverse(f, g_in, InverseKind::Inner)? {
        return Err(Error::NotAnInnerInverse(g_in.name().to_owned()));
    }
    let table = g_in.table().iter().map(|&x| g_in.apply(f.apply(x))).collect();
    Ok(FinMap::from_parts(
        format!("{}^*", f.name()),
        f.cod().clone(),
        f.dom().clone(),
        table,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorPair {
    /// `f.f*`, an endomap of `cod(f)`.
    pub p_f: FinMap,
    /// `f*.f`, an endomap of `dom(f)`.
    pub p_fstar: FinMap,
    pub p_f_idempotent: bool,
    pub p_fstar_idempotent: bool,
    /// `P_f.f = f` and `f.P_f* = f`.
    pub absorbs_f: bool,
    /// `P_f*.f* = f*` and `f*.P_f = f*`.
    pub absorbs_fstar: bool,
}

pub fn projectors(f: &FinMap, fstar: &FinMap) -> Result<ProjectorPair> {
    check_reverse_type(f, fstar)?;
    let p_f = compose(f, fstar)?.with_name(format!("P_{}", f.name()));
    let p_fstar = compose(fstar, f)?.with_name(format!("P_{}", fstar.name()));
    let absorbs_f = compose(&p_f, f)? == *f && compose(f, &p_fstar)? == *f;
    let absorbs_fstar = compose(&p_fstar, fstar)? == *fstar && compose(fstar, &p_f)? == *fstar;
    Ok(ProjectorPair {
        p_f_idempotent: p_f.is_idempotent(),
        p_fstar_idempotent: p_fstar.is_idempotent(),
        p_f,
        p_fstar,
        absorbs_f,
        absorbs_fstar,
    })
}

/// Retraction and coretraction witnesses, each verified against its
/// defining equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibilityClass {
    /// `g` with `f.g = id_cod`.
    pub retraction: Option<FinMap>,
    /// `g` with `g.f = id_dom`.
    pub coretraction: Option<FinMap>,
}

impl InvertibilityClass {
    pub fn is_retraction(&self) -> bool {
        self.retraction.is_some()
    }

    pub fn is_coretraction(&self) -> bool {
        self.coretraction.is_some()
    }
}

pub fn invertibility_class(f: &FinMap) -> InvertibilityClass {
    let candidate = match section_inner_inverse(f) {
        Ok(g) => g,
        Err(_) => {
            return InvertibilityClass {
                retraction: None,
                coretraction: None,
            }
        }
    };
    // The least-preimage section is simultaneously the only sensible
    // candidate for both sides; each is kept only if its equation holds.
    let right = compose(f, &candidate).expect("typed by construction");
    let left = compose(&candidate, f).expect("typed by construction");
    InvertibilityClass {
        retraction: (right == identity(f.cod())).then(|| candidate.clone().with_name(format!("{}^r", f.name()))),
        coretraction: (left == identity(f.dom())).then(|| candidate.with_name(format!("{}^l", f.name()))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    /// `P_f.P_g* = P_g*.P_f` on the middle object.
    pub projectors_commute: bool,
    /// `f*.g*` is a generalized inverse of `g.f`.
    pub composite_regular: bool,
    pub composite_star: FinMap,
}

/// For `f: X -> Y`, `g: Y -> Z` with stars `fstar: Y -> X`, `gstar: Z -> Y`.
pub fn closure_composite(
    f: &FinMap,
    fstar: &FinMap,
    g: &FinMap,
    gstar: &FinMap,
) -> Result<ClosureReport> {
    check_reverse_type(f, fstar)?;
    check_reverse_type(g, gstar)?;
    let gf = compose(g, f)?;
    let p_f = compose(f, fstar)?;
    let p_gstar = compose(gstar, g)?;
    let projectors_commute = compose(&p_f, &p_gstar)? == compose(&p_gstar, &p_f)?;
    let composite_star = compose(fstar, gstar)?;
    let composite_regular = is_inverse(&gf, &composite_star, InverseKind::Generalized)?;
    Ok(ClosureReport {
        projectors_commute,
        composite_regular,
        composite_star,
    })
}

/// Whether `f` has exactly one generalized inverse.
pub fn unique_generalized_inverse(f: &FinMap, bound: u128) -> Result<bool> {
    Ok(enumerate_inverses(f, InverseKind::Generalized, None, bound)?.count == 1)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finmap::FiniteSet;
    use crate::space::{Tables, DEFAULT_MAX_SPACE};

    fn set(id: &str, n: usize) -> Arc<FiniteSet> {
        FiniteSet::range(id, n)
    }

    fn map(dom: &Arc<FiniteSet>, cod: &Arc<FiniteSet>, t: &[usize]) -> FinMap {
        FinMap::new("f", dom.clone(), cod.clone(), t.to_vec()).unwrap()
    }

    fn tables(e: &InverseEnumeration) -> Vec<Vec<usize>> {
        e.inverses.iter().map(|g| g.table().to_vec()).collect()
    }

    fn fixture() -> (Arc<FiniteSet>, Arc<FiniteSet>, FinMap) {
        let x = set("X", 3);
        let y = set("Y", 2);
        let f = map(&x, &y, &[0, 0, 1]);
        (x, y, f)
    }

    #[test]
    fn section_examples() {
        let (x, _, f) = fixture();
        let g = section_inner_inverse(&f).unwrap();
        assert_eq!(g.table(), &[0, 2]);
        assert!(is_inverse(&f, &g, InverseKind::Inner).unwrap());
        assert_eq!(section_inner_inverse(&identity(&x)).unwrap(), identity(&x));
        let perm = map(&x, &x, &[2, 0, 1]);
        assert_eq!(section_inner_inverse(&perm).unwrap().table(), &[1, 2, 0]);
    }

    #[test]
    fn section_from_empty_domain() {
        let e = set("E", 0);
        let y = set("Y", 2);
        let f = map(&e, &y, &[]);
        assert!(matches!(section_inner_inverse(&f), Err(Error::NoInverseExists { .. })));
        let g = section_inner_inverse(&identity(&e)).unwrap();
        assert!(g.table().is_empty());
    }

    #[test]
    fn enumerate_examples() {
        let (x, _, f) = fixture();
        let inner = enumerate_inverses(&f, InverseKind::Inner, None, DEFAULT_MAX_SPACE).unwrap();
        assert_eq!(tables(&inner), vec![vec![0, 2], vec![1, 2]]);
        assert_eq!(inner.count, 2);
        let outer = enumerate_inverses(&f, InverseKind::Outer, None, DEFAULT_MAX_SPACE).unwrap();
        assert_eq!(
            tables(&outer),
            vec![vec![0, 0], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]
        );
        assert_eq!(outer.count, 5);
        for kind in [InverseKind::Inner, InverseKind::Generalized] {
            let e = enumerate_inverses(&identity(&x), kind, None, DEFAULT_MAX_SPACE).unwrap();
            assert_eq!(tables(&e), vec![vec![0, 1, 2]]);
            assert_eq!(e.count, 1);
        }
        // Outer inverses of an identity are exactly the idempotents.
        let e = enumerate_inverses(&identity(&x), InverseKind::Outer, None, DEFAULT_MAX_SPACE).unwrap();
        assert_eq!(e.count, 10);
        assert!(e.inverses.iter().all(FinMap::is_idempotent));
    }

    #[test]
    fn limit_truncates_but_keeps_count() {
        let (_, _, f) = fixture();
        let e = enumerate_inverses(&f, InverseKind::Outer, Some(2), DEFAULT_MAX_SPACE).unwrap();
        assert_eq!(tables(&e), vec![vec![0, 0], vec![0, 2]]);
        assert_eq!(e.count, 5);
        assert!(e.exhaustive);
    }

    #[test]
    fn bound_enforced_without_limit() {
        let x = set("X", 4);
        let f = identity(&x);
        assert!(matches!(
            enumerate_inverses(&f, InverseKind::Outer, None, 100),
            Err(Error::SearchSpaceTooLarge { size: 256, bound: 100 })
        ));
        let e = enumerate_inverses(&f, InverseKind::Outer, Some(3), 100).unwrap();
        assert_eq!(e.inverses.len(), 3);
        assert!(!e.exhaustive);
    }

    #[test]
    fn is_inverse_examples() {
        let (x, y, f) = fixture();
        assert!(is_inverse(&f, &map(&y, &x, &[0, 2]), InverseKind::Inner).unwrap());
        let g = map(&y, &x, &[0, 0]);
        assert!(!is_inverse(&f, &g, InverseKind::Inner).unwrap());
        assert!(is_inverse(&f, &g, InverseKind::Outer).unwrap());
        assert!(is_inverse(&identity(&x), &identity(&x), InverseKind::Generalized).unwrap());
        assert!(matches!(
            is_inverse(&f, &f, InverseKind::Inner),
            Err(Error::TypeMismatch { .. })
        ));
    }

    #[test]
    fn generalized_from_inner_examples() {
        let (x, y, f) = fixture();
        let a = generalized_from_inner(&f, &map(&y, &x, &[1, 2])).unwrap();
        assert_eq!(a.table(), &[1, 2]);
        let b = generalized_from_inner(&f, &map(&y, &x, &[0, 2])).unwrap();
        assert_eq!(b.table(), &[0, 2]);
        assert_eq!(generalized_from_inner(&identity(&x), &identity(&x)).unwrap(), identity(&x));
        assert!(matches!(
            generalized_from_inner(&f, &map(&y, &x, &[0, 0])),
            Err(Error::NotAnInnerInverse(_))
        ));
    }

    #[test]
    fn projector_examples() {
        let (x, y, f) = fixture();
        let p = projectors(&f, &map(&y, &x, &[0, 2])).unwrap();
        assert_eq!(p.p_f, identity(&y));
        assert_eq!(p.p_fstar.table(), &[0, 0, 2]);
        assert!(p.p_f_idempotent && p.p_fstar_idempotent && p.absorbs_f && p.absorbs_fstar);

        let q = projectors(&f, &map(&y, &x, &[1, 2])).unwrap();
        assert_eq!(q.p_fstar.table(), &[1, 1, 2]);
        assert!(q.p_fstar_idempotent);

        let id = projectors(&identity(&x), &identity(&x)).unwrap();
        assert_eq!(id.p_f, identity(&x));
        assert_eq!(id.p_fstar, identity(&x));
    }

    #[test]
    fn invertibility_examples() {
        let (x, y, f) = fixture();
        let c = invertibility_class(&f);
        assert_eq!(c.retraction.as_ref().map(|g| g.table().to_vec()), Some(vec![0, 2]));
        assert!(!c.is_coretraction());

        let h = map(&y, &x, &[0, 2]);
        let c = invertibility_class(&h);
        assert_eq!(c.coretraction.as_ref().map(|g| g.table().to_vec()), Some(vec![0, 0, 1]));
        assert!(!c.is_retraction());

        let perm = map(&x, &x, &[1, 2, 0]);
        let c = invertibility_class(&perm);
        assert!(c.is_retraction() && c.is_coretraction());
    }

    // Searching every candidate g agrees with the canonical witnesses.
    #[test]
    fn witnesses_agree_with_search() {
        for n in 0..=3 {
            for m in 0..=3 {
                let x = set("X", n);
                let y = set("Y", m);
                for t in Tables::new(n, m) {
                    let f = map(&x, &y, &t);
                    let mut right = false;
                    let mut left = false;
                    for u in Tables::new(m, n) {
                        let g = map(&y, &x, &u);
                        right |= compose(&f, &g).unwrap() == identity(&y);
                        left |= compose(&g, &f).unwrap() == identity(&x);
                    }
                    let c = invertibility_class(&f);
                    assert_eq!(c.is_retraction(), right, "{t:?}");
                    assert_eq!(c.is_coretraction(), left, "{t:?}");
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let (x, y, f) = fixture();
        let id = identity(&x);
        let r = closure_composite(&id, &id, &id, &id).unwrap();
        assert!(r.projectors_commute && r.composite_regular);
        assert_eq!(r.composite_star, id);

        let fstar = map(&y, &x, &[0, 2]);
        let r = closure_composite(&f, &fstar, &identity(&y), &identity(&y)).unwrap();
        assert!(r.projectors_commute && r.composite_regular);
        assert_eq!(r.composite_star.table(), &[0, 2]);
    }

    #[test]
    fn uniqueness() {
        let (x, _, f) = fixture();
        assert!(!unique_generalized_inverse(&f, DEFAULT_MAX_SPACE).unwrap());
        assert!(unique_generalized_inverse(&identity(&x), DEFAULT_MAX_SPACE).unwrap());
        let perm = map(&x, &x, &[1, 2, 0]);
        assert!(unique_generalized_inverse(&perm, DEFAULT_MAX_SPACE).unwrap());
    }
}
