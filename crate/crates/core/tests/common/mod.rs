//! Helpers shared by the integration suites: exhaustive map enumeration,
//! table-level oracles written independently of the library, and seeded
//! random diagrams.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::Rng;
use regcat::diagrams::Diagram;
use regcat::{FinMap, FiniteSet};

pub fn set(id: &str, n: usize) -> Arc<FiniteSet> {
    FiniteSet::range(id, n)
}

pub fn map(name: &str, dom: &Arc<FiniteSet>, cod: &Arc<FiniteSet>, t: Vec<usize>) -> FinMap {
    FinMap::new(name, dom.clone(), cod.clone(), t).unwrap()
}

/// Every table of length `len` over `0..base`, lexicographic, by an
/// odometer kept separate from the library's enumerator.
pub fn tables(len: usize, base: usize) -> Vec<Vec<usize>> {
    if base == 0 && len > 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut t = vec![0; len];
    loop {
        out.push(t.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < base {
                break;
            }
            t[i] = 0;
        }
    }
}

pub fn all_maps(dom: &Arc<FiniteSet>, cod: &Arc<FiniteSet>) -> Vec<FinMap> {
    tables(dom.cardinality(), cod.cardinality())
        .into_iter()
        .map(|t| map("f", dom, cod, t))
        .collect()
}

/// Every map between sets of sizes `0..=max`, with its endpoints.
pub fn small_maps(max: usize) -> Vec<FinMap> {
    let mut out = Vec::new();
    for m in 0..=max {
        for n in 0..=max {
            out.extend(all_maps(&set("X", m), &set("Y", n)));
        }
    }
    out
}

/// `(g . f)` on raw tables: `f` applied first.
pub fn after(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

pub fn is_inner(f: &[usize], g: &[usize]) -> bool {
    after(f, &after(g, f)) == f
}

pub fn is_outer(f: &[usize], g: &[usize]) -> bool {
    after(g, &after(f, g)) == g
}

pub fn idempotent(t: &[usize]) -> bool {
    after(t, t) == t
}

pub fn is_identity(t: &[usize]) -> bool {
    t.iter().enumerate().all(|(i, &v)| i == v)
}

/// All tables `cod(f) -> dom(f)` passing `keep`, lexicographic.
pub fn naive_inverses(f: &FinMap, keep: impl Fn(&[usize], &[usize]) -> bool) -> Vec<Vec<usize>> {
    tables(f.cod().cardinality(), f.dom().cardinality())
        .into_iter()
        .filter(|g| keep(f.table(), g))
        .collect()
}

/// Pairs `(f, f*)` with `f*` a generalized inverse, over sizes `0..=max`.
pub fn generalized_pairs(max: usize) -> Vec<(FinMap, FinMap)> {
    let mut out = Vec::new();
    for f in small_maps(max) {
        for g in naive_inverses(&f, |f, g| is_inner(f, g) && is_outer(f, g)) {
            let gm = map("g", f.cod(), f.dom(), g);
            out.push((f.clone(), gm));
        }
    }
    out
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "regcat"))
        .collect();
    v.sort();
    v
}

/// A random diagram with `1..=max_objects` objects of size `1..=max_size`
/// and `0..=max_edges` random edges.
pub fn random_diagram(rng: &mut impl Rng, max_objects: usize, max_size: usize, max_edges: usize) -> Diagram {
    let k = rng.random_range(1..=max_objects);
    let objects: Vec<Arc<FiniteSet>> = (0..k)
        .map(|i| set(&format!("O{i}"), rng.random_range(1..=max_size)))
        .collect();
    let e = rng.random_range(0..=max_edges);
    let edges = (0..e)
        .map(|i| {
            let a = &objects[rng.random_range(0..k)];
            let b = &objects[rng.random_range(0..k)];
            random_map(rng, &format!("m{i}"), a, b)
        })
        .collect();
    Diagram::new("D", objects, edges).unwrap()
}

pub fn random_map(rng: &mut impl Rng, name: &str, a: &Arc<FiniteSet>, b: &Arc<FiniteSet>) -> FinMap {
    let t = (0..a.cardinality()).map(|_| rng.random_range(0..b.cardinality())).collect();
    map(name, a, b, t)
}

/// Both sides of `R.L.R = L.R.L` on a single carrier of size `n`, by
/// explicit tuple manipulation.
pub fn ybe_sides(b: &[usize], e: &[usize], n: usize, t: [usize; 3]) -> ([usize; 3], [usize; 3]) {
    let bb = |x: usize, y: usize| {
        let v = b[x * n + y];
        (v / n, v % n)
    };
    let r = |t: [usize; 3]| {
        let (p, q) = bb(t[0], t[1]);
        [p, q, e[t[2]]]
    };
    let l = |t: [usize; 3]| {
        let (p, q) = bb(t[1], t[2]);
        [e[t[0]], p, q]
    };
    (r(l(r(t))), l(r(l(t))))
}

pub fn ybe_holds(b: &[usize], e: &[usize], n: usize) -> bool {
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| {
        let (l, r) = ybe_sides(b, e, n, [x, y, z]);
        l == r
    })))
}

pub struct FunctorCase {
    pub source: Diagram,
    pub target: Diagram,
    pub objects: std::collections::BTreeMap<String, String>,
    pub edges: std::collections::BTreeMap<String, String>,
}

fn identity_edge(name: &str, o: &Arc<FiniteSet>) -> FinMap {
    map(name, o, o, (0..o.cardinality()).collect())
}

/// A random functor between random diagrams that carry an explicit
/// identity edge per object. Identity edges usually, but not always, go to
/// identities; the source sometimes contains a named composite.
pub fn random_functor(rng: &mut impl Rng) -> FunctorCase {
    let src_objs: Vec<_> = (0..rng.random_range(1..=3))
        .map(|i| set(&format!("S{i}"), rng.random_range(1..=3)))
        .collect();
    let tgt_objs: Vec<_> = (0..rng.random_range(1..=3))
        .map(|i| set(&format!("T{i}"), rng.random_range(1..=3)))
        .collect();
    let mut src_edges: Vec<FinMap> = src_objs.iter().map(|o| identity_edge(&format!("id_{}", o.id()), o)).collect();
    for i in 0..rng.random_range(0..=3) {
        let a = &src_objs[rng.random_range(0..src_objs.len())];
        let b = &src_objs[rng.random_range(0..src_objs.len())];
        src_edges.push(random_map(rng, &format!("s{i}"), a, b));
    }
    if rng.random_bool(0.5) {
        let plain: Vec<&FinMap> = src_edges.iter().filter(|e| e.name().starts_with('s')).collect();
        let pairs: Vec<(&FinMap, &FinMap)> = plain
            .iter()
            .flat_map(|a| plain.iter().filter(move |b| b.dom() == a.cod()).map(move |b| (*a, *b)))
            .collect();
        if !pairs.is_empty() {
            let (a, b) = pairs[rng.random_range(0..pairs.len())];
            let c = regcat::compose(b, a).unwrap().with_name("c");
            src_edges.push(c);
        }
    }
    let objects: std::collections::BTreeMap<String, String> = src_objs
        .iter()
        .map(|o| (o.id().to_owned(), tgt_objs[rng.random_range(0..tgt_objs.len())].id().to_owned()))
        .collect();
    let obj = |id: &str| tgt_objs.iter().find(|o| o.id() == objects[id]).unwrap().clone();
    let mut tgt_edges: Vec<FinMap> = tgt_objs.iter().map(|o| identity_edge(&format!("id_{}", o.id()), o)).collect();
    for i in 0..rng.random_range(0..=3) {
        let a = &tgt_objs[rng.random_range(0..tgt_objs.len())];
        let b = &tgt_objs[rng.random_range(0..tgt_objs.len())];
        tgt_edges.push(random_map(rng, &format!("t{i}"), a, b));
    }
    let mut edges = std::collections::BTreeMap::new();
    for s in &src_edges {
        let (a, b) = (obj(s.dom().id()), obj(s.cod().id()));
        let image = if s.is_identity() && rng.random_bool(0.8) {
            format!("id_{}", a.id())
        } else {
            let candidates: Vec<&FinMap> = tgt_edges.iter().filter(|t| *t.dom() == a && *t.cod() == b).collect();
            if !candidates.is_empty() && rng.random_bool(0.6) {
                candidates[rng.random_range(0..candidates.len())].name().to_owned()
            } else {
                let name = format!("n{}", tgt_edges.len());
                tgt_edges.push(random_map(rng, &name, &a, &b));
                name
            }
        };
        edges.insert(s.name().to_owned(), image);
    }
    FunctorCase {
        source: Diagram::new("Src", src_objs, src_edges).unwrap(),
        target: Diagram::new("Tgt", tgt_objs, tgt_edges).unwrap(),
        objects,
        edges,
    }
}

/// Identity edges go to identities and named composites to the composite
/// of the images, checked on raw tables.
pub fn standard_functor(case: &FunctorCase) -> bool {
    let image = |e: &FinMap| case.target.edge(&case.edges[e.name()]).unwrap().table().to_vec();
    let src = case.source.edges();
    for s in src {
        if s.dom() == s.cod() && is_identity(s.table()) && !is_identity(&image(s)) {
            return false;
        }
    }
    for a in src {
        for b in src.iter().filter(|b| b.dom() == a.cod()) {
            let ba = after(b.table(), a.table());
            for c in src.iter().filter(|c| c.dom() == a.dom() && c.cod() == b.cod() && c.table() == &ba[..]) {
                if after(&image(b), &image(a)) != image(c) {
                    return false;
                }
            }
        }
    }
    true
}
