//! Finite diagrams of sets and maps: cycle obstructors, commutativity and
//! semicommutativity, obstruction numbers, regular 3-cycles and functors
//! that preserve obstructors.
//!
//! Cycles are closed edge sequences without repeated edges, enumerated per
//! base object (in object order) by depth-first search over edges (in edge
//! order). Every verdict is therefore deterministic.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{mismatch, Error, Result};
use crate::finmap::{compose, compose_path, identity, tensor, FinMap, FiniteSet};

#[derive(Debug, Clone)]
pub struct Diagram {
    name: String,
    objects: Vec<Arc<FiniteSet>>,
    edges: Vec<FinMap>,
}

impl Diagram {
    pub fn new(name: impl Into<String>, objects: Vec<Arc<FiniteSet>>, edges: Vec<FinMap>) -> Result<Diagram> {
        let mut uniq: Vec<Arc<FiniteSet>> = Vec::with_capacity(objects.len());
        for o in objects {
            if !uniq.contains(&o) {
                uniq.push(o);
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if edges[..i].iter().any(|p| p.name() == e.name()) {
                return Err(Error::DuplicateEdge(e.name().to_owned()));
            }
            for end in [e.dom(), e.cod()] {
                if !uniq.contains(end) {
                    return Err(Error::UnknownObject(end.id().to_owned()));
                }
            }
        }
        Ok(Diagram {
            name: name.into(),
            objects: uniq,
            edges,
        })
    }

    /// Objects are the edge endpoints in order of first appearance.
    pub fn from_edges(name: impl Into<String>, edges: Vec<FinMap>) -> Result<Diagram> {
        let objects = edges
            .iter()
            .flat_map(|e| [e.dom().clone(), e.cod().clone()])
            .collect();
        Diagram::new(name, objects, edges)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[Arc<FiniteSet>] {
        &self.objects
    }

    pub fn edges(&self) -> &[FinMap] {
        &self.edges
    }

    pub fn edge(&self, name: &str) -> Option<&FinMap> {
        self.edges.iter().find(|e| e.name() == name)
    }

    pub fn object(&self, id: &str) -> Option<&Arc<FiniteSet>> {
        self.objects.iter().find(|o| o.id() == id)
    }

    fn object_index(&self, id: &str) -> usize {
        self.objects
            .iter()
            .position(|o| o.id() == id)
            .expect("endpoints validated at construction")
    }

    /// Returns a copy with one more edge appended.
    pub fn with_edge(&self, edge: FinMap) -> Result<Diagram> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Diagram::new(self.name.clone(), self.objects.clone(), edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    pub base: String,
    pub edges: Vec<String>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Composes the named edges, first edge applied first.
pub fn path_compose<S: AsRef<str>>(d: &Diagram, path: &[S]) -> Result<FinMap> {
    let maps = path
        .iter()
        .map(|n| d.edge(n.as_ref()).ok_or_else(|| Error::UnknownEdge(n.as_ref().to_owned())))
        .collect::<Result<Vec<_>>>()?;
    if maps.is_empty() {
        return Err(Error::EmptyPath);
    }
    if let Some(i) = (1..maps.len()).find(|&i| maps[i - 1].cod() != maps[i].dom()) {
        return Err(Error::BrokenPath(i));
    }
    compose_path(&maps)
}

fn trails_from(
    d: &Diagram,
    start: usize,
    max_len: usize,
    closed_only: bool,
    simple: bool,
) -> Vec<Vec<usize>> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        d: &Diagram,
        start: usize,
        at: usize,
        max_len: usize,
        closed_only: bool,
        simple: bool,
        path: &mut Vec<usize>,
        visited: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if path.len() == max_len {
            return;
        }
        for (i, e) in d.edges.iter().enumerate() {
            if d.object_index(e.dom().id()) != at || path.contains(&i) {
                continue;
            }
            let next = d.object_index(e.cod().id());
            if simple && visited[next] {
                continue;
            }
            path.push(i);
            if !closed_only || next == start {
                out.push(path.clone());
            }
            if simple {
                visited[next] = true;
            }
            go(d, start, next, max_len, closed_only, simple, path, visited, out);
            if simple {
                visited[next] = false;
            }
            path.pop();
        }
    }
    let mut out = Vec::new();
    let mut visited = vec![false; d.objects.len()];
    visited[start] = true;
    go(d, start, start, max_len, closed_only, simple, &mut Vec::new(), &mut visited, &mut out);
    out
}

fn to_cycle(d: &Diagram, base: usize, edges: &[usize]) -> Cycle {
    Cycle {
        base: d.objects[base].id().to_owned(),
        edges: edges.iter().map(|&i| d.edges[i].name().to_owned()).collect(),
    }
}

/// Every cycle of length `<= max_len`, grouped by base object.
pub fn enumerate_cycles(d: &Diagram, max_len: usize) -> Vec<Cycle> {
    (0..d.objects.len())
        .flat_map(|b| {
            trails_from(d, b, max_len, true, false)
                .into_iter()
                .map(move |p| (b, p))
        })
        .map(|(b, p)| to_cycle(d, b, &p))
        .collect()
}

pub fn cycles_at(d: &Diagram, base: &str, max_len: usize) -> Result<Vec<Cycle>> {
    let b = d
        .objects
        .iter()
        .position(|o| o.id() == base)
        .ok_or_else(|| Error::UnknownObject(base.to_owned()))?;
    Ok(trails_from(d, b, max_len, true, false)
        .into_iter()
        .map(|p| to_cycle(d, b, &p))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstructor {
    pub e: FinMap,
    pub is_identity: bool,
    pub is_idempotent: bool,
}

pub fn obstructor(d: &Diagram, c: &Cycle) -> Result<Obstructor> {
    let e = path_compose(d, &c.edges)?.with_name(format!("e_{}", c.base));
    if e.dom().id() != c.base || e.cod().id() != c.base {
        return Err(mismatch(&c.base, e.dom().id()));
    }
    Ok(Obstructor {
        is_identity: e.is_identity(),
        is_idempotent: e.is_idempotent(),
        e,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The obstructor of `cycle` moves `element`.
    Cycle { cycle: Cycle, element: String },
    /// Two paths with the same endpoints disagree at `element`.
    ParallelPaths {
        first: Vec<String>,
        second: Vec<String>,
        element: String,
    },
    /// `edge . e != edge` at `element` for the obstructor of `cycle`.
    Absorption {
        cycle: Cycle,
        edge: String,
        element: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramVerdict {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

fn first_difference(a: &FinMap, b: &FinMap) -> Option<usize> {
    a.table().iter().zip(b.table()).position(|(x, y)| x != y)
}

fn obstructors(d: &Diagram, max_len: usize) -> Vec<(Cycle, FinMap)> {
    enumerate_cycles(d, max_len)
        .into_iter()
        .map(|c| {
            let e = path_compose(d, &c.edges).expect("enumerated cycles are well typed");
            (c, e)
        })
        .collect()
}

/// Every cycle composes to the identity and parallel simple paths agree.
pub fn is_commutative(d: &Diagram, max_len: usize) -> DiagramVerdict {
    let mut violations = Vec::new();
    for (c, e) in obstructors(d, max_len) {
        if let Some(x) = first_difference(&e, &identity(e.dom())) {
            violations.push(Violation::Cycle {
                element: e.dom().label(x).to_owned(),
                cycle: c,
            });
            break;
        }
    }
    type Paths = Vec<(Vec<usize>, FinMap)>;
    let mut by_ends: BTreeMap<(usize, usize), Paths> = BTreeMap::new();
    'paths: for s in 0..d.objects.len() {
        for p in trails_from(d, s, max_len, false, true) {
            let t = d.object_index(d.edges[*p.last().expect("nonempty")].cod().id());
            let maps: Vec<&FinMap> = p.iter().map(|&i| &d.edges[i]).collect();
            let m = compose_path(&maps).expect("trails are well typed");
            let group = by_ends.entry((s, t)).or_default();
            if let Some((first, fm)) = group.first() {
                if let Some(x) = first_difference(fm, &m) {
                    violations.push(Violation::ParallelPaths {
                        first: first.iter().map(|&i| d.edges[i].name().to_owned()).collect(),
                        second: p.iter().map(|&i| d.edges[i].name().to_owned()).collect(),
                        element: m.dom().label(x).to_owned(),
                    });
                    break 'paths;
                }
            }
            group.push((p, m));
        }
    }
    DiagramVerdict {
        holds: violations.is_empty(),
        violations,
    }
}

/// For every cycle with obstructor `e` at `X` and every edge `f` out of
/// `X`: `f.e = f`.
pub fn is_semicommutative(d: &Diagram, max_len: usize) -> DiagramVerdict {
    let mut violations = Vec::new();
    for (c, e) in obstructors(d, max_len) {
        for f in d.edges.iter().filter(|f| f.dom() == e.dom()) {
            let fe = compose(f, &e).expect("typed");
            if let Some(x) = first_difference(&fe, f) {
                violations.push(Violation::Absorption {
                    cycle: c.clone(),
                    edge: f.name().to_owned(),
                    element: e.dom().label(x).to_owned(),
                });
            }
        }
    }
    DiagramVerdict {
        holds: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionNumber {
    /// `None` when every cycle up to `max_n` at the object is the identity.
    pub n_obstr: Option<usize>,
    pub witness: Option<Cycle>,
}

pub fn obstruction_number(d: &Diagram, object: &str, max_n: usize) -> Result<ObstructionNumber> {
    let cycles = cycles_at(d, object, max_n)?;
    let best = cycles
        .into_iter()
        .filter(|c| !path_compose(d, &c.edges).expect("typed").is_identity())
        .min_by_key(|c| c.len());
    Ok(ObstructionNumber {
        n_obstr: best.as_ref().map(Cycle::len),
        witness: best,
    })
}

/// A triple `f: X -> Y`, `g: Y -> Z`, `h: Z -> X` with `f.h.g.f = f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularThreeCycle {
    f: FinMap,
    g: FinMap,
    h: FinMap,
    obstructor: FinMap,
}

impl RegularThreeCycle {
    pub fn new(f: FinMap, g: FinMap, h: FinMap) -> Result<RegularThreeCycle> {
        let e = compose_path(&[&f, &g, &h])?;
        if e.cod() != f.dom() {
            return Err(mismatch(f.dom().id(), e.cod().id()));
        }
        if compose(&f, &e)? != f {
            return Err(Error::NotRegularThreeCycle);
        }
        Ok(RegularThreeCycle {
            obstructor: e.with_name(format!("e_{}", f.dom().id())),
            f,
            g,
            h,
        })
    }

    pub fn base(&self) -> &Arc<FiniteSet> {
        self.f.dom()
    }

    /// The first regular dual `Y`.
    pub fn first_dual(&self) -> &Arc<FiniteSet> {
        self.f.cod()
    }

    /// The second regular dual `Z`.
    pub fn second_dual(&self) -> &Arc<FiniteSet> {
        self.g.cod()
    }

    pub fn maps(&self) -> (&FinMap, &FinMap, &FinMap) {
        (&self.f, &self.g, &self.h)
    }

    /// `h.g.f`.
    pub fn obstructor(&self) -> &FinMap {
        &self.obstructor
    }
}

/// Regular 3-cycles of the diagram, one per cyclic edge triple: the
/// rotation whose base comes first in object order (ties broken by edge
/// order) represents the triple and is reported iff it satisfies
/// `f.h.g.f = f`.
pub fn find_regular_3cycles(d: &Diagram) -> Vec<RegularThreeCycle> {
    let key = |p: &[usize]| -> (usize, Vec<usize>) { (d.object_index(d.edges[p[0]].dom().id()), p.to_vec()) };
    let mut out = Vec::new();
    for b in 0..d.objects.len() {
        for p in trails_from(d, b, 3, true, false) {
            if p.len() != 3 {
                continue;
            }
            let rotations = [[p[1], p[2], p[0]], [p[2], p[0], p[1]]];
            if rotations.iter().any(|r| key(r) < key(&p)) {
                continue;
            }
            let [f, g, h] = [p[0], p[1], p[2]].map(|i| d.edges[i].clone());
            if let Ok(c) = RegularThreeCycle::new(f, g, h) {
                out.push(c);
            }
        }
    }
    out
}

/// Object triples carrying more than one distinct obstructor.
pub fn non_unique_obstructors(cycles: &[RegularThreeCycle]) -> Vec<(String, String, String)> {
    let mut seen: BTreeMap<(String, String, String), Vec<&FinMap>> = BTreeMap::new();
    for c in cycles {
        let key = (
            c.base().id().to_owned(),
            c.first_dual().id().to_owned(),
            c.second_dual().id().to_owned(),
        );
        let es = seen.entry(key).or_default();
        if !es.contains(&&c.obstructor) {
            es.push(&c.obstructor);
        }
    }
    seen.into_iter()
        .filter(|(_, es)| es.len() > 1)
        .map(|(k, _)| k)
        .collect()
}

/// `f.e1 = e2.f` for `f` from the base of `c1` to the base of `c2`.
pub fn is_cycle_morphism(f: &FinMap, c1: &RegularThreeCycle, c2: &RegularThreeCycle) -> Result<bool> {
    if f.dom() != c1.base() {
        return Err(mismatch(c1.base().id(), f.dom().id()));
    }
    if f.cod() != c2.base() {
        return Err(mismatch(c2.base().id(), f.cod().id()));
    }
    Ok(compose(f, &c1.obstructor)? == compose(&c2.obstructor, f)?)
}

/// The factorwise tensor product of two regular 3-cycles.
pub fn product_3cycle(c1: &RegularThreeCycle, c2: &RegularThreeCycle) -> Result<RegularThreeCycle> {
    RegularThreeCycle::new(tensor(&c1.f, &c2.f), tensor(&c1.g, &c2.g), tensor(&c1.h, &c2.h))
}

/// A functor between finite diagrams, given on objects and generating edges.
#[derive(Debug, Clone)]
pub struct FunctorData {
    source: Diagram,
    target: Diagram,
    object_map: BTreeMap<String, String>,
    edge_map: BTreeMap<String, String>,
}

impl FunctorData {
    pub fn new(
        source: Diagram,
        target: Diagram,
        object_map: BTreeMap<String, String>,
        edge_map: BTreeMap<String, String>,
    ) -> Result<FunctorData> {
        for o in source.objects() {
            let image = object_map
                .get(o.id())
                .ok_or_else(|| Error::IncompatibleEdgeMap(format!("object `{}` is not mapped", o.id())))?;
            if target.object(image).is_none() {
                return Err(Error::IncompatibleEdgeMap(format!(
                    "object `{}` maps to `{image}`, which is not in the target",
                    o.id()
                )));
            }
        }
        for e in source.edges() {
            let image = edge_map
                .get(e.name())
                .ok_or_else(|| Error::IncompatibleEdgeMap(format!("edge `{}` is not mapped", e.name())))?;
            let t = target.edge(image).ok_or_else(|| {
                Error::IncompatibleEdgeMap(format!("edge `{}` maps to unknown `{image}`", e.name()))
            })?;
            if object_map[e.dom().id()] != t.dom().id() || object_map[e.cod().id()] != t.cod().id() {
                return Err(Error::IncompatibleEdgeMap(format!(
                    "`{}: {} -> {}` maps to `{}: {} -> {}`",
                    e.name(),
                    e.dom().id(),
                    e.cod().id(),
                    t.name(),
                    t.dom().id(),
                    t.cod().id()
                )));
            }
        }
        Ok(FunctorData {
            source,
            target,
            object_map,
            edge_map,
        })
    }

    pub fn source(&self) -> &Diagram {
        &self.source
    }

    pub fn target(&self) -> &Diagram {
        &self.target
    }

    fn edge_image(&self, e: &str) -> &FinMap {
        self.target
            .edge(&self.edge_map[e])
            .expect("validated at construction")
    }

    fn object_image(&self, o: &str) -> &Arc<FiniteSet> {
        self.target
            .object(&self.object_map[o])
            .expect("validated at construction")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    /// `F(second).F(first) != F(composite)` although `second.first = composite`.
    Composition {
        first: String,
        second: String,
        composite: String,
        element: String,
    },
    /// The image of the source obstructor differs from the obstructor of the
    /// image cycle.
    Obstructor {
        cycle: Cycle,
        /// The source edge realising the obstructor, or `None` when the
        /// obstructor is an identity.
        via: Option<String>,
        element: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorVerdict {
    pub composition_preserved: bool,
    pub e_preserved: bool,
    pub violations: Vec<FunctorViolation>,
    /// Source obstructors compared against their image.
    pub checked: usize,
    /// Source obstructors that are neither an identity nor a named edge, so
    /// the functor assigns them no image.
    pub undetermined: usize,
}

/// Checks `F(e_X) = e_F(X)` for the obstructors of every source cycle of
/// length `<= n`, plus preservation of named composites.
///
/// The functor acts on generating edges only, so the image of a source
/// obstructor is known when it is the identity (image: the identity of the
/// image object) or equals a named source endo-edge `s` (image: `F(s)`).
/// Level 1 obstructors are identities; with explicit identity edges the
/// `n = 1` check is exactly identity preservation.
pub fn check_regular_functor(fd: &FunctorData, n: usize) -> Result<FunctorVerdict> {
    if n == 0 {
        return Err(Error::InvalidArgument("functor level must be at least 1".into()));
    }
    let src = &fd.source;
    let mut violations = Vec::new();

    let mut composition_preserved = true;
    for a in src.edges() {
        for b in src.edges().iter().filter(|b| b.dom() == a.cod()) {
            let ba = compose(b, a)?;
            for c in src.edges().iter().filter(|c| **c == ba) {
                let image = compose(fd.edge_image(b.name()), fd.edge_image(a.name()))?;
                let fc = fd.edge_image(c.name());
                if let Some(x) = first_difference(&image, fc) {
                    composition_preserved = false;
                    violations.push(FunctorViolation::Composition {
                        first: a.name().to_owned(),
                        second: b.name().to_owned(),
                        composite: c.name().to_owned(),
                        element: image.dom().label(x).to_owned(),
                    });
                }
            }
        }
    }

    let mut e_preserved = true;
    let mut checked = 0;
    let mut undetermined = 0;
    let mut compare = |cycle: &Cycle, via: Option<&str>, expected: &FinMap, actual: &FinMap, violations: &mut Vec<FunctorViolation>| {
        checked += 1;
        if let Some(x) = first_difference(expected, actual) {
            e_preserved = false;
            violations.push(FunctorViolation::Obstructor {
                cycle: cycle.clone(),
                via: via.map(str::to_owned),
                element: expected.dom().label(x).to_owned(),
            });
        }
    };

    // Level 1: e = id_X, realised by explicit identity edges.
    for s in src.edges().iter().filter(|s| s.is_identity()) {
        let cycle = Cycle {
            base: s.dom().id().to_owned(),
            edges: vec![s.name().to_owned()],
        };
        let target_id = identity(fd.object_image(s.dom().id()));
        compare(&cycle, Some(s.name()), &target_id, fd.edge_image(s.name()), &mut violations);
    }

    for cycle in enumerate_cycles(src, n).into_iter().filter(|c| c.len() >= 2) {
        let e_src = path_compose(src, &cycle.edges)?;
        let images: Vec<&FinMap> = cycle.edges.iter().map(|e| fd.edge_image(e)).collect();
        let e_tgt = compose_path(&images)?;
        let mut determined = false;
        if e_src.is_identity() {
            determined = true;
            let target_id = identity(fd.object_image(&cycle.base));
            compare(&cycle, None, &target_id, &e_tgt, &mut violations);
        }
        for s in src.edges().iter().filter(|s| **s == e_src) {
            determined = true;
            compare(&cycle, Some(s.name()), fd.edge_image(s.name()), &e_tgt, &mut violations);
        }
        if !determined {
            undetermined += 1;
        }
    }

    Ok(FunctorVerdict {
        composition_preserved,
        e_preserved,
        violations,
        checked,
        undetermined,
    })
}
