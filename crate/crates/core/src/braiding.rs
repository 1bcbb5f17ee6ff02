//! Braidings `B: X*Y -> Y*X`, their symmetry and regularity, prebraidings
//! weakened by idempotent obstructors, and the set-theoretic Yang-Baxter
//! equation with an exhaustive pruned solver.
//!
//! Prebraidings act on triple products: `L = e (x) B` braids the last two
//! slots and `R = B (x) e` the first two. The equation compares
//! `R.L.R` with `L.R.L` (rightmost applied first); the classical equation is
//! the case `e = Id`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{mismatch, Error, Result};
use crate::finmap::{compose, compose_path, identity, tensor, FinMap, FiniteSet, ProductSet};
use crate::space::Tables;

/// Largest carrier the solver accepts unless told otherwise.
pub const MAX_SOLVER_CARRIER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Braiding {
    left: Arc<FiniteSet>,
    right: Arc<FiniteSet>,
    map: FinMap,
}

impl Braiding {
    /// `table` is indexed row-major over `left * right` and takes values in
    /// `right * left`.
    pub fn new(
        name: impl Into<String>,
        left: Arc<FiniteSet>,
        right: Arc<FiniteSet>,
        table: Vec<usize>,
    ) -> Result<Braiding> {
        let dom = ProductSet::new(&[left.clone(), right.clone()]).carrier().clone();
        let cod = ProductSet::new(&[right.clone(), left.clone()]).carrier().clone();
        let map = FinMap::new(name, dom, cod, table)?;
        Ok(Braiding { left, right, map })
    }

    pub fn from_map(left: Arc<FiniteSet>, right: Arc<FiniteSet>, map: FinMap) -> Result<Braiding> {
        let dom = ProductSet::new(&[left.clone(), right.clone()]).carrier().clone();
        let cod = ProductSet::new(&[right.clone(), left.clone()]).carrier().clone();
        if *map.dom() != dom {
            return Err(mismatch(dom.id(), map.dom().id()));
        }
        if *map.cod() != cod {
            return Err(mismatch(cod.id(), map.cod().id()));
        }
        Ok(Braiding { left, right, map })
    }

    /// The flip `(x, y) -> (y, x)`.
    pub fn swap(left: Arc<FiniteSet>, right: Arc<FiniteSet>) -> Braiding {
        let (m, n) = (left.cardinality(), right.cardinality());
        let table = (0..m * n).map(|i| (i % n) * m + i / n).collect();
        Braiding::new("swap", left, right, table).expect("flip is well typed")
    }

    pub fn name(&self) -> &str {
        self.map.name()
    }

    pub fn left(&self) -> &Arc<FiniteSet> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteSet> {
        &self.right
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    fn check_reverse_of(&self, other: &Braiding) -> Result<()> {
        if self.left != other.right {
            return Err(mismatch(other.right.id(), self.left.id()));
        }
        if self.right != other.left {
            return Err(mismatch(other.left.id(), self.right.id()));
        }
        Ok(())
    }
}

/// `b_rev . b = Id`.
pub fn check_symmetry(b: &Braiding, b_rev: &Braiding) -> Result<bool> {
    b_rev.check_reverse_of(b)?;
    Ok(compose(&b_rev.map, &b.map)?.is_identity())
}

/// `b . b_star . b = b`.
pub fn check_regular_braiding(b: &Braiding, b_star: &Braiding) -> Result<bool> {
    b_star.check_reverse_of(b)?;
    Ok(compose_path(&[&b.map, &b_star.map, &b.map])? == b.map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `e (x) B`: braid the last two slots.
    L,
    /// `B (x) e`: braid the first two slots.
    R,
}

fn check_obstructor(e: &FinMap) -> Result<()> {
    if !e.is_endo() {
        return Err(mismatch(e.dom().id(), e.cod().id()));
    }
    if !e.is_idempotent() {
        return Err(Error::NotIdempotent(e.name().to_owned()));
    }
    Ok(())
}

/// Extends a braiding to a triple product, with `e` on the passive slot.
pub fn prebraid(b: &Braiding, side: Side, e: &FinMap) -> Result<FinMap> {
    check_obstructor(e)?;
    Ok(match side {
        Side::L => tensor(e, &b.map),
        Side::R => tensor(&b.map, e),
    })
}

/// Idempotent obstructors per object; objects without an entry use the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructorAssignment {
    level: usize,
    maps: BTreeMap<String, FinMap>,
}

impl ObstructorAssignment {
    pub fn identity() -> ObstructorAssignment {
        ObstructorAssignment {
            level: 1,
            maps: BTreeMap::new(),
        }
    }

    pub fn new(level: usize, maps: impl IntoIterator<Item = FinMap>) -> Result<ObstructorAssignment> {
        let mut out = BTreeMap::new();
        for e in maps {
            check_obstructor(&e)?;
            if level == 1 && !e.is_identity() {
                return Err(Error::ClassicalRequiresIdentity);
            }
            out.insert(e.dom().id().to_owned(), e);
        }
        Ok(ObstructorAssignment { level, maps: out })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn at(&self, object: &Arc<FiniteSet>) -> FinMap {
        self.maps
            .get(object.id())
            .cloned()
            .unwrap_or_else(|| identity(object))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositeBraiding {
    /// `B_{X*Y,Z} = R_{X,Z,Y} . L_{X,Y,Z}` from `first = B_{Y,Z}` and
    /// `second = B_{X,Z}`.
    OverProduct,
    /// `B_{Z,X*Y} = L_{X,Z,Y} . R_{Z,X,Y}` from `first = B_{Z,X}` and
    /// `second = B_{Z,Y}`.
    UnderProduct,
}

/// Braids one object past a product of two in two prebraiding steps;
/// `first` acts first.
pub fn composite_prebraid(
    first: &Braiding,
    second: &Braiding,
    e: &ObstructorAssignment,
    which: CompositeBraiding,
) -> Result<FinMap> {
    let (step1, step2) = match which {
        CompositeBraiding::OverProduct => (
            prebraid(first, Side::L, &e.at(&second.left))?,
            prebraid(second, Side::R, &e.at(&first.left))?,
        ),
        CompositeBraiding::UnderProduct => (
            prebraid(first, Side::R, &e.at(&second.right))?,
            prebraid(second, Side::L, &e.at(&first.right))?,
        ),
    };
    compose(&step2, &step1)
}

/// `p . p_star . p = p`.
pub fn check_prebraid_regularity(p: &FinMap, p_star: &FinMap) -> Result<bool> {
    Ok(compose_path(&[p, p_star, p])? == *p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum YbeMode {
    Classical,
    Regular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YbeCheck {
    pub holds: bool,
    /// Least triple `(x, y, z)` where the two sides differ.
    pub witness: Option<[usize; 3]>,
}

const UNSET: usize = usize::MAX;

/// Both sides at `(x, y, z)`, or `None` while a needed entry of the
/// partial table `b` is unset.
#[inline]
fn ybe_at(b: &[usize], e: &[usize], n: usize, x: usize, y: usize, z: usize) -> Option<(usize, usize)> {
    let get = |i: usize| -> Option<usize> {
        let v = b[i];
        (v != UNSET).then_some(v)
    };
    // R . L . R
    let v = get(x * n + y)?;
    let (p, q) = (v / n, v % n);
    let w = get(q * n + e[z])?;
    let (s, t) = (w / n, w % n);
    let u = get(e[p] * n + s)?;
    let lhs = u * n + e[t];
    // L . R . L
    let v = get(y * n + z)?;
    let (c, d) = (v / n, v % n);
    let w = get(e[x] * n + c)?;
    let (f1, f2) = (w / n, w % n);
    let u = get(f2 * n + e[d])?;
    let rhs = e[f1] * n * n + u;
    Some((lhs, rhs))
}

fn first_failure(b: &[usize], e: &[usize], n: usize) -> Option<[usize; 3]> {
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if let Some((l, r)) = ybe_at(b, e, n, x, y, z) {
                    if l != r {
                        return Some([x, y, z]);
                    }
                }
            }
        }
    }
    None
}

fn check_ybe_inputs(b: &Braiding, e: &FinMap, mode: YbeMode) -> Result<()> {
    if b.left != b.right {
        return Err(mismatch(b.left.id(), b.right.id()));
    }
    if *e.dom() != b.left {
        return Err(mismatch(b.left.id(), e.dom().id()));
    }
    check_obstructor(e)?;
    if mode == YbeMode::Classical && !e.is_identity() {
        return Err(Error::ClassicalRequiresIdentity);
    }
    Ok(())
}

/// Evaluates `R.L.R = L.R.L` over every triple of the single carrier.
pub fn check_ybe(b: &Braiding, e: &FinMap, mode: YbeMode) -> Result<YbeCheck> {
    check_ybe_inputs(b, e, mode)?;
    let witness = first_failure(b.map.table(), e.table(), b.left.cardinality());
    Ok(YbeCheck {
        holds: witness.is_none(),
        witness,
    })
}

/// Both sides of the equation as maps on `X*X*X`, built from the composite
/// prebraidings: `(R.L).R` and `(L.R).L`.
pub fn ybe_sides(b: &Braiding, e: &FinMap, mode: YbeMode) -> Result<(FinMap, FinMap)> {
    check_ybe_inputs(b, e, mode)?;
    let level = if e.is_identity() { 1 } else { 2 };
    let a = ObstructorAssignment::new(level, [e.clone()])?;
    let over = composite_prebraid(b, b, &a, CompositeBraiding::OverProduct)?;
    let under = composite_prebraid(b, b, &a, CompositeBraiding::UnderProduct)?;
    let lhs = compose(&over, &prebraid(b, Side::R, e)?)?;
    let rhs = compose(&under, &prebraid(b, Side::L, e)?)?;
    Ok((lhs, rhs))
}

/// Every idempotent endomap of `x`, in lexicographic table order.
pub fn enumerate_idempotents(x: &Arc<FiniteSet>) -> Vec<FinMap> {
    let n = x.cardinality();
    Tables::new(n, n)
        .filter(|t| t.iter().all(|&v| t[v] == v))
        .map(|t| FinMap::new("e", x.clone(), x.clone(), t).expect("tables are in range"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructorChoice {
    Identity,
    All,
    Table(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YbeProblem {
    pub size: usize,
    pub mode: YbeMode,
    pub obstructor: ObstructorChoice,
    pub require_bijective: bool,
    pub require_symmetric: bool,
    /// Keep no more than this many solutions; the count stays exact.
    pub limit: Option<usize>,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    pub max_carrier: usize,
}

impl YbeProblem {
    pub fn new(size: usize, mode: YbeMode) -> YbeProblem {
        YbeProblem {
            size,
            mode,
            obstructor: ObstructorChoice::Identity,
            require_bijective: false,
            require_symmetric: false,
            limit: None,
            jobs: 0,
            max_carrier: MAX_SOLVER_CARRIER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct YbeSolution {
    pub e: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YbeSolutions {
    pub carrier: Arc<FiniteSet>,
    pub solutions: Vec<YbeSolution>,
    pub count: u64,
    pub truncated: bool,
}

struct Search<'a> {
    e: &'a [usize],
    n: usize,
    bijective: bool,
    symmetric: bool,
    keep: usize,
}

impl Search<'_> {
    fn consistent(&self, b: &[usize], k: usize) -> bool {
        if self.symmetric {
            for i in 0..=k {
                let v = b[i];
                if v <= k && b[v] != i {
                    return false;
                }
            }
        }
        first_failure(b, self.e, self.n).is_none()
    }

    fn dfs(&self, b: &mut Vec<usize>, used: &mut [bool], k: usize, count: &mut u64, out: &mut Vec<Vec<usize>>) {
        if k == b.len() {
            *count += 1;
            if out.len() < self.keep {
                out.push(b.clone());
            }
            return;
        }
        for v in 0..b.len() {
            if self.bijective && used[v] {
                continue;
            }
            b[k] = v;
            if self.consistent(b, k) {
                used[v] = true;
                self.dfs(b, used, k + 1, count, out);
                used[v] = false;
            }
        }
        b[k] = UNSET;
    }
}

/// Exhaustive search for braidings on `X*X` satisfying the equation.
///
/// The table of `B` is filled in domain order; a partial table is cut as
/// soon as some triple has both sides determined and unequal. Top-level
/// branches (obstructor, first table entry) run in parallel and are merged
/// in order, so results do not depend on `jobs`.
pub fn solve_ybe(p: &YbeProblem) -> Result<YbeSolutions> {
    if p.size > p.max_carrier {
        return Err(Error::CarrierTooLarge {
            size: p.size,
            max: p.max_carrier,
        });
    }
    let n = p.size;
    let carrier = FiniteSet::range("X", n);
    let obstructors: Vec<Vec<usize>> = match (&p.obstructor, p.mode) {
        (ObstructorChoice::Identity, _) => vec![(0..n).collect()],
        (ObstructorChoice::All, YbeMode::Regular) => enumerate_idempotents(&carrier)
            .into_iter()
            .map(|e| e.table().to_vec())
            .collect(),
        (ObstructorChoice::Table(t), mode) => {
            let e = FinMap::new("e", carrier.clone(), carrier.clone(), t.clone())?;
            check_obstructor(&e)?;
            if mode == YbeMode::Classical && !e.is_identity() {
                return Err(Error::ClassicalRequiresIdentity);
            }
            vec![t.clone()]
        }
        (ObstructorChoice::All, YbeMode::Classical) => return Err(Error::ClassicalRequiresIdentity),
    };
    let keep = p.limit.unwrap_or(usize::MAX);
    let len = n * n;
    let branches: Vec<(usize, Option<usize>)> = (0..obstructors.len())
        .flat_map(|i| {
            if len == 0 {
                vec![(i, None)]
            } else {
                (0..len).map(|v| (i, Some(v))).collect()
            }
        })
        .collect();

    let run = || -> Vec<(u64, Vec<Vec<usize>>)> {
        branches
            .par_iter()
            .map(|&(ei, first)| {
                let s = Search {
                    e: &obstructors[ei],
                    n,
                    bijective: p.require_bijective || p.require_symmetric,
                    symmetric: p.require_symmetric,
                    keep,
                };
                let mut b = vec![UNSET; len];
                let mut used = vec![false; len];
                let mut count = 0;
                let mut out = Vec::new();
                match first {
                    None => s.dfs(&mut b, &mut used, 0, &mut count, &mut out),
                    Some(v) => {
                        b[0] = v;
                        if s.consistent(&b, 0) {
                            used[v] = true;
                            s.dfs(&mut b, &mut used, 1, &mut count, &mut out);
                        }
                    }
                }
                (count, out)
            })
            .collect()
    };
    let per_branch = if p.jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(p.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run)
    };

    let mut count = 0;
    let mut solutions = Vec::new();
    for ((ei, _), (c, tables)) in branches.iter().zip(per_branch) {
        count += c;
        for b in tables {
            if solutions.len() < keep {
                solutions.push(YbeSolution {
                    e: obstructors[*ei].clone(),
                    b,
                });
            }
        }
    }
    Ok(YbeSolutions {
        carrier,
        truncated: (solutions.len() as u64) < count,
        solutions,
        count,
    })
}
