//! Towers of higher star maps and their closure equations.
//!
//! A chain over `f: X -> Y` carries stars `f1, f2, ..., fn` with odd stars
//! `Y -> X` and even stars `X -> Y`. Odd order `n` closes as
//! `f.f1.f2...fn.f = f`; with `e = f1...fn.f` this is `f.e = f`. The even
//! closure as usually written (`f.f1...fn.f1 = f1`) does not typecheck: its
//! left side is an endomap of `Y` while `f1: Y -> X`. The leading `f` is
//! dropped, giving `f1.f2...fn.f1 = f1`, which at order 2 is reflexive
//! regularity of `f1` with witness `f2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{mismatch, Error, Result};
use crate::finmap::{compose, compose_path, identity, FinMap};
use crate::inverses::{is_inverse, InverseKind};
use crate::space::{space_size, table_at, Tables};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarChain {
    base: FinMap,
    stars: Vec<FinMap>,
}

impl StarChain {
    pub fn base(&self) -> &FinMap {
        &self.base
    }

    pub fn stars(&self) -> &[FinMap] {
        &self.stars
    }

    pub fn order(&self) -> usize {
        self.stars.len()
    }

    /// `f^(k)`, 1-based.
    pub fn star(&self, k: usize) -> &FinMap {
        &self.stars[k - 1]
    }
}

fn star_typed(base: &FinMap, k: usize, star: &FinMap) -> bool {
    if k % 2 == 1 {
        star.dom() == base.cod() && star.cod() == base.dom()
    } else {
        star.dom() == base.dom() && star.cod() == base.cod()
    }
}

pub fn make_chain(base: FinMap, stars: Vec<FinMap>) -> Result<StarChain> {
    if stars.is_empty() {
        return Err(Error::EmptyChain);
    }
    if let Some(k) = (1..=stars.len()).find(|&k| !star_typed(&base, k, &stars[k - 1])) {
        return Err(Error::AlternationViolation(k));
    }
    Ok(StarChain { base, stars })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainFailure {
    /// `"nreg2"` for the odd closure, `"nreg1"` for the corrected even one.
    pub equation: &'static str,
    /// Least element index at which the two sides differ (in `X` for odd
    /// order, in `Y` for even order).
    pub element: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainVerdict {
    pub order: usize,
    pub odd_closure: Option<bool>,
    pub even_closure: Option<bool>,
    /// `f.e = f` for the reported obstructor.
    pub ef_form: bool,
    /// `f1...fn.f` for odd order, `f1...fn` for even order; an endomap of `X`.
    pub obstructor: FinMap,
    pub obstructor_idempotent: bool,
    pub failures: Vec<ChainFailure>,
}

impl ChainVerdict {
    pub fn passes(&self) -> bool {
        self.odd_closure.unwrap_or(true) && self.even_closure.unwrap_or(true)
    }
}

fn first_difference(a: &[usize], b: &[usize]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

// Stars in application order: fn first, f1 last.
fn stars_applied(c: &StarChain) -> Vec<&FinMap> {
    c.stars.iter().rev().collect()
}

pub fn check_chain(c: &StarChain) -> ChainVerdict {
    let f = &c.base;
    let n = c.order();
    let mut failures = Vec::new();
    if n % 2 == 1 {
        let mut path = vec![f];
        path.extend(stars_applied(c));
        let e = compose_path(&path).expect("chain typed at construction");
        let fe = compose(f, &e).expect("typed");
        let diff = first_difference(fe.table(), f.table());
        if let Some(x) = diff {
            failures.push(ChainFailure {
                equation: "nreg2",
                element: x,
            });
        }
        ChainVerdict {
            order: n,
            odd_closure: Some(diff.is_none()),
            even_closure: None,
            ef_form: diff.is_none(),
            obstructor_idempotent: e.is_idempotent(),
            obstructor: e.with_name(format!("e_{}", f.dom().id())),
            failures,
        }
    } else {
        let p = compose_path(&stars_applied(c)).expect("chain typed at construction");
        let f1 = c.star(1);
        let pf1 = compose(&p, f1).expect("typed");
        let diff = first_difference(pf1.table(), f1.table());
        if let Some(y) = diff {
            failures.push(ChainFailure {
                equation: "nreg1",
                element: y,
            });
        }
        let ef_form = compose(f, &p).expect("typed") == *f;
        ChainVerdict {
            order: n,
            odd_closure: None,
            even_closure: Some(diff.is_none()),
            ef_form,
            obstructor_idempotent: p.is_idempotent(),
            obstructor: p.with_name(format!("e_{}", f.dom().id())),
            failures,
        }
    }
}

/// The chain `f, [f*, f, f*, ...]` of order `n`.
pub fn extend_periodic(f: &FinMap, fstar: &FinMap, n: usize) -> Result<StarChain> {
    if !is_inverse(f, fstar, InverseKind::Generalized)? {
        return Err(Error::NotAGeneralizedInverse(fstar.name().to_owned()));
    }
    let stars = (1..=n)
        .map(|k| if k % 2 == 1 { fstar.clone() } else { f.clone() })
        .collect();
    make_chain(f.clone(), stars)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSearch {
    pub chains: Vec<StarChain>,
    /// The limit was reached, so more chains may exist.
    pub truncated: bool,
}

struct ChainProblem<'a> {
    f: &'a [usize],
    n: usize,
    x: usize,
    y: usize,
    // Image of `f` (odd order) or of `f1` (even order) that the prefix
    // composite must keep covering.
    must_cover: Vec<bool>,
}

impl ChainProblem<'_> {
    fn level_shape(&self, k: usize) -> (usize, usize) {
        // (table length, value range)
        if k % 2 == 1 {
            (self.y, self.x)
        } else {
            (self.x, self.y)
        }
    }

    // Composite prefix `f1...fk` extended by `next = f(k+1)`; values index
    // into X always, domain alternates.
    fn extend_prefix(prefix: &[usize], next: &[usize]) -> Vec<usize> {
        next.iter().map(|&v| prefix[v]).collect()
    }

    fn covers(&self, prefix: &[usize]) -> bool {
        let mut seen = vec![false; self.must_cover.len()];
        match self.n % 2 {
            1 => {
                for &v in prefix {
                    seen[self.f[v]] = true;
                }
            }
            _ => {
                for &v in prefix {
                    seen[v] = true;
                }
            }
        }
        self.must_cover.iter().zip(&seen).all(|(&need, &have)| !need || have)
    }

    fn complete(&self, prefix: &[usize], f1: &[usize]) -> bool {
        if self.n % 2 == 1 {
            // prefix = f1...fn : Y -> X; need f.prefix.f = f.
            self.f.iter().all(|&y| self.f[prefix[y]] == y)
        } else {
            // prefix = f1...fn : X -> X; need prefix.f1 = f1.
            f1.iter().all(|&x| prefix[x] == x)
        }
    }

    fn dfs(
        &self,
        level: usize,
        prefix: &[usize],
        stack: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
        cap: usize,
    ) -> bool {
        if out.len() >= cap {
            return false;
        }
        let (len, base) = self.level_shape(level);
        for t in Tables::new(len, base) {
            let next_prefix = Self::extend_prefix(prefix, &t);
            stack.push(t);
            let keep_going = if level == self.n {
                if self.complete(&next_prefix, &stack[0]) {
                    out.push(stack.clone());
                }
                out.len() < cap
            } else if self.covers(&next_prefix) {
                self.dfs(level + 1, &next_prefix, stack, out, cap)
            } else {
                true
            };
            stack.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Depth-first enumeration of every order-`n` tower over `f` that passes
/// [`check_chain`], in lexicographic order of the star tables.
///
/// A partial tower is abandoned once its prefix composite no longer covers
/// the image the closure needs: every later composite factors through the
/// prefix, so the image can only shrink.
pub fn find_chains(f: &FinMap, n: usize, limit: Option<usize>, bound: u128) -> Result<ChainSearch> {
    if n == 0 {
        return Err(Error::EmptyChain);
    }
    let x = f.dom().cardinality();
    let y = f.cod().cardinality();
    let per_odd = space_size(y, x);
    let per_even = space_size(x, y);
    let space = (1..=n).fold(1u128, |acc, k| {
        acc.saturating_mul(if k % 2 == 1 { per_odd } else { per_even })
    });
    if space > bound && limit.is_none() {
        return Err(Error::SearchSpaceTooLarge { size: space, bound });
    }
    let cap = limit.unwrap_or(usize::MAX);
    if cap == 0 {
        return Ok(ChainSearch {
            chains: Vec::new(),
            truncated: true,
        });
    }
    // Each top-level branch is explored independently with the same cap and
    // the results concatenated in branch order, so the merged prefix equals
    // the sequential enumeration.
    let per_branch: Vec<Vec<Vec<Vec<usize>>>> = (0..per_odd)
        .into_par_iter()
        .map(|rank| {
            let f1 = table_at(rank, y, x);
            let covered_by: &[usize] = if n % 2 == 1 { f.table() } else { &f1 };
            let mut must_cover = vec![false; if n % 2 == 1 { y } else { x }];
            for &v in covered_by {
                must_cover[v] = true;
            }
            let p = ChainProblem {
                f: f.table(),
                n,
                x,
                y,
                must_cover,
            };
            let mut out = Vec::new();
            let mut stack = vec![f1.clone()];
            if n == 1 {
                if p.complete(&f1, &f1) {
                    out.push(stack);
                }
            } else if p.covers(&f1) {
                p.dfs(2, &f1, &mut stack, &mut out, cap);
            }
            out
        })
        .collect();
    let mut tables: Vec<Vec<Vec<usize>>> = per_branch.into_iter().flatten().collect();
    let truncated = limit.is_some_and(|l| tables.len() >= l);
    tables.truncate(cap);
    let chains = tables
        .into_iter()
        .map(|stars| {
            let stars = stars
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    let k = i + 1;
                    let (dom, cod) = if k % 2 == 1 {
                        (f.cod().clone(), f.dom().clone())
                    } else {
                        (f.dom().clone(), f.cod().clone())
                    };
                    FinMap::from_parts(format!("{}^({k})", f.name()), dom, cod, t)
                })
                .collect();
            StarChain {
                base: f.clone(),
                stars,
            }
        })
        .collect();
    Ok(ChainSearch { chains, truncated })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectorSide {
    Domain,
    Codomain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherProjector {
    pub projector: FinMap,
    pub side: ProjectorSide,
    pub idempotent: bool,
    /// `P.f = f` for odd order, `P.f1 = f1` for even order.
    pub absorption: bool,
}

/// `f.f1...fn` on `Y` for odd order; `f1...fn` on `X` for even order.
pub fn higher_projector(c: &StarChain) -> HigherProjector {
    let f = &c.base;
    let n = c.order();
    let mut path = stars_applied(c);
    if n % 2 == 1 {
        path.push(f);
        let p = compose_path(&path).expect("typed").with_name(format!("P{n}_{}", f.name()));
        let absorption = compose(&p, f).expect("typed") == *f;
        HigherProjector {
            idempotent: p.is_idempotent(),
            projector: p,
            side: ProjectorSide::Codomain,
            absorption,
        }
    } else {
        let p = compose_path(&path).expect("typed").with_name(format!("P{n}_{}", f.name()));
        let f1 = c.star(1);
        let absorption = compose(&p, f1).expect("typed") == *f1;
        HigherProjector {
            idempotent: p.is_idempotent(),
            projector: p,
            side: ProjectorSide::Domain,
            absorption,
        }
    }
}

/// Formal star tower of `g.f`: odd stars `fk.gk`, even stars `gk.fk`. The
/// composite is returned with its verdict, which may be negative.
pub fn star_compose(cf: &StarChain, cg: &StarChain) -> Result<(StarChain, ChainVerdict)> {
    if cf.order() != cg.order() {
        return Err(Error::OrderMismatch(cf.order(), cg.order()));
    }
    let f = &cf.base;
    let g = &cg.base;
    if f.cod() != g.dom() {
        return Err(mismatch(f.cod().id(), g.dom().id()));
    }
    let base = compose(g, f)?;
    let stars = cf
        .stars
        .iter()
        .zip(&cg.stars)
        .enumerate()
        .map(|(i, (fk, gk))| {
            if (i + 1) % 2 == 1 {
                compose(fk, gk)
            } else {
                compose(gk, fk)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let chain = make_chain(base, stars)?;
    let verdict = check_chain(&chain);
    Ok((chain, verdict))
}

/// The all-identity chain of order `n` on a set.
pub fn identity_chain(set: &std::sync::Arc<crate::finmap::FiniteSet>, n: usize) -> Result<StarChain> {
    let id = identity(set);
    make_chain(id.clone(), vec![id; n])
}
