//! Finite sets, total maps between them, and the product structure used by
//! braidings.
//!
//! Sets are compared nominally: two [`FiniteSet`]s are the same object iff
//! their ids agree. Maps hold shared handles to their endpoints and compare
//! by `(dom id, cod id, table)`; the name is a label only.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{mismatch, Error, Result};

/// A named finite carrier with labelled elements, indexed densely in
/// declaration order.
#[derive(Debug, Clone)]
pub struct FiniteSet {
    id: String,
    elements: Vec<String>,
    index: HashMap<String, usize>,
    // Atomic factors when this set is a product carrier; empty otherwise.
    factors: Vec<Arc<FiniteSet>>,
}

impl FiniteSet {
    pub fn new<S: Into<String>>(
        id: impl Into<String>,
        elements: impl IntoIterator<Item = S>,
    ) -> Result<Arc<FiniteSet>> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(elements.len());
        for (i, label) in elements.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateElement(label.clone()));
            }
        }
        Ok(Arc::new(FiniteSet {
            id: id.into(),
            elements,
            index,
            factors: Vec::new(),
        }))
    }

    /// A set whose labels are the decimal indices `0..n`.
    pub fn range(id: impl Into<String>, n: usize) -> Arc<FiniteSet> {
        FiniteSet::new(id, (0..n).map(|i| i.to_string())).expect("decimal labels are distinct")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.elements[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Atomic factors if this is a product carrier, otherwise empty.
    pub fn factors(&self) -> &[Arc<FiniteSet>] {
        &self.factors
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for FiniteSet {}

impl Hash for FiniteSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

fn atoms(set: &Arc<FiniteSet>) -> Vec<Arc<FiniteSet>> {
    if set.factors.is_empty() {
        vec![set.clone()]
    } else {
        set.factors.clone()
    }
}

/// A cartesian product of sets, flattened to atomic factors so that the
/// monoidal product is strictly associative: `(X*Y)*Z` and `X*(Y*Z)` are
/// the same object `X*Y*Z`. Indexing is row-major with the leftmost factor
/// most significant.
#[derive(Debug, Clone)]
pub struct ProductSet {
    factors: Vec<Arc<FiniteSet>>,
    carrier: Arc<FiniteSet>,
}

impl ProductSet {
    pub fn new(factors: &[Arc<FiniteSet>]) -> ProductSet {
        let flat: Vec<Arc<FiniteSet>> = factors.iter().flat_map(atoms).collect();
        if flat.len() == 1 {
            return ProductSet {
                factors: flat.clone(),
                carrier: flat[0].clone(),
            };
        }
        let id = flat.iter().map(|f| f.id.as_str()).collect::<Vec<_>>().join("*");
        let sizes: Vec<usize> = flat.iter().map(|f| f.cardinality()).collect();
        let total: usize = sizes.iter().product();
        let mut elements = Vec::with_capacity(total);
        let mut index = HashMap::with_capacity(total);
        for i in 0..total {
            let tuple = unrank(i, &sizes);
            let parts: Vec<&str> = tuple
                .iter()
                .zip(&flat)
                .map(|(&c, f)| f.label(c))
                .collect();
            let label = format!("({})", parts.join(","));
            index.insert(label.clone(), i);
            elements.push(label);
        }
        let carrier = Arc::new(FiniteSet {
            id,
            elements,
            index,
            factors: flat.clone(),
        });
        ProductSet {
            factors: flat,
            carrier,
        }
    }

    pub fn factors(&self) -> &[Arc<FiniteSet>] {
        &self.factors
    }

    pub fn carrier(&self) -> &Arc<FiniteSet> {
        &self.carrier
    }

    fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.cardinality()).collect()
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        rank(tuple, &self.sizes())
    }

    pub fn tuple(&self, index: usize) -> Vec<usize> {
        unrank(index, &self.sizes())
    }
}

pub(crate) fn rank(tuple: &[usize], sizes: &[usize]) -> usize {
    debug_assert_eq!(tuple.len(), sizes.len());
    tuple
        .iter()
        .zip(sizes)
        .fold(0, |acc, (&c, &n)| acc * n + c)
}

pub(crate) fn unrank(mut index: usize, sizes: &[usize]) -> Vec<usize> {
    let mut tuple = vec![0; sizes.len()];
    for (slot, &n) in tuple.iter_mut().zip(sizes).rev() {
        if n > 0 {
            *slot = index % n;
            index /= n;
        }
    }
    tuple
}

/// A total function between two finite sets.
#[derive(Debug, Clone)]
pub struct FinMap {
    name: String,
    dom: Arc<FiniteSet>,
    cod: Arc<FiniteSet>,
    table: Vec<usize>,
}

impl FinMap {
    pub fn new(
        name: impl Into<String>,
        dom: Arc<FiniteSet>,
        cod: Arc<FiniteSet>,
        table: Vec<usize>,
    ) -> Result<FinMap> {
        if table.len() != dom.cardinality() {
            return Err(Error::TableLength {
                expected: dom.cardinality(),
                found: table.len(),
            });
        }
        if let Some((position, &value)) = table
            .iter()
            .enumerate()
            .find(|(_, &v)| v >= cod.cardinality())
        {
            return Err(Error::IndexOutOfRange {
                position,
                value,
                cod_size: cod.cardinality(),
            });
        }
        Ok(FinMap {
            name: name.into(),
            dom,
            cod,
            table,
        })
    }

    pub(crate) fn from_parts(
        name: impl Into<String>,
        dom: Arc<FiniteSet>,
        cod: Arc<FiniteSet>,
        table: Vec<usize>,
    ) -> FinMap {
        debug_assert_eq!(table.len(), dom.cardinality());
        debug_assert!(table.iter().all(|&v| v < cod.cardinality()));
        FinMap {
            name: name.into(),
            dom,
            cod,
            table,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dom(&self) -> &Arc<FiniteSet> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteSet> {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FinMap {
        self.name = name.into();
        self
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `f.f = f`; false for maps that are not endomaps.
    pub fn is_idempotent(&self) -> bool {
        self.is_endo() && self.table.iter().all(|&v| self.table[v] == v)
    }

    /// The table as `(dom label, cod label)` pairs in domain order.
    pub fn assignments(&self) -> Vec<(&str, &str)> {
        self.table
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.dom.label(x), self.cod.label(y)))
            .collect()
    }
}

impl PartialEq for FinMap {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.table == other.table
    }
}

impl Eq for FinMap {}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {} {:?}", self.name, self.dom.id, self.cod.id, self.table)
    }
}

/// Builds a map from `(dom label, cod label)` assignments.
pub fn build_map(
    name: impl Into<String>,
    dom: &Arc<FiniteSet>,
    cod: &Arc<FiniteSet>,
    assignments: &[(&str, &str)],
) -> Result<FinMap> {
    let mut table: Vec<Option<usize>> = vec![None; dom.cardinality()];
    for &(x, y) in assignments {
        let xi = dom
            .index_of(x)
            .ok_or_else(|| Error::UnknownLabel(x.to_owned()))?;
        let yi = cod
            .index_of(y)
            .ok_or_else(|| Error::UnknownLabel(y.to_owned()))?;
        if table[xi].replace(yi).is_some() {
            return Err(Error::DuplicateAssignment(x.to_owned()));
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::MissingAssignment(dom.label(i).to_owned())))
        .collect::<Result<Vec<_>>>()?;
    Ok(FinMap::from_parts(name, dom.clone(), cod.clone(), table))
}

/// `g.f`, applying `f` first.
pub fn compose(g: &FinMap, f: &FinMap) -> Result<FinMap> {
    if f.cod != g.dom {
        return Err(mismatch(&f.cod.id, &g.dom.id));
    }
    let table = f.table.iter().map(|&y| g.table[y]).collect();
    Ok(FinMap::from_parts(
        format!("{}.{}", g.name, f.name),
        f.dom.clone(),
        g.cod.clone(),
        table,
    ))
}

/// Composes a sequence applied left to right: `maps[0]` first.
pub fn compose_path(maps: &[&FinMap]) -> Result<FinMap> {
    let (first, rest) = maps.split_first().ok_or(Error::EmptyPath)?;
    rest.iter().try_fold((*first).clone(), |acc, m| compose(m, &acc))
}

pub fn identity(set: &Arc<FiniteSet>) -> FinMap {
    FinMap::from_parts(
        format!("id_{}", set.id),
        set.clone(),
        set.clone(),
        (0..set.cardinality()).collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct MapClass {
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
    /// `None` when the map is not an endomap.
    pub idempotent: Option<bool>,
}

pub fn classify_map(f: &FinMap) -> MapClass {
    let mut hits = vec![0usize; f.cod.cardinality()];
    for &y in &f.table {
        hits[y] += 1;
    }
    let injective = hits.iter().all(|&n| n <= 1);
    let surjective = hits.iter().all(|&n| n >= 1);
    MapClass {
        injective,
        surjective,
        bijective: injective && surjective,
        idempotent: f.is_endo().then(|| f.is_idempotent()),
    }
}

/// A subset of a named finite set, by element index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    of: String,
    members: BTreeSet<usize>,
}

impl Subset {
    pub fn new(of: &FiniteSet, members: impl IntoIterator<Item = usize>) -> Result<Subset> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m >= of.cardinality()) {
            return Err(Error::IndexOutOfRange {
                position: bad,
                value: bad,
                cod_size: of.cardinality(),
            });
        }
        Ok(Subset {
            of: of.id.clone(),
            members,
        })
    }

    pub fn of(&self) -> &str {
        &self.of
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }
}

pub fn direct_image(f: &FinMap, a: &Subset) -> Result<Subset> {
    if a.of != f.dom.id {
        return Err(Error::SubsetDomainMismatch {
            expected: f.dom.id.clone(),
            found: a.of.clone(),
        });
    }
    Ok(Subset {
        of: f.cod.id.clone(),
        members: a.members.iter().map(|&x| f.table[x]).collect(),
    })
}

pub fn inverse_image(f: &FinMap, b: &Subset) -> Result<Subset> {
    if b.of != f.cod.id {
        return Err(Error::SubsetDomainMismatch {
            expected: f.cod.id.clone(),
            found: b.of.clone(),
        });
    }
    Ok(Subset {
        of: f.dom.id.clone(),
        members: (0..f.table.len())
            .filter(|&x| b.members.contains(&f.table[x]))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetMode {
    /// `f(g(f(A))) = f(A)` for every `A` in the domain of `f`.
    Image,
    /// `g(f(g(B))) = g(B)` for every `B` in the codomain of `f`.
    Reflexive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetRegularity {
    pub holds: bool,
    pub witness: Option<Subset>,
}

// 2^24 subsets is the most any sweep will visit.
const MAX_SUBSET_SWEEP_BITS: usize = 24;

/// Checks subset-level regularity of `f` with respect to `g: cod(f) -> dom(f)`,
/// quantifying over every subset including the empty set and the whole set.
/// The witness is the lexicographically least failing subset (comparing
/// sorted member lists).
pub fn check_subset_regularity(f: &FinMap, g: &FinMap, mode: SubsetMode) -> Result<SubsetRegularity> {
    if g.dom != f.cod {
        return Err(mismatch(&f.cod.id, &g.dom.id));
    }
    if g.cod != f.dom {
        return Err(mismatch(&f.dom.id, &g.cod.id));
    }
    let (outer, inner, carrier) = match mode {
        SubsetMode::Image => (f, g, &f.dom),
        SubsetMode::Reflexive => (g, f, &f.cod),
    };
    let n = carrier.cardinality();
    if n > MAX_SUBSET_SWEEP_BITS {
        return Err(Error::SearchSpaceTooLarge {
            size: 1u128 << n,
            bound: 1u128 << MAX_SUBSET_SWEEP_BITS,
        });
    }
    let mut witness: Option<Vec<usize>> = None;
    for mask in 0u64..(1u64 << n) {
        let a = Subset {
            of: carrier.id.clone(),
            members: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
        };
        let once = direct_image(outer, &a)?;
        let thrice = direct_image(outer, &direct_image(inner, &once)?)?;
        if once != thrice {
            let key: Vec<usize> = a.members.iter().copied().collect();
            if witness.as_ref().is_none_or(|w| key < *w) {
                witness = Some(key);
            }
        }
    }
    Ok(SubsetRegularity {
        holds: witness.is_none(),
        witness: witness.map(|w| Subset {
            of: carrier.id.clone(),
            members: w.into_iter().collect(),
        }),
    })
}

/// `f (x) g` on row-major product carriers.
pub fn tensor(f: &FinMap, g: &FinMap) -> FinMap {
    let dom = ProductSet::new(&[f.dom.clone(), g.dom.clone()]);
    let cod = ProductSet::new(&[f.cod.clone(), g.cod.clone()]);
    let inner_dom = g.dom.cardinality();
    let inner_cod = g.cod.cardinality();
    let mut table = Vec::with_capacity(f.table.len() * inner_dom);
    for &fx in &f.table {
        for &gy in &g.table {
            table.push(fx * inner_cod + gy);
        }
    }
    FinMap::from_parts(
        format!("{}*{}", f.name, g.name),
        dom.carrier().clone(),
        cod.carrier().clone(),
        table,
    )
}
