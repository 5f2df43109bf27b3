//! Finite sup-semilattices.
//!
//! A [`SupLattice`] is an immutable, validated finite poset with a bottom
//! element and all binary joins; in the finite case that is a complete
//! lattice, so meets are available as well. Elements are addressed by their
//! canonical index ([`Element`]) in input order.
//!
//! Internally every element keeps its up-set and down-set as bitsets indexed
//! by a linear extension of the order. A join is then the first common upper
//! bound in that extension, and a meet the last common lower bound.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub const DEFAULT_CARRIER_CAP: usize = 4096;

/// Environment variable overriding [`DEFAULT_CARRIER_CAP`].
pub const CARRIER_CAP_ENV: &str = "FSL_CARRIER_CAP";

static CARRIER_CAP: AtomicUsize = AtomicUsize::new(0);

thread_local! {
    static SCOPED_CAP: std::cell::Cell<Option<usize>> = const { std::cell::Cell::new(None) };
}

/// Largest carrier any construction is allowed to materialize.
pub fn carrier_cap() -> usize {
    if let Some(cap) = SCOPED_CAP.with(|c| c.get()) {
        return cap;
    }
    match CARRIER_CAP.load(Ordering::Relaxed) {
        0 => {
            let cap = std::env::var(CARRIER_CAP_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&v| v > 0)
                .unwrap_or(DEFAULT_CARRIER_CAP);
            CARRIER_CAP.store(cap, Ordering::Relaxed);
            cap
        }
        cap => cap,
    }
}

pub fn set_carrier_cap(cap: usize) {
    CARRIER_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Runs `f` with a different cap on the current thread only.
pub fn with_carrier_cap<T>(cap: usize, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<usize>);
    impl Drop for Restore {
        fn drop(&mut self) {
            SCOPED_CAP.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(SCOPED_CAP.with(|c| c.replace(Some(cap.max(1)))));
    f()
}

pub(crate) fn ensure_cap(what: impl FnOnce() -> String, size: u128) -> Result<()> {
    let cap = carrier_cap();
    if size > cap as u128 {
        return Err(Error::CarrierTooLarge {
            what: what(),
            size,
            cap,
        });
    }
    Ok(())
}

/// `base^arity`, saturating.
pub(crate) fn power_size(base: usize, arity: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..arity {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Index of an element inside one specific lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Element(pub usize);

impl Element {
    pub fn index(self) -> usize {
        self.0
    }
}

/// An element of a power `G^T`: one coordinate per node of `T`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(pub Vec<Element>);

impl Tuple {
    pub fn constant(x: Element, arity: usize) -> Self {
        Tuple(vec![x; arity])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Element {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.0.iter().copied()
    }
}

#[derive(Clone)]
enum Shape {
    Plain,
    /// Lexicographically ordered tuples over `base`.
    Power { base: SupLattice, nodes: Vec<String> },
    /// A sorted family of tuples over `base` (a quotient carrier).
    Fixpoints {
        base: SupLattice,
        nodes: Vec<String>,
        reps: Vec<Tuple>,
    },
}

struct Inner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    rank: Vec<usize>,
    by_rank: Vec<usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    join_table: Option<Vec<u32>>,
    bottom: usize,
    top: usize,
    shape: Shape,
}

const JOIN_TABLE_LIMIT: usize = 256;

#[derive(Clone)]
pub struct SupLattice {
    inner: Arc<Inner>,
}

impl fmt::Debug for SupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 16 {
            f.debug_struct("SupLattice")
                .field("elements", &self.inner.labels)
                .field("covers", &self.cover_labels())
                .finish()
        } else {
            f.debug_struct("SupLattice")
                .field("len", &self.len())
                .finish_non_exhaustive()
        }
    }
}

impl PartialEq for SupLattice {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for SupLattice {}

/// Builds a validated lattice: `leq` is the reflexive-transitive closure of
/// `order_pairs`.
pub fn validate_lattice<S: AsRef<str>>(labels: &[S], order_pairs: &[(S, S)]) -> Result<SupLattice> {
    let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
    if labels.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let n = labels.len();
    let mut index = HashMap::with_capacity(n);
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    let lookup = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    };
    let mut rows: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(i);
            row
        })
        .collect();
    for (a, b) in order_pairs {
        let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
        rows[a].insert(b);
    }
    // Warshall on bit rows.
    for k in 0..n {
        let row_k = rows[k].clone();
        for row in rows.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    for i in 0..n {
        for j in rows[i].ones() {
            if j > i && rows[j].contains(i) {
                return Err(Error::Cycle(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    SupLattice::build(labels, rows, Shape::Plain, true)
}

/// Least upper bound of `xs`; the empty join is bottom.
pub fn join(lattice: &SupLattice, xs: &[Element]) -> Result<Element> {
    for &x in xs {
        lattice.check(x)?;
    }
    Ok(lattice.join_all(xs.iter().copied()))
}

/// Greatest lower bound of `xs`, computed as the join of all common lower
/// bounds; the empty meet is top.
pub fn meet(lattice: &SupLattice, xs: &[Element]) -> Result<Element> {
    for &x in xs {
        lattice.check(x)?;
    }
    let lower = lattice
        .elements()
        .filter(|&y| xs.iter().all(|&x| lattice.leq(y, x)));
    Ok(lattice.join_all(lower))
}

/// The pointwise-ordered power `L^T`, elements in lexicographic order of
/// their coordinate indices.
pub fn power_lattice<S: AsRef<str>>(lattice: &SupLattice, nodes: &[S]) -> Result<SupLattice> {
    if nodes.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    let nodes: Vec<String> = nodes.iter().map(|s| s.as_ref().to_string()).collect();
    let arity = nodes.len();
    let size = power_size(lattice.len(), arity);
    ensure_cap(|| format!("power lattice with {arity} coordinates"), size)?;
    let size = size as usize;
    let radix = lattice.len();
    let tuples: Vec<Tuple> = (0..size).map(|i| decode(i, radix, arity)).collect();
    let labels = tuples.iter().map(|t| lattice.format_tuple(t)).collect();
    let mut rows = Vec::with_capacity(size);
    let mut ups: Vec<Vec<usize>> = Vec::with_capacity(arity);
    for t in &tuples {
        ups.clear();
        ups.extend(t.iter().map(|x| lattice.upset(x)));
        let mut row = FixedBitSet::with_capacity(size);
        let mut digits = vec![0usize; arity];
        'outer: loop {
            let mut idx = 0;
            for (k, &d) in digits.iter().enumerate() {
                idx = idx * radix + ups[k][d];
            }
            row.insert(idx);
            for k in (0..arity).rev() {
                digits[k] += 1;
                if digits[k] < ups[k].len() {
                    continue 'outer;
                }
                digits[k] = 0;
            }
            break;
        }
        rows.push(row);
    }
    SupLattice::build(
        labels,
        rows,
        Shape::Power {
            base: lattice.clone(),
            nodes,
        },
        false,
    )
}

fn decode(mut index: usize, radix: usize, arity: usize) -> Tuple {
    let mut out = vec![Element(0); arity];
    for k in (0..arity).rev() {
        out[k] = Element(index % radix);
        index /= radix;
    }
    Tuple(out)
}

fn first_common(a: &FixedBitSet, b: &FixedBitSet) -> Option<usize> {
    let bits = usize::BITS as usize;
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .enumerate()
        .find_map(|(w, (x, y))| {
            let m = x & y;
            (m != 0).then(|| w * bits + m.trailing_zeros() as usize)
        })
}

fn last_common(a: &FixedBitSet, b: &FixedBitSet) -> Option<usize> {
    let bits = usize::BITS as usize;
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .enumerate()
        .rev()
        .find_map(|(w, (x, y))| {
            let m = x & y;
            (m != 0).then(|| w * bits + (bits - 1 - m.leading_zeros() as usize))
        })
}

impl SupLattice {
    /// `rows[i]` holds every `j` with `i <= j`; must already be a partial order.
    fn build(labels: Vec<String>, rows: Vec<FixedBitSet>, shape: Shape, validate: bool) -> Result<Self> {
        let n = labels.len();
        let mut down_count = vec![0usize; n];
        for row in &rows {
            for j in row.ones() {
                down_count[j] += 1;
            }
        }
        let mut by_rank: Vec<usize> = (0..n).collect();
        by_rank.sort_by_key(|&i| (down_count[i], i));
        let mut rank = vec![0; n];
        for (r, &i) in by_rank.iter().enumerate() {
            rank[i] = r;
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in rows.iter().enumerate() {
            for j in row.ones() {
                up[i].insert(rank[j]);
                down[j].insert(rank[i]);
            }
        }
        let bottom = by_rank[0];
        if up[bottom].count_ones(..) != n {
            return Err(Error::NoBottom);
        }
        if validate {
            for i in 0..n {
                for j in (i + 1)..n {
                    let ok = first_common(&up[i], &up[j])
                        .map(|r| {
                            let cand = by_rank[r];
                            up[i].intersection(&up[j]).all(|s| up[cand].contains(s))
                        })
                        .unwrap_or(false);
                    if !ok {
                        return Err(Error::NoJoin(labels[i].clone(), labels[j].clone()));
                    }
                }
            }
        }
        let top = by_rank[n - 1];
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let mut lattice = SupLattice {
            inner: Arc::new(Inner {
                labels,
                index,
                rank,
                by_rank,
                up,
                down,
                join_table: None,
                bottom,
                top,
                shape,
            }),
        };
        if n <= JOIN_TABLE_LIMIT {
            let mut table = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    table[i * n + j] = lattice.join_slow(i, j) as u32;
                }
            }
            Arc::get_mut(&mut lattice.inner)
                .expect("freshly built")
                .join_table = Some(table);
        }
        Ok(lattice)
    }

    /// Carrier of a quotient of `base^nodes`: the sorted fixpoint tuples
    /// with the pointwise order.
    pub(crate) fn from_fixpoints(base: &SupLattice, nodes: Vec<String>, reps: Vec<Tuple>) -> Self {
        debug_assert!(reps.windows(2).all(|w| w[0] < w[1]));
        let n = reps.len();
        let rows = reps
            .iter()
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(n);
                for (j, b) in reps.iter().enumerate() {
                    if base.tuple_leq(a, b) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        let labels = reps.iter().map(|t| base.format_tuple(t)).collect();
        Self::build(
            labels,
            rows,
            Shape::Fixpoints {
                base: base.clone(),
                nodes,
                reps,
            },
            false,
        )
        .expect("fixpoints of a closure operator contain the closed bottom")
    }

    /// Sub-poset on `members` of `self` with labels kept; trusted to be a lattice.
    pub(crate) fn sub_lattice(&self, members: &[Element]) -> Result<Self> {
        let n = members.len();
        let rows = members
            .iter()
            .map(|&a| {
                let mut row = FixedBitSet::with_capacity(n);
                for (j, &b) in members.iter().enumerate() {
                    if self.leq(a, b) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        let labels = members.iter().map(|&e| self.label(e).to_string()).collect();
        Self::build(labels, rows, Shape::Plain, true)
    }

    /// A chain `0 < 1 < ... < n-1` with the given labels.
    pub fn chain<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = labels
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        let labels: Vec<&str> = labels.iter().map(|s| s.as_ref()).collect();
        validate_lattice(&labels, &pairs)
    }

    /// The two-element chain `0 < 1`.
    pub fn two() -> Self {
        Self::chain(&["0", "1"]).expect("two-element chain")
    }

    pub fn singleton(label: &str) -> Self {
        validate_lattice::<&str>(&[label], &[]).expect("one-element lattice")
    }

    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.len()).map(Element)
    }

    pub fn label(&self, e: Element) -> &str {
        &self.inner.labels[e.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn element(&self, label: &str) -> Option<Element> {
        self.inner.index.get(label).copied().map(Element)
    }

    pub fn require(&self, label: &str) -> Result<Element> {
        self.element(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn check(&self, e: Element) -> Result<Element> {
        if e.0 < self.len() {
            Ok(e)
        } else {
            Err(Error::ForeignElement {
                index: e.0,
                size: self.len(),
            })
        }
    }

    pub fn bottom(&self) -> Element {
        Element(self.inner.bottom)
    }

    pub fn top(&self) -> Element {
        Element(self.inner.top)
    }

    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.inner.up[a.0].contains(self.inner.rank[b.0])
    }

    pub fn lt(&self, a: Element, b: Element) -> bool {
        a != b && self.leq(a, b)
    }

    fn join_slow(&self, a: usize, b: usize) -> usize {
        let r = first_common(&self.inner.up[a], &self.inner.up[b]).expect("validated lattice has all joins");
        self.inner.by_rank[r]
    }

    pub fn join(&self, a: Element, b: Element) -> Element {
        match &self.inner.join_table {
            Some(t) => Element(t[a.0 * self.len() + b.0] as usize),
            None => Element(self.join_slow(a.0, b.0)),
        }
    }

    pub fn meet(&self, a: Element, b: Element) -> Element {
        let r = last_common(&self.inner.down[a.0], &self.inner.down[b.0]).expect("bottom is a lower bound");
        Element(self.inner.by_rank[r])
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = Element>) -> Element {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = Element>) -> Element {
        xs.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Elements in a fixed linear extension of the order (bottom first).
    pub fn linear_extension(&self) -> impl Iterator<Item = Element> + '_ {
        self.inner.by_rank.iter().map(|&i| Element(i))
    }

    /// Elements above `x`, as canonical indices.
    fn upset(&self, x: Element) -> Vec<usize> {
        let mut v: Vec<usize> = self.inner.up[x.0]
            .ones()
            .map(|r| self.inner.by_rank[r])
            .collect();
        v.sort_unstable();
        v
    }

    /// Lower covers of `x`.
    pub fn lower_covers(&self, x: Element) -> Vec<Element> {
        let inner = &self.inner;
        let mut strict = inner.down[x.0].clone();
        strict.remove(inner.rank[x.0]);
        let mut out: Vec<Element> = strict
            .ones()
            .filter(|&r| {
                let a = inner.by_rank[r];
                inner.up[a].intersection(&strict).count() == 1
            })
            .map(|r| Element(inner.by_rank[r]))
            .collect();
        out.sort_unstable();
        out
    }

    /// Hasse diagram edges `(a, b)` with `a` covered by `b`.
    pub fn covers(&self) -> Vec<(Element, Element)> {
        self.elements()
            .flat_map(|b| self.lower_covers(b).into_iter().map(move |a| (a, b)))
            .collect()
    }

    fn cover_labels(&self) -> Vec<(String, String)> {
        self.covers()
            .into_iter()
            .map(|(a, b)| (self.label(a).to_string(), self.label(b).to_string()))
            .collect()
    }

    /// Elements that are not the join of the elements strictly below them,
    /// listed along the linear extension.
    pub fn join_irreducibles(&self) -> Vec<Element> {
        self.linear_extension()
            .filter(|&x| self.lower_covers(x).len() == 1)
            .collect()
    }

    pub fn same_as(&self, other: &SupLattice) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.labels == other.inner.labels
                && self.inner.rank == other.inner.rank
                && self.inner.up == other.inner.up)
    }

    /// Coordinate lattice and node names when `self` is a power or a quotient of one.
    pub fn coordinates(&self) -> Option<(&SupLattice, &[String])> {
        match &self.inner.shape {
            Shape::Plain => None,
            Shape::Power { base, nodes } | Shape::Fixpoints { base, nodes, .. } => Some((base, nodes)),
        }
    }

    /// The tuple an element stands for, when `self` has coordinates.
    pub fn tuple(&self, e: Element) -> Option<Tuple> {
        match &self.inner.shape {
            Shape::Plain => None,
            Shape::Power { base, nodes } => Some(decode(e.0, base.len(), nodes.len())),
            Shape::Fixpoints { reps, .. } => Some(reps[e.0].clone()),
        }
    }

    /// Inverse of [`SupLattice::tuple`].
    pub fn from_tuple(&self, t: &Tuple) -> Option<Element> {
        match &self.inner.shape {
            Shape::Plain => None,
            Shape::Power { base, nodes } => {
                if t.len() != nodes.len() || t.iter().any(|x| x.0 >= base.len()) {
                    return None;
                }
                Some(Element(t.iter().fold(0, |acc, x| acc * base.len() + x.0)))
            }
            Shape::Fixpoints { reps, .. } => reps.binary_search(t).ok().map(Element),
        }
    }

    pub fn format_tuple(&self, t: &Tuple) -> String {
        let parts: Vec<&str> = t.iter().map(|x| self.label(x)).collect();
        format!("({})", parts.join(","))
    }

    pub fn tuple_bottom(&self, arity: usize) -> Tuple {
        Tuple::constant(self.bottom(), arity)
    }

    pub fn tuple_join(&self, a: &Tuple, b: &Tuple) -> Tuple {
        Tuple(a.iter().zip(b.iter()).map(|(x, y)| self.join(x, y)).collect())
    }

    pub fn tuple_join_into(&self, acc: &mut Tuple, b: &Tuple) {
        for (x, &y) in acc.0.iter_mut().zip(&b.0) {
            *x = self.join(*x, y);
        }
    }

    pub fn tuple_leq(&self, a: &Tuple, b: &Tuple) -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| self.leq(x, y))
    }

    /// Calls `f` on every tuple of `self^arity` in lexicographic order.
    pub fn for_each_tuple(&self, arity: usize, mut f: impl FnMut(&Tuple)) {
        let n = self.len();
        let mut t = self.tuple_bottom(arity);
        for x in t.0.iter_mut() {
            *x = Element(0);
        }
        loop {
            f(&t);
            let mut k = arity;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                t.0[k].0 += 1;
                if t.0[k].0 < n {
                    break;
                }
                t.0[k].0 = 0;
            }
        }
    }
}
