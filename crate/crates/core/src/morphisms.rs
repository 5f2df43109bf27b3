//! Join-preserving maps, F-sup-semilattices, and the morphism classes
//! between them: lax morphisms, F-homomorphisms, order-embeddings and the
//! class of lax embeddings satisfying the reflection condition.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{carrier_cap, Element, SupLattice};

/// A join-preserving map between two lattices, stored as a full table.
#[derive(Clone, PartialEq, Eq)]
pub struct JoinHom {
    source: SupLattice,
    target: SupLattice,
    table: Vec<Element>,
}

impl fmt::Debug for JoinHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.source.len() <= 32 {
            let map: Vec<String> = self
                .source
                .elements()
                .map(|x| format!("{}->{}", self.source.label(x), self.target.label(self.apply(x))))
                .collect();
            f.debug_tuple("JoinHom").field(&map).finish()
        } else {
            f.debug_struct("JoinHom")
                .field("source_len", &self.source.len())
                .field("target_len", &self.target.len())
                .finish_non_exhaustive()
        }
    }
}

/// Checks table shape and membership, then returns the first witness pair
/// (or `None` for bottom) at which joins are not preserved.
fn join_violation(table: &[Element], source: &SupLattice, target: &SupLattice) -> Result<Option<Option<(Element, Element)>>> {
    if table.len() != source.len() {
        return Err(Error::ArityMismatch {
            expected: source.len(),
            got: table.len(),
        });
    }
    for &y in table {
        target.check(y)?;
    }
    if table[source.bottom().0] != target.bottom() {
        return Ok(Some(None));
    }
    for x in source.elements() {
        for y in source.elements().skip(x.0 + 1) {
            if table[source.join(x, y).0] != target.join(table[x.0], table[y.0]) {
                return Ok(Some(Some((x, y))));
            }
        }
    }
    Ok(None)
}

/// True iff `table` (indexed by source element) preserves bottom and binary joins.
pub fn is_join_hom(table: &[Element], source: &SupLattice, target: &SupLattice) -> Result<bool> {
    Ok(join_violation(table, source, target)?.is_none())
}

impl JoinHom {
    pub fn new(source: &SupLattice, target: &SupLattice, table: Vec<Element>) -> Result<Self> {
        match join_violation(&table, source, target)? {
            None => Ok(Self::trusted(source, target, table)),
            Some(None) => Err(Error::BottomNotPreserved),
            Some(Some((x, y))) => Err(Error::NotJoinPreserving(
                source.label(x).to_string(),
                source.label(y).to_string(),
            )),
        }
    }

    pub fn from_fn(source: &SupLattice, target: &SupLattice, f: impl FnMut(Element) -> Element) -> Result<Self> {
        Self::new(source, target, source.elements().map(f).collect())
    }

    /// Builds a hom from `(source label, target label)` assignments covering every element.
    pub fn from_labels<S: AsRef<str>>(source: &SupLattice, target: &SupLattice, map: &[(S, S)]) -> Result<Self> {
        let mut table = vec![None; source.len()];
        for (a, b) in map {
            table[source.require(a.as_ref())?.0] = Some(target.require(b.as_ref())?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| Error::ArityMismatch {
                    expected: source.len(),
                    got: i,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, table)
    }

    /// Wraps a table already known to preserve joins.
    pub(crate) fn trusted(source: &SupLattice, target: &SupLattice, table: Vec<Element>) -> Self {
        debug_assert!(source.len() > 256 || is_join_hom(&table, source, target) == Ok(true));
        JoinHom {
            source: source.clone(),
            target: target.clone(),
            table,
        }
    }

    pub fn identity(lattice: &SupLattice) -> Self {
        Self::trusted(lattice, lattice, lattice.elements().collect())
    }

    pub fn constant_bottom(source: &SupLattice, target: &SupLattice) -> Self {
        Self::trusted(source, target, vec![target.bottom(); source.len()])
    }

    pub fn source(&self) -> &SupLattice {
        &self.source
    }

    pub fn target(&self) -> &SupLattice {
        &self.target
    }

    pub fn table(&self) -> &[Element] {
        &self.table
    }

    pub fn apply(&self, x: Element) -> Element {
        self.table[x.0]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &JoinHom) -> Result<JoinHom> {
        if first.target != self.source {
            return Err(Error::CarrierMismatch(
                "composed maps do not share a middle lattice".into(),
            ));
        }
        let table = first.table.iter().map(|&y| self.apply(y)).collect();
        Ok(Self::trusted(&first.source, &self.target, table))
    }

    /// Pointwise order of maps with the same source and target.
    pub fn leq(&self, other: &JoinHom) -> bool {
        self.table
            .iter()
            .zip(&other.table)
            .all(|(&a, &b)| self.target.leq(a, b))
    }

    /// Value labels in source element order.
    pub fn value_labels(&self) -> Vec<&str> {
        self.table.iter().map(|&y| self.target.label(y)).collect()
    }
}

/// A lattice with a join-preserving operator `F`.
#[derive(Clone, PartialEq, Eq)]
pub struct FSupLattice {
    lattice: SupLattice,
    op: JoinHom,
}

impl fmt::Debug for FSupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FSupLattice")
            .field("lattice", &self.lattice)
            .field("F", &self.op)
            .finish()
    }
}

impl FSupLattice {
    pub fn new(lattice: &SupLattice, op: Vec<Element>) -> Result<Self> {
        Ok(FSupLattice {
            lattice: lattice.clone(),
            op: JoinHom::new(lattice, lattice, op)?,
        })
    }

    pub fn from_hom(op: JoinHom) -> Result<Self> {
        if op.source != op.target {
            return Err(Error::CarrierMismatch(
                "an operator must map a lattice to itself".into(),
            ));
        }
        Ok(FSupLattice {
            lattice: op.source.clone(),
            op,
        })
    }

    pub(crate) fn trusted(lattice: &SupLattice, op: Vec<Element>) -> Self {
        FSupLattice {
            lattice: lattice.clone(),
            op: JoinHom::trusted(lattice, lattice, op),
        }
    }

    /// `F = id`.
    pub fn plain(lattice: &SupLattice) -> Self {
        FSupLattice {
            lattice: lattice.clone(),
            op: JoinHom::identity(lattice),
        }
    }

    pub fn lattice(&self) -> &SupLattice {
        &self.lattice
    }

    pub fn op(&self) -> &JoinHom {
        &self.op
    }

    pub fn f(&self, x: Element) -> Element {
        self.op.apply(x)
    }

    /// The right adjoint of `F`: `F*(y) = ⋁{x | F(x) <= y}`.
    pub fn right_adjoint(&self, y: Element) -> Element {
        let g = &self.lattice;
        g.join_all(g.elements().filter(|&x| g.leq(self.f(x), y)))
    }
}

/// Every join-preserving map `source -> target`, in lexicographic order of
/// value tuples.
///
/// A join-preserving map is determined by its values on the join-irreducible
/// elements, which must be monotone there; the search assigns those values
/// in a linear extension of the order and checks each pairwise join as soon
/// as all irreducibles below it have values.
pub fn enumerate_join_homs(source: &SupLattice, target: &SupLattice) -> Result<Vec<JoinHom>> {
    let irr = source.join_irreducibles();
    // For every element, the positions of the irreducibles below it.
    let support: Vec<Vec<usize>> = source
        .elements()
        .map(|x| {
            irr.iter()
                .enumerate()
                .filter(|&(_, &j)| source.leq(j, x))
                .map(|(p, _)| p)
                .collect()
        })
        .collect();
    // Earlier irreducibles strictly below each irreducible.
    let below: Vec<Vec<usize>> = irr
        .iter()
        .map(|&j| {
            support[j.0]
                .iter()
                .copied()
                .filter(|&p| irr[p] != j)
                .collect()
        })
        .collect();
    // Pair checks, bucketed by the last irreducible they depend on.
    let mut checks: Vec<Vec<(Element, Element)>> = vec![Vec::new(); irr.len()];
    for x in source.elements() {
        for y in source.elements().skip(x.0 + 1) {
            let z = source.join(x, y);
            if let Some(&last) = support[z.0].iter().max() {
                checks[last].push((x, y));
            }
        }
    }

    let cap = carrier_cap();
    let mut values = vec![target.bottom(); irr.len()];
    let mut found: Vec<Vec<Element>> = Vec::new();
    let eval = |values: &[Element], x: Element| target.join_all(support[x.0].iter().map(|&p| values[p]));

    fn search(
        depth: usize,
        values: &mut Vec<Element>,
        ctx: &Search<'_>,
        found: &mut Vec<Vec<Element>>,
    ) -> Result<()> {
        if depth == values.len() {
            let table = ctx.source.elements().map(|x| (ctx.eval)(values, x)).collect();
            found.push(table);
            if found.len() > ctx.cap {
                return Err(Error::CarrierTooLarge {
                    what: "join-hom set".into(),
                    size: found.len() as u128,
                    cap: ctx.cap,
                });
            }
            return Ok(());
        }
        let floor = ctx
            .target
            .join_all(ctx.below[depth].iter().map(|&p| values[p]));
        for v in ctx.target.elements() {
            if !ctx.target.leq(floor, v) {
                continue;
            }
            values[depth] = v;
            let ok = ctx.checks[depth].iter().all(|&(x, y)| {
                (ctx.eval)(values, ctx.source.join(x, y))
                    == ctx.target.join((ctx.eval)(values, x), (ctx.eval)(values, y))
            });
            if ok {
                search(depth + 1, values, ctx, found)?;
            }
        }
        values[depth] = ctx.target.bottom();
        Ok(())
    }

    struct Search<'a> {
        source: &'a SupLattice,
        target: &'a SupLattice,
        below: &'a [Vec<usize>],
        checks: &'a [Vec<(Element, Element)>],
        eval: &'a dyn Fn(&[Element], Element) -> Element,
        cap: usize,
    }

    let ctx = Search {
        source,
        target,
        below: &below,
        checks: &checks,
        eval: &eval,
        cap,
    };
    search(0, &mut values, &ctx, &mut found)?;
    found.sort_unstable();
    Ok(found
        .into_iter()
        .map(|t| JoinHom::trusted(source, target, t))
        .collect())
}

fn same_carriers(f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<()> {
    if f.source != h1.lattice || f.target != h2.lattice {
        return Err(Error::CarrierMismatch(
            "map does not run between the given F-sup-semilattices".into(),
        ));
    }
    Ok(())
}

/// First `a` with `F2(f(a)) ≰ f(F1(a))`.
pub fn lax_violation(f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<Option<Element>> {
    same_carriers(f, h1, h2)?;
    Ok(h1
        .lattice
        .elements()
        .find(|&a| !h2.lattice.leq(h2.f(f.apply(a)), f.apply(h1.f(a)))))
}

/// `F2(f(a)) <= f(F1(a))` for every `a`.
pub fn is_lax_morphism(f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<bool> {
    Ok(lax_violation(f, h1, h2)?.is_none())
}

/// `F2(f(a)) = f(F1(a))` for every `a`.
pub fn is_f_homomorphism(f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<bool> {
    same_carriers(f, h1, h2)?;
    Ok(h1
        .lattice
        .elements()
        .all(|a| h2.f(f.apply(a)) == f.apply(h1.f(a))))
}

/// `a <= a'` iff `f(a) <= f(a')`, checked on all pairs.
pub fn is_order_embedding(f: &JoinHom) -> bool {
    let (s, t) = (&f.source, &f.target);
    s.elements().all(|a| {
        s.elements()
            .all(|b| s.leq(a, b) == t.leq(f.apply(a), f.apply(b)))
    })
}

/// Lax order-embeddings satisfying `F2(f(a)) <= f(a') ⟹ F1(a) <= a'`.
pub fn is_in_e_leq(f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<bool> {
    if !is_lax_morphism(f, h1, h2)? || !is_order_embedding(f) {
        return Ok(false);
    }
    let (s, t) = (&h1.lattice, &h2.lattice);
    Ok(s.elements().all(|a| {
        s.elements()
            .all(|b| !t.leq(h2.f(f.apply(a)), f.apply(b)) || s.leq(h1.f(a), b))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_lattice;

    fn diamond() -> SupLattice {
        validate_lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap()
    }

    fn brute_force(source: &SupLattice, target: &SupLattice) -> Vec<Vec<Element>> {
        let mut out = Vec::new();
        target.for_each_tuple(source.len(), |t| {
            if is_join_hom(&t.0, source, target).unwrap() {
                out.push(t.0.clone());
            }
        });
        out
    }

    #[test]
    fn diamond_to_two_homs_are_principal_ideal_kernels() {
        // In the diamond any two atoms join to the top, so a hom into the
        // two-element chain is determined by the largest element sent to 0.
        let g = diamond();
        let two = SupLattice::two();
        let homs = enumerate_join_homs(&g, &two).unwrap();
        assert_eq!(homs.len(), 5);
        let tables: Vec<Vec<Element>> = homs.iter().map(|h| h.table().to_vec()).collect();
        assert_eq!(tables, brute_force(&g, &two));
    }

    #[test]
    fn singleton_and_chain_counts_match_brute_force() {
        let g = diamond();
        let one = SupLattice::singleton("*");
        let two = SupLattice::two();
        assert_eq!(enumerate_join_homs(&one, &g).unwrap().len(), 1);
        assert_eq!(
            enumerate_join_homs(&two, &g).unwrap().len(),
            brute_force(&two, &g).len()
        );
        assert_eq!(enumerate_join_homs(&g, &g).unwrap().len(), brute_force(&g, &g).len());
    }

    #[test]
    fn join_hom_checks() {
        let g = diamond();
        let two = SupLattice::two();
        let e = |s| g.element(s).unwrap();
        let kernel_a = JoinHom::from_labels(
            &g,
            &two,
            &[("0", "0"), ("a", "0"), ("b", "1"), ("c", "1"), ("1", "1")],
        )
        .unwrap();
        assert_eq!(kernel_a.apply(e("c")), two.top());
        // Sending two atoms to 0 and their join 1 to 1 breaks a ∨ b = 1.
        assert!(matches!(
            JoinHom::from_labels(
                &g,
                &two,
                &[("0", "0"), ("a", "0"), ("b", "0"), ("c", "1"), ("1", "1")],
            )
            .unwrap_err(),
            Error::NotJoinPreserving(..)
        ));
        assert_eq!(
            is_join_hom(&[two.top(), two.top()], &two, &two),
            Ok(false)
        );
        // Only the top goes up: b ∨ c = 1 is not preserved.
        let only_top: Vec<Element> = g
            .elements()
            .map(|x| if x == g.top() { two.top() } else { two.bottom() })
            .collect();
        assert_eq!(is_join_hom(&only_top, &g, &two), Ok(false));
        assert!(matches!(
            JoinHom::new(&g, &two, only_top).unwrap_err(),
            Error::NotJoinPreserving(..)
        ));
        assert_eq!(
            JoinHom::new(&two, &two, vec![two.top(), two.top()]).unwrap_err(),
            Error::BottomNotPreserved
        );
    }

    #[test]
    fn lax_classes_on_two_chain() {
        let two = SupLattice::two();
        let id = FSupLattice::plain(&two);
        let up = FSupLattice::new(&two, vec![two.bottom(), two.top()]).unwrap();
        let identity = JoinHom::identity(&two);
        assert!(is_lax_morphism(&identity, &id, &id).unwrap());
        assert!(is_lax_morphism(&identity, &id, &up).unwrap());
        let zero = FSupLattice::new(&two, vec![two.bottom(), two.bottom()]).unwrap();
        // F2 = id, F1 = 0: F2(f(1)) = 1 ≰ f(F1(1)) = 0.
        assert!(!is_lax_morphism(&identity, &zero, &id).unwrap());
        let bottom = JoinHom::constant_bottom(&two, &two);
        assert!(is_lax_morphism(&bottom, &id, &id).unwrap());
        assert!(!is_in_e_leq(&bottom, &id, &id).unwrap());
        assert!(is_in_e_leq(&identity, &id, &id).unwrap());
        assert!(is_f_homomorphism(&identity, &id, &id).unwrap());
    }

    #[test]
    fn carrier_mismatch_is_reported() {
        let two = SupLattice::two();
        let g = diamond();
        let f = JoinHom::identity(&two);
        assert!(matches!(
            is_lax_morphism(&f, &FSupLattice::plain(&g), &FSupLattice::plain(&two)).unwrap_err(),
            Error::CarrierMismatch(_)
        ));
    }
}
