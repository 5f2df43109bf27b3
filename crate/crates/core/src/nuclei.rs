//! Prenuclei, nuclei, quotients and congruences of F-sup-semilattices.
//!
//! A nucleus `n` on `(G, F)` is a monotone, increasing, idempotent operator
//! with `F(n(x)) <= n(F(x))`. Its fixpoints form a lattice under
//! `a ∨' b = n(a ∨ b)`, and `n ∘ F` restricted to them is join-preserving.
//! The quotient map `n: G -> G_n` is then an F-homomorphism.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lattice::{Element, SupLattice, Tuple};
use crate::morphisms::{FSupLattice, JoinHom};

fn check_pairs(g: &SupLattice, pairs: &[(Element, Element)]) -> Result<()> {
    for &(c, d) in pairs {
        g.check(c)?;
        g.check(d)?;
    }
    Ok(())
}

fn monotone_violation(g: &SupLattice, table: &[Element]) -> Option<(Element, Element)> {
    g.covers()
        .into_iter()
        .find(|&(a, b)| !g.leq(table[a.0], table[b.0]))
}

/// A monotone increasing operator, with its laxness recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prenucleus {
    base: FSupLattice,
    table: Vec<Element>,
    lax: bool,
    pairs_closed: Option<bool>,
}

impl Prenucleus {
    /// Validates monotonicity and increase; laxness is measured, not required.
    pub fn new(base: &FSupLattice, table: Vec<Element>) -> Result<Self> {
        let g = base.lattice();
        if table.len() != g.len() {
            return Err(Error::ArityMismatch {
                expected: g.len(),
                got: table.len(),
            });
        }
        for &y in &table {
            g.check(y)?;
        }
        if let Some(x) = g.elements().find(|&x| !g.leq(x, table[x.0])) {
            return Err(Error::NotIncreasing(g.label(x).to_string()));
        }
        if let Some((a, b)) = monotone_violation(g, &table) {
            return Err(Error::NotMonotone(g.label(a).to_string(), g.label(b).to_string()));
        }
        let lax = is_lax_operator(base, &table);
        Ok(Prenucleus {
            base: base.clone(),
            table,
            lax,
            pairs_closed: None,
        })
    }

    pub fn base(&self) -> &FSupLattice {
        &self.base
    }

    pub fn table(&self) -> &[Element] {
        &self.table
    }

    pub fn apply(&self, x: Element) -> Element {
        self.table[x.0]
    }

    /// `F(j(x)) <= j(F(x))` for all `x`.
    pub fn is_lax(&self) -> bool {
        self.lax
    }

    /// For operators generated from pairs: whether `(F×F)(X) ⊆ X`.
    pub fn pairs_closed(&self) -> Option<bool> {
        self.pairs_closed
    }

    pub fn fixpoints(&self) -> Vec<Element> {
        self.base
            .lattice()
            .elements()
            .filter(|&x| self.apply(x) == x)
            .collect()
    }
}

fn is_lax_operator(base: &FSupLattice, table: &[Element]) -> bool {
    let g = base.lattice();
    g.elements()
        .all(|x| g.leq(base.f(table[x.0]), table[base.f(x).0]))
}

/// `j[X](a) = a ∨ ⋁{c | d <= a, (c,d) ∈ X or (d,c) ∈ X}`.
pub fn prenucleus_from_pairs(base: &FSupLattice, pairs: &[(Element, Element)]) -> Result<Prenucleus> {
    let g = base.lattice();
    check_pairs(g, pairs)?;
    let table: Vec<Element> = g
        .elements()
        .map(|a| {
            let mut acc = a;
            for &(c, d) in pairs {
                if g.leq(d, a) {
                    acc = g.join(acc, c);
                }
                if g.leq(c, a) {
                    acc = g.join(acc, d);
                }
            }
            acc
        })
        .collect();
    let set: HashSet<(Element, Element)> = pairs.iter().copied().collect();
    let closed = pairs
        .iter()
        .all(|&(c, d)| set.contains(&(base.f(c), base.f(d))));
    let mut j = Prenucleus::new(base, table)?;
    j.pairs_closed = Some(closed);
    Ok(j)
}

/// A closure operator on an F-sup-semilattice, with its laxness recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nucleus {
    base: FSupLattice,
    table: Vec<Element>,
    lax: bool,
}

impl Nucleus {
    /// Validates monotone, increasing and idempotent; laxness is measured.
    pub fn new(base: &FSupLattice, table: Vec<Element>) -> Result<Self> {
        let j = Prenucleus::new(base, table)?;
        let g = base.lattice();
        if let Some(x) = g.elements().find(|&x| j.apply(j.apply(x)) != j.apply(x)) {
            return Err(Error::NotIdempotent(g.label(x).to_string()));
        }
        Ok(Nucleus {
            base: j.base,
            table: j.table,
            lax: j.lax,
        })
    }

    pub fn identity(base: &FSupLattice) -> Self {
        Nucleus {
            base: base.clone(),
            table: base.lattice().elements().collect(),
            lax: true,
        }
    }

    pub fn base(&self) -> &FSupLattice {
        &self.base
    }

    pub fn table(&self) -> &[Element] {
        &self.table
    }

    pub fn apply(&self, x: Element) -> Element {
        self.table[x.0]
    }

    pub fn is_lax(&self) -> bool {
        self.lax
    }

    pub fn fixpoints(&self) -> Vec<Element> {
        self.base
            .lattice()
            .elements()
            .filter(|&x| self.apply(x) == x)
            .collect()
    }
}

/// The least closure operator above `j`, by iterating `j` from each element.
pub fn nucleus_closure(j: &Prenucleus) -> Nucleus {
    let g = j.base.lattice();
    let table = g
        .elements()
        .map(|x| {
            let mut y = x;
            loop {
                let next = j.apply(y);
                if next == y {
                    return y;
                }
                y = next;
            }
        })
        .collect::<Vec<_>>();
    let lax = is_lax_operator(&j.base, &table);
    Nucleus {
        base: j.base.clone(),
        table,
        lax,
    }
}

/// The fixpoint lattice of a nucleus with its projection and induced operator.
#[derive(Debug, Clone)]
pub struct QuotientLattice {
    nucleus: Nucleus,
    carrier: FSupLattice,
    fixpoints: Vec<Element>,
    class_of: Vec<Element>,
}

/// Quotients `H` by a lax nucleus on it.
pub fn quotient(h: &FSupLattice, n: &Nucleus) -> Result<QuotientLattice> {
    if n.base != *h {
        return Err(Error::CarrierMismatch(
            "nucleus is defined on a different F-sup-semilattice".into(),
        ));
    }
    let g = h.lattice();
    if let Some(x) = g
        .elements()
        .find(|&x| !g.leq(h.f(n.apply(x)), n.apply(h.f(x))))
    {
        return Err(Error::NotLax(g.label(x).to_string()));
    }
    let fixpoints = n.fixpoints();
    let lattice = match g.coordinates() {
        Some((base, nodes)) => {
            let reps: Vec<Tuple> = fixpoints
                .iter()
                .map(|&x| g.tuple(x).expect("coordinates imply tuples"))
                .collect();
            SupLattice::from_fixpoints(base, nodes.to_vec(), reps)
        }
        None => g.sub_lattice(&fixpoints)?,
    };
    let mut class_of = vec![Element(usize::MAX); g.len()];
    for (q, &x) in fixpoints.iter().enumerate() {
        class_of[x.0] = Element(q);
    }
    for x in g.elements() {
        class_of[x.0] = class_of[n.apply(x).0];
    }
    let op = fixpoints
        .iter()
        .map(|&x| class_of[n.apply(h.f(x)).0])
        .collect();
    let carrier = FSupLattice::new(&lattice, op)?;
    Ok(QuotientLattice {
        nucleus: n.clone(),
        carrier,
        fixpoints,
        class_of,
    })
}

impl QuotientLattice {
    pub fn nucleus(&self) -> &Nucleus {
        &self.nucleus
    }

    pub fn base(&self) -> &FSupLattice {
        self.nucleus.base()
    }

    /// The quotient with its induced operator `n ∘ F`.
    pub fn carrier(&self) -> &FSupLattice {
        &self.carrier
    }

    pub fn lattice(&self) -> &SupLattice {
        self.carrier.lattice()
    }

    pub fn len(&self) -> usize {
        self.fixpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The base element standing for a quotient element.
    pub fn fixpoint(&self, q: Element) -> Element {
        self.fixpoints[q.0]
    }

    pub fn fixpoints(&self) -> &[Element] {
        &self.fixpoints
    }

    pub fn project(&self, x: Element) -> Element {
        self.class_of[x.0]
    }

    pub fn projection(&self) -> JoinHom {
        JoinHom::trusted(self.base().lattice(), self.lattice(), self.class_of.clone())
    }

    /// Exhaustively checks that the projection is a surjective F-homomorphism
    /// onto the quotient, that joins there are `n` of base joins, and that the
    /// inclusion of fixpoints reflects `F(a) <= a'`.
    pub fn verify(&self) -> Result<()> {
        let h = self.base();
        let g = h.lattice();
        let q = self.lattice();
        let proj = self.projection();
        crate::morphisms::is_join_hom(proj.table(), g, q)?
            .then_some(())
            .ok_or_else(|| Error::law("projection preserves joins", "some pair"))?;
        for x in g.elements() {
            if self.carrier.f(self.project(x)) != self.project(h.f(x)) {
                return Err(Error::law(
                    "projection is an F-homomorphism",
                    g.label(x).to_string(),
                ));
            }
        }
        for a in q.elements() {
            if self.project(self.fixpoint(a)) != a {
                return Err(Error::law("projection is surjective", q.label(a).to_string()));
            }
            for b in q.elements() {
                let base_join = self.nucleus.apply(g.join(self.fixpoint(a), self.fixpoint(b)));
                if self.fixpoint(q.join(a, b)) != base_join {
                    return Err(Error::law(
                        "quotient join is n of base join",
                        format!("({}, {})", q.label(a), q.label(b)),
                    ));
                }
                // Inclusion: F(i(a)) <= i(b) implies F'(a) <= b.
                if g.leq(h.f(self.fixpoint(a)), self.fixpoint(b)) && !q.leq(self.carrier.f(a), b) {
                    return Err(Error::law(
                        "inclusion of fixpoints satisfies the reflection condition",
                        format!("({}, {})", q.label(a), q.label(b)),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The unique `ḡ` with `ḡ ∘ n = g`, for `g` identifying every pair of `pairs`.
pub fn factor_through(q: &QuotientLattice, g: &JoinHom, pairs: &[(Element, Element)]) -> Result<JoinHom> {
    let base = q.base().lattice();
    if g.source() != base {
        return Err(Error::CarrierMismatch(
            "map does not start at the quotiented lattice".into(),
        ));
    }
    check_pairs(base, pairs)?;
    if let Some(&(c, d)) = pairs.iter().find(|&&(c, d)| g.apply(c) != g.apply(d)) {
        return Err(Error::NotConstantOnX(
            base.label(c).to_string(),
            base.label(d).to_string(),
        ));
    }
    if let Some(x) = base
        .elements()
        .find(|&x| g.apply(x) != g.apply(q.nucleus.apply(x)))
    {
        return Err(Error::FiberConflict(base.label(x).to_string()));
    }
    let table = q.fixpoints.iter().map(|&x| g.apply(x)).collect();
    JoinHom::new(q.lattice(), g.target(), table)
}

/// An equivalence relation on an F-sup-semilattice, stored as blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    base: FSupLattice,
    block_of: Vec<usize>,
    blocks: Vec<Vec<Element>>,
}

impl Congruence {
    /// Validates that `blocks` partition the carrier and that related pairs
    /// are closed under joins and under `F`.
    pub fn from_blocks(base: &FSupLattice, blocks: Vec<Vec<Element>>) -> Result<Self> {
        let g = base.lattice();
        let mut block_of = vec![usize::MAX; g.len()];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                g.check(x)?;
                if block_of[x.0] != usize::MAX {
                    return Err(Error::NotACongruence(format!(
                        "`{}` lies in two blocks",
                        g.label(x)
                    )));
                }
                block_of[x.0] = b;
            }
        }
        if let Some(x) = g.elements().find(|x| block_of[x.0] == usize::MAX) {
            return Err(Error::NotACongruence(format!("`{}` lies in no block", g.label(x))));
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        let theta = Congruence {
            base: base.clone(),
            block_of,
            blocks,
        };
        theta.check_compatible()?;
        Ok(theta)
    }

    fn check_compatible(&self) -> Result<()> {
        let g = self.base.lattice();
        for block in &self.blocks {
            let (first, rest) = block.split_first().expect("blocks are nonempty");
            for &y in rest {
                if !self.related(self.base.f(*first), self.base.f(y)) {
                    return Err(Error::NotACongruence(format!(
                        "`{}` and `{}` are related but their F-images are not",
                        g.label(*first),
                        g.label(y)
                    )));
                }
                // Joining one related pair with any element stays related; with
                // transitivity this gives closure under joins of related families.
                for z in g.elements() {
                    if !self.related(g.join(*first, z), g.join(y, z)) {
                        return Err(Error::NotACongruence(format!(
                            "`{}` and `{}` are related but their joins with `{}` are not",
                            g.label(*first),
                            g.label(y),
                            g.label(z)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FSupLattice {
        &self.base
    }

    pub fn blocks(&self) -> &[Vec<Element>] {
        &self.blocks
    }

    pub fn related(&self, a: Element, b: Element) -> bool {
        self.block_of[a.0] == self.block_of[b.0]
    }

    /// The congruence identifying everything.
    pub fn indiscrete(base: &FSupLattice) -> Self {
        let g = base.lattice();
        Congruence {
            base: base.clone(),
            block_of: vec![0; g.len()],
            blocks: vec![g.elements().collect()],
        }
    }

    /// The equality relation.
    pub fn discrete(base: &FSupLattice) -> Self {
        let g = base.lattice();
        Congruence {
            base: base.clone(),
            block_of: (0..g.len()).collect(),
            blocks: g.elements().map(|x| vec![x]).collect(),
        }
    }
}

/// `a θ b` iff `n(a) = n(b)`; blocks are listed by their closed element.
pub fn nucleus_to_congruence(n: &Nucleus) -> Congruence {
    let g = n.base.lattice();
    let fix = n.fixpoints();
    let mut block_of = vec![0; g.len()];
    let mut blocks = vec![Vec::new(); fix.len()];
    for x in g.elements() {
        let b = fix.binary_search(&n.apply(x)).expect("closed element is a fixpoint");
        block_of[x.0] = b;
        blocks[b].push(x);
    }
    Congruence {
        base: n.base.clone(),
        block_of,
        blocks,
    }
}

/// `j(x) = ⋁{y | x θ y}`.
pub fn congruence_to_nucleus(theta: &Congruence) -> Result<Nucleus> {
    theta.check_compatible()?;
    let g = theta.base.lattice();
    let tops: Vec<Element> = theta
        .blocks
        .iter()
        .map(|b| g.join_all(b.iter().copied()))
        .collect();
    let table = g.elements().map(|x| tops[theta.block_of[x.0]]).collect();
    Nucleus::new(&theta.base, table).map_err(|e| Error::NotACongruence(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{power_lattice, validate_lattice};

    fn diamond_swap() -> FSupLattice {
        let g = validate_lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap();
        let e = |s| g.element(s).unwrap();
        FSupLattice::new(&g, vec![e("0"), e("a"), e("c"), e("b"), e("1")]).unwrap()
    }

    #[test]
    fn empty_and_reflexive_pairs_give_identity() {
        let h = diamond_swap();
        let g = h.lattice();
        let id: Vec<Element> = g.elements().collect();
        assert_eq!(prenucleus_from_pairs(&h, &[]).unwrap().table(), &id[..]);
        for p in g.elements() {
            assert_eq!(prenucleus_from_pairs(&h, &[(p, p)]).unwrap().table(), &id[..]);
        }
    }

    #[test]
    fn identifying_two_atoms_collapses_to_a_chain() {
        let h = diamond_swap();
        let g = h.lattice();
        let e = |s| g.element(s).unwrap();
        let j = prenucleus_from_pairs(&h, &[(e("b"), e("c"))]).unwrap();
        assert_eq!(j.pairs_closed(), Some(false));
        let n = nucleus_closure(&j);
        assert_eq!(n.apply(e("b")), e("1"));
        assert_eq!(n.fixpoints(), vec![e("0"), e("a"), e("1")]);
        let q = quotient(&h, &n).unwrap();
        q.verify().unwrap();
        assert_eq!(q.len(), 3);
        let theta = nucleus_to_congruence(&n);
        assert_eq!(theta.blocks().len(), 3);
        assert_eq!(congruence_to_nucleus(&theta).unwrap(), n);
    }

    #[test]
    fn discrete_and_indiscrete_congruences() {
        let h = diamond_swap();
        let g = h.lattice();
        let id = congruence_to_nucleus(&Congruence::discrete(&h)).unwrap();
        assert_eq!(id, Nucleus::identity(&h));
        let top = congruence_to_nucleus(&Congruence::indiscrete(&h)).unwrap();
        assert!(g.elements().all(|x| top.apply(x) == g.top()));
        assert_eq!(nucleus_to_congruence(&id), Congruence::discrete(&h));
    }

    #[test]
    fn non_congruence_is_rejected() {
        let h = diamond_swap();
        let g = h.lattice();
        let e = |s| g.element(s).unwrap();
        // {0,a} together forces a ∨ b = 1 ~ b.
        let err = Congruence::from_blocks(
            &h,
            vec![vec![e("0"), e("a")], vec![e("b")], vec![e("c")], vec![e("1")]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotACongruence(_)));
    }

    #[test]
    fn identity_quotient_is_isomorphic() {
        let h = diamond_swap();
        let q = quotient(&h, &Nucleus::identity(&h)).unwrap();
        q.verify().unwrap();
        assert_eq!(q.len(), 5);
        assert_eq!(q.carrier().op().table(), h.op().table());
    }

    #[test]
    fn factor_projection_is_identity() {
        let h = diamond_swap();
        let g = h.lattice();
        let e = |s| g.element(s).unwrap();
        let pairs = [(e("b"), e("c"))];
        let n = nucleus_closure(&prenucleus_from_pairs(&h, &pairs).unwrap());
        let q = quotient(&h, &n).unwrap();
        let bar = factor_through(&q, &q.projection(), &pairs).unwrap();
        assert_eq!(bar, JoinHom::identity(q.lattice()));
        let not_constant = JoinHom::identity(g);
        assert!(matches!(
            factor_through(&q, &not_constant, &pairs).unwrap_err(),
            Error::NotConstantOnX(..)
        ));
    }

    #[test]
    fn quotient_of_power_keeps_tuples() {
        let two = SupLattice::two();
        let p = power_lattice(&two, &["x", "y"]).unwrap();
        let h = FSupLattice::plain(&p);
        let e = |s| p.element(s).unwrap();
        let n = nucleus_closure(&prenucleus_from_pairs(&h, &[(e("(1,0)"), e("(0,0)"))]).unwrap());
        let q = quotient(&h, &n).unwrap();
        // Classes are named by their largest member.
        assert_eq!(q.lattice().labels(), &["(1,0)", "(1,1)"]);
        assert!(q.lattice().tuple(Element(1)).is_some());
    }

    #[test]
    fn non_lax_nucleus_has_no_quotient() {
        let two = SupLattice::two();
        let p = power_lattice(&two, &["x", "y"]).unwrap();
        let e = |s| p.element(s).unwrap();
        // F swaps coordinates; collapsing only the first coordinate is not lax.
        let h = FSupLattice::new(&p, vec![e("(0,0)"), e("(1,0)"), e("(0,1)"), e("(1,1)")]).unwrap();
        let n = nucleus_closure(&prenucleus_from_pairs(&h, &[(e("(1,0)"), e("(0,0)"))]).unwrap());
        assert!(!n.is_lax());
        assert!(matches!(quotient(&h, &n).unwrap_err(), Error::NotLax(_)));
    }
}
