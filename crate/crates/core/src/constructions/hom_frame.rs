//! `J[H,L]`: the frame of join-preserving maps `G -> L`, with
//! `α S β` iff `β(x) <= α(F(x))` for every `x ∈ G`.

use crate::error::{Error, Result};
use crate::frames::{Frame, FrameHom};
use crate::lattice::{Element, SupLattice};
use crate::morphisms::{enumerate_join_homs, is_lax_morphism, FSupLattice, JoinHom};

/// The hom-frame together with the homs its nodes stand for.
#[derive(Debug, Clone)]
pub struct HomFrame {
    fss: FSupLattice,
    target: SupLattice,
    homs: Vec<JoinHom>,
    frame: Frame,
}

/// Node label of a hom: its value tuple in source element order.
pub fn hom_label(h: &JoinHom) -> String {
    format!("[{}]", h.value_labels().join(","))
}

/// Builds `J[H,L]`; nodes follow the canonical hom order.
pub fn hom_frame(fss: &FSupLattice, target: &SupLattice) -> Result<HomFrame> {
    let g = fss.lattice();
    let homs = enumerate_join_homs(g, target)?;
    // α∘F for every α, then α S β iff β <= α∘F pointwise.
    let shifted: Vec<Vec<Element>> = homs
        .iter()
        .map(|a| g.elements().map(|x| a.apply(fss.f(x))).collect())
        .collect();
    let mut rel = Vec::new();
    for (i, af) in shifted.iter().enumerate() {
        for (k, b) in homs.iter().enumerate() {
            if g.elements().all(|x| target.leq(b.apply(x), af[x.0])) {
                rel.push((i, k));
            }
        }
    }
    let frame = Frame::from_parts(homs.iter().map(hom_label).collect(), rel);
    Ok(HomFrame {
        fss: fss.clone(),
        target: target.clone(),
        homs,
        frame,
    })
}

impl HomFrame {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn fss(&self) -> &FSupLattice {
        &self.fss
    }

    pub fn target(&self) -> &SupLattice {
        &self.target
    }

    pub fn homs(&self) -> &[JoinHom] {
        &self.homs
    }

    pub fn hom(&self, node: usize) -> &JoinHom {
        &self.homs[node]
    }

    pub fn len(&self) -> usize {
        self.homs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homs.is_empty()
    }

    /// Node of the hom with the given value table.
    pub fn node_of(&self, table: &[Element]) -> Option<usize> {
        self.homs
            .binary_search_by(|h| h.table().cmp(table))
            .ok()
    }

    fn require_node(&self, table: &[Element]) -> Result<usize> {
        self.node_of(table).ok_or_else(|| {
            let labels: Vec<&str> = table.iter().map(|&y| self.target.label(y)).collect();
            Error::law(
                "image is a join-preserving map",
                format!("[{}]", labels.join(",")),
            )
        })
    }

    /// `J[H,f]` into `target = J[H,L2]`: `α ↦ f ∘ α`.
    pub fn map_cod(&self, f: &JoinHom, target: &HomFrame) -> Result<FrameHom> {
        if f.source() != &self.target || f.target() != &target.target || self.fss != target.fss {
            return Err(Error::CarrierMismatch(
                "map does not connect the hom-frame codomains".into(),
            ));
        }
        let table = self
            .homs
            .iter()
            .map(|a| target.require_node(f.after(a)?.table()))
            .collect::<Result<Vec<_>>>()?;
        FrameHom::new(&self.frame, &target.frame, table)
            .map_err(|e| Error::law("J[H,f] preserves the relation", e.to_string()))
    }

    /// `J[f,L]` from `self = J[H2,L]` into `target = J[H1,L]`: `β ↦ β ∘ f`.
    pub fn map_dom(&self, f: &JoinHom, target: &HomFrame) -> Result<FrameHom> {
        if f.source() != target.fss.lattice() || f.target() != self.fss.lattice() || self.target != target.target {
            return Err(Error::CarrierMismatch(
                "map does not connect the hom-frame domains".into(),
            ));
        }
        if !is_lax_morphism(f, &target.fss, &self.fss)? {
            return Err(Error::NotLax("J[f,L] needs a lax morphism".into()));
        }
        let table = self
            .homs
            .iter()
            .map(|b| target.require_node(b.after(f)?.table()))
            .collect::<Result<Vec<_>>>()?;
        FrameHom::new(&self.frame, &target.frame, table)
            .map_err(|e| Error::law("J[f,L] preserves the relation", e.to_string()))
    }
}

/// `J[H,f]: J[H,L1] -> J[H,L2]`.
pub fn hom_frame_map_cod(fss: &FSupLattice, f: &JoinHom) -> Result<FrameHom> {
    let source = hom_frame(fss, f.source())?;
    let target = hom_frame(fss, f.target())?;
    source.map_cod(f, &target)
}

/// `J[f,L]: J[H2,L] -> J[H1,L]` for a lax `f: H1 -> H2`.
pub fn hom_frame_map_dom(f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice, target: &SupLattice) -> Result<FrameHom> {
    let source = hom_frame(h2, target)?;
    let dest = hom_frame(h1, target)?;
    source.map_dom(f, &dest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_lattice;

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
    fn diamond_into_two() {
        let hf = hom_frame(&diamond_swap(), &SupLattice::two()).unwrap();
        assert_eq!(hf.len(), 5);
        let f = hf.frame();
        let n = |s: &str| f.node(s).unwrap();
        // Swapping b and c swaps the homs with kernels ↓b and ↓c.
        assert!(f.related(n("[0,1,0,1,1]"), n("[0,1,1,0,1]")));
        assert!(f.related(n("[0,0,1,1,1]"), n("[0,0,1,1,1]")));
        assert!(!f.related(n("[0,1,0,1,1]"), n("[0,1,0,1,1]")));
    }

    #[test]
    fn identity_operator_reverses_pointwise_order() {
        let two = SupLattice::two();
        let three = SupLattice::chain(&["0", "m", "1"]).unwrap();
        let hf = hom_frame(&FSupLattice::plain(&three), &two).unwrap();
        for (i, a) in hf.homs().iter().enumerate() {
            for (k, b) in hf.homs().iter().enumerate() {
                assert_eq!(hf.frame().related(i, k), b.leq(a));
            }
        }
    }

    #[test]
    fn singleton_target_has_one_reflexive_node() {
        let hf = hom_frame(&diamond_swap(), &SupLattice::singleton("0")).unwrap();
        assert_eq!(hf.len(), 1);
        assert_eq!(hf.frame().rel(), &[(0, 0)]);
    }

    #[test]
    fn identity_maps_give_identity_frame_homs() {
        let h = diamond_swap();
        let two = SupLattice::two();
        let cod = hom_frame_map_cod(&h, &JoinHom::identity(&two)).unwrap();
        assert_eq!(cod.table(), &[0, 1, 2, 3, 4]);
        let dom = hom_frame_map_dom(&JoinHom::identity(h.lattice()), &h, &h, &two).unwrap();
        assert_eq!(dom.table(), &[0, 1, 2, 3, 4]);
    }
}
