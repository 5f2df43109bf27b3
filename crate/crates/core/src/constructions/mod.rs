//! The three constructions — `L^J`, `J⊗H` and `J[H,L]` — and their actions
//! on morphisms.
//!
//! `L^J` is the power `L^T` with the frame operator
//! `(F^J(x))(i) = ⋁{x(k) | i S k}`. Maps between powers come from maps of
//! the base (`f^J`, pointwise) or of the frame (`L^t`, precomposition, and
//! its left adjoint `t^→`, joins over fibres).

pub mod hom_frame;
pub mod tensor;

use crate::error::{Error, Result};
use crate::frames::{Frame, FrameHom};
use crate::lattice::{power_lattice, Element, SupLattice, Tuple};
use crate::morphisms::{is_f_homomorphism, is_join_hom, lax_violation, FSupLattice, JoinHom};

pub use hom_frame::{hom_frame, hom_frame_map_cod, hom_frame_map_dom, HomFrame};
pub use tensor::{
    tensor, tensor_map_frame, tensor_map_fss, Coverage, TensorLattice, TensorMorphism, TensorNucleus,
};

/// Largest carrier on which join preservation is re-checked on every pair
/// after construction.
const PAIR_CHECK_LIMIT: usize = 512;

/// `(F^J(x))(i) = ⋁{x(k) | i S k}` on a single tuple.
pub fn frame_operator_tuple(lattice: &SupLattice, frame: &Frame, x: &Tuple) -> Tuple {
    Tuple(
        (0..frame.len())
            .map(|i| lattice.join_all(frame.successors(i).iter().map(|&k| x.get(k))))
            .collect(),
    )
}

/// `L^J`: the power `L^T` carrying the frame operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameOperatorLattice {
    base: SupLattice,
    frame: Frame,
    fss: FSupLattice,
}

impl FrameOperatorLattice {
    pub fn base(&self) -> &SupLattice {
        &self.base
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// The power with `F^J`.
    pub fn fss(&self) -> &FSupLattice {
        &self.fss
    }

    pub fn lattice(&self) -> &SupLattice {
        self.fss.lattice()
    }

    pub fn tuple(&self, x: Element) -> Tuple {
        self.lattice().tuple(x).expect("power elements are tuples")
    }

    pub fn element(&self, t: &Tuple) -> Element {
        self.lattice()
            .from_tuple(t)
            .expect("tuple over the base with one entry per node")
    }
}

/// Builds `L^J` and checks that `F^J` preserves joins.
pub fn frame_operator(lattice: &SupLattice, frame: &Frame) -> Result<FrameOperatorLattice> {
    let power = power_lattice(lattice, frame.nodes())?;
    let op: Vec<Element> = power
        .elements()
        .map(|x| {
            let t = power.tuple(x).expect("power elements are tuples");
            power
                .from_tuple(&frame_operator_tuple(lattice, frame, &t))
                .expect("image is a tuple of the power")
        })
        .collect();
    let fss = if power.len() <= PAIR_CHECK_LIMIT {
        FSupLattice::new(&power, op).map_err(|e| Error::law("frame operator preserves joins", e.to_string()))?
    } else {
        // Joins in a power are pointwise and each coordinate of F^J is a join
        // of coordinates, so preservation holds by construction; bottom is
        // still checked.
        if op[power.bottom().0] != power.bottom() {
            return Err(Error::law("frame operator preserves joins", "bottom"));
        }
        FSupLattice::trusted(&power, op)
    };
    Ok(FrameOperatorLattice {
        base: lattice.clone(),
        frame: frame.clone(),
        fss,
    })
}

/// `x_{iS}`: `x` at every `k` with `i S k`, bottom elsewhere.
pub fn indicator(lattice: &SupLattice, x: Element, frame: &Frame, i: usize) -> Result<Tuple> {
    lattice.check(x)?;
    if i >= frame.len() {
        return Err(Error::UnknownNode(format!("#{i}")));
    }
    Ok(Tuple(
        (0..frame.len())
            .map(|k| if frame.related(i, k) { x } else { lattice.bottom() })
            .collect(),
    ))
}

/// `x_{i=}`: `x` at `i`, bottom elsewhere.
pub fn indicator_eq(lattice: &SupLattice, x: Element, frame: &Frame, i: usize) -> Result<Tuple> {
    lattice.check(x)?;
    if i >= frame.len() {
        return Err(Error::UnknownNode(format!("#{i}")));
    }
    Ok(point_tuple(lattice, x, frame.len(), i))
}

pub(crate) fn point_tuple(lattice: &SupLattice, x: Element, arity: usize, i: usize) -> Tuple {
    let mut t = lattice.tuple_bottom(arity);
    t.0[i] = x;
    t
}

/// `(t^→(x))(k) = ⋁{x(i) | t(i) = k}` on a single tuple.
pub fn forward_tuple(lattice: &SupLattice, t: &FrameHom, x: &Tuple) -> Tuple {
    let mut out = lattice.tuple_bottom(t.target().len());
    for (i, &k) in t.table().iter().enumerate() {
        out.0[k] = lattice.join(out.0[k], x.get(i));
    }
    out
}

/// `(L^t(x))(i) = x(t(i))` on a single tuple.
pub fn backward_tuple(t: &FrameHom, x: &Tuple) -> Tuple {
    Tuple(t.table().iter().map(|&k| x.get(k)).collect())
}

/// `f^J: L1^J -> L2^J`, applied pointwise; checked to be an F-homomorphism.
pub fn hom_power_map(f: &JoinHom, frame: &Frame) -> Result<JoinHom> {
    let src = frame_operator(f.source(), frame)?;
    let dst = frame_operator(f.target(), frame)?;
    hom_power_map_between(f, &src, &dst)
}

pub(crate) fn hom_power_map_between(
    f: &JoinHom,
    src: &FrameOperatorLattice,
    dst: &FrameOperatorLattice,
) -> Result<JoinHom> {
    if src.base() != f.source() || dst.base() != f.target() || src.frame() != dst.frame() {
        return Err(Error::CarrierMismatch(
            "powers do not match the map and frame".into(),
        ));
    }
    let table = src
        .lattice()
        .elements()
        .map(|x| dst.element(&Tuple(src.tuple(x).iter().map(|y| f.apply(y)).collect())))
        .collect();
    let map = JoinHom::trusted(src.lattice(), dst.lattice(), table);
    if !is_f_homomorphism(&map, src.fss(), dst.fss())? {
        return Err(Error::law("f^J is an F-homomorphism", "some tuple"));
    }
    Ok(map)
}

/// `L^t: L^{J2} -> L^{J1}` for `t: J1 -> J2`; checked to be lax.
pub fn backward_powerset(lattice: &SupLattice, t: &FrameHom) -> Result<JoinHom> {
    let src = frame_operator(lattice, t.target())?;
    let dst = frame_operator(lattice, t.source())?;
    backward_powerset_between(t, &src, &dst)
}

pub(crate) fn backward_powerset_between(
    t: &FrameHom,
    src: &FrameOperatorLattice,
    dst: &FrameOperatorLattice,
) -> Result<JoinHom> {
    if src.frame() != t.target() || dst.frame() != t.source() || src.base() != dst.base() {
        return Err(Error::CarrierMismatch(
            "powers do not match the frame map".into(),
        ));
    }
    let table = src
        .lattice()
        .elements()
        .map(|x| dst.element(&backward_tuple(t, &src.tuple(x))))
        .collect();
    let map = JoinHom::trusted(src.lattice(), dst.lattice(), table);
    if let Some(x) = lax_violation(&map, src.fss(), dst.fss())? {
        return Err(Error::law("L^t is lax", src.lattice().label(x).to_string()));
    }
    Ok(map)
}

/// `t^→: L^{T1} -> L^{T2}`; checked to be left adjoint to `L^t` on all pairs.
pub fn forward_powerset(t: &FrameHom, lattice: &SupLattice) -> Result<JoinHom> {
    let src = power_lattice(lattice, t.source().nodes())?;
    let dst = power_lattice(lattice, t.target().nodes())?;
    let tuple = |p: &SupLattice, x| p.tuple(x).expect("power elements are tuples");
    let table: Vec<Element> = src
        .elements()
        .map(|x| {
            dst.from_tuple(&forward_tuple(lattice, t, &tuple(&src, x)))
                .expect("image is a tuple of the power")
        })
        .collect();
    if !is_join_hom(&table, &src, &dst)? {
        return Err(Error::law("t^→ preserves joins", "some pair"));
    }
    let back: Vec<Element> = dst
        .elements()
        .map(|y| {
            src.from_tuple(&backward_tuple(t, &tuple(&dst, y)))
                .expect("image is a tuple of the power")
        })
        .collect();
    for x in src.elements() {
        for y in dst.elements() {
            if dst.leq(table[x.0], y) != src.leq(x, back[y.0]) {
                return Err(Error::law(
                    "t^→ is left adjoint to L^t",
                    format!("({}, {})", src.label(x), dst.label(y)),
                ));
            }
        }
    }
    Ok(JoinHom::trusted(&src, &dst, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::make_frame;
    use crate::lattice::validate_lattice;

    fn j3() -> Frame {
        make_frame(&["f2", "f3", "f4"], &[("f2", "f3"), ("f3", "f2"), ("f4", "f4")]).unwrap()
    }

    fn diamond() -> SupLattice {
        validate_lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap()
    }

    #[test]
    fn frame_operator_on_cube_swaps_first_two_coordinates() {
        let two = SupLattice::two();
        let lj = frame_operator(&two, &j3()).unwrap();
        let p = lj.lattice();
        let e = |s| p.element(s).unwrap();
        assert_eq!(lj.fss().f(e("(1,0,0)")), e("(0,1,0)"));
        assert_eq!(lj.fss().f(e("(1,0,1)")), e("(0,1,1)"));
        assert_eq!(lj.fss().f(e("(0,0,1)")), e("(0,0,1)"));
    }

    #[test]
    fn empty_relation_gives_zero_operator_and_diagonal_identity() {
        let two = SupLattice::two();
        let empty = make_frame::<&str>(&["x", "y"], &[]).unwrap();
        let lj = frame_operator(&two, &empty).unwrap();
        assert!(lj.lattice().elements().all(|x| lj.fss().f(x) == lj.lattice().bottom()));
        let diag = make_frame(&["x", "y"], &[("x", "x"), ("y", "y")]).unwrap();
        let lj = frame_operator(&two, &diag).unwrap();
        assert!(lj.lattice().elements().all(|x| lj.fss().f(x) == x));
    }

    #[test]
    fn indicators() {
        let g = diamond();
        let j = j3();
        let e = |s| g.element(s).unwrap();
        assert_eq!(g.format_tuple(&indicator(&g, e("a"), &j, 0).unwrap()), "(0,a,0)");
        assert_eq!(g.format_tuple(&indicator_eq(&g, e("c"), &j, 0).unwrap()), "(c,0,0)");
        let single = make_frame::<&str>(&["*"], &[]).unwrap();
        assert_eq!(indicator_eq(&g, e("b"), &single, 0).unwrap(), Tuple(vec![e("b")]));
        assert!(matches!(indicator(&g, e("a"), &j, 9).unwrap_err(), Error::UnknownNode(_)));
    }

    #[test]
    fn collapse_maps() {
        let two = SupLattice::two();
        let j = j3();
        let point = make_frame(&["*"], &[("*", "*")]).unwrap();
        let t = FrameHom::new(&j, &point, vec![0, 0, 0]).unwrap();
        let back = backward_powerset(&two, &t).unwrap();
        assert_eq!(back.value_labels(), vec!["(0,0,0)", "(1,1,1)"]);
        let fwd = forward_powerset(&t, &two).unwrap();
        assert_eq!(fwd.apply(fwd.source().element("(0,1,0)").unwrap()), fwd.target().top());
    }

    #[test]
    fn power_map_of_chain_embedding() {
        let g = diamond();
        let two = SupLattice::two();
        let f = JoinHom::from_labels(&two, &g, &[("0", "0"), ("1", "1")]).unwrap();
        let fj = hom_power_map(&f, &j3()).unwrap();
        let x = fj.source().element("(1,0,1)").unwrap();
        assert_eq!(fj.target().label(fj.apply(x)), "(1,0,1)");
        let id = hom_power_map(&JoinHom::identity(&g), &j3()).unwrap();
        assert_eq!(id, JoinHom::identity(id.source()));
    }
}
