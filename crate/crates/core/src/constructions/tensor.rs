//! `J⊗H`: the quotient of `G^T` that turns the operator `F` of `H` into the
//! frame structure of `J`.
//!
//! The identified pairs are
//! `[J,H] = {(x_{iS} ∨ F(x)_{i=}, F(x)_{i=}) | x ∈ G, i ∈ T}` and the quotient
//! is taken by the closure of the prenucleus `j[J,H]`. Nothing here needs
//! `G^T` itself: tuples are closed one at a time and the carrier is the set
//! of closed tuples reachable from the closed bottom by joining generators
//! `x_{i=}`. That keeps `J⊗H` usable when `G^T` is far larger than the
//! quotient (for instance when `T` is a hom-frame with hundreds of nodes).

use std::collections::{HashSet, VecDeque};

use crate::constructions::{forward_tuple, frame_operator_tuple, point_tuple};
use crate::error::{Error, Result};
use crate::frames::{Frame, FrameHom};
use crate::lattice::{carrier_cap, power_lattice, power_size, Element, SupLattice, Tuple};
use crate::morphisms::{is_lax_morphism, FSupLattice, JoinHom};

/// Tuple spaces up to this size are checked element by element; larger ones
/// are checked on the generating pairs.
pub const EXHAUSTIVE_LIMIT: usize = 1 << 16;

/// Largest carrier whose maps get a full pairwise join re-check.
const PAIR_CHECK_LIMIT: usize = 512;

/// How much of a tuple space a well-definedness check looked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// Every tuple of `G^T` was compared with its closure.
    Exhaustive(usize),
    /// The map was compared on both sides of every generating pair; for a
    /// join-preserving map this implies constancy on every class.
    Generators(usize),
}

impl Coverage {
    pub fn checked(self) -> usize {
        match self {
            Coverage::Exhaustive(n) | Coverage::Generators(n) => n,
        }
    }
}

/// The closure operator `n(j[J,H])` on `G^T`, evaluated tuple by tuple.
#[derive(Debug, Clone)]
pub struct TensorNucleus {
    fss: FSupLattice,
    frame: Frame,
    /// `gain[v] = ⋁{x | F(x) <= v}`: what the pairs of `[J,H]` anchored at a
    /// node whose value is `v` push to that node's successors.
    gain: Vec<Element>,
}

impl TensorNucleus {
    pub fn new(frame: &Frame, fss: &FSupLattice) -> Result<Self> {
        if frame.is_empty() {
            return Err(Error::EmptyNodeSet);
        }
        let g = fss.lattice();
        let gain = g
            .elements()
            .map(|v| g.join_all(g.elements().filter(|&x| g.leq(fss.f(x), v))))
            .collect();
        Ok(TensorNucleus {
            fss: fss.clone(),
            frame: frame.clone(),
            gain,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn fss(&self) -> &FSupLattice {
        &self.fss
    }

    pub fn lattice(&self) -> &SupLattice {
        self.fss.lattice()
    }

    pub fn arity(&self) -> usize {
        self.frame.len()
    }

    /// The pairs `[J,H]` in `x`-major, node-minor order.
    pub fn pairs(&self) -> Vec<(Tuple, Tuple)> {
        let g = self.lattice();
        g.elements()
            .flat_map(|x| (0..self.arity()).map(move |i| (x, i)))
            .map(|(x, i)| self.pair(x, i))
            .collect()
    }

    /// `(x_{iS} ∨ F(x)_{i=}, F(x)_{i=})`.
    pub fn pair(&self, x: Element, i: usize) -> (Tuple, Tuple) {
        let g = self.lattice();
        let lower = point_tuple(g, self.fss.f(x), self.arity(), i);
        let mut upper = lower.clone();
        for &k in self.frame.successors(i) {
            upper.0[k] = g.join(upper.0[k], x);
        }
        (upper, lower)
    }

    /// One application of `j[J,H]`, straight from the pair list.
    pub fn step(&self, a: &Tuple) -> Tuple {
        let g = self.lattice();
        let mut acc = a.clone();
        for (c, d) in self.pairs() {
            if g.tuple_leq(&d, a) {
                g.tuple_join_into(&mut acc, &c);
            }
            if g.tuple_leq(&c, a) {
                g.tuple_join_into(&mut acc, &d);
            }
        }
        acc
    }

    /// The least closed tuple above `a`.
    ///
    /// A pair anchored at `(x, i)` fires when `F(x) <= a(i)` and then raises
    /// every successor of `i` to at least `x`; its other orientation never
    /// adds anything because the lower side lies below the upper one. So the
    /// closure raises `a(k)` by `gain[a(i)]` along every `i S k` until
    /// nothing changes.
    pub fn close(&self, a: &Tuple) -> Tuple {
        let g = self.lattice();
        let mut a = a.clone();
        let n = self.arity();
        let mut queued = vec![true; n];
        let mut work: Vec<usize> = (0..n).rev().collect();
        while let Some(i) = work.pop() {
            queued[i] = false;
            let push = self.gain[a.0[i].0];
            for &k in self.frame.successors(i) {
                let next = g.join(a.0[k], push);
                if next != a.0[k] {
                    a.0[k] = next;
                    if !queued[k] {
                        queued[k] = true;
                        work.push(k);
                    }
                }
            }
        }
        a
    }

    pub fn is_closed(&self, a: &Tuple) -> bool {
        let g = self.lattice();
        self.frame
            .rel()
            .iter()
            .all(|&(i, k)| g.leq(self.gain[a.0[i].0], a.0[k]))
    }

    /// `x_{i=}` for every `x` and node, the join-generators of `G^T`.
    pub fn generators(&self) -> Vec<Tuple> {
        let g = self.lattice();
        g.elements()
            .flat_map(|x| (0..self.arity()).map(move |i| point_tuple(g, x, self.arity(), i)))
            .collect()
    }

    /// Whether `[J,H]` is closed under `F^J × F^J`, reading `G^T` as the
    /// frame-operator power of `G`.
    pub fn pairs_closed_under_frame_operator(&self) -> bool {
        let g = self.lattice();
        let pairs = self.pairs();
        let set: HashSet<&(Tuple, Tuple)> = pairs.iter().collect();
        pairs.iter().all(|(c, d)| {
            let image = (
                frame_operator_tuple(g, &self.frame, c),
                frame_operator_tuple(g, &self.frame, d),
            );
            set.contains(&image)
        })
    }

    /// Checks that `g ∘ n = g` for a join-preserving `g` defined on `G^T`.
    ///
    /// Small tuple spaces are checked on every tuple. Otherwise `g` is
    /// compared on both sides of every pair of `[J,H]`: if `g(c) = g(d)` there,
    /// then `g(j(a)) = g(a)` for all `a`, hence `g ∘ n = g`.
    pub fn check_constant_on_classes<R: PartialEq>(&self, g: impl Fn(&Tuple) -> R) -> Result<Coverage> {
        let lattice = self.lattice();
        let size = power_size(lattice.len(), self.arity());
        if size <= EXHAUSTIVE_LIMIT as u128 {
            let mut conflict = None;
            lattice.for_each_tuple(self.arity(), |a| {
                if conflict.is_none() && g(a) != g(&self.close(a)) {
                    conflict = Some(lattice.format_tuple(a));
                }
            });
            return match conflict {
                Some(w) => Err(Error::FiberConflict(w)),
                None => Ok(Coverage::Exhaustive(size as usize)),
            };
        }
        let pairs = self.pairs();
        for (c, d) in &pairs {
            if g(c) != g(d) {
                return Err(Error::NotConstantOnX(lattice.format_tuple(c), lattice.format_tuple(d)));
            }
        }
        Ok(Coverage::Generators(pairs.len()))
    }
}

/// `J⊗H` with its carrier of closed tuples.
#[derive(Debug, Clone)]
pub struct TensorLattice {
    nucleus: TensorNucleus,
    carrier: SupLattice,
    frame_operator_hypothesis: bool,
}

/// Builds `J⊗H`; fails when the quotient exceeds the carrier cap.
pub fn tensor(frame: &Frame, fss: &FSupLattice) -> Result<TensorLattice> {
    let nucleus = TensorNucleus::new(frame, fss)?;
    let g = fss.lattice();
    let arity = frame.len();
    let gens: Vec<Tuple> = g
        .join_irreducibles()
        .into_iter()
        .flat_map(|x| (0..arity).map(move |i| point_tuple(g, x, arity, i)))
        .collect();
    let cap = carrier_cap();
    let start = nucleus.close(&g.tuple_bottom(arity));
    let mut seen: HashSet<Tuple> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for gen in &gens {
            let next = nucleus.close(&g.tuple_join(&q, gen));
            if !seen.contains(&next) {
                seen.insert(next.clone());
                if seen.len() > cap {
                    return Err(Error::CarrierTooLarge {
                        what: "tensor product (at least)".into(),
                        size: seen.len() as u128,
                        cap,
                    });
                }
                queue.push_back(next);
            }
        }
    }
    let mut reps: Vec<Tuple> = seen.into_iter().collect();
    reps.sort_unstable();
    let carrier = SupLattice::from_fixpoints(g, frame.nodes().to_vec(), reps);
    let frame_operator_hypothesis = nucleus.pairs_closed_under_frame_operator();
    Ok(TensorLattice {
        nucleus,
        carrier,
        frame_operator_hypothesis,
    })
}

impl TensorLattice {
    pub fn nucleus(&self) -> &TensorNucleus {
        &self.nucleus
    }

    pub fn frame(&self) -> &Frame {
        self.nucleus.frame()
    }

    pub fn fss(&self) -> &FSupLattice {
        self.nucleus.fss()
    }

    pub fn lattice(&self) -> &SupLattice {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The closed tuple naming a class.
    pub fn rep(&self, q: Element) -> Tuple {
        self.carrier.tuple(q).expect("tensor elements are tuples")
    }

    /// The class of a tuple of `G^T`.
    pub fn project(&self, a: &Tuple) -> Element {
        self.carrier
            .from_tuple(&self.nucleus.close(a))
            .expect("closed tuples are carrier elements")
    }

    /// Whether the identified pairs are closed under the frame operator of
    /// `G^T` (recorded, not required).
    pub fn frame_operator_hypothesis(&self) -> bool {
        self.frame_operator_hypothesis
    }

    /// The projection `G^T -> J⊗H` as a table; needs `G^T` under the cap.
    pub fn projection(&self) -> Result<JoinHom> {
        let g = self.nucleus.lattice();
        let power = power_lattice(g, self.frame().nodes())?;
        let table = power
            .elements()
            .map(|x| self.project(&power.tuple(x).expect("power elements are tuples")))
            .collect();
        Ok(JoinHom::trusted(&power, &self.carrier, table))
    }

    /// Turns a join-preserving `g: G^T -> target` that is constant on classes
    /// into the induced map out of `J⊗H`.
    pub fn factor(&self, target: &SupLattice, g: impl Fn(&Tuple) -> Element) -> Result<(JoinHom, Coverage)> {
        let coverage = self.nucleus.check_constant_on_classes(&g)?;
        let table: Vec<Element> = self.carrier.elements().map(|q| g(&self.rep(q))).collect();
        let map = if self.len() <= PAIR_CHECK_LIMIT {
            JoinHom::new(&self.carrier, target, table)
                .map_err(|e| Error::law("induced map preserves joins", e.to_string()))?
        } else {
            JoinHom::trusted(&self.carrier, target, table)
        };
        Ok((map, coverage))
    }

    /// `t⊗H` into an already built `target = J2⊗H`.
    pub fn map_frame(&self, t: &FrameHom, target: &TensorLattice) -> Result<TensorMorphism> {
        if t.source() != self.frame() || t.target() != target.frame() || self.fss() != target.fss() {
            return Err(Error::CarrierMismatch(
                "frame map does not match the tensor products".into(),
            ));
        }
        let g = self.nucleus.lattice();
        let (map, coverage) = self.factor(target.lattice(), |a| target.project(&forward_tuple(g, t, a)))?;
        Ok(TensorMorphism {
            source: self.clone(),
            target: target.clone(),
            map,
            coverage,
        })
    }

    /// `J⊗f` into an already built `target = J⊗H2`, for a lax `f: H1 -> H2`.
    pub fn map_fss(&self, f: &JoinHom, target: &TensorLattice) -> Result<TensorMorphism> {
        if self.frame() != target.frame() {
            return Err(Error::CarrierMismatch(
                "tensor products are over different frames".into(),
            ));
        }
        if !is_lax_morphism(f, self.fss(), target.fss())? {
            return Err(Error::NotLax(
                "J⊗f needs a lax morphism of F-sup-semilattices".into(),
            ));
        }
        let (map, coverage) = self.factor(target.lattice(), |a| {
            target.project(&Tuple(a.iter().map(|x| f.apply(x)).collect()))
        })?;
        Ok(TensorMorphism {
            source: self.clone(),
            target: target.clone(),
            map,
            coverage,
        })
    }
}

/// A map between tensor products together with how its well-definedness was
/// established.
#[derive(Debug, Clone)]
pub struct TensorMorphism {
    pub source: TensorLattice,
    pub target: TensorLattice,
    pub map: JoinHom,
    pub coverage: Coverage,
}

/// `t⊗H: J1⊗H -> J2⊗H`, the unique map with `n2 ∘ t^→ = (t⊗H) ∘ n1`.
pub fn tensor_map_frame(t: &FrameHom, fss: &FSupLattice) -> Result<TensorMorphism> {
    let source = tensor(t.source(), fss)?;
    let target = tensor(t.target(), fss)?;
    source.map_frame(t, &target)
}

/// `J⊗f: J⊗H1 -> J⊗H2`, the unique map with `n2 ∘ f^J = (J⊗f) ∘ n1`.
pub fn tensor_map_fss(frame: &Frame, f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<TensorMorphism> {
    let source = tensor(frame, h1)?;
    let target = tensor(frame, h2)?;
    source.map_fss(f, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::make_frame;
    use crate::lattice::validate_lattice;
    use crate::nuclei::{nucleus_closure, prenucleus_from_pairs, quotient};

    fn j3() -> Frame {
        make_frame(&["f2", "f3", "f4"], &[("f2", "f3"), ("f3", "f2"), ("f4", "f4")]).unwrap()
    }

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
    fn fifteen_classes() {
        let t = tensor(&j3(), &diamond_swap()).unwrap();
        assert_eq!(t.len(), 15);
    }

    #[test]
    fn close_agrees_with_iterated_step() {
        let h = diamond_swap();
        let n = TensorNucleus::new(&j3(), &h).unwrap();
        h.lattice().for_each_tuple(3, |a| {
            let mut y = a.clone();
            loop {
                let next = n.step(&y);
                if next == y {
                    break;
                }
                y = next;
            }
            assert_eq!(n.close(a), y);
            assert!(n.is_closed(&y));
        });
    }

    #[test]
    fn agrees_with_explicit_quotient() {
        let h = diamond_swap();
        let j = j3();
        let t = tensor(&j, &h).unwrap();
        let power = power_lattice(h.lattice(), j.nodes()).unwrap();
        let plain = FSupLattice::plain(&power);
        let pairs: Vec<(Element, Element)> = t
            .nucleus()
            .pairs()
            .iter()
            .map(|(c, d)| (power.from_tuple(c).unwrap(), power.from_tuple(d).unwrap()))
            .collect();
        let n = nucleus_closure(&prenucleus_from_pairs(&plain, &pairs).unwrap());
        let q = quotient(&plain, &n).unwrap();
        assert_eq!(q.lattice().labels(), t.lattice().labels());
        assert_eq!(t.projection().unwrap().table(), q.projection().table());
    }

    #[test]
    fn diagonal_frame_with_identity_operator_is_the_whole_power() {
        let h = diamond_swap();
        let plain = FSupLattice::plain(h.lattice());
        let diag = make_frame(&["x", "y"], &[("x", "x"), ("y", "y")]).unwrap();
        assert_eq!(tensor(&diag, &plain).unwrap().len(), 25);
    }

    #[test]
    fn singleton_base_gives_singleton() {
        let one = FSupLattice::plain(&SupLattice::singleton("0"));
        assert_eq!(tensor(&j3(), &one).unwrap().len(), 1);
    }

    #[test]
    fn identity_frame_map_is_identity() {
        let h = diamond_swap();
        let j = j3();
        let m = tensor_map_frame(&FrameHom::identity(&j), &h).unwrap();
        assert_eq!(m.map, JoinHom::identity(m.source.lattice()));
        assert_eq!(m.coverage, Coverage::Exhaustive(125));
        let id = JoinHom::identity(h.lattice());
        let m = tensor_map_fss(&j, &id, &h, &h).unwrap();
        assert_eq!(m.map, JoinHom::identity(m.source.lattice()));
    }
}
