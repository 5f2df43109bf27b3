//! Algebraic invariants over randomly generated structures.

use proptest::prelude::*;

use fsl_core::constructions::{backward_powerset, frame_operator, forward_powerset, hom_frame, tensor};
use fsl_core::format::{parse_structure, render_structure, Structure};
use fsl_core::lattice::{with_carrier_cap, SupLattice};
use fsl_core::laws::brute_force_join_homs;
use fsl_core::morphisms::enumerate_join_homs;
use fsl_core::nuclei::{congruence_to_nucleus, nucleus_closure, nucleus_to_congruence, prenucleus_from_pairs, quotient};
use fsl_core::random::{self, rng_from_seed};
use fsl_core::table::TableArtifact;

const CAP: usize = 512;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn joins_are_least_upper_bounds(seed in any::<u64>()) {
        let l = random::lattice(&mut rng_from_seed(seed), 8);
        for a in l.elements() {
            for b in l.elements() {
                let j = l.join(a, b);
                prop_assert!(l.leq(a, j) && l.leq(b, j));
                prop_assert!(l.elements().all(|u| !(l.leq(a, u) && l.leq(b, u)) || l.leq(j, u)));
                prop_assert_eq!(l.join(b, a), j);
                let m = l.meet(a, b);
                prop_assert!(l.leq(m, a) && l.leq(m, b));
                prop_assert_eq!(l.join(a, m), a);
            }
        }
        prop_assert!(l.elements().all(|x| l.leq(l.bottom(), x) && l.leq(x, l.top())));
    }

    #[test]
    fn structure_files_round_trip(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let g = random::lattice(&mut rng, 6);
        let h = random::fss(&mut rng, &g).unwrap();
        let j = random::frame(&mut rng, 4);
        for s in [Structure::Lattice(g), Structure::Fss(h), Structure::Frame(j)] {
            let text = render_structure(&s);
            let back = parse_structure(&text).unwrap();
            prop_assert_eq!(render_structure(&back), text);
            prop_assert_eq!(back, s);
        }
    }

    #[test]
    fn enumeration_matches_brute_force(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let g = random::lattice(&mut rng, 5);
        let l = random::lattice(&mut rng, 4);
        let fast: Vec<_> = enumerate_join_homs(&g, &l).unwrap().iter().map(|f| f.table().to_vec()).collect();
        let mut slow = brute_force_join_homs(&g, &l).unwrap();
        slow.sort();
        let mut sorted = fast.clone();
        sorted.sort();
        prop_assert_eq!(sorted, slow);
    }

    #[test]
    fn nucleus_closure_and_congruences(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let g = random::lattice(&mut rng, 6);
        let h = random::fss(&mut rng, &g).unwrap();
        let elems: Vec<_> = g.elements().collect();
        let (c, d) = (elems[seed as usize % elems.len()], elems[(seed >> 8) as usize % elems.len()]);
        let mut pairs = vec![(c, d)];
        let mut k = 0;
        while k < pairs.len() {
            let image = (h.f(pairs[k].0), h.f(pairs[k].1));
            if !pairs.contains(&image) {
                pairs.push(image);
            }
            k += 1;
        }
        let pre = prenucleus_from_pairs(&h, &pairs).unwrap();
        prop_assert!(pre.is_lax());
        let n = nucleus_closure(&pre);
        for x in g.elements() {
            prop_assert!(g.leq(x, n.apply(x)));
            prop_assert_eq!(n.apply(n.apply(x)), n.apply(x));
            prop_assert!(g.leq(pre.apply(x), n.apply(x)));
        }
        prop_assert!(n.apply(c) == n.apply(d));
        let back = congruence_to_nucleus(&nucleus_to_congruence(&n)).unwrap();
        prop_assert_eq!(back.table(), n.table());
        let q = quotient(&h, &n).unwrap();
        prop_assert!(q.verify().is_ok());
        prop_assert_eq!(q.len(), n.fixpoints().len());
    }

    #[test]
    fn powerset_operators_are_adjoint(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let l = random::lattice(&mut rng, 3);
        let s = random::frame(&mut rng, 3);
        let t = random::frame(&mut rng, 3);
        if let Some(m) = random::frame_hom(&mut rng, &s, &t).unwrap() {
            let fwd = forward_powerset(&m, &l).unwrap();
            let bwd = backward_powerset(&l, &m).unwrap();
            let (src, dst) = (fwd.source(), fwd.target());
            for x in src.elements() {
                for y in dst.elements() {
                    prop_assert_eq!(dst.leq(fwd.apply(x), y), src.leq(x, bwd.apply(y)));
                }
            }
        }
    }

    #[test]
    fn frame_operator_and_hom_frame(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let l = random::lattice(&mut rng, 4);
        let j = random::frame(&mut rng, 3);
        let g = random::lattice(&mut rng, 4);
        let h = random::fss(&mut rng, &g).unwrap();
        with_carrier_cap(CAP, || -> Result<(), TestCaseError> {
            let p = frame_operator(&l, &j).unwrap();
            for x in p.lattice().elements() {
                let tx = p.tuple(x);
                let fx = p.tuple(p.fss().f(x));
                for i in 0..j.len() {
                    let want = l.join_all(j.successors(i).iter().map(|&k| tx.get(k)));
                    prop_assert_eq!(fx.get(i), want);
                }
            }
            let hf = hom_frame(&h, &l).unwrap();
            let g = h.lattice();
            for a in 0..hf.len() {
                for b in 0..hf.len() {
                    let (alpha, beta) = (hf.hom(a), hf.hom(b));
                    let below = g.elements().all(|x| l.leq(beta.apply(x), alpha.apply(h.f(x))));
                    prop_assert_eq!(hf.frame().related(a, b), below);
                }
            }
            Ok(())
        })?;
    }

    #[test]
    fn tensor_identifies_generating_pairs(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let j = random::frame(&mut rng, 3);
        let g = random::lattice(&mut rng, 4);
        let h = random::fss(&mut rng, &g).unwrap();
        let built = with_carrier_cap(CAP, || tensor(&j, &h));
        let Ok(q) = built else { return Ok(()) };
        let n = q.nucleus();
        for v in q.lattice().elements() {
            let r = q.rep(v);
            prop_assert_eq!(q.project(&r), v);
            prop_assert_eq!(n.close(&r), r.clone());
        }
        // Each generating pair is identified, and the projection preserves joins.
        for (a, b) in n.pairs() {
            prop_assert_eq!(q.project(&a), q.project(&b));
        }
        let projection = q.projection().unwrap();
        prop_assert_eq!(projection.target(), q.lattice());
    }

    #[test]
    fn tables_render_and_parse_back(rows in prop::collection::vec(("[a-z][a-z0-9]{0,4}", prop::collection::vec("[a-z0-9(),]{1,6}", 3)), 0..6)) {
        let mut t = fsl_core::table::Table::new("t", "x", vec!["p".into(), "q".into(), "r".into()]);
        for (label, cells) in rows {
            t.push(label, cells);
        }
        let artifact = TableArtifact { tables: vec![t] };
        prop_assert_eq!(TableArtifact::parse(&artifact.render()).unwrap(), artifact);
    }
}

#[test]
fn singleton_lattice_has_one_hom_to_anything() {
    let one = SupLattice::singleton("0");
    let two = SupLattice::two();
    assert_eq!(enumerate_join_homs(&one, &two).unwrap().len(), 1);
    assert_eq!(enumerate_join_homs(&two, &one).unwrap().len(), 1);
}
