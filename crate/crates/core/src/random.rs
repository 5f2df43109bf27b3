//! Seeded random instances for the law suites.
//!
//! Everything is drawn from a [`ChaCha8Rng`], so an instance is a pure
//! function of its seed. Lattices are drawn as intersection-closed families
//! of subsets of a small ground set (every finite lattice arises this way),
//! operators and morphisms by enumerating the candidates and picking one.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frames::{is_frame_hom, Frame, FrameHom};
use crate::lattice::{validate_lattice, SupLattice};
use crate::morphisms::{enumerate_join_homs, is_lax_morphism, FSupLattice, JoinHom};

pub type InstanceRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seeds for `count` instances derived from one suite seed.
pub fn instance_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| rng.random()).collect()
}

/// A lattice with at most `max_size` elements (and at least one). The size
/// is drawn first, so small and large lattices are equally likely.
pub fn lattice(rng: &mut InstanceRng, max_size: usize) -> SupLattice {
    let size = rng.random_range(1..=max_size.max(1));
    loop {
        if let Some(l) = closure_system(rng, size) {
            return l;
        }
    }
}

/// A random intersection-closed family with exactly `size` members.
fn closure_system(rng: &mut InstanceRng, size: usize) -> Option<SupLattice> {
    // 2^ground subsets are needed, and size - 1 meet-irreducibles always suffice.
    let low = usize::BITS - (size - 1).leading_zeros();
    let high = low.max((size as u32).saturating_sub(1).min(4));
    let ground = rng.random_range(low..=high);
    let full = (1u32 << ground) - 1;
    let mut family: BTreeSet<u32> = BTreeSet::from([full]);
    let mut candidates: Vec<u32> = (0..full).collect();
    candidates.shuffle(rng);
    for s in candidates {
        if family.len() >= size {
            break;
        }
        let mut grown = family.clone();
        grown.insert(s);
        close_under_intersection(&mut grown);
        if grown.len() <= size {
            family = grown;
        }
    }
    if family.len() != size {
        return None;
    }
    let mut sets: Vec<u32> = family.into_iter().collect();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    let labels: Vec<String> = (0..sets.len()).map(|k| format!("e{k}")).collect();
    let mut pairs = Vec::new();
    for (i, &a) in sets.iter().enumerate() {
        for (k, &b) in sets.iter().enumerate() {
            if i != k && a & b == a {
                pairs.push((labels[i].clone(), labels[k].clone()));
            }
        }
    }
    Some(validate_lattice(&labels, &pairs).expect("closure systems are lattices"))
}

fn close_under_intersection(family: &mut BTreeSet<u32>) {
    loop {
        let members: Vec<u32> = family.iter().copied().collect();
        let before = family.len();
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                family.insert(a & b);
            }
        }
        if family.len() == before {
            return;
        }
    }
}

/// A frame with between 1 and `max_nodes` nodes.
pub fn frame(rng: &mut InstanceRng, max_nodes: usize) -> Frame {
    let n = rng.random_range(1..=max_nodes.max(1));
    let density = rng.random_range(0.2..0.7);
    let mut rel = Vec::new();
    for i in 0..n {
        for k in 0..n {
            if rng.random_bool(density) {
                rel.push((i, k));
            }
        }
    }
    Frame::from_parts((0..n).map(|i| format!("t{i}")).collect(), rel)
}

/// A random join-preserving operator on `lattice`.
pub fn fss(rng: &mut InstanceRng, lattice: &SupLattice) -> Result<FSupLattice> {
    let ops = enumerate_join_homs(lattice, lattice)?;
    let op = ops.choose(rng).expect("the zero map always exists").clone();
    FSupLattice::from_hom(op)
}

pub fn join_hom(rng: &mut InstanceRng, source: &SupLattice, target: &SupLattice) -> Result<JoinHom> {
    let homs = enumerate_join_homs(source, target)?;
    Ok(homs.choose(rng).expect("the zero map always exists").clone())
}

/// A random lax morphism `H1 -> H2` (the zero map is always one).
pub fn lax_morphism(rng: &mut InstanceRng, h1: &FSupLattice, h2: &FSupLattice) -> Result<JoinHom> {
    let mut lax = Vec::new();
    for f in enumerate_join_homs(h1.lattice(), h2.lattice())? {
        if is_lax_morphism(&f, h1, h2)? {
            lax.push(f);
        }
    }
    Ok(lax.choose(rng).expect("the zero map is lax").clone())
}

/// Every relation-preserving map `source -> target`, in lexicographic order.
pub fn frame_homs(source: &Frame, target: &Frame) -> Result<Vec<FrameHom>> {
    let (n, m) = (source.len(), target.len());
    let total = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    crate::lattice::ensure_cap(|| "frame homomorphism candidates".into(), total)?;
    let mut out = Vec::new();
    let mut table = vec![0usize; n];
    loop {
        if is_frame_hom(&table, source, target)? {
            out.push(FrameHom::new(source, target, table.clone())?);
        }
        // Advance the mixed-radix counter; stop after the last map.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            table[pos] += 1;
            if table[pos] < m {
                break;
            }
            table[pos] = 0;
        }
    }
}

/// A random frame homomorphism, if there is any.
pub fn frame_hom(rng: &mut InstanceRng, source: &Frame, target: &Frame) -> Result<Option<FrameHom>> {
    Ok(frame_homs(source, target)?.choose(rng).cloned())
}

/// Retries `draw` until it stops failing with `CarrierTooLarge`.
/// Other errors propagate; gives up after `attempts` tries.
pub fn redraw<T>(
    rng: &mut InstanceRng,
    attempts: usize,
    mut draw: impl FnMut(&mut InstanceRng) -> Result<T>,
) -> Result<(T, usize)> {
    let mut last = None;
    for redraws in 0..attempts {
        match draw(rng) {
            Ok(v) => return Ok((v, redraws)),
            Err(e @ Error::CarrierTooLarge { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattices_are_small_and_replayable() {
        for seed in 0..50 {
            let a = lattice(&mut rng_from_seed(seed), 6);
            let b = lattice(&mut rng_from_seed(seed), 6);
            assert!(a.len() <= 6 && !a.is_empty());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn frame_homs_match_brute_force_count() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let (j1, j2) = (frame(&mut rng, 3), frame(&mut rng, 3));
            let homs = frame_homs(&j1, &j2).unwrap();
            for h in &homs {
                for &(i, k) in j1.rel() {
                    assert!(j2.related(h.apply(i), h.apply(k)));
                }
            }
        }
    }

    #[test]
    fn drawn_morphisms_are_lax() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let g1 = lattice(&mut rng, 5);
            let g2 = lattice(&mut rng, 5);
            let h1 = fss(&mut rng, &g1).unwrap();
            let h2 = fss(&mut rng, &g2).unwrap();
            let f = lax_morphism(&mut rng, &h1, &h2).unwrap();
            assert!(is_lax_morphism(&f, &h1, &h2).unwrap());
        }
    }
}
