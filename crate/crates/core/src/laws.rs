//! Randomized law suites: the adjunction laws, the nucleus/quotient laws and
//! the agreement of the fast algorithms with brute-force oracles.
//!
//! Each instance is generated from its own seed, so a failure can be replayed
//! on its own with [`replay`]. Instances whose derived structures exceed the
//! carrier cap are redrawn from the same random stream.

use std::thread;

use crate::adjunctions::{
    check_naturality, check_triangles, Adjunction, AdjunctionReport, Context, LawCheck, Morphism, Transformation, Verdict,
};
use crate::constructions::{backward_tuple, forward_powerset, forward_tuple};
use crate::error::{Error, Result};
use crate::frames::FrameHom;
use crate::lattice::{carrier_cap, power_lattice, with_carrier_cap, Element, SupLattice, Tuple};
use crate::morphisms::{enumerate_join_homs, is_join_hom, FSupLattice};
use crate::nuclei::{
    congruence_to_nucleus, factor_through, nucleus_closure, nucleus_to_congruence, prenucleus_from_pairs, quotient,
};
use crate::random::{self, instance_seeds, redraw, rng_from_seed, InstanceRng};

/// Largest lattice drawn by the suites.
pub const MAX_LATTICE: usize = 6;
/// Largest frame drawn by the suites.
pub const MAX_FRAME: usize = 4;
/// Carrier cap inside the suites: instances needing more are redrawn.
pub const SUITE_CAP: usize = 512;
/// Redraws allowed per instance before giving up.
const ATTEMPTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Adjunctions,
    Nuclei,
    Oracles,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Adjunctions => "adjunction laws",
            Suite::Nuclei => "nucleus and quotient laws",
            Suite::Oracles => "oracle agreement",
        }
    }
}

/// The reports for one instance.
#[derive(Debug, Clone)]
pub struct InstanceOutcome {
    pub seed: u64,
    pub redraws: usize,
    pub reports: Vec<AdjunctionReport>,
}

impl InstanceOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(AdjunctionReport::passed)
    }

    pub fn checks(&self) -> usize {
        self.reports.iter().map(|r| r.laws.len()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub seed: u64,
    pub instances: Vec<InstanceOutcome>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(InstanceOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InstanceOutcome> {
        self.instances.iter().filter(|i| !i.passed())
    }

    pub fn redraws(&self) -> usize {
        self.instances.iter().map(|i| i.redraws).sum()
    }

    pub fn checks(&self) -> usize {
        self.instances.iter().map(InstanceOutcome::checks).sum()
    }

    /// A summary line, followed by the failing reports with replay seeds.
    pub fn render(&self) -> String {
        let failed = self.failures().count();
        let mut out = format!(
            "{}: {} instances from seed {}, {} law checks, {} redraws, {} failing\n",
            self.suite.name(),
            self.instances.len(),
            self.seed,
            self.checks(),
            self.redraws(),
            failed
        );
        for inst in self.failures() {
            out.push_str(&format!("instance seed {} (replay with --replay {})\n", inst.seed, inst.seed));
            for r in inst.reports.iter().filter(|r| !r.passed()) {
                out.push_str(&r.render());
            }
        }
        out
    }
}

/// Runs `count` instances of a suite.
pub fn run_suite(suite: Suite, seed: u64, count: usize) -> Result<SuiteOutcome> {
    let seeds = instance_seeds(seed, count);
    let instances = par_map(&seeds, |s| replay(suite, s))?;
    Ok(SuiteOutcome { suite, seed, instances })
}

/// Regenerates and rechecks the single instance with the given seed.
pub fn replay(suite: Suite, seed: u64) -> Result<InstanceOutcome> {
    let mut rng = rng_from_seed(seed);
    let draw = match suite {
        Suite::Adjunctions => adjunction_instance,
        Suite::Nuclei => nucleus_instance,
        Suite::Oracles => oracle_instance,
    };
    let cap = SUITE_CAP.min(carrier_cap());
    let (reports, redraws) = with_carrier_cap(cap, || redraw(&mut rng, ATTEMPTS, draw))?;
    Ok(InstanceOutcome { seed, redraws, reports })
}

/// Maps over the seeds on all cores, keeping the input order.
fn par_map<T: Send>(seeds: &[u64], f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(seeds.len().max(1));
    let chunk = seeds.len().div_ceil(workers).max(1);
    let f = &f;
    let results: Vec<Result<Vec<T>>> = thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&s| f(s)).collect::<Result<Vec<T>>>()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("law-suite worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(seeds.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Adjunctions.
// ---------------------------------------------------------------------------

/// Draws `J`, `H`, `L` and one morphism of each kind, then checks all three
/// adjunctions and all six naturality squares.
fn adjunction_instance(rng: &mut InstanceRng) -> Result<Vec<AdjunctionReport>> {
    let j = random::frame(rng, MAX_FRAME);
    let g = random::lattice(rng, MAX_LATTICE);
    let h = random::fss(rng, &g)?;
    let l = random::lattice(rng, MAX_LATTICE);

    let g2 = random::lattice(rng, MAX_LATTICE);
    let h2 = random::fss(rng, &g2)?;
    let f = random::lax_morphism(rng, &h, &h2)?;
    let l2 = random::lattice(rng, MAX_LATTICE);
    let gmap = random::join_hom(rng, &l, &l2)?;
    let j2 = random::frame(rng, MAX_FRAME);
    let t = match random::frame_hom(rng, &j, &j2)? {
        Some(t) => t,
        None => random::frame_hom(rng, &j, &j)?.unwrap_or_else(|| FrameHom::identity(&j)),
    };

    let mut reports = Vec::new();
    for which in [Adjunction::I, Adjunction::II, Adjunction::III] {
        reports.push(check_triangles(which, &j, &h, &l)?);
    }
    let ctx = Context {
        frame: j,
        fss: h.clone(),
        lattice: l,
    };
    let lax = Morphism::Lax {
        map: f,
        source: h,
        target: h2,
    };
    let sup = Morphism::Sup(gmap);
    let fr = Morphism::Frame(t);
    for (which, m) in [
        (Transformation::Eta, &lax),
        (Transformation::Mu, &lax),
        (Transformation::Epsilon, &sup),
        (Transformation::Psi, &sup),
        (Transformation::Phi, &fr),
        (Transformation::Nu, &fr),
    ] {
        reports.push(check_naturality(which, &ctx, m)?);
    }
    Ok(reports)
}

// ---------------------------------------------------------------------------
// Nuclei and quotients.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct Checks {
    laws: Vec<LawCheck>,
}

impl Checks {
    fn law(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        let verdict = if ok {
            Verdict::Pass { checked: 1 }
        } else {
            Verdict::Fail { witness: witness() }
        };
        self.laws.push(LawCheck {
            law: name.to_string(),
            verdict,
        });
    }

    fn result(&mut self, name: &str, res: Result<()>) {
        let ok = res.is_ok();
        self.law(name, ok, || res.err().map(|e| e.to_string()).unwrap_or_default());
    }

    fn into_report(self, subject: &str, instance: String) -> AdjunctionReport {
        AdjunctionReport {
            subject: subject.to_string(),
            instance,
            laws: self.laws,
        }
    }
}

/// Random pairs, closed under `F×F` so that the generated prenucleus is lax.
fn random_pairs(rng: &mut InstanceRng, h: &FSupLattice) -> Vec<(Element, Element)> {
    use rand::Rng;
    let g = h.lattice();
    let mut pairs: Vec<(Element, Element)> = (0..rng.random_range(0..=3))
        .map(|_| {
            (
                Element(rng.random_range(0..g.len())),
                Element(rng.random_range(0..g.len())),
            )
        })
        .collect();
    let mut k = 0;
    while k < pairs.len() {
        let (c, d) = pairs[k];
        let image = (h.f(c), h.f(d));
        if !pairs.contains(&image) {
            pairs.push(image);
        }
        k += 1;
    }
    pairs
}

fn nucleus_instance(rng: &mut InstanceRng) -> Result<Vec<AdjunctionReport>> {
    let g = random::lattice(rng, MAX_LATTICE);
    let h = random::fss(rng, &g)?;
    let pairs = random_pairs(rng, &h);
    let mut c = Checks::default();

    let pre = prenucleus_from_pairs(&h, &pairs)?;
    c.law("j[X] is lax when X is closed under F×F", pre.is_lax(), || "j[X]".into());
    let n = nucleus_closure(&pre);
    // `Nucleus::new` re-validates increasing, monotone and idempotent.
    c.result(
        "closure is an increasing, monotone, idempotent operator",
        crate::nuclei::Nucleus::new(&h, n.table().to_vec()).map(|_| ()),
    );

    // Oracle: the fixpoints of j[X] are the elements closed under every pair.
    let closed = |a: Element| {
        pairs
            .iter()
            .all(|&(x, y)| (!g.leq(y, a) || g.leq(x, a)) && (!g.leq(x, a) || g.leq(y, a)))
    };
    let oracle: Vec<Element> = g.elements().filter(|&a| closed(a)).collect();
    c.law("fixpoints agree with the brute-force oracle", n.fixpoints() == oracle, || {
        format!("{} vs {} fixpoints", n.fixpoints().len(), oracle.len())
    });
    let least = g.elements().all(|a| {
        let above = oracle.iter().copied().filter(|&p| g.leq(a, p));
        n.apply(a) == g.meet_all(above)
    });
    c.law("closure is the meet of the fixpoints above", least, || "some element".into());

    let q = quotient(&h, &n)?;
    c.result("quotient laws (F-sup-semilattice, projection, inclusion condition)", q.verify());

    let theta = nucleus_to_congruence(&n);
    let back = congruence_to_nucleus(&theta)?;
    c.law("nucleus → congruence → nucleus is the identity", back.table() == n.table(), || {
        "tables differ".into()
    });
    let again = nucleus_to_congruence(&back);
    c.law("congruence → nucleus → congruence is the identity", again.blocks() == theta.blocks(), || {
        "blocks differ".into()
    });

    // A map constant on X factors through the quotient.
    let two = SupLattice::two();
    let candidates: Vec<_> = enumerate_join_homs(&g, &two)?
        .into_iter()
        .filter(|m| pairs.iter().all(|&(x, y)| m.apply(x) == m.apply(y)))
        .collect();
    let gmap = {
        use rand::seq::IndexedRandom;
        candidates.choose(rng).expect("the zero map is constant on X").clone()
    };
    match factor_through(&q, &gmap, &pairs) {
        Ok(bar) => {
            let ok = g.elements().all(|x| bar.apply(q.project(x)) == gmap.apply(x));
            c.law("factored map composed with the projection is the map", ok, || "some element".into());
        }
        Err(e) => c.result("factored map composed with the projection is the map", Err(e)),
    }

    let instance = format!("H with {} elements, {} pairs", g.len(), pairs.len());
    Ok(vec![c.into_report("nucleus laws", instance)])
}

// ---------------------------------------------------------------------------
// Oracles.
// ---------------------------------------------------------------------------

/// Every join-preserving map by filtering all `|L|^|G|` maps.
pub fn brute_force_join_homs(source: &SupLattice, target: &SupLattice) -> Result<Vec<Vec<Element>>> {
    let (n, m) = (source.len(), target.len());
    let total = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > 1_000_000 {
        return Err(Error::CarrierTooLarge {
            what: "brute-force map space".into(),
            size: total,
            cap: 1_000_000,
        });
    }
    let mut out = Vec::new();
    let mut table = vec![Element(0); n];
    loop {
        if is_join_hom(&table, source, target)? {
            out.push(table.clone());
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            table[pos].0 += 1;
            if table[pos].0 < m {
                break;
            }
            table[pos].0 = 0;
        }
    }
}

fn oracle_instance(rng: &mut InstanceRng) -> Result<Vec<AdjunctionReport>> {
    let g = random::lattice(rng, MAX_LATTICE);
    let l = random::lattice(rng, MAX_LATTICE);
    let mut c = Checks::default();

    let fast: Vec<Vec<Element>> = enumerate_join_homs(&g, &l)?
        .into_iter()
        .map(|h| h.table().to_vec())
        .collect();
    let slow = brute_force_join_homs(&g, &l)?;
    c.law("enumeration equals the brute-force filter", fast == slow, || {
        format!("{} enumerated vs {} brute force", fast.len(), slow.len())
    });

    // t^→ ⊣ L^t on every pair of tuples.
    let j1 = random::frame(rng, 3);
    let j2 = random::frame(rng, 3);
    let t = match random::frame_hom(rng, &j1, &j2)? {
        Some(t) => t,
        None => FrameHom::identity(&j1),
    };
    let fwd = forward_powerset(&t, &l);
    c.result("t^→ is join-preserving and left adjoint", fwd.map(|_| ()));
    let p1 = power_lattice(&l, t.source().nodes())?;
    let p2 = power_lattice(&l, t.target().nodes())?;
    let tuples = |p: &SupLattice| -> Vec<Tuple> { p.elements().map(|x| p.tuple(x).expect("power tuple")).collect() };
    let (xs, ys) = (tuples(&p1), tuples(&p2));
    let mut galois = true;
    for x in &xs {
        let fx = forward_tuple(&l, &t, x);
        for y in &ys {
            galois &= l.tuple_leq(&fx, y) == l.tuple_leq(x, &backward_tuple(&t, y));
        }
    }
    c.law("t^→(x) <= y iff x <= L^t(y) on all pairs", galois, || "some pair".into());

    let instance = format!(
        "G with {} elements, L with {} elements, frames with {} and {} nodes",
        g.len(),
        l.len(),
        j1.len(),
        j2.len()
    );
    Ok(vec![c.into_report("oracle agreement", instance)])
}
