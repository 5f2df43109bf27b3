//! The three worked examples: the diamond `G = {0,a,b,c,1}` with `F`
//! swapping `b` and `c`, the two-element chain, and the three-node frame on
//! `{f2,f3,f4}` with `f2 S f3`, `f3 S f2`, `f4 S f4`.
//!
//! Every table is recomputed from the definitions and compared cell by cell
//! with a golden file. The golden files use the customary names `f1…f8` for
//! the maps `G -> 2` and `α1…α8` for the elements of `2^{f2,f3,f4}`; the
//! label tables printed alongside map those names to canonical positions.

use std::fmt;

use crate::adjunctions::{eta, mu};
use crate::constructions::{frame_operator, hom_frame, indicator, indicator_eq, tensor};
use crate::error::Result;
use crate::frames::{make_frame, Frame, FrameHom};
use crate::lattice::{validate_lattice, Element, SupLattice, Tuple};
use crate::morphisms::{enumerate_join_homs, is_f_homomorphism, is_in_e_leq, is_order_embedding, FSupLattice};
use crate::table::{diff, Table, TableArtifact};

const GOLDEN: [&str; 3] = [
    include_str!("../golden/example1.txt"),
    include_str!("../golden/example2.txt"),
    include_str!("../golden/example3.txt"),
];

/// Customary names of the maps `G -> 2`, by value table over `0,a,b,c,1`.
pub const HOM_NAMES: [(&str, [u8; 5]); 8] = [
    ("f1", [0, 0, 0, 0, 0]),
    ("f2", [0, 0, 0, 1, 1]),
    ("f3", [0, 0, 1, 0, 1]),
    ("f4", [0, 1, 0, 0, 1]),
    ("f5", [0, 1, 1, 0, 1]),
    ("f6", [0, 1, 0, 1, 1]),
    ("f7", [0, 0, 1, 1, 1]),
    ("f8", [0, 1, 1, 1, 1]),
];

/// Customary names of the elements of `2^{f2,f3,f4}`.
pub const ALPHA_NAMES: [(&str, [u8; 3]); 8] = [
    ("α1", [0, 0, 0]),
    ("α2", [1, 0, 0]),
    ("α3", [0, 1, 0]),
    ("α4", [0, 0, 1]),
    ("α5", [1, 1, 0]),
    ("α6", [1, 0, 1]),
    ("α7", [0, 1, 1]),
    ("α8", [1, 1, 1]),
];

pub fn diamond() -> SupLattice {
    validate_lattice(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
    .expect("the diamond is a lattice")
}

/// The diamond with `F` fixing `0, a, 1` and swapping `b` and `c`.
pub fn diamond_swap() -> FSupLattice {
    let g = diamond();
    let e = |s: &str| g.element(s).expect("diamond label");
    FSupLattice::new(&g, vec![e("0"), e("a"), e("c"), e("b"), e("1")]).expect("the swap preserves joins")
}

pub fn two() -> SupLattice {
    SupLattice::two()
}

/// The frame on `{f2,f3,f4}` with `f2 S f3`, `f3 S f2` and `f4 S f4`.
pub fn three_node_frame() -> Frame {
    make_frame(&["f2", "f3", "f4"], &[("f2", "f3"), ("f3", "f2"), ("f4", "f4")]).expect("valid frame")
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn bits(l: &SupLattice, values: impl Iterator<Item = Element>) -> Vec<u8> {
    values.map(|v| u8::from(v != l.bottom())).collect()
}

fn labels(l: &SupLattice, t: &Tuple) -> Vec<String> {
    t.iter().map(|x| l.label(x).to_string()).collect()
}

/// One recomputed example with its golden comparison.
#[derive(Debug, Clone)]
pub struct ExampleRun {
    pub number: usize,
    pub computed: TableArtifact,
    pub labels: Table,
    pub golden: TableArtifact,
    pub diffs: Vec<String>,
}

/// The recomputed tables differ from the golden file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenMismatch {
    pub number: usize,
    pub diffs: Vec<String>,
}

impl fmt::Display for GoldenMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example {}: {} differences from the golden file", self.number, self.diffs.len())?;
        for d in &self.diffs {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for GoldenMismatch {}

impl ExampleRun {
    pub fn matches(&self) -> bool {
        self.diffs.is_empty()
    }

    pub fn check(&self) -> std::result::Result<(), GoldenMismatch> {
        if self.matches() {
            Ok(())
        } else {
            Err(GoldenMismatch {
                number: self.number,
                diffs: self.diffs.clone(),
            })
        }
    }

    /// Computed tables, label mapping and the golden verdict.
    pub fn render(&self) -> String {
        let mut out = format!("# example {}\n\n", self.number);
        out.push_str(&self.computed.render());
        out.push('\n');
        out.push_str(&self.labels.render());
        out.push('\n');
        match self.check() {
            Ok(()) => out.push_str("golden: identical\n"),
            Err(m) => out.push_str(&format!("golden: MISMATCH\n{m}")),
        }
        out
    }
}

pub fn golden(number: usize) -> Option<TableArtifact> {
    let text = GOLDEN.get(number.checked_sub(1)?)?;
    Some(TableArtifact::parse(text).expect("golden files parse"))
}

/// Recomputes example `number` (1, 2 or 3).
pub fn run_example(number: usize) -> Result<ExampleRun> {
    let (computed, labels) = match number {
        1 => example1()?,
        2 => example2()?,
        3 => example3()?,
        _ => {
            return Err(crate::error::Error::UnknownLabel(format!("example {number}")));
        }
    };
    let golden = golden(number).expect("golden file exists");
    let diffs = diff(&golden, &computed);
    Ok(ExampleRun {
        number,
        computed,
        labels,
        golden,
        diffs,
    })
}

/// The maps `G -> 2`, their relation in `J[H,2]`, and `μ_H`.
fn example1() -> Result<(TableArtifact, Table)> {
    let h = diamond_swap();
    let g = h.lattice().clone();
    let l = two();
    let homs = enumerate_join_homs(&g, &l)?;
    let hf = hom_frame(&h, &l)?;

    // Name each hom by the customary table it matches.
    let mut named: Vec<(String, usize)> = homs
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let table = bits(&l, f.table().iter().copied());
            let name = HOM_NAMES
                .iter()
                .find(|(_, t)| t[..] == table[..])
                .map_or_else(|| format!("h{}", k + 1), |(n, _)| n.to_string());
            (name, k)
        })
        .collect();
    named.sort_by_key(|(name, k)| (HOM_NAMES.iter().position(|(n, _)| n == name).unwrap_or(usize::MAX), *k));

    let columns: Vec<String> = g.labels().to_vec();
    let mut homs_t = Table::new("homs", "hom", columns.clone());
    let mut labels_t = Table::new("labels", "name", vec!["canonical".into(), "values".into()]);
    for (name, k) in &named {
        homs_t.push(name.clone(), homs[*k].value_labels().iter().map(|s| s.to_string()).collect());
        labels_t.push(name.clone(), vec![format!("#{}", k + 1), hf.frame().label(*k).to_string()]);
    }

    let names: Vec<String> = named.iter().map(|(n, _)| n.clone()).collect();
    let mut rho = Table::new("ρ", "ρ", names.clone());
    for (name, a) in &named {
        let cells = named
            .iter()
            .map(|(_, b)| if hf.frame().related(*a, *b) { "x" } else { "." }.to_string())
            .collect();
        rho.push(name.clone(), cells);
    }

    let unit = mu(&h, &l)?;
    let mut mu_t = Table::new("μ", "x", names.clone());
    for x in g.elements() {
        let values = named.iter().map(|(_, k)| l.label(homs[*k].apply(x)).to_string()).collect();
        mu_t.push(format!("μ({})", g.label(x)), values);
    }

    let mut counts = Table::new("counts", "count", vec!["value".into()]);
    counts.push("homs", vec![homs.len().to_string()]);
    counts.push("ρ-pairs", vec![hf.frame().rel().len().to_string()]);

    let injective = is_order_embedding(&unit.map);
    let mut verdicts = Table::new("verdicts", "claim", vec!["holds".into()]);
    verdicts.push("μ-lax", vec![yes(true)]);
    verdicts.push("μ-injective", vec![yes(injective)]);
    verdicts.push("μ-order-embedding", vec![yes(injective)]);
    verdicts.push("μ-F-homomorphism", vec![yes(is_f_homomorphism(&unit.map, &h, unit.power.fss())?)]);
    verdicts.push("μ-in-E≤", vec![yes(is_in_e_leq(&unit.map, &h, unit.power.fss())?)]);

    Ok((
        TableArtifact {
            tables: vec![homs_t, rho, mu_t, counts, verdicts],
        },
        labels_t,
    ))
}

/// `2^J` with its operator, and the relation between the evaluations `ν_J(i)`.
fn example2() -> Result<(TableArtifact, Table)> {
    let j = three_node_frame();
    let l = two();
    let power = frame_operator(&l, &j)?;
    let p = power.lattice();
    let name_of = |x: Element| -> String {
        let t = bits(&l, power.tuple(x).iter());
        ALPHA_NAMES
            .iter()
            .find(|(_, a)| a[..] == t[..])
            .map_or_else(|| format!("#{}", x.0 + 1), |(n, _)| n.to_string())
    };
    let mut order: Vec<Element> = p.elements().collect();
    order.sort_by_key(|&x| (ALPHA_NAMES.iter().position(|(n, _)| *n == name_of(x)), x));

    let nodes: Vec<String> = j.nodes().to_vec();
    let mut lj = Table::new("L^J", "α", nodes.clone());
    let mut op = Table::new("F^J", "α", std::iter::once("F^J".to_string()).chain(nodes.clone()).collect());
    let mut labels_t = Table::new("labels", "name", vec!["canonical".into(), "tuple".into()]);
    for &x in &order {
        lj.push(name_of(x), labels(&l, &power.tuple(x)));
        let fx = power.fss().f(x);
        op.push(name_of(x), std::iter::once(name_of(fx)).chain(labels(&l, &power.tuple(fx))).collect());
        labels_t.push(name_of(x), vec![format!("#{}", x.0 + 1), p.label(x).to_string()]);
    }

    let (_, unit) = crate::adjunctions::nu(&j, &l)?;
    let nu: &FrameHom = &unit.map;
    let target = unit.hom_frame.frame();
    let mut rel = Table::new("ν", "ρ′", nodes.clone());
    let mut reflects = true;
    for i in 0..j.len() {
        let cells = (0..j.len())
            .map(|k| {
                let related = target.related(nu.apply(i), nu.apply(k));
                reflects &= related == j.related(i, k);
                if related { "x" } else { "." }.to_string()
            })
            .collect();
        rel.push(j.label(i), cells);
    }

    let mut counts = Table::new("counts", "count", vec!["value".into()]);
    counts.push("L^J", vec![p.len().to_string()]);
    let mut verdicts = Table::new("verdicts", "claim", vec!["holds".into()]);
    verdicts.push("ν-frame-hom", vec![yes(true)]);
    verdicts.push("ν-reflects-S", vec![yes(reflects)]);

    Ok((
        TableArtifact {
            tables: vec![lj, op, rel, counts, verdicts],
        },
        labels_t,
    ))
}

/// The generating tables of `[J,H]`, the size of `J⊗H`, and `η_H`.
fn example3() -> Result<(TableArtifact, Table)> {
    let h = diamond_swap();
    let g = h.lattice().clone();
    let j = three_node_frame();
    let nodes: Vec<String> = j.nodes().to_vec();

    let mut up = Table::new("x_iS", "x", nodes.clone());
    let mut at = Table::new("F(x)_i=", "x", nodes.clone());
    let mut both = Table::new("x_iS∨F(x)_i=", "x", nodes.clone());
    for x in g.elements() {
        let xl = g.label(x);
        for i in 0..j.len() {
            let s = indicator(&g, x, &j, i)?;
            let e = indicator_eq(&g, h.f(x), &j, i)?;
            let node = j.label(i);
            up.push(format!("{xl}_{node}S"), labels(&g, &s));
            at.push(format!("F({xl})_{node}="), labels(&g, &e));
            both.push(format!("{xl}_{node}S∨F({xl})_{node}="), labels(&g, &g.tuple_join(&s, &e)));
        }
    }

    let q = tensor(&j, &h)?;
    let unit = eta(&j, &h)?;
    let power = &unit.power;
    let class = |v: Element| format!("[{}]", q.lattice().label(v));
    let row = |x: Element| -> Vec<String> { power.tuple(x).iter().map(class).collect() };

    let mut counts = Table::new("counts", "count", vec!["value".into()]);
    counts.push("J⊗H", vec![q.len().to_string()]);
    counts.push("(J⊗H)^J", vec![power.lattice().len().to_string()]);

    let mut eta_t = Table::new("η", "x", nodes.clone());
    let mut eta_f = Table::new("η∘F", "x", nodes.clone());
    let mut f_eta = Table::new("F^J∘η", "x", nodes.clone());
    for x in g.elements() {
        let xl = g.label(x);
        eta_t.push(format!("η({xl})"), row(unit.map.apply(x)));
        eta_f.push(format!("η(F({xl}))"), row(unit.map.apply(h.f(x))));
        f_eta.push(format!("F^J(η({xl}))"), row(power.fss().f(unit.map.apply(x))));
    }

    let injective = is_order_embedding(&unit.map);
    let mut verdicts = Table::new("verdicts", "claim", vec!["holds".into()]);
    verdicts.push("η-lax", vec![yes(true)]);
    verdicts.push("η-F-homomorphism", vec![yes(is_f_homomorphism(&unit.map, &h, power.fss())?)]);
    verdicts.push("η-injective", vec![yes(injective)]);
    verdicts.push("η-in-E≤", vec![yes(is_in_e_leq(&unit.map, &h, power.fss())?)]);

    let mut labels_t = Table::new("labels", "class", vec!["canonical".into()]);
    for v in q.lattice().elements() {
        labels_t.push(class(v), vec![format!("#{}", v.0 + 1)]);
    }

    Ok((
        TableArtifact {
            tables: vec![up, at, both, counts, eta_t, eta_f, f_eta, verdicts],
        },
        labels_t,
    ))
}
