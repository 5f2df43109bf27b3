//! Units and counits of the three adjunctions, with their triangle
//! identities and naturality squares checked on concrete instances.
//!
//! * `(η, ε)`: `J⊗-` left adjoint to `(-)^J`, with
//!   `η_H(x)(i) = n(x_{i=})` and `ε_L[x̄] = ⋁_i x̄(i)(i)`.
//! * `(φ, ψ)`: `-⊗H` left adjoint to `J[H,-]`, with
//!   `φ_J(i)(x) = n(x_{i=})` and `ψ_L[x] = ⋁_α α(x(α))`.
//! * `(ν, μ)`: `J[-,L]` adjoint to `L^-`, with `ν_J(i)(x) = x(i)` and
//!   `μ_H(x)(α) = α(x)`.
//!
//! The checks below never materialize more than they need. A composite such
//! as `ε_{J⊗H} ∘ (J⊗η_H)` is evaluated on each element by closing tuples
//! with the relevant [`TensorNucleus`], so the (often enormous) intermediate
//! tensor products are never enumerated. The counits are still checked to be
//! well defined on classes, through [`TensorNucleus::check_constant_on_classes`].

use std::fmt;

use crate::constructions::{
    backward_powerset_between, backward_tuple, forward_tuple, frame_operator, hom_frame, point_tuple,
    tensor, Coverage, FrameOperatorLattice, HomFrame, TensorLattice, TensorNucleus,
};
use crate::error::{Error, Result};
use crate::frames::{Frame, FrameHom};
use crate::lattice::{Element, SupLattice, Tuple};
use crate::morphisms::{is_lax_morphism, lax_violation, FSupLattice, JoinHom};

/// Which adjunction a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Adjunction {
    /// `(η, ε)`.
    I,
    /// `(φ, ψ)`.
    II,
    /// `(ν, μ)`.
    III,
}

impl fmt::Display for Adjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Adjunction::I => "I",
            Adjunction::II => "II",
            Adjunction::III => "III",
        })
    }
}

impl std::str::FromStr for Adjunction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "I" | "i" | "1" => Ok(Adjunction::I),
            "II" | "ii" | "2" => Ok(Adjunction::II),
            "III" | "iii" | "3" => Ok(Adjunction::III),
            other => Err(format!("unknown adjunction `{other}` (expected I, II or III)")),
        }
    }
}

/// The six natural transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transformation {
    Eta,
    Epsilon,
    Phi,
    Psi,
    Nu,
    Mu,
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transformation::Eta => "eta",
            Transformation::Epsilon => "epsilon",
            Transformation::Phi => "phi",
            Transformation::Psi => "psi",
            Transformation::Nu => "nu",
            Transformation::Mu => "mu",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass { checked: usize },
    Fail { witness: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub subject: String,
    pub instance: String,
    pub laws: Vec<LawCheck>,
}

impl AdjunctionReport {
    fn new(subject: impl Into<String>, instance: impl Into<String>) -> Self {
        AdjunctionReport {
            subject: subject.into(),
            instance: instance.into(),
            laws: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.verdict.passed())
    }

    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.laws.iter().find(|l| !l.verdict.passed())
    }

    fn push(&mut self, law: impl Into<String>, verdict: Verdict) {
        self.laws.push(LawCheck {
            law: law.into(),
            verdict,
        });
    }

    fn absorb(&mut self, other: AdjunctionReport) {
        self.laws.extend(other.laws);
    }

    /// One line per law, stable across runs.
    pub fn render(&self) -> String {
        let mut out = format!("{} on {}\n", self.subject, self.instance);
        for l in &self.laws {
            match &l.verdict {
                Verdict::Pass { checked } => out.push_str(&format!("  PASS  {} ({checked} checked)\n", l.law)),
                Verdict::Fail { witness } => out.push_str(&format!("  FAIL  {} at {witness}\n", l.law)),
            }
        }
        out
    }
}

/// Counts checks and keeps the first counterexample.
#[derive(Default)]
struct Tally {
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn verdict(self) -> Verdict {
        match self.witness {
            Some(witness) => Verdict::Fail { witness },
            None => Verdict::Pass {
                checked: self.checked,
            },
        }
    }
}

/// Law-level errors become failing verdicts; structural ones propagate.
fn verdict_of(res: Result<usize>) -> Result<Verdict> {
    match res {
        Ok(checked) => Ok(Verdict::Pass { checked }),
        Err(
            e @ (Error::FiberConflict(_)
            | Error::NotConstantOnX(..)
            | Error::LawViolation { .. }
            | Error::NotFrameHom(..)
            | Error::NotLax(_)
            | Error::NotJoinPreserving(..)
            | Error::BottomNotPreserved),
        ) => Ok(Verdict::Fail {
            witness: e.to_string(),
        }),
        Err(e) => Err(e),
    }
}

fn coverage_verdict(res: Result<Coverage>) -> Result<Verdict> {
    verdict_of(res.map(Coverage::checked))
}

fn describe(frame: &Frame, fss: &FSupLattice, lattice: &SupLattice) -> String {
    format!(
        "J with {} nodes and {} related pairs, H with {} elements, L with {} elements",
        frame.len(),
        frame.rel().len(),
        fss.lattice().len(),
        lattice.len()
    )
}

/// `e_L(x̄) = ⋁_i x̄(i)(i)` for `x̄` a tuple over `L^J`.
fn diagonal(power: &FrameOperatorLattice, xbar: &Tuple) -> Element {
    power
        .base()
        .join_all((0..xbar.len()).map(|i| power.tuple(xbar.get(i)).get(i)))
}

/// `f_L(x) = ⋁_α α(x(α))` for `x` a tuple indexed by the nodes of `J[H,L]`.
fn evaluate_homs(hf: &HomFrame, x: &Tuple) -> Element {
    hf.target()
        .join_all(hf.homs().iter().enumerate().map(|(a, h)| h.apply(x.get(a))))
}

/// The tuple `μ_H(x) = (α(x))_α`.
fn mu_tuple(hf: &HomFrame, x: Element) -> Tuple {
    Tuple(hf.homs().iter().map(|h| h.apply(x)).collect())
}

fn require_node(hf: &HomFrame, table: &[Element], what: &str) -> Result<usize> {
    hf.node_of(table)
        .ok_or_else(|| Error::law(what.to_string(), "image is not a node of the hom-frame"))
}

// ---------------------------------------------------------------------------
// The transformations themselves.
// ---------------------------------------------------------------------------

/// `η_H: H -> (J⊗H)^J` with the structures it lives between.
#[derive(Debug, Clone)]
pub struct Unit {
    pub tensor: TensorLattice,
    pub power: FrameOperatorLattice,
    pub map: JoinHom,
}

/// `η_H(x)(i) = n(x_{i=})`; checked to be lax.
pub fn eta(frame: &Frame, fss: &FSupLattice) -> Result<Unit> {
    let q = tensor(frame, fss)?;
    let power = frame_operator(q.lattice(), frame)?;
    let g = fss.lattice();
    let table = g
        .elements()
        .map(|x| {
            power.element(&Tuple(
                (0..frame.len())
                    .map(|i| q.project(&point_tuple(g, x, frame.len(), i)))
                    .collect(),
            ))
        })
        .collect::<Vec<_>>();
    let map = JoinHom::new(g, power.lattice(), table)
        .map_err(|e| Error::law("η preserves joins", e.to_string()))?;
    if let Some(x) = lax_violation(&map, fss, power.fss())? {
        return Err(Error::law("η is lax", g.label(x).to_string()));
    }
    Ok(Unit {
        tensor: q,
        power,
        map,
    })
}

/// A counit `ε_L` or `ψ_L` with how its well-definedness was established.
#[derive(Debug, Clone)]
pub struct Counit {
    pub tensor: TensorLattice,
    pub map: JoinHom,
    pub coverage: Coverage,
}

/// `ε_L: J⊗L^J -> L`, induced by `e_L(x̄) = ⋁_i x̄(i)(i)`.
pub fn epsilon(frame: &Frame, lattice: &SupLattice) -> Result<Counit> {
    let power = frame_operator(lattice, frame)?;
    let q = tensor(frame, power.fss())?;
    let (map, coverage) = q.factor(lattice, |xbar| diagonal(&power, xbar))?;
    Ok(Counit {
        tensor: q,
        map,
        coverage,
    })
}

/// `φ_J: J -> J[H, J⊗H]` with the structures it lives between.
#[derive(Debug, Clone)]
pub struct FrameUnit {
    pub hom_frame: HomFrame,
    pub map: FrameHom,
}

/// `φ_J(i)(x) = n(x_{i=})`; checked to preserve the relation.
pub fn phi(frame: &Frame, fss: &FSupLattice) -> Result<(TensorLattice, FrameUnit)> {
    let q = tensor(frame, fss)?;
    let hf = hom_frame(fss, q.lattice())?;
    let map = phi_between(frame, fss, &q, &hf)?;
    Ok((q, FrameUnit { hom_frame: hf, map }))
}

fn phi_between(frame: &Frame, fss: &FSupLattice, q: &TensorLattice, hf: &HomFrame) -> Result<FrameHom> {
    let g = fss.lattice();
    let table = (0..frame.len())
        .map(|i| {
            let values: Vec<Element> = g
                .elements()
                .map(|x| q.project(&point_tuple(g, x, frame.len(), i)))
                .collect();
            require_node(hf, &values, "φ_J(i) preserves joins")
        })
        .collect::<Result<Vec<_>>>()?;
    FrameHom::new(frame, hf.frame(), table).map_err(|e| Error::law("φ_J is a frame hom", e.to_string()))
}

/// `ψ_L: J[H,L]⊗H -> L`, induced by `f_L(x) = ⋁_α α(x(α))`.
pub fn psi(fss: &FSupLattice, lattice: &SupLattice) -> Result<(HomFrame, Counit)> {
    let hf = hom_frame(fss, lattice)?;
    let q = tensor(hf.frame(), fss)?;
    let (map, coverage) = q.factor(lattice, |x| evaluate_homs(&hf, x))?;
    Ok((
        hf,
        Counit {
            tensor: q,
            map,
            coverage,
        },
    ))
}

/// `ν_J: J -> J[L^J, L]`.
pub fn nu(frame: &Frame, lattice: &SupLattice) -> Result<(FrameOperatorLattice, FrameUnit)> {
    let power = frame_operator(lattice, frame)?;
    let hf = hom_frame(power.fss(), lattice)?;
    let map = nu_between(&power, &hf)?;
    Ok((power, FrameUnit { hom_frame: hf, map }))
}

fn nu_between(power: &FrameOperatorLattice, hf: &HomFrame) -> Result<FrameHom> {
    let frame = power.frame();
    let table = (0..frame.len())
        .map(|i| {
            let values: Vec<Element> = power
                .lattice()
                .elements()
                .map(|x| power.tuple(x).get(i))
                .collect();
            require_node(hf, &values, "evaluation preserves joins")
        })
        .collect::<Result<Vec<_>>>()?;
    FrameHom::new(frame, hf.frame(), table).map_err(|e| Error::law("ν_J is a frame hom", e.to_string()))
}

/// `μ_H: H -> L^{J[H,L]}` with the structures it lives between.
#[derive(Debug, Clone)]
pub struct PowerUnit {
    pub hom_frame: HomFrame,
    pub power: FrameOperatorLattice,
    pub map: JoinHom,
}

/// `μ_H(x)(α) = α(x)`; checked to be lax.
pub fn mu(fss: &FSupLattice, lattice: &SupLattice) -> Result<PowerUnit> {
    let hf = hom_frame(fss, lattice)?;
    let power = frame_operator(lattice, hf.frame())?;
    let g = fss.lattice();
    let table = g
        .elements()
        .map(|x| power.element(&mu_tuple(&hf, x)))
        .collect();
    let map = JoinHom::new(g, power.lattice(), table)
        .map_err(|e| Error::law("μ preserves joins", e.to_string()))?;
    if let Some(x) = lax_violation(&map, fss, power.fss())? {
        return Err(Error::law("μ is lax", g.label(x).to_string()));
    }
    Ok(PowerUnit {
        hom_frame: hf,
        power,
        map,
    })
}

// ---------------------------------------------------------------------------
// Triangle identities.
// ---------------------------------------------------------------------------

/// Both triangle identities of one adjunction, plus the unit/counit laws
/// they rely on. `frame`, `fss` and `lattice` play the roles of `J`, `H`
/// and `L`; each adjunction fixes one of them and varies the other two.
pub fn check_triangles(which: Adjunction, frame: &Frame, fss: &FSupLattice, lattice: &SupLattice) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::new(format!("adjunction {which}"), describe(frame, fss, lattice));
    match which {
        Adjunction::I => {
            report.absorb(triangle_i_unit_side(frame, fss)?);
            report.absorb(triangle_i_counit_side(frame, lattice)?);
        }
        Adjunction::II => {
            report.absorb(triangle_ii_frame_side(frame, fss)?);
            report.absorb(triangle_ii_lattice_side(fss, lattice)?);
        }
        Adjunction::III => {
            report.absorb(triangle_iii_frame_side(frame, lattice)?);
            report.absorb(triangle_iii_fss_side(fss, lattice)?);
        }
    }
    Ok(report)
}

/// `ε_{J⊗H} ∘ (J⊗η_H) = id` on `J⊗H`, and `η_H` is lax.
fn triangle_i_unit_side(frame: &Frame, fss: &FSupLattice) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::new("", "");
    let g = fss.lattice();
    let n = frame.len();
    let q = tensor(frame, fss)?;
    let ql = q.lattice();
    // eta[x][i] = n(x_{i=}) as an element of J⊗H.
    let eta: Vec<Vec<Element>> = g
        .elements()
        .map(|x| (0..n).map(|i| q.project(&point_tuple(g, x, n, i))).collect())
        .collect();

    let mut lax = Tally::default();
    for x in g.elements() {
        for i in 0..n {
            let lhs = ql.join_all(frame.successors(i).iter().map(|&k| eta[x.0][k]));
            let rhs = eta[fss.f(x).0][i];
            lax.check(ql.leq(lhs, rhs), || format!("x = {}, i = {}", g.label(x), frame.label(i)));
        }
    }
    report.push("η_H is lax", lax.verdict());

    let power = frame_operator(ql, frame)?;
    let outer = TensorNucleus::new(frame, power.fss())?;
    let eta_elem: Vec<Element> = eta.iter().map(|row| power.element(&Tuple(row.clone()))).collect();
    report.push(
        "ε_{J⊗H} is well defined",
        coverage_verdict(outer.check_constant_on_classes(|xbar| diagonal(&power, xbar)))?,
    );
    let mut tri = Tally::default();
    for c in ql.elements() {
        let rep = q.rep(c);
        let lifted = Tuple(rep.iter().map(|x| eta_elem[x.0]).collect());
        let back = diagonal(&power, &outer.close(&lifted));
        tri.check(back == c, || format!("class {}", ql.label(c)));
    }
    report.push("ε_{J⊗H} ∘ (J⊗η_H) = id", tri.verdict());
    Ok(report)
}

/// `(ε_L)^J ∘ η_{L^J} = id` on `L^J`.
fn triangle_i_counit_side(frame: &Frame, lattice: &SupLattice) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::new("", "");
    let n = frame.len();
    let power = frame_operator(lattice, frame)?;
    let nucleus = TensorNucleus::new(frame, power.fss())?;
    report.push(
        "ε_L is well defined",
        coverage_verdict(nucleus.check_constant_on_classes(|xbar| diagonal(&power, xbar)))?,
    );
    let mut tri = Tally::default();
    for x in power.lattice().elements() {
        let xt = power.tuple(x);
        for i in 0..n {
            let class = nucleus.close(&point_tuple(power.lattice(), x, n, i));
            tri.check(diagonal(&power, &class) == xt.get(i), || {
                format!("x = {}, i = {}", power.lattice().label(x), frame.label(i))
            });
        }
    }
    report.push("(ε_L)^J ∘ η_{L^J} = id", tri.verdict());
    Ok(report)
}

/// `ψ_{J⊗H} ∘ (φ_J⊗H) = id` on `J⊗H`, and `φ_J` is a frame hom.
fn triangle_ii_frame_side(frame: &Frame, fss: &FSupLattice) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::new("", "");
    let g = fss.lattice();
    let q = tensor(frame, fss)?;
    let hf = hom_frame(fss, q.lattice())?;
    let phi_map = match phi_between(frame, fss, &q, &hf) {
        Ok(t) => {
            report.push("φ_J is a frame hom", Verdict::Pass { checked: frame.rel().len() });
            t
        }
        Err(e) => {
            report.push("φ_J is a frame hom", verdict_of(Err(e))?);
            return Ok(report);
        }
    };
    let outer = TensorNucleus::new(hf.frame(), fss)?;
    report.push(
        "ψ_{J⊗H} is well defined",
        coverage_verdict(outer.check_constant_on_classes(|x| evaluate_homs(&hf, x)))?,
    );
    let mut tri = Tally::default();
    for c in q.lattice().elements() {
        let moved = forward_tuple(g, &phi_map, &q.rep(c));
        let back = evaluate_homs(&hf, &outer.close(&moved));
        tri.check(back == c, || format!("class {}", q.lattice().label(c)));
    }
    report.push("ψ_{J⊗H} ∘ (φ_J⊗H) = id", tri.verdict());
    Ok(report)
}

/// `J[H,ψ_L] ∘ φ_{J[H,L]} = id` on `J[H,L]`.
fn triangle_ii_lattice_side(fss: &FSupLattice, lattice: &SupLattice) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::new("", "");
    let g = fss.lattice();
    let hf = hom_frame(fss, lattice)?;
    let nucleus = TensorNucleus::new(hf.frame(), fss)?;
    report.push(
        "ψ_L is well defined",
        coverage_verdict(nucleus.check_constant_on_classes(|x| evaluate_homs(&hf, x)))?,
    );
    let mut tri = Tally::default();
    for (a, alpha) in hf.homs().iter().enumerate() {
        let composite: Vec<Element> = g
            .elements()
            .map(|x| evaluate_homs(&hf, &nucleus.close(&point_tuple(g, x, hf.len(), a))))
            .collect();
        tri.check(composite == alpha.table(), || format!("node {}", hf.frame().label(a)));
    }
    report.push("J[H,ψ_L] ∘ φ_{J[H,L]} = id", tri.verdict());
    Ok(report)
}

/// `L^{ν_J} ∘ μ_{L^J} = id` on `L^J`, with `ν_J` a frame hom and `μ_{L^J}` lax.
fn triangle_iii_frame_side(frame: &Frame, lattice: &SupLattice) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::new("", "");
    let power = frame_operator(lattice, frame)?;
    let hf = hom_frame(power.fss(), lattice)?;
    let nu_map = match nu_between(&power, &hf) {
        Ok(t) => {
            report.push("ν_J is a frame hom", Verdict::Pass { checked: frame.rel().len() });
            t
        }
        Err(e) => {
            report.push("ν_J is a frame hom", verdict_of(Err(e))?);
            return Ok(report);
        }
    };
    report.push("μ_{L^J} is lax", mu_lax(&hf, power.fss()));
    let mut tri = Tally::default();
    for x in power.lattice().elements() {
        let xt = power.tuple(x);
        for i in 0..frame.len() {
            let value = hf.hom(nu_map.apply(i)).apply(x);
            tri.check(value == xt.get(i), || {
                format!("x = {}, i = {}", power.lattice().label(x), frame.label(i))
            });
        }
    }
    report.push("L^{ν_J} ∘ μ_{L^J} = id", tri.verdict());
    Ok(report)
}

/// `F^{J[H,L]}(μ(x)) <= μ(F(x))`, i.e. `⋁{γ(x) | α S γ} <= α(F(x))`.
fn mu_lax(hf: &HomFrame, fss: &FSupLattice) -> Verdict {
    let l = hf.target();
    let g = fss.lattice();
    let mut lax = Tally::default();
    for x in g.elements() {
        for a in 0..hf.len() {
            let lhs = l.join_all(hf.frame().successors(a).iter().map(|&c| hf.hom(c).apply(x)));
            let rhs = hf.hom(a).apply(fss.f(x));
            lax.check(l.leq(lhs, rhs), || format!("x = {}, α = {}", g.label(x), hf.frame().label(a)));
        }
    }
    lax.verdict()
}

/// `J[μ_H,L] ∘ ν_{J[H,L]} = id` on `J[H,L]`, with `μ_H` lax and
/// `ν_{J[H,L]}` a frame hom.
fn triangle_iii_fss_side(fss: &FSupLattice, lattice: &SupLattice) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::new("", "");
    let g = fss.lattice();
    let hf = hom_frame(fss, lattice)?;
    report.push("μ_H is lax", mu_lax(&hf, fss));
    // ν(α) S ν(β) in J[L^{J[H,L]}, L]: y(β) <= ⋁{y(γ) | α S γ} for all y.
    // Both sides preserve joins in y, so the point tuples l_{δ=} suffice.
    let mut rel = Tally::default();
    for &(a, b) in hf.frame().rel() {
        for l in lattice.elements() {
            for d in 0..hf.len() {
                let y = point_tuple(lattice, l, hf.len(), d);
                let rhs = lattice.join_all(hf.frame().successors(a).iter().map(|&c| y.get(c)));
                rel.check(lattice.leq(y.get(b), rhs), || {
                    format!("({}, {})", hf.frame().label(a), hf.frame().label(b))
                });
            }
        }
    }
    report.push("ν_{J[H,L]} is a frame hom", rel.verdict());
    let mut tri = Tally::default();
    for a in 0..hf.len() {
        // ν(α) ∘ μ_H : x ↦ μ_H(x)(α).
        let table: Vec<Element> = g.elements().map(|x| mu_tuple(&hf, x).get(a)).collect();
        tri.check(hf.node_of(&table) == Some(a), || format!("node {}", hf.frame().label(a)));
    }
    report.push("J[μ_H,L] ∘ ν_{J[H,L]} = id", tri.verdict());
    Ok(report)
}

// ---------------------------------------------------------------------------
// Naturality squares.
// ---------------------------------------------------------------------------

/// A morphism to test naturality against.
#[derive(Debug, Clone)]
pub enum Morphism {
    /// A lax morphism `f: H1 -> H2`.
    Lax {
        map: JoinHom,
        source: FSupLattice,
        target: FSupLattice,
    },
    /// A join-preserving map `g: L1 -> L2`.
    Sup(JoinHom),
    /// A frame homomorphism `t: J1 -> J2`.
    Frame(FrameHom),
}

/// The fixed parameters a transformation needs besides its morphism.
#[derive(Debug, Clone)]
pub struct Context {
    pub frame: Frame,
    pub fss: FSupLattice,
    pub lattice: SupLattice,
}

/// Checks the naturality square of one transformation against a morphism
/// of the right kind.
pub fn check_naturality(which: Transformation, ctx: &Context, morphism: &Morphism) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::new(format!("naturality of {which}"), describe(&ctx.frame, &ctx.fss, &ctx.lattice));
    match (which, morphism) {
        (Transformation::Eta, Morphism::Lax { map, source, target }) => {
            naturality_eta(&mut report, &ctx.frame, map, source, target)?
        }
        (Transformation::Mu, Morphism::Lax { map, source, target }) => {
            naturality_mu(&mut report, &ctx.lattice, map, source, target)?
        }
        (Transformation::Epsilon, Morphism::Sup(g)) => naturality_epsilon(&mut report, &ctx.frame, g)?,
        (Transformation::Psi, Morphism::Sup(g)) => naturality_psi(&mut report, &ctx.fss, g)?,
        (Transformation::Phi, Morphism::Frame(t)) => naturality_phi(&mut report, &ctx.fss, t)?,
        (Transformation::Nu, Morphism::Frame(t)) => naturality_nu(&mut report, &ctx.lattice, t)?,
        (which, _) => {
            return Err(Error::CarrierMismatch(format!(
                "{which} is natural with respect to a different kind of morphism"
            )))
        }
    }
    Ok(report)
}

fn require_lax(f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<()> {
    if !is_lax_morphism(f, h1, h2)? {
        return Err(Error::NotLax("naturality needs a lax morphism".into()));
    }
    Ok(())
}

fn map_tuple(f: &JoinHom, a: &Tuple) -> Tuple {
    Tuple(a.iter().map(|x| f.apply(x)).collect())
}

/// `(J⊗f)^J ∘ η_{H1} = η_{H2} ∘ f`.
fn naturality_eta(report: &mut AdjunctionReport, frame: &Frame, f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<()> {
    require_lax(f, h1, h2)?;
    let n = frame.len();
    let n1 = TensorNucleus::new(frame, h1)?;
    let n2 = TensorNucleus::new(frame, h2)?;
    report.push(
        "J⊗f is well defined",
        coverage_verdict(n1.check_constant_on_classes(|a| n2.close(&map_tuple(f, a))))?,
    );
    let (g1, g2) = (h1.lattice(), h2.lattice());
    let mut sq = Tally::default();
    for x in g1.elements() {
        for i in 0..n {
            let lhs = n2.close(&map_tuple(f, &n1.close(&point_tuple(g1, x, n, i))));
            let rhs = n2.close(&point_tuple(g2, f.apply(x), n, i));
            sq.check(lhs == rhs, || format!("x = {}, i = {}", g1.label(x), frame.label(i)));
        }
    }
    report.push("(J⊗f)^J ∘ η_{H1} = η_{H2} ∘ f", sq.verdict());
    Ok(())
}

/// `g ∘ ε_{L1} = ε_{L2} ∘ (J⊗g^J)`, on the generators `[y_{i=}]`.
fn naturality_epsilon(report: &mut AdjunctionReport, frame: &Frame, g: &JoinHom) -> Result<()> {
    let n = frame.len();
    let p1 = frame_operator(g.source(), frame)?;
    let p2 = frame_operator(g.target(), frame)?;
    let gj = crate::constructions::hom_power_map_between(g, &p1, &p2)?;
    let n1 = TensorNucleus::new(frame, p1.fss())?;
    let n2 = TensorNucleus::new(frame, p2.fss())?;
    report.push(
        "J⊗g^J is well defined",
        coverage_verdict(n1.check_constant_on_classes(|a| n2.close(&map_tuple(&gj, a))))?,
    );
    let mut sq = Tally::default();
    for y in p1.lattice().elements() {
        for i in 0..n {
            let class = n1.close(&point_tuple(p1.lattice(), y, n, i));
            let lhs = g.apply(diagonal(&p1, &class));
            let rhs = diagonal(&p2, &n2.close(&map_tuple(&gj, &class)));
            sq.check(lhs == rhs, || format!("y = {}, i = {}", p1.lattice().label(y), frame.label(i)));
        }
    }
    report.push("g ∘ ε_{L1} = ε_{L2} ∘ (J⊗g^J)", sq.verdict());
    Ok(())
}

/// `J[H, t⊗H] ∘ φ_{J1} = φ_{J2} ∘ t`.
fn naturality_phi(report: &mut AdjunctionReport, fss: &FSupLattice, t: &FrameHom) -> Result<()> {
    let g = fss.lattice();
    let (j1, j2) = (t.source(), t.target());
    let n1 = TensorNucleus::new(j1, fss)?;
    let n2 = TensorNucleus::new(j2, fss)?;
    report.push(
        "t⊗H is well defined",
        coverage_verdict(n1.check_constant_on_classes(|a| n2.close(&forward_tuple(g, t, a))))?,
    );
    let mut sq = Tally::default();
    for i in 0..j1.len() {
        for x in g.elements() {
            let class = n1.close(&point_tuple(g, x, j1.len(), i));
            let lhs = n2.close(&forward_tuple(g, t, &class));
            let rhs = n2.close(&point_tuple(g, x, j2.len(), t.apply(i)));
            sq.check(lhs == rhs, || format!("i = {}, x = {}", j1.label(i), g.label(x)));
        }
    }
    report.push("J[H,t⊗H] ∘ φ_{J1} = φ_{J2} ∘ t", sq.verdict());
    Ok(())
}

/// `g ∘ ψ_{L1} = ψ_{L2} ∘ (J[H,g]⊗H)`, on the generators `[x_{α=}]`.
fn naturality_psi(report: &mut AdjunctionReport, fss: &FSupLattice, g: &JoinHom) -> Result<()> {
    let gl = fss.lattice();
    let hf1 = hom_frame(fss, g.source())?;
    let hf2 = hom_frame(fss, g.target())?;
    let s = match hf1.map_cod(g, &hf2) {
        Ok(s) => s,
        Err(e) => {
            report.push("J[H,g] is a frame hom", verdict_of(Err(e))?);
            return Ok(());
        }
    };
    let n1 = TensorNucleus::new(hf1.frame(), fss)?;
    let n2 = TensorNucleus::new(hf2.frame(), fss)?;
    report.push(
        "J[H,g]⊗H is well defined",
        coverage_verdict(n1.check_constant_on_classes(|a| n2.close(&forward_tuple(gl, &s, a))))?,
    );
    let mut sq = Tally::default();
    for a in 0..hf1.len() {
        for x in gl.elements() {
            let class = n1.close(&point_tuple(gl, x, hf1.len(), a));
            let lhs = g.apply(evaluate_homs(&hf1, &class));
            let rhs = evaluate_homs(&hf2, &n2.close(&forward_tuple(gl, &s, &class)));
            sq.check(lhs == rhs, || format!("α = {}, x = {}", hf1.frame().label(a), gl.label(x)));
        }
    }
    report.push("g ∘ ψ_{L1} = ψ_{L2} ∘ (J[H,g]⊗H)", sq.verdict());
    Ok(())
}

/// `J[L^t, L] ∘ ν_{J1} = ν_{J2} ∘ t`.
fn naturality_nu(report: &mut AdjunctionReport, lattice: &SupLattice, t: &FrameHom) -> Result<()> {
    let p1 = frame_operator(lattice, t.source())?;
    let p2 = frame_operator(lattice, t.target())?;
    let hf1 = hom_frame(p1.fss(), lattice)?;
    let hf2 = hom_frame(p2.fss(), lattice)?;
    let lt = backward_powerset_between(t, &p2, &p1)?;
    let nu1 = nu_between(&p1, &hf1)?;
    let nu2 = nu_between(&p2, &hf2)?;
    let pre = match hf1.map_dom(&lt, &hf2) {
        Ok(s) => s,
        Err(e) => {
            report.push("J[L^t,L] is a frame hom", verdict_of(Err(e))?);
            return Ok(());
        }
    };
    let mut sq = Tally::default();
    for i in 0..t.source().len() {
        sq.check(pre.apply(nu1.apply(i)) == nu2.apply(t.apply(i)), || {
            format!("i = {}", t.source().label(i))
        });
    }
    // The same square read pointwise: (L^t(y))(i) = y(t(i)).
    for y in p2.lattice().elements() {
        let yt = p2.tuple(y);
        let back = backward_tuple(t, &yt);
        for i in 0..t.source().len() {
            sq.check(back.get(i) == yt.get(t.apply(i)), || {
                format!("y = {}, i = {}", p2.lattice().label(y), t.source().label(i))
            });
        }
    }
    report.push("J[L^t,L] ∘ ν_{J1} = ν_{J2} ∘ t", sq.verdict());
    Ok(())
}

/// `L^{J[f,L]} ∘ μ_{H1} = μ_{H2} ∘ f`.
fn naturality_mu(report: &mut AdjunctionReport, lattice: &SupLattice, f: &JoinHom, h1: &FSupLattice, h2: &FSupLattice) -> Result<()> {
    require_lax(f, h1, h2)?;
    let hf1 = hom_frame(h1, lattice)?;
    let hf2 = hom_frame(h2, lattice)?;
    let pre = match hf2.map_dom(f, &hf1) {
        Ok(s) => s,
        Err(e) => {
            report.push("J[f,L] is a frame hom", verdict_of(Err(e))?);
            return Ok(());
        }
    };
    let g1 = h1.lattice();
    let mut sq = Tally::default();
    for x in g1.elements() {
        let left = mu_tuple(&hf1, x);
        let right = mu_tuple(&hf2, f.apply(x));
        for b in 0..hf2.len() {
            sq.check(left.get(pre.apply(b)) == right.get(b), || {
                format!("x = {}, β = {}", g1.label(x), hf2.frame().label(b))
            });
        }
    }
    report.push("L^{J[f,L]} ∘ μ_{H1} = μ_{H2} ∘ f", sq.verdict());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::make_frame;
    use crate::lattice::validate_lattice;

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
    fn all_triangles_on_the_worked_instance() {
        let (j, h, l) = (j3(), diamond_swap(), SupLattice::two());
        for which in [Adjunction::I, Adjunction::II, Adjunction::III] {
            let r = check_triangles(which, &j, &h, &l).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn singleton_inputs_pass() {
        let one = SupLattice::singleton("0");
        let j = make_frame(&["*"], &[("*", "*")]).unwrap();
        let h = FSupLattice::plain(&one);
        for which in [Adjunction::I, Adjunction::II, Adjunction::III] {
            assert!(check_triangles(which, &j, &h, &one).unwrap().passed());
        }
    }

    #[test]
    fn explicit_units_and_counits() {
        let (j, h) = (j3(), diamond_swap());
        let unit = eta(&j, &h).unwrap();
        assert_eq!(unit.power.lattice().len(), 3375);
        let b = h.lattice().element("b").unwrap();
        assert_eq!(unit.power.lattice().label(unit.map.apply(b)), "((b,c,0),(c,b,0),(0,0,1))");
        let eps = epsilon(&make_frame(&["*"], &[("*", "*")]).unwrap(), &SupLattice::two()).unwrap();
        assert_eq!(eps.map.target().len(), 2);
        let two = SupLattice::two();
        let m = mu(&h, &two).unwrap();
        assert!(crate::morphisms::is_in_e_leq(&m.map, &h, m.power.fss()).unwrap());
        let (_, nu_j) = nu(&j, &two).unwrap();
        assert_eq!(nu_j.map.table().len(), 3);
    }

    #[test]
    fn identity_morphisms_are_natural() {
        let (j, h, l) = (j3(), diamond_swap(), SupLattice::two());
        let ctx = Context {
            frame: j.clone(),
            fss: h.clone(),
            lattice: l.clone(),
        };
        let lax = Morphism::Lax {
            map: JoinHom::identity(h.lattice()),
            source: h.clone(),
            target: h.clone(),
        };
        let sup = Morphism::Sup(JoinHom::identity(&l));
        let fr = Morphism::Frame(FrameHom::identity(&j));
        for (t, m) in [
            (Transformation::Eta, &lax),
            (Transformation::Mu, &lax),
            (Transformation::Epsilon, &sup),
            (Transformation::Psi, &sup),
            (Transformation::Phi, &fr),
            (Transformation::Nu, &fr),
        ] {
            let r = check_naturality(t, &ctx, m).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
        assert!(check_naturality(Transformation::Eta, &ctx, &sup).is_err());
    }
}
