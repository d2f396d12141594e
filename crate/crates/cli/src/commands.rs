//! Subcommand definitions and their handlers.

use crate::input;
use crate::sectors::emit_sectors;
use crate::{bounded, certified, write_atomic, Outcome};
use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use klein_lattice::abelian::{h1_abelian, AbelianModule};
use klein_lattice::cohomology::{
    h1_finite, les_of_pointed_sets, twist, twist_fiber_check, GGroup, H1Set, ShortExactSequence,
};
use klein_lattice::cone::PolyhedralCone;
use klein_lattice::domain::{
    dirichlet_domain, find_trivial_stabilizer_point, siegel_intersections, verify_and_record, DomainCertificate,
    DomainError, PositiveCone, VerifyOptions,
};
use klein_lattice::filtration::{filtration_finite, filtration_semidirect, infinite_dihedral_example};
use klein_lattice::hilbert::hilbert_square_extension;
use klein_lattice::hodge::{kaut_star_criterion, torelli_anti_check, HodgeLattice, KahlerModel, Monodromy};
use klein_lattice::isometry::{
    characteristic_polynomial, definite_group_order, finite_order, fixes_pointwise_implies_identity,
    isometry_group_definite, stabilizer, Gamma, GeneratedGroup,
};
use klein_lattice::lattice::{IntegerLattice, Sublattice};
use klein_lattice::matrix::IntMatrix;
use klein_lattice::num::{self, Int, JsonInt};
use klein_lattice::smith::smith;
use klein_lattice::real_forms::{real_structure_classifier, KleinGroup};
use klein_lattice::reduction::classify_finite_subgroups_on_cone;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Integral quadratic lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Isometries and their stabilizers.
    #[command(subcommand)]
    Isom(IsomCmd),
    /// Fundamental domains on positive cones.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Non-abelian first cohomology.
    #[command(subcommand)]
    H1(H1Cmd),
    /// Hodge lattices, Torelli checks and Klein automorphisms.
    #[command(subcommand)]
    Hk(HkCmd),
}

impl Command {
    pub fn names(&self) -> (&'static str, String) {
        fn sub<T: Serialize>(t: &T) -> String {
            match serde_json::to_value(t) {
                Ok(Value::Object(m)) => m.keys().next().cloned().unwrap_or_default(),
                Ok(Value::String(s)) => s,
                _ => String::new(),
            }
        }
        match self {
            Command::Lattice(c) => ("lattice", sub(c)),
            Command::Isom(c) => ("isom", sub(c)),
            Command::Cone(c) => ("cone", sub(c)),
            Command::H1(c) => ("h1", sub(c)),
            Command::Hk(c) => ("hk", sub(c)),
        }
    }

    /// Arguments of the subcommand as given on the command line.
    pub fn args(&self) -> Result<Value> {
        let v = match self {
            Command::Lattice(c) => serde_json::to_value(c)?,
            Command::Isom(c) => serde_json::to_value(c)?,
            Command::Cone(c) => serde_json::to_value(c)?,
            Command::H1(c) => serde_json::to_value(c)?,
            Command::Hk(c) => serde_json::to_value(c)?,
        };
        Ok(match v {
            Value::Object(m) => m.into_iter().next().map(|(_, a)| a).unwrap_or(Value::Null),
            other => other,
        })
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeCmd {
    Signature(LatticeIn),
    Radical(LatticeIn),
    /// Trichotomy type of each input, or of a sublattice of it.
    Classify(ClassifyArgs),
    Discriminant(LatticeIn),
    /// Saturation of the span of some vectors, with its index.
    Saturate(SaturateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct LatticeIn {
    /// Lattice file, inline `{"rank","gram"}` JSON, or a name such as `U+E8(-1)`.
    #[arg(long = "in", required = true, num_args = 1..)]
    input: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    lattice: LatticeIn,
    /// Basis rows of a sublattice to classify instead of the whole lattice.
    #[arg(long)]
    sublattice: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct SaturateArgs {
    #[arg(long = "in")]
    input: String,
    /// Rows spanning the sublattice.
    #[arg(long)]
    vectors: String,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsomCmd {
    /// Whether a matrix is an isometry, with its order and characteristic polynomial.
    Check(CheckArgs),
    /// Order of the isometry group of a definite lattice.
    DefiniteGroup(DefiniteArgs),
    /// Whether an isometry fixing a sublattice pointwise must be the identity.
    FixSublattice(FixArgs),
    /// Stabilizer of a point of the positive cone.
    Stabilizer(StabilizerArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    matrix: String,
}

#[derive(Debug, Args, Serialize)]
pub struct DefiniteArgs {
    #[arg(long = "in")]
    input: String,
    /// Also list the elements (refused above a size cap).
    #[arg(long)]
    list: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct FixArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    sublattice: String,
}

#[derive(Debug, Args, Serialize)]
pub struct StabilizerArgs {
    #[arg(long = "in")]
    input: String,
    /// `orthogonal-plus` or a generated group (`{"generators", "word_bound"}`).
    #[arg(long, default_value = "orthogonal-plus")]
    gamma: String,
    #[arg(long)]
    point: String,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeCmd {
    /// Dirichlet domain certificate for a group acting on a positive cone.
    Domain(DomainArgs),
    /// Sampled covering and exact disjointness check of a certificate.
    Verify(VerifyArgs),
    /// Translates of a domain meeting it (or a second cone).
    Siegel(SiegelArgs),
    /// Reduce a point into the domain, or decide membership of a matrix.
    Member(MemberArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DomainArgs {
    /// Positive cone as `{"lattice", "component_base"}`.
    #[arg(long)]
    cone: String,
    #[arg(long)]
    gamma: String,
    /// Centre point; searched for when absent.
    #[arg(long)]
    xi: Option<String>,
    /// Coordinate bound of the centre point search.
    #[arg(long, default_value_t = 4)]
    xi_bound: i64,
    /// CSV of boundary and translate rays (ambient rank 2 or 3).
    #[arg(long)]
    sectors: Option<String>,
    #[arg(long, default_value_t = 2)]
    sector_depth: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    domain: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 1000)]
    coordinate_bound: i64,
    #[arg(long, default_value_t = 20)]
    max_steps: usize,
    /// Word length up to which translates are checked for interior overlap.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long)]
    sectors: Option<String>,
    #[arg(long, default_value_t = 2)]
    sector_depth: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SiegelArgs {
    #[arg(long)]
    domain: String,
    /// Second polyhedral cone; the domain itself when absent.
    #[arg(long)]
    with: Option<String>,
    /// Word bound; the certificate's bound when absent.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct MemberArgs {
    #[arg(long)]
    domain: String,
    #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
    point: Option<String>,
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long, default_value_t = 20)]
    max_steps: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum H1Cmd {
    /// First cohomology of a finite G-group or an abelian module.
    Compute(CoefficientArgs),
    /// Twist of a G-group by a cocycle.
    Twist(TwistArgs),
    /// Long exact sequence and twist fibers for a normal G-subgroup.
    Les(LesArgs),
    /// H¹ through a filtration with abelian or finite layers.
    Filtration(FiltrationArgs),
    /// Real structures of a Klein group via H¹(Z/2, -).
    RealForms(RealFormsArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CoefficientArgs {
    /// Acting group: a name (`Z2`, `S3`, `Z2xZ2`, ...) or group JSON.
    #[arg(long, required_unless_present = "module")]
    group: Option<String>,
    /// Coefficient group, same formats as `--group`.
    #[arg(long, requires = "group")]
    coeff: Option<String>,
    /// `trivial`, `{"conjugation": hom}`, `{"generators": [[g, aut]]}` or `{"table": auts}`.
    #[arg(long, default_value = "trivial")]
    action: String,
    /// Finitely generated abelian module `{"acting", "free_rank", "moduli", "action"}`.
    #[arg(long, conflicts_with_all = ["group", "coeff"])]
    module: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct FiniteCoefficients {
    #[arg(long)]
    group: String,
    #[arg(long)]
    coeff: String,
    #[arg(long, default_value = "trivial")]
    action: String,
}

#[derive(Debug, Args, Serialize)]
pub struct TwistArgs {
    #[command(flatten)]
    #[serde(flatten)]
    coefficients: FiniteCoefficients,
    /// Cocycle values on every acting element.
    #[arg(long)]
    cocycle: String,
    /// G-stable normal subgroup to twist; the whole group when absent.
    #[arg(long)]
    sub: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct LesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    coefficients: FiniteCoefficients,
    #[arg(long)]
    normal: String,
}

#[derive(Debug, Args, Serialize)]
pub struct FiltrationArgs {
    #[arg(long, required_unless_present = "example")]
    group: Option<String>,
    #[arg(long)]
    coeff: Option<String>,
    #[arg(long, default_value = "trivial")]
    action: String,
    /// Descending chain of subgroups, largest first, ending in the trivial group.
    #[arg(long, requires_all = ["group", "coeff"])]
    chain: Option<String>,
    /// Built-in semidirect example; only `infinite-dihedral` is available.
    #[arg(long, conflicts_with_all = ["group", "coeff", "chain"])]
    example: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct RealFormsArgs {
    #[arg(long)]
    group: String,
    /// For each element, whether it acts holomorphically.
    #[arg(long)]
    holomorphic: String,
    /// Index of the reference anti-holomorphic involution.
    #[arg(long)]
    sigma: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HkCmd {
    /// Neron-Severi and transcendental lattices of a Hodge lattice.
    Ns(HodgeIn),
    /// Whether the Neron-Severi lattice is hyperbolic.
    Projective(HodgeIn),
    /// Anti-holomorphic Torelli conditions for a lattice map.
    Torelli(TorelliArgs),
    /// Extension of an anti-Hodge involution to the Hilbert scheme lattice.
    Hilbert(HilbertArgs),
    /// Whether an isometry comes from a Klein automorphism.
    KautCriterion(KautArgs),
    /// Conjugacy classes of finite subgroups found on a fundamental domain.
    ClassifySubgroups(ClassifyGroupsArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct HodgeIn {
    /// Hodge lattice `{"lattice", "period_re", "period_im"}`.
    #[arg(long)]
    hodge: String,
}

#[derive(Debug, Args, Serialize)]
pub struct TorelliArgs {
    #[arg(long)]
    source: String,
    #[arg(long)]
    target: String,
    #[arg(long)]
    phi: String,
    #[arg(long)]
    kahler_source: String,
    #[arg(long)]
    kahler_target: String,
    /// Monodromy description; the full orthogonal group when absent.
    #[arg(long)]
    mon: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct HilbertArgs {
    #[arg(long)]
    hodge: String,
    /// Anti-Hodge involution of the surface lattice.
    #[arg(long)]
    sigma: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    kahler: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct KautArgs {
    #[arg(long)]
    hodge: String,
    #[arg(long)]
    phi: String,
    #[arg(long)]
    kahler: String,
    #[arg(long)]
    mon: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyGroupsArgs {
    #[arg(long)]
    gamma: String,
    #[arg(long)]
    domain: String,
}

pub fn dispatch(cmd: &Command, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Lattice(c) => lattice(c),
        Command::Isom(c) => isom(c),
        Command::Cone(c) => cone(c, seed),
        Command::H1(c) => h1(c),
        Command::Hk(c) => hk(c),
    }
}

/// Failures of a check that ran to completion, as opposed to bad input.
pub fn is_verification_failure(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(
            c.downcast_ref::<DomainError>(),
            Some(DomainError::CoverageFailure { .. } | DomainError::DisjointnessFailure { .. })
        )
    })
}

fn for_each_input(inputs: &[String], f: impl Fn(&IntegerLattice) -> Result<Value>) -> Result<Value> {
    let mut out = Vec::with_capacity(inputs.len());
    for arg in inputs {
        let l = input::lattice(arg)?;
        out.push(f(&l)?);
    }
    Ok(if out.len() == 1 { out.pop().expect("one") } else { Value::Array(out) })
}

fn lattice(cmd: &LatticeCmd) -> Result<Outcome> {
    let result = match cmd {
        LatticeCmd::Signature(a) => for_each_input(&a.input, |l| {
            Ok(json!({ "rank": l.rank(), "signature": l.signature(), "det": JsonInt(&l.det()) }))
        })?,
        LatticeCmd::Radical(a) => for_each_input(&a.input, |l| {
            let r = l.radical();
            Ok(json!({ "rank": r.rank(), "basis": r }))
        })?,
        LatticeCmd::Classify(a) => {
            let sub = a.sublattice.as_deref().map(input::int_rows).transpose()?;
            for_each_input(&a.lattice.input, |l| {
                let target = match &sub {
                    Some(rows) => l.sublattice(rows.clone())?.restricted_lattice(l),
                    None => l.clone(),
                };
                Ok(json!({ "type": target.classify_type(), "signature": target.signature() }))
            })?
        }
        LatticeCmd::Discriminant(a) => for_each_input(&a.input, |l| {
            let d = l.discriminant_group()?;
            Ok(json!({ "order": JsonInt(&d.order()), "group": d }))
        })?,
        LatticeCmd::Saturate(a) => {
            let l = input::lattice(&a.input)?;
            let s = l.sublattice(input::int_rows(&a.vectors)?)?;
            let sat = l.saturation(&s);
            json!({
                "saturation": sat,
                "index_in_saturation": sat_index(&s, &sat),
                "was_primitive": s.is_primitive(),
            })
        }
    };
    Outcome::certified(result)
}

/// `[sat : s]`, the ratio of the products of Smith invariants of the bases.
fn sat_index(s: &Sublattice, sat: &Sublattice) -> String {
    let invariants = |b: &Sublattice| -> Int {
        let f = smith(&b.basis_matrix());
        f.diag[..f.rank].iter().product()
    };
    (invariants(s) / invariants(sat)).to_string()
}

fn isom(cmd: &IsomCmd) -> Result<Outcome> {
    match cmd {
        IsomCmd::Check(a) => {
            let l = input::lattice(&a.input)?;
            let m: IntMatrix = input::load(&a.matrix)?;
            let ok = klein_lattice::isometry::is_isometry(&l, &m)?;
            let order = if ok { finite_order(&m) } else { None };
            let charpoly: Vec<String> = characteristic_polynomial(&m).iter().map(ToString::to_string).collect();
            Outcome::certified(json!({ "is_isometry": ok, "finite_order": order, "characteristic_polynomial": charpoly }))
        }
        IsomCmd::DefiniteGroup(a) => {
            let l = input::lattice(&a.input)?;
            let order = definite_group_order(&l)?;
            let mut result = json!({ "order": order.to_string() });
            if a.list {
                result["elements"] = serde_json::to_value(isometry_group_definite(&l)?)?;
            }
            Outcome::certified(result)
        }
        IsomCmd::FixSublattice(a) => {
            let l = input::lattice(&a.input)?;
            let n = l.sublattice(input::int_rows(&a.sublattice)?)?;
            Outcome::certified(fixes_pointwise_implies_identity(&l, &n)?)
        }
        IsomCmd::Stabilizer(a) => {
            let l = input::lattice(&a.input)?;
            let gamma = gamma_arg(&l, &a.gamma)?;
            let x = input::rat_vec(&a.point)?;
            let r = stabilizer(&l, &gamma, &x)?;
            let completeness = r.completeness;
            Outcome::with(json!({ "order": r.elements.len(), "elements": r.elements }), completeness, true)
        }
    }
}

fn gamma_arg(l: &IntegerLattice, arg: &str) -> Result<Gamma> {
    if arg == "orthogonal-plus" {
        return Ok(Gamma::OrthogonalPlus);
    }
    Ok(Gamma::Generated(generated_group(l, arg)?))
}

fn generated_group(l: &IntegerLattice, arg: &str) -> Result<GeneratedGroup> {
    let g: GeneratedGroup = input::load(arg)?;
    g.check_on(l)?;
    Ok(g)
}

fn certificate(arg: &str) -> Result<DomainCertificate> {
    let cert: DomainCertificate = input::load(arg)?;
    let cone = PositiveCone::new(cert.cone.lattice.clone(), cert.cone.component_base.clone())?;
    cert.group.check_on(&cone.lattice)?;
    if cert.xi.len() != cone.rank() || cert.domain.dim() != cone.rank() {
        bail!("{arg}: certificate dimensions do not match its lattice");
    }
    Ok(cert)
}

fn write_sectors(cert: &DomainCertificate, path: &Option<String>, depth: usize) -> Result<Option<usize>> {
    let Some(path) = path else { return Ok(None) };
    let mut buf = Vec::new();
    let rows = emit_sectors(cert, depth, &mut buf)?;
    write_atomic(path, &buf)?;
    Ok(Some(rows))
}

fn cone(cmd: &ConeCmd, seed: u64) -> Result<Outcome> {
    match cmd {
        ConeCmd::Domain(a) => {
            let raw: PositiveCone = input::load(&a.cone)?;
            let c = PositiveCone::new(raw.lattice, raw.component_base)?;
            let group = generated_group(&c.lattice, &a.gamma)?;
            let xi = match &a.xi {
                Some(x) => input::rat_vec(x)?,
                None => find_trivial_stabilizer_point(&Gamma::Generated(group.clone()), &c, a.xi_bound)?,
            };
            let cert = dirichlet_domain(&group, &c, &xi)?;
            write_sectors(&cert, &a.sectors, a.sector_depth)?;
            let completeness = cert.stabilizer_completeness;
            Outcome::with(cert, completeness, true)
        }
        ConeCmd::Verify(a) => {
            let mut cert = certificate(&a.domain)?;
            let opts = VerifyOptions {
                samples: a.samples,
                seed,
                coordinate_bound: a.coordinate_bound,
                max_steps: a.max_steps,
                disjointness_depth: a.depth,
            };
            let report = verify_and_record(&mut cert, &opts)?;
            write_sectors(&cert, &a.sectors, a.sector_depth)?;
            Outcome::with(json!({ "report": report, "certificate": cert }), bounded(a.depth), true)
        }
        ConeCmd::Siegel(a) => {
            let mut cert = certificate(&a.domain)?;
            if let Some(d) = a.depth {
                cert.group.word_bound = d;
            }
            let other: PolyhedralCone = match &a.with {
                Some(w) => input::load(w)?,
                None => cert.domain.clone(),
            };
            let r = siegel_intersections(&cert.cone, &cert.domain, &other, &cert.group)?;
            let depth = r.word_bound;
            Outcome::with(json!({ "count": r.intersections.len(), "report": r }), bounded(depth), true)
        }
        ConeCmd::Member(a) => {
            let cert = certificate(&a.domain)?;
            if let Some(p) = &a.point {
                let x = input::rat_vec(p)?;
                let result = match cert.reduce(&x, a.max_steps) {
                    Some(r) => json!({
                        "contains": cert.contains(&x),
                        "reduced": true,
                        "element": r.element,
                        "steps": r.steps,
                        "point": r.point.iter().map(num::format_rat).collect::<Vec<_>>(),
                    }),
                    None => json!({ "contains": cert.contains(&x), "reduced": false }),
                };
                Outcome::with(result, bounded(a.max_steps), true)
            } else {
                let m: IntMatrix = input::load(a.matrix.as_deref().expect("clap requires one"))?;
                let member = cert.is_member(&m, a.max_steps);
                Outcome::with(json!({ "member": member }), bounded(a.max_steps), true)
            }
        }
    }
}

fn h1_summary(h: &H1Set) -> Value {
    json!({
        "h1_size": h.len(),
        "representatives": h.representatives,
        "class_sizes": h.class_sizes,
        "cocycle_count": h.cocycle_count,
    })
}

fn finite_coefficients(c: &FiniteCoefficients) -> Result<GGroup> {
    input::ggroup(&c.group, &c.coeff, &c.action)
}

fn h1(cmd: &H1Cmd) -> Result<Outcome> {
    match cmd {
        H1Cmd::Compute(a) => {
            if let Some(m) = &a.module {
                let raw: AbelianModule = input::load(m)?;
                let module = AbelianModule::new(
                    raw.acting().clone(),
                    raw.free_rank(),
                    raw.moduli().to_vec(),
                    (0..raw.acting().order()).map(|g| raw.matrix(g).clone()).collect(),
                )?;
                let h = h1_abelian(&module);
                let size = h.order().map(|o| o.to_string());
                return Outcome::certified(json!({ "h1_size": size, "structure": h }));
            }
            let group = a.group.as_deref().expect("clap requires --group");
            let coeff = a.coeff.as_deref().context("--coeff is required with --group")?;
            let g = input::ggroup(group, coeff, &a.action)?;
            Outcome::certified(h1_summary(&h1_finite(&g)))
        }
        H1Cmd::Twist(a) => {
            let b = finite_coefficients(&a.coefficients)?;
            let phi = input::usize_list(&a.cocycle)?;
            let sub = match &a.sub {
                Some(s) => input::usize_list(s)?,
                None => b.carrier().elements().collect(),
            };
            let (twisted, inclusion) = twist(&b, &sub, &phi)?;
            Outcome::certified(json!({
                "twisted": twisted,
                "inclusion": inclusion,
                "h1_size": h1_finite(&twisted).len(),
            }))
        }
        H1Cmd::Les(a) => {
            let mid = finite_coefficients(&a.coefficients)?;
            let normal = input::usize_list(&a.normal)?;
            let ses = ShortExactSequence::from_normal_subgroup(&mid, &normal)?;
            let les = les_of_pointed_sets(&ses);
            let fibers = twist_fiber_check(&ses)?;
            let ok = les.is_exact() && fibers.all_bijective;
            Outcome::with(json!({ "exact": les.is_exact(), "sequence": les, "fibers": fibers }), certified(), ok)
        }
        H1Cmd::Filtration(a) => {
            let report = if let Some(name) = &a.example {
                if name != "infinite-dihedral" {
                    bail!("unknown example {name:?}; available: infinite-dihedral");
                }
                filtration_semidirect(&infinite_dihedral_example())?
            } else {
                let group = a.group.as_deref().expect("clap requires --group");
                let coeff = a.coeff.as_deref().context("--coeff is required with --group")?;
                let g = input::ggroup(group, coeff, &a.action)?;
                let chain: Vec<Vec<usize>> = match &a.chain {
                    Some(c) => input::load(c)?,
                    None => vec![g.carrier().elements().collect(), vec![g.carrier().identity()]],
                };
                filtration_finite(&g, &chain)?
            };
            let ok = report.fibers_match_orbits;
            Outcome::with(report, certified(), ok)
        }
        H1Cmd::RealForms(a) => {
            let group = input::group(&a.group)?;
            let holomorphic: Vec<bool> = input::load(&a.holomorphic)?;
            let kg = KleinGroup::new(group, holomorphic)?;
            let report = real_structure_classifier(&kg, a.sigma)?;
            let ok = report.agree();
            Outcome::with(json!({ "agree": ok, "real_structures": report.classes.len(), "report": report }), certified(), ok)
        }
    }
}

fn hodge(arg: &str) -> Result<HodgeLattice> {
    input::load(arg)
}

fn kahler(h: &HodgeLattice, arg: &str) -> Result<KahlerModel> {
    let raw: KahlerModel = input::load(arg)?;
    let k = KahlerModel::new(h.lattice(), raw.cone, raw.embedding)?;
    k.check_against(h)?;
    Ok(k)
}

fn monodromy(arg: &Option<String>) -> Result<Monodromy> {
    match arg {
        Some(a) => input::load(a),
        None => Ok(Monodromy::FullOrthogonalPlus),
    }
}

fn hk(cmd: &HkCmd) -> Result<Outcome> {
    match cmd {
        HkCmd::Ns(a) => {
            let h = hodge(&a.hodge)?;
            let ns = h.neron_severi();
            let t = h.transcendental();
            Outcome::certified(json!({
                "neron_severi": ns,
                "ns_rank": ns.rank(),
                "ns_signature": ns.restricted_lattice(h.lattice()).signature(),
                "ns_type": h.ns_type(),
                "transcendental": t,
                "ns_plus_t_index": h.ns_t_index().map(|i| i.to_string()),
            }))
        }
        HkCmd::Projective(a) => {
            let h = hodge(&a.hodge)?;
            Outcome::certified(json!({ "projective": h.is_projective_type(), "ns_type": h.ns_type() }))
        }
        HkCmd::Torelli(a) => {
            let source = hodge(&a.source)?;
            let target = hodge(&a.target)?;
            let phi: IntMatrix = input::load(&a.phi)?;
            let ks = kahler(&source, &a.kahler_source)?;
            let kt = kahler(&target, &a.kahler_target)?;
            let v = torelli_anti_check(&phi, &source, &target, &ks, &kt, &monodromy(&a.mon)?)?;
            let ok = v.holds != Some(false);
            Outcome::with(v, certified(), ok)
        }
        HkCmd::Hilbert(a) => {
            let h = hodge(&a.hodge)?;
            let sigma: IntMatrix = input::load(&a.sigma)?;
            let k = a.kahler.as_deref().map(|k| kahler(&h, k)).transpose()?;
            let ext = hilbert_square_extension(&h, a.n, &sigma, k.as_ref())?;
            let ok = ext.report.passes();
            Outcome::with(ext, certified(), ok)
        }
        HkCmd::KautCriterion(a) => {
            let h = hodge(&a.hodge)?;
            let phi: IntMatrix = input::load(&a.phi)?;
            let k = kahler(&h, &a.kahler)?;
            Outcome::certified(kaut_star_criterion(&phi, &h, &k, &monodromy(&a.mon)?)?)
        }
        HkCmd::ClassifySubgroups(a) => {
            let cert = certificate(&a.domain)?;
            let group = generated_group(cert.lattice(), &a.gamma)?;
            let r = classify_finite_subgroups_on_cone(&group, &cert)?;
            let completeness = r.completeness;
            Outcome::with(json!({ "classes": r.representatives.len(), "report": r }), completeness, true)
        }
    }
}
