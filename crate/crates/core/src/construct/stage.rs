//! The end-to-end transversal pipeline and one stage of the quotient tower.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::connected::{construct_a, ConstructOptions, ConstructionTrace};
use super::premises::{check_premises, PremiseReport};
use super::verify::{assemble_k, verify_transversal, TransversalReport};
use crate::error::{Error, Result};
use crate::group::{Element, GroupDoc, GroupSpec, Model};
use crate::heesch::{heesch_eval, heesch_ge, EvalOptions, GeOutcome, HeeschCertificate, SearchOptions};
use crate::subgroup::{
    build_coset_table, injectivity_radius_by, min_kernel_elements, schreier_generators, CosetTable, FiniteHom,
    HomDoc, InjectivityRadius, KernelPowerQuotient,
};
use crate::tiling::{GroupRef, Tile};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineOptions {
    /// Required lower bound (exclusive) on the length of kernel elements;
    /// `None` means `10s`.
    pub rho: Option<usize>,
    pub s_cap: usize,
    /// Local-uniqueness radius; `None` means `3·diam(A)`.
    pub r_unique: Option<usize>,
    /// Search cap for shortest kernel elements.
    pub kernel_cap: usize,
    /// Placement budget for the `heesch_ge(K, 1)` search.
    pub node_limit: Option<u64>,
    pub construct: ConstructOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            rho: None,
            s_cap: 8,
            r_unique: None,
            kernel_cap: 12,
            node_limit: Some(2_000_000),
            construct: ConstructOptions::default(),
        }
    }
}

/// A homomorphism given inline or as a path to a hom file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HomRef {
    Inline(HomDoc),
    Path(String),
}

impl HomRef {
    pub fn resolve(&self, spec: &GroupSpec, base: Option<&Path>) -> Result<FiniteHom> {
        match self {
            HomRef::Inline(doc) => FiniteHom::from_doc(spec, doc.clone()),
            HomRef::Path(p) => {
                let path = base.map_or_else(|| p.into(), |d| d.join(p));
                FiniteHom::from_json(spec, &std::fs::read_to_string(path)?)
            }
        }
    }
}

/// Pipeline / stage configuration file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub group: GroupRef,
    pub hom: HomRef,
    #[serde(default)]
    pub p_n: Option<i64>,
    #[serde(default)]
    pub stage: usize,
    /// `K_1, .., K_n` as words in the current group (stage `n` only).
    #[serde(default)]
    pub previous_tiles: Vec<Vec<String>>,
    #[serde(flatten)]
    pub options: PipelineOptions,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<(Self, GroupSpec, FiniteHom)> {
        let cfg: PipelineConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let spec = cfg.group.resolve(path.parent())?;
        let hom = cfg.hom.resolve(&spec, path.parent())?;
        Ok((cfg, spec, hom))
    }
}

/// A shortest kernel element the constructor gave up on, and why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejected {
    pub g: String,
    pub reason: String,
}

/// Everything the pipeline computed. On failure the partial report is
/// attached to the error.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PipelineReport {
    pub premises: Option<PremiseReport>,
    pub index: usize,
    pub rho: usize,
    pub kernel_length: Option<usize>,
    pub rejected: Vec<Rejected>,
    pub trace: Option<ConstructionTrace>,
    pub transversal: Option<TransversalReport>,
    pub tile: Option<Vec<String>>,
    pub certificate: Option<HeeschCertificate>,
}

/// Successful pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub report: PipelineReport,
    pub g: Element,
    pub set: crate::group::ElementSet,
    pub tile: Tile,
    pub certificate: HeeschCertificate,
}

fn step_error<R: Serialize>(step: &str, source: Error, report: &R) -> Error {
    Error::Step {
        step: step.to_string(),
        source: Box::new(source),
        report: Box::new(serde_json::to_value(report).unwrap_or_default()),
    }
}

/// Premises, then `A` for each shortest kernel element in turn until one
/// passes every check, then `K = A ∪ gA` and a certificate for
/// `Heesch(K) >= 1`. Refuses to run when the premises fail.
pub fn run_pipeline(spec: &GroupSpec, table: &CosetTable, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let mut report = PipelineReport {
        index: table.index(),
        ..Default::default()
    };
    let premises = check_premises(spec, opts.s_cap)?;
    let passed = premises.passed();
    let s = premises.s;
    report.premises = Some(premises);
    let Some(s) = s.filter(|_| passed) else {
        return Err(step_error(
            "premises",
            Error::Premise("the group fails the girth or triple-path condition".into()),
            &report,
        ));
    };
    report.rho = opts.rho.unwrap_or(10 * s);

    let gs = min_kernel_elements(spec, table, opts.kernel_cap).map_err(|e| step_error("kernel", e, &report))?;
    let len = gs[0].len();
    report.kernel_length = Some(len);
    if len <= report.rho {
        return Err(step_error(
            "kernel",
            Error::Premise(format!("the kernel meets the ball of radius {} (shortest element has length {len})", report.rho)),
            &report,
        ));
    }

    let mut found = None;
    for g in &gs {
        let attempt = construct_a(spec, table, g, &opts.construct).and_then(|c| {
            let r = opts.r_unique.unwrap_or(3 * spec.diameter(&c.set));
            let v = verify_transversal(spec, table, &c.set, g, r)?;
            Ok((c, v))
        });
        match attempt {
            Ok(x) => {
                found = Some(x);
                break;
            }
            Err(e) => report.rejected.push(Rejected {
                g: spec.format(g),
                reason: e.to_string(),
            }),
        }
    }
    let Some((c, v)) = found else {
        return Err(step_error(
            "construction",
            Error::Construction(format!("no shortest kernel element yields a transversal ({} tried)", gs.len())),
            &report,
        ));
    };
    report.trace = Some(c.trace(spec));
    report.transversal = Some(v);
    let g = c.g().clone();

    let tile = assemble_k(spec, &c.set, &g).map_err(|e| step_error("assembly", e, &report))?;
    report.tile = Some(spec.format_set(tile.cells()));

    let search = SearchOptions {
        node_limit: opts.node_limit,
        ..SearchOptions::default()
    };
    let certificate = match heesch_ge(spec, &tile, 1, &search).map_err(|e| step_error("heesch", e, &report))? {
        GeOutcome::Found(cert) => cert,
        GeOutcome::Exhausted(ex) => {
            let why = if ex.conclusive {
                "K cannot be surrounded".to_string()
            } else {
                format!("no surround found within radius {}", ex.search_radius)
            };
            return Err(step_error("heesch", Error::Construction(why), &report));
        }
    };
    report.certificate = Some(certificate.clone());
    Ok(PipelineOutput {
        report,
        g,
        set: c.set,
        tile,
        certificate,
    })
}

/// Injectivity radius of `G -> G / <<h_i^p>>` for the Schreier basis `h_i`
/// of the kernel. Free and free-product-of-cyclic models only.
pub fn quotient_injectivity(spec: &GroupSpec, table: &CosetTable, p: i64, cap: usize) -> Result<InjectivityRadius> {
    if !matches!(spec.model(), Model::Free { .. } | Model::FreeProductCyclic { .. }) {
        return Err(Error::Unsupported("power quotients are built for free and free-product models only".into()));
    }
    let basis = schreier_generators(spec, table)?;
    let q = KernelPowerQuotient::new(spec, table, &basis, p)?;
    injectivity_radius_by(spec, cap, |w| q.key(spec, w))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct StageOptions {
    pub pipeline: PipelineOptions,
    /// Largest ball radius enumerated when measuring injectivity.
    pub injectivity_cap: usize,
    /// `heesch_eval` depth for the new tile (the pipeline already certifies 1).
    pub heesch_max_n: usize,
}

impl Default for StageOptions {
    fn default() -> Self {
        StageOptions {
            pipeline: PipelineOptions::default(),
            injectivity_cap: 8,
            heesch_max_n: 1,
        }
    }
}

/// Bookkeeping for one stage `H_n -> H_{n+1}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub p_n: i64,
    pub index: usize,
    /// `r(0) = 10s`, then `r(i) = max |x|` over `K_1, .., K_i`.
    pub r: Vec<usize>,
    pub r1: usize,
    /// `max |g^j|` for `1 <= j <= 10(n+1)`, `g` the shortest kernel element.
    pub r2: usize,
    /// `(n+1)(r(n)+1)`: the ball on which the next quotient must be injective
    /// for the layers around the new tile to be read off faithfully.
    pub layer_ball_radius: usize,
    /// `max(R_1^n, R_2, (n+1)(r(n)+1))`.
    pub required_radius: usize,
    pub injectivity: Option<InjectivityRadius>,
    /// `Some(true)` if the measured radius reaches the required one,
    /// `Some(false)` if it provably does not, `None` if undetermined.
    pub injectivity_ok: Option<bool>,
    pub next_group: Option<GroupDoc>,
    pub notes: Vec<String>,
    pub tile: Option<Vec<String>>,
    pub heesch_lower: Option<usize>,
    /// Stated upper bound `p_n / 2`; recorded, not proved.
    pub heesch_upper_target: f64,
    pub pipeline: Option<PipelineReport>,
}

fn max_length(spec: &GroupSpec, tiles: &[Vec<Element>]) -> usize {
    tiles.iter().flatten().map(|x| spec.length(x)).max().unwrap_or(0)
}

/// Runs stage `n`: radii bookkeeping, the power quotient and its injectivity
/// radius, the pipeline producing `K_{n+1}`, and a Heesch evaluation.
pub fn run_stage(
    spec: &GroupSpec,
    hom: &FiniteHom,
    n: usize,
    p_n: i64,
    previous: &[Vec<Element>],
    opts: &StageOptions,
) -> Result<StageRecord> {
    if previous.len() != n {
        return Err(Error::InvalidSpec(format!("stage {n} needs the tiles K_1..K_{n}, got {}", previous.len())));
    }
    if p_n < 1 {
        return Err(Error::InvalidSpec("the exponent must be positive".into()));
    }
    let table = build_coset_table(hom);
    let mut rec = StageRecord {
        stage: n,
        p_n,
        index: table.index(),
        heesch_upper_target: p_n as f64 / 2.0,
        ..Default::default()
    };

    let premises = check_premises(spec, opts.pipeline.s_cap)?;
    let s = premises.s.unwrap_or(opts.pipeline.s_cap);
    if premises.s.is_none() {
        rec.notes.push(format!("no path bound s within the cap; r(0) uses s = {s}"));
    }
    rec.r.push(10 * s);
    for i in 1..=n {
        rec.r.push(max_length(spec, &previous[..i]));
    }
    rec.r1 = max_length(spec, previous);
    rec.layer_ball_radius = (n + 1) * (rec.r[n] + 1);

    let g = min_kernel_elements(spec, &table, opts.pipeline.kernel_cap)
        .map_err(|e| step_error("kernel", e, &rec))?
        .remove(0);
    let mut power = Element::identity();
    for _ in 0..10 * (n + 1) {
        power = spec.mul(&power, &g);
        rec.r2 = rec.r2.max(spec.length(&power));
    }
    let r1n = if n == 0 { 0 } else { rec.r1.saturating_pow(n as u32) };
    rec.required_radius = r1n.max(rec.r2).max(rec.layer_ball_radius);

    match quotient_injectivity(spec, &table, p_n, opts.injectivity_cap.min(rec.required_radius)) {
        Ok(r) => {
            rec.injectivity_ok = match r {
                _ if r.at_least(rec.required_radius) => Some(true),
                InjectivityRadius::Exact(_) => Some(false),
                InjectivityRadius::AtLeast(_) => None,
            };
            rec.injectivity = Some(r);
        }
        Err(e @ (Error::Unsupported(_) | Error::ResourceCap(_))) => rec.notes.push(format!("injectivity not measured: {e}")),
        Err(e) => return Err(step_error("injectivity", e, &rec)),
    }
    rec.next_group = next_group(spec, &table, p_n);
    if rec.next_group.is_none() {
        rec.notes.push("the next group has no free-product presentation over the current generators".into());
    }

    let out = match run_pipeline(spec, &table, &opts.pipeline) {
        Ok(out) => out,
        Err(Error::Step { step, source, report }) => {
            rec.pipeline = serde_json::from_value(*report).ok();
            return Err(step_error(&format!("pipeline/{step}"), *source, &rec));
        }
        Err(e) => return Err(step_error("pipeline", e, &rec)),
    };
    rec.tile = Some(spec.format_set(out.tile.cells()));
    rec.heesch_lower = Some(out.certificate.layer_count());
    if opts.heesch_max_n > 1 {
        let eval = EvalOptions {
            max_n: opts.heesch_max_n,
            search: SearchOptions {
                node_limit: opts.pipeline.node_limit,
                ..SearchOptions::default()
            },
            ..EvalOptions::default()
        };
        let cert = heesch_eval(spec, &out.tile, &eval).map_err(|e| step_error("heesch", e, &rec))?;
        rec.heesch_lower = Some(cert.layer_count().max(out.certificate.layer_count()));
    }
    rec.pipeline = Some(out.report);
    Ok(rec)
}

/// `H / <<h^p>>` as a free product, when the kernel is all of `H` (so the
/// basis is the generating set itself).
fn next_group(spec: &GroupSpec, table: &CosetTable, p: i64) -> Option<GroupDoc> {
    if table.index() != 1 {
        return None;
    }
    let p = u32::try_from(p).ok()?;
    let orders = match spec.model() {
        Model::Free { rank } => vec![p; *rank],
        Model::FreeProductCyclic { orders } => orders.iter().map(|&m| gcd(m, p)).collect(),
        _ => return None,
    };
    orders.iter().all(|&m| m >= 2).then_some(GroupDoc::FreeProductCyclic { orders })
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
