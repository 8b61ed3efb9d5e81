use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{containment_radius, decompose_layers, SearchStats};
use crate::error::Result;
use crate::group::{Element, GroupDoc, GroupSpec};
use crate::tiling::{verify_periodic, PartialTiling, PeriodicWitness, Tile};

pub const CERT_FORMAT: &str = "heesch-certificate/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// The attached layers show at least `n` complete layers.
    AtLeast { n: usize },
    /// `n` layers are attained and `n + 1` were refuted by exhaustive search
    /// inside `radius`.
    ExactlyWithinRadius { n: usize, radius: usize },
    /// The tile tiles a grid group periodically.
    TilesPeriodic { witness: PeriodicWitness },
}

/// Self-contained, re-verifiable result of a Heesch computation.
///
/// `digest` is the SHA-256 of the certificate serialized with an empty
/// digest field, so any single-field edit is detected even when it would
/// leave the claims consistent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeeschCertificate {
    pub format: String,
    pub group: GroupDoc,
    pub group_digest: String,
    pub tile: Vec<String>,
    pub connected: bool,
    pub verdict: Verdict,
    pub layers: Vec<Vec<String>>,
    pub search_radius: usize,
    pub containment_radius: usize,
    pub conclusive: bool,
    pub stats: SearchStats,
    pub digest: String,
}

impl HeeschCertificate {
    fn base(spec: &GroupSpec, tile: &Tile, verdict: Verdict, layers: Vec<Vec<String>>) -> Self {
        HeeschCertificate {
            format: CERT_FORMAT.to_string(),
            group: spec.doc().clone(),
            group_digest: spec.digest(),
            tile: spec.format_set(tile.cells()),
            connected: tile.is_connected(),
            verdict,
            layers,
            search_radius: 0,
            containment_radius: 0,
            conclusive: true,
            stats: SearchStats::default(),
            digest: String::new(),
        }
    }

    /// `Heesch >= 0`: the lone central copy.
    pub fn trivial(spec: &GroupSpec, tile: &Tile) -> Self {
        let mut c = Self::base(spec, tile, Verdict::AtLeast { n: 0 }, vec![vec![String::new()]]);
        c.containment_radius = containment_radius(spec, tile, 0);
        c.seal()
    }

    pub fn periodic(spec: &GroupSpec, tile: &Tile, witness: PeriodicWitness) -> Self {
        Self::base(spec, tile, Verdict::TilesPeriodic { witness }, Vec::new()).seal()
    }

    pub fn from_tiling(spec: &GroupSpec, tile: &Tile, pi: &PartialTiling, search_radius: usize, stats: SearchStats) -> Self {
        let d = decompose_layers(spec, pi);
        let n = d.count();
        let layers = d
            .layers
            .iter()
            .map(|l| l.iter().map(|c| spec.format(c)).collect())
            .collect();
        let mut c = Self::base(spec, tile, Verdict::AtLeast { n }, layers);
        c.search_radius = search_radius;
        c.containment_radius = containment_radius(spec, tile, n);
        c.stats = stats;
        c.seal()
    }

    /// Upgrades a lower bound to an exact value after `n + 1` was refuted.
    pub fn into_exact(mut self, spec: &GroupSpec, tile: &Tile, radius: usize, stats: SearchStats) -> Self {
        let n = self.layer_count();
        self.verdict = Verdict::ExactlyWithinRadius { n, radius };
        self.search_radius = radius;
        self.containment_radius = containment_radius(spec, tile, n + 1);
        self.conclusive = true;
        self.stats = stats;
        self.seal()
    }

    /// Keeps the lower bound, noting that the next level was not decided.
    pub fn into_inconclusive(mut self, stats: SearchStats) -> Self {
        self.conclusive = false;
        self.stats = stats;
        self.seal()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn compute_digest(&self) -> String {
        let mut c = self.clone();
        c.digest = String::new();
        let text = serde_json::to_string(&c).expect("certificate serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Recomputes the digest after edits.
    pub fn seal(mut self) -> Self {
        self.digest = self.compute_digest();
        self
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Outcome of [`verify_certificate`]; `reason` names the first failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub reason: Option<String>,
}

impl Verification {
    fn ok() -> Self {
        Verification {
            valid: true,
            reason: None,
        }
    }

    fn fail(reason: impl Into<String>) -> Self {
        Verification {
            valid: false,
            reason: Some(reason.into()),
        }
    }
}

/// Search-free re-verification. With `spec` given, the certificate must also
/// be about that group.
pub fn verify_certificate(spec: Option<&GroupSpec>, cert: &HeeschCertificate) -> Result<Verification> {
    if cert.format != CERT_FORMAT {
        return Ok(Verification::fail(format!("unknown format {:?}", cert.format)));
    }
    if cert.digest != cert.compute_digest() {
        return Ok(Verification::fail("digest mismatch"));
    }
    let Ok(group) = GroupSpec::from_doc(cert.group.clone()) else {
        return Ok(Verification::fail("group spec does not load"));
    };
    if group.digest() != cert.group_digest {
        return Ok(Verification::fail("group digest mismatch"));
    }
    if let Some(s) = spec {
        if s.digest() != cert.group_digest {
            return Ok(Verification::fail("certificate is about a different group"));
        }
    }
    let Ok(cells) = group.element_set(cert.tile.iter().map(String::as_str)) else {
        return Ok(Verification::fail("tile cells do not parse"));
    };
    if cells.len() != cert.tile.len() || group.format_set(&cells) != cert.tile {
        return Ok(Verification::fail("tile cells are not canonical, sorted and distinct"));
    }
    let Ok(tile) = Tile::new(&group, cells) else {
        return Ok(Verification::fail("tile has fewer than 2 cells"));
    };
    if tile.is_connected() != cert.connected {
        return Ok(Verification::fail("connectivity flag is wrong"));
    }

    let n = match &cert.verdict {
        Verdict::TilesPeriodic { witness } => {
            if !cert.layers.is_empty() {
                return Ok(Verification::fail("periodic certificate carries layers"));
            }
            if !group.is_grid() || !verify_periodic(&group, &tile, witness)? {
                return Ok(Verification::fail("periodic witness does not partition the block"));
            }
            return Ok(Verification::ok());
        }
        Verdict::AtLeast { n } => *n,
        Verdict::ExactlyWithinRadius { n, radius } => {
            let r0 = containment_radius(&group, &tile, n + 1);
            if !cert.conclusive || *radius != cert.search_radius || cert.containment_radius != r0 || *radius < r0 {
                return Ok(Verification::fail("refutation radius does not reach the containment radius"));
            }
            *n
        }
    };
    if let Verdict::AtLeast { .. } = cert.verdict {
        if cert.containment_radius != containment_radius(&group, &tile, n) {
            return Ok(Verification::fail("containment radius is wrong"));
        }
    }

    let mut centers: Vec<Element> = Vec::new();
    let mut parsed: Vec<Vec<Element>> = Vec::new();
    for layer in &cert.layers {
        let mut l = Vec::new();
        for w in layer {
            match group.parse(w) {
                Ok(c) if group.format(&c) == *w => l.push(c),
                _ => return Ok(Verification::fail(format!("center {w:?} is not a canonical element"))),
            }
        }
        centers.extend(l.iter().cloned());
        parsed.push(l);
    }
    let Ok(pi) = PartialTiling::new(&group, tile, centers) else {
        return Ok(Verification::fail("centers do not form a partial tiling"));
    };
    let d = decompose_layers(&group, &pi);
    if d.layers != parsed {
        return Ok(Verification::fail("layers differ from the recomputed decomposition"));
    }
    if d.count() != n {
        return Ok(Verification::fail(format!("verdict claims {n} layers, tiling has {}", d.count())));
    }
    Ok(Verification::ok())
}
