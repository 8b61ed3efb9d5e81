//! Command-line surface. Exit codes: 0 success / verdict true, 1 verdict
//! false or refuted, 2 error, 3 inconclusive (a cap was reached).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::construct::{
    check_premises, lift_tiling, premise_search, run_pipeline, run_stage, PipelineConfig, PremiseSearchOptions,
    StageOptions,
};
use crate::error::{Error, Result};
use crate::export::{polygonize, render_svg, LatticePolygon, Scene, Style};
use crate::group::{Element, ElementSet, GroupDoc, GroupSpec};
use crate::heesch::{heesch_eval, heesch_ge, verify_certificate, EvalOptions, GeOutcome, HeeschCertificate, SearchOptions};
use crate::subgroup::{build_coset_table, FiniteHom};
use crate::tiling::{GroupRef, Tile, TileDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "heesch", version, about = "Tiles and Heesch numbers on Cayley graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Sequential search in shortlex order (byte-stable certificates).
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Worker threads for the parallel search.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest search radius.
    #[arg(long, global = true, env = "HEESCH_RADIUS_CAP")]
    pub radius_cap: Option<usize>,
    /// Largest ball (in elements) any model may enumerate.
    #[arg(long, global = true, env = "HEESCH_MAX_BALL")]
    pub max_ball: Option<usize>,
    /// Placements tried before a search gives up.
    #[arg(long, global = true, env = "HEESCH_NODE_LIMIT")]
    pub node_limit: Option<u64>,
    /// Write the main result here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group specs.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Tile files.
    #[command(subcommand)]
    Tile(TileCmd),
    /// Evaluate the Heesch number of a tile.
    Eval {
        #[arg(long)]
        tile: PathBuf,
        /// Group spec overriding the one named in the tile file.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        period_bound: i64,
    },
    /// Search for `N` complete layers around a tile.
    Ge {
        #[arg(long)]
        tile: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(short = 'N', long = "layers")]
        n: usize,
    },
    /// Re-verify a certificate without searching.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Transversal construction.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Lift a tiling of a finite quotient back to the group.
    Lift {
        #[arg(long)]
        tile: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        hom: PathBuf,
        /// Representatives of the image centers, comma separated words.
        #[arg(long, value_delimiter = ',', default_value = "")]
        centers: Vec<String>,
        /// Region: the ball of this radius around 1.
        #[arg(long, conflicts_with = "bbox")]
        radius: Option<usize>,
        /// Region on grid models: `lo,hi` per coordinate, e.g. `-5,6,-5,6`.
        #[arg(long = "box", value_delimiter = ',', allow_hyphen_values = true)]
        bbox: Option<Vec<i64>>,
    },
    /// Polygons and pictures.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Load a spec; rewriting systems are checked for confluence.
    Validate { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum TileCmd {
    /// Cardinality, connectivity and extent of a tile (exit 1 if disconnected).
    Check {
        file: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// Check the girth and triple-path premises, or search for groups passing them.
    Premises {
        #[arg(long, required_unless_present = "search")]
        group: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        s_cap: usize,
        /// Scan single-relator two-generator presentations instead.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 4)]
        min_len: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Build `A`, verify it, assemble `K` and certify one layer.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        /// Directory for trace.json, report.json, tile.json and cert.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// One stage of the quotient tower (needs `p_n` in the config).
    Stage {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8)]
        injectivity_cap: usize,
        #[arg(long, default_value_t = 1)]
        heesch_max_n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExportCmd {
    /// Render a tile, certificate layers or polygon file as SVG (Grid(2) only).
    Svg {
        #[arg(long, group = "scene")]
        tile: Option<PathBuf>,
        #[arg(long, group = "scene")]
        cert: Option<PathBuf>,
        #[arg(long, group = "scene")]
        polygon: Option<PathBuf>,
        #[arg(long)]
        group: Option<PathBuf>,
        /// Style file (JSON); defaults otherwise.
        #[arg(long)]
        style: Option<PathBuf>,
    },
    /// The boundary loops of `P(K)` for a Grid(2) tile.
    Polygon {
        tile: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
    },
}

/// Diagnostic written to stderr on failure.
#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<serde_json::Value>,
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::UnknownSymbol(_) => "unknown_symbol",
        Error::InvalidSpec(_) | Error::NonTerminating { .. } | Error::UnresolvedCriticalPair { .. } => "invalid_spec",
        Error::ResourceCap(_) | Error::CapExhausted(_) => "cap_exhausted",
        Error::EmptySet | Error::InvalidTile(_) => "invalid_tile",
        Error::InvalidTiling(_) => "invalid_tiling",
        Error::InvalidHom(_) | Error::TrivialKernel => "invalid_hom",
        Error::Unsupported(_) => "unsupported",
        Error::Premise(_) => "premise",
        Error::Construction(_) => "construction",
        Error::Step { source, .. } => kind(source),
        Error::Malformed(_) | Error::Json(_) => "malformed",
        Error::Io(_) => "io",
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Step { source, .. } => exit_code(source),
        Error::Premise(_) | Error::Construction(_) | Error::InvalidTiling(_) => EXIT_FALSE,
        Error::ResourceCap(_) | Error::CapExhausted(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_ERROR,
    }
}

fn report_error(e: &Error) {
    let report = match e {
        Error::Step { report, .. } => Some((**report).clone()),
        _ => None,
    };
    let d = Diagnostic {
        error: kind(e),
        message: e.to_string(),
        report,
    };
    eprintln!("{}", serde_json::to_string(&d).unwrap_or_else(|_| e.to_string()));
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let d = Diagnostic {
                error: "usage",
                message: e.to_string().trim().to_string(),
                report: None,
            };
            eprintln!("{}", serde_json::to_string(&d).unwrap_or_default());
            return EXIT_ERROR;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            report_error(&e);
            exit_code(&e)
        }
    }
}

impl Global {
    fn search(&self) -> SearchOptions {
        SearchOptions {
            radius_cap: self.radius_cap,
            deterministic: self.deterministic,
            threads: self.threads,
            node_limit: self.node_limit,
        }
    }

    fn spec(&self, spec: GroupSpec) -> GroupSpec {
        match self.max_ball {
            Some(m) => spec.with_max_ball(m),
            None => spec,
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text)?,
            None => {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                match writeln!(out, "{}", text.trim_end()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<()> {
        self.emit(&serde_json::to_string_pretty(value)?)
    }
}

fn load_group(path: &Path) -> Result<GroupSpec> {
    GroupSpec::from_json(&std::fs::read_to_string(path)?)
}

/// Tile file whose group may be supplied separately.
#[derive(Deserialize)]
struct LooseTile {
    group: Option<GroupRef>,
    cells: Vec<String>,
}

fn load_tile(g: &Global, path: &Path, group: Option<&Path>) -> Result<(GroupSpec, Tile)> {
    let doc: LooseTile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let spec = match (group, doc.group) {
        (Some(p), _) => load_group(p)?,
        (None, Some(r)) => r.resolve(path.parent())?,
        (None, None) => return Err(Error::Malformed("the tile names no group; pass --group".into())),
    };
    let spec = g.spec(spec);
    let tile = TileDoc {
        group: GroupRef::Inline(spec.doc().clone()),
        cells: doc.cells,
    }
    .resolve(None)?
    .1;
    Ok((spec, tile))
}

/// Summary printed by `tile check`.
#[derive(Serialize)]
struct TileSummary {
    cardinality: usize,
    connected: bool,
    contains_identity: bool,
    max_length: usize,
    diameter: usize,
}

/// Output of `lift`.
#[derive(Serialize)]
struct LiftDoc {
    group: GroupDoc,
    tile: Vec<String>,
    centers: Vec<String>,
    region_size: usize,
    partition_verified: bool,
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Group(GroupCmd::Validate { file }) => {
            let spec = match load_group(file) {
                Ok(s) => s,
                Err(e @ (Error::Io(_) | Error::Json(_))) => return Err(e),
                Err(e) => {
                    report_error(&e);
                    return Ok(EXIT_FALSE);
                }
            };
            let mut out = serde_json::json!({ "valid": true, "group": spec.to_string(), "digest": spec.digest() });
            if let Ok(r) = spec.validate_rewriting() {
                out["rules"] = r.rules.into();
                out["critical_pairs"] = r.critical_pairs.into();
            }
            g.emit_json(&out)?;
            Ok(EXIT_OK)
        }
        Command::Tile(TileCmd::Check { file, group }) => {
            let (spec, tile) = load_tile(g, file, group.as_deref())?;
            let s = TileSummary {
                cardinality: tile.len(),
                connected: tile.is_connected(),
                contains_identity: tile.cells().contains(&Element::identity()),
                max_length: tile.max_length(),
                diameter: spec.diameter(tile.cells()),
            };
            g.emit_json(&s)?;
            Ok(if s.connected { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Eval {
            tile,
            group,
            max_n,
            period_bound,
        } => {
            let (spec, tile) = load_tile(g, tile, group.as_deref())?;
            let opts = EvalOptions {
                max_n: *max_n,
                search: g.search(),
                period_bound: *period_bound,
            };
            let cert = heesch_eval(&spec, &tile, &opts)?;
            g.emit(&cert.to_json_pretty())?;
            Ok(if cert.conclusive { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        Command::Ge { tile, group, n } => {
            let (spec, tile) = load_tile(g, tile, group.as_deref())?;
            match heesch_ge(&spec, &tile, *n, &g.search())? {
                GeOutcome::Found(cert) => {
                    g.emit(&cert.to_json_pretty())?;
                    Ok(EXIT_OK)
                }
                GeOutcome::Exhausted(ex) => {
                    g.emit_json(&ex)?;
                    Ok(if ex.conclusive { EXIT_FALSE } else { EXIT_INCONCLUSIVE })
                }
            }
        }
        Command::Verify { cert, group } => {
            let c: HeeschCertificate = serde_json::from_str(&std::fs::read_to_string(cert)?)?;
            let spec = group.as_deref().map(load_group).transpose()?;
            let v = verify_certificate(spec.as_ref(), &c)?;
            g.emit_json(&v)?;
            Ok(if v.valid { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Construct(cmd) => construct(g, cmd),
        Command::Lift {
            tile,
            group,
            hom,
            centers,
            radius,
            bbox,
        } => {
            let (spec, tile) = load_tile(g, tile, group.as_deref())?;
            let hom = FiniteHom::from_json(&spec, &std::fs::read_to_string(hom)?)?;
            let table = build_coset_table(&hom);
            let centers: Vec<Element> = centers.iter().map(|w| spec.parse(w.trim())).collect::<Result<_>>()?;
            let region = region(&spec, *radius, bbox.as_deref())?;
            let pi = lift_tiling(&spec, &table, &tile, &centers, &region)?;
            g.emit_json(&LiftDoc {
                group: spec.doc().clone(),
                tile: spec.format_set(tile.cells()),
                centers: pi.centers().iter().map(|c| spec.format(c)).collect(),
                region_size: region.len(),
                partition_verified: true,
            })?;
            Ok(EXIT_OK)
        }
        Command::Export(ExportCmd::Polygon { tile, group }) => {
            let (spec, tile) = load_tile(g, tile, group.as_deref())?;
            let Scene::Tile(cells) = Scene::from_tile(&spec, &tile)? else { unreachable!() };
            let p = polygonize(&cells)?;
            g.emit_json(&p)?;
            Ok(if p.components == 1 { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Export(ExportCmd::Svg {
            tile,
            cert,
            polygon,
            group,
            style,
        }) => {
            let scene = if let Some(t) = tile {
                let (spec, tile) = load_tile(g, t, group.as_deref())?;
                Scene::from_tile(&spec, &tile)?
            } else if let Some(c) = cert {
                let c: HeeschCertificate = serde_json::from_str(&std::fs::read_to_string(c)?)?;
                Scene::from_certificate(&c)?
            } else if let Some(p) = polygon {
                let p: LatticePolygon = serde_json::from_str(&std::fs::read_to_string(p)?)?;
                Scene::Polygon(p)
            } else {
                return Err(Error::Malformed("pass one of --tile, --cert or --polygon".into()));
            };
            let style: Style = match style {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
                None => Style::default(),
            };
            g.emit(&render_svg(&scene, &style)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn region(spec: &GroupSpec, radius: Option<usize>, bbox: Option<&[i64]>) -> Result<ElementSet> {
    match (radius, bbox) {
        (Some(r), _) => spec.ball(&Element::identity(), r),
        (None, Some(b)) => {
            let dim = spec.grid_dim().ok_or_else(|| Error::Unsupported("--box needs a grid model".into()))?;
            if b.len() != 2 * dim || b.chunks(2).any(|c| c[0] > c[1]) {
                return Err(Error::Malformed(format!("--box needs {dim} lo,hi pairs")));
            }
            let mut points = vec![Vec::new()];
            for c in b.chunks(2) {
                points = points
                    .into_iter()
                    .flat_map(|p: Vec<i64>| {
                        (c[0]..=c[1]).map(move |x| {
                            let mut q = p.clone();
                            q.push(x);
                            q
                        })
                    })
                    .collect();
            }
            points.iter().map(|p| spec.grid_element(p)).collect()
        }
        (None, None) => Err(Error::Malformed("pass --radius or --box".into())),
    }
}

fn construct(g: &Global, cmd: &ConstructCmd) -> Result<i32> {
    match cmd {
        ConstructCmd::Premises {
            group,
            s_cap,
            search,
            min_len,
            max_len,
            limit,
        } => {
            if *search {
                let found = premise_search(&PremiseSearchOptions {
                    min_len: *min_len,
                    max_len: *max_len,
                    s_cap: *s_cap,
                    limit: limit.unwrap_or(usize::MAX),
                    ..PremiseSearchOptions::default()
                })?;
                g.emit_json(&found)?;
                return Ok(if found.is_empty() { EXIT_FALSE } else { EXIT_OK });
            }
            let spec = g.spec(load_group(group.as_deref().expect("clap requires --group"))?);
            let report = check_premises(&spec, *s_cap)?;
            g.emit_json(&report)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_FALSE })
        }
        ConstructCmd::Pipeline { config, out_dir } => {
            let (cfg, spec, hom) = PipelineConfig::load(config)?;
            let spec = g.spec(spec);
            let table = build_coset_table(&hom);
            let out = match run_pipeline(&spec, &table, &cfg.options) {
                Ok(out) => out,
                Err(e) => {
                    // Keep the partial report next to where the results would go.
                    if let (Some(dir), Error::Step { report, .. }) = (out_dir, &e) {
                        std::fs::create_dir_all(dir)?;
                        std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)?)?;
                    }
                    return Err(e);
                }
            };
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(dir)?;
                let write = |name: &str, text: String| std::fs::write(dir.join(name), text);
                write("trace.json", serde_json::to_string_pretty(&out.report.trace)?)?;
                write("report.json", serde_json::to_string_pretty(&out.report)?)?;
                write("tile.json", serde_json::to_string_pretty(&TileDoc::new(&spec, &out.tile))?)?;
                write("cert.json", out.certificate.to_json_pretty())?;
            }
            g.emit_json(&out.report)?;
            Ok(EXIT_OK)
        }
        ConstructCmd::Stage {
            config,
            injectivity_cap,
            heesch_max_n,
        } => {
            let (cfg, spec, hom) = PipelineConfig::load(config)?;
            let spec = g.spec(spec);
            let p = cfg.p_n.ok_or_else(|| Error::Malformed("the stage config needs p_n".into()))?;
            let previous = cfg
                .previous_tiles
                .iter()
                .map(|t| t.iter().map(|w| spec.parse(w)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let opts = StageOptions {
                pipeline: cfg.options.clone(),
                injectivity_cap: *injectivity_cap,
                heesch_max_n: *heesch_max_n,
            };
            let rec = run_stage(&spec, &hom, cfg.stage, p, &previous, &opts)?;
            g.emit_json(&rec)?;
            Ok(EXIT_OK)
        }
    }
}
