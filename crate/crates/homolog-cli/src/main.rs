//! Batch front end: load objects, morphisms, couples, or towers from JSON,
//! run one operation, and write JSON reports plus DOT diagrams.
//!
//! Exit codes: 0 success, 2 schema violation, 3 axiom-audit failure,
//! 4 operation error. Outputs are canonical, so identical inputs produce
//! byte-identical report files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use homolog::act::{Act, ActMap};
use homolog::actprime::{ActPrime, Nac};
use homolog::cat::{audit_all, is_exact, normal_factorise, nsb_lattice, AuditStatus, Semiexact};
use homolog::couple::{check_exact_couple, derive_couple};
use homolog::dot;
use homolog::filtered::{homology_couple, FilteredComplex};
use homolog::gp2::Gp2;
use homolog::json::{
    self, AuditJson, CheckJson, ConnectionJson, CoupleJson, Document, FactorisationJson,
    LatticeJson, PageCellJson, PageDiffJson, PageDumpJson, PairMapJson, Payload,
};
use homolog::ltc::{Connection, Ltc};
use homolog::ngp::{Ngp, Q};
use homolog::nsb::{direct_image, inverse_image};
use homolog::set2::Set2;
use homolog::setpt::SetPt;
use homolog::spectral::{bigraded_pages, check_bigraded, tower_couple_ngp, SpectralPage};

#[derive(Parser)]
#[command(name = "homolog", version, about = "finite semiexact-category toolbox")]
struct Cli {
    /// Directory for report files
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal factorisation of a morphism: kernel, coimage, central part, image, cokernel
    Factorise {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Report whether a morphism is exact (its central part is invertible)
    CheckExact {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Lattice of normal subobjects of an object, as JSON and a Hasse diagram
    Nsb {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Direct/inverse-image Galois connection between subobject lattices
    Psp {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Check an exact couple and emit its derived couple
    DeriveCouple {
        #[arg(long)]
        input: PathBuf,
    },
    /// Spectral pages of a filtered chain complex over the 2-element field
    Spectral {
        /// Filtered-complex document; omitted = seeded random (HOMOLOG_SEED)
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        rmax: usize,
        /// Random generation bounds: levels,max_degree,max_total_dim
        #[arg(long, default_value = "3,2,6")]
        bounds: String,
    },
    /// Audit the category axioms of a bounded instance
    CheckAxioms {
        #[arg(long)]
        instance: String,
        /// Bounds: sizes for sets/groups/points, comma-separated
        #[arg(long, default_value = "3,4")]
        bounds: String,
        /// Full audit (default)
        #[arg(long, conflicts_with = "fast")]
        audit: bool,
        /// Smaller bounds for a quick pass
        #[arg(long)]
        fast: bool,
    },
    /// Build the couple of a tower of fibrations and check its clauses
    Tower {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        rmax: usize,
    },
}

/// One run = one manifest: the operation, its payload files, and options.
struct Manifest {
    out_dir: PathBuf,
    cmd: Cmd,
}

enum Failure {
    Schema(String),
    Audit(String),
    Operation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Schema(_) => 2,
            Failure::Audit(_) => 3,
            Failure::Operation(_) => 4,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Schema(m) | Failure::Audit(m) | Failure::Operation(m) => m,
        }
    }
}

fn schema<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Schema(e.to_string())
}

fn operation<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Operation(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let manifest = Manifest { out_dir: cli.out_dir, cmd: cli.cmd };
    match run(&manifest) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))?;
    json::parse(&text).map_err(schema)
}

fn write_out(manifest: &Manifest, name: &str, text: &str) -> Result<(), Failure> {
    fs::create_dir_all(&manifest.out_dir).map_err(operation)?;
    let path = manifest.out_dir.join(name);
    fs::write(&path, text).map_err(operation)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn emit_payload(manifest: &Manifest, name: &str, payload: Payload) -> Result<(), Failure> {
    write_out(manifest, name, &json::emit(&Document::new(payload)))
}

fn run(manifest: &Manifest) -> Result<(), Failure> {
    match &manifest.cmd {
        Cmd::Factorise { instance, input } => factorise(manifest, instance, input),
        Cmd::CheckExact { instance, input } => check_exact(manifest, instance, input),
        Cmd::Nsb { instance, input } => nsb_cmd(manifest, instance, input),
        Cmd::Psp { instance, input } => psp_cmd(manifest, instance, input),
        Cmd::DeriveCouple { input } => derive_cmd(manifest, input),
        Cmd::Spectral { input, rmax, bounds } => spectral_cmd(manifest, input.as_deref(), *rmax, bounds),
        Cmd::CheckAxioms { instance, bounds, fast, .. } => axioms_cmd(manifest, instance, bounds, *fast),
        Cmd::Tower { input, rmax } => tower_cmd(manifest, input, *rmax),
    }
}

// ---------------------------------------------------------------------------
// Instance plumbing
// ---------------------------------------------------------------------------

fn image_label(values: &[usize]) -> String {
    let mut v: Vec<usize> = values.to_vec();
    v.sort_unstable();
    v.dedup();
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Extract the carrier value table of a morphism, per instance.
trait Table {
    fn table(&self) -> Vec<usize>;
}
impl Table for homolog::set2::SetPairMap {
    fn table(&self) -> Vec<usize> {
        self.map.clone()
    }
}
impl Table for homolog::gp2::PairMap {
    fn table(&self) -> Vec<usize> {
        self.map.clone()
    }
}
impl Table for homolog::ngp::QuasiMap {
    fn table(&self) -> Vec<usize> {
        self.map.clone()
    }
}
impl Table for ActMap {
    fn table(&self) -> Vec<usize> {
        self.fprime.clone()
    }
}

fn factorise_generic<C: Semiexact>(
    manifest: &Manifest,
    c: &C,
    f: &C::Mor,
) -> Result<(), Failure>
where
    C::Mor: Table,
{
    let nf = normal_factorise(c, f).map_err(operation)?;
    let doc = FactorisationJson {
        ker: nf.ker.table(),
        ncm: nf.ncm.table(),
        central: nf.central.table(),
        nim: nf.nim.table(),
        cok: nf.cok.table(),
    };
    emit_payload(manifest, "factorisation.json", Payload::Factorisation(doc))?;
    let labels = dot::FactorisationLabels {
        ker: image_label(&nf.ker.table()),
        dom: image_label(&(0..nf.ker.table().len().max(1)).collect::<Vec<_>>()),
        cod: image_label(&nf.nim.table()),
        cok: image_label(&nf.cok.table()),
        coim: image_label(&nf.ncm.table()),
        nim: image_label(&nf.nim.table()),
    };
    write_out(manifest, "factorisation.dot", &dot::factorisation(&labels).render())
}

fn load_set2_map(input: &Path) -> Result<homolog::set2::SetPairMap, Failure> {
    match load(input)?.payload {
        Payload::SetPairMap(m) => m.to_map().map_err(schema),
        _ => Err(Failure::Schema("expected a set-pair-map document".into())),
    }
}

fn load_pair_map(input: &Path) -> Result<PairMapJson, Failure> {
    match load(input)?.payload {
        Payload::PairMap(m) => Ok(m),
        _ => Err(Failure::Schema("expected a pair-map document".into())),
    }
}

fn load_act_map(input: &Path) -> Result<ActMap, Failure> {
    match load(input)?.payload {
        Payload::ActMap(m) => m.to_map().map_err(schema),
        _ => Err(Failure::Schema("expected an act-map document".into())),
    }
}

fn default_act() -> Act {
    Act { max_points: 6, max_group: 8 }
}

fn factorise(manifest: &Manifest, instance: &str, input: &Path) -> Result<(), Failure> {
    match instance {
        "set2" => {
            let f = load_set2_map(input)?;
            factorise_generic(manifest, &Set2 { max_size: f.dom.size.max(f.cod.size) }, &f)
        }
        "gp2" => {
            let f = load_pair_map(input)?.to_pair_map().map_err(schema)?;
            let bound = f.dom.group.size.max(f.cod.group.size);
            factorise_generic(manifest, &Gp2 { max_group: bound }, &f)
        }
        "ngp" => {
            let f = load_pair_map(input)?.to_quasi_map().map_err(schema)?;
            let bound = f.dom.group.size.max(f.cod.group.size);
            factorise_generic(manifest, &Ngp { max_group: bound }, &f)
        }
        "act" => {
            let f = load_act_map(input)?;
            factorise_generic(manifest, &default_act(), &f)
        }
        other => Err(Failure::Schema(format!("unsupported instance {other:?}"))),
    }
}

fn check_exact(manifest: &Manifest, instance: &str, input: &Path) -> Result<(), Failure> {
    let exact = match instance {
        "set2" => {
            let f = load_set2_map(input)?;
            is_exact(&Set2 { max_size: f.dom.size.max(f.cod.size) }, &f)
        }
        "gp2" => {
            let f = load_pair_map(input)?.to_pair_map().map_err(schema)?;
            is_exact(&Gp2 { max_group: f.dom.group.size.max(f.cod.group.size) }, &f)
        }
        "ngp" => {
            let f = load_pair_map(input)?.to_quasi_map().map_err(schema)?;
            is_exact(&Ngp { max_group: f.dom.group.size.max(f.cod.group.size) }, &f)
        }
        "act" => is_exact(&default_act(), &load_act_map(input)?),
        other => return Err(Failure::Schema(format!("unsupported instance {other:?}"))),
    };
    let report = CheckJson {
        checks: 1,
        failures: if exact { vec![] } else { vec!["the morphism is not exact".into()] },
    };
    emit_payload(manifest, "check.json", Payload::Check(report))
}

fn nsb_generic<C: Semiexact>(manifest: &Manifest, c: &C, a: &C::Obj) -> Result<(), Failure>
where
    C::Mor: Table,
{
    let (lattice, monos) = nsb_lattice(c, a);
    emit_payload(manifest, "nsb.json", Payload::Lattice(LatticeJson::of(&lattice)))?;
    let labels: Vec<String> = monos.iter().map(|m| image_label(&m.table())).collect();
    write_out(manifest, "nsb.dot", &dot::hasse(&lattice, &labels).render())
}

fn nsb_cmd(manifest: &Manifest, instance: &str, input: &Path) -> Result<(), Failure> {
    match instance {
        "set2" => match load(input)?.payload {
            Payload::SetPair(p) => {
                let a = p.to_set_pair().map_err(schema)?;
                nsb_generic(manifest, &Set2 { max_size: a.size }, &a)
            }
            _ => Err(Failure::Schema("expected a set-pair document".into())),
        },
        "gp2" | "ngp" => match load(input)?.payload {
            Payload::GroupPair(p) => {
                let a = p.to_pair().map_err(schema)?;
                if instance == "gp2" {
                    nsb_generic(manifest, &Gp2 { max_group: a.group.size }, &a)
                } else {
                    nsb_generic(manifest, &Ngp { max_group: a.group.size }, &a)
                }
            }
            _ => Err(Failure::Schema("expected a group-pair document".into())),
        },
        "act" => match load(input)?.payload {
            Payload::Action(p) => {
                let a = p.to_action().map_err(schema)?;
                nsb_generic(manifest, &default_act(), &a)
            }
            _ => Err(Failure::Schema("expected an action document".into())),
        },
        other => Err(Failure::Schema(format!("unsupported instance {other:?}"))),
    }
}

fn psp_generic<C: Semiexact>(manifest: &Manifest, c: &C, f: &C::Mor) -> Result<(), Failure> {
    let (dom_lat, dom_monos) = nsb_lattice(c, &c.dom(f));
    let (cod_lat, cod_monos) = nsb_lattice(c, &c.cod(f));
    let find = |list: &[C::Mor], target: &C::Mor| -> Result<usize, Failure> {
        list.iter()
            .position(|m| c.nsb_leq(m, target) && c.nsb_leq(target, m))
            .ok_or_else(|| Failure::Operation("image is not among the canonical subobjects".into()))
    };
    let mut lower = Vec::new();
    for m in &dom_monos {
        lower.push(find(&cod_monos, &direct_image(c, f, m))?);
    }
    let mut upper = Vec::new();
    for m in &cod_monos {
        upper.push(find(&dom_monos, &inverse_image(c, f, m))?);
    }
    let conn = Connection::new(dom_lat, cod_lat, lower, upper).map_err(operation)?;
    emit_payload(manifest, "psp.json", Payload::Connection(ConnectionJson::of(&conn)))
}

fn psp_cmd(manifest: &Manifest, instance: &str, input: &Path) -> Result<(), Failure> {
    match instance {
        "set2" => {
            let f = load_set2_map(input)?;
            psp_generic(manifest, &Set2 { max_size: f.dom.size.max(f.cod.size) }, &f)
        }
        "gp2" => {
            let f = load_pair_map(input)?.to_pair_map().map_err(schema)?;
            psp_generic(manifest, &Gp2 { max_group: f.dom.group.size.max(f.cod.group.size) }, &f)
        }
        "ngp" => {
            let f = load_pair_map(input)?.to_quasi_map().map_err(schema)?;
            psp_generic(manifest, &Ngp { max_group: f.dom.group.size.max(f.cod.group.size) }, &f)
        }
        "act" => psp_generic(manifest, &default_act(), &load_act_map(input)?),
        other => Err(Failure::Schema(format!("unsupported instance {other:?}"))),
    }
}

fn derive_cmd(manifest: &Manifest, input: &Path) -> Result<(), Failure> {
    let doc = match load(input)?.payload {
        Payload::Couple(cp) => cp,
        _ => return Err(Failure::Schema("expected a couple document".into())),
    };
    match doc.instance.as_str() {
        "ngp" => {
            let c = Ngp { max_group: 64 };
            let cp = doc.to_ngp_couple(&c).map_err(schema)?;
            let report = check_exact_couple(&c, &cp);
            if !report.is_exact() {
                return Err(Failure::Operation(format!(
                    "the couple is not exact: {}",
                    report.failing_clause().unwrap_or("unknown clause")
                )));
            }
            let derived = derive_couple(&c, &cp).map_err(operation)?;
            let check = check_exact_couple(&c, &derived.couple);
            emit_payload(manifest, "derived.json", Payload::Couple(CoupleJson::of_ngp(&derived.couple)))?;
            emit_payload(
                manifest,
                "derive-report.json",
                Payload::Check(CheckJson {
                    checks: 1,
                    failures: check
                        .failing_clause()
                        .map(|cl| vec![format!("derived couple fails clause {cl}")])
                        .unwrap_or_default(),
                }),
            )
        }
        "gp2" => {
            let c = Gp2 { max_group: 64 };
            let cp = doc.to_gp2_couple(&c).map_err(schema)?;
            let report = check_exact_couple(&c, &cp);
            if !report.is_exact() {
                return Err(Failure::Operation(format!(
                    "the couple is not exact: {}",
                    report.failing_clause().unwrap_or("unknown clause")
                )));
            }
            let derived = derive_couple(&c, &cp).map_err(operation)?;
            let check = check_exact_couple(&c, &derived.couple);
            emit_payload(manifest, "derived.json", Payload::Couple(CoupleJson::of_gp2(&derived.couple)))?;
            emit_payload(
                manifest,
                "derive-report.json",
                Payload::Check(CheckJson {
                    checks: 1,
                    failures: check
                        .failing_clause()
                        .map(|cl| vec![format!("derived couple fails clause {cl}")])
                        .unwrap_or_default(),
                }),
            )
        }
        other => Err(Failure::Schema(format!("unsupported couple instance {other:?}"))),
    }
}

fn page_dump(pages: &[SpectralPage<Ngp>]) -> PageDumpJson {
    let mut cells = Vec::new();
    for page in pages {
        for (&(n, p), sq) in &page.cells {
            let diff = page.diffs.get(&(n, p)).map(|d| PageDiffJson {
                target_n: n - 1,
                target_p: p - page.r as i64,
                table: d.map.clone(),
            });
            cells.push(PageCellJson {
                r: page.r,
                n,
                p,
                num: {
                    let mut v = sq.num.map.clone();
                    v.sort_unstable();
                    v.dedup();
                    v
                },
                den: {
                    let mut v = sq.den.map.clone();
                    v.sort_unstable();
                    v.dedup();
                    v
                },
                size: sq.object.group.size / sq.object.sub.members.len(),
                diff,
            });
        }
    }
    PageDumpJson { cells }
}

fn page_dots(manifest: &Manifest, pages: &[SpectralPage<Ngp>]) -> Result<(), Failure> {
    for page in pages {
        let cells: Vec<(i64, i64, String)> = page
            .cells
            .iter()
            .map(|(&(n, p), sq)| {
                (n, p, format!("dim {}", sq.object.group.size / sq.object.sub.members.len()))
            })
            .collect();
        let diffs: Vec<((i64, i64), (i64, i64))> = page
            .diffs
            .keys()
            .map(|&(n, p)| ((n, p), (n - 1, p - page.r as i64)))
            .collect();
        let d = dot::page_grid(page.r, &cells, &diffs);
        write_out(manifest, &format!("page-{}.dot", page.r), &d.render())?;
    }
    Ok(())
}

fn spectral_cmd(
    manifest: &Manifest,
    input: Option<&Path>,
    rmax: usize,
    bounds: &str,
) -> Result<(), Failure> {
    let cx = match input {
        Some(path) => match load(path)?.payload {
            Payload::FilteredComplex(cx) => {
                // re-validate through the constructor
                FilteredComplex::new(cx.levels, cx.dims.clone(), cx.filt.clone(), cx.d.clone())
                    .map_err(schema)?
            }
            _ => return Err(Failure::Schema("expected a filtered-complex document".into())),
        },
        None => {
            let parts: Vec<usize> = bounds
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(schema)?;
            if parts.len() != 3 {
                return Err(Failure::Schema("bounds must be levels,max_degree,max_total_dim".into()));
            }
            let seed: u64 = std::env::var("HOMOLOG_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(0);
            FilteredComplex::random(seed, parts[0], parts[1], parts[2])
        }
    };
    let c = Ngp { max_group: 1 << 7 };
    let bc = homology_couple(&cx, rmax).map_err(operation)?;
    let report = check_bigraded(&c, &bc);
    if !report.ok() {
        return Err(Failure::Operation(format!("the homology couple is not exact: {:?}", report.failures)));
    }
    let pages = bigraded_pages(&c, &bc, rmax).map_err(operation)?;
    emit_payload(manifest, "complex.json", Payload::FilteredComplex(cx))?;
    emit_payload(manifest, "pages.json", Payload::PageDump(page_dump(&pages)))?;
    page_dots(manifest, &pages)
}

fn parse_bounds(bounds: &str, want: usize) -> Result<Vec<usize>, Failure> {
    let parts: Vec<usize> = bounds
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(schema)?;
    if parts.len() != want {
        return Err(Failure::Schema(format!("expected {want} comma-separated bounds")));
    }
    Ok(parts)
}

fn axioms_cmd(manifest: &Manifest, instance: &str, bounds: &str, fast: bool) -> Result<(), Failure> {
    fn audit<C: Semiexact>(c: &C) -> Vec<homolog::cat::AxiomReport> {
        let outer = c.objects();
        audit_all(c, &outer, &outer)
    }
    let b = parse_bounds(bounds, 2)?;
    let (sets, groups) = if fast { (b[0].min(2), b[1].min(4)) } else { (b[0], b[1]) };
    let reports = match instance {
        "set2" => audit(&Set2 { max_size: sets }),
        "setpt" => audit(&SetPt { max_size: sets }),
        "gp2" => audit(&Gp2 { max_group: groups }),
        "q" => audit(&Q { max_group: groups }),
        "ngp" => audit(&Ngp { max_group: groups }),
        "ltc" => audit(&Ltc::bounded()),
        "act" => audit(&Act { max_points: sets, max_group: groups }),
        "actprime" => audit(&ActPrime { max_points: sets, max_group: groups }),
        "nac" => audit(&Nac { max_points: sets, max_group: groups }),
        other => return Err(Failure::Schema(format!("unsupported instance {other:?}"))),
    };
    let failed = reports.iter().any(|r| r.status == AuditStatus::Fail);
    emit_payload(
        manifest,
        "axioms.json",
        Payload::Audit(AuditJson { instance: instance.into(), reports }),
    )?;
    if failed {
        return Err(Failure::Audit(format!("axiom audit failed for {instance}")));
    }
    Ok(())
}

fn tower_cmd(manifest: &Manifest, input: &Path, rmax: usize) -> Result<(), Failure> {
    let data = match load(input)?.payload {
        Payload::Tower(t) => t,
        _ => return Err(Failure::Schema("expected a tower document".into())),
    };
    data.check_shapes().map_err(schema)?;
    let c = Ngp { max_group: 1 << 7 };
    let bc = tower_couple_ngp(&c, &data).map_err(operation)?;
    let report = check_bigraded(&c, &bc);
    emit_payload(
        manifest,
        "tower-report.json",
        Payload::Check(CheckJson { checks: report.checks, failures: report.failures.clone() }),
    )?;
    if !report.ok() {
        return Err(Failure::Operation("the tower couple fails its exactness clauses".into()));
    }
    let pages = bigraded_pages(&c, &bc, rmax).map_err(operation)?;
    emit_payload(manifest, "pages.json", Payload::PageDump(page_dump(&pages)))?;
    page_dots(manifest, &pages)
}
