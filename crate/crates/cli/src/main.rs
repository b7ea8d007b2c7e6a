use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::Signed;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use chamberwalk::arith::{IVec, Int, Rat};
use chamberwalk::batch0::{auto_batch0, complement_roots, cuspidal_batch0, spherical_batch0};
use chamberwalk::dynkin::{cuspidal_extensions, spherical_extensions, Bond, DiagramClass, Dir, NormedDynkinDiagram};
use chamberwalk::edgewalk::{explore, find_corner, Chamber, Corner, CornerKind, ExploreBudget, FiniteVolume};
use chamberwalk::lattice::{parse_rational, Lattice};
use chamberwalk::shortvec2d::PlaneFrame;
use chamberwalk::vinberg::{pell_fundamental, rank2_second_root, vinberg_run, StopTest, VinbergOptions, TABLE1_ROWS};

/// Weyl chambers of Lorentzian lattices, by Vinberg's algorithm or by walking
/// along chamber edges.
///
/// Exit codes: 0 on success (finite volume certified where relevant), 1 on
/// error, 2 when a budget ran out, 3 when the chamber has infinite volume.
#[derive(Parser)]
#[command(name = "chamberwalk", version)]
struct Cli {
    /// Worker threads for parallel steps (defaults to all cores).
    #[arg(long, global = true, env = "CHAMBERWALK_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Explore the whole chamber by walking along its edges.
    Chamber {
        /// Lattice file: {"gram": [[...], ...]}, entries integers or "p/q".
        lattice: PathBuf,
        /// Starting corner as x,y,... or "auto" to search small vectors.
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        control: String,
        /// Coordinate bound for the automatic corner search.
        #[arg(long, default_value_t = 3)]
        search_bound: i64,
        #[arg(long, default_value_t = 10_000)]
        max_walks: usize,
        #[arg(long, default_value_t = 10_000)]
        max_corners: usize,
        /// Also run Vinberg's algorithm from the same corner and compare.
        #[arg(long)]
        compare_vinberg: bool,
        /// Batch budget for --compare-vinberg.
        #[arg(long, default_value_t = 100_000)]
        max_batches: u64,
        /// Include wall-clock timings (makes the output non-reproducible).
        #[arg(long)]
        timings: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run Vinberg's algorithm from a timelike control vector.
    Vinberg {
        lattice: PathBuf,
        /// Control vector as x,y,... or "auto".
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        control: String,
        #[arg(long, default_value_t = 3)]
        search_bound: i64,
        /// "auto", or a JSON file holding a list of root vectors.
        #[arg(long, default_value = "auto")]
        batch0: String,
        #[arg(long, default_value_t = 100_000)]
        max_batches: u64,
        /// Stop after this priority value, e.g. 9/2.
        #[arg(long)]
        max_priority: Option<String>,
        /// Only look for roots of these norms, e.g. 1,2.
        #[arg(long, value_delimiter = ',')]
        norms: Option<Vec<i64>>,
        /// Keep going to the budget instead of stopping at finite volume.
        #[arg(long)]
        no_stop: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simple roots orthogonal to a timelike or lightlike control vector.
    Batch0 {
        lattice: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        control: String,
        /// JSON list of roots orthogonal to the control to use instead of a search.
        #[arg(long)]
        roots: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Short vectors in a Lorentzian plane.
    Shortvec {
        /// Symmetric 2x2 Gram matrix as a,b,c for [[a,b],[b,c]]; entries may be p/q.
        #[arg(long, allow_hyphen_values = true)]
        gram: String,
        /// Timelike or lightlike vector k.
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Any vector on the chosen side of the line through k.
        #[arg(long, allow_hyphen_values = true)]
        half: String,
        #[arg(long = "M")]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// Supplement of r; chosen automatically when omitted.
        #[arg(long, allow_hyphen_values = true)]
        l: Option<String>,
        #[arg(long, value_enum)]
        mode: ShortvecMode,
        /// Take several equal steps at once in the promised search.
        #[arg(long)]
        grouped_promised: bool,
    },
    /// Fundamental solution of x² − n y² = 1.
    Pell { n: String },
    /// Second simple roots of the rings of integers of Q(√n), as TSV.
    Table1 {
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<i64>>,
    },
    /// Classify a normed Dynkin diagram and list its one-node extensions.
    Diagram {
        diagram: PathBuf,
        /// List extensions by a node of this norm.
        #[arg(long)]
        extensions: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run both algorithms and report their work and agreement.
    Compare {
        lattice: PathBuf,
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        control: String,
        #[arg(long, default_value_t = 3)]
        search_bound: i64,
        #[arg(long, default_value_t = 100_000)]
        max_batches: u64,
        #[arg(long, default_value_t = 10_000)]
        max_walks: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ShortvecMode {
    Promised,
    Notpromised,
    Anisotropic,
}

const EXIT_BUDGET: u8 = 2;
const EXIT_INFINITE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Chamber {
            lattice,
            control,
            search_bound,
            max_walks,
            max_corners,
            compare_vinberg,
            max_batches,
            timings,
            out,
        } => {
            let (l, hash) = read_lattice(&lattice)?;
            let corner = start_corner(&l, &control, search_bound)?;
            let t = Instant::now();
            let ch = explore(&l, &corner, &ExploreBudget { max_walks, max_corners })?;
            let walk_ms = t.elapsed().as_millis();
            let mut report = chamber_report(&ch, &hash);
            let mut times = serde_json::Map::new();
            times.insert("edgewalk".into(), json!(walk_ms.to_string()));
            if compare_vinberg {
                let (v, ms) = vinberg_section(&l, &corner, &ch, max_batches)?;
                report["vinberg"] = v;
                times.insert("vinberg".into(), json!(ms.to_string()));
            }
            if timings {
                report["timings_ms"] = Value::Object(times);
            }
            emit(&report, out.as_deref())?;
            Ok(match ch.finite_volume {
                FiniteVolume::Yes => 0,
                FiniteVolume::Unknown => EXIT_BUDGET,
                FiniteVolume::No => EXIT_INFINITE,
            })
        }
        Command::Vinberg { lattice, control, search_bound, batch0, max_batches, max_priority, norms, no_stop, out } => {
            let (l, hash) = read_lattice(&lattice)?;
            let k = control_vector(&l, &control, search_bound)?;
            let b0 = if batch0 == "auto" { auto_batch0(&l, &k)? } else { read_roots(Path::new(&batch0))? };
            let opts = VinbergOptions {
                max_batches: Some(max_batches),
                max_priority: max_priority.as_deref().map(parse_q).transpose()?,
                norms: norms.map(|v| v.into_iter().map(Int::from).collect()),
                stop: if no_stop { StopTest::Never } else { StopTest::FiniteVolume },
            };
            let o = vinberg_run(&l, &k, &b0, &opts)?;
            let report = json!({
                "control": vec_json(&k),
                "batch0": roots_json(&b0),
                "accepted": roots_json(&o.accepted),
                "simple_roots": roots_json(&o.roots),
                "exhausted": o.exhausted,
                "batches_examined": o.batches_examined.to_string(),
                "trailing_empty_batches": o.trailing_empty_batches.to_string(),
                "candidates_examined": o.candidates_examined.to_string(),
                "version": env!("CARGO_PKG_VERSION"),
                "input_sha256": hash,
            });
            emit(&report, out.as_deref())?;
            Ok(if o.exhausted { EXIT_BUDGET } else { 0 })
        }
        Command::Batch0 { lattice, control, roots, out } => {
            let (l, hash) = read_lattice(&lattice)?;
            let k = parse_ivec(&control)?;
            let simple = match roots {
                None => auto_batch0(&l, &k)?,
                Some(p) => {
                    let given = read_roots(&p)?;
                    if l.norm(&k).is_negative() {
                        spherical_batch0(&l, &given)?.simple
                    } else {
                        let u = complement_roots(&l, &k, &given)?;
                        let mut all = u.clone();
                        all.extend(cuspidal_batch0(&l, &k, &u, None)?);
                        all
                    }
                }
            };
            let kind = if l.norm(&k).is_negative() { "timelike" } else { "lightlike" };
            let report = json!({
                "control": vec_json(&k),
                "kind": kind,
                "simple_roots": roots_json(&simple),
                "version": env!("CARGO_PKG_VERSION"),
                "input_sha256": hash,
            });
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Command::Shortvec { gram, k, half, m, r, l, mode, grouped_promised } => {
            let g = parse_qvec(&gram)?;
            if g.len() != 3 {
                bail!("--gram needs three entries a,b,c");
            }
            let gram = vec![vec![g[0].clone(), g[1].clone()], vec![g[1].clone(), g[2].clone()]];
            let frame = PlaneFrame::new(&gram, &parse_qvec(&k)?, &parse_qvec(&half)?)?;
            let m = parse_q(&m)?;
            let r = parse_ivec(&r)?;
            let report = match mode {
                ShortvecMode::Promised => {
                    let l = match l {
                        Some(s) => parse_ivec(&s)?,
                        None => frame.initial_supplement(&m, &r)?,
                    };
                    let p = frame.promised_with(&m, &r, &l, grouped_promised)?;
                    json!({"r": vec_json(&p.r), "l": vec_json(&p.l), "steps": p.steps.to_string()})
                }
                ShortvecMode::Notpromised => {
                    let l = match l {
                        Some(s) => parse_ivec(&s)?,
                        None => frame.initial_supplement(&m, &r)?,
                    };
                    match frame.not_promised(&m, &r, &l)? {
                        Some((r, l)) => json!({"r": vec_json(&r), "l": vec_json(&l)}),
                        None => json!({"r": null, "l": null}),
                    }
                }
                ShortvecMode::Anisotropic => {
                    let l = match l {
                        Some(s) => parse_ivec(&s)?,
                        None => frame.self_supplement(&r)?,
                    };
                    match frame.anisotropic_period(&m, &r, &l)? {
                        Some(p) => json!({
                            "g": p.g.iter().map(|row| vec_json(row)).collect::<Vec<_>>(),
                            "roots": roots_json(&p.roots),
                        }),
                        None => json!({"g": null, "roots": []}),
                    }
                }
            };
            emit(&report, None)?;
            Ok(0)
        }
        Command::Pell { n } => {
            let n: Int = n.parse().map_err(|_| anyhow!("{n:?} is not an integer"))?;
            let (x, y) = pell_fundamental(&n)?;
            println!("{x} {y}");
            Ok(0)
        }
        Command::Table1 { rows } => {
            print!("{}", table1(rows.as_deref())?);
            Ok(0)
        }
        Command::Diagram { diagram, extensions, out } => {
            let text = std::fs::read_to_string(&diagram).with_context(|| format!("reading {}", diagram.display()))?;
            let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", diagram.display()))?;
            let d = NormedDynkinDiagram::from_json(&v)?;
            let class = match d.classify() {
                DiagramClass::Spherical => "spherical",
                DiagramClass::Cuspidal => "cuspidal",
                DiagramClass::Neither => "neither",
            };
            let mut report = json!({
                "class": class,
                "gram": d.gram().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            if let Some(n) = extensions {
                let n = parse_q(&n)?;
                let ext = |list: Vec<chamberwalk::dynkin::Extension>| -> Value {
                    list.iter()
                        .map(|e| {
                            json!({
                                "norm": e.norm.to_string(),
                                "bonds": e.bonds.iter().map(|(i, b)| bond_json(*i, *b)).collect::<Vec<_>>(),
                            })
                        })
                        .collect()
                };
                report["spherical_extensions"] = ext(spherical_extensions(&d, &n)?);
                report["cuspidal_extensions"] = ext(cuspidal_extensions(&d, &n)?);
            }
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Command::Compare { lattice, control, search_bound, max_batches, max_walks, out } => {
            let (l, hash) = read_lattice(&lattice)?;
            let (edge, k, b0, ch) = match start_corner(&l, &control, search_bound) {
                Ok(corner) => {
                    let t = Instant::now();
                    let ch = explore(&l, &corner, &ExploreBudget { max_walks, max_corners: max_walks + 1 })?;
                    let ms = t.elapsed().as_millis();
                    let edge = json!({
                        "finite_volume": fv_json(ch.finite_volume),
                        "walks": ch.walks.to_string(),
                        "simple_roots": roots_json(&ch.simple_roots),
                        "wall_ms": ms.to_string(),
                    });
                    (edge, corner.vector, corner.roots, Some(ch))
                }
                // Without a corner there is nothing to walk from; Vinberg's
                // algorithm can still start from any timelike vector.
                Err(e) if control == "auto" => {
                    let k = control_vector(&l, "auto", search_bound)?;
                    let b0 = auto_batch0(&l, &k)?;
                    let edge = json!({"finite_volume": "unknown", "walks": "0", "error": format!("{e:#}")});
                    (edge, k, b0, None)
                }
                Err(e) => return Err(e),
            };
            if !l.norm(&k).is_negative() {
                bail!("Vinberg's algorithm needs a timelike starting corner");
            }
            let opts = VinbergOptions { max_batches: Some(max_batches), ..Default::default() };
            let t = Instant::now();
            let o = vinberg_run(&l, &k, &b0, &opts)?;
            let vin_ms = t.elapsed().as_millis();
            let same = ch.as_ref().map(|c| sorted(o.roots.clone()) == sorted(c.simple_roots.clone()));
            let report = json!({
                "edgewalk": edge,
                "vinberg": {
                    "exhausted": o.exhausted,
                    "batches_examined": o.batches_examined.to_string(),
                    "simple_roots": roots_json(&o.roots),
                    "wall_ms": vin_ms.to_string(),
                },
                "same_roots": same,
                "control": vec_json(&k),
                "version": env!("CARGO_PKG_VERSION"),
                "input_sha256": hash,
            });
            emit(&report, out.as_deref())?;
            let walked = ch.is_some_and(|c| c.finite_volume == FiniteVolume::Yes);
            Ok(if walked || !o.exhausted { 0 } else { EXIT_BUDGET })
        }
    }
}

fn sorted(mut v: Vec<IVec>) -> Vec<IVec> {
    v.sort();
    v
}

fn read_lattice(path: &Path) -> Result<(Lattice, String)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let l = Lattice::from_json(&text).with_context(|| format!("in {}", path.display()))?;
    if !l.is_lorentzian() {
        bail!("{}: the form is not Lorentzian", path.display());
    }
    Ok((l, format!("{:x}", Sha256::digest(&bytes))))
}

fn read_roots(path: &Path) -> Result<Vec<IVec>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let list = v.as_array().ok_or_else(|| anyhow!("{}: expected a list of vectors", path.display()))?;
    list.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| anyhow!("expected a vector, got {r}"))?
                .iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_i64().map(Int::from).ok_or_else(|| anyhow!("{n} is not an integer")),
                    Value::String(s) => s.parse::<Int>().map_err(|_| anyhow!("{s:?} is not an integer")),
                    other => Err(anyhow!("{other} is not an integer")),
                })
                .collect()
        })
        .collect()
}

fn parse_q(s: &str) -> Result<Rat> {
    parse_rational(s.trim()).map_err(|e| anyhow!(e))
}

fn parse_qvec(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(parse_q).collect()
}

fn parse_ivec(s: &str) -> Result<IVec> {
    s.split(',').map(|x| x.trim().parse::<Int>().map_err(|_| anyhow!("{x:?} is not an integer"))).collect()
}

/// A timelike control vector: the given one, or the primitive vector with
/// coordinates up to `bound` of smallest |k²|, then lexicographically first.
fn control_vector(l: &Lattice, control: &str, bound: i64) -> Result<IVec> {
    if control != "auto" {
        let k = parse_ivec(control)?;
        if k.len() != l.rank() {
            bail!("control has {} coordinates, lattice has rank {}", k.len(), l.rank());
        }
        return Ok(k);
    }
    let d = l.rank();
    let mut best: Option<(Rat, IVec)> = None;
    let mut cur = vec![-bound; d];
    loop {
        let v: IVec = cur.iter().map(|&x| Int::from(x)).collect();
        let n = l.norm(&v);
        if n.is_negative() && chamberwalk::arith::gcd_all(&v) == Int::from(1) {
            let key = (-n, v);
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
            }
        }
        let mut i = 0;
        while i < d && cur[i] == bound {
            cur[i] = -bound;
            i += 1;
        }
        if i == d {
            break;
        }
        cur[i] += 1;
    }
    best.map(|b| b.1).ok_or_else(|| anyhow!("no timelike vector with coordinates up to {bound}"))
}

fn start_corner(l: &Lattice, control: &str, bound: i64) -> Result<Corner> {
    if control == "auto" {
        return find_corner(l, bound)?.ok_or_else(|| anyhow!("no corner found with coordinates up to {bound}"));
    }
    let k = parse_ivec(control)?;
    let roots = auto_batch0(l, &k)?;
    Corner::new(l, k, roots).context("the control vector is not a corner of a chamber")
}

fn vinberg_section(l: &Lattice, corner: &Corner, ch: &Chamber, max_batches: u64) -> Result<(Value, u128)> {
    if corner.kind != CornerKind::Ordinary {
        bail!("Vinberg's algorithm needs a timelike starting corner");
    }
    let opts = VinbergOptions { max_batches: Some(max_batches), ..Default::default() };
    let t = Instant::now();
    let o = vinberg_run(l, &corner.vector, &corner.roots, &opts)?;
    let ms = t.elapsed().as_millis();
    Ok((
        json!({
            "exhausted": o.exhausted,
            "batches_examined": o.batches_examined.to_string(),
            "simple_roots": roots_json(&o.roots),
            "same_roots": sorted(o.roots) == sorted(ch.simple_roots.clone()),
        }),
        ms,
    ))
}

fn chamber_report(ch: &Chamber, hash: &str) -> Value {
    let corners: Vec<Value> = ch
        .corners
        .iter()
        .map(|c| {
            let idx: Vec<usize> =
                c.roots.iter().filter_map(|r| ch.simple_roots.iter().position(|s| s == r)).collect();
            json!({
                "vector": vec_json(&c.vector),
                "kind": match c.kind { CornerKind::Ordinary => "ordinary", CornerKind::Ideal => "ideal" },
                "root_indices": idx,
            })
        })
        .collect();
    json!({
        "finite_volume": fv_json(ch.finite_volume),
        "simple_roots": roots_json(&ch.simple_roots),
        "corners": corners,
        "walks": ch.walks.to_string(),
        "unexplored_rays": ch.unexplored.to_string(),
        "unbounded_edges": ch.unbounded_edges.to_string(),
        "version": env!("CARGO_PKG_VERSION"),
        "input_sha256": hash,
    })
}

fn fv_json(f: FiniteVolume) -> Value {
    match f {
        FiniteVolume::Yes => json!(true),
        FiniteVolume::No => json!(false),
        FiniteVolume::Unknown => json!("unknown"),
    }
}

fn vec_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn roots_json(v: &[IVec]) -> Value {
    Value::Array(v.iter().map(|r| vec_json(r)).collect())
}

fn bond_json(node: usize, b: Bond) -> Value {
    let (ty, dir) = match b {
        Bond::None => ("none", None),
        Bond::Single => ("single", None),
        Bond::Double(d) => ("double", Some(d)),
        Bond::Triple(d) => ("triple", Some(d)),
        Bond::HeavyOriented(d) => ("heavy", Some(d)),
        Bond::HeavyUnoriented => ("heavy", None),
    };
    // Directions are read from the new node towards the base node.
    let dir = match dir {
        None => Value::Null,
        Some(Dir::FirstToSecond) => json!("new->base"),
        Some(Dir::SecondToFirst) => json!("base->new"),
    };
    json!({"node": node, "type": ty, "dir": dir})
}

fn table1(rows: Option<&[i64]>) -> Result<String> {
    let ns: Vec<i64> = rows.map(<[i64]>::to_vec).unwrap_or_else(|| TABLE1_ROWS.to_vec());
    let mut s = String::from("n\tnorm\tcoefficient_1\tcoefficient_sqrt_n\tbatch\n");
    for n in ns {
        let r = rank2_second_root(&Int::from(n))?;
        s.push_str(&format!("{n}\t{}\t{}\t{}\t{}\n", r.norm, r.alpha.0, r.alpha.1, r.batch));
    }
    Ok(s)
}

fn emit(v: &Value, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
