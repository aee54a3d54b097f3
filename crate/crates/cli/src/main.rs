//! `apnlab`: command-line front end.
//!
//! Exit codes: 0 on success (or all claims passing), 1 when a claim fails or
//! an internal consistency check trips, 2 on usage errors and bad input.

mod cache;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use apnlab::ccz::{
    dt_signature_via_graph_map, ea_class_bounds, explore_regions_with, tfl_graph_map, twist, AdmissibleMap,
    RegionTable, SpaceFilter,
};
use apnlab::claims::{json_report, junit_xml, run_claims, ClaimFilter, Context, Status};
use apnlab::geometry::{thickness_spectrum, VectorSpaceBasis};
use apnlab::gf2m::{format_poly, parse_bitstring};
use apnlab::methods::{linearity_methods, uniformity_methods};
use apnlab::trivariate::{
    build_cu, build_tfl, check_symmetries, leading_coordinate_map, max_diff_uniformity_cu, max_ls_dimension_cu,
    permpoly_table, search_nonbijectivity_witness, DirectionReduction, TrivariateSpec,
};
use apnlab::vbf::linearity_from_dim;
use apnlab::{io, Error, FieldSpec, Modulus, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use output::{render, Format};

#[derive(Parser)]
#[command(name = "apnlab", version, about = "Vectorial Boolean functions over binary fields")]
struct Cli {
    /// Worker threads (default: all cores). `--jobs 1` gives identical output.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Extension degree.
    #[arg(long)]
    m: u32,
    /// Irreducible modulus as a bit string, highest coefficient first
    /// (default: smallest irreducible of degree m).
    #[arg(long)]
    modulus: Option<String>,
}

impl FieldArgs {
    fn field(&self) -> Result<FieldSpec> {
        let modulus = match &self.modulus {
            Some(s) => Modulus::Explicit(parse_bitstring(s)?),
            None => Modulus::Default,
        };
        FieldSpec::new(self.m, modulus)
    }
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// u given by its minimal polynomial (bit string); the smallest root is used.
    #[arg(long, conflicts_with = "u")]
    u_minpoly: Option<String>,
    /// u given by its bits in the polynomial basis (decimal or 0x-hex).
    #[arg(long)]
    u: Option<String>,
}

impl ParamArgs {
    fn spec(&self) -> Result<TrivariateSpec> {
        let field = self.field.field()?;
        let u = match (&self.u_minpoly, &self.u) {
            (Some(p), _) => {
                let p = parse_bitstring(p)?;
                *field.roots_of_binary(p)?.first().ok_or_else(|| {
                    Error::Domain(format!("{} has no root in GF(2^{})", format_poly(p), field.m()))
                })?
            }
            (None, Some(u)) => field.element(parse_int(u)? as u32)?,
            (None, None) => return Err(Error::Domain("give --u-minpoly or --u".into())),
        };
        TrivariateSpec::new(field, u)
    }
}

fn parse_int(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x") {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::Domain(format!("'{s}' is not an integer")))
}

#[derive(Args)]
struct InputArgs {
    /// Lookup table (JSON `{"n", "table"}` or raw little-endian).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Field parameters, and facts about one element.
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        element: Option<String>,
    },
    /// The trivariate family C_u.
    Cu {
        #[command(flatten)]
        params: ParamArgs,
        /// Differential uniformity.
        #[arg(long)]
        ddt: bool,
        /// Linearity.
        #[arg(long)]
        walsh: bool,
        /// Image size.
        #[arg(long)]
        image: bool,
        /// Degree spectrum.
        #[arg(long)]
        degree: bool,
        /// Rotation and scaling symmetries.
        #[arg(long)]
        symmetries: bool,
        /// Look for a pair x != x' with C_u(x) = C_u(x').
        #[arg(long)]
        search_nonbijectivity_witness: bool,
        /// Cap on directions examined by the witness search.
        #[arg(long)]
        limit: Option<usize>,
        /// Uniformity method: system (derivative systems, symmetry-reduced),
        /// kernel or exhaustive (on the lookup table).
        #[arg(long, default_value = "system")]
        method: String,
        /// Linearity method: system, quadratic or fwht.
        #[arg(long, default_value = "system")]
        walsh_method: String,
        /// Write the lookup table here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the raw binary format instead of JSON.
        #[arg(long)]
        binary: bool,
    },
    /// Differential uniformity of a table.
    Ddt {
        #[command(flatten)]
        input: InputArgs,
        /// exhaustive or kernel.
        #[arg(long, default_value = "exhaustive")]
        method: String,
        /// Include the histogram of DDT entries (exhaustive only).
        #[arg(long)]
        histogram: bool,
    },
    /// Linearity of a table.
    Walsh {
        #[command(flatten)]
        input: InputArgs,
        /// fwht or quadratic.
        #[arg(long, default_value = "fwht")]
        method: String,
    },
    /// Algebraic normal form summary.
    Anf {
        #[command(flatten)]
        input: InputArgs,
        /// List the monomials (input masks) of each coordinate.
        #[arg(long)]
        monomials: bool,
    },
    /// The n-dimensional spaces of the Walsh zeroes.
    Spaces {
        #[command(flatten)]
        input: InputArgs,
        /// auto, affine-rows or dfs.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Write the list of spaces here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thickness spectrum.
    Thickness {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Twist a function along one space of its Walsh zeroes.
    Twist {
        #[command(flatten)]
        input: InputArgs,
        /// Index into the sorted list of spaces.
        #[arg(long, conflicts_with = "space")]
        space_index: Option<usize>,
        /// Basis as a JSON array of packed pairs `a << n | b`.
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        binary: bool,
    },
    /// DT-regions of the CCZ-class.
    Regions {
        #[command(flatten)]
        input: InputArgs,
        /// `thickness=2,9`: only twist along spaces of these thicknesses.
        #[arg(long)]
        filter: Option<String>,
        /// Twist along k spaces drawn with --seed.
        #[arg(long)]
        sample: Option<usize>,
        /// Resume from and append to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// T = F^{-1} + L with L(x_1, ...) = (x_1 + x_1^{2^{2k}}, 0, ...), or
    /// given tables.
    Tfl {
        /// Extension degree (with --u-minpoly or --u), when F is C_u.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long, conflicts_with = "u")]
        u_minpoly: Option<String>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// F as a table instead of C_u.
        #[arg(long = "in", requires = "l")]
        input: Option<PathBuf>,
        /// L as a table.
        #[arg(long)]
        l: Option<PathBuf>,
        /// Also compute the thickness spectrum of T^{-1}.
        #[arg(long)]
        signature: bool,
        /// Write T^{-1} here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether X^{(2^i+1)2^j} + X^{2^i+1} + X permutes GF(2^n).
    Permpoly {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
    /// Run the claim registry.
    Verify {
        /// all, a cost class (seconds, minutes, hours) or comma-separated ids.
        #[arg(long, default_value = "all")]
        filter: String,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        junit: Option<PathBuf>,
    },
}

enum Outcome {
    Done(Value),
    Failed(Value),
}

fn field_cmd(args: &FieldArgs, element: Option<&str>) -> Result<Value> {
    let field = args.field()?;
    let mut out = json!({
        "m": field.m(),
        "modulus": format!("{:b}", field.modulus()),
        "modulus_poly": format_poly(field.modulus()),
        "order": field.order(),
    });
    if let Some(e) = element {
        let a = field.element(parse_int(e)? as u32)?;
        out["element"] = json!({
            "bits": a.0,
            "minpoly": format!("{:b}", field.minimal_polynomial(a)),
            "trace": field.trace(a),
            "seventh_power": field.is_seventh_power(a),
        });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cu_cmd(
    params: &ParamArgs,
    ddt: bool,
    walsh: bool,
    image: bool,
    degree: bool,
    symmetries: bool,
    witness: bool,
    limit: Option<usize>,
    method: &str,
    walsh_method: &str,
    out: Option<&Path>,
    binary: bool,
    seed: u64,
) -> Result<Value> {
    let spec = params.spec()?;
    let mut result = serde_json::Map::new();
    let table = || build_cu(&spec);
    let needs_table = image || degree || out.is_some() || (ddt && method != "system") || (walsh && walsh_method != "system");
    let f = if needs_table { Some(table()?) } else { None };
    if ddt {
        let d = match method {
            "system" => max_diff_uniformity_cu(&spec, DirectionReduction::Symmetry)?.differential_uniformity(),
            other => uniformity_methods().get(other)?.differential_uniformity(f.as_ref().unwrap())?,
        };
        result.insert("D".into(), json!(d));
    }
    if walsh {
        let l = match walsh_method {
            "system" => {
                let sweep = max_ls_dimension_cu(&spec, DirectionReduction::Symmetry)?;
                linearity_from_dim(spec.n(), sweep.max_dim)
            }
            other => linearity_methods().get(other)?.linearity(f.as_ref().unwrap())?,
        };
        result.insert("linearity".into(), json!(l));
    }
    if image {
        result.insert("image_size".into(), json!(f.as_ref().unwrap().image_size()));
    }
    if degree {
        let d = f.as_ref().unwrap().degree_spectrum();
        result.insert("degree_spectrum".into(), json!(d.spectrum));
    }
    if symmetries {
        log::info!("symmetry check seed = {seed}");
        let report = check_symmetries(&spec, seed);
        result.insert("symmetries_hold".into(), json!(report.passed()));
        result.insert("symmetries".into(), serde_json::to_value(&report)?);
    }
    if witness {
        let (hit, examined) = search_nonbijectivity_witness(&spec, limit)?;
        let entry = match hit {
            Some(w) => json!({
                "status": "found",
                "direction": [w.direction.alpha.0, w.direction.beta.0, w.direction.gamma.0],
                "x": [w.point.alpha.0, w.point.beta.0, w.point.gamma.0],
                "image": [w.image.alpha.0, w.image.beta.0, w.image.gamma.0],
                "directions_examined": examined,
            }),
            None => json!({"status": "not found", "directions_examined": examined}),
        };
        result.insert("nonbijectivity_witness".into(), entry);
    }
    if let (Some(path), Some(f)) = (out, &f) {
        io::write_vbf(path, f, binary)?;
    }
    if result.is_empty() {
        let field = &spec.field;
        result.insert("m".into(), json!(field.m()));
        result.insert("u".into(), json!(spec.u.0));
        result.insert("u_minpoly".into(), json!(format!("{:b}", field.minimal_polynomial(spec.u))));
        result.insert("seventh_power".into(), json!(field.is_seventh_power(spec.u)));
    }
    Ok(Value::Object(result))
}

fn parse_filter(text: Option<&str>, sample: Option<usize>, seed: u64) -> Result<SpaceFilter> {
    let mut filter = match text {
        None => SpaceFilter::all(),
        Some(t) => {
            let list = t
                .strip_prefix("thickness=")
                .ok_or_else(|| Error::Domain(format!("unknown filter '{t}' (expected thickness=a,b,...)")))?;
            let values = list
                .split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|_| Error::Domain(format!("bad thickness '{v}'"))))
                .collect::<Result<Vec<_>>>()?;
            SpaceFilter::thickness(values)
        }
    };
    if let Some(k) = sample {
        log::info!("space sample seed = {seed}");
        filter = filter.with_sample(k, seed);
    }
    Ok(filter)
}

fn regions_json(table: &RegionTable) -> Value {
    let (lo, hi) = ea_class_bounds(table, table.total_spaces);
    let rows: Vec<Value> = table
        .regions
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "region": i + 1,
                "twist": r.twist,
                "degree_spectrum": r.degree_spectrum,
                "thickness_spectrum": r.thickness_spectrum,
                "permutations": r.contains_permutations,
                "count": r.count,
                "twists": r.twists,
                "witness": r.witness.basis(),
                "witness_twist_is_permutation": r.representative_is_permutation,
            })
        })
        .collect();
    json!({
        "n": table.n,
        "total_spaces": table.total_spaces,
        "spaces_examined": table.spaces_examined,
        "permutation_regions": table.permutation_regions(),
        "ea_class_bounds": if table.spaces_examined == table.total_spaces { json!([lo, hi]) } else { Value::Null },
        "degenerate_regions": table.degenerate.len(),
        "regions": rows,
    })
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    std::fs::write(path, output::to_json(value) + "\n")?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    let value = match &cli.command {
        Command::Field { field, element } => field_cmd(field, element.as_deref())?,
        Command::Cu {
            params,
            ddt,
            walsh,
            image,
            degree,
            symmetries,
            search_nonbijectivity_witness,
            limit,
            method,
            walsh_method,
            out,
            binary,
        } => cu_cmd(
            params,
            *ddt,
            *walsh,
            *image,
            *degree,
            *symmetries,
            *search_nonbijectivity_witness,
            *limit,
            method,
            walsh_method,
            out.as_deref(),
            *binary,
            seed,
        )?,
        Command::Ddt { input, method, histogram } => {
            let f = io::read_vbf(&input.input)?;
            if *histogram {
                if method != "exhaustive" {
                    return Err(Error::Domain("--histogram needs --method exhaustive".into()));
                }
                let r = f.ddt()?;
                json!({"D": r.differential_uniformity, "entry_histogram": r.entry_histogram})
            } else {
                json!({"D": uniformity_methods().get(method)?.differential_uniformity(&f)?})
            }
        }
        Command::Walsh { input, method } => {
            let f = io::read_vbf(&input.input)?;
            json!({"linearity": linearity_methods().get(method)?.linearity(&f)?})
        }
        Command::Anf { input, monomials } => {
            let f = io::read_vbf(&input.input)?;
            let d = f.degree_spectrum();
            let mut out = json!({
                "degree": f.algebraic_degree(),
                "degree_spectrum": d.spectrum,
                "non_degenerate": d.non_degenerate,
            });
            if *monomials {
                let anf = f.anf();
                out["coordinates"] = json!((0..f.n()).map(|i| anf.monomials(i)).collect::<Vec<_>>());
            }
            out
        }
        Command::Spaces { input, method, out } => {
            let f = io::read_vbf(&input.input)?;
            let (z, spaces) = cache::spaces(&f, method)?;
            if let Some(p) = out {
                std::fs::write(p, serde_json::to_vec(&spaces)?)?;
            }
            json!({
                "walsh_zeroes": z.len(),
                "count": spaces.len(),
                "thickness_spectrum": thickness_spectrum(&spaces, f.n()),
            })
        }
        Command::Thickness { input, method } => {
            let f = io::read_vbf(&input.input)?;
            let (_, spaces) = cache::spaces(&f, method)?;
            json!({"total": spaces.len(), "thickness_spectrum": thickness_spectrum(&spaces, f.n())})
        }
        Command::Twist {
            input,
            space_index,
            space,
            out,
            binary,
        } => {
            let f = io::read_vbf(&input.input)?;
            let n = f.n();
            let v = match (space_index, space) {
                (Some(i), _) => {
                    let (_, spaces) = cache::spaces(&f, "auto")?;
                    spaces
                        .get(*i)
                        .cloned()
                        .ok_or_else(|| Error::Domain(format!("space index {i} out of range (have {})", spaces.len())))?
                }
                (None, Some(text)) => {
                    let basis: Vec<u64> = serde_json::from_str(text)?;
                    VectorSpaceBasis::new(2 * n, &basis)?
                }
                (None, None) => return Err(Error::Domain("give --space-index or --space".into())),
            };
            let map = AdmissibleMap::new(n, &v)?;
            let g = twist(&f, &map)?;
            if let Some(p) = out {
                io::write_vbf(p, &g, *binary)?;
            }
            json!({
                "space": v.basis(),
                "t": map.t(),
                "permutation": g.is_permutation(),
                "degree_spectrum": g.degree_spectrum().spectrum,
            })
        }
        Command::Regions {
            input,
            filter,
            sample,
            checkpoint,
            out,
            method,
        } => {
            let f = io::read_vbf(&input.input)?;
            let filter = parse_filter(filter.as_deref(), *sample, seed)?;
            let (_, spaces) = cache::spaces(&f, method)?;
            let table = explore_regions_with(&f, &spaces, &filter, checkpoint.as_deref())?;
            let value = regions_json(&table);
            if let Some(p) = out {
                write_json(p, &value)?;
            }
            value
        }
        Command::Tfl {
            m,
            modulus,
            u_minpoly,
            u,
            k,
            input,
            l,
            signature,
            out,
        } => {
            let (f, l) = match (input, l, m) {
                (Some(fp), Some(lp), _) => (io::read_vbf(fp)?, io::read_vbf(lp)?),
                (None, _, Some(m)) => {
                    let params = ParamArgs {
                        field: FieldArgs {
                            m: *m,
                            modulus: modulus.clone(),
                        },
                        u_minpoly: u_minpoly.clone(),
                        u: u.clone(),
                    };
                    let spec = params.spec()?;
                    (build_cu(&spec)?, leading_coordinate_map(&spec.field, 3, *k)?)
                }
                _ => return Err(Error::Domain("give --m with --u-minpoly/--u, or --in with --l".into())),
            };
            let t = build_tfl(&f, &l)?;
            let mut value = json!({"permutation": t.is_permutation()});
            if let Ok(g) = t.inverse() {
                value["inverse_degree"] = json!(g.algebraic_degree());
                value["inverse_D"] = json!(g.differential_uniformity()?);
                value["degree_spectrum"] = json!(g.degree_spectrum().spectrum);
                if *signature {
                    let (_, spaces) = cache::spaces(&f, "auto")?;
                    let sig = dt_signature_via_graph_map(&f, &g, &tfl_graph_map(&l)?, &spaces)?;
                    value["thickness_spectrum"] = json!(sig.thickness_spectrum);
                }
                if let Some(p) = out {
                    io::write_vbf(p, &g, false)?;
                }
            } else {
                value["image_size"] = json!(t.image_size());
            }
            value
        }
        Command::Permpoly { n, i, j } => {
            let t = permpoly_table(*n, *i, *j)?;
            json!({"n": n, "i": i, "j": j, "permutation": t.is_permutation(), "image_size": t.image_size()})
        }
        Command::Verify { filter, report, junit } => {
            let filter: ClaimFilter = filter.parse()?;
            let results = run_claims(&filter, &Context::new());
            if let Some(p) = report {
                write_json(p, &json_report(&results))?;
            }
            if let Some(p) = junit {
                std::fs::write(p, junit_xml(&results))?;
            }
            let failed = results
                .iter()
                .any(|r| matches!(r.status, Status::Fail { .. } | Status::Error { .. }));
            let rows: Vec<Value> = results
                .iter()
                .map(|r| json!({"id": r.id, "status": r.status.name(), "runtime_ms": r.runtime_ms}))
                .collect();
            let value = json!({"filter": filter.to_string(), "results": rows});
            return Ok(if failed { Outcome::Failed(value) } else { Outcome::Done(value) });
        }
    };
    Ok(Outcome::Done(value))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Consistency(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Done(v)) => {
            println!("{}", render(&v, cli.format));
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(v)) => {
            println!("{}", render(&v, cli.format));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
