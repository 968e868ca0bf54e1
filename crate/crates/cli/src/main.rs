use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dtomo::enumerate::{obstruction_set, order_for, solve_in_field};
use dtomo::modelset::{generate_patch, ModelSetSpec, Window};
use dtomo::rational::parse_q;
use dtomo::reference::{
    printed_obstruction, printed_ranges, reconcile_ranges, reconcile_values, reconcile_with_reference, Table,
};
use dtomo::sign::set_precision_cap;
use dtomo::tomography::{certify_slopes, determination_certificate, xray, Slope};
use dtomo::upolygon::{build_upolygon, ghost_pair, max_direction_sets, HRangeSet, UPolygon};
use dtomo::{Error, Exec, Q};
use dtomo_cli::config::Config;
use dtomo_cli::input;
use dtomo_cli::render::{render, Figure};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "dtomo", version, about = "Discrete tomography of cyclotomic model sets")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `key=value` setting, or a file of such lines. Repeatable.
    #[arg(long, global = true)]
    config: Vec<String>,
    /// Run every kernel on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Embed {
    /// Z[zeta_n] itself, n in {3, 4}.
    Lattice,
    /// Default window and star map.
    Standard,
    /// Dodecagonal window, n = 12.
    Shield,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quadruples whose cross-ratio value lies in Q(sqrt d).
    Enumerate {
        #[arg(long)]
        m: u64,
        #[arg(long = "sqrt", default_value_t = 1)]
        d: u64,
        /// Include the two infinite families.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cross-ratio values admissible for U-polygons in Z[zeta_n].
    ObstructionSet {
        #[arg(long)]
        n: u64,
        /// Diff against the shipped printed values.
        #[arg(long)]
        compare: bool,
    },
    /// Patch of a cyclotomic model set.
    Modelset {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        radius: String,
        /// Window circumradius.
        #[arg(long, default_value = "1")]
        c: String,
        /// `octagon:c`, `decagon:c` or `dodecagon:c`.
        #[arg(long)]
        window: Option<String>,
    },
    /// X-rays of a point set from a patch or ghost-pair document.
    Xray {
        #[arg(long)]
        input: PathBuf,
        /// Field of the document holding the points.
        #[arg(long, default_value = "points")]
        field: String,
        /// Semicolon-separated coefficient vectors.
        #[arg(long)]
        dirs: String,
    },
    /// Cross-ratio certificate for a direction set.
    Certify {
        #[arg(long)]
        n: u64,
        /// Comma-separated rationals or `inf`.
        #[arg(long, conflicts_with = "dirs", required_unless_present = "dirs")]
        slopes: Option<String>,
        #[arg(long)]
        dirs: Option<String>,
    },
    /// Largest direction ranges admitting U-polygons.
    MaxDirs {
        #[arg(long)]
        n: u64,
        /// Diff against the shipped printed ranges.
        #[arg(long)]
        compare: bool,
    },
    /// U-polygon for a range of directions e^{h pi i / m}.
    Upolygon {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        range: String,
        /// Defaults to lcm(2n, 12).
        #[arg(long)]
        m: Option<u64>,
        /// Embed into a point set and emit the ghost pair instead.
        #[arg(long, value_enum)]
        embed: Option<Embed>,
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// Ghost pair from a U-polygon document.
    Ghost {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        embed: Option<Embed>,
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// SVG of a patch or ghost-pair document.
    Render {
        #[arg(long)]
        input: PathBuf,
    },
    /// Diff computed sporadic solutions against a shipped table.
    Reconcile {
        #[arg(long)]
        table: String,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error(transparent)]
    Render(#[from] dtomo_cli::render::RenderError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.code(),
            CliError::Render(dtomo_cli::render::RenderError::ViewportOverflow { .. }) => "ViewportOverflow",
            CliError::Render(_) => "Render",
            CliError::Io(_) => "Io",
        }
    }
}

type Res<T> = Result<T, CliError>;

fn read(path: &PathBuf) -> Res<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json(path: &PathBuf) -> Res<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn spec_for(n: u64, embed: Option<Embed>, c: &Q) -> Res<ModelSetSpec> {
    let embed = embed.unwrap_or(if n == 3 || n == 4 { Embed::Lattice } else { Embed::Standard });
    Ok(match embed {
        Embed::Lattice => ModelSetSpec::lattice(n)?,
        Embed::Standard => ModelSetSpec::standard(n, c)?,
        Embed::Shield => {
            if n != 12 {
                return Err(Error::UnsupportedN(n).into());
            }
            let w = Window::regular(12, c, 12)?;
            ModelSetSpec::new(12, ModelSetSpec::default_star_exponent(12)?, w, None)?
        }
    })
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: &Cli, cfg: &Config) -> Res<String> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    Ok(match &cli.cmd {
        Cmd::Enumerate { m, d, all, format } => {
            let recs = solve_in_field(*m, *d, exec)?;
            let sporadic = recs.iter().filter(|r| r.is_sporadic()).count();
            let shown: Vec<_> = recs.iter().filter(|r| *all || r.is_sporadic()).collect();
            match format {
                Format::Json => pretty(&json!({
                    "m": m,
                    "d": d,
                    "total": recs.len(),
                    "sporadic": sporadic,
                    "records": shown,
                })),
                Format::Csv => {
                    let mut s = String::from("k1,k2,k3,k4,value,family,primitive\n");
                    for r in shown {
                        let [a, b, c, e] = r.quadruple.k;
                        let fam = match r.family {
                            Some(f) => format!("{f:?}").replace(", ", " "),
                            None => String::new(),
                        };
                        s += &format!("{a},{b},{c},{e},{},{fam},{}\n", r.value, r.primitive);
                    }
                    s
                }
            }
        }
        Cmd::ObstructionSet { n, compare } => {
            let o = obstruction_set(*n, exec)?;
            let values: Vec<String> = o.values.iter().map(|v| v.to_string()).collect();
            let mut doc = json!({ "n": o.n, "m_used": o.m_used, "count": o.values.len(), "values": values });
            if *compare {
                let printed = printed_obstruction(*n)?;
                let diff = reconcile_values(&o.values, &printed);
                let show = |v: &[dtomo::QuadraticSurd]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
                doc["printed"] = json!(printed.len());
                doc["diff"] = json!({
                    "only_computed": show(&diff.only_computed),
                    "only_printed": show(&diff.only_printed),
                    "repeated": show(&diff.repeated),
                });
            }
            pretty(&doc)
        }
        Cmd::Modelset { n, radius, c, window } => {
            let c = parse_q(c)?;
            let spec = match window {
                Some(w) => {
                    let w = Window::parse(w, *n)?;
                    ModelSetSpec::new(*n, ModelSetSpec::default_star_exponent(*n)?, w, None)?
                }
                None => spec_for(*n, None, &c)?,
            };
            pretty(&generate_patch(&spec, &parse_q(radius)?, exec)?)
        }
        Cmd::Xray { input, field, dirs } => {
            let doc = read_json(input)?;
            let n = input::order(&doc)?;
            let pts = input::points(&doc, field, n)?;
            let u = input::parse_dirs(dirs, n)?;
            let rows = u.iter().map(|d| xray(&pts, d)).collect::<dtomo::Result<Vec<_>>>()?;
            pretty(&rows)
        }
        Cmd::Certify { n, slopes, dirs } => {
            let obs = obstruction_set(*n, exec)?;
            let cert = match (slopes, dirs) {
                (Some(s), _) => {
                    let t = s.split(',').map(Slope::parse).collect::<dtomo::Result<Vec<_>>>()?;
                    certify_slopes(&t, &obs)?
                }
                (None, Some(d)) => determination_certificate(&input::parse_dirs(d, *n)?, &obs)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            pretty(&cert)
        }
        Cmd::MaxDirs { n, compare } => {
            let r = max_direction_sets(*n, exec)?;
            if *compare {
                let printed = printed_ranges(*n)?;
                let computed: Vec<Vec<u64>> = r.ranges.iter().map(|h| h.hs.clone()).collect();
                pretty(&json!({
                    "n": r.n,
                    "m": r.m,
                    "b": r.b,
                    "computed": computed.len(),
                    "printed": printed.len(),
                    "diff": reconcile_ranges(&computed, &printed),
                }))
            } else {
                pretty(&r)
            }
        }
        Cmd::Upolygon { n, range, m, embed, c } => {
            let hs = HRangeSet::parse(m.unwrap_or_else(|| order_for(*n)), range)?;
            let p = build_upolygon(&hs, *n)?;
            match embed {
                None => pretty(&p),
                Some(e) => pretty(&ghost_pair(&p, &spec_for(*n, Some(*e), &parse_q(c)?)?, exec)?),
            }
        }
        Cmd::Ghost { input, embed, c } => {
            let p: UPolygon =
                serde_json::from_str(&read(input)?).map_err(|e| Error::Parse(format!("{}: {e}", input.display())))?;
            pretty(&ghost_pair(&p, &spec_for(p.n, *embed, &parse_q(c)?)?, exec)?)
        }
        Cmd::Render { input } => {
            let doc = read_json(input)?;
            let n = input::order(&doc)?;
            if doc.get("black").is_some() {
                let common = input::points(&doc, "common", n)?;
                let black = input::points(&doc, "black", n)?;
                let grey = input::points(&doc, "grey", n)?;
                render(&Figure::Ghost { common: &common, black: &black, grey: &grey }, &cfg.render)?
            } else {
                let pts = input::points(&doc, "points", n)?;
                render(&Figure::Patch(&pts), &cfg.render)?
            }
        }
        Cmd::Reconcile { table } => {
            let t = Table::parse_name(table)?;
            let r = t.load();
            let recs = solve_in_field(r.m, t.sqrt_d(), exec)?;
            let diff = reconcile_with_reference(&recs, &r)?;
            pretty(&json!({
                "table": t.name(),
                "m": r.m,
                "entries": r.entries.len(),
                "computed_sporadic": recs.iter().filter(|x| x.is_sporadic()).count(),
                "clean": diff.is_empty(),
                "diff": diff,
            }))
        }
    })
}

fn load_config(cli: &Cli) -> Res<Config> {
    let mut cfg = Config::default();
    for c in &cli.config {
        if c.contains('=') {
            cfg.apply(c)?;
        } else {
            cfg.apply_text(&read(&PathBuf::from(c))?)?;
        }
    }
    if let Ok(v) = std::env::var("DT_PRECISION_CAP_BITS") {
        let bits = v.parse().map_err(|_| Error::Parse(format!("DT_PRECISION_CAP_BITS={v:?}")))?;
        cfg.precision_cap_bits = Some(bits);
    }
    if let Some(b) = cfg.precision_cap_bits {
        set_precision_cap(b);
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(&cli).and_then(|cfg| run(&cli, &cfg)).and_then(|out| match &cli.out {
        Some(p) => fs::write(p, out).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{out}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
