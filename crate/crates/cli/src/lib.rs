//! Command dispatch for the `covermonoid` binary. Every command renders to a
//! string so that output can be compared byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use covermonoid_core::abelian_group::{FiniteAbelianGroup, GroupError, TwoGenPresentation};
use covermonoid_core::cover_monoid::{pardini_homomorphisms, CoverLattice, Ray};
use covermonoid_core::graded_algebra::MultiplicationTable;
use covermonoid_core::stack_analysis::{
    all_smooth_sequences, irreducibility_report, singular_relation, smooth_locus_fan, smoothness_verdict,
    HLocusContext, IrreducibilityReport, SmoothnessVerdict,
};
use covermonoid_core::two_degree::{
    classify_two_degree_algebra, degenerate_ray, enumerate_sigma, enumerate_sigma_bar, enumerate_theta2,
    invariants_for, lambda_delta, nc_ray_table, omega_set, d_value, TwoDegreeError, WhichRay,
};
use covermonoid_core::verification::{self, Bounds, Context};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "covermonoid", version, about = "Invariants of abelian covers of a finite abelian group")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 12, global = true)]
    pub max_order: u64,
    #[arg(long, default_value_t = 101, global = true)]
    pub prime: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The lattice K: generators v_{m,n} and a basis.
    Lattice { group: String },
    /// Reduced binomial presentation of the monoid ring of K_+.
    Presentation { group: String },
    /// Extremal rays of the dual cone.
    Rays { group: String },
    /// Pardini rays of all surjections onto cyclic groups.
    Pardini { group: String },
    /// Smoothness of extremal rays, or of a sequence of them given by index.
    SmoothCheck {
        group: String,
        #[arg(long, value_delimiter = ',')]
        rays: Vec<usize>,
    },
    /// Omega_{beta,N} and the value d for each of its elements.
    Omega { beta: u64, n: u64 },
    /// Derived invariants of a presentation (r, alpha, N) at q_bar.
    Invariants { r: u64, alpha: u64, n: u64, q_bar: u64 },
    /// The rays Lambda and Delta of a presentation at q_bar.
    LambdaDelta { r: u64, alpha: u64, n: u64, q_bar: u64 },
    /// Data (presentation, q_bar, phi) in Sigma for the group.
    Sigma {
        group: String,
        /// Use the weaker conditions that define Theta^2.
        #[arg(long)]
        weak: bool,
    },
    /// Sequences of rays in Theta^2.
    Theta2 { group: String },
    /// Table rows on quotients of the group, pulled back to rays with their h.
    NcTable { group: String },
    /// Classify a multiplication table (JSON file) generated in degrees m and n.
    Classify { table: PathBuf, m: String, n: String },
    /// h of each extremal ray, or of a table given as a JSON file, with the locus tests.
    H {
        group: Option<String>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Reducibility certificate, or the reason none exists.
    Reducible { group: String },
    /// Whether the stack of covers is smooth, with a singular relation if not.
    SmoothStack { group: String },
    /// Fan of the smooth locus and its unimodularity check.
    Fan {
        group: String,
        /// Use every maximal smooth sequence of extremal rays instead of Theta^2.
        #[arg(long)]
        all_smooth: bool,
    },
    /// Runs the property suite at the configured bounds.
    Verify,
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Failure(m) => m,
        }
    }
}

fn fail<E: ToString>(e: E) -> CliError {
    CliError::Failure(e.to_string())
}

fn parse_group(spec: &str) -> Result<FiniteAbelianGroup, CliError> {
    let g = FiniteAbelianGroup::parse(spec).map_err(|e| CliError::Parse(e.to_string()))?;
    if g.size() == 1 {
        return Err(CliError::Parse(format!("{spec} is the trivial group")));
    }
    Ok(g)
}

fn lattice_of(spec: &str) -> Result<CoverLattice, CliError> {
    CoverLattice::new(&parse_group(spec)?).map_err(fail)
}

fn presentation(r: u64, alpha: u64, n: u64) -> Result<TwoGenPresentation, CliError> {
    TwoGenPresentation::new(r, alpha, n).map_err(|e: GroupError| CliError::Parse(e.to_string()))
}

fn read_table(path: &PathBuf) -> Result<MultiplicationTable, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    MultiplicationTable::from_json(&value).map_err(|e| CliError::Parse(e.to_string()))
}

fn ray_line(lattice: &CoverLattice, ray: &Ray) -> String {
    let values: Vec<String> = lattice.generator_values(ray).iter().map(|v| v.to_string()).collect();
    let e: Vec<String> = (0..lattice.size()).map(|i| ray.e_value(i).to_string()).collect();
    format!("E = [{}]  values = [{}]", e.join(", "), values.join(" "))
}

struct Report {
    json: Value,
    text: String,
    failure: Option<String>,
}

fn report(json: Value, text: String) -> Result<Report, CliError> {
    Ok(Report { json, text, failure: None })
}

/// A rendered report; `failure` is set when the command ran but a check failed.
pub struct Rendered {
    pub output: String,
    pub failure: Option<String>,
}

/// Executes a parsed command and returns the rendered report.
pub fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    if !covermonoid_core::abelian_group::is_prime(cli.prime) {
        return Err(CliError::Parse(format!("--prime {} is not prime", cli.prime)));
    }
    if cli.max_order < 2 {
        return Err(CliError::Parse("--max-order must be at least 2".into()));
    }
    let bounds = Bounds { max_order: cli.max_order, prime: cli.prime };
    let r = dispatch(&cli.command, bounds)?;
    let output = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&r.json).expect("values serialize")),
        Format::Text => r.text,
    };
    Ok(Rendered { output, failure: r.failure })
}

/// Parses `args` (without the program name) and executes them.
pub fn execute_args<I, T>(args: I) -> Result<Rendered, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("covermonoid")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Parse(e.to_string()))?;
    execute(&cli)
}

fn dispatch(command: &Command, bounds: Bounds) -> Result<Report, CliError> {
    match command {
        Command::Lattice { group } => {
            let l = lattice_of(group)?;
            let g = l.group();
            let gens: Vec<Value> =
                l.generators().iter().map(|&(i, j)| json!([g.element(i).to_string(), g.element(j).to_string()])).collect();
            let basis: Vec<Vec<String>> =
                l.k_basis().iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
            let mut text = format!("group Z/{}\nrank {}\ngenerators {}\n", g.spec(), l.rank(), gens.len());
            for row in &basis {
                writeln!(text, "basis {}", row.join(" ")).ok();
            }
            report(
                json!({"group": g.spec(), "size": g.size().to_string(), "rank": l.rank().to_string(), "generators": gens, "k_basis": basis}),
                text,
            )
        }
        Command::Presentation { group } => {
            let p = lattice_of(group)?.reduced_presentation();
            report(p.to_json(), p.to_string())
        }
        Command::Rays { group } => {
            let l = lattice_of(group)?;
            let rays = l.extremal_rays().map_err(fail)?;
            let text: String = rays.iter().map(|r| format!("{}\n", ray_line(&l, r))).collect();
            report(Value::Array(rays.iter().map(|r| l.ray_json(r)).collect()), text)
        }
        Command::Pardini { group } => {
            let l = lattice_of(group)?;
            let mut json_out = Vec::new();
            let mut text = String::new();
            for eta in pardini_homomorphisms(l.group()) {
                let ray = l.pardini_ray(&eta).map_err(fail)?;
                let images: Vec<String> = eta.images().iter().map(|e| e.to_string()).collect();
                writeln!(text, "Z/{} [{}]  {}", eta.target().spec(), images.join(" "), ray_line(&l, &ray)).ok();
                json_out.push(json!({"target": eta.target().spec(), "images": images, "ray": l.ray_json(&ray)}));
            }
            report(Value::Array(json_out), text)
        }
        Command::SmoothCheck { group, rays } => {
            let l = lattice_of(group)?;
            let all = l.extremal_rays().map_err(fail)?;
            if let Some(&bad) = rays.iter().find(|&&i| i >= all.len()) {
                return Err(CliError::Parse(format!("ray index {bad} out of range (0..{})", all.len())));
            }
            if rays.is_empty() {
                let mut out = Vec::new();
                let mut text = String::new();
                for (i, r) in all.iter().enumerate() {
                    let smooth = l.is_smooth_ray(r).map_err(fail)?;
                    writeln!(text, "ray {i}: {}", if smooth { "smooth" } else { "not smooth" }).ok();
                    out.push(json!({"index": i.to_string(), "smooth": smooth}));
                }
                return report(Value::Array(out), text);
            }
            let seq: Vec<Ray> = rays.iter().map(|&i| all[i].clone()).collect();
            let witnesses = l.is_smooth_sequence(&seq).map_err(fail)?;
            let g = l.group();
            let dual: Option<Vec<String>> = witnesses.map(|w| {
                w.iter()
                    .map(|&k| {
                        let (a, b) = l.generators()[k];
                        format!("v_{{{},{}}}", g.element(a), g.element(b))
                    })
                    .collect()
            });
            let text = match &dual {
                Some(v) => format!("smooth; dual elements {}\n", v.join(" ")),
                None => "not smooth\n".to_string(),
            };
            report(json!({"rays": rays.iter().map(|i| i.to_string()).collect::<Vec<_>>(), "smooth": dual.is_some(), "dual_elements": dual}), text)
        }
        Command::Omega { beta, n } => {
            if *n < 2 || beta >= n {
                return Err(CliError::Parse(format!("need 0 <= beta < N and N > 1, got beta={beta} N={n}")));
            }
            let omega = omega_set(*beta, *n);
            let d: Vec<u64> = omega.iter().map(|&q| d_value(*beta, *n, q)).collect();
            let mut text = String::new();
            for (q, dq) in omega.iter().zip(&d) {
                writeln!(text, "q={q} d={dq}").ok();
            }
            report(
                json!({"beta": beta.to_string(), "N": n.to_string(),
                       "omega": omega.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                       "d": d.iter().map(|x| x.to_string()).collect::<Vec<_>>()}),
                text,
            )
        }
        Command::Invariants { r, alpha, n, q_bar } => {
            let inv = invariants_for(presentation(*r, *alpha, *n)?, *q_bar).map_err(fail)?;
            inv.check().map_err(CliError::Failure)?;
            let f: Vec<String> = inv.f.iter().map(|x| x.to_string()).collect();
            let text = format!(
                "q_bar={} q_hat={} q'={} z={} x={} y={} w={} gamma={} d_qhat={}\nf = {}\n",
                inv.q_bar, inv.q_hat, inv.q_prime, inv.z, inv.x, inv.y, inv.w, inv.gamma, inv.d_q_hat, f.join(" ")
            );
            report(inv.to_json(), text)
        }
        Command::LambdaDelta { r, alpha, n, q_bar } => {
            let inv = invariants_for(presentation(*r, *alpha, *n)?, *q_bar).map_err(fail)?;
            let l = CoverLattice::new(inv.group()).map_err(fail)?;
            let mut rays = Vec::new();
            for which in [WhichRay::Lambda, WhichRay::Delta] {
                match degenerate_ray(&inv, &l, which) {
                    Ok((form, ray)) => rays.push((ray, Some(format!("{form:?}")))),
                    Err(TwoDegreeError::NoDegeneracy(_)) => {
                        let (lam, del) = lambda_delta(&inv, &l).map_err(fail)?;
                        rays.push((if which == WhichRay::Lambda { lam } else { del }, None));
                    }
                    Err(e) => return Err(fail(e)),
                }
            }
            let entry = |(ray, form): &(Ray, Option<String>)| {
                let mut v = l.ray_json(ray);
                v["degenerate_form"] = form.clone().map_or(Value::Null, Value::String);
                v
            };
            let text = format!("Lambda {}\nDelta  {}\n", ray_line(&l, &rays[0].0), ray_line(&l, &rays[1].0));
            report(json!({"lambda": entry(&rays[0]), "delta": entry(&rays[1])}), text)
        }
        Command::Sigma { group, weak } => {
            let g = parse_group(group)?;
            let data = if *weak { enumerate_sigma_bar(&g) } else { enumerate_sigma(&g) };
            let mut text = String::new();
            for chi in &data {
                let p = chi.presentation;
                let images: Vec<String> = chi.phi.images().iter().map(|e| e.to_string()).collect();
                writeln!(text, "({},{},{}) q_bar={} phi=[{}]", p.r, p.alpha, p.n, chi.q_bar, images.join(" ")).ok();
            }
            report(Value::Array(data.iter().map(|chi| chi.to_json()).collect()), text)
        }
        Command::Theta2 { group } => {
            let l = lattice_of(group)?;
            let theta = enumerate_theta2(&l).map_err(fail)?;
            let mut text = String::new();
            for seq in &theta {
                let lines: Vec<String> = seq.iter().map(|r| ray_line(&l, r)).collect();
                writeln!(text, "{}", lines.join(" | ")).ok();
            }
            let json_out = theta.iter().map(|seq| Value::Array(seq.iter().map(|r| l.ray_json(r)).collect())).collect();
            report(Value::Array(json_out), text)
        }
        Command::NcTable { group } => {
            let l = lattice_of(group)?;
            let table = nc_ray_table(&l).map_err(fail)?;
            let mut text = String::new();
            for e in &table {
                writeln!(text, "row {} l={} H=Z/{} h={}  {}", e.row.kind.row(), e.row.l, e.row.h_group.spec(), e.h, ray_line(&l, &e.ray))
                    .ok();
            }
            report(Value::Array(table.iter().map(|e| e.to_json(&l)).collect()), text)
        }
        Command::Classify { table, m, n } => {
            let psi = read_table(table)?;
            let g = psi.group();
            let m = g.parse_element(m).map_err(|e| CliError::Parse(e.to_string()))?;
            let n = g.parse_element(n).map_err(|e| CliError::Parse(e.to_string()))?;
            let c = classify_two_degree_algebra(&psi, &m, &n).map_err(fail)?;
            let p = c.presentation;
            let f = psi.field();
            report(
                json!({"r": p.r.to_string(), "alpha": p.alpha.to_string(), "N": p.n.to_string(),
                       "q_bar": c.q_bar.to_string(), "lambda": f.scalar_json(&c.lambda)}),
                format!("(r, alpha, N) = ({}, {}, {})  q_bar = {}  lambda = {}\n", p.r, p.alpha, p.n, c.q_bar, c.lambda),
            )
        }
        Command::H { group, table } => match (group, table) {
            (Some(spec), None) => {
                let l = lattice_of(spec)?;
                let ctx = HLocusContext::new(&l).map_err(fail)?;
                let mut out = Vec::new();
                let mut text = String::new();
                for (i, ray) in l.extremal_rays().map_err(fail)?.iter().enumerate() {
                    let one = ctx.test_ray(ray, 1).map_err(fail)?;
                    let two = ctx.test_ray(ray, 2).map_err(fail)?;
                    writeln!(text, "ray {i}: h={} h<=1:{} h<=2:{}", one.h, one.by_h, two.by_h).ok();
                    out.push(json!({"index": i.to_string(), "h": one.h.to_string(), "h_le_1": one.by_h, "h_le_2": two.by_h}));
                }
                report(Value::Array(out), text)
            }
            (None, Some(path)) => {
                let psi = read_table(path)?;
                let l = CoverLattice::new(psi.group()).map_err(fail)?;
                let ctx = HLocusContext::new(&l).map_err(fail)?;
                let one = ctx.test_table(&psi, 1).map_err(fail)?;
                let two = ctx.test_table(&psi, 2).map_err(fail)?;
                let g = psi.group();
                let h_sub: Vec<String> = psi.h_subgroup().iter().map(|&i| g.element(i).to_string()).collect();
                report(
                    json!({"h": one.h.to_string(), "H": h_sub, "h_le_1": one.by_h, "h_le_2": two.by_h}),
                    format!("h={} H={{{}}} h<=1:{} h<=2:{}\n", one.h, h_sub.join(", "), one.by_h, two.by_h),
                )
            }
            _ => Err(CliError::Parse("give either a group or --table".into())),
        },
        Command::Reducible { group } => {
            let g = parse_group(group)?;
            let verdict = irreducibility_report(&g).map_err(fail)?;
            let e = |i: usize| g.element(i).to_string();
            let (json_out, text) = match &verdict {
                IrreducibilityReport::Reducible { m, n, t, a } => (
                    json!({"verdict": "reducible", "certificate": {"m": e(*m), "n": e(*n), "t": e(*t), "a": e(*a)}}),
                    format!("reducible: m={} n={} t={} a={}\n", e(*m), e(*n), e(*t), e(*a)),
                ),
                IrreducibilityReport::Irreducible { reason } => {
                    (json!({"verdict": "irreducible", "reason": reason}), format!("irreducible: {reason}\n"))
                }
                IrreducibilityReport::Unknown => (json!({"verdict": "unknown"}), "unknown\n".to_string()),
            };
            report(json_out, text)
        }
        Command::SmoothStack { group } => {
            let g = parse_group(group)?;
            match smoothness_verdict(&g).map_err(fail)? {
                SmoothnessVerdict::Smooth => report(json!({"smooth": true}), "smooth\n".into()),
                SmoothnessVerdict::Singular { m, n, t } => {
                    let rel = singular_relation(&g, m, n, t);
                    let e = |i: usize| g.element(i).to_string();
                    report(
                        json!({"smooth": false, "m": e(m), "n": e(n), "t": e(t), "relation": rel}),
                        format!("singular: {rel}\n"),
                    )
                }
            }
        }
        Command::Fan { group, all_smooth } => {
            let l = lattice_of(group)?;
            let seqs = if *all_smooth { all_smooth_sequences(&l).map_err(fail)? } else { enumerate_theta2(&l).map_err(fail)? };
            let fan = smooth_locus_fan(&l, &seqs).map_err(fail)?;
            report(fan.to_json(), fan.to_text())
        }
        Command::Verify => verify(bounds),
    }
}

fn verify(bounds: Bounds) -> Result<Report, CliError> {
    let ctx = Context::new(bounds);
    let mut rows: Vec<(String, Result<String, String>)> = verification::run_all(&ctx)
        .into_iter()
        .map(|o| (format!("{}::{}", o.module, o.name), o.result))
        .collect();
    rows.push(("cli::identical_invocations_agree".into(), output_is_deterministic(bounds)));
    let mut text = String::new();
    let mut entries = Vec::new();
    for (name, result) in &rows {
        let (status, detail) = match result {
            Ok(d) => ("pass", d),
            Err(d) => ("FAIL", d),
        };
        writeln!(text, "{status} {name}: {detail}").ok();
        entries.push(json!({"property": name, "status": status, "detail": detail}));
    }
    let failed = rows.iter().filter(|(_, r)| r.is_err()).count();
    let failure = (failed > 0).then(|| format!("{failed} of {} properties failed", rows.len()));
    Ok(Report { json: Value::Array(entries), text, failure })
}

fn output_is_deterministic(bounds: Bounds) -> Result<String, String> {
    let commands = ["rays 4", "presentation 2,4", "sigma 6", "theta2 2,2", "nc-table 4", "fan 6", "invariants 2 1 4 1"];
    for line in commands {
        for format in ["json", "text"] {
            let args: Vec<String> = ["covermonoid", "--format", format, "--max-order", &bounds.max_order.to_string()]
                .iter()
                .map(|s| s.to_string())
                .chain(line.split(' ').map(String::from))
                .collect();
            let cli = Cli::try_parse_from(&args).map_err(|e| e.to_string())?;
            let first = execute(&cli).map_err(|e| e.message().to_string())?.output;
            let second = execute(&cli).map_err(|e| e.message().to_string())?.output;
            if first != second {
                return Err(format!("`{line}` in {format} differs between runs"));
            }
        }
    }
    Ok(format!("{} invocations", 2 * commands.len()))
}

/// Sets the global thread pool size from `COVERMONOID_THREADS`, if present.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("COVERMONOID_THREADS") else { return Ok(()) };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Parse(format!("COVERMONOID_THREADS={value} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(fail)
}

/// Writes the report to `--out` or standard output.
pub fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
