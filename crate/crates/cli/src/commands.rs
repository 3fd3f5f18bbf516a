use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morselab_core::{
    classify_special_racg, four_cycle_witness_path, geodesic_divergence, geodesic_lower_divergence,
    morse_boundary_witness, sigma_profile, DefiningGraph, DivergenceProfile, DivergenceRow, Error, GroupKind,
    InducedCycle, PeriodicGeodesic, Presentation, Rho, SigmaConfig, SubgroupField, SubgroupSpec, Verdict, VertexSet,
    Witness, DEFAULT_ELEMENT_BUDGET,
};
use serde_json::{json, Value};

use crate::io::{self, LoadError};
use crate::recipes::{self, Recipe, RecipeOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Scope(String),
    #[error("{0}")]
    Budget(Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Scope(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Failed(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            e @ Error::BudgetExceeded { .. } => CliError::Budget(e),
            Error::Scope(s) => CliError::Scope(s),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Subgroup classification and divergence experiments for right-angled
/// Coxeter and Artin groups.
#[derive(Debug, Parser)]
#[command(name = "morselab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the special subgroup of a RACG spanned by a vertex subset.
    Classify {
        #[arg(long)]
        graph: String,
        /// Comma-separated vertex names.
        #[arg(long, default_value = "")]
        subset: String,
    },
    /// Measure divergence functions and write CSV.
    #[command(subcommand)]
    Divergence(DivergenceCommand),
    /// Word distance, or distance to a subgroup.
    Distance(DistanceArgs),
    /// Normal form, cyclic reduction and join-subword data of a word.
    Reduce(ReduceArgs),
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Run a canned acceptance experiment.
    Recipe {
        name: Recipe,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        rmax: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
        budget: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Racg,
    Raag,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// A graph JSON file or a family name (c4, p4, gamma_d:<d>, omega_d:<d>, cycle:<n>, path:<n>).
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_enum, default_value = "racg")]
    pub kind: Kind,
}

impl GroupArgs {
    fn presentation(&self) -> CliResult<Presentation> {
        let g = io::resolve_graph(&self.graph)?;
        Ok(Presentation::new(
            g,
            match self.kind {
                Kind::Racg => GroupKind::Racg,
                Kind::Raag => GroupKind::Raag,
            },
        ))
    }
}

#[derive(Debug, Args)]
pub struct SubgroupArgs {
    /// Special subgroup: comma-separated vertex names.
    #[arg(long, conflicts_with = "gens")]
    pub subset: Option<String>,
    /// Finitely generated subgroup: comma-separated words.
    #[arg(long, value_delimiter = ',')]
    pub gens: Vec<String>,
}

impl SubgroupArgs {
    fn spec(&self, p: &Presentation) -> CliResult<SubgroupSpec> {
        match &self.subset {
            Some(s) => Ok(SubgroupSpec::Special(subset(p.graph(), s)?)),
            None if self.gens.is_empty() => Err(CliError::Input("give --subset or --gens".into())),
            None => {
                let gens = self.gens.iter().map(|w| p.parse(w)).collect::<Result<_, _>>()?;
                Ok(SubgroupSpec::finitely_generated(gens)?)
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Radii: `a..b` (inclusive), `a,b,c` or a single value.
    #[arg(long, value_parser = parse_radii)]
    pub r: RadiusList,
    #[arg(long)]
    pub rmax: u32,
    #[arg(long, default_value_t = 0)]
    pub slack: u32,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
    pub budget: usize,
}

#[derive(Clone, Debug)]
pub struct RadiusList(pub Vec<u32>);

pub fn parse_radii(s: &str) -> Result<RadiusList, String> {
    let bad = || format!("bad radius list `{s}`");
    let values: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.parse().map_err(|_| bad())?;
        let b: u32 = b.trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(RadiusList(values))
}

#[derive(Debug, Subcommand)]
pub enum DivergenceCommand {
    /// Lower relative divergence of a subgroup.
    Sigma {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value = "1")]
        rho: Rho,
        #[arg(long, default_value_t = 100_000)]
        pair_cap: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Divergence of the periodic geodesic through the identity.
    Geodesic {
        #[command(flatten)]
        group: GroupArgs,
        /// Letters of one period, comma- or space-separated.
        #[arg(long)]
        period: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Lower divergence of the periodic geodesic: minimum over centre points.
    Ldiv {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        period: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    word: String,
    /// Second element for a plain word distance.
    #[arg(long, conflicts_with_all = ["subset", "gens"])]
    to: Option<String>,
    #[command(flatten)]
    subgroup: SubgroupArgs,
    /// Ball radius for finitely generated subgroups.
    #[arg(long, default_value_t = 10)]
    rmax: u32,
    #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
    budget: usize,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    word: String,
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// Explicit path outside the r-neighbourhood of a special subgroup that
    /// fails the 4-cycle condition.
    FourCycle {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        subset: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        r: u32,
    },
    /// First induced cycle of length at least 5 with no induced 4-cycle
    /// having a diagonal pair inside it.
    MorseBoundary {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
}

fn subset(g: &DefiningGraph, text: &str) -> CliResult<VertexSet> {
    let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(g.vertex_set(&names)?)
}

fn vertex_names(g: &DefiningGraph, s: VertexSet) -> Vec<&str> {
    s.iter().map(|v| g.name(v)).collect()
}

fn cycle_json(g: &DefiningGraph, c: &InducedCycle) -> Value {
    json!(c.vertices().iter().map(|&v| g.name(v)).collect::<Vec<_>>())
}

fn witness_json(g: &DefiningGraph, w: &Witness) -> Value {
    match w {
        Witness::PartialFourCycle(c) => json!({ "partial_four_cycle": cycle_json(g, c) }),
        Witness::FourCycleDiagonal(c) => json!({ "four_cycle_diagonal": cycle_json(g, c) }),
        Witness::Exhausted { four_cycles } => json!({ "exhausted": { "four_cycles": four_cycles } }),
        Witness::Clique(s) => json!({ "clique": vertex_names(g, *s) }),
        Witness::NonAdjacent(u, v) => json!({ "non_adjacent": [g.name(*u), g.name(*v)] }),
        Witness::Triangle(t) => json!({ "triangle": t.map(|v| g.name(v)) }),
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::OutsideScope => "outside_scope",
    }
}

fn classify(out: &mut dyn Write, graph: &str, subset_text: &str) -> CliResult {
    let g = io::resolve_graph(graph)?;
    let s1 = subset(&g, subset_text)?;
    let rep = classify_special_racg(&g, s1);
    let witnesses: serde_json::Map<String, Value> =
        rep.witnesses.iter().map(|(k, w)| (k.clone(), witness_json(&g, w))).collect();
    let doc = json!({
        "subset": vertex_names(&g, s1),
        "strongly_quasiconvex": verdict_str(rep.strongly_quasiconvex),
        "stable": verdict_str(rep.stable),
        "finite": verdict_str(rep.finite),
        "witnesses": witnesses,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
    if rep.strongly_quasiconvex == Verdict::OutsideScope {
        return Err(CliError::Scope("graph is not triangle-free".into()));
    }
    Ok(())
}

fn emit_profile(out: &mut dyn Write, p: &Presentation, profile: &DivergenceProfile, dest: &Option<PathBuf>) -> CliResult {
    let summary = summary_line(profile);
    match dest {
        Some(path) => {
            io::write_profile(BufWriter::new(File::create(path)?), p, profile)?;
            writeln!(out, "{summary}")?;
        }
        None => {
            io::write_profile(&mut *out, p, profile)?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

pub fn summary_line(profile: &DivergenceProfile) -> String {
    let finite = profile.rows.iter().filter(|r| r.value.is_some()).count();
    let capped = profile.rows.iter().filter(|r| r.capped).count();
    let growth = match profile.growth() {
        Ok(g) => format!("loglog_slope={:.3} superlinear={} rows_used={}", g.loglog_slope, g.superlinear, g.rows_used),
        Err(e) => format!("growth unavailable ({e})"),
    };
    format!(
        "summary: rows={} finite={finite} capped={capped} rmax={} {growth}",
        profile.rows.len(),
        profile.r_max
    )
}

fn periodic(p: &Presentation, period: &str, rmax: u32) -> CliResult<PeriodicGeodesic> {
    Ok(PeriodicGeodesic::new(p, p.parse_letters(period)?, 2 * rmax as usize + 2)?)
}

fn divergence(out: &mut dyn Write, cmd: &DivergenceCommand) -> CliResult {
    match cmd {
        DivergenceCommand::Sigma { group, subgroup, n, rho, pair_cap, output } => {
            let p = group.presentation()?;
            let spec = subgroup.spec(&p)?;
            let ball = io::ball(&p, output.rmax, output.budget)?;
            let field = SubgroupField::new(&ball, &spec)?;
            if !field.appears_infinite() {
                eprintln!("warning: the subgroup does not appear infinite inside the ball");
            }
            let config = SigmaConfig {
                n: *n,
                rho: *rho,
                slack: output.slack,
                pair_cap: *pair_cap,
            };
            let profile = sigma_profile(&ball, &field, &config, &output.r.0)?;
            emit_profile(out, &p, &profile, &output.out)
        }
        DivergenceCommand::Geodesic { group, period, output } => {
            let p = group.presentation()?;
            let gamma = periodic(&p, period, output.rmax)?;
            let ball = io::ball(&p, output.rmax, output.budget)?;
            let profile = geodesic_divergence(&ball, &gamma, &output.r.0, output.slack)?;
            emit_profile(out, &p, &profile, &output.out)
        }
        DivergenceCommand::Ldiv { group, period, output } => {
            let p = group.presentation()?;
            let gamma = periodic(&p, period, output.rmax)?;
            let ball = io::ball(&p, output.rmax, output.budget)?;
            let lower = geodesic_lower_divergence(&ball, &gamma, &output.r.0, output.slack)?;
            let rows = lower
                .iter()
                .map(|row| {
                    let centre = row.offset as i64;
                    DivergenceRow {
                        r: row.r,
                        value: row.value,
                        pairs_examined: row.per_offset.len() as u64,
                        capped: false,
                        witness: row.value.map(|_| {
                            (
                                gamma.point(&p, centre + row.r as i64),
                                gamma.point(&p, centre - row.r as i64),
                            )
                        }),
                    }
                })
                .collect();
            let profile = DivergenceProfile {
                n: 1,
                rho: Rho::ONE,
                r_max: ball.radius(),
                rows,
            };
            emit_profile(out, &p, &profile, &output.out)
        }
    }
}

fn distance(out: &mut dyn Write, args: &DistanceArgs) -> CliResult {
    let p = args.group.presentation()?;
    let g = p.parse(&args.word)?;
    let d = if let Some(to) = &args.to {
        p.distance(&g, &p.parse(to)?) as u32
    } else {
        match args.subgroup.spec(&p)? {
            SubgroupSpec::Special(s1) => p.special_distance(g.letters(), s1) as u32,
            spec => {
                let ball = io::ball(&p, args.rmax, args.budget)?;
                SubgroupField::new(&ball, &spec)?.distance_of(&ball, &g)?
            }
        }
    };
    writeln!(out, "{d}")?;
    Ok(())
}

fn reduce(out: &mut dyn Write, args: &ReduceArgs) -> CliResult {
    let p = args.group.presentation()?;
    let u = p.parse(&args.word)?;
    let (conjugator, core) = p.cyclically_reduce(&u);
    let doc = json!({
        "normal_form": p.format(&u),
        "length": u.len(),
        "support": vertex_names(p.graph(), u.support()),
        "conjugator": p.format(&conjugator),
        "core": p.format(&core),
        "max_join_subword": p.max_join_subword_length(&u),
        "loxodromic": p.is_loxodromic(&u).ok(),
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
    Ok(())
}

fn witness(out: &mut dyn Write, cmd: &WitnessCommand) -> CliResult {
    match cmd {
        WitnessCommand::FourCycle { graph, subset: names, n, r } => {
            let g = io::resolve_graph(graph)?;
            let s1 = subset(&g, names)?;
            let rep = classify_special_racg(&g, s1);
            let cyc = match rep.strongly_quasiconvex {
                Verdict::OutsideScope => return Err(CliError::Scope("graph is not triangle-free".into())),
                Verdict::True => {
                    return Err(CliError::Input(
                        "the subset passes the 4-cycle condition; there is no witness path".into(),
                    ))
                }
                Verdict::False => match rep.witnesses.iter().find(|(k, _)| k == "strongly_quasiconvex") {
                    Some((_, Witness::PartialFourCycle(c))) => c.clone(),
                    _ => return Err(CliError::Input("classifier returned no 4-cycle".into())),
                },
            };
            let w = four_cycle_witness_path(&g, s1, &cyc, *n, *r)?;
            let p = Presentation::racg(g.clone());
            let doc = json!({
                "cycle": w.labels.map(|v| g.name(v)),
                "length": w.length(),
                "bound": (4 * n + 2) * r,
                "path": w.path.iter().map(|v| p.format(v)).collect::<Vec<_>>(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
        WitnessCommand::MorseBoundary { graph, max_len } => {
            let g = io::resolve_graph(graph)?;
            if !g.is_triangle_free() {
                return Err(CliError::Scope("graph is not triangle-free".into()));
            }
            let found = morse_boundary_witness(&g, max_len.unwrap_or(g.vertex_count()))?;
            let doc = json!({ "cycle": found.as_ref().map(|c| cycle_json(&g, c)) });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    Ok(())
}

fn recipe(out: &mut dyn Write, name: Recipe, opts: RecipeOptions) -> CliResult {
    let report = recipes::run(name, &opts);
    for line in report.lines() {
        writeln!(out, "{line}")?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{name} failed")))
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::Classify { graph, subset } => classify(out, graph, subset),
        Command::Divergence(cmd) => divergence(out, cmd),
        Command::Distance(args) => distance(out, args),
        Command::Reduce(args) => reduce(out, args),
        Command::Witness(cmd) => witness(out, cmd),
        Command::Recipe { name, seed, rmax, budget } => recipe(
            out,
            *name,
            RecipeOptions {
                seed: *seed,
                rmax: *rmax,
                budget: *budget,
            },
        ),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
