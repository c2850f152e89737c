use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use powergraph::checks::{self, CheckOutcome};
use powergraph::graphs::{directed_power_graph, power_graph, s_set_exact_z, s_set_window, WindowGraph};
use powergraph::heights::{classify_in_neighbour_cardinality, contains, equivalence_witness, InNeighbourCardinality};
use powergraph::io::{emit_dot, emit_tsv, parse_tsv};
use powergraph::orient::{
    decide_preserve_or_reverse, involution_closed_window, involution_phi, prime_swap_windows, recover_orientation,
    verify_digraph_isomorphism, ComponentVerdict, Mode, ReportSummary, VertexMap,
};
use powergraph::{build_window, Element, GroupDescriptor, HeightFunction, ReducedRational, Window, WindowSpec};

#[derive(Parser)]
#[command(name = "powergraph", version, about = "Power graphs of torsion-free abelian groups on finite windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a window and print its (directed) power graph.
    Generate {
        #[command(flatten)]
        window: WindowArgs,
        /// Emit the directed power graph.
        #[arg(long)]
        directed: bool,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Recover arc directions from the undirected graph and compare with the truth.
    Orient {
        #[command(flatten)]
        window: OptWindowArgs,
        /// Read the graph from a TSV file instead of building it.
        #[arg(long, conflicts_with = "group")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        margin: usize,
        /// Core magnitude bound; defaults to a third of the window bound.
        #[arg(long)]
        core: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// List S_{a,b} on a window, and exactly for ℤ.
    Sset {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Also print the exact set (ℤ only).
        #[arg(long)]
        exact: bool,
    },
    /// Height-function queries on files (`<prime>: <value>` lines) or inline `2:inf,3:1`.
    Heights {
        /// Decide h1 ≡ h2 and print the multipliers.
        #[arg(long, num_args = 2, value_names = ["H1", "H2"])]
        equiv: Option<Vec<String>>,
        /// Whether in-neighbourhoods in the unitary subgroup are finite or infinite.
        #[arg(long, value_name = "H")]
        classify: Option<String>,
        /// Membership test: H X.
        #[arg(long, num_args = 2, value_names = ["H", "X"], allow_hyphen_values = true)]
        contains: Option<Vec<String>>,
    },
    /// Check a built-in vertex map on matching windows.
    IsoCheck {
        #[arg(long, value_enum)]
        map: MapKind,
        /// Parameter of phi (x ↦ a²/x).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a: String,
        /// Primes swapped by prime-swap.
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        q: u64,
        #[arg(long = "num-bound", default_value_t = 10)]
        num_bound: u64,
        #[arg(long = "den-bound", default_value_t = 8)]
        den_bound: u64,
        /// Defaults to reverse for phi and preserve for prime-swap.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Run the named invariant suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Run only these checks.
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Check a saved orientation report instead of the suite.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the check names and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct WindowArgs {
    /// Z, Z^n, Q, Q^n, U:<heightfile>, U[2:inf,3:1] or Ck.
    #[arg(long, value_parser = parse_group)]
    group: GroupDescriptor,
    #[command(flatten)]
    bounds: Bounds,
}

#[derive(Args)]
struct OptWindowArgs {
    #[arg(long, value_parser = parse_group)]
    group: Option<GroupDescriptor>,
    #[command(flatten)]
    bounds: Bounds,
}

#[derive(Args)]
struct Bounds {
    /// |x| ≤ N for ℤ, sup-norm ≤ N for ℤⁿ.
    #[arg(long)]
    bound: Option<u64>,
    /// Numerator bound for ℚ, ℚⁿ and unitary windows.
    #[arg(long = "num-bound")]
    num_bound: Option<u64>,
    /// Denominator bound for ℚ, ℚⁿ and unitary windows.
    #[arg(long = "den-bound")]
    den_bound: Option<u64>,
}

#[derive(Args)]
struct OutArg {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    Phi,
    PrimeSwap,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Preserve,
    Reverse,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Preserve => Mode::Preserve,
            ModeArg::Reverse => Mode::Reverse,
        }
    }
}

fn parse_group(s: &str) -> Result<GroupDescriptor, String> {
    if let Some(path) = s.strip_prefix("U:") {
        let h = read_height(path).map_err(|e| format!("{e:#}"))?;
        return Ok(GroupDescriptor::Unitary(h));
    }
    s.parse().map_err(|e: powergraph::Error| e.to_string())
}

/// A height function from a file, or inline `2:inf,3:1` when no such file exists.
fn read_height(arg: &str) -> Result<HeightFunction> {
    if Path::new(arg).is_file() {
        let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        return text.parse().with_context(|| format!("parsing {arg}"));
    }
    let inline = arg.strip_prefix("U[").and_then(|t| t.strip_suffix(']')).unwrap_or(arg);
    HeightFunction::parse_inline(inline).with_context(|| format!("{arg:?} is neither a height file nor inline heights"))
}

impl Bounds {
    fn spec(&self, group: &GroupDescriptor) -> Result<WindowSpec> {
        match group {
            GroupDescriptor::Z | GroupDescriptor::Zn(_) => match self.bound {
                Some(n) => Ok(WindowSpec::Bound(n)),
                None => bail!("--bound is required for {group}"),
            },
            GroupDescriptor::Q | GroupDescriptor::Qn(_) | GroupDescriptor::Unitary(_) => {
                match (self.num_bound, self.den_bound) {
                    (Some(num), Some(den)) => Ok(WindowSpec::Fractions { num, den }),
                    _ => bail!("--num-bound and --den-bound are required for {group}"),
                }
            }
            GroupDescriptor::FiniteCyclic(_) => Ok(WindowSpec::All),
        }
    }
}

impl WindowArgs {
    fn build(&self) -> Result<Window> {
        let spec = self.bounds.spec(&self.group)?;
        Ok(build_window(&self.group, &spec)?)
    }
}

impl OutArg {
    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                std::io::stdout().lock().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

/// Exit status of a command that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Generate { window, directed, format, out } => {
            let w = window.build()?;
            let g = if directed { directed_power_graph(&w) } else { power_graph(&w) };
            let text = match format {
                Format::Tsv => emit_tsv(&g),
                Format::Dot => emit_dot(&g),
            };
            out.write(&text)?;
            Ok(Status::Ok)
        }
        Command::Orient { window, input, margin, core, out } => orient(window, input, margin, core, &out),
        Command::Sset { window, a, b, exact } => sset(&window, &a, &b, exact),
        Command::Heights { equiv, classify, contains } => heights(equiv, classify, contains),
        Command::IsoCheck { map, a, p, q, num_bound, den_bound, mode } => {
            iso_check(map, &a, p, q, num_bound, den_bound, mode)
        }
        Command::Verify { seed, checks, report, list } => verify(seed, &checks, report, list),
    }
}

fn orient(window: OptWindowArgs, input: Option<PathBuf>, margin: usize, core: Option<u64>, out: &OutArg) -> Result<Status> {
    let graph = match (&input, window.group) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_tsv(&text).with_context(|| format!("parsing {}", path.display()))?.to_undirected()
        }
        (None, Some(group)) => {
            let spec = window.bounds.spec(&group)?;
            power_graph(&build_window(&group, &spec)?)
        }
        (None, None) => bail!("orient needs --group or --input"),
    };
    let core = match (core, graph.spec()) {
        (Some(c), _) => c,
        (None, WindowSpec::Bound(n)) => n / 3,
        (None, _) => bail!("--core is required for window {}", graph.spec()),
    };
    let truth = directed_power_graph(&Window::from_elements(graph.group().clone(), graph.vertices().to_vec())?);
    let report = recover_orientation(&graph, margin, core, Some(&truth))?;
    out.write(&report.to_text())?;
    let counts = report.counts();
    let mismatches = report.mismatches.as_deref().unwrap_or_default();
    if let Some((u, v)) = mismatches.first() {
        eprintln!("{} mismatches; first: {{{u}, {v}}}", mismatches.len());
        return Ok(Status::Failed);
    }
    if counts.undetermined > 0 {
        eprintln!("{} undetermined core edges", counts.undetermined);
        return Ok(Status::Failed);
    }
    Ok(Status::Ok)
}

fn sset(window: &WindowArgs, a: &str, b: &str, exact: bool) -> Result<Status> {
    let w = window.build()?;
    let g = w.group();
    let (ea, eb) = (g.parse_element(a)?, g.parse_element(b)?);
    let set = s_set_window(&w, &ea, &eb)?;
    let items: Vec<String> = set.iter().map(ToString::to_string).collect();
    println!("# S({ea},{eb}) group={g} window={}", w.spec());
    println!("window {}: {}", set.len(), items.join(" "));
    if exact {
        let (Element::Int(x), Element::Int(y)) = (&ea, &eb) else {
            bail!("--exact is only available for Z");
        };
        let x = i64::try_from(x).context("a out of range")?;
        let y = i64::try_from(y).context("b out of range")?;
        println!("exact {}", s_set_exact_z(x, y)?);
    }
    Ok(Status::Ok)
}

fn heights(equiv: Option<Vec<String>>, classify: Option<String>, member: Option<Vec<String>>) -> Result<Status> {
    if equiv.is_none() && classify.is_none() && member.is_none() {
        bail!("heights needs --equiv, --classify or --contains");
    }
    if let Some(files) = equiv {
        let h = read_height(&files[0])?;
        let f = read_height(&files[1])?;
        match equivalence_witness(&h, &f) {
            Some(w) => println!("equivalent ({w})"),
            None => println!("not equivalent"),
        }
    }
    if let Some(file) = classify {
        let h = read_height(&file)?;
        let verdict = match classify_in_neighbour_cardinality(&h) {
            InNeighbourCardinality::AllFinite => "finite",
            InNeighbourCardinality::AllInfinite => "infinite",
        };
        println!("in-neighbourhoods {verdict}");
    }
    if let Some(args) = member {
        let h = read_height(&args[0])?;
        let x: ReducedRational = args[1].parse()?;
        println!("{}", if contains(&h, &x) { "member" } else { "not a member" });
    }
    Ok(Status::Ok)
}

fn iso_check(
    map: MapKind,
    a: &str,
    p: u64,
    q: u64,
    num: u64,
    den: u64,
    mode: Option<ModeArg>,
) -> Result<Status> {
    let (d1, d2, vmap, default_mode) = match map {
        MapKind::Phi => {
            let a: ReducedRational = a.parse()?;
            let seed = build_window(&GroupDescriptor::Q, &WindowSpec::Fractions { num, den })?;
            let d = directed_power_graph(&involution_closed_window(&a, &seed)?);
            let m = VertexMap::from_fn(&d, &d, |x| {
                Ok(Element::Rat(involution_phi(&a, x.as_rational().expect("rational vertex"))))
            });
            (d.clone(), d, m, Mode::Reverse)
        }
        MapKind::PrimeSwap => {
            let (src, dst) = prime_swap_windows(p, q, num, den)?;
            let (d1, d2) = (directed_power_graph(&src), directed_power_graph(&dst));
            let m = VertexMap::from_fn(&d1, &d2, |x| {
                let r = x.as_rational().expect("unitary vertex");
                Ok(Element::Rat(powergraph::heights::prime_swap_iso(p, q, r)?))
            });
            (d1, d2, m, Mode::Preserve)
        }
    };
    let mode = mode.map(Mode::from).unwrap_or(default_mode);
    let check = verify_digraph_isomorphism(&vmap, &d1, &d2, mode);
    println!("vertices {}", d1.len());
    println!("pairs {}", check.checked_pairs);
    if check.holds {
        print_components(&vmap, &d1, &d2)?;
        println!("holds");
        return Ok(Status::Ok);
    }
    println!("fails");
    if let Some(c) = check.counterexample {
        eprintln!("counterexample: {c}");
    }
    Ok(Status::Failed)
}

fn print_components(map: &VertexMap, d1: &WindowGraph, d2: &WindowGraph) -> Result<()> {
    let decisions = decide_preserve_or_reverse(map, d1, d2)?;
    let count = |v: ComponentVerdict| decisions.iter().filter(|d| d.verdict == v).count();
    println!(
        "components {} preserves {} reverses {} neither {}",
        decisions.len(),
        count(ComponentVerdict::Preserves),
        count(ComponentVerdict::Reverses),
        count(ComponentVerdict::Neither)
    );
    Ok(())
}

fn verify(seed: u64, names: &[String], report: Option<PathBuf>, list: bool) -> Result<Status> {
    if list {
        for n in checks::names() {
            println!("{n}");
        }
        return Ok(Status::Ok);
    }
    if let Some(path) = report {
        return verify_report(&path);
    }
    let outcomes: Vec<CheckOutcome> = if names.is_empty() {
        checks::run_all(seed)
    } else {
        names
            .iter()
            .map(|n| checks::run_check(n, seed).with_context(|| format!("unknown check {n:?}; try --list")))
            .collect::<Result<_>>()?
    };
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed (seed {seed})", outcomes.len() - failed);
    Ok(if failed == 0 { Status::Ok } else { Status::Failed })
}

fn verify_report(path: &Path) -> Result<Status> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let summary = ReportSummary::parse(&text)?;
    let mut ok = true;
    let mut line = |name: &str, pass: bool, detail: String| {
        ok &= pass;
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    };
    line("report-edges", summary.lines.len() == summary.edges, format!("{} lines, {} declared", summary.lines.len(), summary.edges));
    line("report-undetermined", summary.counts.undetermined == 0, summary.counts.undetermined.to_string());
    line("report-conflicts", summary.conflicts == 0, summary.conflicts.to_string());
    match summary.mismatches {
        Some(m) => line("report-mismatches", m == 0, m.to_string()),
        None => line("report-mismatches", true, "no ground truth".into()),
    }
    Ok(if ok { Status::Ok } else { Status::Failed })
}
