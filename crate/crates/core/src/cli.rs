//! The `thetakit` command-line tool.
//!
//! Every command reads JSON, writes JSON with sorted keys and exits with
//! 0 on success, 1 when a checked property fails, 2 on unreadable input
//! and 3 when the library reports an invariant violation.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::brauer::{heisenberg_cocycle, standard_cocycle, AbelianVarietyModel};
use crate::fingroup::FiniteAbelianGroup;
use crate::heisenberg::{commutator_pairing, standard_rep, uh_basis};
use crate::pairing::{mumford_normal_form, AlternatingPairing};
use crate::selfdual::{build_block, central_product, sp_orbits, BlockKind, MAX_ORBIT_RANK};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "thetakit", version, about = "Exact computations with finite theta groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print progress to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an alternating pairing.
    ClassifyPairing {
        /// Pairing JSON, `-` for stdin.
        #[arg(long)]
        input: PathBuf,
    },
    /// Standard representation of a Heisenberg group.
    Heisenberg {
        /// Group JSON `{"factors": [...]}`; without it every `K` with `|K| <= max-k` is summarized.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        max_k: u64,
        /// Include every matrix of the representation.
        #[arg(long)]
        dump: bool,
    },
    /// Orbits of Sp(H) on self-dual structures, plus sign reports.
    SelfdualOrbits {
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
    /// Brauer group of a model, or the report of one class.
    Brauer {
        /// Model JSON `{"g", "n", "ns"}`; defaults to the principal model for `--g`, `--n`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Pairing JSON on `X_n`.
        #[arg(long)]
        class: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        g: usize,
        #[arg(long, default_value_t = 2)]
        n: u64,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 12)]
        max_k: u64,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, default_value_t = 2)]
        g: usize,
        #[arg(long, default_value_t = 2)]
        n: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Heisenberg,
    Orbits,
    Brauer,
    Cocycle,
    All,
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Invariant(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invariant(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "input error: {m}"),
            CliError::Invariant(e) => write!(f, "{e}"),
        }
    }
}

/// A finished command: its report and whether every checked property held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

#[derive(Deserialize)]
struct RawPairing {
    group: FiniteAbelianGroup,
    matrix: Vec<Vec<i64>>,
}

/// Structural problems exit 2, rejected matrices exit 3.
fn load_pairing(path: &Path) -> Result<AlternatingPairing, CliError> {
    let raw: RawPairing = parse_json(path)?;
    Ok(AlternatingPairing::new(&raw.group, &raw.matrix)?)
}

#[derive(Deserialize)]
struct RawModel {
    g: usize,
    n: u64,
    #[serde(default)]
    ns: Vec<Vec<Vec<i64>>>,
}

fn load_model(path: &Path) -> Result<AbelianVarietyModel, CliError> {
    let raw: RawModel = parse_json(path)?;
    Ok(AbelianVarietyModel::new(raw.g, raw.n, raw.ns)?)
}

fn classify_pairing_cmd(e: &AlternatingPairing) -> Result<Outcome, CliError> {
    let nf = mumford_normal_form(e)?;
    if nf.reconstruct()? != *e {
        return Err(Error::InternalInvariantViolation("normal form does not reconstruct the pairing".into()).into());
    }
    let radical = nf.radical();
    let report = json!({
        "group": to_value(e.group()),
        "blocks": to_value(nf.blocks()),
        "index": nf.homogeneous_index(),
        "basis": nf.basis().iter().map(|b| b.coords().to_vec()).collect::<Vec<_>>(),
        "radical": {
            "order": radical.order(),
            "factors": radical.structure().factors(),
            "basis": radical.basis().iter().map(|b| b.coords().to_vec()).collect::<Vec<_>>(),
        },
        "nondegenerate": radical.is_trivial(),
    });
    Ok(Outcome { report, passed: true })
}

fn heisenberg_report(k: &FiniteAbelianGroup, dump: bool) -> Result<(Value, bool), CliError> {
    let rep = standard_rep(k);
    let homomorphism = rep.check_homomorphism()?;
    let irreducible = rep.verify_irreducible();
    let extracted = rep.extracted_pairing()?;
    let pairing_matches = extracted == commutator_pairing(k);
    let mut report = json!({
        "k": k.factors(),
        "dimension": rep.dimension(),
        "group_order": rep.group().order(),
        "homomorphism": homomorphism,
        "irreducible": irreducible,
        "pairing_matches": pairing_matches,
        "commutator_pairing": to_value(&extracted),
    });
    if dump {
        report["representation"] = to_value(&rep.dump());
    }
    Ok((report, homomorphism && irreducible && pairing_matches))
}

fn heisenberg_cmd(input: Option<&Path>, max_k: u64, dump: bool) -> Result<Outcome, CliError> {
    if let Some(path) = input {
        let k: FiniteAbelianGroup = parse_json(path)?;
        let (report, passed) = heisenberg_report(&k, dump)?;
        return Ok(Outcome { report, passed });
    }
    let mut reports = Vec::new();
    let mut passed = true;
    for k in FiniteAbelianGroup::all_up_to_order(max_k) {
        let (r, ok) = heisenberg_report(&k, dump)?;
        passed &= ok;
        reports.push(r);
    }
    Ok(Outcome { report: json!({ "max_k": max_k, "groups": reports }), passed })
}

fn block_name(kind: BlockKind) -> &'static str {
    match kind {
        BlockKind::Dihedral => "D",
        BlockKind::Quaternion => "Q",
    }
}

fn selfdual_cmd(max_rank: usize) -> Result<Outcome, CliError> {
    let orbits = (1..=max_rank).map(|r| sp_orbits(r).map(|o| to_value(&o))).collect::<crate::Result<Vec<_>>>()?;
    let mut signs = Vec::new();
    let mut passed = true;
    // D^a Q^b with a + b <= min(max_rank, 3), D factors first
    for rank in 1..=max_rank.min(3) {
        for quaternions in 0..=rank {
            let kinds: Vec<BlockKind> = (0..rank)
                .map(|i| if i < rank - quaternions { BlockKind::Dihedral } else { BlockKind::Quaternion })
                .collect();
            let mut group = build_block(kinds[0]);
            for &kind in &kinds[1..] {
                group = central_product(&group, &build_block(kind));
            }
            let report = group.sign_report()?;
            let expected: i8 = if quaternions % 2 == 0 { 1 } else { -1 };
            passed &= report.sign == expected;
            let mut v = to_value(&report);
            v["blocks"] = json!(kinds.iter().map(|&k| block_name(k)).collect::<Vec<_>>());
            signs.push(v);
        }
    }
    Ok(Outcome { report: json!({ "orbits": orbits, "signs": signs }), passed })
}

fn brauer_cmd(model: &AbelianVarietyModel, class: Option<&AlternatingPairing>) -> Result<Outcome, CliError> {
    let br = model.brauer_group()?;
    let group_desc = if br.group().is_trivial() { json!("trivial") } else { json!(br.group().factors()) };
    let mut report = to_value(&*br);
    report["group"] = group_desc;
    if let Some(e) = class {
        let c = br.class(e)?;
        report["class"] = to_value(&c.report()?);
    }
    Ok(Outcome { report, passed: true })
}

/// Accumulates check counts and the first failing case.
struct Tally {
    checks: u64,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self, suite: &str, details: Value) -> Outcome {
        let passed = self.failure.is_none();
        Outcome {
            report: json!({
                "suite": suite,
                "passed": passed,
                "checks": self.checks,
                "first_counterexample": self.failure,
                "details": details,
            }),
            passed,
        }
    }
}

fn verify_heisenberg(max_k: u64) -> Result<Outcome, CliError> {
    let mut t = Tally::new();
    let groups = FiniteAbelianGroup::all_up_to_order(max_k);
    for k in &groups {
        let rep = standard_rep(k);
        t.check(rep.check_homomorphism()?, || format!("K = {k}: not a homomorphism"));
        t.check(rep.verify_irreducible(), || format!("K = {k}: matrices do not span"));
        t.check(rep.extracted_pairing()? == commutator_pairing(k), || format!("K = {k}: commutator pairing differs"));
        if k.order() <= 6 {
            let u = uh_basis(k);
            t.check(u.is_basis(), || format!("K = {k}: u_h family is not a basis"));
            t.check(u.check_products()?, || format!("K = {k}: u_h structure constants differ"));
            t.check(u.weights_regular()?, || format!("K = {k}: conjugation weights are not regular"));
        }
    }
    Ok(t.finish("heisenberg", json!({ "max_k": max_k, "groups": groups.len() })))
}

fn verify_orbits(max_rank: usize) -> Result<Outcome, CliError> {
    if max_rank > MAX_ORBIT_RANK {
        return Err(Error::RankTooLarge { rank: max_rank, max: MAX_ORBIT_RANK }.into());
    }
    let mut t = Tally::new();
    let mut sizes = Vec::new();
    for r in 1..=max_rank {
        let report = sp_orbits(r)?;
        let got: Vec<usize> = report.orbits.iter().map(|o| o.size).collect();
        let big = 1usize << (2 * r - 1);
        let half = 1usize << (r - 1);
        t.check(got == vec![big + half, big - half], || format!("r = {r}: orbit sizes {got:?}"));
        sizes.push(got);
    }
    Ok(t.finish("orbits", json!({ "max_rank": max_rank, "orbit_sizes": sizes })))
}

fn verify_brauer(g: usize, n: u64, seed: u64) -> Result<Outcome, CliError> {
    let model = AbelianVarietyModel::principal(g, n)?;
    let br = model.brauer_group()?;
    let mut t = Tally::new();
    let total = model.pairing_group().order();
    t.check(br.order() * br.image_order() == total, || {
        format!("|Br| * |phi(NS)| = {} * {} != {total}", br.order(), br.image_order())
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = model.torsion_group();
    for _ in 0..20 {
        let e1 = AlternatingPairing::random(&x, &mut rng);
        let e2 = AlternatingPairing::random(&x, &mut rng);
        let (c1, c2) = (br.class(&e1)?, br.class(&e2)?);
        t.check(c1.mul(&c2)? == br.class(&e1.mul(&e2)?)?, || format!("class product fails for {e1:?}, {e2:?}"));
        t.check(c1.inverse() == br.class(&e1.inverse())?, || format!("class inverse fails for {e1:?}"));
        t.check(c1.pow(n as i64).is_trivial(), || format!("class of {e1:?} is not killed by n"));
        t.check(c1.is_projectivization()?.holds() == c1.is_trivial(), || {
            format!("projectivization verdict disagrees with the class of {e1:?}")
        });
    }
    let details = json!({
        "g": g,
        "n": n,
        "order": br.order(),
        "invariant_factors": br.group().factors(),
        "phi_image_order": br.image_order(),
    });
    Ok(t.finish("brauer", details))
}

fn verify_cocycle(seed: u64) -> Result<Outcome, CliError> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut algebras = 0u64;
    for h in FiniteAbelianGroup::all_up_to_order(16) {
        for _ in 0..4 {
            let e = AlternatingPairing::random(&h, &mut rng);
            let alg = match standard_cocycle(&e) {
                Ok(a) => a,
                Err(Error::NoIsotropicSplitting(_)) => {
                    t.check(!e.is_nondegenerate(), || format!("no splitting found for non-degenerate {e:?}"));
                    continue;
                }
                Err(err) => return Err(err.into()),
            };
            algebras += 1;
            t.check(alg.is_normalized(), || format!("{e:?}: cocycle is not normalized"));
            t.check(alg.cocycle_failure().is_none(), || format!("{e:?}: cocycle identity fails"));
            t.check(alg.commutator_matches(&e)?, || format!("{e:?}: commutator differs from e"));
            t.check(alg.associativity_failure()?.is_none(), || format!("{e:?}: algebra is not associative"));
            t.check(alg.center_dimension()? == 1, || format!("{e:?}: center is not one-dimensional"));
        }
    }
    for k in FiniteAbelianGroup::all_up_to_order(4) {
        let alg = heisenberg_cocycle(&k);
        algebras += 1;
        t.check(alg.cocycle_failure().is_none(), || format!("K = {k}: cocycle identity fails"));
        t.check(alg.commutator_matches(&commutator_pairing(&k))?, || format!("K = {k}: commutator differs"));
        t.check(alg.center_dimension()? == 1, || format!("K = {k}: center is not one-dimensional"));
    }
    Ok(t.finish("cocycle", json!({ "algebras": algebras })))
}

fn verify_cmd(suite: Suite, max_k: u64, max_rank: usize, g: usize, n: u64, seed: u64) -> Result<Outcome, CliError> {
    match suite {
        Suite::Heisenberg => verify_heisenberg(max_k),
        Suite::Orbits => verify_orbits(max_rank),
        Suite::Brauer => verify_brauer(g, n, seed),
        Suite::Cocycle => verify_cocycle(seed),
        Suite::All => {
            let runs = [
                verify_heisenberg(max_k)?,
                verify_orbits(max_rank)?,
                verify_brauer(g, n, seed)?,
                verify_cocycle(seed)?,
            ];
            let passed = runs.iter().all(|o| o.passed);
            let suites: Vec<Value> = runs.into_iter().map(|o| o.report).collect();
            Ok(Outcome { report: json!({ "passed": passed, "suites": suites }), passed })
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::ClassifyPairing { input } => classify_pairing_cmd(&load_pairing(input)?),
        Command::Heisenberg { input, max_k, dump } => heisenberg_cmd(input.as_deref(), *max_k, *dump),
        Command::SelfdualOrbits { max_rank } => selfdual_cmd(*max_rank),
        Command::Brauer { input, class, g, n } => {
            let model = match input {
                Some(p) => load_model(p)?,
                None => AbelianVarietyModel::principal(*g, *n)?,
            };
            let class = class.as_deref().map(load_pairing).transpose()?;
            brauer_cmd(&model, class.as_ref())
        }
        Command::Verify { suite, max_k, max_rank, g, n } => verify_cmd(*suite, *max_k, *max_rank, *g, *n, cli.seed),
    }
}

/// Parse `args` (program name first) and run; returns the report.
pub fn execute<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Parse(e.to_string()))?;
    dispatch(&cli)
}

fn emit(report: &Value, output: Option<&Path>) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("JSON values serialize");
    text.push('\n');
    match output {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if cli.verbose > 0 {
        eprintln!("thetakit: {:?}", cli.command);
    }
    match dispatch(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.report, cli.output.as_deref()) {
                eprintln!("thetakit: cannot write report: {e}");
                return EXIT_PARSE;
            }
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_PROPERTY
            }
        }
        Err(e) => {
            eprintln!("thetakit: {e}");
            e.exit_code()
        }
    }
}
