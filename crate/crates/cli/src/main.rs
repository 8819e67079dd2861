//! Batch front end for the reflection toolkit: ordinal arithmetic, index
//! vector algebra and tower encoding, hereditarily finite stages, reflection
//! membership tables, and derivation checking with embedding constructors
//! and cut elimination.  Parse and usage problems exit with 2, semantic
//! failures such as checker violations with 1.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mahlo_core::{
    check, cumulative_stage, cut_elim_full, cut_elim_once, embed_foundation, embed_mh_axiom,
    embed_pi2, embed_tautology, enumerate_transitive, iterate, m_op, mh, negate, re_rank, star,
    tower, vec_lt, weaken, Budget, CalcConfig, ClassOracle, ClassRef, Derivation, Formula,
    FormulaPool, HFSet, IndexMatrix, MhConfig, OrdTerm, OrdVec, RuleTag, Sequent, StrictOrder,
    Universe, Verdict,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "mahlo", version, about = "Desk-scale reflection calculus toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Seed for any randomized choice, keeping runs reproducible.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Ordinal budget attached to universes built by this invocation.
    #[arg(long, global = true, value_enum, default_value_t = BudgetArg::All)]
    budget: BudgetArg,
    /// Cut rank assembled by the proof pipeline.
    #[arg(long, global = true, default_value_t = 2)]
    max_rank: u32,
    /// Write the main artifact here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BudgetArg {
    /// Admit every ordinal bound.
    All,
    /// Refuse bounds whose notation exceeds 48 nodes.
    Strict,
}

impl BudgetArg {
    fn to_budget(self) -> Budget {
        match self {
            BudgetArg::All => Budget::All,
            BudgetArg::Strict => Budget::MaxSize(48),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Ordinal notation arithmetic.
    Ord {
        #[command(subcommand)]
        op: OrdOp,
    },
    /// Index vector algebra.
    #[command(name = "vec")]
    Vector {
        #[command(subcommand)]
        op: VecOp,
    },
    /// Tower encoding of index vectors.
    Tower {
        #[command(subcommand)]
        op: TowerOp,
    },
    /// Hereditarily finite sets and stage universes.
    Hf {
        #[command(subcommand)]
        op: HfOp,
    },
    /// Reflection class membership tables.
    Refl {
        #[command(subcommand)]
        op: ReflOp,
    },
    /// Derivation checking, embedding and cut elimination.
    Proof {
        #[command(subcommand)]
        op: ProofOp,
    },
}

#[derive(Subcommand)]
enum OrdOp {
    /// Compare two terms; prints <, = or >.
    Cmp { a: String, b: String },
    /// Natural sum in normal form.
    Add { a: String, b: String },
    /// Product in normal form.
    Mul { a: String, b: String },
    /// Base-omega exponential.
    Exp { a: String },
    /// n-fold base-omega exponential.
    Tower { n: u32, a: String },
}

#[derive(Subcommand)]
enum VecOp {
    /// Strict domination in every component; prints true or false.
    Lt { a: String, b: String },
    /// Staircase matrix of two equal-length vectors.
    Bullet { beta: String, alpha: String },
    /// Prepend a head entry to a vector.
    Star { head: String, v: String },
}

#[derive(Subcommand)]
enum TowerOp {
    /// Flatten a vector into a single notation.
    Encode { v: String },
}

#[derive(Subcommand)]
enum HfOp {
    /// Von Neumann rank of a set literal.
    Rank { s: String },
    /// Transitive closure of a set literal.
    Tc { s: String },
    /// All transitive rank-closed carriers inside stage n, one per line.
    Enum { n: u32 },
}

#[derive(Args)]
struct FamilyPool {
    /// Family file: one carrier literal per line.
    #[arg(long)]
    family: PathBuf,
    /// Pool file: a `level <k>` line, then one formula per line.
    #[arg(long)]
    pool: PathBuf,
    /// Operator level.
    #[arg(long, default_value_t = 0)]
    level: u32,
}

#[derive(Subcommand)]
enum ReflOp {
    /// One reflection step; prints which family members survive.
    M {
        #[command(flatten)]
        base: FamilyPool,
        /// File of carriers forming the class argument; defaults to the family.
        #[arg(long)]
        class: Option<PathBuf>,
    },
    /// Iterated step along a strict order, below a point.
    Iter {
        #[command(flatten)]
        base: FamilyPool,
        /// Order file: one `a < b` pair of set literals per line.
        #[arg(long)]
        order: PathBuf,
        /// The point below which the iteration runs.
        #[arg(long)]
        at: String,
    },
    /// Ramified class membership at a level and index vector.
    Mh {
        #[command(flatten)]
        base: FamilyPool,
        /// Number of index slots at level zero.
        #[arg(long)]
        scale: u32,
        /// Index vector of length scale minus level.
        #[arg(long)]
        index: String,
        /// Ordinal sub-universe, comma separated terms.
        #[arg(long, default_value = "0,1,2")]
        ords: String,
        /// File of carriers for the top class; defaults to the family.
        #[arg(long)]
        top: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigOpt {
    /// Calculus configuration JSON; defaults to the built-in demo setup.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rounds {
    /// One round: the rank drops by one.
    One,
    /// Eliminate down to rank zero.
    Full,
}

#[derive(Subcommand)]
enum ProofOp {
    /// Check a derivation file against every side condition.
    Check {
        file: PathBuf,
        #[command(flatten)]
        cfg: ConfigOpt,
    },
    /// Eliminate cuts from a derivation file.
    Cutelim {
        file: PathBuf,
        #[command(flatten)]
        cfg: ConfigOpt,
        #[arg(long, value_enum, default_value_t = Rounds::Full)]
        rounds: Rounds,
    },
    /// Emit an embedding derivation as JSON.
    Embed {
        #[command(subcommand)]
        kind: EmbedKind,
    },
    /// Embed axioms, assemble cuts, eliminate them and compare the bound.
    Pipeline {
        #[command(flatten)]
        cfg: ConfigOpt,
    },
}

#[derive(Subcommand)]
enum EmbedKind {
    /// A true sentence; the bound is twice its depth.
    Tautology {
        delta: String,
        #[command(flatten)]
        cfg: ConfigOpt,
    },
    /// Foundation instance for a set and a selector body.
    Foundation {
        a: String,
        var: String,
        body: String,
        #[command(flatten)]
        cfg: ConfigOpt,
    },
    /// A forall-forall-exists sentence witnessed over the root.
    Pi2 {
        x: String,
        y: String,
        z: String,
        theta: String,
        #[command(flatten)]
        cfg: ConfigOpt,
    },
    /// The reflection axiom at an index vector.
    Mh {
        beta: String,
        delta: String,
        #[command(flatten)]
        cfg: ConfigOpt,
    },
}

/// Usage failures exit 2, semantic failures exit 1.
enum Failure {
    Usage(String),
    Domain(String),
}

use Failure::{Domain, Usage};

fn parse<T: FromStr>(what: &str, s: &str) -> Result<T, Failure>
where
    T::Err: Display,
{
    s.parse().map_err(|e| Usage(format!("{what} '{s}': {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, artifact: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, artifact).map_err(|e| Usage(format!("{}: {e}", path.display())))
        }
        None => {
            println!("{artifact}");
            Ok(())
        }
    }
}

fn read_family(path: &Path, budget: &Budget) -> Result<BTreeSet<Universe>, Failure> {
    let mut out = BTreeSet::new();
    for line in read(path)?.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let carrier: HFSet = parse("carrier", line)?;
        out.insert(
            Universe::new(carrier, budget.clone()).map_err(|e| Usage(e.to_string()))?,
        );
    }
    if out.is_empty() {
        return Err(Usage(format!("{}: no carriers", path.display())));
    }
    Ok(out)
}

fn read_pool(path: &Path) -> Result<FormulaPool, Failure> {
    let text = read(path)?;
    let mut level: Option<u32> = None;
    let mut templates = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match level {
            None => {
                let rest = line.strip_prefix("level").ok_or_else(|| {
                    Usage(format!("{}: expected a `level <k>` line first", path.display()))
                })?;
                level = Some(parse("pool level", rest.trim())?);
            }
            Some(_) => templates.push(parse("formula", line)?),
        }
    }
    let level = level.ok_or_else(|| Usage(format!("{}: empty pool file", path.display())))?;
    FormulaPool::new(level, templates).map_err(|e| Usage(e.to_string()))
}

fn read_order(path: &Path) -> Result<StrictOrder, Failure> {
    let mut pairs = BTreeSet::new();
    for line in read(path)?.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (a, b) = line
            .split_once('<')
            .ok_or_else(|| Usage(format!("order line '{line}' is not `a < b`")))?;
        pairs.insert((parse("set literal", a.trim())?, parse("set literal", b.trim())?));
    }
    StrictOrder::new(pairs).map_err(|e| Usage(e.to_string()))
}

fn membership_table(family: &BTreeSet<Universe>, kept: &BTreeSet<Universe>) -> String {
    let mut s = String::new();
    for u in family {
        s.push_str(&format!(
            "{}\t{}\n",
            u.carrier(),
            if kept.contains(u) { "in" } else { "out" }
        ));
    }
    s.pop();
    s
}

/// The built-in demo configuration: scale 2 at level 0 over the stage-4
/// carrier, with a two-entry staircase oracle.
fn default_config(budget: &Budget) -> CalcConfig {
    let stage = |n: u32| {
        Universe::new(cumulative_stage(n).expect("small stage"), Budget::All).expect("stage")
    };
    let mut oracle = ClassOracle::new();
    oracle.insert(
        ClassRef::Mh { k: 1, index: "[0]".parse().expect("index") },
        [stage(2)].into(),
    );
    oracle.insert(
        ClassRef::Mh { k: 1, index: "[1]".parse().expect("index") },
        [stage(2), stage(3)].into(),
    );
    let root = Universe::new(cumulative_stage(4).expect("small stage"), budget.clone())
        .expect("stage");
    CalcConfig::new(2, 0, "[2]".parse().expect("vector"), oracle, root)
        .expect("demo configuration")
}

fn load_config(opt: &ConfigOpt, budget: &Budget) -> Result<CalcConfig, Failure> {
    match &opt.config {
        Some(path) => {
            CalcConfig::from_json_str(&read(path)?).map_err(|e| Usage(e.to_string()))
        }
        None => Ok(default_config(budget)),
    }
}

fn load_derivation(path: &Path) -> Result<Derivation, Failure> {
    Derivation::from_json_str(&read(path)?).map_err(|e| Usage(e.to_string()))
}

fn checked(cfg: &CalcConfig, d: &Derivation, what: &str) -> Result<(), Failure> {
    match check(cfg, d) {
        Verdict::Ok => Ok(()),
        Verdict::Violation(v) => Err(Domain(format!(
            "{what}: violation at {:?}: {:?}: {}",
            v.path, v.kind, v.detail
        ))),
    }
}

/// Join two same-rank derivations with a cut, weakening both premises into
/// the exact required shapes.
fn join_cut(d1: &Derivation, d2: &Derivation, c: &Formula) -> Result<Derivation, Failure> {
    let merged = d1.sequent.union(&d2.sequent);
    let left = weaken(d1, &d1.ordinal, &merged.with(negate(c)))
        .map_err(|e| Domain(e.to_string()))?;
    let right =
        weaken(d2, &d2.ordinal, &merged.with(c.clone())).map_err(|e| Domain(e.to_string()))?;
    let top = if left.ordinal.cmp(&right.ordinal) == Ordering::Less {
        right.ordinal.clone()
    } else {
        left.ordinal.clone()
    };
    Ok(Derivation {
        universe: d1.universe.clone(),
        ordinal: top.add_nat(1u64),
        rank: d1.rank,
        sequent: merged,
        rule: RuleTag::Cut { formula: c.clone() },
        premises: vec![left, right],
    })
}

fn run_ord(op: OrdOp, out: &Option<PathBuf>) -> Result<(), Failure> {
    let line = match op {
        OrdOp::Cmp { a, b } => {
            let a: OrdTerm = parse("ordinal term", &a)?;
            let b: OrdTerm = parse("ordinal term", &b)?;
            match a.cmp(&b) {
                Ordering::Less => "<".to_string(),
                Ordering::Equal => "=".to_string(),
                Ordering::Greater => ">".to_string(),
            }
        }
        OrdOp::Add { a, b } => {
            let a: OrdTerm = parse("ordinal term", &a)?;
            let b: OrdTerm = parse("ordinal term", &b)?;
            a.add(&b).to_string()
        }
        OrdOp::Mul { a, b } => {
            let a: OrdTerm = parse("ordinal term", &a)?;
            let b: OrdTerm = parse("ordinal term", &b)?;
            a.mul(&b).to_string()
        }
        OrdOp::Exp { a } => parse::<OrdTerm>("ordinal term", &a)?.omega_pow().to_string(),
        OrdOp::Tower { n, a } => {
            OrdTerm::omega_tower(n, &parse("ordinal term", &a)?).to_string()
        }
    };
    emit(out, &line)
}

fn run_vec(op: VecOp, out: &Option<PathBuf>) -> Result<(), Failure> {
    let line = match op {
        VecOp::Lt { a, b } => {
            let a: OrdVec = parse("vector", &a)?;
            let b: OrdVec = parse("vector", &b)?;
            vec_lt(&a, &b).map_err(|e| Usage(e.to_string()))?.to_string()
        }
        VecOp::Bullet { beta, alpha } => {
            let beta: OrdVec = parse("vector", &beta)?;
            let alpha: OrdVec = parse("vector", &alpha)?;
            let m: IndexMatrix = bullet_checked(&beta, &alpha)?;
            m.to_string()
        }
        VecOp::Star { head, v } => {
            let head: OrdTerm = parse("ordinal term", &head)?;
            let v: OrdVec = parse("vector", &v)?;
            star(&head, &v).map_err(|e| Usage(e.to_string()))?.to_string()
        }
    };
    emit(out, &line)
}

fn bullet_checked(beta: &OrdVec, alpha: &OrdVec) -> Result<IndexMatrix, Failure> {
    mahlo_core::bullet(beta, alpha).map_err(|e| Usage(e.to_string()))
}

fn run_hf(op: HfOp, out: &Option<PathBuf>) -> Result<(), Failure> {
    let text = match op {
        HfOp::Rank { s } => parse::<HFSet>("set literal", &s)?.rank().to_string(),
        HfOp::Tc { s } => parse::<HFSet>("set literal", &s)?.transitive_closure().to_string(),
        HfOp::Enum { n } => {
            let us = enumerate_transitive(n).map_err(|e| Usage(e.to_string()))?;
            us.iter().map(|u| u.carrier().to_string()).collect::<Vec<_>>().join("\n")
        }
    };
    emit(out, &text)
}

fn run_refl(op: ReflOp, budget: &Budget, out: &Option<PathBuf>) -> Result<(), Failure> {
    let oracle = ClassOracle::new();
    let table = match op {
        ReflOp::M { base, class } => {
            let family = read_family(&base.family, budget)?;
            let pool = read_pool(&base.pool)?;
            let x = match class {
                Some(path) => read_family(&path, budget)?,
                None => family.clone(),
            };
            let kept = m_op(base.level, &x, &pool, &family, &oracle)
                .map_err(|e| Domain(e.to_string()))?;
            membership_table(&family, &kept)
        }
        ReflOp::Iter { base, order, at } => {
            let family = read_family(&base.family, budget)?;
            let pool = read_pool(&base.pool)?;
            let prec = read_order(&order)?;
            let at: HFSet = parse("set literal", &at)?;
            let kept = iterate(base.level, &prec, &at, &pool, &family, &oracle)
                .map_err(|e| Domain(e.to_string()))?;
            membership_table(&family, &kept)
        }
        ReflOp::Mh { base, scale, index, ords, top } => {
            let family = read_family(&base.family, budget)?;
            let pool = read_pool(&base.pool)?;
            let index: OrdVec = parse("vector", &index)?;
            let mut ord_universe = BTreeSet::new();
            for part in ords.split(',') {
                ord_universe.insert(parse::<OrdTerm>("ordinal term", part.trim())?);
            }
            let m_top = match top {
                Some(path) => read_family(&path, budget)?,
                None => family.clone(),
            };
            let cfg = MhConfig { n: scale, ord_universe, m_top };
            let kept = mh(base.level, &index, &cfg, &pool, &family, &oracle)
                .map_err(|e| Domain(e.to_string()))?;
            membership_table(&family, &kept)
        }
    };
    emit(out, &table)
}

fn run_proof(
    op: ProofOp,
    budget: &Budget,
    seed: u64,
    max_rank: u32,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    match op {
        ProofOp::Check { file, cfg } => {
            let cfg = load_config(&cfg, budget)?;
            let d = load_derivation(&file)?;
            checked(&cfg, &d, &file.display().to_string())?;
            println!("ok: rank {}, bound {}, {} nodes", d.rank, d.ordinal, d.node_count());
            Ok(())
        }
        ProofOp::Cutelim { file, cfg, rounds } => {
            let cfg = load_config(&cfg, budget)?;
            let d = load_derivation(&file)?;
            checked(&cfg, &d, "input")?;
            let r = match rounds {
                Rounds::One => cut_elim_once(&cfg, &d),
                Rounds::Full => cut_elim_full(&cfg, &d),
            }
            .map_err(|e| Domain(e.to_string()))?;
            checked(&cfg, &r, "output")?;
            eprintln!(
                "rank {} -> {}, bound {} -> {}, nodes {} -> {}",
                d.rank,
                r.rank,
                d.ordinal,
                r.ordinal,
                d.node_count(),
                r.node_count()
            );
            emit(out, &r.to_json_string())
        }
        ProofOp::Embed { kind } => {
            let (cfg, d) = match kind {
                EmbedKind::Tautology { delta, cfg } => {
                    let cfg = load_config(&cfg, budget)?;
                    let delta: Formula = parse("formula", &delta)?;
                    let d = embed_tautology(&cfg, &delta).map_err(|e| Domain(e.to_string()))?;
                    (cfg, d)
                }
                EmbedKind::Foundation { a, var, body, cfg } => {
                    let cfg = load_config(&cfg, budget)?;
                    let a: HFSet = parse("set literal", &a)?;
                    let body: Formula = parse("formula", &body)?;
                    let d = embed_foundation(&cfg, &a, &var, &body)
                        .map_err(|e| Domain(e.to_string()))?;
                    (cfg, d)
                }
                EmbedKind::Pi2 { x, y, z, theta, cfg } => {
                    let cfg = load_config(&cfg, budget)?;
                    let theta: Formula = parse("formula", &theta)?;
                    let d = embed_pi2(&cfg, (&x, &y, &z), &theta)
                        .map_err(|e| Domain(e.to_string()))?;
                    (cfg, d)
                }
                EmbedKind::Mh { beta, delta, cfg } => {
                    let cfg = load_config(&cfg, budget)?;
                    let beta: OrdVec = parse("vector", &beta)?;
                    let delta: Formula = parse("formula", &delta)?;
                    let d = embed_mh_axiom(&cfg, &beta, &delta)
                        .map_err(|e| Domain(e.to_string()))?;
                    (cfg, d)
                }
            };
            checked(&cfg, &d, "embedding")?;
            emit(out, &d.to_json_string())
        }
        ProofOp::Pipeline { cfg } => {
            let cfg = load_config(&cfg, budget)?;
            let rank = max_rank.clamp(1, 3);
            let mut parts = vec![
                embed_tautology(&cfg, &parse("formula", "(exists x (in {} x))")?),
                embed_tautology(&cfg, &parse("formula", "(in {} #1)")?),
                embed_foundation(
                    &cfg,
                    &parse("set literal", "#2")?,
                    "x",
                    &parse("formula", "(notin x x)")?,
                ),
                embed_pi2(
                    &cfg,
                    ("x", "y", "z"),
                    &parse(
                        "formula",
                        "(and (forall-in w x (in w z)) (forall-in w y (in w z)))",
                    )?,
                ),
                embed_mh_axiom(
                    &cfg,
                    &parse("vector", "[1]")?,
                    &parse("formula", "(exists x (in {} x))")?,
                ),
            ]
            .into_iter()
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Domain(e.to_string()))?;
            parts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

            // cut formulas must stay clear of everything the embedded parts
            // introduce: no atom with {} on the left, no negated axiom body
            let cuts: Vec<Formula> = ["(in #1 #2)", "(in #1 #3)", "(exists x (in #1 x))"]
                .iter()
                .map(|s| parse("formula", s))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .filter(|c| mahlo_core::dp(c) < rank)
                .collect();

            let p = parts.len() as u64;
            let mut it = parts.into_iter();
            let first = it.next().expect("nonempty");
            let mut d = re_rank(&first, rank).map_err(|e| Domain(e.to_string()))?;
            for (i, part) in it.enumerate() {
                let part = re_rank(&part, rank).map_err(|e| Domain(e.to_string()))?;
                d = join_cut(&d, &part, &cuts[i % cuts.len()])?;
            }
            let scale = OrdTerm::kappa().mul_nat(p);
            d = weaken(&d, &scale, &Sequent::new()).map_err(|e| Domain(e.to_string()))?;
            checked(&cfg, &d, "assembled derivation")?;
            println!(
                "assembled: rank {}, bound {}, {} nodes",
                d.rank,
                d.ordinal,
                d.node_count()
            );

            let full = cut_elim_full(&cfg, &d).map_err(|e| Domain(e.to_string()))?;
            checked(&cfg, &full, "eliminated derivation")?;
            println!(
                "eliminated: rank {}, bound {}, {} nodes",
                full.rank,
                full.ordinal,
                full.node_count()
            );

            let limit = OrdTerm::omega_tower(rank + 1, &OrdTerm::kappa().add_nat(1u64));
            let below = full.ordinal.cmp(&limit) == Ordering::Less;
            println!("limit: {limit}");
            println!("below limit: {}", if below { "yes" } else { "no" });
            if let Some(path) = out {
                fs::write(path, full.to_json_string())
                    .map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            }
            if below {
                Ok(())
            } else {
                Err(Domain("the eliminated bound is not below the limit".into()))
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let budget = cli.budget.to_budget();
    match cli.cmd {
        Cmd::Ord { op } => run_ord(op, &cli.out),
        Cmd::Vector { op } => run_vec(op, &cli.out),
        Cmd::Tower { op } => match op {
            TowerOp::Encode { v } => {
                let v: OrdVec = parse("vector", &v)?;
                emit(&cli.out, &tower(&v).to_string())
            }
        },
        Cmd::Hf { op } => run_hf(op, &cli.out),
        Cmd::Refl { op } => run_refl(op, &budget, &cli.out),
        Cmd::Proof { op } => run_proof(op, &budget, cli.seed, cli.max_rank, &cli.out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
