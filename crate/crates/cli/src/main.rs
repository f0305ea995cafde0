mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ppcalc::corpus::small_quotients;
use ppcalc::duality::{dual, herzog_check, Herzog};
use ppcalc::elim::{default_homes, embed_search, qe_search, regularity_harness, EmbedBound, EmbedOutcome, HarnessConfig, QeOutcome};
use ppcalc::io::{builtin_module, parse_document, Document, ModuleSpec};
use ppcalc::module::acting_ringoid;
use ppcalc::pairs::{kernel_cokernel_image, localized_iso, LocalizedIso, MorphismCheck, PpMorphism, PpPair};
use ppcalc::pp::{dsl, Implication};
use ppcalc::purity::{is_absolutely_pure, is_flat, is_pure_epi, is_pure_submodule};
use ppcalc::suite::{five_sorts, run_criterion, CRITERIA};
use ppcalc::{fixtures, Counterexample, Error, Module, ModuleMap, PpFormula, Ringoid, Side, SortedTuple, Subgroup};

use report::{Outcome, Report, REPORT_VERSION};

#[derive(Parser)]
#[command(name = "ppcalc", version, about = "Exact pp-formula calculus over finite rings and ringoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    /// Exit 1 when the decision differs.
    #[arg(long, global = true)]
    expect: Option<YesNo>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum YesNo {
    Yes,
    No,
}

#[derive(Args, Clone)]
struct RingArgs {
    /// Built-in ring name or path to a ringoid document.
    #[arg(long, default_value = "z4")]
    ring: String,
    #[arg(long, value_enum, default_value = "right")]
    side: SideArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Args, Clone)]
struct PairArgs {
    #[arg(long)]
    top: String,
    #[arg(long, default_value = "")]
    bottom: String,
}

#[derive(Args, Clone)]
struct BoundArgs {
    #[arg(long, default_value_t = 2)]
    bound_vars: usize,
    #[arg(long, default_value_t = 3)]
    bound_cols: usize,
    /// Candidates tried per home and search stage.
    #[arg(long, default_value_t = 4096)]
    candidates: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a ringoid or module document.
    Validate { path: PathBuf },
    /// Evaluate a formula on a module.
    Eval {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        module: String,
        #[arg(long)]
        formula: String,
    },
    /// Elementary dual of a formula.
    Dual {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        formula: String,
    },
    /// Whether the first formula implies the second.
    Implies {
        #[command(flatten)]
        ring: RingArgs,
        phi: String,
        psi: String,
    },
    /// Whether two formulas are equivalent.
    Equiv {
        #[command(flatten)]
        ring: RingArgs,
        phi: String,
        psi: String,
    },
    /// The left ideal of a one-variable formula.
    Ideal {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        formula: String,
    },
    /// Whether r ⊗ s vanishes, with a separating formula when it does.
    Herzog {
        #[arg(long, default_value = "z4")]
        ring: String,
        /// Right module.
        #[arg(long)]
        module: String,
        /// Left module.
        #[arg(long)]
        left_module: String,
        /// Object the tuple entries live at.
        #[arg(long)]
        sort: Option<String>,
        /// Entries separated by `;`, coordinates by `,`.
        #[arg(long)]
        r: String,
        #[arg(long)]
        s: String,
    },
    /// Purity of the inclusion of a submodule (or of the quotient map with --epi).
    Pure {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        module: String,
        #[arg(long)]
        sort: Option<String>,
        /// Generators of the submodule, separated by `;`.
        #[arg(long)]
        sub: String,
        #[arg(long)]
        epi: bool,
    },
    /// Flatness of a right module over a ring.
    Flat {
        #[arg(long, default_value = "z4")]
        ring: String,
        #[arg(long)]
        module: String,
    },
    /// Absolute purity of a right module over a ring.
    Abspure {
        #[arg(long, default_value = "z4")]
        ring: String,
        #[arg(long)]
        module: String,
    },
    /// Von Neumann regularity.
    Vnr {
        #[arg(long, default_value = "z4")]
        ring: String,
    },
    /// Operations on pp-pairs.
    Pairs {
        #[command(subcommand)]
        op: PairsOp,
    },
    /// Search for an equivalent quantifier-free formula.
    Qe {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        bound_cols: usize,
    },
    /// Search for a monic morphism into a full pair on representables.
    Embed {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        bound: BoundArgs,
    },
    /// Regularity with quantifier and imaginary elimination over a sample.
    VnrHarness {
        #[arg(long, default_value = "z6")]
        ring: String,
        #[arg(long)]
        bound_vars: Option<usize>,
        #[arg(long)]
        bound_cols: Option<usize>,
    },
    /// The five sorts on R ⊕ S1 over F_p[e].
    #[command(name = "demo-4-3")]
    FiveSorts {
        #[arg(long, default_value = "f2")]
        field: String,
    },
    /// Run the acceptance criteria.
    Suite {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        criterion: Vec<u8>,
    },
}

#[derive(Subcommand)]
enum PairsOp {
    /// The value of a pair on a module.
    Value {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        module: String,
    },
    /// Validate a morphism between two pairs.
    MorphismCheck {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        morphism: MorphismArgs,
    },
    /// Kernel, image and cokernel of a morphism.
    Kernel {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        morphism: MorphismArgs,
    },
    /// Whether a pair is closed on every given module.
    Serre {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "module", default_value = "regular")]
        modules: Vec<String>,
    },
    /// Whether two pairs become isomorphic after localizing at the given modules.
    LocIso {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        top2: String,
        #[arg(long, default_value = "")]
        bottom2: String,
        #[arg(long = "module", default_value = "regular")]
        modules: Vec<String>,
    },
    /// Same as the top-level demo-4-3.
    #[command(name = "demo-4-3")]
    FiveSorts {
        #[arg(long, default_value = "f2")]
        field: String,
    },
}

#[derive(Args, Clone)]
struct MorphismArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    top2: String,
    #[arg(long, default_value = "")]
    bottom2: String,
    /// Formula in the source variables followed by the target variables.
    #[arg(long)]
    rho: String,
}

/// Errors in the input, reported with exit status 2.
fn is_input_error(e: &Error) -> bool {
    !matches!(e, Error::SizeBound { .. } | Error::Inconsistency(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, inputs) = describe(&cli.command);
    let mut outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let code = match e.downcast_ref::<Error>() {
                Some(inner) if !is_input_error(inner) => 3,
                _ => 2,
            };
            eprintln!("error: {e:#}");
            return ExitCode::from(code);
        }
    };
    if cli.timings {
        outcome.timings.insert("total".into(), start.elapsed().as_secs_f64());
    }
    for l in &outcome.lines {
        println!("{l}");
    }
    if cli.timings {
        for (k, v) in &outcome.timings {
            println!("time {k}: {v:.3}s");
        }
    }
    let report = Report {
        version: REPORT_VERSION,
        command: name,
        inputs,
        decision: outcome.decision.clone(),
        witnesses: outcome.witnesses.clone(),
        timings: cli.timings.then(|| outcome.timings.clone()),
    };
    if let Some(path) = &cli.json_out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Command::Suite { .. } = cli.command {
        if outcome.verdict == Some(false) {
            return ExitCode::from(1);
        }
    }
    match (cli.expect, outcome.verdict) {
        (Some(_), None) => {
            eprintln!("error: --expect does not apply to {}", report.command);
            ExitCode::from(2)
        }
        (Some(want), Some(got)) if matches!(want, YesNo::Yes) != got => {
            eprintln!("expectation contradicted: decision is {}", if got { "yes" } else { "no" });
            ExitCode::from(1)
        }
        _ => ExitCode::SUCCESS,
    }
}

fn describe(c: &Command) -> (String, BTreeMap<String, String>) {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: &str| {
        m.insert(k.to_string(), v.to_string());
    };
    let name = match c {
        Command::Validate { path } => {
            put("path", &path.display().to_string());
            "validate"
        }
        Command::Eval { ring, module, formula } => {
            put("ring", &ring.ring);
            put("module", module);
            put("formula", formula);
            "eval"
        }
        Command::Dual { ring, formula } | Command::Ideal { ring, formula } | Command::Qe { ring, formula, .. } => {
            put("ring", &ring.ring);
            put("formula", formula);
            match c {
                Command::Dual { .. } => "dual",
                Command::Ideal { .. } => "ideal",
                _ => "qe",
            }
        }
        Command::Implies { ring, phi, psi } | Command::Equiv { ring, phi, psi } => {
            put("ring", &ring.ring);
            put("phi", phi);
            put("psi", psi);
            if matches!(c, Command::Implies { .. }) {
                "implies"
            } else {
                "equiv"
            }
        }
        Command::Herzog { ring, module, left_module, r, s, .. } => {
            put("ring", ring);
            put("module", module);
            put("left_module", left_module);
            put("r", r);
            put("s", s);
            "herzog"
        }
        Command::Pure { ring, module, sub, epi, .. } => {
            put("ring", &ring.ring);
            put("module", module);
            put("sub", sub);
            put("epi", &epi.to_string());
            "pure"
        }
        Command::Flat { ring, module } | Command::Abspure { ring, module } => {
            put("ring", ring);
            put("module", module);
            if matches!(c, Command::Flat { .. }) {
                "flat"
            } else {
                "abspure"
            }
        }
        Command::Vnr { ring } => {
            put("ring", ring);
            "vnr"
        }
        Command::Pairs { op } => {
            match op {
                PairsOp::Value { ring, pair, .. } | PairsOp::Serre { ring, pair, .. } | PairsOp::LocIso { ring, pair, .. } => {
                    put("ring", &ring.ring);
                    put("top", &pair.top);
                    put("bottom", &pair.bottom);
                }
                PairsOp::MorphismCheck { ring, morphism } | PairsOp::Kernel { ring, morphism } => {
                    put("ring", &ring.ring);
                    put("rho", &morphism.rho);
                }
                PairsOp::FiveSorts { field } => put("field", field),
            }
            "pairs"
        }
        Command::Embed { ring, pair, .. } => {
            put("ring", &ring.ring);
            put("top", &pair.top);
            put("bottom", &pair.bottom);
            "embed"
        }
        Command::VnrHarness { ring, .. } => {
            put("ring", ring);
            "vnr-harness"
        }
        Command::FiveSorts { field } => {
            put("field", field);
            "demo-4-3"
        }
        Command::Suite { criterion } => {
            put("criteria", &format!("{criterion:?}"));
            "suite"
        }
    };
    (name.to_string(), m)
}

fn load_ring(name: &str) -> anyhow::Result<Arc<Ringoid>> {
    if Path::new(name).exists() {
        let text = std::fs::read_to_string(name).with_context(|| format!("reading {name}"))?;
        return match parse_document(&text).with_context(|| format!("in {name}"))? {
            Document::Ringoid(r) => Ok(Arc::new(r)),
            Document::Module(_) => anyhow::bail!(Error::InvalidSpec(format!("{name} is a module document"))),
        };
    }
    Ok(Arc::new(fixtures::ring(name)?))
}

fn load_module(name: &str, ring: &Arc<Ringoid>, side: Side) -> anyhow::Result<Module> {
    if Path::new(name).exists() {
        let text = std::fs::read_to_string(name).with_context(|| format!("reading {name}"))?;
        let spec: ModuleSpec = serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
        let m = spec.build_over(ring).with_context(|| format!("in {name}"))?;
        if m.side() != side {
            anyhow::bail!(Error::SideMismatch);
        }
        return Ok(m);
    }
    Ok(builtin_module(name, ring, side)?)
}

fn formula(src: &str, ring: &Arc<Ringoid>, side: Side) -> anyhow::Result<PpFormula> {
    let acting = acting_ringoid(ring, side);
    dsl::parse(src, &acting, side).with_context(|| format!("in formula `{src}`"))
}

/// A pair; an empty bottom means `x̄ = 0` on the top's free variables.
fn pair(args: &PairArgs, ring: &Arc<Ringoid>, side: Side) -> anyhow::Result<PpPair> {
    let top = formula(&args.top, ring, side)?;
    let bottom = if args.bottom.trim().is_empty() {
        PpFormula::bottom(top.acting(), side, top.free_sorts().to_vec())?
    } else {
        formula(&args.bottom, ring, side)?
    };
    Ok(PpPair::new(top, bottom)?)
}

fn format_elem(e: &[u64]) -> String {
    if e.len() == 1 {
        e[0].to_string()
    } else {
        format!("({})", e.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
    }
}

fn format_subgroup(g: &Subgroup) -> String {
    if g.order() > 64 {
        return format!("<{} generators>", g.generators().len());
    }
    format!("{{{}}}", g.elements().iter().map(|e| format_elem(e)).collect::<Vec<_>>().join(", "))
}

fn format_tuple(t: &SortedTuple) -> String {
    t.entries.iter().map(|e| format_elem(e)).collect::<Vec<_>>().join("; ")
}

fn format_counterexample(c: &Counterexample) -> String {
    format!("tuple [{}] in {}", format_tuple(&c.tuple), c.module)
}

fn parse_tuple(src: &str, m: &Module, sort: Option<&str>) -> anyhow::Result<SortedTuple> {
    let p = match sort {
        Some(name) => m.acting().object_id(name).ok_or_else(|| Error::UnknownName(name.to_string()))?,
        None => 0,
    };
    let g = m.fiber(p);
    let mut entries = Vec::new();
    for part in src.split(';') {
        let coords: Vec<u64> = part
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|_| Error::InvalidSpec(format!("bad coordinate `{c}`"))))
            .collect::<Result<_, _>>()?;
        if coords.len() != g.rank() {
            anyhow::bail!(Error::InvalidSpec(format!("`{part}` needs {} coordinates", g.rank())));
        }
        entries.push(coords.iter().zip(g.moduli()).map(|(&c, &d)| c % d).collect());
    }
    Ok(SortedTuple::new(vec![p; entries.len()], entries))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn field_prime(field: &str) -> anyhow::Result<u64> {
    let p: u64 = field.trim_start_matches(['f', 'F']).parse().map_err(|_| Error::UnknownName(field.to_string()))?;
    if p < 2 || (2..p).any(|d| d * d <= p && p.is_multiple_of(d)) {
        anyhow::bail!(Error::InvalidSpec(format!("{field} is not a prime field")));
    }
    Ok(p)
}

fn dispatch(c: &Command) -> anyhow::Result<Outcome> {
    match c {
        Command::Validate { path } => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let doc = parse_document(&text).with_context(|| format!("{} is invalid", path.display()))?;
            let mut o = Outcome::new(json!({"valid": true}));
            match doc {
                Document::Ringoid(r) => {
                    o.decision["kind"] = json!("ringoid");
                    o.line(format!("valid ringoid {} with {} object(s), {} morphisms in total", r.name(), r.num_objects(), r.total_size()));
                }
                Document::Module(m) => {
                    o.decision["kind"] = json!("module");
                    o.decision["order"] = json!(m.order());
                    o.line(format!("valid module {m}"));
                }
            }
            Ok(o)
        }
        Command::Eval { ring, module, formula: src } => {
            let r = load_ring(&ring.ring)?;
            let side = ring.side.into();
            let m = load_module(module, &r, side)?;
            let phi = formula(src, &r, side)?;
            let v = phi.evaluate(&m)?;
            let mut o = Outcome::new(json!({"order": v.order(), "subgroup": format_subgroup(&v)}));
            o.line(format!("{phi} on {m}"));
            o.line(format!("subgroup {}", format_subgroup(&v)));
            o.line(format!("order {}", v.order()));
            Ok(o)
        }
        Command::Dual { ring, formula: src } => {
            let r = load_ring(&ring.ring)?;
            let phi = formula(src, &r, ring.side.into())?;
            let d = dual(&phi);
            let mut o = Outcome::new(json!({"dual": d.to_string(), "side": d.side().to_string()}));
            o.line(format!("D({phi}) = {d}"));
            Ok(o)
        }
        Command::Implies { ring, phi, psi } => {
            let r = load_ring(&ring.ring)?;
            let side = ring.side.into();
            let (a, b) = (formula(phi, &r, side)?, formula(psi, &r, side)?);
            let mut o = match a.implies(&b)? {
                Implication::Holds => {
                    let mut o = Outcome::new(json!({"implies": true})).verdict(true);
                    o.line(format!("{a} implies {b}: yes"));
                    o
                }
                Implication::Fails(c) => {
                    let mut o = Outcome::new(json!({"implies": false})).verdict(false);
                    o.line(format!("{a} implies {b}: no"));
                    o.witness(format_counterexample(&c));
                    o
                }
            };
            o.decision["phi"] = json!(a.to_string());
            Ok(o)
        }
        Command::Equiv { ring, phi, psi } => {
            let r = load_ring(&ring.ring)?;
            let side = ring.side.into();
            let (a, b) = (formula(phi, &r, side)?, formula(psi, &r, side)?);
            let eq = a.equivalent(&b)?;
            let mut o = Outcome::new(json!({"equivalent": eq})).verdict(eq);
            o.line(format!("{a} equivalent to {b}: {}", yes(eq)));
            if !eq {
                for (x, y) in [(&a, &b), (&b, &a)] {
                    if let Implication::Fails(c) = x.implies(y)? {
                        o.witness(format_counterexample(&c));
                    }
                }
            }
            Ok(o)
        }
        Command::Ideal { ring, formula: src } => {
            let r = load_ring(&ring.ring)?;
            let phi = formula(src, &r, ring.side.into())?;
            let ideal = phi.pp_ideal()?;
            let op = acting_ringoid(phi.acting(), Side::Left);
            let gens: Vec<String> = ideal.generators().iter().map(|g| op.format_morph(g)).collect();
            let orders: Vec<u128> = ideal.parts().iter().map(Subgroup::order).collect();
            let mut o = Outcome::new(json!({"generators": gens, "orders": orders}));
            o.line(format!("ideal of {phi}: generated by {}", if gens.is_empty() { "nothing".into() } else { gens.join(", ") }));
            o.line(format!("part orders {orders:?}"));
            Ok(o)
        }
        Command::Herzog { ring, module, left_module, sort, r: rs, s: ss } => {
            let ring = load_ring(ring)?;
            let m = load_module(module, &ring, Side::Right)?;
            let n = load_module(left_module, &ring, Side::Left)?;
            let r = parse_tuple(rs, &m, sort.as_deref())?;
            let s = parse_tuple(ss, &n, sort.as_deref())?;
            Ok(match herzog_check(&r, &m, &s, &n, &[])? {
                Herzog::Witness(phi) => {
                    let mut o = Outcome::new(json!({"tensor_zero": true, "formula": phi.to_string()})).verdict(true);
                    o.line("r ⊗ s = 0");
                    o.witness(format!("{phi} holds of r in M, and its dual {} holds of s in N", dual(&phi)));
                    o
                }
                Herzog::NonzeroTensor { class, order } => {
                    let mut o = Outcome::new(json!({"tensor_zero": false, "class": class, "order": order})).verdict(false);
                    o.line(format!("r ⊗ s ≠ 0: class {} of order {order}", format_elem(&class)));
                    o
                }
            })
        }
        Command::Pure { ring, module, sort, sub, epi } => {
            let r = load_ring(&ring.ring)?;
            let n = load_module(module, &r, ring.side.into())?;
            let gens = parse_tuple(sub, &n, sort.as_deref())?;
            let p = gens.sorts.first().copied().unwrap_or(0);
            let mut seeds: Vec<Subgroup> = (0..n.fibers().len()).map(|q| Subgroup::zero(n.fiber(q))).collect();
            seeds[p] = Subgroup::from_generators(n.fiber(p), gens.entries.clone());
            let k = n.closure(seeds);
            if *epi {
                let q = ModuleMap::quotient_of(&n, &k);
                let d = is_pure_epi(&q)?;
                let mut o = Outcome::new(json!({"pure_epi": d.pure})).verdict(d.pure);
                o.line(format!("{} -> {}: pure epimorphism {}", n, q.target(), yes(d.pure)));
                if let (false, Some(f)) = (d.pure, &d.formula) {
                    o.witness(format!("{f} holds of [{}] in the quotient with no lift satisfying it", format_tuple(&d.tuple)));
                }
                Ok(o)
            } else {
                let j = ModuleMap::inclusion_of(&n, &k);
                let d = is_pure_submodule(&j)?;
                let mut o = Outcome::new(json!({"pure": d.pure, "order": j.source().order()})).verdict(d.pure);
                o.line(format!("submodule of order {} in {}: pure {}", j.source().order(), n, yes(d.pure)));
                if let Some(w) = &d.witness {
                    o.witness(format!("{w}"));
                }
                if d.retraction.is_some() {
                    o.line("the inclusion splits");
                }
                Ok(o)
            }
        }
        Command::Flat { ring, module } => {
            let r = load_ring(ring)?;
            let m = load_module(module, &r, Side::Right)?;
            let d = is_flat(&m)?;
            let mut o = Outcome::new(json!({"flat": d.flat})).verdict(d.flat);
            o.line(format!("{m}: flat {}", yes(d.flat)));
            if let Some(i) = &d.failing_ideal {
                o.witness(format!("left ideal {} with M ⊗ I -> M ⊗ R not injective", format_subgroup(i)));
            }
            Ok(o)
        }
        Command::Abspure { ring, module } => {
            let r = load_ring(ring)?;
            let m = load_module(module, &r, Side::Right)?;
            let d = is_absolutely_pure(&m)?;
            let mut o = Outcome::new(json!({"absolutely_pure": d.absolutely_pure})).verdict(d.absolutely_pure);
            o.line(format!("{m}: absolutely pure {}", yes(d.absolutely_pure)));
            if let Some((i, _)) = &d.failing {
                o.witness(format!("right ideal {} with a map into M that does not extend to R", format_subgroup(i)));
            }
            Ok(o)
        }
        Command::Vnr { ring } => {
            let r = load_ring(ring)?;
            let d = r.is_von_neumann_regular();
            let reg = d.is_regular();
            let mut o = Outcome::new(json!({"regular": reg})).verdict(reg);
            o.line(format!("{}: von Neumann regular {}", r.name(), yes(reg)));
            if let ppcalc::ringoid::VnrDecision::NotRegular(x) = &d {
                o.witness(format!("no s with r s r = r for r = {}", r.format_morph(x)));
            }
            Ok(o)
        }
        Command::Pairs { op } => pairs(op),
        Command::Qe { ring, formula: src, bound_cols } => {
            let r = load_ring(&ring.ring)?;
            let phi = formula(src, &r, ring.side.into())?;
            Ok(match qe_search(&phi, *bound_cols)? {
                QeOutcome::QuantifierFree(q) => {
                    let mut o = Outcome::new(json!({"outcome": "quantifier-free", "formula": q.to_string()})).verdict(true);
                    o.line(format!("{phi} is equivalent to {q}"));
                    o
                }
                QeOutcome::NotFoundWithinBound => {
                    let mut o = Outcome::new(json!({"outcome": "not-found-within-bound"})).verdict(false);
                    o.line(format!("no quantifier-free form of {phi} with at most {bound_cols} equations"));
                    o
                }
                QeOutcome::ProvablyNone { candidates } => {
                    let mut o = Outcome::new(json!({"outcome": "provably-none", "candidates": candidates.len()})).verdict(false);
                    o.line(format!("{phi} has no quantifier-free form; all {} candidates differ", candidates.len()));
                    for c in &candidates {
                        o.witness(c.to_string());
                    }
                    o
                }
            })
        }
        Command::Embed { ring, pair: pa, bound } => {
            let r = load_ring(&ring.ring)?;
            let side = ring.side.into();
            let p = pair(pa, &r, side)?;
            let homes = default_homes(p.acting());
            let tests = small_quotients(p.acting(), side, 16)?;
            let b = EmbedBound { vars: bound.bound_vars, cols: bound.bound_cols, candidates: bound.candidates };
            Ok(match embed_search(&p, &homes, &b, &tests)? {
                EmbedOutcome::Monic { home, morphism } => {
                    let sorts: Vec<&str> = homes[home].iter().map(|&s| p.acting().object_name(s)).collect();
                    let mut o = Outcome::new(json!({"outcome": "monic", "home": sorts, "rho": morphism.rho().to_string()})).verdict(true);
                    o.line(format!("{p} embeds into the full pair on [{}]", sorts.join(", ")));
                    o.witness(morphism.rho().to_string());
                    o
                }
                EmbedOutcome::NotFoundWithinBound => {
                    let mut o = Outcome::new(json!({"outcome": "not-found-within-bound"})).verdict(false);
                    o.line(format!("no monic morphism from {p} found within the bound"));
                    o
                }
                EmbedOutcome::NotEmbeddable { obstructions } => {
                    let mut o = Outcome::new(json!({"outcome": "not-embeddable"})).verdict(false);
                    o.line(format!("{p} embeds in no home"));
                    for (home, module, a, b) in obstructions {
                        o.witness(format!("home {home}: test module {module} gives {a} > {b}"));
                    }
                    o
                }
            })
        }
        Command::VnrHarness { ring, bound_vars, bound_cols } => {
            let r = load_ring(ring)?;
            let mut cfg = HarnessConfig::default();
            if let Some(v) = bound_vars {
                cfg.embed.vars = *v;
            }
            if let Some(c) = bound_cols {
                cfg.embed.cols = *c;
            }
            let rep = regularity_harness(&r, &cfg)?;
            let reg = rep.vnr.is_regular();
            let qe = rep.formulas.iter().filter(|f| f.1.found()).count();
            let none = rep.formulas.iter().filter(|f| matches!(f.1, QeOutcome::ProvablyNone { .. })).count();
            let em = rep.pairs.iter().filter(|p| p.1.found()).count();
            let mut o = Outcome::new(json!({
                "regular": reg,
                "formulas": rep.formulas.len(),
                "quantifier_free": qe,
                "provably_none": none,
                "pairs": rep.pairs.len(),
                "embedded": em,
                "anomalies": rep.anomalies.len(),
            }))
            .verdict(reg);
            o.line(format!("{}: von Neumann regular {}", r.name(), yes(reg)));
            o.line(format!("quantifier-free forms found for {qe} of {} formulas ({none} provably none)", rep.formulas.len()));
            o.line(format!("embeddings found for {em} of {} pairs", rep.pairs.len()));
            for a in &rep.anomalies {
                o.witness(a.clone());
            }
            Ok(o)
        }
        Command::FiveSorts { field } => demo(field),
        Command::Suite { criterion } => {
            let ids: Vec<u8> = if criterion.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criterion.clone() };
            let mut o = Outcome::new(json!({}));
            let mut all = true;
            let mut results = Vec::new();
            for id in ids {
                let r = run_criterion(id)?;
                all &= r.passed();
                o.line(format!("criterion {id}: {} {}: {}", if r.passed() { "PASS" } else { "FAIL" }, r.title, r.detail));
                if r.checks_passed && !r.passed() {
                    o.line(format!("  over the time limit of {}s", r.limit.as_secs()));
                }
                o.timings.insert(format!("criterion {id}"), r.elapsed.as_secs_f64());
                results.push(json!({"id": id, "title": r.title, "passed": r.passed(), "detail": r.detail}));
            }
            o.decision = json!({"passed": all, "criteria": results});
            o.line(format!("suite: {}", if all { "PASS" } else { "FAIL" }));
            Ok(o.verdict(all))
        }
    }
}

fn demo(field: &str) -> anyhow::Result<Outcome> {
    let d = five_sorts(field_prime(field)?)?;
    let rows: Vec<Value> = d
        .rows
        .iter()
        .map(|r| json!({"sort": r.label, "order": r.order, "closed_on_R": r.serre}))
        .collect();
    let isos: Vec<Value> =
        d.isos.iter().map(|&(i, j, iso)| json!({"a": d.rows[i].label, "b": d.rows[j].label, "isomorphic": iso})).collect();
    let mut o = Outcome::new(json!({"field": d.field, "rows": rows, "localized_isos": isos}));
    o.line(format!("values on R ⊕ S1 over F{}[e]", d.field));
    for r in &d.rows {
        o.line(format!("  {:<18} order {:>4}  closed on R: {}", r.label, r.order, yes(r.serre)));
    }
    for &(i, j, iso) in &d.isos {
        o.line(format!("  {} and {} isomorphic after localizing at R: {}", d.rows[i].label, d.rows[j].label, yes(iso)));
    }
    Ok(o)
}

fn morphism(args: &MorphismArgs, ring: &Arc<Ringoid>, side: Side) -> anyhow::Result<(PpPair, PpPair, MorphismCheck)> {
    let src = pair(&args.pair, ring, side)?;
    let tgt = pair(&PairArgs { top: args.top2.clone(), bottom: args.bottom2.clone() }, ring, side)?;
    let rho = formula(&args.rho, ring, side)?;
    let check = PpMorphism::new(rho, &src, &tgt)?;
    Ok((src, tgt, check))
}

fn pairs(op: &PairsOp) -> anyhow::Result<Outcome> {
    match op {
        PairsOp::Value { ring, pair: pa, module } => {
            let r = load_ring(&ring.ring)?;
            let side = ring.side.into();
            let p = pair(pa, &r, side)?;
            let m = load_module(module, &r, side)?;
            let v = p.value(&m)?;
            let mut o = Outcome::new(json!({"order": v.order(), "group": v.to_string()}));
            o.line(format!("{p} on {m}: {v}, order {}", v.order()));
            Ok(o)
        }
        PairsOp::MorphismCheck { ring, morphism: ma } => {
            let r = load_ring(&ring.ring)?;
            let (_, _, check) = morphism(ma, &r, ring.side.into())?;
            Ok(match check {
                MorphismCheck::Valid(m) => {
                    let mut o = Outcome::new(json!({"valid": true})).verdict(true);
                    o.line(format!("{} defines a morphism {} -> {}", m.rho(), m.source(), m.target()));
                    o
                }
                MorphismCheck::Rejected { condition, counterexample } => {
                    let mut o = Outcome::new(json!({"valid": false, "condition": condition})).verdict(false);
                    o.line(format!("rejected: condition {condition} fails"));
                    o.witness(format_counterexample(&counterexample));
                    o
                }
            })
        }
        PairsOp::Kernel { ring, morphism: ma } => {
            let r = load_ring(&ring.ring)?;
            let (_, _, check) = morphism(ma, &r, ring.side.into())?;
            let m = match check {
                MorphismCheck::Valid(m) => m,
                MorphismCheck::Rejected { condition, .. } => {
                    anyhow::bail!(Error::InvalidSpec(format!("not a morphism: condition {condition} fails")))
                }
            };
            let kc = kernel_cokernel_image(&m)?;
            let mut o = Outcome::new(json!({
                "kernel": kc.kernel.to_string(),
                "image": kc.image.to_string(),
                "cokernel": kc.cokernel.to_string(),
            }));
            o.line(format!("kernel   {}", kc.kernel));
            o.line(format!("image    {}", kc.image));
            o.line(format!("cokernel {}", kc.cokernel));
            Ok(o)
        }
        PairsOp::Serre { ring, pair: pa, modules } => {
            let r = load_ring(&ring.ring)?;
            let side = ring.side.into();
            let p = pair(pa, &r, side)?;
            let gens = modules.iter().map(|m| load_module(m, &r, side)).collect::<anyhow::Result<Vec<_>>>()?;
            let closed = p.serre_membership(&gens)?;
            let mut o = Outcome::new(json!({"closed": closed})).verdict(closed);
            o.line(format!("{p} closed on the generators: {}", yes(closed)));
            for (name, g) in modules.iter().zip(&gens) {
                if !p.is_closed_on(g)? {
                    o.witness(format!("open on {name}: value {}", p.value(g)?));
                }
            }
            Ok(o)
        }
        PairsOp::LocIso { ring, pair: pa, top2, bottom2, modules } => {
            let r = load_ring(&ring.ring)?;
            let side = ring.side.into();
            let p = pair(pa, &r, side)?;
            let q = pair(&PairArgs { top: top2.clone(), bottom: bottom2.clone() }, &r, side)?;
            let gens = modules.iter().map(|m| load_module(m, &r, side)).collect::<anyhow::Result<Vec<_>>>()?;
            Ok(match localized_iso(&p, &q, &gens)? {
                LocalizedIso::Iso(m) => {
                    let mut o = Outcome::new(json!({"outcome": "iso"})).verdict(true);
                    o.line(format!("{p} and {q} are isomorphic after localizing"));
                    o.witness(format!("{} : {} -> {}", m.rho(), m.source(), m.target()));
                    o
                }
                LocalizedIso::NotIso { module, orders } => {
                    let mut o = Outcome::new(json!({"outcome": "not-iso"})).verdict(false);
                    o.line(format!("{p} and {q} are not isomorphic after localizing"));
                    o.witness(format!("on {} the values have orders {} and {}", modules[module], orders.0, orders.1));
                    o
                }
                LocalizedIso::NotFoundWithinBound => {
                    let mut o = Outcome::new(json!({"outcome": "not-found-within-bound"})).verdict(false);
                    o.line("no isomorphism found among graph morphisms");
                    o
                }
            })
        }
        PairsOp::FiveSorts { field } => demo(field),
    }
}
