use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sbalg::ext::{overlap_extension, verify_exact};
use sbalg::field::FieldMode;
use sbalg::graph_maps::{graph_map_rank, hom_basis_graph, hom_linear};
use sbalg::modules::{band_module, direct_sum, is_projective_string, ExplicitModule, Toolkit};
use sbalg::presentation::Presentation;
use sbalg::scan::{generate_random_sb, theorem_scan, trial_rng, Limits, ScanConfig};
use sbalg::stable::{check_main_theorem, endo_algebra, extract_presentation, stable_endo_algebra, Verdict};
use sbalg::strings::{canonical, enumerate_strings, is_band, string_from_literal, StringWord};
use sbalg::{Algebra, Error, Field};

#[derive(Parser)]
#[command(name = "sbalg", version, about = "String combinatorics for special biserial algebras")]
struct Cli {
    /// `rational` or `fp:<p>`.
    #[arg(long, global = true, default_value = "rational", value_parser = FieldMode::parse)]
    field: FieldMode,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Include the explicit modules (bases and arrow matrices) in the output.
    #[arg(long, global = true)]
    dump_module: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the special biserial and gentle axioms.
    Validate { file: PathBuf },
    /// Print σ and ε on every arrow.
    Signs { file: PathBuf },
    /// List strings up to equivalence.
    Strings {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Build a string or band module.
    Module {
        file: PathBuf,
        #[arg(long)]
        string: String,
    },
    /// Graph maps and the homomorphism space between two modules.
    Hom(Pair),
    /// Homomorphisms modulo those factoring through a projective.
    StableHom(Pair),
    /// Dimension of Ext¹(from, to).
    Ext1(Pair),
    /// Endomorphism algebra and stable endomorphism algebra of a direct sum.
    StableEnd(Summands),
    /// Gentleness of a presentation, or of a stable endomorphism algebra.
    GentleCheck(Summands),
    /// The overlap extension 0 → M(D1 E F1) → M(D1 E F2) ⊕ M(D2 E F1) → M(D2 E F2) → 0.
    OverlapExt {
        file: PathBuf,
        #[arg(long)]
        e: String,
        #[arg(long)]
        d1: Option<String>,
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        d2: Option<String>,
        #[arg(long)]
        f2: Option<String>,
    },
    /// Random search for counterexamples to "Ext¹(M,M) = 0 ⇒ stable End(M) gentle".
    TheoremScan(ScanArgs),
    /// Write random special biserial presentations.
    Generate {
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Args)]
struct Pair {
    file: PathBuf,
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
}

#[derive(Args)]
struct Summands {
    file: PathBuf,
    /// A summand; repeat for direct sums.
    #[arg(long = "string")]
    strings: Vec<String>,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = 5)]
    max_vertices: usize,
    #[arg(long, default_value_t = 8)]
    max_arrows: usize,
    #[arg(long, default_value_t = 16)]
    max_relations: usize,
    #[arg(long, default_value_t = 40)]
    max_dim: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_vertices: self.max_vertices,
            max_arrows: self.max_arrows,
            max_relations: self.max_relations,
            max_dim: self.max_dim,
        }
    }
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    #[arg(long, default_value_t = 3)]
    max_summands: usize,
    #[command(flatten)]
    limits: LimitArgs,
    /// Write the full JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Result of a subcommand: JSON payload, text rendering and verdict.
struct Outcome {
    json: Value,
    text: String,
    pass: bool,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, pass: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(
            Error::Syntax { .. }
            | Error::UnknownVertex(_)
            | Error::UnknownArrow(_)
            | Error::NotComposable(_)
            | Error::InvalidRelation(_)
            | Error::InvalidString { .. }
            | Error::NotBand(_),
        ) => 2,
        _ => 1,
    }
}

fn schema(cmd: &str) -> String {
    format!("sbalg.{cmd}/1")
}

fn read_presentation(path: &Path) -> anyhow::Result<Presentation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Presentation::parse(&text)?)
}

fn load(path: &Path) -> anyhow::Result<Algebra> {
    Ok(Algebra::new(read_presentation(path)?)?)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Signs { file } => signs(file),
        Command::Strings { file, max_len } => strings(file, *max_len),
        Command::TheoremScan(args) => scan(cli, args),
        Command::Generate { count, out_dir, limits } => generate(cli.seed, *count, out_dir.as_deref(), &limits.limits()),
        _ => sbalg::with_field!(cli.field, F => run_in::<F>(cli)),
    }
}

fn run_in<F: Field>(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Module { file, string } => module::<F>(cli, file, string),
        Command::Hom(p) => hom::<F>(cli, p),
        Command::StableHom(p) => stable_hom::<F>(cli, p),
        Command::Ext1(p) => ext1::<F>(cli, p),
        Command::StableEnd(s) => stable_end::<F>(cli, s),
        Command::GentleCheck(s) => gentle_check::<F>(s),
        Command::OverlapExt { file, e, d1, f1, d2, f2 } => overlap::<F>(cli, file, e, [d1, f1, d2, f2]),
        _ => unreachable!("field-independent commands are handled in run"),
    }
}

fn validate(file: &Path) -> anyhow::Result<Outcome> {
    let p = read_presentation(file)?;
    let sb = p.validate_special_biserial();
    let gentle = p.validate_gentle();
    let mut text = String::new();
    for (name, r) in [("special biserial", &sb), ("gentle", &gentle)] {
        text += &format!("{name}: {}\n", if r.pass { "PASS" } else { "FAIL" });
        for v in &r.violations {
            text += &format!("  condition {}: {}\n", v.condition, v.witness);
        }
    }
    let json = json!({
        "schema": schema("validate"),
        "special_biserial": sb,
        "gentle": gentle,
    });
    Ok(Outcome { json, text, pass: sb.pass })
}

fn signs(file: &Path) -> anyhow::Result<Outcome> {
    let alg = load(file)?;
    let q = alg.quiver();
    let mut text = String::new();
    let mut rows = Vec::new();
    for (i, a) in q.arrows.iter().enumerate() {
        let (s, e) = (alg.signs.sigma[i], alg.signs.epsilon[i]);
        text += &format!("{}: sigma {s} epsilon {e}\n", a.name);
        rows.push(json!({"arrow": a.name, "sigma": s.value(), "epsilon": e.value()}));
    }
    Ok(Outcome::ok(json!({"schema": schema("signs"), "arrows": rows}), text))
}

fn strings(file: &Path, max_len: usize) -> anyhow::Result<Outcome> {
    let alg = load(file)?;
    let q = alg.quiver();
    let all = enumerate_strings(&alg, max_len);
    let mut text = String::new();
    let mut rows = Vec::new();
    for c in &all {
        let tags = [(is_projective_string(&alg, c), "projective"), (is_band(&alg, c), "band")];
        let tags: Vec<&str> = tags.iter().filter(|t| t.0).map(|t| t.1).collect();
        text += &format!("{}", c.display(q));
        if !tags.is_empty() {
            text += &format!("  [{}]", tags.join(", "));
        }
        text.push('\n');
        rows.push(json!({"string": c.display(q), "length": c.len(), "tags": tags}));
    }
    text += &format!("{} strings up to length {max_len}\n", all.len());
    Ok(Outcome::ok(json!({"schema": schema("strings"), "max_len": max_len, "strings": rows}), text))
}

/// `band:<lambda>:<n>:<word>` or a string literal.
enum ModuleArg {
    String(StringWord),
    Band { word: StringWord, lambda: i64, n: usize },
}

fn parse_module_arg(alg: &Algebra, text: &str) -> anyhow::Result<ModuleArg> {
    if let Some(rest) = text.strip_prefix("band:") {
        let mut parts = rest.splitn(3, ':');
        let (Some(l), Some(n), Some(w)) = (parts.next(), parts.next(), parts.next()) else {
            bail!(Error::InvalidString { word: text.into(), reason: "expected band:<lambda>:<n>:<word>".into() });
        };
        let bad = |what: &str| Error::InvalidString { word: text.into(), reason: format!("bad {what}") };
        let lambda: i64 = l.trim().parse().map_err(|_| bad("eigenvalue"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("multiplicity"))?;
        if lambda == 0 || n == 0 {
            bail!(bad("band parameters, need nonzero eigenvalue and multiplicity"));
        }
        let word = string_from_literal(alg, w)?;
        if !is_band(alg, &word) {
            bail!(Error::NotBand(w.trim().into()));
        }
        return Ok(ModuleArg::Band { word, lambda, n });
    }
    Ok(ModuleArg::String(string_from_literal(alg, text)?))
}

fn build<F: Field>(tk: &Toolkit<'_, F>, arg: &ModuleArg) -> anyhow::Result<ExplicitModule<F>> {
    Ok(match arg {
        ModuleArg::String(c) => tk.string_module(c)?,
        ModuleArg::Band { word, lambda, n } => band_module(tk.alg, word, &F::from_i64(*lambda), *n)?,
    })
}

fn module_name(alg: &Algebra, arg: &ModuleArg) -> String {
    match arg {
        ModuleArg::String(c) => format!("M({})", c.display(alg.quiver())),
        ModuleArg::Band { word, lambda, n } => format!("M({},{lambda},{n})", word.display(alg.quiver())),
    }
}

fn dump<F: Field>(cli: &Cli, alg: &Algebra, json: &mut Value, text: &mut String, mods: &[(&str, &ExplicitModule<F>)]) {
    if !cli.dump_module {
        return;
    }
    let mut out = serde_json::Map::new();
    for (name, m) in mods {
        let j = m.to_json(alg);
        *text += &format!("{name}:\n{}\n", serde_json::to_string_pretty(&j).expect("json"));
        out.insert(name.to_string(), j);
    }
    json["modules"] = Value::Object(out);
}

fn module<F: Field>(cli: &Cli, file: &Path, string: &str) -> anyhow::Result<Outcome> {
    let alg = load(file)?;
    let tk = Toolkit::<F>::new(&alg)?;
    let arg = parse_module_arg(&alg, string)?;
    let m = build(&tk, &arg)?;
    let name = module_name(&alg, &arg);
    let dims = m.dim_vector(alg.vertex_count());
    let projective = matches!(&arg, ModuleArg::String(c) if is_projective_string(&alg, c));
    let mut text = format!("{name}: dimension {} {dims:?}{}\n", m.dim(), if projective { ", projective" } else { "" });
    let mut json = json!({
        "schema": schema("module"),
        "field": F::name(),
        "module": name,
        "dimension": m.dim(),
        "dimension_vector": dims,
        "projective": projective,
    });
    dump(cli, &alg, &mut json, &mut text, &[("module", &m)]);
    Ok(Outcome::ok(json, text))
}

fn pair_modules<F: Field>(tk: &Toolkit<'_, F>, p: &Pair) -> anyhow::Result<(ModuleArg, ModuleArg, ExplicitModule<F>, ExplicitModule<F>)> {
    let (a, b) = (parse_module_arg(tk.alg, &p.from)?, parse_module_arg(tk.alg, &p.to)?);
    let (m, n) = (build(tk, &a)?, build(tk, &b)?);
    Ok((a, b, m, n))
}

fn hom<F: Field>(cli: &Cli, p: &Pair) -> anyhow::Result<Outcome> {
    let alg = load(&p.file)?;
    let tk = Toolkit::<F>::new(&alg)?;
    let (a, b, m, n) = pair_modules(&tk, p)?;
    let dim = hom_linear(&m, &n).len();
    let mut text = format!("dim Hom({}, {}) = {dim}\n", module_name(&alg, &a), module_name(&alg, &b));
    let mut json = json!({"schema": schema("hom"), "field": F::name(), "dimension": dim});
    let mut pass = true;
    if let (ModuleArg::String(c1), ModuleArg::String(c2)) = (&a, &b) {
        let maps = hom_basis_graph(&alg, c1, c2);
        let rank = graph_map_rank(&maps);
        pass = maps.len() == dim && rank == dim;
        text += &format!("graph maps: {} (rank {rank}), basis {}\n", maps.len(), if pass { "PASS" } else { "FAIL" });
        let mut rows = Vec::new();
        for g in &maps {
            let c = g.classify();
            let side = if c.two_sided { "two-sided" } else if c.one_sided { "one-sided" } else { "" };
            text += &format!("  {} {side}\n", g.pair.display(&alg));
            rows.push(json!({"pair": g.pair.display(&alg), "rank": g.rank(), "classification": c}));
        }
        json["graph_maps"] = json!(rows);
        json["basis_agreement"] = json!(pass);
    }
    dump(cli, &alg, &mut json, &mut text, &[("from", &m), ("to", &n)]);
    Ok(Outcome { json, text, pass })
}

fn stable_hom<F: Field>(cli: &Cli, p: &Pair) -> anyhow::Result<Outcome> {
    let alg = load(&p.file)?;
    let tk = Toolkit::<F>::new(&alg)?;
    let (a, b, m, n) = pair_modules(&tk, p)?;
    let s = tk.stable_hom(&m, &n);
    let names = (module_name(&alg, &a), module_name(&alg, &b));
    let mut text = format!(
        "Hom({0}, {1}) {2}\nproj-trivial {3}\nstable Hom({0}, {1}) {4}\n",
        names.0,
        names.1,
        s.hom.len(),
        s.subspace.dim(),
        s.dim()
    );
    let mut json = json!({
        "schema": schema("stable-hom"),
        "field": F::name(),
        "hom": s.hom.len(),
        "proj_trivial": s.subspace.dim(),
        "stable_hom": s.dim(),
    });
    dump(cli, &alg, &mut json, &mut text, &[("from", &m), ("to", &n)]);
    Ok(Outcome::ok(json, text))
}

fn ext1<F: Field>(cli: &Cli, p: &Pair) -> anyhow::Result<Outcome> {
    let alg = load(&p.file)?;
    let tk = Toolkit::<F>::new(&alg)?;
    let (a, b, m, n) = pair_modules(&tk, p)?;
    let syz = tk.syzygy(&m)?;
    let e = tk.ext1_from(&syz, &n);
    let mut text = format!("dim Ext1({}, {}) = {}\n", module_name(&alg, &a), module_name(&alg, &b), e.dim);
    let mut json = json!({
        "schema": schema("ext1"),
        "field": F::name(),
        "dimension": e.dim,
        "hom_from_syzygy": e.hom_dim,
        "restriction_rank": e.restriction_rank,
    });
    dump(cli, &alg, &mut json, &mut text, &[("from", &m), ("to", &n), ("syzygy", &syz.omega)]);
    Ok(Outcome::ok(json, text))
}

fn summand_args(alg: &Algebra, s: &Summands) -> anyhow::Result<Vec<ModuleArg>> {
    if s.strings.is_empty() {
        bail!(Error::Precondition("at least one --string is required".into()));
    }
    s.strings.iter().map(|t| parse_module_arg(alg, t)).collect()
}

fn only_strings(args: &[ModuleArg]) -> Option<Vec<StringWord>> {
    args
        .iter()
        .map(|s| match s {
            ModuleArg::String(c) => Some(canonical(c)),
            ModuleArg::Band { .. } => None,
        })
        .collect()
}

fn stable_end<F: Field>(cli: &Cli, s: &Summands) -> anyhow::Result<Outcome> {
    let alg = load(&s.file)?;
    let tk = Toolkit::<F>::new(&alg)?;
    let args = summand_args(&alg, s)?;
    let names: Vec<String> = args.iter().map(|x| module_name(&alg, x)).collect();
    let built: Vec<ExplicitModule<F>> = args.iter().map(|x| build(&tk, x)).collect::<anyhow::Result<_>>()?;
    let refs: Vec<&ExplicitModule<F>> = built.iter().collect();
    let (m, _) = direct_sum(&alg, &refs)?;
    let st = tk.stable_hom(&m, &m);
    let mut text = format!(
        "M = {}\nEnd {}\nproj-trivial {}\nstable End {}\n",
        names.join(" + "),
        st.hom.len(),
        st.subspace.dim(),
        st.dim()
    );
    let mut json = json!({
        "schema": schema("stable-end"),
        "field": F::name(),
        "summands": names,
        "end": st.hom.len(),
        "proj_trivial": st.subspace.dim(),
        "stable_end": st.dim(),
    });
    if let Some(words) = only_strings(&args) {
        let end = endo_algebra(&tk, &words)?;
        let zero = (0..end.dim()).all(|a| (0..end.dim()).all(|b| end.product(a, b).is_empty() || end.idempotents.contains(&a) || end.idempotents.contains(&b)));
        text += &format!("radical products all zero: {zero}\n");
        json["end_algebra"] = end.to_json();
        let stable = stable_endo_algebra(&tk, &words)?;
        json["stable_end_algebra"] = stable.to_json();
        match extract_presentation(&stable) {
            Ok(p) => {
                let q = &p.presentation.quiver;
                text += &format!(
                    "stable End presentation: {} vertices, {} arrows, {} relations\n{}",
                    q.vertices.len(),
                    q.arrows.len(),
                    p.presentation.relations.len(),
                    p.presentation
                );
                json["presentation"] = json!(p.presentation.to_string());
            }
            Err(e) => {
                text += &format!("stable End presentation: not extracted ({e})\n");
                json["presentation"] = Value::Null;
            }
        }
    }
    dump(cli, &alg, &mut json, &mut text, &[("module", &m)]);
    Ok(Outcome::ok(json, text))
}

fn gentle_check<F: Field>(s: &Summands) -> anyhow::Result<Outcome> {
    if s.strings.is_empty() {
        let p = read_presentation(&s.file)?;
        let r = p.validate_gentle();
        let mut text = format!("gentle: {}\n", if r.pass { "PASS" } else { "FAIL" });
        for v in &r.violations {
            text += &format!("  condition {}: {}\n", v.condition, v.witness);
        }
        return Ok(Outcome { json: json!({"schema": schema("gentle-check"), "gentle": r}), text, pass: r.pass });
    }
    let alg = load(&s.file)?;
    let tk = Toolkit::<F>::new(&alg)?;
    let args = summand_args(&alg, s)?;
    let mut words = only_strings(&args).ok_or_else(|| anyhow!(Error::Precondition("gentle-check takes string summands".into())))?;
    words.sort();
    words.dedup();
    let verdict = check_main_theorem(&tk, &words)?;
    let (line, pass) = match &verdict {
        Verdict::GentleConfirmed { stable_dim, .. } => (format!("PASS: stable End has dimension {stable_dim} and is gentle"), true),
        Verdict::ExtNonzero { from, to, dim, total } => {
            (format!("PASS (not applicable): dim Ext1({from}, {to}) = {dim}, total {total}"), true)
        }
        Verdict::NotGentle { report, .. } => (format!("FAIL: Ext1 vanishes but stable End is not gentle ({} violations)", report.violations.len()), false),
        Verdict::Inconclusive { reason } => (format!("FAIL: inconclusive ({reason})"), false),
    };
    let text = format!("{}: {line}\n", verdict.name());
    Ok(Outcome { json: json!({"schema": schema("gentle-check"), "field": F::name(), "verdict": verdict}), text, pass })
}

fn overlap<F: Field>(cli: &Cli, file: &Path, e: &str, parts: [&Option<String>; 4]) -> anyhow::Result<Outcome> {
    let alg = load(file)?;
    let tk = Toolkit::<F>::new(&alg)?;
    let e = string_from_literal(&alg, e)?;
    let parsed: Vec<Option<StringWord>> = parts
        .iter()
        .map(|p| p.as_deref().map(|t| string_from_literal(&alg, t)).transpose())
        .collect::<sbalg::Result<_>>()?;
    let [d1, f1, d2, f2] = [&parsed[0], &parsed[1], &parsed[2], &parsed[3]].map(|x| x.as_ref());
    let ses = overlap_extension::<F>(&alg, d1, &e, f1, d2, f2)?;
    let exact = verify_exact(&ses);
    let cert = tk.nonsplit_certificate(&ses)?;
    let q = alg.quiver();
    let names: Vec<String> = ses.strings.iter().flatten().map(|w| w.display(q)).collect();
    let mut text = format!(
        "0 -> M({}) -> M({}) + M({}) -> M({}) -> 0\ndimensions {} {} {}\nexact: {}\nnon-split: {:?}\n",
        names[0],
        names[1],
        names[2],
        names[3],
        ses.left.dim(),
        ses.middle.dim(),
        ses.right.dim(),
        if exact { "PASS" } else { "FAIL" },
        cert
    );
    let ext = tk.ext1(&ses.right, &ses.left)?.dim;
    text += &format!("dim Ext1(right, left) = {ext}\n");
    let mut json = json!({
        "schema": schema("overlap-ext"),
        "field": F::name(),
        "strings": names,
        "dimensions": [ses.left.dim(), ses.middle.dim(), ses.right.dim()],
        "exact": exact,
        "nonsplit": format!("{cert:?}"),
        "ext1_right_left": ext,
    });
    if cli.dump_module {
        json["sequence"] = ses.to_json(&alg);
        text += &format!("{}\n", serde_json::to_string_pretty(&json["sequence"]).expect("json"));
    }
    Ok(Outcome { json, text, pass: exact && cert.certified() && ext > 0 })
}

fn scan(cli: &Cli, args: &ScanArgs) -> anyhow::Result<Outcome> {
    let cfg = ScanConfig {
        seed: cli.seed,
        trials: args.trials,
        limits: args.limits.limits(),
        max_string_len: args.max_len,
        max_summands: args.max_summands,
        field: cli.field,
    };
    let report = theorem_scan(&cfg);
    let rendered = report.to_json();
    if let Some(path) = &args.report {
        std::fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))?;
    }
    let s = &report.summary;
    let mut text = format!("trials {}  errors {}\n", s.trials, s.errors);
    for (name, count) in &s.verdicts {
        text += &format!("  {name} {count}\n");
    }
    text += &format!(
        "counterexamples {}\ninconclusive {}\ngeneric stable bases {}\nbasis agreement failures {}\nmultiplicativity failures {}\ntwo-sided vanishing failures {}\n",
        s.counterexamples,
        s.inconclusive,
        s.generic_stable_bases,
        s.basis_agreement_failures,
        s.multiplicativity_failures,
        s.two_sided_vanishing_failures
    );
    text += &format!("{}\n", if report.clean() { "PASS" } else { "FAIL" });
    let json: Value = serde_json::from_str(&rendered)?;
    Ok(Outcome { json, text, pass: report.clean() })
}

fn generate(seed: u64, count: usize, out_dir: Option<&Path>, limits: &Limits) -> anyhow::Result<Outcome> {
    let mut text = String::new();
    let mut rows = Vec::new();
    for i in 0..count {
        let p = generate_random_sb(&mut trial_rng(seed, i as u64), limits)?;
        let body = format!("# generated: seed {seed}, index {i}\n{p}");
        if let Some(dir) = out_dir {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("gen_{seed}_{i:03}.sba"));
            std::fs::write(&path, &body).with_context(|| format!("writing {}", path.display()))?;
            text += &format!("{}\n", path.display());
        } else {
            text += &body;
            text.push('\n');
        }
        rows.push(json!({"index": i, "presentation": p.to_string()}));
    }
    Ok(Outcome::ok(json!({"schema": schema("generate"), "seed": seed, "presentations": rows}), text))
}
