use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sugihara::admissibility::{
    b_cardinality, build_b_direct, build_b_recursive, build_b_via_duality, canonical_generators, decide,
    Mode, ValidityReport,
};
use sugihara::algebra::fmt_tuple;
use sugihara::congruence::congruences;
use sugihara::duality::{alter_ego, count_struct_morphisms, dual_space, power_structure};
use sugihara::parser::{parse_rule, parse_rules, rule_to_quasiequation, Rule, Style};
use sugihara::partial::{monoid_closure, partial_endos_bruteforce, standard_generators};
use sugihara::subalgebra::subalgebras;
use sugihara::testspace::{build_test_space, verify_join_irreducible, verify_ts_configuration};
use sugihara::{Error, FiniteAlgebra, SugiharaChain};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SIZE_BOUND: u8 = 3;
const EXIT_PARSE: u8 = 4;
const EXIT_IO: u8 = 5;

/// Rules tabulated by `table2`.
const TABLE2_RULES: [&str; 5] = [
    "p <-> ~p |- q <-> r",
    "p, ~p | q |- q",
    "p, (p -> abs(q)) -> (p -> q) |- p -> q",
    "q, p -> (q -> r) |- p -> r",
    "~abs(p) | q |- q",
];

const TABLE2_KS: [usize; 5] = [4, 5, 6, 7, 8];

#[derive(Parser)]
#[command(name = "sugihara", version, about = "Sugihara chains, their duals, and admissibility algebras")]
struct Cli {
    /// Print connectives as ¬ ∧ ∨ → ↔ ⊢ instead of ASCII.
    #[arg(long, global = true)]
    unicode: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Recursive,
    Duality,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckMode {
    Admissible,
    Derivable,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Carrier, subalgebras and congruences of Z_k.
    Algebra { k: usize },
    /// Generators of the partial endomorphism monoid of Z_k.
    Pez {
        k: usize,
        /// Compare the generated monoid with the brute-force one.
        #[arg(long)]
        verify: bool,
    },
    /// Dual space D(A) of an algebra in the quasivariety of Z_k.
    Dual {
        k: usize,
        /// `Zj` for the chain Z_j, or a JSON algebra file. Defaults to Z_k.
        #[arg(long)]
        of: Option<String>,
    },
    /// The test space Y_k.
    Testspace {
        k: usize,
        /// Check the TS-configuration and join-irreducibility.
        #[arg(long)]
        verify: bool,
    },
    /// The admissibility algebra B_k.
    Admalg {
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        /// Build B_k all three ways and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Decide the rules in a file.
    Check {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = CheckMode::Both)]
        mode: CheckMode,
    },
    /// Size of the s-generated free algebra, counted as morphisms of powers of the alter ego.
    Freecount { k: usize, s: usize },
    /// Cardinalities of free algebras, test spaces and admissibility algebras.
    Table1 {
        #[arg(long, default_value_t = 8)]
        max_k: usize,
    },
    /// Admissibility and derivability of a fixed list of rules.
    Table2,
}

struct Out {
    style: Style,
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out {
        style: if cli.unicode { Style::Unicode } else { Style::Ascii },
        format: cli.format,
    };
    match run(cli.command, &out) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::InvalidSize(_) => EXIT_USAGE,
                Error::SizeBound { .. } => EXIT_SIZE_BOUND,
                Error::Syntax { .. } | Error::Malformed(_) => EXIT_PARSE,
                _ => EXIT_FAILURE,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_FAILURE
}

fn run(cmd: Command, out: &Out) -> anyhow::Result<String> {
    match cmd {
        Command::Algebra { k } => algebra(k, out),
        Command::Pez { k, verify } => pez(k, verify, out),
        Command::Dual { k, of } => dual(k, of.as_deref(), out),
        Command::Testspace { k, verify } => testspace(k, verify, out),
        Command::Admalg { k, method, cross_check } => admalg(k, method, cross_check, out),
        Command::Check { file, k, mode } => check(&file, k, mode, out),
        Command::Freecount { k, s } => freecount(k, s, out),
        Command::Table1 { max_k } => table1(max_k, out),
        Command::Table2 => table2(out),
    }
}

fn json_text(v: Value) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn values_of(alg: &FiniteAlgebra) -> Vec<String> {
    alg.labels().iter().map(|t| scalar(t)).collect()
}

/// A one-coordinate tuple prints as its value.
fn scalar(t: &[i32]) -> String {
    if t.len() == 1 {
        t[0].to_string()
    } else {
        fmt_tuple(t)
    }
}

fn algebra(k: usize, out: &Out) -> anyhow::Result<String> {
    let z = SugiharaChain::new(k)?;
    let subs = subalgebras(&z);
    let cons = congruences(&z);
    let block_values =
        |b: &Vec<usize>| -> Vec<i32> { b.iter().map(|&i| z.value(i)).collect() };
    if out.format == Format::Json {
        return json_text(json!({
            "k": k,
            "carrier": z.values(),
            "subalgebras": subs.iter().map(|s| s.labels().into_iter().map(|t| t[0]).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "congruences": cons.iter().map(|c| json!({
                "m": c.m,
                "blocks": c.blocks().iter().map(block_values).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }));
    }
    let mut s = String::new();
    writeln!(s, "Z{k}: {}", z.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))?;
    writeln!(s, "subalgebras: {}", subs.len())?;
    for sub in &subs {
        writeln!(s, "  {{{}}}", values_of(sub).join(","))?;
    }
    writeln!(s, "congruences: {}", cons.len())?;
    for c in &cons {
        let blocks: Vec<String> = c
            .blocks()
            .iter()
            .map(|b| format!("{{{}}}", block_values(b).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        writeln!(s, "  ~{}: {}", c.m, blocks.join(" "))?;
    }
    Ok(s)
}

fn pez(k: usize, verify: bool, out: &Out) -> anyhow::Result<String> {
    let z = SugiharaChain::new(k)?;
    let gens = standard_generators(&z)?;
    let maps: Vec<_> = gens.iter().map(|g| g.map.clone()).collect();
    let closure = monoid_closure(&z, &maps)?;
    let brute = if verify { Some(partial_endos_bruteforce(&z)?) } else { None };
    let agrees = brute.as_ref().map(|b| b.elements == closure.elements);
    if out.format == Format::Json {
        return json_text(json!({
            "k": k,
            "generators": gens.iter().map(|g| json!({"name": g.name, "map": g.map.render(&z)})).collect::<Vec<_>>(),
            "generated": closure.len(),
            "brute_force": brute.as_ref().map(|b| b.len()),
            "agrees": agrees,
        }));
    }
    let mut s = String::new();
    writeln!(s, "generators of PEZ({k}): {}", gens.len())?;
    for g in &gens {
        writeln!(s, "  {g}")?;
    }
    writeln!(s, "generated monoid: {} element(s)", closure.len())?;
    if let (Some(b), Some(ok)) = (&brute, agrees) {
        writeln!(s, "brute force: {} element(s)", b.len())?;
        writeln!(s, "closure equals brute force: {}", yes_no(ok))?;
        if !ok {
            bail!("generated monoid differs from brute-force PEZ({k})");
        }
    }
    Ok(s)
}

fn load_algebra(k: usize, of: Option<&str>) -> anyhow::Result<FiniteAlgebra> {
    let spec = match of {
        None => return Ok(SugiharaChain::new(k)?.algebra().clone()),
        Some(spec) => spec,
    };
    if let Some(j) = spec.strip_prefix('Z').and_then(|j| j.parse::<usize>().ok()) {
        return Ok(SugiharaChain::new(j)?.algebra().clone());
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    Ok(FiniteAlgebra::from_json(&text)?)
}

fn dual(k: usize, of: Option<&str>, out: &Out) -> anyhow::Result<String> {
    let ego = alter_ego(k)?;
    let a = load_algebra(k, of)?;
    let d = dual_space(&a, &ego)?;
    if out.format == Format::Json {
        return json_text(serde_json::to_value(d.to_data())?);
    }
    Ok(d.render(&|i| format!("e{}", i + 1)))
}

fn testspace(k: usize, verify: bool, out: &Out) -> anyhow::Result<String> {
    let ts = build_test_space(k)?;
    let reports = if verify {
        Some((verify_ts_configuration(k)?, verify_join_irreducible(k)?))
    } else {
        None
    };
    if out.format == Format::Json {
        return json_text(json!({
            "k": k,
            "s": ts.s,
            "structure": ts.structure.to_data(),
            "bold": ts.bold_points(),
            "ts_configuration": reports.as_ref().map(|r| &r.0),
            "join_irreducible": reports.as_ref().map(|r| &r.1),
        }));
    }
    let mut s = ts.structure.render(&|i| format!("y{}", i + 1));
    let bold: Vec<String> = ts.bold_indices().iter().map(|&i| format!("y{}", i + 1)).collect();
    writeln!(s, "bold points: {}", bold.join(", "))?;
    if let Some((tsr, jir)) = &reports {
        writeln!(s, "nu embeds D(Z{k}): {}", yes_no(tsr.nu_embedding.is_none()))?;
        if let Some(v) = &tsr.nu_embedding {
            writeln!(s, "  {v}")?;
        }
        writeln!(s, "mu is a morphism: {}", yes_no(tsr.mu_morphism.is_none()))?;
        if let Some(v) = &tsr.mu_morphism {
            writeln!(s, "  {v}")?;
        }
        writeln!(s, "mu is onto: {}", yes_no(tsr.mu_surjective))?;
        writeln!(
            s,
            "endomorphisms: {}, hitting the top: {}, all identity: {}",
            jir.endomorphisms,
            jir.hitting_top,
            yes_no(jir.hitting_top_are_identity)
        )?;
        writeln!(s, "bold points generate: {}", yes_no(jir.bold_points_generate))?;
        if !tsr.holds() || !jir.holds() {
            bail!("test space certificates failed for k = {k}");
        }
    }
    Ok(s)
}

fn admalg(k: usize, method: Method, cross_check: bool, out: &Out) -> anyhow::Result<String> {
    SugiharaChain::new(k)?;
    let build = |m: Method| -> anyhow::Result<FiniteAlgebra> {
        Ok(match m {
            Method::Direct => build_b_direct(k)?,
            Method::Recursive => build_b_recursive(k)?,
            Method::Duality => {
                let d = build_b_via_duality(k)?;
                if !d.t_injective || !d.t_homomorphism {
                    bail!("t : E(Y{k}) -> Z{k}^s is not an embedding");
                }
                d.image
            }
        })
    };
    let b = build(method)?;
    let gens = canonical_generators(k)?;
    let mut agreement = None;
    if cross_check {
        let mut carriers = Vec::new();
        for m in [Method::Direct, Method::Recursive, Method::Duality] {
            let mut labels = build(m)?.labels();
            labels.sort();
            carriers.push(labels);
        }
        agreement = Some(carriers.windows(2).all(|w| w[0] == w[1]));
    }
    if out.format == Format::Json {
        return json_text(json!({
            "k": k,
            "size": b.size(),
            "closed_form": b_cardinality(k).to_string(),
            "carrier": b.labels(),
            "generators": gens,
            "constructions_agree": agreement,
        }));
    }
    let mut s = String::new();
    for t in b.labels() {
        writeln!(s, "{}", fmt_tuple(&t))?;
    }
    writeln!(
        s,
        "generators: {}",
        gens.iter().map(|g| fmt_tuple(g)).collect::<Vec<_>>().join(" ")
    )?;
    writeln!(s, "|B_{k}| = {}", b.size())?;
    if let Some(ok) = agreement {
        writeln!(s, "direct, recursive and duality constructions agree: {}", yes_no(ok))?;
        if !ok {
            bail!("constructions of B_{k} disagree");
        }
    }
    Ok(s)
}

fn modes(mode: CheckMode) -> Vec<Mode> {
    match mode {
        CheckMode::Admissible => vec![Mode::Admissible],
        CheckMode::Derivable => vec![Mode::Derivable],
        CheckMode::Both => vec![Mode::Admissible, Mode::Derivable],
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Admissible => "admissible",
        Mode::Derivable => "derivable",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn report_json(m: Mode, r: &ValidityReport) -> Value {
    json!({
        "mode": mode_name(m),
        "algebra": r.algebra,
        "verdict": if r.is_valid() { "yes" } else { "no" },
        "countermodel": r.countermodel.as_ref().map(|cm| {
            cm.iter().map(|(v, t)| (v.clone(), json!(t))).collect::<serde_json::Map<_, _>>()
        }),
    })
}

fn check(file: &PathBuf, k: usize, mode: CheckMode, out: &Out) -> anyhow::Result<String> {
    SugiharaChain::new(k)?;
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let rules = parse_rules(&text).with_context(|| format!("parsing {}", file.display()))?;
    let mut results: Vec<(Rule, Vec<(Mode, ValidityReport)>)> = Vec::new();
    for rule in rules {
        let q = rule_to_quasiequation(&rule);
        let mut reports = Vec::new();
        for m in modes(mode) {
            reports.push((m, decide(&q, k, m)?));
        }
        results.push((rule, reports));
    }
    if out.format == Format::Json {
        return json_text(json!({
            "k": k,
            "rules": results.iter().map(|(rule, reports)| json!({
                "line": rule.line,
                "rule": rule.render(out.style),
                "results": reports.iter().map(|(m, r)| report_json(*m, r)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }));
    }
    let mut s = String::new();
    for (rule, reports) in &results {
        writeln!(s, "{}", rule.render(out.style))?;
        for (m, r) in reports {
            writeln!(s, "  {} in {}: {}", mode_name(*m), r.algebra, yes_no(r.is_valid()))?;
            if let Some(cm) = &r.countermodel {
                for (v, t) in cm {
                    writeln!(s, "    {v} = {}", scalar(t))?;
                }
            }
        }
    }
    Ok(s)
}

fn freecount(k: usize, s: usize, out: &Out) -> anyhow::Result<String> {
    let ego = alter_ego(k)?;
    let power = power_structure(&ego, s)?;
    let count = count_struct_morphisms(&power, &ego.structure())?;
    if out.format == Format::Json {
        return json_text(json!({ "k": k, "s": s, "count": count }));
    }
    Ok(format!("{count}\n"))
}

/// Largest k whose free algebra is counted by `table1`.
const TABLE1_FREE_MAX_K: usize = 4;

fn table1(max_k: usize, out: &Out) -> anyhow::Result<String> {
    if max_k < 2 {
        return Err(Error::InvalidSize(format!("--max-k {max_k} is below 2")).into());
    }
    let mut rows = Vec::new();
    for k in 2..=max_k {
        let ts = build_test_space(k)?;
        let free = if k <= TABLE1_FREE_MAX_K {
            let ego = alter_ego(k)?;
            Some(count_struct_morphisms(&power_structure(&ego, ts.s)?, &ego.structure())?)
        } else {
            None
        };
        let e_of_y = build_b_via_duality(k)?.e_of_y.size();
        rows.push((k, ts.s, free, ts.len(), e_of_y));
    }
    if out.format == Format::Json {
        return json_text(json!(rows
            .iter()
            .map(|(k, s, f, y, e)| json!({"k": k, "s": s, "free": f, "test_space": y, "admissibility_algebra": e}))
            .collect::<Vec<_>>()));
    }
    let mut s = String::new();
    writeln!(s, "{:>3} {:>3} {:>12} {:>6} {:>6}", "k", "s", "|F(s)|", "|Y_k|", "|E(Y)|")?;
    for (k, sv, f, y, e) in rows {
        let f = f.map_or("-".to_string(), |f| f.to_string());
        writeln!(s, "{k:>3} {sv:>3} {f:>12} {y:>6} {e:>6}")?;
    }
    Ok(s)
}

fn table2(out: &Out) -> anyhow::Result<String> {
    let mut rows = Vec::new();
    for text in TABLE2_RULES {
        let rule = parse_rule(text)?;
        let q = rule_to_quasiequation(&rule);
        let mut cells = Vec::new();
        for k in TABLE2_KS {
            let adm = decide(&q, k, Mode::Admissible)?.is_valid();
            let der = decide(&q, k, Mode::Derivable)?.is_valid();
            cells.push((k, adm, der));
        }
        rows.push((rule, cells));
    }
    if out.format == Format::Json {
        return json_text(json!(rows
            .iter()
            .map(|(rule, cells)| json!({
                "rule": rule.render(out.style),
                "results": cells.iter().map(|(k, a, d)| json!({"k": k, "admissible": a, "derivable": d})).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>()));
    }
    let (yes, no) = if out.style == Style::Unicode { ("✓", "×") } else { ("y", "n") };
    let mark = |b: bool| if b { yes } else { no };
    let width = rows
        .iter()
        .map(|(r, _)| r.render(out.style).chars().count())
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    writeln!(s, "admissible (valid on B_k) / derivable (valid on Z_k)")?;
    let head: Vec<String> = TABLE2_KS.iter().map(|k| format!("k={k:<2}")).collect();
    writeln!(s, "{:width$}  {}  even odd", "rule", head.join(" "))?;
    let mut uneven = 0;
    for (rule, cells) in &rows {
        let text = rule.render(out.style);
        let pad = width - text.chars().count();
        let cols: Vec<String> = cells.iter().map(|(_, a, d)| format!("{}/{}  ", mark(*a), mark(*d))).collect();
        let mut parity = |odd: bool| -> String {
            let adm: Vec<bool> = cells.iter().filter(|c| c.0 % 2 == usize::from(odd)).map(|c| c.1).collect();
            if adm.iter().all(|&a| a == adm[0]) {
                mark(adm[0]).to_string()
            } else {
                uneven += 1;
                "?".to_string()
            }
        };
        let (even, odd) = (parity(false), parity(true));
        writeln!(s, "{text}{}  {}  {even:<4} {odd}", " ".repeat(pad), cols.join(" ").trim_end())?;
    }
    if uneven > 0 {
        writeln!(s, "admissibility differs between k of the same parity for {uneven} rule(s)")?;
    }
    Ok(s)
}
