//! Command-line front end. [`run`] is the whole program; the binary only
//! forwards its arguments and exit code.
//!
//! Exit codes: 0 success, 1 usage error, 2 load error, 3 query error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::assertion::{parse_database, Assertion, Term};
use crate::cycextract::{event_census, extract_all, parse_event_list, parse_forms};
use crate::diagnostics::SourcedDiagnostic;
use crate::error::Error;
use crate::fixtures;
use crate::grid;
use crate::kb::{KbBuilder, KnowledgeBase, Loaded};
use crate::ontology::{Language, ROOT};
use crate::qa::{answer, parse_question};
use crate::recognizer::{recognize, ScoreOptions};
use crate::script::{
    build_script, inherited_field, is_script, timeline, validate, EventGroup, Finding, ScalarField, Script,
    DEFAULT_UNROLL,
};
use crate::stats::{census, render_text, summary, write_csv, REPORTED};

/// Environment variable with default knowledge-base files, separated like
/// `PATH`.
pub const KB_ENV: &str = "SCRIPTBASE_KB";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_LOAD: i32 = 2;
pub const EXIT_QUERY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "scriptbase",
    version,
    about = "Query a knowledge base of commonsense scripts",
    arg_required_else_help = true
)]
struct Cli {
    /// Knowledge-base file; repeat to merge several in order.
    #[arg(long = "kb", global = true, value_name = "FILE")]
    kb: Vec<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check files and print their diagnostics.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Show a script, or the assertions about any other concept.
    Show { concept: String },
    /// Print the event sequence of a script.
    Timeline {
        script: String,
        /// Maximum number of `goto` jumps to follow.
        #[arg(long, default_value_t = DEFAULT_UNROLL)]
        unroll: usize,
    },
    /// Rank the scripts a piece of text is about.
    Recognize {
        text: String,
        /// Only count exact mentions.
        #[arg(long)]
        no_generalize: bool,
        #[arg(long, default_value = "en")]
        lang: Language,
    },
    /// Answer a question such as "How much does a filling cost?".
    Ask { question: String },
    /// Per-script census and averages.
    Stats {
        #[arg(long)]
        csv: bool,
    },
    /// Print a grid, or the object at one cell.
    Grid {
        name: String,
        /// Zero-based `col,row`.
        #[arg(long, value_parser = parse_cell)]
        at: Option<(usize, usize)>,
    },
    /// Extract subevent, role and place tuples from s-expression rules.
    CycExtract {
        file: PathBuf,
        /// Event names, one per line.
        #[arg(long)]
        events: Option<PathBuf>,
    },
}

fn parse_cell(s: &str) -> Result<(usize, usize), String> {
    let (c, r) = s.split_once(',').ok_or_else(|| format!("expected `col,row`, got `{s}`"))?;
    let num = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    Ok((num(c)?, num(r)?))
}

/// Outcome of a command: text for stdout, text for stderr, exit code.
struct Output {
    out: String,
    err: String,
    code: i32,
}

impl Output {
    fn ok(out: String) -> Self {
        Output { out, err: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, err: impl std::fmt::Display) -> Self {
        Output { out: String::new(), err: format!("error: {err}\n"), code }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn render_diagnostics(diags: &[SourcedDiagnostic]) -> String {
    diags.iter().map(|d| format!("{d}\n")).collect()
}

fn kb_paths(cli: &Cli) -> Vec<PathBuf> {
    if !cli.kb.is_empty() {
        return cli.kb.clone();
    }
    match std::env::var_os(KB_ENV) {
        Some(v) if !v.is_empty() => std::env::split_paths(&v).collect(),
        _ => Vec::new(),
    }
}

fn load(cli: &Cli) -> Result<Loaded, Output> {
    let paths = kb_paths(cli);
    let loaded = if paths.is_empty() {
        fixtures::load()
    } else {
        let mut builder = KbBuilder::new();
        for p in &paths {
            if let Err(e) = builder.add_file(p) {
                return Err(Output::fail(EXIT_LOAD, format!("{}: {e}", p.display())));
            }
        }
        builder.build()
    };
    if loaded.has_errors() {
        return Err(Output { out: String::new(), err: render_diagnostics(&loaded.diagnostics), code: EXIT_LOAD });
    }
    Ok(loaded)
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Output { out: String::new(), err: text, code }
            } else {
                Output { out: text, err: String::new(), code }
            }
        }
    };
    // Nothing useful can be done if the streams are closed.
    let _ = out.write_all(result.out.as_bytes());
    let _ = err.write_all(result.err.as_bytes());
    result.code
}

fn dispatch(cli: &Cli) -> Output {
    if let Command::Validate { files } = &cli.command {
        return cmd_validate(files, cli.json);
    }
    if let Command::CycExtract { file, events } = &cli.command {
        return cmd_cyc_extract(file, events.as_ref(), cli.json);
    }
    let loaded = match load(cli) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let kb = &loaded.kb;
    let mut result = match &cli.command {
        Command::Show { concept } => cmd_show(kb, concept, cli.json),
        Command::Timeline { script, unroll } => cmd_timeline(kb, script, *unroll, cli.json),
        Command::Recognize { text, no_generalize, lang } => {
            let options = ScoreOptions { generalization: !no_generalize, ..ScoreOptions::default() };
            let results = recognize(text, *lang, kb, options);
            if cli.json {
                Output::ok(to_json(&results))
            } else {
                Output::ok(results.iter().map(|r| format!("{r}\n")).collect())
            }
        }
        Command::Ask { question } => match parse_question(kb, question).and_then(|q| answer(kb, &q)) {
            Ok(a) if cli.json => Output::ok(to_json(&a)),
            Ok(a) => Output::ok(a.to_string()),
            Err(e) => Output::fail(EXIT_QUERY, e),
        },
        Command::Stats { csv } => cmd_stats(kb, *csv, cli.json),
        Command::Grid { name, at } => cmd_grid(kb, name, *at, cli.json),
        Command::Validate { .. } | Command::CycExtract { .. } => unreachable!("handled above"),
    };
    // User files get a warning count on stderr; `validate` lists them.
    let warnings = loaded.diagnostics.len();
    if warnings > 0 && !kb_paths(cli).is_empty() {
        result.err.insert_str(0, &format!("{warnings} warning(s) while loading; run `validate` for details\n"));
    }
    result
}

fn cmd_validate(files: &[PathBuf], json: bool) -> Output {
    let mut builder = KbBuilder::new();
    for f in files {
        let text = match std::fs::read_to_string(f) {
            Ok(t) => t,
            Err(e) => return Output::fail(EXIT_LOAD, format!("{}: {e}", f.display())),
        };
        builder.add_parsed(&f.display().to_string(), parse_database(&text));
    }
    let loaded = builder.build();
    let findings: Vec<(String, Vec<Finding>)> = loaded
        .kb
        .script_concepts()
        .into_iter()
        .filter_map(|s| {
            let script = build_script(&loaded.kb, s).ok()?;
            let mut found = script.build_findings.clone();
            found.extend(validate(&loaded.kb, &script));
            Some((s.to_string(), found))
        })
        .filter(|(_, f)| !f.is_empty())
        .collect();
    let code = if loaded.has_errors() { EXIT_LOAD } else { EXIT_OK };
    let out = if json {
        let findings: Vec<_> = findings.iter().map(|(s, f)| json!({"script": s, "findings": f})).collect();
        to_json(&json!({"diagnostics": loaded.diagnostics, "findings": findings}))
    } else {
        let mut s = render_diagnostics(&loaded.diagnostics);
        for (script, found) in &findings {
            for f in found {
                let _ = writeln!(s, "{script}: {f}");
            }
        }
        let errors = loaded.diagnostics.iter().filter(|d| d.diagnostic.is_error()).count();
        let _ = writeln!(s, "{} file(s), {} diagnostic(s), {errors} error(s)", files.len(), loaded.diagnostics.len());
        s
    };
    Output { out, err: String::new(), code }
}

fn join_terms(terms: &[Term]) -> String {
    terms.iter().map(Term::to_string).collect::<Vec<_>>().join(" ; ")
}

fn render_group(g: &EventGroup) -> String {
    let mut parts: Vec<String> = g.events.iter().map(Term::to_string).collect();
    if let Some(t) = g.goto_target {
        parts.push(format!("goto {t:02}"));
    }
    format!("{:02}: {}", g.index, parts.join(" ; "))
}

fn render_script(kb: &KnowledgeBase, s: &Script) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "script {}", s.concept);
    if let Ok(parents) = kb.ontology().parents(&s.concept) {
        let _ = writeln!(out, "ako: {}", parents.join(", "));
    }
    let _ = writeln!(out, "roles:");
    for (n, r) in &s.roles {
        match s.role_scripts.get(n) {
            Some(v) => writeln!(out, "  {n:02} {r} (script {v})"),
            None => writeln!(out, "  {n:02} {r}"),
        }
        .ok();
    }
    let _ = writeln!(out, "events:");
    for g in &s.events {
        let _ = writeln!(out, "  {}", render_group(g));
    }
    let list = |out: &mut String, name: &str, items: &[Assertion]| {
        for a in items {
            let _ = writeln!(out, "{name}: {a}");
        }
    };
    list(&mut out, "entry-condition", &s.entry_conditions);
    list(&mut out, "result", &s.results);
    list(&mut out, "goal", &s.goals);
    list(&mut out, "emotion", &s.emotions);
    let fields = [
        ("places", ScalarField::Places),
        ("duration", ScalarField::Duration),
        ("period", ScalarField::Period),
        ("cost", ScalarField::Cost),
    ];
    for (name, field) in fields {
        if let Ok(Some(v)) = inherited_field(kb, &s.concept, field) {
            let value = match &v.value {
                crate::script::FieldValue::Measure(m) => m.to_string(),
                crate::script::FieldValue::Places(p) => p.join(", "),
            };
            match &v.provenance {
                crate::script::Provenance::Own => writeln!(out, "{name}: {value}"),
                crate::script::Provenance::InheritedFrom(a) => writeln!(out, "{name}: {value} (from {a})"),
            }
            .ok();
        }
    }
    out
}

fn cmd_show(kb: &KnowledgeBase, concept: &str, json: bool) -> Output {
    if !kb.contains(concept) {
        return Output::fail(EXIT_QUERY, Error::UnknownConcept(concept.to_string()));
    }
    if is_script(kb, concept).unwrap_or(false) {
        return match build_script(kb, concept) {
            Ok(s) if json => Output::ok(to_json(&s)),
            Ok(s) => Output::ok(render_script(kb, &s)),
            Err(e) => Output::fail(EXIT_QUERY, e),
        };
    }
    let parents = kb.ontology().parents(concept).unwrap_or_default();
    let assertions: Vec<&Assertion> = kb.assertions_about(concept).collect();
    let lexicon: Vec<(Language, Vec<&str>)> = Language::ALL
        .into_iter()
        .map(|l| (l, kb.ontology().lexemes_of(concept, l).unwrap_or_default()))
        .filter(|(_, p)| !p.is_empty())
        .collect();
    if json {
        let lex: serde_json::Map<String, serde_json::Value> =
            lexicon.iter().map(|(l, p)| (l.to_string(), json!(p))).collect();
        return Output::ok(to_json(&json!({
            "concept": concept,
            "ako": parents,
            "lexicon": lex,
            "assertions": assertions,
        })));
    }
    let mut out = format!("concept {concept}\n");
    if concept != ROOT {
        let _ = writeln!(out, "ako: {}", parents.join(", "));
    }
    for (l, phrases) in &lexicon {
        let _ = writeln!(out, "[{l}] {}", phrases.join(", "));
    }
    for a in assertions {
        let _ = writeln!(out, "{a}");
    }
    Output::ok(out)
}

fn cmd_timeline(kb: &KnowledgeBase, name: &str, unroll: usize, json: bool) -> Output {
    let groups = build_script(kb, name).and_then(|s| {
        if s.events.is_empty() {
            return Err(Error::NotAScript(name.to_string()));
        }
        timeline(&s, unroll)
    });
    match groups {
        Ok(g) if json => Output::ok(to_json(&g)),
        Ok(g) => Output::ok(
            g.iter()
                .enumerate()
                .map(|(i, g)| format!("{:>3}  {:02}  {}\n", i + 1, g.index, join_terms(&g.events)))
                .collect(),
        ),
        Err(e) => Output::fail(EXIT_QUERY, e),
    }
}

fn cmd_stats(kb: &KnowledgeBase, csv: bool, json: bool) -> Output {
    let rows = census(kb);
    let local = match summary(kb) {
        Ok(s) => s,
        Err(e) => return Output::fail(EXIT_QUERY, e),
    };
    if json {
        let reported: Vec<_> = REPORTED
            .iter()
            .map(|(name, scripts, s, r, p, o)| {
                json!({"name": name, "scripts": scripts, "avg_subevents": s, "avg_roles": r, "avg_places": p, "avg_other": o})
            })
            .collect();
        return Output::ok(to_json(&json!({"census": rows, "summary": local, "reported": reported})));
    }
    if csv {
        let mut buf = Vec::new();
        if let Err(e) = write_csv(&mut buf, &rows, &local) {
            return Output::fail(EXIT_QUERY, e);
        }
        return Output::ok(String::from_utf8(buf).expect("csv output is utf-8"));
    }
    Output::ok(render_text(&rows, &local))
}

fn cmd_grid(kb: &KnowledgeBase, name: &str, at: Option<(usize, usize)>, json: bool) -> Output {
    let Some(g) = kb.grid(name) else {
        return Output::fail(EXIT_QUERY, format!("no grid named `{name}`"));
    };
    match at {
        None if json => Output::ok(to_json(g)),
        None => Output::ok(grid::render(g)),
        Some((col, row)) => match (g.cell(col, row), g.object_at(col, row)) {
            (Ok(cell), Ok(object)) if json => {
                Output::ok(to_json(&json!({"col": col, "row": row, "cell": cell.to_string(), "concept": object})))
            }
            (Ok(cell), Ok(object)) => Output::ok(format!("({col}, {row}) `{cell}` {}\n", object.unwrap_or("empty"))),
            (Err(e), _) | (_, Err(e)) => Output::fail(EXIT_QUERY, e),
        },
    }
}

fn cmd_cyc_extract(file: &PathBuf, events: Option<&PathBuf>, json: bool) -> Output {
    let read =
        |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| Output::fail(EXIT_LOAD, format!("{}: {e}", p.display())));
    let text = match read(file) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let known: BTreeSet<String> = match events.map(read) {
        Some(Ok(t)) => parse_event_list(&t),
        Some(Err(o)) => return o,
        None => BTreeSet::new(),
    };
    let parsed = parse_forms(&text);
    let source = file.display().to_string();
    if !parsed.diagnostics.is_empty() {
        let err: String = parsed.diagnostics.iter().map(|d| format!("{}\n", d.render(&source))).collect();
        return Output { out: String::new(), err, code: EXIT_LOAD };
    }
    let tuples = extract_all(&parsed.forms, &known);
    let census = event_census(&tuples);
    let mut lines: Vec<String> = tuples.iter().map(ToString::to_string).collect();
    lines.sort();
    if json {
        return Output::ok(to_json(&json!({"tuples": lines, "census": census})));
    }
    let mut out: String = lines.iter().map(|l| format!("{l}\n")).collect();
    out.push('\n');
    match &census.summary {
        Some(s) => out.push_str(&render_text(&census.rows, s)),
        None => out.push_str("no event has a subEvents tuple\n"),
    }
    Output::ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("scriptbase").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn no_arguments_is_usage_error() {
        let (code, out, err) = run_args(&[]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("Usage"), "{err}");
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("recognize"));
    }

    #[test]
    fn bad_cell_is_usage_error() {
        let (code, _, err) = run_args(&["grid", "hotel-room1", "--at", "x"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
    }

    #[test]
    fn missing_kb_file_is_load_error() {
        let (code, _, err) = run_args(&["--kb", "/nonexistent/x.tt", "stats"]);
        assert_eq!(code, EXIT_LOAD);
        assert!(err.contains("/nonexistent/x.tt"));
    }

    #[test]
    fn query_errors() {
        assert_eq!(run_args(&["show", "no-such-concept"]).0, EXIT_QUERY);
        assert_eq!(run_args(&["ask", "Why?"]).0, EXIT_QUERY);
        assert_eq!(run_args(&["grid", "hotel-room1", "--at", "99,0"]).0, EXIT_QUERY);
    }
}
