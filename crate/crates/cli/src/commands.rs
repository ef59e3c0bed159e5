use std::path::Path;

use hecke_core::backends::{Dihedral, DihedralElement, Dyadic, FinitePair, FinitePairSpec, Sl2, Sl2Element};
use hecke_core::growth::{classify, sig6};
use hecke_core::json::{coset_function_from_json, hecke_element_from_json, hecke_element_to_json, parse_value};
use hecke_core::spherical::{counterexample_element, default_grid, scan_positivity, DomainPolicy, ScanReport};
use hecke_core::verify::{self, Suite, VerifyReport};
use hecke_core::{CosetFunction, Error, Hecke, HeckeElement, HeckePair, L1Norm, Rational};
use serde_json::{json, Value};

use crate::{
    AlgebraCommand, Cli, Command, Failure, Format, PairSelector, EXIT_BUDGET, EXIT_DOMAIN, EXIT_NO_CERTIFICATE,
    EXIT_PARSE, EXIT_VERIFY_FAILED,
};

pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// Backend-specific extras for the CLI.
trait CliPair: HeckePair + Sized {
    fn counterexample(_h: &Hecke<Self>) -> Result<CosetFunction<Self::Elem>, Failure> {
        Err(fail(EXIT_DOMAIN, "builtin:counterexample is only defined for sl2:<q>"))
    }

    /// A small integer label for the double coset, where the pair has one.
    fn coset_index(&self, _rep: &Self::Elem) -> Option<i64> {
        None
    }
}

impl CliPair for Dihedral {
    fn coset_index(&self, rep: &DihedralElement) -> Option<i64> {
        Some(rep.n)
    }
}

impl CliPair for Dyadic {}

impl CliPair for FinitePair {}

impl CliPair for Sl2 {
    fn counterexample(h: &Hecke<Self>) -> Result<CosetFunction<Sl2Element>, Failure> {
        Ok(counterexample_element(h)?)
    }

    fn coset_index(&self, rep: &Sl2Element) -> Option<i64> {
        Some(self.double_index(rep))
    }
}

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Verify { suite, trials } => run_verify(cli, suite, *trials),
        Command::SphericalScan { q, f, z_grid, expect_negative, allow_outside_domain } => {
            let q = match (q, &cli.pair) {
                (Some(q), _) => *q,
                (None, Some(PairSelector::Sl2(q))) => *q,
                _ => return Err(fail(EXIT_PARSE, "spherical-scan needs --q or --pair sl2:<q>")),
            };
            let policy = if *allow_outside_domain { DomainPolicy::AllowOutside } else { DomainPolicy::Enforce };
            let h = Hecke::with_budget(Sl2::new(q)?, cli.budget);
            run_scan(cli, &h, f, z_grid, *expect_negative, policy)
        }
        _ => match cli.pair.as_ref().ok_or_else(|| fail(EXIT_PARSE, "--pair is required for this command"))? {
            PairSelector::Finite(path) => {
                let spec = FinitePairSpec::from_file(path)?;
                let pair = FinitePair::load(spec)?;
                with_pair(cli, &Hecke::with_budget(pair, cli.budget))
            }
            PairSelector::Dihedral => with_pair(cli, &Hecke::with_budget(Dihedral, cli.budget)),
            PairSelector::Dyadic => with_pair(cli, &Hecke::with_budget(Dyadic, cli.budget)),
            PairSelector::Sl2(q) => with_pair(cli, &Hecke::with_budget(Sl2::new(*q)?, cli.budget)),
        },
    }
}

fn with_pair<B: CliPair>(cli: &Cli, h: &Hecke<B>) -> CmdResult {
    match &cli.command {
        Command::Classify { element } => classify_cmd(cli, h, element),
        Command::Algebra(sub) => algebra_cmd(cli, h, sub),
        Command::Growth { set, nmax, band, window } => growth_cmd(cli, h, set, *nmax, *band, *window),
        Command::Verify { .. } | Command::SphericalScan { .. } => unreachable!("dispatched in run"),
    }
}

/// Reads `arg` as a file when one exists at that path, else as inline JSON.
fn load_json(arg: &str) -> Result<Value, Failure> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    parse_value(&text).map_err(|e| fail(EXIT_PARSE, format!("{arg}: {e}")))
}

fn hecke_operand<B: CliPair>(h: &Hecke<B>, arg: &str) -> Result<HeckeElement<B::Elem>, Failure> {
    match arg {
        "builtin:unit" => Ok(h.unit()),
        "builtin:counterexample" => Err(fail(EXIT_DOMAIN, "builtin:counterexample is a coset function; use it with rinner")),
        _ => Ok(hecke_element_from_json(h, &load_json(arg)?)?),
    }
}

fn coset_operand<B: CliPair>(h: &Hecke<B>, arg: &str) -> Result<CosetFunction<B::Elem>, Failure> {
    match arg {
        "builtin:unit" => Ok(h.indicator(&h.backend().identity())?),
        "builtin:counterexample" => B::counterexample(h),
        _ => Ok(coset_function_from_json(h, &load_json(arg)?)?),
    }
}

fn render_json(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn classify_cmd<B: CliPair>(cli: &Cli, h: &Hecke<B>, element: &str) -> CmdResult {
    let g = h.backend().elem_from_json(&load_json(element)?)?;
    let d = h.canonical_double_coset(&g)?;
    let left = h.canonical_left_coset(&g)?;
    let (l, r) = h.coset_counts(&d)?;
    let delta = h.delta(&d)?;
    let b = h.backend();
    let mut fields: Vec<(&str, Value)> = vec![
        ("pair", json!(h.id().to_string())),
        ("coset", b.elem_to_json(d.rep())),
        ("left_coset", b.elem_to_json(left.rep())),
    ];
    if let Some(n) = b.coset_index(d.rep()) {
        fields.push(("n", json!(n)));
    }
    fields.push(("L", json!(l)));
    fields.push(("R", json!(r)));
    fields.push(("delta", json!(delta.to_string())));
    let text = match cli.output {
        Format::Json => render_json(&Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())),
        Format::Csv => {
            let header: Vec<_> = fields.iter().map(|(k, _)| k.to_string()).collect();
            let row: Vec<_> = fields.iter().map(|(_, v)| csv_field(&plain(v))).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
        Format::Table => fields.iter().map(|(k, v)| format!("{k:<10} {}\n", plain(v))).collect(),
    };
    Ok(Outcome::ok(text))
}

/// JSON value without quotes around plain strings.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn terms_text(cli: &Cli, v: &Value) -> String {
    let terms = v["terms"].as_array().cloned().unwrap_or_default();
    match cli.output {
        Format::Json => render_json(v),
        Format::Csv => {
            let mut out = String::from("coset,re,im\n");
            for t in &terms {
                out.push_str(&format!("{},{},{}\n", csv_field(&t["coset"].to_string()), plain(&t["re"]), plain(&t["im"])));
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for t in &terms {
                out.push_str(&format!("{:<32} {} + {}i\n", t["coset"].to_string(), plain(&t["re"]), plain(&t["im"])));
            }
            if terms.is_empty() {
                out.push_str("0\n");
            }
            out
        }
    }
}

fn algebra_cmd<B: CliPair>(cli: &Cli, h: &Hecke<B>, sub: &AlgebraCommand) -> CmdResult {
    let value = match sub {
        AlgebraCommand::Mul { left, right } => {
            let product = h.convolve(&hecke_operand(h, left)?, &hecke_operand(h, right)?)?;
            hecke_element_to_json(h, &product)
        }
        AlgebraCommand::Star { operand } => hecke_element_to_json(h, &h.star(&hecke_operand(h, operand)?)?),
        AlgebraCommand::Rinner { left, right } => {
            let inner = h.r_inner(&coset_operand(h, left)?, &coset_operand(h, right)?)?;
            hecke_element_to_json(h, &inner)
        }
        AlgebraCommand::Norm { operand } => {
            let norm = h.l1_norm(&hecke_operand(h, operand)?)?;
            let kind = match norm {
                L1Norm::Exact(_) => "exact",
                L1Norm::UpperBound(_) => "upper_bound",
            };
            let value = norm.value();
            let text = match cli.output {
                Format::Json => render_json(&json!({
                    "norm": value.to_string(),
                    "kind": kind,
                    "approx": sig6(value.to_f64()),
                })),
                Format::Csv => format!("norm,kind,approx\n{value},{kind},{}\n", sig6(value.to_f64())),
                Format::Table => format!("{value} ({kind}, ≈ {})\n", sig6(value.to_f64())),
            };
            return Ok(Outcome::ok(text));
        }
    };
    Ok(Outcome::ok(terms_text(cli, &value)))
}

fn parse_grid(q: u64, spec: &str) -> Result<Vec<Rational>, Failure> {
    let mut zs = vec![];
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if part == "default" {
            zs.extend(default_grid(q));
        } else {
            zs.push(part.parse::<Rational>().map_err(|e| fail(EXIT_PARSE, format!("z-grid: {e}")))?);
        }
    }
    zs.sort();
    zs.dedup();
    if zs.is_empty() {
        return Err(fail(EXIT_PARSE, "z-grid is empty"));
    }
    Ok(zs)
}

fn run_scan(
    cli: &Cli,
    h: &Hecke<Sl2>,
    f_arg: &str,
    grid: &str,
    expect_negative: bool,
    policy: DomainPolicy,
) -> CmdResult {
    let q = h.backend().q();
    let f = coset_operand(h, f_arg)?;
    let zs = parse_grid(q, grid)?;
    let report = scan_positivity(h, &f, &zs, policy)?;
    let text = scan_text(cli, h, &report);
    let code = if expect_negative && report.certificate.is_none() { EXIT_NO_CERTIFICATE } else { 0 };
    Ok(Outcome { text, code })
}

fn scan_text(cli: &Cli, h: &Hecke<Sl2>, report: &ScanReport) -> String {
    match cli.output {
        Format::Json => render_json(&report.to_json(h)),
        Format::Csv => {
            let mut out = String::from("z,value,admissible\n");
            for r in &report.rows {
                out.push_str(&format!("{},{},{}\n", r.z, r.value, r.admissible));
            }
            out
        }
        Format::Table => {
            let h_terms: Vec<String> = report.h.terms().map(|(m, c)| format!("{c}·e{m}")).collect();
            let mut out = format!("q = {}, <f,f>_R = {}\n", report.q, h_terms.join(" + "));
            out.push_str(&format!("{:>8} {:>14}\n", "z", "value"));
            for r in &report.rows {
                let note = if r.admissible { "" } else { "  (informational: outside domain)" };
                out.push_str(&format!("{:>8} {:>14}{note}\n", r.z.to_string(), r.value.to_string()));
            }
            match &report.certificate {
                Some(c) => out.push_str(&format!("certificate: z = {}, value = {} < 0: not R-positive\n", c.z, c.value)),
                None => out.push_str("no certificate\n"),
            }
            out
        }
    }
}

fn run_verify(cli: &Cli, suite: &str, trials: usize) -> CmdResult {
    let suite: Suite = suite.parse()?;
    let report: VerifyReport = verify::run(suite, trials, cli.seed)?;
    let text = match cli.output {
        Format::Json => render_json(&report.to_json()),
        Format::Csv => format!("# seed={}\n{}", report.seed, report.to_csv()),
        Format::Table => report.to_table(),
    };
    let code = if report.passed() { 0 } else { EXIT_VERIFY_FAILED };
    Ok(Outcome { text, code })
}

fn growth_cmd<B: CliPair>(cli: &Cli, h: &Hecke<B>, set: &str, nmax: u32, band: f64, window: usize) -> CmdResult {
    if nmax == 0 {
        return Err(fail(EXIT_PARSE, "--nmax must be positive"));
    }
    let value = load_json(set)?;
    let items = value
        .as_array()
        .ok_or_else(|| Failure::from(Error::Parse("--set must be a JSON array of elements".into())))?;
    let elems = items
        .iter()
        .map(|v| h.backend().elem_from_json(v))
        .collect::<Result<Vec<_>, _>>()?;
    if elems.is_empty() {
        return Err(fail(EXIT_DOMAIN, "--set must be nonempty"));
    }
    let a = h.coset_set_of(&elems)?;
    let report = h.growth_sequence(&a, nmax)?;
    let verdict = classify(&report, band, window);
    let text = match cli.output {
        Format::Json => render_json(&report.to_json(Some(&verdict))),
        Format::Csv => report.to_csv(),
        Format::Table => {
            let mut out = format!("{:>4} {:>6} {:>20} {:>10} {:>10}\n", "n", "size", "L", "root", "ratio");
            for (i, r) in report.rows.iter().enumerate() {
                out.push_str(&format!(
                    "{:>4} {:>6} {:>20} {:>10} {:>10}\n",
                    r.n,
                    r.size,
                    r.l,
                    report.root(i).map(sig6).unwrap_or_else(|| "-".into()),
                    report.ratio(i).map(sig6).unwrap_or_else(|| "-".into()),
                ));
            }
            if report.truncated {
                out.push_str("truncated: enumeration budget exceeded\n");
            }
            out.push_str(&format!(
                "heuristic classification: {} (band {}, window {})\n",
                verdict.label.as_str(),
                verdict.band,
                verdict.window
            ));
            out
        }
    };
    let code = if report.truncated { EXIT_BUDGET } else { 0 };
    Ok(Outcome { text, code })
}
