use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use vshs::amodel::InstantonTable;
use vshs::picard_fuchs::{bmodel_pipeline, companion_vhs, frobenius_solve, mirror_map_frobenius, parse_pf, PFOperator};
use vshs::vshs::{
    canonical_coordinate, from_normal_form, geometric_to_rees, hodge_tate_split, rees_to_geometric, rescale_coordinate,
    to_normal_form, verify_prevhs, yukawa_dn, yukawa_geometric, BasisMode, DnObject, GeometricVHS, NormalFormReport,
    ReesModule,
};
use vshs::{CheckReport, Scalar, Series, SeriesMatrix};

#[derive(Parser)]
#[command(
    name = "vshs",
    version,
    about = "Exact normal forms, mirror maps and instanton numbers from Picard-Fuchs data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mirror map, Yukawa coupling and instanton numbers of a Picard-Fuchs operator.
    Pipeline(Opts),
    /// Mirror map by the Frobenius route and by the canonical coordinate.
    MirrorMap(Opts),
    /// Yukawa coupling in the canonical coordinate.
    Yukawa(Opts),
    /// Instanton numbers of a Picard-Fuchs operator.
    Instantons(Opts),
    /// Normal form of a Picard-Fuchs operator, geometric VHS or Rees module.
    NormalForm(Opts),
    /// Runs every invariant check on the input object.
    Check(Opts),
    /// Normal form to Rees module and back, or Rees module to bundle and back.
    ReesRoundtrip(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    /// Operator file (JSON or text) or a JSON object file.
    #[arg(long)]
    input: PathBuf,
    /// Truncation order: results are exact mod q^order.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(2..))]
    order: u32,
    /// Leading Yukawa value, an exact rational or Gaussian rational.
    #[arg(long, default_value = "5")]
    volume: String,
    /// Substitutes Q -> sign*Q in the final answer.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true, value_parser = parse_sign)]
    sign: i8,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also print k-digit decimal approximations (table output only).
    #[arg(long, value_name = "K")]
    decimal: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("sign must be +1 or -1, got `{s}`")),
    }
}

enum Failure {
    Input(String),
    Invalid(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl From<vshs::Error> for Failure {
    fn from(e: vshs::Error) -> Self {
        match e {
            vshs::Error::Parse(_) => Failure::Input(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

enum Input {
    Pf(PFOperator),
    Dn(DnObject),
    Geometric(GeometricVHS),
    Rees(ReesModule),
}

impl Input {
    fn kind(&self) -> &'static str {
        match self {
            Input::Pf(_) => "Picard-Fuchs operator",
            Input::Dn(_) => "normal form",
            Input::Geometric(_) => "geometric VHS",
            Input::Rees(_) => "Rees module",
        }
    }
}

fn load(path: &PathBuf, order: usize) -> Res<Input> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let trimmed = text.trim_start();
    if !trimmed.starts_with('{') {
        return Ok(Input::Pf(parse_pf(trimmed)?));
    }
    let v: Value = serde_json::from_str(trimmed).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let has = |k: &str| v.get(k).is_some();
    let bad = |e: serde_json::Error| Failure::Input(format!("{}: {e}", path.display()));
    if has("coeffs") {
        Ok(Input::Pf(parse_pf(trimmed)?))
    } else if has("pairing0") {
        let d: DnObject = serde_json::from_value(v).map_err(bad)?;
        Ok(Input::Dn(truncate_dn(d, order)))
    } else if has("conn_u") {
        let r: ReesModule = serde_json::from_value(v).map_err(bad)?;
        Ok(Input::Rees(truncate_rees(r, order)))
    } else if has("conn") {
        let g: GeometricVHS = serde_json::from_value(v).map_err(bad)?;
        Ok(Input::Geometric(truncate_geometric(g, order)))
    } else {
        Err(Failure::Input(format!(
            "{}: unrecognized object (expected keys coeffs, pairing0, conn or conn_u)",
            path.display()
        )))
    }
}

fn truncate_dn(d: DnObject, order: usize) -> DnObject {
    if order < d.order() {
        d.truncate(order)
    } else {
        d
    }
}

fn truncate_geometric(mut g: GeometricVHS, order: usize) -> GeometricVHS {
    let order = order.min(g.order());
    g.conn = g.conn.truncate(order);
    g.pairing = g.pairing.map(|m| m.truncate(order.min(m.order())));
    g
}

fn truncate_rees(mut r: ReesModule, order: usize) -> ReesModule {
    let order = order.min(r.order());
    for m in r.conn_u.values_mut() {
        *m = m.truncate(order);
    }
    if let Some(p) = r.pairing_u.as_mut() {
        for m in p.values_mut() {
            *m = m.truncate(order);
        }
    }
    r
}

fn volume(opts: &Opts) -> Res<Scalar> {
    let v: Scalar = opts.volume.parse().map_err(|e: vshs::error::ParseScalarError| Failure::Input(e.to_string()))?;
    if v.is_zero() {
        return Err(Failure::Invalid("volume must be nonzero".into()));
    }
    Ok(v)
}

fn wrong_input(cmd: &str, input: &Input) -> Failure {
    Failure::Invalid(format!("`{cmd}` does not accept a {}", input.kind()))
}

/// What a command produced: a text table, its JSON form, and whether every
/// requested check passed.
struct Output {
    table: String,
    json: Value,
    ok: bool,
}

fn series_line(out: &mut String, label: &str, s: &Series, decimal: Option<usize>) {
    let _ = writeln!(out, "{label} = {s}");
    if let Some(k) = decimal {
        let approx: Vec<String> = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*q^{i}", c.to_decimal_string(k)))
            .collect();
        let _ = writeln!(out, "{label} (approx) = {}", approx.join(" + "));
    }
}

fn instanton_table(out: &mut String, t: &InstantonTable, decimal: Option<usize>) {
    let _ = writeln!(out, "{:>4} | n_d", "d");
    for (d, n) in &t.entries {
        match decimal {
            Some(k) if !n.is_integer() => {
                let _ = writeln!(out, "{d:>4} | {n} (approx {})", n.to_decimal_string(k));
            }
            _ => {
                let _ = writeln!(out, "{d:>4} | {n}");
            }
        }
    }
}

fn matrix_lines(out: &mut String, label: &str, m: &SeriesMatrix) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.entry(i, j);
            if !e.is_zero() {
                let _ = writeln!(out, "{label}[{i}][{j}] = {e}");
            }
        }
    }
}

fn dn_table(out: &mut String, d: &DnObject) {
    let _ = writeln!(out, "n = {}", d.n);
    let _ = writeln!(out, "degrees = {:?}", d.degrees);
    for i in 0..d.rank() {
        let row: Vec<String> = d.pairing0.row(i).iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "pairing[{i}] = [{}]", row.join(", "));
    }
    matrix_lines(out, "A", &d.a);
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn pipeline(opts: &Opts, input: &Input, order: usize) -> Res<Output> {
    let Input::Pf(l) = input else { return Err(wrong_input("pipeline", input)) };
    let vol = volume(opts)?;
    let res = bmodel_pipeline(l, &vol, order, opts.sign)?;
    let mut t = String::new();
    let _ = writeln!(t, "exact mod q^{order}, volume {vol}, sign {:+}", opts.sign);
    series_line(&mut t, "Q(q)", &res.report.mirror_coordinate, opts.decimal);
    series_line(&mut t, "q(Q)", &res.report.inverse_coordinate, opts.decimal);
    series_line(&mut t, "yukawa(Q)", &res.yukawa, opts.decimal);
    if let Some(g) = &res.g {
        series_line(&mut t, "g(Q)", g, opts.decimal);
    }
    if let Some(table) = &res.instantons {
        instanton_table(&mut t, table, opts.decimal);
    }
    let json = json!({
        "order": order,
        "volume": vol,
        "sign": opts.sign,
        "mirror_map": res.report.mirror_coordinate,
        "inverse_mirror_map": res.report.inverse_coordinate,
        "yukawa": res.yukawa,
        "g": res.g,
        "instantons": res.instantons,
    });
    Ok(Output { table: t, json, ok: true })
}

fn mirror_map(opts: &Opts, input: &Input, order: usize) -> Res<Output> {
    let Input::Pf(l) = input else { return Err(wrong_input("mirror-map", input)) };
    let frob = frobenius_solve(l, 2, order)?;
    let q_frob = mirror_map_frobenius(&frob)?;
    let g = companion_vhs(l, order)?;
    let split = hodge_tate_split(&g)?;
    let cc = canonical_coordinate(&split.connection, &split.twice_levels)?;
    let inverse = cc.coordinate.reverse()?;
    let mismatch = q_frob.first_difference(&cc.coordinate);
    let mut t = String::new();
    let _ = writeln!(t, "exact mod q^{order}");
    series_line(&mut t, "Q(q) [frobenius]", &q_frob, opts.decimal);
    series_line(&mut t, "Q(q) [canonical]", &cc.coordinate, opts.decimal);
    series_line(&mut t, "q(Q)", &inverse, opts.decimal);
    match mismatch {
        None => t.push_str("routes agree\n"),
        Some(k) => {
            let _ = writeln!(t, "routes DISAGREE at q^{k}");
        }
    }
    let json = json!({
        "order": order,
        "frobenius": q_frob,
        "canonical": cc.coordinate,
        "inverse": inverse,
        "agree": mismatch.is_none(),
    });
    Ok(Output { table: t, json, ok: mismatch.is_none() })
}

fn yukawa(opts: &Opts, input: &Input, order: usize) -> Res<Output> {
    let y = match input {
        Input::Pf(l) => bmodel_pipeline(l, &volume(opts)?, order, opts.sign)?.yukawa,
        Input::Dn(d) => yukawa_dn(d)?,
        Input::Geometric(g) => {
            let rep = to_normal_form(g, &volume(opts)?, BasisMode::Frame)?;
            yukawa_geometric(g, &rep)?
        }
        Input::Rees(_) => return Err(wrong_input("yukawa", input)),
    };
    let mut t = String::new();
    series_line(&mut t, "yukawa(Q)", &y, opts.decimal);
    Ok(Output { table: t, json: json!({ "yukawa": y }), ok: true })
}

fn instantons(opts: &Opts, input: &Input, order: usize) -> Res<Output> {
    let Input::Pf(l) = input else { return Err(wrong_input("instantons", input)) };
    let res = bmodel_pipeline(l, &volume(opts)?, order, opts.sign)?;
    let table =
        res.instantons.ok_or_else(|| Failure::Invalid("instanton numbers need a fourth-order operator".into()))?;
    let mut t = String::new();
    instanton_table(&mut t, &table, opts.decimal);
    let fractional = table.non_integral();
    if !fractional.is_empty() {
        let _ = writeln!(t, "non-integral degrees: {fractional:?}");
    }
    Ok(Output { table: t, json: to_json(&table), ok: true })
}

fn normal_form_report(opts: &Opts, input: &Input, order: usize) -> Res<NormalFormReport> {
    let vol = volume(opts)?;
    let mut rep = match input {
        Input::Pf(l) => to_normal_form(&companion_vhs(l, order)?, &vol, BasisMode::Lefschetz)?,
        Input::Geometric(g) => to_normal_form(g, &vol, BasisMode::Frame)?,
        Input::Rees(r) => to_normal_form(&rees_to_geometric(r)?, &vol, BasisMode::Frame)?,
        Input::Dn(_) => return Err(wrong_input("normal-form", input)),
    };
    if opts.sign == -1 {
        rep.dn = rescale_coordinate(&rep.dn, &Scalar::from_int(-1))?;
    }
    Ok(rep)
}

fn normal_form(opts: &Opts, input: &Input, order: usize) -> Res<Output> {
    let rep = normal_form_report(opts, input, order)?;
    let mut t = String::new();
    series_line(&mut t, "Q(q)", &rep.mirror_coordinate, opts.decimal);
    dn_table(&mut t, &rep.dn);
    Ok(Output { table: t, json: to_json(&rep), ok: true })
}

fn pf_report(l: &PFOperator, order: usize) -> Res<CheckReport> {
    let mut r = CheckReport::new(Some(order));
    let frob = frobenius_solve(l, l.order_theta(), order)?;
    let zero = frob.residuals(l).iter().flatten().all(Series::is_zero);
    r.push("frobenius_residuals", if zero { Ok(()) } else { Err("L y != 0".into()) });
    let g = companion_vhs(l, order)?;
    r.extend("companion.", g.check());
    if l.order_theta() >= 2 {
        let q_frob = mirror_map_frobenius(&frobenius_solve(l, 2, order)?)?;
        let mm = hodge_tate_split(&g)
            .and_then(|s| canonical_coordinate(&s.connection, &s.twice_levels))
            .map_err(|e| e.to_string())
            .and_then(|cc| match q_frob.first_difference(&cc.coordinate) {
                None => Ok(()),
                Some(k) => Err(format!("routes disagree at q^{k}")),
            });
        r.push("mirror_map_routes", mm);
    }
    Ok(r)
}

fn check(_opts: &Opts, input: &Input, order: usize) -> Res<Output> {
    let report = match input {
        Input::Pf(l) => pf_report(l, order)?,
        Input::Dn(d) => d.check(),
        Input::Geometric(g) => g.check(),
        Input::Rees(r) => verify_prevhs(r),
    };
    let mut t = format!("{}\n", input.kind());
    let _ = write!(t, "{report}");
    let ok = report.all_passed();
    Ok(Output { table: t, json: to_json(&report), ok })
}

fn rees_roundtrip(opts: &Opts, input: &Input) -> Res<Output> {
    match input {
        Input::Dn(d) => {
            let rees = from_normal_form(d)?;
            let g = rees_to_geometric(&rees)?;
            let top = d.top_pairing().ok_or_else(|| Failure::Invalid("V_{-n} is not a line".into()))?;
            let rep = to_normal_form(&g, &top, BasisMode::Frame)?;
            let equal = &rep.dn == d;
            let mut t = String::new();
            let _ = writeln!(t, "normal form -> Rees module -> bundle -> normal form, exact mod q^{}", d.order());
            dn_table(&mut t, &rep.dn);
            let _ = writeln!(t, "{}", if equal { "roundtrip is the identity" } else { "roundtrip DIFFERS" });
            if opts.decimal.is_some() {
                let _ = writeln!(t, "(no approximations for matrix output)");
            }
            let json = json!({ "equal": equal, "rees": rees.normalized(), "normal_form": rep.dn });
            Ok(Output { table: t, json, ok: equal })
        }
        Input::Rees(r) => {
            let g = rees_to_geometric(r)?;
            let back = geometric_to_rees(&g, Some(&r.degrees))?;
            let equal = back.normalized() == r.normalized();
            let mut t = String::new();
            let _ = writeln!(t, "Rees module -> bundle -> Rees module, exact mod q^{}", r.order());
            matrix_lines(&mut t, "B", &g.conn);
            let _ = writeln!(t, "{}", if equal { "roundtrip is the identity" } else { "roundtrip DIFFERS" });
            let json = json!({ "equal": equal, "geometric": g, "rees": back.normalized() });
            Ok(Output { table: t, json, ok: equal })
        }
        _ => Err(wrong_input("rees-roundtrip", input)),
    }
}

fn run(cli: &Cli) -> Res<Output> {
    let (name, opts) = match &cli.command {
        Command::Pipeline(o) => ("pipeline", o),
        Command::MirrorMap(o) => ("mirror-map", o),
        Command::Yukawa(o) => ("yukawa", o),
        Command::Instantons(o) => ("instantons", o),
        Command::NormalForm(o) => ("normal-form", o),
        Command::Check(o) => ("check", o),
        Command::ReesRoundtrip(o) => ("rees-roundtrip", o),
    };
    let order = opts.order as usize;
    let input = load(&opts.input, order)?;
    match name {
        "pipeline" => pipeline(opts, &input, order),
        "mirror-map" => mirror_map(opts, &input, order),
        "yukawa" => yukawa(opts, &input, order),
        "instantons" => instantons(opts, &input, order),
        "normal-form" => normal_form(opts, &input, order),
        "check" => check(opts, &input, order),
        _ => rees_roundtrip(opts, &input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match &cli.command {
        Command::Pipeline(o)
        | Command::MirrorMap(o)
        | Command::Yukawa(o)
        | Command::Instantons(o)
        | Command::NormalForm(o)
        | Command::Check(o)
        | Command::ReesRoundtrip(o) => o.format,
    };
    match run(&cli) {
        Ok(out) => {
            match format {
                Format::Table => print!("{}", out.table),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let msg = match &f {
                Failure::Input(m) => format!("input error: {m}"),
                Failure::Invalid(m) => format!("error: {m}"),
            };
            match format {
                Format::Json => println!("{}", json!({ "error": msg, "exit_code": f.code() })),
                Format::Table => eprintln!("{msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
