//! Command-line surface: argument parsing, literal grammars and report
//! rendering. `run` is pure apart from its result, so reports are
//! reproducible byte for byte.

use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::ercs::compact_base;
use crate::error::{Error, Result};
use crate::hyperspace::{consistency_refute, forall_located_report, verify_condition, Predicate, Refutation, SpecBits};
use crate::kernel::{Fuel, Outcome};
use crate::metric::{distance_to_located, hausdorff_distance, nice_radius, radius, CReal, MetricContext, MetricPoint};
use crate::rational::{dyadic, fmt_rational, half, parse_rational, to_f64, Rational};
use crate::sets::{compact_subset, member_open, CompactSet, LocatedSet, OpenSet};
use crate::spaces::cantor::{CantorPoint, Word};
use crate::spaces::finite::FiniteSpace;
use crate::spaces::line::{decode_interval, interval_index, LineSet, LineSpace};
use crate::spaces::registry::{registry_get, Registered, SpaceKind};
use crate::spaces::{BaseIndex, Basic, PointName};

pub const DEFAULT_FUEL: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    /// Registry name: real-line, unit-interval, cantor, star, qhat,
    /// finite:{..} or line:<set>.
    #[arg(long, global = true, default_value = "unit-interval")]
    pub space: String,
    #[arg(long, global = true, env = "ERCTOPO_DEFAULT_FUEL", default_value_t = DEFAULT_FUEL)]
    pub fuel: u64,
    /// Output intervals have width at most 2^-precision.
    #[arg(long, global = true, default_value_t = 10)]
    pub precision: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "erctopo", version, about = "Exact topology on represented spaces")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// x ∈ V ⊆ K ⊆ U with V open and K compact.
    CompactBase {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Looks for a cover violation in a partial bit assignment.
    Consistency {
        #[arg(long, allow_hyphen_values = true)]
        bits: String,
    },
    /// Searches all located sets for a counterexample-free proof.
    Forall {
        #[arg(long, allow_hyphen_values = true)]
        pred: String,
    },
    /// Distance from a point to a located set.
    Distance {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Hausdorff distance between two nonempty located sets.
    Hausdorff {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Radius of a closed ball given as a set, or a nice radius below `--nice`.
    Radius {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        ball: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        nice: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CompactBase { .. } => "compact-base",
            Command::Consistency { .. } => "consistency",
            Command::Forall { .. } => "forall",
            Command::Distance { .. } => "distance",
            Command::Hausdorff { .. } => "hausdorff",
            Command::Radius { .. } => "radius",
        }
    }

    fn args(&self) -> Value {
        match self {
            Command::CompactBase { x, u } => json!({ "x": x, "u": u }),
            Command::Consistency { bits } => json!({ "bits": bits }),
            Command::Forall { pred } => json!({ "pred": pred }),
            Command::Distance { x, a } => json!({ "x": x, "a": a }),
            Command::Hausdorff { a, b } => json!({ "a": a, "b": b }),
            Command::Radius { x, ball, nice } => json!({ "x": x, "ball": ball, "nice": nice }),
        }
    }
}

/// What a command found; `pending` selects exit code 2.
struct Found {
    result: Value,
    witness: Value,
    fuel_used: u64,
    pending: bool,
    text: Vec<String>,
}

/// Exit code for an error: 1 for input that does not parse, 2 for fuel
/// exhaustion, 3 for operations the space does not support.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::MalformedLiteral(_) | Error::MalformedSpace(_) | Error::UnknownSpace(_) => 1,
        Error::FuelExhausted { .. } => 2,
        _ => 3,
    }
}

/// Runs a parsed command line; returns the exit code and the report.
pub fn run(cli: &Cli) -> (i32, String) {
    let cfg = &cli.config;
    let config = json!({
        "space": cfg.space,
        "fuel": cfg.fuel,
        "precision": cfg.precision,
        "seed": cfg.seed,
        "format": match cfg.format { Format::Text => "text", Format::Json => "json" },
    });
    let outcome = registry_get(&cfg.space).and_then(|reg| dispatch(&reg, cfg, &cli.command));
    let name = cli.command.name();
    match outcome {
        Ok(f) => {
            let code = if f.pending { 2 } else { 0 };
            let out = match cfg.format {
                Format::Json => {
                    let v = json!({
                        "command": name,
                        "config": config,
                        "args": cli.command.args(),
                        "result": f.result,
                        "witness": f.witness,
                        "fuelUsed": f.fuel_used,
                    });
                    serde_json::to_string_pretty(&v).expect("json values serialize")
                }
                Format::Text => {
                    let mut lines = vec![format!("command: {name}"), format!("space: {}", cfg.space)];
                    lines.extend(f.text);
                    lines.push(format!("fuel used: {}", f.fuel_used));
                    lines.join("\n")
                }
            };
            (code, out)
        }
        Err(e) => {
            let code = exit_code(&e);
            let out = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "command": name,
                    "config": config,
                    "args": cli.command.args(),
                    "error": e.to_string(),
                    "exitCode": code,
                }))
                .expect("json values serialize"),
                Format::Text => format!("error: {e}"),
            };
            (code, out)
        }
    }
}

fn dispatch(reg: &Registered, cfg: &RunConfig, cmd: &Command) -> Result<Found> {
    match cmd {
        Command::CompactBase { x, u } => cmd_compact_base(reg, cfg, x, u),
        Command::Consistency { bits } => cmd_consistency(reg, cfg, bits),
        Command::Forall { pred } => cmd_forall(reg, cfg, pred),
        Command::Distance { x, a } => {
            let ctx = metric_ctx(reg, cfg)?;
            let (x, a) = (metric_point(reg, &ctx, x)?, located(reg, a)?);
            real_found(cfg, "distance", &distance_to_located(&ctx, &x, &a)?)
        }
        Command::Hausdorff { a, b } => {
            let ctx = metric_ctx(reg, cfg)?;
            let (a, b) = (located(reg, a)?, located(reg, b)?);
            if empty_literal(reg, &a, cfg)? || empty_literal(reg, &b, cfg)? {
                return Err(Error::EmptySetArgument);
            }
            real_found(cfg, "hausdorff", &hausdorff_distance(&ctx, &a, &b)?)
        }
        Command::Radius { x, ball, nice } => {
            let ctx = metric_ctx(reg, cfg)?;
            let xp = metric_point(reg, &ctx, x)?;
            match (ball, nice) {
                (Some(set), None) => {
                    let k = compact_literal(reg, set)?;
                    let v = located(reg, set)?.overt;
                    real_found(cfg, "radius", &radius(&ctx, &xp, &k, &v))
                }
                (None, Some(r)) => {
                    let r = parse_rational(r)?;
                    if !r.is_positive() {
                        return Err(Error::Parse("--nice needs a positive radius".into()));
                    }
                    let k = closed_ball_compact(reg, x, &r)?;
                    real_found(cfg, "nice-radius", &nice_radius(&ctx, &xp, &r, &k)?)
                }
                _ => Err(Error::Parse("radius takes exactly one of --ball and --nice".into())),
            }
        }
    }
}

fn cmd_compact_base(reg: &Registered, cfg: &RunConfig, x: &str, u: &str) -> Result<Found> {
    let e = reg.require_ercs()?;
    let xn = point_name(reg, x)?;
    let uo = open_literal(reg, u)?;
    match compact_base(e, &xn, &uo, Fuel(cfg.fuel)) {
        Ok(cb) => {
            let (n, k) = (cb.witness.n, cb.witness.k);
            let x_in_v = member_open(&xn, &cb.v).accepts_within(cfg.fuel);
            let v_in_k = e.related(n, k).unwrap_or(true);
            let k_in_u = compact_subset(&cb.k, &uo).accepts_within(cfg.fuel);
            let (vs, ks) = (render_basic(reg, n), render_compact(reg, k));
            let verified = x_in_v && v_in_k && k_in_u;
            Ok(Found {
                result: json!({ "status": "Accepted", "verified": verified }),
                witness: json!({
                    "n": n.0.to_string(), "k": k.0.to_string(), "v": vs, "compact": ks,
                    "xInV": x_in_v, "vInK": v_in_k, "kInU": k_in_u,
                }),
                fuel_used: cb.witness.stage + 1,
                pending: !verified,
                text: vec![
                    format!("result: Accepted (verified: {verified})"),
                    format!("witness: V = {vs}, K = {ks}"),
                    format!("checks: x in V {x_in_v}, V in K {v_in_k}, K in U {k_in_u}"),
                ],
            })
        }
        Err(Error::FuelExhausted { fuel }) => Ok(pending_found(fuel)),
        Err(err) => Err(err),
    }
}

fn cmd_consistency(reg: &Registered, cfg: &RunConfig, bits: &str) -> Result<Found> {
    let e = reg.require_ercs()?;
    let mut entries: Vec<(BaseIndex, bool)> = Vec::new();
    for item in split_top(bits) {
        let (key, val) = item.rsplit_once('=').ok_or_else(|| Error::Parse(format!("bit `{item}` needs `=`")))?;
        let b = match val.trim() {
            "0" => false,
            "1" => true,
            v => return Err(Error::Parse(format!("bit value `{v}` is not 0 or 1"))),
        };
        let n = basic_literal(reg, key.trim())?;
        if entries.iter().any(|&(m, c)| m == n && c != b) {
            return Err(Error::Parse(format!("conflicting bits for `{}`", key.trim())));
        }
        entries.push((n, b));
    }
    let p = SpecBits::Prefix(entries);
    Ok(match consistency_refute(e, &p, Fuel(cfg.fuel)) {
        Refutation::Refuted { cond, stage } => {
            let ok = verify_condition(e, &p, &cond, Fuel(cfg.fuel));
            let cover: Vec<String> = cond.cover.iter().map(|&m| render_basic(reg, m)).collect();
            let (ns, ks) = (render_basic(reg, cond.n), render_compact(reg, cond.k));
            Found {
                result: json!({ "status": "Refuted", "verified": ok }),
                witness: json!({ "n": ns, "k": ks, "cover": cover }),
                fuel_used: stage + 1,
                pending: false,
                text: vec![
                    "result: Refuted".into(),
                    format!("witness: bit {ns} = 1, its compact {ks} is covered by zeros {}", cover.join(" ")),
                    format!("verified: {ok}"),
                ],
            }
        }
        Refutation::NoneYet => Found {
            result: json!({ "status": "NoneYet" }),
            witness: Value::Null,
            fuel_used: cfg.fuel,
            pending: true,
            text: vec!["result: NoneYet (no violation found within fuel)".into()],
        },
    })
}

fn cmd_forall(reg: &Registered, cfg: &RunConfig, pred: &str) -> Result<Found> {
    let e = reg.require_ercs()?;
    let whole = reg.whole_compact.clone().ok_or_else(|| Error::Unsupported(format!("{} is not compact", reg.name)))?;
    let p = parse_predicate(reg, pred)?;
    let rep = forall_located_report(e, &whole, &p, Fuel(cfg.fuel));
    Ok(match rep.outcome {
        Outcome::Accepted(s) => Found {
            result: json!({ "status": "Accepted", "depth": rep.depth, "rounds": rep.rounds, "nodes": rep.nodes }),
            witness: json!({ "closingDepth": rep.depth }),
            fuel_used: s + 1,
            pending: false,
            text: vec![
                "result: Accepted".into(),
                format!("closing depth: {}", rep.depth.unwrap_or(0)),
                format!("rounds: {}, nodes: {}", rep.rounds, rep.nodes),
            ],
        },
        Outcome::Pending => Found {
            result: json!({ "status": "Pending", "rounds": rep.rounds, "nodes": rep.nodes }),
            witness: Value::Null,
            fuel_used: cfg.fuel,
            pending: true,
            text: vec!["result: Pending".into(), format!("rounds: {}, nodes: {}", rep.rounds, rep.nodes)],
        },
    })
}

fn pending_found(fuel: u64) -> Found {
    Found {
        result: json!({ "status": "Pending" }),
        witness: Value::Null,
        fuel_used: fuel,
        pending: true,
        text: vec!["result: Pending".into()],
    }
}

/// Reals are reported as an interval of width `2^-precision`; the fuel
/// figure is the ceiling each inner test ran under.
fn real_found(cfg: &RunConfig, what: &str, r: &CReal) -> Result<Found> {
    let k = cfg.precision;
    let (lo, hi) = match r.approx(k) {
        Ok(iv) => iv,
        Err(Error::FuelExhausted { fuel }) => return Ok(pending_found(fuel)),
        Err(err) => return Err(err),
    };
    let mid = (&lo + &hi) * half();
    let shown = format!("{:.6}", to_f64(&mid));
    Ok(Found {
        result: json!({
            "status": "Value", "quantity": what, "value": shown,
            "lower": fmt_rational(&lo), "upper": fmt_rational(&hi), "precision": k,
        }),
        witness: json!({ "width": fmt_rational(&(&hi - &lo)), "bound": fmt_rational(&dyadic(k)) }),
        fuel_used: cfg.fuel,
        pending: false,
        text: vec![
            format!("result: {what} = {shown} ± 2^-{k}"),
            format!("interval: [{}, {}]", fmt_rational(&lo), fmt_rational(&hi)),
        ],
    })
}

fn metric_ctx(reg: &Registered, cfg: &RunConfig) -> Result<MetricContext> {
    reg.require_metric()?;
    if matches!(reg.kind, SpaceKind::Star(_) | SpaceKind::Qhat(_)) {
        return Err(Error::Unsupported(format!("{} has no located-set literals", reg.name)));
    }
    MetricContext::from_registered(reg, cfg.fuel)
}

fn metric_point(reg: &Registered, ctx: &MetricContext, x: &str) -> Result<MetricPoint> {
    match &reg.kind {
        SpaceKind::Finite(fs) => Ok(ctx.point(finite_point(fs, x)? as u128)),
        _ => MetricPoint::rational(ctx.space.clone(), &parse_rational(x)?),
    }
}

fn finite_point(fs: &FiniteSpace, x: &str) -> Result<usize> {
    fs.point_index(x.trim()).ok_or_else(|| Error::OutOfSpace(format!("no point `{}`", x.trim())))
}

fn finite_mask(fs: &FiniteSpace, body: &str) -> Result<u32> {
    let names: Vec<&str> = body.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let mut m = 0u32;
    for n in names {
        m |= 1 << finite_point(fs, n)?;
    }
    Ok(m)
}

fn braces(s: &str) -> Option<&str> {
    s.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}'))
}

fn point_name(reg: &Registered, x: &str) -> Result<PointName> {
    match &reg.kind {
        SpaceKind::Line(sp) => sp.point_name(&parse_rational(x)?),
        SpaceKind::Cantor(c) => Ok(c.point_name(&CantorPoint::parse(x)?)),
        SpaceKind::Finite(fs) => Ok(fs.point_name(finite_point(fs, x)?)),
        _ => Err(Error::NoErcs(reg.name.clone())),
    }
}

/// A single basic: `(a,b)` on line spaces, `[w]` on Cantor space, `{p,q}`
/// (an open basic) on finite spaces.
fn basic_literal(reg: &Registered, s: &str) -> Result<BaseIndex> {
    let t = s.trim();
    let bad = || Error::MalformedLiteral(format!("bad basic `{t}` for {}", reg.name));
    match &reg.kind {
        SpaceKind::Line(_) => {
            let body = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let (a, b) = body.split_once(',').ok_or_else(bad)?;
            interval_index(&parse_rational(a)?, &parse_rational(b)?).ok_or_else(bad)
        }
        SpaceKind::Cantor(_) => {
            let body = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
            Ok(Word::parse(body)?.index())
        }
        SpaceKind::Finite(fs) => {
            let m = finite_mask(fs, braces(t).ok_or_else(bad)?)?;
            fs.index_of_mask(m).ok_or_else(|| Error::MalformedLiteral(format!("`{t}` is not a basic open")))
        }
        _ => Err(Error::NoErcs(reg.name.clone())),
    }
}

/// A finite union of basics joined by `+`; `open(..)` is accepted around
/// the bare contents.
fn open_literal(reg: &Registered, s: &str) -> Result<OpenSet> {
    let mut ns = Vec::new();
    for piece in split_top_on(s, '+') {
        let p = piece.trim();
        let p = match p.strip_prefix("open(").and_then(|r| r.strip_suffix(')')) {
            Some(body) => wrap_open(reg, body),
            None => p.to_string(),
        };
        match &reg.kind {
            SpaceKind::Finite(fs) => {
                let m = finite_mask(fs, braces(&p).ok_or_else(|| Error::MalformedLiteral(format!("bad open `{p}`")))?)?;
                if !fs.is_open(m) {
                    return Err(Error::MalformedLiteral(format!("`{p}` is not open")));
                }
                ns.extend(fs.basics_inside(m));
            }
            _ => ns.push(basic_literal(reg, &p)?),
        }
    }
    Ok(OpenSet::of_basics(reg.space.clone(), ns))
}

/// `open(a,b)` means `(a,b)`, `open(w)` means `[w]`, `open(p,q)` means
/// `{p,q}`, as the space dictates.
fn wrap_open(reg: &Registered, body: &str) -> String {
    match &reg.kind {
        SpaceKind::Line(_) => format!("({body})"),
        SpaceKind::Cantor(_) => format!("[{body}]"),
        _ => format!("{{{body}}}"),
    }
}

fn located(reg: &Registered, s: &str) -> Result<LocatedSet> {
    match &reg.kind {
        SpaceKind::Line(sp) => sp.literal_located(LineSet::parse(s)?),
        SpaceKind::Finite(fs) => {
            let body = braces(s).ok_or_else(|| Error::MalformedLiteral(format!("bad finite set `{s}`")))?;
            Ok(fs.located_of_mask(fs.closure(finite_mask(fs, body)?)))
        }
        _ => Err(Error::Unsupported(format!("{} has no located-set literals", reg.name))),
    }
}

fn compact_literal(reg: &Registered, s: &str) -> Result<CompactSet> {
    match &reg.kind {
        SpaceKind::Line(sp) => {
            let set = LineSet::parse(s)?;
            sp.literal_located(set.clone())?;
            Ok(sp.literal_compact(set))
        }
        SpaceKind::Finite(fs) => {
            let body = braces(s).ok_or_else(|| Error::MalformedLiteral(format!("bad finite set `{s}`")))?;
            Ok(fs.compact_of_mask(fs.closure(finite_mask(fs, body)?)))
        }
        _ => Err(Error::Unsupported(format!("{} has no compact literals", reg.name))),
    }
}

fn empty_literal(reg: &Registered, a: &LocatedSet, cfg: &RunConfig) -> Result<bool> {
    let whole = OpenSet::whole(reg.space.clone());
    Ok(!crate::sets::overt_meets(&a.overt, &whole).accepts_within(cfg.fuel.max(1000)))
}

/// `B̄(x, r)` traced on a line carrier, or as a point mask.
fn closed_ball_compact(reg: &Registered, x: &str, r: &Rational) -> Result<CompactSet> {
    match &reg.kind {
        SpaceKind::Line(sp) => {
            let q = parse_rational(x)?;
            Ok(sp.literal_compact(sp.closed_trace(&(&q - r), &(&q + r))))
        }
        SpaceKind::Finite(fs) => {
            let i = finite_point(fs, x)?;
            Ok(fs.compact_of_mask(crate::oracle::brute_closed_ball(fs, i, r)))
        }
        _ => Err(Error::Unsupported(format!("{} has no closed-ball compacts", reg.name))),
    }
}

/// `subset(O)`, `meets(O)`, `isEmptyOr(P)`, `and(P, ..)`, `or(P, ..)`,
/// with `O` an open literal.
pub fn parse_predicate(reg: &Registered, s: &str) -> Result<Predicate> {
    let t = s.trim();
    let (head, body) = t
        .split_once('(')
        .and_then(|(h, r)| r.strip_suffix(')').map(|b| (h.trim(), b)))
        .ok_or_else(|| Error::Parse(format!("bad predicate `{t}`")))?;
    let subs = || split_top(body).into_iter().map(|p| parse_predicate(reg, &p)).collect::<Result<Vec<_>>>();
    match head {
        "subset" => Ok(Predicate::Subset(open_literal(reg, body)?)),
        "meets" => Ok(Predicate::Meets(open_literal(reg, body)?)),
        "isEmptyOr" => Ok(Predicate::IsEmptyOr(Box::new(parse_predicate(reg, body)?))),
        "and" => Ok(Predicate::And(subs()?)),
        "or" => Ok(Predicate::Or(subs()?)),
        _ => Err(Error::Parse(format!("unknown predicate `{head}`"))),
    }
}

fn split_top(s: &str) -> Vec<String> {
    split_top_on(s, ',')
}

/// Splits on `sep` outside brackets of any kind.
fn split_top_on(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn render_basic(reg: &Registered, n: BaseIndex) -> String {
    match (reg.space.decode(n), &reg.kind) {
        (Some(Basic::Interval { lo, hi }), _) => format!("({},{})", fmt_rational(&lo), fmt_rational(&hi)),
        (Some(Basic::Cylinder(w)), _) => format!("[{w}]"),
        (Some(Basic::Finite(m)), SpaceKind::Finite(fs)) => render_mask(fs, m),
        (Some(b), _) => format!("{b:?}"),
        (None, _) => n.to_string(),
    }
}

/// The compact `B_k` of the space's own ercs.
fn render_compact(reg: &Registered, k: BaseIndex) -> String {
    match &reg.kind {
        SpaceKind::Line(sp) => {
            let (lo, hi) = decode_interval(k);
            line_render(sp, &lo, &hi)
        }
        SpaceKind::Cantor(_) => format!("[{}]", crate::spaces::cantor::word_of(k)),
        SpaceKind::Finite(fs) => render_mask(fs, k.0 as u32),
        _ => k.to_string(),
    }
}

fn line_render(sp: &Arc<LineSpace>, lo: &Rational, hi: &Rational) -> String {
    sp.closed_trace(lo, hi).render()
}

fn render_mask(fs: &FiniteSpace, m: u32) -> String {
    let names: Vec<&str> = (0..fs.size()).filter(|&i| m >> i & 1 == 1).map(|i| fs.points()[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}
