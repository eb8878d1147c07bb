use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use zplus::bounds::{generator_sweep, theorem_bound_report, BoundReport};
use zplus::catdata::{catdata_report, parse_catdata, Flags};
use zplus::enumerate::{enumerate_rings, verify_catalog, write_jsonl, Cap};
use zplus::fpdim::fpdim_ring;
use zplus::json::parse_ring;
use zplus::rank2::{enumerate_rank2, feasibility_report, fermat_filter, solve_rank2, FeasibilityInput, Rank2Report};
use zplus::screener::{check_profile, screen_hopf, screen_range, DimensionProfile, ScreenReport};
use zplus::{RingElement, RingPresentation};

use crate::envelope::digest;
use crate::error::CliError;
use crate::table::{list, pairs, render, yes_no};

pub struct Output {
    pub payload: Value,
    pub text: String,
    /// Nonzero when the computation succeeded but the input was rejected.
    pub exit: u8,
}

impl Output {
    fn ok(payload: Value, text: String) -> Self {
        Output { payload, text, exit: 0 }
    }
}

pub struct Input {
    pub bytes: Vec<u8>,
    pub text: String,
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::input(format!("{} is not UTF-8", path.display())))?;
    Ok(Input { bytes, text })
}

/// Digest for subcommands driven by flags alone: the arguments as JSON.
pub fn args_digest<T: Serialize>(args: &T) -> String {
    digest(serde_json::to_string(args).expect("arguments serialize").as_bytes())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn labels_of(ring: &RingPresentation, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| ring.labels().get(i).cloned().unwrap_or_else(|| i.to_string())).collect()
}

pub fn validate(input: &Input) -> Result<Output, CliError> {
    let ring = parse_ring(&input.text)?;
    let report = ring.validate();
    let valid = report.is_valid();
    let mut payload = json!({
        "rank": ring.rank(),
        "labels": ring.labels(),
        "valid": valid,
        "unit_ok": report.unit_ok,
        "assoc_ok": report.assoc_ok,
        "transitive_ok": report.transitive_ok,
        "two_sided_transitive": ring.is_two_sided_transitive(),
    });
    let mut text = render(
        &["axiom", "status"],
        &[
            vec!["unit".into(), ok_fail(report.unit_ok)],
            vec!["associativity".into(), ok_fail(report.assoc_ok)],
            vec!["transitivity".into(), ok_fail(report.transitive_ok)],
        ],
    );
    if let Some(v) = &report.first_violation {
        payload["first_violation"] = json!({
            "axiom": v.axiom,
            "indices": v.indices,
            "labels": labels_of(&ring, &v.indices),
        });
        text.push_str(&format!("first violation: {v}, basis ({})\n", labels_of(&ring, &v.indices).join(", ")));
    }
    text.push_str(&format!("valid: {}\n", yes_no(valid)));
    Ok(Output { payload, text, exit: if valid { 0 } else { 1 } })
}

fn ok_fail(b: bool) -> String {
    if b { "ok" } else { "FAIL" }.into()
}

pub fn fpdim(input: &Input) -> Result<Output, CliError> {
    let ring = parse_ring(&input.text)?;
    let data = fpdim_ring(&ring)?;
    let mut payload = to_value(&data);
    payload["labels"] = json!(ring.labels());
    let rows: Vec<Vec<String>> = (0..ring.rank())
        .map(|i| vec![ring.labels()[i].clone(), data.d[i].to_string(), data.p[i].to_string()])
        .collect();
    let mut text = render(&["basis", "d", "p"], &rows);
    text.push_str(&format!("d = {}, p = {}, FPdim(A) = {}\n", list(&data.d), list(&data.p), data.fpdim_a));
    Ok(Output::ok(payload, text))
}

fn parse_element(spec: &str, rank: usize) -> Result<RingElement, CliError> {
    let coords: Vec<BigInt> = spec
        .split(',')
        .map(|c| c.trim().parse::<BigInt>().map_err(|_| CliError::input(format!("bad coordinate {c:?} in --element"))))
        .collect::<Result<_, _>>()?;
    if coords.len() != rank {
        return Err(CliError::input(format!("--element has {} coordinates, the ring has rank {rank}", coords.len())));
    }
    Ok(RingElement::new(coords))
}

fn bound_row(name: &str, r: &BoundReport) -> Vec<String> {
    vec![
        name.into(),
        r.d.to_string(),
        r.n.to_string(),
        r.q_at_d.to_string(),
        r.multiplier_m.to_string(),
        r.s.to_string(),
        ok_fail(r.ineq_ii_ok),
        ok_fail(r.ineq_iii_ok),
        ok_fail(r.weak_ok),
    ]
}

const BOUND_HEADERS: [&str; 9] = ["element", "d", "N", "Q(d)", "Q(d)/N", "s", "(ii)", "(iii)", "weak"];

pub fn bounds(input: &Input, element: Option<&str>) -> Result<Output, CliError> {
    let ring = parse_ring(&input.text)?;
    if let Some(spec) = element {
        let x = parse_element(spec, ring.rank())?;
        let report = theorem_bound_report(&ring, &x)?;
        let text = render(&BOUND_HEADERS, &[bound_row(spec, &report)]) + &format!("chi = {}\nQ = {}\n", report.chi, report.q);
        return Ok(Output::ok(json!({ "reports": [to_value(&report)] }), text));
    }
    let data = fpdim_ring(&ring)?;
    let sweep = generator_sweep(&ring, &data)?;
    let rows: Vec<Vec<String>> = sweep
        .iter()
        .map(|e| match (&e.report, &e.skipped) {
            (Some(r), _) => bound_row(&e.element, r),
            (None, why) => {
                let mut row = vec![e.element.clone(), format!("skipped: {}", why.clone().unwrap_or_default())];
                row.resize(BOUND_HEADERS.len(), String::new());
                row
            }
        })
        .collect();
    let payload = json!({ "dimension": to_value(&data), "reports": to_value(&sweep) });
    Ok(Output::ok(payload, render(&BOUND_HEADERS, &rows)))
}

pub fn catdata(input: &Input) -> Result<Output, CliError> {
    let cat = parse_catdata(&input.text)?;
    let report = catdata_report(&cat)?;
    let mut items = vec![
        ("d", list(&report.dimension.d)),
        ("p", list(&report.dimension.p)),
        ("FPdim(A)", report.dimension.fpdim_a.to_string()),
        ("D", report.prop_gcd.big_d.to_string()),
        ("FPdim(C)", report.prop_gcd.fpdim_c.to_string()),
        ("FPdim(C) = D FPdim(A)", yes_no(report.prop_gcd.ok)),
    ];
    if let Some(det) = &report.detbound {
        items.push(("det C", det.det.to_string()));
        items.push(("4d^2|det C| <= FPdim(C)^2", format!("{} ({} vs {})", yes_no(det.ok), det.lhs, det.rhs)));
    }
    items.push(("lowbo", format!("{:?}", report.lowbo)));
    if let Some(r2) = &report.rank2 {
        items.push(("rank-2 verdict", format!("{:?}", r2.verdict)));
        if !r2.violated.is_empty() {
            items.push(("violated", r2.violated.join(", ")));
        }
    }
    items.push(("consistent", yes_no(report.consistent)));
    let rows: Vec<Vec<String>> = report
        .p1
        .iter()
        .map(|e| vec![cat.ring.labels()[e.index].clone(), e.d.to_string(), e.p_times_d.to_string(), format!("{:?}", e.status)])
        .collect();
    let text = pairs(&items) + "\n" + &render(&["simple", "d", "p D", "status"], &rows);
    Ok(Output::ok(to_value(&report), text))
}

#[derive(Debug, Clone, Serialize, clap::Args)]
pub struct Rank2Args {
    /// Coefficient a of X² = aX + b.
    #[arg(long, requires = "b", group = "mode")]
    pub a: Option<u64>,
    #[arg(long, requires = "a")]
    pub b: Option<u64>,
    /// Field characteristic (0 for characteristic zero).
    #[arg(long = "char")]
    pub char_q: Option<u64>,
    /// Candidate FPdim(C) to test against the rank-two constraints.
    #[arg(long)]
    pub fpdim_c: Option<u64>,
    #[arg(long)]
    pub pointed: Option<bool>,
    #[arg(long)]
    pub id_iso_double_dual: Option<bool>,
    #[arg(long)]
    pub hopf: Option<bool>,
    /// List every integral ring with FPdim(A) ≤ N instead.
    #[arg(long, value_name = "N", group = "mode")]
    pub list: Option<u64>,
    /// Run the Fermat filter on p (with --n).
    #[arg(long, value_name = "P", requires = "n", group = "mode")]
    pub fermat: Option<u64>,
    #[arg(long, requires = "fermat")]
    pub n: Option<u64>,
}

fn rank2_text(r: &Rank2Report) -> String {
    let mut items = vec![
        ("ring", format!("X^2 = {}X + {}", r.ring.a, r.ring.b)),
        ("d", r.ring.d.to_string()),
        ("p", format!("({}, 1)", r.ring.p0)),
        ("FPdim(A)", r.ring.n.to_string()),
        ("N-1 >= d >= N/2", yes_no(r.l1_ok)),
        ("char constraints", serde_json::to_string(&r.char_constraints).unwrap_or_default()),
    ];
    if let Some(m) = &r.minimal_class {
        items.push(("minimal", serde_json::to_string(m).unwrap_or_default()));
    }
    let mut text = String::new();
    if let Some(c) = &r.candidate {
        items.push(("FPdim(C) candidate", c.fpdim_c.to_string()));
        let rows: Vec<Vec<String>> =
            c.clauses().iter().map(|(name, cl)| vec![name.to_string(), format!("{:?}", cl.status), cl.note.clone()]).collect();
        text = "\n".to_string() + &render(&["clause", "status", "note"], &rows);
    }
    items.push(("verdict", format!("{:?}", r.verdict)));
    pairs(&items) + &text
}

pub fn rank2(args: &Rank2Args) -> Result<Output, CliError> {
    if let Some(max_n) = args.list {
        let rings = enumerate_rank2(max_n)?;
        let rows: Vec<Vec<String>> =
            rings.iter().map(|r| vec![r.a.to_string(), r.b.to_string(), r.d.to_string(), format!("({}, 1)", r.p0), r.n.to_string()]).collect();
        let text = render(&["a", "b", "d", "p", "N"], &rows) + &format!("{} rings with N <= {max_n}\n", rings.len());
        return Ok(Output::ok(json!({ "max_N": max_n, "count": rings.len(), "rings": to_value(&rings) }), text));
    }
    if let (Some(p), Some(n)) = (args.fermat, args.n) {
        let v = fermat_filter(p, n)?;
        let mut items = vec![("p", p.to_string()), ("n", n.to_string()), ("admissible", yes_no(v.admissible))];
        if let Some(f) = &v.forced {
            items.push(("forced", format!("char 2, X^2 = {}X + {}", f.a, f.b)));
        }
        return Ok(Output::ok(to_value(&v), pairs(&items)));
    }
    let (Some(a), Some(b)) = (args.a, args.b) else {
        return Err(CliError::input("rank2 needs --a and --b, --list, or --fermat with --n"));
    };
    let ring = solve_rank2(a, b)?;
    let flags = Flags { pointed: args.pointed, id_iso_double_dual: args.id_iso_double_dual, hopf: args.hopf, ..Flags::default() };
    let input = FeasibilityInput { char_q: args.char_q, flags, candidate_fpdim_c: args.fpdim_c };
    let report = feasibility_report(&ring, &input)?;
    Ok(Output::ok(to_value(&report), rank2_text(&report)))
}

#[derive(Debug, Clone, Serialize, clap::Args)]
pub struct ScreenArgs {
    /// Prime dimension to screen.
    #[arg(long, group = "target")]
    pub p: Option<u64>,
    /// Range of dimensions lo..hi (inclusive); every odd prime in it is screened.
    #[arg(long, value_name = "LO..HI", group = "target")]
    pub range: Option<String>,
    /// JSON file with p and a proposed dimension profile to check.
    #[arg(long, value_name = "FILE", group = "target")]
    pub profile: Option<PathBuf>,
    /// Characteristic of the base field; 0 runs the quasi-Hopf screen.
    #[arg(long, default_value_t = 0)]
    pub q: u64,
    /// Largest rank in the rank table.
    #[arg(long)]
    pub r_cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    p: u64,
    #[serde(default)]
    q: u64,
    dims: Vec<u64>,
    proj_dims: Vec<u64>,
    self_double_dual: Vec<bool>,
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::input(format!("--range expects LO..HI, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn fmt_f(x: f64) -> String {
    format!("{x:.6}")
}

fn screen_text(r: &ScreenReport) -> String {
    let rows: Vec<Vec<String>> = r
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                fmt_f(c.lhs),
                c.relation.clone(),
                fmt_f(c.rhs),
                if c.exact { "exact".into() } else { format!("±{:.1e}", c.error_bound) },
                format!("{:?}", c.outcome),
            ]
        })
        .collect();
    let mut text = format!("p = {}, q = {} ({})\n", r.p, r.q, r.kind);
    text.push_str(&render(&["check", "lhs", "rel", "rhs", "accuracy", "outcome"], &rows));
    text.push_str(&format!("verdict: {:?}\n", r.verdict));
    if !r.rank_table.is_empty() {
        let rows: Vec<Vec<String>> = r
            .rank_table
            .iter()
            .map(|row| {
                vec![
                    row.r.to_string(),
                    fmt_f(row.d_min),
                    yes_no(row.self_double_dual_guaranteed),
                    row.inner_excludes.map(yes_no).unwrap_or_else(|| "-".into()),
                ]
            })
            .collect();
        text.push('\n');
        text.push_str(&render(&["r", "d_min", "X = X** forced", "rank excluded"], &rows));
    }
    text
}

pub fn screen_prime(args: &ScreenArgs, profile: Option<&Input>) -> Result<Output, CliError> {
    if let Some(input) = profile {
        let f: ProfileFile = serde_json::from_str(&input.text).map_err(|e| CliError::input(format!("profile: {e}")))?;
        let prof = DimensionProfile { dims: f.dims, proj_dims: f.proj_dims, self_double_dual: f.self_double_dual, q: f.q };
        let violations = check_profile(&prof, f.p)?;
        let rows: Vec<Vec<String>> = violations
            .iter()
            .map(|v| vec![v.constraint.to_string(), v.index.map(|i| i.to_string()).unwrap_or_default(), v.detail.clone()])
            .collect();
        let text = if rows.is_empty() {
            format!("p = {}: no constraint violated\n", f.p)
        } else {
            render(&["constraint", "simple", "detail"], &rows)
        };
        let payload = json!({ "p": f.p, "profile": to_value(&prof), "consistent": violations.is_empty(), "violations": to_value(&violations) });
        return Ok(Output::ok(payload, text));
    }
    if let Some(range) = &args.range {
        let (lo, hi) = parse_range(range)?;
        let reports = screen_range(lo, hi, args.q, args.r_cap)?;
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| vec![r.p.to_string(), format!("{:?}", r.verdict), r.margin.map(fmt_f).unwrap_or_else(|| "-".into())])
            .collect();
        let text = render(&["p", "verdict", "margin"], &rows);
        return Ok(Output::ok(json!({ "q": args.q, "reports": to_value(&reports) }), text));
    }
    let Some(p) = args.p else {
        return Err(CliError::input("screen-prime needs --p, --range or --profile"));
    };
    let report = screen_hopf(p, args.q, args.r_cap)?;
    Ok(Output::ok(to_value(&report), screen_text(&report)))
}

#[derive(Debug, Clone, Serialize, clap::Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub max_fpdim: Option<u64>,
    #[arg(long)]
    pub max_constant: Option<u64>,
    /// Write the catalog as JSON lines to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "ZPLUS_JOBS", default_value_t = 0)]
    #[serde(skip)]
    pub jobs: usize,
    /// Run the property suite over the catalog.
    #[arg(long)]
    pub verify: bool,
}

pub fn enumerate(args: &EnumerateArgs) -> Result<Output, CliError> {
    let cap = Cap { max_fpdim: args.max_fpdim, max_constant: args.max_constant };
    let catalog = enumerate_rings(args.rank, cap, args.jobs)?;
    let mut lines = Vec::new();
    write_jsonl(&catalog, &mut lines).map_err(|e| CliError::internal(e.to_string()))?;
    let mut payload = json!({
        "rank": catalog.rank,
        "cap": to_value(&catalog.cap),
        "count": catalog.rings.len(),
        "metadata": to_value(&catalog.metadata),
    });
    let rows: Vec<Vec<String>> = catalog
        .rings
        .iter()
        .map(|e| vec![format!("{:?}", e.ring.constants()), list(&e.dimension.d), e.dimension.fpdim_a.to_string()])
        .collect();
    let mut text = pairs(&[
        ("rank", catalog.rank.to_string()),
        ("rings", catalog.rings.len().to_string()),
        ("search space", format!("{:.3e}", catalog.metadata.search_space)),
        ("nodes visited", catalog.metadata.nodes.to_string()),
        ("pruned (associativity)", catalog.metadata.pruned_associativity.to_string()),
        ("pruned (Perron root)", catalog.metadata.pruned_perron.to_string()),
        ("rejected (non-integral)", catalog.metadata.rejected_non_integral.to_string()),
        ("duplicates", catalog.metadata.duplicates.to_string()),
    ]);
    match &args.out {
        Some(path) => {
            fs::write(path, &lines).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            payload["out"] = json!(path.display().to_string());
            text.push_str(&format!("catalog written to {}\n", path.display()));
        }
        None => {
            let rings: Vec<Value> = String::from_utf8(lines)
                .expect("catalog is UTF-8")
                .lines()
                .map(|l| serde_json::from_str(l).expect("catalog line is JSON"))
                .collect();
            payload["rings"] = Value::Array(rings);
            text.push('\n');
            text.push_str(&render(&["constants", "d", "FPdim"], &rows));
        }
    }
    if args.verify {
        let v = verify_catalog(&catalog.rings);
        payload["verification"] = to_value(&v);
        text.push_str(&format!(
            "verification: {} rings, {} generators, {} violations\n",
            v.rings_checked,
            v.generators_checked,
            v.violations.len()
        ));
        for x in &v.violations {
            text.push_str(&format!("  ring {}: {} {}\n", x.ring_index, x.property, x.detail));
        }
    }
    Ok(Output::ok(payload, text))
}
