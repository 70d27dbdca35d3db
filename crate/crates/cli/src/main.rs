//! Command-line front end: exact subgroup-lattice, Moebius, census and
//! Euler-characteristic computations for PGL(3,q) and PSL(3,2^p).
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification mismatch,
//! 4 budget exceeded. All numeric output is exact; integers that may exceed
//! 2^53 are serialized as decimal strings so no JSON consumer truncates them.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mobius3::eulerchar;
use mobius3::gf::FieldSpec;
use mobius3::lattice::{enumerate, Budget};
use mobius3::pgl::{
    classify, elem, line_rep, materialize_group, Group, GroupKind, Mat, Plane,
};
use mobius3::psl3::{self, census::census, census::normalizer_orders_scan};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::io::Write as _;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mobius3",
    version,
    about = "Exact Moebius functions, subgroup lattices, overgroup censuses and \
             r-subgroup Euler characteristics for PGL(3,q) and PSL(3,2^p)",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this path instead of stdout (only written on success)
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Worker-pool size upper bound (default: MOBIUS3_THREADS or all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Pgl3,
    Psl3,
}

impl Kind {
    fn to_group_kind(self) -> GroupKind {
        match self {
            Kind::Pgl3 => GroupKind::Pgl3,
            Kind::Psl3 => GroupKind::Psl3,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Field tables and sanity data for GF(q)
    Field(FieldArgs),
    /// Materialize PGL(3,q) or PSL(3,q) and report its order
    Group(GroupArgs),
    /// Classify a single projective matrix by order and fixed structure
    Classify(ClassifyArgs),
    /// Materialize a line-table subgroup representative inside PSL(3,2^p)
    Linerep(LinerepArgs),
    /// Enumerate the full subgroup lattice up to conjugacy
    Lattice(LatticeArgs),
    /// Moebius function of the subgroup lattice, with built-in cross-checks
    Moebius(LatticeArgs),
    /// Eulerian functions phi_n and generation probabilities
    Hall(HallArgs),
    /// The 31-line closed-form table evaluated at q = 2^p
    Table4(PArgs),
    /// Empirical overgroup census inside PSL(3,8)
    Census(CensusArgs),
    /// Euler characteristic of the poset of nontrivial r-subgroups
    Eulerchar(EulerArgs),
    /// Internal consistency checks of the closed-form table
    Check(CheckArgs),
    /// Run the verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    q: u32,
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value_t = Kind::Pgl3)]
    kind: Kind,
    /// Abort if the group would exceed this many elements
    #[arg(long, default_value_t = 400_000)]
    max_group_order: u64,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    q: u32,
    /// Nine comma-separated entries, row-major
    #[arg(long)]
    matrix: String,
}

#[derive(Args)]
struct LinerepArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    line: u8,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value_t = Kind::Pgl3)]
    kind: Kind,
    #[arg(long, default_value_t = 65_000)]
    max_group_order: u64,
}

#[derive(Args)]
struct HallArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value_t = Kind::Pgl3)]
    kind: Kind,
    /// Largest n to evaluate phi_n for (n = 0..=n_max)
    #[arg(long, default_value_t = 4)]
    n_max: u32,
    #[arg(long, default_value_t = 65_000)]
    max_group_order: u64,
}

#[derive(Args)]
struct PArgs {
    #[arg(long)]
    p: u64,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Comma-separated H line ids (default: every line)
    #[arg(long)]
    lines: Option<String>,
    /// Count against all 31 candidate overgroup lines, not only nonzero-mu
    #[arg(long, default_value_t = false)]
    against_all: bool,
}

#[derive(Args)]
struct EulerArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    r: u64,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Brute,
    Chain,
    All,
}

#[derive(Args)]
struct CheckArgs {
    #[command(subcommand)]
    which: CheckCommand,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Sum of mu over all subgroups vanishes
    GlobalSum {
        /// Check the polynomial identity instead of a numeric instance
        #[arg(long, default_value_t = false)]
        symbolic: bool,
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
    /// Per-line |mu| <= [G:H] bound
    Mann {
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
    /// Closed-form table vs the independent nonzero-mu fixture
    Tables,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    profile: VerifyProfile,
}

#[derive(Subcommand)]
enum VerifyProfile {
    /// Fast checks: small lattices, symbolic identities, small Euler chars
    Quick,
    /// Adds the PSL(3,4) lattice and the q=8 scans (slow)
    Full,
}

// ---------------------------------------------------------------------------
// Exact-integer JSON helper: numbers above 2^53 become decimal strings
// ---------------------------------------------------------------------------

fn jint(b: &BigInt) -> serde_json::Value {
    const SAFE: i64 = 1 << 53;
    match b.to_i64() {
        Some(v) if (-SAFE..=SAFE).contains(&v) => serde_json::Value::from(v),
        _ => serde_json::Value::from(b.to_string()),
    }
}

fn jint_u64(v: u64) -> serde_json::Value {
    jint(&BigInt::from(v))
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("MOBIUS3_THREADS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0);
    if threads > 0 {
        // a failure here only means a pool was already installed
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let result = run(&cli);
    match result {
        Ok(body) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, body.as_bytes()) {
                    eprintln!("error: cannot write {}: {}", path.display(), e);
                    return ExitCode::from(EXIT_INVALID);
                }
            } else {
                let mut out = std::io::stdout().lock();
                let _ = out.write_all(body.as_bytes());
            }
            ExitCode::from(EXIT_OK)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Field(a) => cmd_field(a, cli.format),
        Command::Group(a) => cmd_group(a, cli.format),
        Command::Classify(a) => cmd_classify(a, cli.format),
        Command::Linerep(a) => cmd_linerep(a, cli.format),
        Command::Lattice(a) => cmd_lattice(a, cli.format, false),
        Command::Moebius(a) => cmd_lattice(a, cli.format, true),
        Command::Hall(a) => cmd_hall(a, cli.format),
        Command::Table4(a) => cmd_table4(a, cli.format),
        Command::Census(a) => cmd_census(a, cli.format),
        Command::Eulerchar(a) => cmd_eulerchar(a, cli.format),
        Command::Check(a) => cmd_check(a, cli.format),
        Command::Verify(a) => cmd_verify(a, cli.format),
    }
}

fn no_csv(format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(fail(EXIT_INVALID, "csv is not available for this subcommand"));
    }
    Ok(())
}

fn render_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// field
// ---------------------------------------------------------------------------

fn cmd_field(a: &FieldArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    let f = FieldSpec::from_q(a.q)
        .map_err(|e| fail(EXIT_INVALID, format!("q = {}: {}", a.q, e)))?;
    let modulus: Vec<u32> = f.modulus().to_vec();
    let v = serde_json::json!({
        "q": f.q(),
        "characteristic": f.p(),
        "degree": f.k(),
        "modulus_coefficients": modulus,
        "primitive_element": f.primitive(),
        "multiplicative_order": f.q() - 1,
    });
    Ok(match format {
        Format::Json => render_json(&v),
        _ => format!(
            "GF({}) = GF({}^{}), modulus {:?}, primitive element {}\n",
            f.q(),
            f.p(),
            f.k(),
            modulus,
            f.primitive()
        ),
    })
}

// ---------------------------------------------------------------------------
// group
// ---------------------------------------------------------------------------

fn build_group(q: u32, kind: Kind, max_order: u64) -> Result<Group, Failure> {
    let expected = match kind {
        Kind::Pgl3 => mobius3::pgl::group_order_pgl3(q as u64),
        Kind::Psl3 => mobius3::pgl::group_order_psl3(q as u64),
    };
    if expected > max_order {
        return Err(fail(
            EXIT_BUDGET,
            format!("group order {} exceeds budget {}", expected, max_order),
        ));
    }
    materialize_group(q, kind.to_group_kind())
        .map_err(|e| fail(EXIT_INVALID, format!("q = {}: {}", q, e)))
}

fn cmd_group(a: &GroupArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    let g = build_group(a.q, a.kind, a.max_group_order)?;
    let plane = Plane::build(a.q).expect("group implies valid plane");
    let v = serde_json::json!({
        "q": a.q,
        "kind": match a.kind { Kind::Pgl3 => "pgl3", Kind::Psl3 => "psl3" },
        "order": jint_u64(g.order()),
        "points": plane.n_points(),
        "lines": plane.n_points(),
    });
    Ok(match format {
        Format::Json => render_json(&v),
        _ => format!(
            "{}(3,{}): order {}, acting on {} points / {} lines\n",
            match a.kind { Kind::Pgl3 => "PGL", Kind::Psl3 => "PSL" },
            a.q,
            g.order(),
            plane.n_points(),
            plane.n_points()
        ),
    })
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(a: &ClassifyArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    let entries: Vec<u8> = a
        .matrix
        .split(',')
        .map(|s| s.trim().parse::<u8>())
        .collect::<Result<_, _>>()
        .map_err(|_| fail(EXIT_INVALID, "matrix must be nine comma-separated integers"))?;
    if entries.len() != 9 {
        return Err(fail(EXIT_INVALID, "matrix must have exactly nine entries"));
    }
    let plane = Plane::build(a.q)
        .map_err(|e| fail(EXIT_INVALID, format!("q = {}: {}", a.q, e)))?;
    if entries.iter().any(|&e| e as u32 >= a.q) {
        return Err(fail(EXIT_INVALID, "matrix entries must lie in 0..q"));
    }
    let mut m: Mat = [0; 9];
    m.copy_from_slice(&entries);
    let g = elem(plane.field(), m)
        .map_err(|_| fail(EXIT_INVALID, "matrix is singular over GF(q)"))?;
    let c = classify(&plane, &g);
    let v = serde_json::json!({
        "q": a.q,
        "canonical_matrix": g.mat.to_vec(),
        "class": format!("{:?}", c.tag),
        "element_order": c.order,
        "fixed_points": c.fixed_points,
        "fixed_lines": c.fixed_lines,
        "center_point": c.center,
        "axis_line": c.axis,
    });
    Ok(match format {
        Format::Json => render_json(&v),
        _ => format!(
            "{:?}: order {}, fixes {} points and {} lines{}{}\n",
            c.tag,
            c.order,
            c.fixed_points,
            c.fixed_lines,
            c.center.map(|p| format!(", center point {}", p)).unwrap_or_default(),
            c.axis.map(|l| format!(", axis line {}", l)).unwrap_or_default()
        ),
    })
}

// ---------------------------------------------------------------------------
// linerep
// ---------------------------------------------------------------------------

fn cmd_linerep(a: &LinerepArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    let rows = psl3::table4(a.p)
        .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    if a.line == 0 || a.line > 31 {
        return Err(fail(EXIT_INVALID, "line must be in 1..=31"));
    }
    let row = &rows[a.line as usize - 1];
    let order = row
        .order
        .to_u64()
        .ok_or_else(|| fail(EXIT_BUDGET, "line order too large to materialize"))?;
    if order > 1_000_000 {
        return Err(fail(EXIT_BUDGET, "line order too large to materialize"));
    }
    let q = psl3::q_of(a.p).to_u32().unwrap();
    let f = FieldSpec::from_q(q).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let rec = line_rep(&f, a.line, order, order)
        .map_err(|e| fail(EXIT_MISMATCH, format!("line {}: {}", a.line, e)))?;
    let v = serde_json::json!({
        "p": a.p,
        "q": q,
        "line": a.line,
        "name": row.name,
        "order": jint_u64(rec.order),
        "normalizer_order": jint(&row.normalizer_order),
        "mu": jint(&row.mu),
        "generators": rec.generators.iter().map(|m| m.mat.to_vec()).collect::<Vec<_>>(),
    });
    Ok(match format {
        Format::Json => render_json(&v),
        _ => {
            let mut s = format!(
                "line {} ({}): order {}, normalizer {}, mu {}\n",
                a.line, row.name, rec.order, row.normalizer_order, row.mu
            );
            for g in &rec.generators {
                let m = &g.mat;
                s.push_str(&format!(
                    "  [{} {} {} | {} {} {} | {} {} {}]\n",
                    m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8]
                ));
            }
            s
        }
    })
}

// ---------------------------------------------------------------------------
// lattice / moebius
// ---------------------------------------------------------------------------

fn cmd_lattice(a: &LatticeArgs, format: Format, with_checks: bool) -> CmdResult {
    let g = build_group(a.q, a.kind, a.max_group_order)?;
    let lat = enumerate(&g, &Budget { max_group_order: a.max_group_order })
        .map_err(|e| fail(EXIT_BUDGET, e.to_string()))?;
    if with_checks {
        for h in 0..lat.classes.len() as u32 {
            if h != lat.top() && !lat.recursion_residual(h).is_zero() {
                return Err(fail(
                    EXIT_MISMATCH,
                    format!("Moebius recursion residual nonzero at class {}", h),
                ));
            }
            if lat.chain_mu(h) != lat.mu[h as usize] {
                return Err(fail(
                    EXIT_MISMATCH,
                    format!("chain-count oracle disagrees at class {}", h),
                ));
            }
        }
    }
    let model = lat.export();
    Ok(match format {
        Format::Csv => model.to_csv(),
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&model).expect("model serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!(
                "group order {}, {} classes, {} subgroups\n",
                model.group_order,
                model.classes.len(),
                model.total_subgroups
            );
            s.push_str("order\tclass_size\tnormalizer\tmu\n");
            for c in &model.classes {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    c.order, c.class_size, c.normalizer_order, c.mu
                ));
            }
            if with_checks {
                s.push_str("checks: recursion residual 0 and chain oracle agree on every class\n");
            }
            s
        }
    })
}

// ---------------------------------------------------------------------------
// hall
// ---------------------------------------------------------------------------

fn cmd_hall(a: &HallArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    let g = build_group(a.q, a.kind, a.max_group_order)?;
    let lat = enumerate(&g, &Budget { max_group_order: a.max_group_order })
        .map_err(|e| fail(EXIT_BUDGET, e.to_string()))?;
    let mut phis = Vec::new();
    let mut probs = Vec::new();
    for n in 0..=a.n_max {
        let phi = lat.eulerian_phi(n);
        let pr = lat.gen_probability(n);
        phis.push((n, phi));
        probs.push((n, pr));
    }
    let v = serde_json::json!({
        "q": a.q,
        "kind": match a.kind { Kind::Pgl3 => "pgl3", Kind::Psl3 => "psl3" },
        "group_order": jint_u64(g.order()),
        "phi": phis.iter().map(|(n, p)| serde_json::json!({"n": n, "value": jint(p)})).collect::<Vec<_>>(),
        "gen_probability": probs
            .iter()
            .map(|(n, p)| serde_json::json!({
                "n": n,
                "numerator": jint(p.numer()),
                "denominator": jint(p.denom()),
            }))
            .collect::<Vec<_>>(),
    });
    Ok(match format {
        Format::Json => render_json(&v),
        _ => {
            let mut s = format!("group order {}\n", g.order());
            for ((n, phi), (_, pr)) in phis.iter().zip(&probs) {
                s.push_str(&format!(
                    "phi_{} = {}   P(generate with {} elements) = {}/{}\n",
                    n,
                    phi,
                    n,
                    pr.numer(),
                    pr.denom()
                ));
            }
            s
        }
    })
}

// ---------------------------------------------------------------------------
// table4
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TableLineOut {
    line: u8,
    name: &'static str,
    order: serde_json::Value,
    normalizer_order: serde_json::Value,
    mu: serde_json::Value,
    class_size: serde_json::Value,
}

fn cmd_table4(a: &PArgs, format: Format) -> CmdResult {
    let rows = psl3::table4(a.p).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let out: Vec<TableLineOut> = rows
        .iter()
        .map(|r| TableLineOut {
            line: r.line_id,
            name: r.name,
            order: jint(&r.order),
            normalizer_order: jint(&r.normalizer_order),
            mu: jint(&r.mu),
            class_size: jint(&r.class_size),
        })
        .collect();
    Ok(match format {
        Format::Json => {
            let v = serde_json::json!({
                "p": a.p,
                "q": jint(&psl3::q_of(a.p)),
                "group_order": jint(&psl3::group_order_poly().eval_int(&psl3::q_of(a.p))),
                "lines": out,
            });
            render_json(&v)
        }
        Format::Csv => {
            let mut s = String::from("line,name,order,normalizer_order,mu,class_size\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.line_id,
                    r.name.replace(',', ";"),
                    r.order,
                    r.normalizer_order,
                    r.mu,
                    r.class_size
                ));
            }
            s
        }
        Format::Text => {
            let mut s = format!("PSL(3,2^{}) = PSL(3,{})\n", a.p, psl3::q_of(a.p));
            s.push_str("line\torder\tnormalizer\tmu\tclass_size\tname\n");
            for r in &rows {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.line_id, r.order, r.normalizer_order, r.mu, r.class_size, r.name
                ));
            }
            s
        }
    })
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

fn cmd_census(a: &CensusArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    let h_lines: Vec<u8> = match &a.lines {
        Some(s) => s
            .split(',')
            .map(|x| x.trim().parse::<u8>())
            .collect::<Result<_, _>>()
            .map_err(|_| fail(EXIT_INVALID, "lines must be comma-separated integers"))?,
        None => (1..=31).collect(),
    };
    if h_lines.iter().any(|&l| l == 0 || l > 31) {
        return Err(fail(EXIT_INVALID, "line ids must be in 1..=31"));
    }
    let reports = census(a.p, &h_lines, a.against_all)
        .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let any_residual = reports.iter().any(|r| !r.residual.is_zero());
    let v = serde_json::json!({
        "p": a.p,
        "q": reports.first().map(|r| r.q).unwrap_or(0),
        "reports": reports
            .iter()
            .map(|r| serde_json::json!({
                "line": r.line_id,
                "counts": r.counts.iter().map(|c| serde_json::json!({
                    "overgroup_line": c.line,
                    "count": jint_u64(c.count),
                    "stated": c.stated.map(jint_u64),
                })).collect::<Vec<_>>(),
                "residual": jint(&r.residual),
                "notes": r.notes,
            }))
            .collect::<Vec<_>>(),
    });
    let body = match format {
        Format::Json => render_json(&v),
        _ => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&format!("line {} (q = {}):\n", r.line_id, r.q));
                for c in &r.counts {
                    s.push_str(&format!(
                        "  overgroups from line {}: {}{}\n",
                        c.line,
                        c.count,
                        c.stated
                            .map(|x| format!(" (stated: {})", x))
                            .unwrap_or_default()
                    ));
                }
                s.push_str(&format!("  residual: {}\n", r.residual));
                for n in &r.notes {
                    s.push_str(&format!("  note: {}\n", n));
                }
            }
            s
        }
    };
    if any_residual {
        eprintln!("{}", body);
        return Err(fail(EXIT_MISMATCH, "nonzero census residual"));
    }
    Ok(body)
}

// ---------------------------------------------------------------------------
// eulerchar
// ---------------------------------------------------------------------------

fn cmd_eulerchar(a: &EulerArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    let mut results: Vec<(&str, BigInt)> = Vec::new();
    let mut case = None;
    if matches!(a.method, Method::Closed | Method::All) {
        let (c, v) = eulerchar::chi_closed(a.q, a.r)
            .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
        case = Some(c);
        results.push(("closed", v));
    }
    if matches!(a.method, Method::Brute | Method::Chain | Method::All) {
        let q32 = u32::try_from(a.q).map_err(|_| fail(EXIT_INVALID, "q too large"))?;
        let order = mobius3::pgl::group_order_pgl3(a.q);
        if order > 400_000 {
            return Err(fail(
                EXIT_BUDGET,
                format!("PGL(3,{}) has {} elements; brute methods need <= 400000", a.q, order),
            ));
        }
        let g = materialize_group(q32, GroupKind::Pgl3)
            .map_err(|e| fail(EXIT_INVALID, format!("q = {}: {}", a.q, e)))?;
        if matches!(a.method, Method::Brute | Method::All) {
            let v = eulerchar::chi_bruteforce(&g, a.r)
                .map_err(|e| fail(EXIT_BUDGET, e.to_string()))?;
            results.push(("brute", v));
        }
        if matches!(a.method, Method::Chain) {
            let v = eulerchar::chi_chaincount(&g, a.r)
                .map_err(|e| fail(EXIT_BUDGET, e.to_string()))?;
            results.push(("chain", v));
        } else if matches!(a.method, Method::All) {
            // in combined mode a chain poset above budget is skipped, not fatal
            match eulerchar::chi_chaincount(&g, a.r) {
                Ok(v) => results.push(("chain", v)),
                Err(eulerchar::EulerError::BudgetExceeded(_)) => {}
                Err(e) => return Err(fail(EXIT_INVALID, e.to_string())),
            }
        }
    }
    let all_equal = results.windows(2).all(|w| w[0].1 == w[1].1);
    let v = serde_json::json!({
        "q": a.q,
        "r": a.r,
        "case": case.map(|c| serde_json::to_value(c).unwrap()),
        "values": results
            .iter()
            .map(|(m, v)| serde_json::json!({"method": m, "chi": jint(v)}))
            .collect::<Vec<_>>(),
        "agree": all_equal,
    });
    let body = match format {
        Format::Json => render_json(&v),
        _ => {
            let mut s = format!("q = {}, r = {}\n", a.q, a.r);
            if let Some(c) = &case {
                s.push_str(&format!("case: {}\n", serde_json::to_value(c).unwrap().as_str().unwrap()));
            }
            for (m, val) in &results {
                s.push_str(&format!("chi ({}) = {}\n", m, val));
            }
            s
        }
    };
    if !all_equal {
        eprintln!("{}", body);
        return Err(fail(EXIT_MISMATCH, "methods disagree"));
    }
    Ok(body)
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(a: &CheckArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    match &a.which {
        CheckCommand::GlobalSum { symbolic, p } => {
            if *symbolic {
                let res = psl3::global_sum_symbolic();
                if !res.is_zero() {
                    return Err(fail(
                        EXIT_MISMATCH,
                        format!("symbolic global-sum residual: {}", res),
                    ));
                }
                Ok(match format {
                    Format::Json => render_json(&serde_json::json!({
                        "check": "global-sum",
                        "symbolic": true,
                        "residual": "0",
                    })),
                    _ => "residual: 0\n".to_string(),
                })
            } else {
                let res = psl3::global_sum_numeric(*p)
                    .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
                if !res.is_zero() {
                    return Err(fail(
                        EXIT_MISMATCH,
                        format!("numeric global-sum residual at p = {}: {}", p, res),
                    ));
                }
                Ok(match format {
                    Format::Json => render_json(&serde_json::json!({
                        "check": "global-sum",
                        "p": p,
                        "residual": "0",
                    })),
                    _ => "residual: 0\n".to_string(),
                })
            }
        }
        CheckCommand::Mann { p } => {
            let rep = psl3::mann_check(*p).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            let ok = rep.max_ratio <= num_rational_one();
            let body = match format {
                Format::Json => render_json(&serde_json::json!({
                    "check": "mann",
                    "p": p,
                    "max_ratio_numerator": jint(rep.max_ratio.numer()),
                    "max_ratio_denominator": jint(rep.max_ratio.denom()),
                    "bound_holds": ok,
                })),
                _ => format!(
                    "max |mu|/[G:H] = {}/{} ({})\n",
                    rep.max_ratio.numer(),
                    rep.max_ratio.denom(),
                    if ok { "bound holds" } else { "bound VIOLATED" }
                ),
            };
            if !ok {
                return Err(fail(EXIT_MISMATCH, "index bound violated"));
            }
            Ok(body)
        }
        CheckCommand::Tables => {
            let rep = psl3::consistency_check();
            let body = match format {
                Format::Json => render_json(&serde_json::json!({
                    "check": "tables",
                    "matched_rows": rep.matched_rows,
                    "mismatches": rep.mismatches,
                })),
                _ => format!(
                    "matched rows: {}; mismatches: {:?}\n",
                    rep.matched_rows, rep.mismatches
                ),
            };
            if !rep.ok() {
                eprintln!("{}", body);
                return Err(fail(EXIT_MISMATCH, "table fixtures disagree"));
            }
            Ok(body)
        }
    }
}

fn num_rational_one() -> num_rational::BigRational {
    num_rational::BigRational::from_integer(BigInt::from(1))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct CheckRow {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn run_check(
    rows: &mut Vec<CheckRow>,
    name: &'static str,
    f: impl FnOnce() -> Result<String, String>,
) {
    let started = std::time::Instant::now();
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let detail = format!("{} [{:.1}s]", detail, started.elapsed().as_secs_f64());
    rows.push(CheckRow { name, passed, detail });
}

fn cmd_verify(a: &VerifyArgs, format: Format) -> CmdResult {
    no_csv(format)?;
    let full = matches!(a.profile, VerifyProfile::Full);
    let mut rows: Vec<CheckRow> = Vec::new();

    run_check(&mut rows, "plane-and-group-sanity", || {
        for q in [2u32, 3, 4, 5, 8] {
            let plane = Plane::build(q).map_err(|e| e.to_string())?;
            if plane.n_points() as u64 != (q as u64) * (q as u64) + q as u64 + 1 {
                return Err(format!("wrong point count at q = {}", q));
            }
        }
        for q in [2u32, 3] {
            let g = materialize_group(q, GroupKind::Pgl3).map_err(|e| e.to_string())?;
            if g.order() != mobius3::pgl::group_order_pgl3(q as u64) {
                return Err(format!("wrong group order at q = {}", q));
            }
        }
        Ok("planes q in {2,3,4,5,8}; groups q in {2,3}".into())
    });

    run_check(&mut rows, "psl32-lattice", || {
        let g = materialize_group(2, GroupKind::Pgl3).map_err(|e| e.to_string())?;
        let lat = enumerate(&g, &Budget::default()).map_err(|e| e.to_string())?;
        for h in 0..lat.classes.len() as u32 {
            if h != lat.top() && !lat.recursion_residual(h).is_zero() {
                return Err(format!("residual nonzero at class {}", h));
            }
            if lat.chain_mu(h) != lat.mu[h as usize] {
                return Err(format!("chain oracle disagrees at class {}", h));
            }
            if !lat.mu[h as usize].is_zero() && !lat.is_intersection_of_maximals(h) {
                return Err(format!(
                    "nonzero-mu class {} is not an intersection of maximals",
                    h
                ));
            }
        }
        Ok(format!("{} subgroups, all oracles agree", lat.total_subgroups))
    });

    run_check(&mut rows, "table-identities", || {
        if !psl3::global_sum_symbolic().is_zero() {
            return Err("symbolic global sum nonzero".into());
        }
        for p in [3u64, 5, 7] {
            let r = psl3::global_sum_numeric(p).map_err(|e| e.to_string())?;
            if !r.is_zero() {
                return Err(format!("numeric global sum nonzero at p = {}", p));
            }
            let m = psl3::mann_check(p).map_err(|e| e.to_string())?;
            if m.max_ratio > num_rational_one() {
                return Err(format!("index bound violated at p = {}", p));
            }
        }
        let c = psl3::consistency_check();
        if !c.ok() {
            return Err(format!("fixture mismatches: {:?}", c.mismatches));
        }
        Ok("symbolic + numeric p in {3,5,7} + fixture".into())
    });

    run_check(&mut rows, "euler-characteristics", || {
        let qs: &[u64] = if full { &[2, 3, 4, 5] } else { &[2, 3] };
        for &q in qs {
            let g = materialize_group(q as u32, GroupKind::Pgl3).map_err(|e| e.to_string())?;
            let order = g.order();
            for r in [2u64, 3, 5, 7, 13, 31] {
                if order % r != 0 {
                    continue;
                }
                let (_, closed) = eulerchar::chi_closed(q, r).map_err(|e| e.to_string())?;
                let brute = eulerchar::chi_bruteforce(&g, r).map_err(|e| e.to_string())?;
                if closed != brute {
                    return Err(format!("closed != brute at q = {}, r = {}", q, r));
                }
                if q <= 3 {
                    let chain = eulerchar::chi_chaincount(&g, r).map_err(|e| e.to_string())?;
                    if chain != closed {
                        return Err(format!("chain != closed at q = {}, r = {}", q, r));
                    }
                }
            }
        }
        Ok(format!("q in {:?}, every dividing r", qs))
    });

    run_check(&mut rows, "hall-phi", || {
        let g = materialize_group(2, GroupKind::Pgl3).map_err(|e| e.to_string())?;
        let lat = enumerate(&g, &Budget::default()).map_err(|e| e.to_string())?;
        if !lat.eulerian_phi(0).is_zero() || !lat.eulerian_phi(1).is_zero() {
            return Err("phi_0 or phi_1 nonzero for a noncyclic group".into());
        }
        let mut pairs = 0u64;
        let n = g.order() as u32;
        for a in 0..n {
            for b in 0..n {
                if g.closure_ids(&[a, b], g.order() as usize).map(|s| s.len() as u64)
                    == Some(g.order())
                {
                    pairs += 1;
                }
            }
        }
        if lat.eulerian_phi(2) != BigInt::from(pairs) {
            return Err(format!(
                "phi_2 = {} but exhaustive count = {}",
                lat.eulerian_phi(2),
                pairs
            ));
        }
        Ok(format!("phi_2 = {} matches exhaustive count", pairs))
    });

    if full {
        run_check(&mut rows, "psl34-lattice-vs-fixture", || {
            let g = materialize_group(4, GroupKind::Psl3).map_err(|e| e.to_string())?;
            let lat = enumerate(&g, &Budget::default()).map_err(|e| e.to_string())?;
            verify_table2(&lat)
        });
        run_check(&mut rows, "q8-normalizer-scan", || {
            let lines = [17u8, 23, 25, 26, 29, 30];
            let scanned =
                normalizer_orders_scan(3, &lines).map_err(|e| e.to_string())?;
            let rows4 = psl3::table4(3).map_err(|e| e.to_string())?;
            for (line, found) in scanned {
                let expected = &rows4[line as usize - 1].normalizer_order;
                if BigInt::from(found) != *expected {
                    return Err(format!(
                        "line {}: scanned {} vs closed form {}",
                        line, found, expected
                    ));
                }
            }
            Ok("six normalizer orders match the polynomials".into())
        });
        run_check(&mut rows, "q8-census", || {
            let all: Vec<u8> = (1..=31).collect();
            let reports = census(3, &all, false).map_err(|e| e.to_string())?;
            for r in &reports {
                if !r.residual.is_zero() {
                    return Err(format!("line {}: residual {}", r.line_id, r.residual));
                }
            }
            Ok("all 31 residuals are zero".into())
        });
    }

    let all_pass = rows.iter().all(|r| r.passed);
    let body = match format {
        Format::Json => render_json(&serde_json::json!({
            "profile": if full { "full" } else { "quick" },
            "checks": rows
                .iter()
                .map(|r| serde_json::json!({
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                }))
                .collect::<Vec<_>>(),
            "all_passed": all_pass,
        })),
        _ => {
            let mut s = String::new();
            for r in &rows {
                s.push_str(&format!(
                    "{} {:<28} {}\n",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                ));
            }
            s.push_str(if all_pass { "all checks passed\n" } else { "FAILURES present\n" });
            s
        }
    };
    if !all_pass {
        eprintln!("{}", body);
        return Err(fail(EXIT_MISMATCH, "verification failed"));
    }
    Ok(body)
}

/// Compare an enumerated PSL(3,4) lattice against the 20-row reference
/// fixture: for every (order, mu) bucket the number of conjugacy classes
/// must match, and no enumerated class may carry a nonzero mu outside the
/// fixture's buckets.
fn verify_table2(lat: &mobius3::lattice::Lattice) -> Result<String, String> {
    use std::collections::BTreeMap;
    let fixture = psl3::table2_fixture();
    let mut wanted: BTreeMap<(u64, BigInt), u32> = BTreeMap::new();
    for row in &fixture {
        *wanted.entry((row.order, BigInt::from(row.mu))).or_default() += row.classes;
    }
    let mut got: BTreeMap<(u64, BigInt), u32> = BTreeMap::new();
    for (i, c) in lat.classes.iter().enumerate() {
        if !lat.mu[i].is_zero() {
            *got.entry((c.order, lat.mu[i].clone())).or_default() += 1;
        }
    }
    if wanted != got {
        for (k, v) in &wanted {
            if got.get(k) != Some(v) {
                return Err(format!(
                    "bucket order {} mu {}: fixture wants {} classes, found {}",
                    k.0,
                    k.1,
                    v,
                    got.get(k).copied().unwrap_or(0)
                ));
            }
        }
        for (k, v) in &got {
            if wanted.get(k) != Some(v) {
                return Err(format!(
                    "unexpected nonzero-mu bucket: order {} mu {} with {} classes",
                    k.0, k.1, v
                ));
            }
        }
    }
    Ok(format!(
        "{} fixture rows matched over {} enumerated classes",
        fixture.len(),
        lat.classes.len()
    ))
}
