use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use charlier::exact_eval::eval_recurrence;
use charlier::region_router::{classify, evaluate as route, evaluate_formula, RouterConfig};
use charlier::zeros::{corollary_gap, density_histogram, find_zeros_unbounded, zero_upper_bound, PredictionSource, MAX_SCAN_DEGREE};
use charlier::{Error, ErrorOrder, FormulaTag, LogComplex, Params, PrecisionPolicy, Sign};

use crate::literature::Against;
use crate::point::{parse_degrees, parse_list};
use crate::table::{fmt_num, Field, Table};
use crate::{CliError, Common, CompareArgs, EvalArgs, PointArgs, RegionmapArgs, ZerosArgs, MAX_GRID_POINTS, SLOW_DEGREE};

fn params(common: &Common) -> Result<Params, CliError> {
    let policy = PrecisionPolicy::default()
        .with_bits(common.precision_bits)
        .map_err(|e| CliError::Usage(format!("--precision-bits: {e}")))?;
    Params::with_precision(common.a, policy).map_err(|e| CliError::Usage(format!("--a: {e}")))
}

fn pool(common: &Common) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(common.workers)
        .build()
        .map_err(|e| CliError::Failure(format!("thread pool: {e}")))
}

fn check_slow(common: &Common, ns: &[usize]) -> Result<(), CliError> {
    match ns.last() {
        Some(&n) if n > SLOW_DEGREE && !common.allow_slow => {
            Err(CliError::Usage(format!("the oracle at n = {n} > {SLOW_DEGREE} is slow; pass --allow-slow")))
        }
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Method {
    Oracle,
    Auto,
    Formula(FormulaTag),
}

impl Method {
    fn label(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Auto => "auto",
            Method::Formula(t) => t.as_str(),
        }
    }
}

impl FromStr for Method {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "oracle" => Ok(Method::Oracle),
            "auto" => Ok(Method::Auto),
            other => other.parse().map(Method::Formula).map_err(|e| CliError::Usage(format!("--formula: {e}"))),
        }
    }
}

struct Evaluated {
    value: LogComplex<f64>,
    formula: &'static str,
    order: Option<ErrorOrder>,
    note: Option<String>,
}

impl Evaluated {
    fn order_str(&self) -> &'static str {
        self.order.map_or("exact", ErrorOrder::as_str)
    }
}

fn evaluate(p: &Params, n: usize, x: Complex64, method: Method) -> Result<Evaluated, Error> {
    match method {
        Method::Oracle => {
            eval_recurrence(p, n, x).map(|value| Evaluated { value, formula: "oracle", order: None, note: None })
        }
        Method::Auto => {
            let r = route(p, n, x)?;
            Ok(Evaluated {
                value: r.result.value,
                formula: r.result.formula.as_str(),
                order: Some(r.result.error_order),
                note: r.note,
            })
        }
        Method::Formula(tag) => {
            let r = evaluate_formula(p, n, x, tag)?;
            Ok(Evaluated { value: r.value, formula: tag.as_str(), order: Some(r.error_order), note: None })
        }
    }
}

fn method_error(method: Method, e: Error) -> CliError {
    match (method, e) {
        (Method::Oracle, e) | (_, e @ Error::PrecisionExhausted { .. }) => CliError::Failure(e.to_string()),
        (_, e) => CliError::Precondition(format!("formula precondition violated: {e}")),
    }
}

#[derive(Clone, Copy, Debug)]
enum Coord {
    X,
    Y,
    T,
    Theta,
}

fn parse_points(args: &PointArgs) -> Result<Option<(Coord, Vec<Complex64>)>, CliError> {
    let (coord, raw) = match args {
        PointArgs { x: Some(s), .. } => (Coord::X, s),
        PointArgs { y: Some(s), .. } => (Coord::Y, s),
        PointArgs { t: Some(s), .. } => (Coord::T, s),
        PointArgs { theta: Some(s), .. } => (Coord::Theta, s),
        _ => return Ok(None),
    };
    Ok(Some((coord, parse_list(raw)?)))
}

fn to_x(coord: Coord, v: Complex64, a: f64, n: usize) -> Complex64 {
    let nf = n as f64;
    let x = match coord {
        Coord::X => v,
        Coord::Y => v * nf,
        Coord::T => v * nf.sqrt() + nf,
        Coord::Theta if v.im == 0.0 => Complex64::new(nf + 2.0 * a.sqrt() * v.re.cos() * nf.sqrt(), 0.0),
        Coord::Theta => v.cos() * (2.0 * a.sqrt() * nf.sqrt()) + nf,
    };
    // Keep -0 out of the output.
    Complex64::new(x.re + 0.0, x.im + 0.0)
}

fn fmt_point(x: Complex64) -> String {
    if x.im == 0.0 {
        format!("{}", x.re)
    } else {
        format!("{}{:+}i", x.re, x.im)
    }
}

fn sign_field(v: &LogComplex<f64>) -> Field {
    if v.is_zero() {
        return Field::text("0");
    }
    match v.to_signed_log(1e-12).map(|s| s.sign()) {
        Ok(Sign::Negative) => Field::text("-"),
        Ok(_) => Field::text("+"),
        Err(_) => Field::Empty,
    }
}

/// A plain decimal for moderate magnitudes, rounded to 15 significant digits.
fn decimal(v: &LogComplex<f64>) -> Option<String> {
    if v.is_zero() {
        return Some("0".into());
    }
    if !v.log_mod.is_finite() || v.log10_mod().abs() > 15.0 {
        return None;
    }
    let round = |u: f64| format!("{u:.14e}").parse::<f64>().unwrap_or(u);
    match v.to_signed_log(1e-12) {
        Ok(s) => {
            let m = round(v.log_mod.exp());
            Some(format!("{}", if s.sign() == Sign::Negative { -m } else { m }))
        }
        Err(_) => {
            let z = v.to_complex();
            Some(fmt_point(Complex64::new(round(z.re), round(z.im))))
        }
    }
}

const EVAL_HEADERS: [&str; 10] =
    ["n", "x_re", "x_im", "formula", "error_order", "sign", "phase", "log10_abs", "decimal", "note"];

pub(crate) fn eval(args: &EvalArgs) -> Result<(Table, String), CliError> {
    let p = params(&args.common)?;
    let ns = parse_degrees(&args.n)?;
    let method = args.formula.as_deref().map_or(Ok(Method::Oracle), str::parse)?;
    if method == Method::Oracle {
        check_slow(&args.common, &ns)?;
    }
    let (coord, vals) = parse_points(&args.points)?
        .ok_or_else(|| CliError::Usage("eval needs one of --x, --y, --t, --theta".into()))?;
    if vals.is_empty() {
        return Err(CliError::Usage("empty point set".into()));
    }
    let mut table = Table::new("eval", EVAL_HEADERS.to_vec());
    table.meta.push(("a", Field::Num(args.common.a)));
    let mut text = String::new();
    for &n in &ns {
        for &v in &vals {
            let x = to_x(coord, v, args.common.a, n);
            let r = evaluate(&p, n, x, method).map_err(|e| method_error(method, e))?;
            let dec = decimal(&r.value);
            let sign = sign_field(&r.value);
            let _ = write!(text, "n={n} x={} formula={} error_order={}", fmt_point(x), r.formula, r.order_str());
            match &sign {
                Field::Text(s) => {
                    let _ = write!(text, " sign={s}");
                }
                _ => {
                    let _ = write!(text, " phase={}", fmt_num(r.value.phase));
                }
            }
            let _ = write!(text, " log10_abs={}", fmt_num(r.value.log10_mod()));
            if let Some(d) = &dec {
                let _ = write!(text, " value={d}");
            }
            if let Some(note) = &r.note {
                let _ = write!(text, " note={note:?}");
            }
            text.push('\n');
            table.push(vec![
                Field::Int(n as i64),
                Field::Num(x.re),
                Field::Num(x.im),
                Field::text(r.formula),
                Field::text(r.order_str()),
                sign,
                Field::Num(r.value.phase),
                Field::Num(r.value.log10_mod()),
                dec.map_or(Field::Empty, Field::Text),
                r.note.map_or(Field::Empty, Field::Text),
            ]);
        }
    }
    Ok((table, text))
}

const COMPARE_HEADERS: [&str; 13] = [
    "n",
    "point",
    "x_re",
    "x_im",
    "formula",
    "error_order",
    "oracle_log10",
    "oracle_phase",
    "formula_log10",
    "formula_phase",
    "rel_err",
    "scaled_err",
    "status",
];

const AGAINST_HEADERS: [&str; 6] =
    ["against", "against_param", "against_log10", "against_phase", "against_rel_err", "against_vs_formula"];

pub(crate) fn compare(args: &CompareArgs) -> Result<Table, CliError> {
    let p = params(&args.common)?;
    let a = args.common.a;
    let ns = parse_degrees(&args.n)?;
    check_slow(&args.common, &ns)?;
    let methods = args
        .formula
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Method>, _>>()?;
    if methods.is_empty() {
        return Err(CliError::Usage("--formula needs at least one entry".into()));
    }
    let pts = parse_points(&args.points)?;
    let tasks: Vec<(usize, usize, Complex64)> = ns
        .iter()
        .flat_map(|&n| {
            let xs: Vec<Complex64> = match &pts {
                Some((coord, vals)) => vals.iter().map(|&v| to_x(*coord, v, a, n)).collect(),
                None => args.against.and_then(|ag| ag.default_x(a, n)).map(|x| Complex64::new(x, 0.0)).into_iter().collect(),
            };
            xs.into_iter().enumerate().map(move |(i, x)| (n, i, x))
        })
        .collect();
    if tasks.is_empty() {
        return Err(CliError::Usage("empty point set".into()));
    }

    let mut headers = COMPARE_HEADERS.to_vec();
    if args.against.is_some() {
        headers.extend(AGAINST_HEADERS);
    }
    let mut table = Table::new("compare", headers);
    table.meta.push(("a", Field::Num(a)));
    let rows: Vec<Vec<Vec<Field>>> = pool(&args.common)?.install(|| {
        tasks.par_iter().map(|&(n, i, x)| compare_rows(&p, a, n, i, x, &methods, args.against)).collect()
    });
    rows.into_iter().flatten().for_each(|r| table.push(r));
    Ok(table)
}

fn log_fields(v: Option<&LogComplex<f64>>) -> [Field; 2] {
    match v {
        Some(v) => [Field::Num(v.log10_mod()), Field::Num(v.phase)],
        None => [Field::Empty, Field::Empty],
    }
}

fn compare_rows(
    p: &Params,
    a: f64,
    n: usize,
    i: usize,
    x: Complex64,
    methods: &[Method],
    against: Option<Against>,
) -> Vec<Vec<Field>> {
    let oracle = eval_recurrence(p, n, x);
    let lit = against.filter(|_| x.im == 0.0).map(|ag| (ag, ag.param(a, n, x.re), ag.value_at(a, n, x.re)));
    methods
        .iter()
        .map(|&m| {
            let res = evaluate(p, n, x, m);
            let value = res.as_ref().ok().map(|r| &r.value);
            let rel = match (&oracle, value) {
                (Ok(o), Some(v)) => Some(v.rel_err(o)),
                _ => None,
            };
            let order = res.as_ref().ok().and_then(|r| r.order);
            let status = match (&oracle, &res) {
                (Err(e), _) => format!("oracle_failed: {e}"),
                (_, Err(e)) => format!("not_applicable: {e}"),
                (_, Ok(Evaluated { note: Some(note), .. })) => format!("fallback: {note}"),
                _ => "ok".into(),
            };
            let mut row = vec![
                Field::Int(n as i64),
                Field::Int(i as i64),
                Field::Num(x.re),
                Field::Num(x.im),
                Field::text(res.as_ref().map_or(m.label(), |r| r.formula)),
                Field::text(res.as_ref().map_or("", Evaluated::order_str)),
            ];
            row.extend(log_fields(oracle.as_ref().ok()));
            row.extend(log_fields(value));
            row.push(Field::opt_num(rel));
            row.push(Field::opt_num(rel.zip(order).map(|(r, o)| r * (n as f64).powf(o.power()))));
            row.push(Field::Text(status));
            if let Some(ag) = against {
                row.push(Field::text(ag.as_str()));
                match &lit {
                    Some((_, param, lv)) => {
                        row.push(Field::Num(*param));
                        row.extend(log_fields(Some(lv)));
                        row.push(Field::opt_num(oracle.as_ref().ok().map(|o| lv.rel_err(o))));
                        row.push(Field::opt_num(value.map(|v| lv.rel_err(v))));
                    }
                    None => row.extend(std::iter::repeat(Field::Empty).take(AGAINST_HEADERS.len() - 1)),
                }
            }
            row
        })
        .collect()
}

const REGION_HEADERS: [&str; 10] =
    ["i", "j", "y_re", "y_im", "zone", "primary", "alternates", "satisfiable", "max_disagreement", "status"];

fn lerp(lo: f64, hi: f64, k: usize, m: usize) -> f64 {
    if m == 1 {
        lo
    } else {
        lo + (hi - lo) * k as f64 / (m - 1) as f64
    }
}

pub(crate) fn regionmap(args: &RegionmapArgs) -> Result<Table, CliError> {
    let p = params(&args.common)?;
    let n = args.n;
    let n_min = RouterConfig::default().n_min;
    if n < n_min {
        return Err(CliError::Usage(format!("regionmap needs --n >= {n_min}")));
    }
    let cells = args.nx.checked_mul(args.ny).unwrap_or(usize::MAX);
    if cells == 0 || cells > MAX_GRID_POINTS {
        return Err(CliError::Usage(format!("grid of {} x {} cells must hold 1 to {MAX_GRID_POINTS} points", args.nx, args.ny)));
    }
    if !(args.re_min <= args.re_max && args.im_min <= args.im_max) {
        return Err(CliError::Usage("rectangle bounds must satisfy min <= max".into()));
    }
    let coords: Vec<(usize, usize)> = (0..args.nx).flat_map(|i| (0..args.ny).map(move |j| (i, j))).collect();
    let mut table = Table::new("regionmap", REGION_HEADERS.to_vec());
    table.meta.push(("a", Field::Num(args.common.a)));
    table.meta.push(("n", Field::Int(n as i64)));
    let rows: Vec<Vec<Field>> = pool(&args.common)?.install(|| {
        coords
            .par_iter()
            .map(|&(i, j)| {
                let y = Complex64::new(lerp(args.re_min, args.re_max, i, args.nx), lerp(args.im_min, args.im_max, j, args.ny));
                region_row(&p, n, i, j, y)
            })
            .collect()
    });
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn region_row(p: &Params, n: usize, i: usize, j: usize, y: Complex64) -> Vec<Field> {
    let x = y * n as f64;
    let mut row = vec![Field::Int(i as i64), Field::Int(j as i64), Field::Num(y.re), Field::Num(y.im)];
    let joined = |alts: &[FormulaTag]| alts.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(";");
    match route(p, n, x) {
        Ok(r) => {
            let ok = r.alternates.iter().filter(|(_, v)| v.is_ok()).count() + usize::from(r.note.is_none());
            let max = r.disagreements.iter().map(|d| d.rel_diff).reduce(f64::max);
            row.extend([
                Field::text(r.decision.rationale.as_str()),
                Field::text(r.result.formula.as_str()),
                Field::Text(joined(&r.decision.alternates)),
                Field::Int(ok as i64),
                Field::opt_num(max),
                Field::Text(r.note.map_or_else(|| "ok".into(), |n| format!("fallback: {n}"))),
            ]);
        }
        Err(e) => match classify(p, n, x) {
            Ok(d) => row.extend([
                Field::text(d.rationale.as_str()),
                Field::text(d.primary_formula.as_str()),
                Field::Text(joined(&d.alternates)),
                Field::Int(0),
                Field::Empty,
                Field::Text(format!("failed: {e}")),
            ]),
            Err(e) => row.extend([
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Int(0),
                Field::Empty,
                Field::Text(format!("unclassified: {e}")),
            ]),
        },
    }
    row
}

const ZERO_HEADERS: [&str; 3] = ["n", "k", "x_empirical"];
const PREDICTION_HEADERS: [&str; 5] =
    ["x_predicted", "prediction_source", "abs_gap", "integer_offset_sign", "integer_offset_log10"];
const DENSITY_HEADERS: [&str; 5] = ["n", "y_lo", "y_hi", "count", "height"];

pub(crate) fn zeros(args: &ZerosArgs) -> Result<Table, CliError> {
    let p = params(&args.common)?;
    let a = args.common.a;
    let ns = parse_degrees(&args.n)?;
    if ns.contains(&0) {
        return Err(CliError::Usage("C_0 has no zeros".into()));
    }
    if args.bins == 0 {
        return Err(CliError::Usage("--bins must be positive".into()));
    }
    if let Some(&n) = ns.last().filter(|&&n| n > MAX_SCAN_DEGREE && !args.common.allow_slow) {
        return Err(CliError::Usage(format!("zero scans at n = {n} > {MAX_SCAN_DEGREE} are slow; pass --allow-slow")));
    }
    let pool = pool(&args.common)?;
    let headers = if args.density {
        DENSITY_HEADERS.to_vec()
    } else if args.predictions {
        ZERO_HEADERS.iter().chain(&PREDICTION_HEADERS).copied().collect()
    } else {
        ZERO_HEADERS.to_vec()
    };
    let mut table = Table::new("zeros", headers);
    table.meta.push(("a", Field::Num(a)));
    for &n in &ns {
        let lo = args.lo.unwrap_or(-0.5);
        let hi = args.hi.unwrap_or_else(|| zero_upper_bound(a, n));
        if !(lo < hi) {
            return Err(CliError::Usage(format!("scan interval [{lo}, {hi}] is empty")));
        }
        let reports = pool.install(|| find_zeros_unbounded(&p, n, lo, hi)).map_err(scan_error)?;
        if args.density {
            let xs: Vec<f64> = reports.iter().map(|r| r.x_empirical).collect();
            for b in density_histogram(&xs, n, args.bins) {
                table.push(vec![
                    Field::Int(n as i64),
                    Field::Num(b.y_lo),
                    Field::Num(b.y_hi),
                    Field::Int(b.count as i64),
                    Field::Num(b.height),
                ]);
            }
            continue;
        }
        let offsets: Vec<[Field; 2]> = if args.predictions {
            pool.install(|| {
                reports
                    .par_iter()
                    .map(|r| {
                        let anchored = r.prediction_source == PredictionSource::CorollaryInteger
                            && r.x_predicted == (r.k - 1) as f64;
                        match anchored.then(|| corollary_gap(&p, n, r.k)) {
                            Some(Ok(g)) => [sign_of(g.sign()), Field::Num(g.log_abs() / std::f64::consts::LN_10)],
                            _ => [Field::Empty, Field::Empty],
                        }
                    })
                    .collect()
            })
        } else {
            Vec::new()
        };
        for (idx, r) in reports.iter().enumerate() {
            let mut row = vec![Field::Int(n as i64), Field::Int(r.k as i64), Field::Num(r.x_empirical)];
            if args.predictions {
                row.extend([
                    Field::Num(r.x_predicted),
                    Field::text(r.prediction_source.as_str()),
                    Field::Num(r.abs_gap),
                ]);
                row.extend(offsets[idx].clone());
            }
            table.push(row);
        }
    }
    Ok(table)
}

fn scan_error(e: Error) -> CliError {
    match e {
        Error::IncompleteScan { found, expected } => CliError::IncompleteScan { found, expected },
        other => CliError::Failure(other.to_string()),
    }
}

fn sign_of(s: Sign) -> Field {
    Field::text(match s {
        Sign::Negative => "-",
        Sign::Zero => "0",
        Sign::Positive => "+",
    })
}
