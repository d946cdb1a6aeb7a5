use anyhow::Result;
use gaussbound::bounds::{self, table1_factors};
use gaussbound::experiments::{self, BoundReport, PUBLISHED_EXAMPLE1, PUBLISHED_EXAMPLE2};
use gaussbound::testbed::{chebyshev_mode, corner_family, exp_function};
use gaussbound::verify::{run_all, VerifyConfig};
use gaussbound::{golub_welsch, WeightSpec};
use serde_json::{json, Value};

use crate::report::{Cell, Report, Row, Style};
use crate::{BoundKind, Command, OutputArgs, ParamError, WeightArgs};

/// The six standard `(N, r)` rows.
const TABLE1_ROWS: [(u32, u32); 6] = [(10, 5), (20, 10), (30, 15), (10, 9), (20, 19), (30, 29)];

/// Published `(β, θ, ratio)` for the standard rows, shown with `--paper-values`.
const PUBLISHED_TABLE1: [(&str, &str, &str); 6] = [
    ("4.10e-7", "2.02e-7", "2.0"),
    ("2.88e-12", "1.14e-12", "2.5"),
    ("5.22e-20", "2.03e-20", "2.6"),
    ("", "", "8.7"),
    ("", "", "848.5"),
    ("", "", "2.48e6"),
];

fn param(msg: impl Into<String>) -> anyhow::Error {
    ParamError(msg.into()).into()
}

fn base_config(out: &OutputArgs, fields: Value) -> Value {
    let mut config = fields;
    let map = config.as_object_mut().expect("config is an object");
    map.insert("format".into(), json!(out.format));
    map.insert("out".into(), json!(out.out.as_ref().map(|p| p.display().to_string())));
    map.insert("paper_values".into(), json!(out.paper_values));
    config
}

fn resolve_weight(args: &WeightArgs) -> Result<WeightSpec> {
    Ok(match args.lambda {
        Some(lambda) => WeightSpec::gegenbauer(lambda)?,
        None => args.weight,
    })
}

fn check_sizes(n_list: &[u32]) -> Result<()> {
    if n_list.is_empty() {
        return Err(param("--N needs at least one rule size"));
    }
    if let Some(n) = n_list.iter().find(|&&n| n == 0) {
        return Err(param(format!("rule sizes must be positive, got {n}")));
    }
    Ok(())
}

pub fn execute(command: Command, out: &OutputArgs) -> Result<Report> {
    match command {
        Command::Table1 { n, r } => table1(n, r, out),
        Command::Example1 { t, j, n, weight } => {
            check_sizes(&n)?;
            let weight = resolve_weight(&weight)?;
            let mut sorted = n.clone();
            sorted.sort_unstable();
            let rows = experiments::example1(t, j, &sorted, weight)?;
            let config = json!({ "t": t, "j": j, "N": sorted, "r": j, "weight": weight.to_string() });
            let published = out.paper_values.then(|| published_example1(&PUBLISHED_EXAMPLE1));
            Ok(example_report("example1", base_config(out, config), &rows, published))
        }
        Command::Example2 { r, n, weight } => {
            check_sizes(&n)?;
            let weight = resolve_weight(&weight)?;
            let mut sorted = n.clone();
            sorted.sort_unstable();
            let rows = experiments::example2(r, &sorted, weight)?;
            let config = json!({ "N": sorted, "r": r, "weight": weight.to_string() });
            let published = out.paper_values.then(|| published_example2(&PUBLISHED_EXAMPLE2));
            Ok(example_report("example2", base_config(out, config), &rows, published))
        }
        Command::Verify { max_n, max_r, perturb } => {
            let cfg = VerifyConfig { max_n, max_r, perturb };
            cfg.validate()?;
            let mut config = json!({ "max_n": max_n, "max_r": max_r });
            if perturb {
                config["perturb"] = json!(true);
            }
            let mut report = Report::new("verify", base_config(out, config));
            report.suites = run_all(&cfg)?;
            Ok(report)
        }
        Command::Rule { weight, n, lambda } => {
            let weight = match lambda {
                Some(l) => WeightSpec::gegenbauer(l)?,
                None => weight,
            };
            let rule = golub_welsch(weight, n)?;
            let config = json!({ "weight": weight.to_string(), "lambda": weight.lambda(), "N": n });
            let mut report = Report::new("rule", base_config(out, config));
            report.rows = rule
                .nodes()
                .iter()
                .zip(rule.weights())
                .enumerate()
                .map(|(i, (&x, &w))| {
                    vec![
                        ("i", Cell::Int(i as i64)),
                        ("node", Cell::Float(x, Style::Sig10)),
                        ("weight", Cell::Float(w, Style::Sig10)),
                    ]
                })
                .collect();
            Ok(report)
        }
        Command::Coeffs { function, m, j, t } => coeffs(&function, m, j, t, out),
        Command::Bound { kind, u, v, r, n, rule_size, w_norm, lambda } => {
            bound(kind, BoundParams { u, v, r, n, rule_size, w_norm, lambda }, out)
        }
    }
}

fn table1(n: Vec<u32>, r: Vec<u32>, out: &OutputArgs) -> Result<Report> {
    let pairs: Vec<(u32, u32)> = match (n.is_empty(), r.is_empty()) {
        (true, true) => TABLE1_ROWS.to_vec(),
        (false, false) if r.len() == n.len() => n.into_iter().zip(r).collect(),
        (false, false) if r.len() == 1 => n.into_iter().map(|n| (n, r[0])).collect(),
        _ => return Err(param("--N and --r must both be given, with matching lengths or a single --r")),
    };
    for &(n, r) in &pairs {
        if n < 2 {
            return Err(param(format!("table1 needs N >= 2 for the r/(N-1) column, got N={n}")));
        }
        table1_factors(n, r)?;
    }
    let config = json!({ "rows": pairs.iter().map(|(n, r)| json!({"N": n, "r": r})).collect::<Vec<_>>() });
    let mut report = Report::new("table1", base_config(out, config));
    for &(n, r) in &pairs {
        let f = table1_factors(n, r)?;
        let mut row: Row = vec![
            ("N", Cell::Int(n.into())),
            ("r", Cell::Int(r.into())),
            ("beta", Cell::sig(f.beta)),
            ("theta", Cell::sig(f.theta)),
            ("ratio", Cell::Float(f.ratio, Style::Ratio)),
            ("r_over_N_minus_1", Cell::Float(f64::from(r) / f64::from(n - 1), Style::Fixed2)),
        ];
        if out.paper_values {
            let published = TABLE1_ROWS.iter().position(|&p| p == (n, r)).map(|i| PUBLISHED_TABLE1[i]);
            let (b, t, q) = published.unwrap_or(("", "", ""));
            row.push(("published_beta", Cell::Text(b.into())));
            row.push(("published_theta", Cell::Text(t.into())));
            row.push(("published_ratio", Cell::Text(q.into())));
        }
        report.rows.push(row);
    }
    if out.paper_values {
        report.notes.push("published_* columns are the printed values, shown for comparison only".into());
    }
    Ok(report)
}

/// Published cells keyed by `N`: (classical, new, actual, ratio).
type Published = Vec<(u32, [String; 4])>;

fn published_example1(rows: &[[&str; 5]]) -> Published {
    rows.iter()
        .map(|r| (r[0].parse().unwrap(), [r[1].into(), r[2].into(), r[3].into(), r[4].into()]))
        .collect()
}

fn published_example2(rows: &[[&str; 4]]) -> Published {
    rows.iter()
        .map(|r| (r[0].parse().unwrap(), [r[1].into(), r[2].into(), r[3].into(), String::new()]))
        .collect()
}

fn example_report(command: &'static str, config: Value, rows: &[BoundReport], published: Option<Published>) -> Report {
    let mut report = Report::new(command, config);
    for row in rows {
        let mut cells: Row = vec![
            ("N", Cell::Int(row.n.into())),
            ("r", Cell::Int(row.r.into())),
            ("classical_bound", Cell::sig(row.classical_bound)),
            ("new_bound", Cell::sig(row.new_bound)),
            ("gegenbauer_bound", Cell::sig(row.gegenbauer_bound)),
            ("actual_error", Cell::sig(row.actual_error)),
            ("ratio", Cell::Float(row.ratio, Style::Ratio)),
        ];
        if let Some(published) = &published {
            let blank: [String; 4] = Default::default();
            let p = published.iter().find(|(n, _)| *n == row.n).map(|(_, p)| p).unwrap_or(&blank);
            for (name, value) in ["published_classical", "published_new", "published_actual", "published_ratio"].into_iter().zip(p) {
                cells.push((name, Cell::Text(value.clone())));
            }
        }
        report.rows.push(cells);
    }
    if published.is_some() {
        report.notes.push("published_* columns are the printed values, shown for comparison only".into());
    }
    report
}

fn coeffs(function: &str, m: usize, j: u32, t: f64, out: &OutputArgs) -> Result<Report> {
    let f = match function {
        "exp" => exp_function(),
        "corner" => corner_family(j, t)?,
        other => match other.strip_prefix('T').and_then(|n| n.parse::<u32>().ok()) {
            Some(n) => chebyshev_mode(n),
            None => return Err(param(format!("unknown function '{other}': use exp, corner or T<n>"))),
        },
    };
    let expansion = f.expansion(m)?;
    let mut config = json!({ "function": f.name(), "M": m, "points": f.coefficient_points(m) });
    if function == "corner" {
        config["j"] = json!(j);
        config["t"] = json!(t);
    }
    let mut report = Report::new("coeffs", base_config(out, config));
    report.rows = expansion
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, &a)| vec![("n", Cell::Int(n as i64)), ("a_n", Cell::Float(a, Style::Sig10))])
        .collect();
    Ok(report)
}

struct BoundParams {
    u: Option<f64>,
    v: Option<f64>,
    r: Option<u32>,
    n: Option<u32>,
    rule_size: Option<u32>,
    w_norm: Option<f64>,
    lambda: f64,
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| param(format!("{kind} needs {flag}")))
}

fn bound(kind: BoundKind, p: BoundParams, out: &OutputArgs) -> Result<Report> {
    let name = kind_name(kind);
    let norm = || -> Result<f64> {
        match p.w_norm {
            Some(w) if w > 0.0 && w.is_finite() => Ok(w),
            Some(w) => Err(param(format!("--w-norm must be positive and finite, got {w}"))),
            None => Ok(bounds::gegenbauer_weight_norm(p.lambda)?),
        }
    };
    let mut config = json!({ "kind": name });
    let mut set = |key: &str, value: Value| {
        config[key] = value;
    };
    let value = match kind {
        BoundKind::Trefethen | BoundKind::NewCoeff => {
            let r = need(p.r, "--r", name)?;
            let n = need(p.n, "--n", name)?;
            set("r", json!(r));
            set("n", json!(n));
            if kind == BoundKind::Trefethen {
                let v = need(p.v, "--V", name)?;
                set("V", json!(v));
                vec![("value", bounds::trefethen_coeff_bound(v, r, n)?)]
            } else {
                let u = need(p.u, "--U", name)?;
                set("U", json!(u));
                vec![("value", bounds::new_coeff_bound(u, r, n)?)]
            }
        }
        BoundKind::Xiang | BoundKind::NewQuad => {
            let r = need(p.r, "--r", name)?;
            let n = need(p.rule_size, "--N", name)?;
            let w = norm()?;
            set("r", json!(r));
            set("N", json!(n));
            set("w_norm", json!(w));
            if kind == BoundKind::Xiang {
                let v = need(p.v, "--V", name)?;
                set("V", json!(v));
                vec![("value", bounds::xiang_quadrature_bound(v, w, n, r)?)]
            } else {
                let u = need(p.u, "--U", name)?;
                set("U", json!(u));
                vec![("value", bounds::new_quadrature_bound(u, w, n, r)?)]
            }
        }
        BoundKind::Gegenbauer => {
            let r = need(p.r, "--r", name)?;
            let n = need(p.rule_size, "--N", name)?;
            let u = need(p.u, "--U", name)?;
            set("r", json!(r));
            set("N", json!(n));
            set("U", json!(u));
            set("lambda", json!(p.lambda));
            vec![("value", bounds::gegenbauer_quadrature_bound(u, p.lambda, n, r)?)]
        }
        BoundKind::Table1Factor => {
            let r = need(p.r, "--r", name)?;
            let n = need(p.rule_size, "--N", name)?;
            set("r", json!(r));
            set("N", json!(n));
            let f = table1_factors(n, r)?;
            vec![("beta", f.beta), ("theta", f.theta), ("ratio", f.ratio)]
        }
        BoundKind::WeightNorm => {
            set("lambda", json!(p.lambda));
            vec![("value", bounds::gegenbauer_weight_norm(p.lambda)?)]
        }
    };
    let mut report = Report::new("bound", base_config(out, config));
    let style = |key: &str| if key == "ratio" { Style::Ratio } else { Style::Sig3 };
    report.rows = vec![value.into_iter().map(|(k, v)| (k, Cell::Float(v, style(k)))).collect()];
    Ok(report)
}

fn kind_name(kind: BoundKind) -> &'static str {
    match kind {
        BoundKind::Trefethen => "trefethen",
        BoundKind::NewCoeff => "new-coeff",
        BoundKind::Xiang => "xiang",
        BoundKind::NewQuad => "new-quad",
        BoundKind::Gegenbauer => "gegenbauer",
        BoundKind::Table1Factor => "table1-factor",
        BoundKind::WeightNorm => "weight-norm",
    }
}
