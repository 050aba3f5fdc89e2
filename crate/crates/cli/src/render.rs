//! Table and JSON rendering. Both views come from the same `Value`, so
//! they can only differ in how many decimals are shown.

use serde_json::Value;

/// A labeled grid of payoff cells, shown above the key/value lines.
#[derive(Debug, Clone)]
pub struct Grid {
    pub title: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub value: Value,
    pub grids: Vec<Grid>,
}

impl Output {
    pub fn new(value: Value) -> Self {
        Self { value, grids: Vec::new() }
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grids.push(grid);
        self
    }
}

pub fn json(out: &Output) -> String {
    let mut s = serde_json::to_string_pretty(&out.value).expect("values always serialize");
    s.push('\n');
    s
}

pub fn table(out: &Output) -> String {
    let mut s = String::new();
    for g in &out.grids {
        s.push_str(&grid(g));
        s.push('\n');
    }
    let mut lines = Vec::new();
    flatten("", &out.value, &mut lines);
    for (k, v) in lines {
        s.push_str(&format!("{k} = {v}\n"));
    }
    s
}

pub fn number(x: f64) -> String {
    format!("{x:.4}")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => number(n.as_f64().unwrap_or(f64::NAN)),
        },
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if k == "transcript" {
                    if let Value::Array(steps) = x {
                        out.push((key(k), format!("{} steps", steps.len())));
                        continue;
                    }
                }
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(is_scalar) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        // nested scalars, e.g. complex pairs or matrix rows
        Value::Array(xs) if xs.iter().all(|x| matches!(x, Value::Array(inner) if inner.iter().all(is_scalar))) => {
            let rows: Vec<String> = xs
                .iter()
                .map(|x| match x {
                    Value::Array(inner) => format!("({})", inner.iter().map(scalar).collect::<Vec<_>>().join(", ")),
                    _ => unreachable!(),
                })
                .collect();
            out.push((prefix.to_string(), format!("[{}]", rows.join(", "))));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn grid(g: &Grid) -> String {
    let cell = |c: (f64, f64)| format!("({}, {})", number(c.0), number(c.1));
    let body: Vec<Vec<String>> = g.cells.iter().map(|r| r.iter().map(|&c| cell(c)).collect()).collect();
    let lw = g.rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
    let mut widths: Vec<usize> = g.cols.iter().map(|c| c.chars().count()).collect();
    for row in &body {
        for (j, c) in row.iter().enumerate() {
            widths[j] = widths[j].max(c.len());
        }
    }
    let mut s = format!("{}\n{:lw$}", g.title, "");
    for (j, c) in g.cols.iter().enumerate() {
        s.push_str(&format!("  {:>w$}", c, w = widths[j]));
    }
    s.push('\n');
    for (i, row) in body.iter().enumerate() {
        s.push_str(&format!("{:lw$}", g.rows[i]));
        for (j, c) in row.iter().enumerate() {
            s.push_str(&format!("  {:>w$}", c, w = widths[j]));
        }
        s.push('\n');
    }
    s
}
