use crate::{Format, Outcome, TableKind};
use anyhow::{bail, Context};
use equisquare::counting::{
    avg_shuffles, log2_latin_lower_bound, log2_state_count, shuffle_lower_bound,
};
use equisquare::optimize::{minrows, n_bf, spaghetti_boundary};
use equisquare::scalar::ratio_to_decimal;
use equisquare::stream::bias;

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        let all = std::iter::once(&self.header).chain(&self.rows);
        match format {
            Format::Csv => all
                .map(|r| r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))
                .map(|l| l + "\n")
                .collect(),
            Format::Text => {
                let mut width = vec![0; self.header.len()];
                for r in std::iter::once(&self.header).chain(&self.rows) {
                    for (w, c) in width.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                all.map(|r| {
                    let cells: Vec<String> = r
                        .iter()
                        .zip(&width)
                        .map(|(c, &w)| format!("{c:>w$}"))
                        .collect();
                    cells.join("  ").trim_end().to_string() + "\n"
                })
                .collect()
            }
        }
    }
}

fn csv_field(c: &str) -> String {
    if c.contains([',', '"']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// `a..b` (inclusive) or a single value.
pub fn parse_range(text: &str) -> anyhow::Result<Vec<usize>> {
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (text, text),
    };
    let a: usize = a
        .trim()
        .parse()
        .with_context(|| format!("bad range start in `{text}`"))?;
    let b: usize = b
        .trim()
        .parse()
        .with_context(|| format!("bad range end in `{text}`"))?;
    if a > b {
        bail!(crate::commands::UsageError(format!("empty range `{text}`")));
    }
    Ok((a..=b).collect())
}

pub fn build(which: TableKind, range: Option<&str>) -> anyhow::Result<Table> {
    let ns = |default: &str| parse_range(range.unwrap_or(default));
    let t = match which {
        TableKind::States => {
            let ns = match range {
                Some(r) => parse_range(r)?,
                None => (8..=20).chain([32]).collect(),
            };
            let mut t = Table::new(&["n", "log2_states", "log2_latin_lower_bound"]);
            for n in ns {
                let s: f64 = log2_state_count(n)?;
                let l: f64 = log2_latin_lower_bound(n)?;
                t.rows
                    .push(vec![n.to_string(), format!("{s:.3}"), format!("{l:.3}")]);
            }
            t
        }
        TableKind::Bias => {
            let mut t = Table::new(&["n", "E", "B", "B_N"]);
            for n in ns("2..33")? {
                let b = bias(n)?;
                t.rows.push(vec![
                    n.to_string(),
                    ratio_to_decimal(&b.e, 2),
                    ratio_to_decimal(&b.b, 2),
                    ratio_to_decimal(&b.b_n, 2),
                ]);
            }
            t
        }
        TableKind::Minrows => {
            let mut t = Table::new(&["n", "r", "start", "critical"]);
            for n in ns("8..50")? {
                if n < 2 {
                    bail!(crate::commands::UsageError("Minrows needs n >= 2".into()));
                }
                let m = minrows(n);
                let crit: Vec<String> = m.critical.iter().map(|p| p.to_string()).collect();
                t.rows.push(vec![
                    n.to_string(),
                    m.rows.to_string(),
                    m.start.to_string(),
                    crit.join(" "),
                ]);
            }
            t
        }
        TableKind::Nbf => {
            let max = match range {
                Some(r) => *parse_range(r)?.last().expect("non-empty"),
                None => 21,
            };
            let mut header = vec!["b\\f".to_string()];
            header.extend((2..=max).map(|f| f.to_string()));
            let mut t = Table {
                header,
                rows: Vec::new(),
            };
            for b in 2..=max {
                let mut row = vec![b.to_string()];
                row.extend((2..=max).map(|f| {
                    if b <= f {
                        n_bf(b, f).to_string()
                    } else {
                        ".".into()
                    }
                }));
                t.rows.push(row);
            }
            t
        }
        TableKind::Spaghetti => {
            let mut t = Table::new(&["n", "estimate", "s", "shown"]);
            for n in ns("8..50")? {
                let s = spaghetti_boundary(n)?;
                let shown = if s.pairs_correction {
                    format!("{}*", s.value)
                } else if s.case_correction {
                    format!("{}-1", s.estimate)
                } else {
                    s.value.to_string()
                };
                t.rows.push(vec![
                    n.to_string(),
                    s.estimate.to_string(),
                    s.value.to_string(),
                    shown,
                ]);
            }
            t
        }
        TableKind::Sh => {
            let mut t = Table::new(&["n", "sh"]);
            for n in ns("2..20")? {
                let v: f64 = avg_shuffles(n)?;
                t.rows.push(vec![n.to_string(), format!("{v:.5}")]);
            }
            t
        }
        TableKind::Dn => {
            let mut t = Table::new(&["n", "d"]);
            for n in ns("2..100")? {
                t.rows
                    .push(vec![n.to_string(), shuffle_lower_bound(n)?.to_string()]);
            }
            t
        }
    };
    Ok(t)
}

pub fn run(which: TableKind, range: Option<&str>, format: Format) -> Outcome {
    print!("{}", build(which, range)?.render(format));
    Ok(true)
}
