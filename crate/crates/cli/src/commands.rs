use crate::{AxisArg, FlowsOp, NgonOp, Outcome, WavyOp};
use anyhow::{bail, Context};
use equisquare::flows::wavy::CensusOptions;
use equisquare::flows::{
    common_latin_partition, is_wavy_network, latin_graph_partition, wavy_census, wavy_latin,
    WavyOutcome, DEFAULT_WAVY_BUDGET,
};
use equisquare::ngon::{
    cyclotomic, is_d_balanced, rotate_apart_family, rotate_apart_pair, FamilyOutcome, NGonSet,
};
use equisquare::optimize::{KeyOptions, DEFAULT_FAMILY_BUDGET};
use equisquare::stream::{force_run, standard_mode_run, BaseNNumber, ShuffleSource};
use equisquare::transit::{
    bounded_compile, bounded_length_limit, naive_compile, shuffle_distance_floor,
};
use equisquare::{Axis, MoveSequence, Position, PositionArray, PositionSet, SquareState};
use num_bigint::BigInt;
use std::fmt;
use std::path::Path;

/// Bad arguments detected after parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_state(path: &Path) -> anyhow::Result<SquareState> {
    SquareState::parse(&read(path)?).with_context(|| format!("parsing square {}", path.display()))
}

fn read_numbers(path: &Path, n: usize) -> anyhow::Result<Vec<BaseNNumber>> {
    read(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            BaseNNumber::parse(n, l).with_context(|| format!("{}:{}", path.display(), i + 1))
        })
        .collect()
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn solve(from: &Path, to: &Path, out: Option<&Path>, naive: bool) -> Outcome {
    let p = read_state(from)?;
    let q = read_state(to)?;
    if p.n() != q.n() {
        bail!(UsageError(format!(
            "squares have sizes {} and {}",
            p.n(),
            q.n()
        )));
    }
    let n = p.n();
    let seq = if naive {
        naive_compile(&p, &q)?
    } else {
        bounded_compile(&p, &q, &KeyOptions::default())?.moves
    };
    if p.apply(&seq)? != q {
        eprintln!("compiled sequence does not reach the target");
        return Ok(false);
    }
    let text = seq.to_json() + "\n";
    if MoveSequence::from_json(&text, n)? != seq {
        eprintln!("written sequence does not parse back");
        return Ok(false);
    }
    write_out(out, &text)?;
    eprintln!(
        "{} half-shuffles ({} shuffles), bound {} shuffles, lower bound d_n = {}",
        seq.half_shuffles(),
        seq.shuffle_length(),
        bounded_length_limit(n),
        shuffle_distance_floor(n)?
    );
    Ok(true)
}

fn render_numbers(ys: &[BaseNNumber], digits: bool) -> String {
    ys.iter().map(|y| if digits { y.digit_string() } else { y.to_string() } + "\n").collect()
}

pub fn stream(
    state: &Path,
    input: &Path,
    seed: u64,
    schedule: Option<&Path>,
    out: Option<&Path>,
    digits: bool,
) -> Outcome {
    let s = read_state(state)?;
    let n = s.n();
    let xs = read_numbers(input, n)?;
    let source = match schedule {
        Some(p) => ShuffleSource::schedule(&MoveSequence::from_json(&read(p)?, n)?),
        None => ShuffleSource::seeded(seed, 0),
    };
    let (ys, _) = standard_mode_run(&s, &xs, &mut source.clone())?;
    let (again, _) = standard_mode_run(&s, &xs, &mut source.clone())?;
    if again != ys {
        eprintln!("replay disagrees");
        return Ok(false);
    }
    write_out(out, &render_numbers(&ys, digits))?;
    Ok(true)
}

pub fn force(state: &Path, input: &Path, targets: &Path, out: Option<&Path>) -> Outcome {
    let s = read_state(state)?;
    let n = s.n();
    let xs = read_numbers(input, n)?;
    let ys = read_numbers(targets, n)?;
    let sched = force_run(&s, &xs, &ys, &KeyOptions::default())?;
    let (got, _) = standard_mode_run(&s, &xs, &mut ShuffleSource::schedule(&sched))?;
    if got != ys {
        eprintln!("schedule does not reproduce the targets");
        return Ok(false);
    }
    write_out(out, &(sched.to_json() + "\n"))?;
    eprintln!("{} inputs, {} shuffles", xs.len(), sched.shuffle_length());
    Ok(true)
}

fn parse_set(n: usize, text: &str) -> anyhow::Result<NGonSet> {
    let members = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .with_context(|| format!("bad member `{t}`"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(NGonSet::from_signed(n, &members)?)
}

pub fn ngon(op: NgonOp) -> Outcome {
    match op {
        NgonOp::Cyclotomic { n } => {
            if n == 0 {
                bail!(UsageError("n must be positive".into()));
            }
            println!("{}", cyclotomic::<BigInt>(n));
        }
        NgonOp::Apart { n, sets, budget } => {
            let sets = sets
                .iter()
                .map(|s| parse_set(n, s))
                .collect::<anyhow::Result<Vec<_>>>()?;
            if sets.len() == 2 {
                match rotate_apart_pair(&sets[0], &sets[1])? {
                    Some(v) => println!("apart: rotate the second set by {v}"),
                    None => println!("inseparable"),
                }
            } else {
                match rotate_apart_family(&sets, budget.unwrap_or(DEFAULT_FAMILY_BUDGET))? {
                    FamilyOutcome::Separated(r) => {
                        let r: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                        println!("apart: rotations {}", r.join(" "));
                    }
                    FamilyOutcome::Inseparable => println!("inseparable"),
                    FamilyOutcome::Unknown => println!("unknown (budget exhausted)"),
                }
            }
        }
        NgonOp::Balanced { n, d, set } => {
            let s = parse_set(n, &set)?;
            println!(
                "{}",
                if is_d_balanced(&s, d)? {
                    "balanced"
                } else {
                    "not balanced"
                }
            );
        }
    }
    Ok(true)
}

fn show_array(a: &PositionArray) -> String {
    a.iter()
        .map(|p| format!("({},{})", p.col, p.row))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn wavy(op: WavyOp) -> Outcome {
    match op {
        WavyOp::Census {
            n,
            checkpoint,
            jobs,
            budget,
        } => {
            let opts = CensusOptions {
                budget: budget.unwrap_or(DEFAULT_WAVY_BUDGET),
                jobs,
                ..Default::default()
            };
            let r = wavy_census(n, &opts, checkpoint.as_deref())?;
            println!(
                "n={} placements={} types={} non_wavy={} unknown={}",
                r.n,
                r.placements,
                r.types,
                r.non_wavy.len(),
                r.unknown.len()
            );
            for s in &r.non_wavy {
                println!("\n{s}");
            }
            Ok(r.unknown.is_empty())
        }
        WavyOp::Check { state, budget } => {
            let s = read_state(&state)?;
            match wavy_latin(&s, budget.unwrap_or(DEFAULT_WAVY_BUDGET))? {
                WavyOutcome::Wavy(net) => {
                    if !is_wavy_network(&s, &net) {
                        eprintln!("network failed verification");
                        return Ok(false);
                    }
                    println!("wavy-latin");
                    for g in &net.h_graphs {
                        println!("H {}", show_array(g));
                    }
                    for g in &net.v_graphs {
                        println!("V {}", show_array(g));
                    }
                    Ok(true)
                }
                WavyOutcome::NotWavy => {
                    println!("not wavy-latin");
                    Ok(true)
                }
                WavyOutcome::Unknown => {
                    println!("unknown (budget exhausted)");
                    Ok(false)
                }
            }
        }
    }
}

pub fn flows(op: FlowsOp) -> Outcome {
    match op {
        FlowsOp::Graphs { state, axis } => {
            let s = read_state(&state)?;
            let axis = match axis {
                AxisArg::H => Axis::H,
                AxisArg::V => Axis::V,
            };
            for g in latin_graph_partition(&s, axis)? {
                println!("{}", show_array(&g));
            }
        }
        FlowsOp::Common { from, to } => {
            let p = read_state(&from)?;
            let q = read_state(&to)?;
            let n = p.n();
            let all = PositionSet::new(n, (0..n * n).map(|r| Position::from_rank(r, n)))?;
            let lp = common_latin_partition(&p, &q, &all, n)?;
            if !(lp.is_latin_in(&p) && lp.is_latin_in(&q)) {
                eprintln!("partition failed verification");
                return Ok(false);
            }
            for part in &lp.parts {
                println!(
                    "{}",
                    part.iter()
                        .map(|c| format!("({},{})", c.col, c.row))
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
        }
    }
    Ok(true)
}
