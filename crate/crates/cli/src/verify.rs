use crate::{CampaignArgs, Outcome, VerifyKind};
use anyhow::bail;
use clap::ValueEnum;
use equisquare::flows::{common_transversal, latin_graph_partition};
use equisquare::optimize::{
    rows_apart, shuffle_to_hgraph, KeyOptions, SearchOutcome, DEFAULT_FAMILY_BUDGET,
};
use equisquare::stream::{force_run, standard_mode_run, BaseNNumber, ShuffleSource};
use equisquare::transit::{bounded_compile, three_cycle_moves};
use equisquare::{Axis, PositionSet, SquareState};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Mutex;

enum Verdict {
    Pass,
    Fail(String),
    Unknown(String),
}

#[derive(Default)]
struct Tally {
    pass: u64,
    fail: u64,
    unknown: u64,
    witnesses: Vec<String>,
}

impl Tally {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail(w) => {
                self.fail += 1;
                if self.witnesses.len() < 5 {
                    self.witnesses.push(format!("fail: {w}"));
                }
            }
            Verdict::Unknown(w) => {
                self.unknown += 1;
                if self.witnesses.len() < 5 {
                    self.witnesses.push(format!("unknown: {w}"));
                }
            }
        }
    }
}

/// Instance `i` gets its own stream of the seeded generator, so results do
/// not depend on `--jobs`.
fn instance_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn parallel<F>(count: u64, jobs: usize, check: F) -> anyhow::Result<Tally>
where
    F: Fn(u64) -> anyhow::Result<Verdict> + Sync,
{
    let jobs = jobs.max(1) as u64;
    let tally = Mutex::new(Tally::default());
    let error: Mutex<Option<anyhow::Error>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for j in 0..jobs {
            let (tally, error, check) = (&tally, &error, &check);
            scope.spawn(move || {
                let mut local = Tally::default();
                let mut i = j;
                while i < count {
                    match check(i) {
                        Ok(v) => local.add(v),
                        Err(e) => {
                            error.lock().unwrap().get_or_insert(e);
                            return;
                        }
                    }
                    i += jobs;
                }
                let mut t = tally.lock().unwrap();
                t.pass += local.pass;
                t.fail += local.fail;
                t.unknown += local.unknown;
                t.witnesses.extend(local.witnesses);
                t.witnesses.truncate(5);
            });
        }
    });
    if let Some(e) = error.into_inner().unwrap() {
        return Err(e);
    }
    Ok(tally.into_inner().unwrap())
}

/// The `i`-th n-subset of the `m` cells in lexicographic order.
fn unrank_combination(m: usize, k: usize, mut i: u64) -> Vec<usize> {
    let binom = |a: usize, b: usize| -> u64 {
        if b > a {
            return 0;
        }
        (0..b).fold(1u64, |acc, j| acc * (a - j) as u64 / (j + 1) as u64)
    };
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let mut c = next;
        loop {
            let rest = binom(m - c - 1, k - slot - 1);
            if i < rest {
                break;
            }
            i -= rest;
            c += 1;
        }
        out.push(c);
        next = c + 1;
    }
    out
}

fn set_for(args: &CampaignArgs, i: u64) -> anyhow::Result<PositionSet> {
    let n = args.n;
    let ranks = if args.exhaustive {
        unrank_combination(n * n, n, i)
    } else {
        sample(&mut instance_rng(args.seed, i), n * n, n).into_vec()
    };
    Ok(PositionSet::from_ranks(n, ranks)?)
}

fn set_count(args: &CampaignArgs) -> anyhow::Result<u64> {
    if !args.exhaustive {
        return Ok(args.samples as u64);
    }
    let (m, k) = (args.n * args.n, args.n);
    let mut c: u128 = 1;
    for j in 0..k {
        c = c * (m - j) as u128 / (j + 1) as u128;
    }
    if c > 50_000_000 {
        bail!(crate::commands::UsageError(format!(
            "{c} sets is too many for --exhaustive"
        )));
    }
    Ok(c as u64)
}

fn show_set(s: &PositionSet) -> String {
    s.iter()
        .map(|p| format!("({},{})", p.col, p.row))
        .collect::<Vec<_>>()
        .join(" ")
}

fn random_partition<R: Rng>(rng: &mut R, elems: &[usize], sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut e = elems.to_vec();
    e.shuffle(rng);
    let mut out = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &s in sizes {
        out.push(e[at..at + s].to_vec());
        at += s;
    }
    out
}

fn random_sizes<R: Rng>(rng: &mut R, n: usize, k: usize, l: usize) -> Vec<usize> {
    let mut sizes = vec![k; n];
    for _ in 0..l {
        loop {
            let i = rng.gen_range(0..n);
            if sizes[i] > 0 {
                sizes[i] -= 1;
                break;
            }
        }
    }
    sizes
}

fn flows_instance(n: usize, rng: &mut ChaCha8Rng) -> anyhow::Result<Verdict> {
    let k = rng.gen_range(1..=n);
    let l = rng.gen_range(0..k);
    let elems: Vec<usize> = (0..n * k - l).collect();
    let su = random_sizes(rng, n, k, l);
    let u = random_partition(rng, &elems, &su);
    let sw = random_sizes(rng, n, k, l);
    let w = random_partition(rng, &elems, &sw);
    let avoid = sample(rng, elems.len(), k - l - 1).into_vec();
    let t = common_transversal(&u, &w, &avoid, k, l)?;
    let hits = |parts: &[Vec<usize>]| {
        parts
            .iter()
            .all(|p| t.iter().filter(|e| p.contains(e)).count() == 1)
    };
    Ok(
        if t.len() == n && hits(&u) && hits(&w) && !t.iter().any(|e| avoid.contains(e)) {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("n={n} k={k} l={l}"))
        },
    )
}

pub fn run(kind: VerifyKind, args: &CampaignArgs) -> Outcome {
    let n = args.n;
    if n < 2 {
        bail!(crate::commands::UsageError("n must be at least 2".into()));
    }
    let family_budget = args.budget.unwrap_or(DEFAULT_FAMILY_BUDGET);
    let opts = KeyOptions {
        family_budget,
        ..KeyOptions::default()
    };
    let samples = args.samples as u64;
    // statistics rather than invariants: failures are reported, not fatal
    let mut statistic = false;
    let tally = match kind {
        VerifyKind::KeyResult => parallel(set_count(args)?, args.jobs, |i| {
            let s = set_for(args, i)?;
            Ok(match shuffle_to_hgraph(&s, &opts)? {
                Some(g) if g.to_sequence().apply_set(&s)?.is_h_graph() => Verdict::Pass,
                Some(_) => Verdict::Fail(format!("wrong shuffle for {}", show_set(&s))),
                None => Verdict::Fail(show_set(&s)),
            })
        })?,
        VerifyKind::HmoveOnly => {
            statistic = true;
            parallel(set_count(args)?, args.jobs, |i| {
                let s = set_for(args, i)?;
                Ok(match rows_apart(&s, family_budget)? {
                    SearchOutcome::Found(_) => Verdict::Pass,
                    SearchOutcome::Impossible => Verdict::Fail(show_set(&s)),
                    SearchOutcome::Unknown => Verdict::Unknown(show_set(&s)),
                })
            })?
        }
        VerifyKind::ThreeCycle => parallel(((n - 1) * n) as u64, args.jobs, |i| {
            let (k, r) = (i as usize % n, i as usize / n + 1);
            let perm = three_cycle_moves(k, r, n)?.permutation();
            let x = k + n * r;
            let ok = perm.iter().enumerate().all(|(c, &d)| match c {
                0 => d == 1,
                1 => d == x,
                c if c == x => d == 0,
                _ => d == c,
            });
            Ok(if ok {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("k={k} r={r}"))
            })
        })?,
        VerifyKind::Flows => parallel(samples, args.jobs, |i| {
            let mut rng = instance_rng(args.seed, i);
            if i % 2 == 0 {
                flows_instance(n, &mut rng)
            } else {
                let s = SquareState::random(n, &mut rng)?;
                let graphs = latin_graph_partition(&s, Axis::H)?;
                let mut seen = vec![false; n * n];
                let ok = graphs.len() == n
                    && graphs.iter().all(|g| {
                        g.to_set().is_h_graph()
                            && s.is_latin_set(g.iter())
                            && g.iter()
                                .all(|p| !std::mem::replace(&mut seen[p.rank(n)], true))
                    });
                Ok(if ok {
                    Verdict::Pass
                } else {
                    Verdict::Fail(format!("square\n{s}"))
                })
            }
        })?,
        VerifyKind::Forcing => parallel(samples, args.jobs, |i| {
            let mut rng = instance_rng(args.seed, i);
            let s = SquareState::random(n, &mut rng)?;
            let xs: Vec<_> = (0..args.length)
                .map(|_| BaseNNumber::random(n, &mut rng))
                .collect::<Result<_, _>>()?;
            let ys: Vec<_> = (0..args.length)
                .map(|_| BaseNNumber::random(n, &mut rng))
                .collect::<Result<_, _>>()?;
            let sched = force_run(&s, &xs, &ys, &opts)?;
            let (out, _) = standard_mode_run(&s, &xs, &mut ShuffleSource::schedule(&sched))?;
            Ok(if out == ys && sched.half_shuffles() == 4 * args.length {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("instance {i}"))
            })
        })?,
        VerifyKind::Compile => parallel(samples, args.jobs, |i| {
            let mut rng = instance_rng(args.seed, i);
            let p = SquareState::random(n, &mut rng)?;
            let q = SquareState::random(n, &mut rng)?;
            let r = bounded_compile(&p, &q, &opts)?;
            Ok(
                if p.apply(&r.moves)? == q && r.moves.half_shuffles() <= r.limit_half_shuffles {
                    Verdict::Pass
                } else {
                    Verdict::Fail(format!(
                        "instance {i}: {} half-shuffles",
                        r.moves.half_shuffles()
                    ))
                },
            )
        })?,
    };
    println!(
        "verify {} n={} instances={} pass={} fail={} unknown={}",
        kind.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default(),
        n,
        tally.pass + tally.fail + tally.unknown,
        tally.pass,
        tally.fail,
        tally.unknown
    );
    for w in &tally.witnesses {
        println!("  {w}");
    }
    Ok(statistic || (tally.fail == 0 && tally.unknown == 0))
}
