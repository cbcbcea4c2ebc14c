//! Acceptance suite. Runs every exit criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmroute::harness::{CSV_HEADER, ORACLE_CAP};
use swarmroute::{
    brute_force_best, compare, crossover_one_point, crossover_two_point, decode, fitness,
    init_swarm, mutate_adjacent_swap, mutate_swap, partition_regions, random_priorities, render,
    run_ga, run_pso, BandwidthRange, DecodeParams, Error, ExperimentConfig, GaParams, Network,
    NodeId, OutputFormat, Path, PsoParams, TopologyConfig,
};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn network(pn: usize, seed: u64) -> Network {
    Network::random(
        pn,
        seed,
        &TopologyConfig::default(),
        BandwidthRange::default(),
    )
    .unwrap()
}

/// Draws instances from consecutive seeds, skipping the rare networks where
/// no random priority vector decodes within the retry budget.
fn instances<T>(
    wanted: usize,
    mut build: impl FnMut(u64) -> Result<T, Error>,
) -> Result<(Vec<T>, usize), String> {
    let mut out = Vec::with_capacity(wanted);
    let mut skipped = 0;
    let mut seed = 0;
    while out.len() < wanted {
        match build(seed) {
            Ok(v) => out.push(v),
            Err(Error::NoPathFound { .. }) => skipped += 1,
            Err(e) => return Err(format!("seed {seed}: {e}")),
        }
        seed += 1;
        if skipped > wanted {
            return Err(format!("{skipped} instances had no decodable path"));
        }
    }
    Ok((out, skipped))
}

fn ac1_region_partition() -> Outcome {
    let layout = partition_regions(21).map_err(|e| e.to_string())?;
    ensure(
        layout.regions() == 4 && layout.sizes() == [5, 5, 5, 6],
        || format!("got a={} sizes={:?}", layout.regions(), layout.sizes()),
    )?;
    Ok("pn=21 -> a=4, sizes [5,5,5,6]".into())
}

fn ac2_operator_goldens() -> Outcome {
    let p1 = [1, 2, 3, 4, 5, 6, 7, 8];
    let p2 = [1, 1, 3, 3, 4, 5, 7, 8];
    let swap = mutate_swap(&p1, 3, 6).unwrap();
    ensure(swap == [1, 2, 6, 4, 5, 3, 7, 8], || {
        format!("swap gave {swap:?}")
    })?;
    let adj = mutate_adjacent_swap(&p1, 6).unwrap();
    ensure(adj == [1, 2, 3, 4, 5, 7, 6, 8], || {
        format!("adjacent swap gave {adj:?}")
    })?;
    let (_, child2) = crossover_two_point(&p1, &p2, 4, 6).unwrap();
    ensure(child2 == [1, 1, 3, 4, 5, 6, 7, 8], || {
        format!("two-point child gave {child2:?}")
    })?;
    Ok("swap, adjacent swap and two-point child 2 match exactly".into())
}

/// Sum-and-divide over a linear scan of the link list.
fn fitness_oracle(net: &Network, nodes: &[NodeId]) -> f64 {
    let bw = |a: NodeId, b: NodeId| {
        net.links()
            .iter()
            .find(|l| (l.u, l.v) == (a.min(b), a.max(b)))
            .unwrap()
            .bandwidth
    };
    let mut total = 0.0;
    for w in nodes.windows(2) {
        total += bw(w[0], w[1]);
    }
    bw(nodes[0], nodes[1]) / total
}

fn ac3_fitness_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut single = 0;
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 1000 {
        let pn = rng.random_range(4..40);
        let net = network(pn, rng.random());
        let max_len = rng.random_range(2..=pn.min(10));
        let mut nodes = vec![rng.random_range(0..pn)];
        while nodes.len() < max_len {
            let last = *nodes.last().unwrap();
            let options: Vec<_> = net.neighbors(last).filter(|n| !nodes.contains(n)).collect();
            if options.is_empty() {
                break;
            }
            nodes.push(options[rng.random_range(0..options.len())]);
        }
        if nodes.len() < 2 {
            continue;
        }
        pairs += 1;
        let path = Path::new(&net, nodes.clone()).map_err(|e| e.to_string())?;
        let got = fitness(&net, &path).map_err(|e| e.to_string())?;
        let want = fitness_oracle(&net, &nodes);
        worst = worst.max((got - want).abs());
        ensure(got > 0.0 && got <= 1.0, || {
            format!("fitness {got} outside (0, 1]")
        })?;
        if nodes.len() == 2 {
            single += 1;
            ensure(got == 1.0, || format!("single-link fitness {got}"))?;
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    ensure(single > 0, || "no single-link paths sampled".into())?;
    Ok(format!(
        "1000 pairs, max |impl - oracle| = {worst:e}, {single} single-link paths at 1.0"
    ))
}

fn ac4_path_validity() -> Outcome {
    let started = Instant::now();
    let mut decoded = 0;
    for seed in 0..1000u64 {
        let pn = 8 + (seed % 33) as usize;
        let net = network(pn, seed);
        let params = DecodeParams::for_network(&net);
        let prio = random_priorities(pn, seed.wrapping_mul(31));
        let before = prio.clone();
        let (s, d) = if seed % 2 == 0 {
            (0, pn - 1)
        } else {
            (pn - 1, 0)
        };
        let out = decode(&net, &prio, s, d, &params).map_err(|e| e.to_string())?;
        ensure(
            prio.as_slice()
                .iter()
                .zip(before.as_slice())
                .all(|(a, b)| a.to_bits() == b.to_bits()),
            || format!("seed {seed}: priorities mutated"),
        )?;
        if let Ok(path) = out {
            decoded += 1;
            let nodes = path.nodes();
            let mut seen = vec![false; pn];
            ensure(nodes[0] == s && *nodes.last().unwrap() == d, || {
                format!("seed {seed}: endpoints of {nodes:?}")
            })?;
            for &n in nodes {
                ensure(!std::mem::replace(&mut seen[n], true), || {
                    format!("seed {seed}: {n} repeats")
                })?;
            }
            for w in nodes.windows(2) {
                ensure(net.has_link(w[0], w[1]), || {
                    format!("seed {seed}: missing link {}-{}", w[0], w[1])
                })?;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "1000 seeds, {decoded} decoded paths all valid, inputs untouched, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn ac5_pso_invariants() -> Outcome {
    let params = PsoParams {
        n_particles: 40,
        iterations: 100,
        ..Default::default()
    };
    let (swarms, skipped) = instances(50, |seed| {
        let net = network(21, seed);
        init_swarm(&net, 0, 20, &params, seed).map(|s| (net, s, seed))
    })?;
    let mut steps = 0;
    for (net, mut swarm, seed) in swarms {
        let mut last = swarm.gbest_fitness;
        for _ in 0..params.iterations {
            swarm.step(&net, seed);
            steps += 1;
            ensure(swarm.gbest_fitness >= last, || {
                format!("seed {seed}: gbest fell {last} -> {}", swarm.gbest_fitness)
            })?;
            last = swarm.gbest_fitness;
            for p in &swarm.particles {
                ensure(p.velocity.iter().all(|v| v.abs() <= params.v_max), || {
                    format!("seed {seed}: velocity beyond v_max")
                })?;
            }
        }
    }
    Ok(format!(
        "50 runs x 100 steps ({steps} steps), gbest non-decreasing, |v| <= v_max; {skipped} seeds skipped"
    ))
}

fn ac6_ga_invariants() -> Outcome {
    let params = GaParams {
        kmax: 50,
        elitism: true,
        ..Default::default()
    };
    let (runs, skipped) = instances(50, |seed| run_ga(&network(21, seed), 0, 20, &params, seed))?;
    for (i, r) in runs.iter().enumerate() {
        ensure(r.trace.windows(2).all(|w| w[1].gbest >= w[0].gbest), || {
            format!("run {i}: best-fitness trace decreased")
        })?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sorted = |v: &[i64]| {
        let mut v = v.to_vec();
        v.sort_unstable();
        v
    };
    for app in 0..10_000 {
        let len = rng.random_range(2..30);
        let p1: Vec<i64> = (0..len).map(|_| rng.random_range(-100..100)).collect();
        let p2: Vec<i64> = (0..len).map(|_| rng.random_range(-100..100)).collect();
        let i = rng.random_range(1..len);
        let j = rng.random_range(i + 1..=len);
        let swapped = mutate_swap(&p1, i, j).unwrap();
        let adjacent = mutate_adjacent_swap(&p1, i).unwrap();
        ensure(
            sorted(&swapped) == sorted(&p1) && sorted(&adjacent) == sorted(&p1),
            || format!("application {app}: mutation changed the gene multiset"),
        )?;
        let k = rng.random_range(1..=len);
        let (a, b) = (rng.random_range(1..=len), rng.random_range(1..=len));
        for (c1, c2) in [
            crossover_one_point(&p1, &p2, k).unwrap(),
            crossover_two_point(&p1, &p2, a.min(b), a.max(b)).unwrap(),
        ] {
            let sourced = (0..len)
                .all(|g| (c1[g] == p1[g] || c1[g] == p2[g]) && (c2[g] == p1[g] || c2[g] == p2[g]));
            ensure(sourced, || {
                format!("application {app}: child gene not from a parent")
            })?;
        }
    }
    Ok(format!(
        "50 elitist runs monotone ({skipped} seeds skipped); 10^4 operator applications preserve multisets and provenance"
    ))
}

fn ac7_oracle_soundness() -> Outcome {
    let pso = PsoParams {
        iterations: 50,
        ..Default::default()
    };
    let ga = GaParams {
        kmax: 50,
        ..Default::default()
    };
    let (cases, skipped) = instances(50, |seed| {
        let pn = 5 + (seed % 8) as usize;
        let net = network(pn, seed);
        let (_, best) = brute_force_best(&net, 0, pn - 1, ORACLE_CAP)?;
        let p = run_pso(&net, 0, pn - 1, &pso, seed)?;
        let g = run_ga(&net, 0, pn - 1, &ga, seed)?;
        Ok((best, p.fitness, g.fitness))
    })?;
    let mut pso_hits = 0;
    let mut ga_hits = 0;
    for (i, &(best, p, g)) in cases.iter().enumerate() {
        ensure(p <= best && g <= best, || {
            format!("instance {i}: pso {p}, ga {g} exceed oracle {best}")
        })?;
        pso_hits += usize::from(p == best);
        ga_hits += usize::from(g == best);
    }
    Ok(format!(
        "50 instances (pn 5..12), zero violations; PSO reached the optimum in {:.0}% ({pso_hits}/50), GA in {:.0}% ({ga_hits}/50); {skipped} seeds skipped",
        pso_hits as f64 * 2.0,
        ga_hits as f64 * 2.0
    ))
}

fn ac8_experiment_shape() -> Outcome {
    let config = ExperimentConfig::default();
    let started = Instant::now();
    let report = compare(&config).map_err(|e| e.to_string())?;
    let csv = render(&report, OutputFormat::Csv).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure(report.records.len() == 16, || {
        format!("{} records", report.records.len())
    })?;
    ensure(csv.lines().next() == Some(CSV_HEADER), || {
        "wrong CSV header".into()
    })?;
    ensure(csv.lines().count() == 17, || {
        format!("{} CSV lines", csv.lines().count())
    })?;
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;

    let many = compare(&ExperimentConfig {
        trials: 20,
        ..config
    })
    .map_err(|e| e.to_string())?;
    let (agg, v) = (&many.aggregates, &many.verdicts);
    Ok(format!(
        "16 records in {:.2} s; over 20 trials x 16 budgets: mean fitness PSO {:.4} / GA {:.4} (pso_mean_fitness_ge_ga={}), mean time PSO {:.2} ms / GA {:.2} ms (pso_mean_ms_le_ga={})",
        elapsed.as_secs_f64(),
        agg.pso_mean_fitness,
        agg.ga_mean_fitness,
        v.pso_mean_fitness_ge_ga,
        agg.pso_mean_ms,
        agg.ga_mean_ms,
        v.pso_mean_ms_le_ga
    ))
}

const TIME_KEYS: [&str; 8] = [
    "\"wall_ms\"",
    "\"pso_ms\"",
    "\"ga_ms\"",
    "\"pso_mean_ms\"",
    "\"pso_median_ms\"",
    "\"ga_mean_ms\"",
    "\"ga_median_ms\"",
    "\"pso_mean_ms_le_ga\"",
];

/// Blanks wall-time values: whole JSON lines keyed by a time field, and the
/// last two CSV columns.
fn mask_times(output: &str) -> String {
    output
        .lines()
        .map(|line| {
            let key = line.trim_start().split(':').next().unwrap_or("");
            if TIME_KEYS.contains(&key) {
                format!("{key}: <masked>")
            } else if line.starts_with(|c: char| c.is_ascii_digit())
                && line.matches(',').count() == 7
            {
                let keep: Vec<&str> = line.split(',').take(6).collect();
                format!("{},<masked>,<masked>", keep.join(","))
            } else {
                line.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_swarmroute"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`{}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn ac9_determinism() -> Outcome {
    let invocations: [&[&str]; 7] = [
        &["generate", "--nodes", "21", "--seed", "5"],
        &[
            "run-pso",
            "--nodes",
            "21",
            "--seed",
            "5",
            "--iterations",
            "30",
        ],
        &[
            "run-pso",
            "--nodes",
            "21",
            "--seed",
            "5",
            "--dynamic-bandwidth",
        ],
        &[
            "run-ga",
            "--nodes",
            "21",
            "--seed",
            "5",
            "--crossover",
            "2pt",
            "--mutation",
            "adjswap",
        ],
        &[
            "compare",
            "--nodes",
            "21",
            "--seed",
            "5",
            "--budgets",
            "5-8",
            "--trials",
            "2",
        ],
        &[
            "compare",
            "--nodes",
            "21",
            "--seed",
            "5",
            "--budgets",
            "5-6",
            "--format",
            "json",
        ],
        &["oracle", "--nodes", "12", "--seed", "5"],
    ];
    for args in invocations {
        let a = mask_times(&run_cli(args)?);
        let b = mask_times(&run_cli(args)?);
        ensure(a == b, || {
            format!("`{}` differs between runs", args.join(" "))
        })?;
        ensure(!a.is_empty(), || {
            format!("`{}` printed nothing", args.join(" "))
        })?;
    }
    Ok(format!(
        "{} subcommand invocations byte-identical after masking wall time",
        invocations.len()
    ))
}

fn main() {
    let criteria: [Check; 9] = [
        ("AC1 region partition golden", ac1_region_partition),
        ("AC2 GA operator goldens", ac2_operator_goldens),
        ("AC3 fitness oracle equivalence", ac3_fitness_oracle),
        ("AC4 decoded path validity", ac4_path_validity),
        ("AC5 PSO invariants", ac5_pso_invariants),
        ("AC6 GA invariants", ac6_ga_invariants),
        ("AC7 oracle soundness", ac7_oracle_soundness),
        ("AC8 experiment shape", ac8_experiment_shape),
        ("AC9 determinism", ac9_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} ({secs:.2} s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.2} s): {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
