//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cutchoose::analysis::suite::{self, SuiteOptions, TransformStatus};
use cutchoose::analysis::{equivalence_audit, generate_corpus, threshold_scan, CorpusInstance, DEFAULT_SEED, DEFAULT_SIZE};
use cutchoose::engine::{GameFamily, Role, Variant};
use cutchoose::solver::SolveOptions;
use cutchoose::structures::{FamilySpec, FiniteBooleanAlgebra, Mask};
use cutchoose::transforms::factor_antichain;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, t: Instant) -> Result<(), String> {
    ensure(t.elapsed() < limit, format!("took {:.1?}, limit {limit:?}", t.elapsed()))
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn corpus(size: usize) -> Vec<CorpusInstance> {
    generate_corpus(DEFAULT_SEED, size).expect("corpus generates")
}

fn binary_law() -> Outcome {
    let t = Instant::now();
    let table = threshold_scan(&FamilySpec::SizeAtMost { k: 1 }, 2, 1..=4, 2..=20, Variant::Exact, &SolveOptions::default())
        .map_err(s)?;
    ensure(table.matches_law(|n| 1 << n), "a cell disagrees with m <= 2^n")?;
    within(Duration::from_secs(60), t)?;
    Ok(format!("{} cells in {:.1?}", table.cells.len(), t.elapsed()))
}

fn width_law() -> Outcome {
    let t = Instant::now();
    let table = threshold_scan(&FamilySpec::SizeAtMost { k: 1 }, 3, 1..=2, 2..=12, Variant::Exact, &SolveOptions::default())
        .map_err(s)?;
    ensure(table.matches_law(|n| 3usize.pow(n as u32)), "a cell disagrees with m <= 3^n")?;
    within(Duration::from_secs(60), t)?;
    Ok(format!("{} cells in {:.1?}", table.cells.len(), t.elapsed()))
}

/// Unmemoized minimax for the U game on `size_at_most k`, Cut splitting the
/// running intersection into at most `width` nonempty pieces and the family
/// checked after every pick. True when Choose wins from `core`.
fn oracle(core: u32, k: u32, width: usize, rounds: usize) -> bool {
    if rounds == 0 {
        return true;
    }
    let points: Vec<u32> = (0..32).filter(|p| core >> p & 1 == 1).collect();
    if points.len() == 1 {
        return core.count_ones() > k && oracle(core, k, width, rounds - 1);
    }
    // Cut wins if some partition leaves Choose no good piece.
    let mut blocks: Vec<u32> = Vec::new();
    !cut_refutes(&points, &mut blocks, k, width, rounds)
}

fn cut_refutes(points: &[u32], blocks: &mut Vec<u32>, k: u32, width: usize, rounds: usize) -> bool {
    let Some((&p, rest)) = points.split_first() else {
        return blocks.len() >= 2
            && blocks.iter().all(|&b| b.count_ones() <= k || !oracle(b, k, width, rounds - 1));
    };
    for i in 0..blocks.len() {
        blocks[i] |= 1 << p;
        let found = cut_refutes(rest, blocks, k, width, rounds);
        blocks[i] &= !(1 << p);
        if found {
            return true;
        }
    }
    if blocks.len() < width {
        blocks.push(1 << p);
        let found = cut_refutes(rest, blocks, k, width, rounds);
        blocks.pop();
        if found {
            return true;
        }
    }
    false
}

fn weak_scan() -> Outcome {
    let table = threshold_scan(&FamilySpec::SizeAtMost { k: 1 }, 2, 1..=3, 2..=12, Variant::Weak, &SolveOptions::default())
        .map_err(s)?;
    for c in &table.cells {
        let expected = if oracle((1u32 << c.m) - 1, 1, 2, c.n) { Role::Choose } else { Role::Cut };
        ensure(c.winner == expected, format!("n={} m={}: scan {:?}, oracle {expected:?}", c.n, c.m, c.winner))?;
    }
    ensure(table.is_monotone(), "thresholds decrease with n")?;
    let mins: Vec<String> = table.rows.iter().map(|r| format!("{:?}", r.min_choose)).collect();
    Ok(format!("thresholds {}", mins.join(" ")))
}

fn determinacy() -> Outcome {
    let t = Instant::now();
    let rows = suite::over(&corpus(100), |i| suite::determinacy(i, &SuiteOptions::default())).map_err(s)?;
    for r in &rows {
        ensure(r.strategy_verified, format!("instance {}: extracted strategy fails", r.id))?;
        ensure(r.loser_refuted, format!("instance {}: loser not refuted", r.id))?;
    }
    within(Duration::from_secs(600), t)?;
    let cut = rows.iter().filter(|r| r.winner == Role::Cut).count();
    Ok(format!("{} instances ({cut} Cut wins) in {:.1?}", rows.len(), t.elapsed()))
}

fn degeneracy() -> Outcome {
    let t = Instant::now();
    let rows = suite::over(&corpus(DEFAULT_SIZE), |i| suite::degeneracy(i, &SuiteOptions::default())).map_err(s)?;
    let mut audited = 0;
    for r in &rows {
        ensure(r.passed(), format!("instance {}: winner {:?}, expected {:?}, {} disagreements", r.id, r.winner, r.expected, r.audit_disagreements))?;
        audited += r.audit_rows;
    }
    within(Duration::from_secs(600), t)?;
    Ok(format!("{} instances, {audited} audit rows, 0 disagreements in {:.1?}", rows.len(), t.elapsed()))
}

fn transforms() -> Outcome {
    let rows = suite::over(&corpus(DEFAULT_SIZE), |i| suite::transform_checks(i, &SuiteOptions::default())).map_err(s)?;
    let rows: Vec<_> = rows.into_iter().flatten().collect();
    let mut plays = 0;
    for r in &rows {
        ensure(r.passed(), format!("instance {} {}: {:?}", r.id, r.transform, r.status))?;
        if let TransformStatus::Checked { plays: p, .. } = r.status {
            plays += p;
        }
    }
    // every finitely witnessable transport direction was exercised
    for name in ["nonempty_to_choose", "choose_to_nonempty", "transfer_choose", "disjointify_choose"] {
        let transported = rows.iter().any(|r| {
            r.transform == name && matches!(r.status, TransformStatus::Checked { input_wins: true, .. })
        });
        ensure(transported, format!("{name} never ran with a winning input"))?;
    }
    for name in ["empty_to_cut", "witness_to_empty", "disjointify_cut", "transfer_cut", "cut_strategy_to_witness"] {
        ensure(rows.iter().any(|r| r.transform == name && r.applicable()), format!("{name} never ran"))?;
    }
    Ok(format!("{} checks, {plays} certified playouts", rows.iter().filter(|r| r.applicable()).count()))
}

fn factorization() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for trial in 0..100 {
        let atoms = rng.gen_range(2..=16);
        let b = FiniteBooleanAlgebra::with_atoms(atoms).map_err(s)?;
        let beta = rng.gen_range(1..=3);
        let x = if rng.gen_bool(0.5) { b.top() } else { Mask(rng.gen_range(1..(1u32 << atoms))) };
        let mut pts: Vec<usize> = x.points().collect();
        if pts.len() < 2 {
            pts = b.top().points().collect();
        }
        let x = Mask::from_points(pts.iter().copied());
        let k = rng.gen_range(2..=(1usize << beta).min(pts.len()));
        pts.shuffle(&mut rng);
        let mut w = vec![Mask::EMPTY; k];
        for (i, &p) in pts.iter().enumerate() {
            let j = if i < k { i } else { rng.gen_range(0..k) };
            w[j] = w[j].union(Mask::singleton(p));
        }
        let f = factor_antichain(&b, x, &w, 2, beta).map_err(|e| format!("trial {trial}: {e}"))?;
        // each factor is a partition of x
        for (i, level) in f.levels.iter().enumerate() {
            let used: Vec<Mask> = level.iter().copied().filter(|m| !m.is_empty()).collect();
            let union = used.iter().fold(Mask::EMPTY, |a, m| a.union(*m));
            let disjoint = used.iter().enumerate().all(|(a, p)| used[a + 1..].iter().all(|q| p.intersect(*q).is_empty()));
            ensure(union == x && disjoint, format!("trial {trial}: factor {i} is not a maximal antichain below x"))?;
        }
        let code = |r: usize| -> Vec<usize> { (0..beta).map(|i| (r >> (beta - 1 - i)) & 1).collect() };
        let meet = |c: &[usize]| c.iter().enumerate().fold(x, |a, (i, &d)| a.intersect(f.levels[i][d]));
        for r in 0..k {
            ensure(meet(&code(r)) == w[r], format!("trial {trial}: piece {r} is not the meet of its code"))?;
            for q in r + 1..k {
                ensure(meet(&code(r)).intersect(meet(&code(q))).is_empty(), format!("trial {trial}: codes {r}, {q} compatible"))?;
            }
        }
        f.check_identities(&b).map_err(|e| format!("trial {trial}: {e}"))?;
    }
    within(Duration::from_secs(60), t)?;
    Ok(format!("100 partitions in {:.1?}", t.elapsed()))
}

fn ablation() -> Outcome {
    let rows = suite::over(&corpus(DEFAULT_SIZE), |i| suite::ablation(i, &SuiteOptions::default())).map_err(s)?;
    let mut eligible = 0;
    for r in &rows {
        ensure(r.passed(), format!("{r:?}"))?;
        eligible += usize::from(matches!(r, suite::AblationRow::Checked { .. }));
    }
    ensure(eligible > 0, "no eligible instance")?;
    Ok(format!("{eligible} eligible instances"))
}

fn convention() -> Outcome {
    let rows = suite::over(&corpus(DEFAULT_SIZE), |i| suite::convention(i, &SuiteOptions::default())).map_err(s)?;
    let rows: Vec<_> = rows.into_iter().flatten().collect();
    for r in &rows {
        ensure(r.cut_current == r.cut_start, format!("instance {}: {:?} vs {:?}", r.id, r.cut_current, r.cut_start))?;
    }
    Ok(format!("{} U/G instances", rows.len()))
}

fn transfer() -> Outcome {
    let opts = SuiteOptions::default();
    let picked = suite::choose_winning_u(DEFAULT_SEED, 20, 2, &opts).map_err(s)?;
    ensure(picked.len() == 20 && picked.iter().all(|i| i.game.family() == GameFamily::U), "not 20 U instances")?;
    let rows = suite::over(&picked, |i| suite::monotone_transfer(i, 2, &opts)).map_err(s)?;
    for r in &rows {
        ensure(r.verified, format!("instance {}: transferred strategy fails on {}", r.id, r.big))?;
    }
    Ok(format!("{} instances embedded with 2 extra points", rows.len()))
}

/// Scan, determinacy and audit outputs, serialized.
fn outputs() -> Result<String, String> {
    let scan = threshold_scan(&FamilySpec::SizeAtMost { k: 1 }, 2, 1..=3, 2..=10, Variant::Exact, &SolveOptions::default())
        .map_err(s)?;
    let c = corpus(DEFAULT_SIZE);
    let det = suite::over(&c[..50], |i| suite::determinacy(i, &SuiteOptions::default())).map_err(s)?;
    let audit = suite::over(&c, |i| equivalence_audit(&i.game, &SolveOptions::default())).map_err(s)?;
    serde_json::to_string(&(scan, det, audit)).map_err(s)
}

fn in_pool(threads: usize) -> Result<String, String> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(s)?.install(outputs)
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cutchoose")).args(args).output().map_err(s)?;
    ensure(out.status.success(), format!("cutchoose {} exited with {}", args.join(" "), out.status))?;
    Ok(out.stdout)
}

fn reproducibility() -> Outcome {
    let one = in_pool(1)?;
    let many = in_pool(8)?;
    ensure(one == many, "library outputs differ between 1 and 8 threads")?;
    ensure(one == in_pool(8)?, "library outputs differ between runs")?;
    let mut compared = 0;
    for cmd in [
        &["scan", "--family", "size_at_most:1", "--width", "2", "--rounds", "1..3", "--ground", "2..10"][..],
        &["audit", "--corpus", "default"][..],
        &["corpus", "--size", "40"][..],
    ] {
        let serial = cli(&[&["--json", "--jobs", "1"][..], cmd].concat())?;
        let parallel = cli(&[&["--json", "--jobs", "8"][..], cmd].concat())?;
        ensure(serial == parallel, format!("`{}` differs between --jobs 1 and --jobs 8", cmd.join(" ")))?;
        ensure(parallel == cli(&[&["--json", "--jobs", "8"][..], cmd].concat())?, format!("`{}` differs between runs", cmd.join(" ")))?;
        compared += 1;
    }
    Ok(format!("{} library bytes and {compared} CLI outputs identical", one.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("binary threshold law", binary_law),
        ("width-3 threshold law", width_law),
        ("weak-variant thresholds", weak_scan),
        ("determinacy and extraction", determinacy),
        ("degeneracy and audit", degeneracy),
        ("transform soundness", transforms),
        ("factorization identities", factorization),
        ("maximality ablation", ablation),
        ("convention invariance", convention),
        ("monotone transfer", transfer),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
