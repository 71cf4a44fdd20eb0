//! Acceptance gate for the solver and its compression pipeline. Each
//! test is one verdict line: exhaustive agreement with brute force,
//! one-sided error with zero tolerance, false-negative statistics,
//! cross-algorithm agreement, bit-exact compression, size independence,
//! the matching detector, the symbolic subset-sum identity, runtime, and
//! byte-level determinism across thread counts.

use std::process::Command;
use std::time::Instant;

use kcycle::compress::{compress, evaluate_compressed, serialize};
use kcycle::encode::{build_matrix, build_tutte, TagMode};
use kcycle::gen;
use kcycle::graph::{parse_instance, reduce_terminals, Graph, TerminalSet};
use kcycle::oracle::{brute_kcycle, brute_matching, lemma_polypie_check, random_polynomial};
use kcycle::solver::{detect_2k, detect_4k, solve, AlgorithmChoice, SolveConfig};

/// n in 6..=12, p in {0.2, 0.3, 0.5}, k in 2..=4, deterministic in
/// (base, case).
fn random_case(base: u64, case: u64) -> (Graph, TerminalSet) {
    let n = 6 + (case % 7) as usize;
    let p = [0.2, 0.3, 0.5][(case % 3) as usize];
    let k = 2 + (case % 3) as usize;
    gen::instance(n, p, k, base.wrapping_add(case.wrapping_mul(0x9E37)))
}

#[test]
fn a01_agrees_with_brute_force_on_every_connected_six_vertex_graph() {
    let pairs: Vec<(usize, usize)> =
        (1..=6).flat_map(|u| (u + 1..=6).map(move |v| (u, v))).collect();
    assert_eq!(pairs.len(), 15);

    let mut terminal_sets: Vec<Vec<usize>> = Vec::new();
    for set in 0u32..1 << 6 {
        if set.count_ones() == 2 || set.count_ones() == 3 {
            terminal_sets.push((1..=6).filter(|v| set >> (v - 1) & 1 == 1).collect());
        }
    }
    assert_eq!(terminal_sets.len(), 35);

    let mut connected = 0u64;
    let (mut yes, mut no) = (0u64, 0u64);
    for mask in 0u32..1 << 15 {
        let mut adj = [0u8; 7];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        let mut seen: u8 = 1 << 1;
        loop {
            let mut next = seen;
            for (v, &reach) in adj.iter().enumerate().skip(1) {
                if seen >> v & 1 == 1 {
                    next |= reach;
                }
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        if seen != 0b111_1110 {
            continue;
        }
        connected += 1;

        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(6, &edges);
        for (si, set) in terminal_sets.iter().enumerate() {
            let t = TerminalSet::new(set.clone());
            let expected = brute_kcycle(&g, &t);
            let seed = (u64::from(mask) << 6) | si as u64;
            let v = solve(&g, &t, &SolveConfig { seed, algorithm: AlgorithmChoice::TwoK });
            assert_eq!(v.is_yes(), expected, "graph {mask:#x}, terminals {set:?}");
            if expected {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    assert_eq!(connected, 26704, "connected 6-vertex graph count");
    assert!(yes >= 10_000 && no >= 10_000, "lopsided sample: {yes} yes / {no} no");
    println!("a01: {connected} graphs x 35 terminal sets agree with brute force ({yes} yes, {no} no)");
}

#[test]
fn a02_no_instance_ever_answers_yes() {
    let mut checked = 0u64;
    let mut case = 0u64;
    let mut runs = 0u64;
    while checked < 500 {
        case += 1;
        let (g, t) = random_case(0xA2_0000, case);
        if brute_kcycle(&g, &t) {
            continue;
        }
        let r = reduce_terminals(&g, &t);
        let (encoded, target) = build_matrix(&r);
        for trial in 0..20u64 {
            let evaluated = encoded.apply_evaluation(case * 100 + trial);
            assert!(!detect_2k(&evaluated).is_yes(), "case {case} trial {trial} (2k)");
            assert!(!detect_4k(&evaluated, &target).is_yes(), "case {case} trial {trial} (4k)");
            runs += 2;
        }
        checked += 1;
    }
    println!("a02: 500 no-instances x 20 seeds x both detectors = {runs} runs, zero YES");
}

#[test]
fn a03_yes_instance_never_missed_in_ten_thousand_trials() {
    let mut checked = 0u64;
    let mut case = 0u64;
    let mut runs = 0u64;
    while checked < 500 {
        case += 1;
        let (g, t) = random_case(0xA3_0000, case);
        if !brute_kcycle(&g, &t) {
            continue;
        }
        let r = reduce_terminals(&g, &t);
        let (encoded, _) = build_matrix(&r);
        for trial in 0..20u64 {
            let evaluated = encoded.apply_evaluation(case * 100 + trial);
            assert!(detect_2k(&evaluated).is_yes(), "false negative: case {case} trial {trial}");
            runs += 1;
        }
        checked += 1;
    }
    println!("a03: 500 yes-instances x 20 seeds = {runs} runs, zero false negatives");
}

#[test]
fn a04_detectors_agree_with_exact_evaluation_counts() {
    let (mut yes, mut no) = (0u64, 0u64);
    for case in 0..200u64 {
        let n = 8 + (case % 5) as usize;
        let k = 2 + (case % 4) as usize;
        let (g, t) = gen::instance(n, 0.3, k, 0xA4_0000 + case);
        let r = reduce_terminals(&g, &t);
        let (encoded, target) = build_matrix(&r);
        let evaluated = encoded.apply_evaluation(7000 + case);
        let v2 = detect_2k(&evaluated);
        let v4 = detect_4k(&evaluated, &target);
        assert_eq!(v2.answer, v4.answer, "case {case}: detectors disagree");
        assert_eq!(v2.determinant_evaluations, 1 << (k - 1), "case {case}");
        assert_eq!(v4.determinant_evaluations, 1 << (2 * k), "case {case}");
        if v2.is_yes() {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes >= 10 && no >= 10, "lopsided sample: {yes} yes / {no} no");
    println!("a04: 200 instances, verdicts identical, 2^(k-1) and 2^(2k) counts exact ({yes} yes, {no} no)");
}

#[test]
fn a05_compression_preserves_every_determinant_and_verdict() {
    let sizes = [8usize, 15, 25, 40, 60];
    let mut dets = 0u64;
    for case in 0..100u64 {
        let n = sizes[(case % 5) as usize];
        let k = 2 + (case % 5) as usize;
        let p = (6.0 / n as f64).min(0.5);
        let (g, t) = gen::instance(n, p, k, 0xA5_0000 + case);
        let r = reduce_terminals(&g, &t);
        let seed = 90_000 + case;
        let c = compress(&r, seed).expect("compression failed");
        assert_eq!(c.seed, seed, "case {case}: singular-block retry fired");

        let (encoded, _) = build_matrix(&r);
        let evaluated = encoded.apply_evaluation(seed);
        for mask in 0..1u64 << (k - 1) {
            let small = c
                .entries
                .instantiate(|var| mask >> (var - 2) & 1 == 1)
                .into_determinant();
            let big = evaluated.instantiate(TagMode::Assign(mask)).into_determinant();
            assert_eq!(small, big, "case {case} mask {mask}: determinant drifted");
            dets += 1;
        }
        assert_eq!(
            evaluate_compressed(&c).answer,
            detect_2k(&evaluated).answer,
            "case {case}: pipeline verdict drifted"
        );
    }
    println!("a05: 100 instances up to n=60, k=6; {dets} determinant pairs bit-exact, verdicts equal");
}

#[test]
fn a06_certificate_size_depends_on_k_alone() {
    let (g_small, t_small) = gen::instance(50, 0.3, 8, 0xA6_0001);
    let (g_large, t_large) = gen::instance(500, 0.02, 8, 0xA6_0002);

    let r_small = reduce_terminals(&g_small, &t_small);
    let c_small = compress(&r_small, 4242).unwrap();
    let text_small = serialize(&c_small);

    let r_large = reduce_terminals(&g_large, &t_large);
    let text_large = serialize(&compress(&r_large, 4242).unwrap());

    assert!(text_small.len() <= 20 * 1024, "certificate is {} bytes", text_small.len());
    assert_eq!(text_small.len(), text_large.len(), "size varies with source n");
    assert_eq!(text_small.lines().count(), 25);
    assert_eq!(text_large.lines().count(), 25);
    let header_len = |s: &str| s.lines().next().unwrap().len();
    assert_eq!(header_len(&text_small), header_len(&text_large));

    // The k=8 certificate still decides its instance.
    let (encoded, _) = build_matrix(&r_small);
    let evaluated = encoded.apply_evaluation(c_small.seed);
    assert_eq!(evaluate_compressed(&c_small).answer, detect_2k(&evaluated).answer);

    println!(
        "a06: k=8 certificates are {} bytes from n=50 and n=500 alike (limit 20480)",
        text_small.len()
    );
}

#[test]
fn a07_tutte_determinant_decides_perfect_matching() {
    let (mut with, mut without) = (0u64, 0u64);
    for case in 0..500u64 {
        let n = 4 + (case % 7) as usize;
        let p = [0.25, 0.4, 0.6][(case % 3) as usize];
        let g = gen::gnp(n, p, 0xA7_0000 + case);
        let expected = brute_matching(&g);
        let det = build_tutte(&g)
            .apply_evaluation(1234 + case)
            .instantiate(TagMode::Erase)
            .into_determinant();
        assert_eq!(!det.is_zero(), expected, "case {case} (n={n}, p={p})");
        if expected {
            with += 1;
        } else {
            without += 1;
        }
    }
    assert!(with >= 50 && without >= 50, "lopsided sample: {with} / {without}");
    println!("a07: 500 graphs, determinant matches matching search ({with} with, {without} without)");
}

#[test]
fn a08_subset_sum_identity_holds_on_random_polynomials() {
    let mut beyond_multilinear = 0u64;
    let mut nonempty_sets = 0u64;
    for i in 0..1000u64 {
        let nvars = 1 + (i % 5) as usize;
        let degree = if i % 4 == 0 { 1 } else { 3 };
        let p = random_polynomial(nvars, 8, degree, 0xA8_0000 + i);
        if p.terms().any(|(exps, _)| exps.iter().any(|&e| e >= 2)) {
            beyond_multilinear += 1;
        }
        let tmask = (i.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 59) % (1 << nvars);
        let t: Vec<usize> = (1..=nvars).filter(|v| tmask >> (v - 1) & 1 == 1).collect();
        if !t.is_empty() {
            nonempty_sets += 1;
        }
        assert!(lemma_polypie_check(&p, &t), "polynomial {i}, variables {t:?}");
    }
    assert!(beyond_multilinear >= 200, "only {beyond_multilinear} non-multilinear samples");
    assert!(nonempty_sets >= 400, "only {nonempty_sets} nonempty variable sets");
    println!(
        "a08: 1000 random polynomials pass, {beyond_multilinear} non-multilinear, {nonempty_sets} nonempty sets"
    );
}

#[test]
fn a09_large_run_is_fast_and_thread_count_invariant() {
    let (g, t) = gen::instance(100, 0.08, 12, 0xA9_0001);
    assert_eq!(t.k(), 12);
    let config = SolveConfig { seed: 0xfeed, algorithm: AlgorithmChoice::TwoK };
    let pool = |workers: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap()
    };

    let start = Instant::now();
    let serial = pool(1).install(|| solve(&g, &t, &config));
    let serial_time = start.elapsed();
    assert!(
        serial_time.as_secs_f64() <= 120.0,
        "single-threaded run took {serial_time:?}"
    );
    assert_eq!(serial.determinant_evaluations, 2048);
    let dim = serial.false_negative_numerator;
    assert!((124..=140).contains(&dim), "unexpected matrix dimension {dim}");

    let mut best_multi = serial_time;
    for workers in [2usize, 4, 8] {
        let start = Instant::now();
        let v = pool(workers).install(|| solve(&g, &t, &config));
        let elapsed = start.elapsed();
        assert_eq!(v, serial, "verdict changed at {workers} workers");
        best_multi = best_multi.min(elapsed);
    }

    let cores = std::thread::available_parallelism().map(|c| c.get()).unwrap_or(1);
    if cores >= 2 {
        // Half-linear floor up to 8 workers; generous to absorb noise.
        let limit = serial_time.as_secs_f64() / (cores.min(8) as f64 / 2.0);
        assert!(
            best_multi.as_secs_f64() <= limit,
            "no speedup: serial {serial_time:?}, best parallel {best_multi:?} on {cores} cores"
        );
        println!(
            "a09: 2048 determinants of {dim}x{dim} in {serial_time:?} serial (limit 120 s), best parallel {best_multi:?} on {cores} cores"
        );
    } else {
        println!(
            "a09: 2048 determinants of {dim}x{dim} in {serial_time:?} serial (limit 120 s); single-core host, speedup not measurable"
        );
    }
}

#[test]
fn a10_outputs_are_byte_identical_across_thread_counts() {
    let bin = env!("CARGO_BIN_EXE_kcycle");
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).output().expect("binary runs");
        (out.status.code().expect("exit code"), out.stdout, out.stderr)
    };

    // gen: stdout form, then a file for the commands below.
    let g1 = run(&["gen", "--n", "30", "--p", "0.2", "--k", "5", "--seed", "424242", "--threads", "1"]);
    let g2 = run(&["gen", "--n", "30", "--p", "0.2", "--k", "5", "--seed", "424242", "--threads", "3"]);
    assert_eq!(g1, g2, "gen output varies with thread count");
    assert_eq!(g1.0, 0);
    let instance = path("instance.kcy");
    std::fs::write(&instance, &g1.1).unwrap();
    assert!(parse_instance(std::str::from_utf8(&g1.1).unwrap()).is_ok());

    for algorithm in ["2k", "4k", "auto"] {
        let s1 = run(&["solve", &instance, "--seed", "99", "--algorithm", algorithm, "--threads", "1"]);
        let s2 = run(&["solve", &instance, "--seed", "99", "--algorithm", algorithm, "--threads", "4"]);
        let s3 = run(&["solve", &instance, "--seed", "99", "--algorithm", algorithm, "--threads", "7"]);
        assert_eq!(s1, s2, "solve --algorithm {algorithm} varies with thread count");
        assert_eq!(s1, s3, "solve --algorithm {algorithm} varies with thread count");
        assert!(s1.0 == 0 || s1.0 == 1);
    }

    let cert = path("instance.cert");
    let c1 = run(&["compress", &instance, "--out", &cert, "--seed", "5150", "--threads", "1"]);
    let bytes1 = std::fs::read(&cert).unwrap();
    let c2 = run(&["compress", &instance, "--out", &cert, "--seed", "5150", "--threads", "6"]);
    let bytes2 = std::fs::read(&cert).unwrap();
    assert_eq!(c1, c2, "compress output varies with thread count");
    assert_eq!(bytes1, bytes2, "certificate bytes vary with thread count");

    let e1 = run(&["eval", &cert, "--threads", "1"]);
    let e2 = run(&["eval", &cert, "--threads", "8"]);
    assert_eq!(e1, e2, "eval output varies with thread count");
    assert!(e1.0 == 0 || e1.0 == 1);

    println!("a10: gen, solve (all algorithms), compress, and eval byte-identical at 1..8 threads");
}
