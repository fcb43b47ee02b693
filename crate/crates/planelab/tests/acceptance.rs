//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use planelab::exec::RayonExecutor;
use planelab::verify::random_family;
use planelab_core::field::prime_power;
use planelab_core::incidence::{choose2, next_permutation};
use planelab_core::kakeya::{correspondence_holds, half_plane_count, point_for_edge};
use planelab_core::rng::Xoshiro256;
use planelab_core::search::{
    affine_transform, kakeya_bound, min_kakeya_exhaustive_with, min_psi_exhaustive_with, psi_bound,
    random_permutation, SearchConfig, Sequential, Target,
};
use planelab_core::{
    edge_for_point, faber_verify, maximal_hypergraph, multiplicity_map, psi_brute, psi_fast,
    FieldSpec, LineFamily, Permutation,
};

const SAMPLES: usize = 1000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn field(q: u32) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::of_order(q).unwrap())
}

/// Every permutation with `0 -> 0` and `1 -> 1`.
fn normalized(f: &Arc<FieldSpec>) -> impl Iterator<Item = Permutation> + '_ {
    let q = f.order();
    let mut next = Some((0..q).collect::<Vec<u32>>());
    std::iter::from_fn(move || {
        let images = next.take()?;
        let mut tail = images[2..].to_vec();
        if next_permutation(&mut tail) {
            next = Some([0, 1].into_iter().chain(tail).collect());
        }
        Some(Permutation::new(f.clone(), &images).unwrap())
    })
}

fn random_perms(f: &Arc<FieldSpec>, seed: u64, n: usize) -> Vec<Permutation> {
    let mut rng = Xoshiro256::seed_from_u64(seed);
    (0..n).map(|_| random_permutation(f, &mut rng)).collect()
}

fn moments_hold(family: &LineFamily) -> Result<(), String> {
    let q = family.field().order() as u64;
    let r = faber_verify(family);
    let m1: u64 = r.mu_histogram.iter().map(|(&mu, &n)| mu as u64 * n).sum();
    let m2: u64 = r
        .mu_histogram
        .iter()
        .map(|(&mu, &n)| (mu as u64).pow(2) * n)
        .sum();
    if m1 != q * (q + 1) || m1 != r.moment1 {
        return Err(format!("first moment {m1} at {:?}", family.offsets()));
    }
    if m2 != 2 * q * (q + 1) || m2 != r.moment2 {
        return Err(format!("second moment {m2} at {:?}", family.offsets()));
    }
    if !r.formula_holds || r.size != family.union_size() {
        return Err(format!("Faber formula at {:?}", family.offsets()));
    }
    Ok(())
}

fn size_identities_hold(alpha: &Permutation) -> Result<(), String> {
    let q = alpha.order();
    let h = maximal_hypergraph(alpha);
    let r = faber_verify(&LineFamily::from_permutation(alpha));
    if r.size != half_plane_count(q) + h.norm || r.excess != h.norm {
        return Err(format!(
            "size {} excess {} norm {} at {:?}",
            r.size,
            r.excess,
            h.norm,
            alpha.image_indices()
        ));
    }
    Ok(())
}

fn criterion_1a() -> Outcome {
    let mut families = 0;
    for q in [3, 5, 7, 9, 11, 13] {
        let f = field(q);
        let mut rng = Xoshiro256::seed_from_u64(1000 + q as u64);
        for _ in 0..SAMPLES {
            if let Err(e) = moments_hold(&random_family(&f, &mut rng)) {
                return fail(format!("q={q}: {e}"));
            }
            families += 1;
        }
    }
    for q in [3, 5, 7] {
        for alpha in Permutation::all(field(q)) {
            if let Err(e) = moments_hold(&LineFamily::from_permutation(&alpha)) {
                return fail(format!("q={q}: {e}"));
            }
            families += 1;
        }
    }
    for q in [9, 11] {
        let f = field(q);
        for alpha in normalized(&f) {
            if let Err(e) = moments_hold(&LineFamily::from_permutation(&alpha)) {
                return fail(format!("q={q}: {e}"));
            }
            families += 1;
        }
    }
    pass(format!("{families} families"))
}

fn criterion_1b() -> Outcome {
    let mut cases = 0;
    for q in [3, 5, 7] {
        let mut n = 0;
        for alpha in Permutation::all(field(q)) {
            if let Err(e) = size_identities_hold(&alpha) {
                return fail(format!("q={q}: {e}"));
            }
            n += 1;
        }
        let expected = (1..=q as u64).product::<u64>();
        if n != expected {
            return fail(format!("q={q}: visited {n} of {expected} permutations"));
        }
        cases += n;
    }
    for q in [9, 11, 13, 25, 27, 49] {
        for alpha in random_perms(&field(q), 2000 + q as u64, SAMPLES) {
            if let Err(e) = size_identities_hold(&alpha) {
                return fail(format!("q={q}: {e}"));
            }
            cases += 1;
        }
    }
    pass(format!("{cases} permutations"))
}

fn psi_config(enumerate: bool) -> SearchConfig {
    SearchConfig {
        enumerate_witnesses: enumerate,
        ..SearchConfig::for_target(Target::MinPsi)
    }
}

fn criterion_2() -> Outcome {
    let pinned: BTreeMap<u32, u64> = [(3, 1), (5, 2), (7, 3), (9, 4), (11, 5)].into();
    let mut found = Vec::new();
    for q in [3, 5, 7] {
        let min = Permutation::all(field(q))
            .map(|a| psi_brute(&a))
            .min()
            .unwrap();
        if min < psi_bound(q) || min != pinned[&q] {
            return fail(format!(
                "q={q}: exhaustive minimum {min}, bound {}",
                psi_bound(q)
            ));
        }
        found.push(format!("{q}:{min}"));
    }
    let single = Instant::now();
    let r9 = match min_psi_exhaustive_with(&field(9), &psi_config(false), &Sequential) {
        Ok(r) => r,
        Err(e) => return fail(format!("q=9: {e}")),
    };
    let t9 = single.elapsed();
    let eight = RayonExecutor::new(8).unwrap();
    let start = Instant::now();
    let r11 = match min_psi_exhaustive_with(&field(11), &psi_config(false), &eight) {
        Ok(r) => r,
        Err(e) => return fail(format!("q=11: {e}")),
    };
    let t11 = start.elapsed();
    for r in [&r9, &r11] {
        if r.minimum < r.bound || r.minimum != pinned[&r.q] || !r.attained_bound {
            return fail(format!(
                "q={}: minimum {}, bound {}",
                r.q, r.minimum, r.bound
            ));
        }
        found.push(format!("{}:{}", r.q, r.minimum));
    }
    if t9 >= Duration::from_secs(600) || t11 >= Duration::from_secs(7200) {
        return fail(format!("q=9 {t9:.2?}, q=11 {t11:.2?}"));
    }
    pass(format!(
        "minima {} (q=9 {t9:.2?} single worker, q=11 {t11:.2?} on 8 workers)",
        found.join(" ")
    ))
}

/// Union size of one line per direction, computed cell by cell.
fn union_by_cells(f: &FieldSpec, offsets: &[u32], grid: &mut [bool]) -> u64 {
    let q = f.order();
    grid.fill(false);
    let mut size = 0;
    for (d, &c) in offsets.iter().enumerate() {
        for t in 0..q {
            let (x, y) = if d as u32 == q {
                (c, t)
            } else {
                let s = f.element(d as u32).unwrap();
                let x = f.element(t).unwrap();
                (t, f.add(f.mul(s, x), f.element(c).unwrap()).index())
            };
            let cell = &mut grid[(x * q + y) as usize];
            if !*cell {
                *cell = true;
                size += 1;
            }
        }
    }
    size
}

/// Minimum over all offset vectors, with the listed directions held at zero.
fn kakeya_oracle(q: u32, fixed: &[usize]) -> (u64, u64) {
    let f = FieldSpec::of_order(q).unwrap();
    let mut offsets = vec![0u32; q as usize + 1];
    let free: Vec<usize> = (0..=q as usize).filter(|d| !fixed.contains(d)).collect();
    let mut grid = vec![false; (q * q) as usize];
    let (mut best, mut visited) = (u64::MAX, 0);
    loop {
        best = best.min(union_by_cells(&f, &offsets, &mut grid));
        visited += 1;
        let Some(k) = free.iter().position(|&d| offsets[d] + 1 < q) else {
            break;
        };
        offsets[free[k]] += 1;
        for &d in &free[..k] {
            offsets[d] = 0;
        }
    }
    (best, visited)
}

fn criterion_3() -> Outcome {
    let mut seen = Vec::new();
    for (q, expected, oracle) in [
        (3, 7, kakeya_oracle(3, &[])),
        (5, 17, kakeya_oracle(5, &[])),
        (7, 31, kakeya_oracle(7, &[0, 7])),
    ] {
        let config = SearchConfig::for_target(Target::MinKakeya);
        let r = match min_kakeya_exhaustive_with(&field(q), &config, &Sequential) {
            Ok(r) => r,
            Err(e) => return fail(format!("q={q}: {e}")),
        };
        if r.minimum != expected
            || oracle.0 != expected
            || r.bound != kakeya_bound(q)
            || !r.attained_bound
        {
            return fail(format!(
                "q={q}: search {}, oracle {}, bound {}",
                r.minimum, oracle.0, r.bound
            ));
        }
        seen.push(format!("{q}:{} ({} configurations)", r.minimum, oracle.1));
    }
    pass(format!("minima {}", seen.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut cases = 0u64;
    let mismatch = |a: &Permutation| psi_fast(a) != psi_brute(a);
    for q in [3, 5, 7] {
        for alpha in Permutation::all(field(q)) {
            if mismatch(&alpha) {
                return fail(format!("q={q} at {:?}", alpha.image_indices()));
            }
            cases += 1;
        }
    }
    for q in [9, 11] {
        for alpha in normalized(&field(q)) {
            if mismatch(&alpha) {
                return fail(format!("q={q} at {:?}", alpha.image_indices()));
            }
            cases += 1;
        }
    }
    let orders: Vec<u32> = (3..=101)
        .step_by(2)
        .filter(|&q| prime_power(q).is_some())
        .collect();
    for &q in &orders {
        for alpha in random_perms(&field(q), 4000 + q as u64, SAMPLES) {
            if mismatch(&alpha) {
                return fail(format!("q={q} at {:?}", alpha.image_indices()));
            }
            cases += 1;
        }
    }
    pass(format!(
        "{cases} permutations, {} random orders up to 101",
        orders.len()
    ))
}

fn structure_holds(alpha: &Permutation, rng: &mut Xoshiro256) -> Result<(), String> {
    let q = alpha.order();
    let f = alpha.field();
    let h = maximal_hypergraph(alpha);
    let at = || format!("{:?}", alpha.image_indices());
    if h.pair_total() != choose2(q as u64) {
        return Err(format!("pair partition at {}", at()));
    }
    if h.psi < h.norm || (h.psi == h.norm) != h.edges.iter().all(|e| e.len() <= 3) {
        return Err(format!("chain at {}", at()));
    }
    let map = multiplicity_map(&LineFamily::from_permutation(alpha));
    if !correspondence_holds(&h, &map) {
        return Err(format!("correspondence at {}", at()));
    }
    for e in &h.edges {
        let x = point_for_edge(alpha, e).map_err(|err| format!("{err} at {}", at()))?;
        if edge_for_point(alpha, x).as_ref() != Ok(e) || map.mu(x) as usize != e.len() {
            return Err(format!("round trip of {:?} at {}", e.members, at()));
        }
    }
    let mut nonzero = || f.element(1 + rng.below(q as u64 - 1) as u32).unwrap();
    let (a, b) = (nonzero(), nonzero());
    let c = f.element(rng.below(q as u64) as u32).unwrap();
    let d = f.element(rng.below(q as u64) as u32).unwrap();
    let invert = rng.below(2) == 1;
    let beta = affine_transform(alpha, a, b, c, d, invert).map_err(|e| e.to_string())?;
    if psi_fast(&beta) != h.psi {
        return Err(format!(
            "affine invariance at {} -> {:?}",
            at(),
            beta.image_indices()
        ));
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut cases = 0;
    for q in [3, 5, 7, 9, 11, 13, 25, 27, 49] {
        let f = field(q);
        let mut rng = Xoshiro256::seed_from_u64(5000 + q as u64);
        for _ in 0..SAMPLES {
            let alpha = random_permutation(&f, &mut rng);
            if let Err(e) = structure_holds(&alpha, &mut rng) {
                return fail(format!("q={q}: {e}"));
            }
            cases += 1;
        }
    }
    pass(format!("{cases} permutations and transform pairs"))
}

// Triple count of the seed-42 draw over GF(997), from an independent oracle.
const PSI_997_SEED_42: u64 = 165_316;

fn criterion_6() -> Outcome {
    let f = field(997);
    let alpha = random_permutation(&f, &mut Xoshiro256::seed_from_u64(42));
    let start = Instant::now();
    let psi = psi_fast(&alpha);
    let t_fast = start.elapsed();
    if psi != PSI_997_SEED_42 || psi != psi_brute(&alpha) {
        return fail(format!("q=997 psi {psi}, expected {PSI_997_SEED_42}"));
    }
    let start = Instant::now();
    let sweep_min = Permutation::all(field(7)).map(|a| psi_fast(&a)).min();
    let search = min_psi_exhaustive_with(&field(7), &psi_config(true), &Sequential);
    let t_sweep = start.elapsed();
    if sweep_min != Some(3) || search.map(|r| r.minimum).ok() != Some(3) {
        return fail("q=7 sweep did not find minimum 3");
    }
    if t_fast >= Duration::from_secs(1) || t_sweep >= Duration::from_secs(10) {
        return fail(format!("q=997 {t_fast:.2?}, q=7 sweep {t_sweep:.2?}"));
    }
    pass(format!(
        "q=997 psi_fast {t_fast:.2?} (psi {psi}), q=7 sweep {t_sweep:.2?}"
    ))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_planelab"))
        .args(args)
        .env_remove("PLANELAB_THREADS")
        .output()
        .expect("run planelab");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn without_workers(json: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(json).expect("search JSON");
    v.as_object_mut().unwrap().remove("workers");
    v
}

fn criterion_7() -> Outcome {
    let runs: &[&[&str]] = &[
        &["psi", "--p", "7", "--random-seed", "3"],
        &[
            "psi",
            "--p",
            "5",
            "--n",
            "2",
            "--random-seed",
            "3",
            "--brute",
            "--json",
        ],
        &["psi", "--p", "5", "--perm", "0 1 3 2 4", "--csv"],
        &[
            "hypergraph",
            "--p",
            "3",
            "--n",
            "2",
            "--random-seed",
            "5",
            "--json",
        ],
        &["hypergraph", "--p", "11", "--power", "3", "--csv"],
        &[
            "kakeya",
            "--p",
            "5",
            "--perm",
            "0 1 3 2 4",
            "--emit-points",
            "--json",
        ],
        &[
            "kakeya",
            "--p",
            "3",
            "--n",
            "3",
            "--random-seed",
            "8",
            "--csv",
        ],
        &["kakeya", "--p", "3", "--identity"],
        &["verify", "--p", "5", "--all", "--json"],
        &[
            "verify",
            "--p",
            "3",
            "--n",
            "2",
            "--samples",
            "200",
            "--seed",
            "11",
            "--json",
        ],
        &[
            "verify",
            "--p",
            "13",
            "--samples",
            "50",
            "--seed",
            "2",
            "--csv",
        ],
        &[
            "search",
            "--p",
            "13",
            "--target",
            "min-psi",
            "--samples",
            "500",
            "--seed",
            "9",
            "--json",
        ],
        &[
            "search",
            "--p",
            "7",
            "--target",
            "min-psi",
            "--witnesses",
            "--workers",
            "4",
            "--json",
        ],
        &[
            "search",
            "--p",
            "3",
            "--n",
            "2",
            "--target",
            "min-psi",
            "--workers",
            "3",
            "--csv",
        ],
        &[
            "search",
            "--p",
            "5",
            "--target",
            "min-kakeya",
            "--witnesses",
            "--workers",
            "2",
        ],
    ];
    for args in runs {
        let first = cli(args);
        if first.0 != 0 {
            return fail(format!("{args:?} exited {}", first.0));
        }
        for _ in 0..2 {
            if cli(args) != first {
                return fail(format!("{args:?} output changed between runs"));
            }
        }
    }
    let scaled: &[(&[&str], &[&str])] = &[
        (
            &[
                "search",
                "--p",
                "3",
                "--n",
                "2",
                "--target",
                "min-psi",
                "--witnesses",
                "--json",
            ],
            &["1", "2", "8"],
        ),
        (
            &["search", "--p", "11", "--target", "min-psi", "--json"],
            &["1", "8"],
        ),
        (
            &[
                "search",
                "--p",
                "5",
                "--target",
                "min-kakeya",
                "--witnesses",
                "--json",
            ],
            &["1", "4"],
        ),
    ];
    for (args, workers) in scaled {
        let mut reference = None;
        for w in *workers {
            let mut full = args.to_vec();
            full.extend(["--workers", w]);
            let (code, out) = cli(&full);
            if code != 0 || cli(&full) != (code, out.clone()) {
                return fail(format!("{full:?} not repeatable"));
            }
            let v = without_workers(&out);
            match &reference {
                None => reference = Some(v),
                Some(r) if *r != v => return fail(format!("{full:?} differs from one worker")),
                Some(_) => {}
            }
        }
    }
    pass(format!(
        "{} commands x3, {} searches across worker counts",
        runs.len(),
        scaled.len()
    ))
}

/// Id, description, check, time limit in seconds.
type Criterion = (&'static str, &'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1a",
            "moment and Faber identities on line families",
            criterion_1a,
            60,
        ),
        (
            "1b",
            "Kakeya size and excess equal q(q+1)/2 + norm",
            criterion_1b,
            300,
        ),
        (
            "2",
            "triple count is at least (q-1)/2, pinned minima",
            criterion_2,
            7200,
        ),
        ("3", "Kakeya minima 7, 17, 31", criterion_3, 60),
        ("4", "psi_fast agrees with psi_brute", criterion_4, 120),
        (
            "5",
            "pair partition, chain, correspondence, affine invariance",
            criterion_5,
            120,
        ),
        ("6", "performance floor", criterion_6, 60),
        ("7", "byte-identical CLI output", criterion_7, 600),
    ];
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(limit) {
            outcome = fail(format!(
                "{} (took {elapsed:.2?}, limit {limit} s)",
                outcome.detail
            ));
        }
        let tag = if outcome.ok { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {id}: {name}: {} [{elapsed:.2?}, limit {limit} s]",
            outcome.detail
        );
        failed += usize::from(!outcome.ok);
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
