//! Acceptance criteria 1 to 10, one PASS/FAIL line each. Set
//! `RAPOLY_STRETCH=1` to also compare 825 ranks with the bundled table; that
//! line is informational and does not affect the exit status.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use rapoly::census::audit::Membership;
use rapoly::census::{
    composition_audit, parse_seed_spec, verify_against, CensusDatabase, CensusOptions, ReferenceTable, DEFAULT_SEEDS,
};
use rapoly::geometry::{lobachevsky, realize, volume, GaugedSystem, System};
use rapoly::surgery::{
    all_compositions, apply_edge_addition, compose_with_circuit, composition_sites, decompose, edge_addition_sites,
    edge_additions, edge_delete, lobell, lobell_index, reduce_to_lobell, Move,
};
use rapoly::{
    canonical_code, isomorphic, lemma_witness, very_good_edges, CanonicalCode,
    CombinatorialPolyhedron,
};

use common::*;

/// Volumes of the 39 smallest polyhedra.
const TABLE_1: [f64; 39] = [
    4.30621, 6.02304, 6.96701, 7.56325, 7.86995, 8.00023, 8.61241, 8.67652, 8.86089, 8.9466, 9.01905, 9.20916,
    9.47497, 9.56488, 9.62756, 9.67726, 9.71117, 9.73084, 9.80384, 9.81423, 9.83568, 9.92355, 9.97683, 9.97717,
    10.21991, 10.3378, 10.34848, 10.40429, 10.41604, 10.42605, 10.48885, 10.48909, 10.53439, 10.56155, 10.59201,
    10.61998, 10.63572, 10.67059, 10.67059,
];

/// Ranks without a lemma witness among the first 39.
const SET_B: [usize; 13] = [1, 2, 4, 7, 11, 12, 18, 23, 26, 29, 30, 35, 39];

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn fresh(dir: &Path, workers: usize) -> CensusDatabase {
    let sources = parse_seed_spec(DEFAULT_SEEDS).unwrap();
    let options = CensusOptions {
        workers,
        ..CensusOptions::default()
    };
    CensusDatabase::init_from_sources(&sources, Some(dir.join("census.tsv")), options).unwrap()
}

fn census_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let v = volume(&lobell(5).unwrap()).unwrap().volume;
    check((v - 4.3062108).abs() <= 1e-5, format!("vol(L5) = {v:.10}"))
}

fn criterion_2(db: &mut CensusDatabase) -> Outcome {
    if let Err(e) = db.extend(39) {
        return check(false, format!("extend failed: {e}"));
    }
    let vols: Vec<f64> = (1..=39).map(|r| db.by_rank(r).unwrap().volume.unwrap()).collect();
    let worst = vols
        .iter()
        .zip(TABLE_1)
        .map(|(v, t)| (v - t).abs())
        .fold(0.0, f64::max);
    // The reference list with ties resolved is non-decreasing; so must the ranks be,
    // and the Löbell polyhedra and L5 ∪ L5 sit at the stated ranks.
    let ordered = vols.windows(2).all(|w| w[0] <= w[1]);
    let expected_lobell = [(1, 5), (2, 6), (4, 7), (11, 8), (30, 9)];
    let lobell_ok = expected_lobell
        .iter()
        .all(|&(r, n)| lobell_index(db.polyhedron(db.ranked()[r - 1]).unwrap()) == Some(n));
    let double_ok = isomorphic(db.polyhedron(db.ranked()[6]).unwrap(), &double_l5());
    let tie = (vols[37] - vols[38]).abs();
    let tie_ok = db.by_rank(38).unwrap().code < db.by_rank(39).unwrap().code;
    check(
        worst <= 1e-4 && ordered && lobell_ok && double_ok && tie_ok,
        format!(
            "max |Δ| = {worst:.2e}, Löbell ranks {}, rank 7 = L5∪L5 {}, ranks 38/39 differ by {tie:.1e} and are ordered by code",
            if lobell_ok { "match" } else { "differ" },
            if double_ok { "yes" } else { "no" },
        ),
    )
}

fn criterion_3(db: &mut CensusDatabase) -> Outcome {
    if let Err(e) = db.extend(100 - db.num_ranked()) {
        return check(false, format!("extend failed: {e}"));
    }
    let failed: Vec<usize> = db.entries().iter().filter(|e| e.volume.is_none()).map(|e| e.id).collect();
    // Any entry without a volume must be marked as such in the file.
    let text = std::fs::read_to_string(db.path().unwrap()).unwrap();
    let recorded = text.matches("\tFAIL\t").count() == failed.len();
    let report = verify_against(db, &ReferenceTable::bundled(), 100, 1e-4);
    check(
        report.passed && recorded,
        format!(
            "max |Δ| = {:.2e} over {} ranks, {} solver failures recorded",
            report.max_deviation,
            report.compared,
            failed.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let children = edge_additions(&lobell(6).unwrap());
    let codes: BTreeSet<CanonicalCode> = children.iter().map(|(c, _)| canonical_code(c)).collect();
    check(
        children.len() == 6 && codes.len() == 1,
        format!("{} raw children, {} canonical codes", children.len(), codes.len()),
    )
}

fn criterion_5() -> Outcome {
    let l5 = lobell(5).unwrap();
    let s = all_compositions(&l5, &l5);
    check(
        s.raw_count == 1440 && s.distinct_count() == 1,
        format!("raw {}, distinct {}", s.raw_count, s.distinct_count()),
    )
}

fn criterion_6(db: &CensusDatabase) -> Outcome {
    let b: Vec<usize> = (1..=39)
        .filter(|&r| lemma_witness(db.polyhedron(db.ranked()[r - 1]).unwrap()).is_none())
        .collect();
    check(b == SET_B, format!("no witness at ranks {b:?}"))
}

fn criterion_7(db: &mut CensusDatabase) -> Outcome {
    if db.num_ranked() < 40 {
        db.extend(40 - db.num_ranked()).unwrap();
    }
    let report = match composition_audit(db, 15.0) {
        Ok(r) => r,
        Err(e) => return check(false, format!("audit failed: {e}")),
    };
    let absent: Vec<_> = report.absent().collect();
    let Some(&(pair, finding)) = absent.first() else {
        return check(false, "no absent composition");
    };
    let a39 = db.polyhedron(db.ranked()[38]).unwrap();
    let pentagon = a39.face_len(finding.site.face_q) == 5;
    let vol = finding.volume.unwrap_or(f64::NAN);
    let ok = absent.len() == 1
        && pair.ranks == (1, 39)
        && pentagon
        && finding.very_good_edges == 0
        && very_good_edges(&finding.polyhedron).is_empty()
        && (vol - 15.07032).abs() <= 1e-4;
    let in_db = report
        .pairs
        .iter()
        .flat_map(|p| &p.compositions)
        .filter(|c| matches!(c.membership, Membership::InDatabase(_) | Membership::Descendant))
        .count();
    check(
        ok,
        format!(
            "{} absent: A{} ∪ A{} at {}, volume {vol:.6}, {} very good edges; {in_db} others found",
            absent.len(),
            pair.ranks.0,
            pair.ranks.1,
            finding.site,
            finding.very_good_edges
        ),
    )
}

fn criterion_8(db: &CensusDatabase) -> Outcome {
    let mut cache: BTreeMap<CanonicalCode, f64> = BTreeMap::new();
    let mut vol = |p: &CombinatorialPolyhedron| -> f64 {
        *cache
            .entry(canonical_code(p))
            .or_insert_with(|| volume(p).unwrap().volume)
    };
    let mut steps = 0;
    for r in 1..=20 {
        let p = db.polyhedron(db.ranked()[r - 1]).unwrap();
        let chain = match reduce_to_lobell(p) {
            Ok(c) => c,
            Err(e) => return check(false, format!("rank {r}: {e}")),
        };
        if !chain.terminal.iter().all(|t| lobell_index(t).is_some()) {
            return check(false, format!("rank {r}: non-Löbell terminal"));
        }
        let mut totals: Vec<f64> = chain.steps.iter().map(|s| s.components.iter().map(&mut vol).sum()).collect();
        totals.push(chain.terminal.iter().map(&mut vol).sum());
        for (i, s) in chain.steps.iter().enumerate() {
            let ok = match s.mv {
                Move::EdgeDeletion(_) => totals[i + 1] < totals[i],
                Move::Decomposition(_) => totals[i + 1] <= totals[i] + 1e-9,
            };
            if !ok {
                return check(false, format!("rank {r} step {i}: {} -> {}", totals[i], totals[i + 1]));
            }
            steps += 1;
        }
    }
    check(true, format!("20 chains, {steps} steps, volumes monotone"))
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut note = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    let euler = |p: &CombinatorialPolyhedron| {
        let (v, e, f) = (p.num_vertices() as i64, p.num_edges() as i64, p.num_faces() as i64);
        v - e + f == 2
            && 2 * e == 3 * v
            && (0..p.num_darts()).all(|d| p.twin(p.twin(d)) == d && p.origin(p.twin(d)) == p.target(d))
    };

    let mut valid: Vec<CombinatorialPolyhedron> = small_valid().into_iter().map(|(_, p)| p).collect();
    valid.push(double_l5());
    for p in &valid {
        for site in edge_addition_sites(p) {
            let c = apply_edge_addition(p, &site).unwrap();
            note(euler(&c), "Euler/trivalence after edge-addition");
        }
        for e in very_good_edges(p) {
            let q = edge_delete(p, e).unwrap();
            note(euler(&q), "Euler/trivalence after edge-deletion");
            note(
                q.num_vertices() + 2 == p.num_vertices()
                    && q.num_edges() + 3 == p.num_edges()
                    && q.num_faces() + 1 == p.num_faces(),
                "deletion deltas",
            );
        }
    }

    let small: Vec<&CombinatorialPolyhedron> = valid.iter().filter(|p| p.num_faces() <= 16).collect();
    for p in &small {
        for q in &small {
            let mut seen = BTreeSet::new();
            for site in composition_sites(p, q) {
                if !seen.insert((site.face_p, site.face_q)) {
                    continue;
                }
                let (c, circuit) = compose_with_circuit(p, q, &site).unwrap();
                note(euler(&c), "Euler/trivalence after composition");
                let d = decompose(&c, &circuit).unwrap();
                let ok = (isomorphic(&d.pieces[0], p) && isomorphic(&d.pieces[1], q))
                    || (isomorphic(&d.pieces[0], q) && isomorphic(&d.pieces[1], p));
                note(ok, "compose/decompose round trip");
            }
        }
    }

    let mut maps: Vec<CombinatorialPolyhedron> = small_maps().into_iter().map(|(_, p)| p).collect();
    maps.extend(valid.iter().filter(|p| p.num_vertices() <= 24).cloned());
    let n = maps.len();
    for i in 0..n {
        maps.push(maps[i].relabel(&shuffled(maps[i].num_vertices(), i as u64)).mirror());
    }
    let codes: Vec<CanonicalCode> = maps.iter().map(canonical_code).collect();
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            note(
                (codes[i] == codes[j]) == brute_force_isomorphic(&maps[i], &maps[j]),
                "canonical code vs brute-force isomorphism",
            );
        }
    }

    for p in valid.iter().take(3) {
        let r = realize(p).unwrap();
        let x: Vec<f64> = r
            .normals
            .iter()
            .flat_map(|n| n.iter().copied())
            .enumerate()
            .map(|(i, v)| v + 0.003 * ((i % 5) as f64 - 2.0))
            .collect();
        let system = System::new(p);
        let fd = finite_difference_jacobian(|y| system.residual(y).iter().copied().collect(), &x, 1e-6);
        let j = system.jacobian(&x);
        note(relative_gap(&fd, |a, b| j[(a, b)]) <= 1e-6, "Jacobian vs finite differences");
        let gauged = GaugedSystem::new(p, p.faces_at(0));
        let y = gauged.restrict(&x);
        let fd = finite_difference_jacobian(|z| gauged.residual(z).iter().copied().collect(), &y, 1e-6);
        let j = gauged.jacobian(&y);
        note(relative_gap(&fd, |a, b| j[(a, b)]) <= 1e-6, "gauged Jacobian vs finite differences");
    }

    for i in 0..200 {
        let t = -7.0 + 0.07 * i as f64 + 0.001;
        let l = lobachevsky;
        note((l(-t) + l(t)).abs() <= 1e-10, "Λ oddness");
        note((l(t + PI) - l(t)).abs() <= 1e-10, "Λ periodicity");
        note((l(2.0 * t) - 2.0 * (l(t) + l(t + PI / 2.0))).abs() <= 1e-10, "Λ duplication");
    }

    let vols: Vec<f64> = valid.iter().map(|p| volume(p).unwrap().volume).collect();
    for (p, &v) in valid.iter().zip(&vols) {
        let r = realize(p).unwrap();
        note(r.residual <= 1e-10 && r.margin > 0.0, "realization residual and containment");
        for e in very_good_edges(p) {
            note(volume(&edge_delete(p, e).unwrap()).unwrap().volume < v, "strict decrease under deletion");
        }
    }
    for (i, p) in small.iter().enumerate() {
        for (j, q) in small.iter().enumerate().take(2) {
            let site = composition_sites(p, q)[0];
            let (c, _) = compose_with_circuit(p, q, &site).unwrap();
            let vc = volume(&c).unwrap().volume;
            note(vc >= vols[i] + vols[j] - 1e-9, "superadditivity under composition");
        }
    }
    failures.sort();
    failures.dedup();
    check(failures.is_empty(), if failures.is_empty() { "all property checks hold".into() } else { failures.join(", ") })
}

fn relative_gap(fd: &[Vec<f64>], at: impl Fn(usize, usize) -> f64) -> f64 {
    let scale = fd.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut worst = 0.0f64;
    for (r, row) in fd.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            worst = worst.max((x - at(r, c)).abs() / scale);
        }
    }
    worst
}

fn criterion_10(first: &Path) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut db = fresh(dir.path(), 2);
    db.extend(39).unwrap();
    let (a, b) = (census_files(first), census_files(dir.path()));
    check(a == b, format!("{} files compared", a.len()))
}

fn stretch() -> String {
    let dir = tempfile::tempdir().unwrap();
    let mut db = fresh(dir.path(), 0);
    let extended = db.extend(825);
    let report = verify_against(&db, &ReferenceTable::bundled(), 825, 1e-4);
    let failures = db.entries().iter().filter(|e| e.volume.is_none()).count();
    format!(
        "{}; {} ranks, {failures} solver failures; {}",
        if report.passed { "PASS" } else { "FAIL" },
        db.num_ranked(),
        match (&extended, &report.first_mismatch) {
            (Err(e), _) => format!("stopped: {e}"),
            (Ok(_), Some(m)) => format!(
                "first mismatch at rank {}: {} vs {}, max |Δ| {:.2e}",
                m.rank, m.computed, m.reference, report.max_deviation
            ),
            (Ok(_), None) => format!("max |Δ| {:.2e}", report.max_deviation),
        }
    )
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; only an
    // explicit `--list` needs an answer.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let mut db = fresh(dir.path(), 0);
    let mut results: Vec<(usize, &str, Duration, Duration, Outcome)> = Vec::new();
    let mut run = |n: usize, name: &'static str, limit: u64, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        results.push((n, name, start.elapsed(), Duration::from_secs(limit), outcome));
    };
    run(1, "dodecahedron volume", 1, &mut criterion_1);
    run(2, "smallest 39 volumes", 300, &mut || criterion_2(&mut db));
    let snapshot = tempfile::tempdir().unwrap();
    for (name, bytes) in census_files(dir.path()) {
        std::fs::write(snapshot.path().join(name), bytes).unwrap();
    }
    run(3, "ranks 1-100", 600, &mut || criterion_3(&mut db));
    run(4, "edge-children of L6", 1, &mut criterion_4);
    run(5, "compositions of L5 with itself", 30, &mut criterion_5);
    run(6, "lemma classification", 60, &mut || criterion_6(&db));
    run(7, "exceptional composition", 300, &mut || criterion_7(&mut db));
    run(8, "reduction chains", 300, &mut || criterion_8(&db));
    run(9, "property suites", 600, &mut criterion_9);
    run(10, "determinism", 300, &mut || criterion_10(snapshot.path()));

    let mut all = true;
    for (n, name, elapsed, limit, o) in &results {
        let pass = o.passed && elapsed <= limit;
        all &= pass;
        println!(
            "criterion {n:>2} {}: {name}: {} ({:.2}s)",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64()
        );
    }
    if std::env::var_os("RAPOLY_STRETCH").is_some() {
        println!("stretch: depth 825: {}", stretch());
    }
    if !all {
        std::process::exit(1);
    }
}
