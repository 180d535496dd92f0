//! Acceptance checks: one PASS/FAIL line per criterion, with the tolerances
//! used. Runs as a plain binary so the criteria execute in order and their
//! timings are not distorted by other tests running in parallel.
//!
//! A criterion listed in `EXPECTED_FAILURES` is reported as FAIL but does not
//! fail the run; if it ever passes the run fails, so the list cannot go stale.

mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use rand::Rng;
use rangesets::binning::{bin_assign, AttributeSpec};
use rangesets::embedding::{classical_mds, classical_mds_from_distances, metric_mds, standardize, DistanceMatrix, HighDimMatrix, SmacofOptions};
use rangesets::filtration::{extract_boundary, filter_complex, filtration_curve, FilterMode};
use rangesets::geometry::{convex_hull, delaunay_triangulate, Point2D, PointSet2D};
use rangesets::mst::mst;
use rangesets::pipeline::{compute_rangeset, suggest_epsilon};
use rangesets::service::{load_dataset, router, run_pipeline, AppState, ColumnData, SessionConfig};

/// Wine ε with classical MDS is 0.679; see the README.
const EXPECTED_FAILURES: &[u32] = &[6];

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn outcome(id: u32, pass: bool, detail: String) -> Outcome {
    Outcome { id, pass, detail }
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn single_bin(n: usize) -> (Vec<f64>, AttributeSpec) {
    let values = vec![0.0; n];
    let spec = AttributeSpec::continuous("c", &values).unwrap().with_bins(1).unwrap();
    (values, spec)
}

fn convex_hull_limit() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut failures = Vec::new();
    for trial in 0..200 {
        let n = r.gen_range(10..=500);
        let pts = uniform_points(&mut r, n);
        let set = PointSet2D::new(pts.clone()).unwrap();
        let eps_max = delaunay_triangulate(&pts).unwrap().max_edge_length();
        let (values, spec) = single_bin(n);
        let binned = bin_assign(&values, &spec).unwrap();
        let rs = compute_rangeset(&set, &binned, &spec, eps_max, FilterMode::EdgeLength).unwrap();
        let bin = &rs.bins[0];
        let hull = convex_hull(&pts).unwrap();
        let ok = bin.contours.len() == 1
            && bin.contours[0].hole_count() == 0
            && bin.contours[0].outer().vertices == hull
            && bin.outlier_ids.is_empty();
        if !ok {
            failures.push(trial);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        1,
        failures.is_empty() && secs < 10.0,
        format!(
            "convex-hull limit: {}/200 sets give one hole-free contour equal to convex_hull with 0 outliers at eps_max; {secs:.2} s (limit 10 s)",
            200 - failures.len()
        ),
    )
}

fn zero_epsilon_limit() -> Outcome {
    let mut r = rng(2);
    let mut bad = 0;
    for _ in 0..200 {
        let n = r.gen_range(3..=500);
        let pts = uniform_points(&mut r, n);
        let values: Vec<f64> = (0..n).map(|_| r.gen()).collect();
        let spec = AttributeSpec::continuous("v", &values).unwrap();
        let binned = bin_assign(&values, &spec).unwrap();
        let rs = compute_rangeset(&PointSet2D::new(pts).unwrap(), &binned, &spec, 0.0, FilterMode::EdgeLength).unwrap();
        let outliers: usize = rs.outlier_counts().iter().sum();
        if rs.polygon_count() != 0 || outliers != n {
            bad += 1;
        }
    }
    outcome(2, bad == 0, format!("zero-eps limit: {} of 200 instances with 0 polygons and n outliers (5 bins)", 200 - bad))
}

fn nesting() -> Outcome {
    let mut r = rng(3);
    let mut violations = 0usize;
    const AREA_TOL: f64 = 1e-9;
    for _ in 0..1000 {
        let n = r.gen_range(5..=150);
        let pts = uniform_points(&mut r, n);
        let t = delaunay_triangulate(&pts).unwrap();
        let mut eps: Vec<f64> = (0..20).map(|_| r.gen_range(0.0..1.05) * t.max_edge_length()).collect();
        eps.sort_by(f64::total_cmp);
        let mut prev: Option<(BTreeSet<usize>, f64, usize)> = None;
        for e in eps {
            let fc = filter_complex(&t, e, FilterMode::EdgeLength).unwrap();
            let kept: BTreeSet<usize> = fc.kept_triangles.iter().copied().collect();
            let area: f64 = extract_boundary(&fc, &t).unwrap().iter().map(|c| c.area()).sum();
            let singletons = fc.outliers.len();
            if let Some((pk, pa, ps)) = &prev {
                if !pk.is_subset(&kept) {
                    violations += 1;
                }
                if area < pa - AREA_TOL * pa.max(1.0) {
                    violations += 1;
                }
                if singletons > *ps {
                    violations += 1;
                }
            }
            prev = Some((kept, area, singletons));
        }
    }
    outcome(
        3,
        violations == 0,
        format!("nesting: 1000 trials x 20 sorted eps, {violations} violations (area tolerance {AREA_TOL:e} relative)"),
    )
}

/// Union-find over every pair within `eps`: the explicit threshold graph.
fn brute_force_counts(p: &[Point2D], eps: f64) -> (usize, usize) {
    let n = p.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist(p[i], p[j]) <= eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut size = vec![0usize; n];
    for i in 0..n {
        size[find(&mut parent, i)] += 1;
    }
    (size.iter().filter(|&&s| s > 1).count(), size.iter().filter(|&&s| s == 1).count())
}

fn filtration_oracle() -> Outcome {
    let mut r = rng(4);
    let mut mismatches = 0;
    for _ in 0..50 {
        let n = r.gen_range(3..=100);
        let pts = uniform_points(&mut r, n);
        let t = delaunay_triangulate(&pts).unwrap();
        let curve = filtration_curve(&t);
        let tree = mst(&t);
        // half the probes sit exactly on tree-edge lengths to exercise the inclusive threshold
        let mut eps: Vec<f64> = (0..10).map(|_| r.gen_range(0.0..1.1) * t.max_edge_length()).collect();
        eps.extend((0..10).map(|_| tree.edges[r.gen_range(0..tree.edges.len())].length));
        for e in eps {
            if curve.counts_at(e) != brute_force_counts(&pts, e) {
                mismatches += 1;
            }
        }
    }
    outcome(4, mismatches == 0, format!("filtration curve vs brute-force union-find: 50 instances x 20 eps, {mismatches} mismatches (exact)"))
}

fn delaunay_correctness() -> Outcome {
    let mut r = rng(5);
    let mut circle_violations = 0usize;
    for _ in 0..100 {
        let n = r.gen_range(3..=200);
        let pts = uniform_points(&mut r, n);
        let t = delaunay_triangulate(&pts).unwrap();
        for tri in t.triangles() {
            let [a, b, c] = tri.map(|i| pts[i]);
            for (d, &p) in pts.iter().enumerate() {
                if !tri.contains(&d) && incircle_sign(a, b, c, p) > 0 {
                    circle_violations += 1;
                }
            }
        }
    }
    let mut mst_mismatches = 0usize;
    for _ in 0..100 {
        let n = r.gen_range(3..=50);
        let pts = uniform_points(&mut r, n);
        let t = delaunay_triangulate(&pts).unwrap();
        let mut ours: Vec<(usize, usize)> = mst(&t).edges.iter().map(|e| (e.a.min(e.b), e.a.max(e.b))).collect();
        ours.sort_unstable();
        let in_dt = ours.iter().all(|&(a, b)| t.find_edge(a, b).is_some());
        if !in_dt || ours != complete_graph_mst(&pts) {
            mst_mismatches += 1;
        }
    }
    outcome(
        5,
        circle_violations == 0 && mst_mismatches == 0,
        format!(
            "delaunay: {circle_violations} empty-circumcircle violations over 100 instances (n <= 200, exact incircle); {mst_mismatches}/100 MST edge-set mismatches vs complete-graph MST (n <= 50)"
        ),
    )
}

fn wine_epsilon() -> Outcome {
    let start = Instant::now();
    let config = SessionConfig::load(&data_dir().join("wine.toml")).unwrap();
    let ds = load_dataset(&data_dir().join(&config.dataset), &Default::default()).unwrap();
    let columns: Vec<Vec<f64>> = config
        .attributes
        .iter()
        .map(|name| match &ds.column(name).unwrap().data {
            ColumnData::Numeric(v) => v.clone(),
            ColumnData::Categorical(_) => panic!("{name} is not numeric"),
        })
        .collect();
    let m = standardize(&HighDimMatrix::from_columns(config.attributes.clone(), &columns).unwrap()).unwrap();
    let classical = suggest_epsilon(&classical_mds(&m).unwrap().coords).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let metric = suggest_epsilon(&metric_mds(&m, SmacofOptions::default()).unwrap().coords).unwrap();
    let (lo, hi) = (0.86, 1.06);
    outcome(
        6,
        (lo..=hi).contains(&classical) && secs < 5.0,
        format!(
            "wine eps: classical MDS suggests {classical:.4}, band [{lo}, {hi}]; {secs:.3} s (limit 5 s). For reference, metric MDS (selected by the wine config) suggests {metric:.4}"
        ),
    )
}

fn linear_scaling() -> Outcome {
    let ns = [1_000, 2_500, 5_000, 10_000, 20_000];
    let report = rangesets::service::bench(&ns, 5, 5, 7);
    let ratio = report.per_point_ratio(20_000, 5_000).unwrap();
    let per_point: Vec<String> = report.rows.iter().map(|r| format!("{}:{:.2}us", r.n, r.per_point_us)).collect();
    outcome(
        7,
        report.r_squared >= 0.9 && ratio <= 3.0,
        format!(
            "linear scaling: R^2 = {:.4} (min 0.9), per-point cost 20k/5k = {ratio:.2} (max 3); {}",
            report.r_squared,
            per_point.join(" ")
        ),
    )
}

fn binning_conformance() -> Outcome {
    let mut r = rng(8);
    let mut bad = 0;
    for _ in 0..1000 {
        let n = r.gen_range(1..=300);
        let values: Vec<f64> = (0..n).map(|_| r.gen_range(-100.0..100.0)).collect();
        let k = r.gen_range(1..=10);
        // user range usually narrower than the data so clamping happens
        let lo = r.gen_range(-120.0..50.0);
        let hi = lo + r.gen_range(1.0..150.0);
        let mut values = values;
        values.push(hi); // the upper edge itself
        values.push(lo);
        let spec = AttributeSpec::continuous("v", &values).unwrap().with_range(lo, hi).unwrap().with_bins(k).unwrap();
        let b = bin_assign(&values, &spec).unwrap();
        let edges = spec.bin_edges();
        let mut ok = b.histogram.iter().sum::<usize>() == values.len() && b.missing.is_empty();
        for (i, &v) in values.iter().enumerate() {
            let want = if v < lo {
                0
            } else if v >= hi {
                k - 1
            } else {
                (0..k).find(|&j| edges[j] <= v && v < edges[j + 1]).unwrap()
            };
            ok &= b.bin_index[i] == Some(want);
            ok &= b.below_range.contains(&i) == (v < lo) && b.above_range.contains(&i) == (v > hi);
        }
        if !ok {
            bad += 1;
        }
    }
    outcome(8, bad == 0, format!("binning: {} of 1000 randomized trials with clamping, closed top bin and sum(histogram) = n", 1000 - bad))
}

fn mds_fidelity() -> Outcome {
    const TOL: f64 = 1e-6;
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = r.gen_range(3..=120);
        let d = r.gen_range(2..=8);
        let plane = uniform_points(&mut r, n);
        // orthonormal pair spanning a random plane in d dimensions
        let u: Vec<f64> = (0..d).map(|_| r.gen_range(-1.0..1.0)).collect();
        let u: Vec<f64> = u.iter().map(|x| x / u.iter().map(|y| y * y).sum::<f64>().sqrt()).collect();
        let w: Vec<f64> = (0..d).map(|_| r.gen_range(-1.0..1.0)).collect();
        let proj: f64 = w.iter().zip(&u).map(|(a, b)| a * b).sum();
        let w: Vec<f64> = w.iter().zip(&u).map(|(a, b)| a - proj * b).collect();
        let w: Vec<f64> = w.iter().map(|x| x / w.iter().map(|y| y * y).sum::<f64>().sqrt()).collect();
        let offset: Vec<f64> = (0..d).map(|_| r.gen_range(-5.0..5.0)).collect();
        let rows: Vec<Vec<f64>> =
            plane.iter().map(|p| (0..d).map(|k| offset[k] + p.x * u[k] + p.y * w[k]).collect()).collect();
        let m = HighDimMatrix::from_rows((0..d).map(|k| format!("f{k}")).collect(), &rows).unwrap();
        let coords = classical_mds(&m).unwrap().coords;
        let q = coords.as_slice();
        for i in 0..n {
            for j in i + 1..n {
                let want = dist(plane[i], plane[j]);
                worst = worst.max((q[i].distance(&q[j]) - want).abs() / want);
            }
        }
    }
    let d = DistanceMatrix::from_square(&[vec![0.0, 3.0, 4.0], vec![3.0, 0.0, 5.0], vec![4.0, 5.0, 0.0]]).unwrap();
    let t = classical_mds_from_distances(&d).unwrap().coords;
    let t = t.as_slice();
    let tri_err = [(0, 1, 3.0), (0, 2, 4.0), (1, 2, 5.0)]
        .iter()
        .map(|&(i, j, want): &(usize, usize, f64)| (t[i].distance(&t[j]) - want).abs() / want)
        .fold(0.0f64, f64::max);
    outcome(
        9,
        worst <= TOL && tri_err <= TOL,
        format!("mds fidelity: worst relative distance error {worst:.2e} on 20 planar sets, {tri_err:.2e} on the 3-4-5 triangle (tolerance {TOL:e})"),
    )
}

/// The `data` member of an API envelope, as the exact bytes sent.
fn envelope_data(body: &str) -> (&str, &str) {
    let prefix = "{\"schema_version\":1,\"fingerprint\":";
    let rest = body.strip_prefix(prefix).expect("envelope prefix");
    let (fingerprint, rest) = rest.split_once(",\"data\":").expect("data member");
    (fingerprint, rest.strip_suffix('}').expect("envelope suffix"))
}

fn batch_serve_equivalence() -> Outcome {
    use axum::body::Body;
    use axum::http::Request;
    use http_body_util::BodyExt;
    use tower::ServiceExt;

    let config = SessionConfig::load(&data_dir().join("wine.toml")).unwrap();
    let batch = run_pipeline(&config.resolve(&data_dir())).unwrap().to_json();
    let app = router(Arc::new(AppState::new(config.clone(), &data_dir()).unwrap()));

    let runtime = tokio::runtime::Runtime::new().unwrap();
    let fetch = |uri: String| -> String {
        runtime.block_on(async {
            let resp = app.clone().oneshot(Request::get(uri).body(Body::empty()).unwrap()).await.unwrap();
            assert!(resp.status().is_success());
            String::from_utf8(resp.into_body().collect().await.unwrap().to_bytes().to_vec()).unwrap()
        })
    };
    let encode = |s: &str| s.replace('%', "%25").replace('/', "%2F").replace(' ', "%20");

    let mut fingerprints = BTreeSet::new();
    let mut part = |uri: String| -> String {
        let body = fetch(uri);
        let (fp, data) = envelope_data(&body);
        fingerprints.insert(fp.to_string());
        data.to_string()
    };
    let dataset = part("/api/dataset".into());
    let embedding = part("/api/embedding".into());
    let quality = part("/api/quality".into());
    let topology = part("/api/topology".into());
    let attributes: Vec<String> =
        config.attributes.iter().map(|a| part(format!("/api/rangeset?attr={}", encode(a)))).collect();
    let fingerprint = fingerprints.iter().next().cloned().unwrap_or_default();
    let assembled = format!(
        "{{\"schema_version\":1,\"fingerprint\":{fingerprint},\"dataset\":{dataset},\"embedding\":{embedding},\"quality\":{quality},\"topology\":{topology},\"attributes\":[{}]}}",
        attributes.join(",")
    );
    let same = fingerprints.len() == 1 && assembled == batch;
    let first_diff = batch.bytes().zip(assembled.bytes()).position(|(a, b)| a != b);
    outcome(
        10,
        same,
        format!(
            "batch/serve: run_pipeline document ({} bytes) vs assembled API responses ({} bytes) over 4 sections + {} attributes: {}",
            batch.len(),
            assembled.len(),
            attributes.len(),
            if same { "byte-identical".to_string() } else { format!("differ at byte {first_diff:?}") }
        ),
    )
}

fn main() -> ExitCode {
    let checks: [fn() -> Outcome; 10] = [
        convex_hull_limit,
        zero_epsilon_limit,
        nesting,
        filtration_oracle,
        delaunay_correctness,
        wine_epsilon,
        linear_scaling,
        binning_conformance,
        mds_fidelity,
        batch_serve_equivalence,
    ];
    let mut unexpected = 0;
    for check in checks {
        let o = check();
        let expected_fail = EXPECTED_FAILURES.contains(&o.id);
        let tag = match (o.pass, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known, documented)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected: remove from EXPECTED_FAILURES)",
        };
        if o.pass == expected_fail {
            unexpected += 1;
        }
        println!("{tag} [{}] {}", o.id, o.detail);
    }
    if unexpected == 0 {
        println!("acceptance: all criteria as expected ({} known failure)", EXPECTED_FAILURES.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected result(s)");
        ExitCode::FAILURE
    }
}
