//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! hard criterion fails. Run with `cargo test -p gcmeasure-cli --test acceptance`.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Barrier};
use std::time::{Duration, Instant};

use gcmeasure::ingest::{
    decode_jsonstat, fetch_dataset, parse_eurostat_tsv, parse_fixture_csv, serialize_fixture_csv,
    ApiSource, CacheKey, OfflineTransport, ResponseCache, StubTransport, Transport,
};
use gcmeasure::measure::{classify, median, normalize_column, std_dev, unit_score};
use gcmeasure::robustness::rank_correlation;
use gcmeasure::{
    run_pipeline, Direction, Group, IndicatorSpec, IngestError, ObservationMatrix, Settings,
    TiePolicy, UnitScore,
};
use gcmeasure_cli::{run, Context};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture_path() -> PathBuf {
    root().join("data/eu28_2019.csv")
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str], transport: &dyn Transport) -> (i32, String, String) {
    let ctx = Context {
        transport,
        api_base_env: None,
    };
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["gcmeasure"];
    argv.extend_from_slice(args);
    let code = run(argv, &ctx, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn units_json(doc: &serde_json::Value) -> BTreeMap<String, (f64, String)> {
    doc["units"]
        .as_array()
        .unwrap()
        .iter()
        .map(|u| {
            (
                u["geo"].as_str().unwrap().to_owned(),
                (
                    u["w"].as_f64().unwrap(),
                    u["group"].as_str().unwrap().to_owned(),
                ),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// 1. hand-oracle pipeline
// ---------------------------------------------------------------------------

fn ac1_hand_oracle() -> Outcome {
    // Expected values computed beforehand by an independent script evaluating
    // the min-max, median, population std-dev and threshold rules directly.
    let expected = [
        ("A", 0.0, "IV"),
        ("B", 0.27951388888888884, "III"),
        ("C", 1.0, "I"),
    ];

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("hand.csv");
    std::fs::write(&input, "geo,x1,x2\nA,2,10\nB,4,20\nC,10,40\n").map_err(|e| e.to_string())?;
    let (code, out, err) = cli(
        &[
            "analyze",
            "--input",
            input.to_str().unwrap(),
            "--format",
            "json",
        ],
        &OfflineTransport,
    );
    check(code == 0, format!("analyze exited {code}: {err}"))?;
    let doc: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let got = units_json(&doc);
    for (u, w, g) in expected {
        let (gw, gg) = got.get(u).ok_or(format!("unit {u} missing"))?;
        check((gw - w).abs() <= 1e-6, format!("{u}: w {gw} vs {w}"))?;
        check(gg == g, format!("{u}: group {gg} vs {g}"))?;
    }
    check(
        (doc["mean_w"].as_f64().unwrap() - 0.4265046296296296).abs() <= 1e-6,
        "mean_w",
    )?;
    check(
        (doc["sd_w"].as_f64().unwrap() - 0.4212716529727849).abs() <= 1e-6,
        "sd_w",
    )?;

    let m = parse_fixture_csv(b"geo,x1,x2\nA,2,10\nB,4,20\nC,10,40\n", 2019, &[])
        .map_err(|e| e.to_string())?;
    let best = (0..20)
        .map(|_| {
            let t = Instant::now();
            let r = run_pipeline(&m, &Settings::default());
            let el = t.elapsed();
            std::hint::black_box(r).unwrap();
            el
        })
        .min()
        .unwrap();
    check(
        best < Duration::from_millis(1),
        format!("pipeline took {best:?}"),
    )?;
    Ok(format!(
        "w = (0, 0.279514, 1), groups (IV, III, I); pipeline {best:?}"
    ))
}

// ---------------------------------------------------------------------------
// 2. EU-28 fixture: golden snapshot (hard) + agreement with the published
//    grouping (soft)
// ---------------------------------------------------------------------------

/// Independent oracle output for the fixture (script evaluation, full
/// precision), frozen at snapshot time.
const FIXTURE_ORACLE: [(&str, f64, Group); 28] = [
    ("BE", 0.787870040773786, Group::I),
    ("SE", 0.7327680447763928, Group::I),
    ("DK", 0.6693361472231968, Group::I),
    ("NL", 0.6666906941205751, Group::I),
    ("FI", 0.6467109302666728, Group::I),
    ("IE", 0.5974464008721216, Group::II),
    ("AT", 0.5682878698799007, Group::II),
    ("CZ", 0.5400981589465433, Group::II),
    ("ES", 0.508080877820687, Group::II),
    ("SI", 0.4670419965459619, Group::II),
    ("UK", 0.46649463371178895, Group::II),
    ("PT", 0.4571333180251252, Group::II),
    ("LT", 0.44575067780848054, Group::II),
    ("DE", 0.41454391561452386, Group::II),
    ("FR", 0.40735976496487186, Group::III),
    ("MT", 0.4066023084677129, Group::III),
    ("SK", 0.37118367735832786, Group::III),
    ("CY", 0.37097732828546326, Group::III),
    ("LU", 0.3456020184618246, Group::III),
    ("HR", 0.32626992787523984, Group::III),
    ("IT", 0.3005210837966083, Group::III),
    ("EE", 0.269327091403822, Group::III),
    ("PL", 0.19533916145517535, Group::IV),
    ("EL", 0.19401386944748122, Group::IV),
    ("HU", 0.13956500139557843, Group::IV),
    ("BG", 0.0927308197782366, Group::IV),
    ("LV", 0.0866235996552873, Group::IV),
    ("RO", 0.0, Group::IV),
];

/// The published EU-28 grouping.
fn published_groups() -> BTreeMap<&'static str, Group> {
    let rows: [(Group, &[&str]); 4] = [
        (Group::I, &["FI", "DK", "SE", "DE", "AT", "EE", "LV", "UK"]),
        (
            Group::II,
            &["LU", "NL", "LT", "BE", "FR", "CZ", "SK", "SI", "IE"],
        ),
        (
            Group::III,
            &["PL", "HU", "MT", "CY", "IT", "ES", "PT", "EL"],
        ),
        (Group::IV, &["RO", "BG", "HR"]),
    ];
    rows.iter()
        .flat_map(|(g, us)| us.iter().map(move |u| (*u, *g)))
        .collect()
}

fn ac2_golden() -> Outcome {
    let start = Instant::now();
    let fixture = fixture_path();
    let (code, out, err) = cli(
        &[
            "analyze",
            "--input",
            fixture.to_str().unwrap(),
            "--format",
            "json",
        ],
        &OfflineTransport,
    );
    let elapsed = start.elapsed();
    check(code == 0, format!("analyze exited {code}: {err}"))?;
    let golden = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/eu28_2019_analyze.json"),
    )
    .map_err(|e| e.to_string())?;
    check(out == golden, "JSON differs from the golden snapshot")?;

    let doc: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let got = units_json(&doc);
    check(got.len() == 28, format!("{} units classified", got.len()))?;
    let mut sizes = [0usize; 4];
    for (u, w, g) in FIXTURE_ORACLE {
        let (gw, gg) = got.get(u).ok_or(format!("{u} missing"))?;
        check(
            (gw - w).abs() <= 1e-12,
            format!("{u}: w {gw} vs oracle {w}"),
        )?;
        check(*gg == g.as_str(), format!("{u}: group {gg} vs oracle {g}"))?;
        sizes[g.index()] += 1;
    }
    check(
        sizes.iter().sum::<usize>() == 28,
        "groups do not partition 28 units",
    )?;
    check(
        elapsed < Duration::from_secs(1),
        format!("analyze took {elapsed:?}"),
    )?;
    Ok(format!(
        "28 units, group sizes {sizes:?}, matches snapshot and oracle; {elapsed:?}"
    ))
}

/// Agreement with the published grouping. Reported, not enforced: the
/// fixture is not the original study data.
fn ac2_published_agreement() -> (bool, String) {
    let published = published_groups();
    let mut exact = 0;
    let mut far = Vec::new();
    let mut ours = BTreeMap::new();
    for (u, _, g) in FIXTURE_ORACLE {
        ours.insert(u, g);
        let p = published[u];
        if p == g {
            exact += 1;
        } else if p.index().abs_diff(g.index()) > 1 {
            far.push(format!("{u}:{p}->{g}"));
        }
    }
    let allowed: HashSet<&str> = ["RO", "BG", "HR"].into();
    let group_iv: Vec<&str> = ours
        .iter()
        .filter(|(_, g)| **g == Group::IV)
        .map(|(u, _)| *u)
        .collect();
    let iv_ok = group_iv.iter().all(|u| allowed.contains(u));
    let ok = exact >= 20 && far.is_empty() && iv_ok;
    (
        ok,
        format!(
            "{exact}/28 exact (target >= 20); non-adjacent: [{}]; group IV = {:?} (target subset of RO, BG, HR)",
            far.join(", "),
            group_iv
        ),
    )
}

// ---------------------------------------------------------------------------
// 3. property suites, 1000 cases each
// ---------------------------------------------------------------------------

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: 1000,
        rng_seed: RngSeed::Fixed(20191231),
        failure_persistence: None,
        ..Config::default()
    })
}

fn matrix_strategy() -> impl Strategy<Value = ObservationMatrix> {
    (2usize..=50, 1usize..=20)
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(prop::collection::vec(-1000.0f64..1000.0, n), m),
                prop::collection::vec(any::<bool>(), m),
            )
        })
        .prop_map(|(mut cols, destim)| {
            for col in &mut cols {
                if col.iter().all(|v| *v == col[0]) {
                    col[0] += 1.0;
                }
            }
            let n = cols[0].len();
            let specs = destim
                .iter()
                .enumerate()
                .map(|(j, d)| {
                    let dir = if *d {
                        Direction::Destimulant
                    } else {
                        Direction::Stimulant
                    };
                    IndicatorSpec::new(format!("x{j}"), j + 1, dir)
                })
                .collect();
            ObservationMatrix::complete(
                (0..n).map(|i| format!("U{i:02}")).collect(),
                specs,
                (0..n)
                    .map(|i| cols.iter().map(|c| c[i]).collect())
                    .collect(),
                2019,
            )
        })
}

fn sorted_median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = s.len();
    if m % 2 == 1 {
        s[m / 2]
    } else {
        (s[m / 2 - 1] + s[m / 2]) / 2.0
    }
}

fn two_pass_std(v: &[f64]) -> f64 {
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / m).sqrt()
}

fn fail<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e}")
}

fn ac3_properties() -> Outcome {
    let start = Instant::now();
    let mut done = Vec::new();

    runner()
        .run(&matrix_strategy(), |m| {
            let r = run_pipeline(&m, &Settings::default()).unwrap();
            for j in 0..m.n_indicators() {
                let col: Vec<f64> = r.normalized.values.iter().map(|row| row[j]).collect();
                prop_assert!(col.iter().all(|z| (0.0..=1.0).contains(z)));
                prop_assert!(col.contains(&0.0) && col.contains(&1.0));
            }
            Ok(())
        })
        .map_err(|e| fail("range", e))?;
    done.push("range");

    runner()
        .run(&prop::collection::vec(-1e4f64..1e4, 2..100), |v| {
            prop_assume!(v.iter().any(|x| *x != v[0]));
            let s = normalize_column(&v, Direction::Stimulant).unwrap();
            let d = normalize_column(&v, Direction::Destimulant).unwrap();
            for (a, b) in s.iter().zip(&d) {
                prop_assert!((b - (1.0 - a)).abs() <= 1e-12);
            }
            Ok(())
        })
        .map_err(|e| fail("duality", e))?;
    done.push("duality");

    runner()
        .run(
            &(
                matrix_strategy(),
                any::<prop::sample::Index>(),
                0.01f64..100.0,
                -500.0f64..500.0,
            ),
            |(m, col, a, b)| {
                let j = col.index(m.n_indicators());
                let mut t = m.clone();
                for row in &mut t.values {
                    row[j] = row[j].map(|x| a * x + b);
                }
                let base = run_pipeline(&m, &Settings::default()).unwrap();
                let moved = run_pipeline(&t, &Settings::default()).unwrap();
                for s in &base.scores {
                    let o = moved.scores.iter().find(|o| o.unit == s.unit).unwrap();
                    prop_assert!((s.median - o.median).abs() <= 1e-12);
                    prop_assert!((s.std_dev - o.std_dev).abs() <= 1e-12);
                    prop_assert!((s.w - o.w).abs() <= 1e-12);
                }
                prop_assert!(
                    (base.classification.mean_w - moved.classification.mean_w).abs() <= 1e-12
                );
                prop_assert!((base.classification.sd_w - moved.classification.sd_w).abs() <= 1e-12);
                prop_assert_eq!(
                    &base.classification.assignments,
                    &moved.classification.assignments
                );
                Ok(())
            },
        )
        .map_err(|e| fail("affine", e))?;
    done.push("affine");

    runner()
        .run(
            &(
                prop::collection::vec(prop_oneof![0.0f64..=1.0, Just(0.5)], 2..60),
                any::<bool>(),
            ),
            |(ws, lower)| {
                let scores: Vec<UnitScore> = ws
                    .iter()
                    .enumerate()
                    .map(|(i, w)| UnitScore {
                        unit: format!("U{i}"),
                        median: *w,
                        std_dev: 0.0,
                        w: *w,
                    })
                    .collect();
                let tie = if lower {
                    TiePolicy::LowerGroup
                } else {
                    TiePolicy::HigherGroup
                };
                let c = classify(&scores, tie).unwrap();
                prop_assert_eq!(c.assignments.len(), scores.len());
                let mut members = HashSet::new();
                for g in Group::ALL {
                    for u in c.members(g) {
                        prop_assert!(members.insert(u.to_owned()));
                    }
                }
                prop_assert_eq!(members.len(), scores.len());
                Ok(())
            },
        )
        .map_err(|e| fail("partition", e))?;
    done.push("partition");

    runner()
        .run(
            &prop::collection::vec(prop_oneof![0.0f64..1.0, Just(0.25), Just(1.0)], 1..1000),
            |v| {
                prop_assert_eq!(median(&v).unwrap(), sorted_median(&v));
                Ok(())
            },
        )
        .map_err(|e| fail("median", e))?;
    done.push("median");

    runner()
        .run(&prop::collection::vec(0.0f64..1.0, 1..300), |v| {
            prop_assert!((std_dev(&v).unwrap() - two_pass_std(&v)).abs() <= 1e-12);
            Ok(())
        })
        .map_err(|e| fail("std-dev", e))?;
    done.push("std-dev");

    runner()
        .run(
            &prop::collection::vec(prop_oneof![0.0f64..=1.0, Just(1.0)], 1..30),
            |row| {
                let s = unit_score("u", &row).unwrap();
                prop_assert!((0.0..=1.0).contains(&s.w));
                prop_assert_eq!(s.w == 1.0, row.iter().all(|z| *z == 1.0));
                Ok(())
            },
        )
        .map_err(|e| fail("w-bound", e))?;
    done.push("w-bound");

    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(10),
        format!("suites took {elapsed:?}"),
    )?;
    Ok(format!(
        "{} suites x 1000 cases ({}) in {elapsed:?}",
        done.len(),
        done.join(", ")
    ))
}

// ---------------------------------------------------------------------------
// 4. parser corpus and fixture round-trip
// ---------------------------------------------------------------------------

enum Expect {
    Ok(&'static [(&'static str, Option<f64>, &'static str)]),
    Format(usize),
    Empty,
}

fn ac4_parsers() -> Outcome {
    let corpus = root().join("crates/core/tests/corpus");
    let ro_bg: &[&str] = &["RO", "BG"];
    let cases: Vec<(&str, Option<&[&str]>, Expect)> = vec![
        (
            "01_basic.tsv",
            None,
            Expect::Ok(&[("FI", Some(52.0), ""), ("RO", Some(11.0), "e")]),
        ),
        (
            "02_missing.tsv",
            None,
            Expect::Ok(&[("FI", None, ""), ("RO", Some(11.0), "")]),
        ),
        (
            "03_flags.tsv",
            None,
            Expect::Ok(&[
                ("FI", Some(52.0), "p"),
                ("SE", Some(60.0), "bep"),
                ("DK", None, "c"),
            ]),
        ),
        (
            "04_geofilter.tsv",
            Some(ro_bg),
            Expect::Ok(&[("RO", Some(11.0), ""), ("BG", Some(10.0), "")]),
        ),
        ("05_bad_header_dims.tsv", None, Expect::Format(1)),
        ("06_bad_header_year.tsv", None, Expect::Format(1)),
        ("07_ragged.tsv", None, Expect::Format(2)),
        ("08_bad_number.tsv", None, Expect::Format(2)),
        ("09_year_absent.tsv", None, Expect::Empty),
        (
            "10_crlf_decimal.tsv",
            None,
            Expect::Ok(&[("FI", Some(52.5), ""), ("RO", Some(11.25), "b")]),
        ),
        ("11_duplicate_geo.tsv", None, Expect::Format(3)),
        (
            "12_time_period_header.tsv",
            None,
            Expect::Ok(&[("FI", Some(52.0), "")]),
        ),
        ("13_empty.tsv", None, Expect::Format(1)),
        ("14_uppercase_flag.tsv", None, Expect::Format(2)),
    ];
    for (name, filter, expect) in &cases {
        let bytes = std::fs::read(corpus.join(name)).map_err(|e| format!("{name}: {e}"))?;
        let filter: Option<HashSet<String>> =
            filter.map(|f| f.iter().map(|s| s.to_string()).collect());
        let got = parse_eurostat_tsv(&bytes, "tin00111", 2019, filter.as_ref());
        match (expect, got) {
            (Expect::Ok(rows), Ok(obs)) => {
                let summary: Vec<(String, Option<f64>, String)> = obs
                    .iter()
                    .map(|o| (o.geo.clone(), o.value, o.flags.iter().collect()))
                    .collect();
                let want: Vec<(String, Option<f64>, String)> = rows
                    .iter()
                    .map(|(g, v, f)| (g.to_string(), *v, f.to_string()))
                    .collect();
                check(summary == want, format!("{name}: {summary:?}"))?;
            }
            (Expect::Format(line), Err(IngestError::Format { line: l, .. })) => check(
                *line == l,
                format!("{name}: error on line {l}, expected {line}"),
            )?,
            (Expect::Empty, Err(IngestError::EmptySelection(_))) => {}
            (_, other) => return Err(format!("{name}: unexpected {other:?}")),
        }
    }

    let original = std::fs::read_to_string(fixture_path()).map_err(|e| e.to_string())?;
    let parsed = parse_fixture_csv(original.as_bytes(), 2019, &[]).map_err(|e| e.to_string())?;
    let written = serialize_fixture_csv(&parsed);
    check(
        written.trim_end_matches('\n') == original.trim_end_matches('\n'),
        "fixture CSV round-trip is not byte-stable",
    )?;
    let reparsed = parse_fixture_csv(written.as_bytes(), 2019, &[]).map_err(|e| e.to_string())?;
    check(reparsed == parsed, "re-parsed fixture differs")?;
    Ok(format!(
        "{} TSV samples as specified; fixture CSV round-trip byte-stable",
        cases.len()
    ))
}

// ---------------------------------------------------------------------------
// 5. offline guarantee
// ---------------------------------------------------------------------------

fn write_api_config(dir: &Path, cache: &Path) -> PathBuf {
    let text = gcmeasure_cli::config::DEFAULT_CONFIG.replace(
        "cache_dir = \".cache/eurostat\"",
        &format!(
            "base_url = \"http://stub.invalid/data\"\ncache_dir = {:?}",
            cache.to_str().unwrap()
        ),
    );
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn ac5_offline() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = dir.path().join("cache");
    let config = write_api_config(dir.path(), &cache);
    let config = config.to_str().unwrap();
    let data = parse_fixture_csv(&std::fs::read(fixture_path()).unwrap(), 2019, &[])
        .map_err(|e| e.to_string())?;

    let (code, _, err) = cli(&["fetch", "--config", config], &OfflineTransport);
    check(
        code == 2 && err.contains("network error"),
        format!("cold cache offline: exit {code}"),
    )?;

    let stub = StubTransport::new(data.clone());
    let warm = dir.path().join("warm.csv");
    let (code, _, err) = cli(
        &[
            "fetch",
            "--config",
            config,
            "--output",
            warm.to_str().unwrap(),
        ],
        &stub,
    );
    check(code == 0, format!("warming fetch exited {code}: {err}"))?;

    let offline_csv = dir.path().join("offline.csv");
    let (code, out, err) = cli(
        &[
            "fetch",
            "--config",
            config,
            "--output",
            offline_csv.to_str().unwrap(),
        ],
        &OfflineTransport,
    );
    check(code == 0, format!("offline fetch exited {code}: {err}"))?;
    check(
        out.contains("28 units x 7 indicators, 0 missing cells"),
        format!("summary: {out}"),
    )?;
    let fetched = std::fs::read_to_string(&offline_csv).map_err(|e| e.to_string())?;
    check(
        fetched == serialize_fixture_csv(&data),
        "offline CSV differs from source data",
    )?;

    let (code, out, err) = cli(
        &["analyze", "--config", config, "--format", "json"],
        &OfflineTransport,
    );
    check(code == 0, format!("offline analyze exited {code}: {err}"))?;
    let golden = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/eu28_2019_analyze.json"),
    )
    .unwrap();
    check(
        out == golden,
        "offline analyze differs from the fixture analysis",
    )?;

    // two racing fetches of one key against a cold cache
    let race_dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = ApiSource::new(
        "http://stub.invalid/data",
        Some(race_dir.path().to_path_buf()),
    )
    .map_err(|e| e.to_string())?;
    let slow = Arc::new(StubTransport::new(data.clone()).with_delay(Duration::from_millis(25)));
    let barrier = Arc::new(Barrier::new(2));
    let handles: Vec<_> = (0..2)
        .map(|_| {
            let (slow, barrier, src, geos) = (
                slow.clone(),
                barrier.clone(),
                src.clone(),
                data.units.clone(),
            );
            std::thread::spawn(move || {
                barrier.wait();
                fetch_dataset(&src, slow.as_ref(), "tin00111", 2019, &geos)
            })
        })
        .collect();
    let results: Vec<_> = handles
        .into_iter()
        .map(|h| h.join().unwrap().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    check(results[0] == results[1], "racing fetches disagree")?;
    let key = CacheKey::new("tin00111", 2019, &data.units);
    let body = std::fs::read(ResponseCache::new(race_dir.path()).body_path(&key))
        .map_err(|e| e.to_string())?;
    let decoded = decode_jsonstat(&body, "tin00111").map_err(|e| format!("corrupt cache: {e}"))?;
    check(
        decoded == results[0],
        "cached body differs from fetched data",
    )?;
    let after = fetch_dataset(&src, &OfflineTransport, "tin00111", 2019, &data.units)
        .map_err(|e| e.to_string())?;
    check(after == results[0], "cache replay differs")?;
    Ok(format!(
        "fetch + analyze succeed offline after {} warm-up requests; concurrent double-fetch cache intact",
        stub.request_count()
    ))
}

// ---------------------------------------------------------------------------
// 6. sensitivity determinism and Spearman examples
// ---------------------------------------------------------------------------

fn ac6_determinism() -> Outcome {
    let fixture = fixture_path();
    let base = [
        "sensitivity",
        "--mode",
        "perturb",
        "--seed",
        "1",
        "--format",
        "json",
        "--input",
        fixture.to_str().unwrap(),
        "--trials",
        "200",
        "--noise",
        "0.1",
    ];
    let (c1, a, e1) = cli(&base, &OfflineTransport);
    let (c2, b, _) = cli(&base, &OfflineTransport);
    let mut serial_args = base.to_vec();
    serial_args.push("--serial");
    let (c3, s, _) = cli(&serial_args, &OfflineTransport);
    check(
        c1 == 0 && c2 == 0 && c3 == 0,
        format!("exit codes {c1}/{c2}/{c3}: {e1}"),
    )?;
    check(a == b, "two parallel runs differ")?;
    check(a == s, "serial and parallel runs differ")?;

    let ids = |s: &str| s.chars().map(String::from).collect::<Vec<_>>();
    let cases = [
        ("ABCD", "ABCD", 1.0),
        ("ABCD", "DCBA", -1.0),
        ("ABC", "ACB", 0.5),
    ];
    for (x, y, want) in cases {
        let rho = rank_correlation(&ids(x), &ids(y)).map_err(|e| e.to_string())?;
        check((rho - want).abs() <= 1e-12, format!("rho({x},{y}) = {rho}"))?;
    }
    Ok(format!("perturb JSON byte-identical across 2 runs and serial/parallel ({} bytes); rho examples exact", a.len()))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("AC1 hand-oracle pipeline", ac1_hand_oracle),
        ("AC2 EU-28 fixture golden", ac2_golden),
        ("AC3 property suites", ac3_properties),
        ("AC4 parser corpus", ac4_parsers),
        ("AC5 offline ingestion", ac5_offline),
        ("AC6 sensitivity determinism", ac6_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    let (ok, detail) = ac2_published_agreement();
    println!(
        "[{}] AC2 published-grouping agreement (soft, does not affect exit status): {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
