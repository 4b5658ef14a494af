//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmm_core::alpha::{
    named_example, qutrit_family, AlphaFile, AlphaMatrix, NamedExample, QutritFamilyParams,
};
use mmm_core::discrepancy::discrepancy_report;
use mmm_core::invariants::{
    block_invariants, kappa1, kappa2, kappa3, lu_probe, oracle_invariants, purity, BasisNorm,
};
use mmm_core::linalg::{
    eig_hermitian, partial_trace, partial_transpose, CMatrix, RealMultiset, Subsystem,
};
use mmm_core::par::Exec;
use mmm_core::qutrit::{grid_argmax, kappa2_closed, negativity_grid};
use mmm_core::state::{build_state, certify};

type Outcome = Result<String, String>;

/// Exit code, stdout, and the bytes of any file the command wrote.
type RunRecord = (Option<i32>, Vec<u8>, Vec<u8>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn params(t: f64, p: f64) -> QutritFamilyParams {
    QutritFamilyParams::new(t, p).expect("finite angles")
}

fn random_points(n: usize, seed: u64) -> Vec<QutritFamilyParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| params(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)))
        .collect()
}

fn grid(n: usize) -> impl Iterator<Item = QutritFamilyParams> {
    (0..n).flat_map(move |i| {
        (0..n).map(move |j| params(TAU * i as f64 / n as f64, TAU * j as f64 / n as f64))
    })
}

fn named(ds: &[usize]) -> Vec<(String, AlphaMatrix)> {
    let mut out = Vec::new();
    for &d in ds {
        for ex in NamedExample::ALL {
            if ex.supports(d) {
                out.push((format!("{ex} d={d}"), named_example(ex, d).unwrap()));
            }
        }
    }
    out
}

fn max_marginal_defect(a: &AlphaMatrix) -> f64 {
    let d = a.d();
    let rho = build_state(a).into_rho();
    let target = CMatrix::identity(d, d) / num_complex::Complex64::new(d as f64, 0.0);
    [Subsystem::A, Subsystem::B]
        .into_iter()
        .map(|sys| {
            let m = partial_trace(&rho, d, sys).unwrap() - &target;
            m.iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn marginals() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases: Vec<(String, AlphaMatrix)> = random_points(100, 1)
        .into_iter()
        .map(|p| {
            (
                format!("family({}, {})", p.theta(), p.phi()),
                qutrit_family(p),
            )
        })
        .collect();
    cases.extend(named(&[2, 3]));
    let count = cases.len();
    for (name, a) in cases {
        let dev = max_marginal_defect(&a);
        ensure!(dev < 1e-10, "{name}: marginal defect {dev:e}");
        worst = worst.max(dev);
    }
    Ok(format!("{count} states, worst marginal defect {worst:.1e}"))
}

fn kappa1_golden() -> Outcome {
    let want = RealMultiset::new(vec![1.0 / 3.0; 3]);
    let mut worst = 0.0f64;
    for p in grid(10).chain(random_points(50, 2)) {
        let a = qutrit_family(p);
        let k = kappa1(&a);
        let dev = k.max_deviation(&want).max((purity(&k) - 1.0 / 3.0).abs());
        // spectrum of the full state: kappa1 padded with zeros
        let eig = eig_hermitian(build_state(&a).rho()).unwrap();
        let dev_oracle = eig.largest(3).max_deviation(&want);
        worst = worst.max(dev).max(dev_oracle);
    }
    ensure!(worst <= 1e-12, "kappa1/purity deviation {worst:e}");
    Ok(format!("150 points, worst deviation {worst:.1e}"))
}

fn kappa2_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_sum = 0.0f64;
    for p in grid(20) {
        let a = qutrit_family(p);
        let closed = kappa2_closed(p);
        let blocks = kappa2(&a).unwrap();
        let pt = partial_transpose(build_state(&a).rho(), 3).unwrap();
        let oracle = eig_hermitian(&pt).unwrap();
        let gap = closed
            .max_deviation(&blocks)
            .max(closed.max_deviation(&oracle))
            .max(blocks.max_deviation(&oracle));
        ensure!(
            gap <= 1e-9,
            "({}, {}): pairwise gap {gap:e}",
            p.theta(),
            p.phi()
        );
        let sum_dev = [closed.sum(), blocks.sum(), oracle.sum()]
            .into_iter()
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max);
        ensure!(
            sum_dev <= 1e-10,
            "({}, {}): sum defect {sum_dev:e}",
            p.theta(),
            p.phi()
        );
        worst = worst.max(gap);
        worst_sum = worst_sum.max(sum_dev);
    }
    Ok(format!(
        "400 points, worst pairwise gap {worst:.1e}, worst sum defect {worst_sum:.1e}"
    ))
}

fn negativity_bound() -> Outcome {
    let points = negativity_grid(200, Exec::default()).unwrap();
    let best = grid_argmax(&points).unwrap();
    ensure!(
        (0.32..=1.0 / 3.0 + 1e-9).contains(&best.negativity),
        "max negativity {} out of range",
        best.negativity
    );
    let origin = &points[0];
    let oracle = oracle_invariants(
        &build_state(&qutrit_family(params(0.0, 0.0))),
        BasisNorm::Orthonormal,
    )
    .unwrap();
    let gap = (origin.negativity - 2.0 / 9.0)
        .abs()
        .max((oracle.negativity - 2.0 / 9.0).abs());
    ensure!(
        gap <= 1e-10,
        "N(0,0) grid {} oracle {}",
        origin.negativity,
        oracle.negativity
    );
    Ok(format!(
        "max {:.12} at ({:.6}, {:.6}), N(0,0) gap {gap:.1e}",
        best.negativity, best.theta, best.phi
    ))
}

fn kappa3_equivalence() -> Outcome {
    let mut cases = named(&[2, 3, 4]);
    cases.extend(random_points(25, 5).into_iter().map(|p| {
        (
            format!("family({}, {})", p.theta(), p.phi()),
            qutrit_family(p),
        )
    }));
    let count = cases.len();
    let mut worst = 0.0f64;
    for (name, a) in &cases {
        let s = build_state(a);
        for norm in [BasisNorm::Raw, BasisNorm::Orthonormal] {
            let blk = kappa3(a, norm).unwrap();
            let orc = oracle_invariants(&s, norm).unwrap().kappa3;
            let gap = blk.max_deviation(&orc);
            ensure!(gap <= 1e-8, "{name} {norm}: gap {gap:e}");
            worst = worst.max(gap);
        }
    }
    Ok(format!("{count} states x 2 modes, worst gap {worst:.1e}"))
}

fn lu_invariance() -> Outcome {
    let mut cases = named(&[2, 3]);
    cases.push(("family(1, 1)".into(), qutrit_family(params(1.0, 1.0))));
    let mut worst = 0.0f64;
    for (n, (name, a)) in cases.iter().enumerate() {
        let report = lu_probe(a, 50, 100 + n as u64, 1e-8, Exec::default()).unwrap();
        let dev = report.max_deviation.certified_max();
        ensure!(report.invariant && dev < 1e-8, "{name}: drift {dev:e}");
        worst = worst.max(dev);
    }
    Ok(format!(
        "{} states x 50 trials, worst drift {worst:.1e}",
        cases.len()
    ))
}

fn discrepancy_recorded() -> Outcome {
    let report = discrepancy_report().unwrap();
    ensure!(!report.entries.is_empty(), "empty report");
    let evidence = |id: &str, prefix: &str| -> Result<f64, String> {
        report
            .get(id)
            .ok_or(format!("missing entry {id}"))?
            .evidence
            .iter()
            .find(|e| e.label.starts_with(prefix))
            .map(|e| e.value)
            .ok_or(format!("{id}: missing evidence '{prefix}'"))
    };
    // (a) prefactor: 1/d leaves trace 1/3, 1/sqrt(d) gives 1
    let t_lit = evidence("fourier-prefactor", "family(0,0): sum_s Tr Q_s with 1/d")?;
    let t_ok = evidence(
        "fourier-prefactor",
        "family(0,0): sum_s Tr Q_s with 1/sqrt(d)",
    )?;
    ensure!(
        (t_lit - 1.0 / 3.0).abs() < 1e-12 && (t_ok - 1.0).abs() < 1e-12,
        "prefactor evidence {t_lit} {t_ok}"
    );
    // (b) summation placement
    let per = evidence("negativity-summation", "family(0,0): per-eigenvalue form")?;
    let tn = evidence("negativity-summation", "family(0,0): trace-norm form")?;
    ensure!(
        (per + 34.0 / 9.0).abs() < 1e-12 && (tn - 2.0 / 9.0).abs() < 1e-12,
        "summation evidence {per} {tn}"
    );
    // (c) negative radicand at the origin
    let rad = evidence("kappa3-radicand", "(0,0): radicand of radical expression 1")?;
    ensure!(
        rad < 0.0 && (rad + 7.0).abs() < 1e-12,
        "radicand evidence {rad}"
    );

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("discrepancies.md");
    std::fs::write(&path, report.to_markdown()).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    for id in [
        "fourier-prefactor",
        "negativity-summation",
        "kappa3-radicand",
    ] {
        ensure!(text.contains(&format!("## {id}")), "markdown lacks {id}");
    }
    Ok(format!(
        "{} entries, prefactor/summation/radicand evidence present",
        report.entries.len()
    ))
}

fn trivial_anchors() -> Outcome {
    for d in [2, 3, 4] {
        let a = named_example(NamedExample::BellSeed, d).unwrap();
        let inv = block_invariants(&a, BasisNorm::Orthonormal).unwrap();
        let cert = certify(&build_state(&a));
        let want_n = (d as f64 - 1.0) / 2.0;
        ensure!(
            (inv.purity - 1.0).abs() <= 1e-10,
            "bell-seed d={d} purity {}",
            inv.purity
        );
        ensure!(
            (inv.negativity - want_n).abs() <= 1e-10,
            "bell-seed d={d} negativity {}",
            inv.negativity
        );
        ensure!(cert.rank == 1, "bell-seed d={d} rank {}", cert.rank);
    }
    let bell2 = block_invariants(
        &named_example(NamedExample::BellSeed, 2).unwrap(),
        BasisNorm::Orthonormal,
    )
    .unwrap();
    ensure!(
        (bell2.negativity - 0.5).abs() <= 1e-10,
        "bell-seed d=2 negativity {}",
        bell2.negativity
    );
    let ud = block_invariants(
        &named_example(NamedExample::UniformDiagonal, 2).unwrap(),
        BasisNorm::Orthonormal,
    )
    .unwrap();
    ensure!(
        (ud.purity - 0.5).abs() <= 1e-10,
        "uniform-diagonal d=2 purity {}",
        ud.purity
    );
    Ok("bell-seed purity 1, N=1/2 at d=2, rank 1; uniform-diagonal purity 1/2".into())
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_mmm");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, a: &AlphaMatrix| -> String {
        let path = dir.path().join(name);
        std::fs::write(
            &path,
            serde_json::to_string(&AlphaFile::from_matrix(a.matrix())).unwrap(),
        )
        .unwrap();
        path.to_str().unwrap().to_owned()
    };
    let fa = write("a.json", &qutrit_family(params(0.0, 0.0)));
    let fb = write("b.json", &qutrit_family(params(1.5, 0.0)));
    let csv = dir.path().join("grid.csv").to_str().unwrap().to_owned();
    let md = dir.path().join("report.md").to_str().unwrap().to_owned();
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", &fa],
        vec!["build", "--family", "0.4", "2.2"],
        vec!["invariants", "--family", "0", "0"],
        vec!["invariants", "--family", "0", "0", "--mode", "paper-raw"],
        vec!["scan", "--resolution", "60", "--out", &csv],
        vec!["compare", &fa, &fb],
        vec![
            "probe", "--family", "1", "1", "--trials", "20", "--seed", "7",
        ],
        vec!["report", "--markdown", &md],
    ];
    let run = |args: &[&str]| -> Result<RunRecord, String> {
        let out = Command::new(bin)
            .args(args)
            .env_remove("MMM_TOL")
            .output()
            .map_err(|e| e.to_string())?;
        let side = if args[0] == "scan" {
            std::fs::read(&csv).map_err(|e| e.to_string())?
        } else if args[0] == "report" {
            std::fs::read(&md).map_err(|e| e.to_string())?
        } else {
            Vec::new()
        };
        Ok((out.status.code(), out.stdout, side))
    };
    for args in &runs {
        let first = run(args)?;
        let second = run(args)?;
        ensure!(!first.1.is_empty(), "{}: empty stdout", args[0]);
        ensure!(
            serde_json::from_slice::<serde_json::Value>(&first.1).is_ok(),
            "{}: stdout is not JSON",
            args[0]
        );
        ensure!(
            first == second,
            "{}: output differs between runs",
            args.join(" ")
        );
    }
    Ok(format!(
        "{} invocations byte-identical across two runs",
        runs.len()
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "marginals maximally mixed",
            budget: Duration::from_secs(1),
            check: marginals,
        },
        Criterion {
            id: 2,
            name: "kappa1 golden and purity",
            budget: Duration::from_secs(1),
            check: kappa1_golden,
        },
        Criterion {
            id: 3,
            name: "kappa2 closed form / blocks / oracle",
            budget: Duration::from_secs(5),
            check: kappa2_equivalence,
        },
        Criterion {
            id: 4,
            name: "negativity bound",
            budget: Duration::from_secs(30),
            check: negativity_bound,
        },
        Criterion {
            id: 5,
            name: "kappa3 blocks vs correlation SVD",
            budget: Duration::from_secs(5),
            check: kappa3_equivalence,
        },
        Criterion {
            id: 6,
            name: "LU-invariance probe",
            budget: Duration::from_secs(10),
            check: lu_invariance,
        },
        Criterion {
            id: 7,
            name: "discrepancy report",
            budget: Duration::from_secs(5),
            check: discrepancy_recorded,
        },
        Criterion {
            id: 8,
            name: "trivial anchors",
            budget: Duration::from_secs(1),
            check: trivial_anchors,
        },
        Criterion {
            id: 9,
            name: "CLI determinism",
            budget: Duration::from_secs(10),
            check: determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!(
                "{detail}; took {:.2}s, budget {}s",
                elapsed.as_secs_f64(),
                c.budget.as_secs()
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {}: {} ({detail}; {:.2}s)",
                c.id,
                c.name,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {} ({why})", c.id, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
