//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Criteria 6–8 are finite-size proxies for limit statements, with the
//! thresholds fixed in advance and checked against seeded Monte Carlo runs.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow};
use qcc_core::partitions::enumerate_partitions;
use qcc_core::quantumoracle;
use qcc_core::repmeasure::{dim_irrep, mult_irrep, plancherel_weight};
use qcc_core::sampler::{estimate_p_extended, estimate_p_nonextended};
use qcc_core::success::{min_sufficient_ancilla, p_extended, p_extended_limited, p_nonextended};
use qcc_core::tracywidom::{theorem_b_scan, tw_selftest, CROSS_METHOD_TOL};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_small_instance() -> Outcome {
    let five_sixths = BigRational::new(5.into(), 6.into());
    let non = p_nonextended(3, 2).map_err(|e| e.to_string())?;
    let ext = p_extended(3, 2).map_err(|e| e.to_string())?;
    ensure(
        non.exact() == &five_sixths,
        format!("nonextended = {}", non.exact()),
    )?;
    ensure(
        ext.exact() == &five_sixths,
        format!("extended = {}", ext.exact()),
    )?;
    Ok("p_nonextended(3,2) = p_extended(3,2) = 5/6".into())
}

fn c2_reduction_and_saturation() -> Outcome {
    let mut checked = 0;
    for n in 1..=12 {
        for d in 1..=4 {
            let non = p_nonextended(n, d).unwrap();
            let one = p_extended_limited(n, d, &BigUint::one()).unwrap();
            ensure(
                one.exact() == non.exact(),
                format!("R = 1 differs at n = {n}, d = {d}"),
            )?;
            let full = p_extended(n, d).unwrap();
            let r_min = min_sufficient_ancilla(n, d).unwrap();
            for extra in 0u32..4 {
                let r = &r_min + BigUint::from(extra);
                let lim = p_extended_limited(n, d, &r).unwrap();
                ensure(
                    lim.exact() == full.exact(),
                    format!("R = {r} short of saturation at n = {n}, d = {d}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} saturated (n, d, R) triples, all R = 1 reductions exact"
    ))
}

fn c3_plancherel_normalization() -> Outcome {
    for n in 0..=30 {
        let total = enumerate_partitions(n, None, None)
            .map(|p| plancherel_weight(&p))
            .fold(BigRational::from_integer(0.into()), |a, w| a + w);
        ensure(total.is_one(), format!("n = {n}: sum = {total}"))?;
    }
    Ok("Σ D²/n! = 1 for n ≤ 30".into())
}

fn c4_schur_weyl() -> Outcome {
    for n in 0..=15 {
        for d in 1..=4usize {
            let total: BigUint = enumerate_partitions(n, None, None)
                .map(|p| mult_irrep(&p, d) * dim_irrep(&p))
                .sum();
            ensure(
                total == BigUint::from(d).pow(n as u32),
                format!("n = {n}, d = {d}: {total}"),
            )?;
        }
    }
    Ok("Σ m·D = d^n for n ≤ 15, d ≤ 4".into())
}

fn c5_quantum_oracle() -> Outcome {
    let (mut worst_dev, mut worst_comp): (f64, f64) = (0.0, 0.0);
    for n in 1..=4 {
        for d in 1..=3 {
            for r in 1..=3 {
                let v =
                    quantumoracle::verify(n, d, r).map_err(|e| format!("({n},{d},{r}): {e}"))?;
                ensure(
                    v.deviation <= 1e-10,
                    format!("({n},{d},{r}): deviation {:e}", v.deviation),
                )?;
                ensure(
                    v.evaluation.completeness_residual <= 1e-10,
                    format!(
                        "({n},{d},{r}): completeness {:e}",
                        v.evaluation.completeness_residual
                    ),
                )?;
                worst_dev = worst_dev.max(v.deviation);
                worst_comp = worst_comp.max(v.evaluation.completeness_residual);
            }
        }
    }
    Ok(format!(
        "max deviation {worst_dev:.1e}, max completeness residual {worst_comp:.1e}"
    ))
}

fn c6_transition_direction() -> Outcome {
    let n = 50;
    let hi_d = (1.6 * n as f64 / std::f64::consts::E).floor() as usize;
    let lo_d = (0.6 * n as f64 / std::f64::consts::E).ceil() as usize;
    ensure(hi_d == 29 && lo_d == 12, format!("d values {hi_d}, {lo_d}"))?;
    let hi = estimate_p_nonextended(n, hi_d, 100_000, 6).map_err(|e| e.to_string())?;
    let lo = estimate_p_nonextended(n, lo_d, 100_000, 6).map_err(|e| e.to_string())?;
    let detail = format!(
        "p(d=29) = {:.4}, p(d=12) = {:.3e}",
        hi.estimate, lo.estimate
    );
    ensure(
        hi.estimate > lo.estimate && hi.estimate > 0.5 && lo.estimate < 0.05,
        detail.clone(),
    )?;
    Ok(detail)
}

fn c7_theorem_a() -> Outcome {
    let n = 2500usize;
    let root = (n as f64).sqrt();
    let hi_d = (2.4 * root).ceil() as usize;
    let lo_d = (1.6 * root).floor() as usize;
    let hi = estimate_p_extended(n, hi_d, 100_000, 7).map_err(|e| e.to_string())?;
    let lo = estimate_p_extended(n, lo_d, 100_000, 7).map_err(|e| e.to_string())?;
    let detail = format!(
        "p(d={hi_d}) = {:.5}, p(d={lo_d}) = {:.5}",
        hi.estimate, lo.estimate
    );
    ensure(hi.estimate >= 0.99 && lo.estimate <= 0.01, detail.clone())?;
    Ok(detail)
}

fn c8_theorem_b() -> Outcome {
    let xs = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let reports = theorem_b_scan(&[400, 900, 2500], &xs, 200_000, 8).map_err(|e| e.to_string())?;
    let mut worst = Vec::new();
    for n in [400, 900, 2500] {
        let budget = if n == 400 { 0.05 } else { 0.03 };
        let gap = reports
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.gap)
            .fold(0.0, f64::max);
        ensure(
            gap <= budget,
            format!("n = {n}: max gap {gap:.4} > {budget}"),
        )?;
        worst.push(format!("n={n}: {gap:.4}"));
    }
    Ok(format!("max |p − F_TW| {}", worst.join(", ")))
}

fn c9_tracy_widom_methods() -> Outcome {
    let report = tw_selftest();
    ensure(report.grid.len() == 101, "grid size")?;
    ensure(
        report.painleve.len() == 101 && report.fredholm.len() == 101,
        "an evaluation method failed to converge",
    )?;
    ensure(
        report.max_cross_gap <= CROSS_METHOD_TOL,
        format!("cross-method gap {:e}", report.max_cross_gap),
    )?;
    for values in [&report.painleve, &report.fredholm] {
        ensure(
            values.windows(2).all(|w| w[1] > w[0]),
            "not strictly increasing",
        )?;
    }
    let deriv = report
        .checks
        .iter()
        .find(|c| c.name == "derivative positive")
        .unwrap();
    ensure(deriv.passed, format!("min derivative {}", deriv.value))?;
    Ok(format!(
        "max cross-method gap {:.2e} on 101 points",
        report.max_cross_gap
    ))
}

fn qcc(args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qcc"))
        .args(args)
        .env("QCC_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`qcc {}` exited with {}",
            args.join(" "),
            out.status
        ));
    }
    Ok(out.stdout)
}

fn c10_determinism() -> Outcome {
    let commands: [&[&str]; 4] = [
        &[
            "sample", "--n", "400", "--d", "36", "--trials", "40000", "--seed", "10",
        ],
        &[
            "sample",
            "--n",
            "60",
            "--d",
            "9",
            "--trials",
            "20000",
            "--seed",
            "3",
            "--estimator",
            "nonextended",
            "--format",
            "json",
        ],
        &[
            "tw",
            "theoremB",
            "--n",
            "400,900",
            "--x=-1,0,1",
            "--trials",
            "20000",
            "--seed",
            "5",
        ],
        &[
            "table",
            "--n",
            "1..12",
            "--d",
            "1..4",
            "--scheme",
            "extended-limited",
            "--ancilla",
            "2",
        ],
    ];
    for args in commands {
        let reference = qcc(args, "1")?;
        for threads in ["2", "3", "8"] {
            ensure(
                qcc(args, threads)? == reference,
                format!(
                    "`qcc {}` differs with QCC_THREADS={threads}",
                    args.join(" ")
                ),
            )?;
        }
    }
    Ok("4 seeded commands byte-identical under QCC_THREADS = 1, 2, 3, 8".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "exact small-instance reproduction",
            budget: Duration::from_secs(1),
            run: c1_small_instance,
        },
        Criterion {
            id: 2,
            name: "ancilla reduction and saturation",
            budget: Duration::from_secs(30),
            run: c2_reduction_and_saturation,
        },
        Criterion {
            id: 3,
            name: "Plancherel normalization",
            budget: Duration::from_secs(60),
            run: c3_plancherel_normalization,
        },
        Criterion {
            id: 4,
            name: "Schur–Weyl dimension count",
            budget: Duration::from_secs(30),
            run: c4_schur_weyl,
        },
        Criterion {
            id: 5,
            name: "quantum-oracle agreement",
            budget: Duration::from_secs(300),
            run: c5_quantum_oracle,
        },
        Criterion {
            id: 6,
            name: "non-extended transition direction",
            budget: Duration::from_secs(120),
            run: c6_transition_direction,
        },
        Criterion {
            id: 7,
            name: "extended threshold at n = 2500",
            budget: Duration::from_secs(300),
            run: c7_theorem_a,
        },
        Criterion {
            id: 8,
            name: "Tracy–Widom convergence of p_max",
            budget: Duration::from_secs(900),
            run: c8_theorem_b,
        },
        Criterion {
            id: 9,
            name: "Tracy–Widom dual-method agreement",
            budget: Duration::from_secs(120),
            run: c9_tracy_widom_methods,
        },
        Criterion {
            id: 10,
            name: "determinism across worker counts",
            budget: Duration::from_secs(60),
            run: c10_determinism,
        },
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut err = std::io::stderr();
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!(
                "{detail}; took {elapsed:.1?}, budget {:?}",
                c.budget
            )),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        writeln!(
            err,
            "criterion {:>2} {tag}  {} — {detail} [{elapsed:.2?}]",
            c.id, c.name
        )
        .unwrap();
    }
    writeln!(
        err,
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    )
    .unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
