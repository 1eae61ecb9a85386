//! One driver per subcommand. Each returns the exit status on success; the
//! record is written to `out`, human-facing text to `err`.

use std::io::Write;

use num_bigint::BigUint;
use num_rational::BigRational;
use qcc_core::quantumoracle::{self, Tolerances};
use qcc_core::repmeasure::factorial;
use qcc_core::sampler::{self, Z95};
use qcc_core::success::{
    self, Ancilla, ExactOptions, Scheme, SchemeQuery, DEFAULT_PARTITION_LIMIT,
};
use qcc_core::tracywidom::{self, Method, PEstimate, CONVERGENCE_TOL, CROSS_METHOD_TOL};

use crate::output::{Cell, Column, Kind, OutputRecord, Provenance};
use crate::{exit, Cli, CliError, Command, SampleArgs, TableArgs, TwCommand, VerifyArgs};

/// Largest Hilbert-space dimension `d^n·|R|` accepted by `verify`.
pub const VERIFY_MAX_DIM: usize = 729;

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (record, status) = match &cli.command {
        Command::Table(a) => (table(a)?, exit::OK),
        Command::Sample(a) => (sample(a)?, exit::OK),
        Command::Tw(TwCommand::Eval { x, method }) => {
            (tw_eval(&x.values, &x.spec, *method)?, exit::OK)
        }
        Command::Tw(TwCommand::Selftest) => tw_selftest(err)?,
        Command::Tw(TwCommand::TheoremB { n, x, trials, seed }) => (
            theorem_b(&n.0, &n.to_string(), &x.values, &x.spec, *trials, *seed)?,
            exit::OK,
        ),
        Command::Verify(a) => verify(a, err)?,
    };
    out.write_all(record.render(cli.format).as_bytes())?;
    out.flush()?;
    Ok(status)
}

fn table(a: &TableArgs) -> Result<OutputRecord, CliError> {
    let ancilla = match (a.scheme, &a.ancilla) {
        (Scheme::ExtendedLimited, r) => {
            Ancilla::Finite(r.clone().unwrap_or_else(|| BigUint::from(1u8)))
        }
        (_, Some(_)) => {
            return Err(CliError::Usage(
                "--ancilla only applies to --scheme extended-limited".into(),
            ))
        }
        (Scheme::Extended, None) => Ancilla::Unbounded,
        (_, None) => Ancilla::finite(1),
    };
    if a.breakdown && a.scheme == Scheme::Classical {
        return Err(CliError::Usage(
            "--breakdown is not available for the classical scheme".into(),
        ));
    }
    let opts = ExactOptions {
        partition_limit: DEFAULT_PARTITION_LIMIT,
        breakdown: a.breakdown,
    };

    let mut columns = vec![
        Column::new("n", Kind::Integer),
        Column::new("d", Kind::Integer),
        Column::new("scheme", Kind::Text),
        Column::new("ancilla", Kind::Text),
    ];
    if a.breakdown {
        columns.extend([
            Column::new("partition", Kind::Text),
            Column::new("dim", Kind::Integer),
            Column::new("mult", Kind::Integer),
            Column::new("term_exact", Kind::Rational),
            Column::new("term_float", Kind::Float),
        ]);
    } else {
        columns.extend([
            Column::new("p_exact", Kind::Rational),
            Column::new("p_float", Kind::Float),
        ]);
    }
    let mut rec = OutputRecord::new("table", columns)
        .param("n", a.n)
        .param("d", a.d)
        .param("scheme", a.scheme)
        .param("ancilla", &ancilla)
        .param("breakdown", a.breakdown);
    rec.provenance = Provenance {
        seed: None,
        method: "exact".into(),
        tolerances: vec![("partition_limit".into(), DEFAULT_PARTITION_LIMIT as f64)],
    };

    for n in a.n.iter() {
        for d in a.d.iter() {
            let query = SchemeQuery::new(n, d, a.scheme).with_ancilla(ancilla.clone());
            let report = success::evaluate(&query, &opts)?;
            let lead = || {
                vec![
                    Cell::int(n),
                    Cell::int(d),
                    Cell::text(a.scheme),
                    Cell::text(&ancilla),
                ]
            };
            if a.breakdown {
                let n_fact = factorial(n);
                for term in report.terms.iter().flatten() {
                    let share =
                        BigRational::new(term.contribution.clone().into(), n_fact.clone().into());
                    let mut row = lead();
                    row.extend([
                        Cell::text(&term.partition),
                        Cell::int(&term.dim),
                        Cell::int(&term.mult),
                        Cell::rational(&share),
                        Cell::Float(success::rational_to_f64(&share)),
                    ]);
                    rec.push_row(row);
                }
            } else {
                let mut row = lead();
                row.extend([Cell::rational(report.exact()), Cell::Float(report.p_float)]);
                rec.push_row(row);
            }
        }
    }
    Ok(rec)
}

fn sample(a: &SampleArgs) -> Result<OutputRecord, CliError> {
    let run = sampler::estimate(a.estimator, a.n, a.d, a.trials, a.seed)?;
    let mut rec = OutputRecord::new(
        "sample",
        vec![
            Column::new("n", Kind::Integer),
            Column::new("d", Kind::Integer),
            Column::new("trials", Kind::Integer),
            Column::new("seed", Kind::Integer),
            Column::new("estimator", Kind::Text),
            Column::new("estimate", Kind::Float),
            Column::new("stderr", Kind::Float),
            Column::new("ci95_low", Kind::Float),
            Column::new("ci95_high", Kind::Float),
        ],
    )
    .param("n", a.n)
    .param("d", a.d)
    .param("trials", a.trials)
    .param("seed", a.seed)
    .param("estimator", a.estimator);
    rec.provenance = Provenance {
        seed: Some(a.seed),
        method: format!("plancherel-rsk/{}", a.estimator),
        tolerances: vec![("z95".into(), Z95)],
    };
    rec.push_row(vec![
        Cell::int(run.n),
        Cell::int(run.d),
        Cell::int(run.trials),
        Cell::int(run.seed),
        Cell::text(run.estimator),
        Cell::Float(run.estimate),
        Cell::Float(run.stderr),
        Cell::Float(run.ci95.0),
        Cell::Float(run.ci95.1),
    ]);
    Ok(rec)
}

fn tw_eval(xs: &[f64], spec: &str, method: Method) -> Result<OutputRecord, CliError> {
    let table = tracywidom::tw_table(xs, method)?;
    let mut rec = OutputRecord::new(
        "tw eval",
        vec![
            Column::new("x", Kind::Float),
            Column::new("f_tw", Kind::Float),
        ],
    )
    .param("x", spec)
    .param("method", method);
    rec.provenance = Provenance {
        seed: None,
        method: method.to_string(),
        tolerances: vec![
            ("convergence_tol".into(), CONVERGENCE_TOL),
            ("err_est".into(), table.err_est),
        ],
    };
    for (&x, &f) in table.xs.iter().zip(&table.fs) {
        rec.push_row(vec![Cell::Float(x), Cell::Float(f)]);
    }
    Ok(rec)
}

fn tw_selftest(err: &mut dyn Write) -> Result<(OutputRecord, i32), CliError> {
    let report = tracywidom::tw_selftest();
    let mut rec = OutputRecord::new(
        "tw selftest",
        vec![
            Column::new("check", Kind::Text),
            Column::new("passed", Kind::Bool),
            Column::new("value", Kind::Float),
            Column::new("threshold", Kind::Float),
        ],
    )
    .param("grid", "-6:4:0.1");
    rec.provenance = Provenance {
        seed: None,
        method: "painleve+fredholm".into(),
        tolerances: vec![
            ("convergence_tol".into(), CONVERGENCE_TOL),
            ("cross_method_tol".into(), CROSS_METHOD_TOL),
        ],
    };
    for c in &report.checks {
        writeln!(
            err,
            "{:<22} {}  value {:>12.4e}  threshold {:.1e}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.value,
            c.threshold
        )?;
        rec.push_row(vec![
            Cell::text(&c.name),
            Cell::Bool(c.passed),
            Cell::Float(c.value),
            Cell::Float(c.threshold),
        ]);
    }
    writeln!(
        err,
        "self test {}",
        if report.passed { "passed" } else { "FAILED" }
    )?;
    Ok((
        rec,
        if report.passed {
            exit::OK
        } else {
            exit::CHECK_FAILED
        },
    ))
}

fn theorem_b(
    n_list: &[usize],
    n_spec: &str,
    xs: &[f64],
    x_spec: &str,
    trials: u64,
    seed: u64,
) -> Result<OutputRecord, CliError> {
    let reports = tracywidom::theorem_b_scan(n_list, xs, trials, seed)?;
    let mut rec = OutputRecord::new(
        "tw theoremB",
        vec![
            Column::new("n", Kind::Integer),
            Column::new("d", Kind::Integer),
            Column::new("x_target", Kind::Float),
            Column::new("x", Kind::Float),
            Column::new("p_exact", Kind::Rational),
            Column::new("p", Kind::Float),
            Column::new("stderr", Kind::Float),
            Column::new("f_tw", Kind::Float),
            Column::new("gap", Kind::Float),
        ],
    )
    .param("n", n_spec)
    .param("x", x_spec)
    .param("trials", trials)
    .param("seed", seed);
    rec.provenance = Provenance {
        seed: Some(seed),
        method: "plancherel-rsk+fredholm".into(),
        tolerances: vec![("convergence_tol".into(), CONVERGENCE_TOL)],
    };
    for r in &reports {
        let exact = match &r.p_est {
            PEstimate::Exact(q) => Cell::rational(q),
            PEstimate::Sampled(_) => Cell::Null,
        };
        rec.push_row(vec![
            Cell::int(r.n),
            Cell::int(r.d),
            Cell::Float(r.x_target),
            Cell::Float(r.x),
            exact,
            Cell::Float(r.p),
            Cell::Float(r.stderr()),
            Cell::Float(r.f_tw),
            Cell::Float(r.gap),
        ]);
    }
    Ok(rec)
}

fn verify(a: &VerifyArgs, err: &mut dyn Write) -> Result<(OutputRecord, i32), CliError> {
    if a.n == 0 || a.d == 0 || a.ancilla == 0 {
        return Err(CliError::Usage(
            "verify needs n, d and --ancilla all ≥ 1".into(),
        ));
    }
    let space =
        a.d.checked_pow(a.n as u32)
            .and_then(|q| q.checked_mul(a.ancilla));
    if a.n > 4 || a.d > 3 || space.is_none_or(|s| s > VERIFY_MAX_DIM) {
        return Err(CliError::Usage(format!(
            "size guard: verify builds dense matrices and accepts only n ≤ 4, d ≤ 3 and d^n·|R| ≤ {VERIFY_MAX_DIM} (got n = {}, d = {}, |R| = {})",
            a.n, a.d, a.ancilla
        )));
    }
    let tol = Tolerances::default();
    let v = quantumoracle::verify(a.n, a.d, a.ancilla)?;
    let passed = v.passed(&tol);

    writeln!(err, "isotypic decomposition of (C^{})^⊗{}:", a.d, a.n)?;
    writeln!(err, "  {:<12} {:>4} {:>4}", "partition", "D", "m")?;
    for c in &v.decomposition.components {
        writeln!(
            err,
            "  {:<12} {:>4} {:>4}",
            c.partition.to_string(),
            c.dim,
            c.mult
        )?;
    }
    writeln!(
        err,
        "achieved probability   {:.15}",
        v.evaluation.probability
    )?;
    writeln!(err, "closed form            {:.15}", v.closed_form)?;
    writeln!(err, "max deviation          {:.3e}", v.deviation)?;
    writeln!(
        err,
        "completeness residual  {:.3e}",
        v.evaluation.completeness_residual
    )?;
    writeln!(
        err,
        "min POVM eigenvalue    {:.3e}",
        v.evaluation.min_povm_eigenvalue
    )?;
    writeln!(err, "verify {}", if passed { "passed" } else { "FAILED" })?;

    let decomposition: Vec<String> = v
        .decomposition
        .components
        .iter()
        .map(|c| format!("{}:{}x{}", c.partition, c.dim, c.mult))
        .collect();
    let mut rec = OutputRecord::new(
        "verify",
        vec![
            Column::new("n", Kind::Integer),
            Column::new("d", Kind::Integer),
            Column::new("ancilla", Kind::Integer),
            Column::new("decomposition", Kind::Text),
            Column::new("probability", Kind::Float),
            Column::new("closed_form", Kind::Float),
            Column::new("deviation", Kind::Float),
            Column::new("completeness_residual", Kind::Float),
            Column::new("min_povm_eigenvalue", Kind::Float),
            Column::new("passed", Kind::Bool),
        ],
    )
    .param("n", a.n)
    .param("d", a.d)
    .param("ancilla", a.ancilla);
    rec.provenance = Provenance {
        seed: None,
        method: "dense-covariant-povm".into(),
        tolerances: vec![
            ("structural".into(), tol.structural),
            ("positivity".into(), tol.positivity),
            ("eigen_separation".into(), tol.eigen_separation),
        ],
    };
    rec.push_row(vec![
        Cell::int(a.n),
        Cell::int(a.d),
        Cell::int(a.ancilla),
        Cell::Text(decomposition.join(";")),
        Cell::Float(v.evaluation.probability),
        Cell::Float(v.closed_form),
        Cell::Float(v.deviation),
        Cell::Float(v.evaluation.completeness_residual),
        Cell::Float(v.evaluation.min_povm_eigenvalue),
        Cell::Bool(passed),
    ]);
    Ok((rec, if passed { exit::OK } else { exit::CHECK_FAILED }))
}
