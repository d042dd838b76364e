//! Command implementations: validate flags, run the computations, emit
//! tables and charts.
//!
//! Every flag is checked before any solver runs. Validation problems exit
//! with code 2, numeric failures during computation with code 3, and a
//! failed verification run with code 4.

use std::path::Path;

use erasure_bounds::{
    compute_bounds, expurgated_exponent, expurgated_zero_rate, min_packet_length,
    packet_distortion_table, run_standard_suite, sphere_packing_sup, straight_line_exponent,
    tangent_rate, BecSpec, Error as CoreError, PacketSpec, RateBounds, SourceSpec,
};

use crate::args::{
    BoundsArgs, Cli, Command, ExponentsArgs, Format, OutputArgs, PacketBoundsArgs, PacketPlanArgs,
    Spacing, SweepArgs, VerifyArgs,
};
use crate::chart::emit_chart;
use crate::error::CliError;
use crate::table::{Cell, Table};

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exponents(args) => cmd_exponents(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::PacketBounds(args) => cmd_packet_bounds(args),
        Command::PacketPlan(args) => cmd_packet_plan(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn usage(e: CoreError) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric(e: CoreError) -> CliError {
    CliError::Numeric(e.to_string())
}

fn base_meta(table: &mut Table, command: &str, output: &OutputArgs) {
    table.push_meta("tool", Cell::text("erasure-bounds"));
    table.push_meta("version", Cell::text(env!("CARGO_PKG_VERSION")));
    table.push_meta("command", Cell::text(command));
    if output.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        table.push_meta("generated_unix", Cell::Int(secs as i64));
    }
}

fn write_output(table: &Table, output: &OutputArgs) -> Result<(), CliError> {
    let text = match output.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn maybe_chart(
    table: &Table,
    chart: &Option<std::path::PathBuf>,
    x: &str,
    ys: &[&str],
    log_x: bool,
) -> Result<(), CliError> {
    if let Some(path) = chart {
        emit_chart(table, x, ys, log_x, Path::new(path)).map_err(CliError::Io)?;
    }
    Ok(())
}

fn bounds_row_cells(bounds: &RateBounds, capacity: f64) -> Vec<Cell> {
    vec![
        Cell::Float(bounds.r_ex),
        Cell::Float(bounds.r_sl),
        bounds.c_eps.map_or(Cell::Empty, Cell::Float),
        Cell::Float(capacity),
        Cell::text(bounds.method.as_str()),
        findings_cell(&bounds.findings),
    ]
}

fn findings_cell(findings: &[String]) -> Cell {
    if findings.is_empty() {
        Cell::Empty
    } else {
        Cell::text(findings.join("; "))
    }
}

fn cmd_exponents(args: ExponentsArgs) -> Result<(), CliError> {
    let bec = BecSpec::new(args.epsilon).map_err(usage)?;
    let rate_range_ok = args.r_min > 0.0 && args.r_min < args.r_max && args.r_max < 1.0;
    if !rate_range_ok {
        return Err(CliError::Usage(format!(
            "need 0 < r-min < r-max < 1, got [{}, {}]",
            args.r_min, args.r_max
        )));
    }
    if args.steps < 2 {
        return Err(CliError::Usage("need at least 2 steps".into()));
    }

    let r_prime = tangent_rate(&bec);
    let mut table = Table::new(&["r", "e_ex", "e_sp", "e_sl", "beyond_tangent", "warnings"]);
    base_meta(&mut table, "exponents", &args.output);
    table.push_meta("epsilon", Cell::Float(args.epsilon));
    if !bec.small_erasure_regime() {
        table.push_meta(
            "regime_warning",
            Cell::text("epsilon >= 0.5 is outside the small-erasure regime"),
        );
    }
    table.push_meta("capacity", Cell::Float(bec.capacity()));
    table.push_meta("tangent_rate", Cell::Float(r_prime));
    table.push_meta("e_ex_zero_rate", Cell::Float(expurgated_zero_rate(&bec)));
    table.push_meta("r_min", Cell::Float(args.r_min));
    table.push_meta("r_max", Cell::Float(args.r_max));
    table.push_meta("steps", Cell::Int(i64::from(args.steps)));

    for i in 0..args.steps {
        let t = f64::from(i) / f64::from(args.steps - 1);
        let rate = args.r_min + t * (args.r_max - args.r_min);
        let ex = expurgated_exponent(rate, &bec).map_err(numeric)?;
        let sp = sphere_packing_sup(rate, &bec).map_err(numeric)?;
        let beyond = rate > r_prime;
        let sl = if beyond {
            Cell::Empty
        } else {
            Cell::Float(straight_line_exponent(rate, &bec).map_err(numeric)?)
        };
        let warnings = if ex.vacuous {
            Cell::text("expurgated bound vacuous at this rate")
        } else {
            Cell::Empty
        };
        table.push_row(vec![
            Cell::Float(rate),
            Cell::Float(ex.value),
            Cell::Float(sp.value),
            sl,
            Cell::Bool(beyond),
            warnings,
        ]);
    }

    write_output(&table, &args.output)?;
    maybe_chart(&table, &args.chart, "r", &["e_ex", "e_sp", "e_sl"], false)
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    let bec = BecSpec::new(args.epsilon).map_err(usage)?;
    let src = SourceSpec::new(args.k, args.p).map_err(usage)?;

    let bounds = compute_bounds(&bec, &src, args.method.to_core()).map_err(numeric)?;

    let mut table = Table::new(&["r_ex", "r_sl", "c_eps", "capacity", "method", "warnings"]);
    base_meta(&mut table, "bounds", &args.output);
    table.push_meta("epsilon", Cell::Float(args.epsilon));
    table.push_meta("k", Cell::Int(i64::from(args.k)));
    table.push_meta("p", Cell::Float(args.p));
    table.push_row(bounds_row_cells(&bounds, bec.capacity()));

    write_output(&table, &args.output)
}

fn cmd_packet_bounds(args: PacketBoundsArgs) -> Result<(), CliError> {
    let pkt = PacketSpec::new(args.delta, args.packet_size).map_err(usage)?;
    let src = SourceSpec::new(args.k, args.p).map_err(usage)?;

    let bec = pkt.equivalent_bec();
    let bounds = compute_bounds(&bec, &src, args.method.to_core()).map_err(numeric)?;

    let mut table = Table::new(&[
        "packet_size",
        "delta",
        "equivalent_epsilon",
        "r_ex",
        "r_sl",
        "c_eps",
        "capacity",
        "method",
        "warnings",
    ]);
    base_meta(&mut table, "packet-bounds", &args.output);
    table.push_meta("k", Cell::Int(i64::from(args.k)));
    table.push_meta("p", Cell::Float(args.p));
    let mut row = vec![
        Cell::Int(i64::from(args.packet_size)),
        Cell::Float(args.delta),
        Cell::Float(bec.epsilon()),
    ];
    row.extend(bounds_row_cells(&bounds, bec.capacity()));
    table.push_row(row);

    write_output(&table, &args.output)
}

fn cmd_packet_plan(args: PacketPlanArgs) -> Result<(), CliError> {
    PacketSpec::new(args.delta, 1).map_err(usage)?;
    let src = SourceSpec::new(args.k, args.p).map_err(usage)?;
    if args.transmission_rate.is_nan() || args.transmission_rate <= 0.0 {
        return Err(CliError::Usage(format!(
            "transmission rate must be > 0, got {}",
            args.transmission_rate
        )));
    }
    if args.p_max < 1 {
        return Err(CliError::Usage("p-max must be >= 1".into()));
    }
    if let Some(limit) = args.max_distortion {
        if limit.is_nan() || limit <= 0.0 {
            return Err(CliError::Usage(format!(
                "max-distortion must be > 0, got {limit}"
            )));
        }
    }
    let method = args.method.to_core();

    let (points, p_min, limit) = match args.max_distortion {
        Some(limit) => {
            let plan = min_packet_length(
                args.delta,
                &src,
                args.transmission_rate,
                limit,
                args.p_max,
                method,
            )
            .map_err(numeric)?;
            (plan.table, plan.p_min, Some(limit))
        }
        None => {
            let table = packet_distortion_table(
                args.delta,
                &src,
                args.transmission_rate,
                args.p_max,
                method,
            )
            .map_err(numeric)?;
            (table, None, None)
        }
    };

    let mut table = Table::new(&[
        "packet_size",
        "equivalent_epsilon",
        "code_rate",
        "total_distortion",
        "meets_limit",
    ]);
    base_meta(&mut table, "packet-plan", &args.output);
    table.push_meta("delta", Cell::Float(args.delta));
    table.push_meta("transmission_rate", Cell::Float(args.transmission_rate));
    table.push_meta("k", Cell::Int(i64::from(args.k)));
    table.push_meta("p", Cell::Float(args.p));
    table.push_meta("method", Cell::text(args.method.as_str()));
    table.push_meta("p_max", Cell::Int(i64::from(args.p_max)));
    table.push_meta("distortion_limit", limit.map_or(Cell::Empty, Cell::Float));
    table.push_meta(
        "p_min",
        p_min.map_or(Cell::Empty, |p| Cell::Int(i64::from(p))),
    );
    table.push_meta(
        "achievable",
        limit.map_or(Cell::Empty, |_| Cell::Bool(p_min.is_some())),
    );

    for point in &points {
        let meets = limit.map_or(Cell::Empty, |l| Cell::Bool(point.total_distortion <= l));
        table.push_row(vec![
            Cell::Int(i64::from(point.packet_bits)),
            Cell::Float(point.epsilon),
            Cell::Float(point.code_rate),
            Cell::Float(point.total_distortion),
            meets,
        ]);
    }

    write_output(&table, &args.output)?;
    maybe_chart(
        &table,
        &args.chart,
        "packet_size",
        &["total_distortion"],
        true,
    )
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let prob_range_ok =
        args.prob_min > 0.0 && args.prob_min <= args.prob_max && args.prob_max < 1.0;
    if !prob_range_ok {
        return Err(CliError::Usage(format!(
            "need 0 < prob-min <= prob-max < 1, got [{}, {}]",
            args.prob_min, args.prob_max
        )));
    }
    if args.points < 1 {
        return Err(CliError::Usage("need at least 1 point".into()));
    }
    if args.packet_sizes.is_empty() || args.packet_sizes.iter().any(|&p| p < 1) {
        return Err(CliError::Usage("packet sizes must be >= 1".into()));
    }
    let src = SourceSpec::new(args.k, args.p).map_err(usage)?;
    let method = args.method.to_core();

    let probs: Vec<f64> = (0..args.points)
        .map(|i| {
            if args.points == 1 {
                return args.prob_min;
            }
            let t = f64::from(i) / f64::from(args.points - 1);
            match args.spacing {
                Spacing::Log => args.prob_min * (args.prob_max / args.prob_min).powf(t),
                Spacing::Linear => args.prob_min + t * (args.prob_max - args.prob_min),
            }
        })
        .collect();

    let mut table = Table::new(&[
        "packet_size",
        "erasure_prob",
        "equivalent_epsilon",
        "r_ex",
        "r_sl",
        "warnings",
        "error",
    ]);
    base_meta(&mut table, "sweep", &args.output);
    table.push_meta("k", Cell::Int(i64::from(args.k)));
    table.push_meta("p", Cell::Float(args.p));
    table.push_meta("method", Cell::text(method.as_str()));
    table.push_meta(
        "packet_sizes",
        Cell::text(
            args.packet_sizes
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
    );
    table.push_meta("prob_min", Cell::Float(args.prob_min));
    table.push_meta("prob_max", Cell::Float(args.prob_max));
    table.push_meta("points", Cell::Int(i64::from(args.points)));

    for &packet_size in &args.packet_sizes {
        for &prob in &probs {
            // Per-row failures land in the error column; the sweep continues.
            let row = PacketSpec::new(prob, packet_size)
                .map(|pkt| pkt.equivalent_bec())
                .and_then(|bec| {
                    compute_bounds(&bec, &src, method).map(|bounds| (bec.epsilon(), bounds))
                });
            match row {
                Ok((eps, bounds)) => table.push_row(vec![
                    Cell::Int(i64::from(packet_size)),
                    Cell::Float(prob),
                    Cell::Float(eps),
                    Cell::Float(bounds.r_ex),
                    Cell::Float(bounds.r_sl),
                    findings_cell(&bounds.findings),
                    Cell::Empty,
                ]),
                Err(e) => table.push_row(vec![
                    Cell::Int(i64::from(packet_size)),
                    Cell::Float(prob),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::text(e.to_string()),
                ]),
            }
        }
    }

    write_output(&table, &args.output)?;

    if args.chart.is_some() {
        // Pivot the long table into one wide column pair per packet size so
        // the chart shows two lines (upper and lower bound) per size.
        let mut wide_cols: Vec<String> = vec!["erasure_prob".to_string()];
        for &p in &args.packet_sizes {
            wide_cols.push(format!("r_ex_p{p}"));
            wide_cols.push(format!("r_sl_p{p}"));
        }
        let mut wide = Table::new(&wide_cols.iter().map(String::as_str).collect::<Vec<_>>());
        for (i, &prob) in probs.iter().enumerate() {
            let mut row = vec![Cell::Float(prob)];
            for (j, _) in args.packet_sizes.iter().enumerate() {
                let src_row = &table.rows[j * probs.len() + i];
                row.push(src_row[3].clone());
                row.push(src_row[4].clone());
            }
            wide.push_row(row);
        }
        let y_cols: Vec<&str> = wide_cols.iter().skip(1).map(String::as_str).collect();
        maybe_chart(&wide, &args.chart, "erasure_prob", &y_cols, true)?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let report = run_standard_suite(args.inject_fault.as_deref()).map_err(usage)?;

    let mut table = Table::new(&["group", "passed", "max_deviation", "tolerance", "detail"]);
    base_meta(&mut table, "verify", &args.output);
    table.push_meta(
        "injected_fault",
        args.inject_fault.as_deref().map_or(Cell::Empty, Cell::text),
    );
    table.push_meta("all_passed", Cell::Bool(report.all_passed()));
    for g in &report.groups {
        table.push_row(vec![
            Cell::text(g.name),
            Cell::Bool(g.passed),
            Cell::Float(g.max_deviation),
            Cell::Float(g.tolerance),
            Cell::text(&g.detail),
        ]);
    }

    write_output(&table, &args.output)?;
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .groups
            .iter()
            .filter(|g| !g.passed)
            .map(|g| g.name)
            .collect();
        Err(CliError::Verification(format!(
            "groups failed: {}",
            failed.join(", ")
        )))
    }
}
