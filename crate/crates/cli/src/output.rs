//! Frozen CSV schemas. Column order never changes and the header is always
//! written, even for an empty table.

use std::io::Write;

use banditlab_core::engine::SummaryRow;

pub const SUMMARY_HEADER: [&str; 15] = [
    "scenario",
    "statistic",
    "policy",
    "k",
    "T",
    "delta",
    "alpha",
    "zeta",
    "reps",
    "reject_rate",
    "mc_se",
    "mean_regret",
    "mean_mistakes",
    "mean_stop_time",
    "master_seed",
];

pub const TYPE1_HEADER: [&str; 8] = ["statistic", "k", "T", "policy", "reps", "reject_rate", "mc_se", "seed"];

pub const POWER_HEADER: [&str; 10] =
    ["scenario", "statistic", "policy", "k", "T", "delta", "reps", "power", "mc_se", "seed"];

/// Formats `x` with 6 significant digits, like C's `%g`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (5 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.scenario.to_string(),
            r.statistic.to_string(),
            r.policy.to_string(),
            r.k.to_string(),
            r.horizon.to_string(),
            fmt_num(r.delta),
            fmt_num(r.alpha),
            fmt_num(r.zeta),
            r.reps.to_string(),
            fmt_num(r.reject_rate),
            fmt_num(r.mc_se),
            fmt_num(r.mean_regret),
            fmt_num(r.mean_mistakes),
            r.mean_stop_time.map(fmt_num).unwrap_or_default(),
            r.master_seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_type1<W: Write>(out: W, rows: &[SummaryRow]) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(TYPE1_HEADER)?;
    for r in rows {
        w.write_record([
            r.statistic.to_string(),
            r.k.to_string(),
            r.horizon.to_string(),
            r.policy.to_string(),
            r.reps.to_string(),
            fmt_num(r.reject_rate),
            fmt_num(r.mc_se),
            r.master_seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_power<W: Write>(out: W, rows: &[SummaryRow]) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(POWER_HEADER)?;
    for r in rows {
        w.write_record([
            r.scenario.to_string(),
            r.statistic.to_string(),
            r.policy.to_string(),
            r.k.to_string(),
            r.horizon.to_string(),
            fmt_num(r.delta),
            r.reps.to_string(),
            fmt_num(r.reject_rate),
            fmt_num(r.mc_se),
            r.master_seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
