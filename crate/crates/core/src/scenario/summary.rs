use std::io;

use serde::Serialize;

use crate::engine::MetricsReport;
use crate::strategy::StrategyKind;

/// One replication of one sweep job.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub point: usize,
    pub label: String,
    pub strategy: StrategyKind,
    pub replication: u32,
    pub seed: u64,
    pub report: MetricsReport,
}

/// Mean and sample standard deviation (n - 1 denominator).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

impl MeanSd {
    /// Zero for an empty sample; the deviation is zero below two values.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return MeanSd::default();
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        MeanSd { mean, sd }
    }
}

/// Aggregate of all replications of one (sweep point, strategy) pair.
/// Statistics cover completed runs only; the rest are counted in `incomplete`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub point: usize,
    pub label: String,
    pub strategy: StrategyKind,
    pub runs: usize,
    pub incomplete: usize,
    pub transfer_time_ms: MeanSd,
    pub interests_sent: MeanSd,
    pub timeouts: MeanSd,
    pub duplicate_data: MeanSd,
    pub vrtt_p50_ms: MeanSd,
    /// Mean client signal quality over all runs of the point.
    pub mean_signal: f64,
}

/// Groups results by (point, strategy) in order of first appearance.
pub fn summarize(results: &[RunResult]) -> Vec<SummaryRow> {
    let mut keys: Vec<(usize, StrategyKind)> = Vec::new();
    for r in results {
        if !keys.contains(&(r.point, r.strategy)) {
            keys.push((r.point, r.strategy));
        }
    }
    keys.into_iter()
        .map(|(point, strategy)| {
            let group: Vec<&RunResult> =
                results.iter().filter(|r| r.point == point && r.strategy == strategy).collect();
            let done: Vec<&MetricsReport> =
                group.iter().map(|r| &r.report).filter(|r| r.completed).collect();
            let stat = |f: fn(&MetricsReport) -> f64| MeanSd::of(&done.iter().map(|r| f(r)).collect::<Vec<_>>());
            SummaryRow {
                point,
                label: group[0].label.clone(),
                strategy,
                runs: done.len(),
                incomplete: group.len() - done.len(),
                transfer_time_ms: stat(|r| r.transfer_time_ms),
                interests_sent: stat(|r| r.interests_sent as f64),
                timeouts: stat(|r| r.timeouts as f64),
                duplicate_data: stat(|r| r.duplicate_data as f64),
                vrtt_p50_ms: stat(|r| r.vrtt_p50_ms),
                mean_signal: group.iter().map(|r| r.report.mean_signal).sum::<f64>() / group.len() as f64,
            }
        })
        .collect()
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    point: usize,
    label: &'a str,
    strategy: &'static str,
    runs: usize,
    incomplete: usize,
    transfer_time_mean_ms: f64,
    transfer_time_sd_ms: f64,
    interests_sent_mean: f64,
    interests_sent_sd: f64,
    timeouts_mean: f64,
    timeouts_sd: f64,
    duplicate_data_mean: f64,
    vrtt_p50_mean_ms: f64,
    mean_signal: f64,
}

/// Writes one CSV line per summary row, header included.
pub fn write_summary_csv<W: io::Write>(rows: &[SummaryRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(SummaryRecord {
            point: r.point,
            label: &r.label,
            strategy: r.strategy.as_str(),
            runs: r.runs,
            incomplete: r.incomplete,
            transfer_time_mean_ms: r.transfer_time_ms.mean,
            transfer_time_sd_ms: r.transfer_time_ms.sd,
            interests_sent_mean: r.interests_sent.mean,
            interests_sent_sd: r.interests_sent.sd,
            timeouts_mean: r.timeouts.mean,
            timeouts_sd: r.timeouts.sd,
            duplicate_data_mean: r.duplicate_data.mean,
            vrtt_p50_mean_ms: r.vrtt_p50_ms.mean,
            mean_signal: r.mean_signal,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RunRecord<'a> {
    point: usize,
    label: &'a str,
    strategy: &'static str,
    replication: u32,
    seed: u64,
    completed: bool,
    failed: bool,
    transfer_time_ms: f64,
    interests_sent: u64,
    expressions: u64,
    timeouts: u64,
    consumer_timeouts: u64,
    duplicate_data: u64,
    vrtt_p50_ms: f64,
    mean_signal: f64,
    trace_hash: String,
}

/// Writes one CSV line per individual run.
pub fn write_runs_csv<W: io::Write>(results: &[RunResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in results {
        let m = &r.report;
        w.serialize(RunRecord {
            point: r.point,
            label: &r.label,
            strategy: r.strategy.as_str(),
            replication: r.replication,
            seed: r.seed,
            completed: m.completed,
            failed: m.failed,
            transfer_time_ms: m.transfer_time_ms,
            interests_sent: m.interests_sent,
            expressions: m.expressions,
            timeouts: m.timeouts,
            consumer_timeouts: m.consumer_timeouts,
            duplicate_data: m.duplicate_data,
            vrtt_p50_ms: m.vrtt_p50_ms,
            mean_signal: m.mean_signal,
            trace_hash: m.trace_hash.map(|h| format!("{h:016x}")).unwrap_or_default(),
        })?;
    }
    w.flush()?;
    Ok(())
}
