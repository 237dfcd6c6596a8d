//! Results serialization: JSON with fixed 17-significant-digit floats
//! (bit-exact round trips) and CSV tables for external plotting.

use serde::{Deserialize, Serialize};

/// Full analysis output for one experiment.
///
/// Field order is fixed by the struct definition; serialization is
/// deterministic given the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsReport {
    /// Exact joint distribution, rows in lexicographic outcome order
    /// (`+` before `-`). Present when the experiment requests it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_distribution: Option<Vec<DistributionRow>>,
    /// Unconditioned calibrated correlations, one per requested subset.
    pub exact_correlations: Vec<CorrelationRow>,
    /// Conditional statistics when a selection is active.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionReport>,
    /// Monte Carlo estimates, one per requested subset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloReport>,
    /// Max absolute deviation between PPBS-tree leaf probabilities and the
    /// measurement-operator distribution.
    pub tree_cross_check: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub outcomes: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    /// 1-based measurement indices.
    pub subset: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub mode: String,
    /// Probability that the final projective stage accepts.
    pub acceptance: f64,
    /// Conditional calibrated means, one per requested subset.
    pub conditional_means: Vec<CorrelationRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub shots: u64,
    pub seed: u64,
    pub shards: u64,
    pub estimates: Vec<EstimateRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub subset: Vec<usize>,
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
    pub acceptance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// JSON formatter printing every float with 17 significant digits, enough
/// to reproduce the f64 bit pattern on parse.
struct Float17Formatter;

impl serde_json::ser::Formatter for Float17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.8e}")
    }
}

fn fmt17(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serialize a report; JSON reparses bit-exactly, CSV carries the
/// distribution and correlation tables.
pub fn serialize_results(report: &ResultsReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut buffer = Vec::new();
            let mut serializer =
                serde_json::Serializer::with_formatter(&mut buffer, Float17Formatter);
            report
                .serialize(&mut serializer)
                .expect("report serialization cannot fail");
            buffer.push(b'\n');
            String::from_utf8(buffer).expect("serde_json emits UTF-8")
        }
        ReportFormat::Csv => to_csv(report),
    }
}

pub fn parse_results(text: &str) -> serde_json::Result<ResultsReport> {
    serde_json::from_str(text)
}

fn to_csv(report: &ResultsReport) -> String {
    let mut out = String::new();
    if let Some(distribution) = &report.exact_distribution {
        out.push_str("outcomes,probability\n");
        for row in distribution {
            out.push_str(&format!("{},{}\n", row.outcomes, fmt17(row.probability)));
        }
    }
    if !report.exact_correlations.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str("subset,exact,selected_mean,mc_mean,mc_stderr,mc_count,mc_acceptance\n");
        for (i, row) in report.exact_correlations.iter().enumerate() {
            let subset = row
                .subset
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let selected = report
                .selection
                .as_ref()
                .map(|s| fmt17(s.conditional_means[i].value))
                .unwrap_or_default();
            let (mc_mean, mc_stderr, mc_count, mc_acceptance) = report
                .monte_carlo
                .as_ref()
                .map(|mc| {
                    let e = &mc.estimates[i];
                    (
                        fmt17(e.mean),
                        fmt17(e.stderr),
                        e.count.to_string(),
                        fmt17(e.acceptance),
                    )
                })
                .unwrap_or_default();
            out.push_str(&format!(
                "{subset},{},{selected},{mc_mean},{mc_stderr},{mc_count},{mc_acceptance}\n",
                fmt17(row.value)
            ));
        }
    }
    out
}
