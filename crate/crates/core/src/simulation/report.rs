use std::fmt::Write as _;
use std::io::Write;

use crate::config::ScenarioConfig;
use crate::design::Method;
use crate::error::Result;

use super::TrialMetrics;

const Z95: f64 = 1.959_963_984_540_054;

/// Aggregates of one method at one symbol power.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub symbol_power_db: f64,
    /// Trials with a design.
    pub trials: usize,
    pub failures: usize,
    pub mean_credited_rate: f64,
    /// 95% normal-approximation half-width of the credited-rate mean.
    pub ci95_credited_rate: f64,
    pub mean_actual_rate: f64,
    pub mean_approx_rate: f64,
    pub outage_probability: f64,
    pub mean_p_asynch: Vec<f64>,
    pub violation_probability: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary {
    pub seed: u64,
    pub trials: usize,
    pub thresholds: Vec<f64>,
    pub methods: Vec<MethodSummary>,
}

impl CampaignSummary {
    pub fn get(&self, method: Method, symbol_power_db: f64) -> Option<&MethodSummary> {
        self.methods
            .iter()
            .find(|m| m.method == method && m.symbol_power_db == symbol_power_db)
    }
}

fn mean_and_half_width(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::INFINITY);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Z95 * (var / n as f64).sqrt())
}

pub fn summarize(config: &ScenarioConfig, rows: &[TrialMetrics]) -> CampaignSummary {
    let j = config.counts.primaries;
    let mut methods = Vec::new();
    for &p_db in &config.channel.symbol_power_db {
        for &method in &config.methods.enabled {
            let all: Vec<&TrialMetrics> = rows
                .iter()
                .filter(|r| r.method == method && r.symbol_power_db == p_db)
                .collect();
            let ok: Vec<&TrialMetrics> = all
                .iter()
                .copied()
                .filter(|r| r.failure.is_none())
                .collect();
            let n = ok.len() as f64;
            let credited: Vec<f64> = ok.iter().map(|r| r.credited_rate).collect();
            let (mean_credited_rate, ci95_credited_rate) = mean_and_half_width(&credited);
            let mean = |f: &dyn Fn(&TrialMetrics) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / n;
            methods.push(MethodSummary {
                method,
                symbol_power_db: p_db,
                trials: ok.len(),
                failures: all.len() - ok.len(),
                mean_credited_rate,
                ci95_credited_rate,
                mean_actual_rate: mean(&|r| r.sum_rate_actual),
                mean_approx_rate: mean(&|r| r.sum_rate_approx),
                outage_probability: mean(&|r| f64::from(u8::from(r.outage))),
                mean_p_asynch: (0..j).map(|i| mean(&|r| r.p_asynch[i])).collect(),
                violation_probability: (0..j)
                    .map(|i| mean(&|r| f64::from(u8::from(r.violated[i]))))
                    .collect(),
            });
        }
    }
    CampaignSummary {
        seed: config.campaign.seed,
        trials: config.campaign.trials,
        thresholds: config.interference.thresholds.clone(),
        methods,
    }
}

/// Paired comparison of two methods' credited rates over common trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedDifference {
    pub mean_a: f64,
    pub mean_b: f64,
    /// Mean of `a - b`.
    pub mean_difference: f64,
    pub ci95: f64,
    /// Fraction of trials with `a >= b`.
    pub fraction_a_not_below: f64,
    pub pairs: usize,
}

impl PairedDifference {
    /// `a` exceeds `b` at 95% confidence.
    pub fn significant(&self) -> bool {
        self.mean_difference - self.ci95 > 0.0
    }

    pub fn relative_gain(&self) -> f64 {
        self.mean_difference / self.mean_b
    }
}

/// Compares a per-row score of methods `a` and `b` at one symbol power.
pub fn paired_difference(
    rows: &[TrialMetrics],
    a: Method,
    b: Method,
    symbol_power_db: f64,
    score: impl Fn(&TrialMetrics) -> f64,
) -> PairedDifference {
    let pick = |m: Method| {
        let mut v: Vec<(usize, f64)> = rows
            .iter()
            .filter(|r| {
                r.method == m && r.symbol_power_db == symbol_power_db && r.failure.is_none()
            })
            .map(|r| (r.trial_id, score(r)))
            .collect();
        v.sort_by_key(|x| x.0);
        v
    };
    let (va, vb) = (pick(a), pick(b));
    let mut pairs = Vec::new();
    let mut i = 0;
    for (t, x) in &va {
        while i < vb.len() && vb[i].0 < *t {
            i += 1;
        }
        if i < vb.len() && vb[i].0 == *t {
            pairs.push((*x, vb[i].1));
        }
    }
    let n = pairs.len() as f64;
    let diffs: Vec<f64> = pairs.iter().map(|(x, y)| x - y).collect();
    let (mean_difference, ci95) = mean_and_half_width(&diffs);
    PairedDifference {
        mean_a: pairs.iter().map(|p| p.0).sum::<f64>() / n,
        mean_b: pairs.iter().map(|p| p.1).sum::<f64>() / n,
        mean_difference,
        ci95,
        fraction_a_not_below: pairs.iter().filter(|(x, y)| x >= y).count() as f64 / n,
        pairs: pairs.len(),
    }
}

fn number(x: f64) -> String {
    format!("{x:e}")
}

/// One row per (trial, symbol power, method).
///
/// Columns: `trial_id, symbol_power_db, method, sum_rate_actual,
/// sum_rate_approx, credited_rate, outage, p_asynch_1..J, alpha_1..K, seed,
/// status`. Failed designs leave the numeric columns empty and carry the
/// error in `status`. A broadcast design fills only `alpha_1`.
pub fn write_trials_csv<W: Write>(
    out: W,
    config: &ScenarioConfig,
    rows: &[TrialMetrics],
) -> Result<()> {
    let (j, k) = (config.counts.primaries, config.counts.destinations);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = [
        "trial_id",
        "symbol_power_db",
        "method",
        "sum_rate_actual",
        "sum_rate_approx",
        "credited_rate",
        "outage",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((1..=j).map(|i| format!("p_asynch_{i}")));
    header.extend((1..=k).map(|i| format!("alpha_{i}")));
    header.push("seed".into());
    header.push("status".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.trial_id.to_string(),
            r.symbol_power_db.to_string(),
            r.method.to_string(),
        ];
        if r.failure.is_none() {
            rec.extend([
                number(r.sum_rate_actual),
                number(r.sum_rate_approx),
                number(r.credited_rate),
                u8::from(r.outage).to_string(),
            ]);
            rec.extend(r.p_asynch.iter().map(|&p| number(p)));
        } else {
            rec.extend(std::iter::repeat_n(String::new(), 4 + j));
        }
        rec.extend((0..k).map(|i| r.alpha.get(i).map_or(String::new(), |&a| number(a))));
        rec.push(r.seed.to_string());
        rec.push(r.failure.clone().unwrap_or_else(|| "ok".into()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per (symbol power, method).
pub fn write_summary_csv<W: Write>(out: W, summary: &CampaignSummary) -> Result<()> {
    let j = summary.thresholds.len();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = [
        "symbol_power_db",
        "method",
        "trials",
        "failures",
        "mean_credited_rate",
        "ci95_credited_rate",
        "mean_actual_rate",
        "mean_approx_rate",
        "outage_probability",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((1..=j).map(|i| format!("mean_p_asynch_{i}")));
    header.extend((1..=j).map(|i| format!("violation_probability_{i}")));
    header.push("seed".into());
    w.write_record(&header)?;
    for m in &summary.methods {
        let mut rec = vec![
            m.symbol_power_db.to_string(),
            m.method.to_string(),
            m.trials.to_string(),
            m.failures.to_string(),
            number(m.mean_credited_rate),
            number(m.ci95_credited_rate),
            number(m.mean_actual_rate),
            number(m.mean_approx_rate),
            number(m.outage_probability),
        ];
        rec.extend(m.mean_p_asynch.iter().map(|&p| number(p)));
        rec.extend(m.violation_probability.iter().map(|&p| number(p)));
        rec.push(summary.seed.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Fixed-width table for terminals.
pub fn summary_table(summary: &CampaignSummary) -> String {
    let j = summary.thresholds.len();
    let mut s = String::new();
    let _ = write!(
        s,
        "{:>8}  {:<17}{:>7}{:>6}{:>16}{:>12}{:>12}{:>9}",
        "P [dB]", "method", "trials", "fail", "credited rate", "actual", "approx", "outage"
    );
    for i in 1..=j {
        let _ = write!(
            s,
            "{:>14}{:>9}",
            format!("p_asynch_{i}"),
            format!("viol_{i}")
        );
    }
    s.push('\n');
    for m in &summary.methods {
        let _ = write!(
            s,
            "{:>8}  {:<17}{:>7}{:>6}{:>9.4} ±{:<6.4}{:>12.4}{:>12.4}{:>9.4}",
            m.symbol_power_db,
            m.method.name(),
            m.trials,
            m.failures,
            m.mean_credited_rate,
            m.ci95_credited_rate,
            m.mean_actual_rate,
            m.mean_approx_rate,
            m.outage_probability
        );
        for i in 0..j {
            let _ = write!(
                s,
                "{:>14.4e}{:>9.4}",
                m.mean_p_asynch[i], m.violation_probability[i]
            );
        }
        s.push('\n');
    }
    let _ = write!(
        s,
        "seed {}, {} trials, thresholds {:?}",
        summary.seed, summary.trials, summary.thresholds
    );
    s
}
