use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::registration::{
    cosine_distance, group_action, optimal_warping_with, phase_distance, to_srvf, warp_trajectory,
    DEFAULT_MAX_STEP,
};
use crate::types::{SrvfCurve, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Amplitude,
    Phase,
    Cosine,
}

/// Symmetric matrix of pairwise distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds from a possibly asymmetric square matrix: `(D + Dᵀ) / 2`,
    /// diagonal forced to zero.
    pub fn symmetrized(labels: Vec<String>, raw: Vec<f64>) -> Result<Self> {
        let m = labels.len();
        check_len(m * m, raw.len())?;
        let mut values = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    let v = 0.5 * (raw[i * m + j] + raw[j * m + i]);
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::InvalidValue(format!("distance ({i}, {j}) is {v}")));
                    }
                    values[i * m + j] = v;
                }
            }
        }
        Ok(Self { labels, values })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.len();
        &self.values[i * m..(i + 1) * m]
    }

    /// Mean over `rows × cols`, skipping the diagonal.
    pub fn block_mean(&self, rows: &[usize], cols: &[usize]) -> f64 {
        let mut acc = 0.0;
        let mut count = 0usize;
        for &i in rows {
            for &j in cols {
                if i != j {
                    acc += self.get(i, j);
                    count += 1;
                }
            }
        }
        if count == 0 { f64::NAN } else { acc / count as f64 }
    }
}

fn label_of(c: &Trajectory, i: usize) -> String {
    match (&c.meta.participant_id, &c.meta.trial) {
        (Some(p), Some(t)) => format!("{p}/{t}"),
        (Some(p), None) => p.clone(),
        _ => i.to_string(),
    }
}

/// All pairwise distances under `metric`.
///
/// With `registered`, curve `j` is warped onto curve `i` before measuring
/// entry `(i, j)`. The phase metric only exists for registered pairs.
pub fn pairwise_matrix(curves: &[Trajectory], metric: Metric, registered: bool) -> Result<DistanceMatrix> {
    pairwise_matrix_with(curves, metric, registered, DEFAULT_MAX_STEP)
}

pub fn pairwise_matrix_with(
    curves: &[Trajectory],
    metric: Metric,
    registered: bool,
    max_step: usize,
) -> Result<DistanceMatrix> {
    if metric == Metric::Phase && !registered {
        return Err(Error::InvalidCombination("phase distance requires registration".into()));
    }
    if curves.len() < 2 {
        return Err(Error::InsufficientData("distance matrix needs at least 2 curves".into()));
    }
    let n = curves[0].grid().len();
    for c in curves {
        check_len(n, c.grid().len())?;
    }
    let qs: Vec<SrvfCurve> = curves.iter().map(to_srvf).collect();
    let m = curves.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();

    let directed = |i: usize, j: usize| -> Result<f64> {
        if !registered {
            return match metric {
                Metric::Amplitude => qs[i].distance(&qs[j]),
                Metric::Cosine => cosine_distance(&curves[i], &curves[j]),
                Metric::Phase => unreachable!(),
            };
        }
        let w = optimal_warping_with(&qs[i], &qs[j], max_step)?;
        match metric {
            Metric::Amplitude => qs[i].distance(&group_action(&qs[j], &w)?),
            Metric::Phase => Ok(phase_distance(&w)),
            Metric::Cosine => cosine_distance(&curves[i], &warp_trajectory(&curves[j], &w)?),
        }
    };

    let cells: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|&(i, j)| Ok((directed(i, j)?, directed(j, i)?)))
        .collect::<Result<_>>()?;

    let mut raw = vec![0.0; m * m];
    for (&(i, j), &(dij, dji)) in pairs.iter().zip(&cells) {
        raw[i * m + j] = dij;
        raw[j * m + i] = dji;
    }
    let labels = curves.iter().enumerate().map(|(i, c)| label_of(c, i)).collect();
    DistanceMatrix::symmetrized(labels, raw)
}
