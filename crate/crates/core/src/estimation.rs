//! State-share tables and quarter-on-quarter transition matrices.

use serde::{Deserialize, Serialize};

use crate::config::FallbackPolicy;
use crate::error::{Error, Result};
use crate::fpt::StochasticMatrix;
use crate::ingest::PanelDataset;
use crate::model::{CohortFilter, Grid, LaborState, QuarterId, N_STATES};

/// Distribution of a cohort over the seven states in one quarter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateShareTable {
    pub quarter: QuarterId,
    pub filter: CohortFilter,
    pub shares: [f64; N_STATES],
    /// Weighted count per state.
    pub n_obs: [f64; N_STATES],
}

impl StateShareTable {
    pub fn share(&self, state: LaborState) -> f64 {
        self.shares[state.index()]
    }

    pub fn total(&self) -> f64 {
        self.n_obs.iter().sum()
    }
}

/// Share of each state among matching individuals, counted once each through
/// the origin state of their pair starting in `quarter`.
pub fn compute_shares(
    data: &PanelDataset,
    filter: &CohortFilter,
    quarter: QuarterId,
) -> Result<StateShareTable> {
    let mut n_obs = [0.0; N_STATES];
    for p in data
        .pairs
        .iter()
        .filter(|p| p.quarter_from == quarter && filter.matches(&p.demographics))
    {
        n_obs[p.state_from.index()] += p.weight;
    }
    let total: f64 = n_obs.iter().sum();
    if total <= 0.0 {
        return Err(Error::EmptyCohort {
            quarter: quarter.to_string(),
            filter: filter.to_string(),
        });
    }
    Ok(StateShareTable {
        quarter,
        filter: *filter,
        shares: n_obs.map(|c| c / total),
        n_obs,
    })
}

/// Row-stochastic 7×7 matrix of quarter-on-quarter transition probabilities.
///
/// Rows without any observed departure hold the uniform fallback `1/7` and
/// are listed in `fallback_rows`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub entries: Grid,
    /// Weighted number of pairs departing each state; `None` for published
    /// matrices whose underlying counts are unknown.
    pub row_counts: Option<[f64; N_STATES]>,
    pub from_quarter: QuarterId,
    pub to_quarter: QuarterId,
    pub filter: CohortFilter,
    pub fallback_rows: Vec<LaborState>,
    pub provenance: String,
}

impl TransitionMatrix {
    /// Builds a matrix from weighted transition counts, applying the uniform
    /// fallback to empty rows.
    pub fn from_counts(
        counts: &Grid,
        from_quarter: QuarterId,
        filter: CohortFilter,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let row_counts = counts.map(|row| row.iter().sum::<f64>());
        if row_counts.iter().all(|&c| c <= 0.0) {
            return Err(Error::EmptyCohort {
                quarter: from_quarter.to_string(),
                filter: filter.to_string(),
            });
        }
        let mut entries = [[0.0; N_STATES]; N_STATES];
        let mut fallback_rows = Vec::new();
        for (i, row) in counts.iter().enumerate() {
            if row_counts[i] > 0.0 {
                for (j, c) in row.iter().enumerate() {
                    entries[i][j] = c / row_counts[i];
                }
            } else {
                entries[i] = [1.0 / N_STATES as f64; N_STATES];
                fallback_rows.push(LaborState::ALL[i]);
            }
        }
        Ok(Self {
            entries,
            row_counts: Some(row_counts),
            from_quarter,
            to_quarter: from_quarter.successor(),
            filter,
            fallback_rows,
            provenance: provenance.into(),
        })
    }

    pub fn get(&self, from: LaborState, to: LaborState) -> f64 {
        self.entries[from.index()][to.index()]
    }

    pub fn is_fallback(&self, state: LaborState) -> bool {
        self.fallback_rows.contains(&state)
    }

    /// Rows with fewer than `min_support` weighted departures (fallback rows
    /// excluded). Always empty when counts are unknown.
    pub fn thin_rows(&self, min_support: f64) -> Vec<LaborState> {
        LaborState::ALL
            .iter()
            .copied()
            .filter(|s| {
                !self.is_fallback(*s)
                    && self.row_counts.is_some_and(|c| c[s.index()] < min_support)
            })
            .collect()
    }

    /// Applies the fallback policy. Under `AbsorbingFs` a fallback FS row is
    /// replaced by a self-loop; any other row is left as estimated.
    pub fn with_fallback_policy(mut self, policy: FallbackPolicy) -> Self {
        if policy == FallbackPolicy::AbsorbingFs && self.is_fallback(LaborState::Furlough) {
            let fs = LaborState::Furlough.index();
            self.entries[fs] = [0.0; N_STATES];
            self.entries[fs][fs] = 1.0;
        }
        self
    }

    /// The matrix as a labelled Markov chain for first-passage analysis.
    pub fn chain(&self) -> Result<StochasticMatrix> {
        StochasticMatrix::with_labels(
            self.entries.iter().map(|r| r.to_vec()).collect(),
            LaborState::codes(),
        )
    }
}

/// Divides every row by its sum.
pub fn renormalize_rows(m: &Grid) -> Result<Grid> {
    let mut out = *m;
    for (i, row) in out.iter_mut().enumerate() {
        if row.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::NotStochastic {
                row: i,
                reason: "negative or non-finite entry".into(),
            });
        }
        let sum: f64 = row.iter().sum();
        if sum <= 0.0 {
            return Err(Error::ZeroRow { row: i });
        }
        for x in row.iter_mut() {
            *x /= sum;
        }
    }
    Ok(out)
}

/// Weighted i→j transition counts for pairs starting in `from_quarter` whose
/// first-wave demographics match `filter`.
pub fn transition_counts(data: &PanelDataset, filter: &CohortFilter, from_quarter: QuarterId) -> Grid {
    let mut counts = [[0.0; N_STATES]; N_STATES];
    for p in data
        .pairs
        .iter()
        .filter(|p| p.quarter_from == from_quarter && filter.matches(&p.demographics))
    {
        counts[p.state_from.index()][p.state_to.index()] += p.weight;
    }
    counts
}

pub fn estimate_transition_matrix(
    data: &PanelDataset,
    filter: &CohortFilter,
    from_quarter: QuarterId,
) -> Result<TransitionMatrix> {
    let counts = transition_counts(data, filter, from_quarter);
    TransitionMatrix::from_counts(
        &counts,
        from_quarter,
        *filter,
        format!("estimated from {}", data.provenance),
    )
}
