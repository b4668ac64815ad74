//! Labor-market flow analytics for rotating-panel survey microdata.
//!
//! The crate covers the whole pipeline from linked quarterly observations to
//! school-to-work transition durations:
//!
//! * [`model`]: the seven labor states, quarters, age bands and cohort filters.
//! * [`ingest`]: CSV parsing with rejection reports, wave linkage and a seeded
//!   synthetic rotating-panel generator.
//! * [`estimation`]: state-share tables and quarter-on-quarter transition
//!   matrices for arbitrary cohorts.
//! * [`fpt`]: first-passage-time distributions and expected first passage
//!   times, by truncated series and by a dense linear solve.
//! * [`fixtures`]: published early/late young transition matrices.
//! * [`report`]: CSV and JSON renderings used by the CLI and bindings.

pub mod config;
pub mod error;
pub mod estimation;
pub mod fixtures;
pub mod fpt;
pub mod ingest;
pub mod model;
pub mod report;

pub use config::{FallbackPolicy, OutputFormat, RunConfig};
pub use error::{Error, Result};
pub use estimation::{
    compute_shares, estimate_transition_matrix, renormalize_rows, transition_counts, StateShareTable,
    TransitionMatrix,
};
pub use fixtures::{efpt_targets, fixture, fixtures, EfptTarget, Fixture};
pub use fpt::{
    check_well_defined, efpt_linear, efpt_series, fpt_cdf, fpt_distribution, EfptMethod,
    EfptResult, FptDistribution, StochasticMatrix, Verdict, WellDefinedness,
};
pub use ingest::{
    generate_synthetic_panel, link_waves, parse_panel_file, parse_panel_reader, LinkResult,
    ObservationPair, PanelDataset, PanelFormat, Rejection, RejectionReport, SyntheticPanelSpec,
    WaveRow,
};
pub use model::{
    age_band_of, quarter_successor, AgeBand, CohortFilter, Demographics, Grid, LaborState, MacroRegion,
    QuarterId, Sex, N_STATES,
};
