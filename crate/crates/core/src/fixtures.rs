//! Published quarter-on-quarter transition matrices for early young (20-24)
//! and late young (25-29), transcribed as printed (two decimals), together
//! with the published expected first passage times from education.
//!
//! Fixtures are keyed by cohort and destination quarter of their block, e.g.
//! `early_2019Q3` holds the 2019.II → 2019.III transitions. The late-young
//! 2019.I → 2019.II block prints some row labels as "2019.II"; the key
//! follows the block's column quarters.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::{renormalize_rows, TransitionMatrix};
use crate::model::{AgeBand, CohortFilter, Grid, LaborState, QuarterId, N_STATES};

const UNIFORM: [f64; N_STATES] = [0.14; N_STATES];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub cohort: Option<AgeBand>,
    from: (u16, u8),
    to: (u16, u8),
    /// Entries exactly as printed; rows may sum to 0.98..1.02.
    pub raw: Grid,
    pub provenance: &'static str,
}

impl Fixture {
    pub fn from_quarter(&self) -> QuarterId {
        QuarterId::new(self.from.0, self.from.1).expect("valid fixture quarter")
    }

    pub fn to_quarter(&self) -> QuarterId {
        QuarterId::new(self.to.0, self.to.1).expect("valid fixture quarter")
    }

    /// Rows printed as the uniform 0.14 pattern.
    pub fn fallback_rows(&self) -> Vec<LaborState> {
        LaborState::ALL
            .iter()
            .copied()
            .filter(|s| self.raw[s.index()] == UNIFORM)
            .collect()
    }

    pub fn renormalized(&self) -> Grid {
        renormalize_rows(&self.raw).expect("fixture rows are positive")
    }

    /// The renormalized matrix, ready for first-passage analysis.
    pub fn transition_matrix(&self) -> TransitionMatrix {
        TransitionMatrix {
            entries: self.renormalized(),
            row_counts: None,
            from_quarter: self.from_quarter(),
            to_quarter: self.to_quarter(),
            filter: self.cohort.map_or_else(CohortFilter::all, CohortFilter::age),
            fallback_rows: self.fallback_rows(),
            provenance: self.provenance.to_string(),
        }
    }
}

const PE: usize = 2;
const EDU: usize = 5;

const fn geometric_demo() -> Grid {
    let mut g = [[0.0; N_STATES]; N_STATES];
    let mut i = 0;
    while i < N_STATES {
        g[i][i] = 1.0;
        i += 1;
    }
    g[EDU][EDU] = 0.75;
    g[EDU][PE] = 0.25;
    g
}

static FIXTURES: [Fixture; 9] = [
    Fixture {
        name: "early_2019Q2",
        cohort: Some(AgeBand::EarlyYoung),
        from: (2019, 1),
        to: (2019, 2),
        raw: [
            [0.78, 0.02, 0.05, 0.0, 0.03, 0.13, 0.0],
            [0.01, 0.78, 0.05, 0.06, 0.02, 0.08, 0.0],
            [0.01, 0.01, 0.92, 0.02, 0.02, 0.02, 0.0],
            [0.01, 0.13, 0.02, 0.46, 0.24, 0.13, 0.0],
            [0.02, 0.08, 0.02, 0.21, 0.59, 0.08, 0.0],
            [0.01, 0.04, 0.01, 0.02, 0.03, 0.88, 0.0],
            UNIFORM,
        ],
        provenance: "early young (20-24) transition table, block 2019.I -> 2019.II",
    },
    Fixture {
        name: "early_2019Q3",
        cohort: Some(AgeBand::EarlyYoung),
        from: (2019, 2),
        to: (2019, 3),
        raw: [
            [0.72, 0.04, 0.03, 0.02, 0.04, 0.15, 0.0],
            [0.0, 0.79, 0.07, 0.03, 0.05, 0.06, 0.0],
            [0.0, 0.04, 0.89, 0.01, 0.01, 0.04, 0.0],
            [0.02, 0.17, 0.01, 0.36, 0.31, 0.13, 0.0],
            [0.02, 0.10, 0.04, 0.16, 0.63, 0.06, 0.0],
            [0.01, 0.06, 0.01, 0.01, 0.03, 0.88, 0.0],
            UNIFORM,
        ],
        provenance: "early young (20-24) transition table, block 2019.II -> 2019.III",
    },
    Fixture {
        name: "early_2020Q2",
        cohort: Some(AgeBand::EarlyYoung),
        from: (2020, 1),
        to: (2020, 2),
        raw: [
            [0.64, 0.01, 0.10, 0.05, 0.05, 0.15, 0.0],
            [0.01, 0.66, 0.06, 0.07, 0.10, 0.06, 0.05],
            [0.03, 0.06, 0.65, 0.03, 0.04, 0.02, 0.18],
            [0.01, 0.07, 0.02, 0.29, 0.52, 0.07, 0.01],
            [0.01, 0.04, 0.01, 0.19, 0.69, 0.05, 0.0],
            [0.01, 0.03, 0.01, 0.01, 0.03, 0.91, 0.01],
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        ],
        provenance: "early young (20-24) transition table, block 2020.I -> 2020.II",
    },
    Fixture {
        name: "early_2020Q3",
        cohort: Some(AgeBand::EarlyYoung),
        from: (2020, 2),
        to: (2020, 3),
        raw: [
            [0.75, 0.09, 0.01, 0.02, 0.02, 0.11, 0.0],
            [0.01, 0.80, 0.06, 0.04, 0.03, 0.07, 0.0],
            [0.01, 0.05, 0.85, 0.02, 0.02, 0.03, 0.02],
            [0.02, 0.12, 0.02, 0.41, 0.32, 0.10, 0.0],
            [0.0, 0.13, 0.01, 0.32, 0.41, 0.12, 0.0],
            [0.01, 0.04, 0.01, 0.04, 0.02, 0.87, 0.0],
            [0.0, 0.04, 0.75, 0.05, 0.06, 0.02, 0.08],
        ],
        provenance: "early young (20-24) transition table, block 2020.II -> 2020.III",
    },
    Fixture {
        name: "late_2019Q2",
        cohort: Some(AgeBand::LateYoung),
        from: (2019, 1),
        to: (2019, 2),
        raw: [
            [0.88, 0.04, 0.02, 0.02, 0.04, 0.02, 0.0],
            [0.01, 0.83, 0.07, 0.03, 0.03, 0.02, 0.0],
            [0.01, 0.03, 0.93, 0.01, 0.02, 0.01, 0.0],
            [0.03, 0.11, 0.04, 0.46, 0.29, 0.07, 0.0],
            [0.01, 0.07, 0.03, 0.21, 0.63, 0.06, 0.0],
            [0.01, 0.06, 0.02, 0.05, 0.04, 0.82, 0.0],
            [0.0, 0.0, 0.36, 0.0, 0.0, 0.0, 0.64],
        ],
        provenance: "late young (25-29) transition table, block 2019.I -> 2019.II \
                     (rows after SE printed with origin label 2019.II)",
    },
    Fixture {
        name: "late_2019Q3",
        cohort: Some(AgeBand::LateYoung),
        from: (2019, 2),
        to: (2019, 3),
        raw: [
            [0.87, 0.04, 0.01, 0.04, 0.04, 0.01, 0.0],
            [0.01, 0.77, 0.09, 0.04, 0.07, 0.02, 0.0],
            [0.01, 0.03, 0.94, 0.0, 0.02, 0.0, 0.0],
            [0.02, 0.12, 0.03, 0.40, 0.37, 0.07, 0.0],
            [0.02, 0.08, 0.01, 0.19, 0.67, 0.04, 0.0],
            [0.01, 0.06, 0.01, 0.03, 0.07, 0.81, 0.0],
            UNIFORM,
        ],
        provenance: "late young (25-29) transition table, block 2019.II -> 2019.III",
    },
    Fixture {
        name: "late_2020Q2",
        cohort: Some(AgeBand::LateYoung),
        from: (2020, 1),
        to: (2020, 2),
        raw: [
            [0.88, 0.02, 0.03, 0.02, 0.01, 0.02, 0.01],
            [0.02, 0.68, 0.06, 0.07, 0.10, 0.04, 0.04],
            [0.0, 0.04, 0.76, 0.0, 0.03, 0.01, 0.16],
            [0.01, 0.09, 0.03, 0.31, 0.48, 0.06, 0.02],
            [0.01, 0.03, 0.02, 0.16, 0.74, 0.03, 0.0],
            [0.03, 0.05, 0.02, 0.05, 0.06, 0.79, 0.0],
            [0.0, 0.01, 0.84, 0.0, 0.15, 0.0, 0.0],
        ],
        provenance: "late young (25-29) transition table, block 2020.I -> 2020.II",
    },
    Fixture {
        name: "late_2020Q3",
        cohort: Some(AgeBand::LateYoung),
        from: (2020, 2),
        to: (2020, 3),
        raw: [
            [0.86, 0.02, 0.03, 0.03, 0.02, 0.04, 0.0],
            [0.02, 0.76, 0.06, 0.05, 0.09, 0.02, 0.0],
            [0.02, 0.02, 0.94, 0.01, 0.01, 0.0, 0.01],
            [0.03, 0.09, 0.01, 0.46, 0.28, 0.14, 0.0],
            [0.0, 0.07, 0.02, 0.23, 0.61, 0.06, 0.0],
            [0.04, 0.06, 0.01, 0.08, 0.06, 0.76, 0.0],
            [0.0, 0.10, 0.76, 0.01, 0.05, 0.0, 0.07],
        ],
        provenance: "late young (25-29) transition table, block 2020.II -> 2020.III",
    },
    Fixture {
        name: "geometric_q025",
        cohort: None,
        from: (2019, 2),
        to: (2019, 3),
        raw: geometric_demo(),
        provenance: "demo chain: EDU moves to PE with probability 0.25 per quarter, \
                     every other state absorbing",
    },
];

pub fn fixtures() -> &'static [Fixture] {
    &FIXTURES
}

pub fn fixture(name: &str) -> Result<&'static Fixture> {
    FIXTURES
        .iter()
        .find(|f| f.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// A published expected first passage time (in years) from education.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfptTarget {
    pub category: &'static str,
    pub target: LaborState,
    /// Destination quarter of the matrix the value was computed from.
    pub quarter: (u16, u8),
    pub years: f64,
    /// Matching transcribed matrix, available for the unrestricted cohort only.
    pub fixture: Option<&'static str>,
}

macro_rules! efpt_rows {
    ($($cat:literal, $fx19:expr, $fx20:expr => $pe19:literal $pe20:literal $te19:literal $te20:literal;)*) => {
        [$(
            EfptTarget { category: $cat, target: LaborState::Permanent, quarter: (2019, 3), years: $pe19, fixture: $fx19 },
            EfptTarget { category: $cat, target: LaborState::Permanent, quarter: (2020, 3), years: $pe20, fixture: $fx20 },
            EfptTarget { category: $cat, target: LaborState::Temporary, quarter: (2019, 3), years: $te19, fixture: $fx19 },
            EfptTarget { category: $cat, target: LaborState::Temporary, quarter: (2020, 3), years: $te20, fixture: $fx20 },
        )*]
    };
}

static EFPT_TARGETS: [EfptTarget; 20] = efpt_rows! {
    "All", Some("early_2019Q3"), Some("early_2020Q3") => 8.63 11.25 3.72 4.16;
    "Males", None, None => 6.88 10.39 3.46 3.60;
    "Females", None, None => 11.70 12.85 4.08 4.89;
    "Non Italian citizens", None, None => 6.43 9.09 6.40 7.55;
    "South", None, None => 14.92 14.88 4.23 5.98;
};

/// Published early-young EFPTs from education to permanent and temporary
/// employment.
pub fn efpt_targets() -> &'static [EfptTarget] {
    &EFPT_TARGETS
}
