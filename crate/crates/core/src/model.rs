//! Shared domain vocabulary: labor states, quarters, age bands, demographics
//! and cohort filters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of labor states; fixes the dimension of every transition matrix.
pub const N_STATES: usize = 7;

/// Dense 7×7 grid indexed by canonical state order (row = origin).
pub type Grid = [[f64; N_STATES]; N_STATES];

/// Labor-market state of an individual in a quarter.
///
/// The declaration order is the canonical matrix index order
/// (SE, TE, PE, U, NLFET, EDU, FS).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LaborState {
    /// Self-employment.
    #[serde(rename = "SE")]
    SelfEmployed,
    /// Temporary employment.
    #[serde(rename = "TE")]
    Temporary,
    /// Permanent employment.
    #[serde(rename = "PE")]
    Permanent,
    /// Unemployment.
    #[serde(rename = "U")]
    Unemployed,
    /// Neither in the labour force nor in education or training.
    #[serde(rename = "NLFET")]
    Inactive,
    /// Education.
    #[serde(rename = "EDU")]
    Education,
    /// Employed but on the furlough scheme.
    #[serde(rename = "FS")]
    Furlough,
}

impl LaborState {
    pub const ALL: [LaborState; N_STATES] = [
        LaborState::SelfEmployed,
        LaborState::Temporary,
        LaborState::Permanent,
        LaborState::Unemployed,
        LaborState::Inactive,
        LaborState::Education,
        LaborState::Furlough,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn code(self) -> &'static str {
        match self {
            LaborState::SelfEmployed => "SE",
            LaborState::Temporary => "TE",
            LaborState::Permanent => "PE",
            LaborState::Unemployed => "U",
            LaborState::Inactive => "NLFET",
            LaborState::Education => "EDU",
            LaborState::Furlough => "FS",
        }
    }

    pub fn codes() -> Vec<String> {
        Self::ALL.iter().map(|s| s.code().to_string()).collect()
    }
}

impl fmt::Display for LaborState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for LaborState {
    type Err = Error;

    /// Case-insensitive; `NEET` is accepted as an alias of `NLFET`.
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        if upper == "NEET" {
            return Ok(LaborState::Inactive);
        }
        Self::ALL
            .iter()
            .copied()
            .find(|st| st.code() == upper)
            .ok_or_else(|| Error::UnknownState(s.to_string()))
    }
}

/// Calendar quarter, ordered by (year, quarter).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct QuarterId {
    year: u16,
    quarter: u8,
}

impl QuarterId {
    pub fn new(year: u16, quarter: u8) -> Result<Self> {
        if year < 1900 || !(1..=4).contains(&quarter) {
            return Err(Error::InvalidQuarter(format!("{year}.{quarter}")));
        }
        Ok(Self { year, quarter })
    }

    pub fn year(self) -> u16 {
        self.year
    }

    pub fn quarter(self) -> u8 {
        self.quarter
    }

    pub fn successor(self) -> Self {
        if self.quarter == 4 {
            Self {
                year: self.year + 1,
                quarter: 1,
            }
        } else {
            Self {
                year: self.year,
                quarter: self.quarter + 1,
            }
        }
    }

    /// Quarter `n` steps later.
    pub fn advance(self, n: u32) -> Self {
        let ordinal = self.ordinal() + n;
        Self {
            year: (ordinal / 4) as u16,
            quarter: (ordinal % 4) as u8 + 1,
        }
    }

    /// Number of quarters since year 0, quarter 1.
    pub fn ordinal(self) -> u32 {
        self.year as u32 * 4 + (self.quarter as u32 - 1)
    }
}

/// Next calendar quarter; (y, 4) rolls over to (y + 1, 1).
pub fn quarter_successor(q: QuarterId) -> QuarterId {
    q.successor()
}

impl fmt::Display for QuarterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.year, self.quarter)
    }
}

impl FromStr for QuarterId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidQuarter(s.to_string());
        let (y, q) = s.trim().split_once('.').ok_or_else(bad)?;
        let year: u16 = y.parse().map_err(|_| bad())?;
        let quarter: u8 = q.parse().map_err(|_| bad())?;
        Self::new(year, quarter).map_err(|_| bad())
    }
}

impl TryFrom<String> for QuarterId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<QuarterId> for String {
    fn from(q: QuarterId) -> String {
        q.to_string()
    }
}

/// Age category, by age at first observed wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AgeBand {
    Teens,
    EarlyYoung,
    LateYoung,
    PreAdults,
}

impl AgeBand {
    pub const ALL: [AgeBand; 4] = [
        AgeBand::Teens,
        AgeBand::EarlyYoung,
        AgeBand::LateYoung,
        AgeBand::PreAdults,
    ];

    /// Inclusive age bounds.
    pub fn bounds(self) -> (u32, u32) {
        match self {
            AgeBand::Teens => (15, 19),
            AgeBand::EarlyYoung => (20, 24),
            AgeBand::LateYoung => (25, 29),
            AgeBand::PreAdults => (30, 34),
        }
    }

    pub fn contains(self, age: u32) -> bool {
        let (lo, hi) = self.bounds();
        (lo..=hi).contains(&age)
    }

    pub fn label(self) -> &'static str {
        match self {
            AgeBand::Teens => "TEENS",
            AgeBand::EarlyYoung => "EARLY_YOUNG",
            AgeBand::LateYoung => "LATE_YOUNG",
            AgeBand::PreAdults => "PRE_ADULTS",
        }
    }
}

pub fn age_band_of(age: u32) -> Option<AgeBand> {
    AgeBand::ALL.iter().copied().find(|b| b.contains(age))
}

impl fmt::Display for AgeBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AgeBand {
    type Err = Error;

    /// Accepts the canonical labels and the short CLI forms
    /// `teens`, `early`, `late`, `preadult`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "teens" => Ok(AgeBand::Teens),
            "early" | "early_young" => Ok(AgeBand::EarlyYoung),
            "late" | "late_young" => Ok(AgeBand::LateYoung),
            "preadult" | "preadults" | "pre_adults" | "pre_adult" => Ok(AgeBand::PreAdults),
            _ => Err(Error::InvalidField {
                field: "age band",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sex {
    M,
    F,
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sex::M => "M",
            Sex::F => "F",
        })
    }
}

impl FromStr for Sex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "M" | "m" => Ok(Sex::M),
            "F" | "f" => Ok(Sex::F),
            _ => Err(Error::InvalidField {
                field: "sex",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MacroRegion {
    North,
    Centre,
    South,
}

impl fmt::Display for MacroRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MacroRegion::North => "NORTH",
            MacroRegion::Centre => "CENTRE",
            MacroRegion::South => "SOUTH",
        })
    }
}

impl FromStr for MacroRegion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "NORTH" => Ok(MacroRegion::North),
            "CENTRE" | "CENTER" => Ok(MacroRegion::Centre),
            "SOUTH" => Ok(MacroRegion::South),
            _ => Err(Error::InvalidField {
                field: "region",
                value: s.to_string(),
            }),
        }
    }
}

/// Demographics recorded at the first observed wave. Age is frozen there, so
/// an individual never changes age band within a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Demographics {
    pub age_at_first_wave: u32,
    pub sex: Sex,
    pub italian_citizen: bool,
    pub macro_region: MacroRegion,
}

impl Demographics {
    /// Records outside 15..=34 are filtered out of the analysis.
    pub fn admitted(&self) -> bool {
        age_band_of(self.age_at_first_wave).is_some()
    }

    pub fn age_band(&self) -> Option<AgeBand> {
        age_band_of(self.age_at_first_wave)
    }
}

/// Cohort restriction; every `None` field means "no restriction".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohortFilter {
    pub age_band: Option<AgeBand>,
    pub sex: Option<Sex>,
    pub citizen: Option<bool>,
    pub region: Option<MacroRegion>,
}

impl CohortFilter {
    /// The unrestricted cohort ("All").
    pub fn all() -> Self {
        Self::default()
    }

    pub fn age(band: AgeBand) -> Self {
        Self {
            age_band: Some(band),
            ..Self::default()
        }
    }

    pub fn with_sex(mut self, sex: Sex) -> Self {
        self.sex = Some(sex);
        self
    }

    pub fn with_citizen(mut self, citizen: bool) -> Self {
        self.citizen = Some(citizen);
        self
    }

    pub fn with_region(mut self, region: MacroRegion) -> Self {
        self.region = Some(region);
        self
    }

    pub fn is_all(&self) -> bool {
        *self == Self::all()
    }

    pub fn matches(&self, d: &Demographics) -> bool {
        self.age_band.is_none_or(|b| b.contains(d.age_at_first_wave))
            && self.sex.is_none_or(|s| s == d.sex)
            && self.citizen.is_none_or(|c| c == d.italian_citizen)
            && self.region.is_none_or(|r| r == d.macro_region)
    }
}

impl fmt::Display for CohortFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all() {
            return f.write_str("All");
        }
        let mut parts = Vec::new();
        if let Some(b) = self.age_band {
            parts.push(format!("age={b}"));
        }
        if let Some(s) = self.sex {
            parts.push(format!("sex={s}"));
        }
        if let Some(c) = self.citizen {
            parts.push(format!("citizen={}", u8::from(c)));
        }
        if let Some(r) = self.region {
            parts.push(format!("region={r}"));
        }
        f.write_str(&parts.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn age_band_examples() {
        assert_eq!(age_band_of(20), Some(AgeBand::EarlyYoung));
        assert_eq!(age_band_of(14), None);
        assert_eq!(age_band_of(29), Some(AgeBand::LateYoung));
        assert_eq!(age_band_of(15), Some(AgeBand::Teens));
        assert_eq!(age_band_of(34), Some(AgeBand::PreAdults));
        assert_eq!(age_band_of(35), None);
    }

    #[test]
    fn successor_examples() {
        let q = |y, q| QuarterId::new(y, q).unwrap();
        assert_eq!(quarter_successor(q(2019, 4)), q(2020, 1));
        assert_eq!(quarter_successor(q(2020, 2)), q(2020, 3));
        assert_eq!(quarter_successor(q(2013, 1)), q(2013, 2));
    }

    #[test]
    fn quarter_parsing() {
        assert_eq!("2020.3".parse::<QuarterId>().unwrap(), QuarterId::new(2020, 3).unwrap());
        assert!("2020.5".parse::<QuarterId>().is_err());
        assert!("2020.0".parse::<QuarterId>().is_err());
        assert!("1899.1".parse::<QuarterId>().is_err());
        assert!("2020Q3".parse::<QuarterId>().is_err());
        assert_eq!(QuarterId::new(2019, 2).unwrap().to_string(), "2019.2");
    }

    #[test]
    fn state_codes() {
        assert_eq!("edu".parse::<LaborState>().unwrap(), LaborState::Education);
        assert_eq!("Nlfet".parse::<LaborState>().unwrap(), LaborState::Inactive);
        assert_eq!("NEET".parse::<LaborState>().unwrap(), LaborState::Inactive);
        assert!("XX".parse::<LaborState>().is_err());
        for (i, s) in LaborState::ALL.iter().enumerate() {
            assert_eq!(s.index(), i);
            assert_eq!(LaborState::from_index(i), Some(*s));
            assert_eq!(s.code().parse::<LaborState>().unwrap(), *s);
        }
        assert_eq!(
            LaborState::codes(),
            ["SE", "TE", "PE", "U", "NLFET", "EDU", "FS"]
        );
    }

    #[test]
    fn all_filter_matches_everyone() {
        let d = Demographics {
            age_at_first_wave: 22,
            sex: Sex::F,
            italian_citizen: false,
            macro_region: MacroRegion::South,
        };
        assert!(CohortFilter::all().matches(&d));
        assert!(CohortFilter::age(AgeBand::EarlyYoung).with_sex(Sex::F).matches(&d));
        assert!(!CohortFilter::all().with_region(MacroRegion::North).matches(&d));
        assert_eq!(CohortFilter::all().to_string(), "All");
    }

    proptest! {
        #[test]
        fn exactly_one_band_inside_coverage(age in 0u32..120) {
            let hits = AgeBand::ALL.iter().filter(|b| b.contains(age)).count();
            prop_assert_eq!(hits, usize::from((15..=34).contains(&age)));
        }

        #[test]
        fn four_successors_advance_one_year(year in 1900u16..3000, q in 1u8..=4) {
            let start = QuarterId::new(year, q).unwrap();
            let mut cur = start;
            for _ in 0..4 {
                cur = quarter_successor(cur);
            }
            prop_assert_eq!(cur, QuarterId::new(year + 1, q).unwrap());
            prop_assert_eq!(start.advance(4), cur);
            prop_assert!(start < start.successor());
        }
    }
}
