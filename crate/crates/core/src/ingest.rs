//! Panel ingestion: pair/wave CSV parsing with per-row rejection, linkage of
//! adjacent waves into 3-month pairs, and a seeded rotating-panel generator.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Demographics, Grid, LaborState, MacroRegion, QuarterId, Sex, N_STATES};

pub const PAIR_ROWS_HEADER: [&str; 10] = [
    "person_id",
    "quarter_from",
    "quarter_to",
    "state_from",
    "state_to",
    "age",
    "sex",
    "citizen",
    "region",
    "weight",
];

pub const WAVE_ROWS_HEADER: [&str; 8] = [
    "person_id", "quarter", "state", "age", "sex", "citizen", "region", "weight",
];

/// One interview of one person.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveRow {
    pub person_id: String,
    pub quarter: QuarterId,
    pub state: LaborState,
    pub demographics: Demographics,
    pub weight: f64,
}

/// A person observed in two consecutive quarters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationPair {
    pub person_id: String,
    pub quarter_from: QuarterId,
    pub quarter_to: QuarterId,
    pub state_from: LaborState,
    pub state_to: LaborState,
    pub demographics: Demographics,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelFormat {
    PairRows,
    WaveRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelDataset {
    pub pairs: Vec<ObservationPair>,
    pub provenance: String,
    /// Earliest `quarter_from` and latest `quarter_to`; `None` when empty.
    pub quarter_range: Option<(QuarterId, QuarterId)>,
}

impl PanelDataset {
    pub fn new(pairs: Vec<ObservationPair>, provenance: impl Into<String>) -> Self {
        let quarter_range = pairs.iter().fold(None, |acc, p| match acc {
            None => Some((p.quarter_from, p.quarter_to)),
            Some((lo, hi)) => Some((
                std::cmp::min(lo, p.quarter_from),
                std::cmp::max(hi, p.quarter_to),
            )),
        });
        Self {
            pairs,
            provenance: provenance.into(),
            quarter_range,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Writes the canonical pair_rows CSV.
    pub fn write_pair_rows<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(PAIR_ROWS_HEADER)?;
        for p in &self.pairs {
            let d = &p.demographics;
            w.write_record([
                p.person_id.clone(),
                p.quarter_from.to_string(),
                p.quarter_to.to_string(),
                p.state_from.to_string(),
                p.state_to.to_string(),
                d.age_at_first_wave.to_string(),
                d.sex.to_string(),
                u8::from(d.italian_citizen).to_string(),
                d.macro_region.to_string(),
                p.weight.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionReport {
    pub rejections: Vec<Rejection>,
    /// Valid rows dropped because the age is outside 15..=34.
    pub filtered_out_of_range: usize,
}

impl RejectionReport {
    pub fn is_empty(&self) -> bool {
        self.rejections.is_empty()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["line_number", "reason"])?;
        for r in &self.rejections {
            w.write_record([r.line.to_string(), r.reason.clone()])?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }
}

pub fn parse_panel_file(
    path: impl AsRef<Path>,
    format: PanelFormat,
) -> Result<(PanelDataset, RejectionReport)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_panel_reader(file, format, path.display().to_string())
}

pub fn parse_panel_reader<R: Read>(
    reader: R,
    format: PanelFormat,
    provenance: impl Into<String>,
) -> Result<(PanelDataset, RejectionReport)> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let expected: &[&str] = match format {
        PanelFormat::PairRows => &PAIR_ROWS_HEADER,
        PanelFormat::WaveRows => &WAVE_ROWS_HEADER,
    };
    let header = rdr.headers()?.clone();
    let found: Vec<&str> = header.iter().collect();
    // The trailing weight column may be omitted entirely.
    let with_weight = found == expected;
    if !with_weight && found != expected[..expected.len() - 1] {
        return Err(Error::Header {
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    let width = Width {
        min: expected.len() - 1,
        max: found.len(),
    };
    let provenance = provenance.into();
    let mut report = RejectionReport::default();

    match format {
        PanelFormat::PairRows => {
            let mut pairs = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let line = rec.position().map_or(0, |p| p.line());
                match parse_pair_record(&rec, width) {
                    Ok(pair) if pair.demographics.admitted() => pairs.push(pair),
                    Ok(_) => report.filtered_out_of_range += 1,
                    Err(reason) => report.rejections.push(Rejection { line, reason }),
                }
            }
            Ok((PanelDataset::new(pairs, provenance), report))
        }
        PanelFormat::WaveRows => {
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let line = rec.position().map_or(0, |p| p.line());
                match parse_wave_record(&rec, width) {
                    Ok(row) => {
                        rows.push(row);
                        lines.push(line);
                    }
                    Err(reason) => report.rejections.push(Rejection { line, reason }),
                }
            }
            let linked = link_waves(&rows);
            for (idx, reason) in linked.rejected {
                report.rejections.push(Rejection {
                    line: lines[idx],
                    reason,
                });
            }
            report.rejections.sort_by_key(|r| r.line);
            let before = linked.pairs.len();
            let pairs: Vec<_> = linked
                .pairs
                .into_iter()
                .filter(|p| p.demographics.admitted())
                .collect();
            report.filtered_out_of_range += before - pairs.len();
            Ok((PanelDataset::new(pairs, provenance), report))
        }
    }
}

fn field<'a>(rec: &'a csv::StringRecord, i: usize, name: &str) -> Result<&'a str, String> {
    rec.get(i).ok_or_else(|| format!("missing {name}"))
}

fn parse_with<T, F>(rec: &csv::StringRecord, i: usize, name: &str, f: F) -> Result<T, String>
where
    F: FnOnce(&str) -> Result<T>,
{
    let raw = field(rec, i, name)?;
    f(raw).map_err(|e| format!("{name}: {e}"))
}

fn parse_demographics(
    rec: &csv::StringRecord,
    first: usize,
) -> Result<Demographics, String> {
    let age_raw = field(rec, first, "age")?;
    let age: u32 = age_raw
        .parse()
        .map_err(|_| format!("age: invalid value {age_raw:?}"))?;
    let sex: Sex = parse_with(rec, first + 1, "sex", str::parse)?;
    let italian_citizen = match field(rec, first + 2, "citizen")? {
        "0" => false,
        "1" => true,
        other => return Err(format!("citizen: invalid value {other:?} (expected 0/1)")),
    };
    let macro_region: MacroRegion = parse_with(rec, first + 3, "region", str::parse)?;
    Ok(Demographics {
        age_at_first_wave: age,
        sex,
        italian_citizen,
        macro_region,
    })
}

fn parse_weight(rec: &csv::StringRecord, i: usize) -> Result<f64, String> {
    match rec.get(i) {
        None | Some("") => Ok(1.0),
        Some(raw) => {
            let w: f64 = raw
                .parse()
                .map_err(|_| format!("weight: invalid value {raw:?}"))?;
            if w.is_finite() && w > 0.0 {
                Ok(w)
            } else {
                Err(format!("weight: nonpositive or non-finite value {raw:?}"))
            }
        }
    }
}

/// Accepted field counts: the header width, or one fewer when the trailing
/// weight is left off a row.
#[derive(Clone, Copy)]
struct Width {
    min: usize,
    max: usize,
}

fn check_len(rec: &csv::StringRecord, width: Width) -> Result<(), String> {
    if (width.min..=width.max).contains(&rec.len()) {
        Ok(())
    } else {
        Err(format!("expected {} fields, found {}", width.max, rec.len()))
    }
}

fn parse_pair_record(rec: &csv::StringRecord, width: Width) -> Result<ObservationPair, String> {
    check_len(rec, width)?;
    let person_id = field(rec, 0, "person_id")?;
    if person_id.is_empty() {
        return Err("person_id: empty".into());
    }
    let quarter_from: QuarterId = parse_with(rec, 1, "quarter_from", str::parse)?;
    let quarter_to: QuarterId = parse_with(rec, 2, "quarter_to", str::parse)?;
    let state_from: LaborState = parse_with(rec, 3, "state_from", str::parse)?;
    let state_to: LaborState = parse_with(rec, 4, "state_to", str::parse)?;
    let demographics = parse_demographics(rec, 5)?;
    let weight = parse_weight(rec, 9)?;
    if quarter_to != quarter_from.successor() {
        return Err(format!(
            "quarter_to {quarter_to} is not the quarter after {quarter_from}"
        ));
    }
    Ok(ObservationPair {
        person_id: person_id.to_string(),
        quarter_from,
        quarter_to,
        state_from,
        state_to,
        demographics,
        weight,
    })
}

fn parse_wave_record(rec: &csv::StringRecord, width: Width) -> Result<WaveRow, String> {
    check_len(rec, width)?;
    let person_id = field(rec, 0, "person_id")?;
    if person_id.is_empty() {
        return Err("person_id: empty".into());
    }
    Ok(WaveRow {
        person_id: person_id.to_string(),
        quarter: parse_with(rec, 1, "quarter", str::parse)?,
        state: parse_with(rec, 2, "state", str::parse)?,
        demographics: parse_demographics(rec, 3)?,
        weight: parse_weight(rec, 7)?,
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinkResult {
    /// Sorted by (person_id, quarter_from).
    pub pairs: Vec<ObservationPair>,
    /// Indices into the input rows that were dropped, with the reason.
    pub rejected: Vec<(usize, String)>,
}

/// Links per-wave rows into 3-month pairs.
///
/// One pair is emitted per person for every quarter `q` where both `q` and
/// its successor are present. Pair demographics come from the first wave of
/// the pair, with age frozen at the person's earliest observed wave. Rows
/// sharing a (person, quarter) key with different states are all rejected;
/// exact repeats keep the first occurrence.
pub fn link_waves(rows: &[WaveRow]) -> LinkResult {
    let mut by_person: BTreeMap<&str, BTreeMap<QuarterId, Vec<usize>>> = BTreeMap::new();
    for (idx, row) in rows.iter().enumerate() {
        by_person
            .entry(row.person_id.as_str())
            .or_default()
            .entry(row.quarter)
            .or_default()
            .push(idx);
    }

    let mut result = LinkResult::default();
    for (person, waves) in by_person {
        let mut kept: BTreeMap<QuarterId, &WaveRow> = BTreeMap::new();
        for (quarter, idxs) in waves {
            let first = &rows[idxs[0]];
            if idxs.iter().any(|&i| rows[i].state != first.state) {
                for &i in &idxs {
                    result.rejected.push((
                        i,
                        format!("conflicting states for person {person} in {quarter}"),
                    ));
                }
                continue;
            }
            for &i in &idxs[1..] {
                result.rejected.push((
                    i,
                    format!("duplicate row for person {person} in {quarter}"),
                ));
            }
            kept.insert(quarter, first);
        }
        let Some(frozen_age) = kept.values().next().map(|r| r.demographics.age_at_first_wave)
        else {
            continue;
        };
        for (&quarter, from) in &kept {
            if let Some(to) = kept.get(&quarter.successor()) {
                let mut demographics = from.demographics;
                demographics.age_at_first_wave = frozen_age;
                result.pairs.push(ObservationPair {
                    person_id: person.to_string(),
                    quarter_from: quarter,
                    quarter_to: quarter.successor(),
                    state_from: from.state,
                    state_to: to.state,
                    demographics,
                    weight: from.weight,
                });
            }
        }
    }
    result.rejected.sort_by_key(|(i, _)| *i);
    result
}

/// Parameters of a synthetic rotating panel.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPanelSpec {
    pub truth: Grid,
    pub initial_shares: [f64; N_STATES],
    pub n_individuals: usize,
    pub start_quarter: QuarterId,
    pub n_quarters: u32,
    pub seed: u64,
    /// Inclusive age range drawn uniformly at entry.
    pub age_range: (u32, u32),
}

impl SyntheticPanelSpec {
    pub fn new(
        truth: Grid,
        initial_shares: [f64; N_STATES],
        n_individuals: usize,
        start_quarter: QuarterId,
        n_quarters: u32,
        seed: u64,
    ) -> Self {
        Self {
            truth,
            initial_shares,
            n_individuals,
            start_quarter,
            n_quarters,
            seed,
            age_range: (15, 34),
        }
    }
}

/// Interview offsets (relative to entry) of the 2-in/2-out/2-in rotation.
const ROTATION: [u32; 4] = [0, 1, 4, 5];

/// Simulates a rotating panel whose quarter-on-quarter moves follow `truth`.
///
/// Person `k` enters at quarter offset `k mod (n_quarters - 1)`, is
/// interviewed at entry, entry+1, entry+4 and entry+5 (those inside the
/// window), and evolves through `truth` every quarter in between. Each person
/// draws from its own ChaCha stream keyed by (seed, k), so output does not
/// depend on generation order.
pub fn generate_synthetic_panel(spec: &SyntheticPanelSpec) -> Result<PanelDataset> {
    check_distribution(&spec.initial_shares, "initial_shares")?;
    for (i, row) in spec.truth.iter().enumerate() {
        check_distribution(row, &format!("truth row {i}"))?;
    }
    if spec.n_individuals == 0 {
        return Err(Error::InvalidArgument("n_individuals must be >= 1".into()));
    }
    if spec.n_quarters < 2 {
        return Err(Error::InvalidArgument(
            "n_quarters must be >= 2 to observe any pair".into(),
        ));
    }
    let (age_lo, age_hi) = spec.age_range;
    if age_lo > age_hi {
        return Err(Error::InvalidArgument(format!(
            "empty age range {age_lo}..={age_hi}"
        )));
    }

    let initial = WeightedIndex::new(spec.initial_shares).expect("validated distribution");
    let rows: Vec<WeightedIndex<f64>> = spec
        .truth
        .iter()
        .map(|r| WeightedIndex::new(r).expect("validated distribution"))
        .collect();
    let entry_slots = spec.n_quarters - 1;
    let regions = [MacroRegion::North, MacroRegion::Centre, MacroRegion::South];

    let mut pairs = Vec::new();
    for k in 0..spec.n_individuals {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(k as u64);

        let entry = (k as u32) % entry_slots;
        let demographics = Demographics {
            age_at_first_wave: rng.gen_range(age_lo..=age_hi),
            sex: if rng.gen_bool(0.5) { Sex::M } else { Sex::F },
            italian_citizen: rng.gen_bool(0.9),
            macro_region: regions[rng.gen_range(0..regions.len())],
        };
        let person_id = format!("P{k:07}");

        let last = ROTATION
            .iter()
            .map(|o| entry + o)
            .filter(|&t| t < spec.n_quarters)
            .max()
            .unwrap_or(entry);
        let mut path = Vec::with_capacity((last - entry + 1) as usize);
        let mut state = initial.sample(&mut rng);
        path.push(state);
        for _ in entry..last {
            state = rows[state].sample(&mut rng);
            path.push(state);
        }

        for offset in [ROTATION[0], ROTATION[2]] {
            let t = entry + offset;
            if t + 1 >= spec.n_quarters {
                continue;
            }
            let from = spec.start_quarter.advance(t);
            let rel = (t - entry) as usize;
            pairs.push(ObservationPair {
                person_id: person_id.clone(),
                quarter_from: from,
                quarter_to: from.successor(),
                state_from: LaborState::ALL[path[rel]],
                state_to: LaborState::ALL[path[rel + 1]],
                demographics,
                weight: 1.0,
            });
        }
    }
    Ok(PanelDataset::new(
        pairs,
        format!(
            "synthetic rotating panel: n={}, start={}, quarters={}, seed={}",
            spec.n_individuals, spec.start_quarter, spec.n_quarters, spec.seed
        ),
    ))
}

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "{what} has a negative or non-finite entry"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "{what} sums to {sum}, not 1"
        )));
    }
    Ok(())
}
