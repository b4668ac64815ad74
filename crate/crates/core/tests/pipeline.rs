use std::collections::HashMap;

use labor_flows::report::{fpt_csv, fpt_json, fpt_report, matrix_csv, matrix_json, shares_csv, shares_json};
use labor_flows::{
    compute_shares, estimate_transition_matrix, fixture, generate_synthetic_panel,
    parse_panel_reader, transition_counts, CohortFilter, LaborState, PanelFormat, QuarterId,
    RunConfig, SyntheticPanelSpec, N_STATES,
};

fn panel(n: usize, n_quarters: u32, seed: u64) -> labor_flows::PanelDataset {
    let fx = fixture("early_2019Q3").unwrap();
    let spec = SyntheticPanelSpec::new(
        fx.renormalized(),
        [1.0 / N_STATES as f64; N_STATES],
        n,
        QuarterId::new(2018, 1).unwrap(),
        n_quarters,
        seed,
    );
    generate_synthetic_panel(&spec).unwrap()
}

/// Rows after the `# key=value` preamble and the header, split on commas.
fn csv_body(text: &str) -> Vec<Vec<&str>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect()
}

#[test]
fn pair_rows_round_trip_through_csv() {
    let data = panel(500, 8, 3);
    let mut buf = Vec::new();
    data.write_pair_rows(&mut buf).unwrap();
    let (back, rejected) = parse_panel_reader(buf.as_slice(), PanelFormat::PairRows, "roundtrip").unwrap();
    assert!(rejected.is_empty());
    assert_eq!(back.pairs, data.pairs);
}

#[test]
fn generator_converges_over_twelve_quarters() {
    let data = panel(60_000, 12, 11);
    let truth = fixture("early_2019Q3").unwrap().renormalized();
    let all = CohortFilter::all();
    let mut pooled = [[0.0; N_STATES]; N_STATES];
    let mut q = QuarterId::new(2018, 1).unwrap();
    for _ in 0..11 {
        let c = transition_counts(&data, &all, q);
        for i in 0..N_STATES {
            for j in 0..N_STATES {
                pooled[i][j] += c[i][j];
            }
        }
        q = q.successor();
    }
    for i in 0..N_STATES {
        let n: f64 = pooled[i].iter().sum();
        if n < 5_000.0 {
            continue;
        }
        for j in 0..N_STATES {
            let err = (pooled[i][j] / n - truth[i][j]).abs();
            assert!(err < 0.015, "row {i} col {j}: error {err} with {n} departures");
        }
    }
}

#[test]
fn rotation_gives_at_most_two_pairs_per_person() {
    let data = panel(2_000, 10, 4);
    let mut per_person: HashMap<&str, usize> = HashMap::new();
    for p in &data.pairs {
        assert_eq!(p.quarter_to, p.quarter_from.successor());
        *per_person.entry(p.person_id.as_str()).or_default() += 1;
    }
    assert!(per_person.values().all(|&n| n <= 2));
}

#[test]
fn matrix_csv_and_json_carry_identical_values() {
    let data = panel(3_000, 4, 9);
    let m = estimate_transition_matrix(&data, &CohortFilter::all(), QuarterId::new(2018, 2).unwrap()).unwrap();
    let csv = matrix_csv(&m);
    let json = matrix_json(&m);
    for (i, row) in csv_body(&csv).iter().enumerate() {
        assert_eq!(row[0], LaborState::ALL[i].code());
        for j in 0..N_STATES {
            let from_csv: f64 = row[1 + j].parse().unwrap();
            assert_eq!(from_csv, json["entries"][i][j].as_f64().unwrap());
        }
        let count: f64 = row[1 + N_STATES].parse().unwrap();
        assert_eq!(count, json["row_counts"][i].as_f64().unwrap());
    }
}

#[test]
fn shares_csv_and_json_carry_identical_values() {
    let data = panel(3_000, 4, 9);
    let t = compute_shares(&data, &CohortFilter::all(), QuarterId::new(2018, 3).unwrap()).unwrap();
    let json = shares_json(&t);
    for (i, row) in csv_body(&shares_csv(&t)).iter().enumerate() {
        assert_eq!(json["shares"][i]["state"], row[0]);
        assert_eq!(row[1].parse::<f64>().unwrap(), json["shares"][i]["share"].as_f64().unwrap());
    }
}

#[test]
fn fpt_csv_and_json_carry_identical_values() {
    let m = fixture("late_2020Q3").unwrap().transition_matrix().chain().unwrap();
    let edu = LaborState::Education.index();
    let pe = LaborState::Permanent.index();
    let r = fpt_report(&m, "late_2020Q3", edu, pe, 30, &RunConfig::default()).unwrap();
    let csv = fpt_csv(&r);
    let json = fpt_json(&r);
    let body = csv_body(&csv);
    assert_eq!(body.len(), 30);
    for (k, row) in body.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), k + 1);
        assert_eq!(row[1].parse::<f64>().unwrap(), json["distribution"]["f"][k].as_f64().unwrap());
        assert_eq!(row[2].parse::<f64>().unwrap(), json["cdf"][k].as_f64().unwrap());
        assert_eq!(row[3].parse::<f64>().unwrap(), json["survival"][k].as_f64().unwrap());
    }
    let meta: HashMap<&str, &str> = csv
        .lines()
        .filter_map(|l| l.strip_prefix("# ")?.split_once('='))
        .collect();
    assert_eq!(
        meta["efpt_series_quarters"].parse::<f64>().unwrap(),
        json["series"]["efpt_quarters"].as_f64().unwrap()
    );
    assert_eq!(meta["verdict"], json["diagnostic"]["verdict"]);
}
