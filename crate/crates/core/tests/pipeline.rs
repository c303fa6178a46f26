mod common;

use std::collections::BTreeSet;

use rand::Rng;

use qaccel::features::{fisher_score, select_top_k};
use qaccel::harness::prepare_datasets;
use qaccel::pipeline::{
    generate_synthetic, ingest_reader, majority_vote, preprocess, split_by_drive, write_csv, CsvSchema, Dataset,
    MinMaxScaler, SplitSpec, SyntheticConfig, DEFAULT_FEATURE_RANGE,
};

fn small(seed: u64) -> SyntheticConfig {
    SyntheticConfig { total_samples: 4000, seed, ..Default::default() }
}

#[test]
fn default_generator_matches_the_published_drive_structure() {
    let log = generate_synthetic(&SyntheticConfig::default()).unwrap();
    assert_eq!(log.drives.len(), 79);
    let on = log.drives.iter().filter(|d| majority_vote(d).unwrap() == 1).count();
    assert_eq!((79 - on, on), (52, 27));
    let n = log.n_samples() as f64;
    assert!((n - 20458.0).abs() <= 0.05 * 20458.0, "{n} samples");

    let data = preprocess(&log).unwrap();
    assert_eq!(data.n_features(), 121);
}

#[test]
fn generator_is_seeded() {
    assert_eq!(generate_synthetic(&small(3)).unwrap(), generate_synthetic(&small(3)).unwrap());
    assert_ne!(generate_synthetic(&small(3)).unwrap(), generate_synthetic(&small(4)).unwrap());
}

#[test]
fn fisher_recovers_planted_features() {
    for seed in 0..5 {
        let data = preprocess(&generate_synthetic(&small(seed)).unwrap()).unwrap();
        let top: BTreeSet<usize> = select_top_k(&fisher_score(&data).unwrap(), 2).unwrap().into_iter().collect();
        assert_eq!(top, BTreeSet::from([7, 52]), "seed {seed}");
    }
}

#[test]
fn extra_noise_columns_never_take_first_place() {
    let mut r = common::rng(40);
    for seed in 0..5 {
        let data = preprocess(&generate_synthetic(&small(seed)).unwrap()).unwrap();
        let best = fisher_score(&data).unwrap().order[0];
        let rows: Vec<Vec<f64>> = data
            .features()
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.extend((0..20).map(|_| r.random_range(-1.0..1.0)));
                row
            })
            .collect();
        let mut names = data.feature_names().to_vec();
        names.extend((0..20).map(|j| format!("noise_{j}")));
        let wider = Dataset::new(rows, data.labels().to_vec(), data.drive_ids().to_vec(), names).unwrap();
        assert_eq!(fisher_score(&wider).unwrap().order[0], best);
    }
}

#[test]
fn csv_round_trip_preserves_the_dataset() {
    let log = generate_synthetic(&SyntheticConfig { total_samples: 600, ..small(5) }).unwrap();
    let mut buf = Vec::new();
    write_csv(&log, &mut buf).unwrap();
    let back = ingest_reader(buf.as_slice(), &CsvSchema::default()).unwrap();
    assert_eq!(back.drives.len(), log.drives.len());
    assert_eq!(preprocess(&back).unwrap(), preprocess(&log).unwrap());
}

#[test]
fn hand_written_file_with_a_bad_cell() {
    let text = "drive_id,timestamp,seat_heating,speed,temp\n\
                a,1000,on,10,5\n\
                a,1005,on,12,oops\n\
                b,2000,off,0,7\n\
                b,2005,off,1,8\n";
    let log = ingest_reader(text.as_bytes(), &CsvSchema::default()).unwrap();
    assert_eq!(log.drives.len(), 2);
    assert_eq!(log.invalid_rows(), 1);
    let data = preprocess(&log).unwrap();
    assert_eq!(data.len(), 3);
    assert_eq!(data.n_features(), 7);
}

#[test]
fn splits_are_drive_atomic_across_seeds_and_fractions() {
    let data = preprocess(&generate_synthetic(&small(6)).unwrap()).unwrap();
    let mut r = common::rng(41);
    for _ in 0..100 {
        let train = r.random_range(0.5..0.8);
        let test = r.random_range(0.05..(0.95 - train));
        let spec = SplitSpec { train, test, validation: 1.0 - train - test, seed: r.random() };
        let s = split_by_drive(&data, &spec).unwrap();
        let ids = |d: &Dataset| d.drives().into_iter().map(str::to_string).collect::<BTreeSet<_>>();
        let (a, b, c) = (ids(&s.train), ids(&s.test), ids(&s.validation));
        assert!(a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c));
        assert_eq!(a.len() + b.len() + c.len(), 79);
    }
}

#[test]
fn default_split_is_eight_one_one_by_drive() {
    let rows = (0..10).map(|i| vec![i as f64]).collect();
    let drives = (0..10).map(|i| format!("d{i}")).collect();
    let data = Dataset::new(rows, vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1], drives, vec!["v".into()]).unwrap();
    let s = split_by_drive(&data, &SplitSpec::default()).unwrap();
    assert_eq!([s.train.len(), s.test.len(), s.validation.len()], [8, 1, 1]);
    assert_eq!(s, split_by_drive(&data, &SplitSpec::default()).unwrap());
}

#[test]
fn scaling_uses_training_statistics_only() {
    let data = preprocess(&generate_synthetic(&small(7)).unwrap()).unwrap();
    let split = SplitSpec::default();
    let prepared = prepare_datasets(&data, &split, 2, DEFAULT_FEATURE_RANGE).unwrap();
    let parts = split_by_drive(&data, &split).unwrap();
    let train_only = MinMaxScaler::fit_with_range(&parts.train.select_features(&prepared.selected).unwrap(), DEFAULT_FEATURE_RANGE)
        .unwrap();
    assert_eq!(prepared.scaler, train_only);

    // the selection itself comes from the training partition
    let ranked = select_top_k(&fisher_score(&parts.train).unwrap(), 2).unwrap();
    assert_eq!(prepared.selected, ranked);

    // validation values can fall outside the training bounds and are clamped
    let (lo, hi) = DEFAULT_FEATURE_RANGE;
    assert!(prepared.validation.features().iter().flatten().all(|&v| (lo..=hi).contains(&v)));
}
