//! Two cases over five step clusters, where the first step of both cases is
//! the same text. Expected values: counts `[2,1,1,0,0]` and `[1,1,0,1,2]`,
//! overlap 2/4, Jaccard 2/5, cosine 3/sqrt(42).

use std::time::Instant;

use tcsim_core::casesim::{cosine_counts, jaccard, overlap, signatures};
use tcsim_core::clustering::Clustering;
use tcsim_core::corpus::{PreprocessConfig, Preprocessor, RawTestCase};

use super::{lib, Check};
use crate::ensure;

fn case(id: &str, name: &str, kind: &str, steps: &[&str]) -> RawTestCase {
    RawTestCase {
        case_id: id.into(),
        name: name.into(),
        case_type: Some(kind.into()),
        steps: steps.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn check() -> Check {
    let start = Instant::now();
    let cases = [
        case(
            "TC1",
            "Log in to an existing account",
            "Login",
            &["Log in with an existing account", "Open the map", "Select a quest", "Log in again"],
        ),
        case(
            "TC2",
            "Assignment with many students",
            "Education",
            &[
                "Log in with an existing account",
                "Create an assignment",
                "Add students to the assignment",
                "Open the class map",
                "Add more students",
            ],
        ),
    ];
    let pre = lib(Preprocessor::new(&PreprocessConfig::default()))?;
    let steps = pre.preprocess(&cases);
    let ids: Vec<String> = steps.iter().map(|s| s.step_id.clone()).collect();
    // TS1 C1, TS2 C2, TS3 C3, TS4 C1 | TS1 C1, TS5 C4, TS6 C5, TS7 C2, TS8 C5
    let labels = ["C1", "C2", "C3", "C1", "C1", "C4", "C5", "C2", "C5"];
    let clustering = lib(Clustering::from_labels(ids, &labels))?;
    let sigs = lib(signatures(&cases, &steps, &clustering, &pre))?;
    let (tc1, tc2) = (&sigs[0], &sigs[1]);

    ensure!(tc1.count_vec() == [2, 1, 1, 0, 0], "TC1 counts {:?}", tc1.count_vec());
    ensure!(tc2.count_vec() == [1, 1, 0, 1, 2], "TC2 counts {:?}", tc2.count_vec());
    ensure!(tc1.bool_vec() == [1, 1, 1, 0, 0], "TC1 boolean {:?}", tc1.bool_vec());
    ensure!(tc2.bool_vec() == [1, 1, 0, 1, 1], "TC2 boolean {:?}", tc2.bool_vec());
    let o = overlap(tc1, tc2);
    ensure!(o == 0.5, "overlap {o} != 0.5");
    let j = jaccard(tc1, tc2);
    ensure!((j - 0.4).abs() <= 1e-12, "jaccard {j} != 0.4");
    let c = cosine_counts(tc1, tc2);
    let expected = 3.0 / 42f64.sqrt();
    ensure!((c - expected).abs() <= 1e-9, "cosine {c} != {expected}");
    ensure!(overlap(tc2, tc1) == o && cosine_counts(tc2, tc1) == c, "scores are not symmetric");
    let elapsed = start.elapsed();
    ensure!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    Ok(())
}
