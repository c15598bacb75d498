use rand::Rng;

use tcsim_core::clustering::{kmeans, KMeansOptions};

use super::oracles::rng;
use super::{lib, Check};
use crate::ensure;

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn check() -> Check {
    let opts = KMeansOptions::default();

    let pts = |xs: &[f64]| xs.iter().map(|&x| vec![x]).collect::<Vec<_>>();
    let run = lib(kmeans(&pts(&[0.0, 0.1, 10.0, 10.1]), &pts(&[0.0, 10.0]), &opts))?;
    ensure!(run.assignment == [0, 0, 1, 1], "1-D example split as {:?}", run.assignment);
    ensure!(
        (run.centroids[0][0] - 0.05).abs() < 1e-12 && (run.centroids[1][0] - 10.05).abs() < 1e-12,
        "1-D centroids {:?}",
        run.centroids
    );

    // seeds already at the cluster means
    let fixed = vec![vec![0.0, 0.0], vec![0.0, 2.0], vec![5.0, 5.0], vec![5.0, 7.0]];
    let seeds = vec![vec![0.0, 1.0], vec![5.0, 6.0]];
    let run = lib(kmeans(&fixed, &seeds, &opts))?;
    ensure!(run.iterations == 1, "fixed point took {} iterations", run.iterations);
    ensure!(run.centroids == seeds, "fixed point moved to {:?}", run.centroids);

    let mut r = rng(5);
    for case in 0..200 {
        let n = r.random_range(5..60);
        let dim = r.random_range(1..4);
        let points: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| r.random_range(-20.0..20.0)).collect()).collect();
        let k = r.random_range(1..=n.min(6));
        let init: Vec<Vec<f64>> = (0..k).map(|_| points[r.random_range(0..n)].clone()).collect();
        let start: f64 = points.iter().map(|p| init.iter().map(|c| sq(p, c)).fold(f64::INFINITY, f64::min)).sum();
        let run = lib(kmeans(&points, &init, &opts))?;
        let mut prev = start;
        for (it, &obj) in run.objective.iter().enumerate() {
            ensure!(
                obj <= prev * (1.0 + 1e-12) + 1e-9,
                "run {case}: objective rose from {prev} to {obj} at iteration {}",
                it + 1
            );
            prev = obj;
        }
    }
    Ok(())
}
