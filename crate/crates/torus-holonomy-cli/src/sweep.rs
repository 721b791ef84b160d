//! Parallel evaluation of Σ sweeps.
//!
//! The grid is split into contiguous chunks, each extended by one row of
//! margin so the divergence-marker logic sees the same neighbor spacing
//! it would serially; results are therefore byte-identical for every
//! `--jobs` value.

use torus_holonomy::transport::{sigma_sweep, SweepRow};

/// Inclusive linspace with `samples >= 2` points.
pub fn linspace(min: f64, max: f64, samples: usize) -> Vec<f64> {
    assert!(samples >= 2);
    let step = (max - min) / (samples - 1) as f64;
    (0..samples).map(|k| min + k as f64 * step).collect()
}

/// Evaluate the sweep on up to `jobs` threads.
pub fn sweep_parallel(n: f64, a: f64, grid: &[f64], jobs: usize) -> Vec<SweepRow> {
    let jobs = jobs.max(1).min(grid.len().max(1));
    if jobs == 1 || grid.len() < 4 {
        return sigma_sweep(n, a, grid);
    }

    let chunk_len = grid.len().div_ceil(jobs);
    let mut pieces: Vec<Vec<SweepRow>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        let mut start = 0;
        while start < grid.len() {
            let end = (start + chunk_len).min(grid.len());
            // one-row margins keep neighbor spacing identical to a
            // serial evaluation
            let lo = start.saturating_sub(1);
            let hi = (end + 1).min(grid.len());
            let slice = &grid[lo..hi];
            let skip_front = start - lo;
            let keep = end - start;
            handles.push(scope.spawn(move || {
                sigma_sweep(n, a, slice)
                    .into_iter()
                    .skip(skip_front)
                    .take(keep)
                    .collect::<Vec<_>>()
            }));
            start = end;
        }
        for h in handles {
            pieces.push(h.join().expect("sweep worker panicked"));
        }
    });
    pieces.concat()
}
