//! Seeded, deterministic, parallel census over random nondegenerate
//! quadrics.
//!
//! Each sample derives its own seed from the census seed and its index, so
//! the tally is a pure function of (n, k, samples, seed) and the worker
//! count only affects wall-clock time. Samples are computed in parallel and
//! merged by index.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crquad::quadric::random_nondegenerate;
use crquad::solver::full_algebra;
use crquad::{Error, Result};

use crate::reports::{CensusReport, CensusTally, ComponentEntry, ExceptionalHit, SampleRow};

/// SplitMix64 finalizer; the per-sample seed is `seed ^ splitmix64(index)`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sample_seed(seed: u64, index: usize) -> u64 {
    seed ^ splitmix64(index as u64)
}

pub struct CensusParams {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub jobs: usize,
    pub save_dir: std::path::PathBuf,
}

struct SampleOutcome {
    index: usize,
    seed: u64,
    components: Vec<(i32, usize)>,
    g_plus_length: u32,
}

fn run_sample(n: usize, k: usize, index: usize, seed: u64) -> Result<SampleOutcome> {
    let sseed = sample_seed(seed, index);
    let q = random_nondegenerate(n, k, sseed)?;
    let components = full_algebra(&q)?;
    let g_plus_length = components.iter().filter(|&&(m, d)| m >= 1 && d > 0).count() as u32;
    Ok(SampleOutcome { index, seed: sseed, components, g_plus_length })
}

/// Run the census. Returns the report plus whether a theorem-violating
/// sample was found (an exceptional quadric at codimension <= 3), which the
/// CLI turns into exit code 2.
pub fn run_census(params: &CensusParams) -> Result<(CensusReport, bool)> {
    if params.n < 1 || params.k < 1 || params.k > params.n * params.n {
        return Err(Error::InvalidInput(format!(
            "census type ({}, {}) out of range 1 <= k <= n^2",
            params.n, params.k
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?;
    let outcomes: Result<Vec<SampleOutcome>> = pool.install(|| {
        (0..params.samples)
            .into_par_iter()
            .map(|idx| run_sample(params.n, params.k, idx, params.seed))
            .collect()
    });
    let outcomes = outcomes?;

    let mut by_len: BTreeMap<u32, usize> = BTreeMap::new();
    let mut exceptional = Vec::new();
    let mut rows = Vec::with_capacity(outcomes.len());
    for o in &outcomes {
        *by_len.entry(o.g_plus_length).or_insert(0) += 1;
        if o.g_plus_length >= 3 {
            let file = params
                .save_dir
                .join(format!("exceptional-n{}k{}-seed{}.json", params.n, params.k, o.seed));
            let q = random_nondegenerate(params.n, params.k, o.seed)?;
            q.save(&file)?;
            exceptional.push(ExceptionalHit {
                index: o.index,
                seed: o.seed,
                file: file.display().to_string(),
            });
        }
        rows.push(SampleRow {
            index: o.index,
            seed: o.seed,
            g_plus_length: o.g_plus_length,
            components: o.components.iter().map(|&(m, dim)| ComponentEntry { m, dim }).collect(),
        });
    }
    let rigid = by_len.get(&0).copied().unwrap_or(0);
    let violation = params.k <= 3 && !exceptional.is_empty();
    let report = CensusReport {
        command: "census".into(),
        n: params.n,
        k: params.k,
        samples: params.samples,
        seed: params.seed,
        degree_bound: crate::reports::degree_bound(params.n, params.k),
        tally: CensusTally { samples: params.samples, rigid, by_g_plus_length: by_len, exceptional },
        sample_rows: rows,
    };
    Ok((report, violation))
}
