//! Benchmark instances and the timed comparison of both detectors.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::buckets::Bucket;
use crate::candidates::max_candidate;
use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::factor::{Factor, RandomVariable};
use crate::naive::naive_max_commutative;
use crate::potential::Potential;
use crate::search::decor_with_deadline;

pub const CSV_HEADER: &str = "algorithm,n,k,range,seed,rep,status,elapsed_us,result_size";

/// Builds a factor over `n` arguments whose largest commutative subset is
/// exactly the first `k` arguments (none at all for `k = 0`).
///
/// Every (bucket over the first `k` arguments, values of the others) class
/// gets its own distinct integer potential, shuffled by `seed`.
pub fn generate_factor(n: usize, k: usize, range_size: usize, seed: u64) -> Result<Factor> {
    if n == 0 {
        return Err(Error::InvalidConfig("a factor needs at least one argument".into()));
    }
    if k == 1 || k > n {
        return Err(Error::InvalidK(format!("k = {k} with n = {n}")));
    }
    if range_size < 2 {
        return Err(Error::InvalidConfig(format!("range size {range_size} is below 2")));
    }
    let labels: Vec<String> = if range_size == 2 {
        vec!["true".into(), "false".into()]
    } else {
        (0..range_size).map(|v| format!("v{v}")).collect()
    };
    let args: Vec<RandomVariable> = (1..=n)
        .map(|i| RandomVariable::new(format!("R{i}"), labels.clone()))
        .collect::<Result<_>>()?;
    let rows = range_size
        .checked_pow(n as u32)
        .ok_or_else(|| Error::InvalidConfig(format!("{range_size}^{n} rows do not fit in memory")))?;

    let counted: Vec<usize> = (0..k).collect();
    let mut class_ids: HashMap<(Bucket, usize), usize> = HashMap::new();
    let mut values = vec![0usize; n];
    let classes: Vec<usize> = (0..rows)
        .map(|row| {
            let mut rest = row;
            for slot in values.iter_mut().rev() {
                *slot = rest % range_size;
                rest /= range_size;
            }
            let bucket = Bucket::of_values(&values, &counted, range_size);
            let others = values[k..].iter().fold(0usize, |acc, &v| acc * range_size + v);
            let next = class_ids.len();
            *class_ids.entry((bucket, others)).or_insert(next)
        })
        .collect();

    let mut potentials: Vec<u64> = (1..=class_ids.len() as u64).collect();
    potentials.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let table = classes
        .iter()
        .map(|&c| Potential::from_u64(potentials[c]))
        .collect::<Result<Vec<_>>>()?;
    Factor::new(format!("gen_n{n}_k{k}"), args, table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Decor,
    Naive,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Decor, Algorithm::Naive];
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Decor => "decor",
            Algorithm::Naive => "naive",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decor" => Ok(Algorithm::Decor),
            "naive" => Ok(Algorithm::Naive),
            other => Err(Error::InvalidConfig(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Number of commutative arguments, possibly relative to `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSpec {
    Fixed(usize),
    Half,
    Log2,
    NMinusOne,
    N,
}

impl KSpec {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            KSpec::Fixed(k) => k,
            KSpec::Half => n / 2,
            KSpec::Log2 => n.checked_ilog2().unwrap_or(0) as usize,
            KSpec::NMinusOne => n.saturating_sub(1),
            KSpec::N => n,
        }
    }
}

impl FromStr for KSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "half" => Ok(KSpec::Half),
            "log2" => Ok(KSpec::Log2),
            "n-1" => Ok(KSpec::NMinusOne),
            "n" => Ok(KSpec::N),
            other => other
                .parse()
                .map(KSpec::Fixed)
                .map_err(|_| Error::InvalidK(format!("unknown k token `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub n_list: Vec<usize>,
    pub k_spec: Vec<KSpec>,
    pub range_size: usize,
    pub reps: usize,
    pub timeout_ms: u64,
    pub seed: u64,
    pub parallel: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_list: vec![2, 4, 6, 8, 10, 12, 14, 16],
            k_spec: vec![
                KSpec::Fixed(0),
                KSpec::Fixed(2),
                KSpec::Half,
                KSpec::NMinusOne,
                KSpec::N,
            ],
            range_size: 2,
            reps: 1,
            timeout_ms: 300_000,
            seed: 42,
            parallel: 1,
        }
    }
}

impl BenchConfig {
    /// `(n, k)` cells in configuration order. Tokens resolving to `k = 1` or
    /// `k > n` are skipped and repeated values of `k` for one `n` collapse.
    pub fn cells(&self) -> Result<Vec<(usize, usize)>> {
        if self.range_size < 2 {
            return Err(Error::InvalidConfig("range size must be at least 2".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        let mut cells = Vec::new();
        for &n in &self.n_list {
            if n < 2 {
                return Err(Error::InvalidConfig(format!("n = {n} is below 2")));
            }
            let mut seen = Vec::new();
            for spec in &self.k_spec {
                let k = spec.resolve(n);
                if k == 1 || k > n || seen.contains(&k) {
                    continue;
                }
                seen.push(k);
                cells.push((n, k));
            }
        }
        Ok(cells)
    }
}

/// Seed of one generated instance, derived from the suite seed and the cell.
pub fn instance_seed(seed: u64, n: usize, k: usize, rep: usize) -> u64 {
    // splitmix64 over the packed cell coordinates
    let mut z = seed ^ ((n as u64) << 40 | (k as u64) << 20 | rep as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Timeout,
}

/// Outcome of one timed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceRun {
    pub status: Status,
    pub elapsed: Duration,
    /// Size of the largest subset found; 0 for none or timeout.
    pub result_size: usize,
}

/// Times one detector on one factor under a cooperative deadline.
pub fn run_instance(algorithm: Algorithm, factor: &Factor, timeout_ms: u64) -> InstanceRun {
    let start = Instant::now();
    let deadline = Deadline::at(start + Duration::from_millis(timeout_ms));
    let found = match algorithm {
        Algorithm::Decor => decor_with_deadline(factor, deadline).map(|out| max_candidate(&out.candidates)),
        Algorithm::Naive => naive_max_commutative(factor, deadline).map(|out| out.best),
    };
    let elapsed = start.elapsed();
    match found {
        Ok(best) => InstanceRun {
            status: Status::Ok,
            elapsed,
            result_size: best.map_or(0, |s| s.len()),
        },
        Err(_) => InstanceRun {
            status: Status::Timeout,
            elapsed,
            result_size: 0,
        },
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Measurement {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub range: usize,
    pub seed: u64,
    pub rep: usize,
    pub status: Status,
    pub elapsed_us: u64,
    pub result_size: usize,
}

/// Runs every (cell, rep, algorithm) combination. Rows come back in that
/// nesting order regardless of parallelism.
pub fn bench_suite(config: &BenchConfig) -> Result<Vec<Measurement>> {
    let cells = config.cells()?;
    let tasks: Vec<(usize, usize, usize)> = cells
        .iter()
        .flat_map(|&(n, k)| (0..config.reps).map(move |rep| (n, k, rep)))
        .collect();
    let run_task = |&(n, k, rep): &(usize, usize, usize)| -> Result<Vec<Measurement>> {
        let seed = instance_seed(config.seed, n, k, rep);
        let factor = generate_factor(n, k, config.range_size, seed)?;
        Ok(Algorithm::ALL
            .iter()
            .map(|&algorithm| {
                let run = run_instance(algorithm, &factor, config.timeout_ms);
                Measurement {
                    algorithm,
                    n,
                    k,
                    range: config.range_size,
                    seed,
                    rep,
                    status: run.status,
                    elapsed_us: run.elapsed.as_micros() as u64,
                    result_size: run.result_size,
                }
            })
            .collect())
    };
    let per_task: Vec<Result<Vec<Measurement>>> = if config.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallel)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| tasks.par_iter().map(run_task).collect())
    } else {
        tasks.iter().map(run_task).collect()
    };
    let mut out = Vec::with_capacity(tasks.len() * Algorithm::ALL.len());
    for rows in per_task {
        out.extend(rows?);
    }
    Ok(out)
}

pub fn write_csv<W: Write>(measurements: &[Measurement], writer: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    for m in measurements {
        csv.serialize(m)?;
    }
    csv.flush()?;
    Ok(())
}

/// Per (algorithm, n, k) aggregate over completed runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub runs: usize,
    pub timeouts: usize,
    pub mean_us: Option<f64>,
    pub median_us: Option<f64>,
}

pub fn summarize(measurements: &[Measurement]) -> Vec<Summary> {
    let mut order: Vec<(Algorithm, usize, usize)> = Vec::new();
    let mut by_cell: HashMap<(Algorithm, usize, usize), Vec<&Measurement>> = HashMap::new();
    for m in measurements {
        let key = (m.algorithm, m.n, m.k);
        if !by_cell.contains_key(&key) {
            order.push(key);
        }
        by_cell.entry(key).or_default().push(m);
    }
    order
        .into_iter()
        .map(|key| {
            let rows = &by_cell[&key];
            let mut ok: Vec<u64> = rows
                .iter()
                .filter(|m| m.status == Status::Ok)
                .map(|m| m.elapsed_us)
                .collect();
            ok.sort_unstable();
            Summary {
                algorithm: key.0,
                n: key.1,
                k: key.2,
                runs: rows.len(),
                timeouts: rows.len() - ok.len(),
                mean_us: (!ok.is_empty()).then(|| ok.iter().sum::<u64>() as f64 / ok.len() as f64),
                median_us: median(&ok),
            }
        })
        .collect()
}

/// Median of sorted values.
pub fn median(sorted: &[u64]) -> Option<f64> {
    let len = sorted.len();
    match len {
        0 => None,
        _ if len % 2 == 1 => Some(sorted[len / 2] as f64),
        _ => Some((sorted[len / 2 - 1] + sorted[len / 2]) as f64 / 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buckets::bucket_partition;
    use crate::candidates::CandidateSet;
    use crate::search::decor;

    #[test]
    fn generated_last_two_symmetric_shape() {
        let f = generate_factor(3, 2, 2, 7).unwrap();
        assert_eq!(f.len(), 8);
        // Six classes, six distinct values, commutative in the first two arguments.
        assert_eq!(f.distinct_potentials(), 6);
        assert_eq!(
            max_candidate(&decor(&f).candidates),
            Some(CandidateSet::from_positions([0, 1]))
        );
    }

    #[test]
    fn k_zero_has_unique_potentials() {
        let f = generate_factor(4, 0, 2, 1).unwrap();
        assert_eq!(f.distinct_potentials(), 16);
        assert!(decor(&f).candidates.is_empty());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(matches!(generate_factor(4, 1, 2, 0), Err(Error::InvalidK(_))));
        assert!(matches!(generate_factor(4, 5, 2, 0), Err(Error::InvalidK(_))));
        assert!(generate_factor(4, 2, 1, 0).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(
            generate_factor(6, 3, 2, 9).unwrap(),
            generate_factor(6, 3, 2, 9).unwrap()
        );
        assert_ne!(
            generate_factor(6, 3, 2, 9).unwrap().table(),
            generate_factor(6, 3, 2, 10).unwrap().table()
        );
    }

    #[test]
    fn full_bucket_classes_for_k_equal_n() {
        let f = generate_factor(5, 5, 2, 3).unwrap();
        let classes = bucket_partition(&f, &[0, 1, 2, 3, 4]).unwrap();
        assert!(classes
            .iter()
            .all(|c| c.potentials(&f).windows(2).all(|w| w[0] == w[1])));
    }

    #[test]
    fn k_tokens_resolve() {
        let parse = |s: &str| s.parse::<KSpec>().unwrap();
        assert_eq!(parse("half").resolve(9), 4);
        assert_eq!(parse("log2").resolve(16), 4);
        assert_eq!(parse("log2").resolve(10), 3);
        assert_eq!(parse("n-1").resolve(6), 5);
        assert_eq!(parse("n").resolve(6), 6);
        assert_eq!(parse("2").resolve(6), 2);
        assert!("third".parse::<KSpec>().is_err());
    }

    #[test]
    fn cells_skip_invalid_and_repeated_k() {
        let config = BenchConfig {
            n_list: vec![2, 4],
            k_spec: ["0", "2", "half", "log2", "n-1", "n"]
                .iter()
                .map(|s| s.parse().unwrap())
                .collect(),
            ..BenchConfig::default()
        };
        assert_eq!(
            config.cells().unwrap(),
            vec![(2, 0), (2, 2), (4, 0), (4, 2), (4, 3), (4, 4)]
        );
    }

    #[test]
    fn suite_row_count_and_csv() {
        let config = BenchConfig {
            n_list: vec![4],
            k_spec: vec![KSpec::Fixed(0), KSpec::Fixed(2)],
            reps: 1,
            timeout_ms: 10_000,
            ..BenchConfig::default()
        };
        let rows = bench_suite(&config).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].algorithm, Algorithm::Decor);
        assert_eq!(rows[1].algorithm, Algorithm::Naive);
        assert_eq!(rows[2].result_size, 2);
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(1).unwrap().starts_with("decor,4,0,2,"));
    }

    #[test]
    fn timeout_is_reported() {
        let f = generate_factor(10, 4, 2, 1).unwrap();
        let run = run_instance(Algorithm::Naive, &f, 0);
        assert_eq!(run.status, Status::Timeout);
        assert_eq!(run.result_size, 0);
    }

    #[test]
    fn summary_median_and_mean() {
        assert_eq!(median(&[1, 3, 10]), Some(3.0));
        assert_eq!(median(&[1, 3]), Some(2.0));
        assert_eq!(median(&[]), None);
        let m = |status, us| Measurement {
            algorithm: Algorithm::Decor,
            n: 4,
            k: 2,
            range: 2,
            seed: 0,
            rep: 0,
            status,
            elapsed_us: us,
            result_size: 2,
        };
        let s = summarize(&[m(Status::Ok, 10), m(Status::Ok, 30), m(Status::Timeout, 99)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].timeouts, 1);
        assert_eq!(s[0].mean_us, Some(20.0));
        assert_eq!(s[0].median_us, Some(20.0));
    }
}
