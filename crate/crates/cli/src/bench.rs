//! Latency tables. Queries are timed in batches after a warm-up pass and
//! reported per query; a single O(1) query is too short for the clock.

use std::io::Write;
use std::time::Instant;

use anyhow::{anyhow, bail};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wa_locus::oracle::naive_locus;
use wa_locus::LocusIndex;

use crate::Profile;

const BATCH: usize = 64;

pub struct Config {
    pub queries: usize,
    pub profile: Profile,
    pub lengths: Vec<String>,
    pub naive_queries: usize,
    pub seed: u64,
    pub threads: usize,
}

struct Bucket {
    label: String,
    queries: Vec<(usize, usize)>,
}

/// `12`, `n` or `n/4`, clipped to `1..=n`.
pub fn parse_length(spec: &str, n: usize) -> anyhow::Result<usize> {
    let spec = spec.trim();
    let value = match spec.strip_prefix('n') {
        Some("") => n,
        Some(rest) => {
            let k: usize = rest
                .strip_prefix('/')
                .ok_or_else(|| anyhow!("bad length {spec:?}"))?
                .parse()?;
            if k == 0 {
                bail!("bad length {spec:?}");
            }
            n / k
        }
        None => spec.parse()?,
    };
    Ok(value.clamp(1, n))
}

fn buckets(n: usize, cfg: &Config, rng: &mut ChaCha8Rng) -> anyhow::Result<Vec<Bucket>> {
    match cfg.profile {
        Profile::Fixed => cfg
            .lengths
            .iter()
            .map(|spec| {
                let ell = parse_length(spec, n)?;
                let queries = (0..cfg.queries)
                    .map(|_| {
                        let p = rng.gen_range(0..=n - ell);
                        (p, p + ell - 1)
                    })
                    .collect();
                Ok(Bucket {
                    label: ell.to_string(),
                    queries,
                })
            })
            .collect(),
        Profile::Uniform => {
            let mut by_log: Vec<Vec<(usize, usize)>> = vec![Vec::new(); usize::BITS as usize];
            for _ in 0..cfg.queries {
                let p = rng.gen_range(0..n);
                let q = rng.gen_range(p..n);
                by_log[(q - p + 1).ilog2() as usize].push((p, q));
            }
            Ok(by_log
                .into_iter()
                .enumerate()
                .filter(|(_, qs)| !qs.is_empty())
                .map(|(k, queries)| Bucket {
                    label: format!("2^{k}"),
                    queries,
                })
                .collect())
        }
    }
}

/// Amortized nanoseconds per query, one figure per batch.
fn time_batches(index: &LocusIndex, queries: &[(usize, usize)], threads: usize) -> Vec<f64> {
    let mut sink = 0u64;
    for &(p, q) in queries.iter().take(4 * BATCH) {
        sink = sink.wrapping_add(index.locus_with(p, q, &mut ()) as u64);
    }
    std::hint::black_box(sink);
    let batches: Vec<&[(usize, usize)]> = queries.chunks(BATCH).collect();
    let share = batches.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = batches
            .chunks(share)
            .map(|mine| {
                scope.spawn(move || {
                    mine.iter()
                        .map(|batch| {
                            let t = Instant::now();
                            let mut sink = 0u64;
                            for &(p, q) in *batch {
                                sink = sink.wrapping_add(index.locus_with(p, q, &mut ()) as u64);
                            }
                            std::hint::black_box(sink);
                            t.elapsed().as_nanos() as f64 / batch.len() as f64
                        })
                        .collect::<Vec<f64>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("bench thread"))
            .collect()
    })
}

fn naive_mean(index: &LocusIndex, queries: &[(usize, usize)]) -> f64 {
    if queries.is_empty() {
        return f64::NAN;
    }
    let s = index.text().as_bytes();
    let t = Instant::now();
    let mut sink = 0u64;
    for &(p, q) in queries {
        sink = sink.wrapping_add(naive_locus(s, index.tree(), p, q) as u64);
    }
    std::hint::black_box(sink);
    t.elapsed().as_nanos() as f64 / queries.len() as f64
}

fn percentile(sorted: &[f64], pct: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((pct / 100.0) * (sorted.len() - 1) as f64).round() as usize;
    sorted[rank]
}

pub fn run<W: Write>(index: &LocusIndex, cfg: &Config, out: W) -> anyhow::Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record([
        "bucket",
        "queries",
        "mean_ns",
        "median_ns",
        "p99_ns",
        "naive_queries",
        "naive_mean_ns",
    ])?;
    if cfg.queries > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for bucket in buckets(index.len(), cfg, &mut rng)? {
            let mut per_batch = time_batches(index, &bucket.queries, cfg.threads);
            per_batch.sort_by(f64::total_cmp);
            let mean = per_batch.iter().sum::<f64>() / per_batch.len() as f64;
            let naive = &bucket.queries[..cfg.naive_queries.min(bucket.queries.len())];
            csv.write_record([
                bucket.label,
                bucket.queries.len().to_string(),
                format!("{mean:.1}"),
                format!("{:.1}", percentile(&per_batch, 50.0)),
                format!("{:.1}", percentile(&per_batch, 99.0)),
                naive.len().to_string(),
                format!("{:.1}", naive_mean(index, naive)),
            ])?;
        }
    }
    csv.flush()?;
    Ok(())
}
