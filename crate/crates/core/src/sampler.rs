//! Seeded shot sampling and the `Counts` measurement record.

use std::collections::BTreeMap;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::config::TOLERANCES;
use crate::error::{Error, Result};

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 20_000;

/// Odd constant mixed into per-index seeds (2^64 / golden ratio).
const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Shot tallies keyed by bitstring. The leftmost character belongs to
/// `bit_order[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountsRecord", into = "CountsRecord")]
pub struct Counts {
    bit_order: Vec<usize>,
    table: BTreeMap<String, u64>,
    total_shots: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountsRecord {
    bit_order: Vec<usize>,
    table: BTreeMap<String, u64>,
    total_shots: u64,
}

impl TryFrom<CountsRecord> for Counts {
    type Error = Error;

    fn try_from(r: CountsRecord) -> Result<Self> {
        let counts = Counts::from_entries(r.bit_order, r.table)?;
        if counts.total_shots != r.total_shots {
            return Err(Error::parse(
                "counts.total_shots",
                format!(
                    "table sums to {} but total_shots is {}",
                    counts.total_shots, r.total_shots
                ),
            ));
        }
        Ok(counts)
    }
}

impl From<Counts> for CountsRecord {
    fn from(c: Counts) -> Self {
        CountsRecord {
            bit_order: c.bit_order,
            table: c.table,
            total_shots: c.total_shots,
        }
    }
}

impl Counts {
    /// Builds a record, checking key widths and characters. Zero tallies are dropped.
    pub fn from_entries<I>(bit_order: Vec<usize>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, u64)>,
    {
        let width = bit_order.len();
        let mut table = BTreeMap::new();
        let mut total_shots = 0u64;
        for (key, n) in entries {
            if key.len() != width || !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::Validation(format!(
                    "bitstring {key:?} does not match {width} measured bits"
                )));
            }
            if n == 0 {
                continue;
            }
            if table.insert(key.clone(), n).is_some() {
                return Err(Error::Validation(format!("duplicate bitstring {key:?}")));
            }
            total_shots += n;
        }
        Ok(Counts {
            bit_order,
            table,
            total_shots,
        })
    }

    pub fn bit_order(&self) -> &[usize] {
        &self.bit_order
    }

    pub fn table(&self) -> &BTreeMap<String, u64> {
        &self.table
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn get(&self, key: &str) -> u64 {
        self.table.get(key).copied().unwrap_or(0)
    }
}

/// Portable seeded sampler. The generator is ChaCha20 (`rand_chacha`), which
/// is value-stable across platforms and releases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededSampler {
    seed: u64,
}

impl SeededSampler {
    pub const ALGORITHM_ID: &'static str = "chacha20";

    pub fn new(seed: u64) -> Self {
        SeededSampler { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sampler for the `index`-th member of a sweep: `seed XOR (index × SEED_MIX)`.
    pub fn derived(&self, index: u64) -> Self {
        SeededSampler::new(self.seed ^ index.wrapping_mul(SEED_MIX))
    }

    /// Draws `shots` outcomes by inverting the cumulative distribution once per shot.
    ///
    /// `probs` is indexed over the measured bits with `measured[0]` most
    /// significant. Each call restarts the generator from the seed.
    pub fn sample_counts(&self, probs: &[f64], measured: &[usize], shots: u64) -> Result<Counts> {
        if shots == 0 {
            return Err(Error::Validation("shots must be at least 1".into()));
        }
        if measured.is_empty() {
            return Err(Error::Validation("no measured qubits".into()));
        }
        if probs.len() != 1usize << measured.len() {
            return Err(Error::Shape(format!(
                "{} probabilities for {} measured bits",
                probs.len(),
                measured.len()
            )));
        }
        let probs = normalized(probs)?;

        let mut cdf = Vec::with_capacity(probs.len());
        let mut running = 0.0;
        for p in &probs {
            running += p;
            cdf.push(running);
        }
        let last_live = probs
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("normalized distribution has a positive entry");

        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        let mut tallies = vec![0u64; probs.len()];
        for _ in 0..shots {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            let idx = cdf.partition_point(|&c| c <= u).min(last_live);
            tallies[idx] += 1;
        }

        let width = measured.len();
        Counts::from_entries(
            measured.to_vec(),
            tallies
                .into_iter()
                .enumerate()
                .map(|(i, n)| (format!("{i:0width$b}"), n)),
        )
    }
}

impl Default for SeededSampler {
    fn default() -> Self {
        SeededSampler::new(DEFAULT_SEED)
    }
}

fn normalized(probs: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = probs
        .iter()
        .find(|&&p| !p.is_finite() || p < -TOLERANCES.negative_probability)
    {
        return Err(Error::Validation(format!("invalid probability {bad}")));
    }
    let clamped: Vec<f64> = probs.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if (total - 1.0).abs() > TOLERANCES.renormalize {
        return Err(Error::Validation(format!("probabilities sum to {total}")));
    }
    Ok(clamped.into_iter().map(|p| p / total).collect())
}

/// Sums tallies over dropped bits. `keep` lists qubit labels from `bit_order`
/// and fixes the bit order of the result.
pub fn marginalize(counts: &Counts, keep: &[usize]) -> Result<Counts> {
    let positions = keep
        .iter()
        .map(|q| {
            counts
                .bit_order
                .iter()
                .position(|b| b == q)
                .ok_or_else(|| Error::Validation(format!("qubit {q} not in counts bit order")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table: BTreeMap<String, u64> = BTreeMap::new();
    for (key, &n) in &counts.table {
        let bytes = key.as_bytes();
        let reduced: String = positions.iter().map(|&i| bytes[i] as char).collect();
        *table.entry(reduced).or_default() += n;
    }
    Counts::from_entries(keep.to_vec(), table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_distribution() {
        let c = SeededSampler::default().sample_counts(&[1.0, 0.0], &[0], 100).unwrap();
        assert_eq!(c.get("0"), 100);
        assert_eq!(c.table().len(), 1);
        assert_eq!(c.total_shots(), 100);
    }

    #[test]
    fn never_samples_zero_probability_outcomes() {
        let c = SeededSampler::new(7)
            .sample_counts(&[0.0, 0.5, 0.0, 0.5], &[3, 1], 5000)
            .unwrap();
        assert_eq!(c.get("00") + c.get("10"), 0);
        assert_eq!(c.bit_order(), &[3, 1]);
    }

    #[test]
    fn deterministic_per_seed() {
        let s = SeededSampler::new(99);
        let a = s.sample_counts(&[0.5, 0.5], &[0], 1000).unwrap();
        let b = s.sample_counts(&[0.5, 0.5], &[0], 1000).unwrap();
        assert_eq!(a, b);
        let c = SeededSampler::new(100).sample_counts(&[0.5, 0.5], &[0], 1000).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn pinned_fair_coin_draw() {
        // Checked once against 5σ (σ ≈ 70.7) of 10000, then pinned.
        let c = SeededSampler::default().sample_counts(&[0.5, 0.5], &[0], 20_000).unwrap();
        let zeros = c.get("0");
        assert!((zeros as f64 - 10_000.0).abs() < 5.0 * (0.25f64 * 20_000.0).sqrt());
        assert_eq!(zeros, PINNED_ZEROS);
    }

    const PINNED_ZEROS: u64 = 10033;

    #[test]
    fn input_validation() {
        let s = SeededSampler::default();
        assert!(matches!(s.sample_counts(&[1.0, 0.0], &[0], 0), Err(Error::Validation(_))));
        assert!(matches!(s.sample_counts(&[1.1, -0.1], &[0], 1), Err(Error::Validation(_))));
        assert!(matches!(s.sample_counts(&[0.6, 0.6], &[0], 1), Err(Error::Validation(_))));
        assert!(matches!(s.sample_counts(&[1.0], &[0], 1), Err(Error::Shape(_))));
        assert!(matches!(s.sample_counts(&[1.0], &[], 1), Err(Error::Validation(_))));
        // tiny deviations are renormalized silently
        assert!(s.sample_counts(&[0.5 + 1e-10, 0.5 - 2e-11], &[0], 10).is_ok());
        assert!(s.sample_counts(&[1.0 + 5e-11, -5e-11], &[0], 10).is_ok());
    }

    #[test]
    fn derived_seeds_differ() {
        let base = SeededSampler::new(5);
        assert_eq!(base.derived(0), base);
        assert_ne!(base.derived(1), base.derived(2));
        assert_eq!(base.derived(1).seed(), 5 ^ SEED_MIX);
    }

    #[test]
    fn marginalize_sums_dropped_bits() {
        let c = Counts::from_entries(
            vec![4, 7],
            [("00", 5), ("01", 3), ("10", 2), ("11", 0)].map(|(k, n)| (k.to_string(), n)),
        )
        .unwrap();
        let m = marginalize(&c, &[4]).unwrap();
        assert_eq!(m.get("0"), 8);
        assert_eq!(m.get("1"), 2);
        assert_eq!(m.total_shots(), 10);
        assert_eq!(marginalize(&c, &[4, 7]).unwrap(), c);
        let swapped = marginalize(&c, &[7, 4]).unwrap();
        assert_eq!(swapped.get("10"), 3);
        assert!(matches!(marginalize(&c, &[5]), Err(Error::Validation(_))));
    }

    #[test]
    fn counts_schema_is_strict() {
        let ok = r#"{"bit_order":[0],"table":{"0":3,"1":1},"total_shots":4}"#;
        let c: Counts = serde_json::from_str(ok).unwrap();
        assert_eq!(c.total_shots(), 4);
        let bad_total = r#"{"bit_order":[0],"table":{"0":3},"total_shots":4}"#;
        assert!(serde_json::from_str::<Counts>(bad_total).is_err());
        let extra = r#"{"bit_order":[0],"table":{},"total_shots":0,"x":1}"#;
        assert!(serde_json::from_str::<Counts>(extra).is_err());
        let wide = r#"{"bit_order":[0],"table":{"01":1},"total_shots":1}"#;
        assert!(serde_json::from_str::<Counts>(wide).is_err());
    }
}
