//! Inputs shared by the benchmarks.

use trellis::circuit::random_circuit;
use trellis::encoding::encode_v2;

/// Encoding of the five-gate circuit `j = 2 3 2`, which evaluates to 1.
pub const FIVE_GATES: &str = "baabaaabaababbbbbb";

/// Encodings of `count` seeded random circuits with `n` gates.
pub fn random_encodings(n: usize, count: u64) -> Vec<String> {
    (0..count)
        .map(|seed| encode_v2(&random_circuit(n, seed).expect("n >= 2")))
        .collect()
}
