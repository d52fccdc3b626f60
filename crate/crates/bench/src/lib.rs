//! Shared fixtures for the benchmark harness.

use mwpb_core::instance::{
    gen_random, gen_random_graph, gen_random_integer, reduce_matching, Instance, IntegerInstance,
};

/// Dense random instance over GF(`p`) with weights in `[0, 50]`.
pub fn dense(seed: u64, m: usize, n: usize, p: u64) -> Instance {
    gen_random(seed, m, n, p, 50).expect("valid shape")
}

/// Matching reduction of the first random graph on `vertices` vertices, at
/// or after `seed`, that reduces to a full-rank instance.
pub fn matching(seed: u64, vertices: usize) -> Instance {
    (seed..)
        .find_map(|s| reduce_matching(&gen_random_graph(s, vertices, 0.5, 50)).ok())
        .expect("some graph covers every vertex")
}

/// Integer instance with entries in `[-5, 5]` and weights in `[0, 20]`.
pub fn integer(seed: u64, m: usize, n: usize) -> IntegerInstance {
    gen_random_integer(seed, m, n, 5, 20)
}
