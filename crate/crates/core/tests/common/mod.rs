#![allow(dead_code)]

use swrbd_core::presets::{ChainDocument, ConfigDocument};
use swrbd_core::ClassVector;

pub fn cv(x: &[i64]) -> ClassVector {
    ClassVector::from_i64s(x)
}

/// `(-2, -2, 1, …, 1)`: the canonical class of `S²×S² # (n-2) m̄CP²`.
pub fn canonical(n: usize) -> ClassVector {
    let mut c = vec![-2, -2];
    c.resize(n, 1);
    cv(&c)
}

pub fn hyperbolic_gram(n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    g[0][1] = 1;
    g[1][0] = 1;
    for (i, row) in g.iter_mut().enumerate().skip(2) {
        row[i] = -1;
    }
    g
}

/// `vᵀ G w` with plain `i64` loops, independent of the library's pairing.
pub fn direct_pair(g: &[Vec<i64>], v: &[i64], w: &[i64]) -> i64 {
    let n = v.len();
    let mut acc = 0;
    for i in 0..n {
        for j in 0..n {
            acc += v[i] * g[i][j] * w[j];
        }
    }
    acc
}

/// Rank-4 instance on `S²×S² # 2 m̄CP²` with a `p = 0` chain
/// `R0 = A - B - E1 - E2` (square -4) and tuples `(±2)`.
pub fn synthetic_document() -> ConfigDocument {
    ConfigDocument {
        label: "synthetic-rank4".into(),
        rank: 4,
        gram: hyperbolic_gram(4),
        chain: ChainDocument {
            p: 0,
            classes: vec![vec![1, -1, -1, -1]],
            extension_tuples: vec![vec![2], vec![-2]],
        },
        spheres: vec![vec![0, 0, 1, -1], vec![1, 0, 2, -1], vec![0, 1, -1, 0]],
        h: vec![2, 1, 1, 0],
        h_prime: vec![1, 1, 0, 0],
    }
}
