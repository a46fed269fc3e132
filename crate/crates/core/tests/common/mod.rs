//! Shared fixtures for the integration tests: seeded random parameter
//! draws, brute-force oracles and a corpus of networks with defects.
#![allow(dead_code)]

use std::f64::consts::PI;

use periodic_steiner::families::{
    construct_hexagonal, construct_srs, construct_ths, Chirality, HexParams, SrsParams, ThsParams,
};
use periodic_steiner::{Network64, PeriodicNetwork, QuotientEdge, QuotientGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edge lengths spread over two orders of magnitude.
pub fn lengths<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    std::array::from_fn(|_| 10f64.powf(rng.gen_range(-1.0..1.0)))
}

pub fn alpha(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.05..PI - 0.05)
}

pub fn chirality(rng: &mut ChaCha8Rng) -> Chirality {
    if rng.gen_bool(0.5) {
        Chirality::Positive
    } else {
        Chirality::Negative
    }
}

pub fn random_hex(rng: &mut ChaCha8Rng) -> Network64 {
    let [a, b, c] = lengths::<3>(rng);
    construct_hexagonal(&HexParams::new(a, b, c).unwrap()).unwrap()
}

pub fn random_ths(rng: &mut ChaCha8Rng) -> Network64 {
    let x = lengths::<6>(rng);
    let a = alpha(rng);
    construct_ths(&ThsParams::new(x, a).unwrap()).unwrap()
}

pub fn random_srs(rng: &mut ChaCha8Rng) -> Network64 {
    let x = lengths::<6>(rng);
    let c = chirality(rng);
    construct_srs(&SrsParams::new(x, c).unwrap()).unwrap()
}

/// `P_k` as an explicit sum over all k-subsets.
pub fn subset_sum_oracle(k: usize, x: &[f64]) -> f64 {
    let m = x.len();
    (0u32..1 << m)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..m).filter(|i| mask & (1 << i) != 0).map(|i| x[i]).product::<f64>())
        .sum()
}

fn unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if r > 0.2 && r <= 1.0 {
            return v.iter().map(|a| a / r).collect();
        }
    }
}

fn rebuild(net: &Network64, edges: Vec<QuotientEdge>, positions: Vec<Vec<f64>>) -> Option<Network64> {
    let graph = QuotientGraph::new(positions.len(), net.dimension(), edges).ok()?;
    PeriodicNetwork::new(graph, positions, net.lattice().clone()).ok()
}

/// Attaches a pendant edge at a random vertex.
pub fn add_leaf(net: &Network64, rng: &mut ChaCha8Rng) -> Option<Network64> {
    let v = rng.gen_range(0..net.graph().vertex_count());
    let n = net.dimension();
    let dir = unit(rng, n);
    let len = rng.gen_range(0.1..0.5);
    let mut positions = net.positions().to_vec();
    positions.push(net.positions()[v].iter().zip(&dir).map(|(p, d)| p + len * d).collect());
    let mut edges = net.graph().edges().to_vec();
    edges.push(QuotientEdge::new(v, positions.len() - 1, vec![0; n]));
    rebuild(net, edges, positions)
}

/// Subdivides a random edge at a point pushed off the segment.
pub fn add_bend(net: &Network64, rng: &mut ChaCha8Rng) -> Option<Network64> {
    let k = rng.gen_range(0..net.graph().edge_count());
    let e = net.graph().edges()[k].clone();
    let n = net.dimension();
    let start = &net.positions()[e.tail];
    let vector = net.edge_vector(k);
    let t = rng.gen_range(0.3..0.7);
    let offset = unit(rng, n);
    let bend = rng.gen_range(0.05..0.3) * net.edge_length(k);
    let point: Vec<f64> = (0..n).map(|i| start[i] + t * vector[i] + bend * offset[i]).collect();
    let mut positions = net.positions().to_vec();
    positions.push(point);
    let m = positions.len() - 1;
    let mut edges: Vec<QuotientEdge> = net.graph().edges().to_vec();
    edges[k] = QuotientEdge::new(e.tail, m, vec![0; n]);
    edges.push(QuotientEdge::new(m, e.head, e.shift.clone()));
    rebuild(net, edges, positions)
}

/// Adds an edge between two random vertices (a loop when they coincide),
/// creating vertices of degree 4 or more.
pub fn add_crossing(net: &Network64, rng: &mut ChaCha8Rng) -> Option<Network64> {
    let count = net.graph().vertex_count();
    let n = net.dimension();
    let u = rng.gen_range(0..count);
    let w = rng.gen_range(0..count);
    let shift: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
    if u == w && shift.iter().all(|&s| s == 0) {
        return None;
    }
    let mut edges = net.graph().edges().to_vec();
    edges.push(QuotientEdge::new(u, w, shift));
    rebuild(net, edges, net.positions().to_vec())
}

/// Adds a second edge parallel in the quotient to an existing one, with a
/// different shift.
pub fn add_double_edge(net: &Network64, rng: &mut ChaCha8Rng) -> Option<Network64> {
    let k = rng.gen_range(0..net.graph().edge_count());
    let e = &net.graph().edges()[k];
    let axis = rng.gen_range(0..net.dimension());
    let mut shift = e.shift.clone();
    shift[axis] += if rng.gen_bool(0.5) { 1 } else { -1 };
    if e.tail == e.head && shift.iter().all(|&s| s == 0) {
        return None;
    }
    let mut edges = net.graph().edges().to_vec();
    edges.push(QuotientEdge::new(e.tail, e.head, shift));
    rebuild(net, edges, net.positions().to_vec())
}

/// `count` random networks built from the three families, each carrying
/// between one and three random defects.
pub fn defect_corpus(count: usize, seed: u64) -> Vec<Network64> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut net = match out.len() % 3 {
            0 => random_srs(&mut rng),
            1 => random_ths(&mut rng),
            _ => random_hex(&mut rng),
        };
        let defects = rng.gen_range(1..=3);
        let mut applied = 0;
        for _ in 0..20 {
            if applied == defects {
                break;
            }
            let next = match rng.gen_range(0..4) {
                0 => add_leaf(&net, &mut rng),
                1 => add_bend(&net, &mut rng),
                2 => add_crossing(&net, &mut rng),
                _ => add_double_edge(&net, &mut rng),
            };
            if let Some(n) = next {
                net = n;
                applied += 1;
            }
        }
        if applied == defects {
            out.push(net);
        }
    }
    out
}
