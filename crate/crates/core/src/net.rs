//! Deterministic direction nets used by sampled containment checks and
//! boundary rendering.
//!
//! In the plane the net is 720 equally spaced angles. In higher dimensions
//! it is 10^4 unit vectors drawn from a fixed-seed generator, so every run
//! sees the same net.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::linalg::{norm2, scaled};
use crate::rotation::{normal_vector, rng_from_seed};

pub const PLANE_NET: usize = 720;
pub const SPACE_NET: usize = 10_000;
const NET_SEED: u64 = 0x6e65_7400;

fn cache() -> &'static Mutex<HashMap<usize, Arc<Vec<Vec<f64>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Vec<f64>>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn build(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..PLANE_NET)
            .map(|k| {
                let a = std::f64::consts::TAU * (k as f64) / (PLANE_NET as f64);
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let mut rng = rng_from_seed(NET_SEED ^ dim as u64);
            let mut out = Vec::with_capacity(SPACE_NET);
            while out.len() < SPACE_NET {
                let v = normal_vector(dim, &mut rng);
                let n = norm2(&v);
                if n > 1e-6 {
                    out.push(scaled(&v, 1.0 / n));
                }
            }
            out
        }
    }
}

/// The full unit-direction net for the given dimension (cached).
pub fn direction_net(dim: usize) -> Arc<Vec<Vec<f64>>> {
    let mut map = cache().lock().unwrap();
    map.entry(dim).or_insert_with(|| Arc::new(build(dim))).clone()
}

/// Equally spaced plane directions, for callers that need a custom count.
pub fn plane_directions(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|k| {
            let a = std::f64::consts::TAU * (k as f64) / (count as f64);
            vec![a.cos(), a.sin()]
        })
        .collect()
}
