//! The two-setting, two-outcome CHSH game.
//!
//! Referees draw settings `a, b ∈ {0, 1}` uniformly; the players win when
//! their outputs satisfy `x ⊕ y = a·b`. Correlators use
//! `E(a,b) = Σ (-1)^(x⊕y) p(x,y|a,b)` and the CHSH functional is
//! `S = E(0,0) + E(0,1) + E(1,0) - E(1,1)`, so `S = 8w - 4`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{joint_outcome_distribution, Direction};
use crate::raffle::Spin;

const SUM_TOL: f64 = 1e-12;

/// Conditional distribution `p[a][b][x][y] = p(x, y | a, b)`.
///
/// JSON: `{"p": {"ab=00": [[p00, p01], [p10, p11]], ...}}` with rows indexed by `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Behavior {
    p: [[[[f64; 2]; 2]; 2]; 2],
}

#[derive(Serialize, Deserialize)]
struct BehaviorJson {
    p: BTreeMap<String, [[f64; 2]; 2]>,
}

impl Serialize for Behavior {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut p = BTreeMap::new();
        for a in 0..2 {
            for b in 0..2 {
                p.insert(format!("ab={a}{b}"), self.p[a][b]);
            }
        }
        BehaviorJson { p }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Behavior {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = BehaviorJson::deserialize(de)?;
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let key = format!("ab={a}{b}");
                p[a][b] =
                    *j.p.get(&key)
                        .ok_or_else(|| D::Error::custom(format!("missing {key}")))?;
            }
        }
        if j.p.len() != 4 {
            return Err(D::Error::custom(
                "behavior must have exactly four setting pairs",
            ));
        }
        Behavior::new(p).map_err(D::Error::custom)
    }
}

impl Behavior {
    /// Validates nonnegativity and per-setting normalization.
    pub fn new(p: [[[[f64; 2]; 2]; 2]; 2]) -> Result<Self> {
        for a in 0..2 {
            for b in 0..2 {
                let block = p[a][b];
                if block.iter().flatten().any(|&v| v < 0.0 || !v.is_finite()) {
                    return Err(Error::domain(format!(
                        "negative or non-finite probability for ab={a}{b}"
                    )));
                }
                let sum: f64 = block.iter().flatten().sum();
                if (sum - 1.0).abs() > SUM_TOL {
                    return Err(Error::domain(format!(
                        "probabilities for ab={a}{b} sum to {sum}"
                    )));
                }
            }
        }
        Ok(Behavior { p })
    }

    pub fn prob(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.p[a][b][x][y]
    }

    pub fn table(&self) -> &[[[[f64; 2]; 2]; 2]; 2] {
        &self.p
    }

    /// `E(a, b) = P(x = y) - P(x ≠ y)`.
    pub fn correlator(&self, a: usize, b: usize) -> f64 {
        let t = self.p[a][b];
        t[0][0] + t[1][1] - t[0][1] - t[1][0]
    }

    /// Mixture `λ self + (1-λ) other`.
    pub fn mix(&self, other: &Behavior, lambda: f64) -> Result<Behavior> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!(
                "mixing weight {lambda} outside [0, 1]"
            )));
        }
        let mut p = self.p;
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        p[a][b][x][y] =
                            lambda * self.p[a][b][x][y] + (1.0 - lambda) * other.p[a][b][x][y];
                    }
                }
            }
        }
        Behavior::new(p)
    }
}

/// Local deterministic strategy: Alice outputs `alice[a]`, Bob `bob[b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub alice: [u8; 2],
    pub bob: [u8; 2],
}

impl DeterministicStrategy {
    /// All 16 strategies, ordered by `(alice, bob)` bit patterns.
    pub fn all() -> Vec<DeterministicStrategy> {
        let bits = [[0u8, 0], [0, 1], [1, 0], [1, 1]];
        let mut out = Vec::with_capacity(16);
        for alice in bits {
            for bob in bits {
                out.push(DeterministicStrategy { alice, bob });
            }
        }
        out
    }
}

/// Superquantum box: `x ⊕ y = a·b`, each satisfying pair with probability 1/2.
pub fn pr_box() -> Behavior {
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    if x ^ y == a & b {
                        p[a][b][x][y] = 0.5;
                    }
                }
            }
        }
    }
    Behavior { p }
}

pub fn behavior_from_deterministic(d: &DeterministicStrategy) -> Behavior {
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            p[a][b][d.alice[a] as usize][d.bob[b] as usize] = 1.0;
        }
    }
    Behavior { p }
}

/// Winning probability with uniformly random settings.
pub fn game_win_probability(beh: &Behavior) -> f64 {
    let mut w = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    if x ^ y == a & b {
                        w += beh.p[a][b][x][y];
                    }
                }
            }
        }
    }
    w / 4.0
}

pub fn chsh_value(beh: &Behavior) -> f64 {
    beh.correlator(0, 0) + beh.correlator(0, 1) + beh.correlator(1, 0) - beh.correlator(1, 1)
}

/// Alice's marginal must not depend on `b`, nor Bob's on `a`.
pub fn no_signaling_check(beh: &Behavior, tol: f64) -> bool {
    for a in 0..2 {
        for x in 0..2 {
            let m0 = beh.p[a][0][x][0] + beh.p[a][0][x][1];
            let m1 = beh.p[a][1][x][0] + beh.p[a][1][x][1];
            if (m0 - m1).abs() > tol {
                return false;
            }
        }
    }
    for b in 0..2 {
        for y in 0..2 {
            let m0 = beh.p[0][b][0][y] + beh.p[0][b][1][y];
            let m1 = beh.p[1][b][0][y] + beh.p[1][b][1][y];
            if (m0 - m1).abs() > tol {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalOptimum {
    pub win: f64,
    pub chsh: f64,
    pub strategies: Vec<DeterministicStrategy>,
}

/// Exhaustive search over the 16 deterministic strategies.
///
/// Win counts are integers out of 4, so the maximum is exact.
pub fn best_classical() -> ClassicalOptimum {
    let scored: Vec<(u32, DeterministicStrategy)> = DeterministicStrategy::all()
        .into_iter()
        .map(|d| {
            let wins = (0..2)
                .flat_map(|a| (0..2).map(move |b| (a, b)))
                .filter(|&(a, b)| d.alice[a] ^ d.bob[b] == (a & b) as u8)
                .count() as u32;
            (wins, d)
        })
        .collect();
    let best = scored.iter().map(|s| s.0).max().unwrap_or(0);
    let strategies: Vec<DeterministicStrategy> =
        scored.iter().filter(|s| s.0 == best).map(|s| s.1).collect();
    let win = best as f64 / 4.0;
    ClassicalOptimum {
        win,
        chsh: 8.0 * win - 4.0,
        strategies,
    }
}

/// Measurement direction at angle `theta` in the x–z plane.
fn plane_direction(theta: f64) -> Direction {
    Direction::from_angles(theta, 0.0)
}

/// Behavior of spin-1/2 singlet measurements at in-plane angles, with outcome
/// `m = +1/2 ↦ 0` and `m = -1/2 ↦ 1`.
pub fn quantum_behavior(alice_angles: [f64; 2], bob_angles: [f64; 2]) -> Result<Behavior> {
    if alice_angles
        .iter()
        .chain(&bob_angles)
        .any(|t| !t.is_finite())
    {
        return Err(Error::domain("measurement angles must be finite"));
    }
    let s = Spin::HALF;
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let dist = joint_outcome_distribution(
                s,
                &plane_direction(alice_angles[a]),
                &plane_direction(bob_angles[b]),
            )?;
            // Outcomes are listed descending: index 0 is m = +1/2.
            for x in 0..2 {
                for y in 0..2 {
                    p[a][b][x][y] = dist.p[x][y];
                }
            }
            let sum: f64 = p[a][b].iter().flatten().sum();
            for row in p[a][b].iter_mut() {
                for v in row.iter_mut() {
                    *v = v.max(0.0) / sum;
                }
            }
        }
    }
    Behavior::new(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumOptimum {
    pub alice_angles: [f64; 2],
    pub bob_angles: [f64; 2],
    pub win: f64,
    pub chsh: f64,
    pub behavior: Behavior,
}

/// Maximizes the singlet winning probability over measurement angles.
///
/// Alice's first angle is fixed at 0 (the singlet is rotation invariant). The
/// remaining three angles are scanned on a `grid`-point lattice per axis, then
/// the best grid point is polished by compass search down to `1e-10` rad.
pub fn optimize_quantum(grid: usize) -> Result<QuantumOptimum> {
    if grid < 4 {
        return Err(Error::config(format!(
            "angle grid must have at least 4 points, got {grid}"
        )));
    }
    let score = |v: [f64; 3]| -> Result<f64> {
        Ok(game_win_probability(&quantum_behavior(
            [0.0, v[0]],
            [v[1], v[2]],
        )?))
    };
    let step = 2.0 * PI / grid as f64;
    let mut best = ([0.0; 3], f64::NEG_INFINITY);
    for i in 0..grid {
        for j in 0..grid {
            for k in 0..grid {
                let v = [i as f64 * step, j as f64 * step, k as f64 * step];
                let w = score(v)?;
                if w > best.1 {
                    best = (v, w);
                }
            }
        }
    }
    let (mut v, mut w) = best;
    let mut h = step / 2.0;
    while h > 1e-10 {
        let mut improved = false;
        for axis in 0..3 {
            for sign in [1.0, -1.0] {
                let mut cand = v;
                cand[axis] += sign * h;
                let wc = score(cand)?;
                if wc > w {
                    v = cand;
                    w = wc;
                    improved = true;
                }
            }
        }
        if !improved {
            h /= 2.0;
        }
    }
    let behavior = quantum_behavior([0.0, v[0]], [v[1], v[2]])?;
    Ok(QuantumOptimum {
        alice_angles: [0.0, v[0]],
        bob_angles: [v[1], v[2]],
        win: w,
        chsh: chsh_value(&behavior),
        behavior,
    })
}

/// Per-block and cumulative empirical win rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRate {
    pub block: usize,
    pub rounds: u64,
    pub rate: f64,
    pub cumulative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub rounds: u64,
    pub seed: u64,
    pub shards: usize,
    pub wins: u64,
    pub win_rate: f64,
    pub blocks: Vec<BlockRate>,
}

impl SimulationReport {
    /// CSV with header `block,rounds,rate,cumulative`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("block,rounds,rate,cumulative\n");
        for b in &self.blocks {
            let _ = writeln!(out, "{},{},{},{}", b.block, b.rounds, b.rate, b.cumulative);
        }
        out
    }
}

/// Plays one round. Stream order: bit `a`, bit `b`, then a uniform draw in
/// `[0, 1)` that selects `(x, y)` by cumulative probability over
/// `(0,0), (0,1), (1,0), (1,1)`.
fn play_round<R: Rng>(beh: &Behavior, rng: &mut R) -> bool {
    let a = rng.random_range(0..2usize);
    let b = rng.random_range(0..2usize);
    let u: f64 = rng.random();
    let t = beh.p[a][b];
    let mut acc = 0.0;
    let mut pick = None;
    let mut last_positive = (0, 0);
    for x in 0..2 {
        for y in 0..2 {
            if t[x][y] > 0.0 {
                last_positive = (x, y);
                acc += t[x][y];
                if pick.is_none() && u < acc {
                    pick = Some((x, y));
                }
            }
        }
    }
    let (x, y) = pick.unwrap_or(last_positive);
    x ^ y == a & b
}

/// Rounds given to `shard` when `rounds` are split over `shards`.
fn shard_rounds(rounds: u64, shards: usize, shard: usize) -> u64 {
    let base = rounds / shards as u64;
    let extra = rounds % shards as u64;
    base + u64::from((shard as u64) < extra)
}

fn run_shard(beh: &Behavior, seed: u64, shard: usize, rounds: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    (0..rounds).map(|_| play_round(beh, &mut rng)).collect()
}

/// Monte Carlo play with one RNG stream per shard.
///
/// Shard `k` uses ChaCha8 seeded with `seed` on stream `k` and plays a
/// contiguous slice of rounds; results are concatenated in shard order, so
/// the outcome depends only on `(seed, rounds, shards)` and not on thread
/// scheduling. Shards run on scoped threads.
pub fn simulate_sharded(
    beh: &Behavior,
    rounds: u64,
    seed: u64,
    shards: usize,
    block: u64,
) -> Result<SimulationReport> {
    if rounds == 0 {
        return Err(Error::domain("rounds must be at least 1"));
    }
    if shards == 0 || block == 0 {
        return Err(Error::domain("shards and block size must be positive"));
    }
    let outcomes: Vec<Vec<bool>> = if shards == 1 {
        vec![run_shard(beh, seed, 0, rounds)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..shards)
                .map(|k| {
                    scope.spawn(move || run_shard(beh, seed, k, shard_rounds(rounds, shards, k)))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation shard panicked"))
                .collect()
        })
    };
    Ok(summarize(
        outcomes.into_iter().flatten(),
        rounds,
        seed,
        shards,
        block,
    ))
}

/// Single-stream Monte Carlo play; equal to `simulate_sharded(.., 1, block)`.
pub fn simulate(beh: &Behavior, rounds: u64, seed: u64) -> Result<SimulationReport> {
    let block = (rounds / 10).max(1);
    simulate_sharded(beh, rounds, seed, 1, block)
}

fn summarize(
    outcomes: impl Iterator<Item = bool>,
    rounds: u64,
    seed: u64,
    shards: usize,
    block: u64,
) -> SimulationReport {
    let mut blocks = Vec::new();
    let (mut wins, mut played) = (0u64, 0u64);
    let (mut bw, mut bn) = (0u64, 0u64);
    for won in outcomes {
        played += 1;
        bn += 1;
        if won {
            wins += 1;
            bw += 1;
        }
        if bn == block || played == rounds {
            blocks.push(BlockRate {
                block: blocks.len(),
                rounds: bn,
                rate: bw as f64 / bn as f64,
                cumulative: wins as f64 / played as f64,
            });
            bw = 0;
            bn = 0;
        }
    }
    SimulationReport {
        rounds,
        seed,
        shards,
        wins,
        win_rate: wins as f64 / rounds as f64,
        blocks,
    }
}
