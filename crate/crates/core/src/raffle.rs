//! Spin-s raffles: shared-randomness models of the three-setting experiment.
//!
//! A ticket fixes Alice's outcome for each of the three settings; Bob's
//! outcome for the same setting is the negation. A raffle is a probability
//! mixture of tickets. It is admissible when each setting's outcome
//! marginal is uniform over `{-s, ..., s}`. Then every mean is zero and every
//! variance is `s(s+1)/3`, so the Pearson triple is linear in the ticket
//! weights and the achievable triples form a polytope.
//!
//! Outcome values are stored doubled (`2m`), so half-integers stay integral.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corrgeom::CorrelationTriple;
use crate::error::{Error, Result};
use crate::lp::{LpOutcome, StandardLp};
use crate::polytope::{convex_hull_3d, elliptope_support, support_function, ConvexHull};
use crate::vec3::{dot, Point3};

const WEIGHT_SUM_TOL: f64 = 1e-12;
const MARGINAL_TOL: f64 = 1e-9;
/// Largest `2s` accepted by exact enumeration.
pub const MAX_EXACT_TWICE_S: u32 = 4;
pub const MIN_SAMPLES: usize = 1000;

/// Spin quantum number, stored as `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Spin {
    twice_s: u32,
}

impl Spin {
    pub fn from_twice(twice_s: u32) -> Result<Self> {
        if twice_s == 0 {
            return Err(Error::domain("spin must be positive (2s >= 1)"));
        }
        Ok(Spin { twice_s })
    }

    pub const HALF: Spin = Spin { twice_s: 1 };

    pub fn twice(&self) -> u32 {
        self.twice_s
    }

    pub fn value(&self) -> f64 {
        self.twice_s as f64 / 2.0
    }

    /// `2s + 1`.
    pub fn outcome_count(&self) -> usize {
        self.twice_s as usize + 1
    }

    /// Doubled outcome values `-2s, -2s+2, ..., 2s`.
    pub fn doubled_outcomes(&self) -> Vec<i32> {
        let n = self.twice_s as i32;
        (-n..=n).step_by(2).collect()
    }

    pub fn is_outcome(&self, doubled: i32) -> bool {
        let n = self.twice_s as i32;
        doubled.abs() <= n && (doubled + n) % 2 == 0
    }

    /// Variance `s(s+1)/3` of a uniform outcome.
    pub fn variance(&self) -> f64 {
        let s = self.value();
        s * (s + 1.0) / 3.0
    }
}

impl TryFrom<u32> for Spin {
    type Error = Error;

    fn try_from(v: u32) -> Result<Self> {
        Spin::from_twice(v)
    }
}

impl From<Spin> for u32 {
    fn from(s: Spin) -> u32 {
        s.twice_s
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_s.is_multiple_of(2) {
            write!(f, "{}", self.twice_s / 2)
        } else {
            write!(f, "{}/2", self.twice_s)
        }
    }
}

/// Accepts `"1/2"`, `"3/2"`, `"1"`, `"1.5"`.
impl FromStr for Spin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::domain(format!("cannot parse spin {s:?}"));
        if let Some(num) = s.strip_suffix("/2") {
            let n: u32 = num.trim().parse().map_err(|_| bad())?;
            return Spin::from_twice(n);
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * v;
        if twice.fract() != 0.0 || twice < 1.0 || twice > u32::MAX as f64 {
            return Err(bad());
        }
        Spin::from_twice(twice as u32)
    }
}

/// Alice's doubled outcomes for settings `a`, `b`, `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ticket(pub [i32; 3]);

impl Ticket {
    pub fn negated(&self) -> Ticket {
        Ticket(self.0.map(|x| -x))
    }

    /// Products `(x_a x_b, x_a x_c, x_b x_c)` of doubled values.
    fn products(&self) -> [i64; 3] {
        let [a, b, c] = self.0.map(i64::from);
        [a * b, a * c, b * c]
    }
}

/// All `(2s+1)^3` tickets, lexicographic in `(x_a, x_b, x_c)`.
pub fn enumerate_tickets(s: Spin) -> Vec<Ticket> {
    let vals = s.doubled_outcomes();
    let mut out = Vec::with_capacity(vals.len().pow(3));
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                out.push(Ticket([a, b, c]));
            }
        }
    }
    out
}

/// The linear correlation map applied to a single ticket:
/// `x_x x_y / σ²` in real units, i.e. `3 X_x X_y / (n(n+2))` for doubled values.
pub fn ticket_image(t: &Ticket, s: Spin) -> Point3 {
    let n = s.twice() as f64;
    let k = 3.0 / (n * (n + 2.0));
    t.products().map(|p| p as f64 * k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct WeightedTicket {
    ticket: Ticket,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct RaffleJson {
    twice_s: u32,
    weights: Vec<WeightedTicket>,
}

/// A probability mixture of tickets.
///
/// JSON: `{"twice_s": n, "weights": [{"ticket": [xa,xb,xc], "p": w}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RaffleJson", into = "RaffleJson")]
pub struct Raffle {
    spin: Spin,
    entries: Vec<(Ticket, f64)>,
}

impl TryFrom<RaffleJson> for Raffle {
    type Error = Error;

    fn try_from(j: RaffleJson) -> Result<Self> {
        Raffle::new(
            Spin::from_twice(j.twice_s)?,
            j.weights.into_iter().map(|w| (w.ticket, w.p)).collect(),
        )
    }
}

impl From<Raffle> for RaffleJson {
    fn from(r: Raffle) -> Self {
        RaffleJson {
            twice_s: r.spin.twice(),
            weights: r
                .entries
                .into_iter()
                .map(|(ticket, p)| WeightedTicket { ticket, p })
                .collect(),
        }
    }
}

impl Raffle {
    /// Validates ticket values and that the weights form a distribution.
    pub fn new(spin: Spin, entries: Vec<(Ticket, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("a raffle needs at least one ticket"));
        }
        let mut total = 0.0;
        for (t, p) in &entries {
            if let Some(x) = t.0.iter().find(|&&x| !spin.is_outcome(x)) {
                return Err(Error::domain(format!(
                    "ticket value {x} (doubled) is not an outcome of spin {spin}"
                )));
            }
            if *p < 0.0 || !p.is_finite() {
                return Err(Error::domain(format!(
                    "ticket weight {p} is not a probability"
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::domain(format!(
                "ticket weights sum to {total}, not 1"
            )));
        }
        Ok(Raffle { spin, entries })
    }

    /// Equal weights over the given tickets.
    pub fn uniform(spin: Spin, tickets: &[Ticket]) -> Result<Self> {
        let w = 1.0 / tickets.len().max(1) as f64;
        Raffle::new(spin, tickets.iter().map(|t| (*t, w)).collect())
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn entries(&self) -> &[(Ticket, f64)] {
        &self.entries
    }

    /// Every ticket negated; same weights.
    pub fn negated(&self) -> Raffle {
        Raffle {
            spin: self.spin,
            entries: self
                .entries
                .iter()
                .map(|(t, p)| (t.negated(), *p))
                .collect(),
        }
    }

    /// Outcome marginals per setting, indexed like [`Spin::doubled_outcomes`].
    pub fn marginals(&self) -> [Vec<f64>; 3] {
        let n = self.spin.twice() as i32;
        let mut out: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; self.spin.outcome_count()]);
        for (t, p) in &self.entries {
            for (k, &x) in t.0.iter().enumerate() {
                out[k][((x + n) / 2) as usize] += p;
            }
        }
        out
    }

    pub fn is_admissible(&self) -> bool {
        let target = 1.0 / self.spin.outcome_count() as f64;
        self.marginals()
            .iter()
            .flatten()
            .all(|m| (m - target).abs() <= MARGINAL_TOL)
    }
}

/// True iff `r` is a spin-`s` raffle with uniform single-setting marginals.
pub fn admissible_check(r: &Raffle, s: Spin) -> bool {
    r.spin == s && r.is_admissible()
}

/// Pearson triple `E[X_x X_y] / σ²` of an admissible raffle.
pub fn raffle_correlation(r: &Raffle) -> Result<CorrelationTriple> {
    if !r.is_admissible() {
        return Err(Error::Admissibility(
            "single-setting marginals are not uniform".into(),
        ));
    }
    let mut acc = [0.0; 3];
    for (t, p) in &r.entries {
        let img = ticket_image(t, r.spin);
        for k in 0..3 {
            acc[k] += p * img[k];
        }
    }
    CorrelationTriple::from_computed(acc, 1e-9)
}

/// How to build a raffle polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HullMethod {
    /// Exact projection of the admissible-mixture polytope (`2s <= 4`).
    ExactEnumeration,
    /// Hull of the images of `samples` random admissible raffles.
    Sampling { samples: usize, seed: u64 },
}

/// The local correlation polytope of spin-`s` raffles.
pub fn raffle_polytope(s: Spin, method: HullMethod) -> Result<ConvexHull> {
    match method {
        HullMethod::ExactEnumeration => {
            if s.twice() > MAX_EXACT_TWICE_S {
                return Err(Error::config(format!(
                    "exact enumeration is limited to s <= 2, got s = {s}"
                )));
            }
            MixtureLp::new(s).projected_hull()
        }
        HullMethod::Sampling { samples, seed } => {
            if samples < MIN_SAMPLES {
                return Err(Error::config(format!(
                    "sampling needs at least {MIN_SAMPLES} raffles, got {samples}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut points = Vec::with_capacity(samples);
            for _ in 0..samples {
                let r = sample_admissible_raffle(s, &mut rng);
                points.push(raffle_correlation(&r)?.to_array());
            }
            convex_hull_3d(&points)
        }
    }
}

/// Equal mixture of `2s+1` tickets whose columns are permutations of the
/// outcome values; admissible by construction.
pub fn permutation_raffle<R: Rng + ?Sized>(s: Spin, rng: &mut R) -> Raffle {
    let vals = s.doubled_outcomes();
    let mut b = vals.clone();
    let mut c = vals.clone();
    b.shuffle(rng);
    c.shuffle(rng);
    let tickets: Vec<Ticket> = (0..vals.len())
        .map(|k| Ticket([vals[k], b[k], c[k]]))
        .collect();
    Raffle::uniform(s, &tickets).expect("valid tickets")
}

/// A random admissible raffle: a Dirichlet(1) mixture of one to three random
/// permutation raffles.
///
/// Stream order per draw: component count, then per component two shuffles
/// and one exponential weight.
pub fn sample_admissible_raffle<R: Rng + ?Sized>(s: Spin, rng: &mut R) -> Raffle {
    let parts = rng.random_range(1..=3usize);
    let mut comps = Vec::with_capacity(parts);
    let mut total = 0.0;
    for _ in 0..parts {
        let r = permutation_raffle(s, rng);
        let u: f64 = rng.random();
        let w = -(1.0 - u).ln();
        total += w;
        comps.push((r, w));
    }
    let mut entries: Vec<(Ticket, f64)> = Vec::new();
    for (r, w) in comps {
        for (t, p) in r.entries {
            entries.push((t, p * w / total));
        }
    }
    let sum: f64 = entries.iter().map(|e| e.1).sum();
    for e in &mut entries {
        e.1 /= sum;
    }
    Raffle::new(s, entries).expect("valid mixture")
}

/// The admissible-mixture polytope as a standard-form system over ticket
/// weights: `Σ w = 1` and, for each setting, `P(x = v) = 1/(2s+1)` for all
/// but the last value (implied by the rest). The rows are independent.
struct MixtureLp {
    spin: Spin,
    tickets: Vec<Ticket>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl MixtureLp {
    fn new(spin: Spin) -> Self {
        let tickets = enumerate_tickets(spin);
        let vals = spin.doubled_outcomes();
        let q = 1.0 / vals.len() as f64;
        let mut a = vec![vec![1.0; tickets.len()]];
        let mut b = vec![1.0];
        for setting in 0..3 {
            for &v in &vals[..vals.len() - 1] {
                a.push(
                    tickets
                        .iter()
                        .map(|t| f64::from(t.0[setting] == v))
                        .collect(),
                );
                b.push(q);
            }
        }
        MixtureLp {
            spin,
            tickets,
            a,
            b,
        }
    }

    /// Maximizes `d · τ(w)`; returns the optimal value and the exact image of
    /// the optimal vertex, rounded once to `f64`.
    fn maximize(&self, d: &Point3) -> Result<(f64, Point3)> {
        let c: Vec<f64> = self
            .tickets
            .iter()
            .map(|t| -dot(d, &ticket_image(t, self.spin)))
            .collect();
        let lp = StandardLp {
            a: self.a.clone(),
            b: self.b.clone(),
            c,
        };
        match lp.solve(1e-9)? {
            LpOutcome::Optimal { x, value, basis } => {
                let point = self.exact_image(&basis).unwrap_or_else(|| {
                    let mut acc = [0.0; 3];
                    for (t, w) in self.tickets.iter().zip(&x) {
                        let img = ticket_image(t, self.spin);
                        for k in 0..3 {
                            acc[k] += w * img[k];
                        }
                    }
                    acc
                });
                Ok((-value, point))
            }
            LpOutcome::Infeasible { residual } => Err(Error::Internal(format!(
                "admissible-mixture system reported infeasible (residual {residual})"
            ))),
            LpOutcome::Unbounded => Err(Error::Internal(
                "admissible-mixture system reported unbounded".into(),
            )),
        }
    }

    /// Re-solves the basic system `A_B w_B = b` in rationals and maps the
    /// exact weights through the correlation map.
    fn exact_image(&self, basis: &[usize]) -> Option<Point3> {
        let m = self.a.len();
        let k = basis.len();
        let q = BigRational::new(BigInt::one(), BigInt::from(self.spin.outcome_count()));
        let rhs: Vec<BigRational> = (0..m)
            .map(|i| {
                if i == 0 {
                    BigRational::one()
                } else {
                    q.clone()
                }
            })
            .collect();
        let mut rows: Vec<Vec<BigRational>> = (0..m)
            .map(|i| {
                let mut row: Vec<BigRational> = basis
                    .iter()
                    .map(|&j| BigRational::from_integer(BigInt::from(self.a[i][j] as i64)))
                    .collect();
                row.push(rhs[i].clone());
                row
            })
            .collect();
        let w = solve_rational(&mut rows, k)?;
        if w.iter().any(|x| x.is_negative()) {
            return None;
        }
        let n = i64::from(self.spin.twice());
        let scale = BigRational::new(BigInt::from(3), BigInt::from(n * (n + 2)));
        let mut acc: [BigRational; 3] = std::array::from_fn(|_| BigRational::zero());
        for (wj, &j) in w.iter().zip(basis) {
            let prods = self.tickets[j].products();
            for t in 0..3 {
                acc[t] += wj * BigRational::from_integer(BigInt::from(prods[t]));
            }
        }
        let out = acc.map(|v| (v * &scale).to_f64());
        Some([out[0]?, out[1]?, out[2]?])
    }

    /// Builds the projection of the mixture polytope by repeatedly testing
    /// every facet of the current hull with an LP in its normal direction.
    /// A facet whose LP optimum exceeds its offset gains a new vertex; the
    /// loop ends when every facet is confirmed supporting.
    fn projected_hull(&self) -> Result<ConvexHull> {
        let mut points: Vec<Point3> = Vec::new();
        for d in crate::vec3::lattice_directions() {
            points.push(self.maximize(&d)?.1);
        }
        let mut confirmed: HashSet<[u64; 4]> = HashSet::new();
        for _round in 0..10_000 {
            let hull = convex_hull_3d(&points)?;
            let mut grew = false;
            for f in &hull.facets.facets {
                let key = [
                    f.normal[0].to_bits(),
                    f.normal[1].to_bits(),
                    f.normal[2].to_bits(),
                    f.offset.to_bits(),
                ];
                if confirmed.contains(&key) {
                    continue;
                }
                let (value, point) = self.maximize(&f.normal)?;
                if value > f.offset + 1e-9 {
                    points.push(point);
                    grew = true;
                } else {
                    confirmed.insert(key);
                }
            }
            if !grew {
                return Ok(hull);
            }
        }
        Err(Error::numeric(
            "raffle polytope projection did not converge",
        ))
    }
}

/// Gauss-Jordan elimination on an augmented `m × (k+1)` system of full
/// column rank. Returns `None` if inconsistent or rank-deficient.
fn solve_rational(rows: &mut [Vec<BigRational>], k: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let mut r = 0;
    for col in 0..k {
        let piv = (r..m).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(r, piv);
        let p = rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &p;
        }
        for i in 0..m {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=k {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| rows[i][k].clone()).collect())
}

/// Support gap between the elliptope and a raffle polytope in one direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEntry {
    pub direction: Point3,
    pub elliptope_support: f64,
    pub raffle_support: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub spin: Spin,
    pub method: HullMethod,
    pub entries: Vec<GapEntry>,
    pub max_gap: f64,
}

/// Seed used when a spin is too large for exact enumeration.
pub const FALLBACK_SEED: u64 = 0x5eed;
pub const FALLBACK_SAMPLES: usize = 20_000;

/// `elliptope_support(d) - support(raffle_polytope(s), d)` for each direction.
///
/// Uses exact enumeration for `s <= 2` and seeded sampling above that.
pub fn support_gap_profile(s: Spin, directions: &[Point3]) -> Result<GapProfile> {
    let method = if s.twice() <= MAX_EXACT_TWICE_S {
        HullMethod::ExactEnumeration
    } else {
        HullMethod::Sampling {
            samples: FALLBACK_SAMPLES,
            seed: FALLBACK_SEED,
        }
    };
    let hull = raffle_polytope(s, method)?;
    let mut entries = Vec::with_capacity(directions.len());
    for d in directions {
        let e = elliptope_support(d, crate::NUMERIC_TOL)?.value;
        let r = support_function(&hull.vertices, d)?;
        let gap = e - r;
        if gap < -crate::NUMERIC_TOL {
            return Err(Error::Internal(format!(
                "raffle polytope exceeds the elliptope along {d:?} by {}",
                -gap
            )));
        }
        entries.push(GapEntry {
            direction: *d,
            elliptope_support: e,
            raffle_support: r,
            gap,
        });
    }
    let max_gap = entries
        .iter()
        .map(|e| e.gap)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(GapProfile {
        spin: s,
        method,
        entries,
        max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spin(twice: u32) -> Spin {
        Spin::from_twice(twice).unwrap()
    }

    #[test]
    fn spin_parsing_and_display() {
        for (text, twice) in [("1/2", 1), ("3/2", 3), ("1", 2), ("1.5", 3), ("2", 4)] {
            let s: Spin = text.parse().unwrap();
            assert_eq!(s.twice(), twice);
        }
        assert_eq!(spin(3).to_string(), "3/2");
        assert_eq!(spin(2).to_string(), "1");
        assert!("0".parse::<Spin>().is_err());
        assert!("0.3".parse::<Spin>().is_err());
        assert!(Spin::from_twice(0).is_err());
    }

    #[test]
    fn ticket_counts() {
        for (twice, n) in [(1, 8), (2, 27), (3, 64)] {
            let t = enumerate_tickets(spin(twice));
            assert_eq!(t.len(), n);
            assert!(t.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(enumerate_tickets(spin(1))[0], Ticket([-1, -1, -1]));
    }

    #[test]
    fn admissibility_examples() {
        let s = spin(1);
        let all = Raffle::uniform(s, &enumerate_tickets(s)).unwrap();
        assert!(admissible_check(&all, s));
        let point = Raffle::uniform(s, &[Ticket([1, 1, 1])]).unwrap();
        assert!(!admissible_check(&point, s));
        let pair = Raffle::uniform(s, &[Ticket([1, -1, 1]), Ticket([-1, 1, -1])]).unwrap();
        assert!(admissible_check(&pair, s));
        assert!(!admissible_check(&pair, spin(3)));
    }

    #[test]
    fn correlation_examples() {
        let s = spin(1);
        let r = Raffle::uniform(s, &[Ticket([1, 1, 1]), Ticket([-1, -1, -1])]).unwrap();
        assert_eq!(raffle_correlation(&r).unwrap().to_array(), [1.0, 1.0, 1.0]);
        let r = Raffle::uniform(s, &[Ticket([1, -1, 1]), Ticket([-1, 1, -1])]).unwrap();
        assert_eq!(
            raffle_correlation(&r).unwrap().to_array(),
            [-1.0, 1.0, -1.0]
        );

        let perms: Vec<Ticket> = [
            [2, 0, -2],
            [2, -2, 0],
            [0, 2, -2],
            [0, -2, 2],
            [-2, 2, 0],
            [-2, 0, 2],
        ]
        .into_iter()
        .map(Ticket)
        .collect();
        let r = Raffle::uniform(spin(2), &perms).unwrap();
        let t = raffle_correlation(&r).unwrap().to_array();
        for x in t {
            assert!((x + 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn inadmissible_correlation_is_an_error() {
        let r = Raffle::uniform(spin(1), &[Ticket([1, 1, 1])]).unwrap();
        assert!(matches!(
            raffle_correlation(&r),
            Err(Error::Admissibility(_))
        ));
    }

    #[test]
    fn raffle_validation() {
        assert!(Raffle::new(spin(1), vec![(Ticket([2, 1, 1]), 1.0)]).is_err());
        assert!(Raffle::new(spin(2), vec![(Ticket([1, 0, 0]), 1.0)]).is_err());
        assert!(Raffle::new(spin(1), vec![(Ticket([1, 1, 1]), 0.5)]).is_err());
        assert!(Raffle::new(
            spin(1),
            vec![(Ticket([1, 1, 1]), -0.5), (Ticket([1, 1, 1]), 1.5)]
        )
        .is_err());
    }

    #[test]
    fn raffle_json_schema() {
        let r = Raffle::uniform(spin(1), &[Ticket([1, -1, 1]), Ticket([-1, 1, -1])]).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(
            text,
            r#"{"twice_s":1,"weights":[{"ticket":[1,-1,1],"p":0.5},{"ticket":[-1,1,-1],"p":0.5}]}"#
        );
        let back: Raffle = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<Raffle>(
            r#"{"twice_s":1,"weights":[{"ticket":[3,1,1],"p":1.0}]}"#
        )
        .is_err());
    }

    #[test]
    fn sampled_raffles_are_admissible_and_reproducible() {
        let s = spin(3);
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = sample_admissible_raffle(s, &mut r1);
            assert!(a.is_admissible());
            assert_eq!(a, sample_admissible_raffle(s, &mut r2));
        }
    }

    #[test]
    fn sign_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for twice in 1..=4 {
            for _ in 0..20 {
                let r = sample_admissible_raffle(spin(twice), &mut rng);
                assert_eq!(
                    raffle_correlation(&r).unwrap(),
                    raffle_correlation(&r.negated()).unwrap()
                );
            }
        }
    }

    #[test]
    fn polytope_guards() {
        assert!(matches!(
            raffle_polytope(spin(5), HullMethod::ExactEnumeration),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            raffle_polytope(
                spin(1),
                HullMethod::Sampling {
                    samples: 10,
                    seed: 0
                }
            ),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn rational_solver() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let mut rows = vec![
            vec![r(1, 1), r(1, 1), r(1, 1)],
            vec![r(1, 1), r(0, 1), r(1, 3)],
            vec![r(2, 1), r(2, 1), r(2, 1)],
        ];
        let x = solve_rational(&mut rows, 2).unwrap();
        assert_eq!(x, vec![r(1, 3), r(2, 3)]);
        let mut bad = vec![vec![r(1, 1), r(1, 1)], vec![r(1, 1), r(2, 1)]];
        assert!(solve_rational(&mut bad, 1).is_none());
    }
}
