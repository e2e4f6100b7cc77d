//! Finite-dimensional spin-s quantum mechanics (ħ = 1).
//!
//! Basis ordering is the `J_z` eigenbasis `|s⟩, |s-1⟩, ..., |-s⟩`; ladder
//! operators follow the Condon–Shortley phase convention. Two-particle
//! states are indexed `k * d + k'` for `|m_k⟩ ⊗ |m_k'⟩`, `d = 2s + 1`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::corrgeom::CorrelationTriple;
use crate::error::{Error, Result};
use crate::raffle::Spin;
use crate::vec3::{dot, norm, Point3};

pub type CMatrix = DMatrix<Complex64>;

const UNIT_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues closer than this are treated as one degenerate level.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Unit vector in physical space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction(Point3);

impl Direction {
    pub fn new(v: Point3) -> Result<Self> {
        let n = norm(&v);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::domain(format!(
                "direction {v:?} has norm {n}, not 1"
            )));
        }
        Ok(Direction(v))
    }

    /// Normalizes any nonzero finite vector.
    pub fn normalized(v: Point3) -> Result<Self> {
        crate::vec3::normalize(&v)
            .map(Direction)
            .ok_or_else(|| Error::domain(format!("cannot normalize {v:?}")))
    }

    /// Polar angle `theta` from +z, azimuth `phi` from +x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Direction([
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ])
    }

    pub fn z() -> Self {
        Direction([0.0, 0.0, 1.0])
    }

    pub fn x() -> Self {
        Direction([1.0, 0.0, 0.0])
    }

    pub fn as_array(&self) -> Point3 {
        self.0
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        dot(&self.0, &other.0)
    }
}

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Direction::new(v)
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> Self {
        d.0
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::domain("state vector must have positive dimension"));
        }
        let n = amplitudes.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::domain(format!("state vector has norm {n}, not 1")));
        }
        Ok(StateVector(amplitudes))
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dimension() != other.dimension() {
            return Err(Error::domain(format!(
                "dimension mismatch: {} vs {}",
                self.dimension(),
                other.dimension()
            )));
        }
        Ok(self.0.dotc(&other.0))
    }
}

/// One eigenspace of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct SpectralComponent {
    pub eigenvalue: f64,
    pub projector: CMatrix,
    pub vectors: Vec<DVector<Complex64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::domain("operator must be a nonempty square matrix"));
        }
        let dev = (&m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > HERMITIAN_TOL {
            return Err(Error::domain(format!(
                "matrix is not Hermitian (deviation {dev:e})"
            )));
        }
        Ok(HermitianOperator(m))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.nrows()
    }

    /// Eigenspaces sorted by descending eigenvalue, with eigenvalues within
    /// [`CLUSTER_TOL`] merged.
    pub fn spectral_decomposition(&self) -> Result<Vec<SpectralComponent>> {
        let eig = nalgebra::SymmetricEigen::try_new(self.0.clone(), 1e-15, 10_000)
            .ok_or_else(|| Error::numeric("Hermitian eigendecomposition did not converge"))?;
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut comps: Vec<SpectralComponent> = Vec::new();
        for i in order {
            let lambda = eig.eigenvalues[i];
            let v: DVector<Complex64> = eig.eigenvectors.column(i).into_owned();
            match comps.last_mut() {
                Some(c) if (c.eigenvalue - lambda).abs() <= CLUSTER_TOL => c.vectors.push(v),
                _ => comps.push(SpectralComponent {
                    eigenvalue: lambda,
                    projector: CMatrix::zeros(0, 0),
                    vectors: vec![v],
                }),
            }
        }
        let d = self.dimension();
        for c in &mut comps {
            c.eigenvalue = c
                .vectors
                .iter()
                .map(|v| (v.adjoint() * &self.0 * v)[(0, 0)].re)
                .sum::<f64>()
                / c.vectors.len() as f64;
            let mut p = CMatrix::zeros(d, d);
            for v in &c.vectors {
                p += v * v.adjoint();
            }
            c.projector = p;
        }
        Ok(comps)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = nalgebra::SymmetricEigen::try_new(self.0.clone(), 1e-15, 10_000)
            .ok_or_else(|| Error::numeric("Hermitian eigendecomposition did not converge"))?;
        let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        Ok(v)
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.dimension() != self.dimension() {
            return Err(Error::domain("operator and state dimensions differ"));
        }
        Ok((psi.0.adjoint() * &self.0 * &psi.0)[(0, 0)].re)
    }

    /// `exp(-i t A)` built from the spectral decomposition.
    pub fn unitary(&self, t: f64) -> Result<CMatrix> {
        let d = self.dimension();
        let mut u = CMatrix::zeros(d, d);
        for c in self.spectral_decomposition()? {
            u += c.projector * Complex64::from_polar(1.0, -t * c.eigenvalue);
        }
        Ok(u)
    }
}

#[derive(Clone, Debug)]
pub struct SpinMatrices {
    pub jx: HermitianOperator,
    pub jy: HermitianOperator,
    pub jz: HermitianOperator,
}

/// `J_x, J_y, J_z` for spin `s` from the ladder operators
/// `J_± |m⟩ = √(s(s+1) - m(m±1)) |m±1⟩`.
pub fn spin_matrices(s: Spin) -> SpinMatrices {
    let d = s.outcome_count();
    let sv = s.value();
    let m_of = |k: usize| sv - k as f64;
    let mut jplus = CMatrix::zeros(d, d);
    let mut jz = CMatrix::zeros(d, d);
    for k in 0..d {
        let m = m_of(k);
        jz[(k, k)] = Complex64::new(m, 0.0);
        if k > 0 {
            // |m⟩ at index k raises to |m+1⟩ at index k-1.
            jplus[(k - 1, k)] = Complex64::new((sv * (sv + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus) * Complex64::new(0.5, 0.0);
    let jy = (&jplus - &jminus) * Complex64::new(0.0, -0.5);
    SpinMatrices {
        jx: HermitianOperator(jx),
        jy: HermitianOperator(jy),
        jz: HermitianOperator(jz),
    }
}

/// `J · n`.
pub fn spin_component(s: Spin, n: &Direction) -> HermitianOperator {
    let j = spin_matrices(s);
    let [x, y, z] = n.as_array();
    let m = j.jx.0 * Complex64::new(x, 0.0)
        + j.jy.0 * Complex64::new(y, 0.0)
        + j.jz.0 * Complex64::new(z, 0.0);
    HermitianOperator(m)
}

/// Spectral projectors of `J · n` keyed by doubled outcome `2m`, descending.
pub fn spin_projectors(s: Spin, n: &Direction) -> Result<Vec<(i32, CMatrix)>> {
    let comps = spin_component(s, n).spectral_decomposition()?;
    if comps.len() != s.outcome_count() {
        return Err(Error::numeric(format!(
            "J·n has {} distinct eigenvalues, expected {}",
            comps.len(),
            s.outcome_count()
        )));
    }
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        let twice_m = (2.0 * c.eigenvalue).round();
        if (2.0 * c.eigenvalue - twice_m).abs() > 1e-6 || c.vectors.len() != 1 {
            return Err(Error::numeric(format!(
                "J·n eigenvalue {} does not match a spin outcome",
                c.eigenvalue
            )));
        }
        out.push((twice_m as i32, c.projector));
    }
    Ok(out)
}

/// Eigenstate of `J · n` with eigenvalue `twice_m / 2`.
pub fn spin_eigenstate(s: Spin, n: &Direction, twice_m: i32) -> Result<StateVector> {
    if !s.is_outcome(twice_m) {
        return Err(Error::domain(format!(
            "2m = {twice_m} is not an outcome of spin {s}"
        )));
    }
    let comps = spin_component(s, n).spectral_decomposition()?;
    let c = comps
        .into_iter()
        .find(|c| (2.0 * c.eigenvalue - twice_m as f64).abs() < 1e-6)
        .ok_or_else(|| Error::numeric("eigenvalue not found in the spectrum of J·n"))?;
    let v = &c.vectors[0];
    StateVector::new(v / Complex64::new(v.norm(), 0.0))
}

/// `Σ_m (-1)^(s-m) / √(2s+1) |m⟩ ⊗ |-m⟩`, the total-spin-zero state.
pub fn singlet_state(s: Spin) -> StateVector {
    let d = s.outcome_count();
    let amp = 1.0 / (d as f64).sqrt();
    let mut psi = DVector::<Complex64>::zeros(d * d);
    for k in 0..d {
        // m = s - k, so s - m = k; partner -m sits at index d - 1 - k.
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        psi[k * d + (d - 1 - k)] = Complex64::new(sign * amp, 0.0);
    }
    StateVector(psi)
}

/// `|⟨ψ|φ⟩|²`, the squared cosine of the Hilbert-space angle.
pub fn transition_probability(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    Ok(psi.inner(phi)?.norm_sqr().clamp(0.0, 1.0))
}

/// Born-rule joint distribution of two spin measurements on the singlet.
///
/// `p[i][j]` is the probability of outcomes `outcomes[i]` (Alice) and
/// `outcomes[j]` (Bob), doubled values in descending order. Serializes as
/// `{"twice_s": n, "p": {"ma,mb": prob, ...}}` with doubled keys.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    pub spin: Spin,
    pub outcomes: Vec<i32>,
    pub p: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct JointJson {
    twice_s: u32,
    p: BTreeMap<String, f64>,
}

impl Serialize for JointDistribution {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut p = BTreeMap::new();
        for (i, a) in self.outcomes.iter().enumerate() {
            for (j, b) in self.outcomes.iter().enumerate() {
                p.insert(format!("{a},{b}"), self.p[i][j]);
            }
        }
        JointJson {
            twice_s: self.spin.twice(),
            p,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for JointDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = JointJson::deserialize(de)?;
        let spin = Spin::from_twice(j.twice_s).map_err(D::Error::custom)?;
        let mut outcomes = spin.doubled_outcomes();
        outcomes.reverse();
        let d = outcomes.len();
        let mut p = vec![vec![0.0; d]; d];
        for (key, v) in j.p {
            let (a, b) = key
                .split_once(',')
                .and_then(|(a, b)| {
                    Some((a.trim().parse::<i32>().ok()?, b.trim().parse::<i32>().ok()?))
                })
                .ok_or_else(|| D::Error::custom(format!("bad outcome key {key:?}")))?;
            let idx = |x: i32| outcomes.iter().position(|&o| o == x);
            let (i, k) = idx(a)
                .zip(idx(b))
                .ok_or_else(|| D::Error::custom(format!("outcome key {key:?} out of range")))?;
            p[i][k] = v;
        }
        Ok(JointDistribution { spin, outcomes, p })
    }
}

impl JointDistribution {
    pub fn marginal_alice(&self) -> Vec<f64> {
        self.p.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn marginal_bob(&self) -> Vec<f64> {
        (0..self.outcomes.len())
            .map(|j| self.p.iter().map(|row| row[j]).sum())
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.p.iter().flatten().sum()
    }

    /// `E[m_a m_b]` in units of ħ².
    pub fn product_expectation(&self) -> f64 {
        let mut e = 0.0;
        for (i, a) in self.outcomes.iter().enumerate() {
            for (j, b) in self.outcomes.iter().enumerate() {
                e += self.p[i][j] * (*a as f64 / 2.0) * (*b as f64 / 2.0);
            }
        }
        e
    }
}

/// `p(m_a, m_b) = ‖(P_{m_a} ⊗ Q_{m_b}) ψ‖²` on the spin-`s` singlet.
pub fn joint_outcome_distribution(
    s: Spin,
    a: &Direction,
    b: &Direction,
) -> Result<JointDistribution> {
    let pa = spin_projectors(s, a)?;
    let pb = spin_projectors(s, b)?;
    let d = s.outcome_count();
    let psi = singlet_state(s);
    // (P ⊗ Q) vec(Ψ) = vec(P Ψ Qᵀ) for row-major vec.
    let big_psi = CMatrix::from_fn(d, d, |i, j| psi.0[i * d + j]);
    let mut p = vec![vec![0.0; d]; d];
    for (i, (_, pm)) in pa.iter().enumerate() {
        let left = pm * &big_psi;
        for (j, (_, qm)) in pb.iter().enumerate() {
            p[i][j] = (&left * qm.transpose()).norm_squared();
        }
    }
    Ok(JointDistribution {
        spin: s,
        outcomes: pa.iter().map(|(m, _)| *m).collect(),
        p,
    })
}

/// `⟨ψ| (J·a) ⊗ (J·b) |ψ⟩` on the singlet, computed with an explicit
/// Kronecker product.
pub fn singlet_product_expectation(s: Spin, a: &Direction, b: &Direction) -> f64 {
    let op = spin_component(s, a).0.kronecker(&spin_component(s, b).0);
    let psi = singlet_state(s);
    (psi.0.adjoint() * op * &psi.0)[(0, 0)].re
}

/// Pearson anticorrelation `-E[m_a m_b] / (s(s+1)/3)` of the singlet outcomes.
pub fn quantum_correlation(s: Spin, a: &Direction, b: &Direction) -> Result<f64> {
    let dist = joint_outcome_distribution(s, a, b)?;
    Ok(-dist.product_expectation() / s.variance())
}

pub fn quantum_triple(
    s: Spin,
    a: &Direction,
    b: &Direction,
    c: &Direction,
) -> Result<CorrelationTriple> {
    let t = [
        quantum_correlation(s, a, b)?,
        quantum_correlation(s, a, c)?,
        quantum_correlation(s, b, c)?,
    ];
    CorrelationTriple::from_computed(t, 1e-9)
}
