//! Dense pure states, the 1D cluster state and its regroupings.
//!
//! Basis index of `|b1 b2 … bn⟩` has `b1` as the most significant bit, so
//! site `a` lives at index bit `n - a`.

use std::fmt::Write as _;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{check_dims, Error, Result};
use crate::pauli::{phase_value, Letter, PauliWord};
use crate::Side;

/// Largest qubit count built as a dense state by default.
pub const DEFAULT_STATEVECTOR_LIMIT: usize = 14;

/// Tolerance for every state comparison.
pub const STATE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

/// Single-qubit kets used to write product states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ket {
    Zero,
    One,
    Plus,
    Minus,
}

impl Ket {
    fn amplitudes(self) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64| Complex64::new(re, 0.0);
        match self {
            Ket::Zero => [c(1.0), c(0.0)],
            Ket::One => [c(0.0), c(1.0)],
            Ket::Plus => [c(h), c(h)],
            Ket::Minus => [c(h), c(-h)],
        }
    }

    pub fn state(self) -> StateVector {
        StateVector::raw(1, self.amplitudes().to_vec())
    }
}

impl StateVector {
    /// Checked constructor: length `2^n` and unit norm.
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n >= 32 || amplitudes.len() != 1usize << n {
            return Err(Error::Domain(format!(
                "{} amplitudes do not describe {n} qubits",
                amplitudes.len()
            )));
        }
        let s = StateVector { n, amplitudes };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Domain(format!("squared norm {norm} is not 1")));
        }
        Ok(s)
    }

    /// Unchecked, possibly unnormalized, used while assembling superpositions.
    fn raw(n: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n);
        StateVector { n, amplitudes }
    }

    fn normalized_checked(self) -> Result<Self> {
        StateVector::new(self.n, self.amplitudes)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n >= 32 || index >= 1 << n {
            return Err(Error::Domain(format!(
                "no basis state {index} on {n} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector::raw(n, amps))
    }

    pub fn product(kets: &[Ket]) -> Self {
        assert!(!kets.is_empty());
        kets.iter()
            .skip(1)
            .fold(kets[0].state(), |acc, k| acc.kron(&k.state()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dims(self.n, other.n)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance below `tol`.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.n == other.n && self.distance(other) < tol
    }

    fn distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `self ⊗ other`; `self` takes the lower site numbers.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        StateVector::raw(self.n + other.n, amps)
    }

    fn scaled(&self, c: f64) -> StateVector {
        StateVector::raw(self.n, self.amplitudes.iter().map(|a| a * c).collect())
    }

    fn scaled_complex(&self, c: Complex64) -> StateVector {
        StateVector::raw(self.n, self.amplitudes.iter().map(|a| a * c).collect())
    }

    /// One line per basis state: `|b1…bn⟩ re im`, ordered by index.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (idx, a) in self.amplitudes.iter().enumerate() {
            let bits: String = (0..self.n)
                .map(|k| {
                    if idx >> (self.n - 1 - k) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect();
            writeln!(out, "|{bits}⟩ {} {}", clean(a.re), clean(a.im)).unwrap();
        }
        out
    }
}

fn clean(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

impl Add for &StateVector {
    type Output = StateVector;

    fn add(self, rhs: &StateVector) -> StateVector {
        assert_eq!(self.n, rhs.n);
        StateVector::raw(
            self.n,
            self.amplitudes
                .iter()
                .zip(&rhs.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Mul<&StateVector> for f64 {
    type Output = StateVector;

    fn mul(self, rhs: &StateVector) -> StateVector {
        rhs.scaled(self)
    }
}

impl Mul<&StateVector> for Complex64 {
    type Output = StateVector;

    fn mul(self, rhs: &StateVector) -> StateVector {
        rhs.scaled_complex(self)
    }
}

/// `E_a = X_a ⊗ Z_b` over the chain neighbours `b = a ± 1`.
pub fn stabilizer_generators(n: usize) -> Result<Vec<PauliWord>> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "cluster chain needs n >= 2, got {n}"
        )));
    }
    if n > crate::pauli::MAX_QUBITS {
        return Err(Error::Capacity {
            what: "Pauli word",
            limit: crate::pauli::MAX_QUBITS,
            requested: n,
        });
    }
    Ok((1..=n)
        .map(|a| {
            let mut letters = vec![Letter::I; n];
            letters[a - 1] = Letter::X;
            if a > 1 {
                letters[a - 2] = Letter::Z;
            }
            if a < n {
                letters[a] = Letter::Z;
            }
            PauliWord::from_letters(&letters).expect("non-empty")
        })
        .collect())
}

fn check_state_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::Capacity {
            what: "state vector",
            limit,
            requested: n,
        })
    } else {
        Ok(())
    }
}

/// Applies `Z` to the site at index bit `bit` of an unnormalized vector.
fn phase_flip(v: &StateVector, bit: usize) -> StateVector {
    let amps = v
        .amplitudes
        .iter()
        .enumerate()
        .map(|(idx, a)| if idx >> bit & 1 == 1 { -a } else { *a })
        .collect();
    StateVector::raw(v.n, amps)
}

/// `2^{-n/2} ⊗_{a=1}^{n} (|0⟩_a + |1⟩_a Z_{a+1})` with `Z_{n+1} = 1`.
pub fn build_cluster_state(n: usize) -> Result<StateVector> {
    build_cluster_state_with_limit(n, DEFAULT_STATEVECTOR_LIMIT)
}

pub fn build_cluster_state_with_limit(n: usize, limit: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::Domain("cluster state needs n >= 1".into()));
    }
    check_state_limit(n, limit)?;
    let zero = Ket::Zero.state();
    let one = Ket::One.state();
    // Rightmost factor first; each new site prepends and flips its right neighbour.
    let mut psi = &zero + &one;
    for _ in (1..n).rev() {
        let flipped = phase_flip(&psi, psi.n - 1);
        psi = &zero.kron(&psi) + &one.kron(&flipped);
    }
    (0.5f64.powf(n as f64 / 2.0) * &psi).normalized_checked()
}

/// The reversed product `2^{-n/2} ⊗_{a=n}^{1} (|0⟩_a + |1⟩_a Z_{a-1})` with `Z_0 = 1`.
pub fn build_cluster_state_reversed(n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::Domain("cluster state needs n >= 1".into()));
    }
    check_state_limit(n, DEFAULT_STATEVECTOR_LIMIT)?;
    let zero = Ket::Zero.state();
    let one = Ket::One.state();
    let mut psi = &zero + &one;
    for _ in 1..n {
        let flipped = phase_flip(&psi, 0);
        psi = &psi.kron(&zero) + &flipped.kron(&one);
    }
    (0.5f64.powf(n as f64 / 2.0) * &psi).normalized_checked()
}

/// Site masks of a word re-expressed in index-bit order.
fn index_masks(p: &PauliWord) -> (usize, usize) {
    let n = p.n();
    let mut x = 0usize;
    let mut z = 0usize;
    for a in 1..=n {
        let bit = 1usize << (n - a);
        let site = 1u64 << (a - 1);
        if p.x_mask() & site != 0 {
            x |= bit;
        }
        if p.z_mask() & site != 0 {
            z |= bit;
        }
    }
    (x, z)
}

fn apply_raw(p: &PauliWord, psi: &StateVector) -> StateVector {
    let (x, z) = index_masks(p);
    // Y = i X Z, so the word is i^(phase + #Y) X^x Z^z.
    let ys = (p.x_mask() & p.z_mask()).count_ones() as u8;
    let scalar = phase_value((p.phase_exp() + ys % 4) % 4);
    let mut out = vec![Complex64::new(0.0, 0.0); psi.amplitudes.len()];
    for (b, a) in psi.amplitudes.iter().enumerate() {
        let sign = if (z & b).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        out[b ^ x] += scalar * a * sign;
    }
    StateVector::raw(psi.n, out)
}

pub fn apply_pauli(p: &PauliWord, psi: &StateVector) -> Result<StateVector> {
    check_dims(p.n(), psi.n)?;
    Ok(apply_raw(p, psi))
}

/// `⟨ψ|p|ψ⟩`.
pub fn expectation(p: &PauliWord, psi: &StateVector) -> Result<Complex64> {
    let moved = apply_pauli(p, psi)?;
    psi.inner(&moved)
}

/// `‖pψ − λψ‖ < 1e-9` for a Hermitian word and `λ = ±1`.
pub fn eigenstate_check(p: &PauliWord, psi: &StateVector, eigenvalue: i8) -> Result<bool> {
    if !p.is_hermitian() {
        return Err(Error::Domain(format!("{p} is not Hermitian")));
    }
    if eigenvalue != 1 && eigenvalue != -1 {
        return Err(Error::Domain(format!("eigenvalue {eigenvalue} is not ±1")));
    }
    let moved = apply_pauli(p, psi)?;
    Ok(moved.approx_eq(&(eigenvalue as f64 * psi), STATE_TOL))
}

/// `(|+⟩′, |−⟩′)` for the tail or `(|+⟩″, |−⟩″)` for the head, on two qubits.
pub fn primed_basis_vectors(side: Side) -> (StateVector, StateVector) {
    use Ket::*;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = match side {
        Side::Tail => (
            StateVector::product(&[Zero, Plus]),
            StateVector::product(&[One, Minus]),
        ),
        Side::Head => (
            StateVector::product(&[Plus, Zero]),
            StateVector::product(&[Minus, One]),
        ),
    };
    (h * &(&a + &b), h * &(&a + &(-1.0 * &b)))
}

/// `(|+⟩, |−⟩)` of a regrouped segment of `len` sites: the segment's own
/// cluster state and that state with `Z` on the site facing the rest of the chain.
///
/// Agrees with [`primed_basis_vectors`] for `len == 2`.
pub fn segment_basis(len: usize, side: Side) -> Result<(StateVector, StateVector)> {
    if len == 1 {
        return Ok((Ket::Plus.state(), Ket::Minus.state()));
    }
    let plus = build_cluster_state(len)?;
    let boundary = match side {
        Side::Tail => 1,
        Side::Head => len,
    };
    let minus = apply_pauli(&PauliWord::single(len, boundary, Letter::Z)?, &plus)?;
    Ok((plus, minus))
}

/// Logical `|0⟩, |1⟩` of a regrouped pair: `(|+⟩ ± |−⟩)/√2` in the primed basis.
fn primed_computational(side: Side) -> (StateVector, StateVector) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (plus, minus) = primed_basis_vectors(side);
    (h * &(&plus + &minus), h * &(&plus + &(-1.0 * &minus)))
}

fn sum_terms(terms: &[(f64, StateVector)]) -> StateVector {
    let mut acc = terms[0].0 * &terms[0].1;
    for (c, t) in &terms[1..] {
        acc = &acc + &(*c * t);
    }
    acc
}

/// Explicit four- and five-qubit regroupings.
fn literal_decomposition(n: usize, side: Side) -> Option<StateVector> {
    use Ket::*;
    let k = |kets: &[Ket]| StateVector::product(kets);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match (n, side) {
        (4, Side::Tail) => {
            let (p, m) = primed_basis_vectors(Side::Tail);
            Some(sum_terms(&[
                (h, k(&[Plus, Zero]).kron(&p)),
                (h, k(&[Minus, One]).kron(&m)),
            ]))
        }
        (4, Side::Head) => {
            let (p, m) = primed_basis_vectors(Side::Head);
            Some(sum_terms(&[
                (h, p.kron(&k(&[Zero, Plus]))),
                (h, m.kron(&k(&[One, Minus]))),
            ]))
        }
        (5, Side::Head) => {
            let (p, m) = primed_basis_vectors(Side::Head);
            Some(sum_terms(&[
                (0.5, p.kron(&k(&[Zero, Plus, Zero]))),
                (0.5, p.kron(&k(&[Zero, Minus, One]))),
                (0.5, m.kron(&k(&[One, Minus, Zero]))),
                (0.5, m.kron(&k(&[One, Plus, One]))),
            ]))
        }
        (5, Side::Tail) => {
            let (l0, l1) = primed_computational(Side::Tail);
            Some(sum_terms(&[
                (0.5, k(&[Plus, Zero, Plus]).kron(&l0)),
                (0.5, k(&[Plus, Zero, Minus]).kron(&l1)),
                (0.5, k(&[Minus, One, Minus]).kron(&l0)),
                (0.5, k(&[Minus, One, Plus]).kron(&l1)),
            ]))
        }
        _ => None,
    }
}

/// `|φ_{n-1}⟩` with its end site replaced by the regrouped pair.
pub fn projected_state(n: usize, side: Side) -> Result<StateVector> {
    if n < 3 {
        return Err(Error::Domain(format!("regrouping needs n >= 3, got {n}")));
    }
    let smaller = build_cluster_state(n - 1)?;
    let (l0, l1) = primed_computational(side);
    let m = n - 1;
    let mut out = StateVector::raw(n, vec![Complex64::new(0.0, 0.0); 1 << n]);
    for (idx, a) in smaller.amplitudes.iter().enumerate() {
        let term = match side {
            Side::Tail => {
                let pair = if idx & 1 == 0 { &l0 } else { &l1 };
                StateVector::basis(m - 1, idx >> 1)?.kron(pair)
            }
            Side::Head => {
                let pair = if idx >> (m - 1) & 1 == 0 { &l0 } else { &l1 };
                pair.kron(&StateVector::basis(m - 1, idx & ((1 << (m - 1)) - 1))?)
            }
        };
        out = &out + &(*a * &term);
    }
    out.normalized_checked()
}

/// Rebuilds `|φ_n⟩` from the regrouped-pair expressions and compares.
///
/// For `n = 4, 5` the explicit superpositions are checked; every `n` also
/// checks the recursive regrouping of `|φ_{n-1}⟩`.
pub fn decomposition_check(n: usize, side: Side) -> Result<bool> {
    decomposition_check_with_limit(n, side, DEFAULT_STATEVECTOR_LIMIT)
}

pub fn decomposition_check_with_limit(n: usize, side: Side, limit: usize) -> Result<bool> {
    if n < 4 {
        return Err(Error::Domain(format!(
            "decomposition needs n >= 4, got {n}"
        )));
    }
    check_state_limit(n, limit)?;
    let target = build_cluster_state_with_limit(n, limit)?;
    if let Some(lit) = literal_decomposition(n, side) {
        if !lit.approx_eq(&target, STATE_TOL) {
            return Ok(false);
        }
    }
    Ok(projected_state(n, side)?.approx_eq(&target, STATE_TOL))
}

/// `α(|+0+0⟩ + |−1+1⟩) + β(|+0−1⟩ + |−1−0⟩)` with `|α|² + |β|² = 1/2`.
pub fn build_phi_family(alpha: Complex64, beta: Complex64) -> Result<StateVector> {
    use Ket::*;
    let constraint = alpha.norm_sqr() + beta.norm_sqr();
    if (constraint - 0.5).abs() > STATE_TOL {
        return Err(Error::Domain(format!(
            "|α|² + |β|² = {constraint}, expected 1/2"
        )));
    }
    let a = &StateVector::product(&[Plus, Zero, Plus, Zero])
        + &StateVector::product(&[Minus, One, Plus, One]);
    let b = &StateVector::product(&[Plus, Zero, Minus, One])
        + &StateVector::product(&[Minus, One, Minus, Zero]);
    (&(alpha * &a) + &(beta * &b)).normalized_checked()
}
