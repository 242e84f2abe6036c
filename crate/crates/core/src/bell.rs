//! Bell operators built from the GHZ forms and their classical bounds.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{hermitian_spectrum, Spectrum};
use crate::error::{check_dims, Error, Result};
use crate::family::{primed_family_head, primed_family_tail, subset_products};
use crate::forms::grouping_range;
use crate::pauli::{Coeff, Letter, PauliSum, PauliWord, StabilizerProduct, DEFAULT_DENSE_LIMIT};
use crate::state::{expectation, stabilizer_generators, StateVector};

/// Largest chain for the per-qubit hidden-variable scan (`2^{3n}` assignments).
pub const DEFAULT_LHV_LIMIT: usize = 7;

/// Cap on the number of ±1 symbols in any exhaustive scan.
pub const MAX_LHV_SYMBOLS: usize = 30;

const SPECTRAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BellTerm {
    pub coeff: i8,
    /// Unsigned Hermitian word.
    pub word: PauliWord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factored {
    pub e1: PauliWord,
    pub e2: PauliWord,
    pub e3: PauliWord,
    pub j: usize,
}

/// Index of a `(Z, Y)` pair within a primed family: `z` into `z_set`, `y` into `y_set`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Choice {
    pub z: usize,
    pub y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellOperator {
    pub n: usize,
    pub terms: Vec<BellTerm>,
    pub factored: Option<Factored>,
}

impl BellOperator {
    pub fn from_sum(sum: &PauliSum) -> Result<Self> {
        let terms = sum
            .iter()
            .map(|(word, c)| match (c.re, c.im) {
                (1, 0) => Ok(BellTerm { coeff: 1, word }),
                (-1, 0) => Ok(BellTerm { coeff: -1, word }),
                _ => Err(Error::Domain(format!(
                    "coefficient {c} of {word} is not ±1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BellOperator {
            n: sum.n(),
            terms,
            factored: None,
        })
    }

    pub fn to_sum(&self) -> PauliSum {
        let mut s = PauliSum::zero(self.n);
        for t in &self.terms {
            s.add_word(Coeff::new(t.coeff as i64, 0), &t.word);
        }
        s
    }

    pub fn to_matrix_with_limit(&self, limit: usize) -> Result<DMatrix<Complex64>> {
        let d = 1usize << self.n;
        let mut m = DMatrix::zeros(d, d);
        for t in &self.terms {
            m += t.word.to_matrix_with_limit(limit)? * Complex64::new(t.coeff as f64, 0.0);
        }
        Ok(m)
    }

    pub fn spectrum_with_limit(&self, limit: usize) -> Result<Spectrum> {
        hermitian_spectrum(&self.to_matrix_with_limit(limit)?)
    }

    fn factored(&self) -> Result<&Factored> {
        self.factored
            .as_ref()
            .ok_or_else(|| Error::Domain("operator carries no factored form".into()))
    }

    /// `(1 + E′₁) E′₂ (1 + E′₃)` expanded.
    pub fn expand_factored(&self) -> Result<PauliSum> {
        let f = self.factored()?;
        let one = PauliSum::identity(self.n);
        let s = |w: &PauliWord| PauliSum::from_words(self.n, [(1, w)]);
        one.add(&s(&f.e1))
            .multiply(&s(&f.e2))?
            .multiply(&one.add(&s(&f.e3)))
    }

    /// The factored triple reproduces the terms and obeys the Pauli-like algebra.
    pub fn factored_consistent(&self) -> Result<bool> {
        let f = self.factored()?;
        let triple = [f.e1, f.e2, f.e3];
        let id = PauliWord::identity(self.n);
        for a in &triple {
            if !a.is_hermitian() || a * a != id {
                return Ok(false);
            }
            for b in &triple {
                if !a.commutes(b)? {
                    return Ok(false);
                }
            }
        }
        Ok(self.expand_factored()? == self.to_sum() && self.terms.len() == 4)
    }
}

fn check_grouping(n: usize, j: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "Bell operators need n >= 3, got {n}"
        )));
    }
    if !grouping_range(n).contains(&j) {
        return Err(Error::Domain(format!(
            "grouping j = {j} outside {}..={} for n = {n}",
            n / 2,
            n - 2
        )));
    }
    Ok(())
}

fn pick(set: &[PauliWord], index: usize) -> Result<PauliWord> {
    set.get(index).copied().ok_or(Error::Index {
        index,
        max: set.len().saturating_sub(1),
    })
}

/// `Z″XZ′ + Y″YZ′ − Y″XY′ + Z″YY′` for the grouping `(1..j), j+1, (j+2..n)`.
pub fn standard_bell_operator(
    n: usize,
    j: usize,
    head: Choice,
    tail: Choice,
) -> Result<BellOperator> {
    check_grouping(n, j)?;
    let hf = primed_family_head(j)?.widen(n)?;
    let tf = primed_family_tail(j + 2, n)?;
    let (hz, hy) = (pick(&hf.z_set, head.z)?, pick(&hf.y_set, head.y)?);
    let (tz, ty) = (pick(&tf.z_set, tail.z)?, pick(&tf.y_set, tail.y)?);
    let mid = |l| PauliWord::single(n, j + 1, l);
    let (mx, my, mz) = (mid(Letter::X)?, mid(Letter::Y)?, mid(Letter::Z)?);
    let signed = [
        (1i8, hz * mx * tz),
        (1, hy * my * tz),
        (-1, hy * mx * ty),
        (1, hz * my * ty),
    ];
    let terms = signed
        .iter()
        .map(|&(c, w)| {
            let s = w
                .sign()
                .ok_or_else(|| Error::Domain(format!("term {w} is not Hermitian")))?;
            Ok(BellTerm {
                coeff: c * s,
                word: w.unsigned(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // X = -i Y Z on both segments.
    let hx = (hy * hz).scale_i(3);
    let tx = (ty * tz).scale_i(3);
    let factored = Factored {
        e1: hx * mz,
        e2: hz * mx * tz,
        e3: mz * tx,
        j,
    };
    Ok(BellOperator {
        n,
        terms,
        factored: Some(factored),
    })
}

/// Every standard operator of an `n`-site chain, over all groupings and choices.
pub fn all_standard_operators(n: usize) -> Result<Vec<BellOperator>> {
    let mut out = Vec::new();
    for j in grouping_range(n) {
        let hf = primed_family_head(j)?;
        let tf = primed_family_tail(j + 2, n)?;
        for hz in 0..hf.z_set.len() {
            for hy in 0..hf.y_set.len() {
                for tz in 0..tf.z_set.len() {
                    for ty in 0..tf.y_set.len() {
                        out.push(standard_bell_operator(
                            n,
                            j,
                            Choice { z: hz, y: hy },
                            Choice { z: tz, y: ty },
                        )?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `B² = 4(1 + E′₁)(1 + E′₃)` in the algebra, plus top eigenvalue 4 when dense is feasible.
pub fn bell_square_check(b: &BellOperator) -> Result<bool> {
    bell_square_check_with_limit(b, DEFAULT_DENSE_LIMIT)
}

pub fn bell_square_check_with_limit(b: &BellOperator, dense_limit: usize) -> Result<bool> {
    let f = b.factored()?;
    let sum = b.to_sum();
    let one = PauliSum::identity(b.n);
    let s = |w: &PauliWord| PauliSum::from_words(b.n, [(1, w)]);
    let rhs = one.add(&s(&f.e1)).multiply(&one.add(&s(&f.e3)))?.scale(4);
    if sum.multiply(&sum)? != rhs {
        return Ok(false);
    }
    if b.n <= dense_limit {
        let top = b.spectrum_with_limit(dense_limit)?.max();
        return Ok((top - 4.0).abs() <= SPECTRAL_TOL);
    }
    Ok(true)
}

/// `Σ coeff ⟨ψ|word|ψ⟩`.
pub fn quantum_value(b: &BellOperator, psi: &StateVector) -> Result<f64> {
    check_dims(b.n, psi.n())?;
    let mut total = Complex64::new(0.0, 0.0);
    for t in &b.terms {
        total += expectation(&t.word, psi)? * t.coeff as f64;
    }
    Ok(total.re)
}

/// Largest `|Σ coeff · ∏ parties|` over ±1 values of each party's local observables.
///
/// `parties` lists inclusive site ranges; identity restrictions count as `+1`.
pub fn lhv_partition_bound(
    n: usize,
    terms: &[BellTerm],
    parties: &[(usize, usize)],
) -> Result<i64> {
    let mut symbols: BTreeMap<(usize, PauliWord), usize> = BTreeMap::new();
    let mut term_masks = Vec::with_capacity(terms.len());
    for t in terms {
        check_dims(n, t.word.n())?;
        let mut mask = 0u64;
        for (p, &(first, last)) in parties.iter().enumerate() {
            let local = t.word.restrict(first, last);
            if local.is_identity() {
                continue;
            }
            let next = symbols.len();
            let id = *symbols.entry((p, local)).or_insert(next);
            mask |= 1 << id;
        }
        term_masks.push((t.coeff as i64, mask));
    }
    let count = symbols.len();
    if count > MAX_LHV_SYMBOLS {
        return Err(Error::Capacity {
            what: "hidden-variable symbols",
            limit: MAX_LHV_SYMBOLS,
            requested: count,
        });
    }
    Ok(scan(&term_masks, count, true))
}

/// Max over assignments of the signed sum (or of its absolute value).
fn scan(term_masks: &[(i64, u64)], symbols: usize, absolute: bool) -> i64 {
    (0u64..1 << symbols)
        .into_par_iter()
        .map(|assign| {
            let v: i64 = term_masks
                .iter()
                .map(|&(c, m)| {
                    if (assign & m).count_ones() % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .sum();
            if absolute {
                v.abs()
            } else {
                v
            }
        })
        .max()
        .unwrap_or(0)
}

/// Bound over the head / middle / tail tripartition of the factored grouping.
pub fn lhv_party_bound(b: &BellOperator) -> Result<i64> {
    let j = b.factored()?.j;
    lhv_partition_bound(b.n, &b.terms, &[(1, j), (j + 1, j + 1), (j + 2, b.n)])
}

/// Max signed sum over ±1 values for every `(site, letter)` pair.
pub fn lhv_qubit_bound(b: &BellOperator) -> Result<i64> {
    lhv_qubit_bound_with_limit(b, DEFAULT_LHV_LIMIT)
}

pub fn lhv_qubit_bound_with_limit(b: &BellOperator, limit: usize) -> Result<i64> {
    if b.n > limit {
        return Err(Error::Capacity {
            what: "per-qubit hidden-variable scan",
            limit,
            requested: b.n,
        });
    }
    let mut symbols: BTreeMap<(usize, Letter), usize> = BTreeMap::new();
    let mut term_masks = Vec::with_capacity(b.terms.len());
    for t in &b.terms {
        let mut mask = 0u64;
        for site in 1..=b.n {
            let l = t.word.letter(site);
            if l == Letter::I {
                continue;
            }
            let next = symbols.len();
            mask |= 1 << *symbols.entry((site, l)).or_insert(next);
        }
        term_masks.push((t.coeff as i64, mask));
    }
    if symbols.len() > MAX_LHV_SYMBOLS {
        return Err(Error::Capacity {
            what: "hidden-variable symbols",
            limit: MAX_LHV_SYMBOLS,
            requested: symbols.len(),
        });
    }
    Ok(scan(&term_masks, symbols.len(), false))
}

/// One row of the membership table for a grouping `(1..j), j+1, (j+2..n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipRow {
    pub n: usize,
    pub j: usize,
    pub e1: Vec<StabilizerProduct>,
    pub e2: Vec<StabilizerProduct>,
    pub e3: Vec<StabilizerProduct>,
    /// Site swaps `(a, n+1-a)` taking this grouping to its mirror; empty when
    /// the grouping is its own mirror.
    pub mirror: Vec<(usize, usize)>,
}

impl MembershipRow {
    /// `(1,2),3,(4,5)` style label; one-site parties print bare.
    pub fn grouping_label(&self) -> String {
        let part = |a: usize, b: usize| {
            if a == b {
                a.to_string()
            } else {
                format!("({a},{b})")
            }
        };
        format!(
            "{},{},{}",
            part(1, self.j),
            self.j + 1,
            part(self.j + 2, self.n)
        )
    }
}

fn by_size_then_sites(v: &mut [StabilizerProduct]) {
    v.sort_by(|a, b| {
        let ka: Vec<usize> = a.subset.iter().copied().collect();
        let kb: Vec<usize> = b.subset.iter().copied().collect();
        ka.len().cmp(&kb.len()).then(ka.cmp(&kb))
    });
}

fn with_generator(n: usize, g: usize, set: &[StabilizerProduct]) -> Vec<StabilizerProduct> {
    set.iter()
        .map(|sp| StabilizerProduct::new(n, sp.subset.iter().copied().chain([g])))
        .collect()
}

/// `E′₁ ∈ E_j A_j`, `E′₂ ∈ E_{j+1} A_j ∗ A′_{n−j−1}`, `E′₃ ∈ E_{j+2} A′_{n−j−1}` for each grouping.
pub fn table_iii(n: usize) -> Result<Vec<MembershipRow>> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "Bell operators need n >= 3, got {n}"
        )));
    }
    let mut rows = Vec::new();
    for j in grouping_range(n) {
        let head = subset_products(j, n, false)?;
        let tail = subset_products(n - j - 1, n, true)?;
        let mut e1 = with_generator(n, j, &head);
        let mut e3 = with_generator(n, j + 2, &tail);
        let mut e2 = Vec::new();
        for h in &head {
            for t in &tail {
                e2.push(StabilizerProduct::new(
                    n,
                    h.subset.iter().chain(&t.subset).copied().chain([j + 1]),
                ));
            }
        }
        by_size_then_sites(&mut e1);
        by_size_then_sites(&mut e2);
        by_size_then_sites(&mut e3);
        let symmetric = j == n - j - 1;
        let mirror = if symmetric {
            Vec::new()
        } else {
            (1..=n / 2).map(|a| (a, n + 1 - a)).collect()
        };
        rows.push(MembershipRow {
            n,
            j,
            e1,
            e2,
            e3,
            mirror,
        });
    }
    Ok(rows)
}

/// Every standard operator's `E′ᵢ` equals (with sign `+`) a listed generator product.
pub fn table_iii_cross_check(n: usize) -> Result<bool> {
    let gens = stabilizer_generators(n)?;
    let rows = table_iii(n)?;
    for b in all_standard_operators(n)? {
        let f = b.factored()?;
        let Some(row) = rows.iter().find(|r| r.j == f.j) else {
            return Ok(false);
        };
        for (w, set) in [(f.e1, &row.e1), (f.e2, &row.e2), (f.e3, &row.e3)] {
            let resolved: Result<Vec<PauliWord>> = set.iter().map(|sp| sp.resolve(&gens)).collect();
            if !resolved?.contains(&w) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_middle(n: usize, j: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("the chain needs n >= 2, got {n}")));
    }
    if j + 1 > n {
        return Err(Error::Index {
            index: j + 1,
            max: n,
        });
    }
    Ok(())
}

/// `E_{j+1} ∏_{m≠j+1} (1 + E_m)` expanded into `2^{n-1}` signed words.
pub fn grand_bell_operator(n: usize, j: usize) -> Result<BellOperator> {
    check_middle(n, j)?;
    let gens = stabilizer_generators(n)?;
    let one = PauliSum::identity(n);
    let mut acc = PauliSum::from_words(n, [(1, &gens[j])]);
    for (m, g) in gens.iter().enumerate() {
        if m != j {
            acc = acc.multiply(&one.add(&PauliSum::from_words(n, [(1, g)])))?;
        }
    }
    BellOperator::from_sum(&acc)
}

/// `(1 + E_j) Σ_{ω∈A} ω (1 + E_{j+2})` with `A = E_{j+1} A_j ∗ A′_{n−j−1}`;
/// generators outside the chain are left out.
pub fn grand_bell_alternative(n: usize, j: usize) -> Result<PauliSum> {
    check_middle(n, j)?;
    let gens = stabilizer_generators(n)?;
    let one = PauliSum::identity(n);
    let factor = |site: usize| -> PauliSum {
        if (1..=n).contains(&site) {
            one.add(&PauliSum::from_words(n, [(1, &gens[site - 1])]))
        } else {
            one.clone()
        }
    };
    let head = if j >= 1 {
        subset_products(j, n, false)?
    } else {
        vec![StabilizerProduct::new(n, [])]
    };
    let tail = if j + 2 <= n {
        subset_products(n - j - 1, n, true)?
    } else {
        vec![StabilizerProduct::new(n, [])]
    };
    let mut a = PauliSum::zero(n);
    for h in &head {
        for t in &tail {
            let sp =
                StabilizerProduct::new(n, h.subset.iter().chain(&t.subset).copied().chain([j + 1]));
            a.add_word(Coeff::new(1, 0), &sp.resolve(&gens)?);
        }
    }
    factor(j).multiply(&a)?.multiply(&factor(j + 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxEigen {
    pub value: f64,
    pub multiplicity: usize,
    pub matches_state: bool,
}

/// Top eigenvalue, its multiplicity, and whether `ψ` spans the top eigenspace.
pub fn max_eigen_check(b: &BellOperator, psi: &StateVector) -> Result<MaxEigen> {
    max_eigen_check_with_limit(b, psi, DEFAULT_DENSE_LIMIT)
}

pub fn max_eigen_check_with_limit(
    b: &BellOperator,
    psi: &StateVector,
    limit: usize,
) -> Result<MaxEigen> {
    check_dims(b.n, psi.n())?;
    if b.n > limit {
        return Err(Error::Capacity {
            what: "dense spectrum",
            limit,
            requested: b.n,
        });
    }
    let s = b.spectrum_with_limit(limit)?;
    // Eigenvalues of these operators are integers; 1e-6 separates them safely.
    let multiplicity = s.top_multiplicity(1e-6);
    let overlap: f64 = s.vectors[..multiplicity]
        .iter()
        .map(|v| {
            v.iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum();
    Ok(MaxEigen {
        value: s.max(),
        multiplicity,
        matches_state: multiplicity == 1 && overlap >= 1.0 - 1e-9,
    })
}

/// Report record for one operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellReport {
    pub n: usize,
    pub j: usize,
    pub terms: Vec<TermRecord>,
    pub quantum_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhv_party_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhv_qubit_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_identity: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<MaxEigen>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: i8,
    pub pauli: String,
}

/// Limits used while building a [`BellReport`].
#[derive(Clone, Copy, Debug)]
pub struct ReportLimits {
    pub dense: usize,
    pub lhv: usize,
    pub statevector: usize,
}

impl Default for ReportLimits {
    fn default() -> Self {
        ReportLimits {
            dense: DEFAULT_DENSE_LIMIT,
            lhv: DEFAULT_LHV_LIMIT,
            statevector: crate::state::DEFAULT_STATEVECTOR_LIMIT,
        }
    }
}

/// Evaluates `b` against `|φ_n⟩`, skipping (with a note) anything over its limit.
pub fn bell_report(b: &BellOperator, j: usize, limits: ReportLimits) -> Result<BellReport> {
    let mut notes = Vec::new();
    let terms = b
        .terms
        .iter()
        .map(|t| TermRecord {
            coeff: t.coeff,
            pauli: t.word.to_string(),
        })
        .collect();
    let psi = crate::state::build_cluster_state_with_limit(b.n, limits.statevector)?;
    let quantum_value = quantum_value(b, &psi)?;
    let lhv_party_bound = match b.factored {
        Some(_) => Some(lhv_party_bound(b)?),
        None => None,
    };
    let lhv_qubit_bound = match lhv_qubit_bound_with_limit(b, limits.lhv) {
        Ok(v) => Some(v),
        Err(Error::Capacity { limit, .. }) => {
            notes.push(format!(
                "per-qubit bound skipped: n = {} exceeds limit {limit}",
                b.n
            ));
            None
        }
        Err(e) => return Err(e),
    };
    let square_identity = match b.factored {
        Some(_) => Some(bell_square_check_with_limit(b, limits.dense)?),
        None => None,
    };
    let spectrum = if b.n <= limits.dense {
        Some(max_eigen_check_with_limit(b, &psi, limits.dense)?)
    } else {
        notes.push(format!(
            "spectrum skipped: n = {} exceeds dense limit {}",
            b.n, limits.dense
        ));
        None
    };
    Ok(BellReport {
        n: b.n,
        j,
        terms,
        quantum_value,
        lhv_party_bound,
        lhv_qubit_bound,
        square_identity,
        spectrum,
        notes,
    })
}
