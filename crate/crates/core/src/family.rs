//! Pauli-like operators on regrouped chain segments.
//!
//! A tail segment `k..=n` carries the primed sets `X′, Y′, Z′, I′`, a head
//! segment `1..=j` the double-primed sets `X″, Y″, Z″, I″`. Both are built
//! by growing the segment one site at a time from a single-qubit base case.
//! Every set has `2^{L-1}` members for a segment of length `L`, and any
//! `(y, z)` pair drawn from the sets generates a Pauli-like triple with
//! `x = -i y z`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::pauli::{Letter, PauliWord, StabilizerProduct};
use crate::state::{apply_pauli, stabilizer_generators, StateVector, STATE_TOL};
use crate::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "side", rename_all = "lowercase")]
pub enum Segment {
    /// Sites `1..=end`.
    Head { end: usize },
    /// Sites `start..=n`.
    Tail { start: usize, n: usize },
}

impl Segment {
    pub fn side(&self) -> Side {
        match self {
            Segment::Head { .. } => Side::Head,
            Segment::Tail { .. } => Side::Tail,
        }
    }

    pub fn first(&self) -> usize {
        match *self {
            Segment::Head { .. } => 1,
            Segment::Tail { start, .. } => start,
        }
    }

    pub fn last(&self) -> usize {
        match *self {
            Segment::Head { end } => end,
            Segment::Tail { n, .. } => n,
        }
    }

    pub fn len(&self) -> usize {
        self.last() + 1 - self.first()
    }

    pub fn is_empty(&self) -> bool {
        self.last() < self.first()
    }
}

/// The four operator sets of one segment, in generation order.
///
/// Words span `width` qubits with identities outside the segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimedFamily {
    pub segment: Segment,
    pub width: usize,
    pub x_set: Vec<PauliWord>,
    pub y_set: Vec<PauliWord>,
    pub z_set: Vec<PauliWord>,
    pub i_set: Vec<PauliWord>,
}

fn dedup_ordered(words: Vec<PauliWord>) -> Vec<PauliWord> {
    let mut out: Vec<PauliWord> = Vec::with_capacity(words.len());
    for w in words {
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

fn on(width: usize, site: usize, letter: Letter) -> PauliWord {
    PauliWord::single(width, site, letter).expect("site inside word")
}

/// `X′, Y′, Z′, I′` on sites `k..=n`.
pub fn primed_family_tail(k: usize, n: usize) -> Result<PrimedFamily> {
    if k == 0 || k > n {
        return Err(Error::Index { index: k, max: n });
    }
    if n > crate::pauli::MAX_QUBITS {
        return Err(Error::Capacity {
            what: "Pauli word",
            limit: crate::pauli::MAX_QUBITS,
            requested: n,
        });
    }
    let l = |site, letter| on(n, site, letter);
    let mut fam = PrimedFamily {
        segment: Segment::Tail { start: n, n },
        width: n,
        x_set: vec![l(n, Letter::X)],
        y_set: vec![l(n, Letter::Y)],
        z_set: vec![l(n, Letter::Z)],
        i_set: vec![PauliWord::identity(n)],
    };
    for site in (k..n).rev() {
        let (xk, yk, zk) = (l(site, Letter::X), l(site, Letter::Y), l(site, Letter::Z));
        let prepend = |head: &PauliWord, set: &[PauliWord]| -> Vec<PauliWord> {
            set.iter().map(|w| head * w).collect()
        };
        let y: Vec<_> = prepend(&xk.negate(), &fam.y_set)
            .into_iter()
            .chain(prepend(&yk, &fam.z_set))
            .collect();
        let z: Vec<_> = fam
            .x_set
            .iter()
            .copied()
            .chain(prepend(&zk, &fam.i_set))
            .collect();
        let i: Vec<_> = prepend(&zk, &fam.x_set)
            .into_iter()
            .chain(fam.i_set.iter().copied())
            .collect();
        let x: Vec<_> = prepend(&xk, &fam.z_set)
            .into_iter()
            .chain(prepend(&yk, &fam.y_set))
            .collect();
        fam = PrimedFamily {
            segment: Segment::Tail { start: site, n },
            width: n,
            x_set: dedup_ordered(x),
            y_set: dedup_ordered(y),
            z_set: dedup_ordered(z),
            i_set: dedup_ordered(i),
        };
    }
    Ok(fam)
}

/// `X″, Y″, Z″, I″` on sites `1..=j`, as `j`-qubit words.
pub fn primed_family_head(j: usize) -> Result<PrimedFamily> {
    if j == 0 || j > crate::pauli::MAX_QUBITS {
        return Err(Error::Domain(format!("head segment end {j} out of range")));
    }
    let mut fam = PrimedFamily {
        segment: Segment::Head { end: 1 },
        width: 1,
        x_set: vec![on(1, 1, Letter::X)],
        y_set: vec![on(1, 1, Letter::Y)],
        z_set: vec![on(1, 1, Letter::Z)],
        i_set: vec![PauliWord::identity(1)],
    };
    for site in 2..=j {
        let prev = fam.widen(site)?;
        let (xj, yj, zj) = (
            on(site, site, Letter::X),
            on(site, site, Letter::Y),
            on(site, site, Letter::Z),
        );
        let append = |set: &[PauliWord], tail: &PauliWord| -> Vec<PauliWord> {
            set.iter().map(|w| w * tail).collect()
        };
        let y: Vec<_> = append(&prev.z_set, &yj)
            .into_iter()
            .chain(append(&prev.y_set, &xj).into_iter().map(|w| w.negate()))
            .collect();
        let z: Vec<_> = prev
            .x_set
            .iter()
            .copied()
            .chain(append(&prev.i_set, &zj))
            .collect();
        let i: Vec<_> = append(&prev.x_set, &zj)
            .into_iter()
            .chain(prev.i_set.iter().copied())
            .collect();
        let x: Vec<_> = append(&prev.z_set, &xj)
            .into_iter()
            .chain(append(&prev.y_set, &yj))
            .collect();
        fam = PrimedFamily {
            segment: Segment::Head { end: site },
            width: site,
            x_set: dedup_ordered(x),
            y_set: dedup_ordered(y),
            z_set: dedup_ordered(z),
            i_set: dedup_ordered(i),
        };
    }
    Ok(fam)
}

impl PrimedFamily {
    /// Pads every word with identities up to `width` qubits.
    pub fn widen(&self, width: usize) -> Result<PrimedFamily> {
        if matches!(self.segment, Segment::Tail { .. }) && width != self.width {
            return Err(Error::Domain("tail families are anchored at site n".into()));
        }
        let w = |set: &[PauliWord]| {
            set.iter()
                .map(|p| p.widen(width))
                .collect::<Result<Vec<_>>>()
        };
        Ok(PrimedFamily {
            segment: self.segment,
            width,
            x_set: w(&self.x_set)?,
            y_set: w(&self.y_set)?,
            z_set: w(&self.z_set)?,
            i_set: w(&self.i_set)?,
        })
    }

    /// `(y, z, -i y z)` for every pair drawn from the sets.
    pub fn triples(&self) -> Vec<(PauliWord, PauliWord, PauliWord)> {
        let mut out = Vec::with_capacity(self.y_set.len() * self.z_set.len());
        for y in &self.y_set {
            for z in &self.z_set {
                out.push((*y, *z, (y * z).scale_i(3)));
            }
        }
        out
    }

    /// Words restricted to the segment sites, phase kept.
    pub fn segment_word(&self, w: &PauliWord) -> PauliWord {
        w.restrict(self.segment.first(), self.segment.last())
    }
}

/// Pauli commutator identities for every generated triple.
///
/// Checks `x, y, z` square to `+I`, anticommute pairwise, and satisfy
/// `[x,y] = 2iz`, `[y,z] = 2ix`, `[z,x] = 2iy`; every `x` lies in `x_set`
/// and every member of `x_set` arises; every member of `i_set` squares to
/// `+I` and commutes with the triple.
pub fn family_algebra_check(f: &PrimedFamily) -> bool {
    let id = PauliWord::identity(f.width);
    let hermitian = |w: &PauliWord| w.is_hermitian() && w * w == id;
    let all_sets = [&f.x_set, &f.y_set, &f.z_set, &f.i_set];
    if all_sets.iter().any(|s| s.iter().any(|w| !hermitian(w))) {
        return false;
    }
    let mut produced = Vec::new();
    for (y, z, x) in f.triples() {
        if !f.x_set.contains(&x) {
            return false;
        }
        produced.push(x);
        let anti = |a: &PauliWord, b: &PauliWord| a * b == (b * a).negate();
        if !(anti(&x, &y) && anti(&y, &z) && anti(&z, &x)) {
            return false;
        }
        // With anticommuting factors [a, b] = 2ab, so the identities reduce to ab = i c.
        if x * y != z.scale_i(1) || y * z != x.scale_i(1) || z * x != y.scale_i(1) {
            return false;
        }
        for i in &f.i_set {
            if !(i.commutes(&x).unwrap_or(false)
                && i.commutes(&y).unwrap_or(false)
                && i.commutes(&z).unwrap_or(false))
            {
                return false;
            }
        }
    }
    f.x_set.iter().all(|x| produced.contains(x))
}

/// Action rules of the Pauli-like operators on a regrouped basis:
/// `X|±⟩ = ±|±⟩`, `Y|±⟩ = ∓i|∓⟩`, `Z|±⟩ = |∓⟩`, `I|±⟩ = |±⟩`.
///
/// The basis vectors live on the segment sites only.
pub fn basis_action_check(f: &PrimedFamily, basis: (&StateVector, &StateVector)) -> Result<bool> {
    let (plus, minus) = basis;
    check_dims(f.segment.len(), plus.n())?;
    check_dims(f.segment.len(), minus.n())?;
    let i = num_complex::Complex64::new(0.0, 1.0);
    let acts = |w: &PauliWord, input: &StateVector, expect: StateVector| -> Result<bool> {
        let out = apply_pauli(&f.segment_word(w), input)?;
        Ok(out.approx_eq(&expect, STATE_TOL))
    };
    for x in &f.x_set {
        if !(acts(x, plus, plus.clone())? && acts(x, minus, -1.0 * minus)?) {
            return Ok(false);
        }
    }
    for y in &f.y_set {
        if !(acts(y, plus, -i * minus)? && acts(y, minus, i * plus)?) {
            return Ok(false);
        }
    }
    for z in &f.z_set {
        if !(acts(z, plus, minus.clone())? && acts(z, minus, plus.clone())?) {
            return Ok(false);
        }
    }
    for id in &f.i_set {
        if !(acts(id, plus, plus.clone())? && acts(id, minus, minus.clone())?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `2^{j-1}` generator subsets of `{1..j-1}`, in binary counting order;
/// with `reflected`, index `i` is replaced by `n + 1 - i`.
pub fn subset_products(j: usize, n: usize, reflected: bool) -> Result<Vec<StabilizerProduct>> {
    if j == 0 || j > n {
        return Err(Error::Index { index: j, max: n });
    }
    let k = j - 1;
    Ok((0u64..1 << k)
        .map(|mask| {
            StabilizerProduct::new(
                n,
                (1..=k).filter(|i| mask >> (i - 1) & 1 == 1).map(|i| {
                    if reflected {
                        n + 1 - i
                    } else {
                        i
                    }
                }),
            )
        })
        .collect())
}

/// The set `A_j` (or its mirror image) resolved against the chain generators.
pub fn stabilizer_subset_products(j: usize, n: usize, reflected: bool) -> Result<Vec<PauliWord>> {
    let gens = stabilizer_generators(n)?;
    subset_products(j, n, reflected)?
        .iter()
        .map(|sp| sp.resolve(&gens))
        .collect()
}

fn is_bijection(anchor: &PauliWord, group: &[PauliWord], set: &[PauliWord]) -> bool {
    let image: Vec<PauliWord> = group.iter().map(|a| anchor * a).collect();
    let distinct = dedup_ordered(image.clone());
    distinct.len() == image.len()
        && image.len() == set.len()
        && image.iter().all(|w| set.contains(w))
}

/// Every family member is `anchor · a` for exactly one `a` in the subset
/// products, with exact phase.
///
/// Head segment `1..=end`: `Y″ ∈ Z_{j-1}Y_j A_j`, `Z″ ∈ Z_j A_j`,
/// `I″ ∈ A_j`, `X″ ∈ Z_{j-1}X_j A_j`. Tail segment `k..=n` of length `L`:
/// `Y′ ∈ Y_k Z_{k+1} A′_L`, `Z′ ∈ Z_k A′_L`, `I′ ∈ A′_L`,
/// `X′ ∈ X_k Z_{k+1} A′_L`.
pub fn membership_check(segment: Segment, n: usize) -> Result<bool> {
    let letter_word = |entries: &[(usize, Letter)]| -> PauliWord {
        entries
            .iter()
            .filter(|(site, _)| *site >= 1 && *site <= n)
            .fold(PauliWord::identity(n), |acc, &(site, l)| {
                acc * on(n, site, l)
            })
    };
    let (family, group, anchors) = match segment {
        Segment::Head { end } => {
            if end > n {
                return Err(Error::Index { index: end, max: n });
            }
            let fam = primed_family_head(end)?.widen(n)?;
            let group = stabilizer_subset_products(end, n, false)?;
            let before = end.wrapping_sub(1);
            let anchors = [
                letter_word(&[(before, Letter::Z), (end, Letter::X)]),
                letter_word(&[(before, Letter::Z), (end, Letter::Y)]),
                letter_word(&[(end, Letter::Z)]),
                PauliWord::identity(n),
            ];
            (fam, group, anchors)
        }
        Segment::Tail { start, n: tn } => {
            if tn != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: tn,
                });
            }
            let fam = primed_family_tail(start, n)?;
            let group = stabilizer_subset_products(n + 1 - start, n, true)?;
            let anchors = [
                letter_word(&[(start, Letter::X), (start + 1, Letter::Z)]),
                letter_word(&[(start, Letter::Y), (start + 1, Letter::Z)]),
                letter_word(&[(start, Letter::Z)]),
                PauliWord::identity(n),
            ];
            (fam, group, anchors)
        }
    };
    let sets = [&family.x_set, &family.y_set, &family.z_set, &family.i_set];
    let ok = anchors
        .iter()
        .zip(sets)
        .all(|(anchor, set)| is_bijection(anchor, &group, set));
    Ok(ok)
}
