//! Signed N-qubit Pauli words in symplectic form.
//!
//! A word is stored as two bit masks plus an exact phase exponent:
//!
//! - `x_mask`: bit `a - 1` set iff site `a` carries an X component
//! - `z_mask`: bit `a - 1` set iff site `a` carries a Z component
//! - `phase_exp`: the overall scalar is `i^phase_exp`
//!
//! Site 1 is the leftmost letter of the string form. The letter at a site
//! decodes as `(0,0) -> I`, `(1,0) -> X`, `(1,1) -> Y`, `(0,1) -> Z`, where
//! `Y` is the Hermitian Pauli matrix itself, not `XZ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

use crate::error::{check_dims, Error, Result};

/// Largest qubit count a word can carry (mask width).
pub const MAX_QUBITS: usize = 64;

/// Default largest qubit count rendered as a dense matrix.
pub const DEFAULT_DENSE_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    /// The 2x2 matrix of this letter.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            Letter::I => [l, o, o, l],
            Letter::X => [o, l, l, o],
            Letter::Y => [o, -i, i, o],
            Letter::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    n: usize,
    x_mask: u64,
    z_mask: u64,
    phase_exp: u8,
}

fn site_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn popcount(v: u64) -> u32 {
    v.count_ones()
}

impl PauliWord {
    /// Builds a word from raw masks. Bits above `n` must be clear.
    pub fn new(n: usize, x_mask: u64, z_mask: u64, phase_exp: u8) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "Pauli word",
                limit: MAX_QUBITS,
                requested: n,
            });
        }
        let valid = site_mask(n);
        if x_mask & !valid != 0 || z_mask & !valid != 0 {
            return Err(Error::Domain(format!(
                "masks {x_mask:#x}/{z_mask:#x} exceed {n} sites"
            )));
        }
        Ok(PauliWord {
            n,
            x_mask,
            z_mask,
            phase_exp: phase_exp % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n),
            "qubit count {n} out of range"
        );
        PauliWord {
            n,
            x_mask: 0,
            z_mask: 0,
            phase_exp: 0,
        }
    }

    /// `letter` on `site` (1-based), identity elsewhere.
    pub fn single(n: usize, site: usize, letter: Letter) -> Result<Self> {
        if site == 0 || site > n {
            return Err(Error::Index {
                index: site,
                max: n,
            });
        }
        let mut w = PauliWord::identity(n);
        w.set_letter(site, letter);
        Ok(w)
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        let n = letters.len();
        if n == 0 {
            return Err(Error::Format {
                input: String::new(),
                reason: "empty letter body".into(),
            });
        }
        if n > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "Pauli word",
                limit: MAX_QUBITS,
                requested: n,
            });
        }
        let mut w = PauliWord::identity(n);
        for (k, &l) in letters.iter().enumerate() {
            w.set_letter(k + 1, l);
        }
        Ok(w)
    }

    fn set_letter(&mut self, site: usize, letter: Letter) {
        let bit = 1u64 << (site - 1);
        let (x, z) = letter.bits();
        self.x_mask = (self.x_mask & !bit) | if x { bit } else { 0 };
        self.z_mask = (self.z_mask & !bit) | if z { bit } else { 0 };
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    /// Letter at 1-based `site`.
    pub fn letter(&self, site: usize) -> Letter {
        assert!(
            site >= 1 && site <= self.n,
            "site {site} out of 1..={}",
            self.n
        );
        let bit = 1u64 << (site - 1);
        Letter::from_bits(self.x_mask & bit != 0, self.z_mask & bit != 0)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (1..=self.n).map(|a| self.letter(a)).collect()
    }

    /// Letters only, without the sign prefix.
    pub fn letter_string(&self) -> String {
        self.letters().into_iter().map(Letter::as_char).collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase_exp.is_multiple_of(2)
    }

    /// `+1` or `-1` for Hermitian words, `None` for `±i` multiples.
    pub fn sign(&self) -> Option<i8> {
        match self.phase_exp {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Sites carrying a non-identity letter.
    pub fn support(&self) -> u64 {
        self.x_mask | self.z_mask
    }

    /// Same letters with phase `+1`.
    pub fn unsigned(&self) -> Self {
        PauliWord {
            phase_exp: 0,
            ..*self
        }
    }

    pub fn negate(&self) -> Self {
        self.scale_i(2)
    }

    /// Multiplies the scalar by `i^k`.
    pub fn scale_i(&self, k: u8) -> Self {
        PauliWord {
            phase_exp: (self.phase_exp + k % 4) % 4,
            ..*self
        }
    }

    /// Inverse in the Pauli group: letters unchanged, phase conjugated.
    pub fn inverse(&self) -> Self {
        PauliWord {
            phase_exp: (4 - self.phase_exp) % 4,
            ..*self
        }
    }

    pub fn multiply(&self, other: &PauliWord) -> Result<PauliWord> {
        check_dims(self.n, other.n)?;
        // i^(p + |x&z|) X^x Z^z form, where moving Z^z1 past X^x2 costs (-1)^|z1&x2|.
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        let e = self.phase_exp as u32
            + popcount(self.x_mask & self.z_mask)
            + other.phase_exp as u32
            + popcount(other.x_mask & other.z_mask)
            + 2 * popcount(self.z_mask & other.x_mask);
        let phase = (e + 4 * 64 - popcount(x & z)) % 4;
        Ok(PauliWord {
            n: self.n,
            x_mask: x,
            z_mask: z,
            phase_exp: phase as u8,
        })
    }

    /// Symplectic inner product test.
    pub fn commutes(&self, other: &PauliWord) -> Result<bool> {
        check_dims(self.n, other.n)?;
        let s = popcount(self.x_mask & other.z_mask) + popcount(self.z_mask & other.x_mask);
        Ok(s.is_multiple_of(2))
    }

    /// Letter sequence mirrored, site `a` moved to `n + 1 - a`; phase unchanged.
    pub fn reversed(&self) -> Self {
        let shift = 64 - self.n as u32;
        PauliWord {
            n: self.n,
            x_mask: self.x_mask.reverse_bits() >> shift,
            z_mask: self.z_mask.reverse_bits() >> shift,
            phase_exp: self.phase_exp,
        }
    }

    /// Pads (or keeps) the word to `n` sites by appending identities on the right.
    pub fn widen(&self, n: usize) -> Result<Self> {
        if n < self.n || n > MAX_QUBITS {
            return Err(Error::Domain(format!(
                "cannot widen {}-qubit word to {n} qubits",
                self.n
            )));
        }
        Ok(PauliWord { n, ..*self })
    }

    /// Restriction to the sites `first..=last`, as a word on `last - first + 1` qubits.
    /// The phase is kept.
    pub fn restrict(&self, first: usize, last: usize) -> Self {
        assert!(first >= 1 && first <= last && last <= self.n);
        let len = last - first + 1;
        let mask = site_mask(len);
        PauliWord {
            n: len,
            x_mask: (self.x_mask >> (first - 1)) & mask,
            z_mask: (self.z_mask >> (first - 1)) & mask,
            phase_exp: self.phase_exp,
        }
    }

    /// Kronecker product of the single-site matrices, times `i^phase_exp`.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.to_matrix_with_limit(DEFAULT_DENSE_LIMIT)
    }

    pub fn to_matrix_with_limit(&self, limit: usize) -> Result<DMatrix<Complex64>> {
        if self.n > limit {
            return Err(Error::Capacity {
                what: "dense matrix",
                limit,
                requested: self.n,
            });
        }
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for a in 1..=self.n {
            m = m.kronecker(&self.letter(a).matrix());
        }
        Ok(m * phase_value(self.phase_exp))
    }
}

/// `i^k` as a complex float.
pub fn phase_value(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl Mul for &PauliWord {
    type Output = PauliWord;

    /// Panics on mismatched qubit counts; use [`PauliWord::multiply`] to get an error instead.
    fn mul(self, rhs: &PauliWord) -> PauliWord {
        self.multiply(rhs).expect("qubit counts must agree")
    }
}

impl Mul for PauliWord {
    type Output = PauliWord;

    fn mul(self, rhs: PauliWord) -> PauliWord {
        self.multiply(&rhs).expect("qubit counts must agree")
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_exp {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.letter_string())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        make_pauli(s)
    }
}

/// Parses `[+|-|+i|-i]?[IXYZ]{n}`, site 1 leftmost.
pub fn make_pauli(spec: &str) -> Result<PauliWord> {
    let (phase, body) = if let Some(rest) = spec.strip_prefix("+i") {
        (1, rest)
    } else if let Some(rest) = spec.strip_prefix("-i") {
        (3, rest)
    } else if let Some(rest) = spec.strip_prefix('+') {
        (0, rest)
    } else if let Some(rest) = spec.strip_prefix('-') {
        (2, rest)
    } else {
        (0, spec)
    };
    if body.is_empty() {
        return Err(Error::Format {
            input: spec.to_string(),
            reason: "empty letter body".into(),
        });
    }
    let letters = body
        .chars()
        .map(|c| {
            Letter::from_char(c).ok_or_else(|| Error::Format {
                input: spec.to_string(),
                reason: format!("invalid character {c:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PauliWord::from_letters(&letters)?.scale_i(phase))
}

/// A product `∏_{i∈T} E_i` of stabilizer generators, indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StabilizerProduct {
    pub n: usize,
    pub subset: BTreeSet<usize>,
}

impl StabilizerProduct {
    pub fn new(n: usize, subset: impl IntoIterator<Item = usize>) -> Self {
        StabilizerProduct {
            n,
            subset: subset.into_iter().collect(),
        }
    }

    /// Subset given as a bit mask, bit `i - 1` for generator `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        StabilizerProduct::new(n, (1..=n).filter(|i| mask & (1 << (i - 1)) != 0))
    }

    pub fn mask(&self) -> u64 {
        self.subset.iter().fold(0, |m, i| m | 1 << (i - 1))
    }

    /// Subset notation such as `E1E3`; `I` for the empty product.
    pub fn label(&self) -> String {
        if self.subset.is_empty() {
            return "I".into();
        }
        self.subset.iter().map(|i| format!("E{i}")).collect()
    }

    /// Multiplies the indexed generators in ascending order.
    pub fn resolve(&self, generators: &[PauliWord]) -> Result<PauliWord> {
        resolve(self, generators)
    }
}

pub fn resolve(sp: &StabilizerProduct, generators: &[PauliWord]) -> Result<PauliWord> {
    let mut acc = PauliWord::identity(sp.n);
    for &i in &sp.subset {
        let g = generators
            .get(i.wrapping_sub(1))
            .filter(|_| i >= 1 && i <= sp.n)
            .ok_or(Error::Index {
                index: i,
                max: sp.n,
            })?;
        acc = acc.multiply(g)?;
    }
    Ok(acc)
}

/// Gaussian-integer coefficient used by [`PauliSum`].
pub type Coeff = Complex<i64>;

fn phase_coeff(k: u8) -> Coeff {
    match k % 4 {
        0 => Coeff::new(1, 0),
        1 => Coeff::new(0, 1),
        2 => Coeff::new(-1, 0),
        _ => Coeff::new(0, -1),
    }
}

/// Exact linear combination of Pauli words with like terms collected.
///
/// Terms are keyed by letters only; each word's phase is folded into the
/// coefficient. Zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<(u64, u64), Coeff>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut s = PauliSum::zero(n);
        s.add_word(Coeff::new(1, 0), &PauliWord::identity(n));
        s
    }

    pub fn from_words<'a>(n: usize, words: impl IntoIterator<Item = (i64, &'a PauliWord)>) -> Self {
        let mut s = PauliSum::zero(n);
        for (c, w) in words {
            s.add_word(Coeff::new(c, 0), w);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_word(&mut self, coeff: Coeff, word: &PauliWord) {
        assert_eq!(word.n(), self.n, "qubit counts must agree");
        let c = coeff * phase_coeff(word.phase_exp());
        let key = (word.x_mask(), word.z_mask());
        let entry = self.terms.entry(key).or_insert(Coeff::new(0, 0));
        *entry += c;
        if *entry == Coeff::new(0, 0) {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_word(c, &w);
        }
        out
    }

    pub fn scale(&self, k: i64) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        if k != 0 {
            for (w, c) in self.iter() {
                out.add_word(c * k, &w);
            }
        }
        out
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        check_dims(self.n, other.n)?;
        let mut out = PauliSum::zero(self.n);
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_word(ca * cb, &a.multiply(&b)?);
            }
        }
        Ok(out)
    }

    /// Terms as (unsigned word, coefficient) in a fixed order.
    pub fn iter(&self) -> impl Iterator<Item = (PauliWord, Coeff)> + '_ {
        self.terms.iter().map(move |(&(x, z), &c)| {
            (
                PauliWord {
                    n: self.n,
                    x_mask: x,
                    z_mask: z,
                    phase_exp: 0,
                },
                c,
            )
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}
