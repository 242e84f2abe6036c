//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use cluster_ghz::bell::BellTerm;
use cluster_ghz::PauliWord;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Gauss = Complex<i64>;

const ONE: Gauss = Gauss::new(1, 0);
const I: Gauss = Gauss::new(0, 1);

/// A matrix with exactly one non-zero entry per row: `row r -> (col, value)`.
///
/// Every Pauli word is monomial, so products cost `O(2^n)` instead of `O(8^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub cols: Vec<usize>,
    pub vals: Vec<Gauss>,
}

impl Monomial {
    pub fn scalar(v: Gauss) -> Self {
        Monomial {
            cols: vec![0],
            vals: vec![v],
        }
    }

    fn letter(c: char) -> Self {
        match c {
            'I' => Monomial {
                cols: vec![0, 1],
                vals: vec![ONE, ONE],
            },
            'X' => Monomial {
                cols: vec![1, 0],
                vals: vec![ONE, ONE],
            },
            'Y' => Monomial {
                cols: vec![1, 0],
                vals: vec![-I, I],
            },
            'Z' => Monomial {
                cols: vec![0, 1],
                vals: vec![ONE, -ONE],
            },
            _ => panic!("bad letter {c}"),
        }
    }

    pub fn kron(&self, other: &Monomial) -> Monomial {
        let d = other.cols.len();
        let mut cols = Vec::with_capacity(self.cols.len() * d);
        let mut vals = Vec::with_capacity(self.cols.len() * d);
        for (c1, v1) in self.cols.iter().zip(&self.vals) {
            for (c2, v2) in other.cols.iter().zip(&other.vals) {
                cols.push(c1 * d + c2);
                vals.push(v1 * v2);
            }
        }
        Monomial { cols, vals }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (cols, vals) = self
            .cols
            .iter()
            .zip(&self.vals)
            .map(|(&c, &v)| (other.cols[c], v * other.vals[c]))
            .unzip();
        Monomial { cols, vals }
    }

    pub fn scale(&self, k: Gauss) -> Monomial {
        Monomial {
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|v| v * k).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(r, &c)| r == c) && self.vals.iter().all(|v| *v == ONE)
    }

    /// Dense entry `(r, c)`.
    pub fn entry(&self, r: usize, c: usize) -> Gauss {
        if self.cols[r] == c {
            self.vals[r]
        } else {
            Gauss::new(0, 0)
        }
    }
}

/// Matrix of a word from its printed form, site 1 as the most significant factor.
pub fn oracle_matrix(w: &PauliWord) -> Monomial {
    let s = w.to_string();
    let (scalar, letters) = if let Some(rest) = s.strip_prefix("+i") {
        (I, rest)
    } else if let Some(rest) = s.strip_prefix("-i") {
        (-I, rest)
    } else if let Some(rest) = s.strip_prefix('-') {
        (-ONE, rest)
    } else {
        (ONE, s.as_str())
    };
    letters.chars().fold(Monomial::scalar(scalar), |acc, c| {
        acc.kron(&Monomial::letter(c))
    })
}

pub fn random_word(rng: &mut ChaCha8Rng, n: usize) -> PauliWord {
    let letters: String = (0..n)
        .map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)])
        .collect();
    let prefix = ["", "+i", "-", "-i"][rng.gen_range(0..4)];
    format!("{prefix}{letters}").parse().unwrap()
}

/// Max signed sum over every ±1 value of every `(site, letter)`, evaluated term by term.
pub fn naive_qubit_bound(n: usize, terms: &[BellTerm]) -> i64 {
    let letters = ['X', 'Y', 'Z'];
    let words: Vec<(i64, Vec<char>)> = terms
        .iter()
        .map(|t| (t.coeff as i64, t.word.to_string().chars().collect()))
        .collect();
    let symbols = 3 * n;
    let mut best = i64::MIN;
    for assign in 0u64..1 << symbols {
        let value = |site: usize, l: char| -> i64 {
            let k = 3 * site + letters.iter().position(|&c| c == l).unwrap();
            if assign >> k & 1 == 1 {
                -1
            } else {
                1
            }
        };
        let total: i64 = words
            .iter()
            .map(|(c, w)| {
                c * w
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l != 'I')
                    .map(|(site, &l)| value(site, l))
                    .product::<i64>()
            })
            .sum();
        best = best.max(total);
    }
    best
}

/// `(α, β)` on `|α|² + |β|² = 1/2` with uniform angle and phases.
pub fn random_phi_coefficients(rng: &mut ChaCha8Rng) -> (Complex<f64>, Complex<f64>) {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let p: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let q: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    (
        Complex::from_polar(r * theta.cos(), p),
        Complex::from_polar(r * theta.sin(), q),
    )
}
