//! Four-row GHZ arguments on `|φ_n⟩`.
//!
//! A form is a set of four Hermitian words with their cluster-state
//! eigenvalues such that every site carries each non-identity letter an even
//! number of times (any ±1 value assignment multiplies the rows to `+1`)
//! while the quantum eigenvalues multiply to `-1`.
//!
//! Forms are generated from a head segment `1..=j`, the middle site `j+1`
//! and a tail segment `j+2..=n`:
//!
//! ```text
//! { Z″ X Z′,  Y″ Y Z′,  Y″ X Y′,  Z″ Y Y′ }
//! ```
//!
//! for `j` in `⌊n/2⌋..=n-2`, together with their mirror images.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::family::{primed_family_head, primed_family_tail};
use crate::pauli::{make_pauli, Letter, PauliWord, StabilizerProduct};
use crate::state::{
    build_cluster_state_with_limit, eigenstate_check, stabilizer_generators, StateVector,
    DEFAULT_STATEVECTOR_LIMIT,
};

/// Largest chain scanned by [`brute_force_form_oracle`].
pub const BRUTE_FORCE_LIMIT: usize = 7;

/// Largest chain whose full stabilizer group is tabulated.
pub const GROUP_LIMIT: usize = 20;

/// All `2^n` elements of the cluster-state stabilizer group, indexed by letters.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliWord>,
    by_letters: HashMap<(u64, u64), (u64, PauliWord)>,
}

impl StabilizerGroup {
    pub fn new(n: usize) -> Result<Self> {
        if n > GROUP_LIMIT {
            return Err(Error::Capacity {
                what: "stabilizer group",
                limit: GROUP_LIMIT,
                requested: n,
            });
        }
        let generators = stabilizer_generators(n)?;
        let mut by_letters = HashMap::with_capacity(1 << n);
        for mask in 0u64..1 << n {
            let w = StabilizerProduct::from_mask(n, mask).resolve(&generators)?;
            by_letters.insert((w.x_mask(), w.z_mask()), (mask, w));
        }
        Ok(StabilizerGroup {
            n,
            generators,
            by_letters,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.generators
    }

    /// Group elements in generator-subset order (bit `i-1` selects `E_i`).
    pub fn elements(&self) -> Vec<PauliWord> {
        let mut v: Vec<_> = self.by_letters.values().copied().collect();
        v.sort_by_key(|(mask, _)| *mask);
        v.into_iter().map(|(_, w)| w).collect()
    }

    /// Eigenvalue of a Hermitian word on `|φ_n⟩`, if it is `±` a group element.
    pub fn eigenvalue(&self, w: &PauliWord) -> Option<i8> {
        if w.n() != self.n || !w.is_hermitian() {
            return None;
        }
        let (_, g) = self.by_letters.get(&(w.x_mask(), w.z_mask()))?;
        // g fixes the state and w = (w/g) g with w/g = ±1.
        let ratio = (w.phase_exp() + 4 - g.phase_exp()) % 4;
        Some(if ratio == 0 { 1 } else { -1 })
    }

    /// The generator subset whose product has the same letters as `w`.
    pub fn decompose(&self, w: &PauliWord) -> Option<StabilizerProduct> {
        self.by_letters
            .get(&(w.x_mask(), w.z_mask()))
            .map(|(mask, _)| StabilizerProduct::from_mask(self.n, *mask))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormRow {
    /// Unsigned Hermitian word.
    pub word: PauliWord,
    pub eigenvalue: i8,
}

impl fmt::Display for FormRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.eigenvalue > 0 { "+1" } else { "-1" };
        write!(f, "{}:{sign}", self.word)
    }
}

/// How a form was generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub j: usize,
    /// Index into the head `(Z″, Y″)` pairs, `z_index * |Y″| + y_index`.
    pub head_choice: usize,
    pub middle: usize,
    /// Index into the tail `(Z′, Y′)` pairs, same layout.
    pub tail_choice: usize,
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FormRecord", into = "FormRecord")]
pub struct GhzForm {
    pub n: usize,
    pub rows: [FormRow; 4],
    pub provenance: Option<Provenance>,
}

/// On-disk form record: `{"n": 4, "rows": [{"pauli": "ZXIX", "eigenvalue": 1}, …], "provenance": {…}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormRecord {
    pub n: usize,
    pub rows: Vec<RowRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowRecord {
    pub pauli: String,
    pub eigenvalue: i8,
}

impl TryFrom<FormRecord> for GhzForm {
    type Error = Error;

    fn try_from(rec: FormRecord) -> Result<Self> {
        if rec.rows.len() != 4 {
            return Err(Error::Domain(format!(
                "a form has 4 rows, got {}",
                rec.rows.len()
            )));
        }
        let mut rows = Vec::with_capacity(4);
        for r in &rec.rows {
            let word = make_pauli(&r.pauli)?;
            check_dims(rec.n, word.n())?;
            if word.phase_exp() != 0 {
                return Err(Error::Domain(format!(
                    "row word {} must be unsigned; put the sign in the eigenvalue",
                    r.pauli
                )));
            }
            if r.eigenvalue != 1 && r.eigenvalue != -1 {
                return Err(Error::Domain(format!(
                    "eigenvalue {} is not ±1",
                    r.eigenvalue
                )));
            }
            rows.push(FormRow {
                word,
                eigenvalue: r.eigenvalue,
            });
        }
        Ok(GhzForm {
            n: rec.n,
            rows: [rows[0], rows[1], rows[2], rows[3]],
            provenance: rec.provenance,
        })
    }
}

impl From<GhzForm> for FormRecord {
    fn from(f: GhzForm) -> Self {
        FormRecord {
            n: f.n,
            rows: f
                .rows
                .iter()
                .map(|r| RowRecord {
                    pauli: r.word.to_string(),
                    eigenvalue: r.eigenvalue,
                })
                .collect(),
            provenance: f.provenance,
        }
    }
}

impl GhzForm {
    pub fn words(&self) -> [PauliWord; 4] {
        self.rows.map(|r| r.word)
    }

    pub fn canonical_key(&self) -> String {
        canonical_key(self)
    }
}

/// Sorted `word:±1` row encodings joined with `|`.
pub fn canonical_key(form: &GhzForm) -> String {
    let mut parts: Vec<String> = form.rows.iter().map(|r| r.to_string()).collect();
    parts.sort();
    parts.join("|")
}

/// Mirrors every row (site `a` to `n + 1 - a`); eigenvalues unchanged.
pub fn reverse_form(form: &GhzForm) -> GhzForm {
    GhzForm {
        n: form.n,
        rows: form.rows.map(|r| FormRow {
            word: r.word.reversed(),
            eigenvalue: r.eigenvalue,
        }),
        provenance: form.provenance.map(|p| Provenance {
            reversed: !p.reversed,
            ..p
        }),
    }
}

/// Per-site letter-count parity across the words is even for X, Y and Z.
pub fn letters_pair_up(words: &[PauliWord]) -> bool {
    let (mut xs, mut ys, mut zs) = (0u64, 0u64, 0u64);
    for w in words {
        xs ^= w.x_mask() & !w.z_mask();
        ys ^= w.x_mask() & w.z_mask();
        zs ^= !w.x_mask() & w.z_mask();
    }
    xs == 0 && ys == 0 && zs == 0
}

/// All-versus-nothing check of a form against `psi`.
///
/// True iff every row word is an eigen-operator of `psi` with its recorded
/// eigenvalue, every site pairs up its non-identity letters, and the
/// eigenvalues multiply to `-1` (the words then multiply to `-I`).
pub fn verify_contradiction(form: &GhzForm, psi: &StateVector) -> Result<bool> {
    check_dims(form.n, psi.n())?;
    for r in &form.rows {
        check_dims(form.n, r.word.n())?;
        if !eigenstate_check(&r.word, psi, r.eigenvalue)? {
            return Ok(false);
        }
    }
    let words = form.words();
    if !letters_pair_up(&words) {
        return Ok(false);
    }
    let sign: i8 = form.rows.iter().map(|r| r.eigenvalue).product();
    let product = words
        .iter()
        .fold(PauliWord::identity(form.n), |acc, w| &acc * w);
    Ok(sign == -1 && product == PauliWord::identity(form.n).negate())
}

fn form_from_rows(
    group: &StabilizerGroup,
    signed: [PauliWord; 4],
    provenance: Option<Provenance>,
) -> Result<GhzForm> {
    let mut rows = [FormRow {
        word: PauliWord::identity(group.n()),
        eigenvalue: 1,
    }; 4];
    for (slot, w) in rows.iter_mut().zip(signed) {
        let word = w.unsigned();
        let eigenvalue = group.eigenvalue(&word).ok_or_else(|| {
            Error::Domain(format!("{w} is not in the stabilizer group up to sign"))
        })?;
        *slot = FormRow { word, eigenvalue };
    }
    Ok(GhzForm {
        n: group.n(),
        rows,
        provenance,
    })
}

/// Valid groupings `j` for an `n`-site chain: `⌊n/2⌋..=n-2`.
pub fn grouping_range(n: usize) -> std::ops::RangeInclusive<usize> {
    (n / 2)..=(n - 2)
}

/// The forms of one grouping, one per `(Z″, Y″)` × `(Z′, Y′)` choice.
pub fn forms_for_grouping(group: &StabilizerGroup, j: usize) -> Result<Vec<GhzForm>> {
    let n = group.n();
    if j == 0 || j + 2 > n {
        return Err(Error::Domain(format!(
            "grouping j = {j} invalid for n = {n}"
        )));
    }
    let head = primed_family_head(j)?.widen(n)?;
    let tail = primed_family_tail(j + 2, n)?;
    let mid = |l| PauliWord::single(n, j + 1, l).expect("middle site");
    let (mx, my) = (mid(Letter::X), mid(Letter::Y));
    let mut out = Vec::new();
    for (hz_i, hz) in head.z_set.iter().enumerate() {
        for (hy_i, hy) in head.y_set.iter().enumerate() {
            for (tz_i, tz) in tail.z_set.iter().enumerate() {
                for (ty_i, ty) in tail.y_set.iter().enumerate() {
                    let rows = [
                        hz * &mx * *tz,
                        hy * &my * *tz,
                        hy * &mx * *ty,
                        hz * &my * *ty,
                    ];
                    let prov = Provenance {
                        j,
                        head_choice: hz_i * head.y_set.len() + hy_i,
                        middle: j + 1,
                        tail_choice: tz_i * tail.y_set.len() + ty_i,
                        reversed: false,
                    };
                    out.push(form_from_rows(group, rows, Some(prov))?);
                }
            }
        }
    }
    Ok(out)
}

/// Every distinct GHZ form of `|φ_n⟩`, ordered by canonical key.
///
/// Each form is re-verified against the dense cluster state.
pub fn enumerate_forms(n: usize) -> Result<Vec<GhzForm>> {
    enumerate_forms_with_limit(n, DEFAULT_STATEVECTOR_LIMIT)
}

pub fn enumerate_forms_with_limit(n: usize, statevector_limit: usize) -> Result<Vec<GhzForm>> {
    if n < 3 {
        return Err(Error::Domain(format!("GHZ forms need n >= 3, got {n}")));
    }
    let psi = build_cluster_state_with_limit(n, statevector_limit)?;
    let forms = generate_forms(n)?;
    let checks: Result<Vec<bool>> = forms
        .par_iter()
        .map(|f| verify_contradiction(f, &psi))
        .collect();
    if let Some(bad) = checks?.iter().position(|ok| !ok) {
        return Err(Error::Domain(format!(
            "generated form fails verification: {}",
            canonical_key(&forms[bad])
        )));
    }
    Ok(forms)
}

/// The distinct forms from every grouping and its mirror, ordered by canonical key, unverified.
pub fn generate_forms(n: usize) -> Result<Vec<GhzForm>> {
    if n < 3 {
        return Err(Error::Domain(format!("GHZ forms need n >= 3, got {n}")));
    }
    let group = StabilizerGroup::new(n)?;
    let mut direct = Vec::new();
    for j in grouping_range(n) {
        direct.extend(forms_for_grouping(&group, j)?);
    }
    let mut unique: BTreeMap<String, GhzForm> = BTreeMap::new();
    for f in direct
        .iter()
        .cloned()
        .chain(direct.iter().map(reverse_form))
    {
        unique.entry(canonical_key(&f)).or_insert(f);
    }
    Ok(unique.into_values().collect())
}

/// Outcome of the exhaustive four-subset scan.
#[derive(Clone, Debug)]
pub struct OracleReport {
    /// Contradiction-bearing subsets with the head/middle/tail structure.
    pub structured: Vec<GhzForm>,
    /// Contradiction-bearing subsets of any shape.
    pub unfiltered_count: usize,
}

/// Head/X-Y middle/tail pairing of four rows around middle site `m`, if any.
fn has_tripartition(rows: &[PauliWord; 4], m: usize) -> bool {
    let n = rows[0].n();
    let middle: Vec<Letter> = rows.iter().map(|w| w.letter(m)).collect();
    let xs = middle.iter().filter(|l| **l == Letter::X).count();
    let ys = middle.iter().filter(|l| **l == Letter::Y).count();
    if xs != 2 || ys != 2 {
        return false;
    }
    let head: Vec<PauliWord> = rows.iter().map(|w| w.restrict(1, m - 1)).collect();
    let tail: Vec<PauliWord> = rows.iter().map(|w| w.restrict(m + 1, n)).collect();
    let distinct = |v: &[PauliWord]| {
        let mut d = v.to_vec();
        d.sort();
        d.dedup();
        d.len()
    };
    if distinct(&head) != 2 || distinct(&tail) != 2 {
        return false;
    }
    let mut pairs: Vec<(PauliWord, PauliWord)> =
        head.iter().copied().zip(tail.iter().copied()).collect();
    pairs.sort();
    pairs.dedup();
    if pairs.len() != 4 {
        return false;
    }
    // The two X rows share neither their head nor their tail observable.
    let x_rows: Vec<usize> = (0..4).filter(|&r| middle[r] == Letter::X).collect();
    head[x_rows[0]] != head[x_rows[1]] && tail[x_rows[0]] != tail[x_rows[1]]
}

/// Scans all four-subsets of the stabilizer group for GHZ contradictions.
pub fn brute_force_form_oracle(n: usize) -> Result<OracleReport> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Capacity {
            what: "brute-force form scan",
            limit: BRUTE_FORCE_LIMIT,
            requested: n,
        });
    }
    if n < 3 {
        return Err(Error::Domain(format!("GHZ forms need n >= 3, got {n}")));
    }
    let group = StabilizerGroup::new(n)?;
    // (unsigned word, eigenvalue) for every element.
    let elements: Vec<(PauliWord, i8)> = group
        .elements()
        .iter()
        .map(|g| {
            (
                g.unsigned(),
                g.sign().expect("stabilizer elements are Hermitian"),
            )
        })
        .collect();
    let size = elements.len();
    let hits: Vec<([usize; 4], bool)> = (0..size)
        .into_par_iter()
        .flat_map_iter(|a| {
            let elements = &elements;
            let mut local = Vec::new();
            for b in a + 1..size {
                for c in b + 1..size {
                    for d in c + 1..size {
                        let idx = [a, b, c, d];
                        let sign: i8 = idx.iter().map(|&k| elements[k].1).product();
                        if sign != -1 {
                            continue;
                        }
                        let words = idx.map(|k| elements[k].0);
                        if !letters_pair_up(&words) {
                            continue;
                        }
                        let structured = (2..n).any(|m| has_tripartition(&words, m));
                        local.push((idx, structured));
                    }
                }
            }
            local
        })
        .collect();
    let unfiltered_count = hits.len();
    let mut structured: Vec<GhzForm> = hits
        .iter()
        .filter(|(_, s)| *s)
        .map(|(idx, _)| GhzForm {
            n,
            rows: idx.map(|k| FormRow {
                word: elements[k].0,
                eigenvalue: elements[k].1,
            }),
            provenance: None,
        })
        .collect();
    structured.sort_by_cached_key(canonical_key);
    Ok(OracleReport {
        structured,
        unfiltered_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::build_cluster_state;

    fn row(s: &str, e: i8) -> FormRow {
        FormRow {
            word: make_pauli(s).unwrap(),
            eigenvalue: e,
        }
    }

    fn three_qubit_form() -> GhzForm {
        GhzForm {
            n: 3,
            rows: [row("ZXZ", 1), row("YYZ", 1), row("YXY", -1), row("ZYY", 1)],
            provenance: None,
        }
    }

    #[test]
    fn group_eigenvalues() {
        let g = StabilizerGroup::new(3).unwrap();
        assert_eq!(g.eigenvalue(&make_pauli("YXY").unwrap()), Some(-1));
        assert_eq!(g.eigenvalue(&make_pauli("-YXY").unwrap()), Some(1));
        assert_eq!(g.eigenvalue(&make_pauli("XII").unwrap()), None);
        assert_eq!(g.elements().len(), 8);
        assert_eq!(
            g.decompose(&make_pauli("YYZ").unwrap()).unwrap().label(),
            "E1E2"
        );
    }

    #[test]
    fn canonical_key_sorts_rows() {
        let f = three_qubit_form();
        assert_eq!(canonical_key(&f), "YXY:-1|YYZ:+1|ZXZ:+1|ZYY:+1");
        let mut g = f.clone();
        g.rows.swap(0, 3);
        g.rows.swap(1, 2);
        assert_eq!(canonical_key(&g), canonical_key(&f));
    }

    #[test]
    fn three_qubit_form_verifies() {
        let psi = build_cluster_state(3).unwrap();
        assert!(verify_contradiction(&three_qubit_form(), &psi).unwrap());
        for k in 0..4 {
            let mut f = three_qubit_form();
            f.rows[k].eigenvalue = -f.rows[k].eigenvalue;
            assert!(!verify_contradiction(&f, &psi).unwrap());
        }
        let psi4 = build_cluster_state(4).unwrap();
        assert!(verify_contradiction(&three_qubit_form(), &psi4).is_err());
    }

    #[test]
    fn four_qubit_form_from_oracle_eigenvalues() {
        let g = StabilizerGroup::new(4).unwrap();
        let words = ["ZXIX", "YYIX", "YXXY", "ZYXY"];
        let rows: Vec<FormRow> = words
            .iter()
            .map(|w| {
                let word = make_pauli(w).unwrap();
                FormRow {
                    word,
                    eigenvalue: g.eigenvalue(&word).unwrap(),
                }
            })
            .collect();
        assert_eq!(
            rows.iter().map(|r| r.eigenvalue).collect::<Vec<_>>(),
            vec![1, 1, 1, -1]
        );
        let form = GhzForm {
            n: 4,
            rows: [rows[0], rows[1], rows[2], rows[3]],
            provenance: None,
        };
        assert!(verify_contradiction(&form, &build_cluster_state(4).unwrap()).unwrap());
    }

    #[test]
    fn reversal() {
        let f = three_qubit_form();
        let r = reverse_form(&f);
        assert_eq!(canonical_key(&r), canonical_key(&f));
        assert_eq!(reverse_form(&r), f);
        let g = GhzForm {
            n: 4,
            rows: [
                row("XIXZ", 1),
                row("ZYYZ", 1),
                row("ZYXY", -1),
                row("XIYY", 1),
            ],
            provenance: None,
        };
        let rg = reverse_form(&g);
        assert_eq!(rg.rows[0].word, make_pauli("ZXIX").unwrap());
        assert_eq!(rg.rows[3].word, make_pauli("YYIX").unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let f3 = enumerate_forms(3).unwrap();
        assert_eq!(f3.len(), 1);
        assert_eq!(canonical_key(&f3[0]), canonical_key(&three_qubit_form()));
        assert_eq!(enumerate_forms(4).unwrap().len(), 8);
        assert_eq!(enumerate_forms(5).unwrap().len(), 48);
        assert!(matches!(enumerate_forms(2), Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = enumerate_forms(4).unwrap().remove(0);
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.starts_with("{\"n\":4,\"rows\":[{\"pauli\":"));
        let back: GhzForm = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"n":3,"rows":[{"pauli":"ZXZ","eigenvalue":1}]}"#;
        assert!(serde_json::from_str::<GhzForm>(bad).is_err());
        let signed = r#"{"n":1,"rows":[{"pauli":"-X","eigenvalue":1},{"pauli":"X","eigenvalue":1},{"pauli":"X","eigenvalue":1},{"pauli":"X","eigenvalue":1}]}"#;
        assert!(serde_json::from_str::<GhzForm>(signed).is_err());
    }

    #[test]
    fn oracle_small() {
        let r = brute_force_form_oracle(3).unwrap();
        assert_eq!(r.structured.len(), 1);
        assert_eq!(
            canonical_key(&r.structured[0]),
            canonical_key(&three_qubit_form())
        );
        assert!(brute_force_form_oracle(8).is_err());
    }
}
