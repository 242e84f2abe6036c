//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use cluster_ghz::bell::{
    all_standard_operators, bell_square_check, grand_bell_alternative, grand_bell_operator,
    lhv_party_bound, lhv_qubit_bound, max_eigen_check, quantum_value,
};
use cluster_ghz::family::{
    basis_action_check, family_algebra_check, membership_check, primed_family_head,
    primed_family_tail, Segment,
};
use cluster_ghz::forms::{
    brute_force_form_oracle, canonical_key, enumerate_forms, verify_contradiction, GhzForm,
};
use cluster_ghz::state::{
    build_cluster_state, build_phi_family, decomposition_check, expectation, segment_basis,
};
use cluster_ghz::tables::{golden_compare, Which};
use cluster_ghz::{make_pauli, PauliWord, Side};
use common::{oracle_matrix, random_word, Gauss};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const SEED: u64 = 2024;
const ALGEBRA_CASES: usize = 10_000;
const PHI_CASES: usize = 100;

/// Frozen from the exhaustive subset scan.
const FORMS_6: usize = 256;
/// Frozen from the naive per-qubit scan: (n, j, bound), middle site j + 1.
const GRAND_QUBIT_BOUNDS: [(usize, usize, i64); 3] = [(4, 1, 4), (5, 2, 8), (6, 3, 16)];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn word_set(list: [&str; 4]) -> BTreeSet<PauliWord> {
    list.iter().map(|s| make_pauli(s).unwrap()).collect()
}

fn keys(forms: &[GhzForm]) -> BTreeSet<String> {
    forms.iter().map(canonical_key).collect()
}

fn form_counts() -> Check {
    let f3 = ok(enumerate_forms(3))?;
    ensure(f3.len() == 1, || format!("|F3| = {}", f3.len()))?;
    let w3: BTreeSet<_> = f3[0].words().into_iter().collect();
    ensure(w3 == word_set(["ZXZ", "YYZ", "YXY", "ZYY"]), || {
        "three-site form differs".into()
    })?;
    let f4 = ok(enumerate_forms(4))?;
    let listed: BTreeSet<BTreeSet<PauliWord>> = [
        ["ZXIX", "YYIX", "YXXY", "ZYXY"],
        ["ZXIX", "YYIX", "YXYZ", "ZYYZ"],
        ["ZXZI", "YYZI", "YXXY", "ZYXY"],
        ["ZXZI", "YYZI", "YXYZ", "ZYYZ"],
        ["XIXZ", "ZYYZ", "ZYXY", "XIYY"],
        ["XIXZ", "YXYZ", "YXXY", "XIYY"],
        ["IZXZ", "ZYYZ", "ZYXY", "IZYY"],
        ["IZXZ", "YXYZ", "YXXY", "IZYY"],
    ]
    .into_iter()
    .map(word_set)
    .collect();
    let got4: BTreeSet<BTreeSet<PauliWord>> =
        f4.iter().map(|f| f.words().into_iter().collect()).collect();
    ensure(f4.len() == 8 && got4 == listed, || {
        format!("|F4| = {}, word sets differ", f4.len())
    })?;
    let f5 = ok(enumerate_forms(5))?;
    ensure(f5.len() == 48, || format!("|F5| = {}", f5.len()))?;
    Ok("|F3| = 1, |F4| = 8, |F5| = 48".into())
}

fn oracle_equivalence() -> Check {
    let mut detail = Vec::new();
    for n in 3..=5 {
        let oracle = ok(brute_force_form_oracle(n))?;
        let a = keys(&oracle.structured);
        let b = keys(&ok(enumerate_forms(n))?);
        ensure(a == b, || {
            format!(
                "n = {n}: oracle {} keys, enumeration {} keys",
                a.len(),
                b.len()
            )
        })?;
        detail.push(format!(
            "n={n}: {} (unfiltered {})",
            a.len(),
            oracle.unfiltered_count
        ));
    }
    Ok(detail.join(", "))
}

fn soundness() -> Check {
    let mut total = 0;
    for n in 3..=7 {
        let psi = ok(build_cluster_state(n))?;
        let forms = ok(enumerate_forms(n))?;
        for f in &forms {
            ensure(ok(verify_contradiction(f, &psi))?, || {
                format!("{} fails", canonical_key(f))
            })?;
            for r in &f.rows {
                let v = ok(expectation(&r.word, &psi))?;
                ensure((v - r.eigenvalue as f64).norm() <= TOL, || {
                    format!("{} expectation {v}", r.word)
                })?;
            }
        }
        total += forms.len();
    }
    Ok(format!("{total} forms over n = 3..7 verified"))
}

fn tables() -> Check {
    let mut errata = 0;
    for which in [Which::I, Which::II, Which::III] {
        let r = ok(golden_compare(which, None))?;
        ensure(r.matches, || format!("table {which}: {:?}", r.mismatches))?;
        errata += r.errata_applied;
    }
    Ok(format!(
        "tables I, II, III identical ({errata} errata entries in III)"
    ))
}

fn bell_identities() -> Check {
    let mut count = 0;
    for n in 3..=6 {
        let psi = ok(build_cluster_state(n))?;
        for b in ok(all_standard_operators(n))? {
            ensure(ok(b.factored_consistent())?, || {
                format!("factored form inconsistent at n = {n}")
            })?;
            ensure(ok(bell_square_check(&b))?, || {
                format!("square identity fails at n = {n}")
            })?;
            let norm = ok(b.spectrum_with_limit(8))?.norm();
            ensure((norm - 4.0).abs() <= TOL, || {
                format!("norm {norm} at n = {n}")
            })?;
            let q = ok(quantum_value(&b, &psi))?;
            ensure((q - 4.0).abs() <= TOL, || {
                format!("quantum value {q} at n = {n}")
            })?;
            let c = ok(lhv_party_bound(&b))?;
            ensure(c == 2, || format!("party bound {c} at n = {n}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} standard operators, n = 3..6"))
}

fn grand_operators() -> Check {
    let mut detail = Vec::new();
    for (n, j) in [(4, 1), (5, 2), (6, 3)] {
        let g = ok(grand_bell_operator(n, j))?;
        ensure(g.to_sum() == ok(grand_bell_alternative(n, j))?, || {
            format!("factorizations differ at n = {n}")
        })?;
        let psi = ok(build_cluster_state(n))?;
        let top = (1u64 << (n - 1)) as f64;
        let q = ok(quantum_value(&g, &psi))?;
        ensure((q - top).abs() <= TOL, || {
            format!("quantum value {q} at n = {n}")
        })?;
        let m = ok(max_eigen_check(&g, &psi))?;
        ensure(
            (m.value - top).abs() <= TOL && m.multiplicity == 1 && m.matches_state,
            || {
                format!(
                    "n = {n}: top {} multiplicity {} matches {}",
                    m.value, m.multiplicity, m.matches_state
                )
            },
        )?;
        detail.push(format!("n={n}: {top}"));
    }
    Ok(detail.join(", "))
}

fn phi_family() -> Check {
    let half = Complex64::new(0.5, 0.0);
    let phi4 = ok(build_cluster_state(4))?;
    ensure(
        ok(build_phi_family(half, half))?.approx_eq(&phi4, TOL),
        || "α = β = 1/2 differs from φ4".into(),
    )?;
    let rows = ["ZXIX", "YYIX", "YXXY", "ZYXY"].map(|s| make_pauli(s).unwrap());
    let pattern: Vec<Complex64> = rows
        .iter()
        .map(|w| expectation(w, &phi4).unwrap())
        .collect();
    for p in &pattern {
        ensure((p.re.abs() - 1.0).abs() <= TOL && p.im.abs() <= TOL, || {
            format!("φ4 expectation {p}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for case in 0..PHI_CASES {
        let (a, b) = common::random_phi_coefficients(&mut rng);
        let psi = ok(build_phi_family(a, b))?;
        for (w, want) in rows.iter().zip(&pattern) {
            let v = ok(expectation(w, &psi))?;
            ensure((v - want).norm() <= TOL, || {
                format!("case {case}: ⟨{w}⟩ = {v}, want {want}")
            })?;
        }
    }
    let signs: Vec<String> = pattern
        .iter()
        .map(|p| format!("{:+}", p.re.round()))
        .collect();
    Ok(format!(
        "{PHI_CASES} random states share pattern ({})",
        signs.join(", ")
    ))
}

fn algebra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let one = Gauss::new(1, 0);
    for case in 0..ALGEBRA_CASES {
        let n = rng.gen_range(1..=8);
        let (a, b, c) = (
            random_word(&mut rng, n),
            random_word(&mut rng, n),
            random_word(&mut rng, n),
        );
        let (ma, mb) = (oracle_matrix(&a), oracle_matrix(&b));
        ensure(oracle_matrix(&(a * b)) == ma.mul(&mb), || {
            format!("case {case}: {a} * {b}")
        })?;
        ensure((a * b) * c == a * (b * c), || {
            format!("case {case}: associativity")
        })?;
        let sign = if ok(a.commutes(&b))? { one } else { -one };
        ensure(ma.mul(&mb) == mb.mul(&ma).scale(sign), || {
            format!("case {case}: commutation {a}, {b}")
        })?;
        let u = a.unsigned();
        ensure(
            (u * u).is_identity() && oracle_matrix(&u).mul(&oracle_matrix(&u)).is_identity(),
            || format!("case {case}: {u} squared"),
        )?;
        ensure((a * a.inverse()).is_identity(), || {
            format!("case {case}: inverse of {a}")
        })?;
    }
    for len in 1..=5 {
        let head = ok(primed_family_head(len))?;
        let (hp, hm) = ok(segment_basis(len, Side::Head))?;
        ensure(
            family_algebra_check(&head) && ok(basis_action_check(&head, (&hp, &hm)))?,
            || format!("head family length {len}"),
        )?;
        let tail = ok(primed_family_tail(2, len + 1))?;
        let (tp, tm) = ok(segment_basis(len, Side::Tail))?;
        ensure(
            family_algebra_check(&tail) && ok(basis_action_check(&tail, (&tp, &tm)))?,
            || format!("tail family length {len}"),
        )?;
    }
    for n in 2..=7 {
        for end in 1..=n {
            ensure(ok(membership_check(Segment::Head { end }, n))?, || {
                format!("head 1..={end}")
            })?;
        }
        for start in 1..=n {
            ensure(ok(membership_check(Segment::Tail { start, n }, n))?, || {
                format!("tail {start}..={n}")
            })?;
        }
    }
    Ok(format!(
        "{ALGEBRA_CASES} random cases, families up to length 5, membership n <= 7"
    ))
}

fn decompositions() -> Check {
    for (n, side) in [
        (4, Side::Tail),
        (4, Side::Head),
        (5, Side::Head),
        (5, Side::Tail),
    ] {
        ensure(ok(decomposition_check(n, side))?, || {
            format!("n = {n}, {side:?}")
        })?;
    }
    Ok("four regroupings reconstruct φ4 and φ5".into())
}

fn regression_constants() -> Check {
    let f6 = ok(enumerate_forms(6))?.len();
    ensure(f6 == FORMS_6, || format!("|F6| = {f6}, frozen {FORMS_6}"))?;
    let mut detail = vec![format!("|F6| = {f6}")];
    for (n, j, want) in GRAND_QUBIT_BOUNDS {
        let got = ok(lhv_qubit_bound(&ok(grand_bell_operator(n, j))?))?;
        ensure(got == want, || {
            format!("grand n = {n}: {got}, frozen {want}")
        })?;
        detail.push(format!("grand n={n}: {got}"));
    }
    Ok(detail.join(", "))
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("form counts", form_counts),
        ("oracle equivalence", oracle_equivalence),
        ("contradiction soundness", soundness),
        ("table golden tests", tables),
        ("Bell identities", bell_identities),
        ("grand operators", grand_operators),
        ("Φ family", phi_family),
        ("algebra property suite", algebra),
        ("decomposition identities", decompositions),
        ("derived regression constants", regression_constants),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
