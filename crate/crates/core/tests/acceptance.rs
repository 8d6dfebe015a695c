//! Acceptance checks. Each criterion prints one PASS/FAIL line per
//! sub-check; the test fails if any line fails.

mod common;

use std::time::{Duration, Instant};

use cocycle_quiver::batch::batch;
use cocycle_quiver::chain::{boundary_matrix, cocycle_space, is_cocycle};
use cocycle_quiver::coloring::{
    apply_map_to_coloring, boltzmann_weight, coloring_count, cocycle_invariant, enumerate_colorings,
};
use cocycle_quiver::diagram::Sign;
use cocycle_quiver::matinv::{build_matrix, char_poly, permutation_equivalent, smith_normal_form, CharPoly, DiscrepancyReport};
use cocycle_quiver::quiver::{build_quiver, quiver_isomorphic, quiver_polynomial, specialize, Specialization};
use cocycle_quiver::{
    corpus, CocycleCheck, CocycleQuiver, Cochain2, Execution, LinkDiagram, Quandle, QuandleMap, QuiverPolynomial,
    WeightPolynomial, ZmMatrix,
};
use common::*;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const MAX_SECONDS_PER_KNOT: f64 = 10.0;
const MAX_BATCH_SECONDS: f64 = 300.0;
const RNG_SEED: u64 = 0x5eed_c0c7;
const RANDOM_MATRICES: usize = 50;

#[derive(Default)]
struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn check(&mut self, id: &str, what: &str, ok: bool, detail: impl Into<String>) {
        let detail = detail.into();
        let line = if detail.is_empty() {
            format!("{} {id} {what}", if ok { "PASS" } else { "FAIL" })
        } else {
            format!("{} {id} {what} ({detail})", if ok { "PASS" } else { "FAIL" })
        };
        println!("{line}");
        self.lines.push((ok, line));
    }

    fn failures(&self) -> Vec<&str> {
        self.lines.iter().filter(|(ok, _)| !ok).map(|(_, l)| l.as_str()).collect()
    }
}

fn d(name: &str) -> &'static LinkDiagram {
    corpus::get(name).unwrap()
}

fn secs(t: Duration) -> String {
    format!("{:.3}s", t.as_secs_f64())
}

fn criterion_1(r: &mut Report) {
    let q = six_quandle();
    let phi = six_cocycle_z3();
    let f = six_map();
    let want_inv = WeightPolynomial::parse("6+12s+12s^2", 3).unwrap();
    let want_quiver = [
        ("6_1", QuiverPolynomial::parse("6+12st+12s^2t^2", 3).unwrap()),
        ("7_7", QuiverPolynomial::parse("6+12st^2+12s^2t", 3).unwrap()),
    ];
    for (name, want_q) in want_quiver {
        let start = Instant::now();
        let inv = cocycle_invariant(d(name), &q, &phi).unwrap();
        let quiver = quiver_polynomial(&build_quiver(d(name), &q, &[f.clone()], &phi).unwrap());
        let elapsed = start.elapsed();
        r.check(
            "1",
            &format!("invariant of {name} is {want_inv}"),
            inv == want_inv,
            format!("got {inv}"),
        );
        r.check(
            "1",
            &format!("quiver polynomial of {name} is {want_q}"),
            quiver == want_q,
            format!("got {quiver}"),
        );
        r.check(
            "1",
            &format!("{name} runtime under {MAX_SECONDS_PER_KNOT}s"),
            elapsed.as_secs_f64() < MAX_SECONDS_PER_KNOT,
            secs(elapsed),
        );
    }
}

fn criterion_2(r: &mut Report) {
    let q = six_quandle();
    let phi = table_cochain_z4();
    let maps = table_maps();
    let diagrams: Vec<LinkDiagram> = corpus::all()
        .iter()
        .filter(|d| d.crossings().len() <= 8)
        .cloned()
        .collect();
    let start = Instant::now();
    let table = batch(&diagrams, &q, &phi, &maps, CocycleCheck::Skip, Execution::default()).unwrap();
    let elapsed = start.elapsed();
    let expected: [(&str, [&str; 3]); 6] = [
        ("3_1", ["30", "30", "30"]),
        ("4_1", ["6", "6", "6"]),
        ("5_1", ["6", "6", "6"]),
        (
            "6_1",
            ["12s^2t^2+4s^2+4t^2+10", "16s^2t^2+14", "10s^2t^2+6s^2+6t^2+8"],
        ),
        (
            "8_18",
            ["48s^2t^2+16s^2+16t^2+22", "64s^2t^2+38", "40s^2t^2+24s^2+24t^2+14"],
        ),
        (
            "L6a1",
            ["12s^2t^2+4s^2+4t^2+16", "16s^2t^2+20", "10s^2t^2+6s^2+6t^2+14"],
        ),
    ];
    for (name, want) in expected {
        let row = table.rows.iter().find(|row| row.name == name).unwrap();
        let got = row.result.as_ref().unwrap();
        for (k, w) in want.iter().enumerate() {
            let w = QuiverPolynomial::parse(w, 4).unwrap();
            r.check(
                "2",
                &format!("{name} with f{} is {w}", k + 1),
                got[k] == w,
                format!("got {}", got[k]),
            );
        }
    }
    r.check(
        "2",
        "every batch row computed",
        table.rows.iter().all(|row| row.result.is_ok()),
        format!("{} rows", table.rows.len()),
    );
    r.check(
        "2",
        &format!("batch runtime under {MAX_BATCH_SECONDS}s"),
        elapsed.as_secs_f64() < MAX_BATCH_SECONDS,
        secs(elapsed),
    );
}

fn criterion_3(r: &mut Report) {
    let (q, f, phi) = (l7n_quandle(), l7n_map(), l7n_cocycle());
    let a = build_quiver(d("L7n1"), &q, &[f.clone()], &phi).unwrap();
    let b = build_quiver(d("L7n2"), &q, &[f], &phi).unwrap();
    let plain = quiver_isomorphic(&a, &b, false).unwrap();
    let weighted = quiver_isomorphic(&a, &b, true).unwrap();
    r.check("3", "L7n1 and L7n2 quivers isomorphic without weights", plain, "");
    r.check("3", "L7n1 and L7n2 quivers not isomorphic with weights", !weighted, "");
}

fn criterion_4(r: &mut Report) {
    let q = l6_quandle();
    let f = l6_map();
    for name in ["L6a1", "L6a5"] {
        let count = coloring_count(d(name), &q);
        r.check("4", &format!("{name} has 16 colorings"), count == 16, format!("got {count}"));
    }
    let mut all_zero = true;
    let mut all_constant = true;
    for code in 0..4i64.pow(4) {
        let psi: Vec<i64> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
        let phi = coboundary_of(&q, &psi, 4);
        for name in ["L6a1", "L6a5"] {
            for v in enumerate_colorings(d(name), &q) {
                all_zero &= boltzmann_weight(d(name), &q, &phi, &v).unwrap() == 0;
            }
            let p = quiver_polynomial(&build_quiver(d(name), &q, &[f.clone()], &phi).unwrap());
            all_constant &= p.to_string() == "16";
        }
    }
    r.check("4", "every coboundary gives zero Boltzmann weights", all_zero, "256 choices of psi");
    r.check("4", "every coboundary gives the constant quiver polynomial 16", all_constant, "");
    let zero = Cochain2::zero(4, 4).unwrap();
    let a = build_quiver(d("L6a1"), &q, &[f.clone()], &zero).unwrap();
    let b = build_quiver(d("L6a5"), &q, &[f], &zero).unwrap();
    r.check(
        "4",
        "L6a1 and L6a5 quivers for [4,2,4,2] not isomorphic",
        !quiver_isomorphic(&a, &b, false).unwrap(),
        "",
    );
}

fn diag(m: u64, entries: &[i64]) -> ZmMatrix {
    let n = entries.len();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
        .collect();
    ZmMatrix::from_rows(m, n, n, &rows).unwrap()
}

fn criterion_5(r: &mut Report) {
    let q = three_quandle();
    let phi = three_cocycle_z5();
    let x = CharPoly::linear(5, 0).unwrap();

    let f = QuandleMap::from_one_based(&[1, 1, 2], 3).unwrap();
    let quiver = build_quiver(d("L4a1"), &q, &[f], &phi).unwrap();
    let recomputed = build_matrix(&quiver);
    let reference = diag(5, &[2, 2, 2, 2, 2, 0, 0, 0, 0]);
    let stated = CharPoly::linear(5, -3).unwrap().pow(5).mul(&x.pow(4));
    let equivalent = permutation_equivalent(&recomputed, &reference).unwrap();
    if equivalent {
        let p = char_poly(&recomputed).unwrap();
        r.check("5", &format!("L4a1 char poly is {stated}"), p == stated, format!("got {p}"));
    } else {
        let report = DiscrepancyReport::new(&recomputed, &reference, Some(stated)).unwrap();
        println!("L4a1 discrepancy report:\n{report}");
        r.check(
            "5",
            "L4a1 matrix differs from the published one; discrepancy report produced",
            !report.permutation_equivalent,
            format!("recomputed char poly {}", report.recomputed_char_poly),
        );
    }

    let f = QuandleMap::from_one_based(&[2, 1, 3], 3).unwrap();
    let quiver = build_quiver(d("L7a3"), &q, &[f], &phi).unwrap();
    let recomputed = build_matrix(&quiver);
    let mut rows = vec![vec![0i64; 9]; 9];
    for b in [0, 2] {
        rows[b][b] = 1;
        rows[b][b + 1] = 3;
        rows[b + 1][b] = 2;
        rows[b + 1][b + 1] = 4;
    }
    let reference = ZmMatrix::from_rows(5, 9, 9, &rows).unwrap();
    let stated = CharPoly::from_coefficients(5, &[3, 0, 1]).unwrap().pow(2).mul(&x.pow(5));
    let report = DiscrepancyReport::new(&recomputed, &reference, Some(stated)).unwrap();
    println!("L7a3 discrepancy report:\n{report}");
    r.check(
        "5",
        "L7a3 discrepancy report produced",
        !report.is_consistent(),
        format!("recomputed char poly {}", report.recomputed_char_poly),
    );
}

fn criterion_6(r: &mut Report) {
    let tables = [
        vec![vec![1, 3, 4, 2], vec![4, 2, 1, 3], vec![2, 4, 3, 1], vec![3, 1, 2, 4]],
        vec![vec![1, 1, 1, 1], vec![4, 2, 2, 2], vec![3, 3, 3, 3], vec![2, 4, 4, 4]],
        vec![
            vec![1, 3, 2, 5, 4, 1],
            vec![3, 2, 1, 6, 2, 4],
            vec![2, 1, 3, 3, 6, 5],
            vec![5, 6, 4, 4, 1, 2],
            vec![4, 5, 6, 1, 5, 3],
            vec![6, 4, 5, 2, 3, 6],
        ],
        vec![vec![1, 1, 2], vec![2, 2, 1], vec![3, 3, 3]],
        vec![vec![1, 3, 1, 3], vec![4, 2, 4, 2], vec![3, 1, 3, 1], vec![2, 4, 2, 4]],
    ];
    let accepted = tables.iter().filter(|t| Quandle::from_table(t).is_ok()).count();
    r.check("6", "all five operation tables satisfy the quandle axioms", accepted == 5, format!("{accepted}/5"));

    let cocycles = [
        is_cocycle(&l7n_quandle(), &l7n_cocycle()).unwrap(),
        is_cocycle(&six_quandle(), &six_cocycle_z3()).unwrap(),
        is_cocycle(&three_quandle(), &three_cocycle_z5()).unwrap(),
    ];
    r.check("6", "all three example cocycles pass is_cocycle", cocycles.iter().all(|&b| b), format!("{cocycles:?}"));

    let mut dd = true;
    for (_, q) in battery(4) {
        for m in [2, 3, 4, 5] {
            for k in 2..=3 {
                let outer = boundary_matrix(&q, k - 1, m).unwrap();
                let inner = boundary_matrix(&q, k, m).unwrap();
                dd &= outer.mul(&inner).unwrap().is_zero();
            }
        }
    }
    r.check("6", "boundary squares to zero (size <= 4, m in 2..=5)", dd, "");

    let mut rng = StdRng::seed_from_u64(RNG_SEED);
    let (mut cob_cocycle, mut cob_zero) = (true, true);
    for (_, q) in battery(4) {
        for m in [2u64, 3, 4, 5] {
            let psi: Vec<i64> = (0..q.size()).map(|_| rng.gen_range(0..m as i64)).collect();
            let phi = coboundary_of(&q, &psi, m);
            cob_cocycle &= is_cocycle(&q, &phi).unwrap();
            for d in corpus::all() {
                for v in enumerate_colorings(d, &q) {
                    cob_zero &= boltzmann_weight(d, &q, &phi, &v).unwrap() == 0;
                }
            }
        }
    }
    r.check("6", "coboundaries are cocycles", cob_cocycle, "");
    r.check("6", "coboundaries give zero weight on every corpus diagram", cob_zero, "");

    let q = six_quandle();
    let phi = six_cocycle_z3();
    let s = vec![six_map()];
    let mut t1_ok = true;
    let mut diag_ok = true;
    let mut out_ok = true;
    let id = [QuandleMap::identity(6)];
    for d in corpus::all() {
        let inv = cocycle_invariant(d, &q, &phi).unwrap();
        let quiver = build_quiver(d, &q, &s, &phi).unwrap();
        t1_ok &= specialize(&quiver_polynomial(&quiver), Specialization::TToOne) == inv.scaled(s.len() as u64);
        out_ok &= regular(&quiver, s.len());
        let id_quiver = build_quiver(d, &q, &id, &phi).unwrap();
        let mut doubled = WeightPolynomial::zero(3).unwrap();
        for (a, c) in inv.terms() {
            doubled.add_term(2 * a, c);
        }
        diag_ok &= specialize(&quiver_polynomial(&id_quiver), Specialization::DiagonalSt) == doubled;
        out_ok &= regular(&id_quiver, 1);
    }
    r.check("6", "t=1 specialization equals |S| times the invariant", t1_ok, "");
    r.check("6", "identity quiver polynomial equals the diagonal st substitution", diag_ok, "");

    let mut images_ok = true;
    for (_, q) in battery(6) {
        let ends = q.endomorphisms().unwrap();
        for d in corpus::all() {
            let colorings = enumerate_colorings(d, &q);
            let phi = Cochain2::zero(q.size(), 2).unwrap();
            let quiver = build_quiver(d, &q, &ends, &phi).unwrap();
            out_ok &= regular(&quiver, ends.len());
            for f in &ends {
                for v in &colorings {
                    let w = apply_map_to_coloring(&q, f, v).unwrap();
                    images_ok &= colorings.binary_search(&w).is_ok();
                }
            }
        }
    }
    r.check("6", "every vertex has out-degree |S|", out_ok, "");
    r.check("6", "endomorphism images of colorings are colorings", images_ok, "");
}

fn regular(q: &CocycleQuiver, k: usize) -> bool {
    q.out_degrees().iter().all(|&d| d == k)
}

fn random_square(rng: &mut StdRng, m: u64, max: usize) -> ZmMatrix {
    let n = rng.gen_range(1..=max);
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..m as i64)).collect()).collect();
    ZmMatrix::from_rows(m, n, n, &rows).unwrap()
}

fn criterion_7(r: &mut Report) {
    let mut colorings_ok = true;
    let mut pairs = 0;
    for d in corpus::all().iter().filter(|d| d.crossings().len() <= 5) {
        for (_, q) in battery(4) {
            colorings_ok &= enumerate_colorings(d, &q) == brute_force_colorings(d, &q);
            pairs += 1;
        }
    }
    r.check("7", "coloring enumeration matches brute force", colorings_ok, format!("{pairs} diagram/quandle pairs"));

    let mut rng = StdRng::seed_from_u64(RNG_SEED);
    for m in [5u64, 7] {
        let mut ok = 0;
        for _ in 0..RANDOM_MATRICES {
            let a = random_square(&mut rng, m, 5);
            let want = CharPoly::from_coefficients(m, &cofactor_char_poly(&a.lift(), m as i64)).unwrap();
            ok += usize::from(char_poly(&a).unwrap() == want);
        }
        r.check(
            "7",
            &format!("char poly matches cofactor expansion over Z_{m}"),
            ok == RANDOM_MATRICES,
            format!("{ok}/{RANDOM_MATRICES}"),
        );
    }

    let mut ok = 0;
    for _ in 0..RANDOM_MATRICES {
        let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let snf = smith_normal_form(&a);
        let gcds = minor_gcds(&a);
        let mut prod = BigInt::from(1);
        let good = gcds.iter().enumerate().all(|(k, &g)| {
            if k < snf.len() {
                prod *= &snf[k];
                prod == BigInt::from(g)
            } else {
                g == 0
            }
        });
        ok += usize::from(good);
    }
    r.check(
        "7",
        "Smith form satisfies the minor-gcd identity",
        ok == RANDOM_MATRICES,
        format!("{ok}/{RANDOM_MATRICES}"),
    );
}

struct Outputs {
    invariant: WeightPolynomial,
    quiver: QuiverPolynomial,
    char_poly: CharPoly,
    snf: Vec<BigInt>,
}

fn outputs(d: &LinkDiagram, q: &Quandle, phi: &Cochain2, f: &QuandleMap) -> Outputs {
    let quiver = build_quiver(d, q, &[f.clone()], phi).unwrap();
    let mat = build_matrix(&quiver);
    Outputs {
        invariant: cocycle_invariant(d, q, phi).unwrap(),
        quiver: quiver_polynomial(&quiver),
        char_poly: char_poly(&mat).unwrap(),
        snf: smith_normal_form(&mat.lift()),
    }
}

fn criterion_8(r: &mut Report) {
    let mut triples: Vec<(Quandle, Cochain2)> = vec![
        (l7n_quandle(), l7n_cocycle()),
        (six_quandle(), six_cocycle_z3()),
        (three_quandle(), three_cocycle_z5()),
    ];
    for (_, q) in battery(6) {
        for m in [2, 3, 4, 5] {
            let gens = cocycle_space(&q, m).unwrap();
            let sum = gens.iter().fold(Cochain2::zero(q.size(), m).unwrap(), |a, g| a.add(g).unwrap());
            triples.extend(gens.into_iter().map(|g| (q.clone(), g)));
            triples.push((q.clone(), sum));
        }
    }
    let kinked = |name: &str| add_kink(&add_kink(d(name), 0, Sign::Positive, true), 1, Sign::Negative, false);
    let pairs = [
        ("trefoil: closures of s1^3 and (s1 s2)^2", braid_closure(2, &[1, 1, 1]), braid_closure(3, &[1, 2, 1, 2])),
        ("trefoil: corpus diagram and a twice-kinked copy", d("3_1").clone(), kinked("3_1")),
        (
            "L4a1: closures of s1^4 and (s1 s2 s3)^2",
            braid_closure(2, &[1, 1, 1, 1]),
            braid_closure(4, &[1, 2, 3, 1, 2, 3]),
        ),
        ("L4a1: corpus diagram and a twice-kinked copy", d("L4a1").clone(), kinked("L4a1")),
    ];
    for (label, a, b) in &pairs {
        let (mut same, mut total, mut nontrivial) = ([true; 4], 0, false);
        for (q, phi) in &triples {
            for f in q.endomorphisms().unwrap() {
                let (x, y) = (outputs(a, q, phi, &f), outputs(b, q, phi, &f));
                same[0] &= x.invariant == y.invariant;
                same[1] &= x.quiver == y.quiver;
                same[2] &= x.char_poly == y.char_poly;
                same[3] &= x.snf == y.snf;
                nontrivial |= !x.invariant.is_constant();
                total += 1;
            }
        }
        let detail = format!("{total} triples, some invariant non-constant: {nontrivial}");
        for (k, what) in ["cocycle invariant", "quiver polynomial", "char poly", "Smith form"].iter().enumerate() {
            r.check("8", &format!("{label}: {what} agrees"), same[k], detail.clone());
        }
    }
}

#[test]
fn acceptance() {
    let mut r = Report::default();
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    let failures = r.failures();
    println!("{} checks, {} failed", r.lines.len(), failures.len());
    assert!(failures.is_empty(), "failed checks:\n{}", failures.join("\n"));
}
