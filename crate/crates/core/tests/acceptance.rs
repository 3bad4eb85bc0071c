//! One PASS/FAIL line per acceptance criterion.
//!
//! The target fails only if the set of failing criteria differs from
//! `KNOWN_FAILURES`, so a regression and an unexpected fix both show up.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use sbalg::catalog::{ex1, ex2, ex2_big, ex3};
use sbalg::ext::{nondirect_middle_ext_witness, verify_exact, NonSplit};
use sbalg::graph_maps::{admissible_pairs, compose_in, graph_map_rank, hom_basis_graph, hom_linear, sidedness_law_holds};
use sbalg::modules::{band_module, ExplicitModule, Toolkit};
use sbalg::presentation::Sign;
use sbalg::scan::{theorem_scan, ScanConfig};
use sbalg::stable::{check_main_theorem, endo_algebra, extract_presentation, stable_endo_algebra, two_sided_vanishing_with, ElementKind, Verdict};
use sbalg::strings::{enumerate_strings, string_from_literal, StringWord};
use sbalg::{Algebra, Field, Rational};

type Q = Rational;

const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const CORPUS_BUDGET: Duration = Duration::from_secs(60);
const SCAN_BUDGET: Duration = Duration::from_secs(600);
/// Strings up to this length enter the basis and two-sided checks.
const MAX_LEN: usize = 8;
/// Composition triples are drawn from strings up to this length.
const COMPOSE_LEN: usize = 4;
/// Overlap sequences are built from two-sided pairs between strings up to this length.
const OVERLAP_LEN: usize = 5;
/// 2: stable End of the Example 2 band module computes to 2, not 1.
/// 6: two-sided maps through interior vertices of a commutativity relation
/// can survive in the stable category although the relevant Ext¹ vanishes.
const KNOWN_FAILURES: &[u32] = &[2, 6];

struct Line {
    id: u32,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(id: u32, budget: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Line {
    let t = Instant::now();
    let (mut pass, mut detail) = f();
    let elapsed = t.elapsed();
    if let Some(b) = budget {
        if elapsed > b {
            pass = false;
            detail += &format!("; over budget {b:?}");
        }
    }
    Line { id, pass, detail, elapsed }
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn corpus() -> Vec<(String, Algebra)> {
    let mut files: Vec<PathBuf> = ["ex1.sba", "ex2.sba", "ex3.sba"].iter().map(|f| data_dir().join(f)).collect();
    let mut generated: Vec<PathBuf> = std::fs::read_dir(data_dir().join("corpus"))
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "sba"))
        .collect();
    generated.sort();
    files.extend(generated);
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, Algebra::parse(&text).expect("corpus presentation is special biserial"))
        })
        .collect()
}

fn s(alg: &Algebra, text: &str) -> StringWord {
    string_from_literal(alg, text).unwrap()
}

fn example_one() -> (bool, String) {
    let alg = ex1();
    let tk = Toolkit::<Q>::new(&alg).unwrap();
    let c = [s(&alg, "x- y x- y")];
    let end = endo_algebra(&tk, &c).unwrap();
    let radical: Vec<usize> = (0..end.dim()).filter(|&i| end.elements[i].kind != ElementKind::Identity).collect();
    let zero_products = radical.iter().flat_map(|&a| radical.iter().map(move |&b| (a, b))).filter(|&(a, b)| end.product(a, b).is_empty()).count();
    let m = tk.string_module(&c[0]).unwrap();
    let ext = tk.ext1(&m, &m).unwrap().dim;
    let st = stable_endo_algebra(&tk, &c).unwrap();
    let p = extract_presentation(&st).unwrap().presentation;
    let shape = (p.quiver.vertices.len(), p.quiver.arrows.len());
    let verdict = check_main_theorem(&tk, &c).unwrap();
    let pass = end.dim() == 7
        && radical.len() == 6
        && zero_products == 36
        && ext == 0
        && st.dim() == 1
        && shape == (1, 0)
        && matches!(verdict, Verdict::GentleConfirmed { .. });
    let detail = format!(
        "End {} with {zero_products}/36 zero radical products, Ext1 {ext}, stable End {}, presentation {}v/{}a, {}",
        end.dim(),
        st.dim(),
        shape.0,
        shape.1,
        verdict.name()
    );
    (pass, detail)
}

fn band(alg: &Algebra) -> ExplicitModule<Q> {
    let b = s(alg, "x- x- y x- y y");
    band_module(alg, &b, &Q::one(), 1).unwrap()
}

fn example_two() -> (bool, String) {
    let a = ex2();
    let tka = Toolkit::<Q>::new(&a).unwrap();
    let ma = band(&a);
    let ext = tka.ext1(&ma, &ma).unwrap().dim;
    let stable_a = tka.stable_hom(&ma, &ma).dim();
    let end_a = hom_linear(&ma, &ma).len();
    let b = ex2_big();
    let tkb = Toolkit::<Q>::new(&b).unwrap();
    let mb = band(&b);
    let end_b = hom_linear(&mb, &mb).len();
    let stable_b = tkb.stable_hom(&mb, &mb).dim();
    let three_equal = end_a == end_b && end_b == stable_b;
    let pass = ext > 0 && stable_a == 1 && three_equal;
    let detail = format!(
        "Ext1_A {ext} (nonzero: {}), stable End_A {stable_a} (expected 1), End_A {end_a} = End_B {end_b} = stable End_B {stable_b}: {three_equal}",
        ext > 0
    );
    (pass, detail)
}

fn example_three() -> (bool, String) {
    let alg = ex3();
    let gentle = alg.presentation.validate_gentle().pass;
    let tk = Toolkit::<Q>::new(&alg).unwrap();
    let simple = StringWord::trivial(0, Sign::Plus);
    let m = tk.string_module(&simple).unwrap();
    let ext = tk.ext1(&m, &m).unwrap().dim;
    let end = hom_linear(&m, &m).len();
    let stable = tk.stable_hom(&m, &m).dim();
    let pass = gentle && ext >= 1 && end == 1 && stable == 1;
    (pass, format!("gentle {gentle}, Ext1(S,S) {ext}, End(S) {end}, stable End(S) {stable}"))
}

struct Prepared {
    name: String,
    alg: Algebra,
    strings: Vec<StringWord>,
}

fn prepare() -> Vec<Prepared> {
    corpus()
        .into_iter()
        .map(|(name, alg)| {
            let strings = enumerate_strings(&alg, MAX_LEN);
            Prepared { name, alg, strings }
        })
        .collect()
}

fn basis_agreement(corpus: &[Prepared]) -> (bool, String) {
    let mut pairs = 0;
    let mut failures = Vec::new();
    for p in corpus {
        let tk = Toolkit::<Q>::new(&p.alg).unwrap();
        let mods: Vec<ExplicitModule<Q>> = p.strings.iter().map(|c| tk.string_module(c).unwrap()).collect();
        for (i, c1) in p.strings.iter().enumerate() {
            for (j, c2) in p.strings.iter().enumerate() {
                pairs += 1;
                let maps = hom_basis_graph(&p.alg, c1, c2);
                let dim = hom_linear(&mods[i], &mods[j]).len();
                if maps.len() != dim || graph_map_rank(&maps) != maps.len() {
                    let q = p.alg.quiver();
                    failures.push(format!("{}: {} -> {}", p.name, c1.display(q), c2.display(q)));
                }
            }
        }
    }
    let detail = format!("{} presentations, {pairs} string pairs, {} failures {:?}", corpus.len(), failures.len(), failures.iter().take(3).collect::<Vec<_>>());
    (failures.is_empty(), detail)
}

fn multiplicativity(corpus: &[Prepared]) -> (bool, String) {
    let (mut products, mut failures) = (0usize, Vec::new());
    for p in corpus {
        let alg = &p.alg;
        let strings: Vec<&StringWord> = p.strings.iter().filter(|c| c.len() <= COMPOSE_LEN).collect();
        let n = strings.len();
        let homs: Vec<Vec<_>> =
            strings.iter().map(|a| strings.iter().map(|b| hom_basis_graph(alg, a, b)).collect()).collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for f in &homs[a][b] {
                        for g in &homs[b][c] {
                            products += 1;
                            let matched = compose_in(f, g, &homs[a][c]).is_ok();
                            let law = sidedness_law_holds(alg, f, g, &homs[a][c]).unwrap_or(false);
                            if !(matched && law) {
                                failures.push(format!("{}: {} then {}", p.name, f.pair.display(alg), g.pair.display(alg)));
                            }
                        }
                    }
                }
            }
        }
    }
    let detail = format!("{products} products of graph maps between strings of length <= {COMPOSE_LEN}, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>());
    (failures.is_empty(), detail)
}

/// Vertices strictly inside a side of a commutativity relation.
fn corner_vertices(alg: &Algebra) -> Vec<usize> {
    let q = alg.quiver();
    alg.presentation
        .commutativity_relations()
        .flat_map(|(_, p, r)| [p, r])
        .flat_map(|side| side[..side.len() - 1].iter().map(|&a| q.target(a)))
        .collect()
}

fn two_sided_vanishing(corpus: &[Prepared]) -> (bool, String) {
    let (mut checked, mut skipped, mut failures, mut at_corners) = (0, 0, Vec::new(), 0);
    for p in corpus {
        let tk = Toolkit::<Q>::new(&p.alg).unwrap();
        let corners = corner_vertices(&p.alg);
        let data: Vec<_> = p.strings.iter().map(|c| tk.string_data(c).unwrap()).collect();
        let mut syz = vec![None; data.len()];
        for a in &data {
            for (j, b) in data.iter().enumerate() {
                let pairs = admissible_pairs(&p.alg, &a.word, &b.word);
                if !pairs.iter().any(|x| x.classify().two_sided) {
                    continue;
                }
                let sy = syz[j].get_or_insert_with(|| tk.syzygy(&b.module).unwrap());
                let ext = tk.ext1_from(sy, &a.module).dim;
                let r = two_sided_vanishing_with(&tk, a, &b.module, &b.word, Some(ext)).unwrap();
                checked += r.checked;
                skipped += r.skipped;
                for v in r.violations {
                    let pair = pairs.iter().find(|x| x.display(&p.alg) == v).unwrap();
                    let q = p.alg.quiver();
                    at_corners += pair.fac.e.vertices(q).iter().any(|x| corners.contains(x)) as usize;
                    failures.push(format!("{}: {v}", p.name));
                }
            }
        }
    }
    let detail = format!(
        "{checked} two-sided maps checked, {skipped} skipped (Ext1 nonzero), {} failures ({at_corners} with E through a commutativity corner) {:?}",
        failures.len(),
        failures.iter().take(2).collect::<Vec<_>>()
    );
    (failures.is_empty(), detail)
}

fn overlap_extensions(corpus: &[Prepared]) -> (bool, String) {
    let (mut built, mut by_end_dim, mut failures) = (0, 0, Vec::new());
    let mut a3_and_corpus: Vec<(String, Algebra, Vec<StringWord>)> =
        corpus.iter().map(|p| (p.name.clone(), p.alg.clone(), p.strings.clone())).collect();
    let a3 = sbalg::catalog::a3();
    let a3_strings = enumerate_strings(&a3, OVERLAP_LEN);
    a3_and_corpus.push(("a3".into(), a3, a3_strings));
    for (name, alg, strings) in &a3_and_corpus {
        let tk = Toolkit::<Q>::new(alg).unwrap();
        let small: Vec<&StringWord> = strings.iter().filter(|c| c.len() <= OVERLAP_LEN).collect();
        for c1 in &small {
            for c2 in &small {
                for pair in admissible_pairs(alg, c1, c2) {
                    let cls = pair.classify();
                    let e = &pair.a_l().fac.e;
                    if !cls.two_sided || e.is_direct() || e.is_inverse() || e.is_trivial() {
                        continue;
                    }
                    let Ok(ses) = nondirect_middle_ext_witness::<Q>(alg, &pair) else {
                        failures.push(format!("{name}: no sequence for {}", pair.display(alg)));
                        continue;
                    };
                    built += 1;
                    let exact = verify_exact(&ses);
                    let cert = tk.nonsplit_certificate(&ses).unwrap();
                    let ext = tk.ext1(&ses.right, &ses.left).unwrap().dim;
                    by_end_dim += matches!(cert, NonSplit::EndDimension { .. }) as usize;
                    if !exact || !matches!(cert, NonSplit::EndDimension { .. }) || ext < 1 {
                        failures.push(format!("{name}: {} exact {exact} {cert:?} ext {ext}", pair.display(alg)));
                    }
                }
            }
        }
    }
    let pass = failures.is_empty() && built > 0;
    let detail = format!(
        "{built} sequences, {by_end_dim} certified by End dimension, {} failures {:?}",
        failures.len(),
        failures.iter().take(3).collect::<Vec<_>>()
    );
    (pass, detail)
}

fn scan() -> (bool, String) {
    let cfg = ScanConfig::default();
    let first = theorem_scan(&cfg);
    let again = theorem_scan(&cfg);
    let identical = first.to_json() == again.to_json();
    let s = &first.summary;
    let pass = identical && s.counterexamples == 0 && s.inconclusive == 0 && s.errors == 0 && first.clean();
    let detail = format!(
        "{} trials, verdicts {:?}, {} counterexamples, {} inconclusive, {} errors, rerun identical {identical}",
        s.trials, s.verdicts, s.counterexamples, s.inconclusive, s.errors
    );
    (pass, detail)
}

fn disclosure() -> (bool, String) {
    let readme = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap_or_default();
    let disclosed = readme.contains("derived equivalence") && readme.contains("not reproduced");
    (disclosed, format!("README discloses the unreproduced derived-equivalence claims: {disclosed}"))
}

fn main() {
    let corpus = prepare();
    let lines = vec![
        timed(1, Some(EXAMPLE_BUDGET), example_one),
        timed(2, Some(EXAMPLE_BUDGET), example_two),
        timed(3, Some(EXAMPLE_BUDGET), example_three),
        timed(4, Some(CORPUS_BUDGET), || basis_agreement(&corpus)),
        timed(5, None, || multiplicativity(&corpus)),
        timed(6, None, || two_sided_vanishing(&corpus)),
        timed(7, None, || overlap_extensions(&corpus)),
        timed(8, Some(SCAN_BUDGET), scan),
        timed(9, None, disclosure),
    ];
    let mut failing = Vec::new();
    for l in &lines {
        let tag = if l.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {} [{:.2?}] {}", l.id, l.elapsed, l.detail);
        if !l.pass {
            failing.push(l.id);
        }
    }
    if failing != KNOWN_FAILURES {
        eprintln!("failing criteria {failing:?}, expected exactly {KNOWN_FAILURES:?}");
        std::process::exit(1);
    }
}
