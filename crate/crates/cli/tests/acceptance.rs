//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use kring::io::generate::{self, shipped_examples};
use kring::io::{parse_spec, SpecDocument};
use kring::linalg::determinant;
use kring::poly::{truncated_quotient, QuotientMethod};
use kring::{
    cohomology_presentation, k_presentation, BigInt, IntPoly, ManifoldSpec, RingPresentation, TermOrder,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn load_fixture(name: &str) -> SpecDocument {
    parse_spec(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn examples() -> Vec<(String, SpecDocument)> {
    let mut all = shipped_examples();
    all.push(("cp2-fixture".into(), load_fixture("cp2.toml")));
    all.push(("hirzebruch2-fixture".into(), load_fixture("hirzebruch2.toml")));
    all
}

fn spec(doc: &SpecDocument) -> ManifoldSpec {
    doc.to_manifold().unwrap()
}

fn k_ring(doc: &SpecDocument) -> RingPresentation {
    k_presentation(&spec(doc), &doc.presentation_options()).unwrap()
}

fn h_ring(doc: &SpecDocument) -> RingPresentation {
    cohomology_presentation(&spec(doc), &doc.presentation_options()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

/// Some degree-one basis element `x` whose powers `1, x, .., x^n` form a
/// Z-basis and with `x^(n+1) = 0`.
fn single_generator(p: &RingPresentation, n: usize) -> Option<usize> {
    (0..p.d).find(|&i| {
        if p.shelling_basis[i].degree() != 1 {
            return false;
        }
        let x = IntPoly::term(p.shelling_basis[i].clone(), 1);
        let powers: Vec<Vec<BigInt>> = (0..=n as u32).map(|e| p.coordinates(&x.pow(e))).collect();
        let unimodular = determinant(&powers).magnitude() == &1u32.into();
        unimodular && p.ideal_contains(&x.pow(n as u32 + 1))
    })
}

fn c1_projective_spaces() -> Outcome {
    let start = Instant::now();
    for n in 1..=4 {
        let doc = generate::simplex(n).unwrap();
        let p = k_ring(&doc);
        ensure(p.rank() == n + 1, || format!("CP{n}: rank {}", p.rank()))?;
        ensure(p.module.free && p.is_conforming(), || format!("CP{n}: {:?}", p.diagnostics))?;
        ensure(p.certificate.as_ref().is_some_and(|c| c.is_unimodular()), || {
            format!("CP{n}: no certificate")
        })?;
        ensure(single_generator(&p, n).is_some(), || format!("CP{n}: no single generator"))?;
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("ranks 2..5, single generator with x^(n+1) = 0, {t:.2?}"))
}

/// Multiplication table of Z[a,b]/(a^2,b^2) in the basis 1, a, b, ab.
fn product_ring_table(i: usize, j: usize, k: usize) -> i64 {
    let exps = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let (a, b) = (exps[i - 1].0 + exps[j - 1].0, exps[i - 1].1 + exps[j - 1].1);
    (exps[k - 1] == (a, b)) as i64
}

fn c2_hirzebruch() -> Outcome {
    let start = Instant::now();
    for k in 0..=3 {
        let doc = generate::hirzebruch(k);
        let p = k_ring(&doc);
        ensure(p.rank() == 4 && p.is_conforming(), || format!("k={k}: rank {} {:?}", p.rank(), p.diagnostics))?;
        ensure(p.shelling.h_vector().0 == [1, 2, 1], || format!("k={k}: h-vector"))?;
        let h = h_ring(&doc);
        ensure(h.graded_ranks.as_deref() == Some(&[1, 2, 1][..]), || {
            format!("k={k}: graded ranks {:?}", h.graded_ranks)
        })?;
        if k == 0 {
            let c = p.normalized_structure_constants().ok_or("k=0: no structure constants")?;
            for i in 1..=4 {
                for j in 1..=4 {
                    for l in 1..=4 {
                        ensure(c.get(i, j, l) == &BigInt::from(product_ring_table(i, j, l)), || {
                            format!("k=0: c[{i}][{j}][{l}] = {}", c.get(i, j, l))
                        })?;
                    }
                }
            }
        }
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("rank 4, h = (1,2,1), graded (1,2,1), k=0 is Z[a,b]/(a^2,b^2), {t:.2?}"))
}

fn c3_bott_tower() -> Outcome {
    let start = Instant::now();
    let doc = generate::bott(&[vec![1, 1, 2], vec![0, 1, -1], vec![0, 0, 1]]).unwrap();
    let p = k_ring(&doc);
    ensure(p.rank() == 8 && p.is_conforming(), || format!("rank {} {:?}", p.rank(), p.diagnostics))?;
    ensure(p.shelling.h_vector().0 == [1, 3, 3, 1], || "h-vector".into())?;
    let h = h_ring(&doc);
    ensure(h.rank() == 8 && h.is_conforming(), || format!("cohomology rank {}", h.rank()))?;
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("rank 8, h = (1,3,3,1), cohomology rank 8, {t:.2?}"))
}

fn c4_interval_partition() -> Outcome {
    let mut faces_checked = 0;
    for (name, doc) in examples() {
        let p = k_ring(&doc);
        let sh = &p.shelling;
        let complex = doc.complex().unwrap();
        let faces = complex.all_faces();
        for &g in &faces {
            let hits: Vec<usize> = (0..sh.len())
                .filter(|&i| sh.restrictions()[i].is_subset(g) && g.is_subset(sh.order()[i]))
                .collect();
            ensure(hits.len() == 1, || format!("{name}: face {g} lies in {} intervals", hits.len()))?;
            ensure(sh.interval_of(g) == Ok(hits[0] + 1), || format!("{name}: interval_of({g})"))?;
        }
        let total: usize = (0..sh.len())
            .map(|i| 1usize << (sh.order()[i].len() - sh.restrictions()[i].len()))
            .sum();
        ensure(total == faces.len(), || format!("{name}: {total} != {} faces", faces.len()))?;
        faces_checked += faces.len();
    }
    Ok(format!("{faces_checked} faces over {} examples", examples().len()))
}

fn c5_basis_certificate() -> Outcome {
    let mut certified = 0;
    for (name, doc) in examples() {
        for p in [k_ring(&doc), h_ring(&doc)] {
            ensure(p.is_conforming(), || format!("{name}: not conforming {:?}", p.diagnostics))?;
            let cert = p.certificate.as_ref().ok_or_else(|| format!("{name}: no certificate"))?;
            ensure(cert.is_unimodular(), || format!("{name}: determinant {}", cert.determinant))?;
            ensure(determinant(&cert.matrix) == cert.determinant, || format!("{name}: stale determinant"))?;
            certified += 1;
        }
    }
    Ok(format!("{certified} presentations with determinant +-1"))
}

/// Rank from standard monomials, trying other term orders if needed.
fn standard_monomial_rank(doc: &SpecDocument, cohomology: bool) -> Option<usize> {
    [TermOrder::DegRevLex, TermOrder::DegLex, TermOrder::Lex].into_iter().find_map(|order| {
        let mut opts = doc.presentation_options();
        opts.order = order;
        let p = if cohomology {
            cohomology_presentation(&spec(doc), &opts)
        } else {
            k_presentation(&spec(doc), &opts)
        }
        .ok()?;
        (p.module.method == QuotientMethod::StandardMonomials).then_some(p.rank())
    })
}

fn c6_oracle_equivalence() -> Outcome {
    let mut compared = 0;
    for (name, doc) in examples().into_iter().filter(|(_, d)| d.m <= 6) {
        for cohomology in [false, true] {
            let p = if cohomology { h_ring(&doc) } else { k_ring(&doc) };
            let gb_rank = standard_monomial_rank(&doc, cohomology)
                .ok_or_else(|| format!("{name}: no order gives unit leading coefficients"))?;
            let gens: Vec<IntPoly> = p
                .sr_relations
                .iter()
                .cloned()
                .chain(p.t_relations.iter().map(|r| r.poly.clone()))
                .collect();
            let b = doc.n * doc.m;
            for bound in [b, b - 1] {
                let t = truncated_quotient(&gens, doc.m, bound);
                ensure(t.rank == gb_rank && t.torsion.is_empty(), || {
                    format!("{name}: B={bound} rank {} torsion {:?} vs {gb_rank}", t.rank, t.torsion)
                })?;
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} presentations agree at B = n*m and B - 1"))
}

fn kring(args: &[&str]) -> (i32, serde_json::Value) {
    let out = Process::new(env!("CARGO_BIN_EXE_kring")).args(args).output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn c7_negative_cases() -> Outcome {
    let path = |n: &str| fixture(n).to_string_lossy().into_owned();
    let (code, r) = kring(&["shell", "--format", "json", &path("disjoint_cycles.toml")]);
    ensure(code == 3 && r["shelling"]["found"] == false, || {
        format!("disjoint cycles: exit {code}")
    })?;

    let (code, r) = kring(&["validate", "--format", "json", &path("bad_lambda.toml")]);
    let faces = &r["validation"]["singular_faces"];
    ensure(code == 3 && faces.as_array().is_some_and(|f| f.contains(&serde_json::json!([1]))), || {
        format!("bad lambda: exit {code}, faces {faces}")
    })?;

    let (code, r) = kring(&["validate", "--format", "json", &path("duplicate_rows.toml")]);
    let faces = &r["validation"]["singular_faces"];
    ensure(code == 3 && *faces == serde_json::json!([[1, 2]]), || {
        format!("duplicate rows: exit {code}, faces {faces}")
    })?;
    Ok("no shelling (exit 3); singular {1}; singular {1,2}".into())
}

fn c8_random_covectors() -> Outcome {
    let mut slowest = Duration::ZERO;
    for (seed, (name, doc)) in examples().into_iter().enumerate() {
        let base = k_ring(&doc);
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let mut extra = doc.clone();
        extra.options.extra_t = (0..50)
            .map(|_| (0..doc.n).map(|_| rng.gen_range(-3i64..=3)).collect())
            .collect();
        let start = Instant::now();
        let p = k_ring(&extra);
        let t = within(start, Duration::from_secs(60)).map_err(|e| format!("{name}: {e}"))?;
        slowest = slowest.max(t);
        ensure(p.rank() == base.rank() && p.module.free, || {
            format!("{name}: rank {} -> {}", base.rank(), p.rank())
        })?;
        ensure(p.is_conforming(), || format!("{name}: {:?}", p.diagnostics))?;
    }
    Ok(format!("50 extra covectors per example, slowest {slowest:.2?}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("projective spaces CP^1..CP^4", c1_projective_spaces),
        ("Hirzebruch surfaces k = 0..3", c2_hirzebruch),
        ("Bott tower on the 3-cube", c3_bott_tower),
        ("interval partition and face count", c4_interval_partition),
        ("shelling basis certificate", c5_basis_certificate),
        ("Groebner rank vs truncated Smith rank", c6_oracle_equivalence),
        ("negative cases", c7_negative_cases),
        ("random extra covectors", c8_random_covectors),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {title}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {title}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
