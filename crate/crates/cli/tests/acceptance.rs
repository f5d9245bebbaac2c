//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails. All comparisons are exact.

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use deodhar_core::bottsamelson::{cll_degree, BsModule, MPoly};
use deodhar_core::deodhar::{
    all_words, decorate, enumerate_subexpr, gdim_d, identity_sweep, subset_solutions, verify_lemma_hom,
    DEFAULT_MAX_SUBEXPR_LEN,
};
use deodhar_core::hecke::HeckeElement;
use deodhar_core::oracles::{brute_force_subset_count, kl_element_triangular};
use deodhar_core::{
    BigInt, BigRational, BigUint, Bits, CoxeterSystem, Expression, GroupElement, Hecke, LaurentPoly, Poly,
    Realisation, Side,
};
use deodhar_lab::cache;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const CAP: usize = DEFAULT_MAX_SUBEXPR_LEN;

type Outcome = Result<String, String>;

fn algebra(g: &str) -> Hecke {
    Hecke::new(Arc::new(CoxeterSystem::parse(g).unwrap()))
}

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

fn v_plus_v_inv_pow(m: usize) -> LaurentPoly {
    let vv: LaurentPoly = "-1:1,0,1".parse().unwrap();
    (0..m).fold(LaurentPoly::one(), |acc, _| acc * vv.clone())
}

fn criterion_1() -> Outcome {
    let mut total = 0;
    for (g, len) in [("A3", 8), ("I2(5)", 8), ("I2(7)", 8), ("U3", 8), ("At2", 7)] {
        let alg = algebra(g);
        let sweep = ok(identity_sweep(&alg, len))?;
        ensure(sweep.failures.is_empty(), || {
            format!("{g}: {} expressions violate the defect formula, first {}", sweep.failures.len(), sweep.failures[0].expression)
        })?;
        total += sweep.expressions_checked;
    }
    Ok(format!("defect formula holds for {total} expressions"))
}

fn criterion_2() -> Outcome {
    let mut groups: Vec<(String, usize)> = vec![("A3".into(), 6)];
    groups.extend((2..=8).map(|m| (format!("I2({m})"), m as usize)));
    groups.push(("U2".into(), 6));
    let mut n = 0;
    for (g, len) in groups {
        let alg = algebra(&g);
        let sys = alg.system_arc().clone();
        for x in ok(sys.elements_up_to(len))? {
            let b = ok(alg.kl_basis(&x))?;
            let name = || format!("{g}: b_{}", sys.format_element(&x));
            let oracle = ok(kl_element_triangular(&sys, &x))?;
            ensure(*b == oracle, || format!("{} differs from the triangular solve", name()))?;
            ensure(alg.bar(&b) == *b, || format!("{} is not bar-invariant", name()))?;
            ensure(b.coeff(&x) == LaurentPoly::one(), || format!("{} has top coefficient != 1", name()))?;
            for (y, c) in b.iter() {
                if y != &x {
                    ensure(c.in_v_poly(), || format!("{}: coefficient at {} not in vZ[v]", name(), sys.format_element(y)))?;
                }
                ensure(c.has_nonneg_coeffs(), || format!("{}: negative coefficient", name()))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} KL basis elements agree with the triangular solve"))
}

fn criterion_3() -> Outcome {
    let alg = algebra("A3");
    let sys = alg.system_arc().clone();
    let elements = ok(sys.elements_up_to(6))?;
    let (mut checked, mut pairs, mut dependent) = (0, 0, 0);
    let mut example = None;
    for y in &elements {
        let words = ok(sys.reduced_words(y))?;
        let characters: Vec<HeckeElement<BigInt>> = words.iter().map(|w| alg.b_product(w)).collect();
        for x in elements.iter().filter(|x| sys.bruhat_leq(x, y)) {
            let mut dims = Vec::new();
            for (w, ch) in words.iter().zip(&characters) {
                let ybar = ok(Expression::new(&sys, w.clone()))?;
                let d: LaurentPoly = enumerate_subexpr(&sys, &ybar, Some(x), CAP)
                    .map_err(|e| e.to_string())?
                    .map(|e| LaurentPoly::v_pow(e.defect))
                    .sum();
                ensure(d == ch.coeff(x), || {
                    format!("gdim_D({}, {ybar}) = {d} but the character has {}", sys.format_element(x), ch.coeff(x))
                })?;
                ensure(ok(gdim_d(&alg, x, &ybar, CAP))? == d, || "gdim_d disagrees".into())?;
                checked += 1;
                dims.push((ybar.to_string(), d));
            }
            pairs += 1;
            if dims.iter().any(|(_, d)| *d != dims[0].1) {
                dependent += 1;
                if example.is_none() {
                    let a = dims.iter().find(|(_, d)| *d != dims[0].1).unwrap();
                    example = Some(format!(
                        "x={}: gdim_D over ({}) is {} but over ({}) is {}",
                        sys.format_element(x),
                        dims[0].0,
                        dims[0].1.pretty(),
                        a.0,
                        a.1.pretty()
                    ));
                }
            }
        }
    }
    let equality = format!("gdim_D equals the character coefficient for all {checked} (x, reduced word) pairs");
    match example {
        None => Ok(format!("{equality}; independent of the reduced word for all {pairs} pairs")),
        Some(ex) => Err(format!(
            "{equality}, but gdim_D depends on the reduced word for {dependent} of {pairs} pairs x <= y, e.g. {ex}"
        )),
    }
}

fn criterion_4() -> Outcome {
    let mut groups = vec!["A3".to_string()];
    groups.extend((3..=8).map(|m| format!("I2({m})")));
    let mut n = 0;
    for g in groups {
        let alg = algebra(&g);
        let sys = alg.system_arc().clone();
        for x in ok(sys.elements_up_to(usize::MAX))? {
            for s in sys.generators() {
                if sys.is_descent(&x, s, Side::Right) {
                    continue;
                }
                let r = ok(verify_lemma_hom(&alg, &x, s))?;
                let one = BigInt::from(1);
                ensure(r.dims.iter().all(|d| *d == one), || {
                    format!("{g}: x={} s={} gives {:?}", sys.format_element(&x), s + 1, r.dims)
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("(1,1,1) for all {n} pairs x < xs"))
}

fn census_sweep(g: &str, max_len: usize, expect_smooth: bool) -> Result<(usize, usize), String> {
    let alg = algebra(g);
    let sys = alg.system_arc().clone();
    let elements = ok(sys.elements_up_to(max_len))?;
    let (mut instances, mut brute) = (0, 0);
    for y in &elements {
        let ybar = ok(Expression::new(&sys, sys.lex_reduced_word(y)))?;
        for x in elements.iter().filter(|x| sys.bruhat_leq(x, y)) {
            let name = || format!("{g}: x={} y={}", sys.format_element(x), ybar);
            let census = ok(subset_solutions(&alg, x, &ybar, CAP))?;
            for c in census.table.values() {
                ensure(c.required <= c.available as u64, || format!("{}: c_d > n_d", name()))?;
            }
            let defects: Vec<i32> = ok(enumerate_subexpr(&sys, &ybar, Some(x), CAP))?.map(|e| e.defect).collect();
            let h = ok(alg.kl_poly(x, y))?.h;
            if defects.len() <= 20 {
                let expected = BigUint::from(brute_force_subset_count(&defects, &h));
                ensure(census.count == expected, || {
                    format!("{}: count {} but brute force finds {expected}", name(), census.count)
                })?;
                brute += 1;
            }
            if expect_smooth {
                let gap = (y.length() - x.length()) as i32;
                ensure(h == LaurentPoly::v_pow(gap), || format!("{}: not rationally smooth", name()))?;
                let gdim: LaurentPoly = defects.iter().map(|&d| LaurentPoly::v_pow(d)).sum();
                if gdim == h {
                    ensure(census.forced, || format!("{}: gdim_D = h but not forced", name()))?;
                }
            }
            instances += 1;
        }
    }
    Ok((instances, brute))
}

fn criterion_5() -> Outcome {
    let (a3, a3_brute) = census_sweep("A3", 6, false)?;
    let mut smooth = 0;
    let mut brute = a3_brute;
    let mut groups = vec![("A2".to_string(), 3)];
    groups.extend((2..=8).map(|m| (format!("I2({m})"), m as usize)));
    for (g, len) in groups {
        let (n, b) = census_sweep(&g, len, true)?;
        smooth += n;
        brute += b;
    }
    Ok(format!(
        "{a3} A3 instances feasible, {brute} counts match brute force, {smooth} A2/dihedral instances rationally smooth"
    ))
}

fn criterion_6() -> Outcome {
    let alg = algebra("A3");
    let sys = alg.system_arc().clone();
    let x = ok(sys.parse_element("2"))?;
    let ybar = ok(Expression::parse(&sys, "2 1 3 2"))?;
    let y = ybar.product().clone();
    let oracle = ok(kl_element_triangular(&sys, &y))?.coeff(&x);
    let kl = ok(alg.kl_poly(&x, &y))?;
    ensure(oracle.to_text() == "1:1,0,1", || format!("oracle h = {oracle}"))?;
    ensure(kl.h == oracle, || format!("h = {}", kl.h))?;
    ensure(kl.mu == BigInt::from(1), || format!("mu = {}", kl.mu))?;
    ensure(kl.p.to_text() == "0:1,1", || format!("p = {}", kl.p))?;
    let subs: Vec<_> = ok(enumerate_subexpr(&sys, &ybar, Some(&x), CAP))?.collect();
    let mut defects: Vec<i32> = subs.iter().map(|e| e.defect).collect();
    defects.sort_unstable();
    ensure(defects == [1, 3], || format!("defects {defects:?}"))?;
    let census = ok(subset_solutions(&alg, &x, &ybar, CAP))?;
    ensure(census.count == BigUint::from(1u32) && census.forced, || format!("count {}", census.count))?;
    Ok("h = v + v^3, mu = 1, two subexpressions with defects {1, 3}, one solution".into())
}

fn random_poly(rng: &mut StdRng, rank: usize, max_var_degree: u32) -> Poly {
    let nterms = rng.gen_range(0..6);
    MPoly::from_terms(
        rank,
        (0..nterms).map(|_| {
            let mut e = vec![0u32; rank];
            for _ in 0..rng.gen_range(0..=max_var_degree) {
                e[rng.gen_range(0..rank)] += 1;
            }
            let c = BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into());
            (e, c)
        }),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut words, mut subexprs) = (0, 0);
    for g in ["A2", "A3"] {
        let sys = CoxeterSystem::parse(g).unwrap();
        let ring = Arc::new(ok(Realisation::new(&sys))?);
        let n = sys.rank();
        for w in all_words(n, 6) {
            let ybar = ok(Expression::new(&sys, w))?;
            let m = ok(BsModule::new(ring.clone(), &ybar, 10))?;
            let grk: LaurentPoly = m.graded_rank();
            ensure(grk == v_plus_v_inv_pow(ybar.len()), || format!("{g} {ybar}: grk = {grk}"))?;
            ensure(m.m_chain_eval(&m.c_bot()) == ring.one(), || format!("{g} {ybar}: m-chain of c_bot != 1"))?;
            for e in Bits::all(ybar.len()) {
                let df = ok(decorate(&sys, &ybar, e))?.defect;
                ensure(ok(cll_degree(&sys, &ybar, e))? == df, || format!("{g} {ybar} {e}: cll degree != defect"))?;
                subexprs += 1;
            }
            words += 1;
        }
        // Graded degree 8 means variable degree 4.
        for _ in 0..200 {
            let f = random_poly(&mut rng, n, 4);
            let g2 = random_poly(&mut rng, n, 4);
            for s in sys.generators() {
                let df = ok(ring.demazure(s, &f))?;
                ensure(ok(ring.demazure(s, &df))?.is_zero(), || format!("{g}: d_s^2 f != 0 for f = {f}"))?;
                let lhs = ok(ring.demazure(s, &(&f * &g2)))?;
                let rhs = &(&df * &g2) + &(&ring.reflect(s, &f) * &ok(ring.demazure(s, &g2))?);
                ensure(lhs == rhs, || format!("{g}: twisted Leibniz fails for f = {f}, g = {g2}"))?;
            }
        }
        for _ in 0..100 {
            let len = rng.gen_range(0..=6);
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            let ybar = ok(Expression::new(&sys, word))?;
            let m = ok(BsModule::new(ring.clone(), &ybar, 10))?;
            let f = random_poly(&mut rng, n, 2);
            let g2 = random_poly(&mut rng, n, 2);
            let mut x = m.zero();
            for _ in 0..3 {
                let b = Bits::new(rng.gen::<u32>() & ((1u32 << len) - 1), len);
                x = &x + &m.basis_element(b, random_poly(&mut rng, n, 1));
            }
            let fg = ok(m.left_act(&(&f * &g2), &x))?;
            let f_g = ok(m.left_act(&f, &ok(m.left_act(&g2, &x))?))?;
            ensure(fg == f_g, || format!("{g} {ybar}: left action not associative"))?;
            ensure(ok(m.left_act(&ring.one(), &x))? == x, || "unit does not act trivially".into())?;
            let lr = ok(m.left_act(&f, &x))?.right_act(&g2);
            let rl = ok(m.left_act(&f, &x.right_act(&g2)))?;
            ensure(lr == rl, || format!("{g} {ybar}: left and right actions do not commute"))?;
        }
    }
    Ok(format!("{words} expressions, {subexprs} subexpressions, 400 random polynomials, 200 random triples"))
}

fn cli(args: &[&str], cache_path: Option<&Path>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_deodhar-lab"));
    cmd.args(args).env_remove("DEODHAR_LAB_CACHE");
    if let Some(p) = cache_path {
        cmd.arg("--cache").arg(p);
    }
    let out = cmd.output().expect("run deodhar-lab");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn strip_elapsed(json: &str) -> String {
    json.lines().filter(|l| !l.trim_start().starts_with("\"elapsed_ms\"")).collect::<Vec<_>>().join("\n")
}

fn criterion_8() -> Outcome {
    for args in [
        &["identity-check", "--group", "A3", "--max-len", "5", "--format", "json"][..],
        &["deodhar", "--group", "A3", "--word", "2 1 3 2", "--x", "2", "--format", "json"],
        &["classify", "--group", "A3", "--max-len", "6", "--format", "json"],
    ] {
        let (c1, a, _) = cli(args, None);
        let (c2, b, _) = cli(args, None);
        ensure(c1 == 0 && c2 == 0, || format!("{args:?} exited with {c1}/{c2}"))?;
        ensure(strip_elapsed(&a) == strip_elapsed(&b), || format!("{args:?} output differs between runs"))?;
        let elapsed_lines = a.lines().filter(|l| l.contains("\"elapsed_ms\"")).count();
        ensure(elapsed_lines == 1, || "expected exactly one elapsed_ms line".into())?;
    }

    let dir = ok(tempfile::tempdir())?;
    let path = dir.path().join("a3.klcache");
    let sweep = ["classify", "--group", "A3", "--max-len", "6", "--format", "json"];
    let (code, first, _) = cli(&sweep, Some(&path));
    ensure(code == 0, || format!("classify with cache exited {code}"))?;
    let text = ok(std::fs::read_to_string(&path))?;

    let reference = algebra("A3");
    for x in ok(reference.system().elements_up_to(usize::MAX))? {
        ok(reference.kl_basis(&x))?;
    }
    ensure(reference.kl_table().len() == 24, || "reference table incomplete".into())?;
    let loaded = algebra("A3");
    let n = ok(cache::load(&path, &loaded, true))?;
    ensure(n == 24, || format!("cache holds {n} elements, expected 24"))?;
    let as_pairs = |alg: &Hecke| -> Vec<(GroupElement, HeckeElement<BigInt>)> {
        alg.kl_table().into_iter().map(|(k, v)| (k, (*v).clone())).collect()
    };
    ensure(as_pairs(&loaded) == as_pairs(&reference), || "reloaded table differs".into())?;
    ensure(cache::render(&loaded) == text, || "re-rendered cache differs from the file".into())?;
    let (code, second, _) = cli(&[&sweep[..], &["--verify-cache"]].concat(), Some(&path));
    ensure(code == 0 && strip_elapsed(&first) == strip_elapsed(&second), || "cached rerun differs".into())?;

    let (code, _, err) = cli(&["klpoly", "--group", "A2", "--x", "1", "--y", "1"], Some(&path));
    ensure(code == 2 && err.contains("cache is for group A3, not A2"), || format!("mismatch: exit {code}, {err}"))?;

    let bad = dir.path().join("bad.klcache");
    let mut lines: Vec<&str> = text.lines().collect();
    let truncated = lines[5].rsplit_once('\t').unwrap().0.to_string();
    lines[5] = &truncated;
    ok(std::fs::write(&bad, lines.join("\n")))?;
    let (code, _, err) = cli(&["klpoly", "--group", "A3", "--x", "1", "--y", "1"], Some(&bad));
    ensure(code == 2 && err.contains("bad.klcache:6:"), || format!("corruption: exit {code}, {err}"))?;

    Ok("JSON identical across runs, 24-element A3 cache round-trips, mismatch and corruption rejected".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Deodhar identity sweep", criterion_1),
        ("KL self-consistency", criterion_2),
        ("graded dimension of D_{x,ybar}", criterion_3),
        ("Lemma (hom)", criterion_4),
        ("subset census", criterion_5),
        ("specific values", criterion_6),
        ("Bott-Samelson layer", criterion_7),
        ("CLI and cache", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {} ({name}, {secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}, {secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
