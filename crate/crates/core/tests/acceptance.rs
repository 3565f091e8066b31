//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Lines go straight to the process stdout so they show up in plain
//! `cargo test` output without `--nocapture`.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_traits::One;
use posscheck::corpus;
use posscheck::factorization::{self, Factor, Factorization, Verdict};
use posscheck::independence::{self, scan_axioms, Axiom, Statement};
use posscheck::markov::{self, MarkovProperty};
use posscheck::{PossibilityTable, Rational, Schema, TNorm, Tolerance, UndirectedGraph, Variable};
use rand::Rng;

type Outcome = Result<String, String>;

fn tol() -> Tolerance {
    Tolerance::DEFAULT
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example_table(id: u8) -> (PossibilityTable, Option<UndirectedGraph>) {
    let m = corpus::example(id).unwrap().model;
    (m.table(tol()).unwrap(), m.graph().unwrap())
}

/// Example tables re-entered independently as row-major oracle tables.
fn oracle_example(id: u8) -> OTable {
    let (n, ones): (usize, Vec<&[usize]>) = match id {
        1 => (3, vec![&[0, 0, 0], &[1, 1, 1]]),
        4 => (5, vec![&[1, 1, 0, 0, 0], &[0, 0, 0, 1, 1]]),
        5 => (
            4,
            vec![
                &[0, 0, 0, 0],
                &[1, 0, 0, 0],
                &[1, 1, 0, 0],
                &[1, 1, 1, 0],
                &[1, 1, 1, 1],
                &[0, 1, 1, 1],
                &[0, 0, 1, 1],
                &[0, 0, 0, 1],
            ],
        ),
        _ => unreachable!(),
    };
    let mut t = OTable { sizes: vec![2; n], values: vec![0.0; 1 << n] };
    for x in ones {
        let i = t.index(x);
        t.values[i] = 1.0;
    }
    t
}

// ---------------------------------------------------------------- AC1

fn rational_residual(base: Base, y: &Rational, x: &Rational) -> Rational {
    if x <= y {
        return Rational::one();
    }
    match base {
        Base::Godel => y.clone(),
        Base::Product => y / x,
        Base::Lukasiewicz => Rational::one() - x + y,
    }
}

fn ac1() -> Outcome {
    let grid: Vec<Rational> = (0..=10).map(|i| Rational::new(i.into(), 10.into())).collect();
    let mut checked = 0;
    for tn in OTNorm::BASES {
        let lib = tn.library();
        for y in &grid {
            for x in &grid {
                let exact = lib.residual(y, x).map_err(|e| e.to_string())?;
                let want = rational_residual(tn.base, y, x);
                ensure(exact == want, || format!("{} exact residual({y}, {x}) = {exact}, want {want}", tn.spec()))?;
                let (yf, xf) = (num_traits::ToPrimitive::to_f64(y).unwrap(), num_traits::ToPrimitive::to_f64(x).unwrap());
                let float = lib.residual(&yf, &xf).map_err(|e| e.to_string())?;
                let want = tn.residual(yf, xf);
                ensure((float - want).abs() <= 1e-9, || format!("{} residual({yf}, {xf}) = {float}, want {want}", tn.spec()))?;
                checked += 2;
            }
        }
    }
    Ok(format!("{checked} grid residuals (exact and float) match the closed forms"))
}

// ---------------------------------------------------------------- AC2

fn ac2() -> Outcome {
    let (t, _) = example_table(1);
    let ot = oracle_example(1);
    for tn in OTNorm::BASES {
        let lib = tn.library();
        let check = |a: &[&str], b: &[&str], s: &[&str]| independence::independent(&t, &lib, &Statement::new(a, b, s), tol()).unwrap();
        let (xy, xz, x_yz) = (check(&["X"], &["Y"], &["Z"]), check(&["X"], &["Z"], &["Y"]), check(&["X"], &["Y", "Z"], &[]));
        ensure(xy.holds && xz.holds && !x_yz.holds, || format!("{}: got {} {} {}", tn.spec(), xy.holds, xz.holds, x_yz.holds))?;
        let w = x_yz.witness.unwrap();
        ensure(w.labels() == ["1", "0", "0"], || format!("{}: witness {w}", tn.spec()))?;
        // oracle: the same verdicts and the same failing cell
        ensure(independent(&ot, tn, &[0], &[1], &[2]) && independent(&ot, tn, &[0], &[2], &[1]), || "oracle disagrees".into())?;
        let wx: Vec<usize> = w.labels().iter().map(|l| l.parse().unwrap()).collect();
        ensure(cell_fails(&ot, tn, &[0], &[1, 2], &[], &wx), || "witness does not fail under the oracle".into())?;
    }
    Ok("I(X,Y|Z) and I(X,Z|Y) hold, I(X,YZ|∅) fails at (1,0,0) under all three bases".into())
}

fn cell_fails(t: &OTable, tn: OTNorm, a: &[usize], b: &[usize], s: &[usize], x: &[usize]) -> bool {
    let cat = |p: &[usize], q: &[usize]| -> Vec<usize> { p.iter().chain(q).copied().collect() };
    let cond = tn.residual(t.marginal(&cat(a, s), x), t.marginal(s, x));
    !close(tn.t(cond, t.marginal(&cat(b, s), x)), t.marginal(&cat(&cat(a, b), s), x))
}

// ---------------------------------------------------------------- AC3

fn ac3() -> Outcome {
    let (t, _) = example_table(2);
    let groups: Vec<Vec<String>> = vec![vec!["X".into()], vec!["Y".into()], vec!["Z".into()], vec![]];
    let g = independence::check_axiom(&t, &TNorm::godel(), Axiom::A5, &groups, tol()).map_err(|e| e.to_string())?;
    ensure(!g.holds, || "Gödel A5 instance holds".into())?;
    ensure(t.is_strictly_positive(), || "table is not strictly positive".into())?;
    for tn in [TNorm::product(), TNorm::lukasiewicz()] {
        let scan = scan_axioms(&t, &tn, &[Axiom::A5], tol(), 6).map_err(|e| e.to_string())?;
        ensure(scan.violation_count(Axiom::A5) == 0, || format!("{tn}: {} A5 violations", scan.violation_count(Axiom::A5)))?;
    }
    Ok(format!("Gödel violates A5 ({}); product and Łukasiewicz scans report 0 A5 violations", g.consequent.statement))
}

// ---------------------------------------------------------------- AC4

fn ac4() -> Outcome {
    let (t, g) = example_table(3);
    let g = g.unwrap();
    let ot = oracle_example(1);
    let og = OGraph::new(3, &[(1, 2)]);
    for tn in OTNorm::BASES {
        let c = markov::chain_report(&t, &g, &tn.library(), tol(), false).map_err(|e| e.to_string())?;
        let got = (c.pairwise.holds, c.local.holds, c.global.holds);
        ensure(got == (true, false, false), || format!("{}: (P,L,G) = {got:?}", tn.spec()))?;
        let want = (pairwise(&ot, &og, tn), local(&ot, &og, tn), global(&ot, &og, tn));
        ensure(want == got, || format!("{}: oracle (P,L,G) = {want:?}", tn.spec()))?;
    }
    Ok("(P, L, G) = (true, false, false) under all three bases".into())
}

// ---------------------------------------------------------------- AC5

fn ac5() -> Outcome {
    let (t, g) = example_table(4);
    let g = g.unwrap();
    ensure(t.schema().cells() == 32, || "table is not 32 cells".into())?;
    let ot = oracle_example(4);
    let og = OGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    let mut slowest = Duration::ZERO;
    for tn in OTNorm::BASES {
        let lib = tn.library();
        let l = markov::check(MarkovProperty::Local, &t, &g, &lib, tol(), false).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let exhaustive = markov::global(&t, &g, &lib, tol(), true).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        let gl = markov::global(&t, &g, &lib, tol(), false).map_err(|e| e.to_string())?;
        ensure(l.holds && !gl.holds && !exhaustive.holds, || format!("{}: L={} G={}", tn.spec(), l.holds, gl.holds))?;
        ensure(local(&ot, &og, tn) && !global(&ot, &og, tn), || format!("{}: oracle disagrees", tn.spec()))?;
        let w = gl.witness.unwrap();
        let want = Statement::new(&["U", "W"], &["Y", "Z"], &["X"]);
        ensure(w.statement == want, || format!("{}: witness statement {}", tn.spec(), w.statement))?;
        let cell = w.witness.unwrap();
        ensure(cell.labels().iter().all(|l| *l == "0"), || format!("{}: witness {cell}", tn.spec()))?;
        // T(π_{UW|X}(0,0|0), π_{YZ|X}(0,0|0)) = 1 while π_{UWYZ|X}(0,0,0,0|0) = 0
        let uw = t.condition(&lib, &["U", "W"], &["X"]).unwrap();
        let yz = t.condition(&lib, &["Y", "Z"], &["X"]).unwrap();
        let joint = t.condition(&lib, &["U", "W", "Y", "Z"], &["X"]).unwrap();
        let combined = lib.apply(&uw.values()[0], &yz.values()[0]).unwrap();
        ensure(combined == 1.0 && joint.values()[0] == 0.0, || {
            format!("{}: T(…) = {combined}, joint {}", tn.spec(), joint.values()[0])
        })?;
    }
    ensure(slowest < Duration::from_secs(5), || format!("exhaustive global took {slowest:?}"))?;
    Ok(format!(
        "L holds, G fails at ({{U,W}} ⟂ {{Y,Z}} | {{X}}) with all-zero assignment, T(1,1)=1 ≠ 0; exhaustive ≤ {:.1} ms",
        slowest.as_secs_f64() * 1e3
    ))
}

// ---------------------------------------------------------------- AC6

fn ac6() -> Outcome {
    let (t, g) = example_table(5);
    let g = g.unwrap();
    ensure(t.schema().cells() == 16 && t.is_crisp(tol()), || "table is not a 16-cell crisp table".into())?;
    let ot = oracle_example(5);
    let og = OGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    // oracle: (0,1,0,0) projects onto a 1 on every edge of the cycle but has π = 0
    let x = [0, 1, 0, 0];
    let on_edges = og.edges().iter().all(|&(i, j)| ot.marginal(&[i, j], &x) == 1.0);
    ensure(on_edges && ot.get(&x) == 0.0, || "oracle witness check failed".into())?;
    for tn in OTNorm::BASES {
        let lib = tn.library();
        let gl = markov::global(&t, &g, &lib, tol(), true).map_err(|e| e.to_string())?;
        ensure(gl.holds && global(&ot, &og, tn), || format!("{}: G fails", tn.spec()))?;
        match factorization::factorizes(&t, &g, &lib, tol()).map_err(|e| e.to_string())? {
            Verdict::No { witness: Some(w), .. } => {
                ensure(w.labels() == ["0", "1", "0", "0"], || format!("{}: witness {w}", tn.spec()))?
            }
            v => return Err(format!("{}: verdict {}", tn.spec(), v.label())),
        }
    }
    Ok("G holds and factorization is refused with witness (0,1,0,0) under all three bases".into())
}

// ---------------------------------------------------------------- AC7 / AC8 / AC9

const SEMIGRAPHOID: [Axiom; 4] = [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4];

fn ac7(tables: &[OTable]) -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    for (k, ot) in tables.iter().enumerate() {
        let t = ot.library();
        for tn in OTNorm::SPECS {
            let scan = scan_axioms(&t, &tn.library(), &SEMIGRAPHOID, tol(), 6).map_err(|e| e.to_string())?;
            instances += SEMIGRAPHOID.iter().map(|&a| scan.instance_count(a)).sum::<usize>();
            let first = scan.violations().next().map(|v| format!("{} violated ({})", v.axiom, v.consequent.statement));
            if let Some(v) = first {
                return Err(format!("table {k}, {}: {v}", tn.spec()));
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    // oracle cross-check of the underlying independence judgements
    let compared = cross_check(&tables[..60])?;
    Ok(format!(
        "{} tables × {} specs, {instances} A1–A4 instances, 0 violations in {:.1} s; {compared} statements agree with the oracle",
        tables.len(),
        OTNorm::SPECS.len(),
        elapsed.as_secs_f64()
    ))
}

/// Every disjoint (A, B | S) with A, B nonempty, library vs oracle.
fn cross_check(tables: &[OTable]) -> Result<usize, String> {
    let mut compared = 0;
    for ot in tables {
        let t = ot.library();
        let n = ot.n();
        let names = ot.names();
        let pick = |mask: u32| -> (Vec<usize>, Vec<&str>) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let nm = idx.iter().map(|&i| names[i]).collect();
            (idx, nm)
        };
        for tn in OTNorm::SPECS {
            let lib = tn.library();
            for am in 1u32..1 << n {
                for bm in 1u32..1 << n {
                    for sm in 0u32..1 << n {
                        if am & bm != 0 || am & sm != 0 || bm & sm != 0 {
                            continue;
                        }
                        let ((a, an), (b, bn), (s, sn)) = (pick(am), pick(bm), pick(sm));
                        let got = independence::independent(&t, &lib, &Statement::new(&an, &bn, &sn), tol()).unwrap().holds;
                        ensure(got == independent(ot, tn, &a, &b, &s), || {
                            format!("{}: I({an:?},{bn:?}|{sn:?}) library {got} vs oracle", tn.spec())
                        })?;
                        compared += 1;
                    }
                }
            }
        }
    }
    Ok(compared)
}

fn ac8(tables: &[OTable]) -> Outcome {
    let mut r = rng(0x5eed_0008);
    let positive: Vec<&OTable> = tables.iter().filter(|t| t.is_positive()).collect();
    let mut graphs = 0;
    for (k, ot) in positive.iter().enumerate() {
        let t = ot.library();
        for tn in OTNorm::SPECS.iter().filter(|tn| tn.archimedean()) {
            let lib = tn.library();
            let scan = scan_axioms(&t, &lib, &[Axiom::A5], tol(), 6).map_err(|e| e.to_string())?;
            let first = scan.violations().next().map(|v| v.consequent.statement.to_string());
            if let Some(v) = first {
                return Err(format!("positive table {k}, {}: A5 violated ({v})", tn.spec()));
            }
            let og = random_graph(&mut r, ot.n());
            let c = markov::chain_report(&t, &og.library(), &lib, tol(), false).map_err(|e| e.to_string())?;
            let (p, l, g) = (c.pairwise.holds, c.local.holds, c.global.holds);
            ensure(p == l && l == g, || format!("positive table {k}, {}, edges {:?}: P={p} L={l} G={g}", tn.spec(), og.edges()))?;
            graphs += 1;
        }
    }
    Ok(format!("{} strictly positive tables: 0 A5 violations; P = L = G on {graphs} random graphs", positive.len()))
}

fn ac9(tables: &[OTable]) -> Outcome {
    let mut r = rng(0x5eed_0009);
    let (mut runs, mut g_not_l, mut l_not_p, mut g_ne_l) = (0, Vec::new(), Vec::new(), Vec::new());
    let mut oracle_runs = 0;
    for (k, ot) in tables.iter().enumerate() {
        let t = ot.library();
        for tn in OTNorm::SPECS {
            let og = random_graph(&mut r, ot.n());
            let c = markov::chain_report(&t, &og.library(), &tn.library(), tol(), false);
            let c = match c {
                Ok(c) => c,
                Err(e) => return Err(format!("table {k}, {}: {e}", tn.spec())),
            };
            let (p, l, g) = (c.pairwise.holds, c.local.holds, c.global.holds);
            if k < 100 {
                let want = (pairwise(ot, &og, tn), local(ot, &og, tn), global(ot, &og, tn));
                ensure(want == (p, l, g), || format!("table {k}, {}: library {:?} vs oracle {want:?}", tn.spec(), (p, l, g)))?;
                oracle_runs += 1;
            }
            let tag = || format!("table {k} {:?} {:?}, {}, edges {:?}", ot.sizes, ot.values, tn.spec(), og.edges());
            if g && !l {
                g_not_l.push(tag());
            }
            if l && !p {
                l_not_p.push(tag());
            }
            if g != l {
                g_ne_l.push(tag());
            }
            runs += 1;
        }
    }
    ensure(g_not_l.is_empty() && l_not_p.is_empty(), || {
        format!("G∧¬L: {}, L∧¬P: {}; first {:?}", g_not_l.len(), l_not_p.len(), g_not_l.first().or(l_not_p.first()))
    })?;
    ensure(g_ne_l.is_empty(), || {
        format!("G ≠ L on {} of {runs} runs with |V| ≤ 4; first: {}", g_ne_l.len(), g_ne_l[0])
    })?;
    Ok(format!("{runs} (table, spec, graph) runs: no G∧¬L, no L∧¬P, G = L throughout; {oracle_runs} runs match the oracle"))
}

// ---------------------------------------------------------------- AC10

fn random_factors(r: &mut impl Rng, sizes: &[usize], cliques: &[Vec<usize>], tn: OTNorm) -> Vec<Vec<f64>> {
    let star: Vec<usize> = sizes.iter().map(|&s| r.random_range(0..s)).collect();
    let k = cliques.len() as f64;
    cliques
        .iter()
        .map(|c| {
            let sub: Vec<usize> = c.iter().map(|&v| sizes[v]).collect();
            assignments(&sub)
                .iter()
                .map(|y| {
                    if c.iter().zip(y).all(|(&v, &val)| star[v] == val) {
                        return 1.0;
                    }
                    match tn.base {
                        Base::Godel => [0.0, 0.25, 0.5, 0.75, 1.0][r.random_range(0..5)],
                        Base::Product => r.random_range(0.05..=1.0),
                        // transformed values sum above k − 1: no truncation
                        Base::Lukasiewicz => tn.inv(1.0 - r.random_range(0.0..=0.8) / k),
                    }
                })
                .collect()
        })
        .collect()
}

fn ac10() -> Outcome {
    let mut r = rng(0x5eed_0010);
    let mut yes_archimedean = 0;
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let n = r.random_range(2..=5);
        let sizes: Vec<usize> = (0..n).map(|_| r.random_range(2..=3)).collect();
        let og = random_graph(&mut r, n);
        let cliques = og.cliques();
        let tn = OTNorm::SPECS[k % OTNorm::SPECS.len()];
        let factors = random_factors(&mut r, &sizes, &cliques, tn);
        let ot = combine(&sizes, &cliques, &factors, tn);
        let t = ot.library();
        let g = og.library();
        let lib = tn.library();

        // the library's own combine agrees with the oracle on the planted factors
        let names = ot.names();
        let planted = Factorization {
            tnorm: lib.clone(),
            factors: cliques
                .iter()
                .zip(&factors)
                .map(|(c, f)| {
                    let sub = OTable { sizes: c.iter().map(|&v| sizes[v]).collect(), values: f.clone() };
                    let vars = c.iter().map(|&v| Variable::indexed(names[v], sizes[v])).collect();
                    let colex = sub.library_values();
                    Factor::new(PossibilityTable::factor(Schema::new(vars).unwrap(), colex).unwrap())
                })
                .collect(),
        };
        let v = factorization::verify(&t, &g, &planted, tol()).map_err(|e| e.to_string())?;
        ensure(v.holds, || format!("instance {k}: planted factors do not verify ({:e})", v.max_error))?;

        let verdict = factorization::factorizes(&t, &g, &lib, tol()).map_err(|e| e.to_string())?;
        let Verdict::Yes { factorization: f } = &verdict else {
            return Err(format!("instance {k} ({}, sizes {sizes:?}, edges {:?}): {:?}", tn.spec(), og.edges(), verdict));
        };
        let back = factorization::combine(f, t.schema()).map_err(|e| e.to_string())?;
        let err = back.values().iter().zip(t.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
        ensure(err <= EPS, || format!("instance {k}: recombination error {err:e}"))?;
        if tn.archimedean() {
            ensure(global(&ot, &og, tn), || format!("instance {k}: Yes but the oracle finds G failing"))?;
            yes_archimedean += 1;
        }
    }
    let (tables, agreements) = godel_brute_force()?;
    Ok(format!(
        "200 planted factorizations re-detected (max recombination error {worst:.1e}); {yes_archimedean} Archimedean Yes satisfy G; \
         Gödel constructor agrees with brute force on {agreements} (table, graph) pairs over {tables} tables"
    ))
}

impl OTable {
    fn library_values(&self) -> Vec<f64> {
        let mut colex = vec![0.0; self.values.len()];
        for x in self.cells() {
            let idx = x.iter().zip(&self.sizes).rev().fold(0, |acc, (&v, &s)| acc * s + v);
            colex[idx] = self.get(&x);
        }
        colex
    }
}

/// For each of the 8 graphs on three binary variables, every table reachable
/// by min-combining {0, ½, 1}-valued clique factors; the constructor must
/// say Yes exactly on the normal ones among them.
fn godel_brute_force() -> Result<(usize, usize), String> {
    let levels = [0.0, 0.5, 1.0];
    let sizes = [2, 2, 2];
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let all_tables: Vec<Vec<f64>> = (0..3usize.pow(8))
        .map(|mut code| {
            (0..8)
                .map(|_| {
                    let v = levels[code % 3];
                    code /= 3;
                    v
                })
                .collect()
        })
        .filter(|v: &Vec<f64>| v.contains(&1.0))
        .collect();
    let mut agreements = 0;
    for mask in 0..8u32 {
        let edges: Vec<(usize, usize)> = (0..3).filter(|b| mask >> b & 1 == 1).map(|b| pairs[b]).collect();
        let og = OGraph::new(3, &edges);
        let cliques = og.cliques();
        let g = og.library();
        let arity: Vec<usize> = cliques.iter().map(|c| 1 << c.len()).collect();
        let total: usize = arity.iter().map(|&a| 3usize.pow(a as u32)).product();
        let mut reachable = std::collections::HashSet::new();
        for mut code in 0..total {
            let factors: Vec<Vec<f64>> = arity
                .iter()
                .map(|&a| {
                    (0..a)
                        .map(|_| {
                            let v = levels[code % 3];
                            code /= 3;
                            v
                        })
                        .collect()
                })
                .collect();
            let t = combine(&sizes, &cliques, &factors, OTNorm::GODEL);
            reachable.insert(t.values.iter().map(|v| (v * 2.0) as u8).collect::<Vec<_>>());
        }
        for values in &all_tables {
            let ot = OTable { sizes: sizes.to_vec(), values: values.clone() };
            let key: Vec<u8> = values.iter().map(|v| (v * 2.0) as u8).collect();
            let brute = reachable.contains(&key);
            let built = factorization::construct_godel(&ot.library(), &g, tol()).map_err(|e| e.to_string())?.is_ok();
            ensure(brute == built, || format!("edges {edges:?}, table {values:?}: brute {brute}, constructor {built}"))?;
            agreements += 1;
        }
    }
    Ok((all_tables.len(), agreements))
}

// ---------------------------------------------------------------- AC11

fn ac11() -> Outcome {
    let mut r = rng(0x5eed_0011);
    let bump = 10.0 * EPS;
    let (mut cells, mut perturbed) = (0, 0);
    for k in 0..100 {
        let ot = grid_table(&mut r, 2, 4, k % 2 == 1);
        let n = ot.n();
        let t = ot.library();
        // random split: nonempty target, the rest (possibly empty) split between given and dropped
        let roles: Vec<u8> = loop {
            let roles: Vec<u8> = (0..n).map(|_| r.random_range(0..3)).collect();
            if roles.contains(&0) {
                break roles;
            }
        };
        let target: Vec<usize> = (0..n).filter(|&i| roles[i] == 0).collect();
        let given: Vec<usize> = (0..n).filter(|&i| roles[i] == 1).collect();
        let tname: Vec<&str> = target.iter().map(|&i| NAMES[i]).collect();
        let gname: Vec<&str> = given.iter().map(|&i| NAMES[i]).collect();
        let scope: Vec<usize> = (0..n).filter(|&i| roles[i] != 2).collect();
        for tn in OTNorm::BASES {
            let cond = t.condition(&tn.library(), &tname, &gname).map_err(|e| e.to_string())?;
            let cs = cond.schema();
            for (idx, &c) in cond.values().iter().enumerate() {
                // cond cells are first-variable-fastest over `scope`
                let mut x = vec![0; n];
                let mut rest = idx;
                for (&v, &s) in scope.iter().zip(&cs.sizes()) {
                    x[v] = rest % s;
                    rest /= s;
                }
                let joint = ot.marginal(&scope, &x);
                let marg = ot.marginal(&given, &x);
                ensure(close(c, tn.residual(joint, marg)), || format!("table {k}, {}: conditional {c} at {x:?}", tn.spec()))?;
                ensure(close(tn.t(c, marg), joint), || format!("table {k}, {}: T(cond, marginal) ≠ joint at {x:?}", tn.spec()))?;
                cells += 1;
                if c < 1.0 {
                    let raised = (c + bump).min(1.0);
                    ensure(!close(tn.t(raised, marg), joint), || {
                        format!("table {k}, {}: raising {c} by 10ε keeps equality at {x:?}", tn.spec())
                    })?;
                    perturbed += 1;
                }
            }
        }
    }
    Ok(format!("{cells} conditional cells recombine to the joint; all {perturbed} sub-1 cells break under a +10ε raise"))
}

// ---------------------------------------------------------------- gate

type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Outcome + 'a>);

#[test]
fn acceptance() {
    let tables = corpus();
    let criteria: Vec<Criterion> = vec![
        ("AC1", "residual tables", Box::new(ac1)),
        ("AC2", "conditional independence on the diagonal table", Box::new(ac2)),
        ("AC3", "intersection fails for Gödel only", Box::new(ac3)),
        ("AC4", "pairwise without local", Box::new(ac4)),
        ("AC5", "local without global", Box::new(ac5)),
        ("AC6", "global without factorization", Box::new(ac6)),
        ("AC7", "semigraphoid suite", Box::new(|| ac7(&tables))),
        ("AC8", "graphoid suite", Box::new(|| ac8(&tables))),
        ("AC9", "Markov chain of implications", Box::new(|| ac9(&tables))),
        ("AC10", "factorization round trip", Box::new(ac10)),
        ("AC11", "greatest solution of conditioning", Box::new(ac11)),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (id, name, f) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => writeln!(out, "{id} PASS {name} ({secs:.2} s): {detail}").unwrap(),
            Err(why) => {
                writeln!(out, "{id} FAIL {name} ({secs:.2} s): {why}").unwrap();
                failed.push(*id);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
