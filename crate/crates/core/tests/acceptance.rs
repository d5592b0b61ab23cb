//! Acceptance battery. Prints one line per criterion and exits non-zero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use choquet_core::axioms::{
    Analysis, AxiomId, AxiomReport, CheckOptions, ConeRelationTable, NECESSARY, Status, check_acyclicity,
    interaction_cliques_from_prefs, run_checks,
};
use choquet_core::fit::{FitProblem, FitStatus, fit_capacity};
use choquet_core::generate::{block_mobius, random_capacity, random_case, random_model, rng};
use choquet_core::prefs::{PairStatement, PreferenceData};
use choquet_core::relational::choquet_via_relations;
use choquet_core::uniqueness::{CliqueTransform, apply_uniqueness_transform};
use choquet_core::{
    Capacity, Grid, MarginalOrder, MobiusRep, PreferenceStructure, ProductModel, Subset, capacity_of, choquet_mobius,
    choquet_sorted, cliques_from_mobius, enumerate_grid, induced_order,
};
use rand::Rng;
use rand::seq::SliceRandom;

const SEEDS: u64 = 50;
const LIN_TOL: f64 = 1e-9;
const MOBIUS_TOL: f64 = 1e-12;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// The 50 seeded models shared by criteria 5 to 10.
fn suite() -> Vec<(MobiusRep, ProductModel)> {
    (0..SEEDS).map(|s| random_case(s, 3, 3..=4).unwrap()).collect()
}

fn ranks(m: &MobiusRep, model: &ProductModel) -> Vec<i64> {
    let alts = enumerate_grid(model).unwrap();
    induced_order(m, model, &alts).unwrap().ranks().unwrap().to_vec()
}

fn prefs_of(m: &MobiusRep, model: &ProductModel) -> PreferenceStructure {
    induced_order(m, model, &enumerate_grid(model).unwrap()).unwrap()
}

fn transform_round_trip() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let n = 2 + k % 9;
        let c = random_capacity(n, &mut r).unwrap();
        let (back, violations) = capacity_of(&c.to_mobius(), MOBIUS_TOL);
        assert!(violations.is_empty());
        for (a, b) in c.values().iter().zip(back.values()) {
            worst = worst.max((a - b).abs());
        }
    }
    outcome(worst <= MOBIUS_TOL, format!("1000 capacities, n = 2..10, max error {worst:.2e}"))
}

fn form_equivalence() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let n = 1 + k % 10;
        let c = random_capacity(n, &mut r).unwrap();
        let f: Vec<f64> = (0..n).map(|_| r.random_range(0.0..10.0)).collect();
        let d = choquet_sorted(&c, &f).unwrap() - choquet_mobius(&c.to_mobius(), &f).unwrap();
        worst = worst.max(d.abs());
    }
    outcome(worst <= LIN_TOL, format!("1000 pairs, max |sorted - mobius| {worst:.2e}"))
}

fn special_cases() -> Outcome {
    let weights = [0.15, 0.6, 0.25];
    let min = Capacity::minimum(3).unwrap();
    let max = Capacity::maximum(3).unwrap();
    let add = Capacity::additive(&weights).unwrap();
    let mut worst: f64 = 0.0;
    for a in 0..10 {
        for b in 0..10 {
            // 100 points in the unit square, third coordinate fixed
            let f = [f64::from(a) / 9.0, f64::from(b) / 9.0, 0.5];
            let ws: f64 = f.iter().zip(&weights).map(|(x, w)| x * w).sum();
            let expect = [f[0].min(f[1]).min(f[2]), f[0].max(f[1]).max(f[2]), ws];
            for (c, e) in [&min, &max, &add].into_iter().zip(expect) {
                worst = worst.max((choquet_sorted(c, &f).unwrap() - e).abs());
                worst = worst.max((choquet_mobius(&c.to_mobius(), &f).unwrap() - e).abs());
            }
        }
    }
    outcome(worst <= LIN_TOL, format!("min, max, weighted sum on 100 points, max error {worst:.2e}"))
}

fn comonotonic_additivity() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let n = 2 + k % 9;
        let c = random_capacity(n, &mut r).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        // both vectors increase along the same permutation
        let (mut f, mut g) = (vec![0.0; n], vec![0.0; n]);
        let (mut fv, mut gv) = (0.0, 0.0);
        for &i in &perm {
            fv += r.random_range(0.0..2.0);
            gv += r.random_range(0.0..2.0);
            f[i] = fv;
            g[i] = gv;
        }
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let d = choquet_sorted(&c, &sum).unwrap() - choquet_sorted(&c, &f).unwrap() - choquet_sorted(&c, &g).unwrap();
        worst = worst.max(d.abs());
    }
    outcome(worst <= LIN_TOL, format!("1000 comonotonic pairs, max error {worst:.2e}"))
}

fn necessity(models: &[(MobiusRep, ProductModel)]) -> Outcome {
    let opts = CheckOptions { budget: u64::MAX, ..CheckOptions::default() };
    let mut fails = vec![0usize; NECESSARY.len()];
    let mut open = 0;
    for (m, model) in models {
        let reports = run_checks(&prefs_of(m, model), &NECESSARY, &opts);
        for (k, r) in reports.iter().enumerate() {
            match r.status {
                Status::Fail => fails[k] += 1,
                Status::Pass => {}
                _ => open += 1,
            }
        }
    }
    let per: Vec<String> = NECESSARY.iter().zip(&fails).map(|(a, f)| format!("{a} {f}")).collect();
    let passed = fails.iter().all(|&f| f == 0) && open == 0;
    outcome(passed, format!("failing models per axiom: {}; {open} not decided", per.join(", ")))
}

/// Criteria interacting through some subset with mass.
fn interacting(m: &MobiusRep, i: usize, j: usize) -> bool {
    let pair = Subset::from_members(&[i, j]);
    m.support(MOBIUS_TOL).any(|b| pair.is_subset_of(b))
}

fn relation_value_agreement(models: &[(MobiusRep, ProductModel)]) -> Outcome {
    let (mut checked, mut wrong) = (0, 0);
    for (m, model) in models {
        let a = Analysis::new(&prefs_of(m, model)).unwrap();
        let g = a.table.grid();
        for z in 0..g.len() {
            let f = model.scores(&g.coords(z)).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let (zi, zj) = (g.level(z, i), g.level(z, j));
                    let inner = |k: usize, l: usize| l > 0 && l + 1 < g.dims()[k];
                    if i == j || !interacting(m, i, j) || !inner(i, zi) || !inner(j, zj) {
                        continue;
                    }
                    checked += 1;
                    let strict = a.table.s(z, i, j) == Some(true);
                    let equal = a.table.e(z, i, j) == Some(true);
                    if strict != (f[i] > f[j]) || equal != (f[i] == f[j]) {
                        wrong += 1;
                    }
                }
            }
        }
    }
    outcome(wrong == 0, format!("{wrong} of {checked} flags disagree with the values"))
}

fn partition_coverage(models: &[(MobiusRep, ProductModel)]) -> Outcome {
    let (mut bad, mut missing) = (0, 0);
    for (m, model) in models {
        let a = Analysis::new(&prefs_of(m, model)).unwrap();
        let mut seen = vec![false; a.table.grid().len()];
        for c in &a.partition.cells {
            for &z in &c.members {
                seen[z] = true;
            }
        }
        let gaps = seen.iter().filter(|s| !**s).count();
        if gaps > 0 {
            bad += 1;
            missing += gaps;
        }
    }
    outcome(bad == 0, format!("{bad} of {} models leave {missing} points outside every cell", models.len()))
}

fn fit_round_trip(models: &[(MobiusRep, ProductModel)]) -> Outcome {
    let (mut infeasible, mut changed) = (0, 0);
    for (m, model) in models {
        let prefs = prefs_of(m, model);
        let fit = fit_capacity(&FitProblem::with_default_epsilon(prefs.clone()).unwrap()).unwrap();
        match (fit.status, fit.mobius) {
            (FitStatus::Feasible, Some(fitted)) => {
                if ranks(&fitted, model) != prefs.ranks().unwrap() {
                    changed += 1;
                }
            }
            _ => infeasible += 1,
        }
    }
    outcome(infeasible + changed == 0, format!("{infeasible} infeasible, {changed} refits change the ranks"))
}

fn uniqueness_invariance(models: &[(MobiusRep, ProductModel)]) -> Outcome {
    let mut r = rng(9);
    let (mut changed, mut single_err) = (0, 0.0f64);
    for (m, model) in models {
        let original = ranks(m, model);
        let cliques = cliques_from_mobius(m, MOBIUS_TOL);
        for _ in 0..10 {
            let t = CliqueTransform {
                scale: cliques.iter().map(|_| r.random_range(0.2..=5.0)).collect(),
                shift: cliques.iter().map(|_| r.random_range(-2.0..=2.0)).collect(),
                cliques: cliques.clone(),
            };
            let (m2, model2) = apply_uniqueness_transform(m, model, &t).unwrap();
            if ranks(&m2, &model2) != original {
                changed += 1;
            }
        }
        let whole = CliqueTransform {
            cliques: vec![Subset::full(3)],
            scale: vec![r.random_range(0.2..=5.0)],
            shift: vec![r.random_range(-2.0..=2.0)],
        };
        let (m2, _) = apply_uniqueness_transform(m, model, &whole).unwrap();
        for (a, b) in m.coeffs().iter().zip(m2.coeffs()) {
            single_err = single_err.max((a - b).abs());
        }
    }
    let passed = changed == 0 && single_err <= MOBIUS_TOL;
    outcome(passed, format!("{changed} of {} transforms change the ranks, single clique error {single_err:.2e}", 10 * models.len()))
}

fn relational_form(models: &[(MobiusRep, ProductModel)]) -> Outcome {
    let (mut checked, mut wrong, mut errors) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    for (m, model) in models {
        let a = Analysis::new(&prefs_of(m, model)).unwrap();
        for x in enumerate_grid(model).unwrap() {
            checked += 1;
            let direct = choquet_mobius(m, &model.scores(&x).unwrap()).unwrap();
            match choquet_via_relations(m, model, &x, &a.table) {
                Ok(v) if (v - direct).abs() <= LIN_TOL => {}
                Ok(v) => {
                    wrong += 1;
                    worst = worst.max((v - direct).abs());
                }
                Err(_) => errors += 1,
            }
        }
    }
    outcome(wrong + errors == 0, format!("{wrong} of {checked} points differ (max {worst:.3}), {errors} without a minimal coordinate"))
}

fn clique_consistency() -> Outcome {
    let full = |k: &[usize]| Subset::from_members(k);
    let layouts: Vec<(usize, Vec<Subset>)> = vec![
        (3, vec![full(&[0, 1]), full(&[2])]),
        (3, vec![full(&[0, 2]), full(&[1])]),
        (3, vec![full(&[1, 2]), full(&[0])]),
        (3, vec![full(&[0]), full(&[1]), full(&[2])]),
        (3, vec![full(&[0, 1, 2])]),
        (4, vec![full(&[0, 1]), full(&[2, 3])]),
        (4, vec![full(&[0, 3]), full(&[1, 2])]),
        (4, vec![full(&[0, 1, 2]), full(&[3])]),
        (4, vec![full(&[0]), full(&[1, 3]), full(&[2])]),
        (4, vec![full(&[0, 2]), full(&[1]), full(&[3])]),
        (2, vec![full(&[0, 1])]),
        (2, vec![full(&[0]), full(&[1])]),
    ];
    let mut r = rng(11);
    let mut bad = Vec::new();
    for (k, (n, blocks)) in layouts.iter().enumerate() {
        let m = block_mobius(*n, blocks, &mut r).unwrap();
        let model = random_model(*n, 3..=4, &mut r).unwrap();
        let mut from_m = cliques_from_mobius(&m, MOBIUS_TOL);
        let table: ConeRelationTable = Analysis::new(&prefs_of(&m, &model)).unwrap().table;
        let mut from_prefs = interaction_cliques_from_prefs(&table);
        from_m.sort();
        from_prefs.sort();
        if from_m != from_prefs {
            bad.push(k);
        }
    }
    outcome(bad.is_empty(), format!("{} layouts, mismatching: {bad:?}", layouts.len()))
}

fn fails_with_witness(r: &AxiomReport) -> bool {
    r.status == Status::Fail && r.witnesses.first().is_some_and(|w| !w.points.is_empty())
}

fn ranked(values: Vec<Vec<f64>>, ranks: Vec<i64>) -> PreferenceStructure {
    PreferenceStructure::ranked_grid(ProductModel::from_values(values).unwrap(), ranks).unwrap()
}

fn axiom_fails(p: &PreferenceStructure, axiom: AxiomId) -> bool {
    fails_with_witness(&run_checks(p, &[axiom], &CheckOptions::default())[0])
}

fn negative_controls() -> Outcome {
    let mut results: Vec<(AxiomId, bool)> = Vec::new();

    // three alternatives preferred in a cycle
    let line = ProductModel::from_values(vec![vec![0.0, 1.0, 2.0], vec![0.0, 1.0]]).unwrap();
    let cycle = [(0, 1), (1, 2), (2, 0)].map(|(better, worse)| PairStatement { better, worse, strict: true });
    let p = PreferenceStructure::new(line, vec![vec![0, 0], vec![1, 0], vec![2, 0]], PreferenceData::Pairs(cycle.to_vec()))
        .unwrap();
    results.push((AxiomId::A1, axiom_fails(&p, AxiomId::A1)));

    // level 1 beats level 0 on criterion 0 in one context and loses in the other
    let p = ranked(vec![vec![0.0, 1.0], vec![0.0, 1.0]], vec![0, 2, 1, 3]);
    let p2 = ranked(vec![vec![0.0, 1.0], vec![0.0, 1.0]], vec![0, 3, 1, 2]);
    results.push((AxiomId::A2, axiom_fails(&p, AxiomId::A2) || axiom_fails(&p2, AxiomId::A2)));

    // a monotone order on a 5 by 5 grid where both cones at (2,2) break triple cancellation
    let five: Vec<f64> = (0..5).map(f64::from).collect();
    let a3 = vec![0, 1, 3, 5, 7, 1, 2, 5, 6, 8, 2, 5, 6, 8, 9, 4, 7, 8, 9, 10, 7, 8, 9, 11, 12];
    results.push((AxiomId::A3, axiom_fails(&ranked(vec![five.clone(), five.clone()], a3), AxiomId::A3)));

    // 0 S 1, 1 S 2 and 2 S 0 at the origin
    let grid = Grid::new(vec![2, 2, 2], 100).unwrap();
    let mut flags = vec![Some(true); grid.len() * 9];
    for (i, j) in [(1, 0), (2, 1), (0, 2)] {
        flags[i * 3 + j] = Some(false);
    }
    let table = ConeRelationTable::from_flags(grid, MarginalOrder::declared(&[2, 2, 2]), flags);
    results.push((AxiomId::A3Acycl, fails_with_witness(&check_acyclicity(&table, &CheckOptions::default()))));

    // additive 5 by 5 order with one point lifted off its indifference class
    let grid = Grid::new(vec![5, 5], 100).unwrap();
    let sum: Vec<i64> = (0..grid.len()).map(|k| 4 * (grid.level(k, 0) + grid.level(k, 1)) as i64).collect();
    let mut lifted = sum.clone();
    lifted[grid.index(&[2, 1])] += 1;
    results.push((AxiomId::A4, axiom_fails(&ranked(vec![five.clone(), five.clone()], lifted), AxiomId::A4)));

    // two points of one class lifted together: steps survive, sequences drift
    let mut lifted = sum;
    lifted[grid.index(&[2, 1])] += 1;
    lifted[grid.index(&[3, 0])] += 1;
    results.push((AxiomId::A5, axiom_fails(&ranked(vec![five.clone(), five.clone()], lifted), AxiomId::A5)));

    // min order with a strict step where criterion 0 should be inert
    let mut min: Vec<i64> = (0..grid.len()).map(|k| 2 * grid.level(k, 0).min(grid.level(k, 1)) as i64).collect();
    min[grid.index(&[4, 1])] += 1;
    results.push((AxiomId::A6, axiom_fails(&ranked(vec![five.clone(), five], min), AxiomId::A6)));

    let missed: Vec<String> = results.iter().filter(|(_, ok)| !ok).map(|(a, _)| a.to_string()).collect();
    outcome(missed.is_empty(), format!("{} controls, without a failing witness: {missed:?}", results.len()))
}

type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let models = suite();
    let criteria: Vec<Criterion> = vec![
        ("transform round trip", Duration::from_secs(5), Box::new(transform_round_trip)),
        ("form equivalence", Duration::from_secs(5), Box::new(form_equivalence)),
        ("special cases", Duration::from_secs(5), Box::new(special_cases)),
        ("comonotonic additivity", Duration::from_secs(5), Box::new(comonotonic_additivity)),
        ("necessity suite", Duration::from_secs(600), Box::new(|| necessity(&models))),
        ("relation-value agreement", Duration::from_secs(600), Box::new(|| relation_value_agreement(&models))),
        ("partition coverage", Duration::from_secs(600), Box::new(|| partition_coverage(&models))),
        ("fit round trip", Duration::from_secs(300), Box::new(|| fit_round_trip(&models))),
        ("uniqueness invariance", Duration::from_secs(600), Box::new(|| uniqueness_invariance(&models))),
        ("relational form", Duration::from_secs(600), Box::new(|| relational_form(&models))),
        ("clique consistency", Duration::from_secs(600), Box::new(clique_consistency)),
        ("negative controls", Duration::from_secs(600), Box::new(negative_controls)),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let passed = out.passed && took <= *limit;
        failed += usize::from(!passed);
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name}: {} ({:.2?})", k + 1, out.detail, took);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
