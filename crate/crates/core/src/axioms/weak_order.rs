//! Completeness and transitivity of the stated preference.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AxiomId, AxiomReport, CheckOptions, Tally, Witness};
use crate::prefs::{GridRelation, PreferenceData, PreferenceStructure};

pub fn check_weak_order(prefs: &PreferenceStructure, opts: &CheckOptions) -> AxiomReport {
    let rel = match prefs.relation() {
        Ok(r) => r,
        Err(e) => return AxiomReport::undetermined(AxiomId::A1, format!("{e}")),
    };
    let mut tally = Tally::new(AxiomId::A1, opts);
    if let PreferenceData::Ranked(ranks) = prefs.data() {
        tally.check(ranks.len() as u64);
        tally.note("ranked data form a weak order by construction");
        return tally.finish();
    }
    let grid = rel.grid();
    let points: Vec<usize> = prefs
        .alternatives()
        .iter()
        .map(|x| grid.index(x))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    if let Some(map) = rel.stated_pairs() {
        for (&(x, y), s) in map {
            if GridRelation::is_conflict(s) {
                tally.violation(|| Witness {
                    summary: String::from("contradictory statements about the same pair"),
                    points: vec![("x".into(), grid.coords(x)), ("y".into(), grid.coords(y))],
                });
            }
        }
    }

    let mut missing = Vec::new();
    for (k, &x) in points.iter().enumerate() {
        for &y in &points[k + 1..] {
            tally.check(1);
            if rel.compare(x, y).is_none() {
                tally.unknown();
                missing.push((x, y));
            }
        }
    }

    let m = points.len() as u64;
    let triples = m * m * m;
    let geq = |a: usize, b: usize| matches!(rel.compare(a, b), Some(Ordering::Greater | Ordering::Equal));
    let on_triple = |tally: &mut Tally, x: usize, y: usize, w: usize| {
        if geq(x, y) && geq(y, w) && rel.compare(x, w) == Some(Ordering::Less) {
            tally.violation(|| Witness {
                summary: String::from("x ≽ y and y ≽ w but w ≻ x"),
                points: vec![
                    ("x".into(), grid.coords(x)),
                    ("y".into(), grid.coords(y)),
                    ("w".into(), grid.coords(w)),
                ],
            });
        }
    };
    if triples <= opts.budget {
        for &x in &points {
            for &y in &points {
                for &w in &points {
                    on_triple(&mut tally, x, y, w);
                }
            }
        }
        tally.check(triples);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.budget {
            let pick = |rng: &mut ChaCha8Rng| points[rng.random_range(0..points.len())];
            let (x, y, w) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            on_triple(&mut tally, x, y, w);
        }
        tally.check(opts.budget);
        tally.sampled(opts.budget as f64 / triples as f64);
    }

    if !missing.is_empty() {
        let listed: Vec<String> = missing
            .iter()
            .take(opts.max_witnesses.max(1))
            .map(|&(x, y)| format!("{:?} vs {:?}", grid.coords(x), grid.coords(y)))
            .collect();
        tally.note(format!("{} missing comparisons: {}", missing.len(), listed.join(", ")));
    }
    tally.finish()
}
