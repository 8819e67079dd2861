//! Timings for the notation arithmetic, the index algebra, stage
//! enumeration, the reflection operators, and cut elimination.

use std::collections::BTreeSet;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mahlo_core::{
    bullet, cumulative_stage, cut_elim_full, embed_foundation, embed_pi2, embed_tautology,
    enumerate_transitive, mh, negate, re_rank, tower, weaken, Budget, CalcConfig, ClassOracle,
    ClassRef, Derivation, Formula, FormulaPool, HFSet, MhConfig, OrdTerm, OrdVec, RuleTag,
    Universe,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gen_term(r: &mut ChaCha8Rng, depth: u32, lambda: bool) -> OrdTerm {
    if depth == 0 {
        return match r.gen_range(0..4) {
            0 => OrdTerm::zero(),
            1 => OrdTerm::from_nat(r.gen_range(1u64..6)),
            2 => OrdTerm::kappa(),
            _ if lambda => OrdTerm::lambda(),
            _ => OrdTerm::kappa(),
        };
    }
    let d = depth - 1;
    match r.gen_range(0..3) {
        0 => gen_term(r, d, lambda).omega_pow(),
        1 => {
            let a = gen_term(r, d, lambda);
            let b = gen_term(r, d, lambda);
            a.add(&b)
        }
        _ => gen_term(r, d, lambda).mul_nat(r.gen_range(1u64..4)),
    }
}

fn ord_arithmetic(c: &mut Criterion) {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let pairs: Vec<(OrdTerm, OrdTerm)> = (0..256)
        .map(|_| {
            let (da, db) = (r.gen_range(0..5), r.gen_range(0..5));
            let a = gen_term(&mut r, da, true);
            let b = gen_term(&mut r, db, true);
            (a, b)
        })
        .collect();
    let mut g = c.benchmark_group("ord");
    g.bench_function("cmp", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.cmp(y));
            }
        })
    });
    g.bench_function("add", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.add(y));
            }
        })
    });
    g.bench_function("mul", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.mul(y));
            }
        })
    });
    g.finish();
}

fn index_algebra(c: &mut Criterion) {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let vecs: Vec<(OrdVec, OrdVec)> = (0..64)
        .map(|_| {
            let mk = |r: &mut ChaCha8Rng| {
                let mut entries = Vec::with_capacity(6);
                for _ in 0..6 {
                    let d = r.gen_range(0..3);
                    entries.push(gen_term(r, d, false));
                }
                OrdVec::new(entries).unwrap()
            };
            let beta = mk(&mut r);
            let alpha = mk(&mut r);
            (beta, alpha)
        })
        .collect();
    let mut g = c.benchmark_group("index");
    g.bench_function("bullet", |b| {
        b.iter(|| {
            for (beta, alpha) in &vecs {
                black_box(bullet(beta, alpha).unwrap());
            }
        })
    });
    g.bench_function("tower", |b| {
        b.iter(|| {
            for (_, alpha) in &vecs {
                black_box(tower(alpha));
            }
        })
    });
    g.finish();
}

fn stage_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("hf");
    g.sample_size(10);
    g.bench_function("enumerate_transitive_4", |b| {
        b.iter(|| black_box(enumerate_transitive(4).unwrap()))
    });
    g.finish();
}

fn reflection(c: &mut Criterion) {
    let all = enumerate_transitive(4).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let family: BTreeSet<Universe> = {
        let pool: Vec<&Universe> = all.iter().collect();
        (0..12)
            .map(|_| pool[r.gen_range(0..pool.len())].clone())
            .collect()
    };
    let pool = FormulaPool::new(1, vec!["(forall x (notin x x))".parse::<Formula>().unwrap()])
        .unwrap();
    let ord_universe: BTreeSet<OrdTerm> = (0u64..3).map(OrdTerm::from_nat).collect();
    let m_top: BTreeSet<Universe> = family.iter().take(2).cloned().collect();
    let cfg = MhConfig { n: 3, ord_universe, m_top };
    let alpha: OrdVec = "[1,0]".parse().unwrap();
    let oracle = ClassOracle::new();
    let mut g = c.benchmark_group("refl");
    g.sample_size(10);
    g.bench_function("mh_level_1", |b| {
        b.iter(|| black_box(mh(1, &alpha, &cfg, &pool, &family, &oracle).unwrap()))
    });
    g.finish();
}

fn demo_config() -> CalcConfig {
    let stage = |n: u32| Universe::new(cumulative_stage(n).unwrap(), Budget::All).unwrap();
    let mut oracle = ClassOracle::new();
    oracle.insert(
        ClassRef::Mh { k: 1, index: "[0]".parse().unwrap() },
        BTreeSet::from([stage(2)]),
    );
    oracle.insert(
        ClassRef::Mh { k: 1, index: "[1]".parse().unwrap() },
        BTreeSet::from([stage(2), stage(3)]),
    );
    CalcConfig::new(2, 0, "[2]".parse().unwrap(), oracle, stage(4)).unwrap()
}

fn join_cut(d1: &Derivation, d2: &Derivation, c: &Formula) -> Derivation {
    let merged = d1.sequent.union(&d2.sequent);
    let left = weaken(d1, &d1.ordinal, &merged.with(negate(c))).unwrap();
    let right = weaken(d2, &d2.ordinal, &merged.with(c.clone())).unwrap();
    let top = left.ordinal.clone().max(right.ordinal.clone());
    Derivation {
        universe: d1.universe.clone(),
        ordinal: top.add_nat(1u64),
        rank: d1.rank,
        sequent: merged,
        rule: RuleTag::Cut { formula: c.clone() },
        premises: vec![left, right],
    }
}

fn calculus(c: &mut Criterion) {
    let cfg = demo_config();
    let delta: Formula = "(exists x (in {} x))".parse().unwrap();
    let assembled = {
        let parts = [
            embed_tautology(&cfg, &delta).unwrap(),
            embed_foundation(
                &cfg,
                &"#2".parse::<HFSet>().unwrap(),
                "x",
                &"(notin x x)".parse().unwrap(),
            )
            .unwrap(),
            embed_pi2(
                &cfg,
                ("x", "y", "z"),
                &"(and (forall-in w x (in w z)) (forall-in w y (in w z)))".parse().unwrap(),
            )
            .unwrap(),
        ];
        let cuts: [Formula; 2] =
            ["(in #1 #2)".parse().unwrap(), "(exists x (in #1 x))".parse().unwrap()];
        let mut it = parts.into_iter();
        let mut d = re_rank(&it.next().unwrap(), 2).unwrap();
        for (i, p) in it.enumerate() {
            d = join_cut(&d, &re_rank(&p, 2).unwrap(), &cuts[i % 2]);
        }
        d
    };
    let mut g = c.benchmark_group("proof");
    g.sample_size(10);
    g.bench_function("embed_tautology", |b| {
        b.iter(|| black_box(embed_tautology(&cfg, &delta).unwrap()))
    });
    g.bench_function("cut_elim_full", |b| {
        b.iter(|| black_box(cut_elim_full(&cfg, &assembled).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, ord_arithmetic, index_algebra, stage_enumeration, reflection, calculus);
criterion_main!(benches);
