use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use valtree::batch::{check_axioms, eval_many, leq_many};
use valtree::examples::vaquie_chain;
use valtree::rational::{frac, rat};
use valtree::{Exec, GroundValuation, Node, Poly, Rat};

fn random_poly(r: &mut ChaCha8Rng, g: &GroundValuation, max_deg: usize) -> Poly {
    let coeffs: Vec<Rat> = (0..=r.gen_range(1..=max_deg))
        .map(|_| rat(r.gen_range(-6..=6)) * g.p_pow(r.gen_range(0..=4)))
        .collect();
    let f = Poly::from_coeffs(coeffs);
    if f.is_zero() {
        Poly::x()
    } else {
        f
    }
}

fn depth_zero_pairs(r: &mut ChaCha8Rng, g: &GroundValuation, n: usize) -> Vec<(Node, Node)> {
    let node = |r: &mut ChaCha8Rng| {
        let a = rat(r.gen_range(0..60));
        Node::depth_zero(g, a, g.rational(frac(r.gen_range(0..=18), 6))).unwrap()
    };
    (0..n).map(|_| (node(r), node(r))).collect()
}

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bench_batch(c: &mut Criterion) {
    let g = GroundValuation::new(7, 3).unwrap();
    let mu = vaquie_chain(&g).unwrap().nodes().unwrap().swap_remove(2);
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let fs: Vec<Poly> = (0..256).map(|_| random_poly(&mut r, &g, 40)).collect();
    let pairs: Vec<(Poly, Poly)> = (0..64).map(|_| (random_poly(&mut r, &g, 20), random_poly(&mut r, &g, 20))).collect();
    let nodes = depth_zero_pairs(&mut r, &g, 4096);

    let mut group = c.benchmark_group("eval_many");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| eval_many(e, &mu, black_box(&fs)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("check_axioms");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| check_axioms(e, &mu, black_box(&pairs)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("leq_many");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| leq_many(e, black_box(&nodes)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);
