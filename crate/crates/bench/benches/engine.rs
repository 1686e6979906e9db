use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use aspt_bench::php_with_proof;
use aspt_core::families::{gen_ephp, gen_ephp_proof, gen_php};
use aspt_core::formats::{parse_program, serialize_program};
use aspt_core::proofkit::{aspt_to_tres, check_tableau_proof};
use aspt_core::tableau::{solve, Preset};
use aspt_core::{bridge, EngineConfig, ExtensionSet};

fn engine(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve-php");
    for n in [4usize, 5, 6] {
        let p = gen_php(n).unwrap();
        for preset in [Preset::Full, Preset::Smodels] {
            let cfg = EngineConfig::preset(preset).with_proof(false);
            g.bench_with_input(BenchmarkId::new(preset.as_str(), n), &p, |b, p| {
                b.iter(|| solve(p, &ExtensionSet::new(), &cfg).unwrap())
            });
        }
    }
    g.finish();

    let cfg = EngineConfig::full().with_lookahead(true).with_proof(false);
    let mut g = c.benchmark_group("solve-ephp-lookahead");
    for n in [3usize, 4] {
        let p = gen_ephp(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| b.iter(|| solve(p, &ExtensionSet::new(), &cfg).unwrap()));
    }
    g.finish();
}

fn proofs(c: &mut Criterion) {
    let (program, proof) = php_with_proof(5);
    c.bench_function("check-tableau-php5", |b| b.iter(|| check_tableau_proof(&program, &proof)));
    c.bench_function("aspt-to-tres-php5", |b| b.iter(|| aspt_to_tres(&program, &proof).unwrap()));
    c.bench_function("gen-ephp-proof-4", |b| b.iter(|| gen_ephp_proof(4).unwrap()));
}

fn plumbing(c: &mut Criterion) {
    let p = gen_ephp(5).unwrap();
    let text = serialize_program(&p);
    c.bench_function("parse-ephp5", |b| b.iter(|| parse_program(&text).unwrap()));
    c.bench_function("to-cnf-ephp5", |b| b.iter(|| bridge::to_cnf(&p)));
}

criterion_group!(benches, engine, proofs, plumbing);
criterion_main!(benches);
