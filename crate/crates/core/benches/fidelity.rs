use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qst_core::couplings::LatticeEngineering;
use qst_core::experiments::{
    run_many_body_mirror_with, run_ring_translation_with, Branch, GridSpec, MirrorExperimentSpec,
    MirrorInitial, PacketSpec, RingExperimentSpec,
};
use qst_core::parallel::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn mirror(c: &mut Criterion) {
    let spec = MirrorExperimentSpec {
        lattice: LatticeEngineering::from_pairs(&[(8, 1), (4, 0), (4, 0)]).unwrap(),
        initial: MirrorInitial::RandomSlater { particles: 16 },
        times: GridSpec::new(0.0, FRAC_PI_2, 64).times().unwrap(),
        seed: 7,
    };
    let mut group = c.benchmark_group("mirror_8x4x4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_many_body_mirror_with(black_box(&spec), exec).unwrap())
        });
    }
    group.finish();
}

fn ring(c: &mut Criterion) {
    let spec = RingExperimentSpec {
        n: 128,
        j: 1.0,
        n_f: 65,
        packet: PacketSpec {
            k0: FRAC_PI_2 + 0.1,
            sigma_k: 0.05,
            branch: Branch::Right,
        },
        a: 8,
        delta: 0.35,
        times: GridSpec::new(0.0, 8.0, 80).times().unwrap(),
    };
    let mut group = c.benchmark_group("ring_128");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_ring_translation_with(black_box(&spec), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, mirror, ring);
criterion_main!(benches);
