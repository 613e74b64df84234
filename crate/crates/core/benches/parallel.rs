//! Sequential against rayon-parallel evaluation of the arrival distribution.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dirac_toa::arrival::{arrival_distribution, build_packet, PacketSpec, TimeWindow};
use dirac_toa::grid::build_grid;
use dirac_toa::par::Execution;
use dirac_toa::{DerivOrder, Sign, Spin};

fn arrival(c: &mut Criterion) {
    let spec = PacketSpec::single(1.0, -10.0, 2.0, 0.1, Sign::Plus, Spin::Up);
    let window = TimeWindow::new(-30.0, 55.0, 1701).expect("window");
    let mut group = c.benchmark_group("arrival_distribution");
    group.sample_size(20);
    for n in [128usize, 512] {
        let grid = build_grid(1e-3, 8.0, n, DerivOrder::Fourth).expect("grid");
        let psi = build_packet(&spec, &grid).expect("packet");
        for (label, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(label, n), &psi, |b, psi| {
                b.iter(|| arrival_distribution(black_box(psi), 1.0, &window, exec).expect("run"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, arrival);
criterion_main!(benches);
