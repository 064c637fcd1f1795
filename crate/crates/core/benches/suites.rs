use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bd_lab_core::coeff::Angle;
use bd_lab_core::suites::{run_suite, AlgebraChoice, Suite, SuiteConfig};
use bd_lab_core::Execution;

fn schedules() -> Vec<(&'static str, Execution)> {
    let mut out = vec![("sequential", Execution::Sequential)];
    #[cfg(feature = "parallel")]
    out.push(("parallel", Execution::Parallel));
    out
}

fn bench_suites(c: &mut Criterion) {
    let cases = [(Suite::GammaHom, "1,2,6", 40), (Suite::TraceCompat, "1,3,6", 40), (Suite::RhoHom, "1,2,6", 10)];
    for (suite, sizes, count) in cases {
        let mut group = c.benchmark_group(suite.name());
        group.sample_size(10);
        for (label, exec) in schedules() {
            let mut config = SuiteConfig::new(sizes.parse().unwrap(), AlgebraChoice::Circle(Angle::theta()));
            config.count = count;
            config.exec = exec;
            group.bench_with_input(BenchmarkId::new(label, sizes), &config, |b, config| {
                b.iter(|| black_box(run_suite(suite, config).unwrap()))
            });
        }
        group.finish();
    }
}

criterion_group!(benches, bench_suites);
criterion_main!(benches);
