use criterion::{black_box, criterion_group, criterion_main, Criterion};
use robosim_bench::fixture;
use robosim_core::{bisect, calibrate_scenario, default_specs, one_at_a_time, run, Metric, SolverConfig};

fn engine(c: &mut Criterion) {
    let (ctx, figure) = fixture("figure1");
    c.bench_function("dynamic_run_6y", |b| b.iter(|| run(black_box(&figure), &ctx).unwrap()));

    let (ctx, baseline) = fixture("baseline");
    c.bench_function("comparative_static", |b| {
        b.iter(|| run(black_box(&baseline), &ctx).unwrap())
    });

    let specs = default_specs(0.1, Metric::OutputGain);
    c.bench_function("sensitivity_oat", |b| {
        b.iter(|| one_at_a_time(black_box(&baseline), &ctx, &specs).unwrap())
    });

    let (ctx, dynamic) = fixture("dynamic_tfp");
    c.bench_function("calibrate_dynamic_tfp", |b| {
        b.iter(|| calibrate_scenario(black_box(&dynamic), &ctx, &SolverConfig::default()).unwrap())
    });

    let solver = SolverConfig::default();
    c.bench_function("bisect_power_law", |b| {
        b.iter(|| bisect(|x| 1.05f64.powf(x) - 1.0, black_box(0.015), &solver).unwrap())
    });
}

criterion_group!(benches, engine);
criterion_main!(benches);
