//! End-to-end timings for the transforms, the modem pipeline, and the
//! timing metrics at the standard 256-point geometry.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use acofdm::modem::{demodulate, modulate};
use acofdm::sync::{metric_proposed, metric_schmidl, metric_tian};
use acofdm::transforms::{dht, idft};
use acofdm::{Complex64, Scheme};
use acofdm_bench::{payload, setup, standard_modem, N_FFT};

fn bench_transforms(c: &mut Criterion) {
    let spectrum: Vec<Complex64> = (0..N_FFT)
        .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.81).cos()))
        .collect();
    let real: Vec<f64> = (0..N_FFT).map(|k| (k as f64 * 0.53).sin()).collect();
    let mut group = c.benchmark_group("transforms");
    group.bench_function("idft_256", |b| {
        b.iter(|| idft(black_box(&spectrum)).unwrap())
    });
    group.bench_function("dht_256", |b| b.iter(|| dht(black_box(&real)).unwrap()));
    group.finish();
}

fn bench_modem(c: &mut Criterion) {
    let modem = standard_modem(Scheme::Aco);
    let data = payload(&modem, 11);
    let frame = modulate(&modem, &data).unwrap();
    let mut group = c.benchmark_group("modem");
    group.bench_function("modulate_aco_256", |b| {
        b.iter(|| modulate(black_box(&modem), black_box(&data)).unwrap())
    });
    group.bench_function("demodulate_aco_256", |b| {
        b.iter(|| demodulate(black_box(&modem), black_box(frame.samples())).unwrap())
    });
    group.finish();
}

fn bench_metrics(c: &mut Criterion) {
    let s = setup(Scheme::Aco, 12);
    let full = 0..s.received.len() - N_FFT + 1;
    let reach = N_FFT / 4 - 1;
    let tian_range = reach..s.received.len() - reach;
    let mut group = c.benchmark_group("metrics");
    group.bench_function("proposed_full_stream", |b| {
        b.iter(|| metric_proposed(black_box(&s.received), &s.sync, full.clone()).unwrap())
    });
    group.bench_function("tian_full_stream", |b| {
        b.iter(|| metric_tian(black_box(&s.received), N_FFT, tian_range.clone()).unwrap())
    });
    group.bench_function("schmidl_full_stream", |b| {
        b.iter(|| metric_schmidl(black_box(&s.received), N_FFT, full.clone()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_transforms, bench_modem, bench_metrics);
criterion_main!(benches);
