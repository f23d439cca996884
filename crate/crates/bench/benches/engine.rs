use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use slicecat::coend::{coherence_check, ninja_yoneda_check, CoherenceOptions, Engine};
use slicecat::spacetime::{chain, minkowski_lattice};
use slicecat::tensors::Presheaf;
use slicecat::{Caps, CategoryView, CurveUniverse, RegionSet};
use slicecat_bench::lattice_site;

fn curves(c: &mut Criterion) {
    let mut group = c.benchmark_group("curve enumeration");
    for (t, w) in [(2, 3), (3, 3), (4, 3)] {
        let g = minkowski_lattice(t, w).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{t}x{w}")), &g, |b, g| {
            b.iter(|| CurveUniverse::enumerate(black_box(g), 1 << 16).unwrap())
        });
    }
    group.finish();
}

fn hom_bases(c: &mut Criterion) {
    let site = lattice_site(3, 3);
    let slices = site.graph.enumerate_slices(1 << 12).unwrap();
    c.bench_function("C[A,B] over all slice pairs, 3x3", |b| {
        b.iter(|| {
            let mut total = 0;
            for &a in &slices {
                for &z in &slices {
                    total += site.curves_through(a, z).len();
                }
            }
            total
        })
    });
}

fn coend(c: &mut Criterion) {
    let site = lattice_site(2, 3);
    let view = CategoryView::slices(
        site,
        Caps {
            elements: 1 << 22,
            ..Caps::default()
        },
    )
    .unwrap();
    let unit = Presheaf::unit(&view);
    let mut group = c.benchmark_group("coend quotient");
    group.sample_size(10);
    group.bench_function("ninja unit, 2x3", |b| {
        b.iter(|| ninja_yoneda_check(&view, &unit, Engine::Factored).unwrap())
    });

    let c4 = CategoryView::slices(
        std::sync::Arc::new(slicecat::Site::new(chain(4).unwrap(), &Caps::default()).unwrap()),
        Caps::default(),
    )
    .unwrap();
    let y = Presheaf::yoneda(&c4, RegionSet::from_events([1])).unwrap();
    for engine in [Engine::Factored, Engine::Exhaustive] {
        group.bench_function(format!("ninja yoneda, chain4, {engine:?}"), |b| {
            b.iter(|| ninja_yoneda_check(&c4, &y, engine).unwrap())
        });
    }
    let opts = CoherenceOptions {
        engine: Engine::Factored,
        sample: Some((10, 1)),
    };
    group.bench_function("coherence, chain4, 10 tuples", |b| b.iter(|| coherence_check(&c4, opts).unwrap()));
    group.finish();
}

criterion_group!(benches, curves, hom_bases, coend);
criterion_main!(benches);
