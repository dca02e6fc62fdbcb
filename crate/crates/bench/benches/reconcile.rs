use afmerge_bench::{books_csv, running_example};
use afmerge_core::{apply_recipe, detect_conflicts, load_csv, merge, stable_labelings};
use criterion::{criterion_group, criterion_main, Criterion};

fn running(c: &mut Criterion) {
    let recipes = running_example();
    let data = load_csv(books_csv()).unwrap();

    c.bench_function("detect_conflicts", |b| b.iter(|| detect_conflicts(&recipes).unwrap()));

    let graph = detect_conflicts(&recipes).unwrap().graph;
    let stable = stable_labelings(&graph);
    c.bench_function("merge_all_stable", |b| {
        b.iter(|| {
            stable
                .iter()
                .map(|s| merge(&recipes, s).unwrap().steps.len())
                .sum::<usize>()
        })
    });

    let merged = merge(&recipes, &stable[0]).unwrap();
    c.bench_function("apply_merged", |b| b.iter(|| apply_recipe(&data, &merged).unwrap()));
}

criterion_group!(benches, running);
criterion_main!(benches);
