mod common;

use hypersum::classic::{classic_cells, ClassicMethod, LevinVariant};
use hypersum::diagnostics::assess;
use hypersum::numerics::relative_error;
use hypersum::qtransform::{l_ratio, q_remainder_form, QTable};
use hypersum::{acc, partial_sums, q_direct, q_table, Path, PrecisionConfig, Preset};
use proptest::prelude::*;
use rand::SeedableRng;

fn p() -> PrecisionConfig {
    PrecisionConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn paths_agree(seed in any::<u64>(), pp in 1usize..=3, m in 1usize..=4, n in 1usize..=6) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let series = common::random_series(&mut rng, pp, 1.2);
        let sums = partial_sums(&series, n + m * pp).unwrap();
        let direct = q_direct(&series, &sums, m, n).unwrap();
        for other in [q_remainder_form(&series, &sums, m, n), l_ratio(&series, &sums, m, n)] {
            prop_assert!(relative_error(&other.unwrap(), &direct).unwrap() < p().tolerance(6));
        }
    }
}

fn table_values(t: &QTable) -> Vec<String> {
    t.cells().values().map(|c| format!("{:?}", c)).collect()
}

#[test]
fn tables_are_deterministic() {
    let s = Preset::Ex3.series(p());
    let a = q_table(&s, 15, 7, Path::Operator).unwrap();
    let b = q_table(&s, 15, 7, Path::Operator).unwrap();
    assert_eq!(table_values(&a), table_values(&b));
}

#[test]
fn q_beats_the_classic_methods_on_example3() {
    // x = 1 is logarithmic convergence, where ε and Aitken are known to stall.
    let s = Preset::Ex3.series(p());
    let limit = Preset::Ex3.limit(p());
    let q = q_table(&s, 15, 7, Path::Direct).unwrap();
    let q_best = acc(q.get(1, 7).unwrap().as_ref().unwrap(), &limit, &p()).unwrap();
    let sums = partial_sums(&s, 15).unwrap();
    for method in [ClassicMethod::Epsilon, ClassicMethod::Aitken] {
        let cells = classic_cells(&sums, method, 15, 7).unwrap();
        let report = assess(&cells, &sums, Some(&limit), p());
        let best = report
            .cells
            .values()
            .filter_map(|c| c.acc)
            .fold(0.0, f64::max);
        assert!(best < q_best, "{method:?} reached {best}");
    }
    let cells = classic_cells(&sums, ClassicMethod::Levin(LevinVariant::U), 15, 7).unwrap();
    assert!(cells.values().all(|c| c.is_ok()));
}
