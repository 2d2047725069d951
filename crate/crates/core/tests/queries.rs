use cbst::batch::{batch_query, range_locked_batch, traditional_query, Outcome};
use cbst::boundary::{crossover_lambda, depth_index, theta_boundary, BoundaryParams};
use cbst::{merge_trees, Cbst, Error, Key, Mode};

fn pyramid(n: Key) -> Cbst {
    Cbst::build_from_sorted(&(1..=n).collect::<Vec<_>>(), Mode::Plain).unwrap()
}

#[test]
fn batch_on_seven() {
    let t = pyramid(7);
    let r = batch_query(&t, &[2, 4, 8]).unwrap();
    assert_eq!(r.outcomes, [Outcome::Hit, Outcome::Hit, Outcome::Miss]);
    assert!(r.comparisons <= 10);
    assert_eq!(traditional_query(&t, &[2, 4, 8]).outcomes, r.outcomes);
}

#[test]
fn traditional_visits_within_depth_bound() {
    let t = pyramid(1023);
    let q: Vec<Key> = (1..=1023).collect();
    let r = traditional_query(&t, &q);
    assert_eq!(r.hits(), 1023);
    assert!(r.nodes_visited <= 1023 * 10);
}

#[test]
fn locked_degenerates_to_batch_on_full_span() {
    let t = pyramid(500);
    let q: Vec<Key> = (1..=500).step_by(3).chain([500]).collect();
    let locked = range_locked_batch(&t, &q).unwrap();
    let batch = batch_query(&t, &q).unwrap();
    assert_eq!(locked.outcomes, batch.outcomes);
    assert_eq!(locked.locked_len, Some(500));
}

#[test]
fn locked_single_query_is_one_descent() {
    let t = pyramid(1000);
    let locked = range_locked_batch(&t, &[777]).unwrap();
    let single = traditional_query(&t, &[777]);
    assert_eq!(locked.outcomes, single.outcomes);
    assert_eq!(locked.locked_len, Some(1));
    assert!(locked.comparisons <= 2 * single.comparisons + 1);
}

#[test]
fn boundary_spot_values() {
    assert_eq!(crossover_lambda(16), Ok(0.25));
    assert_eq!(crossover_lambda(2), Ok(1.0));
    assert_eq!(crossover_lambda(1024), Ok(0.1));
    assert!(matches!(crossover_lambda(1), Err(Error::DomainError(_))));
    assert_eq!(depth_index(2, 1.0), Ok(3.0));
    assert_eq!(theta_boundary(0.5), Ok(None));
    assert_eq!(theta_boundary(1.0), Ok(None));
    assert_eq!(theta_boundary(0.25), Ok(Some(0.25)));
    let p = BoundaryParams::new(16, 4).unwrap();
    assert_eq!(p.lambda, 0.25);
    assert!((p.hbar - 7.0).abs() < 1e-12);
}

#[test]
fn merge_examples() {
    let trees = [vec![1, 4, 7], vec![2, 5], vec![3, 6]]
        .iter()
        .map(|k| Cbst::build_from_sorted(k, Mode::Ordinal).unwrap())
        .collect();
    let (t, _) = merge_trees(trees).unwrap();
    assert_eq!(t.in_order(), (1..=7).collect::<Vec<_>>());
    assert_eq!(t.key(t.root().unwrap()), Ok(4));

    let n = 1 << 12;
    let trees = (0..8)
        .map(|r| {
            let keys: Vec<Key> = (0..n / 8).map(|i| i * 8 + r).collect();
            Cbst::build_from_sorted(&keys, Mode::Plain).unwrap()
        })
        .collect();
    let (t, stats) = merge_trees(trees).unwrap();
    assert_eq!(t.len(), n as usize);
    assert_eq!(stats.rounds, 3);
    assert!(stats.comparisons <= 4 * n as u64);
    assert_eq!(t.mode(), Mode::Plain);
}
