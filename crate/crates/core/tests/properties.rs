//! Property tests checked against small independent oracles.

use evoforge::bench::{EcdfLogger, LinearRange};
use evoforge::ea::{select_one, Selection};
use evoforge::edo::estimate_bernoulli;
use evoforge::foundry::EncodedAlgorithm;
use evoforge::moeo::{
    crowding_distance, dominates, hypervolume_2d, nondominated_sort, ObjectiveVector, ParetoArchive,
};
use evoforge::problems::{IncrementalObjective, OneMax, WModel};
use evoforge::{parallel_evaluate, Direction, EvalCounter, Objective, RngStream, Solution};
use proptest::prelude::*;

fn min_vec(v: &[i32]) -> ObjectiveVector {
    ObjectiveVector::minimize(v.iter().map(|&x| x as f64).collect())
}

/// Pareto dominance on raw minimized integers.
fn dom(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Ranks by repeatedly peeling off the points no remaining point dominates.
fn peel_ranks(points: &[Vec<i32>]) -> Vec<usize> {
    let mut rank = vec![usize::MAX; points.len()];
    let mut r = 0;
    while rank.contains(&usize::MAX) {
        let left: Vec<usize> = (0..points.len())
            .filter(|&i| rank[i] == usize::MAX)
            .collect();
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dom(&points[j], &points[i])))
            .collect();
        for i in front {
            rank[i] = r;
        }
        r += 1;
    }
    rank
}

/// Union area of boxes `[p, r]` by inclusion-exclusion over all subsets.
fn union_area(points: &[[i32; 2]], r: [i32; 2]) -> f64 {
    let n = points.len();
    let mut total = 0i64;
    for mask in 1u32..(1 << n) {
        let (mut x, mut y) = (i32::MIN, i32::MIN);
        for (i, p) in points.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x = x.max(p[0]);
                y = y.max(p[1]);
            }
        }
        let area = i64::from(r[0] - x) * i64::from(r[1] - y);
        if mask.count_ones() % 2 == 1 {
            total += area;
        } else {
            total -= area;
        }
    }
    total as f64
}

fn point_sets() -> impl Strategy<Value = Vec<Vec<i32>>> {
    (2usize..=3).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(0i32..8, d), 0..=32))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dominance_is_a_strict_partial_order(
        a in prop::collection::vec(0i32..4, 3),
        b in prop::collection::vec(0i32..4, 3),
        c in prop::collection::vec(0i32..4, 3),
    ) {
        let (va, vb, vc) = (min_vec(&a), min_vec(&b), min_vec(&c));
        prop_assert!(!dominates(&va, &va).unwrap());
        if dominates(&va, &vb).unwrap() {
            prop_assert!(!dominates(&vb, &va).unwrap());
            if dominates(&vb, &vc).unwrap() {
                prop_assert!(dominates(&va, &vc).unwrap());
            }
        }
        prop_assert_eq!(dominates(&va, &vb).unwrap(), dom(&a, &b));
    }

    #[test]
    fn sorting_matches_peeling(points in point_sets()) {
        let vs: Vec<_> = points.iter().map(|p| min_vec(p)).collect();
        let fronts = nondominated_sort(&vs).unwrap();
        prop_assert_eq!(&fronts.rank, &peel_ranks(&points));
        let mut all: Vec<usize> = fronts.fronts.concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..points.len()).collect::<Vec<_>>());
    }

    #[test]
    fn crowding_is_non_negative(points in prop::collection::vec(prop::collection::vec(0i32..10, 2), 0..20)) {
        let vs: Vec<_> = points.iter().map(|p| min_vec(p)).collect();
        let refs: Vec<_> = vs.iter().collect();
        prop_assert!(crowding_distance(&refs).iter().all(|d| *d >= 0.0));
    }

    #[test]
    fn archive_stays_mutually_non_dominated(points in prop::collection::vec(prop::collection::vec(0i32..12, 2), 1..80)) {
        let mut a = ParetoArchive::new();
        for p in &points {
            a.insert(Solution::evaluated((), min_vec(p))).unwrap();
            let m = a.objectives();
            for x in &m {
                for y in &m {
                    prop_assert!(!dominates(x, y).unwrap());
                }
            }
        }
        // Every inserted point is dominated by or equal to some member.
        for p in &points {
            let v = min_vec(p);
            prop_assert!(a.objectives().iter().any(|m| m == &v || dominates(m, &v).unwrap()));
        }
    }

    #[test]
    fn hypervolume_matches_inclusion_exclusion(points in prop::collection::vec((0i32..20, 0i32..20), 0..=12)) {
        let pts: Vec<[i32; 2]> = points.iter().map(|&(x, y)| [x, y]).collect();
        let front: Vec<_> = pts.iter().map(|p| min_vec(p)).collect();
        let hv = hypervolume_2d(&front, &min_vec(&[20, 20])).unwrap();
        prop_assert_eq!(hv, union_area(&pts, [20, 20]));
    }

    #[test]
    fn hypervolume_is_monotone(points in prop::collection::vec((0i32..20, 0i32..20), 1..12), extra in (0i32..20, 0i32..20)) {
        let r = min_vec(&[20, 20]);
        let mut front: Vec<_> = points.iter().map(|&(x, y)| min_vec(&[x, y])).collect();
        let before = hypervolume_2d(&front, &r).unwrap();
        front.push(min_vec(&[extra.0, extra.1]));
        prop_assert!(hypervolume_2d(&front, &r).unwrap() >= before);
    }

    #[test]
    fn encoding_round_trip(sizes in prop::collection::vec(1usize..7, 1..8), seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let e = EncodedAlgorithm(sizes.iter().map(|&s| rng.below(s)).collect());
        let rank = e.to_rank(&sizes).unwrap();
        prop_assert_eq!(EncodedAlgorithm::from_rank(rank, &sizes).unwrap(), e);
    }

    #[test]
    fn bucket_in_range(min in -100.0f64..100.0, width in 0.001f64..100.0, buckets in 1usize..50, v in -1e6f64..1e6) {
        let r = LinearRange::new(min, min + width, buckets).unwrap();
        prop_assert!(r.bucket(v) < buckets);
    }

    #[test]
    fn attainment_is_monotone_and_downward_closed(
        steps in prop::collection::vec((0u64..20, 0.0f64..1.0), 1..30),
    ) {
        let mut logger = EcdfLogger::new(
            LinearRange::new(0.0, 10.0, 6).unwrap(),
            LinearRange::new(0.0, 200.0, 7).unwrap(),
        );
        let (mut evals, mut best) = (0u64, 0.0f64);
        for (de, gain) in steps {
            evals += de;
            best += gain;
            logger.observe(evals, best).unwrap();
        }
        let a = logger.attainment();
        for i in 0..a.len() {
            for j in 0..a[i].len() {
                if j + 1 < a[i].len() {
                    prop_assert!(a[i][j] <= a[i][j + 1]);
                }
                if i > 0 {
                    prop_assert!(a[i][j] <= a[i - 1][j]);
                }
            }
        }
    }

    #[test]
    fn bernoulli_never_degenerate(bits in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 1..20)) {
        let pop: Vec<_> = bits.into_iter().map(Solution::new).collect();
        let m = estimate_bernoulli(&pop).unwrap();
        prop_assert!(m.p.iter().all(|&p| p > 0.0 && p < 1.0));
    }

    #[test]
    fn selection_returns_a_member(fits in prop::collection::vec(1.0f64..100.0, 1..30), seed in any::<u64>(), k in 1usize..6) {
        let pop: Vec<_> = fits.iter().map(|&f| Solution::evaluated((), f)).collect();
        let mut rng = RngStream::new(seed);
        for s in [Selection::Tournament(k), Selection::Roulette, Selection::Best, Selection::Random, Selection::RankLinear(1.5)] {
            for dir in [Direction::Maximize, Direction::Minimize] {
                prop_assert!(select_one(&s, &pop, dir, &mut rng).unwrap() < pop.len());
            }
        }
    }

    #[test]
    fn incremental_matches_full_on_wmodel(seed in any::<u64>(), rugged in any::<bool>()) {
        let table = rugged.then(|| evoforge::problems::adjacent_swap_permutation(20));
        let p = WModel::new(48, 40, 2, table).unwrap();
        let mut rng = RngStream::new(seed);
        let x = evoforge::ea::random_bits(48, &mut rng);
        let f = p.evaluate(&x).unwrap();
        for i in 0..48 {
            let mut y = x.clone();
            y[i] = !y[i];
            prop_assert_eq!(p.flip_eval(&x, f, i).unwrap(), p.evaluate(&y).unwrap());
        }
    }

    #[test]
    fn parallel_evaluation_is_worker_independent(len in 0usize..40, workers in 1usize..9, seed in any::<u64>()) {
        let p = OneMax { n: 30 };
        let mut rng = RngStream::new(seed);
        let pop: Vec<_> = (0..len).map(|_| Solution::new(evoforge::ea::random_bits(30, &mut rng))).collect();
        let mut a = pop.clone();
        let mut b = pop;
        let mut ea = EvalCounter::new(&p);
        let mut eb = EvalCounter::new(&p);
        parallel_evaluate(&mut a, &mut ea, 1).unwrap();
        parallel_evaluate(&mut b, &mut eb, workers).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(ea.count(), eb.count());
        prop_assert_eq!(ea.trace(), eb.trace());
    }
}
