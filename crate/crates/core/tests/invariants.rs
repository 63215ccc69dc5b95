//! Property tests for invariants that hold on every input.

use proptest::prelude::*;

use erctopo::hyperspace::{located_not_equal, spec_from_located, Truth};
use erctopo::kernel::{dovetail_any, min_monotone_pair, min_upset_pair, Enumerator};
use erctopo::metric::{hausdorff_distance, MetricContext};
use erctopo::oracle::{closed_masks, lift_finite, oracle_spaces};
use erctopo::rational::{int, rat, Rational};
use erctopo::spaces::line::{decode_interval, interval_index, LineSet};
use erctopo::spaces::registry::{registry_get, SpaceKind};
use erctopo::spaces::BaseIndex;
use erctopo::{Fuel, Outcome, PairingScheme, Semidecision};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|p| rat(p, 12))
}

fn unit_set() -> impl Strategy<Value = Vec<(Rational, Rational)>> {
    prop::collection::vec((unit_rational(), 0i64..=4), 1..=2)
        .prop_map(|v| v.into_iter().map(|(a, w)| (a.clone(), (a + rat(w, 12)).min(int(1)))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_roundtrips(a in 0u128..1 << 40, b in 0u128..1 << 40) {
        prop_assert_eq!(PairingScheme::decode(PairingScheme::encode(a, b)), (a, b));
    }

    #[test]
    fn interval_codes_roundtrip(a in small_rational(), w in 1i64..=20) {
        let b = &a + rat(w, 7);
        let n = interval_index(&a, &b).unwrap();
        prop_assert_eq!(decode_interval(n), (a, b));
    }

    #[test]
    fn upset_search_is_least(ta in 0u64..30, tb in 0u64..30, f in 1u64..3000) {
        let pred = |a: u64, b: u64| a >= ta && b >= tb;
        let brute = (0..f).find(|&t| { let (a, b) = PairingScheme::decode64(t); pred(a, b) });
        prop_assert_eq!(min_upset_pair(Fuel(f), pred).stage(), brute);
        prop_assert_eq!(min_monotone_pair(Fuel(f), pred).stage(), brute);
    }

    #[test]
    fn dovetail_stage_is_replayable(stages in prop::collection::vec(0u64..200, 1..8)) {
        let ps = Enumerator::finite(stages.into_iter().map(Semidecision::accept_at).collect());
        let any = dovetail_any(&ps);
        let s = any.run(Fuel(1_000_000)).stage().unwrap();
        prop_assert_eq!(any.run(Fuel(s + 1)), Outcome::Accepted(s));
        prop_assert_eq!(any.run(Fuel(s)), Outcome::Pending);
    }

    #[test]
    fn line_set_distance_is_a_min(x in small_rational(), parts in prop::collection::vec((small_rational(), 0i64..10), 1..4)) {
        let parts: Vec<(Rational, Rational)> = parts.into_iter().map(|(a, w)| (a.clone(), a + rat(w, 3))).collect();
        let set = LineSet::new(parts.clone());
        let brute = parts.iter().map(|(a, b)| if &x < a { a - &x } else if &x > b { &x - b } else { int(0) }).min();
        prop_assert_eq!(set.distance(&x), brute);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn hausdorff_is_symmetric(a in unit_set(), b in unit_set()) {
        let reg = registry_get("unit-interval").unwrap();
        let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
        let ctx = MetricContext::from_registered(&reg, 100_000).unwrap();
        let la = ls.literal_located(LineSet::new(a)).unwrap();
        let lb = ls.literal_located(LineSet::new(b)).unwrap();
        let ab = hausdorff_distance(&ctx, &la, &lb).unwrap().approx(8).unwrap();
        let ba = hausdorff_distance(&ctx, &lb, &la).unwrap().approx(8).unwrap();
        // both intervals hold the same real, so they overlap
        prop_assert!(ab.0 <= ba.1 && ba.0 <= ab.1);
        prop_assert!(ab.0 >= int(0) - rat(1, 256));
    }
}

/// Truth entries never flip between one and zero as fuel grows.
#[test]
fn truth_entries_are_monotone() {
    let fuels = [1u64, 10, 100, 1_000, 10_000, 100_000];
    for fs in oracle_spaces() {
        let reg = lift_finite(&fs);
        let e = reg.require_ercs().unwrap();
        for c in closed_masks(&fs) {
            let t = spec_from_located(e, &fs.located_of_mask(c));
            for n in 0..fs.base().len() as u128 {
                let seen: Vec<Truth> = fuels.iter().map(|&f| t.entry(BaseIndex(n), Fuel(f))).collect();
                let settled: Vec<&Truth> = seen.iter().filter(|x| !matches!(x, Truth::Bottom)).collect();
                assert!(
                    settled.windows(2).all(|w| w[0] == w[1]),
                    "{}: {c:b} basic {n}: {seen:?}",
                    fs.points().join(",")
                );
                let first = seen.iter().position(|x| !matches!(x, Truth::Bottom));
                if let Some(i) = first {
                    assert!(seen[i..].iter().all(|x| !matches!(x, Truth::Bottom)));
                }
            }
        }
    }
}

/// Inequality of located sets is symmetric and irreflexive on finite spaces.
#[test]
fn not_equal_is_symmetric() {
    for fs in oracle_spaces().into_iter().take(6) {
        let sets: Vec<_> = closed_masks(&fs).into_iter().map(|c| (c, fs.located_of_mask(c))).collect();
        for (c1, a) in &sets {
            for (c2, b) in &sets {
                let ab = located_not_equal(a, b).accepts_within(100_000);
                let ba = located_not_equal(b, a).accepts_within(100_000);
                assert_eq!(ab, ba);
                assert_eq!(ab, c1 != c2);
            }
        }
    }
}
