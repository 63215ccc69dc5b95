//! Two spaces where compact neighbourhoods do not exist, so the searches
//! for them never accept: the point at infinity of the star, and a rational
//! inside Q within its one-point extension.

use erctopo::ercs::{compact_neighborhood_search, CompactCandidate};
use erctopo::kernel::Enumerator;
use erctopo::metric::{compact_ball_search, MetricPoint};
use erctopo::rational::int;
use erctopo::spaces::qhat::{QhatPoint, QhatSpace};
use erctopo::spaces::star::StarSpace;
use erctopo::Fuel;

fn main() {
    let star = StarSpace::new();
    let inf = MetricPoint::dense(star.clone(), 0);
    for f in [1_000, 100_000] {
        println!(
            "star, compact ball at inf, fuel {f}: {:?}",
            compact_ball_search(&inf, &star.spoke_family()).run(Fuel(f))
        );
    }

    let qh = QhatSpace::new();
    let family = Enumerator::interleave(vec![
        Enumerator::finite(vec![CompactCandidate::new("whole".into(), qh.whole_compact(), |_| true)]),
        qh.finite_family(),
    ]);
    let x = qh.point_name(&QhatPoint::Rational(int(0)), 4);
    for f in [1_000, 100_000] {
        let o = compact_neighborhood_search(&x, &qh.rationals_open(), &family).run(Fuel(f));
        println!("qhat, compact neighbourhood of 0 inside Q, fuel {f}: {o:?}");
    }
}
