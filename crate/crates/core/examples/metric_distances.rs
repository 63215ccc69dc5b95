//! Distances as exact real intervals: point to located set, radius of a
//! ball, and the Hausdorff distance between located sets.

use erctopo::metric::{distance_to_located, hausdorff_distance, radius, MetricContext, MetricPoint};
use erctopo::rational::rat;
use erctopo::spaces::line::LineSet;
use erctopo::spaces::registry::{registry_get, SpaceKind};

fn main() -> erctopo::Result<()> {
    let reg = registry_get("unit-interval")?;
    let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
    let ctx = MetricContext::from_registered(&reg, 100_000)?;
    let x = MetricPoint::rational(ctx.space.clone(), &rat(1, 10))?;
    let k = 10;

    let a = ls.literal_located(LineSet::parse("[1/2,3/4]+{1}")?)?;
    let (lo, hi) = distance_to_located(&ctx, &x, &a)?.approx(k)?;
    println!("d(1/10, [1/2,3/4] ∪ {{1}}) in [{lo}, {hi}]  (exact 2/5)");

    let ball = LineSet::parse("[0,1/3]")?;
    let (lo, hi) = radius(&ctx, &x, &ls.literal_compact(ball.clone()), &ls.literal_overt(ball)).approx(k)?;
    println!("radius of [0,1/3] about 1/10 in [{lo}, {hi}]  (exact 7/30)");

    let b = ls.literal_located(LineSet::parse("[0,1/2]")?)?;
    let c = ls.literal_located(LineSet::parse("[1/2,1]")?)?;
    let (lo, hi) = hausdorff_distance(&ctx, &b, &c)?.approx(k)?;
    println!("H([0,1/2], [1/2,1]) in [{lo}, {hi}]  (exact 1/2)");

    // Finite metric spaces work the same way.
    let fin = registry_get("finite:{a,b,c;d(a,b)=1,d(a,c)=2,d(b,c)=1}")?;
    let SpaceKind::Finite(fs) = &fin.kind else { unreachable!() };
    let fctx = MetricContext::from_registered(&fin, 100_000)?;
    let (lo, hi) = distance_to_located(&fctx, &fctx.point(0), &fs.located_of_mask(0b100))?.approx(k)?;
    println!("finite: d(a, {{c}}) in [{lo}, {hi}]  (exact 2)");
    Ok(())
}
