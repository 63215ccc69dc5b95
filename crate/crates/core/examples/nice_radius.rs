//! A radius below r whose open ball has the closed ball as closure. In
//! {0} ∪ [1,2] around 0 the radius 1 is the one to avoid: B(0,1) = {0} but
//! the closed ball also holds 1.

use erctopo::metric::{nice_radius, MetricContext, MetricPoint};
use erctopo::rational::{int, rat};
use erctopo::spaces::line::LineSet;
use erctopo::spaces::registry::{registry_get, SpaceKind};

fn main() -> erctopo::Result<()> {
    let reg = registry_get("line:{0}+[1,2]")?;
    let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
    let ctx = MetricContext::from_registered(&reg, 100_000)?;
    let x = MetricPoint::rational(ctx.space.clone(), &int(0))?;
    let ball = ls.literal_compact(LineSet::parse("{0}+[1,3/2]")?);
    let r = nice_radius(&ctx, &x, &rat(3, 2), &ball)?;
    for k in [2, 6, 10] {
        let (lo, hi) = r.approx(k)?;
        println!("2^-{k:<2}: r' in [{lo}, {hi}]");
    }
    let (lo, hi) = r.approx(10)?;
    assert!(lo > int(0) && hi < rat(3, 2) && (hi < int(1) || lo > int(1)));
    Ok(())
}
