//! The built-in spaces and what each supports, plus point membership in a
//! basic open.

use erctopo::rational::rat;
use erctopo::sets::{member_open, OpenSet};
use erctopo::spaces::cantor::{CantorPoint, Word};
use erctopo::spaces::line::interval_index;
use erctopo::spaces::registry::{registry_get, SpaceKind};
use erctopo::Fuel;

fn main() -> erctopo::Result<()> {
    for name in ["real-line", "unit-interval", "line:[0,1]+{2}", "cantor", "star", "qhat", "finite:{a,b;d(a,b)=1}"] {
        let r = registry_get(name)?;
        println!(
            "{:<24} metric: {:<5} ercs: {:<5} compact: {}",
            r.name,
            r.metric.is_some(),
            r.ercs.is_some(),
            r.whole_compact.is_some()
        );
    }

    let line = registry_get("real-line")?;
    let SpaceKind::Line(ls) = &line.kind else { unreachable!() };
    let x = ls.point_name(&rat(1, 3))?;
    let u = OpenSet::of_basics(line.space.clone(), vec![interval_index(&rat(0, 1), &rat(1, 2)).unwrap()]);
    println!("1/3 in (0, 1/2): {:?}", member_open(&x, &u).run(Fuel(10_000)));

    let cantor = registry_get("cantor")?;
    let SpaceKind::Cantor(cs) = &cantor.kind else { unreachable!() };
    let y = cs.point_name(&CantorPoint::parse("01(10)")?);
    let c = OpenSet::of_basics(cantor.space.clone(), vec![Word::parse("011")?.index()]);
    println!("01(10) in [011]: {:?}", member_open(&y, &c).run(Fuel(10_000)));
    Ok(())
}
