//! Compact, overt and closed sets on the line: inclusion, meeting,
//! intersection and union, each as a semidecision.

use erctopo::rational::rat;
use erctopo::sets::{compact_subset, intersect_closed_compact, not_subset, overt_meets, union_compact, OpenSet};
use erctopo::spaces::line::{interval_index, LineSet};
use erctopo::spaces::registry::{registry_get, SpaceKind};
use erctopo::Fuel;

fn main() -> erctopo::Result<()> {
    let reg = registry_get("real-line")?;
    let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
    let fuel = Fuel(100_000);
    let open = |a: (i64, i64), b: (i64, i64)| {
        OpenSet::of_basics(reg.space.clone(), vec![interval_index(&rat(a.0, a.1), &rat(b.0, b.1)).unwrap()])
    };

    let k = ls.literal_compact(LineSet::parse("[0,1]")?);
    println!("[0,1] ⊆ (-1/10, 11/10): {:?}", compact_subset(&k, &open((-1, 10), (11, 10))).run(fuel));
    println!("[0,1] ⊆ (0, 2):         {:?}", compact_subset(&k, &open((0, 1), (2, 1))).run(fuel));

    let v = ls.literal_overt(LineSet::parse("{1/2}+[3,4]")?);
    println!("{{1/2}} ∪ [3,4] meets (2, 5/2): {:?}", overt_meets(&v, &open((2, 1), (5, 2))).run(fuel));
    println!("{{1/2}} ∪ [3,4] meets (1/4, 1): {:?}", overt_meets(&v, &open((1, 4), (1, 1))).run(fuel));

    let a = ls.literal_closed(LineSet::parse("[1,5]")?);
    println!("{{1/2}} ∪ [3,4] ⊄ [1,5]: {:?}", not_subset(&v, &a).run(fuel));

    // [0,1] ∩ [1,5] = {1} fits in (1/4, 2) although [0,1] does not.
    let ka = intersect_closed_compact(&a, &k);
    println!("[0,1] ∩ [1,5] ⊆ (1/4, 2): {:?}", compact_subset(&ka, &open((1, 4), (2, 1))).run(fuel));

    let k2 = ls.literal_compact(LineSet::parse("[3,4]")?);
    let both = union_compact(&k, &k2);
    println!("[0,1] ∪ [3,4] ⊆ (-1, 5): {:?}", compact_subset(&both, &open((-1, 1), (5, 1))).run(fuel));
    Ok(())
}
