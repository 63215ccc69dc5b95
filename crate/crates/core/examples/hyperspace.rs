//! The hyperspace of located sets: specs and their refutation, the round
//! trip between sets and truth sequences, and universal quantification
//! over all located sets of a compact space.

use erctopo::hyperspace::{
    consistency_refute, forall_located_report, located_from_spec, located_from_truth, located_not_equal,
    spec_from_located, Predicate, Refutation, SpecBits,
};
use erctopo::sets::{overt_meets, OpenSet};
use erctopo::spaces::cantor::{word_of, Word};
use erctopo::spaces::line::LineSet;
use erctopo::spaces::registry::{registry_get, SpaceKind};
use erctopo::Fuel;

fn main() -> erctopo::Result<()> {
    let cantor = registry_get("cantor")?;
    let e = cantor.require_ercs()?;
    let cyl = |w: &str| Word::parse(w).unwrap().index();

    // "A meets [e]" while "A misses [0]" and "A misses [1]" cannot hold.
    let bad = SpecBits::Prefix(vec![(cyl("e"), true), (cyl("0"), false), (cyl("1"), false)]);
    match consistency_refute(e, &bad, Fuel(100_000)) {
        Refutation::Refuted { cond, stage } => println!(
            "refuted at stage {stage}: [{:?}] has B = {:?} covered by {:?}",
            word_of(cond.n),
            word_of(cond.k),
            cond.cover.iter().map(|&n| word_of(n)).collect::<Vec<_>>()
        ),
        Refutation::NoneYet => println!("no refutation yet"),
    }

    let open = |w: &str| OpenSet::of_basics(e.space.clone(), vec![cyl(w)]);
    let preds = [
        ("A meets [0] or A ⊆ [1]", Predicate::Or(vec![Predicate::Meets(open("0")), Predicate::Subset(open("1"))])),
        ("A meets [0]", Predicate::Meets(open("0"))),
    ];
    for (label, p) in preds {
        let rep = forall_located_report(e, cantor.whole_compact.as_ref().unwrap(), &p, Fuel(1_000_000));
        println!("for all A: {label}: {:?}, depth {:?}, {} nodes", rep.outcome, rep.depth, rep.nodes);
    }

    // A = [0] given by its spec: A meets [w] iff w is comparable with 0.
    let zero = Word::parse("0")?;
    let a = located_from_spec(e, &SpecBits::total(move |n| word_of(n).comparable(&zero)));
    for w in ["01", "1"] {
        println!("[0] meets [{w}]: {:?}", overt_meets(&a.overt, &open(w)).run(Fuel(100_000)));
    }

    // Round trip through the truth sequence. Each pass through a dovetail
    // squares the stage, so this is shown on a finite space.
    let fin = registry_get("finite:{a,b,c;d(a,b)=1,d(a,c)=2,d(b,c)=1}")?;
    let SpaceKind::Finite(fs) = &fin.kind else { unreachable!() };
    let ef = fin.require_ercs()?;
    let back = located_from_truth(ef, &spec_from_located(ef, &fs.located_of_mask(0b001)));
    for (label, m) in [("{a}", 0b001), ("{b, c}", 0b110)] {
        println!(
            "round trip of {{a}} meets {label}: {:?}",
            overt_meets(&back.overt, &fs.open_of_mask(m)).run(Fuel(100_000))
        );
    }

    let line = registry_get("unit-interval")?;
    let SpaceKind::Line(ls) = &line.kind else { unreachable!() };
    let a = ls.literal_located(LineSet::parse("[0,1/2]")?)?;
    let b = ls.literal_located(LineSet::parse("[1/2,1]")?)?;
    println!("[0,1/2] ≠ [1/2,1]: {:?}", located_not_equal(&a, &b).run(Fuel(100_000)));
    Ok(())
}
