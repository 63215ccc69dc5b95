//! Generic algorithms against exhaustive answers on a small finite space.

use erctopo::hyperspace::forall_located_report;
use erctopo::hyperspace::{consistency_refute, SpecBits};
use erctopo::oracle::{brute_consistent, brute_forall, closed_masks, lift_finite, MaskPredicate};
use erctopo::spaces::finite::FiniteSpace;
use erctopo::Fuel;

fn main() -> erctopo::Result<()> {
    let fs =
        FiniteSpace::from_topology("chain3", vec!["a".into(), "b".into(), "c".into()], vec![0, 0b001, 0b011, 0b111])?;
    let reg = lift_finite(&fs);
    let e = reg.require_ercs()?;
    println!("closed sets: {:?}", closed_masks(&fs).iter().map(|m| format!("{m:03b}")).collect::<Vec<_>>());

    let nb = fs.base().len();
    let mut agree = 0;
    for c in 0u32..1 << nb {
        let bits: Vec<bool> = (0..nb).map(|i| c >> i & 1 == 1).collect();
        let b2 = bits.clone();
        let spec = SpecBits::total(move |n| b2.get(n.0 as usize).copied().unwrap_or(false));
        let refuted = consistency_refute(e, &spec, Fuel(100_000)).is_refuted();
        agree += (refuted != brute_consistent(&fs, &bits)) as u32;
    }
    println!("consistency: {agree} of {} bit vectors agree with brute force", 1 << nb);

    let whole = reg.whole_compact.clone().unwrap();
    let preds = [
        MaskPredicate::IsEmptyOr(Box::new(MaskPredicate::Meets(0b111))),
        MaskPredicate::Meets(0b001),
        MaskPredicate::Or(vec![MaskPredicate::Subset(0b011), MaskPredicate::Meets(0b001)]),
    ];
    for p in preds {
        let generic = forall_located_report(e, &whole, &p.to_predicate(&fs), Fuel(100_000)).outcome;
        println!("{p:?}: search {generic:?}, brute force {}", brute_forall(&fs, |m| p.holds(m)));
    }
    Ok(())
}
