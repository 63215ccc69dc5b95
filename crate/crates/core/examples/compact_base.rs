//! Effective relatively compact systems: basis search, the compact-base
//! sandwich x ∈ V ⊆ K ⊆ U, and its transfer to closed and open subspaces.

use erctopo::ercs::{basis_search, closed_subspace_compact_base, compact_base, open_subspace_ercs, sigma_cover};
use erctopo::rational::rat;
use erctopo::sets::OpenSet;
use erctopo::spaces::cantor::{word_of, CantorPoint, Word};
use erctopo::spaces::line::{decode_interval, interval_index, LineSet};
use erctopo::spaces::registry::{registry_get, SpaceKind};
use erctopo::Fuel;

fn main() -> erctopo::Result<()> {
    let fuel = Fuel(100_000);
    let reg = registry_get("real-line")?;
    let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
    let e = reg.require_ercs()?;
    let u = OpenSet::of_basics(reg.space.clone(), vec![interval_index(&rat(-1, 1), &rat(1, 1)).unwrap()]);
    let x = ls.point_name(&rat(0, 1))?;

    let cb = compact_base(e, &x, &u, fuel)?;
    let (v0, v1) = decode_interval(cb.witness.n);
    let (k0, k1) = decode_interval(cb.witness.k);
    println!("real line, x = 0, U = (-1, 1): V = ({v0}, {v1}), K = [{k0}, {k1}], stage {}", cb.witness.stage);

    // Closed subspace A = [0, 1/2] ∪ {3/4}: K comes back cut down to A.
    let a = ls.literal_closed(LineSet::parse("[0,1/2]+{3/4}")?);
    let sub = closed_subspace_compact_base(e, &a, &x, &u, fuel)?;
    println!(
        "inside A = [0,1/2] ∪ {{3/4}}: witness ({}, {}) stage {}",
        sub.witness.n.0, sub.witness.k.0, sub.witness.stage
    );

    // Open subspace Y = {a, b} of a three-point metric space: its own ercs,
    // searched like any other.
    let fin = registry_get("finite:{a,b,c;d(a,b)=1,d(a,c)=2,d(b,c)=1}")?;
    let SpaceKind::Finite(fs) = &fin.kind else { unreachable!() };
    let y = fs.open_of_mask(0b011);
    let ey = open_subspace_ercs(fin.require_ercs()?, &y);
    let w = basis_search(&ey, &fs.point_name(0), &y, fuel)?;
    println!("open subspace {{a, b}} of a finite space, x = a: witness stage {}", w.stage);

    // Cantor space: cylinders are both the opens and the compacts.
    let cantor = registry_get("cantor")?;
    let SpaceKind::Cantor(cs) = &cantor.kind else { unreachable!() };
    let ec = cantor.require_ercs()?;
    let p = cs.point_name(&CantorPoint::parse("0110(1)")?);
    let cu = OpenSet::of_basics(cantor.space.clone(), vec![Word::parse("011")?.index(), Word::parse("1")?.index()]);
    let cb = compact_base(ec, &p, &cu, fuel)?;
    println!("cantor, x = 0110(1), U = [011] ∪ [1]: V = {:?}, K = {:?}", word_of(cb.witness.n), word_of(cb.witness.k));

    let first: Vec<_> = sigma_cover(ec).listing(4).into_iter().map(|(k, _)| word_of(k)).collect();
    println!("first compacts of the sigma cover: {first:?}");
    Ok(())
}
