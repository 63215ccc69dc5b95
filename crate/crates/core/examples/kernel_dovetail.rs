//! Fuel-bounded semidecision: run processes with a budget, combine them,
//! and search an infinite family fairly.

use erctopo::kernel::{dovetail_first, Enumerator};
use erctopo::{Fuel, Outcome, PairingScheme, Semidecision};

fn main() {
    // A process that accepts at stage 40 needs fuel above 40.
    let p = Semidecision::accept_at(40);
    println!("accept_at(40) with fuel 40: {:?}", p.run(Fuel(40)));
    println!("accept_at(40) with fuel 41: {:?}", p.run(Fuel(41)));

    let q = Semidecision::never();
    println!("either(p, never): {:?}", Semidecision::either(&p, &q).run(Fuel(1000)));
    println!("both(p, never):   {:?}", Semidecision::both(&p, &q).run(Fuel(1000)));

    // Candidate i is "i is a perfect square above 50", decided at stage i.
    let squares = Enumerator::from_fn(|i| {
        let r = (i as f64).sqrt() as u64;
        let p = if r * r == i && i > 50 { Semidecision::accept_at(i) } else { Semidecision::never() };
        Some((i, p))
    });
    match dovetail_first(&squares, Fuel(100_000)) {
        Some((w, t)) => {
            let (i, j) = PairingScheme::decode64(t);
            println!("first square above 50: {w} (schedule step {t} = <{i}, {j}>)");
        }
        None => println!("no square found"),
    }
    assert_eq!(dovetail_first(&squares, Fuel(10)).map(|x| x.0), None);
    assert!(matches!(p.run(Fuel(1_000)), Outcome::Accepted(40)));
}
