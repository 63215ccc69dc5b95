//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! elapsed time and limit, then asserts.

use std::io::Write;
use std::process::Command;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use erctopo::ercs::{
    basis_search, check_main_property, closed_subspace_compact_base, compact_base, compact_neighborhood_search,
    locally_closed_compact_base, open_subspace_ercs, sigma_cover, CompactCandidate, Ercs,
};
use erctopo::hyperspace::{
    consistency_refute, forall_located_report, located_from_spec, located_from_truth, located_not_equal,
    spec_from_located, verify_condition, Predicate, Refutation, SpecBits,
};
use erctopo::kernel::Enumerator;
use erctopo::metric::{
    compact_ball_search, distance_to_located, hausdorff_distance, nice_radius, radius, CReal, MetricContext,
    MetricPoint,
};
use erctopo::oracle::{
    brute_basis, brute_closed_ball, brute_consistent, brute_distance, brute_forall, brute_radius, brute_spec,
    closed_masks, lift_finite, oracle_spaces, MaskPredicate,
};
use erctopo::rational::{dyadic, int, rat, Rational};
use erctopo::sets::{
    compact_subset, intersect_closed_compact, member_open, not_subset, overt_meets, union_compact, CompactSet,
    LocatedSet, OpenSet,
};
use erctopo::spaces::cantor::{word_of, CantorPoint, Word};
use erctopo::spaces::finite::FiniteSpace;
use erctopo::spaces::line::{decode_interval, interval_index, LineSet, LineSpace};
use erctopo::spaces::qhat::{QhatPoint, QhatSpace};
use erctopo::spaces::registry::{registry_get, SpaceKind};
use erctopo::spaces::star::StarSpace;
use erctopo::spaces::{BaseIndex, Space};
use erctopo::{Fuel, Outcome};

const FUEL: Fuel = Fuel(100_000);
/// Precision for real-valued answers: intervals of width at most 2^-10.
const PRECISION: u32 = 10;

static SERIAL: Mutex<()> = Mutex::new(());

/// One criterion at a time, so each time limit measures only its own work.
fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(id: u32, name: &str, failures: &[String], elapsed: Duration, limit: Duration) {
    let ok = failures.is_empty() && elapsed < limit;
    // straight to the handle so the line shows without --nocapture
    let mut line = format!(
        "criterion {id:>2} {name}: {} ({:.2?} of {:?}, {} failures)\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit,
        failures.len()
    );
    for f in failures.iter().take(10) {
        line.push_str(&format!("    {f}\n"));
    }
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(failures.is_empty(), "criterion {id} failures: {failures:?}");
    assert!(elapsed < limit, "criterion {id} took {elapsed:?}, limit {limit:?}");
}

fn accepts(o: Outcome) -> bool {
    o.is_accepted()
}

fn contains(iv: &(Rational, Rational), q: &Rational) -> bool {
    &iv.0 <= q && q <= &iv.1
}

fn within(c: &CReal, exact: &Rational, k: u32) -> Result<(), String> {
    let iv = c.approx(k).map_err(|e| format!("{e}"))?;
    if &iv.1 - &iv.0 > dyadic(k) {
        return Err(format!("width of [{}, {}] exceeds 2^-{k}", iv.0, iv.1));
    }
    if !contains(&iv, exact) {
        return Err(format!("[{}, {}] misses {exact}", iv.0, iv.1));
    }
    Ok(())
}

// ---------------------------------------------------------------- oracle spaces

/// Union mask of the basics an open set lists by a generous stage.
fn open_mask(fs: &FiniteSpace, u: &OpenSet) -> u32 {
    fs.union_of(&u.listing(64))
}

/// The intersection of the opens whose basics cover the compact set.
fn compact_hull(fs: &Arc<FiniteSpace>, k: &CompactSet) -> u32 {
    fs.opens()
        .iter()
        .copied()
        .filter(|&o| accepts(k.covered_by(&fs.basics_inside(o), FUEL)))
        .fold(fs.full(), |a, o| a & o)
}

/// Brute saturation: the intersection of all opens containing `m`.
fn saturation(fs: &FiniteSpace, m: u32) -> u32 {
    fs.opens().iter().copied().filter(|&o| m & !o == 0).fold(fs.full(), |a, o| a & o)
}

fn points(fs: &FiniteSpace, m: u32) -> impl Iterator<Item = usize> {
    (0..fs.size()).filter(move |&i| m >> i & 1 == 1)
}

fn random_predicate(rng: &mut ChaCha8Rng, opens: &[u32], depth: u32) -> MaskPredicate {
    let pick = |rng: &mut ChaCha8Rng| opens[rng.gen_range(0..opens.len())];
    match if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..5) } {
        0 => MaskPredicate::Subset(pick(rng)),
        1 => MaskPredicate::Meets(pick(rng)),
        2 => MaskPredicate::IsEmptyOr(Box::new(random_predicate(rng, opens, depth - 1))),
        3 => MaskPredicate::And(vec![random_predicate(rng, opens, depth - 1), random_predicate(rng, opens, depth - 1)]),
        _ => MaskPredicate::Or(vec![random_predicate(rng, opens, depth - 1), random_predicate(rng, opens, depth - 1)]),
    }
}

fn check_oracle_space(fs: &Arc<FiniteSpace>, rng: &mut ChaCha8Rng, fail: &mut Vec<String>) {
    let reg = lift_finite(fs);
    let e: &Ercs = reg.require_ercs().unwrap();
    let name = fs.name();
    let all: Vec<u32> = (0..=fs.full()).collect();
    let opens = fs.opens().to_vec();
    let closed = closed_masks(fs);
    let mut check = |ok: bool, what: String| {
        if !ok {
            fail.push(format!("{name}: {what}"));
        }
    };

    for &u in &opens {
        let uo = fs.open_of_mask(u);
        for x in 0..fs.size() {
            let xn = fs.point_name(x);
            check(accepts(member_open(&xn, &uo).run(FUEL)) == (u >> x & 1 == 1), format!("memberOpen {x} {u:b}"));

            let expect = brute_basis(fs, x, u);
            match basis_search(e, &xn, &uo, FUEL) {
                Ok(w) => {
                    let (n, k) = (fs.base_mask(w.n).unwrap(), w.k.0 as u32);
                    check(expect && n >> x & 1 == 1 && n & !k == 0 && k & !u == 0, format!("basisSearch {x} {u:b}"));
                }
                Err(_) => check(!expect, format!("basisSearch pending {x} {u:b}")),
            }
            match compact_base(e, &xn, &uo, FUEL) {
                Ok(cb) => {
                    let v = open_mask(fs, &cb.v);
                    let hull = compact_hull(fs, &cb.k);
                    check(v >> x & 1 == 1 && v & !hull == 0 && hull & !u == 0, format!("compactBase {x} {u:b}"));
                }
                Err(_) => check(u >> x & 1 == 0, format!("compactBase pending {x} {u:b}")),
            }
        }
        for &m in &all {
            let k = fs.compact_of_mask(m);
            check(accepts(compact_subset(&k, &uo).run(FUEL)) == (m & !u == 0), format!("compactSubset {m:b} {u:b}"));
            let v = fs.overt_of_mask(m);
            check(accepts(overt_meets(&v, &uo).run(FUEL)) == (m & u != 0), format!("overtMeets {m:b} {u:b}"));
            for &c in &closed {
                let ik = intersect_closed_compact(&fs.closed_of_mask(c), &k);
                let expect = saturation(fs, m & c) & !u == 0;
                check(accepts(compact_subset(&ik, &uo).run(FUEL)) == expect, format!("intersect {c:b} {m:b} {u:b}"));
            }
            for &m2 in all.iter().step_by(3) {
                let uk = union_compact(&k, &fs.compact_of_mask(m2));
                check(
                    accepts(compact_subset(&uk, &uo).run(FUEL)) == ((m | m2) & !u == 0),
                    format!("unionCompact {m:b} {m2:b} {u:b}"),
                );
            }
        }
    }
    for &m in &all {
        for &c in &closed {
            check(
                accepts(not_subset(&fs.overt_of_mask(m), &fs.closed_of_mask(c)).run(FUEL)) == (m & !c != 0),
                format!("notSubset {m:b} {c:b}"),
            );
        }
    }

    // Subspace transfers: closed A, open Y, open U, x in the subspace.
    for &a in &closed {
        let ac = fs.closed_of_mask(a);
        for &u in &opens {
            for x in points(fs, a & u) {
                match closed_subspace_compact_base(e, &ac, &fs.point_name(x), &fs.open_of_mask(u), FUEL) {
                    Ok(cb) => {
                        let v = open_mask(fs, &cb.v);
                        let hull = compact_hull(fs, &cb.k);
                        check(
                            v >> x & 1 == 1 && (v & a) & !hull == 0 && hull & !u == 0,
                            format!("closedSubspace {a:b} {x} {u:b}"),
                        );
                    }
                    Err(err) => check(false, format!("closedSubspace {a:b} {x} {u:b}: {err}")),
                }
            }
        }
    }
    for &y in &opens {
        let yo = fs.open_of_mask(y);
        let sub = open_subspace_ercs(e, &yo);
        for &u in &opens {
            let w = u & y;
            let wo = fs.open_of_mask(w);
            for x in points(fs, w) {
                match basis_search(&sub, &fs.point_name(x), &wo, FUEL) {
                    Ok(bw) => {
                        let n = open_mask(fs, &sub.open(bw.n));
                        let hull = compact_hull(fs, &sub.compact(bw.k));
                        check(
                            n >> x & 1 == 1 && n & !hull == 0 && hull & !w == 0,
                            format!("openSubspace {y:b} {x} {u:b}"),
                        );
                    }
                    Err(err) => check(false, format!("openSubspace {y:b} {x} {u:b}: {err}")),
                }
            }
            for &a in &closed {
                for x in points(fs, w & a) {
                    match locally_closed_compact_base(e, &fs.closed_of_mask(a), &yo, &fs.point_name(x), &wo, FUEL) {
                        Ok(cb) => {
                            let v = open_mask(fs, &cb.v);
                            let hull = compact_hull(fs, &cb.k);
                            check(
                                v >> x & 1 == 1 && (v & a) & !hull == 0 && hull & !w == 0,
                                format!("locallyClosed {a:b} {y:b} {x} {u:b}"),
                            );
                        }
                        Err(err) => check(false, format!("locallyClosed {a:b} {y:b} {x} {u:b}: {err}")),
                    }
                }
            }
        }
    }

    // Sigma cover: every compact index lists, and together they cover.
    let listed: Vec<(BaseIndex, CompactSet)> = sigma_cover(e).listing(64);
    let union = listed.iter().fold(0, |acc, (_, k)| acc | compact_hull(fs, k));
    check(union == fs.full() && listed.len() == all.len(), "sigmaCover".into());

    // Metric answers.
    if fs.is_metric() {
        let ctx = MetricContext::from_registered(&reg, FUEL.0).unwrap();
        for x in 0..fs.size() {
            let xp = ctx.point(x as u128);
            for y in 0..fs.size() {
                let r = fs.dist(x, y).unwrap().clone();
                let ball = brute_closed_ball(fs, x, &r);
                let rho = radius(&ctx, &xp, &fs.compact_of_mask(ball), &fs.overt_of_mask(ball));
                if let Err(err) = within(&rho, &brute_radius(fs, x, ball), PRECISION) {
                    check(false, format!("radius {x} {r}: {err}"));
                }
            }
            for &a in all.iter().skip(1) {
                let exact = brute_distance(fs, x, a).unwrap();
                match distance_to_located(&ctx, &xp, &fs.located_of_mask(a)) {
                    Ok(d) => {
                        if let Err(err) = within(&d, &exact, PRECISION) {
                            check(false, format!("distance {x} {a:b}: {err}"));
                        }
                    }
                    Err(err) => check(false, format!("distance {x} {a:b}: {err}")),
                }
            }
        }
    }

    // Consistency: every bit vector over small bases, a sample otherwise.
    let nb = fs.base().len();
    let vectors: Vec<u32> = if nb <= 7 {
        (0..1u32 << nb).collect()
    } else {
        let mut vs: Vec<u32> = closed
            .iter()
            .map(|&c| brute_spec(fs, c).iter().enumerate().fold(0, |v, (i, &b)| v | (b as u32) << i))
            .collect();
        vs.extend((0..96).map(|_| rng.gen_range(0..1u32 << nb)));
        vs
    };
    for c in vectors {
        let bits: Vec<bool> = (0..nb).map(|i| c >> i & 1 == 1).collect();
        let sb = {
            let b = bits.clone();
            SpecBits::total(move |n| b.get(n.0 as usize).copied().unwrap_or(false))
        };
        let r = consistency_refute(e, &sb, FUEL);
        let consistent = brute_consistent(fs, &bits);
        check(r.is_refuted() != consistent, format!("consistencyRefute {c:b}"));
        if let Refutation::Refuted { cond, .. } = &r {
            check(verify_condition(e, &sb, cond, FUEL), format!("refutation witness {c:b}"));
        }
    }

    // Roundtrips and inequality over closed sets.
    let located: Vec<(u32, LocatedSet)> = closed.iter().map(|&c| (c, fs.located_of_mask(c))).collect();
    for (c, a) in &located {
        let bits = brute_spec(fs, *c);
        let sb = SpecBits::total(move |n| bits.get(n.0 as usize).copied().unwrap_or(false));
        let viat = located_from_truth(e, &spec_from_located(e, a));
        let vias = located_from_spec(e, &sb);
        for (label, l) in [("truth", &viat), ("spec", &vias)] {
            for &u in &opens {
                let uo = fs.open_of_mask(u);
                check(
                    accepts(overt_meets(&l.overt, &uo).run(FUEL)) == (c & u != 0),
                    format!("{label} roundtrip overt {c:b} {u:b}"),
                );
            }
            for x in 0..fs.size() {
                check(
                    accepts(member_open(&fs.point_name(x), &l.closed.complement).run(FUEL)) == (c >> x & 1 == 0),
                    format!("{label} roundtrip closed {c:b} {x}"),
                );
            }
        }
    }
    for (c1, a1) in &located {
        for (c2, a2) in &located {
            check(accepts(located_not_equal(a1, a2).run(FUEL)) == (c1 != c2), format!("locatedNotEqual {c1:b} {c2:b}"));
        }
    }

    // Universal quantification against brute force.
    let whole = reg.whole_compact.clone().unwrap();
    for _ in 0..10 {
        let mp = random_predicate(rng, &opens, 2);
        let rep = forall_located_report(e, &whole, &mp.to_predicate(fs), FUEL);
        let expect = brute_forall(fs, |m| mp.holds(m));
        check(rep.outcome.is_accepted() == expect, format!("forallLocated {mp:?}"));
    }
}

#[test]
fn criterion_01_oracle_equivalence() {
    let _g = serial();
    let t = Instant::now();
    let spaces = oracle_spaces();
    let mut fail = Vec::new();
    if spaces.len() < 10 || spaces.iter().any(|s| s.size() > 4) {
        fail.push(format!("{} oracle spaces, need at least 10 with at most 4 points", spaces.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for fs in &spaces {
        check_oracle_space(fs, &mut rng, &mut fail);
    }
    report(1, "oracle equivalence", &fail, t.elapsed(), Duration::from_secs(60));
}

// ---------------------------------------------------------------- line and cantor oracles

fn q(p: i64, d: i64) -> Rational {
    rat(p, d)
}

/// Random rational in `[lo, hi]` with denominator at most 16.
fn rand_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let d = rng.gen_range(1..=16i64);
    q(rng.gen_range(lo * d..=hi * d), d)
}

/// `[a, b]` covered by finitely many open intervals, by a left-to-right sweep.
fn sweep_covers(a: &Rational, b: &Rational, opens: &[(Rational, Rational)]) -> bool {
    if a > b {
        return true;
    }
    let mut cur = a.clone();
    loop {
        let reach = opens.iter().filter(|(lo, hi)| lo < &cur && &cur < hi).map(|(_, hi)| hi.clone()).max();
        match reach {
            None => return false,
            Some(h) if &h > b => return true,
            Some(h) => cur = h,
        }
    }
}

/// `B_k` on a line space with optional bounded carrier interval.
fn line_compact(k: BaseIndex, carrier: Option<(Rational, Rational)>) -> (Rational, Rational) {
    let (lo, hi) = decode_interval(k);
    match carrier {
        None => (lo, hi),
        Some((c0, c1)) => (lo.max(c0), hi.min(c1)),
    }
}

/// `U_n ∩ X ⊆ B_k`, by endpoints.
fn line_open_inside(n: BaseIndex, k: BaseIndex, carrier: Option<(Rational, Rational)>) -> bool {
    let (lo, hi) = decode_interval(n);
    let (lo, hi, nonempty) = match &carrier {
        None => (lo.clone(), hi.clone(), true),
        Some((c0, c1)) => (lo.clone().max(c0.clone()), hi.clone().min(c1.clone()), &lo < c1 && &hi > c0),
    };
    let (a, b) = line_compact(k, carrier);
    !nonempty || (a <= lo && hi <= b)
}

/// Cylinder `w` covered by the cylinders `ws`, by splitting.
fn cylinder_covered(w: &Word, ws: &[Word]) -> bool {
    if ws.iter().any(|v| v.is_prefix_of(w)) {
        return true;
    }
    if !ws.iter().any(|v| w.is_prefix_of(v)) {
        return false;
    }
    cylinder_covered(&w.push(false), ws) && cylinder_covered(&w.push(true), ws)
}

fn line_spaces() -> Vec<(&'static str, Option<(Rational, Rational)>)> {
    vec![("real-line", None), ("unit-interval", Some((int(0), int(1))))]
}

#[test]
fn criterion_02_ercs_soundness() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    const STAGE: u64 = 10_000;
    const COVER_SAMPLE: usize = 40;
    for (name, carrier) in line_spaces() {
        let reg = registry_get(name).unwrap();
        let e = reg.require_ercs().unwrap();
        let pairs = e.relation().listing(STAGE);
        for &(n, k) in &pairs {
            if !line_open_inside(n, k, carrier.clone()) {
                fail.push(format!("{name}: R-soundness ({}, {})", n.0, k.0));
            }
        }
        let mut ks: Vec<BaseIndex> = pairs.iter().map(|p| p.1).collect();
        ks.dedup();
        for &k in ks.iter().take(COVER_SAMPLE) {
            let (a, b) = line_compact(k, carrier.clone());
            for cover in e.compact(k).covers().listing(STAGE) {
                let opens: Vec<_> = cover.iter().map(|&m| decode_interval(m)).collect();
                if !sweep_covers(&a, &b, &opens) {
                    fail.push(format!("{name}: cover-soundness B_{} by {:?}", k.0, cover));
                }
            }
        }
        println!("    {name}: {} pairs, {} compacts' covers checked", pairs.len(), ks.len().min(COVER_SAMPLE));
    }
    let reg = registry_get("cantor").unwrap();
    let e = reg.require_ercs().unwrap();
    let pairs = e.relation().listing(STAGE);
    for &(n, k) in &pairs {
        if !word_of(k).is_prefix_of(&word_of(n)) {
            fail.push(format!("cantor: R-soundness ({}, {})", n.0, k.0));
        }
    }
    let mut ks: Vec<BaseIndex> = pairs.iter().map(|p| p.1).collect();
    ks.sort();
    ks.dedup();
    for &k in ks.iter().take(COVER_SAMPLE) {
        for cover in e.compact(k).covers().listing(STAGE) {
            let ws: Vec<Word> = cover.iter().map(|&m| word_of(m)).collect();
            if !cylinder_covered(&word_of(k), &ws) {
                fail.push(format!("cantor: cover-soundness B_{} by {:?}", k.0, cover));
            }
        }
    }
    println!("    cantor: {} pairs, {} compacts' covers checked", pairs.len(), ks.len().min(COVER_SAMPLE));
    report(2, "ercs soundness", &fail, t.elapsed(), Duration::from_secs(10));
}

/// A random open set around a random point: the point, the open set and its
/// basics as intervals.
fn line_instance(
    rng: &mut ChaCha8Rng,
    carrier: &Option<(Rational, Rational)>,
) -> (Rational, Vec<(Rational, Rational)>) {
    let x = match carrier {
        None => rand_q(rng, -3, 3),
        Some(_) => rand_q(rng, 0, 1),
    };
    let mut parts =
        vec![(&x - rand_q(rng, 1, 2) / int(rng.gen_range(1..=8)), &x + rand_q(rng, 1, 2) / int(rng.gen_range(1..=8)))];
    for _ in 0..rng.gen_range(0..3) {
        let a = rand_q(rng, -3, 3);
        parts.push((a.clone(), a + rand_q(rng, 1, 2)));
    }
    (x, parts)
}

fn line_open(sp: &Arc<dyn Space>, parts: &[(Rational, Rational)]) -> OpenSet {
    OpenSet::of_basics(sp.clone(), parts.iter().map(|(a, b)| interval_index(a, b).unwrap()).collect())
}

fn cantor_instance(rng: &mut ChaCha8Rng) -> (CantorPoint, Vec<Word>) {
    let bits = |rng: &mut ChaCha8Rng, n: usize| (0..n).map(|_| rng.gen_bool(0.5)).collect::<Vec<bool>>();
    let (np, nc) = (rng.gen_range(0..6), rng.gen_range(1..4));
    let pre = bits(rng, np);
    let cyc = bits(rng, nc);
    let x = CantorPoint::new(pre, cyc);
    let mut ws = vec![x.word(rng.gen_range(0..7))];
    for _ in 0..rng.gen_range(0..3) {
        let n = rng.gen_range(1..6);
        ws.push(Word::from_bits(&bits(rng, n)));
    }
    (x, ws)
}

fn cantor_open(sp: &Arc<dyn Space>, ws: &[Word]) -> OpenSet {
    OpenSet::of_basics(sp.clone(), ws.iter().map(|w| w.index()).collect())
}

#[test]
fn criterion_03_main_property() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, carrier) in line_spaces() {
        let reg = registry_get(name).unwrap();
        let e = reg.require_ercs().unwrap();
        let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
        for i in 0..100 {
            let (x, parts) = line_instance(&mut rng, &carrier);
            let u = line_open(&e.space, &parts);
            let rep = &check_main_property(e, &u, &[ls.point_name(&x).unwrap()], FUEL)[0];
            let ok = rep.witness.is_some_and(|(m, n)| {
                let (lo, hi) = decode_interval(m);
                let (a, b) = line_compact(n, carrier.clone());
                lo < x && x < hi && line_open_inside(m, n, carrier.clone()) && sweep_covers(&a, &b, &parts)
            });
            if !ok {
                fail.push(format!("{name} #{i}: x = {x}, U = {parts:?}, report {rep:?}"));
            }
        }
    }
    let reg = registry_get("cantor").unwrap();
    let e = reg.require_ercs().unwrap();
    let SpaceKind::Cantor(cs) = &reg.kind else { unreachable!() };
    for i in 0..100 {
        let (x, ws) = cantor_instance(&mut rng);
        let u = cantor_open(&e.space, &ws);
        let rep = &check_main_property(e, &u, &[cs.point_name(&x)], FUEL)[0];
        let ok = rep.witness.is_some_and(|(m, n)| {
            let (wm, wn) = (word_of(m), word_of(n));
            x.in_cylinder(&wm) && wn.is_prefix_of(&wm) && cylinder_covered(&wn, &ws)
        });
        if !ok {
            fail.push(format!("cantor #{i}: x = {x:?}, U = {ws:?}, report {rep:?}"));
        }
    }
    report(3, "main property", &fail, t.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_04_compact_base_sandwich() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, carrier) in line_spaces() {
        let reg = registry_get(name).unwrap();
        let e = reg.require_ercs().unwrap();
        let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
        for i in 0..100 {
            let (x, parts) = line_instance(&mut rng, &carrier);
            let u = line_open(&e.space, &parts);
            let xn = ls.point_name(&x).unwrap();
            match compact_base(e, &xn, &u, FUEL) {
                Ok(cb) => {
                    let (n, k) = (cb.witness.n, cb.witness.k);
                    let (lo, hi) = decode_interval(n);
                    let (a, b) = line_compact(k, carrier.clone());
                    let arith =
                        lo < x && x < hi && line_open_inside(n, k, carrier.clone()) && sweep_covers(&a, &b, &parts);
                    let named =
                        accepts(member_open(&xn, &cb.v).run(FUEL)) && accepts(compact_subset(&cb.k, &u).run(FUEL));
                    if !(arith && named) {
                        fail.push(format!("{name} #{i}: x = {x}, U = {parts:?}, (n, k) = ({}, {})", n.0, k.0));
                    }
                }
                Err(err) => fail.push(format!("{name} #{i}: x = {x}, U = {parts:?}: {err}")),
            }
        }
    }
    let reg = registry_get("cantor").unwrap();
    let e = reg.require_ercs().unwrap();
    let SpaceKind::Cantor(cs) = &reg.kind else { unreachable!() };
    for i in 0..100 {
        let (x, ws) = cantor_instance(&mut rng);
        let u = cantor_open(&e.space, &ws);
        match compact_base(e, &cs.point_name(&x), &u, FUEL) {
            Ok(cb) => {
                let (wn, wk) = (word_of(cb.witness.n), word_of(cb.witness.k));
                if !(x.in_cylinder(&wn) && wk.is_prefix_of(&wn) && cylinder_covered(&wk, &ws)) {
                    fail.push(format!("cantor #{i}: x = {x:?}, U = {ws:?}, V = {wn:?}, K = {wk:?}"));
                }
            }
            Err(err) => fail.push(format!("cantor #{i}: x = {x:?}, U = {ws:?}: {err}")),
        }
    }
    report(4, "compact-base sandwich", &fail, t.elapsed(), Duration::from_secs(30));
}

// ---------------------------------------------------------------- metric closed forms

/// `d(x, A)` for a finite union of closed intervals.
fn set_distance(x: &Rational, parts: &[(Rational, Rational)]) -> Rational {
    parts
        .iter()
        .map(|(a, b)| {
            if x < a {
                a - x
            } else if x > b {
                x - b
            } else {
                int(0)
            }
        })
        .min()
        .unwrap()
}

/// `sup_{a ∈ A} d(a, B)`: attained at an endpoint of a part of `A` or at a
/// midpoint between consecutive parts of `B`.
fn directed(a: &[(Rational, Rational)], b: &[(Rational, Rational)]) -> Rational {
    let mut cands: Vec<Rational> = a.iter().flat_map(|(p, q)| [p.clone(), q.clone()]).collect();
    let mut sorted = b.to_vec();
    sorted.sort();
    for w in sorted.windows(2) {
        let mid = (&w[0].1 + &w[1].0) / int(2);
        if a.iter().any(|(p, q)| p <= &mid && &mid <= q) {
            cands.push(mid);
        }
    }
    cands.iter().map(|c| set_distance(c, b)).max().unwrap()
}

fn rand_set(rng: &mut ChaCha8Rng) -> Vec<(Rational, Rational)> {
    let mut parts = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let a = rand_q(rng, 0, 1);
        let b = if rng.gen_bool(0.3) { a.clone() } else { (&a + rand_q(rng, 0, 1) / int(2)).min(int(1)) };
        parts.push((a, b));
    }
    parts
}

fn line_set(parts: &[(Rational, Rational)]) -> LineSet {
    LineSet::new(parts.to_vec())
}

#[test]
fn criterion_05_metric_closed_forms() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let reg = registry_get("unit-interval").unwrap();
    let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
    let ctx = MetricContext::from_registered(&reg, FUEL.0).unwrap();
    let point = |x: &Rational| MetricPoint::rational(ctx.space.clone(), x).unwrap();
    for i in 0..20 {
        // radius of the closed ball B̄(x, r), clipped to the interval
        let x = rand_q(&mut rng, 0, 1);
        let r = rand_q(&mut rng, 1, 2) / int(rng.gen_range(2..=4));
        let (a, b) = ((&x - &r).max(int(0)), (&x + &r).min(int(1)));
        let exact = (&x - &a).max(&b - &x);
        let ball = LineSet::interval(a, b);
        let rho = radius(&ctx, &point(&x), &ls.literal_compact(ball.clone()), &ls.literal_overt(ball));
        for k in [4, PRECISION] {
            if let Err(err) = within(&rho, &exact, k) {
                fail.push(format!("radius #{i} x = {x}, r = {r}, 2^-{k}: {err}"));
            }
        }
    }
    for i in 0..20 {
        let x = rand_q(&mut rng, 0, 1);
        let parts = rand_set(&mut rng);
        let exact = set_distance(&x, &parts);
        match distance_to_located(&ctx, &point(&x), &ls.literal_located(line_set(&parts)).unwrap()) {
            Ok(d) => {
                for k in [4, PRECISION] {
                    if let Err(err) = within(&d, &exact, k) {
                        fail.push(format!("distance #{i} x = {x}, A = {parts:?}, 2^-{k}: {err}"));
                    }
                }
            }
            Err(err) => fail.push(format!("distance #{i}: {err}")),
        }
    }
    for i in 0..20 {
        let (pa, pb) = (rand_set(&mut rng), rand_set(&mut rng));
        let exact = directed(&pa, &pb).max(directed(&pb, &pa));
        let la = ls.literal_located(line_set(&pa)).unwrap();
        let lb = ls.literal_located(line_set(&pb)).unwrap();
        match hausdorff_distance(&ctx, &la, &lb) {
            Ok(h) => {
                for k in [4, PRECISION] {
                    if let Err(err) = within(&h, &exact, k) {
                        fail.push(format!("hausdorff #{i} A = {pa:?}, B = {pb:?}, 2^-{k}: {err}"));
                    }
                }
            }
            Err(err) => fail.push(format!("hausdorff #{i}: {err}")),
        }
    }
    report(5, "metric closed forms", &fail, t.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_06_nice_radius() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    let reg = registry_get("line:{0}+[1,2]").unwrap();
    let SpaceKind::Line(ls) = &reg.kind else { unreachable!() };
    let ctx = MetricContext::from_registered(&reg, FUEL.0).unwrap();
    let x = MetricPoint::rational(ctx.space.clone(), &int(0)).unwrap();
    let r = q(3, 2);
    let ball = ls.literal_compact(LineSet::parse("{0}+[1,3/2]").unwrap());
    match nice_radius(&ctx, &x, &r, &ball).and_then(|c| c.approx(PRECISION)) {
        Ok((lo, hi)) => {
            println!("    r' in [{lo}, {hi}]");
            if !(lo > int(0) && hi < r) {
                fail.push(format!("r' in [{lo}, {hi}] not inside (0, 3/2)"));
            }
            // In {0} ∪ [1, 2] the closure of B(0, s) is {0} ∪ [1, s] for
            // s > 1 and {0} for s < 1, equal to the closed ball exactly
            // when s ≠ 1.
            if !(hi < int(1) || lo > int(1)) {
                fail.push(format!("r' in [{lo}, {hi}] does not exclude 1"));
            }
        }
        Err(err) => fail.push(format!("nice radius: {err}")),
    }
    report(6, "nice radius", &fail, t.elapsed(), Duration::from_secs(10));
}

// ---------------------------------------------------------------- hyperspace

fn iv(sp: &Arc<dyn Space>, a: Rational, b: Rational) -> OpenSet {
    OpenSet::of_basics(sp.clone(), vec![interval_index(&a, &b).unwrap()])
}

fn cy(sp: &Arc<dyn Space>, w: &str) -> OpenSet {
    OpenSet::of_basics(sp.clone(), vec![Word::parse(w).unwrap().index()])
}

fn or(ps: Vec<Predicate>) -> Predicate {
    Predicate::Or(ps)
}

fn and(ps: Vec<Predicate>) -> Predicate {
    Predicate::And(ps)
}

fn empty_or(p: Predicate) -> Predicate {
    Predicate::IsEmptyOr(Box::new(p))
}

#[test]
fn criterion_07_hyperspace_compactness() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    let fuel = Fuel(1_000_000);
    let line = registry_get("unit-interval").unwrap();
    let cantor = registry_get("cantor").unwrap();
    let (ls, cs) = (line.require_ercs().unwrap().space.clone(), cantor.require_ercs().unwrap().space.clone());
    let i = |a: Rational, b: Rational| iv(&ls, a, b);
    let c = |w: &str| cy(&cs, w);
    use Predicate::{Meets, Subset};
    let tautologies = vec![
        (&line, "A ⊆ (-1/2, 3/2)", Subset(i(q(-1, 2), q(3, 2)))),
        (&line, "A meets (-1, 2/3) or A ⊆ (1/3, 2)", or(vec![Meets(i(int(-1), q(2, 3))), Subset(i(q(1, 3), int(2)))])),
        (
            &line,
            "A = ∅ or A meets (-1, 1/2) or A meets (1/3, 2)",
            empty_or(or(vec![Meets(i(int(-1), q(1, 2))), Meets(i(q(1, 3), int(2)))])),
        ),
        (&cantor, "A ⊆ [e]", Subset(c("e"))),
        (&cantor, "A meets [0] or A ⊆ [1]", or(vec![Meets(c("0")), Subset(c("1"))])),
        (&cantor, "A = ∅ or A meets [0] or A meets [1]", empty_or(or(vec![Meets(c("0")), Meets(c("1"))]))),
    ];
    let falsifiable = vec![
        (&line, "A meets (2/5, 3/5)", Meets(i(q(2, 5), q(3, 5)))),
        (&line, "A ⊆ (-1, 1/2)", Subset(i(int(-1), q(1, 2)))),
        (&line, "A ⊆ (-1, 1/2) or A ⊆ (1/2, 2)", or(vec![Subset(i(int(-1), q(1, 2))), Subset(i(q(1, 2), int(2)))])),
        (&line, "A = ∅ or A meets (1/4, 3/4)", empty_or(Meets(i(q(1, 4), q(3, 4))))),
        (
            &line,
            "A = ∅ or (A meets (-1, 1/3) and A meets (2/3, 2))",
            empty_or(and(vec![Meets(i(int(-1), q(1, 3))), Meets(i(q(2, 3), int(2)))])),
        ),
        (&cantor, "A meets [0]", Meets(c("0"))),
        (&cantor, "A ⊆ [0]", Subset(c("0"))),
        (&cantor, "A = ∅ or (A meets [0] and A meets [1])", empty_or(and(vec![Meets(c("0")), Meets(c("1"))]))),
        (&cantor, "A ⊆ [0] or A ⊆ [1]", or(vec![Subset(c("0")), Subset(c("1"))])),
        (&cantor, "A = ∅ or A meets [01]", empty_or(Meets(c("01")))),
    ];
    for (reg, label, p) in &tautologies {
        let rep = forall_located_report(reg.require_ercs().unwrap(), reg.whole_compact.as_ref().unwrap(), p, fuel);
        println!("    {} {label}: {:?}, closing depth {:?}", reg.name, rep.outcome, rep.depth);
        if !rep.outcome.is_accepted() || rep.depth.is_none() {
            fail.push(format!("{} {label} not accepted", reg.name));
        }
    }
    for (reg, label, p) in &falsifiable {
        let rep = forall_located_report(reg.require_ercs().unwrap(), reg.whole_compact.as_ref().unwrap(), p, fuel);
        if rep.outcome.is_accepted() {
            fail.push(format!("{} {label} accepted", reg.name));
        }
    }
    report(7, "hyperspace compactness", &fail, t.elapsed(), Duration::from_secs(60));
}

/// Specs of constructible sets and the located sets behind them.
fn line_spec(parts: Vec<(Rational, Rational)>) -> SpecBits {
    let set = LineSet::new(parts);
    SpecBits::total(move |n| {
        let (lo, hi) = decode_interval(n);
        set.meets_open(&lo, &hi)
    })
}

fn cantor_spec(ws: Vec<Word>) -> SpecBits {
    SpecBits::total(move |n| {
        let w = word_of(n);
        ws.iter().any(|v| v.comparable(&w))
    })
}

/// The realized spec with one zero bit flipped to one: a basic whose
/// closure stays clear of the set.
fn flip(spec: SpecBits, n: BaseIndex) -> SpecBits {
    SpecBits::total(move |m| m == n || spec.bit(m).unwrap_or(false))
}

#[test]
fn criterion_08_consistency_theorem() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let line = registry_get("real-line").unwrap();
    let cantor = registry_get("cantor").unwrap();
    let (el, ec) = (line.require_ercs().unwrap(), cantor.require_ercs().unwrap());
    let mut real: Vec<(&Ercs, String, SpecBits, SpecBits)> = Vec::new();
    for _ in 0..10 {
        let parts = rand_set(&mut rng);
        let set = LineSet::new(parts.clone());
        // a coarse basic whose closure misses the set
        let far = el
            .order
            .listing(4096)
            .into_iter()
            .find(|&n| {
                let (lo, hi) = decode_interval(n);
                set.parts().iter().all(|(a, b)| b < &lo || &hi < a)
            })
            .unwrap();
        let spec = line_spec(parts.clone());
        real.push((el, format!("line {parts:?} flip {}", far.0), spec.clone(), flip(spec, far)));
    }
    for _ in 0..10 {
        let ws: Vec<Word> = (0..rng.gen_range(1..=3))
            .map(|_| Word::from_bits(&(0..rng.gen_range(1..=4)).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>()))
            .collect();
        let far =
            (1..64u128).map(Word::from_rank).find(|w| ws.iter().all(|v| !v.comparable(w))).map(|w| w.index()).unwrap();
        let spec = cantor_spec(ws.clone());
        real.push((ec, format!("cantor {ws:?} flip {}", far.0), spec.clone(), flip(spec, far)));
    }
    for (e, label, spec, broken) in &real {
        if consistency_refute(e, spec, FUEL).is_refuted() {
            fail.push(format!("{label}: realized spec refuted"));
        }
        match consistency_refute(e, broken, FUEL) {
            Refutation::Refuted { cond, .. } => {
                let n_one = broken.bit(cond.n) == Some(true);
                let zeros = cond.cover.iter().all(|&m| broken.bit(m) == Some(false));
                let covers = if std::ptr::eq(*e, el) {
                    let (a, b) = decode_interval(cond.k);
                    let opens: Vec<_> = cond.cover.iter().map(|&m| decode_interval(m)).collect();
                    LineSpace::closure_within(cond.n, cond.k) && sweep_covers(&a, &b, &opens)
                } else {
                    let ws: Vec<Word> = cond.cover.iter().map(|&m| word_of(m)).collect();
                    word_of(cond.k).is_prefix_of(&word_of(cond.n)) && cylinder_covered(&word_of(cond.k), &ws)
                };
                if !(n_one && zeros && covers && verify_condition(e, broken, &cond, FUEL)) {
                    fail.push(format!("{label}: witness {cond:?} does not verify"));
                }
            }
            Refutation::NoneYet => fail.push(format!("{label}: broken spec not refuted")),
        }
    }
    report(8, "consistency theorem", &fail, t.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_09_negative_fixtures() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    let star = StarSpace::new();
    let inf = MetricPoint::dense(star.clone(), 0);
    let o = compact_ball_search(&inf, &star.spoke_family()).run(FUEL);
    println!("    star compact ball at inf: {o:?}");
    if o != Outcome::Pending {
        fail.push(format!("star compact ball search at inf: {o:?}"));
    }
    let qh = QhatSpace::new();
    let family = Enumerator::interleave(vec![
        Enumerator::finite(vec![CompactCandidate::new("whole".into(), qh.whole_compact(), |_| true)]),
        qh.finite_family(),
    ]);
    let x = qh.point_name(&QhatPoint::Rational(int(0)), 4);
    let o = compact_neighborhood_search(&x, &qh.rationals_open(), &family).run(FUEL);
    println!("    qhat compact neighbourhood of 0 inside Q: {o:?}");
    if o != Outcome::Pending {
        fail.push(format!("qhat compact neighbourhood search inside Q: {o:?}"));
    }
    report(9, "negative fixtures", &fail, t.elapsed(), Duration::from_secs(10));
}

#[test]
fn criterion_10_cli_determinism() {
    let _g = serial();
    let t = Instant::now();
    let mut fail = Vec::new();
    let finite = "finite:{a,b,c;d(a,b)=1,d(a,c)=2,d(b,c)=1}";
    let runs: Vec<Vec<&str>> = vec![
        vec!["--space", "real-line", "compact-base", "--x", "0", "--u", "(-1,1)"],
        vec!["--space", "real-line", "--fuel", "1000", "compact-base", "--x", "2", "--u", "(-1,1)"],
        vec!["--space", "cantor", "compact-base", "--x", "01(10)", "--u", "[01]"],
        vec!["--space", "star", "compact-base", "--x", "inf", "--u", "(-1,1)"],
        vec!["--space", "cantor", "consistency", "--bits", "[e]=1,[0]=0,[1]=0"],
        vec!["--space", "cantor", "consistency", "--bits", "[e]=1,[0]=1"],
        vec!["--space", "unit-interval", "forall", "--pred", "subset(open(-0.5,1.5))"],
        vec!["--space", "cantor", "forall", "--pred", "or(meets([0]),subset([1]))"],
        vec!["--space", "real-line", "distance", "--x", "0", "--a", "[1,2]"],
        vec!["--space", finite, "distance", "--x", "a", "--a", "{c}"],
        vec!["--space", "unit-interval", "hausdorff", "--a", "[0,1/2]", "--b", "[1/2,1]", "--precision", "10"],
        vec!["--space", "real-line", "radius", "--x", "0", "--ball", "[-1/2,1/2]"],
        vec!["--space", "line:{0}+[1,2]", "radius", "--x", "0", "--nice", "3/2"],
        vec!["--space", "nowhere", "distance", "--x", "0", "--a", "[1,2]"],
    ];
    for args in &runs {
        let mut outs = Vec::new();
        for _ in 0..3 {
            let out = Command::new(env!("CARGO_BIN_EXE_erctopo"))
                .args(["--format", "json"])
                .args(args)
                .env_remove("ERCTOPO_DEFAULT_FUEL")
                .output()
                .unwrap();
            outs.push((out.status.code(), out.stdout, out.stderr));
        }
        let (code, stdout, stderr) = &outs[0];
        let body = if stdout.is_empty() { stderr } else { stdout };
        if serde_json::from_slice::<serde_json::Value>(body).is_err() {
            fail.push(format!("{args:?}: output is not json"));
        }
        if outs.iter().any(|o| o != &outs[0]) {
            fail.push(format!("{args:?}: runs differ"));
        }
        println!("    {:<70} exit {:?}", args.join(" "), code);
    }
    report(10, "cli determinism", &fail, t.elapsed(), Duration::from_secs(120));
}
