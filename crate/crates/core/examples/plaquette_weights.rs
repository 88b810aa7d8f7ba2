//! Plaquette weights for k = 3: symbolic form, wall signature and value at q = 2.

use rqc_statmech::plaquette::{asymptotic_check, classify, pole_check, table, verify_rules};
use rqc_statmech::Permutation;

fn main() -> rqc_statmech::Result<()> {
    let k = 3;
    let t = table(k)?;
    let g = t.group();
    let values = t.evaluate_orbits(2)?;
    println!("{} keys in {} orbits", t.len(), t.orbit_count());
    for (i, ((a, b), w)) in t.orbits().enumerate() {
        let sig = classify(&Permutation::identity(k), g.element(a), g.element(b))?;
        println!(
            "({}, {}) walls {}/{}/{}  J = {}  J(2) = {}",
            g.element(a),
            g.element(b),
            sig.in_left,
            sig.in_right,
            sig.across,
            w.display_in("q"),
            values[i]
        );
    }
    println!("rules hold: {}", verify_rules(k)?.passed());
    println!("no integer poles in [2, 1000]: {}", pole_check(k, 2, 1000)?.passed());
    println!("large-q orders match wall counts: {}", asymptotic_check(k)?.passed());
    Ok(())
}
