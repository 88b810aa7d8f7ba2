//! Weingarten function of S_3 as rational functions of d, and at d = 2 where k > d.

use num_bigint::BigInt;
use num_rational::BigRational;
use rqc_statmech::weingarten::{wg_restricted, WeingartenTable};

fn main() -> rqc_statmech::Result<()> {
    let k = 3;
    let table = WeingartenTable::get(k)?;
    for (class, wg) in table.classes().iter().zip(table.values()) {
        let at_4 = wg.evaluate(&BigRational::from_integer(BigInt::from(4)))?;
        let restricted = wg_restricted(&class.representative(), k, 2)?;
        println!(
            "{:<8} Wg = {:<40} Wg(d=4) = {:<8} Wg(d=2, restricted) = {}",
            class.to_string(),
            wg.display_in("d"),
            at_4.to_string(),
            restricted
        );
    }
    Ok(())
}
