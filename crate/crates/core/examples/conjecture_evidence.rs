//! Exact F^(3) − 3! against the single-wall sector as q grows.

use rqc_statmech::bounds::conjecture_table;

fn main() -> rqc_statmech::Result<()> {
    println!("{:>3} {:>3} {:>14} {:>14} {:>8}", "q", "t", "excess", "single wall", "ratio");
    for r in conjecture_table(4, &[2, 3, 4, 8, 16], &[2, 3], 3)? {
        println!(
            "{:>3} {:>3} {:>14.6e} {:>14.6e} {:>8.4}",
            r.q, r.t, r.excess, r.single_wall, r.ratio
        );
    }
    Ok(())
}
