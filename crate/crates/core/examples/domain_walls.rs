//! Counting confined, returning domain walls three ways.

use rqc_statmech::bounds::{c1_images, calibrate_images, count_walls_bruteforce, count_walls_dp};

fn main() -> rqc_statmech::Result<()> {
    let convention = calibrate_images()?;
    println!("image convention: {convention:?}");
    for n_g in 3..=6 {
        for t in 2..=5 {
            let brute = count_walls_bruteforce(n_g, t, 1)?.count;
            let images = c1_images(2 * n_g, t, convention);
            let two = count_walls_dp(n_g, t, 2)?.count;
            println!("n_g={n_g} t={t}: one wall {brute} (images {images}), two walls {two}");
        }
    }
    Ok(())
}
