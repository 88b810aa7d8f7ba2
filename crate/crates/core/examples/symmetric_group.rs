//! Permutations, conjugacy classes and characters of S_4.

use rqc_statmech::characters::{character, irrep_dimension, partitions};
use rqc_statmech::permutations::{haar_frame_potential, Permutation, SymmetricGroup};

fn main() -> rqc_statmech::Result<()> {
    let g = SymmetricGroup::get(4)?;
    let a = Permutation::from_one_based(&[2, 3, 1, 4])?;
    let b = Permutation::from_cycles(4, &[&[1, 4]])?;
    println!("a = {a}, b = {b}, a∘b = {}", a.compose(&b)?);
    println!("distance(a, b) = {}", g.distance(g.index_of(&a)?, g.index_of(&b)?));

    println!("\nclass      size");
    for c in g.classes() {
        println!("{:<10} {}", c.to_string(), c.class_size());
    }

    println!("\ncharacter table (rows: irreps, columns: classes above)");
    for lambda in partitions(4)? {
        let row: Vec<String> = g
            .classes()
            .iter()
            .map(|c| character(&lambda, c).map(|x| format!("{x:>3}")))
            .collect::<Result<_, _>>()?;
        println!("{:?} dim {:>2}: {}", lambda.parts(), irrep_dimension(&lambda), row.join(" "));
    }

    for d in [2, 3, 4] {
        println!("Haar F^(4) at d = {d}: {}", haar_frame_potential(4, d)?);
    }
    Ok(())
}
