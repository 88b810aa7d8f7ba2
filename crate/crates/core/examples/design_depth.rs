//! Depths at which brickwork circuits become approximate 2- and k-designs.

use rqc_statmech::bounds::{
    fp2_upper_bound, t2_design_depth, tk_design_depth_largeq, tk_lower_bound,
};

fn main() -> rqc_statmech::Result<()> {
    for t in [2, 4, 8, 16] {
        println!("F^(2) bound, n=4 q=2 t={t}: {:.6}", fp2_upper_bound(4, 2, t)?);
    }
    for n in [10, 100, 1000] {
        let r = t2_design_depth(n, 2, 1e-3)?;
        println!("2-design, n={n} q=2 eps=1e-3: t ≈ {:.1} (C = {:.4})", r.t, r.constant);
    }
    for k in [2, 4, 8] {
        let up = tk_design_depth_largeq(100, 8, k, 1e-3)?;
        let low = tk_lower_bound(100, 8, k)?;
        println!("k={k}, n=100 q=8: upper {:.1}, lower {:.4}", up.t, low.t);
    }
    Ok(())
}
