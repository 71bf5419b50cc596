// Landmark-count bounds for a few model manifolds.
// $ cargo run --example bound_evaluation

use std::f64::consts::PI;

use kuratowski::bounds::{c_const, lemma32_bound, sphere_volume_paper, sphere_volume_standard, theorem_bound};
use kuratowski::net_builder::{required_delta, scale_context};

fn main() -> kuratowski::Result<()> {
    let cases = [
        ("radius-10 2-sphere", 2, 400.0 * PI, 0.01),
        ("unit 2-sphere", 2, 4.0 * PI, 1.0),
        ("unit flat 2-torus", 2, 1.0, 0.0),
        ("unit 3-sphere", 3, 2.0 * PI * PI, 1.0),
    ];
    let eps = 0.2;
    println!(
        "{:<20} {:>3} {:>8} {:>8} {:>14} {:>14}",
        "manifold", "n", "t", "delta", "theorem", "packing"
    );
    for (name, n, vol, sec) in cases {
        let ctx = scale_context(sec)?;
        let theorem = theorem_bound(n, vol, ctx.k, eps)?;
        // the packing count lives in the rescaled metric
        let packing = lemma32_bound(n, vol * ctx.t.powi(n as i32), eps)?;
        println!(
            "{name:<20} {n:>3} {:>8.3} {:>8.4} {:>14.6e} {:>14.6e}",
            ctx.t,
            required_delta(eps, &ctx)?,
            theorem.bound,
            packing.bound
        );
    }
    println!();
    for n in 2..=5 {
        println!(
            "n = {n}: C(n) = {:.6e}, Vol(S^(n-1)) reduced {:.6} vs standard {:.6}",
            c_const(n)?,
            sphere_volume_paper(n)?,
            sphere_volume_standard(n)?
        );
    }
    Ok(())
}
