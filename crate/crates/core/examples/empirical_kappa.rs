// Smallest passing greedy net compared with the volume bound.
// $ cargo run --release --example empirical_kappa

use kuratowski::bounds::theorem_bound;
use kuratowski::embedding::empirical_kappa_net;
use kuratowski::metric_spaces::sample_sphere;
use kuratowski::net_builder::{greedy_net, scale_context};

fn main() -> kuratowski::Result<()> {
    let sample = sample_sphere(2, 10.0, 1200, 5)?;
    let manifold = sample.manifold().expect("spheres carry their volume");
    let ctx = scale_context(sample.sec_sup().unwrap_or(0.0))?;
    for eps in [0.1, 0.2, 0.25] {
        let kappa = empirical_kappa_net(&sample, eps)?;
        let theory_net = greedy_net(&sample, eps / 2.0 / ctx.t)?;
        let bound = theorem_bound(manifold.dim, manifold.volume, ctx.k, eps)?.bound;
        println!(
            "eps {eps:<4}: kappa <= {:>4} (delta {:.3}), theory net {:>4}, bound {bound:.3e}",
            kappa.len(),
            kappa.delta,
            theory_net.len()
        );
    }
    Ok(())
}
