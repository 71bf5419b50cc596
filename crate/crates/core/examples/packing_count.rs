// Greedy nets on the radius-10 sphere against the volume packing count.
// $ cargo run --release --example packing_count

use kuratowski::bounds::{model_ball_volume, model_ball_volume_standard, packing_check};
use kuratowski::metric_spaces::sample_sphere;
use kuratowski::net_builder::greedy_net;

fn main() -> kuratowski::Result<()> {
    let sample = sample_sphere(2, 10.0, 5000, 2)?;
    let m = sample.manifold().unwrap();
    for delta in [2.0, 4.0, 8.0] {
        let net = greedy_net(&sample, delta)?;
        let report = packing_check(m.dim, m.volume, delta, net.len(), 0.2)?;
        println!(
            "delta {delta}: |S| = {:>4}, count bound {:>8.1}, within: {}",
            net.len(),
            report.count_bound,
            report.within
        );
    }
    let r = 5.0;
    println!(
        "ball of radius {r}: {:.4} (reduced sphere measure), {:.4} (standard)",
        model_ball_volume(2, r)?,
        model_ball_volume_standard(2, r)?
    );
    Ok(())
}
