// Geodesic distances on a noisy point cloud via a k-nearest-neighbour graph.
// $ cargo run --release --example graph_metric_circle

use std::f64::consts::{PI, TAU};

use kuratowski::embedding::verify_eps_good;
use kuratowski::metric_spaces::build_graph_metric;
use kuratowski::net_builder::greedy_net;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> kuratowski::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    // irregular spacing along the unit circle
    let points: Vec<Vec<f64>> = (0..1500)
        .map(|i| {
            let a = TAU * (i as f64 + rng.random_range(-0.4..0.4)) / 1500.0;
            vec![a.cos(), a.sin()]
        })
        .collect();
    let sample = build_graph_metric(points, 8)?;
    println!(
        "antipodal graph distance {:.4} (arc length {PI:.4})",
        sample.distance(0, 750)?
    );

    for delta in [0.8, 0.4, 0.1] {
        let net = greedy_net(&sample, delta)?;
        let report = verify_eps_good(&sample, &net, 0.2, 200_000, 3)?;
        println!(
            "delta {delta}: {:>3} landmarks, lower_const {:.4}",
            net.len(),
            report.lower_const
        );
    }
    Ok(())
}
