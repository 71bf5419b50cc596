// Greedy net on a flat torus grid and the distortion of its l∞ embedding.
// The unit torus is far below the injectivity radius the guarantee relies
// on, so small eps can fail; larger periods behave.
// $ cargo run --release --example torus_net_verify

use kuratowski::embedding::verify_eps_good;
use kuratowski::metric_spaces::{sample_torus, TorusLayout};
use kuratowski::net_builder::{audit_net, greedy_net};

fn main() -> kuratowski::Result<()> {
    let eps = 0.25;
    for period in [1.0, 4.0] {
        let sample = sample_torus(&[period, period], TorusLayout::Grid { resolution: 60 })?;
        let net = greedy_net(&sample, eps / 2.0)?;
        let audit = audit_net(&sample, &net)?;
        let report = verify_eps_good(&sample, &net, eps, 100_000, 7)?;
        println!(
            "{}: {} landmarks, covering radius {:.4}",
            sample.label(),
            net.len(),
            audit.covering_radius
        );
        println!(
            "  lower_const {:.4} ({:?}), upper excess {:.1e}",
            report.lower_const, report.verdict, report.upper_excess
        );
        if let Some(w) = report.worst_pair {
            println!(
                "  worst pair {:?} at distance {:.4}, l∞ {:.4}",
                (w.i, w.j),
                w.distance,
                w.linf_distance
            );
        }
    }
    Ok(())
}
