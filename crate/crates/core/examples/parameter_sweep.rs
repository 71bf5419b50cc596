// Distortion of greedy nets on the radius-10 sphere as δ grows, at fixed eps.
// The guarantee only covers δ = eps/2; the sweep shows how far beyond it
// the nets keep passing. CSV goes to stdout.
// $ cargo run --release --example parameter_sweep > sweep.csv

use kuratowski::embedding::verify_eps_good;
use kuratowski::metric_spaces::sample_sphere;
use kuratowski::net_builder::greedy_net;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps = 0.2;
    let sample = sample_sphere(2, 10.0, 3000, 11)?;
    let mut out = csv::Writer::from_writer(std::io::stdout());
    out.write_record(["delta", "landmarks", "lower_const", "pass"])?;
    for delta in [0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0] {
        let net = greedy_net(&sample, delta)?;
        let report = verify_eps_good(&sample, &net, eps, 200_000, 0)?;
        out.serialize((delta, net.len(), report.lower_const, report.passed()))?;
    }
    out.flush()?;
    Ok(())
}
