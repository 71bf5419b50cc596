// Loading an explicit distance matrix and catching a broken one.
// $ cargo run --example distance_matrix

use kuratowski::embedding::verify_eps_good;
use kuratowski::metric_spaces::load_matrix;
use kuratowski::net_builder::greedy_net;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("kuratowski-example");
    std::fs::create_dir_all(&dir)?;

    // four points on a path 0 - 1 - 2 - 3
    let good = dir.join("path.csv");
    std::fs::write(&good, "0,1,2,3\n1,0,1,2\n2,1,0,1\n3,2,1,0\n")?;
    let sample = load_matrix(&good)?;
    let net = greedy_net(&sample, 1.5)?;
    let report = verify_eps_good(&sample, &net, 0.2, 0, 0)?;
    println!(
        "landmarks {:?}, lower_const {}",
        net.landmark_indices, report.lower_const
    );

    let bad = dir.join("shortcut.csv");
    std::fs::write(&bad, "0,1,5\n1,0,1\n5,1,0\n")?;
    match load_matrix(&bad) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
