// Randomised checks of the model-sphere geometry behind the witness landmark.
// $ cargo run --release --example model_lemmas -- 20000 3

use kuratowski::model_check::{run_model_check, ModelCheckConfig};

fn main() -> kuratowski::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(10_000);
    let dim = args.next().and_then(|a| a.parse().ok()).unwrap_or(2);
    let report = run_model_check(&ModelCheckConfig {
        trials,
        dim,
        ..ModelCheckConfig::default()
    })?;
    for s in &report.suites {
        println!(
            "{:<26} {:>7} trials {:>3} violations  min margin {:+.3e}",
            s.name, s.trials, s.violations, s.min_margin
        );
    }
    println!("all suites passed: {}", report.passed);
    Ok(())
}
