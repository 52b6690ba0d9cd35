//! Monte Carlo sweep of the mean condition number against the number of
//! paths, with the fitted bound curve for each scheme.
//!
//! ```text
//! cargo run --release --example condition_sweep
//! ```

use fieldsense::harness::{check_bound_trend, run_sweep, SweepSpec};

fn main() -> fieldsense::Result<()> {
    let spec = SweepSpec {
        b_values: vec![2],
        m_ratios: vec![1.5, 2.0, 4.0, 8.0],
        iterations: 20,
        base_seed: 9,
        ..SweepSpec::default()
    };
    let result = run_sweep(&spec)?;
    print!("{}", result.summary_table());

    println!();
    for entry in check_bound_trend(&result).entries {
        let fitted = entry
            .fitted_curve
            .iter()
            .map(|c| format!("{c:.2}"))
            .collect::<Vec<_>>()
            .join(" ");
        println!(
            "{:<22} non-increasing: {:<5} H = {:.3}  fitted [{fitted}]",
            entry.scheme.name(),
            entry.non_increasing(),
            entry.fitted_h.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
