//! Location-unaware reconstruction: the estimator only knows path
//! endpoints and assumes equispaced samples between them. The error floor
//! comes from that modeling mismatch and shrinks as gamma shrinks.
//!
//! ```text
//! cargo run --release --example location_unaware
//! ```

use fieldsense::harness::{m_for, run_sweep, SweepSpec};
use fieldsense::Scheme;

fn main() -> fieldsense::Result<()> {
    let spec = SweepSpec {
        schemes: vec![Scheme::LineBoundaryAvg, Scheme::BeeHive],
        b_values: vec![2],
        m_ratios: vec![4.0],
        gamma_values: vec![0.1, 0.05, 0.02],
        aware: vec![true, false],
        iterations: 20,
        base_seed: 3,
        compute_error: true,
        ..SweepSpec::default()
    };
    let result = run_sweep(&spec)?;
    let m = m_for(2, 4.0);
    println!("{:<20} {:>6} {:>14} {:>14}", "scheme", "gamma", "rel_err aware", "rel_err unaware");
    for &scheme in &spec.schemes {
        for &gamma in &spec.gamma_values {
            let aware = result.find(scheme, 2, m, gamma, true).unwrap();
            let unaware = result.find(scheme, 2, m, gamma, false).unwrap();
            println!(
                "{:<20} {gamma:>6} {:>14.2e} {:>14.2e}",
                scheme.name(),
                aware.mean_rel_err,
                unaware.mean_rel_err
            );
        }
    }
    Ok(())
}
