//! Rank all eight schemes by mean condition number at one operating point.
//!
//! ```text
//! cargo run --release --example scheme_ranking
//! ```

use fieldsense::harness::{m_for, rank_schemes, run_sweep, SweepSpec};

fn main() -> fieldsense::Result<()> {
    let (b, ratio, gamma) = (3, 4.0, 0.05);
    let spec = SweepSpec {
        b_values: vec![b],
        m_ratios: vec![ratio],
        gamma_values: vec![gamma],
        iterations: 20,
        base_seed: 3,
        ..SweepSpec::default()
    };
    let result = run_sweep(&spec)?;
    let m = m_for(b, ratio);
    println!("b = {b}, m = {m}, gamma = {gamma}");
    for (rank, (scheme, cond)) in rank_schemes(&result, b, m, gamma, true)?.into_iter().enumerate() {
        println!("{:>2}. {:<22} {cond:>10.3}", rank + 1, scheme.name());
    }
    Ok(())
}
