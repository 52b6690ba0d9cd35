//! Render trajectory panels for every scheme and a condition-number plot,
//! writing the SVG files to a temporary directory.
//!
//! ```text
//! cargo run --example svg_plots [out_dir]
//! ```

use std::fs;
use std::path::PathBuf;

use fieldsense::harness::{run_sweep, SweepSpec};
use fieldsense::plot::{condition_plot_svg, trajectory_svg};
use fieldsense::sampling::{generate_paths, Scheme, SchemeConfig};
use fieldsense::seed::{derive_seed, rng_from_seed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fieldsense_svg"));
    fs::create_dir_all(&out)?;

    let panels = Scheme::ALL
        .iter()
        .map(|&s| {
            let config = SchemeConfig::new(s, 3, 12, 0.05);
            generate_paths(&config, &mut rng_from_seed(derive_seed(1, &[s.id()]))).map(|p| (s, p))
        })
        .collect::<fieldsense::Result<Vec<_>>>()?;
    let trajectories = out.join("paths.svg");
    fs::write(&trajectories, trajectory_svg(&panels))?;

    let spec = SweepSpec {
        schemes: vec![Scheme::DirectedInner],
        b_values: vec![1, 2],
        m_ratios: vec![1.5, 2.0, 4.0],
        iterations: 10,
        ..SweepSpec::default()
    };
    let result = run_sweep(&spec)?;
    let curve = out.join("cond_directed_inner.svg");
    fs::write(&curve, condition_plot_svg(Scheme::DirectedInner, &result.records))?;

    println!("wrote {}", trajectories.display());
    println!("wrote {}", curve.display());
    Ok(())
}
