//! Recover a random field from averaged directed-walk readings, with and
//! without additive sensor noise.
//!
//! ```text
//! cargo run --example least_squares_recovery
//! ```

use fieldsense::estimation::{measure, reconstruct_and_score, EstimateReport};
use fieldsense::sampling::{generate_paths, Scheme, SchemeConfig};
use fieldsense::seed::rng_from_seed;
use fieldsense::sensing::build_matrix;
use fieldsense::BandlimitedField;

fn main() -> fieldsense::Result<()> {
    let b = 3;
    let m = 4 * fieldsense::field::dof(b);
    println!("{}", EstimateReport::CSV_HEADER);
    for sigma in [0.0, 0.01, 0.05, 0.2] {
        let config = SchemeConfig {
            noise_sigma: sigma,
            seed: 11,
            ..SchemeConfig::new(Scheme::DirectedInner, b, m, 0.05)
        };
        let mut rng = rng_from_seed(config.seed);
        let field = BandlimitedField::random(b, &mut rng);
        let paths = generate_paths(&config, &mut rng)?;
        let x = build_matrix(&paths, &config)?;
        let g = measure(&field, &paths, &config, &mut rng)?;
        let report = reconstruct_and_score(&field, &x, &g)?;
        println!("{}", report.csv_row(&config));
    }
    Ok(())
}
