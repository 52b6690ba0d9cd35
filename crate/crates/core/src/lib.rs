//! Randomized mobile sensing of 2D bandlimited fields.
//!
//! The crate simulates eight strategies for sampling a bandlimited field on
//! the unit square (static scattered sensors, straight lines, free and
//! directed random walks, and closed "bee and hive" loops), builds the
//! complex sensing matrix each strategy induces, recovers the Fourier
//! coefficients by least squares and measures stability through the
//! condition number of the sensing matrix.
//!
//! * [`field`]: bandlimited fields and their evaluation.
//! * [`sampling`]: paths for each scheme.
//! * [`sensing`]: point, averaged and location-unaware sensing matrices.
//! * [`estimation`]: measurements, least squares, condition numbers.
//! * [`harness`]: seeded Monte Carlo sweeps, trend checks and rankings.
//! * [`plot`]: SVG output.
//! * [`cli`]: the `fieldsense` command line.
//!
//! ```
//! use fieldsense::sampling::{generate_paths, Scheme, SchemeConfig};
//! use fieldsense::sensing::build_matrix;
//! use fieldsense::estimation::condition_number;
//! use fieldsense::seed::rng_from_seed;
//!
//! let config = SchemeConfig::new(Scheme::Scattered, 2, 100, 0.05);
//! let paths = generate_paths(&config, &mut rng_from_seed(1)).unwrap();
//! let x = build_matrix(&paths, &config).unwrap();
//! assert!(condition_number(&x).unwrap() >= 1.0);
//! ```

pub mod cli;
pub mod error;
pub mod estimation;
pub mod field;
pub mod harness;
pub mod plot;
pub mod sampling;
pub mod seed;
pub mod sensing;

pub use error::{Error, Result};
pub use field::BandlimitedField;
pub use sampling::{Point, SamplePath, Scheme, SchemeConfig};
pub use sensing::{MatrixKind, SensingMatrix};
