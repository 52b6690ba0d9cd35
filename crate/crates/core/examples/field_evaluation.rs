//! Draw a random real bandlimited field, inspect a few coefficients and
//! print a coarse text heat map of its values on the unit square.
//!
//! ```text
//! cargo run --example field_evaluation
//! ```

use fieldsense::field::{dof, frequency_index};
use fieldsense::seed::rng_from_seed;
use fieldsense::BandlimitedField;

fn main() -> fieldsense::Result<()> {
    let b = 2;
    let field = BandlimitedField::random(b, &mut rng_from_seed(42));
    println!("b = {b}, n = {} coefficients", dof(b));

    for (k, l) in frequency_index(b).into_iter().take(5) {
        let a = field.coeff(k, l).unwrap();
        let mirror = field.coeff(-k, -l).unwrap();
        println!("a[{k:>2},{l:>2}] = {a:.3}   a[{:>2},{:>2}] = {mirror:.3}", -k, -l);
    }

    // The imaginary part vanishes because of the conjugate symmetry.
    let z = field.evaluate_complex(0.3, 0.7);
    println!("g(0.3, 0.7) = {:.6} (imaginary part {:.1e})", z.re, z.im);

    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    let grid = 24;
    let values: Vec<Vec<f64>> = (0..grid)
        .rev()
        .map(|j| (0..grid).map(|i| field.evaluate(i as f64 / grid as f64, j as f64 / grid as f64)).collect())
        .collect();
    let (lo, hi) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    for row in &values {
        let line: String = row
            .iter()
            .map(|v| shades[(((v - lo) / (hi - lo)) * 9.0).round() as usize])
            .flat_map(|c| [c, c])
            .collect();
        println!("|{line}|");
    }
    println!("range [{lo:.3}, {hi:.3}]");

    let mut csv = Vec::new();
    field.write_csv(&mut csv)?;
    let restored = BandlimitedField::read_csv(csv.as_slice())?;
    assert_eq!(restored, field);
    println!("CSV round trip ok ({} bytes)", csv.len());
    Ok(())
}
