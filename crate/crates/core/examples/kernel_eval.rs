//! Evaluate the q-Bessel kernel in both series conventions.
//!
//! `cargo run --example kernel_eval`

use qfourier::qbessel::{eval_j, eval_j_lattice, BesselSeriesSpec, SeriesConvention};
use qfourier::qnum::QParams;
use qfourier::Complex64;

fn main() -> qfourier::Result<()> {
    let params = QParams::new(0.5, 0.5)?;
    let tol = qfourier::qbessel::DEFAULT_TERM_TOLERANCE;
    let points = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.3, 0.0),
        Complex64::new(2.0, 1.0),
        Complex64::new(0.0, 6.0),
        Complex64::new(40.0, 0.0),
    ];
    for conv in [SeriesConvention::SelfDual, SeriesConvention::LinearPower] {
        let spec = BesselSeriesSpec::new(params, conv, tol)?;
        println!("convention {}", conv.name());
        for z in points {
            let v = eval_j(&spec, z)?;
            println!(
                "  j({z}) = {:.12e} {:+.12e}i  terms {:>3}  condition {:.2e}  {:?}",
                v.value.re, v.value.im, v.terms, v.condition, v.route
            );
        }
    }
    // Lattice arguments use exact powers of q in every factor.
    let spec = BesselSeriesSpec::standard(params);
    for k in -4..=2 {
        println!("j(q^{k}) = {:.6e}", eval_j_lattice(&spec, k)?.value.re);
    }
    Ok(())
}
