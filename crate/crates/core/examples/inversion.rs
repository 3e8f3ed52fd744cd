//! Round trip `F(F f) = f` on a window, for both kernel conventions.
//!
//! `cargo run --release --example inversion`

use qfourier::qbessel::{BesselSeriesSpec, SeriesConvention, DEFAULT_TERM_TOLERANCE};
use qfourier::qnum::{GridFunction, QGrid, QParams};
use qfourier::qtransform::{inversion_residual, TransformContext};

fn main() -> qfourier::Result<()> {
    let grid = QGrid::new(0.5, -8, 40)?;
    println!("sup |F(F f) - f| over the Gaussian e^(-x^2/2) and point masses at n = -2, 0, 3");
    println!("{:>5} {:>12} {:>12}", "nu", "self-dual", "linear");
    for nu in [0.0, 0.5, 1.0] {
        let params = QParams::new(0.5, nu)?;
        let mut row = Vec::new();
        for conv in [SeriesConvention::SelfDual, SeriesConvention::LinearPower] {
            let ctx = TransformContext::new(
                BesselSeriesSpec::new(params, conv, DEFAULT_TERM_TOLERANCE)?,
                grid,
            )?;
            let mut worst = inversion_residual(&ctx, &GridFunction::gaussian(grid, 1.0, 0.5)?)?;
            for n in [-2, 0, 3] {
                worst = worst.max(inversion_residual(
                    &ctx,
                    &GridFunction::indicator(grid, n)?,
                )?);
            }
            row.push(worst);
        }
        println!("{nu:>5} {:>12.2e} {:>12.2e}", row[0], row[1]);
    }
    Ok(())
}
