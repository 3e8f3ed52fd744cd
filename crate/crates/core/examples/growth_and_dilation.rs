//! Growth of `F f` off the real axis and the dilation identity.
//!
//! `cargo run --example growth_and_dilation`

use qfourier::qnum::GridFunction;
use qfourier::qtransform::{dilation_residual, growth_ratio, TransformContext};
use qfourier::suites::{growth_probes, refined_growth_probes};

fn main() -> qfourier::Result<()> {
    let ctx = TransformContext::standard(0.5, 0.0, -8, 40)?;
    let f = GridFunction::gaussian(*ctx.grid(), 1.0, 0.5)?;

    let coarse = growth_ratio(&ctx, &f, &growth_probes(0.5))?;
    let fine = growth_ratio(&ctx, &f, &refined_growth_probes(0.5))?;
    println!("max |F f(z)| e^(-|z|^2/2) / sup|f|: {coarse:.6} (refined {fine:.6})");

    for k in [-2, -1, 1, 2, 3] {
        println!(
            "dilation a = q^{k}: residual {:.2e}",
            dilation_residual(&ctx, &f, k)?
        );
    }
    Ok(())
}
