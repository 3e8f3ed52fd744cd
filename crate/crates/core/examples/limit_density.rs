//! The limit density `c F(e^(-sigma t^2))`: mass, minimum and sign changes.
//!
//! `cargo run --example limit_density`

use qfourier::hardy::clt_limit_density;
use qfourier::qtransform::TransformContext;

fn main() -> qfourier::Result<()> {
    for nu in [0.0, 0.5, 1.0] {
        let ctx = TransformContext::standard(0.5, nu, -8, 40)?;
        for sigma in [0.25, 0.5, 1.0] {
            let d = clt_limit_density(&ctx, sigma)?;
            println!(
                "nu {nu} sigma {sigma}: mass {:.15}  min {:.3e} at n={}  sign changes {}",
                d.mass, d.min_value, d.min_index, d.sign_changes
            );
        }
    }
    Ok(())
}
