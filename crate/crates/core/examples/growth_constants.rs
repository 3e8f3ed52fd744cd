//! Sampled constants `sigma_p` with `|z|^{2p} |j(z)| <= sigma_p e^{|z|}`, and their
//! stability under probe refinement.
//!
//! `cargo run --release --example growth_constants`

use qfourier::qbessel::{estimate_sigma_p, BesselSeriesSpec};
use qfourier::qnum::QParams;
use qfourier::suites::{growth_constant_probe_grids, GROWTH_CONSTANT_RAYS};

fn main() -> qfourier::Result<()> {
    for nu in [0.0, 0.5, 2.0] {
        let spec = BesselSeriesSpec::standard(QParams::new(0.5, nu)?);
        let (base, fine) = growth_constant_probe_grids(0.5)?;
        for p in 0..=2 {
            let a = estimate_sigma_p(&spec, p, &base, GROWTH_CONSTANT_RAYS)?;
            let b = estimate_sigma_p(&spec, p, &fine, 2 * GROWTH_CONSTANT_RAYS)?;
            println!(
                "nu {nu}  p {p}: sigma {:.6} (peak {:.4} at {:.3}), refined {:.6}, {} probes",
                a.sigma_p, a.sampled_max, a.sample_max_at, b.sigma_p, a.probes
            );
        }
    }
    Ok(())
}
