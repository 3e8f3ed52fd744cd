//! Measure Gaussian envelopes of `f` and `F f` and classify the pair.
//!
//! `cargo run --release --example hardy_classify`

use qfourier::hardy::{classify, classify_claimed, decay_check, extremal_function, DecayBound};
use qfourier::qnum::GridFunction;
use qfourier::qtransform::{forward_grid, TransformContext};

fn main() -> qfourier::Result<()> {
    let ctx = TransformContext::standard(0.5, 0.0, -8, 40)?;
    let grid = *ctx.grid();
    let tol = qfourier::hardy::DEFAULT_CLASSIFICATION_TOLERANCE;

    let cases = [
        ("e^(-x^2/8)", GridFunction::gaussian(grid, 1.0, 0.125)?),
        ("e^(-x^2/2)", GridFunction::gaussian(grid, 1.0, 0.5)?),
        ("c F(e^(-t^2/2))", extremal_function(&ctx, 0.5)?),
        ("zero", GridFunction::zeros(grid)),
    ];
    for (label, f) in &cases {
        let r = classify(f, &ctx, tol)?;
        println!(
            "{label:>16}: p {:.3e}  sigma {:.3e}  p*sigma {:.3e}  {}",
            r.bound_f.rate,
            r.bound_transform.rate,
            r.product,
            r.classification.name()
        );
    }

    // f = c F(e^(-t^2/2)) has F f = c e^(-x^2/2) only up to a rounding floor
    // near 1e-21, which already exceeds e^(-x^2/2) at x = 16. f itself decays
    // far slower than the envelope. Neither claim holds on the window.
    let f = extremal_function(&ctx, 0.5)?;
    let envelope = DecayBound::new(3.0, 0.5)?;
    let transform = forward_grid(&ctx, &f)?.output;
    println!(
        "claim on f holds: {}, claim on F f holds: {}",
        decay_check(&f, &envelope).holds,
        decay_check(&transform, &envelope).holds
    );
    let r = classify_claimed(&f, &ctx, envelope, envelope, tol)?;
    println!(
        "claimed p = sigma = 1/2: {} (bounds hold on window: {}, a = q^{:?})",
        r.classification.name(),
        r.bounds_hold,
        r.dilation_index
    );
    Ok(())
}
