//! q-Pochhammer symbols and Jackson q-integrals.
//!
//! `cargo run --example pochhammer_jackson`

use qfourier::qnum::{
    jackson_integral, qpochhammer, qpochhammer_infinite, window_stability, GridFunction,
    PochhammerOrder, QGrid,
};
use qfourier::Complex64;

fn main() -> qfourier::Result<()> {
    let q = 0.5;
    for n in 0..=4 {
        let v = qpochhammer(q, q, PochhammerOrder::Finite(n))?;
        println!("(q;q)_{n} = {:.16}", v.re);
    }
    let (inf, tail) = qpochhammer_infinite(q, q)?;
    println!("(q;q)_inf = {:.16} (tail bound {tail:.1e})", inf.re);

    // Jackson integral of e^{-x^2} over the window [q^40, q^-8].
    let grid = QGrid::new(q, -8, 40)?;
    let g = GridFunction::gaussian(grid, 1.0, 1.0)?;
    println!("int e^(-x^2) d_q x = {:.16}", jackson_integral(&g).re);

    let s = window_stability(&grid, 4, |x| Complex64::new((-x * x).exp(), 0.0))?;
    println!(
        "window widened by 4 on each side: {:.3e} -> {:.3e}, relative change {:.1e}",
        s.base.re, s.widened.re, s.relative_change
    );
    Ok(())
}
