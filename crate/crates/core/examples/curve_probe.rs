//! Lifting along the curve rings W[[T]]/(p - g T^n, T^{d+1}) -> .../(T^d).
//! Over k = F_p a pass says little, but a failed lift is a genuine obstruction.

use std::sync::Arc;

use pdlift::lifting::curve_criterion_probe;
use pdlift::pd_rings::CurveFactor;
use pdlift::series::{parse_series, Presentation, SeriesSpace};
use pdlift::witt::RingParams;

fn main() -> pdlift::Result<()> {
    let space = SeriesSpace::new(RingParams::new(3)?, 4, 10, vec!["x".into(), "y".into()])?;
    for (src, n, g) in [
        ("x*y", 2, CurveFactor::Unit(vec![1])),
        ("x*y", 1, CurveFactor::Zero),
        ("x - y^2", 2, CurveFactor::Unit(vec![1])),
    ] {
        let pres = Arc::new(Presentation::new(Arc::clone(&space), vec![parse_series(src, &space)?])?);
        println!("R = W[[x, y]]/({src}), n = {n}, g = {g}");
        for cell in curve_criterion_probe(&pres, n, g, 4, 100_000)? {
            let outcome = if cell.is_refuted() { "REFUTED" } else if cell.is_pass() { "pass" } else { "undecided" };
            println!("  {}: {outcome} ({} maps)", cell.condition, cell.stats.scanned);
        }
    }
    Ok(())
}
