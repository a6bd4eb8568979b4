//! Normalization before a probe: find a W-point, move it to the origin and
//! solve away variables with unit linear terms.

use std::sync::Arc;

use pdlift::lifting::{condition_i, probe_smoothness, ProbeBounds};
use pdlift::series::{parse_series, Presentation, SeriesSpace};
use pdlift::witt::RingParams;

fn presentation(space: &Arc<SeriesSpace>, gens: &[&str]) -> pdlift::Result<Arc<Presentation>> {
    let gens = gens.iter().map(|g| parse_series(g, space)).collect::<pdlift::Result<Vec<_>>>()?;
    Ok(Arc::new(Presentation::new(Arc::clone(space), gens)?))
}

fn main() -> pdlift::Result<()> {
    let space = SeriesSpace::new(RingParams::new(3)?, 5, 8, vec!["x".into(), "y".into(), "z".into()])?;

    // y is a function of x, and z is cut out by 3 z up to higher order
    let pres = presentation(&space, &["y + x^2 + x*y", "(x - 3)*z"])?;
    println!("condition (i): {:?}", condition_i(&pres, None, 10_000));
    let min = pres.minimize()?;
    for e in &min.eliminated {
        println!("eliminated {} = {}", e.var, e.value);
    }
    let left: Vec<String> = min.presentation.generators().iter().map(|g| g.to_string()).collect();
    println!("left: vars {:?}, generators {:?}", min.presentation.vars(), left);
    println!("{}\n", probe_smoothness(&pres, None, &ProbeBounds::default())?);

    // a node sitting at (3, 3) instead of the origin
    let moved = presentation(&space, &["(x - 3)*(y - 3)", "z"])?;
    let at_point = moved.translate_to_point(&[3, 3, 0])?;
    let gens: Vec<String> = at_point.generators().iter().map(|g| g.to_string()).collect();
    println!("translated to (3, 3, 0): {gens:?}");
    println!("{}", probe_smoothness(&moved, Some(&[3, 3, 0]), &ProbeBounds::default())?);
    Ok(())
}
