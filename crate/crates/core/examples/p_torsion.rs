//! W[[x]]/(p x): the linear coefficient has valuation 1, and condition (ii)
//! fails at m = 1 through the map x -> e into W_2[e]/(p e).

use std::sync::Arc;

use pdlift::lifting::{condition_ii, probe_smoothness, ProbeBounds};
use pdlift::series::{parse_series, Presentation, SeriesSpace};
use pdlift::witt::RingParams;

fn main() -> pdlift::Result<()> {
    let space = SeriesSpace::new(RingParams::new(3)?, 5, 8, vec!["x".into()])?;
    let pres = Arc::new(Presentation::new(Arc::clone(&space), vec![parse_series("p*x", &space)?])?);

    let diag = pres.linear_diagnostics();
    println!("smallest valuation of a linear coefficient: {:?}", diag.m_star);

    let cell = condition_ii(&pres, 1, 1_000)?;
    println!("{}: refuted = {}, {} maps scanned", cell.condition, cell.is_refuted(), cell.stats.scanned);

    let report = probe_smoothness(&pres, None, &ProbeBounds::default())?;
    println!("{report}");
    Ok(())
}
