//! The node W[[x, y]]/(xy) is not smooth; the probe finds a map into W_{1,2}
//! that does not lift to W_{1,3}.

use std::sync::Arc;

use pdlift::lifting::{probe_smoothness, ProbeBounds};
use pdlift::series::{parse_series, Presentation, SeriesSpace};
use pdlift::witt::RingParams;

fn main() -> pdlift::Result<()> {
    for p in [3, 2] {
        let space = SeriesSpace::new(RingParams::new(p)?, 5, 8, vec!["x".into(), "y".into()])?;
        let pres = Arc::new(Presentation::new(Arc::clone(&space), vec![parse_series("x*y", &space)?])?);
        let report = probe_smoothness(&pres, None, &ProbeBounds::default())?;
        println!("--- p = {p} (exit code {})\n{report}\n", report.exit_code());
    }
    Ok(())
}
