//! T^1 of R = W[T]/(T^3) at T -> 9 gamma^1(T), and the failure of
//! T^1(W_{7,4}) -> T^1(W_{7,3}) to be onto.

use std::sync::Arc;

use pdlift::lifting::{check_well_defined, t1_lifting_check, t1_module};
use pdlift::pd_rings::{make_truncation, Family, RingDescriptor, RingHandle};
use pdlift::series::{parse_series, Presentation, SeriesSpace};
use pdlift::witt::RingParams;

fn main() -> pdlift::Result<()> {
    let params = RingParams::new(3)?;
    let space = SeriesSpace::new(params, 7, 12, vec!["T".into()])?;
    let pres = Arc::new(Presentation::new(Arc::clone(&space), vec![parse_series("T^3", &space)?])?);

    let surj = make_truncation(
        &RingDescriptor::new(Family::Pd { m: 7, d: 4 }, params),
        &RingDescriptor::new(Family::Pd { m: 7, d: 3 }, params),
    )?;
    let image = surj.source().parse_element("9*g1")?;
    let x = check_well_defined(&pres, surj.source(), vec![image])?
        .into_map()
        .expect("9 g1 cubes to zero");
    let x_prime = x.push_forward(surj.hom())?;

    let module = t1_module(&x_prime)?;
    println!("T^1 over {} has {} generating classes:", x_prime.target().descriptor(), module.classes.len());
    for c in &module.classes {
        println!("  {c}");
    }

    println!("{}", t1_lifting_check(&x, &x_prime, &surj)?);
    Ok(())
}
