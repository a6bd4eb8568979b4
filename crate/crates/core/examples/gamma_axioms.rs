//! Divided powers in W_{3,5} at p = 2, checked against the defining laws.

use pdlift::pd_rings::{gamma, make_ring, Family, RingDescriptor, RingHandle};
use pdlift::witt::RingParams;

fn main() -> pdlift::Result<()> {
    let ring = make_ring(&RingDescriptor::new(Family::Pd { m: 3, d: 5 }, RingParams::new(2)?))?;
    let x = &ring.parse_element("2 + g1")? + &ring.parse_element("3*g2")?;
    let y = ring.parse_element("4 + 5*g3")?;
    println!("x = {x}, y = {y}");

    for n in 0..=5u32 {
        let gx = gamma(&x, n)?;
        let fact: i128 = (1..=n as i128).product();
        let sum = (0..=n).try_fold(ring.zero(), |acc, i| Ok::<_, pdlift::Error>(&acc + &(&gamma(&x, i)? * &gamma(&y, n - i)?)))?;
        println!(
            "gamma^{n}(x) = {gx:<16} n! gamma^{n}(x) == x^{n}: {:<5}  addition law: {}",
            gx.scale(fact) == x.pow(n),
            gamma(&(&x + &y), n)? == sum
        );
    }
    // gamma^2 gamma^2 = C(4, 2) gamma^4
    println!("gamma^2(x)^2 = {}, 6 gamma^4(x) = {}", gamma(&x, 2)?.pow(2), gamma(&x, 4)?.scale(6));
    Ok(())
}
