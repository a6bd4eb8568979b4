//! Multiplication table of W_{2,3} at p = 3, plus its truncation to W_{2,2}.

use pdlift::pd_rings::{make_ring, make_truncation, Family, RingDescriptor, RingHandle};
use pdlift::witt::RingParams;

fn main() -> pdlift::Result<()> {
    let params = RingParams::new(3)?;
    let desc = RingDescriptor::new(Family::Pd { m: 2, d: 3 }, params);
    let ring = make_ring(&desc)?;
    println!("{desc}: basis {:?}, moduli {:?}, order {}", ring.labels(), ring.moduli(), ring.order());

    for i in 0..ring.dim() {
        let row: Vec<String> = (0..ring.dim())
            .map(|j| format!("{:>6}", (&ring.basis_elem(i) * &ring.basis_elem(j)).to_string()))
            .collect();
        println!("{:>4} | {}", ring.labels()[i], row.join(" "));
    }

    let surj = make_truncation(&desc, &RingDescriptor::new(Family::Pd { m: 2, d: 2 }, params))?;
    let kernel: Vec<String> = surj.kernel_elements().iter().map(|k| k.to_string()).collect();
    println!("kernel of the truncation to d = 2: [{}], square zero: {}", kernel.join(", "), surj.is_square_zero());
    Ok(())
}
