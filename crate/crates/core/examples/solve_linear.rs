//! Linear systems over Z/p^m: a solvable one with its solution module, and an
//! inconsistent one with the row combination that proves it.

use pdlift::witt::{solve_linear, LinearSolution, WittInt, ZpMatrix};

fn show(a: &ZpMatrix, b: &[i128]) -> pdlift::Result<()> {
    let (p, m) = (a.p(), a.precision());
    let rhs = b.iter().map(|&v| WittInt::new(p, m, v)).collect::<pdlift::Result<Vec<_>>>()?;
    match solve_linear(a, &rhs)? {
        LinearSolution::Solution { x, kernel } => {
            let x: Vec<u64> = x.iter().map(WittInt::value).collect();
            println!("mod {}: x = {x:?}", a.modulus());
            for k in kernel {
                println!("  kernel generator {:?}", k.iter().map(WittInt::value).collect::<Vec<_>>());
            }
        }
        LinearSolution::NoSolution(cert) => println!(
            "mod {}: no solution; rows combined by {:?} vanish mod {p}^{} but give {} on the right",
            a.modulus(),
            cert.combination,
            cert.threshold,
            cert.residual
        ),
    }
    Ok(())
}

fn main() -> pdlift::Result<()> {
    // 3x + 9y = 18 and 6x = 0 mod 27
    show(&ZpMatrix::from_rows(3, 3, &[vec![3, 9], vec![6, 0]])?, &[18, 0])?;
    // 3x = 1 mod 9
    show(&ZpMatrix::from_rows(3, 2, &[vec![3]])?, &[1])?;
    // 2x + 4y = 2, 4x = 4 mod 16
    show(&ZpMatrix::from_rows(2, 4, &[vec![2, 4], vec![4, 0]])?, &[2, 4])?;
    Ok(())
}
