//! Exact prime-field arithmetic and the linear algebra everything else
//! rests on: element operations, matrix rank, and solving.
//!
//! ```sh
//! cargo run --example field_basics
//! ```

use smdc::field::{field_ops, FieldElement, FieldOp, Matrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 11;
    let a = FieldElement::new(9, p)?;
    let b = FieldElement::new(8, p)?;
    println!("working in GF({p})");
    for (op, name) in [
        (FieldOp::Add, "+"),
        (FieldOp::Sub, "-"),
        (FieldOp::Mul, "*"),
        (FieldOp::Div, "/"),
    ] {
        let r = field_ops(a, b, op)?;
        println!("  {} {} {} = {}", a.value(), name, b.value(), r.value());
    }
    println!("  inverse of {} is {}", a.value(), a.inv()?.value());

    // mixing moduli is refused rather than silently coerced
    let other = FieldElement::new(3, 7)?;
    println!(
        "  9 (mod 11) + 3 (mod 7) -> {:?}",
        field_ops(a, other, FieldOp::Add)
    );

    // rank detects the dependent row; solving inverts the clean system
    let dependent = Matrix::from_rows(5, &[vec![1, 2], vec![2, 4]])?;
    println!("\n[[1,2],[2,4]] over GF(5): rank {}", dependent.rank());
    let system = Matrix::from_rows(5, &[vec![2, 0], vec![0, 3]])?;
    let x = system.solve(&[4, 3])?;
    println!("[[2,0],[0,3]] x = (4,3) over GF(5): x = {x:?}");
    match dependent.solve(&[1, 0]) {
        Err(e) => println!("singular system correctly refused: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
