//! Arithmetic in GF(9) built on the modulus t² + 1.

use tanfree::{Fe, Field, Modulus, QuadChar};

fn main() -> tanfree::Result<()> {
    let f = Field::new(3, 2, Modulus::Given(vec![1, 0, 1]))?;
    println!("GF({}) = GF({})^{}, primitive element {}", f.q(), f.p(), f.h(), f.primitive().0);
    let t = Fe(3);
    println!("t·t = {}, t^p = {}, Tr(t) = {}", f.mul(t, t).0, f.frobenius(t).0, f.trace(t).0);

    print!("   ·");
    for b in f.elements() {
        print!("{:>3}", b.0);
    }
    println!();
    for a in f.elements() {
        print!("{:>4}", a.0);
        for b in f.elements() {
            print!("{:>3}", f.mul(a, b).0);
        }
        println!();
    }

    let squares: Vec<u32> = f.nonzero().filter(|&x| f.quad_char(x) == QuadChar::Square).map(|x| x.0).collect();
    println!("nonzero squares {squares:?}, smallest non-square {:?}", f.smallest_non_square().map(|x| x.0));

    // the default modulus is chosen automatically
    let auto = Field::with_order(27)?;
    println!("GF(27) modulus (ascending) {:?}", auto.spec().modulus);
    Ok(())
}
