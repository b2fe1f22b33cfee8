//! Arithmetic in F_p and F_{p^2}: characters, square roots, orders.

use markoff_lab::field::{chi, mult_order, sqrt_mod, Fp2};
use markoff_lab::Prime;

fn main() -> markoff_lab::Result<()> {
    let p = Prime::new(89)?;
    for v in [2, 3, 5, -1] {
        let x = p.elem(v);
        let roots = sqrt_mod(x).map(|r| r.to_vec());
        println!("chi({v}) = {:>2}   sqrt = {roots:?}", chi(x));
    }
    let x = p.elem(3);
    println!("1/3 = {}, 3^88 = {}", x.inv().unwrap(), x.pow(88));

    // 3 is not a square mod 7, so sqrt(3) lives in F_49
    let q = Prime::new(7)?;
    let r = Fp2::sqrt_of(q.elem(3));
    println!("in F_49: sqrt(3)^2 = {:?}, order of 1 + sqrt(3) = {}", (r * r).c0().value(), mult_order(r + Fp2::embed(q.one()))?);
    Ok(())
}
