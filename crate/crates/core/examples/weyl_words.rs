//! Reduced words, shears and their braid lifts in affine A2.
use heartlab::{CartanData, FiniteCoweight};

fn main() -> heartlab::Result<()> {
    let cd = CartanData::from_name("A2")?;
    let w = cd.evaluate_word(&[0, 1, 0, 2, 1, 1]);
    println!("reduced word of s0 s1 s0 s2 s1 s1: {:?}", cd.reduced_word(&w)?);
    let lambda = FiniteCoweight::from_ints(&[1, -1]);
    let shear = cd.shear(&lambda)?;
    let ext = cd.decompose_extended(&shear)?;
    println!("shear by (1,-1): γ = {:?}, length {}", ext.gamma, ext.length());
    let l = cd.l_lambda(&lambda)?;
    println!("braid lift: {}", l.to_json());
    println!("image matches the shear: {}", cd.braid_weyl_image(&l) == shear);
    println!("|W_f| = {}", cd.finite_weyl_group()?.len());
    Ok(())
}
