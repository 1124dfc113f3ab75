//! Arc directions for λ̌ = λ̌_1 in affine D4 and the chamber each one lands in.
use heartlab::{CartanData, FiniteCoweight, NodeSet};

fn main() -> heartlab::Result<()> {
    let cd = CartanData::from_name("D4")?;
    let j = NodeSet::from([1]);
    let lambda = FiniteCoweight::sum_over(cd.rank(), &j);
    let rep = cd.verify_slicing(&lambda, &j, -4..=4)?;
    for e in &rep.entries {
        println!("n = {:>2}  t = {:+.4}  {}  ok = {}", e.n, cd.t_index(e.n).value(), e.chamber.kind, e.ok);
    }
    println!("midpoint ok: {}, all ok: {}", rep.midpoint_ok, rep.ok);
    Ok(())
}
