//! Root sets Δ_J and graded characters of the positive half for J = {1} in A2.
use heartlab::borel_halves::{BorelHalf, Window};
use heartlab::{CartanData, NodeSet};

fn main() -> heartlab::Result<()> {
    let cd = CartanData::from_name("A2")?;
    let b = BorelHalf::standard(&cd, &NodeSet::from([1]))?;
    let chain = b.check_chain_and_union(4, 6);
    let pos = b.positivity_axioms(6);
    println!("chain ok {}, positivity ok {} ({} closure pairs)", chain.ok(), pos.ok(), pos.pairs_checked);
    let w = Window { n_max: 2, t_max: 1 };
    let (a, _, diff) = b.character_n_ell_j(w);
    println!("tables agree: {}", diff.is_empty());
    print!("{}", a.to_csv());
    let pbw = b.pbw_character(None, w, 3)?;
    println!("dim U at (-δ, t^0) = {}", pbw.dim(&(&cd.delta() * -1), 0));
    Ok(())
}
