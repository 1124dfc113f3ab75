//! Brackets in the elliptic Lie algebra and the classical relation check.
use heartlab::elliptic_lie::{EllipticAlgebra, Gen};
use heartlab::CartanData;

fn main() -> heartlab::Result<()> {
    let cd = CartanData::from_name("A2")?;
    let alg = EllipticAlgebra::new(&cd)?;
    let xp = alg.psi_generator(0, 1, Gen::XPlus)?;
    let xm = alg.psi_generator(0, 0, Gen::XMinus)?;
    println!("[x+_(0,1), x-_(0,0)] = {}", alg.to_json(&alg.bracket(&xp, &xm)));
    println!("h_(0,1) = {}", alg.to_json(&alg.psi_generator(0, 1, Gen::H)?));
    let rep = alg.check_classical_relations(2)?;
    println!(
        "{} relations, {} sign solutions, unique up to flips: {}, literal assignment violates {}",
        rep.relations_checked,
        rep.solutions.len(),
        rep.unique_up_to_flips,
        rep.literal_violations.len()
    );
    Ok(())
}
