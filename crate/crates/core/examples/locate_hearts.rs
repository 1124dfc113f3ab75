//! Locating the maximal and minimal hearts whose cone contains a coweight.
use heartlab::rational::frac;
use heartlab::{CartanData, Coweight};

fn main() -> heartlab::Result<()> {
    let cd = CartanData::from_name("A2")?;
    let samples = [
        Coweight::new(vec![frac(1, 1), frac(1, 2), frac(1, 3)]),
        Coweight::new(vec![frac(-3, 1), frac(1, 1), frac(0, 1)]),
        Coweight::new(vec![frac(-2, 1), frac(1, 1), frac(1, 1)]),
        Coweight::new(vec![frac(0, 1), frac(1, 1), frac(1, 1)]),
    ];
    for theta in &samples {
        let (up, low) = cd.locate_heart_cone(theta)?;
        println!("θ = {:?}", theta.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>());
        println!("  H^θ = {}", serde_json::to_string(&up)?);
        println!("  H_θ = {}", serde_json::to_string(&low)?);
    }
    Ok(())
}
