//! Normalizing a central charge and re-validating the result.
use heartlab::rational::frac;
use heartlab::stability::{CentralCharge, Interval};
use heartlab::{CartanData, Coweight};

fn main() -> heartlab::Result<()> {
    let cd = CartanData::from_name("A3")?;
    let z = CentralCharge::new(
        Coweight::new(vec![frac(7, 3), frac(-5, 2), frac(1, 7), frac(2, 1)]),
        Coweight::new(vec![frac(1, 1), frac(-2, 1), frac(1, 2), frac(3, 1)]),
    );
    for interval in [Interval::HalfOpenUp, Interval::HalfOpenDown] {
        let r = cd.normalize_stability(&z, interval)?;
        println!("{interval:?}: {}", r.to_json());
        println!("  revalidated: {}", cd.revalidate_normalization(&r, interval));
    }
    Ok(())
}
