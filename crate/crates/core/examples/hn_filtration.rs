//! Harder–Narasimhan filtrations of random nilpotent preprojective modules over F_2.
use heartlab::preproj_reps::{Analysis, Rep, DEFAULT_DIM_CAP};
use heartlab::CartanData;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> heartlab::Result<()> {
    let cd = CartanData::from_name("A2")?;
    let theta = cd.rho();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for dim in [vec![1, 1, 0], vec![1, 1, 1], vec![2, 1, 0]] {
        let Some(rep) = Rep::sample_valid(&cd, 2, dim.clone(), &mut rng, 200)? else {
            println!("{dim:?}: no sample");
            continue;
        };
        let an = Analysis::new(&cd, &rep, &theta, DEFAULT_DIM_CAP)?;
        let hn = an.hn_filtration()?;
        println!("{dim:?}: {} submodules, HN {}", an.submodules().len(), hn.to_json());
    }
    Ok(())
}
