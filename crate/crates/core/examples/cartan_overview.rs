//! Marks, Coxeter numbers and the involution κ for every supported type.
use heartlab::CartanData;

fn main() -> heartlab::Result<()> {
    for name in ["A1", "A2", "A3", "A4", "D4", "D5", "E6", "E7", "E8"] {
        let cd = CartanData::from_name(name)?;
        let kappa: Vec<usize> = cd.finite_nodes().map(|i| cd.kappa(i)).collect();
        println!(
            "{name:>3}  marks {:?}  h = {:>2}  κ {:?}  |Aut| = {}",
            cd.marks(),
            cd.coxeter_number(),
            kappa,
            cd.diagram_automorphisms().len()
        );
    }
    Ok(())
}
