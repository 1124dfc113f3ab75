//! Classifying lattice vectors and the classes of the simple modules.
use heartlab::{CartanData, RootVector};

fn main() -> heartlab::Result<()> {
    let cd = CartanData::from_name("A2")?;
    for v in [vec![1, 1, 0], vec![1, 1, 1], vec![2, 2, 2], vec![0, 1, 1], vec![1, 2, 0]] {
        let v = RootVector::new(v);
        println!("{:?} -> {:?}", v.coords(), cd.classify_root(&v));
    }
    for i in cd.nodes() {
        println!("[S_{i}] = {:?}", cd.simple_class(i).coords());
    }
    Ok(())
}
