//! Choi matrices of a few maps, and the inner product of maps computed two
//! ways.

use mapcone::linalg::{hs_inner, seeded_rng, ComplexMatrix};
use mapcone::superop::{map_inner_by_blocks, vectorize, MapDims, SuperOperator};

fn main() -> mapcone::Result<()> {
    let id = SuperOperator::identity(2);
    println!("Choi(id) on C^2:\n{:?}", id.choi());

    let t = SuperOperator::transposition(2);
    let eig = t.choi_eigen(1e-12)?;
    println!("Choi(t) is the swap; eigenvalues {:?}", eig.values);

    let mut rng = seeded_rng(1);
    let v = mapcone::linalg::complex_gaussian(3, 2, &mut rng);
    let ad = SuperOperator::conjugation(&v);
    let u = vectorize(&v);
    let dev = ad.choi().max_abs_diff(&ComplexMatrix::outer(&u, &u));
    println!("Choi(Ad_V) - |v><v|: max deviation {dev:e}");

    let dims = MapDims::new(2, 3)?;
    let phi = SuperOperator::random(dims, &mut rng);
    let psi = SuperOperator::random(dims, &mut rng);
    let blocks = map_inner_by_blocks(&phi, &psi)?;
    let choi = hs_inner(phi.choi(), psi.choi())?;
    println!("sum_kl <phi(f_kl), psi(f_kl)> = {blocks:.12}");
    println!("<C_phi, C_psi>               = {choi:.12}");
    println!("|difference| = {:e}", (blocks - choi).norm());
    Ok(())
}
