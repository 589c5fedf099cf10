//! Dimension tables of all six cohomology flavors for a catalog model.
//!
//!     cargo run --example cohomology_tables [entry]

use aeppli::catalog;
use aeppli::cohomology::{self, CohomologyFlavor};
use aeppli::metric::HermitianMetric;

fn main() -> aeppli::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "iwasawa".into());
    let entry = catalog::entry(&name)?;
    let model = entry.model()?;
    let metric = HermitianMetric::new(&model, entry.metric_matrix())?;
    let n = model.n();

    println!("entry: {} — {}", entry.name, entry.description);
    println!("\n(p,q)   h_dbar  h_BC  h_A");
    for (p, q, dol, bc, ae) in cohomology::dimension_table(&model, Some(&metric))? {
        println!("({p},{q})   {dol:6}  {bc:4}  {ae:3}");
    }

    let betti = cohomology::betti_numbers(&model)?;
    println!("\ninvariant Betti numbers: {betti:?}");

    for h in [0.5, 2.0] {
        let dims: Vec<usize> = (0..=2 * n)
            .map(|k| cohomology::compute_group(&model, None, CohomologyFlavor::Dh(k, h)).map(|g| g.dim))
            .collect::<aeppli::Result<_>>()?;
        let ha: Vec<usize> = (0..=2 * n)
            .map(|k| cohomology::compute_group(&model, None, CohomologyFlavor::HAeppli(k, h)).map(|g| g.dim))
            .collect::<aeppli::Result<_>>()?;
        println!("h = {h}: dim H_d_h = {dims:?} (θ_h forces equality with Betti)");
        println!("          dim H_h-A = {ha:?} (equals Σ_p+q=k dim H_A^{{p,q}})");
    }
    Ok(())
}
