//! The Weil-Petersson metrics g⁽¹⁾, g⁽²⁾ and the period-map metric γ on the
//! co-polarised basis, with the Lefschetz comparison
//! (g⁽²⁾ − γ)(v,v) = 4‖ζ‖²/(i^{n²}∫u∧ū) ≥ 0.
//!
//!     cargo run --example weil_petersson [entry]

use aeppli::catalog;
use aeppli::cohomology::{self, CohomologyFlavor};
use aeppli::deformation::{copolarised_subspace, moduli_metrics, tangent_cohomology, TrivializingForm};
use aeppli::metric::HermitianMetric;

fn main() -> aeppli::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fou".into());
    let entry = catalog::entry(&name)?;
    let model = entry.model()?;
    let n = model.n();
    let metric = HermitianMetric::new(&model, entry.metric_matrix())?;
    let u = TrivializingForm::new(&model, entry.trivializing_form().expect("calabi-yau entry"))?;
    let tangent = tangent_cohomology(&model, Some(&metric), &u)?;
    let aeppli = cohomology::compute_group(&model, Some(&metric), CohomologyFlavor::Aeppli(n - 1, n - 1))?;
    let cls = aeppli.class_of(&metric.omega().wedge_pow(n - 1)?)?;
    let copol = copolarised_subspace(&model, &metric, &cls, &u, &tangent, 11)?;
    let mm = moduli_metrics(&model, &metric, &u, &tangent, &copol)?;

    println!("entry: {} — co-polarised dim {}", entry.name, copol.dim);
    println!("i^{{n²}}∫u∧ū = {:.6}\n", mm.denominators.1);
    for i in 0..copol.dim {
        let (p2, z2) = mm.lefschetz[i];
        println!(
            "class {i}: g2 = {:.6}, γ = {:.6}, g2−γ = {:.6}, 4‖ζ‖²/N = {:.6}  (‖prim‖² = {:.6}, ‖ζ‖² = {:.6})",
            mm.g2[(i, i)].re,
            mm.gamma[(i, i)].re,
            (mm.g2[(i, i)] - mm.gamma[(i, i)]).re,
            4.0 * z2 / mm.denominators.1,
            p2,
            z2
        );
    }
    println!("\ndisplayed-identity defect: {:.3e}", mm.identity_defect);
    println!("tensor-vs-transported vv-metric discrepancy: {:.3e}", mm.tensor_metric_discrepancy);
    Ok(())
}
