//! The co-polarised tangent subspace cut out by [v⌟ω^{n−1}]_A = 0, the
//! space of primitive (n−1,1)-classes, and the primitivity report of a class.
//!
//!     cargo run --example copolarised_moduli [entry]

use aeppli::catalog;
use aeppli::cohomology::{self, CohomologyFlavor};
use aeppli::deformation::{
    copolarised_subspace, dolbeault_condition_matrix, gprim_space, primitivity_report,
    tangent_cohomology, TrivializingForm,
};
use aeppli::linalg;
use aeppli::metric::HermitianMetric;

fn main() -> aeppli::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fou".into());
    let entry = catalog::entry(&name)?;
    let model = entry.model()?;
    let n = model.n();
    let metric = HermitianMetric::new(&model, entry.metric_matrix())?;
    let u = TrivializingForm::new(&model, entry.trivializing_form().expect("calabi-yau entry"))?;

    let tangent = tangent_cohomology(&model, Some(&metric), &u)?;
    println!("entry: {}", entry.name);
    println!("dim H^{{0,1}}(T^{{1,0}}) = {} (= h^{{n−1,1}} via the pairing with u)", tangent.dim);

    let aeppli = cohomology::compute_group(&model, Some(&metric), CohomologyFlavor::Aeppli(n - 1, n - 1))?;
    let cls = aeppli.class_of(&metric.omega().wedge_pow(n - 1)?)?;
    let copol = copolarised_subspace(&model, &metric, &cls, &u, &tangent, 11)?;
    println!("co-polarised subspace dim = {}", copol.dim);
    println!("gauge-invariance defect over 20 shifts v ↦ v + ∂̄ζ: {:.3e}", copol.gauge_defect);

    let dol = dolbeault_condition_matrix(&model, &metric, &copol.minimal.chi_min, &tangent)?;
    let kd = linalg::nullspace(&dol, linalg::RANK_TOL);
    println!("Dolbeault-condition subspace dim = {} (balanced comparison)", kd.ncols());

    let gprim = gprim_space(&model, &metric, &u, &tangent, &copol)?;
    println!("H^{{n−1,1}}_Gprim dim = {} (image under T_u)", gprim.dim);

    if copol.dim > 0 {
        let coords = copol.basis.column(0).into_owned();
        let rep = primitivity_report(&model, &metric, &u, &copol, &tangent, &coords)?;
        println!("\nprimitivity report of the first basis class:");
        println!("  harmonic representative primitive: {}", rep.harmonic_is_primitive);
        println!("  ω ∧ (harmonic rep) defect:          {:.3e}", rep.harmonic_primitivity_defect);
        println!("  decomposition residual:             {:.3e}", rep.decomposition_residual);
        println!("  decomposition kernel dim:           {}", rep.decomposition_kernel_dim);
        println!("  Δ_A(v⌟ω^{{n−1}}) defect:             {:.3e}", rep.aeppli_harmonic_defect);
        println!("  d(v⌟ω) defect:                      {:.3e}", rep.d_v_omega_defect);
    }
    Ok(())
}
