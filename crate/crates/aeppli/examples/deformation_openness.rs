//! Openness experiments: the catalog J_a family keeps its balanced Calabi-Yau
//! ∂∂̄ structure across the grid, and an order-2 Maurer-Cartan family on the
//! torus keeps p-SKT h-∂∂̄; the first-order Gauss-Manin slope of the (n−2,n)
//! Aeppli projection matches the class [v⌟ω^{n−1}]_A.
//!
//!     cargo run --example deformation_openness

use aeppli::catalog;
use aeppli::cohomology::{self, check_lemma, CohomologyFlavor, LemmaKind};
use aeppli::deformation::{
    copolarised_subspace, deform_family, openness_experiment, parametrized_family_fibres,
    tangent_cohomology, TrivializingForm,
};
use aeppli::metric::HermitianMetric;
use aeppli::structures::{find_structure, FindOptions, StructureKind};
use rand::SeedableRng;

fn main() -> aeppli::Result<()> {
    // the catalog solvmanifold family J_a
    let entry = catalog::entry("fou")?;
    let offsets: Vec<f64> = (0..5).map(|i| -0.2 + 0.1 * i as f64).collect();
    let opts = FindOptions { warm_metrics: vec![entry.metric_matrix()], ..Default::default() };
    println!("J_a family around a = 0.5:");
    for (dt, model) in parametrized_family_fibres(&entry, &offsets)? {
        let ddbar = check_lemma(&model, LemmaKind::DdBar)?.holds;
        let balanced = find_structure(&model, StructureKind::Balanced, &opts)?.found();
        println!("  a = {:+.2}: ∂∂̄ {}  balanced {}", 0.5 + dt, ddbar, balanced);
    }

    // an order-2 Maurer-Cartan family on the torus
    let entry = catalog::entry("torus3")?;
    let model = entry.model()?;
    let n = model.n();
    let metric = HermitianMetric::new(&model, entry.metric_matrix())?;
    let u = TrivializingForm::new(&model, entry.trivializing_form().unwrap())?;
    let tangent = tangent_cohomology(&model, Some(&metric), &u)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let v = tangent.random_class(&mut rng);
    let grid = [-0.2, -0.1, 0.01, 0.1, 0.2];
    let family = deform_family(&model, &v, &grid, 2)?;

    let aeppli = cohomology::compute_group(&model, Some(&metric), CohomologyFlavor::Aeppli(n - 1, n - 1))?;
    let cls = aeppli.class_of(&metric.omega().wedge_pow(n - 1)?)?;
    let copol = copolarised_subspace(&model, &metric, &cls, &u, &tangent, 11)?;
    let chi = copol.minimal.chi_min.clone();
    let predicted = v.rep.contract(&chi);
    let report = openness_experiment(
        &model,
        &metric,
        &family,
        &chi,
        &[StructureKind::Gauduchon],
        &[0.5, 2.0],
        Some(&predicted),
        &FindOptions::default(),
    )?;

    println!("\nMaurer-Cartan family on torus3 (direction in H^{{0,1}}(T^{{1,0}})):");
    for f in &report.fibres {
        println!(
            "  t = {:+.2}: ∂∂̄ {}  gauduchon {}  (n−2,n)-projection {:.4e}",
            f.t,
            f.ddbar,
            f.structures.iter().find(|(k, _)| k == "gauduchon").map(|x| x.1).unwrap_or(false),
            f.copolarisation_projection
        );
    }
    if let Some((slope, pred)) = report.gauss_manin {
        println!("\nGauss-Manin first-order check: fd slope {slope:.4} vs ‖[v⌟ω^{{n−1}}]_A‖ = {pred:.4}");
    }
    Ok(())
}
