//! Two-directional audits of the structure equivalences: h-sG ⇔ sG, the
//! Gauduchon chain, p-SKT ⇔ hp-HS, the p = n−1 dichotomy, and the h-sG
//! coefficient-normalization comparison.
//!
//!     cargo run --example equivalence_audit [entry]

use aeppli::catalog;
use aeppli::structures::{audit_equivalences, FindOptions};

fn main() -> aeppli::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fou".into());
    let entry = catalog::entry(&name)?;
    let model = entry.model()?;
    let n = model.n();
    let opts = FindOptions { warm_metrics: vec![entry.metric_matrix()], ..Default::default() };
    let report = audit_equivalences(&model, &[0.5, 1.0, -1.0, 2.0], &[1, n - 1], &opts)?;

    println!("entry: {}\n", entry.name);
    for item in &report.items {
        let status = if item.skipped {
            "SKIP"
        } else if item.passed {
            "PASS"
        } else {
            "FAIL"
        };
        let hyp = item
            .hypothesis
            .as_ref()
            .map(|(name, holds)| format!(" [hypothesis {name}: {holds}]"))
            .unwrap_or_default();
        println!(
            "{status}  {:28} h={:?} p={:?}{hyp}",
            item.name, item.h, item.p
        );
        if !item.detail.is_empty() {
            println!("      {}", item.detail);
        }
    }
    println!("\nall non-skipped items passed: {}", report.all_passed());
    Ok(())
}
