//! Checking and searching metric/form structures: Gauduchon, balanced, sG,
//! h-sG, p-SKT, hp-HS. Searches over the positive cone are decided exactly
//! for p ∈ {1, n−1} via a primal solution or a PSD dual certificate.
//!
//!     cargo run --example structure_detection [entry]

use aeppli::catalog;
use aeppli::structures::{check_structure, find_structure, metric_form, CheckOutcome, FindOptions, FindOutcome, StructureKind};

fn main() -> aeppli::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "kodaira_thurston".into());
    let entry = catalog::entry(&name)?;
    let model = entry.model()?;
    let n = model.n();
    let omega = metric_form(n, &entry.metric_matrix());
    let opts = FindOptions { warm_metrics: vec![entry.metric_matrix()], ..Default::default() };

    let kinds = [
        StructureKind::Gauduchon,
        StructureKind::Balanced,
        StructureKind::Sg,
        StructureKind::HSg(2.0),
        StructureKind::HGauduchon(2.0),
        StructureKind::PSkt(1),
        StructureKind::PSkt(n - 1),
        StructureKind::HpHs(n - 1, 2.0),
    ];
    println!("entry: {} — {}\n", entry.name, entry.description);
    println!("{:22} {:24} {}", "kind", "catalog metric", "existence search");
    for kind in kinds {
        let candidate = match kind {
            StructureKind::PSkt(p) | StructureKind::PHs(p) | StructureKind::HpHs(p, _) => {
                omega.wedge_pow(p)?
            }
            _ => omega.clone(),
        };
        let check = match check_structure(&model, &candidate, kind, 7)? {
            CheckOutcome::Certified(c) => format!("certified ({:.1e})", c.residuals[0].1),
            CheckOutcome::Rejected { residual, .. } => format!("rejected ({residual:.1e})"),
        };
        let find = match find_structure(&model, kind, &opts)? {
            FindOutcome::Found { certificate, .. } => {
                format!("found, positivity margin {:.2e}", certificate.positivity.margin())
            }
            FindOutcome::NotFound { conclusive, .. } => {
                format!("not found ({})", if conclusive { "conclusive" } else { "inconclusive" })
            }
        };
        println!("{:22} {:24} {}", kind.label(), check, find);
    }
    Ok(())
}
