//! The ∂∂̄- and h-∂∂̄-lemma checkers, with explicit witnesses on failure.
//!
//!     cargo run --example lemma_witnesses

use aeppli::catalog;
use aeppli::cohomology::{check_lemma, LemmaKind};

fn main() -> aeppli::Result<()> {
    for entry in catalog::entries() {
        let model = entry.model()?;
        let verdict = check_lemma(&model, LemmaKind::DdBar)?;
        print!("{:18} ∂∂̄-lemma: {}", entry.name, verdict.holds);
        if let Some(w) = &verdict.witness {
            print!("  [witness at {} that is {}-exact but not ∂∂̄-exact: {}]",
                w.location, w.exactness, w.form.describe(1e-9));
        }
        println!();
        for h in [0.5, 1.0, 2.0] {
            let v = check_lemma(&model, LemmaKind::HDdBar(h))?;
            println!("{:18}   h-∂∂̄ (h = {h}): {}", "", v.holds);
        }
    }
    Ok(())
}
