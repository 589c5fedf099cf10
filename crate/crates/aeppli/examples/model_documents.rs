//! Serializing a catalog model to its JSON document and parsing it back,
//! canonically: the same bytes come out again.
//!
//!     cargo run --example model_documents [entry]

use aeppli::catalog;
use aeppli::schema::{document_for_entry, parse_model, serialize_document};

fn main() -> aeppli::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "iwasawa".into());
    let entry = catalog::entry(&name)?;
    let doc = document_for_entry(&entry);
    let text = serialize_document(&doc).to_json();
    println!("{text}\n");

    let parsed = parse_model(&text)?;
    let again = serialize_document(&parsed).to_json();
    println!("round-trip byte-identical: {}", text == again);
    let model = aeppli::model::build_model(&parsed.presentation)?;
    println!("built model with n = {}", model.n());
    Ok(())
}
