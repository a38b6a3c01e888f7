//! Words, presentations, the text format, the built-in catalog and the
//! structured report schema.

mod catalog;
mod format;
mod parse;
pub mod report;
mod word;

pub use catalog::{catalog, catalog_entries, catalog_names, CatalogEntry};
pub use format::{parse_document, parse_documents, parse_permutation, Document, Group};
pub use parse::{parse_word, parse_word_in};
pub use report::{Record, Report};
pub use word::{default_generator_names, FpPresentation, Word};

/// Parses a single presentation file.
pub fn parse_presentation(text: &str) -> crate::Result<Document> {
    parse_document(text)
}

/// Serializes one report as a schema-tagged JSON line (no newline).
pub fn emit_report(report: Report) -> String {
    Record::new(report).to_line()
}
