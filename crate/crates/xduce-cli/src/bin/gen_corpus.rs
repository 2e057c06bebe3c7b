//! Writes the bundled corpus into a directory (default: `corpus/`).
//! Regenerate after changing any builder in `xduce_core::corpus`.

use std::fs;
use std::path::PathBuf;
use xduce_core::json::serialize_document;

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("corpus"));
    fs::create_dir_all(&dir).expect("create the corpus directory");
    for nd in xduce_core::corpus::all() {
        let name = nd.name.as_deref().expect("corpus documents are named");
        let path = dir.join(format!("{name}.json"));
        fs::write(&path, serialize_document(&nd)).expect("write the document");
        println!("wrote {}", path.display());
    }
}
