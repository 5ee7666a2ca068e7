//! Stable content hashes for configurations and corpora.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::text::Document;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// First 16 hex digits of the SHA-256 of the value's JSON form.
pub fn fingerprint<T: Serialize + ?Sized>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("configuration serializes to JSON");
    hex(&Sha256::digest(&json)[..8])
}

/// Hash over document ids, labels and tokens, in order.
pub fn corpus_digest(documents: &[Document]) -> String {
    let mut hasher = Sha256::new();
    for doc in documents {
        hasher.update(doc.id.as_bytes());
        hasher.update([0]);
        hasher.update(doc.label.as_str().as_bytes());
        for token in &doc.tokens {
            hasher.update([0]);
            hasher.update(token.as_bytes());
        }
        hasher.update([1]);
    }
    hex(&hasher.finalize()[..8])
}
