use sha2::{Digest, Sha256};

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let out = Sha256::digest(bytes);
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// First eight bytes of the SHA-256 as an integer; used to seed deterministic searches.
pub fn seed_from(bytes: &[u8]) -> u64 {
    let out = Sha256::digest(bytes);
    u64::from_le_bytes(out[..8].try_into().unwrap())
}
