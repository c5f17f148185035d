/// Fixed-point rendering with round-half-even on the exact binary value
/// (`0.125` gives `"0.12"`, `0.375` gives `"0.38"`). Negative zero prints
/// without a sign.
pub fn fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Precision of the ranked pair tables.
pub const PAIR_DECIMALS: usize = 2;
/// Precision of IE weights and per-triple scores.
pub const IE_DECIMALS: usize = 8;
/// Precision of relation proportions; eight rounded shares still sum to one
/// within 1e-9.
pub const PROPORTION_DECIMALS: usize = 10;
