//! Number formatting for the delimited outputs.

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back as the rounded value.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// Profit in human-readable summaries.
pub fn profit6(x: f64) -> String {
    format!("{x:.6}")
}
