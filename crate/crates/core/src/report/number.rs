/// Shortest text that parses back to `x`, padded to at least six decimals.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let mut s = format!("{x}");
    if s == "-0" {
        s = "0".into();
    }
    let decimals = s.find('.').map_or(0, |dot| s.len() - dot - 1);
    if decimals == 0 && !s.contains('.') {
        s.push('.');
    }
    for _ in decimals..6 {
        s.push('0');
    }
    s
}
