/// Nine significant digits, positional notation for magnitudes in `[1e-5, 1e9)` and
/// scientific otherwise. Non-finite values come out empty.
pub fn sig9(v: f64) -> String {
    if !v.is_finite() {
        return String::new();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    // exponent after rounding, so 9.9999999996 counts as 1e1
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..9).contains(&exp) {
        format!("{v:.*}", (8 - exp) as usize)
    } else {
        sci
    }
}
