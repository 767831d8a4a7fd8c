//! Numeric display helpers shared by the report renderers and the CLI.

/// Rounds half away from zero at the given number of decimals, the convention
/// used for all percentage displays.
pub fn round_half_away(value: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    let scaled = value * scale;
    let rounded = if scaled >= 0.0 {
        (scaled + 0.5).floor()
    } else {
        (scaled - 0.5).ceil()
    };
    rounded / scale
}

/// Renders a proportion as a percentage, e.g. `percent(0.79, 1)` is `"79.0%"`.
pub fn percent(proportion: f64, decimals: u32) -> String {
    format!("{}%", fixed(proportion * 100.0, decimals))
}

/// Renders a value rounded half away from zero with fixed decimals.
pub fn fixed(value: f64, decimals: u32) -> String {
    format!(
        "{:.*}",
        decimals as usize,
        round_half_away(value, decimals)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_half_away_from_zero() {
        assert_eq!(round_half_away(0.5, 0), 1.0);
        assert_eq!(round_half_away(-0.5, 0), -1.0);
        assert_eq!(round_half_away(2.345, 2), 2.35);
        assert_eq!(round_half_away(27.9597, 2), 27.96);
    }

    #[test]
    fn formats_published_percentages() {
        assert_eq!(percent(758.0 / 960.0, 1), "79.0%");
        assert_eq!(percent(1201.0 / 1855.0, 1), "64.7%");
        assert_eq!(percent(1550.0 / 1855.0, 1), "83.6%");
        assert_eq!(percent(0.279597, 2), "27.96%");
    }

    #[test]
    fn fixed_point_kappa_display() {
        assert_eq!(fixed(0.46 / 0.58, 4), "0.7931");
        assert_eq!(fixed(-0.05, 2), "-0.05");
    }
}
