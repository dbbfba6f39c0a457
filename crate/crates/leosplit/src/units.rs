//! Unit suffixes accepted in config files and their conversion to the
//! canonical units: KB for data, KB/s for rates, seconds for time, watts
//! for power. All data units are decimal (1 KB = 1000 B).

pub const KB_PER_MB: f64 = 1000.0;
pub const KB_PER_GB: f64 = 1_000_000.0;
/// 1 MB/s = 1000 KB/s.
pub const KBS_PER_MBS: f64 = 1000.0;
/// 1 Mbps = 10^6 bits/s = 125 000 B/s = 125 KB/s.
pub const KBS_PER_MBPS: f64 = 125.0;
pub const SECONDS_PER_MINUTE: f64 = 60.0;
pub const SECONDS_PER_HOUR: f64 = 3600.0;

/// The physical dimension a config key expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// KB, MB, GB -> KB
    Data,
    /// KB/s, MB/s, Mbps -> KB/s
    Rate,
    /// s, min, h -> seconds
    Time,
    /// W
    Power,
    /// s/KB
    LatencyPerKb,
    /// unitless; a suffix is an error
    Pure,
}

impl Dimension {
    fn unit_factor(self, unit: &str) -> Option<f64> {
        match (self, unit) {
            (Dimension::Data, "KB") => Some(1.0),
            (Dimension::Data, "MB") => Some(KB_PER_MB),
            (Dimension::Data, "GB") => Some(KB_PER_GB),
            (Dimension::Rate, "KB/s") => Some(1.0),
            (Dimension::Rate, "MB/s") => Some(KBS_PER_MBS),
            (Dimension::Rate, "Mbps") => Some(KBS_PER_MBPS),
            (Dimension::Time, "s") => Some(1.0),
            (Dimension::Time, "min") => Some(SECONDS_PER_MINUTE),
            (Dimension::Time, "h") => Some(SECONDS_PER_HOUR),
            (Dimension::Power, "W") => Some(1.0),
            (Dimension::LatencyPerKb, "s/KB") => Some(1.0),
            _ => None,
        }
    }

    fn expected_units(self) -> &'static str {
        match self {
            Dimension::Data => "KB, MB or GB",
            Dimension::Rate => "KB/s, MB/s or Mbps",
            Dimension::Time => "s, min or h",
            Dimension::Power => "W",
            Dimension::LatencyPerKb => "s/KB",
            Dimension::Pure => "no unit",
        }
    }
}

/// Split `"<number> <unit>"` on the last whitespace run; units are always
/// space-separated so exponents like `1e6` never look like suffixes.
fn split_unit(text: &str) -> (&str, Option<&str>) {
    match text.rsplit_once(char::is_whitespace) {
        Some((number, unit)) if !unit.is_empty() => (number.trim(), Some(unit.trim())),
        _ => (text.trim(), None),
    }
}

/// Parse `"<number> <unit>"` into canonical units. Dimensioned values must
/// carry their unit explicitly; unitless values must not carry one.
pub fn parse_quantity(text: &str, dimension: Dimension) -> Result<f64, String> {
    let (number_part, unit_part) = split_unit(text.trim());
    let value: f64 = number_part.parse().map_err(|_| {
        format!("cannot parse '{number_part}' as a number; write '<value> <unit>' with a space")
    })?;
    match (dimension, unit_part) {
        (Dimension::Pure, None) => Ok(value),
        (Dimension::Pure, Some(unit)) => {
            Err(format!("unexpected unit '{unit}' on a unitless value"))
        }
        (dim, None) => Err(format!(
            "missing unit: expected {} (units are never inferred)",
            dim.expected_units()
        )),
        (dim, Some(unit)) => match dim.unit_factor(unit) {
            Some(factor) => Ok(value * factor),
            None => Err(format!(
                "unknown unit '{unit}': expected {}",
                dim.expected_units()
            )),
        },
    }
}

/// Parse `"<lo>..<hi> <unit>"` into a canonical (lo, hi) pair; the single
/// trailing unit applies to both endpoints.
pub fn parse_range(text: &str, dimension: Dimension) -> Result<(f64, f64), String> {
    let (number_part, unit_part) = split_unit(text.trim());
    let (lo_text, hi_text) = number_part
        .split_once("..")
        .ok_or_else(|| format!("expected '<lo>..<hi> <unit>', got '{text}'"))?;
    let with_unit = |n: &str| match unit_part {
        Some(unit) => format!("{} {unit}", n.trim()),
        None => n.trim().to_string(),
    };
    let lo = parse_quantity(&with_unit(lo_text), dimension)?;
    let hi = parse_quantity(&with_unit(hi_text), dimension)?;
    Ok((lo, hi))
}

/// Parse a comma-separated list of quantities. A unit on the final element
/// is shared by every element that lacks its own; elements may also carry
/// units individually.
pub fn parse_quantity_list(text: &str, dimension: Dimension) -> Result<Vec<f64>, String> {
    let tokens: Vec<&str> = text.split(',').map(str::trim).collect();
    if tokens.iter().any(|t| t.is_empty()) {
        return Err("empty element in list".to_string());
    }
    let default_unit = tokens.last().and_then(|t| split_unit(t).1);
    tokens
        .iter()
        .map(|token| {
            if split_unit(token).1.is_some() || dimension == Dimension::Pure {
                parse_quantity(token, dimension)
            } else {
                match default_unit {
                    Some(unit) => parse_quantity(&format!("{token} {unit}"), dimension),
                    None => parse_quantity(token, dimension),
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantities_convert_to_canonical_units() {
        assert_eq!(parse_quantity("50 Mbps", Dimension::Rate).unwrap(), 6250.0);
        assert_eq!(
            parse_quantity("10 MB/s", Dimension::Rate).unwrap(),
            10_000.0
        );
        assert_eq!(parse_quantity("100 KB/s", Dimension::Rate).unwrap(), 100.0);
        assert_eq!(parse_quantity("200 GB", Dimension::Data).unwrap(), 2.0e8);
        assert_eq!(parse_quantity("1e6 KB", Dimension::Data).unwrap(), 1.0e6);
        assert_eq!(parse_quantity("6 min", Dimension::Time).unwrap(), 360.0);
        assert_eq!(parse_quantity("8 h", Dimension::Time).unwrap(), 28_800.0);
        assert_eq!(
            parse_quantity("0.02 s/KB", Dimension::LatencyPerKb).unwrap(),
            0.02
        );
        assert_eq!(parse_quantity("2 W", Dimension::Power).unwrap(), 2.0);
        assert_eq!(parse_quantity("0.5", Dimension::Pure).unwrap(), 0.5);
    }

    #[test]
    fn units_are_never_inferred() {
        assert!(parse_quantity("50", Dimension::Rate)
            .unwrap_err()
            .contains("missing unit"));
        assert!(parse_quantity("50 MBps", Dimension::Rate)
            .unwrap_err()
            .contains("unknown unit"));
        assert!(parse_quantity("0.5 W", Dimension::Pure)
            .unwrap_err()
            .contains("unexpected unit"));
        assert!(parse_quantity("1 GB", Dimension::Time)
            .unwrap_err()
            .contains("unknown unit"));
    }

    #[test]
    fn ranges_share_the_trailing_unit() {
        assert_eq!(
            parse_range("10..100 Mbps", Dimension::Rate).unwrap(),
            (1250.0, 12_500.0)
        );
        assert_eq!(
            parse_range("1..1000 GB", Dimension::Data).unwrap(),
            (1.0e6, 1.0e9)
        );
        assert_eq!(
            parse_range("0.05..0.9", Dimension::Pure).unwrap(),
            (0.05, 0.9)
        );
        assert!(parse_range("10 Mbps", Dimension::Rate).is_err());
    }

    #[test]
    fn lists_share_the_trailing_unit() {
        assert_eq!(
            parse_quantity_list("10, 20, 30 MB/s", Dimension::Rate).unwrap(),
            vec![10_000.0, 20_000.0, 30_000.0]
        );
        assert_eq!(
            parse_quantity_list("500 MB, 1 GB", Dimension::Data).unwrap(),
            vec![500_000.0, 1_000_000.0]
        );
        assert_eq!(
            parse_quantity_list("0.8, 0.4, 0.1", Dimension::Pure).unwrap(),
            vec![0.8, 0.4, 0.1]
        );
        assert!(parse_quantity_list("10 MB/s, 20", Dimension::Rate).is_err());
        assert!(parse_quantity_list("10,, 20 MB/s", Dimension::Rate).is_err());
    }
}
