//! Color keys and their resolution to hex.
//!
//! Bins carry symbolic keys (`"blue"`, or a literal `#rrggbb`); renderers
//! resolve them here. The five named colors are the Spectral5 scheme.

const NAMED: [(&str, &str); 6] = [
    ("blue", "#2b83ba"),
    ("green", "#abdda4"),
    ("yellow", "#ffffbf"),
    ("orange", "#fdae61"),
    ("red", "#d7191c"),
    ("gray", "#888888"),
];

const CATEGORY10: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Hex for a color key; unknown names resolve to gray.
pub fn resolve(key: &str) -> String {
    if key.starts_with('#') {
        return key.to_string();
    }
    NAMED
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(key))
        .map_or("#888888", |(_, hex)| hex)
        .to_string()
}

/// `k` colors sampled along the blue-to-red ramp.
pub fn ramp(k: usize) -> Vec<String> {
    let anchors: Vec<[f64; 3]> = NAMED[..5].iter().map(|(_, hex)| parse_hex(hex)).collect();
    (0..k)
        .map(|i| {
            let t = if k == 1 { 0.5 } else { i as f64 / (k - 1) as f64 };
            let pos = t * (anchors.len() - 1) as f64;
            let j = (pos.floor() as usize).min(anchors.len() - 2);
            let f = pos - j as f64;
            let c: Vec<u8> =
                (0..3).map(|ch| (anchors[j][ch] + f * (anchors[j + 1][ch] - anchors[j][ch])).round() as u8).collect();
            format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
        })
        .collect()
}

/// `k` distinct categorical colors (cycling after ten).
pub fn categorical(k: usize) -> Vec<String> {
    (0..k).map(|i| CATEGORY10[i % CATEGORY10.len()].to_string()).collect()
}

fn parse_hex(hex: &str) -> [f64; 3] {
    let h = hex.trim_start_matches('#');
    let ch = |i: usize| f64::from(u8::from_str_radix(&h[i..i + 2], 16).unwrap_or(0));
    [ch(0), ch(2), ch(4)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_and_literal_keys() {
        assert_eq!(resolve("blue"), "#2b83ba");
        assert_eq!(resolve("RED"), "#d7191c");
        assert_eq!(resolve("#123456"), "#123456");
        assert_eq!(resolve("chartreuse"), "#888888");
    }

    #[test]
    fn ramp_hits_anchors() {
        assert_eq!(ramp(5), vec!["#2b83ba", "#abdda4", "#ffffbf", "#fdae61", "#d7191c"]);
        assert_eq!(ramp(2), vec!["#2b83ba", "#d7191c"]);
        assert_eq!(ramp(1).len(), 1);
    }
}
