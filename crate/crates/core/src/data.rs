//! Monthly torrential-rainfall event counts, 1983-2014, for 12 South Korean
//! regions (384 months each).

/// One region's record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub name: &'static str,
    /// Lowercase ASCII identifier used on the command line.
    pub slug: &'static str,
    pub annual_mean_rainfall_mm: u32,
    /// Number of months with 0, 1, ..., 6 events.
    pub counts: [u64; 7],
    pub months: u64,
}

const fn region(name: &'static str, slug: &'static str, rainfall: u32, counts: [u64; 7]) -> Region {
    Region { name, slug, annual_mean_rainfall_mm: rainfall, counts, months: 384 }
}

/// All regions in their customary order.
pub const REGIONS: [Region; 12] = [
    region("Daegu", "daegu", 1087, [309, 53, 18, 2, 2, 0, 0]),
    region("Busan", "busan", 1344, [275, 67, 32, 5, 4, 0, 1]),
    region("Yeongju", "yeongju", 1125, [295, 60, 25, 1, 1, 1, 1]),
    region("Mungyeong", "mungyeong", 1095, [297, 57, 22, 3, 2, 2, 1]),
    region("Uiseong", "uiseong", 1039, [324, 42, 14, 3, 1, 0, 0]),
    region("Gumi", "gumi", 1104, [311, 50, 15, 4, 2, 1, 1]),
    region("Yeongcheon", "yeongcheon", 1074, [328, 49, 6, 1, 0, 0, 0]),
    region("Geochang", "geochang", 1334, [255, 80, 35, 8, 4, 1, 1]),
    region("Hapcheon", "hapcheon", 1317, [260, 87, 32, 4, 1, 0, 0]),
    region("Miryang", "miryang", 1249, [267, 81, 27, 4, 3, 1, 1]),
    region("Pohang", "pohang", 1274, [281, 69, 29, 2, 2, 0, 1]),
    region("Ulsan", "ulsan", 1287, [277, 78, 24, 2, 2, 1, 0]),
];

/// Looks a region up by slug or display name, ignoring case.
pub fn find_region(key: &str) -> Option<&'static Region> {
    REGIONS
        .iter()
        .find(|r| r.slug.eq_ignore_ascii_case(key) || r.name.eq_ignore_ascii_case(key))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_covers_all_months() {
        for r in &REGIONS {
            assert_eq!(r.counts.iter().sum::<u64>(), r.months, "{}", r.name);
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(find_region("YEONGCHEON").unwrap().counts, [328, 49, 6, 1, 0, 0, 0]);
        assert_eq!(find_region("Ulsan").unwrap().annual_mean_rainfall_mm, 1287);
        assert!(find_region("seoul").is_none());
    }
}
