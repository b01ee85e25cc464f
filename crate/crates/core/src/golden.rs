//! Embedded reference tables: growth-sequence rows, the deterministic
//! reach sequence, and derived-and-frozen CA/geodesic data. The `verify`
//! machinery and the acceptance suite both read from here.

use crate::multiway::GrowthMode;

/// One reference growth row.
#[derive(Debug, Clone)]
pub struct GrowthRow {
    pub s: u8,
    pub k: u8,
    pub mode: GrowthMode,
    pub counts: Vec<u64>,
}

fn parse_counts(csv: &str) -> Vec<u64> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1) // column header
        .map(|l| {
            let (t, c) = l.split_once(',').expect("t,count row");
            let _: u64 = t.parse().expect("t");
            c.parse().expect("count")
        })
        .collect()
}

macro_rules! growth_rows {
    ($mode:expr; $(($s:literal, $k:literal, $file:literal)),+ $(,)?) => {
        vec![$(GrowthRow {
            s: $s,
            k: $k,
            mode: $mode,
            counts: parse_counts(include_str!(concat!("../golden/", $file))),
        }),+]
    };
}

/// All directed-ball reference rows.
pub fn directed_growth_rows() -> Vec<GrowthRow> {
    growth_rows![GrowthMode::Directed;
        (1, 1, "growth_directed_s1_k1.csv"),
        (2, 1, "growth_directed_s2_k1.csv"),
        (3, 1, "growth_directed_s3_k1.csv"),
        (4, 1, "growth_directed_s4_k1.csv"),
        (1, 2, "growth_directed_s1_k2.csv"),
        (2, 2, "growth_directed_s2_k2.csv"),
        (3, 2, "growth_directed_s3_k2.csv"),
        (4, 2, "growth_directed_s4_k2.csv"),
        (1, 3, "growth_directed_s1_k3.csv"),
        (2, 3, "growth_directed_s2_k3.csv"),
        (3, 3, "growth_directed_s3_k3.csv"),
    ]
}

/// All undirected-ball reference rows.
pub fn undirected_growth_rows() -> Vec<GrowthRow> {
    growth_rows![GrowthMode::Undirected;
        (1, 2, "growth_undirected_s1_k2.csv"),
        (2, 2, "growth_undirected_s2_k2.csv"),
        (3, 2, "growth_undirected_s3_k2.csv"),
        (1, 3, "growth_undirected_s1_k3.csv"),
    ]
}

/// The 16-term cumulative deterministic reach sequence for s=2, k=2.
pub fn det_cumulative_s2_k2() -> Vec<u64> {
    parse_counts(include_str!("../golden/det_cumulative_s2_k2.csv"))
}

/// Derived extension of the same sequence out to t = 20.
pub fn det_cumulative_s2_k2_extended() -> Vec<u64> {
    parse_counts(include_str!("../golden/det_cumulative_s2_k2_extended.csv"))
}

/// New-configuration counts per step for the full 256-rule CA sweep,
/// t = 0..50, frozen from the first derivation (cross-checked against an
/// independent wide-buffer evolution).
pub fn ca_counts_all256() -> Vec<u64> {
    parse_counts(include_str!("../golden/ca_counts_all256.csv"))
}

/// Geodesic layer sizes of the 256-rule CA reach graph built to t = 200.
pub fn ca_geodesic_layers_t200() -> Vec<u64> {
    parse_counts(include_str!("../golden/ca_geodesic_layers_t200_all256.csv"))
}

/// Geodesic layer sizes of the deterministic union graph at T = 100
/// (recorded, not asserted beyond regression).
pub fn det_geodesic_layers_t100() -> Vec<u64> {
    parse_counts(include_str!("../golden/det_geodesic_layers_t100_s2_k2.csv"))
}
