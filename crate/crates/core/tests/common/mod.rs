//! Frozen exchange-sequence tables and helpers shared by integration tests.
#![allow(dead_code)]

use conveyor_core::{DeviceTopology, PhaseLabel, C64};

/// Compound `[Q_j, A1, B2, A3, Q_{j+1}]` after each pulse prefix of the exchange
/// sequence, starting from `|k_j>|F>|k_{j+1}>`. Rows: prefix length 1..=8.
/// Columns: `(k_j, k_{j+1})` = gg, ge, eg, ee. Entries: (power of -i, bits).
pub const BRANCH_TABLE: [[(u32, &str); 4]; 8] = [
    [(2, "gegeg"), (1, "gegge"), (1, "eggeg"), (0, "eggge")],
    [(2, "gegeg"), (2, "geggg"), (2, "gggeg"), (3, "ggegg")],
    [(4, "ggggg"), (4, "gggeg"), (4, "geggg"), (3, "ggegg")],
    [(5, "ggegg"), (4, "gggeg"), (4, "geggg"), (4, "ggggg")],
    [(5, "ggegg"), (6, "geggg"), (6, "gggeg"), (6, "gegeg")],
    [(8, "eggge"), (7, "gegge"), (7, "eggeg"), (6, "gegeg")],
    [(8, "eggge"), (8, "gggge"), (8, "egggg"), (8, "ggggg")],
    [(11, "ggegg"), (11, "egegg"), (11, "ggege"), (11, "egege")],
];

/// Sector `[A1, B2, A3]` starting from `|P>`, after prefixes 0..=8.
pub const P_TRACK: [(u32, &str); 9] = [
    (0, "geg"),
    (0, "geg"),
    (1, "ggg"),
    (3, "ege"),
    (3, "ege"),
    (5, "ggg"),
    (6, "geg"),
    (6, "geg"),
    (7, "ggg"),
];

pub fn minus_i_pow(p: u32) -> C64 {
    [
        C64::new(1.0, 0.0),
        C64::new(0.0, -1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
    ][(p % 4) as usize]
}

fn set_bits(idx: &mut u64, sites: &[usize], bits: &str) {
    for (&s, b) in sites.iter().zip(bits.chars()) {
        if b == 'e' {
            *idx |= 1 << s;
        }
    }
}

/// Expected basis index and amplitude after `m` exchange pulses applied to
/// `|k; phase; g>`, assembled from the tables sector by sector.
pub fn expected_after_prefix(
    topo: &DeviceTopology,
    k: usize,
    phase: PhaseLabel,
    m: usize,
) -> (u64, C64) {
    let n = topo.n_logical();
    let mut idx = 0u64;
    let mut power = 0u32;
    for (j, sector) in topo.sectors().iter().enumerate() {
        let ferro = (j % 2 == 0) == (phase == PhaseLabel::FP);
        if ferro {
            let (qa, qb) = (topo.q(j + 1), topo.q((j + 1) % n + 1));
            let (ka, kb) = (k >> j & 1, k >> ((j + 1) % n) & 1);
            let sites = [qa, sector.first_a, sector.center_b, sector.last_a, qb];
            let (p, bits) = if m == 0 {
                let c = |x: usize| if x == 1 { 'e' } else { 'g' };
                (0, format!("{}ggg{}", c(ka), c(kb)))
            } else {
                let (p, b) = BRANCH_TABLE[m - 1][ka * 2 + kb];
                (p, b.to_string())
            };
            power += p;
            set_bits(&mut idx, &sites, &bits);
        } else {
            let (p, bits) = P_TRACK[m];
            power += p;
            set_bits(&mut idx, &sector.sites(), bits);
        }
    }
    (idx, minus_i_pow(power))
}
