//! Device graph of the conveyor-belt processor and its two-coupler variants.
//!
//! Index convention: the loop holds `4N` sites. IC site `Q_j` (1-based `j`) sits at
//! loop index `4(j-1)`; sector `S_j` occupies the three indices clockwise after it,
//! with pattern (A, B, A). The baseline in-loop A-crossed qubit has index `4N`; the
//! variants place their two couplers at `4N` and `4N+1`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    Regular,
    Crossed,
    DoubleCrossed,
}

impl Crossing {
    /// Rabi-frequency multiplier relative to a regular qubit of the same family.
    pub fn rabi_multiplier(self) -> f64 {
        match self {
            Crossing::Regular => 1.0,
            Crossing::Crossed => 2.0,
            Crossing::DoubleCrossed => 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Species {
    pub family: Family,
    pub crossing: Crossing,
}

impl Species {
    pub const fn new(family: Family, crossing: Crossing) -> Self {
        Species { family, crossing }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.crossing {
            Crossing::Regular => "regular",
            Crossing::Crossed => "crossed",
            Crossing::DoubleCrossed => "double-crossed",
        };
        write!(f, "{:?}-{}", self.family, c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Site {
    pub index: usize,
    pub species: Species,
    /// Level spacing raised by one ZZ unit to compensate a third neighbor.
    pub triangle_corrected: bool,
    pub on_loop: bool,
}

/// Three-site separator `(A, B, A)` between two consecutive IC sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector {
    pub first_a: usize,
    pub center_b: usize,
    pub last_a: usize,
}

impl Sector {
    pub fn sites(&self) -> [usize; 3] {
        [self.first_a, self.center_b, self.last_a]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    Baseline,
    TwoCouplerThreeSpecies,
    TwoCouplerDoubleCrossed,
}

impl Design {
    pub fn name(self) -> &'static str {
        match self {
            Design::Baseline => "baseline",
            Design::TwoCouplerThreeSpecies => "two_coupler_three_species",
            Design::TwoCouplerDoubleCrossed => "two_coupler_double_crossed",
        }
    }

    pub fn is_variant(self) -> bool {
        self != Design::Baseline
    }
}

impl std::str::FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Design::Baseline),
            "two_coupler_three_species" => Ok(Design::TwoCouplerThreeSpecies),
            "two_coupler_double_crossed" => Ok(Design::TwoCouplerDoubleCrossed),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }
}

/// In-loop coupler of a variant design and the two IC sites it joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coupler {
    pub site: usize,
    pub pair: (usize, usize),
}

/// One violated topology invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SiteCount {
        expected: usize,
        actual: usize,
    },
    SelfLoop {
        site: usize,
    },
    SiteIndex {
        position: usize,
        index: usize,
    },
    LoopNeighbors {
        site: usize,
        loop_neighbors: Vec<usize>,
    },
    TooManyNeighbors {
        site: usize,
        degree: usize,
    },
    SameFamilyEdge {
        a: usize,
        b: usize,
    },
    LoopSpecies {
        site: usize,
        expected: Family,
        found: Species,
    },
    TriangleFlag {
        site: usize,
        degree: usize,
        flagged: bool,
    },
    OnLoopFlag {
        site: usize,
    },
    UniqueBCrossed {
        found: Vec<usize>,
    },
    UniqueACrossed {
        found: Vec<usize>,
    },
    CentralAdjacency {
        central: usize,
        neighbors: Vec<usize>,
    },
    InitTargets {
        expected: Vec<usize>,
        actual: Vec<usize>,
    },
    Coupler {
        site: usize,
        message: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SiteCount { expected, actual } => {
                write!(f, "site count {actual}, expected {expected}")
            }
            Violation::SelfLoop { site } => write!(f, "site {site} is coupled to itself"),
            Violation::SiteIndex { position, index } => {
                write!(f, "site table entry {position} carries index {index}")
            }
            Violation::LoopNeighbors { site, loop_neighbors } => write!(
                f,
                "loop site {site} must have exactly its two loop neighbors, found {loop_neighbors:?}"
            ),
            Violation::TooManyNeighbors { site, degree } => {
                write!(f, "site {site} has {degree} neighbors (at most 3 allowed)")
            }
            Violation::SameFamilyEdge { a, b } => {
                write!(f, "edge ({a}, {b}) joins two sites of the same family")
            }
            Violation::LoopSpecies { site, expected, found } => {
                write!(f, "loop site {site} should be family {expected:?}, found {found}")
            }
            Violation::TriangleFlag { site, degree, flagged } => write!(
                f,
                "site {site} has degree {degree} but triangle_corrected = {flagged}"
            ),
            Violation::OnLoopFlag { site } => write!(f, "site {site} has a wrong on_loop flag"),
            Violation::UniqueBCrossed { found } => {
                write!(f, "unique B-crossed must be Q_2, found B-crossed sites {found:?}")
            }
            Violation::UniqueACrossed { found } => write!(
                f,
                "unique A-crossed must be the central site, found A-crossed sites {found:?}"
            ),
            Violation::CentralAdjacency { central, neighbors } => write!(
                f,
                "central site {central} must be adjacent to exactly Q_1, Q_2, Q_3, found {neighbors:?}"
            ),
            Violation::InitTargets { expected, actual } => {
                write!(f, "init targets {actual:?}, expected {expected:?}")
            }
            Violation::Coupler { site, message } => write!(f, "coupler {site}: {message}"),
        }
    }
}

/// Immutable device graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceTopology {
    n_logical: usize,
    design: Design,
    sites: Vec<Site>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    ic_sites: Vec<usize>,
    sectors: Vec<Sector>,
    central_site: Option<usize>,
    couplers: Vec<Coupler>,
    init_targets: Vec<usize>,
}

fn check_n(n: usize) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "the well-formed encoding needs an even number of IC sites",
        });
    }
    if n < 4 {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "at least 4 IC sites are required",
        });
    }
    Ok(())
}

fn loop_species(index: usize) -> Family {
    match index % 4 {
        0 | 2 => Family::B,
        _ => Family::A,
    }
}

fn loop_edges(n: usize) -> Vec<(usize, usize)> {
    let len = 4 * n;
    (0..len).map(|i| (i, (i + 1) % len)).collect()
}

fn coupler_layout(design: Design, n: usize) -> Vec<(Species, (usize, usize))> {
    let q = |j: usize| 4 * (j - 1);
    match design {
        Design::Baseline => Vec::new(),
        Design::TwoCouplerThreeSpecies => vec![
            (Species::new(Family::C, Crossing::Regular), (q(1), q(3))),
            (
                Species::new(Family::C, Crossing::Crossed),
                (q(4), q(8.min(n))),
            ),
        ],
        Design::TwoCouplerDoubleCrossed => vec![
            (Species::new(Family::A, Crossing::Crossed), (q(1), q(3))),
            (
                Species::new(Family::A, Crossing::DoubleCrossed),
                (q(4), q(8.min(n))),
            ),
        ],
    }
}

impl DeviceTopology {
    /// Builds the baseline conveyor: `4N` loop sites plus the in-loop A-crossed qubit
    /// coupled to `Q_1`, `Q_2`, `Q_3`.
    pub fn build_conveyor(n: usize) -> Result<Self> {
        check_n(n)?;
        let central = 4 * n;
        let mut species = Vec::with_capacity(4 * n + 1);
        for i in 0..4 * n {
            let crossing = if i == 4 {
                Crossing::Crossed
            } else {
                Crossing::Regular
            };
            species.push(Species::new(loop_species(i), crossing));
        }
        species.push(Species::new(Family::A, Crossing::Crossed));
        let mut edges = loop_edges(n);
        edges.extend([(0, central), (4, central), (8, central)]);
        Self::assemble(n, Design::Baseline, species, edges)
    }

    /// Builds a two-coupler variant. The couplers join `(Q_1, Q_3)` and `(Q_4, Q_8)`.
    pub fn build_variant(design: Design, n: usize) -> Result<Self> {
        if design == Design::Baseline {
            return Self::build_conveyor(n);
        }
        check_n(n)?;
        if n < 8 {
            return Err(Error::InvalidQubitCount {
                n,
                reason: "variant designs couple Q_4 with Q_8 and need N >= 8",
            });
        }
        let mut species: Vec<Species> = (0..4 * n)
            .map(|i| {
                let crossing = if i == 4 {
                    Crossing::Crossed
                } else {
                    Crossing::Regular
                };
                Species::new(loop_species(i), crossing)
            })
            .collect();
        let mut edges = loop_edges(n);
        for (k, (sp, (a, b))) in coupler_layout(design, n).into_iter().enumerate() {
            let site = 4 * n + k;
            species.push(sp);
            edges.push((a, site));
            edges.push((b, site));
        }
        Self::assemble(n, design, species, edges)
    }

    /// Builds the graph from species and edges, deriving triangle flags from degree.
    fn assemble(
        n: usize,
        design: Design,
        species: Vec<Species>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut degree = vec![0usize; species.len()];
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let sites = species
            .into_iter()
            .enumerate()
            .map(|(index, species)| Site {
                index,
                species,
                triangle_corrected: degree[index] == 3,
                on_loop: index < 4 * n,
            })
            .collect();
        Self::from_parts(n, design, sites, edges)
    }

    /// Assembles a topology from a raw site table and edge list without checking
    /// invariants; call [`DeviceTopology::validate`] afterwards. Derived indexing
    /// (IC sites, sectors, central/couplers, init targets) follows the fixed
    /// index convention.
    pub fn from_parts(
        n_logical: usize,
        design: Design,
        sites: Vec<Site>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n_sites = sites.len();
        let mut norm: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &(a, b) in &edges {
            for s in [a, b] {
                if s >= n_sites {
                    return Err(Error::InvalidSite { site: s, n_sites });
                }
            }
            norm.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<(usize, usize)> = norm.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n_sites];
        for &(a, b) in &edges {
            if a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let loop_len = (4 * n_logical).min(n_sites);
        let ic_sites: Vec<usize> = (0..n_logical)
            .map(|j| 4 * j)
            .filter(|&i| i < loop_len)
            .collect();
        let sectors: Vec<Sector> = (0..n_logical)
            .filter(|j| 4 * j + 3 < loop_len)
            .map(|j| Sector {
                first_a: 4 * j + 1,
                center_b: 4 * j + 2,
                last_a: 4 * j + 3,
            })
            .collect();
        let (central_site, couplers, init_targets) = match design {
            Design::Baseline => {
                let central = (n_sites > 4 * n_logical).then_some(4 * n_logical);
                // Sectors S_2, S_4, ... (1-based) are paramagnetic in FP.
                let init = sectors
                    .iter()
                    .skip(1)
                    .step_by(2)
                    .map(|s| s.center_b)
                    .collect();
                (central, Vec::new(), init)
            }
            _ => {
                let couplers = (4 * n_logical..n_sites)
                    .map(|site| {
                        let nb = &adjacency[site];
                        let pair = (
                            nb.first().copied().unwrap_or(site),
                            nb.last().copied().unwrap_or(site),
                        );
                        Coupler { site, pair }
                    })
                    .collect();
                (None, couplers, Vec::new())
            }
        };

        Ok(DeviceTopology {
            n_logical,
            design,
            sites,
            edges,
            adjacency,
            ic_sites,
            sectors,
            central_site,
            couplers,
            init_targets,
        })
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn design(&self) -> Design {
        self.design
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site(&self, index: usize) -> Result<&Site> {
        self.sites.get(index).ok_or(Error::InvalidSite {
            site: index,
            n_sites: self.sites.len(),
        })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// IC sites `Q_1..Q_N` in order.
    pub fn ic_sites(&self) -> &[usize] {
        &self.ic_sites
    }

    /// Site of `Q_j` for 1-based `j`.
    pub fn q(&self, j: usize) -> usize {
        self.ic_sites[j - 1]
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn central_site(&self) -> Option<usize> {
        self.central_site
    }

    pub fn couplers(&self) -> &[Coupler] {
        &self.couplers
    }

    pub fn init_targets(&self) -> &[usize] {
        &self.init_targets
    }

    /// Sorted neighbor list of `site`.
    pub fn neighbors(&self, site: usize) -> Result<&[usize]> {
        self.adjacency
            .get(site)
            .map(Vec::as_slice)
            .ok_or(Error::InvalidSite {
                site,
                n_sites: self.sites.len(),
            })
    }

    /// Bit mask over the neighbors of `site` (basis bit `i` is site `i`).
    pub fn neighbor_mask(&self, site: usize) -> Result<u64> {
        Ok(self
            .neighbors(site)?
            .iter()
            .fold(0u64, |m, &s| m | (1u64 << s)))
    }

    pub fn degree(&self, site: usize) -> usize {
        self.adjacency.get(site).map_or(0, Vec::len)
    }

    /// Bit mask of all IC sites.
    pub fn ic_mask(&self) -> u64 {
        self.ic_sites.iter().fold(0, |m, &s| m | (1u64 << s))
    }

    /// Checks every structural invariant; returns all violations found.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let n = self.n_logical;
        let loop_len = 4 * n;
        let expected_sites = if self.design.is_variant() {
            loop_len + 2
        } else {
            loop_len + 1
        };
        if self.sites.len() != expected_sites {
            out.push(Violation::SiteCount {
                expected: expected_sites,
                actual: self.sites.len(),
            });
        }
        for (pos, site) in self.sites.iter().enumerate() {
            if site.index != pos {
                out.push(Violation::SiteIndex {
                    position: pos,
                    index: site.index,
                });
            }
            if site.on_loop != (pos < loop_len) {
                out.push(Violation::OnLoopFlag { site: pos });
            }
        }
        for &(a, b) in &self.edges {
            if a == b {
                out.push(Violation::SelfLoop { site: a });
            } else if self.sites[a].species.family == self.sites[b].species.family {
                out.push(Violation::SameFamilyEdge { a, b });
            }
        }
        for (i, site) in self.sites.iter().enumerate() {
            let degree = self.degree(i);
            if degree > 3 {
                out.push(Violation::TooManyNeighbors { site: i, degree });
            }
            if site.triangle_corrected != (degree == 3) {
                out.push(Violation::TriangleFlag {
                    site: i,
                    degree,
                    flagged: site.triangle_corrected,
                });
            }
        }
        let loop_len = loop_len.min(self.sites.len());
        for i in 0..loop_len {
            let loop_nb: Vec<usize> = self.adjacency[i]
                .iter()
                .copied()
                .filter(|&s| s < loop_len)
                .collect();
            let mut expected = vec![(i + 1) % loop_len, (i + loop_len - 1) % loop_len];
            expected.sort_unstable();
            if loop_nb != expected {
                out.push(Violation::LoopNeighbors {
                    site: i,
                    loop_neighbors: loop_nb,
                });
            }
            let fam = loop_species(i);
            if self.sites[i].species.family != fam {
                out.push(Violation::LoopSpecies {
                    site: i,
                    expected: fam,
                    found: self.sites[i].species,
                });
            }
        }

        let of_species = |fam: Family, crossing: Crossing| -> Vec<usize> {
            self.sites
                .iter()
                .filter(|s| s.species == Species::new(fam, crossing))
                .map(|s| s.index)
                .collect()
        };
        let b_crossed = of_species(Family::B, Crossing::Crossed);
        if n >= 2 && b_crossed != vec![4] {
            out.push(Violation::UniqueBCrossed { found: b_crossed });
        }

        match self.design {
            Design::Baseline => {
                let a_crossed = of_species(Family::A, Crossing::Crossed);
                let central = 4 * n;
                if a_crossed != vec![central] {
                    out.push(Violation::UniqueACrossed { found: a_crossed });
                }
                if central < self.sites.len() {
                    let nb = self.adjacency[central].clone();
                    if nb != vec![0, 4, 8] {
                        out.push(Violation::CentralAdjacency {
                            central,
                            neighbors: nb,
                        });
                    }
                }
                let expected: Vec<usize> =
                    (0..n).filter(|j| j % 2 == 1).map(|j| 4 * j + 2).collect();
                if self.init_targets != expected {
                    out.push(Violation::InitTargets {
                        expected,
                        actual: self.init_targets.clone(),
                    });
                }
            }
            design => {
                let layout = coupler_layout(design, n);
                for (k, (species, (a, b))) in layout.into_iter().enumerate() {
                    let site = loop_len + k;
                    let Some(s) = self.sites.get(site) else {
                        continue;
                    };
                    if s.species != species {
                        out.push(Violation::Coupler {
                            site,
                            message: format!("species {} expected {}", s.species, species),
                        });
                    }
                    let nb = &self.adjacency[site];
                    if nb.as_slice() != [a.min(b), a.max(b)] {
                        out.push(Violation::Coupler {
                            site,
                            message: format!("neighbors {nb:?}, expected IC pair ({a}, {b})"),
                        });
                    }
                }
            }
        }

        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn to_document(&self) -> TopologyDocument {
        TopologyDocument {
            format: 1,
            n: self.n_logical,
            variant: self.design,
            sites: self
                .sites
                .iter()
                .map(|s| SiteRecord {
                    index: s.index,
                    family: s.species.family,
                    crossing: s.species.crossing,
                    triangle: s.triangle_corrected,
                })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_document(doc: &TopologyDocument) -> Result<Self> {
        if doc.format != 1 {
            return Err(Error::Io(format!(
                "unsupported topology format {}",
                doc.format
            )));
        }
        let n_loop = 4 * doc.n;
        let sites = doc
            .sites
            .iter()
            .map(|r| Site {
                index: r.index,
                species: Species::new(r.family, r.crossing),
                triangle_corrected: r.triangle,
                on_loop: r.index < n_loop,
            })
            .collect();
        let edges = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_parts(doc.n, doc.variant, sites, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("topology serializes")
    }

    /// Parses a topology document and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TopologyDocument = serde_json::from_str(text)?;
        let topo = Self::from_document(&doc)?;
        topo.validate().map_err(|v| {
            Error::InvalidTopology(
                v.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        Ok(topo)
    }
}

/// On-disk topology representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyDocument {
    pub format: u32,
    pub n: usize,
    pub variant: Design,
    pub sites: Vec<SiteRecord>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub index: usize,
    pub family: Family,
    pub crossing: Crossing,
    pub triangle: bool,
}
