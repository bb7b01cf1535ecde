
use super::scenario::NetworkScenario;

/// Multiple-access scheme and the number of orthogonal resources it owns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// OAM modes `1..=modes`; mode 0 belongs to the macrocell.
    Mdma { modes: usize },
    /// Frequency channels `0..channels`, each a `1/channels` share of the band.
    Fdma { channels: usize },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Mdma { .. } => "mdma",
            Scheme::Fdma { .. } => "fdma",
        }
    }

    pub fn resources(&self) -> usize {
        match *self {
            Scheme::Mdma { modes } => modes,
            Scheme::Fdma { channels } => channels,
        }
    }

    pub fn with_resources(&self, n: usize) -> Self {
        match self {
            Scheme::Mdma { .. } => Scheme::Mdma { modes: n },
            Scheme::Fdma { .. } => Scheme::Fdma { channels: n },
        }
    }
}

/// Resource label per small cell: an OAM order for MDMA, a channel index for FDMA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub scheme: Scheme,
    pub labels: Vec<i64>,
}

/// Adjacency lists linking cells closer than `reuse_distance`.
pub fn conflict_graph(scenario: &NetworkScenario, reuse_distance: f64) -> Vec<Vec<usize>> {
    let cells = &scenario.small_cells;
    (0..cells.len())
        .map(|i| {
            (0..cells.len())
                .filter(|&j| {
                    j != i && NetworkScenario::distance(cells[i].position, cells[j].position) < reuse_distance
                })
                .collect()
        })
        .collect()
}

/// Greedy colouring with `colors` colours.
///
/// Vertices are visited by decreasing degree (index order on ties). Each
/// takes the colour with, in order of priority, the fewest already-coloured
/// neighbours holding it, the fewest holders overall, and the lowest index.
/// The second key spreads colours so that with at least as many colours as
/// vertices every vertex gets its own.
pub fn greedy_coloring(adjacency: &[Vec<usize>], colors: usize) -> Vec<usize> {
    assert!(colors >= 1, "need at least one colour");
    let mut order: Vec<usize> = (0..adjacency.len()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adjacency[v].len()));

    let mut color: Vec<Option<usize>> = vec![None; adjacency.len()];
    let mut usage = vec![0usize; colors];
    for v in order {
        let mut clash = vec![0usize; colors];
        for &u in &adjacency[v] {
            if let Some(c) = color[u] {
                clash[c] += 1;
            }
        }
        let pick = (0..colors)
            .min_by_key(|&c| (clash[c], usage[c], c))
            .expect("colors >= 1");
        color[v] = Some(pick);
        usage[pick] += 1;
    }
    color.into_iter().map(|c| c.expect("every vertex visited")).collect()
}

/// Colours the small cells with OAM modes `1..=num_modes`.
pub fn allocate_modes(scenario: &NetworkScenario, num_modes: usize, reuse_distance: f64) -> Assignment {
    let graph = conflict_graph(scenario, reuse_distance);
    Assignment {
        scheme: Scheme::Mdma { modes: num_modes },
        labels: greedy_coloring(&graph, num_modes).into_iter().map(|c| c as i64 + 1).collect(),
    }
}

/// Colours the small cells with frequency channels `0..num_channels`.
pub fn allocate_fdma(scenario: &NetworkScenario, num_channels: usize, reuse_distance: f64) -> Assignment {
    let graph = conflict_graph(scenario, reuse_distance);
    Assignment {
        scheme: Scheme::Fdma {
            channels: num_channels,
        },
        labels: greedy_coloring(&graph, num_channels).into_iter().map(|c| c as i64).collect(),
    }
}
