//! Small reference graphs with known visit vectors and set PageRanks.

use crate::graph::WebGraph;

pub const C2: &str = include_str!("../fixtures/c2.txt");
pub const C3: &str = include_str!("../fixtures/c3.txt");
pub const CHAIN3: &str = include_str!("../fixtures/chain3.txt");
/// Eleven nodes around `I = {1}`, in basic absorbing form. `V = {2,3,4}`.
pub const G_FIG2: &str = include_str!("../fixtures/g_fig2.txt");
/// Optimal website shape on `I = {1..5}` leaking into `{6,7}`.
pub const G_FIG1: &str = include_str!("../fixtures/g_fig1.txt");
/// `I = {1..5}` with two final classes; six outlink choices are optimal.
pub const G_EX5: &str = include_str!("../fixtures/g_ex5.txt");
/// `I = {1,2,3}` where dropping `(1,2)` lowers the set PageRank although
/// `v_1 > v_2`.
pub const G_EX8: &str = include_str!("../fixtures/g_ex8.txt");
/// Two optimal-looking shapes for `I = {1,2,3}`; only the second is optimal
/// under uniform personalization.
pub const G_EX12A: &str = include_str!("../fixtures/g_ex12a.txt");
pub const G_EX12B: &str = include_str!("../fixtures/g_ex12b.txt");
/// Internal links of `I = {1,2,3}` optimal for the fixed external part, at
/// the lower and at the upper bound respectively.
pub const G_EX10A: &str = include_str!("../fixtures/g_ex10a.txt");
pub const G_EX10B: &str = include_str!("../fixtures/g_ex10b.txt");
/// Maximizing the PageRank of `S = {1,2} ⊆ I = {1,2,3}` without self-links.
pub const G_EX14A: &str = include_str!("../fixtures/g_ex14a.txt");
pub const G_EX14B: &str = include_str!("../fixtures/g_ex14b.txt");
/// Adding the external inlink `(3,2)` lowers the PageRank of `I = {1,2}`.
pub const G_EX15: &str = include_str!("../fixtures/g_ex15.txt");
/// Adding `(4,3)` lowers the PageRank of `I = {1,2,3}`.
pub const G_EX16: &str = include_str!("../fixtures/g_ex16.txt");

pub const ALL: &[(&str, &str)] = &[
    ("c2", C2),
    ("c3", C3),
    ("chain3", CHAIN3),
    ("g_fig1", G_FIG1),
    ("g_fig2", G_FIG2),
    ("g_ex5", G_EX5),
    ("g_ex8", G_EX8),
    ("g_ex12a", G_EX12A),
    ("g_ex12b", G_EX12B),
    ("g_ex10a", G_EX10A),
    ("g_ex10b", G_EX10B),
    ("g_ex14a", G_EX14A),
    ("g_ex14b", G_EX14B),
    ("g_ex15", G_EX15),
    ("g_ex16", G_EX16),
];

/// Parses a bundled fixture by name.
pub fn load(name: &str) -> Option<WebGraph> {
    ALL.iter()
        .find(|(key, _)| *key == name)
        .map(|(_, text)| text.parse().expect("bundled fixture parses"))
}
