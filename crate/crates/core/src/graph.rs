//! Networks the agent model runs on.
//!
//! Node ids are dense `0..N`. Generated graphs place the blue nodes first.
//! Complete graphs are stored implicitly; every other graph keeps sorted,
//! symmetric neighbour lists. The two-block model is dense (edge
//! probabilities `rho` and `1 - rho` are not rescaled with `N`), so its
//! memory use grows as `O(N^2)`.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Blue,
    Red,
}

impl Party {
    pub fn index(self) -> usize {
        match self {
            Party::Blue => 0,
            Party::Red => 1,
        }
    }

    pub fn other(self) -> Party {
        match self {
            Party::Blue => Party::Red,
            Party::Red => Party::Blue,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Blue => f.write_str("blue"),
            Party::Red => f.write_str("red"),
        }
    }
}

#[derive(Debug, Clone)]
enum Adjacency {
    Complete,
    Lists(Vec<Vec<u32>>),
}

/// Undirected network with a static party label per node.
#[derive(Debug, Clone)]
pub struct Network {
    party: Vec<Party>,
    n_blue: usize,
    n_red: usize,
    adjacency: Adjacency,
}

pub enum Neighbors<'a> {
    Complete { next: usize, skip: usize, end: usize },
    List(std::slice::Iter<'a, u32>),
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            Neighbors::Complete { next, skip, end } => {
                if *next == *skip {
                    *next += 1;
                }
                if *next >= *end {
                    return None;
                }
                let v = *next;
                *next += 1;
                Some(v)
            }
            Neighbors::List(it) => it.next().map(|&u| u as usize),
        }
    }
}

impl Network {
    fn from_parts(party: Vec<Party>, adjacency: Adjacency) -> Result<Self> {
        let n_red = party.iter().filter(|&&p| p == Party::Red).count();
        let n_blue = party.len() - n_red;
        if party.len() < 2 {
            return Err(Error::TooFewNodes(party.len()));
        }
        Ok(Network {
            party,
            n_blue,
            n_red,
            adjacency,
        })
    }

    /// Builds a network from party labels and an undirected edge list.
    /// Self-loops are rejected; repeated edges (in either orientation) are
    /// merged.
    pub fn from_edges(party: Vec<Party>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = party.len();
        let mut lists: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidConfig(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidConfig(format!("self-loop on node {u}")));
            }
            lists[u].insert(v as u32);
            lists[v].insert(u as u32);
        }
        let lists = lists.into_iter().map(|s| s.into_iter().collect()).collect();
        Network::from_parts(party, Adjacency::Lists(lists))
    }

    pub fn len(&self) -> usize {
        self.party.len()
    }

    pub fn is_empty(&self) -> bool {
        self.party.is_empty()
    }

    pub fn n_blue(&self) -> usize {
        self.n_blue
    }

    pub fn n_red(&self) -> usize {
        self.n_red
    }

    pub fn group_size(&self, party: Party) -> usize {
        match party {
            Party::Blue => self.n_blue,
            Party::Red => self.n_red,
        }
    }

    pub fn party(&self, v: usize) -> Party {
        self.party[v]
    }

    pub fn parties(&self) -> &[Party] {
        &self.party
    }

    pub fn red_fraction(&self) -> f64 {
        self.n_red as f64 / self.len() as f64
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.adjacency, Adjacency::Complete)
    }

    pub fn degree(&self, v: usize) -> usize {
        match &self.adjacency {
            Adjacency::Complete => self.len() - 1,
            Adjacency::Lists(l) => l[v].len(),
        }
    }

    /// Neighbours of `v` in increasing id order.
    pub fn neighbors(&self, v: usize) -> Neighbors<'_> {
        match &self.adjacency {
            Adjacency::Complete => Neighbors::Complete {
                next: 0,
                skip: v,
                end: self.len(),
            },
            Adjacency::Lists(l) => Neighbors::List(l[v].iter()),
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.adjacency {
            Adjacency::Complete => u != v && u < self.len() && v < self.len(),
            Adjacency::Lists(l) => l[u].binary_search(&(v as u32)).is_ok(),
        }
    }

    pub fn edge_count(&self) -> usize {
        match &self.adjacency {
            Adjacency::Complete => self.len() * (self.len() - 1) / 2,
            Adjacency::Lists(l) => l.iter().map(Vec::len).sum::<usize>() / 2,
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Edge counts `(in-group, cross-group)`.
    pub fn edge_split(&self) -> (usize, usize) {
        match &self.adjacency {
            Adjacency::Complete => {
                let inside = self.n_blue * self.n_blue.saturating_sub(1) / 2
                    + self.n_red * self.n_red.saturating_sub(1) / 2;
                (inside, self.n_blue * self.n_red)
            }
            Adjacency::Lists(_) => self.edges().fold((0, 0), |(i, c), (u, v)| {
                if self.party[u] == self.party[v] {
                    (i + 1, c)
                } else {
                    (i, c + 1)
                }
            }),
        }
    }

    /// Verifies the structural invariants: symmetric adjacency, no self-loops,
    /// sorted duplicate-free neighbour lists.
    pub fn check_invariants(&self) -> bool {
        match &self.adjacency {
            Adjacency::Complete => true,
            Adjacency::Lists(l) => l.iter().enumerate().all(|(v, ns)| {
                ns.windows(2).all(|w| w[0] < w[1])
                    && ns.iter().all(|&u| {
                        let u = u as usize;
                        u != v && u < l.len() && l[u].binary_search(&(v as u32)).is_ok()
                    })
            }),
        }
    }
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.party == other.party
            && (0..self.len()).all(|v| self.neighbors(v).eq(other.neighbors(v)))
    }
}

fn blue_first(n_blue: usize, n_red: usize) -> Vec<Party> {
    let mut party = vec![Party::Blue; n_blue];
    party.extend(std::iter::repeat_n(Party::Red, n_red));
    party
}

pub fn generate_complete(n_blue: usize, n_red: usize) -> Result<Network> {
    Network::from_parts(blue_first(n_blue, n_red), Adjacency::Complete)
}

/// Two-block stochastic block model: each same-party pair is an edge with
/// probability `rho`, each cross-party pair with probability `1 - rho`,
/// independently. Pairs are visited in lexicographic order from a single
/// generator seeded with `seed`.
pub fn generate_sbm(n_blue: usize, n_red: usize, rho: f64, seed: u64) -> Result<Network> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter {
            name: "rho",
            value: rho,
            range: "(0, 1)",
        });
    }
    let party = blue_first(n_blue, n_red);
    let n = party.len();
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    let mut rng = seed::rng(seed);
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if party[u] == party[v] { rho } else { 1.0 - rho };
            if rng.gen_bool(p) {
                // Ascending u and v keep both lists sorted.
                lists[u].push(v as u32);
                lists[v].push(u as u32);
            }
        }
    }
    Network::from_parts(party, Adjacency::Lists(lists))
}

/// Empirical homophily: in-group edge density over the sum of in-group and
/// cross-group densities, each density being edges over available pairs.
/// Concentrates at `rho` for a two-block model sample.
pub fn homophily_estimate(net: &Network) -> Result<f64> {
    let (e_in, e_out) = net.edge_split();
    if e_in + e_out == 0 {
        return Err(Error::EdgelessGraph);
    }
    let (nb, nr) = (net.n_blue as f64, net.n_red as f64);
    let pairs_in = nb * (nb - 1.0) / 2.0 + nr * (nr - 1.0) / 2.0;
    let pairs_out = nb * nr;
    let density = |e: usize, pairs: f64| if pairs > 0.0 { e as f64 / pairs } else { 0.0 };
    let (d_in, d_out) = (density(e_in, pairs_in), density(e_out, pairs_out));
    Ok(d_in / (d_in + d_out))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines as `(line_number, fields)`.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            None
        } else {
            Some((i + 1, body.split_whitespace().collect()))
        }
    })
}

fn parse_id(path: &Path, line: usize, field: &str) -> Result<usize> {
    field
        .parse::<usize>()
        .map_err(|_| parse_err(path, line, format!("`{field}` is not a non-negative integer node id")))
}

/// Loads a network from an edge-list file (`u v` per line) and a party file
/// (`node_id label` per line, label `0` = blue, `1` = red). `#` starts a
/// comment. The party file must label every id in `0..N` exactly once.
pub fn load_network(edge_file: &Path, party_file: &Path) -> Result<Network> {
    let party_text = fs::read_to_string(party_file)?;
    let mut labels: Vec<Option<Party>> = Vec::new();
    for (line, fields) in data_lines(&party_text) {
        if fields.len() != 2 {
            return Err(parse_err(
                party_file,
                line,
                format!("expected `node_id label`, found {} fields", fields.len()),
            ));
        }
        let id = parse_id(party_file, line, fields[0])?;
        let party = match fields[1] {
            "0" => Party::Blue,
            "1" => Party::Red,
            other => {
                return Err(parse_err(party_file, line, format!("label `{other}` is not 0 or 1")))
            }
        };
        if id >= labels.len() {
            labels.resize(id + 1, None);
        }
        if labels[id].is_some() {
            return Err(parse_err(party_file, line, format!("node {id} labelled twice")));
        }
        labels[id] = Some(party);
    }
    let party: Vec<Party> = labels
        .iter()
        .enumerate()
        .map(|(node, p)| {
            p.ok_or_else(|| Error::MissingParty {
                path: party_file.to_path_buf(),
                node,
            })
        })
        .collect::<Result<_>>()?;
    let n = party.len();
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }

    let edge_text = fs::read_to_string(edge_file)?;
    let mut lists: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    for (line, fields) in data_lines(&edge_text) {
        if fields.len() != 2 {
            return Err(parse_err(
                edge_file,
                line,
                format!("expected `u v`, found {} fields", fields.len()),
            ));
        }
        let u = parse_id(edge_file, line, fields[0])?;
        let v = parse_id(edge_file, line, fields[1])?;
        for id in [u, v] {
            if id >= n {
                return Err(parse_err(
                    edge_file,
                    line,
                    format!("node {id} is not in the party file (ids 0..{n})"),
                ));
            }
        }
        if u == v {
            return Err(parse_err(edge_file, line, format!("self-loop on node {u}")));
        }
        lists[u].insert(v as u32);
        lists[v].insert(u as u32);
    }
    let lists = lists.into_iter().map(|s| s.into_iter().collect()).collect();
    Network::from_parts(party, Adjacency::Lists(lists))
}

/// Writes the network in the format read by [`load_network`].
pub fn save_network(net: &Network, edge_file: &Path, party_file: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(edge_file)?);
    writeln!(w, "# {} nodes, {} edges", net.len(), net.edge_count())?;
    for (u, v) in net.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;

    let mut w = BufWriter::new(fs::File::create(party_file)?);
    writeln!(w, "# node_id label (0 = blue, 1 = red)")?;
    for (v, p) in net.party.iter().enumerate() {
        writeln!(w, "{v} {}", p.index())?;
    }
    w.flush()?;
    Ok(())
}

/// Paths of the two files making up a saved network.
/// Group sizes for `n` nodes with red share `red_fraction`: `n_red` is
/// `red_fraction * n` rounded half-up, kept within `1..n` when `n >= 2`.
pub fn split_population(n: usize, red_fraction: f64) -> (usize, usize) {
    let n_red = ((red_fraction * n as f64) + 0.5).floor() as usize;
    let n_red = if n >= 2 { n_red.clamp(1, n - 1) } else { n_red.min(n) };
    (n - n_red, n_red)
}

/// Network matching the topology of `params`: the complete graph, or a
/// two-block model sampled with `seed`.
pub fn network_for(params: &crate::model::ModelParams, n: usize, seed: u64) -> Result<Network> {
    let (n_blue, n_red) = split_population(n, params.red_fraction());
    match params.topology() {
        crate::model::Topology::FullyConnected => generate_complete(n_blue, n_red),
        crate::model::Topology::StochasticBlock => generate_sbm(n_blue, n_red, params.homophily(), seed),
    }
}

pub fn network_paths(dir: &Path) -> (PathBuf, PathBuf) {
    (dir.join("edges.txt"), dir.join("parties.txt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_small() {
        let g = generate_complete(1, 1).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let g = generate_complete(2, 1).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!((0..3).map(|v| g.degree(v)).collect::<Vec<_>>(), vec![2, 2, 2]);
        assert_eq!(g.neighbors(1).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(g.party(2), Party::Red);

        assert!(matches!(generate_complete(1, 0), Err(Error::TooFewNodes(1))));
    }

    #[test]
    fn complete_edge_count() {
        let g = generate_complete(350, 650).unwrap();
        assert_eq!(g.edge_count(), 499_500);
        assert_eq!(g.edge_count(), 1000 * 999 / 2);
        let (i, c) = g.edge_split();
        assert_eq!(i + c, 499_500);
        assert_eq!(c, 350 * 650);
    }

    #[test]
    fn sbm_rejects_bad_rho() {
        for rho in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(generate_sbm(5, 5, rho, 1).is_err());
        }
    }

    #[test]
    fn sbm_is_deterministic_and_well_formed() {
        let a = generate_sbm(40, 60, 0.7, 9).unwrap();
        let b = generate_sbm(40, 60, 0.7, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        assert!(a.check_invariants());
        let c = generate_sbm(40, 60, 0.7, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn homophily_examples() {
        let g = generate_complete(10, 10).unwrap();
        assert!((homophily_estimate(&g).unwrap() - 0.5).abs() < 1e-15);

        let party = vec![Party::Blue, Party::Blue, Party::Red, Party::Red];
        let g = Network::from_edges(party.clone(), &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(homophily_estimate(&g).unwrap(), 1.0);

        let g = Network::from_edges(party, &[]).unwrap();
        assert!(matches!(homophily_estimate(&g), Err(Error::EdgelessGraph)));
    }

    #[test]
    fn from_edges_merges_and_rejects() {
        let party = vec![Party::Blue, Party::Red, Party::Red];
        let g = Network::from_edges(party.clone(), &[(0, 1), (1, 0), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.check_invariants());
        assert!(Network::from_edges(party.clone(), &[(1, 1)]).is_err());
        assert!(Network::from_edges(party, &[(0, 5)]).is_err());
    }

    #[test]
    fn complete_equals_explicit_complete() {
        let g = generate_complete(2, 2).unwrap();
        let edges: Vec<_> = g.edges().collect();
        let h = Network::from_edges(g.parties().to_vec(), &edges).unwrap();
        assert_eq!(g, h);
        assert!(!h.is_complete());
    }
}
