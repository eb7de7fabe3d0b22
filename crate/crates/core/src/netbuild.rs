//! Binary, undirected word-adjacency networks grown token by token.
//!
//! Each consecutive token pair adds an undirected edge unless the edge
//! already exists or both tokens are identical. Because every token links
//! to its predecessor the network is connected at every stage.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::tokenizer::TokenStream;

pub type NodeId = u32;

const UNSEEN: NodeId = NodeId::MAX;

/// Bijection between token surfaces and dense ids in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interner {
    ids: HashMap<String, u32>,
    surfaces: Vec<String>,
}

impl Interner {
    pub fn intern(&mut self, surface: &str) -> u32 {
        if let Some(&id) = self.ids.get(surface) {
            return id;
        }
        let id = self.surfaces.len() as u32;
        self.ids.insert(surface.to_string(), id);
        self.surfaces.push(surface.to_string());
        id
    }

    pub fn get(&self, surface: &str) -> Option<u32> {
        self.ids.get(surface).copied()
    }

    pub fn surface(&self, id: u32) -> &str {
        &self.surfaces[id as usize]
    }

    pub fn len(&self) -> usize {
        self.surfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surfaces.is_empty()
    }
}

/// A token stream interned once, so repeated growths from different
/// offsets work on integers.
#[derive(Debug, Clone, Default)]
pub struct SymbolStream {
    symbols: Vec<u32>,
    interner: Interner,
}

impl SymbolStream {
    pub fn new(stream: &TokenStream) -> Self {
        let mut interner = Interner::default();
        let symbols = stream.surfaces().map(|s| interner.intern(s)).collect();
        Self { symbols, interner }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn interner(&self) -> &Interner {
        &self.interner
    }

    pub fn total_len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of distinct tokens; every start offset reaches all of them
    /// within one cycle.
    pub fn vocabulary_size(&self) -> usize {
        self.interner.len()
    }
}

impl From<&TokenStream> for SymbolStream {
    fn from(stream: &TokenStream) -> Self {
        Self::new(stream)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdjacencyNetwork {
    adjacency: Vec<Vec<NodeId>>,
    n_edges: usize,
    last_active: Option<NodeId>,
    tokens_consumed: usize,
    /// Stream symbol of each node, for text-grown networks.
    symbols: Vec<u32>,
}

impl AdjacencyNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a simple graph from an edge list; self-loops and repeated
    /// edges are ignored.
    pub fn from_edges(n_nodes: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut net = Self::new();
        for _ in 0..n_nodes {
            net.add_node();
        }
        for &(u, v) in edges {
            net.add_edge(u, v);
        }
        net.tokens_consumed = n_nodes;
        net
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn last_active(&self) -> Option<NodeId> {
        self.last_active
    }

    pub fn tokens_consumed(&self) -> usize {
        self.tokens_consumed
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node as usize]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node as usize].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn symbol(&self, node: NodeId) -> Option<u32> {
        self.symbols.get(node as usize).copied()
    }

    pub fn add_node(&mut self) -> NodeId {
        self.adjacency.push(Vec::new());
        (self.adjacency.len() - 1) as NodeId
    }

    /// Inserts the undirected edge; returns false for self-loops and
    /// existing edges.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        if u == v {
            return false;
        }
        let pos = match self.adjacency[u as usize].binary_search(&v) {
            Ok(_) => return false,
            Err(p) => p,
        };
        self.adjacency[u as usize].insert(pos, v);
        let list = &mut self.adjacency[v as usize];
        let pos = list.binary_search(&u).unwrap_err();
        list.insert(pos, u);
        self.n_edges += 1;
        true
    }

    pub(crate) fn set_last_active(&mut self, node: NodeId) {
        self.last_active = Some(node);
    }

    pub(crate) fn set_tokens_consumed(&mut self, tau: usize) {
        self.tokens_consumed = tau;
    }

    /// Edges as (u, v) with u < v, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            list.iter().filter(move |&&v| u < v).map(move |&v| (u, v))
        })
    }

    /// Number of nodes reachable from node 0.
    pub fn reach_count(&self) -> usize {
        let n = self.n_nodes();
        if n == 0 {
            return 0;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0 as NodeId];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.reach_count() == self.n_nodes()
    }

    /// Writes `id_u id_v` per line.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    /// Writes the `id<TAB>surface` sidecar for an edge list.
    pub fn write_node_table<W: Write>(&self, interner: &Interner, mut out: W) -> io::Result<()> {
        for (id, &sym) in self.symbols.iter().enumerate() {
            writeln!(out, "{id}\t{}", interner.surface(sym))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthKind {
    NewNode,
    NewEdge,
    /// The pair was already linked, or both tokens were identical.
    Repeat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthEvent {
    pub kind: GrowthKind,
    /// Node of the token just consumed.
    pub node: NodeId,
    /// Tokens consumed so far, this one included.
    pub tau: usize,
}

/// Incremental growth from a cyclic start offset. The first token is
/// consumed on construction; each [`Grower::step`] consumes one more.
#[derive(Debug, Clone)]
pub struct Grower<'a> {
    stream: &'a SymbolStream,
    net: AdjacencyNetwork,
    local: Vec<NodeId>,
    start: usize,
    budget: usize,
}

impl<'a> Grower<'a> {
    /// `limit` is the total token budget, first token included; `None`
    /// means one full pass without wrapping.
    pub fn new(stream: &'a SymbolStream, start: usize, limit: Option<usize>) -> Self {
        let len = stream.total_len();
        let start = if len == 0 { 0 } else { start % len };
        let mut grower = Self {
            stream,
            net: AdjacencyNetwork::new(),
            local: vec![UNSEEN; stream.vocabulary_size()],
            start,
            budget: limit.unwrap_or(len),
        };
        if len > 0 && grower.budget > 0 {
            let sym = stream.symbols[start];
            let node = grower.net.add_node();
            grower.net.symbols.push(sym);
            grower.local[sym as usize] = node;
            grower.net.set_last_active(node);
            grower.net.set_tokens_consumed(1);
        }
        grower
    }

    pub fn network(&self) -> &AdjacencyNetwork {
        &self.net
    }

    pub fn into_network(self) -> AdjacencyNetwork {
        self.net
    }

    pub fn step(&mut self) -> Option<GrowthEvent> {
        let tau = self.net.tokens_consumed;
        if tau == 0 || tau >= self.budget {
            return None;
        }
        let symbols = &self.stream.symbols;
        let sym = symbols[(self.start + tau) % symbols.len()];
        let prev = self.net.last_active.expect("non-empty growth has an active node");
        let mut node = self.local[sym as usize];
        let kind = if node == UNSEEN {
            node = self.net.add_node();
            self.net.symbols.push(sym);
            self.local[sym as usize] = node;
            self.net.add_edge(prev, node);
            GrowthKind::NewNode
        } else if self.net.add_edge(prev, node) {
            GrowthKind::NewEdge
        } else {
            GrowthKind::Repeat
        };
        self.net.set_last_active(node);
        self.net.set_tokens_consumed(tau + 1);
        Some(GrowthEvent {
            kind,
            node,
            tau: tau + 1,
        })
    }

    /// Steps until the network has `target` nodes or the budget runs out.
    /// Returns whether the target was reached.
    pub fn advance_to_nodes(&mut self, target: usize) -> bool {
        while self.net.n_nodes() < target {
            if self.step().is_none() {
                return false;
            }
        }
        self.net.n_nodes() >= target
    }
}

impl Iterator for Grower<'_> {
    type Item = GrowthEvent;

    fn next(&mut self) -> Option<GrowthEvent> {
        self.step()
    }
}

pub fn grow(stream: &SymbolStream, start: usize, limit: Option<usize>) -> Grower<'_> {
    Grower::new(stream, start, limit)
}

/// Network state at the first moment it holds `target_n` nodes, including
/// the edge formed by the token that introduced the last node.
pub fn snapshot_at_nodes(
    stream: &SymbolStream,
    start: usize,
    target_n: usize,
) -> Result<AdjacencyNetwork> {
    let available = stream.vocabulary_size();
    if target_n == 0 || target_n > available {
        return Err(Error::VocabularyExhausted {
            requested: target_n,
            available,
        });
    }
    let mut grower = Grower::new(stream, start, None);
    grower.advance_to_nodes(target_n);
    Ok(grower.into_network())
}

/// Network after one full pass over the stream from its first token.
pub fn full_network(stream: &SymbolStream) -> AdjacencyNetwork {
    let mut grower = Grower::new(stream, 0, None);
    while grower.step().is_some() {}
    grower.into_network()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(text: &str) -> SymbolStream {
        SymbolStream::new(&TokenStream::from_words(text))
    }

    fn edge_set(net: &AdjacencyNetwork) -> Vec<(NodeId, NodeId)> {
        net.edges().collect()
    }

    #[test]
    fn repeat_pair() {
        let s = sym("a b a");
        let net = full_network(&s);
        assert_eq!((net.n_nodes(), net.n_edges()), (2, 1));
        let kinds: Vec<_> = grow(&s, 0, None).map(|e| e.kind).collect();
        assert_eq!(kinds, vec![GrowthKind::NewNode, GrowthKind::Repeat]);
    }

    #[test]
    fn chain_phase_is_path() {
        let net = full_network(&sym("a b c"));
        assert_eq!(edge_set(&net), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn self_pair_skipped() {
        let net = full_network(&sym("a a b"));
        assert_eq!((net.n_nodes(), net.n_edges()), (2, 1));
    }

    #[test]
    fn triangle() {
        let net = full_network(&sym("a b c a"));
        assert_eq!((net.n_nodes(), net.n_edges()), (3, 3));
        assert_eq!(net.last_active(), Some(0));
        assert_eq!(net.tokens_consumed(), 4);
    }

    #[test]
    fn single_token() {
        let net = full_network(&sym("a"));
        assert_eq!((net.n_nodes(), net.n_edges()), (1, 0));
    }

    #[test]
    fn empty_stream_is_trivial() {
        let s = SymbolStream::default();
        let net = full_network(&s);
        assert_eq!(net.n_nodes(), 0);
    }

    #[test]
    fn snapshot_includes_introducing_edge() {
        let s = sym("a b c a c");
        let net = snapshot_at_nodes(&s, 0, 3).unwrap();
        assert_eq!(edge_set(&net), vec![(0, 1), (1, 2)]);
        assert_eq!(net.tokens_consumed(), 3);
        let one = snapshot_at_nodes(&s, 0, 1).unwrap();
        assert_eq!((one.n_nodes(), one.n_edges()), (1, 0));
        assert!(matches!(
            snapshot_at_nodes(&s, 0, 4),
            Err(Error::VocabularyExhausted { requested: 4, available: 3 })
        ));
    }

    #[test]
    fn wrap_joins_last_to_first_only_when_growth_wraps() {
        let s = sym("a b c");
        assert_eq!(full_network(&s).n_edges(), 2);
        let mut g = grow(&s, 0, Some(4));
        while g.step().is_some() {}
        assert_eq!(g.network().n_edges(), 3);
        // Starting at c wraps into a, b.
        let mut g = grow(&s, 2, None);
        while g.step().is_some() {}
        let labels: Vec<_> = (0..3).map(|n| s.interner().surface(g.network().symbol(n).unwrap())).collect();
        assert_eq!(labels, vec!["c", "a", "b"]);
        assert_eq!(g.network().n_edges(), 2);
    }

    #[test]
    fn node_table_and_edges_export() {
        let s = sym("x y z x");
        let net = full_network(&s);
        let mut edges = Vec::new();
        net.write_edge_list(&mut edges).unwrap();
        assert_eq!(String::from_utf8(edges).unwrap(), "0 1\n0 2\n1 2\n");
        let mut table = Vec::new();
        net.write_node_table(s.interner(), &mut table).unwrap();
        assert_eq!(String::from_utf8(table).unwrap(), "0\tx\n1\ty\n2\tz\n");
    }
}
