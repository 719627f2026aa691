//! Closure of site types reachable from the initiator.
//!
//! A site's future depends only on its four flanking symbols, so the set of
//! polymers a system can build factors over site types: each gap evolves
//! independently of every other gap. This graph is that factorization. Its
//! nodes are site types; each admissible monomer at a node is an edge to the
//! pair of sites it leaves behind.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::site::Site;
use super::system::{InsertionSystem, MonomerId};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub monomer: MonomerId,
    pub left: NodeId,
    pub right: NodeId,
}

#[derive(Clone, Debug)]
pub struct SiteGraph {
    sites: Vec<Site>,
    edges: Vec<Vec<Edge>>,
    index: FxHashMap<Site, NodeId>,
    truncated: bool,
}

impl SiteGraph {
    /// Breadth-first closure from the initiator site. Stops adding nodes
    /// once `max_nodes` is reached and marks the graph truncated.
    pub fn build(system: &InsertionSystem, max_nodes: usize) -> SiteGraph {
        Self::build_from(system, system.initiator().site(), max_nodes)
    }

    pub fn build_from(system: &InsertionSystem, root: Site, max_nodes: usize) -> SiteGraph {
        let mut g = SiteGraph {
            sites: vec![root],
            edges: vec![Vec::new()],
            index: FxHashMap::default(),
            truncated: false,
        };
        g.index.insert(root, 0);
        let mut next = 0;
        while next < g.sites.len() {
            let site = g.sites[next];
            let mut out = Vec::new();
            for &m in system.candidates(&site) {
                let (l, r) = site.split(system.monomer(m));
                let (Some(left), Some(right)) = (g.intern(l, max_nodes), g.intern(r, max_nodes))
                else {
                    g.truncated = true;
                    break;
                };
                out.push(Edge {
                    monomer: m,
                    left,
                    right,
                });
            }
            g.edges[next] = out;
            if g.truncated {
                break;
            }
            next += 1;
        }
        g
    }

    fn intern(&mut self, site: Site, max_nodes: usize) -> Option<NodeId> {
        if let Some(&id) = self.index.get(&site) {
            return Some(id);
        }
        if self.sites.len() >= max_nodes {
            return None;
        }
        let id = self.sites.len();
        self.sites.push(site);
        self.edges.push(Vec::new());
        self.index.insert(site, id);
        Some(id)
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn site(&self, id: NodeId) -> Site {
        self.sites[id]
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn edges(&self, id: NodeId) -> &[Edge] {
        &self.edges[id]
    }

    pub fn node(&self, site: &Site) -> Option<NodeId> {
        self.index.get(site).copied()
    }

    /// First node with more than one admissible monomer, in BFS order.
    pub fn first_branching(&self) -> Option<NodeId> {
        (0..self.len()).find(|&i| self.edges[i].len() > 1)
    }

    /// A cycle of site types, if any, as a node path that returns to its
    /// first element. A cycle means polymers of unbounded length.
    pub fn find_cycle(&self) -> Option<Vec<NodeId>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut mark = vec![Mark::New; self.len()];
        let mut parent = vec![usize::MAX; self.len()];
        for start in 0..self.len() {
            if mark[start] != Mark::New {
                continue;
            }
            // iterative DFS with explicit child cursor
            let mut stack: Vec<(NodeId, usize)> = vec![(start, 0)];
            mark[start] = Mark::Active;
            while let Some(&mut (node, ref mut cursor)) = stack.last_mut() {
                let children = self.children(node);
                if *cursor < children.len() {
                    let child = children[*cursor];
                    *cursor += 1;
                    match mark[child] {
                        Mark::New => {
                            mark[child] = Mark::Active;
                            parent[child] = node;
                            stack.push((child, 0));
                        }
                        Mark::Active => {
                            let mut back = vec![node];
                            let mut cur = node;
                            while cur != child {
                                cur = parent[cur];
                                back.push(cur);
                            }
                            back.reverse();
                            back.push(child);
                            return Some(back);
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[node] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }

    fn children(&self, node: NodeId) -> Vec<NodeId> {
        self.edges[node]
            .iter()
            .flat_map(|e| [e.left, e.right])
            .collect()
    }

    /// Nodes in an order where every node follows all of its children.
    /// Only meaningful for acyclic graphs.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::with_capacity(self.len());
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack: Vec<(NodeId, usize)> = vec![(start, 0)];
            while let Some(&mut (node, ref mut cursor)) = stack.last_mut() {
                let children = self.children(node);
                if *cursor < children.len() {
                    let child = children[*cursor];
                    *cursor += 1;
                    if !seen[child] {
                        seen[child] = true;
                        stack.push((child, 0));
                    }
                } else {
                    order.push(node);
                    stack.pop();
                }
            }
        }
        order
    }

    /// Monomers eventually inserted into each site type, assuming one
    /// candidate per node and no cycles. Unusable sites contribute zero.
    pub fn fill_sizes(&self) -> Vec<BigUint> {
        let mut size = vec![BigUint::zero(); self.len()];
        for node in self.post_order() {
            if let Some(e) = self.edges[node].first() {
                size[node] = BigUint::one() + &size[e.left] + &size[e.right];
            }
        }
        size
    }

    /// For deterministic graphs: the chain of the unique terminal polymer,
    /// or `None` when it would exceed `max_chain` monomers.
    pub fn unique_chain(&self, max_chain: usize) -> Option<Vec<MonomerId>> {
        let sizes = self.fill_sizes();
        if sizes[self.root()] > BigUint::from(max_chain) {
            return None;
        }
        let mut chain = Vec::new();
        // in-order walk: left subtree, monomer, right subtree
        enum Work {
            Visit(NodeId),
            Emit(MonomerId),
        }
        let mut stack = vec![Work::Visit(self.root())];
        while let Some(w) = stack.pop() {
            match w {
                Work::Emit(m) => chain.push(m),
                Work::Visit(n) => {
                    if let Some(e) = self.edges[n].first() {
                        stack.push(Work::Visit(e.right));
                        stack.push(Work::Emit(e.monomer));
                        stack.push(Work::Visit(e.left));
                    }
                }
            }
        }
        Some(chain)
    }

    /// Sites that admit at least one monomer.
    pub fn usable_count(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_empty()).count()
    }
}
