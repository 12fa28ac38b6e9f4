//! Nodal fibers of a semistable fibration: node types, the configuration
//! graph with its ω divisor, chains of stable components, and `e_y`.

use std::fmt;

use num_traits::{One, Zero};

use crate::admissible::GreenSystem;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphPoint, MetrizedGraph, RDivisor, VertexId};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    /// Geometric genus of the normalization.
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    /// Component indices; equal for a self-node.
    pub ends: (usize, usize),
    pub length: Rational,
}

impl Node {
    pub fn is_self_node(&self) -> bool {
        self.ends.0 == self.ends.1
    }
}

/// Components and nodes of a singular fiber.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiberConfiguration {
    components: Vec<Component>,
    nodes: Vec<Node>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeType {
    pub node: usize,
    pub index: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberWarning {
    /// The component's ω coefficient `2g - 2 + branches` is not positive.
    UnstableComponent { component: String, omega: i64 },
}

impl fmt::Display for FiberWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberWarning::UnstableComponent { component, omega } => write!(
                f,
                "component {component} is not stable (omega coefficient {omega})"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub genus: u64,
    pub delta: Vec<u64>,
    pub omega: RDivisor,
    pub is_chain: bool,
    pub e_solver: Rational,
    pub e_closed_form: Option<Rational>,
    pub warnings: Vec<FiberWarning>,
}

impl FiberConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_component(&mut self, name: impl Into<String>, genus: u32) -> usize {
        self.components.push(Component {
            name: name.into(),
            genus,
        });
        self.components.len() - 1
    }

    /// Adds a node of unit length.
    pub fn add_node(&mut self, name: impl Into<String>, a: usize, b: usize) -> usize {
        self.add_node_with_length(name, a, b, Rational::one())
    }

    pub fn add_node_with_length(
        &mut self,
        name: impl Into<String>,
        a: usize,
        b: usize,
        length: Rational,
    ) -> usize {
        self.nodes.push(Node {
            name: name.into(),
            ends: (a, b),
            length,
        });
        self.nodes.len() - 1
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Vertex per component, edge per node (a loop for a self-node).
    pub fn configuration_graph(&self) -> MetrizedGraph {
        let mut g = MetrizedGraph::with_vertices(self.components.len());
        for n in &self.nodes {
            g.add_edge(VertexId(n.ends.0), VertexId(n.ends.1), n.length.clone());
        }
        g
    }

    /// Arithmetic genus: component genera plus the first Betti number of the
    /// configuration graph.
    pub fn fiber_genus(&self) -> Result<u64> {
        let g = self.configuration_graph();
        g.validate()?;
        let genus = self.genus_sum() + g.first_betti() as u64;
        if genus < 2 {
            return Err(Error::GenusTooSmall(genus));
        }
        Ok(genus)
    }

    fn genus_sum(&self) -> u64 {
        self.components.iter().map(|c| c.genus as u64).sum()
    }

    /// Type 0 if removing the node keeps the fiber connected, otherwise the
    /// smaller arithmetic genus of the two pieces.
    pub fn classify_node(&self, node: usize) -> Result<NodeType> {
        if node >= self.nodes.len() {
            return Err(Error::NodeNotFound(node));
        }
        let genus = self.fiber_genus()?;
        let graph = self.configuration_graph();
        let labels = graph.component_labels(Some(EdgeId(node)));
        let (a, b) = self.nodes[node].ends;
        if labels[a] == labels[b] {
            return Ok(NodeType { node, index: 0 });
        }
        let side = labels[a];
        let vertices = labels.iter().filter(|&&l| l == side).count() as u64;
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(i, n)| *i != node && labels[n.ends.0] == side)
            .count() as u64;
        let genera: u64 = self
            .components
            .iter()
            .enumerate()
            .filter(|(i, _)| labels[*i] == side)
            .map(|(_, c)| c.genus as u64)
            .sum();
        let side_genus = genera + edges + 1 - vertices;
        Ok(NodeType {
            node,
            index: side_genus.min(genus - side_genus),
        })
    }

    /// Counts of nodes of each type `0..=g/2`.
    pub fn delta_vector(&self) -> Result<Vec<u64>> {
        let genus = self.fiber_genus()?;
        let mut delta = vec![0; genus as usize / 2 + 1];
        for i in 0..self.nodes.len() {
            delta[self.classify_node(i)?.index as usize] += 1;
        }
        Ok(delta)
    }

    /// Adjunction coefficient `2 g̃ - 2 + branches` per component; a
    /// self-node contributes two branches.
    pub fn omega_coefficients(&self) -> Vec<i64> {
        let mut coeffs: Vec<i64> = self
            .components
            .iter()
            .map(|c| 2 * c.genus as i64 - 2)
            .collect();
        for n in &self.nodes {
            coeffs[n.ends.0] += 1;
            coeffs[n.ends.1] += 1;
        }
        coeffs
    }

    pub fn omega_divisor(&self) -> RDivisor {
        let mut d = RDivisor::new();
        for (i, c) in self.omega_coefficients().into_iter().enumerate() {
            d.add(GraphPoint::Vertex(VertexId(i)), int(c));
        }
        d
    }

    pub fn stability_warnings(&self) -> Vec<FiberWarning> {
        self.omega_coefficients()
            .into_iter()
            .zip(&self.components)
            .filter(|(w, _)| *w <= 0)
            .map(|(omega, c)| FiberWarning::UnstableComponent {
                component: c.name.clone(),
                omega,
            })
            .collect()
    }

    /// With self-nodes removed, the configuration graph is a simple path
    /// (a single component counts).
    pub fn is_chain_of_stable_components(&self) -> bool {
        let n = self.components.len();
        let links: Vec<&Node> = self.nodes.iter().filter(|n| !n.is_self_node()).collect();
        if n == 0 || links.len() + 1 != n {
            return false;
        }
        let mut degree = vec![0usize; n];
        let mut stripped = MetrizedGraph::with_vertices(n);
        for l in &links {
            degree[l.ends.0] += 1;
            degree[l.ends.1] += 1;
            stripped.add_edge(VertexId(l.ends.0), VertexId(l.ends.1), Rational::one());
        }
        degree.iter().all(|&d| d <= 2) && stripped.components_without(None) == 1
    }

    /// `e_y = e(G_y, ω_y)` from the general Green solver.
    pub fn fiber_e(&self) -> Result<Rational> {
        self.fiber_genus()?;
        GreenSystem::new(&self.configuration_graph(), &self.omega_divisor())?.e_invariant()
    }

    /// Closed form for chains: each self-node contributes `(g-1)/(3g)` and a
    /// node splitting off genus `i` contributes `4i(g-i)/g - 1`, both times
    /// the node's length. For chains of stable components with unit lengths
    /// this is `(g-1)/(3g) δ_0 + Σ (4i(g-i)/g - 1) δ_i`.
    pub fn fiber_e_closed_form(&self) -> Result<Rational> {
        if !self.is_chain_of_stable_components() {
            return Err(Error::NotAChain);
        }
        let genus = self.fiber_genus()?;
        let g = int(genus as i64);
        let mut total = Rational::zero();
        for (idx, node) in self.nodes.iter().enumerate() {
            let weight = if node.is_self_node() {
                (&g - int(1)) / (int(3) * &g)
            } else {
                let i = int(self.classify_node(idx)?.index as i64);
                int(4) * &i * (&g - &i) / &g - int(1)
            };
            total += weight * &node.length;
        }
        Ok(total)
    }

    pub fn analyze(&self) -> Result<FiberReport> {
        let genus = self.fiber_genus()?;
        let is_chain = self.is_chain_of_stable_components();
        Ok(FiberReport {
            genus,
            delta: self.delta_vector()?,
            omega: self.omega_divisor(),
            is_chain,
            e_solver: self.fiber_e()?,
            e_closed_form: if is_chain {
                Some(self.fiber_e_closed_form()?)
            } else {
                None
            },
            warnings: self.stability_warnings(),
        })
    }
}
