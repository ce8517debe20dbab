//! Finite multidigraphs, partitions (clusterings) and posets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// A finite multidigraph with string identifiers.
///
/// Node and edge order is insertion order and is preserved by every
/// operation, which keeps exports and reports deterministic.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct DiGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    node_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

impl TryFrom<GraphJson> for DiGraph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Self> {
        DiGraph::new(g.nodes, g.edges)
    }
}

impl From<DiGraph> for GraphJson {
    fn from(g: DiGraph) -> Self {
        GraphJson { nodes: g.nodes, edges: g.edges }
    }
}

impl PartialEq for DiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for DiGraph {}

impl Hash for DiGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.nodes.hash(state);
        self.edges.hash(state);
    }
}

impl DiGraph {
    pub fn new(nodes: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut g = DiGraph::default();
        for n in nodes {
            g.add_node(n)?;
        }
        for e in edges {
            g.add_edge(e.id, e.src, e.dst)?;
        }
        Ok(g)
    }

    /// Convenience constructor from string slices; edges are `(id, src, dst)`.
    pub fn from_parts(nodes: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        DiGraph::new(
            nodes.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(id, s, d)| Edge { id: id.to_string(), src: s.to_string(), dst: d.to_string() })
                .collect(),
        )
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.node_index.contains_key(&name) {
            return Err(Error::invalid(format!("duplicate node `{name}`")));
        }
        self.node_index.insert(name.clone(), self.nodes.len());
        self.nodes.push(name);
        Ok(self.nodes.len() - 1)
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        dst: impl Into<String>,
    ) -> Result<usize> {
        let (id, src, dst) = (id.into(), src.into(), dst.into());
        if self.edge_index.contains_key(&id) {
            return Err(Error::invalid(format!("duplicate edge `{id}`")));
        }
        for end in [&src, &dst] {
            if !self.node_index.contains_key(end) {
                return Err(Error::invalid(format!("edge `{id}` refers to unknown node `{end}`")));
            }
        }
        self.edge_index.insert(id.clone(), self.edges.len());
        self.edges.push(Edge { id, src, dst });
        Ok(self.edges.len() - 1)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_node(&self, n: &str) -> bool {
        self.node_index.contains_key(n)
    }

    pub fn node_pos(&self, n: &str) -> Option<usize> {
        self.node_index.get(n).copied()
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i])
    }

    pub fn out_edges<'a>(&'a self, n: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.src == n)
    }

    /// True when the graph has no directed cycle (self-loops count as cycles).
    pub fn is_acyclic(&self) -> bool {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[self.node_index[&e.dst]] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = stack.pop() {
            seen += 1;
            for e in self.out_edges(&self.nodes[i]) {
                let j = self.node_index[&e.dst];
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
        seen == n
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {} {{\n", dot_id(name));
        for n in &self.nodes {
            out.push_str(&format!("  {};\n", dot_id(n)));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  {} -> {} [label={}];\n",
                dot_id(&e.src),
                dot_id(&e.dst),
                dot_id(&e.id)
            ));
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Node and edge assignment between two graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphHom {
    pub nodes: BTreeMap<String, String>,
    pub edges: BTreeMap<String, String>,
}

impl GraphHom {
    pub fn identity(g: &DiGraph) -> Self {
        GraphHom {
            nodes: g.nodes().iter().map(|n| (n.clone(), n.clone())).collect(),
            edges: g.edges().iter().map(|e| (e.id.clone(), e.id.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomViolation {
    pub edge: String,
    pub detail: String,
}

/// Checks that `m` sends every edge `e: a -> b` of `g` to an edge
/// `m(e): m(a) -> m(b)` of `h`. Returns the list of violating edges.
///
/// A map that is not total on `g` is an error listing the missing keys.
pub fn check_graph_hom(m: &GraphHom, g: &DiGraph, h: &DiGraph) -> Result<Vec<HomViolation>> {
    let mut missing: Vec<String> = g
        .nodes()
        .iter()
        .filter(|n| !m.nodes.contains_key(*n))
        .map(|n| format!("node {n}"))
        .collect();
    missing.extend(
        g.edges().iter().filter(|e| !m.edges.contains_key(&e.id)).map(|e| format!("edge {}", e.id)),
    );
    if !missing.is_empty() {
        return Err(Error::NotTotal { missing });
    }
    let mut violations = Vec::new();
    for n in g.nodes() {
        if !h.has_node(&m.nodes[n]) {
            violations.push(HomViolation {
                edge: String::new(),
                detail: format!("node {n} mapped to unknown node {}", m.nodes[n]),
            });
        }
    }
    for e in g.edges() {
        let image = &m.edges[&e.id];
        let Some(te) = h.edge(image) else {
            violations.push(HomViolation {
                edge: e.id.clone(),
                detail: format!("mapped to unknown edge {image}"),
            });
            continue;
        };
        let (ms, md) = (&m.nodes[&e.src], &m.nodes[&e.dst]);
        if &te.src != ms || &te.dst != md {
            violations.push(HomViolation {
                edge: e.id.clone(),
                detail: format!("{}: {ms}->{md} expected, {image}: {}->{} found", e.id, te.src, te.dst),
            });
        }
    }
    Ok(violations)
}

/// A partition of a finite carrier into nonempty blocks.
///
/// Blocks are stored canonically: members sorted, blocks ordered by their
/// least member. A block's name is its least member unless explicit labels
/// were supplied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionJson", into = "PartitionJson")]
pub struct EquivRelation {
    carrier: BTreeSet<String>,
    blocks: Vec<Vec<String>>,
    labels: Vec<String>,
    class_of: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    blocks: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<PartitionJson> for EquivRelation {
    type Error = Error;
    fn try_from(p: PartitionJson) -> Result<Self> {
        match p.labels {
            Some(l) => EquivRelation::labeled(p.blocks.into_iter().zip(l).map(|(b, l)| (l, b)).collect()),
            None => EquivRelation::from_blocks(p.blocks),
        }
    }
}

impl From<EquivRelation> for PartitionJson {
    fn from(r: EquivRelation) -> Self {
        let default = r.blocks.iter().map(|b| b[0].clone()).collect::<Vec<_>>();
        let labels = (default != r.labels).then_some(r.labels);
        PartitionJson { blocks: r.blocks, labels }
    }
}

impl EquivRelation {
    pub fn from_blocks(blocks: Vec<Vec<String>>) -> Result<Self> {
        let labels = blocks
            .iter()
            .map(|b| b.iter().min().cloned().ok_or_else(|| Error::invalid("empty block")))
            .collect::<Result<Vec<_>>>()?;
        Self::build(blocks.into_iter().zip(labels).map(|(b, l)| (l, b)).collect())
    }

    /// Blocks with explicit names, e.g. `("apples", [GalaApple, Honeycrisp])`.
    pub fn labeled(blocks: Vec<(String, Vec<String>)>) -> Result<Self> {
        Self::build(blocks)
    }

    fn build(blocks: Vec<(String, Vec<String>)>) -> Result<Self> {
        let mut named: Vec<(String, Vec<String>)> = Vec::with_capacity(blocks.len());
        let mut carrier = BTreeSet::new();
        for (label, mut b) in blocks {
            if b.is_empty() {
                return Err(Error::invalid("empty block"));
            }
            b.sort();
            for x in &b {
                if !carrier.insert(x.clone()) {
                    return Err(Error::invalid(format!("element `{x}` occurs in two blocks")));
                }
            }
            named.push((label, b));
        }
        named.sort_by(|a, b| a.1[0].cmp(&b.1[0]));
        let mut seen = BTreeSet::new();
        for (l, _) in &named {
            if !seen.insert(l.clone()) {
                return Err(Error::invalid(format!("duplicate block label `{l}`")));
            }
        }
        let mut class_of = BTreeMap::new();
        for (i, (_, b)) in named.iter().enumerate() {
            for x in b {
                class_of.insert(x.clone(), i);
            }
        }
        let (labels, blocks) = named.into_iter().unzip();
        Ok(EquivRelation { carrier, blocks, labels, class_of })
    }

    pub fn discrete<S: AsRef<str>>(carrier: &[S]) -> Self {
        Self::from_blocks(carrier.iter().map(|x| vec![x.as_ref().to_string()]).collect())
            .expect("singleton blocks of distinct elements")
    }

    pub fn indiscrete<S: AsRef<str>>(carrier: &[S], label: Option<&str>) -> Result<Self> {
        let block: Vec<String> = carrier.iter().map(|x| x.as_ref().to_string()).collect();
        if block.is_empty() {
            return Self::from_blocks(vec![]);
        }
        match label {
            Some(l) => Self::labeled(vec![(l.to_string(), block)]),
            None => Self::from_blocks(vec![block]),
        }
    }

    /// The partition induced by a key function ("same month", "same table").
    pub fn by_key<S: AsRef<str>, K: Ord>(carrier: &[S], key: impl Fn(&str) -> K) -> Self {
        let mut groups: BTreeMap<K, Vec<String>> = BTreeMap::new();
        for x in carrier {
            groups.entry(key(x.as_ref())).or_default().push(x.as_ref().to_string());
        }
        Self::from_blocks(groups.into_values().collect()).expect("groups partition the carrier")
    }

    /// The least equivalence on `carrier` containing `pairs`.
    pub fn generated_by<S: AsRef<str>>(carrier: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = carrier.iter().map(|x| x.as_ref().to_string()).collect();
        let pos: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut uf = UnionFind::new(names.len());
        for (a, b) in pairs {
            let ia = *pos.get(a.as_ref()).ok_or_else(|| Error::unknown("element", a.as_ref()))?;
            let ib = *pos.get(b.as_ref()).ok_or_else(|| Error::unknown("element", b.as_ref()))?;
            uf.union(ia, ib);
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(n.clone());
        }
        Self::from_blocks(groups.into_values().collect())
    }

    pub fn carrier(&self) -> &BTreeSet<String> {
        &self.carrier
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn block_index(&self, x: &str) -> Option<usize> {
        self.class_of.get(x).copied()
    }

    /// Name of the block containing `x`.
    pub fn class_name(&self, x: &str) -> Option<&str> {
        self.block_index(x).map(|i| self.labels[i].as_str())
    }

    pub fn related(&self, a: &str, b: &str) -> bool {
        matches!((self.block_index(a), self.block_index(b)), (Some(i), Some(j)) if i == j)
    }

    pub fn require_carrier<'a>(&self, expected: impl IntoIterator<Item = &'a String>) -> Result<()> {
        let expected: BTreeSet<String> = expected.into_iter().cloned().collect();
        if expected != self.carrier {
            let extra: Vec<_> = self.carrier.difference(&expected).cloned().collect();
            let missing: Vec<_> = expected.difference(&self.carrier).cloned().collect();
            return Err(Error::CarrierMismatch(format!("extra {extra:?}, missing {missing:?}")));
        }
        Ok(())
    }
}

/// `rho <= sigma`: every block of `rho` lies inside a block of `sigma`.
pub fn equiv_refines(rho: &EquivRelation, sigma: &EquivRelation) -> Result<bool> {
    rho.require_carrier(sigma.carrier())?;
    Ok(rho
        .blocks()
        .iter()
        .all(|b| b.iter().all(|x| sigma.related(x, &b[0]))))
}

/// Quotient of `g` by a partition of its nodes, with the canonical graph map.
///
/// Parallel edges are kept (one edge per original edge, same id) unless
/// `collapse_parallel` is set, in which case edges with equal endpoint
/// blocks merge into the one with the least id.
pub fn quotient_graph(
    g: &DiGraph,
    rho: &EquivRelation,
    collapse_parallel: bool,
) -> Result<(DiGraph, GraphHom)> {
    rho.require_carrier(g.nodes())?;
    let mut q = DiGraph::default();
    for l in rho.labels() {
        q.add_node(l.clone())?;
    }
    let mut hom = GraphHom::default();
    for n in g.nodes() {
        hom.nodes.insert(n.clone(), rho.class_name(n).unwrap().to_string());
    }
    if collapse_parallel {
        let mut reps: BTreeMap<(String, String), String> = BTreeMap::new();
        for e in g.edges() {
            let key = (hom.nodes[&e.src].clone(), hom.nodes[&e.dst].clone());
            let rep = reps.entry(key).or_insert_with(|| e.id.clone());
            if e.id < *rep {
                *rep = e.id.clone();
            }
        }
        for e in g.edges() {
            let key = (hom.nodes[&e.src].clone(), hom.nodes[&e.dst].clone());
            let rep = reps[&key].clone();
            if rep == e.id {
                q.add_edge(rep.clone(), key.0, key.1)?;
            }
            hom.edges.insert(e.id.clone(), rep);
        }
    } else {
        for e in g.edges() {
            q.add_edge(e.id.clone(), hom.nodes[&e.src].clone(), hom.nodes[&e.dst].clone())?;
            hom.edges.insert(e.id.clone(), e.id.clone());
        }
    }
    Ok((q, hom))
}

/// A finite partial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    pub carrier: Vec<String>,
    pub leq: BTreeSet<(String, String)>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `covers` and validates it.
    pub fn from_covers<S: AsRef<str>>(carrier: &[S], covers: &[(S, S)]) -> Result<Self> {
        let carrier: Vec<String> = carrier.iter().map(|s| s.as_ref().to_string()).collect();
        let mut leq: BTreeSet<(String, String)> =
            carrier.iter().map(|x| (x.clone(), x.clone())).collect();
        leq.extend(covers.iter().map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string())));
        loop {
            let mut added = Vec::new();
            for (a, b) in &leq {
                for (c, d) in leq.range((b.clone(), String::new())..) {
                    if c != b {
                        break;
                    }
                    if !leq.contains(&(a.clone(), d.clone())) {
                        added.push((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            leq.extend(added);
        }
        let p = Poset { carrier, leq };
        p.validate()?;
        Ok(p)
    }

    /// A finite chain of numeric values ordered by `<=`.
    pub fn numeric_chain(values: &[f64]) -> Self {
        let mut vs: Vec<f64> = values.to_vec();
        vs.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        vs.dedup();
        let carrier: Vec<String> = vs.iter().map(|v| format_value(*v)).collect();
        let mut leq = BTreeSet::new();
        for i in 0..vs.len() {
            for j in i..vs.len() {
                leq.insert((carrier[i].clone(), carrier[j].clone()));
            }
        }
        Poset { carrier, leq }
    }

    pub fn le(&self, a: &str, b: &str) -> bool {
        self.leq.contains(&(a.to_string(), b.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let set: BTreeSet<&String> = self.carrier.iter().collect();
        if set.len() != self.carrier.len() {
            return Err(Error::InvalidPoset("duplicate element".into()));
        }
        for (a, b) in &self.leq {
            if !set.contains(a) || !set.contains(b) {
                return Err(Error::InvalidPoset(format!("pair ({a},{b}) outside the carrier")));
            }
        }
        for x in &self.carrier {
            if !self.le(x, x) {
                return Err(Error::InvalidPoset(format!("not reflexive at {x}")));
            }
        }
        for (a, b) in &self.leq {
            if a != b && self.le(b, a) {
                return Err(Error::InvalidPoset(format!("not antisymmetric: {a} <= {b} <= {a}")));
            }
            for c in &self.carrier {
                if self.le(b, c) && !self.le(a, c) {
                    return Err(Error::InvalidPoset(format!("not transitive: {a} <= {b} <= {c}")));
                }
            }
        }
        Ok(())
    }
}

/// Canonical text form of a numeric value: integers print without a
/// fractional part.
pub fn format_value(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// One node per element and one edge `a<=b` per related pair, loops included.
pub fn poset_to_digraph(p: &Poset) -> Result<DiGraph> {
    p.validate()?;
    let mut g = DiGraph::default();
    for x in &p.carrier {
        g.add_node(x.clone())?;
    }
    for a in &p.carrier {
        for b in &p.carrier {
            if p.le(a, b) {
                g.add_edge(format!("{a}<={b}"), a.clone(), b.clone())?;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; the smaller root wins so roots are deterministic.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn w1() -> DiGraph {
        DiGraph::from_parts(
            &["I", "love", "eat", "like", "apples"],
            &[
                ("(I,love)", "I", "love"),
                ("(I,eat)", "I", "eat"),
                ("(I,like)", "I", "like"),
                ("(love,apples)", "love", "apples"),
                ("(eat,apples)", "eat", "apples"),
                ("(like,apples)", "like", "apples"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_hom_passes() {
        let g = w1();
        assert!(check_graph_hom(&GraphHom::identity(&g), &g, &g).unwrap().is_empty());
    }

    #[test]
    fn collapse_to_one_loop() {
        let g = w1();
        let h = DiGraph::from_parts(&["*"], &[("loop", "*", "*")]).unwrap();
        let m = GraphHom {
            nodes: g.nodes().iter().map(|n| (n.clone(), "*".to_string())).collect(),
            edges: g.edges().iter().map(|e| (e.id.clone(), "loop".to_string())).collect(),
        };
        // every one of the six edges lands on the loop, whose ends are both `*`
        assert!(check_graph_hom(&m, &g, &h).unwrap().is_empty());
    }

    #[test]
    fn reversed_edge_is_one_violation() {
        let g = w1();
        let mut flipped = DiGraph::default();
        for n in g.nodes() {
            flipped.add_node(n.clone()).unwrap();
        }
        for e in g.edges() {
            if e.id == "(I,love)" {
                flipped.add_edge("(love,I)", "love", "I").unwrap();
            } else {
                flipped.add_edge(e.id.clone(), e.src.clone(), e.dst.clone()).unwrap();
            }
        }
        let mut m = GraphHom::identity(&g);
        m.edges.insert("(I,love)".into(), "(love,I)".into());
        let v = check_graph_hom(&m, &g, &flipped).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].edge, "(I,love)");
    }

    #[test]
    fn partial_map_reports_missing_keys() {
        let g = w1();
        let mut m = GraphHom::identity(&g);
        m.nodes.remove("eat");
        m.edges.remove("(eat,apples)");
        match check_graph_hom(&m, &g, &g) {
            Err(Error::NotTotal { missing }) => {
                assert_eq!(missing, vec!["node eat".to_string(), "edge (eat,apples)".to_string()])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn fruit_graph() -> DiGraph {
        DiGraph::from_parts(
            &["I", "love", "GalaApple", "Honeycrisp", "SmithApple", "Plantain", "RedBanana"],
            &[
                ("I-love", "I", "love"),
                ("love-GalaApple", "love", "GalaApple"),
                ("love-Honeycrisp", "love", "Honeycrisp"),
                ("love-SmithApple", "love", "SmithApple"),
                ("love-Plantain", "love", "Plantain"),
                ("love-RedBanana", "love", "RedBanana"),
            ],
        )
        .unwrap()
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn fruit_rollups() {
        let g = fruit_graph();
        let rho1 = EquivRelation::labeled(vec![
            ("I".into(), s(&["I"])),
            ("love".into(), s(&["love"])),
            ("apples".into(), s(&["GalaApple", "Honeycrisp", "SmithApple"])),
            ("bananas".into(), s(&["Plantain", "RedBanana"])),
        ])
        .unwrap();
        let (q1, h1) = quotient_graph(&g, &rho1, true).unwrap();
        let mut nodes = q1.nodes().to_vec();
        nodes.sort();
        assert_eq!(nodes, s(&["I", "apples", "bananas", "love"]));
        assert_eq!(q1.edges().len(), 3);
        assert!(check_graph_hom(&h1, &g, &q1).unwrap().is_empty());

        let rho2 = EquivRelation::labeled(vec![
            ("I".into(), s(&["I"])),
            ("love".into(), s(&["love"])),
            ("fruits".into(), s(&["GalaApple", "Honeycrisp", "SmithApple", "Plantain", "RedBanana"])),
        ])
        .unwrap();
        let (q2, _) = quotient_graph(&g, &rho2, true).unwrap();
        assert_eq!(q2.nodes().len(), 3);
        let ends: Vec<(String, String)> =
            q2.edges().iter().map(|e| (e.src.clone(), e.dst.clone())).collect();
        assert_eq!(ends, vec![("I".into(), "love".into()), ("love".into(), "fruits".into())]);

        // parallel edges survive without the flag
        let (q2p, _) = quotient_graph(&g, &rho2, false).unwrap();
        assert_eq!(q2p.edges().len(), 6);
    }

    #[test]
    fn discrete_quotient_is_identity() {
        let g = fruit_graph();
        let (q, h) = quotient_graph(&g, &EquivRelation::discrete(g.nodes()), false).unwrap();
        assert_eq!(q.nodes().len(), g.nodes().len());
        assert_eq!(q.edges().len(), g.edges().len());
        assert!(h.nodes.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn quotient_rejects_wrong_carrier() {
        let g = fruit_graph();
        let rho = EquivRelation::discrete(&["I", "love"]);
        assert!(matches!(quotient_graph(&g, &rho, false), Err(Error::CarrierMismatch(_))));
    }

    #[test]
    fn monthly_refines_quarterly() {
        let months = s(&["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"]);
        let monthly = EquivRelation::discrete(&months);
        let quarterly = EquivRelation::by_key(&months, |m| months.iter().position(|x| x == m).unwrap() / 3);
        assert!(equiv_refines(&monthly, &quarterly).unwrap());
        assert!(!equiv_refines(&quarterly, &monthly).unwrap());
    }

    #[test]
    fn crossing_partitions_do_not_refine() {
        let a = EquivRelation::from_blocks(vec![s(&["1", "2"]), s(&["3", "4"])]).unwrap();
        let b = EquivRelation::from_blocks(vec![s(&["1", "3"]), s(&["2", "4"])]).unwrap();
        assert!(!equiv_refines(&a, &b).unwrap());
        assert!(!equiv_refines(&b, &a).unwrap());
    }

    #[test]
    fn empty_carrier_has_no_blocks() {
        let e = EquivRelation::discrete::<&str>(&[]);
        assert!(e.blocks().is_empty());
        let g = DiGraph::default();
        let (q, _) = quotient_graph(&g, &e, true).unwrap();
        assert!(q.nodes().is_empty());
    }

    #[test]
    fn poset_encodings() {
        let chain = Poset::from_covers(&["0", "1"], &[("0", "1")]).unwrap();
        let g = poset_to_digraph(&chain).unwrap();
        assert_eq!((g.nodes().len(), g.edges().len()), (2, 3));

        let anti = Poset::from_covers::<&str>(&["a", "b", "c"], &[]).unwrap();
        let g = poset_to_digraph(&anti).unwrap();
        assert_eq!((g.nodes().len(), g.edges().len()), (3, 3));

        // feasible regions S1 ⊆ S2, compared as finite point sets
        let s1: BTreeSet<i32> = [1, 2].into();
        let s2: BTreeSet<i32> = [1, 2, 3].into();
        let regions = [("S1", &s1), ("S2", &s2)];
        let mut covers = vec![];
        for (a, ra) in &regions {
            for (b, rb) in &regions {
                if a != b && ra.is_subset(rb) {
                    covers.push((*a, *b));
                }
            }
        }
        let opt = Poset::from_covers(&["S1", "S2"], &covers).unwrap();
        let g = poset_to_digraph(&opt).unwrap();
        assert_eq!((g.nodes().len(), g.edges().len()), (2, 3));
        assert!(g.edge("S1<=S2").is_some());
    }

    #[test]
    fn invalid_poset_names_axiom() {
        let p = Poset {
            carrier: s(&["a", "b"]),
            leq: [("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        };
        let err = poset_to_digraph(&p).unwrap_err();
        assert!(err.to_string().contains("antisymmetric"), "{err}");
        let p = Poset { carrier: s(&["a"]), leq: BTreeSet::new() };
        assert!(poset_to_digraph(&p).unwrap_err().to_string().contains("reflexive"));
    }

    #[test]
    fn graph_json_roundtrip_and_dot() {
        let g = w1();
        let js = serde_json::to_string(&g).unwrap();
        let back: DiGraph = serde_json::from_str(&js).unwrap();
        assert_eq!(g, back);
        assert!(g.to_dot("W1").contains("\"I\" -> \"love\""));
        assert!(serde_json::from_str::<DiGraph>(r#"{"nodes":["a"],"edges":[{"id":"e","src":"a","dst":"b"}]}"#).is_err());
    }
}
