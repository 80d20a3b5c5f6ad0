//! Structural graph algorithms on components: strongly connected components,
//! condensation, period, simple-cycle enumeration (Johnson-style), functional
//! digraphs, and rooted spanning forests.
//!
//! Enumerations over edge-choice products are guarded by an explicit cap and
//! report truncation as a typed outcome, never as a silent partial answer.

use std::ops::ControlFlow;

use num_integer::Integer;

use crate::chain::{MarkovChain, Transition};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default bound on the number of candidates an edge-choice enumeration may
/// visit. The CLI lets `MM_ENUM_CAP` override it.
pub const DEFAULT_ENUM_CAP: u64 = 100_000_000;

/// Tarjan's strongly connected components on an adjacency list.
/// Components are returned in reverse topological order of the condensation.
pub fn tarjan_scc(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adjacency: &'a [Vec<usize>],
        index: usize,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        comps: Vec<Vec<usize>>,
    }

    fn connect(v: usize, st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &st.adjacency[v] {
            if st.idx[w].is_none() {
                connect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }
        if st.low[v] == st.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("tarjan stack underflow");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.comps.push(comp);
        }
    }

    let n = adjacency.len();
    let mut st = State {
        adjacency,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            connect(v, &mut st);
        }
    }
    st.comps
}

/// Maps each vertex to the index of its component in `sccs`.
pub fn component_ids(sccs: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut ids = vec![usize::MAX; n];
    for (c, comp) in sccs.iter().enumerate() {
        for &v in comp {
            ids[v] = c;
        }
    }
    debug_assert!(ids.iter().all(|&c| c != usize::MAX));
    ids
}

/// Strongly connected components of a chain's underlying digraph together
/// with the condensation DAG over component indices.
pub fn scc_condensation<S: Scalar>(chain: &MarkovChain<S>) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut adjacency = vec![Vec::new(); chain.state_count()];
    for t in chain.transitions() {
        adjacency[t.from].push(t.to);
    }
    let sccs = tarjan_scc(&adjacency);
    let dag = condensation(&adjacency, &sccs);
    (sccs, dag)
}

/// Condensation as an adjacency list over component indices (deduplicated).
pub fn condensation(adjacency: &[Vec<usize>], sccs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let ids = component_ids(sccs, adjacency.len());
    let mut dag = vec![Vec::new(); sccs.len()];
    for (u, targets) in adjacency.iter().enumerate() {
        for &v in targets {
            if ids[u] != ids[v] {
                dag[ids[u]].push(ids[v]);
            }
        }
    }
    for row in &mut dag {
        row.sort_unstable();
        row.dedup();
    }
    dag
}

/// Period of a strongly connected vertex set: the gcd of all cycle lengths,
/// computed as the gcd of `level(u) + 1 - level(v)` over its edges for a BFS
/// layering. `None` when the set has no cycle (a single vertex without loops).
pub fn period_of_scc(adjacency: &[Vec<usize>], members: &[usize]) -> Option<u64> {
    if members.is_empty() {
        return None;
    }
    let n = adjacency.len();
    let mut in_set = vec![false; n];
    for &v in members {
        in_set[v] = true;
    }
    let mut level = vec![i64::MIN; n];
    let mut queue = std::collections::VecDeque::new();
    level[members[0]] = 0;
    queue.push_back(members[0]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if in_set[w] && level[w] == i64::MIN {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut g: i64 = 0;
    for &u in members {
        for &v in &adjacency[u] {
            if in_set[v] {
                g = g.gcd(&(level[u] + 1 - level[v]));
            }
        }
    }
    (g > 0).then_some(g as u64)
}

/// A weighted multidigraph with local vertex indexing; in the main pipeline it
/// is the final component of a validated chain, but the matrix-tree operations
/// accept arbitrary instances. The vertex order is canonical: reports and the
/// forest-sign convention use 1-based positions in this order.
#[derive(Debug, Clone)]
pub struct Component<S> {
    names: Vec<String>,
    /// Original chain state indices; empty for synthetic components.
    chain_states: Vec<usize>,
    edges: Vec<Transition<S>>,
    out: Vec<Vec<usize>>,
    m: usize,
}

impl<S: Scalar> Component<S> {
    /// Builds a component over `n` vertices named by their 1-based index.
    pub fn from_edges(n: usize, m: usize, edges: Vec<Transition<S>>) -> Result<Self> {
        let names = (1..=n).map(|i| i.to_string()).collect();
        Self::with_names(names, Vec::new(), m, edges)
    }

    fn with_names(
        names: Vec<String>,
        chain_states: Vec<usize>,
        m: usize,
        edges: Vec<Transition<S>>,
    ) -> Result<Self> {
        let n = names.len();
        for e in &edges {
            if e.from >= n {
                return Err(Error::VertexIndex {
                    index: e.from,
                    size: n,
                });
            }
            if e.to >= n {
                return Err(Error::VertexIndex {
                    index: e.to,
                    size: n,
                });
            }
            if e.out.len() != m {
                return Err(Error::OutputDimension {
                    from: names[e.from].clone(),
                    to: names[e.to].clone(),
                    expected: m,
                    got: e.out.len(),
                });
            }
        }
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out[e.from].push(i);
        }
        Ok(Component {
            names,
            chain_states,
            edges,
            out,
            m,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Transition<S>] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Chain state indices behind the local vertices (empty when synthetic).
    pub fn chain_states(&self) -> &[usize] {
        &self.chain_states
    }

    fn vertex_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        adj
    }

    pub fn is_strongly_connected(&self) -> bool {
        let adj = self.vertex_adjacency();
        tarjan_scc(&adj).len() == 1
    }

    /// Parallel edges from `u` to `v`.
    fn edges_between(&self, u: usize, v: usize) -> Vec<usize> {
        self.out[u]
            .iter()
            .copied()
            .filter(|&e| self.edges[e].to == v)
            .collect()
    }

    /// Period of this (strongly connected) component.
    pub fn period(&self) -> Option<u64> {
        let members: Vec<usize> = (0..self.names.len()).collect();
        period_of_scc(&self.vertex_adjacency(), &members)
    }
}

/// Extracts the final component of a validated chain, with vertices in the
/// chain's declaration order. Fails when the chain does not satisfy the
/// structural assumptions.
pub fn final_component<S: Scalar>(chain: &MarkovChain<S>) -> Result<Component<S>> {
    let report = chain.validate();
    if !report.is_valid() {
        return Err(Error::InvalidChain(report.failures().join("; ")));
    }
    let members: Vec<usize> = (0..chain.state_count())
        .filter(|&v| {
            report
                .final_states
                .contains(&chain.state_name(v).to_owned())
        })
        .collect();
    let mut local = vec![usize::MAX; chain.state_count()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    for t in chain.transitions() {
        if local[t.from] != usize::MAX {
            if local[t.to] == usize::MAX {
                return Err(Error::Internal(
                    "final component has an outgoing transition".into(),
                ));
            }
            edges.push(Transition {
                from: local[t.from],
                to: local[t.to],
                prob: t.prob.clone(),
                out: t.out.clone(),
            });
        }
    }
    let names = members
        .iter()
        .map(|&v| chain.state_name(v).to_owned())
        .collect();
    Component::with_names(names, members, chain.dim(), edges)
}

/// A simple directed cycle: distinct vertices, edges in walk order, with the
/// exact sum of the edge outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle<S> {
    /// Vertices in walk order, rotated so the smallest comes first.
    pub vertices: Vec<usize>,
    /// `edges[i]` goes from `vertices[i]` to `vertices[(i+1) % len]`.
    pub edges: Vec<usize>,
    /// Output sums `(k_1(C), ..., k_m(C))`.
    pub value: Vec<S>,
}

impl<S: Scalar> Cycle<S> {
    fn new(comp: &Component<S>, vertices: Vec<usize>, edges: Vec<usize>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len());
        let (vertices, edges) = canonical_rotation(vertices, edges);
        let mut value = vec![S::zero(); comp.m];
        for &e in &edges {
            for (acc, x) in value.iter_mut().zip(&comp.edges[e].out) {
                *acc = acc.clone() + x.clone();
            }
        }
        Cycle {
            vertices,
            edges,
            value,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Total probability weight of the cycle's edges.
    pub fn weight(&self, comp: &Component<S>) -> S {
        self.edges
            .iter()
            .fold(S::one(), |acc, &e| acc * comp.edges[e].prob.clone())
    }
}

fn canonical_rotation(vertices: Vec<usize>, edges: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
    let k = vertices
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| *v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let rot = |v: &Vec<usize>| {
        let mut out = Vec::with_capacity(v.len());
        out.extend_from_slice(&v[k..]);
        out.extend_from_slice(&v[..k]);
        out
    };
    (rot(&vertices), rot(&edges))
}

/// Result of a bounded cycle enumeration.
#[derive(Debug, Clone)]
pub struct CycleList<S> {
    pub cycles: Vec<Cycle<S>>,
    /// True when enumeration stopped at the requested limit.
    pub truncated: bool,
}

/// Enumerates every simple directed cycle of a strongly connected component
/// exactly once (loops included, parallel edges distinguished), stopping after
/// `limit` cycles when one is given.
pub fn simple_cycles<S: Scalar>(comp: &Component<S>, limit: Option<usize>) -> CycleList<S> {
    let mut cycles = Vec::new();
    let mut truncated = false;
    visit_simple_cycles(comp, |cycle| {
        if limit.is_some_and(|l| cycles.len() >= l) {
            truncated = true;
            return ControlFlow::Break(());
        }
        cycles.push(cycle);
        ControlFlow::Continue(())
    });
    CycleList { cycles, truncated }
}

/// Johnson-style backtracking over vertex cycles, expanded over parallel
/// edges. Each cycle is reported once, rooted at its smallest vertex.
pub fn visit_simple_cycles<S, F>(comp: &Component<S>, visitor: F)
where
    S: Scalar,
    F: FnMut(Cycle<S>) -> ControlFlow<()>,
{
    let n = comp.vertex_count();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, row) in adjacency.iter_mut().enumerate() {
        let mut targets: Vec<usize> = comp.out[v].iter().map(|&e| comp.edges[e].to).collect();
        targets.sort_unstable();
        targets.dedup();
        *row = targets;
    }

    struct Search<'a, S, F> {
        comp: &'a Component<S>,
        adjacency: &'a [Vec<usize>],
        root: usize,
        blocked: Vec<bool>,
        block_list: Vec<Vec<usize>>,
        stack: Vec<usize>,
        visitor: F,
    }

    impl<S: Scalar, F: FnMut(Cycle<S>) -> ControlFlow<()>> Search<'_, S, F> {
        /// Emits each parallel-edge realization of the vertex cycle on the stack.
        fn emit(&mut self) -> ControlFlow<()> {
            let verts = self.stack.clone();
            let len = verts.len();
            let options: Vec<Vec<usize>> = (0..len)
                .map(|i| self.comp.edges_between(verts[i], verts[(i + 1) % len]))
                .collect();
            let mut pick = vec![0usize; len];
            loop {
                let edges: Vec<usize> = (0..len).map(|i| options[i][pick[i]]).collect();
                (self.visitor)(Cycle::new(self.comp, verts.clone(), edges))?;
                let mut i = 0;
                loop {
                    if i == len {
                        return ControlFlow::Continue(());
                    }
                    pick[i] += 1;
                    if pick[i] < options[i].len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
            }
        }

        fn unblock(&mut self, v: usize) {
            self.blocked[v] = false;
            let pending = std::mem::take(&mut self.block_list[v]);
            for w in pending {
                if self.blocked[w] {
                    self.unblock(w);
                }
            }
        }

        fn circuit(&mut self, v: usize) -> ControlFlow<(), bool> {
            let mut found = false;
            self.stack.push(v);
            self.blocked[v] = true;
            for i in 0..self.adjacency[v].len() {
                let w = self.adjacency[v][i];
                if w < self.root {
                    continue;
                }
                if w == self.root {
                    self.emit()?;
                    found = true;
                } else if !self.blocked[w] && self.circuit(w)? {
                    found = true;
                }
            }
            if found {
                self.unblock(v);
            } else {
                for i in 0..self.adjacency[v].len() {
                    let w = self.adjacency[v][i];
                    if w >= self.root && !self.block_list[w].contains(&v) {
                        self.block_list[w].push(v);
                    }
                }
            }
            self.stack.pop();
            ControlFlow::Continue(found)
        }
    }

    let mut search = Search {
        comp,
        adjacency: &adjacency,
        root: 0,
        blocked: vec![false; n],
        block_list: vec![Vec::new(); n],
        stack: Vec::new(),
        visitor,
    };
    for s in 0..n {
        search.root = s;
        for v in s..n {
            search.blocked[v] = false;
            search.block_list[v].clear();
        }
        if search.circuit(s).is_break() {
            return;
        }
    }
}

/// A spanning out-degree-1 subgraph of a component, with its weight and its
/// vertex-disjoint cycle set. The number of weakly connected components equals
/// the number of cycles.
#[derive(Debug, Clone)]
pub struct FunctionalDigraph<S> {
    /// Chosen outgoing edge per vertex.
    pub choice: Vec<usize>,
    /// Product of the chosen edges' probabilities.
    pub weight: S,
    pub cycles: Vec<Cycle<S>>,
}

impl<S> FunctionalDigraph<S> {
    pub fn component_count(&self) -> usize {
        self.cycles.len()
    }
}

/// Streams every spanning out-degree-1 subgraph of the component. Refuses up
/// front when the choice product exceeds `cap`.
pub fn for_each_functional_digraph<S, F>(comp: &Component<S>, cap: u64, mut f: F) -> Result<()>
where
    S: Scalar,
    F: FnMut(&FunctionalDigraph<S>),
{
    let n = comp.vertex_count();
    let mut candidates: u128 = 1;
    for v in 0..n {
        candidates = candidates.saturating_mul(comp.out[v].len() as u128);
    }
    if candidates > cap as u128 {
        return Err(Error::EnumerationCap { candidates, cap });
    }
    if candidates == 0 {
        return Ok(());
    }

    let mut pick = vec![0usize; n];
    loop {
        let choice: Vec<usize> = (0..n).map(|v| comp.out[v][pick[v]]).collect();
        let weight = choice
            .iter()
            .fold(S::one(), |acc, &e| acc * comp.edges[e].prob.clone());
        let cycles = successor_cycles(comp, &choice);
        f(&FunctionalDigraph {
            choice,
            weight,
            cycles,
        });
        let mut v = 0;
        loop {
            if v == n {
                return Ok(());
            }
            pick[v] += 1;
            if pick[v] < comp.out[v].len() {
                break;
            }
            pick[v] = 0;
            v += 1;
        }
    }
}

/// Cycles of an out-degree-1 successor map, by walking with visitation marks.
fn successor_cycles<S: Scalar>(comp: &Component<S>, choice: &[usize]) -> Vec<Cycle<S>> {
    let n = choice.len();
    // 0 = unvisited, 1 = on current walk, 2 = finished
    let mut mark = vec![0u8; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if mark[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut v = start;
        while mark[v] == 0 {
            mark[v] = 1;
            walk.push(v);
            v = comp.edges[choice[v]].to;
        }
        if mark[v] == 1 {
            // closed a new cycle at v
            let pos = walk.iter().position(|&w| w == v).unwrap();
            let verts: Vec<usize> = walk[pos..].to_vec();
            let edges: Vec<usize> = verts.iter().map(|&w| choice[w]).collect();
            cycles.push(Cycle::new(comp, verts, edges));
        }
        for w in walk {
            mark[w] = 2;
        }
    }
    cycles
}

/// Collects the functional digraphs with exactly `parts` components.
pub fn functional_digraphs<S: Scalar>(
    comp: &Component<S>,
    parts: usize,
    cap: u64,
) -> Result<Vec<FunctionalDigraph<S>>> {
    let mut out = Vec::new();
    for_each_functional_digraph(comp, cap, |d| {
        if d.component_count() == parts {
            out.push(d.clone());
        }
    })?;
    Ok(out)
}

/// A spanning forest with roots `A` and one marker of `B` per tree, directed
/// towards the roots, with the permutation sign of the root-marker matching.
#[derive(Debug, Clone)]
pub struct RootedForest<S> {
    /// Chosen edge per non-root vertex.
    pub edges: Vec<usize>,
    pub roots: Vec<usize>,
    pub markers: Vec<usize>,
    pub weight: S,
    pub sign: i8,
}

/// Enumerates the forests with root set `roots` (out-degree 0 there, 1
/// elsewhere, no cycles) in which every tree contains exactly one vertex of
/// `markers`. Empty when `|roots| != |markers|`.
pub fn forests<S: Scalar>(
    comp: &Component<S>,
    roots: &[usize],
    markers: &[usize],
    cap: u64,
) -> Result<Vec<RootedForest<S>>> {
    let n = comp.vertex_count();
    for &v in roots.iter().chain(markers) {
        if v >= n {
            return Err(Error::VertexIndex { index: v, size: n });
        }
    }
    let mut roots: Vec<usize> = roots.to_vec();
    roots.sort_unstable();
    roots.dedup();
    let mut markers: Vec<usize> = markers.to_vec();
    markers.sort_unstable();
    markers.dedup();
    if roots.len() != markers.len() {
        return Ok(Vec::new());
    }

    let mut is_root = vec![false; n];
    for &a in &roots {
        is_root[a] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&v| !is_root[v]).collect();
    // Loops can never occur in a forest.
    let options: Vec<Vec<usize>> = free
        .iter()
        .map(|&v| {
            comp.out[v]
                .iter()
                .copied()
                .filter(|&e| comp.edges[e].to != v)
                .collect()
        })
        .collect();
    let mut candidates: u128 = 1;
    for opts in &options {
        candidates = candidates.saturating_mul(opts.len() as u128);
    }
    if candidates > cap as u128 {
        return Err(Error::EnumerationCap { candidates, cap });
    }

    let mut result = Vec::new();
    if candidates == 0 {
        return Ok(result);
    }
    let mut pick = vec![0usize; free.len()];
    'outer: loop {
        let chosen: Vec<usize> = (0..free.len()).map(|i| options[i][pick[i]]).collect();
        if let Some(forest) = build_forest(comp, &roots, &markers, &free, &chosen) {
            result.push(forest);
        }
        let mut i = 0;
        loop {
            if i == free.len() {
                break 'outer;
            }
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
    Ok(result)
}

fn build_forest<S: Scalar>(
    comp: &Component<S>,
    roots: &[usize],
    markers: &[usize],
    free: &[usize],
    chosen: &[usize],
) -> Option<RootedForest<S>> {
    let n = comp.vertex_count();
    let mut successor = vec![None; n];
    for (i, &v) in free.iter().enumerate() {
        successor[v] = Some(chosen[i]);
    }
    // Root of each vertex's tree; walks either reach a resolved vertex or
    // close a directed cycle, which disqualifies the choice.
    let mut root_of = vec![usize::MAX; n];
    for &a in roots {
        root_of[a] = a;
    }
    for start in 0..n {
        if root_of[start] != usize::MAX {
            continue;
        }
        let mut walk = vec![start];
        let mut v = start;
        while let Some(e) = successor[v] {
            v = comp.edges[e].to;
            if root_of[v] != usize::MAX {
                break;
            }
            if walk.contains(&v) {
                return None;
            }
            walk.push(v);
        }
        let r = root_of[v];
        debug_assert_ne!(r, usize::MAX, "walks terminate at roots");
        for w in walk {
            root_of[w] = r;
        }
    }

    // each tree must contain exactly one marker
    let mut marker_count = vec![0usize; n];
    for &b in markers {
        marker_count[root_of[b]] += 1;
    }
    if roots.iter().any(|&a| marker_count[a] != 1) {
        return None;
    }

    // sign of g∘h where g maps a marker to its tree's root and h pairs the
    // sorted roots with the sorted markers
    let perm: Vec<usize> = markers
        .iter()
        .map(|&b| roots.iter().position(|&a| a == root_of[b]).unwrap())
        .collect();
    let mut sign = 1i8;
    let mut seen = vec![false; perm.len()];
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }

    let weight = chosen
        .iter()
        .fold(S::one(), |acc, &e| acc * comp.edges[e].prob.clone());
    Some(RootedForest {
        edges: chosen.to_vec(),
        roots: roots.to_vec(),
        markers: markers.to_vec(),
        weight,
        sign,
    })
}
