//! The directed variant graph.
//!
//! Nodes are the observed genotypes, sorted by code. For every pair of
//! observed single-mutation neighbors with different fitness there is one
//! edge pointing at the fitter genotype; equal-fitness neighbors carry no
//! edge. Local optima are exactly the sinks of this graph.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genotype::{Alphabet, GenotypeCode, SequenceSpace};
use crate::stats::chunked;

/// One row of sequence–fitness input.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantRecord {
    pub alleles: Vec<String>,
    pub fitness: f64,
    pub variance: Option<f64>,
}

impl VariantRecord {
    pub fn new<S: Into<String>>(alleles: impl IntoIterator<Item = S>, fitness: f64) -> Self {
        Self {
            alleles: alleles.into_iter().map(Into::into).collect(),
            fitness,
            variance: None,
        }
    }

    /// Record from a plain string with one character per locus.
    pub fn from_str_seq(sequence: &str, fitness: f64) -> Self {
        Self::new(sequence.chars().map(|c| c.to_string()), fitness)
    }
}

/// How the per-locus alphabets are obtained during ingestion.
#[derive(Debug, Clone)]
pub enum AlphabetChoice {
    /// Sorted set of symbols observed at each locus.
    Infer,
    Preset(Alphabet),
    Space(SequenceSpace),
}

/// A cleaned, encoded record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub code: GenotypeCode,
    pub fitness: f64,
    pub variance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestReport {
    pub input_rows: usize,
    pub unique_records: usize,
    pub duplicates_dropped: usize,
    /// Loci dropped during inference because only one symbol was observed.
    pub monomorphic_loci: Vec<usize>,
    pub alphabet_sizes: Vec<usize>,
    pub completeness: f64,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub space: SequenceSpace,
    pub nodes: Vec<Node>,
    pub report: IngestReport,
}

/// Validates records, infers or checks the sequence space, and removes
/// exact duplicates.
pub fn ingest(records: &[VariantRecord], alphabet: &AlphabetChoice) -> Result<Ingested> {
    let first = records.first().ok_or(Error::EmptyInput)?;
    let width = first.alleles.len();
    for (row, r) in records.iter().enumerate() {
        if r.alleles.len() != width {
            return Err(Error::LengthMismatch {
                expected: width,
                found: r.alleles.len(),
            });
        }
        if !r.fitness.is_finite() {
            return Err(Error::NonFiniteFitness { row });
        }
        if let Some(v) = r.variance {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidVariance { row });
            }
        }
    }

    let mut monomorphic = Vec::new();
    let (space, kept_loci): (SequenceSpace, Vec<usize>) = match alphabet {
        AlphabetChoice::Space(s) => (s.clone(), (0..width).collect()),
        AlphabetChoice::Preset(a) => (SequenceSpace::uniform(*a, width)?, (0..width).collect()),
        AlphabetChoice::Infer => {
            let mut observed: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); width];
            for r in records {
                for (locus, s) in r.alleles.iter().enumerate() {
                    observed[locus].insert(s.as_str());
                }
            }
            let mut alphabets = Vec::new();
            let mut kept = Vec::new();
            for (locus, set) in observed.into_iter().enumerate() {
                if set.len() < 2 {
                    monomorphic.push(locus);
                } else {
                    kept.push(locus);
                    alphabets.push(set.into_iter().map(str::to_string).collect());
                }
            }
            if alphabets.is_empty() {
                // every locus is constant: all records are the same sequence
                if records.len() > 1 && records.iter().any(|r| r.fitness != first.fitness) {
                    return Err(Error::ConflictingDuplicate {
                        sequence: first.alleles.concat(),
                        first: first.fitness,
                        second: records
                            .iter()
                            .find(|r| r.fitness != first.fitness)
                            .map(|r| r.fitness)
                            .unwrap_or(first.fitness),
                    });
                }
                return Err(Error::NoLoci);
            }
            (SequenceSpace::new(alphabets)?, kept)
        }
    };
    if space.n_loci() != kept_loci.len() {
        return Err(Error::LengthMismatch {
            expected: space.n_loci(),
            found: width,
        });
    }

    let mut position: HashMap<u64, usize> = HashMap::with_capacity(records.len());
    let mut nodes: Vec<Node> = Vec::with_capacity(records.len());
    let mut duplicates = 0usize;
    let mut buf: Vec<&str> = Vec::with_capacity(kept_loci.len());
    for r in records {
        buf.clear();
        buf.extend(kept_loci.iter().map(|&l| r.alleles[l].as_str()));
        let code = space.encode(&buf)?;
        match position.get(&code.0) {
            Some(&i) => {
                if nodes[i].fitness != r.fitness {
                    return Err(Error::ConflictingDuplicate {
                        sequence: r.alleles.concat(),
                        first: nodes[i].fitness,
                        second: r.fitness,
                    });
                }
                duplicates += 1;
            }
            None => {
                position.insert(code.0, nodes.len());
                nodes.push(Node {
                    code,
                    fitness: r.fitness,
                    variance: r.variance,
                });
            }
        }
    }
    nodes.sort_by_key(|n| n.code);
    let report = IngestReport {
        input_rows: records.len(),
        unique_records: nodes.len(),
        duplicates_dropped: duplicates,
        monomorphic_loci: monomorphic,
        alphabet_sizes: space.sizes(),
        completeness: nodes.len() as f64 / space.total_size() as f64,
    };
    Ok(Ingested {
        space,
        nodes,
        report,
    })
}

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone)]
enum NodeIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl NodeIndex {
    fn new(space: &SequenceSpace, codes: &[GenotypeCode]) -> Self {
        let total = space.total_size();
        let dense_limit = (codes.len() as u64).saturating_mul(8).max(1 << 20);
        if total <= dense_limit && total < ABSENT as u64 {
            let mut v = vec![ABSENT; total as usize];
            for (i, c) in codes.iter().enumerate() {
                v[c.0 as usize] = i as u32;
            }
            NodeIndex::Dense(v)
        } else {
            NodeIndex::Sparse(
                codes
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.0, i as u32))
                    .collect(),
            )
        }
    }

    #[inline]
    fn get(&self, code: GenotypeCode) -> Option<usize> {
        match self {
            NodeIndex::Dense(v) => match v[code.0 as usize] {
                ABSENT => None,
                i => Some(i as usize),
            },
            NodeIndex::Sparse(m) => m.get(&code.0).map(|&i| i as usize),
        }
    }
}

/// Immutable directed variant graph with out- and in-adjacency in CSR form.
#[derive(Debug, Clone)]
pub struct Landscape {
    space: SequenceSpace,
    codes: Vec<GenotypeCode>,
    fitness: Vec<f64>,
    variance: Vec<Option<f64>>,
    index: NodeIndex,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<u32>,
}

/// Sinks of the graph plus the tie-broken global optimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimaSet {
    pub local_optima: Vec<usize>,
    pub global_optimum: usize,
    pub global_tie_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkOutcome {
    pub start: GenotypeCode,
    pub endpoint: GenotypeCode,
    pub steps: usize,
    pub endpoint_fitness: f64,
}

/// Greedy-walk partition of all nodes among the local optima.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyBasins {
    /// Endpoint node of the greedy walk from each node.
    pub endpoint: Vec<u32>,
    /// `(optimum node, basin size)` for every local optimum, in node order.
    pub sizes: Vec<(usize, usize)>,
}

impl Landscape {
    /// Builds the graph from cleaned records (see [`ingest`]).
    pub fn build(space: SequenceSpace, mut nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyInput);
        }
        nodes.sort_by_key(|n| n.code);
        for (row, w) in nodes.iter().enumerate() {
            space.check(w.code)?;
            if !w.fitness.is_finite() {
                return Err(Error::NonFiniteFitness { row });
            }
        }
        if let Some(pair) = nodes.windows(2).find(|p| p[0].code == p[1].code) {
            return Err(Error::ConflictingDuplicate {
                sequence: space.format(pair[0].code, ""),
                first: pair[0].fitness,
                second: pair[1].fitness,
            });
        }
        let codes: Vec<GenotypeCode> = nodes.iter().map(|n| n.code).collect();
        let fitness: Vec<f64> = nodes.iter().map(|n| n.fitness).collect();
        let variance: Vec<Option<f64>> = nodes.iter().map(|n| n.variance).collect();
        let index = NodeIndex::new(&space, &codes);

        let parts = chunked(codes.len(), |range| {
            let mut degrees = Vec::with_capacity(range.len());
            let mut targets = Vec::new();
            for u in range {
                let before = targets.len();
                let fu = fitness[u];
                space.for_each_neighbor(codes[u], |_, _, nb| {
                    if let Some(v) = index.get(nb) {
                        if fitness[v] > fu {
                            targets.push(v as u32);
                        }
                    }
                });
                degrees.push(targets.len() - before);
            }
            (degrees, targets)
        });
        let edge_count: usize = parts.iter().map(|p| p.1.len()).sum();
        let mut out_offsets = Vec::with_capacity(codes.len() + 1);
        let mut out_targets = Vec::with_capacity(edge_count);
        out_offsets.push(0);
        for (degrees, targets) in parts {
            let mut acc = *out_offsets.last().unwrap();
            for d in degrees {
                acc += d;
                out_offsets.push(acc);
            }
            out_targets.extend_from_slice(&targets);
        }
        Ok(Self::assemble(
            space,
            codes,
            fitness,
            variance,
            index,
            out_offsets,
            out_targets,
        ))
    }

    /// Convenience: ingest then build.
    pub fn from_records(records: &[VariantRecord], alphabet: &AlphabetChoice) -> Result<Self> {
        let ing = ingest(records, alphabet)?;
        Self::build(ing.space, ing.nodes)
    }

    pub(crate) fn from_parts(
        space: SequenceSpace,
        nodes: Vec<Node>,
        out_offsets: Vec<usize>,
        out_targets: Vec<u32>,
    ) -> Self {
        let codes: Vec<GenotypeCode> = nodes.iter().map(|n| n.code).collect();
        let fitness = nodes.iter().map(|n| n.fitness).collect();
        let variance = nodes.iter().map(|n| n.variance).collect();
        let index = NodeIndex::new(&space, &codes);
        Self::assemble(
            space,
            codes,
            fitness,
            variance,
            index,
            out_offsets,
            out_targets,
        )
    }

    fn assemble(
        space: SequenceSpace,
        codes: Vec<GenotypeCode>,
        fitness: Vec<f64>,
        variance: Vec<Option<f64>>,
        index: NodeIndex,
        out_offsets: Vec<usize>,
        out_targets: Vec<u32>,
    ) -> Self {
        let n = codes.len();
        let mut in_offsets = vec![0usize; n + 1];
        for &t in &out_targets {
            in_offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut fill = in_offsets.clone();
        let mut in_sources = vec![0u32; out_targets.len()];
        for u in 0..n {
            for &t in &out_targets[out_offsets[u]..out_offsets[u + 1]] {
                in_sources[fill[t as usize]] = u as u32;
                fill[t as usize] += 1;
            }
        }
        Self {
            space,
            codes,
            fitness,
            variance,
            index,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        }
    }

    pub fn space(&self) -> &SequenceSpace {
        &self.space
    }

    pub fn node_count(&self) -> usize {
        self.codes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn completeness(&self) -> f64 {
        self.codes.len() as f64 / self.space.total_size() as f64
    }

    pub fn codes(&self) -> &[GenotypeCode] {
        &self.codes
    }

    pub fn code(&self, node: usize) -> GenotypeCode {
        self.codes[node]
    }

    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    pub fn variances(&self) -> &[Option<f64>] {
        &self.variance
    }

    pub fn has_variance(&self) -> bool {
        self.variance.iter().any(Option::is_some)
    }

    pub fn nodes(&self) -> Vec<Node> {
        (0..self.node_count())
            .map(|i| Node {
                code: self.codes[i],
                fitness: self.fitness[i],
                variance: self.variance[i],
            })
            .collect()
    }

    pub fn node_of(&self, code: GenotypeCode) -> Option<usize> {
        if code.0 >= self.space.total_size() {
            return None;
        }
        self.index.get(code)
    }

    pub fn out_neighbors(&self, node: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[node]..self.out_offsets[node + 1]]
    }

    pub fn in_neighbors(&self, node: usize) -> &[u32] {
        &self.in_sources[self.in_offsets[node]..self.in_offsets[node + 1]]
    }

    pub(crate) fn out_csr(&self) -> (&[usize], &[u32]) {
        (&self.out_offsets, &self.out_targets)
    }

    /// All edges as `(tail code, head code)` pairs.
    pub fn edges(&self) -> Vec<(GenotypeCode, GenotypeCode)> {
        (0..self.node_count())
            .flat_map(|u| {
                self.out_neighbors(u)
                    .iter()
                    .map(move |&v| (self.codes[u], self.codes[v as usize]))
            })
            .collect()
    }

    /// Visits `(locus, allele, node)` for each observed single-mutation
    /// neighbor of `node`, regardless of fitness.
    #[inline]
    pub fn for_each_present_neighbor(
        &self,
        node: usize,
        mut visit: impl FnMut(usize, usize, usize),
    ) {
        self.space
            .for_each_neighbor(self.codes[node], |locus, allele, nb| {
                if let Some(v) = self.index.get(nb) {
                    visit(locus, allele, v);
                }
            });
    }

    /// Observed neighbor of `node` carrying `allele` at `locus`.
    #[inline]
    pub fn mutant(&self, node: usize, locus: usize, allele: usize) -> Option<usize> {
        self.index
            .get(self.space.with_digit(self.codes[node], locus, allele))
    }

    pub fn is_sink(&self, node: usize) -> bool {
        self.out_offsets[node] == self.out_offsets[node + 1]
    }

    /// Deterministic node order used for every tie-break: genotypes compared
    /// as sequences, first locus first.
    pub(crate) fn tie_cmp(&self, a: usize, b: usize) -> Ordering {
        self.space.sequence_cmp(self.codes[a], self.codes[b])
    }

    /// Maximum-fitness node (ties broken by sequence order) and the number
    /// of nodes attaining the maximum.
    pub fn global_optimum(&self) -> (usize, usize) {
        let mut best = 0usize;
        let mut ties = 1usize;
        for i in 1..self.node_count() {
            match self.fitness[i].partial_cmp(&self.fitness[best]).unwrap() {
                Ordering::Greater => {
                    best = i;
                    ties = 1;
                }
                Ordering::Equal => {
                    ties += 1;
                    if self.tie_cmp(i, best) == Ordering::Less {
                        best = i;
                    }
                }
                Ordering::Less => {}
            }
        }
        (best, ties)
    }

    pub fn local_optima(&self) -> OptimaSet {
        let local_optima = (0..self.node_count()).filter(|&i| self.is_sink(i)).collect();
        let (global_optimum, global_tie_count) = self.global_optimum();
        OptimaSet {
            local_optima,
            global_optimum,
            global_tie_count,
        }
    }

    /// Best-improvement successor: the fittest out-neighbor, ties broken by
    /// sequence order. `None` at a sink.
    pub fn greedy_successor(&self, node: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &v in self.out_neighbors(node) {
            let v = v as usize;
            best = match best {
                None => Some(v),
                Some(b) => match self.fitness[v].partial_cmp(&self.fitness[b]).unwrap() {
                    Ordering::Greater => Some(v),
                    Ordering::Equal if self.tie_cmp(v, b) == Ordering::Less => Some(v),
                    _ => Some(b),
                },
            };
        }
        best
    }

    fn start_node(&self, start: GenotypeCode) -> Result<usize> {
        self.node_of(start).ok_or(Error::StartNotFound(start.0))
    }

    fn outcome(&self, start: usize, end: usize, steps: usize) -> WalkOutcome {
        WalkOutcome {
            start: self.codes[start],
            endpoint: self.codes[end],
            steps,
            endpoint_fitness: self.fitness[end],
        }
    }

    pub fn greedy_walk(&self, start: GenotypeCode) -> Result<WalkOutcome> {
        let s = self.start_node(start)?;
        Ok(self.greedy_walk_from(s))
    }

    pub(crate) fn greedy_walk_from(&self, s: usize) -> WalkOutcome {
        let mut cur = s;
        let mut steps = 0;
        while let Some(next) = self.greedy_successor(cur) {
            cur = next;
            steps += 1;
        }
        self.outcome(s, cur, steps)
    }

    /// Random adaptive walk: each step picks uniformly among the strictly
    /// fitter neighbors. Reproducible for a given `(start, seed)`.
    pub fn stochastic_walk(&self, start: GenotypeCode, seed: u64) -> Result<WalkOutcome> {
        let s = self.start_node(start)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(self.stochastic_walk_from(s, &mut rng))
    }

    pub(crate) fn stochastic_walk_from<R: Rng>(&self, s: usize, rng: &mut R) -> WalkOutcome {
        let mut cur = s;
        let mut steps = 0;
        loop {
            let out = self.out_neighbors(cur);
            if out.is_empty() {
                break;
            }
            cur = out[rng.random_range(0..out.len())] as usize;
            steps += 1;
        }
        self.outcome(s, cur, steps)
    }

    /// Every node with an increasing path to `optimum`, the optimum included.
    pub fn accessible_basin(&self, optimum: usize) -> Result<Vec<usize>> {
        if optimum >= self.node_count() || !self.is_sink(optimum) {
            return Err(Error::NotAnOptimum(optimum));
        }
        Ok(self
            .accessible_distances(optimum)
            .into_iter()
            .map(|(v, _)| v)
            .collect())
    }

    /// Reverse BFS from `target` over increasing edges: `(node, shortest
    /// accessible path length)` for every ancestor, in BFS order.
    pub fn accessible_distances(&self, target: usize) -> Vec<(usize, u32)> {
        let mut seen = vec![false; self.node_count()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen[target] = true;
        queue.push_back((target, 0u32));
        while let Some((v, d)) = queue.pop_front() {
            out.push((v, d));
            for &u in self.in_neighbors(v) {
                let u = u as usize;
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back((u, d + 1));
                }
            }
        }
        out
    }

    /// Size of the ancestor set of `target`, reusing caller scratch space.
    pub(crate) fn ancestor_count(&self, target: usize, scratch: &mut BasinScratch) -> usize {
        scratch.stamp = scratch.stamp.wrapping_add(1);
        if scratch.stamp == 0 || scratch.mark.len() != self.node_count() {
            scratch.mark.clear();
            scratch.mark.resize(self.node_count(), 0);
            scratch.stamp = 1;
        }
        let stamp = scratch.stamp;
        scratch.stack.clear();
        scratch.stack.push(target as u32);
        scratch.mark[target] = stamp;
        let mut count = 0;
        while let Some(v) = scratch.stack.pop() {
            count += 1;
            for &u in self.in_neighbors(v as usize) {
                if scratch.mark[u as usize] != stamp {
                    scratch.mark[u as usize] = stamp;
                    scratch.stack.push(u);
                }
            }
        }
        count
    }

    /// Runs the greedy walk from every node, memoized along fitness order.
    pub fn greedy_basins(&self) -> GreedyBasins {
        let n = self.node_count();
        let succ: Vec<u32> = chunked(n, |range| {
            range
                .map(|u| self.greedy_successor(u).map_or(ABSENT, |v| v as u32))
                .collect::<Vec<_>>()
        })
        .concat();
        let mut order: Vec<u32> = (0..n as u32).collect();
        // successors are strictly fitter, so descending fitness resolves them first
        order.sort_by(|&a, &b| {
            self.fitness[b as usize]
                .partial_cmp(&self.fitness[a as usize])
                .unwrap()
        });
        let mut endpoint = vec![ABSENT; n];
        for &u in &order {
            let u = u as usize;
            endpoint[u] = match succ[u] {
                ABSENT => u as u32,
                v => endpoint[v as usize],
            };
        }
        let mut counts = vec![0usize; n];
        for &e in &endpoint {
            counts[e as usize] += 1;
        }
        let sizes = (0..n)
            .filter(|&i| self.is_sink(i))
            .map(|i| (i, counts[i]))
            .collect();
        GreedyBasins { endpoint, sizes }
    }

    /// Induced subgraph on the nodes with `keep[i]`, obtained by filtering
    /// the existing edge set.
    pub fn induced(&self, keep: &[bool]) -> Landscape {
        assert_eq!(keep.len(), self.node_count());
        let mut remap = vec![ABSENT; self.node_count()];
        let mut nodes = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap[i] = nodes.len() as u32;
                nodes.push(Node {
                    code: self.codes[i],
                    fitness: self.fitness[i],
                    variance: self.variance[i],
                });
            }
        }
        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (i, &k) in keep.iter().enumerate() {
            if k {
                targets.extend(
                    self.out_neighbors(i)
                        .iter()
                        .map(|&v| remap[v as usize])
                        .filter(|&v| v != ABSENT),
                );
                offsets.push(targets.len());
            }
        }
        Landscape::from_parts(self.space.clone(), nodes, offsets, targets)
    }

    /// Same genotypes with new fitness values; edges are recomputed.
    pub fn with_fitness(&self, fitness: Vec<f64>) -> Result<Landscape> {
        if fitness.len() != self.node_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} fitness values, got {}",
                self.node_count(),
                fitness.len()
            )));
        }
        let nodes = (0..self.node_count())
            .map(|i| Node {
                code: self.codes[i],
                fitness: fitness[i],
                variance: self.variance[i],
            })
            .collect();
        Landscape::build(self.space.clone(), nodes)
    }
}

#[derive(Debug, Default)]
pub(crate) struct BasinScratch {
    mark: Vec<u32>,
    stamp: u32,
    stack: Vec<u32>,
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn binary_landscape(values: &[(&str, f64)]) -> Landscape {
        let records: Vec<VariantRecord> = values
            .iter()
            .map(|(s, f)| VariantRecord::from_str_seq(s, *f))
            .collect();
        let n = values[0].0.len();
        let space = SequenceSpace::uniform(Alphabet::Binary, n).unwrap();
        Landscape::from_records(&records, &AlphabetChoice::Space(space)).unwrap()
    }

    pub fn l1() -> Landscape {
        binary_landscape(&[("00", 0.0), ("01", 1.0), ("10", 1.0), ("11", 0.5)])
    }
    pub fn l2() -> Landscape {
        binary_landscape(&[("00", 0.0), ("01", 1.0), ("10", 2.0), ("11", 3.0)])
    }
    pub fn l5() -> Landscape {
        binary_landscape(&[("00", 0.0), ("01", 1.0), ("10", 2.0), ("11", 5.0)])
    }
    pub fn l6() -> Landscape {
        binary_landscape(&[("00", 2.0), ("01", 0.0), ("10", 1.0), ("11", 3.0)])
    }
    pub fn l7() -> Landscape {
        binary_landscape(&[("00", 0.0), ("01", 1.0), ("10", 0.5), ("11", 3.0)])
    }
    pub fn l8() -> Landscape {
        binary_landscape(&[("00", 0.0), ("01", 0.05), ("10", 1.0), ("11", 1.02)])
    }
    pub fn constant() -> Landscape {
        binary_landscape(&[("00", 1.0), ("01", 1.0), ("10", 1.0), ("11", 1.0)])
    }

    pub fn code(l: &Landscape, s: &str) -> GenotypeCode {
        let sym: Vec<String> = s.chars().map(|c| c.to_string()).collect();
        l.space().encode(&sym).unwrap()
    }

    pub fn node(l: &Landscape, s: &str) -> usize {
        l.node_of(code(l, s)).unwrap()
    }

    pub fn name(l: &Landscape, node: usize) -> String {
        l.space().format(l.code(node), "")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use std::collections::HashSet;

    fn edge_names(l: &Landscape) -> BTreeSet<(String, String)> {
        l.edges()
            .into_iter()
            .map(|(a, b)| (l.space().format(a, ""), l.space().format(b, "")))
            .collect()
    }

    fn set(pairs: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn ingest_complete_binary() {
        let recs: Vec<_> = [("00", 0.0), ("01", 1.0), ("10", 1.0), ("11", 0.5)]
            .iter()
            .map(|(s, f)| VariantRecord::from_str_seq(s, *f))
            .collect();
        let ing = ingest(&recs, &AlphabetChoice::Infer).unwrap();
        assert_eq!(ing.space.sizes(), vec![2, 2]);
        assert_eq!(ing.nodes.len(), 4);
        assert_eq!(ing.report.completeness, 1.0);
    }

    #[test]
    fn ingest_drops_identical_duplicates() {
        let recs: Vec<_> = [("00", 0.0), ("01", 1.0), ("01", 1.0), ("11", 0.5)]
            .iter()
            .map(|(s, f)| VariantRecord::from_str_seq(s, *f))
            .collect();
        let ing = ingest(&recs, &AlphabetChoice::Infer).unwrap();
        assert_eq!(ing.nodes.len(), 3);
        assert_eq!(ing.report.duplicates_dropped, 1);
    }

    #[test]
    fn ingest_rejects_conflicts_and_bad_rows() {
        let recs = vec![
            VariantRecord::from_str_seq("00", 0.0),
            VariantRecord::from_str_seq("01", 1.0),
            VariantRecord::from_str_seq("01", 2.0),
        ];
        assert!(matches!(
            ingest(&recs, &AlphabetChoice::Infer),
            Err(Error::ConflictingDuplicate { .. })
        ));
        assert!(matches!(
            ingest(&[], &AlphabetChoice::Infer),
            Err(Error::EmptyInput)
        ));
        let ragged = vec![
            VariantRecord::from_str_seq("00", 0.0),
            VariantRecord::from_str_seq("0", 1.0),
        ];
        assert!(matches!(
            ingest(&ragged, &AlphabetChoice::Infer),
            Err(Error::LengthMismatch { .. })
        ));
        let nan = vec![
            VariantRecord::from_str_seq("00", 0.0),
            VariantRecord::from_str_seq("01", f64::NAN),
        ];
        assert!(matches!(
            ingest(&nan, &AlphabetChoice::Infer),
            Err(Error::NonFiniteFitness { row: 1 })
        ));
    }

    #[test]
    fn ingest_preset_rejects_foreign_symbols() {
        let recs = vec![
            VariantRecord::from_str_seq("AC", 0.0),
            VariantRecord::from_str_seq("AX", 1.0),
        ];
        assert!(matches!(
            ingest(&recs, &AlphabetChoice::Preset(Alphabet::Dna)),
            Err(Error::UnknownAllele { locus: 1, .. })
        ));
    }

    #[test]
    fn ingest_infer_drops_monomorphic_loci() {
        let recs = vec![
            VariantRecord::from_str_seq("A0C", 0.0),
            VariantRecord::from_str_seq("A1C", 1.0),
            VariantRecord::from_str_seq("A0G", 1.0),
        ];
        let ing = ingest(&recs, &AlphabetChoice::Infer).unwrap();
        assert_eq!(ing.space.n_loci(), 2);
        assert_eq!(ing.report.monomorphic_loci, vec![0]);
        assert_eq!(ing.report.completeness, 0.75);
    }

    #[test]
    fn build_edges_l2() {
        let l = l2();
        assert_eq!(
            edge_names(&l),
            set(&[("00", "01"), ("00", "10"), ("01", "11"), ("10", "11")])
        );
    }

    #[test]
    fn build_edges_l1() {
        let l = l1();
        assert_eq!(
            edge_names(&l),
            set(&[("00", "01"), ("00", "10"), ("11", "01"), ("11", "10")])
        );
    }

    #[test]
    fn build_single_record() {
        let l = binary_landscape(&[("01", 3.0)]);
        assert_eq!(l.node_count(), 1);
        assert_eq!(l.edge_count(), 0);
    }

    #[test]
    fn optima_examples() {
        let l = l1();
        let o = l.local_optima();
        let names: HashSet<String> = o.local_optima.iter().map(|&i| name(&l, i)).collect();
        assert_eq!(names, ["01", "10"].iter().map(|s| s.to_string()).collect());
        assert_eq!(name(&l, o.global_optimum), "01");
        assert_eq!(o.global_tie_count, 2);

        let l = l2();
        let o = l.local_optima();
        assert_eq!(o.local_optima, vec![node(&l, "11")]);
        assert_eq!(o.global_tie_count, 1);

        assert_eq!(constant().local_optima().local_optima.len(), 4);
    }

    #[test]
    fn greedy_walk_examples() {
        let l = l2();
        let w = l.greedy_walk(code(&l, "00")).unwrap();
        assert_eq!(l.space().format(w.endpoint, ""), "11");
        assert_eq!(w.steps, 2);
        assert_eq!(l.greedy_successor(node(&l, "00")), Some(node(&l, "10")));

        let l = l1();
        let w = l.greedy_walk(code(&l, "00")).unwrap();
        assert_eq!(l.space().format(w.endpoint, ""), "01");
        let w = l.greedy_walk(code(&l, "10")).unwrap();
        assert_eq!(l.space().format(w.endpoint, ""), "10");
        assert_eq!(w.steps, 0);

        let missing = binary_landscape(&[("00", 0.0), ("01", 1.0)]);
        assert!(matches!(
            missing.greedy_walk(code(&missing, "11")),
            Err(Error::StartNotFound(_))
        ));
    }

    #[test]
    fn stochastic_walk_examples() {
        let l = l2();
        for seed in 0..50 {
            let w = l.stochastic_walk(code(&l, "00"), seed).unwrap();
            assert_eq!(l.space().format(w.endpoint, ""), "11");
        }
        let l = l1();
        let runs = 10_000;
        let hits01 = (0..runs)
            .filter(|&s| {
                let w = l.stochastic_walk(code(&l, "00"), s).unwrap();
                l.space().format(w.endpoint, "") == "01"
            })
            .count();
        let freq = hits01 as f64 / runs as f64;
        assert!((freq - 0.5).abs() <= 0.02, "freq {freq}");
        let w = l.stochastic_walk(code(&l, "10"), 3).unwrap();
        assert_eq!(w.steps, 0);
        assert_eq!(w.endpoint, w.start);
        // reproducible
        assert_eq!(
            l.stochastic_walk(code(&l, "00"), 99).unwrap(),
            l.stochastic_walk(code(&l, "00"), 99).unwrap()
        );
    }

    #[test]
    fn accessible_basin_examples() {
        let l = l1();
        let basin: HashSet<String> = l
            .accessible_basin(node(&l, "01"))
            .unwrap()
            .into_iter()
            .map(|i| name(&l, i))
            .collect();
        assert_eq!(
            basin,
            ["00", "11", "01"].iter().map(|s| s.to_string()).collect()
        );
        assert!(matches!(
            l.accessible_basin(node(&l, "00")),
            Err(Error::NotAnOptimum(_))
        ));
        let l = l2();
        assert_eq!(l.accessible_basin(node(&l, "11")).unwrap().len(), 4);
        let c = constant();
        for i in 0..4 {
            assert_eq!(c.accessible_basin(i).unwrap(), vec![i]);
        }
        let mut scratch = BasinScratch::default();
        assert_eq!(l.ancestor_count(node(&l, "11"), &mut scratch), 4);
        let l = l1();
        assert_eq!(l.ancestor_count(node(&l, "01"), &mut scratch), 3);
        assert_eq!(l.ancestor_count(node(&l, "10"), &mut scratch), 3);
    }

    #[test]
    fn greedy_basin_examples() {
        let sizes = |l: &Landscape| -> Vec<(String, usize)> {
            l.greedy_basins()
                .sizes
                .iter()
                .map(|&(o, s)| (name(l, o), s))
                .collect()
        };
        let mut s = sizes(&l1());
        s.sort();
        assert_eq!(s, vec![("01".to_string(), 3), ("10".to_string(), 1)]);
        assert_eq!(sizes(&l2()), vec![("11".to_string(), 4)]);
        let mut s = sizes(&l6());
        s.sort();
        assert_eq!(s, vec![("00".to_string(), 1), ("11".to_string(), 3)]);
    }

    #[test]
    fn induced_matches_rebuild() {
        let l = l2();
        let keep = [true, false, true, true];
        let a = l.induced(&keep);
        let nodes: Vec<Node> = l
            .nodes()
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(n, _)| n)
            .collect();
        let b = Landscape::build(l.space().clone(), nodes).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.codes(), b.codes());
    }
}
