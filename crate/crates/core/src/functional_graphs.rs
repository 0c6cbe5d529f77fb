//! Finite and symbolic self-maps viewed through their functional graphs.
//!
//! A self-map `f` of `{0, .., n-1}` is the directed graph with edges `v -> f(v)`.
//! Its weakly connected components are the orbits of `f`; every finite
//! component is "rho"-shaped: one cycle with in-trees hanging off it.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A self-map of `0..n` given by its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct FunctionalGraph {
    n: usize,
    image: Vec<usize>,
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    image: Vec<usize>,
}

impl TryFrom<RawGraph> for FunctionalGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        if raw.image.len() != raw.n {
            return Err(Error::TableLength {
                expected: raw.n,
                got: raw.image.len(),
            });
        }
        FunctionalGraph::new(raw.image)
    }
}

impl FunctionalGraph {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if let Some((vertex, &image)) = image.iter().enumerate().find(|(_, &w)| w >= n) {
            return Err(Error::ImageOutOfRange { vertex, image, n });
        }
        Ok(Self { n, image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            image: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, value: usize) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &FunctionalGraph) -> FunctionalGraph {
        assert_eq!(self.n, other.n, "composing maps on different sets");
        FunctionalGraph {
            n: self.n,
            image: other.image.iter().map(|&w| self.image[w]).collect(),
        }
    }

    pub fn square(&self) -> FunctionalGraph {
        self.compose(self)
    }

    /// The `k`-fold composition `f^k`; `f^0` is the identity.
    pub fn iterate(&self, k: u64) -> FunctionalGraph {
        let mut result = FunctionalGraph::identity(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = base.compose(&result);
            }
            base = base.square();
            k >>= 1;
        }
        result
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &w in &self.image {
            deg[w] += 1;
        }
        deg
    }

    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut pre = vec![Vec::new(); self.n];
        for (v, &w) in self.image.iter().enumerate() {
            pre[w].push(v);
        }
        pre
    }

    pub fn is_injective(&self) -> bool {
        self.in_degrees().iter().all(|&d| d <= 1)
    }

    /// A fixed point with no other preimage.
    pub fn is_isolated_fixed_point(&self, v: usize) -> bool {
        self.image[v] == v && self.image.iter().enumerate().all(|(u, &w)| w != v || u == v)
    }

    /// Vertices lying on cycles.
    pub fn cyclic_vertices(&self) -> Vec<bool> {
        // Peel off vertices of in-degree zero; what remains is the union of cycles.
        let mut deg = self.in_degrees();
        let mut on_cycle = vec![true; self.n];
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| deg[v] == 0).collect();
        while let Some(v) = stack.pop() {
            on_cycle[v] = false;
            let w = self.image[v];
            deg[w] -= 1;
            if deg[w] == 0 {
                stack.push(w);
            }
        }
        on_cycle
    }

    pub fn components(&self) -> ComponentPartition {
        let mut uf = UnionFind::new(self.n);
        for (v, &w) in self.image.iter().enumerate() {
            uf.union(v, w);
        }
        let mut relabel = HashMap::new();
        let labels: Vec<usize> = (0..self.n)
            .map(|v| {
                let root = uf.find(v);
                let next = relabel.len();
                *relabel.entry(root).or_insert(next)
            })
            .collect();
        ComponentPartition {
            count: relabel.len(),
            labels,
        }
    }

    /// A bijection `φ: C1 → C2` with `φ∘f = f∘φ`, as `(x, φ(x))` pairs sorted by `x`.
    pub fn component_isomorphism(
        &self,
        partition: &ComponentPartition,
        c1: usize,
        c2: usize,
    ) -> Result<Option<Vec<(usize, usize)>>> {
        for c in [c1, c2] {
            if c >= partition.count {
                return Err(Error::InvalidComponent(c));
            }
        }
        if c1 == c2 {
            return Err(Error::Precondition("component ids must differ".into()));
        }
        let shape = ComponentShapes::new(self, partition);
        Ok(shape.isomorphism(self, c1, c2))
    }

    /// Square root of a map whose graph has exactly two isomorphic components.
    pub fn square_root_two_components(&self) -> Result<FunctionalGraph> {
        let partition = self.components();
        if partition.count != 2 {
            return Err(Error::Precondition(format!(
                "expected exactly two components, found {}",
                partition.count
            )));
        }
        let phi = self
            .component_isomorphism(&partition, 0, 1)?
            .ok_or_else(|| Error::Precondition("the two components are not isomorphic".into()))?;
        let mut image = vec![usize::MAX; self.n];
        self.pair_components(&phi, &mut image);
        FunctionalGraph::new(image)
    }

    /// `g = φ` on `C1`, `g = f∘φ⁻¹` on `C2`.
    fn pair_components(&self, phi: &[(usize, usize)], image: &mut [usize]) {
        for &(x, y) in phi {
            image[x] = y;
            image[y] = self.image[x];
        }
    }

    /// Square root built by pairing isomorphic components; isolated fixed
    /// points map to themselves. `None` when some isomorphism class (other than
    /// isolated fixed points) has odd size — that only means this sufficient
    /// test failed.
    pub fn square_root_paired(&self) -> Option<FunctionalGraph> {
        let partition = self.components();
        let shapes = ComponentShapes::new(self, &partition);
        let members = partition.members();
        let mut image = vec![usize::MAX; self.n];
        let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (c, verts) in members.iter().enumerate() {
            if verts.len() == 1 && self.image[verts[0]] == verts[0] {
                image[verts[0]] = verts[0];
                continue;
            }
            classes.entry(shapes.signature(c)).or_default().push(c);
        }
        for comps in classes.values() {
            if comps.len() % 2 == 1 {
                return None;
            }
            for pair in comps.chunks(2) {
                let phi = shapes
                    .isomorphism(self, pair[0], pair[1])
                    .expect("components with equal signatures are isomorphic");
                self.pair_components(&phi, &mut image);
            }
        }
        Some(FunctionalGraph::new(image).expect("constructed root is a valid table"))
    }

    /// Cycle counts of an injective (hence bijective) finite map.
    pub fn multiplicity_sequence(&self) -> Result<OrbitInventory> {
        if !self.is_injective() {
            let deg = self.in_degrees();
            let v = deg.iter().position(|&d| d > 1).unwrap_or(0);
            return Err(Error::NotInjective(format!("vertex {v} has {} preimages", deg[v])));
        }
        let mut inventory = OrbitInventory::default();
        let mut seen = vec![false; self.n];
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                v = self.image[v];
                len += 1;
            }
            inventory.add_cycles(len, 1);
        }
        Ok(inventory)
    }

    /// A witness that Case (i) of the finite non-existence test applies.
    pub fn t3_check_finite(&self) -> Option<T3FiniteCertificate> {
        let deg = self.in_degrees();
        let crowded: Vec<usize> = (0..self.n).filter(|&v| deg[v] > 1).collect();
        let candidates: Vec<usize> = match crowded.len() {
            0 => (0..self.n).collect(),
            1 => crowded,
            _ => return None,
        };
        let sq = self.square();
        candidates.into_iter().find_map(|x0| {
            if self.image[x0] == x0 {
                return None;
            }
            let preimage2: Vec<usize> = (0..self.n).filter(|&y| sq.image[y] == x0).collect();
            (preimage2.len() > 1).then(|| T3FiniteCertificate {
                x0,
                y0: self.image[x0],
                preimage2,
                case_tag: T3Case::CaseI,
            })
        })
    }

    /// Every `g` with `g∘g = self`, in lexicographic order of image tables.
    pub fn brute_force_square_roots(
        &self,
        limit: Option<usize>,
        options: BruteForceOptions,
    ) -> Result<Vec<FunctionalGraph>> {
        if options.pruned {
            Ok(self.pruned_roots(limit))
        } else {
            if self.n > options.guard {
                return Err(Error::GuardExceeded {
                    n: self.n,
                    guard: options.guard,
                });
            }
            Ok(self.enumerated_roots(limit))
        }
    }

    fn enumerated_roots(&self, limit: Option<usize>) -> Vec<FunctionalGraph> {
        let n = self.n;
        let cap = limit.unwrap_or(usize::MAX);
        let mut out = Vec::new();
        let mut g = vec![0usize; n];
        loop {
            if out.len() >= cap {
                break;
            }
            if (0..n).all(|v| g[g[v]] == self.image[v]) {
                out.push(FunctionalGraph { n, image: g.clone() });
            }
            // odometer, last coordinate fastest
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                g[i] += 1;
                if g[i] < n {
                    break;
                }
                g[i] = 0;
            }
        }
        out
    }

    fn pruned_roots(&self, limit: Option<usize>) -> Vec<FunctionalGraph> {
        let cap = limit.unwrap_or(usize::MAX);
        let mut out = Vec::new();
        let mut g = vec![usize::MAX; self.n];
        self.backtrack(0, &mut g, &mut out, cap);
        out
    }

    fn backtrack(&self, i: usize, g: &mut Vec<usize>, out: &mut Vec<FunctionalGraph>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if i == self.n {
            out.push(FunctionalGraph {
                n: self.n,
                image: g.clone(),
            });
            return;
        }
        for w in 0..self.n {
            g[i] = w;
            // g(g(i)) once both are known
            let forward_ok = if w == i {
                w == self.image[i]
            } else {
                g[w] == usize::MAX || g[w] == self.image[i]
            };
            // earlier v with g(v) = i now have g(g(v)) = w
            let backward_ok = (0..i).all(|v| g[v] != i || w == self.image[v]);
            if forward_ok && backward_ok {
                self.backtrack(i + 1, g, out, cap);
            }
        }
        g[i] = usize::MAX;
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BruteForceOptions {
    /// Largest `n` accepted by full enumeration (`n^n` candidates).
    pub guard: usize,
    /// Backtracking that prunes as soon as `g(g(v)) ≠ f(v)` is decided.
    pub pruned: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self {
            guard: 6,
            pruned: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    pub labels: Vec<usize>,
    pub count: usize,
}

impl ComponentPartition {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Canonical forms of the rooted in-trees and cycles of every component.
struct ComponentShapes {
    /// Interned canonical id of the in-tree rooted at each vertex
    /// (children are the non-cyclic preimages).
    tree_id: Vec<usize>,
    /// Cycle of each component, starting from its smallest vertex.
    cycles: Vec<Vec<usize>>,
    tree_children: Vec<Vec<usize>>,
}

impl ComponentShapes {
    fn new(f: &FunctionalGraph, partition: &ComponentPartition) -> Self {
        let on_cycle = f.cyclic_vertices();
        let mut tree_children = vec![Vec::new(); f.n];
        for (v, &w) in f.image.iter().enumerate() {
            if !on_cycle[v] {
                tree_children[w].push(v);
            }
        }
        // Post-order over the in-forest: process leaves upward.
        let mut tree_id = vec![usize::MAX; f.n];
        let mut intern: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut pending: Vec<usize> = tree_children.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..f.n).filter(|&v| pending[v] == 0).collect();
        while let Some(v) = stack.pop() {
            let mut key: Vec<usize> = tree_children[v].iter().map(|&c| tree_id[c]).collect();
            key.sort_unstable();
            let next = intern.len();
            tree_id[v] = *intern.entry(key).or_insert(next);
            if !on_cycle[v] {
                let w = f.image[v];
                pending[w] -= 1;
                if pending[w] == 0 {
                    stack.push(w);
                }
            }
        }
        let mut cycles = vec![Vec::new(); partition.count];
        for v in 0..f.n {
            let c = partition.labels[v];
            if on_cycle[v] && cycles[c].is_empty() {
                let mut cyc = vec![v];
                let mut w = f.image[v];
                while w != v {
                    cyc.push(w);
                    w = f.image[w];
                }
                cycles[c] = cyc;
            }
        }
        Self {
            tree_id,
            cycles,
            tree_children,
        }
    }

    fn cycle_ids(&self, c: usize) -> Vec<usize> {
        self.cycles[c].iter().map(|&v| self.tree_id[v]).collect()
    }

    /// Lexicographically least rotation of the cycle's tree ids.
    fn signature(&self, c: usize) -> Vec<usize> {
        let ids = self.cycle_ids(c);
        (0..ids.len())
            .map(|r| ids[r..].iter().chain(&ids[..r]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    fn isomorphism(&self, f: &FunctionalGraph, c1: usize, c2: usize) -> Option<Vec<(usize, usize)>> {
        let a = self.cycle_ids(c1);
        let b = self.cycle_ids(c2);
        if a.len() != b.len() {
            return None;
        }
        let len = a.len();
        let rotation = (0..len).find(|&r| (0..len).all(|i| a[i] == b[(i + r) % len]))?;
        let mut phi = Vec::new();
        for i in 0..len {
            let x = self.cycles[c1][i];
            let y = self.cycles[c2][(i + rotation) % len];
            self.match_trees(x, y, &mut phi);
        }
        phi.sort_unstable();
        debug_assert!(phi.iter().all(|&(x, y)| {
            let fx = f.image[x];
            phi.binary_search_by_key(&fx, |p| p.0)
                .map(|k| phi[k].1 == f.image[y])
                .unwrap_or(false)
        }));
        Some(phi)
    }

    fn match_trees(&self, x: usize, y: usize, phi: &mut Vec<(usize, usize)>) {
        phi.push((x, y));
        let mut xs = self.tree_children[x].clone();
        let mut ys = self.tree_children[y].clone();
        xs.sort_by_key(|&v| (self.tree_id[v], v));
        ys.sort_by_key(|&v| (self.tree_id[v], v));
        for (&cx, &cy) in xs.iter().zip(&ys) {
            self.match_trees(cx, cy, phi);
        }
    }
}

/// A multiplicity; infinite counts are treated as even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn is_even(self) -> bool {
        match self {
            Multiplicity::Finite(k) => k % 2 == 0,
            Multiplicity::Infinite => true,
        }
    }

    fn add(self, k: u64) -> Self {
        match self {
            Multiplicity::Finite(c) => Multiplicity::Finite(c + k),
            Multiplicity::Infinite => Multiplicity::Infinite,
        }
    }
}

impl Default for Multiplicity {
    fn default() -> Self {
        Multiplicity::Finite(0)
    }
}

impl std::fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::Infinite => write!(f, "∞"),
        }
    }
}

/// Multiplicity sequence `(m_1, m_2, …, m_+, m)` of an injective map.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInventory {
    /// `d ↦ m_d` for cycles of length `d ≥ 1`; absent keys are zero.
    pub cycles: BTreeMap<usize, Multiplicity>,
    pub m_plus: Multiplicity,
    pub m_bi: Multiplicity,
}

impl OrbitInventory {
    pub fn add_cycles(&mut self, d: usize, k: u64) {
        assert!(d >= 1, "cycle length must be positive");
        let slot = self.cycles.entry(d).or_default();
        *slot = slot.add(k);
    }

    pub fn cycle_count(&self, d: usize) -> Multiplicity {
        self.cycles.get(&d).copied().unwrap_or_default()
    }

    /// The first count that breaks the square-root criterion, if any.
    pub fn square_root_obstruction(&self) -> Option<String> {
        for (&d, &m) in &self.cycles {
            if d % 2 == 0 && !m.is_even() {
                return Some(format!("m_{d} = {m} is odd"));
            }
        }
        if !self.m_plus.is_even() {
            return Some(format!("m_+ = {} is odd", self.m_plus));
        }
        if !self.m_bi.is_even() {
            return Some(format!("m = {} is odd", self.m_bi));
        }
        None
    }

    /// Injective maps have a square root iff every even-length cycle count,
    /// `m_+` and `m` are even.
    pub fn t2a_has_square_root(&self) -> bool {
        self.square_root_obstruction().is_none()
    }
}

/// Orbit shapes of an injective map: cycles on `Z_d`, one-sided shifts on
/// `Z_+`, and two-sided translations on `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitKind {
    Cycle(usize),
    Unilateral,
    Bilateral,
}

/// An element `(orbit, index)` of a symbolic orbit space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Address {
    pub orbit: usize,
    pub index: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicOrbitSpace {
    pub orbits: Vec<OrbitKind>,
}

impl SymbolicOrbitSpace {
    pub fn new(orbits: Vec<OrbitKind>) -> Result<Self> {
        if orbits.iter().any(|k| matches!(k, OrbitKind::Cycle(0))) {
            return Err(Error::Precondition("cycle length must be positive".into()));
        }
        Ok(Self { orbits })
    }

    pub fn inventory(&self) -> OrbitInventory {
        let mut inv = OrbitInventory::default();
        for kind in &self.orbits {
            match kind {
                OrbitKind::Cycle(d) => inv.add_cycles(*d, 1),
                OrbitKind::Unilateral => inv.m_plus = inv.m_plus.add(1),
                OrbitKind::Bilateral => inv.m_bi = inv.m_bi.add(1),
            }
        }
        inv
    }

    pub fn contains(&self, a: Address) -> bool {
        match self.orbits.get(a.orbit) {
            Some(OrbitKind::Cycle(d)) => (0..*d as i64).contains(&a.index),
            Some(OrbitKind::Unilateral) => a.index >= 0,
            Some(OrbitKind::Bilateral) => true,
            None => false,
        }
    }

    /// The canonical map `(o, k) ↦ (o, k+1)`, reduced mod `d` on cycles.
    pub fn successor(&self, a: Address) -> Address {
        let index = match self.orbits[a.orbit] {
            OrbitKind::Cycle(d) => (a.index + 1).rem_euclid(d as i64),
            _ => a.index + 1,
        };
        Address { orbit: a.orbit, index }
    }

    /// Builds a square root of the canonical map. Odd cycles use the
    /// `(d+1)/2` shift; everything else is paired with an orbit of the same
    /// kind.
    pub fn t2a_construct_root(&self) -> Result<RootRule> {
        if let Some(why) = self.inventory().square_root_obstruction() {
            return Err(Error::CriterionFailed(why));
        }
        let mut rules = vec![OrbitRule::Shift { by: 0 }; self.orbits.len()];
        let mut waiting: HashMap<OrbitKind, usize> = HashMap::new();
        for (o, &kind) in self.orbits.iter().enumerate() {
            if let OrbitKind::Cycle(d) = kind {
                if d % 2 == 1 {
                    rules[o] = OrbitRule::Shift { by: (d as i64 + 1) / 2 };
                    continue;
                }
            }
            match waiting.remove(&kind) {
                Some(first) => {
                    rules[first] = OrbitRule::ToPartner { partner: o };
                    rules[o] = OrbitRule::BackToPartner { partner: first };
                }
                None => {
                    waiting.insert(kind, o);
                }
            }
        }
        debug_assert!(waiting.is_empty());
        Ok(RootRule {
            space: self.clone(),
            rules,
        })
    }
}

/// Per-orbit description of a root of the canonical map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitRule {
    /// `(o, k) ↦ (o, k + by mod d)` on an odd cycle.
    Shift { by: i64 },
    /// `(o, k) ↦ (partner, k)`: the isomorphism `φ`.
    ToPartner { partner: usize },
    /// `(o, k) ↦ (partner, k + 1)`: the map `f∘φ⁻¹`.
    BackToPartner { partner: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootRule {
    pub space: SymbolicOrbitSpace,
    pub rules: Vec<OrbitRule>,
}

impl RootRule {
    pub fn apply(&self, a: Address) -> Address {
        match self.rules[a.orbit] {
            OrbitRule::Shift { by } => {
                let OrbitKind::Cycle(d) = self.space.orbits[a.orbit] else {
                    unreachable!("shift rules only sit on cycles")
                };
                Address {
                    orbit: a.orbit,
                    index: (a.index + by).rem_euclid(d as i64),
                }
            }
            OrbitRule::ToPartner { partner } => Address {
                orbit: partner,
                index: a.index,
            },
            OrbitRule::BackToPartner { partner } => self.space.successor(Address {
                orbit: partner,
                index: a.index,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum T3Case {
    CaseI,
}

/// Witness for Case (i): `f(x0) ≠ x0`, `#f^{-2}(x0) > 1`, and every other
/// point has at most one preimage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct T3FiniteCertificate {
    pub x0: usize,
    pub y0: usize,
    pub preimage2: Vec<usize>,
    pub case_tag: T3Case,
}

impl T3FiniteCertificate {
    /// Re-checks every clause against `f`.
    pub fn verify(&self, f: &FunctionalGraph) -> bool {
        if self.x0 >= f.n || f.image[self.x0] != self.y0 || self.y0 == self.x0 {
            return false;
        }
        let sq = f.square();
        let pre2: Vec<usize> = (0..f.n).filter(|&y| sq.image[y] == self.x0).collect();
        let deg = f.in_degrees();
        pre2 == self.preimage2
            && pre2.len() > 1
            && (0..f.n).all(|x| x == self.x0 || deg[x] <= 1)
    }
}
