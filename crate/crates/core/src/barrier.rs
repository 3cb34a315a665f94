//! Energy cost of Pauli paths and the generalized energy barrier ε̄.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::model::{Energy, Model, Syndrome, TorusLayout};
use crate::par;
use crate::pauli::{Letter, PauliWord, WeightOneSet};

/// Size gates for exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Max N for the all-targets exact barrier.
    pub exact_barrier_n: usize,
    /// Max N for a single-target exact cost.
    pub exact_cost_n: usize,
    /// Max N for enumerating all 4^N targets under a family.
    pub enumerate_n: usize,
    /// Max N for path tables used by C(β) and the support bound.
    pub path_table_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { exact_barrier_n: 5, exact_cost_n: 6, enumerate_n: 10, path_table_n: 3 }
    }
}

fn gate(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        return Err(Error::SizeLimit { what, size, limit });
    }
    Ok(())
}

/// Weight-one decomposition `α₁ … α_T` of a target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliPath {
    target: PauliWord,
    steps: Vec<PauliWord>,
}

impl PauliPath {
    pub fn new(target: PauliWord, steps: Vec<PauliWord>) -> Result<Self> {
        let mut prefix = PauliWord::identity(target.n());
        let mut edges = BTreeSet::new();
        for (t, s) in steps.iter().enumerate() {
            if s.n() != target.n() {
                return Err(Error::LengthMismatch(target.n(), s.n()));
            }
            if s.weight() != 1 {
                return Err(Error::NotWeightOne(t));
            }
            if !edges.insert((prefix.clone(), s.clone())) {
                return Err(Error::PathLoop(t));
            }
            prefix.compose_assign(s);
        }
        if prefix != target {
            return Err(Error::PathMismatch);
        }
        Ok(Self { target, steps })
    }

    pub fn target(&self) -> &PauliWord {
        &self.target
    }

    pub fn steps(&self) -> &[PauliWord] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `η̄_1, …, η̄_T`.
    pub fn prefixes(&self) -> Vec<PauliWord> {
        let mut p = PauliWord::identity(self.target.n());
        self.steps
            .iter()
            .map(|s| {
                p.compose_assign(s);
                p.clone()
            })
            .collect()
    }

    /// True when no site is addressed twice.
    pub fn is_single_visit(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.steps.iter().all(|s| seen.insert(s.support().next().unwrap_or(0)))
    }
}

/// A rule assigning one Pauli path to every target.
#[derive(Clone, Debug)]
pub enum PathFamily {
    /// Apply each site's letter once, visiting sites in this order.
    FixedOrder(Vec<usize>),
    /// Lattice strings on a torus: Z component first, then X component.
    CssString(TorusLayout),
    Explicit(BTreeMap<PauliWord, PauliPath>),
}

impl PathFamily {
    pub fn fixed_natural(n: usize) -> Self {
        PathFamily::FixedOrder((0..n).collect())
    }

    pub fn name(&self) -> String {
        match self {
            PathFamily::FixedOrder(_) => "fixed_order".into(),
            PathFamily::CssString(l) => format!("css_string_{}x{}", l.lx, l.ly),
            PathFamily::Explicit(m) => format!("explicit_{}", m.len()),
        }
    }

    /// Rejects families whose shape does not fit `model`.
    pub fn check(&self, model: &Model) -> Result<()> {
        let n = model.n();
        match self {
            PathFamily::FixedOrder(order) => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                if sorted != (0..n).collect::<Vec<_>>() {
                    return Err(Error::FamilyMismatch(format!("ordering is not a permutation of 0..{n}")));
                }
            }
            PathFamily::CssString(layout) => {
                if layout.n() != n {
                    return Err(Error::FamilyMismatch(format!("torus needs {} qubits, model has {n}", layout.n())));
                }
                let mut want = layout.generators();
                let mut have = model.generators().to_vec();
                want.sort();
                have.sort();
                if want != have {
                    return Err(Error::FamilyMismatch("model is not the toric code on this torus".into()));
                }
            }
            PathFamily::Explicit(paths) => {
                if let Some(p) = paths.values().find(|p| p.target().n() != n) {
                    return Err(Error::LengthMismatch(n, p.target().n()));
                }
            }
        }
        Ok(())
    }

    pub fn path(&self, target: &PauliWord) -> Result<PauliPath> {
        let n = target.n();
        let steps = match self {
            PathFamily::FixedOrder(order) => order
                .iter()
                .filter(|&&s| target.letter(s) != Letter::I)
                .map(|&s| PauliWord::single(n, s, target.letter(s)))
                .collect(),
            PathFamily::CssString(layout) => css_steps(layout, target),
            PathFamily::Explicit(paths) => {
                return paths
                    .get(target)
                    .cloned()
                    .ok_or_else(|| Error::FamilyMismatch(format!("no explicit path for {target}")))
            }
        };
        PauliPath::new(target.clone(), steps)
    }
}

/// Scan-line strings: Z part on horizontal rows then vertical columns,
/// X part on vertical rows then horizontal columns.
fn css_steps(l: &TorusLayout, target: &PauliWord) -> Vec<PauliWord> {
    let n = target.n();
    let gens = l.generators();
    let mut steps = Vec::new();
    for letter in [Letter::Z, Letter::X] {
        let sites: Vec<usize> = (0..n)
            .filter(|&s| match letter {
                Letter::Z => target.z().get(s),
                _ => target.x().get(s),
            })
            .collect();
        let ends: Vec<[usize; 2]> = sites
            .iter()
            .map(|&s| {
                let a = PauliWord::single(n, s, letter);
                let mut it = gens.iter().enumerate().filter(|(_, g)| g.anticommutes(&a)).map(|(k, _)| k);
                [it.next().expect("two endpoints"), it.next().expect("two endpoints")]
            })
            .collect();
        for e in trails(gens.len(), &ends) {
            steps.push(PauliWord::single(n, sites[e], letter));
        }
    }
    steps
}

/// Edge order that covers a multigraph by greedy walks: each walk starts at
/// the smallest odd-degree node while one remains, else at the smallest
/// node with an unused edge, and always takes the smallest unused edge.
fn trails(nodes: usize, ends: &[[usize; 2]]) -> Vec<usize> {
    let mut inc: Vec<Vec<usize>> = alloc::vec![Vec::new(); nodes];
    for (e, &[a, b]) in ends.iter().enumerate() {
        inc[a].push(e);
        inc[b].push(e);
    }
    let mut used = alloc::vec![false; ends.len()];
    let mut deg: Vec<usize> = inc.iter().map(|v| v.len()).collect();
    let mut order = Vec::with_capacity(ends.len());
    while order.len() < ends.len() {
        let mut u = (0..nodes).find(|&v| deg[v] % 2 == 1).or_else(|| (0..nodes).find(|&v| deg[v] > 0)).expect("edges remain");
        while let Some(&e) = inc[u].iter().find(|&&e| !used[e]) {
            used[e] = true;
            order.push(e);
            let [a, b] = ends[e];
            deg[a] -= 1;
            deg[b] -= 1;
            u = if a == u { b } else { a };
        }
    }
    order
}

/// Integer weights `2|J_k|·den` for the cost `Σ_k 2|J_k| e_k(γ) ē_k(η)`.
#[derive(Clone, Debug)]
struct CostWeights {
    w: Vec<i64>,
    den: i64,
}

impl CostWeights {
    fn new(model: &Model) -> Self {
        Self { w: model.scaled_couplings().iter().map(|j| 2 * j.abs()).collect(), den: model.den() }
    }

    #[inline]
    fn cost(&self, prefix: &Syndrome, target: &Syndrome) -> i64 {
        let mut c = 0;
        for (i, (&a, &b)) in prefix.words().iter().zip(target.words()).enumerate() {
            let mut m = a & !b;
            while m != 0 {
                c += self.w[i * 64 + m.trailing_zeros() as usize];
                m &= m - 1;
            }
        }
        c
    }

    fn energy(&self, c: i64) -> Energy {
        Ratio::new(c, self.den)
    }
}

/// Cost and index of the bottleneck prefix (`None` for the empty path).
fn path_cost_raw(model: &Model, w: &CostWeights, path: &PauliPath) -> (i64, Option<usize>) {
    let t = model.syndrome_unchecked(path.target());
    let mut s = BitVec::zeros(model.m());
    let mut best = (0, None);
    for (i, step) in path.steps().iter().enumerate() {
        s.xor_assign(&model.syndrome_unchecked(step));
        let c = w.cost(&s, &t);
        if best.1.is_none() || c > best.0 {
            best = (c, Some(i));
        }
    }
    best
}

/// `max_t Σ_k 2|J_k| e_k(η̄_t) ē_k(η)`.
pub fn path_cost(target: &PauliWord, path: &PauliPath, model: &Model) -> Result<Energy> {
    if path.target() != target {
        return Err(Error::PathMismatch);
    }
    if target.n() != model.n() {
        return Err(Error::LengthMismatch(model.n(), target.n()));
    }
    let w = CostWeights::new(model);
    Ok(w.energy(path_cost_raw(model, &w, path).0))
}

#[derive(Clone, Debug)]
pub struct BarrierReport {
    /// ε̄, or the upper bound ε̄′ for heuristic reports.
    pub barrier: Energy,
    pub witness_target: PauliWord,
    pub witness_prefix: PauliWord,
    pub witness_path: PauliPath,
    pub per_target: Option<Vec<(PauliWord, Energy)>>,
    pub exact: bool,
    /// Every target was evaluated.
    pub exhaustive: bool,
    /// Longest path used.
    pub eta_star: usize,
    /// Every path addresses each qubit at most once.
    pub single_visit: bool,
    pub family: String,
}

/// Syndromes of all 4^N words, indexed by [`PauliWord::index`].
struct WordSyndromes {
    n: usize,
    syn: Vec<Syndrome>,
    steps: Vec<u64>,
}

impl WordSyndromes {
    fn new(model: &Model) -> Self {
        let n = model.n();
        let total = 1usize << (2 * n);
        let mut syn = Vec::with_capacity(total);
        syn.push(BitVec::zeros(model.m()));
        for idx in 1..total {
            let low = idx & idx.wrapping_neg();
            let unit = PauliWord::from_index(n, low as u64);
            let s = syn[idx ^ low].xor(&model.syndrome_unchecked(&unit));
            syn.push(s);
        }
        let steps = WeightOneSet::new(n).words().iter().map(|w| w.index()).collect();
        Self { n, syn, steps }
    }
}

/// Bottleneck Dijkstra for the min-max value, then a breadth-first pass
/// inside the nodes of cost at most that value for the shortest witness,
/// choosing the smallest step index at every position.
fn bottleneck(ws: &WordSyndromes, w: &CostWeights, target: u64) -> (i64, Vec<u8>) {
    let total = ws.syn.len();
    let t = &ws.syn[target as usize];
    let cost: Vec<i64> = ws.syn.iter().map(|s| w.cost(s, t)).collect();
    let mut dist = alloc::vec![i64::MAX; total];
    let mut heap = BinaryHeap::new();
    dist[0] = 0;
    heap.push(Reverse((0i64, 0u64)));
    while let Some(Reverse((b, u))) = heap.pop() {
        if b != dist[u as usize] {
            continue;
        }
        if u == target {
            break;
        }
        for &step in &ws.steps {
            let v = (u ^ step) as usize;
            let nb = b.max(cost[v]);
            if nb < dist[v] {
                dist[v] = nb;
                heap.push(Reverse((nb, v as u64)));
            }
        }
    }
    let best = dist[target as usize];
    let mut hops = alloc::vec![u32::MAX; total];
    let mut queue = alloc::collections::VecDeque::new();
    hops[target as usize] = 0;
    queue.push_back(target);
    while let Some(u) = queue.pop_front() {
        if u == 0 {
            break;
        }
        for &step in &ws.steps {
            let v = (u ^ step) as usize;
            if hops[v] == u32::MAX && (v == 0 || cost[v] <= best) {
                hops[v] = hops[u as usize] + 1;
                queue.push_back(v as u64);
            }
        }
    }
    let mut steps = Vec::with_capacity(hops[0] as usize);
    let mut u = 0u64;
    while u != target {
        let (s, v) = ws
            .steps
            .iter()
            .enumerate()
            .map(|(s, &st)| (s, u ^ st))
            .find(|&(_, v)| hops[v as usize] != u32::MAX && hops[v as usize] + 1 == hops[u as usize])
            .expect("target reachable below the bottleneck value");
        steps.push(s as u8);
        u = v;
    }
    (best, steps)
}

fn steps_to_path(n: usize, target: &PauliWord, steps: &[u8]) -> PauliPath {
    let w1 = WeightOneSet::new(n);
    let words = steps.iter().map(|&s| w1.words()[s as usize].clone()).collect();
    PauliPath::new(target.clone(), words).expect("bottleneck search yields a valid path")
}

/// ε̄(η) by exhaustive bottleneck search, with a witness path.
pub fn exact_energy_cost(target: &PauliWord, model: &Model, limits: &Limits) -> Result<(Energy, PauliPath)> {
    if target.n() != model.n() {
        return Err(Error::LengthMismatch(model.n(), target.n()));
    }
    gate("exact energy cost (N)", model.n(), limits.exact_cost_n)?;
    let ws = WordSyndromes::new(model);
    let w = CostWeights::new(model);
    let (c, steps) = bottleneck(&ws, &w, target.index());
    Ok((w.energy(c), steps_to_path(ws.n, target, &steps)))
}

/// ε̄ = max over all 4^N targets of the exact energy cost.
pub fn generalized_barrier_exact(model: &Model, limits: &Limits) -> Result<BarrierReport> {
    gate("exact generalized barrier (N)", model.n(), limits.exact_barrier_n)?;
    let ws = WordSyndromes::new(model);
    let w = CostWeights::new(model);
    let n = model.n();
    let results = par::map(ws.syn.len(), |i| bottleneck(&ws, &w, i as u64));
    let paths: Vec<PauliPath> =
        results.iter().enumerate().map(|(i, (_, s))| steps_to_path(n, &PauliWord::from_index(n, i as u64), s)).collect();
    let costs: Vec<i64> = results.iter().map(|r| r.0).collect();
    Ok(assemble(model, &w, paths, costs, true, true, "exact".into()))
}

fn assemble(
    model: &Model,
    w: &CostWeights,
    paths: Vec<PauliPath>,
    costs: Vec<i64>,
    exact: bool,
    exhaustive: bool,
    family: String,
) -> BarrierReport {
    let top = costs.iter().copied().max().unwrap_or(0);
    let best = (0..costs.len())
        .filter(|&i| costs[i] == top)
        .min_by_key(|&i| paths[i].target().to_string())
        .unwrap_or(0);
    let wp = paths[best].clone();
    let witness_prefix = match path_cost_raw(model, w, &wp).1 {
        Some(t) => wp.prefixes()[t].clone(),
        None => PauliWord::identity(model.n()),
    };
    BarrierReport {
        barrier: w.energy(costs[best]),
        witness_target: wp.target().clone(),
        witness_prefix,
        eta_star: paths.iter().map(|p| p.len()).max().unwrap_or(0),
        single_visit: paths.iter().all(|p| p.is_single_visit()),
        per_target: Some(paths.iter().zip(&costs).map(|(p, &c)| (p.target().clone(), w.energy(c))).collect()),
        witness_path: wp,
        exact,
        exhaustive,
        family,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Targets {
    All,
    /// Uniform seeded sample over Z₂^{2N}; never exhaustive.
    Sample { count: usize, seed: u64 },
}

/// ε̄′ = max over the requested targets of the family's path cost.
pub fn heuristic_barrier(model: &Model, family: &PathFamily, targets: Targets, limits: &Limits) -> Result<BarrierReport> {
    family.check(model)?;
    let n = model.n();
    let words: Vec<PauliWord> = match targets {
        Targets::All => {
            gate("target enumeration (N)", n, limits.enumerate_n)?;
            (0..1u64 << (2 * n)).map(|i| PauliWord::from_index(n, i)).collect()
        }
        Targets::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
            (0..count)
                .map(|_| {
                    let ls: Vec<Letter> = (0..n).map(|_| letters[rng.gen_range(0..4)]).collect();
                    PauliWord::from_letters(&ls)
                })
                .collect()
        }
    };
    if words.is_empty() {
        return Err(Error::InvalidArgument("empty target sample".into()));
    }
    let w = CostWeights::new(model);
    let results = par::map(words.len(), |i| {
        let p = family.path(&words[i])?;
        let c = path_cost_raw(model, &w, &p).0;
        Ok((p, c))
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let (paths, costs) = results.into_iter().unzip();
    Ok(assemble(model, &w, paths, costs, false, matches!(targets, Targets::All), family.name()))
}

/// A generator list that may be empty.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    pub generators: Vec<PauliWord>,
    pub couplings: Vec<Energy>,
}

impl GeneratorSet {
    /// Path cost with every generator counted (ē ≡ 1).
    pub fn path_cost(&self, path: &PauliPath) -> Energy {
        let mut best = Energy::from_integer(0);
        for p in path.prefixes() {
            let c: Energy = self
                .generators
                .iter()
                .zip(&self.couplings)
                .filter(|(g, _)| g.anticommutes(&p))
                .map(|(_, j)| Energy::from_integer(2) * if *j < Energy::from_integer(0) { -*j } else { *j })
                .sum();
            if c > best {
                best = c;
            }
        }
        best
    }
}

/// Generators commuting with `target`.
pub fn reduced_generator_set(target: &PauliWord, model: &Model) -> GeneratorSet {
    let (generators, couplings) = model
        .generators()
        .iter()
        .zip(model.couplings())
        .filter(|(g, _)| !g.anticommutes(target))
        .map(|(g, j)| (g.clone(), *j))
        .unzip();
    GeneratorSet { generators, couplings }
}

/// Max number of generators straddling a bond of the ordering.
pub fn width(model: &Model, ordering: &[usize]) -> Result<usize> {
    let n = model.n();
    PathFamily::FixedOrder(ordering.to_vec()).check(model)?;
    let mut pos = alloc::vec![0; n];
    for (p, &s) in ordering.iter().enumerate() {
        pos[s] = p;
    }
    let mut spans = Vec::new();
    for (k, g) in model.generators().iter().enumerate() {
        let ps: Vec<usize> = g.support().map(|s| pos[s]).collect();
        let (lo, hi) = (*ps.iter().min().unwrap(), *ps.iter().max().unwrap());
        if hi - lo + 1 != ps.len() {
            return Err(Error::NotOneDimensional(k));
        }
        spans.push((lo, hi));
    }
    Ok((0..n.saturating_sub(1)).map(|b| spans.iter().filter(|&&(lo, hi)| lo <= b && b < hi).count()).max().unwrap_or(0))
}

/// Paths of a family for all 4^N targets, indexed by directed edge.
#[derive(Clone, Debug)]
pub struct PathTable {
    pub n: usize,
    /// Step indices into W₁ per target index.
    pub paths: Vec<Vec<u8>>,
    /// `through[node·3N + step]`: targets whose path takes `step` from `node`.
    pub through: Vec<Vec<u32>>,
    pub eta_star: usize,
}

impl PathTable {
    pub fn new(model: &Model, family: &PathFamily, limits: &Limits) -> Result<Self> {
        family.check(model)?;
        let n = model.n();
        gate("path table (N)", n, limits.path_table_n)?;
        let total = 1usize << (2 * n);
        let mut paths = Vec::with_capacity(total);
        let mut through = alloc::vec![Vec::new(); total * 3 * n];
        let mut eta_star = 0;
        for t in 0..total {
            let p = family.path(&PauliWord::from_index(n, t as u64))?;
            let mut node = 0u64;
            let mut idx = Vec::with_capacity(p.len());
            for s in p.steps() {
                let site = s.support().next().unwrap();
                let k = WeightOneSet::position(site, s.letter(site)).unwrap();
                through[node as usize * 3 * n + k].push(t as u32);
                node ^= s.index();
                idx.push(k as u8);
            }
            eta_star = eta_star.max(idx.len());
            paths.push(idx);
        }
        Ok(Self { n, paths, through, eta_star })
    }

    pub fn step_word(&self, k: u8) -> u64 {
        WeightOneSet::new(self.n).words()[k as usize].index()
    }
}
