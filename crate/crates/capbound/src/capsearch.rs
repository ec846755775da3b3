//! Progression-free set machinery: the `PointSet` container, the verifier
//! for the condition `alpha·a1 + beta·a2 + gamma·a3 != 0` on not-all-equal
//! triples, and two searches for large such sets (exact branch-and-bound at
//! small n, randomized greedy beyond).

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ffield::{enumerate_points, is_prime, CoefficientTriple, FieldElement, Point};
use crate::{checked_cube, Error, Result};

/// A duplicate-free set of points of `F_q^n`, kept lexicographically sorted,
/// with a hash index for membership tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    modulus: u64,
    vars: usize,
    points: Vec<Point>,
    members: HashSet<Point>,
}

impl PointSet {
    pub fn empty(modulus: u64, vars: usize) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self {
            modulus,
            vars,
            points: Vec::new(),
            members: HashSet::new(),
        })
    }

    pub fn from_points(
        modulus: u64,
        vars: usize,
        points: impl IntoIterator<Item = Point>,
    ) -> Result<Self> {
        let mut set = Self::empty(modulus, vars)?;
        let mut points: Vec<Point> = points.into_iter().collect();
        points.sort();
        points.dedup();
        for p in &points {
            if p.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus, p.modulus()));
            }
            if p.dim() != vars {
                return Err(Error::DimensionMismatch(vars, p.dim()));
            }
        }
        set.members = points.iter().cloned().collect();
        set.points = points;
        Ok(set)
    }

    /// Builds from signed coordinate rows, normalizing into `[0, q)`.
    pub fn from_coords(modulus: u64, vars: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let points = rows
            .iter()
            .map(|row| {
                if row.len() != vars {
                    return Err(Error::DimensionMismatch(vars, row.len()));
                }
                Point::from_coords(modulus, row)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(modulus, vars, points)
    }

    /// The whole cube `F_q^n`, subject to the enumeration cap.
    pub fn full_cube(modulus: u64, vars: usize) -> Result<Self> {
        Self::from_points(modulus, vars, enumerate_points(modulus, vars)?)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.members.contains(p)
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// The cube minus this set, subject to the enumeration cap.
    pub fn complement(&self) -> Result<PointSet> {
        let rest = enumerate_points(self.modulus, self.vars)?
            .into_iter()
            .filter(|p| !self.contains(p));
        Self::from_points(self.modulus, self.vars, rest)
    }

    /// Image under `p -> c·p`. Collapses to a single point when `c = 0`.
    pub fn scale(&self, c: FieldElement) -> Result<PointSet> {
        let scaled = self
            .points
            .iter()
            .map(|p| p.scale(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(self.modulus, self.vars, scaled)
    }

    /// Image under `p -> p + v`.
    pub fn translate(&self, v: &Point) -> Result<PointSet> {
        let moved = self
            .points
            .iter()
            .map(|p| p.translate(v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(self.modulus, self.vars, moved)
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// On-disk shape of a set: `{"n": ..., "points": [[...]], "q": ...}`.
/// Fields are declared in serialized (sorted-key) order.
#[derive(Serialize, Deserialize)]
struct SetFile {
    n: usize,
    points: Vec<Vec<i64>>,
    q: u64,
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let repr = SetFile {
            n: self.vars,
            points: self
                .points
                .iter()
                .map(|p| p.coords().iter().map(|&c| c as i64).collect())
                .collect(),
            q: self.modulus,
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = SetFile::deserialize(deserializer)?;
        PointSet::from_coords(repr.q, repr.n, &repr.points).map_err(serde::de::Error::custom)
    }
}

/// First not-all-equal solution of `alpha·a1 + beta·a2 + gamma·a3 = 0` inside
/// the set (lexicographic pair order), or `None` if the set is
/// progression-free. Needs `gamma != 0`, which makes `a3` a function of the
/// pair; the `a1 = a2` case then forces `a3 = a1` and is skipped as trivial.
pub fn find_progression(
    set: &PointSet,
    t: &CoefficientTriple,
) -> Result<Option<(Point, Point, Point)>> {
    if t.gamma().is_zero() {
        return Err(Error::GammaZero);
    }
    if t.modulus() != set.modulus() {
        return Err(Error::ModulusMismatch(set.modulus(), t.modulus()));
    }
    for a1 in set {
        for a2 in set {
            if a1 == a2 {
                continue;
            }
            let a3 = t.third_point(a1, a2)?;
            if set.contains(&a3) {
                return Ok(Some((a1.clone(), a2.clone(), a3)));
            }
        }
    }
    Ok(None)
}

pub fn is_progression_free(set: &PointSet, t: &CoefficientTriple) -> Result<bool> {
    Ok(find_progression(set, t)?.is_none())
}

/// `{alpha·a1 + beta·a2 : a1 != a2 in A}`, deduplicated and sorted.
pub fn sigma_set(set: &PointSet, alpha: FieldElement, beta: FieldElement) -> Result<PointSet> {
    let t = CoefficientTriple::new(alpha, beta, alpha.add(beta).neg())?;
    if t.modulus() != set.modulus() {
        return Err(Error::ModulusMismatch(set.modulus(), t.modulus()));
    }
    let mut out = BTreeSet::new();
    for a1 in set {
        for a2 in set {
            if a1 != a2 {
                out.insert(t.combine(a1, a2)?);
            }
        }
    }
    PointSet::from_points(set.modulus(), set.vars(), out)
}

/// Search outcome. Fields are declared in serialized (sorted-key) order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub best_size: usize,
    pub nodes_explored: u64,
    pub optimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_used: Option<u64>,
    pub witness: PointSet,
}

/// Point-pair resolvers for the three slots of the progression equation,
/// assuming all of alpha, beta, gamma are nonzero:
///   third(a1, a2)  = -gamma^-1 (alpha·a1 + beta·a2)
///   second(a1, a3) = -beta^-1  (alpha·a1 + gamma·a3)
///   first(a2, a3)  = -alpha^-1 (beta·a2  + gamma·a3)
/// Each is a coordinatewise map `(u, v) -> c1·u + c2·v` on cube indices.
/// Dense N×N lookup tables when they fit, direct digit arithmetic otherwise.
struct PairTables {
    q: u64,
    n: usize,
    size: u32,
    coeffs: [(u64, u64); 3],
    dense: Option<[Vec<u32>; 3]>,
}

const THIRD: usize = 0;
const SECOND: usize = 1;
const FIRST: usize = 2;

const DENSE_LIMIT: u64 = 2500;

impl PairTables {
    fn new(q: u64, n: usize, t: &CoefficientTriple) -> Result<Self> {
        let size = checked_cube(q, n)?;
        let size = u32::try_from(size).map_err(|_| Error::Internal("cube exceeds u32".into()))?;
        let (alpha, beta, gamma) = (t.alpha(), t.beta(), t.gamma());
        let coeff =
            |c1: FieldElement, c2: FieldElement, slot: FieldElement| -> Result<(u64, u64)> {
                let s = slot.neg().inv()?;
                Ok((s.mul(c1).value(), s.mul(c2).value()))
            };
        let coeffs = [
            coeff(alpha, beta, gamma)?,
            coeff(alpha, gamma, beta)?,
            coeff(beta, gamma, alpha)?,
        ];
        let mut tables = Self {
            q,
            n,
            size,
            coeffs,
            dense: None,
        };
        if (size as u64) <= DENSE_LIMIT {
            let n_entries = size as usize * size as usize;
            let mut built: [Vec<u32>; 3] = [
                Vec::with_capacity(n_entries),
                Vec::with_capacity(n_entries),
                Vec::with_capacity(n_entries),
            ];
            let mut da = vec![0u64; n];
            let mut db = vec![0u64; n];
            for a in 0..size {
                tables.decode(a, &mut da);
                for b in 0..size {
                    tables.decode(b, &mut db);
                    for (which, table) in built.iter_mut().enumerate() {
                        table.push(tables.solve(which, &da, &db));
                    }
                }
            }
            tables.dense = Some(built);
        }
        Ok(tables)
    }

    fn decode(&self, idx: u32, out: &mut [u64]) {
        let mut rest = idx as u64;
        for i in (0..self.n).rev() {
            out[i] = rest % self.q;
            rest /= self.q;
        }
    }

    fn solve(&self, which: usize, da: &[u64], db: &[u64]) -> u32 {
        let (c1, c2) = self.coeffs[which];
        let mut idx = 0u64;
        for i in 0..self.n {
            let digit = (c1 * da[i] + c2 * db[i]) % self.q;
            idx = idx * self.q + digit;
        }
        idx as u32
    }

    fn get(&self, which: usize, a: u32, b: u32) -> u32 {
        if let Some(dense) = &self.dense {
            return dense[which][a as usize * self.size as usize + b as usize];
        }
        let mut da = vec![0u64; self.n];
        let mut db = vec![0u64; self.n];
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        self.solve(which, &da, &db)
    }
}

/// Incremental conflict counts: `forbid[y]` is the number of not-all-equal
/// progression triples that would exist with `y` placed in some slot and the
/// other slots filled from the current set. Zero means `y` can be added.
/// Sound only when alpha, beta, gamma are all nonzero (the degenerate cases
/// cap set size at 1 and are dispatched before this machinery).
struct ConflictCounter {
    tables: PairTables,
    forbid: Vec<u32>,
}

impl ConflictCounter {
    fn new(tables: PairTables) -> Self {
        let forbid = vec![0u32; tables.size as usize];
        Self { tables, forbid }
    }

    fn admissible(&self, x: u32) -> bool {
        self.forbid[x as usize] == 0
    }

    fn bump(&mut self, chosen: &[u32], x: u32, delta: i32) {
        for &u in chosen {
            for (a, b) in [(u, x), (x, u)] {
                for which in [THIRD, SECOND, FIRST] {
                    let y = self.tables.get(which, a, b) as usize;
                    if delta > 0 {
                        self.forbid[y] += 1;
                    } else {
                        self.forbid[y] -= 1;
                    }
                }
            }
        }
    }

    fn reset(&mut self) {
        self.forbid.fill(0);
    }
}

/// `alpha = 0` or `beta = 0` (with `gamma != 0`) makes every two-element set
/// contain a not-all-equal solution, so maximum sets are singletons.
fn is_degenerate(t: &CoefficientTriple) -> bool {
    t.alpha().is_zero() || t.beta().is_zero()
}

fn indices_to_set(q: u64, n: usize, indices: &[u32]) -> Result<PointSet> {
    PointSet::from_points(
        q,
        n,
        indices
            .iter()
            .map(|&i| Point::from_cube_index(q, n, i as u64)),
    )
}

struct Dfs {
    counter: ConflictCounter,
    n: usize,
    /// `q^0 .. q^n`.
    qpows: Vec<u32>,
    /// Exact (or safely loose) maxima for the same equation in dimensions
    /// `0 .. n-1`; every length-j coordinate prefix carves out an affine
    /// slice equivalent to dimension `n-j`, so `dim_caps[n-j]` caps what any
    /// one prefix class can contribute.
    dim_caps: Vec<usize>,
    /// `prefix_chosen[j-1][c]` counts chosen points whose length-j prefix
    /// (as a base-q number) is `c`, for `j` in `1..n`.
    prefix_chosen: Vec<Vec<u32>>,
    chosen: Vec<u32>,
    best: Vec<u32>,
    nodes: u64,
    budget: Option<u64>,
    exhausted: bool,
    prune: bool,
}

impl Dfs {
    fn push_point(&mut self, x: u32) {
        self.counter.bump(&self.chosen, x, 1);
        self.chosen.push(x);
        for j in 1..self.n {
            let cls = (x / self.qpows[self.n - j]) as usize;
            self.prefix_chosen[j - 1][cls] += 1;
        }
    }

    fn pop_point(&mut self) {
        let x = self.chosen.pop().expect("pop matches a push");
        for j in 1..self.n {
            let cls = (x / self.qpows[self.n - j]) as usize;
            self.prefix_chosen[j - 1][cls] -= 1;
        }
        self.counter.bump(&self.chosen, x, -1);
    }

    /// Remaining capacity of the length-`j` prefix class `cls`.
    fn room(&self, j: usize, cls: u32) -> usize {
        self.dim_caps[self.n - j].saturating_sub(self.prefix_chosen[j - 1][cls as usize] as usize)
    }

    /// How many of `tail` any extension can still take: candidates are folded
    /// through the nested prefix classes, each class clamped to its room.
    /// `tail` is lex ascending, so one left-to-right pass with a stack of
    /// open classes suffices.
    fn slice_bound(&self, tail: &[u32]) -> usize {
        let levels = self.n.saturating_sub(1);
        if levels == 0 {
            return tail.len();
        }
        let mut acc = vec![0usize; levels + 1];
        let mut open = vec![u32::MAX; levels + 1];
        for &x in tail {
            let mut split = levels + 1;
            for j in 1..=levels {
                if open[j] != x / self.qpows[self.n - j] {
                    split = j;
                    break;
                }
            }
            for j in (split..=levels).rev() {
                if open[j] != u32::MAX {
                    let closed = acc[j].min(self.room(j, open[j]));
                    acc[j - 1] += closed;
                }
                acc[j] = 0;
            }
            for j in split..=levels {
                open[j] = x / self.qpows[self.n - j];
            }
            acc[levels] += 1;
        }
        for j in (1..=levels).rev() {
            if open[j] != u32::MAX {
                let closed = acc[j].min(self.room(j, open[j]));
                acc[j - 1] += closed;
            }
        }
        acc[0]
    }

    /// Walks the canonical spine. With `j` basis vectors pinned the chosen
    /// set is {0, e_n, .., e_(n-j+1)}, all inside W = span of those vectors.
    /// Any valid extension either stays inside W, or contains a point x
    /// outside W; in the latter case the linear map fixing W pointwise and
    /// sending x to e_(n-j) (extend {e_n, .., e_(n-j+1), x} to a basis)
    /// preserves solutions, so some maximum extension contains e_(n-j).
    /// One pinned representative thus replaces every outside branch.
    fn spine(&mut self, j: usize) {
        // inside W: indices below q^j, a plain confined search
        let confined: Vec<u32> = (0..self.qpows[j])
            .filter(|y| !self.chosen.contains(y) && self.counter.admissible(*y))
            .collect();
        self.extend(&confined);
        if self.exhausted || j >= self.n {
            return;
        }
        if let Some(budget) = self.budget {
            if self.nodes >= budget {
                self.exhausted = true;
                return;
            }
        }
        // outside W: solutions over two points of W land back in W, so the
        // spine never conflicts with the representative it pins next
        let rep = self.qpows[j];
        debug_assert!(self.counter.admissible(rep));
        self.nodes += 1;
        self.push_point(rep);
        self.spine(j + 1);
        self.pop_point();
    }

    /// Extends `chosen` by subsets of `cands`. The candidate list holds the
    /// still-admissible indices above the last chosen point, so its length
    /// (and its slice fold) bound how much the current set can ever grow.
    fn extend(&mut self, cands: &[u32]) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if self.prune && self.chosen.len() + self.slice_bound(cands) <= self.best.len() {
            return;
        }
        for (i, &x) in cands.iter().enumerate() {
            // taking every remaining candidate still would not beat the record
            if self.prune && self.chosen.len() + (cands.len() - i) <= self.best.len() {
                return;
            }
            if let Some(budget) = self.budget {
                if self.nodes >= budget {
                    self.exhausted = true;
                    return;
                }
            }
            self.nodes += 1;
            self.push_point(x);
            let child: Vec<u32> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&y| self.counter.admissible(y))
                .collect();
            self.extend(&child);
            self.pop_point();
            if self.exhausted {
                return;
            }
        }
    }
}

/// Node allowance for each lower-dimensional warm-up search. A warm-up that
/// exhausts it falls back to the slice size as a (loose but safe) cap.
const PREP_NODE_BUDGET: u64 = 200_000;

struct Run {
    best: Vec<u32>,
    nodes: u64,
    exhausted: bool,
}

fn run_exhaustive(
    q: u64,
    n: usize,
    t: &CoefficientTriple,
    node_budget: Option<u64>,
    prune: bool,
    dim_caps: &[usize],
) -> Result<Run> {
    let tables = PairTables::new(q, n, t)?;
    let size = tables.size;
    // Translation invariance (alpha + beta + gamma = 0 kills the shift term)
    // lets the first point be pinned to the zero vector. Linear maps preserve
    // solutions too and act transitively on nonzero points once the origin is
    // fixed, so when the cube has a second point some maximum set contains
    // index 1 as well (any two distinct points are free here: gamma != 0 and
    // the triple is not degenerate).
    let mut qpows = Vec::with_capacity(n + 1);
    let mut p = 1u32;
    for _ in 0..=n {
        qpows.push(p);
        p = p.saturating_mul(q as u32);
    }
    let prefix_chosen = (1..n).map(|j| vec![0u32; qpows[j] as usize]).collect();
    let mut dfs = Dfs {
        counter: ConflictCounter::new(tables),
        n,
        qpows,
        dim_caps: dim_caps.to_vec(),
        prefix_chosen,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 1,
        budget: node_budget,
        exhausted: false,
        prune,
    };
    dfs.push_point(0);
    dfs.best = vec![0];
    if size > 1 {
        dfs.push_point(1);
        dfs.nodes += 1;
        dfs.spine(1);
    }
    Ok(Run {
        best: dfs.best,
        nodes: dfs.nodes,
        exhausted: dfs.exhausted,
    })
}

fn exhaustive_max_with_pruning(
    q: u64,
    n: usize,
    t: &CoefficientTriple,
    node_budget: Option<u64>,
    prune: bool,
) -> Result<SearchResult> {
    if t.modulus() != q {
        return Err(Error::ModulusMismatch(q, t.modulus()));
    }
    if t.gamma().is_zero() {
        return Err(Error::GammaZero);
    }
    checked_cube(q, n)?;
    if is_degenerate(t) {
        return Ok(SearchResult {
            best_size: 1,
            nodes_explored: 1,
            optimal: true,
            seed_used: None,
            witness: indices_to_set(q, n, &[0])?,
        });
    }
    // Warm up the slice caps bottom-up: dim_caps[k] is the maximum for the
    // same equation in dimension k. These gate the prefix-class fold in the
    // main search. Warm-up nodes are bounded separately and not reported.
    let mut dim_caps: Vec<usize> = Vec::with_capacity(n);
    if prune {
        for k in 0..n {
            let sub = run_exhaustive(q, k, t, Some(PREP_NODE_BUDGET), prune, &dim_caps)?;
            dim_caps.push(if sub.exhausted {
                (q as usize).pow(k as u32)
            } else {
                sub.best.len()
            });
        }
    }
    let run = run_exhaustive(q, n, t, node_budget, prune, &dim_caps)?;
    let witness = indices_to_set(q, n, &run.best)?;
    debug_assert!(is_progression_free(&witness, t)?);
    Ok(SearchResult {
        best_size: run.best.len(),
        nodes_explored: run.nodes,
        optimal: !run.exhausted,
        seed_used: None,
        witness,
    })
}

/// Exact maximum progression-free set size by branch and bound over lex
/// ascending cube indices. Affine symmetry collapses the top of the tree:
/// the origin is pinned by translation, and a canonical walk pins one basis
/// vector per dimension, since linear maps fixing the previously pinned
/// span act with a single orbit on everything outside it. Branches die when
/// the candidate count, or the per-slice fold against exact lower-dimension
/// maxima, cannot beat the incumbent. `node_budget` bounds DFS node
/// expansions; exceeding it returns the best found so far with
/// `optimal = false`.
pub fn exhaustive_max(
    q: u64,
    n: usize,
    t: &CoefficientTriple,
    node_budget: Option<u64>,
) -> Result<SearchResult> {
    exhaustive_max_with_pruning(q, n, t, node_budget, true)
}

#[cfg(test)]
pub(crate) fn exhaustive_max_unpruned(
    q: u64,
    n: usize,
    t: &CoefficientTriple,
) -> Result<SearchResult> {
    exhaustive_max_with_pruning(q, n, t, None, false)
}

/// Repeated randomized greedy passes: shuffle the cube, then insert each
/// point that keeps the set progression-free. Deterministic for a fixed
/// `(seed, restarts)`; reports the lexicographically least witness among the
/// best found.
pub fn greedy_random(
    q: u64,
    n: usize,
    t: &CoefficientTriple,
    seed: u64,
    restarts: u32,
) -> Result<SearchResult> {
    if t.modulus() != q {
        return Err(Error::ModulusMismatch(q, t.modulus()));
    }
    if t.gamma().is_zero() {
        return Err(Error::GammaZero);
    }
    let size = checked_cube(q, n)?;
    let size = u32::try_from(size).map_err(|_| Error::Internal("cube exceeds u32".into()))?;
    let mut counter = if is_degenerate(t) {
        None
    } else {
        Some(ConflictCounter::new(PairTables::new(q, n, t)?))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..size).collect();
    let mut chosen: Vec<u32> = Vec::new();
    let mut best: Vec<u32> = Vec::new();
    let mut best_sorted: Vec<u32> = Vec::new();
    let mut nodes = 0u64;
    for _ in 0..restarts {
        order.shuffle(&mut rng);
        if let Some(c) = &mut counter {
            c.reset();
        }
        chosen.clear();
        for &x in &order {
            // a degenerate triple conflicts any two distinct points
            let ok = match &counter {
                Some(c) => c.admissible(x),
                None => chosen.is_empty(),
            };
            if ok {
                if let Some(c) = &mut counter {
                    c.bump(&chosen, x, 1);
                }
                chosen.push(x);
                nodes += 1;
            }
        }
        let mut sorted = chosen.clone();
        sorted.sort_unstable();
        if chosen.len() > best.len() || (chosen.len() == best.len() && sorted < best_sorted) {
            best = chosen.clone();
            best_sorted = sorted;
        }
    }
    let witness = indices_to_set(q, n, &best_sorted)?;
    debug_assert!(is_progression_free(&witness, t)?);
    Ok(SearchResult {
        best_size: best.len(),
        nodes_explored: nodes,
        optimal: false,
        seed_used: Some(seed),
        witness,
    })
}
