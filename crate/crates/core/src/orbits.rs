//! Connected components of the move graph.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumeration::SolutionSet;
use crate::error::Result;
use crate::surface::{Coord, SurfaceParams, Triple};

/// One orbit: its size and lexicographically smallest point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub size: u64,
    pub rep: Triple,
}

/// The orbit decomposition of a [`SolutionSet`].
///
/// Orbits are numbered in order of their representatives, so the numbering
/// does not depend on how the computation was scheduled.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    solutions: SolutionSet,
    moves: Vec<[u32; 3]>,
    component_id: Vec<u32>,
    orbits: Vec<Orbit>,
    multiset: BTreeMap<u64, u64>,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    // the smaller index always becomes the root
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Index of `m_i x` for every point and move. Panics if a move leaves the
/// solution set, which would mean the set or the move is wrong.
pub fn move_table(sol: &SolutionSet) -> Vec<[u32; 3]> {
    let params = *sol.params();
    sol.points()
        .par_iter()
        .map(|x| {
            Coord::ALL.map(|c| {
                let y = params.apply_move(x, c);
                sol.index_of(&y).unwrap_or_else(|| panic!("move {c} sends {x} off the solution set")) as u32
            })
        })
        .collect()
}

pub fn compute_orbits(sol: SolutionSet) -> OrbitPartition {
    let n = sol.len();
    let moves = move_table(&sol);
    let mut uf = UnionFind::new(n);
    for (k, nb) in moves.iter().enumerate() {
        for &j in nb {
            uf.union(k as u32, j);
        }
    }
    // roots are component minima, so numbering by first appearance orders
    // orbits by representative
    let mut label = vec![u32::MAX; n];
    let mut component_id = vec![0u32; n];
    let mut orbits: Vec<Orbit> = Vec::new();
    for k in 0..n {
        let r = uf.find(k as u32) as usize;
        if label[r] == u32::MAX {
            label[r] = orbits.len() as u32;
            orbits.push(Orbit { size: 0, rep: sol.points()[k] });
        }
        component_id[k] = label[r];
        orbits[label[r] as usize].size += 1;
    }
    let mut multiset = BTreeMap::new();
    for o in &orbits {
        *multiset.entry(o.size).or_insert(0) += 1;
    }
    OrbitPartition { solutions: sol, moves, component_id, orbits, multiset }
}

impl OrbitPartition {
    pub fn solutions(&self) -> &SolutionSet {
        &self.solutions
    }

    pub fn params(&self) -> &SurfaceParams {
        self.solutions.params()
    }

    /// `moves()[k][i]` is the index of `m_i` applied to point `k`.
    pub fn moves(&self) -> &[[u32; 3]] {
        &self.moves
    }

    pub fn component_id(&self) -> &[u32] {
        &self.component_id
    }

    /// Orbit number of a point, if it is a nonzero solution.
    pub fn orbit_of(&self, x: &Triple) -> Option<usize> {
        self.solutions.index_of(x).map(|k| self.component_id[k] as usize)
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn multiset(&self) -> &BTreeMap<u64, u64> {
        &self.multiset
    }

    pub fn total(&self) -> u64 {
        self.solutions.len() as u64
    }

    /// Sizes sorted ascending.
    pub fn sizes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.orbits.iter().map(|o| o.size).collect();
        v.sort_unstable();
        v
    }

    pub fn size_table(&self) -> String {
        format_size_table(&self.multiset)
    }

    /// Points of each orbit, in index order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.orbits.len()];
        for (k, &c) in self.component_id.iter().enumerate() {
            out[c as usize].push(k);
        }
        out
    }

    pub fn report(&self) -> OrbitReport {
        let params = self.params();
        let p = params.prime().get();
        OrbitReport {
            prime: p,
            params: params.a_signed(),
            s: params.s().value(),
            class: params.classify().to_string(),
            total: self.total(),
            trivial_present: true,
            orbits: self
                .orbits
                .iter()
                .map(|o| OrbitEntry { size: o.size, rep: o.rep, divisible_by_p: o.size % p == 0 })
                .collect(),
            table: self.size_table(),
        }
    }
}

/// Renders `{c: d}` as `"c1^d1, c2^d2, ..."`, ascending in `c`.
pub fn format_size_table(multiset: &BTreeMap<u64, u64>) -> String {
    let mut out = String::new();
    for (k, (size, mult)) in multiset.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write!(out, "{size}^{mult}").unwrap();
    }
    out
}

/// Parses `"c1^d1, c2^d2"` back into a multiset.
pub fn parse_size_table(s: &str) -> Option<BTreeMap<u64, u64>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (c, d) = part.split_once('^')?;
        *out.entry(c.trim().parse().ok()?).or_insert(0) += d.trim().parse::<u64>().ok()?;
    }
    Some(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitEntry {
    pub size: u64,
    pub rep: Triple,
    pub divisible_by_p: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub prime: u64,
    pub params: [i64; 3],
    pub s: u64,
    pub class: String,
    pub total: u64,
    pub trivial_present: bool,
    pub orbits: Vec<OrbitEntry>,
    pub table: String,
}

/// Outcome of the divisibility check.
#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityReport {
    pub class: String,
    /// Whether the theorem applies, so that failures count.
    pub asserted: bool,
    pub sizes: Vec<u64>,
    pub failures: Vec<u64>,
}

impl DivisibilityReport {
    pub fn passed(&self) -> bool {
        !self.asserted || self.failures.is_empty()
    }
}

pub fn verify_divisibility(part: &OrbitPartition) -> Result<DivisibilityReport> {
    let params = part.params();
    let p = params.prime();
    p.require_at_least(5)?;
    let class = params.classify();
    let sizes = part.sizes();
    let failures = sizes.iter().copied().filter(|n| n % p.get() != 0).collect();
    Ok(DivisibilityReport {
        class: class.to_string(),
        asserted: class.divisibility_applies(),
        sizes,
        failures,
    })
}

/// Searches for a bigon: a point where two distinct moves agree without
/// both fixing it. Returns the first offending `(x, i, j)`.
pub fn find_bigon(params: &SurfaceParams, points: &[Triple]) -> Option<(Triple, Coord, Coord)> {
    for x in points {
        let images = Coord::ALL.map(|c| params.apply_move(x, c));
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            if images[a] == images[b] && images[a] != *x {
                return Some((*x, Coord::ALL[a], Coord::ALL[b]));
            }
        }
    }
    None
}

/// The orbit of a single point by breadth-first search, without enumerating
/// the surface. Gives up (returns `None`) beyond `cap` points.
pub fn orbit_by_bfs(params: &SurfaceParams, start: &Triple, cap: usize) -> Option<Vec<Triple>> {
    let mut seen = HashSet::from([*start]);
    let mut queue = VecDeque::from([*start]);
    while let Some(x) = queue.pop_front() {
        for c in Coord::ALL {
            let y = params.apply_move(&x, c);
            if seen.insert(y) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Triple> = seen.into_iter().collect();
    out.sort();
    Some(out)
}
