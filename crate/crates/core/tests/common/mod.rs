//! Slow, independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use homlab::Graph;

/// Rank over Q of sparse integer columns, by plain Gaussian elimination on
/// rational vectors.
pub fn rational_rank(cols: &[BTreeMap<usize, i64>]) -> usize {
    let mut pivots: HashMap<usize, BTreeMap<usize, BigRational>> = HashMap::new();
    for c in cols {
        let mut v: BTreeMap<usize, BigRational> = c
            .iter()
            .filter(|(_, x)| **x != 0)
            .map(|(k, x)| (*k, BigRational::from_integer(BigInt::from(*x))))
            .collect();
        while let Some((&lead, a)) = v.iter().next_back() {
            let a = a.clone();
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, v);
                    break;
                }
                Some(p) => {
                    let f = a / &p[&lead];
                    for (k, x) in p {
                        let e = v.entry(*k).or_insert_with(BigRational::zero);
                        *e -= &f * x;
                        if e.is_zero() {
                            v.remove(k);
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

/// Textbook dense Smith form over i128; returns the nonzero invariant
/// factors in divisibility order.
pub fn dense_smith(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut t = 0;
    let mut diag = Vec::new();
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|b| a[i][j].abs() < b.0) {
                    best = Some((a[i][j].abs(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let mut done = true;
        for i in t + 1..rows {
            let q = a[i][t].div_euclid(a[t][t]);
            for j in t..cols {
                a[i][j] -= q * a[t][j];
            }
            if a[i][t] != 0 {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = a[t][j].div_euclid(a[t][t]);
            for r in a.iter_mut().skip(t) {
                r[j] -= q * r[t];
            }
            if a[t][j] != 0 {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // divisibility: fold a non-multiple into row t and retry
        let p = a[t][t];
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if a[i][j] % p != 0 {
                    for k in t..cols {
                        a[t][k] += a[i][k];
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            diag.push(p.abs());
            t += 1;
        }
    }
    diag
}

pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn tuples(n_vertices: usize, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            for v in 0..n_vertices as u32 {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn allowed(g: &Graph, t: &[u32]) -> bool {
    t.windows(2).all(|w| g.has_edge(w[0] as usize, w[1] as usize))
}

fn degenerate(t: &[u32]) -> bool {
    t.windows(2).any(|w| w[0] == w[1])
}

/// Boundary of a tuple as a map on non-degenerate tuples.
fn tuple_boundary(t: &[u32]) -> Vec<(Vec<u32>, i64)> {
    (0..t.len())
        .map(|i| {
            let mut s = t.to_vec();
            s.remove(i);
            (s, if i % 2 == 0 { 1 } else { -1 })
        })
        .filter(|(s, _)| !degenerate(s))
        .collect()
}

/// Path-complex dimensions from scratch: every tuple of `V^(n+1)` is
/// examined, and only ranks of boundary matrices are used.
pub struct PathOracle {
    /// `dim Omega_n`
    pub omega: Vec<usize>,
    /// `dim ker(d) on Omega_n`
    pub cycles: Vec<usize>,
}

impl PathOracle {
    pub fn new(g: &Graph, max_dim: usize) -> Self {
        let mut omega = Vec::new();
        let mut cycles = Vec::new();
        for n in 0..=max_dim {
            let paths: Vec<Vec<u32>> = tuples(g.vertex_count(), n + 1)
                .into_iter()
                .filter(|t| allowed(g, t))
                .collect();
            if n == 0 {
                omega.push(paths.len());
                cycles.push(paths.len());
                continue;
            }
            let mut ids: HashMap<Vec<u32>, usize> = HashMap::new();
            let mut full = Vec::new();
            let mut proj = Vec::new();
            for p in &paths {
                let mut f = BTreeMap::new();
                let mut q = BTreeMap::new();
                for (s, c) in tuple_boundary(p) {
                    let next = ids.len();
                    let id = *ids.entry(s.clone()).or_insert(next);
                    *f.entry(id).or_insert(0) += c;
                    if !allowed(g, &s) {
                        *q.entry(id).or_insert(0) += c;
                    }
                }
                full.push(f);
                proj.push(q);
            }
            omega.push(paths.len() - rational_rank(&proj));
            cycles.push(paths.len() - rational_rank(&full));
        }
        PathOracle { omega, cycles }
    }

    /// Rational Betti numbers `0..max_dim` (needs one extra dimension).
    pub fn betti(&self) -> Vec<usize> {
        (0..self.omega.len() - 1)
            .map(|n| self.cycles[n] - (self.omega[n + 1] - self.cycles[n + 1]))
            .collect()
    }
}

/// Cubical chain complex from all maps `Q_n -> G`, checked one at a time.
pub struct CubeOracle {
    pub counts: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<i128>>>,
}

fn is_cube(g: &Graph, l: &[u32]) -> bool {
    (0..l.len()).all(|x| {
        (0..l.len().trailing_zeros()).all(|b| {
            let y = x ^ (1 << b);
            l[x] == l[y] || g.has_edge(l[x] as usize, l[y] as usize)
        })
    })
}

fn cube_degenerate(l: &[u32]) -> bool {
    let m = l.len();
    (0..m.trailing_zeros()).any(|b| (0..m).all(|x| l[x] == l[x ^ (1 << b)]))
}

fn cube_face(l: &[u32], b: u32, plus: bool) -> Vec<u32> {
    (0..l.len())
        .filter(|x| x >> b & 1 == plus as usize)
        .map(|x| l[x])
        .collect()
}

impl CubeOracle {
    pub fn new(g: &Graph, max_dim: usize) -> Self {
        let mut bases: Vec<Vec<Vec<u32>>> = Vec::new();
        for n in 0..=max_dim {
            let mut b: Vec<Vec<u32>> = tuples(g.vertex_count(), 1 << n)
                .into_iter()
                .filter(|l| is_cube(g, l) && !cube_degenerate(l))
                .collect();
            b.sort();
            bases.push(b);
        }
        let mut boundaries = vec![Vec::new()];
        for n in 1..=max_dim {
            let index: HashMap<&Vec<u32>, usize> =
                bases[n - 1].iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut m = vec![vec![0i128; bases[n].len()]; bases[n - 1].len()];
            for (j, c) in bases[n].iter().enumerate() {
                for b in 0..n as u32 {
                    let sign: i128 = if b % 2 == 0 { -1 } else { 1 };
                    for (plus, s) in [(false, sign), (true, -sign)] {
                        let f = cube_face(c, b, plus);
                        if !cube_degenerate(&f) {
                            m[index[&f]][j] += s;
                        }
                    }
                }
            }
            boundaries.push(m);
        }
        CubeOracle {
            counts: bases.iter().map(Vec::len).collect(),
            boundaries,
        }
    }

    fn rank(&self, n: usize) -> usize {
        if n == 0 || n >= self.boundaries.len() {
            0
        } else {
            dense_smith(self.boundaries[n].clone()).len()
        }
    }

    /// Integer homology `(betti, torsion)` for `0..max_dim`.
    pub fn homology(&self) -> Vec<(usize, Vec<i128>)> {
        (0..self.counts.len() - 1)
            .map(|n| {
                let next = dense_smith(self.boundaries[n + 1].clone());
                let betti = self.counts[n] - self.rank(n) - next.len();
                (betti, next.into_iter().filter(|d| *d > 1).collect())
            })
            .collect()
    }
}
