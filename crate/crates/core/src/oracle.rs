//! Exhaustive reference checks for small graphs.
//!
//! Everything here works from the raw arc set and enumerates candidates
//! outright (paths, cuts, spanning trees, matchings, permutations, orders)
//! instead of running the efficient algorithms in `solvers`. Costs grow
//! factorially, so callers should keep graphs to about eight nodes.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::answer::Answer;
use crate::graph::Graph;
use crate::task::{QueryArgs, TaskKind};

/// Largest node count the oracle accepts.
pub const MAX_ORACLE_NODES: usize = 8;

/// Plain arc view of a graph; undirected edges appear in both directions.
struct Arcs {
    n: usize,
    directed: bool,
    arcs: HashMap<(usize, usize), u64>,
    edges: Vec<(usize, usize, u64)>,
}

impl Arcs {
    fn new(g: &Graph) -> Self {
        let mut arcs = HashMap::new();
        let mut edges = Vec::new();
        for (u, v, w) in g.edges() {
            let w = u64::from(w.unwrap_or(1));
            arcs.insert((u, v), w);
            if !g.is_directed() {
                arcs.insert((v, u), w);
            }
            edges.push((u, v, w));
        }
        Self { n: g.node_count(), directed: g.is_directed(), arcs, edges }
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.arcs.contains_key(&(u, v))
    }

    fn out(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.has(u, v)).collect()
    }

    fn closure(&self, symmetric: bool) -> Vec<Vec<bool>> {
        let mut r = vec![vec![false; self.n]; self.n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(u, v) in self.arcs.keys() {
            r[u][v] = true;
            if symmetric {
                r[v][u] = true;
            }
        }
        for k in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }
}

fn ratio(num: usize, den: usize) -> BigRational {
    if den == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

fn float_close(x: f64, exact: &BigRational) -> bool {
    let e = num_traits::ToPrimitive::to_f64(exact).unwrap_or(f64::NAN);
    if e == 0.0 {
        x == 0.0
    } else {
        ((x - e) / e).abs() < 1e-12
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn dfs_orders(a: &Arcs, start: usize) -> BTreeSet<Vec<usize>> {
    // explore(u) = pick any unvisited neighbor x, explore x fully, then
    // continue at u until it has no unvisited neighbor.
    fn explore(a: &Arcs, u: usize, visited: Vec<bool>) -> Vec<(Vec<usize>, Vec<bool>)> {
        let choices: Vec<usize> = a.out(u).into_iter().filter(|&x| !visited[x]).collect();
        if choices.is_empty() {
            return vec![(Vec::new(), visited)];
        }
        let mut results = Vec::new();
        for x in choices {
            let mut v = visited.clone();
            v[x] = true;
            for (sub, after_sub) in explore(a, x, v) {
                for (rest, after) in explore(a, u, after_sub) {
                    let mut seq = vec![x];
                    seq.extend(&sub);
                    seq.extend(rest);
                    results.push((seq, after));
                }
            }
        }
        results
    }
    let mut visited = vec![false; a.n];
    visited[start] = true;
    explore(a, start, visited).into_iter().map(|(rest, _)| std::iter::once(start).chain(rest).collect()).collect()
}

fn bfs_orders(a: &Arcs, start: usize) -> BTreeSet<Vec<usize>> {
    fn rec(a: &Arcs, queue: VecDeque<usize>, seen: Vec<bool>, seq: Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let mut queue = queue;
        let Some(u) = queue.pop_front() else {
            out.insert(seq);
            return;
        };
        let fresh: Vec<usize> = a.out(u).into_iter().filter(|&x| !seen[x]).collect();
        for perm in permutations(fresh.len()) {
            let (mut q, mut s, mut sq) = (queue.clone(), seen.clone(), seq.clone());
            for i in perm {
                let x = fresh[i];
                s[x] = true;
                sq.push(x);
                q.push_back(x);
            }
            rec(a, q, s, sq, out);
        }
    }
    let mut seen = vec![false; a.n];
    seen[start] = true;
    let mut out = BTreeSet::new();
    rec(a, VecDeque::from([start]), seen, vec![start], &mut out);
    out
}

fn topo_orders(a: &Arcs) -> BTreeSet<Vec<usize>> {
    permutations(a.n)
        .into_iter()
        .filter(|p| {
            let mut pos = vec![0; a.n];
            for (i, &x) in p.iter().enumerate() {
                pos[x] = i;
            }
            a.arcs.keys().all(|&(u, v)| pos[u] < pos[v])
        })
        .collect()
}

fn hamiltonian_paths(a: &Arcs) -> BTreeSet<Vec<usize>> {
    permutations(a.n).into_iter().filter(|p| p.windows(2).all(|w| a.has(w[0], w[1]))).collect()
}

/// Enumerates edge sequences that use every edge once, stopping after `cap`.
fn euler_trails(a: &Arcs, cap: usize) -> BTreeSet<Vec<usize>> {
    fn rec(a: &Arcs, path: &mut Vec<usize>, used: &mut [bool], out: &mut BTreeSet<Vec<usize>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if path.len() == a.edges.len() + 1 {
            out.insert(path.clone());
            return;
        }
        let u = *path.last().expect("non-empty");
        for (i, &(x, y, _)) in a.edges.iter().enumerate() {
            if used[i] {
                continue;
            }
            let next = if x == u {
                y
            } else if !a.directed && y == u {
                x
            } else {
                continue;
            };
            used[i] = true;
            path.push(next);
            rec(a, path, used, out, cap);
            path.pop();
            used[i] = false;
        }
    }
    let mut out = BTreeSet::new();
    let mut used = vec![false; a.edges.len()];
    for s in 0..a.n {
        rec(a, &mut vec![s], &mut used, &mut out, cap);
    }
    out
}

fn has_simple_cycle(a: &Arcs) -> bool {
    // Cycles are rooted at their smallest node; undirected ones need three nodes.
    fn rec(a: &Arcs, root: usize, u: usize, on: &mut [bool], len: usize) -> bool {
        for v in a.out(u) {
            if v == root && (len >= 3 || (a.directed && len >= 2)) {
                return true;
            }
            if v > root && !on[v] {
                on[v] = true;
                if rec(a, root, v, on, len + 1) {
                    return true;
                }
                on[v] = false;
            }
        }
        false
    }
    (0..a.n).any(|r| {
        let mut on = vec![false; a.n];
        on[r] = true;
        rec(a, r, r, &mut on, 1)
    })
}

fn simple_path_min(a: &Arcs, s: usize, t: usize) -> Option<u64> {
    fn rec(a: &Arcs, u: usize, t: usize, on: &mut [bool], cost: u64, best: &mut Option<u64>) {
        if u == t {
            *best = Some(best.map_or(cost, |b| b.min(cost)));
            return;
        }
        for v in a.out(u) {
            if !on[v] {
                on[v] = true;
                rec(a, v, t, on, cost + a.arcs[&(u, v)], best);
                on[v] = false;
            }
        }
    }
    let mut on = vec![false; a.n];
    on[s] = true;
    let mut best = None;
    rec(a, s, t, &mut on, 0, &mut best);
    best
}

fn min_cut(a: &Arcs, s: usize, t: usize) -> u64 {
    let others: Vec<usize> = (0..a.n).filter(|&x| x != s && x != t).collect();
    (0u64..1 << others.len())
        .map(|mask| {
            let mut side = vec![false; a.n];
            side[s] = true;
            for (i, &x) in others.iter().enumerate() {
                side[x] = mask >> i & 1 == 1;
            }
            a.arcs.iter().filter(|(&(u, v), _)| side[u] && !side[v]).map(|(_, &w)| w).sum()
        })
        .min()
        .expect("at least the empty mask")
}

fn max_matching_size(a: &Arcs) -> usize {
    fn rec(edges: &[(usize, usize, u64)], i: usize, used: &mut [bool]) -> usize {
        if i == edges.len() {
            return 0;
        }
        let skip = rec(edges, i + 1, used);
        let (u, v, _) = edges[i];
        if used[u] || used[v] {
            return skip;
        }
        used[u] = true;
        used[v] = true;
        let take = 1 + rec(edges, i + 1, used);
        used[u] = false;
        used[v] = false;
        skip.max(take)
    }
    rec(&a.edges, 0, &mut vec![false; a.n])
}

fn mst_min(a: &Arcs) -> Option<u64> {
    // Every (n-1)-edge subset without a cycle is a spanning tree.
    fn root(p: &[usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    fn rec(edges: &[(usize, usize, u64)], i: usize, need: usize, p: &mut Vec<usize>, w: u64, best: &mut Option<u64>) {
        if need == 0 {
            *best = Some(best.map_or(w, |b| b.min(w)));
            return;
        }
        if edges.len() - i < need {
            return;
        }
        let (u, v, c) = edges[i];
        let (ru, rv) = (root(p, u), root(p, v));
        if ru != rv {
            let saved = p.clone();
            p[ru] = rv;
            rec(edges, i + 1, need - 1, p, w + c, best);
            *p = saved;
        }
        rec(edges, i + 1, need, p, w, best);
    }
    let mut best = None;
    rec(&a.edges, 0, a.n - 1, &mut (0..a.n).collect(), 0, &mut best);
    best
}

fn pagerank_exact(a: &Arcs) -> Vec<Vec<BigRational>> {
    let n = a.n;
    let nn = BigRational::from_integer(BigInt::from(n));
    let d = BigRational::new(BigInt::from(17), BigInt::from(20));
    let base = (BigRational::one() - &d) / &nn;
    let outdeg: Vec<usize> = (0..n).map(|u| a.out(u).len()).collect();
    let mut rounds = vec![vec![BigRational::one() / &nn; n]];
    for _ in 0..3 {
        let prev = rounds.last().expect("initialized");
        let dangling: BigRational =
            (0..n).filter(|&v| outdeg[v] == 0).fold(BigRational::zero(), |acc, v| acc + &prev[v]);
        let next = (0..n)
            .map(|u| {
                let inflow = (0..n).filter(|&v| a.has(v, u)).fold(BigRational::zero(), |acc, v| {
                    acc + &prev[v] / BigRational::from_integer(BigInt::from(outdeg[v]))
                });
                &base + &d * (inflow + &dangling / &nn)
            })
            .collect();
        rounds.push(next);
    }
    rounds
}

/// Exact PageRank score vectors after each round, starting with the
/// initialization, as doubles.
pub fn pagerank_rounds(graph: &Graph) -> Vec<Vec<f64>> {
    pagerank_exact(&Arcs::new(graph))
        .iter()
        .map(|r| r.iter().map(|x| num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)).collect())
        .collect()
}

/// Every valid answer sequence for an order task, found by enumeration.
/// `None` for kinds that do not answer with a sequence.
pub fn valid_sequences(kind: TaskKind, graph: &Graph, query: &QueryArgs) -> Option<BTreeSet<Vec<usize>>> {
    let a = Arcs::new(graph);
    match kind {
        TaskKind::Dfs => query.u.map(|s| dfs_orders(&a, s)),
        TaskKind::Bfs => query.u.map(|s| bfs_orders(&a, s)),
        TaskKind::TopologicalSort => Some(topo_orders(&a)),
        TaskKind::HamiltonianPath => Some(hamiltonian_paths(&a)),
        TaskKind::EulerPath => Some(euler_trails(&a, usize::MAX)),
        _ => None,
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: solver gave {got:?}, oracle says {want:?}"))
    }
}

/// Checks a solver answer against brute force.
pub fn check(kind: TaskKind, graph: &Graph, query: &QueryArgs, answer: &Answer) -> Result<(), String> {
    if graph.node_count() > MAX_ORACLE_NODES {
        return Err(format!("graph has {} nodes; the oracle handles at most {MAX_ORACLE_NODES}", graph.node_count()));
    }
    let a = Arcs::new(graph);
    let u = || query.u.ok_or_else(|| "query lacks u".to_string());
    let v = || query.v.ok_or_else(|| "query lacks v".to_string());
    let out_set = |x: usize| -> BTreeSet<usize> { a.out(x).into_iter().collect() };
    match kind {
        TaskKind::Neighbor => expect("neighbors", answer.clone(), Answer::NodeSet(a.out(u()?))),
        TaskKind::Degree => expect("degree", answer.clone(), Answer::Int(a.out(u()?).len() as i64)),
        TaskKind::Predecessor => {
            let t = u()?;
            expect("predecessors", answer.clone(), Answer::NodeSet((0..a.n).filter(|&x| a.has(x, t)).collect()))
        }
        TaskKind::Edge => expect("edge", answer.clone(), Answer::Bool(a.has(u()?, v()?))),
        TaskKind::CommonNeighbor => {
            let c = out_set(u()?).intersection(&out_set(v()?)).count();
            expect("common neighbors", answer.clone(), Answer::Int(c as i64))
        }
        TaskKind::Jaccard => {
            let (x, y) = (out_set(u()?), out_set(v()?));
            let exact = ratio(x.intersection(&y).count(), x.union(&y).count());
            match answer {
                Answer::Float(f) if float_close(*f, &exact) => Ok(()),
                other => Err(format!("jaccard: solver gave {other:?}, oracle says {exact}")),
            }
        }
        TaskKind::ClusteringCoefficient => {
            let nb = a.out(u()?);
            let mut links = 0;
            for (i, &p) in nb.iter().enumerate() {
                for (j, &q) in nb.iter().enumerate() {
                    if (a.directed && i != j || !a.directed && i < j) && a.has(p, q) {
                        links += 1;
                    }
                }
            }
            let d = nb.len();
            let pairs = d * d.saturating_sub(1);
            let exact = if a.directed { ratio(links, pairs) } else { ratio(2 * links, pairs) };
            match answer {
                Answer::Float(f) if float_close(*f, &exact) => Ok(()),
                other => Err(format!("clustering: solver gave {other:?}, oracle says {exact}")),
            }
        }
        TaskKind::PageRank => {
            let rounds = pagerank_exact(&a);
            for (i, r) in rounds.iter().enumerate() {
                let total = r.iter().fold(BigRational::zero(), |acc, x| acc + x);
                if !total.is_one() {
                    return Err(format!("pagerank round {i} sums to {total}"));
                }
            }
            let last = rounds.last().expect("rounds");
            let mut best = 0;
            for i in 1..a.n {
                if last[i] > last[best] {
                    best = i;
                }
            }
            expect("pagerank top", answer.clone(), Answer::Node(best))
        }
        TaskKind::ShortestPath => match simple_path_min(&a, u()?, v()?) {
            Some(d) => expect("shortest path", answer.clone(), Answer::Int(d as i64)),
            None => Err("target unreachable".into()),
        },
        TaskKind::Connectivity => expect("connectivity", answer.clone(), Answer::Bool(a.closure(false)[u()?][v()?])),
        TaskKind::MaximumFlow => expect("max flow", answer.clone(), Answer::Int(min_cut(&a, u()?, v()?) as i64)),
        TaskKind::Cycle => expect("cycle", answer.clone(), Answer::Bool(has_simple_cycle(&a))),
        TaskKind::ConnectedComponent => {
            let row = &a.closure(true)[u()?];
            expect("component", answer.clone(), Answer::NodeSet((0..a.n).filter(|&x| row[x]).collect()))
        }
        TaskKind::Diameter => {
            const INF: usize = usize::MAX / 4;
            let mut dist = vec![vec![INF; a.n]; a.n];
            for (i, row) in dist.iter_mut().enumerate() {
                row[i] = 0;
            }
            for &(x, y) in a.arcs.keys() {
                dist[x][y] = 1;
            }
            for k in 0..a.n {
                for i in 0..a.n {
                    for j in 0..a.n {
                        dist[i][j] = dist[i][j].min(dist[i][k] + dist[k][j]);
                    }
                }
            }
            let max = dist.iter().flatten().copied().max().unwrap_or(0);
            if max >= INF {
                return Err("graph is disconnected".into());
            }
            expect("diameter", answer.clone(), Answer::Int(max as i64))
        }
        TaskKind::Bipartite => {
            let Answer::EdgeList(m) = answer else { return Err(format!("bipartite answer {answer:?}")) };
            let left: HashSet<usize> = query.left.iter().flatten().copied().collect();
            let mut used = HashSet::new();
            for &(l, r) in m {
                if !left.contains(&l) || left.contains(&r) || !a.has(l, r) || !used.insert(l) || !used.insert(r) {
                    return Err(format!("({l}, {r}) breaks the matching"));
                }
            }
            expect("matching size", m.len(), max_matching_size(&a))
        }
        TaskKind::Mst => match mst_min(&a) {
            Some(w) => expect("mst weight", answer.clone(), Answer::Int(w as i64)),
            None => Err("graph has no spanning tree".into()),
        },
        TaskKind::Dfs | TaskKind::Bfs | TaskKind::TopologicalSort | TaskKind::EulerPath | TaskKind::HamiltonianPath => {
            let Answer::NodeList(seq) = answer else { return Err(format!("sequence answer {answer:?}")) };
            let all = valid_sequences(kind, graph, query).ok_or("query lacks a start node")?;
            if all.contains(seq) {
                Ok(())
            } else {
                Err(format!("{seq:?} is not among the {} valid sequences", all.len()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_graphs::{g1, graph, wgraph};

    #[test]
    fn order_counts() {
        let c4 = graph(4, false, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let a = Arcs::new(&c4);
        assert_eq!(dfs_orders(&a, 0), BTreeSet::from([vec![0, 1, 2, 3], vec![0, 3, 2, 1]]));
        assert_eq!(bfs_orders(&a, 0), BTreeSet::from([vec![0, 1, 3, 2], vec![0, 3, 1, 2]]));
        // Eight rotations and reflections of the cycle.
        assert_eq!(hamiltonian_paths(&a).len(), 8);
        let tri = Arcs::new(&graph(3, false, &[(0, 1), (1, 2), (0, 2)]));
        assert_eq!(euler_trails(&tri, usize::MAX).len(), 6);
    }

    #[test]
    fn g1_examples() {
        let g = g1();
        check(TaskKind::Neighbor, &g, &QueryArgs::node(0), &Answer::NodeSet(vec![1, 2, 3])).unwrap();
        check(TaskKind::CommonNeighbor, &g, &QueryArgs::pair(1, 2), &Answer::Int(1)).unwrap();
        check(TaskKind::Jaccard, &g, &QueryArgs::pair(1, 2), &Answer::Float(1.0 / 3.0)).unwrap();
        check(TaskKind::ClusteringCoefficient, &g, &QueryArgs::node(0), &Answer::Float(1.0 / 3.0)).unwrap();
        assert!(check(TaskKind::Degree, &g, &QueryArgs::node(3), &Answer::Int(2)).is_err());
    }

    #[test]
    fn cut_and_path_examples() {
        let diamond = wgraph(4, true, &[(0, 1, 3), (1, 3, 2), (0, 2, 2), (2, 3, 4)]);
        assert_eq!(min_cut(&Arcs::new(&diamond), 0, 3), 4);
        let tri = wgraph(3, false, &[(0, 1, 2), (1, 2, 3), (0, 2, 10)]);
        assert_eq!(simple_path_min(&Arcs::new(&tri), 0, 2), Some(5));
        let k22 = graph(4, false, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(max_matching_size(&Arcs::new(&k22)), 2);
        let wtri = wgraph(3, false, &[(0, 1, 1), (1, 2, 2), (0, 2, 3)]);
        assert_eq!(mst_min(&Arcs::new(&wtri)), Some(3));
    }

    #[test]
    fn cycles() {
        assert!(!has_simple_cycle(&Arcs::new(&graph(3, false, &[(0, 1), (1, 2)]))));
        assert!(has_simple_cycle(&Arcs::new(&graph(3, false, &[(0, 1), (1, 2), (2, 0)]))));
        assert!(has_simple_cycle(&Arcs::new(&graph(2, true, &[(0, 1), (1, 0)]))));
        assert!(!has_simple_cycle(&Arcs::new(&graph(4, true, &[(0, 1), (0, 2), (1, 3), (2, 3)]))));
    }
}
