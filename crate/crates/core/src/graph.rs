//! Unlabeled digraph utilities: strongly connected components, BFS trees,
//! and strong-connectivity certificates.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

/// Tarjan's algorithm without recursion. Returns the component id of every
/// vertex; components are numbered in reverse topological order (sinks first).
pub fn scc(adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut count = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = count;
                        if w == v {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
    }
    (count, comp)
}

pub fn reverse(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            rev[v].push(u);
        }
    }
    for r in &mut rev {
        r.sort_unstable();
        r.dedup();
    }
    rev
}

/// BFS from `root`; returns (distance, parent) per vertex.
pub fn bfs(adj: &[Vec<usize>], root: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n = adj.len();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    let mut queue = VecDeque::new();
    dist[root] = Some(0);
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Vertex path `from -> ... -> to` of minimum length (`[from]` when equal).
pub fn shortest_path(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let (dist, parent) = bfs(adj, from);
    dist[to]?;
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur].expect("bfs parent chain");
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Spanning in- and out-trees rooted at one vertex: every vertex reaches the
/// root along `to_root` and is reached from it along `from_root`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongConnectivity {
    pub root: usize,
    /// `from_root[v]` is the predecessor of `v` on a path root -> v.
    pub from_root: Vec<Option<usize>>,
    /// `to_root[v]` is the successor of `v` on a path v -> root.
    pub to_root: Vec<Option<usize>>,
}

/// Either a certificate of strong connectivity or an unreachable ordered pair.
pub fn strong_connectivity(adj: &[Vec<usize>]) -> Result<StrongConnectivity, (usize, usize)> {
    let n = adj.len();
    assert!(n > 0, "strong connectivity of the empty graph");
    let root = 0;
    let (fd, fp) = bfs(adj, root);
    if let Some(v) = (0..n).find(|&v| fd[v].is_none()) {
        return Err((root, v));
    }
    let rev = reverse(adj);
    let (bd, bp) = bfs(&rev, root);
    if let Some(v) = (0..n).find(|&v| bd[v].is_none()) {
        return Err((v, root));
    }
    Ok(StrongConnectivity {
        root,
        from_root: fp,
        to_root: bp,
    })
}

impl StrongConnectivity {
    /// Re-checks the certificate against `adj` without trusting any search.
    pub fn verify(&self, adj: &[Vec<usize>]) -> bool {
        let n = adj.len();
        if self.root >= n || self.from_root.len() != n || self.to_root.len() != n {
            return false;
        }
        let has_edge = |u: usize, v: usize| adj[u].contains(&v);
        let follows = |links: &[Option<usize>], forward: bool| {
            (0..n).all(|start| {
                let mut cur = start;
                for _ in 0..=n {
                    if cur == self.root {
                        return true;
                    }
                    let Some(next) = links[cur] else { return false };
                    if next >= n {
                        return false;
                    }
                    let ok = if forward { has_edge(next, cur) } else { has_edge(cur, next) };
                    if !ok {
                        return false;
                    }
                    cur = next;
                }
                false
            })
        };
        follows(&self.from_root, true) && follows(&self.to_root, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_of_two_cycles_joined_one_way() {
        // 0 <-> 1 -> 2 <-> 3
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let (count, comp) = scc(&adj);
        assert_eq!(count, 2);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        // sink component numbered first
        assert!(comp[2] < comp[0]);
        assert_eq!(strong_connectivity(&adj).unwrap_err(), (2, 0));
    }

    #[test]
    fn certificate_round_trip() {
        let adj = vec![vec![1], vec![2], vec![0, 1]];
        let cert = strong_connectivity(&adj).unwrap();
        assert!(cert.verify(&adj));
        let mut bad = cert.clone();
        bad.to_root[1] = Some(0);
        assert!(!bad.verify(&adj));
    }

    #[test]
    fn shortest_paths_and_gcd() {
        let adj = vec![vec![1, 2], vec![3], vec![3], vec![0]];
        assert_eq!(shortest_path(&adj, 0, 3).unwrap(), vec![0, 1, 3]);
        assert_eq!(shortest_path(&adj, 2, 2).unwrap(), vec![2]);
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(lcm(4, 6), 12);
    }
}
