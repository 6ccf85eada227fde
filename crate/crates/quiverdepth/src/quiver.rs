//! Quivers: the combinatorial input object.
//!
//! A quiver is a finite directed multigraph. The text format is
//! line-oriented UTF-8 with `#` comments:
//!
//! ```text
//! vertices <n>
//! arrow <label> <source> <target>
//! ```
//!
//! Vertex indices are 1-based in files and reports (vertex 1 is the sink in
//! the linear family); internally they are 0-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    /// 0-based
    pub source: usize,
    /// 0-based
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    n_vertices: usize,
    arrows: Vec<Arrow>,
}

/// Outcome of [`Quiver::validate`]. The numbering is present iff the quiver
/// is acyclic, and renumbers vertices so every arrow strictly decreases
/// (vertex 1 becomes a sink, vertex n a source).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub acyclic: bool,
    pub connected: bool,
    /// `numbering[v] = new 1-based number of vertex v`.
    pub numbering: Option<Vec<usize>>,
}

/// A directed path. Stationary paths have an empty arrow list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    /// 0-based
    pub source: usize,
    /// 0-based
    pub target: usize,
    /// indices into `Quiver::arrows`, in composition order
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Canonical label: `e_<v>` for stationary paths (1-based vertex),
    /// arrow labels joined by `*` otherwise.
    pub fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", self.source + 1)
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrows[a].label.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

fn check_label(label: &str) -> Result<()> {
    if label.is_empty() {
        return Err(Error::invalid("empty arrow label"));
    }
    if !label.chars().next().unwrap().is_ascii_alphabetic() {
        return Err(Error::invalid(format!(
            "arrow label '{label}' must start with a letter"
        )));
    }
    if label
        .chars()
        .any(|c| c.is_whitespace() || c == '*' || c == '#' || c == '+' || c == '-' || c == '/')
    {
        return Err(Error::invalid(format!(
            "arrow label '{label}' may not contain whitespace, '*', '#', '+', '-' or '/'"
        )));
    }
    // e_<n> is reserved for stationary paths
    if let Some(rest) = label.strip_prefix("e_") {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::invalid(format!(
                "arrow label '{label}' is reserved for stationary paths"
            )));
        }
    }
    Ok(())
}

impl Quiver {
    pub fn new(n_vertices: usize, arrows: Vec<Arrow>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::invalid("a quiver needs at least one vertex"));
        }
        let mut seen = BTreeSet::new();
        for a in &arrows {
            check_label(&a.label)?;
            if !seen.insert(a.label.clone()) {
                return Err(Error::invalid(format!(
                    "duplicate arrow label '{}'",
                    a.label
                )));
            }
            if a.source >= n_vertices || a.target >= n_vertices {
                return Err(Error::invalid(format!(
                    "arrow '{}' endpoint out of range 1..={n_vertices}",
                    a.label
                )));
            }
        }
        Ok(Quiver { n_vertices, arrows })
    }

    /// Parses the line-oriented quiver file format. Loops parse fine; they
    /// are rejected later by validation (a loop is a cycle).
    pub fn parse(text: &str) -> Result<Self> {
        let mut n_vertices: Option<usize> = None;
        let mut arrows: Vec<Arrow> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.split_once('#') {
                Some((before, _)) => before,
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("vertices") => {
                    if n_vertices.is_some() {
                        return Err(Error::parse(line_no, "duplicate 'vertices' line"));
                    }
                    let n: usize = tok
                        .next()
                        .ok_or_else(|| Error::parse(line_no, "expected 'vertices <n>'"))?
                        .parse()
                        .map_err(|_| Error::parse(line_no, "expected 'vertices <n>'"))?;
                    if tok.next().is_some() {
                        return Err(Error::parse(line_no, "trailing tokens after vertex count"));
                    }
                    if n == 0 {
                        return Err(Error::parse(line_no, "vertex count must be at least 1"));
                    }
                    n_vertices = Some(n);
                }
                Some("arrow") => {
                    let n = n_vertices
                        .ok_or_else(|| Error::parse(line_no, "'vertices' must come first"))?;
                    let label = tok
                        .next()
                        .ok_or_else(|| {
                            Error::parse(line_no, "expected 'arrow <label> <source> <target>'")
                        })?
                        .to_string();
                    let mut vertex = |what: &str| -> Result<usize> {
                        let v: usize = tok
                            .next()
                            .ok_or_else(|| {
                                Error::parse(line_no, "expected 'arrow <label> <source> <target>'")
                            })?
                            .parse()
                            .map_err(|_| Error::parse(line_no, format!("bad {what} vertex")))?;
                        if v < 1 || v > n {
                            return Err(Error::parse(
                                line_no,
                                format!("{what} vertex {v} out of range 1..={n}"),
                            ));
                        }
                        Ok(v - 1)
                    };
                    let source = vertex("source")?;
                    let target = vertex("target")?;
                    if tok.next().is_some() {
                        return Err(Error::parse(line_no, "trailing tokens after arrow"));
                    }
                    check_label(&label).map_err(|e| Error::parse(line_no, e.to_string()))?;
                    if arrows.iter().any(|a| a.label == label) {
                        return Err(Error::parse(
                            line_no,
                            format!("duplicate arrow label '{label}'"),
                        ));
                    }
                    arrows.push(Arrow {
                        label,
                        source,
                        target,
                    });
                }
                Some(other) => {
                    return Err(Error::parse(
                        line_no,
                        format!("unknown directive '{other}'"),
                    ));
                }
                None => unreachable!(),
            }
        }
        let n = n_vertices.ok_or_else(|| Error::parse(1, "missing 'vertices <n>' line"))?;
        Quiver::new(n, arrows)
    }

    /// Canonical file form; `parse` of this string reproduces the quiver.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "vertices {}", self.n_vertices).unwrap();
        for a in &self.arrows {
            writeln!(out, "arrow {} {} {}", a.label, a.source + 1, a.target + 1).unwrap();
        }
        out
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Acyclicity, connectedness of the underlying undirected graph, and a
    /// sink-first numbering when one exists.
    pub fn validate(&self) -> Validation {
        let n = self.n_vertices;
        // Kahn's algorithm removing sinks first; the removal order gives the
        // numbering 1..n with every arrow (i -> j) satisfying i > j.
        let mut out_degree = vec![0usize; n];
        let mut in_arrows: Vec<Vec<usize>> = vec![Vec::new(); n]; // sources per target
        let mut has_loop = false;
        for a in &self.arrows {
            if a.source == a.target {
                has_loop = true;
            }
            out_degree[a.source] += 1;
            in_arrows[a.target].push(a.source);
        }
        let mut numbering = vec![0usize; n];
        let mut removed = vec![false; n];
        let mut next_number = 1usize;
        loop {
            // smallest-index current sink, for determinism
            let sink = (0..n).find(|&v| !removed[v] && out_degree[v] == 0);
            let Some(v) = sink else { break };
            removed[v] = true;
            numbering[v] = next_number;
            next_number += 1;
            for &s in &in_arrows[v] {
                if !removed[s] {
                    out_degree[s] -= 1;
                }
            }
        }
        let acyclic = !has_loop && next_number == n + 1;

        // connectedness on the underlying undirected graph (union-find)
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for a in &self.arrows {
            let (rs, rt) = (find(&mut parent, a.source), find(&mut parent, a.target));
            if rs != rt {
                parent[rs] = rt;
            }
        }
        let root = find(&mut parent, 0);
        let connected = (0..n).all(|v| find(&mut parent, v) == root);

        Validation {
            acyclic,
            connected,
            numbering: acyclic.then_some(numbering),
        }
    }

    /// All directed paths, stationary paths first (in vertex order), then
    /// by ascending (length, source, arrow-label sequence). Finite exactly
    /// because the quiver is acyclic.
    pub fn paths(&self) -> Result<Vec<Path>> {
        if !self.validate().acyclic {
            return Err(Error::CyclicQuiver(
                "path enumeration requires an acyclic quiver".into(),
            ));
        }
        let mut by_length: Vec<Vec<Path>> = Vec::new();
        by_length.push(
            (0..self.n_vertices)
                .map(|v| Path {
                    source: v,
                    target: v,
                    arrows: Vec::new(),
                })
                .collect(),
        );
        loop {
            let last = by_length.last().unwrap();
            let mut next: Vec<Path> = Vec::new();
            for p in last {
                for (ai, a) in self.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path {
                            source: p.source,
                            target: a.target,
                            arrows,
                        });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            by_length.push(next);
        }
        let mut all = Vec::new();
        for (len, mut group) in by_length.into_iter().enumerate() {
            if len == 0 {
                group.sort_by_key(|p| p.source);
            } else {
                group.sort_by(|p, q| {
                    let pk: Vec<&str> = p
                        .arrows
                        .iter()
                        .map(|&a| self.arrows[a].label.as_str())
                        .collect();
                    let qk: Vec<&str> = q
                        .arrows
                        .iter()
                        .map(|&a| self.arrows[a].label.as_str())
                        .collect();
                    (p.source, pk).cmp(&(q.source, qk))
                });
            }
            all.extend(group);
        }
        Ok(all)
    }

    /// `n[i][j]` = number of paths from i to j (0-based), i.e.
    /// `dim ε_i (KQ) ε_j`.
    pub fn path_counts(&self) -> Result<Vec<Vec<usize>>> {
        let mut counts = vec![vec![0usize; self.n_vertices]; self.n_vertices];
        for p in self.paths()? {
            counts[p.source][p.target] += 1;
        }
        Ok(counts)
    }
}

/// The linear quiver `n -> n-1 -> … -> 1` whose path algebra is the lower
/// triangular matrix algebra T_n. Arrows are labeled `a_<src>_<tgt>`.
pub fn linear_quiver(n: usize) -> Result<Quiver> {
    if n == 0 {
        return Err(Error::invalid("linear quiver needs n >= 1"));
    }
    let arrows = (1..n)
        .map(|i| Arrow {
            label: format!("a_{}_{}", i + 1, i),
            source: i,
            target: i - 1,
        })
        .collect();
    Quiver::new(n, arrows)
}

/// Two vertices, two parallel arrows `2 -> 1`.
pub fn kronecker_quiver() -> Quiver {
    Quiver::new(
        2,
        vec![
            Arrow {
                label: "al".into(),
                source: 1,
                target: 0,
            },
            Arrow {
                label: "be".into(),
                source: 1,
                target: 0,
            },
        ],
    )
    .expect("static quiver is valid")
}

/// Four vertices, tree shaped: `4 -> 2`, `3 -> 2`, `2 -> 1`.
pub fn branched_tree_quiver() -> Quiver {
    Quiver::new(
        4,
        vec![
            Arrow {
                label: "b_4_2".into(),
                source: 3,
                target: 1,
            },
            Arrow {
                label: "b_3_2".into(),
                source: 2,
                target: 1,
            },
            Arrow {
                label: "b_2_1".into(),
                source: 1,
                target: 0,
            },
        ],
    )
    .expect("static quiver is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal() {
        let q = Quiver::parse("vertices 2\narrow a 2 1").unwrap();
        assert_eq!(q.n_vertices(), 2);
        assert_eq!(q.arrows().len(), 1);
        assert_eq!(q.arrows()[0].source, 1);
        assert_eq!(q.arrows()[0].target, 0);
    }

    #[test]
    fn parse_kronecker() {
        let q = Quiver::parse("vertices 2\narrow a 2 1\narrow b 2 1").unwrap();
        assert_eq!(q.arrows().len(), 2);
        assert_eq!(q.paths().unwrap().len(), 4); // e_1, e_2, a, b
    }

    #[test]
    fn loop_parses_but_fails_validation() {
        let q = Quiver::parse("vertices 1\narrow a 1 1").unwrap();
        let v = q.validate();
        assert!(!v.acyclic);
        assert!(v.numbering.is_none());
        assert!(q.paths().is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Quiver::parse("vertices 2\narrow a 3 1").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = Quiver::parse("vertices 2\narrow a 2 1\narrow a 2 1").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        let err = Quiver::parse("arrow a 2 1").unwrap_err();
        assert!(err.to_string().contains("vertices"), "{err}");
        let err = Quiver::parse("vertices 2\narrow e_1 2 1").unwrap_err();
        assert!(err.to_string().contains("reserved"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let q = Quiver::parse("# a quiver\nvertices 2 # two\n\narrow a 2 1\n").unwrap();
        assert_eq!(q.arrows().len(), 1);
    }

    #[test]
    fn validate_linear() {
        let q = linear_quiver(3).unwrap();
        let v = q.validate();
        assert!(v.acyclic && v.connected);
        assert_eq!(v.numbering, Some(vec![1, 2, 3]));
    }

    #[test]
    fn validate_disconnected() {
        let q = Quiver::new(2, vec![]).unwrap();
        let v = q.validate();
        assert!(v.acyclic);
        assert!(!v.connected);
        assert!(v.numbering.is_some());
    }

    // independent recursive DFS cycle detector used as an oracle
    fn has_cycle_dfs(q: &Quiver) -> bool {
        fn visit(
            v: usize,
            adj: &[Vec<usize>],
            state: &mut Vec<u8>, // 0 unvisited, 1 on stack, 2 done
        ) -> bool {
            state[v] = 1;
            for &w in &adj[v] {
                if state[w] == 1 || (state[w] == 0 && visit(w, adj, state)) {
                    return true;
                }
            }
            state[v] = 2;
            false
        }
        let mut adj = vec![Vec::new(); q.n_vertices()];
        for a in q.arrows() {
            adj[a.source].push(a.target);
        }
        let mut state = vec![0u8; q.n_vertices()];
        (0..q.n_vertices()).any(|v| state[v] == 0 && visit(v, &adj, &mut state))
    }

    #[test]
    fn two_cycle_detected() {
        let q = Quiver::new(
            2,
            vec![
                Arrow {
                    label: "f".into(),
                    source: 0,
                    target: 1,
                },
                Arrow {
                    label: "g".into(),
                    source: 1,
                    target: 0,
                },
            ],
        )
        .unwrap();
        assert!(has_cycle_dfs(&q));
        let v = q.validate();
        assert!(!v.acyclic);
        assert!(v.connected);
        assert!(v.numbering.is_none());
    }

    #[test]
    fn validation_agrees_with_dfs_oracle() {
        let samples = vec![
            linear_quiver(4).unwrap(),
            kronecker_quiver(),
            branched_tree_quiver(),
            Quiver::parse("vertices 3\narrow x 1 2\narrow y 2 3\narrow z 3 1").unwrap(),
            Quiver::parse("vertices 1\narrow l 1 1").unwrap(),
        ];
        for q in samples {
            assert_eq!(q.validate().acyclic, !has_cycle_dfs(&q), "{:?}", q);
        }
    }

    #[test]
    fn numbering_decreases_along_arrows() {
        for q in [
            linear_quiver(5).unwrap(),
            kronecker_quiver(),
            branched_tree_quiver(),
            Quiver::parse("vertices 4\narrow u 1 2\narrow v 1 3\narrow w 3 4").unwrap(),
        ] {
            let v = q.validate();
            let numbering = v.numbering.expect("acyclic");
            for a in q.arrows() {
                assert!(
                    numbering[a.source] > numbering[a.target],
                    "arrow {} does not decrease",
                    a.label
                );
            }
        }
    }

    #[test]
    fn paths_single_vertex() {
        let q = Quiver::new(1, vec![]).unwrap();
        let ps = q.paths().unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].label(&q), "e_1");
    }

    #[test]
    fn paths_linear_three() {
        let q = linear_quiver(3).unwrap();
        let ps = q.paths().unwrap();
        assert_eq!(ps.len(), 6); // 3 stationary + 2 arrows + 1 length-2
        assert_eq!(ps[0].label(&q), "e_1");
        assert_eq!(ps[5].label(&q), "a_3_2*a_2_1");
        assert_eq!(ps[5].source, 2);
        assert_eq!(ps[5].target, 0);
    }

    #[test]
    fn path_count_matches_adjacency_powers() {
        // independent count: sum over k of (adjacency matrix)^k
        for q in [
            linear_quiver(4).unwrap(),
            kronecker_quiver(),
            branched_tree_quiver(),
        ] {
            let n = q.n_vertices();
            let mut adj = vec![vec![0usize; n]; n];
            for a in q.arrows() {
                adj[a.source][a.target] += 1;
            }
            let mut total = vec![vec![0usize; n]; n];
            for (i, row) in total.iter_mut().enumerate() {
                row[i] = 1;
            }
            let mut power = total.clone();
            for _ in 0..n {
                let mut next = vec![vec![0usize; n]; n];
                for i in 0..n {
                    for k in 0..n {
                        if power[i][k] == 0 {
                            continue;
                        }
                        for j in 0..n {
                            next[i][j] += power[i][k] * adj[k][j];
                        }
                    }
                }
                power = next;
                for i in 0..n {
                    for j in 0..n {
                        total[i][j] += power[i][j];
                    }
                }
            }
            assert_eq!(q.path_counts().unwrap(), total);
        }
    }

    #[test]
    fn file_round_trip() {
        for q in [
            linear_quiver(3).unwrap(),
            kronecker_quiver(),
            branched_tree_quiver(),
        ] {
            let text = q.to_file_string();
            assert_eq!(Quiver::parse(&text).unwrap(), q);
            // canonical-form text round-trips byte for byte
            assert_eq!(Quiver::parse(&text).unwrap().to_file_string(), text);
        }
    }
}
