//! Confusability graphs, their independence number, and clique partitions.
//!
//! The vertex set of `G(n, t)` is `{0,1}^n`; two distinct words are adjacent
//! when they are `t`-confusable. A maximum independent set is a largest
//! `t`-grain-correcting code, and a clique partition of `G(m, s)` yields the
//! product upper bounds in [`crate::bounds`].

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::caps::Caps;
use crate::codes::construct_rn;
use crate::error::{Error, Result};
use crate::model::{error_masks, error_masks_unchecked, images_raw, phi_inverse_sets};
use crate::word::Word;

/// Known upper bounds on the clique-partition number of `G(m, s)` obtained
/// by greedy search: `(m, s, parts, known_exact)`.
pub const REFERENCE_CHI_BOUNDS: &[(usize, usize, u64, bool)] = &[
    (2, 1, 2, true),
    (3, 1, 4, true),
    (4, 1, 6, true),
    (5, 1, 10, true),
    (6, 1, 18, false),
    (7, 1, 36, false),
    (8, 1, 66, false),
    (9, 1, 122, false),
    (10, 1, 236, false),
    (11, 1, 428, false),
    (12, 1, 834, false),
    (13, 1, 1574, false),
    (14, 1, 3008, false),
    (15, 1, 5716, false),
    (16, 1, 11014, false),
    (4, 2, 4, true),
    (5, 2, 8, true),
    (6, 2, 12, false),
    (7, 2, 18, false),
    (8, 2, 30, false),
    (9, 2, 54, false),
    (10, 2, 92, false),
    (11, 2, 162, false),
    (12, 2, 284, false),
    (13, 2, 530, false),
    (14, 2, 948, false),
    (15, 2, 1730, false),
    (16, 2, 3210, false),
    (6, 3, 8, true),
    (7, 3, 16, true),
    (8, 3, 24, false),
    (9, 3, 34, false),
    (10, 3, 56, false),
    (11, 3, 88, false),
    (12, 3, 138, false),
    (13, 3, 238, false),
    (14, 3, 418, false),
    (15, 3, 716, false),
    (16, 3, 1266, false),
    (8, 4, 16, true),
    (9, 4, 32, true),
    (10, 4, 44, false),
    (11, 4, 64, false),
    (12, 4, 98, false),
    (13, 4, 156, false),
    (14, 4, 248, false),
    (15, 4, 392, false),
    (16, 4, 662, false),
];

/// Looks up the reference bound for `(m, s)`.
pub fn reference_chi(m: usize, s: usize) -> Option<u64> {
    REFERENCE_CHI_BOUNDS
        .iter()
        .find(|&&(mm, ss, _, _)| mm == m && ss == s)
        .map(|&(_, _, v, _)| v)
}

/// `G(n, t)` with adjacency lists in compressed form.
#[derive(Debug, Clone)]
pub struct ConfusabilityGraph {
    n: usize,
    t: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl ConfusabilityGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub(crate) fn neighbors_raw(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighbors(&self, x: &Word) -> Vec<Word> {
        assert_eq!(x.len(), self.n);
        self.neighbors_raw(x.value() as usize)
            .iter()
            .map(|&v| Word::from_raw(self.n, u64::from(v)))
            .collect()
    }

    pub fn degree(&self, x: &Word) -> usize {
        self.neighbors_raw(x.value() as usize).len()
    }

    pub fn has_edge(&self, a: &Word, b: &Word) -> bool {
        self.neighbors_raw(a.value() as usize)
            .binary_search(&(b.value() as u32))
            .is_ok()
    }
}

/// Builds `G(n, t)`. Neighbours of `x` are the members of `Phi^{-1}(y)` over
/// all images `y` of `x`.
pub fn build_graph(n: usize, t: usize, caps: &Caps) -> Result<ConfusabilityGraph> {
    if n == 0 {
        return Err(Error::precondition("length must be positive"));
    }
    Error::check_cap("n (confusability graph)", n, caps.graph_n)?;
    let inverse = phi_inverse_sets(n, t, caps)?;
    let masks = error_masks(n, t, caps)?;
    let lists: Vec<Vec<u32>> = (0..1u64 << n)
        .into_par_iter()
        .map(|x| {
            let mut nb: Vec<u32> = images_raw(x, &masks)
                .into_iter()
                .flat_map(|y| inverse.raw(y).iter().copied())
                .filter(|&v| u64::from(v) != x)
                .collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    let mut offsets = Vec::with_capacity(lists.len() + 1);
    offsets.push(0);
    for l in &lists {
        offsets.push(offsets.last().unwrap() + l.len());
    }
    let neighbors = lists.into_iter().flatten().collect();
    Ok(ConfusabilityGraph {
        n,
        t,
        offsets,
        neighbors,
    })
}

/// Outcome of the independence-number search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisResult {
    pub n: usize,
    pub t: usize,
    /// Size of `witness`; equals `M(n, t)` when `exact` holds.
    pub size: usize,
    /// A `t`-grain-correcting code of length `n`, sorted.
    pub witness: Vec<Word>,
    /// False when the search stopped at the time limit; `size` is then only
    /// a lower bound.
    pub exact: bool,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

/// Exact `M(n, t)` by branch and bound on `G(n, t)`.
///
/// Candidates are bounded by a greedy partition into cliques: an independent
/// set meets each clique at most once. Vertices are renumbered by increasing
/// degree, ties broken numerically, so the search is deterministic.
pub fn exact_m(n: usize, t: usize, caps: &Caps, time_limit: Option<Duration>) -> Result<MisResult> {
    let cap = if t <= 1 { caps.mis_n } else { caps.mis_n_multi };
    Error::check_cap("n (exact independence number)", n, cap)?;
    let graph = build_graph(n, t, caps)?;
    // Words starting with 0 are never confusable with words starting with 1,
    // and complementation maps one half onto the other, so it suffices to
    // solve the half with x_1 = 0 and mirror the result.
    let size = graph.vertex_count() / 2;

    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&v| (graph.neighbors_raw(v).len(), v));
    let mut position = vec![0usize; size];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let adj: Vec<BitSet> = order
        .iter()
        .map(|&v| {
            let mut row = BitSet::new(size);
            for &u in graph.neighbors_raw(v) {
                row.insert(position[u as usize]);
            }
            row
        })
        .collect();

    // incumbent: the better of R_n and a minimum-degree greedy set
    let rn: Vec<usize> = construct_rn(n)?
        .words()
        .iter()
        .filter(|w| (w.value() as usize) < size)
        .map(|w| position[w.value() as usize])
        .collect();
    let mut greedy = Vec::new();
    let mut free = BitSet::full(size);
    while let Some(v) = free.first() {
        greedy.push(v);
        free.remove(v);
        free.difference_with(&adj[v]);
    }
    let incumbent = if greedy.len() > rn.len() { greedy } else { rn };

    let mut search = MisSearch {
        adj: &adj,
        best: incumbent,
        current: Vec::new(),
        nodes: 0,
        deadline: time_limit.map(|d| Instant::now() + d),
        timed_out: false,
    };
    search.expand(BitSet::full(size));

    let mut witness: Vec<Word> = search
        .best
        .iter()
        .map(|&i| Word::from_raw(n, order[i] as u64))
        .flat_map(|w| [w, w.complement()])
        .collect();
    witness.sort();
    Ok(MisResult {
        n,
        t,
        size: witness.len(),
        witness,
        exact: !search.timed_out,
        nodes: search.nodes,
    })
}

struct MisSearch<'a> {
    adj: &'a [BitSet],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl MisSearch<'_> {
    /// Greedy clique cover of `p`: vertices with the 1-based index of their clique.
    fn cover(&self, p: &BitSet) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.len());
        let mut uncovered = p.clone();
        let mut k = 0;
        while !uncovered.is_empty() {
            k += 1;
            let mut q = uncovered.clone();
            while let Some(v) = q.first() {
                out.push((v, k));
                uncovered.remove(v);
                q.remove(v);
                q.intersect_with(&self.adj[v]);
            }
        }
        out
    }

    fn expand(&mut self, mut p: BitSet) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        let cover = self.cover(&p);
        for &(v, k) in cover.iter().rev() {
            if self.current.len() + k <= self.best.len() {
                return;
            }
            self.current.push(v);
            let mut next = p.clone();
            next.remove(v);
            next.difference_with(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p.remove(v);
            if self.timed_out {
                return;
            }
        }
    }
}

/// A partition of `{0,1}^m` into cliques of `G(m, s)`, each part generated
/// by a witness word `y` as the not-yet-covered part of `Phi^{-1}(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePartition {
    pub m: usize,
    pub s: usize,
    pub parts: Vec<Vec<Word>>,
    pub witnesses: Vec<Word>,
}

impl CliquePartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parses the `k: y_k : x x x ...` line format. `m` is taken from the
    /// word lengths.
    pub fn parse(text: &str, s: usize) -> Result<Self> {
        let mut parts = Vec::new();
        let mut witnesses = Vec::new();
        let mut m = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.splitn(3, ':').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected `k: y : x x ...`",
                    lineno + 1
                )));
            }
            let y: Word = fields[1].parse()?;
            let members = fields[2]
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<Vec<Word>>>()?;
            for w in std::iter::once(&y).chain(&members) {
                match m {
                    None => m = Some(w.len()),
                    Some(len) if len != w.len() => {
                        return Err(Error::LengthMismatch {
                            left: len,
                            right: w.len(),
                        })
                    }
                    _ => {}
                }
            }
            witnesses.push(y);
            parts.push(members);
        }
        Ok(CliquePartition {
            m: m.ok_or_else(|| Error::Parse("empty partition".into()))?,
            s,
            parts,
            witnesses,
        })
    }
}

impl fmt::Display for CliquePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (y, part)) in self.witnesses.iter().zip(&self.parts).enumerate() {
            let members: Vec<String> = part.iter().map(Word::to_string).collect();
            writeln!(f, "{}: {} : {}", k + 1, y, members.join(" "))?;
        }
        Ok(())
    }
}

/// Greedy clique partition of `G(m, s)`: repeatedly take the `y` whose
/// remaining inverse image is largest (smallest `y` on ties), make that
/// remainder a part, and remove its members from every other inverse image.
pub fn greedy_clique_partition(m: usize, s: usize, caps: &Caps) -> Result<CliquePartition> {
    let inverse = phi_inverse_sets(m, s, caps)?;
    let masks = error_masks(m, s, caps)?;
    let size = 1usize << m;
    let mut remaining: Vec<usize> = (0..size).map(|y| inverse.raw(y as u64).len()).collect();
    let mut covered = vec![false; size];
    let mut parts = Vec::new();
    let mut witnesses = Vec::new();
    loop {
        // first index of the maximum, i.e. lexicographically smallest y
        let (best, &count) = remaining
            .iter()
            .enumerate()
            .rev()
            .max_by_key(|&(_, c)| c)
            .expect("nonempty");
        if count == 0 {
            break;
        }
        let part: Vec<u64> = inverse
            .raw(best as u64)
            .iter()
            .map(|&x| u64::from(x))
            .filter(|&x| !covered[x as usize])
            .collect();
        for &x in &part {
            covered[x as usize] = true;
            for y in images_raw(x, &masks) {
                remaining[y as usize] -= 1;
            }
        }
        witnesses.push(Word::from_raw(m, best as u64));
        parts.push(part.into_iter().map(|x| Word::from_raw(m, x)).collect());
    }
    Ok(CliquePartition {
        m,
        s,
        parts,
        witnesses,
    })
}

/// Checks that the parts are disjoint, cover `{0,1}^m`, and that every pair
/// inside a part is `s`-confusable.
pub fn verify_clique_partition(p: &CliquePartition) -> bool {
    let m = p.m;
    if m == 0 || m >= 32 {
        return false;
    }
    let mut seen = vec![false; 1 << m];
    for part in &p.parts {
        for w in part {
            if w.len() != m || std::mem::replace(&mut seen[w.value() as usize], true) {
                return false;
            }
        }
    }
    if !seen.iter().all(|&s| s) {
        return false;
    }
    let masks = error_masks_unchecked(m, p.s);
    p.parts.par_iter().all(|part| {
        let images: Vec<Vec<u64>> = part.iter().map(|w| images_raw(w.value(), &masks)).collect();
        (0..images.len()).all(|i| (i + 1..images.len()).all(|j| intersects(&images[i], &images[j])))
    })
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChiEntry {
    pub m: usize,
    pub s: usize,
    pub parts: usize,
}

/// Greedy partition sizes for every `(m, s)` in the ranges with `1 <= s <= m/2`.
pub fn chi_table(
    m_range: std::ops::RangeInclusive<usize>,
    s_range: std::ops::RangeInclusive<usize>,
    caps: &Caps,
) -> Result<Vec<ChiEntry>> {
    let mut out = Vec::new();
    for m in m_range {
        for s in s_range.clone() {
            if s == 0 || 2 * s > m {
                continue;
            }
            let p = greedy_clique_partition(m, s, caps)?;
            out.push(ChiEntry {
                m,
                s,
                parts: p.len(),
            });
        }
    }
    Ok(out)
}

/// Renders entries as CSV with header `m,s,parts`.
pub fn chi_table_csv(entries: &[ChiEntry]) -> String {
    let mut out = String::from("m,s,parts\n");
    for e in entries {
        out.push_str(&format!("{},{},{}\n", e.m, e.s, e.parts));
    }
    out
}

/// Parses `m,s,parts` CSV (header optional, `#` comments ignored).
pub fn parse_chi_table(text: &str) -> Result<Vec<ChiEntry>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('m') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("expected `m,s,parts`, got `{line}`")));
        }
        let num = |f: &str| {
            f.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number `{f}` in `{line}`")))
        };
        out.push(ChiEntry {
            m: num(fields[0])?,
            s: num(fields[1])?,
            parts: num(fields[2])?,
        });
    }
    Ok(out)
}
