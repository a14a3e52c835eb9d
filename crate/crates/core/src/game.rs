//! XOR non-local games as normalized cost matrices, plus the structured
//! generators (graph games, complete-graph games, pair-difference games,
//! anticommutation games) and the exact classical bias.
//!
//! A game is fully described by its cost matrix `G`: the probability of
//! question pair `(i, j)` is `|G_ij|` and the target parity is `sign(G_ij)`,
//! so the matrix is kept normalized to `Σ|G_ij| = 1`.

use crate::error::{Error, Result};
use crate::linalg::RMat;
use serde::{Deserialize, Serialize};

/// Hard cap on the exhaustive side of the classical-bias enumeration.
pub const CLASSICAL_ENUM_CAP: usize = 24;

/// Upper limit on `n` for [`cl_game`]; the vertex count is `2^n − 1`.
pub const CL_GAME_MAX_N: usize = 12;

/// An XOR non-local game with `m` questions for the row player and `n` for
/// the column player, described by a normalized cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    m: usize,
    n: usize,
    cost: RMat,
}

impl Game {
    /// Row-player question count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Column-player question count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The normalized cost matrix.
    pub fn cost(&self) -> &RMat {
        &self.cost
    }
}

/// Build a game from a dense cost matrix.
///
/// With `normalize` set, the matrix is divided by `Σ|entries|`; otherwise the
/// sum must already be 1 within `1e−9`.
pub fn new_game(matrix: RMat, normalize: bool) -> Result<Game> {
    if matrix.nrows() == 0 || matrix.ncols() == 0 {
        return Err(Error::OutOfRange("cost matrix must be non-empty".into()));
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteEntry {
            context: "cost matrix",
        });
    }
    let sum: f64 = matrix.iter().map(|x| x.abs()).sum();
    if sum == 0.0 {
        return Err(Error::AllZeroMatrix);
    }
    let cost = if normalize {
        &matrix / sum
    } else {
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { sum });
        }
        matrix
    };
    Ok(Game {
        m: cost.nrows(),
        n: cost.ncols(),
        cost,
    })
}

/// An undirected simple graph with 1-based vertices, edges stored as
/// lexicographically sorted pairs `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    v: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Validate and normalize a vertex count and edge list.
    ///
    /// Edges may be given in either orientation; they are stored sorted with
    /// `i < j`. Self-loops, duplicates, and out-of-range endpoints are
    /// rejected.
    pub fn new(v: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if v == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut sorted: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a < 1 || b < 1 || a > v || b > v {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) outside vertex range [1, {v}]"
                )));
            }
            sorted.push((a.min(b), a.max(b)));
        }
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        Ok(Graph { v, edges: sorted })
    }

    /// Vertex count.
    pub fn v(&self) -> usize {
        self.v
    }

    /// Edges as sorted pairs `(i, j)`, `i < j`, 1-based.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(n.saturating_mul(n.saturating_sub(1)) / 2);
        for i in 1..=n {
            for j in (i + 1)..=n {
                edges.push((i, j));
            }
        }
        Graph::new(n, edges)
    }
}

/// Game of a graph: two rows per edge `(i, j)` — the difference row
/// `(e_i − e_j)/4e` followed by the sum row `(e_i + e_j)/4e`, where `e` is
/// the edge count. Dimensions `2e × v`, entries in `{0, ±1/(4e)}`.
pub fn graph_game(g: &Graph) -> Result<Game> {
    let e = g.edges().len();
    if e == 0 {
        return Err(Error::EmptyGraph);
    }
    let w = 1.0 / (4.0 * e as f64);
    let mut cost = RMat::zeros(2 * e, g.v());
    for (row_pair, &(i, j)) in g.edges().iter().enumerate() {
        cost[(2 * row_pair, i - 1)] = w;
        cost[(2 * row_pair, j - 1)] = -w;
        cost[(2 * row_pair + 1, i - 1)] = w;
        cost[(2 * row_pair + 1, j - 1)] = w;
    }
    new_game(cost, false)
}

/// Complete-graph game on `n` vertices: `graph_game(K_n)`, with dimensions
/// `n(n−1) × n`. For `n = 2` this is the familiar 2×2 game with entries
/// `±1/4`.
pub fn chsh_game(n: usize) -> Result<Game> {
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "complete-graph game needs n ≥ 2, got {n}"
        )));
    }
    graph_game(&Graph::complete(n)?)
}

/// Pair-difference game: rows indexed by pairs `i < j` in lexicographic
/// order, with `G_{(ij),k} = 1/2m` if `k = i`, `−1/2m` if `k = j`, else 0,
/// where `m = n(n−1)/2`. The quantum bias of this family meets the question
/// count bound on entanglement with equality.
pub fn tight_game(n: usize) -> Result<Game> {
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "pair-difference game needs n ≥ 2, got {n}"
        )));
    }
    let m = n * (n - 1) / 2;
    let w = 1.0 / (2.0 * m as f64);
    let mut cost = RMat::zeros(m, n);
    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            cost[(row, i)] = w;
            cost[(row, j)] = -w;
            row += 1;
        }
    }
    new_game(cost, false)
}

/// Vertex set of the anticommutation graph on `n` generators: all non-empty
/// subsets of `{1..n}` as bitmasks, ascending. Index `k` in the returned
/// list is vertex `k+1` of [`cl_game`].
pub fn cl_vertices(n: usize) -> Vec<u32> {
    (1u32..(1u32 << n)).collect()
}

/// Anticommutation game on `n` generators: vertices are the non-empty
/// subsets `S ⊆ {1..n}` (bitmask ascending), with an edge between `S` and
/// `T` exactly when `|S|·|T| − |S∩T|` is odd, i.e. when the corresponding
/// generator monomials anticommute. Returns `graph_game` of that graph.
pub fn cl_game(n: usize) -> Result<Game> {
    graph_game(&cl_graph(n)?)
}

/// The anticommutation graph underlying [`cl_game`].
pub fn cl_graph(n: usize) -> Result<Graph> {
    if !(2..=CL_GAME_MAX_N).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "anticommutation game needs 2 ≤ n ≤ {CL_GAME_MAX_N}, got {n}"
        )));
    }
    let verts = cl_vertices(n);
    let mut edges = Vec::new();
    for (a, &s) in verts.iter().enumerate() {
        for (b, &t) in verts.iter().enumerate().skip(a + 1) {
            let ks = s.count_ones();
            let kt = t.count_ones();
            let inter = (s & t).count_ones();
            if (ks * kt - inter) % 2 == 1 {
                edges.push((a + 1, b + 1));
            }
        }
    }
    Graph::new(verts.len(), edges)
}

/// Exact classical bias by exhaustive enumeration of the smaller question
/// side: `max` over `y ∈ {±1}^k` of `Σ_i |row_i(G)·y|` with `k = min(m, n)`
/// (the larger side is optimized by taking signs). Exact up to floating
/// round-off.
pub fn classical_bias(game: &Game) -> Result<f64> {
    let (m, n) = (game.m(), game.n());
    let transpose_needed = m < n;
    let small = m.min(n);
    if small > CLASSICAL_ENUM_CAP {
        return Err(Error::TooLarge {
            side: small,
            cap: CLASSICAL_ENUM_CAP,
        });
    }
    let g = if transpose_needed {
        game.cost().transpose()
    } else {
        game.cost().clone()
    };
    let rows = g.nrows();
    let mut best = f64::NEG_INFINITY;
    let mut y = vec![1.0f64; small];
    // The bias is invariant under a global sign flip of y, so the last
    // coordinate can be fixed at +1 and only 2^(k−1) patterns visited.
    let patterns: u64 = 1u64 << (small - 1).min(63);
    for bits in 0..patterns {
        for (j, sign) in y.iter_mut().enumerate().take(small.saturating_sub(1)) {
            *sign = if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
        }
        let mut total = 0.0;
        for i in 0..rows {
            let mut dot = 0.0;
            for (j, sign) in y.iter().enumerate() {
                dot += g[(i, j)] * sign;
            }
            total += dot.abs();
        }
        if total > best {
            best = total;
        }
    }
    Ok(best)
}

/// Largest integer `r` with `r(r+1)/2 < m + n`; the associated entanglement
/// upper bound for an `m × n` game is `⌊r/2⌋` ebits.
pub fn tsirelson_r(m: usize, n: usize) -> usize {
    let total = m + n;
    let mut r = 1usize;
    while (r + 1) * (r + 2) / 2 < total {
        r += 1;
    }
    r
}
