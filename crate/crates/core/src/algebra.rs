//! Solution algebras of XOR games and their Clifford structure.
//!
//! The solution algebra of a game with cost matrix `G` and marginal row
//! biases `c_i` is generated by Hermitian involutions `X_1..X_n` subject to
//! `X_j² = Id` and `(Σ_j G_ij X_j)² = c_i²·Id`. When linear combinations of
//! those defining relations pin every anticommutator `X_kX_l + X_lX_k` to a
//! scalar, the algebra is *strongly Clifford*: it is a rank-`r` Clifford
//! algebra, its non-zero representations all have dimension a multiple of
//! `2^⌊r/2⌋`, and playing the game optimally needs at least `⌊r/2⌋` ebits.
//!
//! Detection is linear algebra: the relation coefficient matrices
//! `{E^{jj}} ∪ {G^i}` (with `G^i_kl = G_ik·G_il`) must span the full
//! `n(n+1)/2`-dimensional space of symmetric matrices. Cost grows with
//! `n(n+1)/2`, so certificate computation is intended for moderate `n`;
//! relation verification against concrete matrices scales much further.

use crate::error::{Error, Result};
use crate::game::Game;
use crate::linalg::{ceye, kron, op_norm, CMat, RMat};
use num_complex::Complex64;

/// Hard cap on the Clifford rank accepted by [`clifford_generators`]
/// (dimension `2^12` per irreducible factor).
pub const CLIFFORD_RANK_CAP: usize = 24;

/// One defining relation of a solution algebra, stored symbolically; the
/// quadratic form it represents is recovered through
/// [`SolutionAlgebra::relation_coefficients`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `X_j² = Id`.
    Involution { j: usize },
    /// `(Σ_j G_ij X_j)² = c_i²·Id`.
    Row { i: usize },
}

/// A game's solution algebra: `n` generators, the squared marginal row
/// biases, and the `m + n` defining relations.
#[derive(Debug, Clone)]
pub struct SolutionAlgebra {
    game: Game,
    c2: Vec<f64>,
    relations: Vec<Relation>,
}

impl SolutionAlgebra {
    /// Number of generators (one per column of the cost matrix).
    pub fn n(&self) -> usize {
        self.game.n()
    }

    /// The underlying game.
    pub fn game(&self) -> &Game {
        &self.game
    }

    /// Squared marginal row biases `c_i²`.
    pub fn c2(&self) -> &[f64] {
        &self.c2
    }

    /// The `m + n` defining relations.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Scalar right-hand side of a relation (`1` or `c_i²`).
    pub fn relation_rhs(&self, rel: Relation) -> f64 {
        match rel {
            Relation::Involution { .. } => 1.0,
            Relation::Row { i } => self.c2[i],
        }
    }

    /// The symmetric coefficient matrix `M` of a relation, read as
    /// `Σ_{jk} M_jk·(X_jX_k + X_kX_j)/2 = rhs·Id`.
    pub fn relation_coefficients(&self, rel: Relation) -> RMat {
        let n = self.n();
        match rel {
            Relation::Involution { j } => {
                let mut m = RMat::zeros(n, n);
                m[(j, j)] = 1.0;
                m
            }
            Relation::Row { i } => {
                let row = self.game.cost().row(i).transpose();
                &row * row.transpose()
            }
        }
    }
}

/// Build the solution algebra of `game` with marginal row biases `c`.
pub fn build_solution_algebra(game: &Game, c: &[f64]) -> Result<SolutionAlgebra> {
    if c.len() != game.m() {
        return Err(Error::DimensionMismatch(format!(
            "c has {} entries, expected {}",
            c.len(),
            game.m()
        )));
    }
    for (i, &ci) in c.iter().enumerate() {
        if !ci.is_finite() {
            return Err(Error::NonFiniteEntry {
                context: "marginal biases",
            });
        }
        if ci < 0.0 {
            return Err(Error::OutOfRange(format!(
                "marginal bias c[{i}] = {ci} is negative"
            )));
        }
    }
    let mut relations = Vec::with_capacity(game.m() + game.n());
    for j in 0..game.n() {
        relations.push(Relation::Involution { j });
    }
    for i in 0..game.m() {
        relations.push(Relation::Row { i });
    }
    Ok(SolutionAlgebra {
        game: game.clone(),
        c2: c.iter().map(|&ci| ci * ci).collect(),
        relations,
    })
}

/// Coefficients expressing the pair basis matrix `E^{kl}` as
/// `Σ_j s_j E^{jj} + Σ_i t_i G^i`.
#[derive(Debug, Clone)]
pub struct PairCoefficients {
    pub k: usize,
    pub l: usize,
    /// Coefficients of the involution relations, length `n`.
    pub s: Vec<f64>,
    /// Coefficients of the row relations, length `m`.
    pub t: Vec<f64>,
}

/// Numerical thresholds for [`strongly_clifford_certificate_with`].
#[derive(Debug, Clone)]
pub struct CertificateOptions {
    /// Singular values above this count toward the spanning rank.
    pub spanning_tol: f64,
    /// Eigenvalues of `V` with `|λ|` above this count toward `rank(V)`.
    pub rank_tol: f64,
    /// Maximum per-pair reconstruction residual for the certificate to
    /// stand.
    pub residual_tol: f64,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions {
            spanning_tol: 1e-9,
            rank_tol: 1e-7,
            residual_tol: 1e-8,
        }
    }
}

/// Outcome of the strong-Cliffordness decision.
///
/// When `is_strongly_clifford` holds, `v` is the anticommutator matrix
/// (`X_kX_l + X_lX_k = 2·V_kl·Id` off the diagonal, `V_kk := 1` from
/// `X_k² = Id`), `coeffs` certifies each pair, and `r`/`min_dim`/`ebits`
/// carry the rank consequences. Otherwise those fields are absent and the
/// minimum representation dimension is unknown (lower bound 1).
#[derive(Debug, Clone)]
pub struct CliffordCertificate {
    pub is_strongly_clifford: bool,
    /// Anticommutator coefficient matrix, unit diagonal by convention.
    pub v: Option<RMat>,
    /// Certifying coefficients for each pair `k ≤ l`.
    pub coeffs: Vec<PairCoefficients>,
    /// `rank(V)`: eigenvalues with `|λ|` above the rank threshold.
    pub r: Option<usize>,
    /// `2^⌊r/2⌋` — minimum dimension of a non-zero representation.
    pub min_dim: Option<usize>,
    /// `⌊r/2⌋` — entanglement lower bound for optimal play.
    pub ebits: Option<usize>,
}

/// Minimum representation dimension and ebit count of a strongly Clifford
/// solution algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinEntanglement {
    pub min_dim: usize,
    pub ebits: usize,
}

/// [`strongly_clifford_certificate_with`] at default thresholds.
pub fn strongly_clifford_certificate(alg: &SolutionAlgebra) -> CliffordCertificate {
    strongly_clifford_certificate_with(alg, &CertificateOptions::default())
}

/// Decide strong-Cliffordness of a solution algebra.
///
/// Builds the `n(n+1)/2 × (n+m)` coefficient matrix of the family
/// `{E^{jj}} ∪ {G^i}` in the symmetric-matrix basis (columns normalized —
/// rank is column-scale invariant), computes its rank by SVD, and when the
/// family spans, recovers minimum-norm coefficients for every pair matrix
/// `E^{kl}` and assembles `V` via `2·V_kl = Σ_j s_j + Σ_i t_i c_i²`.
pub fn strongly_clifford_certificate_with(
    alg: &SolutionAlgebra,
    opts: &CertificateOptions,
) -> CliffordCertificate {
    let n = alg.n();
    let m = alg.game().m();
    let g = alg.game().cost();
    let dim_sym = n * (n + 1) / 2;
    let fam = n + m;

    // Pair index map: (k, l) with k ≤ l, lexicographic.
    let pair_index = |k: usize, l: usize| -> usize {
        debug_assert!(k <= l);
        // pairs (0,0..n-1), (1,1..n-1), ...
        k * n - k * (k + 1) / 2 + l
    };

    let mut a = RMat::zeros(dim_sym, fam);
    for j in 0..n {
        a[(pair_index(j, j), j)] = 1.0;
    }
    for i in 0..m {
        let row = g.row(i);
        for k in 0..n {
            for l in k..n {
                a[(pair_index(k, l), n + i)] = row[k] * row[l];
            }
        }
    }

    // Normalize columns so the fixed singular-value threshold is meaningful
    // regardless of the cost-matrix scale; remember the factors to undo the
    // scaling on recovered coefficients.
    let mut scale = vec![1.0f64; fam];
    for jcol in 0..fam {
        let norm = a.column(jcol).norm();
        if norm > 0.0 {
            scale[jcol] = norm;
            let scaled = a.column(jcol) / norm;
            a.set_column(jcol, &scaled);
        }
    }

    let svd = a.clone().svd(true, true);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > opts.spanning_tol)
        .count();
    if rank < dim_sym {
        return CliffordCertificate {
            is_strongly_clifford: false,
            v: None,
            coeffs: Vec::new(),
            r: None,
            min_dim: None,
            ebits: None,
        };
    }

    let u = svd.u.as_ref().expect("SVD with u requested");
    let v_t = svd.v_t.as_ref().expect("SVD with v_t requested");
    let sv = &svd.singular_values;

    let mut coeffs = Vec::with_capacity(dim_sym);
    let mut vmat = RMat::identity(n, n);
    for k in 0..n {
        for l in k..n {
            let mut b = nalgebra::DVector::<f64>::zeros(dim_sym);
            b[pair_index(k, l)] = 1.0;
            // Minimum-norm solution through the SVD pseudo-inverse.
            let mut y = u.transpose() * &b;
            for (idx, yi) in y.iter_mut().enumerate() {
                if sv[idx] > opts.spanning_tol {
                    *yi /= sv[idx];
                } else {
                    *yi = 0.0;
                }
            }
            let mut x = v_t.transpose() * y;
            let residual = (&a * &x - &b).norm();
            if residual > opts.residual_tol {
                return CliffordCertificate {
                    is_strongly_clifford: false,
                    v: None,
                    coeffs: Vec::new(),
                    r: None,
                    min_dim: None,
                    ebits: None,
                };
            }
            for (idx, xi) in x.iter_mut().enumerate() {
                *xi /= scale[idx];
            }
            let s: Vec<f64> = x.iter().take(n).copied().collect();
            let t: Vec<f64> = x.iter().skip(n).copied().collect();
            if k != l {
                let raw: f64 = s.iter().sum::<f64>()
                    + t.iter()
                        .zip(alg.c2())
                        .map(|(ti, &c2i)| ti * c2i)
                        .sum::<f64>();
                vmat[(k, l)] = 0.5 * raw;
                vmat[(l, k)] = 0.5 * raw;
            }
            coeffs.push(PairCoefficients { k, l, s, t });
        }
    }

    let r = vmat
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|&&l| l.abs() > opts.rank_tol)
        .count();
    CliffordCertificate {
        is_strongly_clifford: true,
        v: Some(vmat),
        coeffs,
        r: Some(r),
        min_dim: Some(1usize << (r / 2)),
        ebits: Some(r / 2),
    }
}

/// Minimum representation dimension `2^⌊r/2⌋` and ebit lower bound `⌊r/2⌋`
/// for a strongly Clifford certificate; `NotClifford` otherwise.
pub fn min_entanglement(cert: &CliffordCertificate) -> Result<MinEntanglement> {
    if !cert.is_strongly_clifford {
        return Err(Error::NotClifford);
    }
    let r = cert.r.ok_or(Error::NotClifford)?;
    Ok(MinEntanglement {
        min_dim: 1usize << (r / 2),
        ebits: r / 2,
    })
}

const SX: [[Complex64; 2]; 2] = [
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
];
const SY: [[Complex64; 2]; 2] = [
    [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
    [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
];
const SZ: [[Complex64; 2]; 2] = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
];

fn pauli(p: &[[Complex64; 2]; 2]) -> CMat {
    CMat::from_fn(2, 2, |i, j| p[i][j])
}

/// `r` mutually anticommuting Hermitian involutions on dimension
/// `multiplicity · 2^⌊r/2⌋`, with entries in `{0, ±1, ±i}` so both
/// relation families hold exactly in floating point.
///
/// Construction: generator `2p+1` is `σz^{⊗p} ⊗ σx ⊗ I^{⊗(k−p−1)}` and
/// generator `2p+2` the same with `σy`; for odd `r` the final generator is
/// `σz^{⊗k}`, the scaled product of all previous ones. Multiplicity `M`
/// block-repeats each generator as `I_M ⊗ Y`.
pub fn clifford_generators(r: usize, multiplicity: usize) -> Result<Vec<CMat>> {
    if r > CLIFFORD_RANK_CAP {
        return Err(Error::TooLarge {
            side: r,
            cap: CLIFFORD_RANK_CAP,
        });
    }
    if multiplicity == 0 {
        return Err(Error::OutOfRange("multiplicity must be ≥ 1".into()));
    }
    let k = r / 2;
    let (sx, sy, sz) = (pauli(&SX), pauli(&SY), pauli(&SZ));
    let mut gens = Vec::with_capacity(r);
    for p in 0..k {
        for mid in [&sx, &sy] {
            let mut y = ceye(1);
            for _ in 0..p {
                y = kron(&y, &sz);
            }
            y = kron(&y, mid);
            for _ in 0..(k - p - 1) {
                y = kron(&y, &ceye(2));
            }
            gens.push(y);
        }
    }
    if r % 2 == 1 {
        let mut y = ceye(1);
        for _ in 0..k {
            y = kron(&y, &sz);
        }
        gens.push(y);
    }
    if multiplicity > 1 {
        let block = ceye(multiplicity);
        gens = gens.into_iter().map(|y| kron(&block, &y)).collect();
    }
    Ok(gens)
}

/// The monomial representation behind the structured vertex games: vertex
/// `S = {i_1 < … < i_k}` (a bitmask over `1..=n`) maps to
/// `i^{k(k−1)/2} · Y_{i_1}⋯Y_{i_k}` over [`clifford_generators`]`(n, 1)`.
/// Every image is an exactly Hermitian involution, and two images
/// anticommute precisely on the edges of the associated graph.
pub fn cl_monomial_representation(n: usize) -> Result<Vec<(u32, CMat)>> {
    if !(2..=10).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "monomial representation needs 2 ≤ n ≤ 10, got {n}"
        )));
    }
    let gens = clifford_generators(n, 1)?;
    let dim = gens[0].nrows();
    let vertices = crate::game::cl_vertices(n);
    let mut images = Vec::with_capacity(vertices.len());
    for &mask in &vertices {
        let k = mask.count_ones() as usize;
        let mut prod = ceye(dim);
        for bit in 0..n {
            if mask & (1 << bit) != 0 {
                prod = prod * &gens[bit];
            }
        }
        let phase = Complex64::i().powu((k * (k - 1) / 2) as u32);
        images.push((mask, prod * phase));
    }
    Ok(images)
}

/// Maximum relation defect of concrete matrices `B` against a solution
/// algebra: `max(max_j ‖B_j² − I‖, max_i ‖(Σ_j G_ij B_j)² − c_i²·I‖)` in
/// operator norm.
pub fn verify_relations(alg: &SolutionAlgebra, b: &[CMat]) -> Result<f64> {
    let n = alg.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n} generator images, got {}",
            b.len()
        )));
    }
    let dim = b.first().map(|m| m.nrows()).unwrap_or(0);
    for (j, bj) in b.iter().enumerate() {
        if bj.nrows() != dim || bj.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "image {j} is {}×{}, expected {dim}×{dim}",
                bj.nrows(),
                bj.ncols()
            )));
        }
    }
    let eye = ceye(dim);
    let mut defect = 0.0f64;
    for bj in b {
        defect = defect.max(op_norm(&(bj * bj - &eye)));
    }
    let g = alg.game().cost();
    for i in 0..alg.game().m() {
        let mut w = CMat::zeros(dim, dim);
        for j in 0..n {
            let gij = g[(i, j)];
            if gij != 0.0 {
                w += bj_scaled(&b[j], gij);
            }
        }
        let target = &eye * Complex64::new(alg.c2()[i], 0.0);
        defect = defect.max(op_norm(&(&w * &w - target)));
    }
    Ok(defect)
}

fn bj_scaled(b: &CMat, g: f64) -> CMat {
    b * Complex64::new(g, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{chsh_game, cl_game, cl_graph, graph_game, tight_game, Graph};
    use crate::linalg::{cmax_abs, hermiticity_defect};
    use crate::solver::{solve_quantum_bias, SolveOptions};
    use approx::assert_relative_eq;

    /// Closed-form marginal row biases of a graph game: every row has two
    /// entries `±1/(4e)`, and the optimal vector strategy is orthonormal.
    fn graph_marginals(edges: usize, rows: usize) -> Vec<f64> {
        vec![1.0 / (2.0 * 2f64.sqrt() * edges as f64); rows]
    }

    /// Closed-form marginal row biases of `tight_game(n)`.
    fn tight_marginals(n: usize) -> Vec<f64> {
        let m = n * (n - 1) / 2;
        vec![(n as f64 / (2.0 * (n as f64 - 1.0))).sqrt() / m as f64; m]
    }

    #[test]
    fn build_counts_and_rejects() {
        let game = chsh_game(2).unwrap();
        let c = vec![2f64.sqrt() / 4.0; 2];
        let alg = build_solution_algebra(&game, &c).unwrap();
        assert_eq!(alg.relations().len(), 4);
        assert_eq!(alg.n(), 2);
        assert!(build_solution_algebra(&game, &[0.1]).is_err());
        assert!(build_solution_algebra(&game, &[0.1, -0.2]).is_err());
    }

    #[test]
    fn tight2_forces_anticommutator() {
        // ((X₁−X₂)/2)² = Id with X_j² = Id forces X₁X₂ + X₂X₁ = −2·Id;
        // X₁ = σz, X₂ = −σz realizes it with zero defect.
        let game = tight_game(2).unwrap();
        let alg = build_solution_algebra(&game, &[1.0]).unwrap();
        let (sz, msz) = {
            let z = pauli(&SZ);
            (z.clone(), -z)
        };
        let defect = verify_relations(&alg, &[sz, msz]).unwrap();
        assert!(defect < 1e-12, "defect {defect}");

        let cert = strongly_clifford_certificate(&alg);
        assert!(cert.is_strongly_clifford);
        let v = cert.v.as_ref().unwrap();
        assert_relative_eq!(v[(0, 1)], -1.0, epsilon = 1e-10);
        assert_relative_eq!(v[(0, 0)], 1.0, epsilon = 1e-12);
        assert_eq!(cert.r, Some(1));
        let ent = min_entanglement(&cert).unwrap();
        assert_eq!(ent, MinEntanglement { min_dim: 1, ebits: 0 });
    }

    #[test]
    fn chsh_games_are_strongly_clifford_with_identity_v() {
        for n in [2usize, 3, 5] {
            let game = chsh_game(n).unwrap();
            let e = n * (n - 1) / 2;
            let alg =
                build_solution_algebra(&game, &graph_marginals(e, game.m())).unwrap();
            let cert = strongly_clifford_certificate(&alg);
            assert!(cert.is_strongly_clifford, "chsh({n}) not flagged");
            let v = cert.v.as_ref().unwrap();
            assert!((v - RMat::identity(n, n)).amax() < 1e-8, "V ≠ I for n={n}");
            assert_eq!(cert.r, Some(n));
            assert_eq!(cert.min_dim, Some(1usize << (n / 2)));
        }
    }

    #[test]
    fn tight_games_drop_one_rank() {
        for n in [3usize, 4, 5] {
            let game = tight_game(n).unwrap();
            let alg = build_solution_algebra(&game, &tight_marginals(n)).unwrap();
            let cert = strongly_clifford_certificate(&alg);
            assert!(cert.is_strongly_clifford, "tight({n}) not flagged");
            let v = cert.v.as_ref().unwrap();
            let expect = -1.0 / (n as f64 - 1.0);
            for k in 0..n {
                for l in 0..n {
                    let want = if k == l { 1.0 } else { expect };
                    assert_relative_eq!(v[(k, l)], want, epsilon = 1e-8);
                }
            }
            assert_eq!(cert.r, Some(n - 1), "rank for n={n}");
        }
    }

    #[test]
    fn reconstruction_identity_holds_per_pair() {
        let game = chsh_game(3).unwrap();
        let alg = build_solution_algebra(&game, &graph_marginals(3, game.m())).unwrap();
        let cert = strongly_clifford_certificate(&alg);
        assert!(cert.is_strongly_clifford);
        let n = alg.n();
        for pc in &cert.coeffs {
            let mut lhs = RMat::zeros(n, n);
            for (j, &sj) in pc.s.iter().enumerate() {
                lhs[(j, j)] += sj;
            }
            for (i, &ti) in pc.t.iter().enumerate() {
                let row = game.cost().row(i).transpose();
                lhs += &row * row.transpose() * ti;
            }
            let mut target = RMat::zeros(n, n);
            target[(pc.k, pc.l)] = 1.0;
            target[(pc.l, pc.k)] = 1.0;
            if pc.k == pc.l {
                target[(pc.k, pc.k)] = 1.0;
            }
            assert!(
                (lhs - target).amax() < 1e-8,
                "pair ({}, {}) reconstruction failed",
                pc.k,
                pc.l
            );
        }
    }

    #[test]
    fn path_graph_game_is_not_strongly_clifford() {
        // No relation touches the anticommutator of the two endpoints of a
        // path, so the family cannot span.
        let graph = Graph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        let game = graph_game(&graph).unwrap();
        let alg = build_solution_algebra(&game, &graph_marginals(2, game.m())).unwrap();
        let cert = strongly_clifford_certificate(&alg);
        assert!(!cert.is_strongly_clifford);
        assert!(cert.v.is_none());
        assert!(matches!(min_entanglement(&cert), Err(Error::NotClifford)));
    }

    #[test]
    fn certificate_v_matches_strategy_gram() {
        // Strongly Clifford games with unique optimum: V_kl agrees with the
        // Gram matrix of the converged column-player vectors.
        for game in [chsh_game(3).unwrap(), tight_game(4).unwrap()] {
            let sol = solve_quantum_bias(&game, &SolveOptions::default()).unwrap();
            assert!(sol.certified);
            let alg = build_solution_algebra(&game, &sol.c).unwrap();
            let cert = strongly_clifford_certificate(&alg);
            assert!(cert.is_strongly_clifford);
            let v = cert.v.as_ref().unwrap();
            let gram = sol.strategy.gram_v();
            assert!(
                (v - &gram).amax() < 1e-4,
                "V vs Gram mismatch {}",
                (v - &gram).amax()
            );
        }
    }

    #[test]
    fn generators_satisfy_relations_exactly() {
        for r in [0usize, 1, 2, 3, 4, 5, 7] {
            let gens = clifford_generators(r, 1).unwrap();
            assert_eq!(gens.len(), r);
            let dim = 1usize << (r / 2);
            for y in &gens {
                assert_eq!(y.nrows(), dim);
                assert_eq!(hermiticity_defect(y), 0.0);
                let sq = y * y;
                assert_eq!(cmax_abs(&(sq - ceye(dim))), 0.0, "square not exact");
            }
            for a in 0..gens.len() {
                for b in (a + 1)..gens.len() {
                    let anti = &gens[a] * &gens[b] + &gens[b] * &gens[a];
                    assert_eq!(cmax_abs(&anti), 0.0, "anticommutator not exact");
                }
            }
            for y in &gens {
                for z in y.iter() {
                    let exact = (z.re == 0.0 || z.re.abs() == 1.0)
                        && (z.im == 0.0 || z.im.abs() == 1.0)
                        && (z.re == 0.0 || z.im == 0.0);
                    assert!(exact, "entry {z} outside {{0, ±1, ±i}}");
                }
            }
        }
    }

    #[test]
    fn generator_multiplicity_blocks() {
        let gens = clifford_generators(2, 3).unwrap();
        assert_eq!(gens[0].nrows(), 6);
        for y in &gens {
            assert_eq!(cmax_abs(&(y * y - ceye(6))), 0.0);
        }
        let anti = &gens[0] * &gens[1] + &gens[1] * &gens[0];
        assert_eq!(cmax_abs(&anti), 0.0);
    }

    #[test]
    fn generator_rank_cap() {
        assert!(matches!(
            clifford_generators(25, 1),
            Err(Error::TooLarge { side: 25, cap: 24 })
        ));
    }

    #[test]
    fn monomials_are_exact_hermitian_involutions() {
        for n in [2usize, 3] {
            let images = cl_monomial_representation(n).unwrap();
            assert_eq!(images.len(), (1 << n) - 1);
            let dim = 1usize << (n / 2);
            for (mask, img) in &images {
                assert_eq!(hermiticity_defect(img), 0.0, "vertex {mask:b}");
                assert_eq!(cmax_abs(&(img * img - ceye(dim))), 0.0, "vertex {mask:b}");
            }
        }
        assert!(cl_monomial_representation(1).is_err());
        assert!(cl_monomial_representation(11).is_err());
    }

    #[test]
    fn monomial_for_pair_vertex_is_frozen() {
        // n = 2, vertex {1, 2}: i·Y₁Y₂ = i·σxσy = −σz.
        let images = cl_monomial_representation(2).unwrap();
        let (mask, img) = images.iter().find(|(m, _)| *m == 0b11).unwrap();
        assert_eq!(*mask, 3);
        assert_eq!(cmax_abs(&(img - (-pauli(&SZ)))), 0.0);
    }

    #[test]
    fn monomial_anticommutation_matches_graph_edges() {
        for n in [3usize, 4] {
            let images = cl_monomial_representation(n).unwrap();
            let graph = cl_graph(n).unwrap();
            let vertices = crate::game::cl_vertices(n);
            let edge_set: std::collections::HashSet<(usize, usize)> =
                graph.edges().iter().copied().collect();
            for a in 0..images.len() {
                for b in (a + 1)..images.len() {
                    let anti = &images[a].1 * &images[b].1 + &images[b].1 * &images[a].1;
                    let anticommutes = cmax_abs(&anti) == 0.0;
                    let is_edge = edge_set.contains(&(a + 1, b + 1));
                    assert_eq!(
                        anticommutes, is_edge,
                        "vertices {:b}, {:b} (n={n})",
                        vertices[a], vertices[b]
                    );
                }
            }
        }
    }

    #[test]
    fn cl_game_relations_hold_for_monomials() {
        for n in [3usize, 4] {
            let game = cl_game(n).unwrap();
            let graph = cl_graph(n).unwrap();
            let c = graph_marginals(graph.edges().len(), game.m());
            let alg = build_solution_algebra(&game, &c).unwrap();
            let images = cl_monomial_representation(n).unwrap();
            let b: Vec<CMat> = images.into_iter().map(|(_, img)| img).collect();
            let defect = verify_relations(&alg, &b).unwrap();
            assert!(defect <= 1e-9, "n={n} defect {defect}");
        }
    }

    #[test]
    fn vertex_game_certificates_follow_graph_completeness() {
        // n = 2: the three monomials pairwise anticommute, the graph is K₃,
        // and the family spans — strongly Clifford, with min_dim dividing
        // the dimension of the zero-defect monomial representation.
        let game = cl_game(2).unwrap();
        let graph = cl_graph(2).unwrap();
        let c = graph_marginals(graph.edges().len(), game.m());
        let alg = build_solution_algebra(&game, &c).unwrap();
        let cert = strongly_clifford_certificate(&alg);
        assert!(cert.is_strongly_clifford);
        let ent = min_entanglement(&cert).unwrap();
        let monomial_dim = cl_monomial_representation(2).unwrap()[0].1.nrows();
        assert_eq!(monomial_dim % ent.min_dim, 0, "min_dim {}", ent.min_dim);

        // n = 4: commuting vertex pairs exist, so no relation pins their
        // anticommutator and the family cannot span; the minimum dimension
        // is unknown (lower bound 1) rather than guessed.
        let game = cl_game(4).unwrap();
        let graph = cl_graph(4).unwrap();
        let c = graph_marginals(graph.edges().len(), game.m());
        let alg = build_solution_algebra(&game, &c).unwrap();
        let cert = strongly_clifford_certificate(&alg);
        assert!(!cert.is_strongly_clifford);
        assert!(matches!(min_entanglement(&cert), Err(Error::NotClifford)));
    }

    #[test]
    fn identity_images_give_frozen_defect_on_chsh() {
        let game = chsh_game(2).unwrap();
        let alg =
            build_solution_algebra(&game, &graph_marginals(1, game.m())).unwrap();
        let b = vec![ceye(2), ceye(2)];
        let defect = verify_relations(&alg, &b).unwrap();
        // Involutions are satisfied; each row misses c_i² = 1/8 by exactly
        // 1/8 (row sums are 0 and 1/2).
        assert_relative_eq!(defect, 0.125, epsilon = 1e-12);
    }

    #[test]
    fn verify_relations_rejects_bad_shapes() {
        let game = chsh_game(2).unwrap();
        let alg =
            build_solution_algebra(&game, &graph_marginals(1, game.m())).unwrap();
        assert!(verify_relations(&alg, &[ceye(2)]).is_err());
        assert!(verify_relations(&alg, &[ceye(2), ceye(3)]).is_err());
    }

    #[test]
    fn symbolic_relation_materialization() {
        let game = chsh_game(2).unwrap();
        let alg =
            build_solution_algebra(&game, &graph_marginals(1, game.m())).unwrap();
        let inv = alg.relation_coefficients(Relation::Involution { j: 1 });
        assert_eq!(inv[(1, 1)], 1.0);
        assert_eq!(inv.sum(), 1.0);
        assert_eq!(alg.relation_rhs(Relation::Involution { j: 1 }), 1.0);
        let row = alg.relation_coefficients(Relation::Row { i: 0 });
        let g = game.cost();
        for k in 0..2 {
            for l in 0..2 {
                assert_relative_eq!(row[(k, l)], g[(0, k)] * g[(0, l)], epsilon = 1e-15);
            }
        }
        assert_relative_eq!(
            alg.relation_rhs(Relation::Row { i: 0 }),
            0.125,
            epsilon = 1e-12
        );
    }
}
