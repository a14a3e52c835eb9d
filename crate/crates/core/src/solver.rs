//! Quantum-bias computation for XOR games.
//!
//! The primal problem is a semidefinite program over the elliptope —
//! maximize `tr(BX)` subject to `X_ii = 1`, `X ⪰ 0`, with
//! `B = [[0, G/2], [Gᵀ/2, 0]]` — equivalently a maximization over two
//! families of unit vectors `u_i, v_j` of `Σ_ij G_ij u_i·v_j`. The solver
//! runs low-rank alternating ascent on those families: each block update is
//! a closed-form normalization, and a dual feasibility certificate is
//! computed so correctness never rests on the heuristic.
//!
//! The dual has variables `c ∈ R^m`, `d ∈ R^n` minimizing
//! `(Σc_i + Σd_j)/2` subject to `S = ½diag(c, d) − B ⪰ 0`; at an optimum
//! the `c_i`, `d_j` are the marginal row and column biases.

use crate::error::{Error, Result};
use crate::game::Game;
use crate::linalg::{random_unit_vector, RMat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Two families of unit vectors in a common embedding dimension `N`; the
/// correlation of questions `(i, j)` is the inner product `u_i · v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorStrategy {
    /// Columns are the `m` row-player vectors.
    u: RMat,
    /// Columns are the `n` column-player vectors.
    v: RMat,
}

impl VectorStrategy {
    /// Build from column matrices (`N×m` and `N×n`), checking unit norms
    /// within `1e−9`.
    pub fn from_columns(u: RMat, v: RMat) -> Result<Self> {
        if u.nrows() != v.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "embedding dimensions differ: {} vs {}",
                u.nrows(),
                v.nrows()
            )));
        }
        if u.nrows() == 0 || u.ncols() == 0 || v.ncols() == 0 {
            return Err(Error::DimensionMismatch(
                "strategy requires at least one vector per side and N ≥ 1".into(),
            ));
        }
        for (label, mat) in [("u", &u), ("v", &v)] {
            for (k, col) in mat.column_iter().enumerate() {
                let norm = col.norm();
                if !norm.is_finite() {
                    return Err(Error::NonFiniteEntry {
                        context: "vector strategy",
                    });
                }
                if (norm - 1.0).abs() > 1e-9 {
                    return Err(Error::OutOfRange(format!(
                        "{label}[{k}] has norm {norm:.12}, expected 1 within 1e-9"
                    )));
                }
            }
        }
        Ok(VectorStrategy { u, v })
    }

    /// Embedding dimension `N`.
    pub fn n_embed(&self) -> usize {
        self.u.nrows()
    }

    /// Number of row-player vectors.
    pub fn m(&self) -> usize {
        self.u.ncols()
    }

    /// Number of column-player vectors.
    pub fn n(&self) -> usize {
        self.v.ncols()
    }

    /// Row-player vectors as matrix columns.
    pub fn u(&self) -> &RMat {
        &self.u
    }

    /// Column-player vectors as matrix columns.
    pub fn v(&self) -> &RMat {
        &self.v
    }

    /// The success bias `Σ_ij G_ij u_i·v_j` of this strategy for `game`.
    pub fn bias(&self, game: &Game) -> Result<f64> {
        self.check_dims(game)?;
        // Σ_i u_i · (V Gᵀ)_i
        let vg = &self.v * game.cost().transpose();
        let mut total = 0.0;
        for i in 0..self.m() {
            total += self.u.column(i).dot(&vg.column(i));
        }
        Ok(total)
    }

    /// Gram matrix of the column-player vectors (`n×n`).
    pub fn gram_v(&self) -> RMat {
        self.v.transpose() * &self.v
    }

    fn check_dims(&self, game: &Game) -> Result<()> {
        if self.m() != game.m() || self.n() != game.n() {
            return Err(Error::DimensionMismatch(format!(
                "strategy is {}×{}, game is {}×{}",
                self.m(),
                self.n(),
                game.m(),
                game.n()
            )));
        }
        Ok(())
    }
}

/// Dual feasibility certificate for a vector strategy.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    /// Candidate marginal row biases `c_i = ‖Σ_j G_ij v_j‖`.
    pub c: Vec<f64>,
    /// Candidate marginal column biases `d_j = ‖Σ_i G_ij u_i‖`.
    pub d: Vec<f64>,
    /// Candidate dual value `(Σc_i + Σd_j)/2`.
    pub dual_value: f64,
    /// `dual_value − primal_value`; non-negative up to round-off.
    pub gap: f64,
    /// Minimum eigenvalue of the slack `S = ½diag(c, d) − B`; at a true
    /// optimum `S ⪰ 0` so this is `≥ 0` up to round-off.
    pub slack_min_eig: f64,
}

/// A solved game: the converged strategy together with its primal value and
/// dual certificate.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// The converged vector strategy.
    pub strategy: VectorStrategy,
    /// `Σ_ij G_ij u_i·v_j` — the quantum-bias estimate.
    pub primal_value: f64,
    /// Marginal row biases.
    pub c: Vec<f64>,
    /// Marginal column biases.
    pub d: Vec<f64>,
    /// `(Σc + Σd)/2`.
    pub dual_value: f64,
    /// `dual_value − primal_value`.
    pub gap: f64,
    /// Minimum eigenvalue of the dual slack matrix.
    pub slack_min_eig: f64,
    /// True when `gap ≤ tol` and the slack is PSD within `−1e−7`.
    pub certified: bool,
}

/// Options for [`solve_quantum_bias`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Embedding dimension; `None` selects
    /// `min(m, n, smallest N with N(N+1)/2 ≥ m+n+1)`.
    pub rank: Option<usize>,
    /// Number of independent random restarts.
    pub restarts: usize,
    /// Base RNG seed; restart `k` uses `seed + k`.
    pub seed: u64,
    /// Certification tolerance on the duality gap.
    pub tol: f64,
    /// Sweep cap per restart.
    pub max_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            rank: None,
            restarts: 8,
            seed: 0,
            tol: 1e-8,
            max_iters: 100_000,
        }
    }
}

/// Default embedding rank: `min(m, n, N_bm)` where `N_bm` is the smallest
/// `N` with `N(N+1)/2 ≥ m+n+1` (over-parametrized low-rank regime).
pub fn default_rank(m: usize, n: usize) -> usize {
    let mut bm = 1usize;
    while bm * (bm + 1) / 2 < m + n + 1 {
        bm += 1;
    }
    m.min(n).min(bm)
}

/// After the nominal stopping rule fires, keep sweeping until the objective
/// stalls at round-off scale so marginal biases are fixed-point accurate;
/// capped at this many extra sweeps.
const POLISH_MAX_SWEEPS: usize = 4000;

/// Consecutive small-improvement sweeps (with the gap still too large)
/// before a restart is written off as stuck in a local maximum.
const STALL_LIMIT: usize = 50;

struct Candidate {
    u: RMat,
    v: RMat,
    primal: f64,
    cert: DualCertificate,
}

/// One alternating sweep: `u_i ← normalize(Σ_j G_ij v_j)` then
/// `v_j ← normalize(Σ_i G_ij u_i)`. Zero columns leave the old vector in
/// place (the objective is indifferent to it). Returns the objective after
/// the sweep.
fn sweep(g: &RMat, u: &mut RMat, v: &mut RMat) -> f64 {
    let vg = &*v * g.transpose(); // N×m, column i = Σ_j G_ij v_j
    for i in 0..u.ncols() {
        let norm = vg.column(i).norm();
        if norm > 0.0 {
            u.set_column(i, &(vg.column(i) / norm));
        }
    }
    let ug = &*u * g; // N×n, column j = Σ_i G_ij u_i
    let mut obj = 0.0;
    for j in 0..v.ncols() {
        let norm = ug.column(j).norm();
        if norm > 0.0 {
            v.set_column(j, &(ug.column(j) / norm));
            obj += norm;
        }
    }
    obj
}

fn certificate_for(game: &Game, u: &RMat, v: &RMat) -> (f64, DualCertificate) {
    let g = game.cost();
    let vg = v * g.transpose();
    let ug = u * g;
    let c: Vec<f64> = (0..game.m()).map(|i| vg.column(i).norm()).collect();
    let d: Vec<f64> = (0..game.n()).map(|j| ug.column(j).norm()).collect();
    let mut primal = 0.0;
    for i in 0..game.m() {
        primal += u.column(i).dot(&vg.column(i));
    }
    let dual_value = 0.5 * (c.iter().sum::<f64>() + d.iter().sum::<f64>());
    let slack_min_eig = slack_min_eigenvalue(g, &c, &d);
    (
        primal,
        DualCertificate {
            c,
            d,
            dual_value,
            gap: dual_value - primal,
            slack_min_eig,
        },
    )
}

fn slack_min_eigenvalue(g: &RMat, c: &[f64], d: &[f64]) -> f64 {
    let (m, n) = (g.nrows(), g.ncols());
    let mut s = RMat::zeros(m + n, m + n);
    for i in 0..m {
        s[(i, i)] = 0.5 * c[i];
    }
    for j in 0..n {
        s[(m + j, m + j)] = 0.5 * d[j];
    }
    for i in 0..m {
        for j in 0..n {
            s[(i, m + j)] = -0.5 * g[(i, j)];
            s[(m + j, i)] = -0.5 * g[(i, j)];
        }
    }
    s.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &l| acc.min(l))
}

fn run_restart(game: &Game, rank: usize, seed: u64, tol: f64, max_iters: usize) -> Candidate {
    let g = game.cost();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = RMat::zeros(rank, game.m());
    let mut v = RMat::zeros(rank, game.n());
    for i in 0..game.m() {
        u.set_column(i, &random_unit_vector(&mut rng, rank));
    }
    for j in 0..game.n() {
        v.set_column(j, &random_unit_vector(&mut rng, rank));
    }

    let improve_tol = tol * 1e-2;
    let mut obj_prev = f64::NEG_INFINITY;
    let mut stalled = 0usize;
    let mut converged = false;
    for _ in 0..max_iters {
        let obj = sweep(g, &mut u, &mut v);
        let improvement = obj - obj_prev;
        obj_prev = obj;
        if improvement < improve_tol {
            let (_, cert) = certificate_for(game, &u, &v);
            if cert.gap < tol {
                converged = true;
                break;
            }
            stalled += 1;
            if stalled >= STALL_LIMIT {
                break;
            }
        } else {
            stalled = 0;
        }
    }

    if converged {
        // Polish to the numerical fixed point: downstream rank decisions
        // need the marginal biases at round-off accuracy, not merely within
        // the certification tolerance. Objective improvement is quadratic in
        // the distance to the fixed point, so it stalls below machine
        // epsilon while the iterates are still drifting; track the iterate
        // displacement instead.
        let mut stagnant = 0usize;
        let mut u_prev = u.clone();
        let mut v_prev = v.clone();
        for _ in 0..POLISH_MAX_SWEEPS {
            sweep(g, &mut u, &mut v);
            let delta = (&u - &u_prev).amax().max((&v - &v_prev).amax());
            if delta <= 1e-13 {
                stagnant += 1;
                if stagnant >= 3 {
                    break;
                }
            } else {
                stagnant = 0;
            }
            u_prev.copy_from(&u);
            v_prev.copy_from(&v);
        }
    }

    let (primal, cert) = certificate_for(game, &u, &v);
    Candidate {
        u,
        v,
        primal,
        cert,
    }
}

/// Solve the quantum-bias problem by low-rank alternating ascent from
/// `opts.restarts` random starts, returning the restart with the smallest
/// duality gap (ties broken by lowest seed index).
///
/// The result always carries a dual certificate; `certified` is set when
/// the best gap is within `opts.tol` and the slack matrix is PSD within
/// `−1e−7`. A non-certified solution is returned as-is (best effort) —
/// downstream consumers that need certification fail with `NotConverged`.
pub fn solve_quantum_bias(game: &Game, opts: &SolveOptions) -> Result<SdpSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::OutOfRange(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if opts.restarts == 0 {
        return Err(Error::OutOfRange("need at least one restart".into()));
    }
    let rank = match opts.rank {
        Some(r) if r >= 1 => r,
        Some(r) => {
            return Err(Error::OutOfRange(format!(
                "embedding rank must be ≥ 1, got {r}"
            )))
        }
        None => default_rank(game.m(), game.n()),
    };

    let candidates: Vec<Candidate> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            run_restart(
                game,
                rank,
                opts.seed.wrapping_add(k as u64),
                opts.tol,
                opts.max_iters,
            )
        })
        .collect();

    let best = candidates
        .into_iter()
        .enumerate()
        .min_by(|(ka, a), (kb, b)| {
            a.cert
                .gap
                .partial_cmp(&b.cert.gap)
                .expect("gaps are finite")
                .then(ka.cmp(kb))
        })
        .map(|(_, cand)| cand)
        .expect("at least one restart");

    let certified = best.cert.gap <= opts.tol && best.cert.slack_min_eig >= -1e-7;
    Ok(SdpSolution {
        strategy: VectorStrategy {
            u: best.u,
            v: best.v,
        },
        primal_value: best.primal,
        c: best.cert.c,
        d: best.cert.d,
        dual_value: best.cert.dual_value,
        gap: best.cert.gap,
        slack_min_eig: best.cert.slack_min_eig,
        certified,
    })
}

/// Dual certificate for an arbitrary vector strategy: candidate marginals
/// `c_i = ‖Σ_j G_ij v_j‖`, `d_j = ‖Σ_i G_ij u_i‖`, the dual value, the gap
/// against the strategy's own bias, and the feasibility margin (minimum
/// slack eigenvalue). Infeasibility is reported through a negative
/// `slack_min_eig`, never as an error.
pub fn dual_certificate(game: &Game, strategy: &VectorStrategy) -> Result<DualCertificate> {
    strategy.check_dims(game)?;
    let (_, cert) = certificate_for(game, strategy.u(), strategy.v());
    Ok(cert)
}

/// Value of the nonlinear marginal-bias objective at a feasible `V`:
/// `Σ_i √(Σ_{jk} G_ij G_ik V_jk)` over symmetric PSD `V` with unit
/// diagonal. The row biases are recoverable as `c_i² = Σ_{jk} G_ij G_ik V_jk`.
pub fn gamma_value(game: &Game, v: &RMat) -> Result<f64> {
    let n = game.n();
    if v.nrows() != n || v.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "V is {}×{}, expected {n}×{n}",
            v.nrows(),
            v.ncols()
        )));
    }
    let asym = (v - v.transpose()).amax();
    if asym > 1e-9 {
        return Err(Error::OutOfRange(format!(
            "V must be symmetric; max asymmetry {asym:.3e}"
        )));
    }
    for i in 0..n {
        if (v[(i, i)] - 1.0).abs() > 1e-9 {
            return Err(Error::BadDiagonal {
                index: i,
                value: v[(i, i)],
            });
        }
    }
    let min_eig = v
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &l| acc.min(l));
    if min_eig < -1e-9 {
        return Err(Error::NotPsd { min_eig });
    }
    let g = game.cost();
    let mut total = 0.0;
    for i in 0..game.m() {
        let row = g.row(i).transpose();
        let q = (v * &row).dot(&row);
        total += q.max(0.0).sqrt();
    }
    Ok(total)
}

/// Marginal row and column biases from a certified solve.
pub fn marginal_biases(game: &Game, opts: &SolveOptions) -> Result<(Vec<f64>, Vec<f64>)> {
    let sol = solve_quantum_bias(game, opts)?;
    if !sol.certified {
        return Err(Error::NotConverged {
            gap: sol.gap,
            tol: opts.tol,
        });
    }
    Ok((sol.c, sol.d))
}

/// Per-row report from [`check_mbias_bound`].
#[derive(Debug, Clone)]
pub struct MbiasReport {
    /// Measured optimality deficit `ε = ε_q − bias(strategy)` (floored at
    /// `1e−15`, the resolution of the bias computation).
    pub eps: f64,
    /// The uniform bound `√10·(m+n)^{1/4}·ε^{1/4}`.
    pub bound: f64,
    /// Residuals `r_i = ‖Σ_j G_ij v_j − c_i u_i‖`.
    pub residuals: Vec<f64>,
    /// Per-row flags `r_i ≤ bound`.
    pub flags: Vec<bool>,
    /// Conjunction of all flags.
    pub all_ok: bool,
}

/// Verify the marginal-bias residual bound for a near-optimal strategy:
/// for every row, `‖Σ_j G_ij v_j − c_i u_i‖ ≤ √10·(m+n)^{1/4}·ε^{1/4}`,
/// where `ε = eps_q − bias(strategy)` must lie in `[0, 1/(4(m+n)))` and
/// `eps_q` is the certified quantum bias of the game.
pub fn check_mbias_bound(
    game: &Game,
    strategy: &VectorStrategy,
    c: &[f64],
    eps_q: f64,
) -> Result<MbiasReport> {
    strategy.check_dims(game)?;
    if c.len() != game.m() {
        return Err(Error::DimensionMismatch(format!(
            "c has {} entries, expected {}",
            c.len(),
            game.m()
        )));
    }
    let total = (game.m() + game.n()) as f64;
    let max_eps = 1.0 / (4.0 * total);
    let mut eps = eps_q - strategy.bias(game)?;
    if eps < 0.0 {
        if eps >= -1e-9 {
            eps = 0.0;
        } else {
            return Err(Error::EpsilonOutOfRange { eps, max: max_eps });
        }
    }
    if eps >= max_eps {
        return Err(Error::EpsilonOutOfRange { eps, max: max_eps });
    }
    // Floor at the resolution of the bias computation so an exactly-optimal
    // strategy gets a meaningful (tiny but nonzero) bound.
    let eps_floored = eps.max(1e-15);
    let bound = 10f64.sqrt() * total.powf(0.25) * eps_floored.powf(0.25);
    let vg = strategy.v() * game.cost().transpose();
    let mut residuals = Vec::with_capacity(game.m());
    for i in 0..game.m() {
        let r = (vg.column(i) - strategy.u().column(i) * c[i]).norm();
        residuals.push(r);
    }
    let flags: Vec<bool> = residuals.iter().map(|&r| r <= bound).collect();
    let all_ok = flags.iter().all(|&f| f);
    Ok(MbiasReport {
        eps: eps_floored,
        bound,
        residuals,
        flags,
        all_ok,
    })
}
