//! Stability of approximate representations: defect measurement,
//! eigenvalue-gap splitting, extraction of approximate representations
//! from near-optimal marginals, rounding to exact Clifford
//! representations, and fixed-dimension see-saw lower bounds.
//!
//! The through-line: a strategy within `ε` of optimal has a marginal that
//! is an `O(ε^{1/8})`-approximate representation of the solution algebra
//! (after compressing away an eigenvalue-gap block of its reduced state),
//! and an approximate Clifford representation within the stability radius
//! rounds to an exact one nearby — which forces the dimension lower bound
//! `2^⌊r/2⌋` on near-optimal strategies.

use crate::algebra::{clifford_generators, Relation, SolutionAlgebra};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::linalg::{
    ceye, hermitian_eigen_desc, hermiticity_defect, kron, op_norm, polar_unitary,
    random_unit_cvector, random_unitary, spectral_sign, CMat, CVec, RMat,
};
use crate::solver::{solve_quantum_bias, SolveOptions};
use crate::strategy::{psi_to_matrix, Marginal};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Per-relation operator-norm defects of a family of matrices against a
/// solution algebra, together with the norm condition `‖B_j‖ ≤ 1 + 1e−9`.
#[derive(Debug, Clone)]
pub struct DefectReport {
    /// `(relation, operator-norm defect)` for all `m + n` relations.
    pub per_relation: Vec<(Relation, f64)>,
    /// The `ε` of the approximate-representation definition.
    pub max_defect: f64,
    /// Whether every `‖B_j‖ ≤ 1 + 1e−9`.
    pub norm_ok: bool,
}

/// Measure all relation defects of `b` against `alg` in operator norm.
/// Inputs must be Hermitian within `1e−10`.
pub fn defect(alg: &SolutionAlgebra, b: &[CMat]) -> Result<DefectReport> {
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
        let h = hermiticity_defect(bj);
        if h > 1e-10 {
            return Err(Error::NonHermitianObservable {
                index: j,
                defect: h,
            });
        }
    }
    let eye = ceye(dim);
    let g = alg.game().cost();
    let mut per_relation = Vec::with_capacity(alg.relations().len());
    let mut max_defect = 0.0f64;
    for &rel in alg.relations() {
        let d = match rel {
            Relation::Involution { j } => op_norm(&(&b[j] * &b[j] - &eye)),
            Relation::Row { i } => {
                let mut w = CMat::zeros(dim, dim);
                for j in 0..n {
                    let gij = g[(i, j)];
                    if gij != 0.0 {
                        w += &b[j] * Complex64::new(gij, 0.0);
                    }
                }
                let target = &eye * Complex64::new(alg.c2()[i], 0.0);
                op_norm(&(&w * &w - target))
            }
        };
        max_defect = max_defect.max(d);
        per_relation.push((rel, d));
    }
    let norm_ok = b.iter().all(|bj| op_norm(bj) <= 1.0 + 1e-9);
    Ok(DefectReport {
        per_relation,
        max_defect,
        norm_ok,
    })
}

/// Orthogonal split of a space at the largest eigenvalue gap of a density
/// matrix.
#[derive(Debug, Clone)]
pub struct GapSplit {
    /// Projection onto the top eigenvalue block.
    pub p1: CMat,
    /// Complementary projection.
    pub p2: CMat,
    /// `τ = ‖ρ − I/d‖` in operator norm.
    pub tau: f64,
    /// The largest gap between consecutive eigenvalues (`Δ ≥ τ/d`).
    pub gap: f64,
    /// Rank of `p1` (eigenvalues are taken in descending order and split
    /// at the first largest gap, so the choice is deterministic).
    pub rank1: usize,
    /// Orthonormal basis of `range(p1)` as matrix columns.
    pub basis1: CMat,
}

/// Residual of compressing one matrix by the split.
#[derive(Debug, Clone, Copy)]
pub struct GapResidual {
    /// `ε_S = ‖ρS − Sρ‖_F`.
    pub commutator: f64,
    /// `‖P₁SP₁ + P₂SP₂ − S‖_F`.
    pub residual: f64,
    /// `ε_S·d/τ`.
    pub bound: f64,
    /// `residual ≤ bound` (with round-off headroom).
    pub ok: bool,
}

/// Split at the largest eigenvalue gap of `rho` and measure, for each `S`,
/// how far the block compression `P₁SP₁ + P₂SP₂` is from `S`. The
/// residual is controlled by the commutator: `≤ ‖ρS − Sρ‖_F · d/τ`.
pub fn eigengap_split(rho: &CMat, s_list: &[CMat]) -> Result<(GapSplit, Vec<GapResidual>)> {
    let d = rho.nrows();
    if d == 0 || rho.ncols() != d {
        return Err(Error::DimensionMismatch("density matrix must be square".into()));
    }
    let scaled_eye = ceye(d) * Complex64::new(1.0 / d as f64, 0.0);
    let tau = op_norm(&(rho - &scaled_eye));
    if tau <= 1e-14 {
        return Err(Error::MaximallyMixed);
    }
    let (eigs, vecs) = hermitian_eigen_desc(rho);
    let mut split_at = 1usize;
    let mut gap = f64::NEG_INFINITY;
    for k in 0..d - 1 {
        let g = eigs[k] - eigs[k + 1];
        if g > gap {
            gap = g;
            split_at = k + 1;
        }
    }
    let basis1 = vecs.columns(0, split_at).into_owned();
    let basis2 = vecs.columns(split_at, d - split_at).into_owned();
    let p1 = &basis1 * basis1.adjoint();
    let p2 = &basis2 * basis2.adjoint();
    let mut residuals = Vec::with_capacity(s_list.len());
    for s in s_list {
        if s.nrows() != d || s.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "S is {}×{}, expected {d}×{d}",
                s.nrows(),
                s.ncols()
            )));
        }
        let commutator = (rho * s - s * rho).norm();
        let residual = (&p1 * s * &p1 + &p2 * s * &p2 - s).norm();
        let bound = commutator * d as f64 / tau;
        residuals.push(GapResidual {
            commutator,
            residual,
            bound,
            ok: residual <= bound + 1e-10,
        });
    }
    Ok((
        GapSplit {
            p1,
            p2,
            tau,
            gap,
            rank1: split_at,
            basis1,
        },
        residuals,
    ))
}

/// How the `ε` precondition of [`extract_approx_rep`] is enforced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsCap {
    /// The literal precondition `ε < min_j d_j^16 / (100(m+n))`.
    Strict,
    /// A caller-chosen cap.
    Custom(f64),
    /// No cap; the defect bound is still measured and reported.
    Unchecked,
}

/// Options for [`extract_approx_rep`]; the defaults enforce the strict
/// cap and the unscaled split threshold.
#[derive(Debug, Clone)]
pub struct ExtractOptions {
    pub cap: EpsCap,
    /// Multiplier on the split threshold `τ₀` (1 = literal constant).
    pub tau0_scale: f64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            cap: EpsCap::Strict,
            tau0_scale: 1.0,
        }
    }
}

/// Result of the approximate-representation extraction procedure.
#[derive(Debug, Clone)]
pub struct ExtractReport {
    /// The projection actually used (`I` when no split was needed).
    pub p: CMat,
    /// Orthonormal basis of `range(P)`.
    pub basis: CMat,
    /// The compressed observables on `range(P)`.
    pub compressed: Vec<CMat>,
    /// Relation defects of the compressed observables.
    pub report: DefectReport,
    /// `‖ρ − I/d‖`.
    pub tau: f64,
    /// Split threshold `τ₀ = (3/2)·(C′₀)^{1/2}·d^{1/2}·ε^{1/8}` (scaled).
    pub tau0: f64,
    /// Whether the eigenvalue-gap split branch was taken.
    pub split: bool,
    /// The guarantee `15(m+n)^{1/8}·d^{3/2}·ε^{1/8}` on the max defect.
    pub defect_bound: f64,
    /// `report.max_defect ≤ defect_bound`.
    pub bound_ok: bool,
}

/// Extract an approximate representation of the solution algebra from the
/// marginal of an `ε`-optimal strategy.
///
/// Computes `τ = ‖ρ − I/d‖`; below the threshold `τ₀` the marginal itself
/// is the representation (`P = I`), otherwise the top eigenvalue-gap block
/// carries it and the observables are compressed to `range(P₁)`. Defects
/// are measured on `range(P)` and checked against
/// `15(m+n)^{1/8}·d^{3/2}·ε^{1/8}`.
///
/// `d_col` are the marginal column biases of the game, used by the `ε`
/// precondition `ε < min_j d_j^16/(100(m+n))`.
pub fn extract_approx_rep(
    alg: &SolutionAlgebra,
    d_col: &[f64],
    marg: &Marginal,
    eps: f64,
    opts: &ExtractOptions,
) -> Result<ExtractReport> {
    let game = alg.game();
    if d_col.len() != game.n() {
        return Err(Error::DimensionMismatch(format!(
            "d_col has {} entries, expected {}",
            d_col.len(),
            game.n()
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::OutOfRange(format!("eps must be positive, got {eps}")));
    }
    let total = (game.m() + game.n()) as f64;
    match opts.cap {
        EpsCap::Strict => {
            let dmin = d_col.iter().cloned().fold(f64::INFINITY, f64::min);
            let cap = dmin.powi(16) / (100.0 * total);
            if eps >= cap {
                return Err(Error::EpsilonTooLarge { eps, cap });
            }
        }
        EpsCap::Custom(cap) => {
            if eps >= cap {
                return Err(Error::EpsilonTooLarge { eps, cap });
            }
        }
        EpsCap::Unchecked => {}
    }

    let d = marg.rho.nrows();
    let scaled_eye = ceye(d) * Complex64::new(1.0 / d as f64, 0.0);
    let tau = op_norm(&(&marg.rho - scaled_eye));
    let c0 = 10f64.sqrt() * total.powf(0.25);
    let tau0 = opts.tau0_scale * 1.5 * c0.sqrt() * (d as f64).sqrt() * eps.powf(0.125);

    let (p, basis, split) = if tau <= tau0 {
        (ceye(d), ceye(d), false)
    } else {
        let (gap_split, _) = eigengap_split(&marg.rho, &marg.b)?;
        (gap_split.p1.clone(), gap_split.basis1.clone(), true)
    };

    let compressed: Vec<CMat> = marg
        .b
        .iter()
        .map(|bj| basis.adjoint() * bj * &basis)
        .collect();
    let report = defect(alg, &compressed)?;
    let defect_bound = 15.0 * total.powf(0.125) * (d as f64).powf(1.5) * eps.powf(0.125);
    let bound_ok = report.max_defect <= defect_bound;
    Ok(ExtractReport {
        p,
        basis,
        compressed,
        report,
        tau,
        tau0,
        split,
        defect_bound,
        bound_ok,
    })
}

/// Maximum operator-norm defect of `b` against the rank-`|b|` Clifford
/// relations: `max(‖B_i² − I‖, ‖B_iB_j + B_jB_i‖)`.
pub fn clifford_defect(b: &[CMat]) -> f64 {
    let r = b.len();
    if r == 0 {
        return 0.0;
    }
    let dim = b[0].nrows();
    let eye = ceye(dim);
    let mut eps = 0.0f64;
    for bi in b {
        eps = eps.max(op_norm(&(bi * bi - &eye)));
    }
    for i in 0..r {
        for j in (i + 1)..r {
            eps = eps.max(op_norm(&(&b[i] * &b[j] + &b[j] * &b[i])));
        }
    }
    eps
}

/// Options for [`round_to_exact`]; the default stability radius is the
/// literal `1/(250r²)`.
#[derive(Debug, Clone)]
pub struct RoundOptions {
    /// Multiplier on the stability radius (1 = literal constant).
    pub radius_scale: f64,
}

impl Default for RoundOptions {
    fn default() -> Self {
        RoundOptions { radius_scale: 1.0 }
    }
}

/// An exact Clifford representation near an approximate one.
#[derive(Debug, Clone)]
pub struct Rounding {
    /// The exact representation (relation defect at round-off scale).
    pub b_exact: Vec<CMat>,
    /// `max_i ‖B_i − B′_i‖` in operator norm.
    pub dist: f64,
    /// Measured defect `ε` of the input.
    pub eps: f64,
    /// The stability guarantee `5r²ε/2`.
    pub bound: f64,
    /// `dist ≤ bound`.
    pub bound_ok: bool,
}

/// Ascending-index monomials `B^a = B_{i_1}⋯B_{i_k}` for every subset
/// bitmask `a`, computed by peeling the lowest set bit.
fn monomials(b: &[CMat], dim: usize) -> Vec<CMat> {
    let r = b.len();
    let mut out = Vec::with_capacity(1 << r);
    out.push(ceye(dim));
    for a in 1usize..(1 << r) {
        let low = a.trailing_zeros() as usize;
        let rest = a & (a - 1);
        let m = &b[low] * &out[rest];
        out.push(m);
    }
    out
}

/// Round an approximate rank-`r` Clifford representation to an exact one.
///
/// The input defect must be inside the stability radius `1/(250r²)`
/// (scaled by the options); the dimension must be a multiple of
/// `2^⌊r/2⌋`, otherwise no exact representation exists on it. Rounding is
/// constructive: eigenvalue truncation to ±1, then alignment with a
/// reference representation by the unitary polar factor of the
/// group-average intertwiner, searching the finitely many reference
/// choices (for odd `r`, sign/multiplicity splits of the two irreducible
/// representations). The distance bound `5r²ε/2` is asserted on the
/// result, never assumed.
pub fn round_to_exact(b: &[CMat], r: usize, opts: &RoundOptions) -> Result<Rounding> {
    if b.len() != r {
        return Err(Error::DimensionMismatch(format!(
            "expected {r} matrices, got {}",
            b.len()
        )));
    }
    if r == 0 {
        return Ok(Rounding {
            b_exact: Vec::new(),
            dist: 0.0,
            eps: 0.0,
            bound: 0.0,
            bound_ok: true,
        });
    }
    let dim = b[0].nrows();
    for (i, bi) in b.iter().enumerate() {
        if bi.nrows() != dim || bi.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix {i} is {}×{}, expected {dim}×{dim}",
                bi.nrows(),
                bi.ncols()
            )));
        }
    }
    let eps = clifford_defect(b);
    let radius = opts.radius_scale / (250.0 * (r * r) as f64);
    if eps >= radius {
        return Err(Error::DefectTooLarge { eps, radius });
    }
    let irrep_dim = 1usize << (r / 2);
    if dim % irrep_dim != 0 {
        return Err(Error::NoExactRep {
            min_dim: irrep_dim,
            dim,
        });
    }
    let mult = dim / irrep_dim;

    // Eigenvalue truncation to ±1 keeps Hermiticity and gets exact
    // involutions; anticommutators stay O(ε).
    let hat: Vec<CMat> = b.iter().map(spectral_sign).collect();
    let hat_mono = monomials(&hat, dim);

    // Reference representations: a single irreducible block structure for
    // even r; for odd r the two irreducible representations differ by the
    // sign of the last generator, and every multiplicity split must be
    // tried.
    let mut candidates: Vec<Vec<CMat>> = Vec::new();
    if r % 2 == 0 {
        candidates.push(clifford_generators(r, mult)?);
    } else {
        let gens = clifford_generators(r, 1)?;
        for m_plus in 0..=mult {
            let mut cand = Vec::with_capacity(r);
            for (idx, y) in gens.iter().enumerate() {
                let mut big = CMat::zeros(dim, dim);
                for blk in 0..mult {
                    let yb = if idx == r - 1 && blk >= m_plus {
                        -y.clone()
                    } else {
                        y.clone()
                    };
                    big.view_mut(
                        (blk * irrep_dim, blk * irrep_dim),
                        (irrep_dim, irrep_dim),
                    )
                    .copy_from(&yb);
                }
                cand.push(big);
            }
            candidates.push(cand);
        }
    }

    // Group-averaging a probe X gives an intertwiner T = U₀·Φ(U₀†X)
    // whenever the input is an exactly conjugated reference (Φ = the
    // commutant projection). The bare probe X = I can be ill-conditioned
    // (Φ(U₀†) nearly singular, e.g. a traceless U₀ for a full matrix
    // algebra), so a handful of fixed random probes are tried and the
    // best-aligned result kept.
    let probes: Vec<CMat> = {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0f5e_ed00);
        let mut v = vec![ceye(dim)];
        for _ in 0..4 {
            v.push(random_unitary(&mut rng, dim));
        }
        v
    };
    let mut best: Option<(Vec<CMat>, f64)> = None;
    for cand in &candidates {
        let pi_mono = monomials(cand, dim);
        for x in &probes {
            let mut t = CMat::zeros(dim, dim);
            for a in 0..(1usize << r) {
                t += &hat_mono[a] * x * pi_mono[a].adjoint();
            }
            t /= Complex64::new((1u64 << r) as f64, 0.0);
            let u = polar_unitary(&t);
            let rounded: Vec<CMat> = cand.iter().map(|pi| &u * pi * u.adjoint()).collect();
            let dist = b
                .iter()
                .zip(&rounded)
                .map(|(bi, ri)| op_norm(&(bi - ri)))
                .fold(0.0f64, f64::max);
            if best.as_ref().map_or(true, |(_, d)| dist < *d) {
                best = Some((rounded, dist));
            }
        }
    }
    let (b_exact, dist) = best.expect("at least one candidate");
    let bound = 2.5 * (r * r) as f64 * eps;
    Ok(Rounding {
        bound_ok: dist <= bound,
        b_exact,
        dist,
        eps,
        bound,
    })
}

/// Options for the see-saw heuristic.
#[derive(Debug, Clone)]
pub struct SeesawOptions {
    /// Independent random restarts.
    pub seeds: usize,
    /// Sweep cap per restart.
    pub iters: usize,
    /// Base RNG seed.
    pub seed: u64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions {
            seeds: 8,
            iters: 500,
            seed: 0,
        }
    }
}

#[derive(Clone)]
struct SeesawState {
    a: Vec<CMat>,
    b: Vec<CMat>,
    psi: CVec,
    bias: f64,
}

fn seesaw_run(game: &Game, d: usize, init: SeesawState, iters: usize) -> SeesawState {
    let g = game.cost();
    let (m, n) = (game.m(), game.n());
    let mut state = init;
    let mut stagnant = 0usize;
    for _ in 0..iters {
        let psi_m = psi_to_matrix(&state.psi, d, d);
        // A-step: A_i maximizes tr(A_i K_i) over Hermitian involutions.
        for i in 0..m {
            let mut k = CMat::zeros(d, d);
            for j in 0..n {
                let gij = g[(i, j)];
                if gij != 0.0 {
                    k += &psi_m * state.b[j].transpose() * psi_m.adjoint()
                        * Complex64::new(gij, 0.0);
                }
            }
            state.a[i] = spectral_sign(&k);
        }
        // B-step.
        for j in 0..n {
            let mut l = CMat::zeros(d, d);
            for i in 0..m {
                let gij = g[(i, j)];
                if gij != 0.0 {
                    l += (psi_m.adjoint() * &state.a[i] * &psi_m).transpose()
                        * Complex64::new(gij, 0.0);
                }
            }
            state.b[j] = spectral_sign(&l);
        }
        // ψ-step: top eigenvector of Σ G_ij A_i⊗B_j.
        let mut h = CMat::zeros(d * d, d * d);
        for i in 0..m {
            for j in 0..n {
                let gij = g[(i, j)];
                if gij != 0.0 {
                    h += kron(&state.a[i], &state.b[j]) * Complex64::new(gij, 0.0);
                }
            }
        }
        let (eigs, vecs) = hermitian_eigen_desc(&h);
        let bias = eigs[0];
        state.psi = vecs.column(0).into_owned();
        if bias - state.bias <= 1e-13 {
            stagnant += 1;
            if stagnant >= 8 {
                state.bias = state.bias.max(bias);
                break;
            }
        } else {
            stagnant = 0;
        }
        state.bias = state.bias.max(bias);
    }
    state
}

fn seesaw_random_state(game: &Game, d: usize, seed: u64) -> SeesawState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_obs = |rng: &mut ChaCha8Rng| {
        let h = crate::linalg::random_hermitian(rng, d, 1.0);
        spectral_sign(&h)
    };
    let a = (0..game.m()).map(|_| rand_obs(&mut rng)).collect();
    let b = (0..game.n()).map(|_| rand_obs(&mut rng)).collect();
    let psi = random_unit_cvector(&mut rng, d * d);
    SeesawState {
        a,
        b,
        psi,
        bias: f64::NEG_INFINITY,
    }
}

fn seesaw_best(
    game: &Game,
    d: usize,
    opts: &SeesawOptions,
    warm: Option<&SeesawState>,
) -> Result<SeesawState> {
    if d == 0 {
        return Err(Error::OutOfRange("see-saw dimension must be ≥ 1".into()));
    }
    if opts.seeds == 0 {
        return Err(Error::OutOfRange("need at least one see-saw seed".into()));
    }
    let mut inits: Vec<SeesawState> = (0..opts.seeds)
        .map(|k| seesaw_random_state(game, d, opts.seed.wrapping_add(k as u64)))
        .collect();
    if let Some(w) = warm {
        inits.push(w.clone());
    }
    let results: Vec<SeesawState> = inits
        .into_par_iter()
        .map(|init| seesaw_run(game, d, init, opts.iters))
        .collect();
    Ok(results
        .into_iter()
        .max_by(|x, y| x.bias.partial_cmp(&y.bias).expect("finite biases"))
        .expect("at least one restart"))
}

/// Best bias found by alternating optimization over dimension-`d`
/// strategies: observables update to spectral signs of their partial
/// contractions, the state to the top eigenvector of the bias operator.
/// Every accepted step is monotone, so the result is a valid lower bound
/// on the dimension-`d` bias.
pub fn seesaw_bias(game: &Game, d: usize, opts: &SeesawOptions) -> Result<f64> {
    Ok(seesaw_best(game, d, opts, None)?.bias)
}

/// [`seesaw_bias`] over `d = 1..=d_max` with nested seeding: each
/// dimension additionally starts from the best smaller-dimension strategy
/// padded with an identity block and zero state mass, making the returned
/// sequence non-decreasing.
pub fn seesaw_scan(game: &Game, d_max: usize, opts: &SeesawOptions) -> Result<Vec<f64>> {
    if d_max == 0 {
        return Err(Error::OutOfRange("see-saw dimension must be ≥ 1".into()));
    }
    let mut values = Vec::with_capacity(d_max);
    let mut prev: Option<SeesawState> = None;
    for d in 1..=d_max {
        let warm = prev.as_ref().map(|p| embed_state(p, d));
        let mut best = seesaw_best(game, d, opts, warm.as_ref())?;
        if let Some(p) = &prev {
            if p.bias > best.bias {
                // The embedded strategy itself achieves the previous bias.
                best = embed_state(p, d);
            }
        }
        values.push(best.bias);
        prev = Some(best);
    }
    Ok(values)
}

fn embed_state(s: &SeesawState, d: usize) -> SeesawState {
    let old = s.a[0].nrows();
    debug_assert!(d >= old);
    let grow = |x: &CMat| {
        let mut big = ceye(d);
        big.view_mut((0, 0), (old, old)).copy_from(x);
        big
    };
    let psi_m = psi_to_matrix(&s.psi, old, old);
    let mut psi = CVec::zeros(d * d);
    for i in 0..old {
        for j in 0..old {
            psi[i * d + j] = psi_m[(i, j)];
        }
    }
    SeesawState {
        a: s.a.iter().map(grow).collect(),
        b: s.b.iter().map(grow).collect(),
        psi,
        bias: s.bias,
    }
}

/// One row of a dimension sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub eps: f64,
    /// Smallest dimension whose see-saw bias reaches `ε_q − ε` (the scan
    /// maximum if none does — visible from the value column).
    pub measured_min_dim: usize,
    /// `min(C″·ε^{−1/12}, 2^⌊r/2⌋)` with `C″ = (C′/δ)^{−2/3}`,
    /// `C′ = 15(m+n)^{1/8}`, `δ = 1/(250 r²)`.
    pub bound_dim: f64,
    pub seesaw_value_at_min_dim: f64,
    pub certified_eps_q: f64,
    pub seeds: usize,
    pub iters: usize,
}

/// Options for [`dimension_sweep`].
#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    pub seesaw: SeesawOptions,
}

/// For each `ε` in the grid, scan dimensions `1..=2^⌊r/2⌋` by nested
/// see-saw for the smallest one achieving bias `≥ ε_q − ε`, and tabulate
/// it against the dimension lower bound
/// `min(C″ε^{−1/12}, 2^⌊r/2⌋)`, `C″ = (C′/δ)^{−2/3}`,
/// `C′ = 15(m+n)^{1/8}`, `δ = 1/(250r²)`.
pub fn dimension_sweep(
    game: &Game,
    cert: &crate::algebra::CliffordCertificate,
    eps_grid: &[f64],
    opts: &SweepOptions,
) -> Result<Vec<SweepRow>> {
    if !cert.is_strongly_clifford {
        return Err(Error::NotClifford);
    }
    let r = cert.r.ok_or(Error::NotClifford)?;
    let d_max = 1usize << (r / 2);
    let sol = solve_quantum_bias(game, &SolveOptions::default())?;
    if !sol.certified {
        return Err(Error::NotConverged {
            gap: sol.gap,
            tol: SolveOptions::default().tol,
        });
    }
    let eps_q = sol.primal_value;
    let values = seesaw_scan(game, d_max, &opts.seesaw)?;

    let total = (game.m() + game.n()) as f64;
    let c_prime = 15.0 * total.powf(0.125);
    let delta = 1.0 / (250.0 * (r * r) as f64);
    let c_dprime = (c_prime / delta).powf(-2.0 / 3.0);

    let mut rows = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        if !(eps > 0.0) {
            return Err(Error::OutOfRange(format!("eps must be positive, got {eps}")));
        }
        let target = eps_q - eps;
        let (min_dim, value) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| v >= target)
            .map(|(idx, &v)| (idx + 1, v))
            .unwrap_or((d_max, values[d_max - 1]));
        let bound_dim = (c_dprime * eps.powf(-1.0 / 12.0)).min(d_max as f64);
        rows.push(SweepRow {
            eps,
            measured_min_dim: min_dim,
            bound_dim,
            seesaw_value_at_min_dim: value,
            certified_eps_q: eps_q,
            seeds: opts.seesaw.seeds,
            iters: opts.seesaw.iters,
        });
    }
    Ok(rows)
}

/// One row of the vector-strategy rank check.
#[derive(Debug, Clone)]
pub struct VectRankRow {
    /// Number of zeroed directions.
    pub z: usize,
    /// Rank of the truncated Gram matrix.
    pub rank: usize,
    /// Measured bias deficit of the truncated strategy.
    pub deficit: f64,
    /// The lower bound `n − 8√2·n(n−1)·deficit`.
    pub bound: f64,
    /// `rank ≥ bound` (with round-off headroom).
    pub ok: bool,
}

/// Rank lower bound for near-optimal vector strategies of the complete
/// graph game on `n` vertices: truncating the optimal Gram matrix `I_n`
/// to rank `n − z` (zeroing `z` orthogonal directions, keeping the
/// all-ones direction so the diagonal stays positive, then renormalizing)
/// costs a bias deficit `ε_z`, and the rank must still satisfy
/// `rank ≥ n − 8√2·n(n−1)·ε_z`. Rows are reported for every `z` whose
/// deficit stays within `eps`.
pub fn vect_rank_bound_check(n: usize, eps: f64) -> Result<Vec<VectRankRow>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need n ≥ 2, got {n}")));
    }
    if !(eps > 0.0) {
        return Err(Error::OutOfRange(format!("eps must be positive, got {eps}")));
    }
    let game = crate::game::chsh_game(n)?;
    let sol = solve_quantum_bias(&game, &SolveOptions::default())?;
    if !sol.certified {
        return Err(Error::NotConverged {
            gap: sol.gap,
            tol: SolveOptions::default().tol,
        });
    }
    let eps_q = sol.primal_value;

    // Orthonormal directions with the all-ones vector first (so the kept
    // set always contains it): the normalized ones vector followed by
    // Helmert vectors.
    let mut dirs = RMat::zeros(n, n);
    for i in 0..n {
        dirs[(i, 0)] = 1.0 / (n as f64).sqrt();
    }
    for k in 1..n {
        // Helmert vector k: +1 on the first k entries, −k at entry k.
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            dirs[(i, k)] = 1.0 / norm;
        }
        dirs[(k, k)] = -(k as f64) / norm;
    }

    let factor = 8.0 * 2f64.sqrt() * (n * (n - 1)) as f64;
    let mut rows = Vec::new();
    for z in 0..n {
        let mut v = RMat::zeros(n, n);
        for k in 0..n - z {
            let col = if k == 0 {
                dirs.column(0)
            } else {
                // Skip the z zeroed directions: keep columns 0 and z+1..n.
                dirs.column(z + k)
            };
            v += &col * col.transpose();
        }
        // Renormalize the diagonal to 1.
        let mut scale = RMat::zeros(n, n);
        for i in 0..n {
            scale[(i, i)] = 1.0 / v[(i, i)].sqrt();
        }
        let v_norm = &scale * v * &scale;
        let value = crate::solver::gamma_value(&game, &v_norm)?;
        let deficit = (eps_q - value).max(0.0);
        if deficit > eps {
            continue;
        }
        let rank = v_norm
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .filter(|&&l| l.abs() > 1e-7)
            .count();
        let bound = n as f64 - factor * deficit;
        rows.push(VectRankRow {
            z,
            rank,
            deficit,
            bound,
            ok: rank as f64 >= bound - 1e-9,
        });
    }
    Ok(rows)
}
