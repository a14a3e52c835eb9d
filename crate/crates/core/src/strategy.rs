//! Explicit quantum strategies and their synthesis from vector strategies.
//!
//! A quantum strategy is a pair of Hermitian ±1-observable families
//! `A_1..A_m` on `H₁`, `B_1..B_n` on `H₂`, and a shared unit state `ψ`;
//! its bias is `Σ_ij G_ij ⟨ψ|A_i⊗B_j|ψ⟩`. Synthesis turns a certified
//! vector strategy into such a triple on the smallest dimension the
//! Clifford structure allows: an orthonormal basis of `span{v_j}` (rank
//! `r′`) indexes anticommuting generators, `B_j` is the coordinate
//! combination of generators, `A_i` the entrywise conjugate of
//! `(1/c_i)Σ_j G_ij B_j`, and `ψ` the maximally entangled state on
//! `D = 2^⌊r′/2⌋`.
//!
//! Throughout, `ψ` is identified with the `d₁×d₂` matrix `Ψ` via
//! `ψ_{i·d₂+j} = Ψ_ij`, so `(A⊗B)ψ ↦ AΨBᵀ` and
//! `⟨ψ|A⊗B|ψ⟩ = tr(Ψ†AΨBᵀ)`. Entrywise conjugation is always taken in
//! this fixed computational basis.

use crate::algebra::{clifford_generators, CliffordCertificate};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::linalg::{ceye, hermiticity_defect, op_norm, CMat, CVec};
use crate::solver::SdpSolution;
use num_complex::Complex64;

/// Relative singular-value cutoff for the effective rank of `span{v_j}`.
/// Converged strategies have singular values at unit scale or at round-off
/// scale with nothing in between, so the margin is wide on both sides.
const SPAN_RANK_RTOL: f64 = 1e-5;

/// Hermiticity / involution tolerance on observables.
const OBSERVABLE_TOL: f64 = 1e-9;

/// An explicit quantum strategy: observables for both players and a shared
/// entangled state.
#[derive(Debug, Clone)]
pub struct QuantumStrategy {
    a: Vec<CMat>,
    b: Vec<CMat>,
    psi: CVec,
    d1: usize,
    d2: usize,
}

impl QuantumStrategy {
    /// Build a strategy, checking shapes and that `ψ` is a unit vector
    /// within `1e−12`. Observable invariants (Hermiticity, squares) are
    /// enforced where the bias is evaluated.
    pub fn new(a: Vec<CMat>, b: Vec<CMat>, psi: CVec) -> Result<Self> {
        let d1 = a.first().map(|x| x.nrows()).ok_or_else(|| {
            Error::DimensionMismatch("strategy needs at least one row observable".into())
        })?;
        let d2 = b.first().map(|x| x.nrows()).ok_or_else(|| {
            Error::DimensionMismatch("strategy needs at least one column observable".into())
        })?;
        for (label, fam, d) in [("A", &a, d1), ("B", &b, d2)] {
            for (idx, x) in fam.iter().enumerate() {
                if x.nrows() != d || x.ncols() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "{label}[{idx}] is {}×{}, expected {d}×{d}",
                        x.nrows(),
                        x.ncols()
                    )));
                }
            }
        }
        if psi.len() != d1 * d2 {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, expected {}·{}",
                psi.len(),
                d1,
                d2
            )));
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange(format!(
                "state norm {norm:.15} differs from 1 beyond 1e-12"
            )));
        }
        Ok(QuantumStrategy { a, b, psi, d1, d2 })
    }

    /// Row-player observables.
    pub fn a(&self) -> &[CMat] {
        &self.a
    }

    /// Column-player observables.
    pub fn b(&self) -> &[CMat] {
        &self.b
    }

    /// The shared state as a flat vector of length `d₁·d₂`.
    pub fn psi(&self) -> &CVec {
        &self.psi
    }

    /// Row-player dimension.
    pub fn d1(&self) -> usize {
        self.d1
    }

    /// Column-player dimension.
    pub fn d2(&self) -> usize {
        self.d2
    }

    /// The state reshaped to the `d₁×d₂` matrix `Ψ`.
    pub fn psi_matrix(&self) -> CMat {
        psi_to_matrix(&self.psi, self.d1, self.d2)
    }
}

/// Reshape a flat state (index `i·d₂ + j`) into its `d₁×d₂` matrix.
pub fn psi_to_matrix(psi: &CVec, d1: usize, d2: usize) -> CMat {
    CMat::from_fn(d1, d2, |i, j| psi[i * d2 + j])
}

/// Reduced data of a strategy on the column player's side.
#[derive(Debug, Clone)]
pub struct Marginal {
    /// The column-player observables.
    pub b: Vec<CMat>,
    /// Reduced density matrix `ρ = λλ*` on `H₂`.
    pub rho: CMat,
    /// `d₂×d₁` matrix with `|ψ⟩ = Σ_i |i⟩ ⊗ λ|i⟩`, i.e. `λ = Ψᵀ`.
    pub lambda: CMat,
}

/// Synthesize an explicit optimal strategy from a certified solve.
///
/// The certificate fixes expectations (for strongly Clifford algebras its
/// rank equals the span rank used here); the construction itself works
/// from the vectors, so a non-Clifford certificate falls back to the same
/// span-rank computation.
pub fn synthesize_optimal(
    game: &Game,
    sol: &SdpSolution,
    cert: &CliffordCertificate,
) -> Result<QuantumStrategy> {
    if !sol.certified {
        return Err(Error::NotConverged {
            gap: sol.gap,
            tol: 0.0,
        });
    }
    for (i, &ci) in sol.c.iter().enumerate() {
        if ci <= 0.0 {
            return Err(Error::ZeroRowBias { index: i });
        }
    }

    // Orthonormal basis of span{v_j}.
    let v = sol.strategy.v();
    let svd = v.clone().svd(true, false);
    let smax = svd.singular_values.max();
    let r_prime = svd
        .singular_values
        .iter()
        .filter(|&&s| s > SPAN_RANK_RTOL * smax)
        .count();
    let basis_full = svd.u.as_ref().expect("SVD with u requested");
    let basis = basis_full.columns(0, r_prime);
    let _ = cert; // dimension is governed by the vectors; see doc comment

    let gens = clifford_generators(r_prime.max(1), 1)?;
    let d = gens[0].nrows();

    let mut b_obs = Vec::with_capacity(game.n());
    for j in 0..game.n() {
        let mut w = basis.transpose() * v.column(j);
        let norm = w.norm();
        if norm == 0.0 {
            return Err(Error::OutOfRange(format!(
                "column vector {j} vanishes on the span basis"
            )));
        }
        w /= norm;
        let mut bj = CMat::zeros(d, d);
        for (k, x) in gens.iter().enumerate() {
            bj += x * Complex64::new(w[k], 0.0);
        }
        b_obs.push(bj);
    }

    let g = game.cost();
    let mut a_obs = Vec::with_capacity(game.m());
    for i in 0..game.m() {
        let mut ai = CMat::zeros(d, d);
        for j in 0..game.n() {
            let gij = g[(i, j)];
            if gij != 0.0 {
                ai += &b_obs[j] * Complex64::new(gij / sol.c[i], 0.0);
            }
        }
        a_obs.push(ai.conjugate());
    }

    let scale = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut psi = CVec::zeros(d * d);
    for k in 0..d {
        psi[k * d + k] = scale;
    }

    QuantumStrategy::new(a_obs, b_obs, psi)
}

fn validate_observables(fam: &[CMat], offset: usize) -> Result<()> {
    for (idx, x) in fam.iter().enumerate() {
        let h = hermiticity_defect(x);
        if h > OBSERVABLE_TOL {
            return Err(Error::NonHermitianObservable {
                index: offset + idx,
                defect: h,
            });
        }
        let eye = ceye(x.nrows());
        let inv = op_norm(&(x * x - eye));
        if inv > OBSERVABLE_TOL {
            return Err(Error::NonHermitianObservable {
                index: offset + idx,
                defect: inv,
            });
        }
    }
    Ok(())
}

/// Success bias `Σ_ij G_ij ⟨ψ|A_i⊗B_j|ψ⟩` of a strategy, after checking
/// the observable invariants (Hermitian, square ≈ identity within `1e−9`).
/// The imaginary part, which the Hermiticity check bounds by round-off, is
/// discarded.
pub fn evaluate_bias(game: &Game, s: &QuantumStrategy) -> Result<f64> {
    if s.a.len() != game.m() || s.b.len() != game.n() {
        return Err(Error::DimensionMismatch(format!(
            "strategy has {}×{} observables, game is {}×{}",
            s.a.len(),
            s.b.len(),
            game.m(),
            game.n()
        )));
    }
    validate_observables(&s.a, 0)?;
    validate_observables(&s.b, game.m())?;
    let psi_m = s.psi_matrix();
    let g = game.cost();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..game.m() {
        // T_i = Ψ†A_iΨ, then ⟨ψ|A_i⊗B_j|ψ⟩ = tr(T_i B_jᵀ) = Σ_kl T_kl (B_j)_kl.
        let t = psi_m.adjoint() * &s.a[i] * &psi_m;
        for j in 0..game.n() {
            let gij = g[(i, j)];
            if gij == 0.0 {
                continue;
            }
            let corr: Complex64 = t.iter().zip(s.b[j].iter()).map(|(x, y)| x * y).sum();
            total += corr * gij;
        }
    }
    Ok(total.re)
}

/// Von Neumann entropy, in ebits, of the reduced state of `psi`
/// (length `d1·d2`). Schmidt weights are renormalized by their sum, so a
/// state that is unit-norm up to round-off loses no accuracy.
pub fn entanglement_entropy(psi: &CVec, d1: usize, d2: usize) -> Result<f64> {
    if psi.len() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "state has length {}, expected {d1}·{d2}",
            psi.len()
        )));
    }
    let m = psi_to_matrix(psi, d1, d2);
    let sv = m.svd(false, false).singular_values;
    let total: f64 = sv.iter().map(|&s| s * s).sum();
    if total <= 0.0 {
        return Err(Error::OutOfRange("state has zero norm".into()));
    }
    let mut h = 0.0;
    for &s in sv.iter() {
        let p = (s * s) / total;
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    Ok(h)
}

/// Column-side marginal of a strategy: `λ = Ψᵀ` and `ρ = λλ*`.
pub fn marginal_of(s: &QuantumStrategy) -> Marginal {
    let lambda = s.psi_matrix().transpose();
    let rho = &lambda * lambda.adjoint();
    Marginal {
        b: s.b.clone(),
        rho,
        lambda,
    }
}

/// Both sides of the tensor-commutation identity for one observable pair.
#[derive(Debug, Clone, Copy)]
pub struct TensorCommuteCheck {
    /// `‖(A⊗I − I⊗B)ψ‖`.
    pub lhs: f64,
    /// `‖λĀ − Bλ‖_F`.
    pub rhs: f64,
    /// `‖ρB − Bρ‖_F`.
    pub commutator: f64,
    /// Whether `commutator ≤ 2·lhs` (plus round-off headroom).
    pub commutator_ok: bool,
}

/// Evaluate `‖(A⊗I − I⊗B)ψ‖ = ‖λĀ − Bλ‖_F` and the induced bound on
/// `‖[ρ, B]‖_F`. The two sides agree (for Hermitian `A`) because the
/// matrices are transposes of one another.
pub fn tensorcommute_residual(
    a: &CMat,
    b: &CMat,
    psi: &CVec,
    d1: usize,
    d2: usize,
) -> Result<TensorCommuteCheck> {
    if a.nrows() != d1 || a.ncols() != d1 || b.nrows() != d2 || b.ncols() != d2 {
        return Err(Error::DimensionMismatch(
            "observable dimensions do not match d1/d2".into(),
        ));
    }
    if psi.len() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "state has length {}, expected {d1}·{d2}",
            psi.len()
        )));
    }
    let psi_m = psi_to_matrix(psi, d1, d2);
    let lhs = (a * &psi_m - &psi_m * b.transpose()).norm();
    let lambda = psi_m.transpose();
    let rhs = (&lambda * a.conjugate() - b * &lambda).norm();
    let rho = &lambda * lambda.adjoint();
    let commutator = (&rho * b - b * &rho).norm();
    Ok(TensorCommuteCheck {
        lhs,
        rhs,
        commutator,
        commutator_ok: commutator <= 2.0 * lhs + 1e-12,
    })
}

/// Grow `span ⊇ cols(seed)` under left-multiplication by `ops` until
/// stable, returning the final rank (singular values > `tol`). Stability
/// is reached within `d` rounds since the rank strictly grows until then.
fn generated_rank(ops: &[CMat], seed: &CMat, tol: f64) -> usize {
    let d = seed.nrows();
    let mut basis = orth_basis(seed, tol);
    loop {
        let rank = basis.ncols();
        if rank >= d || rank == 0 {
            return rank;
        }
        let mut pieces = vec![basis.clone()];
        for op in ops {
            pieces.push(op * &basis);
        }
        basis = orth_basis(&stack_columns(&pieces), tol);
        if basis.ncols() == rank {
            return rank;
        }
    }
}

fn stack_columns(mats: &[CMat]) -> CMat {
    let rows = mats[0].nrows();
    let cols: usize = mats.iter().map(|m| m.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for m in mats {
        out.view_mut((0, at), (rows, m.ncols())).copy_from(m);
        at += m.ncols();
    }
    out
}

fn orth_basis(m: &CMat, tol: f64) -> CMat {
    if m.ncols() == 0 {
        return m.clone();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("SVD with u requested");
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    u.columns(0, rank).into_owned()
}

/// A strategy is non-degenerate when the algebra generated by the
/// column-player observables maps the columns of `λ` onto all of `H₂`, and
/// symmetrically the conjugated row observables map the columns of `λ*`
/// onto all of `H₁`. Ranks are decided by singular values above `tol`.
pub fn check_nondegenerate(s: &QuantumStrategy, tol: f64) -> bool {
    let lambda = s.psi_matrix().transpose();
    let b_rank = generated_rank(&s.b, &lambda, tol);
    if b_rank < s.d2 {
        return false;
    }
    let a_conj: Vec<CMat> = s.a.iter().map(|x| x.conjugate()).collect();
    let a_rank = generated_rank(&a_conj, &lambda.adjoint(), tol);
    a_rank >= s.d1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_solution_algebra, strongly_clifford_certificate, verify_relations};
    use crate::game::{chsh_game, new_game, tight_game};
    use crate::linalg::{cmax_abs, random_hermitian, random_unitary, RMat};
    use crate::solver::{solve_quantum_bias, SolveOptions};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn synthesized(game: &Game) -> (SdpSolution, QuantumStrategy) {
        let sol = solve_quantum_bias(game, &SolveOptions::default()).unwrap();
        assert!(sol.certified);
        let alg = build_solution_algebra(game, &sol.c).unwrap();
        let cert = strongly_clifford_certificate(&alg);
        let strat = synthesize_optimal(game, &sol, &cert).unwrap();
        (sol, strat)
    }

    #[test]
    fn chsh_synthesis_end_to_end() {
        let game = chsh_game(2).unwrap();
        let (sol, strat) = synthesized(&game);
        assert_eq!(strat.d1(), 2);
        assert_eq!(strat.d2(), 2);
        let bias = evaluate_bias(&game, &strat).unwrap();
        assert_relative_eq!(bias, FRAC_1_SQRT_2, epsilon = 1e-8);
        assert_relative_eq!(bias, sol.c.iter().sum::<f64>(), epsilon = 1e-8);
        let entropy = entanglement_entropy(strat.psi(), 2, 2).unwrap();
        assert_eq!(entropy, 1.0, "entropy must be exact, got {entropy}");
    }

    #[test]
    fn chsh4_synthesis_dimension_four() {
        let game = chsh_game(4).unwrap();
        let (_, strat) = synthesized(&game);
        assert_eq!(strat.d1(), 4);
        let bias = evaluate_bias(&game, &strat).unwrap();
        assert_relative_eq!(bias, FRAC_1_SQRT_2, epsilon = 1e-8);
        let entropy = entanglement_entropy(strat.psi(), 4, 4).unwrap();
        assert_eq!(entropy, 2.0, "entropy must be exact, got {entropy}");
    }

    #[test]
    fn tight2_synthesis_is_classical() {
        let game = tight_game(2).unwrap();
        let (_, strat) = synthesized(&game);
        assert_eq!(strat.d1(), 1);
        let bias = evaluate_bias(&game, &strat).unwrap();
        assert_relative_eq!(bias, 1.0, epsilon = 1e-9);
        let entropy = entanglement_entropy(strat.psi(), 1, 1).unwrap();
        assert_eq!(entropy, 0.0);
    }

    #[test]
    fn correlation_fidelity() {
        for game in [chsh_game(2).unwrap(), chsh_game(3).unwrap(), tight_game(4).unwrap()] {
            let (sol, strat) = synthesized(&game);
            let psi_m = strat.psi_matrix();
            let u = sol.strategy.u();
            let v = sol.strategy.v();
            for i in 0..game.m() {
                let t = psi_m.adjoint() * &strat.a()[i] * &psi_m;
                for j in 0..game.n() {
                    let corr: Complex64 =
                        t.iter().zip(strat.b()[j].iter()).map(|(x, y)| x * y).sum();
                    let expect = u.column(i).dot(&v.column(j));
                    assert!(
                        (corr.re - expect).abs() < 1e-8 && corr.im.abs() < 1e-10,
                        "corr ({i},{j}) = {corr}, expected {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn synthesized_marginals_satisfy_relations() {
        for game in [chsh_game(3).unwrap(), tight_game(4).unwrap()] {
            let (sol, strat) = synthesized(&game);
            let alg = build_solution_algebra(&game, &sol.c).unwrap();
            let defect = verify_relations(&alg, strat.b()).unwrap();
            assert!(defect <= 1e-8, "marginal defect {defect}");
        }
    }

    #[test]
    fn zero_row_refused() {
        let cost = RMat::from_row_slice(2, 2, &[0.5, -0.5, 0.0, 0.0]);
        let game = new_game(cost, false).unwrap();
        let sol = solve_quantum_bias(&game, &SolveOptions::default()).unwrap();
        assert!(sol.certified);
        let alg = build_solution_algebra(&game, &sol.c).unwrap();
        let cert = strongly_clifford_certificate(&alg);
        assert!(matches!(
            synthesize_optimal(&game, &sol, &cert),
            Err(Error::ZeroRowBias { index: 1 })
        ));
    }

    #[test]
    fn uncertified_solution_refused() {
        let game = tight_game(4).unwrap();
        let opts = SolveOptions {
            restarts: 1,
            max_iters: 1,
            tol: 1e-12,
            ..SolveOptions::default()
        };
        let sol = solve_quantum_bias(&game, &opts).unwrap();
        assert!(!sol.certified);
        let alg = build_solution_algebra(&game, &sol.c).unwrap();
        let cert = strongly_clifford_certificate(&alg);
        assert!(synthesize_optimal(&game, &sol, &cert).is_err());
    }

    #[test]
    fn identity_observables_give_matrix_sum() {
        let game = chsh_game(2).unwrap();
        let psi = CVec::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let strat =
            QuantumStrategy::new(vec![ceye(2), ceye(2)], vec![ceye(2), ceye(2)], psi).unwrap();
        let bias = evaluate_bias(&game, &strat).unwrap();
        assert_relative_eq!(bias, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn global_phase_invariance() {
        let game = chsh_game(2).unwrap();
        let (_, strat) = synthesized(&game);
        let flipped = QuantumStrategy::new(
            strat.a().to_vec(),
            strat.b().to_vec(),
            -strat.psi().clone(),
        )
        .unwrap();
        let b1 = evaluate_bias(&game, &strat).unwrap();
        let b2 = evaluate_bias(&game, &flipped).unwrap();
        assert_eq!(b1, b2);
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let game = chsh_game(2).unwrap();
        let mut bad = ceye(2);
        bad[(0, 1)] = Complex64::new(0.0, 0.5);
        let psi = CVec::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let strat = QuantumStrategy::new(vec![bad, ceye(2)], vec![ceye(2), ceye(2)], psi).unwrap();
        assert!(matches!(
            evaluate_bias(&game, &strat),
            Err(Error::NonHermitianObservable { index: 0, .. })
        ));
    }

    #[test]
    fn entropy_oracles() {
        // Product state.
        let mut psi = CVec::zeros(4);
        psi[0] = Complex64::new(1.0, 0.0);
        assert_eq!(entanglement_entropy(&psi, 2, 2).unwrap(), 0.0);

        // Maximally entangled on D = 4.
        let mut psi = CVec::zeros(16);
        for k in 0..4 {
            psi[k * 4 + k] = Complex64::new(0.5, 0.0);
        }
        assert_eq!(entanglement_entropy(&psi, 4, 4).unwrap(), 2.0);

        // Schmidt weights (0.8, 0.2).
        let mut psi = CVec::zeros(4);
        psi[0] = Complex64::new(0.8f64.sqrt(), 0.0);
        psi[3] = Complex64::new(0.2f64.sqrt(), 0.0);
        let expect = -(0.8 * 0.8f64.log2() + 0.2 * 0.2f64.log2());
        assert_relative_eq!(
            entanglement_entropy(&psi, 2, 2).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert_relative_eq!(expect, 0.7219280948873623, epsilon = 1e-12);
    }

    #[test]
    fn marginal_oracles() {
        // Maximally entangled D = 2 → ρ = I/2.
        let game = chsh_game(2).unwrap();
        let (_, strat) = synthesized(&game);
        let marg = marginal_of(&strat);
        assert!(cmax_abs(&(&marg.rho - ceye(2) * Complex64::new(0.5, 0.0))) < 1e-12);

        // Product state |0⟩⊗|φ⟩ → ρ = |φ⟩⟨φ|.
        let phi = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let mut psi = CVec::zeros(4);
        psi[0] = phi[0];
        psi[1] = phi[1];
        let strat = QuantumStrategy::new(vec![ceye(2)], vec![ceye(2)], psi).unwrap();
        let marg = marginal_of(&strat);
        let mut proj = CMat::zeros(2, 2);
        for r in 0..2 {
            for c in 0..2 {
                proj[(r, c)] = phi[r] * phi[c].conj();
            }
        }
        assert!(cmax_abs(&(&marg.rho - proj)) < 1e-12);
        assert_relative_eq!(marg.rho.trace().re, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn synthesized_marginal_commutes_with_observables() {
        let game = chsh_game(3).unwrap();
        let (_, strat) = synthesized(&game);
        let marg = marginal_of(&strat);
        let d = strat.d2();
        assert!(cmax_abs(&(&marg.rho - ceye(d) * Complex64::new(1.0 / d as f64, 0.0))) < 1e-9);
        for bj in &marg.b {
            let comm = (&marg.rho * bj - bj * &marg.rho).norm();
            assert!(comm < 1e-9, "commutator {comm}");
        }
    }

    #[test]
    fn tensorcommute_identity_observables() {
        let mut psi = CVec::zeros(4);
        psi[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        psi[3] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let check = tensorcommute_residual(&ceye(2), &ceye(2), &psi, 2, 2).unwrap();
        assert_eq!(check.lhs, 0.0);
        assert_eq!(check.rhs, 0.0);
        assert!(check.commutator_ok);
    }

    #[test]
    fn tensorcommute_equality_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d1 in 2..=4usize {
            for d2 in 2..=4usize {
                for _ in 0..100 {
                    let a = random_hermitian(&mut rng, d1, 1.0);
                    let b = random_hermitian(&mut rng, d2, 1.0);
                    let mut psi = CVec::from_fn(d1 * d2, |_, _| {
                        Complex64::new(
                            crate::linalg::sample_normal(&mut rng),
                            crate::linalg::sample_normal(&mut rng),
                        )
                    });
                    psi /= Complex64::new(psi.norm(), 0.0);
                    let check = tensorcommute_residual(&a, &b, &psi, d1, d2).unwrap();
                    assert!(
                        (check.lhs - check.rhs).abs() < 1e-10,
                        "lhs {} vs rhs {}",
                        check.lhs,
                        check.rhs
                    );
                    assert!(check.commutator_ok);
                }
            }
        }
    }

    #[test]
    fn tensorcommute_conjugated_construction_vanishes() {
        // With λ = U/√d unitary (scaled) and B = UĀU†, the identity side
        // ‖λĀ − Bλ‖ is exactly zero by construction.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = 3;
        let a = random_hermitian(&mut rng, d, 1.0);
        let u = random_unitary(&mut rng, d);
        let scale = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        let lambda = &u * scale;
        let b = &u * a.conjugate() * u.adjoint();
        // λ = Ψᵀ → Ψ = λᵀ.
        let psi_m = lambda.transpose();
        let mut psi = CVec::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                psi[i * d + j] = psi_m[(i, j)];
            }
        }
        let check = tensorcommute_residual(&a, &b, &psi, d, d).unwrap();
        assert!(check.lhs < 1e-12, "lhs {}", check.lhs);
        assert!(check.rhs < 1e-12, "rhs {}", check.rhs);
    }

    #[test]
    fn nondegeneracy_of_synthesized_and_padded() {
        let game = chsh_game(2).unwrap();
        let (_, strat) = synthesized(&game);
        assert!(check_nondegenerate(&strat, 1e-9));

        // Pad the column side with an untouched block of zero state mass.
        let d2 = strat.d2();
        let padded_b: Vec<CMat> = strat
            .b()
            .iter()
            .map(|bj| {
                let mut big = ceye(d2 + 1);
                big.view_mut((0, 0), (d2, d2)).copy_from(bj);
                big
            })
            .collect();
        let mut padded_psi = CVec::zeros(strat.d1() * (d2 + 1));
        let psi_m = strat.psi_matrix();
        for i in 0..strat.d1() {
            for j in 0..d2 {
                padded_psi[i * (d2 + 1) + j] = psi_m[(i, j)];
            }
        }
        let padded =
            QuantumStrategy::new(strat.a().to_vec(), padded_b, padded_psi).unwrap();
        assert!(!check_nondegenerate(&padded, 1e-9));
    }

    #[test]
    fn trivial_strategy_nondegenerate() {
        let one = CVec::from_vec(vec![Complex64::new(1.0, 0.0)]);
        let strat = QuantumStrategy::new(vec![ceye(1)], vec![ceye(1)], one).unwrap();
        assert!(check_nondegenerate(&strat, 1e-9));
    }
}
