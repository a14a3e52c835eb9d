//! Machine-readable artifacts: JSON documents for games, solver output,
//! certificates, and strategies; CSV tables for the verification
//! commands; deterministic 17-significant-digit float formatting and
//! atomic file writes.

use crate::algebra::CliffordCertificate;
use crate::error::{Error, Result};
use crate::game::{new_game, Game};
use crate::linalg::{CMat, CVec, RMat};
use crate::solver::{SdpSolution, VectorStrategy};
use crate::stability::SweepRow;
use crate::strategy::QuantumStrategy;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write as _;
use std::path::Path;

/// Format a float with 17 significant digits — enough for exact `f64`
/// round-trips — in a fixed scientific shape so identical runs emit
/// identical bytes.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

struct SigDigitsFormatter;

impl serde_json::ser::Formatter for SigDigitsFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize to a JSON string with the fixed float format and a trailing
/// newline. All floats must already be finite (DTO constructors check).
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitsFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Parse(format!("non-UTF8 output: {e}")))
}

/// Parse a JSON document into a DTO.
pub fn from_json_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

/// Read a whole file, mapping IO failures to [`Error::Io`].
pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Write a file atomically: contents go to a sibling temp file which is
/// renamed over the destination, so readers never observe a partial
/// document.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let mut file_name = path
        .file_name()
        .ok_or_else(|| Error::Parse(format!("not a file path: {}", path.display())))?
        .to_os_string();
    file_name.push(".tmp");
    let tmp = path.with_file_name(file_name);
    let mut f = std::fs::File::create(&tmp).map_err(io_err)?;
    f.write_all(contents.as_bytes()).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(io_err)
}

fn ensure_finite<'a>(values: impl IntoIterator<Item = &'a f64>, context: &'static str) -> Result<()> {
    for v in values {
        if !v.is_finite() {
            return Err(Error::NonFiniteEntry { context });
        }
    }
    Ok(())
}

fn rmat_rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn rmat_cols(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)]).collect())
        .collect()
}

fn cmat_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn cmat_from_rows(rows: &[Vec<[f64; 2]>], context: &'static str) -> Result<CMat> {
    let nr = rows.len();
    let nc = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Parse(format!("{context}: ragged matrix rows")));
    }
    let mut m = CMat::zeros(nr, nc);
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::NonFiniteEntry { context });
            }
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

/// The cost-matrix document: `{"m", "n", "cost"}` with the cost rows in
/// row-major order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameDto {
    pub m: usize,
    pub n: usize,
    pub cost: Vec<Vec<f64>>,
}

impl GameDto {
    pub fn from_game(game: &Game) -> GameDto {
        GameDto {
            m: game.m(),
            n: game.n(),
            cost: rmat_rows(game.cost()),
        }
    }

    /// Rebuild and re-validate the game (shape, finiteness,
    /// normalization).
    pub fn into_game(self) -> Result<Game> {
        if self.cost.len() != self.m || self.cost.iter().any(|r| r.len() != self.n) {
            return Err(Error::Parse(format!(
                "cost matrix shape does not match m = {}, n = {}",
                self.m, self.n
            )));
        }
        for row in &self.cost {
            ensure_finite(row, "game cost matrix")?;
        }
        let mat = RMat::from_fn(self.m, self.n, |i, j| self.cost[i][j]);
        new_game(mat, false)
    }
}

/// The solver document: primal/dual values, marginal biases, the dual
/// slack eigenvalue, and the embedded vector strategy (one row per
/// vector).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionDto {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub slack_min_eig: f64,
    #[serde(rename = "N")]
    pub n_embed: usize,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub certified: bool,
}

impl SolutionDto {
    pub fn from_solution(sol: &SdpSolution) -> Result<SolutionDto> {
        ensure_finite(
            [sol.primal_value, sol.dual_value, sol.gap, sol.slack_min_eig].iter(),
            "solution scalars",
        )?;
        ensure_finite(sol.c.iter().chain(sol.d.iter()), "marginal biases")?;
        Ok(SolutionDto {
            primal: sol.primal_value,
            dual: sol.dual_value,
            gap: sol.gap,
            c: sol.c.clone(),
            d: sol.d.clone(),
            slack_min_eig: sol.slack_min_eig,
            n_embed: sol.strategy.n_embed(),
            u: rmat_cols(sol.strategy.u()),
            v: rmat_cols(sol.strategy.v()),
            certified: sol.certified,
        })
    }

    /// Rebuild the solution, re-validating vector shapes and norms.
    pub fn into_solution(self) -> Result<SdpSolution> {
        ensure_finite(
            [self.primal, self.dual, self.gap, self.slack_min_eig]
                .iter()
                .chain(self.c.iter())
                .chain(self.d.iter())
                .chain(self.u.iter().flatten())
                .chain(self.v.iter().flatten()),
            "solution document",
        )?;
        let cols_to_mat = |cols: &[Vec<f64>], label: &str| -> Result<RMat> {
            if cols.iter().any(|col| col.len() != self.n_embed) {
                return Err(Error::Parse(format!(
                    "{label} vectors must all have N = {} entries",
                    self.n_embed
                )));
            }
            Ok(RMat::from_fn(self.n_embed, cols.len(), |i, j| cols[j][i]))
        };
        let u = cols_to_mat(&self.u, "u")?;
        let v = cols_to_mat(&self.v, "v")?;
        let strategy = VectorStrategy::from_columns(u, v)?;
        Ok(SdpSolution {
            strategy,
            primal_value: self.primal,
            c: self.c,
            d: self.d,
            dual_value: self.dual,
            gap: self.gap,
            slack_min_eig: self.slack_min_eig,
            certified: self.certified,
        })
    }
}

/// The certification document: `{"strongly_clifford", "V", "rank",
/// "min_dim", "ebits"}`; the last four are `null` when the game is not
/// strongly Clifford.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDto {
    pub strongly_clifford: bool,
    #[serde(rename = "V")]
    pub v: Option<Vec<Vec<f64>>>,
    pub rank: Option<usize>,
    pub min_dim: Option<usize>,
    pub ebits: Option<usize>,
}

impl CertificateDto {
    pub fn from_certificate(cert: &CliffordCertificate) -> Result<CertificateDto> {
        if let Some(v) = &cert.v {
            for i in 0..v.nrows() {
                for j in 0..v.ncols() {
                    if !v[(i, j)].is_finite() {
                        return Err(Error::NonFiniteEntry {
                            context: "certificate V matrix",
                        });
                    }
                }
            }
        }
        Ok(CertificateDto {
            strongly_clifford: cert.is_strongly_clifford,
            v: cert.v.as_ref().map(rmat_rows),
            rank: cert.r,
            min_dim: cert.min_dim,
            ebits: cert.ebits,
        })
    }
}

/// The strategy document: observables as nested `[re, im]` matrices, the
/// state as a flat interleaved array, dimensions recorded explicitly,
/// plus the evaluated bias and entanglement entropy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyDto {
    pub d1: usize,
    pub d2: usize,
    pub a: Vec<Vec<Vec<[f64; 2]>>>,
    pub b: Vec<Vec<Vec<[f64; 2]>>>,
    /// `[re₀, im₀, re₁, im₁, …]` over the `d1·d2` amplitudes.
    pub psi: Vec<f64>,
    pub bias: f64,
    pub entropy: f64,
}

impl StrategyDto {
    pub fn from_strategy(s: &QuantumStrategy, bias: f64, entropy: f64) -> Result<StrategyDto> {
        ensure_finite([bias, entropy].iter(), "strategy scalars")?;
        let flatten = |m: &CMat| {
            let rows = cmat_rows(m);
            if rows
                .iter()
                .flatten()
                .any(|&[re, im]| !re.is_finite() || !im.is_finite())
            {
                return Err(Error::NonFiniteEntry {
                    context: "strategy observable",
                });
            }
            Ok(rows)
        };
        let a = s.a().iter().map(flatten).collect::<Result<Vec<_>>>()?;
        let b = s.b().iter().map(flatten).collect::<Result<Vec<_>>>()?;
        let mut psi = Vec::with_capacity(2 * s.psi().len());
        for amp in s.psi().iter() {
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::NonFiniteEntry {
                    context: "strategy state",
                });
            }
            psi.push(amp.re);
            psi.push(amp.im);
        }
        Ok(StrategyDto {
            d1: s.d1(),
            d2: s.d2(),
            a,
            b,
            psi,
            bias,
            entropy,
        })
    }

    /// Rebuild the strategy, re-validating shapes, Hermiticity is not
    /// re-checked here (evaluation does that).
    pub fn into_strategy(self) -> Result<(QuantumStrategy, f64, f64)> {
        let a = self
            .a
            .iter()
            .map(|m| cmat_from_rows(m, "observable A"))
            .collect::<Result<Vec<_>>>()?;
        let b = self
            .b
            .iter()
            .map(|m| cmat_from_rows(m, "observable B"))
            .collect::<Result<Vec<_>>>()?;
        if self.psi.len() != 2 * self.d1 * self.d2 {
            return Err(Error::Parse(format!(
                "psi has {} reals, expected {}",
                self.psi.len(),
                2 * self.d1 * self.d2
            )));
        }
        ensure_finite(self.psi.iter(), "strategy state")?;
        let psi = CVec::from_fn(self.d1 * self.d2, |k, _| {
            Complex64::new(self.psi[2 * k], self.psi[2 * k + 1])
        });
        if a.iter().any(|m| m.nrows() != self.d1) || b.iter().any(|m| m.nrows() != self.d2) {
            return Err(Error::Parse(
                "observable dimensions do not match d1/d2".into(),
            ));
        }
        let strategy = QuantumStrategy::new(a, b, psi)?;
        Ok((strategy, self.bias, self.entropy))
    }
}

/// One named inequality or measurement in a verification table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRow {
    pub item: String,
    pub value: f64,
    pub bound: f64,
    pub ok: bool,
}

impl CheckRow {
    pub fn new(item: impl Into<String>, value: f64, bound: f64, ok: bool) -> CheckRow {
        CheckRow {
            item: item.into(),
            value,
            bound,
            ok,
        }
    }
}

/// CSV for verification tables: `item,value,bound,ok`.
pub fn check_rows_to_csv(rows: &[CheckRow]) -> String {
    let mut out = String::from("item,value,bound,ok\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.item,
            format_f64(row.value),
            format_f64(row.bound),
            row.ok
        ));
    }
    out
}

/// One dimension-sweep row as serialized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRowDto {
    pub eps: f64,
    pub measured_min_dim: usize,
    pub bound_dim: f64,
    pub seesaw_value_at_min_dim: f64,
    pub certified_eps_q: f64,
    pub seeds: usize,
    pub iters: usize,
}

impl SweepRowDto {
    pub fn from_row(row: &SweepRow) -> Result<SweepRowDto> {
        ensure_finite(
            [row.eps, row.bound_dim, row.seesaw_value_at_min_dim, row.certified_eps_q].iter(),
            "sweep row",
        )?;
        Ok(SweepRowDto {
            eps: row.eps,
            measured_min_dim: row.measured_min_dim,
            bound_dim: row.bound_dim,
            seesaw_value_at_min_dim: row.seesaw_value_at_min_dim,
            certified_eps_q: row.certified_eps_q,
            seeds: row.seeds,
            iters: row.iters,
        })
    }
}

/// CSV for dimension sweeps, with the fixed column set
/// `eps,measured_min_dim,bound_dim,seesaw_value_at_min_dim,certified_eps_q,seeds,iters`.
pub fn sweep_rows_to_csv(rows: &[SweepRowDto]) -> String {
    let mut out = String::from(
        "eps,measured_min_dim,bound_dim,seesaw_value_at_min_dim,certified_eps_q,seeds,iters\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            format_f64(row.eps),
            row.measured_min_dim,
            format_f64(row.bound_dim),
            format_f64(row.seesaw_value_at_min_dim),
            format_f64(row.certified_eps_q),
            row.seeds,
            row.iters
        ));
    }
    out
}

/// The bundled single-document report for one game.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDto {
    pub game: GameDto,
    pub solution: SolutionDto,
    pub certificate: CertificateDto,
    /// Absent when synthesis is not applicable (e.g. a zero-bias row).
    pub strategy: Option<StrategyDto>,
    /// Human-readable reason when `strategy` is absent.
    pub strategy_error: Option<String>,
    /// Representation checks on the synthesized marginal.
    pub checks: Vec<CheckRow>,
    /// Present when a sweep grid was requested.
    pub sweep: Option<Vec<SweepRowDto>>,
}
