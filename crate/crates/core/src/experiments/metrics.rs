use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::encoding::qubit_upper_bound;

/// `|(λ - λ₁) / λ| · 100` with `λ` the baseline norm.
pub fn relative_error(lambda_baseline: f64, lambda_algo: f64) -> Result<f64, ExperimentError> {
    if !(lambda_baseline > 0.0) {
        return Err(ExperimentError::ZeroBaseline);
    }
    Ok(((lambda_baseline - lambda_algo) / lambda_baseline).abs() * 100.0)
}

/// `√(r / 2πe) · det^{1/r}`.
pub fn gaussian_heuristic(rank: usize, det: f64) -> f64 {
    let r = rank as f64;
    (r / (2.0 * PI * E)).sqrt() * (det.ln() / r).exp()
}

/// Qubits for the Ising-mapping SVP algorithms: `1.5·r·log₂r + r`.
pub fn qia_qubits(rank: usize) -> f64 {
    let r = rank as f64;
    1.5 * r * r.log2() + r
}

/// Largest rank whose [`qia_qubits`] fits in `budget`; 0 if none does.
pub fn qia_max_rank(budget: usize) -> usize {
    let mut r = 1;
    while qia_qubits(r + 1) <= budget as f64 {
        r += 1;
    }
    if r < 2 {
        0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Vqkz,
    Qia,
    Iqoa,
}

/// Qubits used in the small-scale experiments: `q` per coordinate, over the
/// block for VQKZ and over the whole lattice for the Ising-mapping methods.
pub fn experimental_qubits(method: Method, rank: usize, beta: usize, q: usize) -> usize {
    match method {
        Method::Vqkz => q * beta,
        Method::Qia | Method::Iqoa => q * rank,
    }
}

/// What bounds the Hermite constant `γ_β` in the rank-feasibility test.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HermiteBase {
    /// `r/8 + 6/5`.
    #[default]
    Rank,
    /// `β/8 + 6/5`.
    Beta,
}

/// `(H + 6/5)^{(r-1)/(2(β-1)) + β(β-2)/(2r(β-1))} - √(r/2πe)` with `H = r/8`
/// or `β/8`; a rank is feasible for `β` when this is `≤ 0`.
pub fn vqkz_feasibility_gap(rank: usize, beta: usize, base: HermiteBase) -> f64 {
    let (r, b) = (rank as f64, beta as f64);
    let h = match base {
        HermiteBase::Rank => r / 8.0,
        HermiteBase::Beta => b / 8.0,
    } + 1.2;
    let exponent = (r - 1.0) / (2.0 * (b - 1.0)) + b * (b - 2.0) / (2.0 * r * (b - 1.0));
    let lhs = (exponent * h.ln()).exp();
    lhs - (r / (2.0 * PI * E)).sqrt()
}

/// Largest β whose qubit bound fits in `budget`.
pub fn max_beta(budget: usize, delta: f64) -> Option<usize> {
    let mut best = None;
    let mut beta = 2;
    while let Ok(n) = qubit_upper_bound(beta, delta) {
        if n > budget {
            break;
        }
        best = Some(beta);
        beta += 1;
    }
    best
}

/// Smallest feasible β for `rank`, limited to `β ≤ min(beta_cap, rank)`.
pub fn vqkz_min_beta(rank: usize, beta_cap: usize, base: HermiteBase) -> Option<usize> {
    (2..=beta_cap.min(rank)).find(|&b| vqkz_feasibility_gap(rank, b, base) <= 0.0)
}

/// Largest rank in `2..=rank_limit` with a feasible β inside the qubit budget,
/// as `(rank, smallest such β)`.
pub fn vqkz_max_rank(
    budget: usize,
    delta: f64,
    base: HermiteBase,
    rank_limit: usize,
) -> Option<(usize, usize)> {
    let cap = max_beta(budget, delta)?;
    (2..=rank_limit)
        .rev()
        .find_map(|r| vqkz_min_beta(r, cap, base).map(|b| (r, b)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub rank: usize,
    pub qia_qubits: f64,
    /// VQKZ qubits at the smallest feasible β under each Hermite bound.
    pub vqkz_qubits_rank_base: Option<usize>,
    pub vqkz_qubits_beta_base: Option<usize>,
}

/// Qubit requirement per rank for both method families.
pub fn qubit_curve(budget: usize, delta: f64, rank_limit: usize) -> Vec<CurvePoint> {
    let cap = max_beta(budget, delta).unwrap_or(1);
    let qubits = |r, base| vqkz_min_beta(r, cap, base).and_then(|b| qubit_upper_bound(b, delta).ok());
    (2..=rank_limit)
        .map(|rank| CurvePoint {
            rank,
            qia_qubits: qia_qubits(rank),
            vqkz_qubits_rank_base: qubits(rank, HermiteBase::Rank),
            vqkz_qubits_beta_base: qubits(rank, HermiteBase::Beta),
        })
        .collect()
}

/// Whitespace-separated columns with `#` comments; missing values are `NaN`.
pub fn curve_data(budget: usize, delta: f64, rank_limit: usize) -> String {
    let fmt = |v: Option<usize>| v.map_or("NaN".to_string(), |n| n.to_string());
    let fmt_rank = |v: Option<(usize, usize)>| v.map_or("none".to_string(), |(r, b)| format!("{r} (beta {b})"));
    // reference values are only known for the 1121-qubit budget
    let expected = |v: &str| if budget == 1121 { format!(" (expected {v})") } else { String::new() };
    let mut out = String::new();
    out.push_str(&format!("# qubit budget {budget}, delta {delta}\n"));
    out.push_str(&format!("# qia max rank: {}{}\n", qia_max_rank(budget), expected("101")));
    for (name, base) in [("r/8", HermiteBase::Rank), ("beta/8", HermiteBase::Beta)] {
        out.push_str(&format!(
            "# vqkz max rank, hermite bound {name}: {}{}\n",
            fmt_rank(vqkz_max_rank(budget, delta, base, rank_limit)),
            expected("163")
        ));
    }
    out.push_str("# rank qia_qubits vqkz_qubits_rank_base vqkz_qubits_beta_base\n");
    for p in qubit_curve(budget, delta, rank_limit) {
        out.push_str(&format!(
            "{} {} {} {}\n",
            p.rank,
            p.qia_qubits,
            fmt(p.vqkz_qubits_rank_base),
            fmt(p.vqkz_qubits_beta_base)
        ));
    }
    out
}
