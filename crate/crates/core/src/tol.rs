//! Numerical thresholds shared by every decision procedure.

/// Environment variable that overrides [`Tolerances::sol`]. Intended for tests.
pub const TOL_ENV: &str = "LIESOLITON_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Residual threshold for algebraic identities (Jacobi, derivations, symmetry).
    pub alg: f64,
    /// Relative singular-value cutoff for rank and nullspace decisions.
    pub rank: f64,
    /// Frobenius residual threshold for soliton feasibility solves.
    pub sol: f64,
    /// Tolerance on flow identities.
    pub flow: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            alg: 1e-9,
            rank: 1e-8,
            sol: 1e-7,
            flow: 1e-4,
        }
    }
}

impl Tolerances {
    /// Defaults, with `sol` taken from `LIESOLITON_TOL` when it parses as a positive float.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(v) = std::env::var(TOL_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
        {
            tol.sol = v;
        }
        tol
    }

    /// Lower bound a residual must exceed before a feasibility solve is called infeasible.
    pub fn infeasible_margin(&self) -> f64 {
        10.0 * self.sol
    }
}
