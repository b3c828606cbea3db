//! Central tolerance configuration shared by all numerical stages.

/// Numerical tolerances used across the crate. One record holds every
/// threshold so that solver stages stay consistent with each other.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Polynomial coefficients with modulus below this are dropped after arithmetic.
    pub coeff_drop: f64,
    /// Relative singular-value threshold for rank decisions.
    pub rank_rel: f64,
    /// Relative deviation allowed when a matrix is required to be Hermitian.
    pub herm_rel: f64,
    /// Relative singular-value cutoff in minimum-norm least squares.
    pub lstsq_rel: f64,
    /// Residual bound for algebra membership (after normalizing the target).
    pub membership: f64,
    /// Affine residual target of the feasibility solver (Frobenius).
    pub sdp_tol: f64,
    /// Iteration cap of the feasibility solver.
    pub sdp_max_iter: usize,
    /// Bound for certificate identity checks at sampled points.
    pub cert_verify: f64,
    /// Allowed Gram mismatch when completing an isometry to a unitary.
    pub gram_match: f64,
    /// Unitarity residual required of colligations.
    pub unitary: f64,
    /// Default residual bound for variety membership tests.
    pub variety: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            coeff_drop: 1e-14,
            rank_rel: 1e-10,
            herm_rel: 1e-10,
            lstsq_rel: 1e-12,
            membership: 1e-8,
            sdp_tol: 1e-9,
            sdp_max_iter: 50_000,
            cert_verify: 1e-7,
            gram_match: 1e-8,
            unitary: 1e-9,
            variety: 1e-8,
        }
    }
}
