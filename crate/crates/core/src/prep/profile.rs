use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::shift::SidebandProfile;

/// Solution of the spectral-profile synthesis system: complex weights
/// x_theta, one per pitch value, such that the weighted sum of acquired
/// signals over the pitch set reproduces a target sideband profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileWeights {
    pub theta_set: Vec<f64>,
    /// Weight per pitch value, same order as `theta_set`.
    pub x: Vec<C64>,
    /// Sideband orders spanned by the synthesis system.
    pub orders: Vec<i64>,
    pub target: SidebandProfile,
    /// Max-norm residual of the solved linear system.
    pub residual: f64,
    /// Whether the residual is at solver precision; false means the
    /// target is not reachable from this pitch set.
    pub realizable: bool,
}

/// Solve sum_theta a^(k) e^{i k theta} x_theta = target_k for the pitch
/// weights x. `a_coeffs` holds the per-order signal coefficients a^(k)
/// for |k| <= K; the pitch set must contain exactly 2K + 1 values so the
/// system is square. Degenerate pitch sets (repeated values) make the
/// system singular and are rejected.
pub fn solve_profile_weights(
    target: &SidebandProfile,
    theta_set: &[f64],
    a_coeffs: &SidebandProfile,
) -> Result<ProfileWeights, CoreError> {
    let orders: Vec<i64> = (-a_coeffs.k..=a_coeffs.k).collect();
    assert_eq!(
        theta_set.len(),
        orders.len(),
        "need one pitch value per sideband order"
    );
    let n = orders.len();
    let a = DMatrix::from_fn(n, n, |i, j| {
        let k = orders[i];
        a_coeffs.get(k) * C64::from_polar(1.0, k as f64 * theta_set[j])
    });
    let b = DVector::from_fn(n, |i, _| target.get(orders[i]));

    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > 1e12 {
        return Err(CoreError::SingularWeightSystem { cond });
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|_| CoreError::SingularWeightSystem { cond })?;

    let residual = (&a * &x - &b).camax();
    let scale = b.camax().max(1.0);
    let realizable = residual <= 1e-8 * scale;
    Ok(ProfileWeights {
        theta_set: theta_set.to_vec(),
        x: x.iter().copied().collect(),
        orders,
        target: target.clone(),
        residual,
        realizable,
    })
}
