use nalgebra::{SMatrix, SVector};
use thiserror::Error;

use super::{Frame, WrenchCommand};

pub const THRUSTER_COUNT: usize = 8;

pub type AllocationMatrix = SMatrix<f64, 4, THRUSTER_COUNT>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AllocationError {
    #[error("allocation matrix has rank {rank} < 4")]
    RankDeficientLayout { rank: usize },
    #[error("thruster limit {index} has min {min} > max {max}")]
    InvalidLimits { index: usize, min: f64, max: f64 },
    #[error("allocation expects a body-frame wrench")]
    WrongFrame,
}

/// Maps eight scalar thrusts to the body wrench `[Fx, Fy, Fz, τψ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThrusterLayout {
    allocation: AllocationMatrix,
    pseudo_inverse: SMatrix<f64, THRUSTER_COUNT, 4>,
    thrust_limits: [[f64; 2]; THRUSTER_COUNT],
}

impl ThrusterLayout {
    /// Builds a layout, rejecting matrices that cannot actuate all four axes.
    pub fn new(
        allocation: AllocationMatrix,
        thrust_limits: [[f64; 2]; THRUSTER_COUNT],
    ) -> Result<Self, AllocationError> {
        for (index, [min, max]) in thrust_limits.iter().copied().enumerate() {
            if min.is_nan() || max.is_nan() || min > max {
                return Err(AllocationError::InvalidLimits { index, min, max });
            }
        }
        let singular = allocation.singular_values();
        let largest = singular.max();
        let rank = singular.iter().filter(|s| **s > largest * 1e-10 && **s > 0.0).count();
        if rank < 4 {
            return Err(AllocationError::RankDeficientLayout { rank });
        }
        // B⁺ = Bᵀ (B Bᵀ)⁻¹, the minimum-norm right inverse of a full-row-rank B.
        let gram = allocation * allocation.transpose();
        let gram_inv = gram
            .lu()
            .try_inverse()
            .ok_or(AllocationError::RankDeficientLayout { rank: 3 })?;
        Ok(Self {
            allocation,
            pseudo_inverse: allocation.transpose() * gram_inv,
            thrust_limits,
        })
    }

    /// Four vertical thrusters plus four horizontal thrusters vectored at ±45°.
    ///
    /// Thrusters 1–4 push along body z. Thrusters 5–8 sit at
    /// `(±arm_x, ±arm_y)` in the order front-right, front-left, rear-right,
    /// rear-left.
    pub fn symmetric_default(arm_x: f64, arm_y: f64, max_thrust: f64) -> Result<Self, AllocationError> {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let positions = [(arm_x, arm_y), (arm_x, -arm_y), (-arm_x, arm_y), (-arm_x, -arm_y)];
        let directions = [(c, -c), (c, c), (c, c), (c, -c)];
        let mut b = AllocationMatrix::zeros();
        for i in 0..4 {
            b[(2, i)] = 1.0;
        }
        for (k, ((x, y), (dx, dy))) in positions.iter().zip(directions).enumerate() {
            let col = 4 + k;
            b[(0, col)] = dx;
            b[(1, col)] = dy;
            b[(3, col)] = x * dy - y * dx;
        }
        Self::new(b, [[-max_thrust, max_thrust]; THRUSTER_COUNT])
    }

    pub fn allocation(&self) -> &AllocationMatrix {
        &self.allocation
    }

    pub fn pseudo_inverse(&self) -> &SMatrix<f64, THRUSTER_COUNT, 4> {
        &self.pseudo_inverse
    }

    pub fn thrust_limits(&self) -> &[[f64; 2]; THRUSTER_COUNT] {
        &self.thrust_limits
    }

    /// Body wrench produced by the given thrusts.
    pub fn wrench_from(&self, thrusts: &[f64; THRUSTER_COUNT]) -> WrenchCommand {
        let w = self.allocation * SVector::<f64, THRUSTER_COUNT>::from(*thrusts);
        WrenchCommand::body(w[0], w[1], w[2], w[3])
    }
}

/// Pseudo-inverse allocation followed by a per-thruster clamp. The residual
/// lost to saturation is not redistributed.
pub fn allocate_thrusters(
    layout: &ThrusterLayout,
    wrench: &WrenchCommand,
) -> Result<[f64; THRUSTER_COUNT], AllocationError> {
    if wrench.frame != Frame::Body {
        return Err(AllocationError::WrongFrame);
    }
    let u = layout.pseudo_inverse * SVector::<f64, 4>::from(wrench.as_array());
    Ok(std::array::from_fn(|i| {
        let [min, max] = layout.thrust_limits[i];
        u[i].clamp(min, max)
    }))
}
