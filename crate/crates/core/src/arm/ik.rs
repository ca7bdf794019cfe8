use nalgebra::{SMatrix, SVector, Vector3};

use super::{chain_frames, ArmGeometry, CollisionModel, JointAngles, Pose, RomLimits, DOF};

/// Acceptance tolerances for an IK solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkTolerance {
    /// Maximum TCP position error in meters.
    pub position: f64,
    /// Maximum angle between achieved and target pointing axes in radians.
    pub angle: f64,
}

/// Damped-least-squares settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkSettings {
    pub damping: f64,
    pub max_iterations: usize,
    /// Central-difference step for the numerical Jacobian, radians.
    pub fd_step: f64,
    /// Meters per unit of pointing-axis error in the stacked residual.
    pub axis_weight: f64,
    /// Largest joint-space step per iteration (2-norm, radians).
    pub max_step: f64,
    /// Give up when the weighted residual has not dropped below
    /// `(1 - stall_ratio)` of its best value within `stall_window` iterations.
    pub stall_window: usize,
    pub stall_ratio: f64,
}

impl Default for IkSettings {
    fn default() -> Self {
        Self { damping: 0.1, max_iterations: 100, fd_step: 1e-6, axis_weight: 0.2, max_step: 0.5, stall_window: 10, stall_ratio: 1e-3 }
    }
}

type Residual = SVector<f64, 6>;
type Jacobian = SMatrix<f64, 6, DOF>;

fn stacked(q: &[f64; DOF], geom: &ArmGeometry, w: f64) -> Residual {
    let f = chain_frames(q, geom);
    let a = f.pointing * w;
    Residual::new(f.tip.x, f.tip.y, f.tip.z, a.x, a.y, a.z)
}

fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Solves for a configuration placing the TCP at `target`, or `None` when
/// the iteration does not converge (the target is treated as unreachable).
///
/// `collision` of `None` disables self-collision filtering.
pub fn solve_ik(
    target: &Pose,
    seed: &JointAngles,
    rom: &RomLimits,
    geom: &ArmGeometry,
    collision: Option<&CollisionModel>,
    tol: IkTolerance,
) -> Option<JointAngles> {
    solve_ik_with(target, seed, rom, geom, collision, tol, &IkSettings::default())
}

pub fn solve_ik_with(
    target: &Pose,
    seed: &JointAngles,
    rom: &RomLimits,
    geom: &ArmGeometry,
    collision: Option<&CollisionModel>,
    tol: IkTolerance,
    settings: &IkSettings,
) -> Option<JointAngles> {
    assert!(tol.position > 0.0 && tol.angle > 0.0, "IK tolerances must be positive");
    if target.position.coords.norm() > geom.total_reach() + tol.position {
        return None;
    }

    let w = settings.axis_weight;
    let goal_axis = target.pointing_axis.into_inner();
    let goal = {
        let p = target.position;
        let a = goal_axis * w;
        Residual::new(p.x, p.y, p.z, a.x, a.y, a.z)
    };
    let lambda2 = settings.damping * settings.damping;
    let h = settings.fd_step;

    let mut q = *seed.as_array();
    rom.clamp_in_place(&mut q);
    let mut best = f64::INFINITY;
    let mut best_iter = 0;

    for iter in 0..=settings.max_iterations {
        let frames = chain_frames(&q, geom);
        let pos_err = (target.position - frames.tip).norm();
        let ang_err = angle_between(&frames.pointing, &goal_axis);
        if pos_err <= tol.position
            && ang_err <= tol.angle
            && !collision.is_some_and(|cm| cm.frames_collide(&frames))
        {
            return Some(JointAngles(q));
        }
        if iter == settings.max_iterations {
            break;
        }

        let current = {
            let a = frames.pointing * w;
            Residual::new(frames.tip.x, frames.tip.y, frames.tip.z, a.x, a.y, a.z)
        };
        let err = goal - current;
        let err_norm = err.norm();
        if err_norm < best * (1.0 - settings.stall_ratio) {
            best = err_norm;
            best_iter = iter;
        } else if iter - best_iter >= settings.stall_window {
            break;
        }

        let mut jac = Jacobian::zeros();
        for j in 0..DOF {
            let mut plus = q;
            let mut minus = q;
            plus[j] += h;
            minus[j] -= h;
            let col = (stacked(&plus, geom, w) - stacked(&minus, geom, w)) / (2.0 * h);
            jac.set_column(j, &col);
        }

        // Joints pinned at a limit and pushed further into it are dropped
        // from the Jacobian so the remaining joints absorb the error.
        let mut active = [true; DOF];
        let mut dq;
        loop {
            let mut jac_active = jac;
            for (j, a) in active.iter().enumerate() {
                if !a {
                    jac_active.set_column(j, &Residual::zeros());
                }
            }
            let jjt = jac_active * jac_active.transpose() + SMatrix::<f64, 6, 6>::identity() * lambda2;
            let y = jjt.cholesky()?.solve(&err);
            dq = jac_active.transpose() * y;
            let mut changed = false;
            for j in 0..DOF {
                let pinned = (q[j] <= rom.lo(j) && dq[j] < 0.0) || (q[j] >= rom.hi(j) && dq[j] > 0.0);
                if active[j] && pinned {
                    active[j] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let n = dq.norm();
        if n > settings.max_step {
            dq *= settings.max_step / n;
        }

        let before = q;
        for (v, d) in q.iter_mut().zip(dq.iter()) {
            *v += d;
        }
        rom.clamp_in_place(&mut q);
        let moved: f64 = q.iter().zip(before.iter()).map(|(a, b)| (a - b).abs()).sum();
        if moved < 1e-12 {
            break;
        }
    }
    None
}
