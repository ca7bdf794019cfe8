#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use nalgebra::{Matrix4, Point3, Vector4};
use rand::Rng;
use reachmap::arm::{ArmGeometry, JointAngles, RomLimits};
use reachmap::capmap::GenerationParams;

/// Coarse generation settings for tests: 0.10 m voxels, 30 degree lattice,
/// 16 directions.
pub fn coarse_params() -> GenerationParams {
    GenerationParams {
        voxel_edge: 0.10,
        proximal_step: 30f64.to_radians(),
        wrist_step: 30f64.to_radians(),
        n_dir: 16,
        ..Default::default()
    }
}

/// Nominal, partially restricted and restricted limits, each nested in the
/// previous one.
pub fn nested_roms() -> [RomLimits; 3] {
    let nominal = RomLimits::nominal();
    let mut partial = nominal.to_degrees();
    partial[0] = [-30.0, 120.0];
    partial[1] = [-40.0, 120.0];
    partial[2] = [-80.0, 60.0];
    let mut restricted = partial;
    restricted[0] = [-30.0, 60.0];
    restricted[1] = [-20.0, 60.0];
    restricted[2] = [-60.0, 40.0];
    [nominal, RomLimits::from_degrees(partial).unwrap(), RomLimits::from_degrees(restricted).unwrap()]
}

pub fn random_config(rng: &mut impl Rng, rom: &RomLimits) -> JointAngles {
    JointAngles::new(std::array::from_fn(|j| rng.random_range(rom.lo(j)..=rom.hi(j)))).unwrap()
}

fn rot_x(a: f64) -> Matrix4<f64> {
    let (s, c) = a.sin_cos();
    Matrix4::new(1.0, 0.0, 0.0, 0.0, 0.0, c, -s, 0.0, 0.0, s, c, 0.0, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(a: f64) -> Matrix4<f64> {
    let (s, c) = a.sin_cos();
    Matrix4::new(c, 0.0, s, 0.0, 0.0, 1.0, 0.0, 0.0, -s, 0.0, c, 0.0, 0.0, 0.0, 0.0, 1.0)
}

fn rot_z(a: f64) -> Matrix4<f64> {
    let (s, c) = a.sin_cos();
    Matrix4::new(c, -s, 0.0, 0.0, s, c, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0)
}

fn down(len: f64) -> Matrix4<f64> {
    let mut t = Matrix4::identity();
    t[(2, 3)] = -len;
    t
}

/// Fingertip position from a product of 4x4 homogeneous transforms.
pub fn homogeneous_tip(q: &JointAngles, g: &ArmGeometry) -> Point3<f64> {
    let q = q.as_array();
    let t = rot_y(-q[0])
        * rot_x(q[1])
        * rot_z(q[2])
        * down(g.upper_arm_length())
        * rot_x(q[3])
        * rot_z(q[4])
        * down(g.forearm_length())
        * rot_x(q[5])
        * rot_y(q[6])
        * down(g.hand_length());
    let p = t * Vector4::new(0.0, 0.0, 0.0, 1.0);
    Point3::new(p.x, p.y, p.z)
}

type P = [i64; 3];

fn sub(a: &P, b: &P) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Strict 2D convex hull corners (collinear points dropped).
fn corners_2d(pts: &[([i64; 2], usize)]) -> Vec<usize> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup_by_key(|x| x.0);
    if p.len() <= 2 {
        return p.iter().map(|x| x.1).collect();
    }
    let turn = |o: [i64; 2], a: [i64; 2], b: [i64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<([i64; 2], usize)> = Vec::new();
    for x in &p {
        while lower.len() >= 2 && turn(lower[lower.len() - 2].0, lower[lower.len() - 1].0, x.0) <= 0 {
            lower.pop();
        }
        lower.push(*x);
    }
    let mut upper: Vec<([i64; 2], usize)> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2].0, upper[upper.len() - 1].0, x.0) <= 0 {
            upper.pop();
        }
        upper.push(*x);
    }
    lower.pop();
    upper.pop();
    lower.into_iter().chain(upper).map(|x| x.1).collect()
}

/// Vertex set of the convex hull of 3D lattice points by exhaustive search:
/// every non-collinear triple spanning a supporting plane defines a facet,
/// and the facet's strict 2D corners are hull vertices. Requires a
/// full-dimensional point set.
pub fn brute_force_hull_vertices(points: &[P]) -> BTreeSet<P> {
    let all: BTreeSet<P> = points.iter().copied().collect();
    // a point strictly between two others on a lattice line is never a vertex
    let dirs: [[i64; 3]; 13] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, -1, 0], [1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1], [1, 1, 1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]];
    let pts: Vec<P> = all
        .iter()
        .filter(|p| {
            !dirs.iter().any(|d| {
                all.contains(&[p[0] + d[0], p[1] + d[1], p[2] + d[2]]) && all.contains(&[p[0] - d[0], p[1] - d[1], p[2] - d[2]])
            })
        })
        .copied()
        .collect();
    let n = pts.len();
    let mut seen_planes: HashSet<([i64; 3], i64)> = HashSet::new();
    let mut vertices = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let ab = sub(&pts[j], &pts[i]);
            for k in j + 1..n {
                let nrm = cross(ab, sub(&pts[k], &pts[i]));
                if nrm == [0, 0, 0] {
                    continue;
                }
                let g = gcd(gcd(nrm[0], nrm[1]), nrm[2]);
                let mut nrm = nrm.map(|v| v / g);
                let mut off = dot(nrm, pts[i]);
                let (mut pos, mut neg) = (false, false);
                for p in &pts {
                    let s = dot(nrm, *p) - off;
                    pos |= s > 0;
                    neg |= s < 0;
                    if pos && neg {
                        break;
                    }
                }
                if pos && neg {
                    continue;
                }
                if pos {
                    nrm = nrm.map(|v| -v);
                    off = -off;
                }
                if !seen_planes.insert((nrm, off)) {
                    continue;
                }
                // project the facet onto the two axes not dominated by the normal
                let drop = (0..3).max_by_key(|&a| nrm[a].abs()).unwrap();
                let axes: Vec<usize> = (0..3).filter(|&a| a != drop).collect();
                let facet: Vec<([i64; 2], usize)> = pts
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| dot(nrm, **p) == off)
                    .map(|(idx, p)| ([p[axes[0]], p[axes[1]]], idx))
                    .collect();
                for idx in corners_2d(&facet) {
                    vertices.insert(pts[idx]);
                }
            }
        }
    }
    vertices
}

/// Sample standard deviation with n - 1, computed two-pass.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() > 1 { (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    (mean, sd)
}
