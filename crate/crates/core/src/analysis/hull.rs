//! Quickhull over integer lattice points with exact predicates.
//!
//! Voxel corners sit on an integer lattice, so orientation tests are done in
//! `i128` and never misclassify coplanar points. After the hull is built,
//! coplanar triangles are merged into facets, vertices that are not corners
//! of their facet polygon are dropped, and each facet is re-triangulated as
//! a fan. The result has exactly the extreme points as vertices.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

pub type LatticePoint = [i64; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("no points to hull")]
    Empty,
    #[error("points are degenerate (affine rank {rank}); no 3D hull exists")]
    Degenerate { rank: usize },
}

/// Triangulated convex polytope with outward (counter-clockwise seen from
/// outside) faces. Vertex indices refer to `vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeHull {
    pub vertices: Vec<LatticePoint>,
    pub triangles: Vec<[usize; 3]>,
}

fn sub(a: &LatticePoint, b: &LatticePoint) -> [i128; 3] {
    [(a[0] - b[0]) as i128, (a[1] - b[1]) as i128, (a[2] - b[2]) as i128]
}

fn cross(a: [i128; 3], b: [i128; 3]) -> [i128; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [i128; 3], b: [i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Positive when `d` lies on the side of triangle `abc` that its
/// counter-clockwise normal points to.
pub fn orient(a: &LatticePoint, b: &LatticePoint, c: &LatticePoint, d: &LatticePoint) -> i128 {
    dot(cross(sub(b, a), sub(c, a)), sub(d, a))
}

struct Face {
    v: [usize; 3],
    outside: Vec<usize>,
    alive: bool,
}

struct Builder<'a> {
    pts: &'a [LatticePoint],
    faces: Vec<Face>,
    // directed edge (a, b) -> face whose boundary contains it
    edges: HashMap<(usize, usize), usize>,
}

impl<'a> Builder<'a> {
    fn add_face(&mut self, v: [usize; 3]) -> usize {
        let id = self.faces.len();
        for k in 0..3 {
            self.edges.insert((v[k], v[(k + 1) % 3]), id);
        }
        self.faces.push(Face { v, outside: Vec::new(), alive: true });
        id
    }

    fn kill_face(&mut self, id: usize) {
        let v = self.faces[id].v;
        for k in 0..3 {
            if self.edges.get(&(v[k], v[(k + 1) % 3])) == Some(&id) {
                self.edges.remove(&(v[k], v[(k + 1) % 3]));
            }
        }
        self.faces[id].alive = false;
    }

    fn height(&self, face: usize, p: usize) -> i128 {
        let [a, b, c] = self.faces[face].v;
        orient(&self.pts[a], &self.pts[b], &self.pts[c], &self.pts[p])
    }

    fn assign(&mut self, candidates: impl IntoIterator<Item = usize>, faces: &[usize]) {
        for p in candidates {
            if let Some(&f) = faces.iter().find(|&&f| self.height(f, p) > 0) {
                self.faces[f].outside.push(p);
            }
        }
    }

    fn run(&mut self) {
        loop {
            let Some(face) = self.faces.iter().position(|f| f.alive && !f.outside.is_empty()) else {
                break;
            };
            let apex = *self.faces[face]
                .outside
                .iter()
                .max_by_key(|&&p| (self.height(face, p), std::cmp::Reverse(p)))
                .unwrap();

            // visible region by flood fill from `face`
            let mut visible = vec![face];
            let mut is_visible: HashMap<usize, bool> = HashMap::from([(face, true)]);
            let mut horizon: Vec<(usize, usize)> = Vec::new();
            let mut stack = vec![face];
            while let Some(f) = stack.pop() {
                let v = self.faces[f].v;
                for k in 0..3 {
                    let (a, b) = (v[k], v[(k + 1) % 3]);
                    let nb = self.edges[&(b, a)];
                    let vis = *is_visible.entry(nb).or_insert_with(|| self.height(nb, apex) > 0);
                    if vis {
                        if !visible.contains(&nb) {
                            visible.push(nb);
                            stack.push(nb);
                        }
                    } else {
                        horizon.push((a, b));
                    }
                }
            }

            let mut orphans = Vec::new();
            for &f in &visible {
                orphans.append(&mut self.faces[f].outside);
                self.kill_face(f);
            }
            let new_faces: Vec<usize> = horizon.iter().map(|&(a, b)| self.add_face([a, b, apex])).collect();
            self.assign(orphans.into_iter().filter(|&p| p != apex), &new_faces);
        }
    }
}

fn initial_simplex(pts: &[LatticePoint]) -> Result<[usize; 4], HullError> {
    let p0 = 0;
    let Some(p1) = (0..pts.len()).max_by_key(|&i| {
        let d = sub(&pts[i], &pts[p0]);
        dot(d, d)
    }) else {
        return Err(HullError::Empty);
    };
    if pts[p1] == pts[p0] {
        return Err(HullError::Degenerate { rank: 0 });
    }
    let line = sub(&pts[p1], &pts[p0]);
    let p2 = (0..pts.len())
        .max_by_key(|&i| {
            let c = cross(line, sub(&pts[i], &pts[p0]));
            dot(c, c)
        })
        .unwrap();
    let c = cross(line, sub(&pts[p2], &pts[p0]));
    if dot(c, c) == 0 {
        return Err(HullError::Degenerate { rank: 1 });
    }
    let p3 = (0..pts.len()).max_by_key(|&i| orient(&pts[p0], &pts[p1], &pts[p2], &pts[i]).abs()).unwrap();
    if orient(&pts[p0], &pts[p1], &pts[p2], &pts[p3]) == 0 {
        return Err(HullError::Degenerate { rank: 2 });
    }
    Ok([p0, p1, p2, p3])
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Convex hull of a lattice point set.
pub fn lattice_hull(points: &[LatticePoint]) -> Result<LatticeHull, HullError> {
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.is_empty() {
        return Err(HullError::Empty);
    }
    let [a, b, c, d] = initial_simplex(&pts)?;
    let mut builder = Builder { pts: &pts, faces: Vec::new(), edges: HashMap::new() };
    let tetra = if orient(&pts[a], &pts[b], &pts[c], &pts[d]) < 0 {
        [[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    } else {
        [[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    };
    let initial: Vec<usize> = tetra.iter().map(|v| builder.add_face(*v)).collect();
    builder.assign((0..pts.len()).filter(|i| ![a, b, c, d].contains(i)), &initial);
    builder.run();

    // group triangles by their exact supporting plane
    let mut facets: BTreeMap<([i128; 3], i128), Vec<[usize; 3]>> = BTreeMap::new();
    for f in builder.faces.iter().filter(|f| f.alive) {
        let [i, j, k] = f.v;
        let n = cross(sub(&pts[j], &pts[i]), sub(&pts[k], &pts[i]));
        let g = gcd(gcd(n[0], n[1]), n[2]);
        let n = [n[0] / g, n[1] / g, n[2] / g];
        let off = dot(n, [pts[i][0] as i128, pts[i][1] as i128, pts[i][2] as i128]);
        facets.entry((n, off)).or_default().push(f.v);
    }

    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut polygons: Vec<Vec<usize>> = Vec::with_capacity(facets.len());
    for (key, tris) in &facets {
        let normal = key.0;
        // boundary = directed edges whose reverse is not in the facet
        let mut directed: HashMap<usize, usize> = HashMap::new();
        let all: std::collections::HashSet<(usize, usize)> =
            tris.iter().flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3]))).collect();
        for &(u, v) in &all {
            if !all.contains(&(v, u)) {
                directed.insert(u, v);
            }
        }
        let start = *directed.keys().min().unwrap();
        let mut ring = vec![start];
        let mut cur = directed[&start];
        while cur != start {
            ring.push(cur);
            cur = directed[&cur];
        }
        // drop vertices where the boundary goes straight on
        let n = ring.len();
        let corners: Vec<usize> = (0..n)
            .filter(|&k| {
                let prev = ring[(k + n - 1) % n];
                let next = ring[(k + 1) % n];
                let turn = cross(sub(&pts[ring[k]], &pts[prev]), sub(&pts[next], &pts[ring[k]]));
                dot(turn, normal) != 0
            })
            .map(|k| ring[k])
            .collect();
        for &v in &corners {
            let next = remap.len();
            remap.entry(v).or_insert(next);
        }
        polygons.push(corners);
    }

    let mut vertices = vec![[0i64; 3]; remap.len()];
    for (&old, &new) in &remap {
        vertices[new] = pts[old];
    }
    let mut triangles = Vec::new();
    for poly in polygons {
        for k in 1..poly.len() - 1 {
            triangles.push([remap[&poly[0]], remap[&poly[k]], remap[&poly[k + 1]]]);
        }
    }
    Ok(LatticeHull { vertices, triangles })
}

impl LatticeHull {
    /// Every undirected edge is used by exactly two triangles, once in each
    /// direction.
    pub fn is_watertight(&self) -> bool {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *count.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        count.iter().all(|(&(a, b), &c)| c == 1 && count.get(&(b, a)) == Some(&1))
    }

    /// True if no triangle has `p` strictly in front of it.
    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.triangles.iter().all(|t| {
            orient(&self.vertices[t[0]], &self.vertices[t[1]], &self.vertices[t[2]], p) <= 0
        })
    }
}
