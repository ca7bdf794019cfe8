use std::collections::HashMap;
use std::io::Write;

use nalgebra::{Point3, Vector3};

/// Triangle mesh in torso coordinates (meters). Triangles are wound
/// counter-clockwise seen from outside.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point3<f64>>,
    pub triangles: Vec<[usize; 3]>,
    pub convex: bool,
}

impl Mesh {
    /// Every directed edge appears once and its reverse appears once.
    pub fn is_watertight(&self) -> bool {
        if self.triangles.is_empty() {
            return false;
        }
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *count.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        count.iter().all(|(&(a, b), &c)| c == 1 && count.get(&(b, a)) == Some(&1))
    }

    fn unit_normal(&self, t: &[usize; 3]) -> Vector3<f64> {
        let [a, b, c] = t.map(|i| self.vertices[i]);
        (b - a).cross(&(c - a)).normalize()
    }

    /// Signed distance of `p` to the convex mesh: the largest signed
    /// distance to any face plane. Non-positive inside.
    pub fn signed_distance(&self, p: &Point3<f64>) -> f64 {
        self.triangles
            .iter()
            .map(|t| self.unit_normal(t).dot(&(p - self.vertices[t[0]])))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, p: &Point3<f64>, eps: f64) -> bool {
        self.signed_distance(p) <= eps
    }

    /// Enclosed volume by the divergence theorem.
    pub fn volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i].coords);
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }

    /// Wavefront OBJ. Vertices are written Y-up: OBJ (x, y, z) = torso
    /// (x, z, -y), a proper rotation, so winding and normals survive.
    pub fn write_obj(&self, mut w: impl Write, name: &str) -> std::io::Result<()> {
        writeln!(w, "# reachmap hull: {name}")?;
        writeln!(w, "# units: meters, origin at the right shoulder")?;
        writeln!(w, "# Y-up: obj x = torso right (+X), obj y = torso up (+Z), obj z = torso posterior (-Y)")?;
        writeln!(w, "# {} vertices, {} triangles, convex = {}", self.vertices.len(), self.triangles.len(), self.convex)?;
        writeln!(w, "o {name}")?;
        for v in &self.vertices {
            writeln!(w, "v {:.9} {:.9} {:.9}", v.x, v.z, 0.0 - v.y)?;
        }
        for t in &self.triangles {
            writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
        }
        Ok(())
    }

    pub fn to_obj(&self, name: &str) -> String {
        let mut buf = Vec::new();
        self.write_obj(&mut buf, name).expect("writing to memory");
        String::from_utf8(buf).expect("OBJ is ASCII")
    }
}
