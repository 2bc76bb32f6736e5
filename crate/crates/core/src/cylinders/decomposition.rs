use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::permsurf::Origami;
use crate::rational::{q, Q};

/// How vertices of cone angle `2π` are treated when cutting into cylinders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkedPoints {
    /// Every vertex of the tiling is a marked point and bounds cylinders, so
    /// each row of squares is its own cylinder.
    #[default]
    Singular,
    /// Only genuine cone points bound cylinders; rows separated by a circle
    /// of regular vertices are merged.
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cylinder {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderDecomposition {
    /// Sorted by `(width, height)`.
    pub cylinders: Vec<Cylinder>,
}

impl CylinderDecomposition {
    pub fn area(&self) -> usize {
        self.cylinders.iter().map(|c| c.width * c.height).sum()
    }

    /// `Σ h / w`, the cylinder weight entering Siegel–Veech constants. It
    /// does not change when a cylinder is cut along a regular circle.
    pub fn modulus_sum(&self) -> Q {
        self.cylinders.iter().map(|c| q(c.height as i64, c.width as i64)).sum()
    }

    /// Least common multiple of the widths.
    pub fn width_lcm(&self) -> usize {
        self.cylinders.iter().fold(1, |acc, c| acc.lcm(&c.width))
    }
}

/// Horizontal cylinders of an origami. Rows are the cycles of `h`.
pub fn horizontal_cylinders(o: &Origami, mode: MarkedPoints) -> CylinderDecomposition {
    let rows = o.h().cycles();
    let mut row_of = vec![0usize; o.squares()];
    for (k, r) in rows.iter().enumerate() {
        for &i in r {
            row_of[i] = k;
        }
    }
    // above[k] = Some(row on top of row k) if the circle between them carries
    // no cone point
    let mut above: Vec<Option<usize>> = vec![None; rows.len()];
    if mode == MarkedPoints::Regular {
        let c = o.vertex_permutation();
        for (k, r) in rows.iter().enumerate() {
            // the upper-left corner of i is the lower-left corner of v(i)
            let regular = r.iter().all(|&i| c.apply(o.v().apply(i)) == o.v().apply(i));
            if regular {
                let target = row_of[o.v().apply(r[0])];
                debug_assert!(r.iter().all(|&i| row_of[o.v().apply(i)] == target));
                above[k] = Some(target);
            }
        }
    }
    // stacks of rows joined by regular circles; a torus with no cone point
    // at all is one closed stack, cut at an arbitrary circle
    let mut seen = vec![false; rows.len()];
    let mut cylinders = Vec::new();
    let has_below: Vec<bool> = {
        let mut b = vec![false; rows.len()];
        for t in above.iter().flatten() {
            b[*t] = true;
        }
        b
    };
    let starts: Vec<usize> =
        (0..rows.len()).filter(|&k| !has_below[k]).chain(0..rows.len()).collect();
    for start in starts {
        if seen[start] {
            continue;
        }
        let mut height = 0;
        let mut k = start;
        loop {
            seen[k] = true;
            height += 1;
            match above[k] {
                Some(next) if !seen[next] => k = next,
                _ => break,
            }
        }
        cylinders.push(Cylinder { width: rows[start].len(), height });
    }
    cylinders.sort();
    CylinderDecomposition { cylinders }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_single_cylinder() {
        for mode in [MarkedPoints::Singular, MarkedPoints::Regular] {
            let d = horizontal_cylinders(&Origami::torus(), mode);
            assert_eq!(d.cylinders, vec![Cylinder { width: 1, height: 1 }]);
        }
    }

    #[test]
    fn l_shape() {
        // h = (1 2 3) is a single row
        let o: Origami = "3; (1 2 3); (1 2)".parse().unwrap();
        let d = horizontal_cylinders(&o, MarkedPoints::Singular);
        assert_eq!(d.area(), 3);
        assert_eq!(d.cylinders, vec![Cylinder { width: 3, height: 1 }]);
        let o: Origami = "3; (1 2); (1 3)".parse().unwrap();
        let d = horizontal_cylinders(&o, MarkedPoints::Regular);
        assert_eq!(d.cylinders, vec![Cylinder { width: 1, height: 1 }, Cylinder { width: 2, height: 1 }]);
        assert_eq!(d.modulus_sum(), q(3, 2));
    }

    #[test]
    fn tall_torus_merges_rows() {
        // 1x3 vertical torus: three rows of width 1, all vertices regular
        let o: Origami = "3; (); (1 2 3)".parse().unwrap();
        let split = horizontal_cylinders(&o, MarkedPoints::Singular);
        let merged = horizontal_cylinders(&o, MarkedPoints::Regular);
        assert_eq!(split.cylinders.len(), 3);
        assert_eq!(merged.cylinders, vec![Cylinder { width: 1, height: 3 }]);
        assert_eq!(split.modulus_sum(), merged.modulus_sum());
    }
}
