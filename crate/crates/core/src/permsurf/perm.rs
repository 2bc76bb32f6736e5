//! Permutations of `{0, .., d-1}`.
//!
//! Internally zero-based; the text format uses one-based cycle notation,
//! e.g. `(1 2 3)(4 5)` with `()` for the identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            let x = x as usize;
            if x >= d || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm { images })
    }

    pub fn identity(d: usize) -> Self {
        Perm {
            images: (0..d as u32).collect(),
        }
    }

    /// Translation `x ↦ x + shift (mod d)` on `Z/d`.
    pub fn rotation(d: usize, shift: usize) -> Self {
        Perm {
            images: (0..d).map(|x| ((x + shift) % d) as u32).collect(),
        }
    }

    pub fn from_fn(d: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Perm::new((0..d).map(|i| f(i) as u32).collect())
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `self` first, then `other`: `i ↦ other(self(i))`.
    ///
    /// Products of monodromy permutations `g0·g1·…` are read left to right
    /// with this method.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn pow(&self, k: usize) -> Perm {
        let mut out = Perm::identity(self.degree());
        for _ in 0..k {
            out = out.then(self);
        }
        out
    }

    /// The permutation obtained by renaming every point `i` to `relabel(i)`:
    /// `i ↦ relabel(self(relabel⁻¹(i)))`.
    pub fn relabel(&self, relabel: &Perm) -> Perm {
        let mut out = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            out[relabel.apply(i)] = relabel.images[x as usize];
        }
        Perm { images: out }
    }

    /// Cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in nonincreasing order (fixed points included).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }

    /// Parses one-based cycle notation for a permutation of degree `d`.
    pub fn parse_cycles(text: &str, d: usize) -> Result<Perm> {
        let mut images: Vec<u32> = (0..d as u32).collect();
        let mut seen = vec![false; d];
        let text = text.trim();
        if text.is_empty() {
            return Ok(Perm { images });
        }
        let mut rest = text;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            let body_start = rest_trim
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in cycle notation `{text}`")))?;
            let close = body_start
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in `{text}`")))?;
            let body = &body_start[..close];
            rest = body_start[close + 1..].trim_start();
            let points: Vec<usize> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point `{s}` in `{text}`")))
                })
                .collect::<Result<_>>()?;
            for &p in &points {
                if p == 0 || p > d {
                    return Err(Error::Parse(format!("point {p} out of range 1..={d}")));
                }
                if std::mem::replace(&mut seen[p - 1], true) {
                    return Err(Error::Parse(format!("point {p} repeated in `{text}`")));
                }
            }
            for (k, &p) in points.iter().enumerate() {
                let next = points[(k + 1) % points.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Perm { images })
    }
}

impl TryFrom<Vec<u32>> for Perm {
    type Error = Error;
    fn try_from(images: Vec<u32>) -> Result<Self> {
        Perm::new(images)
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Vec<u32> {
        p.images
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            any = true;
            write!(f, "(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// Whether the group generated by `gens` acts transitively on `{0..d}`.
pub fn is_transitive(d: usize, gens: &[&Perm]) -> bool {
    if d == 0 {
        return false;
    }
    let mut seen = vec![false; d];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == d
}

/// Orbits of the group generated by `gens`, each sorted, ordered by minimum.
pub fn orbits(d: usize, gens: &[&Perm]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; d];
    let mut out = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for g in gens {
                for y in [g.apply(x), g.inverse().apply(x)] {
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}
