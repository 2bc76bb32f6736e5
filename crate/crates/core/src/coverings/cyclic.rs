use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permsurf::{Perm, PillowCover, Stratum};

/// Datum `(N, a1, a2, a3, a4)` of the cyclic cover
/// `w^N = Π (z - z_i)^{a_i}` of the sphere branched over the four poles of
/// the pillowcase differential. `a_i = N` means the cover is unbranched at
/// `z_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicCoverSpec {
    pub n: u32,
    pub a: [u32; 4],
}

impl CyclicCoverSpec {
    pub fn new(n: u32, a: [u32; 4]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Datum("N must be positive".into()));
        }
        if let Some(&bad) = a.iter().find(|&&ai| ai == 0 || ai > n) {
            return Err(Error::Datum(format!("a_i = {bad} outside 0 < a_i <= {n}")));
        }
        let g = a.iter().fold(n, |acc, &ai| acc.gcd(&ai));
        if g != 1 {
            return Err(Error::Datum(format!("gcd(a1..a4, N) = {g}, expected 1")));
        }
        let sum: u32 = a.iter().sum();
        if !sum.is_multiple_of(n) {
            return Err(Error::Datum(format!("a1+a2+a3+a4 = {sum} is not divisible by {n}")));
        }
        Ok(CyclicCoverSpec { n, a })
    }

    /// The family `(p, a1, a2, a3, p)` with `a1 + a2 + a3 = p`.
    pub fn p_family(p: u32, a1: u32, a2: u32, a3: u32) -> Result<Self> {
        if a1 + a2 + a3 != p {
            return Err(Error::Datum(format!("{a1}+{a2}+{a3} != {p}")));
        }
        CyclicCoverSpec::new(p, [a1, a2, a3, p])
    }

    /// Every valid datum with the given `N`, in lexicographic order.
    pub fn enumerate(n: u32) -> Vec<CyclicCoverSpec> {
        let mut out = Vec::new();
        for a1 in 1..=n {
            for a2 in 1..=n {
                for a3 in 1..=n {
                    for a4 in 1..=n {
                        if let Ok(s) = CyclicCoverSpec::new(n, [a1, a2, a3, a4]) {
                            out.push(s);
                        }
                    }
                }
            }
        }
        out
    }

    /// Ramification index `N / gcd(N, a_i)` at every point over `z_i`.
    pub fn ramification_index(&self, corner: usize) -> u32 {
        self.n / self.n.gcd(&self.a[corner])
    }
}

impl fmt::Display for CyclicCoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4] = self.a;
        write!(f, "{} {a1} {a2} {a3} {a4}", self.n)
    }
}

impl FromStr for CyclicCoverSpec {
    type Err = Error;

    /// `N a1 a2 a3 a4`, whitespace separated.
    fn from_str(s: &str) -> Result<Self> {
        let nums: Vec<u32> = s
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad integer `{t}` in `{s}`"))))
            .collect::<Result<_>>()?;
        if nums.len() != 5 {
            return Err(Error::Parse(format!("datum needs `N a1 a2 a3 a4`, got `{s}`")));
        }
        CyclicCoverSpec::new(nums[0], [nums[1], nums[2], nums[3], nums[4]])
    }
}

/// One row of the ramification table of a cyclic cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationRow {
    pub corner: usize,
    pub a: u32,
    /// `gcd(N, a)` points over the corner...
    pub points: u32,
    /// ...each with ramification index `N / gcd(N, a)`.
    pub index: u32,
}

/// Monodromy of the cyclic cover: `g_i` is translation by `a_i` in the
/// regular representation of `Z/N`, so it has `gcd(N, a_i)` cycles of
/// length `N / gcd(N, a_i)`.
pub fn cyclic_to_pillow(s: &CyclicCoverSpec) -> (PillowCover, Vec<RamificationRow>) {
    let n = s.n as usize;
    let g = s.a.map(|ai| Perm::rotation(n, ai as usize % n));
    let [g0, g1, g2, g3] = g;
    let cover = PillowCover::new(g0, g1, g2, g3).expect("a valid datum gives a valid cover");
    let table = (0..4)
        .map(|k| RamificationRow {
            corner: k,
            a: s.a[k],
            points: s.n.gcd(&s.a[k]),
            index: s.ramification_index(k),
        })
        .collect();
    (cover, table)
}

/// Summary of a pillow-tiled surface used by the bound checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub degree: usize,
    pub genus: u32,
    pub stratum: Stratum,
    /// Number of simple poles of the pulled-back differential.
    pub n: usize,
    /// Corners with nontrivial monodromy.
    pub branch_count: usize,
    /// Corners over which the cover is unbranched.
    pub unbranched_corners: Vec<usize>,
    /// Whether the monodromy group acts regularly (the cover is Galois).
    pub galois: bool,
}

impl CoverReport {
    pub fn from_pillow(p: &PillowCover) -> CoverReport {
        let stratum = p.stratum();
        CoverReport {
            degree: p.degree(),
            genus: stratum.genus,
            n: stratum.poles(),
            stratum,
            branch_count: p.branch_count(),
            unbranched_corners: (0..4).filter(|&k| p.corner(k).is_identity()).collect(),
            galois: is_regular(p.degree(), p.monodromy()),
        }
    }

    pub fn from_cyclic(s: &CyclicCoverSpec) -> CoverReport {
        CoverReport::from_pillow(&cyclic_to_pillow(s).0)
    }
}

/// A transitive permutation group is regular iff its centralizer in the
/// symmetric group is transitive; a centralizing permutation is pinned down
/// by the image of one point.
fn is_regular(d: usize, gens: &[Perm]) -> bool {
    (0..d).all(|target| {
        let mut image = vec![usize::MAX; d];
        image[0] = target;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for g in gens {
                let (gx, gy) = (g.apply(x), g.apply(image[x]));
                if image[gx] == usize::MAX {
                    image[gx] = gy;
                    stack.push(gx);
                } else if image[gx] != gy {
                    return false;
                }
            }
        }
        true
    })
}

/// Outcome of [`is_determinant_locus`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantVerdict {
    pub degenerate: bool,
    pub reason: String,
    pub branch_count: usize,
}

/// Whether the Teichmüller disc of the cyclic cover lies in the determinant
/// locus: true iff some `a_i = N`. The answer is cross-checked against the
/// branch-point count read off the ramification table (at most three branch
/// points); a disagreement is reported as an error.
pub fn is_determinant_locus(s: &CyclicCoverSpec) -> Result<DeterminantVerdict> {
    let unbranched: Vec<usize> = (0..4).filter(|&k| s.a[k] == s.n).collect();
    let by_datum = !unbranched.is_empty();
    let (_, table) = cyclic_to_pillow(s);
    let branch_count = table.iter().filter(|row| row.index > 1).count();
    let by_branch_count = branch_count <= 3;
    if by_datum != by_branch_count {
        return Err(Error::Consistency(format!(
            "datum {s}: a_i = N criterion says {by_datum}, branch count {branch_count}"
        )));
    }
    let reason = if by_datum {
        let names: Vec<String> = unbranched.iter().map(|k| format!("z{}", k + 1)).collect();
        format!("a_i = N at {}: unbranched there, {branch_count} branch points", names.join(", "))
    } else {
        "no a_i equals N: branched over all four poles".to_string()
    };
    Ok(DeterminantVerdict { degenerate: by_datum, reason, branch_count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn datum_validation() {
        assert!(CyclicCoverSpec::new(5, [1, 2, 2, 5]).is_ok());
        assert!(matches!(CyclicCoverSpec::new(4, [2, 2, 2, 2]), Err(Error::Datum(_))));
        assert!(matches!(CyclicCoverSpec::new(4, [1, 1, 1, 2]), Err(Error::Datum(_))));
        assert!(matches!(CyclicCoverSpec::new(4, [0, 1, 1, 2]), Err(Error::Datum(_))));
        assert!(matches!(CyclicCoverSpec::new(4, [5, 1, 1, 1]), Err(Error::Datum(_))));
        assert!("5 1 2 2".parse::<CyclicCoverSpec>().is_err());
        assert_eq!("5 1 2 2 5".parse::<CyclicCoverSpec>().unwrap().a, [1, 2, 2, 5]);
    }

    #[test]
    fn p5_ramification() {
        let s = CyclicCoverSpec::new(5, [1, 2, 2, 5]).unwrap();
        let (p, table) = cyclic_to_pillow(&s);
        assert!(p.corner(3).is_identity());
        assert_eq!(p.corner(3).cycle_type(), vec![1; 5]);
        for k in 0..3 {
            assert_eq!(p.corner(k).cycle_type(), vec![5]);
            assert_eq!((table[k].points, table[k].index), (1, 5));
        }
        assert_eq!((table[3].points, table[3].index), (5, 1));
        let st = p.stratum();
        assert_eq!(st.orders, vec![3, 3, 3, -1, -1, -1, -1, -1]);
        assert_eq!(st.genus, 2);
    }

    #[test]
    fn n2_all_ones() {
        let s = CyclicCoverSpec::new(2, [1, 1, 1, 1]).unwrap();
        let (p, table) = cyclic_to_pillow(&s);
        for k in 0..4 {
            assert_eq!(p.corner(k).cycle_type(), vec![2]);
            assert_eq!(table[k].index, 2);
        }
        assert_eq!(p.stratum().orders, vec![0, 0, 0, 0]);
        assert_eq!(p.stratum().genus, 1);
    }

    #[test]
    fn n4_all_ones_genus_three() {
        // 2 - 2g = 2·4 - 4·3
        let s = CyclicCoverSpec::new(4, [1, 1, 1, 1]).unwrap();
        let (p, _) = cyclic_to_pillow(&s);
        assert_eq!(p.genus(), 3);
        assert!(p.monodromy().iter().all(|g| g.cycle_type() == vec![4]));
    }

    #[test]
    fn determinant_criterion() {
        let yes = is_determinant_locus(&CyclicCoverSpec::new(5, [1, 2, 2, 5]).unwrap()).unwrap();
        assert!(yes.degenerate);
        assert!(yes.reason.contains("z4"));
        let no = is_determinant_locus(&CyclicCoverSpec::new(4, [1, 1, 1, 1]).unwrap()).unwrap();
        assert!(!no.degenerate);
        assert_eq!(no.branch_count, 4);
        let two = is_determinant_locus(&CyclicCoverSpec::new(3, [3, 3, 1, 2]).unwrap()).unwrap();
        assert!(two.degenerate);
        assert_eq!(two.branch_count, 2);
    }

    #[test]
    fn cyclic_covers_are_galois() {
        for s in CyclicCoverSpec::enumerate(6) {
            assert!(CoverReport::from_cyclic(&s).galois, "{s}");
        }
        // a non-Galois degree-3 cover: S3 acting on three points
        let p = PillowCover::from_three(
            Perm::parse_cycles("(1 2)", 3).unwrap(),
            Perm::parse_cycles("(2 3)", 3).unwrap(),
            Perm::parse_cycles("(1 2)", 3).unwrap(),
        )
        .unwrap();
        assert!(!CoverReport::from_pillow(&p).galois);
    }
}
