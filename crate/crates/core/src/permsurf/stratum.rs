use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    /// Abelian differentials: orders sum to `2g - 2`, order 0 is a marked point.
    Abelian,
    /// Quadratic differentials: orders sum to `4g - 4`, `-1` is a simple pole.
    Quadratic,
}

/// A stratum label. Orders are kept sorted in nonincreasing order; marked
/// regular points (order 0) are retained.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stratum {
    pub kind: StratumKind,
    pub orders: Vec<i64>,
    pub genus: u32,
}

impl Stratum {
    pub fn new(kind: StratumKind, mut orders: Vec<i64>, genus: u32) -> Result<Self> {
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let g = genus as i64;
        let (expected, min_order) = match kind {
            StratumKind::Abelian => (2 * g - 2, 0),
            StratumKind::Quadratic => (4 * g - 4, -1),
        };
        if let Some(&bad) = orders.iter().find(|&&m| m < min_order) {
            return Err(Error::Consistency(format!("order {bad} not allowed in a {kind:?} stratum")));
        }
        let total: i64 = orders.iter().sum();
        if total != expected {
            return Err(Error::Consistency(format!(
                "orders {orders:?} sum to {total}, expected {expected} for genus {genus}"
            )));
        }
        Ok(Stratum { kind, orders, genus })
    }

    /// Genus determined by the orders alone.
    pub fn from_orders(kind: StratumKind, orders: Vec<i64>) -> Result<Self> {
        let total: i64 = orders.iter().sum();
        let (num, den) = match kind {
            StratumKind::Abelian => (total + 2, 2),
            StratumKind::Quadratic => (total + 4, 4),
        };
        if num < 0 || num % den != 0 {
            return Err(Error::Consistency(format!("orders {orders:?} do not fit any genus")));
        }
        Stratum::new(kind, orders, (num / den) as u32)
    }

    /// Number of simple poles (`-1` orders).
    pub fn poles(&self) -> usize {
        self.orders.iter().filter(|&&m| m == -1).count()
    }

    /// Orders of the genuine zeros (`m >= 1`).
    pub fn zeros(&self) -> Vec<i64> {
        self.orders.iter().copied().filter(|&m| m >= 1).collect()
    }

    pub fn marked_points(&self) -> usize {
        self.orders.iter().filter(|&&m| m == 0).count()
    }

    /// The same stratum with marked regular points forgotten.
    pub fn without_marked(&self) -> Stratum {
        Stratum {
            kind: self.kind,
            orders: self.orders.iter().copied().filter(|&m| m != 0).collect(),
            genus: self.genus,
        }
    }
}

impl fmt::Display for Stratum {
    /// Exponential notation, e.g. `Q(3^3, -1^5)` or `H(2, 0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.kind {
            StratumKind::Abelian => 'H',
            StratumKind::Quadratic => 'Q',
        };
        write!(f, "{letter}(")?;
        let mut k = 0;
        let mut first = true;
        while k < self.orders.len() {
            let m = self.orders[k];
            let run = self.orders[k..].iter().take_while(|&&x| x == m).count();
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{m}^{run}")?;
            } else {
                write!(f, "{m}")?;
            }
            k += run;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_sum_rule() {
        let s = Stratum::new(StratumKind::Quadratic, vec![-1, 3, -1, 3, -1, 3, -1, -1], 2).unwrap();
        assert_eq!(s.orders, vec![3, 3, 3, -1, -1, -1, -1, -1]);
        assert_eq!(s.poles(), 5);
        assert_eq!(s.to_string(), "Q(3^3, -1^5)");
        assert!(Stratum::new(StratumKind::Quadratic, vec![3, 3, 3], 2).is_err());
    }

    #[test]
    fn abelian_with_marked_point() {
        let s = Stratum::from_orders(StratumKind::Abelian, vec![0]).unwrap();
        assert_eq!(s.genus, 1);
        assert_eq!(s.to_string(), "H(0)");
        assert_eq!(s.without_marked().orders, Vec::<i64>::new());
        assert!(Stratum::from_orders(StratumKind::Abelian, vec![1]).is_err());
        assert!(Stratum::new(StratumKind::Abelian, vec![-1, 1], 1).is_err());
    }
}
