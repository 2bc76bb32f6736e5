//! Exact linear algebra over the integers, through rationals where a
//! division is unavoidable.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

pub type IntMatrix = DMatrix<i64>;

fn to_rational(m: &IntMatrix) -> Vec<Vec<Q>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| Q::from_integer(BigInt::from(m[(i, j)]))).collect())
        .collect()
}

/// Determinant and inverse by Gauss–Jordan elimination over `Q`. Returns
/// `None` for the inverse of a singular matrix.
pub fn det_and_inverse(m: &IntMatrix) -> (Q, Option<Vec<Vec<Q>>>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix expected");
    let mut a = to_rational(m);
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    let mut det = Q::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return (Q::zero(), None);
        };
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                a[r][j] -= x;
                inv[r][j] -= y;
            }
        }
    }
    (det, Some(inv))
}

/// Inverse of a unimodular integer matrix; fails if the inverse is not
/// integral.
pub fn integer_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let (det, inv) = det_and_inverse(m);
    let inv = inv.ok_or_else(|| Error::Internal("singular matrix".into()))?;
    if det.abs() != Q::one() {
        return Err(Error::Internal(format!("determinant {det} is not a unit")));
    }
    let n = m.nrows();
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &inv[i][j];
            if !x.is_integer() {
                return Err(Error::Internal("inverse is not integral".into()));
            }
            out[(i, j)] = x
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Internal("inverse entry overflows i64".into()))?;
        }
    }
    Ok(out)
}

pub fn determinant(m: &IntMatrix) -> Q {
    det_and_inverse(m).0
}
