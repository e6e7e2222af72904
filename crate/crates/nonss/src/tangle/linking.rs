use super::{Diagram, Event};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A crossing with the components of its two strands (bottom-left, bottom-right) and its sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub slice: usize,
    pub left: usize,
    pub right: usize,
    pub sign: i64,
}

pub fn crossing_signs(d: &Diagram) -> Result<Vec<Crossing>> {
    let levels = d.levels()?;
    let mut out = Vec::new();
    for (si, slice) in d.slices.iter().enumerate() {
        let mut idx = 0;
        for ev in slice {
            let (nin, _) = ev.arity();
            if matches!(ev, Event::Over | Event::Under) {
                let (a, b) = (levels[si][idx], levels[si][idx + 1]);
                let base = if matches!(ev, Event::Over) { 1 } else { -1 };
                out.push(Crossing {
                    slice: si,
                    left: a.component,
                    right: b.component,
                    sign: base * a.orientation.sign() * b.orientation.sign(),
                });
            }
            idx += nin;
        }
    }
    Ok(out)
}

/// Linking matrix over all components: writhe on the diagonal, linking numbers off it.
pub fn linking_matrix_all(d: &Diagram) -> Result<Vec<Vec<i64>>> {
    let n = d.components.len();
    let mut m = vec![vec![0i64; n]; n];
    for c in crossing_signs(d)? {
        if c.left == c.right {
            m[c.left][c.left] += c.sign;
        } else {
            m[c.left][c.right] += c.sign;
            m[c.right][c.left] += c.sign;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if m[i][j] % 2 != 0 {
                    return Err(Error::NonIntegralLinking(i.min(j), i.max(j)));
                }
                m[i][j] /= 2;
            }
        }
    }
    Ok(m)
}

/// Linking matrix of the Kirby-colored (surgery) components, in component order.
pub fn linking_matrix(d: &Diagram) -> Result<Vec<Vec<i64>>> {
    let all = linking_matrix_all(d)?;
    let ks = d.kirby_components();
    Ok(ks.iter().map(|&i| ks.iter().map(|&j| all[i][j]).collect()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub nullity: usize,
}

impl Signature {
    pub fn sigma(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Inertia of a symmetric integer matrix by exact congruence diagonalization.
pub fn signature(m: &[Vec<i64>]) -> Result<Signature> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::NotSymmetric);
        }
    }
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut sig = Signature { positive: 0, negative: 0, nullity: 0 };
    let mut active: Vec<usize> = (0..n).collect();
    let count = |x: &BigRational, s: &mut Signature| {
        if x.is_positive() {
            s.positive += 1;
        } else if x.is_negative() {
            s.negative += 1;
        } else {
            s.nullity += 1;
        }
    };
    while !active.is_empty() {
        if let Some(pi) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.remove(pi);
            let piv = a[p][p].clone();
            for &i in &active {
                let f = &a[i][p] / &piv;
                if f.is_zero() {
                    continue;
                }
                for &j in &active {
                    let v = &f * &a[p][j];
                    a[i][j] -= v;
                }
            }
            count(&piv, &mut sig);
            continue;
        }
        // all remaining diagonal entries vanish
        let pair = active
            .iter()
            .enumerate()
            .find_map(|(ii, &i)| active[ii + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j)));
        match pair {
            None => {
                sig.nullity += active.len();
                break;
            }
            Some((p, q)) => {
                // the block [[0,b],[b,0]] is a hyperbolic plane: one positive, one negative
                let b = a[p][q].clone();
                active.retain(|&i| i != p && i != q);
                let rows: Vec<(usize, BigRational, BigRational)> =
                    active.iter().map(|&i| (i, a[i][p].clone(), a[i][q].clone())).collect();
                // Schur complement: A' = A − [x y] B⁻¹ [x y]ᵀ with B⁻¹ = [[0,1/b],[1/b,0]]
                for (i, xi, yi) in &rows {
                    for (j, xj, yj) in &rows {
                        let v = (xi * yj + yi * xj) / &b;
                        a[*i][*j] -= v;
                    }
                }
                sig.positive += 1;
                sig.negative += 1;
            }
        }
    }
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_signatures() {
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]).unwrap(), Signature { positive: 1, negative: 1, nullity: 0 });
        assert_eq!(signature(&[vec![2, 1], vec![1, 2]]).unwrap(), Signature { positive: 2, negative: 0, nullity: 0 });
        assert_eq!(signature(&[]).unwrap(), Signature { positive: 0, negative: 0, nullity: 0 });
        assert_eq!(signature(&[vec![0]]).unwrap().nullity, 1);
        assert_eq!(signature(&[vec![0, 1], vec![2, 0]]), Err(Error::NotSymmetric));
    }

    fn eig_inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
        let n = m.len();
        let a = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j] as f64);
        let ev = a.symmetric_eigenvalues();
        let p = ev.iter().filter(|x| **x > 1e-7).count();
        let q = ev.iter().filter(|x| **x < -1e-7).count();
        (p, q, n - p - q)
    }

    proptest! {
        #[test]
        fn matches_eigenvalue_inertia(n in 1usize..6, seed in proptest::collection::vec(-3i64..4, 36)) {
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    m[i][j] = seed[i * 6 + j];
                    m[j][i] = seed[i * 6 + j];
                }
            }
            let s = signature(&m).unwrap();
            prop_assert_eq!((s.positive, s.negative, s.nullity), eig_inertia(&m));
        }
    }
}
