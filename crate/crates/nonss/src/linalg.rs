use crate::qcore::C64;
use nalgebra::DMatrix;
use num_traits::Zero;

pub type CMat = DMatrix<C64>;

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(v: &[C64]) -> CMat {
    let n = v.len();
    let mut m = zeros(n, n);
    for (i, x) in v.iter().enumerate() {
        m[(i, i)] = *x;
    }
    m
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut m = zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x.is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    m[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    m
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn matpow(m: &CMat, n: usize) -> CMat {
    let mut p = eye(m.nrows());
    for _ in 0..n {
        p = &p * m;
    }
    p
}

/// Orthonormal basis of the null space, using singular values below `rel_tol · σ_max`.
pub fn nullspace(m: &CMat, rel_tol: f64) -> Vec<nalgebra::DVector<C64>> {
    let ncols = m.ncols();
    if m.nrows() == 0 {
        return (0..ncols)
            .map(|i| {
                let mut v = nalgebra::DVector::zeros(ncols);
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect();
    }
    // pad to square so that the SVD exposes the full right singular basis
    let mut a = m.clone();
    if a.nrows() < ncols {
        a = a.resize_vertically(ncols, C64::zero());
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = rel_tol * smax.max(1e-300);
    let mut out = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= cut {
            out.push(vt.row(i).adjoint().into_owned());
        }
    }
    out
}

pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > rel_tol * smax.max(1e-300)).count()
}

/// Least-squares coefficients of `target` in the span of `basis` (all matrices
/// flattened), with the relative residual.
pub fn decompose(target: &CMat, basis: &[&CMat]) -> (Vec<C64>, f64) {
    let n = target.len();
    let mut a = zeros(n, basis.len());
    for (j, b) in basis.iter().enumerate() {
        for (i, x) in b.iter().enumerate() {
            a[(i, j)] = *x;
        }
    }
    let y = nalgebra::DVector::from_iterator(n, target.iter().cloned());
    let svd = a.clone().svd(true, true);
    let coef = svd.solve(&y, 1e-13).expect("svd solve");
    let resid = (&a * &coef - &y).norm() / y.norm().max(1.0);
    (coef.iter().cloned().collect(), resid)
}

/// Gram–Schmidt (twice) on a list of vectors, dropping those that fall below `tol`.
pub fn orthonormalize(vs: &[nalgebra::DVector<C64>], tol: f64) -> Vec<nalgebra::DVector<C64>> {
    let mut out: Vec<nalgebra::DVector<C64>> = Vec::new();
    for v in vs {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let p = u.dotc(&w);
                w -= u * p;
            }
        }
        let nw = w.norm();
        if nw > tol * scale {
            out.push(w / C64::new(nw, 0.0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_shapes() {
        let a = eye(2);
        let b = eye(3);
        let k = kron(&a, &b);
        assert_eq!(k.shape(), (6, 6));
        assert!(max_abs(&(k - eye(6))) < 1e-15);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let mut m = zeros(1, 3);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(0, 1)] = C64::new(1.0, 0.0);
        let ns = nullspace(&m, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * v).norm() < 1e-12);
        }
    }

    #[test]
    fn decompose_recovers_coefficients() {
        let a = eye(2);
        let mut b = zeros(2, 2);
        b[(0, 1)] = C64::new(1.0, 0.0);
        let t = &a * C64::new(2.0, 1.0) + &b * C64::new(-3.0, 0.5);
        let (c, res) = decompose(&t, &[&a, &b]);
        assert!(res < 1e-12);
        assert!((c[0] - C64::new(2.0, 1.0)).norm() < 1e-12);
        assert!((c[1] - C64::new(-3.0, 0.5)).norm() < 1e-12);
    }
}
