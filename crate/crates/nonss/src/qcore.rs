//! Scalars at the root of unity q = exp(iπ/r).

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type C64 = Complex64;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_INT_GUARD: f64 = 1e-8;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootData {
    pub r: usize,
    pub r_prime: usize,
    pub epsilon: u8,
    pub q: C64,
    pub tol: f64,
    pub int_guard: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    pub lambda: C64,
    pub eta: C64,
    pub delta: C64,
}

impl RootData {
    /// r must be odd or twice an odd number.
    pub fn new(r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidRoot(format!("r = {r} < 2")));
        }
        if r % 4 == 0 {
            return Err(Error::InvalidRoot(format!("r = {r} is divisible by 4")));
        }
        let even = r % 2 == 0;
        Ok(RootData {
            r,
            r_prime: if even { r / 2 } else { r },
            epsilon: even as u8,
            q: C64::from_polar(1.0, PI / r as f64),
            tol: DEFAULT_TOL,
            int_guard: DEFAULT_INT_GUARD,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn is_even(&self) -> bool {
        self.epsilon == 1
    }

    pub fn rf(&self) -> f64 {
        self.r as f64
    }

    /// q^x = exp(iπx/r), evaluated from x directly so no branch choice arises.
    pub fn qpow(&self, x: C64) -> C64 {
        (C64::i() * PI * x / self.rf()).exp()
    }

    pub fn qpow_re(&self, x: f64) -> C64 {
        C64::from_polar(1.0, PI * x / self.rf())
    }

    /// {x} = q^x − q^{−x}
    pub fn qbracket(&self, x: C64) -> C64 {
        self.qpow(x) - self.qpow(-x)
    }

    pub fn qbracket_re(&self, x: f64) -> C64 {
        C64::new(0.0, 2.0 * (PI * x / self.rf()).sin())
    }

    /// Quantum integer [n] = {n}/{1}.
    pub fn qint(&self, x: C64) -> C64 {
        self.qbracket(x) / self.qbracket_re(1.0)
    }

    pub fn sign(&self, k: i64) -> f64 {
        if k.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Nearest integer of x when x lies within int_guard of ℤ.
    pub fn integral_part(&self, x: C64) -> Option<i64> {
        let n = x.re.round();
        if (x.re - n).abs() < self.int_guard && x.im.abs() < self.int_guard {
            Some(n as i64)
        } else {
            None
        }
    }

    /// Colors allowed on V_α: α ∉ ℤ, or α ∈ rℤ.
    pub fn is_admissible_color(&self, alpha: C64) -> bool {
        match self.integral_part(alpha) {
            None => true,
            Some(n) => n.rem_euclid(self.r as i64) == 0,
        }
    }

    /// H_r = {1−r, 3−r, …, r−1}.
    pub fn h_r(&self) -> Vec<i64> {
        let r = self.r as i64;
        (0..r).map(|i| 1 - r + 2 * i).collect()
    }

    pub fn h_r_plus(&self) -> Vec<i64> {
        self.h_r().into_iter().filter(|&k| k > 0).collect()
    }

    fn modified_dim_product(&self, beta: C64) -> C64 {
        let r = self.r as i64;
        let mut p = re(self.sign(r - 1));
        for j in 1..r {
            p *= self.qbracket_re(j as f64) / self.qbracket(beta + re((r - j) as f64));
        }
        p
    }

    /// d(β) = (−1)^{r−1} r {β}/{rβ}, continued to β ∈ rℤ through the product form.
    pub fn modified_dim(&self, beta: C64) -> Result<C64> {
        if !self.is_admissible_color(beta) {
            return Err(Error::NotAdmissibleColor(fmt_c(beta)));
        }
        if self.integral_part(beta).is_some() {
            return Ok(self.modified_dim_product(beta));
        }
        let num = self.qbracket(beta);
        let den = self.qbracket(beta * self.rf());
        Ok(re(self.sign(self.r as i64 - 1) * self.rf()) * num / den)
    }

    /// Product form of the modified dimension, exposed for cross-checks.
    pub fn modified_dim_by_product(&self, beta: C64) -> Result<C64> {
        if !self.is_admissible_color(beta) {
            return Err(Error::NotAdmissibleColor(fmt_c(beta)));
        }
        Ok(self.modified_dim_product(beta))
    }

    /// Kirby color Ω_α as (coefficient, color) pairs. The reduced form (r even)
    /// keeps only k > 0 and carries the overall factor 2.
    pub fn kirby_color(&self, alpha: C64, reduced: bool) -> Result<Vec<(C64, C64)>> {
        if self.integral_part(alpha).is_some() {
            return Err(Error::NotAdmissibleColor(fmt_c(alpha)));
        }
        if reduced && !self.is_even() {
            return Err(Error::ReducedUnavailable);
        }
        let ks = if reduced { self.h_r_plus() } else { self.h_r() };
        let w = if reduced { 2.0 } else { 1.0 };
        ks.into_iter()
            .map(|k| {
                let col = alpha + re(k as f64);
                Ok((self.modified_dim(col)? * w, col))
            })
            .collect()
    }

    /// The r = 2 color Ω̃_α = Ω⁺_α / 2.
    pub fn kirby_color_r2_alias(&self, alpha: C64) -> Result<Vec<(C64, C64)>> {
        if self.r != 2 {
            return Err(Error::WrongR { expected: 2, got: self.r });
        }
        Ok(self
            .kirby_color(alpha, true)?
            .into_iter()
            .map(|(w, col)| (w / 4.0, col))
            .collect())
    }

    pub fn normalization_constants(&self) -> Normalization {
        let r = self.rf();
        let rp = (self.r_prime as f64).sqrt();
        let s = match self.r % 4 {
            0 => unreachable!("r divisible by 4 is rejected"),
            m => m as f64,
        };
        let delta = self.qpow_re(-1.5) * C64::from_polar(1.0, -(s + 1.0) * PI / 4.0);
        Normalization {
            lambda: re(rp / (r * r)),
            eta: re(1.0 / (r * rp)),
            delta,
        }
    }

    /// (−1)^{r−1} q^{−2r′ω(K_P)}: the factor picked up when a σ-colored knot is removed.
    pub fn sigma_removal_scalar(&self, omega_of_parallel: C64) -> C64 {
        re(self.sign(self.r as i64 - 1)) * self.qpow(omega_of_parallel * (-2.0 * self.r_prime as f64))
    }

    pub fn close(&self, a: C64, b: C64) -> bool {
        close_rel(a, b, self.tol)
    }
}

pub fn close_rel(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm())
}

pub fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpow_examples() {
        let r2 = RootData::new(2).unwrap();
        assert!(r2.close(r2.qpow(re(0.0)), re(1.0)));
        assert!(r2.close(r2.qpow(re(2.0)), re(-1.0)));
        let r3 = RootData::new(3).unwrap();
        assert!(r3.close(r3.qpow(re(3.0)), re(-1.0)));
        assert!(r3.close(r3.qpow(re(6.0)), re(1.0)));
    }

    #[test]
    fn bracket_examples() {
        let r2 = RootData::new(2).unwrap();
        assert!(r2.close(r2.qbracket(re(1.0)), c(0.0, 2.0)));
        let r3 = RootData::new(3).unwrap();
        assert!(r3.close(r3.qbracket(re(1.0)), c(0.0, 3f64.sqrt())));
        assert!(r3.qbracket(re(0.0)).norm() < 1e-15);
    }

    #[test]
    fn modified_dim_examples() {
        let r2 = RootData::new(2).unwrap();
        assert!(r2.close(r2.modified_dim(re(0.5)).unwrap(), re(-2f64.sqrt())));
        // r = 2 form d(α) = 2i/{α−1}
        let a = c(0.3, 0.2);
        let alt = c(0.0, 2.0) / r2.qbracket(a - 1.0);
        assert!(r2.close(r2.modified_dim(a).unwrap(), alt));
        for r in [2, 3, 5, 6] {
            let rd = RootData::new(r).unwrap();
            let d0 = rd.modified_dim(re(0.0)).unwrap();
            assert!(rd.close(d0, re(rd.sign(r as i64 - 1))), "r={r}");
        }
        let r3 = RootData::new(3).unwrap();
        let v = re(3.0) * r3.qbracket(re(0.37)) / r3.qbracket(re(1.11));
        assert!(r3.close(r3.modified_dim(re(0.37)).unwrap(), v));
        assert!(matches!(r3.modified_dim(re(1.0)), Err(Error::NotAdmissibleColor(_))));
    }

    #[test]
    fn kirby_examples() {
        let r2 = RootData::new(2).unwrap();
        let full = r2.kirby_color(re(0.5), false).unwrap();
        assert_eq!(full.len(), 2);
        assert!(r2.close(full[0].1, re(-0.5)) && r2.close(full[1].1, re(1.5)));
        let red = r2.kirby_color(re(0.5), true).unwrap();
        assert_eq!(red.len(), 1);
        assert!(r2.close(red[0].0, r2.modified_dim(re(1.5)).unwrap() * 2.0));
        let r3 = RootData::new(3).unwrap();
        let cols: Vec<f64> = r3.kirby_color(re(0.4), false).unwrap().iter().map(|x| x.1.re).collect();
        assert!((cols[0] + 1.6).abs() < 1e-12 && (cols[1] - 0.4).abs() < 1e-12 && (cols[2] - 2.4).abs() < 1e-12);
        assert_eq!(r3.kirby_color(re(0.4), true), Err(Error::ReducedUnavailable));
        assert!(r3.kirby_color(re(2.0), false).is_err());
    }

    #[test]
    fn r2_alias_matches_section_form() {
        // Ω̃_α = i/(i^α − i^{−α}) V_{α+1}
        let r2 = RootData::new(2).unwrap();
        let a = re(0.31);
        let al = r2.kirby_color_r2_alias(a).unwrap();
        let want = C64::i() / (r2.qpow(a) - r2.qpow(-a));
        assert!(r2.close(al[0].0, want));
    }

    #[test]
    fn normalization_examples() {
        let r2 = RootData::new(2).unwrap();
        let n = r2.normalization_constants();
        assert!(r2.close(n.lambda, re(0.25)) && r2.close(n.eta, re(0.5)) && r2.close(n.delta, C64::i()));
        let r3 = RootData::new(3).unwrap();
        let n = r3.normalization_constants();
        assert!(r3.close(n.lambda, re(3f64.sqrt() / 9.0)));
        assert!(r3.close(n.eta, re(1.0 / (3.0 * 3f64.sqrt()))));
        assert!((n.delta.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sigma_removal_examples() {
        let r3 = RootData::new(3).unwrap();
        assert!(r3.close(r3.sigma_removal_scalar(re(0.5)), re(-1.0)));
        let r2 = RootData::new(2).unwrap();
        assert!(r2.close(r2.sigma_removal_scalar(re(1.0)), re(1.0)));
        for r in [2, 3, 5] {
            let rd = RootData::new(r).unwrap();
            assert!(rd.close(rd.sigma_removal_scalar(re(0.0)), re(rd.sign(r as i64 - 1))));
        }
    }

    #[test]
    fn rejects_bad_r() {
        assert!(RootData::new(4).is_err());
        assert!(RootData::new(1).is_err());
        let r6 = RootData::new(6).unwrap();
        assert_eq!((r6.r_prime, r6.epsilon), (3, 1));
        let r2 = RootData::new(2).unwrap();
        assert_eq!((r2.r_prime, r2.epsilon), (1, 1));
    }
}
