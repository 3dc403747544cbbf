//! Closed forms of the sine-basis moment integrals
//!
//!   J1(n, l) = 2 int_0^1 y   sin(l pi y) cos(n pi y) dy
//!   J2(n, l) = 2 int_0^1 y^2 sin(l pi y) sin(n pi y) dy
//!   J3(n, l) = 2 int_0^1 y^4 sin(l pi y) sin(n pi y) dy
//!
//! with diagonal and off-diagonal branches, plus a cached table of all three.

use std::f64::consts::PI;

use crate::error::{QwallError, Result};

pub fn j1(n: usize, l: usize) -> f64 {
    let (nf, lf) = (n as f64, l as f64);
    if n == l {
        -1.0 / (2.0 * nf * PI)
    } else {
        sign(n + l + 1) * 2.0 * lf / ((lf * lf - nf * nf) * PI)
    }
}

pub fn j2(n: usize, l: usize) -> f64 {
    let (nf, lf) = (n as f64, l as f64);
    if n == l {
        1.0 / 3.0 - 1.0 / (2.0 * nf * nf * PI * PI)
    } else {
        let d = nf * nf - lf * lf;
        sign(n + l) * 8.0 * nf * lf / (d * d * PI * PI)
    }
}

pub fn j3(n: usize, l: usize) -> f64 {
    let (nf, lf) = (n as f64, l as f64);
    if n == l {
        0.2 - 1.0 / (nf * nf * PI * PI) + 1.5 / (nf.powi(4) * PI.powi(4))
    } else {
        let d = nf * nf - lf * lf;
        sign(n + l)
            * (16.0 * nf * lf / (d * d * PI * PI)
                - 192.0 * nf * lf * (nf * nf + lf * lf) / (d.powi(4) * PI.powi(4)))
    }
}

/// (J1, J2, J3) at a single index pair.
pub fn j_integrals(n: usize, l: usize) -> Result<(f64, f64, f64)> {
    if n == 0 || l == 0 {
        return Err(QwallError::Argument("J integrals start at n, l = 1".into()));
    }
    Ok((j1(n, l), j2(n, l), j3(n, l)))
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Dense J1/J2/J3 tables for index pairs 1..=n_max, built once and shared
/// read-only by the exact engine.
#[derive(Debug, Clone)]
pub struct JTable {
    pub n_max: usize,
    j1: Vec<f64>,
    j2: Vec<f64>,
    j3: Vec<f64>,
}

impl JTable {
    pub fn build(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(QwallError::Argument("JTable needs n_max >= 1".into()));
        }
        let mut t = Self {
            n_max,
            j1: vec![0.0; n_max * n_max],
            j2: vec![0.0; n_max * n_max],
            j3: vec![0.0; n_max * n_max],
        };
        for n in 1..=n_max {
            for l in 1..=n_max {
                let k = (n - 1) * n_max + (l - 1);
                t.j1[k] = j1(n, l);
                t.j2[k] = j2(n, l);
                t.j3[k] = j3(n, l);
            }
        }
        Ok(t)
    }

    #[inline]
    pub fn j1(&self, n: usize, l: usize) -> f64 {
        self.j1[(n - 1) * self.n_max + (l - 1)]
    }

    #[inline]
    pub fn j2(&self, n: usize, l: usize) -> f64 {
        self.j2[(n - 1) * self.n_max + (l - 1)]
    }

    #[inline]
    pub fn j3(&self, n: usize, l: usize) -> f64 {
        self.j3[(n - 1) * self.n_max + (l - 1)]
    }
}
