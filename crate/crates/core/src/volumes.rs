//! Conic intrinsic volumes `v_k(m,n)` of partition cones with `|A| = m`,
//! `|B| = n`, and the Radon probabilities derived from them through the
//! kinematic formula.
//!
//! Engines:
//! - `M1`, `M2`, `M3`: closed expressions in `g_ℓ(±1/(k+1))` for
//!   `min(m,n) = 1, 2, 3`;
//! - `Kmax`: the alternating sum for the top index `k = m+n-1`;
//! - `General`: inclusion–exclusion over the cones `C(A', [m+n] - A')`,
//!   `∅ ≠ A' ⊆ [m]`, whose union is `L ⊕ C_n(1/m)` with `dim L = m - 1`.
//!
//! `k = 0` is always the exact value `1 / C(m+n, m)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfun::{binomial, GEvaluator};
use crate::numeric::Rational;
use crate::partition::WeightTable;

/// Default absolute tolerance of a `v_k` evaluation.
pub const DEFAULT_VK_TOL: f64 = 1e-9;

/// Tightest tolerance requested from the `g` evaluator; below this the
/// evaluator's own error estimate (not the true error) becomes limiting.
const G_TOL_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    M1,
    M2,
    M3,
    Kmax,
    General,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::M1 => "m1",
            Method::M2 => "m2",
            Method::M3 => "m3",
            Method::Kmax => "kmax",
            Method::General => "general",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Method::Auto,
            "m1" => Method::M1,
            "m2" => Method::M2,
            "m3" => Method::M3,
            "kmax" => Method::Kmax,
            "general" => Method::General,
            _ => return Err(Error::Parse(format!("unknown method {s:?}"))),
        })
    }
}

/// A request for `v_k(m,n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VkRequest {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub method: Method,
    pub tol: f64,
}

impl VkRequest {
    pub fn new(k: usize, m: usize, n: usize) -> Self {
        Self {
            k,
            m,
            n,
            method: Method::Auto,
            tol: DEFAULT_VK_TOL,
        }
    }

    pub fn method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// `v_0(m,n) = 1 / C(m+n, m)`, exactly.
pub fn v0_exact(m: usize, n: usize) -> Result<Rational> {
    check_mn(m, n)?;
    let mut c = BigInt::from(1);
    for i in 0..m {
        c = c * BigInt::from(n + i + 1) / BigInt::from(i + 1);
    }
    Ok(BigRational::new(BigInt::from(1), c))
}

fn check_mn(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        Err(Error::Domain(format!(
            "partition cones need m, n >= 1, got ({m}, {n})"
        )))
    } else {
        Ok(())
    }
}

/// Intrinsic-volume engines over a shared [`GEvaluator`].
#[derive(Debug)]
pub struct VolumeEngine<'g> {
    g: &'g GEvaluator,
    memo: Mutex<HashMap<(Method, usize, usize, usize, u64), f64>>,
}

impl Default for VolumeEngine<'static> {
    fn default() -> Self {
        Self::new(GEvaluator::shared())
    }
}

impl<'g> VolumeEngine<'g> {
    pub fn new(g: &'g GEvaluator) -> Self {
        Self {
            g,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn evaluator(&self) -> &GEvaluator {
        self.g
    }

    /// `v_k(m,n)` by the requested engine.
    pub fn vk(&self, req: VkRequest) -> Result<f64> {
        let VkRequest { k, m, n, method, tol } = req;
        check_mn(m, n)?;
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        if k == 0 {
            return Ok(v0_exact(m, n)?.to_f64().unwrap_or(f64::NAN));
        }
        if k >= m + n {
            return Ok(0.0);
        }
        let mismatch = || Error::MethodMismatch {
            method: method.name(),
            k,
            m,
            n,
        };
        let (lo, hi) = (m.min(n), m.max(n));
        let value = match method {
            Method::Auto => {
                if lo <= 3 {
                    self.closed(k, lo, hi, tol)?
                } else if k == m + n - 1 {
                    self.kmax(lo, hi, tol)?
                } else {
                    self.general(k, lo, hi, tol)?
                }
            }
            Method::M1 | Method::M2 | Method::M3 => {
                let want = match method {
                    Method::M1 => 1,
                    Method::M2 => 2,
                    _ => 3,
                };
                if lo != want {
                    return Err(mismatch());
                }
                self.closed(k, lo, hi, tol)?
            }
            Method::Kmax => {
                if k != m + n - 1 {
                    return Err(mismatch());
                }
                self.kmax(m, n, tol)?
            }
            Method::General => self.general(k, m, n, tol)?,
        };
        Ok(value)
    }

    /// Shorthand for `vk` with the automatic engine and default tolerance.
    pub fn v(&self, k: usize, m: usize, n: usize) -> Result<f64> {
        self.vk(VkRequest::new(k, m, n))
    }

    fn g(&self, ell: usize, r: f64, tol: f64) -> Result<f64> {
        self.g.g_eval(ell, r, tol.max(G_TOL_FLOOR))
    }

    /// Closed engines; requires `m = min(m, n) <= 3` and `1 <= k < m+n`.
    fn closed(&self, k: usize, m: usize, n: usize, tol: f64) -> Result<f64> {
        let kp = 1.0 / (k as f64 + 1.0);
        // C(n', ℓ) with C = 0 for ℓ < 0 or ℓ > n'
        let c = |top: usize, ell: isize| -> f64 {
            if ell < 0 {
                0.0
            } else {
                binomial(top, ell as usize)
            }
        };
        let gtol = tol / 64.0;
        // g_ℓ(+1/(k+1)) with ℓ possibly negative (only ever multiplied by a zero binomial)
        let gp = |ell: isize| -> Result<f64> {
            if ell < 0 {
                Ok(0.0)
            } else {
                self.g(ell as usize, kp, gtol)
            }
        };
        let gm = |ell: isize| -> Result<f64> {
            if ell < 0 {
                Ok(0.0)
            } else {
                self.g(ell as usize, -kp, gtol)
            }
        };
        let (k, n) = (k as isize, n as isize);
        let nu = n as usize;
        match m {
            1 => {
                if k > n {
                    return Ok(0.0);
                }
                Ok(c(nu, k) * gm(k)? * gp(n - k)?)
            }
            2 => {
                let mut v = 0.0;
                if k - 1 <= n {
                    v += c(nu, k - 1) * gm(k - 1)? * gp(n - k + 1)?;
                }
                let mut bracket = 0.0;
                if k <= n {
                    bracket += c(nu, k) * gp(n - k)?;
                }
                bracket -= c(nu + 1, k) * gp(n - k + 1)?;
                Ok(v + 2.0 * gm(k)? * bracket)
            }
            3 => {
                let mut v = 0.0;
                if k - 2 <= n {
                    v += c(nu, k - 2) * gm(k - 2)? * gp(n - k + 2)?;
                }
                let mut b1 = 0.0;
                if k - 1 <= n {
                    b1 += c(nu, k - 1) * gp(n - k + 1)?;
                }
                if k - 1 <= n + 1 {
                    b1 -= c(nu + 1, k - 1) * gp(n - k + 2)?;
                }
                v += 3.0 * gm(k - 1)? * b1;
                let mut b2 = 0.0;
                if k <= n {
                    b2 += c(nu, k) * gp(n - k)?;
                }
                if k <= n + 1 {
                    b2 -= 2.0 * c(nu + 1, k) * gp(n - k + 1)?;
                }
                b2 += c(nu + 2, k) * gp(n - k + 2)?;
                v += 3.0 * gm(k)? * b2;
                Ok(v)
            }
            _ => Err(Error::MethodMismatch {
                method: "closed",
                k: k as usize,
                m,
                n: nu,
            }),
        }
    }

    /// `v_{m+n-1}(m,n) = Σ_{i<m} (-1)^i C(m,i) g_{n+i}(-1/(m+n))`.
    pub fn kmax(&self, m: usize, n: usize, tol: f64) -> Result<f64> {
        check_mn(m, n)?;
        let r = -1.0 / (m + n) as f64;
        let amp: f64 = (0..m).map(|i| binomial(m, i)).sum();
        let gtol = tol / (2.0 * amp);
        let mut sum = 0.0;
        for i in 0..m {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binomial(m, i) * self.g(n + i, r, gtol)?;
        }
        Ok(sum)
    }

    /// `v_k(C_n(r))`, with each `g` factor clamped to the evaluator floor.
    fn cn_intrinsic(&self, n: usize, r: f64, k: usize, tol: f64) -> Result<f64> {
        if k > n {
            return Ok(0.0);
        }
        let binom = binomial(n, k);
        let per = tol / (2.0 * binom);
        let scale = 1.0 + k as f64 * r;
        Ok(binom * self.g(k, -r / scale, per)? * self.g(n - k, r / scale, per)?)
    }

    /// Inclusion–exclusion engine, `k >= 1`, no symmetry normalization.
    pub fn general(&self, k: usize, m: usize, n: usize, tol: f64) -> Result<f64> {
        check_mn(m, n)?;
        if k == 0 {
            return Err(Error::MethodMismatch {
                method: "general",
                k,
                m,
                n,
            });
        }
        // every level multiplies errors by at most Σ|σ| = 3^m - 2^m + 1 < 3^m
        let amp = 3f64.powi(m as i32);
        let inner_tol = tol / amp;
        let mut local = HashMap::new();
        self.general_rec(k, m, n, inner_tol, &mut local)
    }

    fn general_rec(
        &self,
        k: usize,
        m: usize,
        n: usize,
        tol: f64,
        local: &mut HashMap<(usize, usize), f64>,
    ) -> Result<f64> {
        if k >= m + n {
            return Ok(0.0);
        }
        if let Some(&v) = local.get(&(m, n)) {
            return Ok(v);
        }
        let key = (Method::General, k, m, n, tol.to_bits());
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return Ok(v);
        }
        // v_k(L ⊕ C_n(1/m)) with dim L = m - 1
        let union = if k + 1 < m {
            0.0
        } else {
            self.cn_intrinsic(n, 1.0 / m as f64, k + 1 - m, tol)?
        };
        let weights = WeightTable::new(m)?;
        let mut rest = 0.0;
        for (t, u, w) in weights.iter() {
            if (t, u) == (m, m) {
                continue;
            }
            let other_n = m + n - u;
            rest += w as f64 * self.general_rec(k, t, other_n, tol, local)?;
        }
        let v = union - rest;
        local.insert((m, n), v);
        self.memo.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// `P_d(A,B) = 2 Σ_{i odd} v_{d+i}(m,n)`, the probability that a fixed
    /// partition with `|A| = m`, `|B| = n` of `m+n` Gaussian points in `R^d`
    /// is a Radon partition.
    pub fn radon_probability(&self, d: usize, m: usize, n: usize, tol: f64) -> Result<f64> {
        check_mn(m, n)?;
        if m + n < d + 2 {
            return Ok(0.0);
        }
        let terms = (m + n - d) / 2;
        let per = tol / (2.0 * terms.max(1) as f64);
        let mut sum = 0.0;
        let mut k = d + 1;
        while k < m + n {
            sum += self.vk(VkRequest::new(k, m, n).tol(per))?;
            k += 2;
        }
        Ok((2.0 * sum).clamp(0.0, 1.0))
    }

    /// Both parity sums of `v_k(m,n)` against 1/2.
    pub fn check_gauss_bonnet(&self, m: usize, n: usize, tol: f64) -> Result<GaussBonnetReport> {
        check_mn(m, n)?;
        let per = tol / (m + n) as f64;
        let volumes: Vec<f64> = (0..m + n)
            .map(|k| self.vk(VkRequest::new(k, m, n).tol(per)))
            .collect::<Result<_>>()?;
        let even: f64 = volumes.iter().step_by(2).sum();
        let odd: f64 = volumes.iter().skip(1).step_by(2).sum();
        Ok(GaussBonnetReport {
            m,
            n,
            even_sum: even,
            odd_sum: odd,
            even_residual: (even - 0.5).abs(),
            odd_residual: (odd - 0.5).abs(),
            tol,
            volumes,
        })
    }

    /// Compares `v_k(m,n)` with `v_k(n,m)` for every `k`, each side by the
    /// general engine without normalization; at `k = m+n-1` the two `Kmax`
    /// sums are compared as well.
    pub fn check_symmetry(&self, m: usize, n: usize, tol: f64) -> Result<SymmetryReport> {
        check_mn(m, n)?;
        let mut rows = Vec::new();
        for k in 0..m + n {
            let (left, right) = if k == 0 {
                let v = self.vk(VkRequest::new(0, m, n))?;
                (v, self.vk(VkRequest::new(0, n, m))?)
            } else {
                (self.general(k, m, n, tol)?, self.general(k, n, m, tol)?)
            };
            rows.push(SymmetryRow {
                k,
                forward: left,
                backward: right,
                diff: (left - right).abs(),
            });
        }
        let kmax_forward = self.kmax(m, n, tol)?;
        let kmax_backward = self.kmax(n, m, tol)?;
        Ok(SymmetryReport {
            m,
            n,
            tol,
            rows,
            kmax_forward,
            kmax_backward,
        })
    }

    /// Radon probabilities `P_d(a, N-a)` for `a = 1..=N/2`, and whether they
    /// increase strictly with balance. Reported only; nothing is asserted.
    pub fn balance_probe(&self, d: usize, total: usize, tol: f64) -> Result<BalanceProbe> {
        if total < 2 {
            return Err(Error::Domain("balance probe needs N >= 2".into()));
        }
        let probabilities: Vec<(usize, f64)> = (1..=total / 2)
            .map(|a| Ok((a, self.radon_probability(d, a, total - a, tol)?)))
            .collect::<Result<_>>()?;
        let increasing = probabilities.windows(2).all(|w| w[0].1 < w[1].1);
        Ok(BalanceProbe {
            d,
            n_total: total,
            probabilities,
            strictly_increasing: increasing,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussBonnetReport {
    pub m: usize,
    pub n: usize,
    pub even_sum: f64,
    pub odd_sum: f64,
    pub even_residual: f64,
    pub odd_residual: f64,
    pub tol: f64,
    pub volumes: Vec<f64>,
}

impl GaussBonnetReport {
    pub fn passed(&self) -> bool {
        self.even_residual <= self.tol && self.odd_residual <= self.tol
    }

    pub fn max_residual(&self) -> f64 {
        self.even_residual.max(self.odd_residual)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryRow {
    pub k: usize,
    pub forward: f64,
    pub backward: f64,
    pub diff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub m: usize,
    pub n: usize,
    pub tol: f64,
    pub rows: Vec<SymmetryRow>,
    pub kmax_forward: f64,
    pub kmax_backward: f64,
}

impl SymmetryReport {
    pub fn max_diff(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.diff)
            .fold((self.kmax_forward - self.kmax_backward).abs(), f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_diff() < self.tol
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BalanceProbe {
    pub d: usize,
    pub n_total: usize,
    pub probabilities: Vec<(usize, f64)>,
    pub strictly_increasing: bool,
}
