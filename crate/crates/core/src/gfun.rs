//! The scalar functions `g_n` through which the intrinsic volumes of the
//! simplicial cones `C_n(r)` factor.
//!
//! `g_0 = 1`, `g_1 = 1/2`, and `g_2`, `g_3` have arcsine closed forms. For
//! `n >= 4` the value is obtained from the derivative recurrence
//!
//! ```text
//! g_n'(r) = n(n-1) / (4π (r+1) sqrt(2r+1)) · g_{n-2}(r / (2r+1)),   g_n(-1/n) = 0,
//! ```
//!
//! integrated by adaptive Gauss–Legendre quadrature. All integrals are taken
//! in the variable `t = sqrt(r + 1/n)`, which turns the square-root behaviour
//! of the even-index functions at the left end of their domain into a smooth
//! integrand.
//!
//! The inner factor `g_{n-2}` is needed at a continuum of points, so for
//! `n - 2 >= 4` it is served from a Chebyshev interpolant (in the same `t`
//! variable) built once per index from quadrature values. Inner arguments
//! `r / (2r+1)` never exceed 1/2, which bounds the interpolation interval.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::quadrature::{AdaptiveQuadrature, Integral};

/// Default absolute tolerance of a top-level `g` evaluation.
pub const DEFAULT_G_TOL: f64 = 1e-11;

/// Inner arguments `r/(2r+1)` stay strictly below this bound.
const INNER_ARG_MAX: f64 = 0.5;
/// Target absolute accuracy of the inner interpolants.
const TABLE_TOL: f64 = 1e-15;
const TABLE_MIN_NODES: usize = 16;
const TABLE_MAX_NODES: usize = 1024;

/// A `g` value together with the error bound of the path that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue {
    pub value: f64,
    pub error: f64,
}

/// Closed forms for `n <= 3`; `None` for larger `n`.
///
/// The caller is responsible for the domain check.
pub fn g_closed_form(ell: usize, r: f64) -> Option<f64> {
    match ell {
        0 => Some(1.0),
        1 => Some(0.5),
        // 1/4 + asin(r/(1+r))/(2π), rewritten so it stays accurate near r = -1/2.
        2 => {
            let x = ((1.0 + 2.0 * r) / (2.0 * (1.0 + r))).clamp(0.0, 1.0);
            Some(x.sqrt().asin() / PI)
        }
        3 => {
            let x = (r / (1.0 + r)).clamp(-1.0, 1.0);
            Some(0.125 + 3.0 * x.asin() / (4.0 * PI))
        }
        _ => None,
    }
}

/// Lower end of the domain of `g_ell`.
pub fn domain_start(ell: usize) -> f64 {
    if ell == 0 {
        f64::NEG_INFINITY
    } else {
        -1.0 / ell as f64
    }
}

fn check_domain(ell: usize, r: f64) -> Result<()> {
    if r.is_nan() {
        return Err(Error::Domain(format!("g_{ell} evaluated at NaN")));
    }
    let lo = domain_start(ell);
    // a few ulp of slack so that -1/ell computed two different ways still passes
    if r < lo - 4.0 * f64::EPSILON * lo.abs() {
        return Err(Error::Domain(format!(
            "g_{ell} is defined on [{lo}, ∞), got r = {r}"
        )));
    }
    Ok(())
}

fn memo_key(ell: usize, r: f64) -> (usize, u64) {
    // 15 significant digits
    let rounded: f64 = format!("{r:.14e}").parse().unwrap_or(r);
    (ell, rounded.to_bits())
}

/// Chebyshev interpolant of `τ ↦ g_ell(-1/ell + τ²)` on `[0, τ_max]`.
#[derive(Debug)]
struct InnerTable {
    tau_max: f64,
    coeffs: Vec<f64>,
    /// Interpolation error estimate (coefficient tail plus quadrature
    /// tolerance), summed with that of the lower-index tables it was built
    /// from. Inner errors are summed rather than multiplied by the kernel
    /// mass: the recurrence kernel is positive, so an error proportional to
    /// `g_{n-2}` integrates to the same relative error in `g_n`.
    error: f64,
}

impl InnerTable {
    fn eval(&self, tau: f64) -> f64 {
        // inner arguments r/(2r+1) stay below INNER_ARG_MAX, so τ never leaves the table
        assert!(
            (-1e-12..=self.tau_max * (1.0 + 1e-12)).contains(&tau),
            "inner argument outside the interpolation interval: τ = {tau}, τ_max = {}",
            self.tau_max
        );
        let x = (2.0 * tau / self.tau_max - 1.0).clamp(-1.0, 1.0);
        // Clenshaw
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + 0.5 * self.coeffs[0]
    }
}

/// Memoizing evaluator of `g_n(r)`.
///
/// Shareable across threads. Cached entries are deterministic functions of
/// their key, so concurrent first writers store identical values.
#[derive(Debug)]
pub struct GEvaluator {
    tol: f64,
    cache: RwLock<HashMap<(usize, u64), (GValue, f64)>>,
    tables: RwLock<HashMap<usize, Arc<InnerTable>>>,
}

impl Default for GEvaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl GEvaluator {
    pub fn new() -> Self {
        Self::with_tolerance(DEFAULT_G_TOL)
    }

    pub fn with_tolerance(tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        Self {
            tol,
            cache: RwLock::new(HashMap::new()),
            tables: RwLock::new(HashMap::new()),
        }
    }

    /// Process-wide evaluator with the default tolerance.
    pub fn shared() -> &'static GEvaluator {
        static SHARED: OnceLock<GEvaluator> = OnceLock::new();
        SHARED.get_or_init(GEvaluator::new)
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// `g_ell(r)` at the evaluator's default tolerance.
    pub fn g(&self, ell: usize, r: f64) -> Result<f64> {
        self.g_eval(ell, r, self.tol)
    }

    /// `g_ell(r)` within absolute tolerance `tol`.
    pub fn g_eval(&self, ell: usize, r: f64, tol: f64) -> Result<f64> {
        check_tol(tol)?;
        check_domain(ell, r)?;
        if let Some(v) = g_closed_form(ell, r) {
            return Ok(v);
        }
        let key = memo_key(ell, r);
        if let Some((hit, stored_tol)) = self.cache.read().unwrap().get(&key).copied() {
            if stored_tol <= tol {
                return Ok(hit.value);
            }
        }
        let got = self.g_quadrature(ell, r, tol)?;
        let mut cache = self.cache.write().unwrap();
        let entry = cache.entry(key).or_insert((got, tol));
        if entry.1 > tol {
            *entry = (got, tol);
        }
        Ok(entry.0.value)
    }

    /// Forces the quadrature path for any `ell >= 2`, bypassing closed forms
    /// and the cache. The result carries the estimated error.
    pub fn g_quadrature(&self, ell: usize, r: f64, tol: f64) -> Result<GValue> {
        check_tol(tol)?;
        check_domain(ell, r)?;
        if ell < 2 {
            return Err(Error::InvalidArgument(format!(
                "g_{ell} is constant; no quadrature path"
            )));
        }
        let offset = (r - domain_start(ell)).max(0.0);
        let tau = offset.sqrt();
        let inner = self.inner_source(ell - 2)?;
        let quad = AdaptiveQuadrature::default();
        let result = quad.integrate(|t| integrand(ell, t, &inner), 0.0, tau, 0.5 * tol);
        let Integral { value, error, .. } = result.map_err(|e| Error::ToleranceNotAchieved {
            ell,
            r,
            requested: tol,
            achieved: e.error,
        })?;
        let error = error + inner.error() * kernel_mass(ell, r);
        if error > tol {
            return Err(Error::ToleranceNotAchieved {
                ell,
                r,
                requested: tol,
                achieved: error,
            });
        }
        Ok(GValue {
            value: clamp_unit(value, tol, ell, r)?,
            error,
        })
    }

    /// `g_ell'(r)` from the derivative recurrence, for `ell >= 2` and `r > -1/ell`.
    pub fn g_derivative(&self, ell: usize, r: f64) -> Result<f64> {
        if ell < 2 {
            return Err(Error::InvalidArgument(format!(
                "derivative recurrence needs ell >= 2, got {ell}"
            )));
        }
        check_domain(ell, r)?;
        if r <= domain_start(ell) {
            return Err(Error::Domain(format!(
                "g_{ell}' requires r > {}, got {r}",
                domain_start(ell)
            )));
        }
        let inner_arg = r / (2.0 * r + 1.0);
        debug_assert!(inner_arg >= domain_start(ell - 2) - 1e-12);
        let inner = self.g_eval(ell - 2, inner_arg, self.tol)?;
        Ok(kernel(ell, r) * inner)
    }

    /// Intrinsic volume `v_k(C_n(r)) = C(n,k) g_k(-r/(1+kr)) g_{n-k}(r/(1+kr))`.
    ///
    /// Zero when `k > n`.
    pub fn cn_intrinsic(&self, n: usize, r: f64, k: usize, tol: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("C_n(r) needs n >= 1".into()));
        }
        if r <= -1.0 / n as f64 {
            return Err(Error::Domain(format!("C_{n}(r) needs r > -1/{n}, got {r}")));
        }
        if k > n {
            return Ok(0.0);
        }
        let binom = binomial(n, k);
        let scale = 1.0 + k as f64 * r;
        // split the budget between the two factors, both bounded by 1
        let per = tol / (2.0 * binom.max(1.0));
        let left = self.g_eval(k, -r / scale, per)?;
        let right = self.g_eval(n - k, r / scale, per)?;
        Ok(binom * left * right)
    }

    fn inner_source(&self, ell: usize) -> Result<InnerSource> {
        if ell <= 3 {
            return Ok(InnerSource::Closed(ell));
        }
        if let Some(t) = self.tables.read().unwrap().get(&ell) {
            return Ok(InnerSource::Table(Arc::clone(t)));
        }
        let table = Arc::new(self.build_table(ell)?);
        let mut tables = self.tables.write().unwrap();
        let t = tables.entry(ell).or_insert(table);
        Ok(InnerSource::Table(Arc::clone(t)))
    }

    fn build_table(&self, ell: usize) -> Result<InnerTable> {
        let tau_max = (INNER_ARG_MAX + 1.0 / ell as f64).sqrt();
        let inner = self.inner_source(ell - 2)?;
        let quad = AdaptiveQuadrature::default();
        let mut n = TABLE_MIN_NODES;
        let mut last_tail = f64::INFINITY;
        while n <= TABLE_MAX_NODES {
            // Chebyshev points of the first kind, ascending in τ.
            let taus: Vec<f64> = (0..n)
                .map(|i| {
                    let theta = PI * (i as f64 + 0.5) / n as f64;
                    0.5 * tau_max * (1.0 - theta.cos())
                })
                .collect();
            let mut values = Vec::with_capacity(n);
            let mut acc = 0.0;
            let mut prev = 0.0;
            let seg_tol = 0.1 * TABLE_TOL / n as f64;
            for &tau in &taus {
                let piece = quad
                    .integrate(|t| integrand(ell, t, &inner), prev, tau, seg_tol)
                    .map_err(|e| Error::ToleranceNotAchieved {
                        ell,
                        r: tau * tau - 1.0 / ell as f64,
                        requested: seg_tol,
                        achieved: e.error,
                    })?;
                acc += piece.value;
                prev = tau;
                values.push(acc);
            }
            let coeffs = chebyshev_coefficients(&values);
            let tail_len = (n / 8).max(4);
            let tail: f64 = coeffs[n - tail_len..].iter().map(|c| c.abs()).sum();
            if tail <= TABLE_TOL * 10.0 {
                // drop the negligible tail
                let keep = coeffs
                    .iter()
                    .rposition(|c| c.abs() > TABLE_TOL * 1e-2)
                    .map_or(1, |p| p + 1);
                let dropped: f64 = coeffs[keep..].iter().map(|c| c.abs()).sum();
                let mut coeffs = coeffs;
                coeffs.truncate(keep);
                return Ok(InnerTable {
                    tau_max,
                    coeffs,
                    error: dropped + tail + TABLE_TOL + inner.error(),
                });
            }
            last_tail = tail;
            n *= 2;
        }
        Err(Error::ToleranceNotAchieved {
            ell,
            r: INNER_ARG_MAX,
            requested: TABLE_TOL,
            achieved: last_tail,
        })
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

fn clamp_unit(value: f64, tol: f64, ell: usize, r: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else if value > -tol && value < 1.0 + tol {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(Error::Consistency(format!(
            "g_{ell}({r}) = {value} lies outside [0, 1]"
        )))
    }
}

enum InnerSource {
    Closed(usize),
    Table(Arc<InnerTable>),
}

impl InnerSource {
    /// `g_j` at `-1/j + τ²`.
    fn eval_offset(&self, tau_sq: f64) -> f64 {
        match self {
            InnerSource::Closed(0) => 1.0,
            InnerSource::Closed(1) => 0.5,
            InnerSource::Closed(j) => {
                let r = tau_sq - 1.0 / *j as f64;
                if *j == 2 {
                    // 1 + 2r = 2τ² exactly
                    let x = (tau_sq / (1.0 + r)).clamp(0.0, 1.0);
                    x.sqrt().asin() / PI
                } else {
                    g_closed_form(*j, r).unwrap_or(0.0)
                }
            }
            InnerSource::Table(table) => table.eval(tau_sq.sqrt()),
        }
    }

    fn error(&self) -> f64 {
        match self {
            InnerSource::Closed(_) => 0.0,
            InnerSource::Table(t) => t.error,
        }
    }
}

/// `n(n-1) / (4π (r+1) sqrt(2r+1))`.
fn kernel(ell: usize, r: f64) -> f64 {
    let n = ell as f64;
    n * (n - 1.0) / (4.0 * PI * (r + 1.0) * (2.0 * r + 1.0).sqrt())
}

/// `∫_{-1/n}^{r} kernel(n, s) ds`, the amplification of an inner error.
fn kernel_mass(ell: usize, r: f64) -> f64 {
    let n = ell as f64;
    let lo = ((n - 2.0) / n).max(0.0).sqrt().atan();
    let hi = (2.0 * r + 1.0).max(0.0).sqrt().atan();
    n * (n - 1.0) / (2.0 * PI) * (hi - lo).max(0.0)
}

/// `d/dt g_ell(-1/ell + t²) = 2t · g_ell'(-1/ell + t²)`.
fn integrand(ell: usize, t: f64, inner: &InnerSource) -> f64 {
    let n = ell as f64;
    let t2 = t * t;
    let two_r_plus_one = 2.0 * t2 + (n - 2.0) / n;
    let r_plus_one = t2 + (n - 1.0) / n;
    let front = n * (n - 1.0) / (4.0 * PI * r_plus_one);
    // 2t / sqrt(2r+1) computed without cancellation when ell = 2
    let ratio = if ell == 2 {
        std::f64::consts::SQRT_2
    } else {
        2.0 * t / two_r_plus_one.sqrt()
    };
    if ell == 2 {
        return front * ratio * inner.eval_offset(0.0);
    }
    // offset of r/(2r+1) from -1/(ell-2), computed in closed form
    let inner_tau_sq = n * t2 / ((n - 2.0) * two_r_plus_one);
    front * ratio * inner.eval_offset(inner_tau_sq)
}

fn chebyshev_coefficients(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    // values are ordered by ascending τ, i.e. descending cos θ; reverse to θ order
    (0..n)
        .map(|k| {
            let mut s = 0.0;
            for (i, v) in values.iter().enumerate() {
                let theta = PI * ((n - 1 - i) as f64 + 0.5) / n as f64;
                s += v * (k as f64 * theta).cos();
            }
            2.0 * s / n as f64
        })
        .collect()
}

/// Binomial coefficient as f64, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
