//! Adaptive Simpson quadrature for the entropy integrals.
//!
//! The interval is first cut at caller-supplied breakpoints (component means
//! and a few standard deviations around them for a Gaussian mixture), then
//! each panel is refined independently. The error target is `rel_tol`
//! relative to an estimate of `∫|f|`, which stays meaningful when the signed
//! integral itself is close to zero.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadratureError {
    #[error("integration bounds must be finite with lower < upper (got [{lower}, {upper}])")]
    InvalidBounds { lower: f64, upper: f64 },
    #[error("relative tolerance must lie in (0, 1) (got {0})")]
    InvalidTolerance(f64),
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("no convergence within depth {max_depth} on [{a}, {b}]")]
    NotConverged { a: f64, b: f64, max_depth: u32 },
    #[error("probability must be non-negative (got {0})")]
    NegativeProbability(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSpec {
    lower: f64,
    upper: f64,
    rel_tol: f64,
    max_depth: u32,
    breakpoints: Vec<f64>,
}

impl IntegralSpec {
    pub const DEFAULT_REL_TOL: f64 = 1e-9;
    pub const DEFAULT_MAX_DEPTH: u32 = 48;

    pub fn new(lower: f64, upper: f64) -> Result<Self, QuadratureError> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(QuadratureError::InvalidBounds { lower, upper });
        }
        Ok(Self {
            lower,
            upper,
            rel_tol: Self::DEFAULT_REL_TOL,
            max_depth: Self::DEFAULT_MAX_DEPTH,
            breakpoints: Vec::new(),
        })
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Result<Self, QuadratureError> {
        check_rel_tol(rel_tol)?;
        self.rel_tol = rel_tol;
        Ok(self)
    }

    pub fn with_max_depth(mut self, max_depth: u32) -> Self {
        self.max_depth = max_depth;
        self
    }

    /// Extra panel boundaries. Points outside the open interval are ignored.
    pub fn with_breakpoints(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints
            .extend(points.into_iter().filter(|p| *p > self.lower && *p < self.upper));
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup();
        self
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    fn panels(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let nodes: Vec<f64> = std::iter::once(self.lower)
            .chain(self.breakpoints.iter().copied())
            .chain(std::iter::once(self.upper))
            .collect();
        (0..nodes.len() - 1).map(move |i| (nodes[i], nodes[i + 1]))
    }
}

pub(crate) fn check_rel_tol(rel_tol: f64) -> Result<(), QuadratureError> {
    if rel_tol > 0.0 && rel_tol < 1.0 {
        Ok(())
    } else {
        Err(QuadratureError::InvalidTolerance(rel_tol))
    }
}

/// `p·log2(p)`, continuously extended with `0` at `p = 0`.
pub fn plogp(p: f64) -> Result<f64, QuadratureError> {
    if p.is_nan() || p < 0.0 {
        return Err(QuadratureError::NegativeProbability(p));
    }
    Ok(xlog2x(p))
}

#[inline]
pub(crate) fn xlog2x(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

struct Segment {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
}

const MIN_DEPTH: u32 = 3;
const SCALE_SUBINTERVALS: usize = 16;

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, QuadratureError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadratureError::NonFinite(x))
    }
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Composite Simpson estimate of `∫|f|` over one panel.
fn abs_mass<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64, QuadratureError> {
    let h = (b - a) / SCALE_SUBINTERVALS as f64;
    let mut sum = 0.0;
    for k in 0..=SCALE_SUBINTERVALS {
        let x = if k == SCALE_SUBINTERVALS { b } else { a + k as f64 * h };
        let weight = if k == 0 || k == SCALE_SUBINTERVALS {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * eval(f, x)?.abs();
    }
    Ok(sum * h / 3.0)
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, spec: &IntegralSpec) -> Result<f64, QuadratureError> {
    let panels: Vec<(f64, f64)> = spec.panels().collect();
    let mut scale = 0.0;
    for &(a, b) in &panels {
        scale += abs_mass(&f, a, b)?;
    }
    let abs_tol = spec.rel_tol * scale.max(f64::MIN_POSITIVE);
    let span = spec.upper - spec.lower;

    let mut total = 0.0;
    let mut stack = Vec::with_capacity(64);
    for (a, b) in panels {
        let fa = eval(&f, a)?;
        let fm = eval(&f, 0.5 * (a + b))?;
        let fb = eval(&f, b)?;
        stack.push(Segment {
            a,
            b,
            fa,
            fm,
            fb,
            whole: simpson(a, b, fa, fm, fb),
            eps: abs_tol * (b - a) / span,
            depth: 0,
        });
        while let Some(s) = stack.pop() {
            let m = 0.5 * (s.a + s.b);
            let flm = eval(&f, 0.5 * (s.a + m))?;
            let frm = eval(&f, 0.5 * (m + s.b))?;
            let left = simpson(s.a, m, s.fa, flm, s.fm);
            let right = simpson(m, s.b, s.fm, frm, s.fb);
            let delta = left + right - s.whole;
            if s.depth >= MIN_DEPTH && delta.abs() <= 15.0 * s.eps {
                total += left + right + delta / 15.0;
                continue;
            }
            if s.depth >= spec.max_depth {
                return Err(QuadratureError::NotConverged {
                    a: s.a,
                    b: s.b,
                    max_depth: spec.max_depth,
                });
            }
            let eps = 0.5 * s.eps;
            let depth = s.depth + 1;
            // right pushed first so the left half is finished first
            stack.push(Segment {
                a: m,
                b: s.b,
                fa: s.fm,
                fm: frm,
                fb: s.fb,
                whole: right,
                eps,
                depth,
            });
            stack.push(Segment {
                a: s.a,
                b: m,
                fa: s.fa,
                fm: flm,
                fb: s.fm,
                whole: left,
                eps,
                depth,
            });
        }
    }
    Ok(total)
}
