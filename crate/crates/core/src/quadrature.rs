//! One-dimensional quadrature.
//!
//! [`integrate`] is a globally adaptive 21-point Gauss-Kronrod scheme over a
//! list of breakpoints. With edge substitution on, every piece `[p, q]` is
//! split at its midpoint and integrated as `x = p + u^2` on the left half and
//! `x = q - u^2` on the right half, which turns `sqrt(x - p)` edge behaviour
//! into a smooth integrand in `u`.
//!
//! [`tanh_sinh`] is a double-exponential rule used for independent 1-D
//! reference integrals.

use serde::Serialize;

use crate::real::Real;
use crate::{Error, Result};

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Cap on the number of live segments per integration axis.
    pub max_subdivisions: usize,
    /// Square-root substitution at every breakpoint.
    pub edge_substitution: bool,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-6),
            abs_tol: T::lit(1e-14),
            max_subdivisions: 2000,
            edge_substitution: true,
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > T::zero() && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::InvalidConfig(format!(
                "max_subdivisions must be >= 10, got {}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }

    /// Same config with both tolerances scaled by `factor`.
    pub fn tightened(&self, factor: T) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }

    /// Allowed error for an integral of magnitude `value`.
    pub fn target(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of a (possibly vector-valued) integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T, const N: usize> {
    pub value: [T; N],
    pub error: [T; N],
    pub evaluations: usize,
    pub converged: bool,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077834077468744,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
enum Map<T> {
    Identity,
    /// `x = origin + u^2`
    FromLeft(T),
    /// `x = origin - u^2`
    FromRight(T),
}

#[derive(Debug, Clone, Copy)]
struct Segment<T, const N: usize> {
    a: T,
    b: T,
    map: Map<T>,
    value: [T; N],
    error: [T; N],
    passive: [T; N],
    splittable: bool,
}

struct Rule<T> {
    xgk: [T; 11],
    wgk: [T; 11],
    wg: [T; 5],
}

impl<T: Real> Rule<T> {
    fn new() -> Self {
        Self {
            xgk: XGK.map(T::lit),
            wgk: WGK.map(T::lit),
            wg: WG.map(T::lit),
        }
    }
}

fn rescale_error<T: Real>(err: T, res_abs: T, res_asc: T) -> T {
    let mut err = err.abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = if scale < T::one() {
            res_asc * scale
        } else {
            res_asc
        };
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) && floor > err {
        err = floor;
    }
    err
}

fn eval_segment<T, const N: usize, F>(
    f: &mut F,
    rule: &Rule<T>,
    a: T,
    b: T,
    map: Map<T>,
    evaluations: &mut usize,
) -> Segment<T, N>
where
    T: Real,
    F: FnMut(T) -> ([T; N], [T; N]),
{
    let two = T::one() + T::one();
    let mut g = |u: T| -> ([T; N], [T; N]) {
        *evaluations += 1;
        let (x, jac) = match map {
            Map::Identity => (u, T::one()),
            Map::FromLeft(o) => (o + u * u, two * u),
            Map::FromRight(o) => (o - u * u, two * u),
        };
        let (mut v, mut p) = f(x);
        for i in 0..N {
            v[i] = v[i] * jac;
            p[i] = p[i] * jac;
        }
        (v, p)
    };

    let centre = (a + b) / two;
    let half = (b - a) / two;
    let (fc, pc) = g(centre);

    let mut res_k = [T::zero(); N];
    let mut res_g = [T::zero(); N];
    let mut res_abs = [T::zero(); N];
    let mut passive = [T::zero(); N];
    let mut fv1 = [[T::zero(); N]; 10];
    let mut fv2 = [[T::zero(); N]; 10];
    for i in 0..N {
        res_k[i] = fc[i] * rule.wgk[10];
        res_abs[i] = fc[i].abs() * rule.wgk[10];
        passive[i] = pc[i] * rule.wgk[10];
    }
    for j in 0..10 {
        let dx = half * rule.xgk[j];
        let (f1, p1) = g(centre - dx);
        let (f2, p2) = g(centre + dx);
        for i in 0..N {
            let sum = f1[i] + f2[i];
            res_k[i] = res_k[i] + rule.wgk[j] * sum;
            res_abs[i] = res_abs[i] + rule.wgk[j] * (f1[i].abs() + f2[i].abs());
            passive[i] = passive[i] + rule.wgk[j] * (p1[i] + p2[i]);
            if j % 2 == 1 {
                res_g[i] = res_g[i] + rule.wg[j / 2] * sum;
            }
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }

    let mut value = [T::zero(); N];
    let mut error = [T::zero(); N];
    for i in 0..N {
        let mean = res_k[i] / two;
        let mut res_asc = rule.wgk[10] * (fc[i] - mean).abs();
        for j in 0..10 {
            res_asc = res_asc + rule.wgk[j] * ((fv1[j][i] - mean).abs() + (fv2[j][i] - mean).abs());
        }
        let h = half.abs();
        value[i] = res_k[i] * half;
        error[i] = rescale_error((res_k[i] - res_g[i]) * h, res_abs[i] * h, res_asc * h);
        passive[i] = (passive[i] * half).abs();
    }
    Segment {
        a,
        b,
        map,
        value,
        error,
        passive,
        splittable: true,
    }
}

/// Adaptive integration of a vector-valued integrand over `breakpoints`
/// (sorted, first and last are the limits).
///
/// `f` returns the integrand values and a non-negative "passive" error
/// density, typically the error of an inner integration. The passive part is
/// integrated with the Kronrod weights and added to the reported error but
/// does not drive subdivision.
pub fn integrate<T, const N: usize, F>(
    mut f: F,
    breakpoints: &[T],
    cfg: &QuadratureConfig<T>,
) -> Integral<T, N>
where
    T: Real,
    F: FnMut(T) -> ([T; N], [T; N]),
{
    let rule = Rule::new();
    let two = T::one() + T::one();
    let mut evaluations = 0usize;
    let mut segs: Vec<Segment<T, N>> = Vec::new();

    for pair in breakpoints.windows(2) {
        let (p, q) = (pair[0], pair[1]);
        if !(q > p) {
            continue;
        }
        if cfg.edge_substitution {
            let m = (p + q) / two;
            let left = (m - p).sqrt();
            let right = (q - m).sqrt();
            segs.push(eval_segment(
                &mut f,
                &rule,
                T::zero(),
                left,
                Map::FromLeft(p),
                &mut evaluations,
            ));
            // `u` runs from the right edge inwards
            segs.push(eval_segment(
                &mut f,
                &rule,
                T::zero(),
                right,
                Map::FromRight(q),
                &mut evaluations,
            ));
        } else {
            segs.push(eval_segment(
                &mut f,
                &rule,
                p,
                q,
                Map::Identity,
                &mut evaluations,
            ));
        }
    }

    let totals = |segs: &[Segment<T, N>]| {
        let mut v = [T::zero(); N];
        let mut e = [T::zero(); N];
        let mut p = [T::zero(); N];
        for s in segs {
            for i in 0..N {
                v[i] = v[i] + s.value[i];
                e[i] = e[i] + s.error[i];
                p[i] = p[i] + s.passive[i];
            }
        }
        (v, e, p)
    };

    let mut converged = false;
    loop {
        let (v, e, _) = totals(&segs);
        let targets: [T; N] = std::array::from_fn(|i| cfg.target(v[i]));
        if (0..N).all(|i| e[i] <= targets[i]) {
            converged = true;
            break;
        }
        if segs.len() >= cfg.max_subdivisions {
            break;
        }
        let worst = segs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.splittable)
            .map(|(k, s)| {
                let score = (0..N)
                    .map(|i| s.error[i] / targets[i])
                    .fold(T::zero(), |acc, x| acc.max(x));
                (k, score)
            })
            .fold(None::<(usize, T)>, |best, (k, score)| match best {
                Some((_, b)) if b >= score => best,
                _ => Some((k, score)),
            });
        let Some((k, _)) = worst else {
            break;
        };
        let s = segs[k];
        let mid = (s.a + s.b) / two;
        let tiny =
            T::lit(100.0) * T::epsilon() * s.a.abs().max(s.b.abs()).max(T::min_positive_value());
        if !(mid - s.a > tiny && s.b - mid > tiny) {
            segs[k].splittable = false;
            continue;
        }
        let left = eval_segment(&mut f, &rule, s.a, mid, s.map, &mut evaluations);
        let right = eval_segment(&mut f, &rule, mid, s.b, s.map, &mut evaluations);
        segs[k] = left;
        segs.insert(k + 1, right);
    }

    let (value, mut error, passive) = totals(&segs);
    for i in 0..N {
        error[i] = error[i] + passive[i];
    }
    if converged {
        converged = (0..N).all(|i| error[i] <= cfg.target(value[i]));
    }
    Integral {
        value,
        error,
        evaluations,
        converged,
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<T, F>(
    mut f: F,
    breakpoints: &[T],
    cfg: &QuadratureConfig<T>,
) -> Integral<T, 1>
where
    T: Real,
    F: FnMut(T) -> T,
{
    integrate(|x| ([f(x)], [T::zero()]), breakpoints, cfg)
}

/// Tanh-sinh quadrature on `[a, b]`, halving the step until two successive
/// levels agree to `rel_tol`. Returns `(value, |last change|)`.
///
/// `f` is never evaluated exactly at the endpoints unless the abscissa
/// rounds onto them.
pub fn tanh_sinh<T, F>(f: F, a: T, b: T, rel_tol: T, max_level: u32) -> (T, T)
where
    T: Real,
    F: Fn(T) -> T,
{
    let two = T::one() + T::one();
    let half_pi = T::FRAC_PI_2();
    let half = (b - a) / two;
    let t_max = T::lit(6.5);

    // sum over abscissae t = k h for the given step
    let level_sum = |h: T, odd_only: bool| -> T {
        let mut sum = T::zero();
        let mut k = if odd_only { 1usize } else { 0 };
        let stride = if odd_only { 2 } else { 1 };
        loop {
            let t = T::from_usize_lossy(k) * h;
            if t > t_max {
                break;
            }
            let u = half_pi * t.sinh();
            let ch = u.cosh();
            // 1 - tanh(u), computed without cancellation
            let compl = T::one() / (u.exp() * ch);
            let w = half_pi * t.cosh() / (ch * ch);
            if compl == T::zero() || w < T::min_positive_value().sqrt() {
                break;
            }
            let mut term = f(b - half * compl);
            if k != 0 {
                term = term + f(a + half * compl);
            }
            sum = sum + w * term;
            k += stride;
        }
        sum
    };

    let mut h = T::one();
    let mut sum = level_sum(h, false);
    let mut estimate = sum * h * half;
    let mut change = T::infinity();
    for _ in 0..max_level {
        h = h / two;
        sum = sum + level_sum(h, true);
        let next = sum * h * half;
        change = (next - estimate).abs();
        estimate = next;
        if change <= rel_tol * estimate.abs() {
            break;
        }
    }
    (estimate, change)
}
