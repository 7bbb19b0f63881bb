//! Evaluation of the Lorentz–Karamata functionals on rearrangement
//! carriers.
//!
//! For a [`DecreasingStep`] `f*` the functional is a finite sum of weighted
//! piece integrals `v_i^q ∫ t^{q/p−1} b(t)^q dt` plus, for the `f**` form,
//! one improper tail; each integral is delegated to [`crate::quad`] (closed
//! form when `b` is constant). Everything is accumulated in log space, so
//! carriers reaching `t = e^{±300}` with values `e^{±250}` stay exact to
//! f64 rounding. Suprema (`q = ∞`) are taken per piece with dyadic
//! refinement; the weights are monotone-equivalent on each side of their
//! single scale, so refinement settles quickly.

use crate::quad::{self, lse, Improper};
use crate::rearrange::DecreasingStep;
use crate::sv::{
    endpoint_boundedness, endpoint_integrability, snap_cmp, Cursor, Endpoint, EndpointBehavior,
    SlowlyVaryingFunction,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// serde helper: f64 that renders `∞` as the string `"inf"`.
pub mod ext_real {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    struct ExtVisitor;

    impl<'de> Visitor<'de> for ExtVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            write!(f, "a number or the string \"inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" | "Infinity" => Ok(f64::INFINITY),
                _ => v.parse().map_err(|_| E::custom("bad extended real")),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(ExtVisitor)
    }
}

/// The triple `(p, q, b)` plus the total measure of the underlying space and
/// the choice between the `f*` and `f**` functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    #[serde(with = "ext_real")]
    pub p: f64,
    #[serde(with = "ext_real")]
    pub q: f64,
    pub b: SlowlyVaryingFunction,
    #[serde(with = "ext_real", rename = "mu", default = "default_mu")]
    pub mu_r: f64,
    #[serde(default)]
    pub star: bool,
}

fn default_mu() -> f64 {
    f64::INFINITY
}

impl SpaceSpec {
    pub fn new(p: f64, q: f64, b: SlowlyVaryingFunction) -> Result<Self> {
        let spec = SpaceSpec {
            p,
            q,
            b,
            mu_r: f64::INFINITY,
            star: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `L^p` over an infinite measure space: `p = q`, `b ≡ 1`.
    pub fn lebesgue(p: f64) -> Self {
        SpaceSpec::new(p, p, SlowlyVaryingFunction::one()).expect("positive exponent")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0) || self.p.is_nan() {
            return Err(Error::Validation(format!("p must be in (0, ∞], got {}", self.p)));
        }
        if !(self.q > 0.0) || self.q.is_nan() {
            return Err(Error::Validation(format!("q must be in (0, ∞], got {}", self.q)));
        }
        if !(self.mu_r > 0.0) || self.mu_r.is_nan() {
            return Err(Error::Validation(format!(
                "mu must be in (0, ∞], got {}",
                self.mu_r
            )));
        }
        Ok(())
    }

    pub fn with_star(&self, star: bool) -> Self {
        SpaceSpec {
            star,
            ..self.clone()
        }
    }

    pub fn with_mu(&self, mu_r: f64) -> Self {
        SpaceSpec {
            mu_r,
            ..self.clone()
        }
    }

    pub fn p_is_infinite(&self) -> bool {
        self.p.is_infinite()
    }

    pub fn q_is_infinite(&self) -> bool {
        self.q.is_infinite()
    }

    /// `q/p` with the `p = ∞` convention (0); only valid for finite `q`.
    fn q_over_p(&self) -> f64 {
        debug_assert!(!self.q_is_infinite());
        if self.p_is_infinite() {
            0.0
        } else {
            self.q / self.p
        }
    }
}

fn fmt_ext(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v}")
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LK(p={}, q={}, b={}",
            fmt_ext(self.p),
            fmt_ext(self.q),
            self.b
        )?;
        if self.mu_r.is_finite() {
            write!(f, ", mu={}", self.mu_r)?;
        }
        if self.star {
            write!(f, ", star")?;
        }
        write!(f, ")")
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    /// Parses `LK(p=<v|inf>, q=<v|inf> [, b=sv(...)] [, mu=<v|inf>] [, star])`.
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        cur.skip_ws();
        cur.expect_str("LK")?;
        cur.expect('(')?;
        let mut p = None;
        let mut q = None;
        let mut b = None;
        let mut mu = f64::INFINITY;
        let mut star = false;
        loop {
            let key = cur.ident()?;
            match key {
                "p" => {
                    cur.expect('=')?;
                    p = Some(cur.number_or_inf()?);
                }
                "q" => {
                    cur.expect('=')?;
                    q = Some(cur.number_or_inf()?);
                }
                "mu" => {
                    cur.expect('=')?;
                    mu = cur.number_or_inf()?;
                }
                "star" => star = true,
                "b" => {
                    cur.expect('=')?;
                    b = Some(crate::sv::parse_sv_body(&mut cur)?);
                }
                other => return Err(cur.error(format!("unknown key '{other}'"))),
            }
            if !cur.eat(',') {
                break;
            }
        }
        cur.expect(')')?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.error("trailing input after LK(...)"));
        }
        let p = p.ok_or_else(|| cur.error("missing p"))?;
        let q = q.ok_or_else(|| cur.error("missing q"))?;
        let spec = SpaceSpec {
            p,
            q,
            b: b.unwrap_or_else(SlowlyVaryingFunction::one),
            mu_r: mu,
            star,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A computed norm, kept in log space. `ln_value = +∞` with the `divergent`
/// flag set means a piece integral or tail was (symbolically or by trend)
/// infinite.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NormValue {
    pub ln_value: f64,
    pub divergent: bool,
    pub est_rel_err: f64,
}

impl NormValue {
    fn zero() -> Self {
        NormValue {
            ln_value: f64::NEG_INFINITY,
            divergent: false,
            est_rel_err: 0.0,
        }
    }

    fn infinite() -> Self {
        NormValue {
            ln_value: f64::INFINITY,
            divergent: true,
            est_rel_err: 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }

    pub fn is_finite(&self) -> bool {
        self.ln_value < f64::INFINITY
    }
}

/// Default relative tolerance for piece integrals.
pub const PIECE_REL_TOL: f64 = 1e-8;
/// Default relative tolerance for improper tails.
pub const TAIL_REL_TOL: f64 = 1e-6;

static TOL_OVERRIDE: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Overrides the default piece-integral tolerance (the `--tol` flag and the
/// `LK_DEFAULT_TOL` environment variable end up here). Clamped to the
/// oracle's supported range.
pub fn set_default_tolerance(tol: f64) {
    TOL_OVERRIDE.store(
        tol.clamp(1e-12, 1e-2).to_bits(),
        std::sync::atomic::Ordering::Relaxed,
    );
}

pub(crate) fn piece_tol() -> f64 {
    let bits = TOL_OVERRIDE.load(std::sync::atomic::Ordering::Relaxed);
    if bits == 0 {
        PIECE_REL_TOL
    } else {
        f64::from_bits(bits)
    }
}

pub(crate) fn tail_tol() -> f64 {
    (piece_tol() * 100.0).clamp(1e-10, 1e-2)
}

/// `‖f‖_{p,q,b}`: the `f*` functional. The carrier is truncated to
/// `[0, μ(R)]` first (a rearrangement never charges mass beyond the total
/// measure).
pub fn lk_norm(spec: &SpaceSpec, fstar: &DecreasingStep) -> NormValue {
    let f = clip(spec, fstar);
    if f.is_zero() {
        return NormValue::zero();
    }
    if spec.q_is_infinite() {
        return sup_norm(spec, &f, false);
    }
    integral_norm(spec, &f, false)
}

/// `‖f‖_{(p,q,b)}`: the `f**` functional, including the `M/t` tail beyond
/// the carrier's support.
pub fn lk_norm_star(spec: &SpaceSpec, fstar: &DecreasingStep) -> NormValue {
    let f = clip(spec, fstar);
    if f.is_zero() {
        return NormValue::zero();
    }
    if spec.q_is_infinite() {
        return sup_norm(spec, &f, true);
    }
    integral_norm(spec, &f, true)
}

/// Dispatches on `spec.star`.
pub fn space_norm(spec: &SpaceSpec, fstar: &DecreasingStep) -> NormValue {
    if spec.star {
        lk_norm_star(spec, fstar)
    } else {
        lk_norm(spec, fstar)
    }
}

fn clip(spec: &SpaceSpec, fstar: &DecreasingStep) -> DecreasingStep {
    if spec.mu_r.is_finite() && fstar.support() > spec.mu_r {
        fstar.truncated(spec.mu_r)
    } else {
        fstar.clone()
    }
}

/// `ln ∫_{lo}^{hi} t^{e−1} b^q dt` by the constant-`b` closed form.
fn ln_const_piece(e: f64, ln_cq: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(hi > lo && lo >= 0.0);
    if e == 0.0 {
        // only reachable with lo > 0
        return ln_cq + (hi / lo).ln().ln();
    }
    let ln_hi_e = e * hi.ln();
    let inner = if lo == 0.0 {
        1.0
    } else {
        1.0 - ((lo / hi).ln() * e).exp()
    };
    ln_cq + ln_hi_e + inner.ln() - e.ln()
}

fn integral_norm(spec: &SpaceSpec, f: &DecreasingStep, star: bool) -> NormValue {
    let q = spec.q;
    let e = spec.q_over_p();
    let b = &spec.b;
    let const_b = b.is_constant();
    let ln_cq = q * b.scale().ln();
    let mut terms: Vec<f64> = Vec::with_capacity(f.len() + 1);
    let mut errs: Vec<f64> = Vec::new();

    for i in 0..f.len() {
        let lo = f.left_edge(i);
        let hi = f.breakpoints()[i];
        let v = f.values()[i];
        let ln_vq = q * v.ln();
        // f** on this piece: (area_to_lo + v·(t − lo)) / t; on the first
        // piece this is just v, so both functionals share the improper case
        let area_lo = if star { f.integral_up_to(lo) } else { 0.0 };
        if i == 0 {
            // piece from 0: decide convergence symbolically first
            if !endpoint_integrability(b, q, e, Endpoint::Zero) {
                return NormValue::infinite();
            }
            if const_b && snap_cmp(e, 0.0) == Ordering::Greater {
                terms.push(ln_vq + ln_const_piece(e, ln_cq, 0.0, hi));
                continue;
            }
            match quad::ln_improper_family(e, b, q, Endpoint::Zero, hi, piece_tol()) {
                Improper::Converged { ln_value, ln_err } => {
                    terms.push(ln_vq + ln_value);
                    errs.push(ln_vq + ln_err);
                }
                Improper::Suspected { .. } => return NormValue::infinite(),
            }
            continue;
        }
        if star {
            let ln_g = |u: f64| {
                let t = u.exp();
                let fss = (area_lo + v * (t - lo)) / t;
                (e - 1.0) * u + q * b.ln_eval(u) + q * fss.ln()
            };
            let (lnv, lne) = quad::ln_window(&ln_g, lo, hi, piece_tol());
            terms.push(lnv);
            errs.push(lne);
        } else if const_b {
            terms.push(ln_vq + ln_const_piece(e, ln_cq, lo, hi));
        } else {
            let ln_g = |u: f64| (e - 1.0) * u + q * b.ln_eval(u);
            let (lnv, lne) = quad::ln_window(&ln_g, lo, hi, piece_tol());
            terms.push(ln_vq + lnv);
            errs.push(ln_vq + lne);
        }
    }

    if star {
        // tail beyond the support: f** = M/t
        let m = f.total_integral();
        if m > 0.0 {
            let a_tail = e - q;
            if !endpoint_integrability(b, q, a_tail, Endpoint::Infinity) {
                return NormValue::infinite();
            }
            match quad::ln_improper_family(a_tail, b, q, Endpoint::Infinity, f.support(), tail_tol())
            {
                Improper::Converged { ln_value, ln_err } => {
                    terms.push(q * m.ln() + ln_value);
                    errs.push(q * m.ln() + ln_err);
                }
                Improper::Suspected { .. } => return NormValue::infinite(),
            }
        }
    }

    let ln_sum = lse(terms.iter().copied());
    let ln_err = lse(errs.iter().copied());
    NormValue {
        ln_value: ln_sum / q,
        divergent: false,
        est_rel_err: ((ln_err - ln_sum).exp() / q).min(1.0),
    }
}

/// Dyadic-refinement supremum of `exp(ln_w)` over `[u_lo, u_hi]`,
/// splitting at the `u = 0` kink.
fn ln_sup_window(ln_w: &dyn Fn(f64) -> f64, u_lo: f64, u_hi: f64) -> f64 {
    if u_hi <= u_lo {
        return f64::NEG_INFINITY;
    }
    if u_lo < 0.0 && u_hi > 0.0 {
        return ln_sup_window(ln_w, u_lo, 0.0).max(ln_sup_window(ln_w, 0.0, u_hi));
    }
    let mut n = 16usize;
    let mut prev = f64::NEG_INFINITY;
    loop {
        let mut m = f64::NEG_INFINITY;
        for k in 0..=n {
            let u = u_lo + (u_hi - u_lo) * k as f64 / n as f64;
            m = m.max(ln_w(u));
        }
        if (m - prev).abs() <= 1e-10 * (1.0 + m.abs()) || n >= 4096 {
            return m.max(prev);
        }
        prev = m;
        n *= 2;
    }
}

fn sup_norm(spec: &SpaceSpec, f: &DecreasingStep, star: bool) -> NormValue {
    let b = &spec.b;
    let inv_p = if spec.p_is_infinite() { 0.0 } else { 1.0 / spec.p };
    let ln_weight = |u: f64| inv_p * u + b.ln_eval(u);
    let mut best = f64::NEG_INFINITY;

    for i in 0..f.len() {
        let lo = f.left_edge(i);
        let hi = f.breakpoints()[i];
        let v = f.values()[i];
        let area_lo = if star { f.integral_up_to(lo) } else { 0.0 };
        let ln_w_piece = |u: f64| {
            if star {
                let t = u.exp();
                let fss = (area_lo + v * (t - lo)) / t;
                ln_weight(u) + fss.ln()
            } else {
                ln_weight(u) + v.ln()
            }
        };
        if i == 0 {
            // sup over (0, hi]
            if spec.p_is_infinite() {
                match endpoint_boundedness(b, Endpoint::Zero) {
                    EndpointBehavior::TendsToInfinity => return NormValue::infinite(),
                    EndpointBehavior::BoundedAbove => {
                        best = best.max(v.ln() + b.scale().ln());
                    }
                    EndpointBehavior::TendsToZero => {}
                }
                best = best.max(ln_sup_window(&ln_w_piece, hi.ln() - 200.0, hi.ln()));
            } else {
                // t^{1/p} forces the weight to 0 at the origin
                let reach = 200.0 * spec.p.max(1.0);
                best = best.max(ln_sup_window(&ln_w_piece, hi.ln() - reach, hi.ln()));
            }
            continue;
        }
        best = best.max(ln_sup_window(&ln_w_piece, lo.ln(), hi.ln()));
    }

    if star {
        let m = f.total_integral();
        if m > 0.0 {
            // sup_{t > support} t^{1/p − 1} b(t) · M
            let ep = inv_p - 1.0;
            match snap_cmp(ep, 0.0) {
                Ordering::Greater => return NormValue::infinite(),
                Ordering::Equal => match endpoint_boundedness(b, Endpoint::Infinity) {
                    EndpointBehavior::TendsToInfinity => return NormValue::infinite(),
                    _ => {
                        let ln_tail = |u: f64| b.ln_eval(u) + m.ln();
                        let s = f.support().ln();
                        best = best.max(ln_sup_window(&ln_tail, s, s + 300.0));
                        best = best.max(m.ln() + b.scale().ln() + b.sig_inf().ln_factor(1e9));
                    }
                },
                Ordering::Less => {
                    let ln_tail = |u: f64| ep * u + b.ln_eval(u) + m.ln();
                    let s = f.support().ln();
                    let reach = (150.0 / ep.abs()).min(4000.0);
                    best = best.max(ln_sup_window(&ln_tail, s, s + reach));
                }
            }
        }
    }

    NormValue {
        ln_value: best,
        divergent: false,
        est_rel_err: 1e-6,
    }
}

/// The fundamental function `φ(t) = ‖χ_E‖` for `μ(E) = t`, using the
/// spec's own functional (star or not).
pub fn fundamental_function(spec: &SpaceSpec, t: f64) -> Result<NormValue> {
    if !(t > 0.0) || t > spec.mu_r {
        return Err(Error::Domain(format!(
            "fundamental function needs 0 < t ≤ mu ({}), got {t}",
            fmt_ext(spec.mu_r)
        )));
    }
    Ok(space_norm(spec, &DecreasingStep::characteristic(t)))
}

/// The two endpoint-space norms attached to a fundamental-function handle:
/// the Lorentz norm `∫ f* dφ` (exact Stieltjes sum over the pieces) and the
/// Marcinkiewicz norm `sup φ(t) f**(t)` (refined-grid supremum with the last
/// refinement movement reported as residual).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EndpointNorms {
    pub lorentz: f64,
    pub marcinkiewicz: f64,
    pub marcinkiewicz_residual: f64,
}

pub fn endpoint_norms(
    phi: &dyn Fn(f64) -> f64,
    fstar: &DecreasingStep,
    mu_r: f64,
) -> Result<EndpointNorms> {
    // Lorentz: Σ v_i (φ(a_{i+1}) − φ(a_i))
    let mut lorentz = 0.0;
    let mut prev_phi = phi(0.0);
    let mut scale = prev_phi.abs();
    for i in 0..fstar.len() {
        let hi = fstar.breakpoints()[i].min(mu_r);
        let lo = fstar.left_edge(i);
        if hi <= lo {
            break;
        }
        let next_phi = phi(hi);
        scale = scale.max(next_phi.abs());
        if next_phi < prev_phi - 1e-12 * (1.0 + scale) {
            return Err(Error::Validation(format!(
                "fundamental-function handle is not non-decreasing at t={hi}"
            )));
        }
        lorentz += fstar.values()[i] * (next_phi - prev_phi);
        prev_phi = next_phi;
    }

    if fstar.is_zero() {
        return Ok(EndpointNorms {
            lorentz: 0.0,
            marcinkiewicz: 0.0,
            marcinkiewicz_residual: 0.0,
        });
    }

    // Marcinkiewicz: sup over (0, mu_r) of φ(t) f**(t) on a refining log grid
    let support = fstar.support();
    let lo = (support * 1e-6).min(fstar.breakpoints()[0] * 1e-3);
    let hi = if mu_r.is_finite() {
        mu_r
    } else {
        support * 1e6
    };
    let mut n = 64usize;
    let mut prev = f64::NEG_INFINITY;
    let mut residual;
    loop {
        let mut m = f64::NEG_INFINITY;
        for k in 0..=n {
            let t = (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / n as f64).exp();
            m = m.max(phi(t) * crate::rearrange::maximal(fstar, t));
        }
        residual = (m - prev).abs();
        if residual <= 1e-9 * (1.0 + m.abs()) || n >= 8192 {
            prev = m.max(prev);
            break;
        }
        prev = m;
        n *= 2;
    }
    Ok(EndpointNorms {
        lorentz,
        marcinkiewicz: prev,
        marcinkiewicz_residual: residual,
    })
}
