//! Distribution functions, non-increasing rearrangements and maximal
//! functions of simple functions, computed exactly.
//!
//! A [`StepFunction`] is an order-free bag of `(value, mass)` pieces over a
//! non-atomic measure space; only the value distribution matters. Its
//! rearrangement [`DecreasingStep`] lives on `[0, ∞)`: sort the pieces by
//! value, accumulate the masses into breakpoints. All integrals below are
//! finite sums of products, so the only arithmetic error is f64 rounding.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// A simple function given as unordered `(value, mass)` pieces.
///
/// Values are non-negative and finite. Masses are positive; a piece may
/// carry infinite mass only when its value is 0 (an explicit marker for an
/// infinite-measure zero set), so the rearrangement support stays finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pieces: Vec<(f64, f64)>,
}

impl StepFunction {
    pub fn new(pieces: Vec<(f64, f64)>) -> Result<Self> {
        for &(v, m) in &pieces {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Validation(format!(
                    "piece value must be finite and non-negative, got {v}"
                )));
            }
            if !(m > 0.0) {
                return Err(Error::Validation(format!(
                    "piece mass must be positive, got {m}"
                )));
            }
            if m.is_infinite() && v != 0.0 {
                return Err(Error::Validation(
                    "infinite mass is only allowed on the zero-value tail marker".into(),
                ));
            }
        }
        Ok(StepFunction { pieces })
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    /// Total mass of the pieces with strictly positive value.
    pub fn support_mass(&self) -> f64 {
        self.pieces
            .iter()
            .filter(|(v, _)| *v > 0.0)
            .map(|(_, m)| m)
            .sum()
    }

    /// Reads the CSV format: one `value,mass` pair per line, `#` comments.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut pieces = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let data = line.split('#').next().unwrap_or("").trim();
            if data.is_empty() {
                continue;
            }
            let fields: Vec<&str> = data.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    pos: lineno + 1,
                    msg: format!("expected 'value,mass', got '{data}'"),
                });
            }
            let v: f64 = fields[0].parse().map_err(|_| Error::Parse {
                pos: lineno + 1,
                msg: format!("bad value '{}'", fields[0]),
            })?;
            let m: f64 = if fields[1] == "inf" {
                f64::INFINITY
            } else {
                fields[1].parse().map_err(|_| Error::Parse {
                    pos: lineno + 1,
                    msg: format!("bad mass '{}'", fields[1]),
                })?
            };
            pieces.push((v, m));
        }
        StepFunction::new(pieces)
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for &(v, m) in &self.pieces {
            writeln!(w, "{v},{m}")?;
        }
        Ok(())
    }
}

/// The distribution function `μ_f(s)`: total mass where the value exceeds `s`.
pub fn distribution(f: &StepFunction, s: f64) -> f64 {
    assert!(s >= 0.0, "distribution is defined for s ≥ 0");
    f.pieces
        .iter()
        .filter(|(v, _)| *v > s)
        .map(|(_, m)| m)
        .sum()
}

/// A non-increasing right-continuous step function on `[0, ∞)`, zero beyond
/// its last breakpoint: the canonical form of a rearrangement `f*`.
///
/// Stored as strictly decreasing positive values `v_1 > v_2 > … > v_n > 0`
/// on `[a_0, a_1), …, [a_{n-1}, a_n)` with `a_0 = 0`; equal adjacent values
/// are coalesced on construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecreasingStep {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    #[serde(skip)]
    prefix_area: std::cell::OnceCell<Vec<f64>>,
}

impl PartialEq for DecreasingStep {
    fn eq(&self, other: &Self) -> bool {
        self.breakpoints == other.breakpoints && self.values == other.values
    }
}

impl DecreasingStep {
    /// Builds from `(value, width)` runs in the given order; the runs must
    /// already be non-increasing in value.
    pub fn from_runs(runs: &[(f64, f64)]) -> Result<Self> {
        let mut breakpoints = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut edge = 0.0f64;
        for &(v, w) in runs {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Validation(format!("bad run value {v}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Validation(format!("bad run width {w}")));
            }
            if let Some(&last) = values.last() {
                if v > last {
                    return Err(Error::Validation(format!(
                        "runs must be non-increasing: {v} after {last}"
                    )));
                }
            }
            edge += w;
            if v == 0.0 {
                continue; // zero tail is implicit
            }
            if values.last() == Some(&v) {
                *breakpoints.last_mut().unwrap() = edge;
            } else {
                values.push(v);
                breakpoints.push(edge);
            }
        }
        Ok(DecreasingStep {
            breakpoints,
            values,
            prefix_area: std::cell::OnceCell::new(),
        })
    }

    /// The zero function.
    pub fn zero() -> Self {
        DecreasingStep::from_runs(&[]).unwrap()
    }

    /// `χ_(0,m)` as a rearrangement.
    pub fn characteristic(m: f64) -> Self {
        DecreasingStep::from_runs(&[(1.0, m)]).expect("positive mass")
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of constancy pieces.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Right edge of the support.
    pub fn support(&self) -> f64 {
        *self.breakpoints.last().unwrap_or(&0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Breakpoints `a_1 < … < a_n` (the implicit `a_0 = 0` is omitted).
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Left edge of piece `i`.
    pub fn left_edge(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.breakpoints[i - 1]
        }
    }

    /// Right-continuous evaluation: `value_at(a_i)` is the value of the
    /// piece starting at `a_i`.
    pub fn value_at(&self, t: f64) -> f64 {
        assert!(t >= 0.0);
        match self
            .breakpoints
            .binary_search_by(|a| a.partial_cmp(&t).unwrap())
        {
            Ok(i) => {
                if i + 1 < self.values.len() {
                    self.values[i + 1]
                } else {
                    0.0
                }
            }
            Err(i) => {
                if i < self.values.len() {
                    self.values[i]
                } else {
                    0.0
                }
            }
        }
    }

    fn prefix_areas(&self) -> &[f64] {
        self.prefix_area.get_or_init(|| {
            let mut acc = 0.0;
            let mut out = Vec::with_capacity(self.values.len() + 1);
            out.push(0.0);
            for i in 0..self.values.len() {
                acc += self.values[i] * (self.breakpoints[i] - self.left_edge(i));
                out.push(acc);
            }
            out
        })
    }

    /// `∫_0^t` of the step function, exact per piece.
    pub fn integral_up_to(&self, t: f64) -> f64 {
        assert!(t >= 0.0);
        let pre = self.prefix_areas();
        match self
            .breakpoints
            .binary_search_by(|a| a.partial_cmp(&t).unwrap())
        {
            Ok(i) => pre[i + 1],
            Err(i) => {
                if i >= self.values.len() {
                    pre[self.values.len()]
                } else {
                    pre[i] + self.values[i] * (t - self.left_edge(i))
                }
            }
        }
    }

    /// Total area `∫_0^∞`.
    pub fn total_integral(&self) -> f64 {
        *self.prefix_areas().last().unwrap()
    }

    /// Restriction to `(0, m)`, dropping or clipping pieces beyond.
    pub fn truncated(&self, m: f64) -> DecreasingStep {
        assert!(m > 0.0);
        let mut runs = Vec::new();
        for i in 0..self.values.len() {
            let lo = self.left_edge(i);
            let hi = self.breakpoints[i];
            if lo >= m {
                break;
            }
            runs.push((self.values[i], hi.min(m) - lo));
        }
        DecreasingStep::from_runs(&runs).expect("truncation preserves monotonicity")
    }

    /// Distribution function of the step itself (value-level sections).
    pub fn distribution(&self, s: f64) -> f64 {
        assert!(s >= 0.0);
        // values are strictly decreasing: pieces 0..i have value > s
        let i = match self
            .values
            .binary_search_by(|v| s.partial_cmp(v).unwrap())
        {
            Ok(i) | Err(i) => i,
        };
        if i == 0 {
            0.0
        } else {
            self.breakpoints[i - 1]
        }
    }
}

/// The non-increasing rearrangement: sort pieces by value descending and
/// accumulate masses into breakpoints. Equimeasurable with the input by
/// construction; idempotent on already-sorted input.
pub fn rearrange(f: &StepFunction) -> DecreasingStep {
    let mut pos: Vec<(f64, f64)> = f
        .pieces
        .iter()
        .filter(|(v, _)| *v > 0.0)
        .cloned()
        .collect();
    pos.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    DecreasingStep::from_runs(&pos).expect("sorted pieces are non-increasing")
}

/// The maximal function `f**(t) = (1/t) ∫_0^t f*`, evaluated exactly.
pub fn maximal(fstar: &DecreasingStep, t: f64) -> f64 {
    assert!(t > 0.0, "maximal function needs t > 0, got {t}");
    fstar.integral_up_to(t) / t
}

/// Pairs `(f, g)` on a shared partition, for the two sides of the
/// Hardy–Littlewood inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointStepFunction {
    pieces: Vec<(f64, f64, f64)>,
}

impl JointStepFunction {
    pub fn new(pieces: Vec<(f64, f64, f64)>) -> Result<Self> {
        for &(fv, gv, m) in &pieces {
            if !(fv.is_finite() && fv >= 0.0 && gv.is_finite() && gv >= 0.0) {
                return Err(Error::Validation(format!("bad joint values ({fv}, {gv})")));
            }
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::Validation(format!("bad joint mass {m}")));
            }
        }
        Ok(JointStepFunction { pieces })
    }

    pub fn pieces(&self) -> &[(f64, f64, f64)] {
        &self.pieces
    }

    pub fn f_marginal(&self) -> StepFunction {
        StepFunction::new(self.pieces.iter().map(|&(f, _, m)| (f, m)).collect()).unwrap()
    }

    pub fn g_marginal(&self) -> StepFunction {
        StepFunction::new(self.pieces.iter().map(|&(_, g, m)| (g, m)).collect()).unwrap()
    }

    /// Pointwise sum `f + g` as a plain step function on the partition.
    pub fn pointwise_sum(&self) -> StepFunction {
        StepFunction::new(self.pieces.iter().map(|&(f, g, m)| (f + g, m)).collect()).unwrap()
    }

    /// CSV format `fvalue,gvalue,mass`, `#` comments.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut pieces = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let data = line.split('#').next().unwrap_or("").trim();
            if data.is_empty() {
                continue;
            }
            let fields: Vec<&str> = data.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    pos: lineno + 1,
                    msg: format!("expected 'fvalue,gvalue,mass', got '{data}'"),
                });
            }
            let nums: Result<Vec<f64>> = fields
                .iter()
                .map(|s| {
                    s.parse::<f64>().map_err(|_| Error::Parse {
                        pos: lineno + 1,
                        msg: format!("bad number '{s}'"),
                    })
                })
                .collect();
            let nums = nums?;
            pieces.push((nums[0], nums[1], nums[2]));
        }
        JointStepFunction::new(pieces)
    }
}

/// Exact integral of the product of two decreasing steps over `[0, ∞)`.
pub fn product_integral(a: &DecreasingStep, b: &DecreasingStep) -> f64 {
    let mut total = 0.0;
    let mut edge = 0.0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        let next = a.breakpoints[i].min(b.breakpoints[j]);
        total += a.values[i] * b.values[j] * (next - edge);
        edge = next;
        if a.breakpoints[i] <= edge {
            i += 1;
        }
        if j < b.len() && b.breakpoints[j] <= edge {
            j += 1;
        }
    }
    total
}

/// Both sides of the Hardy–Littlewood inequality for a joint pair:
/// `lhs = ∫ |fg| dμ` over the shared partition, `rhs = ∫_0^∞ f* g* dλ`.
/// `lhs ≤ rhs` always; equality when the pair is comonotone.
pub fn pair_integrals(h: &JointStepFunction) -> (f64, f64) {
    let lhs: f64 = h.pieces.iter().map(|&(f, g, m)| f * g * m).sum();
    let fstar = rearrange(&h.f_marginal());
    let gstar = rearrange(&h.g_marginal());
    (lhs, product_integral(&fstar, &gstar))
}
