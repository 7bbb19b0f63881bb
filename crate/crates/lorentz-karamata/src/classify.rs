//! The decision procedures: non-triviality and norm status of one space,
//! embeddings between two spaces, associate spaces.
//!
//! Every verdict is total over well-formed inputs and carries the identifier
//! of the decision rule it applied (`LQ`, `PP4-2`, `TELK-2a`, `TAS-i`, …),
//! plus the individual conditions that were evaluated, so a verdict can be
//! audited without re-running anything. All conditions reduce to
//! lexicographic comparisons and integrability rules on growth keys; no
//! quadrature is involved, which keeps the procedures exact and fast. The
//! numeric cross-examination lives in [`crate::verify`].

use crate::norm::SpaceSpec;
use crate::sv::{
    snap_cmp, sup_transform, tilde_hat_transform, Endpoint, EndpointSignature, GrowthKey,
    SupKind, SupTransformResult, TildeHatResult, TransformKind,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

/// Comparison that treats `∞` explicitly (snap-based on finite values).
fn cmp_ext(x: f64, y: f64) -> Ordering {
    match (x.is_infinite(), y.is_infinite()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => snap_cmp(x, y),
    }
}

/// The conjugate exponent: `q/(q−1)` for `q ∈ (1, ∞)`, `1` for `q = ∞`,
/// `∞` for `q = 1`. `None` for `q ∈ (0, 1)`, where no conjugate is assigned.
pub fn conjugate(q: f64) -> Option<f64> {
    assert!(q > 0.0, "conjugate needs q ∈ (0, ∞]");
    if q.is_infinite() {
        return Some(1.0);
    }
    match snap_cmp(q, 1.0) {
        Ordering::Less => None,
        Ordering::Equal => Some(f64::INFINITY),
        Ordering::Greater => Some(q / (q - 1.0)),
    }
}

/// Three-valued answer for the local-embedding-into-L¹ property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum P5Verdict {
    Yes,
    No,
    Unknown,
}

/// Leading data of the fundamental function: `φ(t) ≍ t^exponent · b(t)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FundamentalSignature {
    pub exponent: f64,
    pub sig0: EndpointSignature,
    #[serde(rename = "sigInf")]
    pub sig_inf: EndpointSignature,
}

/// Everything the single-space characterisations decide.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// The `f*` functional is non-trivial (equivalently, it is an r.i.
    /// quasi-Banach function norm).
    pub nontrivial: bool,
    pub quasi_banach: bool,
    /// The `f**` functional is non-trivial.
    pub star_nontrivial: bool,
    /// The space admits an equivalent Banach function norm.
    pub banach_equivalent: bool,
    pub p5: P5Verdict,
    /// The `f*` and `f**` spaces coincide (iff `p > 1`).
    pub equals_star: bool,
    pub fundamental_signature: FundamentalSignature,
    pub citations: Vec<String>,
}

/// `b` equivalent to a non-increasing function: non-vanishing at 0,
/// non-exploding at ∞.
fn equiv_nonincreasing(b: &crate::sv::SlowlyVaryingFunction) -> bool {
    b.sig0().lex_sign() != Ordering::Less && b.sig_inf().lex_sign() != Ordering::Greater
}

/// The non-triviality guard for the `f*` functional at `p = ∞`:
/// `‖t^{−1/q} b χ_(0,1)‖_q < ∞`.
fn zero_guard(spec: &SpaceSpec) -> bool {
    if spec.q_is_infinite() {
        spec.b.sig0().lex_sign() != Ordering::Greater
    } else {
        crate::sv::endpoint_integrability(&spec.b, spec.q, 0.0, Endpoint::Zero)
    }
}

/// The `p = 1` guard for the `f**` functional:
/// `‖t^{−1/q} b χ_(1,∞)‖_q < ∞`.
fn infinity_guard(spec: &SpaceSpec) -> bool {
    if spec.q_is_infinite() {
        spec.b.sig_inf().lex_sign() != Ordering::Greater
    } else {
        crate::sv::endpoint_integrability(&spec.b, spec.q, 0.0, Endpoint::Infinity)
    }
}

/// Non-triviality of the `f*` functional.
pub(crate) fn nontrivial_plain(spec: &SpaceSpec) -> bool {
    !spec.p_is_infinite() || zero_guard(spec)
}

/// Non-triviality of the `f**` functional.
pub(crate) fn nontrivial_star(spec: &SpaceSpec) -> bool {
    if spec.p_is_infinite() {
        return zero_guard(spec);
    }
    match snap_cmp(spec.p, 1.0) {
        Ordering::Greater => true,
        Ordering::Equal => infinity_guard(spec),
        Ordering::Less => false,
    }
}

/// Full classification of one space. Total: every well-formed spec gets a
/// report with at least one citation.
pub fn classify_space(spec: &SpaceSpec) -> ClassificationReport {
    let mut citations = Vec::new();
    let b = &spec.b;

    let nontrivial = nontrivial_plain(spec);
    citations.push("LQ".to_string());

    let star_nontrivial = nontrivial_star(spec);
    let pp4_case = if spec.p_is_infinite() {
        "PP4-3"
    } else {
        match snap_cmp(spec.p, 1.0) {
            Ordering::Greater => "PP4-1",
            Ordering::Equal => "PP4-2",
            Ordering::Less => "PP4-none",
        }
    };
    citations.push(pp4_case.to_string());

    let q_at_least_one = cmp_ext(spec.q, 1.0) != Ordering::Less;
    let (banach_equivalent, tlkbfs_case) = if !q_at_least_one {
        (false, "TLKBFS-none")
    } else if spec.p_is_infinite() {
        (zero_guard(spec), "TLKBFS-ii")
    } else {
        match snap_cmp(spec.p, 1.0) {
            Ordering::Greater => (true, "TLKBFS-i"),
            Ordering::Equal => {
                if cmp_ext(spec.q, 1.0) == Ordering::Equal && equiv_nonincreasing(b) {
                    (true, "TLKBFS-iii")
                } else {
                    (false, "TLKBFS-none")
                }
            }
            Ordering::Less => (false, "TLKBFS-none"),
        }
    };
    citations.push(tlkbfs_case.to_string());

    let (p5, p5_rule) = if cmp_ext(spec.p, 1.0) == Ordering::Greater {
        (P5Verdict::Yes, "CP5")
    } else if cmp_ext(spec.p, 1.0) == Ordering::Less {
        (P5Verdict::No, "PAS")
    } else {
        // p = 1; within the family "b vanishes at 0" and "b bounded below
        // near 0" are complementary
        let vanishes = b.sig0().lex_sign() == Ordering::Less;
        if vanishes {
            if q_at_least_one {
                (P5Verdict::No, "CP5b-2")
            } else {
                (P5Verdict::Unknown, "LP5-gap")
            }
        } else if cmp_ext(spec.q, 1.0) != Ordering::Greater {
            (P5Verdict::Yes, "CP5b-1")
        } else {
            (P5Verdict::Unknown, "LP5-gap")
        }
    };
    citations.push(p5_rule.to_string());

    let equals_star = cmp_ext(spec.p, 1.0) == Ordering::Greater;
    citations.push("CEQNa".to_string());

    ClassificationReport {
        nontrivial,
        quasi_banach: nontrivial,
        star_nontrivial,
        banach_equivalent,
        p5,
        equals_star,
        fundamental_signature: FundamentalSignature {
            exponent: if spec.p_is_infinite() { 0.0 } else { 1.0 / spec.p },
            sig0: b.sig0(),
            sig_inf: b.sig_inf(),
        },
        citations,
    }
}

/// One named boolean evaluated on the way to a verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub value: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum EmbeddingOutcome {
    Holds { case: String },
    Fails { reason: String },
}

/// Verdict on `src ↪ dst`, with the governing rule, the evaluated
/// conditions, and (for failures) the witness recipe that exhibits the gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingVerdict {
    #[serde(flatten)]
    pub outcome: EmbeddingOutcome,
    pub conditions: Vec<Condition>,
    pub citations: Vec<String>,
    pub witness_recipe: Option<String>,
}

impl EmbeddingVerdict {
    pub fn holds(&self) -> bool {
        matches!(self.outcome, EmbeddingOutcome::Holds { .. })
    }

    pub fn case_id(&self) -> &str {
        match &self.outcome {
            EmbeddingOutcome::Holds { case } => case,
            EmbeddingOutcome::Fails { reason } => reason,
        }
    }
}

struct VerdictBuilder {
    conditions: Vec<Condition>,
    citations: Vec<String>,
}

impl VerdictBuilder {
    fn new() -> Self {
        VerdictBuilder {
            conditions: Vec::new(),
            citations: Vec::new(),
        }
    }

    fn cond(&mut self, name: &str, value: bool) -> bool {
        self.conditions.push(Condition {
            name: name.to_string(),
            value,
        });
        value
    }

    fn cite(&mut self, id: &str) {
        self.citations.push(id.to_string());
    }

    fn holds(mut self, case: &str) -> EmbeddingVerdict {
        self.cite(case);
        EmbeddingVerdict {
            outcome: EmbeddingOutcome::Holds {
                case: case.to_string(),
            },
            conditions: self.conditions,
            citations: self.citations,
            witness_recipe: None,
        }
    }

    fn fails(mut self, reason: &str, witness: Option<&str>) -> EmbeddingVerdict {
        self.cite(reason);
        EmbeddingVerdict {
            outcome: EmbeddingOutcome::Fails {
                reason: reason.to_string(),
            },
            conditions: self.conditions,
            citations: self.citations,
            witness_recipe: witness.map(str::to_string),
        }
    }

    fn decided(self, ok: bool, case: &str, witness: Option<&str>) -> EmbeddingVerdict {
        if ok {
            self.holds(case)
        } else {
            self.fails(case, witness)
        }
    }
}

/// Effective signature of `b` as the functional sees it. A sup-norm
/// limiting space (`p = q = ∞`) only sees `b` through its running sup, so
/// its infinity signature is monotonized (its zero signature is ≤ 0 once
/// the non-triviality guard has passed, and the running sup keeps it).
fn effective_sig(spec: &SpaceSpec, end: Endpoint) -> EndpointSignature {
    let sig = spec.b.endpoint_signature(end);
    if spec.p_is_infinite() && spec.q_is_infinite() && end == Endpoint::Infinity {
        sig.max_lex(EndpointSignature::ZERO)
    } else {
        sig
    }
}

fn key0(spec: &SpaceSpec, power: f64) -> GrowthKey {
    GrowthKey::from_sig(effective_sig(spec, Endpoint::Zero)).scaled(power)
}

fn key_inf(spec: &SpaceSpec, power: f64) -> GrowthKey {
    GrowthKey::from_sig(effective_sig(spec, Endpoint::Infinity)).scaled(power)
}

/// Asymptotic key of `tilde(b^q)` at one end; total under the zero guard.
fn tilde_key(spec: &SpaceSpec, end: Endpoint) -> GrowthKey {
    use crate::sv::EndKey;
    match crate::sv::transform_end_key(
        key0(spec, spec.q),
        key_inf(spec, spec.q),
        TransformKind::Tilde,
        end,
    ) {
        EndKey::Asym { key, .. } => key,
        EndKey::Const => GrowthKey::ZERO,
        // the guard guarantees zero-side convergence, and one transform of a
        // δ=0 key never needs a fifth slot
        EndKey::Diverges | EndKey::Unrepresentable => unreachable!("guarded tilde key"),
    }
}

/// Decides `src ↪ dst` over a shared underlying measure of total mass
/// `mu_r`. Total for well-formed inputs; spaces failing their own
/// non-triviality guard yield `Fails(TrivialSource/TrivialTarget)`.
pub fn decide_embedding(src: &SpaceSpec, dst: &SpaceSpec, mu_r: f64) -> EmbeddingVerdict {
    assert!(mu_r > 0.0, "mu_r must be positive (∞ allowed)");
    let mut vb = VerdictBuilder::new();

    if src.p_is_infinite() {
        let ok = vb.cond("source_nontrivial", nontrivial_plain(src));
        if !ok {
            vb.cite("LQ");
            return vb.fails("TrivialSource", None);
        }
    }
    if dst.p_is_infinite() {
        let ok = vb.cond("target_nontrivial", nontrivial_plain(dst));
        if !ok {
            vb.cite("LQ");
            return vb.fails("TrivialTarget", None);
        }
    }

    let mu_finite = mu_r.is_finite();
    match cmp_ext(src.p, dst.p) {
        Ordering::Less => {
            vb.cond("p_source_less_than_target", true);
            vb.fails("TELK-4", Some("CaseP1LessP2"))
        }
        Ordering::Greater => {
            let ok = vb.cond("mu_finite", mu_finite);
            vb.decided(ok, "TELK-1", Some("CaseP1GreaterP2InfMeasure"))
        }
        Ordering::Equal => decide_same_p(src, dst, mu_finite, vb),
    }
}

fn decide_same_p(
    src: &SpaceSpec,
    dst: &SpaceSpec,
    mu_finite: bool,
    mut vb: VerdictBuilder,
) -> EmbeddingVerdict {
    let p_inf = src.p_is_infinite();
    match cmp_ext(src.q, dst.q) {
        Ordering::Less | Ordering::Equal => {
            let q_strictly_less = cmp_ext(src.q, dst.q) == Ordering::Less;
            if !p_inf || (src.q_is_infinite() && dst.q_is_infinite()) {
                // ratio b2/b1 bounded on (0, mu)
                let zero_ok = vb.cond(
                    "ratio_bounded_at_zero",
                    dst.b.sig0().lex_cmp(&src.b.sig0()) != Ordering::Greater,
                );
                let inf_ok = if mu_finite {
                    true
                } else {
                    vb.cond(
                        "ratio_bounded_at_infinity",
                        dst.b.sig_inf().lex_cmp(&src.b.sig_inf()) != Ordering::Greater,
                    )
                };
                let case = if p_inf {
                    "TELK-2d"
                } else if q_strictly_less && zero_ok && inf_ok {
                    "PELK"
                } else {
                    "TELK-2a"
                };
                let witness = Some("CharacteristicSweep");
                if zero_ok && inf_ok {
                    vb.holds(case)
                } else {
                    vb.fails(if p_inf { "TELK-2d" } else { "TELK-2a" }, witness)
                }
            } else if !src.q_is_infinite() && !dst.q_is_infinite() {
                // p = ∞, both q finite: tilde-ratio sup condition
                let t1z = tilde_key(src, Endpoint::Zero).scaled(1.0 / src.q);
                let t2z = tilde_key(dst, Endpoint::Zero).scaled(1.0 / dst.q);
                let zero_ok = vb.cond(
                    "tilde_ratio_bounded_at_zero",
                    t2z.lex_cmp(&t1z) != Ordering::Greater,
                );
                let inf_ok = if mu_finite {
                    true
                } else {
                    let t1i = tilde_key(src, Endpoint::Infinity).scaled(1.0 / src.q);
                    let t2i = tilde_key(dst, Endpoint::Infinity).scaled(1.0 / dst.q);
                    vb.cond(
                        "tilde_ratio_bounded_at_infinity",
                        t2i.lex_cmp(&t1i) != Ordering::Greater,
                    )
                };
                vb.decided(zero_ok && inf_ok, "TELK-2b", Some("CharacteristicSweep"))
            } else {
                // p = ∞, q1 < q2 = ∞: b2 against tilde(b1^{q1})^{1/q1}
                let t1z = tilde_key(src, Endpoint::Zero).scaled(1.0 / src.q);
                let b2z = key0(dst, 1.0);
                let zero_ok = vb.cond(
                    "target_b_bounded_by_tilde_at_zero",
                    b2z.lex_cmp(&t1z) != Ordering::Greater,
                );
                let inf_ok = if mu_finite {
                    true
                } else {
                    let t1i = tilde_key(src, Endpoint::Infinity).scaled(1.0 / src.q);
                    let b2i = key_inf(dst, 1.0);
                    vb.cond(
                        "target_b_bounded_by_tilde_at_infinity",
                        b2i.lex_cmp(&t1i) != Ordering::Greater,
                    )
                };
                vb.decided(zero_ok && inf_ok, "TELK-2c", Some("CharacteristicSweep"))
            }
        }
        Ordering::Greater => {
            // q1 > q2: integral conditions with 1/r = 1/q2 − 1/q1
            let r = if src.q_is_infinite() {
                dst.q
            } else {
                1.0 / (1.0 / dst.q - 1.0 / src.q)
            };
            if !p_inf || src.q_is_infinite() {
                // ∫ t^{-1} (b2/b1)^r dt over (0, mu)
                let diff0 = key0(dst, 1.0).sub(key0(src, 1.0)).scaled(r);
                let zero_ok = vb.cond("quotient_integrable_at_zero", diff0.integral_converges());
                let inf_ok = if mu_finite {
                    true
                } else {
                    let diff_inf = key_inf(dst, 1.0).sub(key_inf(src, 1.0)).scaled(r);
                    vb.cond(
                        "quotient_integrable_at_infinity",
                        diff_inf.integral_converges(),
                    )
                };
                let case = if p_inf { "TELK-3c" } else { "TELK-3a" };
                vb.decided(zero_ok && inf_ok, case, Some("QGapProfile"))
            } else {
                // p = ∞, q2 < q1 < ∞: tilde-quotient integral condition
                let g_at = |end: Endpoint| {
                    let t1 = tilde_key(src, end);
                    let t2 = tilde_key(dst, end);
                    let bkey = match end {
                        Endpoint::Zero => key0(dst, dst.q),
                        Endpoint::Infinity => key_inf(dst, dst.q),
                    };
                    t2.sub(t1).scaled(r / src.q).add(bkey)
                };
                let zero_ok = vb.cond(
                    "tilde_quotient_integrable_at_zero",
                    g_at(Endpoint::Zero).integral_converges(),
                );
                let inf_ok = if mu_finite {
                    true
                } else {
                    vb.cond(
                        "tilde_quotient_integrable_at_infinity",
                        g_at(Endpoint::Infinity).integral_converges(),
                    )
                };
                vb.decided(zero_ok && inf_ok, "TELK-3b", Some("QGapProfile"))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AssociateOutcome {
    /// The associate space, as an explicit spec (star form where the rules
    /// produce one).
    Space { spec: SpaceSpec },
    /// The associate space contains only the zero function.
    Zero,
    /// The rules do not characterise this input (including the open
    /// sublimiting case).
    NotCharacterized { reason: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssociateReport {
    #[serde(flatten)]
    pub outcome: AssociateOutcome,
    pub conditions: Vec<Condition>,
    pub citations: Vec<String>,
}

impl AssociateReport {
    pub fn space(&self) -> Option<&SpaceSpec> {
        match &self.outcome {
            AssociateOutcome::Space { spec } => Some(spec),
            _ => None,
        }
    }
}

/// The associate space of the `f*` space. Star-form inputs are not
/// supported (their associates are outside the rule set).
pub fn associate_space(spec: &SpaceSpec) -> Result<AssociateReport> {
    if spec.star {
        return Err(Error::Unsupported(
            "associate spaces are computed for the f* form only".into(),
        ));
    }
    let mut conditions = Vec::new();
    let mut cond = |name: &str, value: bool| {
        conditions.push(Condition {
            name: name.to_string(),
            value,
        });
        value
    };
    let report = |outcome, conditions: Vec<Condition>, citations: Vec<&str>| {
        Ok(AssociateReport {
            outcome,
            conditions,
            citations: citations.into_iter().map(str::to_string).collect(),
        })
    };
    let space = |p: f64, q: f64, b: crate::sv::SlowlyVaryingFunction, star: bool| {
        AssociateOutcome::Space {
            spec: SpaceSpec {
                p,
                q,
                b,
                mu_r: spec.mu_r,
                star,
            },
        }
    };

    let b = &spec.b;
    // p < 1: the associate is trivial
    if cmp_ext(spec.p, 1.0) == Ordering::Less {
        return report(AssociateOutcome::Zero, conditions, vec!["PAS"]);
    }

    // q ∈ (1, ∞)
    if !spec.q_is_infinite() && snap_cmp(spec.q, 1.0) == Ordering::Greater {
        let qc = conjugate(spec.q).expect("q > 1");
        if !spec.p_is_infinite() {
            let pc = conjugate(spec.p).unwrap_or(f64::INFINITY);
            return report(space(pc, qc, b.recip(), true), conditions, vec!["TAS-i"]);
        }
        // p = ∞: the sublimiting rule needs its divergence + sup conditions
        if !cond("space_nontrivial", nontrivial_plain(spec)) {
            return report(
                AssociateOutcome::NotCharacterized {
                    reason: "space is trivial".into(),
                },
                conditions,
                vec!["LQ"],
            );
        }
        let diverges = cond(
            "b_q_norm_diverges_at_infinity",
            !crate::sv::endpoint_integrability(b, spec.q, 0.0, Endpoint::Infinity),
        );
        // sup_t tilde(b^q)(t)^{1/q} · hat(b^{-q'})(t)^{1/q'} < ∞
        let bneg = b.powf(-qc);
        let hat_finite = cond(
            "hat_of_b_conjugate_finite",
            GrowthKey::from_sig(bneg.sig_inf()).integral_converges(),
        );
        let sup_ok = hat_finite && {
            let hat_at = |end: Endpoint| {
                use crate::sv::EndKey;
                match crate::sv::transform_end_key(
                    GrowthKey::from_sig(bneg.sig0()),
                    GrowthKey::from_sig(bneg.sig_inf()),
                    TransformKind::Hat,
                    end,
                ) {
                    EndKey::Asym { key, .. } => key,
                    EndKey::Const => GrowthKey::ZERO,
                    EndKey::Diverges | EndKey::Unrepresentable => GrowthKey::ZERO,
                }
            };
            let product_end = |end: Endpoint| {
                tilde_key(spec, end)
                    .scaled(1.0 / spec.q)
                    .add(hat_at(end).scaled(1.0 / qc))
                    .lex_sign()
                    != Ordering::Greater
            };
            let z = product_end(Endpoint::Zero);
            let i = product_end(Endpoint::Infinity);
            z && i
        };
        cond("tilde_hat_product_bounded", sup_ok);
        if diverges && sup_ok {
            return report(space(1.0, qc, b.recip(), true), conditions, vec!["TAS-ii"]);
        }
        return report(
            AssociateOutcome::NotCharacterized {
                reason: "sublimiting case: the divergence/sup conditions do not hold".into(),
            },
            conditions,
            vec!["TAS-ii"],
        );
    }

    // q ≤ 1
    if !spec.q_is_infinite() && snap_cmp(spec.q, 1.0) != Ordering::Greater {
        if !spec.p_is_infinite() {
            match snap_cmp(spec.p, 1.0) {
                Ordering::Greater => {
                    let pc = conjugate(spec.p).expect("p > 1");
                    return report(
                        space(pc, f64::INFINITY, b.recip(), true),
                        conditions,
                        vec!["T2AS-1"],
                    );
                }
                Ordering::Equal => {
                    if cond("b_equivalent_nonincreasing", equiv_nonincreasing(b)) {
                        return report(
                            space(f64::INFINITY, f64::INFINITY, b.recip(), true),
                            conditions,
                            vec!["T2AS-1"],
                        );
                    }
                    return report(
                        AssociateOutcome::NotCharacterized {
                            reason: "p = 1, q ≤ 1 with b not equivalent to non-increasing".into(),
                        },
                        conditions,
                        vec!["T2AS-1"],
                    );
                }
                Ordering::Less => unreachable!("handled by the p < 1 rule"),
            }
        }
        // p = ∞
        if snap_cmp(spec.q, 1.0) == Ordering::Equal {
            if cond(
                "tilde_converges_at_zero",
                crate::sv::endpoint_integrability(b, 1.0, 0.0, Endpoint::Zero),
            ) {
                match tilde_hat_transform(b, TransformKind::Tilde) {
                    TildeHatResult::Sv(tb) => {
                        return report(
                            space(1.0, f64::INFINITY, tb.recip(), true),
                            conditions,
                            vec!["T2AS-2"],
                        );
                    }
                    TildeHatResult::Diverges => unreachable!("guarded by the condition"),
                    TildeHatResult::Unrepresentable => {
                        return report(
                            AssociateOutcome::NotCharacterized {
                                reason: "tilde transform falls outside the signature family"
                                    .into(),
                            },
                            conditions,
                            vec!["T2AS-2"],
                        );
                    }
                }
            }
            return report(
                AssociateOutcome::NotCharacterized {
                    reason: "space is trivial".into(),
                },
                conditions,
                vec!["T2AS-2", "LQ"],
            );
        }
        return report(
            AssociateOutcome::NotCharacterized {
                reason: "p = ∞ with q < 1 is outside the characterised range".into(),
            },
            conditions,
            vec!["T2AS-1"],
        );
    }

    // q = ∞
    if !spec.p_is_infinite() {
        let pc = conjugate(spec.p).unwrap_or(f64::INFINITY);
        return report(space(pc, 1.0, b.recip(), false), conditions, vec!["T3AS"]);
    }
    // p = q = ∞: replace b by its running sup first
    match sup_transform(b, SupKind::TildeSup) {
        SupTransformResult::Sv(bsup) => report(
            space(1.0, 1.0, bsup.recip(), false),
            conditions,
            vec!["T3AS", "PbND"],
        ),
        SupTransformResult::NotFinite => report(
            AssociateOutcome::NotCharacterized {
                reason: "running sup of b is infinite; the reduction is unavailable".into(),
            },
            conditions,
            vec!["PbND"],
        ),
    }
}

/// Small memo cache for embedding verdicts, keyed by the exact bit patterns
/// of both specs and the measure. Safe for concurrent use.
#[derive(Default)]
pub struct VerdictCache {
    map: Mutex<HashMap<Vec<u64>, EmbeddingVerdict>>,
}

impl VerdictCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn embedding(&self, src: &SpaceSpec, dst: &SpaceSpec, mu_r: f64) -> EmbeddingVerdict {
        let mut key = Vec::with_capacity(19);
        for spec in [src, dst] {
            key.extend_from_slice(&[
                spec.p.to_bits(),
                spec.q.to_bits(),
                spec.b.scale().to_bits(),
                spec.b.sig0().gamma.to_bits(),
                spec.b.sig0().alpha.to_bits(),
                spec.b.sig0().beta.to_bits(),
                spec.b.sig_inf().gamma.to_bits(),
                spec.b.sig_inf().alpha.to_bits(),
                spec.b.sig_inf().beta.to_bits(),
            ]);
        }
        key.push(mu_r.to_bits());
        let mut map = self.map.lock().expect("cache poisoned");
        map.entry(key)
            .or_insert_with(|| decide_embedding(src, dst, mu_r))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sv::{EndpointSignature as Sig, SlowlyVaryingFunction as Svf};

    fn spec(p: f64, q: f64, b: Svf) -> SpaceSpec {
        SpaceSpec::new(p, q, b).unwrap()
    }

    fn sv2(s0: (f64, f64, f64), si: (f64, f64, f64)) -> Svf {
        Svf::new(
            1.0,
            Sig::new(s0.0, s0.1, s0.2),
            Sig::new(si.0, si.1, si.2),
        )
        .unwrap()
    }

    #[test]
    fn conjugate_cases() {
        assert_eq!(conjugate(2.0), Some(2.0));
        assert_eq!(conjugate(f64::INFINITY), Some(1.0));
        assert_eq!(conjugate(3.0), Some(1.5));
        assert_eq!(conjugate(1.0), Some(f64::INFINITY));
        assert_eq!(conjugate(0.5), None);
    }

    #[test]
    fn classify_trivial_weak_linfty() {
        let r = classify_space(&spec(f64::INFINITY, 2.0, Svf::one()));
        assert!(!r.nontrivial);
        assert!(!r.quasi_banach);
        assert!(!r.star_nontrivial);
        assert!(!r.banach_equivalent);
        assert!(r.equals_star);
    }

    #[test]
    fn classify_star_nontrivial_at_p1_with_decay() {
        let r = classify_space(&spec(1.0, 1.0, sv2((0.0, 0.0, 0.0), (0.0, -2.0, 0.0))));
        assert!(r.nontrivial);
        assert!(r.star_nontrivial);
        assert!(r.banach_equivalent); // b equivalent to non-increasing
        assert_eq!(r.p5, P5Verdict::Yes);
        assert!(!r.equals_star);
    }

    #[test]
    fn classify_banach_via_nonincreasing_b() {
        let r = classify_space(&spec(1.0, 1.0, sv2((0.0, 1.0, 0.0), (0.0, -1.0, 0.0))));
        assert!(r.banach_equivalent);
        assert!(r.citations.iter().any(|c| c == "TLKBFS-iii"));
    }

    #[test]
    fn classify_small_q_is_quasi_only() {
        let r = classify_space(&spec(2.0, 0.5, Svf::one()));
        assert!(r.quasi_banach);
        assert!(!r.banach_equivalent);
        assert_eq!(r.p5, P5Verdict::Yes);
    }

    #[test]
    fn p5_ladder_holes_are_unknown() {
        // p = 1, q > 1, b bounded below near zero
        let r = classify_space(&spec(1.0, 2.0, Svf::one()));
        assert_eq!(r.p5, P5Verdict::Unknown);
        // p = 1, q < 1, b vanishing at zero
        let r = classify_space(&spec(1.0, 0.5, sv2((0.0, -1.0, 0.0), (0.0, 0.0, 0.0))));
        assert_eq!(r.p5, P5Verdict::Unknown);
        // p = 1, q ≥ 1, b vanishing: No
        let r = classify_space(&spec(1.0, 2.0, sv2((0.0, -1.0, 0.0), (0.0, 0.0, 0.0))));
        assert_eq!(r.p5, P5Verdict::No);
    }

    #[test]
    fn embedding_same_p_increasing_q() {
        let v = decide_embedding(
            &SpaceSpec::new(2.0, 1.0, Svf::one()).unwrap(),
            &SpaceSpec::new(2.0, 2.0, Svf::one()).unwrap(),
            f64::INFINITY,
        );
        assert!(v.holds());
        assert_eq!(v.case_id(), "PELK");
    }

    #[test]
    fn embedding_larger_p_never() {
        let v = decide_embedding(
            &SpaceSpec::lebesgue(2.0),
            &SpaceSpec::lebesgue(3.0),
            f64::INFINITY,
        );
        assert!(!v.holds());
        assert_eq!(v.case_id(), "TELK-4");
        assert_eq!(v.witness_recipe.as_deref(), Some("CaseP1LessP2"));
    }

    #[test]
    fn embedding_smaller_p_needs_finite_measure() {
        let src = SpaceSpec::new(3.0, 1.0, Svf::one()).unwrap();
        let dst = SpaceSpec::new(2.0, 1.0, Svf::one()).unwrap();
        assert!(decide_embedding(&src, &dst, 1.0).holds());
        assert!(!decide_embedding(&src, &dst, f64::INFINITY).holds());
    }

    #[test]
    fn embedding_tilde_comparison_case() {
        let src = spec(f64::INFINITY, 1.0, sv2((0.0, -2.0, 0.0), (0.0, -2.0, 0.0)));
        let dst = spec(f64::INFINITY, 1.0, sv2((0.0, -3.0, 0.0), (0.0, -3.0, 0.0)));
        let v = decide_embedding(&src, &dst, f64::INFINITY);
        assert!(v.holds(), "{v:?}");
        assert_eq!(v.case_id(), "TELK-2b");
        // and the reverse direction fails
        let v = decide_embedding(&dst, &src, f64::INFINITY);
        assert!(!v.holds());
    }

    #[test]
    fn embedding_guard_failures() {
        let trivial = spec(f64::INFINITY, 2.0, Svf::one());
        let fine = SpaceSpec::lebesgue(2.0);
        let v = decide_embedding(&trivial, &fine, f64::INFINITY);
        assert_eq!(v.case_id(), "TrivialSource");
        let v = decide_embedding(&fine, &trivial, f64::INFINITY);
        assert_eq!(v.case_id(), "TrivialTarget");
    }

    #[test]
    fn embedding_reflexive_on_samples() {
        for s in [
            SpaceSpec::lebesgue(2.0),
            spec(1.0, 0.5, sv2((0.0, 1.0, 0.0), (0.0, -1.0, 0.0))),
            spec(f64::INFINITY, 2.0, sv2((0.0, -2.0, 0.0), (0.0, 0.0, 0.0))),
            spec(2.0, f64::INFINITY, Svf::one()),
        ] {
            for mu in [1.0, f64::INFINITY] {
                let v = decide_embedding(&s, &s, mu);
                assert!(v.holds(), "{s} mu={mu}: {v:?}");
            }
        }
    }

    #[test]
    fn associate_basic_rules() {
        // (2,3)' = (2, 1.5) star
        let r = associate_space(&spec(2.0, 3.0, Svf::one())).unwrap();
        let a = r.space().unwrap();
        assert_eq!(a.p, 2.0);
        assert!((a.q - 1.5).abs() < 1e-12);
        assert!(a.star);
        // p < 1 → Zero
        let r = associate_space(&spec(0.5, 2.0, Svf::one())).unwrap();
        assert!(matches!(r.outcome, AssociateOutcome::Zero));
        assert_eq!(r.citations, vec!["PAS"]);
    }

    #[test]
    fn associate_tilde_rule() {
        let b = sv2((0.0, -2.0, 0.0), (0.0, 0.0, 0.0));
        let r = associate_space(&spec(f64::INFINITY, 1.0, b)).unwrap();
        let a = r.space().unwrap();
        assert_eq!(a.p, 1.0);
        assert!(a.q.is_infinite());
        assert!(a.star);
        // tilde(b)^{-1} has sig0 ≈ (0, 1, 0)
        assert_eq!(a.b.sig0(), Sig::new(0.0, 1.0, 0.0));
        assert!(r.citations.iter().any(|c| c == "T2AS-2"));
    }

    #[test]
    fn associate_uncharacterised_cases() {
        // p = 1, q < 1, b not equivalent to non-increasing
        let r =
            associate_space(&spec(1.0, 0.5, sv2((0.0, -1.0, 0.0), (0.0, 0.0, 0.0)))).unwrap();
        assert!(matches!(
            r.outcome,
            AssociateOutcome::NotCharacterized { .. }
        ));
        // p = ∞, q ∈ (1,∞): the sublimiting case
        let r =
            associate_space(&spec(f64::INFINITY, 2.0, sv2((0.0, -1.0, 0.0), (0.0, 0.0, 0.0))))
                .unwrap();
        assert!(matches!(
            r.outcome,
            AssociateOutcome::NotCharacterized { .. }
        ));
        // star input is unsupported
        assert!(associate_space(&SpaceSpec::lebesgue(2.0).with_star(true)).is_err());
    }

    #[test]
    fn associate_endpoint_rules() {
        // q = ∞, p finite: non-star result
        let r = associate_space(&spec(2.0, f64::INFINITY, Svf::one())).unwrap();
        let a = r.space().unwrap();
        assert_eq!((a.p, a.q), (2.0, 1.0));
        assert!(!a.star);
        // p = q = ∞ with bounded b near zero: sup reduction applies
        let r = associate_space(&spec(
            f64::INFINITY,
            f64::INFINITY,
            sv2((0.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
        ))
        .unwrap();
        let a = r.space().unwrap();
        assert_eq!((a.p, a.q), (1.0, 1.0));
        assert_eq!(a.b.sig_inf(), Sig::new(0.0, -1.0, 0.0));
        // p = q = ∞ with exploding b near zero: unavailable
        let r = associate_space(&spec(
            f64::INFINITY,
            f64::INFINITY,
            sv2((0.0, 1.0, 0.0), (0.0, 0.0, 0.0)),
        ))
        .unwrap();
        assert!(matches!(
            r.outcome,
            AssociateOutcome::NotCharacterized { .. }
        ));
    }

    #[test]
    fn verdicts_ignore_scale() {
        let b1 = sv2((0.0, -2.0, 0.0), (0.0, -2.0, 0.0));
        let b5 = b1.with_scale(5.0).unwrap();
        let s1 = spec(f64::INFINITY, 1.0, b1);
        let s5 = spec(f64::INFINITY, 1.0, b5);
        let r1 = classify_space(&s1);
        let r5 = classify_space(&s5);
        assert_eq!(r1.nontrivial, r5.nontrivial);
        assert_eq!(r1.banach_equivalent, r5.banach_equivalent);
        assert_eq!(r1.p5, r5.p5);
        let dst = spec(f64::INFINITY, 1.0, sv2((0.0, -3.0, 0.0), (0.0, -3.0, 0.0)));
        assert_eq!(
            decide_embedding(&s1, &dst, f64::INFINITY).holds(),
            decide_embedding(&s5, &dst, f64::INFINITY).holds()
        );
    }

    #[test]
    fn verdict_cache_agrees() {
        let cache = VerdictCache::new();
        let src = SpaceSpec::new(2.0, 1.0, Svf::one()).unwrap();
        let dst = SpaceSpec::new(2.0, 2.0, Svf::one()).unwrap();
        let a = cache.embedding(&src, &dst, f64::INFINITY);
        let b = cache.embedding(&src, &dst, f64::INFINITY);
        assert_eq!(a.case_id(), b.case_id());
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn verdict_json_shape() {
        let v = decide_embedding(
            &SpaceSpec::lebesgue(2.0),
            &SpaceSpec::lebesgue(3.0),
            f64::INFINITY,
        );
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["outcome"], "fails");
        assert_eq!(j["reason"], "TELK-4");
        assert!(j["conditions"].is_array());
    }
}
