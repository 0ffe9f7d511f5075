//! Embeddability decisions for pairs of 1-sink extensions over a common
//! base graph.
//!
//! The verdict is symmetric in the two extensions: a positive answer means
//! one of the two associated algebras embeds as a full corner in the other,
//! without fixing which. Hypotheses are enforced strictly; when a required
//! loop condition or essentiality fails, the answer is a precondition
//! failure rather than a guess.

use serde::Serialize;
use thiserror::Error;

use crate::extension::{block_decomposition, OneSinkExtension};
use crate::graph::Graph;
use crate::linalg::{CokernelPresentation, ImageMembership, Obstruction};
use crate::matrix::{IntMatrix, IntVector, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("extension {0} is not built over the given base graph")]
    MismatchedBase(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Embeddable,
    NotEmbeddable,
    PreconditionFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Essential,
    General,
    TotallyInessential,
}

/// A hypothesis of the decision theorems that does not hold, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "hypothesis", rename_all = "snake_case")]
pub enum PreconditionFailure {
    /// Some loop has no exit; the witness lists its edges.
    ConditionL { witness_loop: Vec<String> },
    /// Some vertex is the base of exactly one simple loop.
    ConditionK { witness_vertex: String },
    /// The extension (1 or 2) has a base vertex that never reaches its sink.
    NotEssential { extension: usize, witness_vertex: String },
}

/// What backs a verdict up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The tested vectors differ by an integer combination of the columns of
    /// `matrix`; `certificate` is such a combination, so
    /// `matrix * certificate = tested.0 - tested.1` exactly.
    ClassesEqual {
        matrix: IntMatrix,
        tested: (IntVector, IntVector),
        certificate: IntVector,
    },
    /// The difference of the tested vectors is provably outside the column
    /// span of `matrix`.
    ClassesDiffer {
        matrix: IntMatrix,
        tested: (IntVector, IntVector),
        obstruction: Obstruction,
    },
    /// Both closures are empty, so the class condition is vacuous.
    Vacuous,
    /// The sink closures differ, which already rules out an embedding.
    ClosuresDiffer {
        closure1: Vec<String>,
        closure2: Vec<String>,
    },
    /// The hypotheses of the applicable theorem do not hold.
    Preconditions { failures: Vec<PreconditionFailure> },
}

/// Outcome of a decision, with enough evidence to re-verify it offline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub mode: Mode,
    pub evidence: Evidence,
}

impl Decision {
    pub fn certificate(&self) -> Option<&IntVector> {
        match &self.evidence {
            Evidence::ClassesEqual { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match &self.evidence {
            Evidence::ClassesDiffer { obstruction, .. } => Some(obstruction),
            _ => None,
        }
    }

    fn precondition_failed(mode: Mode, failures: Vec<PreconditionFailure>) -> Decision {
        Decision {
            verdict: Verdict::PreconditionFailed,
            mode,
            evidence: Evidence::Preconditions { failures },
        }
    }
}

fn check_bases(
    g: &Graph,
    e1: &OneSinkExtension,
    e2: &OneSinkExtension,
) -> Result<(), DecideError> {
    if e1.base() != g {
        return Err(DecideError::MismatchedBase(1));
    }
    if e2.base() != g {
        return Err(DecideError::MismatchedBase(2));
    }
    Ok(())
}

fn essentiality_failures(e1: &OneSinkExtension, e2: &OneSinkExtension) -> Vec<PreconditionFailure> {
    let mut failures = Vec::new();
    for (k, e) in [(1usize, e1), (2usize, e2)] {
        let blocked = e
            .base()
            .vertices()
            .iter()
            .find(|v| !e.total().reaches(v, e.sink()).expect("base ids exist"));
        if let Some(v) = blocked {
            failures.push(PreconditionFailure::NotEssential {
                extension: k,
                witness_vertex: v.clone(),
            });
        }
    }
    failures
}

/// Decision for two essential extensions over a base in which every loop has
/// an exit: embeddable iff the two per-vertex path-count vectors fall in the
/// same class modulo the columns of (vertex matrix - I).
pub fn decide_essential(
    g: &Graph,
    e1: &OneSinkExtension,
    e2: &OneSinkExtension,
) -> Result<Decision, DecideError> {
    check_bases(g, e1, e2)?;
    let mut failures = Vec::new();
    let cond_l = g.condition_l();
    if !cond_l.holds {
        failures.push(PreconditionFailure::ConditionL {
            witness_loop: cond_l.witness.unwrap_or_default(),
        });
    }
    failures.extend(essentiality_failures(e1, e2));
    if !failures.is_empty() {
        return Ok(Decision::precondition_failed(Mode::Essential, failures));
    }

    let matrix = g.vertex_matrix().minus_identity()?;
    let w1 = e1.wojciech_vector();
    let w2 = e2.wojciech_vector();
    Ok(class_decision(matrix, w1, w2, Mode::Essential)?)
}

/// Decision for arbitrary extensions over a base satisfying the two-loop
/// condition: the sink closures must agree, and then the restricted vectors
/// corrected by the added-part path counts must fall in the same class
/// modulo the columns of (quotient vertex matrix - I).
pub fn decide_general(
    g: &Graph,
    e1: &OneSinkExtension,
    e2: &OneSinkExtension,
) -> Result<Decision, DecideError> {
    check_bases(g, e1, e2)?;
    let cond_k = g.condition_k();
    if !cond_k.holds {
        return Ok(Decision::precondition_failed(
            Mode::General,
            vec![PreconditionFailure::ConditionK {
                witness_vertex: cond_k.witness.unwrap_or_default(),
            }],
        ));
    }

    let closure1 = e1.closure_of_sink();
    let closure2 = e2.closure_of_sink();
    if closure1 != closure2 {
        return Ok(Decision {
            verdict: Verdict::NotEmbeddable,
            mode: Mode::General,
            evidence: Evidence::ClosuresDiffer { closure1, closure2 },
        });
    }
    if closure1.is_empty() {
        // both totally inessential: the class condition is vacuous
        return Ok(Decision {
            verdict: Verdict::Embeddable,
            mode: Mode::TotallyInessential,
            evidence: Evidence::Vacuous,
        });
    }

    let blocks = block_decomposition(g, &closure1)
        .expect("sink closure complements are hereditary");
    let matrix = blocks.a_f.minus_identity()?;
    let v1 = tested_vector(e1, &closure1, &blocks.x)?;
    let v2 = tested_vector(e2, &closure1, &blocks.x)?;
    Ok(class_decision(matrix, v1, v2, Mode::General)?)
}

/// Restriction of the path-count vector to the closure, corrected by the
/// counts through the inessential part: omega restricted + X * n.
fn tested_vector(
    e: &OneSinkExtension,
    closure: &[String],
    x: &IntMatrix,
) -> Result<IntVector, MatrixError> {
    let omega_restricted = e.wojciech_vector().restrict(closure)?;
    let n = e.n_vector();
    omega_restricted.add(&x.mul_vec(&n)?)
}

fn class_decision(
    matrix: IntMatrix,
    v1: IntVector,
    v2: IntVector,
    mode: Mode,
) -> Result<Decision, MatrixError> {
    let pres = CokernelPresentation::new(matrix.clone());
    match pres.in_image(&v1.sub(&v2)?)? {
        ImageMembership::Member { certificate } => Ok(Decision {
            verdict: Verdict::Embeddable,
            mode,
            evidence: Evidence::ClassesEqual {
                matrix,
                tested: (v1, v2),
                certificate,
            },
        }),
        ImageMembership::NotMember { obstruction } => Ok(Decision {
            verdict: Verdict::NotEmbeddable,
            mode,
            evidence: Evidence::ClassesDiffer {
                matrix,
                tested: (v1, v2),
                obstruction,
            },
        }),
    }
}

/// Mode dispatch: the general theorem applies whenever the base satisfies
/// the two-loop condition; failing that, the essential theorem applies when
/// every loop has an exit and both extensions are essential; otherwise the
/// strongest failed hypothesis is reported.
pub fn decide_auto(
    g: &Graph,
    e1: &OneSinkExtension,
    e2: &OneSinkExtension,
) -> Result<Decision, DecideError> {
    check_bases(g, e1, e2)?;
    let cond_k = g.condition_k();
    if cond_k.holds {
        return decide_general(g, e1, e2);
    }
    let cond_l = g.condition_l();
    let essential_failures = essentiality_failures(e1, e2);
    if cond_l.holds && essential_failures.is_empty() {
        return decide_essential(g, e1, e2);
    }

    let mut failures = Vec::new();
    if !cond_l.holds {
        failures.push(PreconditionFailure::ConditionL {
            witness_loop: cond_l.witness.unwrap_or_default(),
        });
    }
    failures.push(PreconditionFailure::ConditionK {
        witness_vertex: cond_k.witness.unwrap_or_default(),
    });
    failures.extend(essential_failures);
    Ok(Decision::precondition_failed(Mode::General, failures))
}

/// Replays stored evidence: embeddable certificates must solve their linear
/// system exactly, obstructions must re-verify, and closure mismatches must
/// be genuine mismatches.
pub fn verify_decision(d: &Decision) -> bool {
    match &d.evidence {
        Evidence::ClassesEqual {
            matrix,
            tested,
            certificate,
        } => {
            let Ok(mz) = matrix.mul_vec(certificate) else {
                return false;
            };
            let Ok(diff) = tested.0.sub(&tested.1) else {
                return false;
            };
            d.verdict == Verdict::Embeddable && mz == diff
        }
        Evidence::ClassesDiffer {
            matrix,
            tested,
            obstruction,
        } => {
            let Ok(diff) = tested.0.sub(&tested.1) else {
                return false;
            };
            d.verdict == Verdict::NotEmbeddable && obstruction.verify(matrix, &diff)
        }
        Evidence::Vacuous => d.verdict == Verdict::Embeddable,
        Evidence::ClosuresDiffer { closure1, closure2 } => {
            d.verdict == Verdict::NotEmbeddable && closure1 != closure2
        }
        Evidence::Preconditions { failures } => {
            d.verdict == Verdict::PreconditionFailed && !failures.is_empty()
        }
    }
}
