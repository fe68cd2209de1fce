//! Conversions between the proof systems. The key observation: the clause
//! part of any line already determines which rule built it, so a
//! representation-free rule skeleton is all a target system needs. Replaying
//! that skeleton with graph strategies simulates any source system line for
//! line.

use alloc::vec::Vec;
use core::fmt;

use crate::mres::{check_mres, MresProof};
use crate::mrest::{check, replay_script, MresTProof, ProofRule};
use crate::qbf::Qbf;
use crate::report::{CapError, CheckReport, Reason};

/// The representation-free skeleton of a proof: axiom downloads and
/// resolutions, references strictly backward, pivots existential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleScript {
    pub steps: Vec<ProofRule>,
}

impl RuleScript {
    pub fn new(steps: Vec<ProofRule>) -> RuleScript {
        RuleScript { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Debug)]
pub enum ConvertError {
    /// The input proof failed its own checker.
    InvalidInput(CheckReport),
    /// The skeleton could not be replayed at the given 1-based line.
    Structural { line: usize, reason: Reason },
    /// The replayed proof failed the target checker, so the trace did not
    /// come from a valid proof.
    OutputRejected(CheckReport),
    Cap(CapError),
}

impl fmt::Display for ConvertError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvertError::InvalidInput(r) => {
                write!(f, "input proof invalid at line {:?}", r.failing_line)
            }
            ConvertError::Structural { line, reason } => {
                write!(f, "cannot replay step at line {line}: {reason}")
            }
            ConvertError::OutputRejected(r) => {
                write!(f, "replayed proof rejected at line {:?}", r.failing_line)
            }
            ConvertError::Cap(c) => write!(f, "{c}"),
        }
    }
}

/// Drops merge maps and select/merge annotations from a valid merge-map
/// proof, keeping the clause-rule skeleton. All select and merge cases
/// collapse to plain resolution records because the target system's graph
/// construction is position-forced.
pub fn mres_to_script(q: &Qbf, proof: &MresProof) -> Result<RuleScript, ConvertError> {
    let report = check_mres(q, proof);
    if !report.valid {
        return Err(ConvertError::InvalidInput(report));
    }
    Ok(RuleScript::new(proof.steps()))
}

/// Replays a rule skeleton into a full graph-strategy proof and checks it.
/// Conversion of a trace taken from any valid proof always passes; a
/// rejection means the trace was not from a valid proof.
pub fn script_to_mrest(q: &Qbf, script: &RuleScript) -> Result<MresTProof, ConvertError> {
    let proof = replay_script(q, &script.steps)
        .map_err(|(line, reason)| ConvertError::Structural { line, reason })?;
    let report = check(q, &proof).map_err(ConvertError::Cap)?;
    if !report.valid {
        return Err(ConvertError::OutputRejected(report));
    }
    Ok(proof)
}

/// Line-for-line simulation of a valid merge-map proof by the
/// consistency-gated system: the composition of skeleton extraction and
/// replay. Select steps replaced by if-else nodes merely dilute the
/// strategy, which never disturbs later consistency checks.
pub fn mres_to_mrest(q: &Qbf, proof: &MresProof) -> Result<MresTProof, ConvertError> {
    let script = mres_to_script(q, proof)?;
    script_to_mrest(q, &script)
}
