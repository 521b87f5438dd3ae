//! Sampling, frame and classification bundled for one family.

use thiserror::Error;

use crate::creativity::{classify_family, CreativityParams, CreativityReport};
use crate::envelope::{
    build_envelope, creator_branches, randomized_creators, EnvelopeBranch, EnvelopeError,
};
use crate::family::{CircleFamily, FamilyError, FamilySample};
use crate::frontal::{FrontalData, FrontalError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Frontal(#[from] FrontalError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
}

/// A sampled family with its frame and creativity report.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub samples: Vec<FamilySample>,
    pub frames: FrontalData,
    pub report: CreativityReport,
}

impl Analysis {
    pub fn run<F: CircleFamily + ?Sized>(
        family: &F,
        params: &CreativityParams,
    ) -> Result<Self, AnalysisError> {
        let samples = family.sample_grid()?;
        let frames = FrontalData::build(&samples)?;
        Ok(Self::from_parts(samples, frames, params))
    }

    pub fn from_parts(
        samples: Vec<FamilySample>,
        frames: FrontalData,
        params: &CreativityParams,
    ) -> Self {
        let rates: Vec<f64> = samples.iter().map(|s| s.radius_rate).collect();
        let report = classify_family(&frames, &rates, params);
        Analysis {
            samples,
            frames,
            report,
        }
    }

    pub fn radius(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.radius).collect()
    }

    pub fn radius_rate(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.radius_rate).collect()
    }

    /// Canonical envelope branches.
    pub fn envelopes(&self) -> Result<Vec<EnvelopeBranch>, EnvelopeError> {
        self.envelopes_with_variants(0, 0)
    }

    /// Canonical branches followed by `extra` randomized ones (seeded),
    /// which only differ where the creator is unconstrained.
    pub fn envelopes_with_variants(
        &self,
        extra: usize,
        seed: u64,
    ) -> Result<Vec<EnvelopeBranch>, EnvelopeError> {
        let mut creators = creator_branches(&self.report, &self.frames)?;
        if extra > 0 {
            let more = randomized_creators(&creators[0], &self.report, extra, seed);
            creators.extend(more);
        }
        let radius = self.radius();
        creators
            .iter()
            .map(|c| build_envelope(c, &self.frames.t, &self.frames.center, &radius))
            .collect()
    }
}
