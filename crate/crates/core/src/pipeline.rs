//! Adapt, generate and verify in one call.

use crate::adaptation::{adapt_olc, AdaptError, AdaptedOlc, Selection};
use crate::compliance::ComplianceReport;
use crate::model::ProcessModel;
use crate::olc::CompositeOlc;
use crate::sequence::SequenceDiagram;
use crate::variant::{generate_variant, verify_variant_with, VariantError, VerifyOptions};
use crate::Explosion;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("adaptation failed: {0}")]
    Adapt(#[from] AdaptError),
    #[error("variant generation failed: {0}")]
    Variant(#[from] VariantError),
    #[error(transparent)]
    Explosion(#[from] Explosion),
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub aolc: AdaptedOlc,
    pub variant: ProcessModel,
    pub report: ComplianceReport,
}

pub fn run_pipeline(
    base: &ProcessModel,
    olc: &CompositeOlc,
    sd: &SequenceDiagram,
    selection: &Selection,
    opts: &VerifyOptions,
) -> Result<PipelineOutput, PipelineError> {
    let aolc = adapt_olc(&AdaptedOlc::from(olc.clone()), sd, selection)?;
    let variant = generate_variant(base, &aolc)?;
    let report = verify_variant_with(&variant, &aolc, opts)?;
    Ok(PipelineOutput { aolc, variant, report })
}
