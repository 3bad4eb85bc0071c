//! A validated special biserial algebra and the data derived from it once.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::presentation::{PathClassBasis, Presentation, Quiver, RhoPlus, SignAssignment};

/// `A = kQ/(ρ)` for a presentation that passed special biserial validation,
/// bundled with its signs, path-class basis and ρ⁺ lookup.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub presentation: Presentation,
    pub signs: SignAssignment,
    pub basis: PathClassBasis,
    pub rho: RhoPlus,
    digest: String,
}

impl Algebra {
    pub fn new(presentation: Presentation) -> Result<Self> {
        let report = presentation.validate_special_biserial();
        if let Some(v) = report.violations.first() {
            return Err(Error::NotSpecialBiserial {
                condition: v.condition.clone(),
                witness: v.witness.clone(),
            });
        }
        let signs = presentation.compute_signs()?;
        let basis = presentation.algebra_basis()?;
        let rho = RhoPlus::new(&presentation);
        let digest = presentation_digest(&presentation);
        Ok(Algebra { presentation, signs, basis, rho, digest })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Algebra::new(Presentation::parse(text)?)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    pub fn vertex_count(&self) -> usize {
        self.presentation.quiver.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.presentation.quiver.arrows.len()
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn presentation_digest(p: &Presentation) -> String {
    hex::encode(Sha256::digest(p.to_string().as_bytes()))
}
