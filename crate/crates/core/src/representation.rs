//! Common analysis/synthesis interface shared by the boostlet frame and the
//! wavelet baseline, so approximation and denoising code is written once.

use crate::dwt::{DwtCoefficients, DwtTransform};
use crate::error::{Error, Result};
use crate::grid::WavefieldGrid;
use crate::transform::{BoostletTransform, CoefficientSet};

/// A coefficient container whose values can be ranked and masked as one flat
/// sequence. The flat order is band-major, then row-major within a band.
pub trait Coefficients: Clone + Send + Sync {
    fn values(&self) -> &[f64];
    fn values_mut(&mut self) -> &mut [f64];

    fn len(&self) -> usize {
        self.values().len()
    }

    fn is_empty(&self) -> bool {
        self.values().is_empty()
    }

    /// Sum of squared coefficients.
    fn energy(&self) -> f64 {
        self.values().iter().map(|v| v * v).sum()
    }

    fn l1_norm(&self) -> f64 {
        self.values().iter().map(|v| v.abs()).sum()
    }

    fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Same container with every value set to zero.
    fn zeroed(&self) -> Self {
        let mut out = self.clone();
        out.values_mut().fill(0.0);
        out
    }
}

pub trait Representation: Send + Sync {
    type Coefficients: Coefficients;

    /// Short identifier written into result files, e.g. `boostlet` or `dwt`.
    fn tag(&self) -> &str;

    fn analyze(&self, field: &WavefieldGrid) -> Result<Self::Coefficients>;

    fn synthesize(&self, coefficients: &Self::Coefficients) -> Result<WavefieldGrid>;
}

impl<R: Representation + ?Sized> Representation for &R {
    type Coefficients = R::Coefficients;

    fn tag(&self) -> &str {
        (**self).tag()
    }

    fn analyze(&self, field: &WavefieldGrid) -> Result<Self::Coefficients> {
        (**self).analyze(field)
    }

    fn synthesize(&self, coefficients: &Self::Coefficients) -> Result<WavefieldGrid> {
        (**self).synthesize(coefficients)
    }
}

/// Either supported representation, for code that picks one at run time.
#[derive(Debug, Clone)]
pub enum AnyRepresentation {
    Boostlet(BoostletTransform),
    Dwt(DwtTransform),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyCoefficients {
    Boostlet(CoefficientSet),
    Dwt(DwtCoefficients),
}

impl Coefficients for AnyCoefficients {
    fn values(&self) -> &[f64] {
        match self {
            Self::Boostlet(c) => c.values(),
            Self::Dwt(c) => c.values(),
        }
    }

    fn values_mut(&mut self) -> &mut [f64] {
        match self {
            Self::Boostlet(c) => c.values_mut(),
            Self::Dwt(c) => c.values_mut(),
        }
    }
}

impl Representation for AnyRepresentation {
    type Coefficients = AnyCoefficients;

    fn tag(&self) -> &str {
        match self {
            Self::Boostlet(r) => Representation::tag(r),
            Self::Dwt(r) => r.tag(),
        }
    }

    fn analyze(&self, field: &WavefieldGrid) -> Result<AnyCoefficients> {
        Ok(match self {
            Self::Boostlet(r) => AnyCoefficients::Boostlet(r.analyze(field)?),
            Self::Dwt(r) => AnyCoefficients::Dwt(Representation::analyze(r, field)?),
        })
    }

    fn synthesize(&self, coefficients: &AnyCoefficients) -> Result<WavefieldGrid> {
        match (self, coefficients) {
            (Self::Boostlet(r), AnyCoefficients::Boostlet(c)) => r.synthesize(c),
            (Self::Dwt(r), AnyCoefficients::Dwt(c)) => Representation::synthesize(r, c),
            _ => Err(Error::CoefficientMismatch(format!(
                "{} transform given coefficients of another representation",
                self.tag()
            ))),
        }
    }
}
