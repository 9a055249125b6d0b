use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// The call itself is malformed (missing data, empty input).
    #[error("usage error: {0}")]
    Usage(String),

    /// The requested run violates a stability or resolution bound.
    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("numerical blowup at step {step}: {detail}")]
    NumericalBlowup { step: usize, detail: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Configuration(msg.into())
    }

    /// Shift the step index of a blowup error by `offset` steps.
    pub fn offset_step(self, offset: usize) -> Self {
        match self {
            Error::NumericalBlowup { step, detail } => Error::NumericalBlowup {
                step: step + offset,
                detail,
            },
            other => other,
        }
    }
}

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {value}")))
    }
}

pub(crate) fn check_finite<'a, T>(values: impl IntoIterator<Item = &'a T>, step: usize, what: &str) -> Result<()>
where
    T: 'a + Copy + Into<num_complex::Complex64>,
{
    if values.into_iter().all(|&v| v.into().is_finite()) {
        Ok(())
    } else {
        Err(Error::NumericalBlowup {
            step,
            detail: format!("non-finite {what}"),
        })
    }
}

pub(crate) fn require_time_step(dt: f64, allow_negative: bool) -> Result<()> {
    let ok = dt.is_finite() && if allow_negative { dt != 0.0 } else { dt > 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::config(format!("invalid time step dt = {dt}")))
    }
}
