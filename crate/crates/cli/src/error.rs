use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("{field}: {message}")]
    Invalid { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] relaxwave_core::Error),

    #[error("observed order {order:.3} at level {level} is below 0.5")]
    OrderTooLow { level: usize, order: f64 },
}

impl CliError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    /// 2 for anything wrong with the request, 3 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(relaxwave_core::Error::NumericalBlowup { .. }) | CliError::OrderTooLow { .. } => 3,
            _ => 2,
        }
    }
}
