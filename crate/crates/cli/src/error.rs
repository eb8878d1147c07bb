use serde_json::{json, Value};
use zplus::bounds::BoundsError;
use zplus::catdata::CatDataError;
use zplus::enumerate::EnumerateError;
use zplus::fpdim::FpdimError;
use zplus::json::FormatError;
use zplus::rank2::Rank2Error;
use zplus::screener::ScreenError;
use zplus::RingError;

/// Input problems exit with 1, broken internal invariants with 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Input,
    Internal,
}

impl Kind {
    pub fn exit_code(self) -> u8 {
        match self {
            Kind::Input => 1,
            Kind::Internal => 2,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
    /// Structured detail for the JSON report, such as a certificate.
    pub detail: Option<Value>,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { kind: Kind::Input, message: message.into(), detail: None }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { kind: Kind::Internal, message: message.into(), detail: None }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn to_json(&self) -> Value {
        let kind = match self.kind {
            Kind::Input => "input",
            Kind::Internal => "internal",
        };
        let mut v = json!({ "error": { "kind": kind, "message": self.message } });
        if let Some(d) = &self.detail {
            v["error"]["detail"] = d.clone();
        }
        v
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<FpdimError> for CliError {
    fn from(e: FpdimError) -> Self {
        match e {
            FpdimError::Precondition(m) => CliError::input(m),
            FpdimError::NonIntegral(cert) => {
                let detail = serde_json::to_value(&*cert).unwrap_or(Value::Null);
                CliError::input(format!("ring is not integral: b_{} has an irrational FP dimension", cert.witness_i))
                    .with_detail(json!({ "certificate": detail }))
            }
            FpdimError::Invariant(m) => CliError::internal(m),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Precondition(m) => CliError::input(m),
            BoundsError::Invariant(m) => CliError::internal(m),
            BoundsError::Ring(e) => e.into(),
            BoundsError::Fpdim(e) => e.into(),
        }
    }
}

impl From<Rank2Error> for CliError {
    fn from(e: Rank2Error) -> Self {
        let message = e.to_string();
        match e {
            Rank2Error::NonIntegral { bracket, .. } => CliError::input(message)
                .with_detail(json!({ "d_bracket": serde_json::to_value(&*bracket).unwrap_or(Value::Null) })),
            Rank2Error::Input(_) | Rank2Error::Overflow(_) => CliError::input(message),
        }
    }
}

impl From<CatDataError> for CliError {
    fn from(e: CatDataError) -> Self {
        match e {
            CatDataError::Format(e) => e.into(),
            CatDataError::Fpdim(e) => e.into(),
            CatDataError::Rank2(e) => e.into(),
            CatDataError::Data(_) | CatDataError::Precondition(_) => CliError::input(e.to_string()),
        }
    }
}

impl From<ScreenError> for CliError {
    fn from(e: ScreenError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<EnumerateError> for CliError {
    fn from(e: EnumerateError) -> Self {
        match e {
            EnumerateError::Invariant(m) => CliError::internal(m),
            other => CliError::input(other.to_string()),
        }
    }
}
