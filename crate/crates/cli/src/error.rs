use std::path::PathBuf;

use smdecouple::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 property failure, 2 input error, 3 numerical non-convergence.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::RootsNotConverged { .. } | Error::SvdNotConverged) => 3,
            CliError::Lib(Error::IllPosed | Error::Unstable(_) | Error::Infeasible(_)) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Lib(e) => match e {
                Error::DivisionByZeroPoly | Error::DivisionByZeroFunction => "division_by_zero",
                Error::GcdOfZeros => "gcd_of_zeros",
                Error::InexactDivision => "inexact_division",
                Error::EvaluationAtPole { .. } => "evaluation_at_pole",
                Error::DegreeTooLow => "degree_too_low",
                Error::RootsNotConverged { .. } => "roots_not_converged",
                Error::DimensionMismatch { .. } => "dimension_mismatch",
                Error::NotSquare { .. } => "not_square",
                Error::NotUnimodular => "not_unimodular",
                Error::Singular => "singular",
                Error::RankDeficient { .. } => "rank_deficient",
                Error::IllPosed => "ill_posed",
                Error::Unstable(_) => "unstable",
                Error::PoleOrderTooHigh { .. } => "pole_order_too_high",
                Error::NotStrictlyProper => "not_strictly_proper",
                Error::RelativeDegreeShortfall { .. } => "relative_degree_shortfall",
                Error::Infeasible(_) => "infeasible",
                Error::SvdNotConverged => "svd_not_converged",
                Error::InvalidGrid(_) => "invalid_grid",
                Error::InvalidParameter(_) => "invalid_parameter",
                Error::Parse(_) => "parse",
            },
        }
    }

    /// Single-line machine-readable form for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({"error": self.kind(), "message": self.to_string()}).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(Error::SvdNotConverged).exit_code(), 3);
        assert_eq!(CliError::from(Error::IllPosed).exit_code(), 1);
        assert_eq!(CliError::from(Error::Parse("x".into())).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }

    #[test]
    fn json_reason() {
        let v: serde_json::Value = serde_json::from_str(&CliError::from(Error::RankDeficient { rank: 1, dim: 2 }).to_json()).unwrap();
        assert_eq!(v["error"], "rank_deficient");
        assert!(v["message"].as_str().unwrap().contains("rank 1"));
    }
}
