use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular series: constant term is zero")]
    SingularSeries,
    #[error("series order exceeded: need {needed}, configured order is {order}")]
    SeriesOrderExceeded { needed: usize, order: usize },
    #[error("law `{0}` has no density")]
    DensityUnavailable(String),
    #[error("mgf of `{law}` is not defined at z = {z}")]
    OutsideRegion { law: String, z: f64 },
    #[error("no closed-form pmf for mixing law `{0}`")]
    NoClosedForm(String),
    #[error("series in {run} does not settle (stopped at term {at})")]
    Divergence { run: String, at: usize },
    #[error("urn is not tenable: {0}")]
    Tenability(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
