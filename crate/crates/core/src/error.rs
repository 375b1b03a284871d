use thiserror::Error;

use crate::blocks::BlockError;
use crate::curtis::CurtisError;
use crate::endoscopy::EndoscopyError;
use crate::rationality::RationalityError;
use crate::rootdata::RootDatumError;
use crate::soergel::SoergelError;
use crate::sspoints::PointError;
use crate::weyl::WeylError;

/// Any error raised by the pipeline, carrying the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Datum(#[from] RootDatumError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Endoscopy(#[from] EndoscopyError),
    #[error(transparent)]
    Rationality(#[from] RationalityError),
    #[error(transparent)]
    Curtis(#[from] CurtisError),
    #[error(transparent)]
    Soergel(#[from] SoergelError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Datum(e) => e.code(),
            Error::Weyl(e) => e.code(),
            Error::Point(e) => e.code(),
            Error::Block(e) => e.code(),
            Error::Endoscopy(e) => e.code(),
            Error::Rationality(e) => e.code(),
            Error::Curtis(e) => e.code(),
            Error::Soergel(e) => e.code(),
            Error::Config(_) => "cli.config",
            Error::Io(_) => "cli.io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
