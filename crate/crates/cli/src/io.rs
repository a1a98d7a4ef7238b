//! Channel, Schur-matrix, mixture and state files.
//!
//! A file is a JSON object with a `format` tag, a `kind`, its dimensions and a
//! payload of complex entries written as `[re, im]` pairs, matrices row-major.

use std::collections::BTreeMap;
use std::path::Path;

use channel_gauge::matcore::ComplexMatrix;
use channel_gauge::schur::{mixture_to_schur, DiagonalUnitaryMixture, SchurMatrix};
use channel_gauge::{ComplexVector, DensityOperator, KrausChannel};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::json::to_canonical_string;
use crate::CliError;

pub const FORMAT: &str = "channel-gauge/1";

pub type Entry = [f64; 2];
pub type Rows = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Kraus,
    Schur,
    Mixture,
    State,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub format: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_out: Option<usize>,
    /// `kraus`: list of `dim_out × dim_in` operators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<Rows>>,
    /// `schur` and `state`: one `dim × dim` matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Rows>,
    /// `schur`: whether the matrix must define a channel (PSD, unit diagonal).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<bool>,
    /// `mixture`: probability weights of the diagonal unitaries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    /// `mixture`: diagonals of the unitaries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn to_matrix(rows: &Rows, nrows: usize, ncols: usize, what: &str) -> Result<ComplexMatrix, CliError> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(parse_err(format!("{what}: expected {nrows}×{ncols} entries")));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(parse_err(format!("{what}: non-finite entry")));
    }
    Ok(ComplexMatrix::from_fn(nrows, ncols, |r, c| {
        Complex64::new(rows[r][c][0], rows[r][c][1])
    }))
}

pub fn rows_of(m: &ComplexMatrix) -> Rows {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn entries_of(v: &ComplexVector) -> Vec<Entry> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl ChannelFile {
    fn empty(kind: Kind) -> Self {
        Self {
            format: FORMAT.into(),
            kind,
            dim: None,
            dim_in: None,
            dim_out: None,
            kraus: None,
            matrix: None,
            channel: None,
            weights: None,
            phases: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn from_kraus(ch: &KrausChannel) -> Self {
        let (dim_out, dim_in) = ch.kraus()[0].shape();
        Self {
            dim_in: Some(dim_in),
            dim_out: Some(dim_out),
            kraus: Some(ch.kraus().iter().map(rows_of).collect()),
            ..Self::empty(Kind::Kraus)
        }
    }

    pub fn from_schur(s: &SchurMatrix) -> Self {
        Self {
            dim: Some(s.dim()),
            matrix: Some(rows_of(s.matrix())),
            channel: Some(s.is_channel()),
            ..Self::empty(Kind::Schur)
        }
    }

    pub fn from_mixture(m: &DiagonalUnitaryMixture) -> Self {
        Self {
            dim: Some(m.dim()),
            weights: Some(m.weights().to_vec()),
            phases: Some(m.phases().iter().map(entries_of).collect()),
            ..Self::empty(Kind::Mixture)
        }
    }

    pub fn from_state(rho: &DensityOperator) -> Self {
        Self {
            dim: Some(rho.dim()),
            matrix: Some(rows_of(rho.matrix())),
            ..Self::empty(Kind::State)
        }
    }

    pub fn with_metadata(mut self, key: &str, value: &str) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let f: Self = serde_json::from_str(text).map_err(|e| parse_err(format!("malformed channel file: {e}")))?;
        if f.format != FORMAT {
            return Err(parse_err(format!("unsupported format tag {:?}, expected {FORMAT:?}", f.format)));
        }
        f.check()?;
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_string(&serde_json::to_value(self).expect("channel file serializes"))
    }

    fn dim(&self) -> Result<usize, CliError> {
        match self.dim {
            Some(d) if d > 0 => Ok(d),
            _ => Err(parse_err(format!("{:?} file needs a positive \"dim\"", self.kind))),
        }
    }

    /// Payload present and shaped as the declared dimensions say.
    fn check(&self) -> Result<(), CliError> {
        let only = |present: &[bool], what: &str| {
            if present.iter().all(|p| *p) {
                Ok(())
            } else {
                Err(parse_err(format!("{what} missing")))
            }
        };
        match self.kind {
            Kind::Kraus => {
                only(&[self.dim_in.is_some(), self.dim_out.is_some(), self.kraus.is_some()], "dim_in, dim_out or kraus")?;
                let (din, dout) = (self.dim_in.unwrap(), self.dim_out.unwrap());
                let ops = self.kraus.as_ref().unwrap();
                if din == 0 || dout == 0 || ops.is_empty() {
                    return Err(parse_err("Kraus file needs positive dimensions and at least one operator"));
                }
                for (k, op) in ops.iter().enumerate() {
                    to_matrix(op, dout, din, &format!("Kraus operator {k}"))?;
                }
            }
            Kind::Schur | Kind::State => {
                let d = self.dim()?;
                let m = self.matrix.as_ref().ok_or_else(|| parse_err("matrix missing"))?;
                to_matrix(m, d, d, "matrix")?;
            }
            Kind::Mixture => {
                let d = self.dim()?;
                only(&[self.weights.is_some(), self.phases.is_some()], "weights or phases")?;
                let (w, p) = (self.weights.as_ref().unwrap(), self.phases.as_ref().unwrap());
                if w.len() != p.len() || p.iter().any(|u| u.len() != d) {
                    return Err(parse_err("mixture weights and phase vectors disagree in shape"));
                }
            }
        }
        Ok(())
    }

    fn kraus_ops(&self) -> Result<Vec<ComplexMatrix>, CliError> {
        let (din, dout) = (self.dim_in.unwrap(), self.dim_out.unwrap());
        self.kraus
            .as_ref()
            .unwrap()
            .iter()
            .map(|op| to_matrix(op, dout, din, "Kraus operator"))
            .collect()
    }

    fn single_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let d = self.dim()?;
        to_matrix(self.matrix.as_ref().unwrap(), d, d, "matrix")
    }

    pub fn mixture(&self) -> Result<DiagonalUnitaryMixture, CliError> {
        if self.kind != Kind::Mixture {
            return Err(parse_err(format!("expected a mixture file, found {:?}", self.kind)));
        }
        let phases = self
            .phases
            .as_ref()
            .unwrap()
            .iter()
            .map(|u| ComplexVector::from_iterator(u.len(), u.iter().map(|e| Complex64::new(e[0], e[1]))))
            .collect();
        Ok(DiagonalUnitaryMixture::new(self.weights.clone().unwrap(), phases)?)
    }

    /// Schur matrix of a `schur` or `mixture` file, or of a Schur `kraus` file.
    pub fn schur(&self) -> Result<SchurMatrix, CliError> {
        match self.kind {
            Kind::Schur => {
                let s = SchurMatrix::new(self.single_matrix()?)?;
                if self.channel.unwrap_or(true) && !s.is_channel() {
                    return Err(CliError::Core(channel_gauge::Error::Precondition(
                        "Schur matrix flagged as a channel is not PSD with unit diagonal".into(),
                    )));
                }
                Ok(s)
            }
            Kind::Mixture => Ok(mixture_to_schur(&self.mixture()?)),
            Kind::Kraus => {
                let ch = self.channel()?;
                if !channel_gauge::schur::is_schur_map(&ch, channel_gauge::bounds::SCHUR_TOL) {
                    return Err(CliError::Core(channel_gauge::Error::Precondition(
                        "channel is not a Schur multiplier".into(),
                    )));
                }
                Ok(channel_gauge::builtin::schur_of(&ch))
            }
            Kind::State => Err(parse_err("expected a channel, found a state")),
        }
    }

    /// Kraus form of any channel-like file.
    pub fn channel(&self) -> Result<KrausChannel, CliError> {
        match self.kind {
            Kind::Kraus => Ok(KrausChannel::new(self.kraus_ops()?)?),
            Kind::Schur => Ok(self.schur()?.to_kraus()?),
            Kind::Mixture => Ok(self.mixture()?.to_kraus()),
            Kind::State => Err(parse_err("expected a channel, found a state")),
        }
    }

    pub fn state(&self) -> Result<DensityOperator, CliError> {
        if self.kind != Kind::State {
            return Err(parse_err(format!("expected a state file, found {:?}", self.kind)));
        }
        Ok(DensityOperator::new(self.single_matrix()?)?)
    }
}
