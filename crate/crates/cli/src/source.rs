//! Where matrices come from: generator parameters, gen-spec strings, or JSON.

use std::io::Read;
use std::path::Path;

use verlinde::kacpeterson::{kp_a1, kp_cl};
use verlinde::smatrix::{dft_smatrix, exterior_power, fourier_block, ScaledMatrix};

/// A usage-level problem (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Smatrix { e: u32, exterior: Option<usize> },
    Fourier { e: u32, m: u32, mult: Vec<u32>, eps: bool },
    KpA1 { level: u32 },
    KpCl { rank: usize, level: u32 },
}

impl Source {
    pub fn build(&self) -> Result<ScaledMatrix, UsageError> {
        Ok(match self {
            Source::Smatrix { e, exterior } => {
                let d = dft_smatrix(*e)?;
                match exterior {
                    Some(n) => exterior_power(&d, *n)?,
                    None => d,
                }
            }
            Source::Fourier { e, m, mult, eps } => fourier_block(*e, *m, mult, *eps)?,
            Source::KpA1 { level } => kp_a1(*level)?,
            Source::KpCl { rank, level } => kp_cl(*rank, *level)?,
        })
    }
}

pub fn parse_mult(s: &str) -> Result<Vec<u32>, UsageError> {
    s.split([',', '+'])
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse::<u32>().map_err(|e| UsageError(format!("bad multiplicity {t:?}: {e}"))))
        .collect()
}

/// `smatrix:e=4,exterior=2`, `fourier:e=3,m=1,mult=2+2`, `kp:type=cl,level=1,rank=2`.
pub fn parse_gen_spec(spec: &str) -> Result<Source, UsageError> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| UsageError(format!("not a file and not a gen-spec: {spec:?}")))?;
    let mut fields = std::collections::BTreeMap::new();
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| UsageError(format!("expected key=value, got {part:?}")))?;
        fields.insert(k.trim(), v.trim());
    }
    let num = |key: &str| -> Result<Option<u32>, UsageError> {
        fields
            .get(key)
            .map(|v| v.parse::<u32>().map_err(|e| UsageError(format!("{key}: {e}"))))
            .transpose()
    };
    let need = |key: &str| -> Result<u32, UsageError> {
        num(key)?.ok_or_else(|| UsageError(format!("gen-spec {kind:?} needs {key}")))
    };
    match kind {
        "smatrix" => Ok(Source::Smatrix {
            e: need("e")?,
            exterior: num("exterior")?.or(num("n")?).map(|n| n as usize),
        }),
        "fourier" => Ok(Source::Fourier {
            e: need("e")?,
            m: need("m")?,
            mult: parse_mult(fields.get("mult").ok_or_else(|| UsageError("gen-spec fourier needs mult".into()))?)?,
            eps: fields.get("eps").is_none_or(|v| *v != "false"),
        }),
        "kp" => match fields.get("type").copied().unwrap_or("a1") {
            "a1" => Ok(Source::KpA1 { level: need("level")? }),
            "cl" => Ok(Source::KpCl {
                rank: need("rank")? as usize,
                level: need("level")?,
            }),
            other => Err(UsageError(format!("unknown kp type {other:?}"))),
        },
        other => Err(UsageError(format!("unknown generator {other:?}"))),
    }
}

/// A file path, `-` for stdin, or a gen-spec.
pub fn load_matrix(input: &str) -> Result<ScaledMatrix, UsageError> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input)?
    } else {
        return parse_gen_spec(input)?.build();
    };
    serde_json::from_str(&text).map_err(|e| UsageError(format!("cannot read matrix JSON: {e}")))
}
