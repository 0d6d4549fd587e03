//! Output envelope, hashing and failure codes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use symchaos_core::{Error, SftPresentation};

pub const TOOL: &str = "symchaos";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_HYPOTHESIS: i32 = 4;

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
    pub command: String,
    pub seed: Option<u64>,
    pub input_sha256: Option<String>,
}

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub header: &'a Header,
    pub result: &'a T,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub reason: String,
    pub message: String,
}

#[derive(Serialize)]
pub struct ErrorEnvelope<'a> {
    pub header: &'a Header,
    pub error: ErrorBody,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub reason: String,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            reason: "Usage".into(),
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            reason: "Parse".into(),
            message: message.into(),
        }
    }

    pub fn verification(reason: &str, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_HYPOTHESIS,
            reason: reason.into(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::UnknownSymbol(_) | Error::UnknownVertex(_) | Error::EmptyWord => EXIT_PARSE,
            Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_HYPOTHESIS,
        };
        Failure {
            code,
            reason: e.kind().into(),
            message: e.to_string(),
        }
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

pub fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    hex::encode(h.finalize())
}

pub fn read_input(path: &Path) -> CmdResult<Vec<u8>> {
    let bytes = fs::read(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(Failure::usage(format!("{}: empty input", path.display())));
    }
    Ok(bytes)
}

pub fn parse_sft_bytes(bytes: &[u8]) -> CmdResult<SftPresentation> {
    let text = std::str::from_utf8(bytes).map_err(|e| Failure::parse(e.to_string()))?;
    Ok(symchaos_core::shift::parse_sft(text)?)
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Writes to the file when given, else to stdout.
pub fn emit(output: Option<&PathBuf>, text: &str) -> CmdResult<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
