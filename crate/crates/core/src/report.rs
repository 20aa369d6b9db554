//! JSON report documents and domain snapshots.

use std::io;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::domain::{CellComplex, HorocycleSystem, IdealDomain};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Pretty JSON whose floats carry 17 significant digits in exponent form.
struct FloatFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for FloatFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes with fixed-precision floats; non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let fmt = FloatFormatter {
        inner: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Input(format!("serialization failed: {e}")))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Input(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))
}

/// Top-level document written by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument<P, T> {
    pub schema_version: String,
    pub command: String,
    pub parameters: P,
    pub pass: bool,
    pub result: T,
}

impl<P: Serialize, T: Serialize> ReportDocument<P, T> {
    pub fn new(command: &str, parameters: P, pass: bool, result: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            parameters,
            pass,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}

/// A domain with its horocycle system, as read by `extend --in`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSnapshot {
    pub schema_version: String,
    pub complex: CellComplex,
    pub horocycles: HorocycleSystem,
}

impl DomainSnapshot {
    pub fn new(domain: &IdealDomain, hs: &HorocycleSystem) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            complex: domain.complex.clone(),
            horocycles: hs.clone(),
        }
    }

    /// Rebuilds the boundary cycle and validates the horocycles.
    pub fn into_domain(self) -> Result<(IdealDomain, HorocycleSystem)> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Input(format!(
                "unsupported schema version {:?}",
                self.schema_version
            )));
        }
        self.horocycles.validate(&self.complex)?;
        Ok((IdealDomain::new(self.complex)?, self.horocycles))
    }
}
