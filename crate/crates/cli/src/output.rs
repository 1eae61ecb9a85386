//! Self-describing result records and their CSV / JSON encodings.
//!
//! Both encodings carry the same header information (schema version, command,
//! parameters, typed columns, provenance) and the same cell text, so a record
//! parsed back from either format compares equal to the one that was written.

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Integer,
    Float,
    /// Exact rational written as `"num/den"`.
    Rational,
    Text,
    Bool,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Integer => "integer",
            Kind::Float => "float",
            Kind::Rational => "rational",
            Kind::Text => "text",
            Kind::Bool => "bool",
        }
    }
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "integer" => Kind::Integer,
            "float" => Kind::Float,
            "rational" => Kind::Rational,
            "text" => Kind::Text,
            "bool" => Kind::Bool,
            other => return Err(malformed(format!("unknown column kind `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    /// Arbitrary-size integer kept as its decimal digits.
    Integer(String),
    Float(f64),
    Rational(String),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    pub fn int(v: impl fmt::Display) -> Self {
        Cell::Integer(v.to_string())
    }

    pub fn text(v: impl fmt::Display) -> Self {
        Cell::Text(v.to_string())
    }

    pub fn rational(v: impl fmt::Display) -> Self {
        Cell::Rational(v.to_string())
    }
}

/// 17 significant digits, enough to round-trip any `f64`, with a signed
/// exponent (`1.0000000000000000e+0`) so JSON and CSV text agree byte for byte.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        let s = format!("{x:.16e}");
        match s.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => s,
        }
    }
}

fn parse_float(s: &str) -> Result<f64, CliError> {
    s.parse::<f64>()
        .map_err(|_| malformed(format!("bad float `{s}`")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub kind: Kind,
}

impl Column {
    pub fn new(name: &str, kind: Kind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub method: String,
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn malformed(msg: String) -> CliError {
    CliError::Malformed(msg)
}

impl OutputRecord {
    pub fn new(command: &str, columns: Vec<Column>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            parameters: Vec::new(),
            columns,
            rows: Vec::new(),
            provenance: Provenance::default(),
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.parameters.push((key.into(), value.to_string()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, CliError> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }

    // ---- JSON ----

    fn parameters_json(&self) -> Value {
        Value::Object(
            self.parameters
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect(),
        )
    }

    fn provenance_json(&self) -> Value {
        let mut p = Map::new();
        p.insert(
            "seed".into(),
            self.provenance
                .seed
                .map_or(Value::Null, |s| Value::Number(s.into())),
        );
        p.insert(
            "method".into(),
            Value::String(self.provenance.method.clone()),
        );
        p.insert(
            "tolerances".into(),
            Value::Object(
                self.provenance
                    .tolerances
                    .iter()
                    .map(|(k, v)| (k.clone(), float_json(*v)))
                    .collect(),
            ),
        );
        Value::Object(p)
    }

    pub fn to_json(&self) -> String {
        let mut top = Map::new();
        top.insert(
            "schema_version".into(),
            Value::String(self.schema_version.clone()),
        );
        top.insert("command".into(), Value::String(self.command.clone()));
        top.insert("parameters".into(), self.parameters_json());
        top.insert(
            "columns".into(),
            Value::Array(
                self.columns
                    .iter()
                    .map(|c| {
                        let mut m = Map::new();
                        m.insert("name".into(), Value::String(c.name.clone()));
                        m.insert("kind".into(), Value::String(c.kind.name().into()));
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        top.insert(
            "rows".into(),
            Value::Array(
                self.rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            self.columns
                                .iter()
                                .zip(row)
                                .map(|(c, cell)| (c.name.clone(), cell_json(cell)))
                                .collect(),
                        )
                    })
                    .collect(),
            ),
        );
        top.insert("provenance".into(), self.provenance_json());
        let mut out = serde_json::to_string_pretty(&Value::Object(top))
            .expect("JSON values always serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        let top = v
            .as_object()
            .ok_or_else(|| malformed("top level is not an object".into()))?;
        let field = |k: &str| {
            top.get(k)
                .ok_or_else(|| malformed(format!("missing `{k}`")))
        };
        let string = |v: &Value| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| malformed(format!("expected string, got {v}")))
        };

        let schema_version = string(field("schema_version")?)?;
        let command = string(field("command")?)?;
        let parameters = field("parameters")?
            .as_object()
            .ok_or_else(|| malformed("parameters is not an object".into()))?
            .iter()
            .map(|(k, v)| Ok((k.clone(), string(v)?)))
            .collect::<Result<_, CliError>>()?;
        let columns = field("columns")?
            .as_array()
            .ok_or_else(|| malformed("columns is not an array".into()))?
            .iter()
            .map(|c| {
                Ok(Column {
                    name: string(c.get("name").unwrap_or(&Value::Null))?,
                    kind: string(c.get("kind").unwrap_or(&Value::Null))?.parse()?,
                })
            })
            .collect::<Result<Vec<Column>, CliError>>()?;
        let rows = field("rows")?
            .as_array()
            .ok_or_else(|| malformed("rows is not an array".into()))?
            .iter()
            .map(|row| {
                columns
                    .iter()
                    .map(|c| cell_from_json(row.get(&c.name).unwrap_or(&Value::Null), c.kind))
                    .collect()
            })
            .collect::<Result<_, CliError>>()?;
        let provenance = provenance_from_json(field("provenance")?)?;
        Ok(Self {
            schema_version,
            command,
            parameters,
            columns,
            rows,
            provenance,
        })
    }

    // ---- CSV ----

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# schema_version: {}\n", self.schema_version));
        out.push_str(&format!("# command: {}\n", self.command));
        out.push_str(&format!("# parameters: {}\n", self.parameters_json()));
        let kinds: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{}:{}", c.name, c.kind.name()))
            .collect();
        out.push_str(&format!("# columns: {}\n", kinds.join(",")));
        out.push_str(&format!("# provenance: {}\n", self.provenance_json()));

        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))
            .expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text))
                .expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("cells are UTF-8"));
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut meta: Vec<(&str, &str)> = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else {
                break;
            };
            body_start += line.len();
            let rest = rest.trim_end_matches('\n').trim_start();
            let (k, v) = rest
                .split_once(": ")
                .ok_or_else(|| malformed(format!("bad comment line `{rest}`")))?;
            meta.push((k, v));
        }
        let get = |k: &str| {
            meta.iter()
                .find(|(key, _)| *key == k)
                .map(|(_, v)| *v)
                .ok_or_else(|| malformed(format!("missing `# {k}:` line")))
        };
        let schema_version = get("schema_version")?.to_string();
        let command = get("command")?.to_string();
        let params: Value =
            serde_json::from_str(get("parameters")?).map_err(|e| malformed(e.to_string()))?;
        let parameters = params
            .as_object()
            .ok_or_else(|| malformed("parameters is not an object".into()))?
            .iter()
            .map(|(k, v)| {
                v.as_str()
                    .map(|s| (k.clone(), s.to_string()))
                    .ok_or_else(|| malformed(format!("parameter `{k}` is not a string")))
            })
            .collect::<Result<_, CliError>>()?;
        let columns = get("columns")?
            .split(',')
            .map(|spec| {
                let (name, kind) = spec
                    .rsplit_once(':')
                    .ok_or_else(|| malformed(format!("bad column spec `{spec}`")))?;
                Ok(Column::new(name, kind.parse()?))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let prov: Value =
            serde_json::from_str(get("provenance")?).map_err(|e| malformed(e.to_string()))?;
        let provenance = provenance_from_json(&prov)?;

        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(&text.as_bytes()[body_start..]);
        let header = reader
            .headers()
            .map_err(|e| malformed(e.to_string()))?
            .clone();
        if header.iter().ne(columns.iter().map(|c| c.name.as_str())) {
            return Err(malformed(
                "header row does not match the declared columns".into(),
            ));
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| malformed(e.to_string()))?;
            rows.push(
                rec.iter()
                    .zip(&columns)
                    .map(|(s, c)| cell_from_text(s, c.kind))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(Self {
            schema_version,
            command,
            parameters,
            columns,
            rows,
            provenance,
        })
    }
}

fn float_json(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(
            format_float(x)
                .parse::<Number>()
                .expect("formatted float is valid JSON"),
        )
    } else {
        Value::String(format_float(x))
    }
}

fn cell_json(cell: &Cell) -> Value {
    match cell {
        Cell::Integer(s) => {
            Value::Number(s.parse::<Number>().expect("integer digits are valid JSON"))
        }
        Cell::Float(x) => float_json(*x),
        Cell::Rational(s) | Cell::Text(s) => Value::String(s.clone()),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Null => Value::Null,
    }
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Integer(s) | Cell::Rational(s) | Cell::Text(s) => s.clone(),
        Cell::Float(x) => format_float(*x),
        Cell::Bool(b) => b.to_string(),
        Cell::Null => String::new(),
    }
}

fn cell_from_text(s: &str, kind: Kind) -> Result<Cell, CliError> {
    if s.is_empty() && kind != Kind::Text {
        return Ok(Cell::Null);
    }
    Ok(match kind {
        Kind::Integer => {
            let digits = s.strip_prefix('-').unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed(format!("bad integer `{s}`")));
            }
            Cell::Integer(s.to_string())
        }
        Kind::Float => Cell::Float(parse_float(s)?),
        Kind::Rational => Cell::Rational(s.to_string()),
        Kind::Text => Cell::Text(s.to_string()),
        Kind::Bool => Cell::Bool(match s {
            "true" => true,
            "false" => false,
            _ => return Err(malformed(format!("bad bool `{s}`"))),
        }),
    })
}

fn cell_from_json(v: &Value, kind: Kind) -> Result<Cell, CliError> {
    match (v, kind) {
        (Value::Null, _) => Ok(Cell::Null),
        (Value::Number(n), Kind::Integer | Kind::Float) => cell_from_text(&n.to_string(), kind),
        (Value::String(s), Kind::Float) => Ok(Cell::Float(parse_float(s)?)),
        (Value::String(s), Kind::Rational) => Ok(Cell::Rational(s.clone())),
        (Value::String(s), Kind::Text) => Ok(Cell::Text(s.clone())),
        (Value::Bool(b), Kind::Bool) => Ok(Cell::Bool(*b)),
        _ => Err(malformed(format!(
            "value {v} does not fit column kind {}",
            kind.name()
        ))),
    }
}

fn provenance_from_json(v: &Value) -> Result<Provenance, CliError> {
    let seed = match v.get("seed") {
        None | Some(Value::Null) => None,
        Some(s) => Some(
            s.as_u64()
                .or_else(|| s.as_number().and_then(|n| n.to_string().parse().ok()))
                .ok_or_else(|| malformed(format!("bad seed {s}")))?,
        ),
    };
    let method = v
        .get("method")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("provenance lacks a method".into()))?
        .to_string();
    let tolerances = v
        .get("tolerances")
        .and_then(Value::as_object)
        .ok_or_else(|| malformed("provenance lacks tolerances".into()))?
        .iter()
        .map(|(k, t)| {
            let x = match t {
                Value::Number(n) => parse_float(&n.to_string())?,
                Value::String(s) => parse_float(s)?,
                _ => return Err(malformed(format!("bad tolerance {t}"))),
            };
            Ok((k.clone(), x))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(Provenance {
        seed,
        method,
        tolerances,
    })
}
