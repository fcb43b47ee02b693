//! JSON documents read and written by the CLI, and their CSV/text renderings.
//!
//! Field order in every struct is the documented key order of the output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use planelab_core::kakeya::MultiplicityMap;
use planelab_core::search::{SearchMode, SearchReport, Target};
use planelab_core::{
    AffineLine, CollinearHypergraph, Direction, FaberReport, FieldError, FieldSpec, IncidenceError,
    Permutation,
};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("unsupported output format `{0}` (expected text, json or csv)")]
    UnsupportedFormat(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Permutation(#[from] IncidenceError),
    #[error("cannot parse `{0}` as an element index")]
    BadToken(String),
    #[error(
        "plain-text permutations need a prime number of entries or an explicit field, got {0}"
    )]
    UnknownField(usize),
    #[error("field in the permutation file does not match the command-line field")]
    FieldMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(FormatError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// `{"p": int, "n": int, "modulus": [int, ...]}`, modulus constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

impl FieldDescriptor {
    pub fn of(field: &FieldSpec) -> Self {
        FieldDescriptor {
            p: field.characteristic(),
            n: field.degree(),
            modulus: field.modulus().to_vec(),
        }
    }

    pub fn build(&self) -> Result<FieldSpec, FieldError> {
        FieldSpec::new(self.p, self.n, Some(&self.modulus))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationFile {
    pub field: FieldDescriptor,
    pub images: Vec<u32>,
}

impl PermutationFile {
    pub fn of(alpha: &Permutation) -> Self {
        PermutationFile {
            field: FieldDescriptor::of(alpha.field()),
            images: alpha.image_indices(),
        }
    }
}

pub fn parse_tokens(text: &str) -> Result<Vec<u32>, FormatError> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| FormatError::BadToken(t.to_string())))
        .collect()
}

/// Reads a permutation file: JSON with an embedded field, or whitespace
/// separated images. Plain text uses `field` if given, otherwise the prime
/// field whose order is the number of entries.
pub fn read_permutation(
    text: &str,
    field: Option<Arc<FieldSpec>>,
) -> Result<Permutation, FormatError> {
    if text.trim_start().starts_with('{') {
        let file: PermutationFile = serde_json::from_str(text)?;
        let from_file = Arc::new(file.field.build()?);
        if let Some(f) = field {
            if *f != *from_file {
                return Err(FormatError::FieldMismatch);
            }
        }
        return Ok(Permutation::new(from_file, &file.images)?);
    }
    let tokens = parse_tokens(text)?;
    let field = match field {
        Some(f) => f,
        None => {
            let q =
                u32::try_from(tokens.len()).map_err(|_| FormatError::UnknownField(tokens.len()))?;
            if !planelab_core::field::is_prime(q) {
                return Err(FormatError::UnknownField(tokens.len()));
            }
            Arc::new(FieldSpec::prime(q)?)
        }
    };
    Ok(Permutation::new(field, &tokens)?)
}

/// Line direction literal: `"v"` or the slope index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirLiteral {
    Vertical,
    Slope(u32),
}

impl Serialize for DirLiteral {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DirLiteral::Vertical => s.serialize_str("v"),
            DirLiteral::Slope(i) => s.serialize_u32(*i),
        }
    }
}

impl<'de> Deserialize<'de> for DirLiteral {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct DirVisitor;
        impl Visitor<'_> for DirVisitor {
            type Value = DirLiteral;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("\"v\" or a slope index")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<DirLiteral, E> {
                if v == "v" {
                    Ok(DirLiteral::Vertical)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<DirLiteral, E> {
                u32::try_from(v)
                    .map(DirLiteral::Slope)
                    .map_err(|_| E::invalid_value(de::Unexpected::Unsigned(v), &self))
            }
        }
        d.deserialize_any(DirVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineLiteral {
    pub dir: DirLiteral,
    pub offset: u32,
}

impl From<&AffineLine> for LineLiteral {
    fn from(l: &AffineLine) -> Self {
        let dir = match l.direction {
            Direction::Slope(s) => DirLiteral::Slope(s.index()),
            Direction::Vertical => DirLiteral::Vertical,
        };
        LineLiteral {
            dir,
            offset: l.offset.index(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiReport {
    pub q: u32,
    pub psi: u64,
    pub norm: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub members: Vec<u32>,
    pub carrier: LineLiteral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphReport {
    pub q: u32,
    pub psi: u64,
    pub norm: u64,
    pub edges: Vec<EdgeRecord>,
}

impl From<&CollinearHypergraph> for HypergraphReport {
    fn from(h: &CollinearHypergraph) -> Self {
        HypergraphReport {
            q: h.perm.order(),
            psi: h.psi,
            norm: h.norm,
            edges: h
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    members: e.members.clone(),
                    carrier: (&e.carrier).into(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: [u32; 2],
    pub mu: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KakeyaReport {
    pub q: u32,
    pub size: u64,
    pub excess: u64,
    pub moment1: u64,
    pub moment2: u64,
    pub faber_holds: bool,
    pub mu_histogram: BTreeMap<u32, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointRecord>>,
}

impl KakeyaReport {
    pub fn new(faber: &FaberReport, map: &MultiplicityMap, emit_points: bool) -> Self {
        let points = emit_points.then(|| {
            map.entries
                .iter()
                .map(|(p, mu)| PointRecord {
                    point: [p.x.index(), p.y.index()],
                    mu: *mu,
                })
                .collect()
        });
        KakeyaReport {
            q: faber.q,
            size: faber.size,
            excess: faber.excess,
            moment1: faber.moment1,
            moment2: faber.moment2,
            faber_holds: faber.formula_holds,
            mu_histogram: faber.mu_histogram.clone(),
            points,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetName {
    MinPsi,
    MinKakeya,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRecord {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReportJson {
    pub q: u32,
    pub target: TargetName,
    pub mode: ModeRecord,
    pub minimum: u64,
    pub bound: u64,
    pub attained_bound: bool,
    pub witnesses: Vec<Vec<u32>>,
    pub witnesses_truncated: bool,
    pub witness_total: Option<u64>,
    pub explored: u64,
    /// Wall time; only recorded on request so default output stays byte-stable.
    pub elapsed_s: Option<f64>,
    pub workers: usize,
}

impl SearchReportJson {
    pub fn new(r: &SearchReport, elapsed_s: Option<f64>, workers: usize) -> Self {
        SearchReportJson {
            q: r.q,
            target: match r.target {
                Target::MinPsi => TargetName::MinPsi,
                Target::MinKakeya => TargetName::MinKakeya,
            },
            mode: match r.mode {
                SearchMode::Exhaustive => ModeRecord::Exhaustive,
                SearchMode::Random { samples, seed } => ModeRecord::Random { samples, seed },
            },
            minimum: r.minimum,
            bound: r.bound,
            attained_bound: r.attained_bound,
            witnesses: r.witnesses.clone(),
            witnesses_truncated: r.witnesses_truncated,
            witness_total: r.witness_total,
            explored: r.explored,
            elapsed_s,
            workers,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    All,
    Samples { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Permutation,
    Family,
}

/// The first failing case: the permutation images or the family offsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub kind: CaseKind,
    pub data: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub q: u32,
    pub mode: VerifyMode,
    pub permutations: u64,
    pub families: u64,
    pub checks: Vec<CheckTally>,
    pub all_hold: bool,
    pub first_violation: Option<Violation>,
}

/// A report that can be written in every output format.
pub trait Emit: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> String;
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// Byte-stable serialization; JSON and CSV end with a newline.
pub fn emit<R: Emit>(report: &R, format: OutputFormat) -> Result<String, FormatError> {
    Ok(match format {
        OutputFormat::Text => report.text(),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => report.csv(),
    })
}

impl Emit for PsiReport {
    fn text(&self) -> String {
        format!("q={} psi={} norm={}\n", self.q, self.psi, self.norm)
    }

    fn csv(&self) -> String {
        format!("q,psi,norm\n{},{},{}\n", self.q, self.psi, self.norm)
    }
}

impl Emit for HypergraphReport {
    fn text(&self) -> String {
        let mut s = format!(
            "q={} psi={} norm={} edges={}\n",
            self.q,
            self.psi,
            self.norm,
            self.edges.len()
        );
        for e in self.edges.iter().filter(|e| e.members.len() > 2) {
            let dir = match e.carrier.dir {
                DirLiteral::Vertical => "v".to_string(),
                DirLiteral::Slope(i) => i.to_string(),
            };
            let _ = writeln!(
                s,
                "  {{{}}} on slope {dir} offset {}",
                join(&e.members),
                e.carrier.offset
            );
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("members,dir,offset\n");
        for e in &self.edges {
            let dir = match e.carrier.dir {
                DirLiteral::Vertical => "v".to_string(),
                DirLiteral::Slope(i) => i.to_string(),
            };
            let _ = writeln!(s, "{},{dir},{}", join(&e.members), e.carrier.offset);
        }
        s
    }
}

impl Emit for KakeyaReport {
    fn text(&self) -> String {
        let hist = self
            .mu_histogram
            .iter()
            .map(|(mu, n)| format!("{mu}:{n}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mut s = format!(
            "q={} size={} excess={} moments=({}, {}) faber={} mu[{}]\n",
            self.q,
            self.size,
            self.excess,
            self.moment1,
            self.moment2,
            if self.faber_holds { "holds" } else { "FAILS" },
            hist
        );
        for p in self.points.iter().flatten() {
            let _ = writeln!(s, "  ({}, {}) mu={}", p.point[0], p.point[1], p.mu);
        }
        s
    }

    /// Histogram rows, or one row per point when points were requested.
    fn csv(&self) -> String {
        match &self.points {
            Some(points) => {
                let mut s = String::from("x,y,mu\n");
                for p in points {
                    let _ = writeln!(s, "{},{},{}", p.point[0], p.point[1], p.mu);
                }
                s
            }
            None => {
                let mut s = String::from("mu,count\n");
                for (mu, n) in &self.mu_histogram {
                    let _ = writeln!(s, "{mu},{n}");
                }
                s
            }
        }
    }
}

impl Emit for SearchReportJson {
    fn text(&self) -> String {
        let target = match self.target {
            TargetName::MinPsi => "min-psi",
            TargetName::MinKakeya => "min-kakeya",
        };
        let mut s = format!(
            "q={} target={target} minimum={} bound={} attained={} explored={}\n",
            self.q, self.minimum, self.bound, self.attained_bound, self.explored
        );
        for w in &self.witnesses {
            let _ = writeln!(s, "  [{}]", join(w));
        }
        if self.witnesses_truncated {
            s.push_str("  (witness list truncated)\n");
        }
        if let Some(t) = self.elapsed_s {
            let _ = writeln!(s, "elapsed {t:.3}s on {} worker(s)", self.workers);
        }
        s
    }

    /// One row per witness.
    fn csv(&self) -> String {
        let mut s = String::from("q,target,minimum,bound,attained_bound,witness\n");
        let target = match self.target {
            TargetName::MinPsi => "min-psi",
            TargetName::MinKakeya => "min-kakeya",
        };
        for w in &self.witnesses {
            let _ = writeln!(
                s,
                "{},{target},{},{},{},{}",
                self.q,
                self.minimum,
                self.bound,
                self.attained_bound,
                join(w)
            );
        }
        s
    }
}

impl Emit for VerifyReport {
    fn text(&self) -> String {
        let mut s = format!(
            "q={} permutations={} families={} {}\n",
            self.q,
            self.permutations,
            self.families,
            if self.all_hold {
                "all identities hold"
            } else {
                "VIOLATION"
            }
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "  {:<22} passed={} failed={}",
                c.name, c.passed, c.failed
            );
        }
        if let Some(v) = &self.first_violation {
            let _ = writeln!(
                s,
                "first violation: {} on {:?} [{}]",
                v.check,
                v.kind,
                join(&v.data)
            );
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("check,passed,failed\n");
        for c in &self.checks {
            let _ = writeln!(s, "{},{},{}", c.name, c.passed, c.failed);
        }
        s
    }
}
