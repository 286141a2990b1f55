//! System documents (JSON or TOML) and the verdict and orbit reports
//! produced from them.

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decider::{
    decide_system, validate_witness, DecideConfig, DecideError, Decision, Diagnostics,
    InfinitenessWitness, Locus, RecursionStep, Verdict,
};
use crate::dynamics::{cyclic_periodicity, m_periodicity, orbit_bfs, pair_criterion_probe, MonoidAction, Periodicity};
use crate::dynamics::{DynamicsError, UnboundedWitness};
use crate::geometry::{
    bigint_to_string, GeometryError, Morphism, OrderCertificate, PowerEvidence, TruncElem, Variety,
};
use crate::parse::{parse_polynomial, parse_rational, ParseError};
use crate::poly::Polynomial;
use crate::quiver::{word_string, QuiverError, System};

pub const EXIT_FINITE: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_INFINITE: i32 = 10;
pub const EXIT_ABORTED: i32 = 20;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed document: {0}")]
    Format(String),
    #[error("{context}: {source}")]
    Parse { context: String, source: ParseError },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("invalid name {0:?}")]
    InvalidName(String),
    #[error("{context}: {source}")]
    Geometry { context: String, source: GeometryError },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("invalid witness: {0}")]
    Witness(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TraceLevel {
    #[default]
    None,
    Steps,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SafetyCaps {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_term_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_set_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub safety_caps: Option<SafetyCaps>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_level: Option<TraceLevel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VertexDoc {
    pub name: String,
    pub vars: Vec<String>,
    #[serde(default)]
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ComponentDoc {
    pub name: String,
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OrbitDoc {
    pub vertex: String,
    pub point: Vec<String>,
    /// Arrow names acting on the vertex; all of its endomorphism arrows when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    /// Irreducible components of the orbit closure, when known; they are
    /// handed to the decider.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SystemDocument {
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub arrows: Vec<ArrowDoc>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitDoc>,
}

fn is_default(o: &Options) -> bool {
    *o == Options::default()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Toml,
}

impl Format {
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Format::Toml,
            _ => Format::Json,
        }
    }
}

impl SystemDocument {
    pub fn parse(text: &str, format: Format) -> Result<Self, InputError> {
        match format {
            Format::Json => serde_json::from_str(text).map_err(|e| InputError::Format(e.to_string())),
            Format::Toml => toml::from_str(text).map_err(|e| InputError::Format(e.to_string())),
        }
    }

    pub fn to_text(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("documents serialize") + "\n",
            Format::Toml => toml::to_string(self).expect("documents serialize"),
        }
    }

    pub fn read(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, Format::from_path(path))
    }

    /// Builds the system, checking names, parsing every polynomial and
    /// verifying that every arrow is a well-defined morphism.
    pub fn load(&self) -> Result<System, InputError> {
        let mut vertices = Vec::new();
        for v in &self.vertices {
            check_name(&v.name)?;
            let mut seen = HashSet::new();
            for var in &v.vars {
                if !seen.insert(var) || parse_polynomial(var, &v.vars).is_err() {
                    return Err(InputError::InvalidName(var.clone()));
                }
            }
            let gens = parse_all(&v.ideal, &v.vars, &format!("ideal of {}", v.name))?;
            let variety = Variety::new(v.name.clone(), v.vars.clone(), gens).map_err(|source| InputError::Geometry {
                context: format!("vertex {}", v.name),
                source,
            })?;
            vertices.push(Arc::new(variety));
        }
        let mut system = System::new(vertices)?;
        for a in &self.arrows {
            check_name(&a.name)?;
            let src = system
                .vertex_index(&a.src)
                .ok_or_else(|| InputError::UnknownVertex(a.src.clone()))?;
            let dst = system
                .vertex_index(&a.dst)
                .ok_or_else(|| InputError::UnknownVertex(a.dst.clone()))?;
            let source = system.vertex(src).clone();
            let coords = parse_all(&a.coords, source.vars(), &format!("arrow {}", a.name))?;
            let m = Morphism::new(source, system.vertex(dst).clone(), coords).map_err(|source| InputError::Geometry {
                context: format!("arrow {}", a.name),
                source,
            })?;
            system.add_arrow(a.name.clone(), src, dst, m)?;
        }
        Ok(system)
    }
}

fn check_name(name: &str) -> Result<(), InputError> {
    if name.is_empty() || name.starts_with("id_") || name.contains('∘') || name.chars().any(char::is_whitespace) {
        return Err(InputError::InvalidName(name.to_string()));
    }
    Ok(())
}

fn parse_all(texts: &[String], vars: &[String], context: &str) -> Result<Vec<Polynomial>, InputError> {
    texts
        .iter()
        .map(|t| {
            parse_polynomial(t, vars).map_err(|source| InputError::Parse {
                context: format!("{context}: {t:?}"),
                source,
            })
        })
        .collect()
}

/// Effective configuration after applying command-line overrides to the
/// document options.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub decide: DecideConfig,
    pub orbit_budget: usize,
    pub word_radius: usize,
    pub trace: TraceLevel,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            decide: DecideConfig::default(),
            orbit_budget: 10_000,
            word_radius: 4,
            trace: TraceLevel::None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub prime_bound: Option<u64>,
    pub point_set_cap: Option<usize>,
    pub orbit_budget: Option<usize>,
    pub word_radius: Option<usize>,
    pub trace: Option<TraceLevel>,
}

impl Settings {
    pub fn resolve(options: &Options, overrides: &Overrides) -> Settings {
        let d = Settings::default();
        let caps = options.safety_caps.clone().unwrap_or_default();
        Settings {
            decide: DecideConfig {
                prime_bound: overrides.prime_bound.or(options.prime_bound).unwrap_or(d.decide.prime_bound),
                point_set_cap: overrides
                    .point_set_cap
                    .or(options.point_set_cap)
                    .unwrap_or(d.decide.point_set_cap),
                closure_cap: caps.closure_cap.unwrap_or(d.decide.closure_cap),
                power_term_cap: caps.power_term_cap.unwrap_or(d.decide.power_term_cap),
            },
            orbit_budget: overrides.orbit_budget.or(options.orbit_budget).unwrap_or(d.orbit_budget),
            word_radius: overrides.word_radius.or(options.word_radius).unwrap_or(d.word_radius),
            trace: overrides.trace.or(options.trace_level).unwrap_or(d.trace),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum LocusDoc {
    Vertex(String),
    Image { source: Box<LocusDoc>, word: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StepDoc {
    Component(Vec<LocusDoc>),
    WithoutArrow(String),
    Image(LocusDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum EvidenceDoc {
    NormalForm { coords: Vec<String> },
    ModularMotion { prime: u64, point: Vec<u64>, image: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum CertificateDoc {
    NotInjective {
        prime: u64,
        a: Vec<TruncElem>,
        b: Vec<TruncElem>,
        image: Vec<TruncElem>,
    },
    PowerNotIdentity {
        exponent: u64,
        primes: [u64; 2],
        evidence: EvidenceDoc,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum WitnessDoc {
    InfiniteOrderEndo {
        locus: LocusDoc,
        word: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponent: Option<u64>,
        certificate: CertificateDoc,
    },
    KernelCollision {
        locus: LocusDoc,
        f: String,
        g: String,
        g_order: u64,
        h: String,
        certificate: CertificateDoc,
    },
    SubsystemInfinite {
        path: Vec<StepDoc>,
        inner: Box<WitnessDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HomSetDoc {
    pub src: String,
    pub dst: String,
    pub morphisms: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeDoc {
    pub locus: LocusDoc,
    pub primes: [u64; 2],
    pub points: [Vec<u64>; 2],
    pub sizes: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScopeDoc {
    pub d: String,
    pub probes: Vec<ProbeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub struct DiagnosticsDoc {
    pub prime_bound: u64,
    pub point_set_cap: usize,
    pub scopes: Vec<ScopeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_validated: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Finite,
    Infinite,
    Aborted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictDocument {
    pub verdict: VerdictKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom_table: Option<Vec<HomSetDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    pub diagnostics: DiagnosticsDoc,
}

impl VerdictDocument {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            VerdictKind::Finite => EXIT_FINITE,
            VerdictKind::Infinite => EXIT_INFINITE,
            VerdictKind::Aborted => EXIT_ABORTED,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    /// The part of the document that does not depend on arrow order: the
    /// verdict kind, the order and the hom table.
    pub fn canonical_summary(&self) -> String {
        let summary = serde_json::json!({
            "verdict": self.verdict,
            "order": self.order,
            "homTable": self.hom_table,
        });
        serde_json::to_string_pretty(&summary).expect("documents serialize")
    }
}

/// Runs the decision procedure on a loaded system.
pub fn decide_document(system: &System, settings: &Settings) -> VerdictDocument {
    let cfg = settings.decide;
    let mut diagnostics = DiagnosticsDoc {
        prime_bound: cfg.prime_bound,
        point_set_cap: cfg.point_set_cap,
        ..Default::default()
    };
    match decide_system(system, &cfg) {
        Ok(Decision {
            verdict,
            diagnostics: d,
        }) => {
            diagnostics.scopes = scopes_doc(system, &d);
            match verdict {
                Verdict::Finite { table } => {
                    let hom_table = table
                        .canonical_listing()
                        .into_iter()
                        .map(|((s, d), morphisms)| HomSetDoc {
                            src: system.vertex(s).name().to_string(),
                            dst: system.vertex(d).name().to_string(),
                            morphisms,
                        })
                        .collect();
                    VerdictDocument {
                        verdict: VerdictKind::Finite,
                        order: Some(table.len()),
                        hom_table: Some(hom_table),
                        witness: None,
                        diagnostics,
                    }
                }
                Verdict::Infinite { witness } => {
                    let validated = validate_witness(&witness, system, &cfg);
                    if let Err(e) = &validated {
                        log::error!("witness failed validation: {e}");
                    }
                    diagnostics.witness_validated = Some(validated.is_ok());
                    VerdictDocument {
                        verdict: VerdictKind::Infinite,
                        order: None,
                        hom_table: None,
                        witness: Some(witness_to_doc(system, &witness)),
                        diagnostics,
                    }
                }
            }
        }
        Err(e) => {
            diagnostics.error = Some(e.to_string());
            VerdictDocument {
                verdict: VerdictKind::Aborted,
                order: None,
                hom_table: None,
                witness: None,
                diagnostics,
            }
        }
    }
}

/// Loads and decides a document: the verdict document, or an input error
/// (exit status 1).
pub fn run_decide(document: &SystemDocument, overrides: &Overrides) -> Result<VerdictDocument, InputError> {
    let settings = Settings::resolve(&document.options, overrides);
    let system = document.load()?;
    Ok(decide_document(&system, &settings))
}

fn scopes_doc(system: &System, d: &Diagnostics) -> Vec<ScopeDoc> {
    d.scopes
        .iter()
        .map(|s| ScopeDoc {
            d: bigint_to_string(&s.d),
            probes: s
                .probes
                .iter()
                .map(|p| ProbeDoc {
                    locus: locus_to_doc(system, &p.locus),
                    primes: [p.primes.0, p.primes.1],
                    points: [p.points.0.clone(), p.points.1.clone()],
                    sizes: [p.sizes.0, p.sizes.1],
                })
                .collect(),
        })
        .collect()
}

pub fn locus_to_doc(system: &System, locus: &Locus) -> LocusDoc {
    match locus {
        Locus::Vertex(v) => LocusDoc::Vertex(system.vertex(*v).name().to_string()),
        Locus::Image { source, word } => LocusDoc::Image {
            source: Box::new(locus_to_doc(system, source)),
            word: word_string(system, source.ambient_vertex(system), word),
        },
    }
}

fn coords_strings(system: &System, locus: &Locus, coords: &[Polynomial]) -> Vec<String> {
    let vars = system.vertex(locus.ambient_vertex(system)).vars();
    coords.iter().map(|c| c.display(vars).to_string()).collect()
}

fn certificate_to_doc(system: &System, locus: &Locus, c: &OrderCertificate) -> CertificateDoc {
    match c {
        OrderCertificate::NotInjective { prime, a, b, image } => CertificateDoc::NotInjective {
            prime: *prime,
            a: a.clone(),
            b: b.clone(),
            image: image.clone(),
        },
        OrderCertificate::PowerNotIdentity {
            exponent,
            primes,
            evidence,
        } => CertificateDoc::PowerNotIdentity {
            exponent: *exponent,
            primes: [primes.0, primes.1],
            evidence: match evidence {
                PowerEvidence::NormalForm { coords } => EvidenceDoc::NormalForm {
                    coords: coords_strings(system, locus, coords),
                },
                PowerEvidence::ModularMotion { prime, point, image } => EvidenceDoc::ModularMotion {
                    prime: *prime,
                    point: point.clone(),
                    image: image.clone(),
                },
            },
        },
    }
}

pub fn witness_to_doc(system: &System, w: &InfinitenessWitness) -> WitnessDoc {
    match w {
        InfinitenessWitness::InfiniteOrderEndo {
            locus,
            word,
            certificate,
        } => {
            let v = locus.ambient_vertex(system);
            WitnessDoc::InfiniteOrderEndo {
                locus: locus_to_doc(system, locus),
                word: word_string(system, v, word),
                exponent: certificate.exponent(),
                certificate: certificate_to_doc(system, locus, certificate),
            }
        }
        InfinitenessWitness::KernelCollision {
            locus,
            f_word,
            g_word,
            g_order,
            h_word,
            certificate,
        } => {
            let v = locus.ambient_vertex(system);
            WitnessDoc::KernelCollision {
                locus: locus_to_doc(system, locus),
                f: word_string(system, v, f_word),
                g: word_string(system, v, g_word),
                g_order: *g_order,
                h: word_string(system, v, h_word),
                certificate: certificate_to_doc(system, locus, certificate),
            }
        }
        InfinitenessWitness::SubsystemInfinite { path, inner } => WitnessDoc::SubsystemInfinite {
            path: path
                .iter()
                .map(|step| match step {
                    RecursionStep::Component { loci } => {
                        StepDoc::Component(loci.iter().map(|l| locus_to_doc(system, l)).collect())
                    }
                    RecursionStep::WithoutArrow { word } => {
                        let src = system.arrow(word[word.len() - 1]).src();
                        StepDoc::WithoutArrow(word_string(system, src, word))
                    }
                    RecursionStep::Image { locus } => StepDoc::Image(locus_to_doc(system, locus)),
                })
                .collect(),
            inner: Box::new(witness_to_doc(system, inner)),
        },
    }
}

/// Parses a word such as `g∘f`, or `id_V` for the identity of `V`.
pub fn parse_word(system: &System, text: &str) -> Result<Vec<usize>, InputError> {
    if let Some(v) = text.strip_prefix("id_") {
        system.vertex_index(v).ok_or_else(|| InputError::UnknownVertex(v.to_string()))?;
        return Ok(Vec::new());
    }
    text.split('∘')
        .map(|name| {
            system
                .arrow_index(name.trim())
                .ok_or_else(|| InputError::UnknownArrow(name.trim().to_string()))
        })
        .collect()
}

pub fn locus_from_doc(system: &System, doc: &LocusDoc) -> Result<Locus, InputError> {
    match doc {
        LocusDoc::Vertex(name) => system
            .vertex_index(name)
            .map(Locus::Vertex)
            .ok_or_else(|| InputError::UnknownVertex(name.clone())),
        LocusDoc::Image { source, word } => {
            let word = parse_word(system, word)?;
            if word.is_empty() {
                return Err(InputError::Witness("image locus needs a nonempty word".into()));
            }
            Ok(Locus::Image {
                source: Box::new(locus_from_doc(system, source)?),
                word,
            })
        }
    }
}

fn certificate_from_doc(system: &System, locus: &Locus, doc: &CertificateDoc) -> Result<OrderCertificate, InputError> {
    Ok(match doc {
        CertificateDoc::NotInjective { prime, a, b, image } => OrderCertificate::NotInjective {
            prime: *prime,
            a: a.clone(),
            b: b.clone(),
            image: image.clone(),
        },
        CertificateDoc::PowerNotIdentity {
            exponent,
            primes,
            evidence,
        } => OrderCertificate::PowerNotIdentity {
            exponent: *exponent,
            primes: (primes[0], primes[1]),
            evidence: match evidence {
                EvidenceDoc::NormalForm { coords } => {
                    let vars = system.vertex(locus.ambient_vertex(system)).vars();
                    PowerEvidence::NormalForm {
                        coords: parse_all(coords, vars, "certificate")?,
                    }
                }
                EvidenceDoc::ModularMotion { prime, point, image } => PowerEvidence::ModularMotion {
                    prime: *prime,
                    point: point.clone(),
                    image: image.clone(),
                },
            },
        },
    })
}

pub fn witness_from_doc(system: &System, doc: &WitnessDoc) -> Result<InfinitenessWitness, InputError> {
    Ok(match doc {
        WitnessDoc::InfiniteOrderEndo {
            locus,
            word,
            certificate,
            ..
        } => {
            let locus = locus_from_doc(system, locus)?;
            InfinitenessWitness::InfiniteOrderEndo {
                word: parse_word(system, word)?,
                certificate: certificate_from_doc(system, &locus, certificate)?,
                locus,
            }
        }
        WitnessDoc::KernelCollision {
            locus,
            f,
            g,
            g_order,
            h,
            certificate,
        } => {
            let locus = locus_from_doc(system, locus)?;
            InfinitenessWitness::KernelCollision {
                f_word: parse_word(system, f)?,
                g_word: parse_word(system, g)?,
                g_order: *g_order,
                h_word: parse_word(system, h)?,
                certificate: certificate_from_doc(system, &locus, certificate)?,
                locus,
            }
        }
        WitnessDoc::SubsystemInfinite { path, inner } => InfinitenessWitness::SubsystemInfinite {
            path: path
                .iter()
                .map(|s| {
                    Ok(match s {
                        StepDoc::Component(loci) => RecursionStep::Component {
                            loci: loci
                                .iter()
                                .map(|l| locus_from_doc(system, l))
                                .collect::<Result<_, InputError>>()?,
                        },
                        StepDoc::WithoutArrow(w) => RecursionStep::WithoutArrow {
                            word: parse_word(system, w)?,
                        },
                        StepDoc::Image(l) => RecursionStep::Image {
                            locus: locus_from_doc(system, l)?,
                        },
                    })
                })
                .collect::<Result<_, InputError>>()?,
            inner: Box::new(witness_from_doc(system, inner)?),
        },
    })
}

/// Re-checks the witness section of a verdict document against the system.
pub fn validate_witness_doc(system: &System, doc: &WitnessDoc, cfg: &DecideConfig) -> Result<(), InputError> {
    let w = witness_from_doc(system, doc)?;
    validate_witness(&w, system, cfg).map_err(|e: DecideError| InputError::Witness(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitSummary {
    pub complete: bool,
    pub size: usize,
    pub points: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum PeriodicityDoc {
    Periodic { period: usize },
    Preperiodic { tail: usize, period: usize },
    Unresolved { steps: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CyclicDoc {
    pub generator: String,
    pub periodicity: PeriodicityDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UnboundedDoc {
    pub kind: String,
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairProbeDoc {
    pub word_radius: usize,
    pub words: usize,
    pub pairs_checked: usize,
    pub max_cyclic: usize,
    pub max_two_generated: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unbounded: Option<UnboundedDoc>,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitReportDocument {
    pub vertex: String,
    pub point: Vec<String>,
    pub generators: Vec<String>,
    pub budget: usize,
    pub orbit: OrbitSummary,
    /// Present only for complete orbits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_periodic: Option<bool>,
    pub cyclic: Vec<CyclicDoc>,
    pub pair_probe: PairProbeDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<VerdictDocument>,
}

impl OrbitReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }
}

fn word_with_names(names: &[String], word: &[usize]) -> String {
    if word.is_empty() {
        return "id".into();
    }
    word.iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join("∘")
}

/// Orbit analysis of the document's `orbit` section.
pub fn run_orbit(document: &SystemDocument, overrides: &Overrides) -> Result<OrbitReportDocument, InputError> {
    let settings = Settings::resolve(&document.options, overrides);
    let system = document.load()?;
    let spec = document
        .orbit
        .as_ref()
        .ok_or_else(|| InputError::Format("document has no orbit section".into()))?;
    let v = system
        .vertex_index(&spec.vertex)
        .ok_or_else(|| InputError::UnknownVertex(spec.vertex.clone()))?;
    let arrows: Vec<usize> = match &spec.generators {
        Some(names) => names
            .iter()
            .map(|n| system.arrow_index(n).ok_or_else(|| InputError::UnknownArrow(n.clone())))
            .collect::<Result<_, _>>()?,
        None => (0..system.arrows().len())
            .filter(|&a| system.arrow(a).src() == v && system.arrow(a).dst() == v)
            .collect(),
    };
    let names: Vec<String> = arrows.iter().map(|&a| system.arrow(a).name().to_string()).collect();
    let point = spec
        .point
        .iter()
        .map(|t| {
            parse_rational(t).map_err(|source| InputError::Parse {
                context: "orbit point".into(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let variety = system.vertex(v).clone();
    let gens: Vec<Morphism> = arrows.iter().map(|&a| system.arrow(a).morphism().clone()).collect();
    let action = MonoidAction::new(variety.clone(), gens, point)?;

    let budget = settings.orbit_budget;
    let report = orbit_bfs(&action, budget);
    let m_periodic = if report.complete { Some(m_periodicity(&report)?) } else { None };
    let cyclic = action
        .generators()
        .iter()
        .zip(&names)
        .map(|(g, name)| {
            let p = cyclic_periodicity(g, action.base(), budget)?;
            Ok(CyclicDoc {
                generator: name.clone(),
                periodicity: match p {
                    Periodicity::Periodic { period } => PeriodicityDoc::Periodic { period },
                    Periodicity::Preperiodic { tail, period } => PeriodicityDoc::Preperiodic { tail, period },
                    Periodicity::Unresolved { steps } => PeriodicityDoc::Unresolved { steps },
                },
            })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let probe = pair_criterion_probe(&action, settings.word_radius, budget);
    let pair_probe = PairProbeDoc {
        word_radius: settings.word_radius,
        words: probe.words,
        pairs_checked: probe.pairs_checked,
        max_cyclic: probe.max_cyclic,
        max_two_generated: probe.max_two_generated,
        unbounded: probe.unbounded.as_ref().map(|u| match u {
            UnboundedWitness::Cyclic { f_word, g_word } => UnboundedDoc {
                kind: "cyclic".into(),
                f: word_with_names(&names, f_word),
                g: word_with_names(&names, g_word),
            },
            UnboundedWitness::TwoGenerated { f_word, g_word } => UnboundedDoc {
                kind: "twoGenerated".into(),
                f: word_with_names(&names, f_word),
                g: word_with_names(&names, g_word),
            },
        }),
        consistent: probe.consistent,
    };

    let components = match &spec.components {
        Some(list) => Some(decide_components(&variety, &action, &names, list, &settings)?),
        None => None,
    };

    Ok(OrbitReportDocument {
        vertex: spec.vertex.clone(),
        point: spec.point.iter().map(|t| parse_rational(t).map(|q| q.to_string()).unwrap_or_default()).collect(),
        generators: names,
        budget,
        orbit: OrbitSummary {
            complete: report.complete,
            size: report.len(),
            points: report
                .points
                .iter()
                .map(|p| p.iter().map(|q| q.to_string()).collect())
                .collect(),
        },
        m_periodic,
        cyclic,
        pair_probe,
        components,
    })
}

/// The system on user-supplied components of the orbit closure: each
/// generator restricted to each component, landing in the first component
/// that contains its image.
fn decide_components(
    variety: &Arc<Variety>,
    action: &MonoidAction,
    names: &[String],
    list: &[ComponentDoc],
    settings: &Settings,
) -> Result<VerdictDocument, InputError> {
    let mut vertices = Vec::new();
    for c in list {
        check_name(&c.name)?;
        let gens = parse_all(&c.ideal, variety.vars(), &format!("component {}", c.name))?;
        let mut all = variety.ideal().generators().to_vec();
        all.extend(gens);
        let z = Variety::new(c.name.clone(), variety.vars().to_vec(), all).map_err(|source| InputError::Geometry {
            context: format!("component {}", c.name),
            source,
        })?;
        vertices.push(Arc::new(z));
    }
    let mut system = System::new(vertices.clone())?;
    for (g, name) in action.generators().iter().zip(names) {
        for (i, zi) in vertices.iter().enumerate() {
            let landed = vertices.iter().enumerate().find_map(|(j, zj)| {
                crate::geometry::restrict_to(g, zi, zj).ok().map(|m| (j, m))
            });
            let (j, m) = landed.ok_or_else(|| InputError::Geometry {
                context: format!("generator {name} on component {}", zi.name()),
                source: GeometryError::NotWellDefined {
                    source_name: zi.name().to_string(),
                    target: "any component".into(),
                    equation: "image leaves the supplied components".into(),
                },
            })?;
            system.add_arrow(format!("{name}|{}", zi.name()), i, j, m)?;
        }
    }
    Ok(decide_document(&system, settings))
}
