//! Built-in corpus of P-recursive sequences, with per-sequence pipeline
//! settings (bound depth/slack, term-bound exponent hint) used by the CLI
//! defaults and the test suite.

use std::sync::OnceLock;

use crate::algebra::{parse_rational, Rational};
use crate::formats::RecurrenceSpec;

/// Tuning knobs for certification of one sequence.  `None` means the
/// pipeline default.
#[derive(Clone, Debug, Default)]
pub struct CertifyConfig {
    /// truncation depth of the candidate ratio bounds (exponent of 1/n)
    pub depth: Option<i64>,
    /// symmetric perturbation of the last bound coefficient
    pub slack: Option<Rational>,
    /// exponent of the n-power in the term bound h (beta); None = auto
    pub beta_hint: Option<Rational>,
}

pub struct CorpusEntry {
    pub spec: RecurrenceSpec,
    pub config: CertifyConfig,
}

impl CorpusEntry {
    pub fn recurrence(&self) -> crate::Result<crate::recurrence::Recurrence> {
        self.spec.recurrence()
    }
}

macro_rules! corpus_file {
    ($name:literal) => {
        include_str!(concat!("../corpus/", $name, ".json"))
    };
}

fn rat(s: &str) -> Option<Rational> {
    Some(parse_rational(s).expect("corpus config rational"))
}

fn build() -> Vec<CorpusEntry> {
    let load = |json: &str, config: CertifyConfig| -> CorpusEntry {
        CorpusEntry {
            spec: RecurrenceSpec::from_json(json).expect("corpus entry parses"),
            config,
        }
    };
    vec![
        load(
            corpus_file!("gn"),
            CertifyConfig {
                depth: Some(2),
                slack: rat("1"),
                beta_hint: None,
            },
        ),
        load(
            corpus_file!("franel5"),
            CertifyConfig {
                depth: Some(2),
                slack: rat("1"),
                beta_hint: rat("-1"),
            },
        ),
        load(
            corpus_file!("motzkin"),
            CertifyConfig {
                depth: Some(3),
                slack: rat("1"),
                beta_hint: rat("-1"),
            },
        ),
        load(
            corpus_file!("catalan_inv"),
            CertifyConfig {
                depth: None,
                slack: None,
                beta_hint: rat("-1/4"),
            },
        ),
        load(
            corpus_file!("catalan_inv_n2"),
            CertifyConfig {
                depth: None,
                slack: None,
                beta_hint: rat("-1/4"),
            },
        ),
        load(
            corpus_file!("fine"),
            CertifyConfig {
                depth: Some(3),
                slack: rat("1"),
                beta_hint: rat("-1"),
            },
        ),
        load(corpus_file!("central_delannoy"), CertifyConfig::default()),
        load(
            corpus_file!("domb"),
            CertifyConfig {
                depth: Some(3),
                slack: rat("1"),
                beta_hint: rat("-1"),
            },
        ),
        load(corpus_file!("apery"), CertifyConfig::default()),
        load(
            corpus_file!("clf"),
            CertifyConfig {
                depth: Some(3),
                slack: rat("1"),
                beta_hint: rat("-1/2"),
            },
        ),
        load(
            corpus_file!("polyhexes"),
            CertifyConfig {
                depth: Some(3),
                slack: rat("1"),
                beta_hint: rat("-1"),
            },
        ),
    ]
}

pub fn all() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(build)
}

pub fn get(name: &str) -> Option<&'static CorpusEntry> {
    all().iter().find(|e| e.spec.name == name)
}

/// Resolves `corpus:<name>` references or treats the argument as a path.
pub fn resolve_spec(arg: &str) -> crate::Result<RecurrenceSpec> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        return get(name)
            .map(|e| e.spec.clone())
            .ok_or_else(|| crate::Error::InvalidSpec(format!("unknown corpus entry {name:?}")));
    }
    let text = std::fs::read_to_string(arg)?;
    RecurrenceSpec::from_json(&text)
}
