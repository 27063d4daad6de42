//! Model files, built-in models and sequence files.
//!
//! A model file is a JSON object with a `"kind"` discriminator:
//!
//! ```json
//! {"kind": "periodic", "cycle": "011"}
//! {"kind": "markov", "order": 1, "kernel": [["9/10", "1/10"], [0.2, 0.8]]}
//! {"kind": "iid", "probs": [0.3, 0.7]}
//! {"kind": "ising", "J": 1.0, "h": 0.0, "beta": 0.5}
//! {"kind": "substitution", "rules": {"0": "01", "1": "10"}, "start": "0"}
//! {"kind": "logistic", "r": 3.9, "x0": 0.3, "burnin": 1000}
//! ```
//!
//! Probabilities are JSON numbers or strings holding `"p/q"`; both are read
//! as exact rationals, so the exact backend sees `0.1` as `1/10`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use pmi_core::processes::{
    BlockSource, ClosedForm, ClosedForms, EmpiricalSource, IidProcess, IsingChainProcess, LogisticSymbolizer,
    MarkovProcess, PeriodicProcess, Sample, TimeReversal,
};
use pmi_core::scalar::parse_rational;
use pmi_core::substitution::{FromFrequency, Substitution, SubstitutionProcess};
use pmi_core::{Alphabet, Prob, Rational, Word};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Value(serde_json::Number),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> anyhow::Result<Rational> {
        let text = match self {
            Number::Value(n) => n.to_string(),
            Number::Text(s) => s.clone(),
        };
        Ok(parse_rational(&text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Periodic {
        cycle: String,
        #[serde(default)]
        alphabet: Option<Vec<String>>,
    },
    Markov {
        order: usize,
        kernel: Vec<Vec<Number>>,
        #[serde(default)]
        alphabet: Option<Vec<String>>,
    },
    Iid {
        probs: Vec<Number>,
        #[serde(default)]
        alphabet: Option<Vec<String>>,
    },
    Ising {
        #[serde(rename = "J")]
        coupling: f64,
        #[serde(default)]
        h: f64,
        #[serde(default)]
        beta: Option<f64>,
        #[serde(default)]
        temperature: Option<f64>,
    },
    Substitution {
        rules: BTreeMap<String, String>,
        start: String,
    },
    Logistic {
        r: f64,
        #[serde(default = "default_x0")]
        x0: f64,
        #[serde(default = "default_burn_in")]
        burnin: usize,
    },
}

fn default_x0() -> f64 {
    0.3
}

fn default_burn_in() -> usize {
    pmi_core::processes::DEFAULT_BURN_IN
}

/// Names accepted wherever a model file is expected.
pub const BUILTINS: [&str; 4] = ["tm", "fib", "coin", "goldenmean"];

pub fn builtin(name: &str) -> Option<ModelSpec> {
    let n = |s: &str| Number::Text(s.into());
    let rules = |pairs: &[(&str, &str)]| pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    Some(match name {
        "tm" | "thue-morse" => ModelSpec::Substitution { rules: rules(&[("0", "01"), ("1", "10")]), start: "0".into() },
        "fib" | "fibonacci" => ModelSpec::Substitution { rules: rules(&[("0", "01"), ("1", "0")]), start: "0".into() },
        "coin" => ModelSpec::Iid { probs: vec![n("1/2"), n("1/2")], alphabet: None },
        "goldenmean" => ModelSpec::Markov {
            order: 1,
            kernel: vec![vec![n("1/2"), n("1/2")], vec![n("1"), n("0")]],
            alphabet: None,
        },
        _ => return None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Backend {
    Exact,
    #[default]
    Float,
}

/// A loaded model, ready to hand to a [`SourceVisitor`].
#[derive(Clone, Debug)]
pub enum Model {
    Periodic { alphabet: Alphabet, process: PeriodicProcess },
    Markov { alphabet: Alphabet, order: usize, kernel: Vec<Vec<Rational>> },
    Iid { alphabet: Alphabet, probs: Vec<Rational> },
    Ising(IsingChainProcess),
    Substitution { alphabet: Alphabet, process: SubstitutionProcess },
    Logistic(LogisticSymbolizer),
    Empirical { alphabet: Alphabet, source: EmpiricalSource },
}

/// A probability backend the CLI can build every model in.
pub trait Scalar: Prob + FromFrequency + 'static {
    fn from_rational(r: &Rational) -> Self;
    /// Float-only models (the Ising chain) on this backend.
    fn float_only(source: Box<dyn BlockSource<f64>>, name: &str) -> anyhow::Result<Box<dyn BlockSource<Self>>>;
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }

    fn float_only(source: Box<dyn BlockSource<f64>>, _name: &str) -> anyhow::Result<Box<dyn BlockSource<f64>>> {
        Ok(source)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn float_only(_source: Box<dyn BlockSource<f64>>, name: &str) -> anyhow::Result<Box<dyn BlockSource<Rational>>> {
        bail!("the exact backend needs rational block probabilities; the {name} model has none (use --backend float)")
    }
}

/// Work that runs on either backend; [`Model::dispatch`] picks the scalar.
pub trait BackendVisitor {
    type Output;
    fn visit<P: Scalar>(self, model: &Model) -> anyhow::Result<Self::Output>;
}

fn alphabet_or_numeric(labels: &Option<Vec<String>>, arity: usize) -> anyhow::Result<Alphabet> {
    match labels {
        Some(l) => {
            if l.len() != arity {
                bail!("alphabet has {} labels but the model has {arity} symbols", l.len());
            }
            Ok(Alphabet::new(l.iter().cloned())?)
        }
        None => Ok(Alphabet::numeric(arity)),
    }
}

/// Labels for a word given as text: digits `0..=max` when every character
/// is a digit, otherwise its sorted distinct characters.
pub fn infer_alphabet(text: &str) -> anyhow::Result<Alphabet> {
    if text.contains(',') {
        let labels: BTreeSet<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        return Ok(Alphabet::new(labels.into_iter().map(String::from))?);
    }
    let chars: BTreeSet<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        bail!("empty symbol string");
    }
    if chars.iter().all(char::is_ascii_digit) {
        let max = chars.iter().map(|c| c.to_digit(10).unwrap() as usize).max().unwrap();
        return Ok(Alphabet::numeric((max + 1).max(2)));
    }
    Ok(Alphabet::new(chars.into_iter().map(String::from))?)
}

impl ModelSpec {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).context("malformed model file")
    }

    pub fn load(&self) -> anyhow::Result<Model> {
        Ok(match self {
            ModelSpec::Periodic { cycle, alphabet } => {
                let alphabet = match alphabet {
                    Some(l) => Alphabet::new(l.iter().cloned())?,
                    None => infer_alphabet(cycle)?,
                };
                let word = alphabet.parse(cycle)?;
                Model::Periodic { process: PeriodicProcess::new(alphabet.len(), word)?, alphabet }
            }
            ModelSpec::Markov { order, kernel, alphabet } => {
                let kernel: Vec<Vec<Rational>> = kernel
                    .iter()
                    .map(|row| row.iter().map(Number::to_rational).collect::<anyhow::Result<_>>())
                    .collect::<anyhow::Result<_>>()?;
                let arity = kernel.first().map_or(0, Vec::len);
                // Validate once on the float backend; exact sums are checked on use.
                MarkovProcess::new(arity, *order, to_f64_rows(&kernel))?;
                Model::Markov { alphabet: alphabet_or_numeric(alphabet, arity)?, order: *order, kernel }
            }
            ModelSpec::Iid { probs, alphabet } => {
                let probs: Vec<Rational> = probs.iter().map(Number::to_rational).collect::<anyhow::Result<_>>()?;
                IidProcess::new(probs.iter().map(Prob::to_f64).collect())?;
                Model::Iid { alphabet: alphabet_or_numeric(alphabet, probs.len())?, probs }
            }
            ModelSpec::Ising { coupling, h, beta, temperature } => {
                let process = match (beta, temperature) {
                    (Some(b), None) => IsingChainProcess::new(*coupling, *h, *b)?,
                    (None, Some(t)) => IsingChainProcess::from_temperature(*coupling, *h, *t)?,
                    _ => bail!("an Ising model needs exactly one of \"beta\" and \"temperature\""),
                };
                Model::Ising(process)
            }
            ModelSpec::Substitution { rules, start } => {
                let alphabet = Alphabet::new(rules.keys().cloned())?;
                let images: Vec<Word> = rules.values().map(|img| alphabet.parse(img)).collect::<Result<_, _>>()?;
                let start = alphabet.index_of(start).ok_or_else(|| anyhow!("start letter {start:?} has no rule"))?;
                let process = SubstitutionProcess::new(Substitution::new(images, start)?)?;
                Model::Substitution { alphabet, process }
            }
            ModelSpec::Logistic { r, x0, burnin } => {
                Model::Logistic(LogisticSymbolizer::new(*r, *x0)?.with_burn_in(*burnin))
            }
        })
    }
}

fn to_f64_rows(rows: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(Prob::to_f64).collect()).collect()
}

/// `--model` argument: a path to a JSON file, or a built-in name.
pub fn load_model(arg: &str) -> anyhow::Result<Model> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return ModelSpec::from_json(&text)?.load();
    }
    match builtin(arg) {
        Some(spec) => spec.load(),
        None => bail!("no model file {arg:?} and no built-in model of that name (built-ins: {})", BUILTINS.join(", ")),
    }
}

/// Reads a one-line symbol file. Without explicit labels the alphabet is
/// inferred from the text.
pub fn load_sequence(path: &Path, labels: Option<&str>) -> anyhow::Result<Model> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let text = text.trim();
    let alphabet = match labels {
        Some(l) => Alphabet::new(l.split(',').map(|s| s.trim().to_string()))?,
        None => infer_alphabet(text)?,
    };
    let word = alphabet.parse(text)?;
    Ok(Model::Empirical { source: EmpiricalSource::new(alphabet.len(), word)?, alphabet })
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Periodic { .. } => "periodic",
            Model::Markov { .. } => "markov",
            Model::Iid { .. } => "iid",
            Model::Ising(_) => "ising",
            Model::Substitution { .. } => "substitution",
            Model::Logistic(_) => "logistic",
            Model::Empirical { .. } => "empirical",
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Model::Periodic { alphabet, .. }
            | Model::Markov { alphabet, .. }
            | Model::Iid { alphabet, .. }
            | Model::Substitution { alphabet, .. }
            | Model::Empirical { alphabet, .. } => alphabet.clone(),
            Model::Ising(_) | Model::Logistic(_) => Alphabet::binary(),
        }
    }

    /// Whether the model has rational block probabilities.
    pub fn supports_exact(&self) -> bool {
        !matches!(self, Model::Ising(_) | Model::Logistic(_))
    }

    /// Markov and i.i.d. models as Markov chains with converted entries.
    pub fn markov_with<P: Prob>(&self, convert: impl Fn(&Rational) -> P) -> anyhow::Result<Option<MarkovProcess<P>>> {
        Ok(match self {
            Model::Markov { alphabet, order, kernel } => Some(MarkovProcess::new(
                alphabet.len(),
                *order,
                kernel.iter().map(|r| r.iter().map(&convert).collect()).collect(),
            )?),
            Model::Iid { probs, .. } => Some(IidProcess::new(probs.iter().map(&convert).collect())?.as_markov()?),
            _ => None,
        })
    }

    pub fn exact_markov(&self) -> anyhow::Result<Option<MarkovProcess<Rational>>> {
        self.markov_with(Rational::clone)
    }

    pub fn float_markov(&self) -> anyhow::Result<Option<MarkovProcess<f64>>> {
        self.markov_with(Prob::to_f64)
    }

    /// The time-reversed model, where one exists in closed form.
    pub fn reversed(&self) -> anyhow::Result<Model> {
        Ok(match self {
            Model::Periodic { alphabet, process } => {
                Model::Periodic { alphabet: alphabet.clone(), process: process.reversed()? }
            }
            Model::Markov { alphabet, order, .. } => {
                let rev = self.exact_markov()?.unwrap().reversed()?;
                Model::Markov { alphabet: alphabet.clone(), order: *order, kernel: rev.kernel().to_vec() }
            }
            Model::Iid { .. } | Model::Ising(_) => self.clone(),
            Model::Empirical { alphabet, source } => {
                Model::Empirical { alphabet: alphabet.clone(), source: source.reversed()? }
            }
            Model::Substitution { .. } | Model::Logistic(_) => {
                bail!("no time-reversed closed form for the {} model", self.name())
            }
        })
    }

    /// Replaces a sampled-only model (the logistic map) by the empirical
    /// source of its first `samples` symbols.
    pub fn materialize(self, samples: usize) -> anyhow::Result<Model> {
        Ok(match self {
            Model::Logistic(m) => {
                Model::Empirical { alphabet: Alphabet::binary(), source: EmpiricalSource::new(2, m.sample(samples, 0)?)? }
            }
            other => other,
        })
    }

    /// The model as a block source on backend `P`. Logistic symbol streams
    /// must be [materialized](Model::materialize) first.
    pub fn source<P: Scalar>(&self) -> anyhow::Result<Box<dyn BlockSource<P>>> {
        if P::EXACT && !self.supports_exact() {
            bail!("the exact backend needs rational block probabilities; the {} model has none (use --backend float)", self.name());
        }
        Ok(match self {
            Model::Periodic { process, .. } => Box::new(process.clone()),
            Model::Markov { .. } | Model::Iid { .. } => Box::new(self.markov_with(P::from_rational)?.unwrap()),
            Model::Ising(p) => P::float_only(Box::new(p.clone()), self.name())?,
            Model::Substitution { process, .. } => Box::new(process.clone()),
            Model::Logistic(_) => bail!("the logistic map has no block law; sample it first"),
            Model::Empirical { source, .. } => Box::new(source.clone()),
        })
    }

    pub fn dispatch<V: BackendVisitor>(&self, backend: Backend, visitor: V) -> anyhow::Result<V::Output> {
        if backend == Backend::Exact && !self.supports_exact() {
            bail!("the exact backend needs rational block probabilities; the {} model has none (use --backend float)", self.name());
        }
        match backend {
            Backend::Exact => visitor.visit::<Rational>(self),
            Backend::Float => visitor.visit::<f64>(self),
        }
    }

    pub fn closed_forms(&self) -> anyhow::Result<ClosedForms> {
        Ok(match self {
            Model::Periodic { process, .. } => process.closed_forms()?,
            Model::Markov { .. } | Model::Iid { .. } => self.float_markov()?.unwrap().closed_forms()?,
            Model::Ising(p) => p.closed_forms()?,
            Model::Substitution { process, .. } => process.closed_forms()?,
            Model::Logistic(m) => m.closed_forms()?,
            Model::Empirical { source, .. } => source.closed_forms()?,
        })
    }
}
