//! Python bindings for the `sentivec` crate.
//!
//! Matrices cross the boundary as lists of rows; labels as `"pos"` / `"neg"`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use nalgebra::DMatrix;
use pyo3::exceptions::{PyKeyError, PyOSError, PyValueError};
use pyo3::prelude::*;

use sentivec::classify::{self, CvConfig, LinearModel, Request, SvmConfig};
use sentivec::corpus_embed::{self, FuzzyConfig};
use sentivec::dict_embed::{DefinitionLexicon, SupervisionMode};
use sentivec::pipeline::{build_embeddings, EmbeddingConfig, Resources, Variant};
use sentivec::polarity::{CountMode, PolarityLexicon};
use sentivec::text::{Corpus, Document, Label, PipelineConfig, TextPipeline};
use sentivec::{io, neighbors, polarity, synthetic, Error};

fn py_err(e: Error) -> PyErr {
    let message = format!("[{}] {}", e.code(), e);
    match e {
        Error::Io { .. } => PyOSError::new_err(message),
        Error::UnknownWord { .. } => PyKeyError::new_err(message),
        _ => PyValueError::new_err(message),
    }
}

fn parse_label(s: &str) -> PyResult<Label> {
    s.parse().map_err(PyValueError::new_err)
}

fn parse_labels(labels: &[String]) -> PyResult<Vec<Label>> {
    labels.iter().map(|l| parse_label(l)).collect()
}

fn label_strings(labels: &[Label]) -> Vec<String> {
    labels.iter().map(|l| l.as_str().to_owned()).collect()
}

type Rows = Vec<Vec<f64>>;
type LabeledTexts = (Vec<String>, Vec<String>, BTreeMap<String, String>);

fn to_matrix(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("matrix rows must all have the same length"));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |r, c| rows[r][c]))
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn parse_supervision(s: &str) -> PyResult<SupervisionMode> {
    match s {
        "sign" => Ok(SupervisionMode::Sign),
        "raw" => Ok(SupervisionMode::Raw),
        other => Err(PyValueError::new_err(format!(
            "unknown supervision {other:?} (expected sign or raw)"
        ))),
    }
}

fn pipeline_config(lowercase: bool, negation: Option<Vec<String>>, stopwords: Option<Vec<String>>) -> PipelineConfig {
    let mut config = PipelineConfig {
        lowercase,
        ..Default::default()
    };
    if let Some(markers) = negation {
        config.negation_markers = markers;
    }
    if let Some(words) = stopwords {
        config.stopwords = words.into_iter().collect();
    }
    config
}

/// Tokenizes raw text with the default pipeline: lowercasing, punctuation
/// splitting and negation marking.
#[pyfunction]
#[pyo3(signature = (text, lowercase = true, negation = None, stopwords = None))]
fn tokenize(
    text: &str,
    lowercase: bool,
    negation: Option<Vec<String>>,
    stopwords: Option<Vec<String>>,
) -> PyResult<Vec<String>> {
    let pipeline = TextPipeline::new(pipeline_config(lowercase, negation, stopwords)).map_err(py_err)?;
    Ok(pipeline.process(text))
}

/// Labeled, tokenized documents with their vocabulary.
#[pyclass(name = "Corpus", frozen)]
struct PyCorpus {
    corpus: Corpus,
    pipeline: PipelineConfig,
}

#[pymethods]
impl PyCorpus {
    #[new]
    #[pyo3(signature = (texts, labels, min_count = 1, lowercase = true, negation = None, stopwords = None))]
    fn new(
        texts: Vec<String>,
        labels: Vec<String>,
        min_count: usize,
        lowercase: bool,
        negation: Option<Vec<String>>,
        stopwords: Option<Vec<String>>,
    ) -> PyResult<Self> {
        if texts.len() != labels.len() {
            return Err(PyValueError::new_err(format!(
                "{} texts but {} labels",
                texts.len(),
                labels.len()
            )));
        }
        let config = pipeline_config(lowercase, negation, stopwords);
        let pipeline = TextPipeline::new(config.clone()).map_err(py_err)?;
        let documents = texts
            .iter()
            .zip(parse_labels(&labels)?)
            .enumerate()
            .map(|(i, (text, label))| Document {
                id: format!("doc{i}"),
                tokens: pipeline.process(text),
                label,
            })
            .collect();
        let corpus = Corpus::new(documents, min_count).map_err(py_err)?;
        Ok(Self {
            corpus,
            pipeline: config,
        })
    }

    /// Reads a `<pos|neg>\t<text>` file.
    #[staticmethod]
    #[pyo3(signature = (path, min_count = 1, lowercase = true))]
    fn from_file(path: PathBuf, min_count: usize, lowercase: bool) -> PyResult<Self> {
        let config = pipeline_config(lowercase, None, None);
        let pipeline = TextPipeline::new(config.clone()).map_err(py_err)?;
        let documents = io::read_corpus(&path, &pipeline).map_err(py_err)?;
        let corpus = Corpus::new(documents, min_count).map_err(py_err)?;
        Ok(Self {
            corpus,
            pipeline: config,
        })
    }

    fn __len__(&self) -> usize {
        self.corpus.len()
    }

    #[getter]
    fn vocabulary(&self) -> Vec<String> {
        self.corpus.vocabulary.words().to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.corpus
            .documents
            .iter()
            .map(|d| d.label.as_str().to_owned())
            .collect()
    }

    #[getter]
    fn tokens(&self) -> Vec<Vec<String>> {
        self.corpus.documents.iter().map(|d| d.tokens.clone()).collect()
    }

    fn class_counts(&self) -> (usize, usize) {
        self.corpus.class_counts()
    }

    fn __repr__(&self) -> String {
        let (pos, neg) = self.corpus.class_counts();
        format!(
            "Corpus(documents={}, pos={pos}, neg={neg}, vocabulary={})",
            self.corpus.len(),
            self.corpus.vocabulary.len()
        )
    }
}

impl PyCorpus {
    fn resources(&self, dictionary: Option<BTreeMap<String, String>>) -> PyResult<Resources> {
        let Some(entries) = dictionary else {
            return Ok(Resources::default());
        };
        let pipeline = TextPipeline::new(self.pipeline.clone()).map_err(py_err)?;
        let mut lexicon = DefinitionLexicon::new();
        for (headword, definition) in entries {
            let head = pipeline.process_definition(&headword).join(" ");
            lexicon.insert(head, pipeline.process_definition(&definition));
        }
        Ok(Resources {
            dictionary: Some(lexicon),
            external: None,
        })
    }
}

/// `ln((pos_count/pos_total + 0.01) / (neg_count/neg_total + 0.01))`.
#[pyfunction]
fn polarity_score(pos_count: f64, pos_total: f64, neg_count: f64, neg_total: f64) -> PyResult<f64> {
    polarity::polarity_score(pos_count, pos_total, neg_count, neg_total).map_err(py_err)
}

/// Polarity score of every vocabulary word, computed from all documents.
#[pyfunction]
#[pyo3(signature = (corpus, document_frequency = false))]
fn build_lexicon(corpus: &PyCorpus, document_frequency: bool) -> PyResult<BTreeMap<String, f64>> {
    let mode = if document_frequency {
        CountMode::DocumentFrequency
    } else {
        CountMode::TokenFrequency
    };
    let docs: Vec<&Document> = corpus.corpus.documents.iter().collect();
    let vocab = &corpus.corpus.vocabulary;
    let lexicon = PolarityLexicon::build(&docs, vocab, mode, None).map_err(py_err)?;
    Ok(vocab
        .words()
        .iter()
        .zip(lexicon.scores())
        .map(|(w, s)| (w.clone(), *s))
        .collect())
}

fn embedding_config(
    dims: usize,
    window: usize,
    clusters: usize,
    seed: u64,
    supervision: &str,
) -> PyResult<EmbeddingConfig> {
    let config = EmbeddingConfig {
        window_size: window,
        dims,
        fuzzy: FuzzyConfig {
            clusters,
            seed,
            ..Default::default()
        },
        supervision: parse_supervision(supervision)?,
        ..Default::default()
    };
    config.validate().map_err(py_err)?;
    Ok(config)
}

fn parse_variant(name: &str) -> PyResult<Variant> {
    name.parse().map_err(|e: Error| py_err(e))
}

/// Word embeddings for each variant, as `{name: rows}` aligned with
/// `corpus.vocabulary`.
#[pyfunction]
#[pyo3(signature = (corpus, variants = vec!["corpus-svd".to_owned(), "4scores".to_owned()], dictionary = None, dims = 200, window = 5, clusters = 200, seed = 0, supervision = "sign"))]
#[allow(clippy::too_many_arguments)]
fn embed(
    corpus: &PyCorpus,
    variants: Vec<String>,
    dictionary: Option<BTreeMap<String, String>>,
    dims: usize,
    window: usize,
    clusters: usize,
    seed: u64,
    supervision: &str,
) -> PyResult<BTreeMap<String, Vec<Vec<f64>>>> {
    let variants = variants
        .iter()
        .map(|v| parse_variant(v))
        .collect::<PyResult<Vec<_>>>()?;
    let config = embedding_config(dims, window, clusters, seed, supervision)?;
    let resources = corpus.resources(dictionary)?;
    let bundle = build_embeddings(&corpus.corpus, &variants, &config, &resources).map_err(py_err)?;
    Ok(bundle
        .variants
        .iter()
        .map(|(v, m)| (v.to_string(), to_rows(m)))
        .collect())
}

/// Cross-validation outcome for one grid cell.
#[pyclass(frozen, get_all)]
struct CvResult {
    name: String,
    fingerprint: String,
    mean_accuracy: f64,
    fold_accuracies: Vec<f64>,
    folds: Vec<usize>,
    predicted: Vec<String>,
    gold: Vec<String>,
}

#[pymethods]
impl CvResult {
    fn __repr__(&self) -> String {
        format!("CvResult({}, mean_accuracy={:.4})", self.name, self.mean_accuracy)
    }
}

/// Stratified k-fold cross-validation of a linear SVM on document vectors.
#[pyfunction]
#[pyo3(signature = (corpus, variant = "4scores", three_feats = true, dictionary = None, folds = 10, seed = 0, strict = false, c = 1.0, dims = 200, window = 5, clusters = 200, supervision = "sign"))]
#[allow(clippy::too_many_arguments)]
fn cross_validate(
    py: Python<'_>,
    corpus: &PyCorpus,
    variant: &str,
    three_feats: bool,
    dictionary: Option<BTreeMap<String, String>>,
    folds: usize,
    seed: u64,
    strict: bool,
    c: f64,
    dims: usize,
    window: usize,
    clusters: usize,
    supervision: &str,
) -> PyResult<CvResult> {
    let request = Request {
        variant: parse_variant(variant)?,
        three_feats,
    };
    let config = CvConfig {
        folds,
        seed,
        strict,
        min_count: 1,
        svm: SvmConfig {
            c,
            ..Default::default()
        },
        embedding: embedding_config(dims, window, clusters, seed, supervision)?,
    };
    let resources = corpus.resources(dictionary)?;
    let report = py
        .detach(|| classify::cross_validate(&corpus.corpus, request, &config, &resources))
        .map_err(py_err)?;
    Ok(CvResult {
        name: request.name(),
        fingerprint: report.fingerprint.clone(),
        mean_accuracy: report.mean_accuracy,
        fold_accuracies: report.fold_accuracies.clone(),
        folds: report.predictions.iter().map(|p| p.fold).collect(),
        predicted: label_strings(&report.predicted_labels()),
        gold: label_strings(&report.gold_labels()),
    })
}

#[pyfunction]
fn accuracy(predicted: Vec<String>, gold: Vec<String>) -> PyResult<f64> {
    classify::accuracy(&parse_labels(&predicted)?, &parse_labels(&gold)?).map_err(py_err)
}

/// Two-sided approximate randomization test on the accuracy difference.
#[pyfunction]
#[pyo3(signature = (a, b, gold, iterations = 1000, seed = 0))]
fn approx_randomization_test(
    a: Vec<String>,
    b: Vec<String>,
    gold: Vec<String>,
    iterations: usize,
    seed: u64,
) -> PyResult<f64> {
    classify::approx_randomization_test(
        &parse_labels(&a)?,
        &parse_labels(&b)?,
        &parse_labels(&gold)?,
        iterations,
        seed,
    )
    .map_err(py_err)
}

/// Leading `k` singular triplets as `(u, singular_values, v_t)`.
#[pyfunction]
fn truncated_svd(matrix: Vec<Vec<f64>>, k: usize) -> PyResult<(Rows, Vec<f64>, Rows)> {
    let svd = corpus_embed::truncated_svd(&to_matrix(&matrix)?, k).map_err(py_err)?;
    Ok((
        to_rows(&svd.u),
        svd.singular_values.iter().copied().collect(),
        to_rows(&svd.v_t),
    ))
}

/// Fuzzy c-means over the rows; returns `(memberships, objective history)`.
#[pyfunction]
#[pyo3(signature = (rows, clusters, fuzzifier = 2.0, max_iter = 25, seed = 0))]
fn fuzzy_cmeans(
    rows: Vec<Vec<f64>>,
    clusters: usize,
    fuzzifier: f64,
    max_iter: usize,
    seed: u64,
) -> PyResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let config = FuzzyConfig {
        clusters,
        fuzzifier,
        max_iter,
        seed,
        ..Default::default()
    };
    let result = corpus_embed::fuzzy_cmeans(&to_matrix(&rows)?, &config).map_err(py_err)?;
    Ok((to_rows(&result.memberships), result.objective))
}

/// Planted-signal corpus: `(texts, labels, dictionary)`.
#[pyfunction]
#[pyo3(signature = (documents = 500, marker_rate = 0.8, seed = 0, shuffle_labels = false))]
fn generate_synthetic(documents: usize, marker_rate: f64, seed: u64, shuffle_labels: bool) -> PyResult<LabeledTexts> {
    let config = synthetic::SyntheticConfig {
        documents,
        marker_rate,
        seed,
        shuffle_labels,
        ..Default::default()
    };
    let corpus = synthetic::generate(&config).map_err(py_err)?;
    let texts = corpus.documents.iter().map(|d| d.tokens.join(" ")).collect();
    let labels = corpus.documents.iter().map(|d| d.label.as_str().to_owned()).collect();
    Ok((texts, labels, corpus.dictionary.into_iter().collect()))
}

/// Most similar words to `query` by cosine similarity.
#[pyfunction]
#[pyo3(signature = (words, rows, query, top = 10))]
fn nearest_neighbors(words: Vec<String>, rows: Vec<Vec<f64>>, query: &str, top: usize) -> PyResult<Vec<(String, f64)>> {
    neighbors::nearest_neighbors(&words, &to_matrix(&rows)?, query, top).map_err(py_err)
}

/// Linear soft-margin SVM with a bias term.
#[pyclass(name = "LinearSvm")]
struct PyLinearSvm {
    c: f64,
    model: Option<LinearModel>,
}

impl PyLinearSvm {
    fn fitted(&self) -> PyResult<&LinearModel> {
        self.model
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("model is not fitted"))
    }
}

#[pymethods]
impl PyLinearSvm {
    #[new]
    #[pyo3(signature = (c = 1.0))]
    fn new(c: f64) -> Self {
        Self { c, model: None }
    }

    fn fit(&mut self, x: Vec<Vec<f64>>, y: Vec<String>) -> PyResult<()> {
        let config = SvmConfig {
            c: self.c,
            ..Default::default()
        };
        self.model = Some(classify::train_linear_svm(&x, &parse_labels(&y)?, &config).map_err(py_err)?);
        Ok(())
    }

    fn decision_function(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        let model = self.fitted()?;
        Ok(x.iter().map(|row| model.decision(row)).collect())
    }

    fn predict(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<String>> {
        let model = self.fitted()?;
        Ok(x.iter().map(|row| model.predict(row).as_str().to_owned()).collect())
    }

    #[getter]
    fn weights(&self) -> PyResult<Vec<f64>> {
        Ok(self.fitted()?.weights.clone())
    }

    #[getter]
    fn bias(&self) -> PyResult<f64> {
        Ok(self.fitted()?.bias)
    }
}

#[pymodule]
fn pysentivec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCorpus>()?;
    m.add_class::<CvResult>()?;
    m.add_class::<PyLinearSvm>()?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(polarity_score, m)?)?;
    m.add_function(wrap_pyfunction!(build_lexicon, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    m.add_function(wrap_pyfunction!(accuracy, m)?)?;
    m.add_function(wrap_pyfunction!(approx_randomization_test, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_svd, m)?)?;
    m.add_function(wrap_pyfunction!(fuzzy_cmeans, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic, m)?)?;
    m.add_function(wrap_pyfunction!(nearest_neighbors, m)?)?;
    Ok(())
}
