use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sentivec::compose::Averaging;
use sentivec::dict_embed::{DictReduction, SupervisionMode};
use sentivec::polarity::CountMode;

#[derive(Parser, Debug)]
#[command(name = "sentivec", version, about = "Sentiment-aware word and document embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build word embeddings for the selected channels.
    Embed(EmbedArgs),
    /// Cross-validate document classification for each variant.
    Eval(EvalArgs),
    /// Nearest words to a query in one or more embedding files.
    Neighbors(NeighborsArgs),
    /// Write a seeded corpus with planted polarity markers.
    GenSynthetic(SyntheticArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Labeled corpus, `<pos|neg>\t<text>` per line.
    #[arg(long, required_unless_present = "pos_file")]
    pub corpus: Option<PathBuf>,
    /// Positive documents, one per line (use with --neg-file).
    #[arg(long, requires = "neg_file", conflicts_with = "corpus")]
    pub pos_file: Option<PathBuf>,
    #[arg(long, requires = "pos_file")]
    pub neg_file: Option<PathBuf>,
    /// Dictionary, `<headword>\t<definition>` per line.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    /// Pre-trained vectors in the embedding text format.
    #[arg(long = "external-emb")]
    pub external_emb: Option<PathBuf>,
    /// Stop-word list, one per line.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Emoticons and idioms to keep as single tokens, one per line.
    #[arg(long)]
    pub multiword: Option<PathBuf>,
    /// Negation markers (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub negation: Option<Vec<String>>,
    #[arg(long)]
    pub no_lowercase: bool,
    #[arg(long, default_value_t = 1)]
    pub min_count: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Comma list of corpus-svd, corpus-cluster, dict, 4scores, external, concat.
    #[arg(long, value_delimiter = ',')]
    pub channels: Option<Vec<String>>,
    /// Tokens on each side of the window center.
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    #[arg(long, default_value_t = 200)]
    pub dims: usize,
    /// Fuzzy c-means cluster count.
    #[arg(long, default_value_t = 200)]
    pub clusters: usize,
    #[arg(long, default_value_t = 25)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 2.0)]
    pub fuzzifier: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SupervisionArg::Sign)]
    pub supervision: SupervisionArg,
    #[arg(long, value_enum, default_value_t = ReductionArg::Svd)]
    pub dict_reduction: ReductionArg,
    #[arg(long, value_enum, default_value_t = CountArg::Token)]
    pub count_mode: CountArg,
    #[arg(long, value_enum, default_value_t = AveragingArg::Token)]
    pub averaging: AveragingArg,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, value_enum, default_value_t = ThreeFeatsArg::Both)]
    pub three_feats: ThreeFeatsArg,
    /// Rebuild vocabulary and text-only channels inside every fold.
    #[arg(long)]
    pub strict: bool,
    /// SVM penalty.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Randomization-test iterations for the significance table.
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct NeighborsArgs {
    /// Embedding file; repeat to compare several.
    #[arg(long, required = true)]
    pub emb: Vec<PathBuf>,
    #[arg(long)]
    pub query: String,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(Args, Debug)]
pub struct SyntheticArgs {
    #[arg(long, default_value_t = 500)]
    pub docs: usize,
    #[arg(long, default_value_t = 0.8)]
    pub marker_rate: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Permute the labels, destroying the signal.
    #[arg(long)]
    pub shuffle_labels: bool,
    #[arg(long, default_value = "synthetic")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeFeatsArg {
    Both,
    With,
    Without,
}

impl ThreeFeatsArg {
    pub fn flags(self) -> Vec<bool> {
        match self {
            ThreeFeatsArg::Both => vec![false, true],
            ThreeFeatsArg::With => vec![true],
            ThreeFeatsArg::Without => vec![false],
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SupervisionArg {
    Sign,
    Raw,
}

impl From<SupervisionArg> for SupervisionMode {
    fn from(v: SupervisionArg) -> Self {
        match v {
            SupervisionArg::Sign => SupervisionMode::Sign,
            SupervisionArg::Raw => SupervisionMode::Raw,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ReductionArg {
    Svd,
    Cluster,
}

impl From<ReductionArg> for DictReduction {
    fn from(v: ReductionArg) -> Self {
        match v {
            ReductionArg::Svd => DictReduction::Svd,
            ReductionArg::Cluster => DictReduction::Cluster,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum CountArg {
    Token,
    Document,
}

impl From<CountArg> for CountMode {
    fn from(v: CountArg) -> Self {
        match v {
            CountArg::Token => CountMode::TokenFrequency,
            CountArg::Document => CountMode::DocumentFrequency,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum AveragingArg {
    Token,
    Type,
}

impl From<AveragingArg> for Averaging {
    fn from(v: AveragingArg) -> Self {
        match v {
            AveragingArg::Token => Averaging::Token,
            AveragingArg::Type => Averaging::Type,
        }
    }
}
