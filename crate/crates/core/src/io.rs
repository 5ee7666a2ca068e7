//! Text file formats.
//!
//! * corpus: `<pos|neg>\t<raw text>` per line
//! * word lists (stop words, multiword entries): one entry per line
//! * dictionary: `<headword>\t<definition text>` per line
//! * embeddings: header `<rows> <dims>`, then `<word> <f1> ... <fk>` per line
//! * lexicon: `<word>\t<score>` per line

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::compose::DocumentFeatureVector;
use crate::dict_embed::DefinitionLexicon;
use crate::error::{Error, Result};
use crate::polarity::PolarityLexicon;
use crate::text::{Document, Label, TextPipeline, Vocabulary};

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn lines<'a, R: BufRead + 'a>(reader: R, source: &'a str) -> impl Iterator<Item = Result<(usize, String)>> + 'a {
    reader.lines().enumerate().map(move |(i, line)| {
        line.map(|l| (i + 1, l)).map_err(|e| Error::Parse {
            path: source.to_owned(),
            line: i + 1,
            message: e.to_string(),
        })
    })
}

fn parse_error(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: source.to_owned(),
        line,
        message: message.into(),
    }
}

/// Parses a labeled corpus. Blank lines are skipped; document ids are
/// `doc<line number>`.
pub fn parse_corpus<R: BufRead>(reader: R, source: &str, pipeline: &TextPipeline) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for item in lines(reader, source) {
        let (n, line) = item?;
        if line.trim().is_empty() {
            continue;
        }
        let (label, text) = line
            .split_once('\t')
            .ok_or_else(|| parse_error(source, n, "expected <label>\\t<text>"))?;
        let label: Label = label.parse().map_err(|e: String| parse_error(source, n, e))?;
        docs.push(Document {
            id: format!("doc{n}"),
            tokens: pipeline.process(text),
            label,
        });
    }
    Ok(docs)
}

pub fn read_corpus(path: &Path, pipeline: &TextPipeline) -> Result<Vec<Document>> {
    parse_corpus(open(path)?, &path.display().to_string(), pipeline)
}

/// Reads a corpus split across two files of unlabeled lines, one per class.
pub fn read_polarity_pair(positive: &Path, negative: &Path, pipeline: &TextPipeline) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (path, label) in [(positive, Label::Positive), (negative, Label::Negative)] {
        let mut bytes = Vec::new();
        open(path)?.read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;
        // Some public polarity corpora are not valid UTF-8.
        let text = String::from_utf8_lossy(&bytes);
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            docs.push(Document {
                id: format!("{}{}", label.as_str(), i + 1),
                tokens: pipeline.process(line),
                label,
            });
        }
    }
    Ok(docs)
}

/// One trimmed entry per non-blank line.
pub fn read_word_list(path: &Path) -> Result<Vec<String>> {
    let source = path.display().to_string();
    let mut out = Vec::new();
    for item in lines(open(path)?, &source) {
        let (_, line) = item?;
        let entry = line.trim();
        if !entry.is_empty() {
            out.push(entry.to_owned());
        }
    }
    Ok(out)
}

/// Parses a `<headword>\t<definition>` dictionary. Definitions go through the
/// pipeline without negation handling; duplicate headwords merge.
pub fn parse_dictionary<R: BufRead>(reader: R, source: &str, pipeline: &TextPipeline) -> Result<DefinitionLexicon> {
    let mut lexicon = DefinitionLexicon::new();
    for item in lines(reader, source) {
        let (n, line) = item?;
        if line.trim().is_empty() {
            continue;
        }
        let (head, definition) = line
            .split_once('\t')
            .ok_or_else(|| parse_error(source, n, "expected <headword>\\t<definition>"))?;
        let head_tokens = pipeline.process_definition(head);
        if head_tokens.is_empty() {
            return Err(parse_error(source, n, "empty headword"));
        }
        let headword = head_tokens.join(&crate::text::MULTIWORD_JOINER.to_string());
        lexicon.insert(headword, pipeline.process_definition(definition));
    }
    Ok(lexicon)
}

pub fn read_dictionary(path: &Path, pipeline: &TextPipeline) -> Result<DefinitionLexicon> {
    parse_dictionary(open(path)?, &path.display().to_string(), pipeline)
}

/// Writes `(words, matrix)` in the embedding text format.
pub fn write_embeddings<W: Write>(mut out: W, words: &[String], matrix: &DMatrix<f64>) -> std::io::Result<()> {
    assert_eq!(words.len(), matrix.nrows(), "one word per row");
    writeln!(out, "{} {}", matrix.nrows(), matrix.ncols())?;
    for (word, row) in words.iter().zip(matrix.row_iter()) {
        write!(out, "{word}")?;
        for v in row.iter() {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn parse_embeddings<R: BufRead>(reader: R, source: &str) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut it = lines(reader, source);
    let (n, header) = it
        .next()
        .transpose()?
        .ok_or_else(|| parse_error(source, 1, "missing header"))?;
    let mut fields = header.split_whitespace();
    let parse_count = |s: Option<&str>| -> Result<usize> {
        s.and_then(|v| v.parse().ok())
            .ok_or_else(|| parse_error(source, n, "header must be `<rows> <dims>`"))
    };
    let rows = parse_count(fields.next())?;
    let dims = parse_count(fields.next())?;
    if fields.next().is_some() {
        return Err(parse_error(source, n, "header must be `<rows> <dims>`"));
    }
    let mut words = Vec::with_capacity(rows);
    let mut values = Vec::with_capacity(rows * dims);
    for item in it {
        let (n, line) = item?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-blank line has a field");
        let mut count = 0;
        for f in fields {
            let v: f64 = f
                .parse()
                .map_err(|_| parse_error(source, n, format!("invalid number {f:?}")))?;
            values.push(v);
            count += 1;
        }
        if count != dims {
            return Err(parse_error(source, n, format!("expected {dims} values, found {count}")));
        }
        words.push(word.to_owned());
    }
    if words.len() != rows {
        return Err(parse_error(
            source,
            1,
            format!("header announces {rows} rows, file has {}", words.len()),
        ));
    }
    Ok((words, DMatrix::from_row_slice(rows, dims, &values)))
}

pub fn read_embeddings(path: &Path) -> Result<(Vec<String>, DMatrix<f64>)> {
    parse_embeddings(open(path)?, &path.display().to_string())
}

/// `<word>\t<score>` per vocabulary word, scores with 17 significant digits.
pub fn write_lexicon<W: Write>(mut out: W, vocab: &Vocabulary, lexicon: &PolarityLexicon) -> std::io::Result<()> {
    for (word, score) in vocab.words().iter().zip(lexicon.scores()) {
        writeln!(out, "{word}\t{score:.16e}")?;
    }
    out.flush()
}

/// Document vectors in the embedding format (ids in place of words).
pub fn write_document_vectors<W: Write>(mut out: W, docs: &[DocumentFeatureVector]) -> std::io::Result<()> {
    let dims = docs.first().map_or(0, |d| d.values.len());
    writeln!(out, "{} {}", docs.len(), dims)?;
    for doc in docs {
        write!(out, "{}", doc.id)?;
        for v in &doc.values {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    out.flush()
}

/// Sidecar for [`write_document_vectors`]: `<id>\t<label>` per line.
pub fn write_labels<W: Write>(mut out: W, docs: &[DocumentFeatureVector]) -> std::io::Result<()> {
    for doc in docs {
        writeln!(out, "{}\t{}", doc.id, doc.label)?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::PipelineConfig;

    fn pipeline() -> TextPipeline {
        TextPipeline::new(PipelineConfig::default()).unwrap()
    }

    #[test]
    fn corpus_lines() {
        let text = "pos\tGreat movie!\n\nneg\tNot good. Boring\n";
        let docs = parse_corpus(text.as_bytes(), "mem", &pipeline()).unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[0].id, "doc1");
        assert_eq!(docs[0].tokens, vec!["great", "movie", "!"]);
        assert_eq!(docs[1].label, Label::Negative);
        assert_eq!(docs[1].id, "doc3");
    }

    #[test]
    fn corpus_errors_name_line() {
        let err = parse_corpus("pos\tok\nmeh\tbad\n".as_bytes(), "c.tsv", &pipeline()).unwrap_err();
        assert!(err.to_string().starts_with("c.tsv:2:"), "{err}");
        let err = parse_corpus("no tab here\n".as_bytes(), "c.tsv", &pipeline()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn dictionary_merges_and_tokenizes() {
        let text = "Cat\tA small, feline animal.\ncat\tpet\n";
        let lex = parse_dictionary(text.as_bytes(), "d", &pipeline()).unwrap();
        let def = lex.get("cat").unwrap();
        assert!(def.contains("feline") && def.contains("pet") && def.contains("a"));
        assert!(parse_dictionary("\tx\n".as_bytes(), "d", &pipeline()).is_err());
    }

    #[test]
    fn embedding_roundtrip_and_errors() {
        let words = vec!["a".to_string(), "b".to_string()];
        let m = DMatrix::from_row_slice(2, 3, &[0.1, -2.5, 1e-20, 3.0, 0.0, 1.0 / 3.0]);
        let mut buf = Vec::new();
        write_embeddings(&mut buf, &words, &m).unwrap();
        let (w, back) = parse_embeddings(buf.as_slice(), "e").unwrap();
        assert_eq!(w, words);
        assert_eq!(back, m);

        let err = parse_embeddings("2 2\na 1 2\nb 1\n".as_bytes(), "e.vec").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse_embeddings("2 2\na 1 2\n".as_bytes(), "e").is_err());
        assert!(parse_embeddings("x\n".as_bytes(), "e").is_err());
        assert!(parse_embeddings("1 1\na z\n".as_bytes(), "e").is_err());
    }

    #[test]
    fn lexicon_precision() {
        let vocab = Vocabulary::from_words([("w".to_string(), 1)]);
        let lex = PolarityLexicon::from_scores(vec![3f64.ln()], Default::default());
        let mut buf = Vec::new();
        write_lexicon(&mut buf, &vocab, &lex).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let (_, score) = text.trim().split_once('\t').unwrap();
        assert_eq!(score.parse::<f64>().unwrap(), 3f64.ln());
    }
}
