//! Immutable publication corpus: field scheme, classified authors, journals
//! with per-year impact factors and subject categories, and publications.
//!
//! The corpus is loaded from four CSV files (see [`CorpusPaths`]), fully
//! cross-referenced at load time, and never mutated afterwards, so it is safe
//! to share across worker threads.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::Deserialize;

use crate::error::{Error, Result};

/// List separator inside a CSV cell (e.g. `C1|C2`).
pub const LIST_SEPARATOR: char = '|';

/// One entry of the field scheme: a field code mapped to exactly one area.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldEntry {
    pub code: String,
    pub name: String,
    pub area_code: String,
    pub area_name: String,
}

/// The classification scheme: every field belongs to exactly one area.
///
/// Entries are kept sorted by field code; positional indices into
/// [`FieldScheme::entries`] are used as compact field identifiers throughout
/// the crate.
#[derive(Debug, Clone)]
pub struct FieldScheme {
    entries: Vec<FieldEntry>,
}

impl FieldScheme {
    pub fn new(mut entries: Vec<FieldEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.code.cmp(&b.code));
        let mut area_names: BTreeMap<&str, &str> = BTreeMap::new();
        for window in entries.windows(2) {
            if window[0].code == window[1].code {
                return Err(Error::DuplicateId {
                    kind: "field",
                    id: window[0].code.clone(),
                });
            }
        }
        for entry in &entries {
            if entry.code.is_empty() {
                return Err(Error::InvalidConfig("empty field code".into()));
            }
            match area_names.get(entry.area_code.as_str()) {
                Some(name) if *name != entry.area_name => {
                    return Err(Error::InvalidConfig(format!(
                        "area `{}` has conflicting names `{}` and `{}`",
                        entry.area_code, name, entry.area_name
                    )));
                }
                _ => {
                    area_names.insert(&entry.area_code, &entry.area_name);
                }
            }
        }
        Ok(FieldScheme { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FieldEntry] {
        &self.entries
    }

    pub fn entry(&self, idx: usize) -> &FieldEntry {
        &self.entries[idx]
    }

    /// Index of a field code, if present.
    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.entries
            .binary_search_by(|e| e.code.as_str().cmp(code))
            .ok()
    }

    /// Distinct areas as (area_code, area_name), sorted by code.
    pub fn areas(&self) -> BTreeMap<&str, &str> {
        self.entries
            .iter()
            .map(|e| (e.area_code.as_str(), e.area_name.as_str()))
            .collect()
    }
}

/// A classified author: one author id, exactly one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Author {
    pub id: String,
    pub field_code: String,
}

/// One journal-year record.
#[derive(Debug, Clone, PartialEq)]
pub struct JournalYear {
    /// Impact factor for this year; absent means unknown.
    pub impact_factor: Option<f64>,
    /// Subject categories carried by the journal this year (sorted, nonempty).
    pub categories: Vec<String>,
}

/// A journal with its per-year records.
#[derive(Debug, Clone, PartialEq)]
pub struct Journal {
    pub id: String,
    pub years: BTreeMap<i32, JournalYear>,
}

/// Flat journal-year row, used when assembling a corpus from parts.
#[derive(Debug, Clone)]
pub struct JournalYearRow {
    pub journal_id: String,
    pub year: i32,
    pub impact_factor: Option<f64>,
    pub categories: Vec<String>,
}

/// A publication before cross-referencing.
#[derive(Debug, Clone)]
pub struct RawPublication {
    pub id: String,
    pub year: i32,
    pub journal_id: String,
    pub citations: u64,
    pub author_ids: Vec<String>,
    /// Explicit categories; empty means "use the journal's categories
    /// for the publication year".
    pub categories: Vec<String>,
}

/// A fully resolved publication.
#[derive(Debug, Clone)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    pub journal_id: String,
    pub citations: u64,
    /// Classified authors only, sorted and distinct.
    pub author_ids: Vec<String>,
    /// Resolved subject categories (explicit or journal default); may be
    /// empty when the journal has no record for the publication year.
    pub categories: Vec<String>,
    /// Distinct fields of the classified authors, as sorted scheme indices.
    pub(crate) field_idxs: Vec<usize>,
}

impl Publication {
    /// Number of distinct classified-author fields.
    pub fn field_count(&self) -> usize {
        self.field_idxs.len()
    }

    pub(crate) fn field_idxs(&self) -> &[usize] {
        &self.field_idxs
    }
}

/// Where a corpus came from. Not part of any serialized output.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub source_paths: Vec<PathBuf>,
    pub loaded_at: SystemTime,
}

/// Strict mode rejects dangling references; lenient mode drops the affected
/// rows and records one warning per drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadMode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub mode: LoadMode,
}

/// Warnings accumulated during a lenient load.
#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    pub warnings: Vec<String>,
}

/// The four corpus input files.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub fields: PathBuf,
    pub authors: PathBuf,
    pub journals: PathBuf,
    pub publications: PathBuf,
}

impl CorpusPaths {
    /// Conventional file names under a single input directory.
    pub fn in_dir(dir: &Path) -> Self {
        CorpusPaths {
            fields: dir.join("fields.csv"),
            authors: dir.join("authors.csv"),
            journals: dir.join("journals.csv"),
            publications: dir.join("publications.csv"),
        }
    }

    fn all(&self) -> Vec<PathBuf> {
        vec![
            self.fields.clone(),
            self.authors.clone(),
            self.journals.clone(),
            self.publications.clone(),
        ]
    }
}

/// The immutable analysis universe.
#[derive(Debug, Clone)]
pub struct Corpus {
    scheme: FieldScheme,
    /// author_id -> field index
    authors: BTreeMap<String, usize>,
    journals: BTreeMap<String, Journal>,
    /// Sorted by publication id.
    publications: Vec<Publication>,
    /// field index -> publication indices (ascending).
    pubs_by_field: Vec<Vec<usize>>,
    year_range: Option<(i32, i32)>,
    provenance: Provenance,
}

impl Corpus {
    /// Build a corpus from parts, resolving all cross-references.
    ///
    /// In strict mode any dangling reference is an error; in lenient mode the
    /// affected author or publication is dropped and a warning recorded.
    pub fn assemble(
        scheme: FieldScheme,
        authors: Vec<Author>,
        journal_rows: Vec<JournalYearRow>,
        raw_pubs: Vec<RawPublication>,
        options: &LoadOptions,
        provenance: Provenance,
    ) -> Result<(Corpus, LoadReport)> {
        let mut report = LoadReport::default();

        let mut author_fields: BTreeMap<String, usize> = BTreeMap::new();
        for author in authors {
            match scheme.index_of(&author.field_code) {
                Some(idx) => {
                    if author_fields.insert(author.id.clone(), idx).is_some() {
                        return Err(Error::DuplicateId {
                            kind: "author",
                            id: author.id,
                        });
                    }
                }
                None => match options.mode {
                    LoadMode::Strict => return Err(Error::UnknownField(author.field_code)),
                    LoadMode::Lenient => report.warnings.push(format!(
                        "dropped author `{}`: unknown field `{}`",
                        author.id, author.field_code
                    )),
                },
            }
        }

        let mut journals: BTreeMap<String, Journal> = BTreeMap::new();
        for row in journal_rows {
            if row.categories.is_empty() {
                return Err(Error::EmptyCategories {
                    journal_id: row.journal_id,
                    year: row.year,
                });
            }
            let journal = journals
                .entry(row.journal_id.clone())
                .or_insert_with(|| Journal {
                    id: row.journal_id.clone(),
                    years: BTreeMap::new(),
                });
            let mut categories = row.categories;
            categories.sort();
            categories.dedup();
            let record = JournalYear {
                impact_factor: row.impact_factor,
                categories,
            };
            if journal.years.insert(row.year, record).is_some() {
                return Err(Error::DuplicateId {
                    kind: "journal-year",
                    id: format!("{}/{}", row.journal_id, row.year),
                });
            }
        }

        let mut publications: Vec<Publication> = Vec::with_capacity(raw_pubs.len());
        let mut seen_ids: HashMap<String, ()> = HashMap::with_capacity(raw_pubs.len());
        'pubs: for raw in raw_pubs {
            if seen_ids.insert(raw.id.clone(), ()).is_some() {
                return Err(Error::DuplicateId {
                    kind: "publication",
                    id: raw.id,
                });
            }
            let journal = match journals.get(&raw.journal_id) {
                Some(j) => j,
                None => match options.mode {
                    LoadMode::Strict => {
                        return Err(Error::DanglingReference {
                            pub_id: raw.id,
                            kind: "journal",
                            id: raw.journal_id,
                        })
                    }
                    LoadMode::Lenient => {
                        report.warnings.push(format!(
                            "dropped publication `{}`: unknown journal `{}`",
                            raw.id, raw.journal_id
                        ));
                        continue 'pubs;
                    }
                },
            };

            let mut author_ids = raw.author_ids;
            author_ids.sort();
            author_ids.dedup();
            let mut field_idxs = Vec::new();
            for author_id in &author_ids {
                match author_fields.get(author_id) {
                    Some(&idx) => field_idxs.push(idx),
                    None => match options.mode {
                        LoadMode::Strict => {
                            return Err(Error::DanglingReference {
                                pub_id: raw.id,
                                kind: "author",
                                id: author_id.clone(),
                            })
                        }
                        LoadMode::Lenient => {
                            report.warnings.push(format!(
                                "dropped publication `{}`: unknown author `{}`",
                                raw.id, author_id
                            ));
                            continue 'pubs;
                        }
                    },
                }
            }
            field_idxs.sort_unstable();
            field_idxs.dedup();

            let mut categories = raw.categories;
            if categories.is_empty() {
                if let Some(record) = journal.years.get(&raw.year) {
                    categories = record.categories.clone();
                }
            }
            categories.sort();
            categories.dedup();

            publications.push(Publication {
                id: raw.id,
                year: raw.year,
                journal_id: raw.journal_id,
                citations: raw.citations,
                author_ids,
                categories,
                field_idxs,
            });
        }

        publications.sort_by(|a, b| a.id.cmp(&b.id));

        let mut pubs_by_field = vec![Vec::new(); scheme.len()];
        for (idx, publication) in publications.iter().enumerate() {
            for &field in &publication.field_idxs {
                pubs_by_field[field].push(idx);
            }
        }

        let year_range = publications
            .iter()
            .map(|p| p.year)
            .fold(None, |acc: Option<(i32, i32)>, y| match acc {
                None => Some((y, y)),
                Some((lo, hi)) => Some((lo.min(y), hi.max(y))),
            });

        Ok((
            Corpus {
                scheme,
                authors: author_fields,
                journals,
                publications,
                pubs_by_field,
                year_range,
                provenance,
            },
            report,
        ))
    }

    pub fn scheme(&self) -> &FieldScheme {
        &self.scheme
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn journals(&self) -> &BTreeMap<String, Journal> {
        &self.journals
    }

    pub fn journal(&self, id: &str) -> Option<&Journal> {
        self.journals.get(id)
    }

    /// Field code of a classified author.
    pub fn author_field(&self, author_id: &str) -> Option<&str> {
        self.authors
            .get(author_id)
            .map(|&idx| self.scheme.entry(idx).code.as_str())
    }

    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    pub fn authors(&self) -> impl Iterator<Item = Author> + '_ {
        self.authors.iter().map(|(id, &idx)| Author {
            id: id.clone(),
            field_code: self.scheme.entry(idx).code.clone(),
        })
    }

    /// Publication indices with at least one classified author in the field.
    pub fn publications_in_field(&self, code: &str) -> Result<&[usize]> {
        let idx = self
            .scheme
            .index_of(code)
            .ok_or_else(|| Error::UnknownField(code.to_string()))?;
        Ok(&self.pubs_by_field[idx])
    }

    pub(crate) fn pubs_by_field(&self) -> &[Vec<usize>] {
        &self.pubs_by_field
    }

    /// Distinct classified-author field codes of a publication.
    pub fn field_codes(&self, pub_idx: usize) -> impl Iterator<Item = &str> {
        self.publications[pub_idx]
            .field_idxs
            .iter()
            .map(move |&f| self.scheme.entry(f).code.as_str())
    }

    /// Min and max publication year, if the corpus is nonempty.
    pub fn year_range(&self) -> Option<(i32, i32)> {
        self.year_range
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Impact factor of a journal at a given year, if recorded.
    pub fn impact_factor(&self, journal_id: &str, year: i32) -> Option<f64> {
        self.journals
            .get(journal_id)
            .and_then(|j| j.years.get(&year))
            .and_then(|r| r.impact_factor)
    }

    /// Write the corpus back out as the four canonical CSV files, sorted and
    /// formatted deterministically. Returns the written paths.
    pub fn write_csvs(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let paths = CorpusPaths::in_dir(dir);

        let mut w = csv_writer(&paths.fields)?;
        write_record(&mut w, &paths.fields, &["field_code", "field_name", "area_code", "area_name"])?;
        for entry in &self.scheme.entries {
            write_record(
                &mut w,
                &paths.fields,
                &[&entry.code, &entry.name, &entry.area_code, &entry.area_name],
            )?;
        }
        finish(w, &paths.fields)?;

        let mut w = csv_writer(&paths.authors)?;
        write_record(&mut w, &paths.authors, &["author_id", "field_code"])?;
        for (id, &field) in &self.authors {
            write_record(&mut w, &paths.authors, &[id, &self.scheme.entry(field).code])?;
        }
        finish(w, &paths.authors)?;

        let mut w = csv_writer(&paths.journals)?;
        write_record(
            &mut w,
            &paths.journals,
            &["journal_id", "year", "impact_factor", "categories"],
        )?;
        for journal in self.journals.values() {
            for (year, record) in &journal.years {
                let impact = record
                    .impact_factor
                    .map(|v| format!("{v}"))
                    .unwrap_or_default();
                write_record(
                    &mut w,
                    &paths.journals,
                    &[
                        &journal.id,
                        &year.to_string(),
                        &impact,
                        &record.categories.join("|"),
                    ],
                )?;
            }
        }
        finish(w, &paths.journals)?;

        let mut w = csv_writer(&paths.publications)?;
        write_record(
            &mut w,
            &paths.publications,
            &["pub_id", "year", "journal_id", "citations", "author_ids", "categories"],
        )?;
        for publication in &self.publications {
            write_record(
                &mut w,
                &paths.publications,
                &[
                    &publication.id,
                    &publication.year.to_string(),
                    &publication.journal_id,
                    &publication.citations.to_string(),
                    &publication.author_ids.join("|"),
                    &publication.categories.join("|"),
                ],
            )?;
        }
        finish(w, &paths.publications)?;

        Ok(paths.all())
    }
}

/// Counts and flags produced by [`validate`]. Reporting only; the corpus is
/// never mutated.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct ValidationReport {
    pub publications: u64,
    pub authors: u64,
    pub fields: u64,
    pub journals: u64,
    /// Publications whose resolved category list is empty (excluded from
    /// indicator computation, retained for set partitioning).
    pub empty_categories: Vec<String>,
    /// Publications with no classified author.
    pub no_classified_authors: Vec<String>,
    /// Publications whose journal has no impact factor for their year.
    pub missing_impact_factor: Vec<String>,
    /// Publications with exactly one classified author.
    pub single_classified_author: u64,
}

/// Scan the corpus and report counts and flagged publications.
pub fn validate(corpus: &Corpus) -> ValidationReport {
    let mut report = ValidationReport {
        publications: corpus.publications.len() as u64,
        authors: corpus.authors.len() as u64,
        fields: corpus.scheme.len() as u64,
        journals: corpus.journals.len() as u64,
        ..ValidationReport::default()
    };
    for publication in &corpus.publications {
        if publication.categories.is_empty() {
            report.empty_categories.push(publication.id.clone());
        }
        if publication.author_ids.is_empty() {
            report.no_classified_authors.push(publication.id.clone());
        }
        if corpus
            .impact_factor(&publication.journal_id, publication.year)
            .is_none()
        {
            report.missing_impact_factor.push(publication.id.clone());
        }
        if publication.author_ids.len() == 1 {
            report.single_classified_author += 1;
        }
    }
    report
}

/// Load and cross-reference a corpus from the four CSV files.
pub fn load_corpus(paths: &CorpusPaths, options: &LoadOptions) -> Result<(Corpus, LoadReport)> {
    let scheme = FieldScheme::new(read_fields(&paths.fields)?)?;
    let authors = read_authors(&paths.authors)?;
    let journals = read_journals(&paths.journals)?;
    let publications = read_publications(&paths.publications)?;
    let provenance = Provenance {
        source_paths: paths.all(),
        loaded_at: SystemTime::now(),
    };
    Corpus::assemble(scheme, authors, journals, publications, options, provenance)
}

#[derive(Deserialize)]
struct FieldRow {
    field_code: String,
    field_name: String,
    area_code: String,
    area_name: String,
}

#[derive(Deserialize)]
struct AuthorRow {
    author_id: String,
    field_code: String,
}

#[derive(Deserialize)]
struct JournalRow {
    journal_id: String,
    year: i32,
    impact_factor: Option<f64>,
    categories: String,
}

#[derive(Deserialize)]
struct PublicationRow {
    pub_id: String,
    year: i32,
    journal_id: String,
    citations: u64,
    author_ids: String,
    categories: String,
}

fn split_list(cell: &str) -> Vec<String> {
    cell.split(LIST_SEPARATOR)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn malformed(path: &Path, err: csv::Error) -> Error {
    let file = path.display().to_string();
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    match err.kind() {
        csv::ErrorKind::Io(_) => Error::Csv { file, source: err },
        _ => Error::MalformedRow {
            file,
            line,
            message: match err.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                other => format!("{other:?}"),
            },
        },
    }
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<(u64, T)>> {
    let mut reader = csv_reader(path)?;
    let mut rows = Vec::new();
    for (i, row) in reader.deserialize::<T>().enumerate() {
        // header is line 1
        let line = i as u64 + 2;
        rows.push((line, row.map_err(|e| malformed(path, e))?));
    }
    Ok(rows)
}

fn read_fields(path: &Path) -> Result<Vec<FieldEntry>> {
    Ok(read_rows::<FieldRow>(path)?
        .into_iter()
        .map(|(_, r)| FieldEntry {
            code: r.field_code,
            name: r.field_name,
            area_code: r.area_code,
            area_name: r.area_name,
        })
        .collect())
}

fn read_authors(path: &Path) -> Result<Vec<Author>> {
    Ok(read_rows::<AuthorRow>(path)?
        .into_iter()
        .map(|(_, r)| Author {
            id: r.author_id,
            field_code: r.field_code,
        })
        .collect())
}

fn read_journals(path: &Path) -> Result<Vec<JournalYearRow>> {
    let mut rows = Vec::new();
    for (line, r) in read_rows::<JournalRow>(path)? {
        if let Some(impact) = r.impact_factor {
            if !impact.is_finite() || impact < 0.0 {
                return Err(Error::MalformedRow {
                    file: path.display().to_string(),
                    line,
                    message: format!("impact_factor must be a nonnegative number, got {impact}"),
                });
            }
        }
        let categories = split_list(&r.categories);
        if categories.is_empty() {
            return Err(Error::MalformedRow {
                file: path.display().to_string(),
                line,
                message: "journal categories must be nonempty".into(),
            });
        }
        rows.push(JournalYearRow {
            journal_id: r.journal_id,
            year: r.year,
            impact_factor: r.impact_factor,
            categories,
        });
    }
    Ok(rows)
}

fn read_publications(path: &Path) -> Result<Vec<RawPublication>> {
    Ok(read_rows::<PublicationRow>(path)?
        .into_iter()
        .map(|(_, r)| RawPublication {
            id: r.pub_id,
            year: r.year,
            journal_id: r.journal_id,
            citations: r.citations,
            author_ids: split_list(&r.author_ids),
            categories: split_list(&r.categories),
        })
        .collect())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn write_record<W: std::io::Write>(
    writer: &mut csv::Writer<W>,
    path: &Path,
    record: &[&str],
) -> Result<()> {
    writer.write_record(record).map_err(|e| Error::Csv {
        file: path.display().to_string(),
        source: e,
    })
}

fn finish(writer: csv::Writer<File>, path: &Path) -> Result<()> {
    writer
        .into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?
        .sync_all()
        .ok();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
        let path = dir.join(name);
        let mut f = File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    pub(crate) fn small_corpus_files(dir: &Path) -> CorpusPaths {
        write_file(
            dir,
            "fields.csv",
            "field_code,field_name,area_code,area_name\n\
             F1,Field One,A1,Area One\n\
             F2,Field Two,A1,Area One\n\
             F3,Field Three,A2,Area Two\n",
        );
        write_file(
            dir,
            "authors.csv",
            "author_id,field_code\nP1,F1\nP2,F2\nP3,F3\nP4,F1\n",
        );
        write_file(
            dir,
            "journals.csv",
            "journal_id,year,impact_factor,categories\n\
             J1,2004,2.5,C1\n\
             J1,2005,2.75,C1|C2\n\
             J2,2004,,C2\n",
        );
        write_file(
            dir,
            "publications.csv",
            "pub_id,year,journal_id,citations,author_ids,categories\n\
             PB1,2004,J1,10,P1|P2,\n\
             PB2,2005,J1,0,P1,\n\
             PB3,2004,J2,4,P3|P4,C9\n",
        );
        CorpusPaths::in_dir(dir)
    }

    #[test]
    fn loads_well_formed_corpus() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        let (corpus, report) = load_corpus(&paths, &LoadOptions::default()).unwrap();
        assert_eq!(corpus.publications().len(), 3);
        assert!(report.warnings.is_empty());
        assert_eq!(corpus.author_count(), 4);
        assert_eq!(corpus.year_range(), Some((2004, 2005)));
        // categories default to the journal record of the publication year
        let pb1 = &corpus.publications()[0];
        assert_eq!(pb1.id, "PB1");
        assert_eq!(pb1.categories, vec!["C1"]);
        // explicit category list overrides the journal default
        let pb3 = &corpus.publications()[2];
        assert_eq!(pb3.categories, vec!["C9"]);
        // derived field sets are distinct classified-author fields
        assert_eq!(corpus.field_codes(0).collect::<Vec<_>>(), vec!["F1", "F2"]);
        assert_eq!(corpus.field_codes(2).collect::<Vec<_>>(), vec!["F1", "F3"]);
    }

    #[test]
    fn strict_mode_rejects_unknown_journal() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        write_file(
            dir.path(),
            "publications.csv",
            "pub_id,year,journal_id,citations,author_ids,categories\n\
             PB1,2004,JX,10,P1,\n",
        );
        let err = load_corpus(&paths, &LoadOptions::default()).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("PB1"), "{message}");
        assert!(message.contains("JX"), "{message}");
    }

    #[test]
    fn lenient_mode_drops_with_warning() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        write_file(
            dir.path(),
            "publications.csv",
            "pub_id,year,journal_id,citations,author_ids,categories\n\
             PB1,2004,JX,10,P1,\n\
             PB2,2004,J1,3,P1,\n\
             PB3,2004,J1,1,P9,\n",
        );
        let (corpus, report) = load_corpus(
            &paths,
            &LoadOptions {
                mode: LoadMode::Lenient,
            },
        )
        .unwrap();
        assert_eq!(corpus.publications().len(), 1);
        assert_eq!(report.warnings.len(), 2);
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        write_file(
            dir.path(),
            "publications.csv",
            "pub_id,year,journal_id,citations,author_ids,categories\n\
             PB1,2004,J1,10,P1,\n\
             PB2,2004,J1,minusone,P1,\n",
        );
        let err = load_corpus(&paths, &LoadOptions::default()).unwrap_err();
        match err {
            Error::MalformedRow { line, .. } => assert_eq!(line, 3),
            other => panic!("expected MalformedRow, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_pub_id_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        write_file(
            dir.path(),
            "publications.csv",
            "pub_id,year,journal_id,citations,author_ids,categories\n\
             PB1,2004,J1,10,P1,\n\
             PB1,2005,J1,2,P2,\n",
        );
        let err = load_corpus(&paths, &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DuplicateId { kind: "publication", .. }));
    }

    #[test]
    fn validate_counts_and_flags() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        let (corpus, _) = load_corpus(&paths, &LoadOptions::default()).unwrap();
        let report = validate(&corpus);
        assert_eq!(report.publications, 3);
        assert_eq!(report.authors, 4);
        assert_eq!(report.fields, 3);
        assert_eq!(report.journals, 2);
        assert!(report.empty_categories.is_empty());
        assert!(report.no_classified_authors.is_empty());
        // PB3 is in J2 which has no impact factor for 2004
        assert_eq!(report.missing_impact_factor, vec!["PB3"]);
        assert_eq!(report.single_classified_author, 1);
    }

    #[test]
    fn validate_missing_if_counts_publications() {
        // one IF-less journal carrying two publications flags both
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        write_file(
            dir.path(),
            "publications.csv",
            "pub_id,year,journal_id,citations,author_ids,categories\n\
             PB1,2004,J2,10,P1,\n\
             PB2,2004,J2,3,P2,\n",
        );
        let (corpus, _) = load_corpus(&paths, &LoadOptions::default()).unwrap();
        let report = validate(&corpus);
        assert_eq!(report.missing_impact_factor.len(), 2);
    }

    #[test]
    fn empty_corpus_validates_to_zero_counts() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "fields.csv", "field_code,field_name,area_code,area_name\n");
        write_file(dir.path(), "authors.csv", "author_id,field_code\n");
        write_file(dir.path(), "journals.csv", "journal_id,year,impact_factor,categories\n");
        write_file(
            dir.path(),
            "publications.csv",
            "pub_id,year,journal_id,citations,author_ids,categories\n",
        );
        let paths = CorpusPaths::in_dir(dir.path());
        let (corpus, _) = load_corpus(&paths, &LoadOptions::default()).unwrap();
        let report = validate(&corpus);
        assert_eq!(report.publications, 0);
        assert_eq!(report.authors, 0);
        assert_eq!(report.fields, 0);
        assert_eq!(report.journals, 0);
        assert!(corpus.year_range().is_none());
    }

    #[test]
    fn load_write_load_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        let (corpus, _) = load_corpus(&paths, &LoadOptions::default()).unwrap();

        let out1 = dir.path().join("round1");
        let out2 = dir.path().join("round2");
        corpus.write_csvs(&out1).unwrap();
        let (corpus2, _) =
            load_corpus(&CorpusPaths::in_dir(&out1), &LoadOptions::default()).unwrap();
        corpus2.write_csvs(&out2).unwrap();

        for name in ["fields.csv", "authors.csv", "journals.csv", "publications.csv"] {
            let a = std::fs::read(out1.join(name)).unwrap();
            let b = std::fs::read(out2.join(name)).unwrap();
            assert_eq!(a, b, "{name} not byte-identical after reload");
        }
    }

    #[test]
    fn duplicate_journal_year_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small_corpus_files(dir.path());
        write_file(
            dir.path(),
            "journals.csv",
            "journal_id,year,impact_factor,categories\nJ1,2004,2.5,C1\nJ1,2004,2.6,C1\n",
        );
        let err = load_corpus(&paths, &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DuplicateId { kind: "journal-year", .. }));
    }
}
