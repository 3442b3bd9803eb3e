//! Named fixed-arity relations loaded from CSV, and evaluation of relational
//! atoms and their conjunctions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::graph::Constant;
use crate::model::{Mapping, MappingSet, Term, Variable};

#[derive(Debug, Error)]
pub enum RelationError {
    #[error("relation {name}: CSV has no header row")]
    EmptyFile { name: String },
    #[error("relation {name}: row {row} has {found} cells, header has {expected}")]
    RaggedRow { name: String, row: usize, expected: usize, found: usize },
    #[error("relation {name}: row {row}, column {column} is empty")]
    EmptyCell { name: String, row: usize, column: usize },
    #[error("relation {name}: header has no columns")]
    ZeroArity { name: String },
    #[error("relation {name}: tuple of length {found} in a relation of arity {expected}")]
    TupleArity { name: String, expected: usize, found: usize },
    #[error("relation {0} is not declared")]
    Undeclared(String),
    #[error("relation {0} is declared twice")]
    Duplicate(String),
    #[error("atom {name} has {found} arguments, relation has arity {expected}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("relation {name}: {source}")]
    Csv { name: String, source: csv::Error },
    #[error("manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `R(w_1, ..., w_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelAtom {
    pub name: String,
    pub args: Vec<Term>,
}

impl RelAtom {
    pub fn new(name: impl Into<String>, args: Vec<Term>) -> Self {
        RelAtom { name: name.into(), args }
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.args.iter().filter_map(Term::as_var)
    }
}

impl fmt::Display for RelAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// A set of equal-length tuples. Tuples are kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    name: String,
    arity: usize,
    tuples: Vec<Box<[Constant]>>,
    column_names: Option<Vec<String>>,
}

impl Relation {
    pub fn new<I, T>(name: impl Into<String>, arity: usize, tuples: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator,
        T::Item: Into<Constant>,
    {
        let name = name.into();
        if arity == 0 {
            return Err(RelationError::ZeroArity { name });
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            let row: Box<[Constant]> = t.into_iter().map(Into::into).collect();
            if row.len() != arity {
                return Err(RelationError::TupleArity { name, expected: arity, found: row.len() });
            }
            set.insert(row);
        }
        Ok(Relation { name, arity, tuples: set.into_iter().collect(), column_names: None })
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Self {
        debug_assert_eq!(names.len(), self.arity);
        self.column_names = Some(names);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[Constant]> {
        self.tuples.iter().map(|t| &t[..])
    }

    pub fn contains(&self, tuple: &[Constant]) -> bool {
        self.tuples.binary_search_by(|t| t[..].cmp(tuple)).is_ok()
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    /// Constants occurring in any tuple.
    pub fn constants(&self) -> BTreeSet<Constant> {
        self.tuples.iter().flat_map(|t| t.iter().cloned()).collect()
    }
}

/// Read a relation from CSV with a header row. Cells are trimmed; duplicate
/// rows collapse.
pub fn load_relation<R: Read>(name: &str, source: R) -> Result<Relation, RelationError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let csv_err = |source| RelationError::Csv { name: name.to_string(), source };
    let mut records = reader.records();
    let header = match records.next() {
        None => return Err(RelationError::EmptyFile { name: name.to_string() }),
        Some(r) => r.map_err(csv_err)?,
    };
    let arity = header.len();
    if arity == 0 || (arity == 1 && header[0].is_empty()) {
        return Err(RelationError::EmptyFile { name: name.to_string() });
    }
    let columns: Vec<String> = header.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, record) in records.enumerate() {
        let record = record.map_err(csv_err)?;
        // Row numbers count the header as row 1.
        let row = i + 2;
        if record.len() != arity {
            return Err(RelationError::RaggedRow { name: name.to_string(), row, expected: arity, found: record.len() });
        }
        if let Some(column) = record.iter().position(str::is_empty) {
            return Err(RelationError::EmptyCell { name: name.to_string(), row, column: column + 1 });
        }
        rows.push(record.iter().map(Constant::from).collect::<Vec<_>>());
    }
    Ok(Relation::new(name, arity, rows)?.with_column_names(columns))
}

/// The relational part `𝒟` of a heterogeneous database.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelDatabase {
    relations: BTreeMap<String, Relation>,
}

#[derive(Deserialize)]
struct Manifest {
    relations: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
struct ManifestEntry {
    name: String,
    path: PathBuf,
}

impl RelDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, r: Relation) -> Result<(), RelationError> {
        if self.relations.contains_key(r.name()) {
            return Err(RelationError::Duplicate(r.name().to_string()));
        }
        self.relations.insert(r.name().to_string(), r);
        Ok(())
    }

    pub fn with(mut self, r: Relation) -> Result<Self, RelationError> {
        self.insert(r)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.values()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Load every relation listed in a JSON manifest
    /// `{"relations": [{"name": ..., "path": ...}]}`. Relative CSV paths
    /// resolve against the manifest's directory.
    pub fn load_manifest(path: &Path) -> Result<Self, RelationError> {
        let text = std::fs::read_to_string(path)?;
        let manifest: Manifest = serde_json::from_str(&text)
            .map_err(|e| RelationError::Manifest { path: path.to_path_buf(), message: e.to_string() })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut db = RelDatabase::new();
        for entry in manifest.relations {
            let csv_path = base.join(&entry.path);
            let file = std::fs::File::open(&csv_path).map_err(|e| RelationError::Manifest {
                path: path.to_path_buf(),
                message: format!("{}: {e}", csv_path.display()),
            })?;
            db.insert(load_relation(&entry.name, std::io::BufReader::new(file))?)?;
        }
        Ok(db)
    }
}

/// `⟦R(w_1, ..., w_m)⟧`: one mapping per tuple matching the constant
/// arguments, with repeated variables forcing equal components.
pub fn eval_atom(db: &RelDatabase, atom: &RelAtom) -> Result<MappingSet, RelationError> {
    let rel = db.get(&atom.name).ok_or_else(|| RelationError::Undeclared(atom.name.clone()))?;
    if rel.arity() != atom.args.len() {
        return Err(RelationError::ArityMismatch {
            name: atom.name.clone(),
            expected: rel.arity(),
            found: atom.args.len(),
        });
    }
    let mut out = MappingSet::new();
    'tuples: for tuple in rel.tuples() {
        let mut m = Mapping::empty();
        for (arg, value) in atom.args.iter().zip(tuple) {
            match arg {
                Term::Const(c) if c != value => continue 'tuples,
                Term::Const(_) => {}
                Term::Var(v) => {
                    if !m.bind(v.clone(), value.clone()) {
                        continue 'tuples;
                    }
                }
            }
        }
        out.insert(m);
    }
    Ok(out)
}

/// `⟦φ_1 ∧ ... ∧ φ_k⟧`. Atoms are joined smallest first, preferring atoms
/// connected to what has already been joined.
pub fn eval_conjunction(db: &RelDatabase, atoms: &[RelAtom]) -> Result<MappingSet, RelationError> {
    let mut parts: Vec<(BTreeSet<Variable>, MappingSet)> = atoms
        .iter()
        .map(|a| Ok((a.variables().cloned().collect(), eval_atom(db, a)?)))
        .collect::<Result<_, RelationError>>()?;
    let mut acc = MappingSet::unit();
    let mut bound: BTreeSet<Variable> = BTreeSet::new();
    while !parts.is_empty() {
        if acc.is_empty() {
            return Ok(acc);
        }
        let pick = (0..parts.len())
            .min_by_key(|&i| (bound.is_disjoint(&parts[i].0) && !bound.is_empty(), parts[i].1.len()))
            .unwrap();
        let (vars, set) = parts.swap_remove(pick);
        acc = acc.join(&set);
        bound.extend(vars);
    }
    Ok(acc)
}
