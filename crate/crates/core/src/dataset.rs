//! Typed relation over which constraints are mined.
//!
//! Storage is column-major. String cells are interned into a dictionary shared
//! by every string column, so equality across columns is a code comparison.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use crate::error::{Error, Result};

/// Dictionary code used for a null string cell.
pub(crate) const NULL_CODE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColumnType {
    String,
    Numeric,
}

impl fmt::Display for ColumnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColumnType::String => "string",
            ColumnType::Numeric => "numeric",
        })
    }
}

/// A borrowed cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value<'a> {
    Null,
    Number(f64),
    Text(&'a str),
}

impl Value<'_> {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }
}

#[derive(Debug, Clone)]
pub(crate) enum ColumnData {
    /// NaN marks a null; parsed values are always finite.
    Numeric(Vec<f64>),
    Text(Vec<u32>),
}

#[derive(Debug, Clone)]
struct Column {
    name: String,
    data: ColumnData,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    columns: Vec<Column>,
    dictionary: Vec<String>,
    row_count: usize,
}

/// Parses a cell as a finite decimal number.
pub fn parse_number(cell: &str) -> Option<f64> {
    let trimmed = cell.trim();
    // `f64::from_str` also accepts "inf" and "NaN"; only finite values count.
    let v: f64 = trimmed.parse().ok()?;
    v.is_finite().then_some(v)
}

impl Dataset {
    /// Builds a dataset from string records, inferring column types.
    ///
    /// A column is numeric iff every non-null cell parses as a finite decimal.
    /// Cells equal to `null_token` are null.
    pub fn from_records<R, S>(names: Vec<String>, records: &[R], null_token: &str) -> Result<Self>
    where
        R: AsRef<[S]>,
        S: AsRef<str>,
    {
        let width = names.len();
        for (row, rec) in records.iter().enumerate() {
            let found = rec.as_ref().len();
            if found != width {
                return Err(Error::RaggedRow {
                    row,
                    expected: width,
                    found,
                });
            }
        }

        let mut interner: HashMap<String, u32> = HashMap::new();
        let mut dictionary = Vec::new();
        let mut columns = Vec::with_capacity(width);
        for (c, name) in names.into_iter().enumerate() {
            let cells = || records.iter().map(move |r| r.as_ref()[c].as_ref());
            let numeric = cells()
                .filter(|s| *s != null_token)
                .all(|s| parse_number(s).is_some());
            let data = if numeric {
                ColumnData::Numeric(
                    cells()
                        .map(|s| {
                            if s == null_token {
                                f64::NAN
                            } else {
                                parse_number(s).unwrap_or(f64::NAN)
                            }
                        })
                        .collect(),
                )
            } else {
                ColumnData::Text(
                    cells()
                        .map(|s| {
                            if s == null_token {
                                return NULL_CODE;
                            }
                            if let Some(&code) = interner.get(s) {
                                return code;
                            }
                            let code = dictionary.len() as u32;
                            dictionary.push(s.to_string());
                            interner.insert(s.to_string(), code);
                            code
                        })
                        .collect(),
                )
            };
            columns.push(Column { name, data });
        }
        Ok(Dataset {
            columns,
            dictionary,
            row_count: records.len(),
        })
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.row_count
    }

    #[inline]
    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn column_name(&self, col: usize) -> &str {
        &self.columns[col].name
    }

    pub fn column_type(&self, col: usize) -> ColumnType {
        match self.columns[col].data {
            ColumnData::Numeric(_) => ColumnType::Numeric,
            ColumnData::Text(_) => ColumnType::String,
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// `(name, type)` for every column, in order.
    pub fn schema(&self) -> impl Iterator<Item = (&str, ColumnType)> + '_ {
        (0..self.columns.len()).map(|c| (self.column_name(c), self.column_type(c)))
    }

    pub fn value(&self, row: usize, col: usize) -> Value<'_> {
        match &self.columns[col].data {
            ColumnData::Numeric(v) => {
                let x = v[row];
                if x.is_nan() {
                    Value::Null
                } else {
                    Value::Number(x)
                }
            }
            ColumnData::Text(v) => match v[row] {
                NULL_CODE => Value::Null,
                code => Value::Text(&self.dictionary[code as usize]),
            },
        }
    }

    pub(crate) fn data(&self, col: usize) -> &ColumnData {
        &self.columns[col].data
    }

    /// Distinct non-null values of a column as comparable keys (float bits for
    /// numeric columns, dictionary codes for string columns), sorted.
    pub(crate) fn distinct_keys(&self, col: usize) -> Vec<u64> {
        let mut keys: Vec<u64> = match &self.columns[col].data {
            ColumnData::Numeric(v) => v
                .iter()
                .filter(|x| !x.is_nan())
                .map(|x| x.to_bits())
                .collect(),
            ColumnData::Text(v) => v
                .iter()
                .filter(|&&c| c != NULL_CODE)
                .map(|&c| u64::from(c))
                .collect(),
        };
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    /// The sub-relation made of `rows`, in the given order. Column types are
    /// kept from `self`.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        let columns = self
            .columns
            .iter()
            .map(|c| Column {
                name: c.name.clone(),
                data: match &c.data {
                    ColumnData::Numeric(v) => ColumnData::Numeric(rows.iter().map(|&r| v[r]).collect()),
                    ColumnData::Text(v) => ColumnData::Text(rows.iter().map(|&r| v[r]).collect()),
                },
            })
            .collect();
        Dataset {
            columns,
            dictionary: self.dictionary.clone(),
            row_count: rows.len(),
        }
    }

    /// Renders every row back to strings. Numbers use the shortest
    /// representation that parses back to the same value.
    pub fn to_records(&self, null_token: &str) -> Vec<Vec<String>> {
        (0..self.row_count)
            .map(|r| {
                (0..self.columns.len())
                    .map(|c| match self.value(r, c) {
                        Value::Null => null_token.to_string(),
                        Value::Number(x) => alloc::format!("{x}"),
                        Value::Text(s) => s.to_string(),
                    })
                    .collect()
            })
            .collect()
    }
}

/// Two datasets are equal when schemas match and every cell holds the same
/// value (numbers compared bitwise); dictionary layout is irrelevant.
impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        if self.row_count != other.row_count || !self.schema().eq(other.schema()) {
            return false;
        }
        (0..self.columns.len()).all(|c| {
            (0..self.row_count).all(|r| match (self.value(r, c), other.value(r, c)) {
                (Value::Null, Value::Null) => true,
                (Value::Number(a), Value::Number(b)) => a.to_bits() == b.to_bits(),
                (Value::Text(a), Value::Text(b)) => a == b,
                _ => false,
            })
        })
    }
}
