//! Checked-in layer tables of the lifted witnesses, transportation
//! matrices, and the search used to repair an inconsistent layer list.

use num_bigint::BigInt;
use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fiber::ugb_member;
use crate::graver::GraverBasis;
use crate::lawrence::{relation_minimal, Relation};
use crate::limits::Limits;
use crate::linalg::{IntMatrix, LatticeVector};

const MANIFEST: &str = include_str!("../data/SHA256SUMS");

const FILES: [(&str, &str); 5] = [
    ("z6", include_str!("../data/z6.txt")),
    ("z7", include_str!("../data/z7.txt")),
    ("z8", include_str!("../data/z8.txt")),
    ("z9", include_str!("../data/z9.txt")),
    ("z27", include_str!("../data/z27.txt")),
];

/// Names of the shipped tables.
pub fn table_names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

/// Distinct-or-not layers of `r × c` tables with multiplicities, flattened
/// row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerTable {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub layers: Vec<LatticeVector>,
    pub multiplicities: Vec<u64>,
}

impl LayerTable {
    /// Parses `shape R C` followed by blocks `table m` and `R` rows of `C`
    /// integers. `#` starts a comment.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { line, column: 1, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, head) = lines.next().ok_or_else(|| err(1, "missing shape line".into()))?;
        let shape: Vec<&str> = head.split_whitespace().collect();
        let (rows, cols) = match shape.as_slice() {
            ["shape", r, c] => (
                r.parse::<usize>().map_err(|e| err(ln, e.to_string()))?,
                c.parse::<usize>().map_err(|e| err(ln, e.to_string()))?,
            ),
            _ => return Err(err(ln, "expected `shape R C`".into())),
        };
        if rows == 0 || cols == 0 {
            return Err(err(ln, "empty table shape".into()));
        }
        let (mut layers, mut multiplicities) = (Vec::new(), Vec::new());
        while let Some((ln, l)) = lines.next() {
            let m = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["table", m] => m.parse::<u64>().map_err(|e| err(ln, e.to_string()))?,
                _ => return Err(err(ln, "expected `table m`".into())),
            };
            if m == 0 {
                return Err(err(ln, "multiplicity must be positive".into()));
            }
            let mut coords = Vec::with_capacity(rows * cols);
            for _ in 0..rows {
                let (ln, row) = lines.next().ok_or_else(|| err(ln, "truncated table".into()))?;
                let entries = row
                    .split_whitespace()
                    .map(|t| t.parse::<BigInt>().map_err(|e| err(ln, format!("`{t}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                if entries.len() != cols {
                    return Err(err(ln, format!("expected {cols} entries, found {}", entries.len())));
                }
                coords.extend(entries);
            }
            layers.push(LatticeVector::new(coords));
            multiplicities.push(m);
        }
        Ok(LayerTable { name: name.to_string(), rows, cols, layers, multiplicities })
    }

    pub fn total(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    /// `Σ mᵢ Lᵢ`.
    pub fn weighted_sum(&self) -> LatticeVector {
        let mut acc = LatticeVector::zero(self.rows * self.cols);
        for (l, &m) in self.layers.iter().zip(&self.multiplicities) {
            acc = acc.add(&l.scale(&BigInt::from(m)));
        }
        acc
    }

    /// Layers in order of first appearance, without repeats.
    pub fn distinct_layers(&self) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = Vec::new();
        for l in &self.layers {
            if !out.contains(l) {
                out.push(l.clone());
            }
        }
        out
    }

    /// Pairs of positions holding the same table.
    pub fn repeated_layers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.layers.len() {
            for j in i + 1..self.layers.len() {
                if self.layers[i] == self.layers[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The table as a relation over its listed layers.
    pub fn relation(&self) -> Result<Relation> {
        Relation::new(self.layers.clone(), self.multiplicities.clone())
    }

    pub fn matrix(&self) -> IntMatrix {
        transportation(self.rows, self.cols)
    }
}

fn sha256_hex(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

/// Checksum recorded in the manifest for `name`.
pub fn recorded_checksum(name: &str) -> Option<&'static str> {
    let file = format!("{name}.txt");
    MANIFEST.lines().find_map(|l| {
        let (sum, f) = l.split_once(char::is_whitespace)?;
        (f.trim() == file).then_some(sum)
    })
}

/// Parses `text` as table `name` after checking it against the manifest.
pub fn load_checked(name: &str, text: &str) -> Result<LayerTable> {
    match recorded_checksum(name) {
        Some(sum) if sum == sha256_hex(text) => LayerTable::parse(name, text),
        _ => Err(Error::Checksum { name: name.to_string() }),
    }
}

/// One of the shipped tables, verified against the manifest.
pub fn paper_table(name: &str) -> Result<LayerTable> {
    let text = FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::pre(format!("no shipped table named `{name}`")))?;
    load_checked(name, text)
}

/// Row and column sums of `r × c` tables flattened row by row: an
/// `(r + c) × rc` matrix.
pub fn transportation(r: usize, c: usize) -> IntMatrix {
    let mut rows = vec![vec![0i64; r * c]; r + c];
    for i in 0..r {
        for j in 0..c {
            rows[i][i * c + j] = 1;
            rows[r + j][i * c + j] = 1;
        }
    }
    IntMatrix::from_rows(&rows).expect("nonempty shape")
}

/// A relation of the same total multiplicity obtained from a table list
/// that does not sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub description: String,
    pub relation: Relation,
}

fn accept(a: &IntMatrix, graver: &GraverBasis, rel: &Relation, limits: &Limits) -> Result<bool> {
    for g in rel.generators() {
        if !graver.contains(g) || ugb_member(a, g, limits)?.is_none() {
            return Ok(false);
        }
    }
    Ok(relation_minimal(rel)?.is_minimal())
}

/// Minimal relations of the same total multiplicity among elements of
/// `U(A)` that stay as close to the listed tables as possible:
/// the listed tables with redistributed multiplicities, and the list with
/// a single table replaced by the one value that closes the sum.
pub fn repair_candidates(table: &LayerTable, graver: &GraverBasis, limits: &Limits) -> Result<Vec<Repair>> {
    let a = table.matrix();
    let total = table.total();
    let mut out = Vec::new();

    let distinct = table.distinct_layers();
    let k = distinct.len();
    let mut lambda = vec![1u64; k];
    fn compositions(rest: u64, i: usize, lambda: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i + 1 == lambda.len() {
            if rest >= 1 {
                lambda[i] = rest;
                out.push(lambda.clone());
            }
            return;
        }
        for v in 1..=rest.saturating_sub((lambda.len() - i - 1) as u64) {
            lambda[i] = v;
            compositions(rest - v, i + 1, lambda, out);
        }
    }
    let mut comps = Vec::new();
    if k > 0 && total >= k as u64 {
        compositions(total, 0, &mut lambda, &mut comps);
    }
    for lam in comps {
        let sum = distinct
            .iter()
            .zip(&lam)
            .fold(LatticeVector::zero(a.cols()), |acc, (g, &m)| acc.add(&g.scale(&BigInt::from(m))));
        if !sum.is_zero() {
            continue;
        }
        let rel = Relation::new(distinct.clone(), lam.clone())?;
        if accept(&a, graver, &rel, limits)? {
            out.push(Repair { description: format!("listed distinct tables with multiplicities {lam:?}"), relation: rel });
        }
    }

    for i in 0..table.layers.len() {
        let m = BigInt::from(table.multiplicities[i]);
        let rest = table
            .layers
            .iter()
            .zip(&table.multiplicities)
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(LatticeVector::zero(a.cols()), |acc, (_, (g, &mj))| acc.add(&g.scale(&BigInt::from(mj))));
        if rest.coords().iter().any(|x| !(x % &m).is_zero()) {
            continue;
        }
        let g = LatticeVector::new(rest.coords().iter().map(|x| -(x / &m)).collect());
        if g.is_zero() {
            continue;
        }
        let mut gens = table.layers.clone();
        gens[i] = g.clone();
        let rel = Relation::new(gens, table.multiplicities.clone())?;
        if accept(&a, graver, &rel, limits)? {
            out.push(Repair { description: format!("table {} replaced by {g}", i + 1), relation: rel });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graver::graver;

    #[test]
    fn shipped_tables_match_manifest() {
        for name in table_names() {
            let t = paper_table(name).unwrap();
            assert_eq!(t.layers.len(), t.multiplicities.len());
        }
        assert!(matches!(load_checked("z6", "shape 1 1\ntable 1\n0\n"), Err(Error::Checksum { .. })));
        assert!(paper_table("z5").is_err());
    }

    #[test]
    fn totals_and_shapes() {
        let totals: Vec<_> = table_names().iter().map(|n| paper_table(n).unwrap().total()).collect();
        assert_eq!(totals, vec![6, 7, 8, 9, 27]);
        let t = paper_table("z27").unwrap();
        assert_eq!((t.rows, t.cols, t.multiplicities.clone()), (4, 3, vec![1, 2, 3, 3, 5, 6, 7]));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = LayerTable::parse("t", "shape 2 2\ntable 1\n1 -1\n1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }));
        assert!(LayerTable::parse("t", "table 1\n").is_err());
        assert!(LayerTable::parse("t", "shape 1 2\ntable 0\n1 -1\n").is_err());
    }

    #[test]
    fn transportation_matrix() {
        let a = transportation(2, 3);
        assert_eq!((a.rows(), a.cols()), (5, 6));
        assert!(a.annihilates(&LatticeVector::from_i64(&[1, -1, 0, -1, 1, 0])));
        assert_eq!(a.rank(), 4);
    }

    #[test]
    fn repair_on_a_small_broken_list() {
        // 2x2 tables: the move h with multiplicities 1 and 1 of h and h does
        // not sum to zero; replacing either copy by -h does.
        let t = LayerTable::parse("t", "shape 2 2\ntable 1\n1 -1\n-1 1\ntable 1\n1 -1\n-1 1\n").unwrap();
        let g = graver(&t.matrix()).unwrap();
        let fixes = repair_candidates(&t, &g, &Limits::default()).unwrap();
        assert_eq!(fixes.len(), 2);
        assert!(fixes.iter().all(|f| f.relation.total() == 2));
    }
}
