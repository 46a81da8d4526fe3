//! Row insertion and P-symbols.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::partition::Partition;

/// A semistandard tableau in English notation: rows weakly increase, columns
/// strictly increase.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps `rows` if they form a semistandard tableau.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Option<Self> {
        let t = Self { rows };
        t.is_semistandard().then_some(t)
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| !r.is_empty() && r.windows(2).all(|w| w[0] <= w[1]));
        let shape_ok = self.rows.windows(2).all(|w| w[0].len() >= w[1].len());
        let cols_ok = self.rows.windows(2).all(|w| w[1].iter().zip(&w[0]).all(|(below, above)| above < below));
        rows_ok && shape_ok && cols_ok
    }

    /// `T ← k`: `k` bumps the leftmost entry of row 1 strictly greater than
    /// itself, the bumped entry is inserted into row 2 the same way, and so
    /// on until a letter lands at the end of a row.
    pub fn insert(&mut self, mut k: usize) {
        for row in &mut self.rows {
            let slot = row.partition_point(|&x| x <= k);
            if slot == row.len() {
                row.push(k);
                return;
            }
            k = std::mem::replace(&mut row[slot], k);
        }
        self.rows.push(vec![k]);
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(Vec::len).collect())
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            f.write_str(&cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn row_insert(t: &Tableau, k: usize) -> Tableau {
    let mut out = t.clone();
    out.insert(k);
    out
}

/// `P(x) = ∅ ← x_1 ← … ← x_n`.
pub fn p_symbol(x: &[usize]) -> Tableau {
    let mut t = Tableau::new();
    for &k in x {
        t.insert(k);
    }
    t
}

pub fn shape(t: &Tableau) -> Partition {
    t.shape()
}

pub fn transpose(lambda: &Partition) -> Partition {
    lambda.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insertion_examples() {
        assert_eq!(row_insert(&Tableau::new(), 3).rows(), &[vec![3]]);
        let t = Tableau::from_rows(vec![vec![1, 3, 4], vec![5]]).unwrap();
        assert_eq!(row_insert(&t, 2).rows(), &[vec![1, 2, 4], vec![3], vec![5]]);
        let t = Tableau::from_rows(vec![vec![1, 2]]).unwrap();
        assert_eq!(row_insert(&t, 3).rows(), &[vec![1, 2, 3]]);
    }

    #[test]
    fn equal_letters_stay_in_the_row() {
        assert_eq!(p_symbol(&[2, 2, 1]).rows(), &[vec![1, 2], vec![2]]);
    }

    #[test]
    fn p_symbol_shapes() {
        assert_eq!(p_symbol(&[3, 1, 2, 1, 4, 3]).shape().parts(), &[3, 2, 1]);
        let p = p_symbol(&[1, 3, 5, 4, 2]);
        assert_eq!(p.rows(), &[vec![1, 2, 4], vec![3], vec![5]]);
        assert_eq!(shape(&p).parts(), &[3, 1, 1]);
        assert_eq!(p_symbol(&[1, 2, 2, 5, 7]).rows().len(), 1);
        assert_eq!(shape(&p_symbol(&[1, 2, 3, 4, 5])).parts(), &[5]);
    }

    #[test]
    fn rejects_bad_tableaux() {
        assert!(Tableau::from_rows(vec![vec![1, 2], vec![2]]).is_some());
        assert!(Tableau::from_rows(vec![vec![1, 2], vec![1]]).is_none());
        assert!(Tableau::from_rows(vec![vec![2, 1]]).is_none());
        assert!(Tableau::from_rows(vec![vec![1], vec![2, 3]]).is_none());
    }

    #[test]
    fn renders_rows() {
        assert_eq!(p_symbol(&[1, 3, 5, 4, 2]).to_string(), "1 2 4\n3\n5");
    }

    proptest! {
        #[test]
        fn insertion_stays_semistandard(word in proptest::collection::vec(1usize..6, 0..30)) {
            let mut t = Tableau::new();
            for (n, &k) in word.iter().enumerate() {
                t = row_insert(&t, k);
                prop_assert!(t.is_semistandard());
                prop_assert_eq!(t.size(), n + 1);
            }
        }
    }
}
