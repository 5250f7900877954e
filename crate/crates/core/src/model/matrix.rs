use super::{GroupPartition, ModelError};

/// Symmetric `m x m` matrix of inter-group coordination importance with a
/// unit diagonal and off-diagonal entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinationMatrix {
    m: usize,
    entries: Vec<f64>,
}

impl CoordinationMatrix {
    /// Builds from a full row-major `m x m` entry list.
    pub fn new(m: usize, entries: Vec<f64>) -> Result<Self, ModelError> {
        if m == 0 {
            return Err(ModelError::NoGroups);
        }
        if entries.len() != m * m {
            return Err(ModelError::MatrixShape {
                expected: m * m,
                got: entries.len(),
            });
        }
        for a in 0..m {
            let d = entries[a * m + a];
            if d != 1.0 {
                return Err(ModelError::DiagonalNotOne { index: a, value: d });
            }
            for b in 0..m {
                let v = entries[a * m + b];
                if !(0.0..=1.0).contains(&v) {
                    return Err(ModelError::EntryOutOfRange {
                        row: a,
                        col: b,
                        value: v,
                    });
                }
                if v != entries[b * m + a] {
                    return Err(ModelError::NotSymmetric { row: a, col: b });
                }
            }
        }
        Ok(Self { m, entries })
    }

    /// Builds from the strictly upper-triangular entries in row-major order:
    /// `(0,1), (0,2), ..., (0,m-1), (1,2), ...`.
    pub fn from_upper(m: usize, upper: &[f64]) -> Result<Self, ModelError> {
        let expected = m * m.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(ModelError::MatrixShape {
                expected,
                got: upper.len(),
            });
        }
        let mut entries = vec![1.0; m * m];
        let mut it = upper.iter();
        for a in 0..m {
            for b in a + 1..m {
                let v = *it.next().unwrap();
                entries[a * m + b] = v;
                entries[b * m + a] = v;
            }
        }
        Self::new(m, entries)
    }

    /// Every off-diagonal entry equal to `value`.
    pub fn uniform(m: usize, value: f64) -> Result<Self, ModelError> {
        Self::from_upper(m, &vec![value; m * m.saturating_sub(1) / 2])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.entries[a * self.m + b]
    }

    pub fn upper(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.m * (self.m - 1) / 2);
        for a in 0..self.m {
            for b in a + 1..self.m {
                out.push(self.get(a, b));
            }
        }
        out
    }
}

/// Individual-level coordination weights: zero on the diagonal, the group
/// entry of `F` everywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct IndividualMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl IndividualMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

pub fn expand_matrix(
    f: &CoordinationMatrix,
    partition: &GroupPartition,
) -> Result<IndividualMatrix, ModelError> {
    if f.m() != partition.m() {
        return Err(ModelError::DimensionMismatch {
            matrix: f.m(),
            partition: partition.m(),
        });
    }
    let n = partition.n();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                entries[i * n + j] = f.get(partition.group_of(i), partition.group_of(j));
            }
        }
    }
    Ok(IndividualMatrix { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_group_is_ones_off_diagonal() {
        let p = GroupPartition::contiguous(&[3]).unwrap();
        let f = CoordinationMatrix::new(1, vec![1.0]).unwrap();
        let fh = expand_matrix(&f, &p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(fh.get(i, j), if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn two_unequal_groups_block_structure() {
        let p = GroupPartition::contiguous(&[3, 5]).unwrap();
        let f = CoordinationMatrix::from_upper(2, &[0.4]).unwrap();
        let fh = expand_matrix(&f, &p).unwrap();
        assert_eq!(fh.n(), 8);
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j {
                    0.0
                } else if (i < 3) == (j < 3) {
                    1.0
                } else {
                    0.4
                };
                assert_eq!(fh.get(i, j), want, "({i},{j})");
                assert_eq!(fh.get(i, j), fh.get(j, i));
            }
        }
    }

    /// Equal group sizes: compare against F (x) 1 1^T - I built directly.
    #[test]
    fn equal_sizes_match_kronecker_form() {
        let s = 3;
        let f = CoordinationMatrix::from_upper(3, &[0.3, 0.7, 0.15]).unwrap();
        let p = GroupPartition::contiguous(&[s, s, s]).unwrap();
        let fh = expand_matrix(&f, &p).unwrap();
        let n = 3 * s;
        for i in 0..n {
            for j in 0..n {
                let kron = f.get(i / s, j / s);
                let ident = if i == j { 1.0 } else { 0.0 };
                assert_eq!(fh.get(i, j), kron - ident);
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let p = GroupPartition::contiguous(&[3, 3]).unwrap();
        let f = CoordinationMatrix::uniform(3, 0.5).unwrap();
        assert_eq!(
            expand_matrix(&f, &p),
            Err(ModelError::DimensionMismatch {
                matrix: 3,
                partition: 2
            })
        );
    }

    #[test]
    fn validation() {
        assert!(matches!(
            CoordinationMatrix::new(2, vec![1.0, 0.2, 0.3, 1.0]),
            Err(ModelError::NotSymmetric { .. })
        ));
        assert!(matches!(
            CoordinationMatrix::new(2, vec![0.9, 0.2, 0.2, 1.0]),
            Err(ModelError::DiagonalNotOne { index: 0, .. })
        ));
        assert!(matches!(
            CoordinationMatrix::from_upper(2, &[1.5]),
            Err(ModelError::EntryOutOfRange { .. })
        ));
        assert!(matches!(
            CoordinationMatrix::from_upper(3, &[0.1]),
            Err(ModelError::MatrixShape {
                expected: 3,
                got: 1
            })
        ));
        let f = CoordinationMatrix::from_upper(3, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(f.upper(), vec![0.1, 0.2, 0.3]);
        assert_eq!(f.get(2, 1), 0.3);
    }
}
