//! Dense cost matrices: the asymmetric instance, its normalization and the
//! 2n x 2n symmetric construction with ghost vertices.
//!
//! Vertices are 0-based throughout. City `i` of an n-city instance has ghost
//! `n + i` in the symmetric instance.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cost::{Cost, MAX_ENTRY_MAGNITUDE};
use crate::error::{Error, Result};

/// Row-major square grid of extended costs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Cost>>", into = "Vec<Vec<Cost>>")]
pub struct Grid {
    size: usize,
    data: Vec<Cost>,
}

impl Grid {
    pub fn filled(size: usize, value: Cost) -> Self {
        Grid {
            size,
            data: vec![value; size * size],
        }
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Cost) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        Grid { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Cost {
        self.data[row * self.size + col]
    }

    pub fn row(&self, row: usize) -> &[Cost] {
        &self.data[row * self.size..(row + 1) * self.size]
    }

    pub fn transpose(&self) -> Grid {
        Grid::from_fn(self.size, |i, j| self.get(j, i))
    }

    pub fn rows(&self) -> Vec<Vec<Cost>> {
        self.data.chunks(self.size.max(1)).map(<[Cost]>::to_vec).collect()
    }
}

impl TryFrom<Vec<Vec<Cost>>> for Grid {
    type Error = Error;

    fn try_from(rows: Vec<Vec<Cost>>) -> Result<Self> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::ShapeMismatch {
                    expected: size,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Grid { size, data })
    }
}

impl From<Grid> for Vec<Vec<Cost>> {
    fn from(g: Grid) -> Self {
        g.rows()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            let line: Vec<String> = self.row(i).iter().map(|c| format!("{c:>5}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// An n-city ATSP instance: finite off-diagonal costs, `Inf` diagonal, n >= 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Grid", into = "Grid")]
pub struct AsymCostMatrix {
    grid: Grid,
}

impl AsymCostMatrix {
    /// Validates a full grid. Diagonal entries must be `Inf`.
    pub fn new(grid: Grid) -> Result<Self> {
        let n = grid.size();
        if n < 2 {
            return Err(Error::TooFewCities(n));
        }
        for i in 0..n {
            for j in 0..n {
                let c = grid.get(i, j);
                if i == j {
                    if c != Cost::Inf {
                        return Err(Error::InvalidSpec(format!(
                            "diagonal entry ({i}, {i}) must be INF, got {c}"
                        )));
                    }
                    continue;
                }
                match c {
                    Cost::Inf => return Err(Error::InfiniteEntry { row: i, col: j }),
                    Cost::Finite(v) if v.abs() > MAX_ENTRY_MAGNITUDE => {
                        return Err(Error::MagnitudeOutOfRange {
                            row: i,
                            col: j,
                            value: v,
                        })
                    }
                    Cost::Finite(_) => {}
                }
            }
        }
        Ok(AsymCostMatrix { grid })
    }

    /// Builds from integer rows; whatever sits on the diagonal is replaced by `Inf`.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::ShapeMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Self::from_fn(n, |i, j| rows[i][j])
    }

    /// Builds from a closure over off-diagonal positions.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Result<Self> {
        Self::new(Grid::from_fn(n, |i, j| {
            if i == j {
                Cost::Inf
            } else {
                Cost::Finite(f(i, j))
            }
        }))
    }

    pub fn n(&self) -> usize {
        self.grid.size()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cost {
        self.grid.get(i, j)
    }

    /// Off-diagonal entry as a plain integer.
    #[inline]
    pub fn arc(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i != j);
        self.grid.get(i, j).finite().expect("off-diagonal entries are finite")
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = i64> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| self.arc(i, j)))
    }

    /// Smallest off-diagonal entry.
    pub fn min_entry(&self) -> i64 {
        self.off_diagonal().min().expect("n >= 2")
    }

    /// Largest off-diagonal entry.
    pub fn max_entry(&self) -> i64 {
        self.off_diagonal().max().expect("n >= 2")
    }

    pub fn transpose(&self) -> AsymCostMatrix {
        AsymCostMatrix {
            grid: self.grid.transpose(),
        }
    }

    /// Integer rows with `None` on the diagonal.
    pub fn to_rows(&self) -> Vec<Vec<Option<i64>>> {
        (0..self.n())
            .map(|i| self.grid.row(i).iter().map(|c| c.finite()).collect())
            .collect()
    }
}

impl TryFrom<Grid> for AsymCostMatrix {
    type Error = Error;

    fn try_from(grid: Grid) -> Result<Self> {
        AsymCostMatrix::new(grid)
    }
}

impl From<AsymCostMatrix> for Grid {
    fn from(m: AsymCostMatrix) -> Self {
        m.grid
    }
}

/// An instance whose off-diagonal entries are all >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    pub matrix: AsymCostMatrix,
    /// Amount added to every off-diagonal entry.
    pub shift: i64,
    /// Smallest off-diagonal entry of the input.
    pub original_min: i64,
}

impl NormalizedInstance {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Maps a normalized tour cost back to the original matrix.
    pub fn to_original_cost(&self, normalized: i64) -> i64 {
        normalized - self.n() as i64 * self.shift
    }
}

/// Shifts all off-diagonal entries by `-m + 1` when the smallest entry `m`
/// is non-positive. The diagonal stays `Inf`. Every tour gains exactly
/// `n * shift`, so tour ranking is unchanged.
pub fn normalize(m: &AsymCostMatrix) -> NormalizedInstance {
    let original_min = m.min_entry();
    let shift = if original_min <= 0 { 1 - original_min } else { 0 };
    let matrix = if shift == 0 {
        m.clone()
    } else {
        AsymCostMatrix {
            grid: Grid::from_fn(m.n(), |i, j| match m.get(i, j) {
                Cost::Finite(v) => Cost::Finite(v + shift),
                Cost::Inf => Cost::Inf,
            }),
        }
    };
    NormalizedInstance {
        matrix,
        shift,
        original_min,
    }
}

/// Copy of the matrix with the `Inf` diagonal replaced by 0.
pub fn zero_diagonal(m: &AsymCostMatrix) -> Grid {
    Grid::from_fn(m.n(), |i, j| if i == j { Cost::ZERO } else { m.get(i, j) })
}

/// Which value the city/ghost pairing entries hold in the symmetric instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Pairing entries are 0.
    ZeroDiag,
    /// Pairing entries are `-M'`, with `M'` the largest off-diagonal entry.
    JvNegM,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::ZeroDiag => "zero-diag",
            Variant::JvNegM => "jv-negm",
        })
    }
}

/// The 2n x 2n symmetric instance
///
/// ```text
/// | INF   D  |
/// | D^T  INF |
/// ```
///
/// where `D` is the source matrix with its diagonal replaced by the pairing value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricInstance {
    n: usize,
    grid: Grid,
    variant: Variant,
    mprime: i64,
}

impl SymmetricInstance {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        2 * self.n
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cost {
        self.grid.get(i, j)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Largest off-diagonal entry of the source matrix.
    pub fn mprime(&self) -> i64 {
        self.mprime
    }

    /// Value stored on every city/ghost pairing entry.
    pub fn pairing_value(&self) -> i64 {
        match self.variant {
            Variant::ZeroDiag => 0,
            Variant::JvNegM => -self.mprime,
        }
    }

    pub fn is_ghost(&self, v: usize) -> bool {
        v >= self.n
    }
}

/// Builds the symmetric instance from a normalized matrix.
pub fn build_symmetric(m: &NormalizedInstance, variant: Variant) -> SymmetricInstance {
    symmetric_from_matrix(&m.matrix, variant)
}

pub(crate) fn symmetric_from_matrix(m: &AsymCostMatrix, variant: Variant) -> SymmetricInstance {
    let n = m.n();
    let mprime = m.max_entry();
    let pairing = match variant {
        Variant::ZeroDiag => 0,
        Variant::JvNegM => -mprime,
    };
    let d = |i: usize, j: usize| {
        if i == j {
            Cost::Finite(pairing)
        } else {
            m.get(i, j)
        }
    };
    let grid = Grid::from_fn(2 * n, |r, c| match (r < n, c < n) {
        (true, false) => d(r, c - n),
        (false, true) => d(c, r - n),
        _ => Cost::Inf,
    });
    SymmetricInstance {
        n,
        grid,
        variant,
        mprime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: Cost = Cost::Inf;

    fn e1() -> AsymCostMatrix {
        AsymCostMatrix::from_rows(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap()
    }

    fn f(v: i64) -> Cost {
        Cost::Finite(v)
    }

    #[test]
    fn normalize_positive_matrix_is_untouched() {
        let m = AsymCostMatrix::from_rows(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap();
        let norm = normalize(&m);
        assert_eq!(norm.shift, 0);
        assert_eq!(norm.original_min, 1);
        assert_eq!(norm.matrix, m);
    }

    #[test]
    fn normalize_negative_entry_shifts_by_one_minus_min() {
        let m = AsymCostMatrix::from_rows(&[vec![0, -3], vec![5, 0]]).unwrap();
        let norm = normalize(&m);
        assert_eq!(norm.shift, 4);
        assert_eq!(norm.matrix.arc(0, 1), 1);
        assert_eq!(norm.matrix.arc(1, 0), 9);
        assert_eq!(norm.matrix.get(0, 0), INF);
        assert_eq!(norm.to_original_cost(10), 2);
    }

    #[test]
    fn normalize_zero_minimum_shifts_by_one() {
        let m = AsymCostMatrix::from_rows(&[vec![0, 0], vec![3, 0]]).unwrap();
        assert_eq!(normalize(&m).shift, 1);
    }

    #[test]
    fn rejects_small_and_oversized_instances() {
        assert!(matches!(
            AsymCostMatrix::from_rows(&[vec![0]]),
            Err(Error::TooFewCities(1))
        ));
        let big = MAX_ENTRY_MAGNITUDE + 1;
        assert!(matches!(
            AsymCostMatrix::from_rows(&[vec![0, big], vec![1, 0]]),
            Err(Error::MagnitudeOutOfRange { row: 0, col: 1, .. })
        ));
        assert!(AsymCostMatrix::from_rows(&[vec![0, -MAX_ENTRY_MAGNITUDE], vec![1, 0]]).is_ok());
    }

    #[test]
    fn rejects_infinite_off_diagonal_and_finite_diagonal() {
        let g = Grid::try_from(vec![vec![INF, INF], vec![f(1), INF]]).unwrap();
        assert!(matches!(
            AsymCostMatrix::new(g),
            Err(Error::InfiniteEntry { row: 0, col: 1 })
        ));
        let g = Grid::try_from(vec![vec![f(0), f(1)], vec![f(1), INF]]).unwrap();
        assert!(AsymCostMatrix::new(g).is_err());
    }

    #[test]
    fn zero_diagonal_examples() {
        let m = AsymCostMatrix::from_rows(&[vec![0, 7], vec![4, 0]]).unwrap();
        assert_eq!(zero_diagonal(&m).rows(), vec![vec![f(0), f(7)], vec![f(4), f(0)]]);

        let d = zero_diagonal(&e1());
        assert_eq!(
            d.rows(),
            vec![
                vec![f(0), f(1), f(2)],
                vec![f(2), f(0), f(1)],
                vec![f(1), f(2), f(0)]
            ]
        );
        assert_eq!(d.transpose(), zero_diagonal(&e1().transpose()));
    }

    #[test]
    fn symmetric_zero_diag_e1_entries() {
        let s = build_symmetric(&normalize(&e1()), Variant::ZeroDiag);
        assert_eq!(s.size(), 6);
        // 1-based (1,5), (1,6), (4,2), (5,2), (1,4), (1,2)
        assert_eq!(s.get(0, 4), f(1));
        assert_eq!(s.get(0, 5), f(2));
        assert_eq!(s.get(3, 1), f(2));
        assert_eq!(s.get(4, 1), f(0));
        assert_eq!(s.get(0, 3), f(0));
        assert_eq!(s.get(0, 1), INF);
        for i in 0..3 {
            assert_eq!(s.get(i, 3 + i), f(0));
            assert_eq!(s.get(3 + i, i), f(0));
        }
    }

    #[test]
    fn symmetric_jv_variant_uses_negative_mprime() {
        let zd = build_symmetric(&normalize(&e1()), Variant::ZeroDiag);
        let jv = build_symmetric(&normalize(&e1()), Variant::JvNegM);
        assert_eq!(jv.mprime(), 2);
        for r in 0..6 {
            for c in 0..6 {
                if r % 3 == c % 3 && (r < 3) != (c < 3) {
                    assert_eq!(jv.get(r, c), f(-2));
                } else {
                    assert_eq!(jv.get(r, c), zd.get(r, c));
                }
            }
        }
    }

    #[test]
    fn matrix_serde_uses_rows() {
        let m = e1();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["INF",1,2],[2,"INF",1],[1,2,"INF"]]"#);
        let back: AsymCostMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<AsymCostMatrix>(r#"[["INF",1],[1,0]]"#).is_err());
    }
}
