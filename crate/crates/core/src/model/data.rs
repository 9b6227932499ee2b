use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Observed design matrix with one continuous and one binary response.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
    z: Vec<u8>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>, z: Vec<u8>, names: Vec<String>) -> Result<Self> {
        let (n, p) = x.shape();
        if n < 2 {
            return Err(Error::validation(format!("need at least 2 observations, got {n}")));
        }
        if p < 1 {
            return Err(Error::validation("design matrix has no columns"));
        }
        if y.len() != n || z.len() != n {
            return Err(Error::Dimension(format!(
                "X has {n} rows but y has {} and z has {} entries",
                y.len(),
                z.len()
            )));
        }
        if names.len() != p {
            return Err(Error::Dimension(format!(
                "{} column names for {p} design columns",
                names.len()
            )));
        }
        if let Some(pos) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(format!(
                "non-finite design entry at row {}, column {}",
                pos % n + 1,
                pos / n + 1
            )));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(format!("non-finite y at row {}", i + 1)));
        }
        if let Some(i) = z.iter().position(|&v| v > 1) {
            return Err(Error::validation(format!("z at row {} is {}, expected 0 or 1", i + 1, z[i])));
        }
        Ok(Self { x, y, z, names })
    }

    /// Dataset with default column names `x1..xp`.
    pub fn from_parts(x: DMatrix<f64>, y: DVector<f64>, z: Vec<u8>) -> Result<Self> {
        let names = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Self::new(x, y, z, names)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn z(&self) -> &[u8] {
        &self.z
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Row `i` of the design as an owned column vector.
    pub fn row(&self, i: usize) -> DVector<f64> {
        self.x.row(i).transpose()
    }

    /// Subset of rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let x = self.x.select_rows(rows);
        let y = DVector::from_iterator(rows.len(), rows.iter().map(|&i| self.y[i]));
        let z = rows.iter().map(|&i| self.z[i]).collect();
        Self::new(x, y, z, self.names.clone())
    }

    /// Copy with the continuous response replaced.
    pub fn with_y(&self, y: DVector<f64>) -> Result<Self> {
        Self::new(self.x.clone(), y, self.z.clone(), self.names.clone())
    }

    /// Copy with the binary response replaced.
    pub fn with_z(&self, z: Vec<u8>) -> Result<Self> {
        Self::new(self.x.clone(), self.y.clone(), z, self.names.clone())
    }
}

/// Polynomial order of each design column; drives the prior shrinkage powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectOrders(Vec<u32>);

impl EffectOrders {
    pub fn new(orders: Vec<u32>) -> Self {
        Self(orders)
    }

    /// Every column a linear effect.
    pub fn linear(p: usize) -> Self {
        Self(vec![1; p])
    }

    /// Leading intercept (order 0) followed by `p - 1` linear effects.
    pub fn with_intercept(p: usize) -> Self {
        let mut v = vec![1; p];
        if let Some(first) = v.first_mut() {
            *first = 0;
        }
        Self(v)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn check(&self, p: usize) -> Result<()> {
        if self.0.len() != p {
            return Err(Error::Dimension(format!(
                "{} effect orders for {p} design columns",
                self.0.len()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> (DMatrix<f64>, DVector<f64>) {
        (
            DMatrix::from_row_slice(3, 2, &[1.0, 0.5, 1.0, -0.2, 1.0, 2.0]),
            DVector::from_vec(vec![0.1, 0.2, 0.3]),
        )
    }

    #[test]
    fn rejects_bad_z() {
        let (x, y) = tiny();
        let err = Dataset::from_parts(x, y, vec![0, 2, 1]).unwrap_err();
        assert!(err.to_string().contains("row 2"));
    }

    #[test]
    fn rejects_nan_and_small_n() {
        let (mut x, y) = tiny();
        x[(1, 1)] = f64::NAN;
        assert!(Dataset::from_parts(x, y, vec![0, 1, 1]).is_err());
        let one = DMatrix::from_element(1, 1, 1.0);
        assert!(Dataset::from_parts(one, DVector::zeros(1), vec![1]).is_err());
    }

    #[test]
    fn select_rows_keeps_alignment() {
        let (x, y) = tiny();
        let d = Dataset::from_parts(x, y, vec![0, 1, 1]).unwrap();
        let s = d.select_rows(&[2, 0]).unwrap();
        assert_eq!(s.y().as_slice(), &[0.3, 0.1]);
        assert_eq!(s.z(), &[1, 0]);
        assert_eq!(s.x()[(0, 1)], 2.0);
    }

    #[test]
    fn intercept_orders() {
        assert_eq!(EffectOrders::with_intercept(3).as_slice(), &[0, 1, 1]);
        assert!(EffectOrders::linear(2).check(3).is_err());
    }
}
