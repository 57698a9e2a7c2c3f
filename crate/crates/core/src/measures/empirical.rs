use crate::error::{Error, Result};

/// Finitely supported measure on the line with sorted atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    locations: Vec<f64>,
    weights: Vec<f64>,
}

impl EmpiricalMeasure {
    /// Atoms `(location, weight)`; weights must be positive and sum to one within 1e-12.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("empirical weights sum to {total}, not 1")));
        }
        Self::normalized(atoms)
    }

    /// As [`Self::new`] but rescales the weights to unit mass.
    pub fn normalized(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("empirical measure needs at least one atom".into()));
        }
        if let Some(a) = atoms.iter().find(|a| !a.0.is_finite() || !(a.1 > 0.0) || !a.1.is_finite()) {
            return Err(Error::InvalidInput(format!("bad atom ({}, {})", a.0, a.1)));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let (locations, weights) = atoms.into_iter().map(|(x, w)| (x, w / total)).unzip();
        Ok(Self { locations, weights })
    }

    /// Equal weights on the given samples.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let w = 1.0 / samples.len().max(1) as f64;
        Self::normalized(samples.iter().map(|&x| (x, w)).collect())
    }

    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(vec![(x, 1.0)])
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.locations.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.atoms().map(|(x, w)| x * w).sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms().take_while(|a| a.0 <= x).map(|a| a.1).sum::<f64>().min(1.0)
    }

    /// `inf { x : F(x) >= u }`.
    pub fn quantile(&self, u: f64) -> f64 {
        let mut cum = 0.0;
        for (x, w) in self.atoms() {
            cum += w;
            if cum >= u {
                return x;
            }
        }
        *self.locations.last().expect("non-empty")
    }

    pub fn to_points(&self) -> WeightedPoints {
        WeightedPoints { dim: 1, coords: self.locations.clone(), weights: self.weights.clone() }
    }
}

/// Weighted point cloud in `R^dim`, coordinates stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPoints {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedPoints {
    pub fn new(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() != dim * weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} coordinates do not describe {} points in dimension {dim}",
                coords.len(),
                weights.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) || weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidInput("coordinates must be finite and weights nonnegative".into()));
        }
        Ok(Self { dim, coords, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Drops zero-weight points.
    pub fn compact(&self) -> WeightedPoints {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.weights[i] > 0.0).collect();
        WeightedPoints {
            dim: self.dim,
            coords: keep.iter().flat_map(|&i| self.point(i).iter().copied()).collect(),
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
        }
    }
}

impl From<&EmpiricalMeasure> for WeightedPoints {
    fn from(m: &EmpiricalMeasure) -> Self {
        m.to_points()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_validated() {
        let m = EmpiricalMeasure::new(vec![(2.0, 0.5), (-1.0, 0.5)]).unwrap();
        assert_eq!(m.locations(), &[-1.0, 2.0]);
        assert!(EmpiricalMeasure::new(vec![(0.0, 0.4)]).is_err());
        assert!(EmpiricalMeasure::new(vec![(0.0, 1.0), (1.0, 0.0)]).is_err());
    }

    #[test]
    fn step_quantile() {
        let m = EmpiricalMeasure::from_samples(&[3.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(m.quantile(0.1), 1.0);
        assert_eq!(m.quantile(0.25), 1.0);
        assert_eq!(m.quantile(0.26), 2.0);
        assert_eq!(m.quantile(0.999), 4.0);
        assert!((m.cdf(2.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn points_shape_checked() {
        assert!(WeightedPoints::new(2, vec![0.0; 3], vec![1.0]).is_err());
        let p = WeightedPoints::new(2, vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(p.compact().point(0), &[2.0, 3.0]);
    }
}
