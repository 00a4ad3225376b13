use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|z_j| ≤ 1` for points built from floating point polar data.
const UNIT_SLACK: f64 = 1e-12;

/// A point `e^{iθ}` of the torus, angles reduced to `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    angles: Vec<f64>,
}

impl TorusPoint {
    pub fn new(angles: Vec<f64>) -> Self {
        TorusPoint {
            angles: angles.into_iter().map(reduce_angle).collect(),
        }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// The point `(θ_j + t)_j`.
    pub fn rotate(&self, t: f64) -> Self {
        TorusPoint::new(self.angles.iter().map(|a| a + t).collect())
    }
}

pub(crate) fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point of the closed polydisc with finitely many nonzero coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PolydiscPoint {
    coords: Vec<Complex64>,
}

impl PolydiscPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if let Some((j, z)) = coords
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.norm() <= 1.0 + UNIT_SLACK))
        {
            return Err(Error::domain(format!(
                "coordinate {} has modulus {} > 1",
                j + 1,
                z.norm()
            )));
        }
        Ok(PolydiscPoint { coords })
    }

    /// `(ρ_j e^{iθ_j})_j`; the shorter of the two slices sets the length.
    pub fn from_polar(radii: &[f64], angles: &[f64]) -> Result<Self> {
        if let Some(r) = radii.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::domain(format!("radius {r} outside [0, 1]")));
        }
        Self::new(
            radii
                .iter()
                .zip(angles)
                .map(|(&r, &t)| Complex64::from_polar(r, t))
                .collect(),
        )
    }

    pub fn on_torus(theta: &TorusPoint) -> Self {
        PolydiscPoint {
            coords: theta.angles().iter().map(|&t| Complex64::cis(t)).collect(),
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}
