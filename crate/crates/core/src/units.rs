//! Conversion between physical values and the natural units used for
//! reporting: fields in units of `JN`, times in units of `(2JN²)⁻¹`.

use crate::dicke::validate_qubits;
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Units {
    n_qubits: usize,
    jn: f64,
}

impl Units {
    /// `jn` is the product of the coupling and the number of qubits.
    pub fn new(n_qubits: usize, jn: f64) -> Result<Self> {
        validate_qubits(n_qubits)?;
        if !(jn > 0.0 && jn.is_finite()) {
            return Err(invalid("JN", format!("must be positive, got {jn}")));
        }
        Ok(Self { n_qubits, jn })
    }

    /// The `JN = 1` convention.
    pub fn natural(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 1.0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn jn(&self) -> f64 {
        self.jn
    }

    pub fn coupling(&self) -> f64 {
        self.jn / self.n_qubits as f64
    }

    /// Physical field from a value in units of `JN`.
    pub fn field(&self, over_jn: f64) -> f64 {
        over_jn * self.jn
    }

    pub fn field_over_jn(&self, field: f64) -> f64 {
        field / self.jn
    }

    /// Length of one `(2JN²)⁻¹` time unit.
    pub fn time_unit(&self) -> f64 {
        1.0 / (2.0 * self.jn * self.n_qubits as f64)
    }

    /// Physical time from a value in units of `(2JN²)⁻¹`.
    pub fn time(&self, scaled: f64) -> f64 {
        scaled * self.time_unit()
    }

    pub fn scaled_time(&self, time: f64) -> f64 {
        time / self.time_unit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units_for_ten_qubits() {
        let u = Units::natural(10).unwrap();
        assert!((u.coupling() - 0.1).abs() < 1e-15);
        assert!((u.time(150.0) - 7.5).abs() < 1e-12);
        assert!((u.scaled_time(u.time(37.0)) - 37.0).abs() < 1e-12);
        assert!(Units::new(10, 0.0).is_err());
        assert!(Units::new(9, 1.0).is_err());
    }
}
