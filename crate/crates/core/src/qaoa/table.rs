use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pbf::Polynomial;

/// Largest register simulated.
pub const MAX_QUBITS: usize = 26;

/// Diagonal of the cost Hamiltonian: `values[z]` is the polynomial at the bit
/// pattern of `z`, qubit `k` being bit `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CostTable {
    num_qubits: usize,
    values: Vec<f64>,
    /// Distinct values in increasing order.
    levels: Vec<f64>,
    /// Index into `levels` for each basis state.
    level_of: Vec<u32>,
}

impl CostTable {
    /// Evaluates `poly` on all `2^n` basis states. Terms are summed in the
    /// same order as [`Polynomial::evaluate`], so entries are bit-identical to it.
    pub fn build(poly: &Polynomial, num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::SizeCap {
                what: "qubits",
                size: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        if let Some(v) = poly.variables().into_iter().find(|v| v.index() >= num_qubits) {
            return Err(Error::MissingVariable(v));
        }
        let terms: Vec<(u64, f64)> = poly
            .terms()
            .map(|(vars, c)| (vars.iter().fold(0u64, |m, v| m | 1 << v.0), c))
            .collect();
        let mut values = vec![0.0; 1usize << num_qubits];
        values.par_chunks_mut(1 << 12).enumerate().for_each(|(chunk, out)| {
            let base = (chunk as u64) << 12;
            for (k, slot) in out.iter_mut().enumerate() {
                let z = base | k as u64;
                let mut acc = 0.0;
                for &(mask, c) in &terms {
                    if z & mask == mask {
                        acc += c;
                    }
                }
                *slot = acc;
            }
        });
        Ok(Self::from_values(num_qubits, values))
    }

    fn from_values(num_qubits: usize, values: Vec<f64>) -> Self {
        let mut levels = values.clone();
        levels.sort_unstable_by(f64::total_cmp);
        levels.dedup_by(|a, b| a.to_bits() == b.to_bits());
        let level_of = values
            .iter()
            .map(|v| levels.partition_point(|l| l.total_cmp(v).is_lt()) as u32)
            .collect();
        CostTable {
            num_qubits,
            values,
            levels,
            level_of,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, z: usize) -> f64 {
        self.values[z]
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub(crate) fn level_of(&self) -> &[u32] {
        &self.level_of
    }

    pub fn min(&self) -> f64 {
        self.levels[0]
    }

    pub fn max(&self) -> f64 {
        self.levels[self.levels.len() - 1]
    }

    /// Basis states attaining the minimum, ascending.
    pub fn argmin(&self) -> Vec<usize> {
        let lo = self.min();
        (0..self.len()).filter(|&z| self.values[z] == lo).collect()
    }

    /// Average over all basis states.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbf::VarId;

    #[test]
    fn single_variable() {
        let t = CostTable::build(&Polynomial::var(VarId(0)), 1).unwrap();
        assert_eq!(t.values(), &[0.0, 1.0]);
        assert_eq!(t.levels(), &[0.0, 1.0]);
    }

    #[test]
    fn zero_polynomial() {
        let t = CostTable::build(&Polynomial::zero(), 3).unwrap();
        assert!(t.values().iter().all(|&v| v == 0.0));
        assert_eq!(t.levels().len(), 1);
        assert_eq!(t.argmin().len(), 8);
    }

    #[test]
    fn matches_evaluate_bits() {
        let p = Polynomial::from_terms([
            (vec![VarId(0), VarId(2)], -3.0),
            (vec![VarId(1)], 0.5),
            (vec![], 2.0),
        ]);
        let t = CostTable::build(&p, 3).unwrap();
        for z in 0..8 {
            assert_eq!(t.value(z).to_bits(), p.evaluate_bits(z as u64).to_bits());
            assert_eq!(t.levels()[t.level_of()[z] as usize], t.value(z));
        }
        assert_eq!(t.min(), -1.0);
        assert_eq!(t.argmin(), vec![0b101]);
    }

    #[test]
    fn caps_and_out_of_range() {
        assert!(matches!(
            CostTable::build(&Polynomial::zero(), 27),
            Err(Error::SizeCap { .. })
        ));
        assert!(matches!(
            CostTable::build(&Polynomial::var(VarId(3)), 2),
            Err(Error::MissingVariable(VarId(3)))
        ));
    }
}
