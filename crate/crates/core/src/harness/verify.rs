use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;
use crate::extbp::{brute_force, default_lambda, to_pubo, to_qubo, EbpAssignment, EbpInstance, Encoding};
use crate::qaoa::CostTable;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub instance: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {} {}: {}", self.instance, c.name, c.detail)?;
        }
        Ok(())
    }
}

struct Reference {
    optimum: f64,
    optima: usize,
    bounds: (f64, f64),
    lambda: f64,
    qubits: (usize, usize),
}

fn reference(name: &str) -> Option<Reference> {
    let (optimum, optima, lo, lambda, pubo, qubo) = match name {
        "A" => (-1.0, 1, -4.0, 8.0, 7, 15),
        "B" => (-2.0, 1, -6.0, 10.0, 9, 17),
        "C" => (-2.0, 11, -8.0, 12.0, 11, 20),
        _ => return None,
    };
    Some(Reference {
        optimum,
        optima,
        bounds: (lo, 3.0),
        lambda,
        qubits: (pubo, qubo),
    })
}

/// Global minimum of an encoding over all of its basis states, and the
/// distinct decision parts of the minimizers.
pub fn encoding_minimizers(inst: &EbpInstance, enc: &Encoding) -> Result<(f64, BTreeSet<EbpAssignment>)> {
    let table = CostTable::build(&enc.poly, enc.qubit_count)?;
    let mask = (1usize << enc.num_decision_vars) - 1;
    let projected = table
        .argmin()
        .into_iter()
        .map(|z| z & mask)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|z| EbpAssignment::from_index(inst, z as u64))
        .collect();
    Ok((table.min(), projected))
}

/// Brute-force facts about `inst` and both encodings. Builtin instances are
/// also compared with their reference values.
pub fn verify(inst: &EbpInstance) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        })
    };
    let reference = (inst.cmax == 2 && inst.trains.iter().all(|t| t.cost == 1.0 && t.benefit == 1.0))
        .then(|| EbpInstance::builtin(&inst.name).ok())
        .flatten()
        .filter(|b| b == inst)
        .and_then(|_| reference(&inst.name));

    let bf = brute_force(inst)?;
    let bounds = inst.objective().interval_bounds();
    let lambda = default_lambda(inst);
    let pubo = to_pubo(inst, lambda, lambda)?;
    let qubo = to_qubo(inst, lambda, lambda)?;
    let bits = (inst.cmax as f64).log2().floor() as usize + 1;
    let multi = inst.pairs_of_group().iter().filter(|g| g.len() >= 2).count();
    let open_trains = inst.trains.iter().filter(|t| !t.groups.is_empty()).count();
    let qubo_formula = inst.num_decision_vars() + multi + open_trains * bits;

    match &reference {
        Some(r) => {
            check("optimum", bf.optimum == r.optimum, format!("{} (expected {})", bf.optimum, r.optimum));
            check("optima", bf.optima.len() == r.optima, format!("{} (expected {})", bf.optima.len(), r.optima));
            check("bounds", bounds == r.bounds, format!("{bounds:?} (expected {:?})", r.bounds));
            check("lambda", lambda == r.lambda, format!("{lambda} (expected {})", r.lambda));
            check(
                "qubits",
                (pubo.qubit_count, qubo.qubit_count) == r.qubits && qubo.qubit_count == qubo_formula,
                format!("pubo {} qubo {} (expected {:?})", pubo.qubit_count, qubo.qubit_count, r.qubits),
            );
        }
        None => {
            check("optimum", bf.optimum.is_finite(), format!("{} with {} optima", bf.optimum, bf.optima.len()));
            check(
                "bounds",
                bounds.0 <= bf.optimum && bf.optimum <= bounds.1,
                format!("{bounds:?} brackets {}", bf.optimum),
            );
            check("lambda", lambda == bounds.1 - bounds.0 + 1.0, format!("{lambda}"));
            check(
                "qubits",
                pubo.qubit_count == inst.num_decision_vars() && qubo.qubit_count == qubo_formula,
                format!("pubo {} qubo {}", pubo.qubit_count, qubo.qubit_count),
            );
        }
    }

    let optima: BTreeSet<EbpAssignment> = bf.optima.iter().cloned().collect();
    for enc in [&pubo, &qubo] {
        let (min, projected) = encoding_minimizers(inst, enc)?;
        check(
            &format!("{}_projection", enc.formulation),
            (min - bf.optimum).abs() <= 1e-9 && projected == optima,
            format!("min {min} over 2^{}, {} projected minimizers", enc.qubit_count, projected.len()),
        );
    }
    Ok(VerifyReport {
        instance: inst.name.clone(),
        checks,
    })
}
