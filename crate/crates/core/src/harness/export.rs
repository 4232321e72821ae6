use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extbp::{EbpInstance, Encoding, Formulation};
use crate::pbf::{Monomial, Polynomial};

/// Polynomial file: term list, variable names and how it was built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialExport {
    pub instance: String,
    pub formulation: Formulation,
    pub lambda_uni: f64,
    pub lambda_capa: f64,
    pub qubit_count: usize,
    pub num_decision_vars: usize,
    /// `var_names[k]` names variable `k`.
    pub var_names: Vec<String>,
    pub terms: Vec<Monomial>,
}

impl PolynomialExport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|m| (m.vars.clone(), m.coeff)))
    }
}

pub fn export_encoding(inst: &EbpInstance, enc: &Encoding) -> PolynomialExport {
    PolynomialExport {
        instance: inst.name.clone(),
        formulation: enc.formulation,
        lambda_uni: enc.lambda_uni,
        lambda_capa: enc.lambda_capa,
        qubit_count: enc.qubit_count,
        num_decision_vars: enc.num_decision_vars,
        var_names: enc.var_names.clone(),
        terms: enc.poly.monomials(),
    }
}

/// Parses a polynomial file, checking every variable has a name.
pub fn import_polynomial(json: &str) -> Result<PolynomialExport> {
    let rec: PolynomialExport = serde_json::from_str(json)?;
    if rec.var_names.len() != rec.qubit_count {
        return Err(Error::ShapeMismatch(format!(
            "{} names for {} variables",
            rec.var_names.len(),
            rec.qubit_count
        )));
    }
    if let Some(v) = rec
        .terms
        .iter()
        .flat_map(|m| m.vars.iter())
        .find(|v| v.index() >= rec.qubit_count)
    {
        return Err(Error::UndeclaredVariable(*v));
    }
    Ok(rec)
}
