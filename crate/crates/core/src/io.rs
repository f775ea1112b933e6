//! File formats: JSON state schema, JSON with 17-significant-digit floats,
//! and the P-function CSV grid.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::phasespace::PFuncTable;
use crate::symstate::{DickeVector, SymDensity};

/// Scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// serde_json formatter that prints every float with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_float(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// {"n_qubits", "kind": "pure"|"mixed", "amplitudes" | "matrix"} with
/// complex numbers as [re, im] and Dicke order M = −S..S.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub n_qubits: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateData {
    Pure(DickeVector),
    Mixed(SymDensity),
}

impl StateData {
    pub fn n_qubits(&self) -> usize {
        match self {
            Self::Pure(v) => v.n_qubits(),
            Self::Mixed(r) => r.n_qubits(),
        }
    }

    pub fn density(&self) -> SymDensity {
        match self {
            Self::Pure(v) => v.density(),
            Self::Mixed(r) => r.clone(),
        }
    }

    pub fn to_json(&self) -> StateJson {
        let pair = |z: &Complex64| [z.re, z.im];
        match self {
            Self::Pure(v) => StateJson {
                n_qubits: v.n_qubits(),
                kind: "pure".into(),
                amplitudes: Some(v.amplitudes().iter().map(pair).collect()),
                matrix: None,
            },
            Self::Mixed(r) => StateJson {
                n_qubits: r.n_qubits(),
                kind: "mixed".into(),
                amplitudes: None,
                matrix: Some((0..r.dim()).map(|i| r.matrix().row(i).iter().map(pair).collect()).collect()),
            },
        }
    }

    pub fn from_json(json: &StateJson) -> Result<Self> {
        let cplx = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        match json.kind.as_str() {
            "pure" => {
                let amps = json.amplitudes.as_ref().ok_or_else(|| Error::InvalidState("pure state needs \"amplitudes\"".into()))?;
                Ok(Self::Pure(DickeVector::new(json.n_qubits, amps.iter().map(cplx).collect())?))
            }
            "mixed" => {
                let rows = json.matrix.as_ref().ok_or_else(|| Error::InvalidState("mixed state needs \"matrix\"".into()))?;
                let d = rows.len();
                if rows.iter().any(|r| r.len() != d) {
                    return Err(Error::InvalidState("matrix must be square".into()));
                }
                let m = ComplexMatrix::from_row_major(d, rows.iter().flatten().map(cplx).collect())?;
                Ok(Self::Mixed(SymDensity::new(json.n_qubits, m)?))
            }
            other => Err(Error::InvalidState(format!("unknown kind {other:?}, expected \"pure\" or \"mixed\""))),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        to_json(&self.to_json())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: StateJson = serde_json::from_str(text).map_err(|e| Error::InvalidState(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Header `theta,phi,weight,p_value`, one row per grid node.
pub fn write_pfunc_csv<W: Write>(mut out: W, table: &PFuncTable) -> io::Result<()> {
    writeln!(out, "theta,phi,weight,p_value")?;
    for (p, v) in table.points.iter().zip(&table.values) {
        writeln!(out, "{},{},{},{}", format_float(p.theta), format_float(p.phi), format_float(p.weight), format_float(*v))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::{pfunc, GridSpec};
    use crate::symstate::{random_density, scs_amplitudes, Direction};

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(to_json(&vec![1.0 / 3.0]).unwrap(), "[3.3333333333333331e-1]\n");
        assert_eq!(to_json(&vec![f64::NAN]).unwrap(), "[null]\n");
    }

    #[test]
    fn state_round_trip_is_exact() {
        let pure = StateData::Pure(scs_amplitudes(4, Direction::new(1.0, 0.5).unwrap()).unwrap());
        let mixed = StateData::Mixed(random_density(3, 7, 4).unwrap());
        for s in [pure, mixed] {
            let text = s.to_json_string().unwrap();
            assert_eq!(StateData::from_json_str(&text).unwrap(), s);
        }
    }

    #[test]
    fn rejects_malformed_states() {
        assert!(StateData::from_json_str(r#"{"n_qubits":1,"kind":"pure","amplitudes":[[1,0],[1,0]]}"#).is_err());
        assert!(StateData::from_json_str(r#"{"n_qubits":1,"kind":"odd"}"#).is_err());
        assert!(StateData::from_json_str(r#"{"n_qubits":1,"kind":"mixed"}"#).is_err());
        assert!(StateData::from_json_str("not json").is_err());
    }

    #[test]
    fn csv_layout() {
        let t = pfunc(&SymDensity::maximally_mixed(1).unwrap(), &GridSpec::for_qubits(1).grid()).unwrap();
        let mut buf = Vec::new();
        write_pfunc_csv(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "theta,phi,weight,p_value");
        assert_eq!(lines.len(), 1 + 4 * 8);
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 4);
        assert!(fields.iter().all(|f| f.split('e').next().unwrap().trim_start_matches('-').len() == 18));
        let p: f64 = fields[3].parse().unwrap();
        assert!((p - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    }
}
