//! JSON wire shapes shared with the command line tool.
//!
//! Big integers travel as decimal strings so any JSON parser round-trips
//! them losslessly; small literals may be written as plain numbers on input.
//! Every library type that crosses the CLI boundary gets a mirror struct
//! here with serde derives plus conversions in both directions. Parsing
//! always goes back through the validating constructors, so a deserialized
//! value satisfies the same invariants as a freshly built one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Factorization, Ideal};
use crate::error::{Error, Result};
use crate::lifting::{CertInput, CongruenceTarget, LiftCertificate};
use crate::matrix::IntMatrix;
use crate::projective::{ClassTable, ProjPoint, Weights};
use crate::unital::ShiftWitness;

/// Arbitrary-precision integer on the wire. Serializes as a decimal string;
/// deserializes from a decimal string or an exact JSON integer. Floats are
/// rejected so nothing silently loses precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Big(pub BigInt);

impl From<&BigInt> for Big {
    fn from(a: &BigInt) -> Self {
        Big(a.clone())
    }
}

impl Serialize for Big {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

struct BigVisitor;

impl Visitor<'_> for BigVisitor {
    type Value = Big;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Big, E> {
        BigInt::from_str(s.trim())
            .map(Big)
            .map_err(|_| E::custom(format!("invalid integer '{s}'")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Big, E> {
        Ok(Big(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Big, E> {
        Ok(Big(BigInt::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Big, E> {
        Err(E::custom(format!(
            "{v} is not an exact integer; write large integers as decimal strings"
        )))
    }
}

impl<'de> Deserialize<'de> for Big {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(BigVisitor)
    }
}

fn bigs(values: &[BigInt]) -> Vec<Big> {
    values.iter().map(Big::from).collect()
}

fn ints(values: &[Big]) -> Vec<BigInt> {
    values.iter().map(|b| b.0.clone()).collect()
}

/// Ideal from a wire modulus: 0 names the zero ideal (exact arithmetic),
/// anything positive the usual proper or unit ideal.
pub fn parse_ideal(modulus: &BigInt) -> Result<Ideal> {
    if modulus.is_zero() {
        Ok(Ideal::exact())
    } else {
        Ideal::new(modulus.clone())
    }
}

/// Dense matrix: explicit dimensions plus row-major decimal entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Big>>,
}

impl MatrixJson {
    pub fn of(m: &IntMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows()).map(|i| bigs(m.row_slice(i))).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<IntMatrix> {
        let m = IntMatrix::from_rows(self.entries.iter().map(|r| ints(r)).collect())?;
        if m.rows() != self.rows || m.cols() != self.cols {
            return Err(Error::BadShape(format!(
                "declared {}x{} but entries are {}x{}",
                self.rows,
                self.cols,
                m.rows(),
                m.cols()
            )));
        }
        Ok(m)
    }
}

/// Head-shift witness: coefficients on the non-pivot entries, the shifted
/// value, and the modulus it is a unit against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub coefficients: Vec<Big>,
    pub result: Big,
    pub modulus: Big,
}

impl WitnessJson {
    pub fn of(w: &ShiftWitness) -> Self {
        WitnessJson {
            coefficients: bigs(&w.coefficients),
            result: Big::from(&w.result),
            modulus: Big::from(w.modulus.modulus()),
        }
    }

    pub fn to_witness(&self) -> Result<ShiftWitness> {
        Ok(ShiftWitness {
            coefficients: ints(&self.coefficients),
            result: self.result.0.clone(),
            modulus: parse_ideal(&self.modulus.0)?,
        })
    }
}

/// Weighted projective point: coordinates, modulus, one exponent per slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub coords: Vec<Big>,
    pub modulus: Big,
    pub weights: Vec<u32>,
}

impl PointJson {
    pub fn of(p: &ProjPoint) -> Self {
        PointJson {
            coords: bigs(p.coords()),
            modulus: Big::from(p.ideal().modulus()),
            weights: p.weights().exponents().to_vec(),
        }
    }

    pub fn to_point(&self) -> Result<ProjPoint> {
        ProjPoint::new(
            ints(&self.coords),
            parse_ideal(&self.modulus.0)?,
            Weights::new(self.weights.clone())?,
        )
    }
}

/// Rowwise congruence prescription: one row and one modulus per slot, with
/// optional per-row projective weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetJson {
    pub rows: Vec<Vec<Big>>,
    pub moduli: Vec<Big>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<u32>>>,
}

impl TargetJson {
    pub fn of(t: &CongruenceTarget) -> Self {
        TargetJson {
            rows: t.rows().iter().map(|(r, _)| bigs(r)).collect(),
            moduli: t
                .rows()
                .iter()
                .map(|(_, n)| Big::from(n.modulus()))
                .collect(),
            weights: t
                .weights()
                .map(|ws| ws.iter().map(|w| w.exponents().to_vec()).collect()),
        }
    }

    pub fn to_target(&self) -> Result<CongruenceTarget> {
        if self.rows.len() != self.moduli.len() {
            return Err(Error::BadLength(format!(
                "{} rows but {} moduli",
                self.rows.len(),
                self.moduli.len()
            )));
        }
        let rows = self
            .rows
            .iter()
            .zip(&self.moduli)
            .map(|(r, n)| Ok((ints(r), parse_ideal(&n.0)?)))
            .collect::<Result<Vec<_>>>()?;
        let target = CongruenceTarget::new(rows)?;
        match &self.weights {
            None => Ok(target),
            Some(ws) => {
                let ws = ws
                    .iter()
                    .map(|w| Weights::new(w.clone()))
                    .collect::<Result<Vec<_>>>()?;
                target.with_weights(ws)
            }
        }
    }
}

/// One named predicate outcome inside a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
}

/// What a lift was asked to match, tagged by kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertInputJson {
    MatrixModN { matrix: MatrixJson, modulus: Big },
    Target(TargetJson),
    Points { points: Vec<PointJson> },
}

impl CertInputJson {
    pub fn of(input: &CertInput) -> Self {
        match input {
            CertInput::MatrixModN { matrix, modulus } => CertInputJson::MatrixModN {
                matrix: MatrixJson::of(matrix),
                modulus: Big::from(modulus.modulus()),
            },
            CertInput::Target(t) => CertInputJson::Target(TargetJson::of(t)),
            CertInput::Points(ps) => CertInputJson::Points {
                points: ps.iter().map(PointJson::of).collect(),
            },
        }
    }

    pub fn to_input(&self) -> Result<CertInput> {
        match self {
            CertInputJson::MatrixModN { matrix, modulus } => Ok(CertInput::MatrixModN {
                matrix: matrix.to_matrix()?,
                modulus: parse_ideal(&modulus.0)?,
            }),
            CertInputJson::Target(t) => Ok(CertInput::Target(t.to_target()?)),
            CertInputJson::Points { points } => Ok(CertInput::Points(
                points
                    .iter()
                    .map(|p| p.to_point())
                    .collect::<Result<Vec<_>>>()?,
            )),
        }
    }
}

/// Full lift certificate. Emitted by every lifting operation; consumed by
/// the verifier, which recomputes each named check from input and output
/// and never trusts the stored booleans.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub input: CertInputJson,
    pub output: MatrixJson,
    pub lambdas: Vec<Big>,
    pub checks: Vec<CheckJson>,
}

impl CertificateJson {
    pub fn of(cert: &LiftCertificate) -> Self {
        CertificateJson {
            input: CertInputJson::of(cert.input()),
            output: MatrixJson::of(cert.output()),
            lambdas: bigs(cert.lambdas()),
            checks: cert
                .checks()
                .iter()
                .map(|c| CheckJson {
                    name: c.name.clone(),
                    pass: c.pass,
                })
                .collect(),
        }
    }

    /// Validated pieces for re-verification: input, output, recorded
    /// lambdas, and the claimed check names (pass flags dropped on purpose).
    pub fn to_parts(&self) -> Result<(CertInput, IntMatrix, Vec<BigInt>, Vec<String>)> {
        Ok((
            self.input.to_input()?,
            self.output.to_matrix()?,
            ints(&self.lambdas),
            self.checks.iter().map(|c| c.name.clone()).collect(),
        ))
    }
}

/// One weighted projective class: canonical representative and orbit size.
/// Representatives are reduced residues, so plain integers are lossless.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub representative: Vec<u64>,
    pub size: u64,
}

/// Orbit partition of the unital tuples of (Z/n)^d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTableJson {
    pub modulus: Big,
    pub weights: Vec<u32>,
    pub class_count: usize,
    pub total_points: u64,
    pub classes: Vec<ClassJson>,
}

impl ClassTableJson {
    pub fn of(t: &ClassTable) -> Result<Self> {
        let classes = t
            .classes()
            .iter()
            .map(|(rep, size)| {
                let rep = rep
                    .iter()
                    .map(|r| {
                        r.to_u64().ok_or_else(|| {
                            Error::Internal(format!("class representative {r} exceeds u64"))
                        })
                    })
                    .collect::<Result<Vec<u64>>>()?;
                Ok(ClassJson {
                    representative: rep,
                    size: *size,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassTableJson {
            modulus: Big::from(t.modulus().modulus()),
            weights: t.weights().exponents().to_vec(),
            class_count: t.class_count(),
            total_points: t.total_points(),
            classes,
        })
    }
}

/// Prime factorization as ordered [prime, exponent] pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson(pub Vec<(Big, u32)>);

impl FactorizationJson {
    pub fn of(f: &Factorization) -> Self {
        FactorizationJson(
            f.pairs()
                .iter()
                .map(|(p, e)| (Big::from(p), *e))
                .collect(),
        )
    }

    /// Recompose the factored value.
    pub fn value(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::from(1), |acc, (p, e)| acc * p.0.pow(*e))
    }
}
