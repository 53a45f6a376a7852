//! JSON state files and 17-significant-digit number formatting.
//!
//! A state file is either `{"n": N, "dicke": [[re, im], ...]}` with `N + 1`
//! pairs or `{"named": "<name>", "n": N, "params": [[re, im], ...]}`.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::reduced::ReducedDensity;
use crate::state::{catalog, make_state, SymState};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Explicit {
        n: usize,
        dicke: Vec<[f64; 2]>,
    },
    Named {
        named: String,
        n: usize,
        #[serde(default)]
        params: Vec<[f64; 2]>,
    },
}

impl StateFile {
    pub fn from_state(state: &SymState) -> StateFile {
        StateFile::Explicit {
            n: state.n(),
            dicke: state.coeffs().iter().map(|c| pair(*c)).collect(),
        }
    }

    pub fn into_state(self) -> Result<SymState> {
        match self {
            StateFile::Explicit { n, dicke } => {
                let raw: Vec<C64> = dicke.iter().map(|p| C64::new(p[0], p[1])).collect();
                make_state(n, &raw)
            }
            StateFile::Named { named, n, params } => {
                let params: Vec<C64> = params.iter().map(|p| C64::new(p[0], p[1])).collect();
                catalog(&named, n, &params)
            }
        }
    }
}

pub fn pair(c: C64) -> [f64; 2] {
    [c.re, c.im]
}

pub fn parse_state(text: &str) -> Result<SymState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state()
}

pub fn state_to_json(state: &SymState) -> String {
    to_json(&StateFile::from_state(state))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityFile {
    pub t: usize,
    /// Row-major `[re, im]` entries.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl DensityFile {
    pub fn from_density(rho: &ReducedDensity) -> DensityFile {
        let d = rho.dim();
        DensityFile {
            t: rho.t,
            matrix: (0..d)
                .map(|i| (0..d).map(|j| pair(rho.mat[(i, j)])).collect())
                .collect(),
        }
    }
}

/// `%.17g`: shortest of fixed or exponent notation, trailing zeros dropped.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Compact JSON writer printing every float with 17 significant digits.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduced::rho_t;

    #[test]
    fn sig17_formatting() {
        assert_eq!(format_sig17(0.5), "0.5");
        assert_eq!(format_sig17(1.0), "1");
        assert_eq!(format_sig17(-1.5e20), "-1.5e20");
        assert_eq!(format_sig17(-2.25e-9), "-2.2499999999999999e-9");
        assert_eq!(format_sig17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_sig17(f64::NAN), "null");
        for x in [std::f64::consts::PI, 1e-300, -7.123456789e22, 0.1, 2.0f64.sqrt()] {
            assert_eq!(format_sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn state_round_trip() {
        let s = catalog("psi_mu", 4, &[C64::new(0.3, -0.7)]).unwrap();
        let back = parse_state(&state_to_json(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn named_and_malformed() {
        let s = parse_state(r#"{"named": "dicke", "n": 4, "params": [[1, 0]]}"#).unwrap();
        assert_eq!(s, catalog("dicke", 4, &[C64::new(1.0, 0.0)]).unwrap());
        let g = parse_state(r#"{"named": "GHZ", "n": 3}"#).unwrap();
        assert_eq!(g, catalog("ghz", 3, &[]).unwrap());
        assert!(matches!(parse_state("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_state(r#"{"n": 2}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"n": 2, "dicke": [[1, 0]]}"#),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_json() {
        let r = rho_t(&catalog("ghz", 3, &[]).unwrap(), 1).unwrap();
        let text = to_json(&DensityFile::from_density(&r));
        let back: DensityFile = serde_json::from_str(&text).unwrap();
        assert!((back.matrix[0][0][0] - 0.5).abs() < 1e-15);
        assert_eq!(back.matrix[0][0][0], r.mat[(0, 0)].re);
        assert_eq!(back.t, 1);
    }
}
