use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use symqent::husimi::husimi_grid;
use symqent::io::{format_sig17, pair, parse_state, state_to_json, to_json, DensityFile};
use symqent::reduced::{DEFAULT_ANTICOHERENCE_TOL, DEFAULT_MES_TOL};
use symqent::verify::{run_verify, VerifyConfig};
use symqent::{
    anticoherence_order, barycentric_measure, canonicalize4, catalog, expectation,
    geometric_measure, is_mes, moments, n_tangle, rho_t, roots, spin_ops, ExtComplex, GmeConfig,
    SymState,
};

use crate::{Failure, Format, RunArgs, TOL_ENV};

pub struct Runner {
    format: Format,
    mes_tol: f64,
    anticoh_tol: f64,
}

fn positive(name: &str, value: f64) -> Result<f64, Failure> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Failure::input(format!("{name} must be a positive number, got {value}")))
    }
}

impl Runner {
    pub fn new(args: RunArgs) -> Result<Runner, Failure> {
        let env = match std::env::var(TOL_ENV) {
            Ok(text) => Some(
                text.trim()
                    .parse::<f64>()
                    .map_err(|_| Failure::input(format!("{TOL_ENV}={text:?} is not a number")))?,
            ),
            Err(_) => None,
        };
        let mes_tol = args.mes_tol.or(env).unwrap_or(DEFAULT_MES_TOL);
        let anticoh_tol = args.anticoh_tol.or(env).unwrap_or(DEFAULT_ANTICOHERENCE_TOL);
        Ok(Runner {
            format: args.format,
            mes_tol: positive("mes tolerance", mes_tol)?,
            anticoh_tol: positive("anticoherence tolerance", anticoh_tol)?,
        })
    }

    fn load(&self, file: &Path) -> Result<SymState, Failure> {
        let text = fs::read_to_string(file)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", file.display())))?;
        Ok(parse_state(&text)?)
    }

    fn render(&self, value: &Value) -> String {
        match self.format {
            Format::Json => to_json(value),
            Format::Text => {
                let mut out = String::new();
                render_text(value, "", &mut out);
                out.trim_end().to_string()
            }
        }
    }

    pub fn analyze(&self, file: &Path) -> Result<String, Failure> {
        let state = self.load(file)?;
        let mes = is_mes(&state, self.mes_tol);
        let order = anticoherence_order(&state, self.anticoh_tol);
        let ops = spin_ops(state.n());
        let spin: Vec<f64> = ops
            .cartesian()
            .iter()
            .map(|s| expectation(&state, s).map(|v| v.re))
            .collect::<Result<_, _>>()?;
        let m = moments(&state);
        let quad_norm = m
            .quadrupole
            .iter()
            .flatten()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt();
        let set = roots(&state)?;
        Ok(self.render(&json!({
            "n": state.n(),
            "mes": {
                "is_mes": mes.is_mes,
                "residual_sz": mes.residual_sz,
                "residual_sp": mes.residual_sp,
            },
            "anticoherence_order": order.order,
            "anticoherence_deviations": order.deviations,
            "spin_expectation": spin,
            "dipole": m.dipole,
            "dipole_norm": m.dipole_norm(),
            "quadrupole_norm": quad_norm,
            "configuration": set.configuration(),
            "clusters": set.clusters,
        })))
    }

    pub fn reduce(&self, file: &Path, t: usize) -> Result<String, Failure> {
        let state = self.load(file)?;
        let rho = rho_t(&state, t)?;
        let value = serde_json::to_value(DensityFile::from_density(&rho))
            .expect("density file is plain data");
        Ok(self.render(&value))
    }

    pub fn husimi(
        &self,
        file: &Path,
        ntheta: usize,
        nphi: usize,
        out: Option<&Path>,
    ) -> Result<String, Failure> {
        if ntheta == 0 || nphi == 0 {
            return Err(Failure::input("grid sizes must be positive"));
        }
        let state = self.load(file)?;
        let mut csv = String::from("theta,phi,H\n");
        let grid = husimi_grid(&state, ntheta, nphi);
        for (t, p, h) in &grid {
            csv.push_str(&format!("{},{},{}\n", format_sig17(*t), format_sig17(*p), format_sig17(*h)));
        }
        match out {
            None => Ok(csv.trim_end().to_string()),
            Some(path) => {
                fs::write(path, csv)
                    .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
                Ok(self.render(&json!({
                    "out": path.display().to_string(),
                    "rows": grid.len(),
                })))
            }
        }
    }

    pub fn majorana(&self, file: &Path) -> Result<String, Failure> {
        let state = self.load(file)?;
        let set = roots(&state)?;
        let roots: Vec<Value> = set
            .roots
            .iter()
            .map(|r| match r {
                ExtComplex::Finite(z) => json!(pair(*z)),
                ExtComplex::Infinity => Value::Null,
            })
            .collect();
        Ok(self.render(&json!({
            "n": set.n,
            "roots": roots,
            "bloch": set.bloch,
            "clusters": set.clusters,
            "diversity": set.diversity,
            "configuration": set.configuration(),
        })))
    }

    pub fn canonicalize4(&self, file: &Path) -> Result<String, Failure> {
        let state = self.load(file)?;
        let c = canonicalize4(&state)?;
        let log = serde_json::to_value(&c.transform_log).expect("transform log is plain data");
        Ok(self.render(&json!({
            "mu": pair(c.mu),
            "in_S": c.in_s,
            "transform_log": log,
        })))
    }

    pub fn measures(&self, file: &Path) -> Result<String, Failure> {
        let state = self.load(file)?;
        let gme = geometric_measure(&state, &GmeConfig::default());
        let e_b = barycentric_measure(&state)?;
        let tau = if state.n() % 2 == 0 {
            json!(n_tangle(&state)?.value)
        } else {
            Value::Null
        };
        Ok(self.render(&json!({
            "E_G": gme.value,
            "argmax": [gme.argmax.0, gme.argmax.1],
            "E_B": e_b,
            "tau_N": tau,
            "mes": is_mes(&state, self.mes_tol).is_mes,
            "anticoherence_order": anticoherence_order(&state, self.anticoh_tol).order,
        })))
    }

    pub fn catalog(&self, name: &str, n: usize, params: &[String]) -> Result<String, Failure> {
        let params: Vec<Complex64> = params
            .iter()
            .map(|p| parse_complex(p))
            .collect::<Result<_, _>>()?;
        let state = catalog(name, n, &params)?;
        Ok(state_to_json(&state))
    }

    pub fn verify(
        &self,
        nmin: usize,
        nmax: usize,
        seed: u64,
        samples: usize,
        inject_fault: bool,
    ) -> Result<String, Failure> {
        let cfg = VerifyConfig {
            nmin,
            nmax,
            seed,
            samples: samples.max(1),
            inject_fault,
            ..VerifyConfig::default()
        };
        let report = run_verify(&cfg)?;
        let text = match self.format {
            Format::Json => to_json(&report),
            Format::Text => {
                let mut lines = vec![format!("verify n={}..{} seed={}", nmin, nmax, seed)];
                for s in &report.suites {
                    lines.push(format!(
                        "{} {:<20} cases={:<5} max_residual={} tol={}",
                        if s.passed { "PASS" } else { "FAIL" },
                        s.name,
                        s.cases,
                        format_sig17(s.max_residual),
                        format_sig17(s.tolerance),
                    ));
                }
                lines.join("\n")
            }
        };
        if report.passed {
            Ok(text)
        } else {
            let failed: Vec<&str> = report.suites.iter().filter(|s| !s.passed).map(|s| s.name).collect();
            Err(Failure {
                code: 3,
                message: format!("suites failed: {}", failed.join(", ")),
                stdout: text,
            })
        }
    }
}

fn parse_complex(text: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::input(format!("cannot parse parameter {text:?}; expected re,im"));
    let mut parts = text.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => format_sig17(x),
            _ => n.to_string(),
        }),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn render_text(value: &Value, indent: &str, out: &mut String) {
    match value {
        Value::Object(map) => render_map(map, indent, out),
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{indent}- {s}\n")),
                    None => {
                        out.push_str(&format!("{indent}-\n"));
                        render_text(item, &format!("{indent}  "), out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{indent}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn render_map(map: &Map<String, Value>, indent: &str, out: &mut String) {
    for (key, v) in map {
        match scalar(v) {
            Some(s) => out.push_str(&format!("{indent}{key}: {s}\n")),
            None => {
                out.push_str(&format!("{indent}{key}:\n"));
                render_text(v, &format!("{indent}  "), out);
            }
        }
    }
}
