//! Point evaluation of the boundary laws for the `laws eval` command.
//!
//! Arguments are `--name value` pairs; vectors are comma separated.

use std::collections::BTreeMap;

use crate::contact::{regularized_selection, truncate_scalar, truncate_vector};
use crate::error::{Error, Result};
use crate::Vec3;

pub const LAWS: &[&str] = &["p_nu", "h_tau", "h_w", "N_l", "M_l", "xi_eps"];

struct Args {
    values: BTreeMap<String, String>,
    used: Vec<(String, String)>,
}

impl Args {
    fn parse(args: &[String]) -> Result<Args> {
        let mut values = BTreeMap::new();
        let mut it = args.iter();
        while let Some(a) = it.next() {
            let Some(key) = a.strip_prefix("--") else {
                return Err(Error::InvalidInput(format!("expected --name, found '{a}'")));
            };
            let (key, value) = match key.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = it
                        .next()
                        .ok_or_else(|| Error::InvalidInput(format!("missing value for --{key}")))?;
                    (key.to_string(), v.clone())
                }
            };
            if values.insert(key.clone(), value).is_some() {
                return Err(Error::InvalidInput(format!("--{key} given twice")));
            }
        }
        Ok(Args {
            values,
            used: Vec::new(),
        })
    }

    fn raw(&mut self, key: &str, default: Option<&str>) -> Result<String> {
        let v = match (self.values.remove(key), default) {
            (Some(v), _) => v,
            (None, Some(d)) => d.to_string(),
            (None, None) => return Err(Error::InvalidInput(format!("missing argument --{key}"))),
        };
        self.used.push((key.to_string(), v.clone()));
        Ok(v)
    }

    fn scalar(&mut self, key: &str, default: Option<&str>) -> Result<f64> {
        let v = self.raw(key, default)?;
        v.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("--{key}: bad number '{v}'")))
    }

    fn vector(&mut self, key: &str) -> Result<Vec<f64>> {
        let v = self.raw(key, None)?;
        let parts: Vec<f64> = v
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidInput(format!("--{key}: bad vector '{v}'")))?;
        if parts.is_empty() || parts.len() > 3 {
            return Err(Error::InvalidInput(format!("--{key}: expected 1 to 3 components")));
        }
        Ok(parts)
    }

    fn finish(self, law: &str, value: String) -> Result<String> {
        if let Some(k) = self.values.keys().next() {
            return Err(Error::InvalidInput(format!("unused argument --{k} for {law}")));
        }
        let params: Vec<String> = self.used.iter().map(|(k, v)| format!("{k}={v}")).collect();
        Ok(format!("{law} {} -> {value}", params.join(" ")))
    }
}

fn to_vec3(x: &[f64]) -> Vec3 {
    let mut v = Vec3::zeros();
    v.as_mut_slice()[..x.len()].copy_from_slice(x);
    v
}

fn join(v: &Vec3, n: usize) -> String {
    v.iter().take(n).map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn nonnegative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{name} must be nonnegative, got {v}")))
    }
}

/// Evaluates `law` and returns `law key=value ... -> result`.
pub fn eval_law(law: &str, args: &[String]) -> Result<String> {
    let mut a = Args::parse(args)?;
    let value = match law {
        "p_nu" => {
            let lam = a.scalar("lam", None)?;
            let m = a.scalar("m", Some("1"))?;
            let g = a.scalar("g", Some("0"))?;
            let u_nu = a.scalar("u_nu", None)?;
            nonnegative("lam", lam)?;
            if m < 1.0 {
                return Err(Error::Hypothesis(format!("exponent m must be >= 1, got {m}")));
            }
            let pen = (u_nu - g).max(0.0);
            let p = if m == 1.0 { lam * pen } else { lam * pen.powf(m) };
            p.to_string()
        }
        "h_tau" => {
            let mu = a.scalar("mu", None)?;
            let p = a.scalar("p", None)?;
            let c_theta = a.scalar("c_theta", Some("0"))?;
            let theta = a.scalar("theta", Some("0"))?;
            let l = a.scalar("l", Some("1e6"))?;
            nonnegative("mu", mu)?;
            nonnegative("p", p)?;
            (mu * p * (1.0 + c_theta * truncate_scalar(theta, l)).max(0.0)).to_string()
        }
        "h_w" => {
            let eta = a.scalar("eta", None)?;
            let mu = a.scalar("mu", None)?;
            let p = a.scalar("p", None)?;
            let vt = to_vec3(&a.vector("vt")?);
            nonnegative("eta", eta)?;
            (eta * mu * p * vt.norm()).to_string()
        }
        "N_l" => {
            let l = a.scalar("l", None)?;
            let x = a.vector("x")?;
            join(&truncate_vector(&to_vec3(&x), l), x.len())
        }
        "M_l" => {
            let l = a.scalar("l", None)?;
            let x = a.scalar("x", None)?;
            truncate_scalar(x, l).to_string()
        }
        "xi_eps" => {
            let eps = a.scalar("eps", None)?;
            let v = a.vector("v")?;
            join(&regularized_selection(&to_vec3(&v), eps), v.len())
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown law '{other}' (expected one of {})",
                LAWS.join(", ")
            )))
        }
    };
    a.finish(law, value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(law: &str, args: &str) -> Result<String> {
        let args: Vec<String> = args.split_whitespace().map(str::to_string).collect();
        eval_law(law, &args)
    }

    #[test]
    fn documented_examples() {
        assert_eq!(
            run("p_nu", "--lam 1 --m 1 --g 0 --u_nu 0.5").unwrap(),
            "p_nu lam=1 m=1 g=0 u_nu=0.5 -> 0.5"
        );
        assert_eq!(run("N_l", "--l 2 --x 3,4").unwrap(), "N_l l=2 x=3,4 -> 1.2,1.6");
        let hw = run("h_w", "--eta 0.01 --mu 0.3 --p 2.5 --vt 2").unwrap();
        let value: f64 = hw.rsplit("-> ").next().unwrap().parse().unwrap();
        assert!((value - 0.015).abs() < 1e-15, "{hw}");
    }

    #[test]
    fn other_laws() {
        assert_eq!(run("M_l", "--l 1 --x -3").unwrap(), "M_l l=1 x=-3 -> -1");
        assert_eq!(run("xi_eps", "--eps 0 --v 0,2").unwrap(), "xi_eps eps=0 v=0,2 -> 0,1");
        assert!(run("h_tau", "--mu 0.5 --p 2 --c_theta -1 --theta 5 --l 0.5")
            .unwrap()
            .ends_with("-> 0.5"));
        assert!(run("p_nu", "--lam=2 --u_nu -1").unwrap().ends_with("-> 0"));
    }

    #[test]
    fn errors() {
        assert!(matches!(run("foo", ""), Err(Error::InvalidInput(_))));
        assert!(matches!(run("N_l", "--l 2"), Err(Error::InvalidInput(_))));
        assert!(matches!(run("N_l", "--l 2 --x 1 --y 3"), Err(Error::InvalidInput(_))));
        assert!(matches!(
            run("p_nu", "--lam 1 --m 0.5 --u_nu 1"),
            Err(Error::Hypothesis(_))
        ));
    }
}
