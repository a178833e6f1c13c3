//! TOML configuration with embedded defaults and `key=value` overrides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CONFIG: &str = r#"master_seed = 20240611
output_dir = "regen-stable-out"

[covering_check]
beta = 0.6
epsilon = 0.05
horizon = 1.0
points = [[0.5], [0.02], [0.3, 0.7]]
replications = 100000
z_threshold = 3.0

[localtime_moments]
beta = 0.75
p = 2
epsilon = 1e-4
t = 1.0
replications = 10000
rel_tol_first = 0.05
rel_tol_second = 0.10

[joint_moments]
beta = 0.75
p = 2
index_sets = [[1, 2], [2, 3]]
times = [1.0, 1.0]
epsilon = 1e-4
replications = 10000
evaluations = 1000000
target_rel_se = 0.005
max_rel_se = 0.01
sigma = 3.0

[simulate_z]
alpha = 0.8
beta = 0.75
p = 2
m = 12
n_arrivals = 50
epsilon = 1e-4
grid_points = 21
replications = 200

[selfsim]
alpha = 0.8
beta = 0.75
p = 2
m = 12
n_arrivals = 50
epsilon = 1e-4
c = 2.0
t0 = 0.5
replications = 2000
level = 0.01

[flow_convergence]
beta = 0.75
p = 2
tail = "power"
n_grid = [1000, 3000, 10000, 30000]
t = 1.0
replications = 10000
sigma = 3.0
final_rel_tol = 0.2

[clt_compare]
alpha = 0.8
beta = 0.75
p = 2
tail = "power"
m = 12
n_arrivals = 50
epsilon = 1e-4
n_grid = [1000, 10000, 100000]
replications = 2000
bootstrap = 200
sigma = 2.0
"#;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    Increment,
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringCheckConfig {
    pub beta: f64,
    pub epsilon: f64,
    pub horizon: f64,
    pub points: Vec<Vec<f64>>,
    pub replications: u64,
    pub z_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalTimeMomentsConfig {
    pub beta: f64,
    pub p: usize,
    pub epsilon: f64,
    pub t: f64,
    pub replications: u64,
    pub rel_tol_first: f64,
    pub rel_tol_second: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointMomentsConfig {
    pub beta: f64,
    pub p: usize,
    pub index_sets: Vec<Vec<usize>>,
    pub times: Vec<f64>,
    pub epsilon: f64,
    pub replications: u64,
    pub evaluations: u64,
    pub target_rel_se: f64,
    pub max_rel_se: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateZConfig {
    pub alpha: f64,
    pub beta: f64,
    pub p: usize,
    pub m: usize,
    pub n_arrivals: usize,
    pub epsilon: f64,
    pub grid_points: usize,
    pub replications: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfSimConfig {
    pub alpha: f64,
    pub beta: f64,
    pub p: usize,
    pub m: usize,
    pub n_arrivals: usize,
    pub epsilon: f64,
    pub c: f64,
    pub t0: f64,
    pub replications: u64,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConvergenceConfig {
    pub beta: f64,
    pub p: usize,
    pub tail: TailKind,
    pub n_grid: Vec<u64>,
    pub t: f64,
    pub replications: u64,
    pub sigma: f64,
    pub final_rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CltCompareConfig {
    pub alpha: f64,
    pub beta: f64,
    pub p: usize,
    pub tail: TailKind,
    pub m: usize,
    pub n_arrivals: usize,
    pub epsilon: f64,
    pub n_grid: Vec<u64>,
    pub replications: u64,
    pub bootstrap: usize,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub master_seed: u64,
    pub output_dir: String,
    pub covering_check: CoveringCheckConfig,
    pub localtime_moments: LocalTimeMomentsConfig,
    pub joint_moments: JointMomentsConfig,
    pub simulate_z: SimulateZConfig,
    pub selfsim: SelfSimConfig,
    pub flow_convergence: FlowConvergenceConfig,
    pub clt_compare: CltCompareConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config::from_toml_str(DEFAULT_CONFIG, &[], None).expect("embedded defaults are valid")
    }
}

fn merge(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Parses the right-hand side of an override as a TOML value, falling back
/// to a bare string.
fn parse_override_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Applies `key=value`; bare keys go into `section` when one is given.
fn apply_override(root: &mut toml::Value, raw: &str, section: Option<&str>) -> Result<()> {
    let Some((key, value)) = raw.split_once('=') else {
        return Err(Error::InvalidInput(format!("override `{raw}` is not of the form key=value")));
    };
    let key = key.trim();
    if key.is_empty() {
        return Err(Error::InvalidInput(format!("override `{raw}` has an empty key")));
    }
    let mut path: Vec<&str> = key.split('.').collect();
    if path.len() == 1 {
        if let Some(s) = section {
            let top_level = root.as_table().is_some_and(|t| t.get(key).is_some_and(|v| !v.is_table()));
            if !top_level {
                path.insert(0, s);
            }
        }
    }
    let mut node = root;
    for part in &path[..path.len() - 1] {
        node = node
            .as_table_mut()
            .and_then(|t| t.get_mut(*part))
            .ok_or_else(|| Error::InvalidInput(format!("override `{raw}`: unknown section `{part}`")))?;
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| Error::InvalidInput(format!("override `{raw}` does not address a table")))?;
    let last = path[path.len() - 1];
    if !table.contains_key(last) {
        return Err(Error::InvalidInput(format!("override `{raw}`: unknown key `{key}`")));
    }
    table.insert(last.to_string(), parse_override_value(value.trim()));
    Ok(())
}

impl Config {
    /// Defaults, then `user` (if any), then overrides; the result is validated.
    pub fn from_toml_str(user: &str, overrides: &[String], section: Option<&str>) -> Result<Self> {
        let mut root: toml::Value = toml::Value::Table(
            DEFAULT_CONFIG.parse::<toml::Table>().map_err(|e| Error::InvalidInput(e.to_string()))?,
        );
        let user: toml::Table =
            user.parse().map_err(|e| Error::InvalidInput(format!("config does not parse: {e}")))?;
        merge(&mut root, toml::Value::Table(user));
        let mut problems = Vec::new();
        for o in overrides {
            if let Err(e) = apply_override(&mut root, o, section) {
                problems.push(e.to_string());
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidInput(problems.join("; ")));
        }
        let cfg: Config = root.try_into().map_err(|e: toml::de::Error| Error::InvalidInput(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Every violated precondition, reported together.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let mut check = |ok: bool, msg: String| {
            if !ok {
                errs.push(msg);
            }
        };
        let unit = |x: f64| x > 0.0 && x < 1.0;
        let feasible = |beta: f64, p: usize| p >= 1 && unit(crate::localtime::beta_p(beta, p));
        let alpha_ok = |a: f64| a > 0.0 && a < 2.0;

        let c = &self.covering_check;
        check(unit(c.beta), format!("covering_check.beta = {} not in (0,1)", c.beta));
        check(c.epsilon > 0.0, format!("covering_check.epsilon = {} must be positive", c.epsilon));
        check(c.horizon > 0.0, format!("covering_check.horizon = {} must be positive", c.horizon));
        check(c.replications >= 1, "covering_check.replications must be >= 1".into());
        for x in &c.points {
            check(
                (1..=2).contains(&x.len()) && x.iter().all(|&v| v > 0.0 && v <= c.horizon),
                format!("covering_check.points entry {x:?} needs 1 or 2 coordinates in (0, horizon]"),
            );
            check(
                !(x.len() == 2 && x[0] == x[1]),
                format!("covering_check.points entry {x:?} lies on the diagonal"),
            );
        }

        let l = &self.localtime_moments;
        check(unit(l.beta), format!("localtime_moments.beta = {} not in (0,1)", l.beta));
        check(feasible(l.beta, l.p), format!("localtime_moments: beta_p infeasible for beta = {}, p = {}", l.beta, l.p));
        check(l.epsilon > 0.0, "localtime_moments.epsilon must be positive".into());
        check(l.t > 0.0 && l.t <= 1.0, format!("localtime_moments.t = {} not in (0,1]", l.t));
        check(l.replications >= 2, "localtime_moments.replications must be >= 2".into());

        let j = &self.joint_moments;
        check(unit(j.beta), format!("joint_moments.beta = {} not in (0,1)", j.beta));
        if let Err(e) = crate::moments::MomentSpec::new(j.beta, j.p, j.index_sets.clone(), j.times.clone()) {
            check(false, format!("joint_moments: {e}"));
        }
        check(j.epsilon > 0.0, "joint_moments.epsilon must be positive".into());
        check(j.replications >= 2, "joint_moments.replications must be >= 2".into());
        check(j.evaluations >= 1, "joint_moments.evaluations must be >= 1".into());

        let z = &self.simulate_z;
        check(alpha_ok(z.alpha), format!("simulate_z.alpha = {} not in (0,2)", z.alpha));
        check(unit(z.beta), format!("simulate_z.beta = {} not in (0,1)", z.beta));
        check(feasible(z.beta, z.p), format!("simulate_z: beta_p infeasible for beta = {}, p = {}", z.beta, z.p));
        check(z.n_arrivals >= z.m && z.m >= z.p, "simulate_z: need n_arrivals >= m >= p".into());
        check(z.epsilon > 0.0, "simulate_z.epsilon must be positive".into());
        check(z.grid_points >= 2, "simulate_z.grid_points must be >= 2".into());
        check(z.replications >= 1, "simulate_z.replications must be >= 1".into());

        let s = &self.selfsim;
        check(alpha_ok(s.alpha), format!("selfsim.alpha = {} not in (0,2)", s.alpha));
        check(unit(s.beta), format!("selfsim.beta = {} not in (0,1)", s.beta));
        check(feasible(s.beta, s.p), format!("selfsim: beta_p infeasible for beta = {}, p = {}", s.beta, s.p));
        check(s.n_arrivals >= s.m && s.m >= s.p, "selfsim: need n_arrivals >= m >= p".into());
        check(s.epsilon > 0.0, "selfsim.epsilon must be positive".into());
        check(s.c > 0.0 && s.t0 > 0.0 && s.c * s.t0 <= 1.0 && s.t0 <= 1.0, "selfsim: need c, t0 > 0 with c*t0 and t0 in (0,1]".into());
        check(s.replications >= 2, "selfsim.replications must be >= 2".into());
        check(unit(s.level), "selfsim.level must lie in (0,1)".into());

        let f = &self.flow_convergence;
        check(unit(f.beta), format!("flow_convergence.beta = {} not in (0,1)", f.beta));
        check(feasible(f.beta, f.p), format!("flow_convergence: beta_p infeasible for beta = {}, p = {}", f.beta, f.p));
        check(!f.n_grid.is_empty() && f.n_grid.iter().all(|&n| n >= 1), "flow_convergence.n_grid needs positive entries".into());
        check(f.n_grid.windows(2).all(|w| w[0] < w[1]), "flow_convergence.n_grid must increase".into());
        check(f.t >= 0.0 && f.t <= 1.0, "flow_convergence.t must lie in [0,1]".into());
        check(f.replications >= 2, "flow_convergence.replications must be >= 2".into());

        let k = &self.clt_compare;
        check(alpha_ok(k.alpha), format!("clt_compare.alpha = {} not in (0,2)", k.alpha));
        check(unit(k.beta), format!("clt_compare.beta = {} not in (0,1)", k.beta));
        check(feasible(k.beta, k.p), format!("clt_compare: beta_p infeasible for beta = {}, p = {}", k.beta, k.p));
        check(k.n_arrivals >= k.m && k.m >= k.p, "clt_compare: need n_arrivals >= m >= p".into());
        check(!k.n_grid.is_empty() && k.n_grid.windows(2).all(|w| w[0] < w[1]), "clt_compare.n_grid must increase".into());
        check(k.replications >= 2, "clt_compare.replications must be >= 2".into());
        check(k.bootstrap >= 2, "clt_compare.bootstrap must be >= 2".into());

        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(errs.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse_and_validate() {
        let c = Config::default();
        assert_eq!(c.localtime_moments.p, 2);
        assert_eq!(c.flow_convergence.tail, TailKind::Power);
    }

    #[test]
    fn overrides_resolve_sections() {
        let c = Config::from_toml_str("", &["replications=7".into()], Some("selfsim")).unwrap();
        assert_eq!(c.selfsim.replications, 7);
        let c = Config::from_toml_str("", &["flow_convergence.n_grid=[10, 20]".into()], None).unwrap();
        assert_eq!(c.flow_convergence.n_grid, vec![10, 20]);
        let c = Config::from_toml_str("", &["master_seed=5".into()], Some("selfsim")).unwrap();
        assert_eq!(c.master_seed, 5);
    }

    #[test]
    fn invalid_overrides_are_reported_together() {
        let err = Config::from_toml_str(
            "",
            &["beta=1.5".into(), "alpha=3.0".into()],
            Some("selfsim"),
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("selfsim.beta") && err.contains("selfsim.alpha"), "{err}");
        assert!(Config::from_toml_str("", &["nope=1".into()], Some("selfsim")).is_err());
        assert!(Config::from_toml_str("", &["replications=abc".into()], Some("selfsim")).is_err());
        assert!(Config::from_toml_str("[selfsim]\nbogus = 1\n", &[], None).is_err());
    }
}
