//! Wire records emitted by the CLI. Every number is a decimal string, so JSON round-trips
//! exactly and stays readable from any language.

use serde::{Deserialize, Serialize};

use crate::reconstruct::RelationStatus;

/// Text and CSV views of one result; JSON comes from `Serialize`.
pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>);
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityListing {
    pub id: String,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdentityList(pub Vec<IdentityListing>);

impl Render for IdentityList {
    fn text(&self) -> String {
        self.0.iter().map(|r| format!("{:<24} {}\n", r.id, r.description)).collect()
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let rows = self.0.iter().map(|r| vec![r.id.clone(), r.description.clone()]).collect();
        (strings(&["id", "description"]), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub id: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    /// Certified upper bound on `|lhs - rhs|`.
    pub residual_bound: String,
    pub threshold: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub digits: u32,
    pub slack_digits: u32,
    pub all_pass: bool,
    pub results: Vec<VerifyRecord>,
}

impl Render for VerifyReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            match &r.error {
                Some(e) => s += &format!("{verdict}  {:<24} error: {e}\n", r.id),
                None => {
                    s += &format!(
                        "{verdict}  {:<24} residual <= {}  (threshold {})\n",
                        r.id, r.residual_bound, r.threshold
                    )
                }
            }
        }
        let passed = self.results.iter().filter(|r| r.pass).count();
        s += &format!("{passed}/{} passed at {} digits\n", self.results.len(), self.digits);
        s
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let rows = self
            .results
            .iter()
            .map(|r| {
                vec![
                    r.id.clone(),
                    r.pass.to_string(),
                    r.lhs.clone(),
                    r.rhs.clone(),
                    r.residual_bound.clone(),
                    r.threshold.clone(),
                    r.error.clone().unwrap_or_default(),
                ]
            })
            .collect();
        (strings(&["id", "pass", "lhs", "rhs", "residual_bound", "threshold", "error"]), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub n: u32,
    /// Exact fractions. Coefficient families list `C_{1,n}..C_{n,n}`; `xi`/`lambda` list the
    /// polynomial's coefficients from `x^{2n-2}` down to the constant term.
    pub coeffs: Vec<String>,
    pub certified: bool,
    pub residual_bound: String,
    pub digits_used: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffReport {
    pub family: String,
    pub basis: String,
    pub rows: Vec<CoeffRecord>,
}

impl Render for CoeffReport {
    fn text(&self) -> String {
        let mut s = format!("family {} ({} basis)\n", self.family, self.basis);
        for r in &self.rows {
            let flag = if r.certified { "" } else { "  UNCERTIFIED" };
            s += &format!("n={}: ({}){flag}\n", r.n, r.coeffs.join(", "));
        }
        s
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut rows = Vec::new();
        for r in &self.rows {
            for (p, c) in r.coeffs.iter().enumerate() {
                rows.push(vec![
                    self.family.clone(),
                    r.n.to_string(),
                    (p + 1).to_string(),
                    c.clone(),
                    r.certified.to_string(),
                    r.residual_bound.clone(),
                ]);
            }
        }
        (strings(&["family", "n", "p", "coeff", "certified", "residual_bound"]), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub family: String,
    pub n: u32,
    pub polynomial: String,
    /// Lowest degree first.
    pub coeffs: Vec<String>,
    pub integral: String,
    pub expected: String,
    pub residual_bound: String,
    pub pass: bool,
}

impl Render for PolyRecord {
    fn text(&self) -> String {
        format!(
            "{}_{}(x) = {}\nintegral = {}\n{} vs {}: residual <= {}\n",
            self.family,
            self.n,
            self.polynomial,
            self.integral,
            if self.pass { "PASS" } else { "FAIL" },
            self.expected,
            self.residual_bound
        )
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let rows = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| vec![self.family.clone(), self.n.to_string(), k.to_string(), c.clone()])
            .collect();
        (strings(&["family", "n", "degree", "coeff"]), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PslqRecord {
    pub values: Vec<String>,
    pub status: RelationStatus,
    pub coefficients: Vec<String>,
    pub height_bound: u64,
    pub digits_used: u32,
    pub residual: String,
    pub residual_error_bound: String,
    /// For `none-up-to-bound`: every relation has Euclidean norm at least this.
    pub norm_lower_bound: Option<String>,
    pub iterations: u64,
    pub seed: u64,
}

impl Render for PslqRecord {
    fn text(&self) -> String {
        let head = match self.status {
            RelationStatus::Found => format!("found ({})", self.coefficients.join(", ")),
            RelationStatus::NoneUpToBound => format!(
                "none-up-to-bound: any relation has norm >= {}",
                self.norm_lower_bound.clone().unwrap_or_default()
            ),
        };
        format!(
            "{head}\nvalues: {}\nheight <= {}, digits {}, iterations {}\n",
            self.values.join(" "),
            self.height_bound,
            self.digits_used,
            self.iterations
        )
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let status = serde_json::to_value(self.status).expect("status").as_str().unwrap_or_default().to_string();
        let rows = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                vec![
                    v.clone(),
                    self.coefficients.get(i).cloned().unwrap_or_default(),
                    status.clone(),
                    self.height_bound.to_string(),
                    self.digits_used.to_string(),
                    self.norm_lower_bound.clone().unwrap_or_default(),
                ]
            })
            .collect();
        (strings(&["value", "coefficient", "status", "height_bound", "digits", "norm_lower_bound"]), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedRecord {
    pub trial: u32,
    pub planted: Vec<String>,
    pub found: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedReport {
    pub seed: u64,
    pub digits: u32,
    pub height: u64,
    pub trials: u32,
    pub all_found: bool,
    pub rows: Vec<PlantedRecord>,
}

impl Render for PlantedReport {
    fn text(&self) -> String {
        let ok = self.rows.iter().filter(|r| r.ok).count();
        let mut s = format!(
            "{ok}/{} planted relations found (seed {}, height {}, {} digits)\n",
            self.trials, self.seed, self.height, self.digits
        );
        for r in self.rows.iter().filter(|r| !r.ok) {
            s += &format!("missed trial {}: planted ({})\n", r.trial, r.planted.join(", "));
        }
        s
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let rows = self
            .rows
            .iter()
            .map(|r| vec![r.trial.to_string(), r.planted.join(" "), r.found.join(" "), r.ok.to_string()])
            .collect();
        (strings(&["trial", "planted", "found", "ok"]), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierRecord {
    pub k: u32,
    pub partial_sum: String,
    /// `partial_sum - pi/4`
    pub delta: String,
    pub error_bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourierReport(pub Vec<FourierRecord>);

impl Render for FourierReport {
    fn text(&self) -> String {
        let mut s = format!("{:>4}  {:<36} {}\n", "K", "partial sum", "delta vs pi/4");
        for r in &self.0 {
            s += &format!("{:>4}  {:<36} {}\n", r.k, r.partial_sum, r.delta);
        }
        s
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let rows = self
            .0
            .iter()
            .map(|r| vec![r.k.to_string(), r.partial_sum.clone(), r.delta.clone(), r.error_bound.clone()])
            .collect();
        (strings(&["k", "partial_sum", "delta", "error_bound"]), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub id: String,
    pub value: String,
    pub error_bound: String,
    pub digits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstantReport(pub Vec<ConstantRecord>);

impl Render for ConstantReport {
    fn text(&self) -> String {
        self.0.iter().map(|r| format!("{:<16} {}  (± {})\n", r.id, r.value, r.error_bound)).collect()
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let rows = self
            .0
            .iter()
            .map(|r| vec![r.id.clone(), r.value.clone(), r.error_bound.clone(), r.digits.to_string()])
            .collect();
        (strings(&["id", "value", "error_bound", "digits"]), rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrateRecord {
    pub kernel: String,
    pub description: String,
    pub interval: String,
    /// Endpoint classes, lower end first.
    pub singularities: Vec<String>,
    pub transform: String,
    pub value: String,
    pub error_bound: String,
    pub digits: u32,
    pub nodes_used: u64,
    pub levels: u32,
}

impl Render for IntegrateRecord {
    fn text(&self) -> String {
        format!(
            "{}\n  {}\n  = {}  (± {})\n  {} transform, {} levels, {} nodes\n",
            self.kernel, self.description, self.value, self.error_bound, self.transform, self.levels, self.nodes_used
        )
    }
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        (
            strings(&["kernel", "interval", "transform", "value", "error_bound", "digits", "nodes_used", "levels"]),
            vec![vec![
                self.kernel.clone(),
                self.interval.clone(),
                self.transform.clone(),
                self.value.clone(),
                self.error_bound.clone(),
                self.digits.to_string(),
                self.nodes_used.to_string(),
                self.levels.to_string(),
            ]],
        )
    }
}
