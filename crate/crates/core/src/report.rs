//! Check results and the machine-readable report envelope.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl Check {
    pub fn pass(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            status: Status::Pass,
            witness: None,
            detail: String::new(),
            elapsed_ms: None,
        }
    }

    pub fn fail(id: impl Into<String>, witness: Value) -> Self {
        Self {
            id: id.into(),
            status: Status::Fail,
            witness: Some(witness),
            detail: String::new(),
            elapsed_ms: None,
        }
    }

    pub fn skipped(id: impl Into<String>, why: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            status: Status::Skipped,
            witness: None,
            detail: why.into(),
            elapsed_ms: None,
        }
    }

    /// Pass when `witness` is `None`, fail with it otherwise.
    pub fn from_witness(id: impl Into<String>, witness: Option<Value>) -> Self {
        match witness {
            None => Self::pass(id),
            Some(w) => Self::fail(id, w),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Every check id the tool can emit. Parameterised ids carry a suffix after
/// the first `:` (relation, operator or place), which is not listed.
pub const CATALOG: &[&str] = &[
    "lattice",
    "normality",
    "FAx1",
    "FAx2",
    "FAx2*",
    "FAx3",
    "FAx4",
    "FAx5",
    "FAx6",
    "FAx7",
    "distribution",
    "residual-forms",
    "residuation",
    "conjugate-residual-coherence",
    "complex-normality",
    "zeta-embedding",
    "zeta-image-clopen",
    "open-generators",
    "representation",
    "point-relation",
    "dual-point-relation",
    "iso-bijective",
    "iso-order",
    "iso-operator",
    "frame-iso",
    "MAx1",
    "MAx2",
    "MAx3",
    "MAx4",
    "MAx4-set-form",
    "MAx5",
    "MAx6",
    "naturality",
    "homomorphism",
    "induced-hom",
    "induced-operator",
    "closure-preservation",
    "diamond-chain",
    "box-chain",
];

pub fn in_catalog(id: &str) -> bool {
    let base = id.split(':').next().unwrap_or(id);
    CATALOG.contains(&base)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: impl Into<String>, bytes: &[u8]) -> Self {
        Self {
            path: path.into(),
            sha256: sha256_hex(bytes),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The digested part of a report: everything but the timestamp.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub iso: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(flatten)]
    pub body: ReportBody,
    pub timestamp: u64,
    pub report_digest: String,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Vec<InputDigest>, checks: Vec<Check>) -> Self {
        let body = ReportBody {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            inputs,
            checks,
            iso: None,
        };
        let mut report = Self {
            body,
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            report_digest: String::new(),
        };
        report.seal();
        report
    }

    pub fn with_iso(mut self, iso: bool) -> Self {
        self.body.iso = Some(iso);
        self.seal();
        self
    }

    /// Recomputes the digest over the body.
    pub fn seal(&mut self) {
        let bytes = serde_json::to_vec(&self.body).expect("report body serializes");
        self.report_digest = sha256_hex(&bytes);
    }

    pub fn all_passed(&self) -> bool {
        self.body.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.body.checks.iter().filter(|c| c.failed())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.body.command, self.body.version);
        for c in &self.body.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!("{tag} {}", c.id));
            if !c.detail.is_empty() {
                out.push_str(&format!("  ({})", c.detail));
            }
            if let Some(ms) = c.elapsed_ms {
                out.push_str(&format!("  [{ms:.1} ms]"));
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                out.push_str(&format!("     witness: {w}\n"));
            }
        }
        if let Some(iso) = self.body.iso {
            out.push_str(&format!("iso: {iso}\n"));
        }
        out
    }
}
