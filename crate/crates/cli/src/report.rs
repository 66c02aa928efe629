//! Structured run reports: per-claim records with witnesses, deterministic
//! machine rendering and a human summary. Exit status follows the 0/1/2
//! convention (verdict true / verdict false / usage or validation error).

use serde::Serialize;

/// One failed instance of a claim; the witness is always concrete (an
/// element pair, a non-surjective image, a non-factoring morphism).
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FailureRecord {
    pub instance: String,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClaimReport {
    pub id: String,
    /// The law the claim replays, named by content.
    pub law: String,
    pub instances: usize,
    pub failures: Vec<FailureRecord>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Summary {
    pub claims: usize,
    pub passed: usize,
    pub failed: usize,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<String>,
    pub claims: Vec<ClaimReport>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, corpus: Option<String>, mutation: Option<String>, mut claims: Vec<ClaimReport>) -> Self {
        claims.sort_by(|a, b| a.id.cmp(&b.id));
        for claim in &mut claims {
            claim.failures.sort_by(|a, b| a.instance.cmp(&b.instance));
        }
        let summary = Summary {
            claims: claims.len(),
            passed: claims.iter().filter(|c| c.passed).count(),
            failed: claims.iter().filter(|c| !c.passed).count(),
            instances: claims.iter().map(|c| c.instances).sum(),
            failures: claims.iter().map(|c| c.failures.len()).sum(),
        };
        Report { command: command.to_string(), corpus, mutation, claims, summary }
    }

    pub fn is_clean(&self) -> bool {
        self.summary.failed == 0
    }

    /// Canonical machine rendering; identical inputs yield identical bytes.
    pub fn machine(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for claim in &self.claims {
            let mark = if claim.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{}] {} ({} instances) - {}\n",
                mark, claim.id, claim.instances, claim.law
            ));
            for failure in claim.failures.iter().take(5) {
                out.push_str(&format!("       instance: {}\n       witness:  {}\n", failure.instance, failure.witness));
            }
            if claim.failures.len() > 5 {
                out.push_str(&format!("       ... and {} more failures\n", claim.failures.len() - 5));
            }
        }
        out.push_str(&format!(
            "{} claims, {} passed, {} failed; {} instances, {} failures\n",
            self.summary.claims,
            self.summary.passed,
            self.summary.failed,
            self.summary.instances,
            self.summary.failures
        ));
        out
    }
}

/// Report for a single verdict command.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub command: String,
    pub instance: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl VerdictReport {
    pub fn machine(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("verdicts serialize");
        out.push('\n');
        out
    }

    pub fn human(&self) -> String {
        let mut out = format!(
            "{}: {} -> {}\n",
            self.command,
            self.instance,
            if self.verdict { "true" } else { "false" }
        );
        if let Some(witness) = &self.witness {
            out.push_str(&format!("witness: {}\n", witness));
        }
        out
    }
}
