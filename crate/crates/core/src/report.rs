//! Verdicts for individual checked claims.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        })
    }
}

/// Outcome of one check. A `Fail` always carries the offending input in
/// `detail`.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub status: Status,
    /// The numeral index the verdict refers to: the failing `n` for a
    /// failure, otherwise the largest `n` examined.
    pub n: u64,
    pub fuel_used: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ClaimReport {
    pub fn new(claim_id: impl Into<String>, status: Status) -> ClaimReport {
        ClaimReport {
            claim_id: claim_id.into(),
            status,
            n: 0,
            fuel_used: 0,
            detail: None,
        }
    }

    pub fn pass(claim_id: impl Into<String>) -> ClaimReport {
        ClaimReport::new(claim_id, Status::Pass)
    }

    pub fn fail(claim_id: impl Into<String>, detail: impl Into<String>) -> ClaimReport {
        ClaimReport::new(claim_id, Status::Fail).with_detail(detail)
    }

    pub fn unknown(claim_id: impl Into<String>, detail: impl Into<String>) -> ClaimReport {
        ClaimReport::new(claim_id, Status::Unknown).with_detail(detail)
    }

    pub fn with_n(mut self, n: u64) -> ClaimReport {
        self.n = n;
        self
    }

    pub fn with_fuel(mut self, fuel_used: u64) -> ClaimReport {
        self.fuel_used = fuel_used;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> ClaimReport {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_id(mut self, claim_id: impl Into<String>) -> ClaimReport {
        self.claim_id = claim_id.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Folds several sub-checks into one verdict: the first failure wins,
    /// then the first unknown, otherwise a pass covering every `n` and the
    /// summed fuel.
    pub fn combine(claim_id: &str, parts: Vec<ClaimReport>) -> ClaimReport {
        let fuel: u64 = parts.iter().map(|r| r.fuel_used).sum();
        let max_n = parts.iter().map(|r| r.n).max().unwrap_or(0);
        if let Some(bad) = parts.iter().find(|r| r.status == Status::Fail) {
            return bad.clone().with_id(claim_id).with_fuel(fuel);
        }
        if let Some(unk) = parts.iter().find(|r| r.status == Status::Unknown) {
            return unk.clone().with_id(claim_id).with_fuel(fuel);
        }
        let mut out = ClaimReport::pass(claim_id).with_n(max_n).with_fuel(fuel);
        if parts.len() == 1 {
            out.detail = parts[0].detail.clone();
        }
        out
    }

    /// `CLAIM <id> <PASS|FAIL|UNKNOWN> n=<n> fuel=<k> [detail=<...>]`
    pub fn line(&self) -> String {
        let mut s = format!(
            "CLAIM {} {} n={} fuel={}",
            self.claim_id, self.status, self.n, self.fuel_used
        );
        if let Some(d) = &self.detail {
            s.push_str(" detail=");
            s.push_str(d);
        }
        s
    }
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let r = ClaimReport::fail("church.successor", "S 3")
            .with_n(3)
            .with_fuel(42);
        assert_eq!(
            r.line(),
            "CLAIM church.successor FAIL n=3 fuel=42 detail=S 3"
        );
        let p = ClaimReport::pass("x").with_n(10);
        assert_eq!(p.line(), "CLAIM x PASS n=10 fuel=0");
    }

    #[test]
    fn combine_prefers_failures() {
        let parts = vec![
            ClaimReport::pass("a").with_n(1).with_fuel(5),
            ClaimReport::unknown("b", "fuel").with_n(2),
            ClaimReport::fail("c", "boom").with_n(3).with_fuel(1),
        ];
        let r = ClaimReport::combine("all", parts);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.claim_id, "all");
        assert_eq!(r.n, 3);
        assert_eq!(r.fuel_used, 6);
    }
}
