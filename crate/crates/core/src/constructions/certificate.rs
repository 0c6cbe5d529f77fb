//! Exact, re-checkable evidence that a PL self-map has no square root.
//!
//! The argument: `f` is constant `v0` on an m-simplex `σ0` with `f(v0) ≠ v0`,
//! some simplex `σ*` away from `σ0` is mapped injectively onto a set whose
//! interior meets `σ0` (so `f^{-2}(v0)` is uncountable), and every other
//! piece is injective (so `f^{-1}(x)` is finite for `x ≠ v0`). No `g` with
//! `g² = f` can then exist.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{simplices_intersect, Point, Simplex};
use crate::pl::PlMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityLedger {
    /// Pieces examined (all top simplices except `σ0`).
    pub checked: usize,
    /// Vertex lists of the pieces found not to be injective.
    pub non_injective: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoRootCertificate {
    pub sigma0: Vec<Point>,
    pub v0: Point,
    /// `f(v0)` as computed at construction time.
    pub v0_image: Point,
    pub sigma_star: Vec<Point>,
    /// A point interior to both `σ0` and `f(σ*)`.
    pub witness: Point,
    pub ledger: InjectivityLedger,
    /// Which case of the counting argument is instantiated.
    pub case: String,
}

pub const FULL_DIMENSIONAL_PREIMAGE: &str =
    "f^-1(v0) contains sigma0 and f^-2(v0) contains an open subset of sigma*, while f^-1(x) is finite for x != v0";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: impl Into<String>) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail: detail.into(),
    }
}

/// Facet index of the top simplex with exactly these vertices.
fn find_facet(f: &PlMap, vertices: &[Point]) -> Option<usize> {
    let k = f.complex();
    if vertices.len() != k.dim() + 1 {
        return None;
    }
    let idx: Option<Vec<usize>> = vertices.iter().map(|p| k.vertex_index(p)).collect();
    f.facet_index(&idx?)
}

/// Re-derives every claim of `cert` from `f` alone.
pub fn verify_report(f: &PlMap, cert: &NoRootCertificate) -> Vec<CheckOutcome> {
    let k = f.complex();
    let mut out = Vec::with_capacity(4);

    let s0 = find_facet(f, &cert.sigma0);
    let constant = s0.is_some_and(|s| k.facets()[s].iter().all(|&v| f.images()[v] == cert.v0));
    out.push(outcome(
        "constant on sigma0",
        constant,
        match s0 {
            None => "sigma0 is not a top simplex of the map's complex".to_string(),
            Some(_) if !constant => "some vertex of sigma0 does not map to v0".to_string(),
            Some(s) => format!("facet {s} maps to {}", cert.v0),
        },
    ));

    let displaced = f.evaluate(&cert.v0).map(|y| y != cert.v0);
    out.push(outcome(
        "v0 is not fixed",
        displaced == Ok(true),
        match &displaced {
            Ok(_) => format!("f(v0) = {}", f.evaluate(&cert.v0).expect("evaluated above")),
            Err(e) => e.to_string(),
        },
    ));

    let preimage = (|| -> Result<String, String> {
        let s0 = s0.ok_or("no sigma0")?;
        let ss = find_facet(f, &cert.sigma_star).ok_or("sigma* is not a top simplex")?;
        if ss == s0 {
            return Err("sigma* equals sigma0".into());
        }
        if k.facets()[ss].iter().any(|v| k.facets()[s0].contains(v)) {
            return Err("sigma* lies in the star of sigma0".into());
        }
        if !f.restriction_injective(ss).map_err(|e| e.to_string())? {
            return Err("f is not injective on sigma*".into());
        }
        let image = f.image_simplex(ss).map_err(|e| e.to_string())?;
        let sigma0 = Simplex::new(cert.sigma0.clone()).map_err(|e| e.to_string())?;
        if !(sigma0.contains_in_interior(&cert.witness) && image.contains_in_interior(&cert.witness)) {
            return Err("witness is not interior to both sigma0 and f(sigma*)".into());
        }
        if simplices_intersect(&image, &sigma0).is_none() {
            return Err("f(sigma*) and sigma0 do not meet".into());
        }
        Ok(format!("facet {ss}, witness {}", cert.witness))
    })();
    out.push(match preimage {
        Ok(d) => outcome("full-dimensional second preimage", true, d),
        Err(d) => outcome("full-dimensional second preimage", false, d),
    });

    let mut bad = Vec::new();
    let mut checked = 0;
    for s in k.top_facets() {
        if Some(s) == s0 {
            continue;
        }
        checked += 1;
        if !f.restriction_injective(s).unwrap_or(false) {
            bad.push(s);
        }
    }
    out.push(outcome(
        "every other piece injective",
        bad.is_empty() && s0.is_some(),
        if bad.is_empty() {
            format!("{checked} pieces checked")
        } else {
            format!("{} of {checked} pieces are not injective, e.g. facet {}", bad.len(), bad[0])
        },
    ));
    out
}

pub fn verify_no_root_certificate(f: &PlMap, cert: &NoRootCertificate) -> bool {
    verify_report(f, cert).iter().all(|c| c.passed)
}

/// The ledger as the verifier would compute it.
pub(crate) fn build_ledger(f: &PlMap, sigma0: usize) -> InjectivityLedger {
    let k = f.complex();
    let mut ledger = InjectivityLedger {
        checked: 0,
        non_injective: Vec::new(),
    };
    for s in k.top_facets() {
        if s == sigma0 {
            continue;
        }
        ledger.checked += 1;
        if !f.restriction_injective(s).unwrap_or(false) {
            ledger
                .non_injective
                .push(k.facets()[s].iter().map(|&v| k.vertex(v).clone()).collect());
        }
    }
    ledger
}

impl fmt::Display for NoRootCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts = |v: &[Point]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "sigma0:     {}", pts(&self.sigma0))?;
        writeln!(f, "v0:         {} -> {}", self.v0, self.v0_image)?;
        writeln!(f, "sigma*:     {}", pts(&self.sigma_star))?;
        writeln!(f, "witness:    {}", self.witness)?;
        writeln!(
            f,
            "injective:  {} of {} pieces",
            self.ledger.checked - self.ledger.non_injective.len(),
            self.ledger.checked
        )?;
        write!(f, "case:       {}", self.case)
    }
}
