//! Perturbs a PL map with injective pieces into one with no square root.
//!
//! Rather than subdividing the whole grid, the single grid simplex `Δ'`
//! containing a suitable displaced point `c` is refined by two homothetic
//! copies about `c` (scales `t` and `t²`); the region between consecutive
//! copies is cut into staircase prisms. The innermost copy is `σ0`, its star
//! is `σ0` plus the inner shell, and the outer shell keeps `f0` unchanged.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::certificate::{build_ledger, NoRootCertificate, FULL_DIMENSIONAL_PREIMAGE};
use crate::error::{Error, Result};
use crate::geometry::{simplices_intersect, Point, Simplex, SimplicialComplex};
use crate::pl::PlMap;
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct KillOptions {
    /// Largest `k` tried for the shell scale `t = 2^-k`.
    pub max_depth: u32,
    /// Number of source simplices tried before giving up.
    pub max_sources: usize,
}

impl Default for KillOptions {
    fn default() -> Self {
        Self {
            max_depth: 24,
            max_sources: 64,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KillReport {
    /// Facet of `f0`'s complex whose image barycentre is `c`.
    pub source_facet: usize,
    /// Facet of `f0`'s complex containing `c`, replaced by the shells.
    pub refined_facet: usize,
    pub center: Point,
    /// `‖c − f0(c)‖∞`.
    #[serde(with = "rational::serde_str")]
    pub displacement: Rational,
    #[serde(with = "rational::serde_str")]
    pub lipschitz: Rational,
    /// `V` is the open ball of radius `δ/2` about `c`.
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "rational::serde_str")]
    pub scale: Rational,
    pub depth: u32,
    /// Exact `sup ‖f − f0‖∞`.
    #[serde(with = "rational::serde_str")]
    pub perturbation: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct KillOutcome {
    pub f: PlMap,
    pub certificate: NoRootCertificate,
    pub report: KillReport,
    /// `f0` re-expressed on the refined complex (same function).
    #[serde(skip)]
    pub f0_refined: PlMap,
}

/// Staircase triangulation of the region between similar simplices `outer`
/// and `inner` (vertex lists in matching order), as index lists into the
/// caller's vertex table.
pub(crate) fn shell_simplices(outer: &[usize], inner: &[usize]) -> Vec<Vec<usize>> {
    let n = outer.len();
    let mut out = Vec::new();
    for skip in 0..n {
        let a: Vec<usize> = (0..n).filter(|&j| j != skip).map(|j| outer[j]).collect();
        let b: Vec<usize> = (0..n).filter(|&j| j != skip).map(|j| inner[j]).collect();
        for k in 0..a.len() {
            let mut s: Vec<usize> = a[..=k].iter().chain(&b[k..]).copied().collect();
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

struct Refinement {
    complex: SimplicialComplex,
    /// Vertex indices of `σ0`.
    sigma0: Vec<usize>,
    /// f0 at every vertex of the refined complex.
    images: Vec<Point>,
}

fn refine(f0: &PlMap, facet: usize, c: &Point, fc: &Point, t: &Rational) -> Refinement {
    let k = f0.complex();
    let outer = k.facets()[facet].clone();
    let mut vertices = k.vertices().to_vec();
    let mut images = f0.images().to_vec();
    let t2 = t * t;
    let mut copy = |s: &Rational| -> Vec<usize> {
        outer
            .iter()
            .map(|&v| {
                // c + s(p − c) is mapped to (1 − s)f0(c) + s·f0(p): f0 is affine on Δ'.
                vertices.push(c.lerp(k.vertex(v), s));
                images.push(fc.lerp(&f0.images()[v], s));
                vertices.len() - 1
            })
            .collect()
    };
    let mid = copy(t);
    let sigma0 = copy(&t2);
    let mut facets: Vec<Vec<usize>> = k
        .facets()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != facet)
        .map(|(_, f)| f.clone())
        .collect();
    facets.extend(shell_simplices(&outer, &mid));
    facets.extend(shell_simplices(&mid, &sigma0));
    facets.push(sigma0.clone());
    Refinement {
        complex: SimplicialComplex::from_facets_unchecked(k.dim(), vertices, facets),
        sigma0,
        images,
    }
}

/// Replaces `f0` near a displaced point by a map constant on a tiny simplex
/// `σ0`, changing vertex values by at most `budget`, and certifies that the
/// result has no square root.
pub fn kill_square_root(f0: &PlMap, budget: &Rational, options: &KillOptions) -> Result<KillOutcome> {
    let k = f0.complex();
    let m = f0.dim();
    let lipschitz = f0.lipschitz_constant();
    let l = lipschitz.clone().max(rational::one());
    let mut last = Error::pipeline("choose source simplex", "the complex has no top-dimensional simplex");
    for source in k.top_facets().into_iter().take(options.max_sources) {
        // A non-empty open Y inside the image of an injective piece and inside a grid simplex.
        if !f0.restriction_injective(source)? {
            last = Error::pipeline("choose source simplex", format!("piece {source} is not injective"));
            continue;
        }
        let image = f0.image_simplex(source)?;
        let c = image.barycenter();
        let Some((refined_facet, coords)) = k.containing_facet(&c) else {
            last = Error::pipeline("choose source simplex", "image barycentre leaves the carrier");
            continue;
        };
        if !coords.is_interior() || k.facets()[refined_facet].len() != m + 1 {
            last = Error::pipeline("choose source simplex", "image barycentre lies on a lower face");
            continue;
        }
        let fc = f0.evaluate(&c)?;
        let displacement = c.dist_inf(&fc);
        if displacement.is_zero() {
            last = Error::pipeline("separation", "image barycentre is a fixed point");
            continue;
        }
        // For x ∈ V: ‖f0(x) − f0(c)‖ ≤ L·δ/2 ≤ ε0/8, so f0(V) stays ε0·3/4 away from V.
        let delta = &displacement / (rational::int(4) * &l);
        let radius = &delta / rational::int(2);
        let spread = k
            .facet_simplex(refined_facet)
            .vertices()
            .iter()
            .map(|p| p.dist_inf(&c))
            .max()
            .expect("non-empty simplex");
        let mut chosen = None;
        let mut t = rational::one();
        for depth in 1..=options.max_depth {
            t /= rational::int(2);
            if &t * &spread >= radius {
                continue;
            }
            let t2 = &t * &t;
            let inside = k.facets()[refined_facet].iter().all(|&v| {
                let u = c.lerp(k.vertex(v), &t2);
                image.contains_in_interior(&u)
            });
            if inside {
                chosen = Some((t.clone(), depth));
                break;
            }
        }
        let Some((t, depth)) = chosen else {
            last = Error::pipeline(
                "refine",
                format!("no shell scale down to 2^-{} fits the separating ball", options.max_depth),
            );
            continue;
        };

        let r = refine(f0, refined_facet, &c, &fc, &t);
        let complex = Arc::new(r.complex);
        let f0_refined = PlMap::interpolate(Arc::clone(&complex), r.images.clone())?;

        // v0 = f0(u_j) for a vertex u_j of σ0 with f0(v_j) ≠ v_j.
        let mut v0 = None;
        for &u in &r.sigma0 {
            let v = &r.images[u];
            let fv = f0_refined.evaluate(v)?;
            if fv != *v {
                v0 = Some(v.clone());
                break;
            }
        }
        let Some(v0) = v0 else {
            last = Error::pipeline("collapse", "every image of a vertex of sigma0 is fixed");
            continue;
        };
        let mut images = r.images.clone();
        for &u in &r.sigma0 {
            images[u] = v0.clone();
        }
        let f = PlMap::interpolate(Arc::clone(&complex), images)?;
        let perturbation = f.sup_distance_vertices(&f0_refined)?;
        if perturbation > *budget {
            last = Error::pipeline(
                "collapse",
                format!("perturbation {} exceeds budget {}", rational::format(&perturbation), rational::format(budget)),
            );
            continue;
        }

        let sigma0_facet = f.facet_index(&r.sigma0).expect("sigma0 is a facet");
        let star = complex.star(&r.sigma0)?;
        if !separated(&f0_refined, &star)? {
            last = Error::pipeline("separation", "f0 maps the star of sigma0 onto itself");
            continue;
        }

        // σ* ∋ p = (f0|source)^{-1}(w), w the barycentre of σ0.
        let sigma0 = complex.simplex(&r.sigma0);
        let w = sigma0.barycenter();
        let beta = image.barycentric_coordinates(&w).expect("w lies in the source image");
        let p = k.facet_simplex(source).point_at(&beta.0);
        let (star_facet, _) = complex.containing_facet(&p).ok_or(Error::OutsideCarrier)?;
        if star.contains(&star_facet) {
            last = Error::pipeline("preimage", "the preimage of sigma0 meets its star");
            continue;
        }
        let star_image = f.image_simplex(star_facet)?;
        let Some(witness) = simplices_intersect(&star_image, &sigma0) else {
            last = Error::pipeline("preimage", "f(sigma*) misses sigma0");
            continue;
        };
        let v0_image = f.evaluate(&v0)?;
        let certificate = NoRootCertificate {
            sigma0: sigma0.vertices().to_vec(),
            v0: v0.clone(),
            v0_image,
            sigma_star: complex.facet_simplex(star_facet).vertices().to_vec(),
            witness,
            ledger: build_ledger(&f, sigma0_facet),
            case: FULL_DIMENSIONAL_PREIMAGE.to_string(),
        };
        return Ok(KillOutcome {
            f,
            certificate,
            f0_refined,
            report: KillReport {
                source_facet: source,
                refined_facet,
                center: c,
                displacement,
                lipschitz,
                delta,
                scale: t,
                depth,
                perturbation,
            },
        });
    }
    Err(last)
}

/// No `f0`-image of a star simplex meets a star simplex.
fn separated(f0: &PlMap, star: &[usize]) -> Result<bool> {
    let k = f0.complex();
    let simplices: Vec<Simplex> = star.iter().map(|&s| k.facet_simplex(s)).collect();
    for &s in star {
        let idx = &k.facets()[s];
        let img = Simplex::new(idx.iter().map(|&v| f0.images()[v].clone()).collect())?;
        if simplices.iter().any(|t| simplices_intersect(&img, t).is_some()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::approximate::approximate_pl;
    use super::super::certificate::{verify_no_root_certificate, verify_report};
    use super::*;
    use crate::geometry::{kuhn_triangulation, PerturbConfig};
    use crate::pl::{Evaluable, ExprMap};
    use crate::rational::q;

    #[test]
    fn shells_tile_the_simplex() {
        for m in 1..=3 {
            let outer: Vec<usize> = (0..=m).collect();
            let inner: Vec<usize> = (m + 1..=2 * m + 1).collect();
            let mut pts: Vec<Point> = Vec::new();
            // Standard simplex and its copy scaled by 1/2 about the barycentre.
            for i in 0..=m {
                let mut v = vec![rational::zero(); m];
                if i > 0 {
                    v[i - 1] = rational::one();
                }
                pts.push(Point::new(v));
            }
            let c = Point::centroid(&pts);
            for i in 0..=m {
                pts.push(c.lerp(&pts[i].clone(), &q(1, 2)));
            }
            let mut facets = shell_simplices(&outer, &inner);
            assert_eq!(facets.len(), (m + 1) * m);
            facets.push(inner.clone());
            let k = SimplicialComplex::new(m, pts, facets).unwrap();
            k.validate().unwrap();
            let whole = Simplex::new(k.vertices()[..=m].to_vec()).unwrap();
            assert_eq!(k.volume(), whole.volume());
        }
    }

    fn pipeline(h: &ExprMap, eps: Rational, m: usize) -> (PlMap, KillOutcome) {
        let a = approximate_pl(h, &h.modulus(), &eps, m, &PerturbConfig { seed: 7, ..Default::default() }).unwrap();
        let out = kill_square_root(&a.f0, &(eps / rational::int(5)), &KillOptions::default()).unwrap();
        (a.f0, out)
    }

    #[test]
    fn interval_certificate_verifies() {
        let (f0, out) = pipeline(&ExprMap::identity(1), q(1, 10), 1);
        assert!(verify_no_root_certificate(&out.f, &out.certificate), "{:?}", verify_report(&out.f, &out.certificate));
        assert!(out.report.perturbation <= q(1, 50));
        assert!(out.certificate.ledger.non_injective.is_empty());
        // f0 is unchanged as a function by the refinement.
        for i in 0..=50 {
            let x = Point::from_ints(&[i], 50);
            assert_eq!(out.f0_refined.evaluate(&x).unwrap(), f0.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn postconditions_in_the_plane() {
        let h = ExprMap::identity(2);
        let a = approximate_pl(&h, &h.modulus(), &q(1, 2), 2, &PerturbConfig { seed: 3, ..Default::default() }).unwrap();
        let out = kill_square_root(&a.f0, &q(1, 10), &KillOptions::default()).unwrap();
        let (f, cert) = (&out.f, &out.certificate);
        let k = f.complex();
        let s0: Vec<usize> = cert.sigma0.iter().map(|p| k.vertex_index(p).unwrap()).collect();
        assert!(s0.iter().all(|&v| f.images()[v] == cert.v0));
        // Locality: only σ0's vertices changed (the one defining v0 keeps its value).
        let changed: Vec<usize> = (0..f.images().len())
            .filter(|&v| f.images()[v] != out.f0_refined.images()[v])
            .collect();
        assert!(changed.iter().all(|v| s0.contains(v)));
        assert_eq!(changed.len(), 2);
        assert!(out.report.perturbation <= q(1, 10));
        assert_ne!(f.evaluate(&cert.v0).unwrap(), cert.v0);
        let report = verify_report(f, cert);
        assert!(report[0].passed && report[1].passed && report[2].passed, "{report:?}");
        // Pieces sharing an edge with σ0 collapse it to a point, so they cannot be injective.
        assert!(!report[3].passed);
        let edges = cert
            .ledger
            .non_injective
            .iter()
            .filter(|s| s.iter().filter(|p| cert.sigma0.contains(p)).count() >= 2)
            .count();
        assert_eq!(edges, cert.ledger.non_injective.len());
        assert_eq!(edges, 3);
    }

    #[test]
    fn identity_interpolation_is_not_accepted_as_is() {
        // The identity has a square root; its pieces are injective but vertices are fixed.
        let f0 = PlMap::identity(Arc::new(kuhn_triangulation(1, 4)));
        assert!(kill_square_root(&f0, &q(1, 10), &KillOptions::default()).is_err());
    }

    #[test]
    fn tampering_breaks_the_certificate() {
        let (_, out) = pipeline(&ExprMap::identity(1), q(1, 10), 1);
        let f = &out.f;
        let k = f.complex();
        let (s, _) = k.containing_facet(&out.certificate.v0).unwrap();
        let mut images = f.images().to_vec();
        for &v in &k.facets()[s] {
            images[v] = out.certificate.v0.clone();
        }
        let g = f.with_images(images).unwrap();
        assert!(!verify_no_root_certificate(&g, &out.certificate));

        let mut cert = out.certificate.clone();
        cert.sigma_star = cert.sigma0.clone();
        assert!(!verify_no_root_certificate(f, &cert));
        assert!(!verify_no_root_certificate(&out.f0_refined, &out.certificate));
    }
}
