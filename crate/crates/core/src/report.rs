//! JSON analysis reports and the pipelines that fill them.
//!
//! Complex numbers serialize as `{"re", "im"}`, the point at infinity as the
//! string `"infinity"`, and an infinite order as `"infinite"`.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{parse_rational, MobiusTransform, RationalMap, ToleranceConfig};
use crate::dynamics::{critical_orbit_attractors, fixed_points, CycleInfo, FixedPointInfo};
use crate::error::{Error, Result};
use crate::methods::{method_symmetry_compare, Method, MethodReport};
use crate::render::{extract_boundary, render_basins, BoundaryMask, GridSpec, RenderParams};
use crate::scalar::{unit_root, Point, Real};
use crate::symmetry::{
    exceptional_symmetries, form1_symmetry, mcmullen_symmetry, normalize, Hypothesis, HypothesisStatus, Order,
    SymmetryGroup,
};
use crate::verify::{
    detect_rotation_order_about, functional_equation_check, image_symmetry_score, translation_invariance_heuristic,
    RotationOrderReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

fn f<T: Real>(x: T) -> f64 {
    // adding zero folds -0.0 into 0.0 so reports do not depend on signed zeros
    x.to_f64().unwrap_or(f64::NAN) + 0.0
}

fn cj<T: Real>(z: Complex<T>) -> ComplexJson {
    ComplexJson { re: f(z.re), im: f(z.im) }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PointJson {
    Finite(ComplexJson),
    Infinity(&'static str),
}

fn pj<T: Real>(p: Point<T>) -> PointJson {
    match p {
        Point::Finite(z) => PointJson::Finite(cj(z)),
        Point::Infinity => PointJson::Infinity("infinity"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OrderJson {
    Finite(u32),
    Infinite(&'static str),
}

impl From<Order> for OrderJson {
    fn from(o: Order) -> Self {
        match o {
            Order::Finite(n) => OrderJson::Finite(n),
            Order::Infinite => OrderJson::Infinite("infinite"),
        }
    }
}

/// A symmetry `z ↦ (a z + b) / (c z + d)`; `lambda` is the root of unity it was built from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorJson {
    pub lambda: ComplexJson,
    pub a: ComplexJson,
    pub b: ComplexJson,
    pub c: ComplexJson,
    pub d: ComplexJson,
}

fn gj<T: Real>(lambda: Complex<T>, m: &MobiusTransform<T>) -> GeneratorJson {
    GeneratorJson {
        lambda: cj(lambda),
        a: cj(m.a),
        b: cj(m.b),
        c: cj(m.c),
        d: cj(m.d),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisJson {
    pub name: String,
    pub status: &'static str,
    pub detail: String,
}

fn hj(h: &Hypothesis) -> HypothesisJson {
    HypothesisJson {
        name: h.name.clone(),
        status: h.status.as_str(),
        detail: h.detail.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FixedPointJson {
    pub location: PointJson,
    pub multiplier: ComplexJson,
    pub classification: &'static str,
    pub local_degree: usize,
    pub multiplicity: usize,
}

fn fpj<T: Real>(p: &FixedPointInfo<T>) -> FixedPointJson {
    FixedPointJson {
        location: pj(p.location),
        multiplier: cj(p.multiplier),
        classification: p.classification.as_str(),
        local_degree: p.local_degree,
        multiplicity: p.multiplicity,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleJson {
    pub points: Vec<PointJson>,
    pub period: usize,
    pub multiplier: ComplexJson,
    pub classification: &'static str,
}

fn cyj<T: Real>(c: &CycleInfo<T>) -> CycleJson {
    CycleJson {
        points: c.points.iter().map(|p| pj(*p)).collect(),
        period: c.period,
        multiplier: cj(c.multiplier),
        classification: c.classification.as_str(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DynamicsJson {
    pub fixed_points: Vec<FixedPointJson>,
    pub attracting_cycles: Vec<CycleJson>,
    pub critical_orbits_captured: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyJson {
    pub order_found: u32,
    pub exponent_m: u32,
    pub residual: f64,
    pub image_score_at_order: Option<f64>,
    pub negative_control_score: Option<f64>,
    pub negative_control_order: Option<u32>,
    pub translation_heuristic: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MethodJson {
    pub method: String,
    pub map: String,
    pub center: ComplexJson,
    pub sigma_p_order: OrderJson,
    pub verified_order: u32,
    pub exponent_m: u32,
    pub residual: f64,
    pub relation: &'static str,
    pub critical_orbits_captured: bool,
    pub warnings: Vec<String>,
}

pub fn method_json<T: Real>(r: &MethodReport<T>) -> MethodJson {
    MethodJson {
        method: r.method.name(),
        map: r.map.to_string(),
        center: cj(r.center),
        sigma_p_order: r.sigma_p_order.into(),
        verified_order: r.verified_order,
        exponent_m: r.exponent_m,
        residual: f(r.residual),
        relation: r.relation.as_str(),
        critical_orbits_captured: r.critical_orbits_captured,
        warnings: r.warnings.clone(),
    }
}

/// The full analysis document.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub input: String,
    pub map: String,
    pub centroid: Option<ComplexJson>,
    pub alpha: Option<usize>,
    pub beta: Option<OrderJson>,
    pub center: Option<ComplexJson>,
    pub order: Option<OrderJson>,
    pub generators: Vec<GeneratorJson>,
    pub hypothesis_checklist: Vec<HypothesisJson>,
    pub warnings: Vec<String>,
    pub dynamics: DynamicsJson,
    pub verify: VerifyJson,
    pub method: Option<MethodJson>,
}

impl AnalysisReport {
    /// Some checklist item failed (as opposed to passing or being unverified).
    pub fn hypothesis_failed(&self) -> bool {
        self.hypothesis_checklist.iter().any(|h| h.status == "fail")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Settings shared by the analysis pipelines.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeOptions<T> {
    pub k_max: u32,
    /// Overrides the grid center (default: the symmetry center).
    pub center: Option<Complex<T>>,
    pub width: T,
    pub pixels: usize,
    pub render: RenderParams<T>,
    /// Render and score the boundary image.
    pub image_check: bool,
    pub dilate: usize,
}

impl<T: Real> Default for AnalyzeOptions<T> {
    fn default() -> Self {
        Self {
            k_max: crate::verify::DEFAULT_KMAX,
            center: None,
            width: T::lit(4.0),
            pixels: 256,
            render: RenderParams::default(),
            image_check: true,
            dilate: 2,
        }
    }
}

/// Scores at `order` and at `order + 1` (coprime to it).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImageScores {
    pub at_order: f64,
    pub negative_control: f64,
    pub negative_control_order: u32,
}

pub fn render_mask<T: Real>(
    r: &RationalMap<T>,
    center: Complex<T>,
    opts: &AnalyzeOptions<T>,
    tol: &ToleranceConfig<T>,
) -> Result<BoundaryMask<T>> {
    let grid = GridSpec::new(center, opts.width, opts.pixels)?;
    let img = render_basins(r, grid, &opts.render, tol)?;
    Ok(extract_boundary(&img))
}

pub fn image_scores<T: Real>(mask: &BoundaryMask<T>, center: Complex<T>, order: u32, dilate: usize) -> Result<ImageScores> {
    let control = order + 1;
    Ok(ImageScores {
        at_order: image_symmetry_score(mask, center, order, dilate)?,
        negative_control: image_symmetry_score(mask, center, control, dilate)?,
        negative_control_order: control,
    })
}

fn dynamics_json<T: Real>(r: &RationalMap<T>, tol: &ToleranceConfig<T>) -> Result<DynamicsJson> {
    let fixed = fixed_points(r, tol)?;
    let summary = critical_orbit_attractors(r, tol)?;
    Ok(DynamicsJson {
        fixed_points: fixed.iter().map(fpj).collect(),
        attracting_cycles: summary.attractors.iter().map(cyj).collect(),
        critical_orbits_captured: summary.all_captured(),
    })
}

/// Renders the boundary and scores it, turning an empty or all-covering mask into a warning.
fn scored_mask<T: Real>(
    r: &RationalMap<T>,
    grid_center: Complex<T>,
    center: Complex<T>,
    order: u32,
    opts: &AnalyzeOptions<T>,
    tol: &ToleranceConfig<T>,
    warnings: &mut Vec<String>,
) -> Result<Option<ImageScores>> {
    let mask = render_mask(r, grid_center, opts, tol)?;
    let covered = mask.count() as f64 / mask.marked.len() as f64;
    if covered > 0.5 {
        warnings.push(format!(
            "boundary mask covers {:.0}% of the grid (no attracting cycle captures most pixels); image scores are not informative",
            100.0 * covered
        ));
    }
    match image_scores(&mask, center, order, opts.dilate) {
        Ok(s) => Ok(Some(s)),
        Err(Error::EmptyMask) => {
            warnings.push("rendered boundary is empty; image check skipped".into());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn verify_json<T: Real>(
    r: &RationalMap<T>,
    center: Complex<T>,
    opts: &AnalyzeOptions<T>,
    tol: &ToleranceConfig<T>,
    warnings: &mut Vec<String>,
) -> Result<(VerifyJson, RotationOrderReport<T>)> {
    let detected = detect_rotation_order_about(r, center, opts.k_max, tol)?;
    let scores = if opts.image_check && detected.order_found < opts.k_max {
        scored_mask(r, opts.center.unwrap_or(center), center, detected.order_found, opts, tol, warnings)?
    } else {
        None
    };
    Ok((
        VerifyJson {
            order_found: detected.order_found,
            exponent_m: detected.exponent_m,
            residual: f(detected.residual),
            image_score_at_order: scores.map(|s| s.at_order),
            negative_control_score: scores.map(|s| s.negative_control),
            negative_control_order: scores.map(|s| s.negative_control_order),
            translation_heuristic: translation_invariance_heuristic(r, tol).as_str(),
        },
        detected,
    ))
}

fn rotation_generators<T: Real>(group: &SymmetryGroup<T>) -> Vec<GeneratorJson> {
    group
        .lambdas()
        .unwrap_or_default()
        .into_iter()
        .map(|l| gj(l, &MobiusTransform::rotation_about(l, group.center)))
        .collect()
}

/// Parses `input` and runs symmetry, dynamics and both verification planes.
pub fn analyze<T: Real>(input: &str, opts: &AnalyzeOptions<T>, tol: &ToleranceConfig<T>) -> Result<AnalysisReport> {
    let r = parse_rational::<T>(input, tol)?;
    if r.degree() < 2 {
        return Err(Error::DegreeTooLow("symmetry", 2));
    }
    let mut warnings = Vec::new();
    let mut checklist = Vec::new();
    let (centroid, alpha, beta, center, order, generators);
    if let Some(p) = r.as_polynomial() {
        let nf = normalize(&p, tol)?;
        let group = SymmetryGroup::new(nf.centroid, nf.beta);
        centroid = Some(cj(nf.centroid));
        alpha = Some(nf.alpha);
        beta = Some(nf.beta.into());
        center = nf.centroid;
        order = Some(group.order.into());
        generators = rotation_generators(&group);
    } else {
        match exceptional_symmetries(&r, tol) {
            Ok(s) => {
                checklist.push(HypothesisJson {
                    name: "single_exceptional_point".into(),
                    status: HypothesisStatus::Pass.as_str(),
                    detail: format!("exceptional point {}", s.exceptional_point),
                });
                let rotation = s.zeta.is_zero() || s.rotation_residual.is_some();
                if !rotation {
                    warnings.push(format!(
                        "ζ = {} ≠ 0: the symmetries are Möbius maps, not Euclidean rotations",
                        Point::Finite(s.zeta)
                    ));
                }
                centroid = Some(cj(s.zeta));
                alpha = None;
                beta = Some(OrderJson::Finite(s.beta));
                center = match s.exceptional_point {
                    Point::Finite(w) if rotation => w,
                    _ => Complex::zero(),
                };
                order = Some(OrderJson::Finite(s.beta));
                generators = s
                    .generators_in_input_coordinates()
                    .iter()
                    .enumerate()
                    .map(|(k, g)| gj(unit_root::<T>(k as i64, s.beta), g))
                    .collect();
            }
            Err(e @ (Error::NoExceptionalPoint | Error::TwoExceptionalPoints(..))) => {
                if matches!(e, Error::TwoExceptionalPoints(..)) {
                    warnings.push(e.to_string());
                }
                let form = form1_symmetry(r.num(), r.den(), tol)?;
                checklist.extend(form.checklist.iter().map(hj));
                for h in form.checklist.iter().filter(|h| h.status == HypothesisStatus::Unverified) {
                    warnings.push(format!("unverified hypothesis {}: {}", h.name, h.detail));
                }
                if form.failed() {
                    warnings.push(format!("conclusion: {}", form.conclusion.as_str()));
                }
                centroid = None;
                alpha = None;
                beta = Some(form.group.order.into());
                center = Complex::zero();
                order = Some(form.group.order.into());
                generators = rotation_generators(&form.group);
            }
            Err(e) => return Err(e),
        }
    }
    let dynamics = dynamics_json(&r, tol)?;
    let (verify, detected) = verify_json(&r, center, opts, tol, &mut warnings)?;
    if let Some(OrderJson::Finite(n)) = order {
        if n != detected.order_found {
            warnings.push(format!(
                "algebraic check found order {} where {} was predicted",
                detected.order_found, n
            ));
        }
    }
    Ok(AnalysisReport {
        input: input.to_string(),
        map: r.to_string(),
        centroid,
        alpha,
        beta,
        center: Some(cj(center)),
        order,
        generators,
        hypothesis_checklist: checklist,
        warnings,
        dynamics,
        verify,
        method: None,
    })
}

/// Output of the root-finding method pipeline.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MethodDocument {
    pub input: String,
    pub method: MethodJson,
    pub verify: Option<VerifyJson>,
}

impl MethodDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn analyze_method<T: Real>(
    input: &str,
    method: Method,
    opts: &AnalyzeOptions<T>,
    tol: &ToleranceConfig<T>,
) -> Result<(MethodDocument, MethodReport<T>)> {
    let p = parse_rational::<T>(input, tol)?
        .as_polynomial()
        .ok_or(Error::Parse {
            position: 0,
            message: format!("`{input}` is not a polynomial"),
        })?;
    let report = method_symmetry_compare(&p, method, opts.k_max, tol)?;
    let mut warnings = Vec::new();
    let verify = if opts.image_check {
        Some(verify_json(&report.map, report.center, opts, tol, &mut warnings)?.0)
    } else {
        None
    };
    let mut json = method_json(&report);
    json.warnings.extend(warnings);
    Ok((
        MethodDocument {
            input: input.to_string(),
            method: json,
            verify,
        },
        report,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct McMullenDocument {
    pub m: u32,
    pub n: u32,
    pub lambda: ComplexJson,
    pub map: String,
    pub predicted_order: u32,
    pub detected_order: u32,
    pub exponent_m: u32,
    pub residual: f64,
}

impl McMullenDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn analyze_mcmullen<T: Real>(m: u32, n: u32, lambda: Complex<T>, k_max: u32, tol: &ToleranceConfig<T>) -> Result<McMullenDocument> {
    let r = mcmullen_symmetry(m, n, lambda, k_max, tol)?;
    Ok(McMullenDocument {
        m,
        n,
        lambda: cj(lambda),
        map: r.map.to_string(),
        predicted_order: m + n,
        detected_order: r.detected.order_found,
        exponent_m: r.detected.exponent_m,
        residual: f(r.detected.residual),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyDocument {
    pub input: String,
    pub center: ComplexJson,
    pub order: u32,
    /// Best `m` and residual of the functional equation at the requested order.
    pub exponent_m: u32,
    pub residual: f64,
    pub holds: bool,
    pub image_score_at_order: Option<f64>,
    pub negative_control_score: Option<f64>,
    pub negative_control_order: Option<u32>,
    pub detected: VerifyJson,
    pub warnings: Vec<String>,
}

impl VerifyDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Both verification planes for a given map, order and center.
pub fn verify_symmetry<T: Real>(
    input: &str,
    order: u32,
    center: Complex<T>,
    opts: &AnalyzeOptions<T>,
    tol: &ToleranceConfig<T>,
) -> Result<VerifyDocument> {
    if order == 0 {
        return Err(Error::InvalidParameters("verify", "order must be positive".into()));
    }
    let r = parse_rational::<T>(input, tol)?;
    let shifted = if center.is_zero() {
        r.clone()
    } else {
        crate::algebra::mobius_conjugate(&r, &MobiusTransform::translation(-center), tol)?
    };
    let lambda = unit_root::<T>(1, order);
    // smallest passing m, else the best residual
    let residuals: Vec<(i64, T)> = (0..=2 * r.degree() as i64)
        .map(|m| (m, functional_equation_check(&shifted, lambda, m)))
        .collect();
    let (m, residual) = residuals
        .iter()
        .copied()
        .find(|x| x.1 <= tol.coeff_rel_tol)
        .unwrap_or_else(|| residuals.iter().copied().fold((0, T::infinity()), |acc, x| if x.1 < acc.1 { x } else { acc }));
    let mut warnings = Vec::new();
    let (detected, _) = verify_json(&r, center, &AnalyzeOptions { image_check: false, ..opts.clone() }, tol, &mut warnings)?;
    let scores = if opts.image_check {
        scored_mask(&r, opts.center.unwrap_or(center), center, order, opts, tol, &mut warnings)?
    } else {
        None
    };
    Ok(VerifyDocument {
        input: input.to_string(),
        center: cj(center),
        order,
        exponent_m: m as u32,
        residual: f(residual),
        holds: residual <= tol.coeff_rel_tol,
        image_score_at_order: scores.map(|s| s.at_order),
        negative_control_score: scores.map(|s| s.negative_control),
        negative_control_order: scores.map(|s| s.negative_control_order),
        detected,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> AnalyzeOptions<f64> {
        AnalyzeOptions {
            pixels: 128,
            ..Default::default()
        }
    }

    #[test]
    fn polynomial_report() {
        let r = analyze::<f64>("z^3 - 1/3", &quick(), &ToleranceConfig::default()).unwrap();
        assert_eq!(r.beta, Some(OrderJson::Finite(3)));
        assert_eq!(r.center, Some(ComplexJson { re: 0.0, im: 0.0 }));
        assert_eq!(r.generators.len(), 3);
        assert_eq!(r.verify.order_found, 3);
        let json = r.to_json();
        for key in ["\"input\"", "\"centroid\"", "\"alpha\"", "\"beta\"", "\"hypothesisChecklist\"", "\"imageScoreAtOrder\""] {
            assert!(json.contains(key), "{key}");
        }
    }

    #[test]
    fn rational_reports() {
        let t = ToleranceConfig::default();
        let e = analyze::<f64>("3z^3/(3-z^3)", &quick(), &t).unwrap();
        assert_eq!(e.order, Some(OrderJson::Finite(3)));
        assert!(!e.hypothesis_failed());
        let f1 = analyze::<f64>("z^2(z^2-2)/(z^2+1)", &quick(), &t).unwrap();
        assert_eq!(f1.order, Some(OrderJson::Finite(2)));
        assert_eq!(f1.hypothesis_checklist.len(), 6);
        let infinite = analyze::<f64>("z^4", &quick(), &t).unwrap();
        assert_eq!(infinite.beta, Some(OrderJson::Infinite("infinite")));
        assert!(infinite.to_json().contains("\"infinite\""));
    }

    #[test]
    fn mcmullen_document() {
        let d = analyze_mcmullen(2, 1, Complex::new(0.01, 0.0), 24, &ToleranceConfig::default()).unwrap();
        assert_eq!((d.predicted_order, d.detected_order), (3, 3));
    }
}
