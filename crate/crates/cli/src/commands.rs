use canonpos_core::fio::{
    kernel_domination_check, kernel_equivalence, kernel_from_map, kernel_from_phase,
    DominationReport, NondegeneratePhase,
};
use canonpos_core::forms::{polarize, split_herm_plh, FormComparison, QuadraticWeight};
use canonpos_core::linalg::{c64, CVec};
use canonpos_core::positivity::{
    lagrangian_positivity, map_positivity, CLagrangianPlane, PositivityVerdict, RouteOutcome,
};
use canonpos_core::symplectic::{generating_function, push_weight};
use canonpos_core::toeplitz::{analyze, ToeplitzReport};
use canonpos_core::validate::{spectral_report, truncated_matrix};
use canonpos_core::Tolerance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::instance::{self, field};
use crate::json::{cmat, complex, cvec, real, reals, rmat, Obj};
use crate::CliError;

/// Norm above which the truncation is taken as evidence of unboundedness.
pub const UNBOUNDED_EVIDENCE: f64 = 1e3;
const SPOT_CHECKS: usize = 8;

pub struct Context {
    pub tol: Tolerance,
    pub seed: u64,
    pub truncation: usize,
    pub prior: Option<Value>,
}

impl Context {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub fn run(kind: &str, p: &Map<String, Value>, ctx: &Context) -> Result<Value, CliError> {
    match kind {
        "weight" => weight(p, ctx),
        "lagrangian" => lagrangian(p, ctx),
        "map" => map(p, ctx),
        "fio" => fio(p, ctx),
        "toeplitz" => toeplitz(p, ctx),
        "validate" => validate(p, ctx),
        other => Err(CliError::Invalid(format!("unknown subcommand {other}"))),
    }
}

fn weight_json(w: &QuadraticWeight) -> Value {
    Obj::new()
        .set("A", cmat(w.a()))
        .set("L", cmat(w.l()))
        .build()
}

fn comparison_json(c: &FormComparison) -> Value {
    Obj::new()
        .set("min_eigenvalue", real(c.min_eigenvalue))
        .set("max_eigenvalue", real(c.max_eigenvalue))
        .set(
            "signature",
            vec![c.signature.0, c.signature.1, c.signature.2],
        )
        .set("psd", c.psd)
        .set("pd", c.pd)
        .set("tol", real(c.tol))
        .set("witness", reals(c.witness.as_slice()))
        .build()
}

fn route_json(r: &RouteOutcome) -> Value {
    Obj::new()
        .set("status", r.status.as_str())
        .set("margin", real(r.min_eigenvalue))
        .set("tol", real(r.tol))
        .build()
}

fn verdict_json(v: &PositivityVerdict) -> Value {
    let characterization = match &v.characterization {
        Ok(r) => route_json(r),
        Err(e) => Obj::new().set("error", e.to_string()).build(),
    };
    Obj::new()
        .set("status", v.status.as_str())
        .set("margin", real(v.min_eigenvalue))
        .set("witness", cvec(&v.witness))
        .set("direct", route_json(&v.direct))
        .set("characterization", characterization)
        .set("route_agreement", v.route_agreement)
        .build()
}

fn domination_json(d: &DominationReport) -> Value {
    Obj::new()
        .set("min_eigenvalue", real(d.min_eigenvalue))
        .set("psd", d.psd)
        .set("kernel_dimension", d.kernel_dimension)
        .set("signature", {
            let s = d.comparison.signature;
            vec![s.0, s.1, s.2]
        })
        .build()
}

fn error_json(e: impl ToString) -> Value {
    Obj::new().set("error", e.to_string()).build()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| {
        c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn weight(p: &Map<String, Value>, ctx: &Context) -> Result<Value, CliError> {
    let w = instance::weight_obj(p, "payload", None)?;
    let n = w.n();
    let psh = w.is_strictly_psh(ctx.tol);
    let (herm, plh) = split_herm_plh(&w);
    let pol = polarize(&w);
    let mut rng = ctx.rng();
    let mut residual = 0.0_f64;
    for _ in 0..SPOT_CHECKS {
        let x = random_point(&mut rng, n);
        let z = CVec::from_iterator(2 * n, x.iter().copied().chain(x.iter().map(|v| v.conj())));
        residual = residual.max((pol.eval(&z) - c64(w.eval(&x), 0.0)).norm());
    }
    Ok(Obj::new()
        .set("n", n)
        .set("strictly_psh", psh)
        .set(
            "verdict",
            if psh {
                "strictly plurisubharmonic"
            } else {
                "not strictly plurisubharmonic"
            },
        )
        .set("pluriharmonic", w.is_pluriharmonic(ctx.tol))
        .set("levi_eigenvalues", reals(&w.levi_eigenvalues()))
        .set("hermitian_part", weight_json(&herm))
        .set("pluriharmonic_part", weight_json(&plh))
        .set("polarization", cmat(pol.matrix()))
        .set("realified_hessian", rmat(&w.realified_hessian()))
        .set(
            "polarization_check",
            Obj::new()
                .set("points", SPOT_CHECKS)
                .set("max_residual", real(residual))
                .build(),
        )
        .build())
}

fn lagrangian(p: &Map<String, Value>, ctx: &Context) -> Result<Value, CliError> {
    let basis = instance::matrix(field(p, "basis")?, "basis")?;
    let n = basis.ncols();
    if basis.nrows() != 2 * n {
        return Err(CliError::Invalid(format!(
            "basis must be 2n x n, got {}x{}",
            basis.nrows(),
            n
        )));
    }
    let phi0 = instance::weight(p, "phi0", Some(n))?;
    let plane = CLagrangianPlane::new(basis).map_err(|e| CliError::from(e).context("basis"))?;
    let v = lagrangian_positivity(&plane, &phi0, ctx.tol)
        .map_err(|e| CliError::from(e).context("basis against phi0"))?;
    Ok(Obj::new()
        .set("n", n)
        .set("positivity", verdict_json(&v))
        .build())
}

fn map_and_weights(
    p: &Map<String, Value>,
) -> Result<(canonpos_core::symplectic::ComplexCanonicalMap, usize), CliError> {
    let m = instance::canonical_map(p, "M")?;
    let n = m.n();
    Ok((m, n))
}

fn map(p: &Map<String, Value>, ctx: &Context) -> Result<Value, CliError> {
    let (m, n) = map_and_weights(p)?;
    let phi1 = instance::weight(p, "phi1", Some(n))?;
    let phi2 = instance::weight(p, "phi2", Some(n))?;
    let v = map_positivity(&m, &phi1, &phi2, ctx.tol)
        .map_err(|e| CliError::from(e).context("M against phi1, phi2"))?;
    let kernel = match kernel_equivalence(&m, &phi1, &phi2, ctx.tol) {
        Ok(r) => Obj::new()
            .set("kernel_phase", cmat(r.kernel.matrix()))
            .set("map_status", r.map.status.as_str())
            .set("doubled_plane", verdict_json(&r.doubled_plane))
            .set("domination", comparison_json(&r.domination))
            .set("domination_status", r.domination_status.as_str())
            .set("all_agree", r.all_agree)
            .build(),
        Err(e) => error_json(e),
    };
    Ok(Obj::new()
        .set("n", n)
        .set("positivity", verdict_json(&v))
        .set("kernel_equivalence", kernel)
        .build())
}

fn fio(p: &Map<String, Value>, ctx: &Context) -> Result<Value, CliError> {
    let (m, n) = map_and_weights(p)?;
    let phi2 = instance::weight(p, "phi2", Some(n))?;
    let psi =
        kernel_from_map(&m, &phi2).map_err(|e| CliError::from(e).context("kernel of M on phi2"))?;
    let image =
        push_weight(&m, &phi2).map_err(|e| CliError::from(e).context("image of phi2 under M"))?;
    let amplitude = generating_function(&m)
        .and_then(|g| NondegeneratePhase::from_generating_function(&g))
        .and_then(|phase| kernel_from_phase(&phase, &phi2));
    let mut out = Obj::new()
        .set("n", n)
        .set("kernel_phase", cmat(psi.matrix()))
        .set(
            "amplitude",
            match &amplitude {
                Ok(k) => complex(k.amplitude),
                Err(e) => error_json(e),
            },
        )
        .set(
            "image_weight",
            Obj::new()
                .set("A", cmat(image.a()))
                .set("L", cmat(image.l()))
                .set("strictly_psh", image.is_strictly_psh(ctx.tol))
                .build(),
        )
        .set(
            "domination_image",
            domination_json(&kernel_domination_check(&psi, &image, &phi2, ctx.tol)?),
        );
    if p.contains_key("phi1") {
        let phi1 = instance::weight(p, "phi1", Some(n))?;
        out = out.set(
            "domination_phi1",
            domination_json(&kernel_domination_check(&psi, &phi1, &phi2, ctx.tol)?),
        );
    }
    Ok(out.build())
}

fn toeplitz_inputs(
    p: &Map<String, Value>,
) -> Result<
    (
        canonpos_core::forms::ComplexQuadraticSymbolExponent,
        QuadraticWeight,
    ),
    CliError,
> {
    let phi0 = match p.get("phi0") {
        Some(_) => instance::weight(p, "phi0", None)?,
        None => {
            let n = match p.get("Q1") {
                Some(v) => instance::matrix(v, "Q1")?.nrows(),
                None => 1,
            };
            QuadraticWeight::model(n)
        }
    };
    let q = instance::symbol(p, phi0.n())?;
    Ok((q, phi0))
}

fn toeplitz_json(rep: &ToeplitzReport, phi0: &QuadraticWeight, ctx: &Context) -> Value {
    let adm = &rep.admissibility;
    let flag = |holds: bool, margin: f64| {
        Obj::new()
            .set("holds", holds)
            .set("margin", real(margin))
            .build()
    };
    let admissibility = Obj::new()
        .set(
            "densely_defined",
            flag(adm.densely_defined.holds, adm.densely_defined.margin),
        )
        .set(
            "convergent",
            flag(adm.convergent.holds, adm.convergent.margin),
        )
        .set(
            "nondegenerate",
            Obj::new()
                .set("holds", adm.nondegenerate.holds)
                .set("det_abs", real(adm.nondegenerate.det_abs))
                .set("threshold", real(adm.nondegenerate.threshold))
                .set("marginal", adm.nondegenerate.marginal)
                .build(),
        )
        .build();
    let mut out = Obj::new()
        .set("n", phi0.n())
        .set("admissibility", admissibility)
        .set("boundedness", rep.boundedness_label())
        .set("trace_class", rep.trace_class)
        .set("unitary_up_to_phase", rep.unitary_up_to_phase)
        .set("trace", rep.trace.map(complex).unwrap_or(Value::Null))
        .set(
            "cayley_residual",
            rep.cayley_residual.map(real).unwrap_or(Value::Null),
        )
        .set(
            "kappa",
            rep.kappa
                .as_ref()
                .map(|k| cmat(k.matrix()))
                .unwrap_or(Value::Null),
        )
        .set(
            "bounded",
            rep.bounded
                .as_ref()
                .map(verdict_json)
                .unwrap_or(Value::Null),
        )
        .set(
            "map_positivity",
            rep.map_verdict
                .as_ref()
                .map(verdict_json)
                .unwrap_or(Value::Null),
        );
    if let Some(w) = &rep.weyl {
        // The full symbol restricted to Λ_{Φ₀} against the stored exponent there.
        let mut rng = ctx.rng();
        let mut residual = 0.0_f64;
        for _ in 0..SPOT_CHECKS {
            let x = random_point(&mut rng, phi0.n());
            let on_lambda = w.eval_on_lambda(&x);
            let full = w.eval(&x, &phi0.graph_fiber(&x));
            residual = residual.max((full - on_lambda).norm() / on_lambda.norm().max(1.0));
        }
        out = out.set(
            "weyl_symbol",
            Obj::new()
                .set("amplitude", complex(w.c))
                .set("phase_hessian", cmat(w.f.matrix()))
                .set("lambda_exponent", cmat(&w.lambda_exponent))
                .set("im_phase_on_lambda", rmat(&w.im_f_on_lambda()))
                .set("lambda_check_residual", real(residual))
                .build(),
        );
    } else {
        out = out.set("weyl_symbol", Value::Null);
    }
    out.build()
}

fn toeplitz(p: &Map<String, Value>, ctx: &Context) -> Result<Value, CliError> {
    let (q, phi0) = toeplitz_inputs(p)?;
    let rep =
        analyze(&q, &phi0, ctx.tol).map_err(|e| CliError::from(e).context("symbol on phi0"))?;
    Ok(toeplitz_json(&rep, &phi0, ctx))
}

/// The fields of a toeplitz report that the oracle can check.
struct Claims {
    source: &'static str,
    bounded: Option<bool>,
    status: String,
    trace: Option<canonpos_core::linalg::C64>,
    unitary: bool,
}

fn claims_from_prior(prior: &Value) -> Result<Claims, CliError> {
    let bad = |what: &str| CliError::Invalid(format!("prior report: {what}"));
    if prior.get("kind").and_then(Value::as_str) != Some("toeplitz") {
        return Err(bad("not a toeplitz report"));
    }
    let result = prior
        .get("result")
        .ok_or_else(|| bad("expected a single `result` (sweeps cannot be compared)"))?;
    let status = result
        .get("bounded")
        .and_then(|b| b.get("status"))
        .and_then(Value::as_str)
        .map(str::to_string);
    let trace = match result.get("trace") {
        None | Some(Value::Null) => None,
        Some(v) => Some(instance::complex(v, "prior trace")?),
    };
    Ok(Claims {
        source: "prior report",
        bounded: status
            .as_deref()
            .map(|s| s == "StrictlyPositive" || s == "DegeneratePositive"),
        status: status.unwrap_or_else(|| "not analyzed".into()),
        trace,
        unitary: result
            .get("unitary_up_to_phase")
            .and_then(Value::as_bool)
            .ok_or_else(|| bad("missing unitary_up_to_phase"))?,
    })
}

fn validate(p: &Map<String, Value>, ctx: &Context) -> Result<Value, CliError> {
    if p.contains_key("phi0") {
        let w = instance::weight(p, "phi0", Some(1))?;
        if w.distance(&QuadraticWeight::model(1)) > 0.0 {
            return Err(CliError::Invalid(
                "the truncation oracle works on the model weight |x|^2/2 only".into(),
            ));
        }
    }
    let q = instance::symbol(p, 1)?;
    let order = ctx.truncation;
    let t = truncated_matrix(&q, order)?;
    let rep = spectral_report(&t);
    let mut grid: Vec<usize> = [order / 4, order / 2, order]
        .into_iter()
        .filter(|&k| k > 0)
        .collect();
    grid.dedup();
    let mut norms = Vec::new();
    for &k in &grid {
        norms.push(if k == order {
            rep.operator_norm
        } else {
            spectral_report(&truncated_matrix(&q, k)?).operator_norm
        });
    }
    let growth = rep.operator_norm > UNBOUNDED_EVIDENCE;

    let claims = match &ctx.prior {
        Some(prior) => claims_from_prior(prior)?,
        None => {
            let a = analyze(&q, &QuadraticWeight::model(1), ctx.tol)?;
            Claims {
                source: "fresh analysis",
                bounded: a.bounded.as_ref().map(|b| b.status.is_positive()),
                status: a.bounded.as_ref().map_or("not analyzed".to_string(), |b| {
                    b.status.as_str().to_string()
                }),
                trace: a.trace,
                unitary: a.unitary_up_to_phase,
            }
        }
    };
    let radial = q.is_radial(0.0);
    let boundedness = Obj::new()
        .set("claimed_status", claims.status.as_str())
        .set("oracle_norm_exceeds_threshold", growth)
        .set("threshold", real(UNBOUNDED_EVIDENCE))
        .set(
            "agree",
            match claims.bounded {
                Some(b) => Value::Bool(b != growth),
                None => Value::Null,
            },
        )
        .build();
    let trace = match claims.trace {
        Some(z) => {
            let diff = (z - rep.trace_partial).norm();
            Obj::new()
                .set("claimed", complex(z))
                .set("oracle", complex(rep.trace_partial))
                .set("difference", real(diff))
                .set("agree", diff <= 1e-7)
                .build()
        }
        None => Obj::new()
            .set("claimed", Value::Null)
            .set("oracle", complex(rep.trace_partial))
            .build(),
    };
    let unitary = if radial {
        Obj::new()
            .set("claimed", claims.unitary)
            .set("oracle_defect", real(rep.unitary_defect))
            .set("agree", claims.unitary == (rep.unitary_defect < 1e-8))
            .build()
    } else {
        Obj::new()
            .set("claimed", claims.unitary)
            .set("oracle_defect", real(rep.unitary_defect))
            .set(
                "skipped",
                "truncations of non-diagonal operators are not unitary",
            )
            .build()
    };
    let sv_shown: Vec<f64> = rep.singular_values.iter().take(10).copied().collect();
    Ok(Obj::new()
        .set(
            "oracle",
            Obj::new()
                .set("method", t.method.as_str())
                .set("truncation", order)
                .set(
                    "quadrature_error",
                    t.error_estimate.map(real).unwrap_or(Value::Null),
                )
                .set("operator_norm", real(rep.operator_norm))
                .set("leading_singular_values", reals(&sv_shown))
                .set("trace_partial", complex(rep.trace_partial))
                .set("unitary_defect", real(rep.unitary_defect))
                .set("decay_fit", real(rep.decay_fit))
                .set(
                    "norm_grid",
                    Obj::new()
                        .set("truncations", grid.clone())
                        .set("norms", reals(&norms))
                        .build(),
                )
                .build(),
        )
        .set(
            "comparison",
            Obj::new()
                .set("source", claims.source)
                .set("boundedness", boundedness)
                .set("trace", trace)
                .set("unitary", unitary)
                .set(
                    "note",
                    "unboundedness is evidence from truncation norms, not a proof",
                )
                .build(),
        )
        .build())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context {
            tol: Tolerance::default(),
            seed: 42,
            truncation: 40,
            prior: None,
        }
    }

    fn payload(s: &str) -> Map<String, Value> {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn negative_levi_is_a_verdict() {
        let v = run(
            "weight",
            &payload(r#"{"A": [[[0,0]]], "L": [[[-1,0]]]}"#),
            &ctx(),
        )
        .unwrap();
        assert_eq!(v["verdict"], "not strictly plurisubharmonic");
    }

    #[test]
    fn lambda_minus_one_trace() {
        let v = run("toeplitz", &payload(r#"{"lambda": [-1, 0]}"#), &ctx()).unwrap();
        assert_eq!(v["bounded"]["status"], "StrictlyPositive");
        let t = &v["trace"];
        assert!((t[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(t[1].as_f64().unwrap(), 0.0);
    }

    #[test]
    fn oracle_agrees_with_analysis() {
        let v = run("validate", &payload(r#"{"lambda": [-1, 0]}"#), &ctx()).unwrap();
        assert_eq!(v["comparison"]["trace"]["agree"], true);
        assert_eq!(v["comparison"]["boundedness"]["agree"], true);
    }
}
