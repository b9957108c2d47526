//! The show, degseq and pic subcommands.

use kmap_core::picard::{
    charpoly, factor_multiplicity, format_int_poly, growth_class, int_poly, pic_matrix, pic_report,
    predicted_degrees, resolve_z_variant, spectral_radius, GrowthClass, PicError, PicMatrix, DEFAULT_TOL,
};
use kmap_core::projmap::{
    base_points_on_curve, build_iota, build_jf, build_k, build_k_inverse, degree_sequence, image_of_curve,
    jacobian_factored, k_map, Arithmetic, CurveCatalog, CurveImage, DegreeOptions, MapError, Method, ParamCurve,
    ProjMap,
};
use kmap_core::tower::Family;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::config::{Mode, RunConfig};
use crate::{CliError, Outcome};

pub fn show(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    let mut warnings = Vec::new();
    let (k, ki) = match (build_k(p), build_k_inverse(p)) {
        (Ok(k), Ok(ki)) => (k, ki),
        _ => {
            warnings.push(
                "n = 0: the closed form needs deg F >= 1; k is the composition j_F o iota and k^-1 = iota o j_F"
                    .to_string(),
            );
            let ki = build_iota().compose(&build_jf(p)).map_err(core)?.with_label("k^-1");
            (k_map(p), ki)
        }
    };
    let cat = CurveCatalog::new(p);
    let results = json!({
        "k": k,
        "k_inverse": ki,
        "jacobian": jacobian(&k, &cat.forward),
        "jacobian_inverse": jacobian(&ki, &cat.backward),
        "exceptional_images": images(&k, &cat.forward),
        "exceptional_images_inverse": images(&ki, &cat.backward),
        "indeterminacy": indeterminacy(&k, &cat.forward),
        "indeterminacy_inverse": indeterminacy(&ki, &cat.backward),
    });
    Ok(Outcome::new(cfg, results, warnings))
}

fn jacobian(f: &ProjMap, curves: &[ParamCurve]) -> Value {
    match jacobian_factored(f, curves) {
        Ok(r) => json!({
            "exponents": r.factors.iter().map(|(c, e)| json!({"curve": c, "exponent": e})).collect::<Vec<_>>(),
            "remainder": r.remainder,
            "remainder_constant": r.remainder_constant,
        }),
        Err(e) => json!({"error": e.to_string()}),
    }
}

fn images(f: &ProjMap, curves: &[ParamCurve]) -> Value {
    let entries = curves.iter().map(|c| {
        let img = match image_of_curve(f, c) {
            Ok(CurveImage::Point(pt)) => json!({"point": pt.to_string()}),
            Ok(CurveImage::Curve { degree }) => json!({"curve_of_degree": degree}),
            Err(e) => json!({"error": e.to_string()}),
        };
        json!({"curve": c.name, "equation": c.equation.to_string(), "image": img})
    });
    Value::Array(entries.collect())
}

fn indeterminacy(f: &ProjMap, curves: &[ParamCurve]) -> Value {
    let mut pts: Vec<String> = Vec::new();
    for c in curves {
        if let Ok(bp) = base_points_on_curve(f, c) {
            pts.extend(bp.points.iter().map(|p| p.to_string()));
        }
    }
    pts.sort();
    pts.dedup();
    json!(pts)
}

/// Prediction from the Picard matrix, with the Z-variant warning when one is chosen.
fn matrix_for(cfg: &RunConfig, family: Family, warnings: &mut Vec<String>) -> Result<PicMatrix, PicError> {
    if family == Family::Z && cfg.params.cubic_parameters().is_some() {
        let r = resolve_z_variant(&cfg.params)?;
        warnings.push(r.message());
        return Ok(r.matrix);
    }
    pic_matrix(&cfg.params, family)
}

pub fn degseq(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    let iters = cfg.opts.iters;
    let mut warnings = Vec::new();
    let arithmetic = match cfg.opts.mode {
        Mode::Rational => Arithmetic::Rational,
        Mode::Prime => Arithmetic::PrimeField(cfg.opts.prime),
    };
    let opts = DegreeOptions { arithmetic, method: Method::LineProbe, term_budget: cfg.opts.budget, seed: cfg.opts.seed };
    let mut truncated = false;
    let (degrees, primes) = match degree_sequence(p, iters, &opts) {
        Ok(s) => {
            warnings.extend(s.warnings);
            (s.degrees, s.primes)
        }
        Err(MapError::Budget { completed }) => {
            truncated = true;
            warnings.push(format!(
                "budget truncation: term budget {} exceeded; {} of {iters} iterate(s) computed",
                cfg.opts.budget,
                completed.len()
            ));
            (completed, vec![])
        }
        Err(e) => return Err(core(e)),
    };

    let mut spot = Value::Null;
    if cfg.opts.mode == Mode::Prime && !truncated {
        let m = iters.min(2);
        let exact = DegreeOptions { arithmetic: Arithmetic::Rational, method: Method::Symbolic, ..opts.clone() };
        if let Ok(s) = degree_sequence(p, m, &exact) {
            let agree = s.degrees[..] == degrees[..m];
            if !agree {
                warnings.push(format!("exact spot check disagrees at m <= {m}: {:?}", s.degrees));
            }
            spot = json!({"m_max": m, "degrees": s.degrees, "agree": agree});
        }
    }

    let family = cfg.family();
    let matrix = if cfg.n() == 0 {
        warnings.push("no Picard prediction for n = 0".into());
        None
    } else {
        match matrix_for(cfg, family, &mut warnings) {
            Ok(m) => Some(m),
            Err(e) => {
                warnings.push(format!("no Picard prediction: {e}"));
                None
            }
        }
    };
    let predicted: Option<Vec<BigInt>> = matrix.as_ref().map(|m| predicted_degrees(m, iters));

    let mut rows = Vec::new();
    let mut table = vec![vec!["m".to_string(), "deg".into(), "predicted".into(), "ratio".into()]];
    let mut first_mismatch = None;
    for m in 1..=iters {
        let deg = degrees.get(m - 1).copied();
        let prev = if m == 1 { Some(1) } else { degrees.get(m - 2).copied() };
        let ratio = deg.zip(prev).map(|(d, q)| d as f64 / q as f64);
        let pred = predicted.as_ref().map(|v| v[m - 1].clone());
        let matches = deg.zip(pred.as_ref()).map(|(d, q)| BigInt::from(d) == *q);
        if matches == Some(false) && first_mismatch.is_none() {
            first_mismatch = Some(m);
        }
        rows.push(json!({
            "m": m,
            "deg": deg,
            "predicted": pred.as_ref().map(|q| q.to_string()),
            "ratio": ratio,
            "match": matches,
        }));
        let show = |s: Option<String>| s.unwrap_or_else(|| "NA".into());
        table.push(vec![
            m.to_string(),
            show(deg.map(|d| d.to_string())),
            show(pred.map(|q| q.to_string())),
            show(ratio.map(|r| format!("{r:.6}"))),
        ]);
    }

    let growth = matrix.as_ref().map(|m| {
        let cp = charpoly(m);
        json!({
            "family": m.basis.family,
            "charpoly": format_int_poly(&cp),
            "delta": spectral_radius(&cp, DEFAULT_TOL),
            "growth_class": growth_class(m, DEFAULT_TOL),
        })
    });
    let quadratic = matrix.as_ref().is_some_and(|m| growth_class(m, DEFAULT_TOL) == GrowthClass::Quadratic);
    let results = json!({
        "degrees": degrees,
        "primes": primes,
        "method": opts.method,
        "rows": rows,
        "all_match": predicted.is_some() && first_mismatch.is_none() && degrees.len() == iters,
        "first_mismatch": first_mismatch,
        "prediction": growth,
        "exact_spot_check": spot,
        "quadratic_fit": if quadratic { quadratic_fit(&degrees) } else { Value::Null },
    });
    let mut out = Outcome::new(cfg, results, warnings);
    out.table = Some(table);
    out.budget = truncated;
    Ok(out)
}

/// Second differences and the least-squares parabola through (m, deg k^m).
fn quadratic_fit(degrees: &[u32]) -> Value {
    let d: Vec<i64> = degrees.iter().map(|&x| x as i64).collect();
    let second: Vec<i64> = d.windows(3).map(|w| w[2] - 2 * w[1] + w[0]).collect();
    if d.len() < 3 {
        return json!({"second_differences": second});
    }
    // normal equations for c0 + c1 m + c2 m^2
    let mut s = [0.0f64; 5];
    let mut t = [0.0f64; 3];
    for (i, &y) in d.iter().enumerate() {
        let m = (i + 1) as f64;
        for (k, sk) in s.iter_mut().enumerate() {
            *sk += m.powi(k as i32);
        }
        for (k, tk) in t.iter_mut().enumerate() {
            *tk += y as f64 * m.powi(k as i32);
        }
    }
    let a = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d0 = det(&a);
    let c: Vec<f64> = (0..3)
        .map(|j| {
            let mut b = a;
            for i in 0..3 {
                b[i][j] = t[i];
            }
            det(&b) / d0
        })
        .collect();
    let residual = d
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let m = (i + 1) as f64;
            (y as f64 - (c[0] + c[1] * m + c[2] * m * m)).abs()
        })
        .fold(0.0, f64::max);
    json!({
        "second_differences": second,
        "coefficients": {"m^2": c[2], "m": c[1], "1": c[0]},
        "max_residual": residual,
    })
}

/// Named factors the characteristic polynomial is tested against.
fn named_factors(family: Family, n: usize) -> Vec<Vec<i64>> {
    let n = n as i64;
    match family {
        Family::X => vec![vec![0, 1], vec![-1, 1], vec![-1, -(n + 1), 1]],
        Family::Y => vec![vec![-1, -(n + 1), -n, 1]],
        Family::Z => vec![vec![-1, 1], vec![1, 1], vec![1, 1, 1], vec![1, 0, 1], vec![1, -1, 1]],
    }
}

pub fn pic(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let family = cfg.family();
    let mut warnings = Vec::new();
    let mut resolution = Value::Null;
    let m = if family == Family::Z {
        if cfg.params.cubic_parameters().is_none() {
            return Err(CliError::Usage("family Z needs --cubic a,b".into()));
        }
        let r = resolve_z_variant(&cfg.params).map_err(pic_err)?;
        warnings.push(r.message());
        resolution = json!({"chosen": r.chosen, "checks": r.checks});
        r.matrix
    } else {
        pic_matrix(&cfg.params, family).map_err(pic_err)?
    };
    let cp = charpoly(&m);
    let factors: Vec<Value> = named_factors(family, cfg.n())
        .iter()
        .map(|f| {
            let f = int_poly(f);
            json!({"factor": format_int_poly(&f), "multiplicity": factor_multiplicity(&cp, &f)})
        })
        .collect();
    let mut results = pic_report(&m, DEFAULT_TOL);
    results["named_factors"] = json!(factors);
    results["z_resolution"] = resolution;
    let mut table = vec![std::iter::once(String::new()).chain(m.basis.labels.iter().cloned()).collect::<Vec<_>>()];
    for (label, row) in m.basis.labels.iter().zip(&m.rows) {
        table.push(std::iter::once(label.clone()).chain(row.iter().map(|v| v.to_string())).collect());
    }
    let mut out = Outcome::new(cfg, results, warnings);
    out.table = Some(table);
    Ok(out)
}

pub fn core(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

pub fn pic_err(e: PicError) -> CliError {
    match e {
        PicError::Family { .. } => CliError::Usage(e.to_string()),
        e => CliError::Compute(e.to_string()),
    }
}
