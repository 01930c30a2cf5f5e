use num_bigint::BigUint;
use rand::Rng;
use serde_json::{json, Value};

use super::{Claim, RunOptions, Status};
use crate::codes::{CodeDistance, LinearCodeZm, Metric};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::io::matrix_hash;
use crate::lattice::{DistanceResult, Lattice};
use crate::matrices::{default_name_for_order, named, sylvester_hadamard, WeighingMatrix};
use crate::sylvester::{self, ParityModulus};
use crate::transform::{self, seeded_rng, DiscreteTransform};

pub(super) struct Outcome {
    pub status: Status,
    pub values: Value,
}

fn outcome(status: Status, values: Value) -> Result<Outcome> {
    Ok(Outcome { status, values })
}

fn proved_if(ok: bool, values: Value) -> Result<Outcome> {
    outcome(
        if ok {
            Status::ProvedInstance
        } else {
            Status::Failed
        },
        values,
    )
}

const OPS: &[&str] = &[
    "lattice-distance",
    "lattice-volume",
    "code-distance",
    "self-dual",
    "hadamard-rank",
    "conference-rank",
    "mds",
    "sylvester-volume",
    "sylvester-distance",
    "sylvester-hadamard",
    "g-recursion",
    "parity-check",
    "covering-radius",
    "radius-bounds",
    "kernel-distance",
    "kernel-trans",
    "lambda-w",
    "nesting",
    "hadamard-class",
    "einc",
    "einc-equality",
    "reverse-duality",
    "divisibility",
    "continuous-involution",
    "discrete-involution",
    "box-experiment",
    "cross-polytope",
    "volume-preservation",
    "sphere-size",
    "oracle-code",
    "cayley-atlas",
];

pub(super) fn is_known(op: &str) -> bool {
    OPS.contains(&op)
}

struct Params<'a>(&'a toml::Table, &'a str);

impl Params<'_> {
    fn missing(&self, key: &str) -> Error {
        Error::precondition(format!(
            "claim {}: missing or invalid parameter {key:?}",
            self.1
        ))
    }

    fn u64(&self, key: &str) -> Result<u64> {
        self.0
            .get(key)
            .and_then(toml::Value::as_integer)
            .and_then(|v| u64::try_from(v).ok())
            .ok_or_else(|| self.missing(key))
    }

    fn u32(&self, key: &str) -> Result<u32> {
        u32::try_from(self.u64(key)?).map_err(|_| self.missing(key))
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        if self.0.contains_key(key) {
            self.u64(key)
        } else {
            Ok(default)
        }
    }

    fn opt_u64(&self, key: &str) -> Result<Option<u64>> {
        self.0.contains_key(key).then(|| self.u64(key)).transpose()
    }

    fn str(&self, key: &str) -> Result<&str> {
        self.0
            .get(key)
            .and_then(toml::Value::as_str)
            .ok_or_else(|| self.missing(key))
    }

    /// `matrix = "<name>"` or `order = N`.
    fn matrix(&self, max_order: usize) -> Result<(String, WeighingMatrix)> {
        let name = if self.0.contains_key("matrix") {
            self.str("matrix")?.to_string()
        } else {
            default_name_for_order(self.u64("order")? as usize)?
        };
        let w = named(&name, max_order)?;
        Ok((name, w))
    }
}

fn matrix_info(name: &str, w: &WeighingMatrix) -> Value {
    json!({
        "matrix": name,
        "matrix_sha256": matrix_hash(w),
        "order": w.order(),
        "weight": w.weight(),
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Exact or bracketed distance judged against `expected`.
fn judge_distance(bounds: (u64, u64), exact: Option<u64>, expected: u64) -> Status {
    match exact {
        Some(d) if d == expected => Status::ProvedInstance,
        Some(_) => Status::Failed,
        None if bounds.0 <= expected && expected <= bounds.1 => Status::SkippedBudget,
        None => Status::Failed,
    }
}

fn distance_json(d: &DistanceResult) -> Value {
    match d {
        DistanceResult::Exact { distance, .. } => json!(distance),
        DistanceResult::Interval { lower, upper, .. } => json!([lower, upper]),
    }
}

fn code_distance_json(d: &CodeDistance) -> Value {
    match d.exact() {
        Some(v) => json!(v),
        None => json!([d.bounds().0, d.bounds().1]),
    }
}

/// A lattice together with the modulus its code is reduced by.
fn lattice_source(p: &Params, opts: &RunOptions) -> Result<(Value, Lattice, u64)> {
    let max = opts.budgets.max_order;
    match p.str("source")? {
        "weighing" => {
            let (name, w) = p.matrix(max)?;
            let l = Lattice::canonicalize(&w.to_int_matrix())?;
            Ok((matrix_info(&name, &w), l, w.weight() as u64))
        }
        "sylvester" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            Ok((
                json!({ "m": m, "j": j }),
                sylvester::lambda_mj(m, j, max)?,
                1 << j,
            ))
        }
        "kernel" => {
            let (name, w) = p.matrix(max)?;
            let s = p.u64("s")?;
            let info = merge(matrix_info(&name, &w), json!({ "s": s }));
            Ok((info, transform::lambda_ws(&w, s)?, s))
        }
        other => Err(Error::precondition(format!("unknown source {other:?}"))),
    }
}

pub(super) fn run(claim: &Claim, opts: &RunOptions) -> Result<Outcome> {
    let p = Params(&claim.params, &claim.id);
    let b = &opts.budgets;
    let max = b.max_order;
    match claim.op.as_str() {
        "lattice-distance" => {
            let (name, w) = p.matrix(max)?;
            let l = Lattice::canonicalize(&w.to_int_matrix())?;
            let d = l.min_manhattan_distance(b.node_budget);
            let status = judge_distance(d.bounds(), d.exact(), w.weight() as u64);
            outcome(
                status,
                merge(
                    matrix_info(&name, &w),
                    json!({ "min_distance": distance_json(&d) }),
                ),
            )
        }
        "lattice-volume" => {
            let (name, w) = p.matrix(max)?;
            let l = Lattice::canonicalize(&w.to_int_matrix())?;
            let expected = BigUint::from(w.weight()).pow(w.order() as u32 / 2);
            let even = w.order() % 2 == 0;
            proved_if(
                even && *l.volume() == expected,
                merge(
                    matrix_info(&name, &w),
                    json!({ "volume": l.volume().to_string(), "expected": expected.to_string() }),
                ),
            )
        }
        "code-distance" => {
            let (name, w) = p.matrix(max)?;
            let l = Lattice::canonicalize(&w.to_int_matrix())?;
            let code = l.reduce_to_code(w.weight() as u64)?;
            let d = code.min_distance(Metric::Lee, b)?;
            let status = judge_distance(d.bounds(), d.exact(), w.weight() as u64);
            outcome(
                status,
                merge(
                    matrix_info(&name, &w),
                    json!({
                        "code_size": code.cardinality().to_string(),
                        "min_lee_distance": code_distance_json(&d),
                    }),
                ),
            )
        }
        "self-dual" => {
            let (name, w) = p.matrix(max)?;
            let code =
                Lattice::canonicalize(&w.to_int_matrix())?.reduce_to_code(w.weight() as u64)?;
            let ok = code.is_self_dual();
            proved_if(
                ok,
                merge(
                    matrix_info(&name, &w),
                    json!({ "modulus": code.modulus(), "self_dual": ok }),
                ),
            )
        }
        "hadamard-rank" => {
            let (name, w) = p.matrix(max)?;
            if !w.is_hadamard() {
                return Err(Error::precondition(format!("{name} is not Hadamard")));
            }
            let n = w.order();
            let rank = LinearCodeZm::from_matrix(&w.to_int_matrix(), n as u64)?.rank();
            proved_if(
                rank == n - 1,
                merge(
                    matrix_info(&name, &w),
                    json!({ "rank": rank, "expected": n - 1 }),
                ),
            )
        }
        "conference-rank" => {
            let q = p.u64("q")?;
            let name = format!("conference:{q}");
            let w = named(&name, max)?;
            let rank = LinearCodeZm::from_matrix(&w.to_int_matrix(), q)?.rank();
            let expected = (q as usize).div_ceil(2);
            proved_if(
                rank == expected,
                merge(
                    matrix_info(&name, &w),
                    json!({ "rank": rank, "expected": expected }),
                ),
            )
        }
        "mds" => {
            let q = p.u64("q")?;
            let name = format!("conference:{q}");
            let w = named(&name, max)?;
            let code = LinearCodeZm::from_matrix(&w.to_int_matrix(), q)?;
            let r = code.is_mds(b)?;
            let values = merge(
                matrix_info(&name, &w),
                json!({
                    "length": r.length,
                    "dimension": r.dimension,
                    "hamming_distance": code_distance_json(&r.distance),
                    "singleton": r.length - r.dimension + 1,
                    "mds": r.mds,
                }),
            );
            let status = if r.mds.is_some() {
                Status::ConjectureOutcome
            } else {
                Status::SkippedBudget
            };
            outcome(status, values)
        }
        "sylvester-volume" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let l = sylvester::lambda_mj(m, j, max)?;
            let f = sylvester::volume_formula(m, j);
            proved_if(
                *l.volume() == f,
                json!({ "m": m, "j": j, "determinant": l.volume().to_string(), "formula": f.to_string() }),
            )
        }
        "sylvester-distance" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let d = sylvester::lambda_mj(m, j, max)?.min_manhattan_distance(b.node_budget);
            outcome(
                judge_distance(d.bounds(), d.exact(), 1 << j),
                json!({ "m": m, "j": j, "min_distance": distance_json(&d), "expected": 1u64 << j }),
            )
        }
        "sylvester-hadamard" => {
            let m = p.u32("m")?;
            let ok = sylvester::lambda_mm_equals_hadamard(m, max)?;
            proved_if(ok, json!({ "m": m, "equal": ok }))
        }
        "g-recursion" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let ok = sylvester::g_matrix(m, j, max)? == sylvester::g_matrix_recursive(m, j, max)?;
            proved_if(ok, json!({ "m": m, "j": j, "equal": ok }))
        }
        "parity-check" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let mut per = serde_json::Map::new();
            for conv in ParityModulus::ALL {
                let key = match conv {
                    ParityModulus::TwoPowJ => "two_pow_j",
                    ParityModulus::TwoPowM => "two_pow_m",
                    ParityModulus::RowWeight => "row_weight",
                };
                per.insert(
                    key.to_string(),
                    json!(sylvester::parity_check_exact(m, j, conv, max)?),
                );
            }
            let ok = per["two_pow_j"] == json!(true);
            proved_if(ok, json!({ "m": m, "j": j, "exact": per }))
        }
        "covering-radius" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let r = sylvester::covering_radius_exact(m, j, b)?;
            let expected = p.opt_u64("expected")?;
            let ok = expected.is_none_or(|e| e == r as u64);
            proved_if(
                ok,
                json!({ "m": m, "j": j, "radius": r, "expected": expected }),
            )
        }
        "radius-bounds" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            radius_bounds(m, j, opts)
        }
        "kernel-distance" => {
            let (name, w) = p.matrix(max)?;
            let n = w.order();
            let mut rows = Vec::new();
            let mut status = Status::ProvedInstance;
            for s in divisors(w.weight() as u64) {
                let l = transform::lambda_ws(&w, s)?;
                let axes = (0..n).all(|i| {
                    let mut e = vec![0; n];
                    e[i] = s as i64;
                    l.contains(&e)
                });
                let d = l.min_manhattan_distance(b.node_budget);
                let st = judge_distance(d.bounds(), d.exact(), s);
                status = status.max(if axes { st } else { Status::Failed });
                rows.push(json!({
                    "s": s,
                    "volume": l.volume().to_string(),
                    "min_distance": distance_json(&d),
                    "axes_in_lattice": axes,
                }));
            }
            outcome(
                status,
                merge(matrix_info(&name, &w), json!({ "per_divisor": rows })),
            )
        }
        "kernel-trans" => {
            let (name, w) = p.matrix(max)?;
            let mut rows = Vec::new();
            let mut ok = true;
            for s in divisors(w.weight() as u64) {
                let r = transform::kernel_trans_check(&w, s)?;
                ok &= r;
                rows.push(json!({ "s": s, "holds": r }));
            }
            proved_if(
                ok,
                merge(matrix_info(&name, &w), json!({ "per_divisor": rows })),
            )
        }
        "lambda-w" => {
            let (name, w) = p.matrix(max)?;
            let top = transform::lambda_ws(&w, w.weight() as u64)? == transform::lambda_w(&w)?;
            let bottom = transform::lambda_ws(&w, 1)?
                == Lattice::canonicalize(&IntMatrix::identity(w.order()))?;
            proved_if(
                top && bottom,
                merge(
                    matrix_info(&name, &w),
                    json!({ "top_equals_row_lattice": top, "bottom_equals_zn": bottom }),
                ),
            )
        }
        "nesting" => {
            let (name, w) = p.matrix(max)?;
            let ds = divisors(w.weight() as u64);
            let mut pairs = Vec::new();
            let mut ok = true;
            for &s1 in &ds {
                for &s2 in ds.iter().filter(|&&s2| s2 > s1 && s2 % s1 == 0) {
                    let r = transform::nesting_check(&w, s1, s2)?;
                    ok &= r;
                    pairs.push(json!([s1, s2, r]));
                }
            }
            proved_if(ok, merge(matrix_info(&name, &w), json!({ "pairs": pairs })))
        }
        "hadamard-class" => {
            let (name, w) = p.matrix(max)?;
            let s = p.u64("s")?;
            let c = transform::hadamard_lee_distance_class(&w, s, b)?;
            let status = match c.holds {
                Some(true) => Status::ProvedInstance,
                Some(false) => Status::Failed,
                None => Status::SkippedBudget,
            };
            outcome(
                status,
                merge(
                    matrix_info(&name, &w),
                    json!({
                        "s": s,
                        "min_lee_distance": code_distance_json(&c.distance),
                        "expected": c.expected,
                    }),
                ),
            )
        }
        "einc" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let r = transform::einc_check(m, j, max)?;
            proved_if(
                r.contained,
                json!({ "m": m, "j": j, "contained": r.contained }),
            )
        }
        "einc-equality" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let r = transform::einc_check(m, j, max)?;
            outcome(
                Status::ConjectureOutcome,
                json!({ "m": m, "j": j, "contained": r.contained, "equal": r.equal }),
            )
        }
        "reverse-duality" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let r = transform::reverse_duality_check(m, j, max)?;
            proved_if(
                r.image_equal && r.row_multiples && r.complementary_weights,
                json!({ "m": m, "j": j, "result": r }),
            )
        }
        "divisibility" => {
            let (m, j) = (p.u32("m")?, p.u32("j")?);
            let ok = transform::divisibility_check(m, j, max)?;
            proved_if(ok, json!({ "m": m, "j": j, "divisible": ok }))
        }
        "continuous-involution" => {
            let (name, w) = p.matrix(max)?;
            let samples = p.u64("samples")?;
            let span = p.u64_or("span", 1000)? as i64;
            continuous_involution(&name, &w, samples, span, opts.seed)
        }
        "discrete-involution" => {
            let (name, w) = p.matrix(max)?;
            let samples = p.u64("samples")?;
            let span = p.u64_or("span", 1000)? as i64;
            let t = DiscreteTransform::new(&w, b)?;
            let mut rng = seeded_rng(opts.seed);
            let n = w.order();
            let mut failures = 0u64;
            for _ in 0..samples {
                let x: Vec<i64> = (0..n).map(|_| rng.random_range(-span..=span)).collect();
                if t.apply(&t.apply(&x)) != x {
                    failures += 1;
                }
            }
            proved_if(
                failures == 0,
                merge(
                    matrix_info(&name, &w),
                    json!({ "samples": samples, "span": span, "failures": failures, "rho": t.covering_radius() }),
                ),
            )
        }
        "box-experiment" => {
            let (name, w) = p.matrix(max)?;
            let radius = p.u64("radius")?;
            let centers = p.u64("centers")?;
            let span = p.u64_or("span", 20)? as i64;
            let t = DiscreteTransform::new(&w, b)?;
            let mut rng = seeded_rng(opts.seed);
            let mut runs = Vec::new();
            let mut ok = true;
            for _ in 0..centers {
                let c = transform::random_center(w.order(), span, &mut rng);
                let r = transform::bounding_box_experiment(&t, &name, radius, &c, b.enum_budget)?;
                ok &= r.pass;
                runs.push(json!({
                    "center": r.center,
                    "points": r.points,
                    "expected_points": r.expected_points,
                    "max_extent": r.extents.iter().max(),
                    "pass": r.pass,
                }));
            }
            let values = merge(
                matrix_info(&name, &w),
                json!({
                    "d": t.d(),
                    "rho": t.covering_radius(),
                    "radius": radius,
                    "bound": 2 * ((radius + t.covering_radius() as u64) / t.d())
                        + 2 * t.covering_radius() as u64 + 1,
                    "runs": runs,
                }),
            );
            outcome(
                if ok {
                    Status::BoundRespected
                } else {
                    Status::Failed
                },
                values,
            )
        }
        "cross-polytope" => {
            let (name, w) = p.matrix(max)?;
            let radius = p.u64("radius")?;
            let budget = p.u64_or("sample_budget", 200_000)?;
            let r = transform::cross_polytope_check(&w, radius, budget, opts.seed)?;
            let ok = r.inside && r.vertices_tight;
            outcome(
                if ok {
                    Status::BoundRespected
                } else {
                    Status::Failed
                },
                merge(matrix_info(&name, &w), json!({ "report": r })),
            )
        }
        "volume-preservation" => {
            let m = p.u32("m")?;
            let h = sylvester_hadamard(m, max)?;
            let n = h.order();
            let d = h
                .weight_root()
                .ok_or_else(|| Error::precondition("weight is not a perfect square"))?;
            let mut lattices = vec![
                (
                    "Z^n".to_string(),
                    Lattice::canonicalize(&IntMatrix::identity(n))?,
                ),
                (
                    "D Z^n".to_string(),
                    Lattice::canonicalize(&IntMatrix::scalar(n, d as i64))?,
                ),
            ];
            for j in 0..=m {
                lattices.push((format!("lambda({m},{j})"), sylvester::lambda_mj(m, j, max)?));
            }
            let mut rows = Vec::new();
            let mut ok = true;
            for (label, l) in &lattices {
                let r = transform::volume_preservation_check(&h, l)?;
                ok &= r;
                rows.push(json!([label, r]));
            }
            proved_if(ok, json!({ "m": m, "d": d, "lattices": rows }))
        }
        "sphere-size" => {
            let (n, radius) = (p.u64("n")? as usize, p.u64("radius")?);
            let spec = transform::LeeSphereSpec {
                radius,
                center: vec![0; n],
            };
            let pts = transform::lee_sphere_points(&spec, b.enum_budget)?;
            let formula = transform::lee_sphere_size(n, radius);
            proved_if(
                formula == BigUint::from(pts.len()),
                json!({ "n": n, "radius": radius, "enumerated": pts.len(), "formula": formula.to_string() }),
            )
        }
        "oracle-code" => {
            let (info, l, m) = lattice_source(&p, opts)?;
            let code = l.reduce_to_code(m)?;
            let max_words = p.u64_or("max_words", 1_000_000)?;
            let size = code.cardinality();
            if size > BigUint::from(max_words) {
                return Err(Error::budget("oracle enumeration", size, max_words));
            }
            let mut ok = true;
            let mut per = serde_json::Map::new();
            for metric in [Metric::Lee, Metric::Hamming] {
                let e = code.min_weight_enumerate(metric, max_words)?;
                let q = code.min_weight_pruned(metric, b.node_budget)?;
                ok &= e.exact().is_some() && e.exact() == q.exact();
                per.insert(
                    format!("{metric:?}").to_lowercase(),
                    json!({ "enumerated": code_distance_json(&e), "pruned": code_distance_json(&q) }),
                );
            }
            proved_if(
                ok,
                merge(
                    info,
                    json!({ "modulus": m, "words": size.to_string(), "distances": per }),
                ),
            )
        }
        "cayley-atlas" => {
            let (info, l, _) = lattice_source(&p, opts)?;
            let atlas = l.coset_bfs(true, b.coset_budget)?;
            let triangle = atlas.check_cayley_triangle();
            let leaders = atlas.check_leaders();
            proved_if(
                triangle && leaders,
                merge(
                    info,
                    json!({
                        "cosets": atlas.len(),
                        "covering_radius": atlas.covering_radius(),
                        "cayley_triangle": triangle,
                        "leaders_valid": leaders,
                    }),
                ),
            )
        }
        other => Err(Error::precondition(format!("unknown op {other:?}"))),
    }
}

fn exact_radius(m: u32, j: u32, opts: &RunOptions) -> Result<Option<u64>> {
    if j == 0 {
        return Ok(Some(0));
    }
    match sylvester::covering_radius_exact(m, j, &opts.budgets) {
        Ok(r) => Ok(Some(r as u64)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `r(m,m) <= 3 r(m-1,m-1) + 2^{m-1}` and `r(m,j) <= r(m-1,j-1) + r(m-1,j)`,
/// evaluated on exact radii, plus the closed recursion where defined.
fn radius_bounds(m: u32, j: u32, opts: &RunOptions) -> Result<Outcome> {
    if m < 2 || j < 1 || j > m {
        return Err(Error::precondition(format!(
            "need 1 <= j <= m, m >= 2; got ({m},{j})"
        )));
    }
    let r = exact_radius(m, j, opts)?.ok_or_else(|| {
        Error::budget(
            "coset search",
            sylvester::volume_formula(m, j),
            opts.budgets.coset_budget,
        )
    })?;
    let recursion = if j == m {
        exact_radius(m - 1, m - 1, opts)?.map(|p| 3 * p + (1 << (m - 1)))
    } else {
        match (
            exact_radius(m - 1, j - 1, opts)?,
            exact_radius(m - 1, j, opts)?,
        ) {
            (Some(a), Some(c)) => Some(a + c),
            _ => None,
        }
    };
    let closed = sylvester::covering_radius_bound(m, j).ok();
    let ok = recursion.is_none_or(|v| r <= v) && closed.is_none_or(|v| r <= v);
    outcome(
        if ok {
            Status::BoundRespected
        } else {
            Status::Failed
        },
        json!({ "m": m, "j": j, "radius": r, "recursion": recursion, "closed_bound": closed }),
    )
}

fn continuous_involution(
    name: &str,
    w: &WeighingMatrix,
    samples: u64,
    span: i64,
    seed: u64,
) -> Result<Outcome> {
    let sign = transform::involution_sign(w)
        .ok_or_else(|| Error::precondition("matrix must be symmetric or skew-symmetric"))?;
    let n = w.order();
    let mut rng = seeded_rng(seed);
    let batch: Vec<Vec<i64>> = (0..samples)
        .map(|_| (0..n).map(|_| rng.random_range(-span..=span)).collect())
        .collect();
    let mut failures = 0u64;
    let mut checked = 0u64;
    for s in divisors(w.weight() as u64) {
        let units = (0..n).map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        });
        for x in units.chain(batch.iter().cloned()) {
            let img = transform::involution_image(w, s, &x)?;
            let expected: Vec<i64> = x.iter().map(|v| v * sign).collect();
            if img.to_integer().as_deref() != Some(&expected[..]) {
                failures += 1;
            }
            checked += 1;
        }
    }
    proved_if(
        failures == 0,
        merge(
            matrix_info(name, w),
            json!({ "sign": sign, "checked": checked, "samples": samples, "failures": failures }),
        ),
    )
}
