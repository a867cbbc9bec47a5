//! Wire formats. Scalars travel as decimal strings ("3/4", "5"), fields as
//! "Q" or "Fp:7", matrices as [["a","b"],["c","d"]], points as ["x","y"].
//! `serde_json` keeps object keys sorted, so serialization is canonical and
//! byte-stable.

use serde_json::{json, Map, Value};

use crate::binform::BinaryForm;
use crate::config::{ConfigAutGroup, PointConfiguration};
use crate::curve::{CurveIsoWitness, HyperellipticCurve};
use crate::error::Error;
use crate::moebius::{Matrix2, MoebiusMap, ProjectivePoint};
use crate::picard::{DescentReport, PicardReport, ProbeDescent};
use crate::scalar::{FieldTag, Scalar};
use crate::strata::LemmaReport;
use crate::Result;

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

pub fn field_to_json(tag: FieldTag) -> Value {
    Value::String(tag.to_string())
}

pub fn field_from_json(v: &Value) -> Result<FieldTag> {
    v.as_str()
        .ok_or_else(|| bad("field tag must be a string"))?
        .parse()
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn scalar_from_json(v: &Value, tag: FieldTag) -> Result<Scalar> {
    Scalar::parse(
        v.as_str().ok_or_else(|| bad("scalar must be a string"))?,
        tag,
    )
}

pub fn point_to_json(p: &ProjectivePoint) -> Value {
    json!([p.x().to_string(), p.y().to_string()])
}

pub fn point_from_json(v: &Value, tag: FieldTag) -> Result<ProjectivePoint> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad("point must be a two-element array"))?;
    ProjectivePoint::new(
        scalar_from_json(&arr[0], tag)?,
        scalar_from_json(&arr[1], tag)?,
    )
}

pub fn matrix_to_json(m: &Matrix2) -> Value {
    json!([
        [m.a.to_string(), m.b.to_string()],
        [m.c.to_string(), m.d.to_string()]
    ])
}

pub fn matrix_from_json(v: &Value, tag: FieldTag) -> Result<Matrix2> {
    let rows = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad("matrix must be a 2x2 array"))?;
    let mut entries = Vec::with_capacity(4);
    for row in rows {
        let cells = row
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad("matrix row must have two entries"))?;
        for cell in cells {
            entries.push(scalar_from_json(cell, tag)?);
        }
    }
    Ok(Matrix2::new(
        entries[0].clone(),
        entries[1].clone(),
        entries[2].clone(),
        entries[3].clone(),
    ))
}

pub fn moebius_to_json(m: &MoebiusMap) -> Value {
    matrix_to_json(m.matrix())
}

pub fn moebius_from_json(v: &Value, tag: FieldTag) -> Result<MoebiusMap> {
    MoebiusMap::new(matrix_from_json(v, tag)?)
}

pub fn configuration_to_json(c: &PointConfiguration) -> Value {
    json!({
        "field": field_to_json(c.tag()),
        "points": c.points().iter().map(point_to_json).collect::<Vec<_>>(),
    })
}

pub fn configuration_from_json(v: &Value) -> Result<PointConfiguration> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("configuration must be an object"))?;
    let tag = field_from_json(obj.get("field").ok_or_else(|| bad("missing field"))?)?;
    let points = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing points array"))?
        .iter()
        .map(|p| point_from_json(p, tag))
        .collect::<Result<Vec<_>>>()?;
    PointConfiguration::new(tag, points)
}

pub fn form_to_json(f: &BinaryForm) -> Value {
    json!({
        "genus": f.genus(),
        "field": field_to_json(f.tag()),
        "coeffs": f.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

pub fn form_from_json(v: &Value) -> Result<BinaryForm> {
    let obj = v.as_object().ok_or_else(|| bad("form must be an object"))?;
    let genus = obj
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing genus"))? as usize;
    let tag = field_from_json(obj.get("field").ok_or_else(|| bad("missing field"))?)?;
    let coeffs = obj
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing coeffs array"))?
        .iter()
        .map(|c| scalar_from_json(c, tag))
        .collect::<Result<Vec<_>>>()?;
    BinaryForm::new(genus, coeffs)
}

pub fn curve_to_json(c: &HyperellipticCurve) -> Value {
    json!({
        "genus": c.genus(),
        "field": field_to_json(c.tag()),
        "coeffs": c.form().coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "twist": c.twist().to_string(),
    })
}

pub fn curve_from_json(v: &Value) -> Result<HyperellipticCurve> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("curve must be an object"))?;
    let form = form_from_json(v)?;
    let tag = form.tag();
    let twist = scalar_from_json(obj.get("twist").ok_or_else(|| bad("missing twist"))?, tag)?;
    HyperellipticCurve::new(form, twist)
}

pub fn group_to_json(g: &ConfigAutGroup) -> Value {
    json!({
        "order": g.order(),
        "elements": g
            .elements
            .iter()
            .map(|(m, perm)| {
                json!({
                    "matrix": moebius_to_json(m),
                    "cycle_type": perm.cycle_type(),
                    "permutation": perm.images().iter().map(|i| i + 1).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn witness_to_json(w: &CurveIsoWitness) -> Value {
    json!({
        "moebius": moebius_to_json(&w.moebius),
        "scale": w.scale.to_string(),
        "scale_class": w.scale_class.to_string(),
    })
}

pub fn lemma_report_to_json(r: &LemmaReport) -> Value {
    json!({
        "n_max": r.n_max,
        "total_failures": r.total_failures(),
        "by_cycle_type": r
            .entries
            .iter()
            .map(|e| {
                json!({
                    "n": e.n,
                    "cycle_type": e.cycle_type,
                    "tested": e.tested,
                    "witnesses_found": e.witnesses_found,
                    "failures": e.failures,
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn probe_to_json(p: &ProbeDescent, trace: bool) -> Value {
    let mut obj = Map::new();
    obj.insert("stabilizer_order".into(), json!(p.stabilizer_order));
    obj.insert("allowed_twists".into(), json!(p.allowed_twists));
    if trace {
        obj.insert(
            "characters".into(),
            json!(p
                .characters
                .iter()
                .map(|c| json!({
                    "order": c.order,
                    "exponent": c.exponent,
                    "scalar": c.scalar.to_string(),
                }))
                .collect::<Vec<_>>()),
        );
    }
    Value::Object(obj)
}

pub fn descent_to_json(r: &DescentReport, trace: bool) -> Value {
    json!({
        "genus": r.g,
        "prime": r.prime,
        "modulus": r.modulus,
        "cyclic_probe": probe_to_json(&r.cyclic_probe, trace),
        "dihedral_probe": probe_to_json(&r.dihedral_probe, trace),
        "descent_subgroup": r.descent_subgroup,
        "subgroup_order": r.descent_subgroup.len(),
    })
}

pub fn picard_report_to_json(r: &PicardReport, trace: bool) -> Value {
    json!({
        "genus": r.g,
        "class_group_order": r.class_group_order,
        "stack_picard_order": r.stack_picard_order,
        "divisor_stack_order": r.divisor_stack_order,
        "comparison_index": r.comparison_index,
        "descent_subgroup_order": r.descent_subgroup_order,
        "hodge_exponent": r.hodge_exponent,
        "hodge_index": r.hodge_index,
        "generator": r.generator,
        "descent": descent_to_json(&r.descent, trace),
    })
}
