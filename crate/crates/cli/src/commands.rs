use std::path::Path;
use std::sync::Arc;

use qrel::finite::{FinSet, MeasurableRelation, SubsetLattice};
use qrel::intrinsic::{separate, BimoduleAction, Separation};
use qrel::io::{
    finset_from_json, lattice_from_json, lattice_to_json, matrix_to_json, pseudometric_from_json, relation_from_json,
    relation_to_json, subspace_to_json,
};
use qrel::linalg::format_rational;
use qrel::reflexivity::{masa_relative_closure, reflexive_closure, tensor_identity, SamplerConfig};
use qrel::torus::{check_translation_invariant_relation, CoeffFn, CoefficientSpace, TorusOperator};
use qrel::{Error, Exec, GaussRat, OperatorSubspace, QuantumRelation, Scalar, VonNeumannAlgebra};
use serde_json::{json, Value};

use crate::input::{operators, read_json, single, CliError, CliResult, Field, Operators};
use crate::{Ambient, Global, SpaceArg, Verb};

type Alg<S> = VonNeumannAlgebra<S>;
type Rel<S> = QuantumRelation<S>;

pub fn run<S: Field>(verb: &Verb, g: &Global) -> CliResult<Value> {
    let load = |path: &Path| -> CliResult<Operators<S>> { operators(&read_json(path)?, g.tol) };
    match verb {
        Verb::Commutant { input } => {
            let alg = algebra(&load(input)?)?;
            Ok(json!({"commutant": subspace_to_json(alg.commutant())}))
        }
        Verb::GenerateAlgebra { input } => {
            let alg = algebra(&load(input)?)?;
            Ok(json!({
                "algebra": subspace_to_json(alg.space()),
                "commutant": subspace_to_json(alg.commutant()),
                "diagonal_masa": alg.is_diagonal_masa(),
            }))
        }
        Verb::GenerateRelation { ambient: a, input } => {
            let amb = ambient::<S>(a, g)?;
            let ops = load(input)?;
            let rel = Rel::generate(&amb, &ops.matrices)?;
            Ok(relation_json(&rel))
        }
        Verb::Classify { ambient: a, input } => {
            let amb = ambient::<S>(a, g)?;
            let rel = relation(&amb, load(input)?)?;
            Ok(json!({
                "class": rel.classify().as_str(),
                "dim": rel.dim(),
                "reflexive": rel.is_reflexive(),
                "symmetric": rel.is_symmetric(),
                "antisymmetric": rel.is_antisymmetric(),
                "transitive": rel.is_transitive(),
            }))
        }
        Verb::Product { ambient: a, left, right } => {
            let amb = ambient::<S>(a, g)?;
            let v = relation(&amb, load(left)?)?;
            let w = relation(&amb, load(right)?)?;
            Ok(relation_json(&v.product(&w)?))
        }
        Verb::Transpose { ambient: a, input } => {
            let amb = ambient::<S>(a, g)?;
            Ok(relation_json(&relation(&amb, load(input)?)?.transpose()))
        }
        Verb::FromRelation { input } => {
            let (set, r) = relation_from_json(&read_json(input)?)?;
            let amb = Arc::new(Alg::<S>::diagonal(set.len()));
            let rel = Rel::from_classical(&amb, &r)?;
            let mut out = relation_to_json(&set, &r);
            out.as_object_mut()
                .expect("relations encode as objects")
                .remove("pairs");
            out["relation"] = subspace_to_json(rel.space());
            out["class"] = json!(r.classify().as_str());
            Ok(out)
        }
        Verb::ToRelation { input } => {
            let doc = read_json(input)?;
            let ops = operators::<S>(&doc, g.tol)?;
            let n = ops.size("the input")?;
            let set = match doc.as_object() {
                Some(o) if o.contains_key("atoms") => finset_from_json(o)?,
                _ => FinSet::counting(n),
            };
            if set.len() != n {
                return Err(Error::DimensionMismatch(set.len(), n).into());
            }
            let amb = Arc::new(Alg::diagonal(n));
            let r = relation(&amb, ops)?.to_classical()?;
            Ok(relation_to_json(&set, &r))
        }
        Verb::Lattice { input } => {
            let (_, r) = relation_from_json(&read_json(input)?)?;
            let l = SubsetLattice::of_preorder(&MeasurableRelation::from_relation(r))?;
            let mut out = lattice_to_json(&l);
            out["boolean"] = json!(l.is_boolean());
            Ok(out)
        }
        Verb::Preorder { input } => {
            let l = lattice_from_json(&read_json(input)?)?;
            let r = l.to_preorder().to_relation();
            let mut out = relation_to_json(&FinSet::counting(l.size()), &r);
            out["class"] = json!(r.classify().as_str());
            Ok(out)
        }
        Verb::Ideal { ambient: a, input } => {
            let amb = ambient::<S>(a, g)?;
            let rel = relation(&amb, load(input)?)?;
            let act = BimoduleAction::new(&amb);
            let ideal = act.ideal_of_relation(&rel)?;
            Ok(json!({
                "ideal": subspace_to_json(ideal.space()),
                "algebra_basis": basis_json(&act),
            }))
        }
        Verb::FromIdeal { ambient: a, input } => {
            let amb = ambient::<S>(a, g)?;
            let act = BimoduleAction::new(&amb);
            let doc = read_json(input)?;
            check_algebra_basis(&doc, &act, g.tol)?;
            let inner = doc.get("ideal").unwrap_or(&doc);
            let ops = operators::<S>(inner, g.tol)?;
            let m = act.m();
            let space = OperatorSubspace::try_span_in(m, m, &ops.matrices)?;
            let rel = act.relation_of_ideal(&act.ideal(space)?)?;
            Ok(relation_json(&rel))
        }
        Verb::Projection { ambient: a, input } => {
            let amb = ambient::<S>(a, g)?;
            let rel = relation(&amb, load(input)?)?;
            let act = BimoduleAction::new(&amb);
            let p = act.projection_form(&act.ideal_of_relation(&rel)?)?;
            let q = act.projection_of_relation(&rel)?;
            Ok(json!({
                "projection": matrix_to_json(&p),
                "complement": matrix_to_json(&q),
                "algebra_basis": basis_json(&act),
            }))
        }
        Verb::Separate {
            ambient: a,
            input,
            operator,
        } => {
            let amb = ambient::<S>(a, g)?;
            let rel = relation(&amb, load(input)?)?;
            let op = single(load(operator)?, "the operator file")?;
            match separate(&rel, &op)? {
                Separation::Member => Ok(json!({"member": true})),
                Separation::Witness(w) => {
                    let mut out = w.to_json();
                    out["member"] = json!(false);
                    Ok(out)
                }
            }
        }
        Verb::Reflexive {
            input,
            relative,
            tensor,
        } => {
            let ops = load(input)?;
            let n = ops.size("the input")?;
            let v = OperatorSubspace::try_span_in(n, n, &ops.matrices)?;
            if *relative {
                let closure = masa_relative_closure(&v, Exec::default())?;
                return Ok(json!({
                    "input": subspace_to_json(&v),
                    "closure": subspace_to_json(&closure),
                    "is_reflexive": closure == v,
                    "relative_to": "diagonal_masa",
                }));
            }
            let cfg = SamplerConfig::new(g.samples, g.seed);
            match tensor {
                Some(d) => {
                    if *d < 1 {
                        return Err(CliError::Usage("--tensor must be at least 1".into()));
                    }
                    let mut out = reflexive_closure(&tensor_identity(&v, *d)?, &cfg)?.to_json();
                    out["tensor"] = json!(d);
                    Ok(out)
                }
                None => Ok(reflexive_closure(&v, &cfg)?.to_json()),
            }
        }
        Verb::TorusFourier { input, k, l } => {
            let a = single_torus(&read_json(input)?)?;
            Ok(json!({"operator": a.fourier_term(*k, *l).to_json()}))
        }
        Verb::TorusCesaro { input, n } => {
            let a = single_torus(&read_json(input)?)?;
            let s = a.cesaro(*n);
            Ok(json!({
                "operator": s.to_json(),
                "norm": s.norm().ok(),
                "input_norm": a.norm().ok(),
            }))
        }
        Verb::TorusCheck { input, space, span } => {
            let ops = torus_operators(&read_json(input)?)?;
            let space = match space {
                SpaceArg::All => CoefficientSpace::All,
                SpaceArg::Finite => CoefficientSpace::FinitelySupported,
                SpaceArg::Constants => CoefficientSpace::Constants,
                SpaceArg::Span => {
                    let path = span.as_ref().expect("clap requires --span with --space span");
                    let doc = read_json(path)?;
                    let items = doc
                        .as_array()
                        .ok_or_else(|| Error::Parse("--span expects a list of coefficient functions".into()))?;
                    CoefficientSpace::Span(items.iter().map(CoeffFn::from_json).collect::<qrel::Result<_>>()?)
                }
            };
            let report = check_translation_invariant_relation(&ops, &space, g.tol);
            Ok(json!({
                "in_torus_algebra": ops.iter().map(|a| a.in_torus_algebra(g.tol)).collect::<Vec<_>>(),
                "relation": report.to_json(),
            }))
        }
        Verb::MetricLipschitz { input, function } => {
            let m = pseudometric_from_json(&read_json(input)?)?;
            let doc = read_json(function)?;
            let values = doc
                .as_array()
                .ok_or_else(|| Error::Parse("function must be a list of scalars".into()))?
                .iter()
                .map(GaussRat::from_json)
                .collect::<qrel::Result<Vec<_>>>()?;
            let lip = m.lipschitz(&values)?;
            Ok(match &lip.squared {
                Some(sq) => json!({
                    "finite": true,
                    "lipschitz_squared": format_rational(sq),
                    "lipschitz": lip.value(),
                }),
                None => json!({"finite": false, "lipschitz_squared": "inf", "lipschitz": "inf"}),
            })
        }
    }
}

fn algebra<S: Field>(ops: &Operators<S>) -> CliResult<Alg<S>> {
    let n = ops.size("the generator file")?;
    Ok(Alg::generate(n, &ops.matrices)?)
}

fn ambient<S: Field>(a: &Ambient, g: &Global) -> CliResult<Arc<Alg<S>>> {
    let positive = |n: usize, flag: &str| {
        if n == 0 {
            Err(CliError::Usage(format!("{flag} needs a positive size")))
        } else {
            Ok(n)
        }
    };
    let alg = match (&a.algebra, a.masa, a.full) {
        (Some(path), _, _) => algebra(&operators(&read_json(path)?, g.tol)?)?,
        (_, Some(n), _) => Alg::diagonal(positive(n, "--masa")?),
        (_, _, Some(n)) => Alg::full(positive(n, "--full")?),
        _ => unreachable!("clap requires one ambient flag"),
    };
    Ok(Arc::new(alg))
}

/// A stated basis must already be a bimodule; generators are closed up.
fn relation<S: Field>(amb: &Arc<Alg<S>>, ops: Operators<S>) -> CliResult<Rel<S>> {
    if let Some(n) = ops.n {
        if n != amb.n() {
            return Err(Error::DimensionMismatch(n, amb.n()).into());
        }
    }
    if ops.is_basis {
        let n = amb.n();
        Ok(Rel::from_subspace(amb, OperatorSubspace::try_span_in(n, n, &ops.matrices)?)?)
    } else {
        Ok(Rel::generate(amb, &ops.matrices)?)
    }
}

fn relation_json<S: Scalar>(rel: &Rel<S>) -> Value {
    json!({
        "relation": subspace_to_json(rel.space()),
        "class": rel.classify().as_str(),
    })
}

fn basis_json<S: Scalar>(act: &BimoduleAction<S>) -> Value {
    json!(act.basis().iter().map(matrix_to_json).collect::<Vec<_>>())
}

/// Coefficients are only meaningful against the basis they were written
/// in, so a listed basis must match the one computed here.
fn check_algebra_basis<S: Field>(doc: &Value, act: &BimoduleAction<S>, tol: f64) -> CliResult<()> {
    let Some(listed) = doc.get("algebra_basis") else {
        return Ok(());
    };
    let listed = operators::<S>(listed, tol)?.matrices;
    if listed.len() != act.m() || listed.iter().zip(act.basis()).any(|(a, b)| a != b) {
        return Err(Error::Invalid("the ideal was written over a different algebra basis".into()).into());
    }
    Ok(())
}

fn torus_operators(doc: &Value) -> CliResult<Vec<TorusOperator>> {
    let list = match doc {
        Value::Array(a) => a.as_slice(),
        Value::Object(o) => match o.get("operators").or_else(|| o.get("operator")) {
            Some(Value::Array(a)) => a.as_slice(),
            Some(one) => std::slice::from_ref(one),
            None => std::slice::from_ref(doc),
        },
        _ => return Err(Error::Parse("expected a torus operator".into()).into()),
    };
    Ok(list.iter().map(TorusOperator::from_json).collect::<qrel::Result<_>>()?)
}

fn single_torus(doc: &Value) -> CliResult<TorusOperator> {
    let mut ops = torus_operators(doc)?;
    if ops.len() != 1 {
        return Err(CliError::Usage(format!("expected one torus operator, found {}", ops.len())));
    }
    Ok(ops.remove(0))
}
