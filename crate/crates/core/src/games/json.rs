//! JSON game files.
//!
//! ```json
//! {"group": {"factors": [3]}, "mA": 2, "mB": 2,
//!  "q": [[[1,4],[1,4]],[[1,4],[1,4]]],
//!  "f": [[0,0],[0,1]]}
//! ```
//!
//! `group` is `{"factors": [n1, ...]}` or `{"field": {"p": p, "r": r}}`.
//! `q` is `"uniform"`, an `mA x mB` matrix whose entries are numbers or
//! `[num, den]` pairs, or a flat row-major list of `mA * mB` pairs.
//! Entries of `f` are canonical element indices or coordinate lists
//! (field elements: coefficients, constant term first). Unknown keys are
//! rejected.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Distribution, LinearGame, QTable};
use crate::algebra::{FiniteAbelianGroup, FiniteField, OutputGroup};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    group: GroupSpec,
    #[serde(rename = "mA")]
    m_a: usize,
    #[serde(rename = "mB")]
    m_b: usize,
    q: Value,
    f: Vec<Vec<ElementSpec>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<FieldSpec>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FieldSpec {
    p: u64,
    r: u32,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum ElementSpec {
    Index(usize),
    Coords(Vec<u64>),
}

fn build_group(spec: GroupSpec) -> Result<OutputGroup> {
    match (spec.factors, spec.field) {
        (Some(factors), None) => Ok(OutputGroup::Product(FiniteAbelianGroup::new(factors)?)),
        (None, Some(FieldSpec { p, r })) => Ok(OutputGroup::Field(FiniteField::new(p, r)?)),
        _ => Err(Error::Parse("group needs exactly one of \"factors\" or \"field\"".into())),
    }
}

/// A probability given as a JSON number or a `[num, den]` pair.
pub(crate) enum Prob {
    Float(f64),
    Rational(i64, i64),
}

pub(crate) fn parse_prob(v: &Value) -> Result<Prob> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(Prob::Float)
            .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::Array(pair) if pair.len() == 2 => {
            let num = pair[0].as_i64().ok_or_else(|| Error::Parse(format!("bad numerator {}", pair[0])))?;
            let den = pair[1].as_i64().ok_or_else(|| Error::Parse(format!("bad denominator {}", pair[1])))?;
            Ok(Prob::Rational(num, den))
        }
        other => Err(Error::Parse(format!("expected a probability, found {other}"))),
    }
}

fn parse_q(q: &Value, m_a: usize, m_b: usize) -> Result<QTable> {
    if q.as_str() == Some("uniform") {
        return Ok(QTable::Uniform);
    }
    let outer = q.as_array().ok_or_else(|| Error::Parse("q must be \"uniform\" or an array".into()))?;
    // the two shapes differ in outer length unless mB == 1, where row lengths differ
    let entries: Vec<&Value> = if outer.len() == m_a && outer.iter().all(|r| r.as_array().is_some_and(|r| r.len() == m_b)) {
        outer.iter().flat_map(|r| r.as_array().expect("checked").iter()).collect()
    } else if outer.len() == m_a * m_b {
        outer.iter().collect()
    } else {
        return Err(Error::RaggedTable(format!("q must be {m_a}x{m_b} or a flat list of {} entries", m_a * m_b)));
    };
    let probs: Vec<Prob> = entries.into_iter().map(parse_prob).collect::<Result<_>>()?;
    let all_rational = probs.iter().all(|p| matches!(p, Prob::Rational(..)));
    let mut rows_exact = Vec::with_capacity(m_a);
    let mut rows_float = Vec::with_capacity(m_a);
    for u in 0..m_a {
        let mut re = Vec::with_capacity(m_b);
        let mut rf = Vec::with_capacity(m_b);
        for v in 0..m_b {
            match probs[u * m_b + v] {
                Prob::Rational(num, den) => {
                    if den <= 0 {
                        return Err(Error::InvalidProbability(format!("denominator {den} at ({u},{v})")));
                    }
                    if num < 0 {
                        return Err(Error::NegativeProbability { u, v, value: num as f64 / den as f64 });
                    }
                    re.push(Ratio::new(num as u64, den as u64));
                    rf.push(num as f64 / den as f64);
                }
                Prob::Float(x) => rf.push(x),
            }
        }
        rows_exact.push(re);
        rows_float.push(rf);
    }
    Ok(if all_rational {
        QTable::Exact(rows_exact)
    } else {
        QTable::Float(rows_float)
    })
}

pub fn game_from_json(text: &str) -> Result<LinearGame> {
    let file: GameFile = serde_json::from_str(text)?;
    let group = build_group(file.group)?;
    if file.f.len() != file.m_a || file.f.iter().any(|r| r.len() != file.m_b) {
        return Err(Error::RaggedTable(format!("f must be {}x{}", file.m_a, file.m_b)));
    }
    let f: Vec<Vec<usize>> = file
        .f
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    ElementSpec::Index(i) if *i < group.order() => Ok(*i),
                    ElementSpec::Index(i) => Err(Error::NotMember(format!("element index {i}"))),
                    ElementSpec::Coords(c) => group.index_of_coords(c),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let q = parse_q(&file.q, file.m_a, file.m_b)?;
    LinearGame::from_tables(group, q, &f)
}

pub(crate) fn group_to_json(group: &OutputGroup) -> Value {
    match group {
        OutputGroup::Product(g) => json!({ "factors": g.factors() }),
        OutputGroup::Field(f) => json!({ "field": { "p": f.characteristic(), "r": f.degree() } }),
    }
}

/// Canonical serialization: `q` as a matrix of reduced `[num, den]` pairs
/// (or floats), `f` as element indices.
pub fn game_to_json(game: &LinearGame) -> Value {
    let (m_a, m_b) = (game.m_a(), game.m_b());
    let q: Vec<Vec<Value>> = (0..m_a)
        .map(|u| {
            (0..m_b)
                .map(|v| match game.distribution() {
                    Distribution::Exact { .. } => {
                        let r = game.distribution().ratio(u * m_b + v).expect("exact");
                        json!([r.numer(), r.denom()])
                    }
                    Distribution::Float(_) => json!(game.q(u, v)),
                })
                .collect()
        })
        .collect();
    let f: Vec<Vec<usize>> = (0..m_a).map(|u| (0..m_b).map(|v| game.f(u, v)).collect()).collect();
    json!({
        "group": group_to_json(game.group()),
        "mA": m_a,
        "mB": m_b,
        "q": q,
        "f": f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::chsh_d;

    const CHSH: &str = r#"{"group": {"factors": [2]}, "mA": 2, "mB": 2,
        "q": [[[1,4],[1,4]],[[1,4],[1,4]]], "f": [[0,0],[0,1]]}"#;

    #[test]
    fn parses_chsh() {
        let g = game_from_json(CHSH).unwrap();
        assert!(g.distribution().is_exact());
        assert_eq!(g.f(1, 1), 1);
    }

    #[test]
    fn q_forms_agree() {
        let flat = r#"{"group": {"factors": [2]}, "mA": 2, "mB": 2,
            "q": [[1,4],[1,4],[1,4],[1,4]], "f": [[0,0],[0,1]]}"#;
        let floats = r#"{"group": {"factors": [2]}, "mA": 2, "mB": 2,
            "q": [[0.25,0.25],[0.25,0.25]], "f": [[0,0],[0,1]]}"#;
        let uniform = r#"{"group": {"factors": [2]}, "mA": 2, "mB": 2, "q": "uniform", "f": [[0,0],[0,1]]}"#;
        let a = game_from_json(CHSH).unwrap();
        assert_eq!(game_from_json(flat).unwrap(), a);
        assert_eq!(game_from_json(uniform).unwrap(), a);
        assert!(!game_from_json(floats).unwrap().distribution().is_exact());
    }

    #[test]
    fn field_game_with_coordinates() {
        let text = r#"{"group": {"field": {"p": 2, "r": 2}}, "mA": 1, "mB": 2,
            "q": [[[1,2],[1,2]]], "f": [[[1,1], 2]]}"#;
        let g = game_from_json(text).unwrap();
        assert_eq!(g.f(0, 0), 3);
        assert_eq!(g.f(0, 1), 2);
    }

    #[test]
    fn rejections() {
        let unknown = CHSH.replace("\"mA\"", "\"extra\": 1, \"mA\"");
        assert!(matches!(game_from_json(&unknown), Err(Error::Parse(_))));
        assert!(matches!(game_from_json("{not json"), Err(Error::Parse(_))));
        let bad_sum = CHSH.replace("[[1,4],[1,4]],[[1,4],[1,4]]", "[[1,4],[1,4]],[[1,4],[1,5]]");
        assert!(matches!(game_from_json(&bad_sum), Err(Error::NotNormalized(_))));
        let neg = CHSH.replace("[[1,4],[1,4]],[[1,4],[1,4]]", "[[3,4],[-1,4]],[[1,4],[1,4]]");
        assert!(matches!(game_from_json(&neg), Err(Error::NegativeProbability { .. })));
        let ragged = CHSH.replace("[[0,0],[0,1]]", "[[0,0],[0]]");
        assert!(matches!(game_from_json(&ragged), Err(Error::RaggedTable(_))));
        let outside = CHSH.replace("[[0,0],[0,1]]", "[[0,0],[0,2]]");
        assert!(matches!(game_from_json(&outside), Err(Error::NotMember(_))));
        let both = CHSH.replace("{\"factors\": [2]}", "{\"factors\": [2], \"field\": {\"p\": 2, \"r\": 1}}");
        assert!(game_from_json(&both).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        for g in [game_from_json(CHSH).unwrap(), chsh_d(3, 1).unwrap(), chsh_d(2, 2).unwrap()] {
            let text = game_to_json(&g).to_string();
            assert_eq!(game_from_json(&text).unwrap(), g);
        }
    }
}
