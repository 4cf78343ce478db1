//! Flat serializable records for the command line front end. Exact values
//! are strings (`p/q`, `(a+b*sqrt(d))/c`); `preview` fields carry truncated
//! decimals for reading only.

use serde::{Deserialize, Serialize};

use crate::approximation::Classification;
use crate::companions::{CompanionRef, Side};
use crate::eisenstein::{EisensteinPoint, LabeledStrip, Orientation, TrianglePath};
use crate::forest::ForestNode;
use crate::identities::McShaneSummary;
use crate::rational::Rational;

/// A value with its exact form and a decimal preview.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exact {
    pub exact: String,
    pub preview: String,
}

impl Exact {
    pub fn rational(x: &Rational, digits: usize) -> Self {
        Exact {
            exact: x.to_string(),
            preview: x.to_decimal(digits),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub n: String,
    pub path: String,
    pub depth: usize,
    pub x1: String,
    pub x2: String,
    pub x3: String,
    pub q1: String,
    pub q2: String,
    pub q3: String,
}

impl From<&ForestNode> for TripleRecord {
    fn from(node: &ForestNode) -> Self {
        let t = &node.triple;
        TripleRecord {
            n: node.path.base.to_string(),
            path: node.path.turns_string(),
            depth: node.path.depth(),
            x1: t.x1().to_string(),
            x2: t.x2().to_string(),
            x3: t.x3().to_string(),
            q1: t.q1().to_string(),
            q2: t.q2().to_string(),
            q3: t.q3().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanionRecord {
    pub base: String,
    pub side: Side,
    pub k: u32,
    pub value: String,
    pub preview: String,
    pub constant: String,
}

impl CompanionRecord {
    pub fn new(c: &CompanionRef, digits: usize) -> Self {
        let v = c.value();
        CompanionRecord {
            base: c.base().to_string(),
            side: c.side(),
            k: c.k(),
            value: v.to_string(),
            preview: v.to_decimal(digits),
            constant: crate::approximation::c_companion(c).to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub y: String,
    pub tag: String,
    pub constant: String,
    pub preview: String,
    pub argmins: Vec<String>,
    /// Markov fraction or companion base the classification rests on, or the
    /// approximant beating `1/3`.
    pub witness: Option<String>,
}

impl ClassificationRecord {
    pub fn new(y: &Rational, c: &Classification, digits: usize) -> Self {
        let best = c.best_approximation();
        let witness = match c {
            Classification::MarkovFraction(t) => Some(t.x2().to_string()),
            Classification::Companion(cr) => {
                Some(format!("{}:{}:{}", cr.base(), cr.side(), cr.k()))
            }
            Classification::Neither(_) => c.witness().map(|w| w.to_string()),
        };
        ClassificationRecord {
            y: y.to_string(),
            tag: c.tag().to_string(),
            constant: best.constant.to_string(),
            preview: best.constant.to_decimal(digits),
            argmins: best.argmins.iter().map(|a| a.to_string()).collect(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleRecord {
    pub anchor: EisensteinPoint,
    pub orientation: Orientation,
    pub vertices: [EisensteinPoint; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub vertex: EisensteinPoint,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripRecord {
    pub end: EisensteinPoint,
    pub triangles: Vec<TriangleRecord>,
    pub labels: Vec<LabelRecord>,
    pub terminal: String,
    pub differences: usize,
}

impl StripRecord {
    pub fn new(path: &TrianglePath, strip: &LabeledStrip) -> Self {
        StripRecord {
            end: path.end,
            triangles: path
                .triangles
                .iter()
                .map(|t| TriangleRecord {
                    anchor: t.anchor,
                    orientation: t.orientation,
                    vertices: t.vertices(),
                })
                .collect(),
            labels: strip
                .labels
                .iter()
                .map(|(v, l)| LabelRecord {
                    vertex: *v,
                    label: l.to_string(),
                })
                .collect(),
            terminal: strip.terminal().to_string(),
            differences: strip.differences,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McShaneRecord {
    pub depth: usize,
    pub bits: u32,
    pub terms: usize,
    pub lo: Exact,
    pub hi: Exact,
}

impl McShaneRecord {
    pub fn new(s: &McShaneSummary, digits: usize) -> Self {
        McShaneRecord {
            depth: s.depth,
            bits: s.bits,
            terms: s.terms,
            lo: Exact::rational(&s.lo, digits),
            hi: Exact::rational(&s.hi, digits),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximation::classify;
    use crate::eisenstein::{bent_path, label_path};
    use crate::forest::{enumerate_forest, ForestLimit};

    #[test]
    fn records_round_trip_json() {
        let node = enumerate_forest(0, ForestLimit::MaxDepth(1))
            .nth(1)
            .unwrap();
        let t = TripleRecord::from(&node);
        let back: TripleRecord = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(t, back);

        let y: Rational = "463/1120".parse().unwrap();
        let c = ClassificationRecord::new(&y, &classify(&y).unwrap(), 10);
        assert_eq!(c.tag, "companion");
        assert_eq!(c.witness.as_deref(), Some("2/5:R:3"));
        let back: ClassificationRecord =
            serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, back);

        let p = bent_path(2, 1, 3, Side::Right).unwrap();
        let s = StripRecord::new(&p, &label_path(&p).unwrap());
        assert_eq!(s.terminal, "463/1120");
        let back: StripRecord = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
    }
}
