//! Append-only construction record with JSON export.

use serde::Serialize;

use crate::exactnum::ExactReal;
use crate::geom::{Line, Point};

pub type ObjId = usize;

#[derive(Clone, Debug)]
pub enum Object {
    Point(Point),
    Line(Line),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Point(_) => "point",
            Object::Line(_) => "line",
        }
    }

    fn coords(&self) -> Vec<&ExactReal> {
        match self {
            Object::Point(p) => vec![&p.x, &p.y],
            Object::Line(l) => vec![l.a(), l.b(), l.c()],
        }
    }
}

/// One construction step: an operation tag, input ids, output ids, and
/// literal parameters for steps that introduce data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub op: String,
    pub args: Vec<ObjId>,
    pub out: Vec<ObjId>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Trace {
    steps: Vec<Step>,
    objects: Vec<Object>,
    labels: Vec<Option<String>>,
}

/// Expressions whose tree form exceeds this many nodes are summarized.
const EXPR_NODE_LIMIT: usize = 20_000;
const DECIMAL_DIGITS: usize = 50;

#[derive(Serialize)]
struct JsonObject<'a> {
    id: ObjId,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    exact: Vec<String>,
    decimal: Vec<String>,
}

#[derive(Serialize)]
struct JsonTrace<'a> {
    steps: &'a [Step],
    objects: Vec<JsonObject<'a>>,
}

fn exact_text(x: &ExactReal) -> String {
    let n = x.tree_size(EXPR_NODE_LIMIT);
    if n >= EXPR_NODE_LIMIT {
        format!("<expression with more than {EXPR_NODE_LIMIT} nodes>")
    } else {
        x.expr_string()
    }
}

fn decimal_text(x: &ExactReal) -> String {
    x.approx_string(DECIMAL_DIGITS).unwrap_or_else(|e| format!("undetermined ({e})"))
}

impl Trace {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn object(&self, id: ObjId) -> Option<&Object> {
        self.objects.get(id)
    }

    pub fn label(&self, id: ObjId) -> Option<&str> {
        self.labels.get(id).and_then(|l| l.as_deref())
    }

    pub fn set_label(&mut self, id: ObjId, label: &str) {
        if let Some(slot) = self.labels.get_mut(id) {
            *slot = Some(label.to_string());
        }
    }

    pub(crate) fn push_object(&mut self, obj: Object) -> ObjId {
        self.objects.push(obj);
        self.labels.push(None);
        self.objects.len() - 1
    }

    pub(crate) fn push_step(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Number of steps with the given operation tag.
    pub fn count_op(&self, op: &str) -> usize {
        self.steps.iter().filter(|s| s.op == op).count()
    }

    /// Deterministic JSON: steps in order, then every object with its exact
    /// coordinates and 50-digit decimal approximations.
    pub fn to_json(&self) -> String {
        let objects = self
            .objects
            .iter()
            .enumerate()
            .map(|(id, obj)| {
                let coords = obj.coords();
                JsonObject {
                    id,
                    kind: obj.kind(),
                    label: self.label(id),
                    exact: coords.iter().map(|c| exact_text(c)).collect(),
                    decimal: coords.iter().map(|c| decimal_text(c)).collect(),
                }
            })
            .collect();
        let doc = JsonTrace { steps: &self.steps, objects };
        serde_json::to_string_pretty(&doc).expect("trace serializes")
    }
}
