//! One report structure rendered either as indented text or as JSON, so the
//! two views always carry the same fields.

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Flag(bool),
    Int(i64),
    Real(f64),
    Ints(Vec<i64>),
    Texts(Vec<String>),
    Group(Report),
    Groups(Vec<Report>),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    fields: Vec<(String, Field)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, label: &str, value: Field) -> &mut Self {
        self.fields.push((label.to_string(), value));
        self
    }

    pub fn text(&mut self, label: &str, value: impl ToString) -> &mut Self {
        self.add(label, Field::Text(value.to_string()))
    }

    pub fn flag(&mut self, label: &str, value: bool) -> &mut Self {
        self.add(label, Field::Flag(value))
    }

    pub fn int(&mut self, label: &str, value: i64) -> &mut Self {
        self.add(label, Field::Int(value))
    }

    pub fn real(&mut self, label: &str, value: f64) -> &mut Self {
        self.add(label, Field::Real(value))
    }

    pub fn ints(&mut self, label: &str, value: &[i64]) -> &mut Self {
        self.add(label, Field::Ints(value.to_vec()))
    }

    pub fn texts<T: ToString>(&mut self, label: &str, value: &[T]) -> &mut Self {
        self.add(
            label,
            Field::Texts(value.iter().map(T::to_string).collect()),
        )
    }

    pub fn group(&mut self, label: &str, value: Report) -> &mut Self {
        self.add(label, Field::Group(value))
    }

    pub fn groups(&mut self, label: &str, value: Vec<Report>) -> &mut Self {
        self.add(label, Field::Groups(value))
    }

    /// Appends every field of `other`.
    pub fn extend(&mut self, other: Report) -> &mut Self {
        self.fields.extend(other.fields);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (label, field) in &self.fields {
            map.insert(json_key(label), field_json(field));
        }
        Value::Object(map)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        for (label, field) in &self.fields {
            match field {
                Field::Group(r) => {
                    out.push_str(&format!("{pad}{label}:\n"));
                    r.write_text(out, depth + 1);
                }
                Field::Groups(rs) => {
                    out.push_str(&format!("{pad}{label}:"));
                    if rs.is_empty() {
                        out.push_str(" none\n");
                        continue;
                    }
                    out.push('\n');
                    for (i, r) in rs.iter().enumerate() {
                        out.push_str(&format!("{pad}  [{}]\n", i + 1));
                        r.write_text(out, depth + 2);
                    }
                }
                other => out.push_str(&format!("{pad}{label}: {}\n", scalar_text(other))),
            }
        }
    }
}

/// "SFK possible" becomes "sfk_possible".
pub fn json_key(label: &str) -> String {
    let mut key = String::new();
    for ch in label.chars() {
        if ch.is_ascii_alphanumeric() {
            key.push(ch.to_ascii_lowercase());
        } else if !key.ends_with('_') && !key.is_empty() {
            key.push('_');
        }
    }
    key.trim_end_matches('_').to_string()
}

fn scalar_text(field: &Field) -> String {
    match field {
        Field::Text(s) => s.clone(),
        Field::Flag(b) => if *b { "yes" } else { "no" }.to_string(),
        Field::Int(n) => n.to_string(),
        Field::Real(x) => format!("{x:e}"),
        Field::Ints(v) if v.is_empty() => "none".to_string(),
        Field::Ints(v) => v.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
        Field::Texts(v) if v.is_empty() => "none".to_string(),
        Field::Texts(v) => v.join(", "),
        Field::Group(_) | Field::Groups(_) => unreachable!("groups are rendered as blocks"),
    }
}

fn field_json(field: &Field) -> Value {
    match field {
        Field::Text(s) => Value::String(s.clone()),
        Field::Flag(b) => Value::Bool(*b),
        Field::Int(n) => Value::from(*n),
        Field::Real(x) => serde_json::Number::from_f64(*x)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(x.to_string())),
        Field::Ints(v) => Value::from(v.clone()),
        Field::Texts(v) => Value::from(v.clone()),
        Field::Group(r) => r.to_json(),
        Field::Groups(rs) => Value::Array(rs.iter().map(Report::to_json).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_snake_case() {
        assert_eq!(json_key("SFK possible"), "sfk_possible");
        assert_eq!(json_key("Kernel (positive)"), "kernel_positive");
        assert_eq!(json_key("Blow-up count"), "blow_up_count");
    }

    #[test]
    fn text_and_json_carry_the_same_fields() {
        let mut inner = Report::new();
        inner.int("count", 2);
        let mut r = Report::new();
        r.text("Fraction", "1/2")
            .flag("Crepant", true)
            .ints("Chain", &[-2, -1, -2])
            .group("Inner", inner);
        let text = r.to_text();
        assert!(text.contains("Crepant: yes"));
        assert!(text.contains("Chain: -2 -1 -2"));
        assert!(text.contains("  count: 2"));
        let json = r.to_json();
        assert_eq!(json["crepant"], Value::Bool(true));
        assert_eq!(json["inner"]["count"], Value::from(2));
        assert_eq!(json.as_object().unwrap().len(), 4);
    }
}
