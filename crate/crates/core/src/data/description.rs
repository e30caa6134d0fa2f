use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Dataset, Extent, Item};
use crate::error::{Error, Result};

/// A conjunction of per-attribute value-set constraints.
///
/// Stored as the set of its items; every attribute that owns at least one
/// item is constrained to exactly those values. The empty set is the
/// universal description.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Description {
    items: BTreeSet<Item>,
}

impl Description {
    pub fn universal() -> Self {
        Description::default()
    }

    pub fn from_items(items: impl IntoIterator<Item = Item>) -> Self {
        Description {
            items: items.into_iter().collect(),
        }
    }

    /// The item set of the description (union of all constrained values).
    pub fn items(&self) -> &BTreeSet<Item> {
        &self.items
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    /// Number of conditions, i.e. constrained attributes.
    pub fn len(&self) -> usize {
        let mut count = 0;
        let mut last = None;
        for item in &self.items {
            if last != Some(item.attribute) {
                count += 1;
                last = Some(item.attribute);
            }
        }
        count
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn attributes(&self) -> BTreeSet<usize> {
        self.items.iter().map(|i| i.attribute).collect()
    }

    pub fn constrains(&self, attribute: usize) -> bool {
        self.items.iter().any(|i| i.attribute == attribute)
    }

    pub fn values(&self, attribute: usize) -> impl Iterator<Item = usize> + '_ {
        self.items
            .iter()
            .filter(move |i| i.attribute == attribute)
            .map(|i| i.value)
    }

    /// Conditions in attribute order as `(attribute, sorted values)`.
    pub fn conditions(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for item in &self.items {
            match out.last_mut() {
                Some((a, values)) if *a == item.attribute => values.push(item.value),
                _ => out.push((item.attribute, vec![item.value])),
            }
        }
        out
    }

    pub fn insert(&mut self, item: Item) {
        self.items.insert(item);
    }

    pub fn with_item(&self, item: Item) -> Self {
        let mut out = self.clone();
        out.insert(item);
        out
    }

    /// Copy of this description with the condition on `attribute` dropped.
    pub fn without_attribute(&self, attribute: usize) -> Self {
        Description {
            items: self
                .items
                .iter()
                .filter(|i| i.attribute != attribute)
                .copied()
                .collect(),
        }
    }

    pub fn same_attributes(&self, other: &Description) -> bool {
        self.attributes() == other.attributes()
    }

    pub fn covers(&self, dataset: &Dataset, record: usize) -> bool {
        self.conditions().iter().all(|(a, values)| {
            let v = dataset.value(record, *a);
            values.contains(&v)
        })
    }

    /// Canonical text form: `name IN {"v1", "v2"} AND other IN {"v3"}`,
    /// attributes in schema order and values in domain order. The universal
    /// description renders as `ALL`.
    pub fn render(&self, dataset: &Dataset) -> String {
        if self.is_empty() {
            return "ALL".to_string();
        }
        let mut out = String::new();
        for (k, (a, values)) in self.conditions().into_iter().enumerate() {
            if k > 0 {
                out.push_str(" AND ");
            }
            let attr = dataset.attribute(a);
            let _ = write!(out, "{} IN {{", attr.name);
            for (j, v) in values.iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                push_quoted(&mut out, &attr.values[*v]);
            }
            out.push('}');
        }
        out
    }

    /// Parses the canonical text form against a dataset's vocabulary.
    pub fn parse(text: &str, dataset: &Dataset) -> Result<Self> {
        let pairs = parse_conditions(text)?;
        let mut items = BTreeSet::new();
        let mut seen = BTreeSet::new();
        for (name, values) in pairs {
            let a = dataset
                .attribute_index(&name)
                .ok_or_else(|| Error::import(text, format!("unknown attribute `{name}`")))?;
            if !seen.insert(a) {
                return Err(Error::import(
                    text,
                    format!("attribute `{name}` constrained twice"),
                ));
            }
            for value in values {
                let item = dataset.item_by_label(&name, &value).ok_or_else(|| {
                    Error::import(
                        text,
                        format!("unknown value `{value}` for attribute `{name}`"),
                    )
                })?;
                items.insert(item);
            }
        }
        Ok(Description { items })
    }
}

fn push_quoted(out: &mut String, value: &str) {
    out.push('"');
    for c in value.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}

/// Splits the text form into `(attribute, values)` pairs without resolving
/// names.
fn parse_conditions(text: &str) -> Result<Vec<(String, Vec<String>)>> {
    let trimmed = text.trim();
    if trimmed == "ALL" {
        return Ok(Vec::new());
    }
    let chars: Vec<char> = trimmed.chars().collect();
    let mut pos = 0;
    let mut out = Vec::new();
    let malformed = |pos: usize, what: &str| {
        Error::import(
            format!("`{trimmed}` char {pos}"),
            format!("malformed conjunction: {what}"),
        )
    };
    loop {
        let rest: String = chars[pos..].iter().collect();
        let Some(split) = rest.find(" IN {") else {
            return Err(malformed(pos, "expected `<attribute> IN {...}`"));
        };
        let name = rest[..split].trim().to_string();
        if name.is_empty() {
            return Err(malformed(pos, "empty attribute name"));
        }
        pos += rest[..split].chars().count() + " IN {".len();
        let mut values = Vec::new();
        loop {
            while pos < chars.len() && chars[pos].is_whitespace() {
                pos += 1;
            }
            match chars.get(pos) {
                Some('"') => {
                    pos += 1;
                    let mut value = String::new();
                    loop {
                        match chars.get(pos) {
                            Some('\\') => {
                                let c = *chars
                                    .get(pos + 1)
                                    .ok_or_else(|| malformed(pos, "dangling escape"))?;
                                value.push(c);
                                pos += 2;
                            }
                            Some('"') => {
                                pos += 1;
                                break;
                            }
                            Some(c) => {
                                value.push(*c);
                                pos += 1;
                            }
                            None => return Err(malformed(pos, "unterminated value")),
                        }
                    }
                    values.push(value);
                    while pos < chars.len() && chars[pos].is_whitespace() {
                        pos += 1;
                    }
                    match chars.get(pos) {
                        Some(',') => pos += 1,
                        Some('}') => {
                            pos += 1;
                            break;
                        }
                        _ => return Err(malformed(pos, "expected `,` or `}`")),
                    }
                }
                _ => return Err(malformed(pos, "expected a quoted value")),
            }
        }
        out.push((name, values));
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        if pos == chars.len() {
            return Ok(out);
        }
        let rest: String = chars[pos..].iter().collect();
        if !rest.starts_with("AND ") {
            return Err(malformed(pos, "expected `AND`"));
        }
        pos += 4;
    }
}

/// A description together with the records it covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub description: Description,
    pub extent: Extent,
}

impl Subgroup {
    pub fn coverage(&self) -> usize {
        self.extent.len()
    }

    /// Items carried by at least one covered record.
    pub fn items_gamma(&self, dataset: &Dataset) -> BTreeSet<Item> {
        dataset
            .items()
            .iter()
            .filter(|item| dataset.item_extent(**item).intersects(&self.extent))
            .copied()
            .collect()
    }

    /// Records outside the subgroup.
    pub fn complement(&self) -> Extent {
        self.extent.complement()
    }
}

/// Records whose value on every constrained attribute lies in that
/// attribute's value set.
pub fn cover(description: &Description, dataset: &Dataset) -> Subgroup {
    let mut extent = dataset.all();
    for (a, values) in description.conditions() {
        let mut allowed = Extent::empty(dataset.n_records());
        for v in values {
            allowed.union_with(dataset.item_extent(Item::new(a, v)));
        }
        extent.intersect_with(&allowed);
    }
    Subgroup {
        description: description.clone(),
        extent,
    }
}
