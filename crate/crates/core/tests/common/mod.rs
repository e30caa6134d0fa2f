#![allow(dead_code)]

use std::path::PathBuf;

use esmamds::data::{discretize_equal_frequency, load_dataset, Dataset, Description, Item, Schema};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn toy() -> Dataset {
    let f = std::fs::File::open(data_path("toy.csv")).unwrap();
    load_dataset(f, &Schema::new("time", "event"))
        .unwrap()
        .dataset
}

pub fn veteran() -> Dataset {
    let f = std::fs::File::open(data_path("veteran.csv")).unwrap();
    let schema = Schema {
        exclude: vec!["".into()],
        ..Schema::new("time", "status")
    };
    let ds = load_dataset(f, &schema).unwrap().dataset;
    let cols = ["karno", "diagtime", "age"].map(String::from);
    discretize_equal_frequency(&ds, &cols, 5).unwrap().0
}

/// One attribute `a` with four values, 20 records each. Values 1 and 2
/// share the same short survival times, values 0 and 3 the same long ones.
pub fn four_groups() -> Dataset {
    let mut rows = Vec::new();
    let mut times = Vec::new();
    for v in 0..4 {
        for k in 0..20 {
            rows.push(vec![v.to_string()]);
            let base = if v == 1 || v == 2 { 1.0 } else { 60.0 };
            times.push(base + k as f64);
        }
    }
    Dataset::from_labels(&["a"], &rows, times, vec![true; 80]).unwrap()
}

pub fn desc(items: &[(usize, usize)]) -> Description {
    Description::from_items(items.iter().map(|&(a, v)| Item::new(a, v)))
}
