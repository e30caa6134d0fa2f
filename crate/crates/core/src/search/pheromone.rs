/// Per-item pheromone, indexed by item id. Total mass is always 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PheromoneTable {
    tau: Vec<f64>,
}

impl PheromoneTable {
    pub fn uniform(n_items: usize) -> Self {
        PheromoneTable {
            tau: vec![1.0 / n_items as f64; n_items],
        }
    }

    pub fn get(&self, item_id: usize) -> f64 {
        self.tau[item_id]
    }

    pub fn values(&self) -> &[f64] {
        &self.tau
    }

    pub fn total(&self) -> f64 {
        self.tau.iter().sum()
    }

    /// Scales the listed items by `1 + quality`, then renormalizes so the
    /// unlisted items lose mass.
    pub fn update(&mut self, item_ids: impl IntoIterator<Item = usize>, quality: f64) {
        for id in item_ids {
            self.tau[id] *= 1.0 + quality;
        }
        let total = self.total();
        for t in &mut self.tau {
            *t /= total;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reinforcing_one_of_four() {
        let mut t = PheromoneTable::uniform(4);
        t.update([2], 1.0);
        assert!((t.get(2) - 0.4).abs() < 1e-15);
        assert!((t.get(0) - 0.2).abs() < 1e-15);
        assert!((t.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_quality_leaves_table() {
        let mut t = PheromoneTable::uniform(3);
        let before = t.clone();
        t.update([0, 1], 0.0);
        assert_eq!(t, before);
    }
}
