use std::collections::HashMap;

use crate::hypergraph::VertexId;

/// A symbolic value assigned to a bag vertex. The owning problem module
/// maps codes to text (`red`, `true`, `in`, a local rank, ...).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Value(pub u16);

/// Reference from a row to the child row(s) it was derived from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extension {
    Single(u32),
    Pair(u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    /// One value per bag vertex, aligned with [`Table::bag`].
    pub values: Vec<Value>,
    pub extensions: Vec<Extension>,
    /// Total cost of the best partial solution behind this row.
    pub cost: Option<u64>,
    /// Cost contributed by this row's own assignment.
    pub current_cost: Option<u64>,
}

impl Row {
    pub fn new(values: Vec<Value>) -> Self {
        Row {
            values,
            extensions: Vec::new(),
            cost: None,
            current_cost: None,
        }
    }

    pub fn with_extension(mut self, ext: Extension) -> Self {
        self.extensions.push(ext);
        self
    }

    pub fn with_costs(mut self, cost: u64, current_cost: u64) -> Self {
        self.cost = Some(cost);
        self.current_cost = Some(current_cost);
        self
    }
}

/// How rows with equal assignments are merged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeMode {
    /// Union the extension sets.
    Union,
    /// Keep the lower cost and only the extensions achieving it.
    MinCost,
}

/// The rows computed for one decomposition node, sorted by assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    bag: Vec<VertexId>,
    rows: Vec<Row>,
}

impl Table {
    /// The table of an empty leaf: one empty row with cost 0.
    pub fn leaf() -> Self {
        Table {
            bag: Vec::new(),
            rows: vec![Row::new(Vec::new()).with_costs(0, 0)],
        }
    }

    pub fn bag(&self) -> &[VertexId] {
        &self.bag
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Row {
        &self.rows[i]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Position of `v` in the bag.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.bag.binary_search(&v).ok()
    }

    pub fn value(&self, row: usize, v: VertexId) -> Option<Value> {
        self.position(v).map(|p| self.rows[row].values[p])
    }
}

/// Accumulates rows for one node, merging rows with equal assignments.
#[derive(Debug)]
pub struct TableBuilder {
    bag: Vec<VertexId>,
    mode: MergeMode,
    track_pointers: bool,
    rows: Vec<Row>,
    index: HashMap<Vec<Value>, usize>,
}

impl TableBuilder {
    pub fn new(bag: Vec<VertexId>, mode: MergeMode, track_pointers: bool) -> Self {
        TableBuilder {
            bag,
            mode,
            track_pointers,
            rows: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn bag(&self) -> &[VertexId] {
        &self.bag
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Inserts `row`, merging it into an existing row with the same
    /// assignment according to the builder's [`MergeMode`].
    pub fn merge_row(&mut self, mut row: Row) {
        if !self.track_pointers {
            row.extensions.clear();
        }
        let Some(&at) = self.index.get(&row.values) else {
            self.index.insert(row.values.clone(), self.rows.len());
            self.rows.push(row);
            return;
        };
        let existing = &mut self.rows[at];
        match self.mode {
            MergeMode::Union => {
                existing.extensions.append(&mut row.extensions);
                if let (Some(old), Some(new)) = (existing.cost, row.cost) {
                    if new < old {
                        existing.cost = row.cost;
                        existing.current_cost = row.current_cost;
                    }
                }
            }
            MergeMode::MinCost => match row.cost.cmp(&existing.cost) {
                std::cmp::Ordering::Less => *existing = row,
                std::cmp::Ordering::Equal => existing.extensions.append(&mut row.extensions),
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Sorts rows by assignment and normalizes extension sets.
    pub fn finish(self) -> Table {
        let mut rows = self.rows;
        for row in &mut rows {
            row.extensions.sort_unstable();
            row.extensions.dedup();
        }
        rows.sort_unstable_by(|a, b| a.values.cmp(&b.values));
        Table { bag: self.bag, rows }
    }
}
