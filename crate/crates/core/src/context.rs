//! A basis table together with its Hall trees and frozen closure set.

use std::sync::Arc;

use crate::basis::{BasisKind, BasisTable};
use crate::error::Result;
use crate::trees::{closure_set, closure_set_with_swaps, hall_trees, HallTrees, TreeRegistry, TreeSet};

/// Everything needed to evaluate Lie series on trees for one basis and degree bound.
#[derive(Debug)]
pub struct Context {
    table: BasisTable,
    registry: TreeRegistry,
    hall: HallTrees,
    set: Arc<TreeSet>,
    hall_local: Vec<usize>,
}

impl Context {
    pub fn new(kind: BasisKind, max_degree: usize) -> Self {
        Self::assemble(BasisTable::build(kind, max_degree), false)
    }

    /// Like [`Context::new`], with the tree set also closed under colour swaps.
    pub fn with_swaps(kind: BasisKind, max_degree: usize) -> Self {
        Self::assemble(BasisTable::build(kind, max_degree), true)
    }

    /// Builds from an externally supplied table after validating it.
    pub fn from_table(table: BasisTable, swaps: bool) -> Result<Self> {
        table.validate()?;
        Ok(Self::assemble(table, swaps))
    }

    fn assemble(table: BasisTable, swaps: bool) -> Self {
        let mut registry = TreeRegistry::new();
        let hall = hall_trees(&table, &mut registry);
        let n = table.max_degree();
        let set = if swaps {
            closure_set_with_swaps(&hall, &table, &mut registry, n)
        } else {
            closure_set(&hall, &table, &mut registry, n)
        };
        registry.clear_split_cache();
        let hall_local = (1..=table.len())
            .map(|i| set.local_index(hall.tree(i)).expect("Hall tree in closure"))
            .collect();
        Context { table, registry, hall, set: Arc::new(set), hall_local }
    }

    pub fn table(&self) -> &BasisTable {
        &self.table
    }

    pub fn kind(&self) -> BasisKind {
        self.table.kind()
    }

    pub fn max_degree(&self) -> usize {
        self.table.max_degree()
    }

    pub fn registry(&self) -> &TreeRegistry {
        &self.registry
    }

    pub fn hall(&self) -> &HallTrees {
        &self.hall
    }

    pub fn set(&self) -> &Arc<TreeSet> {
        &self.set
    }

    /// Local index in the tree set of the Hall tree `u_i`.
    pub fn hall_local(&self, i: usize) -> usize {
        self.hall_local[i - 1]
    }
}
