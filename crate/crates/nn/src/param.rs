//! Named, versioned parameter storage shared by all networks.

use std::collections::BTreeMap;

use crate::error::NnError;

/// Current on-disk format version. Bumped whenever the checkpoint layout
/// changes incompatibly.
pub const PARAMSET_VERSION: u32 = 1;

/// One named tensor plus its gradient slot of identical shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
    pub grad: Vec<f64>,
}

impl Entry {
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// Flat collection of named f64 tensors with parallel gradient slots.
///
/// The `revision` counter increments on every optimizer step or bulk
/// mutation; forward caches record the revision they were built against so
/// a backward pass through stale activations can be rejected.
#[derive(Debug, Clone)]
pub struct ParamSet {
    pub version: u32,
    revision: u64,
    entries: BTreeMap<String, Entry>,
}

impl Default for ParamSet {
    fn default() -> Self {
        Self::new()
    }
}

impl ParamSet {
    pub fn new() -> Self {
        ParamSet {
            version: PARAMSET_VERSION,
            revision: 0,
            entries: BTreeMap::new(),
        }
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn bump_revision(&mut self) {
        self.revision += 1;
    }

    pub fn register(&mut self, name: &str, dims: Vec<usize>, data: Vec<f64>) -> Result<(), NnError> {
        let n: usize = dims.iter().product();
        assert_eq!(n, data.len(), "shape/data length mismatch for {name}");
        if self.entries.contains_key(name) {
            return Err(NnError::DuplicateTensor(name.to_string()));
        }
        let grad = vec![0.0; n];
        self.entries.insert(name.to_string(), Entry { dims, data, grad });
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn get(&self, name: &str) -> &Entry {
        self.entries
            .get(name)
            .unwrap_or_else(|| panic!("no tensor named `{name}`"))
    }

    pub fn try_get(&self, name: &str) -> Result<&Entry, NnError> {
        self.entries
            .get(name)
            .ok_or_else(|| NnError::UnknownTensor(name.to_string()))
    }

    pub fn get_mut(&mut self, name: &str) -> &mut Entry {
        self.entries
            .get_mut(name)
            .unwrap_or_else(|| panic!("no tensor named `{name}`"))
    }

    pub fn data(&self, name: &str) -> &[f64] {
        &self.get(name).data
    }

    pub fn grad_mut(&mut self, name: &str) -> &mut [f64] {
        &mut self.get_mut(name).grad
    }

    /// Iterate entries in deterministic (lexicographic) name order.
    pub fn iter(&self) -> impl Iterator<Item = (&String, &Entry)> {
        self.entries.iter()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = (&String, &mut Entry)> {
        self.entries.iter_mut()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn param_count(&self) -> usize {
        self.entries.values().map(|e| e.len()).sum()
    }

    pub fn zero_grads(&mut self) {
        for e in self.entries.values_mut() {
            e.grad.iter_mut().for_each(|g| *g = 0.0);
        }
    }

    /// Zero the gradient slots of every tensor whose name starts with
    /// `prefix`.
    pub fn zero_grads_prefixed(&mut self, prefix: &str) {
        for (name, e) in self.entries.iter_mut() {
            if name.starts_with(prefix) {
                e.grad.iter_mut().for_each(|g| *g = 0.0);
            }
        }
    }

    /// Copy parameter values from `src/{src_prefix}*` into
    /// `self/{dst_prefix}*`. Shapes must match. Used to initialize target
    /// networks.
    pub fn copy_prefixed(&mut self, src: &ParamSet, src_prefix: &str, dst_prefix: &str) {
        let mut copied = 0usize;
        for (name, e) in src.entries.iter() {
            if let Some(rest) = name.strip_prefix(src_prefix) {
                let dst = format!("{dst_prefix}{rest}");
                let tgt = self
                    .entries
                    .get_mut(&dst)
                    .unwrap_or_else(|| panic!("no target tensor `{dst}`"));
                assert_eq!(tgt.dims, e.dims, "shape mismatch copying into `{dst}`");
                tgt.data.copy_from_slice(&e.data);
                copied += 1;
            }
        }
        assert!(copied > 0, "copy_prefixed matched nothing for `{src_prefix}`");
        self.revision += 1;
    }

    /// Polyak step: `dst <- tau * src + (1 - tau) * dst` over matching
    /// suffixes of the two prefixes.
    pub fn polyak_prefixed(&mut self, src_prefix: &str, dst_prefix: &str, tau: f64) {
        let src_names: Vec<String> = self
            .entries
            .keys()
            .filter(|n| n.starts_with(src_prefix))
            .cloned()
            .collect();
        assert!(!src_names.is_empty(), "polyak matched nothing for `{src_prefix}`");
        for name in src_names {
            let rest = name.strip_prefix(src_prefix).unwrap().to_string();
            let src_data = self.entries.get(&name).unwrap().data.clone();
            let dst = format!("{dst_prefix}{rest}");
            let tgt = self
                .entries
                .get_mut(&dst)
                .unwrap_or_else(|| panic!("no target tensor `{dst}`"));
            for (t, s) in tgt.data.iter_mut().zip(&src_data) {
                *t = tau * s + (1.0 - tau) * *t;
            }
        }
        self.revision += 1;
    }
}
