use std::collections::HashMap;

use super::{Element, GroupSpec, Symbol};
use crate::error::{Error, Result};

pub type NodeId = u32;

const UNSET: NodeId = NodeId::MAX;

/// Lazily materialized Cayley graph: interns elements as dense ids and caches
/// right multiplication by each symbol. Search code works on ids.
#[derive(Clone)]
pub struct Cayley<'g> {
    spec: &'g GroupSpec,
    index: HashMap<Element, NodeId>,
    elems: Vec<Element>,
    edges: Vec<NodeId>,
    stride: usize,
    limit: usize,
}

impl<'g> Cayley<'g> {
    pub fn new(spec: &'g GroupSpec) -> Self {
        let mut c = Cayley {
            spec,
            index: HashMap::new(),
            elems: Vec::new(),
            edges: Vec::new(),
            stride: spec.num_symbols(),
            limit: spec.max_ball(),
        };
        c.intern_unchecked(Element::identity());
        c
    }

    pub fn spec(&self) -> &'g GroupSpec {
        self.spec
    }

    pub fn identity(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn element(&self, id: NodeId) -> &Element {
        &self.elems[id as usize]
    }

    pub fn lookup(&self, e: &Element) -> Option<NodeId> {
        self.index.get(e).copied()
    }

    fn intern_unchecked(&mut self, e: Element) -> NodeId {
        if let Some(&id) = self.index.get(&e) {
            return id;
        }
        let id = self.elems.len() as NodeId;
        self.index.insert(e.clone(), id);
        self.elems.push(e);
        self.edges.extend(std::iter::repeat_n(UNSET, self.stride));
        id
    }

    pub fn intern(&mut self, e: Element) -> Result<NodeId> {
        if self.elems.len() >= self.limit && !self.index.contains_key(&e) {
            return Err(Error::ResourceCap(format!(
                "Cayley graph cache exceeds {} elements",
                self.limit
            )));
        }
        Ok(self.intern_unchecked(e))
    }

    /// `id · s`.
    pub fn step(&mut self, id: NodeId, s: Symbol) -> Result<NodeId> {
        let slot = id as usize * self.stride + s as usize;
        let cached = self.edges[slot];
        if cached != UNSET {
            return Ok(cached);
        }
        let mut w = self.elems[id as usize].word().to_vec();
        w.push(s);
        let target = self.intern(self.spec.normal_form(&w))?;
        self.edges[slot] = target;
        let back = target as usize * self.stride + self.spec.alphabet().inverse(s) as usize;
        self.edges[back] = id;
        Ok(target)
    }

    /// `id · w` for a word `w`.
    pub fn walk(&mut self, id: NodeId, word: &[Symbol]) -> Result<NodeId> {
        word.iter().try_fold(id, |cur, &s| self.step(cur, s))
    }

    /// Distinct neighbours of `id`, in symbol order.
    pub fn neighbors(&mut self, id: NodeId) -> Result<Vec<NodeId>> {
        let mut out = Vec::with_capacity(self.stride);
        for s in 0..self.stride as Symbol {
            let t = self.step(id, s)?;
            if !out.contains(&t) {
                out.push(t);
            }
        }
        Ok(out)
    }

    pub fn length(&self, id: NodeId) -> usize {
        self.elems[id as usize].len()
    }
}
