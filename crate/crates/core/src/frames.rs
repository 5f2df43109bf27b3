//! Frames `(T, S)`: a finite node set with an arbitrary binary relation, and
//! the relation-preserving node maps between them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

struct Inner {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    rel: Vec<(usize, usize)>,
    matrix: Vec<bool>,
    succ: Vec<Vec<usize>>,
}

/// A finite frame. Nodes are addressed by their position in `nodes()`.
#[derive(Clone)]
pub struct Frame {
    inner: Arc<Inner>,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("nodes", &self.inner.nodes)
            .field("rel", &self.rel_labels())
            .finish()
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.nodes == other.inner.nodes && self.inner.rel == other.inner.rel)
    }
}

impl Eq for Frame {}

/// Builds a frame from node labels and related label pairs.
pub fn make_frame<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<Frame> {
    let nodes: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
    let mut index = HashMap::with_capacity(nodes.len());
    for (i, l) in nodes.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    let lookup = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| Error::UnknownNode(s.to_string()))
    };
    let rel = pairs
        .iter()
        .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Frame::from_parts(nodes, rel))
}

impl Frame {
    pub(crate) fn from_parts(nodes: Vec<String>, mut rel: Vec<(usize, usize)>) -> Frame {
        let n = nodes.len();
        rel.sort_unstable();
        rel.dedup();
        let mut matrix = vec![false; n * n];
        let mut succ = vec![Vec::new(); n];
        for &(i, k) in &rel {
            matrix[i * n + k] = true;
            succ[i].push(k);
        }
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Frame {
            inner: Arc::new(Inner {
                nodes,
                index,
                rel,
                matrix,
                succ,
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.inner.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.inner.nodes
    }

    pub fn node(&self, label: &str) -> Option<usize> {
        self.inner.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.node(label)
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn label(&self, node: usize) -> &str {
        &self.inner.nodes[node]
    }

    pub fn related(&self, i: usize, k: usize) -> bool {
        self.inner.matrix[i * self.len() + k]
    }

    /// All `k` with `i S k`, ascending.
    pub fn successors(&self, i: usize) -> &[usize] {
        &self.inner.succ[i]
    }

    /// Related pairs in lexicographic order.
    pub fn rel(&self) -> &[(usize, usize)] {
        &self.inner.rel
    }

    pub fn rel_labels(&self) -> Vec<(String, String)> {
        self.inner
            .rel
            .iter()
            .map(|&(i, k)| (self.label(i).to_string(), self.label(k).to_string()))
            .collect()
    }

    fn check_node(&self, node: usize) -> Result<usize> {
        if node < self.len() {
            Ok(node)
        } else {
            Err(Error::UnknownNode(format!("#{node}")))
        }
    }
}

/// True iff the node map `t` (indexed by source node) sends every related
/// pair of `source` to a related pair of `target`.
pub fn is_frame_hom(t: &[usize], source: &Frame, target: &Frame) -> Result<bool> {
    if t.len() != source.len() {
        return Err(Error::ArityMismatch {
            expected: source.len(),
            got: t.len(),
        });
    }
    for &k in t {
        target.check_node(k)?;
    }
    Ok(source.rel().iter().all(|&(i, k)| target.related(t[i], t[k])))
}

/// A relation-preserving node map.
#[derive(Clone, PartialEq, Eq)]
pub struct FrameHom {
    source: Frame,
    target: Frame,
    table: Vec<usize>,
}

impl fmt::Debug for FrameHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let map: Vec<String> = (0..self.source.len())
            .map(|i| format!("{}->{}", self.source.label(i), self.target.label(self.table[i])))
            .collect();
        f.debug_tuple("FrameHom").field(&map).finish()
    }
}

impl FrameHom {
    pub fn new(source: &Frame, target: &Frame, table: Vec<usize>) -> Result<Self> {
        if !is_frame_hom(&table, source, target)? {
            let &(i, k) = source
                .rel()
                .iter()
                .find(|&&(i, k)| !target.related(table[i], table[k]))
                .expect("a violating pair exists");
            return Err(Error::NotFrameHom(
                source.label(i).to_string(),
                source.label(k).to_string(),
            ));
        }
        Ok(Self::trusted(source, target, table))
    }

    /// Builds a hom from `(source label, target label)` assignments.
    pub fn from_labels<S: AsRef<str>>(source: &Frame, target: &Frame, map: &[(S, S)]) -> Result<Self> {
        let mut table = vec![None; source.len()];
        for (a, b) in map {
            table[source.require(a.as_ref())?] = Some(target.require(b.as_ref())?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::UnknownNode(format!("no image for `{}`", source.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, table)
    }

    pub(crate) fn trusted(source: &Frame, target: &Frame, table: Vec<usize>) -> Self {
        debug_assert_eq!(is_frame_hom(&table, source, target), Ok(true));
        FrameHom {
            source: source.clone(),
            target: target.clone(),
            table,
        }
    }

    pub fn identity(frame: &Frame) -> Self {
        Self::trusted(frame, frame, (0..frame.len()).collect())
    }

    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, node: usize) -> usize {
        self.table[node]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &FrameHom) -> Result<FrameHom> {
        if first.target != self.source {
            return Err(Error::CarrierMismatch(
                "composed frame maps do not share a middle frame".into(),
            ));
        }
        let table = first.table.iter().map(|&k| self.table[k]).collect();
        Ok(Self::trusted(&first.source, &self.target, table))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j3() -> Frame {
        make_frame(
            &["f2", "f3", "f4"],
            &[("f2", "f3"), ("f3", "f2"), ("f4", "f4")],
        )
        .unwrap()
    }

    #[test]
    fn builds_three_node_frame() {
        let j = j3();
        assert_eq!(j.len(), 3);
        assert!(j.related(0, 1) && j.related(1, 0) && j.related(2, 2));
        assert!(!j.related(0, 0));
        assert_eq!(j.successors(2), &[2]);
    }

    #[test]
    fn rejects_unknown_and_duplicate_nodes() {
        assert!(matches!(
            make_frame(&["x"], &[("x", "y")]).unwrap_err(),
            Error::UnknownNode(_)
        ));
        assert!(matches!(
            make_frame::<&str>(&["x", "x"], &[]).unwrap_err(),
            Error::DuplicateLabel(_)
        ));
    }

    #[test]
    fn collapse_needs_reflexive_target() {
        let j = j3();
        let loop_ = make_frame(&["*"], &[("*", "*")]).unwrap();
        let bare = make_frame::<&str>(&["*"], &[]).unwrap();
        assert!(is_frame_hom(&[0, 0, 0], &j, &loop_).unwrap());
        assert!(!is_frame_hom(&[0, 0, 0], &j, &bare).unwrap());
        assert!(is_frame_hom(&[0, 1, 2], &j, &j).unwrap());
        assert!(matches!(
            FrameHom::new(&j, &bare, vec![0, 0, 0]).unwrap_err(),
            Error::NotFrameHom(..)
        ));
        assert!(matches!(
            is_frame_hom(&[0, 0, 5], &j, &loop_).unwrap_err(),
            Error::UnknownNode(_)
        ));
    }

    #[test]
    fn composition_with_identity() {
        let j = j3();
        let loop_ = make_frame(&["*"], &[("*", "*")]).unwrap();
        let t = FrameHom::new(&j, &loop_, vec![0, 0, 0]).unwrap();
        assert_eq!(t.after(&FrameHom::identity(&j)).unwrap(), t);
        assert_eq!(FrameHom::identity(&loop_).after(&t).unwrap(), t);
    }
}
