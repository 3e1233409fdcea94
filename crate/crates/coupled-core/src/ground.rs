/// A finite ground set of densely indexed elements.
///
/// Elements are the indices `0..size()`; `label(e)` carries whatever the
/// domain attaches to element `e` (a task-assignment triplet, a robot/time
/// pair, ...). Selections everywhere in this crate are element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet<L> {
    labels: Vec<L>,
}

impl<L> GroundSet<L> {
    pub fn new(labels: Vec<L>) -> Self {
        Self { labels }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, element: usize) -> &L {
        &self.labels[element]
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &L)> {
        self.labels.iter().enumerate()
    }
}
