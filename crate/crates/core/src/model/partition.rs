use super::ModelError;

/// Assignment of the `n` individuals of a society to `m` disjoint groups.
///
/// Every group has at least three members and group ids are `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupPartition {
    sizes: Vec<usize>,
    membership: Vec<usize>,
}

impl GroupPartition {
    /// Numbers nodes consecutively: the first `sizes[0]` nodes form group 0,
    /// the next `sizes[1]` form group 1, and so on.
    pub fn contiguous(sizes: &[usize]) -> Result<Self, ModelError> {
        let membership = sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &s)| std::iter::repeat(g).take(s))
            .collect();
        Self::from_membership(membership)
    }

    pub fn from_membership(membership: Vec<usize>) -> Result<Self, ModelError> {
        let m = match membership.iter().max() {
            Some(&g) => g + 1,
            None => return Err(ModelError::NoGroups),
        };
        let mut sizes = vec![0usize; m];
        for &g in &membership {
            sizes[g] += 1;
        }
        if let Some(g) = sizes.iter().position(|&s| s == 0) {
            return Err(ModelError::InvalidMembership(format!(
                "group ids must be contiguous, group {g} is empty"
            )));
        }
        if let Some((group, &size)) = sizes.iter().enumerate().find(|(_, &s)| s < 3) {
            return Err(ModelError::GroupTooSmall { group, size });
        }
        Ok(Self { sizes, membership })
    }

    pub fn n(&self) -> usize {
        self.membership.len()
    }

    pub fn m(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, group: usize) -> usize {
        self.sizes[group]
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    #[inline]
    pub fn group_of(&self, node: usize) -> usize {
        self.membership[node]
    }

    #[inline]
    pub fn same_group(&self, i: usize, j: usize) -> bool {
        self.membership[i] == self.membership[j]
    }

    /// Members of `group` in increasing node order.
    pub fn members(&self, group: usize) -> impl Iterator<Item = usize> + '_ {
        self.membership
            .iter()
            .enumerate()
            .filter(move |(_, &g)| g == group)
            .map(|(i, _)| i)
    }
}
