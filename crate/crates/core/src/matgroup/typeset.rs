use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Subset of the index set I = {0, ..., n}, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TypeSet(pub u32);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);

    /// I = {0, ..., n}.
    pub fn full(n: usize) -> Self {
        TypeSet((1u32 << (n + 1)) - 1)
    }

    pub fn single(i: usize) -> Self {
        TypeSet(1 << i)
    }

    pub fn from_slice(items: &[usize]) -> Self {
        TypeSet(items.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(self, i: usize) -> Self {
        TypeSet(self.0 | 1 << i)
    }

    pub fn remove(self, i: usize) -> Self {
        TypeSet(self.0 & !(1 << i))
    }

    pub fn union(self, o: Self) -> Self {
        TypeSet(self.0 | o.0)
    }

    pub fn intersect(self, o: Self) -> Self {
        TypeSet(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        TypeSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, ordered by size then bitmask.
    pub fn subsets(self) -> Vec<TypeSet> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = self.0;
        loop {
            out.push(TypeSet(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.0;
        }
        out.sort_by_key(|t| (t.len(), t.0));
        out
    }

    /// Image under a map of indices.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Self {
        TypeSet(self.iter().fold(0, |acc, i| acc | 1 << f(i)))
    }
}

impl fmt::Debug for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl Serialize for TypeSet {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TypeSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(de)?;
        Ok(TypeSet::from_slice(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_ordered() {
        let s = TypeSet::full(2).subsets();
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], TypeSet::EMPTY);
        assert_eq!(s[7], TypeSet::full(2));
        assert_eq!(TypeSet::from_slice(&[0, 2]).to_string(), "{0,2}");
    }
}
